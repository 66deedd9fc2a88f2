// SPDX-License-Identifier: Apache-2.0
//! `ortolog`: synthesis of PLA covers into networks of symmetric functions.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ortolog::cube::{Cover, MintermSet, PhaseVector, Pla};
use ortolog::decompose::{decompose, DecomposeOptions};
use ortolog::grid::{build_grid_dag, minimize_layout, render, RenderStyle, SearchMode, MAX_EXHAUSTIVE_LAYOUT};
use ortolog::netlist::{verify, Netlist, Verdict};
use ortolog::planar::{survey_planarity_with, truth_table_set, SurveyMode};
use ortolog::spectrum::{fullrank_set_if_symmetric, spectrum_of};
use ortolog::symmetry::{best_pair_cores_with, expand_core_with, find_best_core, CoreMeasure};
use ortolog::tcell::{format_area_table, library_inventory, map_netlist, parse_pitch_table, AreaRow, TCellLibrary};

#[derive(Parser)]
#[command(name = "ortolog", version, about = "Decompose PLA covers into phased networks of symmetric functions")]
struct Cli {
    /// Print structured JSON instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose, self-verify and write the netlist.
    Synth(SynthArgs),
    /// Rank spectrum of every output.
    Spectrum { input: PathBuf },
    /// Grid plot of the first output.
    Grid(GridArgs),
    /// Pair and expanded symmetric cores.
    Cores(CoresArgs),
    /// Map onto threshold cells and report pitch areas.
    Tmap(TmapArgs),
    /// Exhaustive planarity survey of all n-input functions.
    ExplorePlanar {
        #[arg(short, value_parser = clap::value_parser!(u8).range(0..=4))]
        n: u8,
        #[arg(long, value_enum, default_value_t = SurveyArg::Direct)]
        mode: SurveyArg,
    },
    /// Check a netlist against a PLA.
    Verify {
        netlist: PathBuf,
        pla: PathBuf,
        /// Output to compare against when the PLA has several.
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(Args)]
struct SynthOpts {
    /// Split each cover by don't-care count first.
    #[arg(long)]
    dc_partition: bool,
    #[arg(long, value_enum, default_value_t = MeasureArg::Cubes)]
    measure: MeasureArg,
}

impl SynthOpts {
    fn options(&self) -> DecomposeOptions {
        DecomposeOptions { dc_partition: self.dc_partition, measure: self.measure.into(), ..Default::default() }
    }
}

#[derive(Args)]
struct LibOpts {
    /// Largest threshold-cell arity in the library.
    #[arg(long, default_value_t = 5)]
    lib_arity: usize,
    /// Pitch table with `cell arity threshold cost` lines.
    #[arg(long)]
    pitches: Option<PathBuf>,
}

impl LibOpts {
    fn library(&self) -> Result<TCellLibrary> {
        if self.lib_arity == 0 {
            bail!("--lib-arity must be at least 1");
        }
        let lib = library_inventory(self.lib_arity);
        Ok(match &self.pitches {
            Some(p) => lib.with_pitches(&parse_pitch_table(&read(p)?).with_context(|| p.display().to_string())?),
            None => lib,
        })
    }
}

#[derive(Args)]
struct SynthArgs {
    input: PathBuf,
    /// Directory for the netlist artifacts.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[command(flatten)]
    synth: SynthOpts,
    #[command(flatten)]
    lib: LibOpts,
    #[arg(long, value_enum, default_value_t = MinimizeArg::Auto)]
    minimize: MinimizeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also print the core report.
    #[arg(long)]
    report_cores: bool,
}

#[derive(Args)]
struct GridArgs {
    input: PathBuf,
    /// Input order as comma-separated names.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<String>>,
    /// Inputs to invert, comma-separated.
    #[arg(long, value_delimiter = ',')]
    phases: Option<Vec<String>>,
    /// Search for the layout with fewest nodes instead.
    #[arg(long, value_enum)]
    minimize: Option<MinimizeArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = StyleArg::Ascii)]
    style: StyleArg,
    /// Directory for the SVG file.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct CoresArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MeasureArg::Cubes)]
    measure: MeasureArg,
    /// Also list every pair core and its expansion.
    #[arg(long)]
    report_cores: bool,
}

#[derive(Args)]
struct TmapArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    synth: SynthOpts,
    #[command(flatten)]
    lib: LibOpts,
    /// Directory for the mapped-netlist artifacts.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MinimizeArg {
    Auto,
    Exhaustive,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Cubes,
    Minterms,
}

impl From<MeasureArg> for CoreMeasure {
    fn from(m: MeasureArg) -> CoreMeasure {
        match m {
            MeasureArg::Cubes => CoreMeasure::Cubes,
            MeasureArg::Minterms => CoreMeasure::Minterms,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SurveyArg {
    Direct,
    Classes,
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))
}

fn load_pla(p: &Path) -> Result<Pla> {
    Pla::parse(&read(p)?).with_context(|| p.display().to_string())
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

/// Artifact base name per output: the stem, plus the output name when there are several.
fn artifact_name(pla: &Pla, path: &Path, k: usize) -> String {
    if pla.covers.len() == 1 {
        stem(path)
    } else {
        format!("{}.{}", stem(path), pla.output_names[k])
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let p = dir.join(name);
    fs::write(&p, text).with_context(|| format!("cannot write {}", p.display()))?;
    Ok(p)
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn search_mode(m: MinimizeArg, n: usize, seed: u64) -> SearchMode {
    match m {
        MinimizeArg::Exhaustive => SearchMode::Exhaustive,
        MinimizeArg::Greedy => SearchMode::Greedy { seed },
        MinimizeArg::Auto if n <= MAX_EXHAUSTIVE_LAYOUT => SearchMode::Exhaustive,
        MinimizeArg::Auto => SearchMode::Greedy { seed },
    }
}

fn parse_names(c: &Cover, names: &[String]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|name| {
            c.input_names()
                .iter()
                .position(|x| x == name)
                .with_context(|| format!("unknown input `{name}`"))
        })
        .collect()
}

fn phase_names(c: &Cover, p: &PhaseVector) -> Vec<String> {
    (0..c.n()).filter(|&i| p.is_inverted(i)).map(|i| c.input_names()[i].clone()).collect()
}

fn order_names(c: &Cover, order: &[usize]) -> Vec<String> {
    order.iter().map(|&i| c.input_names()[i].clone()).collect()
}

#[derive(Serialize)]
struct SynthReport {
    output: String,
    inputs: usize,
    cubes: usize,
    density: f64,
    verified: bool,
    sym_nodes: usize,
    layout: Option<LayoutReport>,
    pitches: Option<u64>,
    netlist_file: Option<String>,
    netlist: Netlist,
}

#[derive(Serialize)]
struct LayoutReport {
    order: Vec<String>,
    inverted: Vec<String>,
    nodes: usize,
    links: usize,
}

fn synth(a: &SynthArgs, json: bool) -> Result<ExitCode> {
    let pla = load_pla(&a.input)?;
    let lib = a.lib.library()?;
    let mut reports = Vec::new();
    let mut failed = false;
    for (k, c) in pla.covers.iter().enumerate() {
        let out = &pla.output_names[k];
        let nl = decompose(c, &a.synth.options()).with_context(|| format!("decomposing output {out}"))?;
        let verdict = verify(&nl, c)?;
        if let Verdict::Mismatch { witness } = &verdict {
            let w: String = witness.iter().map(|&b| if b { '1' } else { '0' }).collect();
            eprintln!("error: output {out}: netlist differs from the cover at {w}");
            failed = true;
            continue;
        }
        let layout = match c.to_minterms() {
            Ok(s) => {
                let l = minimize_layout(&s, search_mode(a.minimize, c.n(), a.seed))?;
                Some(LayoutReport {
                    order: order_names(c, &l.order),
                    inverted: phase_names(c, &l.phases),
                    nodes: l.metrics.nodes,
                    links: l.metrics.links,
                })
            }
            Err(_) => None,
        };
        let pitches = match map_netlist(&nl, &lib) {
            Ok(m) => Some(m.pitches),
            Err(e) => {
                eprintln!("warning: output {out}: no threshold mapping: {e}");
                None
            }
        };
        let name = artifact_name(&pla, &a.input, k);
        let file = write(&a.out_dir, &format!("{name}.net"), &nl.to_text())?;
        write(&a.out_dir, &format!("{name}.netlist.json"), &serde_json::to_string_pretty(&nl)?)?;
        if a.report_cores && !json {
            print!("{}", core_report(c, a.synth.measure.into(), true));
        }
        reports.push(SynthReport {
            output: out.clone(),
            inputs: c.n(),
            cubes: c.m(),
            density: c.density(),
            verified: true,
            sym_nodes: nl.sym_count(),
            layout,
            pitches,
            netlist_file: Some(file.display().to_string()),
            netlist: nl,
        });
    }
    if json {
        print_json(&reports)?;
    } else {
        for r in &reports {
            println!("output {}: n={} m={} density={:.2}", r.output, r.inputs, r.cubes, r.density);
            print!("{}", r.netlist.to_text());
            println!("verified: equivalent");
            println!("SYM nodes: {}", r.sym_nodes);
            if let Some(l) = &r.layout {
                println!("best layout: order {} inverted [{}] N={} L={}", l.order.join(","), l.inverted.join(","), l.nodes, l.links);
            }
            if let Some(p) = r.pitches {
                println!("pitches: {p}");
            }
            if let Some(f) = &r.netlist_file {
                println!("wrote {f}");
            }
        }
    }
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

#[derive(Serialize)]
struct SpectrumReport {
    output: String,
    spectrum: Vec<u64>,
    symmetric: Option<Vec<usize>>,
}

fn spectrum(input: &Path, json: bool) -> Result<()> {
    let pla = load_pla(input)?;
    let mut reports = Vec::new();
    for (k, c) in pla.covers.iter().enumerate() {
        let s = c.to_minterms()?;
        let sp = spectrum_of(&s);
        let sym = fullrank_set_if_symmetric(&s);
        reports.push(SpectrumReport {
            output: pla.output_names[k].clone(),
            spectrum: sp.counts.clone(),
            symmetric: sym.map(|r| r.ranks.into_iter().collect()),
        });
    }
    if json {
        return print_json(&reports);
    }
    for r in &reports {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let sym = match &r.symmetric {
            Some(ranks) => {
                let ranks: Vec<String> = ranks.iter().map(usize::to_string).collect();
                format!("  symmetric [{}]", ranks.join(","))
            }
            None => String::new(),
        };
        println!("{}: [{}]{sym}", r.output, list(&r.spectrum));
    }
    Ok(())
}

#[derive(Serialize)]
struct GridReport {
    order: Vec<String>,
    inverted: Vec<String>,
    nodes: usize,
    links: usize,
    planar: bool,
    bridges: Vec<(usize, usize)>,
    paths_per_rank: Vec<u64>,
    svg_file: Option<String>,
}

fn first_cover(pla: &Pla) -> Result<&Cover> {
    if pla.covers.len() > 1 {
        eprintln!("note: plotting the first of {} outputs", pla.covers.len());
    }
    pla.covers.first().context("PLA has no outputs")
}

fn grid(a: &GridArgs, json: bool) -> Result<()> {
    let pla = load_pla(&a.input)?;
    let c = first_cover(&pla)?;
    let s: MintermSet = c.to_minterms()?;
    let (order, phases) = match a.minimize {
        Some(m) => {
            if a.order.is_some() || a.phases.is_some() {
                bail!("--minimize cannot be combined with --order or --phases");
            }
            let l = minimize_layout(&s, search_mode(m, c.n(), a.seed))?;
            (l.order, l.phases)
        }
        None => {
            let order = match &a.order {
                Some(names) => parse_names(c, names)?,
                None => (0..c.n()).collect(),
            };
            let inverted = parse_names(c, a.phases.as_deref().unwrap_or(&[]))?;
            (order, PhaseVector::inverting(c.n(), &inverted))
        }
    };
    let g = build_grid_dag(&s, &order, &phases)?;
    let m = g.metrics();
    let svg_file = match a.style {
        StyleArg::Svg => {
            let p = write(&a.out_dir, &format!("{}.svg", stem(&a.input)), &render(&g, RenderStyle::Svg))?;
            Some(p.display().to_string())
        }
        StyleArg::Ascii => None,
    };
    let report = GridReport {
        order: order_names(c, &order),
        inverted: phase_names(c, &phases),
        nodes: m.nodes,
        links: m.links,
        planar: ortolog::grid::is_planar_plot(&g),
        bridges: g.bridge_sites(),
        paths_per_rank: g.paths_per_rank(),
        svg_file,
    };
    if json {
        return print_json(&report);
    }
    match a.style {
        StyleArg::Ascii => print!("{}", render(&g, RenderStyle::Ascii)),
        StyleArg::Svg => {
            println!("{m}");
            println!("wrote {}", report.svg_file.as_deref().unwrap_or_default());
        }
    }
    Ok(())
}

fn phased_pair(c: &Cover, a: usize, b: usize, invert_a: bool) -> String {
    let names = c.input_names();
    format!("({}{}, {})", names[a], if invert_a { "'" } else { "" }, names[b])
}

fn z_names(core: &ortolog::symmetry::Core) -> String {
    let names = core.base.input_names();
    core.sorted_inputs()
        .iter()
        .map(|&i| format!("{}{}", names[i], if core.phases.is_inverted(i) { "'" } else { "" }))
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Serialize)]
struct CoreEntry {
    pair: (String, String),
    invert_a: bool,
    pair_cubes: usize,
    expanded_inputs: Vec<String>,
    expanded_cubes: usize,
    score: usize,
}

#[derive(Serialize)]
struct CoresReport {
    pairs: Vec<CoreEntry>,
    best: Option<(Vec<String>, usize)>,
}

fn cores_data(c: &Cover, how: CoreMeasure) -> CoresReport {
    let names = c.input_names();
    let pairs = if c.n() >= 2 { best_pair_cores_with(c, how) } else { Default::default() };
    let entries = pairs
        .iter()
        .map(|(&(a, b), p)| {
            let (e, s) = expand_core_with(&p.core, c, how);
            CoreEntry {
                pair: (names[a].clone(), names[b].clone()),
                invert_a: p.invert_a,
                pair_cubes: p.core.len(),
                expanded_inputs: z_names(&e).split(',').map(String::from).filter(|s| !s.is_empty()).collect(),
                expanded_cubes: e.len(),
                score: s.score,
            }
        })
        .collect();
    let best = find_best_core(c, how).map(|core| {
        let z = z_names(&core).split(',').map(String::from).collect();
        (z, core.len())
    });
    CoresReport { pairs: entries, best }
}

fn core_report(c: &Cover, how: CoreMeasure, all: bool) -> String {
    let mut out = String::new();
    if all && c.n() >= 2 {
        for (&(a, b), p) in &best_pair_cores_with(c, how) {
            let (e, s) = expand_core_with(&p.core, c, how);
            out.push_str(&format!(
                "pair {}: {} cubes -> Z={{{}}} {} cubes score {}\n",
                phased_pair(c, a, b, p.invert_a),
                p.core.len(),
                z_names(&e),
                e.len(),
                s.score
            ));
        }
    }
    match find_best_core(c, how) {
        Some(core) => {
            let s = core.score();
            out.push_str(&format!("best core: Z={{{}}} {} cubes score {}\n", z_names(&core), s.cube_count, s.score))
        }
        None => out.push_str("best core: none\n"),
    }
    out
}

fn cores(a: &CoresArgs, json: bool) -> Result<()> {
    let pla = load_pla(&a.input)?;
    let c = first_cover(&pla)?;
    if json {
        return print_json(&cores_data(c, a.measure.into()));
    }
    print!("{}", core_report(c, a.measure.into(), a.report_cores));
    Ok(())
}

fn tmap(a: &TmapArgs, json: bool) -> Result<ExitCode> {
    let lib = a.lib.library()?;
    let mut rows = Vec::new();
    let mut failed = false;
    for path in &a.inputs {
        let pla = load_pla(path)?;
        for (k, c) in pla.covers.iter().enumerate() {
            let name = artifact_name(&pla, path, k);
            let nl = decompose(c, &a.synth.options()).with_context(|| format!("decomposing {name}"))?;
            let mapped = map_netlist(&nl, &lib).with_context(|| format!("mapping {name}"))?;
            let ok = (c.n() > 16 || (0..1u64 << c.n()).all(|i| mapped.evaluate_index(i) == nl.evaluate_index(i)))
                && verify(&nl, c)?.is_equivalent();
            if !ok {
                eprintln!("error: {name}: mapped netlist is not equivalent to the cover");
                failed = true;
            }
            if let Some(dir) = &a.out_dir {
                write(dir, &format!("{name}.map.json"), &serde_json::to_string_pretty(&mapped)?)?;
            }
            rows.push(AreaRow { circuit: name, inputs: c.n(), cubes: c.m(), density: c.density(), pitches: mapped.pitches });
        }
    }
    if json {
        print_json(&rows)?;
    } else {
        print!("{}", format_area_table(&rows));
    }
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

#[derive(Serialize)]
struct SurveySummary {
    n: usize,
    total: u64,
    planar: u64,
    nonplanar: Vec<String>,
}

fn explore(n: usize, mode: SurveyArg, json: bool) -> Result<()> {
    let mode = match mode {
        SurveyArg::Direct => SurveyMode::Direct,
        SurveyArg::Classes => SurveyMode::Classes,
    };
    let s = survey_planarity_with(n, mode)?;
    let witnesses: Vec<String> = s
        .nonplanar
        .iter()
        .map(|&tt| {
            let set = truth_table_set(n, tt);
            format!("{tt:#06x} {{{}}}", set.to_strings().join(","))
        })
        .collect();
    if json {
        return print_json(&SurveySummary { n, total: s.total, planar: s.planar, nonplanar: witnesses });
    }
    println!("BF{n}: {} functions, {} planar, {} non-planar", s.total, s.planar, s.total - s.planar);
    for w in &witnesses {
        println!("non-planar {w}");
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    equivalent: bool,
    witness: Option<String>,
}

fn verify_cmd(netlist: &Path, pla_path: &Path, output: Option<&str>, json: bool) -> Result<ExitCode> {
    let nl = Netlist::parse_text(&read(netlist)?).with_context(|| netlist.display().to_string())?;
    let pla = load_pla(pla_path)?;
    let k = match output {
        Some(name) => pla.output_names.iter().position(|o| o == name).with_context(|| format!("unknown output `{name}`"))?,
        None if pla.covers.len() == 1 => 0,
        None => bail!("{} has {} outputs; choose one with --output", pla_path.display(), pla.covers.len()),
    };
    let c = &pla.covers[k];
    let verdict = verify(&nl, c)?;
    let report = match &verdict {
        Verdict::Equivalent => VerifyReport { equivalent: true, witness: None },
        Verdict::Mismatch { witness } => {
            let w = c.input_names().iter().zip(witness).map(|(n, &b)| format!("{n}={}", b as u8)).collect::<Vec<_>>();
            VerifyReport { equivalent: false, witness: Some(w.join(" ")) }
        }
    };
    if json {
        print_json(&report)?;
    } else if let Some(w) = &report.witness {
        println!("mismatch at {w}");
    } else {
        println!("equivalent");
    }
    Ok(if report.equivalent { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let json = cli.json;
    match &cli.command {
        Command::Synth(a) => synth(a, json),
        Command::Spectrum { input } => spectrum(input, json).map(|_| ExitCode::SUCCESS),
        Command::Grid(a) => grid(a, json).map(|_| ExitCode::SUCCESS),
        Command::Cores(a) => cores(a, json).map(|_| ExitCode::SUCCESS),
        Command::Tmap(a) => tmap(a, json),
        Command::ExplorePlanar { n, mode } => explore(*n as usize, *mode, json).map(|_| ExitCode::SUCCESS),
        Command::Verify { netlist, pla, output } => verify_cmd(netlist, pla, output.as_deref(), json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
