// SPDX-License-Identifier: Apache-2.0
//! Threshold cells and the mapping of symmetric components onto them.
//!
//! `SF[R]` is written as a sum of threshold pair products `T_i * !T_{j+1}`, one
//! per maximal run `[i, j]` of `R`. Glue gates are 2-input threshold cells:
//! `T_2` of 2 is AND, `T_1` of 2 is OR.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlist::{NodeKind, Netlist, Operand};
use crate::spectrum::FullRankSet;

/// `T_k` of `n`: high iff at least `threshold` of `arity` inputs are high.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThresholdCell {
    pub arity: usize,
    pub threshold: usize,
}

impl ThresholdCell {
    pub fn new(arity: usize, threshold: usize) -> ThresholdCell {
        assert!((1..=arity).contains(&threshold), "threshold {threshold} outside 1..={arity}");
        ThresholdCell { arity, threshold }
    }

    pub fn eval_popcount(&self, ones: usize) -> bool {
        ones >= self.threshold
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    Inverter,
    Threshold(ThresholdCell),
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellKind::Inverter => write!(f, "INV"),
            CellKind::Threshold(t) => write!(f, "T{}/{}", t.threshold, t.arity),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TCellLibrary {
    pub max_arity: usize,
    pub cells: Vec<ThresholdCell>,
    pub pitch_costs: BTreeMap<CellKind, u64>,
}

/// Every `T_k` of `n` with `1 <= k <= n <= max_arity`, plus an inverter, priced
/// with [`default_pitch`].
pub fn library_inventory(max_arity: usize) -> TCellLibrary {
    assert!(max_arity >= 1, "a library needs at least one input");
    let cells: Vec<ThresholdCell> = (1..=max_arity)
        .flat_map(|n| (1..=n).map(move |k| ThresholdCell::new(n, k)))
        .collect();
    let mut pitch_costs: BTreeMap<CellKind, u64> =
        cells.iter().map(|&c| (CellKind::Threshold(c), default_pitch(CellKind::Threshold(c)))).collect();
    pitch_costs.insert(CellKind::Inverter, default_pitch(CellKind::Inverter));
    TCellLibrary { max_arity, cells, pitch_costs }
}

/// Inverter 1 pitch, `T_k` of `n` costs `n` pitches (so 2-input glue costs 2).
pub fn default_pitch(kind: CellKind) -> u64 {
    match kind {
        CellKind::Inverter => 1,
        CellKind::Threshold(t) => t.arity as u64,
    }
}

impl TCellLibrary {
    pub fn with_pitches(mut self, costs: &BTreeMap<CellKind, u64>) -> TCellLibrary {
        self.pitch_costs.extend(costs.iter().map(|(&k, &v)| (k, v)));
        self
    }

    fn pitch(&self, kind: CellKind) -> Result<u64> {
        self.pitch_costs.get(&kind).copied().ok_or_else(|| Error::MissingPitch(kind.to_string()))
    }
}

/// Parses `cell arity threshold cost` lines such as `T 3 2 3` or `INV 1 0 1`.
pub fn parse_pitch_table(text: &str) -> Result<BTreeMap<CellKind, u64>> {
    let mut out = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: &str| Error::Syntax { line: ln + 1, msg: msg.to_string() };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(syntax("expected `cell arity threshold cost`"));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| syntax(&format!("bad number `{s}`")));
        let (arity, threshold, cost) = (num(f[1])? as usize, num(f[2])? as usize, num(f[3])?);
        if cost == 0 {
            return Err(syntax("pitch cost must be positive"));
        }
        let kind = match f[0] {
            "INV" => CellKind::Inverter,
            "T" if (1..=arity).contains(&threshold) => CellKind::Threshold(ThresholdCell::new(arity, threshold)),
            "T" => return Err(syntax("threshold outside 1..=arity")),
            other => return Err(syntax(&format!("unknown cell `{other}`"))),
        };
        out.insert(kind, cost);
    }
    Ok(out)
}

/// `T_lower * !T_upper`; an absent bound is the constant 1 (lower) or is dropped (upper).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SFTerm {
    pub lower: Option<usize>,
    pub upper: Option<usize>,
}

impl SFTerm {
    pub fn eval_popcount(&self, ones: usize) -> bool {
        self.lower.is_none_or(|i| ones >= i) && self.upper.is_none_or(|j| ones < j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SFImpl {
    pub n: usize,
    pub terms: Vec<SFTerm>,
}

impl SFImpl {
    pub fn eval_popcount(&self, ones: usize) -> bool {
        self.terms.iter().any(|t| t.eval_popcount(ones))
    }
}

impl fmt::Display for SFImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (t.lower, t.upper) {
                (None, None) => write!(f, "1")?,
                (Some(i), None) => write!(f, "T{i}")?,
                (None, Some(j)) => write!(f, "!T{j}")?,
                (Some(i), Some(j)) => write!(f, "T{i}.!T{j}")?,
            }
        }
        Ok(())
    }
}

/// Maximal runs of consecutive ranks as closed `[i, j]` pairs, ascending.
pub fn intervals(r: &FullRankSet) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &k in &r.ranks {
        match out.last_mut() {
            Some((_, j)) if *j + 1 == k => *j = k,
            _ => out.push((k, k)),
        }
    }
    out
}

pub fn map_sf(r: &FullRankSet) -> SFImpl {
    let terms = intervals(r)
        .into_iter()
        .map(|(i, j)| SFTerm { lower: (i > 0).then_some(i), upper: (j < r.n).then_some(j + 1) })
        .collect();
    SFImpl { n: r.n, terms }
}

/// `1 + sum_{k=2..n} (2^k - 1)`.
pub fn scell_count(n: usize) -> u64 {
    assert!(n >= 2, "S-cell libraries start at two inputs");
    1 + (2..=n).map(|k| (1u64 << k) - 1).sum::<u64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Signal {
    Input(usize),
    Cell(usize),
    Const(bool),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MappedCell {
    pub kind: CellKind,
    pub inputs: Vec<Signal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellUsage {
    pub cell: String,
    pub count: usize,
    pub pitches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappedNetlist {
    pub input_names: Vec<String>,
    /// Topologically ordered.
    pub cells: Vec<MappedCell>,
    pub output: Signal,
    pub usage: Vec<CellUsage>,
    pub pitches: u64,
}

impl MappedNetlist {
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        let mut values = Vec::with_capacity(self.cells.len());
        let get = |values: &[bool], s: Signal| match s {
            Signal::Input(i) => assignment[i],
            Signal::Cell(k) => values[k],
            Signal::Const(b) => b,
        };
        for cell in &self.cells {
            let v = match cell.kind {
                CellKind::Inverter => !get(&values, cell.inputs[0]),
                CellKind::Threshold(t) => {
                    t.eval_popcount(cell.inputs.iter().filter(|&&s| get(&values, s)).count())
                }
            };
            values.push(v);
        }
        get(&values, self.output)
    }

    pub fn evaluate_index(&self, index: u64) -> bool {
        let a: Vec<bool> = (0..self.input_names.len()).map(|i| index >> i & 1 == 1).collect();
        self.evaluate(&a)
    }
}

struct Mapper<'l> {
    lib: &'l TCellLibrary,
    cells: Vec<MappedCell>,
    index: HashMap<MappedCell, usize>,
}

impl Mapper<'_> {
    fn cell(&mut self, kind: CellKind, inputs: Vec<Signal>) -> Result<Signal> {
        if let CellKind::Threshold(t) = kind {
            if t.arity > self.lib.max_arity {
                return Err(Error::ArityExceedsLibrary { arity: t.arity, max: self.lib.max_arity });
            }
            // T_1 of one input is a wire
            if t.arity == 1 {
                return Ok(inputs[0]);
            }
        }
        self.lib.pitch(kind)?;
        let c = MappedCell { kind, inputs };
        if let Some(&k) = self.index.get(&c) {
            return Ok(Signal::Cell(k));
        }
        let k = self.cells.len();
        self.cells.push(c.clone());
        self.index.insert(c, k);
        Ok(Signal::Cell(k))
    }

    fn inv(&mut self, s: Signal) -> Result<Signal> {
        match s {
            Signal::Const(b) => Ok(Signal::Const(!b)),
            Signal::Cell(k) if self.cells[k].kind == CellKind::Inverter => Ok(self.cells[k].inputs[0]),
            _ => self.cell(CellKind::Inverter, vec![s]),
        }
    }

    /// Left-leaning chain of 2-input `T_threshold` cells with constant folding.
    fn glue(&mut self, threshold: usize, signals: Vec<Signal>) -> Result<Signal> {
        let (absorb, unit) = if threshold == 2 { (false, true) } else { (true, false) };
        let mut kept = Vec::new();
        for s in signals {
            match s {
                Signal::Const(b) if b == absorb => return Ok(Signal::Const(absorb)),
                Signal::Const(_) => {}
                _ => kept.push(s),
            }
        }
        let mut it = kept.into_iter();
        let Some(mut acc) = it.next() else {
            return Ok(Signal::Const(unit));
        };
        for s in it {
            acc = self.cell(CellKind::Threshold(ThresholdCell::new(2, threshold)), vec![acc, s])?;
        }
        Ok(acc)
    }

    fn sym(&mut self, r: &FullRankSet, ops: Vec<Signal>) -> Result<Signal> {
        let n = ops.len();
        if n > self.lib.max_arity {
            return Err(Error::ArityExceedsLibrary { arity: n, max: self.lib.max_arity });
        }
        let mut terms = Vec::new();
        for t in map_sf(r).terms {
            let lo = match t.lower {
                Some(i) => self.cell(CellKind::Threshold(ThresholdCell::new(n, i)), ops.clone())?,
                None => Signal::Const(true),
            };
            let hi = match t.upper {
                Some(j) => {
                    let tj = self.cell(CellKind::Threshold(ThresholdCell::new(n, j)), ops.clone())?;
                    self.inv(tj)?
                }
                None => Signal::Const(true),
            };
            terms.push(self.glue(2, vec![lo, hi])?);
        }
        self.glue(1, terms)
    }
}

/// Replaces every SYM node by threshold cells and every AND/OR by 2-input glue.
pub fn map_netlist(nl: &Netlist, lib: &TCellLibrary) -> Result<MappedNetlist> {
    let mut m = Mapper { lib, cells: Vec::new(), index: HashMap::new() };
    let mut sig: Vec<Signal> = Vec::with_capacity(nl.nodes.len());
    for node in &nl.nodes {
        let ops: Vec<Signal> = node
            .operands
            .iter()
            .map(|op| match *op {
                Operand::Input(i) => Signal::Input(i),
                Operand::Node(k) => sig[k],
            })
            .collect();
        let s = match &node.kind {
            NodeKind::Sym(r) => m.sym(r, ops)?,
            NodeKind::Inv => m.inv(ops[0])?,
            NodeKind::AndDisjoint => m.glue(2, ops)?,
            NodeKind::Or => m.glue(1, ops)?,
            NodeKind::Const(b) => Signal::Const(*b),
        };
        sig.push(s);
    }
    let output = sig[nl.output];

    let mut counts: BTreeMap<CellKind, usize> = BTreeMap::new();
    for c in &m.cells {
        *counts.entry(c.kind).or_default() += 1;
    }
    let mut usage = Vec::new();
    let mut pitches = 0;
    for (kind, count) in counts {
        let p = lib.pitch(kind)? * count as u64;
        pitches += p;
        usage.push(CellUsage { cell: kind.to_string(), count, pitches: p });
    }
    Ok(MappedNetlist { input_names: nl.input_names().iter().map(|s| s.to_string()).collect(), cells: m.cells, output, usage, pitches })
}

/// One line of an area report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaRow {
    pub circuit: String,
    pub inputs: usize,
    pub cubes: usize,
    pub density: f64,
    pub pitches: u64,
}

/// Aligned text table: circuit, inputs, cubes, density in percent, pitches.
pub fn format_area_table(rows: &[AreaRow]) -> String {
    let w = rows.iter().map(|r| r.circuit.len()).max().unwrap_or(0).max("circuit".len());
    let mut out = String::new();
    writeln!(out, "{:<w$}  {:>4}  {:>4}  {:>4}  {:>8}", "circuit", "inp", "cub", "dens", "#pitches").unwrap();
    for r in rows {
        let dens = (r.density * 100.0).round();
        writeln!(out, "{:<w$}  {:>4}  {:>4}  {:>4}  {:>8}", r.circuit, r.inputs, r.cubes, dens, r.pitches).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Cover;
    use crate::decompose::{decompose, DecomposeOptions};
    use crate::netlist::{NetInput, NetNode};

    fn ranks(n: usize, r: &[usize]) -> FullRankSet {
        FullRankSet::new(n, r.iter().copied())
    }

    fn single_sym(r: FullRankSet) -> Netlist {
        let n = r.n;
        Netlist {
            inputs: crate::cube::default_names(n).into_iter().map(|name| NetInput { name, inverted: false }).collect(),
            nodes: vec![NetNode { kind: NodeKind::Sym(r), operands: (0..n).map(Operand::Input).collect() }],
            output: 0,
        }
    }

    #[test]
    fn interval_examples() {
        assert_eq!(intervals(&ranks(3, &[1, 2, 3])), [(1, 3)]);
        assert_eq!(intervals(&ranks(3, &[1, 3])), [(1, 1), (3, 3)]);
        assert!(intervals(&ranks(3, &[])).is_empty());
    }

    #[test]
    fn map_sf_examples() {
        assert_eq!(map_sf(&ranks(3, &[1, 3])).to_string(), "T1.!T2 + T3");
        assert_eq!(map_sf(&ranks(3, &[2, 3])).to_string(), "T2");
        assert_eq!(map_sf(&ranks(4, &[0, 1])).to_string(), "!T2");
        let imp = map_sf(&ranks(4, &[0, 1]));
        assert!((0..=4).all(|k| imp.eval_popcount(k) == (k <= 1)));
        assert_eq!(map_sf(&ranks(2, &[0, 1, 2])).to_string(), "1");
    }

    #[test]
    fn inventory_counts() {
        let lib = library_inventory(4);
        assert_eq!(lib.cells.len(), 10);
        assert!(lib.pitch_costs.contains_key(&CellKind::Inverter));
        assert_eq!(library_inventory(5).cells.len(), 15);
        assert_eq!(library_inventory(1).cells, [ThresholdCell::new(1, 1)]);
        assert_eq!((scell_count(2), scell_count(4), scell_count(5)), (4, 26, 57));
    }

    #[test]
    fn carry_and_sum_mapping() {
        let lib = library_inventory(4);
        let carry = map_netlist(&single_sym(ranks(3, &[2, 3])), &lib).unwrap();
        assert_eq!(carry.cells.len(), 1);
        assert_eq!(carry.cells[0].kind, CellKind::Threshold(ThresholdCell::new(3, 2)));
        assert_eq!(carry.pitches, 3);

        let sum = map_netlist(&single_sym(ranks(3, &[1, 3])), &lib).unwrap();
        let kinds: Vec<String> = sum.usage.iter().map(|u| format!("{}x{}", u.count, u.cell)).collect();
        assert_eq!(kinds, ["1xINV", "1xT1/2", "1xT2/2", "1xT1/3", "1xT2/3", "1xT3/3"]);
        assert_eq!(sum.pitches, 14);
        for i in 0..8u64 {
            assert_eq!(sum.evaluate_index(i), i.count_ones() % 2 == 1);
        }
    }

    #[test]
    fn parity4_mapping() {
        let lib = library_inventory(4);
        let p = map_netlist(&single_sym(ranks(4, &[1, 3])), &lib).unwrap();
        let thresholds = p.usage.iter().filter(|u| u.cell.ends_with("/4")).map(|u| u.count).sum::<usize>();
        assert_eq!(thresholds, 4);
        assert!(p.pitches > map_netlist(&single_sym(ranks(4, &[2, 3, 4])), &lib).unwrap().pitches);
        for i in 0..16u64 {
            assert_eq!(p.evaluate_index(i), i.count_ones() % 2 == 1);
        }
    }

    #[test]
    fn errors() {
        let lib = library_inventory(2);
        assert!(matches!(
            map_netlist(&single_sym(ranks(3, &[2, 3])), &lib),
            Err(Error::ArityExceedsLibrary { arity: 3, max: 2 })
        ));
        let mut lib = library_inventory(3);
        lib.pitch_costs.remove(&CellKind::Inverter);
        assert!(matches!(map_netlist(&single_sym(ranks(3, &[1, 3])), &lib), Err(Error::MissingPitch(_))));
    }

    #[test]
    fn pitch_table_parsing() {
        let t = parse_pitch_table("# cell arity threshold cost\nT 3 2 5\nINV 1 0 2\n\n").unwrap();
        assert_eq!(t[&CellKind::Threshold(ThresholdCell::new(3, 2))], 5);
        assert_eq!(t[&CellKind::Inverter], 2);
        let lib = library_inventory(3).with_pitches(&t);
        let carry = map_netlist(&single_sym(ranks(3, &[2, 3])), &lib).unwrap();
        assert_eq!(carry.pitches, 5);
        assert!(parse_pitch_table("T 3 4 1").is_err());
        assert!(parse_pitch_table("X 1 1 1").is_err());
        assert!(parse_pitch_table("T 3 2").is_err());
        assert!(parse_pitch_table("T 3 2 0").is_err());
    }

    #[test]
    fn mapped_xor2x2_is_equivalent() {
        let c = Cover::from_strs(4, &["1010", "1001", "0110", "0101"]).unwrap();
        let nl = decompose(&c, &DecomposeOptions::default()).unwrap();
        let m = map_netlist(&nl, &library_inventory(4)).unwrap();
        for i in 0..16 {
            assert_eq!(m.evaluate_index(i), nl.evaluate_index(i));
        }
    }

    #[test]
    fn area_table_columns() {
        let rows = [AreaRow { circuit: "fa".into(), inputs: 3, cubes: 7, density: 0.857, pitches: 17 }];
        let t = format_area_table(&rows);
        assert_eq!(t, "circuit   inp   cub  dens  #pitches\nfa          3     7    86        17\n");
    }
}
