// SPDX-License-Identifier: Apache-2.0
//! Orthogrid plots.
//!
//! Every minterm becomes an `n`-step path from the origin: a 1 steps right
//! (rank + 1), a 0 steps down. Paths are shared as a minimal prefix DAG
//! stratified by depth: two prefixes occupy the same node iff they end at the
//! same grid point and have identical suffix sets. Distinct nodes at one grid
//! point are non-planar and would need a bridge on silicon.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{check_permutation, MintermSet, PhaseVector, DEFAULT_EXPANSION_CAP};
use crate::error::{Error, Result};

/// Largest arity for exhaustive layout search.
pub const MAX_EXHAUSTIVE_LAYOUT: usize = 8;

const DEAD: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridNode {
    pub depth: usize,
    pub rank: usize,
    /// Suffix-class identifier; unique within the node's depth.
    pub class: usize,
    /// Target index in the next level for input value 1.
    pub one: Option<usize>,
    /// Target index in the next level for input value 0.
    pub zero: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDag {
    pub n: usize,
    pub order: Vec<usize>,
    pub phases: PhaseVector,
    pub levels: Vec<Vec<GridNode>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlotMetrics {
    /// Node count, origin excluded.
    pub nodes: usize,
    pub links: usize,
}

impl std::fmt::Display for PlotMetrics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "N={} L={}", self.nodes, self.links)
    }
}

/// Word index of every member of `s` after reordering and phasing. Step 0 is
/// the most significant bit of the word.
fn transformed_words(s: &MintermSet, order: &[usize], phases: &PhaseVector) -> MintermSet {
    let n = s.n();
    let pmask = phases.mask();
    MintermSet::from_indices(
        n,
        s.iter().map(|x| {
            let x = x ^ pmask;
            order
                .iter()
                .enumerate()
                .fold(0u64, |w, (k, &input)| w | (x >> input & 1) << (n - 1 - k))
        }),
    )
}

pub fn build_grid_dag(s: &MintermSet, order: &[usize], phases: &PhaseVector) -> Result<GridDag> {
    let n = s.n();
    if n == 0 {
        return Err(Error::ZeroInputs);
    }
    if n > DEFAULT_EXPANSION_CAP {
        return Err(Error::Capacity { n, cap: DEFAULT_EXPANSION_CAP });
    }
    check_permutation(n, order)?;
    if phases.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: phases.len() });
    }
    let words = transformed_words(s, order, phases);

    let mut levels: Vec<Vec<GridNode>> = vec![Vec::new(); n + 1];
    // Accepting nodes merge per rank, numbered by ascending rank.
    let mut present = vec![false; n + 1];
    for w in words.iter() {
        present[w.count_ones() as usize] = true;
    }
    let mut rank_id = vec![DEAD; n + 1];
    for rank in (0..=n).filter(|&r| present[r]) {
        rank_id[rank] = levels[n].len() as u32;
        let class = levels[n].len();
        levels[n].push(GridNode { depth: n, rank, class, one: None, zero: None });
    }
    let mut ids: Vec<u32> = vec![DEAD; 1usize << n];
    for w in words.iter() {
        ids[w as usize] = rank_id[w.count_ones() as usize];
    }

    for d in (0..n).rev() {
        let mut next = vec![DEAD; 1usize << d];
        let mut classes: HashMap<(u32, u32, u32), u32> = HashMap::new();
        for (p, slot) in next.iter_mut().enumerate() {
            let zero = ids[2 * p];
            let one = ids[2 * p + 1];
            if zero == DEAD && one == DEAD && d > 0 {
                continue;
            }
            let rank = p.count_ones();
            let id = *classes.entry((rank, zero, one)).or_insert_with(|| {
                let class = levels[d].len();
                levels[d].push(GridNode {
                    depth: d,
                    rank: rank as usize,
                    class,
                    one: (one != DEAD).then_some(one as usize),
                    zero: (zero != DEAD).then_some(zero as usize),
                });
                class as u32
            });
            *slot = id;
        }
        ids = next;
    }
    Ok(GridDag { n, order: order.to_vec(), phases: phases.clone(), levels })
}

impl GridDag {
    pub fn origin(&self) -> &GridNode {
        &self.levels[0][0]
    }

    pub fn node(&self, depth: usize, index: usize) -> &GridNode {
        &self.levels[depth][index]
    }

    pub fn metrics(&self) -> PlotMetrics {
        metrics(self)
    }

    /// Nodes per grid point `(depth, rank)`, for occupied points only.
    pub fn occupancy(&self) -> Vec<((usize, usize), usize)> {
        let mut out = Vec::new();
        for (d, level) in self.levels.iter().enumerate() {
            let mut counts = vec![0usize; d + 1];
            for node in level {
                counts[node.rank] += 1;
            }
            out.extend(
                counts
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c > 0)
                    .map(|(r, c)| ((d, r), c)),
            );
        }
        out
    }

    /// Grid points `(depth, rank)` hosting more than one node.
    pub fn bridge_sites(&self) -> Vec<(usize, usize)> {
        self.occupancy()
            .into_iter()
            .filter(|&(_, c)| c > 1)
            .map(|(p, _)| p)
            .collect()
    }

    /// Accepted path count per final node, indexed by rank.
    pub fn paths_per_rank(&self) -> Vec<u64> {
        let mut counts: Vec<u64> = vec![1; self.levels[0].len()];
        for d in 0..self.n {
            let mut next = vec![0u64; self.levels[d + 1].len()];
            for (node, &c) in self.levels[d].iter().zip(&counts) {
                for t in [node.zero, node.one].into_iter().flatten() {
                    next[t] += c;
                }
            }
            counts = next;
        }
        let mut per_rank = vec![0u64; self.n + 1];
        for (node, c) in self.levels[self.n].iter().zip(counts) {
            per_rank[node.rank] += c;
        }
        per_rank
    }

    /// Set of paths from the origin to `node` at `depth`, as words over `depth`
    /// inputs (step `k` is input `k`).
    pub fn prefix_set(&self, depth: usize, node: usize) -> MintermSet {
        let mut sets: Vec<MintermSet> = vec![MintermSet::from_indices(0, [0])];
        for d in 0..depth {
            let mut next: Vec<MintermSet> = vec![MintermSet::empty(d + 1); self.levels[d + 1].len()];
            for (src, set) in self.levels[d].iter().zip(&sets) {
                for (bit, target) in [(0u64, src.zero), (1u64, src.one)] {
                    if let Some(t) = target {
                        for w in set.iter() {
                            next[t].insert(w | bit << d);
                        }
                    }
                }
            }
            sets = next;
        }
        sets.swap_remove(node)
    }

    /// Set of paths from `node` at `depth` to the final diagonal, as words over
    /// `n - depth` inputs.
    pub fn suffix_set(&self, depth: usize, node: usize) -> MintermSet {
        let width = self.n - depth;
        let mut out = MintermSet::empty(width);
        let mut stack = vec![(depth, node, 0u64)];
        while let Some((d, idx, w)) = stack.pop() {
            if d == self.n {
                out.insert(w);
                continue;
            }
            let k = d - depth;
            let nd = &self.levels[d][idx];
            if let Some(t) = nd.zero {
                stack.push((d + 1, t, w));
            }
            if let Some(t) = nd.one {
                stack.push((d + 1, t, w | 1 << k));
            }
        }
        out
    }

    /// Minterm set accepted by the DAG in the original input coordinates.
    pub fn accepted(&self) -> MintermSet {
        let words = self.suffix_set(0, 0);
        let pmask = self.phases.mask();
        MintermSet::from_indices(
            self.n,
            words.iter().map(|w| {
                self.order
                    .iter()
                    .enumerate()
                    .fold(0u64, |x, (k, &input)| x | (w >> k & 1) << input)
                    ^ pmask
            }),
        )
    }
}

pub fn metrics(g: &GridDag) -> PlotMetrics {
    let total: usize = g.levels.iter().map(Vec::len).sum();
    let links = g
        .levels
        .iter()
        .flatten()
        .map(|node| node.one.is_some() as usize + node.zero.is_some() as usize)
        .sum();
    PlotMetrics { nodes: total - 1, links }
}

/// True iff every grid point hosts at most one node.
pub fn is_planar_plot(g: &GridDag) -> bool {
    g.occupancy().iter().all(|&(_, c)| c <= 1)
}

/// Factors `F = G * H` at a depth holding a single node.
pub fn planar_factor(g: &GridDag, depth: usize) -> Option<(MintermSet, MintermSet)> {
    if depth == 0 || depth >= g.n || g.levels[depth].len() != 1 {
        return None;
    }
    Some((g.prefix_set(depth, 0), g.suffix_set(depth, 0)))
}

/// One term `G_r * H_r` of a planar cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutTerm {
    pub rank: usize,
    pub prefix: MintermSet,
    pub suffix: MintermSet,
}

/// Splits `F = sum_r G_r * H_r` at a depth where every grid point hosts at most one node.
pub fn rank_cut(g: &GridDag, depth: usize) -> Option<Vec<CutTerm>> {
    if depth == 0 || depth >= g.n {
        return None;
    }
    let level = &g.levels[depth];
    let mut ranks: Vec<usize> = level.iter().map(|n| n.rank).collect();
    ranks.sort_unstable();
    if ranks.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut terms: Vec<CutTerm> = level
        .iter()
        .enumerate()
        .map(|(i, node)| CutTerm {
            rank: node.rank,
            prefix: g.prefix_set(depth, i),
            suffix: g.suffix_set(depth, i),
        })
        .collect();
    terms.sort_by_key(|t| t.rank);
    Some(terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    Exhaustive,
    Greedy { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub order: Vec<usize>,
    pub phases: PhaseVector,
    pub metrics: PlotMetrics,
}

impl Layout {
    fn key(&self) -> (usize, usize, &[usize], &[bool]) {
        (self.metrics.nodes, self.metrics.links, &self.order, &self.phases.0)
    }

    fn better_than(&self, other: &Layout) -> bool {
        self.key() < other.key()
    }
}

fn evaluate(s: &MintermSet, order: &[usize], phases: &PhaseVector) -> Layout {
    let dag = build_grid_dag(s, order, phases).expect("validated configuration");
    Layout { order: order.to_vec(), phases: phases.clone(), metrics: dag.metrics() }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Searches for the order and phases minimizing `N`, then `L`, then
/// lexicographic `(order, phases)`.
pub fn minimize_layout(s: &MintermSet, mode: SearchMode) -> Result<Layout> {
    let n = s.n();
    if n > DEFAULT_EXPANSION_CAP {
        return Err(Error::Capacity { n, cap: DEFAULT_EXPANSION_CAP });
    }
    match mode {
        SearchMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_LAYOUT {
                return Err(Error::ExhaustiveTooLarge { n, max: MAX_EXHAUSTIVE_LAYOUT });
            }
            let best = permutations(n)
                .into_par_iter()
                .map(|order| {
                    (0..1u64 << n)
                        .map(|mask| evaluate(s, &order, &PhaseVector::from_mask(n, mask)))
                        .reduce(|a, b| if b.better_than(&a) { b } else { a })
                        .unwrap()
                })
                .reduce_with(|a, b| if b.better_than(&a) { b } else { a })
                .unwrap();
            Ok(best)
        }
        SearchMode::Greedy { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = hill_climb(s, (0..n).collect(), PhaseVector::identity(n));
            for _ in 0..n {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut rng);
                let phases = PhaseVector((0..n).map(|_| rng.gen()).collect());
                let cand = hill_climb(s, order, phases);
                if cand.better_than(&best) {
                    best = cand;
                }
            }
            Ok(best)
        }
    }
}

fn hill_climb(s: &MintermSet, order: Vec<usize>, phases: PhaseVector) -> Layout {
    let n = s.n();
    let mut current = evaluate(s, &order, &phases);
    loop {
        let mut best_step: Option<Layout> = None;
        let mut consider = |cand: Layout| {
            if cand.better_than(best_step.as_ref().unwrap_or(&current)) {
                best_step = Some(cand);
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                let mut o = current.order.clone();
                o.swap(i, j);
                consider(evaluate(s, &o, &current.phases));
            }
            let mut p = current.phases.clone();
            p.0[i] = !p.0[i];
            consider(evaluate(s, &current.order, &p));
        }
        match best_step {
            Some(step) => current = step,
            None => return current,
        }
    }
}

/// Path counts `R(i, j)` of the Pascal grid, one row per diagonal `d = i + j`,
/// indexed by the number of ones.
pub fn pascal_counts(n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = vec![vec![1]];
    for d in 1..=n {
        let prev = &rows[d - 1];
        let row = (0..=d)
            .map(|ones| {
                let from_zero_step = if ones < d { prev[ones] } else { 0 };
                let from_one_step = if ones > 0 { prev[ones - 1] } else { 0 };
                from_zero_step + from_one_step
            })
            .collect();
        rows.push(row);
    }
    rows
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderStyle {
    Ascii,
    Svg,
}

pub fn render(g: &GridDag, style: RenderStyle) -> String {
    match style {
        RenderStyle::Ascii => render_ascii(g),
        RenderStyle::Svg => render_svg(g),
    }
}

/// Grid column is the number of ones (rightward), grid row the number of zeros.
fn render_ascii(g: &GridDag) -> String {
    let n = g.n;
    let width = 4 * n + 1;
    let height = 2 * n + 1;
    let mut canvas = vec![vec![' '; width]; height];
    let occupancy: HashMap<(usize, usize), usize> = g.occupancy().into_iter().collect();
    for y in 0..=n {
        for x in 0..=n - y {
            canvas[2 * y][4 * x] = '.';
        }
    }
    for (d, level) in g.levels.iter().enumerate() {
        for node in level {
            let (x, y) = (node.rank, d - node.rank);
            canvas[2 * y][4 * x] = match occupancy[&(d, node.rank)] {
                _ if d == 0 => '+',
                1 => 'o',
                _ => '=',
            };
            if node.one.is_some() {
                for c in &mut canvas[2 * y][4 * x + 1..4 * x + 4] {
                    *c = '-';
                }
            }
            if node.zero.is_some() {
                canvas[2 * y + 1][4 * x] = '|';
            }
        }
    }
    let mut out = String::new();
    let names: Vec<String> = g
        .order
        .iter()
        .map(|&i| if g.phases.0[i] { format!("~{i}") } else { i.to_string() })
        .collect();
    let _ = writeln!(out, "order: {}", names.join(" "));
    for row in canvas {
        let line: String = row.into_iter().collect();
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let m = g.metrics();
    let _ = writeln!(out, "{m}");
    for (d, r) in g.bridge_sites() {
        let _ = writeln!(out, "bridge at depth {d} rank {r}: {} nodes", occupancy[&(d, r)]);
    }
    let per_rank = g.paths_per_rank();
    for node in &g.levels[n] {
        let _ = writeln!(out, "rank {}: {} paths", node.rank, per_rank[node.rank]);
    }
    out
}

fn render_svg(g: &GridDag) -> String {
    const UNIT: usize = 60;
    const MARGIN: usize = 30;
    let n = g.n;
    let size = 2 * MARGIN + UNIT * n.max(1);
    let pos = |d: usize, node: &GridNode| -> (usize, usize) {
        let (x, y) = (node.rank, d - node.rank);
        let slot = g.levels[d].iter().filter(|o| o.rank == node.rank && o.class < node.class).count();
        (MARGIN + x * UNIT + slot * 10, MARGIN + y * UNIT + slot * 10)
    };
    let occupancy: HashMap<(usize, usize), usize> = g.occupancy().into_iter().collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r##"<rect width="{size}" height="{size}" fill="#ffffff"/>"##);
    for (d, level) in g.levels.iter().enumerate() {
        for node in level {
            let (x1, y1) = pos(d, node);
            for target in [node.one, node.zero].into_iter().flatten() {
                let t = &g.levels[d + 1][target];
                let (x2, y2) = pos(d + 1, t);
                let _ = writeln!(
                    out,
                    r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#000000" stroke-width="2"/>"##
                );
            }
        }
    }
    for (d, level) in g.levels.iter().enumerate() {
        for node in level {
            let (x, y) = pos(d, node);
            let bridge = occupancy[&(d, node.rank)] > 1;
            let fill = if d == 0 {
                "#000000"
            } else if bridge {
                "#d62728"
            } else {
                "#1f77b4"
            };
            let class = if bridge { " class=\"bridge\"" } else { "" };
            let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="5" fill="{fill}"{class}/>"#);
            if d == n {
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-size="12" font-family="monospace">r{}</text>"#,
                    x + 8,
                    y + 14,
                    node.rank
                );
            }
        }
    }
    let m = g.metrics();
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-size="12" font-family="monospace">N={} L={}</text>"#,
        size - 8,
        m.nodes,
        m.links
    );
    out.push_str("</svg>\n");
    out
}

/// Random configuration helper shared by tests and the greedy search.
pub fn random_configuration(n: usize, rng: &mut impl Rng) -> (Vec<usize>, PhaseVector) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (order, PhaseVector((0..n).map(|_| rng.gen()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{sf_minterms, FullRankSet};

    fn xor2x2() -> MintermSet {
        MintermSet::from_strings(4, &["1010", "1001", "0110", "0101"])
    }

    fn id(n: usize) -> (Vec<usize>, PhaseVector) {
        ((0..n).collect(), PhaseVector::identity(n))
    }

    #[test]
    fn example_metrics() {
        let s = xor2x2();
        let (o, p) = id(4);
        let g = build_grid_dag(&s, &o, &p).unwrap();
        assert_eq!(g.metrics(), PlotMetrics { nodes: 6, links: 8 });
        let g = build_grid_dag(&s, &[0, 2, 1, 3], &p).unwrap();
        assert_eq!(g.metrics(), PlotMetrics { nodes: 9, links: 12 });
        let g = build_grid_dag(&s, &o, &PhaseVector::inverting(4, &[1, 2])).unwrap();
        assert_eq!(g.metrics(), PlotMetrics { nodes: 11, links: 12 });
    }

    #[test]
    fn small_metrics() {
        let g = build_grid_dag(&MintermSet::from_strings(1, &["1"]), &[0], &PhaseVector::identity(1)).unwrap();
        assert_eq!(g.metrics(), PlotMetrics { nodes: 1, links: 1 });
        let (o, p) = id(2);
        let g = build_grid_dag(&MintermSet::full(2), &o, &p).unwrap();
        assert_eq!(g.metrics(), PlotMetrics { nodes: 5, links: 6 });
        let g = build_grid_dag(&MintermSet::empty(3), &[0, 1, 2], &PhaseVector::identity(3)).unwrap();
        assert_eq!(g.metrics(), PlotMetrics { nodes: 0, links: 0 });
    }

    #[test]
    fn planarity_of_examples() {
        let s = xor2x2();
        let (o, p) = id(4);
        assert!(is_planar_plot(&build_grid_dag(&s, &o, &p).unwrap()));
        let left = build_grid_dag(&s, &[0, 2, 1, 3], &p).unwrap();
        assert!(!is_planar_plot(&left));
        assert_eq!(left.bridge_sites(), vec![(2, 1)]);
        for mask in 0..16u64 {
            let sf = sf_minterms(&FullRankSet::from_mask(3, mask));
            assert!(is_planar_plot(&build_grid_dag(&sf, &[0, 1, 2], &PhaseVector::identity(3)).unwrap()));
        }
    }

    #[test]
    fn planar_factor_examples() {
        let s = xor2x2();
        let (o, p) = id(4);
        let g = build_grid_dag(&s, &o, &p).unwrap();
        let (gs, hs) = planar_factor(&g, 2).unwrap();
        let xor = MintermSet::from_strings(2, &["10", "01"]);
        assert_eq!(gs, xor);
        assert_eq!(hs, xor);
        assert_eq!(gs.product(&hs), s);
        let left = build_grid_dag(&s, &[0, 2, 1, 3], &p).unwrap();
        assert!(planar_factor(&left, 2).is_none());
        let taut = build_grid_dag(&MintermSet::full(4), &o, &p).unwrap();
        assert!((1..4).all(|d| planar_factor(&taut, d).is_none()));
    }

    #[test]
    fn rank_cut_examples() {
        let (o, p) = id(4);
        let right = MintermSet::from_strings(4, &["0000", "0011", "1100", "1111"]);
        let g = build_grid_dag(&right, &o, &p).unwrap();
        let cut = rank_cut(&g, 2).unwrap();
        let h = MintermSet::from_strings(2, &["00", "11"]);
        assert_eq!(cut.len(), 2);
        assert_eq!((cut[0].rank, &cut[0].prefix, &cut[0].suffix), (0, &MintermSet::from_strings(2, &["00"]), &h));
        assert_eq!((cut[1].rank, &cut[1].prefix, &cut[1].suffix), (2, &MintermSet::from_strings(2, &["11"]), &h));

        let g = build_grid_dag(&xor2x2(), &o, &p).unwrap();
        let cut = rank_cut(&g, 2).unwrap();
        assert_eq!(cut.len(), 1);
        assert_eq!(cut[0].rank, 1);
        let left = build_grid_dag(&xor2x2(), &[0, 2, 1, 3], &p).unwrap();
        assert!(rank_cut(&left, 2).is_none());
    }

    #[test]
    fn accepted_round_trip() {
        let s = xor2x2();
        for order in permutations(4) {
            for mask in [0u64, 5, 6, 15] {
                let p = PhaseVector::from_mask(4, mask);
                let g = build_grid_dag(&s, &order, &p).unwrap();
                assert_eq!(g.accepted(), s);
            }
        }
    }

    #[test]
    fn minimize_interleaved_order() {
        // the xor pair presented in the interleaved order a,c,b,d
        let s = xor2x2().permute(&[0, 2, 1, 3]).unwrap();
        let l = minimize_layout(&s, SearchMode::Exhaustive).unwrap();
        assert_eq!(l.metrics.nodes, 6);
        assert_eq!(l.metrics.links, 8);
        let first: std::collections::BTreeSet<usize> = l.order[..2].iter().copied().collect();
        assert!(first == [0, 2].into() || first == [1, 3].into());
        let g = minimize_layout(&s, SearchMode::Greedy { seed: 7 }).unwrap();
        assert_eq!(g.metrics.nodes, 6);
    }

    #[test]
    fn minimize_single_minterm() {
        let s = MintermSet::from_strings(5, &["10110"]);
        let l = minimize_layout(&s, SearchMode::Greedy { seed: 1 }).unwrap();
        assert_eq!(l.metrics, PlotMetrics { nodes: 5, links: 5 });
        assert!(matches!(
            minimize_layout(&MintermSet::empty(9), SearchMode::Exhaustive),
            Err(Error::ExhaustiveTooLarge { n: 9, max: 8 })
        ));
    }

    #[test]
    fn symmetric_node_count_is_order_free() {
        let sf = sf_minterms(&FullRankSet::new(3, [1, 3]));
        let p = PhaseVector::identity(3);
        let counts: Vec<usize> = permutations(3)
            .iter()
            .map(|o| build_grid_dag(&sf, o, &p).unwrap().metrics().nodes)
            .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn pascal() {
        assert_eq!(pascal_counts(4)[4], [1, 4, 6, 4, 1]);
        assert_eq!(pascal_counts(0), vec![vec![1]]);
        assert_eq!(pascal_counts(2)[2], [1, 2, 1]);
        let (o, p) = id(6);
        let g = build_grid_dag(&MintermSet::full(6), &o, &p).unwrap();
        assert_eq!(g.paths_per_rank(), pascal_counts(6)[6]);
    }

    fn grid_lines(text: &str, n: usize) -> String {
        text.lines().skip(1).take(2 * n + 1).collect::<Vec<_>>().join("\n")
    }

    #[test]
    fn ascii_rendering() {
        let (o, p) = id(4);
        let text = render(&build_grid_dag(&xor2x2(), &o, &p).unwrap(), RenderStyle::Ascii);
        let grid = grid_lines(&text, 4);
        assert_eq!(grid.matches('o').count(), 6);
        assert_eq!(grid.matches('-').count() / 3 + grid.matches('|').count(), 8);
        assert!(!grid.contains('='));
        assert!(text.contains("N=6 L=8"));
        let left = render(&build_grid_dag(&xor2x2(), &[0, 2, 1, 3], &p).unwrap(), RenderStyle::Ascii);
        assert_eq!(grid_lines(&left, 4).matches('=').count(), 1);
        assert!(left.contains("bridge at depth 2 rank 1: 2 nodes"));
        let empty = render(&build_grid_dag(&MintermSet::empty(2), &[0, 1], &PhaseVector::identity(2)).unwrap(), RenderStyle::Ascii);
        let grid = grid_lines(&empty, 2);
        assert_eq!(grid.matches('+').count(), 1);
        assert_eq!(grid.matches('o').count(), 0);
    }

    #[test]
    fn svg_rendering() {
        let (o, p) = id(4);
        let left = render(&build_grid_dag(&xor2x2(), &[0, 2, 1, 3], &p).unwrap(), RenderStyle::Svg);
        assert!(left.starts_with("<svg"));
        assert_eq!(left.matches("<circle").count(), 10);
        assert_eq!(left.matches("class=\"bridge\"").count(), 2);
        assert_eq!(left.matches("<line").count(), 12);
        let again = render(&build_grid_dag(&xor2x2(), &[0, 2, 1, 3], &p).unwrap(), RenderStyle::Svg);
        assert_eq!(left, again);
        let _ = o;
    }
}
