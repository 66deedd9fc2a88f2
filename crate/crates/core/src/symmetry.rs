// SPDX-License-Identifier: Apache-2.0
//! Partial-symmetry detection on cube covers.
//!
//! A core is a sub-list of cubes which, after phasing some inputs, is closed
//! under every transposition of an input subset `Z`. Closure is checked on the
//! cube list itself: a cube stays only if its swapped image is also present
//! (or the swap leaves it unchanged). A closed list has a minterm set that is
//! invariant under the whole symmetric group on `Z`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cube::{Cover, Cube, MintermSet, PhaseVector, DEFAULT_EXPANSION_CAP};
use crate::error::{Error, Result};

/// What a core's size counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreMeasure {
    #[default]
    Cubes,
    /// Sum of `2^dc` over the core's cubes.
    Minterms,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Core<'a> {
    pub base: &'a Cover,
    /// Ascending indices into `base.cubes()`.
    pub cube_indices: Vec<usize>,
    /// `Z`, in the order the inputs joined the core.
    pub sym_inputs: Vec<usize>,
    /// Full-width phase vector; only entries in `Z` may be set.
    pub phases: PhaseVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoreScore {
    pub cube_count: usize,
    pub width: usize,
    pub score: usize,
}

impl CoreScore {
    pub fn new(cube_count: usize, width: usize) -> CoreScore {
        CoreScore { cube_count, width, score: cube_count * width * width }
    }
}

impl<'a> Core<'a> {
    /// The trivial width-1 core holding every cube; used for single-input covers.
    pub fn whole(base: &'a Cover, input: usize) -> Core<'a> {
        Core {
            base,
            cube_indices: (0..base.m()).collect(),
            sym_inputs: vec![input],
            phases: PhaseVector::identity(base.n()),
        }
    }

    pub fn len(&self) -> usize {
        self.cube_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cube_indices.is_empty()
    }

    pub fn width(&self) -> usize {
        self.sym_inputs.len()
    }

    pub fn score(&self) -> CoreScore {
        CoreScore::new(self.len(), self.width())
    }

    pub fn inverted_count(&self) -> usize {
        self.phases.inverted_count()
    }

    /// `Z` in ascending input order.
    pub fn sorted_inputs(&self) -> Vec<usize> {
        let mut z = self.sym_inputs.clone();
        z.sort_unstable();
        z
    }

    /// The selected cubes with the core's phases applied.
    pub fn phased_cover(&self) -> Cover {
        self.base
            .select(&self.cube_indices)
            .apply_phase(&self.phases)
            .expect("phase vector has cover width")
    }

    /// Exact check that the phased cubes are symmetric over `Z`.
    pub fn is_sound(&self) -> bool {
        let cover = self.phased_cover();
        if cover.n() <= DEFAULT_EXPANSION_CAP {
            is_symmetric_in(&cover.to_minterms().expect("under cap"), &self.sym_inputs)
        } else {
            let phased: Vec<Cube> = cover.cubes().to_vec();
            let all: Vec<usize> = (0..phased.len()).collect();
            closed_subset(&phased, &all, &adjacent_pairs(&self.sym_inputs)).len() == phased.len()
        }
    }

    fn measure(&self, how: CoreMeasure) -> usize {
        match how {
            CoreMeasure::Cubes => self.len(),
            CoreMeasure::Minterms => self
                .cube_indices
                .iter()
                .map(|&i| 1usize << self.base.cubes()[i].dc_count().min(63))
                .sum(),
        }
    }
}

/// True iff `s` is invariant under every permutation of the inputs in `z`.
pub fn is_symmetric_in(s: &MintermSet, z: &[usize]) -> bool {
    adjacent_pairs(z).into_iter().all(|(x, y)| {
        s.iter().all(|m| {
            let bx = m >> x & 1;
            let by = m >> y & 1;
            let swapped = if bx == by { m } else { m ^ (1 << x | 1 << y) };
            s.contains(swapped)
        })
    })
}

fn adjacent_pairs(z: &[usize]) -> Vec<(usize, usize)> {
    z.windows(2).map(|w| (w[0], w[1])).collect()
}

fn phase_cube(c: &Cube, phases: &PhaseVector) -> Cube {
    Cube::new(
        c.literals()
            .iter()
            .zip(&phases.0)
            .map(|(&l, &inv)| if inv { l.complement() } else { l })
            .collect(),
    )
}

/// Largest sub-list of `candidates` closed under the given transpositions.
///
/// Worklist pruning: removing the last copy of a cube only affects the cubes
/// that map onto it, so total work is linear in the candidate count.
fn closed_subset(cubes: &[Cube], candidates: &[usize], generators: &[(usize, usize)]) -> Vec<usize> {
    let mut present: HashMap<&Cube, usize> = HashMap::with_capacity(candidates.len());
    let mut holders: HashMap<&Cube, Vec<usize>> = HashMap::with_capacity(candidates.len());
    for &i in candidates {
        *present.entry(&cubes[i]).or_insert(0) += 1;
        holders.entry(&cubes[i]).or_default().push(i);
    }
    let mut alive = vec![false; cubes.len()];
    for &i in candidates {
        alive[i] = true;
    }
    let mut queue: Vec<usize> = candidates.iter().rev().copied().collect();

    while let Some(i) = queue.pop() {
        if !alive[i] {
            continue;
        }
        let cube = &cubes[i];
        let broken = generators.iter().any(|&(x, y)| {
            cube.literal(x) != cube.literal(y)
                && present.get(&cube.swapped(x, y)).copied().unwrap_or(0) == 0
        });
        if !broken {
            continue;
        }
        alive[i] = false;
        let count = present.get_mut(cube).unwrap();
        *count -= 1;
        if *count == 0 {
            for &(x, y) in generators {
                if let Some(list) = holders.get(&cube.swapped(x, y)) {
                    queue.extend(list.iter().copied().filter(|&j| alive[j]));
                }
            }
        }
    }
    let mut out: Vec<usize> = candidates.iter().copied().filter(|&i| alive[i]).collect();
    out.sort_unstable();
    out
}

fn phased_cubes(c: &Cover, phases: &PhaseVector) -> Vec<Cube> {
    c.cubes().iter().map(|cube| phase_cube(cube, phases)).collect()
}

/// Cubes symmetric in `(a, b)` after optionally complementing column `a`.
pub fn pair_core(c: &Cover, a: usize, b: usize, invert_a: bool) -> Core<'_> {
    let mut phases = PhaseVector::identity(c.n());
    phases.0[a] = invert_a;
    pair_core_phased(c, a, b, phases)
}

/// Pair core under an arbitrary phasing of `a` and `b`.
pub fn pair_core_phased(c: &Cover, a: usize, b: usize, phases: PhaseVector) -> Core<'_> {
    assert_ne!(a, b, "pair core needs two distinct inputs");
    let cubes = phased_cubes(c, &phases);
    let all: Vec<usize> = (0..cubes.len()).collect();
    let cube_indices = closed_subset(&cubes, &all, &[(a, b)]);
    Core { base: c, cube_indices, sym_inputs: vec![a, b], phases }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairChoice<'a> {
    pub invert_a: bool,
    pub core: Core<'a>,
}

/// For each unordered pair `(a, b)`, `a < b`, the larger of the plain and the
/// `a`-inverted pair cores. Ties keep the plain phase.
pub fn best_pair_cores(c: &Cover) -> BTreeMap<(usize, usize), PairChoice<'_>> {
    best_pair_cores_with(c, CoreMeasure::Cubes)
}

pub fn best_pair_cores_with(c: &Cover, how: CoreMeasure) -> BTreeMap<(usize, usize), PairChoice<'_>> {
    let n = c.n();
    let plain = phased_cubes(c, &PhaseVector::identity(n));
    let all: Vec<usize> = (0..plain.len()).collect();
    let mut out = BTreeMap::new();
    for a in 0..n {
        let mut inv_phases = PhaseVector::identity(n);
        inv_phases.0[a] = true;
        let inverted = phased_cubes(c, &inv_phases);
        for b in a + 1..n {
            let p = Core {
                base: c,
                cube_indices: closed_subset(&plain, &all, &[(a, b)]),
                sym_inputs: vec![a, b],
                phases: PhaseVector::identity(n),
            };
            let q = Core {
                base: c,
                cube_indices: closed_subset(&inverted, &all, &[(a, b)]),
                sym_inputs: vec![a, b],
                phases: inv_phases.clone(),
            };
            let choice = if q.measure(how) > p.measure(how) {
                PairChoice { invert_a: true, core: q }
            } else {
                PairChoice { invert_a: false, core: p }
            };
            out.insert((a, b), choice);
        }
    }
    out
}

/// Greedily widens a core one input at a time while `cubes * width^2` grows.
pub fn expand_core<'a>(seed: &Core<'a>, c: &'a Cover) -> (Core<'a>, CoreScore) {
    expand_core_with(seed, c, CoreMeasure::Cubes)
}

pub fn expand_core_with<'a>(seed: &Core<'a>, c: &'a Cover, how: CoreMeasure) -> (Core<'a>, CoreScore) {
    let score_of = |core: &Core| core.measure(how) * core.width() * core.width();
    let mut current = seed.clone();
    loop {
        let current_score = score_of(&current);
        let mut best: Option<(usize, Core<'a>)> = None;
        for input in 0..c.n() {
            if current.sym_inputs.contains(&input) {
                continue;
            }
            for invert in [false, true] {
                let mut phases = current.phases.clone();
                phases.0[input] = invert;
                let cubes = phased_cubes(c, &phases);
                let mut z = current.sym_inputs.clone();
                z.push(input);
                let kept = closed_subset(&cubes, &current.cube_indices, &adjacent_pairs(&z));
                let cand = Core { base: c, cube_indices: kept, sym_inputs: z, phases };
                let s = score_of(&cand);
                let better = match &best {
                    None => true,
                    Some((bs, b)) => s > *bs || (s == *bs && cand.inverted_count() < b.inverted_count()),
                };
                if better {
                    best = Some((s, cand));
                }
            }
        }
        match best {
            Some((s, cand)) if s > current_score => current = cand,
            _ => break,
        }
    }
    let score = current.score();
    (current, score)
}

/// Highest score; ties by width, then fewer inversions, then smallest sorted `Z`.
pub fn select_best_core<'a>(cands: Vec<(Core<'a>, CoreScore)>) -> Result<Core<'a>> {
    cands
        .into_iter()
        .min_by(|(a, sa), (b, sb)| {
            sb.score
                .cmp(&sa.score)
                .then(sb.width.cmp(&sa.width))
                .then(a.inverted_count().cmp(&b.inverted_count()))
                .then(a.sorted_inputs().cmp(&b.sorted_inputs()))
        })
        .map(|(core, _)| core)
        .ok_or(Error::EmptyCandidates)
}

/// Pair search, expansion of the largest pair cores and selection of the best
/// core. Returns `None` when every pair core is empty.
pub fn find_best_core(c: &Cover, how: CoreMeasure) -> Option<Core<'_>> {
    if c.n() < 2 {
        return (c.n() == 1).then(|| Core::whole(c, 0));
    }
    let pairs = best_pair_cores_with(c, how);
    let top = pairs.values().map(|p| p.core.measure(how)).max().unwrap_or(0);
    if top == 0 {
        return None;
    }
    let cands: Vec<(Core, CoreScore)> = pairs
        .values()
        .filter(|p| p.core.measure(how) == top)
        .map(|p| expand_core_with(&p.core, c, how))
        .collect();
    select_best_core(cands).ok()
}

/// Splits the cover by DontCare count, parts in order of first appearance.
pub fn dc_partition(c: &Cover) -> Vec<Cover> {
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, cube) in c.cubes().iter().enumerate() {
        let dc = cube.dc_count();
        match groups.iter_mut().find(|(k, _)| *k == dc) {
            Some((_, list)) => list.push(i),
            None => groups.push((dc, vec![i])),
        }
    }
    groups.into_iter().map(|(_, idx)| c.select(&idx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carry() -> Cover {
        Cover::from_strs(3, &["11-", "1-1", "-11"]).unwrap()
    }

    fn xor2x2() -> Cover {
        Cover::from_strs(4, &["1010", "1001", "0110", "0101"]).unwrap()
    }

    fn parity4() -> Cover {
        let s = MintermSet::from_indices(4, (0..16u64).filter(|m| m.count_ones() % 2 == 1));
        Cover::from_minterms(&s)
    }

    #[test]
    fn pair_core_examples() {
        let c = carry();
        assert_eq!(pair_core(&c, 0, 1, false).cube_indices, [0, 1, 2]);
        let c = Cover::from_strs(3, &["10-", "0-1"]).unwrap();
        assert!(pair_core(&c, 0, 1, false).is_empty());
        assert_eq!(pair_core(&c, 0, 1, true).cube_indices, [0]);
        let c = Cover::from_strs(2, &["01"]).unwrap();
        assert!(pair_core(&c, 0, 1, false).is_empty());
        assert_eq!(pair_core(&c, 0, 1, true).len(), 1);
    }

    #[test]
    fn both_inverted_equals_plain() {
        for c in [carry(), xor2x2(), Cover::from_strs(3, &["10-", "0-1", "-10"]).unwrap()] {
            for a in 0..c.n() {
                for b in 0..c.n() {
                    if a == b {
                        continue;
                    }
                    let both = pair_core_phased(&c, a, b, PhaseVector::inverting(c.n(), &[a, b]));
                    assert_eq!(both.cube_indices, pair_core(&c, a, b, false).cube_indices);
                }
            }
        }
    }

    #[test]
    fn best_pairs() {
        let c = carry();
        let best = best_pair_cores(&c);
        assert_eq!(best.len(), 3);
        assert!(best.values().all(|p| !p.invert_a && p.core.len() == 3));

        let c = xor2x2();
        let best = best_pair_cores(&c);
        assert_eq!(best[&(0, 1)].core.len(), 4);
        assert_eq!(best[&(2, 3)].core.len(), 4);
        // no other pair is symmetric on all four cubes
        for (k, v) in &best {
            if *k != (0, 1) && *k != (2, 3) {
                assert!(v.core.len() < 4, "{k:?}");
            }
        }

        let c = Cover::from_strs(2, &["10"]).unwrap();
        let best = best_pair_cores(&c);
        assert!(best[&(0, 1)].invert_a);
        assert_eq!(best[&(0, 1)].core.len(), 1);
    }

    #[test]
    fn expansion() {
        let c = carry();
        let seed = pair_core(&c, 0, 1, false);
        let (core, score) = expand_core(&seed, &c);
        assert_eq!(core.sorted_inputs(), [0, 1, 2]);
        assert_eq!(score, CoreScore { cube_count: 3, width: 3, score: 27 });

        let c = xor2x2();
        let seed = pair_core(&c, 0, 1, false);
        let (core, score) = expand_core(&seed, &c);
        assert_eq!(core.sorted_inputs(), [0, 1]);
        assert_eq!(score.score, 16);

        let c = parity4();
        let seed = pair_core(&c, 0, 1, false);
        let (core, score) = expand_core(&seed, &c);
        assert_eq!(core.sorted_inputs(), [0, 1, 2, 3]);
        assert_eq!(score.score, 8 * 16);
        assert!(core.is_sound());
    }

    #[test]
    fn xor2x2_has_no_symmetric_triple() {
        let s = xor2x2().to_minterms().unwrap();
        for z in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
            for mask in 0..16 {
                let p = s.apply_phase(&PhaseVector::from_mask(4, mask)).unwrap();
                assert!(!is_symmetric_in(&p, &z));
            }
        }
    }

    #[test]
    fn selection_rules() {
        let c = carry();
        let wide = expand_core(&pair_core(&c, 0, 1, false), &c);
        let narrow = (pair_core(&c, 0, 2, false), CoreScore::new(4, 2));
        assert_eq!(select_best_core(vec![narrow.clone(), wide.clone()]).unwrap().width(), 3);

        let a = (pair_core(&c, 0, 1, false), CoreScore { cube_count: 4, width: 2, score: 36 });
        let b = (pair_core(&c, 0, 2, false), CoreScore { cube_count: 4, width: 3, score: 36 });
        assert_eq!(select_best_core(vec![a.clone(), b]).unwrap().sym_inputs, [0, 2]);
        assert_eq!(select_best_core(vec![a.clone()]).unwrap(), a.0);
        assert!(matches!(select_best_core(vec![]), Err(Error::EmptyCandidates)));
    }

    #[test]
    fn partition_by_dc_count() {
        let c = Cover::from_strs(3, &["11-", "1-1", "-11", "111"]).unwrap();
        let parts = dc_partition(&c);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].m(), 3);
        assert_eq!(parts[1].cubes()[0].to_string(), "111");
        assert_eq!(dc_partition(&parity4()).len(), 1);
        assert!(dc_partition(&Cover::from_strs(3, &[]).unwrap()).is_empty());
    }

    #[test]
    fn minterm_measure_switch() {
        let c = Cover::from_strs(3, &["1--", "01-", "10-"]).unwrap();
        let by_cubes = best_pair_cores_with(&c, CoreMeasure::Cubes);
        let by_minterms = best_pair_cores_with(&c, CoreMeasure::Minterms);
        assert_eq!(by_cubes.len(), by_minterms.len());
        assert!(find_best_core(&c, CoreMeasure::Minterms).unwrap().is_sound());
    }
}
