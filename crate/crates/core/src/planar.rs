// SPDX-License-Identifier: Apache-2.0
//! Planar functions: existence of a planar grid plot under some input order
//! and phasing, link-deleted SF templates, and exhaustive surveys.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{MintermSet, PhaseVector};
use crate::error::{Error, Result};
use crate::grid::{build_grid_dag, is_planar_plot, permutations};

/// Largest arity [`is_planar_function`] searches exhaustively.
pub const MAX_PLANAR_SEARCH: usize = 6;
/// Largest arity [`survey_planarity`] sweeps.
pub const MAX_SURVEY: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// Input value 1; the rank grows.
    One,
    /// Input value 0; the rank stays.
    Zero,
}

/// A template link leaving grid point `(depth, rank)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TemplateLink {
    pub depth: usize,
    pub rank: usize,
    pub dir: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateGrid {
    pub n: usize,
    pub links: BTreeSet<TemplateLink>,
}

impl TemplateGrid {
    /// The template of the n-input tautology: both links at every point `0 <= r <= d < n`.
    pub fn full(n: usize) -> TemplateGrid {
        let links = (0..n)
            .flat_map(|depth| {
                (0..=depth).flat_map(move |rank| {
                    [Direction::One, Direction::Zero].map(|dir| TemplateLink { depth, rank, dir })
                })
            })
            .collect();
        TemplateGrid { n, links }
    }
}

/// Minterms of all origin-to-diagonal paths that avoid `deleted`, walking the
/// inputs in index order.
pub fn derive_pf(t: &TemplateGrid, deleted: &BTreeSet<TemplateLink>) -> MintermSet {
    let n = t.n;
    let alive = |l: &TemplateLink| t.links.contains(l) && !deleted.contains(l);
    MintermSet::from_indices(
        n,
        (0..1u64 << n).filter(|&x| {
            let mut rank = 0;
            (0..n).all(|depth| {
                let one = x >> depth & 1 == 1;
                let dir = if one { Direction::One } else { Direction::Zero };
                let ok = alive(&TemplateLink { depth, rank, dir });
                rank += one as usize;
                ok
            })
        }),
    )
}

/// Configurations in search order: permutations lexicographically, phase masks ascending.
fn configurations(n: usize) -> impl Iterator<Item = (Vec<usize>, PhaseVector)> {
    permutations(n)
        .into_iter()
        .flat_map(move |p| (0..1u64 << n).map(move |m| (p.clone(), PhaseVector::from_mask(n, m))))
}

/// A configuration with a planar plot, if any exists.
pub fn is_planar_function(s: &MintermSet) -> Result<Option<(Vec<usize>, PhaseVector)>> {
    let n = s.n();
    if n > MAX_PLANAR_SEARCH {
        return Err(Error::ExhaustiveTooLarge { n, max: MAX_PLANAR_SEARCH });
    }
    if n == 0 {
        return Ok(Some((vec![], PhaseVector::identity(0))));
    }
    for (order, phases) in configurations(n) {
        let g = build_grid_dag(s, &order, &phases)?;
        if is_planar_plot(&g) {
            return Ok(Some((order, phases)));
        }
    }
    Ok(None)
}

/// Index maps for truth-table transforms: `maps[c][x]` is the word of minterm `x`
/// under configuration `c`, step 0 as the most significant bit.
fn word_maps(n: usize) -> Vec<Vec<u8>> {
    configurations(n)
        .map(|(order, phases)| {
            let pm = phases.mask();
            (0..1u64 << n)
                .map(|x| {
                    let x = x ^ pm;
                    order.iter().enumerate().fold(0u8, |w, (k, &i)| w | ((x >> i & 1) as u8) << (n - 1 - k))
                })
                .collect()
        })
        .collect()
}

fn transform(tt: u16, map: &[u8]) -> u16 {
    map.iter().enumerate().fold(0u16, |acc, (x, &w)| acc | (tt >> x & 1) << w)
}

/// Plot planarity on a word-indexed truth table: at every depth, prefixes of
/// equal rank with a nonempty suffix block must have the same block.
fn plot_is_planar(words: u16, n: usize) -> bool {
    for d in 1..n {
        let width = 1usize << (n - d);
        let mask = ((1u32 << width) - 1) as u16;
        let mut seen: [Option<u16>; 8] = [None; 8];
        for p in 0..1usize << d {
            let block = words >> (p * width) & mask;
            if block == 0 {
                continue;
            }
            let r = p.count_ones() as usize;
            match seen[r] {
                Some(b) if b != block => return false,
                _ => seen[r] = Some(block),
            }
        }
    }
    true
}

fn tt_planar(tt: u16, n: usize, maps: &[Vec<u8>]) -> bool {
    maps.iter().any(|m| plot_is_planar(transform(tt, m), n))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurveyMode {
    /// Check every truth table.
    #[default]
    Direct,
    /// Check one function per permutation/phase orbit and share the verdict.
    Classes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survey {
    pub n: usize,
    pub total: u64,
    pub planar: u64,
    /// Up to ten non-planar truth tables, ascending; bit `x` is minterm `x`.
    pub nonplanar: Vec<u64>,
}

pub fn survey_planarity(n: usize) -> Result<Survey> {
    survey_planarity_with(n, SurveyMode::Direct)
}

pub fn survey_planarity_with(n: usize, mode: SurveyMode) -> Result<Survey> {
    if n > MAX_SURVEY {
        return Err(Error::ExhaustiveTooLarge { n, max: MAX_SURVEY });
    }
    let total = 1u64 << (1u64 << n);
    if n == 0 {
        return Ok(Survey { n, total, planar: total, nonplanar: vec![] });
    }
    let maps = word_maps(n);
    let verdicts: Vec<bool> = match mode {
        SurveyMode::Direct => (0..total).into_par_iter().map(|tt| tt_planar(tt as u16, n, &maps)).collect(),
        SurveyMode::Classes => {
            let mut v: Vec<Option<bool>> = vec![None; total as usize];
            for tt in 0..total as usize {
                if v[tt].is_some() {
                    continue;
                }
                let planar = tt_planar(tt as u16, n, &maps);
                // configurations form a group, so the inverse images are the orbit too
                for m in &maps {
                    v[transform(tt as u16, m) as usize] = Some(planar);
                }
            }
            v.into_iter().map(|b| b.expect("every orbit visited")).collect()
        }
    };
    let planar = verdicts.iter().filter(|&&b| b).count() as u64;
    let nonplanar = (0..total).filter(|&tt| !verdicts[tt as usize]).take(10).collect();
    Ok(Survey { n, total, planar, nonplanar })
}

/// Minterm set of a truth table with bit `x` for minterm `x`.
pub fn truth_table_set(n: usize, tt: u64) -> MintermSet {
    MintermSet::from_indices(n, (0..1u64 << n).filter(|x| tt >> x & 1 == 1))
}
