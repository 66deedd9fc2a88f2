// SPDX-License-Identifier: Apache-2.0
//! Recursive decomposition of a cube cover into a phased network of
//! symmetric functions.
//!
//! Each step picks the best symmetric core `Core(Z)`, cuts it by rank of `Z`
//! into `sum_r SF[r](Z) * H_r(Y)`, recurses into every cofactor `H_r` and into
//! the cubes left outside the core, and ORs the pieces together. A function
//! that is already totally symmetric becomes a single SYM node.

use serde::{Deserialize, Serialize};

use crate::cube::{Cover, Cube, MintermSet};
use crate::error::{Error, Result};
use crate::netlist::{Builder, Netlist, Operand};
use crate::spectrum::{fullrank_set_if_symmetric, FullRankSet};
use crate::symmetry::{dc_partition, find_best_core, Core, CoreMeasure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeOptions {
    /// Split the top-level cover by DontCare count before decomposing.
    pub dc_partition: bool,
    pub max_depth: usize,
    pub measure: CoreMeasure,
    /// Largest sub-function arity for which exact minterm tests are run.
    pub exact_cap: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { dc_partition: false, max_depth: 4096, measure: CoreMeasure::Cubes, exact_cap: 20 }
    }
}

/// `SF[ranks](Z) * cofactor(Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTerm {
    pub ranks: FullRankSet,
    pub cofactor: Cover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Symmetric inputs, ascending.
    pub z: Vec<usize>,
    /// Remaining inputs, ascending; the cofactor covers are over these columns.
    pub y: Vec<usize>,
    /// One term per nonempty rank of `Z`, ascending by rank.
    pub terms: Vec<RankTerm>,
}

fn cofactor(cover: &Cover, fixed: &[(usize, bool)], keep: &[usize]) -> Cover {
    let cubes: Vec<usize> = cover
        .cubes()
        .iter()
        .enumerate()
        .filter(|(_, c)| fixed.iter().all(|&(i, v)| c.literal(i).admits(v)))
        .map(|(k, _)| k)
        .collect();
    cover.select(&cubes).project(keep).remove_contained()
}

fn same_function(a: &Cover, b: &Cover, cap: usize) -> bool {
    if a.n() <= cap {
        a.to_minterms_capped(cap).ok() == b.to_minterms_capped(cap).ok()
    } else {
        let mut x: Vec<&Cube> = a.cubes().iter().collect();
        let mut y: Vec<&Cube> = b.cubes().iter().collect();
        x.sort();
        y.sort();
        x == y
    }
}

/// Up to `limit` `r`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, r: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        if out.len() >= limit {
            return out;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] < n - r + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Cuts a symmetric core by the rank of its symmetric inputs.
pub fn factor_core(core: &Core) -> Result<Factorization> {
    factor_core_capped(core, DecomposeOptions::default().exact_cap)
}

fn factor_core_capped(core: &Core, cap: usize) -> Result<Factorization> {
    let n = core.base.n();
    let z = core.sorted_inputs();
    let y: Vec<usize> = (0..n).filter(|i| !z.contains(i)).collect();
    let phased = core.phased_cover();
    let assign = |ones: &[usize]| -> Vec<(usize, bool)> {
        z.iter().enumerate().map(|(k, &i)| (i, ones.contains(&k))).collect()
    };
    let mut terms = Vec::new();
    for r in 0..=z.len() {
        let choices = subsets(z.len(), r, 64);
        let h = cofactor(&phased, &assign(&choices[0]), &y);
        for other in &choices[1..] {
            let h2 = cofactor(&phased, &assign(other), &y);
            if !same_function(&h, &h2, cap) {
                return Err(Error::SymmetryViolation(format!(
                    "rank-{r} cofactors of the core over {z:?} differ"
                )));
            }
        }
        if h.m() > 0 {
            terms.push(RankTerm { ranks: FullRankSet::new(z.len(), [r]), cofactor: h });
        }
    }
    Ok(Factorization { z, y, terms })
}

struct Engine<'o> {
    b: Builder,
    opts: &'o DecomposeOptions,
}

impl Engine<'_> {
    fn inputs(&mut self, vars: &[usize]) -> Vec<Operand> {
        vars.iter().map(|&v| self.b.input(v, false)).collect()
    }

    fn run(&mut self, cover: &Cover, vars: &[usize], depth: usize) -> Result<Operand> {
        if depth > self.opts.max_depth {
            return Err(Error::RecursionDepth(self.opts.max_depth));
        }
        let mut cover = cover.remove_contained();
        let mut vars = vars.to_vec();
        if cover.m() == 0 {
            return Ok(self.b.constant(false));
        }
        if cover.cubes().iter().any(|c| c.dc_count() == c.len()) {
            return Ok(self.b.constant(true));
        }
        let support = cover.support();
        if support.len() < cover.n() {
            cover = cover.project(&support);
            vars = support.iter().map(|&i| vars[i]).collect();
        }
        let n = cover.n();
        if n <= self.opts.exact_cap {
            let s = cover.to_minterms_capped(self.opts.exact_cap)?;
            if s.is_full() {
                return Ok(self.b.constant(true));
            }
            if let Some(ranks) = fullrank_set_if_symmetric(&s) {
                let ops = self.inputs(&vars);
                return Ok(self.b.sym(ranks, ops));
            }
        }
        if depth == 0 && self.opts.dc_partition {
            let parts = dc_partition(&cover);
            if parts.len() > 1 {
                let ops = parts
                    .iter()
                    .map(|p| self.run(p, &vars, depth + 1))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(self.b.or(ops));
            }
        }
        match find_best_core(&cover, self.opts.measure) {
            Some(core) if core.width() >= 2 => self.expand(&cover, &core, &vars, depth),
            _ => self.shannon(&cover, &vars, depth),
        }
    }

    fn expand(&mut self, cover: &Cover, core: &Core, vars: &[usize], depth: usize) -> Result<Operand> {
        let f = factor_core_capped(core, self.opts.exact_cap)?;
        // Ranks with the same cofactor share one SYM node.
        let mut groups: Vec<(Vec<usize>, Cover)> = Vec::new();
        for term in f.terms {
            let r = *term.ranks.ranks.iter().next().unwrap();
            match groups.iter_mut().find(|(_, h)| same_function(h, &term.cofactor, self.opts.exact_cap)) {
                Some((ranks, _)) => ranks.push(r),
                None => groups.push((vec![r], term.cofactor)),
            }
        }
        let z_ops: Vec<Operand> = f
            .z
            .iter()
            .map(|&i| self.b.input(vars[i], core.phases.is_inverted(i)))
            .collect();
        let y_vars: Vec<usize> = f.y.iter().map(|&i| vars[i]).collect();
        let mut terms = Vec::with_capacity(groups.len());
        for (ranks, h) in groups {
            let g = self.b.sym(FullRankSet::new(f.z.len(), ranks), z_ops.clone());
            let h = self.run(&h, &y_vars, depth + 1)?;
            terms.push(self.b.and(vec![g, h]));
        }
        let core_op = self.b.or(terms);

        let rest: Vec<usize> = (0..cover.m()).filter(|k| core.cube_indices.binary_search(k).is_err()).collect();
        if rest.is_empty() {
            return Ok(core_op);
        }
        let remainder = self.run(&cover.select(&rest), vars, depth + 1)?;
        Ok(self.b.or(vec![core_op, remainder]))
    }

    /// Fallback when no pair core exists: `x * F|x=1 + x' * F|x=0` on the input
    /// whose cofactors have the fewest cubes in total.
    fn shannon(&mut self, cover: &Cover, vars: &[usize], depth: usize) -> Result<Operand> {
        let n = cover.n();
        let split = |x: usize| {
            let keep: Vec<usize> = (0..n).filter(|&i| i != x).collect();
            let hi = cofactor(cover, &[(x, true)], &keep);
            let lo = cofactor(cover, &[(x, false)], &keep);
            (keep, hi, lo)
        };
        let x = (0..n)
            .min_by_key(|&x| {
                let (_, hi, lo) = split(x);
                (hi.m() + lo.m(), x)
            })
            .expect("cover has at least one input");
        let (keep, hi, lo) = split(x);
        let rest: Vec<usize> = keep.iter().map(|&i| vars[i]).collect();
        let pos = self.b.input(vars[x], false);
        let neg = self.b.input(vars[x], true);
        let hi = self.run(&hi, &rest, depth + 1)?;
        let lo = self.run(&lo, &rest, depth + 1)?;
        let t1 = self.b.and(vec![pos, hi]);
        let t0 = self.b.and(vec![neg, lo]);
        Ok(self.b.or(vec![t1, t0]))
    }
}

pub fn decompose(c: &Cover, opts: &DecomposeOptions) -> Result<Netlist> {
    let mut engine = Engine { b: Builder::new(), opts };
    let vars: Vec<usize> = (0..c.n()).collect();
    let out = engine.run(c, &vars, 0)?;
    Ok(engine.b.finish(c.input_names(), out))
}

/// Minterm set of a netlist over its inputs, by exhaustive evaluation.
pub fn netlist_minterms(nl: &Netlist) -> MintermSet {
    let n = nl.inputs.len();
    MintermSet::from_indices(n, (0..1u64 << n).filter(|&i| nl.evaluate_index(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{verify, NodeKind};
    use crate::symmetry::pair_core;

    fn text(c: &Cover) -> String {
        decompose(c, &DecomposeOptions::default()).unwrap().to_text()
    }

    #[test]
    fn factor_carry_over_ab() {
        let c = Cover::from_strs(3, &["11-", "1-1", "-11"]).unwrap();
        let core = pair_core(&c, 0, 1, false);
        let f = factor_core(&core).unwrap();
        assert_eq!(f.z, [0, 1]);
        assert_eq!(f.y, [2]);
        assert_eq!(f.terms.len(), 2);
        assert_eq!(f.terms[0].ranks, FullRankSet::new(2, [1]));
        assert_eq!(f.terms[0].cofactor.to_minterms().unwrap(), MintermSet::from_strings(1, &["1"]));
        assert_eq!(f.terms[1].ranks, FullRankSet::new(2, [2]));
        assert!(f.terms[1].cofactor.to_minterms().unwrap().is_full());
    }

    #[test]
    fn factor_fully_symmetric_core() {
        let c = Cover::from_strs(3, &["11-", "1-1", "-11"]).unwrap();
        let (core, _) = crate::symmetry::expand_core(&pair_core(&c, 0, 1, false), &c);
        let f = factor_core(&core).unwrap();
        assert!(f.y.is_empty());
        let ranks: Vec<usize> = f.terms.iter().map(|t| *t.ranks.ranks.iter().next().unwrap()).collect();
        assert_eq!(ranks, [2, 3]);
        assert!(f.terms.iter().all(|t| t.cofactor.to_minterms().unwrap().is_full()));
    }

    #[test]
    fn factor_xor2x2() {
        let c = Cover::from_strs(4, &["1010", "1001", "0110", "0101"]).unwrap();
        let f = factor_core(&pair_core(&c, 0, 1, false)).unwrap();
        assert_eq!(f.terms.len(), 1);
        assert_eq!(f.terms[0].ranks, FullRankSet::new(2, [1]));
        assert_eq!(
            f.terms[0].cofactor.to_minterms().unwrap(),
            MintermSet::from_strings(2, &["10", "01"])
        );
    }

    #[test]
    fn decompose_examples() {
        let carry = Cover::from_strs(3, &["11-", "1-1", "-11"]).unwrap();
        assert_eq!(text(&carry), ".inputs a b c\nn0 SYM [2,3] a b c\n.output n0\n");
        let sum = Cover::from_strs(3, &["100", "010", "001", "111"]).unwrap();
        assert_eq!(text(&sum), ".inputs a b c\nn0 SYM [1,3] a b c\n.output n0\n");
        let xor2x2 = Cover::from_strs(4, &["1010", "1001", "0110", "0101"]).unwrap();
        assert_eq!(
            text(&xor2x2),
            ".inputs a b c d\nn0 SYM [1] a b\nn1 SYM [1] c d\nn2 AND n0 n1\n.output n2\n"
        );
    }

    #[test]
    fn constants_and_literals() {
        let zero = Cover::from_strs(2, &[]).unwrap();
        let nl = decompose(&zero, &DecomposeOptions::default()).unwrap();
        assert_eq!(nl.nodes[nl.output].kind, NodeKind::Const(false));
        let one = Cover::from_strs(2, &["1-", "0-"]).unwrap();
        let nl = decompose(&one, &DecomposeOptions::default()).unwrap();
        assert_eq!(nl.nodes[nl.output].kind, NodeKind::Const(true));
        let lit = Cover::from_strs(3, &["-0-"]).unwrap();
        let nl = decompose(&lit, &DecomposeOptions::default()).unwrap();
        assert!(verify(&nl, &lit).unwrap().is_equivalent());
        assert_eq!(nl.to_text(), ".inputs a b c\nn0 SYM [0] b\n.output n0\n");
    }

    #[test]
    fn phased_asymmetry() {
        // a'b is asymmetric in (a, b) but symmetric in (a', b)
        let c = Cover::from_strs(3, &["01-", "-11"]).unwrap();
        let nl = decompose(&c, &DecomposeOptions::default()).unwrap();
        assert!(verify(&nl, &c).unwrap().is_equivalent());
        assert!(nl.and_supports_disjoint());
    }

    #[test]
    fn shannon_fallback_is_sound() {
        let c = Cover::from_strs(2, &["1-", "01"]).unwrap();
        let nl = decompose(&c, &DecomposeOptions::default()).unwrap();
        assert!(verify(&nl, &c).unwrap().is_equivalent());
        let c = Cover::from_strs(4, &["1-0-", "01-1", "--11", "110-"]).unwrap();
        let nl = decompose(&c, &DecomposeOptions::default()).unwrap();
        assert!(verify(&nl, &c).unwrap().is_equivalent());
    }

    #[test]
    fn depth_guard() {
        let c = Cover::from_strs(4, &["1010", "1001", "0110", "0101", "1111"]).unwrap();
        let opts = DecomposeOptions { max_depth: 0, ..Default::default() };
        assert!(matches!(decompose(&c, &opts), Err(Error::RecursionDepth(0))));
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(4, 2, 100).len(), 6);
        assert_eq!(subsets(3, 0, 100), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3, 100), vec![vec![0, 1, 2]]);
        assert_eq!(subsets(10, 5, 7).len(), 7);
    }
}
