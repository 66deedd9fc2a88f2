// SPDX-License-Identifier: Apache-2.0
//! Rank spectra: minterm counts per popcount, full-rank symmetry tests and
//! the convolution rule for disjoint products.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cube::MintermSet;

/// Minterm counts per rank; `counts[r]` is the number of minterms with `r` ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankSpectrum {
    pub counts: Vec<u64>,
}

impl RankSpectrum {
    pub fn new(counts: Vec<u64>) -> RankSpectrum {
        assert!(!counts.is_empty(), "a spectrum has at least one rank");
        RankSpectrum { counts }
    }

    /// Spectrum of the constant-1 function of zero inputs; identity for [`convolve`].
    pub fn one() -> RankSpectrum {
        RankSpectrum { counts: vec![1] }
    }

    pub fn zero() -> RankSpectrum {
        RankSpectrum { counts: vec![0] }
    }

    /// Arity of the function the spectrum describes.
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_full(&self, r: usize) -> bool {
        self.counts[r] == binomial(self.n(), r)
    }
}

impl fmt::Display for RankSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// The set of full ranks `R` of a symmetric function `SF[R]` over `n` inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FullRankSet {
    pub n: usize,
    pub ranks: BTreeSet<usize>,
}

impl FullRankSet {
    pub fn new(n: usize, ranks: impl IntoIterator<Item = usize>) -> FullRankSet {
        let ranks: BTreeSet<usize> = ranks.into_iter().collect();
        assert!(ranks.iter().all(|&r| r <= n), "rank out of range for arity {n}");
        FullRankSet { n, ranks }
    }

    /// Rank set from a bit mask, bit `r` selecting rank `r`.
    pub fn from_mask(n: usize, mask: u64) -> FullRankSet {
        FullRankSet::new(n, (0..=n).filter(|&r| mask >> r & 1 == 1))
    }

    pub fn contains(&self, r: usize) -> bool {
        self.ranks.contains(&r)
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// True when every rank is present (the constant-1 function).
    pub fn is_all(&self) -> bool {
        self.ranks.len() == self.n + 1
    }

    /// Rank set of the complemented function.
    pub fn complement(&self) -> FullRankSet {
        FullRankSet::new(self.n, (0..=self.n).filter(|r| !self.ranks.contains(r)))
    }

    /// Evaluates `SF[R]` on an input vector with `ones` inputs high.
    pub fn eval_popcount(&self, ones: usize) -> bool {
        self.ranks.contains(&ones)
    }
}

impl fmt::Display for FullRankSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.ranks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Counts the members of `s` per popcount.
pub fn spectrum_of(s: &MintermSet) -> RankSpectrum {
    let mut counts = vec![0u64; s.n() + 1];
    for m in s.iter() {
        counts[m.count_ones() as usize] += 1;
    }
    RankSpectrum { counts }
}

/// Longhand multiplication of two spectra without carry.
pub fn convolve(g: &RankSpectrum, h: &RankSpectrum) -> RankSpectrum {
    let mut counts = vec![0u64; g.counts.len() + h.counts.len() - 1];
    for (i, &a) in g.counts.iter().enumerate() {
        for (j, &b) in h.counts.iter().enumerate() {
            counts[i + j] += a * b;
        }
    }
    RankSpectrum { counts }
}

/// The full-rank set of `s` if every rank is either full or empty.
pub fn fullrank_set_if_symmetric(s: &MintermSet) -> Option<FullRankSet> {
    let sp = spectrum_of(s);
    let n = s.n();
    let mut ranks = BTreeSet::new();
    for (r, &c) in sp.counts.iter().enumerate() {
        if c == binomial(n, r) {
            ranks.insert(r);
        } else if c != 0 {
            return None;
        }
    }
    Some(FullRankSet { n, ranks })
}

/// All minterms whose popcount lies in the rank set.
pub fn sf_minterms(f: &FullRankSet) -> MintermSet {
    MintermSet::from_indices(
        f.n,
        (0..1u64 << f.n).filter(|m| f.ranks.contains(&(m.count_ones() as usize))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_examples() {
        let xor2x2 = MintermSet::from_strings(4, &["1010", "1001", "0110", "0101"]);
        assert_eq!(spectrum_of(&xor2x2).counts, [0, 0, 4, 0, 0]);
        assert_eq!(spectrum_of(&MintermSet::full(4)).counts, [1, 4, 6, 4, 1]);
        let phased = MintermSet::from_strings(4, &["0000", "0011", "1100", "1111"]);
        assert_eq!(spectrum_of(&phased).to_string(), "[1,0,2,0,1]");
    }

    #[test]
    fn convolve_examples() {
        let g = RankSpectrum::new(vec![0, 2, 0]);
        let h = RankSpectrum::new(vec![0, 3, 3, 1]);
        assert_eq!(convolve(&h, &g).counts, [0, 0, 6, 6, 2, 0]);
        assert_eq!(convolve(&g, &h).counts, [0, 0, 6, 6, 2, 0]);
        assert_eq!(convolve(&h, &RankSpectrum::one()), h);
        let one_input = RankSpectrum::new(vec![1, 1]);
        assert_eq!(convolve(&one_input, &one_input).counts, [1, 2, 1]);
        assert_eq!(convolve(&g, &RankSpectrum::zero()).counts, [0, 0, 0]);
    }

    #[test]
    fn symmetry_examples() {
        let carry = MintermSet::from_strings(3, &["110", "101", "011", "111"]);
        assert_eq!(fullrank_set_if_symmetric(&carry), Some(FullRankSet::new(3, [2, 3])));
        let parity = MintermSet::from_indices(4, (0..16).filter(|m: &u64| m.count_ones() % 2 == 1));
        assert_eq!(fullrank_set_if_symmetric(&parity), Some(FullRankSet::new(4, [1, 3])));
        let xor2x2 = MintermSet::from_strings(4, &["1010", "1001", "0110", "0101"]);
        assert_eq!(fullrank_set_if_symmetric(&xor2x2), None);
    }

    #[test]
    fn sf_examples() {
        assert_eq!(sf_minterms(&FullRankSet::new(3, [1, 2, 3])).len(), 7);
        assert_eq!(
            sf_minterms(&FullRankSet::new(3, [3])),
            MintermSet::from_strings(3, &["111"])
        );
        assert!(sf_minterms(&FullRankSet::new(4, [])).is_empty());
    }

    #[test]
    fn binomials() {
        assert_eq!((0..=4).map(|k| binomial(4, k)).collect::<Vec<_>>(), [1, 4, 6, 4, 1]);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(30, 15), 155117520);
    }

    #[test]
    fn display_formats() {
        assert_eq!(FullRankSet::new(3, [2, 3]).to_string(), "[2,3]");
        assert_eq!(FullRankSet::new(3, []).to_string(), "[]");
    }
}
