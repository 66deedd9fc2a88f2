// SPDX-License-Identifier: Apache-2.0
//! Two-level cube covers, their PLA text form, and exact minterm semantics.
//!
//! Minterm indices use one bit per input: input `i` is bit `i` of the index,
//! input 0 least significant. Every module in the crate uses this convention.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the input count for exact minterm expansion.
pub const DEFAULT_EXPANSION_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Literal {
    Zero,
    One,
    DontCare,
}

impl Literal {
    pub fn from_char(ch: char) -> Option<Literal> {
        match ch {
            '0' => Some(Literal::Zero),
            '1' => Some(Literal::One),
            '-' => Some(Literal::DontCare),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Literal::Zero => '0',
            Literal::One => '1',
            Literal::DontCare => '-',
        }
    }

    pub fn complement(self) -> Literal {
        match self {
            Literal::Zero => Literal::One,
            Literal::One => Literal::Zero,
            Literal::DontCare => Literal::DontCare,
        }
    }

    /// True when an input carrying `value` satisfies this literal.
    #[inline]
    pub fn admits(self, value: bool) -> bool {
        match self {
            Literal::Zero => !value,
            Literal::One => value,
            Literal::DontCare => true,
        }
    }
}

/// A product term: one literal per circuit input.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    lits: Vec<Literal>,
}

impl Cube {
    pub fn new(lits: Vec<Literal>) -> Cube {
        Cube { lits }
    }

    /// Parses a literal string such as `1-0`. Returns the offending character on failure.
    pub fn parse(s: &str) -> std::result::Result<Cube, char> {
        s.chars()
            .map(|ch| Literal::from_char(ch).ok_or(ch))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Cube::new)
    }

    pub fn tautology(n: usize) -> Cube {
        Cube::new(vec![Literal::DontCare; n])
    }

    /// The cube of a single minterm index over `n` inputs.
    pub fn from_minterm(n: usize, index: u64) -> Cube {
        Cube::new(
            (0..n)
                .map(|i| if index >> i & 1 == 1 { Literal::One } else { Literal::Zero })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn literal(&self, i: usize) -> Literal {
        self.lits[i]
    }

    pub fn set_literal(&mut self, i: usize, lit: Literal) {
        self.lits[i] = lit;
    }

    pub fn dc_count(&self) -> usize {
        self.lits.iter().filter(|&&l| l == Literal::DontCare).count()
    }

    /// True if the assignment (bit `i` = input `i`) lies in this cube.
    #[inline]
    pub fn matches_index(&self, index: u64) -> bool {
        self.lits
            .iter()
            .enumerate()
            .all(|(i, l)| l.admits(index >> i & 1 == 1))
    }

    pub fn matches(&self, assignment: &[bool]) -> bool {
        self.lits.iter().zip(assignment).all(|(l, &v)| l.admits(v))
    }

    /// Returns the cube with the literals in columns `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Cube {
        let mut c = self.clone();
        c.lits.swap(a, b);
        c
    }

    /// Returns the cube with column `i` complemented.
    pub fn with_complemented(&self, i: usize) -> Cube {
        let mut c = self.clone();
        c.lits[i] = c.lits[i].complement();
        c
    }

    /// Single-cube containment: every minterm of `other` lies in `self`.
    pub fn contains(&self, other: &Cube) -> bool {
        self.lits
            .iter()
            .zip(&other.lits)
            .all(|(&a, &b)| a == Literal::DontCare || a == b)
    }

    /// Care and value bit masks. Only valid for cubes of at most 64 inputs.
    pub(crate) fn masks(&self) -> (u64, u64) {
        let mut care = 0u64;
        let mut value = 0u64;
        for (i, l) in self.lits.iter().enumerate() {
            match l {
                Literal::Zero => care |= 1 << i,
                Literal::One => {
                    care |= 1 << i;
                    value |= 1 << i;
                }
                Literal::DontCare => {}
            }
        }
        (care, value)
    }

    /// Calls `f` on every minterm index covered by the cube (at most 64 inputs).
    pub(crate) fn for_each_minterm(&self, mut f: impl FnMut(u64)) {
        let n = self.lits.len();
        let (care, value) = self.masks();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let free = full & !care;
        let mut sub = 0u64;
        loop {
            f(value | sub);
            sub = sub.wrapping_sub(free) & free;
            if sub == 0 {
                break;
            }
        }
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lits {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Input polarity per input; `true` means the input is used inverted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct PhaseVector(pub Vec<bool>);

impl PhaseVector {
    pub fn identity(n: usize) -> PhaseVector {
        PhaseVector(vec![false; n])
    }

    /// Phase vector inverting exactly the listed inputs.
    pub fn inverting(n: usize, inputs: &[usize]) -> PhaseVector {
        let mut p = vec![false; n];
        for &i in inputs {
            p[i] = true;
        }
        PhaseVector(p)
    }

    pub fn from_mask(n: usize, mask: u64) -> PhaseVector {
        PhaseVector((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_inverted(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn inverted_count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |m, (i, &b)| if b { m | 1 << i } else { m })
    }
}

/// Exact set of minterms over `n` inputs, one bit per assignment.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MintermSet {
    n: usize,
    words: Vec<u64>,
}

impl MintermSet {
    pub fn empty(n: usize) -> MintermSet {
        let words = (1usize << n).div_ceil(64);
        MintermSet { n, words: vec![0; words] }
    }

    pub fn full(n: usize) -> MintermSet {
        let mut s = MintermSet::empty(n);
        let total = 1usize << n;
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * 64;
            let bits = (total - lo).min(64);
            *word = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        s
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = u64>) -> MintermSet {
        let mut s = MintermSet::empty(n);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds a set from 0/1 strings where character `k` is the value of input `k`.
    pub fn from_strings<S: AsRef<str>>(n: usize, words: &[S]) -> MintermSet {
        MintermSet::from_indices(n, words.iter().map(|w| string_to_index(w.as_ref())))
    }

    /// Truth table of a function of `n <= 6` inputs packed in a `u64`.
    pub fn from_truth_table(n: usize, table: u64) -> MintermSet {
        MintermSet::from_indices(n, (0..1u64 << n).filter(|&i| table >> i & 1 == 1))
    }

    pub fn truth_table(&self) -> u64 {
        assert!(self.n <= 6, "truth_table needs n <= 6");
        self.words[0]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe(&self) -> u64 {
        1u64 << self.n
    }

    #[inline]
    pub fn contains(&self, index: u64) -> bool {
        let i = index as usize;
        i < (1usize << self.n) && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, index: u64) {
        let i = index as usize;
        assert!(i < (1usize << self.n), "minterm {index} out of range for n={}", self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as u64;
                word &= word - 1;
                Some(w as u64 * 64 + b)
            })
        })
    }

    pub fn union(&self, other: &MintermSet) -> MintermSet {
        assert_eq!(self.n, other.n);
        MintermSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn complement(&self) -> MintermSet {
        let full = MintermSet::full(self.n);
        MintermSet {
            n: self.n,
            words: self.words.iter().zip(&full.words).map(|(a, f)| !a & f).collect(),
        }
    }

    /// Image under complementing the inputs flagged in `p`.
    pub fn apply_phase(&self, p: &PhaseVector) -> Result<MintermSet> {
        check_len(self.n, p.len())?;
        let mask = p.mask();
        Ok(MintermSet::from_indices(self.n, self.iter().map(|i| i ^ mask)))
    }

    /// Image under `permute_inputs`: new input `j` is old input `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> Result<MintermSet> {
        check_permutation(self.n, perm)?;
        Ok(MintermSet::from_indices(
            self.n,
            self.iter().map(|i| {
                perm.iter()
                    .enumerate()
                    .fold(0, |acc, (j, &old)| acc | (i >> old & 1) << j)
            }),
        ))
    }

    /// Disjoint product with `other`, whose inputs are appended after ours.
    pub fn product(&self, other: &MintermSet) -> MintermSet {
        let shift = self.n;
        let mut out = MintermSet::empty(self.n + other.n);
        for g in self.iter() {
            for h in other.iter() {
                out.insert(g | h << shift);
            }
        }
        out
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.iter().map(|i| index_to_string(self.n, i)).collect()
    }
}

impl fmt::Debug for MintermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MintermSet(n={}, {{{}}})", self.n, self.to_strings().join(","))
    }
}

/// Converts a 0/1 string (character `k` = input `k`) to a minterm index.
pub fn string_to_index(s: &str) -> u64 {
    s.chars()
        .enumerate()
        .fold(0, |acc, (k, ch)| if ch == '1' { acc | 1 << k } else { acc })
}

pub fn index_to_string(n: usize, index: u64) -> String {
    (0..n).map(|k| if index >> k & 1 == 1 { '1' } else { '0' }).collect()
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn check_permutation(n: usize, perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotAPermutation(n));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Default input names: `a`..`z` up to 26 inputs, `x0`.. beyond.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{i}")).collect()
    }
}

/// A single-output sum of cubes over named inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cover {
    input_names: Vec<String>,
    cubes: Vec<Cube>,
}

impl Cover {
    pub fn new(input_names: Vec<String>, cubes: Vec<Cube>) -> Result<Cover> {
        let mut seen = HashSet::new();
        for name in &input_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateInput(name.clone()));
            }
        }
        let n = input_names.len();
        for (k, c) in cubes.iter().enumerate() {
            if c.len() != n {
                return Err(Error::WidthMismatch { line: k + 1, expected: n, found: c.len() });
            }
        }
        Ok(Cover { input_names, cubes })
    }

    /// Cover over default input names built from literal strings.
    pub fn from_strs(n: usize, cubes: &[&str]) -> Result<Cover> {
        let cubes = cubes
            .iter()
            .enumerate()
            .map(|(k, s)| Cube::parse(s).map_err(|ch| Error::InvalidLiteral { line: k + 1, ch }))
            .collect::<Result<Vec<_>>>()?;
        Cover::new(default_names(n), cubes)
    }

    /// Cover with one cube per minterm of `s`.
    pub fn from_minterms(s: &MintermSet) -> Cover {
        Cover {
            input_names: default_names(s.n()),
            cubes: s.iter().map(|i| Cube::from_minterm(s.n(), i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.input_names.len()
    }

    pub fn m(&self) -> usize {
        self.cubes.len()
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Cover> {
        check_len(self.n(), names.len())?;
        self.input_names = names;
        Cover::new(self.input_names, self.cubes)
    }

    /// 1 iff some cube matches the assignment.
    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        check_len(self.n(), assignment.len())?;
        Ok(self.cubes.iter().any(|c| c.matches(assignment)))
    }

    #[inline]
    pub fn eval_index(&self, index: u64) -> bool {
        self.cubes.iter().any(|c| c.matches_index(index))
    }

    pub fn to_minterms(&self) -> Result<MintermSet> {
        self.to_minterms_capped(DEFAULT_EXPANSION_CAP)
    }

    pub fn to_minterms_capped(&self, cap: usize) -> Result<MintermSet> {
        let n = self.n();
        if n > cap.min(32) {
            return Err(Error::Capacity { n, cap: cap.min(32) });
        }
        let mut s = MintermSet::empty(n);
        for c in &self.cubes {
            c.for_each_minterm(|i| s.insert(i));
        }
        Ok(s)
    }

    pub fn apply_phase(&self, p: &PhaseVector) -> Result<Cover> {
        check_len(self.n(), p.len())?;
        let cubes = self
            .cubes
            .iter()
            .map(|c| {
                Cube::new(
                    c.lits
                        .iter()
                        .zip(&p.0)
                        .map(|(&l, &inv)| if inv { l.complement() } else { l })
                        .collect(),
                )
            })
            .collect();
        Ok(Cover { input_names: self.input_names.clone(), cubes })
    }

    /// Reorders columns so that new column `j` is old column `perm[j]`.
    pub fn permute_inputs(&self, perm: &[usize]) -> Result<Cover> {
        check_permutation(self.n(), perm)?;
        let names = perm.iter().map(|&p| self.input_names[p].clone()).collect();
        let cubes = self
            .cubes
            .iter()
            .map(|c| Cube::new(perm.iter().map(|&p| c.lits[p]).collect()))
            .collect();
        Ok(Cover { input_names: names, cubes })
    }

    /// Sub-cover of the cubes at the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Cover {
        Cover {
            input_names: self.input_names.clone(),
            cubes: indices.iter().map(|&i| self.cubes[i].clone()).collect(),
        }
    }

    /// Removes cubes contained in another cube of the list (first copy of duplicates kept).
    pub fn remove_contained(&self) -> Cover {
        let mut keep: Vec<Cube> = Vec::with_capacity(self.cubes.len());
        for (i, c) in self.cubes.iter().enumerate() {
            let dominated = self.cubes.iter().enumerate().any(|(j, d)| {
                j != i && d.contains(c) && (d != c || j < i)
            });
            if !dominated {
                keep.push(c.clone());
            }
        }
        Cover { input_names: self.input_names.clone(), cubes: keep }
    }

    /// Columns that are not DontCare in at least one cube.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.cubes.iter().any(|c| c.lits[i] != Literal::DontCare))
            .collect()
    }

    /// Restriction to the given columns (in the given order).
    pub fn project(&self, columns: &[usize]) -> Cover {
        Cover {
            input_names: columns.iter().map(|&i| self.input_names[i].clone()).collect(),
            cubes: self
                .cubes
                .iter()
                .map(|c| Cube::new(columns.iter().map(|&i| c.lits[i]).collect()))
                .collect(),
        }
    }

    /// Fraction of literal positions that are not DontCare, in `[0, 1]`.
    ///
    /// This is the whole-table fill ratio; an empty cover has density 0.
    pub fn density(&self) -> f64 {
        let total = self.n() * self.m();
        if total == 0 {
            return 0.0;
        }
        let care: usize = self.cubes.iter().map(|c| c.len() - c.dc_count()).sum();
        care as f64 / total as f64
    }
}

/// Union of all minterms covered by the cover, with the default expansion cap.
pub fn cover_to_minterms(c: &Cover) -> Result<MintermSet> {
    c.to_minterms()
}

pub fn eval_cover(c: &Cover, assignment: &[bool]) -> Result<bool> {
    c.eval(assignment)
}

pub fn apply_phase(c: &Cover, p: &PhaseVector) -> Result<Cover> {
    c.apply_phase(p)
}

pub fn permute_inputs(c: &Cover, perm: &[usize]) -> Result<Cover> {
    c.permute_inputs(perm)
}

/// A parsed PLA: one cover per output column over shared inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pla {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub covers: Vec<Cover>,
}

impl Pla {
    pub fn parse(text: &str) -> Result<Pla> {
        let mut n: Option<usize> = None;
        let mut outputs: Option<usize> = None;
        let mut names: Option<Vec<String>> = None;
        let mut out_names: Option<Vec<String>> = None;
        let mut rows: Vec<(usize, Cube, Vec<bool>)> = Vec::new();

        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            if let Some(directive) = head.strip_prefix('.') {
                let args: Vec<&str> = toks.collect();
                match directive {
                    "i" => n = Some(parse_count(line_no, &args)?),
                    "o" => outputs = Some(parse_count(line_no, &args)?),
                    "ilb" => names = Some(args.iter().map(|s| s.to_string()).collect()),
                    "ob" => out_names = Some(args.iter().map(|s| s.to_string()).collect()),
                    "p" => {
                        parse_count(line_no, &args)?;
                    }
                    "e" | "end" => break,
                    "type" => {
                        if args.first().is_some_and(|t| *t != "f" && *t != "fd") {
                            return Err(Error::Syntax {
                                line: line_no,
                                msg: format!("unsupported PLA type {:?}", args[0]),
                            });
                        }
                    }
                    other => {
                        return Err(Error::Syntax {
                            line: line_no,
                            msg: format!("unknown directive .{other}"),
                        })
                    }
                }
                continue;
            }

            let cube = Cube::parse(head).map_err(|ch| Error::InvalidLiteral { line: line_no, ch })?;
            let width = *n.get_or_insert(cube.len());
            if cube.len() != width {
                return Err(Error::WidthMismatch { line: line_no, expected: width, found: cube.len() });
            }
            let out_field: String = toks.collect();
            let out_width = *outputs.get_or_insert(out_field.chars().count().max(1));
            let values: Vec<bool> = if out_field.is_empty() {
                vec![true; out_width]
            } else {
                out_field
                    .chars()
                    .map(|ch| match ch {
                        '1' | '4' => Ok(true),
                        '0' | '-' | '~' | '2' | '3' => Ok(false),
                        _ => Err(Error::InvalidOutput { line: line_no, ch }),
                    })
                    .collect::<Result<_>>()?
            };
            if values.len() != out_width {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: format!("output field has {} columns, expected {out_width}", values.len()),
                });
            }
            rows.push((line_no, cube, values));
        }

        let n = n.unwrap_or(0);
        if n == 0 {
            return Err(Error::ZeroInputs);
        }
        let input_names = match names {
            Some(v) if v.len() == n => v,
            Some(v) => return Err(Error::LengthMismatch { expected: n, found: v.len() }),
            None => default_names(n),
        };
        let outputs = outputs.unwrap_or(1);
        let output_names = match out_names {
            Some(v) if v.len() == outputs => v,
            Some(v) => return Err(Error::LengthMismatch { expected: outputs, found: v.len() }),
            None if outputs == 1 => vec!["f".to_string()],
            None => (0..outputs).map(|o| format!("f{o}")).collect(),
        };
        let covers = (0..outputs)
            .map(|o| {
                let cubes = rows
                    .iter()
                    .filter(|(_, _, v)| v[o])
                    .map(|(_, c, _)| c.clone())
                    .collect();
                Cover::new(input_names.clone(), cubes)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Pla { input_names, output_names, covers })
    }
}

fn parse_count(line: usize, args: &[&str]) -> Result<usize> {
    args.first()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Syntax { line, msg: "expected an integer argument".into() })
}

/// Parses a single-output PLA.
pub fn parse_pla(text: &str) -> Result<Cover> {
    let mut pla = Pla::parse(text)?;
    if pla.covers.len() != 1 {
        return Err(Error::MultiOutput(pla.covers.len()));
    }
    Ok(pla.covers.pop().unwrap())
}

/// Writes the cover in the PLA dialect accepted by [`parse_pla`].
pub fn write_pla(c: &Cover) -> String {
    let mut out = String::new();
    out.push_str(&format!(".i {}\n.o 1\n", c.n()));
    out.push_str(&format!(".ilb {}\n", c.input_names().join(" ")));
    out.push_str(&format!(".p {}\n", c.m()));
    for cube in c.cubes() {
        out.push_str(&format!("{cube} 1\n"));
    }
    out.push_str(".e\n");
    out
}
