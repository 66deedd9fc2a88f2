// SPDX-License-Identifier: Apache-2.0
//! Networks of symmetric components, inverters, disjoint ANDs and ORs.
//!
//! Text form, one node per line, operands before users:
//!
//! ```text
//! .inputs a b c d
//! n0 SYM [1] a b
//! n1 SYM [1] c d
//! n2 AND n0 n1
//! .output n2
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cube::{Cover, MintermSet};
use crate::error::{Error, Result};
use crate::spectrum::{fullrank_set_if_symmetric, FullRankSet};

/// Assignments sampled by [`verify`] when exhaustive comparison is too large.
pub const VERIFY_SAMPLES: u64 = 1 << 20;
/// Largest input count compared exhaustively by [`verify`].
pub const VERIFY_EXHAUSTIVE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Operand {
    Input(usize),
    Node(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Sym(FullRankSet),
    Inv,
    AndDisjoint,
    Or,
    Const(bool),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetNode {
    pub kind: NodeKind,
    pub operands: Vec<Operand>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetInput {
    pub name: String,
    /// Set when the network uses the input through an inverter.
    pub inverted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Netlist {
    pub inputs: Vec<NetInput>,
    pub nodes: Vec<NetNode>,
    pub output: usize,
}

impl Netlist {
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        let mut values = vec![false; self.nodes.len()];
        let get = |values: &[bool], op: &Operand| match *op {
            Operand::Input(i) => assignment[i],
            Operand::Node(k) => values[k],
        };
        for (k, node) in self.nodes.iter().enumerate() {
            let v = match &node.kind {
                NodeKind::Sym(ranks) => {
                    let ones = node.operands.iter().filter(|op| get(&values, op)).count();
                    ranks.eval_popcount(ones)
                }
                NodeKind::Inv => !get(&values, &node.operands[0]),
                NodeKind::AndDisjoint => node.operands.iter().all(|op| get(&values, op)),
                NodeKind::Or => node.operands.iter().any(|op| get(&values, op)),
                NodeKind::Const(b) => *b,
            };
            values[k] = v;
        }
        values[self.output]
    }

    pub fn evaluate_index(&self, index: u64) -> bool {
        let assignment: Vec<bool> = (0..self.inputs.len()).map(|i| index >> i & 1 == 1).collect();
        self.evaluate(&assignment)
    }

    pub fn input_names(&self) -> Vec<&str> {
        self.inputs.iter().map(|i| i.name.as_str()).collect()
    }

    pub fn sym_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n.kind, NodeKind::Sym(_))).count()
    }

    /// Input indices the operand depends on structurally.
    pub fn support(&self, op: Operand) -> BTreeSet<usize> {
        let mut memo: HashMap<usize, BTreeSet<usize>> = HashMap::new();
        self.support_memo(op, &mut memo)
    }

    fn support_memo(&self, op: Operand, memo: &mut HashMap<usize, BTreeSet<usize>>) -> BTreeSet<usize> {
        match op {
            Operand::Input(i) => [i].into(),
            Operand::Node(k) => {
                if let Some(s) = memo.get(&k) {
                    return s.clone();
                }
                let mut s = BTreeSet::new();
                for &o in &self.nodes[k].operands {
                    s.extend(self.support_memo(o, memo));
                }
                memo.insert(k, s.clone());
                s
            }
        }
    }

    /// True when every AND node's operands have pairwise disjoint supports.
    pub fn and_supports_disjoint(&self) -> bool {
        self.nodes.iter().all(|node| {
            if node.kind != NodeKind::AndDisjoint {
                return true;
            }
            let mut seen = BTreeSet::new();
            node.operands
                .iter()
                .all(|&op| self.support(op).into_iter().all(|i| seen.insert(i)))
        })
    }

    /// Every SYM node, evaluated on free operands, has a symmetric truth table
    /// whose full ranks are the node's rank set (checked up to 12 operands).
    pub fn sym_nodes_consistent(&self) -> bool {
        self.nodes.iter().all(|node| match &node.kind {
            NodeKind::Sym(r) if node.operands.len() <= 12 => {
                let k = node.operands.len();
                let local = Netlist {
                    inputs: (0..k).map(|i| NetInput { name: format!("x{i}"), inverted: false }).collect(),
                    nodes: vec![NetNode { kind: node.kind.clone(), operands: (0..k).map(Operand::Input).collect() }],
                    output: 0,
                };
                let table = MintermSet::from_indices(k, (0..1u64 << k).filter(|&i| local.evaluate_index(i)));
                r.n == k && k > 0 && fullrank_set_if_symmetric(&table).as_ref() == Some(r)
            }
            NodeKind::Sym(r) => r.n == node.operands.len(),
            _ => true,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.input_names();
        let _ = writeln!(out, ".inputs {}", names.join(" "));
        let op_name = |op: &Operand| match *op {
            Operand::Input(i) => names[i].to_string(),
            Operand::Node(k) => format!("n{k}"),
        };
        for (k, node) in self.nodes.iter().enumerate() {
            let _ = write!(out, "n{k} ");
            match &node.kind {
                NodeKind::Sym(r) => {
                    let _ = write!(out, "SYM {r}");
                }
                NodeKind::Inv => out.push_str("INV"),
                NodeKind::AndDisjoint => out.push_str("AND"),
                NodeKind::Or => out.push_str("OR"),
                NodeKind::Const(b) => {
                    let _ = write!(out, "CONST {}", *b as u8);
                }
            }
            for op in &node.operands {
                let _ = write!(out, " {}", op_name(op));
            }
            out.push('\n');
        }
        let _ = writeln!(out, ".output n{}", self.output);
        out
    }

    pub fn parse_text(text: &str) -> Result<Netlist> {
        let mut inputs: Option<Vec<String>> = None;
        let mut nodes: Vec<NetNode> = Vec::new();
        let mut output: Option<usize> = None;
        let syntax = |line: usize, msg: &str| Error::Syntax { line, msg: msg.to_string() };
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                ".inputs" => inputs = Some(toks[1..].iter().map(|s| s.to_string()).collect()),
                ".output" => {
                    let id = toks
                        .get(1)
                        .and_then(|t| parse_node_id(t))
                        .ok_or_else(|| syntax(line_no, "expected node id after .output"))?;
                    output = Some(id);
                }
                id_tok => {
                    let names = inputs.as_ref().ok_or_else(|| syntax(line_no, "missing .inputs"))?;
                    let id = parse_node_id(id_tok).ok_or_else(|| syntax(line_no, "expected node id"))?;
                    if id != nodes.len() {
                        return Err(syntax(line_no, "node ids must be consecutive from n0"));
                    }
                    let kind_tok = toks.get(1).ok_or_else(|| syntax(line_no, "missing node kind"))?;
                    let mut rest = &toks[2..];
                    let kind = match *kind_tok {
                        "SYM" => {
                            let ranks = rest.first().ok_or_else(|| syntax(line_no, "missing rank set"))?;
                            let ranks = parse_rank_list(ranks).ok_or_else(|| syntax(line_no, "bad rank set"))?;
                            rest = &rest[1..];
                            if ranks.iter().any(|&r| r > rest.len()) {
                                return Err(syntax(line_no, "rank exceeds arity"));
                            }
                            NodeKind::Sym(FullRankSet::new(rest.len(), ranks))
                        }
                        "INV" => NodeKind::Inv,
                        "AND" => NodeKind::AndDisjoint,
                        "OR" => NodeKind::Or,
                        "CONST" => {
                            let v = match rest.first() {
                                Some(&"0") => false,
                                Some(&"1") => true,
                                _ => return Err(syntax(line_no, "CONST needs 0 or 1")),
                            };
                            rest = &rest[1..];
                            NodeKind::Const(v)
                        }
                        other => return Err(syntax(line_no, &format!("unknown node kind {other}"))),
                    };
                    let operands = rest
                        .iter()
                        .map(|t| {
                            if let Some(i) = names.iter().position(|n| n == t) {
                                Ok(Operand::Input(i))
                            } else {
                                match parse_node_id(t) {
                                    Some(j) if j < id => Ok(Operand::Node(j)),
                                    _ => Err(syntax(line_no, &format!("unknown operand {t}"))),
                                }
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if kind == NodeKind::Inv && operands.len() != 1 {
                        return Err(syntax(line_no, "INV takes one operand"));
                    }
                    nodes.push(NetNode { kind, operands });
                }
            }
        }
        let names = inputs.ok_or_else(|| syntax(0, "missing .inputs"))?;
        let output = output.ok_or_else(|| syntax(0, "missing .output"))?;
        if output >= nodes.len() {
            return Err(syntax(0, "output refers to a missing node"));
        }
        let inverted: BTreeSet<usize> = nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Inv)
            .filter_map(|n| match n.operands[0] {
                Operand::Input(i) => Some(i),
                Operand::Node(_) => None,
            })
            .collect();
        let inputs = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| NetInput { name, inverted: inverted.contains(&i) })
            .collect();
        Ok(Netlist { inputs, nodes, output })
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_node_id(t: &str) -> Option<usize> {
    t.strip_prefix('n')?.parse().ok()
}

fn parse_rank_list(t: &str) -> Option<Vec<usize>> {
    let inner = t.strip_prefix('[')?.strip_suffix(']')?;
    if inner.is_empty() {
        return Some(vec![]);
    }
    inner.split(',').map(|s| s.trim().parse().ok()).collect()
}

/// Hash-consing netlist builder with constant folding.
#[derive(Debug, Default)]
pub struct Builder {
    nodes: Vec<NetNode>,
    index: HashMap<NetNode, usize>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder::default()
    }

    fn intern(&mut self, node: NetNode) -> Operand {
        if let Some(&k) = self.index.get(&node) {
            return Operand::Node(k);
        }
        let k = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, k);
        Operand::Node(k)
    }

    pub fn constant(&mut self, v: bool) -> Operand {
        self.intern(NetNode { kind: NodeKind::Const(v), operands: vec![] })
    }

    fn const_value(&self, op: Operand) -> Option<bool> {
        match op {
            Operand::Node(k) => match self.nodes[k].kind {
                NodeKind::Const(b) => Some(b),
                _ => None,
            },
            Operand::Input(_) => None,
        }
    }

    pub fn input(&mut self, i: usize, inverted: bool) -> Operand {
        if inverted {
            self.intern(NetNode { kind: NodeKind::Inv, operands: vec![Operand::Input(i)] })
        } else {
            Operand::Input(i)
        }
    }

    pub fn sym(&mut self, ranks: FullRankSet, operands: Vec<Operand>) -> Operand {
        assert_eq!(ranks.n, operands.len());
        if ranks.is_empty() {
            return self.constant(false);
        }
        if ranks.is_all() {
            return self.constant(true);
        }
        self.intern(NetNode { kind: NodeKind::Sym(ranks), operands })
    }

    pub fn and(&mut self, operands: Vec<Operand>) -> Operand {
        let mut kept = Vec::new();
        for op in operands {
            match self.const_value(op) {
                Some(false) => return self.constant(false),
                Some(true) => {}
                None => kept.push(op),
            }
        }
        match kept.len() {
            0 => self.constant(true),
            1 => kept[0],
            _ => self.intern(NetNode { kind: NodeKind::AndDisjoint, operands: kept }),
        }
    }

    /// n-ary OR; nested ORs are flattened and duplicate operands dropped.
    pub fn or(&mut self, operands: Vec<Operand>) -> Operand {
        let mut kept: Vec<Operand> = Vec::new();
        for op in operands {
            match self.const_value(op) {
                Some(true) => return self.constant(true),
                Some(false) => continue,
                None => {}
            }
            let flat = match op {
                Operand::Node(k) if self.nodes[k].kind == NodeKind::Or => self.nodes[k].operands.clone(),
                _ => vec![op],
            };
            for f in flat {
                if !kept.contains(&f) {
                    kept.push(f);
                }
            }
        }
        match kept.len() {
            0 => self.constant(false),
            1 => kept[0],
            _ => self.intern(NetNode { kind: NodeKind::Or, operands: kept }),
        }
    }

    /// Finishes the netlist, keeping only nodes reachable from `output`.
    pub fn finish(mut self, input_names: &[String], output: Operand) -> Netlist {
        let root = match output {
            Operand::Node(k) => k,
            Operand::Input(i) => match self.input(i, false) {
                op @ Operand::Input(_) => {
                    let Operand::Node(k) = self.intern(NetNode {
                        kind: NodeKind::Sym(FullRankSet::new(1, [1])),
                        operands: vec![op],
                    }) else {
                        unreachable!()
                    };
                    k
                }
                Operand::Node(k) => k,
            },
        };
        let mut reachable = vec![false; self.nodes.len()];
        reachable[root] = true;
        for k in (0..self.nodes.len()).rev() {
            if reachable[k] {
                for op in &self.nodes[k].operands {
                    if let Operand::Node(j) = *op {
                        reachable[j] = true;
                    }
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (k, node) in self.nodes.into_iter().enumerate() {
            if !reachable[k] {
                continue;
            }
            remap[k] = nodes.len();
            let operands = node
                .operands
                .iter()
                .map(|op| match *op {
                    Operand::Node(j) => Operand::Node(remap[j]),
                    other => other,
                })
                .collect();
            nodes.push(NetNode { kind: node.kind, operands });
        }
        let inverted: BTreeSet<usize> = nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Inv)
            .filter_map(|n| match n.operands[0] {
                Operand::Input(i) => Some(i),
                Operand::Node(_) => None,
            })
            .collect();
        let inputs = input_names
            .iter()
            .enumerate()
            .map(|(i, name)| NetInput { name: name.clone(), inverted: inverted.contains(&i) })
            .collect();
        Netlist { inputs, nodes, output: remap[root] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Equivalent,
    /// Assignment in the cover's input order on which the two disagree.
    Mismatch { witness: Vec<bool> },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        *self == Verdict::Equivalent
    }
}

/// Compares a netlist with a cover, matching inputs by name. Exhaustive up to
/// [`VERIFY_EXHAUSTIVE`] inputs, seeded random sampling beyond.
pub fn verify(nl: &Netlist, c: &Cover) -> Result<Verdict> {
    let n = c.n();
    let map: Vec<usize> = nl
        .inputs
        .iter()
        .map(|inp| {
            c.input_names()
                .iter()
                .position(|name| *name == inp.name)
                .ok_or_else(|| Error::UnknownInput(inp.name.clone()))
        })
        .collect::<Result<_>>()?;
    let check = |assignment: &[bool]| -> Option<Verdict> {
        let local: Vec<bool> = map.iter().map(|&j| assignment[j]).collect();
        let want = c.eval(assignment).expect("assignment width");
        (nl.evaluate(&local) != want).then(|| Verdict::Mismatch { witness: assignment.to_vec() })
    };
    let to_bits = |index: u64| -> Vec<bool> { (0..n).map(|i| index >> i & 1 == 1).collect() };
    if n <= VERIFY_EXHAUSTIVE {
        for index in 0..1u64 << n {
            if let Some(v) = check(&to_bits(index)) {
                return Ok(v);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let samples = if n < 64 { VERIFY_SAMPLES.min(1 << n) } else { VERIFY_SAMPLES };
        for _ in 0..samples {
            let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            if let Some(v) = check(&bits) {
                return Ok(v);
            }
        }
    }
    Ok(Verdict::Equivalent)
}

pub fn evaluate_netlist(nl: &Netlist, assignment: &[bool]) -> bool {
    nl.evaluate(assignment)
}
