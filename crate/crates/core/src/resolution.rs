//! Resolution proofs, input resolution, k-resolution closures and
//! branching-tree oracles.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Ba, Bc, Dense};
use crate::cnf::{self, Clause, ClauseSet, PartialAssignment};
use crate::error::{Error, Result};
use crate::reductions;
use crate::saturation::{self, Rule};

/// Variable cap for closure computations over the full clause universe.
pub const CLOSURE_CAP: usize = 16;

/// `C ⋄ D`; the clauses must clash in exactly one variable.
pub fn resolve(c: &Clause, d: &Clause) -> Result<Clause> {
    let clash = c.clashes(d);
    if clash.len() != 1 {
        return Err(Error::NotResolvable(clash.len()));
    }
    let x = clash[0];
    Clause::new(c.literals().iter().chain(d.literals()).copied().filter(|l| l.var() != x.var()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub clause: Clause,
    /// Indices of the two parents, both smaller than this node's index.
    pub parents: Option<(usize, usize)>,
}

/// A resolution proof stored as a node arena; the last node is the root.
/// Shared nodes are read as the tree obtained by unfolding.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionProof {
    pub nodes: Vec<ProofNode>,
}

impl ResolutionProof {
    pub fn new() -> ResolutionProof {
        ResolutionProof::default()
    }

    pub fn axiom(&mut self, c: Clause) -> usize {
        self.nodes.push(ProofNode { clause: c, parents: None });
        self.nodes.len() - 1
    }

    pub fn step(&mut self, a: usize, b: usize) -> Result<usize> {
        let c = resolve(&self.nodes[a].clause, &self.nodes[b].clause)?;
        self.nodes.push(ProofNode { clause: c, parents: Some((a, b)) });
        Ok(self.nodes.len() - 1)
    }

    pub fn conclusion(&self) -> Option<&Clause> {
        self.nodes.last().map(|n| &n.clause)
    }

    pub fn premises(&self) -> ClauseSet {
        self.nodes.iter().filter(|n| n.parents.is_none()).map(|n| n.clause.clone()).collect()
    }

    /// Clauses of inner nodes.
    pub fn derived(&self) -> ClauseSet {
        self.nodes.iter().filter(|n| n.parents.is_some()).map(|n| n.clause.clone()).collect()
    }

    /// Lines of the form `id: clause from a,b` or `id: clause axiom`.
    pub fn to_trace(&self) -> String {
        let mut s = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            match n.parents {
                Some((a, b)) => writeln!(s, "{}: {} from {},{}", i + 1, n.clause, a + 1, b + 1).unwrap(),
                None => writeln!(s, "{}: {} axiom", i + 1, n.clause).unwrap(),
            }
        }
        s
    }

    pub fn from_trace(text: &str) -> Result<ResolutionProof> {
        let mut p = ResolutionProof::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            let (id, rest) = t.split_once(':').ok_or_else(|| bad("missing `:`"))?;
            let id: usize = id.trim().parse().map_err(|_| bad("bad node id"))?;
            if id != p.nodes.len() + 1 {
                return Err(bad("node ids must be consecutive from 1"));
            }
            let rest = rest.trim();
            let open = rest.find('{').ok_or_else(|| bad("missing clause"))?;
            let close = rest.find('}').ok_or_else(|| bad("missing clause"))?;
            let lits: Vec<i64> = rest[open + 1..close]
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse().map_err(|_| bad("bad literal")))
                .collect::<Result<_>>()?;
            let clause = Clause::from_dimacs(&lits).map_err(|_| Error::Tautology { line })?;
            let tail = rest[close + 1..].trim();
            let parents = if tail == "axiom" {
                None
            } else if let Some(ps) = tail.strip_prefix("from") {
                let (a, b) = ps.trim().split_once(',').ok_or_else(|| bad("expected `from a,b`"))?;
                let a: usize = a.trim().parse().map_err(|_| bad("bad parent id"))?;
                let b: usize = b.trim().parse().map_err(|_| bad("bad parent id"))?;
                if a == 0 || b == 0 || a >= id || b >= id {
                    return Err(bad("parents must precede the node"));
                }
                Some((a - 1, b - 1))
            } else {
                return Err(bad("expected `axiom` or `from a,b`"));
            };
            p.nodes.push(ProofNode { clause, parents });
        }
        Ok(p)
    }
}

/// Checks that `r` derives `c` from premises in `f`; reports the first bad node.
pub fn check_proof_detailed(r: &ResolutionProof, f: &ClauseSet, c: &Clause) -> std::result::Result<(), String> {
    if r.nodes.is_empty() {
        return Err("empty proof".into());
    }
    for (i, n) in r.nodes.iter().enumerate() {
        match n.parents {
            None => {
                if !f.contains(&n.clause) {
                    return Err(format!("node {}: premise {} not in the clause-set", i + 1, n.clause));
                }
            }
            Some((a, b)) => {
                if a >= i || b >= i {
                    return Err(format!("node {}: parent does not precede it", i + 1));
                }
                match resolve(&r.nodes[a].clause, &r.nodes[b].clause) {
                    Ok(x) if x == n.clause => {}
                    Ok(x) => return Err(format!("node {}: resolvent is {x}, recorded {}", i + 1, n.clause)),
                    Err(e) => return Err(format!("node {}: {e}", i + 1)),
                }
            }
        }
    }
    let root = r.conclusion().unwrap();
    if root != c {
        return Err(format!("conclusion is {root}, expected {c}"));
    }
    Ok(())
}

pub fn check_proof(r: &ResolutionProof, f: &ClauseSet, c: &Clause) -> bool {
    check_proof_detailed(r, f, c).is_ok()
}

fn fold_tree(r: &ResolutionProof, leaf: u32, inner: impl Fn(u32, u32) -> u32) -> u32 {
    let mut val = vec![0u32; r.nodes.len()];
    for (i, n) in r.nodes.iter().enumerate() {
        val[i] = match n.parents {
            None => leaf,
            Some((a, b)) => inner(val[a], val[b]),
        };
    }
    val.last().copied().unwrap_or(0)
}

pub fn horton_strahler(r: &ResolutionProof) -> u32 {
    fold_tree(r, 0, |a, b| if a == b { a + 1 } else { a.max(b) })
}

pub fn height(r: &ResolutionProof) -> u32 {
    fold_tree(r, 0, |a, b| 1 + a.max(b))
}

/// Number of leaves of the unfolded tree.
pub fn tree_size(r: &ResolutionProof) -> u64 {
    let mut val = vec![0u64; r.nodes.len()];
    for (i, n) in r.nodes.iter().enumerate() {
        val[i] = match n.parents {
            None => 1,
            Some((a, b)) => val[a] + val[b],
        };
    }
    val.last().copied().unwrap_or(0)
}

/// Maximal clause length in the proof.
pub fn width(r: &ResolutionProof) -> usize {
    r.nodes.iter().map(|n| n.clause.len()).max().unwrap_or(0)
}

fn dense_pair(f: &ClauseSet, c: &Clause) -> Result<(Dense, Vec<Bc>, Bc)> {
    let d = Dense::new(f.vars().into_iter().chain(c.vars()))?;
    let fb = d.clauses(f)?;
    let cb = d.clause(c)?;
    Ok((d, fb, cb))
}

/// `F ⊢_1 C'` for some `C' ⊆ C`, decided as `r_1(φ_C * F) = {⊥}`.
pub fn input_derivable(f: &ClauseSet, c: &Clause) -> Result<bool> {
    let (_, fb, cb) = dense_pair(f, c)?;
    Ok(reductions::propagate(&bits::apply(Ba::falsifying(cb), &fb)).2)
}

/// Exhaustive search over regular input-resolution chains: starting from
/// `top`, resolve against side clauses until ⊥, never resolving the same
/// variable twice.
pub(crate) fn ires_top_bits(sides: &[Bc], top: Bc) -> bool {
    if top.is_empty() {
        return true;
    }
    let mut seen: HashSet<(Bc, u64)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((top, 0));
    queue.push_back((top, 0u64));
    while let Some((x, used)) = queue.pop_front() {
        for s in sides {
            let clash = x.clash(*s);
            if clash.count_ones() != 1 || clash & used != 0 {
                continue;
            }
            let r = x.resolve(*s).unwrap();
            if r.is_empty() {
                return true;
            }
            let st = (r, used | clash);
            if seen.insert(st) {
                queue.push_back(st);
            }
        }
    }
    false
}

/// Whether `F ∪ {C}` has an input refutation in which `C` is a top clause
/// and is not used as any other input clause.
pub fn ires_top(f: &ClauseSet, c: &Clause) -> Result<bool> {
    let (_, fb, cb) = dense_pair(f, c)?;
    let sides: Vec<Bc> = fb.into_iter().filter(|s| *s != cb).collect();
    Ok(ires_top_bits(&sides, cb))
}

fn closure_setup(f: &ClauseSet) -> Result<(Dense, Vec<Bc>)> {
    let n = f.n();
    if n > CLOSURE_CAP {
        return Err(Error::CapExceeded { what: "closure", n, cap: CLOSURE_CAP });
    }
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    Ok((d, cls))
}

/// All clauses derivable by k-resolution (one parent of length ≤ k),
/// including `F`.
pub fn kres_closure(f: &ClauseSet, k: u32) -> Result<ClauseSet> {
    let (d, cls) = closure_setup(f)?;
    Ok(d.to_clause_set(&saturation::closure(&cls, Rule::Asymmetric(k))))
}

/// The k-resolution closure up to subsumption: its ⊆-minimal elements.
pub fn kres_closure_reduced(f: &ClauseSet, k: u32) -> Result<ClauseSet> {
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    Ok(d.to_clause_set(&saturation::saturate(&cls, Rule::Asymmetric(k))))
}

/// All clauses derivable with every axiom, parent and resolvent of length ≤ k.
pub fn symmetric_closure(f: &ClauseSet, k: u32) -> Result<ClauseSet> {
    let (d, cls) = closure_setup(f)?;
    Ok(d.to_clause_set(&saturation::closure(&cls, Rule::Symmetric(k))))
}

/// The short-clause closure built from input resolution: start with the
/// clauses of length ≤ k, then add any clause `C` of length ≤ k that is
/// input-derivable from the current set, or input-derivable with one long
/// clause `D` of `F` used exactly once as top clause.
pub fn kres_closure_via_input(f: &ClauseSet, k: u32) -> Result<ClauseSet> {
    let (d, cls) = closure_setup(f)?;
    let mut short: Vec<Bc> = cls.iter().copied().filter(|c| c.len() <= k).collect();
    let long: Vec<Bc> = cls.iter().copied().filter(|c| c.len() > k).collect();
    let universe: Vec<Bc> = bits::clauses_within(bits::var_mask(&cls)).into_iter().filter(|c| c.len() <= k).collect();
    let mut have: HashSet<Bc> = short.iter().copied().collect();
    loop {
        let mut added = false;
        for c in &universe {
            if have.contains(c) {
                continue;
            }
            let phi = Ba::falsifying(*c);
            let reduced = bits::apply(phi, &short);
            let mut ok = reductions::propagate(&reduced).2;
            if !ok {
                for dl in &long {
                    if phi.satisfies(*dl) {
                        continue;
                    }
                    let top = bits::apply(phi, &[*dl])[0];
                    let mut g = reduced.clone();
                    g.push(top);
                    bits::normalize(&mut g);
                    let sides: Vec<Bc> = g.into_iter().filter(|s| *s != top).collect();
                    if ires_top_bits(&sides, top) {
                        ok = true;
                        break;
                    }
                }
            }
            if ok {
                have.insert(*c);
                short.push(*c);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    bits::normalize(&mut short);
    Ok(d.to_clause_set(&short))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    /// Number of leaves.
    Size,
    /// Horton-Strahler number.
    Strahler,
    /// Height.
    Depth,
}

impl Objective {
    fn leaf(self) -> u64 {
        match self {
            Objective::Size => 1,
            Objective::Strahler | Objective::Depth => 0,
        }
    }

    fn combine(self, a: u64, b: u64) -> u64 {
        match self {
            Objective::Size => a + b,
            Objective::Strahler => {
                if a == b {
                    a + 1
                } else {
                    a.max(b)
                }
            }
            Objective::Depth => 1 + a.max(b),
        }
    }
}

/// Memoised optimisation over branching trees of an unsatisfiable set.
pub(crate) struct Branching {
    obj: Objective,
    memo: HashMap<Vec<Bc>, u64>,
}

impl Branching {
    pub fn new(obj: Objective) -> Branching {
        Branching { obj, memo: HashMap::new() }
    }

    /// Optimal value, or `None` when the set is satisfiable.
    pub fn value(&mut self, f: &[Bc]) -> Option<u64> {
        if bits::has_bottom(f) {
            return Some(self.obj.leaf());
        }
        if f.is_empty() {
            return None;
        }
        if let Some(v) = self.memo.get(f) {
            return if *v == u64::MAX { None } else { Some(*v) };
        }
        let mask = bits::var_mask(f);
        let mut best = u64::MAX;
        for i in 0..64 {
            if mask >> i & 1 == 0 {
                continue;
            }
            let Some(a) = self.value(&bits::assign(f, i, false)) else {
                best = u64::MAX;
                break;
            };
            let Some(b) = self.value(&bits::assign(f, i, true)) else {
                best = u64::MAX;
                break;
            };
            best = best.min(self.obj.combine(a, b));
        }
        self.memo.insert(f.to_vec(), best);
        if best == u64::MAX {
            None
        } else {
            Some(best)
        }
    }

    fn best_var(&mut self, f: &[Bc]) -> usize {
        let target = self.value(f).unwrap();
        let mask = bits::var_mask(f);
        (0..64)
            .filter(|i| mask >> i & 1 == 1)
            .find(|&i| {
                let a = self.value(&bits::assign(f, i, false)).unwrap();
                let b = self.value(&bits::assign(f, i, true)).unwrap();
                self.obj.combine(a, b) == target
            })
            .unwrap()
    }

    /// Builds a refutation following optimal splits; returns the root node.
    fn build(&mut self, axioms: &[Bc], a: Ba, proof: &mut Vec<(Bc, Option<(usize, usize)>)>) -> usize {
        let cur = bits::apply(a, axioms);
        if bits::has_bottom(&cur) {
            let c = *axioms.iter().find(|c| a.falsifies(**c)).unwrap();
            proof.push((c, None));
            return proof.len() - 1;
        }
        let i = self.best_var(&cur);
        let bit = 1u64 << i;
        let n0 = self.build(axioms, a.bind(i, false), proof);
        if proof[n0].0.pos & bit == 0 {
            return n0;
        }
        let n1 = self.build(axioms, a.bind(i, true), proof);
        if proof[n1].0.neg & bit == 0 {
            return n1;
        }
        let r = proof[n0].0.resolve(proof[n1].0).unwrap();
        proof.push((r, Some((n0, n1))));
        proof.len() - 1
    }
}

/// Optimal value of `obj` over branching trees of unsatisfiable `F`.
pub fn branching_value(f: &ClauseSet, obj: Objective) -> Result<u64> {
    let d = Dense::of(f)?;
    Branching::new(obj).value(&d.clauses(f)?).ok_or(Error::Satisfiable)
}

/// A tree refutation read off an optimal branching tree for `obj`. Splits
/// whose branch clause does not mention the split variable are pruned, so
/// the proof's measure never exceeds the branching value.
pub fn branching_refutation(f: &ClauseSet, obj: Objective) -> Result<ResolutionProof> {
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    let mut b = Branching::new(obj);
    if b.value(&cls).is_none() {
        return Err(Error::Satisfiable);
    }
    let mut raw = Vec::new();
    let root = b.build(&cls, Ba::EMPTY, &mut raw);
    // keep only nodes reachable from the root, in order
    let mut keep = vec![false; raw.len()];
    keep[root] = true;
    for i in (0..=root).rev() {
        if keep[i] {
            if let Some((x, y)) = raw[i].1 {
                keep[x] = true;
                keep[y] = true;
            }
        }
    }
    let mut remap = vec![usize::MAX; raw.len()];
    let mut proof = ResolutionProof::new();
    for i in 0..=root {
        if !keep[i] {
            continue;
        }
        let parents = raw[i].1.map(|(x, y)| (remap[x], remap[y]));
        proof.nodes.push(ProofNode { clause: d.to_clause(raw[i].0), parents });
        remap[i] = proof.nodes.len() - 1;
    }
    Ok(proof)
}

/// comptr(F): the minimal number of leaves of a tree refutation. Computed
/// over branching trees, which correspond to regular tree refutations;
/// regular trees are size-optimal among tree refutations.
pub fn optimal_tree_size(f: &ClauseSet) -> Result<u64> {
    branching_value(f, Objective::Size)
}

/// A branching tree: inner nodes split on a variable, leaves contain ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingTree {
    pub formula: ClauseSet,
    pub split: Option<(u32, Box<BranchingTree>, Box<BranchingTree>)>,
}

impl BranchingTree {
    pub fn leaves(&self) -> u64 {
        match &self.split {
            None => 1,
            Some((_, a, b)) => a.leaves() + b.leaves(),
        }
    }
}

/// An optimal branching tree for `obj`.
pub fn optimal_branching_tree(f: &ClauseSet, obj: Objective) -> Result<BranchingTree> {
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    let mut b = Branching::new(obj);
    if b.value(&cls).is_none() {
        return Err(Error::Satisfiable);
    }
    fn go(b: &mut Branching, d: &Dense, cur: &[Bc]) -> BranchingTree {
        let formula = d.to_clause_set(cur);
        if bits::has_bottom(cur) {
            return BranchingTree { formula, split: None };
        }
        let i = b.best_var(cur);
        let zero = go(b, d, &bits::assign(cur, i, false));
        let one = go(b, d, &bits::assign(cur, i, true));
        BranchingTree { formula, split: Some((d.vars[i], Box::new(zero), Box::new(one))) }
    }
    Ok(go(&mut b, &d, &cls))
}

/// Checks the branching-tree invariants against `F`.
pub fn check_branching_tree(t: &BranchingTree, f: &ClauseSet) -> bool {
    if t.formula != *f {
        return false;
    }
    match &t.split {
        None => f.has_bottom(),
        Some((v, a, b)) => {
            let fa = cnf::apply(&PartialAssignment::new().bind(*v, false), f);
            let fb = cnf::apply(&PartialAssignment::new().bind(*v, true), f);
            check_branching_tree(a, &fa) && check_branching_tree(b, &fb)
        }
    }
}
