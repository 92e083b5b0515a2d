//! Semantic, resolution and tree space by exhaustive reachability search.
//!
//! Resolution steps follow the "remove clauses and/or add one resolvent"
//! reading: the resolvent's parents are taken from the previous
//! configuration, and a step may also only remove clauses.

use std::collections::{HashMap, VecDeque};

use rustc_hash::FxHashSet;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Bc, Dense, Tt};
use crate::cnf::{self, Clause, ClauseSet};
use crate::error::{Error, Result};
use crate::measures;
use crate::resolution;
use crate::saturation::{self, Rule};

/// Variable cap for the space searches; states pack clauses into 16 bits.
pub const SPACE_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Semantic,
    Resolution,
    Tree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Initial,
    AxiomDownload { clause: Clause },
    Inference,
    Resolvent { clause: Clause },
    Deletion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceConfiguration {
    pub clauses: ClauseSet,
    pub origin: Step,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceTrace {
    pub kind: SpaceKind,
    pub bound: usize,
    pub sequence: Vec<SpaceConfiguration>,
}

impl SpaceTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialises")
    }
}

fn setup(f: &ClauseSet) -> Result<(Dense, Vec<Bc>)> {
    let n = f.n();
    if n > SPACE_CAP {
        return Err(Error::CapExceeded { what: "space search", n, cap: SPACE_CAP });
    }
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    if bits::satisfiable(&cls) {
        return Err(Error::Satisfiable);
    }
    Ok((d, cls))
}

type RawTrace = Vec<(Vec<Bc>, RawStep)>;

#[derive(Clone, Debug)]
enum RawStep {
    Initial,
    Download(Bc),
    Inference,
    Resolvent(Bc),
    Deletion,
}

fn to_trace(d: &Dense, kind: SpaceKind, bound: usize, raw: RawTrace) -> SpaceTrace {
    let sequence = raw
        .into_iter()
        .map(|(cls, st)| SpaceConfiguration {
            clauses: d.to_clause_set(&cls),
            origin: match st {
                RawStep::Initial => Step::Initial,
                RawStep::Download(c) => Step::AxiomDownload { clause: d.to_clause(c) },
                RawStep::Inference => Step::Inference,
                RawStep::Resolvent(c) => Step::Resolvent { clause: d.to_clause(c) },
                RawStep::Deletion => Step::Deletion,
            },
        })
        .collect();
    SpaceTrace { kind, bound, sequence }
}

/// Search for a complete semantic k-sequence over standardised moves:
/// downloads of axioms not yet implied, and inferences to sets of fewer
/// prime implicates. States are identified by their models, keeping the
/// smallest clause count found.
fn semantic_search(axioms: &[Bc], n: usize, k: usize) -> Option<RawTrace> {
    struct Node {
        clauses: Vec<Bc>,
        parent: usize,
        step: RawStep,
    }
    let full = Tt::full(n);
    let fals: Vec<Tt> = axioms.iter().map(|a| Tt::falsifying(*a, n)).collect();
    let mut nodes = vec![Node { clauses: vec![], parent: usize::MAX, step: RawStep::Initial }];
    let mut best: HashMap<Tt, usize> = HashMap::from([(full, 0)]);
    let mut queue = VecDeque::from([(0usize, full)]);

    let unwind = |nodes: &Vec<Node>, mut id: usize, last: (Vec<Bc>, RawStep)| {
        let mut out = vec![last];
        while id != usize::MAX {
            out.push((nodes[id].clauses.clone(), nodes[id].step.clone()));
            id = nodes[id].parent;
        }
        out.reverse();
        out
    };

    while let Some((id, m)) = queue.pop_front() {
        let c = nodes[id].clauses.len();
        if best[&m] < c {
            continue;
        }
        let mut found: Vec<(Tt, Vec<Bc>, RawStep)> = Vec::new();
        if c < k {
            for (j, a) in axioms.iter().enumerate() {
                if !m.intersects(fals[j]) {
                    continue;
                }
                let mut s = nodes[id].clauses.clone();
                s.push(*a);
                bits::normalize(&mut s);
                let m2 = m.andnot(fals[j]);
                if m2.is_zero() {
                    return Some(unwind(&nodes, id, (s, RawStep::Download(*a))));
                }
                found.push((m2, s, RawStep::Download(*a)));
            }
        }
        if c >= 2 {
            let primes = saturation::saturate(&nodes[id].clauses, Rule::Unrestricted);
            let pf: Vec<Tt> = primes.iter().map(|p| Tt::falsifying(*p, n)).collect();
            let mut chosen: Vec<usize> = Vec::new();
            fn subsets(
                start: usize,
                left: usize,
                union: Tt,
                pf: &[Tt],
                chosen: &mut Vec<usize>,
                out: &mut Vec<(Tt, Vec<usize>)>,
                full: Tt,
            ) {
                if !chosen.is_empty() {
                    out.push((full.andnot(union), chosen.clone()));
                }
                if left == 0 {
                    return;
                }
                for i in start..pf.len() {
                    chosen.push(i);
                    subsets(i + 1, left - 1, union.or(pf[i]), pf, chosen, out, full);
                    chosen.pop();
                }
            }
            let mut subs = Vec::new();
            subsets(0, c - 1, Tt::default(), &pf, &mut chosen, &mut subs, full);
            for (m2, idx) in subs {
                let s: Vec<Bc> = idx.iter().map(|i| primes[*i]).collect();
                found.push((m2, s, RawStep::Inference));
            }
        }
        for (m2, s, step) in found {
            let better = best.get(&m2).is_none_or(|b| *b > s.len());
            if better {
                best.insert(m2, s.len());
                nodes.push(Node { clauses: s, parent: id, step });
                queue.push_back((nodes.len() - 1, m2));
            }
        }
    }
    None
}

/// A clause over at most 8 variables: positive literals in the low byte,
/// negative literals in the high byte.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
struct C16(u16);

impl C16 {
    fn of(c: Bc) -> C16 {
        C16((c.pos as u16) | ((c.neg as u16) << 8))
    }

    fn bc(self) -> Bc {
        Bc { pos: (self.0 & 0xff) as u64, neg: (self.0 >> 8) as u64 }
    }

    fn subsumes(self, o: C16) -> bool {
        self.0 & !o.0 == 0
    }

    fn resolve(self, o: C16) -> Option<C16> {
        let (a, b) = (self.0, o.0);
        let clash = ((a & 0xff) & (b >> 8)) | ((a >> 8) & (b & 0xff));
        if clash.count_ones() != 1 {
            return None;
        }
        let mask = clash | (clash << 8);
        Some(C16((a | b) & !mask))
    }
}

const MAX_BOUND: usize = SPACE_CAP + 1;

/// A configuration: a sorted antichain of at most `MAX_BOUND` clauses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
struct St {
    len: u8,
    c: [C16; MAX_BOUND],
}

impl St {
    fn clauses(&self) -> &[C16] {
        &self.c[..self.len as usize]
    }

    fn from(v: &mut [C16]) -> St {
        v.sort_unstable();
        let mut st = St { len: v.len() as u8, ..St::default() };
        st.c[..v.len()].copy_from_slice(v);
        st
    }

    fn to_bc(self) -> Vec<Bc> {
        let mut v: Vec<Bc> = self.clauses().iter().map(|c| c.bc()).collect();
        bits::normalize(&mut v);
        v
    }
}

#[derive(Clone, Copy)]
enum Move {
    Start,
    /// Download after removing the clauses of `pre` missing from the source.
    Download(C16, St),
    Resolve(C16),
}

/// Search for a complete resolution (or tree) k-sequence. Deletions are
/// postponed until room is needed; a configuration never keeps a clause
/// subsumed by another one. Depth-first over visited configurations.
fn resolution_search(axioms: &[Bc], k: usize, tree: bool) -> Option<RawTrace> {
    let axioms: Vec<C16> = axioms.iter().map(|a| C16::of(*a)).collect();
    let mut states: Vec<(St, u32, Move)> = vec![(St::default(), u32::MAX, Move::Start)];
    let mut seen: FxHashSet<St> = FxHashSet::default();
    seen.insert(St::default());
    let mut stack = vec![0u32];

    let unwind = |states: &Vec<(St, u32, Move)>, last: St, mv: Move, mut id: u32| {
        let mut rev = vec![(last, mv, states[id as usize].0)];
        while states[id as usize].1 != u32::MAX {
            let (st, p, m) = states[id as usize];
            rev.push((st, m, states[p as usize].0));
            id = p;
        }
        rev.reverse();
        let mut out: RawTrace = vec![(Vec::new(), RawStep::Initial)];
        for (state, m, prev) in rev {
            match m {
                Move::Download(a, pre) => {
                    if pre.len != prev.len {
                        out.push((pre.to_bc(), RawStep::Deletion));
                    }
                    out.push((state.to_bc(), RawStep::Download(a.bc())));
                }
                Move::Resolve(r) => out.push((state.to_bc(), RawStep::Resolvent(r.bc()))),
                Move::Start => {}
            }
        }
        out
    };

    let mut cands: Vec<(C16, [C16; 2], bool)> = Vec::new();
    let mut base: Vec<C16> = Vec::with_capacity(MAX_BOUND);
    let mut buf: Vec<C16> = Vec::with_capacity(MAX_BOUND);
    while let Some(id) = stack.pop() {
        let s = states[id as usize].0;
        let cl = s.clauses();
        cands.clear();
        for a in &axioms {
            if !cl.iter().any(|x| x.subsumes(*a)) {
                cands.push((*a, [C16(u16::MAX); 2], true));
            }
        }
        for i in 0..cl.len() {
            for j in 0..i {
                let Some(r) = cl[i].resolve(cl[j]) else { continue };
                if cl.iter().any(|x| x.subsumes(r)) {
                    continue;
                }
                let drop = if tree { [cl[j], cl[i]] } else { [C16(u16::MAX); 2] };
                if !cands.iter().any(|(y, d, _)| *y == r && *d == drop) {
                    cands.push((r, drop, false));
                }
            }
        }
        for &(y, drop, is_axiom) in &cands {
            base.clear();
            base.extend(cl.iter().copied().filter(|x| !y.subsumes(*x) && !drop.contains(x)));
            let full = base.len() >= k;
            let choices = if full { base.len() } else { 1 };
            for x in 0..choices {
                buf.clear();
                buf.extend(base.iter().enumerate().filter(|(i, _)| !full || *i != x).map(|(_, c)| *c));
                let pre = St::from(&mut buf);
                buf.push(y);
                let ns = St::from(&mut buf);
                let mv = if is_axiom { Move::Download(y, pre) } else { Move::Resolve(y) };
                if y.0 == 0 {
                    return Some(unwind(&states, ns, mv, id));
                }
                if seen.insert(ns) {
                    states.push((ns, id, mv));
                    stack.push(states.len() as u32 - 1);
                }
            }
        }
    }
    None
}

/// Tries k = 1, 2, ... up to n+1, which always suffices.
fn minimal<F: FnMut(usize) -> Option<RawTrace>>(n: usize, mut search: F) -> Result<(usize, RawTrace)> {
    let limit = n + 1;
    for k in 1..=limit {
        if let Some(t) = search(k) {
            return Ok((k, t));
        }
    }
    Err(Error::Invalid(format!("no complete sequence within bound {limit}")))
}

pub fn semantic_space(f: &ClauseSet) -> Result<usize> {
    Ok(semantic_space_trace(f)?.bound)
}

pub fn semantic_space_trace(f: &ClauseSet) -> Result<SpaceTrace> {
    let (d, cls) = setup(f)?;
    let n = d.n();
    let (k, raw) = minimal(n, |k| semantic_search(&cls, n, k))?;
    Ok(to_trace(&d, SpaceKind::Semantic, k, raw))
}

pub fn resolution_space(f: &ClauseSet) -> Result<usize> {
    Ok(resolution_space_trace(f)?.bound)
}

pub fn resolution_space_trace(f: &ClauseSet) -> Result<SpaceTrace> {
    let (d, cls) = setup(f)?;
    let (k, raw) = minimal(d.n(), |k| resolution_search(&cls, k, false))?;
    Ok(to_trace(&d, SpaceKind::Resolution, k, raw))
}

/// Tree space, computed as hardness + 1.
pub fn tree_space(f: &ClauseSet) -> Result<usize> {
    if cnf::is_satisfiable(f)? {
        return Err(Error::Satisfiable);
    }
    Ok(measures::hardness(f)? as usize + 1)
}

/// Tree space by direct search over tree sequences.
pub fn tree_space_search(f: &ClauseSet) -> Result<usize> {
    Ok(tree_space_trace(f)?.bound)
}

pub fn tree_space_trace(f: &ClauseSet) -> Result<SpaceTrace> {
    let (d, cls) = setup(f)?;
    let (k, raw) = minimal(d.n(), |k| resolution_search(&cls, k, true))?;
    Ok(to_trace(&d, SpaceKind::Tree, k, raw))
}

/// Re-validates a trace step by step; returns the first violation.
pub fn check_trace(t: &SpaceTrace, f: &ClauseSet) -> std::result::Result<(), String> {
    let seq = &t.sequence;
    let first = seq.first().ok_or("empty trace")?;
    if !first.clauses.is_top() || first.origin != Step::Initial {
        return Err("trace must start from the empty clause-set".into());
    }
    for (i, cfg) in seq.iter().enumerate() {
        if cfg.clauses.c() > t.bound {
            return Err(format!("configuration {i} has {} clauses, bound {}", cfg.clauses.c(), t.bound));
        }
    }
    for i in 1..seq.len() {
        let prev = &seq[i - 1].clauses;
        let cur = &seq[i].clauses;
        let ok = match (&seq[i].origin, t.kind) {
            (Step::Initial, _) => false,
            (Step::AxiomDownload { clause }, _) => f.contains(clause) && *cur == prev.with(clause.clone()),
            (Step::Inference, SpaceKind::Semantic) => cnf::entails(prev, cur).unwrap_or(false),
            (Step::Inference, _) => false,
            (Step::Deletion, SpaceKind::Semantic) => false,
            (Step::Deletion, _) => cur.iter().all(|c| prev.contains(c)),
            (Step::Resolvent { .. }, SpaceKind::Semantic) => false,
            (Step::Resolvent { clause }, kind) => {
                let fresh = !prev.contains(clause) && cur.contains(clause);
                let rest_kept = cur.iter().all(|c| c == clause || prev.contains(c));
                let pairs: Vec<(&Clause, &Clause)> = prev
                    .iter()
                    .flat_map(|a| prev.iter().map(move |b| (a, b)))
                    .filter(|(a, b)| resolution::resolve(a, b).ok().as_ref() == Some(clause))
                    .collect();
                let parents_ok = match kind {
                    SpaceKind::Tree => pairs.iter().any(|(a, b)| !cur.contains(a) && !cur.contains(b)),
                    _ => !pairs.is_empty(),
                };
                fresh && rest_kept && parents_ok
            }
        };
        if !ok {
            return Err(format!("step {i} ({:?}) is not a legal {:?} step", seq[i].origin, t.kind));
        }
    }
    let last = &seq.last().unwrap().clauses;
    let complete = match t.kind {
        SpaceKind::Semantic => !cnf::is_satisfiable(last).unwrap_or(true),
        _ => last.has_bottom(),
    };
    if !complete {
        return Err("trace is not complete".into());
    }
    Ok(())
}
