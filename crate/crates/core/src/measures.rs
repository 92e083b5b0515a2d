//! Hardness, depth, symmetric and asymmetric width, and the lift of any
//! measure to satisfiable clause-sets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{Bc, Dense};
use crate::cnf::{self, ClauseSet, PartialAssignment};
use crate::error::{Error, Result};
use crate::reductions::Rk;
use crate::resolution::{self, Branching, Objective, ProofNode, ResolutionProof};
use crate::saturation::{self, Rule};
use crate::space::{self, SpaceTrace};

/// Variable cap for width witnesses built from an exact closure.
pub const WITNESS_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Hardness,
    Depth,
    SymWidth,
    AsymWidth,
    SemanticSpace,
    ResolutionSpace,
    TreeSpace,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 7] = [
        MeasureKind::Hardness,
        MeasureKind::Depth,
        MeasureKind::SymWidth,
        MeasureKind::AsymWidth,
        MeasureKind::SemanticSpace,
        MeasureKind::ResolutionSpace,
        MeasureKind::TreeSpace,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            MeasureKind::Hardness => "hardness",
            MeasureKind::Depth => "depth",
            MeasureKind::SymWidth => "sym_width",
            MeasureKind::AsymWidth => "asym_width",
            MeasureKind::SemanticSpace => "semantic_space",
            MeasureKind::ResolutionSpace => "resolution_space",
            MeasureKind::TreeSpace => "tree_space",
        }
    }

    /// The least value the measure takes on an unsatisfiable clause-set.
    pub fn minimum(self) -> u32 {
        match self {
            MeasureKind::SemanticSpace | MeasureKind::ResolutionSpace | MeasureKind::TreeSpace => 1,
            _ => 0,
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<MeasureKind> {
        Ok(match s {
            "hardness" | "hd" => MeasureKind::Hardness,
            "depth" | "dep" => MeasureKind::Depth,
            "sym_width" | "wid" => MeasureKind::SymWidth,
            "asym_width" | "whd" => MeasureKind::AsymWidth,
            "semantic_space" | "semspace" => MeasureKind::SemanticSpace,
            "resolution_space" | "resspace" => MeasureKind::ResolutionSpace,
            "tree_space" | "treespace" => MeasureKind::TreeSpace,
            _ => return Err(Error::Invalid(format!("unknown measure `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Proof { proof: ResolutionProof },
    Sequence { trace: SpaceTrace },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub kind: MeasureKind,
    pub value: u32,
    pub witness: Option<Witness>,
    /// The assignment attaining the lifted value, when `F` is satisfiable.
    pub instantiation: Option<PartialAssignment>,
    pub relativisation: Option<BTreeSet<u32>>,
}

fn dense(f: &ClauseSet) -> Result<Vec<Bc>> {
    Dense::of(f)?.clauses(f)
}

fn min_k(mut holds: impl FnMut(u32) -> bool) -> u32 {
    let mut k = 0;
    while !holds(k) {
        k += 1;
    }
    k
}

fn base_dense(kind: MeasureKind, cls: &[Bc]) -> u32 {
    match kind {
        MeasureKind::Hardness => Rk::new().level(cls),
        MeasureKind::Depth => Branching::new(Objective::Depth).value(cls).expect("unsatisfiable") as u32,
        MeasureKind::SymWidth => min_k(|k| saturation::derives_bottom(cls, Rule::Symmetric(k))),
        MeasureKind::AsymWidth => min_k(|k| saturation::derives_bottom(cls, Rule::Asymmetric(k))),
        _ => unreachable!("space measures go through the space module"),
    }
}

/// The measure on an unsatisfiable clause-set.
pub fn base(kind: MeasureKind, f: &ClauseSet) -> Result<u32> {
    if cnf::is_satisfiable(f)? {
        return Err(Error::Satisfiable);
    }
    match kind {
        MeasureKind::SemanticSpace => Ok(space::semantic_space(f)? as u32),
        MeasureKind::ResolutionSpace => Ok(space::resolution_space(f)? as u32),
        MeasureKind::TreeSpace => Ok(space::tree_space_search(f)? as u32),
        _ => Ok(base_dense(kind, &dense(f)?)),
    }
}

/// Prime implicates of `F` (as falsifying assignments) whose variables lie
/// inside `V`; the satisfiable case of the lift maximises over these.
fn lift_points(f: &ClauseSet, v: Option<&BTreeSet<u32>>) -> Result<Vec<PartialAssignment>> {
    let primes = cnf::prime_implicates(f)?;
    Ok(primes
        .iter()
        .filter(|c| v.is_none_or(|v| c.vars().iter().all(|x| v.contains(x))))
        .map(PartialAssignment::falsifying)
        .collect())
}

/// The lifted measure together with a maximising instantiation.
fn lift_with_point(kind: MeasureKind, f: &ClauseSet, v: Option<&BTreeSet<u32>>) -> Result<(u32, Option<PartialAssignment>)> {
    if let Some(v) = v {
        let vars = f.vars();
        if let Some(x) = v.iter().find(|x| !vars.contains(x)) {
            return Err(Error::Invalid(format!("variable {x} does not occur in the clause-set")));
        }
    }
    if v.is_none() && !cnf::is_satisfiable(f)? {
        return Ok((base(kind, f)?, None));
    }
    let points = lift_points(f, v)?;
    let values: Vec<Result<u32>> = points.par_iter().map(|phi| base(kind, &cnf::apply(phi, f))).collect();
    let mut best: (u32, Option<PartialAssignment>) = (kind.minimum(), None);
    for (phi, val) in points.into_iter().zip(values) {
        let val = val?;
        if best.1.is_none() || val > best.0 {
            best = (val, Some(phi));
        }
    }
    Ok(best)
}

/// `h(F)`: the base measure on unsatisfiable `F`; otherwise the maximum of
/// the base measure over instantiations `φ*F` that are unsatisfiable,
/// optionally restricted to `var(φ) ⊆ V`. `⊤` and empty ranges give the
/// measure's minimum.
pub fn lift_measure(kind: MeasureKind, f: &ClauseSet, v: Option<&BTreeSet<u32>>) -> Result<u32> {
    Ok(lift_with_point(kind, f, v)?.0)
}

pub fn measure(kind: MeasureKind, f: &ClauseSet) -> Result<u32> {
    lift_measure(kind, f, None)
}

/// Tree-hardness: least k with `r_k(F) = {⊥}` (lifted when satisfiable).
pub fn hardness(f: &ClauseSet) -> Result<u32> {
    measure(MeasureKind::Hardness, f)
}

/// Minimal height of a tree refutation (lifted when satisfiable).
pub fn depth(f: &ClauseSet) -> Result<u32> {
    measure(MeasureKind::Depth, f)
}

/// Symmetric width (lifted when satisfiable).
pub fn sym_width(f: &ClauseSet) -> Result<u32> {
    measure(MeasureKind::SymWidth, f)
}

/// Asymmetric width (lifted when satisfiable).
pub fn asym_width(f: &ClauseSet) -> Result<u32> {
    measure(MeasureKind::AsymWidth, f)
}

/// Minimal Horton-Strahler number over branching trees; an independent
/// route to hardness.
pub fn hardness_by_strahler(f: &ClauseSet) -> Result<u32> {
    Ok(resolution::branching_value(f, Objective::Strahler)? as u32)
}

/// A refutation within the width bound, read off an exact closure that
/// records parents.
fn width_refutation(f: &ClauseSet, rule: Rule) -> Result<ResolutionProof> {
    let n = f.n();
    if n > WITNESS_CAP {
        return Err(Error::CapExceeded { what: "width witness", n, cap: WITNESS_CAP });
    }
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    let admitted: Vec<Bc> = cls
        .iter()
        .copied()
        .filter(|c| !matches!(rule, Rule::Symmetric(k) if c.len() > k))
        .collect();
    let mut list: Vec<(Bc, Option<(usize, usize)>)> = admitted.iter().map(|c| (*c, None)).collect();
    let mut index: HashMap<Bc, usize> = list.iter().enumerate().map(|(i, (c, _))| (*c, i)).collect();
    let mut i = 0;
    let mut root = index.get(&Bc::BOTTOM).copied();
    while root.is_none() && i < list.len() {
        let g = list[i].0;
        for j in 0..i {
            let a = list[j].0;
            let Some(r) = g.resolve(a) else { continue };
            let ok = match rule {
                Rule::Unrestricted => true,
                Rule::Asymmetric(k) => g.len() <= k || a.len() <= k,
                Rule::Symmetric(k) => r.len() <= k,
            };
            if ok && !index.contains_key(&r) {
                list.push((r, Some((j, i))));
                index.insert(r, list.len() - 1);
                if r.is_empty() {
                    root = Some(list.len() - 1);
                    break;
                }
            }
        }
        i += 1;
    }
    let root = root.ok_or(Error::Invalid("no refutation within the bound".into()))?;
    let mut keep = vec![false; list.len()];
    keep[root] = true;
    for i in (0..=root).rev() {
        if keep[i] {
            if let Some((x, y)) = list[i].1 {
                keep[x] = true;
                keep[y] = true;
            }
        }
    }
    let mut remap = vec![usize::MAX; list.len()];
    let mut proof = ResolutionProof::new();
    for i in 0..=root {
        if keep[i] {
            let parents = list[i].1.map(|(x, y)| (remap[x], remap[y]));
            proof.nodes.push(ProofNode { clause: d.to_clause(list[i].0), parents });
            remap[i] = proof.nodes.len() - 1;
        }
    }
    Ok(proof)
}

fn witness(kind: MeasureKind, f: &ClauseSet, value: u32) -> Result<Witness> {
    Ok(match kind {
        MeasureKind::Hardness => Witness::Proof { proof: resolution::branching_refutation(f, Objective::Strahler)? },
        MeasureKind::Depth => Witness::Proof { proof: resolution::branching_refutation(f, Objective::Depth)? },
        MeasureKind::SymWidth => Witness::Proof { proof: width_refutation(f, Rule::Symmetric(value))? },
        MeasureKind::AsymWidth => Witness::Proof { proof: width_refutation(f, Rule::Asymmetric(value))? },
        MeasureKind::SemanticSpace => Witness::Sequence { trace: space::semantic_space_trace(f)? },
        MeasureKind::ResolutionSpace => Witness::Sequence { trace: space::resolution_space_trace(f)? },
        MeasureKind::TreeSpace => Witness::Sequence { trace: space::tree_space_trace(f)? },
    })
}

/// Computes the (lifted, optionally relativised) measure, and a witness for
/// the maximising unsatisfiable instance when requested.
pub fn measure_report(kind: MeasureKind, f: &ClauseSet, v: Option<&BTreeSet<u32>>, with_witness: bool) -> Result<MeasureReport> {
    let (value, point) = lift_with_point(kind, f, v)?;
    let target = match &point {
        Some(phi) => Some(cnf::apply(phi, f)),
        None if f.is_top() || v.is_some() => None,
        None => Some(f.clone()),
    };
    let witness = match (with_witness, &target) {
        (true, Some(g)) => Some(witness(kind, g, value)?),
        _ => None,
    };
    Ok(MeasureReport { kind, value, witness, instantiation: point, relativisation: v.cloned() })
}

/// Checks that a witness is valid for `F` and attains `value`.
pub fn check_witness(kind: MeasureKind, w: &Witness, f: &ClauseSet, value: u32) -> bool {
    match w {
        Witness::Proof { proof } => {
            if !resolution::check_proof(proof, f, &cnf::Clause::bottom()) {
                return false;
            }
            match kind {
                MeasureKind::Hardness => resolution::horton_strahler(proof) <= value,
                MeasureKind::Depth => resolution::height(proof) <= value,
                MeasureKind::SymWidth => proof.nodes.iter().all(|n| n.clause.len() as u32 <= value),
                MeasureKind::AsymWidth => proof.nodes.iter().all(|n| match n.parents {
                    None => true,
                    Some((a, b)) => proof.nodes[a].clause.len() as u32 <= value || proof.nodes[b].clause.len() as u32 <= value,
                }),
                _ => false,
            }
        }
        Witness::Sequence { trace } => trace.bound as u32 == value && space::check_trace(trace, f).is_ok(),
    }
}
