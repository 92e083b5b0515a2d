//! Consistent sets of partial assignments: the four extension conditions,
//! their checkers, and constructive existence deciders.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Ba, Bc, Dense};
use crate::cnf::{self, ClauseSet, PartialAssignment};
use crate::error::{Error, Result};
use crate::reductions::Rk;
use crate::saturation::{self, Rule};

/// Variable cap: families range over all `3^n` assignments.
pub const FAMILY_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsistencyKind {
    /// Both extensions of every short sub-assignment.
    KConsistent,
    /// Some extension of every short sub-assignment.
    SymmetricK,
    /// Extension below the maximal members plus a chain-length bound.
    WeaklyK,
    /// Contains `ε`; some extension of every member shorter than k.
    VeryWeaklyK,
}

impl ConsistencyKind {
    pub const ALL: [ConsistencyKind; 4] =
        [ConsistencyKind::KConsistent, ConsistencyKind::SymmetricK, ConsistencyKind::WeaklyK, ConsistencyKind::VeryWeaklyK];

    pub fn tag(self) -> &'static str {
        match self {
            ConsistencyKind::KConsistent => "k_consistent",
            ConsistencyKind::SymmetricK => "symmetric_k",
            ConsistencyKind::WeaklyK => "weakly_k",
            ConsistencyKind::VeryWeaklyK => "very_weakly_k",
        }
    }
}

impl fmt::Display for ConsistencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ConsistencyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ConsistencyKind> {
        Ok(match s {
            "k_consistent" | "k" => ConsistencyKind::KConsistent,
            "symmetric_k" | "symmetric" => ConsistencyKind::SymmetricK,
            "weakly_k" | "weakly" => ConsistencyKind::WeaklyK,
            "very_weakly_k" | "very_weakly" => ConsistencyKind::VeryWeaklyK,
            _ => return Err(Error::Invalid(format!("unknown consistency kind `{s}`"))),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentFamily {
    pub members: BTreeSet<PartialAssignment>,
    pub scope: BTreeSet<u32>,
}

impl AssignmentFamily {
    pub fn new(members: impl IntoIterator<Item = PartialAssignment>, scope: BTreeSet<u32>) -> AssignmentFamily {
        AssignmentFamily { members: members.into_iter().collect(), scope }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, phi: &PartialAssignment) -> bool {
        self.members.contains(phi)
    }

    pub fn union(&self, other: &AssignmentFamily) -> AssignmentFamily {
        AssignmentFamily {
            members: self.members.union(&other.members).cloned().collect(),
            scope: self.scope.union(&other.scope).copied().collect(),
        }
    }

    fn from_dense(d: &Dense, members: &[Ba]) -> AssignmentFamily {
        AssignmentFamily { members: members.iter().map(|a| d.to_assignment(*a)).collect(), scope: d.vars.iter().copied().collect() }
    }
}

fn setup(f: &ClauseSet) -> Result<(Dense, Vec<Bc>)> {
    let n = f.n();
    if n > FAMILY_CAP {
        return Err(Error::CapExceeded { what: "assignment families", n, cap: FAMILY_CAP });
    }
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    Ok((d, cls))
}

fn show(d: &Dense, a: Ba) -> String {
    serde_json::to_string(&d.to_assignment(a)).unwrap_or_default()
}

/// Sub-assignments of `phi` with fewer than `k` variables.
fn short_subs(phi: Ba, k: u32) -> Vec<Ba> {
    let mut out = Vec::new();
    let mut m = phi.set;
    loop {
        if m.count_ones() < k {
            out.push(phi.restrict(m));
        }
        if m == 0 {
            break;
        }
        m = (m - 1) & phi.set;
    }
    out
}

fn check_dense(kind: ConsistencyKind, p: &[Ba], d: &Dense, cls: &[Bc], k: u32) -> std::result::Result<(), String> {
    if p.is_empty() {
        return Err("family is empty".into());
    }
    if let Some((a, c)) = p.iter().find_map(|a| cls.iter().find(|c| a.falsifies(**c)).map(|c| (a, c))) {
        return Err(format!("member {} falsifies clause {}", show(d, *a), d.to_clause(*c)));
    }
    let full = d.full_mask();
    let members: HashSet<Ba> = p.iter().copied().collect();
    let has_superset = |x: Ba| p.iter().any(|q| x.sub(*q));
    match kind {
        ConsistencyKind::KConsistent | ConsistencyKind::SymmetricK => {
            let mut down: HashSet<Ba> = HashSet::new();
            for a in p {
                let mut m = a.set;
                loop {
                    down.insert(a.restrict(m));
                    if m == 0 {
                        break;
                    }
                    m = (m - 1) & a.set;
                }
            }
            for a in p {
                let free = full & !a.set;
                for psi in short_subs(*a, k) {
                    for i in (0..d.n()).filter(|i| free >> i & 1 == 1) {
                        let ok0 = down.contains(&psi.bind(i, false));
                        let ok1 = down.contains(&psi.bind(i, true));
                        let ok = if kind == ConsistencyKind::KConsistent { ok0 && ok1 } else { ok0 || ok1 };
                        if !ok {
                            return Err(format!(
                                "sub-assignment {} of member {} lacks an extension on variable {}",
                                show(d, psi),
                                show(d, *a),
                                d.vars[i]
                            ));
                        }
                    }
                }
            }
        }
        ConsistencyKind::VeryWeaklyK => {
            if !members.contains(&Ba::EMPTY) {
                return Err("the empty assignment is not a member".into());
            }
            for a in p.iter().filter(|a| a.n() < k) {
                let free = full & !a.set;
                for i in (0..d.n()).filter(|i| free >> i & 1 == 1) {
                    if !members.contains(&a.bind(i, false)) && !members.contains(&a.bind(i, true)) {
                        return Err(format!("member {} has no extension on variable {}", show(d, *a), d.vars[i]));
                    }
                }
            }
        }
        ConsistencyKind::WeaklyK => {
            let sups: Vec<Vec<usize>> =
                p.iter().map(|a| (0..p.len()).filter(|&j| p[j] != *a && a.sub(p[j])).collect()).collect();
            for (idx, a) in p.iter().enumerate() {
                if sups[idx].is_empty() {
                    continue;
                }
                let free = full & !a.set;
                for i in (0..d.n()).filter(|i| free >> i & 1 == 1) {
                    for v in [false, true] {
                        if !has_superset(a.bind(i, v)) {
                            return Err(format!(
                                "non-maximal member {} has no member extending it by {}={}",
                                show(d, *a),
                                d.vars[i],
                                v as u8
                            ));
                        }
                    }
                }
            }
            let chain = min_maximal_chain(p, &sups);
            if chain < k as usize {
                return Err(format!("a maximal chain has length {chain} < {k}"));
            }
        }
    }
    Ok(())
}

/// The least number of cover steps in a maximal chain of `p` under `⊆`.
fn min_maximal_chain(p: &[Ba], sups: &[Vec<usize>]) -> usize {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(p[i].n()));
    let mut len = vec![0usize; p.len()];
    for &i in &order {
        let covers = sups[i].iter().filter(|&&j| !sups[i].iter().any(|&m| m != j && p[m].sub(p[j])));
        len[i] = covers.map(|&j| 1 + len[j]).min().unwrap_or(0);
    }
    let is_minimal = |i: usize| !(0..p.len()).any(|j| j != i && sups[j].contains(&i));
    (0..p.len()).filter(|&i| is_minimal(i)).map(|i| len[i]).min().unwrap_or(0)
}

/// Checks `P` against the kind's definition, reporting the first violation.
pub fn check_family_detailed(kind: ConsistencyKind, p: &AssignmentFamily, f: &ClauseSet, k: u32) -> std::result::Result<(), String> {
    let vars = f.vars();
    if let Some(x) = p.scope.iter().find(|x| !vars.contains(x)) {
        return Err(format!("scope variable {x} does not occur in the clause-set"));
    }
    if let Some(a) = p.members.iter().find(|a| a.vars().iter().any(|x| !p.scope.contains(x))) {
        return Err(format!("member {} leaves the scope", serde_json::to_string(a).unwrap_or_default()));
    }
    let (d, cls) = setup(f).map_err(|e| e.to_string())?;
    let dense: Vec<Ba> = p.members.iter().map(|a| d.assignment(a)).collect::<Result<_>>().map_err(|e| e.to_string())?;
    check_dense(kind, &dense, &d, &cls, k)
}

pub fn check_family(kind: ConsistencyKind, p: &AssignmentFamily, f: &ClauseSet, k: u32) -> bool {
    check_family_detailed(kind, p, f, k).is_ok()
}

/// `{φ : var(φ) ⊆ var(F), φ falsifies no clause of F ∪ F*}` for the k- or
/// symmetric k-resolution closure `F*`. Every family of the kind is a
/// subset of it, but it need not itself be consistent.
fn closure_dense(kind: ConsistencyKind, d: &Dense, cls: &[Bc], k: u32) -> Vec<Ba> {
    let rule = match kind {
        ConsistencyKind::KConsistent => Rule::Asymmetric(k),
        ConsistencyKind::SymmetricK => Rule::Symmetric(k),
        _ => unreachable!(),
    };
    let mut star = saturation::closure(cls, rule);
    star.extend_from_slice(cls);
    bits::assignments_within(d.full_mask()).into_iter().filter(|a| !star.iter().any(|c| a.falsifies(*c))).collect()
}

pub fn closure_family(kind: ConsistencyKind, f: &ClauseSet, k: u32) -> Result<AssignmentFamily> {
    if !matches!(kind, ConsistencyKind::KConsistent | ConsistencyKind::SymmetricK) {
        return Err(Error::Invalid(format!("no closure family is defined for {kind}")));
    }
    let (d, cls) = setup(f)?;
    Ok(AssignmentFamily::from_dense(&d, &closure_dense(kind, &d, &cls, k)))
}

/// Greatest fixed point: repeatedly drop members whose extension condition
/// fails inside the current set. The condition is monotone in the set, so
/// the result is the union of all families of the kind (possibly empty).
fn greatest_dense(kind: ConsistencyKind, d: &Dense, cls: &[Bc], k: u32) -> Vec<Ba> {
    let full = d.full_mask();
    let mut p: Vec<Ba> = bits::assignments_within(full).into_iter().filter(|a| !cls.iter().any(|c| a.falsifies(*c))).collect();
    loop {
        let set: HashSet<Ba> = p.iter().copied().collect();
        let mut down: HashSet<Ba> = HashSet::new();
        for a in &p {
            let mut m = a.set;
            loop {
                down.insert(a.restrict(m));
                if m == 0 {
                    break;
                }
                m = (m - 1) & a.set;
            }
        }
        let keep = |a: &Ba| -> bool {
            let free = full & !a.set;
            let frees = (0..d.n()).filter(move |i| free >> i & 1 == 1);
            match kind {
                ConsistencyKind::KConsistent => short_subs(*a, k)
                    .iter()
                    .all(|psi| frees.clone().all(|i| down.contains(&psi.bind(i, false)) && down.contains(&psi.bind(i, true)))),
                ConsistencyKind::SymmetricK => short_subs(*a, k)
                    .iter()
                    .all(|psi| frees.clone().all(|i| down.contains(&psi.bind(i, false)) || down.contains(&psi.bind(i, true)))),
                ConsistencyKind::VeryWeaklyK => {
                    a.n() >= k || frees.clone().all(|i| set.contains(&a.bind(i, false)) || set.contains(&a.bind(i, true)))
                }
                ConsistencyKind::WeaklyK => unreachable!(),
            }
        };
        let next: Vec<Ba> = p.iter().copied().filter(|a| keep(a)).collect();
        if next.len() == p.len() {
            return p;
        }
        p = next;
    }
}

/// The largest k-consistent (or symmetric k-consistent) family, or `None`
/// when none exists.
pub fn largest_family(kind: ConsistencyKind, f: &ClauseSet, k: u32) -> Result<Option<AssignmentFamily>> {
    if !matches!(kind, ConsistencyKind::KConsistent | ConsistencyKind::SymmetricK) {
        return Err(Error::Invalid(format!("no largest family is defined for {kind}")));
    }
    if cnf::is_satisfiable(f)? {
        return Err(Error::Satisfiable);
    }
    let (d, cls) = setup(f)?;
    let p = greatest_dense(kind, &d, &cls, k);
    if p.is_empty() {
        return Ok(None);
    }
    Ok(Some(AssignmentFamily::from_dense(&d, &p)))
}

/// Extends `a` greedily by literals keeping `hd(a * F)` unchanged.
fn saturate_hd(rk: &mut Rk, cls: &[Bc], full: u64, mut a: Ba) -> Ba {
    let h = rk.level(&bits::apply(a, cls));
    'outer: loop {
        for i in 0..64 {
            if full >> i & 1 == 0 || a.set >> i & 1 == 1 {
                continue;
            }
            for v in [false, true] {
                let b = a.bind(i, v);
                if rk.level(&bits::apply(b, cls)) == h {
                    a = b;
                    continue 'outer;
                }
            }
        }
        return a;
    }
}

/// Members of the weakly consistent witness: assignments containing the
/// saturation `ρ` of `ε` that falsify no clause and admit no
/// hardness-preserving single extension.
fn weakly_family(d: &Dense, cls: &[Bc]) -> Vec<Ba> {
    let mut rk = Rk::new();
    let full = d.full_mask();
    let root = saturate_hd(&mut rk, cls, full, Ba::EMPTY);
    bits::assignments_within(full)
        .into_iter()
        .filter(|a| root.sub(*a) && !cls.iter().any(|c| a.falsifies(*c)))
        .filter(|a| {
            let h = rk.level(&bits::apply(*a, cls));
            (0..d.n())
                .filter(|i| a.set >> i & 1 == 0)
                .all(|i| [false, true].iter().all(|v| rk.level(&bits::apply(a.bind(i, *v), cls)) < h))
        })
        .collect()
}

/// Members with `n(φ) = j ≤ k` falsifying no clause derivable by a
/// resolution tree of height at most `k - j`.
fn very_weakly_family(d: &Dense, cls: &[Bc], k: u32) -> Vec<Ba> {
    let full = d.full_mask();
    let all = bits::assignments_within(full);
    let mut out = Vec::new();
    for j in 0..=k.min(d.n() as u32) {
        let derivable = saturation::depth_closure(cls, k - j);
        out.extend(all.iter().filter(|a| a.n() == j && !derivable.iter().any(|c| a.falsifies(*c))).copied());
    }
    out
}

/// The candidate family the decider builds for `kind`.
pub fn witness_family(kind: ConsistencyKind, f: &ClauseSet, k: u32) -> Result<AssignmentFamily> {
    if cnf::is_satisfiable(f)? {
        return Err(Error::Satisfiable);
    }
    let (d, cls) = setup(f)?;
    let p = match kind {
        ConsistencyKind::KConsistent | ConsistencyKind::SymmetricK => greatest_dense(kind, &d, &cls, k),
        ConsistencyKind::WeaklyK => {
            if bits::has_bottom(&cls) {
                Vec::new()
            } else {
                weakly_family(&d, &cls)
            }
        }
        ConsistencyKind::VeryWeaklyK => very_weakly_family(&d, &cls, k),
    };
    Ok(AssignmentFamily::from_dense(&d, &p))
}

/// Whether a family of the given kind exists: builds the candidate and
/// verifies it with the checker.
pub fn exists_family(kind: ConsistencyKind, f: &ClauseSet, k: u32) -> Result<bool> {
    let p = witness_family(kind, f, k)?;
    Ok(check_family(kind, &p, f, k))
}

/// Exhaustive existence test over all families; feasible for `n ≤ 2`.
pub fn exists_family_brute(kind: ConsistencyKind, f: &ClauseSet, k: u32) -> Result<bool> {
    let (d, cls) = setup(f)?;
    if d.n() > 2 {
        return Err(Error::CapExceeded { what: "family enumeration", n: d.n(), cap: 2 });
    }
    let all: Vec<Ba> = bits::assignments_within(d.full_mask()).into_iter().filter(|a| !cls.iter().any(|c| a.falsifies(*c))).collect();
    for mask in 1u32..(1 << all.len()) {
        let p: Vec<Ba> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        if check_dense(kind, &p, &d, &cls, k).is_ok() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every passing family, by enumeration; feasible for `n ≤ 2`.
pub fn all_families_brute(kind: ConsistencyKind, f: &ClauseSet, k: u32) -> Result<Vec<AssignmentFamily>> {
    let (d, cls) = setup(f)?;
    if d.n() > 2 {
        return Err(Error::CapExceeded { what: "family enumeration", n: d.n(), cap: 2 });
    }
    let all: Vec<Ba> = bits::assignments_within(d.full_mask()).into_iter().filter(|a| !cls.iter().any(|c| a.falsifies(*c))).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << all.len()) {
        let p: Vec<Ba> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        if check_dense(kind, &p, &d, &cls, k).is_ok() {
            out.push(AssignmentFamily::from_dense(&d, &p));
        }
    }
    Ok(out)
}
