//! Literals, clauses, clause-sets and partial assignments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::{self, Dense};
use crate::error::{Error, Result};
use crate::saturation;

/// Variable cap for the exact satisfiability and entailment procedures.
pub const DEFAULT_CAP: usize = 24;

/// A variable (id ≥ 1) with a polarity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    /// Panics on variable 0; use [`Literal::from_dimacs`] for untrusted input.
    pub fn new(var: u32, positive: bool) -> Literal {
        assert!(var >= 1, "variable ids start at 1");
        Literal { var, positive }
    }

    pub fn pos(var: u32) -> Literal {
        Literal::new(var, true)
    }

    pub fn neg(var: u32) -> Literal {
        Literal::new(var, false)
    }

    pub fn from_dimacs(x: i64) -> Result<Literal> {
        if x == 0 || x.unsigned_abs() > u32::MAX as u64 {
            return Err(Error::ZeroVariable);
        }
        Ok(Literal { var: x.unsigned_abs() as u32, positive: x > 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn complement(self) -> Literal {
        Literal { var: self.var, positive: !self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.to_dimacs())
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = i64::deserialize(d)?;
        Literal::from_dimacs(x).map_err(serde::de::Error::custom)
    }
}

/// A clause: literals sorted by variable, no complementary pair.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// The empty clause ⊥.
    pub fn bottom() -> Clause {
        Clause { lits: Vec::new() }
    }

    /// Collapses duplicates; rejects complementary pairs.
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Result<Clause> {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        for w in v.windows(2) {
            if w[0].var == w[1].var {
                return Err(Error::Complementary(w[0].var));
            }
        }
        Ok(Clause { lits: v })
    }

    pub fn from_dimacs(xs: &[i64]) -> Result<Clause> {
        Clause::new(xs.iter().map(|x| Literal::from_dimacs(*x)).collect::<Result<Vec<_>>>()?)
    }

    pub(crate) fn from_sorted_unchecked(lits: Vec<Literal>) -> Clause {
        Clause { lits }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, l: Literal) -> bool {
        self.lits.binary_search(&l).is_ok()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.lits.iter().map(|l| l.var).collect()
    }

    pub fn is_subset(&self, other: &Clause) -> bool {
        self.lits.iter().all(|l| other.contains(*l))
    }

    /// Literals of `self` whose complement is in `other`.
    pub fn clashes(&self, other: &Clause) -> Vec<Literal> {
        self.lits.iter().copied().filter(|l| other.contains(l.complement())).collect()
    }

    pub fn to_dimacs(&self) -> Vec<i64> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Clause {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dimacs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Clause {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let xs = Vec::<i64>::deserialize(d)?;
        Clause::from_dimacs(&xs).map_err(serde::de::Error::custom)
    }
}

/// A finite set of clauses, kept sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ClauseSet {
    clauses: Vec<Clause>,
}

impl ClauseSet {
    /// The empty clause-set ⊤.
    pub fn top() -> ClauseSet {
        ClauseSet::default()
    }

    pub fn bottom() -> ClauseSet {
        ClauseSet { clauses: vec![Clause::bottom()] }
    }

    pub fn from_clauses(cls: impl IntoIterator<Item = Clause>) -> ClauseSet {
        let mut clauses: Vec<Clause> = cls.into_iter().collect();
        clauses.sort_unstable();
        clauses.dedup();
        ClauseSet { clauses }
    }

    pub fn from_dimacs(cls: &[&[i64]]) -> Result<ClauseSet> {
        Ok(ClauseSet::from_clauses(cls.iter().map(|c| Clause::from_dimacs(c)).collect::<Result<Vec<_>>>()?))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Clause> {
        self.clauses.iter()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.clauses.binary_search(c).is_ok()
    }

    pub fn has_bottom(&self) -> bool {
        self.clauses.first().is_some_and(|c| c.is_empty())
    }

    pub fn is_top(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.clauses.iter().flat_map(|c| c.lits.iter().map(|l| l.var)).collect()
    }

    /// n(F): number of variables.
    pub fn n(&self) -> usize {
        self.vars().len()
    }

    /// c(F): number of clauses.
    pub fn c(&self) -> usize {
        self.clauses.len()
    }

    /// ℓ(F): number of literal occurrences.
    pub fn l(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).sum()
    }

    pub fn max_clause_len(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn union(&self, other: &ClauseSet) -> ClauseSet {
        ClauseSet::from_clauses(self.clauses.iter().chain(other.clauses.iter()).cloned())
    }

    pub fn with(&self, c: Clause) -> ClauseSet {
        ClauseSet::from_clauses(self.clauses.iter().cloned().chain(std::iter::once(c)))
    }

    pub fn without(&self, c: &Clause) -> ClauseSet {
        ClauseSet { clauses: self.clauses.iter().filter(|d| *d != c).cloned().collect() }
    }

    pub fn to_dimacs_lists(&self) -> Vec<Vec<i64>> {
        self.clauses.iter().map(|c| c.to_dimacs()).collect()
    }
}

impl fmt::Display for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ClauseSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.clauses.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClauseSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(ClauseSet::from_clauses(Vec::<Clause>::deserialize(d)?))
    }
}

impl FromIterator<Clause> for ClauseSet {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        ClauseSet::from_clauses(iter)
    }
}

/// A finite map from variables to {0,1}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PartialAssignment {
    map: BTreeMap<u32, bool>,
}

impl PartialAssignment {
    pub fn new() -> PartialAssignment {
        PartialAssignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, bool)>) -> Result<PartialAssignment> {
        let mut p = PartialAssignment::new();
        for (v, b) in pairs {
            if v == 0 {
                return Err(Error::ZeroVariable);
            }
            if let Some(old) = p.map.insert(v, b) {
                if old != b {
                    return Err(Error::Invalid(format!("variable {v} bound twice")));
                }
            }
        }
        Ok(p)
    }

    /// φ_C: sets every literal of `c` to 0.
    pub fn falsifying(c: &Clause) -> PartialAssignment {
        PartialAssignment { map: c.lits.iter().map(|l| (l.var, !l.positive)).collect() }
    }

    pub(crate) fn insert(&mut self, v: u32, b: bool) {
        self.map.insert(v, b);
    }

    /// The assignment extended by `v ← b`; replaces an existing binding.
    pub fn bind(&self, v: u32, b: bool) -> PartialAssignment {
        let mut p = self.clone();
        p.map.insert(v, b);
        p
    }

    pub fn get(&self, v: u32) -> Option<bool> {
        self.map.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.map.iter().map(|(v, b)| (*v, *b))
    }

    /// n(φ).
    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        self.map.keys().copied().collect()
    }

    pub fn is_subset(&self, other: &PartialAssignment) -> bool {
        self.map.iter().all(|(v, b)| other.map.get(v) == Some(b))
    }

    pub fn compatible(&self, other: &PartialAssignment) -> bool {
        self.map.iter().all(|(v, b)| other.map.get(v).is_none_or(|c| c == b))
    }

    pub fn value(&self, l: Literal) -> Option<bool> {
        self.get(l.var).map(|b| b == l.positive)
    }

    pub fn satisfies(&self, c: &Clause) -> bool {
        c.lits.iter().any(|l| self.value(*l) == Some(true))
    }

    pub fn falsifies(&self, c: &Clause) -> bool {
        c.lits.iter().all(|l| self.value(*l) == Some(false))
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, (v, b)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}->{}", *b as u8)?;
        }
        write!(f, ">")
    }
}

impl Serialize for PartialAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m: BTreeMap<String, u8> = self.map.iter().map(|(v, b)| (v.to_string(), *b as u8)).collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialAssignment {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, u8>::deserialize(d)?;
        let mut pairs = Vec::with_capacity(m.len());
        for (k, b) in m {
            let v: u32 = k.parse().map_err(serde::de::Error::custom)?;
            if b > 1 {
                return Err(serde::de::Error::custom("bit must be 0 or 1"));
            }
            pairs.push((v, b == 1));
        }
        PartialAssignment::from_pairs(pairs).map_err(serde::de::Error::custom)
    }
}

/// φ * F: drops satisfied clauses, deletes false literals from the rest.
pub fn apply(phi: &PartialAssignment, f: &ClauseSet) -> ClauseSet {
    f.iter()
        .filter(|c| !phi.satisfies(c))
        .map(|c| Clause { lits: c.lits.iter().copied().filter(|l| phi.value(*l).is_none()).collect() })
        .collect()
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { what, n, cap })
    } else {
        Ok(())
    }
}

pub fn is_satisfiable(f: &ClauseSet) -> Result<bool> {
    is_satisfiable_capped(f, DEFAULT_CAP)
}

pub fn is_satisfiable_capped(f: &ClauseSet, cap: usize) -> Result<bool> {
    check_cap("satisfiability", f.n(), cap)?;
    let d = Dense::of(f)?;
    Ok(bits::satisfiable(&d.clauses(f)?))
}

/// F ⊨ G, decided clause by clause: F ⊨ D iff φ_D * F is unsatisfiable.
pub fn entails(f: &ClauseSet, g: &ClauseSet) -> Result<bool> {
    entails_capped(f, g, DEFAULT_CAP)
}

pub fn entails_capped(f: &ClauseSet, g: &ClauseSet, cap: usize) -> Result<bool> {
    let vars: BTreeSet<u32> = f.vars().union(&g.vars()).copied().collect();
    check_cap("entailment", vars.len(), cap)?;
    let d = Dense::new(vars)?;
    let fb = d.clauses(f)?;
    for c in g.iter() {
        let a = bits::Ba::falsifying(d.clause(c)?);
        if bits::satisfiable(&bits::apply(a, &fb)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// primec_0(F) by resolution saturation with subsumption.
pub fn prime_implicates(f: &ClauseSet) -> Result<ClauseSet> {
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    Ok(d.to_clause_set(&saturation::saturate(&cls, saturation::Rule::Unrestricted)))
}

/// The ⊆-minimal clauses of F.
pub fn subsumption_reduce(f: &ClauseSet) -> ClauseSet {
    let mut v: Vec<&Clause> = f.iter().collect();
    v.sort_by_key(|c| c.len());
    let mut kept: Vec<Clause> = Vec::new();
    for c in v {
        if !kept.iter().any(|k| k.is_subset(c)) {
            kept.push(c.clone());
        }
    }
    ClauseSet::from_clauses(kept)
}

/// F_{x←y}: replaces variable `x` by literal `y`, dropping clauses that
/// become tautological.
pub fn substitute(f: &ClauseSet, x: u32, y: Literal) -> ClauseSet {
    f.iter()
        .filter_map(|c| {
            let lits = c.lits.iter().map(|l| {
                if l.var == x {
                    if l.positive {
                        y
                    } else {
                        y.complement()
                    }
                } else {
                    *l
                }
            });
            Clause::new(lits).ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[&[i64]]) -> ClauseSet {
        ClauseSet::from_dimacs(v).unwrap()
    }

    #[test]
    fn clause_normalisation() {
        let c = Clause::from_dimacs(&[3, -1, 3]).unwrap();
        assert_eq!(c.to_dimacs(), vec![-1, 3]);
        assert_eq!(Clause::from_dimacs(&[2, -2]), Err(Error::Complementary(2)));
        assert_eq!(cs(&[&[1, 2], &[2, 1]]).c(), 1);
    }

    #[test]
    fn instantiation() {
        let f = cs(&[&[1, 2], &[-1, 3], &[2, 3]]);
        let phi = PartialAssignment::from_pairs([(1, true)]).unwrap();
        assert_eq!(apply(&phi, &f), cs(&[&[3], &[2, 3]]));
        assert!(apply(&PartialAssignment::falsifying(&Clause::from_dimacs(&[1, 2]).unwrap()), &f).has_bottom());
    }

    #[test]
    fn prime_implicates_and_entailment() {
        let f = cs(&[&[1, 2], &[1, -2], &[-1, 3]]);
        assert_eq!(prime_implicates(&f).unwrap(), cs(&[&[1], &[3]]));
        assert!(entails(&f, &cs(&[&[3, 4]])).unwrap());
        assert!(!entails(&f, &cs(&[&[2]])).unwrap());
        assert_eq!(prime_implicates(&cs(&[&[1], &[-1]])).unwrap(), ClauseSet::bottom());
        assert_eq!(substitute(&cs(&[&[1, 2], &[-1, 3]]), 1, Literal::neg(2)), cs(&[&[2, 3]]));
    }
}
