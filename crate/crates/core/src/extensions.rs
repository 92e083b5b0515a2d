//! Blocked clauses and definitional extensions: blocking tests,
//! blocked-clause elimination, extension steps x ↔ f with fresh x, and the
//! extension E(R) that brings any refutation R down to hardness two.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cnf::{self, Clause, ClauseSet, Literal};
use crate::error::{Error, Result};
use crate::resolution::{self, ResolutionProof};

/// Arity cap of truth-table definitions.
pub const ARITY_CAP: usize = 6;

/// Whether every clause of `f` containing ¬x clashes with `c` in at least
/// two literals. `x` must occur in `c`.
pub fn is_blocked(c: &Clause, x: Literal, f: &ClauseSet) -> Result<bool> {
    if !c.contains(x) {
        return Err(Error::LiteralNotInClause(x.to_dimacs()));
    }
    Ok(f.iter().filter(|d| d.contains(x.complement())).all(|d| c.clashes(d).len() >= 2))
}

/// The first literal of `c` for which it is blocked w.r.t. `f`.
pub fn blocking_literal(c: &Clause, f: &ClauseSet) -> Option<Literal> {
    c.literals().iter().copied().find(|x| is_blocked(c, *x, f).unwrap_or(false))
}

/// Removes blocked clauses one at a time, always the first blocked clause
/// in sorted order, until none is left.
pub fn eliminate_blocked(f: &ClauseSet) -> ClauseSet {
    eliminate_blocked_where(f, |_| true)
}

/// As `eliminate_blocked`, restricted to clauses of length two.
pub fn eliminate_blocked_binary(f: &ClauseSet) -> ClauseSet {
    eliminate_blocked_where(f, |c| c.len() == 2)
}

fn eliminate_blocked_where(f: &ClauseSet, eligible: impl Fn(&Clause) -> bool) -> ClauseSet {
    let mut cur = f.clone();
    while let Some(c) = cur.iter().find(|c| eligible(c) && blocking_literal(c, &cur).is_some()).cloned() {
        cur = cur.without(&c);
    }
    cur
}

/// A boolean function over at most `ARITY_CAP` variables as a truth table:
/// bit i of a row index is the value of `vars[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub vars: Vec<u32>,
    pub table: Vec<bool>,
}

impl Definition {
    pub fn new(vars: Vec<u32>, table: Vec<bool>) -> Result<Definition> {
        if vars.len() > ARITY_CAP {
            return Err(Error::ArityExceeded(vars.len(), ARITY_CAP));
        }
        if vars.iter().collect::<BTreeSet<_>>().len() != vars.len() || vars.contains(&0) {
            return Err(Error::Invalid("definition variables must be distinct and positive".into()));
        }
        if table.len() != 1 << vars.len() {
            return Err(Error::Invalid(format!("truth table needs {} rows", 1 << vars.len())));
        }
        Ok(Definition { vars, table })
    }

    /// The function a ∨ b.
    pub fn or(a: Literal, b: Literal) -> Result<Definition> {
        Definition::from_clause_set(vec![a.var(), b.var()], &ClauseSet::from_clauses([Clause::new([a, b])?]))
    }

    /// The function given by a clause-set over (a subset of) `vars`.
    pub fn from_clause_set(vars: Vec<u32>, g: &ClauseSet) -> Result<Definition> {
        let table = (0..1usize << vars.len())
            .map(|row| {
                let phi = cnf::PartialAssignment::from_pairs(vars.iter().enumerate().map(|(i, v)| (*v, row >> i & 1 == 1)))
                    .expect("distinct variables");
                g.iter().all(|c| phi.satisfies(c))
            })
            .collect();
        Definition::new(vars, table)
    }

    /// CNF of x ↔ f: the full clauses over {x} ∪ vars excluding each
    /// non-model.
    fn equivalence_cnf(&self, x: u32) -> ClauseSet {
        let mut cls = Vec::new();
        for (row, fv) in self.table.iter().enumerate() {
            let base: Vec<Literal> = self.vars.iter().enumerate().map(|(i, v)| Literal::new(*v, row >> i & 1 == 0)).collect();
            // exclude x ≠ f(row)
            let xl = Literal::new(x, *fv);
            cls.push(Clause::new(base.iter().copied().chain([xl])).expect("distinct variables"));
        }
        ClauseSet::from_clauses(cls)
    }
}

/// One definitional extension: fresh `new_variable` with x ↔ f, emitting
/// the prime implicates of the equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionStep {
    pub new_variable: u32,
    pub definition: Definition,
    pub emitted_clauses: ClauseSet,
}

impl ExtensionStep {
    pub fn new(f: &ClauseSet, x: u32, definition: Definition) -> Result<ExtensionStep> {
        let vars = f.vars();
        if x == 0 || vars.contains(&x) || definition.vars.contains(&x) {
            return Err(Error::NotFresh(x));
        }
        if let Some(v) = definition.vars.iter().find(|v| !vars.contains(v)) {
            return Err(Error::Invalid(format!("definition variable {v} does not occur in F")));
        }
        let emitted = cnf::prime_implicates(&definition.equivalence_cnf(x))?;
        Ok(ExtensionStep { new_variable: x, definition, emitted_clauses: emitted })
    }

    /// The restricted step x ↔ a ∨ b.
    pub fn restricted(f: &ClauseSet, x: u32, a: Literal, b: Literal) -> Result<ExtensionStep> {
        if a.var() == b.var() {
            return Err(Error::Invalid("restricted extension needs two distinct variables".into()));
        }
        ExtensionStep::new(f, x, Definition::or(a, b)?)
    }
}

/// F ∪ E for an extension step; the new variable must be fresh for F.
pub fn extend(f: &ClauseSet, step: &ExtensionStep) -> Result<ClauseSet> {
    if f.vars().contains(&step.new_variable) {
        return Err(Error::NotFresh(step.new_variable));
    }
    Ok(f.union(&step.emitted_clauses))
}

/// Checks an extension block E with new variable x against F: x fresh,
/// every clause of E contains x or ¬x and is blocked for it w.r.t. F ∪ E
/// (hence addable as a blocked clause in any order), and E adds no
/// variable other than x.
pub fn check_extension_block(f: &ClauseSet, x: u32, e: &ClauseSet) -> std::result::Result<(), String> {
    let vars = f.vars();
    if vars.contains(&x) {
        return Err(format!("variable {x} is not fresh"));
    }
    if let Some(v) = e.vars().into_iter().find(|v| *v != x && !vars.contains(v)) {
        return Err(format!("block introduces variable {v} besides {x}"));
    }
    let all = f.union(e);
    let mut cur = f.clone();
    for c in e.iter() {
        let Some(xl) = c.literals().iter().copied().find(|l| l.var() == x) else {
            return Err(format!("clause {c} does not contain variable {x}"));
        };
        if !is_blocked(c, xl, &all).unwrap_or(false) {
            return Err(format!("clause {c} is not blocked for {xl}"));
        }
        if !is_blocked(c, xl, &cur).unwrap_or(false) {
            return Err(format!("clause {c} is not blocked when added"));
        }
        cur = cur.with(c.clone());
    }
    Ok(())
}

/// Prime clauses of e ↔ (l_1 ∨ … ∨ l_r): {¬e, l_1, …, l_r} and {e, ¬l_i}.
pub fn clause_definition(e: u32, c: &Clause) -> Vec<Clause> {
    let mut out = vec![Clause::new(c.literals().iter().copied().chain([Literal::neg(e)])).expect("fresh variable")];
    out.extend(c.literals().iter().map(|l| Clause::new([Literal::pos(e), l.complement()]).expect("fresh variable")));
    out
}

/// F ∪ E(R) with its definitions (fresh variable per distinct inner clause).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationExtension {
    pub clauses: ClauseSet,
    pub definitions: BTreeMap<u32, Clause>,
}

/// Adds e_C ↔ C for every clause C of R that is neither an axiom of F nor
/// empty. Fresh variables follow the largest variable of F, in order of
/// first appearance in R.
pub fn extension_from_refutation(f: &ClauseSet, r: &ResolutionProof) -> Result<RefutationExtension> {
    resolution::check_proof_detailed(r, f, &Clause::bottom()).map_err(Error::InvalidProof)?;
    let mut next = f.vars().into_iter().max().unwrap_or(0) + 1;
    let mut seen: BTreeSet<&Clause> = BTreeSet::new();
    let mut definitions = BTreeMap::new();
    let mut cls: Vec<Clause> = f.clauses().to_vec();
    for node in &r.nodes {
        let c = &node.clause;
        if c.is_empty() || f.contains(c) || !seen.insert(c) {
            continue;
        }
        cls.extend(clause_definition(next, c));
        definitions.insert(next, c.clone());
        next += 1;
    }
    Ok(RefutationExtension { clauses: ClauseSet::from_clauses(cls), definitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures;

    fn cs(v: &[&[i64]]) -> ClauseSet {
        ClauseSet::from_dimacs(v).unwrap()
    }

    fn cl(v: &[i64]) -> Clause {
        Clause::from_dimacs(v).unwrap()
    }

    fn lit(x: i64) -> Literal {
        Literal::from_dimacs(x).unwrap()
    }

    #[test]
    fn blocking_examples() {
        assert!(is_blocked(&cl(&[1]), lit(1), &cs(&[&[1, 2], &[2, 3]])).unwrap());
        assert!(is_blocked(&cl(&[1, 2]), lit(1), &cs(&[&[-1, -2]])).unwrap());
        assert!(!is_blocked(&cl(&[1]), lit(1), &cs(&[&[-1, 3]])).unwrap());
        assert_eq!(is_blocked(&cl(&[1]), lit(2), &cs(&[])), Err(Error::LiteralNotInClause(2)));
    }

    #[test]
    fn elimination() {
        let f = cs(&[&[1], &[2, 3], &[-2, 3], &[2, -3], &[-2, -3]]);
        assert_eq!(eliminate_blocked(&f), cs(&[&[2, 3], &[-2, 3], &[2, -3], &[-2, -3]]));
        let a2 = cs(&[&[2, 3], &[-2, 3], &[2, -3], &[-2, -3]]);
        assert_eq!(eliminate_blocked(&a2), a2);
    }

    #[test]
    fn restricted_step_clauses() {
        let f = cs(&[&[1], &[2]]);
        let s = ExtensionStep::restricted(&f, 3, lit(1), lit(2)).unwrap();
        assert_eq!(s.emitted_clauses, cs(&[&[-3, 1, 2], &[3, -1], &[3, -2]]));
        let g = extend(&f, &s).unwrap();
        assert_eq!(g.c(), 5);
        assert!(check_extension_block(&f, 3, &s.emitted_clauses).is_ok());
        assert_eq!(ExtensionStep::restricted(&f, 2, lit(1), lit(2)).unwrap_err(), Error::NotFresh(2));
    }

    #[test]
    fn clause_definition_is_prime() {
        let c = cl(&[1, -2, 3]);
        let direct = ClauseSet::from_clauses(clause_definition(4, &c));
        let table = Definition::from_clause_set(vec![1, 2, 3], &ClauseSet::from_clauses([c])).unwrap();
        let generic = ExtensionStep::new(&cs(&[&[1, 2, 3]]), 4, table).unwrap().emitted_clauses;
        assert_eq!(direct, generic);
    }

    #[test]
    fn refutation_extension_has_hardness_two() {
        let f = cs(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let r = crate::resolution::branching_refutation(&f, crate::resolution::Objective::Strahler).unwrap();
        let e = extension_from_refutation(&f, &r).unwrap();
        assert!(!e.definitions.is_empty());
        assert!(measures::hardness(&e.clauses).unwrap() <= 2);
        // no inner clauses: nothing is added
        let g = cs(&[&[1], &[-1]]);
        let r = crate::resolution::branching_refutation(&g, crate::resolution::Objective::Strahler).unwrap();
        assert_eq!(extension_from_refutation(&g, &r).unwrap().clauses, g);
    }
}
