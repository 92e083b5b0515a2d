//! Test corpora: every unsatisfiable clause-set over at most three
//! variables up to isomorphism, and seeded random unsatisfiable instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{self, Bc, Dense};
use crate::cnf::{self, Clause, ClauseSet, Literal};

/// Default clause-count cap of the exhaustive corpus.
pub const DEFAULT_CLAUSE_CAP: usize = 8;

/// The 27 clauses over variables 1..3 (index order of `bits::all_clauses`).
fn universe3() -> Vec<Bc> {
    bits::all_clauses(3)
}

/// The 48 renamings of three variables with sign flips, as permutations of
/// the clause universe.
fn symmetries(univ: &[Bc]) -> Vec<Vec<usize>> {
    let index = |c: Bc| univ.iter().position(|x| *x == c).unwrap();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(48);
    for p in perms {
        for flip in 0u64..8 {
            let map = |c: Bc| {
                let mut r = Bc::BOTTOM;
                for i in 0..3 {
                    let (pos, neg) = (c.pos >> i & 1 == 1, c.neg >> i & 1 == 1);
                    let (pos, neg) = if flip >> i & 1 == 1 { (neg, pos) } else { (pos, neg) };
                    if pos {
                        r.pos |= 1 << p[i];
                    }
                    if neg {
                        r.neg |= 1 << p[i];
                    }
                }
                r
            };
            out.push(univ.iter().map(|c| index(map(*c))).collect());
        }
    }
    out
}

/// Every unsatisfiable clause-set with at most `max_clauses` clauses over
/// variables among 1..3, one per isomorphism class (renaming and flipping
/// variables), in increasing order of its 27-bit canonical code.
pub fn exhaustive(max_clauses: usize) -> Vec<ClauseSet> {
    let univ = universe3();
    let syms = symmetries(&univ);
    // falsified total assignments of each clause, as an 8-bit mask
    let fals: Vec<u8> = univ
        .iter()
        .map(|c| (0u8..8).filter(|a| bits::Ba { set: 7, val: *a as u64 }.falsifies(*c)).fold(0, |m, a| m | 1 << a))
        .collect();
    let mut codes: Vec<u32> = Vec::new();
    // images[s]: the current subset under symmetry s, kept incrementally
    fn go(start: usize, code: u32, images: &[u32; 48], cover: u8, left: usize, fals: &[u8], syms: &[Vec<usize>], out: &mut Vec<u32>) {
        if cover == 0xff && images.iter().all(|m| *m >= code) {
            out.push(code);
        }
        if left == 0 {
            return;
        }
        for i in start..27 {
            let mut next = *images;
            for (s, m) in syms.iter().zip(next.iter_mut()) {
                *m |= 1 << s[i];
            }
            go(i + 1, code | 1 << i, &next, cover | fals[i], left - 1, fals, syms, out);
        }
    }
    go(0, 0, &[0; 48], 0, max_clauses, &fals, &syms, &mut codes);
    codes.sort_unstable();
    let d = Dense::new(1..=3).unwrap();
    codes
        .into_iter()
        .map(|code| {
            let cls: Vec<Bc> = (0..27).filter(|i| code >> i & 1 == 1).map(|i| univ[i]).collect();
            d.to_clause_set(&cls)
        })
        .collect()
}

fn random_clause(rng: &mut ChaCha8Rng, n: u32, width: usize) -> Clause {
    let mut vars: Vec<u32> = (1..=n).collect();
    vars.shuffle(rng);
    Clause::new(vars[..width.min(n as usize)].iter().map(|v| Literal::new(*v, rng.gen()))).unwrap()
}

/// Adds random clauses of width 1..=3 (biased to 3) over `n` variables
/// until the set is unsatisfiable.
pub fn random_unsat(rng: &mut ChaCha8Rng, n: u32) -> ClauseSet {
    let mut cls: Vec<Clause> = Vec::new();
    loop {
        let width = *[1, 2, 2, 3, 3, 3, 3].choose(rng).unwrap();
        cls.push(random_clause(rng, n, width));
        let f = ClauseSet::from_clauses(cls.clone());
        if !cnf::is_satisfiable(&f).unwrap() {
            return f;
        }
    }
}

/// `count` random unsatisfiable instances with `n` drawn from `n_min..=n_max`.
pub fn random_corpus(seed: u64, count: usize, n_min: u32, n_max: u32) -> Vec<ClauseSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(n_min..=n_max);
            random_unsat(&mut rng, n)
        })
        .collect()
}

/// Random unsatisfiable Horn clause-sets without `⊥`: clauses with at most
/// one positive literal, at least one unit, no empty clause.
pub fn random_horn(seed: u64, count: usize, n: u32) -> Vec<ClauseSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut cls: Vec<Clause> = Vec::new();
        loop {
            let width = rng.gen_range(1..=3usize.min(n as usize));
            let mut vars: Vec<u32> = (1..=n).collect();
            vars.shuffle(&mut rng);
            let head = rng.gen_bool(0.6);
            let lits = vars[..width].iter().enumerate().map(|(i, v)| Literal::new(*v, head && i == 0));
            cls.push(Clause::new(lits).unwrap());
            let f = ClauseSet::from_clauses(cls.clone());
            if !cnf::is_satisfiable(&f).unwrap() {
                out.push(f);
                break;
            }
            if cls.len() > 40 {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_small_caps() {
        // c ≤ 1: only {⊥}; c ≤ 2 adds {{a},{¬a}} and {⊥, C} for the
        // isomorphism classes of nonempty C (lengths 1, 2, 3).
        let one = exhaustive(1);
        assert_eq!(one, vec![ClauseSet::bottom()]);
        let two = exhaustive(2);
        assert_eq!(two.len(), 1 + 3 + 1);
        assert!(two.iter().all(|f| !cnf::is_satisfiable(f).unwrap()));
    }

    #[test]
    fn random_instances_are_unsat_and_seeded() {
        let a = random_corpus(7, 10, 3, 5);
        assert_eq!(a, random_corpus(7, 10, 3, 5));
        assert!(a.iter().all(|f| !cnf::is_satisfiable(f).unwrap() && f.n() <= 5));
        for f in random_horn(3, 10, 5) {
            assert!(!f.has_bottom() && !cnf::is_satisfiable(&f).unwrap());
            assert!(f.iter().all(|c| c.literals().iter().filter(|l| l.is_positive()).count() <= 1));
        }
    }
}
