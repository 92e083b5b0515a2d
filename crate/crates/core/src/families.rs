//! Formula families: pigeonhole variants, the extended pigeonhole
//! formulas, XOR systems in direct and chained encoding, Tseitin graph
//! formulas and full clause-sets. Every generator is deterministic and
//! returns a name for each variable.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cnf::{Clause, ClauseSet, Literal};
use crate::error::{Error, Result};
use crate::games::TseitinGraph;

/// A generated clause-set with variable names and known values
/// (`expected`, keyed by measure tag).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub clauses: ClauseSet,
    pub names: BTreeMap<u32, String>,
    pub expected: BTreeMap<String, u32>,
}

impl Instance {
    fn new(name: String, clauses: ClauseSet, names: BTreeMap<u32, String>) -> Instance {
        Instance { name, clauses, names, expected: BTreeMap::new() }
    }

    fn expect(mut self, tag: &str, v: u32) -> Instance {
        self.expected.insert(tag.to_string(), v);
        self
    }

    /// Name map as JSON: {"1": "p_1_1", ...}.
    pub fn names_json(&self) -> String {
        let m: BTreeMap<String, &String> = self.names.iter().map(|(v, n)| (v.to_string(), n)).collect();
        serde_json::to_string_pretty(&m).expect("names serialise")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhpVariant {
    Plain,
    Functional,
    Onto,
    OntoFunctional,
}

impl PhpVariant {
    pub const ALL: [PhpVariant; 4] = [PhpVariant::Plain, PhpVariant::Functional, PhpVariant::Onto, PhpVariant::OntoFunctional];

    pub fn tag(self) -> &'static str {
        match self {
            PhpVariant::Plain => "php",
            PhpVariant::Functional => "fphp",
            PhpVariant::Onto => "ophp",
            PhpVariant::OntoFunctional => "ofphp",
        }
    }

    fn functional(self) -> bool {
        matches!(self, PhpVariant::Functional | PhpVariant::OntoFunctional)
    }

    fn onto(self) -> bool {
        matches!(self, PhpVariant::Onto | PhpVariant::OntoFunctional)
    }

    /// Satisfiability of the variant for m pigeons and k holes.
    pub fn satisfiable(self, m: u32, k: u32) -> bool {
        match self {
            PhpVariant::Plain | PhpVariant::Functional => m <= k,
            PhpVariant::Onto => m <= k && (m != 0 || k == 0),
            PhpVariant::OntoFunctional => m == k,
        }
    }
}

impl fmt::Display for PhpVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PhpVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<PhpVariant> {
        match s {
            "php" | "plain" => Ok(PhpVariant::Plain),
            "fphp" | "functional" => Ok(PhpVariant::Functional),
            "ophp" | "onto" => Ok(PhpVariant::Onto),
            "ofphp" | "onto_functional" => Ok(PhpVariant::OntoFunctional),
            _ => Err(Error::Invalid(format!("unknown pigeonhole variant {s:?}"))),
        }
    }
}

/// Variable of "pigeon i sits in hole j" (1-based) with k holes.
pub fn php_var(i: u32, j: u32, k: u32) -> u32 {
    (i - 1) * k + j
}

fn clause(lits: impl IntoIterator<Item = Literal>) -> Clause {
    Clause::new(lits).expect("generated clauses are clash-free")
}

/// Pigeonhole clause-sets over p_{i,j}, i ∈ 1..m, j ∈ 1..k: every pigeon
/// gets a hole, no hole holds two pigeons; functional adds "no pigeon in
/// two holes", onto adds "every hole is used".
pub fn php(variant: PhpVariant, m: u32, k: u32) -> Instance {
    let p = |i, j| Literal::pos(php_var(i, j, k));
    let n = |i, j| Literal::neg(php_var(i, j, k));
    let mut cls = Vec::new();
    for i in 1..=m {
        cls.push(clause((1..=k).map(|j| p(i, j))));
    }
    for j in 1..=k {
        for i1 in 1..=m {
            for i2 in i1 + 1..=m {
                cls.push(clause([n(i1, j), n(i2, j)]));
            }
        }
    }
    if variant.functional() {
        for i in 1..=m {
            for j1 in 1..=k {
                for j2 in j1 + 1..=k {
                    cls.push(clause([n(i, j1), n(i, j2)]));
                }
            }
        }
    }
    if variant.onto() {
        for j in 1..=k {
            cls.push(clause((1..=m).map(|i| p(i, j))));
        }
    }
    let names = (1..=m).flat_map(|i| (1..=k).map(move |j| (php_var(i, j, k), format!("p_{i}_{j}")))).collect();
    let inst = Instance::new(format!("{}_{m}_{k}", variant.tag()), ClauseSet::from_clauses(cls), names);
    match variant {
        PhpVariant::Plain => {
            let v = (m.max(1) - 1).min(k);
            inst.expect("hardness", v).expect("asym_width", v)
        }
        PhpVariant::OntoFunctional if m != k => inst.expect("hardness", m.min(k)).expect("asym_width", m.min(k)),
        _ if m > k => inst.expect("hardness", k).expect("asym_width", k),
        _ => inst,
    }
}

/// Variable numbering of the extended pigeonhole formula: level n+1 is the
/// pigeonhole matrix, levels n down to 2 follow in order.
struct EphpVars {
    n: u32,
    base: BTreeMap<u32, u32>,
}

impl EphpVars {
    fn new(n: u32) -> EphpVars {
        let mut base = BTreeMap::new();
        let mut next = (n + 1) * n + 1;
        for l in (2..=n).rev() {
            base.insert(l, next);
            next += l * (l - 1);
        }
        EphpVars { n, base }
    }

    /// q^l_{i,j} with i ∈ 1..l, j ∈ 1..l-1.
    fn q(&self, l: u32, i: u32, j: u32) -> u32 {
        if l == self.n + 1 {
            php_var(i, j, self.n)
        } else {
            self.base[&l] + (i - 1) * (l - 1) + (j - 1)
        }
    }
}

/// PHP^{n+1}_n extended level by level: for l from n+1 down to 3,
/// q^{l-1}_{i,j} ↔ q^l_{i,j} ∨ (q^l_{i,l-1} ∧ q^l_{l,j}) for i ∈ 1..l-1,
/// j ∈ 1..l-2, each definition as its four prime clauses.
pub fn ephp(n: u32) -> Result<Instance> {
    if n == 0 {
        return Err(Error::Invalid("ephp needs n >= 1".into()));
    }
    let base = php(PhpVariant::Plain, n + 1, n);
    let vars = EphpVars::new(n);
    let mut cls: Vec<Clause> = base.clauses.clauses().to_vec();
    let mut names = base.names;
    for l in (3..=n + 1).rev() {
        for i in 1..l {
            for j in 1..l - 1 {
                let lo = vars.q(l - 1, i, j);
                let (a, b, c) = (vars.q(l, i, j), vars.q(l, i, l - 1), vars.q(l, l, j));
                names.insert(lo, format!("q_{}_{i}_{j}", l - 1));
                cls.extend(ephp_block(lo, a, b, c));
            }
        }
    }
    Ok(Instance::new(format!("ephp_{n}"), ClauseSet::from_clauses(cls), names))
}

/// Prime clauses of x ↔ a ∨ (b ∧ c).
pub fn ephp_block(x: u32, a: u32, b: u32, c: u32) -> [Clause; 4] {
    let (p, q) = (Literal::pos, Literal::neg);
    [
        clause([p(x), q(a)]),
        clause([p(x), q(b), q(c)]),
        clause([q(x), p(a), p(b)]),
        clause([q(x), p(a), p(c)]),
    ]
}

/// Parity constraint: the XOR of the literal values is 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorClause {
    pub literals: Vec<Literal>,
}

impl XorClause {
    pub fn new(literals: Vec<Literal>) -> Result<XorClause> {
        let mut seen = std::collections::BTreeSet::new();
        for l in &literals {
            if !seen.insert(l.var()) {
                return Err(Error::Invalid(format!("variable {} occurs twice in an XOR clause", l.var())));
            }
        }
        Ok(XorClause { literals })
    }

    pub fn from_dimacs(xs: &[i64]) -> Result<XorClause> {
        XorClause::new(xs.iter().map(|x| Literal::from_dimacs(*x)).collect::<Result<_>>()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XorMode {
    Direct,
    Chained,
}

/// All full clauses over the literals' variables excluded by the
/// constraint, no new variables.
pub fn parity_clauses(lits: &[Literal]) -> Vec<Clause> {
    let r = lits.len();
    let mut out = Vec::with_capacity(1 << r.saturating_sub(1));
    for bits in 0u64..1 << r {
        // bits: value of each literal; odd parity is forbidden
        if bits.count_ones() % 2 == 1 {
            out.push(clause(lits.iter().enumerate().map(|(i, l)| if bits >> i & 1 == 1 { l.complement() } else { *l })));
        }
    }
    out
}

/// CNF of an XOR system. Chained mode splits x_1 ⊕ … ⊕ x_r = 0 with r ≥ 4
/// into x_1⊕x_2⊕t_2, t_{i-1}⊕x_i⊕t_i (i = 3..r-2) and t_{r-2}⊕x_{r-1}⊕x_r
/// with fresh t_2..t_{r-2} numbered after every variable of the system.
pub fn xor_encode(system: &[XorClause], mode: XorMode) -> Instance {
    let maxv = system.iter().flat_map(|x| x.literals.iter().map(|l| l.var())).max().unwrap_or(0);
    let mut names: BTreeMap<u32, String> = system.iter().flat_map(|x| x.literals.iter().map(|l| (l.var(), format!("v_{}", l.var())))).collect();
    let mut next = maxv + 1;
    let mut cls = Vec::new();
    for (ci, x) in system.iter().enumerate() {
        let lits = &x.literals;
        let r = lits.len();
        if mode == XorMode::Direct || r <= 3 {
            cls.extend(parity_clauses(lits));
            continue;
        }
        let ts: Vec<Literal> = (2..=r - 2)
            .map(|i| {
                let v = next;
                next += 1;
                names.insert(v, format!("t_{}_{i}", ci + 1));
                Literal::pos(v)
            })
            .collect();
        cls.extend(parity_clauses(&[lits[0], lits[1], ts[0]]));
        for i in 3..=r - 2 {
            cls.extend(parity_clauses(&[ts[i - 3], lits[i - 1], ts[i - 2]]));
        }
        cls.extend(parity_clauses(&[ts[r - 4], lits[r - 2], lits[r - 1]]));
    }
    let tag = match mode {
        XorMode::Direct => "x0",
        XorMode::Chained => "x1",
    };
    Instance::new(format!("xor_{tag}"), ClauseSet::from_clauses(cls), names)
}

/// The two XOR clauses v_1 ⊕ … ⊕ v_n = 0 and v_1 ⊕ … ⊕ ¬v_n = 0.
pub fn two_xor_system(n: u32) -> Result<Vec<XorClause>> {
    if n == 0 {
        return Err(Error::Invalid("two_xor needs n >= 1".into()));
    }
    let c1: Vec<Literal> = (1..=n).map(Literal::pos).collect();
    let mut c2 = c1.clone();
    c2[n as usize - 1] = Literal::neg(n);
    Ok(vec![XorClause::new(c1)?, XorClause::new(c2)?])
}

/// T_n: the two-XOR system in chained encoding.
pub fn two_xor(n: u32) -> Result<Instance> {
    let mut inst = xor_encode(&two_xor_system(n)?, XorMode::Chained);
    inst.name = format!("two_xor_{n}");
    Ok(inst)
}

/// The two-XOR system in direct encoding: all 2^n full clauses.
pub fn two_xor_direct(n: u32) -> Result<Instance> {
    let mut inst = xor_encode(&two_xor_system(n)?, XorMode::Direct).expect("hardness", n).expect("asym_width", n);
    inst.name = format!("two_xor_direct_{n}");
    Ok(inst)
}

/// One variable per edge (edge i is variable i+1); per vertex, the direct
/// encoding of "XOR of incident edges equals the charge".
pub fn tseitin_cnf(g: &TseitinGraph) -> Result<Instance> {
    g.validate()?;
    let mut cls = Vec::new();
    for w in 0..g.vertices {
        let mut lits: Vec<Literal> = g
            .edges
            .iter()
            .enumerate()
            .filter(|(_, (a, b))| *a == w || *b == w)
            .map(|(i, _)| Literal::pos(i as u32 + 1))
            .collect();
        if g.charge[w] {
            match lits.first_mut() {
                Some(l) => *l = l.complement(),
                None => {
                    cls.push(Clause::bottom());
                    continue;
                }
            }
        }
        cls.extend(parity_clauses(&lits));
    }
    let names = g.edges.iter().enumerate().map(|(i, (a, b))| (i as u32 + 1, format!("e_{}_{a}_{b}", i + 1))).collect();
    Ok(Instance::new(format!("tseitin_{}_{}", g.vertices, g.edges.len()), ClauseSet::from_clauses(cls), names))
}

/// A_n: all 2^n full clauses over variables 1..n.
pub fn full_clause_set(n: u32) -> Instance {
    let lits: Vec<Literal> = (1..=n).map(Literal::pos).collect();
    let mut cls = Vec::with_capacity(1 << n);
    for bits in 0u64..1 << n {
        cls.push(clause(lits.iter().enumerate().map(|(i, l)| if bits >> i & 1 == 1 { l.complement() } else { *l })));
    }
    let names = (1..=n).map(|v| (v, format!("x_{v}"))).collect();
    Instance::new(format!("full_{n}"), ClauseSet::from_clauses(cls), names)
        .expect("hardness", n)
        .expect("asym_width", n)
        .expect("semantic_space", n + 1)
        .expect("resolution_space", n + 1)
}
