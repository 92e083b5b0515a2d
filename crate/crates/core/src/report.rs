//! Relation reports over the seven measures of one clause-set, and probes
//! that evaluate open relations on batches of small instances.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cnf::{self, ClauseSet};
use crate::consistency::{self, AssignmentFamily, ConsistencyKind};
use crate::corpus;
use crate::error::{Error, Result};
use crate::measures::{self, MeasureKind};

pub const SCHEMA_VERSION: u32 = 1;

/// One checked inequality; `holds` is `None` when a needed value was skipped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub instance: String,
    pub n: usize,
    pub c: usize,
    pub q: usize,
    pub satisfiable: bool,
    /// Lifted values by measure tag; `None` when skipped.
    pub measures: BTreeMap<String, Option<u32>>,
    pub skipped: BTreeMap<String, String>,
    pub relations: Vec<Relation>,
    pub timings_ms: BTreeMap<String, u64>,
    pub metadata: BTreeMap<String, String>,
}

impl RunReport {
    /// No relation is violated (skipped relations do not count).
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.holds != Some(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn relation(name: &str, vals: &[Option<u32>], check: impl Fn(&[u32]) -> bool) -> Relation {
    let got: Option<Vec<u32>> = vals.iter().copied().collect();
    match got {
        Some(v) => Relation {
            name: name.to_string(),
            holds: Some(check(&v)),
            detail: format!("{v:?}"),
        },
        None => Relation { name: name.to_string(), holds: None, detail: "skipped".into() },
    }
}

/// Computes all seven measures (lifted when F is satisfiable) and checks
/// whd ≤ semspace ≤ resspace ≤ treespace = hd+1 ≤ dep+1 ≤ n+1,
/// resspace ≤ 3·semspace − 2 and wid ≤ whd + max(q, whd). Measures beyond
/// a variable cap are skipped and so are the relations that need them.
pub fn verify_relations(f: &ClauseSet, instance: &str) -> Result<RunReport> {
    let mut values = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    let mut timings = BTreeMap::new();
    for kind in MeasureKind::ALL {
        let t = Instant::now();
        let v = match measures::measure(kind, f) {
            Ok(v) => Some(v),
            Err(e @ Error::CapExceeded { .. }) => {
                skipped.insert(kind.tag().to_string(), e.to_string());
                None
            }
            Err(e) => return Err(e),
        };
        timings.insert(kind.tag().to_string(), t.elapsed().as_millis() as u64);
        values.insert(kind, v);
    }
    let g = |k: MeasureKind| values[&k];
    let (hd, dep, wid, whd) = (g(MeasureKind::Hardness), g(MeasureKind::Depth), g(MeasureKind::SymWidth), g(MeasureKind::AsymWidth));
    let (ss, rs, ts) = (g(MeasureKind::SemanticSpace), g(MeasureKind::ResolutionSpace), g(MeasureKind::TreeSpace));
    let n = f.n() as u32;
    let q = f.max_clause_len() as u32;
    let relations = vec![
        relation("whd <= semspace", &[whd, ss], |v| v[0] <= v[1]),
        relation("semspace <= resspace", &[ss, rs], |v| v[0] <= v[1]),
        relation("resspace <= treespace", &[rs, ts], |v| v[0] <= v[1]),
        relation("treespace = hd + 1", &[ts, hd], |v| v[0] == v[1] + 1),
        relation("hd <= dep", &[hd, dep], |v| v[0] <= v[1]),
        relation("dep <= n", &[dep], |v| v[0] <= n),
        relation("resspace <= 3 semspace - 2", &[rs, ss], |v| v[0] + 2 <= 3 * v[1]),
        relation("wid <= whd + max(q, whd)", &[wid, whd], |v| v[0] <= v[1] + q.max(v[1])),
    ];
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        instance: instance.to_string(),
        n: f.n(),
        c: f.c(),
        q: q as usize,
        satisfiable: cnf::is_satisfiable(f)?,
        measures: values.into_iter().map(|(k, v)| (k.tag().to_string(), v)).collect(),
        skipped,
        relations,
        timings_ms: timings,
        metadata: BTreeMap::new(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeTarget {
    /// Semantic space 3 forcing resolution space 3, and whd + 1 ≤ semspace.
    SpaceGap,
    /// How far resolution space exceeds semantic space.
    SsFactor,
    /// Whether unions of weakly k-consistent families stay weakly consistent.
    WeakUnion,
    /// Largest semantic space among instances with whd = 2.
    WhdVsSs,
    /// wid ≤ whd + q − 1.
    ConjWidWhd,
}

impl std::str::FromStr for ProbeTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<ProbeTarget> {
        match s {
            "space_gap" => Ok(ProbeTarget::SpaceGap),
            "ss_factor" => Ok(ProbeTarget::SsFactor),
            "weak_union" => Ok(ProbeTarget::WeakUnion),
            "whd_vs_ss" => Ok(ProbeTarget::WhdVsSs),
            "conj_wid_whd" => Ok(ProbeTarget::ConjWidWhd),
            _ => Err(Error::Invalid(format!("unknown probe target {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example {
    pub clauses: Vec<Vec<i64>>,
    pub values: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub schema_version: u32,
    pub target: ProbeTarget,
    pub seed: u64,
    pub instances: usize,
    pub stats: BTreeMap<String, i64>,
    pub examples: Vec<Example>,
}

/// The first `budget` instances of the exhaustive corpus, then random
/// unsatisfiable instances over `n_random` variables.
fn instances(budget: usize, seed: u64, n_random: u32) -> Vec<ClauseSet> {
    let mut out = corpus::exhaustive(corpus::DEFAULT_CLAUSE_CAP);
    out.truncate(budget / 2 + budget % 2);
    let rest = budget - out.len();
    out.extend(corpus::random_corpus(seed, rest, n_random, n_random));
    out
}

fn example(f: &ClauseSet, values: &[(&str, u32)]) -> Example {
    Example { clauses: f.to_dimacs_lists(), values: values.iter().map(|(k, v)| (k.to_string(), *v)).collect() }
}

/// Evaluates a probed relation on `budget` instances (or family pairs for
/// `weak_union`). Reports statistics and extremal examples, never a verdict
/// on the open question itself.
pub fn probe(target: ProbeTarget, budget: usize, seed: u64) -> Result<ProbeReport> {
    let mut stats = BTreeMap::new();
    let mut examples = Vec::new();
    let count;
    match target {
        ProbeTarget::SpaceGap | ProbeTarget::SsFactor | ProbeTarget::WhdVsSs => {
            let fs = instances(budget, seed, 4);
            count = fs.len();
            let rows: Vec<(u32, u32, u32)> = fs
                .par_iter()
                .map(|f| {
                    let ss = measures::base(MeasureKind::SemanticSpace, f)?;
                    let rs = measures::base(MeasureKind::ResolutionSpace, f)?;
                    let whd = measures::base(MeasureKind::AsymWidth, f)?;
                    Ok((ss, rs, whd))
                })
                .collect::<Result<_>>()?;
            let vals = |r: &(u32, u32, u32)| [("semantic_space", r.0), ("resolution_space", r.1), ("asym_width", r.2)];
            match target {
                ProbeTarget::SpaceGap => {
                    let ss3: Vec<usize> = (0..count).filter(|i| rows[*i].0 == 3).collect();
                    let bad3: Vec<usize> = ss3.iter().copied().filter(|i| rows[*i].1 > 3).collect();
                    let bad_lb: Vec<usize> = (0..count).filter(|i| rows[*i].2 + 1 > rows[*i].0).collect();
                    stats.insert("semspace_3".into(), ss3.len() as i64);
                    stats.insert("semspace_3_resspace_above_3".into(), bad3.len() as i64);
                    stats.insert("whd_plus_1_above_semspace".into(), bad_lb.len() as i64);
                    examples.extend(bad3.iter().chain(&bad_lb).take(5).map(|i| example(&fs[*i], &vals(&rows[*i]))));
                }
                ProbeTarget::SsFactor => {
                    let gap = |i: usize| rows[i].1 as i64 - rows[i].0 as i64;
                    let max = (0..count).map(gap).max().unwrap_or(0);
                    stats.insert("max_resspace_minus_semspace".into(), max);
                    stats.insert("resspace_above_semspace".into(), (0..count).filter(|i| gap(*i) > 0).count() as i64);
                    examples.extend((0..count).filter(|i| gap(*i) == max && max > 0).take(3).map(|i| example(&fs[i], &vals(&rows[i]))));
                }
                _ => {
                    let w2: Vec<usize> = (0..count).filter(|i| rows[*i].2 == 2).collect();
                    let max = w2.iter().map(|i| rows[*i].0).max().unwrap_or(0);
                    stats.insert("whd_2_instances".into(), w2.len() as i64);
                    stats.insert("max_semspace_at_whd_2".into(), max as i64);
                    examples.extend(w2.iter().filter(|i| rows[**i].0 == max).take(3).map(|i| example(&fs[*i], &vals(&rows[*i]))));
                }
            }
        }
        ProbeTarget::ConjWidWhd => {
            let mut fs: Vec<ClauseSet> = corpus::exhaustive(corpus::DEFAULT_CLAUSE_CAP);
            fs.truncate(budget / 2 + budget % 2);
            let rest = budget - fs.len();
            fs.extend(corpus::random_corpus(seed, rest, 4, 4));
            count = fs.len();
            let rows: Vec<(u32, u32, u32)> = fs
                .par_iter()
                .map(|f| Ok((measures::base(MeasureKind::SymWidth, f)?, measures::base(MeasureKind::AsymWidth, f)?, f.max_clause_len() as u32)))
                .collect::<Result<_>>()?;
            let excess = |i: usize| rows[i].0 as i64 - rows[i].1 as i64 - (rows[i].2 as i64 - 1);
            let viol: Vec<usize> = (0..count).filter(|i| excess(*i) > 0).collect();
            stats.insert("max_wid_minus_whd".into(), (0..count).map(|i| rows[i].0 as i64 - rows[i].1 as i64).max().unwrap_or(0));
            stats.insert("max_excess_over_q_minus_1".into(), (0..count).map(excess).max().unwrap_or(0));
            stats.insert("violations".into(), viol.len() as i64);
            examples.extend(viol.iter().take(5).map(|i| {
                example(&fs[*i], &[("sym_width", rows[*i].0), ("asym_width", rows[*i].1), ("q", rows[*i].2)])
            }));
        }
        ProbeTarget::WeakUnion => {
            let small: Vec<ClauseSet> = corpus::exhaustive(corpus::DEFAULT_CLAUSE_CAP).into_iter().filter(|f| f.n() <= 2).collect();
            let mut checked = 0usize;
            let mut failures = 0usize;
            'outer: for f in &small {
                for k in 0..=2 {
                    let fams = consistency::all_families_brute(ConsistencyKind::WeaklyK, f, k)?;
                    for (i, a) in fams.iter().enumerate() {
                        for b in &fams[i + 1..] {
                            if checked >= budget {
                                break 'outer;
                            }
                            checked += 1;
                            let u: AssignmentFamily = a.union(b);
                            if !consistency::check_family(ConsistencyKind::WeaklyK, &u, f, k) {
                                failures += 1;
                                if examples.len() < 5 {
                                    examples.push(example(f, &[("k", k), ("union_size", u.len() as u32)]));
                                }
                            }
                        }
                    }
                }
            }
            count = checked;
            stats.insert("pairs_checked".into(), checked as i64);
            stats.insert("unions_not_weakly_consistent".into(), failures as i64);
        }
    }
    Ok(ProbeReport { schema_version: SCHEMA_VERSION, target, seed, instances: count, stats, examples })
}
