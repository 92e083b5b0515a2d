//! `hardness` command-line tool: measures, generators, games, reductions
//! and relation checks over DIMACS clause-sets.
//!
//! Exit codes: 0 ok, 1 relation violation or failed internal check,
//! 2 usage or input error, 3 refusal because a variable cap is exceeded.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hardness::consistency::ConsistencyKind;
use hardness::dimacs::{parse_dimacs, write_dimacs};
use hardness::extensions;
use hardness::families::{self, Instance, PhpVariant};
use hardness::games::{self, GameKind, Role, TseitinGraph, WhdMode};
use hardness::report::{self, ProbeTarget};
use hardness::resolution::{self, ResolutionProof};
use hardness::{cnf, consistency, corpus, measures, reductions, ClauseSet, Error, MeasureKind};

#[derive(Parser)]
#[command(name = "hardness", version, about = "Exact resolution hardness measures for small clause-sets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Global {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Refuse inputs with more than N variables.
    #[arg(long, global = true, value_name = "N")]
    cap: Option<usize>,
    /// Seed for random instances.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    /// Emit and check witnesses.
    #[arg(long, global = true)]
    witness: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute measures of a DIMACS file (`-` for stdin).
    Measure {
        file: PathBuf,
        /// Measure tags (hd, dep, wid, whd, semspace, resspace, treespace) or `all`.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        kind: Vec<String>,
        /// Maximise only over instantiations within these variables.
        #[arg(long, value_delimiter = ',')]
        relative: Option<Vec<u32>>,
    },
    /// Write a family instance as DIMACS.
    Generate {
        /// php, fphp, ophp, ofphp, ephp, xor2, tseitin or full.
        family: String,
        /// Comma-separated parameters: m,k for the pigeonhole variants, n otherwise.
        #[arg(long, value_delimiter = ',')]
        params: Vec<u32>,
        /// For xor2: direct or chained.
        #[arg(long, default_value = "chained")]
        encoding: String,
        /// For tseitin: a JSON graph instead of the odd cycle of length n.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the variable-name map here.
        #[arg(long)]
        names: Option<PathBuf>,
    },
    /// Prover-Delayer games.
    Game {
        #[command(subcommand)]
        cmd: GameCommand,
    },
    /// Generalised unit propagation r_k.
    Reduce {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        level: u32,
    },
    /// Prime implicates.
    Prime { file: PathBuf },
    /// Blocked-clause operations.
    Blocked {
        #[command(subcommand)]
        cmd: BlockedCommand,
    },
    /// Extensions of clause-sets.
    Extend {
        #[command(subcommand)]
        cmd: ExtendCommand,
    },
    /// Check the relations between all seven measures.
    Verify {
        files: Vec<PathBuf>,
    },
    /// Evaluate an open relation on a batch of small instances.
    Probe {
        /// space_gap, ss_factor, weak_union, whd_vs_ss or conj_wid_whd.
        target: String,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// The exhaustive corpus of unsatisfiable clause-sets over at most three variables.
    Corpus {
        #[arg(long, default_value_t = corpus::DEFAULT_CLAUSE_CAP)]
        max_clauses: usize,
        /// Also append this many random instances.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// Write one DIMACS file per instance into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check for a k-consistent family of the given kind.
    Consistency {
        file: PathBuf,
        /// k_consistent, symmetric_k, weakly_k or very_weakly_k.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        k: u32,
    },
}

#[derive(Subcommand)]
enum GameCommand {
    /// Minimax value.
    Value {
        file: PathBuf,
        #[arg(long, default_value = "hd")]
        kind: String,
        /// For whd: `free` or `increasing` Prover breadth.
        #[arg(long, default_value = "free")]
        mode: String,
    },
    /// Play against the engine, or replay a stored transcript.
    Play {
        file: PathBuf,
        #[arg(long, default_value = "hd")]
        kind: String,
        /// Role of the human: prover or delayer. Without it the engine plays both sides.
        #[arg(long)]
        role: Option<String>,
        /// Replay a transcript file instead of playing.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Save the transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Value of the graph game on a Tseitin graph (JSON, or an odd cycle).
    Graph {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        cycle: Option<usize>,
    },
}

#[derive(Subcommand)]
enum BlockedCommand {
    /// Remove blocked clauses until none is left.
    Eliminate {
        file: PathBuf,
        /// Only remove blocked clauses of length two.
        #[arg(long)]
        binary: bool,
    },
}

#[derive(Subcommand)]
enum ExtendCommand {
    /// F together with the definitions e_C <-> C of a refutation's clauses.
    /// The proof is a line trace (`id: {lits} axiom|from a,b`) or JSON.
    FromProof { cnf: PathBuf, proof: PathBuf },
}

enum Failure {
    Violation(String),
    Usage(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path, g: &Global) -> Result<ClauseSet, Failure> {
    let f = parse_dimacs(&read_input(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(cap) = g.cap {
        if f.n() > cap {
            return Err(Failure::Cap(format!("{}: {} variables exceeds --cap {cap}", path.display(), f.n())));
        }
    }
    Ok(f)
}

fn emit(bytes: &[u8], out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => {
            if let Err(e) = io::stdout().write_all(bytes) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn print_json(v: &impl serde::Serialize) {
    // a closed pipe on stdout is not an error of the tool
    let _ = writeln!(io::stdout(), "{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn parse_kinds(tags: &[String]) -> Result<Vec<MeasureKind>, Failure> {
    if tags.iter().any(|t| t == "all") {
        return Ok(MeasureKind::ALL.to_vec());
    }
    tags.iter().map(|t| t.parse::<MeasureKind>().map_err(Failure::from)).collect()
}

fn measure(g: &Global, file: &Path, kinds: &[String], relative: Option<&Vec<u32>>) -> Outcome {
    let f = load(file, g)?;
    let v: Option<BTreeSet<u32>> = relative.map(|r| r.iter().copied().collect());
    let mut reports = Vec::new();
    for kind in parse_kinds(kinds)? {
        let r = measures::measure_report(kind, &f, v.as_ref(), g.witness)?;
        if let Some(w) = &r.witness {
            let target = r.instantiation.as_ref().map(|p| cnf::apply(p, &f)).unwrap_or_else(|| f.clone());
            if !measures::check_witness(kind, w, &target, r.value) {
                return Err(Failure::Violation(format!("{} witness failed its check", kind.tag())));
            }
        }
        reports.push(r);
    }
    if g.json || g.witness {
        print_json(&reports);
    } else {
        for r in &reports {
            println!("{} {}", r.kind.tag(), r.value);
        }
    }
    Ok(())
}

fn pair(params: &[u32], what: &str) -> Result<(u32, u32), Failure> {
    match params {
        [m, k] => Ok((*m, *k)),
        _ => Err(Failure::Usage(format!("{what} needs --params m,k"))),
    }
}

fn single(params: &[u32], what: &str) -> Result<u32, Failure> {
    match params {
        [n] => Ok(*n),
        _ => Err(Failure::Usage(format!("{what} needs --params n"))),
    }
}

fn load_graph(path: &Path) -> Result<TseitinGraph, Failure> {
    let g: TseitinGraph = serde_json::from_slice(&read_input(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    g.validate()?;
    Ok(g)
}

fn odd_cycle(n: usize) -> Result<TseitinGraph, Failure> {
    let mut charge = vec![false; n];
    if let Some(c) = charge.first_mut() {
        *c = true;
    }
    Ok(TseitinGraph::cycle(n, charge)?)
}

fn generate(family: &str, params: &[u32], encoding: &str, graph: Option<&Path>) -> Result<Instance, Failure> {
    if let Ok(v) = family.parse::<PhpVariant>() {
        let (m, k) = pair(params, family)?;
        return Ok(families::php(v, m, k));
    }
    Ok(match family {
        "ephp" => families::ephp(single(params, family)?)?,
        "xor2" => {
            let n = single(params, family)?;
            match encoding {
                "chained" => families::two_xor(n)?,
                "direct" => families::two_xor_direct(n)?,
                _ => return Err(Failure::Usage(format!("unknown encoding `{encoding}`"))),
            }
        }
        "tseitin" => {
            let g = match graph {
                Some(p) => load_graph(p)?,
                None => odd_cycle(single(params, family)? as usize)?,
            };
            families::tseitin_cnf(&g)?
        }
        "full" => families::full_clause_set(single(params, family)?),
        _ => return Err(Failure::Usage(format!("unknown family `{family}`"))),
    })
}

fn game(g: &Global, cmd: &GameCommand) -> Outcome {
    match cmd {
        GameCommand::Value { file, kind, mode } => {
            let f = load(file, g)?;
            let kind: GameKind = kind.parse()?;
            let value = match (kind, mode.as_str()) {
                (GameKind::Hd, _) => games::hd_game_value(&f)?,
                (GameKind::Whd, "free") => games::whd_game_value(&f)?,
                (GameKind::Whd, "increasing") => games::whd_game_value_mode(&f, WhdMode::IncreasingBreadth)?,
                _ => return Err(Failure::Usage(format!("unknown mode `{mode}`"))),
            };
            if g.json {
                print_json(&serde_json::json!({ "game": kind, "mode": mode, "value": value }));
            } else {
                println!("{value}");
            }
        }
        GameCommand::Play { file, kind, role, replay, transcript } => {
            let f = load(file, g)?;
            let kind: GameKind = kind.parse()?;
            let entries = match (replay, role) {
                (Some(p), _) => {
                    let text = String::from_utf8(read_input(p)?).map_err(|e| Failure::Usage(e.to_string()))?;
                    let stored = games::transcript_from_json(&text)?;
                    let replayed = games::replay(&f, kind, &stored)?;
                    if replayed != stored {
                        return Err(Failure::Violation("replayed transcript differs from the stored one".into()));
                    }
                    replayed
                }
                (None, Some(r)) => {
                    let human: Role = r.parse()?;
                    let stdin = io::stdin();
                    let mut input = stdin.lock();
                    let mut out = io::stdout();
                    games::play_interactive(&f, kind, human, &mut input, &mut out)?
                }
                (None, None) => games::play_optimal(&f, kind)?,
            };
            let text = games::transcript_to_json(&entries);
            match transcript {
                Some(p) => fs::write(p, text.as_bytes())?,
                None if g.json || replay.is_some() || role.is_none() => println!("{text}"),
                None => {}
            }
        }
        GameCommand::Graph { graph, cycle } => {
            let gr = match (graph, cycle) {
                (Some(p), None) => load_graph(p)?,
                (None, Some(n)) => odd_cycle(*n)?,
                _ => return Err(Failure::Usage("give exactly one of --graph or --cycle".into())),
            };
            let value = games::tseitin_hd_game_value(&gr)?;
            if g.json {
                print_json(&serde_json::json!({ "graph": gr, "value": value }));
            } else {
                println!("{value}");
            }
        }
    }
    Ok(())
}

fn verify(g: &Global, files: &[PathBuf]) -> Outcome {
    if files.is_empty() {
        return Err(Failure::Usage("verify needs at least one file".into()));
    }
    let mut violations = Vec::new();
    let mut reports = Vec::new();
    for file in files {
        let f = load(file, g)?;
        let r = report::verify_relations(&f, &file.display().to_string())?;
        if !r.all_pass() {
            violations.push(file.display().to_string());
        }
        reports.push(r);
    }
    if g.json {
        print_json(&reports);
    } else {
        for r in &reports {
            println!("{}:", r.instance);
            for (tag, v) in &r.measures {
                match v {
                    Some(v) => println!("  {tag} = {v}"),
                    None => println!("  {tag} skipped ({})", r.skipped.get(tag).map(String::as_str).unwrap_or("cap")),
                }
            }
            for rel in &r.relations {
                let verdict = match rel.holds {
                    Some(true) => "ok",
                    Some(false) => "VIOLATED",
                    None => "skipped",
                };
                println!("  {}: {verdict} ({})", rel.name, rel.detail);
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!("relation violated on {}", violations.join(", "))))
    }
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match &cli.cmd {
        Command::Measure { file, kind, relative } => measure(g, file, kind, relative.as_ref())?,
        Command::Generate { family, params, encoding, graph, output, names } => {
            let inst = generate(family, params, encoding, graph.as_deref())?;
            if let Some(cap) = g.cap {
                if inst.clauses.n() > cap {
                    return Err(Failure::Cap(format!("{} has {} variables, over --cap {cap}", inst.name, inst.clauses.n())));
                }
            }
            emit(&write_dimacs(&inst.clauses), output.as_deref())?;
            if let Some(p) = names {
                fs::write(p, inst.names_json())?;
            }
            if g.json {
                eprintln!("{}", serde_json::to_string(&inst.expected).expect("serialisable"));
            }
        }
        Command::Game { cmd } => game(g, cmd)?,
        Command::Reduce { file, level } => {
            let f = load(file, g)?;
            let r = reductions::rk(&f, *level)?;
            if g.json {
                print_json(&r);
            } else {
                emit(&write_dimacs(&r.reduced), None)?;
            }
        }
        Command::Prime { file } => {
            let f = load(file, g)?;
            emit(&write_dimacs(&cnf::prime_implicates(&f)?), None)?;
        }
        Command::Blocked { cmd: BlockedCommand::Eliminate { file, binary } } => {
            let f = load(file, g)?;
            let r = if *binary { extensions::eliminate_blocked_binary(&f) } else { extensions::eliminate_blocked(&f) };
            if g.json {
                print_json(&serde_json::json!({ "removed": f.c() - r.c(), "clauses": r }));
            } else {
                emit(&write_dimacs(&r), None)?;
            }
        }
        Command::Extend { cmd: ExtendCommand::FromProof { cnf, proof } } => {
            let f = load(cnf, g)?;
            let text = String::from_utf8(read_input(proof)?).map_err(|e| Failure::Usage(e.to_string()))?;
            let r = if text.trim_start().starts_with('{') {
                serde_json::from_str::<ResolutionProof>(&text).map_err(|e| Failure::Usage(format!("{}: {e}", proof.display())))?
            } else {
                ResolutionProof::from_trace(&text)?
            };
            if !resolution::check_proof(&r, &f, &hardness::Clause::bottom()) {
                return Err(Failure::Usage("the proof is not a refutation of the clause-set".into()));
            }
            let e = extensions::extension_from_refutation(&f, &r)?;
            if g.json {
                print_json(&e);
            } else {
                emit(&write_dimacs(&e.clauses), None)?;
            }
        }
        Command::Verify { files } => verify(g, files)?,
        Command::Probe { target, budget } => {
            let t: ProbeTarget = target.parse()?;
            let r = report::probe(t, *budget, g.seed)?;
            print_json(&r);
        }
        Command::Corpus { max_clauses, random, out } => {
            let mut fs_ = corpus::exhaustive(*max_clauses);
            fs_.extend(corpus::random_corpus(g.seed, *random, 1, 5));
            match out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    for (i, f) in fs_.iter().enumerate() {
                        fs::write(dir.join(format!("{i:05}.cnf")), write_dimacs(f))?;
                    }
                    println!("{} instances written to {}", fs_.len(), dir.display());
                }
                None if g.json => print_json(&fs_.iter().map(|f| f.to_dimacs_lists()).collect::<Vec<_>>()),
                None => println!("{} instances", fs_.len()),
            }
        }
        Command::Consistency { file, kind, k } => {
            let f = load(file, g)?;
            let kind: ConsistencyKind = kind.parse()?;
            let exists = consistency::exists_family(kind, &f, *k)?;
            if g.json {
                let family = if exists && g.witness { Some(consistency::witness_family(kind, &f, *k)?) } else { None };
                print_json(&serde_json::json!({ "kind": kind.tag(), "k": k, "exists": exists, "family": family }));
            } else {
                println!("{exists}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(m)) => {
            eprintln!("violation: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(3)
        }
    }
}
