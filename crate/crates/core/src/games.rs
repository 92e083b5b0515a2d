//! Prover-Delayer games: exact values of the hardness game and the
//! asymmetric-width game over tables indexed by partial assignments,
//! interactive and scripted play with JSON transcripts, and the hardness
//! game on Tseitin graphs.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::bits::{Ba, Bc, Dense};
use crate::cnf::{ClauseSet, Literal, PartialAssignment};
use crate::error::{Error, Result};

/// Variable cap of the hardness game (3^n table entries).
pub const HD_GAME_CAP: usize = 12;
/// Variable cap of the asymmetric-width game.
pub const WHD_GAME_CAP: usize = 8;
/// Edge cap of the Tseitin graph game.
pub const TSEITIN_GAME_CAP: usize = 14;

const NONE: u16 = u16::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Hd,
    Whd,
}

impl FromStr for GameKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<GameKind> {
        match s {
            "hd" | "hardness" => Ok(GameKind::Hd),
            "whd" | "asym_width" => Ok(GameKind::Whd),
            _ => Err(Error::Invalid(format!("unknown game {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Delayer,
    Prover,
}

impl Role {
    fn other(self) -> Role {
        match self {
            Role::Delayer => Role::Prover,
            Role::Prover => Role::Delayer,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Delayer => "delayer",
            Role::Prover => "prover",
        })
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Role> {
        match s {
            "delayer" => Ok(Role::Delayer),
            "prover" => Ok(Role::Prover),
            _ => Err(Error::Invalid(format!("unknown role {s:?}"))),
        }
    }
}

/// Prover move rule of the asymmetric-width game.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhdMode {
    /// Prover may forget any part of the current assignment.
    Free,
    /// Each Prover assignment must be strictly larger than the previous one.
    IncreasingBreadth,
}

/// Position of a play in progress.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameState {
    pub assignment: PartialAssignment,
    pub turn: Role,
    pub prover_moves: u32,
    pub max_prover_breadth: u32,
}

impl GameState {
    pub fn new() -> GameState {
        GameState { assignment: PartialAssignment::new(), turn: Role::Delayer, prover_moves: 0, max_prover_breadth: 0 }
    }

    /// Points of Delayer so far (final once the play has ended).
    pub fn score(&self, kind: GameKind, f: &ClauseSet) -> u32 {
        match kind {
            GameKind::Hd if satisfied(&self.assignment, f) => 0,
            GameKind::Hd => self.prover_moves,
            GameKind::Whd => self.max_prover_breadth,
        }
    }
}

impl Default for GameState {
    fn default() -> Self {
        GameState::new()
    }
}

fn satisfied(a: &PartialAssignment, f: &ClauseSet) -> bool {
    f.iter().all(|c| a.satisfies(c))
}

fn falsified(a: &PartialAssignment, f: &ClauseSet) -> bool {
    f.iter().any(|c| a.falsifies(c))
}

/// Partial assignments over n dense variables, indexed in base 3
/// (digit 0 free, 1 false, 2 true).
struct Table {
    n: usize,
    pow: Vec<usize>,
    set: Vec<u16>,
    val: Vec<u16>,
    bot: Vec<bool>,
}

impl Table {
    fn new(cls: &[Bc], n: usize) -> Table {
        let pow: Vec<usize> = (0..=n).map(|i| 3usize.pow(i as u32)).collect();
        let size = pow[n];
        let (mut set, mut val, mut bot) = (vec![0u16; size], vec![0u16; size], vec![false; size]);
        for idx in 0..size {
            let (mut s, mut v, mut x) = (0u16, 0u16, idx);
            for i in 0..n {
                match x % 3 {
                    1 => s |= 1 << i,
                    2 => {
                        s |= 1 << i;
                        v |= 1 << i
                    }
                    _ => {}
                }
                x /= 3;
            }
            set[idx] = s;
            val[idx] = v;
            let a = Ba { set: s as u64, val: v as u64 };
            bot[idx] = cls.iter().any(|c| a.falsifies(*c));
        }
        Table { n, pow, set, val, bot }
    }

    fn size(&self) -> usize {
        self.pow[self.n]
    }

    fn full(&self) -> u16 {
        ((1u32 << self.n) - 1) as u16
    }

    fn child(&self, idx: usize, v: usize, e: bool) -> usize {
        idx + (1 + e as usize) * self.pow[v]
    }

    fn free(&self, idx: usize) -> u16 {
        !self.set[idx] & self.full()
    }

    fn ba(&self, idx: usize) -> Ba {
        Ba { set: self.set[idx] as u64, val: self.val[idx] as u64 }
    }

    fn index(&self, a: Ba) -> usize {
        (0..self.n).filter(|i| a.set >> i & 1 == 1).map(|i| (1 + (a.val >> i & 1) as usize) * self.pow[i]).sum()
    }

    /// The part of `idx` on the variables of `mask`.
    fn restrict(&self, idx: usize, mask: u16) -> usize {
        self.index(self.ba(idx).restrict(mask as u64))
    }

    fn children(&self, idx: usize) -> impl Iterator<Item = (usize, bool, usize)> + '_ {
        let free = self.free(idx);
        (0..self.n).filter(move |v| free >> v & 1 == 1).flat_map(move |v| [false, true].into_iter().map(move |e| (v, e, self.child(idx, v, e))))
    }

    /// Prover moves of the asymmetric-width game from `idx` with breadth in
    /// `lo..=hi`: a kept part of `idx` plus one new variable.
    fn forget_moves(&self, idx: usize, lo: usize, hi: usize) -> Vec<(usize, usize)> {
        let s = self.set[idx];
        let free = self.free(idx);
        let mut out = Vec::new();
        let mut sub = s;
        loop {
            let b = sub.count_ones() as usize + 1;
            if b >= lo && b <= hi {
                let psi = self.restrict(idx, sub);
                for v in (0..self.n).filter(|v| free >> v & 1 == 1) {
                    for e in [false, true] {
                        out.push((self.child(psi, v, e), b));
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
        out
    }

    /// All extensions of `idx` (including itself) that falsify no clause.
    fn extensions(&self, idx: usize) -> Vec<usize> {
        let mut out = vec![idx];
        let mut i = 0;
        let mut seen: HashSet<usize> = HashSet::from([idx]);
        while i < out.len() {
            let cur = out[i];
            i += 1;
            for (_, _, c) in self.children(cur) {
                if !self.bot[c] && seen.insert(c) {
                    out.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn setup(f: &ClauseSet, cap: usize, what: &'static str) -> Result<(Dense, Table)> {
    if f.n() > cap {
        return Err(Error::CapExceeded { what, n: f.n(), cap });
    }
    let d = Dense::of(f)?;
    let cls = d.clauses(f)?;
    let t = Table::new(&cls, d.n());
    Ok((d, t))
}

/// Value tables of the hardness game. `p[θ]`: Delayer's further points
/// with Prover to move at θ; `d[θ]`: the same with Delayer to move.
struct HdTables {
    t: Table,
    sat: Vec<bool>,
    p: Vec<u8>,
    d: Vec<u8>,
}

impl HdTables {
    fn build(t: Table) -> HdTables {
        let size = t.size();
        let (mut sat, mut p, mut d) = (vec![false; size], vec![0u8; size], vec![0u8; size]);
        for idx in (0..size).rev() {
            if t.bot[idx] {
                continue;
            }
            let free = t.free(idx);
            sat[idx] = free == 0 || {
                let v = free.trailing_zeros() as usize;
                sat[t.child(idx, v, false)] || sat[t.child(idx, v, true)]
            };
            let mut pv = u8::MAX;
            let mut dv = 0u8;
            for (_, _, c) in t.children(idx) {
                let after = if t.bot[c] { 0 } else { d[c] };
                pv = pv.min(1 + after);
                dv = dv.max(after);
            }
            p[idx] = if sat[idx] { 0 } else { pv };
            d[idx] = dv.max(p[idx]);
        }
        HdTables { t, sat, p, d }
    }

    fn value(&self) -> u32 {
        self.d[0] as u32
    }

    fn prover_move(&self, idx: usize) -> Ba {
        let t = &self.t;
        if self.sat[idx] {
            let mut cur = idx;
            while t.free(cur) != 0 {
                let v = t.free(cur).trailing_zeros() as usize;
                let c0 = t.child(cur, v, false);
                cur = if self.sat[c0] { c0 } else { t.child(cur, v, true) };
            }
            return t.ba(cur);
        }
        let best = t
            .children(idx)
            .min_by_key(|(_, _, c)| if t.bot[*c] { 0 } else { self.d[*c] })
            .map(|(_, _, c)| c)
            .unwrap();
        t.ba(best)
    }

    fn delayer_move(&self, idx: usize) -> Ba {
        let t = &self.t;
        let mut cur = idx;
        while self.d[cur] > self.p[cur] {
            cur = t.children(cur).map(|(_, _, c)| c).find(|c| !t.bot[*c] && self.d[*c] == self.d[cur]).unwrap();
        }
        t.ba(cur)
    }
}

/// Exact value of the hardness game: Delayer extends θ, Prover binds one
/// new variable or, while θ*F is satisfiable, jumps to a satisfying total
/// extension. Delayer scores the number of Prover bindings when a clause is
/// falsified and nothing when every clause is satisfied.
pub fn hd_game_value(f: &ClauseSet) -> Result<u32> {
    let (_, t) = setup(f, HD_GAME_CAP, "hd game")?;
    Ok(HdTables::build(t).value())
}

/// Reachability solution of the asymmetric-width game at breadth bound `k`.
/// `win[θ]`: Prover to move at θ forces a falsified clause with moves of
/// breadth at most k. `ag[θ]`: the round in which every extension of θ
/// became winning for Prover, `NONE` if never.
struct Bounded {
    win: Vec<bool>,
    ag: Vec<u16>,
}

fn solve_bounded(t: &Table, k: usize) -> Bounded {
    let size = t.size();
    let mut win = vec![false; size];
    let mut ag = vec![NONE; size];
    let mut round: u16 = 0;
    loop {
        round += 1;
        for idx in (0..size).rev() {
            if t.bot[idx] || ag[idx] != NONE || !win[idx] {
                continue;
            }
            if t.children(idx).all(|(_, _, c)| t.bot[c] || ag[c] != NONE) {
                ag[idx] = round;
            }
        }
        let mut changed = false;
        for idx in 0..size {
            if t.bot[idx] || win[idx] {
                continue;
            }
            if t.forget_moves(idx, 1, k).iter().any(|(c, _)| t.bot[*c] || ag[*c] != NONE) {
                win[idx] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Bounded { win, ag }
}

/// Whether Prover wins the breadth-increasing variant within bound `k`.
fn solve_increasing(t: &Table, k: usize) -> bool {
    let size = t.size();
    // ag[b][θ]: Delayer to move at θ, last Prover breadth b, Prover wins
    let mut ag = vec![vec![false; size]; k + 1];
    for s in (0..=k).rev() {
        let mut win = vec![false; size];
        for idx in 0..size {
            if !t.bot[idx] {
                win[idx] = t.forget_moves(idx, s + 1, k).iter().any(|(c, b)| t.bot[*c] || ag[*b][*c]);
            }
        }
        for idx in (0..size).rev() {
            if !t.bot[idx] {
                ag[s][idx] = win[idx] && t.children(idx).all(|(_, _, c)| t.bot[c] || ag[s][c]);
            }
        }
    }
    ag[0][0]
}

/// Exact value of the asymmetric-width game: Delayer extends θ; Prover
/// replaces θ by a part of θ plus one new variable; Delayer scores the
/// largest assignment Prover used. Prover must force a falsified clause in
/// finitely many moves.
pub fn whd_game_value(f: &ClauseSet) -> Result<u32> {
    whd_game_value_mode(f, WhdMode::Free)
}

pub fn whd_game_value_mode(f: &ClauseSet, mode: WhdMode) -> Result<u32> {
    let (_, t) = setup(f, WHD_GAME_CAP, "whd game")?;
    if t.bot[0] {
        return Ok(0);
    }
    if crate::cnf::is_satisfiable(f)? {
        return Err(Error::Satisfiable);
    }
    for k in 1..=t.n {
        let won = match mode {
            WhdMode::Free => solve_bounded(&t, k).ag[0] != NONE,
            WhdMode::IncreasingBreadth => solve_increasing(&t, k),
        };
        if won {
            return Ok(k as u32);
        }
    }
    Err(Error::Invalid("no bound up to n wins the game".into()))
}

struct WhdTables {
    t: Table,
    value: usize,
    levels: Vec<Bounded>,
}

impl WhdTables {
    fn build(t: Table) -> WhdTables {
        let mut levels = vec![Bounded { win: vec![false; t.size()], ag: vec![NONE; t.size()] }];
        let mut value = 0;
        if !t.bot[0] {
            for k in 1..=t.n {
                levels.push(solve_bounded(&t, k));
                if levels[k].ag[0] != NONE {
                    value = k;
                    break;
                }
            }
        }
        WhdTables { t, value, levels }
    }

    /// Least bound at which Prover to move at θ wins.
    fn need(&self, idx: usize) -> usize {
        (1..=self.value).find(|k| self.levels[*k].win[idx]).unwrap_or(self.value + 1)
    }

    fn prover_move(&self, idx: usize) -> Ba {
        let t = &self.t;
        let lv = &self.levels[self.value];
        let best = t
            .forget_moves(idx, 1, self.value)
            .into_iter()
            .filter(|(c, _)| t.bot[*c] || lv.ag[*c] != NONE)
            .min_by_key(|(c, _)| if t.bot[*c] { 0 } else { lv.ag[*c] })
            .or_else(|| t.forget_moves(idx, 1, t.n).into_iter().next())
            .unwrap();
        t.ba(best.0)
    }

    fn delayer_move(&self, idx: usize) -> Ba {
        let ext = self.t.extensions(idx);
        let best = ext.iter().copied().rev().max_by_key(|c| self.need(*c)).unwrap();
        self.t.ba(best)
    }
}

enum Engine {
    Hd(HdTables),
    Whd(WhdTables),
}

/// One move of a play. `move` lists literals: the literals Delayer adds,
/// the single literal Prover binds (or the satisfying extension Prover
/// jumps to) in the hardness game, and Prover's whole new assignment in the
/// asymmetric-width game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub actor: Role,
    #[serde(rename = "move")]
    pub mv: Vec<i64>,
    pub resulting_assignment: PartialAssignment,
    pub score_so_far: u32,
}

pub fn transcript_to_json(entries: &[TranscriptEntry]) -> String {
    serde_json::to_string_pretty(entries).expect("transcript serialises")
}

pub fn transcript_from_json(text: &str) -> Result<Vec<TranscriptEntry>> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("transcript: {e}")))
}

/// Rule checker and bookkeeping for one play.
pub struct Referee<'a> {
    f: &'a ClauseSet,
    kind: GameKind,
    vars: std::collections::BTreeSet<u32>,
    pub state: GameState,
    seen: HashSet<PartialAssignment>,
}

fn lits_of(a: &PartialAssignment) -> Vec<Literal> {
    a.iter().map(|(v, b)| Literal::new(v, b)).collect()
}

impl<'a> Referee<'a> {
    pub fn new(f: &'a ClauseSet, kind: GameKind) -> Referee<'a> {
        Referee { f, kind, vars: f.vars(), state: GameState::new(), seen: HashSet::new() }
    }

    /// A clause is falsified, or (hardness game) every clause is satisfied.
    pub fn is_over(&self) -> bool {
        falsified(&self.state.assignment, self.f) || (self.kind == GameKind::Hd && satisfied(&self.state.assignment, self.f))
    }

    pub fn score(&self) -> u32 {
        self.state.score(self.kind, self.f)
    }

    fn rule(&self, actor: Role) -> &'static str {
        match (self.kind, actor) {
            (_, Role::Delayer) => "Delayer adds literals on unassigned variables of F (possibly none)",
            (GameKind::Hd, Role::Prover) => {
                "Prover binds exactly one unassigned variable, or, while F under the assignment is satisfiable, \
                 jumps to a satisfying total extension"
            }
            (GameKind::Whd, Role::Prover) => {
                "Prover names a new assignment made of part of the current one plus exactly one unassigned variable, \
                 never repeating an earlier Prover assignment"
            }
        }
    }

    fn parse(&self, mv: &[i64]) -> Result<Vec<Literal>> {
        let mut out: Vec<Literal> = Vec::with_capacity(mv.len());
        for x in mv {
            let l = Literal::from_dimacs(*x)?;
            if !self.vars.contains(&l.var()) {
                return Err(Error::IllegalMove(format!("variable {} does not occur in F", l.var())));
            }
            if out.iter().any(|m| m.var() == l.var()) {
                return Err(Error::IllegalMove(format!("variable {} named twice", l.var())));
            }
            out.push(l);
        }
        Ok(out)
    }

    /// Validates `mv` for the side to move and applies it.
    pub fn apply(&mut self, mv: &[i64]) -> Result<TranscriptEntry> {
        if self.is_over() {
            return Err(Error::IllegalMove("the game has ended".into()));
        }
        let actor = self.state.turn;
        let lits = self.parse(mv)?;
        let cur = self.state.assignment.clone();
        let illegal = |why: &str| Error::IllegalMove(format!("{why} (rule: {})", self.rule(actor)));
        let is_new = |l: &Literal| cur.get(l.var()).is_none();
        let next = match (self.kind, actor) {
            (_, Role::Delayer) => {
                if !lits.iter().all(is_new) {
                    return Err(illegal("Delayer may only bind unassigned variables"));
                }
                lits.iter().fold(cur.clone(), |a, l| a.bind(l.var(), l.is_positive()))
            }
            (GameKind::Hd, Role::Prover) => {
                if lits.is_empty() || !lits.iter().all(is_new) {
                    return Err(illegal("Prover must bind unassigned variables"));
                }
                let next = lits.iter().fold(cur.clone(), |a, l| a.bind(l.var(), l.is_positive()));
                if lits.len() == 1 {
                    self.state.prover_moves += 1;
                } else if next.n() != self.vars.len() || !satisfied(&next, self.f) {
                    return Err(illegal("a jump must reach a satisfying total assignment"));
                }
                next
            }
            (GameKind::Whd, Role::Prover) => {
                let fresh: Vec<&Literal> = lits.iter().filter(|l| is_new(l)).collect();
                if fresh.len() != 1 {
                    return Err(illegal("exactly one variable must be new"));
                }
                if !lits.iter().all(|l| is_new(l) || cur.value(*l) == Some(true)) {
                    return Err(illegal("kept literals must agree with the current assignment"));
                }
                let next = PartialAssignment::from_pairs(lits.iter().map(|l| (l.var(), l.is_positive())))?;
                if self.seen.contains(&next) {
                    return Err(illegal("Prover repeated an earlier assignment"));
                }
                self.seen.insert(next.clone());
                self.state.max_prover_breadth = self.state.max_prover_breadth.max(next.n() as u32);
                next
            }
        };
        self.state.assignment = next;
        self.state.turn = actor.other();
        Ok(TranscriptEntry {
            actor,
            mv: lits.iter().map(|l| l.to_dimacs()).collect(),
            resulting_assignment: self.state.assignment.clone(),
            score_so_far: self.score(),
        })
    }
}

impl Engine {
    fn new(f: &ClauseSet, kind: GameKind) -> Result<(Dense, Engine)> {
        match kind {
            GameKind::Hd => {
                let (d, t) = setup(f, HD_GAME_CAP, "hd game")?;
                Ok((d, Engine::Hd(HdTables::build(t))))
            }
            GameKind::Whd => {
                if crate::cnf::is_satisfiable(f)? {
                    return Err(Error::Satisfiable);
                }
                let (d, t) = setup(f, WHD_GAME_CAP, "whd game")?;
                Ok((d, Engine::Whd(WhdTables::build(t))))
            }
        }
    }

    fn value(&self) -> u32 {
        match self {
            Engine::Hd(h) => h.value(),
            Engine::Whd(w) => w.value as u32,
        }
    }

    fn table(&self) -> &Table {
        match self {
            Engine::Hd(h) => &h.t,
            Engine::Whd(w) => &w.t,
        }
    }

    /// The optimal move for `role` at `a`, as transcript literals.
    fn choose(&self, d: &Dense, a: &PartialAssignment, role: Role) -> Result<Vec<i64>> {
        let cur = d.assignment(a)?;
        let idx = self.table().index(cur);
        let next = match (self, role) {
            (Engine::Hd(h), Role::Prover) => h.prover_move(idx),
            (Engine::Hd(h), Role::Delayer) => h.delayer_move(idx),
            (Engine::Whd(w), Role::Prover) => {
                let b = d.to_assignment(w.prover_move(idx));
                return Ok(lits_of(&b).iter().map(|l| l.to_dimacs()).collect());
            }
            (Engine::Whd(w), Role::Delayer) => w.delayer_move(idx),
        };
        let added = Ba { set: next.set & !cur.set, val: next.val & !cur.set };
        Ok(lits_of(&d.to_assignment(added)).iter().map(|l| l.to_dimacs()).collect())
    }
}

/// Plays one game with `human` moves read line by line from `input`
/// (DIMACS literals separated by spaces, an empty line is the empty move)
/// against the engine's optimal strategy. Prompts go to `output`.
pub fn play_interactive<R: BufRead, W: Write>(f: &ClauseSet, kind: GameKind, human: Role, input: &mut R, output: &mut W) -> Result<Vec<TranscriptEntry>> {
    let (d, engine) = Engine::new(f, kind)?;
    let io = |e: std::io::Error| Error::Invalid(format!("io: {e}"));
    writeln!(output, "game value {}; you play {human}", engine.value()).map_err(io)?;
    let mut referee = Referee::new(f, kind);
    let mut transcript = Vec::new();
    while !referee.is_over() {
        let turn = referee.state.turn;
        let entry = if turn == human {
            loop {
                write!(output, "{} {} > ", referee.state.assignment, turn).map_err(io)?;
                output.flush().map_err(io)?;
                let mut line = String::new();
                if input.read_line(&mut line).map_err(io)? == 0 {
                    return Err(Error::Invalid("input ended before the game".into()));
                }
                let parsed: std::result::Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
                let res = match parsed {
                    Ok(mv) => referee.apply(&mv),
                    Err(_) => Err(Error::IllegalMove("expected DIMACS literals".into())),
                };
                match res {
                    Ok(e) => break e,
                    Err(e) => writeln!(output, "{e}").map_err(io)?,
                }
            }
        } else {
            let mv = engine.choose(&d, &referee.state.assignment, turn)?;
            let e = referee.apply(&mv)?;
            writeln!(output, "{turn} plays {:?}", e.mv).map_err(io)?;
            e
        };
        transcript.push(entry);
    }
    writeln!(output, "game over, score {}", referee.score()).map_err(io)?;
    Ok(transcript)
}

/// Engine against engine: both sides play optimally.
pub fn play_optimal(f: &ClauseSet, kind: GameKind) -> Result<Vec<TranscriptEntry>> {
    let (d, engine) = Engine::new(f, kind)?;
    let mut referee = Referee::new(f, kind);
    let mut transcript = Vec::new();
    while !referee.is_over() {
        let mv = engine.choose(&d, &referee.state.assignment, referee.state.turn)?;
        transcript.push(referee.apply(&mv)?);
    }
    Ok(transcript)
}

/// Re-applies the moves of a stored transcript under the rules and
/// recomputes assignments and scores.
pub fn replay(f: &ClauseSet, kind: GameKind, entries: &[TranscriptEntry]) -> Result<Vec<TranscriptEntry>> {
    let mut referee = Referee::new(f, kind);
    let mut out = Vec::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        if e.actor != referee.state.turn {
            return Err(Error::IllegalMove(format!("move {i}: it is {}'s turn", referee.state.turn)));
        }
        out.push(referee.apply(&e.mv)?);
    }
    Ok(out)
}

/// Connected graph with parity charges on vertices `0..vertices`; edge i is
/// variable i+1 of the Tseitin clause-set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TseitinGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub charge: Vec<bool>,
}

impl TseitinGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>, charge: Vec<bool>) -> Result<TseitinGraph> {
        let g = TseitinGraph { vertices, edges, charge };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if self.vertices == 0 {
            return bad("no vertices".into());
        }
        if self.vertices > 64 || self.edges.len() > 64 {
            return bad("more than 64 vertices or edges".into());
        }
        if self.charge.len() != self.vertices {
            return bad(format!("{} charges for {} vertices", self.charge.len(), self.vertices));
        }
        for (a, b) in &self.edges {
            if a == b {
                return bad(format!("loop at vertex {a}"));
            }
            if *a >= self.vertices || *b >= self.vertices {
                return bad(format!("edge ({a},{b}) leaves the vertex range"));
            }
        }
        let all_v = if self.vertices == 64 { u64::MAX } else { (1u64 << self.vertices) - 1 };
        if component(&self.edges, all_v, self.all_edges(), 0).0 != all_v {
            return bad("graph is not connected".into());
        }
        Ok(())
    }

    /// Parity of the total charge; odd makes the clause-set unsatisfiable.
    pub fn total_charge(&self) -> bool {
        self.charge.iter().fold(false, |p, c| p ^ c)
    }

    fn all_edges(&self) -> u64 {
        if self.edges.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.edges.len()) - 1
        }
    }

    pub fn cycle(n: usize, charge: Vec<bool>) -> Result<TseitinGraph> {
        let edges = if n == 2 { vec![(0, 1), (1, 0)] } else { (0..n).map(|i| (i, (i + 1) % n)).collect() };
        TseitinGraph::new(n, if n < 2 { vec![] } else { edges }, charge)
    }
}

/// Vertex and edge masks of the component of `start` in the subgraph
/// given by `vmask`/`emask`.
fn component(edges: &[(usize, usize)], vmask: u64, emask: u64, start: usize) -> (u64, u64) {
    let mut vs = 1u64 << start;
    loop {
        let mut grown = vs;
        for (i, (a, b)) in edges.iter().enumerate() {
            if emask >> i & 1 == 1 && (vs >> a & 1 == 1 || vs >> b & 1 == 1) {
                grown |= 1 << a | 1 << b;
            }
        }
        grown &= vmask;
        if grown == vs {
            break;
        }
        vs = grown;
    }
    let es = edges
        .iter()
        .enumerate()
        .filter(|(i, (a, b))| emask >> i & 1 == 1 && vs >> a & 1 == 1 && vs >> b & 1 == 1)
        .fold(0u64, |m, (i, _)| m | 1 << i);
    (vs, es)
}

struct GraphGame<'a> {
    edges: &'a [(usize, usize)],
    memo: FxHashMap<(u64, u64), (u32, u32)>,
}

impl GraphGame<'_> {
    /// Graphs reachable by one atomic move: drop an edge, keep a component.
    fn atomic(&self, vmask: u64, emask: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for i in (0..self.edges.len()).filter(|i| emask >> i & 1 == 1) {
            let rest = emask & !(1 << i);
            let (a, b) = self.edges[i];
            let ca = component(self.edges, vmask, rest, a);
            out.push(ca);
            if ca.0 >> b & 1 == 0 {
                out.push(component(self.edges, vmask, rest, b));
            }
        }
        out
    }

    /// (Prover to move, Delayer to move) values at a non-trivial graph.
    fn values(&mut self, vmask: u64, emask: u64) -> (u32, u32) {
        if let Some(v) = self.memo.get(&(vmask, emask)) {
            return *v;
        }
        let mut p = u32::MAX;
        let mut d = 0;
        for (v2, e2) in self.atomic(vmask, emask) {
            let after = if e2 == 0 { 0 } else { self.values(v2, e2).1 };
            p = p.min(1 + after);
            d = d.max(after);
        }
        let r = (p, d.max(p));
        self.memo.insert((vmask, emask), r);
        r
    }
}

/// Value of the hardness game played on the graph: an atomic move deletes
/// an edge and keeps one component; Delayer makes any number of atomic
/// moves, Prover exactly one; Delayer scores Prover's move count once no
/// edge is left.
pub fn tseitin_hd_game_value(g: &TseitinGraph) -> Result<u32> {
    g.validate()?;
    if g.edges.len() > TSEITIN_GAME_CAP {
        return Err(Error::CapExceeded { what: "tseitin game edges", n: g.edges.len(), cap: TSEITIN_GAME_CAP });
    }
    if g.edges.is_empty() {
        return Ok(0);
    }
    let mut game = GraphGame { edges: &g.edges, memo: FxHashMap::default() };
    let all_v = if g.vertices == 64 { u64::MAX } else { (1u64 << g.vertices) - 1 };
    Ok(game.values(all_v, g.all_edges()).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[&[i64]]) -> ClauseSet {
        ClauseSet::from_dimacs(v).unwrap()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(hd_game_value(&ClauseSet::bottom()).unwrap(), 0);
        assert_eq!(whd_game_value(&ClauseSet::bottom()).unwrap(), 0);
        assert_eq!(hd_game_value(&cs(&[&[1]])).unwrap(), 0);
        assert_eq!(hd_game_value(&ClauseSet::top()).unwrap(), 0);
        assert_eq!(hd_game_value(&cs(&[&[1], &[-1]])).unwrap(), 1);
    }

    #[test]
    fn unit_chain_values() {
        let f = cs(&[&[1], &[-1, 2], &[-1, -2]]);
        assert_eq!(whd_game_value(&f).unwrap(), 1);
        assert_eq!(hd_game_value(&f).unwrap(), 1);
        // keeping Delayer's binding counts toward breadth, so a second round is needed
        assert_eq!(whd_game_value_mode(&f, WhdMode::IncreasingBreadth).unwrap(), 2);
    }

    #[test]
    fn satisfiable_refused_by_whd() {
        assert_eq!(whd_game_value(&cs(&[&[1, 2]])), Err(Error::Satisfiable));
    }

    #[test]
    fn optimal_play_reaches_the_value() {
        let f = cs(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        for kind in [GameKind::Hd, GameKind::Whd] {
            let t = play_optimal(&f, kind).unwrap();
            assert_eq!(t.last().unwrap().score_so_far, 2);
            assert_eq!(replay(&f, kind, &t).unwrap(), t);
        }
    }

    #[test]
    fn illegal_moves_are_reported() {
        let f = cs(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let mut r = Referee::new(&f, GameKind::Hd);
        assert!(matches!(r.apply(&[3]), Err(Error::IllegalMove(_))));
        r.apply(&[1]).unwrap();
        assert!(matches!(r.apply(&[-1]), Err(Error::IllegalMove(_))));
        assert!(matches!(r.apply(&[2, -2]), Err(Error::IllegalMove(_))));
    }

    #[test]
    fn interactive_rejects_then_accepts() {
        let f = cs(&[&[1], &[-1]]);
        let mut input = std::io::Cursor::new(b"x\n\n".to_vec());
        let mut out = Vec::new();
        let t = play_interactive(&f, GameKind::Hd, Role::Delayer, &mut input, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("illegal move"));
        assert_eq!(t.last().unwrap().score_so_far, 1);
    }

    #[test]
    fn graph_game_small() {
        let single = TseitinGraph::new(1, vec![], vec![true]).unwrap();
        assert_eq!(tseitin_hd_game_value(&single).unwrap(), 0);
        let edge = TseitinGraph::new(2, vec![(0, 1)], vec![true, false]).unwrap();
        assert_eq!(tseitin_hd_game_value(&edge).unwrap(), 1);
        assert!(TseitinGraph::new(3, vec![(0, 1)], vec![true, false, false]).is_err());
        assert!(TseitinGraph::new(2, vec![(0, 0), (0, 1)], vec![true, false]).is_err());
    }
}
