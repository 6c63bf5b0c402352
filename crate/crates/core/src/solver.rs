//! Exact winning/losing decision for tiny games.
//!
//! A strategy is a table `f_v(pattern)` per vertex, where `pattern` is the
//! mixed-radix index of the colors `v` sees. The game is winning iff some
//! choice of tables covers every assignment `α`, i.e. for every `α` some
//! `v` has `f_v(pattern_α(v)) = α(v)`.
//!
//! Search keeps a domain (bit set of still-allowed guesses) per table entry.
//! It branches on the uncovered assignment with the fewest live options
//! (lowest vertex first), propagates assignments left with a single option,
//! and prunes with a counting bound: an undecided entry can cover at most as
//! many uncovered assignments as its best color does, so if the sum of these
//! capacities is below the number of uncovered assignments the node is
//! refuted. For complete graphs that bound is exactly the reciprocal-sum
//! criterion.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::game::{Color, Game};
use crate::strategy::{clique_criterion, table_strategy, Strategy, TableRule};
use crate::verify::{verify_exhaustive, VerifyOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("game too large for exact solving: {0}")]
    TooLarge(String),
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    /// Maximum number of branch nodes.
    pub max_nodes: u64,
    /// Maximum visible patterns per vertex.
    pub max_patterns: usize,
    /// Maximum number of assignments.
    pub max_assignments: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 1_000_000,
            max_patterns: 1 << 16,
            max_assignments: 1 << 20,
        }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub enum SolveStatus {
    Winning(Strategy),
    Losing,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub nodes: u64,
}

impl SolveResult {
    pub fn label(&self) -> &'static str {
        match self.status {
            SolveStatus::Winning(_) => "winning",
            SolveStatus::Losing => "losing",
            SolveStatus::Unknown => "unknown",
        }
    }

    pub fn is_winning(&self) -> bool {
        matches!(self.status, SolveStatus::Winning(_))
    }

    pub fn is_losing(&self) -> bool {
        matches!(self.status, SolveStatus::Losing)
    }

    /// JSON form: status, node count and, when winning, the table of each
    /// vertex indexed by pattern.
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = serde_json::json!({ "status": self.label(), "nodes": self.nodes });
        if let SolveStatus::Winning(s) = &self.status {
            if let crate::strategy::Rule::Table(t) = s.rule() {
                let tables: serde_json::Map<String, serde_json::Value> = s
                    .game()
                    .graph()
                    .names()
                    .iter()
                    .zip(t.tables())
                    .map(|(n, t)| (n.clone(), serde_json::json!(t)))
                    .collect();
                out["table"] = serde_json::Value::Object(tables);
            }
        }
        out
    }
}

struct OutOfBudget;

struct Search {
    n: usize,
    /// `entries[a * n + v]`: table entry that covers assignment `a` at `v`.
    entries: Vec<u32>,
    /// `colors[a * n + v]`: `α(v)`.
    colors: Vec<Color>,
    /// Owning vertex of each entry.
    owner: Vec<usize>,
    domain: Vec<u64>,
    trail: Vec<(u32, u64)>,
    nodes: u64,
    max_nodes: u64,
    // reusable buffer for the counting bound
    tally: Vec<u32>,
}

impl Search {
    fn build(game: &Game, budget: &SearchBudget) -> Result<Search, SolveError> {
        let n = game.len();
        if let Some(&h) = game.hatness().iter().find(|&&h| h > 64) {
            return Err(SolveError::TooLarge(format!("hatness {h} exceeds 64")));
        }
        let counts = TableRule::pattern_counts(game);
        let mut offsets = Vec::with_capacity(n);
        let mut owner = Vec::new();
        for (v, c) in counts.iter().enumerate() {
            let c = c.filter(|&c| c <= budget.max_patterns).ok_or_else(|| {
                SolveError::TooLarge(format!("vertex `{}` sees too many patterns", game.graph().name(v)))
            })?;
            offsets.push(owner.len());
            owner.extend(std::iter::repeat_n(v, c));
        }
        let total = game
            .color_space()
            .filter(|&t| t <= budget.max_assignments as u128)
            .ok_or_else(|| SolveError::TooLarge("too many assignments".into()))? as usize;
        let mut entries = Vec::with_capacity(total * n);
        let mut colors = Vec::with_capacity(total * n);
        for i in 0..total {
            let a = game.assignment_at(i as u128).expect("index in range");
            for (v, &offset) in offsets.iter().enumerate() {
                entries.push((offset + TableRule::pattern_index(game, v, a.colors())) as u32);
                colors.push(a.color(v));
            }
        }
        let domain = owner
            .iter()
            .map(|&v| {
                let h = game.hatness()[v];
                if h == 64 {
                    u64::MAX
                } else {
                    (1u64 << h) - 1
                }
            })
            .collect();
        let tally = vec![0; owner.len() * 64];
        Ok(Search {
            n,
            entries,
            colors,
            owner,
            domain,
            trail: Vec::new(),
            nodes: 0,
            max_nodes: budget.max_nodes,
            tally,
        })
    }

    fn assignments(&self) -> usize {
        self.colors.len().checked_div(self.n).unwrap_or(1)
    }

    fn set(&mut self, e: u32, dom: u64) {
        let old = self.domain[e as usize];
        if old != dom {
            self.trail.push((e, old));
            self.domain[e as usize] = dom;
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (e, old) = self.trail.pop().expect("trail");
            self.domain[e as usize] = old;
        }
    }

    /// `(satisfied, live options, last live vertex)` for assignment `a`.
    fn inspect(&self, a: usize) -> (bool, usize, usize) {
        let base = a * self.n;
        let mut live = 0;
        let mut last = 0;
        for v in 0..self.n {
            let dom = self.domain[self.entries[base + v] as usize];
            let bit = 1u64 << self.colors[base + v];
            if dom == bit {
                return (true, 0, v);
            }
            if dom & bit != 0 {
                live += 1;
                last = v;
            }
        }
        (false, live, last)
    }

    /// Unit propagation to a fixpoint. Returns false on conflict, otherwise
    /// the uncovered assignment with the fewest live options, if any.
    fn propagate(&mut self) -> Result<Option<usize>, ()> {
        loop {
            let mut changed = false;
            let mut best: Option<(usize, usize)> = None;
            for a in 0..self.assignments() {
                let (satisfied, live, last) = self.inspect(a);
                if satisfied {
                    continue;
                }
                match live {
                    0 => return Err(()),
                    1 => {
                        let base = a * self.n;
                        self.set(self.entries[base + last], 1u64 << self.colors[base + last]);
                        changed = true;
                    }
                    _ => {
                        if best.is_none_or(|(_, l)| live < l) {
                            best = Some((a, live));
                        }
                    }
                }
            }
            if !changed {
                return Ok(best.map(|(a, _)| a));
            }
        }
    }

    /// Counting bound over uncovered assignments.
    fn bound_holds(&mut self) -> bool {
        self.tally.iter_mut().for_each(|t| *t = 0);
        let mut uncovered = 0u64;
        for a in 0..self.assignments() {
            let (satisfied, _, _) = self.inspect(a);
            if satisfied {
                continue;
            }
            uncovered += 1;
            let base = a * self.n;
            for v in 0..self.n {
                let e = self.entries[base + v] as usize;
                let c = self.colors[base + v];
                if self.domain[e] & (1u64 << c) != 0 {
                    self.tally[e * 64 + c as usize] += 1;
                }
            }
        }
        let capacity: u64 = (0..self.owner.len())
            .filter(|&e| self.domain[e].count_ones() > 1)
            .map(|e| *self.tally[e * 64..e * 64 + 64].iter().max().expect("64 slots") as u64)
            .sum();
        capacity >= uncovered
    }

    fn search(&mut self) -> Result<bool, OutOfBudget> {
        let Ok(choice) = self.propagate() else {
            return Ok(false);
        };
        let Some(a) = choice else {
            return Ok(true);
        };
        if !self.bound_holds() {
            return Ok(false);
        }
        let base = a * self.n;
        for v in 0..self.n {
            let e = self.entries[base + v];
            let bit = 1u64 << self.colors[base + v];
            let dom = self.domain[e as usize];
            if dom & bit == 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(OutOfBudget);
            }
            let mark = self.trail.len();
            self.set(e, bit);
            if self.search()? {
                return Ok(true);
            }
            self.undo(mark);
            // this subtree is refuted: the entry must avoid this color
            self.set(e, dom & !bit);
        }
        Ok(false)
    }

    fn tables(&self, game: &Game) -> Vec<Vec<Color>> {
        let mut tables: Vec<Vec<Color>> = vec![Vec::new(); game.len()];
        for (e, &v) in self.owner.iter().enumerate() {
            tables[v].push(self.domain[e].trailing_zeros());
        }
        tables
    }
}

/// Decides whether `game` is winning by exhaustive search over strategy
/// tables. Returns `Unknown` when the node budget runs out.
pub fn solve_exact(game: &Game, budget: &SearchBudget) -> Result<SolveResult, SolveError> {
    let mut search = Search::build(game, budget)?;
    let status = match search.search() {
        Ok(true) => {
            let strategy = table_strategy(Arc::new(game.clone()), search.tables(game))
                .expect("solver tables have the right shape");
            SolveStatus::Winning(strategy)
        }
        Ok(false) => SolveStatus::Losing,
        Err(OutOfBudget) => SolveStatus::Unknown,
    };
    Ok(SolveResult {
        status,
        nodes: search.nodes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueCase {
    pub hatness: Vec<u32>,
    pub criterion_wins: bool,
    pub solver: &'static str,
    /// For winning cases: the solver's table passed exhaustive verification.
    pub table_verified: Option<bool>,
}

impl CliqueCase {
    pub fn agrees(&self) -> bool {
        let expected = if self.criterion_wins { "winning" } else { "losing" };
        self.solver == expected && self.table_verified != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueCheckReport {
    pub cases: Vec<CliqueCase>,
}

impl CliqueCheckReport {
    pub fn disagreements(&self) -> Vec<&CliqueCase> {
        self.cases.iter().filter(|c| !c.agrees()).collect()
    }
}

fn multisets(len: usize, max: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for h in min..=max {
        prefix.push(h);
        multisets(len, max, h, prefix, out);
        prefix.pop();
    }
}

/// Hatness multisets (non-decreasing lists) of size `n` over `1..=max`.
pub fn hatness_multisets(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    multisets(n, max, 1, &mut Vec::new(), &mut out);
    out
}

/// Compares the solver with the reciprocal-sum criterion on every complete
/// graph with `1..=max_n` vertices and hatnesses in `1..=max_hatness`.
pub fn check_against_clique_theorem(
    max_n: usize,
    max_hatness: u32,
    budget: &SearchBudget,
) -> Result<CliqueCheckReport, SolveError> {
    let mut cases = Vec::new();
    for n in 1..=max_n {
        for hatness in hatness_multisets(n, max_hatness) {
            let game = Game::clique(&hatness).expect("valid clique");
            let (num, den) = clique_criterion(&hatness).expect("small values");
            let result = solve_exact(&game, budget)?;
            let table_verified = match &result.status {
                SolveStatus::Winning(s) => Some(
                    verify_exhaustive(&game, s, &VerifyOptions::sequential())
                        .map(|r| r.wins())
                        .unwrap_or(false),
                ),
                _ => None,
            };
            cases.push(CliqueCase {
                hatness,
                criterion_wins: num >= den,
                solver: result.label(),
                table_verified,
            });
        }
    }
    Ok(CliqueCheckReport { cases })
}
