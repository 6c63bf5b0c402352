//! Deterministic guessing strategies.
//!
//! A [`Strategy`] is an expression tree over a [`Game`]: leaves are closed-form
//! rules (lookup tables, the clique arithmetic strategy, the `K5-` trap
//! strategy) and internal nodes compose strategies of smaller games. Trees
//! are evaluated on demand; nothing is materialized into a full table.
//!
//! Evaluation computes the guesses of all vertices for one assignment at a
//! time. Composite nodes keep their intermediate sub-assignments in a
//! [`Scratch`] arena so that the hot verification loop does not allocate.

mod clique;
mod composite;
mod trap;

use std::sync::Arc;

use thiserror::Error;

use crate::game::{Assignment, Color, Game, GameError};

pub use clique::{clique_criterion, clique_strategy, CliqueArith};
pub use composite::{ConeRule, MajorizeRule, ProductRule};
pub(crate) use composite::PetalRule;
pub use trap::{
    k5minus_game, k5minus_strategy, parse_trap_table, validate_trap_table, CyclicInterval,
    TrapRow, TrapRule, TrapTable, Violation, TRAP_MODULUS, TRAP_TABLE_DATA,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("graph is not complete")]
    NotComplete,
    #[error("reciprocal sum of hatnesses {numerator}/{denominator} is below 1; the clique game is losing")]
    ConditionViolated { numerator: u128, denominator: u128 },
    #[error("hatness arithmetic overflows")]
    Overflow,
    #[error("game does not majorize the requested lower hatness")]
    NotMajorized,
    #[error("vertex `{vertex}` has {candidates} candidate colors for its target set (expected exactly 1)")]
    NotTransversal { vertex: String, candidates: usize },
    #[error("guess {guess} at `{vertex}` is not below its hatness {hatness}")]
    GuessOutOfRange {
        vertex: String,
        guess: Color,
        hatness: u32,
    },
    #[error("table for `{vertex}` has {got} entries, expected {expected}")]
    TableShape {
        vertex: String,
        expected: usize,
        got: usize,
    },
}

/// Error raised while evaluating a rule on raw colors.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum EvalError {
    #[error("vertex #{vertex} has {candidates} candidate colors")]
    NotTransversal { vertex: usize, candidates: usize },
}

/// One vertex's guess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guess {
    pub vertex: String,
    pub color: Color,
}

/// Reusable buffers for one evaluation of a rule tree.
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    pub(crate) bufs: Vec<Vec<Color>>,
    pub(crate) children: Vec<Scratch>,
}

#[derive(Debug)]
pub enum Rule {
    Table(TableRule),
    CliqueArith(CliqueArith),
    Trap(TrapRule),
    Product(ProductRule),
    Cone(ConeRule),
    Majorize(MajorizeRule),
}

impl Rule {
    pub fn kind(&self) -> &'static str {
        match self {
            Rule::Table(_) => "table",
            Rule::CliqueArith(_) => "clique-arith",
            Rule::Trap(_) => "k5minus-trap",
            Rule::Product(_) => "product",
            Rule::Cone(_) => "cone",
            Rule::Majorize(_) => "majorize",
        }
    }

    pub(crate) fn scratch(&self) -> Scratch {
        match self {
            Rule::Product(p) => p.scratch(),
            Rule::Cone(c) => c.scratch(),
            Rule::Majorize(m) => m.scratch(),
            Rule::Table(_) | Rule::CliqueArith(_) | Rule::Trap(_) => Scratch::default(),
        }
    }

    /// Writes every vertex's guess for `colors` into `out`.
    pub(crate) fn guess_all(
        &self,
        colors: &[Color],
        out: &mut [Color],
        scratch: &mut Scratch,
    ) -> Result<(), EvalError> {
        match self {
            Rule::Table(t) => {
                t.guess_all(colors, out);
                Ok(())
            }
            Rule::CliqueArith(c) => {
                c.guess_all(colors, out);
                Ok(())
            }
            Rule::Trap(t) => t.guess_all(colors, out),
            Rule::Product(p) => p.guess_all(colors, out, scratch),
            Rule::Cone(c) => c.guess_all(colors, out, scratch),
            Rule::Majorize(m) => m.guess_all(colors, out, scratch),
        }
    }
}

/// A strategy for a specific game.
#[derive(Clone, Debug)]
pub struct Strategy {
    game: Arc<Game>,
    rule: Arc<Rule>,
}

impl Strategy {
    pub(crate) fn from_parts(game: Arc<Game>, rule: Rule) -> Self {
        Strategy {
            game,
            rule: Arc::new(rule),
        }
    }

    pub fn game(&self) -> &Arc<Game> {
        &self.game
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// Guesses of every vertex, in vertex order.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<Vec<Guess>, StrategyError> {
        let game = &*self.game;
        let checked = Assignment::new(game, assignment.colors().to_vec())?;
        let mut eval = self.evaluator();
        let guesses = eval.guesses(checked.colors()).map_err(|e| self.describe(e))?;
        Ok(guesses
            .iter()
            .enumerate()
            .map(|(v, &color)| Guess {
                vertex: game.graph().name(v).to_string(),
                color,
            })
            .collect())
    }

    /// Guess of a single vertex.
    pub fn guess(&self, assignment: &Assignment, vertex: usize) -> Result<Color, StrategyError> {
        let mut eval = self.evaluator();
        let guesses = eval.guesses(assignment.colors()).map_err(|e| self.describe(e))?;
        Ok(guesses[vertex])
    }

    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator {
            strategy: self,
            scratch: self.rule.scratch(),
            out: vec![0; self.game.len()],
        }
    }

    pub(crate) fn describe(&self, e: EvalError) -> StrategyError {
        match e {
            EvalError::NotTransversal { vertex, candidates } => StrategyError::NotTransversal {
                vertex: self.game.graph().name(vertex).to_string(),
                candidates,
            },
        }
    }

    /// Same guess rule on the same graph with lower hatness; guesses that
    /// are not legal colors in `lower` are replaced by 0.
    pub fn adapt_majorized(&self, lower: Vec<u32>) -> Result<Strategy, StrategyError> {
        let lower_game = self.game.with_hatness(lower)?;
        if !crate::game::majorizes(&self.game, &lower_game) {
            return Err(StrategyError::NotMajorized);
        }
        let rule = MajorizeRule::new(self.clone(), lower_game.hatness().to_vec());
        Ok(Strategy::from_parts(Arc::new(lower_game), Rule::Majorize(rule)))
    }
}

/// Evaluates a strategy repeatedly without reallocating.
pub struct Evaluator<'a> {
    strategy: &'a Strategy,
    scratch: Scratch,
    out: Vec<Color>,
}

impl Evaluator<'_> {
    pub fn guesses(&mut self, colors: &[Color]) -> Result<&[Color], EvalError> {
        self.strategy
            .rule
            .guess_all(colors, &mut self.out, &mut self.scratch)?;
        Ok(&self.out)
    }

    /// Number of vertices that guess their own color.
    pub fn correct(&mut self, colors: &[Color]) -> Result<u32, EvalError> {
        let guesses = self.guesses(colors)?;
        Ok(guesses
            .iter()
            .zip(colors)
            .filter(|(g, c)| g == c)
            .count() as u32)
    }

    /// First vertex whose guess is not a legal color, if any.
    pub fn illegal_guess(&self) -> Option<usize> {
        let hatness = self.strategy.game.hatness();
        self.out.iter().zip(hatness).position(|(&g, &h)| g >= h)
    }
}

/// Explicit lookup-table strategy: each vertex maps the mixed-radix index of
/// its neighbors' colors (neighbors in vertex order, first least
/// significant) to a guess.
#[derive(Clone, Debug)]
pub struct TableRule {
    neighbors: Vec<Vec<usize>>,
    radices: Vec<Vec<u32>>,
    tables: Vec<Vec<Color>>,
}

impl TableRule {
    /// Number of visible patterns per vertex, `None` on overflow.
    pub fn pattern_counts(game: &Game) -> Vec<Option<usize>> {
        (0..game.len())
            .map(|v| {
                game.graph()
                    .neighbors(v)
                    .iter()
                    .try_fold(1usize, |acc, &u| acc.checked_mul(game.hatness()[u] as usize))
            })
            .collect()
    }

    /// Index of `v`'s visible pattern under `colors`.
    pub fn pattern_index(game: &Game, v: usize, colors: &[Color]) -> usize {
        let mut index = 0usize;
        for &u in game.graph().neighbors(v).iter().rev() {
            index = index * game.hatness()[u] as usize + colors[u] as usize;
        }
        index
    }

    pub fn tables(&self) -> &[Vec<Color>] {
        &self.tables
    }

    fn guess_all(&self, colors: &[Color], out: &mut [Color]) {
        for (v, slot) in out.iter_mut().enumerate() {
            let mut index = 0usize;
            for (&u, &r) in self.neighbors[v].iter().zip(&self.radices[v]).rev() {
                index = index * r as usize + colors[u] as usize;
            }
            *slot = self.tables[v][index];
        }
    }
}

/// Strategy given by explicit tables, one per vertex.
pub fn table_strategy(game: Arc<Game>, tables: Vec<Vec<Color>>) -> Result<Strategy, StrategyError> {
    let counts = TableRule::pattern_counts(&game);
    let mut neighbors = Vec::with_capacity(game.len());
    let mut radices = Vec::with_capacity(game.len());
    if tables.len() != game.len() {
        return Err(GameError::HatnessLength {
            expected: game.len(),
            got: tables.len(),
        }
        .into());
    }
    for (v, table) in tables.iter().enumerate() {
        let name = game.graph().name(v).to_string();
        let expected = counts[v].ok_or(StrategyError::Overflow)?;
        if table.len() != expected {
            return Err(StrategyError::TableShape {
                vertex: name,
                expected,
                got: table.len(),
            });
        }
        let h = game.hatness()[v];
        if let Some(&guess) = table.iter().find(|&&g| g >= h) {
            return Err(StrategyError::GuessOutOfRange {
                vertex: name,
                guess,
                hatness: h,
            });
        }
        let nb = game.graph().neighbors(v).to_vec();
        radices.push(nb.iter().map(|&u| game.hatness()[u]).collect());
        neighbors.push(nb);
    }
    Ok(Strategy::from_parts(
        game,
        Rule::Table(TableRule {
            neighbors,
            radices,
            tables,
        }),
    ))
}

/// Every vertex always guesses `color` (clamped to 0 where illegal).
pub fn constant_strategy(game: Arc<Game>, color: Color) -> Result<Strategy, StrategyError> {
    let counts = TableRule::pattern_counts(&game);
    let tables = counts
        .iter()
        .zip(game.hatness())
        .map(|(n, &h)| {
            let n = n.ok_or(StrategyError::Overflow)?;
            Ok(vec![if color < h { color } else { 0 }; n])
        })
        .collect::<Result<Vec<_>, StrategyError>>()?;
    table_strategy(game, tables)
}
