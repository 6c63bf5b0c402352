//! The trap strategy on `<K5-, [2, 3, 14, 14, 14]>`.
//!
//! Sages `A2, A3, A14, B14, C14`; every pair is adjacent except `B14`-`C14`.
//! With colors `a2, a3, a14, b, c` and all arithmetic mod 42, let
//! `S = 21*a2 + 14*a3 + 3*a14`. `B14` guesses the unique `b` with
//! `S + 3b` in `{0, 1, 2}` and `C14` the unique `c` with `S + 3c` in
//! `{0, 4, 8}`. The `A` sages see both traps, normalize so the `C` trap sits
//! at `{0, 4, 8}` (the `B` trap then sits at `{3d, 3d+1, 3d+2}` with
//! `d = (c - b) mod 14`), and each takes its target set from row `d` of the
//! trap table, shifted back by `-3c`.

use std::fmt;
use std::sync::Arc;

use super::{EvalError, Rule, Strategy};
use crate::game::{Color, Game, Graph};

pub const TRAP_MODULUS: u32 = 42;

/// The shipped table: `d, A2-start, A3-start, A14 x3` per line.
pub const TRAP_TABLE_DATA: &str = include_str!("../../data/trap_table.txt");

const B_TRAP: [u32; 3] = [0, 1, 2];
const C_TRAP: [u32; 3] = [0, 4, 8];

/// Cyclic interval `[start, start + len - 1]` in `Z_42`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CyclicInterval {
    pub start: u32,
    pub len: u32,
}

impl CyclicInterval {
    pub fn contains(&self, x: u32) -> bool {
        (x + TRAP_MODULUS - self.start % TRAP_MODULUS) % TRAP_MODULUS < self.len
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).map(move |k| (self.start + k) % TRAP_MODULUS)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapRow {
    /// The `B` trap sits at `{3d, 3d+1, 3d+2}`.
    pub b_position: u32,
    pub a2: CyclicInterval,
    pub a3: CyclicInterval,
    pub a14: Vec<u32>,
}

impl TrapRow {
    fn b_trap(&self) -> [u32; 3] {
        B_TRAP.map(|x| (x + 3 * self.b_position) % TRAP_MODULUS)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrapTable {
    pub rows: Vec<TrapRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    RowCount(usize),
    MissingRow(u32),
    BadLength { row: usize, set: &'static str, len: u32, expected: u32 },
    OutOfRange { row: usize, value: u32 },
    Overlap { row: usize, first: &'static str, second: &'static str, residue: u32 },
    NotTransversal { row: usize },
    Uncovered { row: usize, residues: Vec<u32> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RowCount(n) => write!(f, "table has {n} rows, expected 14"),
            Violation::MissingRow(d) => write!(f, "no row for B-trap position {d}"),
            Violation::BadLength { row, set, len, expected } => {
                write!(f, "row {row}: {set} has length {len}, expected {expected}")
            }
            Violation::OutOfRange { row, value } => write!(f, "row {row}: value {value} is not below 42"),
            Violation::Overlap { row, first, second, residue } => {
                write!(f, "row {row}: {first} and {second} overlap at {residue}")
            }
            Violation::NotTransversal { row } => write!(f, "row {row}: A14 not a mod-3 transversal"),
            Violation::Uncovered { row, residues } => {
                write!(f, "row {row}: covering fails, uncovered {residues:?}")
            }
        }
    }
}

/// Parses the text format of [`TRAP_TABLE_DATA`]. Blank lines and `#`
/// comments are skipped.
pub fn parse_trap_table(text: &str) -> Result<TrapTable, String> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields = line
            .split(',')
            .map(|f| f.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        let [d, a2, a3, x, y, z] = fields[..] else {
            return Err(format!("line {}: expected 6 fields, got {}", lineno + 1, fields.len()));
        };
        rows.push(TrapRow {
            b_position: d,
            a2: CyclicInterval { start: a2, len: 21 },
            a3: CyclicInterval { start: a3, len: 14 },
            a14: vec![x, y, z],
        });
    }
    Ok(TrapTable { rows })
}

impl TrapTable {
    pub fn shipped() -> TrapTable {
        parse_trap_table(TRAP_TABLE_DATA).expect("shipped trap table parses")
    }
}

/// Checks every row: lengths 21/14/3, values in range, pairwise disjoint
/// `A` sets, `A14` hitting each residue class mod 3 once, and
/// `A2 ∪ A3 ∪ A14 ∪ B ∪ C = Z_42`.
pub fn validate_trap_table(table: &TrapTable) -> Vec<Violation> {
    let mut out = Vec::new();
    if table.rows.len() != 14 {
        out.push(Violation::RowCount(table.rows.len()));
    }
    for d in 0..14 {
        if !table.rows.iter().any(|r| r.b_position == d) {
            out.push(Violation::MissingRow(d));
        }
    }
    for (row, r) in table.rows.iter().enumerate() {
        for (set, len, expected) in [("A2", r.a2.len, 21), ("A3", r.a3.len, 14), ("A14", r.a14.len() as u32, 3)] {
            if len != expected {
                out.push(Violation::BadLength { row, set, len, expected });
            }
        }
        for &value in [r.a2.start, r.a3.start, r.b_position * 3]
            .iter()
            .chain(&r.a14)
        {
            if value >= TRAP_MODULUS {
                out.push(Violation::OutOfRange { row, value });
            }
        }
        let a2: Vec<u32> = r.a2.elements().collect();
        let a3: Vec<u32> = r.a3.elements().collect();
        let a14: Vec<u32> = r.a14.iter().map(|x| x % TRAP_MODULUS).collect();
        for (first, xs, second, ys) in [("A2", &a2, "A3", &a3), ("A2", &a2, "A14", &a14), ("A3", &a3, "A14", &a14)] {
            if let Some(&residue) = xs.iter().find(|x| ys.contains(x)) {
                out.push(Violation::Overlap { row, first, second, residue });
            }
        }
        let mut classes: Vec<u32> = a14.iter().map(|x| x % 3).collect();
        classes.sort_unstable();
        classes.dedup();
        if a14.len() != 3 || classes.len() != 3 {
            out.push(Violation::NotTransversal { row });
        }
        let mut covered = [false; TRAP_MODULUS as usize];
        for x in a2.iter().chain(&a3).chain(&a14).chain(&r.b_trap()).chain(&C_TRAP) {
            covered[*x as usize] = true;
        }
        let residues: Vec<u32> = (0..TRAP_MODULUS).filter(|&x| !covered[x as usize]).collect();
        if !residues.is_empty() {
            out.push(Violation::Uncovered { row, residues });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct TrapRule {
    by_position: Vec<Option<TrapRow>>,
}

const A2: usize = 0;
const A3: usize = 1;
const A14: usize = 2;
const B14: usize = 3;
const C14: usize = 4;

/// The unique `x` in `0..count` with `(base + step*x) mod 42` in the set.
fn unique_candidate(
    vertex: usize,
    base: u32,
    step: u32,
    count: u32,
    in_set: impl Fn(u32) -> bool,
) -> Result<Color, EvalError> {
    let mut found = None;
    let mut candidates = 0;
    for x in 0..count {
        if in_set((base + step * x) % TRAP_MODULUS) {
            candidates += 1;
            found.get_or_insert(x);
        }
    }
    match (candidates, found) {
        (1, Some(x)) => Ok(x),
        _ => Err(EvalError::NotTransversal { vertex, candidates }),
    }
}

impl TrapRule {
    fn new(table: &TrapTable) -> Self {
        let mut by_position = vec![None; 14];
        for row in &table.rows {
            if let Some(slot) = by_position.get_mut(row.b_position as usize) {
                slot.get_or_insert_with(|| row.clone());
            }
        }
        TrapRule { by_position }
    }

    pub(super) fn guess_all(&self, colors: &[Color], out: &mut [Color]) -> Result<(), EvalError> {
        let m = TRAP_MODULUS;
        let (a2, a3, a14, b, c) = (colors[A2], colors[A3], colors[A14], colors[B14], colors[C14]);
        let s = (21 * a2 + 14 * a3 + 3 * a14) % m;
        out[B14] = unique_candidate(B14, s, 3, 14, |x| B_TRAP.contains(&x))?;
        out[C14] = unique_candidate(C14, s, 3, 14, |x| C_TRAP.contains(&x))?;

        let d = (c + 14 - b) % 14;
        let row = self
            .by_position
            .get(d as usize)
            .and_then(Option::as_ref)
            .ok_or(EvalError::NotTransversal { vertex: A2, candidates: 0 })?;
        // back to normalized coordinates: add 3c
        let shift = 3 * c;
        let without_a2 = (s + m - 21 * a2) % m;
        let without_a3 = (s + m - 14 * a3) % m;
        let without_a14 = (s + m - 3 * a14) % m;
        out[A2] = unique_candidate(A2, without_a2 + shift, 21, 2, |x| row.a2.contains(x))?;
        out[A3] = unique_candidate(A3, without_a3 + shift, 14, 3, |x| row.a3.contains(x))?;
        out[A14] = unique_candidate(A14, without_a14 + shift, 3, 14, |x| row.a14.contains(&x))?;
        Ok(())
    }
}

/// `<K5-, [2, 3, 14, 14, 14]>` with vertices `A2, A3, A14, B14, C14` and
/// no edge `B14`-`C14`.
pub fn k5minus_game() -> Game {
    let names = ["A2", "A3", "A14", "B14", "C14"];
    let edges = (0..5)
        .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
        .filter(|&(u, v)| (u, v) != (B14, C14));
    let graph = Graph::from_index_edges(names.iter().map(|s| s.to_string()).collect(), edges)
        .expect("static graph");
    Game::new(graph, vec![2, 3, 14, 14, 14]).expect("static game")
}

/// The trap strategy driven by `table` (the shipped one unless testing).
pub fn k5minus_strategy_with_table(table: &TrapTable) -> (Arc<Game>, Strategy) {
    let game = Arc::new(k5minus_game());
    let strategy = Strategy::from_parts(game.clone(), Rule::Trap(TrapRule::new(table)));
    (game, strategy)
}

pub fn k5minus_strategy() -> (Arc<Game>, Strategy) {
    k5minus_strategy_with_table(&TrapTable::shipped())
}
