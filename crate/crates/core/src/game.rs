//! Graphs, hatness functions, games and hat assignments.
//!
//! Vertices are identified by name but stored by index. The vertex order of a
//! [`Graph`] is fixed at construction and defines the mixed-radix digit order
//! used to enumerate assignments: the first vertex is the least significant
//! digit.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::verdict::{Status, Verdict};

/// A hat color: a residue in `0..h(v)`.
pub type Color = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("hatness of `{0}` must be at least 1")]
    ZeroHatness(String),
    #[error("hatness list has {got} entries but the graph has {expected} vertices")]
    HatnessLength { expected: usize, got: usize },
    #[error("color {color} at `{vertex}` is not below its hatness {hatness}")]
    ColorOutOfRange {
        vertex: String,
        color: Color,
        hatness: u32,
    },
    #[error("assignment has {got} colors but the game has {expected} vertices")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment index {index} out of range (color space {size})")]
    IndexOutOfRange { index: u128, size: u128 },
}

/// A simple undirected graph with an ordered vertex list.
#[derive(Clone, Debug)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from vertex names and edges given by name.
    /// Parallel edges are merged.
    pub fn new<S, E>(names: Vec<S>, edges: E) -> Result<Self, GameError>
    where
        S: Into<String>,
        E: IntoIterator<Item = (S, S)>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GameError::DuplicateVertex(name.clone()));
            }
        }
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let u = *index.get(&a).ok_or_else(|| GameError::UnknownVertex(a.clone()))?;
            let v = *index.get(&b).ok_or(GameError::UnknownVertex(b))?;
            pairs.push((u, v));
        }
        Self::from_indices(names, index, pairs)
    }

    /// Builds a graph from names and index pairs.
    pub fn from_index_edges(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GameError> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GameError::DuplicateVertex(name.clone()));
            }
        }
        Self::from_indices(names, index, edges.into_iter().collect())
    }

    fn from_indices(
        names: Vec<String>,
        index: HashMap<String, usize>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self, GameError> {
        let n = names.len();
        let mut set = BTreeSet::new();
        for (u, v) in pairs {
            if u >= n || v >= n {
                return Err(GameError::UnknownVertex(format!("#{}", u.max(v))));
            }
            if u == v {
                return Err(GameError::SelfLoop(names[u].clone()));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &set {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            names,
            index,
            adjacency,
            edges: set.into_iter().collect(),
        })
    }

    /// The complete graph on the given names.
    pub fn complete(names: Vec<String>) -> Result<Self, GameError> {
        let n = names.len();
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_index_edges(names, edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Neighbors of `v`, sorted by vertex order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.len()
    }

    fn named_edge_set(&self) -> BTreeSet<(&str, &str)> {
        self.edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.name(u), self.name(v));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect()
    }

    /// Same vertex names and the same edges, regardless of vertex order.
    pub fn same_structure(&self, other: &Graph) -> bool {
        self.len() == other.len()
            && self.names.iter().all(|n| other.index.contains_key(n))
            && self.named_edge_set() == other.named_edge_set()
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// A visibility graph together with a hatness function aligned to its
/// vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    graph: Graph,
    hatness: Vec<u32>,
}

impl Game {
    pub fn new(graph: Graph, hatness: Vec<u32>) -> Result<Self, GameError> {
        if hatness.len() != graph.len() {
            return Err(GameError::HatnessLength {
                expected: graph.len(),
                got: hatness.len(),
            });
        }
        if let Some(v) = hatness.iter().position(|&h| h == 0) {
            return Err(GameError::ZeroHatness(graph.name(v).to_string()));
        }
        Ok(Game { graph, hatness })
    }

    /// Complete graph on `v0..v(n-1)` with the given hatnesses.
    pub fn clique(hatness: &[u32]) -> Result<Self, GameError> {
        let names = (0..hatness.len()).map(|i| format!("v{i}")).collect();
        Game::new(Graph::complete(names)?, hatness.to_vec())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn hatness(&self) -> &[u32] {
        &self.hatness
    }

    pub fn hatness_of(&self, name: &str) -> Option<u32> {
        self.graph.index_of(name).map(|v| self.hatness[v])
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Same graph, different hatness.
    pub fn with_hatness(&self, hatness: Vec<u32>) -> Result<Self, GameError> {
        Game::new(self.graph.clone(), hatness)
    }

    /// Number of hat assignments, `None` if it does not fit in 128 bits.
    pub fn color_space(&self) -> Option<u128> {
        self.hatness
            .iter()
            .try_fold(1u128, |acc, &h| acc.checked_mul(h as u128))
    }

    pub fn min_hatness(&self) -> Option<u32> {
        self.hatness.iter().copied().min()
    }

    /// All hatness values sorted non-decreasingly.
    pub fn value_list(&self) -> Vec<u32> {
        let mut values = self.hatness.clone();
        values.sort_unstable();
        values
    }

    /// The assignment with mixed-radix index `index` (first vertex least
    /// significant).
    pub fn assignment_at(&self, index: u128) -> Result<Assignment, GameError> {
        if let Some(size) = self.color_space() {
            if index >= size {
                return Err(GameError::IndexOutOfRange { index, size });
            }
        }
        let mut rest = index;
        let colors = self
            .hatness
            .iter()
            .map(|&h| {
                let digit = (rest % h as u128) as Color;
                rest /= h as u128;
                digit
            })
            .collect();
        Ok(Assignment { colors })
    }

    /// Inverse of [`Game::assignment_at`].
    pub fn index_of_assignment(&self, assignment: &Assignment) -> Option<u128> {
        let mut index = 0u128;
        for (&c, &h) in assignment.colors.iter().zip(&self.hatness).rev() {
            index = index.checked_mul(h as u128)?.checked_add(c as u128)?;
        }
        Some(index)
    }
}

/// `g1` majorizes `g2`: same graph and `h1(v) >= h2(v)` everywhere.
pub fn majorizes(g1: &Game, g2: &Game) -> bool {
    if !g1.graph.same_structure(&g2.graph) {
        return false;
    }
    g1.graph
        .names()
        .iter()
        .zip(&g1.hatness)
        .all(|(name, &h1)| g2.hatness_of(name).is_some_and(|h2| h1 >= h2))
}

/// Lower bound on the hat guessing number implied by a verdict on `game`.
pub fn hg_lower_bound(verdict: &Verdict, game: &Game) -> Option<u32> {
    match verdict.status {
        Status::Winning => game.min_hatness(),
        _ => None,
    }
}

/// One hat color per vertex, aligned to the game's vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    colors: Vec<Color>,
}

impl Assignment {
    pub fn new(game: &Game, colors: Vec<Color>) -> Result<Self, GameError> {
        if colors.len() != game.len() {
            return Err(GameError::AssignmentLength {
                expected: game.len(),
                got: colors.len(),
            });
        }
        for (v, (&c, &h)) in colors.iter().zip(game.hatness()).enumerate() {
            if c >= h {
                return Err(GameError::ColorOutOfRange {
                    vertex: game.graph().name(v).to_string(),
                    color: c,
                    hatness: h,
                });
            }
        }
        Ok(Assignment { colors })
    }

    /// Builds an assignment from `(name, color)` pairs covering every vertex.
    pub fn from_named<'a>(
        game: &Game,
        pairs: impl IntoIterator<Item = (&'a str, Color)>,
    ) -> Result<Self, GameError> {
        let mut colors = vec![None; game.len()];
        for (name, c) in pairs {
            let v = game
                .graph()
                .index_of(name)
                .ok_or_else(|| GameError::UnknownVertex(name.to_string()))?;
            colors[v] = Some(c);
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(v, c)| c.ok_or_else(|| GameError::UnknownVertex(game.graph().name(v).into())))
            .collect::<Result<Vec<_>, _>>()?;
        Assignment::new(game, colors)
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    /// `(name, color)` pairs in vertex order.
    pub fn named<'a>(&'a self, game: &'a Game) -> impl Iterator<Item = (&'a str, Color)> + 'a {
        game.graph()
            .names()
            .iter()
            .map(String::as_str)
            .zip(self.colors.iter().copied())
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "game with {} vertices, {} edges, values {:?}",
            self.len(),
            self.graph.edge_count(),
            self.value_list()
        )
    }
}
