//! Winning/losing verdicts and the justification tree behind them.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Winning,
    Losing,
    Unknown,
}

/// What justified one node of a provenance tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Justification {
    /// Complete graph, decided by the reciprocal-sum criterion `Σ 1/a_i >= 1`.
    CliqueCriterion,
    /// The arithmetic trap strategy on the almost complete graph `K5-`.
    TrapLemma,
    /// Product of two winning games glued at a vertex.
    Product,
    /// Cone construction over a winning base game.
    Cone,
    /// Sum of two losing games at a vertex of hatness 2.
    SumLose,
    /// Winning passes down and losing passes up under majorization.
    Majorization,
    ExhaustiveCheck { checked: u128 },
    Solver { nodes: u64 },
    /// Sampled verification: evidence, not a proof.
    Sampled { samples: u64, seed: u64 },
}

impl Justification {
    pub fn label(&self) -> &'static str {
        match self {
            Justification::CliqueCriterion => "clique-criterion",
            Justification::TrapLemma => "trap-lemma",
            Justification::Product => "product",
            Justification::Cone => "cone",
            Justification::SumLose => "sum-lose",
            Justification::Majorization => "majorization",
            Justification::ExhaustiveCheck { .. } => "exhaustive-check",
            Justification::Solver { .. } => "solver",
            Justification::Sampled { .. } => "sampled (not a proof)",
        }
    }

    /// Leaves that establish a verdict on their own.
    pub fn is_base_fact(&self) -> bool {
        matches!(
            self,
            Justification::CliqueCriterion
                | Justification::ExhaustiveCheck { .. }
                | Justification::Solver { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    #[serde(flatten)]
    pub justification: Justification,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Provenance>,
}

impl Provenance {
    pub fn leaf(justification: Justification) -> Self {
        Provenance {
            justification,
            children: Vec::new(),
        }
    }

    pub fn node(justification: Justification, children: Vec<Provenance>) -> Self {
        Provenance {
            justification,
            children,
        }
    }

    /// Pre-order traversal.
    pub fn iter(&self) -> impl Iterator<Item = &Provenance> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    pub fn count(&self, label: &str) -> usize {
        self.iter().filter(|p| p.justification.label() == label).count()
    }

    /// Every leaf is a base fact.
    pub fn is_grounded(&self) -> bool {
        self.iter()
            .filter(|p| p.children.is_empty())
            .all(|p| p.justification.is_base_fact())
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        write!(f, "{:indent$}{}", "", self.justification.label(), indent = depth * 2)?;
        match &self.justification {
            Justification::ExhaustiveCheck { checked } => write!(f, " ({checked} assignments)")?,
            Justification::Solver { nodes } => write!(f, " ({nodes} nodes)")?,
            Justification::Sampled { samples, seed } => {
                write!(f, " ({samples} samples, seed {seed})")?
            }
            _ => {}
        }
        writeln!(f)?;
        for child in &self.children {
            child.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub provenance: Provenance,
}

impl Verdict {
    pub fn new(status: Status, provenance: Provenance) -> Self {
        Verdict { status, provenance }
    }

    pub fn is_winning(&self) -> bool {
        self.status == Status::Winning
    }

    pub fn is_losing(&self) -> bool {
        self.status == Status::Losing
    }
}
