//! Composition of games with their strategies, verdicts and embeddings.
//!
//! Naming under composition is deterministic: a product keeps the left
//! operand's name for the glued vertex and prefixes the other vertices with
//! `L/` and `R/`; a cone keeps petal 0's name for the apex and prefixes
//! every other petal vertex with `<petal index>/`.

use std::sync::Arc;

use thiserror::Error;

use crate::embedding::{self, PetalEmbedding, RotationSystem};
use crate::game::{Game, GameError, Graph};
use crate::strategy::{
    clique_criterion, clique_strategy, k5minus_strategy, ConeRule, PetalRule, ProductRule, Rule,
    Strategy, StrategyError,
};
use crate::verdict::{Justification, Provenance, Status, Verdict};
use crate::verify::{verify_exhaustive, VerifyOptions};

/// Brute-force embedding search limit for leaf graphs.
const LEAF_EMBEDDING_LIMIT: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("product requires winning factors")]
    ProductNotWinning,
    #[error("cone requires a winning base and winning petals")]
    ConeNotWinning,
    #[error("sum-lose requires losing summands")]
    SumNotLosing,
    #[error("sum-lose requires hatness 2 at the second summand's glued vertex, found {0}")]
    SumHatness(u32),
    #[error("vertex `{0}` not found")]
    UnknownVertex(String),
    #[error("base has {base} vertices but {petals} petals were given")]
    PetalCount { base: usize, petals: usize },
    #[error("petal {petal}: apex `{o}` and `{a}` must be distinct adjacent vertices")]
    PetalNotAdjacent { petal: usize, o: String, a: String },
    #[error("petal apex hatnesses differ: {0} vs {1}")]
    ApexHatness(u32, u32),
    #[error("hatness product overflows")]
    Overflow,
    #[error("{0}")]
    Contract(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// A game together with what is known about it.
#[derive(Clone, Debug)]
pub struct ComposedGame {
    pub game: Arc<Game>,
    /// Present iff the verdict is winning.
    pub strategy: Option<Strategy>,
    pub verdict: Verdict,
    /// Plane embedding emitted by the builder, when it has one.
    pub rotation: Option<RotationSystem>,
}

impl ComposedGame {
    fn winning(strategy: Strategy, provenance: Provenance, rotation: Option<RotationSystem>) -> Self {
        ComposedGame {
            game: strategy.game().clone(),
            strategy: Some(strategy),
            verdict: Verdict::new(Status::Winning, provenance),
            rotation,
        }
    }

    pub fn is_winning(&self) -> bool {
        self.verdict.is_winning() && self.strategy.is_some()
    }

    fn vertex(&self, name: &str) -> Result<usize, ConstructError> {
        self.game
            .graph()
            .index_of(name)
            .ok_or_else(|| ConstructError::UnknownVertex(name.to_string()))
    }
}

/// One petal of a cone: a game with its apex `O` and the neighbor `A` that
/// stands for a base vertex.
#[derive(Clone, Debug)]
pub struct PetalSpec {
    pub petal: ComposedGame,
    pub o: String,
    pub a: String,
}

fn leaf_rotation(graph: &Graph) -> Option<RotationSystem> {
    embedding::find_planar_rotation(graph, LEAF_EMBEDDING_LIMIT)
}

/// Complete graph with the given names and hatnesses, decided by the
/// reciprocal-sum criterion.
pub fn clique_named(names: &[&str], hatness: &[u32]) -> Result<ComposedGame, ConstructError> {
    let graph = Graph::complete(names.iter().map(|s| s.to_string()).collect())?;
    let game = Arc::new(Game::new(graph, hatness.to_vec())?);
    let rotation = leaf_rotation(game.graph());
    let (num, den) = clique_criterion(hatness).ok_or(ConstructError::Overflow)?;
    let provenance = Provenance::leaf(Justification::CliqueCriterion);
    if num >= den {
        Ok(ComposedGame::winning(clique_strategy(game)?, provenance, rotation))
    } else {
        Ok(ComposedGame {
            game,
            strategy: None,
            verdict: Verdict::new(Status::Losing, provenance),
            rotation,
        })
    }
}

/// Complete graph on `v0..v(n-1)`.
pub fn clique(hatness: &[u32]) -> Result<ComposedGame, ConstructError> {
    let names: Vec<String> = (0..hatness.len()).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    clique_named(&refs, hatness)
}

/// `<K5-, [2, 3, 14, 14, 14]>` with the trap strategy, confirmed by an
/// exhaustive sweep of its 16464 assignments.
pub fn k5minus() -> Result<ComposedGame, ConstructError> {
    let (game, strategy) = k5minus_strategy();
    let report = verify_exhaustive(&game, &strategy, &VerifyOptions::sequential())
        .map_err(|e| ConstructError::Contract(e.to_string()))?;
    if !report.wins() {
        return Err(ConstructError::Contract("trap strategy failed its sweep".into()));
    }
    let provenance = Provenance::node(
        Justification::TrapLemma,
        vec![Provenance::leaf(Justification::ExhaustiveCheck {
            checked: report.checked,
        })],
    );
    let rotation = leaf_rotation(game.graph());
    Ok(ComposedGame::winning(strategy, provenance, rotation))
}

struct Glued {
    game: Game,
    right_map: Vec<usize>,
}

fn glue(
    g1: &Game,
    a1: usize,
    g2: &Game,
    a2: usize,
    glued_hatness: u32,
) -> Result<Glued, ConstructError> {
    let (n1, n2) = (g1.len(), g2.len());
    let mut names = Vec::with_capacity(n1 + n2 - 1);
    let mut hatness = Vec::with_capacity(n1 + n2 - 1);
    for v in 0..n1 {
        names.push(if v == a1 {
            g1.graph().name(v).to_string()
        } else {
            format!("L/{}", g1.graph().name(v))
        });
        hatness.push(g1.hatness()[v]);
    }
    hatness[a1] = glued_hatness;
    let mut right_map = Vec::with_capacity(n2);
    for v in 0..n2 {
        if v == a2 {
            right_map.push(a1);
        } else {
            right_map.push(names.len());
            names.push(format!("R/{}", g2.graph().name(v)));
            hatness.push(g2.hatness()[v]);
        }
    }
    let edges = g1
        .graph()
        .edges()
        .iter()
        .copied()
        .chain(g2.graph().edges().iter().map(|&(u, v)| (right_map[u], right_map[v])));
    let graph = Graph::from_index_edges(names, edges)?;
    Ok(Glued {
        game: Game::new(graph, hatness)?,
        right_map,
    })
}

/// Product of two winning games glued at `a1 ~ a2`; the glued vertex gets
/// hatness `h1(a1) * h2(a2)`.
pub fn product(
    g1: &ComposedGame,
    a1: &str,
    g2: &ComposedGame,
    a2: &str,
) -> Result<ComposedGame, ConstructError> {
    let (i1, i2) = (g1.vertex(a1)?, g2.vertex(a2)?);
    let (Some(s1), Some(s2)) = (&g1.strategy, &g2.strategy) else {
        return Err(ConstructError::ProductNotWinning);
    };
    if !g1.verdict.is_winning() || !g2.verdict.is_winning() {
        return Err(ConstructError::ProductNotWinning);
    }
    let h = g1.game.hatness()[i1]
        .checked_mul(g2.game.hatness()[i2])
        .ok_or(ConstructError::Overflow)?;
    let glued = glue(&g1.game, i1, &g2.game, i2, h)?;
    let game = Arc::new(glued.game);
    let rotation = match (&g1.rotation, &g2.rotation) {
        (Some(r1), Some(r2)) => Some(embedding::product_rotation(
            (g1.game.graph(), r1),
            (g2.game.graph(), r2),
            i1,
            i2,
            &glued.right_map,
            game.len(),
        )),
        _ => None,
    };
    let rule = ProductRule::new(s1.clone(), s2.clone(), i1, i2, glued.right_map);
    let strategy = Strategy::from_parts(game, Rule::Product(rule));
    let provenance = Provenance::node(
        Justification::Product,
        vec![g1.verdict.provenance.clone(), g2.verdict.provenance.clone()],
    );
    Ok(ComposedGame::winning(strategy, provenance, rotation))
}

/// `k` copies of `g` multiplied at `vertex`.
pub fn product_power(g: &ComposedGame, vertex: &str, k: usize) -> Result<ComposedGame, ConstructError> {
    if k == 0 {
        return Err(ConstructError::Contract("need at least one copy".into()));
    }
    let mut acc = g.clone();
    for _ in 1..k {
        acc = product(&acc, vertex, g, vertex)?;
    }
    Ok(acc)
}

/// Cone over `base`: petal `i`'s `A` vertex stands for base vertex `i`,
/// all apexes are identified into one vertex `O`, and base edges are laid
/// between the `A` vertices. `A_i` gets hatness `h_i(A_i) * h(A_i)`.
pub fn cone(base: &ComposedGame, petals: &[PetalSpec]) -> Result<ComposedGame, ConstructError> {
    let k = base.game.len();
    if petals.len() != k {
        return Err(ConstructError::PetalCount {
            base: k,
            petals: petals.len(),
        });
    }
    let Some(base_strategy) = base.strategy.as_ref().filter(|_| base.verdict.is_winning()) else {
        return Err(ConstructError::ConeNotWinning);
    };
    let mut locals = Vec::with_capacity(k);
    for (i, p) in petals.iter().enumerate() {
        let o = p.petal.vertex(&p.o)?;
        let a = p.petal.vertex(&p.a)?;
        if o == a || !p.petal.game.graph().has_edge(o, a) {
            return Err(ConstructError::PetalNotAdjacent {
                petal: i,
                o: p.o.clone(),
                a: p.a.clone(),
            });
        }
        if !p.petal.is_winning() {
            return Err(ConstructError::ConeNotWinning);
        }
        locals.push((o, a));
    }
    let apex_hatness = petals[0].petal.game.hatness()[locals[0].0];
    for (p, &(o, _)) in petals.iter().zip(&locals) {
        let h = p.petal.game.hatness()[o];
        if h != apex_hatness {
            return Err(ConstructError::ApexHatness(apex_hatness, h));
        }
    }

    let mut names = vec![petals[0].o.clone()];
    let mut hatness = vec![apex_hatness];
    let mut maps = Vec::with_capacity(k);
    for (i, (p, &(o, a))) in petals.iter().zip(&locals).enumerate() {
        let g = &p.petal.game;
        let mut map = Vec::with_capacity(g.len());
        for v in 0..g.len() {
            if v == o {
                map.push(0);
                continue;
            }
            map.push(names.len());
            names.push(format!("{i}/{}", g.graph().name(v)));
            let h = if v == a {
                g.hatness()[v]
                    .checked_mul(base.game.hatness()[i])
                    .ok_or(ConstructError::Overflow)?
            } else {
                g.hatness()[v]
            };
            hatness.push(h);
        }
        maps.push(map);
    }
    let a_global: Vec<usize> = maps.iter().zip(&locals).map(|(m, &(_, a))| m[a]).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (p, map) in petals.iter().zip(&maps) {
        edges.extend(p.petal.game.graph().edges().iter().map(|&(u, v)| (map[u], map[v])));
    }
    edges.extend(base.game.graph().edges().iter().map(|&(u, v)| (a_global[u], a_global[v])));
    let game = Arc::new(Game::new(Graph::from_index_edges(names, edges)?, hatness)?);

    let rotation = base.rotation.as_ref().and_then(|br| {
        let embeddings = petals
            .iter()
            .zip(&locals)
            .zip(&maps)
            .map(|((p, &(o, a)), map)| {
                p.petal.rotation.as_ref().map(|rotation| PetalEmbedding {
                    rotation,
                    o_local: o,
                    a_local: a,
                    map,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        embedding::cone_rotation((base.game.graph(), br), &a_global, &embeddings, game.len())
    });

    let petal_rules = petals
        .iter()
        .zip(&locals)
        .zip(maps)
        .map(|((p, &(o, a)), map)| PetalRule {
            strategy: p.petal.strategy.clone().expect("winning petal"),
            o_local: o,
            a_local: a,
            map,
        })
        .collect();
    let rule = ConeRule::new(base_strategy.clone(), petal_rules);
    let strategy = Strategy::from_parts(game, Rule::Cone(rule));
    let mut children = vec![base.verdict.provenance.clone()];
    children.extend(petals.iter().map(|p| p.petal.verdict.provenance.clone()));
    Ok(ComposedGame::winning(
        strategy,
        Provenance::node(Justification::Cone, children),
        rotation,
    ))
}

/// Sum of two losing games at `a1 ~ a2` where `h2(a2) = 2`; the glued
/// vertex keeps `h1(a1)` and the result is losing.
pub fn sum_lose(
    g1: &ComposedGame,
    a1: &str,
    g2: &ComposedGame,
    a2: &str,
) -> Result<ComposedGame, ConstructError> {
    let (i1, i2) = (g1.vertex(a1)?, g2.vertex(a2)?);
    if !g1.verdict.is_losing() || !g2.verdict.is_losing() {
        return Err(ConstructError::SumNotLosing);
    }
    let h2 = g2.game.hatness()[i2];
    if h2 != 2 {
        return Err(ConstructError::SumHatness(h2));
    }
    let h1 = g1.game.hatness()[i1];
    if h1 < 2 {
        return Err(ConstructError::Contract(format!(
            "sum-lose requires hatness at least 2 at the first summand's glued vertex, found {h1}"
        )));
    }
    let glued = glue(&g1.game, i1, &g2.game, i2, h1)?;
    let rotation = match (&g1.rotation, &g2.rotation) {
        (Some(r1), Some(r2)) => Some(embedding::product_rotation(
            (g1.game.graph(), r1),
            (g2.game.graph(), r2),
            i1,
            i2,
            &glued.right_map,
            glued.game.len(),
        )),
        _ => None,
    };
    Ok(ComposedGame {
        game: Arc::new(glued.game),
        strategy: None,
        verdict: Verdict::new(
            Status::Losing,
            Provenance::node(
                Justification::SumLose,
                vec![g1.verdict.provenance.clone(), g2.verdict.provenance.clone()],
            ),
        ),
        rotation,
    })
}

/// Same graph with lower hatness. A winning game stays winning through the
/// majorization adapter; anything else becomes unknown.
pub fn lower(g: &ComposedGame, hatness: Vec<u32>) -> Result<ComposedGame, ConstructError> {
    if hatness.as_slice() == g.game.hatness() {
        return Ok(g.clone());
    }
    let provenance = Provenance::node(Justification::Majorization, vec![g.verdict.provenance.clone()]);
    match &g.strategy {
        Some(s) if g.verdict.is_winning() => {
            let adapted = s.adapt_majorized(hatness)?;
            Ok(ComposedGame::winning(adapted, provenance, g.rotation.clone()))
        }
        _ => {
            let lowered = g.game.with_hatness(hatness)?;
            if !crate::game::majorizes(&g.game, &lowered) {
                return Err(StrategyError::NotMajorized.into());
            }
            Ok(ComposedGame {
                game: Arc::new(lowered),
                strategy: None,
                verdict: Verdict::new(Status::Unknown, provenance),
                rotation: g.rotation.clone(),
            })
        }
    }
}

/// A losing game stays losing when hatness is raised.
pub fn raise(g: &ComposedGame, hatness: Vec<u32>) -> Result<ComposedGame, ConstructError> {
    if !g.verdict.is_losing() {
        return Err(ConstructError::Contract("only losing games can be raised".into()));
    }
    let raised = g.game.with_hatness(hatness)?;
    if !crate::game::majorizes(&raised, &g.game) {
        return Err(StrategyError::NotMajorized.into());
    }
    Ok(ComposedGame {
        game: Arc::new(raised),
        strategy: None,
        verdict: Verdict::new(
            Status::Losing,
            Provenance::node(Justification::Majorization, vec![g.verdict.provenance.clone()]),
        ),
        rotation: g.rotation.clone(),
    })
}

fn windmill_names(k: usize) -> Vec<String> {
    std::iter::once("A".to_string())
        .chain((1..k).map(|i| format!("v{i}")))
        .collect()
}

/// `W_{k,n}`: `n` copies of `<K_k, h(A)=2, rest 2k-2>` multiplied at the
/// axis `A`, lowered to constant `2k-2` when `2^n >= 2k-2`.
pub fn windmill(k: usize, n: usize) -> Result<ComposedGame, ConstructError> {
    if k < 2 {
        return Err(ConstructError::Contract(format!("windmill needs k >= 2, got {k}")));
    }
    if n < 1 {
        return Err(ConstructError::Contract("windmill needs n >= 1".into()));
    }
    let target = u32::try_from(2 * k - 2).map_err(|_| ConstructError::Overflow)?;
    let names = windmill_names(k);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut hatness = vec![target; k];
    hatness[0] = 2;
    let factor = clique_named(&refs, &hatness)?;
    let raw = product_power(&factor, "A", n)?;
    let axis_hatness = raw.game.hatness_of("A").expect("axis");
    if axis_hatness >= target {
        lower(&raw, vec![target; raw.game.len()])
    } else {
        Ok(raw)
    }
}

/// `<W_{k,n}, const 2k-1>` shown losing: `n` losing factors
/// `<K_k, h(A)=2, h(B)=2k-1, rest 2k-2>` summed at `A`, then raised.
pub fn windmill_upper(k: usize, n: usize) -> Result<ComposedGame, ConstructError> {
    if k < 2 || n < 1 {
        return Err(ConstructError::Contract(format!("windmill needs k >= 2 and n >= 1, got k={k}, n={n}")));
    }
    let names = windmill_names(k);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let top = u32::try_from(2 * k - 1).map_err(|_| ConstructError::Overflow)?;
    let mut hatness = vec![top - 1; k];
    hatness[0] = 2;
    hatness[1] = top;
    let factor = clique_named(&refs, &hatness)?;
    let mut acc = factor.clone();
    for _ in 1..n {
        acc = sum_lose(&acc, "A", &factor, "A")?;
    }
    let len = acc.game.len();
    raise(&acc, vec![top; len])
}

/// Multiplies `copies` copies of a winning game at its first
/// minimum-hatness vertex. Returns the product and the implied lower bound
/// `min(a1^copies, a2)` on its minimum hatness.
pub fn blowup_second_min(g: &ComposedGame, copies: usize) -> Result<(ComposedGame, u32), ConstructError> {
    if !g.is_winning() {
        return Err(ConstructError::ProductNotWinning);
    }
    let values = g.game.value_list();
    let a1 = values[0];
    if a1 == 1 {
        return Err(ConstructError::Contract("blow-up cannot raise hatness 1".into()));
    }
    let vertex = g
        .game
        .hatness()
        .iter()
        .position(|&h| h == a1)
        .expect("minimum is attained");
    let name = g.game.graph().name(vertex).to_string();
    let result = product_power(g, &name, copies)?;
    let raised = a1
        .checked_pow(copies as u32)
        .ok_or(ConstructError::Overflow)?;
    let bound = values.get(1).map_or(raised, |&a2| raised.min(a2));
    Ok((result, bound))
}

/// Cone over `<K2, [2, 2]>` with two petals `<K3, [O:2, A:3, X:6]>`:
/// hatnesses `{2, 6, 6, 6, 6}`.
pub fn game_26666() -> Result<ComposedGame, ConstructError> {
    let base = clique_named(&["A1", "A2"], &[2, 2])?;
    let petal = clique_named(&["O", "A", "X"], &[2, 3, 6])?;
    let spec = PetalSpec {
        petal,
        o: "O".into(),
        a: "A".into(),
    };
    cone(&base, &[spec.clone(), spec])
}

/// Three copies of "26666" multiplied at `O`: 13 vertices, values
/// `(6 x 12, 8)`.
pub fn trefoil() -> Result<ComposedGame, ConstructError> {
    Ok(blowup_second_min(&game_26666()?, 3)?.0)
}

/// Cone over the Trefoil game with one `K5-` petal per vertex (apex at the
/// hatness-2 sage, `A` at the hatness-3 sage), then four copies multiplied
/// at the apex: 209 vertices, minimum hatness 14.
pub fn planar14() -> Result<ComposedGame, ConstructError> {
    let base = trefoil()?;
    let petal = PetalSpec {
        petal: k5minus()?,
        o: "A2".into(),
        a: "A3".into(),
    };
    let petals = vec![petal; base.game.len()];
    let wheel = cone(&base, &petals)?;
    let apex = wheel.game.graph().name(0).to_string();
    product_power(&wheel, &apex, 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{is_outerplanar_embedding, is_planar_embedding};

    fn planar(g: &ComposedGame) -> bool {
        g.rotation
            .as_ref()
            .is_some_and(|r| is_planar_embedding(g.game.graph(), r).unwrap())
    }

    fn outerplanar(g: &ComposedGame) -> bool {
        g.rotation
            .as_ref()
            .is_some_and(|r| is_outerplanar_embedding(g.game.graph(), r).unwrap())
    }

    #[test]
    fn clique_verdicts() {
        assert!(clique(&[2, 3, 6]).unwrap().is_winning());
        let lose = clique(&[2, 3, 7]).unwrap();
        assert!(lose.verdict.is_losing() && lose.strategy.is_none());
        assert!(clique(&[2, 2, 2, 2, 2]).unwrap().rotation.is_none());
        assert!(planar(&clique(&[4, 4, 4, 4]).unwrap()));
    }

    #[test]
    fn shape_26666() {
        let g = game_26666().unwrap();
        assert_eq!(g.game.value_list(), vec![2, 6, 6, 6, 6]);
        assert_eq!(g.game.graph().edge_count(), 7);
        assert_eq!(g.game.graph().names(), &["O", "0/A", "0/X", "1/A", "1/X"]);
        assert!(outerplanar(&g));
        assert_eq!(g.verdict.provenance.count("cone"), 1);
        assert_eq!(g.verdict.provenance.count("clique-criterion"), 3);
    }

    #[test]
    fn shape_trefoil() {
        let t = trefoil().unwrap();
        assert_eq!(t.game.len(), 13);
        let mut expected = vec![6; 12];
        expected.push(8);
        assert_eq!(t.game.value_list(), expected);
        assert_eq!(t.game.hatness_of("O"), Some(8));
        assert!(outerplanar(&t));
    }

    #[test]
    fn windmill_shapes() {
        let w = windmill(3, 2).unwrap();
        assert_eq!(w.game.len(), 5);
        assert_eq!(w.game.hatness(), &[4; 5]);
        let w = windmill(4, 3).unwrap();
        assert_eq!(w.game.len(), 10);
        assert_eq!(w.game.hatness(), &[6; 10]);
        assert_eq!(w.verdict.provenance.justification, Justification::Majorization);
        let w = windmill(2, 1).unwrap();
        assert_eq!(w.game.hatness(), &[2, 2]);
        assert!(w.is_winning());
        // too few blades: the raw product, axis 2^n below 2k-2
        let raw = windmill(4, 2).unwrap();
        assert_eq!(raw.game.hatness_of("A"), Some(4));
        assert!(windmill(1, 3).is_err());
    }

    #[test]
    fn windmill_factor_product() {
        let f = clique_named(&["A", "v1", "v2"], &[2, 4, 4]).unwrap();
        let w = product(&f, "A", &f, "A").unwrap();
        assert_eq!(w.game.hatness_of("A"), Some(4));
        assert_eq!(w.game.len(), 5);
        assert!(planar(&w));
    }

    #[test]
    fn product_degenerate_axis() {
        let g = clique(&[1, 2]).unwrap();
        let p = product(&g, "v0", &g, "v0").unwrap();
        assert_eq!(p.game.hatness_of("v0"), Some(1));
    }

    #[test]
    fn product_requires_winning() {
        let lose = clique(&[2, 3]).unwrap();
        let win = clique(&[2, 2]).unwrap();
        assert_eq!(
            product(&win, "v0", &lose, "v0").unwrap_err(),
            ConstructError::ProductNotWinning
        );
        assert!(matches!(
            product(&win, "nope", &win, "v0"),
            Err(ConstructError::UnknownVertex(_))
        ));
    }

    #[test]
    fn sum_lose_examples() {
        let f = clique_named(&["A", "B", "v2"], &[2, 5, 4]).unwrap();
        assert!(f.verdict.is_losing());
        let s = sum_lose(&f, "A", &f, "A").unwrap();
        assert!(s.verdict.is_losing());
        assert_eq!(s.game.hatness_of("A"), Some(2));
        assert_eq!(s.game.len(), 5);
        let bad = clique_named(&["A", "B"], &[3, 2]).unwrap();
        assert_eq!(sum_lose(&f, "A", &bad, "A").unwrap_err(), ConstructError::SumHatness(3));
        let win = clique(&[2, 2]).unwrap();
        assert_eq!(sum_lose(&win, "v0", &f, "A").unwrap_err(), ConstructError::SumNotLosing);
    }

    #[test]
    fn windmill_upper_shape() {
        let w = windmill_upper(3, 2).unwrap();
        assert!(w.verdict.is_losing());
        assert_eq!(w.game.hatness(), &[5; 5]);
        assert!(w.game.graph().same_structure(windmill(3, 2).unwrap().game.graph()));
    }

    #[test]
    fn cone_contracts() {
        let base = clique(&[2, 2]).unwrap();
        let petal = clique_named(&["O", "A", "X"], &[2, 3, 6]).unwrap();
        let spec = PetalSpec { petal: petal.clone(), o: "O".into(), a: "A".into() };
        assert!(matches!(
            cone(&base, std::slice::from_ref(&spec)),
            Err(ConstructError::PetalCount { base: 2, petals: 1 })
        ));
        let other = PetalSpec {
            petal: clique_named(&["O", "A", "X"], &[3, 3, 3]).unwrap(),
            o: "O".into(),
            a: "A".into(),
        };
        assert!(matches!(cone(&base, &[spec.clone(), other]), Err(ConstructError::ApexHatness(2, 3))));
        let same = PetalSpec { petal, o: "O".into(), a: "O".into() };
        assert!(matches!(cone(&base, &[spec, same]), Err(ConstructError::PetalNotAdjacent { .. })));
    }

    #[test]
    fn single_petal_cone() {
        let base = clique(&[1]).unwrap();
        let petal = clique_named(&["O", "A", "X"], &[2, 3, 6]).unwrap();
        let c = cone(&base, &[PetalSpec { petal, o: "O".into(), a: "A".into() }]).unwrap();
        assert_eq!(c.game.hatness(), &[2, 3, 6]);
        assert!(planar(&c));
    }

    #[test]
    fn blowup_examples() {
        let g = game_26666().unwrap();
        let (t, bound) = blowup_second_min(&g, 3).unwrap();
        assert_eq!(t.game.hatness_of("O"), Some(8));
        assert_eq!(bound, 6);
        let (same, bound) = blowup_second_min(&g, 1).unwrap();
        assert_eq!(same.game.as_ref(), g.game.as_ref());
        assert_eq!(bound, 2);
        let trivial = clique(&[1, 2]).unwrap();
        assert!(blowup_second_min(&trivial, 2).is_err());
    }
}
