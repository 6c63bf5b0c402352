//! Composition expressions.
//!
//! ```text
//! expr  := "clique" "[" nat {"," nat} "]" | "k5minus" | "windmill" "(" nat "," nat ")"
//!        | "game26666" | "trefoil" | "planar14"
//!        | "product" "(" expr "@" name "," expr "@" name ")"
//!        | "cone" "(" expr ";" petal {"," petal} ")"
//!        | "lower" "(" expr ";" name "=" nat {"," name "=" nat} ")"
//! petal := expr "@" name "/" name
//! name  := identifier | "quoted string"
//! ```
//!
//! Whitespace is free and `#` starts a comment running to the end of the
//! line. Composite vertex names such as `0/A` contain `/`, so they have to
//! be quoted: `lower(game26666; "0/X"=5)`.

mod parser;

use std::fmt::{self, Write as _};

pub use parser::{line_col, parse, ParseError};

use crate::constructors::{self, ComposedGame, ConstructError, PetalSpec};
use crate::game::Game;

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGame {
    Game26666,
    Trefoil,
    Planar14,
}

impl NamedGame {
    pub fn keyword(self) -> &'static str {
        match self {
            NamedGame::Game26666 => "game26666",
            NamedGame::Trefoil => "trefoil",
            NamedGame::Planar14 => "planar14",
        }
    }
}

/// An expression with its source span. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Clique(Vec<u32>),
    K5Minus,
    Windmill(u32, u32),
    Named(NamedGame),
    Product {
        left: Box<Expr>,
        left_vertex: String,
        right: Box<Expr>,
        right_vertex: String,
    },
    Cone {
        base: Box<Expr>,
        petals: Vec<Petal>,
    },
    Lower {
        inner: Box<Expr>,
        overrides: Vec<(String, u32)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Petal {
    pub expr: Expr,
    pub o: String,
    pub a: String,
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_identifier(name) {
        return f.write_str(name);
    }
    f.write_char('"')?;
    for c in name.chars() {
        if c == '"' || c == '\\' {
            f.write_char('\\')?;
        }
        f.write_char(c)?;
    }
    f.write_char('"')
}

/// Canonical form: `product(clique[2,6]@v0, clique[2,6]@v0)`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Clique(hs) => {
                f.write_str("clique[")?;
                for (i, h) in hs.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{h}")?;
                }
                f.write_char(']')
            }
            ExprKind::K5Minus => f.write_str("k5minus"),
            ExprKind::Windmill(k, n) => write!(f, "windmill({k},{n})"),
            ExprKind::Named(g) => f.write_str(g.keyword()),
            ExprKind::Product {
                left,
                left_vertex,
                right,
                right_vertex,
            } => {
                write!(f, "product({left}@")?;
                write_name(f, left_vertex)?;
                write!(f, ", {right}@")?;
                write_name(f, right_vertex)?;
                f.write_char(')')
            }
            ExprKind::Cone { base, petals } => {
                write!(f, "cone({base}; ")?;
                for (i, p) in petals.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}@", p.expr)?;
                    write_name(f, &p.o)?;
                    f.write_char('/')?;
                    write_name(f, &p.a)?;
                }
                f.write_char(')')
            }
            ExprKind::Lower { inner, overrides } => {
                write!(f, "lower({inner}; ")?;
                for (i, (name, h)) in overrides.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write_name(f, name)?;
                    write!(f, "={h}")?;
                }
                f.write_char(')')
            }
        }
    }
}

/// A constructor failure and the span of the sub-expression that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElabError {
    pub span: Span,
    pub error: ConstructError,
}

impl ElabError {
    /// Message with the position and text of the offending sub-expression.
    pub fn render(&self, src: &str) -> String {
        let (line, column) = line_col(src, self.span.start);
        let text = src.get(self.span.start..self.span.end).unwrap_or("");
        format!("line {line}, column {column}: {} (in `{text}`)", self.error)
    }
}

impl fmt::Display for ElabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bytes {}..{}: {}", self.span.start, self.span.end, self.error)
    }
}

impl std::error::Error for ElabError {}

/// Builds the game, strategy, verdict and embedding an expression denotes.
pub fn elaborate(expr: &Expr) -> Result<ComposedGame, ElabError> {
    let at = |error: ConstructError| ElabError {
        span: expr.span,
        error,
    };
    match &expr.kind {
        ExprKind::Clique(hs) => constructors::clique(hs).map_err(at),
        ExprKind::K5Minus => constructors::k5minus().map_err(at),
        ExprKind::Windmill(k, n) => constructors::windmill(*k as usize, *n as usize).map_err(at),
        ExprKind::Named(NamedGame::Game26666) => constructors::game_26666().map_err(at),
        ExprKind::Named(NamedGame::Trefoil) => constructors::trefoil().map_err(at),
        ExprKind::Named(NamedGame::Planar14) => constructors::planar14().map_err(at),
        ExprKind::Product {
            left,
            left_vertex,
            right,
            right_vertex,
        } => {
            let l = elaborate(left)?;
            let r = elaborate(right)?;
            constructors::product(&l, left_vertex, &r, right_vertex).map_err(at)
        }
        ExprKind::Cone { base, petals } => {
            let b = elaborate(base)?;
            let specs = petals
                .iter()
                .map(|p| {
                    Ok(PetalSpec {
                        petal: elaborate(&p.expr)?,
                        o: p.o.clone(),
                        a: p.a.clone(),
                    })
                })
                .collect::<Result<Vec<_>, ElabError>>()?;
            constructors::cone(&b, &specs).map_err(at)
        }
        ExprKind::Lower { inner, overrides } => {
            let g = elaborate(inner)?;
            let mut hatness = g.game.hatness().to_vec();
            for (name, h) in overrides {
                let v = g
                    .game
                    .graph()
                    .index_of(name)
                    .ok_or_else(|| at(ConstructError::UnknownVertex(name.clone())))?;
                if *h > hatness[v] {
                    return Err(at(ConstructError::Contract(format!(
                        "lower cannot raise `{name}` from {} to {h}",
                        hatness[v]
                    ))));
                }
                hatness[v] = *h;
            }
            constructors::lower(&g, hatness).map_err(at)
        }
    }
}

/// Parses and elaborates in one step, rendering errors with positions.
pub fn build(src: &str) -> Result<ComposedGame, String> {
    let expr = parse(src).map_err(|e| e.to_string())?;
    elaborate(&expr).map_err(|e| e.render(src))
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Undirected DOT graph with vertices labelled `name:hatness`.
pub fn export_dot(game: &Game) -> String {
    let g = game.graph();
    let mut out = String::from("graph hats {\n");
    for (name, h) in g.names().iter().zip(game.hatness()) {
        let _ = writeln!(out, "  {} [label={}];", dot_quote(name), dot_quote(&format!("{name}:{h}")));
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", dot_quote(g.name(u)), dot_quote(g.name(v)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{verify_exhaustive, VerifyOptions};
    use proptest::prelude::*;

    fn clique(hs: &[u32]) -> Expr {
        Expr::new(ExprKind::Clique(hs.to_vec()))
    }

    #[test]
    fn parses_product() {
        let e = parse("product(clique[2,6]@v0, clique[2,6]@v0)").unwrap();
        let expected = Expr::new(ExprKind::Product {
            left: Box::new(clique(&[2, 6])),
            left_vertex: "v0".into(),
            right: Box::new(clique(&[2, 6])),
            right_vertex: "v0".into(),
        });
        assert_eq!(e, expected);
        // 1/2 + 1/6 < 1: both factors lose, so the product is refused
        assert_eq!(elaborate(&e).unwrap_err().error, ConstructError::ProductNotWinning);
        let g = build("product(clique[2,2]@v0, clique[2,2]@v0)").unwrap();
        assert_eq!(g.game.hatness_of("v0"), Some(4));
        assert!(g.is_winning());
    }

    #[test]
    fn cone_expression_is_26666() {
        let src = "cone(clique[2,2]; clique[2,3,6]@v0/v1, clique[2,3,6]@v0/v1)";
        let g = build(src).unwrap();
        assert_eq!(g.game.value_list(), vec![2, 6, 6, 6, 6]);
        let named = build("game26666").unwrap();
        assert_eq!(g.game.hatness(), named.game.hatness());
        assert_eq!(g.game.graph().edge_count(), named.game.graph().edge_count());
        let report = verify_exhaustive(&g.game, g.strategy.as_ref().unwrap(), &VerifyOptions::sequential()).unwrap();
        assert!(report.wins());
        assert_eq!(report.checked, 2592);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse("clique[]").unwrap_err();
        assert_eq!((e.line, e.column), (1, 8));
        assert_eq!(e.expected, vec!["hatness"]);
        assert_eq!(e.to_string(), "line 1, column 8: expected hatness, found `]`");

        let e = parse("product(\n  clique[2,2]@v0\n  clique[2,2]@v0)").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        assert!(e.expected.contains(&"`,`".to_string()));

        let e = parse("kone").unwrap_err();
        assert_eq!(e.expected.len(), 9);
        assert!(parse("clique[0]").is_err());
        assert!(parse("clique[2] extra").is_err());
        assert!(parse("clique[99999999999]").is_err());
        assert!(parse("lower(k5minus; \"A2=1)").is_err());
        assert!(parse("cone(clique[1]; clique[2,3]@v0)").is_err());
    }

    #[test]
    fn comments_and_whitespace() {
        let src = "# the K5- lemma\n  k5minus  # trailing\n";
        assert_eq!(parse(src).unwrap(), Expr::new(ExprKind::K5Minus));
    }

    #[test]
    fn named_builders() {
        let g = build("k5minus").unwrap();
        assert_eq!(g.game.hatness(), &[2, 3, 14, 14, 14]);
        let w = build("windmill(3,2)").unwrap();
        assert_eq!(w.game.len(), 5);
        assert_eq!(w.game.hatness(), &[4; 5]);
        assert!(w.is_winning());
    }

    #[test]
    fn lower_trefoil_center() {
        let g = build("lower(trefoil; O=6)").unwrap();
        assert_eq!(g.game.hatness(), &[6; 13]);
        assert!(g.is_winning());
        assert_eq!(g.verdict.provenance.justification.label(), "majorization");
    }

    #[test]
    fn elaboration_errors_point_at_subexpression() {
        let src = "product(clique[2,3]@v0, clique[2,2]@v0)";
        let e = elaborate(&parse(src).unwrap()).unwrap_err();
        assert_eq!(e.error, ConstructError::ProductNotWinning);
        assert_eq!(&src[e.span.start..e.span.end], src);

        let src = "product(clique[2,2]@v0, lower(clique[2,2]; zz=1)@v0)";
        let e = elaborate(&parse(src).unwrap()).unwrap_err();
        assert_eq!(&src[e.span.start..e.span.end], "lower(clique[2,2]; zz=1)");
        assert!(e.render(src).starts_with("line 1, column 25: vertex `zz` not found"));

        assert!(build("lower(clique[2,2]; v0=3)").is_err());
        assert!(build("windmill(1,1)").is_err());
    }

    #[test]
    fn quoted_names() {
        let g = build("lower(game26666; \"0/X\"=5)").unwrap();
        assert_eq!(g.game.hatness_of("0/X"), Some(5));
        let e = parse("lower(game26666; \"0/X\"=5)").unwrap();
        assert_eq!(e.to_string(), "lower(game26666; \"0/X\"=5)");
    }

    #[test]
    fn dot_labels() {
        let dot = export_dot(&Game::clique(&[2, 3]).unwrap());
        assert!(dot.contains("\"v0\" [label=\"v0:2\"];"));
        assert!(dot.contains("\"v0\" -- \"v1\";"));
        assert!(dot.starts_with("graph hats {"));
    }

    #[test]
    fn elaboration_is_deterministic() {
        let a = build("trefoil").unwrap();
        let b = build("trefoil").unwrap();
        assert_eq!(
            crate::document::to_json(&a.game, a.rotation.as_ref()),
            crate::document::to_json(&b.game, b.rotation.as_ref())
        );
    }

    fn name() -> impl Strategy<Value = String> {
        prop_oneof![
            "[a-zA-Z_][a-zA-Z0-9_]{0,6}",
            "[ -~]{0,8}",
            Just("0/A".to_string()),
            Just("q\"\\".to_string()),
        ]
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            prop::collection::vec(1u32..20, 1..5).prop_map(|hs| Expr::new(ExprKind::Clique(hs))),
            Just(Expr::new(ExprKind::K5Minus)),
            (0u32..9, 0u32..9).prop_map(|(k, n)| Expr::new(ExprKind::Windmill(k, n))),
            prop_oneof![
                Just(NamedGame::Game26666),
                Just(NamedGame::Trefoil),
                Just(NamedGame::Planar14)
            ]
            .prop_map(|g| Expr::new(ExprKind::Named(g))),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), name(), inner.clone(), name()).prop_map(|(l, lv, r, rv)| {
                    Expr::new(ExprKind::Product {
                        left: Box::new(l),
                        left_vertex: lv,
                        right: Box::new(r),
                        right_vertex: rv,
                    })
                }),
                (
                    inner.clone(),
                    prop::collection::vec((inner.clone(), name(), name()), 1..4)
                )
                    .prop_map(|(b, ps)| Expr::new(ExprKind::Cone {
                        base: Box::new(b),
                        petals: ps.into_iter().map(|(expr, o, a)| Petal { expr, o, a }).collect(),
                    })),
                (inner, prop::collection::vec((name(), 1u32..50), 1..4)).prop_map(|(e, ov)| {
                    Expr::new(ExprKind::Lower {
                        inner: Box::new(e),
                        overrides: ov,
                    })
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in expr()) {
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(back.to_string(), printed);
        }

        #[test]
        fn spans_cover_their_text(e in expr()) {
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            prop_assert_eq!(back.span, Span::new(0, printed.len()));
        }
    }
}
