//! Reference oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use hats_core::constructors::{self, ComposedGame, PetalSpec};
use hats_core::strategy::{table_strategy, TableRule};
use hats_core::{Game, Graph, Strategy};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lowest index of an assignment on which nobody guesses right, by the
/// plain double loop over assignments and vertices.
pub fn naive_first_failure(game: &Game, strategy: &Strategy) -> Option<u128> {
    let total = game.color_space().expect("small game");
    for index in 0..total {
        let a = game.assignment_at(index).unwrap();
        let mut won = false;
        for v in 0..game.len() {
            if strategy.guess(&a, v).unwrap() == a.color(v) {
                won = true;
                break;
            }
        }
        if !won {
            return Some(index);
        }
    }
    None
}

/// Whether any strategy wins, by trying every combination of tables.
pub fn brute_force_winning(game: &Game) -> bool {
    let counts: Vec<usize> = TableRule::pattern_counts(game).into_iter().map(Option::unwrap).collect();
    let h = game.hatness();
    let entries: Vec<(usize, usize)> = counts
        .iter()
        .enumerate()
        .flat_map(|(v, &n)| (0..n).map(move |p| (v, p)))
        .collect();
    let assignments: Vec<Vec<u32>> = (0..game.color_space().unwrap())
        .map(|i| game.assignment_at(i).unwrap().colors().to_vec())
        .collect();
    let patterns: Vec<Vec<usize>> = assignments
        .iter()
        .map(|a| (0..game.len()).map(|v| TableRule::pattern_index(game, v, a)).collect())
        .collect();
    let mut tables: Vec<Vec<u32>> = counts.iter().map(|&n| vec![0; n]).collect();
    loop {
        let wins = assignments
            .iter()
            .zip(&patterns)
            .all(|(a, pat)| (0..game.len()).any(|v| tables[v][pat[v]] == a[v]));
        if wins {
            return true;
        }
        // next table combination in mixed radix
        let mut carried = true;
        for &(v, p) in &entries {
            tables[v][p] += 1;
            if tables[v][p] < h[v] {
                carried = false;
                break;
            }
            tables[v][p] = 0;
        }
        if carried {
            return false;
        }
    }
}

/// Number of table combinations `brute_force_winning` would try.
pub fn table_space(game: &Game) -> Option<u128> {
    let counts = TableRule::pattern_counts(game);
    counts
        .iter()
        .zip(game.hatness())
        .try_fold(1u128, |acc, (n, &h)| {
            let n = u32::try_from((*n)?).ok()?;
            acc.checked_mul(u128::from(h).checked_pow(n)?)
        })
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_index_edges(names, edges).unwrap()
}

pub fn connected_random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    loop {
        let g = random_graph(rng, n, density);
        if g.is_connected() {
            return g;
        }
    }
}

pub fn random_table_strategy(game: Arc<Game>, rng: &mut impl Rng) -> Strategy {
    let tables = TableRule::pattern_counts(&game)
        .into_iter()
        .zip(game.hatness())
        .map(|(n, &h)| (0..n.unwrap()).map(|_| rng.random_range(0..h)).collect())
        .collect();
    table_strategy(game, tables).unwrap()
}

/// Winning clique hatness lists with 2..=max_n vertices and entries in
/// 1..=max_h, in every vertex order.
pub fn winning_clique_lists(max_n: usize, max_h: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let mut hs = vec![1u32; n];
        loop {
            let (num, den) = hats_core::strategy::clique_criterion(&hs).unwrap();
            if num >= den {
                out.push(hs.clone());
            }
            let mut i = 0;
            while i < n {
                hs[i] += 1;
                if hs[i] <= max_h {
                    break;
                }
                hs[i] = 1;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    out
}

fn product_of(values: impl IntoIterator<Item = u32>) -> u128 {
    values.into_iter().map(u128::from).product()
}

/// Product of two random winning cliques at random vertices.
pub fn random_product(rng: &mut impl Rng, lists: &[Vec<u32>], limit: u128) -> ComposedGame {
    loop {
        let l1 = lists.choose(rng).unwrap();
        let l2 = lists.choose(rng).unwrap();
        let (a1, a2) = (rng.random_range(0..l1.len()), rng.random_range(0..l2.len()));
        let size = product_of(l1.iter().chain(l2).copied());
        if size > limit {
            continue;
        }
        let g1 = constructors::clique(l1).unwrap();
        let g2 = constructors::clique(l2).unwrap();
        return constructors::product(&g1, &format!("v{a1}"), &g2, &format!("v{a2}")).unwrap();
    }
}

/// Cone over a random winning clique (or a single vertex) with random
/// winning clique petals sharing their apex hatness.
pub fn random_cone(rng: &mut impl Rng, lists: &[Vec<u32>], limit: u128) -> ComposedGame {
    loop {
        let base_list: Vec<u32> = if rng.random_bool(0.2) {
            vec![1]
        } else {
            lists.choose(rng).unwrap().clone()
        };
        let apex = rng.random_range(1..=3u32);
        let candidates: Vec<&Vec<u32>> = lists.iter().filter(|l| l.contains(&apex)).collect();
        let mut size = u128::from(apex);
        let mut petals = Vec::new();
        for &hb in &base_list {
            let l = *candidates.choose(rng).unwrap();
            let o = l.iter().position(|&h| h == apex).unwrap();
            let others: Vec<usize> = (0..l.len()).filter(|&i| i != o).collect();
            let a = *others.choose(rng).unwrap();
            size *= product_of(l.iter().enumerate().filter(|&(i, _)| i != o).map(|(_, &h)| h));
            size *= u128::from(hb);
            petals.push((l.clone(), o, a));
        }
        if size > limit {
            continue;
        }
        let base = constructors::clique(&base_list).unwrap();
        let specs: Vec<PetalSpec> = petals
            .into_iter()
            .map(|(l, o, a)| PetalSpec {
                petal: constructors::clique(&l).unwrap(),
                o: format!("v{o}"),
                a: format!("v{a}"),
            })
            .collect();
        return constructors::cone(&base, &specs).unwrap();
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fixed corpus of games and strategies with at most 10^4 assignments,
/// winning and losing.
pub fn oracle_corpus() -> Vec<(String, Arc<Game>, Strategy)> {
    let mut out = Vec::new();
    let mut push = |label: String, g: &ComposedGame| {
        if let Some(s) = &g.strategy {
            out.push((label, g.game.clone(), s.clone()));
        }
    };
    for hs in [vec![2, 2], vec![3, 3, 3], vec![2, 3, 6], vec![2, 4, 4], vec![1, 5], vec![2, 2, 2, 2]] {
        push(format!("clique{hs:?}"), &constructors::clique(&hs).unwrap());
    }
    push("game26666".into(), &constructors::game_26666().unwrap());
    push("windmill(3,2)".into(), &constructors::windmill(3, 2).unwrap());
    let g = constructors::game_26666().unwrap();
    push("26666 lowered".into(), &constructors::lower(&g, vec![2, 5, 6, 4, 6]).unwrap());
    let lists = winning_clique_lists(3, 6);
    let mut r = rng(10);
    for i in 0..10 {
        push(format!("product #{i}"), &random_product(&mut r, &lists, 10_000));
        push(format!("cone #{i}"), &random_cone(&mut r, &lists, 10_000));
    }
    for i in 0..40 {
        let n = r.random_range(1..=4);
        let graph = random_graph(&mut r, n, 0.6);
        let hatness: Vec<u32> = (0..n).map(|_| r.random_range(1..=5)).collect();
        let game = Arc::new(Game::new(graph, hatness).unwrap());
        let s = random_table_strategy(game.clone(), &mut r);
        out.push((format!("random table #{i}"), game, s));
    }
    out
}
