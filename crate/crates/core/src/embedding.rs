//! Planarity certificates via rotation systems.
//!
//! A rotation system fixes, for each vertex, a cyclic order of its
//! neighbors. Faces are traced with the rule: after arriving at `v` along
//! `u -> v`, leave along `v -> succ_v(u)`. A connected graph's rotation
//! system is a plane embedding iff `V - E + F = 2`, and it witnesses
//! outerplanarity when additionally one face visits every vertex.
//!
//! This module checks embeddings supplied by the builders; it does not
//! search for them except by brute force on very small leaf graphs.

use thiserror::Error;

use crate::game::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("rotation at `{0}` is not a permutation of its neighbors")]
    BadRotation(String),
    #[error("rotation has {got} vertices, graph has {expected}")]
    WrongSize { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<usize>>,
}

impl RotationSystem {
    /// Checks that `order[v]` is a permutation of `v`'s neighbors.
    pub fn new(graph: &Graph, order: Vec<Vec<usize>>) -> Result<Self, EmbeddingError> {
        if order.len() != graph.len() {
            return Err(EmbeddingError::WrongSize {
                expected: graph.len(),
                got: order.len(),
            });
        }
        for (v, rot) in order.iter().enumerate() {
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(EmbeddingError::BadRotation(graph.name(v).to_string()));
            }
        }
        Ok(RotationSystem { order })
    }

    pub(crate) fn unchecked(order: Vec<Vec<usize>>) -> Self {
        RotationSystem { order }
    }

    pub fn order(&self, v: usize) -> &[usize] {
        &self.order[v]
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.order
    }

    fn succ(&self, v: usize, u: usize) -> usize {
        let rot = &self.order[v];
        let i = rot.iter().position(|&w| w == u).expect("dart in rotation");
        rot[(i + 1) % rot.len()]
    }

    /// Faces as cyclic dart sequences; each entry is the tail vertex of a
    /// dart, so a face `[a, b, c]` is the walk `a -> b -> c -> a`.
    pub fn faces(&self, graph: &Graph) -> Result<Vec<Vec<usize>>, EmbeddingError> {
        if !graph.is_connected() {
            return Err(EmbeddingError::Disconnected);
        }
        let mut used: Vec<Vec<bool>> = self.order.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for start in 0..self.order.len() {
            for si in 0..self.order[start].len() {
                if used[start][si] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut u, mut i) = (start, si);
                while !used[u][i] {
                    used[u][i] = true;
                    face.push(u);
                    let v = self.order[u][i];
                    let w = self.succ(v, u);
                    i = self.order[v].iter().position(|&x| x == w).expect("dart");
                    u = v;
                }
                faces.push(face);
            }
        }
        if faces.is_empty() && graph.len() == 1 {
            // a single vertex bounds one face
            faces.push(vec![0]);
        }
        Ok(faces)
    }
}

/// Number of faces traced by the rotation system.
pub fn face_trace(graph: &Graph, rotation: &RotationSystem) -> Result<usize, EmbeddingError> {
    Ok(rotation.faces(graph)?.len())
}

/// `V - E + F = 2`.
pub fn is_planar_embedding(graph: &Graph, rotation: &RotationSystem) -> Result<bool, EmbeddingError> {
    let f = face_trace(graph, rotation)? as i64;
    Ok(graph.len() as i64 - graph.edge_count() as i64 + f == 2)
}

/// Planar and some face visits every vertex.
pub fn is_outerplanar_embedding(
    graph: &Graph,
    rotation: &RotationSystem,
) -> Result<bool, EmbeddingError> {
    if !is_planar_embedding(graph, rotation)? {
        return Ok(false);
    }
    Ok(outer_face(graph, rotation)?.is_some())
}

/// A face visiting every vertex, if any.
pub fn outer_face(graph: &Graph, rotation: &RotationSystem) -> Result<Option<Vec<usize>>, EmbeddingError> {
    let n = graph.len();
    Ok(rotation.faces(graph)?.into_iter().find(|face| {
        let mut seen = vec![false; n];
        face.iter().for_each(|&v| seen[v] = true);
        seen.iter().all(|&s| s)
    }))
}

/// Brute-force search over rotation systems of a small graph. Prefers an
/// outerplanar rotation when one exists. Gives up beyond `limit`
/// candidate systems.
pub fn find_planar_rotation(graph: &Graph, limit: u64) -> Option<RotationSystem> {
    if !graph.is_connected() {
        return None;
    }
    let n = graph.len();
    let choices: Vec<Vec<Vec<usize>>> = (0..n).map(|v| cyclic_orders(graph.neighbors(v))).collect();
    let total = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))?;
    if total > limit {
        return None;
    }
    let mut first_planar = None;
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let rot = RotationSystem::unchecked((0..n).map(|v| choices[v][digits[v]].clone()).collect());
        if is_planar_embedding(graph, &rot).ok()? {
            if outer_face(graph, &rot).ok()?.is_some() {
                return Some(rot);
            }
            first_planar.get_or_insert(rot);
        }
        for v in 0..n {
            digits[v] += 1;
            if digits[v] < choices[v].len() {
                break;
            }
            digits[v] = 0;
        }
    }
    first_planar
}

/// All cyclic orders of `items`, each starting with the first item.
fn cyclic_orders(items: &[usize]) -> Vec<Vec<usize>> {
    let Some((&head, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    permute(&mut rest.to_vec(), 0, &mut |perm| {
        let mut order = vec![head];
        order.extend_from_slice(perm);
        out.push(order);
    });
    out
}

fn permute(items: &mut Vec<usize>, k: usize, emit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        emit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, emit);
        items.swap(k, i);
    }
}

/// Rotation at `v` turned so that the corner between its last and first
/// entries lies on a face visiting every vertex (or is left unchanged when
/// there is no such face).
pub(crate) fn rotation_with_outer_corner(graph: &Graph, rotation: &RotationSystem, v: usize) -> Vec<usize> {
    let rot = rotation.order(v).to_vec();
    if rot.len() < 2 {
        return rot;
    }
    let Ok(Some(face)) = outer_face(graph, rotation) else {
        return rot;
    };
    // face[j] -> face[j+1]: arrival at v from face[j-1], departure to face[j+1]
    let len = face.len();
    for j in 0..len {
        if face[j] == v {
            let next = face[(j + 1) % len];
            let start = rot.iter().position(|&w| w == next).expect("dart");
            let mut out = rot[start..].to_vec();
            out.extend_from_slice(&rot[..start]);
            return out;
        }
    }
    rot
}

/// Rotation of a product: the glued vertex's two cyclic orders are
/// concatenated, each turned to open at an outer corner.
pub(crate) fn product_rotation(
    left: (&Graph, &RotationSystem),
    right: (&Graph, &RotationSystem),
    left_glued: usize,
    right_glued: usize,
    right_map: &[usize],
    total: usize,
) -> RotationSystem {
    let mut order = vec![Vec::new(); total];
    for (v, slot) in order.iter_mut().enumerate().take(left.0.len()) {
        *slot = left.1.order(v).to_vec();
    }
    for (v, &g) in right_map.iter().enumerate() {
        if v != right_glued {
            order[g] = right.1.order(v).iter().map(|&u| right_map[u]).collect();
        }
    }
    let mut glued = rotation_with_outer_corner(left.0, left.1, left_glued);
    glued.extend(
        rotation_with_outer_corner(right.0, right.1, right_glued)
            .into_iter()
            .map(|u| right_map[u]),
    );
    order[left_glued] = glued;
    RotationSystem::unchecked(order)
}

/// Where a petal is spliced relative to its edge `O - A_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PetalSide {
    /// Into the face that traverses `O -> A_i`.
    Start,
    /// Into the face that traverses `A_i -> O`.
    End,
}

pub(crate) struct PetalEmbedding<'a> {
    pub rotation: &'a RotationSystem,
    pub o_local: usize,
    pub a_local: usize,
    pub map: &'a [usize],
}

fn turned_to_start(rot: &[usize], first: usize) -> Vec<usize> {
    let i = rot.iter().position(|&w| w == first).expect("neighbor in rotation");
    let mut out = rot[i..].to_vec();
    out.extend_from_slice(&rot[..i]);
    out
}

fn splice(rot: &mut Vec<usize>, target: usize, block: &[usize]) {
    let i = rot.iter().position(|&w| w == target).expect("target in rotation");
    rot.splice(i..=i, block.iter().copied());
}

/// Rotation of a cone. The apex `O` (global vertex 0) is placed in a base
/// face that visits every base vertex, joined to one corner of each `A_i`
/// in reverse walk order, and each petal is then spliced along its edge
/// `O - A_i`. Returns `None` if the base has no such face.
pub(crate) fn cone_rotation(
    base: (&Graph, &RotationSystem),
    a_global: &[usize],
    petals: &[PetalEmbedding<'_>],
    total: usize,
) -> Option<RotationSystem> {
    let (bg, br) = base;
    let k = bg.len();
    let mut order = vec![Vec::new(); total];
    for v in 0..k {
        order[a_global[v]] = br.order(v).iter().map(|&u| a_global[u]).collect();
    }

    // one corner per base vertex, in walk order of a face visiting all
    let mut corners: Vec<(usize, Option<usize>)> = Vec::with_capacity(k);
    if bg.edge_count() == 0 {
        if k != 1 {
            return None;
        }
        corners.push((0, None));
    } else {
        let face = outer_face(bg, br).ok()??;
        let len = face.len();
        let mut seen = vec![false; k];
        for j in 0..len {
            let v = face[(j + 1) % len];
            if !seen[v] {
                seen[v] = true;
                corners.push((v, Some(face[j])));
            }
        }
    }
    for &(v, arrival) in &corners {
        let rot = &mut order[a_global[v]];
        match arrival {
            Some(x) => {
                let i = rot.iter().position(|&w| w == a_global[x]).expect("arrival");
                rot.insert(i + 1, 0);
            }
            None => rot.push(0),
        }
    }
    order[0] = corners.iter().rev().map(|&(v, _)| a_global[v]).collect();

    let last = petals.len().saturating_sub(1);
    for (i, p) in petals.iter().enumerate() {
        let side = if i == last && petals.len() > 1 {
            PetalSide::End
        } else {
            PetalSide::Start
        };
        for (local, &g) in p.map.iter().enumerate() {
            if local != p.o_local && local != p.a_local {
                order[g] = p.rotation.order(local).iter().map(|&u| p.map[u]).collect();
            }
        }
        let at_a: Vec<usize> = turned_to_start(p.rotation.order(p.a_local), p.o_local)
            .into_iter()
            .map(|u| p.map[u])
            .collect();
        let at_o: Vec<usize> = turned_to_start(p.rotation.order(p.o_local), p.a_local)
            .into_iter()
            .map(|u| p.map[u])
            .collect();
        let a = a_global[i];
        // at_a = [O, p1..pr], at_o = [A, q1..qs]
        let (a_block, o_block) = match side {
            PetalSide::Start => {
                let mut o_block = at_o[1..].to_vec();
                o_block.push(a);
                (at_a, o_block)
            }
            PetalSide::End => {
                let mut a_block = at_a[1..].to_vec();
                a_block.push(0);
                (a_block, at_o)
            }
        };
        splice(&mut order[a], 0, &a_block);
        splice(&mut order[0], a, &o_block);
    }
    Some(RotationSystem::unchecked(order))
}
