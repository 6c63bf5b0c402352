//! Strategies assembled from the strategies of smaller games.

use super::{EvalError, Scratch, Strategy};
use crate::game::Color;

/// Product of two games glued at one vertex `A`.
///
/// `A`'s color `c` decodes as `(c mod h1, c div h1)`: the low digit is `A`'s
/// color in the left factor, the high digit its color in the right factor.
/// Each factor plays its own strategy and `A` encodes its two sub-guesses
/// the same way. Left vertices keep their indices in the glued game.
#[derive(Debug)]
pub struct ProductRule {
    left: Strategy,
    right: Strategy,
    left_glued: usize,
    right_glued: usize,
    left_modulus: u32,
    right_map: Vec<usize>,
}

impl ProductRule {
    pub(crate) fn new(
        left: Strategy,
        right: Strategy,
        left_glued: usize,
        right_glued: usize,
        right_map: Vec<usize>,
    ) -> Self {
        let left_modulus = left.game().hatness()[left_glued];
        ProductRule {
            left,
            right,
            left_glued,
            right_glued,
            left_modulus,
            right_map,
        }
    }

    pub fn factors(&self) -> (&Strategy, &Strategy) {
        (&self.left, &self.right)
    }

    pub(super) fn scratch(&self) -> Scratch {
        let (nl, nr) = (self.left.game().len(), self.right.game().len());
        Scratch {
            bufs: vec![vec![0; nl], vec![0; nl], vec![0; nr], vec![0; nr]],
            children: vec![self.left.rule.scratch(), self.right.rule.scratch()],
        }
    }

    pub(super) fn guess_all(
        &self,
        colors: &[Color],
        out: &mut [Color],
        scratch: &mut Scratch,
    ) -> Result<(), EvalError> {
        let Scratch { bufs, children } = scratch;
        let [lc, lg, rc, rg] = &mut bufs[..] else { unreachable!() };
        let (ls, rs) = children.split_at_mut(1);
        let glued = colors[self.left_glued];

        let nl = lc.len();
        lc.copy_from_slice(&colors[..nl]);
        lc[self.left_glued] = glued % self.left_modulus;
        for (slot, &g) in rc.iter_mut().zip(&self.right_map) {
            *slot = colors[g];
        }
        rc[self.right_glued] = glued / self.left_modulus;

        self.left.rule.guess_all(lc, lg, &mut ls[0])?;
        self.right.rule.guess_all(rc, rg, &mut rs[0])?;

        out[..nl].copy_from_slice(lg);
        for (&guess, &g) in rg.iter().zip(&self.right_map) {
            out[g] = guess;
        }
        out[self.left_glued] = lg[self.left_glued] + self.left_modulus * rg[self.right_glued];
        Ok(())
    }
}

/// One petal of a cone: its strategy and where its vertices live in the
/// composed game. The apex `O` is global vertex 0.
#[derive(Debug)]
pub(crate) struct PetalRule {
    pub strategy: Strategy,
    pub o_local: usize,
    pub a_local: usize,
    pub map: Vec<usize>,
}

/// Cone over a base game whose vertex `i` is the `A` vertex of petal `i`.
///
/// `A_i`'s color `c` decodes as `(u_i, v_i) = (c mod h_i(A_i), c div h_i(A_i))`.
/// The `A` vertices run the base strategy on the `v` digits, giving `ĝ_i`,
/// and petal `i` runs its own strategy with `u_i` as `A_i`'s color.
/// `A_i` guesses `(petal guess, ĝ_i)`, interior vertices keep their petal
/// guess, and `O` (which sees every `A_i`) follows the petal `i*` with the
/// smallest `i` such that `ĝ_i = v_i`.
///
/// If nobody guesses right, the base strategy still wins on the `v` digits,
/// so at `i*` the `A` vertex must have missed on `u`; then petal `i*` has no
/// correct interior or `A` guess and its winner is `O`.
#[derive(Debug)]
pub struct ConeRule {
    base: Strategy,
    petals: Vec<PetalRule>,
    a_global: Vec<usize>,
    a_modulus: Vec<u32>,
}

impl ConeRule {
    pub(crate) fn new(base: Strategy, petals: Vec<PetalRule>) -> Self {
        let a_global = petals.iter().map(|p| p.map[p.a_local]).collect();
        let a_modulus = petals
            .iter()
            .map(|p| p.strategy.game().hatness()[p.a_local])
            .collect();
        ConeRule {
            base,
            petals,
            a_global,
            a_modulus,
        }
    }

    pub fn base(&self) -> &Strategy {
        &self.base
    }

    pub fn petals(&self) -> impl Iterator<Item = &Strategy> {
        self.petals.iter().map(|p| &p.strategy)
    }

    pub(super) fn scratch(&self) -> Scratch {
        let k = self.petals.len();
        let mut bufs = vec![vec![0; k], vec![0; k]];
        let mut children = vec![self.base.rule.scratch()];
        for p in &self.petals {
            let n = p.strategy.game().len();
            bufs.push(vec![0; n]);
            bufs.push(vec![0; n]);
            children.push(p.strategy.rule.scratch());
        }
        Scratch { bufs, children }
    }

    pub(super) fn guess_all(
        &self,
        colors: &[Color],
        out: &mut [Color],
        scratch: &mut Scratch,
    ) -> Result<(), EvalError> {
        let Scratch { bufs, children } = scratch;
        let (base_bufs, petal_bufs) = bufs.split_at_mut(2);
        let [base_colors, base_guesses] = base_bufs else { unreachable!() };
        let (base_scratch, petal_scratch) = children.split_at_mut(1);

        for (i, slot) in base_colors.iter_mut().enumerate() {
            *slot = colors[self.a_global[i]] / self.a_modulus[i];
        }
        self.base.rule.guess_all(base_colors, base_guesses, &mut base_scratch[0])?;

        let mut chosen = None;
        for (i, petal) in self.petals.iter().enumerate() {
            let [pc, pg] = &mut petal_bufs[2 * i..2 * i + 2] else { unreachable!() };
            for (slot, &g) in pc.iter_mut().zip(&petal.map) {
                *slot = colors[g];
            }
            pc[petal.a_local] = colors[self.a_global[i]] % self.a_modulus[i];
            petal.strategy.rule.guess_all(pc, pg, &mut petal_scratch[i])?;

            for (local, &g) in petal.map.iter().enumerate() {
                if local != petal.o_local {
                    out[g] = pg[local];
                }
            }
            out[self.a_global[i]] = pg[petal.a_local] + self.a_modulus[i] * base_guesses[i];
            if chosen.is_none() && base_guesses[i] == base_colors[i] {
                chosen = Some(i);
            }
        }
        let i = chosen.unwrap_or(0);
        out[0] = petal_bufs[2 * i + 1][self.petals[i].o_local];
        Ok(())
    }
}

/// Runs a strategy of a majorizing game; guesses that are not legal colors
/// of the lower hatness become 0.
#[derive(Debug)]
pub struct MajorizeRule {
    inner: Strategy,
    lower: Vec<u32>,
}

impl MajorizeRule {
    pub(crate) fn new(inner: Strategy, lower: Vec<u32>) -> Self {
        MajorizeRule { inner, lower }
    }

    pub fn inner(&self) -> &Strategy {
        &self.inner
    }

    pub(super) fn scratch(&self) -> Scratch {
        Scratch {
            bufs: Vec::new(),
            children: vec![self.inner.rule.scratch()],
        }
    }

    pub(super) fn guess_all(
        &self,
        colors: &[Color],
        out: &mut [Color],
        scratch: &mut Scratch,
    ) -> Result<(), EvalError> {
        self.inner.rule.guess_all(colors, out, &mut scratch.children[0])?;
        for (g, &h) in out.iter_mut().zip(&self.lower) {
            if *g >= h {
                *g = 0;
            }
        }
        Ok(())
    }
}
