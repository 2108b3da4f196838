use num_traits::{One, Zero};
use rand::Rng;

use super::{GenericError, RecipeStep, Witness};
use crate::linalg::{rat, Mat, Rat};
use crate::rep::{horospherical_basis, RepConfig};
use crate::seed;

/// A group element `prod exp(t_i N_i)` with its recipe.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledElement {
    pub matrix: Mat,
    pub recipe: Vec<RecipeStep>,
    pub seed: u64,
}

impl SampledElement {
    pub fn witness(&self) -> Witness {
        Witness {
            seed: self.seed,
            recipe: self.recipe.clone(),
        }
    }
}

struct Generator {
    index: usize,
    /// `N^j / j!` for `j = 1, 2, ...` until the power vanishes.
    terms: Vec<Mat>,
}

impl Generator {
    fn new(index: usize, n: &Mat) -> Self {
        let mut terms = Vec::new();
        let mut term = n.clone();
        let mut j = 1;
        while !term.is_zero() {
            terms.push(term.clone());
            j += 1;
            term = (&term * n).scale(&rat(1, j));
        }
        Self { index, terms }
    }

    fn exp(&self, t: &Rat, dim: usize) -> Mat {
        let mut out = Mat::identity(dim);
        let mut tj = Rat::one();
        for term in &self.terms {
            tj *= t;
            out = &out + &term.scale(&tj);
        }
        out
    }
}

/// Draws products of horospherical exponentials for one configuration.
pub struct Sampler {
    dim: usize,
    plus: Vec<Generator>,
    minus: Vec<Generator>,
    by_index: Vec<Option<(bool, usize)>>,
}

impl Sampler {
    pub fn new(cfg: &RepConfig) -> Result<Self, GenericError> {
        let (up, down) = horospherical_basis(cfg)?;
        let plus: Vec<Generator> = cfg
            .u_plus_indices
            .iter()
            .zip(&up)
            .map(|(&i, m)| Generator::new(i, m))
            .collect();
        let minus: Vec<Generator> = cfg
            .u_minus_indices
            .iter()
            .zip(&down)
            .map(|(&i, m)| Generator::new(i, m))
            .collect();
        let mut by_index = vec![None; cfg.h_dim];
        for (k, g) in plus.iter().enumerate() {
            by_index[g.index] = Some((true, k));
        }
        for (k, g) in minus.iter().enumerate() {
            by_index[g.index] = Some((false, k));
        }
        Ok(Self {
            dim: cfg.n,
            plus,
            minus,
            by_index,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    /// `complexity` factors alternating between the expanding and
    /// contracting generators, each with `t = p/q`, `p in [-9, 9]`, `q in [1, 9]`.
    pub fn sample(&self, seed: u64, complexity: usize) -> Result<SampledElement, GenericError> {
        if complexity == 0 {
            return Err(GenericError::ZeroComplexity);
        }
        let mut rng = seed::rng(seed);
        let mut recipe = Vec::with_capacity(complexity);
        for i in 0..complexity {
            let pool = match (i % 2 == 0, self.plus.is_empty(), self.minus.is_empty()) {
                (_, true, true) => break,
                (true, false, _) | (false, _, true) => &self.plus,
                _ => &self.minus,
            };
            // Round-robin inside each pool so every generator is used.
            let g = &pool[(i / 2) % pool.len()];
            let p: i64 = loop {
                let p = rng.gen_range(-9..=9);
                if p != 0 {
                    break p;
                }
            };
            let q: i64 = rng.gen_range(1..=9);
            recipe.push(RecipeStep {
                generator: g.index,
                t: rat(p, q),
            });
        }
        let matrix = self.replay(&recipe)?;
        Ok(SampledElement {
            matrix,
            recipe,
            seed,
        })
    }

    /// Rebuilds the matrix of a recipe.
    pub fn replay(&self, recipe: &[RecipeStep]) -> Result<Mat, GenericError> {
        let mut out = Mat::identity(self.dim);
        for step in recipe {
            let (up, k) =
                self.by_index
                    .get(step.generator)
                    .copied()
                    .flatten()
                    .ok_or(GenericError::Spec(format!(
                        "generator {} is not horospherical",
                        step.generator
                    )))?;
            if step.t.is_zero() {
                continue;
            }
            let g = if up { &self.plus[k] } else { &self.minus[k] };
            out = &out * &g.exp(&step.t, self.dim);
        }
        Ok(out)
    }
}

pub fn sample_element(
    cfg: &RepConfig,
    seed: u64,
    complexity: usize,
) -> Result<SampledElement, GenericError> {
    Sampler::new(cfg)?.sample(seed, complexity)
}

/// Number of factors per sampled element: six per horospherical generator.
///
/// With only two factors per generator, products of small-height rational
/// exponentials land on the non-generic locus in roughly 1% of draws
/// (e.g. `exp(F) exp(-9/8 E) exp(8 F)` is upper triangular in `SL_2`).
pub fn default_complexity(cfg: &RepConfig) -> usize {
    6 * (cfg.u_plus_indices.len() + cfg.u_minus_indices.len())
}
