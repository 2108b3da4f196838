use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{RepError, MAX_DIM};
use crate::linalg::rat::serde_rat_vec;
use crate::linalg::{rat, Mat, Rat};

/// An `(H, a, V)` configuration as exact matrices acting on `V = Q^n`.
///
/// `h_basis` consists of ad(a)-weight vectors sorted by ascending weight, so
/// the horospherical generators are exactly the basis elements of positive
/// (resp. negative) weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepConfig {
    pub name: String,
    pub n: usize,
    pub h_dim: usize,
    pub h_basis: Vec<Mat>,
    pub a_action: Mat,
    /// `tr(a_action^2)`; `a` is stored unnormalized and this is its squared
    /// scale in the trace form of `V`.
    #[serde(with = "crate::linalg::rat::serde_rat")]
    pub a_norm_squared: Rat,
    /// ad(a)-eigenvalue of each `h_basis` element.
    #[serde(with = "serde_rat_vec")]
    pub h_weights: Vec<Rat>,
    /// `h_internal[i]` is ad(X_i) in the basis `h_basis`.
    pub h_internal: Option<Vec<Mat>>,
    pub u_plus_indices: Vec<usize>,
    pub u_minus_indices: Vec<usize>,
}

impl RepConfig {
    /// Assembles a configuration from an action of `h` and the element `a`.
    ///
    /// `h_basis` must consist of ad(a)-eigenvectors (any order); it is
    /// re-sorted by weight. Closure under brackets is checked exactly.
    pub fn from_parts(name: &str, h_basis: Vec<Mat>, a_action: Mat) -> Result<Self, RepError> {
        let n = a_action.nrows();
        if !a_action.is_square() || h_basis.iter().any(|x| x.nrows() != n || x.ncols() != n) {
            return Err(RepError::Unsupported(
                "action matrices must be n x n".into(),
            ));
        }
        if h_basis.iter().any(|x| !x.trace().is_zero()) {
            return Err(RepError::Unsupported(
                "h_basis element with nonzero trace".into(),
            ));
        }
        if !a_action.is_diagonal() {
            return Err(RepError::Rationality(
                "a is not diagonal in the stored coordinates".into(),
            ));
        }
        let span = SpanCoords::new(
            &h_basis
                .iter()
                .map(|x| x.entries().to_vec())
                .collect::<Vec<_>>(),
        )
        .ok_or_else(|| RepError::Unsupported("h_basis is linearly dependent".into()))?;
        if span.coords(a_action.entries()).is_none() {
            return Err(RepError::Unsupported("a does not lie in h".into()));
        }

        let mut weights = Vec::with_capacity(h_basis.len());
        for (j, x) in h_basis.iter().enumerate() {
            let c = span
                .coords(a_action.commutator(x).entries())
                .ok_or_else(|| RepError::BracketClosure(format!("[a, X_{j}]")))?;
            if c.iter().enumerate().any(|(i, v)| i != j && !v.is_zero()) {
                return Err(RepError::Unsupported(format!(
                    "h_basis[{j}] is not an ad(a)-eigenvector"
                )));
            }
            weights.push(c[j].clone());
        }

        let mut order: Vec<usize> = (0..h_basis.len()).collect();
        order.sort_by(|&i, &j| weights[i].cmp(&weights[j]));
        let h_basis: Vec<Mat> = order.iter().map(|&i| h_basis[i].clone()).collect();
        let h_weights: Vec<Rat> = order.iter().map(|&i| weights[i].clone()).collect();
        let h_internal = internal_action(&h_basis)?;

        let h_dim = h_basis.len();
        let u_plus_indices = (0..h_dim).filter(|&i| h_weights[i] > Rat::zero()).collect();
        let u_minus_indices = (0..h_dim).filter(|&i| h_weights[i] < Rat::zero()).collect();
        let a_norm_squared = (&a_action * &a_action).trace();
        Ok(Self {
            name: name.to_string(),
            n,
            h_dim,
            h_basis,
            a_action,
            a_norm_squared,
            h_weights,
            h_internal: Some(h_internal),
            u_plus_indices,
            u_minus_indices,
        })
    }

    /// Eigenvalue of `a` on each coordinate of `V`.
    pub fn coordinate_weights(&self) -> Vec<Rat> {
        (0..self.n).map(|i| self.a_action[(i, i)].clone()).collect()
    }

    /// Re-checks every structural invariant, e.g. after loading from JSON.
    pub fn validate(&self) -> Result<(), RepError> {
        if self.n > MAX_DIM {
            return Err(RepError::Unsupported(format!(
                "dim V = {} exceeds {MAX_DIM}",
                self.n
            )));
        }
        let rebuilt = Self::from_parts(&self.name, self.h_basis.clone(), self.a_action.clone())?;
        if rebuilt.h_basis != self.h_basis || self.h_dim != self.h_basis.len() {
            return Err(RepError::Unsupported("h_basis not sorted by weight".into()));
        }
        if self.h_internal.is_some() && self.h_internal != rebuilt.h_internal {
            return Err(RepError::BracketClosure(
                "stored h_internal disagrees".into(),
            ));
        }
        if self.u_plus_indices != rebuilt.u_plus_indices
            || self.u_minus_indices != rebuilt.u_minus_indices
        {
            return Err(RepError::Unsupported(
                "horospherical indices disagree".into(),
            ));
        }
        Ok(())
    }

    /// Reorders the coordinates of `V` so `a` has ascending diagonal.
    pub(crate) fn sorted_by_weight(mut self) -> Self {
        let w = self.coordinate_weights();
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.sort_by(|&i, &j| w[i].cmp(&w[j]));
        let conj = |m: &Mat| {
            let mut out = Mat::zeros(m.nrows(), m.ncols());
            for (i, &pi) in perm.iter().enumerate() {
                for (j, &pj) in perm.iter().enumerate() {
                    out[(i, j)] = m[(pi, pj)].clone();
                }
            }
            out
        };
        self.h_basis = self.h_basis.iter().map(conj).collect();
        self.a_action = conj(&self.a_action);
        self
    }
}

fn internal_action(h_basis: &[Mat]) -> Result<Vec<Mat>, RepError> {
    let h = h_basis.len();
    let span = SpanCoords::new(
        &h_basis
            .iter()
            .map(|x| x.entries().to_vec())
            .collect::<Vec<_>>(),
    )
    .expect("independence checked by caller");
    let mut ad = vec![Mat::zeros(h, h); h];
    for i in 0..h {
        for j in i + 1..h {
            let c = span
                .coords(h_basis[i].commutator(&h_basis[j]).entries())
                .ok_or_else(|| RepError::BracketClosure(format!("[X_{i}, X_{j}]")))?;
            for (k, v) in c.into_iter().enumerate() {
                if !v.is_zero() {
                    ad[j][(k, i)] = -v.clone();
                    ad[i][(k, j)] = v;
                }
            }
        }
    }
    Ok(ad)
}

/// Coordinates with respect to a fixed list of independent vectors.
pub(crate) struct SpanCoords {
    vectors: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    inv: Mat,
}

impl SpanCoords {
    /// `None` when the vectors are dependent.
    pub(crate) fn new(vectors: &[Vec<Rat>]) -> Option<Self> {
        let len = vectors.first().map_or(0, Vec::len);
        let m = Mat::from_rows(vectors.to_vec()).ok()?;
        let (_, pivots) = m.rref();
        if pivots.len() != vectors.len() {
            return None;
        }
        let inv = m.select_columns(&pivots).inverse().ok()?;
        debug_assert!(pivots.iter().all(|&p| p < len));
        Some(Self {
            vectors: vectors.to_vec(),
            pivots,
            inv,
        })
    }

    /// Coefficients `c` with `sum c_i v_i = t`, or `None` if `t` is outside the span.
    pub(crate) fn coords(&self, t: &[Rat]) -> Option<Vec<Rat>> {
        let k = self.vectors.len();
        let mut c = vec![Rat::zero(); k];
        for (s, &p) in self.pivots.iter().enumerate() {
            if t[p].is_zero() {
                continue;
            }
            for (i, ci) in c.iter_mut().enumerate() {
                let f = &self.inv[(s, i)];
                if !f.is_zero() {
                    *ci += &t[p] * f;
                }
            }
        }
        let mut residual = t.to_vec();
        for (ci, v) in c.iter().zip(&self.vectors) {
            if ci.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(v) {
                if !x.is_zero() {
                    *r -= ci * x;
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(c)
    }
}

/// `diag(d-1, d-3, ..., 1-d)`.
pub(crate) fn principal_diagonal(d: usize) -> Vec<Rat> {
    (0..d)
        .map(|i| rat(d as i64 - 1 - 2 * i as i64, 1))
        .collect()
}

/// Matrix unit `E_ij` of size `d`.
pub(crate) fn unit(d: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(d, d);
    m[(i, j)] = Rat::one();
    m
}
