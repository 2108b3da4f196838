//! Subspaces of `Q^n` stored as column spans in reduced column echelon form.
//!
//! Because the form is canonical, two subspaces are equal exactly when their
//! stored bases are equal, so `PartialEq` is subspace equality.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::mat::{rref_in_place, Mat};
use super::rat::{one, zero, Rat};
use super::LinalgError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Mat::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Mat::identity(ambient),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let cols: Vec<Vec<Rat>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![zero(); ambient];
                v[i] = one();
                v
            })
            .collect();
        canonicalize(&Mat::from_columns(ambient, &cols))
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        canonicalize(&Mat::from_columns(ambient, vectors))
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Columns span the subspace; reduced column echelon form.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient);
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        let extended = self
            .basis
            .hstack(&Mat::from_columns(self.ambient, &[v.to_vec()]))
            .expect("same ambient");
        extended.rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient
            && self
                .basis
                .hstack(&other.basis)
                .map(|m| m.rank() == self.dim())
                .unwrap_or(false)
    }

    /// Image `g(self)` under a square linear map.
    pub fn image(&self, g: &Mat) -> Subspace {
        assert_eq!(g.ncols(), self.ambient, "map/ambient mismatch");
        canonicalize(&(g * &self.basis))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }
}

/// Column span of `m`, canonicalized. A zero matrix gives the zero subspace.
pub fn canonicalize(m: &Mat) -> Subspace {
    let ambient = m.nrows();
    let mut rows: Vec<Vec<Rat>> = (0..m.ncols()).map(|j| m.column(j)).collect();
    let pivots = rref_in_place(&mut rows, ambient, true);
    let basis = Mat::from_columns(ambient, &rows[..pivots.len()]);
    Subspace { ambient, basis }
}

/// `ker(m)` as a subspace of `Q^{cols}`.
pub fn kernel_basis(m: &Mat) -> Subspace {
    let cols = m.ncols();
    let (r, pivots) = m.rref();
    let mut is_pivot = vec![None; cols];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    let vectors: Vec<Vec<Rat>> = (0..cols)
        .filter(|&f| is_pivot[f].is_none())
        .map(|f| {
            let mut v = vec![zero(); cols];
            v[f] = one();
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = -r[(row, f)].clone();
            }
            v
        })
        .collect();
    canonicalize(&Mat::from_columns(cols, &vectors))
}

pub fn subspace_sum(u: &Subspace, w: &Subspace) -> Result<Subspace, LinalgError> {
    u.check_ambient(w)?;
    Ok(canonicalize(&u.basis.hstack(&w.basis)?))
}

/// `u ∩ w` via the kernel of the stacked matrix `[B_u | -B_w]`.
pub fn subspace_intersect(u: &Subspace, w: &Subspace) -> Result<Subspace, LinalgError> {
    u.check_ambient(w)?;
    if u.is_zero() || w.is_zero() {
        return Ok(Subspace::zero(u.ambient));
    }
    let stacked = u.basis.hstack(&(-&w.basis))?;
    let ker = kernel_basis(&stacked);
    let k = u.dim();
    let coeffs = ker.basis.select_rows(&(0..k).collect::<Vec<_>>());
    Ok(canonicalize(&(&u.basis * &coeffs)))
}

/// Orthogonal complement for the standard dot product.
pub fn orthogonal_complement(u: &Subspace) -> Subspace {
    if u.is_zero() {
        return Subspace::full(u.ambient);
    }
    kernel_basis(&u.basis.transpose())
}

/// Exact orthogonal projector onto `u`: `B (B^T B)^{-1} B^T`.
pub fn orthogonal_projector(u: &Subspace) -> Mat {
    if u.is_zero() {
        return Mat::zeros(u.ambient, u.ambient);
    }
    let b = &u.basis;
    let bt = b.transpose();
    let gram_inv = (&bt * b).inverse().expect("basis columns are independent");
    &(b * &gram_inv) * &bt
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let basis = Mat::deserialize(d)?;
        Ok(canonicalize(&basis))
    }
}
