//! Burnside closure test: the matrices of `h` generate the full matrix
//! algebra `M_n` exactly when `V` is absolutely irreducible.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::RepConfig;
use crate::linalg::{Mat, Rat, Subspace};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IrreducibleVerdict {
    AbsolutelyIrreducible,
    Reducible {
        witness: Subspace,
    },
    /// No full algebra and no invariant coordinate closure; `algebra_dim`
    /// is the exact dimension when it was computed.
    Inconclusive {
        algebra_dim: Option<usize>,
    },
}

impl IrreducibleVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            IrreducibleVerdict::AbsolutelyIrreducible => "absolutely_irreducible",
            IrreducibleVerdict::Reducible { .. } => "reducible",
            IrreducibleVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Above this size the modular closure is skipped.
const MODULAR_LIMIT: usize = 24;
/// Above this size the exact rational closure is skipped.
const EXACT_LIMIT: usize = 12;
const PRIME: u64 = 4_294_967_291;

pub fn check_irreducible(cfg: &RepConfig) -> IrreducibleVerdict {
    let n = cfg.n;
    // A full algebra mod p forces a full algebra over Q: reduction can only
    // lower the rank of the spanning words.
    if n <= MODULAR_LIMIT {
        if let Some(gens) = cfg
            .h_basis
            .iter()
            .map(|x| x.entries().iter().map(to_fp).collect::<Option<Vec<Fp>>>())
            .collect::<Option<Vec<_>>>()
        {
            if algebra_dim(n, &gens) == n * n {
                return IrreducibleVerdict::AbsolutelyIrreducible;
            }
        }
    }
    let mut algebra = None;
    if n <= EXACT_LIMIT {
        let gens: Vec<Vec<Rat>> = cfg.h_basis.iter().map(|x| x.entries().to_vec()).collect();
        let dim = algebra_dim(n, &gens);
        if dim == n * n {
            return IrreducibleVerdict::AbsolutelyIrreducible;
        }
        algebra = Some(dim);
    }
    for j in 0..n {
        let mut e = vec![<Rat as Zero>::zero(); n];
        e[j] = <Rat as One>::one();
        let closure = invariant_closure(&cfg.h_basis, e);
        if closure.dim() < n {
            return IrreducibleVerdict::Reducible { witness: closure };
        }
    }
    IrreducibleVerdict::Inconclusive {
        algebra_dim: algebra,
    }
}

/// Smallest subspace containing `v` and stable under every generator.
fn invariant_closure(gens: &[Mat], v: Vec<Rat>) -> Subspace {
    let n = v.len();
    let mut span = Echelon::default();
    let mut queue = Vec::new();
    if let Some(r) = span.insert(v) {
        queue.push(r);
    }
    while let Some(w) = queue.pop() {
        for g in gens {
            if let Some(r) = span.insert(g.mul_vec(&w)) {
                queue.push(r);
            }
        }
    }
    Subspace::from_vectors(n, &span.rows)
}

/// Dimension of the unital associative algebra generated by `gens`
/// (row-major `n x n` matrices).
fn algebra_dim<F: Field>(n: usize, gens: &[Vec<F>]) -> usize {
    let mut span = Echelon::default();
    let mut identity = vec![F::zero(); n * n];
    for i in 0..n {
        identity[i * n + i] = F::one();
    }
    let mut queue = vec![span.insert(identity).expect("identity is nonzero")];
    while let Some(a) = queue.pop() {
        for g in gens {
            if span.rows.len() == n * n {
                return n * n;
            }
            if let Some(r) = span.insert(mat_mul(n, &a, g)) {
                queue.push(r);
            }
        }
    }
    span.rows.len()
}

fn mat_mul<F: Field>(n: usize, a: &[F], b: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j] = out[i * n + j].add(&x.mul(y));
                }
            }
        }
    }
    out
}

/// Incrementally grown echelon basis: each stored row has a leading one at
/// its pivot and zeros at the pivots of earlier rows.
struct Echelon<F> {
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F> Default for Echelon<F> {
    fn default() -> Self {
        Self {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }
}

impl<F: Field> Echelon<F> {
    /// Reduces `v`; if it is new, stores and returns the reduced row.
    fn insert(&mut self, mut v: Vec<F>) -> Option<Vec<F>> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&f.mul(r));
                }
            }
        }
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].inv();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        self.rows.push(v.clone());
        self.pivots.push(p);
        Some(v)
    }
}

trait Field: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl Field for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Fp(u64);

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, other: &Self) -> Self {
        Fp((self.0 + other.0) % PRIME)
    }
    fn sub(&self, other: &Self) -> Self {
        Fp((self.0 + PRIME - other.0) % PRIME)
    }
    fn mul(&self, other: &Self) -> Self {
        Fp(self.0 * other.0 % PRIME)
    }
    fn inv(&self) -> Self {
        // Fermat: x^(p-2).
        let (mut base, mut exp, mut acc) = (self.0, PRIME - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % PRIME;
            }
            base = base * base % PRIME;
            exp >>= 1;
        }
        Fp(acc)
    }
}

/// Reduction mod p; `None` when p divides the denominator.
fn to_fp(x: &Rat) -> Option<Fp> {
    let p = BigInt::from(PRIME);
    let red = |v: &BigInt| -> u64 {
        let r = ((v % &p) + &p) % &p;
        r.to_u64().expect("reduced below p")
    };
    let d = red(x.denom());
    (d != 0).then(|| Fp(red(x.numer())).mul(&Fp(d).inv()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::rep::{build_config, ConfigKind};

    #[test]
    fn sym1_generates_m2() {
        let cfg = build_config(ConfigKind::Sl2Sym { k: 1 }).unwrap();
        let gens: Vec<Vec<Rat>> = cfg.h_basis.iter().map(|x| x.entries().to_vec()).collect();
        assert_eq!(algebra_dim(2, &gens), 4);
        assert_eq!(
            check_irreducible(&cfg),
            IrreducibleVerdict::AbsolutelyIrreducible
        );
    }

    #[test]
    fn two_copies_of_sym1_are_reducible() {
        let sym = build_config(ConfigKind::Sl2Sym { k: 1 }).unwrap();
        let double = |m: &Mat| {
            let mut out = Mat::zeros(4, 4);
            for i in 0..2 {
                for j in 0..2 {
                    out[(i, j)] = m[(i, j)].clone();
                    out[(i + 2, j + 2)] = m[(i, j)].clone();
                }
            }
            out
        };
        let cfg = RepConfig::from_parts(
            "sym1+sym1",
            sym.h_basis.iter().map(double).collect(),
            double(&sym.a_action),
        )
        .unwrap();
        match check_irreducible(&cfg) {
            IrreducibleVerdict::Reducible { witness } => {
                assert_eq!(witness, Subspace::coordinate(4, &[0, 1]));
            }
            other => panic!("expected reducible, got {other:?}"),
        }
    }

    #[test]
    fn so21_complement_is_absolutely_irreducible() {
        let cfg = build_config(ConfigKind::SoPq { p: 2, q: 1 }).unwrap();
        assert_eq!(
            check_irreducible(&cfg),
            IrreducibleVerdict::AbsolutelyIrreducible
        );
        let gens: Vec<Vec<Rat>> = cfg.h_basis.iter().map(|x| x.entries().to_vec()).collect();
        assert_eq!(algebra_dim(5, &gens), 25);
    }

    #[test]
    fn modular_reduction() {
        assert_eq!(to_fp(&int(-1)), Some(Fp(PRIME - 1)));
        let half = to_fp(&Rat::new(1.into(), 2.into())).unwrap();
        assert_eq!(half.mul(&Fp(2)), Fp(1));
        assert_eq!(to_fp(&Rat::new(1.into(), BigInt::from(PRIME))), None);
    }
}
