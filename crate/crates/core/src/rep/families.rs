use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::config::{principal_diagonal, unit, SpanCoords};
use super::{ConfigKind, RepConfig, RepError, SimpleKind, MAX_DIM};
use crate::linalg::{int, kernel_basis, Mat, Rat, Subspace};

/// Builds one of the example configurations.
pub fn build_config(kind: ConfigKind) -> Result<RepConfig, RepError> {
    let n = expected_dim(kind)?;
    if n > MAX_DIM {
        return Err(RepError::Unsupported(format!(
            "{kind}: dim V = {n} exceeds {MAX_DIM}"
        )));
    }
    let name = kind.to_string();
    let cfg = match kind {
        ConfigKind::SoPq { p, q } => {
            let d = p + q;
            let mut j = Mat::zeros(d, d);
            j[(0, d - 1)] = Rat::one();
            j[(d - 1, 0)] = Rat::one();
            for i in 1..d - 1 {
                j[(i, i)] = if i < p { int(1) } else { int(-1) };
            }
            let mut a = vec![Rat::zero(); d];
            a[0] = int(1);
            a[d - 1] = int(-1);
            complement_config(&name, &isometry_algebra(&j), &a)?
        }
        ConfigKind::Sp2n { n } => {
            let (j, a) = symplectic_form(n);
            complement_config(&name, &isometry_algebra(&j), &a)?
        }
        ConfigKind::Diagonal(SimpleKind::Sl(d)) => {
            let g = sl_basis(d);
            matrix_lie_config(&name, &g, &g, &principal_diagonal(d))?
        }
        ConfigKind::Diagonal(SimpleKind::Sp(n)) => {
            let (j, a) = symplectic_form(n);
            let g = isometry_algebra(&j);
            matrix_lie_config(&name, &g, &g, &a)?
        }
        ConfigKind::Tensor { n, m } => {
            let left = adjoint_sl(n)?;
            let right = adjoint_sl(m)?;
            tensor_config(&name, &left, &right)?
        }
        ConfigKind::TensorStd { n, m } => {
            let left = standard_sl(n);
            let right = standard_sl(m);
            tensor_config(&name, &left, &right)?
        }
        ConfigKind::Sl2Sym { k } => sym_power(&name, k)?,
    };
    debug_assert_eq!(cfg.n, n);
    Ok(cfg)
}

fn expected_dim(kind: ConfigKind) -> Result<usize, RepError> {
    let bad = |why: &str| Err(RepError::Unsupported(format!("{kind}: {why}")));
    match kind {
        ConfigKind::SoPq { p, q } => {
            if p == 0 || q == 0 || p + q < 3 {
                return bad("need p, q >= 1 and p + q >= 3");
            }
            let d = p + q;
            Ok(d * (d + 1) / 2 - 1)
        }
        ConfigKind::Sp2n { n } => {
            if n < 2 {
                return bad("need n >= 2");
            }
            Ok(2 * n * n - n - 1)
        }
        ConfigKind::Diagonal(SimpleKind::Sl(d)) => {
            if d < 2 {
                return bad("need d >= 2");
            }
            Ok(d * d - 1)
        }
        ConfigKind::Diagonal(SimpleKind::Sp(n)) => {
            if n < 1 {
                return bad("need n >= 1");
            }
            Ok(n * (2 * n + 1))
        }
        ConfigKind::Tensor { n, m } => {
            if n < 2 || m < 2 {
                return bad("need n, m >= 2");
            }
            Ok((n * n - 1) * (m * m - 1))
        }
        ConfigKind::TensorStd { n, m } => {
            if n < 2 || m < 2 {
                return bad("need n, m >= 2");
            }
            Ok(n * m)
        }
        ConfigKind::Sl2Sym { k } => {
            if k < 1 {
                return bad("need k >= 1");
            }
            Ok(k + 1)
        }
    }
}

/// Antidiagonal symplectic form of size `2n` and the regular element
/// `diag(n, ..., 1, -1, ..., -n)` of its Cartan subalgebra.
fn symplectic_form(n: usize) -> (Mat, Vec<Rat>) {
    let d = 2 * n;
    let mut j = Mat::zeros(d, d);
    for i in 0..d {
        j[(i, d - 1 - i)] = if i < n { int(1) } else { int(-1) };
    }
    let a = (0..d)
        .map(|i| {
            if i < n {
                int((n - i) as i64)
            } else {
                int(-((i - n + 1) as i64))
            }
        })
        .collect();
    (j, a)
}

fn sl_basis(d: usize) -> Vec<Mat> {
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(unit(d, i, j));
            }
        }
    }
    for i in 0..d - 1 {
        out.push(&unit(d, i, i) - &unit(d, i + 1, i + 1));
    }
    out
}

/// `{X : X^T J + J X = 0}`.
fn isometry_algebra(j: &Mat) -> Vec<Mat> {
    let d = j.nrows();
    let columns: Vec<Vec<Rat>> = (0..d * d)
        .map(|c| {
            let e = unit(d, c / d, c % d);
            (&(&e.transpose() * j) + &(j * &e)).entries().to_vec()
        })
        .collect();
    let ker = kernel_basis(&Mat::from_columns(d * d, &columns));
    unvec_all(d, &ker)
}

fn unvec_all(d: usize, s: &Subspace) -> Vec<Mat> {
    s.basis()
        .columns()
        .into_iter()
        .map(|v| Mat::new(d, d, v).expect("d*d entries"))
        .collect()
}

/// Trace-form orthocomplement of `h` in `sl_d`, with `h` acting by brackets.
fn complement_config(name: &str, h: &[Mat], a: &[Rat]) -> Result<RepConfig, RepError> {
    let d = a.len();
    let mut rows: Vec<Vec<Rat>> = h.iter().map(|x| x.transpose().entries().to_vec()).collect();
    rows.push(Mat::identity(d).entries().to_vec());
    let r = kernel_basis(&Mat::from_rows(rows)?);
    matrix_lie_config(name, h, &unvec_all(d, &r), a)
}

/// Splits the span of `space` (an ad(a)-stable subspace of `gl_d`) into
/// ad(a)-weight vectors, ordered by ascending weight.
fn split_by_weight(space: &[Mat], a: &[Rat]) -> Vec<Mat> {
    let d = a.len();
    let weights: BTreeSet<Rat> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| &a[i] - &a[j])
        .collect();
    let mut out = Vec::new();
    for w in weights {
        let projected: Vec<Vec<Rat>> = space
            .iter()
            .map(|x| {
                let mut v = x.entries().to_vec();
                for (idx, entry) in v.iter_mut().enumerate() {
                    if a[idx / d].clone() - &a[idx % d] != w {
                        *entry = Rat::zero();
                    }
                }
                v
            })
            .collect();
        out.extend(unvec_all(d, &Subspace::from_vectors(d * d, &projected)));
    }
    out
}

/// `h ⊂ gl_d` acting by brackets on an `h`-stable subspace `v ⊂ gl_d`.
fn matrix_lie_config(name: &str, h: &[Mat], v: &[Mat], a: &[Rat]) -> Result<RepConfig, RepError> {
    let h = split_by_weight(h, a);
    let v = split_by_weight(v, a);
    let n = v.len();
    let coords = SpanCoords::new(&v.iter().map(|x| x.entries().to_vec()).collect::<Vec<_>>())
        .expect("weight vectors of a subspace are independent");
    let rho = |x: &Mat| -> Result<Mat, RepError> {
        let cols = v
            .iter()
            .map(|y| {
                coords
                    .coords(x.commutator(y).entries())
                    .ok_or_else(|| RepError::BracketClosure("V is not h-stable".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mat::from_columns(n, &cols))
    };
    let h_action = h.iter().map(rho).collect::<Result<Vec<_>, _>>()?;
    let a_action = rho(&Mat::diagonal(a))?;
    RepConfig::from_parts(name, h_action, a_action)
}

fn adjoint_sl(d: usize) -> Result<RepConfig, RepError> {
    let g = sl_basis(d);
    matrix_lie_config("adjoint", &g, &g, &principal_diagonal(d))
}

fn standard_sl(d: usize) -> RepConfig {
    let a = principal_diagonal(d);
    let h = split_by_weight(&sl_basis(d), &a);
    RepConfig::from_parts("standard", h, Mat::diagonal(&a)).expect("sl_d is closed")
}

/// `h_1 ⊕ h_2` acting on `V_1 ⊗ V_2`, with `a = a_1 ⊗ 1 + 1 ⊗ a_2`.
fn tensor_config(name: &str, left: &RepConfig, right: &RepConfig) -> Result<RepConfig, RepError> {
    let i1 = Mat::identity(left.n);
    let i2 = Mat::identity(right.n);
    let mut h: Vec<Mat> = left.h_basis.iter().map(|x| x.kron(&i2)).collect();
    h.extend(right.h_basis.iter().map(|y| i1.kron(y)));
    let a = &left.a_action.kron(&i2) + &i1.kron(&right.a_action);
    Ok(RepConfig::from_parts(name, h, a)?.sorted_by_weight())
}

/// `Sym^k(R^2)` with basis `x^{k-i} y^i`, `e = x d/dy`, `f = y d/dx`, `a = h`.
fn sym_power(name: &str, k: usize) -> Result<RepConfig, RepError> {
    let n = k + 1;
    let mut e = Mat::zeros(n, n);
    let mut f = Mat::zeros(n, n);
    let mut h = Mat::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = int(k as i64 - 2 * i as i64);
        if i > 0 {
            e[(i - 1, i)] = int(i as i64);
        }
        if i < k {
            f[(i + 1, i)] = int((k - i) as i64);
        }
    }
    Ok(RepConfig::from_parts(name, vec![e, h.clone(), f], h)?.sorted_by_weight())
}
