use nalgebra::{Cholesky, DMatrix, DVector};

use super::{BLDatum, BLError};

/// Trapezoid rule for `f` over the cube `[-l, l]^dim` with `points` nodes per axis.
fn cube_integral(
    dim: usize,
    l: f64,
    points: usize,
    mut f: impl FnMut(&DVector<f64>) -> f64,
) -> f64 {
    let h = 2.0 * l / (points - 1) as f64;
    let weight = |i: usize| if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
    let mut idx = vec![0usize; dim];
    let mut x = DVector::from_element(dim, -l);
    let mut total = 0.0;
    loop {
        let w: f64 = idx.iter().map(|&i| weight(i)).product();
        total += w * f(&x);
        let mut axis = 0;
        loop {
            if axis == dim {
                return total * h.powi(dim as i32);
            }
            idx[axis] += 1;
            if idx[axis] < points {
                x[axis] = -l + h * idx[axis] as f64;
                break;
            }
            idx[axis] = 0;
            x[axis] = -l;
            axis += 1;
        }
    }
}

/// Ratio of the two sides of the BL inequality for the Gaussian inputs
/// `f_j(y) = exp(-pi y^T M_j y)`, with every integral done by quadrature
/// rather than by the determinant formula.
pub fn quadrature_ratio(
    d: &BLDatum,
    m_list: &[DMatrix<f64>],
    half_width: f64,
    points: usize,
) -> Result<f64, BLError> {
    if m_list.len() != d.maps.len() || points < 2 || half_width <= 0.0 {
        return Err(BLError::InvalidDatum("bad quadrature arguments".into()));
    }
    for (m, map) in m_list.iter().zip(&d.maps) {
        if m.nrows() != map.nj || m.ncols() != map.nj || Cholesky::new(m.clone()).is_none() {
            return Err(BLError::NotPositiveDefinite);
        }
    }
    let p = d.exponents_f64();
    let pi = std::f64::consts::PI;
    let lhs = cube_integral(d.n, half_width, points, |x| {
        let mut e = 0.0;
        for (j, map) in d.maps.iter().enumerate() {
            let y = &map.matrix * x;
            e += p[j] * y.dot(&(&m_list[j] * &y));
        }
        (-pi * e).exp()
    });
    let mut rhs = 1.0;
    for (j, map) in d.maps.iter().enumerate() {
        if p[j] == 0.0 {
            continue;
        }
        let mass = cube_integral(map.nj, half_width, points, |y| {
            (-pi * y.dot(&(&m_list[j] * y))).exp()
        });
        rhs *= mass.powf(p[j]);
    }
    Ok(lhs / rhs)
}
