use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::BLError;
use crate::linalg::rat::to_f64;
use crate::linalg::{format_rat, int, parse_rat, rat, Mat, Rat, Subspace};
use crate::rep::{flag_projector, weight_decompose, RepConfig};

/// One surjection `pi_j : R^n -> R^{n_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BLMap {
    pub nj: usize,
    /// Exact matrix, when known.
    pub exact: Option<Mat>,
    /// Matrix used by the numerical estimators.
    pub matrix: DMatrix<f64>,
}

impl BLMap {
    pub fn from_exact(m: Mat) -> Self {
        Self {
            nj: m.nrows(),
            matrix: m.to_f64(),
            exact: Some(m),
        }
    }

    pub fn from_float(m: DMatrix<f64>) -> Self {
        Self {
            nj: m.nrows(),
            exact: None,
            matrix: m,
        }
    }
}

/// A Brascamp–Lieb datum `{pi_j, p_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BLDatum {
    pub n: usize,
    pub maps: Vec<BLMap>,
    pub exponents: Vec<Rat>,
}

impl BLDatum {
    /// Validates shapes, surjectivity and nonnegative exponents.
    pub fn new(n: usize, maps: Vec<BLMap>, exponents: Vec<Rat>) -> Result<Self, BLError> {
        if maps.len() != exponents.len() {
            return Err(BLError::InvalidDatum(format!(
                "{} maps but {} exponents",
                maps.len(),
                exponents.len()
            )));
        }
        if maps.is_empty() || n == 0 {
            return Err(BLError::InvalidDatum("empty datum".into()));
        }
        for (j, m) in maps.iter().enumerate() {
            if m.matrix.nrows() != m.nj || m.matrix.ncols() != n {
                return Err(BLError::InvalidDatum(format!(
                    "map {j} is not {} x {n}",
                    m.nj
                )));
            }
            let rank = match &m.exact {
                Some(e) => {
                    if e.nrows() != m.nj || e.ncols() != n {
                        return Err(BLError::InvalidDatum(format!(
                            "exact map {j} has wrong shape"
                        )));
                    }
                    e.rank()
                }
                None => numerical_rank(&m.matrix),
            };
            if rank != m.nj || m.nj == 0 {
                return Err(BLError::InvalidDatum(format!("map {j} is not surjective")));
            }
        }
        if let Some(p) = exponents.iter().find(|p| p.is_negative()) {
            return Err(BLError::InvalidDatum(format!(
                "negative exponent {}",
                format_rat(p)
            )));
        }
        Ok(Self { n, maps, exponents })
    }

    /// Identity maps on `R^n` (Hölder's inequality when the exponents sum to 1).
    pub fn holder(n: usize, exponents: Vec<Rat>) -> Result<Self, BLError> {
        let maps = exponents
            .iter()
            .map(|_| BLMap::from_exact(Mat::identity(n)))
            .collect();
        Self::new(n, maps, exponents)
    }

    /// The `n` coordinate projections forgetting one coordinate, `p_j = 1/(n-1)`.
    pub fn loomis_whitney(n: usize) -> Result<Self, BLError> {
        if n < 2 {
            return Err(BLError::InvalidDatum("Loomis-Whitney needs n >= 2".into()));
        }
        let maps = (0..n)
            .map(|skip| {
                let keep: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
                BLMap::from_exact(Mat::identity(n).select_rows(&keep))
            })
            .collect();
        Self::new(n, maps, vec![rat(1, n as i64 - 1); n])
    }

    pub fn is_exact(&self) -> bool {
        self.maps.iter().all(|m| m.exact.is_some())
    }

    /// `sum p_j n_j == n`, exactly.
    pub fn scaling_ok(&self) -> bool {
        let total: Rat = self
            .maps
            .iter()
            .zip(&self.exponents)
            .map(|(m, p)| p * int(m.nj as i64))
            .sum();
        total == int(self.n as i64)
    }

    pub fn exponents_f64(&self) -> Vec<f64> {
        self.exponents.iter().map(to_f64).collect()
    }

    /// Replaces every map by `pi_j (I - v v^T / |v|^2)`. Then `span(v)` lies
    /// in every kernel, so `U = span(v)` violates the dimension condition
    /// whenever the maps stay surjective.
    pub fn stuff_kernel(&self, v: &[Rat]) -> Result<Self, BLError> {
        if v.len() != self.n || v.iter().all(Zero::is_zero) {
            return Err(BLError::InvalidDatum("need a nonzero vector in R^n".into()));
        }
        let norm2: Rat = v.iter().map(|x| x * x).sum();
        let mut proj = Mat::identity(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                proj[(i, j)] -= &v[i] * &v[j] / &norm2;
            }
        }
        let maps = self
            .maps
            .iter()
            .map(|m| {
                m.exact
                    .as_ref()
                    .map(|e| BLMap::from_exact(e * &proj))
                    .ok_or(BLError::NotExact)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(self.n, maps, self.exponents.clone())
    }
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * top.max(1e-300)).count()
}

/// How `build_datum_from_rep` forms its maps.
#[derive(Clone, Debug, PartialEq)]
pub enum DatumMode {
    /// `pi_W ∘ h_j`.
    Subspace { w: Subspace, elements: Vec<Mat> },
    /// `pi^(mu) ∘ u_j`.
    Flag { mu: Rat, elements: Vec<Mat> },
}

/// Maps `pi_W ∘ h_j` with the uniform exponent `n / (k m)`.
///
/// The exact maps use the echelon basis of `W` (`B_W^T h_j`), which has the
/// same kernel as the orthogonal projection and so the same feasibility;
/// the float maps use an orthonormal basis of `W`, i.e. the projection itself.
pub fn build_datum_from_rep(cfg: &RepConfig, mode: &DatumMode) -> Result<BLDatum, BLError> {
    let (w, elements) = match mode {
        DatumMode::Subspace { w, elements } => (w.clone(), elements),
        DatumMode::Flag { mu, elements } => {
            let dec = weight_decompose(cfg)?;
            (flag_projector(&dec, mu)?.flag, elements)
        }
    };
    let n = cfg.n;
    if w.ambient_dim() != n || w.is_zero() {
        return Err(BLError::InvalidDatum(
            "W must be a nonzero subspace of V".into(),
        ));
    }
    let m = elements.len();
    if m == 0 {
        return Err(BLError::InvalidDatum(
            "need at least one group element".into(),
        ));
    }
    let k = w.dim();
    let p = rat(n as i64, (k * m) as i64);
    if p > int(1) {
        return Err(BLError::InvalidExponent(format_rat(&p)));
    }
    let bt = w.basis().transpose();
    let q = w.basis().to_f64().qr().q();
    let maps = elements
        .iter()
        .map(|h| {
            if h.nrows() != n || h.ncols() != n {
                return Err(BLError::InvalidDatum("element is not n x n".into()));
            }
            Ok(BLMap {
                nj: k,
                exact: Some(&bt * h),
                matrix: q.transpose() * h.to_f64(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    BLDatum::new(n, maps, vec![p; m])
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    nj: usize,
    matrix: Vec<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    float_matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct DatumRepr {
    n: usize,
    maps: Vec<MapRepr>,
    exponents: Vec<String>,
}

fn float_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

impl Serialize for BLDatum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let maps = self
            .maps
            .iter()
            .map(|m| match &m.exact {
                Some(e) => MapRepr {
                    nj: m.nj,
                    matrix: (0..e.nrows())
                        .map(|i| e.row(i).iter().map(|x| format_rat(x).into()).collect())
                        .collect(),
                    float_matrix: (e.to_f64() != m.matrix).then(|| float_rows(&m.matrix)),
                },
                None => MapRepr {
                    nj: m.nj,
                    matrix: float_rows(&m.matrix)
                        .into_iter()
                        .map(|r| r.into_iter().map(serde_json::Value::from).collect())
                        .collect(),
                    float_matrix: None,
                },
            })
            .collect();
        DatumRepr {
            n: self.n,
            maps,
            exponents: self.exponents.iter().map(format_rat).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BLDatum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = DatumRepr::deserialize(d)?;
        let mut maps = Vec::with_capacity(repr.maps.len());
        for m in repr.maps {
            let rows = m.matrix.len();
            let cols = m.matrix.first().map_or(0, Vec::len);
            let mut exact = Some(Vec::with_capacity(rows * cols));
            let mut float = Vec::with_capacity(rows * cols);
            for row in &m.matrix {
                if row.len() != cols {
                    return Err(D::Error::custom("ragged map matrix"));
                }
                for v in row {
                    match v {
                        serde_json::Value::String(t) => {
                            let r = parse_rat(t).map_err(D::Error::custom)?;
                            float.push(to_f64(&r));
                            if let Some(e) = exact.as_mut() {
                                e.push(r);
                            }
                        }
                        serde_json::Value::Number(x) => {
                            float.push(x.as_f64().ok_or_else(|| D::Error::custom("bad number"))?);
                            exact = None;
                        }
                        _ => return Err(D::Error::custom("entries must be strings or numbers")),
                    }
                }
            }
            let mut matrix = DMatrix::from_row_slice(rows, cols, &float);
            if let Some(f) = m.float_matrix {
                let flat: Vec<f64> = f.into_iter().flatten().collect();
                if flat.len() != rows * cols {
                    return Err(D::Error::custom("float_matrix has wrong shape"));
                }
                matrix = DMatrix::from_row_slice(rows, cols, &flat);
            }
            let exact = match exact {
                Some(e) => Some(Mat::new(rows, cols, e).map_err(D::Error::custom)?),
                None => None,
            };
            if m.nj != rows {
                return Err(D::Error::custom(format!("nj = {} but {rows} rows", m.nj)));
            }
            maps.push(BLMap {
                nj: m.nj,
                exact,
                matrix,
            });
        }
        let exponents = repr
            .exponents
            .iter()
            .map(|t| parse_rat(t).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        BLDatum::new(repr.n, maps, exponents).map_err(D::Error::custom)
    }
}

impl BLDatum {
    /// True when some exponent is zero; such maps never constrain anything.
    pub fn has_zero_exponent(&self) -> bool {
        self.exponents.iter().any(Zero::is_zero)
    }
}
