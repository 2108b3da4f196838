use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DiscretizedError;
use crate::seed;

pub const MAX_POINTS: usize = 1 << 24;
pub const MAX_AMBIENT: usize = 9;
/// Binary depth used for weight-aligned products.
const ALIGNED_DEPTH: u32 = 8;
const DEDUP_SCALE: f64 = (1u64 << 40) as f64;

/// Finite subset of the unit box `[-1, 1]^n`, deduplicated at resolution `2^-40`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub ambient: usize,
    pub points: Vec<Vec<f64>>,
    pub provenance: String,
    /// Box dimension the generator was designed for, if known.
    pub designed_dim: Option<f64>,
}

impl PointSet {
    pub fn new(
        ambient: usize,
        points: Vec<Vec<f64>>,
        provenance: &str,
    ) -> Result<Self, DiscretizedError> {
        if ambient == 0 || ambient > MAX_AMBIENT {
            return Err(DiscretizedError::Spec(format!(
                "ambient dimension {ambient}"
            )));
        }
        if points.len() > MAX_POINTS {
            return Err(DiscretizedError::Size(points.len()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        let mut kept = Vec::with_capacity(points.len());
        for p in points {
            if p.len() != ambient || p.iter().any(|x| !x.is_finite() || x.abs() > 1.0) {
                return Err(DiscretizedError::Spec(format!(
                    "point {p:?} is outside the unit box"
                )));
            }
            let key: Vec<i64> = p.iter().map(|x| (x * DEDUP_SCALE).round() as i64).collect();
            if seen.insert(key) {
                kept.push(p);
            }
        }
        Ok(Self {
            ambient,
            points: kept,
            provenance: provenance.to_string(),
            designed_dim: None,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FractalDesc {
    /// Base-`base` digits from `digits` at every place, `depth` places, `n` coordinates.
    ProductCantor {
        base: u32,
        digits: Vec<u32>,
        depth: u32,
        n: usize,
    },
    /// All multiples of `2^-s` in `[0, 1)^n`.
    FullGrid { s: u32, n: usize },
    /// Each grid point kept independently with probability `density`.
    RandomSubset { s: u32, n: usize, density: f64 },
    /// Coordinate `i` carries a dyadic Cantor set of dimension `dims[i]`.
    WeightAligned { dims: Vec<f64> },
}

impl fmt::Display for FractalDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(",");
        match self {
            Self::ProductCantor {
                base,
                digits,
                depth,
                n,
            } => {
                write!(
                    f,
                    "cantor:{base}:{}:{depth}:{n}",
                    join(&mut digits.iter().map(|d| d.to_string()))
                )
            }
            Self::FullGrid { s, n } => write!(f, "grid:{s}:{n}"),
            Self::RandomSubset { s, n, density } => write!(f, "random:{s}:{n}:{density}"),
            Self::WeightAligned { dims } => {
                write!(
                    f,
                    "weight_aligned:{}",
                    join(&mut dims.iter().map(|d| d.to_string()))
                )
            }
        }
    }
}

impl FromStr for FractalDesc {
    type Err = DiscretizedError;

    /// `cantor:3:0,2:8[:n]`, `grid:6:2`, `random:6:2:0.3`, `weight_aligned:1,1,0.5,0,0`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || DiscretizedError::Spec(format!("fractal descriptor {text:?}"));
        let parts: Vec<&str> = text.trim().split(':').collect();
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
        let list = |s: &str| -> Result<Vec<f64>, DiscretizedError> {
            s.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
                .collect()
        };
        match parts.as_slice() {
            ["cantor", base, digits, depth, rest @ ..] if rest.len() <= 1 => {
                Ok(Self::ProductCantor {
                    base: num(base)?,
                    digits: digits.split(',').map(num).collect::<Result<_, _>>()?,
                    depth: num(depth)?,
                    n: rest.first().map(|x| num(x)).transpose()?.unwrap_or(1) as usize,
                })
            }
            ["grid", s, n] => Ok(Self::FullGrid {
                s: num(s)?,
                n: num(n)? as usize,
            }),
            ["random", s, n, density] => Ok(Self::RandomSubset {
                s: num(s)?,
                n: num(n)? as usize,
                density: density.trim().parse().map_err(|_| bad())?,
            }),
            ["weight_aligned", dims] => Ok(Self::WeightAligned { dims: list(dims)? }),
            _ => Err(bad()),
        }
    }
}

impl FractalDesc {
    pub fn ambient(&self) -> usize {
        match self {
            Self::ProductCantor { n, .. }
            | Self::FullGrid { n, .. }
            | Self::RandomSubset { n, .. } => *n,
            Self::WeightAligned { dims } => dims.len(),
        }
    }

    pub fn designed_dim(&self) -> f64 {
        match self {
            Self::ProductCantor {
                base, digits, n, ..
            } => *n as f64 * (digits.len() as f64).ln() / (*base as f64).ln(),
            Self::FullGrid { n, .. } | Self::RandomSubset { n, .. } => *n as f64,
            Self::WeightAligned { dims } => dims.iter().sum(),
        }
    }

    fn expected_size(&self) -> f64 {
        match self {
            Self::ProductCantor {
                digits, depth, n, ..
            } => (digits.len() as f64).powf(*depth as f64 * *n as f64),
            Self::FullGrid { s, n } | Self::RandomSubset { s, n, .. } => {
                2f64.powf(*s as f64 * *n as f64)
            }
            Self::WeightAligned { dims } => dims
                .iter()
                .map(|d| 2f64.powi(free_places(*d).len() as i32))
                .product(),
        }
    }

    fn validate(&self) -> Result<(), DiscretizedError> {
        let bad = |m: &str| Err(DiscretizedError::Spec(format!("{self}: {m}")));
        let n = self.ambient();
        if n == 0 || n > super::MAX_AMBIENT {
            return bad("ambient dimension out of range");
        }
        match self {
            Self::ProductCantor {
                base,
                digits,
                depth,
                ..
            } => {
                if *base < 2 || digits.is_empty() || digits.iter().any(|d| d >= base) || *depth == 0
                {
                    return bad("digits must be distinct values below the base");
                }
                let mut sorted = digits.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != digits.len() {
                    return bad("repeated digit");
                }
            }
            Self::FullGrid { s, .. } => super::check_scale(*s)?,
            Self::RandomSubset { s, density, .. } => {
                super::check_scale(*s)?;
                if !(0.0..=1.0).contains(density) {
                    return bad("density outside [0, 1]");
                }
            }
            Self::WeightAligned { dims } => {
                if dims.iter().any(|d| !(0.0..=1.0).contains(d)) {
                    return bad("per-coordinate dimensions must lie in [0, 1]");
                }
            }
        }
        if self.expected_size() > MAX_POINTS as f64 {
            return Err(DiscretizedError::Size(
                self.expected_size().min(usize::MAX as f64) as usize,
            ));
        }
        Ok(())
    }
}

/// Binary places left free for a coordinate of dimension `d`, spread so that
/// every prefix of length `j` has about `d * j` free places.
fn free_places(d: f64) -> Vec<u32> {
    (0..ALIGNED_DEPTH)
        .filter(|&i| ((i + 1) as f64 * d + 1e-9).floor() > (i as f64 * d + 1e-9).floor())
        .collect()
}

/// Every combination of one value per coordinate.
fn product(per_coord: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for values in per_coord {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn generate_fractal(desc: &FractalDesc, seed: u64) -> Result<PointSet, DiscretizedError> {
    desc.validate()?;
    let mut rng = seed::rng(seed);
    let points = match desc {
        FractalDesc::ProductCantor {
            base,
            digits,
            depth,
            n,
        } => {
            let b = *base as f64;
            let mut line = vec![0.0f64];
            for place in 1..=*depth {
                let scale = b.powi(-(place as i32));
                line = line
                    .iter()
                    .flat_map(|x| digits.iter().map(move |&d| x + d as f64 * scale))
                    .collect();
            }
            product(&vec![line; *n])
        }
        FractalDesc::FullGrid { s, n } => {
            let line: Vec<f64> = (0..1u64 << s)
                .map(|i| i as f64 / (1u64 << s) as f64)
                .collect();
            product(&vec![line; *n])
        }
        FractalDesc::RandomSubset { s, n, density } => {
            let line: Vec<f64> = (0..1u64 << s)
                .map(|i| i as f64 / (1u64 << s) as f64)
                .collect();
            product(&vec![line; *n])
                .into_iter()
                .filter(|_| rng.gen_bool(*density))
                .collect()
        }
        FractalDesc::WeightAligned { dims } => {
            // Fixed places get seeded digits, so different seeds give translates.
            let lines: Vec<Vec<f64>> = dims
                .iter()
                .map(|&d| {
                    let free = free_places(d);
                    let mut base = 0.0;
                    for i in 0..ALIGNED_DEPTH {
                        if !free.contains(&i) && rng.gen_bool(0.5) {
                            base += 2f64.powi(-(i as i32 + 1));
                        }
                    }
                    let mut line = vec![base];
                    for &i in &free {
                        let step = 2f64.powi(-(i as i32 + 1));
                        line = line.iter().flat_map(|x| [*x, x + step]).collect();
                    }
                    line
                })
                .collect();
            product(&lines)
        }
    };
    let mut set = PointSet::new(desc.ambient(), points, &format!("{desc}@{seed}"))?;
    set.designed_dim = Some(desc.designed_dim());
    Ok(set)
}
