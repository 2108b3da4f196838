use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::QuadInt;
use super::{OppenheimError, QuadRat, QuadraticForm};
use crate::linalg::rat::{serde_rat, to_f64};
use crate::linalg::Rat;

pub const MAX_T: i64 = 10_000;
/// Cap on `(2T + 1)^(d - 1)`, the number of outer vectors.
pub const MAX_OUTER: f64 = 5e8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_v: Vec<i64>,
    /// `|Q(best_v) - s|`.
    pub best_value: f64,
    /// Exact `Q(best_v)`.
    pub value_exact: QuadRat,
    pub t_bound: i64,
    #[serde(with = "serde_rat")]
    pub s: Rat,
}

impl SearchResult {
    /// `Q(best_v) == s` exactly.
    pub fn is_exact_hit(&self) -> bool {
        let target = QuadRat::rational(self.s.clone(), self.value_exact.d);
        (&self.value_exact - &target).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Kappa {
    Fitted {
        value: f64,
    },
    /// The minimum reached zero exactly.
    Infinite,
    /// Fewer than two strict improvements to fit through.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCurve {
    /// Running minimum for each requested bound, in order.
    pub rows: Vec<SearchResult>,
    pub kappa: Kappa,
}

/// `L (Q(v) - s) = A(v) + B(v) sqrt(D)` with integer coefficients.
struct IntForm {
    d: usize,
    radicand: i128,
    p: Vec<Vec<i128>>,
    r: Vec<Vec<i128>>,
    shift: i128,
    scale: f64,
    sqrt_d: f64,
}

fn to_i128(x: &Rat) -> Result<i128, OppenheimError> {
    debug_assert!(x.is_integer());
    x.to_integer().to_i128().ok_or(OppenheimError::Overflow)
}

impl IntForm {
    fn new(q: &QuadraticForm, s: &Rat) -> Result<Self, OppenheimError> {
        let l = Rat::from_integer(q.common_denominator(s));
        let mut p = vec![vec![0; q.d]; q.d];
        let mut r = vec![vec![0; q.d]; q.d];
        for i in 0..q.d {
            for j in i..q.d {
                let m = q.monomial(i, j);
                p[i][j] = to_i128(&(&m.a * &l))?;
                r[i][j] = to_i128(&(&m.b * &l))?;
            }
        }
        Ok(Self {
            d: q.d,
            radicand: q.radicand as i128,
            p,
            r,
            shift: to_i128(&(s * &l))?,
            scale: to_f64(&l),
            sqrt_d: (q.radicand as f64).sqrt(),
        })
    }

    fn exact(&self, v: &[i64]) -> QuadInt {
        let (mut a, mut b) = (-self.shift, 0i128);
        for i in 0..self.d {
            let vi = v[i] as i128;
            if vi == 0 {
                continue;
            }
            for j in i..self.d {
                let vv = vi * v[j] as i128;
                a += self.p[i][j] * vv;
                b += self.r[i][j] * vv;
            }
        }
        QuadInt { a, b }
    }

    fn coef(&self, i: usize, j: usize) -> f64 {
        (self.p[i][j] as f64 + self.r[i][j] as f64 * self.sqrt_d) / self.scale
    }
}

#[derive(Clone, Debug)]
struct Best {
    value: QuadInt,
    norm2: i64,
    v: Vec<i64>,
}

fn better(x: &Best, y: &Best, radicand: i128) -> bool {
    x.value
        .cmp_abs(y.value, radicand)
        .then(x.norm2.cmp(&y.norm2))
        .then_with(|| x.v.cmp(&y.v))
        == Ordering::Less
}

fn merge(into: &mut [Option<Best>], from: Vec<Option<Best>>, radicand: i128) {
    for (slot, cand) in into.iter_mut().zip(from) {
        if let Some(c) = cand {
            if slot.as_ref().map_or(true, |b| better(&c, b, radicand)) {
                *slot = Some(c);
            }
        }
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Integer candidates for the last coordinate: neighbours of the real
/// roots of `a x^2 + b x + c = 0`, or of the vertex if there are none.
fn last_coordinate_candidates(
    a: f64,
    b: f64,
    c: f64,
    exact_zero_a: bool,
    t: i64,
    out: &mut Vec<i64>,
) {
    out.clear();
    let mut push_around = |x: f64| {
        if x.is_finite() {
            let x = x.clamp(-(t as f64), t as f64);
            out.push(x.floor() as i64);
            out.push(x.ceil() as i64);
        }
    };
    if exact_zero_a {
        if b != 0.0 {
            push_around(-c / b);
        } else {
            out.extend([0, 1, -1]);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            // Stable quadratic formula.
            let qv = -0.5 * (b + b.signum() * sq);
            if qv != 0.0 {
                push_around(qv / a);
                push_around(c / qv);
            } else {
                push_around(0.0);
            }
        } else {
            push_around(-b / (2.0 * a));
        }
    }
    out.retain(|x| x.abs() <= t);
    out.sort_unstable();
    out.dedup();
}

/// Best vector for each bound in `bounds` (ascending); a vector of sup
/// norm `m` is filed under the first bound `>= m`.
fn scan(q: &QuadraticForm, s: &Rat, bounds: &[i64]) -> Result<Vec<Option<Best>>, OppenheimError> {
    let t = *bounds.last().expect("nonempty bounds");
    if t < 1 || t > MAX_T {
        return Err(OppenheimError::Budget(format!(
            "T = {t} outside 1..={MAX_T}"
        )));
    }
    let d = q.d;
    if (2.0 * t as f64 + 1.0).powi(d as i32 - 1) > MAX_OUTER {
        return Err(OppenheimError::Budget(format!(
            "(2T+1)^{} outer vectors",
            d - 1
        )));
    }
    let f = IntForm::new(q, s)?;
    let radicand = f.radicand;
    // Every candidate value must fit comfortably in i128.
    let max_coef = (0..d)
        .flat_map(|i| (i..d).map(move |j| (i, j)))
        .map(|(i, j)| f.p[i][j].abs().max(f.r[i][j].abs()))
        .max()
        .unwrap_or(0);
    let bound = (max_coef as f64) * (d * d) as f64 * (t as f64).powi(2) + f.shift.abs() as f64;
    if bound * bound * (radicand as f64) > 1e36 {
        return Err(OppenheimError::Overflow);
    }
    let a_exact_zero = f.p[d - 1][d - 1] == 0 && f.r[d - 1][d - 1] == 0;
    let a = f.coef(d - 1, d - 1);
    let s_f = to_f64(s);

    let bucket = |m: i64| bounds.partition_point(|&b| b < m);
    let per_first = |v1: i64| -> Vec<Option<Best>> {
        let mut best: Vec<Option<Best>> = vec![None; bounds.len()];
        let mut v = vec![0i64; d];
        v[0] = v1;
        let mut cands = Vec::with_capacity(4);
        // Odometer over v[1..d-1].
        for k in 1..d - 1 {
            v[k] = -t;
        }
        loop {
            let w = &v[..d - 1];
            // Only one of v, -v is needed: keep w with first nonzero entry positive.
            let lead = w.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            if lead >= 0 {
                let mut b = 0.0;
                for i in 0..d - 1 {
                    b += f.coef(i, d - 1) * w[i] as f64;
                }
                let mut c = -s_f;
                for i in 0..d - 1 {
                    if w[i] == 0 {
                        continue;
                    }
                    for j in i..d - 1 {
                        c += f.coef(i, j) * (w[i] * w[j]) as f64;
                    }
                }
                if lead == 0 {
                    // w = 0: the only primitive choice is e_d.
                    cands.clear();
                    cands.push(1);
                } else {
                    last_coordinate_candidates(a, b, c, a_exact_zero, t, &mut cands);
                }
                for &x in &cands {
                    v[d - 1] = x;
                    if gcd_all(&v) != 1 {
                        continue;
                    }
                    let norm = v.iter().map(|x| x.abs()).max().unwrap();
                    let cand = Best {
                        value: f.exact(&v),
                        norm2: v.iter().map(|x| x * x).sum(),
                        v: v.clone(),
                    };
                    let slot = &mut best[bucket(norm)];
                    if slot
                        .as_ref()
                        .map_or(true, |cur| better(&cand, cur, radicand))
                    {
                        *slot = Some(cand);
                    }
                }
            }
            let mut k = d - 2;
            loop {
                if k == 0 {
                    return best;
                }
                v[k] += 1;
                if v[k] <= t {
                    break;
                }
                v[k] = -t;
                k -= 1;
            }
        }
    };
    let parts: Vec<Vec<Option<Best>>> = (0..=t).into_par_iter().map(per_first).collect();
    let mut best = vec![None; bounds.len()];
    for part in parts {
        merge(&mut best, part, radicand);
    }
    // Running minimum: a vector within a smaller bound is within every larger one.
    for i in 1..best.len() {
        let prev = best[i - 1].clone();
        merge(&mut best[i..=i], vec![prev], radicand);
    }
    Ok(best)
}

fn to_result(q: &QuadraticForm, s: &Rat, t: i64, best: Best) -> SearchResult {
    let value_exact = q.eval(&best.v);
    let target = QuadRat::rational(s.clone(), q.radicand);
    SearchResult {
        best_value: (&value_exact - &target).to_f64().abs(),
        best_v: best.v,
        value_exact,
        t_bound: t,
        s: s.clone(),
    }
}

/// Primitive `v` with `0 < |v|_inf <= T` minimizing `|Q(v) - s|`. The last
/// coordinate is solved for rather than enumerated. Ties go to the smaller
/// Euclidean norm, then to the lexicographically smaller vector, with the
/// sign fixed by making the first nonzero entry positive.
pub fn search_min_value(
    q: &QuadraticForm,
    s: &Rat,
    t_bound: i64,
) -> Result<SearchResult, OppenheimError> {
    let best = scan(q, s, &[t_bound])?
        .pop()
        .flatten()
        .expect("(0,..,0,1) is always a candidate");
    Ok(to_result(q, s, t_bound, best))
}

/// Running minimum over ascending bounds from a single enumeration, and the
/// decay exponent fitted on the bounds where the minimum strictly improved.
pub fn decay_curve(
    q: &QuadraticForm,
    s: &Rat,
    t_list: &[i64],
) -> Result<DecayCurve, OppenheimError> {
    let mut distinct = t_list.to_vec();
    distinct.dedup();
    if t_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(OppenheimError::Fit("bounds must be ascending".into()));
    }
    if distinct.len() < 3 {
        return Err(OppenheimError::Fit(
            "need at least three distinct bounds".into(),
        ));
    }
    let best = scan(q, s, &distinct)?;
    let rows: Vec<SearchResult> = distinct
        .iter()
        .zip(best)
        .map(|(&t, b)| to_result(q, s, t, b.expect("(0,..,0,1) is always a candidate")))
        .collect();
    let kappa = if rows.iter().any(SearchResult::is_exact_hit) {
        Kappa::Infinite
    } else {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            if i == 0 || r.best_value < rows[i - 1].best_value {
                pts.push(((r.t_bound as f64).ln(), r.best_value.ln()));
            }
        }
        if pts.len() < 2 {
            Kappa::Undetermined
        } else {
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            Kappa::Fitted { value: -sxy / sxx }
        }
    };
    Ok(DecayCurve { rows, kappa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    /// Full-box enumeration with exact comparison, no root solving.
    fn brute_force(q: &QuadraticForm, t: i64) -> QuadRat {
        let mut best: Option<QuadRat> = None;
        for a in -t..=t {
            for b in -t..=t {
                for c in -t..=t {
                    let v = [a, b, c];
                    if gcd_all(&v) != 1 {
                        continue;
                    }
                    let x = q.eval(&v);
                    let ax = if x.signum() == Ordering::Less { -&x } else { x };
                    if best
                        .as_ref()
                        .map_or(true, |cur| (&ax - cur).signum() == Ordering::Less)
                    {
                        best = Some(ax);
                    }
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn isotropic_rational_form() {
        let q: QuadraticForm = "x1^2-x3^2".parse().unwrap();
        let r = search_min_value(&q, &int(0), 10).unwrap();
        assert!(r.is_exact_hit());
        assert_eq!(r.best_value, 0.0);
        // (1, 0, 1) is also a zero; the tie-break prefers the shorter (0, 1, 0).
        assert_eq!(r.best_v, vec![0, 1, 0]);
        assert!(q.eval(&[1, 0, 1]).is_zero());
        let c = decay_curve(&q, &int(0), &[2, 5, 10]).unwrap();
        assert_eq!(c.kappa, Kappa::Infinite);
    }

    #[test]
    fn matches_brute_force() {
        let q: QuadraticForm = "x1^2+x2^2-sqrt2*x3^2".parse().unwrap();
        for t in [1, 3, 8, 15] {
            let r = search_min_value(&q, &int(0), t).unwrap();
            let want = brute_force(&q, t);
            let got = if r.value_exact.signum() == Ordering::Less {
                -&r.value_exact
            } else {
                r.value_exact.clone()
            };
            assert_eq!(got, want, "T = {t}");
            assert_eq!(gcd_all(&r.best_v), 1);
            assert!(r.best_v.iter().all(|x| x.abs() <= t));
            assert!(!r.is_exact_hit());
        }
        let skew: QuadraticForm = "x1*x2+1/3*x3^2-sqrt5*x2*x3".parse().unwrap();
        for t in [2, 7] {
            let r = search_min_value(&skew, &int(0), t).unwrap();
            let got = if r.value_exact.signum() == Ordering::Less {
                -&r.value_exact
            } else {
                r.value_exact.clone()
            };
            assert_eq!(got, brute_force(&skew, t), "T = {t}");
        }
    }

    #[test]
    fn decay_errors_and_monotone() {
        let q: QuadraticForm = "x1^2+x2^2-sqrt2*x3^2".parse().unwrap();
        assert!(matches!(
            decay_curve(&q, &int(0), &[10, 10]),
            Err(OppenheimError::Fit(_))
        ));
        assert!(matches!(
            decay_curve(&q, &int(0), &[10, 5, 20]),
            Err(OppenheimError::Fit(_))
        ));
        let c = decay_curve(&q, &int(0), &[5, 10, 20, 40]).unwrap();
        for w in c.rows.windows(2) {
            assert!(w[1].best_value <= w[0].best_value);
        }
        assert!(matches!(c.kappa, Kappa::Fitted { value } if value > 0.0));
        assert!(matches!(
            search_min_value(&q, &int(0), MAX_T + 1),
            Err(OppenheimError::Budget(_))
        ));
    }
}
