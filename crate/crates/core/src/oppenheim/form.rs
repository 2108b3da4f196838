use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{OppenheimError, QuadRat};
use crate::linalg::rat::parse_rat;
use crate::linalg::{int, Rat};

/// Symmetric Gram matrix with entries in `Q(sqrt D)`; `Q(v) = v^T G v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub d: usize,
    pub radicand: i64,
    pub gram: Vec<Vec<QuadRat>>,
}

fn squarefree(d: i64) -> bool {
    d >= 1 && (2..).take_while(|p| p * p <= d).all(|p| d % (p * p) != 0)
}

impl QuadraticForm {
    pub fn new(gram: Vec<Vec<QuadRat>>, radicand: i64) -> Result<Self, OppenheimError> {
        let d = gram.len();
        if d < 3 {
            return Err(OppenheimError::Dimension(d));
        }
        if !squarefree(radicand) {
            return Err(OppenheimError::Parse(format!(
                "{radicand} is not a positive squarefree integer"
            )));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != d {
                return Err(OppenheimError::Parse("Gram matrix is not square".into()));
            }
            for (j, x) in row.iter().enumerate() {
                if x.d != radicand || (radicand == 1 && !x.b.is_zero()) {
                    return Err(OppenheimError::Parse(
                        "entries from different fields".into(),
                    ));
                }
                if x != &gram[j][i] {
                    return Err(OppenheimError::Parse("Gram matrix is not symmetric".into()));
                }
            }
        }
        let form = Self { d, radicand, gram };
        let (pos, neg) = form.signature();
        if pos == 0 || neg == 0 {
            return Err(OppenheimError::Signature { pos, neg });
        }
        Ok(form)
    }

    /// Numbers of positive and negative eigenvalues, exactly: the
    /// characteristic polynomial of a symmetric matrix is real-rooted, so
    /// Descartes' rule of signs counts its positive roots.
    pub fn signature(&self) -> (usize, usize) {
        let coeffs = self.char_poly();
        let changes = |flip: bool| {
            let signs: Vec<std::cmp::Ordering> = coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let s = c.signum();
                    if flip && i % 2 == 1 {
                        s.reverse()
                    } else {
                        s
                    }
                })
                .filter(|s| s.is_ne())
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        (changes(false), changes(true))
    }

    /// Coefficients of `det(xI - G)`, constant term first (Faddeev-LeVerrier).
    fn char_poly(&self) -> Vec<QuadRat> {
        let n = self.d;
        let zero = QuadRat::rational(Rat::zero(), self.radicand);
        let one = QuadRat::rational(Rat::one(), self.radicand);
        let mut c = vec![zero.clone(); n + 1];
        c[n] = one;
        let mut m = vec![vec![zero.clone(); n]; n];
        for k in 1..=n {
            // M_k = G M_{k-1} + c_{n-k+1} I
            let mut next = vec![vec![zero.clone(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = zero.clone();
                    for l in 0..n {
                        acc = &acc + &(&self.gram[i][l] * &m[l][j]);
                    }
                    if i == j {
                        acc = &acc + &c[n - k + 1];
                    }
                    next[i][j] = acc;
                }
            }
            m = next;
            let mut tr = zero.clone();
            for i in 0..n {
                for l in 0..n {
                    tr = &tr + &(&self.gram[i][l] * &m[l][i]);
                }
            }
            let scale = QuadRat::rational(-Rat::one() / int(k as i64), self.radicand);
            c[n - k] = &tr * &scale;
        }
        c
    }

    /// Exact `Q(v)`.
    pub fn eval(&self, v: &[i64]) -> QuadRat {
        let mut acc = QuadRat::rational(Rat::zero(), self.radicand);
        for i in 0..self.d {
            for j in 0..self.d {
                let w = QuadRat::rational(int(v[i] * v[j]), self.radicand);
                acc = &acc + &(&self.gram[i][j] * &w);
            }
        }
        acc
    }

    /// Coefficient of the monomial `v_i v_j` (`i <= j`) in `Q(v)`.
    pub(crate) fn monomial(&self, i: usize, j: usize) -> QuadRat {
        if i == j {
            self.gram[i][i].clone()
        } else {
            &self.gram[i][j] + &self.gram[i][j]
        }
    }

    /// Least common denominator of every coefficient and `extra`.
    pub(crate) fn common_denominator(&self, extra: &Rat) -> num_bigint::BigInt {
        let mut l = extra.denom().clone();
        for i in 0..self.d {
            for j in i..self.d {
                let m = self.monomial(i, j);
                l = l.lcm(m.a.denom()).lcm(m.b.denom());
            }
        }
        l
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.d {
            for j in i..self.d {
                let m = self.monomial(i, j);
                let var = if i == j {
                    format!("x{}^2", i + 1)
                } else {
                    format!("x{}*x{}", i + 1, j + 1)
                };
                for (c, rad) in [(&m.a, None), (&m.b, Some(self.radicand))] {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c < &Rat::zero();
                    let mag = if neg { -c.clone() } else { c.clone() };
                    let sign = match (first, neg) {
                        (true, true) => "-",
                        (true, false) => "",
                        (false, true) => "-",
                        (false, false) => "+",
                    };
                    let mut coef = if mag.is_one() {
                        String::new()
                    } else {
                        format!("{}*", crate::linalg::rat::format_rat(&mag))
                    };
                    if let Some(d) = rad {
                        coef.push_str(&format!("sqrt{d}*"));
                    }
                    write!(f, "{sign}{coef}{var}")?;
                    first = false;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for QuadraticForm {
    type Err = OppenheimError;

    /// Sum of terms `[coef*]xi^2` or `[coef*]xi*xj`, where `coef` is a product
    /// of rationals `p/q` and at most one `sqrtD`, e.g. `x1^2+x2^2-sqrt2*x3^2`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| OppenheimError::Parse(format!("{m} in {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty form"));
        }
        // Split into signed terms; a sign directly after '/' or '*' is not a split point.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (idx, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && !current.ends_with(['*', '/']) {
                terms.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && idx == 0 {
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        terms.push((negative, current));

        let mut radicand: i64 = 1;
        let mut entries: Vec<(usize, usize, Rat, Rat)> = Vec::new();
        let mut dim = 0;
        for (negative, term) in terms {
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let mut coef = if negative { -Rat::one() } else { Rat::one() };
            let mut root: Option<i64> = None;
            let mut vars: Vec<usize> = Vec::new();
            for factor in term.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, power) = match rest.split_once('^') {
                        Some((i, p)) => (i, p.parse::<usize>().map_err(|_| bad("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| bad("bad variable"))?;
                    if i == 0 {
                        return Err(bad("variables start at x1"));
                    }
                    vars.extend(std::iter::repeat(i - 1).take(power));
                } else if let Some(rest) = factor.strip_prefix("sqrt") {
                    let d: i64 = rest.parse().map_err(|_| bad("bad radicand"))?;
                    if root.replace(d).is_some() {
                        return Err(bad("two square roots in one term"));
                    }
                } else {
                    coef *= parse_rat(factor).map_err(|_| bad("bad coefficient"))?;
                }
            }
            let (i, j) = match vars.as_slice() {
                [i, j] => (*i.min(j), *i.max(j)),
                _ => return Err(bad("every term must be quadratic")),
            };
            dim = dim.max(j + 1);
            match root {
                Some(d) if d != 1 => {
                    if radicand != 1 && radicand != d {
                        return Err(bad("two different radicands"));
                    }
                    radicand = d;
                    entries.push((i, j, Rat::zero(), coef));
                }
                _ => entries.push((i, j, coef, Rat::zero())),
            }
        }
        let zero = QuadRat::rational(Rat::zero(), radicand);
        let mut gram = vec![vec![zero; dim]; dim];
        for (i, j, a, b) in entries {
            let (a, b) = if i == j {
                (a, b)
            } else {
                (a / int(2), b / int(2))
            };
            let add = QuadRat { a, b, d: radicand };
            gram[i][j] = &gram[i][j] + &add;
            if i != j {
                gram[j][i] = &gram[j][i] + &add;
            }
        }
        Self::new(gram, radicand)
    }
}
