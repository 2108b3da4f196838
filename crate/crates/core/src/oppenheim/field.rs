//! Numbers `a + b sqrt(D)` with `D` a squarefree integer.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::rat::serde_rat;
use crate::linalg::{int, Rat};

/// `a + b sqrt(d)` over the rationals. `d == 1` means the field is `Q`
/// and `b` is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadRat {
    #[serde(with = "serde_rat")]
    pub a: Rat,
    #[serde(with = "serde_rat")]
    pub b: Rat,
    pub d: i64,
}

impl QuadRat {
    pub fn rational(a: Rat, d: i64) -> Self {
        Self {
            a,
            b: Rat::zero(),
            d,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign, using `a^2` against `d b^2` when the parts disagree.
    pub fn signum(&self) -> Ordering {
        sign_parts(self.a.cmp(&Rat::zero()), self.b.cmp(&Rat::zero()), || {
            (&self.a * &self.a).cmp(&(&self.b * &self.b * int(self.d)))
        })
    }

    pub fn to_f64(&self) -> f64 {
        crate::linalg::rat::to_f64(&self.a)
            + crate::linalg::rat::to_f64(&self.b) * (self.d as f64).sqrt()
    }
}

/// Sign of `a + b sqrt(d)` from the signs of `a`, `b` and the comparison
/// of `|a|` with `|b| sqrt(d)`.
fn sign_parts(sa: Ordering, sb: Ordering, a_vs_b: impl FnOnce() -> Ordering) -> Ordering {
    use Ordering::*;
    match (sa, sb) {
        (Equal, s) | (s, Equal) => s,
        (Greater, Greater) => Greater,
        (Less, Less) => Less,
        (Greater, Less) => a_vs_b(),
        (Less, Greater) => a_vs_b().reverse(),
    }
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, o: &QuadRat) -> QuadRat {
        QuadRat {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: self.d,
        }
    }
}

impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, o: &QuadRat) -> QuadRat {
        QuadRat {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            d: self.d,
        }
    }
}

impl Mul for &QuadRat {
    type Output = QuadRat;
    fn mul(self, o: &QuadRat) -> QuadRat {
        QuadRat {
            a: &self.a * &o.a + &self.b * &o.b * int(self.d),
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

/// Integer version used in the hot loop: `a + b sqrt(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct QuadInt {
    pub a: i128,
    pub b: i128,
}

impl QuadInt {
    pub fn signum(self, d: i128) -> Ordering {
        sign_parts(self.a.cmp(&0), self.b.cmp(&0), || {
            (self.a * self.a).cmp(&(self.b * self.b * d))
        })
    }

    pub fn abs(self, d: i128) -> Self {
        if self.signum(d) == Ordering::Less {
            Self {
                a: -self.a,
                b: -self.b,
            }
        } else {
            self
        }
    }

    /// Compares `|self|` with `|other|` exactly.
    pub fn cmp_abs(self, other: Self, d: i128) -> Ordering {
        let x = self.abs(d);
        let y = other.abs(d);
        Self {
            a: x.a - y.a,
            b: x.b - y.b,
        }
        .signum(d)
    }
}
