//! Exact coefficients: rational functions in `q`, with `β = q²`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::One;

use super::poly::{rational, Poly};

/// A reduced fraction `num / den` of polynomials in `q`.
///
/// The denominator is monic and coprime to the numerator; zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TLCoefficient {
    num: Poly,
    den: Poly,
}

impl TLCoefficient {
    pub fn zero() -> Self {
        Self { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational(n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self { num: Poly::constant(c), den: Poly::one() }
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let mag = k.unsigned_abs() as usize;
        let m = Poly::monomial(BigRational::one(), mag);
        if k >= 0 {
            Self { num: m, den: Poly::one() }
        } else {
            Self { num: Poly::one(), den: m }
        }
    }

    /// `β^k = q^{2k}`.
    pub fn beta_pow(k: i64) -> Self {
        Self::q_pow(2 * k)
    }

    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::reduced(num, den)
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // Strip the common power of q first; the remaining gcd is trivial whenever the
        // denominator is a monomial, which is the overwhelmingly common case here.
        let v = num.valuation().unwrap().min(den.valuation().unwrap());
        let (mut num, mut den) = (num.shift_down(v), den.shift_down(v));
        if !den.is_monomial() {
            let g = Poly::gcd(&num, &den);
            if g.degree() != Some(0) {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        let lead = den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == Poly::one() && self.den == Poly::one()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::reduced(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.recip() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// If `self = c · q^k`, returns `(c, k)`.
    pub fn as_q_monomial(&self) -> Option<(BigRational, i64)> {
        if !self.num.is_monomial() || !self.den.is_monomial() {
            return None;
        }
        let a = self.num.valuation().unwrap() as i64;
        let b = self.den.valuation().unwrap() as i64;
        Some((self.num.leading().unwrap().clone(), a - b))
    }

    /// Evaluate at a numeric value of `q`.
    pub fn eval(&self, q: f64) -> f64 {
        self.num.eval(q) / self.den.eval(q)
    }

    /// Evaluate at `q = √β`.
    pub fn eval_beta(&self, beta: f64) -> f64 {
        self.eval(beta.sqrt())
    }
}

impl Default for TLCoefficient {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &TLCoefficient {
    type Output = TLCoefficient;
    fn add(self, rhs: &TLCoefficient) -> TLCoefficient {
        if self.den == rhs.den {
            return TLCoefficient::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        TLCoefficient::reduced(num, &self.den * &rhs.den)
    }
}

impl Neg for &TLCoefficient {
    type Output = TLCoefficient;
    fn neg(self) -> TLCoefficient {
        TLCoefficient { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &TLCoefficient {
    type Output = TLCoefficient;
    fn sub(self, rhs: &TLCoefficient) -> TLCoefficient {
        self + &(-rhs)
    }
}

impl Mul for &TLCoefficient {
    type Output = TLCoefficient;
    fn mul(self, rhs: &TLCoefficient) -> TLCoefficient {
        TLCoefficient::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &TLCoefficient {
    type Output = TLCoefficient;
    fn div(self, rhs: &TLCoefficient) -> TLCoefficient {
        self * &rhs.recip()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TLCoefficient {
            type Output = TLCoefficient;
            fn $m(self, rhs: TLCoefficient) -> TLCoefficient {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for TLCoefficient {
    type Output = TLCoefficient;
    fn neg(self) -> TLCoefficient {
        -&self
    }
}

fn fmt_scalar(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for TLCoefficient {
    /// Powers of `β` print as `b^k`; anything else prints as a fraction in `q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((c, k)) = self.as_q_monomial() {
            let power = if k % 2 == 0 {
                match k / 2 {
                    0 => None,
                    1 => Some("b".to_string()),
                    e => Some(format!("b^{e}")),
                }
            } else if k == 1 {
                Some("q".to_string())
            } else {
                Some(format!("q^{k}"))
            };
            return match power {
                None => write!(f, "{}", fmt_scalar(&c)),
                Some(p) if c.is_one() => write!(f, "{p}"),
                Some(p) if c == -BigRational::one() => write!(f, "-{p}"),
                Some(p) => write!(f, "{} * {p}", fmt_scalar(&c)),
            };
        }
        if self.den == Poly::one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
