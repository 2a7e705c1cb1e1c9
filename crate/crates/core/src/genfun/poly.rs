//! Dense polynomials over ℤ and rational functions compared by
//! cross-multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::divisors;
use crate::error::{Error, Result};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPoly::new(vec![c.into()])
    }

    /// z^k
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPoly(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; −1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.0.iter().cloned());
        IntPoly(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = IntPoly::constant(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division; fails if the remainder is nonzero or the quotient
    /// is not integral.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.0.clone();
        let dd = d.0.len() - 1;
        let lead = &d.0[dd];
        if rem.len() < d.0.len() {
            return if self.is_zero() { Some(IntPoly::zero()) } else { None };
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let (qc, r) = rem[i + dd].div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.0.iter().enumerate() {
                rem[i + j] -= &qc * dc;
            }
            quot[i] = qc;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(quot))
        } else {
            None
        }
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "z".to_string(),
                (1, false) => format!("{mag}*z"),
                (_, true) => format!("z^{k}"),
                (_, false) => format!("{mag}*z^{k}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.0.len().max(rhs.0.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

/// The q-th cyclotomic polynomial, by dividing z^q − 1 by Φ_d for d | q, d < q.
pub fn cyclotomic_poly(q: u64) -> IntPoly {
    let mut p = &IntPoly::monomial(q as usize) - &IntPoly::constant(1);
    for d in divisors(q) {
        if d < q {
            p = p.div_exact(&cyclotomic_poly(d)).expect("Φ_d divides z^q − 1");
        }
    }
    p
}

/// num/den over ℤ; equality is decided by cross-multiplication.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalFunction {
    pub num: IntPoly,
    pub den: IntPoly,
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl RationalFunction {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::HypothesisViolated("zero denominator".into()));
        }
        Ok(RationalFunction { num, den })
    }

    /// First n power-series coefficients at z = 0.
    pub fn series(&self, n: usize) -> Result<Vec<BigRational>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::HypothesisViolated("denominator vanishes at z = 0".into()));
        }
        let d0 = BigRational::from_integer(d0);
        let den: Vec<BigRational> = self.den.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let mut out: Vec<BigRational> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = BigRational::from_integer(self.num.coeff(k));
            for j in 1..den.len().min(k + 1) {
                acc -= &den[j] * &out[k - j];
            }
            out.push(acc / &d0);
        }
        Ok(out)
    }

    /// Series coefficients that must be integers (e.g. dimensions).
    pub fn integer_series(&self, n: usize) -> Result<Vec<BigInt>> {
        self.series(n)?
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::HypothesisViolated(format!("non-integral series coefficient {c}")))
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(11), IntPoly::from_i64(&[1; 11]));
        let mut c49 = vec![0i64; 43];
        for j in 0..7 {
            c49[7 * j] = 1;
        }
        assert_eq!(cyclotomic_poly(49), IntPoly::from_i64(&c49));
        assert_eq!(cyclotomic_poly(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        // product over divisors recovers z^n − 1
        for n in 1..40u64 {
            let prod = divisors(n).iter().fold(IntPoly::constant(1), |acc, &d| &acc * &cyclotomic_poly(d));
            assert_eq!(prod, &IntPoly::monomial(n as usize) - &IntPoly::constant(1));
        }
    }

    #[test]
    fn series_and_equality() {
        // 1/(1 − z) = 1 + z + z² + …
        let f = RationalFunction::new(IntPoly::constant(1), IntPoly::from_i64(&[1, -1])).unwrap();
        assert_eq!(f.integer_series(4).unwrap(), vec![BigInt::from(1); 4]);
        let g = RationalFunction::new(IntPoly::from_i64(&[2, 2]), IntPoly::from_i64(&[2, 0, -2])).unwrap();
        assert_eq!(f, g);
        assert_eq!(IntPoly::from_i64(&[1, -3, 0, 2]).to_string(), "2*z^3 - 3*z + 1");
        assert!(IntPoly::from_i64(&[1, 1]).div_exact(&IntPoly::from_i64(&[2, 1])).is_none());
    }
}
