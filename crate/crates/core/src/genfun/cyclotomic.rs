//! Elements of ℚ(ξ_q) as dense residue classes modulo Φ_q, plus polynomials
//! over that field. Used as the straightforward reference implementation.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use parking_lot::Mutex;

use super::poly::{cyclotomic_poly, IntPoly};

static MODULI: Lazy<Mutex<HashMap<u64, Arc<Vec<BigRational>>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn modulus(q: u64) -> Arc<Vec<BigRational>> {
    MODULI
        .lock()
        .entry(q)
        .or_insert_with(|| {
            Arc::new(
                cyclotomic_poly(q)
                    .coeffs()
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect(),
            )
        })
        .clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicNumber {
    q: u64,
    /// length φ(q)
    coeffs: Vec<BigRational>,
}

impl CyclotomicNumber {
    fn degree(q: u64) -> usize {
        modulus(q).len() - 1
    }

    pub fn zero(q: u64) -> Self {
        CyclotomicNumber {
            q,
            coeffs: vec![BigRational::zero(); Self::degree(q)],
        }
    }

    pub fn from_rational(q: u64, c: BigRational) -> Self {
        let mut z = Self::zero(q);
        z.coeffs[0] = c;
        z
    }

    pub fn from_int(q: u64, c: i64) -> Self {
        Self::from_rational(q, BigRational::from_integer(BigInt::from(c)))
    }

    /// ξ^e for the primitive root ξ = exp(2πi/q).
    pub fn xi_pow(q: u64, e: i64) -> Self {
        let e = crate::arith::reduce(e, q) as usize;
        let mut raw = vec![BigRational::zero(); e.max(Self::degree(q)) + 1];
        raw[e] = BigRational::one();
        Self::reduce(q, raw)
    }

    fn reduce(q: u64, mut raw: Vec<BigRational>) -> Self {
        let phi = modulus(q);
        let d = phi.len() - 1;
        for k in (d..raw.len()).rev() {
            let c = std::mem::take(&mut raw[k]);
            if c.is_zero() {
                continue;
            }
            // Φ_q is monic: x^k ≡ −Σ_{i<d} φ_i x^{k−d+i}
            for i in 0..d {
                if !phi[i].is_zero() {
                    raw[k - d + i] -= &c * &phi[i];
                }
            }
        }
        raw.truncate(d);
        raw.resize(d, BigRational::zero());
        CyclotomicNumber { q, coeffs: raw }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational if it lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_int(self.q, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.q, rhs.q);
        CyclotomicNumber {
            q: self.q,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.q, rhs.q);
        CyclotomicNumber {
            q: self.q,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            q: self.q,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        assert_eq!(self.q, rhs.q);
        let n = self.coeffs.len();
        let mut raw = vec![BigRational::zero(); 2 * n.max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        CyclotomicNumber::reduce(self.q, raw)
    }
}

/// Polynomial in one variable with coefficients in ℚ(ξ_q), constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycPoly {
    pub q: u64,
    pub coeffs: Vec<CyclotomicNumber>,
}

impl CycPoly {
    pub fn constant(c: CyclotomicNumber) -> Self {
        CycPoly { q: c.q, coeffs: vec![c] }
    }

    /// z − c
    pub fn linear(c: CyclotomicNumber) -> Self {
        let q = c.q;
        CycPoly {
            q,
            coeffs: vec![-&c, CyclotomicNumber::from_int(q, 1)],
        }
    }

    pub fn from_int_poly(q: u64, p: &IntPoly) -> Self {
        CycPoly {
            q,
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| CyclotomicNumber::from_rational(q, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    pub fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn mul(&self, rhs: &CycPoly) -> CycPoly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return CycPoly { q: self.q, coeffs: vec![] };
        }
        let mut out = vec![CyclotomicNumber::zero(self.q); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        CycPoly { q: self.q, coeffs: out }.normalize()
    }

    pub fn add(&self, rhs: &CycPoly) -> CycPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = CyclotomicNumber::zero(self.q);
        CycPoly {
            q: self.q,
            coeffs: (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        }
        .normalize()
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> CycPoly {
        CycPoly {
            q: self.q,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
        .normalize()
    }

    /// Quotient by the monic factor z − c (remainder discarded).
    pub fn div_linear(&self, c: &CyclotomicNumber) -> (CycPoly, CyclotomicNumber) {
        let n = self.coeffs.len();
        if n == 0 {
            return (self.clone(), CyclotomicNumber::zero(self.q));
        }
        let mut quot = vec![CyclotomicNumber::zero(self.q); n - 1];
        let mut carry = self.coeffs[n - 1].clone();
        for i in (0..n - 1).rev() {
            quot[i] = carry.clone();
            carry = &self.coeffs[i] + &(c * &carry);
        }
        (CycPoly { q: self.q, coeffs: quot }, carry)
    }

    /// Coefficients as integers, if all lie in ℤ.
    pub fn to_int_poly(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPoly::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_of_unity_relations() {
        for q in [1u64, 2, 5, 9, 12, 49] {
            let xi = CyclotomicNumber::xi_pow(q, 1);
            assert_eq!(xi.pow(q as u32), CyclotomicNumber::from_int(q, 1), "q={q}");
            // Σ_{j<q} ξ^j = 0 for q > 1
            if q > 1 {
                let s = (0..q as i64).fold(CyclotomicNumber::zero(q), |acc, j| &acc + &CyclotomicNumber::xi_pow(q, j));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn ring_axioms_on_samples() {
        let q = 15;
        let a = &CyclotomicNumber::xi_pow(q, 2) + &CyclotomicNumber::from_int(q, 3);
        let b = &CyclotomicNumber::xi_pow(q, 7) - &CyclotomicNumber::xi_pow(q, 11);
        let c = CyclotomicNumber::xi_pow(q, 13);
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a * &b, &b * &a);
        assert!((&a - &a).is_zero());
    }
}
