//! Generating functions of lens-space spectra as exact rational functions.
//!
//! For L = L(q; s) with generator γ, everything is built from
//!
//!   F̃ᵏ(z) = Σ_{l<q} χᵏ(γˡ) / det(z − γˡ),
//!
//! χᵏ the character of Λᵏℂ^{2m}. All F̃ᵏ are put over one integer denominator
//! D(z) = ∏_{e | q} Φ_e(z)^{M_e}, where M_e is the largest multiplicity of a
//! primitive e-th root among the eigenvalues of the elements of order e. The
//! numerators are computed one divisor e at a time: the terms with γˡ of
//! order e form a Galois orbit, so their sum is a field trace, evaluated in
//! the group ring ℤ[x]/(x^e − 1) (see [`group_ring`]).

pub mod cyclotomic;
pub mod group_ring;
pub mod poly;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, divisors, is_prime};
use crate::error::{Error, Result};
use crate::lens::LensSpace;
use cyclotomic::{CycPoly, CyclotomicNumber};
use group_ring::{div_linear, paired_trace, product_of_linear, trace_pairing, GroupRingElem};
pub use poly::{cyclotomic_poly, IntPoly, RationalFunction};

/// F̃ᵏ = nums[k] / den for 0 ≤ k ≤ 2m.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IkedaNumerators {
    pub q: u64,
    pub m: usize,
    pub den: IntPoly,
    pub nums: Vec<IntPoly>,
}

fn eigen_exponents(lens: &LensSpace, e: u64) -> Vec<usize> {
    lens.params()
        .iter()
        .flat_map(|&s| {
            let a = s % e;
            [a as usize, ((e - a) % e) as usize]
        })
        .collect()
}

fn max_multiplicity(exps: &[usize]) -> u32 {
    let mut sorted = exps.to_vec();
    sorted.sort_unstable();
    sorted
        .chunk_by(|a, b| a == b)
        .map(|c| c.len() as u32)
        .max()
        .unwrap_or(0)
}

impl IkedaNumerators {
    pub fn compute(lens: &LensSpace) -> Result<Self> {
        let q = lens.q();
        let m = lens.rank();
        let divs = divisors(q);
        let mut den = IntPoly::constant(1);
        for &e in &divs {
            let mult = max_multiplicity(&eigen_exponents(lens, e));
            den = &den * &cyclotomic_poly(e).pow(mult);
        }
        let den_small: Vec<i128> = den
            .coeffs()
            .iter()
            .map(|c| c.to_i128().ok_or(Error::Overflow("common denominator")))
            .collect::<Result<_>>()?;

        let width = den_small.len().saturating_sub(2 * m);
        let mut acc = vec![vec![0i128; width]; 2 * m + 1];
        for &e in &divs {
            let eu = e as usize;
            let exps = eigen_exponents(lens, e);
            let mut quotient: Vec<GroupRingElem> =
                den_small.iter().map(|&c| GroupRingElem::scalar(eu, c)).collect();
            for &a in &exps {
                quotient = div_linear(&quotient, a)?;
            }
            let wpoly = product_of_linear(eu, &exps)?;
            for (k, wk) in wpoly.iter().enumerate() {
                let v = trace_pairing(wk)?;
                let sign: i128 = if k % 2 == 0 { 1 } else { -1 };
                for (i, qi) in quotient.iter().enumerate() {
                    let t = paired_trace(&v, qi)?;
                    acc[k][i] = acc[k][i]
                        .checked_add(sign * t)
                        .ok_or(Error::Overflow("generating function numerator"))?;
                }
            }
        }
        let nums = acc
            .into_iter()
            .map(|row| IntPoly::new(row.into_iter().map(BigInt::from).collect()))
            .collect();
        Ok(IkedaNumerators { q, m, den, nums })
    }

    pub fn ftilde(&self, k: usize) -> Result<RationalFunction> {
        let num = self.nums.get(k).ok_or(Error::InvalidP { p: k, m: self.m })?;
        RationalFunction::new(num.clone(), self.den.clone())
    }

    /// Σ_{n≥1} dim V^Γ_{nε₁} zⁿ = (1/q) Σ_l (1 − z²)/det(z − γˡ) − 1.
    pub fn f0_closed(&self) -> RationalFunction {
        let one_minus_z2 = IntPoly::from_i64(&[1, 0, -1]);
        let qd = self.den.scale(&BigInt::from(self.q));
        let num = &(&one_minus_z2 * &self.nums[0]) - &qd;
        RationalFunction { num, den: qd }
    }

    /// Σ_n dim V^Γ_{π_{n,p+1}} zⁿ, where π_{n,p+1} has highest weight
    /// nε₁ + ε₁ + … + ε_{p+1} (for p + 1 = m both signs of the last
    /// coordinate are summed). Obtained from
    ///   z·F(z) = (−1)^{p+1} z^{−p} + (1/q) Σ_{k ≤ p} (−1)^{p−k} (z^{k−p} − z^{p−k+2}) F̃ᵏ(z),
    /// whose Laurent part cancels.
    pub fn f_p_closed(&self, p: usize) -> Result<RationalFunction> {
        if p >= self.m {
            return Err(Error::InvalidP { p, m: self.m });
        }
        let sign = |e: usize| if e.is_multiple_of(2) { BigInt::from(1) } else { BigInt::from(-1) };
        let mut num = self.den.scale(&(sign(p + 1) * BigInt::from(self.q)));
        for k in 0..=p {
            let factor = &IntPoly::monomial(k) - &IntPoly::monomial(2 * p - k + 2);
            num = &num + &(&factor * &self.nums[k]).scale(&sign(p - k));
        }
        let low = p + 1;
        if num.coeffs().iter().take(low).any(|c| !c.is_zero()) {
            return Err(Error::HypothesisViolated("Laurent part of the p-form generating function does not cancel".into()));
        }
        let shifted = IntPoly::new(num.coeffs().iter().skip(low).cloned().collect());
        Ok(RationalFunction {
            num: shifted,
            den: self.den.scale(&BigInt::from(self.q)),
        })
    }

    /// Numerator of Q(w, z) = Σ_l det(w − γˡ)/det(z − γˡ) over `den`, by powers of w.
    /// Every F̃ᵏ agrees, by cross-multiplication.
    pub fn same_functions(&self, other: &IkedaNumerators) -> bool {
        self.q == other.q
            && self.m == other.m
            && self
                .nums
                .iter()
                .zip(&other.nums)
                .all(|(x, y)| x * &other.den == y * &self.den)
    }

    pub fn q_numerator(&self) -> Vec<IntPoly> {
        self.nums
            .iter()
            .enumerate()
            .map(|(k, n)| if k % 2 == 0 { n.clone() } else { -n })
            .collect()
    }
}

pub fn ftilde(lens: &LensSpace, p: usize) -> Result<RationalFunction> {
    if p > 2 * lens.rank() {
        return Err(Error::InvalidP { p, m: lens.rank() });
    }
    IkedaNumerators::compute(lens)?.ftilde(p)
}

pub fn f0_closed(lens: &LensSpace) -> Result<RationalFunction> {
    Ok(IkedaNumerators::compute(lens)?.f0_closed())
}

pub fn f_p_closed(lens: &LensSpace, p: usize) -> Result<RationalFunction> {
    IkedaNumerators::compute(lens)?.f_p_closed(p)
}

/// Equality of Q(w, z), i.e. of every F̃ᵏ: p-isospectrality for all p.
pub fn q_equal(a: &LensSpace, b: &LensSpace) -> Result<bool> {
    if a.q() != b.q() || a.rank() != b.rank() {
        return Ok(false);
    }
    Ok(IkedaNumerators::compute(a)?.same_functions(&IkedaNumerators::compute(b)?))
}

/// F̃ᵖ equal for all p ≤ p0.
pub fn ftilde_equal_up_to(a: &LensSpace, b: &LensSpace, p0: usize) -> Result<bool> {
    if a.q() != b.q() || a.rank() != b.rank() {
        return Ok(false);
    }
    let na = IkedaNumerators::compute(a)?;
    let nb = IkedaNumerators::compute(b)?;
    Ok((0..=p0.min(2 * a.rank())).all(|k| (&na.nums[k] * &nb.den) == (&nb.nums[k] * &na.den)))
}

/// det(z − γˡ) = ∏_j (z − ξ^{s_j l})(z − ξ^{−s_j l}).
pub fn char_poly_factor(lens: &LensSpace, l: u64) -> CycPoly {
    let q = lens.q();
    lens.params().iter().fold(
        CycPoly::constant(CyclotomicNumber::from_int(q, 1)),
        |acc, &s| {
            let e = (s * (l % q)) as i64;
            acc.mul(&CycPoly::linear(CyclotomicNumber::xi_pow(q, e)))
                .mul(&CycPoly::linear(CyclotomicNumber::xi_pow(q, -e)))
        },
    )
}

/// χᵏ(γˡ): the k-th elementary symmetric function of the eigenvalues ξ^{±s_j l}.
pub fn exterior_character(lens: &LensSpace, k: usize, l: u64) -> CyclotomicNumber {
    let q = lens.q();
    // ∏ (1 + t·λ) collected by powers of t
    let mut e = vec![CyclotomicNumber::from_int(q, 1)];
    for &s in lens.params() {
        let x = (s * (l % q)) as i64;
        for lam in [CyclotomicNumber::xi_pow(q, x), CyclotomicNumber::xi_pow(q, -x)] {
            let mut next = vec![CyclotomicNumber::zero(q); e.len() + 1];
            for (i, c) in e.iter().enumerate() {
                next[i] = &next[i] + c;
                next[i + 1] = &next[i + 1] + &(c * &lam);
            }
            e = next;
        }
    }
    e.get(k).cloned().unwrap_or_else(|| CyclotomicNumber::zero(q))
}

/// Straightforward evaluation of the numerator of F̃ᵏ over `den` by summing
/// all q group elements in ℚ(ξ_q). Slow; used to cross-check the trace path.
pub fn ftilde_numerator_reference(lens: &LensSpace, k: usize, den: &IntPoly) -> Option<IntPoly> {
    let q = lens.q();
    let d = CycPoly::from_int_poly(q, den);
    let mut total = CycPoly { q, coeffs: vec![] };
    for l in 0..q {
        let mut part = d.clone();
        for &s in lens.params() {
            let e = (s * l) as i64;
            part = part.div_linear(&CyclotomicNumber::xi_pow(q, e)).0;
            part = part.div_linear(&CyclotomicNumber::xi_pow(q, -e)).0;
        }
        total = total.add(&part.scale(&exterior_character(lens, k, l)));
    }
    total.to_int_poly()
}

fn require_prime_l0(lens: &LensSpace) -> Result<LensSpace> {
    let q = lens.q();
    if q < 3 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    lens.dual()
}

/// Ψ(z) = Σ_{l=1}^{q−1} ∏_j (z − ξ^{s̄_j l})(z − ξ^{−s̄_j l}) over the dual
/// parameters s̄; q an odd prime and L in the family with distinct ±parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Psi {
    pub h: usize,
    pub poly: IntPoly,
}

impl Psi {
    /// a_k in Ψ = Σ_k (−1)ᵏ a_k z^{2h−k}.
    pub fn a(&self, k: usize) -> BigInt {
        let c = self.poly.coeff(2 * self.h - k);
        if k.is_multiple_of(2) {
            c
        } else {
            -c
        }
    }

    pub fn a_all(&self) -> Vec<BigInt> {
        (0..=2 * self.h).map(|k| self.a(k)).collect()
    }
}

pub fn psi(lens: &LensSpace) -> Result<Psi> {
    let dual = require_prime_l0(lens)?;
    let q = lens.q() as usize;
    let exps = eigen_exponents(&dual, q as u64);
    let prod = product_of_linear(q, &exps)?;
    let coeffs = prod
        .iter()
        .map(|c| c.trace().map(BigInt::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(Psi {
        h: dual.rank(),
        poly: IntPoly::new(coeffs),
    })
}

/// Ψ computed by summing in ℚ(ξ_q) term by term.
pub fn psi_reference(lens: &LensSpace) -> Result<Psi> {
    let dual = require_prime_l0(lens)?;
    let q = lens.q();
    let mut total = CycPoly { q, coeffs: vec![] };
    for l in 1..q {
        total = total.add(&char_poly_factor(&dual, l));
    }
    let poly = total
        .to_int_poly()
        .ok_or_else(|| Error::HypothesisViolated("Ψ has non-rational coefficients".into()))?;
    Ok(Psi { h: dual.rank(), poly })
}

fn require_two_dual_params(lens: &LensSpace) -> Result<LensSpace> {
    let q = lens.q();
    if q < 3 || !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let m = lens.rank() as u64;
    if q - 1 != 2 * m + 4 {
        return Err(Error::WrongShape {
            q_minus_1: q - 1,
            two_m_plus_4: 2 * m + 4,
        });
    }
    lens.dual()
}

/// Ψᵖ(z) = Σ_{l=1}^{q} χᵖ(γˡ) ∏_{j=1,2} (z − ξ^{s̄_j l})(z − ξ^{−s̄_j l}),
/// for q − 1 = 2m + 4. Coefficients constant term first; b⁽ᵗ⁾ = (−1)ᵗ·coeff_t.
pub fn psi_p(lens: &LensSpace, p: usize) -> Result<IntPoly> {
    let dual = require_two_dual_params(lens)?;
    let m = lens.rank();
    if p > 2 * m {
        return Err(Error::InvalidP { p, m });
    }
    let q = lens.q() as usize;
    // l = q: identity, contributes C(2m, p)·(z − 1)⁴
    let identity = IntPoly::from_i64(&[1, -1]).pow(4).scale(&BigInt::from(binomial(2 * m as u64, p as u64)));
    let chi = product_of_linear(q, &eigen_exponents(lens, q as u64))?;
    // coefficient of w^{2m−p} is (−1)^p e_{p}; with e_p = e_{2m−p} any index works
    let mut chi_p = chi[p].clone();
    if p % 2 == 1 {
        chi_p = chi_p.mul(&GroupRingElem::scalar(q, -1))?;
    }
    let v = trace_pairing(&chi_p)?;
    let prod = product_of_linear(q, &eigen_exponents(&dual, q as u64))?;
    let coeffs = prod
        .iter()
        .map(|c| paired_trace(&v, c).map(BigInt::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(&IntPoly::new(coeffs) + &identity)
}

/// Same as [`psi_p`], summing in ℚ(ξ_q) term by term.
pub fn psi_p_reference(lens: &LensSpace, p: usize) -> Result<IntPoly> {
    let dual = require_two_dual_params(lens)?;
    let q = lens.q();
    let mut total = CycPoly { q, coeffs: vec![] };
    for l in 1..=q {
        total = total.add(&char_poly_factor(&dual, l).scale(&exterior_character(lens, p, l)));
    }
    total
        .to_int_poly()
        .ok_or_else(|| Error::HypothesisViolated("Ψᵖ has non-integral coefficients".into()))
}
