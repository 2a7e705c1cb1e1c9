//! Exact traces through the group ring ℤ[x]/(x^e − 1).
//!
//! A sum Σ_{u ∈ (ℤ/e)^×} f(ζ_e^u) of a polynomial expression in a primitive
//! e-th root of unity is the field trace of f(ζ_e), and the trace of ζ_e^t is
//! the Ramanujan sum c_e(t). Evaluating f in the group ring (where x^e = 1
//! exactly) and applying t ↦ c_e(t) linearly therefore gives the sum over a
//! Galois orbit without ever reducing modulo Φ_e.

use crate::arith::ramanujan_sum;
use crate::error::{Error, Result};

const OVERFLOW: Error = Error::Overflow("group ring coefficient");

/// Element of ℤ[x]/(x^e − 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElem(pub Vec<i128>);

impl GroupRingElem {
    pub fn zero(e: usize) -> Self {
        GroupRingElem(vec![0; e])
    }

    pub fn scalar(e: usize, c: i128) -> Self {
        let mut v = vec![0; e];
        v[0] = c;
        GroupRingElem(v)
    }

    pub fn x_pow(e: usize, a: usize) -> Self {
        let mut v = vec![0; e];
        v[a % e] = 1;
        GroupRingElem(v)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn add_assign(&mut self, rhs: &GroupRingElem) -> Result<()> {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a = a.checked_add(*b).ok_or(OVERFLOW)?;
        }
        Ok(())
    }

    /// self + c·x^a·rhs
    pub fn add_rotated(&mut self, rhs: &GroupRingElem, a: usize, c: i128) -> Result<()> {
        let e = self.0.len();
        for (i, b) in rhs.0.iter().enumerate() {
            if *b != 0 {
                let t = b.checked_mul(c).ok_or(OVERFLOW)?;
                let slot = &mut self.0[(i + a) % e];
                *slot = slot.checked_add(t).ok_or(OVERFLOW)?;
            }
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &GroupRingElem) -> Result<GroupRingElem> {
        let e = self.0.len();
        let mut out = GroupRingElem::zero(e);
        for (a, &c) in self.0.iter().enumerate() {
            if c != 0 {
                out.add_rotated(rhs, a, c)?;
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<i128> {
        let e = self.0.len() as u64;
        let mut acc: i128 = 0;
        for (t, &c) in self.0.iter().enumerate() {
            if c != 0 {
                let term = c.checked_mul(ramanujan_sum(e, t as u64) as i128).ok_or(OVERFLOW)?;
                acc = acc.checked_add(term).ok_or(OVERFLOW)?;
            }
        }
        Ok(acc)
    }
}

/// Polynomial in z with group-ring coefficients, constant term first.
pub type GrPoly = Vec<GroupRingElem>;

/// ∏ (z − x^{a}) over the given exponents.
pub fn product_of_linear(e: usize, exps: &[usize]) -> Result<GrPoly> {
    let mut poly: GrPoly = vec![GroupRingElem::scalar(e, 1)];
    for &a in exps {
        let mut next: GrPoly = vec![GroupRingElem::zero(e); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1].add_assign(c)?;
            next[i].add_rotated(c, a, -1)?;
        }
        poly = next;
    }
    Ok(poly)
}

/// Quotient of `p` by the monic factor z − x^a; the remainder, which vanishes
/// in every field quotient where the division is exact, is dropped.
pub fn div_linear(p: &GrPoly, a: usize) -> Result<GrPoly> {
    let n = p.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut quot = vec![GroupRingElem::zero(p[0].order()); n - 1];
    let mut carry = p[n - 1].clone();
    for i in (0..n - 1).rev() {
        quot[i] = carry.clone();
        let mut next = p[i].clone();
        next.add_rotated(&carry, a, 1)?;
        carry = next;
    }
    Ok(quot)
}

/// Tr(a·b) for many b against one a: returns v with Tr(a·b) = Σ_t b_t v_t.
pub fn trace_pairing(a: &GroupRingElem) -> Result<Vec<i128>> {
    let e = a.order();
    let c: Vec<i128> = (0..e as u64).map(|t| ramanujan_sum(e as u64, t) as i128).collect();
    let mut v = vec![0i128; e];
    for (t2, slot) in v.iter_mut().enumerate() {
        let mut acc: i128 = 0;
        for (t1, &x) in a.0.iter().enumerate() {
            if x != 0 {
                acc = acc
                    .checked_add(x.checked_mul(c[(t1 + t2) % e]).ok_or(OVERFLOW)?)
                    .ok_or(OVERFLOW)?;
            }
        }
        *slot = acc;
    }
    Ok(v)
}

pub fn paired_trace(v: &[i128], b: &GroupRingElem) -> Result<i128> {
    let mut acc: i128 = 0;
    for (x, y) in v.iter().zip(&b.0) {
        if *y != 0 {
            acc = acc.checked_add(x.checked_mul(*y).ok_or(OVERFLOW)?).ok_or(OVERFLOW)?;
        }
    }
    Ok(acc)
}
