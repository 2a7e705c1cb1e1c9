//! Families of lens spaces whose parameters are distinct up to sign, for q
//! an odd prime: enumeration of isometry classes, subset-sum counts, the
//! filtration by short relations among the two dual parameters, and the
//! construction of pairs isospectral exactly up to a given degree.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, euler_phi, gcd, is_prime, next_prime, reduce};
use crate::error::{Error, Result};
use crate::lens::{canonical_of, LensSpace};

/// One canonical representative per isometry class of lens spaces
/// L(q; s₁,…,s_m) with s_i ≢ ±s_j, sorted.
pub fn enumerate_l0_classes(q: u64, m: usize) -> Result<Vec<LensSpace>> {
    if q < 3 || m == 0 || 2 * m as u64 > euler_phi(q) {
        return Ok(Vec::new());
    }
    let reps: Vec<u64> = (1..=q / 2).filter(|&r| gcd(r, q) == 1).collect();
    // Every class has a representative with s₁ = 1, so choose the remaining
    // m − 1 values from the sign-reduced units above 1.
    let rest = &reps[1..];
    let found: BTreeSet<Vec<u64>> = (0..rest.len().max(1))
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut local = BTreeSet::new();
            if m == 1 {
                if first == 0 {
                    local.insert(vec![1]);
                }
                return local.into_iter();
            }
            let mut chosen = vec![1u64, rest[first]];
            combine(rest, first + 1, m - 2, &mut chosen, &mut |t| {
                local.insert(canonical_of(q, t).params);
            });
            local.into_iter()
        })
        .collect();
    Ok(found.into_iter().map(|p| LensSpace::from_units(q, p)).collect())
}

fn combine(pool: &[u64], start: usize, left: usize, chosen: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if left == 0 {
        f(chosen);
        return;
    }
    for i in start..pool.len() {
        if pool.len() - i < left {
            break;
        }
        chosen.push(pool[i]);
        combine(pool, i + 1, left - 1, chosen, f);
        chosen.pop();
    }
}

/// Number of k-subsets A of {±s_j} containing no pair {a, −a}, with
/// Σ A ≡ s (mod q). Each parameter slot contributes −s_j, nothing, or +s_j.
pub fn a_count(lens: &LensSpace, k: usize, s: i64) -> u64 {
    let q = lens.q();
    let target = reduce(s, q);
    let mut counts = vec![vec![0u64; q as usize]; k + 1];
    counts[0][0] = 1;
    for &x in lens.params() {
        let mut next = counts.clone();
        for size in 0..k {
            for r in 0..q {
                let c = counts[size][r as usize];
                if c != 0 {
                    next[size + 1][((r + x) % q) as usize] += c;
                    next[size + 1][((r + q - x) % q) as usize] += c;
                }
            }
        }
        counts = next;
    }
    counts[k][target as usize]
}

/// Subset-sum count with the slot-disjointness weighting used in χᵖ:
/// Σ_d C(m − (p − 2d), d)·A^{(p−2d)}(s).
fn weighted_a(lens: &LensSpace, p: usize, s: i64) -> BigInt {
    let m = lens.rank();
    (0..=p / 2)
        .filter(|d| p - 2 * d <= m)
        .map(|d| {
            let k = p - 2 * d;
            BigInt::from(binomial((m - k) as u64, d as u64)) * BigInt::from(a_count(lens, k, s))
        })
        .sum()
}

fn check_shape(lens: &LensSpace) -> Result<LensSpace> {
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

/// b⁽⁰⁾…b⁽⁴⁾ of Ψᵖ(z) = Σ_t (−1)ᵗ b⁽ᵗ⁾ zᵗ from subset-sum counts.
pub fn b_coefficients(lens: &LensSpace, p: usize) -> Result<[BigInt; 5]> {
    let dual = check_shape(lens)?;
    let q = BigInt::from(lens.q());
    let (s1, s2) = (dual.params()[0] as i64, dual.params()[1] as i64);
    let b0 = &q * weighted_a(lens, p, 0);
    let b1 = BigInt::from(2) * &q * (weighted_a(lens, p, s1) + weighted_a(lens, p, s2));
    let b2 = BigInt::from(2) * &b0 + BigInt::from(2) * &q * (weighted_a(lens, p, s1 + s2) + weighted_a(lens, p, s1 - s2));
    Ok([b0.clone(), b1.clone(), b2, b1, b0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiltrationLevel {
    Finite(u64),
    Infinite,
}

/// Largest p with a₁s̄₁ + a₂s̄₂ ≢ 0 (mod q) whenever 1 ≤ |a₁| + |a₂| ≤ p + 2.
pub fn filtration_level(lens: &LensSpace) -> Result<FiltrationLevel> {
    let dual = check_shape(lens)?;
    let q = lens.q() as i64;
    let (s1, s2) = (dual.params()[0] as i64, dual.params()[1] as i64);
    for budget in 1..=q {
        let hit = (-budget..=budget).any(|a1| {
            let a2 = budget - a1.abs();
            (a1 * s1 + a2 * s2).rem_euclid(q) == 0 || (a1 * s1 - a2 * s2).rem_euclid(q) == 0
        });
        if hit {
            // the first relation appears at `budget`, so budgets ≤ budget − 1 are clean
            return Ok(FiltrationLevel::Finite((budget - 3).max(0) as u64));
        }
    }
    Ok(FiltrationLevel::Infinite)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IkedaPrediction {
    /// Isospectral for every p ≤ this degree.
    pub p_iso_up_to: FiltrationLevel,
    /// Degree at which isospectrality provably fails, if decided.
    pub breaks_at: Option<u64>,
}

pub fn mainikeda_predict(a: &LensSpace, b: &LensSpace) -> Result<IkedaPrediction> {
    if a.q() != b.q() || a.rank() != b.rank() {
        return Err(Error::HypothesisViolated("both lens spaces must share q and m".into()));
    }
    let la = filtration_level(a)?;
    let lb = filtration_level(b)?;
    let p0 = la.min(lb);
    let breaks_at = match (la, lb, p0) {
        (_, _, FiltrationLevel::Finite(p)) if la != lb => Some(p + 1),
        _ => None,
    };
    Ok(IkedaPrediction {
        p_iso_up_to: p0,
        breaks_at,
    })
}

/// The lens space in the family whose dual has the given parameters.
pub fn from_dual(q: u64, dual: &[u64]) -> Result<LensSpace> {
    let d = LensSpace::new(q, &dual.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
    d.dual()
}

/// A pair isospectral for all p ≤ p0 but not for p0 + 1: q is the smallest
/// prime above (p0+2)(p0+3)+1, m = (q−5)/2, and the duals are
/// L(q; 1, p0+2) and L(q; 1, p0+3).
pub fn build_pair_for_p0(p0: u64) -> Result<(LensSpace, LensSpace)> {
    let q = next_prime((p0 + 2) * (p0 + 3) + 1);
    let a = from_dual(q, &[1, p0 + 2])?;
    let b = from_dual(q, &[1, p0 + 3])?;
    Ok((a.canonical(), b.canonical()))
}
