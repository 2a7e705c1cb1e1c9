//! Type D_m weight combinatorics: dominance, Casimir eigenvalues, Freudenthal
//! multiplicities, the Weyl dimension formula and SO(2m) ↓ SO(2m−1) branching.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use once_cell::sync::Lazy;
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates in the basis ε₁,…,ε_m.
pub type Weight = Vec<i64>;

/// Dominant weight for SO(2m): a₁ ≥ … ≥ a_{m−1} ≥ |a_m|.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HighestWeight(Vec<i64>);

/// Dominant weight for SO(2m−1): b₁ ≥ … ≥ b_{m−1} ≥ 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KHighestWeight(Vec<i64>);

impl HighestWeight {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::UnsupportedRank(coords.len()));
        }
        if !is_dominant(&coords) {
            return Err(Error::NotDominant(coords));
        }
        Ok(HighestWeight(coords))
    }

    /// kε₁ + Λ_p, where Λ_p = ε₁+…+ε_p for p < m and Λ_m^± carries ±1 last.
    pub fn k_plus_fundamental(m: usize, k: u64, p: usize, sign: i64) -> Result<Self> {
        if p > m {
            return Err(Error::InvalidP { p, m });
        }
        let mut c = vec![0i64; m];
        for x in c.iter_mut().take(p) {
            *x = 1;
        }
        if p == m && sign < 0 {
            c[m - 1] = -1;
        }
        c[0] += k as i64;
        HighestWeight::new(c)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn one_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }
}

impl KHighestWeight {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        let ok = coords.windows(2).all(|w| w[0] >= w[1]) && coords.last().is_none_or(|&x| x >= 0);
        if !ok {
            return Err(Error::NotDominant(coords));
        }
        Ok(KHighestWeight(coords))
    }

    /// Highest weight of the p-th exterior power of the standard representation.
    pub fn exterior(m: usize, p: usize) -> Result<Self> {
        if p > m - 1 {
            return Err(Error::InvalidP { p, m });
        }
        KHighestWeight::new((0..m - 1).map(|i| (i < p) as i64).collect())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

pub fn is_dominant(c: &[i64]) -> bool {
    let m = c.len();
    m >= 1 && c[..m - 1].windows(2).all(|w| w[0] >= w[1]) && (m == 1 || c[m - 2] >= c[m - 1].abs())
}

/// The dominant weight in the Weyl orbit of η (permutations and even
/// numbers of sign changes).
pub fn dominant_rep(eta: &[i64]) -> Weight {
    let mut d: Vec<i64> = eta.iter().map(|x| x.abs()).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let negatives = eta.iter().filter(|&&x| x < 0).count();
    if negatives % 2 == 1 && eta.iter().all(|&x| x != 0) {
        let last = d.len() - 1;
        d[last] = -d[last];
    }
    d
}

fn rho(m: usize) -> impl Iterator<Item = i64> {
    (0..m).map(move |j| (m - 1 - j) as i64)
}

/// ⟨Λ+ρ, Λ+ρ⟩ − ⟨ρ, ρ⟩ with ρ = (m−1, m−2, …, 0).
pub fn casimir_eigenvalue(lambda: &HighestWeight) -> i64 {
    lambda
        .0
        .iter()
        .zip(rho(lambda.rank()))
        .map(|(&a, r)| a * a + 2 * a * r)
        .sum()
}

/// Weyl dimension formula for D_m.
pub fn weyl_dimension(lambda: &HighestWeight) -> BigInt {
    let l: Vec<i64> = lambda.0.iter().zip(rho(lambda.rank())).map(|(&a, r)| a + r).collect();
    let r: Vec<i64> = rho(lambda.rank()).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            num *= BigInt::from((l[i] - l[j]) * (l[i] + l[j]));
            den *= BigInt::from((r[i] - r[j]) * (r[i] + r[j]));
        }
    }
    debug_assert!((&num % &den) == BigInt::from(0));
    num / den
}

/// Simple-root coordinates of Λ − μ, if it lies in the positive root cone.
fn root_cone_level(lambda: &[i64], mu: &[i64]) -> Option<i64> {
    let m = lambda.len();
    let d: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
    let mut level = 0;
    let mut partial = 0;
    for &x in &d[..m - 2] {
        partial += x;
        if partial < 0 {
            return None;
        }
        level += partial;
    }
    let head: i64 = d[..m - 1].iter().sum();
    let total = head + d[m - 1];
    let prev = head - d[m - 1];
    if total < 0 || prev < 0 || total % 2 != 0 {
        return None;
    }
    Some(level + total / 2 + prev / 2)
}

const MAX_RANK: usize = 16;

fn key(w: &[i64]) -> u128 {
    w.iter()
        .fold(0u128, |acc, &x| (acc << 8) | ((x as i8) as u8 as u128))
}

/// Multiplicities of every dominant weight of one irreducible representation.
#[derive(Debug)]
pub struct MultiplicityTable {
    lambda: HighestWeight,
    mults: HashMap<u128, u128>,
    dominant: Vec<(Weight, u128)>,
}

impl MultiplicityTable {
    fn build(lambda: &HighestWeight) -> Result<Self> {
        let m = lambda.rank();
        let top = lambda.0[0];
        if m > MAX_RANK || top > i8::MAX as i64 {
            return Err(Error::Overflow("weight coordinates exceed table encoding"));
        }
        let mut dom: Vec<(i64, Weight)> = Vec::new();
        let mut cur = vec![0i64; m];
        dominant_below(lambda.coords(), top, 0, &mut cur, &mut dom);
        dom.sort();

        let lr: Vec<i64> = lambda.0.iter().zip(rho(m)).map(|(&a, r)| a + r).collect();
        let norm_lr: i128 = lr.iter().map(|&x| (x * x) as i128).sum();
        let roots = positive_roots(m);
        let mut mults: HashMap<u128, u128> = HashMap::with_capacity(dom.len());
        let mut dominant = Vec::with_capacity(dom.len());
        let mut shifted = vec![0i64; m];
        for (level, mu) in dom {
            let mult = if level == 0 {
                1
            } else {
                let mut sum: i128 = 0;
                for (i, j, sgn) in &roots {
                    // α = ε_i + sgn·ε_j, ⟨α, α⟩ = 2
                    let base = mu[*i] + sgn * mu[*j];
                    let mut step = 1i64;
                    loop {
                        shifted.copy_from_slice(&mu);
                        shifted[*i] += step;
                        shifted[*j] += sgn * step;
                        if shifted[*i].abs() > top || shifted[*j].abs() > top {
                            break;
                        }
                        let got = mults.get(&key(&dominant_rep(&shifted))).copied().unwrap_or(0);
                        if got == 0 {
                            break;
                        }
                        let inner = base + 2 * step;
                        sum += inner as i128 * got as i128;
                        step += 1;
                    }
                }
                let mr: i128 = mu
                    .iter()
                    .zip(rho(m))
                    .map(|(&a, r)| ((a + r) * (a + r)) as i128)
                    .sum();
                let denom = norm_lr - mr;
                let numer = 2 * sum;
                assert!(denom > 0, "Freudenthal denominator must be positive");
                assert_eq!(numer % denom, 0, "Freudenthal multiplicity not integral");
                (numer / denom) as u128
            };
            if mult > 0 {
                mults.insert(key(&mu), mult);
            }
            dominant.push((mu, mult));
        }
        Ok(MultiplicityTable {
            lambda: lambda.clone(),
            mults,
            dominant,
        })
    }

    pub fn highest_weight(&self) -> &HighestWeight {
        &self.lambda
    }

    pub fn multiplicity(&self, eta: &[i64]) -> u128 {
        if eta.len() != self.lambda.rank() || eta.iter().any(|x| x.abs() > self.lambda.0[0]) {
            return 0;
        }
        self.mults.get(&key(&dominant_rep(eta))).copied().unwrap_or(0)
    }

    /// Dominant weights with their multiplicities, by increasing depth below Λ.
    pub fn dominant_weights(&self) -> &[(Weight, u128)] {
        &self.dominant
    }
}

fn positive_roots(m: usize) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            out.push((i, j, -1));
            out.push((i, j, 1));
        }
    }
    out
}

fn dominant_below(lambda: &[i64], cap: i64, pos: usize, cur: &mut Vec<i64>, out: &mut Vec<(i64, Weight)>) {
    let m = lambda.len();
    if pos == m - 1 {
        let bound = if m >= 2 { cur[m - 2] } else { cap };
        for x in -bound..=bound {
            cur[pos] = x;
            if let Some(level) = root_cone_level(lambda, cur) {
                out.push((level, cur.clone()));
            }
        }
        return;
    }
    let upper = if pos == 0 { cap } else { cur[pos - 1] };
    for x in 0..=upper {
        cur[pos] = x;
        dominant_below(lambda, cap, pos + 1, cur, out);
    }
}

static TABLES: Lazy<Mutex<HashMap<HighestWeight, Arc<MultiplicityTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Memoised Freudenthal table for Λ.
pub fn multiplicity_table(lambda: &HighestWeight) -> Result<Arc<MultiplicityTable>> {
    if let Some(t) = TABLES.lock().get(lambda) {
        return Ok(t.clone());
    }
    // Built outside the lock so distinct Λ can be computed in parallel.
    let table = Arc::new(MultiplicityTable::build(lambda)?);
    Ok(TABLES.lock().entry(lambda.clone()).or_insert(table).clone())
}

pub fn weight_multiplicity(lambda: &HighestWeight, eta: &[i64]) -> Result<u128> {
    Ok(multiplicity_table(lambda)?.multiplicity(eta))
}

/// The weight (k − (m−ℓ−1), 1, …, 1, 0, …, 0) of one-norm k with ℓ zeros.
pub fn class_representative(m: usize, norm: u64, zeros: usize) -> Result<Weight> {
    let support = m.checked_sub(zeros).ok_or(Error::NoSuchWeightShape { m, norm, zeros })?;
    if (support == 0 && norm != 0) || (norm as usize) < support {
        return Err(Error::NoSuchWeightShape { m, norm, zeros });
    }
    let mut w = vec![0i64; m];
    for x in w.iter_mut().take(support) {
        *x = 1;
    }
    if support > 0 {
        w[0] = norm as i64 - (support as i64 - 1);
    }
    Ok(w)
}

/// Multiplicity shared by all weights with the given one-norm and number of
/// zero coordinates (valid for kε₁ + Λ_p with p < m).
pub fn regularity_class_multiplicity(lambda: &HighestWeight, norm: u64, zeros: usize) -> Result<u128> {
    let m = lambda.rank();
    let rep = class_representative(m, norm, zeros)?;
    let table = multiplicity_table(lambda)?;
    let value = table.multiplicity(&rep);
    #[cfg(debug_assertions)]
    {
        let support = m - zeros;
        if support >= 2 && norm as usize > support {
            // spread the excess over the first two coordinates instead
            let mut other = rep.clone();
            let excess = other[0] - 1;
            other[0] = 1 + excess / 2;
            other[1] = 1 + excess - excess / 2;
            other[support - 1] = -other[support - 1];
            if lambda.coords()[m - 1] == 0 {
                debug_assert_eq!(table.multiplicity(&other), value, "regularity fails for {lambda:?}");
            }
        }
    }
    Ok(value)
}

/// Interlacing a₁ ≥ b₁ ≥ a₂ ≥ … ≥ b_{m−1} ≥ |a_m|.
pub fn branches_to(mu: &KHighestWeight, lambda: &HighestWeight) -> bool {
    let a = lambda.coords();
    let b = mu.coords();
    if b.len() + 1 != a.len() {
        return false;
    }
    (0..b.len()).all(|i| a[i] >= b[i] && b[i] >= a[i + 1].abs())
}

/// All Λ whose restriction to SO(2m−1) contains τ = μ, with Casimir ≤ bound,
/// sorted by (Casimir, Λ).
pub fn ghat_tau(mu: &KHighestWeight, casimir_bound: i64) -> Vec<HighestWeight> {
    let b = mu.coords();
    let m = b.len() + 1;
    // Choices for a₂…a_m, then scan a₁ upward.
    let mut tails: Vec<Vec<i64>> = vec![Vec::new()];
    for i in 1..m {
        let (lo, hi) = if i == m - 1 {
            (-b[i - 1], b[i - 1])
        } else {
            (b[i], b[i - 1])
        };
        tails = tails
            .into_iter()
            .flat_map(|t| {
                (lo..=hi).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    let tail_cas = |t: &[i64]| -> i64 {
        t.iter()
            .enumerate()
            .map(|(j, &a)| a * a + 2 * a * (m as i64 - 2 - j as i64))
            .sum()
    };
    let min_tail = tails.iter().map(|t| tail_cas(t)).min().unwrap_or(0);
    let mut out = Vec::new();
    let mut a1 = b.first().copied().unwrap_or(0);
    loop {
        let head = a1 * a1 + 2 * a1 * (m as i64 - 1);
        if head + min_tail > casimir_bound {
            break;
        }
        for t in &tails {
            if head + tail_cas(t) <= casimir_bound {
                let mut c = vec![a1];
                c.extend_from_slice(t);
                if let Ok(h) = HighestWeight::new(c) {
                    out.push(h);
                }
            }
        }
        a1 += 1;
    }
    out.sort_by_key(|h| (casimir_eigenvalue(h), h.clone()));
    out
}

/// Dimension as u128 (panics only beyond 128 bits).
pub fn weyl_dimension_u128(lambda: &HighestWeight) -> u128 {
    weyl_dimension(lambda).to_u128().expect("dimension fits in u128")
}
