//! Congruence lattices ℒ(q; s) = {a ∈ ℤᵐ : Σ aⱼsⱼ ≡ 0 mod q} and exact counts
//! of their points by one-norm and number of zero coordinates.
//!
//! Two exact counting strategies are provided and cross-checked in tests:
//! a recursive enumeration of the first m−1 coordinates that solves the last
//! one by congruence (cheap for small m), and a residue dynamic programme
//! whose cost is linear in q·kmax (cheap for large m).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod, reduce};
use crate::error::{Error, Result};
use crate::lens::LensSpace;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceLattice {
    q: u64,
    s: Vec<u64>,
}

/// Counting strategy for [`CongruenceLattice::count_table_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Auto,
    Enumerate,
    ResidueDp,
}

impl CongruenceLattice {
    pub fn new(q: u64, s: &[i64]) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroModulus);
        }
        if s.is_empty() {
            return Err(Error::EmptyParameters);
        }
        Ok(CongruenceLattice {
            q,
            s: s.iter().map(|&x| reduce(x, q)).collect(),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn params(&self) -> &[u64] {
        &self.s
    }

    pub fn rank(&self) -> usize {
        self.s.len()
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        assert_eq!(a.len(), self.s.len(), "rank mismatch");
        let q = self.q as i128;
        let total: i128 = a
            .iter()
            .zip(&self.s)
            .map(|(&x, &s)| x as i128 * s as i128)
            .sum();
        total.rem_euclid(q) == 0
    }

    /// Norm bound that suffices to decide equality of all counts: the
    /// generating function is P(z, y)/(1 − z^q)^m with deg_z P ≤ m·q, so
    /// counts up to m·q determine the rest. One extra period is added.
    pub fn default_kmax(&self) -> u64 {
        (self.rank() as u64 + 1) * self.q
    }

    pub fn count_table(&self, kmax: u64) -> Result<CountTable> {
        self.count_table_with(kmax, CountMethod::Auto)
    }

    pub fn count_table_with(&self, kmax: u64, method: CountMethod) -> Result<CountTable> {
        let unit_pos = self.s.iter().position(|&x| gcd(x, self.q) == 1);
        let method = match (method, unit_pos) {
            (CountMethod::Enumerate, None) => CountMethod::ResidueDp,
            (CountMethod::Auto, None) => CountMethod::ResidueDp,
            (CountMethod::Auto, Some(_)) => {
                if self.enumeration_cost(kmax) <= 2.0 * self.dp_cost(kmax) {
                    CountMethod::Enumerate
                } else {
                    CountMethod::ResidueDp
                }
            }
            (m, _) => m,
        };
        match method {
            CountMethod::Enumerate => Ok(self.count_by_enumeration(kmax, unit_pos.unwrap())),
            _ => self.count_by_dp(kmax),
        }
    }

    /// Points of ℤ^{m−1} with one-norm ≤ kmax.
    fn enumeration_cost(&self, kmax: u64) -> f64 {
        let d = self.rank() as u64 - 1;
        (0..=d.min(kmax))
            .map(|j| {
                2f64.powi(j as i32)
                    * crate::arith::binomial(d, j) as f64
                    * crate::arith::binomial(kmax, j) as f64
            })
            .sum()
    }

    fn dp_cost(&self, kmax: u64) -> f64 {
        let m = self.rank() as f64;
        m * (m + 1.0) / 2.0 * self.q as f64 * (kmax + 1) as f64
    }

    fn count_by_enumeration(&self, kmax: u64, unit_pos: usize) -> CountTable {
        let q = self.q;
        let m = self.rank();
        let k = kmax as usize;
        let last = self.s[unit_pos];
        let neg_inv = (q - inv_mod(last, q).expect("unit")) % q;
        // c = −s_last⁻¹·Σ aⱼsⱼ is the residue the last coordinate must hit.
        let w: Vec<u64> = self
            .s
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != unit_pos)
            .map(|(_, &x)| crate::arith::mul_mod(x, neg_inv, q))
            .collect();

        let acc = if w.is_empty() {
            let mut acc = Accum::new(m, k);
            acc.emit(q, 0, 0, 0);
            acc
        } else {
            let r = kmax as i64;
            (-r..=r)
                .into_par_iter()
                .fold(
                    || Accum::new(m, k),
                    |mut acc, a| {
                        let n = a.unsigned_abs() as usize;
                        let z = (a == 0) as usize;
                        let c = reduce(a * w[0] as i64, q);
                        descend(&mut acc, q, &w[1..], k, n, z, c);
                        acc
                    },
                )
                .reduce(|| Accum::new(m, k), Accum::merge)
        };
        acc.finish(q)
    }

    fn count_by_dp(&self, kmax: u64) -> Result<CountTable> {
        let q = self.q as usize;
        let m = self.rank();
        let k = kmax as usize;
        let plane = q * (k + 1);
        let idx = |rho: usize, n: usize| rho * (k + 1) + n;
        let overflow = || Error::Overflow("lattice count");

        // layers[z] holds counts indexed by (residue, norm).
        let mut layers: Vec<Vec<u128>> = vec![vec![0; plane]];
        layers[0][idx(0, 0)] = 1;
        for &s in &self.s {
            let s = s as usize % q;
            let mut next: Vec<Vec<u128>> = vec![vec![0; plane]; layers.len() + 1];
            let results: Vec<Result<(Vec<u128>, usize)>> = layers
                .par_iter()
                .enumerate()
                .map(|(z, old)| {
                    // a ≠ 0 keeps the zero count; T± accumulate the runs a = ±1, ±2, …
                    let mut out = vec![0u128; plane];
                    let mut tp_prev = vec![0u128; q];
                    let mut tm_prev = vec![0u128; q];
                    let mut tp = vec![0u128; q];
                    let mut tm = vec![0u128; q];
                    for n in 1..=k {
                        for rho in 0..q {
                            let down = (rho + q - s) % q;
                            let up = (rho + s) % q;
                            tp[rho] = old[idx(down, n - 1)]
                                .checked_add(tp_prev[down])
                                .ok_or_else(overflow)?;
                            tm[rho] = old[idx(up, n - 1)]
                                .checked_add(tm_prev[up])
                                .ok_or_else(overflow)?;
                            out[idx(rho, n)] = tp[rho].checked_add(tm[rho]).ok_or_else(overflow)?;
                        }
                        std::mem::swap(&mut tp, &mut tp_prev);
                        std::mem::swap(&mut tm, &mut tm_prev);
                    }
                    Ok((out, z))
                })
                .collect();
            for r in results {
                let (out, z) = r?;
                for (dst, src) in next[z].iter_mut().zip(out) {
                    *dst = dst.checked_add(src).ok_or_else(overflow)?;
                }
                for (dst, &src) in next[z + 1].iter_mut().zip(&layers[z]) {
                    *dst = dst.checked_add(src).ok_or_else(overflow)?;
                }
            }
            layers = next;
        }
        let counts = (0..=k)
            .map(|n| (0..=m).map(|z| layers[z][idx(0, n)]).collect())
            .collect();
        Ok(CountTable { m, kmax, counts })
    }
}

impl From<&LensSpace> for CongruenceLattice {
    fn from(l: &LensSpace) -> Self {
        CongruenceLattice {
            q: l.q(),
            s: l.params().to_vec(),
        }
    }
}

pub fn lattice_of(l: &LensSpace) -> CongruenceLattice {
    CongruenceLattice::from(l)
}

/// Per-thread accumulator for the enumeration: `stride[z][n]` receives
/// contributions that repeat every q (the last coordinate can be shifted
/// by multiples of q), `exact[z][n]` those that occur once.
struct Accum {
    k: usize,
    stride: Vec<Vec<u64>>,
    exact: Vec<Vec<u64>>,
}

impl Accum {
    fn new(m: usize, k: usize) -> Self {
        Accum {
            k,
            stride: vec![vec![0; k + 1]; m + 1],
            exact: vec![vec![0; k + 1]; m + 1],
        }
    }

    fn merge(mut self, other: Accum) -> Accum {
        for (a, b) in self.stride.iter_mut().zip(&other.stride) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        for (a, b) in self.exact.iter_mut().zip(&other.exact) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self
    }

    /// The free coordinates have norm n and z zeros; the last coordinate
    /// ranges over c + qℤ.
    #[inline]
    fn emit(&mut self, q: u64, n: usize, z: usize, c: u64) {
        let (q, c, k) = (q as usize, c as usize, self.k);
        if c == 0 {
            self.exact[z + 1][n] += 1;
            if n + q <= k {
                self.stride[z][n + q] += 2;
            }
        } else {
            if n + c <= k {
                self.stride[z][n + c] += 1;
            }
            if n + q - c <= k {
                self.stride[z][n + q - c] += 1;
            }
        }
    }

    fn finish(mut self, q: u64) -> CountTable {
        let q = q as usize;
        let k = self.k;
        let m = self.stride.len() - 1;
        for row in &mut self.stride {
            for n in q..=k {
                row[n] += row[n - q];
            }
        }
        let counts = (0..=k)
            .map(|n| {
                (0..=m)
                    .map(|z| self.stride[z][n] as u128 + self.exact[z][n] as u128)
                    .collect()
            })
            .collect();
        CountTable {
            m,
            kmax: k as u64,
            counts,
        }
    }
}

fn descend(acc: &mut Accum, q: u64, w: &[u64], k: usize, n: usize, z: usize, c: u64) {
    let budget = (k - n) as i64;
    let Some((&wj, rest)) = w.split_first() else {
        acc.emit(q, n, z, c);
        return;
    };
    let mut cj = reduce(c as i64 - budget * wj as i64, q);
    if rest.is_empty() {
        // Innermost free coordinate: inline the loop with incremental residue.
        for a in -budget..=budget {
            acc.emit(q, n + a.unsigned_abs() as usize, z + (a == 0) as usize, cj);
            cj += wj;
            if cj >= q {
                cj -= q;
            }
        }
    } else {
        for a in -budget..=budget {
            descend(acc, q, rest, k, n + a.unsigned_abs() as usize, z + (a == 0) as usize, cj);
            cj += wj;
            if cj >= q {
                cj -= q;
            }
        }
    }
}

/// N(k, ℓ): lattice points of one-norm k with exactly ℓ zero coordinates,
/// for 0 ≤ k ≤ kmax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub m: usize,
    pub kmax: u64,
    /// `counts[k][ℓ]`
    pub counts: Vec<Vec<u128>>,
}

impl CountTable {
    pub fn get(&self, k: u64, zeros: usize) -> u128 {
        self.counts
            .get(k as usize)
            .and_then(|row| row.get(zeros))
            .copied()
            .unwrap_or(0)
    }

    /// Number of lattice points of one-norm k.
    pub fn norm_count(&self, k: u64) -> u128 {
        self.counts.get(k as usize).map_or(0, |r| r.iter().sum())
    }

    pub fn truncated(&self, kmax: u64) -> CountTable {
        let kmax = kmax.min(self.kmax);
        CountTable {
            m: self.m,
            kmax,
            counts: self.counts[..=kmax as usize].to_vec(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,zeros,count\n");
        for (k, row) in self.counts.iter().enumerate() {
            for (z, c) in row.iter().enumerate() {
                out.push_str(&format!("{k},{z},{c}\n"));
            }
        }
        out
    }
}

fn common_tables(a: &CongruenceLattice, b: &CongruenceLattice, kmax: u64) -> Result<(CountTable, CountTable)> {
    Ok((a.count_table(kmax)?, b.count_table(kmax)?))
}

/// Equal numbers of lattice points of each one-norm k ≤ kmax
/// (`None` uses the larger default bound of the two lattices).
pub fn is_onenorm_isospectral(
    a: &CongruenceLattice,
    b: &CongruenceLattice,
    kmax: Option<u64>,
) -> Result<bool> {
    let kmax = kmax.unwrap_or_else(|| a.default_kmax().max(b.default_kmax()));
    let (ta, tb) = common_tables(a, b, kmax)?;
    Ok((0..=kmax).all(|k| ta.norm_count(k) == tb.norm_count(k)))
}

/// Equal counts for every (one-norm, zero count) pair with one-norm ≤ kmax.
pub fn is_onenorm_star_isospectral(
    a: &CongruenceLattice,
    b: &CongruenceLattice,
    kmax: Option<u64>,
) -> Result<bool> {
    if a.rank() != b.rank() {
        return Ok(false);
    }
    let kmax = kmax.unwrap_or_else(|| a.default_kmax().max(b.default_kmax()));
    let (ta, tb) = common_tables(a, b, kmax)?;
    Ok(ta.counts == tb.counts)
}
