//! Laplace spectra of lens spaces from Γ-invariant dimensions
//! dim V_π^Γ = Σ_{η ∈ ℒ} m_π(η), the sum of weight multiplicities over the
//! congruence lattice.

use std::collections::{BTreeMap, HashMap};

use parking_lot::Mutex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, inv_mod, reduce};
use crate::error::{Error, Result};
use crate::lattice::{lattice_of, CountTable};
use crate::lens::LensSpace;
use crate::weights::{
    casimir_eigenvalue, class_representative, dominant_rep, ghat_tau, multiplicity_table, HighestWeight,
    KHighestWeight, Weight,
};

/// Which route computed a Γ-invariant dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimRoute {
    /// Λ = kε₁: closed-form multiplicities C(r+m−2, m−2).
    SymmetricClosedForm,
    /// Λ = kε₁ + Λ_p, p < m: multiplicity constant on (one-norm, zeros) classes.
    NormZeroClasses,
    /// Any Λ: lattice points bucketed by Weyl orbit.
    WeylOrbits,
}

/// Computes dim V_Λ^Γ for one lens space, caching lattice data across Λ.
pub struct InvariantCounter {
    lens: LensSpace,
    table: Mutex<Option<CountTable>>,
    orbits: Mutex<Option<(u64, HashMap<Weight, u128>)>>,
}

impl InvariantCounter {
    pub fn new(lens: &LensSpace) -> Self {
        InvariantCounter {
            lens: lens.clone(),
            table: Mutex::new(None),
            orbits: Mutex::new(None),
        }
    }

    pub fn lens(&self) -> &LensSpace {
        &self.lens
    }

    fn counts(&self, norm: u64) -> Result<CountTable> {
        let mut guard = self.table.lock();
        if let Some(t) = guard.as_ref() {
            if t.kmax >= norm {
                return Ok(t.clone());
            }
        }
        // grow geometrically to amortise repeated requests
        let want = guard.as_ref().map_or(norm, |t| norm.max(2 * t.kmax));
        let t = lattice_of(&self.lens).count_table(want)?;
        *guard = Some(t.clone());
        Ok(t)
    }

    fn orbit_counts(&self, norm: u64) -> HashMap<Weight, u128> {
        let mut guard = self.orbits.lock();
        if let Some((k, map)) = guard.as_ref() {
            if *k >= norm {
                return map.clone();
            }
        }
        let want = guard.as_ref().map_or(norm, |(k, _)| norm.max(2 * k));
        let map = orbit_buckets(&self.lens, want);
        *guard = Some((want, map.clone()));
        map
    }

    pub fn route_for(lambda: &HighestWeight) -> DimRoute {
        let c = lambda.coords();
        if c[1..].iter().all(|&x| x == 0) {
            return DimRoute::SymmetricClosedForm;
        }
        let ones = c[1..].iter().take_while(|&&x| x == 1).count();
        if c[1 + ones..].iter().all(|&x| x == 0) && ones + 1 < c.len() {
            DimRoute::NormZeroClasses
        } else {
            DimRoute::WeylOrbits
        }
    }

    pub fn dim(&self, lambda: &HighestWeight) -> Result<u128> {
        self.dim_via(lambda, Self::route_for(lambda))
    }

    /// Forces a route; `NormZeroClasses` and `SymmetricClosedForm` are only
    /// valid for the highest weights that [`Self::route_for`] assigns them.
    pub fn dim_via(&self, lambda: &HighestWeight, route: DimRoute) -> Result<u128> {
        let m = self.lens.rank();
        if lambda.rank() != m {
            return Err(Error::RankMismatch(lambda.rank(), m));
        }
        let norm = lambda.one_norm();
        let overflow = || Error::Overflow("invariant dimension");
        match route {
            DimRoute::SymmetricClosedForm => {
                let t = self.counts(norm)?;
                let mut total: u128 = 0;
                for r in 0..=norm / 2 {
                    let term = binomial(r + m as u64 - 2, m as u64 - 2)
                        .checked_mul(t.norm_count(norm - 2 * r))
                        .ok_or_else(overflow)?;
                    total = total.checked_add(term).ok_or_else(overflow)?;
                }
                Ok(total)
            }
            DimRoute::NormZeroClasses => {
                let t = self.counts(norm)?;
                let table = multiplicity_table(lambda)?;
                let mut total: u128 = 0;
                for r in 0..=norm / 2 {
                    let n = norm - 2 * r;
                    for zeros in 0..=m {
                        let count = t.get(n, zeros);
                        if count == 0 {
                            continue;
                        }
                        let rep = class_representative(m, n, zeros)?;
                        let term = table.multiplicity(&rep).checked_mul(count).ok_or_else(overflow)?;
                        total = total.checked_add(term).ok_or_else(overflow)?;
                    }
                }
                Ok(total)
            }
            DimRoute::WeylOrbits => {
                let buckets = self.orbit_counts(norm);
                let table = multiplicity_table(lambda)?;
                let mut total: u128 = 0;
                for (w, mult) in table.dominant_weights() {
                    if let Some(&c) = buckets.get(w) {
                        total = total
                            .checked_add(mult.checked_mul(c).ok_or_else(overflow)?)
                            .ok_or_else(overflow)?;
                    }
                }
                Ok(total)
            }
        }
    }
}

/// Lattice points of one-norm ≤ kmax grouped by dominant Weyl-orbit representative.
fn orbit_buckets(lens: &LensSpace, kmax: u64) -> HashMap<Weight, u128> {
    let q = lens.q();
    let s = lens.params();
    let m = s.len();
    let last = s[m - 1];
    let neg_inv = (q - inv_mod(last, q).expect("lens parameters are units")) % q;
    let mut out: HashMap<Weight, u128> = HashMap::new();
    let mut cur = vec![0i64; m];
    #[allow(clippy::too_many_arguments)]
    fn go(
        pos: usize,
        budget: i64,
        c: u64,
        q: u64,
        s: &[u64],
        neg_inv: u64,
        cur: &mut Vec<i64>,
        out: &mut HashMap<Weight, u128>,
    ) {
        let m = cur.len();
        if pos == m - 1 {
            // last coordinate ≡ c (mod q), |a| ≤ budget
            let qi = q as i64;
            let c = c as i64;
            let mut a = c - ((c + budget) / qi) * qi;
            while a <= budget {
                if a >= -budget {
                    cur[pos] = a;
                    *out.entry(dominant_rep(cur)).or_default() += 1;
                }
                a += qi;
            }
            return;
        }
        let w = crate::arith::mul_mod(s[pos], neg_inv, q);
        for a in -budget..=budget {
            cur[pos] = a;
            let c2 = (c + reduce(a * w as i64, q)) % q;
            go(pos + 1, budget - a.abs(), c2, q, s, neg_inv, cur, out);
        }
    }
    go(0, kmax as i64, 0, q, s, neg_inv, &mut cur, &mut out);
    out
}

pub fn dim_invariants(lens: &LensSpace, lambda: &HighestWeight) -> Result<u128> {
    InvariantCounter::new(lens).dim(lambda)
}

/// Eigenvalue/multiplicity list of Δ_p or Δ_τ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub kind: SpectrumKind,
    /// (eigenvalue, multiplicity) sorted by eigenvalue; zero multiplicities omitted.
    pub entries: Vec<(i64, u128)>,
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumKind {
    /// p-forms, truncated at k ≤ bound in each series.
    Forms { p: usize },
    /// General τ, truncated at Casimir eigenvalue ≤ bound.
    Tau { highest_weight: Vec<i64> },
}

impl SpectrumTable {
    fn from_pairs(kind: SpectrumKind, bound: i64, pairs: impl IntoIterator<Item = (i64, u128)>) -> Self {
        let mut merged: BTreeMap<i64, u128> = BTreeMap::new();
        for (l, d) in pairs {
            *merged.entry(l).or_default() += d;
        }
        SpectrumTable {
            kind,
            entries: merged.into_iter().filter(|&(_, d)| d > 0).collect(),
            bound,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,multiplicity\n");
        for (l, d) in &self.entries {
            out.push_str(&format!("{l},{d}\n"));
        }
        out
    }

    pub fn multiplicity(&self, lambda: i64) -> u128 {
        self.entries
            .binary_search_by_key(&lambda, |e| e.0)
            .map_or(0, |i| self.entries[i].1)
    }
}

/// Highest weights whose invariants give the p-spectrum, tagged by series:
/// `(k, series_p, highest weights summed together)`.
fn form_series(m: usize, p: usize, kbound: u64) -> Result<Vec<(u64, Vec<HighestWeight>)>> {
    let mut out = Vec::new();
    for k in 0..=kbound {
        if p == 0 {
            out.push((k, vec![HighestWeight::k_plus_fundamental(m, k, 0, 1)?]));
            continue;
        }
        out.push((k, vec![HighestWeight::k_plus_fundamental(m, k, p, 1)?]));
        if p + 1 < m {
            out.push((k, vec![HighestWeight::k_plus_fundamental(m, k, p + 1, 1)?]));
        } else {
            out.push((
                k,
                vec![
                    HighestWeight::k_plus_fundamental(m, k, m, 1)?,
                    HighestWeight::k_plus_fundamental(m, k, m, -1)?,
                ],
            ));
        }
    }
    Ok(out)
}

/// Maps p to the equivalent degree in 0..m via Poincaré duality p ↔ 2m−1−p.
fn effective_p(m: usize, p: usize) -> Result<usize> {
    if p < m {
        Ok(p)
    } else if p < 2 * m {
        Ok(2 * m - 1 - p)
    } else {
        Err(Error::InvalidP { p, m })
    }
}

fn series_dims(counter: &InvariantCounter, series: &[(u64, Vec<HighestWeight>)]) -> Result<Vec<(i64, u128)>> {
    series
        .par_iter()
        .map(|(_, group)| {
            let mut total = 0u128;
            for h in group {
                total += counter.dim(h)?;
            }
            Ok((casimir_eigenvalue(&group[0]), total))
        })
        .collect()
}

/// Spectrum of the Hodge Laplacian on p-forms; each of the two eigenvalue
/// series is truncated at k ≤ kbound.
pub fn p_spectrum(lens: &LensSpace, p: usize, kbound: u64) -> Result<SpectrumTable> {
    let m = lens.rank();
    if m < 2 {
        return Err(Error::UnsupportedRank(m));
    }
    let pe = effective_p(m, p)?;
    let series = form_series(m, pe, kbound)?;
    let counter = InvariantCounter::new(lens);
    let pairs = series_dims(&counter, &series)?;
    Ok(SpectrumTable::from_pairs(SpectrumKind::Forms { p }, kbound as i64, pairs))
}

pub fn is_p_isospectral(a: &LensSpace, b: &LensSpace, p: usize, kbound: u64) -> Result<bool> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    let m = a.rank();
    let pe = effective_p(m, p)?;
    let series = form_series(m, pe, kbound)?;
    let ca = InvariantCounter::new(a);
    let cb = InvariantCounter::new(b);
    Ok(series_dims(&ca, &series)? == series_dims(&cb, &series)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllPMode {
    /// Lattice ‖·‖*-isospectrality at the complete norm bound.
    Fast,
    /// Additionally compare dim V_{π_{k,p}}^Γ for 1 ≤ p ≤ m−1, k ≤ kbound.
    Certify,
}

/// p-isospectral for every p. In certify mode both routes must agree;
/// a disagreement is reported as an error since it signals a bug.
pub fn is_isospectral_all_p(a: &LensSpace, b: &LensSpace, kbound: u64, mode: AllPMode) -> Result<bool> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    let la = lattice_of(a);
    let lb = lattice_of(b);
    let fast = crate::lattice::is_onenorm_star_isospectral(&la, &lb, None)?;
    if mode == AllPMode::Fast {
        return Ok(fast);
    }
    let rep = representation_all_p(a, b, kbound)?;
    if rep != fast && kbound >= a.q().max(b.q()) * (a.rank() as u64 + 1) {
        return Err(Error::HypothesisViolated(format!(
            "lattice ({fast}) and representation ({rep}) deciders disagree"
        )));
    }
    Ok(fast && rep)
}

/// dim V_{π_{k,p}}^Γ equality for 1 ≤ p ≤ m−1 and k ≤ kbound.
pub fn representation_all_p(a: &LensSpace, b: &LensSpace, kbound: u64) -> Result<bool> {
    let m = a.rank();
    let ca = InvariantCounter::new(a);
    let cb = InvariantCounter::new(b);
    for p in 1..m {
        for k in 0..=kbound {
            let h = HighestWeight::k_plus_fundamental(m, k, p, 1)?;
            if ca.dim(&h)? != cb.dim(&h)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Spectrum of Δ_τ up to Casimir eigenvalue `bound`.
pub fn tau_spectrum(lens: &LensSpace, tau: &KHighestWeight, bound: i64) -> Result<SpectrumTable> {
    if tau.coords().len() + 1 != lens.rank() {
        return Err(Error::RankMismatch(tau.coords().len() + 1, lens.rank()));
    }
    let counter = InvariantCounter::new(lens);
    let weights = ghat_tau(tau, bound);
    let pairs: Vec<(i64, u128)> = weights
        .par_iter()
        .map(|h| Ok((casimir_eigenvalue(h), counter.dim(h)?)))
        .collect::<Result<_>>()?;
    Ok(SpectrumTable::from_pairs(
        SpectrumKind::Tau {
            highest_weight: tau.coords().to_vec(),
        },
        bound,
        pairs,
    ))
}
