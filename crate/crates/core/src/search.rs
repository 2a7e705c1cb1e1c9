//! Exhaustive search for pairs of lens spaces that are p-isospectral for
//! every p, with w-power annotation and a bundled multi-decider check.
//!
//! Classes are bucketed by a hash of their (one-norm, zero-count) table up
//! to a short bound; only bucket-mates are compared to the full bound, and
//! survivors are confirmed by the exact generating-function comparison.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::Result;
use crate::genfun::{q_equal, IkedaNumerators};
use crate::lattice::{lattice_of, CountTable};
use crate::lens::{canonical_of, CanonicalForm, LensSpace};
use crate::lmr::{wpower_pair_unchecked, WPowerSpec};
use crate::spectrum::is_p_isospectral;

/// One representative (s₁ = 1, canonical) per isometry class of L(q; s) with
/// m parameters.
pub fn enumerate_classes(q: u64, m: usize) -> Vec<LensSpace> {
    if q == 0 || m == 0 {
        return Vec::new();
    }
    if q <= 2 {
        return vec![LensSpace::from_units(q, vec![q - 1; m])];
    }
    let reps: Vec<u64> = (1..=q / 2).filter(|&r| gcd(r, q) == 1).collect();
    if m == 1 {
        return vec![LensSpace::from_units(q, vec![1])];
    }
    let found: BTreeSet<Vec<u64>> = (0..reps.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut local = BTreeSet::new();
            let mut chosen = vec![1, reps[first]];
            multisets(&reps, first, m - 2, &mut chosen, &mut |t| {
                local.insert(canonical_of(q, t).params);
            });
            local.into_iter()
        })
        .collect();
    found.into_iter().map(|p| LensSpace::from_units(q, p)).collect()
}

fn multisets(pool: &[u64], start: usize, left: usize, chosen: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if left == 0 {
        f(chosen);
        return;
    }
    for i in start..pool.len() {
        chosen.push(pool[i]);
        multisets(pool, i, left - 1, chosen, f);
        chosen.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Bound for the full (one-norm, zero-count) comparison; None means (m+1)q.
    pub kmax: Option<u64>,
    /// Bound for the bucketing key; None means min(kmax, 2q).
    pub bucket_bound: Option<u64>,
    /// Confirm lattice survivors with the generating-function comparison.
    pub confirm: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            kmax: None,
            bucket_bound: None,
            confirm: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchPair {
    pub a: LensSpace,
    pub b: LensSpace,
    /// Every (r, t) with a w-power form, smallest t first, lexicographically
    /// least exponents for each.
    pub annotations: Vec<WPowerSpec>,
    pub confirmed_by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub q: u64,
    pub r: Option<u64>,
    pub t: Option<u64>,
    pub d: Option<Vec<i64>>,
    /// The row's pair is isometric to the previous row's.
    pub dagger: bool,
    pub a: LensSpace,
    pub b: LensSpace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub q: u64,
    pub m: usize,
    pub kmax: u64,
    pub classes: usize,
    pub pairs: Vec<SearchPair>,
    /// Isospectral classes with at least two members.
    pub groups: Vec<Vec<LensSpace>>,
    /// Pairs passing the lattice check but failing confirmation (should be empty).
    pub disagreements: Vec<(LensSpace, LensSpace)>,
}

fn table_key(t: &CountTable) -> u64 {
    let mut h = DefaultHasher::new();
    t.counts.hash(&mut h);
    h.finish()
}

pub fn find_all_star_pairs(q: u64, m: usize, opts: SearchOptions) -> Result<SearchResult> {
    let kmax = opts.kmax.unwrap_or((m as u64 + 1) * q);
    let kb = opts.bucket_bound.unwrap_or(2 * q).min(kmax);
    let classes = enumerate_classes(q, m);

    let keys: Vec<u64> = classes
        .par_iter()
        .map(|l| lattice_of(l).count_table(kb).map(|t| table_key(&t)))
        .collect::<Result<_>>()?;
    let mut buckets: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.into_iter().enumerate() {
        buckets.entry(k).or_default().push(i);
    }
    let crowded: Vec<Vec<usize>> = buckets.into_values().filter(|v| v.len() > 1).collect();

    let candidates: Vec<(usize, usize)> = crowded
        .par_iter()
        .map(|members| -> Result<Vec<(usize, usize)>> {
            let tables = members
                .iter()
                .map(|&i| lattice_of(&classes[i]).count_table(kmax))
                .collect::<Result<Vec<_>>>()?;
            let mut out = Vec::new();
            for x in 0..members.len() {
                for y in x + 1..members.len() {
                    if tables[x] == tables[y] {
                        out.push((members[x], members[y]));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut numerators: BTreeMap<usize, IkedaNumerators> = BTreeMap::new();
    if opts.confirm {
        let needed: BTreeSet<usize> = candidates.iter().flat_map(|&(a, b)| [a, b]).collect();
        let computed: Vec<(usize, IkedaNumerators)> = needed
            .into_par_iter()
            .map(|i| IkedaNumerators::compute(&classes[i]).map(|n| (i, n)))
            .collect::<Result<_>>()?;
        numerators.extend(computed);
    }

    let mut pairs = Vec::new();
    let mut disagreements = Vec::new();
    for (i, j) in candidates {
        let (a, b) = (classes[i].clone(), classes[j].clone());
        let mut confirmed_by = vec!["lattice".to_string()];
        if opts.confirm {
            if !numerators[&i].same_functions(&numerators[&j]) {
                disagreements.push((a, b));
                continue;
            }
            confirmed_by.push("generating_function".to_string());
        }
        let annotations = annotate_wpower_all(&a, &b);
        pairs.push(SearchPair {
            a,
            b,
            annotations,
            confirmed_by,
        });
    }
    pairs.sort_by(|x, y| (&x.a.params(), &x.b.params()).cmp(&(&y.a.params(), &y.b.params())));
    let groups = group_pairs(&pairs);
    Ok(SearchResult {
        q,
        m,
        kmax,
        classes: classes.len(),
        pairs,
        groups,
        disagreements,
    })
}

/// Connected components of the confirmed-pair graph.
fn group_pairs(pairs: &[SearchPair]) -> Vec<Vec<LensSpace>> {
    let mut comps: Vec<BTreeSet<Vec<u64>>> = Vec::new();
    let q = pairs.first().map(|p| p.a.q()).unwrap_or(0);
    for p in pairs {
        let (x, y) = (p.a.params().to_vec(), p.b.params().to_vec());
        let hits: Vec<usize> = (0..comps.len())
            .filter(|&c| comps[c].contains(&x) || comps[c].contains(&y))
            .collect();
        let mut merged: BTreeSet<Vec<u64>> = [x, y].into_iter().collect();
        for &c in hits.iter().rev() {
            merged.extend(comps.remove(c));
        }
        comps.push(merged);
    }
    let mut out: Vec<Vec<LensSpace>> = comps
        .into_iter()
        .map(|c| c.into_iter().map(|s| LensSpace::from_units(q, s)).collect())
        .collect();
    out.sort_by(|a: &Vec<LensSpace>, b| a[0].params().cmp(b[0].params()));
    out
}

fn unordered(a: &LensSpace, b: &LensSpace) -> (CanonicalForm, CanonicalForm) {
    let (x, y) = (a.canonical_form(), b.canonical_form());
    if x.params <= y.params {
        (x, y)
    } else {
        (y, x)
    }
}

/// All w-power forms of the pair: for each q = r²t (smallest t first), the
/// lexicographically least d = (0, d₁ < … < d_{m−1} < r) reproducing the
/// pair up to isometry and order.
pub fn annotate_wpower_all(a: &LensSpace, b: &LensSpace) -> Vec<WPowerSpec> {
    let q = a.q();
    if q != b.q() || a.rank() != b.rank() {
        return Vec::new();
    }
    let m = a.rank();
    let target = unordered(a, b);
    let mut out = Vec::new();
    for r in (2..).take_while(|r| r * r <= q).collect::<Vec<u64>>().into_iter().rev() {
        if !q.is_multiple_of(r * r) || (r as usize) < m {
            continue;
        }
        let t = q / (r * r);
        let mut found = None;
        let mut d = vec![0i64];
        exponent_tuples(r as i64, m - 1, &mut d, &mut |d| {
            if found.is_some() {
                return;
            }
            let spec = WPowerSpec::new(r, t, d.to_vec());
            let (x, y) = wpower_pair_unchecked(&spec);
            if unordered(&x, &y) == target {
                found = Some(spec);
            }
        });
        out.extend(found);
    }
    out
}

fn exponent_tuples(r: i64, left: usize, d: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if left == 0 {
        f(d);
        return;
    }
    let start = d.last().copied().unwrap_or(0) + 1;
    for x in start..r {
        d.push(x);
        exponent_tuples(r, left - 1, d, f);
        d.pop();
    }
}

/// The form with the smallest t (largest r), which is the one tables list
/// first; None if the pair has no w-power form.
pub fn annotate_wpower(a: &LensSpace, b: &LensSpace) -> Option<WPowerSpec> {
    annotate_wpower_all(a, b).into_iter().next()
}

impl SearchResult {
    /// One row per w-power form; extra forms of the same pair carry a dagger.
    pub fn table_rows(&self) -> Vec<TableRow> {
        let mut rows = Vec::new();
        for p in &self.pairs {
            if p.annotations.is_empty() {
                rows.push(TableRow {
                    q: self.q,
                    r: None,
                    t: None,
                    d: None,
                    dagger: false,
                    a: p.a.clone(),
                    b: p.b.clone(),
                });
            }
            for (i, s) in p.annotations.iter().enumerate() {
                rows.push(TableRow {
                    q: self.q,
                    r: Some(s.r),
                    t: Some(s.t),
                    d: Some(s.d.clone()),
                    dagger: i > 0,
                    a: p.a.clone(),
                    b: p.b.clone(),
                });
            }
        }
        rows
    }
}

pub fn rows_to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("q,r,t,d,dagger,lens_a,lens_b\n");
    for row in rows {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let d = row
            .d
            .as_ref()
            .map(|d| d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{},\"{}\",\"{}\"", row.q, opt(row.r), opt(row.t), d, row.dagger, row.a, row.b);
    }
    out
}

/// Aligned text in the `q r t d₀,…` layout; with `raw`, rows lacking a
/// w-power form also show the parameter tuples.
pub fn rows_to_table(rows: &[TableRow], raw: bool) -> String {
    let mut out = String::from("  q   r   t   d\n");
    for row in rows {
        match (&row.r, &row.t, &row.d) {
            (Some(r), Some(t), Some(d)) => {
                let ds = d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                let dag = if row.dagger { "†" } else { "" };
                let _ = writeln!(out, "{:>3} {:>3} {:>3}{:<1} {}", row.q, r, t, dag, ds);
            }
            _ => {
                let _ = write!(out, "{:>3}   ?   ?", row.q);
                if raw {
                    let _ = write!(out, "  {} {}", row.a, row.b);
                }
                out.push('\n');
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub lattice: bool,
    pub generating_function: bool,
    /// Compare p-spectra for p ≤ max_p up to degree kbound.
    pub spectra: Option<(usize, u64)>,
    pub isometry: bool,
    pub homotopy: bool,
    /// Lattice bound; None means (m+1)q.
    pub kmax: Option<u64>,
}

impl VerifyOptions {
    pub fn all() -> Self {
        VerifyOptions {
            lattice: true,
            generating_function: true,
            spectra: Some((2, 50)),
            isometry: true,
            homotopy: true,
            kmax: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub a: LensSpace,
    pub b: LensSpace,
    /// (one-norm, zero-count) counts agree up to the lattice bound.
    pub lattice_star: Option<bool>,
    /// Same one-norm counts only (equivalent to 0-isospectrality).
    pub lattice_norm: Option<bool>,
    pub generating_function: Option<bool>,
    /// Entry p: p-spectra agree up to the degree bound.
    pub p_spectra: Option<Vec<bool>>,
    pub isometric: Option<bool>,
    pub homotopy_equivalent: Option<bool>,
    pub timings_ms: BTreeMap<String, f64>,
}

pub fn verify_pair(a: &LensSpace, b: &LensSpace, opts: &VerifyOptions) -> Result<VerificationRecord> {
    let mut rec = VerificationRecord {
        a: a.clone(),
        b: b.clone(),
        lattice_star: None,
        lattice_norm: None,
        generating_function: None,
        p_spectra: None,
        isometric: None,
        homotopy_equivalent: None,
        timings_ms: BTreeMap::new(),
    };
    let comparable = a.q() == b.q() && a.rank() == b.rank();
    let mut times = Vec::new();
    let mut rec_time = |name: &str, start: Instant| {
        times.push((name.to_string(), start.elapsed().as_secs_f64() * 1e3));
    };
    if opts.lattice {
        let start = Instant::now();
        if comparable {
            let kmax = opts.kmax.unwrap_or((a.rank() as u64 + 1) * a.q());
            let ta = lattice_of(a).count_table(kmax)?;
            let tb = lattice_of(b).count_table(kmax)?;
            rec.lattice_star = Some(ta == tb);
            rec.lattice_norm = Some((0..=kmax).all(|k| ta.norm_count(k) == tb.norm_count(k)));
        } else {
            rec.lattice_star = Some(false);
            rec.lattice_norm = Some(false);
        }
        rec_time("lattice", start);
    }
    if opts.generating_function {
        let start = Instant::now();
        rec.generating_function = Some(comparable && q_equal(a, b)?);
        rec_time("generating_function", start);
    }
    if let Some((max_p, kbound)) = opts.spectra {
        let start = Instant::now();
        let v = (0..=max_p)
            .map(|p| if comparable { is_p_isospectral(a, b, p, kbound) } else { Ok(false) })
            .collect::<Result<Vec<_>>>()?;
        rec.p_spectra = Some(v);
        rec_time("spectra", start);
    }
    if opts.isometry {
        rec.isometric = Some(a.is_isometric(b));
    }
    if opts.homotopy {
        rec.homotopy_equivalent = Some(comparable && a.is_homotopy_equivalent(b));
    }
    rec.timings_ms = times.into_iter().collect();
    Ok(rec)
}
