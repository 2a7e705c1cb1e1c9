//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//!
//! Two criteria are checked literally and fail for mathematical reasons:
//! 6 claims that no two of three q = 13 classes are homotopy equivalent, but
//! L(13;1,2,3,5) and L(13;1,2,3,6) satisfy s₁⋯s_m ≡ t^m s′₁⋯s′_m with t = 2
//! (checked as 6b); 7 states closed forms for the first Ψ coefficients that
//! hold with the dual rank h in place of m (checked as 7b). The run fails if
//! any other criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use isospec::arith::binomial;
use isospec::genfun::{f0_closed, f_p_closed, psi, q_equal};
use isospec::ikeda::{build_pair_for_p0, enumerate_l0_classes};
use isospec::lattice::{is_onenorm_isospectral, is_onenorm_star_isospectral, lattice_of};
use isospec::lmr::{deford_doyle, dual_pair_r2, WPowerSpec};
use isospec::search::{annotate_wpower, find_all_star_pairs, SearchOptions};
use isospec::spectrum::{is_p_isospectral, tau_spectrum, InvariantCounter};
use isospec::weights::{multiplicity_table, weight_multiplicity, HighestWeight, KHighestWeight};
use isospec::LensSpace;
use num_bigint::BigInt;

type Outcome = Result<(), String>;

fn l(q: u64, s: &[i64]) -> LensSpace {
    LensSpace::new(q, s).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

/// Expected rows (q, r, t, d, dagger) with q ≤ 200 for m = 3.
const EXPECTED_M3_ROWS: &[(u64, u64, u64, [i64; 3], bool)] = &[
    (49, 7, 1, [0, 1, 3], false),
    (64, 8, 1, [0, 1, 3], false),
    (98, 7, 2, [0, 1, 3], false),
    (100, 10, 1, [0, 1, 3], false),
    (100, 10, 1, [0, 1, 4], false),
    (121, 11, 1, [0, 1, 3], false),
    (121, 11, 1, [0, 1, 4], false),
    (121, 11, 1, [0, 1, 5], false),
    (121, 11, 1, [0, 2, 5], false),
    (121, 11, 1, [0, 2, 6], false),
    (128, 8, 2, [0, 1, 3], false),
    (147, 7, 3, [0, 1, 3], false),
    (169, 13, 1, [0, 1, 3], false),
    (169, 13, 1, [0, 1, 4], false),
    (169, 13, 1, [0, 1, 5], false),
    (169, 13, 1, [0, 1, 6], false),
    (169, 13, 1, [0, 2, 5], false),
    (169, 13, 1, [0, 2, 6], false),
    (169, 13, 1, [0, 2, 7], false),
    (169, 13, 1, [0, 3, 7], false),
    (192, 8, 3, [0, 1, 3], false),
    (196, 14, 1, [0, 1, 3], false),
    (196, 14, 1, [0, 1, 4], false),
    (196, 14, 1, [0, 1, 5], false),
    (196, 14, 1, [0, 1, 6], false),
    (196, 14, 1, [0, 2, 5], false),
    (196, 14, 1, [0, 2, 6], false),
    (196, 7, 4, [0, 1, 3], true),
    (196, 14, 1, [0, 3, 8], false),
    (200, 10, 2, [0, 1, 3], false),
    (200, 10, 2, [0, 1, 4], false),
];

type Row = (u64, Option<u64>, Option<u64>, Option<Vec<i64>>, bool);

fn search_rows(q: u64, m: usize) -> Result<Vec<Row>, String> {
    let res = find_all_star_pairs(q, m, SearchOptions::default()).map_err(e)?;
    if !res.disagreements.is_empty() {
        return Err(format!("q={q}: deciders disagree on {:?}", res.disagreements));
    }
    Ok(res.table_rows().into_iter().map(|r| (r.q, r.r, r.t, r.d, r.dagger)).collect())
}

fn multiset(rows: Vec<Row>) -> BTreeMap<Row, usize> {
    let mut out = BTreeMap::new();
    for r in rows {
        *out.entry(r).or_default() += 1;
    }
    out
}

fn search_m3_rows() -> Outcome {
    let mut got = Vec::new();
    for q in 1..=200 {
        got.extend(search_rows(q, 3)?);
    }
    let want: Vec<Row> = EXPECTED_M3_ROWS
        .iter()
        .map(|&(q, r, t, d, dag)| (q, Some(r), Some(t), Some(d.to_vec()), dag))
        .collect();
    let (got, want) = (multiset(got), multiset(want));
    ensure(got == want, || {
        let extra: Vec<_> = got.keys().filter(|k| !want.contains_key(*k)).collect();
        let missing: Vec<_> = want.keys().filter(|k| !got.contains_key(*k)).collect();
        format!("extra rows {extra:?}, missing rows {missing:?}")
    })
}

fn search_m4_q81() -> Outcome {
    let rows = search_rows(81, 4)?;
    let want: Vec<Row> = [[0, 1, 2, 4], [0, 1, 2, 5], [0, 1, 3, 5]]
        .iter()
        .map(|d| (81, Some(9), Some(1), Some(d.to_vec()), false))
        .collect();
    ensure(multiset(rows.clone()) == multiset(want), || format!("rows {rows:?}"))
}

fn search_m5_q72() -> Outcome {
    let res = find_all_star_pairs(72, 5, SearchOptions::default()).map_err(e)?;
    let (x, y) = (l(72, &[1, 5, 7, 17, 35]), l(72, &[1, 5, 7, 19, 35]));
    let hit = res
        .pairs
        .iter()
        .find(|p| (p.a.is_isometric(&x) && p.b.is_isometric(&y)) || (p.a.is_isometric(&y) && p.b.is_isometric(&x)))
        .ok_or_else(|| format!("pair not found among {} pairs", res.pairs.len()))?;
    ensure(hit.annotations.is_empty() && annotate_wpower(&x, &y).is_none(), || {
        format!("unexpected w-power form {:?}", hit.annotations)
    })
}

fn basic_pair() -> Outcome {
    let (a, b) = (l(49, &[1, 6, 15]), l(49, &[1, 6, 20]));
    let star = is_onenorm_star_isospectral(&lattice_of(&a), &lattice_of(&b), Some(4 * 49)).map_err(e)?;
    let qe = q_equal(&a, &b).map_err(e)?;
    let spectra = (0..=2)
        .map(|p| is_p_isospectral(&a, &b, p, 50))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    let iso = a.is_isometric(&b);
    ensure(star && qe && spectra.iter().all(|&x| x) && !iso, || {
        format!("star={star} q_equal={qe} spectra={spectra:?} isometric={iso}")
    })
}

fn ikeda_11() -> Outcome {
    let (a, b) = (l(11, &[1, 2, 3]), l(11, &[1, 2, 4]));
    let lattice = is_onenorm_isospectral(&lattice_of(&a), &lattice_of(&b), None).map_err(e)?;
    let f0 = f0_closed(&a).map_err(e)? == f0_closed(&b).map_err(e)?;
    let psi_eq = psi(&a).map_err(e)? == psi(&b).map_err(e)?;
    let p1 = is_p_isospectral(&a, &b, 1, 30).map_err(e)?;
    let homotopy = a.is_homotopy_equivalent(&b);
    ensure(lattice && f0 && psi_eq && !p1 && homotopy, || {
        format!("lattice={lattice} F0={f0} psi={psi_eq} 1-iso={p1} homotopy={homotopy}")
    })
}

fn ikeda_13() -> Outcome {
    let ls = [l(13, &[1, 2, 3, 4]), l(13, &[1, 2, 3, 5]), l(13, &[1, 2, 3, 6])];
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (&ls[i], &ls[j]);
            let iso0 = is_onenorm_isospectral(&lattice_of(a), &lattice_of(b), None).map_err(e)?
                && f0_closed(a).map_err(e)? == f0_closed(b).map_err(e)?;
            ensure(iso0, || format!("{a} and {b} not 0-isospectral"))?;
            ensure(!a.is_homotopy_equivalent(b), || format!("{a} and {b} homotopy equivalent"))?;
            ensure(!a.is_isometric(b), || format!("{a} and {b} isometric"))?;
        }
    }
    Ok(())
}

fn ikeda_13_corrected() -> Outcome {
    let ls = [l(13, &[1, 2, 3, 4]), l(13, &[1, 2, 3, 5]), l(13, &[1, 2, 3, 6])];
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (&ls[i], &ls[j]);
            ensure(is_onenorm_isospectral(&lattice_of(a), &lattice_of(b), None).map_err(e)?, || {
                format!("{a} and {b} not 0-isospectral")
            })?;
        }
    }
    // independent check of the homotopy criterion with explicit witnesses
    let prod = |x: &LensSpace| x.params().iter().product::<u64>() % 13;
    let he = |x: &LensSpace, y: &LensSpace| {
        (1..13u64).any(|t| {
            let r = t.pow(4) % 13 * prod(y) % 13;
            prod(x) == r || prod(x) == (13 - r) % 13
        })
    };
    ensure(!he(&ls[0], &ls[1]) && !he(&ls[0], &ls[2]) && he(&ls[1], &ls[2]), || "witness scan disagrees".into())?;
    ensure(prod(&ls[1]) == 2u64.pow(4) * prod(&ls[2]) % 13, || "t = 2 is not a witness".into())?;
    ensure(
        !ls[0].is_homotopy_equivalent(&ls[1]) && !ls[0].is_homotopy_equivalent(&ls[2]) && ls[1].is_homotopy_equivalent(&ls[2]),
        || "library homotopy test disagrees with the witness scan".into(),
    )
}

/// `with_h`: use the dual rank h = (q−1)/2 − m in place of m.
fn psi_coefficients(with_h: bool) -> Outcome {
    let mut bad = Vec::new();
    for q in [11u64, 13, 17] {
        let m = ((q - 5) / 2) as usize;
        for lens in enumerate_l0_classes(q, m).map_err(e)? {
            let ps = psi(&lens).map_err(e)?;
            let h = ps.h;
            let n = if with_h { h as i64 } else { m as i64 };
            let a = ps.a_all();
            let want = [q as i64 - 1, -2 * n, n * (q as i64 - 2 * n + 1)];
            for (k, w) in want.iter().enumerate() {
                if a[k] != BigInt::from(*w) {
                    bad.push(format!("{lens}: a{k}={} expected {w}", a[k]));
                }
            }
            if (0..=2 * h).any(|k| a[k] != a[2 * h - k]) {
                bad.push(format!("{lens}: not palindromic"));
            }
        }
    }
    ensure(bad.is_empty(), || bad.iter().take(4).cloned().collect::<Vec<_>>().join("; "))
}

fn symmetric_multiplicities() -> Outcome {
    for m in 2..=5usize {
        for k in 0..=10u64 {
            let lambda = HighestWeight::k_plus_fundamental(m, k, 0, 1).map_err(e)?;
            let table = multiplicity_table(&lambda).map_err(e)?;
            for (eta, mult) in table.dominant_weights() {
                let norm: u64 = eta.iter().map(|x| x.unsigned_abs()).sum();
                let r = (k - norm) / 2;
                let want = binomial(r + m as u64 - 2, m as u64 - 2);
                ensure(norm <= k && (k - norm).is_multiple_of(2) && *mult == want, || {
                    format!("m={m} k={k} eta={eta:?}: {mult} vs {want}")
                })?;
            }
            // every weight of the right parity inside the ball occurs
            let count = table.dominant_weights().len();
            let expected = (0..=k / 2).map(|r| dominant_shapes(m, k - 2 * r)).sum::<usize>();
            ensure(count == expected, || format!("m={m} k={k}: {count} dominant weights, expected {expected}"))?;
        }
    }
    Ok(())
}

/// Dominant weights of one-norm n in rank m: partitions of n into at most m
/// parts, doubled when the last part is nonzero (sign of the last entry).
fn dominant_shapes(m: usize, n: u64) -> usize {
    fn parts(n: u64, max: u64, slots: usize, acc: &mut Vec<u64>, out: &mut usize) {
        if slots == 0 {
            if n == 0 {
                *out += if acc.last().is_some_and(|&x| x > 0) { 2 } else { 1 };
            }
            return;
        }
        for x in (0..=max.min(n)).rev() {
            acc.push(x);
            parts(n - x, x, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = 0;
    parts(n, n, m, &mut Vec::new(), &mut out);
    out
}

fn regularity() -> Outcome {
    for m in 2..=4usize {
        for p in 0..m {
            for k in 0..=(8 - p as u64) {
                let lambda = HighestWeight::k_plus_fundamental(m, k, p, 1).map_err(e)?;
                let table = multiplicity_table(&lambda).map_err(e)?;
                let mut classes: BTreeMap<(u64, usize), u128> = BTreeMap::new();
                for (eta, mult) in table.dominant_weights() {
                    let norm: u64 = eta.iter().map(|x| x.unsigned_abs()).sum();
                    let zeros = eta.iter().filter(|&&x| x == 0).count();
                    let prev = *classes.entry((norm, zeros)).or_insert(*mult);
                    ensure(prev == *mult, || format!("{lambda:?}: class ({norm},{zeros}) has {prev} and {mult}"))?;
                    let mut flipped = eta.clone();
                    flipped[m - 1] = -flipped[m - 1];
                    let fm = weight_multiplicity(&lambda, &flipped).map_err(e)?;
                    ensure(fm == *mult, || format!("{lambda:?}: {eta:?} has {mult}, {flipped:?} has {fm}"))?;
                }
            }
        }
    }
    Ok(())
}

fn series_vs_representations() -> Outcome {
    let lenses = [
        l(11, &[1, 2, 3]),
        l(11, &[1, 2, 4]),
        l(49, &[1, 6, 15]),
        l(49, &[1, 6, 20]),
        l(13, &[1, 2, 3, 5]),
    ];
    for lens in &lenses {
        let m = lens.rank();
        let c = InvariantCounter::new(lens);
        let f0 = f0_closed(lens).map_err(e)?.integer_series(16).map_err(e)?;
        for (k, v) in f0.iter().enumerate().skip(1) {
            let d = c.dim(&HighestWeight::k_plus_fundamental(m, k as u64, 0, 1).map_err(e)?).map_err(e)?;
            ensure(*v == BigInt::from(d), || format!("{lens} F0 k={k}: {v} vs {d}"))?;
        }
        for p in 0..=2usize {
            let fp = f_p_closed(lens, p).map_err(e)?.integer_series(16).map_err(e)?;
            for (k, v) in fp.iter().enumerate() {
                let signs: &[i64] = if p + 1 == m { &[1, -1] } else { &[1] };
                let mut d = 0u128;
                for &sg in signs {
                    d += c.dim(&HighestWeight::k_plus_fundamental(m, k as u64, p + 1, sg).map_err(e)?).map_err(e)?;
                }
                ensure(*v == BigInt::from(d), || format!("{lens} F^{p} k={k}: {v} vs {d}"))?;
            }
        }
    }
    Ok(())
}

fn deford_doyle_claims() -> Outcome {
    let d = [0i64, 1, 3];
    for t in [1u64, 2] {
        for r in 1..=12u64 {
            let dd = deford_doyle(&d, r, t).map_err(e)?;
            ensure(dd.univalent == (r >= 4), || format!("univalent r={r} t={t}"))?;
            ensure(dd.reversible == [1, 2, 4, 5].contains(&r), || format!("reversible r={r} t={t}"))?;
            ensure(dd.theorem_applies == [7, 8, 10, 11].contains(&r), || format!("applies r={r} t={t}"))?;
            if dd.theorem_applies {
                let (a, b) = isospec::lmr::wpower_pair(&WPowerSpec::new(r, t, d.to_vec())).map_err(e)?;
                let star = is_onenorm_star_isospectral(&lattice_of(&a), &lattice_of(&b), None).map_err(e)?;
                ensure(star && !a.is_isometric(&b), || format!("r={r} t={t}: star={star}"))?;
            }
        }
    }
    Ok(())
}

fn dual_of_basic_pair() -> Outcome {
    let (a, b) = dual_pair_r2(&l(49, &[1, 6, 15]), &l(49, &[1, 6, 20])).map_err(e)?;
    ensure(a.dimension() == 35, || format!("dimension {}", a.dimension()))?;
    let ta = lattice_of(&a).count_table(12).map_err(e)?;
    let tb = lattice_of(&b).count_table(12).map_err(e)?;
    ensure(ta == tb, || "count tables differ below one-norm 12".into())
}

fn tau_breaking() -> Outcome {
    let (a, b) = (l(49, &[1, 6, 15]), l(49, &[1, 6, 20]));
    let mut broken = Vec::new();
    for b1 in 3..=4i64 {
        for b2 in 0..=3i64 {
            let tau = KHighestWeight::new(vec![b1, b2]).map_err(e)?;
            let sa = tau_spectrum(&a, &tau, 200).map_err(e)?;
            let sb = tau_spectrum(&b, &tau, 200).map_err(e)?;
            if sa.entries != sb.entries {
                broken.push((b1, b2));
            }
        }
    }
    ensure(!broken.is_empty(), || "every τ-spectrum agreed".into())
}

fn ikeda_p0_pipeline() -> Outcome {
    let (a, b) = build_pair_for_p0(1).map_err(e)?;
    let v = (0..=2)
        .map(|p| is_p_isospectral(&a, &b, p, 20))
        .collect::<Result<Vec<_>, _>>()
        .map_err(e)?;
    ensure(v == [true, true, false], || format!("{a} vs {b}: {v:?}"))
}

fn main() {
    type Criterion = (&'static str, &'static str, fn() -> Outcome);
    let criteria: &[Criterion] = &[
        ("1", "search m=3, q<=200 reproduces the expected rows", search_m3_rows),
        ("2", "search m=4, q=81 finds exactly the three expected pairs", search_m4_q81),
        ("3", "search m=5, q=72 finds the pair without w-power form", search_m5_q72),
        ("4", "basic pair certified by lattice, generating function and spectra", basic_pair),
        ("5", "q=11 pair: 0-isospectral three ways, not 1-isospectral, homotopic", ikeda_11),
        ("6", "q=13 classes pairwise 0-isospectral and not homotopy equivalent", ikeda_13),
        ("6b", "q=13: only L(13;1,2,3,4) is homotopy-inequivalent to the others", ikeda_13_corrected),
        ("7", "Psi coefficients a0=q-1, a1=-2m, a2=m(q-2m+1), palindromic", || psi_coefficients(false)),
        ("7b", "Psi coefficients with the dual rank h in place of m", || psi_coefficients(true)),
        ("8", "multiplicities of k*e1 equal C(r+m-2, m-2)", symmetric_multiplicities),
        ("9", "multiplicities constant on (one-norm, zeros) classes", regularity),
        ("10", "generating-function series equal invariant dimensions", series_vs_representations),
        ("11", "exponent-tuple predicates for d=(0,1,3)", deford_doyle_claims),
        ("12", "dual of the basic pair: equal counts up to one-norm 12", dual_of_basic_pair),
        ("13", "some tau with 4>=b1>=3>=b2>=0 separates the basic pair", tau_breaking),
        ("14", "constructed p0=1 pair is 0,1- but not 2-isospectral", ikeda_p0_pipeline),
    ];
    // Failures analysed and explained in the project notes; anything else failing is a regression.
    let known_failures = ["6", "7"];
    let mut unexpected = Vec::new();
    for (id, what, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(()) => println!("criterion {id:>3}: PASS  {what} ({secs:.1}s)"),
            Err(why) => {
                let tag = if known_failures.contains(id) { " [known]" } else { "" };
                println!("criterion {id:>3}: FAIL{tag}  {what} ({secs:.1}s): {why}");
                if !known_failures.contains(id) {
                    unexpected.push(*id);
                }
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
