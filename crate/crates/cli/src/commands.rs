use std::fmt;

use anyhow::Result;
use clap::{Args, ValueEnum};
use isospec::genfun::{f0_closed, f_p_closed, psi, psi_p, q_equal, IntPoly};
use isospec::ikeda::{build_pair_for_p0, enumerate_l0_classes, filtration_level, mainikeda_predict, FiltrationLevel};
use isospec::lmr::{deford_doyle, dual_pair_r2, lmr_family_pair, wpower_pair, WPowerSpec};
use isospec::search::{find_all_star_pairs, rows_to_csv, rows_to_table, verify_pair, SearchOptions, VerifyOptions};
use isospec::spectrum::{is_p_isospectral, p_spectrum, tau_spectrum};
use isospec::weights::KHighestWeight;
use isospec::LensSpace;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::Format;

/// Inconsistent combination of otherwise well-formed arguments.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn emit(text: &str) -> Result<()> {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == ErrorKind::BrokenPipe => std::process::exit(0),
        r => Ok(r?),
    }
}

fn print_json(v: &Value) -> Result<()> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn big(c: &BigInt) -> Value {
    c.to_i64().map(Value::from).unwrap_or_else(|| Value::String(c.to_string()))
}

fn coeffs(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(big).collect())
}

fn parse_list(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| usage(format!("bad integer list `{text}`"))))
        .collect()
}

#[derive(Args)]
pub struct SearchArgs {
    /// Order of the fundamental group (or use --q-min/--q-max).
    #[arg(long, conflicts_with_all = ["q_min", "q_max"])]
    q: Option<u64>,
    #[arg(long, requires = "q_max")]
    q_min: Option<u64>,
    #[arg(long)]
    q_max: Option<u64>,
    /// Rank; the dimension is 2m − 1.
    #[arg(long)]
    m: usize,
    /// One-norm bound for the full lattice comparison (default (m+1)q).
    #[arg(long)]
    kmax: Option<u64>,
    /// One-norm bound for the bucketing key (default min(kmax, 2q)).
    #[arg(long)]
    bucket_bound: Option<u64>,
    /// Skip the generating-function confirmation.
    #[arg(long)]
    no_confirm: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// In table output, show parameters of pairs with no w-power form.
    #[arg(long)]
    raw: bool,
    /// Also report isospectral classes with at least this many members.
    #[arg(long)]
    tuples: Option<usize>,
}

pub fn search(a: SearchArgs) -> Result<()> {
    let range = match (a.q, a.q_min, a.q_max) {
        (Some(q), _, _) => q..=q,
        (None, lo, Some(hi)) => lo.unwrap_or(1)..=hi,
        _ => return Err(usage("give --q or --q-max")),
    };
    if a.m == 0 {
        return Err(usage("--m must be positive"));
    }
    let opts = SearchOptions {
        kmax: a.kmax,
        bucket_bound: a.bucket_bound,
        confirm: !a.no_confirm,
    };
    let mut results = Vec::new();
    for q in range {
        let res = find_all_star_pairs(q, a.m, opts)?;
        for (x, y) in &res.disagreements {
            eprintln!("warning: {x} and {y} agree on lattice counts but not on generating functions");
        }
        results.push(res);
    }
    let min_group = a.tuples.unwrap_or(usize::MAX);
    match a.format {
        Format::Json => {
            let v: Vec<Value> = results
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("serialisable");
                    v["rows"] = serde_json::to_value(r.table_rows()).expect("serialisable");
                    if a.tuples.is_some() {
                        v["groups"] = serde_json::to_value(r.groups.iter().filter(|g| g.len() >= min_group).collect::<Vec<_>>())
                            .expect("serialisable");
                    }
                    v
                })
                .collect();
            print_json(&Value::Array(v))?;
        }
        Format::Csv => {
            let rows: Vec<_> = results.iter().flat_map(|r| r.table_rows()).collect();
            emit(&rows_to_csv(&rows))?;
        }
        Format::Table => {
            let rows: Vec<_> = results.iter().flat_map(|r| r.table_rows()).collect();
            emit(&rows_to_table(&rows, a.raw))?;
            for r in &results {
                for g in r.groups.iter().filter(|g| g.len() >= min_group) {
                    let names: Vec<String> = g.iter().map(|l| l.to_string()).collect();
                    emit(&format!("group of {}: {}\n", g.len(), names.join(" ")))?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Decider {
    Lattice,
    Genfun,
    Spectra,
    Isometry,
    Homotopy,
    All,
}

#[derive(Args)]
pub struct CheckArgs {
    /// First lens space, e.g. `L(49;1,6,15)`.
    a: LensSpace,
    b: LensSpace,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    mode: Vec<Decider>,
    /// Lattice one-norm bound (default (m+1)q).
    #[arg(long)]
    kmax: Option<u64>,
    /// Compare p-spectra for p ≤ this.
    #[arg(long, default_value_t = 2)]
    max_p: usize,
    /// Degree bound for the spectra.
    #[arg(long, default_value_t = 50)]
    kbound: u64,
}

pub fn check(a: CheckArgs) -> Result<()> {
    let on = |d: Decider| a.mode.contains(&d) || a.mode.contains(&Decider::All);
    let opts = VerifyOptions {
        lattice: on(Decider::Lattice),
        generating_function: on(Decider::Genfun),
        spectra: on(Decider::Spectra).then_some((a.max_p, a.kbound)),
        isometry: on(Decider::Isometry),
        homotopy: on(Decider::Homotopy),
        kmax: a.kmax,
    };
    let rec = verify_pair(&a.a, &a.b, &opts)?;
    print_json(&serde_json::to_value(rec)?)
}

#[derive(Args)]
pub struct SpectrumArgs {
    lens: LensSpace,
    /// Degree of the forms.
    #[arg(long, default_value_t = 0, conflicts_with = "tau")]
    p: usize,
    /// Highest weight of an SO(2m−1)-type instead of p-forms, e.g. `3,1`.
    #[arg(long)]
    tau: Option<String>,
    /// Degree bound k (forms) or Casimir bound (τ).
    #[arg(long, default_value_t = 20)]
    bound: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

pub fn spectrum(a: SpectrumArgs) -> Result<()> {
    let table = match &a.tau {
        Some(t) => tau_spectrum(&a.lens, &KHighestWeight::new(parse_list(t)?)?, a.bound as i64)?,
        None => p_spectrum(&a.lens, a.p, a.bound)?,
    };
    match a.format {
        Format::Csv => emit(&table.to_csv())?,
        Format::Table => {
            for (l, d) in &table.entries {
                emit(&format!("{l:>8} {d}\n"))?;
            }
        }
        Format::Json => print_json(&serde_json::to_value(&table)?)?,
    }
    Ok(())
}

#[derive(Args)]
pub struct GenfunArgs {
    lens: LensSpace,
    /// Decide equality of Q(w, z) with this lens space.
    #[arg(long)]
    compare: Option<LensSpace>,
    /// Coefficients a_k of Ψ (q prime).
    #[arg(long)]
    psi: bool,
    /// Coefficients of Ψᵖ (q prime, q − 1 = 2m + 4).
    #[arg(long)]
    psi_p: Option<usize>,
    /// Number of series coefficients to print for F⁰ and Fᵖ, p ≤ --max-p.
    #[arg(long)]
    series: Option<usize>,
    #[arg(long, default_value_t = 0)]
    max_p: usize,
}

pub fn genfun(a: GenfunArgs) -> Result<()> {
    let mut out = json!({ "lens": a.lens.to_string() });
    if let Some(other) = &a.compare {
        out["compare"] = Value::String(other.to_string());
        out["q_equal"] = Value::Bool(q_equal(&a.lens, other)?);
    }
    if a.psi {
        let p = psi(&a.lens)?;
        out["psi"] = json!({ "h": p.h, "a": p.a_all().iter().map(big).collect::<Vec<_>>() });
    }
    if let Some(p) = a.psi_p {
        out["psi_p"] = json!({ "p": p, "coefficients": coeffs(&psi_p(&a.lens, p)?) });
    }
    if let Some(n) = a.series {
        let f0 = f0_closed(&a.lens)?;
        out["f0"] = json!({
            "num": coeffs(&f0.num),
            "den": coeffs(&f0.den),
            "series": f0.integer_series(n)?.iter().map(big).collect::<Vec<_>>(),
        });
        let mut fp = Vec::new();
        for p in 1..=a.max_p {
            let f = f_p_closed(&a.lens, p)?;
            fp.push(json!({ "p": p, "series": f.integer_series(n)?.iter().map(big).collect::<Vec<_>>() }));
        }
        out["fp"] = Value::Array(fp);
    }
    print_json(&out)
}

#[derive(Args)]
pub struct FamilyArgs {
    /// The pair (L(r²t;1,1+rt,1+3rt), L(r²t;1,1−rt,1−3rt)).
    #[arg(long, num_args = 2, value_names = ["R", "T"], conflicts_with = "wpower")]
    rt: Option<Vec<u64>>,
    /// A w-power pair: q r t d0,d1,...
    #[arg(long, num_args = 4, value_names = ["Q", "R", "T", "D"])]
    wpower: Option<Vec<String>>,
    /// Also build the dual pair (q = r², r prime).
    #[arg(long)]
    dual: bool,
    /// Run the lattice and generating-function deciders on the pair.
    #[arg(long)]
    verify: bool,
    /// Lattice one-norm bound for the pair (default (m+1)q).
    #[arg(long)]
    kmax: Option<u64>,
    /// Lattice one-norm bound for the dual pair, whose counts grow too fast
    /// for the default.
    #[arg(long, default_value_t = 12)]
    dual_kmax: u64,
}

pub fn family(a: FamilyArgs) -> Result<()> {
    let mut out = json!({});
    let (x, y) = if let Some(rt) = &a.rt {
        out["r"] = json!(rt[0]);
        out["t"] = json!(rt[1]);
        lmr_family_pair(rt[0], rt[1])?
    } else if let Some(w) = &a.wpower {
        let num = |s: &str| s.parse::<u64>().map_err(|_| usage(format!("bad integer `{s}`")));
        let (q, r, t) = (num(&w[0])?, num(&w[1])?, num(&w[2])?);
        let spec = WPowerSpec::new(r, t, parse_list(&w[3])?);
        if r.checked_mul(r).and_then(|x| x.checked_mul(t)) != Some(q) {
            return Err(usage(format!("q = {q} is not r²t = {r}²·{t}")));
        }
        out["spec"] = serde_json::to_value(&spec)?;
        out["deford_doyle"] = serde_json::to_value(deford_doyle(&spec.d, r, t)?)?;
        wpower_pair(&spec)?
    } else {
        return Err(usage("give --rt or --wpower"));
    };
    out["pair"] = json!([x.to_string(), y.to_string()]);
    out["isometric"] = Value::Bool(x.is_isometric(&y));
    let mut pairs = vec![(x.clone(), y.clone())];
    if a.dual {
        let (dx, dy) = dual_pair_r2(&x, &y)?;
        out["dual"] = json!([dx.to_string(), dy.to_string()]);
        pairs.push((dx, dy));
    }
    if a.verify {
        let recs = pairs
            .iter()
            .enumerate()
            .map(|(i, (p, q))| {
                let opts = VerifyOptions {
                    spectra: None,
                    homotopy: false,
                    kmax: if i == 0 { a.kmax } else { Some(a.dual_kmax) },
                    ..VerifyOptions::all()
                };
                verify_pair(p, q, &opts).map(|r| serde_json::to_value(r).expect("serialisable"))
            })
            .collect::<isospec::Result<Vec<_>>>()?;
        out["verification"] = Value::Array(recs);
    }
    print_json(&out)
}

#[derive(Args)]
pub struct IkedaArgs {
    /// List the classes for this prime q with their filtration levels.
    #[arg(long, conflicts_with = "build_p0")]
    q: Option<u64>,
    /// Rank (default (q − 5)/2).
    #[arg(long)]
    m: Option<usize>,
    /// Build the pair isospectral exactly up to this degree.
    #[arg(long)]
    build_p0: Option<u64>,
    /// Compare predictions with direct spectrum computations.
    #[arg(long)]
    verify: bool,
    /// Degree bound for the direct checks.
    #[arg(long, default_value_t = 30)]
    kbound: u64,
}

fn level_json(l: FiltrationLevel) -> Value {
    match l {
        FiltrationLevel::Finite(p) => json!(p),
        FiltrationLevel::Infinite => json!("infinite"),
    }
}

fn report(a: &LensSpace, b: &LensSpace, verify: bool, kbound: u64) -> Result<Value> {
    let pred = mainikeda_predict(a, b)?;
    let mut v = json!({
        "pair": [a.to_string(), b.to_string()],
        "p_iso_up_to": level_json(pred.p_iso_up_to),
        "breaks_at": pred.breaks_at,
    });
    if verify {
        let top = match (pred.p_iso_up_to, pred.breaks_at) {
            (_, Some(p)) => p,
            (FiltrationLevel::Finite(p), None) => p + 1,
            (FiltrationLevel::Infinite, None) => 1,
        };
        let checks = (0..=top as usize)
            .map(|p| is_p_isospectral(a, b, p, kbound))
            .collect::<isospec::Result<Vec<_>>>()?;
        v["verified_p_isospectral"] = json!(checks);
    }
    Ok(v)
}

pub fn ikeda(a: IkedaArgs) -> Result<()> {
    if let Some(p0) = a.build_p0 {
        let (x, y) = build_pair_for_p0(p0)?;
        return print_json(&report(&x, &y, a.verify, a.kbound)?);
    }
    let q = a.q.ok_or_else(|| usage("give --q or --build-p0"))?;
    if q == 2 || !isospec::arith::is_prime(q) {
        return Err(isospec::Error::NotPrime(q).into());
    }
    let m = match a.m {
        Some(m) => m,
        None if q >= 7 => ((q - 5) / 2) as usize,
        None => return Err(usage("give --m for q < 7")),
    };
    let classes = enumerate_l0_classes(q, m)?;
    let listed: Vec<Value> = classes
        .iter()
        .map(|l| {
            let level = filtration_level(l).ok().map(level_json).unwrap_or(Value::Null);
            json!({ "lens": l.to_string(), "level": level })
        })
        .collect();
    let mut out = json!({ "q": q, "m": m, "classes": listed });
    if a.verify {
        let mut reports = Vec::new();
        for i in 0..classes.len() {
            for j in i + 1..classes.len() {
                reports.push(report(&classes[i], &classes[j], true, a.kbound)?);
            }
        }
        out["pairs"] = Value::Array(reports);
    }
    print_json(&out)
}
