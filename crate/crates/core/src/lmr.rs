//! Pairs built from powers of w = rt + 1 modulo q = r²t, the explicit
//! two-parameter family, the duality for q = r², and the sufficiency
//! predicates on exponent tuples.

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, is_prime, pow_mod};
use crate::error::{Error, Result};
use crate::lens::LensSpace;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WPowerSpec {
    pub r: u64,
    pub t: u64,
    pub d: Vec<i64>,
}

impl WPowerSpec {
    pub fn new(r: u64, t: u64, d: Vec<i64>) -> Self {
        WPowerSpec { r, t, d }
    }

    pub fn q(&self) -> u64 {
        self.r * self.r * self.t
    }

    pub fn w(&self) -> u64 {
        self.r * self.t + 1
    }

    /// w^k mod q; w has order dividing r, so negative k wrap mod r.
    pub fn w_pow(&self, k: i64) -> u64 {
        let q = self.q();
        if q == 1 {
            return 0;
        }
        pow_mod(self.w() % q, k.rem_euclid(self.r as i64) as u64, q)
    }

    pub fn is_univalent(&self) -> bool {
        let mut e: Vec<i64> = self.d.iter().map(|x| x.rem_euclid(self.r as i64)).collect();
        e.sort_unstable();
        e.windows(2).all(|w| w[0] != w[1])
    }

    fn validate(&self) -> Result<()> {
        if self.r == 0 || self.t == 0 {
            return Err(Error::InvalidSpec("r and t must be positive".into()));
        }
        if self.d.is_empty() {
            return Err(Error::InvalidSpec("empty exponent tuple".into()));
        }
        self.r
            .checked_mul(self.r)
            .and_then(|x| x.checked_mul(self.t))
            .ok_or_else(|| Error::InvalidSpec("q = r²t overflows".into()))?;
        Ok(())
    }

    /// The same exponents read modulo a divisor c of r (same t).
    pub fn restrict(&self, c: u64) -> WPowerSpec {
        WPowerSpec {
            r: c,
            t: self.t,
            d: self.d.iter().map(|x| x.rem_euclid(c as i64)).collect(),
        }
    }
}

pub(crate) fn wpower_pair_unchecked(spec: &WPowerSpec) -> (LensSpace, LensSpace) {
    let q = spec.q();
    let side = |sign: i64| {
        let s: Vec<u64> = spec.d.iter().map(|&x| spec.w_pow(sign * x)).collect();
        LensSpace::from_units(q, s)
    };
    (side(1), side(-1))
}

/// (L(q; w^{d₀},…), L(q; w^{−d₀},…)); the exponents must be distinct mod r.
pub fn wpower_pair(spec: &WPowerSpec) -> Result<(LensSpace, LensSpace)> {
    spec.validate()?;
    if !spec.is_univalent() {
        return Err(Error::InvalidSpec(format!("exponents {:?} not distinct mod {}", spec.d, spec.r)));
    }
    Ok(wpower_pair_unchecked(spec))
}

/// (L(r²t; 1, 1+rt, 1+3rt), L(r²t; 1, 1−rt, 1−3rt)).
pub fn lmr_family_pair(r: u64, t: u64) -> Result<(LensSpace, LensSpace)> {
    if r <= 1 || r.is_multiple_of(3) {
        return Err(Error::BadR(r));
    }
    if t == 0 {
        return Err(Error::InvalidSpec("t must be positive".into()));
    }
    let q = (r * r * t) as i64;
    let rt = (r * t) as i64;
    Ok((
        LensSpace::new(q as u64, &[1, 1 + rt, 1 + 3 * rt])?,
        LensSpace::new(q as u64, &[1, 1 - rt, 1 - 3 * rt])?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeFordDoyle {
    pub univalent: bool,
    pub reversible: bool,
    pub good: bool,
    pub hereditarily_good: bool,
    pub theorem_applies: bool,
}

fn reversible(spec: &WPowerSpec) -> bool {
    let (a, b) = wpower_pair_unchecked(spec);
    a.is_isometric(&b)
}

fn is_good(spec: &WPowerSpec) -> bool {
    spec.is_univalent() || reversible(spec)
}

/// Predicates on d mod r. Goodness mod a divisor c rebuilds the pair with
/// modulus c²t and the exponents reduced mod c.
pub fn deford_doyle(d: &[i64], r: u64, t: u64) -> Result<DeFordDoyle> {
    let spec = WPowerSpec::new(r, t, d.to_vec());
    spec.validate()?;
    let univalent = spec.is_univalent();
    let reversible = reversible(&spec);
    let good = univalent || reversible;
    let hereditarily_good = divisors(r).into_iter().all(|c| is_good(&spec.restrict(c)));
    Ok(DeFordDoyle {
        univalent,
        reversible,
        good,
        hereditarily_good,
        theorem_applies: hereditarily_good && !reversible,
    })
}

fn prime_square_root(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q && is_prime(r)).then_some(r)
}

/// Duals of a pair over q = r², r prime, whose parameters are all ±1 mod r.
pub fn dual_pair_r2(a: &LensSpace, b: &LensSpace) -> Result<(LensSpace, LensSpace)> {
    if a.q() != b.q() || a.rank() != b.rank() {
        return Err(Error::HypothesisViolated("pair must share q and m".into()));
    }
    let r = prime_square_root(a.q())
        .ok_or_else(|| Error::HypothesisViolated(format!("q = {} is not the square of a prime", a.q())))?;
    for l in [a, b] {
        if !l.in_l0_family() {
            return Err(Error::HypothesisViolated(format!("{l} has parameters equal up to sign")));
        }
        if let Some(&s) = l.params().iter().find(|&&s| s % r != 1 && s % r != r - 1) {
            return Err(Error::HypothesisViolated(format!("parameter {s} of {l} is not ±1 mod {r}")));
        }
    }
    Ok((a.dual()?, b.dual()?))
}
