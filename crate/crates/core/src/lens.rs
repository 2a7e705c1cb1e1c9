//! Lens spaces L(q; s₁,…,s_m), their isometry normal form, homotopy type and
//! the dual lens space built from the complementary coprime residues.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, gcd, mul_mod, pow_mod, reduce, units};
use crate::error::{Error, Result};

/// The quotient of S^{2m-1} by the cyclic group generated by the block
/// rotation through angles 2πs_j/q.
///
/// Parameters are stored as least nonnegative residues mod q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLens", into = "RawLens")]
pub struct LensSpace {
    q: u64,
    s: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawLens {
    q: u64,
    s: Vec<i64>,
}

impl TryFrom<RawLens> for LensSpace {
    type Error = Error;
    fn try_from(raw: RawLens) -> Result<Self> {
        LensSpace::new(raw.q, &raw.s)
    }
}

impl From<LensSpace> for RawLens {
    fn from(l: LensSpace) -> Self {
        RawLens {
            q: l.q,
            s: l.s.iter().map(|&x| x as i64).collect(),
        }
    }
}

impl LensSpace {
    pub fn new(q: u64, s: &[i64]) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroModulus);
        }
        if s.is_empty() {
            return Err(Error::EmptyParameters);
        }
        let mut params = Vec::with_capacity(s.len());
        for &x in s {
            let r = reduce(x, q);
            if gcd(r, q) != 1 {
                return Err(Error::NonCoprimeParameter { q, s: x });
            }
            params.push(r);
        }
        Ok(LensSpace { q, s: params })
    }

    /// Builds from residues already known to be units mod q.
    pub(crate) fn from_units(q: u64, s: Vec<u64>) -> Self {
        debug_assert!(s.iter().all(|&x| x < q.max(1) && gcd(x, q) == 1));
        LensSpace { q, s }
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

    /// Dimension 2m − 1 of the manifold.
    pub fn dimension(&self) -> usize {
        2 * self.s.len() - 1
    }

    /// Parameter reduced to 0..=q/2 (the rotation angle up to sign).
    fn sign_reduced(&self, x: u64) -> u64 {
        x.min((self.q - x) % self.q)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canonical_of(self.q, &self.s)
    }

    pub fn is_isometric(&self, other: &LensSpace) -> bool {
        self.q == other.q
            && self.rank() == other.rank()
            && self.canonical_form() == other.canonical_form()
    }

    /// Homotopy equivalence: s₁⋯s_m ≡ ±t^m s′₁⋯s′_m (mod q) for some unit t.
    pub fn is_homotopy_equivalent(&self, other: &LensSpace) -> bool {
        if self.q != other.q || self.rank() != other.rank() {
            return false;
        }
        let q = self.q;
        if q <= 2 {
            return true;
        }
        let prod = |l: &LensSpace| l.s.iter().fold(1u64, |acc, &x| mul_mod(acc, x, q));
        let a = prod(self);
        let b = prod(other);
        let m = self.rank() as u64;
        units(q).into_iter().any(|t| {
            let rhs = mul_mod(pow_mod(t, m, q), b, q);
            a == rhs || a == (q - rhs) % q
        })
    }

    /// Membership in the family where s_i ≢ ±s_j for all i ≠ j.
    pub fn in_l0_family(&self) -> bool {
        let mut seen: Vec<u64> = self.s.iter().map(|&x| self.sign_reduced(x)).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// The lens space whose parameters complete ±s to a system of
    /// representatives of the units mod q.
    pub fn dual(&self) -> Result<LensSpace> {
        if !self.in_l0_family() {
            return Err(Error::NotInL0);
        }
        let q = self.q;
        let phi = euler_phi(q);
        if q <= 2 || 2 * self.rank() as u64 >= phi {
            return Err(Error::DualEmpty);
        }
        let taken: Vec<u64> = self.s.iter().map(|&x| self.sign_reduced(x)).collect();
        let rest: Vec<u64> = (1..=q / 2)
            .filter(|&r| gcd(r, q) == 1 && !taken.contains(&r))
            .collect();
        Ok(LensSpace::from_units(q, rest))
    }

    /// The same space with parameters replaced by their canonical representative.
    pub fn canonical(&self) -> LensSpace {
        let cf = self.canonical_form();
        LensSpace::from_units(cf.q, cf.params)
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({};", self.q)?;
        for (i, x) in self.s.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for LensSpace {
    type Err = Error;

    /// Accepts `L(q;s1,...,sm)`; whitespace is ignored and negative
    /// parameters are reduced mod q.
    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(text.to_string());
        let inner = compact
            .strip_prefix("L(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (q, rest) = inner.split_once(';').ok_or_else(bad)?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        let s = rest
            .split(',')
            .map(|x| x.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        LensSpace::new(q, &s)
    }
}

/// Lexicographically minimal sorted, sign-reduced parameter tuple over all
/// unit rescalings; equal forms characterise isometric lens spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub q: u64,
    pub params: Vec<u64>,
}

pub(crate) fn canonical_of(q: u64, s: &[u64]) -> CanonicalForm {
    let mut best: Option<Vec<u64>> = None;
    let mut buf = vec![0u64; s.len()];
    for t in units(q) {
        for (b, &x) in buf.iter_mut().zip(s) {
            let y = if q == 1 { 0 } else { mul_mod(t, x, q) };
            *b = y.min((q - y) % q);
        }
        buf.sort_unstable();
        if best.as_ref().is_none_or(|b| buf < *b) {
            best = Some(buf.clone());
        }
    }
    CanonicalForm {
        q,
        params: best.unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(q: u64, s: &[i64]) -> LensSpace {
        LensSpace::new(q, s).unwrap()
    }

    #[test]
    fn construction_and_validation() {
        let basic = l(49, &[1, 6, 15]);
        assert_eq!(basic.dimension(), 5);
        let sphere = l(1, &[0, 0, 0]);
        assert_eq!(sphere.params(), &[0, 0, 0]);
        assert_eq!(
            LensSpace::new(49, &[1, 7, 15]),
            Err(Error::NonCoprimeParameter { q: 49, s: 7 })
        );
        assert_eq!(LensSpace::new(11, &[]), Err(Error::EmptyParameters));
        assert_eq!(l(11, &[1, -2, -3]).params(), &[1, 9, 8]);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(l(11, &[2, 4, 6]).canonical_form(), l(11, &[1, 2, 3]).canonical_form());
        assert_eq!(l(11, &[1, 9, 8]).canonical_form(), l(11, &[1, 2, 3]).canonical_form());
        // brute force over all 42 units by hand
        let s = [1u64, 6, 15];
        let mut best: Option<Vec<u64>> = None;
        for t in 1..49u64 {
            if t % 7 == 0 {
                continue;
            }
            let mut v: Vec<u64> = s
                .iter()
                .map(|&x| {
                    let y = t * x % 49;
                    y.min(49 - y)
                })
                .collect();
            v.sort();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        assert_eq!(l(49, &[1, 6, 15]).canonical_form().params, best.unwrap());
    }

    #[test]
    fn isometry_and_homotopy() {
        let a = l(49, &[1, 6, 15]);
        let b = l(49, &[1, 6, 20]);
        assert!(!a.is_isometric(&b));
        assert!(a.is_isometric(&a));
        assert!(l(11, &[1, 2, 3]).is_isometric(&l(11, &[2, 4, 6])));
        assert!(l(11, &[1, 2, 3]).is_homotopy_equivalent(&l(11, &[1, 2, 4])));
        assert!(!l(13, &[1, 2, 3, 4]).is_homotopy_equivalent(&l(13, &[1, 2, 3, 5])));
        assert!(a.is_homotopy_equivalent(&a));
    }

    #[test]
    fn l0_membership() {
        assert!(l(11, &[1, 2, 3]).in_l0_family());
        assert!(!l(5, &[1, 4]).in_l0_family());
        assert!(l(49, &[1, 6, 15]).in_l0_family());
    }

    #[test]
    fn duals() {
        assert_eq!(l(11, &[1, 2, 3]).dual().unwrap(), l(11, &[4, 5]));
        let d = l(72, &[1, 5, 7, 17, 35]).dual().unwrap();
        assert!(d.is_isometric(&l(72, &[1, 5, 7, 11, 19, 25, 35])));
        let d49 = l(49, &[1, 6, 15]).dual().unwrap();
        assert_eq!(d49.rank(), 18);
        assert_eq!(d49.dimension(), 35);
        assert_eq!(l(5, &[1]).dual().unwrap(), l(5, &[2]));
        assert_eq!(l(5, &[1, 2]).dual(), Err(Error::DualEmpty));
        assert_eq!(l(5, &[1, 4]).dual(), Err(Error::NotInL0));
    }

    #[test]
    fn text_and_json_forms() {
        let a: LensSpace = "L(49; 1, 6, 15)".parse().unwrap();
        assert_eq!(a, l(49, &[1, 6, 15]));
        assert_eq!(a.to_string(), "L(49;1,6,15)");
        assert!("L(49;1,7)".parse::<LensSpace>().is_err());
        assert!("M(49;1)".parse::<LensSpace>().is_err());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"q":49,"s":[1,6,15]}"#);
        let back: LensSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<LensSpace>(r#"{"q":49,"s":[7]}"#).is_err());
    }

    #[test]
    fn tiny_moduli() {
        let p2 = l(2, &[1, 1]);
        assert!(p2.is_isometric(&l(2, &[1, 1])));
        assert!(p2.is_homotopy_equivalent(&p2));
        assert!(!p2.in_l0_family());
        let s = l(1, &[0]);
        assert!(s.is_isometric(&s));
    }
}
