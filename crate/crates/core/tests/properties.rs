use std::collections::BTreeSet;

use isospec::arith::{euler_phi, gcd, units};
use isospec::genfun::cyclotomic::CyclotomicNumber;
use isospec::genfun::{char_poly_factor, exterior_character, f0_closed, q_equal, IkedaNumerators};
use isospec::lattice::lattice_of;
use isospec::spectrum::{dim_invariants, is_isospectral_all_p, p_spectrum, AllPMode};
use isospec::weights::{casimir_eigenvalue, multiplicity_table, weight_multiplicity, weyl_dimension_u128, HighestWeight};
use isospec::LensSpace;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn lens_strategy(max_q: u64, max_m: usize) -> impl Strategy<Value = LensSpace> {
    (2..=max_q, 1..=max_m, prop::collection::vec(any::<u32>(), max_m)).prop_map(|(q, m, seeds)| {
        let u = units(q);
        let s: Vec<i64> = seeds[..m].iter().map(|x| u[*x as usize % u.len()] as i64).collect();
        LensSpace::new(q, &s).unwrap()
    })
}

/// `n` lens spaces sharing q and m.
fn same_shape(max_q: u64, max_m: usize, n: usize) -> impl Strategy<Value = Vec<LensSpace>> {
    (3..=max_q, 1..=max_m, prop::collection::vec(any::<u32>(), max_m * n)).prop_map(move |(q, m, seeds)| {
        let u = units(q);
        seeds
            .chunks(max_m)
            .map(|c| {
                let s: Vec<i64> = c[..m].iter().map(|x| u[*x as usize % u.len()] as i64).collect();
                LensSpace::new(q, &s).unwrap()
            })
            .collect()
    })
}

fn l0_strategy(max_q: u64, max_m: usize) -> impl Strategy<Value = LensSpace> {
    (5..=max_q, 1..=max_m, any::<u64>()).prop_filter_map("needs room for a dual", |(q, m, seed)| {
        let reps: Vec<u64> = (1..=q / 2).filter(|&r| gcd(r, q) == 1).collect();
        if 2 * m as u64 >= euler_phi(q) {
            return None;
        }
        // pick m distinct sign-reduced residues by a seeded shuffle
        let mut pool = reps.clone();
        let mut x = seed;
        let mut s = Vec::new();
        for _ in 0..m {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let i = (x >> 33) as usize % pool.len();
            s.push(pool.remove(i) as i64);
        }
        Some(LensSpace::new(q, &s).unwrap())
    })
}

/// Applies a unit rescaling, sign flips and a rotation of the parameters.
fn disguise(lens: &LensSpace, t_seed: u32, signs: u32, rot: usize) -> LensSpace {
    let q = lens.q();
    let u = units(q);
    let t = u[t_seed as usize % u.len()];
    let mut s: Vec<i64> = lens
        .params()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let v = ((t as u128 * x as u128) % q as u128) as i64;
            if signs >> i & 1 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    let n = s.len();
    s.rotate_left(rot % n);
    LensSpace::new(q, &s).unwrap()
}

fn brute_counts(lens: &LensSpace, kmax: i64) -> Vec<Vec<u128>> {
    let m = lens.rank();
    let q = lens.q() as i64;
    let s: Vec<i64> = lens.params().iter().map(|&x| x as i64).collect();
    let mut out = vec![vec![0u128; m + 1]; kmax as usize + 1];
    let side = (2 * kmax + 1) as usize;
    for code in 0..side.pow(m as u32) {
        let mut c = code;
        let mut a = vec![0i64; m];
        for x in a.iter_mut() {
            *x = (c % side) as i64 - kmax;
            c /= side;
        }
        let norm: i64 = a.iter().map(|x| x.abs()).sum();
        let dot: i64 = a.iter().zip(&s).map(|(x, y)| x * y).sum();
        if norm <= kmax && dot.rem_euclid(q) == 0 {
            out[norm as usize][a.iter().filter(|&&x| x == 0).count()] += 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_an_isometry_invariant(l in lens_strategy(60, 4), t in any::<u32>(), sg in any::<u32>(), rot in 0usize..4) {
        let d = disguise(&l, t, sg, rot);
        prop_assert_eq!(l.canonical_form(), d.canonical_form());
        prop_assert!(l.is_isometric(&d) && d.is_isometric(&l));
        prop_assert!(l.is_homotopy_equivalent(&d));
    }

    #[test]
    fn isometry_implies_homotopy(a in lens_strategy(30, 3), b in lens_strategy(30, 3)) {
        if a.is_isometric(&b) {
            prop_assert!(a.is_homotopy_equivalent(&b));
        }
    }

    #[test]
    fn duals_fill_the_units(l in l0_strategy(60, 4), t in any::<u32>()) {
        let d = l.dual().unwrap();
        prop_assert!(d.in_l0_family());
        prop_assert_eq!(2 * (l.rank() + d.rank()) as u64, euler_phi(l.q()));
        let scaled = disguise(&l, t, 0, 0);
        prop_assert!(scaled.dual().unwrap().is_isometric(&d));
    }

    #[test]
    fn counts_are_isometry_invariant(l in lens_strategy(40, 3), t in any::<u32>(), sg in any::<u32>(), rot in 0usize..3) {
        let d = disguise(&l, t, sg, rot);
        let kmax = 15;
        prop_assert_eq!(lattice_of(&l).count_table(kmax).unwrap(), lattice_of(&d).count_table(kmax).unwrap());
    }

    #[test]
    fn counts_match_cube_brute_force(l in lens_strategy(50, 3), kmax in 0i64..=12) {
        let table = lattice_of(&l).count_table(kmax as u64).unwrap();
        prop_assert_eq!(table.counts, brute_counts(&l, kmax));
    }

    #[test]
    fn nonzero_norms_come_in_pairs(l in lens_strategy(60, 4)) {
        let table = lattice_of(&l).count_table(20).unwrap();
        for k in 1..=20 {
            prop_assert_eq!(table.norm_count(k) % 2, 0);
        }
    }

    #[test]
    fn membership_is_periodic(l in lens_strategy(60, 4), a in prop::collection::vec(-30i64..30, 4), j in 0usize..4) {
        let lat = lattice_of(&l);
        let m = l.rank();
        let a = &a[..m];
        let mut b = a.to_vec();
        b[j % m] += l.q() as i64;
        prop_assert_eq!(lat.contains(a), lat.contains(&b));
    }

    #[test]
    fn cyclotomic_ring_axioms(q in 1u64..30, e in prop::collection::vec(-40i64..40, 6), c in -5i64..5) {
        let x = |i: usize| &CyclotomicNumber::xi_pow(q, e[i]) + &CyclotomicNumber::from_int(q, c);
        let (a, b, d) = (x(0), &x(1) - &CyclotomicNumber::xi_pow(q, e[3]), &x(2) * &CyclotomicNumber::xi_pow(q, e[4]));
        prop_assert_eq!(&(&a * &b) * &d, &a * &(&b * &d));
        prop_assert_eq!(&a * &(&b + &d), &(&a * &b) + &(&a * &d));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(CyclotomicNumber::xi_pow(q, e[5]).pow(q as u32), CyclotomicNumber::from_int(q, 1));
    }

    #[test]
    fn characteristic_polynomials_are_palindromic(l in lens_strategy(25, 3), li in 0u64..25) {
        // eigenvalues come in inverse pairs, so det(z − γ) = z^{2m} det(1/z − γ)
        let c = char_poly_factor(&l, li % l.q());
        prop_assert_eq!(c.coeffs.len(), 2 * l.rank() + 1);
        for i in 0..c.coeffs.len() {
            prop_assert_eq!(&c.coeffs[i], &c.coeffs[c.coeffs.len() - 1 - i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn f0_series_are_nonnegative_integers(l in lens_strategy(30, 3)) {
        let s = f0_closed(&l).unwrap().integer_series(12).unwrap();
        prop_assert!(s.iter().all(|c| !c.is_negative()));
    }

    #[test]
    fn q_equality_is_an_isometry_invariant(l in lens_strategy(30, 3), t in any::<u32>(), sg in any::<u32>()) {
        let d = disguise(&l, t, sg, 1);
        prop_assert!(q_equal(&l, &l).unwrap());
        prop_assert!(q_equal(&l, &d).unwrap() && q_equal(&d, &l).unwrap());
    }

    #[test]
    fn q_equality_is_symmetric_and_transitive(v in same_shape(16, 3, 3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let qs = |x: &LensSpace, y: &LensSpace| q_equal(x, y).unwrap();
        prop_assert_eq!(qs(a, b), qs(b, a));
        if qs(a, b) && qs(b, c) {
            prop_assert!(qs(a, c));
        }
    }

    #[test]
    fn quotient_spectra_are_dominated_by_the_sphere(l in lens_strategy(20, 3), p in 0usize..3) {
        prop_assume!(l.rank() >= 2);
        let sphere = LensSpace::new(1, &vec![0; l.rank()]).unwrap();
        let full = p_spectrum(&sphere, p, 8).unwrap();
        for (ev, mult) in p_spectrum(&l, p, 8).unwrap().entries {
            prop_assert!(mult <= full.multiplicity(ev), "eigenvalue {}", ev);
        }
    }

    #[test]
    fn lattice_and_representation_deciders_agree(v in same_shape(16, 3, 2)) {
        let (a, b) = (&v[0], &v[1]);
        prop_assume!(a.rank() >= 2);
        let fast = is_isospectral_all_p(a, b, 12, AllPMode::Fast).unwrap();
        let cert = is_isospectral_all_p(a, b, 12, AllPMode::Certify).unwrap();
        prop_assert_eq!(fast, cert);
    }
}

/// Orbit of a weight under permutations and even sign changes.
fn d_orbit(eta: &[i64]) -> BTreeSet<Vec<i64>> {
    let m = eta.len();
    let mut out = BTreeSet::new();
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        for signs in 0u32..(1 << m) {
            if signs.count_ones() % 2 == 0 {
                let w: Vec<i64> = (0..m).map(|i| if signs >> i & 1 == 1 { -eta[perm[i]] } else { eta[perm[i]] }).collect();
                out.insert(w);
            }
        }
        // next permutation
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..m).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    out
}

fn small_highest_weights() -> Vec<HighestWeight> {
    let mut out = Vec::new();
    for m in 2..=4usize {
        for k in 0..=4u64 {
            for p in 0..=m {
                for sg in [1i64, -1] {
                    if sg < 0 && p < m {
                        continue;
                    }
                    out.push(HighestWeight::k_plus_fundamental(m, k, p, sg).unwrap());
                }
            }
        }
    }
    out.push(HighestWeight::new(vec![3, 2, 1]).unwrap());
    out.push(HighestWeight::new(vec![2, 2, -1]).unwrap());
    out.push(HighestWeight::new(vec![4, 1, 1, 0]).unwrap());
    out
}

#[test]
fn multiplicities_sum_to_weyl_dimension() {
    for lambda in small_highest_weights() {
        let table = multiplicity_table(&lambda).unwrap();
        let total: u128 = table.dominant_weights().iter().map(|(eta, m)| m * d_orbit(eta).len() as u128).sum();
        assert_eq!(total, weyl_dimension_u128(&lambda), "{lambda:?}");
    }
}

#[test]
fn multiplicities_are_weyl_invariant() {
    for lambda in small_highest_weights() {
        let table = multiplicity_table(&lambda).unwrap();
        let last_zero = *lambda.coords().last().unwrap() == 0;
        for (eta, mult) in table.dominant_weights() {
            for w in d_orbit(eta) {
                assert_eq!(weight_multiplicity(&lambda, &w).unwrap(), *mult, "{lambda:?} {w:?}");
            }
            if last_zero {
                let mut odd = eta.clone();
                odd[0] = -odd[0];
                assert_eq!(weight_multiplicity(&lambda, &odd).unwrap(), *mult, "{lambda:?} {odd:?}");
            }
        }
    }
}

#[test]
fn consecutive_form_eigenvalue_sets_are_disjoint() {
    for m in 2..=6usize {
        for p in 1..m {
            let e = |p: usize, sg: i64| -> BTreeSet<i64> {
                (0..60u64)
                    .map(|k| casimir_eigenvalue(&HighestWeight::k_plus_fundamental(m, k, p, sg).unwrap()))
                    .collect()
            };
            let next = if p + 1 == m { e(m, 1).union(&e(m, -1)).copied().collect() } else { e(p + 1, 1) };
            assert!(e(p, 1).is_disjoint(&next), "m={m} p={p}");
        }
    }
}

#[test]
fn sphere_invariants_are_full_dimensions() {
    for m in 1..=4usize {
        let sphere = LensSpace::new(1, &vec![0; m]).unwrap();
        for lambda in small_highest_weights().into_iter().filter(|h| h.rank() == m) {
            assert_eq!(dim_invariants(&sphere, &lambda).unwrap(), weyl_dimension_u128(&lambda), "{lambda:?}");
        }
    }
}

/// Σ_k (−1)ᵏ F̃ᵏ(z) wᵏ = Σ_γ det(w − γ)/det(z − γ), compared at integer
/// points after clearing the common denominator, using field arithmetic only.
#[test]
fn all_degree_generating_function_identity() {
    for lens in [
        LensSpace::new(5, &[1, 2]).unwrap(),
        LensSpace::new(7, &[1, 2, 3]).unwrap(),
        LensSpace::new(9, &[1, 2]).unwrap(),
        LensSpace::new(8, &[1, 3, 3]).unwrap(),
    ] {
        let q = lens.q();
        let m = lens.rank();
        let nums = IkedaNumerators::compute(&lens).unwrap();
        let den = isospec::genfun::cyclotomic::CycPoly::from_int_poly(q, &nums.den);
        for (w0, z0) in [(2i64, 3i64), (-1, 5), (3, -2)] {
            let lhs: BigInt = (0..=2 * m)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    nums.nums[k].eval(&BigInt::from(z0)) * BigInt::from(w0).pow(k as u32) * sign
                })
                .sum();
            let mut rhs = CyclotomicNumber::zero(q);
            let eval = |p: &isospec::genfun::cyclotomic::CycPoly, x: i64| {
                p.coeffs.iter().rev().fold(CyclotomicNumber::zero(q), |acc, c| &(&acc * &CyclotomicNumber::from_int(q, x)) + c)
            };
            for li in 0..q {
                let mut quotient = den.clone();
                for &s in lens.params() {
                    let e = (s * li) as i64;
                    quotient = quotient.div_linear(&CyclotomicNumber::xi_pow(q, e)).0;
                    quotient = quotient.div_linear(&CyclotomicNumber::xi_pow(q, -e)).0;
                }
                let det_w = eval(&char_poly_factor(&lens, li), w0);
                rhs = &rhs + &(&det_w * &eval(&quotient, z0));
                // the character path agrees with the determinant expansion
                let via_chars = (0..=2 * m).fold(CyclotomicNumber::zero(q), |acc, k| {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    &acc + &(&exterior_character(&lens, k, li) * &CyclotomicNumber::from_int(q, sign * w0.pow(k as u32)))
                });
                assert_eq!(via_chars, det_w, "{lens} l={li}");
            }
            let rhs = rhs.as_rational().expect("rational");
            assert_eq!(BigRational::from_integer(lhs), rhs, "{lens} w={w0} z={z0}");
        }
    }
}
