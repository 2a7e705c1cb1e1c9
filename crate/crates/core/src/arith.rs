//! Small number-theory helpers over `u64` moduli.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least nonnegative residue of a signed integer.
pub fn reduce(a: i64, q: u64) -> u64 {
    let q = q as i64;
    (((a % q) + q) % q) as u64
}

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, q);
        }
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `q`, if it exists.
pub fn inv_mod(a: u64, q: u64) -> Option<u64> {
    if q == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(q as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(reduce_i128(e.x, q))
}

fn reduce_i128(a: i128, q: u64) -> u64 {
    let q = q as i128;
    (((a % q) + q) % q) as u64
}

/// Units of ℤ/q in increasing order. For q = 1 this is `[0]`.
pub fn units(q: u64) -> Vec<u64> {
    if q == 1 {
        return vec![0];
    }
    (1..q).filter(|&t| gcd(t, q) == 1).collect()
}

pub fn euler_phi(q: u64) -> u64 {
    factorize(q)
        .iter()
        .fold(q, |acc, &(p, _)| acc / p * (p - 1))
}

/// Prime factorization as (prime, exponent) pairs, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors, increasing.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let f = factorize(n);
    f.len() == 1 && f[0].1 == 1
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Ramanujan sum c_e(i): the trace of ζ_e^i from ℚ(ζ_e) down to ℚ.
pub fn ramanujan_sum(e: u64, i: u64) -> i64 {
    let g = gcd(i % e, e);
    let g = if g == 0 { e } else { g };
    let n = e / g;
    mobius(n) * (euler_phi(e) / euler_phi(n)) as i64
}
