//! Dense univariate polynomials over GF(p), little-endian coefficient
//! vectors. Only what modulus selection and inversion need.

use crate::linalg::{Field, PrimeField};

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn sub(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            f.sub(&x, &y)
        })
        .collect();
    trim(&mut out);
    out
}

fn mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(&x, &y));
        }
    }
    trim(&mut out);
    out
}

/// Returns `(quotient, remainder)`; `b` must be nonzero.
fn divrem(f: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), r);
    }
    let inv_lc = f.inverse(&b[db]);
    let mut q = vec![0u64; da - db + 1];
    for i in (db..=da).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        let t = f.mul(&c, &inv_lc);
        q[i - db] = t;
        for j in 0..=db {
            r[i - db + j] = f.sub(&r[i - db + j], &f.mul(&t, &b[j]));
        }
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

pub(crate) fn rem(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    divrem(f, a, b).1
}

/// Monic gcd.
fn gcd(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &mut x);
    x
}

fn make_monic(f: &PrimeField, a: &mut [u64]) {
    if let Some(d) = degree(a) {
        let inv = f.inverse(&a[d]);
        for c in a.iter_mut() {
            *c = f.mul(c, &inv);
        }
    }
}

/// Inverse of `a` modulo `m`, `None` when not coprime.
pub(crate) fn inverse_mod(f: &PrimeField, a: &[u64], m: &[u64]) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(f, a, m);
    let mut t0: Vec<u64> = Vec::new();
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    // r0 is a nonzero constant iff gcd is 1
    if degree(&r0) != Some(0) {
        return None;
    }
    let inv = f.inverse(&r0[0]);
    let mut out: Vec<u64> = t0.iter().map(|c| f.mul(c, &inv)).collect();
    out = rem(f, &out, m);
    Some(out)
}

fn mulmod(f: &PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem(f, &mul(f, a, b), m)
}

fn powmod(f: &PrimeField, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &b, m);
        }
        b = mulmod(f, &b, &b, m);
        e >>= 1;
    }
    rem(f, &acc, m)
}

/// Irreducibility over GF(p): `f` of degree `d` is irreducible iff
/// `gcd(f, X^{p^j} - X) = 1` for every `1 <= j <= d/2`.
pub(crate) fn is_irreducible(f: &PrimeField, poly: &[u64]) -> bool {
    let Some(d) = degree(poly) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    if poly[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 1..=d / 2 {
        xp = powmod(f, &xp, f.p(), poly);
        let g = gcd(f, poly, &sub(f, &xp, &x));
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `d`,
/// ordering candidates by their lower coefficients read as a base-p number
/// with the constant term as least significant digit.
pub(crate) fn smallest_irreducible(f: &PrimeField, d: usize) -> Vec<u64> {
    assert!(d >= 1);
    let p = f.p();
    let mut lower = vec![0u64; d];
    loop {
        if d == 1 || lower[0] != 0 {
            let mut cand = lower.clone();
            cand.push(1);
            if is_irreducible(f, &cand) {
                return cand;
            }
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < d, "no irreducible polynomial found");
        }
    }
}
