//! Exact arithmetic in GF(q^m), q = p^e.
//!
//! The whole tower GF(p) ⊆ GF(q) ⊆ GF(q^l) ⊆ GF(q^m) lives in one
//! representation, GF(p)[X]/(modulus) with `deg modulus = e·m`. Subfield
//! elements are recognised by Frobenius fixed points. Characteristic two
//! uses bit-packed words, odd characteristic one `u64` per coordinate.

mod poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use rand::Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Matrix, PrimeField};

type Limbs = SmallVec<[u64; 2]>;

/// Element of GF(q^m): coordinates over GF(p) in the power basis of the
/// context's modulus. Binary fields pack 64 coordinates per word.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    limbs: Limbs,
}

/// Parameters and precomputed tables for one field tower.
pub struct FieldContext {
    p: u64,
    e: usize,
    m: usize,
    l: usize,
    degree: usize,
    words: usize,
    prime: PrimeField,
    /// Monic modulus, `degree + 1` little-endian coefficients.
    modulus: Vec<u64>,
    /// Binary only: the full modulus packed into words.
    modulus_bits: Vec<u64>,
    /// Image of `X^i` under `x ↦ x^q`, for `i < degree`.
    frob_table: Vec<FieldElement>,
    fq_basis: OnceLock<Vec<FieldElement>>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("m", &self.m)
            .field("l", &self.l)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.e == other.e
            && self.m == other.m
            && self.l == other.l
            && self.modulus == other.modulus
    }
}

impl Eq for FieldContext {}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q = p^e`.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FieldContext {
    /// Builds GF(q^m) with the lexicographically smallest irreducible
    /// modulus of degree `e·m` over GF(p).
    pub fn new(p: u64, e: usize, m: usize, l: usize) -> Result<Arc<Self>> {
        Self::check_params(p, e, m, l)?;
        let modulus = poly::smallest_irreducible(&PrimeField::new(p), e * m);
        Self::build(p, e, m, l, modulus)
    }

    /// As [`FieldContext::new`] with `q` given as a prime power.
    pub fn from_q(q: u64, m: usize, l: usize) -> Result<Arc<Self>> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, e, m, l)
    }

    /// Builds the field from a caller-supplied monic modulus of degree `e·m`.
    pub fn with_modulus(p: u64, e: usize, m: usize, l: usize, modulus: Vec<u64>) -> Result<Arc<Self>> {
        Self::check_params(p, e, m, l)?;
        let mut modulus = modulus;
        poly::trim(&mut modulus);
        if modulus.len() != e * m + 1 || modulus.last() != Some(&1) {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {}",
                e * m
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient not reduced mod p".into()));
        }
        if !poly::is_irreducible(&PrimeField::new(p), &modulus) {
            return Err(Error::ReducibleModulus { p });
        }
        Self::build(p, e, m, l, modulus)
    }

    fn check_params(p: u64, e: usize, m: usize, l: usize) -> Result<()> {
        if !is_prime(p) || p >= (1 << 32) {
            return Err(Error::InvalidField(format!("p = {p} is not a prime below 2^32")));
        }
        if e == 0 || m == 0 || l == 0 {
            return Err(Error::InvalidField("e, m and l must be positive".into()));
        }
        if !m.is_multiple_of(l) {
            return Err(Error::NotADivisor { d: l, m });
        }
        if e * m > 4096 {
            return Err(Error::InvalidField("extension degree e·m above 4096".into()));
        }
        Ok(())
    }

    fn build(p: u64, e: usize, m: usize, l: usize, modulus: Vec<u64>) -> Result<Arc<Self>> {
        let degree = e * m;
        let binary = p == 2;
        let words = if binary { degree.div_ceil(64) } else { degree };
        let modulus_bits = if binary {
            let mut bits = vec![0u64; (degree + 1).div_ceil(64)];
            for (i, &c) in modulus.iter().enumerate() {
                if c == 1 {
                    bits[i / 64] |= 1 << (i % 64);
                }
            }
            bits
        } else {
            Vec::new()
        };
        let mut ctx = FieldContext {
            p,
            e,
            m,
            l,
            degree,
            words,
            prime: PrimeField::new(p),
            modulus,
            modulus_bits,
            frob_table: Vec::new(),
            fq_basis: OnceLock::new(),
        };
        // X^q by e successive p-th powers, then the table of (X^i)^q.
        let mut xq = ctx.generator();
        for _ in 0..e {
            xq = ctx.pow(&xq, p);
        }
        let mut table = Vec::with_capacity(degree);
        let mut acc = ctx.one();
        for _ in 0..degree {
            table.push(acc.clone());
            acc = ctx.mul(&acc, &xq);
        }
        ctx.frob_table = table;
        Ok(Arc::new(ctx))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Degree of the intermediate field GF(q^l) in which moduli live.
    pub fn l(&self) -> usize {
        self.l
    }

    /// `q = p^e`, if it fits in a `u64`.
    pub fn q(&self) -> Option<u64> {
        self.p.checked_pow(self.e as u32)
    }

    /// Number of GF(p)-coordinates, `e·m`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    fn is_binary(&self) -> bool {
        self.p == 2
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            limbs: SmallVec::from_elem(0, self.words),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    /// Embeds an integer through GF(p).
    pub fn scalar(&self, c: u64) -> FieldElement {
        let mut x = self.zero();
        x.limbs[0] = c % self.p;
        x
    }

    /// Class of `X`, a generator of GF(q^m) over GF(p).
    pub fn generator(&self) -> FieldElement {
        if self.degree == 1 {
            // X ≡ -modulus[0]
            return self.scalar((self.p - self.modulus[0]) % self.p);
        }
        let mut coords = vec![0u64; self.degree];
        coords[1] = 1;
        self.from_coords(&coords).expect("valid coordinates")
    }

    /// Element from GF(p) coordinates, shorter inputs being zero-extended.
    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElement> {
        if coords.len() > self.degree {
            return Err(Error::LengthMismatch {
                expected: self.degree,
                got: coords.len(),
            });
        }
        if coords.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse(format!("coordinate not reduced mod {}", self.p)));
        }
        let mut x = self.zero();
        if self.is_binary() {
            for (i, &c) in coords.iter().enumerate() {
                if c == 1 {
                    x.limbs[i / 64] |= 1 << (i % 64);
                }
            }
        } else {
            x.limbs[..coords.len()].copy_from_slice(coords);
        }
        Ok(x)
    }

    pub fn coord(&self, x: &FieldElement, i: usize) -> u64 {
        if self.is_binary() {
            (x.limbs[i / 64] >> (i % 64)) & 1
        } else {
            x.limbs[i]
        }
    }

    /// GF(p) coordinates, length `e·m`.
    pub fn coords(&self, x: &FieldElement) -> Vec<u64> {
        (0..self.degree).map(|i| self.coord(x, i)).collect()
    }

    /// Checks that an element has the shape this context expects.
    pub fn check(&self, x: &FieldElement) -> Result<()> {
        if x.limbs.len() != self.words {
            return Err(Error::ContextMismatch);
        }
        if self.is_binary() {
            let spare = self.words * 64 - self.degree;
            if spare > 0 && x.limbs[self.words - 1] >> (64 - spare) != 0 {
                return Err(Error::ContextMismatch);
            }
        } else if x.limbs.iter().any(|&c| c >= self.p) {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        x.limbs.iter().all(|&w| w == 0)
    }

    fn prime_part(&self, x: &FieldElement) -> Option<u64> {
        if self.is_binary() {
            (x.limbs[0] >> 1 == 0 && x.limbs[1..].iter().all(|&w| w == 0)).then_some(x.limbs[0])
        } else {
            x.limbs[1..].iter().all(|&w| w == 0).then_some(x.limbs[0])
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mut x = self.zero();
        if self.is_binary() {
            for w in x.limbs.iter_mut() {
                *w = rng.gen();
            }
            let spare = self.words * 64 - self.degree;
            if spare > 0 {
                x.limbs[self.words - 1] &= u64::MAX >> spare;
            }
        } else {
            for c in x.limbs.iter_mut() {
                *c = rng.gen_range(0..self.p);
            }
        }
        x
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let limbs = if self.is_binary() {
            x.limbs.iter().zip(&y.limbs).map(|(a, b)| a ^ b).collect()
        } else {
            let p = self.p;
            x.limbs
                .iter()
                .zip(&y.limbs)
                .map(|(a, b)| {
                    let s = a + b;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect()
        };
        FieldElement { limbs }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if self.is_binary() {
            return self.add(x, y);
        }
        let p = self.p;
        let limbs = x
            .limbs
            .iter()
            .zip(&y.limbs)
            .map(|(a, b)| if a >= b { a - b } else { a + p - b })
            .collect();
        FieldElement { limbs }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        if self.is_binary() {
            return x.clone();
        }
        let p = self.p;
        let limbs = x.limbs.iter().map(|&a| if a == 0 { 0 } else { p - a }).collect();
        FieldElement { limbs }
    }

    /// Multiplication by an element of GF(p).
    pub fn scale(&self, x: &FieldElement, c: u64) -> FieldElement {
        let c = c % self.p;
        if self.is_binary() {
            return if c == 0 { self.zero() } else { x.clone() };
        }
        let p = self.p;
        let limbs = x.limbs.iter().map(|&a| a * c % p).collect();
        FieldElement { limbs }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        if let Some(c) = self.prime_part(x) {
            return self.scale(y, c);
        }
        if let Some(c) = self.prime_part(y) {
            return self.scale(x, c);
        }
        if self.is_binary() {
            if self.words == 1 {
                let mut out = self.zero();
                out.limbs[0] = self.mul_bin_word(x.limbs[0], y.limbs[0]);
                out
            } else {
                self.mul_bin_multi(&x.limbs, &y.limbs)
            }
        } else {
            self.mul_odd(&x.limbs, &y.limbs)
        }
    }

    fn mul_bin_word(&self, a: u64, b: u64) -> u64 {
        let d = self.degree;
        let mut prod: u128 = 0;
        let (mut small, big) = if a.count_ones() < b.count_ones() { (a, b) } else { (b, a) };
        while small != 0 {
            let i = small.trailing_zeros();
            prod ^= (big as u128) << i;
            small &= small - 1;
        }
        let full: u128 = (self.modulus_bits[0] as u128)
            | ((*self.modulus_bits.get(1).unwrap_or(&0) as u128) << 64);
        let mut top = 128 - prod.leading_zeros() as usize;
        while top > d {
            let i = top - 1;
            prod ^= full << (i - d);
            top = 128 - prod.leading_zeros() as usize;
        }
        prod as u64
    }

    fn mul_bin_multi(&self, a: &[u64], b: &[u64]) -> FieldElement {
        let d = self.degree;
        let w = self.words;
        let mut prod = vec![0u64; 2 * w + 1];
        for (wi, &word) in a.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                xor_shifted(&mut prod, b, wi * 64 + bit);
            }
        }
        for i in (d..2 * d - 1).rev() {
            if (prod[i / 64] >> (i % 64)) & 1 == 1 {
                xor_shifted(&mut prod, &self.modulus_bits, i - d);
            }
        }
        FieldElement {
            limbs: prod[..w].iter().copied().collect(),
        }
    }

    fn mul_odd(&self, a: &[u64], b: &[u64]) -> FieldElement {
        let d = self.degree;
        let p = self.p;
        // Products are below 2^64, so u128 sums of up to 2^64 terms are exact.
        let mut wide = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                wide[i + j] += (x * y) as u128;
            }
        }
        let p128 = p as u128;
        let mut buf: Vec<u64> = wide.iter().map(|&w| (w % p128) as u64).collect();
        for i in (d..2 * d - 1).rev() {
            let c = buf[i];
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for j in 0..d {
                buf[i - d + j] = (buf[i - d + j] + neg * self.modulus[j]) % p;
            }
        }
        buf.truncate(d);
        FieldElement {
            limbs: buf.into_iter().collect(),
        }
    }

    pub fn square(&self, x: &FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(x) {
            return Err(Error::ZeroInverse);
        }
        if let Some(c) = self.prime_part(x) {
            return Ok(self.scalar(self.prime.inverse(&c)));
        }
        let mut a = self.coords(x);
        poly::trim(&mut a);
        let inv = poly::inverse_mod(&self.prime, &a, &self.modulus).ok_or(Error::ZeroInverse)?;
        self.from_coords(&inv)
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, mut n: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = x.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            n >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, x: &FieldElement, n: &BigUint) -> FieldElement {
        let mut acc = self.one();
        for i in (0..n.bits()).rev() {
            acc = self.square(&acc);
            if n.bit(i) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }

    /// One application of `x ↦ x^q`, via the precomputed table.
    fn frobenius(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        if self.is_binary() {
            for (wi, &word) in x.limbs.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let bit = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let col = &self.frob_table[wi * 64 + bit];
                    for (a, c) in acc.limbs.iter_mut().zip(&col.limbs) {
                        *a ^= c;
                    }
                }
            }
        } else {
            let p = self.p;
            for (i, &c) in x.limbs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (a, t) in acc.limbs.iter_mut().zip(&self.frob_table[i].limbs) {
                    *a = (*a + c * t) % p;
                }
            }
        }
        acc
    }

    /// `x^{q^j}`.
    pub fn frobenius_q(&self, x: &FieldElement, j: usize) -> FieldElement {
        if self.prime_part(x).is_some() {
            return x.clone();
        }
        let mut y = x.clone();
        for _ in 0..j % self.m {
            y = self.frobenius(&y);
        }
        y
    }

    /// Whether `x` lies in GF(q^d), i.e. `x^{q^d} = x`. Requires `d | m`.
    pub fn in_subfield(&self, x: &FieldElement, d: usize) -> Result<bool> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, m: self.m });
        }
        Ok(self.frobenius_q(x, d) == *x)
    }

    /// Smallest `d | m` such that every element of `xs` lies in GF(q^d).
    pub fn subfield_degree<'a>(&self, xs: impl IntoIterator<Item = &'a FieldElement> + Clone) -> usize {
        (1..=self.m)
            .filter(|d| self.m.is_multiple_of(*d))
            .find(|&d| xs.clone().into_iter().all(|x| self.frobenius_q(x, d) == *x))
            .unwrap_or(self.m)
    }

    /// A GF(p)-basis of GF(q^d) inside GF(q^m), computed as the kernel of
    /// `Frob_q^d - id` on GF(p)^{e·m}. It has `e·d` elements.
    pub fn subfield_basis(&self, d: usize) -> Result<Vec<FieldElement>> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, m: self.m });
        }
        if d == 1 {
            return Ok(self.fq_gamma().to_vec());
        }
        Ok(self.compute_subfield_basis(d))
    }

    fn compute_subfield_basis(&self, d: usize) -> Vec<FieldElement> {
        let n = self.degree;
        let f = &self.prime;
        let mut mat = Matrix::filled(n, n, 0u64);
        for i in 0..n {
            let mut unit = vec![0u64; n];
            unit[i] = 1;
            let x = self.from_coords(&unit).expect("unit vector");
            let img = self.frobenius_q(&x, d);
            for r in 0..n {
                let v = f.sub(&self.coord(&img, r), &unit[r]);
                mat.set(r, i, v);
            }
        }
        linalg::kernel(f, &mat)
            .into_iter()
            .map(|v| self.from_coords(&v).expect("kernel vector"))
            .collect()
    }

    /// GF(p)-basis of GF(q), cached.
    pub(crate) fn fq_gamma(&self) -> &[FieldElement] {
        self.fq_basis.get_or_init(|| {
            if self.e == 1 {
                vec![self.one()]
            } else {
                self.compute_subfield_basis(1)
            }
        })
    }

    /// Uniform element of GF(q^d) for `d | m`.
    pub fn random_in_subfield<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Result<FieldElement> {
        if d == self.m {
            return Ok(self.random(rng));
        }
        let basis = self.subfield_basis(d)?;
        let mut acc = self.zero();
        for b in &basis {
            let c = rng.gen_range(0..self.p);
            acc = self.add(&acc, &self.scale(b, c));
        }
        Ok(acc)
    }

    /// Uniform element of GF(q).
    pub fn random_fq<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mut acc = self.zero();
        for b in self.fq_gamma() {
            let c = rng.gen_range(0..self.p);
            acc = self.add(&acc, &self.scale(b, c));
        }
        acc
    }

    /// The first `m` powers of the generator, a GF(q)-basis of GF(q^m).
    pub fn power_basis(&self) -> Vec<FieldElement> {
        let g = self.generator();
        let mut out = Vec::with_capacity(self.m);
        let mut acc = self.one();
        for _ in 0..self.m {
            out.push(acc.clone());
            acc = self.mul(&acc, &g);
        }
        out
    }

    fn digit_width(&self) -> usize {
        let bits = 64 - (self.p - 1).leading_zeros() as usize;
        bits.div_ceil(4).max(1)
    }

    /// Context header `"p,e,m"` used by the text forms.
    pub fn header(&self) -> String {
        format!("{},{},{}", self.p, self.e, self.m)
    }

    /// Little-endian coefficient string, fixed-width hex per coordinate.
    pub fn format_digits(&self, x: &FieldElement) -> String {
        let w = self.digit_width();
        self.coords(x).iter().map(|c| format!("{c:0w$x}")).collect()
    }

    /// Full element text form `"p,e,m:<digits>"`.
    pub fn format(&self, x: &FieldElement) -> String {
        format!("{}:{}", self.header(), self.format_digits(x))
    }

    /// Parses the element text form; the `p,e,m:` header is optional but
    /// must match this context when present.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        let digits = match s.split_once(':') {
            Some((head, rest)) => {
                if head.trim() != self.header() {
                    return Err(Error::ContextMismatch);
                }
                rest
            }
            None => s,
        };
        let w = self.digit_width();
        if digits.len() != w * self.degree || !digits.is_ascii() {
            return Err(Error::Parse(format!(
                "expected {} hex digits, got {:?}",
                w * self.degree,
                digits
            )));
        }
        let coords = (0..self.degree)
            .map(|i| {
                u64::from_str_radix(&digits[i * w..(i + 1) * w], 16)
                    .map_err(|e| Error::Parse(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_coords(&coords)
    }
}

fn xor_shifted(dst: &mut [u64], src: &[u64], shift: usize) {
    let ws = shift / 64;
    let bs = shift % 64;
    for (i, &w) in src.iter().enumerate() {
        if w == 0 {
            continue;
        }
        if ws + i < dst.len() {
            dst[ws + i] ^= w << bs;
        }
        if bs != 0 && ws + i + 1 < dst.len() {
            dst[ws + i + 1] ^= w >> (64 - bs);
        }
    }
}

impl Field for FieldContext {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldContext::zero(self)
    }
    fn one(&self) -> FieldElement {
        FieldContext::one(self)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        FieldContext::is_zero(self, a)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldContext::add(self, a, b)
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldContext::sub(self, a, b)
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldContext::mul(self, a, b)
    }
    fn inverse(&self, a: &FieldElement) -> FieldElement {
        self.inv(a).expect("pivot is nonzero")
    }
}

/// A GF(q)-basis of GF(q^m) with the precomputed inverse of its GF(p)
/// expansion matrix.
#[derive(Clone, Debug)]
pub struct FqBasis {
    elems: Vec<FieldElement>,
    inverse: Matrix<u64>,
}

impl FqBasis {
    /// Checks independence once; fails with [`Error::DependentBasis`].
    pub fn new(ctx: &FieldContext, elems: Vec<FieldElement>) -> Result<Self> {
        if elems.len() != ctx.m {
            return Err(Error::DependentBasis);
        }
        let gamma = ctx.fq_gamma();
        let n = ctx.degree;
        let mut mat = Matrix::filled(n, n, 0u64);
        for (i, b) in elems.iter().enumerate() {
            for (t, g) in gamma.iter().enumerate() {
                let col = ctx.mul(g, b);
                for r in 0..n {
                    mat.set(r, i * ctx.e + t, ctx.coord(&col, r));
                }
            }
        }
        let inverse = linalg::invert(ctx.prime_field(), &mat).ok_or(Error::DependentBasis)?;
        Ok(Self { elems, inverse })
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elems
    }

    /// Coordinates of `x` over GF(q), returned as elements of the subfield.
    pub fn coordinates(&self, ctx: &FieldContext, x: &FieldElement) -> Vec<FieldElement> {
        let c = self.inverse.mul_vec(ctx.prime_field(), &ctx.coords(x));
        let gamma = ctx.fq_gamma();
        (0..ctx.m)
            .map(|i| {
                let mut acc = ctx.zero();
                for (t, g) in gamma.iter().enumerate() {
                    acc = ctx.add(&acc, &ctx.scale(g, c[i * ctx.e + t]));
                }
                acc
            })
            .collect()
    }

    /// Inverse of [`FqBasis::coordinates`].
    pub fn expand(&self, ctx: &FieldContext, coords: &[FieldElement]) -> FieldElement {
        let mut acc = ctx.zero();
        for (c, b) in coords.iter().zip(&self.elems) {
            acc = ctx.add(&acc, &ctx.mul(c, b));
        }
        acc
    }
}
