//! The ring of linearized polynomials `Σ a_i X^{q^i}` over GF(q^m) under
//! addition and composition, with right Euclidean division, extended right
//! gcd and left lcm.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldContext, FieldElement, FqBasis};
use crate::linalg::Matrix;
use crate::rankmetric::{self, Subspace};

/// `Σ coeffs[i]·X^{q^i}`. Coefficients are trimmed so the last one is
/// nonzero; the zero polynomial has no coefficients.
#[derive(Clone)]
pub struct LinPoly {
    ctx: Arc<FieldContext>,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for LinPoly {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for LinPoly {}

impl fmt::Debug for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

pub(crate) fn same_context(a: &Arc<FieldContext>, b: &Arc<FieldContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Frobenius twists `c^{q^t}` of a coefficient vector, built lazily and
/// wrapped around once the orbit closes.
struct TwistTable<'a> {
    ctx: &'a FieldContext,
    levels: Vec<Vec<FieldElement>>,
    period: Option<usize>,
}

impl<'a> TwistTable<'a> {
    fn new(ctx: &'a FieldContext, base: Vec<FieldElement>) -> Self {
        Self {
            ctx,
            levels: vec![base],
            period: None,
        }
    }

    fn get(&mut self, t: usize) -> &[FieldElement] {
        loop {
            if let Some(p) = self.period {
                return &self.levels[t % p];
            }
            if t < self.levels.len() {
                return &self.levels[t];
            }
            let last = self.levels.last().expect("nonempty");
            let next: Vec<_> = last.iter().map(|c| self.ctx.frobenius_q(c, 1)).collect();
            if next == self.levels[0] {
                self.period = Some(self.levels.len());
            } else {
                self.levels.push(next);
            }
        }
    }
}

impl LinPoly {
    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    /// The ring unit `X`.
    pub fn x(ctx: &Arc<FieldContext>) -> Self {
        Self::monomial(ctx, ctx.one(), 0)
    }

    /// `c·X^{q^i}`.
    pub fn monomial(ctx: &Arc<FieldContext>, c: FieldElement, i: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); i];
        coeffs.push(c);
        Self::new(ctx, coeffs)
    }

    pub fn new(ctx: &Arc<FieldContext>, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| ctx.is_zero(c)) {
            coeffs.pop();
        }
        Self {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    /// Uniformly random polynomial of q-degree `< bound`.
    pub fn random<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, bound: usize, rng: &mut R) -> Self {
        let coeffs = (0..bound).map(|_| ctx.random(rng)).collect();
        Self::new(ctx, coeffs)
    }

    /// Random monic polynomial of q-degree exactly `d`.
    pub fn random_monic<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, d: usize, rng: &mut R) -> Self {
        let mut coeffs: Vec<_> = (0..d).map(|_| ctx.random(rng)).collect();
        coeffs.push(ctx.one());
        Self::new(ctx, coeffs)
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `X^{q^i}`, zero past the q-degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    /// Coefficients `0..len`, zero-padded. Panics when `qdeg >= len`.
    pub fn padded(&self, len: usize) -> Vec<FieldElement> {
        assert!(self.coeffs.len() <= len, "polynomial longer than block");
        let mut v = self.coeffs.clone();
        v.resize(len, self.ctx.zero());
        v
    }

    /// q-degree; `None` for the zero polynomial.
    pub fn qdeg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of coefficient slots, `qdeg + 1` (0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Leading coefficient.
    pub fn lc(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Some(&self.ctx.one())
    }

    /// Truncation to q-degree `< len`.
    pub fn truncate(&self, len: usize) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().take(len).cloned().collect())
    }

    /// `Σ_{i ≥ from} a_i X^{q^i}`.
    pub fn high_part(&self, from: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i < from { self.ctx.zero() } else { c.clone() })
            .collect();
        Self::new(&self.ctx, coeffs)
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if same_context(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&FieldElement, &FieldElement) -> FieldElement) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = self.ctx.zero();
        let coeffs = (0..n)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&z), other.coeffs.get(i).unwrap_or(&z)))
            .collect();
        Self::new(&self.ctx, coeffs)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.zip_with(other, |a, b| self.ctx.add(a, b)))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.zip_with(other, |a, b| self.ctx.sub(a, b)))
    }

    /// Panics on context mismatch; see [`LinPoly::checked_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("context mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("context mismatch")
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|c| self.ctx.neg(c)).collect())
    }

    /// `c·P`, i.e. `(c·X) ∘ P`.
    pub fn scale_left(&self, c: &FieldElement) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| self.ctx.mul(c, a)).collect())
    }

    /// `P ∘ Q`.
    pub fn checked_compose(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let ctx = &*self.ctx;
        let mut out = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut twist = TwistTable::new(ctx, other.coeffs.clone());
        for (i, a) in self.coeffs.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in twist.get(i).iter().enumerate() {
                out[i + j] = ctx.add(&out[i + j], &ctx.mul(a, b));
            }
        }
        Ok(Self::new(&self.ctx, out))
    }

    pub fn compose(&self, other: &Self) -> Self {
        self.checked_compose(other).expect("context mismatch")
    }

    /// `P(ζ) = Σ a_i ζ^{q^i}`.
    pub fn eval(&self, z: &FieldElement) -> FieldElement {
        let ctx = &*self.ctx;
        let mut acc = ctx.zero();
        let mut zi = z.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                zi = ctx.frobenius_q(&zi, 1);
            }
            acc = ctx.add(&acc, &ctx.mul(a, &zi));
        }
        acc
    }

    /// Right division: `A = Q ∘ B + R` with `qdeg R < qdeg B`.
    pub fn rquorem(&self, b: &Self) -> Result<(Self, Self)> {
        self.check_ctx(b)?;
        let db = b.qdeg().ok_or(Error::DivisionByZero)?;
        let ctx = &*self.ctx;
        let mut r = self.coeffs.clone();
        let Some(da) = self.qdeg() else {
            return Ok((Self::zero(&self.ctx), Self::zero(&self.ctx)));
        };
        if da < db {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut base = b.coeffs.clone();
        base.push(ctx.inv(&b.coeffs[db])?);
        let mut twist = TwistTable::new(ctx, base);
        let mut q = vec![ctx.zero(); da - db + 1];
        for top in (db..=da).rev() {
            if ctx.is_zero(&r[top]) {
                continue;
            }
            let t = top - db;
            let tw = twist.get(t);
            // c·X^{q^t} ∘ B has leading coefficient c·lc(B)^{q^t}
            let c = ctx.mul(&r[top], &tw[db + 1]);
            for j in 0..db {
                r[t + j] = ctx.sub(&r[t + j], &ctx.mul(&c, &tw[j]));
            }
            r[top] = ctx.zero();
            q[t] = c;
        }
        r.truncate(db);
        Ok((Self::new(&self.ctx, q), Self::new(&self.ctx, r)))
    }

    /// Remainder of the right division by `b`.
    pub fn rem(&self, b: &Self) -> Result<Self> {
        Ok(self.rquorem(b)?.1)
    }

    /// Whether `b` right-divides `self`.
    pub fn right_divisible_by(&self, b: &Self) -> Result<bool> {
        Ok(self.rem(b)?.is_zero())
    }

    /// `(c·P, c)` with `c = lc(P)^{-1}`.
    fn monic_with_scale(&self) -> Result<(Self, FieldElement)> {
        let lc = self.lc().ok_or(Error::ZeroPolynomial)?;
        let c = self.ctx.inv(lc)?;
        Ok((self.scale_left(&c), c))
    }

    pub fn monic(&self) -> Result<Self> {
        Ok(self.monic_with_scale()?.0)
    }

    /// Extended Euclid. Returns `(U0, V0, R0, U1, V1)` with
    /// `U0∘A + V0∘B = R0 = A ∧_r B` (monic) and `U1∘A + V1∘B = 0`.
    fn euclid(&self, b: &Self) -> Result<[Self; 5]> {
        self.check_ctx(b)?;
        if self.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let check = self.len() + b.len() <= 64;
        let x = Self::x(&self.ctx);
        let zero = Self::zero(&self.ctx);
        let (mut r0, mut r1) = (self.clone(), b.clone());
        let (mut u0, mut u1) = (x.clone(), zero.clone());
        let (mut v0, mut v1) = (zero, x);
        while !r1.is_zero() {
            let (q, r) = r0.rquorem(&r1)?;
            let u = u0.sub(&q.compose(&u1));
            let v = v0.sub(&q.compose(&v1));
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, u);
            v0 = std::mem::replace(&mut v1, v);
            if cfg!(debug_assertions) && check {
                assert_eq!(u1.compose(self).add(&v1.compose(b)), r1, "Bezout invariant");
            }
        }
        let (r0, c) = r0.monic_with_scale()?;
        Ok([u0.scale_left(&c), v0.scale_left(&c), r0, u1, v1])
    }

    /// `(U0, V0, R0)` with `U0∘A + V0∘B = R0`, `R0` the monic right gcd.
    pub fn rgcd_extended(&self, b: &Self) -> Result<(Self, Self, Self)> {
        let [u0, v0, r0, _, _] = self.euclid(b)?;
        Ok((u0, v0, r0))
    }

    pub fn rgcd(&self, b: &Self) -> Result<Self> {
        Ok(self.rgcd_extended(b)?.2)
    }

    /// Monic least common left multiple `A ∨_l B`.
    pub fn llcm(&self, b: &Self) -> Result<Self> {
        if self.is_zero() || b.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let [_, _, _, u1, _] = self.euclid(b)?;
        u1.compose(self).monic()
    }

    /// Matrix over GF(q) of `ζ ↦ P(ζ)` in `basis`; column `j` holds the
    /// coordinates of `P(basis_j)`.
    pub fn to_endomorphism_matrix(&self, basis: &FqBasis) -> Matrix<FieldElement> {
        let ctx = &*self.ctx;
        let m = ctx.m();
        let mut out = Matrix::filled(m, m, ctx.zero());
        for (j, b) in basis.elements().iter().enumerate() {
            let col = basis.coordinates(ctx, &self.eval(b));
            for (i, c) in col.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }

    /// Remainder modulo `X^{q^m} - X`, folding `X^{q^{i}}` onto `X^{q^{i mod m}}`.
    pub fn reduce_mod_frobenius_period(&self) -> Self {
        let m = self.ctx.m();
        let mut out = vec![self.ctx.zero(); m.min(self.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i % m] = self.ctx.add(&out[i % m], c);
        }
        Self::new(&self.ctx, out)
    }

    /// Support of the coefficient vector.
    pub fn support(&self) -> Subspace {
        rankmetric::support(&self.ctx, &self.coeffs)
    }

    /// Text form `qpoly[c_0, c_1, …]` with full element text coefficients.
    pub fn to_text(&self) -> String {
        let parts: Vec<_> = self.coeffs.iter().map(|c| self.ctx.format(c)).collect();
        format!("qpoly[{}]", parts.join(", "))
    }

    pub fn parse(ctx: &Arc<FieldContext>, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix("qpoly[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse("expected qpoly[...]".into()))?;
        if inner.trim().is_empty() {
            return Ok(Self::zero(ctx));
        }
        // The header itself contains commas; strip it before splitting.
        let head = format!("{}:", ctx.header());
        let elems = inner
            .replace(&head, "")
            .split(',')
            .map(|tok| {
                if tok.contains(':') {
                    return Err(Error::ContextMismatch);
                }
                ctx.parse(tok)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ctx, elems))
    }
}
