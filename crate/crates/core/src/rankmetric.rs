//! Supports, rank and sum-rank weights, subspace products and random
//! errors of prescribed rank.
//!
//! A GF(q)-subspace `V ⊆ GF(q^m)` is stored as the reduced row echelon form
//! over GF(p) of the GF(p)-span of `V`, which is `span{γ_t·v}` for a GF(p)
//! basis `γ_t` of GF(q). The form is canonical, so equality of subspaces is
//! equality of representations, and `dim_q V = rows / e`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{FieldContext, FieldElement};
use crate::linalg::{self, Field, Matrix, Solution};

/// Incremental reduced echelon basis of a GF(p)-subspace of GF(p)^D.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Echelon {
    /// Sorted by pivot; each row is monic at its pivot and zero at every
    /// other row's pivot.
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    fn reduce(&self, f: &linalg::PrimeField, v: &mut [u64]) {
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
    }

    fn contains(&self, f: &linalg::PrimeField, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|&c| c == 0)
    }

    /// Inserts `v`; returns whether the span grew.
    fn insert(&mut self, f: &linalg::PrimeField, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        let Some(piv) = w.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inverse(&w[piv]);
        for x in w.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, r) in row.iter_mut().zip(&w) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < piv);
        self.rows.insert(at, (piv, w));
        true
    }
}

/// A GF(q)-subspace of GF(q^m) in canonical form.
#[derive(Clone)]
pub struct Subspace {
    ctx: Arc<FieldContext>,
    ech: Echelon,
    /// GF(q)-basis, in insertion order.
    basis: Vec<FieldElement>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ech == other.ech
    }
}

impl Eq for Subspace {}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("dim", &self.dim())
            .field("rows", &self.ech.rows.len())
            .finish()
    }
}

impl Subspace {
    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        Self {
            ctx: ctx.clone(),
            ech: Echelon::new(),
            basis: Vec::new(),
        }
    }

    /// GF(q)-span of `elems`.
    pub fn span<'a>(ctx: &Arc<FieldContext>, elems: impl IntoIterator<Item = &'a FieldElement>) -> Self {
        let mut s = Self::zero(ctx);
        for x in elems {
            s.add(x);
        }
        s
    }

    /// The subfield GF(q^d) as a GF(q)-subspace.
    pub fn subfield(ctx: &Arc<FieldContext>, d: usize) -> Result<Self> {
        let basis = ctx.subfield_basis(d)?;
        Ok(Self::span(ctx, &basis))
    }

    /// Adds `x` to the span; returns whether the dimension grew.
    pub fn add(&mut self, x: &FieldElement) -> bool {
        let f = *self.ctx.prime_field();
        let coords = self.ctx.coords(x);
        if self.ech.contains(&f, &coords) {
            return false;
        }
        for g in self.ctx.fq_gamma() {
            let y = self.ctx.mul(g, x);
            self.ech.insert(&f, &self.ctx.coords(&y));
        }
        self.basis.push(x.clone());
        true
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.ech.contains(self.ctx.prime_field(), &self.ctx.coords(x))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Dimension over GF(q).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dimension over GF(p), `e·dim`.
    pub fn dim_p(&self) -> usize {
        self.ech.rows.len()
    }

    /// A GF(q)-basis.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Canonical GF(p)-basis: the echelon rows as field elements.
    pub fn prime_basis(&self) -> Vec<FieldElement> {
        self.ech
            .rows
            .iter()
            .map(|(_, r)| self.ctx.from_coords(r).expect("reduced row"))
            .collect()
    }

    /// Pivot columns of the canonical form.
    pub fn pivots(&self) -> Vec<usize> {
        self.ech.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// `self + other`.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for b in &other.basis {
            s.add(b);
        }
        s
    }

    /// Text dump: `q,m,dim` header line (q as `p^e`), then one row of hex
    /// GF(p) coordinates per GF(p)-basis vector.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}^{},{},{}\n", self.ctx.p(), self.ctx.e(), self.ctx.m(), self.dim());
        for x in self.prime_basis() {
            out.push_str(&self.ctx.format_digits(&x));
            out.push('\n');
        }
        out
    }
}

/// GF(q)-span of the coordinates of `v`.
pub fn support(ctx: &Arc<FieldContext>, v: &[FieldElement]) -> Subspace {
    Subspace::span(ctx, v)
}

pub fn rank_weight(ctx: &Arc<FieldContext>, v: &[FieldElement]) -> usize {
    support(ctx, v).dim()
}

/// Block lengths `n_1, …, n_t` of a sum-rank partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    lengths: Vec<usize>,
}

impl BlockPartition {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() || lengths.contains(&0) {
            return Err(Error::BadPartition("block lengths must be positive".into()));
        }
        Ok(Self { lengths })
    }

    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn unit(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }
}

pub fn sum_rank_weight(ctx: &Arc<FieldContext>, v: &[FieldElement], part: &BlockPartition) -> Result<usize> {
    if part.total() != v.len() {
        return Err(Error::BadPartition(format!(
            "partition covers {} positions, word has {}",
            part.total(),
            v.len()
        )));
    }
    let mut at = 0;
    let mut w = 0;
    for &len in part.lengths() {
        w += rank_weight(ctx, &v[at..at + len]);
        at += len;
    }
    Ok(w)
}

/// `GF(q)`-span of all products `a·b`.
pub fn subspace_product(a: &Subspace, b: &Subspace) -> Subspace {
    let ctx = a.context();
    let mut s = Subspace::zero(ctx);
    for x in a.basis() {
        for y in b.basis() {
            s.add(&ctx.mul(x, y));
        }
    }
    s
}

/// `r` GF(q)-independent elements of GF(q^m), uniform among such tuples.
pub fn random_independent<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, r: usize, rng: &mut R) -> Result<Vec<FieldElement>> {
    if r > ctx.m() {
        return Err(Error::RankOutOfRange { r, max: ctx.m() });
    }
    let mut s = Subspace::zero(ctx);
    while s.dim() < r {
        let x = ctx.random(rng);
        s.add(&x);
    }
    Ok(s.basis)
}

/// Uniform word of length `n` and rank weight exactly `r`.
///
/// The word is `u·C` for a uniform independent `u ∈ GF(q^m)^r` and a uniform
/// full-rank `C ∈ GF(q)^{r×n}`.
pub fn random_error<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, n: usize, r: usize, rng: &mut R) -> Result<Vec<FieldElement>> {
    let max = ctx.m().min(n);
    if r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    let u = random_independent(ctx, r, rng)?;
    loop {
        let mut word = vec![ctx.zero(); n];
        for ui in &u {
            for w in word.iter_mut() {
                let c = ctx.random_fq(rng);
                *w = ctx.add(w, &ctx.mul(&c, ui));
            }
        }
        // u independent: rank r iff C has full row rank
        if rank_weight(ctx, &word) == r {
            return Ok(word);
        }
    }
}

/// Gaussian elimination on a system whose entries lie in GF(q).
pub fn solve_fq_linear(ctx: &FieldContext, a: &Matrix<FieldElement>, b: &[FieldElement]) -> Solution<FieldElement> {
    linalg::solve(ctx, a, b)
}
