//! The q-CRT code `C_{F,k,A} = {(P∘A mod f_1, …, P∘A mod f_s) : qdeg P < k}`.
//!
//! Codewords are stored flat: residue blocks concatenated in modulus order,
//! coefficients ascending within a block, block `i` of length `d_i`.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use crate::crt::ModulusFamily;
use crate::error::{Error, Result};
use crate::gf::{FieldContext, FieldElement};
use crate::linalg::{self, Matrix};
use crate::linpoly::LinPoly;
use crate::rankmetric::{self, BlockPartition};

/// A flat codeword (or received word) of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    symbols: Vec<FieldElement>,
}

impl Codeword {
    pub fn from_flat(symbols: Vec<FieldElement>) -> Self {
        Self { symbols }
    }

    pub fn from_blocks(fam: &ModulusFamily, blocks: &[LinPoly]) -> Result<Self> {
        Ok(Self {
            symbols: fam.flatten(blocks)?,
        })
    }

    pub fn symbols(&self) -> &[FieldElement] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<FieldElement> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn blocks(&self, fam: &ModulusFamily) -> Result<Vec<LinPoly>> {
        fam.unflatten(&self.symbols)
    }

    pub fn add(&self, ctx: &FieldContext, other: &[FieldElement]) -> Self {
        Self {
            symbols: self.symbols.iter().zip(other).map(|(a, b)| ctx.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, ctx: &FieldContext, other: &[FieldElement]) -> Self {
        Self {
            symbols: self.symbols.iter().zip(other).map(|(a, b)| ctx.sub(a, b)).collect(),
        }
    }
}

/// Code parameters with lazily cached matrices.
#[derive(Debug)]
pub struct CodeSpec {
    fam: Arc<ModulusFamily>,
    k: usize,
    a: LinPoly,
    generator: OnceLock<Matrix<FieldElement>>,
    subcode_parity: OnceLock<Matrix<FieldElement>>,
    parity: OnceLock<Matrix<FieldElement>>,
}

impl CodeSpec {
    pub fn new(fam: Arc<ModulusFamily>, k: usize, a: LinPoly) -> Result<Self> {
        if !crate::linpoly::same_context(fam.context(), a.context()) {
            return Err(Error::ContextMismatch);
        }
        let alpha = a
            .qdeg()
            .ok_or_else(|| Error::InvalidParams("A must be nonzero".into()))?;
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if k + alpha >= fam.n() {
            return Err(Error::InvalidParams(format!(
                "k + alpha = {} must be below n = {}",
                k + alpha,
                fam.n()
            )));
        }
        Ok(Self {
            fam,
            k,
            a,
            generator: OnceLock::new(),
            subcode_parity: OnceLock::new(),
            parity: OnceLock::new(),
        })
    }

    pub fn family(&self) -> &Arc<ModulusFamily> {
        &self.fam
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.fam.context()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &LinPoly {
        &self.a
    }

    /// `α = qdeg A`.
    pub fn alpha(&self) -> usize {
        self.a.qdeg().expect("A is nonzero")
    }

    /// `k + α`, the q-degree bound of `P∘A`.
    pub fn k_alpha(&self) -> usize {
        self.k + self.alpha()
    }

    pub fn n(&self) -> usize {
        self.fam.n()
    }

    /// Sum-rank partition by modulus degrees.
    pub fn partition(&self) -> BlockPartition {
        BlockPartition::new(self.fam.degrees().to_vec()).expect("degrees are positive")
    }

    /// Residues of `P∘A`.
    pub fn encode(&self, p: &LinPoly) -> Result<Codeword> {
        if let Some(d) = p.qdeg() {
            if d >= self.k {
                return Err(Error::MessageTooLarge { qdeg: d, k: self.k });
            }
        }
        let g = p.checked_compose(&self.a)?;
        Codeword::from_blocks(&self.fam, &self.fam.residues(&g)?)
    }

    /// Rows are the codewords of `X^{q^i}`, `i < k`.
    pub fn generator_matrix(&self) -> &Matrix<FieldElement> {
        self.generator.get_or_init(|| {
            let ctx = self.context();
            let rows = (0..self.k)
                .map(|i| {
                    self.encode(&LinPoly::monomial(ctx, ctx.one(), i))
                        .expect("monomial below k")
                        .into_symbols()
                })
                .collect();
            Matrix::from_rows(rows, self.n())
        })
    }

    /// `α × (k+α)` matrix whose kernel is the coefficient space of
    /// `{P∘A : qdeg P < k}`.
    pub fn subcode_parity(&self) -> &Matrix<FieldElement> {
        self.subcode_parity.get_or_init(|| {
            let ctx = self.context();
            let ka = self.k_alpha();
            let rows = (0..self.k)
                .map(|i| LinPoly::monomial(ctx, ctx.one(), i).compose(&self.a).padded(ka))
                .collect();
            let c = Matrix::from_rows(rows, ka);
            let ker = linalg::kernel(&**ctx, &c);
            Matrix::from_rows(ker, ka)
        })
    }

    /// `(n−k) × n` parity-check matrix `K_A · M_Φ`, where `M_Φ` is the lift
    /// matrix and `K_A` stacks the subcode parity on coefficients `0..k+α`
    /// over the identity selecting `k+α..n`.
    pub fn parity_check_matrix(&self) -> &Matrix<FieldElement> {
        self.parity.get_or_init(|| {
            let ctx = self.context();
            let (n, ka) = (self.n(), self.k_alpha());
            let ha = self.subcode_parity();
            let mut k_a = Matrix::filled(ha.rows() + n - ka, n, ctx.zero());
            for i in 0..ha.rows() {
                for j in 0..ka {
                    k_a.set(i, j, ha.get(i, j).clone());
                }
            }
            for t in 0..n - ka {
                k_a.set(ha.rows() + t, ka + t, ctx.one());
            }
            k_a.mul(&**ctx, self.fam.lift_matrix())
        })
    }

    /// Membership through `H·w = 0`.
    pub fn is_codeword(&self, w: &[FieldElement]) -> Result<bool> {
        if w.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: w.len(),
            });
        }
        let ctx = self.context();
        Ok(self
            .parity_check_matrix()
            .mul_vec(&**ctx, w)
            .iter()
            .all(|x| ctx.is_zero(x)))
    }

    /// Minimum (rank, sum-rank) weight over nonzero codewords, by
    /// enumerating every message. Allowed while `q^{mk} ≤ 2^24`.
    pub fn min_distance_exhaustive(&self) -> Result<(usize, usize)> {
        let ctx = self.context();
        let digits = ctx.degree() * self.k;
        let total = BigUint::from(ctx.p()).pow(digits as u32);
        if total > BigUint::from(1u32 << 24) {
            return Err(Error::InvalidParams("q^{mk} exceeds 2^24".into()));
        }
        let total: u64 = total.try_into().expect("at most 2^24");
        let g = self.generator_matrix();
        let part = self.partition();
        let mut best = (usize::MAX, usize::MAX);
        let p = ctx.p();
        for idx in 1..total {
            let mut rest = idx;
            let mut word = vec![ctx.zero(); self.n()];
            for i in 0..self.k {
                let mut coords = vec![0u64; ctx.degree()];
                for c in coords.iter_mut() {
                    *c = rest % p;
                    rest /= p;
                }
                let lam = ctx.from_coords(&coords)?;
                if ctx.is_zero(&lam) {
                    continue;
                }
                for (w, gv) in word.iter_mut().zip(g.row(i)) {
                    *w = ctx.add(w, &ctx.mul(&lam, gv));
                }
            }
            let r = rankmetric::rank_weight(ctx, &word);
            let sr = rankmetric::sum_rank_weight(ctx, &word, &part)?;
            best = (best.0.min(r), best.1.min(sr));
        }
        Ok(best)
    }
}

/// Moore matrix: row `i`, column `j` is `points_j^{q^i}`, `i < k`.
pub fn moore_matrix(ctx: &FieldContext, points: &[FieldElement], k: usize) -> Matrix<FieldElement> {
    let mut m = Matrix::filled(k, points.len(), ctx.zero());
    for (j, z) in points.iter().enumerate() {
        let mut zi = z.clone();
        for i in 0..k {
            if i > 0 {
                zi = ctx.frobenius_q(&zi, 1);
            }
            m.set(i, j, zi.clone());
        }
    }
    m
}

/// Multiplies column `j` by `diag[j]`.
pub fn scale_columns(ctx: &FieldContext, mat: &Matrix<FieldElement>, diag: &[FieldElement]) -> Matrix<FieldElement> {
    let mut out = mat.clone();
    for i in 0..mat.rows() {
        for (j, d) in diag.iter().enumerate() {
            out.set(i, j, ctx.mul(mat.get(i, j), d));
        }
    }
    out
}

/// Whether two matrices with the same column count span the same rows.
pub fn same_row_space(ctx: &FieldContext, a: &Matrix<FieldElement>, b: &Matrix<FieldElement>) -> bool {
    let ra = linalg::rank(ctx, a);
    ra == linalg::rank(ctx, b) && linalg::rank(ctx, &a.vstack(b)) == ra
}

/// Generator of the code over `(X^{q^l}, X^{q^m} - X)` written out
/// directly: with `A = Σ a_j X^{q^j}`, row `i` has `a_{c-i}^{q^i}` at column
/// `c` of the first block (`i ≤ c < l`) and `a_j^{q^i}` accumulated at column
/// `(i + j) mod m` of the second block.
pub fn two_block_generator(ctx: &FieldContext, a: &LinPoly, l: usize, k: usize) -> Matrix<FieldElement> {
    let m = ctx.m();
    let mut g = Matrix::filled(k, l + m, ctx.zero());
    for i in 0..k {
        for (j, aj) in a.coeffs().iter().enumerate() {
            let v = ctx.frobenius_q(aj, i);
            if i + j < l {
                g.set(i, i + j, v.clone());
            }
            let c = l + (i + j) % m;
            let acc = ctx.add(g.get(i, c), &v);
            g.set(i, c, acc);
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crt::{gabidulin_moduli, two_block_moduli};
    use crate::rankmetric::random_independent;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_family(ctx: &Arc<FieldContext>, rng: &mut ChaCha8Rng) -> ModulusFamily {
        loop {
            let s = rng.gen_range(2..4);
            let moduli = (0..s).map(|_| LinPoly::random_monic(ctx, rng.gen_range(2..5), rng)).collect();
            if let Ok(f) = ModulusFamily::new(moduli) {
                return f;
            }
        }
    }

    #[test]
    fn parameter_validation() {
        let ctx = FieldContext::new(2, 1, 6, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = random_independent(&ctx, 4, &mut rng).unwrap();
        let fam = Arc::new(ModulusFamily::new(gabidulin_moduli(&ctx, &pts).unwrap()).unwrap());
        let x = LinPoly::x(&ctx);
        assert!(CodeSpec::new(fam.clone(), 0, x.clone()).is_err());
        assert!(CodeSpec::new(fam.clone(), 4, x.clone()).is_err());
        assert!(CodeSpec::new(fam.clone(), 2, LinPoly::zero(&ctx)).is_err());
        let spec = CodeSpec::new(fam, 3, x.clone()).unwrap();
        assert_eq!(
            spec.encode(&LinPoly::monomial(&ctx, ctx.one(), 3)).unwrap_err(),
            Error::MessageTooLarge { qdeg: 3, k: 3 }
        );
        assert!(spec.encode(&LinPoly::zero(&ctx)).unwrap().symbols().iter().all(|s| ctx.is_zero(s)));
        assert_eq!(spec.encode(&x).unwrap().symbols(), vec![ctx.one(); 4].as_slice());
        assert_eq!(spec.subcode_parity().rows(), 0);
    }

    #[test]
    fn gabidulin_generator_identity() {
        let ctx = FieldContext::new(2, 1, 8, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = random_independent(&ctx, 8, &mut rng).unwrap();
        let fam = Arc::new(ModulusFamily::new(gabidulin_moduli(&ctx, &pts).unwrap()).unwrap());
        let inv: Vec<_> = pts.iter().map(|z| ctx.inv(z).unwrap()).collect();
        for k in 1..6 {
            let spec = CodeSpec::new(fam.clone(), k, LinPoly::x(&ctx)).unwrap();
            let expect = scale_columns(&ctx, &moore_matrix(&ctx, &pts, k), &inv);
            assert_eq!(spec.generator_matrix(), &expect);
        }
    }

    #[test]
    fn two_block_closed_form() {
        let ctx = FieldContext::new(2, 1, 9, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fam = Arc::new(ModulusFamily::new(two_block_moduli(&ctx, 3)).unwrap());
        for (k, alpha) in [(4, 2), (6, 5), (2, 9)] {
            let a = LinPoly::random_monic(&ctx, alpha, &mut rng);
            let spec = CodeSpec::new(fam.clone(), k, a.clone()).unwrap();
            assert_eq!(spec.generator_matrix(), &two_block_generator(&ctx, &a, 3, k));
            let p = LinPoly::random(&ctx, k, &mut rng);
            let w = spec.encode(&p).unwrap();
            let blocks = w.blocks(&fam).unwrap();
            assert_eq!(blocks[0], p.compose(&a).truncate(3));
        }
    }

    #[test]
    fn parity_structure() {
        let ctx = FieldContext::new(2, 1, 8, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let fam = Arc::new(random_family(&ctx, &mut rng));
            let n = fam.n();
            let alpha = rng.gen_range(0..3.min(n - 2));
            let k = rng.gen_range(1..n - alpha);
            let a = LinPoly::random_monic(&ctx, alpha, &mut rng);
            let spec = CodeSpec::new(fam, k, a.clone()).unwrap();
            let g = spec.generator_matrix();
            let h = spec.parity_check_matrix();
            assert!(h.mul(&*ctx, &g.transpose()).is_zero(&*ctx));
            assert_eq!(linalg::rank(&*ctx, g), k);
            assert_eq!(linalg::rank(&*ctx, h), n - k);
            let ha = spec.subcode_parity();
            assert_eq!(linalg::rank(&*ctx, ha), alpha);
            for _ in 0..20 {
                let p = LinPoly::random(&ctx, k, &mut rng);
                let coeffs = p.compose(&a).padded(spec.k_alpha());
                assert!(ha.mul_vec(&*ctx, &coeffs).iter().all(|x| ctx.is_zero(x)));
                assert!(spec.is_codeword(spec.encode(&p).unwrap().symbols()).unwrap());
                let junk: Vec<_> = (0..n).map(|_| ctx.random(&mut rng)).collect();
                assert!(!spec.is_codeword(&junk).unwrap());
            }
        }
    }

    #[test]
    fn encode_is_injective_on_small_space() {
        let ctx = FieldContext::new(2, 1, 3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fam = Arc::new(random_family(&ctx, &mut rng));
        let spec = CodeSpec::new(fam, 2, LinPoly::random_monic(&ctx, 1, &mut rng)).unwrap();
        let mut seen = std::collections::HashSet::new();
        for v in 0..64u64 {
            let c0 = ctx.from_coords(&[v & 1, (v >> 1) & 1, (v >> 2) & 1]).unwrap();
            let c1 = ctx.from_coords(&[(v >> 3) & 1, (v >> 4) & 1, v >> 5]).unwrap();
            let w = spec.encode(&LinPoly::new(&ctx, vec![c0, c1])).unwrap();
            assert!(seen.insert(w.into_symbols()));
        }
        let (r, sr) = spec.min_distance_exhaustive().unwrap();
        assert!(r >= 1 && sr >= r);
    }
}
