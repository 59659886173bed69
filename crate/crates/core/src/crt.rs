//! Chinese remainder lifting for linearized polynomials.
//!
//! For a family `f_1, …, f_s` with `h_1 = f_1`, `h_i = h_{i-1} ∨_l f_i` and
//! `h_{i-1} ∧_r f_i = X`, the map `g ↦ (g mod f_1, …, g mod f_s)` is a
//! bijection from polynomials of q-degree `< n = Σ d_i` onto residue tuples.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{FieldContext, FieldElement};
use crate::linalg::Matrix;
use crate::linpoly::LinPoly;

/// A chain-coprime modulus family with cached lifting cofactors.
#[derive(Clone, Debug)]
pub struct ModulusFamily {
    ctx: Arc<FieldContext>,
    moduli: Vec<LinPoly>,
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    /// `h_1, …, h_s`.
    chain: Vec<LinPoly>,
    /// For `i ≥ 1` (0-based): `(U∘h_{i-1}, V∘f_i)` where
    /// `U∘h_{i-1} + V∘f_i = X`. Entry 0 is unused.
    step: Vec<(LinPoly, LinPoly)>,
    /// `(S_{1,i}, S_{2,i})` with `S_{1,i}∘b_i + S_{2,i}∘f_i = X`.
    cofactors: Vec<(LinPoly, LinPoly)>,
    /// `S_{1,i}∘b_i`, reduced mod `h_s`.
    idempotents: Vec<LinPoly>,
    coeff_subfield_degree: usize,
    lift_matrix: OnceLock<Matrix<FieldElement>>,
}

/// `X^q - ζ^{q-1}·X`, the modulus whose kernel is `GF(q)·ζ`.
pub fn kernel_modulus(ctx: &Arc<FieldContext>, z: &FieldElement) -> Result<LinPoly> {
    let zq1 = ctx.div(&ctx.frobenius_q(z, 1), z)?;
    Ok(LinPoly::new(ctx, vec![ctx.neg(&zq1), ctx.one()]))
}

/// `X^{q^j} - X`.
pub fn frobenius_modulus(ctx: &Arc<FieldContext>, j: usize) -> LinPoly {
    let mut c = vec![ctx.zero(); j + 1];
    c[0] = ctx.neg(&ctx.one());
    c[j] = ctx.add(&c[j], &ctx.one());
    LinPoly::new(ctx, c)
}

/// Moduli `X^q - ζ_i^{q-1}·X`.
pub fn gabidulin_moduli(ctx: &Arc<FieldContext>, points: &[FieldElement]) -> Result<Vec<LinPoly>> {
    points.iter().map(|z| kernel_modulus(ctx, z)).collect()
}

/// The pair `X^{q^l}`, `X^{q^m} - X`.
pub fn two_block_moduli(ctx: &Arc<FieldContext>, l: usize) -> Vec<LinPoly> {
    vec![LinPoly::monomial(ctx, ctx.one(), l), frobenius_modulus(ctx, ctx.m())]
}

impl ModulusFamily {
    /// Validates the family and precomputes chain and cofactors. Fails with
    /// [`Error::ChainNotCoprime`] at the first (1-based) index `i` with
    /// `h_{i-1} ∧_r f_i ≠ X`.
    pub fn new(moduli: Vec<LinPoly>) -> Result<Self> {
        let first = moduli.first().ok_or(Error::EmptyFamily)?;
        let ctx = first.context().clone();
        for (i, f) in moduli.iter().enumerate() {
            if !crate::linpoly::same_context(&ctx, f.context()) {
                return Err(Error::ContextMismatch);
            }
            if !f.is_monic() || f.qdeg() == Some(0) {
                return Err(Error::InvalidModulus { index: i + 1 });
            }
        }
        let x = LinPoly::x(&ctx);
        let degrees: Vec<usize> = moduli.iter().map(|f| f.qdeg().expect("nonzero")).collect();
        let mut offsets = Vec::with_capacity(moduli.len());
        let mut n = 0;
        for d in &degrees {
            offsets.push(n);
            n += d;
        }

        let zero = LinPoly::zero(&ctx);
        let mut chain = vec![moduli[0].clone()];
        let mut step = vec![(zero.clone(), zero)];
        for (i, f) in moduli.iter().enumerate().skip(1) {
            let h = &chain[i - 1];
            let (u, v, g) = h.rgcd_extended(f)?;
            if g != x {
                return Err(Error::ChainNotCoprime { index: i + 1 });
            }
            let t = u.compose(h);
            let w = v.compose(f);
            if t.add(&w) != x {
                return Err(Error::NotCoprime);
            }
            chain.push(h.llcm(f)?);
            step.push((t, w));
        }
        let hs = chain.last().expect("nonempty").clone();
        if hs.qdeg() != Some(n) {
            return Err(Error::NotCoprime);
        }

        // b_i = lcm of all f_j with j ≠ i, from prefix and suffix lcms.
        let s = moduli.len();
        let mut cofactors = Vec::with_capacity(s);
        let mut idempotents = Vec::with_capacity(s);
        // suffix[i] = f_i ∨ … ∨ f_{s-1}; prefixes are the chain itself.
        let mut suffix: Vec<Option<LinPoly>> = vec![None; s + 1];
        for i in (1..s).rev() {
            suffix[i] = Some(match &suffix[i + 1] {
                None => moduli[i].clone(),
                Some(t) => moduli[i].llcm(t)?,
            });
        }
        for i in 0..s {
            let prefix = i.checked_sub(1).map(|j| chain[j].clone());
            let b = match (prefix, suffix[i + 1].clone()) {
                (None, None) => None,
                (Some(a), None) | (None, Some(a)) => Some(a),
                (Some(a), Some(c)) => Some(a.llcm(&c)?),
            };
            match b {
                None => {
                    // s = 1: lift is the identity on residues.
                    idempotents.push(x.clone());
                    cofactors.push((LinPoly::zero(&ctx), LinPoly::zero(&ctx)));
                }
                Some(b) => {
                    let (s1, s2, g) = b.rgcd_extended(&moduli[i])?;
                    if g != x || s1.compose(&b).add(&s2.compose(&moduli[i])) != x {
                        return Err(Error::NotCoprime);
                    }
                    idempotents.push(s1.compose(&b).rem(&hs)?);
                    cofactors.push((s1, s2));
                }
            }
        }

        let coeff_subfield_degree = ctx.subfield_degree(moduli.iter().flat_map(|f| f.coeffs()));
        Ok(Self {
            ctx,
            moduli,
            degrees,
            offsets,
            chain,
            step,
            cofactors,
            idempotents,
            coeff_subfield_degree,
            lift_matrix: OnceLock::new(),
        })
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn moduli(&self) -> &[LinPoly] {
        &self.moduli
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Start of block `i` in the flat layout.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    /// `n = Σ d_i`.
    pub fn n(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn chain(&self) -> &[LinPoly] {
        &self.chain
    }

    /// `h_s`, the left lcm of the whole family.
    pub fn lcm(&self) -> &LinPoly {
        self.chain.last().expect("nonempty")
    }

    pub fn cofactors(&self) -> &[(LinPoly, LinPoly)] {
        &self.cofactors
    }

    /// Smallest `d` with every modulus coefficient in GF(q^d).
    pub fn coeff_subfield_degree(&self) -> usize {
        self.coeff_subfield_degree
    }

    /// `(g mod f_1, …, g mod f_s)`.
    pub fn residues(&self, g: &LinPoly) -> Result<Vec<LinPoly>> {
        self.moduli.iter().map(|f| g.rem(f)).collect()
    }

    fn check_residues(&self, res: &[LinPoly], t: usize) -> Result<()> {
        for (i, r) in res.iter().take(t).enumerate() {
            if let Some(d) = r.qdeg() {
                if d >= self.degrees[i] {
                    return Err(Error::ResidueTooLarge {
                        index: i + 1,
                        qdeg: d,
                        bound: self.degrees[i],
                    });
                }
            }
        }
        Ok(())
    }

    /// `g_t mod h_t` from the first `t` residues.
    pub fn lift_prefix(&self, res: &[LinPoly], t: usize) -> Result<LinPoly> {
        if t == 0 || t > self.len() || res.len() < t {
            return Err(Error::LengthMismatch {
                expected: t.max(1).min(self.len()),
                got: res.len(),
            });
        }
        self.check_residues(res, t)?;
        let mut g = res[0].clone();
        for i in 1..t {
            let (tt, w) = &self.step[i];
            g = res[i].compose(tt).add(&g.compose(w)).rem(&self.chain[i])?;
        }
        Ok(g)
    }

    /// Incremental lift through the chain `h_1, …, h_s`.
    pub fn lift_incremental(&self, res: &[LinPoly]) -> Result<LinPoly> {
        if res.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: res.len(),
            });
        }
        self.lift_prefix(res, self.len())
    }

    /// One-shot lift `Σ r_i ∘ S_{1,i} ∘ b_i mod h_s`.
    pub fn lift_direct(&self, res: &[LinPoly]) -> Result<LinPoly> {
        if res.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: res.len(),
            });
        }
        self.check_residues(res, res.len())?;
        let mut acc = LinPoly::zero(&self.ctx);
        for (r, e) in res.iter().zip(&self.idempotents) {
            acc = acc.add(&r.compose(e));
        }
        acc.rem(self.lcm())
    }

    /// Splits a flat length-`n` word into residue blocks.
    pub fn unflatten(&self, flat: &[FieldElement]) -> Result<Vec<LinPoly>> {
        if flat.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: flat.len(),
            });
        }
        Ok(self
            .offsets
            .iter()
            .zip(&self.degrees)
            .map(|(&o, &d)| LinPoly::new(&self.ctx, flat[o..o + d].to_vec()))
            .collect())
    }

    /// Concatenates zero-padded residue blocks.
    pub fn flatten(&self, res: &[LinPoly]) -> Result<Vec<FieldElement>> {
        if res.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: res.len(),
            });
        }
        self.check_residues(res, res.len())?;
        Ok(res
            .iter()
            .zip(&self.degrees)
            .flat_map(|(r, &d)| r.padded(d))
            .collect())
    }

    /// Matrix of the left-linear lift on flat words: column `c` holds the
    /// coefficients of the lift of the `c`-th unit word. Built once.
    pub fn lift_matrix(&self) -> &Matrix<FieldElement> {
        self.lift_matrix.get_or_init(|| {
            // The unit word at offset c of block i lifts to
            // X^{q^c} ∘ S_{1,i} ∘ b_i mod h_s; step c by c via X^q ∘ (·).
            let n = self.n();
            let ctx = &self.ctx;
            let xq = LinPoly::monomial(ctx, ctx.one(), 1);
            let hs = self.lcm();
            let mut m = Matrix::filled(n, n, ctx.zero());
            for (i, e) in self.idempotents.iter().enumerate() {
                let mut col = e.clone();
                for c in 0..self.degrees[i] {
                    if c > 0 {
                        col = xq.compose(&col).rem(hs).expect("h_s is nonzero");
                    }
                    for (r, v) in col.padded(n).into_iter().enumerate() {
                        m.set(r, self.offsets[i] + c, v);
                    }
                }
            }
            m
        })
    }

    /// Lift of a flat word, as the coefficient vector of length `n`.
    pub fn lift_flat(&self, flat: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if flat.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: flat.len(),
            });
        }
        Ok(self.lift_matrix().mul_vec(&*self.ctx, flat))
    }
}

/// Two-modulus lift `(r_2∘S_1∘f_1 + r_1∘S_2∘f_2) mod (f_1 ∨_l f_2)`.
pub fn crt_pair(r1: &LinPoly, r2: &LinPoly, f1: &LinPoly, f2: &LinPoly) -> Result<LinPoly> {
    let x = LinPoly::x(f1.context());
    let (s1, s2, g) = f1.rgcd_extended(f2)?;
    if g != x {
        return Err(Error::NotCoprime);
    }
    for (i, (r, f)) in [(r1, f1), (r2, f2)].into_iter().enumerate() {
        if r.qdeg() >= f.qdeg() {
            return Err(Error::ResidueTooLarge {
                index: i + 1,
                qdeg: r.qdeg().unwrap_or(0),
                bound: f.qdeg().unwrap_or(0),
            });
        }
    }
    let g = r2.compose(&s1.compose(f1)).add(&r1.compose(&s2.compose(f2)));
    g.rem(&f1.llcm(f2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankmetric::random_independent;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> Arc<FieldContext> {
        FieldContext::new(2, 1, 10, 1).unwrap()
    }

    #[test]
    fn single_modulus() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = LinPoly::random_monic(&ctx, 4, &mut rng);
        let fam = ModulusFamily::new(vec![f.clone()]).unwrap();
        assert_eq!(fam.n(), 4);
        assert_eq!(fam.lcm(), &f);
        let r = LinPoly::random(&ctx, 4, &mut rng);
        assert_eq!(fam.lift_incremental(std::slice::from_ref(&r)).unwrap(), r);
        assert_eq!(fam.lift_direct(std::slice::from_ref(&r)).unwrap(), r);
    }

    #[test]
    fn gabidulin_family() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = random_independent(&ctx, 6, &mut rng).unwrap();
        let fam = ModulusFamily::new(gabidulin_moduli(&ctx, &pts).unwrap()).unwrap();
        assert_eq!(fam.n(), 6);
        assert_eq!(fam.coeff_subfield_degree(), 10);
        for _ in 0..20 {
            let g = LinPoly::random(&ctx, 9, &mut rng);
            for (z, r) in pts.iter().zip(fam.residues(&g).unwrap()) {
                let expect = LinPoly::monomial(&ctx, ctx.div(&g.eval(z), z).unwrap(), 0);
                assert_eq!(r, expect);
            }
        }
    }

    #[test]
    fn dependent_points_break_the_chain() {
        let ctx = ctx();
        let z = ctx.generator();
        let xi = ctx.add(&ctx.pow(&z, 3), &ctx.one());
        let pts = [z.clone(), xi.clone(), ctx.add(&z, &xi)];
        let err = ModulusFamily::new(gabidulin_moduli(&ctx, &pts).unwrap()).unwrap_err();
        assert_eq!(err, Error::ChainNotCoprime { index: 3 });
    }

    #[test]
    fn invalid_moduli() {
        let ctx = ctx();
        assert_eq!(ModulusFamily::new(vec![]).unwrap_err(), Error::EmptyFamily);
        let bad = LinPoly::monomial(&ctx, ctx.generator(), 2);
        assert_eq!(ModulusFamily::new(vec![bad]).unwrap_err(), Error::InvalidModulus { index: 1 });
        assert_eq!(
            ModulusFamily::new(vec![LinPoly::x(&ctx)]).unwrap_err(),
            Error::InvalidModulus { index: 1 }
        );
    }

    #[test]
    fn pair_lift_and_two_block() {
        let ctx = FieldContext::new(2, 1, 9, 1).unwrap();
        let f = two_block_moduli(&ctx, 3);
        // X^{q^3} ∘ X^{q^6} - (X^{q^9} - X) ∘ X = X
        let lhs = f[0]
            .compose(&LinPoly::monomial(&ctx, ctx.one(), 6))
            .sub(&f[1].compose(&LinPoly::x(&ctx)));
        assert_eq!(lhs, LinPoly::x(&ctx));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = LinPoly::zero(&ctx);
        assert_eq!(crt_pair(&z, &z, &f[0], &f[1]).unwrap(), z);
        for _ in 0..100 {
            let g = LinPoly::random(&ctx, 12, &mut rng);
            let (r1, r2) = (g.rem(&f[0]).unwrap(), g.rem(&f[1]).unwrap());
            assert_eq!(r1, g.truncate(3));
            assert_eq!(crt_pair(&r1, &r2, &f[0], &f[1]).unwrap(), g);
        }
        assert_eq!(
            crt_pair(&z, &z, &f[0], &f[0]).unwrap_err(),
            Error::NotCoprime
        );
    }

    #[test]
    fn lifts_agree_and_roundtrip() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let s = rng.gen_range(2..5);
            let moduli: Vec<_> = (0..s).map(|_| LinPoly::random_monic(&ctx, rng.gen_range(1..4), &mut rng)).collect();
            let Ok(fam) = ModulusFamily::new(moduli.clone()) else {
                continue;
            };
            for _ in 0..10 {
                let g = LinPoly::random(&ctx, fam.n(), &mut rng);
                let res = fam.residues(&g).unwrap();
                assert_eq!(fam.lift_incremental(&res).unwrap(), g);
                assert_eq!(fam.lift_direct(&res).unwrap(), g);
                let flat = fam.flatten(&res).unwrap();
                assert_eq!(fam.unflatten(&flat).unwrap(), res);
                assert_eq!(fam.lift_flat(&flat).unwrap(), g.padded(fam.n()));
                for t in 1..=s {
                    let h = &fam.chain()[t - 1];
                    assert_eq!(fam.lift_prefix(&res, t).unwrap(), g.rem(h).unwrap());
                }
            }
            if s == 2 {
                let res: Vec<_> = fam.degrees().iter().map(|&d| LinPoly::random(&ctx, d, &mut rng)).collect();
                assert_eq!(
                    crt_pair(&res[0], &res[1], &moduli[0], &moduli[1]).unwrap(),
                    fam.lift_incremental(&res).unwrap()
                );
            }
        }
    }

    #[test]
    fn residue_bounds_checked() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts = random_independent(&ctx, 2, &mut rng).unwrap();
        let fam = ModulusFamily::new(gabidulin_moduli(&ctx, &pts).unwrap()).unwrap();
        let big = LinPoly::monomial(&ctx, ctx.one(), 1);
        assert!(matches!(
            fam.lift_incremental(&[big.clone(), big]),
            Err(Error::ResidueTooLarge { index: 1, .. })
        ));
        assert!(matches!(fam.lift_direct(&[]), Err(Error::LengthMismatch { .. })));
    }
}
