//! Syndrome decoding through the CRT lift.
//!
//! With `K = k + α`, the lift of a received word is `Y = P∘A + E`, where
//! `E` is the lift of the error. The coefficients of `Y` at indices `≥ K`
//! belong to `E` alone and, with good probability, span the support of all
//! of `E`. The low part of the error is then pinned by the subcode parity
//! equations, expanded over GF(p) in a basis of that support.

use serde::Serialize;

use crate::code::{CodeSpec, Codeword};
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::linalg::{self, Matrix, Solution};
use crate::linpoly::LinPoly;
use crate::rankmetric::{self, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FailureReason {
    /// The syndrome system is inconsistent: the observed support misses
    /// part of the error.
    SupportDeficient,
    /// The syndrome system does not pin the low error part.
    SystemUnderdetermined,
    /// The corrected polynomial is not a right multiple of `A`.
    ResidualDivision,
    /// The re-encoded word is farther than `r_max` from the received one.
    DistanceCheck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success { message: LinPoly, error_weight: usize },
    Failure(FailureReason),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    /// Dimension of the support of the high part of the lifted word.
    pub support_dim: usize,
    pub r_max: usize,
    /// Degree `l` of the subfield holding the modulus coefficients.
    pub l: usize,
    /// `l·r_max`, the dimension bound of `supp(e)·GF(q^l)`.
    pub support_budget: usize,
    /// GF(p) unknowns and equations of the syndrome system.
    pub unknowns: usize,
    pub equations: usize,
    /// Rank distance between the received word and the re-encoded output.
    pub residual_rank_distance: Option<usize>,
    /// Sum-rank distance over the family partition, for reference.
    pub residual_sum_rank_distance: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub outcome: Outcome,
    pub diagnostics: Diagnostics,
}

impl DecodeResult {
    pub fn message(&self) -> Option<&LinPoly> {
        match &self.outcome {
            Outcome::Success { message, .. } => Some(message),
            Outcome::Failure(_) => None,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self.outcome, Outcome::Success { .. })
    }
}

/// `(⌊mα/(lK)⌋, ⌊(n−K)/l⌋)`.
fn limits(spec: &CodeSpec, l: usize) -> (usize, usize) {
    let m = spec.context().m();
    let ka = spec.k_alpha();
    (m * spec.alpha() / (l * ka), (spec.n() - ka) / l)
}

/// Decoding for families with coefficients in GF(q).
///
/// Requires `r_max ≤ min(⌊mα/K⌋, n − K)`.
pub fn decode(spec: &CodeSpec, y: &Codeword, r_max: usize) -> Result<DecodeResult> {
    let l = spec.family().coeff_subfield_degree();
    if l != 1 {
        return Err(Error::InvalidParams(format!(
            "moduli have coefficients in GF(q^{l}); use decode_extended"
        )));
    }
    run(spec, y, r_max, 1)
}

/// Decoding for families with coefficients in GF(q^l), `l` the smallest
/// such degree. Requires `r_max ≤ min(⌊mα/(lK)⌋, ⌊(n − K)/l⌋)`.
pub fn decode_extended(spec: &CodeSpec, y: &Codeword, r_max: usize) -> Result<DecodeResult> {
    let l = spec.family().coeff_subfield_degree();
    run(spec, y, r_max, l)
}

fn run(spec: &CodeSpec, y: &Codeword, r_max: usize, l: usize) -> Result<DecodeResult> {
    let ctx = spec.context();
    let n = spec.n();
    if y.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: y.len() });
    }
    let (sys, sup) = limits(spec, l);
    let limit = sys.min(sup);
    if r_max > limit {
        return Err(Error::RadiusOutOfRange { r_max, limit });
    }
    let ka = spec.k_alpha();
    let mut diag = Diagnostics {
        r_max,
        l,
        support_budget: l * r_max,
        ..Diagnostics::default()
    };
    let fail = |reason, diag: Diagnostics| {
        Ok(DecodeResult {
            outcome: Outcome::Failure(reason),
            diagnostics: diag,
        })
    };

    let lifted = spec.family().lift_flat(y.symbols())?;
    let (low, high) = lifted.split_at(ka);
    let supp = Subspace::span(ctx, high);
    let rhat = supp.dim();
    diag.support_dim = rhat;
    let e = ctx.e();
    diag.unknowns = ka * e * rhat;
    diag.equations = spec.alpha() * ctx.degree();
    if rhat * ka > ctx.m() * spec.alpha() {
        return fail(FailureReason::SystemUnderdetermined, diag);
    }

    let low_err = match solve_low_error(spec, low, &supp) {
        Solution::Unique(v) => v,
        Solution::Inconsistent => return fail(FailureReason::SupportDeficient, diag),
        Solution::Underdetermined => return fail(FailureReason::SystemUnderdetermined, diag),
    };
    let pa: Vec<FieldElement> = low.iter().zip(&low_err).map(|(a, b)| ctx.sub(a, b)).collect();
    let (msg, rem) = LinPoly::new(ctx, pa).rquorem(spec.a())?;
    if !rem.is_zero() {
        return fail(FailureReason::ResidualDivision, diag);
    }

    let c = spec.encode(&msg)?;
    let diff = y.sub(ctx, c.symbols());
    let dist = rankmetric::rank_weight(ctx, diff.symbols());
    diag.residual_rank_distance = Some(dist);
    diag.residual_sum_rank_distance = Some(rankmetric::sum_rank_weight(ctx, diff.symbols(), &spec.partition())?);
    if dist > r_max {
        return fail(FailureReason::DistanceCheck, diag);
    }
    Ok(DecodeResult {
        outcome: Outcome::Success {
            message: msg,
            error_weight: dist,
        },
        diagnostics: diag,
    })
}

/// Solves `H_A·E_low = H_A·low` with every coordinate of `E_low` in `supp`.
/// Unknowns are GF(p) coordinates in the canonical GF(p)-basis of `supp`.
fn solve_low_error(spec: &CodeSpec, low: &[FieldElement], supp: &Subspace) -> Solution<FieldElement> {
    let ctx = spec.context();
    let f = ctx.prime_field();
    let ha = spec.subcode_parity();
    let ka = spec.k_alpha();
    let beta = supp.prime_basis();
    let b = beta.len();
    let d = ctx.degree();
    let syndrome = ha.mul_vec(&**ctx, low);

    let mut a = Matrix::filled(ha.rows() * d, ka * b, 0u64);
    let mut rhs = Vec::with_capacity(ha.rows() * d);
    for row in 0..ha.rows() {
        for j in 0..ka {
            let h = ha.get(row, j);
            if ctx.is_zero(h) {
                continue;
            }
            for (t, bt) in beta.iter().enumerate() {
                let prod = ctx.mul(h, bt);
                for r in 0..d {
                    a.set(row * d + r, j * b + t, ctx.coord(&prod, r));
                }
            }
        }
        rhs.extend(ctx.coords(&syndrome[row]));
    }
    match linalg::solve(f, &a, &rhs) {
        Solution::Unique(x) => Solution::Unique(
            (0..ka)
                .map(|j| {
                    let mut acc = ctx.zero();
                    for (t, bt) in beta.iter().enumerate() {
                        acc = ctx.add(&acc, &ctx.scale(bt, x[j * b + t]));
                    }
                    acc
                })
                .collect(),
        ),
        Solution::Inconsistent => Solution::Inconsistent,
        Solution::Underdetermined => Solution::Underdetermined,
    }
}
