//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use qcrt_core::crt::ModulusFamily;
use qcrt_core::sim::{balanced_profile, generate_family};
use qcrt_core::{CodeSpec, FieldContext, LinPoly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Family of `s` balanced blocks summing to `n` over GF(q^m), coefficients in GF(q).
pub fn family(q: u64, m: usize, n: usize, s: usize, seed: u64) -> ModulusFamily {
    let ctx = FieldContext::from_q(q, m, 1).expect("valid field");
    generate_family(&ctx, &balanced_profile(n, s).expect("valid profile"), 1, 100_000, &mut rng(seed))
        .expect("family found")
}

/// Code with a random monic `A` of q-degree `alpha`.
pub fn spec(fam: ModulusFamily, k: usize, alpha: usize, seed: u64) -> CodeSpec {
    let ctx = fam.context().clone();
    let a = LinPoly::random_monic(&ctx, alpha, &mut rng(seed));
    CodeSpec::new(Arc::new(fam), k, a).expect("valid spec")
}
