//! Reduced property suites, one line per property.

use std::sync::Arc;

use qcrt_core::crt::kernel_modulus;
use qcrt_core::linalg;
use qcrt_core::rankmetric::{random_error, support};
use qcrt_core::sim::{balanced_profile, generate_family};
use qcrt_core::{analysis, CodeParams, CodeSpec, FieldContext, LinPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn(usize, &mut ChaCha8Rng) -> bool;

fn ring_laws(trials: usize, rng: &mut ChaCha8Rng) -> bool {
    let ctx = FieldContext::new(2, 1, 12, 1).unwrap();
    (0..trials).all(|_| {
        let a = LinPoly::random(&ctx, rng.gen_range(1..16), rng);
        let b = LinPoly::random_monic(&ctx, rng.gen_range(0..15), rng);
        let c = LinPoly::random(&ctx, rng.gen_range(1..16), rng);
        let (q, r) = a.rquorem(&b).unwrap();
        let (u, v, g) = a.rgcd_extended(&b).unwrap();
        q.compose(&b).add(&r) == a
            && u.compose(&a).add(&v.compose(&b)) == g
            && a.compose(&b).compose(&c) == a.compose(&b.compose(&c))
            && (a.is_zero() || {
                let l = a.llcm(&b).unwrap();
                l.right_divisible_by(&a).unwrap() && l.right_divisible_by(&b).unwrap()
            })
    })
}

fn kernel_remainder(trials: usize, rng: &mut ChaCha8Rng) -> bool {
    let ctx = FieldContext::new(3, 1, 7, 1).unwrap();
    (0..trials).all(|_| {
        let p = LinPoly::random(&ctx, rng.gen_range(1..20), rng);
        let z = ctx.random_nonzero(rng);
        let r = p.rem(&kernel_modulus(&ctx, &z).unwrap()).unwrap();
        r == LinPoly::monomial(&ctx, ctx.mul(&ctx.inv(&z).unwrap(), &p.eval(&z)), 0)
    })
}

fn crt_roundtrip(trials: usize, rng: &mut ChaCha8Rng) -> bool {
    let ctx = FieldContext::new(2, 1, 16, 1).unwrap();
    let fam = generate_family(&ctx, &balanced_profile(24, 4).unwrap(), 1, 10_000, rng).unwrap();
    (0..trials).all(|_| {
        let g = LinPoly::random(&ctx, 24, rng);
        let res = fam.residues(&g).unwrap();
        fam.lift_incremental(&res).unwrap() == g && fam.lift_direct(&res).unwrap() == g
    })
}

fn support_inclusion(trials: usize, rng: &mut ChaCha8Rng) -> bool {
    let ctx = FieldContext::new(2, 1, 16, 1).unwrap();
    let fam = generate_family(&ctx, &balanced_profile(24, 3).unwrap(), 1, 10_000, rng).unwrap();
    (0..trials).all(|_| {
        let e = random_error(&ctx, 24, rng.gen_range(1..8), rng).unwrap();
        support(&ctx, &fam.lift_flat(&e).unwrap()).is_subspace_of(&support(&ctx, &e))
    })
}

fn code_structure(trials: usize, rng: &mut ChaCha8Rng) -> bool {
    let ctx = FieldContext::new(2, 1, 8, 1).unwrap();
    (0..trials.min(20)).all(|_| {
        let fam = Arc::new(generate_family(&ctx, &[3, 4, 3], 8, 10_000, rng).unwrap());
        let k = rng.gen_range(1..6);
        let spec = CodeSpec::new(fam, k, LinPoly::random_monic(&ctx, rng.gen_range(0..4), rng)).unwrap();
        let (g, h) = (spec.generator_matrix(), spec.parity_check_matrix());
        h.mul(&*ctx, &g.transpose()).is_zero(&*ctx)
            && linalg::rank(&*ctx, g) == k
            && linalg::rank(&*ctx, h) == 10 - k
    })
}

fn probability_monotone(_: usize, _: &mut ChaCha8Rng) -> bool {
    let p = CodeParams::new(200, 50, 50, 5, 80, 1).unwrap();
    let r = analysis::decoding_radius(&p);
    (r.system_bound, r.support_bound, r.unique_radius) == (40, 100, 75)
        && (0..100).all(|r| analysis::success_probability(&p, r + 1) <= analysis::success_probability(&p, r))
}

pub fn run(trials: usize, seed: u64) -> bool {
    let checks: [(&str, Check); 6] = [
        ("ring laws", ring_laws),
        ("kernel remainder", kernel_remainder),
        ("crt round trip", crt_roundtrip),
        ("support inclusion", support_inclusion),
        ("code structure", code_structure),
        ("probability monotone", probability_monotone),
    ];
    let mut all = true;
    for (i, (name, f)) in checks.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let ok = f(trials, &mut rng);
        println!("{} {}", if ok { "PASS" } else { "FAIL" }, name);
        all &= ok;
    }
    all
}
