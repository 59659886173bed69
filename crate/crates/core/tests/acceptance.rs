//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use qcrt_core::analysis::{binomial_stddev, decoding_radius, success_probability};
use qcrt_core::code::{moore_matrix, same_row_space, scale_columns, two_block_generator};
use qcrt_core::crt::{gabidulin_moduli, kernel_modulus, two_block_moduli};
use qcrt_core::linalg;
use qcrt_core::rankmetric::{random_error, random_independent, rank_weight, subspace_product, support};
use qcrt_core::sim::{self, balanced_profile, generate_family, ExperimentConfig, ExperimentRow, Mode};
use qcrt_core::{decode, decode_extended, CodeParams, CodeSpec, Error, FieldContext, LinPoly, ModulusFamily, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

/// Two-sided band in binomial standard deviations.
const SIGMAS: f64 = 3.0;

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Self { ok, detail: detail.into() }
    }
}

fn within_band(row: &ExperimentRow) -> bool {
    (row.empirical - row.theoretical).abs() <= SIGMAS * row.stddev
}

fn rows_summary(rows: &[ExperimentRow]) -> String {
    rows.iter()
        .map(|r| format!("r={} emp={:.4} th={:.4}", r.r, r.empirical, r.theoretical))
        .collect::<Vec<_>>()
        .join("; ")
}

fn ring_suite() -> Verdict {
    let ctx = FieldContext::new(2, 1, 12, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut bad = 0;
    for _ in 0..1000 {
        let a = LinPoly::random(&ctx, rng.gen_range(1..=31), &mut rng);
        let b = loop {
            let b = LinPoly::random(&ctx, rng.gen_range(1..=31), &mut rng);
            if !b.is_zero() {
                break b;
            }
        };
        let c = LinPoly::random(&ctx, rng.gen_range(1..=31), &mut rng);
        let (q, r) = a.rquorem(&b).unwrap();
        let div_ok = q.compose(&b).add(&r) == a && r.qdeg().is_none_or(|d| d < b.qdeg().unwrap());
        let (u, v, g) = b.rgcd_extended(&a).unwrap();
        let bez_ok = u.compose(&b).add(&v.compose(&a)) == g
            && a.right_divisible_by(&g).unwrap()
            && b.right_divisible_by(&g).unwrap();
        let lcm_ok = a.is_zero()
            || {
                let l = a.llcm(&b).unwrap();
                l.right_divisible_by(&a).unwrap() && l.right_divisible_by(&b).unwrap()
            };
        let ring_ok = a.compose(&b).compose(&c) == a.compose(&b.compose(&c))
            && a.compose(&b.add(&c)) == a.compose(&b).add(&a.compose(&c))
            && a.add(&b).compose(&c) == a.compose(&c).add(&b.compose(&c));
        if !(div_ok && bez_ok && lcm_ok && ring_ok) {
            bad += 1;
        }
    }
    Verdict::new(bad == 0, format!("{} of 1000 pairs failed", bad))
}

fn kernel_remainder() -> Verdict {
    let mut bad = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let fields = [FieldContext::new(2, 1, 12, 1).unwrap(), FieldContext::new(3, 2, 5, 1).unwrap()];
    for t in 0..1000 {
        let ctx = &fields[t % 2];
        let p = LinPoly::random(ctx, rng.gen_range(1..25), &mut rng);
        let z = ctx.random_nonzero(&mut rng);
        let r = p.rem(&kernel_modulus(ctx, &z).unwrap()).unwrap();
        let expect = LinPoly::monomial(ctx, ctx.mul(&ctx.inv(&z).unwrap(), &p.eval(&z)), 0);
        if r != expect {
            bad += 1;
        }
    }
    Verdict::new(bad == 0, format!("{} of 1000 remainders differ", bad))
}

fn crt_roundtrip() -> Verdict {
    let ctx = FieldContext::new(2, 1, 24, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut bad = 0;
    let mut total = 0;
    for s in 2..=8 {
        let fam = generate_family(&ctx, &balanced_profile(40, s).unwrap(), 1, 10_000, &mut rng).unwrap();
        let per = if s == 8 { 1000 - 6 * 143 } else { 143 };
        for _ in 0..per {
            total += 1;
            let g = LinPoly::random(&ctx, 40, &mut rng);
            let res = fam.residues(&g).unwrap();
            let inc = fam.lift_incremental(&res).unwrap();
            let dir = fam.lift_direct(&res).unwrap();
            let rand_res: Vec<_> = fam.degrees().iter().map(|&d| LinPoly::random(&ctx, d, &mut rng)).collect();
            let back = fam.residues(&fam.lift_incremental(&rand_res).unwrap()).unwrap();
            let flat = fam.lift_flat(&fam.flatten(&res).unwrap()).unwrap();
            if inc != g || dir != g || back != rand_res || LinPoly::new(&ctx, flat) != g {
                bad += 1;
            }
        }
    }
    let z = ctx.random_nonzero(&mut rng);
    let xi = loop {
        let x = ctx.random_nonzero(&mut rng);
        if Subspace::span(&ctx, [&z, &x]).dim() == 2 {
            break x;
        }
    };
    let moduli = gabidulin_moduli(&ctx, &[z.clone(), xi.clone(), ctx.add(&z, &xi)]).unwrap();
    let rejected = ModulusFamily::new(moduli).unwrap_err() == Error::ChainNotCoprime { index: 3 };
    Verdict::new(
        bad == 0 && rejected && total == 1000,
        format!("{} of {} round trips failed; dependent family rejected: {}", bad, total, rejected),
    )
}

fn support_inclusion() -> Verdict {
    let ctx = FieldContext::new(2, 1, 12, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let prof = balanced_profile(24, 4).unwrap();
    let fam1 = generate_family(&ctx, &prof, 1, 10_000, &mut rng).unwrap();
    let fam2 = generate_family(&ctx, &prof, 2, 10_000, &mut rng).unwrap();
    let gf4 = Subspace::subfield(&ctx, 2).unwrap();
    let (mut bad1, mut bad2) = (0, 0);
    for _ in 0..1000 {
        let r = rng.gen_range(1..=6);
        let e = random_error(&ctx, 24, r, &mut rng).unwrap();
        let se = support(&ctx, &e);
        let l1 = fam1.lift_flat(&e).unwrap();
        if !support(&ctx, &l1).is_subspace_of(&se) {
            bad1 += 1;
        }
        let l2 = support(&ctx, &fam2.lift_flat(&e).unwrap());
        if !l2.is_subspace_of(&subspace_product(&se, &gf4)) || l2.dim() > 2 * rank_weight(&ctx, &e) {
            bad2 += 1;
        }
    }
    let degrees_ok = fam1.coeff_subfield_degree() == 1 && fam2.coeff_subfield_degree() == 2;
    Verdict::new(
        bad1 == 0 && bad2 == 0 && degrees_ok,
        format!("l=1 violations {}, l=2 violations {} over 1000 errors", bad1, bad2),
    )
}

fn code_structure() -> Verdict {
    let ctx = FieldContext::new(2, 1, 8, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut bad = 0;
    for _ in 0..50 {
        let s = rng.gen_range(2..=4);
        let prof: Vec<usize> = (0..s).map(|_| rng.gen_range(2..=5)).collect();
        let n: usize = prof.iter().sum();
        let fam = Arc::new(generate_family(&ctx, &prof, 8, 10_000, &mut rng).unwrap());
        let k = rng.gen_range(1..n - 1);
        let alpha = rng.gen_range(0..n - k);
        let spec = CodeSpec::new(fam, k, LinPoly::random_monic(&ctx, alpha, &mut rng)).unwrap();
        let g = spec.generator_matrix();
        let h = spec.parity_check_matrix();
        let ok = h.mul(&*ctx, &g.transpose()).is_zero(&*ctx)
            && linalg::rank(&*ctx, g) == k
            && linalg::rank(&*ctx, h) == n - k;
        if !ok {
            bad += 1;
        }
    }

    let ctx12 = FieldContext::new(2, 1, 12, 1).unwrap();
    let pts = random_independent(&ctx12, 12, &mut rng).unwrap();
    let fam = Arc::new(ModulusFamily::new(gabidulin_moduli(&ctx12, &pts).unwrap()).unwrap());
    let inv: Vec<_> = pts.iter().map(|z| ctx12.inv(z).unwrap()).collect();
    let mut gab_ok = true;
    for k in 2..=6 {
        let spec = CodeSpec::new(fam.clone(), k, LinPoly::x(&ctx12)).unwrap();
        let moore = scale_columns(&ctx12, &moore_matrix(&ctx12, &pts, k), &inv);
        gab_ok &= same_row_space(&ctx12, spec.generator_matrix(), &moore);
    }

    let ctx9 = FieldContext::new(2, 1, 9, 1).unwrap();
    let fam = Arc::new(ModulusFamily::new(two_block_moduli(&ctx9, 3)).unwrap());
    let mut tb_ok = true;
    for (k, alpha) in [(2, 1), (4, 3), (5, 6), (3, 8)] {
        let a = LinPoly::random_monic(&ctx9, alpha, &mut rng);
        let spec = CodeSpec::new(fam.clone(), k, a.clone()).unwrap();
        tb_ok &= spec.generator_matrix() == &two_block_generator(&ctx9, &a, 3, k);
    }
    Verdict::new(
        bad == 0 && gab_ok && tb_ok,
        format!("{} of 50 specs failed; gabidulin rows {}; two-block rows {}", bad, gab_ok, tb_ok),
    )
}

fn support_config(m: usize, r_min: usize, r_max: usize, trials: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(CodeParams::new(40, 8, 4, 2, m, 1).unwrap(), trials, r_min, r_max, seed);
    cfg.mode = Mode::Support;
    cfg
}

fn probability_vs_monte_carlo() -> Verdict {
    // Rank 25 and 26 need m ≥ 26, so the main rows run at m = 48.
    let main = sim::run_experiment(&support_config(48, 24, 26, 10_000, 106)).unwrap();
    let main_ok = main.rows.iter().all(within_band);
    let low = sim::run_experiment(&support_config(24, 20, 24, 10_000, 107)).unwrap();
    let high = sim::run_experiment(&support_config(48, 20, 24, 10_000, 108)).unwrap();
    let mut indep = true;
    let mut detail = Vec::new();
    for r in [20, 22, 24] {
        let a = &low.rows[r - 20];
        let b = &high.rows[r - 20];
        let sa = binomial_stddev(a.empirical, a.trials);
        let sb = binomial_stddev(b.empirical, b.trials);
        let same = (a.empirical - b.empirical).abs() <= SIGMAS * (sa * sa + sb * sb).sqrt();
        indep &= same && within_band(a) && within_band(b);
        detail.push(format!("r={} m24={:.4} m48={:.4}", r, a.empirical, b.empirical));
    }
    Verdict::new(
        main_ok && indep,
        format!("{}; {}", rows_summary(&main.rows), detail.join("; ")),
    )
}

fn decode_config(m: usize, l: usize, r_min: usize, r_max: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(CodeParams::new(40, 8, 4, 2, m, l).unwrap(), 1000, r_min, r_max, seed)
}

fn end_to_end() -> Verdict {
    let cfg = decode_config(24, 1, 1, 8, 109);
    let radii = decoding_radius(&cfg.params);
    let radii_ok = (radii.system_bound, radii.support_bound, radii.unique_radius) == (8, 28, 16);
    let exp = sim::run_experiment(&cfg).unwrap();
    let rate_ok = exp.rows.iter().all(|r| r.empirical >= 0.99);
    // Rank 29 does not exist in GF(2^24)^40; the same n, k, α at m = 48.
    let beyond = sim::run_experiment(&decode_config(48, 1, 29, 29, 110)).unwrap();
    let zero_ok = beyond.rows[0].successes == 0;
    Verdict::new(
        radii_ok && rate_ok && zero_ok,
        format!("{}; r=29 at m=48: {}/1000", rows_summary(&exp.rows), beyond.rows[0].successes),
    )
}

fn extended_decoder() -> Verdict {
    let cfg = decode_config(24, 2, 1, 4, 111);
    let spec = sim::build_spec(&cfg).unwrap();
    let l_ok = spec.family().coeff_subfield_degree() == 2 && sim::admissible_radius(&spec) == 4;
    let exp = sim::run_with_spec(&cfg, &spec).unwrap();
    let trend_ok = exp
        .rows
        .iter()
        .all(|r| r.empirical <= 1.0 && r.empirical >= r.theoretical - SIGMAS * r.stddev);

    let spec1 = sim::build_spec(&decode_config(24, 1, 0, 8, 112)).unwrap();
    let ctx = spec1.context().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(113);
    let mut mismatches = 0;
    for _ in 0..200 {
        let r = rng.gen_range(0..=10);
        let p = LinPoly::random(&ctx, 8, &mut rng);
        let e = random_error(&ctx, 40, r, &mut rng).unwrap();
        let y = spec1.encode(&p).unwrap().add(&ctx, &e);
        if decode(&spec1, &y, 8).unwrap() != decode_extended(&spec1, &y, 8).unwrap() {
            mismatches += 1;
        }
    }
    Verdict::new(
        l_ok && trend_ok && mismatches == 0,
        format!("{}; paired l=1 mismatches {}/200", rows_summary(&exp.rows), mismatches),
    )
}

fn large_parameters() -> Verdict {
    let params = CodeParams::new(200, 50, 50, 5, 80, 1).unwrap();
    let radii = decoding_radius(&params);
    let radii_ok = (radii.system_bound, radii.support_bound, radii.unique_radius) == (40, 100, 75);
    let table: Vec<f64> = (0..=100).map(|r| success_probability(&params, r)).collect();
    let mono = table.windows(2).all(|w| w[1] <= w[0]);
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new(params, 100, 10, 10, 114);
    cfg.mode = Mode::Support;
    let spec = sim::build_spec(&cfg).unwrap();
    let mut rows = Vec::new();
    for r in [10, 20, 30, 40] {
        cfg.r_min = r;
        cfg.r_max = r;
        rows.extend(sim::run_with_spec(&cfg, &spec).unwrap().rows);
    }
    let elapsed = start.elapsed();
    let band = rows.iter().all(within_band);
    Verdict::new(
        radii_ok && mono && band && elapsed < Duration::from_secs(600),
        format!("{}; simulate {:.1?}", rows_summary(&rows), elapsed),
    )
}

fn reproducibility() -> Verdict {
    let mut cfg = decode_config(24, 1, 0, 8, 115);
    cfg.trials = 200;
    let csv = |cfg: &ExperimentConfig| {
        let mut buf = Vec::new();
        sim::write_csv(&sim::run_experiment(cfg).unwrap().rows, &mut buf).unwrap();
        buf
    };
    let a = csv(&cfg);
    let b = csv(&cfg);
    Verdict::new(a == b && !a.is_empty(), format!("{} CSV bytes, identical: {}", a.len(), a == b))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("ring algebra", ring_suite),
        ("remainder by a kernel modulus", kernel_remainder),
        ("crt round trip", crt_roundtrip),
        ("support inclusion", support_inclusion),
        ("code structure", code_structure),
        ("support capture vs formula", probability_vs_monte_carlo),
        ("end-to-end decoding", end_to_end),
        ("extended decoder", extended_decoder),
        ("large parameter smoke test", large_parameters),
        ("reproducibility", reproducibility),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let v = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Verdict::new(false, "panicked"));
        let tag = if v.ok { "PASS" } else { "FAIL" };
        println!("{} criterion {:>2} {} ({:.1?}): {}", tag, id, name, start.elapsed(), v.detail);
        if !v.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
