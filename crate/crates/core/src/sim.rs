//! Monte Carlo experiments: family generation, encode / corrupt / decode
//! trials, theory comparison, CSV and SVG output.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{self, CodeParams, Radii};
use crate::code::{CodeSpec, Codeword};
use crate::crt::{gabidulin_moduli, two_block_moduli, ModulusFamily};
use crate::decoder;
use crate::error::{Error, Result};
use crate::format::{read_json, FamilyFile};
use crate::gf::FieldContext;
use crate::linpoly::LinPoly;
use crate::rankmetric::{self, random_error, random_independent, Subspace};

/// What a trial counts as success.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Full decode; success is exact message recovery.
    #[default]
    Decode,
    /// Lift the error only; success is `dim supp(Ē) = dim supp(E)`.
    Support,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySource {
    /// Rejection-sampled family with the default or configured profile.
    #[default]
    Generated,
    /// `X^{q^l}`, `X^{q^m} − X`.
    TwoBlock { l: usize },
    /// A family JSON file.
    File { path: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub params: CodeParams,
    pub trials: usize,
    pub r_min: usize,
    pub r_max: usize,
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub family: FamilySource,
    /// Modulus q-degrees; defaults to all ones when `l = m`, otherwise
    /// `blocks` balanced blocks.
    #[serde(default)]
    pub profile: Option<Vec<usize>>,
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    /// Candidate moduli drawn before giving up.
    #[serde(default = "default_attempts")]
    pub family_attempts: usize,
    /// Adds a `within_radius` CSV column counting decoder successes.
    #[serde(default)]
    pub within_radius: bool,
}

fn default_blocks() -> usize {
    4
}

fn default_attempts() -> usize {
    10_000
}

impl ExperimentConfig {
    pub fn new(params: CodeParams, trials: usize, r_min: usize, r_max: usize, seed: u64) -> Self {
        Self {
            params,
            trials,
            r_min,
            r_max,
            seed,
            mode: Mode::Decode,
            family: FamilySource::Generated,
            profile: None,
            blocks: default_blocks(),
            family_attempts: default_attempts(),
            within_radius: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        if self.r_min > self.r_max || self.r_max > self.params.n {
            return Err(Error::InvalidParams("r range must lie within [0, n]".into()));
        }
        Ok(())
    }

    /// Degree profile of the generated family.
    pub fn degree_profile(&self) -> Result<Vec<usize>> {
        let n = self.params.n;
        let profile = match &self.profile {
            Some(p) => p.clone(),
            None if self.params.l == self.params.m => vec![1; n],
            None => balanced_profile(n, self.blocks)?,
        };
        if profile.iter().sum::<usize>() != n || profile.contains(&0) {
            return Err(Error::InvalidParams("profile must be positive and sum to n".into()));
        }
        Ok(profile)
    }
}

/// Blocks of q-degree `⌈n/s⌉`, the last one taking the remainder.
pub fn balanced_profile(n: usize, s: usize) -> Result<Vec<usize>> {
    if s == 0 || s > n {
        return Err(Error::InvalidParams("block count must lie in 1..=n".into()));
    }
    let d = n.div_ceil(s);
    let mut out = Vec::new();
    let mut left = n;
    while left > 0 {
        let t = d.min(left);
        out.push(t);
        left -= t;
    }
    Ok(out)
}

/// One result line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub r: usize,
    pub trials: usize,
    pub successes: usize,
    pub empirical: f64,
    pub theoretical: f64,
    pub stddev: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within_radius: Option<usize>,
}

impl ExperimentRow {
    /// `(system_bound, support_bound, unique_radius)` exceeded by `r`.
    pub fn crossed(&self, radii: &Radii) -> (bool, bool, bool) {
        (
            self.r > radii.system_bound,
            self.r > radii.support_bound,
            self.r > radii.unique_radius,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub rows: Vec<ExperimentRow>,
    pub radii: Radii,
}

/// Stream seed for `(seed, r, trial)`.
pub fn trial_seed(seed: u64, r: u64, trial: u64) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    mix(mix(mix(seed) ^ r) ^ trial)
}

/// Random monic modulus of q-degree `d` with coefficients in GF(q^l).
fn random_modulus<R: Rng + ?Sized>(ctx: &Arc<FieldContext>, d: usize, l: usize, rng: &mut R) -> Result<LinPoly> {
    let mut c = (0..d)
        .map(|_| ctx.random_in_subfield(l, rng))
        .collect::<Result<Vec<_>>>()?;
    c.push(ctx.one());
    Ok(LinPoly::new(ctx, c))
}

/// Draws per modulus before the partial family is discarded.
const RESTART_AFTER: usize = 256;

/// Rejection sampling of a chain-coprime family with the given q-degree
/// profile and coefficients in GF(q^l). Each modulus is redrawn until it is
/// coprime with the lcm of its predecessors; a modulus that stays stuck
/// restarts the whole family, since early choices can leave no room.
pub fn generate_family<R: Rng + ?Sized>(
    ctx: &Arc<FieldContext>,
    profile: &[usize],
    l: usize,
    attempts: usize,
    rng: &mut R,
) -> Result<ModulusFamily> {
    if profile.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if l == ctx.m() && profile.iter().all(|&d| d == 1) && profile.len() <= ctx.m() {
        let pts = random_independent(ctx, profile.len(), rng)?;
        return ModulusFamily::new(gabidulin_moduli(ctx, &pts)?);
    }
    let x = LinPoly::x(ctx);
    let mut used = 0;
    let mut moduli: Vec<LinPoly> = Vec::with_capacity(profile.len());
    let mut h: Option<LinPoly> = None;
    let mut stuck = 0;
    while moduli.len() < profile.len() {
        if used == attempts {
            return Err(Error::FamilySearchExhausted { attempts });
        }
        used += 1;
        let f = random_modulus(ctx, profile[moduli.len()], l, rng)?;
        let next = match &h {
            None => Some(f.clone()),
            Some(h) if h.rgcd(&f)? == x => Some(h.llcm(&f)?),
            Some(_) => None,
        };
        match next {
            Some(next) => {
                h = Some(next);
                moduli.push(f);
                stuck = 0;
            }
            None => {
                stuck += 1;
                if stuck == RESTART_AFTER {
                    moduli.clear();
                    h = None;
                    stuck = 0;
                }
            }
        }
    }
    ModulusFamily::new(moduli)
}

/// Builds the code for a configuration: family, then a uniformly random
/// monic `A` of q-degree `α` over GF(q^m).
pub fn build_spec(cfg: &ExperimentConfig) -> Result<CodeSpec> {
    cfg.validate()?;
    let p = &cfg.params;
    let ctx = FieldContext::from_q(p.q, p.m, p.l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, u64::MAX, u64::MAX));
    let fam = match &cfg.family {
        FamilySource::Generated => generate_family(&ctx, &cfg.degree_profile()?, p.l, cfg.family_attempts, &mut rng)?,
        FamilySource::TwoBlock { l } => ModulusFamily::new(two_block_moduli(&ctx, *l))?,
        FamilySource::File { path } => {
            let file: FamilyFile = read_json(path)?;
            let fam = file.load()?;
            if fam.context().p() != ctx.p() || fam.context().e() != ctx.e() || fam.context().m() != ctx.m() {
                return Err(Error::ContextMismatch);
            }
            fam
        }
    };
    if fam.n() != p.n {
        return Err(Error::InvalidParams(format!("family has n = {}, config says {}", fam.n(), p.n)));
    }
    let ctx = fam.context().clone();
    let a = LinPoly::random_monic(&ctx, p.alpha, &mut rng);
    CodeSpec::new(Arc::new(fam), p.k, a)
}

/// Outcome of one trial: (success, decoder reported success).
fn trial(spec: &CodeSpec, mode: Mode, r: usize, r_max: usize, rng: &mut ChaCha8Rng) -> Result<(bool, bool)> {
    let ctx = spec.context();
    let n = spec.n();
    let e = random_error(ctx, n, r, rng)?;
    match mode {
        Mode::Support => {
            let lifted = spec.family().lift_flat(&e)?;
            let full = Subspace::span(ctx, &lifted);
            let high = Subspace::span(ctx, &lifted[spec.k_alpha()..]);
            let ok = high.dim() == full.dim();
            Ok((ok, ok))
        }
        Mode::Decode => {
            let p = LinPoly::random(ctx, spec.k(), rng);
            let y = spec.encode(&p)?.add(ctx, &e);
            let res = if spec.family().coeff_subfield_degree() == 1 {
                decoder::decode(spec, &y, r_max)?
            } else {
                decoder::decode_extended(spec, &y, r_max)?
            };
            Ok((res.message() == Some(&p), res.is_success()))
        }
    }
}

/// Largest radius the decoder accepts for this code.
pub fn admissible_radius(spec: &CodeSpec) -> usize {
    let l = spec.family().coeff_subfield_degree();
    let m = spec.context().m();
    let ka = spec.k_alpha();
    (m * spec.alpha() / (l * ka)).min((spec.n() - ka) / l)
}

/// Theory value for a row: the closed form for `l = 1`, the `r·l` product
/// otherwise (zero where undefined).
pub fn theoretical(p: &CodeParams, r: usize) -> f64 {
    if p.l == 1 {
        analysis::success_probability(p, r)
    } else {
        analysis::success_probability_bound(p, r).unwrap_or(0.0)
    }
}

/// Runs every `r` in the configured range against one code.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    let spec = build_spec(cfg)?;
    run_with_spec(cfg, &spec)
}

pub fn run_with_spec(cfg: &ExperimentConfig, spec: &CodeSpec) -> Result<Experiment> {
    cfg.validate()?;
    let ctx = spec.context();
    let max_r = ctx.m().min(spec.n());
    if cfg.r_max > max_r {
        return Err(Error::RankOutOfRange { r: cfg.r_max, max: max_r });
    }
    // Build shared caches once, before the workers start.
    spec.family().lift_matrix();
    if cfg.mode == Mode::Decode {
        spec.subcode_parity();
    }
    let r_dec = admissible_radius(spec);
    let mut rows = Vec::new();
    for r in cfg.r_min..=cfg.r_max {
        let results = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, r as u64, t as u64));
                trial(spec, cfg.mode, r, r_dec, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        let successes = results.iter().filter(|x| x.0).count();
        let within = results.iter().filter(|x| x.1).count();
        let th = theoretical(&cfg.params, r);
        rows.push(ExperimentRow {
            r,
            trials: cfg.trials,
            successes,
            empirical: successes as f64 / cfg.trials as f64,
            theoretical: th,
            stddev: analysis::binomial_stddev(th, cfg.trials),
            within_radius: cfg.within_radius.then_some(within),
        });
    }
    Ok(Experiment {
        rows,
        radii: analysis::decoding_radius(&cfg.params),
    })
}

/// Columns `r,trials,successes,empirical,theoretical,stddev`, plus
/// `within_radius` when every row carries it.
pub fn write_csv<W: io::Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let extra = !rows.is_empty() && rows.iter().all(|r| r.within_radius.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["r", "trials", "successes", "empirical", "theoretical", "stddev"];
    if extra {
        header.push("within_radius");
    }
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![
            row.r.to_string(),
            row.trials.to_string(),
            row.successes.to_string(),
            row.empirical.to_string(),
            row.theoretical.to_string(),
            row.stddev.to_string(),
        ];
        if extra {
            rec.push(row.within_radius.unwrap_or(0).to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ExperimentRow], path: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParams("no rows to write".into()));
    }
    write_csv(rows, fs::File::create(path)?)
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<ExperimentRow>> {
    let mut rd = csv::Reader::from_reader(input);
    rd.deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Empirical and theoretical curves over `r`, with vertical rules at the
/// system bound (red) and the unique radius (black).
pub fn render_svg(rows: &[ExperimentRow], radii: &Radii) -> String {
    let (w, h, pad) = (640.0, 400.0, 48.0);
    let rs = rows
        .iter()
        .map(|r| r.r)
        .chain([radii.system_bound, radii.unique_radius]);
    let lo = rs.clone().min().unwrap_or(0) as f64;
    let mut hi = rs.max().unwrap_or(1) as f64;
    if hi <= lo {
        hi = lo + 1.0;
    }
    let x = |r: f64| pad + (r - lo) / (hi - lo) * (w - 2.0 * pad);
    let y = |v: f64| h - pad - v.clamp(0.0, 1.0) * (h - 2.0 * pad);
    let points = |f: &dyn Fn(&ExperimentRow) -> f64| {
        rows.iter()
            .map(|r| format!("{:.2},{:.2}", x(r.r as f64), y(f(r))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="gray"/>"#,
        h - pad,
        w - pad,
        h - pad
    );
    let _ = writeln!(s, r#"<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="gray"/>"#, h - pad);
    for (label, v) in [("0", 0.0), ("1", 1.0)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" font-size="12" text-anchor="end">{label}</text>"#,
            pad - 6.0,
            y(v) + 4.0
        );
    }
    for (r, color, name) in [
        (radii.system_bound, "red", "system-bound"),
        (radii.unique_radius, "black", "unique-radius"),
    ] {
        let xr = x(r as f64);
        let _ = writeln!(
            s,
            r#"<line class="{name}" x1="{xr:.2}" y1="{pad}" x2="{xr:.2}" y2="{}" stroke="{color}"/>"#,
            h - pad
        );
    }
    let _ = writeln!(
        s,
        r#"<polyline class="theoretical" fill="none" stroke="green" stroke-dasharray="4 3" points="{}"/>"#,
        points(&|r| r.theoretical)
    );
    let _ = writeln!(
        s,
        r#"<polyline class="empirical" fill="none" stroke="blue" points="{}"/>"#,
        points(&|r| r.empirical)
    );
    for r in rows {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="blue"/>"#,
            x(r.r as f64),
            y(r.empirical)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg(rows: &[ExperimentRow], radii: &Radii, path: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParams("no rows to draw".into()));
    }
    fs::write(path, render_svg(rows, radii))?;
    Ok(())
}

/// Lifted-error support dimension against `l·w_r(e)` and the product
/// support `supp(e)·GF(q^l)`: returns `(dim supp E, contained)`.
pub fn lifted_support_check(spec: &CodeSpec, e: &[super::gf::FieldElement]) -> Result<(usize, bool)> {
    let ctx = spec.context();
    let l = spec.family().coeff_subfield_degree();
    let lifted = spec.family().lift_flat(e)?;
    let big = Subspace::span(ctx, &lifted);
    let bound = rankmetric::subspace_product(&rankmetric::support(ctx, e), &Subspace::subfield(ctx, l)?);
    Ok((big.dim(), big.is_subspace_of(&bound)))
}

/// Received word for a fixed message and error.
pub fn corrupt(spec: &CodeSpec, p: &LinPoly, e: &[super::gf::FieldElement]) -> Result<Codeword> {
    Ok(spec.encode(p)?.add(spec.context(), e))
}
