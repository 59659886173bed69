//! Closed-form success probabilities, decoding limits and rank counting.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer code parameters. `K = k + α` must stay below `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub alpha: usize,
    pub q: u64,
    pub m: usize,
    #[serde(default = "one")]
    pub l: usize,
}

fn one() -> usize {
    1
}

impl CodeParams {
    pub fn new(n: usize, k: usize, alpha: usize, q: u64, m: usize, l: usize) -> Result<Self> {
        let p = Self { n, k, alpha, q, m, l };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k + self.alpha >= self.n {
            return Err(Error::InvalidParams("k + alpha must be below n".into()));
        }
        if self.l == 0 || self.m == 0 || !self.m.is_multiple_of(self.l) {
            return Err(Error::InvalidParams("l must divide m".into()));
        }
        if self.q < 2 {
            return Err(Error::InvalidParams("q must be at least 2".into()));
        }
        Ok(())
    }

    pub fn k_alpha(&self) -> usize {
        self.k + self.alpha
    }
}

/// `Π_{i<r} (1 − q^{K+i−n}) / (1 − q^{i−n})` in the log domain; zero once
/// `r > n − K`.
fn product(q: u64, n: usize, ka: usize, r: usize) -> f64 {
    if r > n - ka {
        return 0.0;
    }
    let lq = (q as f64).ln();
    let mut acc = 0.0f64;
    for i in 0..r {
        let num = ((ka + i) as f64 - n as f64) * lq;
        let den = (i as f64 - n as f64) * lq;
        acc += (-num.exp()).ln_1p() - (-den.exp()).ln_1p();
    }
    acc.exp()
}

fn product_exact(q: u64, n: usize, ka: usize, r: usize) -> BigRational {
    if r > n - ka {
        return BigRational::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        num *= q.pow(n as u32) - q.pow((ka + i) as u32);
        den *= q.pow(n as u32) - q.pow(i as u32);
    }
    BigRational::new(num.into(), den.into())
}

/// Probability that the high part of a uniform rank-`r` lifted error spans
/// the whole error support. Does not depend on `m`.
pub fn success_probability(p: &CodeParams, r: usize) -> f64 {
    product(p.q, p.n, p.k_alpha(), r)
}

/// Exact rational value of [`success_probability`].
pub fn success_probability_exact(p: &CodeParams, r: usize) -> BigRational {
    product_exact(p.q, p.n, p.k_alpha(), r)
}

/// The same product taken over `r·l` factors. Defined for `r ≤ ⌊m/l⌋`;
/// zero when `r·l > n − K`.
pub fn success_probability_bound(p: &CodeParams, r: usize) -> Result<f64> {
    let max = p.m / p.l;
    if r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    Ok(product(p.q, p.n, p.k_alpha(), r * p.l))
}

pub fn success_probability_bound_exact(p: &CodeParams, r: usize) -> Result<BigRational> {
    let max = p.m / p.l;
    if r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    Ok(product_exact(p.q, p.n, p.k_alpha(), r * p.l))
}

/// Decoding limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Radii {
    /// `⌊mα/(l·K)⌋`, from the syndrome system size.
    pub system_bound: usize,
    /// `⌊(n − K)/l⌋`, from the observable support.
    pub support_bound: usize,
    /// `⌊(n − k)/2⌋`.
    pub unique_radius: usize,
}

pub fn decoding_radius(p: &CodeParams) -> Radii {
    let ka = p.k_alpha();
    Radii {
        system_bound: p.m * p.alpha / (p.l * ka),
        support_bound: (p.n - ka) / p.l,
        unique_radius: (p.n - p.k) / 2,
    }
}

/// Number of words of rank exactly `r` in `GF(q^m)^n`.
pub fn count_rank_words(n: usize, m: usize, q: u64, r: usize) -> Result<BigUint> {
    let max = n.min(m);
    if r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        let qi = q.pow(i as u32);
        num *= (q.pow(n as u32) - &qi) * (q.pow(m as u32) - &qi);
        den *= q.pow(r as u32) - qi;
    }
    Ok(num / den)
}

/// Binomial standard deviation `sqrt(p(1−p)/trials)`.
pub fn binomial_stddev(p: f64, trials: usize) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / trials as f64).sqrt()
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formula_values() {
        let p = CodeParams::new(4, 1, 1, 2, 3, 1).unwrap();
        assert_eq!(success_probability(&p, 0), 1.0);
        assert!((success_probability(&p, 1) - 0.8).abs() < 1e-15);
        assert_eq!(success_probability_exact(&p, 1), BigRational::new(4.into(), 5.into()));
        assert_eq!(success_probability(&p, 3), 0.0);
        let b = CodeParams::new(8, 2, 1, 2, 4, 2).unwrap();
        let exact = success_probability_bound_exact(&b, 1).unwrap();
        assert_eq!(exact, BigRational::new((64 * 31 * 30).into(), (255 * 254).into()));
        assert!((success_probability_bound(&b, 1).unwrap() - 0.9189).abs() < 1e-4);
        assert!(success_probability_bound(&b, 2).unwrap() > 0.0);
        assert!(success_probability_bound(&b, 3).is_err());
        let b1 = CodeParams { l: 1, ..b };
        for r in 0..5 {
            assert_eq!(success_probability_bound(&b1, r).unwrap(), success_probability(&b1, r));
        }
    }

    #[test]
    fn boundary_clamps() {
        let p = CodeParams::new(40, 8, 4, 2, 24, 1).unwrap();
        assert_eq!(success_probability(&p, 29), 0.0);
        assert!(success_probability(&p, 28) > 0.0);
        let b = CodeParams { l: 2, m: 48, ..p };
        assert!(success_probability_bound(&b, 14).unwrap() > 0.0);
        assert_eq!(success_probability_bound(&b, 15).unwrap(), 0.0);
        assert!(success_probability_bound(&b, 25).is_err());
    }

    #[test]
    fn radii() {
        let p = CodeParams::new(200, 50, 50, 5, 80, 1).unwrap();
        let r = decoding_radius(&p);
        assert_eq!((r.system_bound, r.support_bound, r.unique_radius), (40, 100, 75));
        let p = CodeParams::new(70, 15, 14, 2, 30, 1).unwrap();
        let r = decoding_radius(&p);
        assert_eq!((r.support_bound, r.unique_radius), (41, 27));
        let p = CodeParams::new(40, 8, 4, 2, 24, 1).unwrap();
        let r = decoding_radius(&p);
        assert_eq!((r.system_bound, r.support_bound, r.unique_radius), (8, 28, 16));
        assert_eq!(decoding_radius(&CodeParams::new(10, 3, 0, 2, 8, 1).unwrap()).system_bound, 0);
    }

    #[test]
    fn rank_counts() {
        assert_eq!(count_rank_words(2, 2, 2, 0).unwrap(), BigUint::one());
        assert_eq!(count_rank_words(2, 2, 2, 1).unwrap(), BigUint::from(9u32));
        for q in [2u64, 3] {
            for m in 1..=4 {
                for n in 1..=4 {
                    let total: BigUint = (0..=m.min(n)).map(|r| count_rank_words(n, m, q, r).unwrap()).sum();
                    assert_eq!(total, BigUint::from(q).pow((m * n) as u32));
                }
            }
        }
        assert!(count_rank_words(2, 3, 2, 3).is_err());
    }

    #[test]
    fn exhaustive_rank_one_split() {
        // Every word of GF(4)^4: among rank-1 words, the fraction whose last
        // two coordinates already span the support.
        use crate::gf::FieldContext;
        use crate::rankmetric::rank_weight;
        let ctx = FieldContext::new(2, 1, 2, 1).unwrap();
        let el: Vec<_> = (0..4u64).map(|v| ctx.from_coords(&[v & 1, v >> 1]).unwrap()).collect();
        let (mut rank1, mut captured) = (0u32, 0u32);
        for idx in 0..256usize {
            let w: Vec<_> = (0..4).map(|i| el[(idx >> (2 * i)) & 3].clone()).collect();
            if rank_weight(&ctx, &w) == 1 {
                rank1 += 1;
                if rank_weight(&ctx, &w[2..]) == 1 {
                    captured += 1;
                }
            }
        }
        assert_eq!(rank1, count_rank_words(4, 2, 2, 1).unwrap().to_u32().unwrap());
        let p = CodeParams::new(4, 1, 1, 2, 2, 1).unwrap();
        assert_eq!(BigRational::new(captured.into(), rank1.into()), success_probability_exact(&p, 1));
    }

    proptest! {
        #[test]
        fn log_and_exact_agree(n in 3usize..60, ka_frac in 0.0f64..1.0, q in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let ka = 1 + ((n - 2) as f64 * ka_frac) as usize;
            let k = ka.max(1);
            let p = CodeParams { n, k, alpha: ka - k, q, m: 8, l: 1 };
            let mut prev = 1.0;
            for r in 0..=(n - ka + 1) {
                let a = success_probability(&p, r);
                let b = rational_to_f64(&success_probability_exact(&p, r));
                prop_assert!(a <= prev + 1e-15);
                prev = a;
                if b == 0.0 {
                    prop_assert_eq!(a, 0.0);
                } else {
                    prop_assert!(((a - b) / b).abs() < 1e-12, "{} vs {}", a, b);
                }
            }
        }
    }
}
