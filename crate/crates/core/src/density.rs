//! Exhaustive and Monte-Carlo estimates of how often random pairs generate.
//!
//! Randomized runs are split into fixed-size shards; shard `k` draws from a
//! ChaCha stream seeded with `seed + k`, so results do not depend on the
//! number of threads.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::g2::g2_fast_check;
use crate::gentest::{grow, random_fp_matrix, FpSink};
use crate::linalg::{is_prime, IntMatrix, Matrix, PrimeField};

pub const SHARD_SIZE: u64 = 4096;

/// Default limit on the number of pairs enumerated by exhaustive mode.
pub const EXHAUSTIVE_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive { cap: u64 },
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityResult {
    pub experiment: String,
    pub params: BTreeMap<String, String>,
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub exact: bool,
    /// The fraction in lowest terms when `exact`.
    pub exact_value: Option<String>,
    pub std_error: f64,
    /// 95% normal-approximation half-width; zero when exact.
    pub half_width: f64,
}

impl DensityResult {
    fn new(experiment: &str, params: &[(&str, String)], successes: u64, trials: u64, exact: bool) -> Self {
        let estimate = successes as f64 / trials as f64;
        let std_error = if exact { 0.0 } else { (estimate * (1.0 - estimate) / trials as f64).sqrt() };
        let exact_value = exact.then(|| {
            let r = BigRational::new(BigInt::from(successes), BigInt::from(trials));
            format!("{}/{}", r.numer(), r.denom())
        });
        DensityResult {
            experiment: experiment.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            successes,
            trials,
            estimate,
            exact,
            exact_value,
            std_error,
            half_width: 1.96 * std_error,
        }
    }

    pub fn csv_header() -> &'static str {
        "experiment,params,estimate,half_width,successes,trials,exact"
    }

    pub fn csv_row(&self) -> Vec<String> {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        vec![
            self.experiment.clone(),
            params.join(";"),
            self.estimate.to_string(),
            self.half_width.to_string(),
            self.successes.to_string(),
            self.trials.to_string(),
            self.exact.to_string(),
        ]
    }
}

/// Counts successes of `trial` over `samples` draws, sharded.
fn monte_carlo<F>(samples: u64, seed: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let shards = samples.div_ceil(SHARD_SIZE);
    (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
            let count = SHARD_SIZE.min(samples - k * SHARD_SIZE);
            (0..count).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum()
}

fn generates_fp(a: &Matrix<PrimeField>, b: &Matrix<PrimeField>, field: PrimeField) -> bool {
    let n = a.rows();
    let mut sink = FpSink::new(field, n * n);
    grow(a, b, false, true, &mut sink).expect("finite field span terminates").complete
}

/// Fraction of pairs in `M_n(F_q)^2` generating `M_n(F_q)` as a ring.
pub fn fq_fraction(n: usize, q: u64, mode: Mode) -> Result<DensityResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let field = PrimeField::new(q).ok_or(Error::NotPrime(q))?;
    let mut params = vec![("n", n.to_string()), ("q", q.to_string())];
    match mode {
        Mode::Exhaustive { cap } => {
            let total = q.checked_pow((2 * n * n) as u32).filter(|&t| t <= cap);
            let Some(total) = total else {
                return Err(Error::ResourceCap(format!("{q}^{} pairs exceed the cap {cap}", 2 * n * n)));
            };
            let chunks = total.div_ceil(SHARD_SIZE);
            let hits: u64 = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut hits = 0;
                    for code in c * SHARD_SIZE..total.min((c + 1) * SHARD_SIZE) {
                        let mut digits = (0..2 * n * n).scan(code, |rest, _| {
                            let d = *rest % q;
                            *rest /= q;
                            Some(d)
                        });
                        let a = Matrix::from_fn(field, n, n, |_, _| digits.next().unwrap_or(0));
                        let b = Matrix::from_fn(field, n, n, |_, _| digits.next().unwrap_or(0));
                        hits += u64::from(generates_fp(&a, &b, field));
                    }
                    hits
                })
                .sum();
            Ok(DensityResult::new("fq", &params, hits, total, true))
        }
        Mode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParameter("samples must be positive".into()));
            }
            let hits = monte_carlo(samples, seed, |rng| {
                let a = random_fp_matrix(rng, field, n);
                let b = random_fp_matrix(rng, field, n);
                generates_fp(&a, &b, field)
            });
            params.extend([("samples", samples.to_string()), ("seed", seed.to_string())]);
            Ok(DensityResult::new("fq", &params, hits, samples, false))
        }
    }
}

fn box_matrix(rng: &mut impl Rng, k: i64) -> IntMatrix {
    IntMatrix::from_i64(&[[rng.gen_range(-k..=k), rng.gen_range(-k..=k)], [rng.gen_range(-k..=k), rng.gen_range(-k..=k)]])
}

/// Fraction of pairs with entries in `[-k, k]` generating `M_2(Z)`.
pub fn g2z_box_fraction(k: u64, samples: u64, seed: u64) -> Result<DensityResult> {
    if k == 0 || samples == 0 {
        return Err(Error::InvalidParameter("need k >= 1 and samples >= 1".into()));
    }
    let r = i64::try_from(k).map_err(|_| Error::InvalidParameter("box radius too large".into()))?;
    let hits = monte_carlo(samples, seed, |rng| {
        let a = box_matrix(rng, r);
        let b = box_matrix(rng, r);
        g2_fast_check(&a, &b).map(|c| c.generates).unwrap_or(false)
    });
    let params = [("k", k.to_string()), ("samples", samples.to_string()), ("seed", seed.to_string())];
    Ok(DensityResult::new("g2z", &params, hits, samples, false))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoprimalityReport {
    pub pcut: u64,
    pub primes: usize,
    #[serde(skip)]
    pub product: BigRational,
    pub product_decimal: String,
    pub mc: Option<DensityResult>,
    /// `(mc - product) / std_error`
    pub z_score: Option<f64>,
}

/// `digits` significant decimals of a positive rational below 1.
pub fn decimal(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let mut scaled = r.abs();
    let mut exp = 0i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    while scaled < BigRational::one() {
        scaled *= &ten;
        exp -= 1;
    }
    while scaled >= ten {
        scaled /= &ten;
        exp += 1;
    }
    let m = (scaled * BigRational::from_integer(BigInt::from(10).pow(digits as u32 - 1))).round().to_integer();
    let s = m.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}e{}", &s[..1], &s[1..], exp)
}

fn pairwise_coprime(v: &[i64]) -> bool {
    (0..v.len()).all(|i| (i + 1..v.len()).all(|j| v[i].gcd(&v[j]) == 1))
}

/// `prod_{p <= P} (p-1)^7 (p+7) / p^8`, optionally compared with the
/// frequency of pairwise coprime 8-tuples in `[-k, k]^8`.
pub fn coprimality_product(pcut: u64, mc: Option<(u64, u64, u64)>) -> Result<CoprimalityReport> {
    if pcut < 2 {
        return Err(Error::InvalidParameter("prime cutoff must be at least 2".into()));
    }
    let mut product = BigRational::one();
    let mut primes = 0;
    for p in (2..=pcut).filter(|&p| is_prime(p)) {
        let pb = BigInt::from(p);
        let num = (&pb - 1u32).pow(7) * (&pb + 7u32);
        product *= BigRational::new(num, pb.pow(8));
        primes += 1;
    }
    let mc = match mc {
        None => None,
        Some((k, samples, seed)) => {
            if k == 0 || samples == 0 {
                return Err(Error::InvalidParameter("need k >= 1 and samples >= 1".into()));
            }
            let r = i64::try_from(k).map_err(|_| Error::InvalidParameter("box radius too large".into()))?;
            let hits = monte_carlo(samples, seed, |rng| {
                let v: Vec<i64> = (0..8).map(|_| rng.gen_range(-r..=r)).collect();
                pairwise_coprime(&v)
            });
            let params = [("k", k.to_string()), ("samples", samples.to_string()), ("seed", seed.to_string())];
            Some(DensityResult::new("coprime8", &params, hits, samples, false))
        }
    };
    let exact = product.to_f64().unwrap_or(0.0);
    let z_score = mc.as_ref().map(|m| (m.estimate - exact) / m.std_error);
    Ok(CoprimalityReport { pcut, primes, product_decimal: decimal(&product, 20), product, mc, z_score })
}

/// Table of `fq_fraction` over a grid; exhaustive where the cap allows.
pub fn sweep(ns: &[usize], qs: &[u64], samples: u64, seed: u64, cap: u64) -> Result<Vec<DensityResult>> {
    let mut out = Vec::new();
    for &n in ns {
        for &q in qs {
            let exhaustive = q.checked_pow((2 * n * n) as u32).is_some_and(|t| t <= cap);
            let mode = if exhaustive { Mode::Exhaustive { cap } } else { Mode::MonteCarlo { samples, seed } };
            out.push(fq_fraction(n, q, mode)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_at_two() {
        let r = coprimality_product(2, None).unwrap();
        assert_eq!(r.product, BigRational::new(9.into(), 256.into()));
        assert_eq!(r.product_decimal, "3.5156250000000000000e-2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&BigRational::new(1.into(), 3.into()), 4), "3.333e-1");
        assert_eq!(decimal(&BigRational::new(5.into(), 1.into()), 2), "5.0e0");
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(fq_fraction(2, 3, Mode::MonteCarlo { samples: 0, seed: 1 }).is_err());
        assert!(matches!(fq_fraction(2, 4, Mode::Exhaustive { cap: 100 }), Err(Error::NotPrime(4))));
        assert!(fq_fraction(3, 5, Mode::Exhaustive { cap: EXHAUSTIVE_CAP }).unwrap_err().is_resource_cap());
    }

    #[test]
    fn coprime_tuples() {
        assert!(pairwise_coprime(&[1, -1, 3, 5, 7, 11, 13, 2]));
        assert!(!pairwise_coprime(&[0, 2, 3]));
    }
}
