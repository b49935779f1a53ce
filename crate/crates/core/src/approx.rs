//! Sampling estimators for counters with a majority-or-nothing promise, the
//! reverse construction from exact values, and Miller–Rabin witness counting.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

/// Largest domain `check_mr` will enumerate.
pub const CHECK_MR_MAX_DOMAIN: u64 = 1 << 24;
/// Largest modulus `miller_rabin_witness_count` will enumerate.
pub const MILLER_RABIN_MAX_N: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain of size {size} exceeds enumeration limit {limit}")]
    DomainTooLarge { size: u64, limit: u64 },
    #[error("modulus {0} must be odd and at least 3")]
    BadModulus(u64),
    #[error("modulus {n} exceeds enumeration limit {limit}")]
    ModulusTooLarge { n: u64, limit: u64 },
}

type Predicate = Arc<dyn Fn(u64) -> bool + Send + Sync>;

/// A deterministic accept predicate over `[0, N)`, standing in for the
/// accepting random strings of a machine. `promised_mr` records the claim
/// that the acceptance count is either 0 or more than `N/2`.
#[derive(Clone)]
pub struct CountingSampler {
    domain_size: u64,
    accept: Predicate,
    promised_mr: bool,
}

impl fmt::Debug for CountingSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CountingSampler")
            .field("domain_size", &self.domain_size)
            .field("promised_mr", &self.promised_mr)
            .finish_non_exhaustive()
    }
}

impl CountingSampler {
    pub fn new(
        domain_size: u64,
        promised_mr: bool,
        accept: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Result<Self, ApproxError> {
        if domain_size == 0 {
            return Err(ApproxError::InvalidParameter("domain size must be positive".into()));
        }
        Ok(CountingSampler {
            domain_size,
            accept: Arc::new(accept),
            promised_mr,
        })
    }

    /// Accepts exactly the first `accepted` indices.
    pub fn prefix(domain_size: u64, accepted: u64, promised_mr: bool) -> Result<Self, ApproxError> {
        if accepted > domain_size {
            return Err(ApproxError::InvalidParameter(format!(
                "{accepted} accepted out of {domain_size}"
            )));
        }
        Self::new(domain_size, promised_mr, move |i| i < accepted)
    }

    pub fn domain_size(&self) -> u64 {
        self.domain_size
    }

    pub fn promised_mr(&self) -> bool {
        self.promised_mr
    }

    #[inline]
    pub fn accepts(&self, index: u64) -> bool {
        (self.accept)(index)
    }

    /// Acceptance count by enumeration.
    pub fn acceptance_count(&self) -> u64 {
        (0..self.domain_size).filter(|&i| self.accepts(i)).count() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateParams {
    epsilon: f64,
    delta: f64,
    p_lower_bound: f64,
    seed: u64,
}

impl EstimateParams {
    pub fn new(epsilon: f64, delta: f64, p_lower_bound: f64, seed: u64) -> Result<Self, ApproxError> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if !open(epsilon) {
            return Err(ApproxError::InvalidParameter(format!("epsilon {epsilon} not in (0,1)")));
        }
        if !open(delta) {
            return Err(ApproxError::InvalidParameter(format!("delta {delta} not in (0,1)")));
        }
        if !(p_lower_bound > 0.0 && p_lower_bound <= 1.0) {
            return Err(ApproxError::InvalidParameter(format!(
                "p lower bound {p_lower_bound} not in (0,1]"
            )));
        }
        Ok(EstimateParams {
            epsilon,
            delta,
            p_lower_bound,
            seed,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p_lower_bound(&self) -> f64 {
        self.p_lower_bound
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `⌈3 ln(2/δ) / (ε² p)⌉`, the multiplicative Chernoff sample size.
    pub fn sample_size(&self) -> u64 {
        let m = 3.0 * (2.0 / self.delta).ln() / (self.epsilon * self.epsilon * self.p_lower_bound);
        m.ceil() as u64
    }
}

/// Independent seed for the `index`-th consumer of `seed`, taken from its
/// own ChaCha stream.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionEstimate {
    pub p_hat: f64,
    pub accepted: u64,
    pub samples: u64,
}

/// Fraction of `m` uniform draws from `[0, N)` that the sampler accepts.
pub fn estimate_fraction(s: &CountingSampler, params: &EstimateParams) -> FractionEstimate {
    let m = params.sample_size();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let accepted = (0..m)
        .filter(|_| s.accepts(rng.gen_range(0..s.domain_size)))
        .count() as u64;
    FractionEstimate {
        p_hat: accepted as f64 / m as f64,
        accepted,
        samples: m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountEstimate {
    pub estimate: f64,
    pub samples: u64,
    pub domain_size: u64,
}

/// `p̂ · N` with the sample size for `p ≥ 1/2`. Zero when nothing accepts.
pub fn fpras_rp1(s: &CountingSampler, epsilon: f64, delta: f64, seed: u64) -> Result<CountEstimate, ApproxError> {
    estimate_count(s, &EstimateParams::new(epsilon, delta, 0.5, seed)?)
}

/// `p̂ · N` with an explicit lower bound on the acceptance fraction.
pub fn estimate_count(s: &CountingSampler, params: &EstimateParams) -> Result<CountEstimate, ApproxError> {
    let f = estimate_fraction(s, params);
    Ok(CountEstimate {
        estimate: f.p_hat * s.domain_size as f64,
        samples: f.samples,
        domain_size: s.domain_size,
    })
}

/// One-sided decision: estimate with `ε = δ = 1/4` and answer yes iff the
/// estimate is at least `1/2`.
pub fn rp_decide(s: &CountingSampler, seed: u64) -> bool {
    fpras_rp1(s, 0.25, 0.25, seed)
        .expect("fixed parameters are valid")
        .estimate
        >= 0.5
}

/// Sampler with acceptance count exactly `value` over the smallest power of
/// two `N ≥ value`, so `value > N/2` whenever it is nonzero.
pub fn machine_from_fp(value: u64) -> CountingSampler {
    let n = if value == 0 { 1 } else { value.next_power_of_two() };
    CountingSampler::new(n, true, move |b| b < value).expect("positive domain")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum MrCheck {
    Holds { accepted: u64, domain_size: u64 },
    Violated { accepted: u64, domain_size: u64 },
}

/// Checks `acc = 0 ∨ acc > N/2` by enumeration.
pub fn check_mr(s: &CountingSampler) -> Result<MrCheck, ApproxError> {
    let n = s.domain_size;
    if n > CHECK_MR_MAX_DOMAIN {
        return Err(ApproxError::DomainTooLarge {
            size: n,
            limit: CHECK_MR_MAX_DOMAIN,
        });
    }
    let acc = s.acceptance_count();
    Ok(if acc == 0 || 2 * acc > n {
        MrCheck::Holds {
            accepted: acc,
            domain_size: n,
        }
    } else {
        MrCheck::Violated {
            accepted: acc,
            domain_size: n,
        }
    })
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Whether `a` fails the strong probable-prime test for odd `n ≥ 3`.
pub fn is_mr_witness(a: u64, n: u64) -> bool {
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

/// Sampler over bases `1..n-1`: index `i` accepts iff `i+1` is a witness.
/// Promised to satisfy the majority condition; honest for every odd `n`.
pub fn miller_rabin_sampler(n: u64) -> Result<CountingSampler, ApproxError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(ApproxError::BadModulus(n));
    }
    CountingSampler::new(n - 1, true, move |i| is_mr_witness(i + 1, n))
}

/// Number of Miller–Rabin witnesses in `1..n-1` by enumeration, with the
/// matching sampler.
pub fn miller_rabin_witness_count(n: u64) -> Result<(u64, CountingSampler), ApproxError> {
    let s = miller_rabin_sampler(n)?;
    if n > MILLER_RABIN_MAX_N {
        return Err(ApproxError::ModulusTooLarge {
            n,
            limit: MILLER_RABIN_MAX_N,
        });
    }
    Ok((s.acceptance_count(), s))
}
