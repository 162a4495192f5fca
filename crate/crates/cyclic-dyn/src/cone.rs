//! Polyhedral cones over gap variables and their exponential-measure
//! volumes.
//!
//! Coordinates are `u = (z_1..z_m, w_1..w_m)` with `m = half`. The defining
//! inequalities are prefix-sum comparisons `H(j, k): z_1+..+z_j >= w_1+..+w_k`
//! (or their strict negations). The families `K_i`, `K_i(q)`, and `S_i(q)`
//! encode the limiting level and swiftness events; their volumes under the
//! product-exponential measure are Catalan-style counts divided by powers of
//! two.
//!
//! [`ConeSpec::exact_integral`] evaluates the volume symbolically by
//! enumerating linear extensions of the prefix-sum poset — deliberately
//! independent of the Catalan recurrences in [`crate::catalan`], so the two
//! can act as oracles for each other.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalan::ExactRational;
use crate::error::{Error, Result};

/// Hard cap on `half` for exact integration; the backtracking count grows
/// like a central binomial in `2 * half`.
pub const EXACT_HALF_LIMIT: usize = 12;

/// One prefix-sum constraint `H(j, k)` (or its strict negation).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Constraint {
    /// Number of leading `z` terms on the left.
    pub j: usize,
    /// Number of leading `w` terms on the right.
    pub k: usize,
    /// `false`: `z_1+..+z_j >= w_1+..+w_k`; `true`: strict `<`.
    pub negated: bool,
}

/// The cone families of the limit theory.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ConeFamily {
    /// `K_i`: level-`i` event for a generic scale.
    K,
    /// `K_i(q)`: level-`i` event at `r = p/q`.
    Kq,
    /// `S_i(q)`: swiftness-type-`i` event at `r = p/q`.
    S,
}

impl std::fmt::Display for ConeFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConeFamily::K => write!(f, "K"),
            ConeFamily::Kq => write!(f, "Kq"),
            ConeFamily::S => write!(f, "S"),
        }
    }
}

/// A cone in `R^(2*half)` cut out by prefix-sum constraints.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConeSpec {
    pub family: ConeFamily,
    pub i: usize,
    pub q: Option<u64>,
    /// Number of `z` (equally, `w`) coordinates.
    pub half: usize,
    pub constraints: Vec<Constraint>,
}

/// Monte Carlo estimate of a cone volume.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct ConeEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Builds `K_i`, `K_i(q)`, or `S_i(q)`. `q` is required (and must be at
/// least 2) for the `Kq` and `S` families.
pub fn build_cone(family: ConeFamily, i: usize, q: Option<u64>) -> Result<ConeSpec> {
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut push = |j: usize, k: usize, negated: bool| {
        let c = Constraint { j, k, negated };
        if !constraints.contains(&c) {
            constraints.push(c);
        }
    };
    let need_q = || -> Result<usize> {
        let q = q.ok_or_else(|| Error::MissingQ(family.to_string()))?;
        if q < 2 {
            return Err(Error::InvalidScale("cone parameter q must be >= 2".into()));
        }
        Ok(q as usize)
    };
    let half = match family {
        ConeFamily::K => {
            for j in 1..=i {
                push(j, j, false);
            }
            push(i + 1, i + 1, true);
            i + 1
        }
        ConeFamily::Kq => {
            let q = need_q()?;
            for j in 1..=i {
                push(j, j, false);
            }
            push(i + 1, i + 1, true);
            // Extra exclusions only bite once i >= q - 1.
            for j in 1..=(i + 2).saturating_sub(q) {
                push(j, q - 2 + j, true);
            }
            i + 1
        }
        ConeFamily::S => {
            let q = need_q()?;
            let half = i + q - 1;
            for j in 1..=half {
                push(j, j, false);
            }
            for j in 1..=i {
                push(j, j + q - 2, true);
            }
            push(i + 1, half, false);
            half
        }
    };
    let spec = ConeSpec {
        family,
        i,
        q,
        half,
        constraints,
    };
    for c in &spec.constraints {
        debug_assert!((1..=half).contains(&c.j) && (1..=half).contains(&c.k));
    }
    Ok(spec)
}

impl ConeSpec {
    /// Ambient dimension `2 * half`.
    pub fn dim(&self) -> usize {
        2 * self.half
    }

    /// Exact membership test for `u = (z_1..z_half, w_1..w_half)`.
    pub fn contains(&self, u: &[f64]) -> Result<bool> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                want: self.dim(),
                got: u.len(),
            });
        }
        Ok(self.contains_unchecked(u))
    }

    fn contains_unchecked(&self, u: &[f64]) -> bool {
        let m = self.half;
        self.constraints.iter().all(|c| {
            let zs: f64 = u[..c.j].iter().sum();
            let ws: f64 = u[m..m + c.k].iter().sum();
            if c.negated {
                zs < ws
            } else {
                zs >= ws
            }
        })
    }

    /// Monte Carlo volume under the product-exponential measure.
    ///
    /// Coordinates are drawn by inverse CDF `-ln(1 - U)` with `U` uniform
    /// from 64-bit ticks (the zero tick maps to the smallest positive
    /// uniform, so `ln` never sees 0). Sampling is split into fixed chunks,
    /// one ChaCha stream per chunk, and reduced by exact hit counts — the
    /// result does not depend on scheduling or worker count.
    pub fn mc_integral(&self, samples: u64, seed: u64) -> ConeEstimate {
        assert!(samples > 0, "mc_integral needs at least one sample");
        const CHUNK: u64 = 1 << 16;
        let chunks = samples.div_ceil(CHUNK);
        let dim = self.dim();
        let hits: u64 = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c + 1);
                let count = CHUNK.min(samples - c * CHUNK);
                let mut u = vec![0f64; dim];
                let mut hits = 0u64;
                for _ in 0..count {
                    for x in u.iter_mut() {
                        *x = exp_from_ticks(rng.next_u64());
                    }
                    if self.contains_unchecked(&u) {
                        hits += 1;
                    }
                }
                hits
            })
            .sum();
        let est = hits as f64 / samples as f64;
        ConeEstimate {
            estimate: est,
            std_error: (est * (1.0 - est) / samples as f64).sqrt(),
            samples,
        }
    }

    /// Exact volume under the product-exponential measure.
    ///
    /// Substituting prefix sums `s_j = z_1+..+z_j`, `t_k = w_1+..+w_k` turns
    /// the cone into a union of chambers, one per linear extension of the
    /// partial order generated by the two chains and the constraints
    /// (`H(j,k)` orders `t_k` before `s_j`; its negation the reverse). The
    /// integrand `exp(-s_half - t_half)` makes each chamber contribute
    /// `1/2^m`, where `m` is the position of whichever of `s_half`, `t_half`
    /// comes first (the other is always the global maximum).
    pub fn exact_integral(&self) -> Result<ExactRational> {
        if self.half > EXACT_HALF_LIMIT {
            return Err(Error::TooLarge {
                half: self.half,
                limit: EXACT_HALF_LIMIT,
            });
        }
        let half = self.half;
        // req_t[a] = t's that must precede s_{a+1}; req_s[b] = s's that must
        // precede t_{b+1} (0-based).
        let mut req_t = vec![0usize; half];
        let mut req_s = vec![0usize; half];
        for c in &self.constraints {
            if c.negated {
                req_s[c.k - 1] = req_s[c.k - 1].max(c.j);
            } else {
                req_t[c.j - 1] = req_t[c.j - 1].max(c.k);
            }
        }
        let mut counts = vec![0u64; 2 * half + 1];
        fn go(
            a: usize,
            b: usize,
            m: Option<usize>,
            half: usize,
            req_t: &[usize],
            req_s: &[usize],
            counts: &mut [u64],
        ) {
            if a == half && b == half {
                counts[m.expect("first chain completion recorded")] += 1;
                return;
            }
            if a < half && b >= req_t[a] {
                let m2 = if m.is_none() && a + 1 == half {
                    Some(a + 1 + b)
                } else {
                    m
                };
                go(a + 1, b, m2, half, req_t, req_s, counts);
            }
            if b < half && a >= req_s[b] {
                let m2 = if m.is_none() && b + 1 == half {
                    Some(a + b + 1)
                } else {
                    m
                };
                go(a, b + 1, m2, half, req_t, req_s, counts);
            }
        }
        go(0, 0, None, half, &req_t, &req_s, &mut counts);
        let mut total = ExactRational::zero();
        for (m, &c) in counts.iter().enumerate() {
            if c > 0 {
                total += ExactRational::new(BigInt::from(c), BigInt::one() << m);
            }
        }
        Ok(total)
    }
}

fn exp_from_ticks(tick: u64) -> f64 {
    let t = if tick == 0 { 1 } else { tick };
    let u = t as f64 / 18446744073709551616.0;
    -(1.0 - u).ln()
}
