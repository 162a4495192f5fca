//! Exact Catalan-style counts and the limiting statistics they predict.
//!
//! Three families drive the theory:
//!
//! * `C_i` — Catalan numbers, counting Dyck paths (`i` up-steps, `i`
//!   down-steps, height never negative);
//! * `C_{i,h}` — Dyck paths of height at most `h`;
//! * `C'_{i,h}` — paths with `i + h` up-steps and `i` down-steps confined to
//!   `[0, h]` (they necessarily end at height `h`).
//!
//! The limiting fraction of sample points at level `i` is `C_i / 2^(2i+1)`
//! for a generic (fixed-tick) scale and `C_{i,q-2} / 2^(2i+1)` for `r = p/q`;
//! the fraction of periodic points of swiftness type `i` is
//! `C'_{i,q-2} / 2^(2i+q-1)`. Everything here is arbitrary-precision exact
//! arithmetic; no floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::circle::Scale;
use crate::error::{Error, Result};

/// Exact rational number used for all predicted statistics.
pub type ExactRational = BigRational;

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// 2^e as a `BigInt`.
fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn ratio(num: BigInt, den: BigInt) -> ExactRational {
    ExactRational::new(num, den)
}

/// Binomial coefficient by the multiplicative formula (exact at every step).
fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * big((n - j) as u64) / big((j + 1) as u64);
    }
    acc
}

/// Catalan number `C_i = binom(2i, i) / (i + 1)`.
pub fn catalan(i: usize) -> BigInt {
    binomial(2 * i, i) / big((i + 1) as u64)
}

/// Counts ±1 walks of length `len` from height 0 to height `target` that
/// stay inside `[0, h]`.
fn bounded_walks(len: usize, target: usize, h: usize) -> BigInt {
    if target > h {
        return BigInt::zero();
    }
    let mut dp = vec![BigInt::zero(); h + 1];
    dp[0] = BigInt::one();
    for _ in 0..len {
        let mut nd = vec![BigInt::zero(); h + 1];
        for y in 0..=h {
            if dp[y].is_zero() {
                continue;
            }
            if y + 1 <= h {
                nd[y + 1] += &dp[y];
            }
            if y >= 1 {
                nd[y - 1] += &dp[y];
            }
        }
        dp = nd;
    }
    dp.swap_remove(target)
}

/// Dyck paths of semilength `i` with height at most `h`.
pub fn catalan_bounded(i: usize, h: usize) -> BigInt {
    bounded_walks(2 * i, 0, h)
}

/// Paths with `i + h` up-steps and `i` down-steps inside `[0, h]`
/// (ending at height `h`).
pub fn catalan_prime(i: usize, h: usize) -> BigInt {
    bounded_walks(2 * i + h, h, h)
}

/// Which generating function to evaluate at `x = 1/4`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GfFamily {
    /// Plain Catalan `C(x)`.
    Plain,
    /// Height-bounded `C_h(x)`.
    Bounded,
    /// `C'_h(x)`.
    Prime,
}

/// Exact value of the chosen generating function at `x = 1/4` (`h` is
/// ignored for `Plain`).
///
/// Each value is computed both from the closed form and from the recurrence
/// `C_h = 1 / (1 - x C_{h-1})`, `C'_h = C'_{h-1} C_h` (with a Chebyshev
/// cross-check `C_h(1/4) = 2 U_h(1) / U_{h+1}(1)`); the routes must agree.
pub fn gf_quarter(family: GfFamily, h: usize) -> ExactRational {
    let x = ratio(BigInt::one(), big(4));
    // C_j(1/4) for j = 0..=h via the bounded recurrence.
    let mut c_bounded = ratio(BigInt::one(), BigInt::one()); // C_0 = 1
    let mut c_all = vec![c_bounded.clone()];
    for _ in 1..=h {
        c_bounded = ratio(BigInt::one(), BigInt::one()) / (ExactRational::one() - &x * &c_bounded);
        c_all.push(c_bounded.clone());
    }
    match family {
        GfFamily::Plain => {
            let closed = ratio(big(2), BigInt::one());
            // Functional equation C = 1 + x C^2 at x = 1/4.
            assert_eq!(
                ExactRational::one() + &x * &closed * &closed,
                closed,
                "plain Catalan functional equation fails at 1/4"
            );
            closed
        }
        GfFamily::Bounded => {
            let closed = ratio(big(2) * big((h + 1) as u64), big((h + 2) as u64));
            assert_eq!(c_all[h], closed, "bounded recurrence disagrees at h={h}");
            // Chebyshev route: U_j(1) = j + 1, so 2 U_h(1) / U_{h+1}(1).
            let (mut u0, mut u1) = (BigInt::one(), big(2));
            for _ in 1..=h {
                let next = big(2) * &u1 - &u0;
                u0 = u1;
                u1 = next;
            }
            assert_eq!(
                ratio(big(2) * u0, u1),
                closed,
                "Chebyshev route disagrees at h={h}"
            );
            closed
        }
        GfFamily::Prime => {
            let closed = ratio(pow2(h + 1), big((h + 2) as u64));
            let mut cp = ExactRational::one(); // C'_0 = 1
            for cj in c_all.iter().skip(1) {
                cp = cp * cj; // C'_j = C'_{j-1} * C_j
            }
            assert_eq!(cp, closed, "prime recurrence disagrees at h={h}");
            closed
        }
    }
}

/// Limiting fraction of sample points at level `i`:
/// `C_i / 2^(2i+1)` for a fixed scale, `C_{i,q-2} / 2^(2i+1)` for `p/q`
/// (zero when `q = 1`, where every point is periodic).
pub fn predicted_level_fraction(i: usize, r: Scale) -> ExactRational {
    match r {
        Scale::Fixed { .. } => ratio(catalan(i), pow2(2 * i + 1)),
        Scale::Rational { q: 1, .. } => ExactRational::zero(),
        Scale::Rational { q, .. } => ratio(catalan_bounded(i, (q - 2) as usize), pow2(2 * i + 1)),
    }
}

/// Limiting fraction of sample points that are periodic of swiftness type
/// `i` at `r = p/q`: `C'_{i,q-2} / 2^(2i+q-1)`. Requires `q >= 2` and
/// `gcd(p, q) = 1`.
pub fn predicted_swift_fraction(i: usize, p: u64, q: u64) -> Result<ExactRational> {
    if q < 2 {
        return Err(Error::InvalidScale(
            "swiftness predictions need q >= 2".into(),
        ));
    }
    if p == 0 || p > q || num_integer::gcd(p, q) != 1 {
        return Err(Error::InvalidScale(format!(
            "{p}/{q} is not a reduced fraction in (0, 1]"
        )));
    }
    Ok(ratio(
        catalan_prime(i, (q - 2) as usize),
        pow2(2 * i + (q as usize - 1)),
    ))
}

/// Limiting fraction of periodic points: `1/q` for `r = p/q`, zero for a
/// fixed (generic) scale.
pub fn predicted_periodic_fraction(r: Scale) -> ExactRational {
    match r {
        Scale::Fixed { .. } => ExactRational::zero(),
        Scale::Rational { q, .. } => ratio(BigInt::one(), big(q)),
    }
}

/// Spectral bound on the level/swiftness tail beyond `i_max` for `r = p/q`
/// (see the partition-of-mass tests): `C_{i,h} <= lambda^i` with
/// `lambda = 4 cos^2(pi / (h + 2))`, so the tail is geometric with ratio
/// `lambda / 4 < 1`.
pub fn bounded_growth_rate(h: usize) -> f64 {
    let c = (std::f64::consts::PI / (h as f64 + 2.0)).cos();
    4.0 * c * c
}

/// `|value|` of an exact rational as f64 (diagnostics only).
pub fn to_f64(x: &ExactRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or_else(|| {
        // Fall back to a manual division for extreme magnitudes.
        let num = x.numer().abs().to_string().parse::<f64>().unwrap_or(f64::MAX);
        let den = x.denom().abs().to_string().parse::<f64>().unwrap_or(1.0);
        let s = if x.is_negative() { -1.0 } else { 1.0 };
        s * num / den
    })
}
