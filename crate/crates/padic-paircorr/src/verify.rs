//! Independent cross-checks for the counting machinery.
//!
//! Everything here is deliberately naive: quadratic loops over explicit
//! differences, exhaustive enumeration of small truncated rings, closed
//! forms evaluated in big-integer arithmetic. None of it shares code with
//! the prefix-bucket counters it is meant to confirm.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{rescale_class, PAdicInt};
use crate::paircorr::{padic_pair_count_prefix, real_pair_count_abs, PairCorrRow};
use crate::primes::is_prime_u64;
use crate::rational::ExactRational;

/// Ordered pairs whose difference has valuation at least `k`, counted by
/// actually subtracting. Oracle for [`padic_pair_count_prefix`].
pub fn brute_pair_count_padic(xs: &[PAdicInt], k: usize) -> Result<u64> {
    let first = xs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty sequence".into()))?;
    if k > first.precision() {
        return Err(Error::PrecisionTooSmall {
            needed: k as u32,
            have: first.precision(),
        });
    }
    let mut count = 0u64;
    for (i, xi) in xs.iter().enumerate() {
        for xj in &xs[i + 1..] {
            if xi.sub(xj)?.valuation() >= k {
                count += 2;
            }
        }
    }
    Ok(count)
}

/// Ordered pair counts for every level `0..=m` from one pass over all
/// differences: a histogram of valuations, then suffix sums. The zero
/// difference saturates at valuation `m` and so lands in every level.
pub fn brute_pair_counts_all(xs: &[PAdicInt]) -> Result<Vec<u64>> {
    let first = xs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty sequence".into()))?;
    let m = first.precision();
    let mut hist = vec![0u64; m + 1];
    for (i, xi) in xs.iter().enumerate() {
        for xj in &xs[i + 1..] {
            hist[xi.sub(xj)?.valuation()] += 2;
        }
    }
    let mut counts = vec![0u64; m + 1];
    let mut acc = 0u64;
    for k in (0..=m).rev() {
        acc += hist[k];
        counts[k] = acc;
    }
    Ok(counts)
}

/// Level-`k` ordered pair count for the sequence `1..=N` of truncated
/// integers, in closed form: with `q = N div p^k` and `r = N mod p^k`,
/// `r` residue classes hold `q + 1` elements and the rest hold `q`.
pub fn naturals_closed_form(n: u64, p: u64, k: u32) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let pk = BigUint::from(p).pow(k);
    let (q, r) = {
        let nb = BigUint::from(n);
        (&nb / &pk, &nb % &pk)
    };
    let full = &r * (&q + 1u32) * &q;
    let rest = if q.is_zero() {
        BigUint::ZERO
    } else {
        (&pk - &r) * &q * (&q - 1u32)
    };
    (full + rest)
        .to_u64()
        .ok_or_else(|| Error::InvalidInput(format!("pair count for N={n} overflows u64")))
}

/// Exhaustively checks, over the whole ring of `p^m` truncations, that the
/// digit-reversal map behaves like an isometry onto `[0, 1)`:
///
/// 1. elements sharing a `k`-digit prefix map at most `p^-k` apart,
/// 2. an element maps within `p^-k` of zero exactly when its valuation is
///    at least `k` or it is the single truncation `p^(k-1)`,
/// 3. the map is injective.
///
/// Returns human-readable counterexamples, empty on success. The pair loop
/// costs `p^(2m)` checks; anything above `budget` is refused rather than
/// silently taking minutes.
pub fn check_monna_metric(p: u64, m: usize, budget: u64) -> Result<Vec<String>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::EmptyDigits);
    }
    let size = BigUint::from(p).pow(m as u32);
    let work = &size * &size;
    if work > BigUint::from(budget) {
        return Err(Error::EnumerationBudget {
            size: work.to_string(),
            budget,
        });
    }
    let size = size.to_u64().expect("within budget");
    let elements: Vec<PAdicInt> = (0..size)
        .map(|c| PAdicInt::from_u64(p, c, m))
        .collect::<Result<_>>()?;
    let monnas: Vec<ExactRational> = elements.iter().map(|x| x.monna()).collect();
    let mut failures = Vec::new();

    let mut images: HashSet<&ExactRational> = HashSet::with_capacity(monnas.len());
    for (x, y) in elements.iter().zip(&monnas) {
        if !images.insert(y) {
            failures.push(format!(
                "injectivity: digits {:?} map to a repeat {y}",
                x.digits()
            ));
        }
    }

    for (x, y) in elements.iter().zip(&monnas) {
        let val = x.valuation();
        let value = x.to_integer();
        for k in 0..=m {
            let radius = ExactRational::power_of(p, -(k as i32));
            let near_zero = y <= &radius;
            let expected = val >= k || (k >= 1 && value == BigUint::from(p).pow(k as u32 - 1));
            if near_zero != expected {
                failures.push(format!(
                    "ball membership: digits {:?} at k={k}: image {y}, valuation {val}",
                    x.digits()
                ));
            }
        }
    }

    for (i, (a, ya)) in elements.iter().zip(&monnas).enumerate() {
        for (b, yb) in elements.iter().zip(&monnas).skip(i + 1) {
            let shared = a.sub(b)?.valuation();
            let gap = (ya - yb).abs();
            if gap > ExactRational::power_of(p, -(shared as i32)) {
                failures.push(format!(
                    "contraction: digits {:?} and {:?} share {shared} digits but map {gap} apart",
                    a.digits(),
                    b.digits()
                ));
            }
        }
    }
    Ok(failures)
}

/// Comparison of a real sequence's pair count against its digit-image's
/// p-adic pair count, both taken on the disc the threshold snaps to.
///
/// Sharing a `k`-digit image prefix forces the raw reals within `p^-k` of
/// each other, so `excess` is nonnegative whenever the arithmetic is
/// correct; it is kept signed so a violation can be reported instead of
/// crashing the caller.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferenceReport {
    pub n: u64,
    pub k: u32,
    pub count_real_abs: u64,
    pub count_padic: u64,
    pub excess: i64,
    /// Snapped radius rescaled by `p^k`, always in `(1/p, 1]`.
    pub rescale_x: ExactRational,
    pub normalized_excess: f64,
}

pub fn transference_diagnostic(
    ys: &[ExactRational],
    p: u64,
    m: usize,
    alpha: &ExactRational,
    s: &ExactRational,
) -> Result<TransferenceReport> {
    if ys.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let n = ys.len() as u64;
    let (k, rescale_x) = rescale_class(p, s, n, alpha)?;
    if k as usize > m {
        return Err(Error::PrecisionTooSmall { needed: k, have: m });
    }
    let xs: Vec<PAdicInt> = ys
        .iter()
        .map(|y| crate::padic::monna_inverse_rational(y, p, m))
        .collect::<Result<_>>()?;
    let count_padic = padic_pair_count_prefix(&xs, k as usize)?;
    let radius = ExactRational::power_of(p, -(k as i32));
    let count_real_abs = real_pair_count_abs(ys, &radius)?;
    let excess = count_real_abs as i64 - count_padic as i64;
    let normalized_excess = excess as f64 * (p as f64).powi(k as i32) / (n as f64 * n as f64);
    Ok(TransferenceReport {
        n,
        k,
        count_real_abs,
        count_padic,
        excess,
        rescale_x,
        normalized_excess,
    })
}

/// Sup-norm deviation of the statistic from its Poissonian limit across a
/// threshold grid, at increasing sequence lengths. Informational: pair
/// correlation converges slowly and non-monotonically, so this reports
/// rather than asserts.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// `(N, sup over s of |F - limit|)` per checkpoint.
    pub rows: Vec<(u64, f64)>,
}

impl ConvergenceReport {
    pub fn final_deviation(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |&(_, d)| d)
    }

    pub fn is_monotone_nonincreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

fn sup_deviation<'a>(rows: impl Iterator<Item = (PairCorrRow, f64)> + 'a) -> f64 {
    rows.map(|(row, limit)| (row.f - limit).abs())
        .fold(0.0, f64::max)
}

/// Deviation of the p-adic statistic from its limit 1.
pub fn uniform_convergence_report_padic(
    xs: &[PAdicInt],
    alpha: &ExactRational,
    s_list: &[ExactRational],
    checkpoints: &[u64],
) -> Result<ConvergenceReport> {
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        if n < 1 || n > xs.len() as u64 {
            return Err(Error::SequenceTooShort {
                requested: n as usize,
                available: xs.len(),
            });
        }
        let cells: Vec<(PairCorrRow, f64)> = s_list
            .iter()
            .map(|s| {
                Ok((
                    crate::paircorr::padic_pair_corr(&xs[..n as usize], alpha, s)?,
                    1.0,
                ))
            })
            .collect::<Result<_>>()?;
        rows.push((n, sup_deviation(cells.into_iter())));
    }
    Ok(ConvergenceReport { rows })
}

/// Deviation of the real statistic from its limit `2s`.
pub fn uniform_convergence_report_real(
    ys: &[ExactRational],
    alpha: &ExactRational,
    s_list: &[ExactRational],
    checkpoints: &[u64],
) -> Result<ConvergenceReport> {
    let mut rows = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        if n < 1 || n > ys.len() as u64 {
            return Err(Error::SequenceTooShort {
                requested: n as usize,
                available: ys.len(),
            });
        }
        let cells: Vec<(PairCorrRow, f64)> = s_list
            .iter()
            .map(|s| {
                let row = crate::paircorr::real_pair_corr(&ys[..n as usize], alpha, s)?;
                let limit = 2.0 * s.to_f64();
                Ok((row, limit))
            })
            .collect::<Result<_>>()?;
        rows.push((n, sup_deviation(cells.into_iter())));
    }
    Ok(ConvergenceReport { rows })
}
