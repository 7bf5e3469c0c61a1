//! Pair correlation statistics on the real circle and on truncated p-adic
//! integers, all thresholds decided in exact arithmetic.
//!
//! Real side: `F(s) = #{i != j : ||x_i - x_j|| <= s / N^alpha} / N^(2-alpha)`
//! with `||.||` the distance to the nearest integer; a Poissonian sequence
//! tends to `2s`. p-adic side: the radius is snapped to the disc of Haar
//! measure `mu = p^-k0`, pairs are counted by shared digit prefixes, and
//! `F(s) = count * p^k0 / N^2` tends to `1`.
//!
//! Pairs are ordered throughout: `(i, j)` and `(j, i)` both count, equal
//! elements never pair with themselves. Elements whose truncations coincide
//! are at distance zero and therefore land in every disc; they are reported
//! in the `collisions` field so callers can see when precision is too small
//! for the sequence rather than having the statistic quietly inflate.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::padic::{alpha_exponents, disc_measure, PAdicInt};
use crate::primes::is_prime_u64;
use crate::rational::ExactRational;

/// One evaluation of a pair correlation statistic, ready for CSV.
///
/// Real-line rows use `p = 0`, `k = 0`, `mu = 1`. `collisions` counts
/// ordered pairs at distance exactly zero; it is diagnostic output and not
/// part of the serialized format.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCorrRow {
    pub n: u64,
    pub alpha: ExactRational,
    pub s: ExactRational,
    pub p: u64,
    pub k: u32,
    pub mu: ExactRational,
    pub count: u64,
    pub f: f64,
    pub collisions: u64,
}

pub const CSV_HEADER: &str = "N,alpha,s,p,k,mu,count,F";

impl PairCorrRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n, self.alpha, self.s, self.p, self.k, self.mu, self.count, self.f
        )
    }
}

fn canonical_rational(field: &str) -> Result<ExactRational> {
    let value: ExactRational = field
        .parse()
        .map_err(|e| Error::ParseCsv(format!("bad rational {field:?}: {e}")))?;
    if value.to_string() != field {
        return Err(Error::ParseCsv(format!(
            "rational {field:?} is not in lowest terms fraction form"
        )));
    }
    Ok(value)
}

/// Parses one data line of [`CSV_HEADER`] format. Rational fields must be
/// canonical (`1/2`, not `2/4` or `0.5`) so that parsing is the exact
/// inverse of [`PairCorrRow::csv_line`].
pub fn parse_csv_line(line: &str) -> Result<PairCorrRow> {
    let fields: Vec<&str> = line.trim_end_matches('\r').split(',').collect();
    if fields.len() != 8 {
        return Err(Error::ParseCsv(format!(
            "expected 8 fields, found {}",
            fields.len()
        )));
    }
    let uint = |field: &str, name: &str| -> Result<u64> {
        field
            .parse()
            .map_err(|_| Error::ParseCsv(format!("bad {name} {field:?}")))
    };
    let n = uint(fields[0], "N")?;
    let alpha = canonical_rational(fields[1])?;
    let s = canonical_rational(fields[2])?;
    let p = uint(fields[3], "p")?;
    if p != 0 && !is_prime_u64(p) {
        return Err(Error::ParseCsv(format!("p must be 0 or prime, got {p}")));
    }
    let k: u32 = fields[4]
        .parse()
        .map_err(|_| Error::ParseCsv(format!("bad k {:?}", fields[4])))?;
    let mu = canonical_rational(fields[5])?;
    let count = uint(fields[6], "count")?;
    let f: f64 = fields[7]
        .parse()
        .map_err(|_| Error::ParseCsv(format!("bad F {:?}", fields[7])))?;
    if !f.is_finite() {
        return Err(Error::ParseCsv(format!("non-finite F {:?}", fields[7])));
    }
    Ok(PairCorrRow {
        n,
        alpha,
        s,
        p,
        k,
        mu,
        count,
        f,
        collisions: 0,
    })
}

fn check_unit_interval(xs: &[ExactRational]) -> Result<()> {
    let one = ExactRational::one();
    for x in xs {
        if x.is_negative() || x >= &one {
            return Err(Error::OutsideUnitInterval(x.to_string()));
        }
    }
    Ok(())
}

/// Ordered pairs at circle distance (to the nearest integer) at most `t`.
pub fn real_pair_count_circle(xs: &[ExactRational], t: &ExactRational) -> Result<u64> {
    if t.is_negative() {
        return Err(Error::NonPositiveRadius(t.to_string()));
    }
    let mut count = 0u64;
    for (i, xi) in xs.iter().enumerate() {
        for xj in &xs[i + 1..] {
            if &(xi - xj).distance_to_nearest_integer() <= t {
                count += 2;
            }
        }
    }
    Ok(count)
}

/// Ordered pairs at plain absolute distance at most `t`, no wrap-around.
pub fn real_pair_count_abs(xs: &[ExactRational], t: &ExactRational) -> Result<u64> {
    if t.is_negative() {
        return Err(Error::NonPositiveRadius(t.to_string()));
    }
    let mut count = 0u64;
    for (i, xi) in xs.iter().enumerate() {
        for xj in &xs[i + 1..] {
            if &(xi - xj).abs() <= t {
                count += 2;
            }
        }
    }
    Ok(count)
}

/// Real-line pair correlation at threshold `s / N^alpha`, decided exactly:
/// for `alpha = a/b` the test `||x_i - x_j|| <= s / N^alpha` becomes
/// `dist^b N^a <= s^b` in rational arithmetic.
pub fn real_pair_corr(
    xs: &[ExactRational],
    alpha: &ExactRational,
    s: &ExactRational,
) -> Result<PairCorrRow> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    check_unit_interval(xs)?;
    if s.is_negative() {
        return Err(Error::InvalidInput(format!(
            "s must be nonnegative, got {s}"
        )));
    }
    let (a, b) = alpha_exponents(alpha)?;
    let n = xs.len() as u64;
    let n_pow = ExactRational::from_biguint(BigUint::from(n).pow(a));
    let s_pow = s.pow_u(b);

    let mut collisions = 0u64;
    let mut seen: HashMap<&ExactRational, u64> = HashMap::new();
    for x in xs {
        let c = seen.entry(x).or_insert(0);
        collisions += 2 * *c;
        *c += 1;
    }

    // Circle distance never exceeds 1/2, so a threshold that admits 1/2
    // admits every pair.
    let half_pow = ExactRational::power_of(2, -(b as i32));
    let count = if &half_pow * &n_pow <= s_pow {
        n * (n - 1)
    } else {
        let mut count = 0u64;
        for (i, xi) in xs.iter().enumerate() {
            for xj in &xs[i + 1..] {
                let d = (xi - xj).distance_to_nearest_integer();
                if &d.pow_u(b) * &n_pow <= s_pow {
                    count += 2;
                }
            }
        }
        count
    };

    let nf = n as f64;
    let f = if alpha == &ExactRational::one() {
        count as f64 / nf
    } else {
        count as f64 / nf.powf(2.0 - a as f64 / b as f64)
    };
    Ok(PairCorrRow {
        n,
        alpha: alpha.clone(),
        s: s.clone(),
        p: 0,
        k: 0,
        mu: ExactRational::one(),
        count,
        f,
        collisions,
    })
}

fn check_uniform(xs: &[PAdicInt]) -> Result<(u64, usize)> {
    let first = xs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty sequence".into()))?;
    let (p, m) = (first.p(), first.precision());
    for x in xs {
        if x.p() != p || x.precision() != m {
            return Err(Error::OperandMismatch(format!(
                "sequence mixes (p={p}, m={m}) with (p={}, m={})",
                x.p(),
                x.precision()
            )));
        }
    }
    Ok((p, m))
}

/// Ordered pairs sharing their first `k` digits (valuation of the
/// difference at least `k`, or equal truncations).
pub fn padic_pair_count_prefix(xs: &[PAdicInt], k: usize) -> Result<u64> {
    let (_, m) = check_uniform(xs)?;
    if k > m {
        return Err(Error::PrecisionTooSmall {
            needed: k as u32,
            have: m,
        });
    }
    let mut buckets: HashMap<&[u64], u64> = HashMap::new();
    for x in xs {
        *buckets.entry(&x.digits()[..k]).or_insert(0) += 1;
    }
    Ok(buckets.values().map(|&c| c * (c - 1)).sum())
}

fn exact_padic_f(count: u64, p: u64, k: u32, n: u64) -> Result<(ExactRational, f64)> {
    let num = BigUint::from(count) * BigUint::from(p).pow(k);
    let den = BigUint::from(n) * BigUint::from(n);
    let f = ExactRational::new(num.into(), den.into())?;
    let approx = f.to_f64();
    Ok((f, approx))
}

/// p-adic pair correlation of the whole slice: radius `s / N^alpha` snapped
/// to the disc of measure `p^-k0`, count normalized by `N^2 p^-k0`.
///
/// `s = 0` is the degenerate disc: by convention the row carries `k = 0`,
/// `mu = 1`, `count = 0`, `F = 0` (only exact collisions are at distance
/// zero, and those are reported separately).
pub fn padic_pair_corr(
    xs: &[PAdicInt],
    alpha: &ExactRational,
    s: &ExactRational,
) -> Result<PairCorrRow> {
    let (p, m) = check_uniform(xs)?;
    if s.is_negative() {
        return Err(Error::InvalidInput(format!(
            "s must be nonnegative, got {s}"
        )));
    }
    let n = xs.len() as u64;
    let collisions = padic_pair_count_prefix(xs, m)?;
    if s.is_zero() {
        return Ok(PairCorrRow {
            n,
            alpha: alpha.clone(),
            s: s.clone(),
            p,
            k: 0,
            mu: ExactRational::one(),
            count: 0,
            f: 0.0,
            collisions,
        });
    }
    let disc = disc_measure(p, s, n, alpha)?;
    if disc.k0 as usize > m {
        return Err(Error::PrecisionTooSmall {
            needed: disc.k0,
            have: m,
        });
    }
    let count = padic_pair_count_prefix(xs, disc.k0 as usize)?;
    let (_, f) = exact_padic_f(count, p, disc.k0, n)?;
    Ok(PairCorrRow {
        n,
        alpha: alpha.clone(),
        s: s.clone(),
        p,
        k: disc.k0,
        mu: disc.mu,
        count,
        f,
        collisions,
    })
}

/// Streaming prefix-pair counter: after inserting `n` elements it knows, for
/// every level `k <= m`, how many ordered pairs share a `k`-digit prefix.
///
/// Buckets are interned per level as `(parent bucket, next digit) -> id`, so
/// an insert costs `O(m)` hash operations regardless of `p`. Level `m`
/// buckets hold exact truncation collisions.
#[derive(Debug)]
pub struct PrefixPairCounter {
    p: u64,
    m: usize,
    len: u64,
    levels: Vec<HashMap<(u32, u64), u32>>,
    sizes: Vec<Vec<u64>>,
    level_counts: Vec<u64>,
}

impl PrefixPairCounter {
    pub fn new(p: u64, m: usize) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::EmptyDigits);
        }
        Ok(Self {
            p,
            m,
            len: 0,
            levels: vec![HashMap::new(); m],
            sizes: vec![Vec::new(); m],
            level_counts: vec![0; m + 1],
        })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn insert(&mut self, x: &PAdicInt) -> Result<()> {
        if x.p() != self.p || x.precision() != self.m {
            return Err(Error::OperandMismatch(format!(
                "counter holds (p={}, m={}), element is (p={}, m={})",
                self.p,
                self.m,
                x.p(),
                x.precision()
            )));
        }
        // The new element pairs with every current member of its bucket, in
        // both orders.
        self.level_counts[0] += 2 * self.len;
        let mut parent = 0u32;
        for (k, &d) in x.digits().iter().enumerate() {
            let sizes = &mut self.sizes[k];
            let id = *self.levels[k].entry((parent, d)).or_insert_with(|| {
                sizes.push(0);
                (sizes.len() - 1) as u32
            });
            self.level_counts[k + 1] += 2 * sizes[id as usize];
            sizes[id as usize] += 1;
            parent = id;
        }
        self.len += 1;
        Ok(())
    }

    /// Ordered pairs sharing a `k`-digit prefix; non-increasing in `k`.
    pub fn count_at(&self, k: usize) -> u64 {
        assert!(k <= self.m, "level {k} above precision {}", self.m);
        self.level_counts[k]
    }

    /// Ordered pairs of exactly equal truncations.
    pub fn collisions(&self) -> u64 {
        self.level_counts[self.m]
    }
}

struct SweepThreshold {
    s: ExactRational,
    k: u32,
    /// `s_num^b p^(k b)`, updated as `k` advances.
    lhs: BigUint,
    /// `s_den^b`, fixed.
    den_pow: BigUint,
}

/// Evaluates every `(N, s)` cell for `N` in `n_from..=n_to` in one pass over
/// the sequence, reusing prefix counts across `N` and advancing each
/// threshold's disc level monotonically. Rows come out N-major, `s` in the
/// order given.
pub fn sweep(
    xs: &[PAdicInt],
    alpha: &ExactRational,
    s_list: &[ExactRational],
    n_from: u64,
    n_to: u64,
) -> Result<Vec<PairCorrRow>> {
    let (p, m) = check_uniform(xs)?;
    if s_list.is_empty() {
        return Err(Error::InvalidInput("no thresholds given".into()));
    }
    if n_from < 1 || n_from > n_to {
        return Err(Error::InvalidInput(format!(
            "need 1 <= n_from <= n_to, got {n_from}..={n_to}"
        )));
    }
    if n_to > xs.len() as u64 {
        return Err(Error::SequenceTooShort {
            requested: n_to as usize,
            available: xs.len(),
        });
    }
    let (a, b) = alpha_exponents(alpha)?;
    for s in s_list {
        if s.is_negative() {
            return Err(Error::InvalidInput(format!(
                "s must be nonnegative, got {s}"
            )));
        }
        if !s.is_zero() {
            // The deepest level is reached at n_to; fail before any work.
            let disc = disc_measure(p, s, n_to, alpha)?;
            if disc.k0 as usize > m {
                return Err(Error::PrecisionTooSmall {
                    needed: disc.k0,
                    have: m,
                });
            }
        }
    }

    let p_pow_b = BigUint::from(p).pow(b);
    let mut thresholds: Vec<Option<SweepThreshold>> = s_list
        .iter()
        .map(|s| {
            if s.is_zero() {
                None
            } else {
                Some(SweepThreshold {
                    s: s.clone(),
                    k: 0,
                    lhs: s.numerator().magnitude().pow(b),
                    den_pow: s.denominator().magnitude().pow(b),
                })
            }
        })
        .collect();

    let mut counter = PrefixPairCounter::new(p, m)?;
    let mut rows = Vec::with_capacity(((n_to - n_from + 1) as usize) * s_list.len());
    for n in 1..=n_to {
        counter.insert(&xs[(n - 1) as usize])?;
        if n < n_from {
            continue;
        }
        let n_pow = BigUint::from(n).pow(a);
        for slot in thresholds.iter_mut() {
            match slot {
                None => rows.push(PairCorrRow {
                    n,
                    alpha: alpha.clone(),
                    s: ExactRational::zero(),
                    p,
                    k: 0,
                    mu: ExactRational::one(),
                    count: 0,
                    f: 0.0,
                    collisions: counter.collisions(),
                }),
                Some(t) => {
                    // Smallest k with s^b p^(k b) >= N^a; monotone in N, so
                    // each threshold's level only ever moves up.
                    let rhs = &n_pow * &t.den_pow;
                    while t.lhs < rhs {
                        t.k += 1;
                        t.lhs *= &p_pow_b;
                    }
                    debug_assert_eq!(
                        t.k,
                        disc_measure(p, &t.s, n, alpha).expect("validated above").k0
                    );
                    let count = counter.count_at(t.k as usize);
                    let (_, f) = exact_padic_f(count, p, t.k, n)?;
                    rows.push(PairCorrRow {
                        n,
                        alpha: alpha.clone(),
                        s: t.s.clone(),
                        p,
                        k: t.k,
                        mu: ExactRational::power_of(p, -(t.k as i32)),
                        count,
                        f,
                        collisions: counter.collisions(),
                    });
                }
            }
        }
    }
    Ok(rows)
}

/// The `N` values at which the disc level changes, read off a single-`s`
/// run of consecutive `N` rows (as produced by [`sweep`] with one
/// threshold).
pub fn jump_locations(rows: &[PairCorrRow]) -> Result<Vec<u64>> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidInput("no rows".into()))?;
    let mut jumps = Vec::new();
    for pair in rows.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        if cur.s != first.s || cur.p != first.p || cur.alpha != first.alpha {
            return Err(Error::InvalidInput(
                "jump detection needs rows of a single s, p, and alpha".into(),
            ));
        }
        if cur.n != prev.n + 1 {
            return Err(Error::InvalidInput(format!(
                "rows must have consecutive N, got {} after {}",
                cur.n, prev.n
            )));
        }
        if cur.k != prev.k {
            jumps.push(cur.n);
        }
    }
    Ok(jumps)
}

/// Predicted jump set without running a sweep: the disc level first exceeds
/// `k - 1` at the smallest `N` with `N^a s_den^b > s_num^b p^((k-1) b)`.
/// Jumps at `N = 1` are invisible to any sweep (there is no earlier row),
/// so the set starts at 2.
pub fn jump_locations_closed_form(
    p: u64,
    s: &ExactRational,
    alpha: &ExactRational,
    n_max: u64,
) -> Result<Vec<u64>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if s.is_negative() || s.is_zero() {
        return Err(Error::NonPositiveRadius(s.to_string()));
    }
    let (a, b) = alpha_exponents(alpha)?;
    let den_pow = s.denominator().magnitude().pow(b);
    let p_pow_b = BigUint::from(p).pow(b);
    let mut lhs = s.numerator().magnitude().pow(b);
    let mut jumps = Vec::new();
    loop {
        // Smallest N with N^a den_pow > lhs: take an integer root for the
        // candidate, then fix it up against the exact inequality.
        let mut cand = (&lhs / &den_pow).nth_root(a);
        while cand.pow(a) * &den_pow <= lhs {
            cand += 1u32;
        }
        while cand > BigUint::one() && (&cand - 1u32).pow(a) * &den_pow > lhs {
            cand -= 1u32;
        }
        if cand > BigUint::from(n_max) {
            break;
        }
        let n = cand.to_u64().expect("bounded by n_max");
        if n >= 2 && jumps.last() != Some(&n) {
            jumps.push(n);
        }
        lhs *= &p_pow_b;
    }
    Ok(jumps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{gen_naturals, gen_uniform_random, gen_vdc};

    fn q(text: &str) -> ExactRational {
        text.parse().unwrap()
    }

    #[test]
    fn naturals_row_is_exact() {
        let xs = gen_naturals(9, 3, 4).unwrap();
        let row = padic_pair_corr(&xs, &q("1/2"), &q("1")).unwrap();
        assert_eq!(row.n, 9);
        assert_eq!(row.k, 1);
        assert_eq!(row.mu, q("1/3"));
        assert_eq!(row.count, 18);
        assert_eq!(row.f, 2.0 / 3.0);
        assert_eq!(row.collisions, 0);
    }

    #[test]
    fn real_circle_wraps_around() {
        let xs = vec![q("1/20"), q("19/20")];
        let row = real_pair_corr(&xs, &q("1"), &q("3/10")).unwrap();
        assert_eq!(row.count, 2);
        assert_eq!(row.f, 1.0);
        assert_eq!(row.p, 0);
        assert_eq!(row.mu, q("1"));

        // Plain absolute distance does not wrap.
        assert_eq!(real_pair_count_abs(&xs, &q("3/20")).unwrap(), 0);
        assert_eq!(real_pair_count_circle(&xs, &q("1/10")).unwrap(), 2);
    }

    #[test]
    fn abs_count_example() {
        let xs = vec![q("0"), q("1/4"), q("1/2")];
        assert_eq!(real_pair_count_abs(&xs, &q("1/4")).unwrap(), 4);
    }

    #[test]
    fn real_all_pairs_shortcut_matches_loop() {
        let xs = gen_vdc(40, 2).unwrap();
        // s = N at alpha = 1 makes the threshold 1, far beyond 1/2.
        let row = real_pair_corr(&xs, &q("1"), &q("40")).unwrap();
        assert_eq!(row.count, 40 * 39);
    }

    #[test]
    fn real_collisions_are_counted() {
        let xs = vec![q("1/3"), q("1/3"), q("2/3")];
        let row = real_pair_corr(&xs, &q("1"), &q("1/100")).unwrap();
        assert_eq!(row.collisions, 2);
        assert_eq!(row.count, 2);
    }

    #[test]
    fn count_monotone_in_s() {
        let xs = gen_uniform_random(60, 3, 10, 5).unwrap();
        let mut prev = 0;
        for s in ["1/100", "1/10", "1/2", "1", "3", "10"] {
            let row = padic_pair_corr(&xs, &q("1"), &q(s)).unwrap();
            assert!(row.count >= prev, "count dropped at s={s}");
            prev = row.count;
        }
    }

    #[test]
    fn zero_s_row_is_degenerate() {
        let xs = gen_naturals(10, 3, 4).unwrap();
        let row = padic_pair_corr(&xs, &q("1"), &q("0")).unwrap();
        assert_eq!((row.k, row.count, row.f), (0, 0, 0.0));
        assert_eq!(row.mu, q("1"));
    }

    #[test]
    fn precision_too_small_is_reported() {
        let xs = gen_naturals(1000, 3, 3).unwrap();
        match padic_pair_corr(&xs, &q("1"), &q("1/10")) {
            Err(Error::PrecisionTooSmall { needed, have: 3 }) => assert!(needed > 3),
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn streaming_counter_matches_batch() {
        let xs = gen_uniform_random(80, 3, 6, 11).unwrap();
        let mut counter = PrefixPairCounter::new(3, 6).unwrap();
        for (i, x) in xs.iter().enumerate() {
            counter.insert(x).unwrap();
            let prefix = &xs[..=i];
            for k in 0..=6 {
                assert_eq!(
                    counter.count_at(k),
                    padic_pair_count_prefix(prefix, k).unwrap(),
                    "n={} k={k}",
                    i + 1
                );
            }
        }
        assert_eq!(counter.collisions(), counter.count_at(6));
    }

    #[test]
    fn counter_rejects_mismatched_elements() {
        let mut counter = PrefixPairCounter::new(3, 4).unwrap();
        let wrong_m = PAdicInt::from_u64(3, 1, 5).unwrap();
        let wrong_p = PAdicInt::from_u64(5, 1, 4).unwrap();
        assert!(counter.insert(&wrong_m).is_err());
        assert!(counter.insert(&wrong_p).is_err());
    }

    #[test]
    fn sweep_matches_per_n_evaluation() {
        let xs = gen_uniform_random(50, 3, 8, 3).unwrap();
        let s_list = [q("1/10"), q("1/2"), q("0"), q("2")];
        let rows = sweep(&xs, &q("1"), &s_list, 5, 50).unwrap();
        assert_eq!(rows.len(), 46 * 4);
        for row in &rows {
            let direct = padic_pair_corr(&xs[..row.n as usize], &row.alpha, &row.s).unwrap();
            assert_eq!(row, &direct, "N={} s={}", row.n, row.s);
        }
    }

    #[test]
    fn sweep_validates_inputs() {
        let xs = gen_naturals(10, 3, 4).unwrap();
        assert!(sweep(&xs, &q("1"), &[], 1, 10).is_err());
        assert!(sweep(&xs, &q("1"), &[q("1")], 0, 10).is_err());
        assert!(sweep(&xs, &q("1"), &[q("1")], 5, 4).is_err());
        assert!(sweep(&xs, &q("1"), &[q("1")], 1, 11).is_err());
        assert!(sweep(&xs, &q("1"), &[q("-1")], 1, 10).is_err());
        assert!(sweep(&xs, &q("2"), &[q("1")], 1, 10).is_err());
        // Level at n_to = 10 for s = 1/100 exceeds m = 4.
        assert!(matches!(
            sweep(&xs, &q("1"), &[q("1/100")], 1, 10),
            Err(Error::PrecisionTooSmall { .. })
        ));
    }

    #[test]
    fn jump_detector_and_closed_form_agree() {
        let xs = gen_uniform_random(100, 3, 8, 9).unwrap();
        for s in ["1", "1/10", "1/2", "2"] {
            let rows = sweep(&xs, &q("1"), &[q(s)], 1, 100).unwrap();
            let detected = jump_locations(&rows).unwrap();
            let predicted = jump_locations_closed_form(3, &q(s), &q("1"), 100).unwrap();
            assert_eq!(detected, predicted, "s={s}");
        }
    }

    #[test]
    fn jump_closed_form_known_sets() {
        assert_eq!(
            jump_locations_closed_form(3, &q("1"), &q("1"), 100).unwrap(),
            vec![2, 4, 10, 28, 82]
        );
        assert_eq!(
            jump_locations_closed_form(3, &q("1/10"), &q("1"), 2000).unwrap(),
            vec![3, 9, 25, 73, 219, 657, 1969]
        );
        assert_eq!(
            jump_locations_closed_form(2, &q("1"), &q("1"), 20).unwrap(),
            vec![2, 3, 5, 9, 17]
        );
    }

    #[test]
    fn jump_closed_form_rejects_degenerate() {
        assert!(jump_locations_closed_form(4, &q("1"), &q("1"), 10).is_err());
        assert!(jump_locations_closed_form(3, &q("0"), &q("1"), 10).is_err());
        assert!(jump_locations_closed_form(3, &q("1"), &q("2"), 10).is_err());
    }

    #[test]
    fn jump_detector_input_validation() {
        let xs = gen_naturals(10, 3, 4).unwrap();
        let mut rows = sweep(&xs, &q("1"), &[q("1")], 1, 10).unwrap();
        assert!(jump_locations(&rows).is_ok());
        rows.remove(3);
        assert!(jump_locations(&rows).is_err());
        let mixed = sweep(&xs, &q("1"), &[q("1"), q("2")], 1, 10).unwrap();
        assert!(jump_locations(&mixed).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let xs = gen_uniform_random(30, 5, 6, 2).unwrap();
        let rows = [
            padic_pair_corr(&xs, &q("1"), &q("1/2")).unwrap(),
            padic_pair_corr(&xs, &q("1/2"), &q("2")).unwrap(),
            real_pair_corr(&gen_vdc(20, 2).unwrap(), &q("1"), &q("1/10")).unwrap(),
        ];
        for row in rows {
            let mut parsed = parse_csv_line(&row.csv_line()).unwrap();
            parsed.collisions = row.collisions;
            assert_eq!(parsed, row);
        }
    }

    #[test]
    fn csv_parse_rejects_bad_rows() {
        let good = "9,1/2,1,3,1,1/3,18,0.6666666666666666";
        assert!(parse_csv_line(good).is_ok());
        for bad in [
            "9,1/2,1,3,1,1/3,18",
            "9,1/2,1,3,1,1/3,18,0.5,extra",
            "9,2/4,1,3,1,1/3,18,0.5",
            "9,0.5,1,3,1,1/3,18,0.5",
            "9,1/2,1,4,1,1/3,18,0.5",
            "9,1/2,1,3,1,1/3,18,NaN",
            "9,1/2,1,3,1,1/3,18,inf",
            "9,1/2,1,3,-1,1/3,18,0.5",
            "x,1/2,1,3,1,1/3,18,0.5",
        ] {
            assert!(parse_csv_line(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn parsed_known_row_fields() {
        let row = parse_csv_line("9,1/2,1,3,1,1/3,18,0.6666666666666666").unwrap();
        assert_eq!(row.n, 9);
        assert_eq!(row.alpha, q("1/2"));
        assert_eq!(row.mu, q("1/3"));
        assert_eq!(row.count, 18);
        assert_eq!(row.f, 2.0 / 3.0);
    }

    mod prop_tests {
        use super::*;
        use proptest::prelude::*;

        fn arb_seq() -> impl Strategy<Value = Vec<PAdicInt>> {
            (prop_oneof![Just(2u64), Just(3), Just(5)], 1usize..5).prop_flat_map(|(p, m)| {
                proptest::collection::vec(proptest::collection::vec(0..p, m..=m), 1..40).prop_map(
                    move |rows| {
                        rows.into_iter()
                            .map(|digits| PAdicInt::from_digits(p, digits).unwrap())
                            .collect()
                    },
                )
            })
        }

        proptest! {
            #[test]
            fn streaming_equals_batch_at_every_level(xs in arb_seq()) {
                let (p, m) = (xs[0].p(), xs[0].precision());
                let mut counter = PrefixPairCounter::new(p, m).unwrap();
                for x in &xs {
                    counter.insert(x).unwrap();
                }
                let mut prev = u64::MAX;
                for k in 0..=m {
                    let batch = padic_pair_count_prefix(&xs, k).unwrap();
                    prop_assert_eq!(counter.count_at(k), batch);
                    prop_assert!(batch <= prev);
                    prev = batch;
                }
                prop_assert_eq!(counter.count_at(0), (xs.len() * (xs.len() - 1)) as u64);
            }
        }
    }
}
