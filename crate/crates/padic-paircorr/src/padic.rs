//! Truncated p-adic integers, the Monna map, and disc measures.
//!
//! A value holds a prime `p` and `m` base-p digits `a_0 .. a_{m-1}`, least
//! significant first, representing `sum a_i p^i` modulo `p^m`. The metric
//! structure comes from the valuation: the index of the first nonzero digit,
//! saturating at `m` for the zero truncation. Two truncations are within
//! distance `p^-k` exactly when their first `k` digits agree, so balls are
//! digit-prefix classes.
//!
//! The Monna map sends `sum a_i p^i` to `sum a_i p^-(i+1)`, an exact rational
//! in [0, 1) with denominator dividing `p^m`. Its inverse reads the base-p
//! expansion of a real in [0, 1) and reuses those digits unchanged; greedy
//! (floor) digit extraction picks the expansion that terminates when one
//! exists, so the round trip is exact on every truncation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::primes::is_prime_u64;
use crate::rational::ExactRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PAdicInt {
    p: u64,
    digits: Vec<u64>,
}

/// Absolute value of a truncation. For the zero truncation every digit we
/// hold vanishes, so `p^-m` is only an upper bound on the true absolute
/// value; `saturated` marks that case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicAbs {
    pub value: ExactRational,
    pub saturated: bool,
}

impl PAdicInt {
    /// Validates the base and digit range; digits are least significant first.
    pub fn from_digits(p: u64, digits: Vec<u64>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if digits.is_empty() {
            return Err(Error::EmptyDigits);
        }
        if let Some(&bad) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::DigitOutOfRange { digit: bad, p });
        }
        Ok(PAdicInt { p, digits })
    }

    /// Base-p expansion of `n mod p^m`.
    pub fn from_integer(p: u64, n: &BigUint, m: usize) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::EmptyDigits);
        }
        let base = BigUint::from(p);
        let mut rest = n.clone();
        let mut digits = Vec::with_capacity(m);
        for _ in 0..m {
            let (q, r) = rest.div_rem(&base);
            digits.push(r.to_u64().expect("remainder below p"));
            rest = q;
        }
        Ok(PAdicInt { p, digits })
    }

    pub fn from_u64(p: u64, n: u64, m: usize) -> Result<Self> {
        Self::from_integer(p, &BigUint::from(n), m)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of stored digits.
    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// The represented integer `sum a_i p^i`, below `p^m`.
    pub fn to_integer(&self) -> BigUint {
        let mut acc = BigUint::zero();
        for &d in self.digits.iter().rev() {
            acc = acc * self.p + d;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.digits.len() != other.digits.len() {
            return Err(Error::OperandMismatch(format!(
                "(p={}, m={}) vs (p={}, m={})",
                self.p,
                self.digits.len(),
                other.p,
                other.digits.len()
            )));
        }
        Ok(())
    }

    /// Digit-wise subtraction with borrow, i.e. `(self - other) mod p^m`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut digits = Vec::with_capacity(self.digits.len());
        let mut borrow = 0u64;
        for (&a, &b) in self.digits.iter().zip(&other.digits) {
            let (d, under) = a.overflowing_sub(b + borrow);
            if under {
                digits.push(d.wrapping_add(self.p));
                borrow = 1;
            } else {
                digits.push(d);
                borrow = 0;
            }
        }
        Ok(PAdicInt { p: self.p, digits })
    }

    /// Digit-wise addition with carry, modulo `p^m`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut digits = Vec::with_capacity(self.digits.len());
        let mut carry = 0u128;
        for (&a, &b) in self.digits.iter().zip(&other.digits) {
            let sum = a as u128 + b as u128 + carry;
            if sum >= self.p as u128 {
                digits.push((sum - self.p as u128) as u64);
                carry = 1;
            } else {
                digits.push(sum as u64);
                carry = 0;
            }
        }
        Ok(PAdicInt { p: self.p, digits })
    }

    /// Index of the first nonzero digit; `m` for the zero truncation.
    pub fn valuation(&self) -> usize {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .unwrap_or(self.digits.len())
    }

    /// `p^-valuation` as an exact rational; see [`PAdicAbs`] for the zero case.
    pub fn abs(&self) -> PAdicAbs {
        let v = self.valuation();
        PAdicAbs {
            value: ExactRational::power_of(self.p, -(v as i32)),
            saturated: v == self.digits.len(),
        }
    }

    /// `sum a_i p^-(i+1)`, exact, in [0, 1).
    pub fn monna(&self) -> ExactRational {
        let mut num = BigUint::zero();
        for &d in &self.digits {
            num = num * self.p + d;
        }
        let den = BigInt::from(BigUint::from(self.p).pow(self.digits.len() as u32));
        ExactRational::new(BigInt::from(num), den).expect("p^m is nonzero")
    }
}

/// Inverse Monna map from a real in [0, 1): the first `m` base-p digits of
/// `x`, extracted greedily, become the p-adic digits unchanged.
pub fn monna_inverse_rational(x: &ExactRational, p: u64, m: usize) -> Result<PAdicInt> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::EmptyDigits);
    }
    if x.is_negative() || x >= &ExactRational::one() {
        return Err(Error::OutsideUnitInterval(x.to_string()));
    }
    let p_rat = ExactRational::from_integer(p);
    let mut frac = x.clone();
    let mut digits = Vec::with_capacity(m);
    for _ in 0..m {
        frac = &frac * &p_rat;
        let d = frac.floor_to_int();
        frac = &frac - &ExactRational::from_integer(d.clone());
        digits.push(d.to_u64().expect("digit below p"));
    }
    PAdicInt::from_digits(p, digits)
}

/// Inverse Monna map from a digit stream: takes the first `m` digits,
/// padding with zeros if the stream runs short.
pub fn monna_inverse_digits(
    p: u64,
    digits: impl IntoIterator<Item = u64>,
    m: usize,
) -> Result<PAdicInt> {
    if m == 0 {
        return Err(Error::EmptyDigits);
    }
    let mut taken: Vec<u64> = digits.into_iter().take(m).collect();
    taken.resize(m, 0);
    PAdicInt::from_digits(p, taken)
}

/// Haar measure of the p-adic disc of radius `s / N^alpha` around any point:
/// `mu = p^-k0` for the smallest `k0 >= 0` with `p^-k0 <= s / N^alpha`.
/// A radius of 1 or more gives `k0 = 0`, `mu = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscMeasure {
    pub k0: u32,
    pub mu: ExactRational,
}

/// Exponent pair (a, b) of `alpha = a/b`, validated to lie in (0, 1].
pub fn alpha_exponents(alpha: &ExactRational) -> Result<(u32, u32)> {
    let parts = alpha
        .small_ratio_parts()
        .filter(|_| alpha <= &ExactRational::one())
        .ok_or_else(|| Error::AlphaOutOfRange(alpha.to_string()))?;
    // Cap the denominator: comparisons raise values to the b-th power.
    if parts.1 > 4096 {
        return Err(Error::AlphaOutOfRange(format!(
            "{alpha} (denominator above 4096)"
        )));
    }
    Ok(parts)
}

/// Smallest `k0` with `p^-k0 <= s / N^alpha`, decided exactly: for
/// `alpha = a/b` the inequality is `s_num^b p^(k b) >= N^a s_den^b`.
pub fn disc_measure(
    p: u64,
    s: &ExactRational,
    n: u64,
    alpha: &ExactRational,
) -> Result<DiscMeasure> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    if s <= &ExactRational::zero() {
        return Err(Error::NonPositiveRadius(s.to_string()));
    }
    let (a, b) = alpha_exponents(alpha)?;
    let mut lhs = s.numerator().magnitude().pow(b);
    let rhs = BigUint::from(n).pow(a) * s.denominator().magnitude().pow(b);
    let step = BigUint::from(p).pow(b);
    let mut k0: u32 = 0;
    while lhs < rhs {
        lhs *= &step;
        k0 += 1;
    }
    Ok(DiscMeasure {
        k0,
        mu: ExactRational::power_of(p, -(k0 as i32)),
    })
}

/// The class `k` with `p^-(k+1) < s/N^alpha <= p^-k` together with the
/// rescale factor `x = (s/N^alpha) p^k`, which always lands in (1/p, 1].
/// This differs from [`disc_measure`]'s `k0` unless the radius is an exact
/// power of p; `k0` names the largest ball inside the radius, this class
/// names the smallest ball containing it.
///
/// The factor is only rational when `N^alpha` is, so `N^a` must be a perfect
/// b-th power (always true for alpha = 1); the radius must not exceed 1.
pub fn rescale_class(
    p: u64,
    s: &ExactRational,
    n: u64,
    alpha: &ExactRational,
) -> Result<(u32, ExactRational)> {
    let dm = disc_measure(p, s, n, alpha)?;
    let (a, b) = alpha_exponents(alpha)?;
    let na = BigUint::from(n).pow(a);
    let root = na.nth_root(b);
    if root.clone().pow(b) != na {
        return Err(Error::InvalidInput(format!(
            "N^alpha is irrational for N={n}, alpha={alpha}; no rational rescale factor"
        )));
    }
    let radius = s / &ExactRational::from_biguint(root);
    if radius > ExactRational::one() {
        return Err(Error::InvalidInput(format!(
            "radius s/N^alpha = {radius} exceeds 1; the rescale class is undefined"
        )));
    }
    // radius < 1 forces k0 >= 1, so the subtraction below cannot underflow.
    let k = if ExactRational::power_of(p, -(dm.k0 as i32)) == radius {
        dm.k0
    } else {
        dm.k0 - 1
    };
    let x = &radius * &ExactRational::power_of(p, k as i32);
    Ok((k, x))
}
