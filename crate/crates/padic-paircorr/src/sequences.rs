//! Sequence generators and the on-disk digit format.
//!
//! Generators produce either truncated p-adic integers (square-root
//! fractional parts, naturals, seeded random digits, files) or exact
//! rationals in [0, 1) (van der Corput). Square-root digits are extracted
//! with arbitrary-precision integer square roots only; no floating point
//! touches the pipeline.
//!
//! File format, one element per line, digits least significant first:
//!
//! ```text
//! # padic p=3 m=5
//! 1,0,2,0,1
//! 2,2,0,1,0
//! ```
//!
//! Writing then reading a sequence is bit-exact. Blank lines are ignored;
//! the header line is mandatory and validated (prime p, m >= 1).

use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::ToPrimitive;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::padic::PAdicInt;
use crate::primes::is_prime_u64;
use crate::rational::ExactRational;

pub fn is_perfect_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// The first `count` non-square integers starting at 2.
pub fn first_nonsquares(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2u64;
    while out.len() < count {
        if !is_perfect_square(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

/// First `m` base-p digits of the fractional part of sqrt(n), most
/// significant fractional digit first in Monna order: entry `i` is the
/// coefficient of `p^-(i+1)`.
///
/// Digit `i` equals `isqrt(n * p^(2(i+1))) mod p`. One integer square root
/// at full precision suffices: with `R = isqrt(n * p^(2m))`, truncating `R`
/// recovers every coarser floor, so the digits are the base-p expansion of
/// `R mod p^m` read from the top.
pub fn sqrt_frac_digits(n: u64, p: u64, m: usize) -> Result<Vec<u64>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::EmptyDigits);
    }
    if n < 2 || is_perfect_square(n) {
        return Err(Error::InvalidInput(format!(
            "radicand must be a non-square integer >= 2, got {n}"
        )));
    }
    let pm = BigUint::from(p).pow(m as u32);
    let r = (BigUint::from(n) * &pm * &pm).sqrt();
    let mut t = r % &pm;
    let base = BigUint::from(p);
    let mut digits = vec![0u64; m];
    for slot in digits.iter_mut().rev() {
        let d = (&t % &base).to_u64().expect("remainder below p");
        *slot = d;
        t /= &base;
    }
    Ok(digits)
}

/// Fractional parts of sqrt(n) over the first `count` non-squares, mapped to
/// truncated p-adic integers by reusing their base-p digits. Elements must
/// be pairwise distinct at precision `m`; a collision is reported with both
/// radicands rather than silently merging mass.
pub fn gen_sqrt_sequence(count: usize, p: u64, m: usize) -> Result<Vec<PAdicInt>> {
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for n in first_nonsquares(count) {
        let digits = sqrt_frac_digits(n, p, m)?;
        if let Some(&prior) = seen.get(&digits) {
            return Err(Error::PrecisionCollision {
                n1: prior,
                n2: n,
                m,
            });
        }
        seen.insert(digits.clone(), n);
        out.push(PAdicInt::from_digits(p, digits)?);
    }
    Ok(out)
}

/// Base-p van der Corput points: digit reversal of n as an exact rational.
pub fn gen_vdc(count: usize, p: u64) -> Result<Vec<ExactRational>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    (1..=count as u64)
        .map(|n| {
            let len = n.ilog(p) as usize + 1;
            Ok(PAdicInt::from_u64(p, n, len)?.monna())
        })
        .collect()
}

/// The integers 1..=count truncated to `m` digits.
pub fn gen_naturals(count: usize, p: u64, m: usize) -> Result<Vec<PAdicInt>> {
    (1..=count as u64)
        .map(|n| PAdicInt::from_u64(p, n, m))
        .collect()
}

/// Seeded uniform random digits; the same seed gives the same elements on
/// every platform.
pub fn gen_uniform_random(count: usize, p: u64, m: usize, seed: u64) -> Result<Vec<PAdicInt>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::EmptyDigits);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digit = Uniform::from(0..p);
    (0..count)
        .map(|_| {
            let digits: Vec<u64> = (0..m).map(|_| digit.sample(&mut rng)).collect();
            PAdicInt::from_digits(p, digits)
        })
        .collect()
}

pub fn write_sequence_to(xs: &[PAdicInt], w: &mut dyn Write) -> Result<()> {
    let first = xs.first().ok_or_else(|| {
        Error::InvalidInput("cannot write an empty sequence: the header needs p and m".into())
    })?;
    let (p, m) = (first.p(), first.precision());
    writeln!(w, "# padic p={p} m={m}")?;
    let mut line = String::new();
    for x in xs {
        if x.p() != p || x.precision() != m {
            return Err(Error::OperandMismatch(format!(
                "sequence mixes (p={p}, m={m}) with (p={}, m={})",
                x.p(),
                x.precision()
            )));
        }
        line.clear();
        for (i, d) in x.digits().iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&d.to_string());
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn write_sequence(xs: &[PAdicInt], path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    write_sequence_to(xs, &mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_header(line: &str) -> Result<(u64, usize)> {
    let bad = || Error::MalformedHeader(line.trim_end().to_string());
    let rest = line.trim_end().strip_prefix("# padic").ok_or_else(bad)?;
    let mut p: Option<u64> = None;
    let mut m: Option<usize> = None;
    for token in rest.split_whitespace() {
        if let Some(v) = token.strip_prefix("p=") {
            p = Some(v.parse().map_err(|_| bad())?);
        } else if let Some(v) = token.strip_prefix("m=") {
            m = Some(v.parse().map_err(|_| bad())?);
        } else {
            return Err(bad());
        }
    }
    let (p, m) = (p.ok_or_else(bad)?, m.ok_or_else(bad)?);
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::MalformedHeader(format!(
            "{} (m must be >= 1)",
            line.trim_end()
        )));
    }
    Ok((p, m))
}

/// Parses the digit format. The first line must be the header; blank lines
/// are skipped; every row must hold exactly `m` digits below `p`.
pub fn read_sequence_str(text: &str) -> Result<Vec<PAdicInt>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::MalformedHeader("empty input".into()))?;
    let (p, m) = parse_header(header)?;
    let mut out = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.trim().is_empty() {
            continue;
        }
        let mut digits = Vec::new();
        for field in row.split(',') {
            let field = field.trim();
            let d: u64 = field.parse().map_err(|_| Error::BadDigit {
                line: line_no,
                text: format!("{field:?}"),
            })?;
            if d >= p {
                return Err(Error::BadDigit {
                    line: line_no,
                    text: format!("{d} (base {p})"),
                });
            }
            digits.push(d);
        }
        if digits.len() != m {
            return Err(Error::RaggedRow {
                line: line_no,
                expected: m,
                found: digits.len(),
            });
        }
        out.push(PAdicInt::from_digits(p, digits)?);
    }
    Ok(out)
}

pub fn read_sequence(path: &Path) -> Result<Vec<PAdicInt>> {
    read_sequence_str(&fs::read_to_string(path)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    SqrtFrac,
    VanDerCorput,
    Naturals,
    UniformRandom,
    File,
}

/// Either side of the statistics: p-adic elements or reals in [0, 1).
#[derive(Clone, Debug)]
pub enum Sequence {
    PAdic(Vec<PAdicInt>),
    Real(Vec<ExactRational>),
}

impl Sequence {
    pub fn len(&self) -> usize {
        match self {
            Sequence::PAdic(v) => v.len(),
            Sequence::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Declarative sequence description, the unit the CLI works with.
///
/// `seed` is required for [`SequenceKind::UniformRandom`] and rejected
/// elsewhere; `path` likewise for [`SequenceKind::File`]. For files the
/// header is authoritative; nonzero `p`/`m` are cross-checked against it,
/// zero means "accept what the file declares". Van der Corput ignores `m`
/// (digit counts grow with n).
#[derive(Clone, Debug)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    pub p: u64,
    pub m: usize,
    pub count: usize,
    pub seed: Option<u64>,
    pub path: Option<PathBuf>,
}

impl SequenceSpec {
    pub fn build(&self) -> Result<Sequence> {
        if self.count == 0 {
            return Err(Error::InvalidInput("count must be at least 1".into()));
        }
        if self.seed.is_some() != (self.kind == SequenceKind::UniformRandom) {
            return Err(Error::InvalidInput(
                "a seed is required for random sequences and meaningless elsewhere".into(),
            ));
        }
        if self.path.is_some() != (self.kind == SequenceKind::File) {
            return Err(Error::InvalidInput(
                "a path is required for file sequences and meaningless elsewhere".into(),
            ));
        }
        match self.kind {
            SequenceKind::SqrtFrac => Ok(Sequence::PAdic(gen_sqrt_sequence(
                self.count, self.p, self.m,
            )?)),
            SequenceKind::VanDerCorput => Ok(Sequence::Real(gen_vdc(self.count, self.p)?)),
            SequenceKind::Naturals => {
                Ok(Sequence::PAdic(gen_naturals(self.count, self.p, self.m)?))
            }
            SequenceKind::UniformRandom => Ok(Sequence::PAdic(gen_uniform_random(
                self.count,
                self.p,
                self.m,
                self.seed.expect("checked above"),
            )?)),
            SequenceKind::File => {
                let xs = read_sequence(self.path.as_deref().expect("checked above"))?;
                if let Some(first) = xs.first() {
                    if self.p != 0 && self.p != first.p() {
                        return Err(Error::OperandMismatch(format!(
                            "file declares p={}, expected p={}",
                            first.p(),
                            self.p
                        )));
                    }
                    if self.m != 0 && self.m != first.precision() {
                        return Err(Error::OperandMismatch(format!(
                            "file declares m={}, expected m={}",
                            first.precision(),
                            self.m
                        )));
                    }
                }
                if xs.len() < self.count {
                    return Err(Error::SequenceTooShort {
                        requested: self.count,
                        available: xs.len(),
                    });
                }
                Ok(Sequence::PAdic(xs.into_iter().take(self.count).collect()))
            }
        }
    }
}
