//! Deterministic primality testing for 64-bit candidates.

/// Strong-probable-prime witnesses that decide primality for every u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin with a witness set that is exhaustive for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n - 1 = d * 2^r with d odd
    let r = (n - 1).trailing_zeros();
    let d = (n - 1) >> r;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_naive(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn matches_trial_division_below_10000() {
        for n in 0..10_000 {
            assert_eq!(is_prime_u64(n), is_prime_naive(n), "disagree at {n}");
        }
    }

    #[test]
    fn rejects_strong_pseudoprimes() {
        // 3215031751 passes bases 2,3,5,7; Carmichael numbers pass Fermat tests.
        for n in [3_215_031_751u64, 561, 1105, 1729, 2465, 6601, 8911] {
            assert!(!is_prime_u64(n), "{n} wrongly accepted");
        }
    }

    #[test]
    fn accepts_large_primes() {
        for n in [
            2_147_483_647u64,          // 2^31 - 1
            2_305_843_009_213_693_951, // 2^61 - 1
            18_446_744_073_709_551_557,
        ] {
            assert!(is_prime_u64(n), "{n} wrongly rejected");
        }
    }
}
