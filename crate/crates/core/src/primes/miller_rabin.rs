// Jim Sinclair's seven bases; deterministic for every n < 2^64.
const WITNESSES: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
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
    use crate::primes::sieve;

    #[test]
    fn matches_sieve() {
        let t = sieve(200_000).unwrap();
        for n in 0..=200_000 {
            assert_eq!(is_prime_u64(n), t.is_prime(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn large_values() {
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(!is_prime_u64(u64::MAX));
        assert!(is_prime_u64(1_000_000_007));
        // strong pseudoprimes to several small bases
        assert!(!is_prime_u64(3_215_031_751));
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // Carmichael numbers
        for c in [561u64, 41041, 825265, 321197185] {
            assert!(!is_prime_u64(c));
        }
    }
}
