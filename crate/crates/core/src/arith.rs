//! Exact integer and modular arithmetic over 64-bit machine words.
//!
//! Products are widened to `u128` before reduction, so every modulus below
//! 2^64 is handled without overflow. Primality is deterministic Miller-Rabin
//! with the first twelve prime bases, which is exact for all `u64` inputs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A positive integer that has passed the deterministic primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeInt(u64);

impl PrimeInt {
    pub fn new(value: u64) -> Result<Self> {
        if is_prime_u64(value) {
            Ok(PrimeInt(value))
        } else {
            Err(invalid(format!("{value} is not prime")))
        }
    }

    /// Accepts a signed value, rejecting negatives and composites.
    pub fn from_i64(value: i64) -> Result<Self> {
        if value < 0 {
            return Err(invalid(format!("{value} is negative")));
        }
        Self::new(value as u64)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// Like [`PrimeInt::new`] but additionally rejects 2.
    pub fn odd(value: u64) -> Result<Self> {
        let p = Self::new(value)?;
        if !p.is_odd() {
            return Err(invalid("expected an odd prime, got 2"));
        }
        Ok(p)
    }
}

impl TryFrom<u64> for PrimeInt {
    type Error = Error;
    fn try_from(value: u64) -> Result<Self> {
        PrimeInt::new(value)
    }
}

impl From<PrimeInt> for u64 {
    fn from(p: PrimeInt) -> u64 {
        p.0
    }
}

impl fmt::Display for PrimeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Least nonnegative residue of a signed integer.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
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

/// True iff `|n|` is prime.
pub fn is_prime(n: i64) -> bool {
    is_prime_u64(n.unsigned_abs())
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre_symbol(a: i64, p: PrimeInt) -> Result<i8> {
    if !p.is_odd() {
        return Err(invalid("Legendre symbol needs an odd prime modulus"));
    }
    let p = p.get();
    let r = reduce_signed(a, p);
    if r == 0 {
        return Ok(0);
    }
    match pow_mod(r, (p - 1) / 2, p) {
        1 => Ok(1),
        x if x == p - 1 => Ok(-1),
        x => unreachable!("Euler criterion produced {x} modulo prime {p}"),
    }
}

/// Smallest `f >= 1` with `a^f = 1 (mod l)`.
pub fn multiplicative_order(a: i64, l: PrimeInt) -> Result<u64> {
    let m = l.get();
    let r = reduce_signed(a, m);
    if gcd(r, m) != 1 {
        return Err(invalid(format!("{a} is not a unit modulo {m}")));
    }
    let mut order = m - 1;
    for (r_prime, _) in factorize(m - 1) {
        while order % r_prime == 0 && pow_mod(r, order / r_prime, m) == 1 {
            order /= r_prime;
        }
    }
    Ok(order)
}

/// Exponent of `p` in `n`.
pub fn padic_valuation(n: i64, p: PrimeInt) -> Result<u32> {
    split_prime_power(n, p).map(|(v, _)| v)
}

/// Writes `n = p^v * u` with `p` not dividing `u`; returns `(v, u)`.
pub fn split_prime_power(n: i64, p: PrimeInt) -> Result<(u32, i64)> {
    if n == 0 {
        return Err(invalid("valuation of 0 is infinite"));
    }
    let p = p.get() as i128;
    let mut u = n as i128;
    let mut v = 0;
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    Ok((v, u as i64))
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Prime factorization `[(prime, exponent)]` in ascending prime order.
/// `factorize(0)` and `factorize(1)` are empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut d = 3;
    while d <= TRIAL_LIMIT && d * d <= n {
        push(d, &mut n);
        d += 2;
    }
    if n > 1 {
        let mut large = Vec::new();
        split_large(n, &mut large);
        large.sort_unstable();
        let mut i = 0;
        while i < large.len() {
            let p = large[i];
            let j = large[i..].iter().take_while(|&&x| x == p).count();
            out.push((p, j as u32));
            i += j;
        }
    }
    out
}

fn split_large(n: u64, acc: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        acc.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, acc);
    split_large(n / d, acc);
}

/// Finds a nontrivial divisor of an odd composite `n`. The polynomial
/// constant walks 1, 2, 3, ... so the result is deterministic.
fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        let mut power = 1u64;
        let mut lam = 0u64;
        while d == 1 {
            if power == lam {
                x = y;
                power <<= 1;
                lam = 0;
            }
            y = f(y);
            lam += 1;
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Sorted distinct odd primes dividing `n`.
pub fn odd_prime_divisors(n: i64) -> Result<Vec<PrimeInt>> {
    if n == 0 {
        return Err(invalid("0 has no finite set of prime divisors"));
    }
    Ok(factorize(n.unsigned_abs())
        .into_iter()
        .filter(|&(p, _)| p != 2)
        .map(|(p, _)| PrimeInt(p))
        .collect())
}

/// Primes `<= bound`, ascending, by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<PrimeInt> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(PrimeInt(i as u64));
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Integer square root, `floor(sqrt(n))`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> PrimeInt {
        PrimeInt::new(n).unwrap()
    }

    #[test]
    fn legendre_examples() {
        for q in [3, 5, 7, 11, 13, 101] {
            assert_eq!(legendre_symbol(1, p(q)).unwrap(), 1);
        }
        assert_eq!(legendre_symbol(-1, p(13)).unwrap(), 1);
        assert_eq!(legendre_symbol(-1, p(7)).unwrap(), -1);
        // 4^2 = 16 = 3 mod 13
        assert_eq!(legendre_symbol(3, p(13)).unwrap(), 1);
        assert_eq!(legendre_symbol(26, p(13)).unwrap(), 0);
    }

    #[test]
    fn legendre_rejects_even_modulus() {
        assert!(matches!(legendre_symbol(3, p(2)), Err(Error::InvalidArgument(_))));
        assert!(PrimeInt::new(9).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(7, p(3)).unwrap(), 1);
        assert_eq!(multiplicative_order(2, p(3)).unwrap(), 2);
        assert_eq!(multiplicative_order(3, p(5)).unwrap(), 4);
        assert!(multiplicative_order(10, p(5)).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(12, p(2)).unwrap(), 2);
        assert_eq!(padic_valuation(12, p(5)).unwrap(), 0);
        assert_eq!(padic_valuation(-250, p(5)).unwrap(), 3);
        assert!(padic_valuation(0, p(5)).is_err());
        assert_eq!(split_prime_power(i64::MIN, p(2)).unwrap(), (63, -1));
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(2));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(561));
        assert!(is_prime(-7));
        // strong pseudoprime to bases 2..=37 would need > 3.3e24
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn divisor_examples() {
        assert!(odd_prime_divisors(1).unwrap().is_empty());
        assert_eq!(odd_prime_divisors(-12).unwrap(), vec![p(3)]);
        assert_eq!(odd_prime_divisors(210).unwrap(), vec![p(3), p(5), p(7)]);
        assert!(odd_prime_divisors(0).is_err());
    }

    #[test]
    fn factorize_large_semiprime() {
        let a = 1_000_003u64;
        let b = 998_244_353u64;
        assert_eq!(factorize(a * b), vec![(a, 1), (b, 1)]);
        assert_eq!(factorize(a * a * 8), vec![(2, 3), (a, 2)]);
    }

    #[test]
    fn sieve_matches_primality() {
        let sieved: Vec<u64> = primes_up_to(2000).into_iter().map(PrimeInt::get).collect();
        let direct: Vec<u64> = (0..=2000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieved, direct);
    }

    fn small_odd_prime() -> impl Strategy<Value = u64> {
        proptest::sample::select(
            primes_up_to(10_000)
                .into_iter()
                .map(PrimeInt::get)
                .filter(|&p| p != 2)
                .collect::<Vec<_>>(),
        )
    }

    proptest! {
        #[test]
        fn euler_consistency(a in -1_000_000i64..1_000_000, q in small_odd_prime()) {
            let s = legendre_symbol(a, p(q)).unwrap();
            let e = pow_mod(reduce_signed(a, q), (q - 1) / 2, q);
            let expected = match s { 0 => 0, 1 => 1, _ => q - 1 };
            prop_assert_eq!(e, expected);
        }

        #[test]
        fn legendre_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, q in small_odd_prime()) {
            let lhs = legendre_symbol(a * b, p(q)).unwrap();
            let rhs = legendre_symbol(a, p(q)).unwrap() * legendre_symbol(b, p(q)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn quadratic_reciprocity(a in small_odd_prime(), b in small_odd_prime()) {
            prop_assume!(a != b);
            let lhs = legendre_symbol(a as i64, p(b)).unwrap() * legendre_symbol(b as i64, p(a)).unwrap();
            let rhs = if ((a - 1) / 2) * ((b - 1) / 2) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn order_divides_group_order(a in 1i64..100_000, l in small_odd_prime()) {
            prop_assume!(a as u64 % l != 0);
            let f = multiplicative_order(a, p(l)).unwrap();
            prop_assert_eq!((l - 1) % f, 0);
            prop_assert_eq!(pow_mod(a as u64, f, l), 1);
        }

        #[test]
        fn valuation_is_exact(n in (-1_000_000_000i64..1_000_000_000).prop_filter("nonzero", |n| *n != 0),
                              q in proptest::sample::select(vec![2u64, 3, 5, 7, 11])) {
            let v = padic_valuation(n, p(q)).unwrap();
            let pv = (q as i64).pow(v);
            prop_assert_eq!(n % pv, 0);
            prop_assert_ne!(n % (pv * q as i64), 0);
        }
    }
}
