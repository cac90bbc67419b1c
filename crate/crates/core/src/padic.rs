//! Hilbert symbols of Q at every place, plus two independent ways of
//! deciding solvability of `a x^2 + b y^2 = z^2`: exhaustive search modulo
//! a prime power, and a bounded search for an integral point.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, isqrt, legendre_symbol, odd_prime_divisors, split_prime_power, PrimeInt};
use crate::error::{invalid, Error, Result};

/// A place of Q: a prime, or the real embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinite,
    Finite(PrimeInt),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        PrimeInt::new(p).map(Place::Finite)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => f.write_str("inf"),
            Place::Finite(p) => p.fmt(f),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinite),
            t => {
                let p: u64 = t
                    .parse()
                    .map_err(|_| invalid(format!("place must be 'inf' or a prime, got '{t}'")))?;
                Place::finite(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Value of a Hilbert symbol with nonzero arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HilbertValue {
    Plus,
    Minus,
}

impl HilbertValue {
    pub fn from_parity(exponent: u64) -> Self {
        if exponent % 2 == 0 {
            HilbertValue::Plus
        } else {
            HilbertValue::Minus
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            HilbertValue::Plus => 1,
            HilbertValue::Minus => -1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == HilbertValue::Plus
    }
}

impl Mul for HilbertValue {
    type Output = HilbertValue;
    fn mul(self, rhs: Self) -> Self {
        if self == rhs {
            HilbertValue::Plus
        } else {
            HilbertValue::Minus
        }
    }
}

impl fmt::Display for HilbertValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HilbertValue::Plus => "+1",
            HilbertValue::Minus => "-1",
        })
    }
}

impl Serialize for HilbertValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for HilbertValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(HilbertValue::Plus),
            -1 => Ok(HilbertValue::Minus),
            v => Err(serde::de::Error::custom(format!("Hilbert value must be +-1, got {v}"))),
        }
    }
}

fn check_nonzero(a: i64, b: i64) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(invalid("Hilbert symbol arguments must be nonzero"));
    }
    Ok(())
}

/// `(a, b)_v`: +1 iff `a x^2 + b y^2 = z^2` has a nontrivial solution in
/// the completion of Q at `v`.
pub fn hilbert_symbol(a: i64, b: i64, v: Place) -> Result<HilbertValue> {
    check_nonzero(a, b)?;
    let p = match v {
        Place::Infinite => {
            return Ok(if a < 0 && b < 0 { HilbertValue::Minus } else { HilbertValue::Plus });
        }
        Place::Finite(p) => p,
    };
    let (va, u) = split_prime_power(a, p)?;
    let (vb, w) = split_prime_power(b, p)?;
    // only the square class matters
    let (va, vb) = (u64::from(va % 2), u64::from(vb % 2));

    if p.is_odd() {
        let half = (p.get() - 1) / 2;
        let mut value = HilbertValue::from_parity(va * vb * half);
        if vb == 1 {
            value = value * legendre_value(u, p);
        }
        if va == 1 {
            value = value * legendre_value(w, p);
        }
        Ok(value)
    } else {
        let (u8_, w8) = (u.rem_euclid(8) as u64, w.rem_euclid(8) as u64);
        let exponent = eps(u8_) * eps(w8) + va * omega(w8) + vb * omega(u8_);
        Ok(HilbertValue::from_parity(exponent))
    }
}

fn legendre_value(unit: i64, p: PrimeInt) -> HilbertValue {
    match legendre_symbol(unit, p).expect("odd prime") {
        1 => HilbertValue::Plus,
        -1 => HilbertValue::Minus,
        _ => unreachable!("argument is a p-adic unit"),
    }
}

/// `(u - 1)/2 mod 2` for odd `u`, given `u mod 8`.
fn eps(u_mod8: u64) -> u64 {
    ((u_mod8 - 1) / 2) % 2
}

/// `(u^2 - 1)/8 mod 2` for odd `u`, given `u mod 8`.
fn omega(u_mod8: u64) -> u64 {
    ((u_mod8 * u_mod8 - 1) / 8) % 2
}

/// Hilbert symbols at every place where they can differ from +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocalSymbols(BTreeMap<Place, HilbertValue>);

impl LocalSymbols {
    pub fn get(&self, v: Place) -> Option<HilbertValue> {
        self.0.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Place, HilbertValue)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> HilbertValue {
        self.0.values().fold(HilbertValue::Plus, |acc, &v| acc * v)
    }

    /// Places with symbol -1 (the ramified places of the quaternion algebra).
    pub fn ramified(&self) -> Vec<Place> {
        self.iter().filter(|(_, v)| !v.is_plus()).map(|(p, _)| p).collect()
    }

    pub fn all_plus(&self) -> bool {
        self.0.values().all(|v| v.is_plus())
    }
}

/// Symbols at infinity, at 2 and at every odd prime dividing `a b`. At all
/// remaining places both arguments are units and the symbol is +1.
pub fn hilbert_product(a: i64, b: i64) -> Result<LocalSymbols> {
    check_nonzero(a, b)?;
    let mut places = vec![Place::Infinite, Place::Finite(PrimeInt::new(2)?)];
    places.extend(odd_prime_divisors(a)?.into_iter().map(Place::Finite));
    places.extend(odd_prime_divisors(b)?.into_iter().map(Place::Finite));
    let mut map = BTreeMap::new();
    for v in places {
        if let std::collections::btree_map::Entry::Vacant(e) = map.entry(v) {
            e.insert(hilbert_symbol(a, b, v)?);
        }
    }
    Ok(LocalSymbols(map))
}

/// `2 v_p(4ab) + 1`: from this precision on, a primitive solution modulo
/// `p^k` lifts to a p-adic one.
pub fn lifting_threshold(a: i64, b: i64, p: PrimeInt) -> Result<u32> {
    check_nonzero(a, b)?;
    let v4 = if p.get() == 2 { 2 } else { 0 };
    let (va, _) = split_prime_power(a, p)?;
    let (vb, _) = split_prime_power(b, p)?;
    Ok(2 * (v4 + va + vb) + 1)
}

/// Largest modulus the exhaustive oracle will tabulate.
pub const ORACLE_MAX_MODULUS: u64 = 1 << 28;

/// Exhaustive search for a primitive solution of `a x^2 + b y^2 = z^2`
/// modulo `p^k`.
///
/// Every primitive solution is a unit multiple of one with `x = 1`, or with
/// `p | x` and `y = 1` (both `x` and `y` divisible by `p` would force `z` to
/// be a non-unit as well), so the search runs over those two lines against a
/// table of all squares modulo `p^k`.
pub fn qp_solvable_oracle(a: i64, b: i64, p: PrimeInt, k: u32) -> Result<bool> {
    let threshold = lifting_threshold(a, b, p)?;
    if k < threshold {
        return Err(invalid(format!(
            "precision p^{k} is below the lifting threshold p^{threshold}"
        )));
    }
    let modulus = (p.get() as u128)
        .checked_pow(k)
        .filter(|&m| m <= ORACLE_MAX_MODULUS as u128)
        .ok_or_else(|| Error::Unsupported(format!("{p}^{k} exceeds the oracle table limit")))?
        as u64;

    let m = modulus as i128;
    let mut is_square = vec![false; modulus as usize];
    for z in 0..=modulus / 2 {
        is_square[((z as u128 * z as u128) % modulus as u128) as usize] = true;
    }
    let ar = (a as i128).rem_euclid(m);
    let br = (b as i128).rem_euclid(m);
    let hit = |x: i128, y: i128| is_square[((ar * x % m * x + br * y % m * y) % m) as usize];

    if (0..m).any(|y| hit(1, y)) {
        return Ok(true);
    }
    let step = p.get() as usize;
    Ok((0..m).step_by(step).any(|x| hit(x, 1)))
}

/// A primitive integral point on `a x^2 + b y^2 = z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicPoint {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl ConicPoint {
    pub fn lies_on(&self, a: i64, b: i64) -> bool {
        let (x, y, z) = (self.x as i128, self.y as i128, self.z as i128);
        a as i128 * x * x + b as i128 * y * y == z * z
    }

    pub fn is_primitive(&self) -> bool {
        let g = gcd(gcd(self.x.unsigned_abs(), self.y.unsigned_abs()), self.z.unsigned_abs());
        g == 1
    }

    pub fn max_norm(&self) -> u64 {
        self.x.unsigned_abs().max(self.y.unsigned_abs()).max(self.z.unsigned_abs())
    }
}

impl fmt::Display for ConicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Outcome of a bounded point search. `Inconclusive` says nothing about
/// whether a point exists beyond the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSearch {
    Found(ConicPoint),
    Inconclusive { bound: u64 },
}

impl PointSearch {
    pub fn point(&self) -> Option<ConicPoint> {
        match self {
            PointSearch::Found(pt) => Some(*pt),
            PointSearch::Inconclusive { .. } => None,
        }
    }
}

/// Finds the first primitive point with nonnegative coordinates and
/// `max(x, y, z) <= bound`, ordered by max-norm, then `x` descending, then
/// `y`, then `z` ascending.
pub fn rational_point_search(a: i64, b: i64, bound: u64) -> Result<PointSearch> {
    check_nonzero(a, b)?;
    if bound == 0 {
        return Err(invalid("search bound must be at least 1"));
    }
    let bound = bound.min(i64::MAX as u64 / 2);
    type Key = (u64, Reverse<u64>, u64, u64);
    let mut best: Option<Key> = None;

    // Shell m holds the pairs with max(x, y) = m; z follows from x and y,
    // and every candidate found in shell m has norm >= m.
    for m in 1..=bound {
        if best.is_some_and(|k| k.0 < m) {
            break;
        }
        let pairs = (0..=m).map(move |y| (m, y)).chain((0..m).map(move |x| (x, m)));
        for (x, y) in pairs {
            let t = a as i128 * (x * x) as i128 + b as i128 * (y * y) as i128;
            if t < 0 {
                continue;
            }
            let z = isqrt(t as u128);
            if z * z != t as u128 || z > bound as u128 {
                continue;
            }
            let z = z as u64;
            if gcd(gcd(x, y), z) != 1 {
                continue;
            }
            let key = (x.max(y).max(z), Reverse(x), y, z);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    Ok(match best {
        Some((_, Reverse(x), y, z)) => PointSearch::Found(ConicPoint {
            x: x as i64,
            y: y as i64,
            z: z as i64,
        }),
        None => PointSearch::Inconclusive { bound },
    })
}
