//! Arithmetic in `Z[xi_q]`, splitting of rational primes in `Q(xi_q)`, and
//! the q-th power residue character that governs splitting in Kummer
//! extensions `Q(xi_q, alpha^(1/q))`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{multiplicative_order, mul_mod, pow_mod, reduce_signed, PrimeInt};
use crate::error::{invalid, Error, Result};

/// Orders of roots of unity whose cyclotomic integers form a principal ideal
/// domain; the residue-character machinery is restricted to these.
pub const SUPPORTED_Q: [u64; 7] = [3, 5, 7, 11, 13, 17, 19];

pub fn supported_q(q: u64) -> Result<PrimeInt> {
    if !SUPPORTED_Q.contains(&q) {
        return Err(invalid(format!("q = {q} is not one of {SUPPORTED_Q:?}")));
    }
    PrimeInt::new(q)
}

/// Polynomial over `F_p`, coefficients constant term first, no trailing
/// zeros. The derived ordering compares coefficient sequences
/// lexicographically from the constant term.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let mut poly = FpPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        poly.trim();
        poly
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, [c])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, [0, 1])
    }

    /// `1 + x + ... + x^(q-1)`.
    pub fn cyclotomic(q: u64, p: u64) -> Self {
        Self::new(p, std::iter::repeat_n(1, q as usize))
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn make_monic(&self) -> Self {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lead) => {
                let inv = self.inv(lead);
                FpPoly::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)))
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new(
            self.p,
            (0..n).map(|i| (get(&self.coeffs, i) + get(&other.coeffs, i)) % self.p),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        FpPoly::new(
            self.p,
            (0..n).map(|i| (get(&self.coeffs, i) + self.p - get(&other.coeffs, i)) % self.p),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let dd = divisor.deg();
        if self.coeffs.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let lead_inv = self.inv(*divisor.coeffs.last().unwrap());
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], lead_inv, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = (rem[k] + p - mul_mod(c, d, p)) % p;
            }
        }
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, exp: u64, modulus: &Self) -> Self {
        self.pow_mod_big(&BigUint::from(exp), modulus)
    }

    pub fn pow_mod_big(&self, exp: &BigUint, modulus: &Self) -> Self {
        let mut acc = FpPoly::constant(self.p, 1).rem(modulus);
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul_mod(&acc, modulus);
            if exp.bit(i) {
                acc = acc.mul_mod(&base, modulus);
            }
        }
        acc
    }
}

impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p.cmp(&other.p).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Splits a squarefree monic `f` into `(d, product of its degree-d
/// irreducible factors)` using `gcd(f, x^(p^d) - x)`.
pub fn distinct_degree_factorization(f: &FpPoly) -> Vec<(usize, FpPoly)> {
    let p = f.p;
    let x = FpPoly::x(p);
    let mut rest = f.make_monic();
    let mut frob = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        frob = frob.pow_mod(p, &rest);
        let g = rest.gcd(&frob.sub(&x));
        if g.deg() > 0 {
            rest = rest.div_rem(&g).0;
            frob = frob.rem(&rest);
            out.push((d, g));
        }
    }
    if rest.deg() > 0 {
        out.push((rest.deg(), rest));
    }
    out
}

/// Deterministic equal-degree splitting of a monic squarefree `f` whose
/// irreducible factors all have degree `d`. Test polynomials are taken in
/// a fixed enumeration order, so the factor list is reproducible.
pub fn equal_degree_factorization(f: &FpPoly, d: usize) -> Vec<FpPoly> {
    let f = f.make_monic();
    let mut out = Vec::new();
    edf_into(&f, d, &mut out);
    out.sort();
    out
}

fn edf_into(f: &FpPoly, d: usize, out: &mut Vec<FpPoly>) {
    let n = f.deg();
    if n == d {
        out.push(f.clone());
        return;
    }
    debug_assert!(n % d == 0 && n > d);
    let p = f.p;
    for index in p.. {
        let t = poly_from_index(p, index);
        if t.deg() >= n {
            unreachable!("no splitting polynomial found for {f:?}");
        }
        let g = match split_probe(&t, f, d) {
            Some(g) => g,
            None => continue,
        };
        let h = f.div_rem(&g).0;
        edf_into(&g, d, out);
        edf_into(&h, d, out);
        return;
    }
}

fn poly_from_index(p: u64, mut index: u64) -> FpPoly {
    let mut coeffs = Vec::new();
    while index > 0 {
        coeffs.push(index % p);
        index /= p;
    }
    FpPoly::new(p, coeffs)
}

/// A proper factor of `f` exposed by the test polynomial `t`, if any.
fn split_probe(t: &FpPoly, f: &FpPoly, d: usize) -> Option<FpPoly> {
    let p = f.p;
    let candidate = if p == 2 {
        // trace t + t^2 + ... + t^(2^(d-1)) lands in F_2 on each factor
        let mut acc = t.rem(f);
        let mut cur = acc.clone();
        for _ in 1..d {
            cur = cur.mul_mod(&cur, f);
            acc = acc.add(&cur);
        }
        acc
    } else {
        // t^((p^d - 1)/2) = (t * t^p * ... * t^(p^(d-1)))^((p-1)/2)
        let mut norm = t.rem(f);
        let mut cur = norm.clone();
        for _ in 1..d {
            cur = cur.pow_mod(p, f);
            norm = norm.mul_mod(&cur, f);
        }
        norm.pow_mod((p - 1) / 2, f).sub(&FpPoly::constant(p, 1))
    };
    let g = f.gcd(&candidate);
    (g.deg() > 0 && g.deg() < f.deg()).then_some(g)
}

/// Element of `Z[xi_q]` in the basis `1, xi, ..., xi^(q-2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicInt {
    q: PrimeInt,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    /// Reduces an arbitrary coefficient vector in powers of `xi` modulo
    /// `Phi_q`.
    pub fn from_coeffs(q: PrimeInt, coeffs: &[i64]) -> Result<Self> {
        if !q.is_odd() {
            return Err(invalid("cyclotomic order must be an odd prime"));
        }
        Ok(CyclotomicInt { q, coeffs: cyclo_reduce(q, coeffs)? })
    }

    pub fn from_integer(q: PrimeInt, n: i64) -> Result<Self> {
        Self::from_coeffs(q, &[n])
    }

    pub fn one(q: PrimeInt) -> Result<Self> {
        Self::from_integer(q, 1)
    }

    /// `xi^k`.
    pub fn xi_power(q: PrimeInt, k: u64) -> Result<Self> {
        let mut coeffs = vec![0i64; q.get() as usize];
        coeffs[(k % q.get()) as usize] = 1;
        Self::from_coeffs(q, &coeffs)
    }

    pub fn order(&self) -> PrimeInt {
        self.q
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The rational integer this element equals, if it lies in Z.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(invalid(format!(
                "mismatched cyclotomic orders {} and {}",
                self.q, other.q
            )));
        }
        Ok(())
    }

    /// Image in `F_p[x]`, with `xi` sent to `x`.
    pub fn reduce_mod(&self, p: u64) -> FpPoly {
        FpPoly::new(p, self.coeffs.iter().map(|&c| reduce_signed(c, p)))
    }
}

fn overflow() -> Error {
    invalid("cyclotomic coefficient overflow")
}

/// Rewrites `sum c_i xi^i` in the basis `1, ..., xi^(q-2)` using `xi^q = 1`
/// and `xi^(q-1) = -(1 + xi + ... + xi^(q-2))`.
pub fn cyclo_reduce(q: PrimeInt, coeffs: &[i64]) -> Result<Vec<i64>> {
    let q = q.get() as usize;
    let mut folded = vec![0i64; q];
    for (i, &c) in coeffs.iter().enumerate() {
        let slot = &mut folded[i % q];
        *slot = slot.checked_add(c).ok_or_else(overflow)?;
    }
    let top = folded[q - 1];
    folded.truncate(q - 1);
    for c in &mut folded {
        *c = c.checked_sub(top).ok_or_else(overflow)?;
    }
    Ok(folded)
}

pub fn cyclo_add(a: &CyclotomicInt, b: &CyclotomicInt) -> Result<CyclotomicInt> {
    a.same_order(b)?;
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(x, y)| x.checked_add(*y).ok_or_else(overflow))
        .collect::<Result<Vec<_>>>()?;
    Ok(CyclotomicInt { q: a.q, coeffs })
}

pub fn cyclo_mul(a: &CyclotomicInt, b: &CyclotomicInt) -> Result<CyclotomicInt> {
    a.same_order(b)?;
    let q = a.q.get() as usize;
    // product modulo x^q - 1, then fold the xi^(q-1) coordinate
    let mut cyclic = vec![0i64; q];
    for (i, &x) in a.coeffs.iter().enumerate() {
        for (j, &y) in b.coeffs.iter().enumerate() {
            let term = x.checked_mul(y).ok_or_else(overflow)?;
            let slot = &mut cyclic[(i + j) % q];
            *slot = slot.checked_add(term).ok_or_else(overflow)?;
        }
    }
    CyclotomicInt::from_coeffs(a.q, &cyclic)
}

/// Ramification index, residual degree and number of primes above a base
/// prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionType {
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

impl DecompositionType {
    pub fn degree(&self) -> u64 {
        self.e * self.f * self.g
    }
}

/// Decomposition of `p` in `Q(zeta_l)` for a prime `l >= 3` not equal to `p`.
pub fn cyclotomic_decomposition(p: PrimeInt, l: PrimeInt) -> Result<DecompositionType> {
    if !l.is_odd() {
        return Err(invalid("cyclotomic order must be at least 3"));
    }
    if p == l {
        return Err(Error::UnsupportedRamified(format!("{p} ramifies in Q(zeta_{l})")));
    }
    let f = multiplicative_order(p.get() as i64, l)?;
    Ok(DecompositionType { e: 1, f, g: (l.get() - 1) / f })
}

/// The prime ideal `(p, g(xi))` of `Z[xi_q]`, `g` a monic irreducible factor
/// of `Phi_q` modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeIdealRep {
    pub p: PrimeInt,
    pub q: PrimeInt,
    pub g: FpPoly,
}

impl PrimeIdealRep {
    pub fn residue_degree(&self) -> usize {
        self.g.deg()
    }

    /// `|Z[xi]/P| = p^f`.
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.p.get()).pow(self.residue_degree() as u32)
    }

    /// Checks every structural invariant; the irreducibility check relies on
    /// all factors of `Phi_q` mod `p` sharing the degree `ord_q(p)`.
    pub fn validate(&self) -> Result<()> {
        supported_q(self.q.get())?;
        if self.p == self.q {
            return Err(Error::UnsupportedRamified(format!("p = q = {}", self.p)));
        }
        let f = multiplicative_order(self.p.get() as i64, self.q)? as usize;
        let phi = FpPoly::cyclotomic(self.q.get(), self.p.get());
        if self.g.modulus() != self.p.get()
            || !self.g.is_monic()
            || self.g.deg() != f
            || !self.g.divides(&phi)
        {
            return Err(invalid(format!(
                "({}, {}) is not a prime of Z[xi_{}] above {}",
                self.p, self.g, self.q, self.p
            )));
        }
        Ok(())
    }
}

/// The prime above `p` whose factor `g` is smallest when coefficient
/// sequences are compared from the constant term.
pub fn find_prime_ideal(p: PrimeInt, q: PrimeInt) -> Result<PrimeIdealRep> {
    supported_q(q.get())?;
    if p == q {
        return Err(Error::UnsupportedRamified(format!("{p} ramifies in Q(xi_{q})")));
    }
    let f = multiplicative_order(p.get() as i64, q)? as usize;
    let phi = FpPoly::cyclotomic(q.get(), p.get());
    let blocks = distinct_degree_factorization(&phi);
    debug_assert!(blocks.len() == 1 && blocks[0].0 == f, "{blocks:?}");
    let block = blocks
        .into_iter()
        .find(|(d, _)| *d == f)
        .map(|(_, b)| b)
        .expect("Phi_q mod p splits into factors of degree ord_q(p)");
    let g = equal_degree_factorization(&block, f)
        .into_iter()
        .next()
        .expect("nonempty factorization");
    Ok(PrimeIdealRep { p, q, g })
}

/// Value of the q-th power residue character: 0, or `xi^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerCharValue {
    Zero,
    Root(u64),
}

impl PowerCharValue {
    pub fn is_trivial(self) -> bool {
        self == PowerCharValue::Root(0)
    }
}

impl fmt::Display for PowerCharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerCharValue::Zero => f.write_str("zero"),
            PowerCharValue::Root(k) => k.fmt(f),
        }
    }
}

impl Serialize for PowerCharValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PowerCharValue::Zero => s.serialize_str("zero"),
            PowerCharValue::Root(k) => s.serialize_u64(*k),
        }
    }
}

/// `(alpha / P)_q`: the `k` with `alpha^((N(P) - 1)/q) = xi^k` in the residue
/// field `F_p[x]/(g)`, or `Zero` when `alpha` lies in `P`.
pub fn power_residue_character(alpha: &CyclotomicInt, ideal: &PrimeIdealRep) -> Result<PowerCharValue> {
    ideal.validate()?;
    if alpha.order() != ideal.q {
        return Err(invalid(format!(
            "element of Z[xi_{}] paired with a prime of Z[xi_{}]",
            alpha.order(),
            ideal.q
        )));
    }
    let g = &ideal.g;
    let p = ideal.p.get();
    let q = ideal.q.get();
    let residue = alpha.reduce_mod(p).rem(g);
    if residue.is_zero() {
        return Ok(PowerCharValue::Zero);
    }
    let exponent = (ideal.norm() - BigUint::one()) / BigUint::from(q);
    let value = residue.pow_mod_big(&exponent, g);

    let xi = FpPoly::x(p).rem(g);
    let mut power = FpPoly::constant(p, 1).rem(g);
    for k in 0..q {
        if power == value {
            return Ok(PowerCharValue::Root(k));
        }
        power = power.mul_mod(&xi, g);
    }
    unreachable!("character value {value} is not a q-th root of unity modulo {g:?}")
}

/// Behaviour of a prime of `Z[xi_q]` in `Q(xi_q, alpha^(1/q))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KummerSplitting {
    /// The prime is the q-th power of a prime above it.
    Ramified,
    /// The prime stays prime.
    Inert,
    /// The prime splits into q distinct primes.
    Split,
}

impl fmt::Display for KummerSplitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KummerSplitting::Ramified => "Ramified",
            KummerSplitting::Inert => "Inert",
            KummerSplitting::Split => "Split",
        })
    }
}

impl From<PowerCharValue> for KummerSplitting {
    fn from(chi: PowerCharValue) -> Self {
        match chi {
            PowerCharValue::Zero => KummerSplitting::Ramified,
            PowerCharValue::Root(0) => KummerSplitting::Split,
            PowerCharValue::Root(_) => KummerSplitting::Inert,
        }
    }
}

pub fn kummer_splitting(alpha: &CyclotomicInt, p: PrimeInt, q: PrimeInt) -> Result<KummerSplitting> {
    if alpha.is_zero() {
        return Err(invalid("Kummer generator must be nonzero"));
    }
    let ideal = find_prime_ideal(p, q)?;
    power_residue_character(alpha, &ideal).map(KummerSplitting::from)
}
