//! Splitting of quaternion algebras `H_Q(a, b)`, primes of the form
//! `x^2 + n y^2`, and sweeps comparing the two.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{isqrt, primes_up_to, PrimeInt};
use crate::error::{invalid, Error, Result};
use crate::padic::{hilbert_product, rational_point_search, LocalSymbols, PointSearch};

/// The algebra with basis `1, e1, e2, e3`, `e1^2 = a`, `e2^2 = b`,
/// `e1 e2 = -e2 e1 = e3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuaternionAlgebra {
    pub alpha: i64,
    pub beta: i64,
}

impl QuaternionAlgebra {
    pub fn new(alpha: i64, beta: i64) -> Result<Self> {
        if alpha == 0 || beta == 0 {
            return Err(invalid("quaternion algebra parameters must be nonzero"));
        }
        Ok(QuaternionAlgebra { alpha, beta })
    }

    pub fn local_symbols(&self) -> LocalSymbols {
        hilbert_product(self.alpha, self.beta).expect("parameters are nonzero")
    }

    /// Bounded search for a point on `a x^2 + b y^2 = z^2`, a certificate
    /// of splitting. Never used to decide non-splitting.
    pub fn witness(&self, bound: u64) -> Result<PointSearch> {
        rational_point_search(self.alpha, self.beta, bound)
    }
}

/// Split iff every local Hilbert symbol is +1; otherwise a division algebra.
pub fn is_split_quaternion_q(a: &QuaternionAlgebra) -> bool {
    a.local_symbols().all_plus()
}

/// Splitting over a number field of odd degree coincides with splitting
/// over Q for rational parameters.
pub fn split_over_odd_degree_field(degree: u32, a: &QuaternionAlgebra) -> Result<bool> {
    if degree == 0 {
        return Err(invalid("field degree must be positive"));
    }
    if degree % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "even degree {degree}: splitting is not determined by the rational algebra"
        )));
    }
    Ok(is_split_quaternion_q(a))
}

/// Residue classes describing the odd primes `q = x^2 + n y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RepresentationCriterion {
    pub n: u64,
    pub modulus: u64,
    pub classes: &'static [u64],
    pub special_primes: &'static [u64],
}

impl RepresentationCriterion {
    pub fn admits(&self, q: u64) -> bool {
        self.special_primes.contains(&q) || self.classes.contains(&(q % self.modulus))
    }
}

pub const CRITERIA: [RepresentationCriterion; 11] = [
    RepresentationCriterion { n: 3, modulus: 3, classes: &[1], special_primes: &[3] },
    RepresentationCriterion { n: 5, modulus: 20, classes: &[1, 9], special_primes: &[5] },
    RepresentationCriterion { n: 6, modulus: 24, classes: &[1, 7], special_primes: &[] },
    RepresentationCriterion { n: 7, modulus: 7, classes: &[1, 2, 4], special_primes: &[7] },
    RepresentationCriterion { n: 10, modulus: 40, classes: &[1, 9, 11, 19], special_primes: &[] },
    RepresentationCriterion {
        n: 13,
        modulus: 52,
        classes: &[1, 9, 17, 25, 29, 49],
        special_primes: &[13],
    },
    RepresentationCriterion {
        n: 14,
        modulus: 56,
        classes: &[1, 9, 15, 23, 25, 39],
        special_primes: &[],
    },
    RepresentationCriterion { n: 15, modulus: 60, classes: &[1, 19, 31, 49], special_primes: &[] },
    RepresentationCriterion { n: 21, modulus: 84, classes: &[1, 25, 37], special_primes: &[] },
    RepresentationCriterion {
        n: 22,
        modulus: 88,
        classes: &[1, 9, 15, 23, 25, 31, 47, 49, 71, 81],
        special_primes: &[],
    },
    RepresentationCriterion { n: 30, modulus: 120, classes: &[1, 31, 49, 79], special_primes: &[] },
];

/// The values of `n` for which splitting of `H_Q(-n, q)` is known to be
/// equivalent to the congruence condition.
pub const CONVERSE_PROVEN: [u64; 4] = [3, 5, 7, 13];

pub fn supported_n() -> impl Iterator<Item = u64> {
    CRITERIA.iter().map(|c| c.n)
}

pub fn criterion(n: u64) -> Result<&'static RepresentationCriterion> {
    CRITERIA
        .iter()
        .find(|c| c.n == n)
        .ok_or_else(|| invalid(format!("no congruence criterion for n = {n}")))
}

/// Whether `q` lies in the listed residue classes for `n`.
pub fn congruence_criterion(n: u64, q: u64) -> Result<bool> {
    let c = criterion(n)?;
    let q = PrimeInt::odd(q)?;
    Ok(c.admits(q.get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub x: u64,
    pub y: u64,
}

/// `q = x^2 + n y^2` with the smallest `y >= 0`, if one exists.
pub fn represent(n: u64, q: PrimeInt) -> Result<Option<Representation>> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let q = q.get() as u128;
    let n = n as u128;
    let mut y = 0u128;
    while n * y * y <= q {
        let r = q - n * y * y;
        let x = isqrt(r);
        if x * x == r {
            return Ok(Some(Representation { x: x as u64, y: y as u64 }));
        }
        y += 1;
    }
    Ok(None)
}

/// Verdict on one implication over a prime range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationVerdict {
    /// Whether the implication is a proven statement for this `n`
    /// (otherwise the counterexamples are informational).
    pub mandated: bool,
    pub holds: bool,
    pub counterexamples: Vec<u64>,
}

impl ImplicationVerdict {
    fn new(mandated: bool, counterexamples: Vec<u64>) -> Self {
        ImplicationVerdict { mandated, holds: counterexamples.is_empty(), counterexamples }
    }

    /// False only when a mandated implication fails.
    pub fn acceptable(&self) -> bool {
        self.holds || !self.mandated
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub n: u64,
    pub bound: u64,
    pub primes_checked: usize,
    pub split_count: usize,
    pub congruence_count: usize,
    pub representation_count: usize,
    /// Primes where any two of the three predicates disagree.
    pub disagreements: Vec<u64>,
    pub representation_iff_congruence: ImplicationVerdict,
    pub congruence_implies_split: ImplicationVerdict,
    pub split_implies_congruence: ImplicationVerdict,
}

impl EquivalenceReport {
    pub fn mandated_ok(&self) -> bool {
        self.representation_iff_congruence.acceptable()
            && self.congruence_implies_split.acceptable()
            && self.split_implies_congruence.acceptable()
    }
}

#[derive(Debug, Clone, Copy)]
struct PrimeRow {
    q: u64,
    split: bool,
    congruence: bool,
    representation: bool,
}

fn evaluate(n: u64, q: PrimeInt) -> PrimeRow {
    let algebra = QuaternionAlgebra { alpha: -(n as i64), beta: q.get() as i64 };
    PrimeRow {
        q: q.get(),
        split: is_split_quaternion_q(&algebra),
        congruence: criterion(n).expect("n validated").admits(q.get()),
        representation: represent(n, q).expect("n validated").is_some(),
    }
}

/// Compares splitting of `H_Q(-n, q)`, the congruence criterion and
/// representability for every odd prime `q <= bound`.
///
/// `jobs` > 1 spreads the primes over a thread pool; the report does not
/// depend on it.
pub fn verify_equivalence(n: u64, bound: u64, jobs: usize) -> Result<EquivalenceReport> {
    criterion(n)?;
    if bound < 3 {
        return Err(invalid("bound must be at least 3"));
    }
    let primes: Vec<PrimeInt> = primes_up_to(bound).into_iter().filter(|p| p.is_odd()).collect();
    let rows: Vec<PrimeRow> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
        pool.install(|| primes.par_iter().map(|&q| evaluate(n, q)).collect())
    } else {
        primes.iter().map(|&q| evaluate(n, q)).collect()
    };
    log::debug!("n={n}: evaluated {} primes up to {bound}", rows.len());

    let select = |f: fn(&PrimeRow) -> bool| -> Vec<u64> {
        rows.iter().filter(|r| f(r)).map(|r| r.q).collect()
    };
    let converse_mandated = CONVERSE_PROVEN.contains(&n);
    Ok(EquivalenceReport {
        n,
        bound,
        primes_checked: rows.len(),
        split_count: rows.iter().filter(|r| r.split).count(),
        congruence_count: rows.iter().filter(|r| r.congruence).count(),
        representation_count: rows.iter().filter(|r| r.representation).count(),
        disagreements: select(|r| r.split != r.congruence || r.congruence != r.representation),
        representation_iff_congruence: ImplicationVerdict::new(
            true,
            select(|r| r.representation != r.congruence),
        ),
        congruence_implies_split: ImplicationVerdict::new(
            true,
            select(|r| r.congruence && !r.split),
        ),
        split_implies_congruence: ImplicationVerdict::new(
            converse_mandated,
            select(|r| r.split && !r.congruence),
        ),
    })
}
