//! Norm membership in unramified local extensions, and the splitting trace
//! for symbol algebras `(alpha, pi^(q l))` over completions of `Q(xi_q)`.

use serde::{Deserialize, Serialize};

use crate::arith::{multiplicative_order, PrimeInt};
use crate::cyclotomic::{find_prime_ideal, power_residue_character, supported_q, CyclotomicInt, PowerCharValue};
use crate::error::{invalid, Error, Result};

/// `b = pi^m u` in a local field, tested against an unramified extension of
/// residual degree `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormQuestion {
    pub m: i64,
    pub f: u64,
}

/// In an unramified extension of residual degree `f`, `pi^m u` is a norm
/// iff `f | m`.
pub fn is_norm_unramified(question: NormQuestion) -> Result<bool> {
    if question.f == 0 {
        return Err(invalid("residual degree must be at least 1"));
    }
    Ok(question.m.rem_euclid(question.f as i64) == 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolAlgebraQuery {
    pub alpha: CyclotomicInt,
    pub p: PrimeInt,
    pub q: PrimeInt,
    pub l: u64,
}

impl SymbolAlgebraQuery {
    pub fn new(alpha: CyclotomicInt, p: PrimeInt, q: PrimeInt, l: u64) -> Result<Self> {
        supported_q(q.get())?;
        if p == q {
            return Err(Error::UnsupportedRamified(format!("{p} ramifies in Q(xi_{q})")));
        }
        if l == 0 {
            return Err(invalid("exponent l must be positive"));
        }
        if alpha.order() != q {
            return Err(invalid("alpha must lie in Z[xi_q] for the same q"));
        }
        if alpha.is_zero() {
            return Err(invalid("alpha must be nonzero"));
        }
        Ok(SymbolAlgebraQuery { alpha, p, q, l })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceCase {
    /// `p` is inert in `Z[xi_q]`.
    InertBase,
    /// `p` splits in `Z[xi_q]` and the character is trivial.
    SplitBaseCharOne,
    /// `p` splits in `Z[xi_q]` and the character is a nontrivial root.
    SplitBaseCharNontrivial,
    /// `alpha` lies in the prime; the local Kummer extension is ramified.
    Ramified,
}

/// How the local Kummer extension `L_P / K_p1` behaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalExtension {
    Trivial,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitTrace {
    pub case: TraceCase,
    pub extension: LocalExtension,
    pub character: String,
    /// Residual degree of `p` in `Q(xi_q)`.
    pub f_prime: u64,
    /// Ramification index and residual degree of `L_P / K_p1`.
    pub e_rel: u64,
    pub f_rel: u64,
    /// Valuation of `p1^(q l)`.
    pub m: u64,
    /// `None` when the extension is ramified and the unramified criterion
    /// does not apply.
    pub is_norm: Option<bool>,
}

pub fn symbol_algebra_norm_trace(query: &SymbolAlgebraQuery) -> Result<SplitTrace> {
    let SymbolAlgebraQuery { alpha, p, q, l } = query;
    let q_val = q.get();
    let f_prime = multiplicative_order(p.get() as i64, *q)?;
    let ideal = find_prime_ideal(*p, *q)?;
    let chi = power_residue_character(alpha, &ideal)?;
    let m = q_val
        .checked_mul(*l)
        .ok_or_else(|| invalid("q * l overflows"))?;
    let inert_base = f_prime == q_val - 1;

    let (case, extension, e_rel, f_rel) = match chi {
        PowerCharValue::Zero => (TraceCase::Ramified, LocalExtension::Ramified, q_val, 1),
        PowerCharValue::Root(0) => {
            let case = if inert_base { TraceCase::InertBase } else { TraceCase::SplitBaseCharOne };
            (case, LocalExtension::Trivial, 1, 1)
        }
        PowerCharValue::Root(_) => {
            let case =
                if inert_base { TraceCase::InertBase } else { TraceCase::SplitBaseCharNontrivial };
            (case, LocalExtension::Inert, 1, q_val)
        }
    };
    let is_norm = match extension {
        LocalExtension::Ramified => None,
        _ => Some(is_norm_unramified(NormQuestion { m: m as i64, f: f_rel })?),
    };
    log::trace!("norm trace p={p} q={q} l={l}: chi={chi} case={case:?}");
    Ok(SplitTrace {
        case,
        extension,
        character: chi.to_string(),
        f_prime,
        e_rel,
        f_rel,
        m,
        is_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;
    use proptest::prelude::*;

    fn prime(p: u64) -> PrimeInt {
        PrimeInt::new(p).unwrap()
    }

    fn query(a: i64, p: u64, q: u64, l: u64) -> SymbolAlgebraQuery {
        let alpha = CyclotomicInt::from_integer(prime(q), a).unwrap();
        SymbolAlgebraQuery::new(alpha, prime(p), prime(q), l).unwrap()
    }

    #[test]
    fn unramified_norm_examples() {
        for m in [-7, 0, 1, 13] {
            assert!(is_norm_unramified(NormQuestion { m, f: 1 }).unwrap());
        }
        assert!(is_norm_unramified(NormQuestion { m: 0, f: 5 }).unwrap());
        assert!(!is_norm_unramified(NormQuestion { m: 3, f: 2 }).unwrap());
        assert!(is_norm_unramified(NormQuestion { m: -6, f: 3 }).unwrap());
        assert!(is_norm_unramified(NormQuestion { m: 3, f: 0 }).is_err());
    }

    #[test]
    fn trace_examples() {
        let t = symbol_algebra_norm_trace(&query(2, 5, 3, 1)).unwrap();
        assert_eq!(t.case, TraceCase::InertBase);
        assert_eq!(t.is_norm, Some(true));

        let t = symbol_algebra_norm_trace(&query(2, 7, 3, 2)).unwrap();
        assert_eq!(t.case, TraceCase::SplitBaseCharNontrivial);
        assert_eq!(t.extension, LocalExtension::Inert);
        assert_eq!((t.f_rel, t.m, t.is_norm), (3, 6, Some(true)));

        let t = symbol_algebra_norm_trace(&query(1, 7, 3, 1)).unwrap();
        assert_eq!(t.case, TraceCase::SplitBaseCharOne);
        assert_eq!((t.f_rel, t.is_norm), (1, Some(true)));

        let t = symbol_algebra_norm_trace(&query(2, 3, 5, 1)).unwrap();
        assert_eq!(t.f_prime, 4);
        assert_eq!(t.case, TraceCase::InertBase);
        assert_eq!(t.character, "0");
        assert_eq!((t.f_rel, t.is_norm), (1, Some(true)));
    }

    #[test]
    fn ramified_trace_is_reported() {
        let t = symbol_algebra_norm_trace(&query(14, 7, 3, 1)).unwrap();
        assert_eq!(t.case, TraceCase::Ramified);
        assert_eq!(t.is_norm, None);
        assert_eq!(t.e_rel * t.f_rel, 3);
    }

    #[test]
    fn query_validation() {
        let alpha = CyclotomicInt::from_integer(prime(3), 2).unwrap();
        assert!(matches!(
            SymbolAlgebraQuery::new(alpha.clone(), prime(3), prime(3), 1),
            Err(Error::UnsupportedRamified(_))
        ));
        assert!(SymbolAlgebraQuery::new(alpha.clone(), prime(7), prime(3), 0).is_err());
        let alpha23 = CyclotomicInt::from_integer(prime(23), 2).unwrap();
        assert!(matches!(
            SymbolAlgebraQuery::new(alpha23, prime(7), prime(23), 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(SymbolAlgebraQuery::new(alpha, prime(7), prime(5), 1).is_err());
    }

    #[test]
    fn trace_consistency() {
        for q in [3u64, 5, 7] {
            for p in primes_up_to(100) {
                if p.get() == q {
                    continue;
                }
                for a in 2..=20 {
                    let t = symbol_algebra_norm_trace(&query(a, p.get(), q, 1)).unwrap();
                    match t.extension {
                        LocalExtension::Trivial => assert_eq!((t.e_rel, t.f_rel), (1, 1)),
                        LocalExtension::Inert => assert_eq!((t.e_rel, t.f_rel), (1, q)),
                        LocalExtension::Ramified => assert_eq!((t.e_rel, t.f_rel), (q, 1)),
                    }
                    match t.case {
                        TraceCase::InertBase => assert_eq!(t.f_prime, q - 1),
                        TraceCase::SplitBaseCharOne | TraceCase::SplitBaseCharNontrivial => {
                            assert!(t.f_prime < q - 1)
                        }
                        TraceCase::Ramified => assert_eq!(a as u64 % p.get(), 0),
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn unramified_is_divisibility(m in -10_000i64..10_000, f in 1u64..50) {
            let q = NormQuestion { m, f };
            prop_assert_eq!(is_norm_unramified(q).unwrap(), m % f as i64 == 0);
            prop_assert_eq!(is_norm_unramified(q).unwrap(), is_norm_unramified(q).unwrap());
        }

        #[test]
        fn cyclotomic_alpha_unramified_is_norm(
            coeffs in proptest::collection::vec(-30i64..30, 4),
            p in proptest::sample::select(vec![2u64, 3, 7, 11, 13, 31, 41]),
            l in 1u64..4,
        ) {
            let q = prime(5);
            let alpha = CyclotomicInt::from_coeffs(q, &coeffs).unwrap();
            prop_assume!(!alpha.is_zero());
            let query = SymbolAlgebraQuery::new(alpha, prime(p), q, l).unwrap();
            let t = symbol_algebra_norm_trace(&query).unwrap();
            if t.case != TraceCase::Ramified {
                prop_assert_eq!(t.is_norm, Some(true));
            }
        }
    }
}
