//! Counting SRIM and SCRIM factors of `x^n ± 1`: divisor-sum closed forms,
//! recursions in the 2-part of the length, difference identities, the
//! extreme-case classifiers and the two-prime corollaries.
//!
//! SRIM counts are over `F_q`; SCRIM counts are over `F_{q^2}` with `q` the
//! base order throughout.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::factorization::Mode;
use crate::numtheory::{self, euler_phi, exact_divide, gcd, is_good, is_oddly_good, mult_ord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTerm {
    pub d: u64,
    pub member: bool,
    pub phi: u64,
    pub ord: u64,
    pub contribution: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountBreakdown {
    pub q: u64,
    pub m: u32,
    pub n_prime: u64,
    pub nu: u32,
    pub terms: Vec<CountTerm>,
    pub total: u64,
}

impl CountBreakdown {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("breakdown serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremeClass {
    AllSelf,
    OnlyXPlusOne,
    Mixed,
}

fn check_odd_q(q: u64) -> Result<()> {
    if q < 3 || q % 2 == 0 {
        return Err(Error::EvenOrder(q));
    }
    Ok(())
}

fn check_coprime(q: u64, n: u64) -> Result<()> {
    if n == 0 {
        return Err(invalid("length must be positive"));
    }
    let g = gcd(n, q);
    if g != 1 {
        return Err(Error::NotCoprime { a: q, n, g });
    }
    Ok(())
}

/// `ord_d(q^2)` without forming `q^2`.
fn ord_sq(q: u64, d: u64) -> Result<u64> {
    let r = q % d;
    mult_ord(((r as u128 * r as u128) % d as u128) as u64, d)
}

fn term(d: u64, member: bool, ord: impl FnOnce() -> Result<u64>) -> Result<CountTerm> {
    let phi = euler_phi(d)?;
    let ord = ord()?;
    if member && phi % ord != 0 {
        return Err(Error::Inconsistent(format!("phi({d}) = {phi} not divisible by {ord}")));
    }
    Ok(CountTerm {
        d,
        member,
        phi,
        ord,
        contribution: if member { phi / ord } else { 0 },
    })
}

fn assemble(q: u64, n: u64, terms: Vec<CountTerm>) -> Result<CountBreakdown> {
    let m = exact_divide(2, n)?;
    Ok(CountBreakdown {
        q,
        m,
        n_prime: n >> m,
        nu: numtheory::nu(q)?,
        total: terms.iter().map(|t| t.contribution).sum(),
        terms,
    })
}

/// Number of SRIM factors of `x^n - 1` over `F_q`.
pub fn count_srim_cyclic(q: u64, n: u64) -> Result<CountBreakdown> {
    check_odd_q(q)?;
    check_coprime(q, n)?;
    let terms = numtheory::divisors(n)?
        .into_iter()
        .map(|d| term(d, is_good(d, q)?, || mult_ord(q, d)))
        .collect::<Result<Vec<_>>>()?;
    assemble(q, n, terms)
}

/// Number of SCRIM factors of `x^n - 1` over `F_{q^2}`.
pub fn count_scrim_cyclic(q: u64, n: u64) -> Result<CountBreakdown> {
    check_odd_q(q)?;
    check_coprime(q, n)?;
    let terms = numtheory::divisors(n)?
        .into_iter()
        .map(|d| term(d, is_oddly_good(d, q)?, || ord_sq(q, d)))
        .collect::<Result<Vec<_>>>()?;
    assemble(q, n, terms)
}

fn negacyclic_terms(
    q: u64,
    m: u32,
    n_prime: u64,
    member: impl Fn(u64) -> Result<bool>,
    ord: impl Fn(u64) -> Result<u64>,
) -> Result<CountBreakdown> {
    check_odd_q(q)?;
    if n_prime % 2 == 0 {
        return Err(invalid("n' must be odd"));
    }
    check_coprime(q, n_prime)?;
    if m >= 40 {
        return Err(invalid("2-part of the length is too large"));
    }
    let nu = numtheory::nu(q)?;
    let mut terms = Vec::new();
    for d in numtheory::divisors(n_prime)? {
        let big_d = (1u64 << (m + 1)) * d;
        let mut t = term(big_d, member(big_d)?, || ord(big_d))?;
        t.d = d;
        terms.push(t);
    }
    let total = terms.iter().map(|t| t.contribution).sum();
    if m >= nu && total != 0 {
        return Err(Error::Inconsistent(format!("nonzero count {total} with m >= nu")));
    }
    Ok(CountBreakdown {
        q,
        m,
        n_prime,
        nu,
        terms,
        total,
    })
}

/// Number of SRIM factors of `x^{2^m n'} + 1` over `F_q`.
pub fn count_srim_negacyclic(q: u64, m: u32, n_prime: u64) -> Result<CountBreakdown> {
    negacyclic_terms(q, m, n_prime, |d| is_good(d, q), |d| mult_ord(q, d))
}

/// Number of SCRIM factors of `x^{2^m n'} + 1` over `F_{q^2}`.
pub fn count_scrim_negacyclic(q: u64, m: u32, n_prime: u64) -> Result<CountBreakdown> {
    negacyclic_terms(q, m, n_prime, |d| is_oddly_good(d, q), |d| ord_sq(q, d))
}

fn split(n: u64) -> Result<(u32, u64)> {
    let m = exact_divide(2, n)?;
    Ok((m, n >> m))
}

/// Self-paired factor count of `x^n - 1` (SRIM for Euclidean, SCRIM for Hermitian).
pub fn count_cyclic(q: u64, n: u64, mode: Mode) -> Result<u64> {
    Ok(match mode {
        Mode::Euclidean => count_srim_cyclic(q, n)?.total,
        Mode::Hermitian => count_scrim_cyclic(q, n)?.total,
    })
}

/// Self-paired factor count of `x^n + 1`, `n` coprime to `q`.
pub fn count_negacyclic(q: u64, n: u64, mode: Mode) -> Result<u64> {
    check_coprime(q, n)?;
    let (m, n_prime) = split(n)?;
    Ok(match mode {
        Mode::Euclidean => count_srim_negacyclic(q, m, n_prime)?.total,
        Mode::Hermitian => count_scrim_negacyclic(q, m, n_prime)?.total,
    })
}

/// `count(x^n + 1) == count(x^{2n} - 1) - count(x^n - 1)`.
pub fn lem2_check(q: u64, n: u64, mode: Mode) -> Result<bool> {
    let neg = count_negacyclic(q, n, mode)?;
    let big = count_cyclic(q, 2 * n, mode)?;
    let small = count_cyclic(q, n, mode)?;
    Ok(big >= small && neg == big - small)
}

/// `(A, B, nu)` with `A = |SRIM_{q,n'}(1)|`, `B = |SRIM_{q^2,n'}(1)|`.
fn srim_bases(q: u64, n_prime: u64) -> Result<(u64, u64, u32)> {
    check_odd_q(q)?;
    if n_prime % 2 == 0 {
        return Err(invalid("n' must be odd"));
    }
    let a = count_srim_cyclic(q, n_prime)?.total;
    let q2 = q.checked_mul(q).ok_or_else(|| invalid("q^2 overflows"))?;
    let b = count_srim_cyclic(q2, n_prime)?.total;
    if b > 2 * a {
        return Err(Error::Inconsistent(format!("B = {b} exceeds 2A = {}", 2 * a)));
    }
    Ok((a, b, numtheory::nu(q)?))
}

/// `|SRIM_{q, 2^m n'}(1)|` from the odd-part counts.
pub fn count_srim_cyclic_recursive(q: u64, m: u32, n_prime: u64) -> Result<u64> {
    let (a, b, nu) = srim_bases(q, n_prime)?;
    Ok(match m {
        0 => a,
        _ if m == 1 || nu == 1 => 2 * a,
        _ => 2 * a + ((1u64 << (m.min(nu) - 1)) - 1) * (2 * a - b),
    })
}

/// The recursion with exponent `min(m, nu)` in place of `min(m, nu) - 1`.
/// Disagrees with the true count, e.g. 5 instead of 3 at `(3, 2, 1)`.
pub fn count_srim_cyclic_recursive_as_printed(q: u64, m: u32, n_prime: u64) -> Result<u64> {
    let (a, b, nu) = srim_bases(q, n_prime)?;
    Ok(match m {
        0 => a,
        _ if m == 1 || nu == 1 => 2 * a,
        _ => 2 * a + ((1u64 << m.min(nu)) - 1) * (2 * a - b),
    })
}

/// `|SRIM_{q, 2^m n'}(-1)|` from the odd-part counts.
pub fn count_srim_negacyclic_recursive(q: u64, m: u32, n_prime: u64) -> Result<u64> {
    let (a, b, nu) = srim_bases(q, n_prime)?;
    Ok(match m {
        0 => a,
        _ if m < nu => (1u64 << (m - 1)) * (2 * a - b),
        _ => 0,
    })
}

/// The recursion with coefficient 3 at `m = 1` and `2^m` for `2 <= m < nu`.
/// Disagrees with the true count, e.g. 3 instead of 1 at `(3, 1, 1)`.
pub fn count_srim_negacyclic_recursive_as_printed(q: u64, m: u32, n_prime: u64) -> Result<u64> {
    let (a, b, nu) = srim_bases(q, n_prime)?;
    Ok(match m {
        0 => a,
        _ if m >= nu => 0,
        1 => 3 * (2 * a - b),
        _ => (1u64 << m) * (2 * a - b),
    })
}

fn scrim_base(q: u64, n_prime: u64) -> Result<(u64, u32)> {
    check_odd_q(q)?;
    if n_prime % 2 == 0 {
        return Err(invalid("n' must be odd"));
    }
    Ok((count_scrim_cyclic(q, n_prime)?.total, numtheory::nu(q)?))
}

/// `|SCRIM_{q^2, 2^m n'}(1)|`.
pub fn count_scrim_cyclic_recursive(q: u64, m: u32, n_prime: u64) -> Result<u64> {
    let (c, nu) = scrim_base(q, n_prime)?;
    Ok((1u64 << m.min(nu)) * c)
}

/// `|SCRIM_{q^2, 2^m n'}(-1)|`.
pub fn count_scrim_negacyclic_recursive(q: u64, m: u32, n_prime: u64) -> Result<u64> {
    let (c, nu) = scrim_base(q, n_prime)?;
    Ok(if m < nu { (1u64 << m) * c } else { 0 })
}

fn odd_prime_valuations(q: u64, n: u64) -> Result<Vec<u32>> {
    check_odd_q(q)?;
    if n % 2 == 0 {
        return Err(invalid(format!("{n} is not odd")));
    }
    check_coprime(q, n)?;
    numtheory::factorize(n)?
        .primes()
        .map(|l| exact_divide(2, mult_ord(q, l)?))
        .collect()
}

/// Extreme cases for the SRIM factors of `x^n + 1`, `n` odd.
pub fn classify_extreme_srim(q: u64, n: u64) -> Result<ExtremeClass> {
    let vals = odd_prime_valuations(q, n)?;
    Ok(match vals.first() {
        None => ExtremeClass::AllSelf,
        Some(&s) if s >= 1 && vals.iter().all(|&v| v == s) => ExtremeClass::AllSelf,
        _ if vals.iter().all(|&v| v == 0) => ExtremeClass::OnlyXPlusOne,
        _ => ExtremeClass::Mixed,
    })
}

/// Extreme cases for the SCRIM factors of `x^n + 1` over `F_{q^2}`, `n` odd.
pub fn classify_extreme_scrim(q: u64, n: u64) -> Result<ExtremeClass> {
    let vals = odd_prime_valuations(q, n)?;
    Ok(if vals.iter().all(|&v| v == 1) {
        ExtremeClass::AllSelf
    } else if vals.iter().all(|&v| v != 1) {
        ExtremeClass::OnlyXPlusOne
    } else {
        ExtremeClass::Mixed
    })
}

struct TwoPrime {
    l1: u64,
    r1: u32,
    l2: u64,
    r2: u32,
    s1: u32,
    s2: u32,
}

fn two_prime(q: u64, l1: u64, r1: u32, l2: u64, r2: u32) -> Result<TwoPrime> {
    check_odd_q(q)?;
    if l1 == l2 {
        return Err(invalid("the two primes must be distinct"));
    }
    if r1 == 0 || r2 == 0 {
        return Err(invalid("exponents must be positive"));
    }
    for l in [l1, l2] {
        if l == 2 || !numtheory::is_prime(l) {
            return Err(invalid(format!("{l} is not an odd prime")));
        }
        check_coprime(q, l)?;
    }
    Ok(TwoPrime {
        l1,
        r1,
        l2,
        r2,
        s1: exact_divide(2, mult_ord(q, l1)?)?,
        s2: exact_divide(2, mult_ord(q, l2)?)?,
    })
}

fn prime_power(l: u64, r: u32) -> Result<u64> {
    l.checked_pow(r)
        .filter(|&v| v <= numtheory::INPUT_CAP)
        .ok_or_else(|| invalid(format!("{l}^{r} is too large")))
}

fn double_sum(t: &TwoPrime, ord: impl Fn(u64) -> Result<u64>) -> Result<u64> {
    let mut total = 0;
    for i in 0..=t.r1 {
        for j in 0..=t.r2 {
            let d = prime_power(t.l1, i)? * prime_power(t.l2, j)?;
            total += euler_phi(d)? / ord(d)?;
        }
    }
    Ok(total)
}

/// SRIM factor count of `x^{l1^r1 l2^r2} + 1` by the case split on the
/// 2-adic valuations `s1`, `s2` of `ord_{l1}(q)`, `ord_{l2}(q)`.
pub fn count_two_prime_srim(q: u64, l1: u64, r1: u32, l2: u64, r2: u32) -> Result<u64> {
    let t = two_prime(q, l1, r1, l2, r2)?;
    let single = |l, r| -> Result<u64> { Ok(count_srim_negacyclic(q, 0, prime_power(l, r)?)?.total) };
    match (t.s1, t.s2) {
        (0, 0) => Ok(1),
        (_, 0) => single(t.l1, t.r1),
        (0, _) => single(t.l2, t.r2),
        (a, b) if a != b => Ok(single(t.l1, t.r1)? + single(t.l2, t.r2)? - 1),
        _ => double_sum(&t, |d| mult_ord(q, d)),
    }
}

/// SCRIM factor count of `x^{l1^r1 l2^r2} + 1` over `F_{q^2}`.
pub fn count_two_prime_scrim(q: u64, l1: u64, r1: u32, l2: u64, r2: u32) -> Result<u64> {
    let t = two_prime(q, l1, r1, l2, r2)?;
    let single = |l, r| -> Result<u64> { Ok(count_scrim_negacyclic(q, 0, prime_power(l, r)?)?.total) };
    match (t.s1 == 1, t.s2 == 1) {
        (false, false) => Ok(1),
        (true, false) => single(t.l1, t.r1),
        (false, true) => single(t.l2, t.r2),
        (true, true) => double_sum(&t, |d| ord_sq(q, d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_examples() {
        assert_eq!(count_srim_cyclic(3, 8).unwrap().total, 3);
        assert_eq!(count_srim_cyclic(5, 1).unwrap().total, 1);
        assert_eq!(count_srim_cyclic(3, 7).unwrap().total, 2);
        assert_eq!(count_scrim_cyclic(3, 1).unwrap().total, 1);
        assert_eq!(count_scrim_cyclic(3, 7).unwrap().total, 3);
        assert_eq!(count_scrim_cyclic(3, 8).unwrap().total, 4);
        assert!(count_srim_cyclic(3, 6).is_err());
    }

    #[test]
    fn negacyclic_examples() {
        assert_eq!(count_srim_negacyclic(3, 0, 7).unwrap().total, 2);
        assert_eq!(count_srim_negacyclic(3, 2, 1).unwrap().total, 0);
        assert_eq!(count_srim_negacyclic(3, 1, 1).unwrap().total, 1);
        assert_eq!(count_scrim_negacyclic(3, 1, 1).unwrap().total, 2);
        assert_eq!(count_scrim_negacyclic(3, 0, 7).unwrap().total, 3);
        assert_eq!(count_scrim_negacyclic(3, 2, 1).unwrap().total, 0);
        assert!(count_srim_negacyclic(4, 0, 1).is_err());
    }

    #[test]
    fn breakdown_shape() {
        let b = count_srim_negacyclic(3, 0, 7).unwrap();
        assert_eq!((b.m, b.n_prime, b.nu), (0, 7, 2));
        let t: Vec<(u64, bool, u64, u64, u64)> =
            b.terms.iter().map(|t| (t.d, t.member, t.phi, t.ord, t.contribution)).collect();
        assert_eq!(t, vec![(1, true, 1, 1, 1), (7, true, 6, 6, 1)]);
        let json = b.to_json();
        assert_eq!(CountBreakdown::from_json(&json).unwrap(), b);
        assert!(json.starts_with("{\"q\":3,\"m\":0,\"n_prime\":7,\"nu\":2,\"terms\":["));
    }

    #[test]
    fn lem2_examples() {
        assert!(lem2_check(3, 2, Mode::Euclidean).unwrap());
        assert_eq!(count_negacyclic(3, 2, Mode::Euclidean).unwrap(), 1);
        assert_eq!(count_cyclic(3, 4, Mode::Euclidean).unwrap(), 3);
        assert!(lem2_check(3, 7, Mode::Euclidean).unwrap());
        for q in [3u64, 5, 7, 9] {
            assert!(lem2_check(q, 1, Mode::Euclidean).unwrap());
            assert!(lem2_check(q, 1, Mode::Hermitian).unwrap());
        }
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(count_srim_cyclic_recursive(3, 2, 1).unwrap(), 3);
        assert_eq!(count_srim_cyclic_recursive_as_printed(3, 2, 1).unwrap(), 5);
        assert_eq!(count_srim_cyclic_recursive(7, 3, 1).unwrap(), 5);
        assert_eq!(count_srim_cyclic_recursive_as_printed(7, 3, 1).unwrap(), 9);
        assert_eq!(count_srim_cyclic_recursive(3, 1, 7).unwrap(), 4);
        assert_eq!(count_srim_negacyclic_recursive(3, 0, 7).unwrap(), 2);
        assert_eq!(count_srim_negacyclic_recursive(3, 1, 7).unwrap(), 3);
        assert_eq!(count_srim_negacyclic_recursive(3, 1, 1).unwrap(), 1);
        assert_eq!(count_srim_negacyclic_recursive_as_printed(3, 1, 1).unwrap(), 3);
        assert_eq!(count_scrim_cyclic_recursive(3, 1, 1).unwrap(), 2);
        assert_eq!(count_scrim_cyclic_recursive(3, 3, 1).unwrap(), 4);
        assert_eq!(count_scrim_negacyclic_recursive(3, 1, 1).unwrap(), 2);
        assert_eq!(count_scrim_negacyclic_recursive(3, 2, 1).unwrap(), 0);
        assert_eq!(count_scrim_negacyclic_recursive(3, 0, 7).unwrap(), 3);
    }

    #[test]
    fn recursions_match_closed_forms() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 31, 47] {
            for n_prime in (1..=99u64).step_by(2).filter(|&n| gcd(n, q) == 1) {
                for m in 0..=6u32 {
                    let n = (1u64 << m) * n_prime;
                    assert_eq!(
                        count_srim_cyclic_recursive(q, m, n_prime).unwrap(),
                        count_srim_cyclic(q, n).unwrap().total,
                        "q={q} m={m} n'={n_prime}"
                    );
                    assert_eq!(
                        count_srim_negacyclic_recursive(q, m, n_prime).unwrap(),
                        count_srim_negacyclic(q, m, n_prime).unwrap().total
                    );
                    assert_eq!(
                        count_scrim_cyclic_recursive(q, m, n_prime).unwrap(),
                        count_scrim_cyclic(q, n).unwrap().total
                    );
                    assert_eq!(
                        count_scrim_negacyclic_recursive(q, m, n_prime).unwrap(),
                        count_scrim_negacyclic(q, m, n_prime).unwrap().total
                    );
                }
            }
        }
    }

    #[test]
    fn extreme_examples() {
        assert_eq!(classify_extreme_srim(3, 7).unwrap(), ExtremeClass::AllSelf);
        assert_eq!(classify_extreme_srim(5, 1).unwrap(), ExtremeClass::AllSelf);
        assert_eq!(classify_extreme_srim(3, 35).unwrap(), ExtremeClass::Mixed);
        assert_eq!(classify_extreme_scrim(3, 7).unwrap(), ExtremeClass::AllSelf);
        assert_eq!(classify_extreme_scrim(3, 5).unwrap(), ExtremeClass::OnlyXPlusOne);
        assert_eq!(classify_extreme_scrim(3, 35).unwrap(), ExtremeClass::Mixed);
        assert!(classify_extreme_srim(3, 4).is_err());
    }

    #[test]
    fn two_prime_examples() {
        assert_eq!(count_two_prime_srim(3, 7, 1, 5, 1).unwrap(), 3);
        assert_eq!(count_two_prime_srim(3, 7, 1, 5, 1).unwrap(), count_srim_negacyclic(3, 0, 35).unwrap().total);
        assert_eq!(count_two_prime_srim(3, 7, 1, 13, 1).unwrap(), count_srim_negacyclic(3, 0, 7).unwrap().total);
        assert_eq!(count_two_prime_srim(3, 13, 1, 7, 1).unwrap(), count_srim_negacyclic(3, 0, 7).unwrap().total);
        assert_eq!(count_two_prime_scrim(3, 5, 1, 13, 1).unwrap(), 1);
        assert_eq!(count_two_prime_scrim(3, 7, 1, 5, 1).unwrap(), count_scrim_negacyclic(3, 0, 7).unwrap().total);
        assert_eq!(count_two_prime_scrim(3, 7, 1, 11, 1).unwrap(), 3);
        assert!(count_two_prime_srim(3, 7, 1, 7, 2).is_err());
    }

    proptest! {
        #[test]
        fn two_prime_matches_closed_form(
            qi in 0usize..6, a in 0usize..8, b in 0usize..8, r1 in 1u32..3, r2 in 1u32..3,
        ) {
            let q = [3u64, 5, 7, 9, 11, 13][qi];
            let primes = [5u64, 7, 11, 13, 17, 19, 23, 29];
            let (l1, l2) = (primes[a], primes[b]);
            prop_assume!(l1 != l2 && q % l1 != 0 && q % l2 != 0);
            let n = l1.pow(r1) * l2.pow(r2);
            prop_assert_eq!(
                count_two_prime_srim(q, l1, r1, l2, r2).unwrap(),
                count_srim_negacyclic(q, 0, n).unwrap().total
            );
            prop_assert_eq!(
                count_two_prime_scrim(q, l1, r1, l2, r2).unwrap(),
                count_scrim_negacyclic(q, 0, n).unwrap().total
            );
        }

        #[test]
        fn contributions_are_integral(qi in 0usize..8, n in 1u64..400) {
            let q = [3u64, 5, 7, 9, 11, 13, 25, 27][qi];
            prop_assume!(gcd(n, q) == 1);
            let b = count_srim_cyclic(q, n).unwrap();
            prop_assert_eq!(b.total, b.terms.iter().map(|t| t.contribution).sum::<u64>());
            prop_assert!(lem2_check(q, n, Mode::Euclidean).unwrap());
            prop_assert!(lem2_check(q, n, Mode::Hermitian).unwrap());
        }
    }
}
