//! Integer arithmetic: factorization, totient, orders, and the good /
//! oddly-good predicates with respect to `(q, 1)`.
//!
//! An integer `d` is *good* for `q` when `d | q^k + 1` for some `k >= 1`, and
//! *oddly-good* when such a `k` can be chosen odd. The predicates here decide
//! membership from the 2-adic valuations of multiplicative orders, without
//! searching; the `*_oracle` variants search and exist to cross-check them.
//!
//! All inputs are capped at 2^32 so that products of two residues fit in a
//! `u64`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest accepted integer input.
pub const INPUT_CAP: u64 = 1 << 32;

fn check_cap(x: u64, what: &str) -> Result<()> {
    if x > INPUT_CAP {
        return Err(invalid(format!("{what} = {x} exceeds 2^32")));
    }
    Ok(())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// `base^exp mod modulus`, with `modulus <= 2^32`.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    debug_assert!((1..=INPUT_CAP).contains(&modulus));
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % modulus;
        }
        b = b * b % modulus;
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A positive integer with its canonical prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInt {
    pub value: u64,
    /// `(prime, exponent)` pairs, primes strictly ascending.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, k) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn factorize(n: u64) -> Result<FactoredInt> {
    if n == 0 {
        return Err(invalid("cannot factor 0"));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            let mut k = 0;
            while m % d == 0 {
                m /= d;
                k += 1;
            }
            factors.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(FactoredInt { value: n, factors })
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.divisors())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    Ok(f.factors
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1)))
}

/// Least `k >= 1` with `a^k = 1 (mod n)`.
pub fn mult_ord(a: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid("modulus must be positive"));
    }
    check_cap(n, "modulus")?;
    if n == 1 {
        return Ok(1);
    }
    let g = gcd(a % n, n);
    if g != 1 {
        return Err(Error::NotCoprime { a, n, g });
    }
    let mut t = euler_phi(n)?;
    for (l, _) in factorize(t)?.factors {
        while t % l == 0 && pow_mod(a, t / l, n) == 1 {
            t /= l;
        }
    }
    Ok(t)
}

/// Order of `i` in the additive group `Z/nZ`, i.e. `n / gcd(i, n)`.
pub fn additive_ord(i: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid("modulus must be positive"));
    }
    Ok(n / gcd(i % n, n))
}

/// The exponent `i` with `p^i || j`.
pub fn exact_divide(p: u64, j: u64) -> Result<u32> {
    if j == 0 {
        return Err(invalid("exact_divide of 0"));
    }
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    let mut i = 0;
    let mut j = j;
    while j % p == 0 {
        j /= p;
        i += 1;
    }
    Ok(i)
}

/// Exponent `nu` with `2^nu || (q + 1)`.
pub fn nu(q: u64) -> Result<u32> {
    if q % 2 == 0 {
        return Err(Error::EvenOrder(q));
    }
    exact_divide(2, q + 1)
}

/// `q = p^e` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(invalid("extension degree must be >= 1"));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= INPUT_CAP)
            .ok_or_else(|| invalid(format!("{p}^{e} exceeds 2^32")))?;
        Ok(PrimePower { p, e, q })
    }

    pub fn from_q(q: u64) -> Result<Self> {
        let f = factorize(q)?;
        match f.factors.as_slice() {
            [(p, e)] => PrimePower::new(*p, *e),
            _ => Err(invalid(format!("{q} is not a prime power"))),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }
}

fn check_pair(d: u64, q: u64) -> Result<()> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    check_cap(d, "d")?;
    if q % 2 == 0 {
        return Err(Error::EvenOrder(q));
    }
    let g = gcd(d, q);
    if g != 1 {
        return Err(Error::NotCoprime { a: q, n: d, g });
    }
    Ok(())
}

/// 2-adic valuations of `ord_l(q)` for each prime `l | d`.
fn order_valuations(d: u64, q: u64) -> Result<Vec<u32>> {
    factorize(d)?
        .primes()
        .map(|l| exact_divide(2, mult_ord(q, l)?))
        .collect()
}

/// Whether `d | q^k + 1` for some `k >= 1`.
pub fn is_good(d: u64, q: u64) -> Result<bool> {
    check_pair(d, q)?;
    if d == 1 {
        return Ok(true);
    }
    let beta = exact_divide(2, d)?;
    let odd = d >> beta;
    match beta {
        0 => {
            // one common s >= 1 with 2^s || ord_l(q) for every prime l | d
            let vals = order_valuations(odd, q)?;
            Ok(vals[0] >= 1 && vals.iter().all(|&s| s == vals[0]))
        }
        1 if odd == 1 => Ok(true),
        1 => is_good(odd, q),
        _ => two_power_condition(beta, odd, q),
    }
}

/// Whether `d | q^r + 1` for some odd `r >= 1`.
pub fn is_oddly_good(d: u64, q: u64) -> Result<bool> {
    check_pair(d, q)?;
    if d == 1 {
        return Ok(true);
    }
    let beta = exact_divide(2, d)?;
    let odd = d >> beta;
    match beta {
        0 => Ok(order_valuations(odd, q)?.iter().all(|&s| s == 1)),
        1 if odd == 1 => Ok(true),
        1 => is_oddly_good(odd, q),
        _ => two_power_condition(beta, odd, q),
    }
}

/// `2^beta d` with `beta >= 2`: good and oddly-good coincide.
fn two_power_condition(beta: u32, odd: u64, q: u64) -> Result<bool> {
    if (q + 1) % (1u64 << beta) != 0 {
        return Ok(false);
    }
    if odd == 1 {
        return Ok(true);
    }
    Ok(order_valuations(odd, q)?.iter().all(|&s| s == 1))
}

/// Search oracle for goodness: scans `q^k mod d` for `k = 1..=2 ord_d(q)`.
pub fn is_good_oracle(d: u64, q: u64) -> Result<bool> {
    Ok(oracle_scan(d, q)?.0)
}

/// Search oracle for odd-goodness over the same window.
pub fn is_oddly_good_oracle(d: u64, q: u64) -> Result<bool> {
    Ok(oracle_scan(d, q)?.1)
}

fn oracle_scan(d: u64, q: u64) -> Result<(bool, bool)> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    check_cap(d, "d")?;
    let ord = mult_ord(q, d)?;
    let (mut good, mut oddly) = (false, false);
    let mut r = 1 % d;
    for k in 1..=2 * ord {
        r = r * (q % d) % d;
        if r == d - 1 {
            good = true;
            oddly |= k % 2 == 1;
        }
    }
    Ok((good, oddly))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_by_count(n: u64) -> u64 {
        (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(factorize(28).unwrap().factors, vec![(2, 2), (7, 1)]);
        assert_eq!(factorize(27).unwrap().factors, vec![(3, 3)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn phi_examples_and_count() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(4).unwrap(), 2);
        assert_eq!(euler_phi(28).unwrap(), 12);
        assert!(euler_phi(0).is_err());
        for n in 1..=1000 {
            assert_eq!(euler_phi(n).unwrap(), phi_by_count(n), "n = {n}");
        }
    }

    #[test]
    fn orders() {
        assert_eq!(mult_ord(3, 1).unwrap(), 1);
        assert_eq!(mult_ord(3, 5).unwrap(), 4);
        assert_eq!(mult_ord(3, 7).unwrap(), 6);
        assert!(matches!(mult_ord(3, 6), Err(Error::NotCoprime { .. })));
        assert_eq!(additive_ord(0, 8).unwrap(), 1);
        assert_eq!(additive_ord(6, 8).unwrap(), 4);
        assert_eq!(additive_ord(3, 8).unwrap(), 8);
        assert!(additive_ord(1, 0).is_err());
    }

    #[test]
    fn exact_division() {
        assert_eq!(exact_divide(2, 7).unwrap(), 0);
        assert_eq!(exact_divide(2, 12).unwrap(), 2);
        assert_eq!(exact_divide(3, 18).unwrap(), 2);
        assert!(exact_divide(2, 0).is_err());
    }

    #[test]
    fn good_examples() {
        assert!(is_good(1, 3).unwrap());
        assert!(is_good(5, 3).unwrap());
        assert!(!is_good(8, 3).unwrap());
        assert!(is_oddly_good(7, 3).unwrap());
        assert!(!is_oddly_good(5, 3).unwrap());
        assert!(is_oddly_good(4, 3).unwrap());
        assert!(is_good(3, 3).is_err());
        assert!(matches!(is_good(5, 4), Err(Error::EvenOrder(4))));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_scan(5, 3).unwrap(), (true, false));
        assert_eq!(oracle_scan(7, 3).unwrap(), (true, true));
        assert_eq!(oracle_scan(1, 5).unwrap(), (true, true));
    }

    #[test]
    fn predicates_match_oracle_small_grid() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            for d in 1..=200 {
                if gcd(d, q) != 1 {
                    continue;
                }
                let g = is_good(d, q).unwrap();
                let og = is_oddly_good(d, q).unwrap();
                assert_eq!(g, is_good_oracle(d, q).unwrap(), "good d={d} q={q}");
                assert_eq!(og, is_oddly_good_oracle(d, q).unwrap(), "oddly d={d} q={q}");
                assert!(!og || g);
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(PrimePower::from_q(27).unwrap(), PrimePower { p: 3, e: 3, q: 27 });
        assert!(PrimePower::from_q(12).is_err());
        assert!(PrimePower::new(4, 1).is_err());
        assert_eq!(nu(3).unwrap(), 2);
        assert_eq!(nu(5).unwrap(), 1);
        assert_eq!(nu(7).unwrap(), 3);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn doubling_odd_preserves_goodness(d in (1u64..400).prop_map(|x| 2 * x + 1), qi in 0usize..8) {
                let q = [3u64, 5, 7, 9, 11, 13, 25, 27][qi];
                prop_assume!(gcd(d, q) == 1);
                prop_assert_eq!(is_good(d, q).unwrap(), is_good(2 * d, q).unwrap());
                prop_assert_eq!(is_oddly_good(d, q).unwrap(), is_oddly_good(2 * d, q).unwrap());
            }

            #[test]
            fn two_powers(beta in 1u32..10, qi in 0usize..8) {
                let q = [3u64, 5, 7, 9, 11, 13, 25, 27][qi];
                let d = 1u64 << beta;
                let expected = (q + 1) % d == 0;
                prop_assert_eq!(is_good(d, q).unwrap(), expected);
                prop_assert_eq!(is_oddly_good(d, q).unwrap(), expected);
            }

            #[test]
            fn order_divides_phi(n in 1u64..2000, a in 1u64..2000) {
                prop_assume!(gcd(a, n) == 1);
                prop_assert_eq!(euler_phi(n).unwrap() % mult_ord(a, n).unwrap(), 0);
            }
        }
    }
}
