//! Cyclotomic cosets `Cl_{q,N}(i) = { i q^j mod N }` and the pure-arithmetic
//! classification of the factors they index.
//!
//! Each characterization is available in two forms: the coset-equality test,
//! which is the definition used by the rest of the crate, and the
//! good-integer criterion, exposed through the `*_criteria_agree` helpers so
//! the equivalence can be swept.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numtheory::{self, additive_ord, gcd};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicCoset {
    /// Multiplier.
    pub q: u64,
    /// Modulus.
    pub n: u64,
    /// Minimal element.
    pub rep: u64,
    /// Sorted ascending.
    pub elements: Vec<u64>,
}

impl CyclotomicCoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, j: u64) -> bool {
        self.elements.binary_search(&(j % self.n)).is_ok()
    }

    /// Additive order shared by every member.
    pub fn additive_order(&self) -> u64 {
        self.n / gcd(self.rep, self.n)
    }
}

fn check(q: u64, n: u64) -> Result<()> {
    if n == 0 {
        return Err(invalid("coset modulus must be positive"));
    }
    let g = gcd(q % n, n);
    if n > 1 && g != 1 {
        return Err(Error::NotCoprime { a: q, n, g });
    }
    Ok(())
}

pub fn coset(q: u64, n: u64, i: u64) -> Result<CyclotomicCoset> {
    check(q, n)?;
    let start = i % n;
    let qm = q % n;
    let mut elements = vec![start];
    let mut j = (start as u128 * qm as u128 % n as u128) as u64;
    while j != start {
        elements.push(j);
        j = (j as u128 * qm as u128 % n as u128) as u64;
    }
    elements.sort_unstable();
    Ok(CyclotomicCoset {
        q,
        n,
        rep: elements[0],
        elements,
    })
}

/// All cosets modulo `n`, ordered by representative.
pub fn representatives(q: u64, n: u64) -> Result<Vec<CyclotomicCoset>> {
    check(q, n)?;
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i as usize] {
            continue;
        }
        let c = coset(q, n, i)?;
        for &j in &c.elements {
            seen[j as usize] = true;
        }
        out.push(c);
    }
    Ok(out)
}

/// Whether all members of the coset share one parity. Holds for every coset
/// with odd multiplier and even modulus.
pub fn same_parity(c: &CyclotomicCoset) -> bool {
    c.elements.iter().all(|&j| j % 2 == c.rep % 2)
}

/// Whether `f_i` divides `x^{2^m n'} + 1`, i.e. whether `i` is odd, for
/// `0 <= i < 2^{m+1} n'`.
pub fn divides_xn_plus1(q: u64, m: u32, n_prime: u64, i: u64) -> Result<bool> {
    if n_prime % 2 == 0 {
        return Err(invalid("n' must be odd"));
    }
    let big_n = (1u64 << (m + 1)) * n_prime;
    check(q, big_n)?;
    if i >= big_n {
        return Err(invalid(format!("index {i} out of range for modulus {big_n}")));
    }
    let odd = i % 2 == 1;
    debug_assert_eq!(odd, additive_ord(i, big_n)? % (1u64 << (m + 1)) == 0);
    Ok(odd)
}

/// `Cl_{q,N}(i) == Cl_{q,N}(-i)`.
pub fn is_srim_coset(q: u64, big_n: u64, i: u64) -> Result<bool> {
    let c = coset(q, big_n, i)?;
    Ok(c.contains((big_n - i % big_n) % big_n))
}

/// `Cl_{q^2,N}(i) == Cl_{q^2,N}(-q i)`.
pub fn is_scrim_coset(q: u64, big_n: u64, i: u64) -> Result<bool> {
    let q2 = (q % big_n) * (q % big_n) % big_n.max(1);
    let c = coset(q2, big_n, i)?;
    let partner = (big_n - (q % big_n) * (i % big_n) % big_n) % big_n;
    Ok(c.contains(partner))
}

/// Coset-equality SRIM test versus `o+(i) in G_(q,1)`.
pub fn srim_criteria_agree(q: u64, big_n: u64, i: u64) -> Result<bool> {
    Ok(is_srim_coset(q, big_n, i)? == numtheory::is_good(additive_ord(i, big_n)?, q)?)
}

/// Coset-equality SCRIM test versus `o+(i) in OG_(q,1)`.
pub fn scrim_criteria_agree(q: u64, big_n: u64, i: u64) -> Result<bool> {
    Ok(is_scrim_coset(q, big_n, i)? == numtheory::is_oddly_good(additive_ord(i, big_n)?, q)?)
}

/// Groups the cosets modulo `N` (only those with odd representative when
/// `odd_only`) by the additive order of their members.
pub fn partition_by_additive_order(
    q_mult: u64,
    big_n: u64,
    odd_only: bool,
) -> Result<BTreeMap<u64, Vec<CyclotomicCoset>>> {
    let mut groups: BTreeMap<u64, Vec<CyclotomicCoset>> = BTreeMap::new();
    for c in representatives(q_mult, big_n)? {
        if odd_only && c.rep % 2 == 0 {
            continue;
        }
        groups.entry(c.additive_order()).or_default().push(c);
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{euler_phi, mult_ord};

    #[test]
    fn coset_examples() {
        assert_eq!(coset(3, 8, 1).unwrap().elements, vec![1, 3]);
        assert_eq!(coset(9, 8, 1).unwrap().elements, vec![1]);
        assert_eq!(coset(5, 12, 0).unwrap().elements, vec![0]);
        assert!(coset(3, 6, 1).is_err());
    }

    #[test]
    fn representative_examples() {
        let reps: Vec<Vec<u64>> = representatives(3, 8)
            .unwrap()
            .into_iter()
            .map(|c| c.elements)
            .collect();
        assert_eq!(reps, vec![vec![0], vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]);
        assert_eq!(representatives(9, 4).unwrap().len(), 4);
        assert_eq!(representatives(7, 1).unwrap()[0].elements, vec![0]);
    }

    #[test]
    fn parity_examples() {
        assert!(same_parity(&coset(3, 8, 1).unwrap()));
        assert!(same_parity(&coset(3, 8, 2).unwrap()));
        assert_eq!(coset(3, 8, 2).unwrap().elements, vec![2, 6]);
        assert!(same_parity(&coset(5, 14, 0).unwrap()));
    }

    #[test]
    fn divisibility_examples() {
        assert!(divides_xn_plus1(3, 0, 1, 1).unwrap());
        assert!(divides_xn_plus1(3, 1, 1, 1).unwrap());
        assert!(!divides_xn_plus1(3, 1, 1, 2).unwrap());
        assert!(divides_xn_plus1(3, 1, 1, 4).is_err());
    }

    #[test]
    fn srim_and_scrim_examples() {
        assert!(is_srim_coset(3, 8, 2).unwrap());
        assert!(!is_srim_coset(3, 8, 1).unwrap());
        assert!(is_srim_coset(5, 12, 0).unwrap());
        assert!(is_scrim_coset(3, 4, 1).unwrap());
        assert!(!is_scrim_coset(3, 8, 1).unwrap());
        assert_eq!(coset(9, 8, 5).unwrap().elements, vec![5]);
        assert!(is_scrim_coset(5, 12, 0).unwrap());
    }

    #[test]
    fn partition_examples() {
        let g = partition_by_additive_order(3, 8, true).unwrap();
        assert_eq!(g.len(), 1);
        let cosets: Vec<_> = g[&8].iter().map(|c| c.elements.clone()).collect();
        assert_eq!(cosets, vec![vec![1, 3], vec![5, 7]]);
        let g = partition_by_additive_order(3, 4, true).unwrap();
        assert_eq!(g[&4].iter().map(|c| c.len()).sum::<usize>(), 2);
        let g = partition_by_additive_order(7, 2, true).unwrap();
        assert_eq!(g[&2][0].elements, vec![1]);
    }

    #[test]
    fn size_law_and_parity_small_grid() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27] {
            for n in 1..=120u64 {
                if gcd(n, q) != 1 {
                    continue;
                }
                let reps = representatives(q, n).unwrap();
                assert_eq!(reps.iter().map(|c| c.len() as u64).sum::<u64>(), n);
                for c in &reps {
                    assert_eq!(c.len() as u64, mult_ord(q, c.additive_order()).unwrap());
                    assert!(c.elements.iter().all(|&j| additive_ord(j, n).unwrap() == c.additive_order()));
                    if n % 2 == 0 {
                        assert!(same_parity(c));
                        assert!(srim_criteria_agree(q, n, c.rep).unwrap(), "q={q} n={n} i={}", c.rep);
                        assert!(scrim_criteria_agree(q, n, c.rep).unwrap(), "q={q} n={n} i={}", c.rep);
                    }
                }
                if n % 2 == 0 {
                    for (order, group) in partition_by_additive_order(q, n, true).unwrap() {
                        let total: u64 = group.iter().map(|c| c.len() as u64).sum();
                        assert_eq!(total, euler_phi(order).unwrap());
                    }
                }
            }
        }
    }
}
