//! Extensions `F_{Q^k} = F_Q[y]/(M(y))` of a base context, used as splitting
//! fields when building minimal polynomials of roots of unity.
//!
//! These fields can be far larger than [`super::FIELD_ORDER_CAP`]: elements
//! are coordinate vectors over the base field and exponents are big integers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Elem, FieldCtx};
use crate::error::{invalid, Error, Result};
use crate::numtheory;
use crate::polyring::{raw, Poly};

/// Element of an [`ExtField`]: coordinates over the base field, trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElem(Vec<Elem>);

impl ExtElem {
    pub fn coords(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

pub struct ExtField {
    base: Arc<FieldCtx>,
    /// Monic irreducible of degree `degree` over the base field.
    modulus: Vec<Elem>,
    degree: usize,
    roots: Mutex<HashMap<u64, ExtElem>>,
}

type ExtKey = (u64, Vec<u64>, usize);

fn ext_cache() -> &'static Mutex<HashMap<ExtKey, Arc<OnceLock<Arc<ExtField>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<ExtKey, Arc<OnceLock<Arc<ExtField>>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl ExtField {
    /// The degree-`k` extension of `base`. The modulus is a fixed function of
    /// `(base, k)`, see [`seeded_irreducible_over`]. Memoized per base field.
    pub fn of_degree(base: &Arc<FieldCtx>, k: usize) -> Result<Arc<ExtField>> {
        if k == 0 {
            return Err(invalid("extension degree must be >= 1"));
        }
        let key = (base.p(), base.modulus().to_vec(), k);
        let cell = ext_cache()
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::new(OnceLock::new()))
            .clone();
        if let Some(ext) = cell.get() {
            return Ok(ext.clone());
        }
        let modulus = seeded_irreducible_over(base, k)?;
        let ext = Arc::new(ExtField {
            base: base.clone(),
            modulus,
            degree: k,
            roots: Mutex::new(HashMap::new()),
        });
        Ok(cell.get_or_init(|| ext).clone())
    }

    pub fn base(&self) -> &Arc<FieldCtx> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> Poly {
        Poly::new(&self.base, self.modulus.clone())
    }

    /// `Q^k`.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.base.q()).pow(self.degree as u32)
    }

    pub fn one(&self) -> ExtElem {
        ExtElem(vec![self.base.one()])
    }

    pub fn from_base(&self, c: Elem) -> ExtElem {
        let mut v = vec![c];
        raw::trim(&mut v);
        ExtElem(v)
    }

    /// The element `sum c_i y^i`, reduced modulo the defining polynomial.
    pub fn from_coords(&self, coords: &[Elem]) -> ExtElem {
        let mut v = coords.to_vec();
        raw::trim(&mut v);
        if v.len() > self.degree {
            raw::rem_monic(&self.base, &mut v, &self.modulus);
        }
        ExtElem(v)
    }

    /// The base-field value of an element lying in the base field.
    pub fn to_base(&self, a: &ExtElem) -> Option<Elem> {
        match a.0.len() {
            0 => Some(Elem::ZERO),
            1 => Some(a.0[0]),
            _ => None,
        }
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(raw::add(&self.base, &a.0, &b.0))
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(raw::sub(&self.base, &a.0, &b.0))
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem(raw::mul_mod(&self.base, &a.0, &b.0, &self.modulus))
    }

    pub fn pow(&self, a: &ExtElem, exp: u64) -> ExtElem {
        ExtElem(raw::pow_mod(&self.base, &a.0, exp, &self.modulus))
    }

    pub fn pow_big(&self, a: &ExtElem, exp: &BigUint) -> ExtElem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// `a^{Q^j}`.
    pub fn frobenius(&self, a: &ExtElem, j: usize) -> ExtElem {
        (0..j).fold(a.clone(), |acc, _| self.pow(&acc, self.base.q()))
    }

    fn has_order_exactly(&self, h: &ExtElem, n: u64) -> Result<bool> {
        if self.pow(h, n) != self.one() {
            return Ok(false);
        }
        for l in numtheory::factorize(n)?.primes() {
            if self.pow(h, n / l) == self.one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A primitive `n`-th root of unity: `g^{(Q^k-1)/n}` for the first
    /// candidate `g` giving order exactly `n`. Candidates are drawn from a
    /// ChaCha stream seeded by `(Q, k, n)`; elements with small coordinates are
    /// avoided because they can all be squares (their norms are values of the
    /// modulus on the base field). Memoized per `n`.
    pub fn primitive_root(&self, n: u64) -> Result<ExtElem> {
        const ATTEMPTS: usize = 10_000;
        let group = self.order() - 1u32;
        let n_big = BigUint::from(n);
        if n == 0 || &group % &n_big != BigUint::ZERO {
            return Err(invalid(format!("{n} does not divide Q^k - 1")));
        }
        if let Some(r) = self.roots.lock().unwrap().get(&n) {
            return Ok(r.clone());
        }
        let cofactor = &group / &n_big;
        let q = self.base.q() as u32;
        let seed = self.base.q() ^ ((self.degree as u64) << 24) ^ (n << 40);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut root = None;
        for _ in 0..ATTEMPTS {
            let coords: Vec<Elem> = (0..self.degree).map(|_| Elem(rng.gen_range(0..q))).collect();
            let g = self.from_coords(&coords);
            if g.is_zero() {
                continue;
            }
            let h = self.pow_big(&g, &cofactor);
            if self.has_order_exactly(&h, n)? {
                root = Some(h);
                break;
            }
        }
        let root = root.ok_or_else(|| Error::Inconsistent(format!("no element of order {n} found")))?;
        self.roots.lock().unwrap().insert(n, root.clone());
        Ok(root)
    }

    /// `prod (x - r)` over `roots`, computed in the extension; every coefficient
    /// must lie in the base field or the call fails.
    pub fn product_of_linears(&self, roots: &[ExtElem]) -> Result<Poly> {
        let mut acc: Vec<ExtElem> = vec![self.one()];
        for r in roots {
            let neg_r = self.sub(&ExtElem(Vec::new()), r);
            let mut next = vec![ExtElem(Vec::new()); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], c);
                next[i] = self.add(&next[i], &self.mul(c, &neg_r));
            }
            acc = next;
        }
        let coeffs = acc
            .iter()
            .map(|c| {
                self.to_base(c).ok_or_else(|| {
                    Error::Inconsistent("minimal polynomial coefficient outside the base field".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&self.base, coeffs))
    }

    /// Minimal polynomial of `a`, given its degree, from the linear relation
    /// among `1, a, ..., a^degree` over the base field.
    pub fn minimal_poly(&self, a: &ExtElem, degree: usize) -> Result<Poly> {
        let ctx = &self.base;
        let k = self.degree;
        let mut powers = Vec::with_capacity(degree + 1);
        let mut cur = self.one();
        for _ in 0..=degree {
            powers.push(cur.clone());
            cur = self.mul(&cur, a);
        }
        // augmented k x (degree + 1) system: sum_j c_j a^j = a^degree
        let mut rows: Vec<Vec<Elem>> = (0..k)
            .map(|r| powers.iter().map(|p| p.0.get(r).copied().unwrap_or(Elem::ZERO)).collect())
            .collect();
        let mut pivot_row = 0;
        let mut pivots = Vec::with_capacity(degree);
        for col in 0..degree {
            let Some(r) = (pivot_row..k).find(|&r| !rows[r][col].is_zero()) else {
                return Err(Error::Inconsistent(format!(
                    "powers of the element are dependent below degree {degree}"
                )));
            };
            rows.swap(pivot_row, r);
            let inv = ctx.inv(rows[pivot_row][col])?;
            for v in rows[pivot_row].iter_mut() {
                *v = ctx.mul(*v, inv);
            }
            let prow = rows[pivot_row].clone();
            for (ri, row) in rows.iter_mut().enumerate() {
                if ri == pivot_row || row[col].is_zero() {
                    continue;
                }
                let f = ctx.neg(row[col]);
                for (v, &pv) in row.iter_mut().zip(&prow).skip(col) {
                    *v = ctx.add(*v, ctx.mul(f, pv));
                }
            }
            pivots.push(pivot_row);
            pivot_row += 1;
        }
        if rows[pivot_row..].iter().any(|row| !row[degree].is_zero()) {
            return Err(Error::Inconsistent(format!(
                "element does not have degree {degree} over the base field"
            )));
        }
        let mut coeffs: Vec<Elem> = pivots.iter().map(|&r| ctx.neg(rows[r][degree])).collect();
        coeffs.push(ctx.one());
        Ok(Poly::new(ctx, coeffs))
    }
}

/// Ben-Or: `f` of degree `k` is irreducible iff `gcd(x^{Q^j} - x, f) = 1` for
/// all `1 <= j <= k/2`. Most reducible candidates fail at small `j`, so the
/// first steps use plain powering and the Frobenius matrix is built only for
/// survivors.
fn ben_or_irreducible(ctx: &FieldCtx, f: &[Elem]) -> bool {
    const CHEAP_STEPS: usize = 3;
    let k = f.len() - 1;
    let x = vec![Elem::ZERO, ctx.one()];
    let mut cur = x.clone();
    let mut rows = None;
    for j in 1..=k / 2 {
        if j <= CHEAP_STEPS {
            cur = raw::pow_mod(ctx, &cur, ctx.q(), f);
        } else {
            let rows = rows.get_or_insert_with(|| raw::frobenius_rows(ctx, f));
            cur = raw::apply_rows(ctx, rows, &cur);
        }
        let diff = raw::sub(ctx, &cur, &x);
        if raw::gcd(ctx, &diff, f).len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree `k` in a ChaCha stream of random monic
/// polynomials seeded by `(Q, k)`. Sparse lex-small candidates are avoided:
/// their irreducibility density is far below `1/k` for many degrees.
fn seeded_irreducible_over(base: &Arc<FieldCtx>, k: usize) -> Result<Vec<Elem>> {
    if k == 1 {
        return Ok(vec![Elem::ZERO, base.one()]);
    }
    let q = base.q() as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(base.q() ^ ((k as u64) << 32));
    for _ in 0..(200 * k + 1000) {
        let mut f: Vec<Elem> = (0..k).map(|_| Elem(rng.gen_range(0..q))).collect();
        if f[0].is_zero() {
            continue;
        }
        f.push(base.one());
        if ben_or_irreducible(base, &f) {
            let poly = Poly::new(base, f.clone());
            if !poly.is_irreducible()? {
                return Err(Error::Inconsistent(format!("irreducibility tests disagree on {poly}")));
            }
            return Ok(f);
        }
    }
    Err(Error::Inconsistent(format!("no irreducible of degree {k} found")))
}
