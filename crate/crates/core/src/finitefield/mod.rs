//! Finite fields `F_{p^e}` presented by a monic irreducible modulus over the
//! prime field, with table-driven element arithmetic.
//!
//! Elements are stored as a packed code `sum a_i p^(e-1-i)` of their
//! power-basis coordinates `(a_0, ..., a_{e-1})`, so that numeric order on codes
//! is lexicographic order on coordinate vectors. Multiplication goes through
//! discrete log / antilog tables built from the lex-least generator.

mod extension;

pub use extension::{ExtElem, ExtField};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invalid, Error, Result};
use crate::numtheory::{self, PrimePower};
use crate::polyring::Poly;

/// Largest field order accepted by [`make_field`]; tables are `O(q)`.
pub const FIELD_ORDER_CAP: u64 = 1 << 20;

/// Orders up to this bound get a full addition table.
const ADD_TABLE_CAP: u64 = 1024;

/// A field element, as its packed coordinate code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field `F_{p^e}`.
pub struct FieldCtx {
    order: PrimePower,
    /// Ascending coefficients over `F_p`, monic, length `e + 1`. For `e = 1`
    /// this is `x` and arithmetic is plain residue arithmetic.
    modulus: Vec<u64>,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    /// `p^(e-1-i)`, the weight of coordinate `i` in a code.
    weights: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.order.p)
            .field("e", &self.order.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), Arc<FieldCtx>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<FieldCtx>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Builds `F_{p^e}` with the lexicographically least monic irreducible modulus
/// of degree `e`, ordering coefficient vectors `(c_0, ..., c_{e-1})` with `c_0`
/// most significant. Results are memoized.
pub fn make_field(p: u64, e: u32) -> Result<Arc<FieldCtx>> {
    let order = PrimePower::new(p, e)?;
    if order.q > FIELD_ORDER_CAP {
        return Err(Error::CapExceeded(format!(
            "field order {} exceeds {FIELD_ORDER_CAP}",
            order.q
        )));
    }
    if let Some(ctx) = field_cache().lock().unwrap().get(&(p, e)) {
        return Ok(ctx.clone());
    }
    let modulus = if e == 1 {
        vec![0, 1]
    } else {
        lex_first_irreducible(p, e)?
    };
    let ctx = Arc::new(FieldCtx::with_modulus(order, modulus)?);
    field_cache()
        .lock()
        .unwrap()
        .entry((p, e))
        .or_insert_with(|| ctx.clone());
    Ok(ctx)
}

fn lex_first_irreducible(p: u64, e: u32) -> Result<Vec<u64>> {
    let prime = make_field(p, 1)?;
    let e = e as usize;
    let total = p.pow(e as u32);
    // c_0 = 0 means divisible by x; start at the first vector with c_0 = 1
    for idx in p.pow(e as u32 - 1)..total {
        let mut coeffs = vec![0u64; e + 1];
        let mut t = idx;
        for i in (0..e).rev() {
            coeffs[i] = t % p;
            t /= p;
        }
        coeffs[e] = 1;
        let f = Poly::from_ints(&prime, &coeffs.iter().map(|&c| c as i64).collect::<Vec<_>>());
        if f.is_irreducible()? {
            return Ok(coeffs);
        }
    }
    Err(Error::Inconsistent(format!(
        "no irreducible polynomial of degree {e} over F_{p}"
    )))
}

impl FieldCtx {
    /// Builds a context from an explicit modulus (ascending, monic). The caller
    /// is responsible for irreducibility; [`make_field`] is the checked path.
    pub fn with_modulus(order: PrimePower, modulus: Vec<u64>) -> Result<Self> {
        let (p, e, q) = (order.p, order.e as usize, order.q);
        if q > FIELD_ORDER_CAP {
            return Err(Error::CapExceeded(format!("field order {q}")));
        }
        if modulus.len() != e + 1 || modulus[e] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(invalid("modulus must be monic of degree e over F_p"));
        }
        let weights: Vec<u32> = (0..e).map(|i| p.pow((e - 1 - i) as u32) as u32).collect();
        let mut ctx = FieldCtx {
            order,
            modulus,
            generator: Elem(0),
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_table: None,
            weights,
        };
        ctx.neg = (0..q as u32)
            .map(|c| {
                let v: Vec<u64> = ctx.digits(Elem(c)).iter().map(|&a| (p - a) % p).collect();
                ctx.encode(&v).0
            })
            .collect();
        if q <= ADD_TABLE_CAP {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    table[(a as u64 * q + b as u64) as usize] = ctx.add_digits(Elem(a), Elem(b)).0;
                }
            }
            ctx.add_table = Some(table);
        }
        ctx.build_log_tables()?;
        Ok(ctx)
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let q = self.order.q;
        let n = q - 1;
        let primes: Vec<u64> = numtheory::factorize(n)?.primes().collect();
        let generator = (1..q as u32)
            .map(Elem)
            .find(|&g| primes.iter().all(|&l| self.slow_pow(g, n / l) != self.one()))
            .ok_or_else(|| Error::Inconsistent("multiplicative group is not cyclic".into()))?;
        let mut exp = Vec::with_capacity(2 * n as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = self.one();
        for k in 0..n {
            exp.push(x.0);
            log[x.0 as usize] = k as u32;
            x = self.slow_mul(x, generator);
        }
        if x != self.one() {
            return Err(Error::Inconsistent("generator order mismatch".into()));
        }
        exp.extend_from_within(..);
        self.generator = generator;
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.order.p
    }

    pub fn e(&self) -> u32 {
        self.order.e
    }

    pub fn q(&self) -> u64 {
        self.order.q
    }

    pub fn order(&self) -> PrimePower {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The generator of the multiplicative group used for the log tables.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(self.weights[0])
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        let p = self.order.p as i64;
        Elem(k.rem_euclid(p) as u32 * self.weights[0])
    }

    /// The class of `x` in `F_p[x]/(modulus)`; for prime fields this is 0.
    pub fn root(&self) -> Elem {
        if self.order.e == 1 {
            Elem(0)
        } else {
            Elem(self.weights[1])
        }
    }

    pub fn elem_from_code(&self, code: u32) -> Result<Elem> {
        if (code as u64) < self.order.q {
            Ok(Elem(code))
        } else {
            Err(invalid(format!("element code {code} out of range")))
        }
    }

    /// Power-basis coordinates `(a_0, ..., a_{e-1})`.
    pub fn digits(&self, a: Elem) -> Vec<u64> {
        let p = self.order.p as u32;
        self.weights.iter().map(|&w| ((a.0 / w) % p) as u64).collect()
    }

    pub fn encode(&self, coeffs: &[u64]) -> Elem {
        debug_assert_eq!(coeffs.len(), self.weights.len());
        let p = self.order.p;
        Elem(
            coeffs
                .iter()
                .zip(&self.weights)
                .map(|(&a, &w)| (a % p) as u32 * w)
                .sum(),
        )
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order.q as u32).map(Elem)
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let p = self.order.p as u32;
        let mut code = 0;
        for &w in &self.weights {
            code += ((a.0 / w % p + b.0 / w % p) % p) * w;
        }
        Elem(code)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.order.e == 1 {
            let s = a.0 + b.0;
            let p = self.order.p as u32;
            return Elem(if s >= p { s - p } else { s });
        }
        match &self.add_table {
            Some(t) => Elem(t[a.0 as usize * self.order.q as usize + b.0 as usize]),
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        Elem(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = (self.order.q - 1) as u32;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return self.one();
        }
        if a.0 == 0 {
            return Elem(0);
        }
        let n = self.order.q - 1;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.exp[((l as u128 * k as u128) % n as u128) as usize])
    }

    /// Discrete log with respect to [`FieldCtx::generator`].
    pub fn log(&self, a: Elem) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Elem) -> Result<u64> {
        let n = self.order.q - 1;
        Ok(n / numtheory::gcd(self.log(a)?, n))
    }

    /// `a^{base_q}`; `base_q` must be a power of the characteristic.
    pub fn frobenius(&self, a: Elem, base_q: u64) -> Result<Elem> {
        self.check_char_power(base_q)?;
        Ok(self.pow(a, base_q))
    }

    pub(crate) fn check_char_power(&self, base_q: u64) -> Result<()> {
        let p = self.order.p;
        let mut t = base_q;
        while t > 1 && t % p == 0 {
            t /= p;
        }
        if t != 1 || base_q == 0 {
            return Err(invalid(format!(
                "{base_q} is not a power of the characteristic {p}"
            )));
        }
        Ok(())
    }

    /// Whether `a` lies in the subfield of order `sub_q` (fixed by `a -> a^{sub_q}`).
    pub fn in_subfield(&self, a: Elem, sub_q: u64) -> Result<bool> {
        Ok(self.frobenius(a, sub_q)? == a)
    }

    // Arithmetic on coordinate vectors, used only while building the tables.
    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.order.p;
        let e = self.order.e as usize;
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % p;
            }
        }
        if e > 1 {
            for top in (e..2 * e - 1).rev() {
                let c = prod[top];
                if c != 0 {
                    for j in 0..e {
                        prod[top - e + j] = (prod[top - e + j] + (p - c) * self.modulus[j]) % p;
                    }
                    prod[top] = 0;
                }
            }
        }
        self.encode(&prod[..e])
    }

    fn slow_pow(&self, a: Elem, mut k: u64) -> Elem {
        let mut acc = self.one();
        let mut b = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.slow_mul(acc, b);
            }
            b = self.slow_mul(b, b);
            k >>= 1;
        }
        acc
    }

    /// Renders an element: bare integer over a prime field, `[a0 a1 ...]` otherwise.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.order.e == 1 {
            a.0.to_string()
        } else {
            let parts: Vec<String> = self.digits(a).iter().map(|d| d.to_string()).collect();
            format!("[{}]", parts.join(" "))
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let p = self.order.p;
        let parse_digit = |t: &str| -> Result<u64> {
            t.parse::<i64>()
                .map(|v| v.rem_euclid(p as i64) as u64)
                .map_err(|_| Error::Parse(format!("bad field element `{s}`")))
        };
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let digits = inner
                .split_whitespace()
                .map(parse_digit)
                .collect::<Result<Vec<_>>>()?;
            if digits.len() != self.order.e as usize {
                return Err(Error::Parse(format!(
                    "element `{s}` needs {} coordinates",
                    self.order.e
                )));
            }
            Ok(self.encode(&digits))
        } else {
            Ok(Elem(parse_digit(s)? as u32 * self.weights[0]))
        }
    }
}

/// A primitive `N`-th root of unity in a field context.
#[derive(Debug, Clone)]
pub struct RootOfUnity {
    pub ctx: Arc<FieldCtx>,
    pub value: Elem,
    pub order: u64,
}

impl RootOfUnity {
    /// Checks that `value` has multiplicative order exactly `order`.
    pub fn new(ctx: Arc<FieldCtx>, value: Elem, order: u64) -> Result<Self> {
        if value.is_zero() || ctx.mult_order(value)? != order {
            return Err(Error::Inconsistent(format!(
                "{} does not have order {order}",
                ctx.format_elem(value)
            )));
        }
        Ok(RootOfUnity { ctx, value, order })
    }
}

/// The lexicographically least element of multiplicative order exactly `n`.
pub fn primitive_root_of_unity(ctx: &Arc<FieldCtx>, n: u64) -> Result<RootOfUnity> {
    let group = ctx.q() - 1;
    if n == 0 || group % n != 0 {
        return Err(invalid(format!("{n} does not divide {group}")));
    }
    let value = ctx
        .elements()
        .skip(1)
        .find(|&a| ctx.mult_order(a).ok() == Some(n))
        .ok_or_else(|| Error::Inconsistent(format!("no element of order {n}")))?;
    RootOfUnity::new(ctx.clone(), value, n)
}
