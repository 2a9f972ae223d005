//! Dense univariate polynomials over a [`FieldCtx`], with the reciprocal and
//! conjugate-reciprocal maps and irreducibility tests.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::finitefield::{Elem, FieldCtx};
use crate::numtheory;

/// Largest degree accepted for dense products.
pub const DEGREE_CAP: usize = 4096;

/// Slice-level kernels shared with the extension-field code.
pub(crate) mod raw {
    use super::*;

    pub fn trim(v: &mut Vec<Elem>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    pub fn add(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.to_vec();
        for (o, &s) in out.iter_mut().zip(short) {
            *o = ctx.add(*o, s);
        }
        trim(&mut out);
        out
    }

    pub fn sub(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let mut out = a.to_vec();
        if out.len() < b.len() {
            out.resize(b.len(), Elem::ZERO);
        }
        for (o, &s) in out.iter_mut().zip(b) {
            *o = ctx.sub(*o, s);
        }
        trim(&mut out);
        out
    }

    pub fn mul(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    /// Reduces `a` in place modulo the monic polynomial `m`.
    pub fn rem_monic(ctx: &FieldCtx, a: &mut Vec<Elem>, m: &[Elem]) {
        let d = m.len() - 1;
        while a.len() > d {
            let top = a.len() - 1;
            let c = a[top];
            if !c.is_zero() {
                let nc = ctx.neg(c);
                let base = top - d;
                for j in 0..d {
                    a[base + j] = ctx.add(a[base + j], ctx.mul(nc, m[j]));
                }
            }
            a.pop();
        }
        trim(a);
    }

    pub fn mul_mod(ctx: &FieldCtx, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
        let mut out = mul(ctx, a, b);
        rem_monic(ctx, &mut out, m);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Result<(Vec<Elem>, Vec<Elem>)> {
        let lead = *b.last().ok_or(Error::DivisionByZero)?;
        let inv = ctx.inv(lead)?;
        let d = b.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= d {
            return Ok((Vec::new(), r));
        }
        let mut quot = vec![Elem::ZERO; r.len() - d];
        while r.len() > d {
            let top = r.len() - 1;
            let c = ctx.mul(r[top], inv);
            quot[top - d] = c;
            if !c.is_zero() {
                let nc = ctx.neg(c);
                for j in 0..d {
                    r[top - d + j] = ctx.add(r[top - d + j], ctx.mul(nc, b[j]));
                }
            }
            r.pop();
        }
        trim(&mut r);
        trim(&mut quot);
        Ok((quot, r))
    }

    pub fn monic(ctx: &FieldCtx, a: &[Elem]) -> Vec<Elem> {
        match a.last() {
            None => Vec::new(),
            Some(&lead) => {
                let inv = ctx.inv(lead).expect("nonzero leading coefficient");
                a.iter().map(|&c| ctx.mul(c, inv)).collect()
            }
        }
    }

    pub fn gcd(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = divrem(ctx, &x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        monic(ctx, &x)
    }

    /// `base^exp mod m` for monic `m`.
    pub fn pow_mod(ctx: &FieldCtx, base: &[Elem], exp: u64, m: &[Elem]) -> Vec<Elem> {
        let mut acc = vec![ctx.one()];
        rem_monic(ctx, &mut acc, m);
        let mut b = base.to_vec();
        rem_monic(ctx, &mut b, m);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(ctx, &acc, &b, m);
            }
            e >>= 1;
            if e > 0 {
                b = mul_mod(ctx, &b, &b, m);
            }
        }
        acc
    }

    /// Rows `x^{iQ} mod m` for `i < deg m`, where `Q` is the field order.
    /// Applying them linearly realizes `g -> g^Q mod m`.
    pub fn frobenius_rows(ctx: &FieldCtx, m: &[Elem]) -> Vec<Vec<Elem>> {
        let d = m.len() - 1;
        let x = vec![Elem::ZERO, ctx.one()];
        let xq = pow_mod(ctx, &x, ctx.q(), m);
        let mut rows = Vec::with_capacity(d);
        let mut cur = vec![ctx.one()];
        rem_monic(ctx, &mut cur, m);
        for _ in 0..d {
            rows.push(cur.clone());
            cur = mul_mod(ctx, &cur, &xq, m);
        }
        rows
    }

    pub fn apply_rows(ctx: &FieldCtx, rows: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
        let d = rows.len();
        let mut out = vec![Elem::ZERO; d];
        for (&c, row) in v.iter().zip(rows) {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row) {
                *o = ctx.add(*o, ctx.mul(c, r));
            }
        }
        trim(&mut out);
        out
    }
}

/// A polynomial with coefficients in `ctx`, stored ascending and normalized
/// (no trailing zeros; the zero polynomial has no coefficients).
#[derive(Clone)]
pub struct Poly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<Elem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
    }
}

impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Orders by degree, then by coefficient vector from the constant term up.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// Comma-separated ascending coefficients in the element text format.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.ctx.format_elem(c)).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Poly {
    pub fn new(ctx: &Arc<FieldCtx>, mut coeffs: Vec<Elem>) -> Self {
        raw::trim(&mut coeffs);
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        Poly::new(ctx, Vec::new())
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Poly::new(ctx, vec![ctx.one()])
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: Elem) -> Self {
        Poly::new(ctx, vec![c])
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Self {
        Poly::new(ctx, vec![ctx.zero(), ctx.one()])
    }

    /// `x^n + c`.
    pub fn binomial(ctx: &Arc<FieldCtx>, n: usize, c: Elem) -> Self {
        let mut coeffs = vec![ctx.zero(); n + 1];
        coeffs[n] = ctx.one();
        coeffs[0] = ctx.add(coeffs[0], c);
        Poly::new(ctx, coeffs)
    }

    /// Coefficients given as integers in the prime subfield.
    pub fn from_ints(ctx: &Arc<FieldCtx>, coeffs: &[i64]) -> Self {
        Poly::new(ctx, coeffs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    pub fn parse(ctx: &Arc<FieldCtx>, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(|t| ctx.parse_elem(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(ctx, coeffs))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.ctx.one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Some(self.ctx.one())
    }

    pub fn monic(&self) -> Poly {
        Poly::new(&self.ctx, raw::monic(&self.ctx, &self.coeffs))
    }

    fn with(&self, coeffs: Vec<Elem>) -> Poly {
        Poly::new(&self.ctx, coeffs)
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(invalid("polynomials over different fields"))
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.with(raw::add(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.with(raw::sub(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.with(raw::mul(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        self.with(self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect())
    }

    pub fn pow(&self, k: u64) -> Result<Poly> {
        let deg = self.degree().unwrap_or(0) as u64;
        if deg.saturating_mul(k) > DEGREE_CAP as u64 {
            return Err(Error::CapExceeded(format!("degree {} * {k}", deg)));
        }
        let mut acc = Poly::one(&self.ctx);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_same(divisor)?;
        let (q, r) = raw::divrem(&self.ctx, &self.coeffs, &divisor.coeffs)?;
        Ok((self.with(q), self.with(r)))
    }

    /// Exact quotient; fails when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(invalid(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.divrem(self)?.1.is_zero())
    }

    /// Monic greatest common divisor; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.with(raw::gcd(&self.ctx, &self.coeffs, &other.coeffs))
    }

    /// Monic least common multiple of two nonzero polynomials.
    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        let g = self.gcd(other);
        Ok(self.div_exact(&g)?.mul(other).monic())
    }

    pub fn eval(&self, x: Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, &c| self.ctx.add(self.ctx.mul(acc, x), c))
    }

    /// `self^exp mod modulus` for monic `modulus`.
    pub fn pow_mod(&self, exp: u64, modulus: &Poly) -> Result<Poly> {
        if !modulus.is_monic() {
            return Err(Error::NotMonic);
        }
        Ok(self.with(raw::pow_mod(&self.ctx, &self.coeffs, exp, &modulus.coeffs)))
    }

    fn check_reciprocable(&self) -> Result<()> {
        if self.is_zero() {
            return Err(invalid("zero polynomial"));
        }
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        Ok(())
    }

    /// `f*(x) = x^{deg f} f(0)^{-1} f(1/x)`: reversed coefficients scaled by
    /// the inverse of the constant term.
    pub fn reciprocal_star(&self) -> Result<Poly> {
        self.check_reciprocable()?;
        let inv = self.ctx.inv(self.coeffs[0])?;
        Ok(self.with(self.coeffs.iter().rev().map(|&c| self.ctx.mul(c, inv)).collect()))
    }

    /// Coefficient-wise `a -> a^{base_q}`.
    pub fn conjugate(&self, base_q: u64) -> Result<Poly> {
        self.ctx.check_char_power(base_q)?;
        Ok(self.with(self.coeffs.iter().map(|&c| self.ctx.pow(c, base_q)).collect()))
    }

    /// `f† = conjugate(f*)`.
    pub fn dagger(&self, base_q: u64) -> Result<Poly> {
        self.reciprocal_star()?.conjugate(base_q)
    }

    pub fn is_self_reciprocal(&self) -> Result<bool> {
        Ok(*self == self.reciprocal_star()?)
    }

    pub fn is_self_conj_reciprocal(&self, base_q: u64) -> Result<bool> {
        Ok(*self == self.dagger(base_q)?)
    }

    /// Rabin's test: `x^{Q^d} = x mod f` and `gcd(x^{Q^{d/l}} - x, f) = 1` for
    /// each prime `l | d`, where `Q` is the coefficient field order. The
    /// `Q`-power map is applied through its matrix on `F_Q[x]/(f)`.
    pub fn is_irreducible(&self) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let d = self.degree().unwrap();
        if d == 0 {
            return Err(invalid("constant polynomial"));
        }
        if d == 1 {
            return Ok(true);
        }
        let ctx = &self.ctx;
        let m = &self.coeffs;
        let checkpoints: Vec<usize> = numtheory::factorize(d as u64)?
            .primes()
            .map(|l| d / l as usize)
            .collect();
        let rows = raw::frobenius_rows(ctx, m);
        let x = vec![Elem::ZERO, ctx.one()];
        let mut cur = x.clone();
        for j in 1..=d {
            cur = raw::apply_rows(ctx, &rows, &cur);
            if checkpoints.contains(&j) {
                let diff = raw::sub(ctx, &cur, &x);
                if raw::gcd(ctx, &diff, m).len() != 1 {
                    return Ok(false);
                }
            }
        }
        Ok(cur == x)
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree `1..=deg/2`. Exponential; meant as an oracle for small inputs.
    pub fn is_irreducible_by_trial_division(&self) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::NotMonic);
        }
        let d = self.degree().unwrap();
        if d == 0 {
            return Err(invalid("constant polynomial"));
        }
        let q = self.ctx.q();
        for k in 1..=d / 2 {
            let count = q.checked_pow(k as u32).filter(|&c| c <= 1 << 24).ok_or_else(|| {
                Error::CapExceeded(format!("trial division over {q}^{k} divisors"))
            })?;
            for idx in 0..count {
                let mut coeffs = Vec::with_capacity(k + 1);
                let mut t = idx;
                for _ in 0..k {
                    coeffs.push(Elem((t % q) as u32));
                    t /= q;
                }
                coeffs.push(self.ctx.one());
                let g = self.with(coeffs);
                if g.divides(self)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::make_field;

    fn f3() -> Arc<FieldCtx> {
        make_field(3, 1).unwrap()
    }

    #[test]
    fn gcd_and_division() {
        let f3 = f3();
        let a = Poly::from_ints(&f3, &[2, 1, 1]);
        let b = Poly::from_ints(&f3, &[2, 2, 1]);
        assert!(a.gcd(&b).is_one());
        assert_eq!(a.gcd(&a), a.monic());
        assert_eq!(a.scale(f3.from_int(2)).gcd(&Poly::zero(&f3)), a);
        let x4p1 = Poly::from_ints(&f3, &[1, 0, 0, 0, 1]);
        let (q, r) = x4p1.divrem(&a).unwrap();
        assert_eq!(q, b);
        assert!(r.is_zero());
        assert_eq!(x4p1.divrem(&Poly::zero(&f3)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn reciprocal_examples() {
        let f3 = f3();
        let xm1 = Poly::from_ints(&f3, &[-1, 1]);
        assert_eq!(xm1.reciprocal_star().unwrap(), xm1);
        let f = Poly::from_ints(&f3, &[2, 1, 1]);
        assert_eq!(f.reciprocal_star().unwrap(), Poly::from_ints(&f3, &[2, 2, 1]));
        assert!(Poly::one(&f3).reciprocal_star().unwrap().is_one());
        assert_eq!(Poly::x(&f3).reciprocal_star().unwrap_err(), Error::ZeroConstantTerm);
        assert!(Poly::zero(&f3).reciprocal_star().is_err());
        assert!(Poly::from_ints(&f3, &[1, 0, 1]).is_self_reciprocal().unwrap());
        assert!(!f.is_self_reciprocal().unwrap());
        assert!(Poly::from_ints(&f3, &[1, 1]).is_self_reciprocal().unwrap());
    }

    #[test]
    fn conjugation_over_f9() {
        let f9 = make_field(3, 2).unwrap();
        let alpha = f9.encode(&[0, 1]);
        let over_f3 = Poly::from_ints(&f9, &[2, 1, 1]);
        assert_eq!(over_f3.conjugate(3).unwrap(), over_f3);
        let x_minus_alpha = Poly::new(&f9, vec![f9.neg(alpha), f9.one()]);
        let x_plus_alpha = Poly::new(&f9, vec![alpha, f9.one()]);
        assert_eq!(x_minus_alpha.conjugate(3).unwrap(), x_plus_alpha);
        assert_eq!(x_minus_alpha.conjugate(3).unwrap().conjugate(3).unwrap(), x_minus_alpha);
        assert!(x_minus_alpha.conjugate(2).is_err());
        // x - alpha is fixed by the dagger map, as is x + alpha
        assert_eq!(x_minus_alpha.dagger(3).unwrap(), x_minus_alpha);
        assert!(x_plus_alpha.is_self_conj_reciprocal(3).unwrap());
        let xm1 = Poly::from_ints(&f9, &[-1, 1]);
        assert_eq!(xm1.dagger(3).unwrap(), xm1);
    }

    #[test]
    fn irreducibility_examples() {
        let f3 = f3();
        assert!(Poly::from_ints(&f3, &[1, 0, 1]).is_irreducible().unwrap());
        assert!(!Poly::from_ints(&f3, &[-1, 0, 1]).is_irreducible().unwrap());
        assert!(!Poly::from_ints(&f3, &[1, 0, 0, 0, 1]).is_irreducible().unwrap());
        assert_eq!(
            Poly::from_ints(&f3, &[1, 0, 2]).is_irreducible().unwrap_err(),
            Error::NotMonic
        );
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for (p, e) in [(3u64, 1u32), (5, 1)] {
            let ctx = make_field(p, e).unwrap();
            let q = ctx.q();
            for d in 1..=6usize {
                // a deterministic spread of monic polynomials of degree d
                let total = q.pow(d as u32);
                let step = (total / 150).max(1);
                let mut idx = 0;
                while idx < total {
                    let mut coeffs: Vec<Elem> = (0..d)
                        .scan(idx, |t, _| {
                            let c = Elem((*t % q) as u32);
                            *t /= q;
                            Some(c)
                        })
                        .collect();
                    coeffs.push(ctx.one());
                    let f = Poly::new(&ctx, coeffs);
                    assert_eq!(
                        f.is_irreducible().unwrap(),
                        f.is_irreducible_by_trial_division().unwrap(),
                        "{f} over F_{q}"
                    );
                    idx += step;
                }
            }
        }
    }

    #[test]
    fn text_format() {
        let f9 = make_field(3, 2).unwrap();
        let p = Poly::parse(&f9, "[0 2],[1 0]").unwrap();
        assert_eq!(p.to_string(), "[0 2],[1 0]");
        let f3 = f3();
        assert_eq!(Poly::from_ints(&f3, &[2, 1, 1]).to_string(), "2,1,1");
        assert!(Poly::parse(&f9, "[0 1 2]").is_err());
    }

    mod props {
        use super::super::*;
        use crate::finitefield::make_field;
        use proptest::prelude::*;

        fn monic_nonzero_const(ctx: Arc<FieldCtx>, max_deg: usize) -> impl Strategy<Value = Poly> {
            let q = ctx.q() as u32;
            (0..=max_deg, prop::collection::vec(0..q, max_deg + 1), 1..q).prop_map(
                move |(d, cs, c0)| {
                    let mut coeffs: Vec<Elem> = cs[..d].iter().map(|&c| Elem(c)).collect();
                    coeffs.push(ctx.one());
                    if d > 0 {
                        coeffs[0] = Elem(c0);
                    }
                    Poly::new(&ctx, coeffs)
                },
            )
        }

        proptest! {
            #[test]
            fn star_and_dagger_involutions(
                f in monic_nonzero_const(make_field(3, 2).unwrap(), 7),
                g in monic_nonzero_const(make_field(3, 2).unwrap(), 7),
            ) {
                prop_assert_eq!(f.reciprocal_star().unwrap().reciprocal_star().unwrap(), f.clone());
                prop_assert_eq!(f.dagger(3).unwrap().dagger(3).unwrap(), f.clone());
                let fg = f.mul(&g);
                prop_assert_eq!(
                    fg.reciprocal_star().unwrap(),
                    f.reciprocal_star().unwrap().mul(&g.reciprocal_star().unwrap())
                );
                prop_assert_eq!(fg.dagger(3).unwrap(), f.dagger(3).unwrap().mul(&g.dagger(3).unwrap()));
            }

            #[test]
            fn divrem_reconstructs(
                a in monic_nonzero_const(make_field(5, 1).unwrap(), 12),
                b in monic_nonzero_const(make_field(5, 1).unwrap(), 6),
            ) {
                let (q, r) = a.divrem(&b).unwrap();
                prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()) || b.degree() == Some(0) && r.is_zero());
                prop_assert_eq!(q.mul(&b).add(&r), a);
            }

            #[test]
            fn parse_display_round_trip(f in monic_nonzero_const(make_field(3, 3).unwrap(), 6)) {
                prop_assert_eq!(Poly::parse(f.ctx(), &f.to_string()).unwrap(), f);
            }
        }
    }
}
