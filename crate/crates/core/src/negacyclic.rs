//! Negacyclic codes of length `n`: ideals of `F[x]/(x^n + 1)` given by monic
//! divisors of `x^n + 1`. Dual generators, the LCD test, enumeration and
//! counting of LCD codes, plus a dense linear-algebra dual used as an oracle.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting;
use crate::error::{invalid, Error, Result};
use crate::factorization::{self, decompose_length, FactorizationReport, Mode, Sign, Tag};
use crate::finitefield::{Elem, FieldCtx};
use crate::numtheory::{self, euler_phi, PrimePower};
use crate::polyring::Poly;

/// Largest census materialized by [`enumerate_lcd`].
pub const ENUMERATION_CAP: u64 = 1 << 20;
/// Largest length handled by the dense linear-algebra routines.
pub const DENSE_MAX_LEN: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegacyclicCode {
    pub ctx: Arc<FieldCtx>,
    pub n: u64,
    pub gen: Poly,
    pub dim: u64,
}

fn x_n_plus_1(ctx: &Arc<FieldCtx>, n: u64) -> Poly {
    Poly::binomial(ctx, n as usize, ctx.one())
}

pub fn make_code(ctx: &Arc<FieldCtx>, n: u64, gen: Poly) -> Result<NegacyclicCode> {
    if n == 0 {
        return Err(invalid("length must be positive"));
    }
    if !gen.is_monic() {
        return Err(Error::NotMonic);
    }
    if !gen.divides(&x_n_plus_1(ctx, n))? {
        return Err(invalid(format!("{gen} does not divide x^{n} + 1")));
    }
    let deg = gen.degree().expect("monic") as u64;
    Ok(NegacyclicCode {
        ctx: ctx.clone(),
        n,
        gen,
        dim: n - deg,
    })
}

/// `q` with `ctx = F_{q^2}`.
fn hermitian_base(ctx: &FieldCtx) -> Result<u64> {
    if ctx.e() % 2 != 0 {
        return Err(invalid(format!("F_{} is not a quadratic extension", ctx.q())));
    }
    Ok(ctx.p().pow(ctx.e() / 2))
}

/// The map `h -> h*` or `h -> h†` for the code's field.
fn partner(ctx: &FieldCtx, h: &Poly, mode: Mode) -> Result<Poly> {
    match mode {
        Mode::Euclidean => h.reciprocal_star(),
        Mode::Hermitian => h.dagger(hermitian_base(ctx)?),
    }
}

impl NegacyclicCode {
    /// Check polynomial `h = (x^n + 1) / gen`.
    pub fn check_poly(&self) -> Poly {
        x_n_plus_1(&self.ctx, self.n)
            .div_exact(&self.gen)
            .expect("generator divides x^n + 1")
    }
}

/// Generator of the Euclidean (`h*`) or Hermitian (`h†`) dual.
pub fn dual_generator(code: &NegacyclicCode, mode: Mode) -> Result<Poly> {
    partner(&code.ctx, &code.check_poly(), mode)
}

pub fn dual(code: &NegacyclicCode, mode: Mode) -> Result<NegacyclicCode> {
    make_code(&code.ctx, code.n, dual_generator(code, mode)?)
}

/// `gcd(g, h*) = 1` (resp. `gcd(g, h†) = 1`).
pub fn is_lcd(code: &NegacyclicCode, mode: Mode) -> Result<bool> {
    Ok(code.gen.gcd(&dual_generator(code, mode)?).is_one())
}

/// `dim(C1 ∩ C2)` through the generator `lcm(g1, g2)` of the intersection.
pub fn intersection_dim(c1: &NegacyclicCode, c2: &NegacyclicCode) -> Result<u64> {
    if c1.n != c2.n || c1.ctx != c2.ctx {
        return Err(invalid("codes over different rings"));
    }
    let l = c1.gen.lcm(&c2.gen)?;
    Ok(c1.n - l.degree().expect("nonzero lcm") as u64)
}

/// `dim(C1 ∩ C2) = dim C1 + dim C2 - rank [G1; G2]` by row reduction.
pub fn intersection_dim_dense(c1: &NegacyclicCode, c2: &NegacyclicCode) -> Result<u64> {
    if c1.n != c2.n || c1.ctx != c2.ctx {
        return Err(invalid("codes over different rings"));
    }
    check_dense(c1.n)?;
    let mut rows = generator_matrix(c1);
    rows.extend(generator_matrix(c2));
    let rank = rref(&c1.ctx, &mut rows).len() as u64;
    Ok(c1.dim + c2.dim - rank)
}

fn check_dense(n: u64) -> Result<()> {
    if n > DENSE_MAX_LEN {
        return Err(Error::CapExceeded(format!("length {n} exceeds {DENSE_MAX_LEN}")));
    }
    Ok(())
}

/// Rows `x^i g(x)` for `i < dim`; their degrees stay below `n`, so no
/// reduction modulo `x^n + 1` is needed.
pub fn generator_matrix(code: &NegacyclicCode) -> Vec<Vec<Elem>> {
    let n = code.n as usize;
    let g = code.gen.coeffs();
    (0..code.dim as usize)
        .map(|i| {
            let mut row = vec![code.ctx.zero(); n];
            row[i..i + g.len()].copy_from_slice(g);
            row
        })
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns and drops
/// zero rows.
fn rref(ctx: &FieldCtx, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][c]).expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v = ctx.sub(*v, ctx.mul(f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{ v : A v = 0 }`.
fn null_space(ctx: &FieldCtx, mut a: Vec<Vec<Elem>>, cols: usize) -> Vec<Vec<Elem>> {
    let pivots = rref(ctx, &mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ctx.zero(); cols];
        v[free] = ctx.one();
        for (row, &pc) in a.iter().zip(&pivots) {
            v[pc] = ctx.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Dual code by a null-space computation on the generator matrix. For the
/// Hermitian form `sum u_i v_i^q`, `v` is orthogonal to every row of `G`
/// exactly when `conj(G) v = 0`. The generator is read off as the monic
/// codeword of least degree, and the result is checked to be the ideal it
/// generates.
pub fn brute_dual(code: &NegacyclicCode, mode: Mode) -> Result<NegacyclicCode> {
    check_dense(code.n)?;
    let ctx = &code.ctx;
    let n = code.n as usize;
    let mut g = generator_matrix(code);
    if mode == Mode::Hermitian {
        let q = hermitian_base(ctx)?;
        for row in g.iter_mut() {
            for v in row.iter_mut() {
                *v = ctx.frobenius(*v, q)?;
            }
        }
    }
    let basis = if g.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![ctx.zero(); n];
                v[i] = ctx.one();
                v
            })
            .collect()
    } else {
        null_space(ctx, g, n)
    };
    if basis.is_empty() {
        return make_code(ctx, code.n, x_n_plus_1(ctx, code.n));
    }
    // echelon form keyed on the highest-degree coordinate
    let mut rev: Vec<Vec<Elem>> = basis.iter().map(|v| v.iter().rev().copied().collect()).collect();
    rref(ctx, &mut rev);
    let lowest = rev.last().expect("nonempty basis");
    let gen = Poly::new(ctx, lowest.iter().rev().copied().collect()).monic();
    let dual = make_code(ctx, code.n, gen).map_err(|e| {
        Error::Inconsistent(format!("null space is not a negacyclic code: {e}"))
    })?;
    if dual.dim != basis.len() as u64 {
        return Err(Error::Inconsistent(format!(
            "null space has dimension {} but its least-degree word generates dimension {}",
            basis.len(),
            dual.dim
        )));
    }
    for v in &basis {
        if !dual.gen.divides(&Poly::new(ctx, v.clone()))? {
            return Err(Error::Inconsistent("null space is not an ideal".into()));
        }
    }
    Ok(dual)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcdCensus {
    pub q: u64,
    pub n: u64,
    pub mode: Mode,
    pub mu: u32,
    pub m: u32,
    pub n_prime: u64,
    pub r: u64,
    pub s: u64,
    pub t: u64,
    pub count: u128,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

impl LcdCensus {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("census serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn power_of_two(exp: u64) -> Result<u128> {
    if exp >= 128 {
        return Err(Error::CapExceeded(format!("2^{exp} does not fit in 128 bits")));
    }
    Ok(1u128 << exp)
}

/// The toggling units of an LCD generator: each self-paired factor alone,
/// each reciprocal pair jointly, in record order.
fn lcd_units(report: &FactorizationReport) -> Vec<Vec<usize>> {
    let mut units = Vec::new();
    for (i, rec) in report.records.iter().enumerate() {
        match rec.tag {
            Tag::SelfPaired => units.push(vec![i]),
            Tag::PairedWith(j) if j > i => units.push(vec![i, j]),
            Tag::PairedWith(_) => {}
        }
    }
    units
}

/// All LCD negacyclic codes of length `n` over `F_q` (Euclidean) or
/// `F_{q^2}` (Hermitian), `base = F_q`. Generators are listed in order of the
/// subset bitmask over the toggling units.
pub fn enumerate_lcd(base: &Arc<FieldCtx>, n: u64, mode: Mode) -> Result<LcdCensus> {
    let report = factorization::factor_xn(base, n, Sign::MinusOne, mode)?;
    let units = lcd_units(&report);
    let count = power_of_two(units.len() as u64)?;
    if count > ENUMERATION_CAP as u128 {
        return Err(Error::CapExceeded(format!("{count} LCD codes exceed {ENUMERATION_CAP}")));
    }
    let blocks: Vec<Poly> = units
        .iter()
        .map(|u| {
            let mut acc = Poly::one(&report.field);
            for &i in u {
                acc = acc.mul(&report.records[i].poly);
            }
            acc.pow(report.records[u[0]].multiplicity)
        })
        .collect::<Result<_>>()?;
    let generators: Vec<String> = (0..count as u64)
        .into_par_iter()
        .map(|mask| {
            let mut g = Poly::one(&report.field);
            for (b, block) in blocks.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    g = g.mul(block);
                }
            }
            g.to_string()
        })
        .collect();
    Ok(LcdCensus {
        q: report.q.q,
        n,
        mode,
        mu: report.mu,
        m: report.m,
        n_prime: report.n_prime,
        r: report.r as u64,
        s: report.s as u64,
        t: report.t as u64,
        count,
        generators: Some(generators),
    })
}

/// LCD code count `2^{(r+s)/2}` from the divisor sums alone, for base order
/// `q`. Any length is accepted; the `p`-part only raises multiplicities.
pub fn count_lcd(q: u64, n: u64, mode: Mode) -> Result<LcdCensus> {
    let pp = PrimePower::from_q(q)?;
    if !pp.is_odd() {
        return Err(Error::EvenOrder(q));
    }
    let (mu, m, n_prime) = decompose_length(n, pp.p)?;
    let big_q = mode.field_order(q);
    let mut r = 0;
    for d in numtheory::divisors(n_prime)? {
        let big_d = (1u64 << (m + 1)) * d;
        r += euler_phi(big_d)? / numtheory::mult_ord(big_q % big_d, big_d)?;
    }
    let s = match mode {
        Mode::Euclidean => counting::count_srim_negacyclic(q, m, n_prime)?.total,
        Mode::Hermitian => counting::count_scrim_negacyclic(q, m, n_prime)?.total,
    };
    if s > r || (r - s) % 2 != 0 {
        return Err(Error::Inconsistent(format!("r = {r}, s = {s}")));
    }
    Ok(LcdCensus {
        q,
        n,
        mode,
        mu,
        m,
        n_prime,
        r,
        s,
        t: (r - s) / 2,
        count: power_of_two((r + s) / 2)?,
        generators: None,
    })
}

/// Exponent of each report factor in `g`.
pub fn exponent_profile(g: &Poly, report: &FactorizationReport) -> Result<Vec<u64>> {
    let mut rest = g.clone();
    let mut out = Vec::with_capacity(report.records.len());
    for rec in &report.records {
        let mut k = 0;
        loop {
            let (quot, rem) = rest.divrem(&rec.poly)?;
            if !rem.is_zero() {
                break;
            }
            rest = quot;
            k += 1;
        }
        out.push(k);
    }
    if !rest.is_one() {
        return Err(invalid(format!("{g} has a factor outside the report")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finitefield::make_field;

    fn f3() -> Arc<FieldCtx> {
        make_field(3, 1).unwrap()
    }

    fn code(ctx: &Arc<FieldCtx>, n: u64, coeffs: &[i64]) -> NegacyclicCode {
        make_code(ctx, n, Poly::from_ints(ctx, coeffs)).unwrap()
    }

    #[test]
    fn make_code_examples() {
        let f3 = f3();
        assert_eq!(code(&f3, 4, &[1]).dim, 4);
        assert_eq!(code(&f3, 4, &[2, 1, 1]).dim, 2);
        assert_eq!(code(&f3, 3, &[1, 0, 0, 1]).dim, 0);
        assert!(make_code(&f3, 4, Poly::from_ints(&f3, &[1, 1])).is_err());
        assert!(make_code(&f3, 4, Poly::from_ints(&f3, &[1, 2])).is_err());
    }

    #[test]
    fn dual_generator_examples() {
        let f3 = f3();
        let c = code(&f3, 4, &[2, 1, 1]);
        assert_eq!(c.check_poly(), Poly::from_ints(&f3, &[2, 2, 1]));
        assert_eq!(dual_generator(&c, Mode::Euclidean).unwrap(), Poly::from_ints(&f3, &[2, 1, 1]));
        let full = code(&f3, 5, &[1]);
        assert_eq!(dual_generator(&full, Mode::Euclidean).unwrap(), x_n_plus_1(&f3, 5));

        let f9 = make_field(3, 2).unwrap();
        let alpha = f9.encode(&[0, 1]);
        let c = make_code(&f9, 2, Poly::new(&f9, vec![f9.neg(alpha), f9.one()])).unwrap();
        let h = Poly::new(&f9, vec![alpha, f9.one()]);
        assert_eq!(c.check_poly(), h);
        assert_eq!(dual_generator(&c, Mode::Hermitian).unwrap(), h.dagger(3).unwrap());
        assert_eq!(brute_dual(&c, Mode::Hermitian).unwrap().gen, h.dagger(3).unwrap());
    }

    #[test]
    fn lcd_examples() {
        let f3 = f3();
        assert!(is_lcd(&code(&f3, 4, &[1]), Mode::Euclidean).unwrap());
        let c = code(&f3, 4, &[2, 1, 1]);
        assert!(!is_lcd(&c, Mode::Euclidean).unwrap());
        let d = dual(&c, Mode::Euclidean).unwrap();
        assert_eq!(intersection_dim(&c, &d).unwrap(), 2);
        assert_eq!(intersection_dim_dense(&c, &d).unwrap(), 2);
        let c7 = code(&f3, 7, &[1, 1]);
        assert!(is_lcd(&c7, Mode::Euclidean).unwrap());
        let d7 = dual(&c7, Mode::Euclidean).unwrap();
        assert_eq!(intersection_dim(&c7, &d7).unwrap(), 0);
        assert_eq!(intersection_dim_dense(&c7, &d7).unwrap(), 0);
    }

    #[test]
    fn brute_dual_examples() {
        let f3 = f3();
        let full = code(&f3, 4, &[1]);
        assert_eq!(brute_dual(&full, Mode::Euclidean).unwrap().dim, 0);
        let c = code(&f3, 4, &[2, 1, 1]);
        assert_eq!(brute_dual(&c, Mode::Euclidean).unwrap().gen, Poly::from_ints(&f3, &[2, 1, 1]));
        let zero = code(&f3, 3, &[1, 0, 0, 1]);
        assert_eq!(brute_dual(&zero, Mode::Euclidean).unwrap().dim, 3);
    }

    #[test]
    fn census_examples() {
        let f3 = f3();
        let c = enumerate_lcd(&f3, 4, Mode::Euclidean).unwrap();
        assert_eq!(c.count, 2);
        assert_eq!(c.generators.unwrap(), vec!["1", "1,0,0,0,1"]);
        let c = enumerate_lcd(&f3, 7, Mode::Euclidean).unwrap();
        assert_eq!(c.count, 4);
        assert_eq!(c.generators.as_ref().unwrap().len(), 4);
        assert!(c.generators.as_ref().unwrap().contains(&"1,1".to_string()));
        let c = enumerate_lcd(&f3, 2, Mode::Hermitian).unwrap();
        assert_eq!(c.count, 4);
        let f9 = make_field(3, 2).unwrap();
        assert!(c.generators.as_ref().unwrap().contains(&Poly::from_ints(&f9, &[1, 0, 1]).to_string()));

        assert_eq!(count_lcd(3, 4, Mode::Euclidean).unwrap().count, 2);
        let c3 = count_lcd(3, 3, Mode::Euclidean).unwrap();
        assert_eq!((c3.r, c3.s, c3.count, c3.mu), (1, 1, 2, 1));
        assert_eq!(enumerate_lcd(&f3, 3, Mode::Euclidean).unwrap().generators.unwrap(), vec!["1", "1,0,0,1"]);
        assert_eq!(count_lcd(3, 7, Mode::Euclidean).unwrap().count, 4);
    }

    #[test]
    fn census_json_round_trip() {
        let c = enumerate_lcd(&f3(), 7, Mode::Euclidean).unwrap();
        assert_eq!(LcdCensus::from_json(&c.to_json()).unwrap(), c);
        let c = count_lcd(5, 12, Mode::Hermitian).unwrap();
        let json = c.to_json();
        assert!(!json.contains("generators"));
        assert_eq!(LcdCensus::from_json(&json).unwrap(), c);
    }

    #[test]
    fn exponent_profile_reads_multiplicities() {
        let f3 = f3();
        let rep = factorization::factor_xn(&f3, 6, Sign::MinusOne, Mode::Euclidean).unwrap();
        let g = Poly::from_ints(&f3, &[1, 0, 1]).pow(3).unwrap();
        assert_eq!(exponent_profile(&g, &rep).unwrap(), vec![3]);
    }
}
