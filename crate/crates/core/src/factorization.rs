//! Explicit factorization of `x^n - λ`, `λ = ±1`, into monic irreducibles
//! built from cyclotomic cosets, with each factor tagged as self-paired
//! (SRIM / SCRIM) or paired with its reciprocal (resp. conjugate-reciprocal)
//! partner.
//!
//! Factors for cosets of additive order `D` are minimal polynomials of powers
//! of a primitive `D`-th root of unity in the degree-`ord_D(Q)` extension of
//! the coefficient field, where `Q = q` (Euclidean) or `Q = q^2` (Hermitian).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cosets::{self, CyclotomicCoset};
use crate::error::{invalid, Error, Result};
use crate::finitefield::{make_field, ExtElem, ExtField, FieldCtx};
use crate::numtheory::{self, gcd, PrimePower};
use crate::polyring::Poly;

/// Cosets up to this size get their factor by the literal product of linear
/// factors; larger ones go through the linear relation among powers.
const PRODUCT_PATH_MAX: usize = 12;

/// The unit `λ` in `x^n - λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// `x^n - 1`.
    PlusOne,
    /// `x^n + 1`.
    MinusOne,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::PlusOne => "+1",
            Sign::MinusOne => "-1",
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" => Ok(Sign::PlusOne),
            "-1" => Ok(Sign::MinusOne),
            other => Err(Error::Parse(format!("sign must be +1 or -1, got `{other}`"))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Euclidean work is over `F_q` with `f -> f*`; Hermitian work is over
/// `F_{q^2}` with `f -> f†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Euclidean,
    Hermitian,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Euclidean => "euclidean",
            Mode::Hermitian => "hermitian",
        }
    }

    /// Order of the coefficient field for base field order `q`.
    pub fn field_order(self, q: u64) -> u64 {
        match self {
            Mode::Euclidean => q,
            Mode::Hermitian => q * q,
        }
    }

    /// The field the polynomials live in: `F_q` or `F_{q^2}`.
    pub fn working_field(self, base: &PrimePower) -> Result<Arc<FieldCtx>> {
        match self {
            Mode::Euclidean => make_field(base.p, base.e),
            Mode::Hermitian => make_field(base.p, 2 * base.e),
        }
    }

    /// `f*` or `f†` with respect to base order `q`.
    pub fn partner(self, f: &Poly, q: u64) -> Result<Poly> {
        match self {
            Mode::Euclidean => f.reciprocal_star(),
            Mode::Hermitian => f.dagger(q),
        }
    }

    /// Coset-level self-pairing test on `Cl(i)` modulo `big_n`.
    pub fn coset_is_self_paired(self, q: u64, big_n: u64, i: u64) -> Result<bool> {
        match self {
            Mode::Euclidean => cosets::is_srim_coset(q, big_n, i),
            Mode::Hermitian => cosets::is_scrim_coset(q, big_n, i),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euclidean" | "e" => Ok(Mode::Euclidean),
            "hermitian" | "h" => Ok(Mode::Hermitian),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    SelfPaired,
    PairedWith(usize),
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Paired {
            paired: usize,
        }
        match self {
            Tag::SelfPaired => s.serialize_str("self"),
            Tag::PairedWith(i) => Paired { paired: *i }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Word(String),
            Paired { paired: usize },
        }
        match Wire::deserialize(d)? {
            Wire::Word(w) if w == "self" => Ok(Tag::SelfPaired),
            Wire::Word(w) => Err(serde::de::Error::custom(format!("unknown tag `{w}`"))),
            Wire::Paired { paired } => Ok(Tag::PairedWith(paired)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorRecord {
    pub poly: Poly,
    /// `p^μ`.
    pub multiplicity: u64,
    pub coset_rep: u64,
    pub tag: Tag,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    /// Base field order; Hermitian factors live over `F_{q^2}`.
    pub q: PrimePower,
    pub n: u64,
    pub sign: Sign,
    pub mode: Mode,
    pub mu: u32,
    pub m: u32,
    pub n_prime: u64,
    /// Field of the factor coefficients.
    pub field: Arc<FieldCtx>,
    pub records: Vec<FactorRecord>,
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

impl FactorizationReport {
    /// Modulus of the cosets indexing the factors: `n/p^μ` for `x^n - 1`,
    /// `2n/p^μ` for `x^n + 1`.
    pub fn coset_modulus(&self) -> u64 {
        let k = (1u64 << self.m) * self.n_prime;
        match self.sign {
            Sign::PlusOne => k,
            Sign::MinusOne => 2 * k,
        }
    }

    pub fn self_paired(&self) -> impl Iterator<Item = &FactorRecord> {
        self.records.iter().filter(|r| r.tag == Tag::SelfPaired)
    }

    /// `x^n - λ` over the coefficient field.
    pub fn target(&self) -> Poly {
        binomial(&self.field, self.n, self.sign)
    }

    pub fn to_doc(&self) -> ReportDoc {
        ReportDoc {
            q: self.q.q,
            p: self.q.p,
            e: self.q.e,
            n: self.n,
            sign: self.sign,
            mode: self.mode,
            mu: self.mu,
            m: self.m,
            n_prime: self.n_prime,
            r: self.r,
            s: self.s,
            t: self.t,
            factors: self
                .records
                .iter()
                .map(|rec| FactorDoc {
                    poly: rec.poly.to_string(),
                    mult: rec.multiplicity,
                    coset_rep: rec.coset_rep,
                    tag: rec.tag,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("report serializes")
    }
}

/// Wire form of a [`FactorizationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub q: u64,
    pub p: u64,
    pub e: u32,
    pub n: u64,
    pub sign: Sign,
    pub mode: Mode,
    pub mu: u32,
    pub m: u32,
    pub n_prime: u64,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub factors: Vec<FactorDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub poly: String,
    pub mult: u64,
    pub coset_rep: u64,
    pub tag: Tag,
}

impl ReportDoc {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Rebuilds the report, re-parsing polynomials over the coefficient field.
    pub fn into_report(self) -> Result<FactorizationReport> {
        let q = PrimePower::new(self.p, self.e)?;
        if q.q != self.q {
            return Err(Error::Parse(format!("q = {} but p^e = {}", self.q, q.q)));
        }
        let field = self.mode.working_field(&q)?;
        let records = self
            .factors
            .into_iter()
            .map(|f| {
                Ok(FactorRecord {
                    poly: Poly::parse(&field, &f.poly)?,
                    multiplicity: f.mult,
                    coset_rep: f.coset_rep,
                    tag: f.tag,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactorizationReport {
            q,
            n: self.n,
            sign: self.sign,
            mode: self.mode,
            mu: self.mu,
            m: self.m,
            n_prime: self.n_prime,
            field,
            records,
            r: self.r,
            s: self.s,
            t: self.t,
        })
    }
}

pub(crate) fn binomial(ctx: &Arc<FieldCtx>, n: u64, sign: Sign) -> Poly {
    let c = match sign {
        Sign::PlusOne => ctx.from_int(-1),
        Sign::MinusOne => ctx.one(),
    };
    Poly::binomial(ctx, n as usize, c)
}

/// `n = p^μ 2^m n'` with `n'` odd and coprime to `p`.
pub fn decompose_length(n: u64, p: u64) -> Result<(u32, u32, u64)> {
    if n == 0 {
        return Err(invalid("length must be positive"));
    }
    if p == 2 || !numtheory::is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    let mu = numtheory::exact_divide(p, n)?;
    let k = n / p.pow(mu);
    let m = numtheory::exact_divide(2, k)?;
    Ok((mu, m, k >> m))
}

/// A primitive root of unity in a splitting extension of the coefficient field.
pub struct SplittingRoot {
    pub ext: Arc<ExtField>,
    pub value: ExtElem,
    pub order: u64,
}

/// Primitive `order`-th root of unity in `F_{Q^k}`, `k = ord_order(Q)`.
pub fn splitting_root(ctx: &Arc<FieldCtx>, order: u64) -> Result<SplittingRoot> {
    let k = numtheory::mult_ord(ctx.q(), order)? as usize;
    let ext = ExtField::of_degree(ctx, k)?;
    let value = ext.primitive_root(order)?;
    Ok(SplittingRoot { ext, value, order })
}

/// `prod_{j in coset} (x - alpha^j)`, computed in the extension; every
/// coefficient is checked to lie in the coefficient field. The coset multiplier
/// must be the coefficient field order and `alpha.order` its modulus.
pub fn minimal_poly_from_coset(coset: &CyclotomicCoset, alpha: &SplittingRoot) -> Result<Poly> {
    let base = alpha.ext.base();
    if coset.n != alpha.order || coset.q % coset.n.max(1) != base.q() % coset.n.max(1) {
        return Err(invalid("coset does not match the root of unity / field order"));
    }
    let roots: Vec<ExtElem> = coset
        .elements
        .iter()
        .map(|&j| alpha.ext.pow(&alpha.value, j))
        .collect();
    alpha.ext.product_of_linears(&roots)
}

/// Factor of `x^N - 1` indexed by a coset whose members have additive order
/// `order` (a divisor of `N`), using a primitive `order`-th root.
fn factor_for_coset(coset: &CyclotomicCoset, order: u64, root: &SplittingRoot) -> Result<Poly> {
    let scale = coset.n / order;
    let reduced = CyclotomicCoset {
        q: coset.q,
        n: order,
        rep: coset.rep / scale,
        elements: {
            let mut v: Vec<u64> = coset.elements.iter().map(|&j| j / scale).collect();
            v.sort_unstable();
            v
        },
    };
    if reduced.len() <= PRODUCT_PATH_MAX {
        minimal_poly_from_coset(&reduced, root)
    } else {
        let gamma = root.ext.pow(&root.value, reduced.rep);
        root.ext.minimal_poly(&gamma, reduced.len())
    }
}

/// Tagged factorization of `x^n - λ` over `F_q` (Euclidean) or `F_{q^2}`
/// (Hermitian), where `base` is `F_q`.
pub fn factor_xn(base: &Arc<FieldCtx>, n: u64, sign: Sign, mode: Mode) -> Result<FactorizationReport> {
    let qq = base.order();
    if !qq.is_odd() {
        return Err(Error::EvenOrder(qq.q));
    }
    let q = qq.q;
    let (mu, m, n_prime) = decompose_length(n, qq.p)?;
    let k = (1u64 << m) * n_prime;
    let big_n = match sign {
        Sign::PlusOne => k,
        Sign::MinusOne => 2 * k,
    };
    let field = mode.working_field(&qq)?;
    let field_q = field.q();
    let mult = qq.p.pow(mu);

    let mut classes: BTreeMap<u64, Vec<CyclotomicCoset>> = BTreeMap::new();
    for c in cosets::representatives(field_q % big_n.max(1), big_n)? {
        if sign == Sign::MinusOne && c.rep % 2 == 0 {
            continue;
        }
        classes.entry(c.additive_order()).or_default().push(c);
    }

    let mut records = Vec::new();
    for (order, group) in &classes {
        let root = splitting_root(&field, *order)?;
        for c in group {
            let poly = factor_for_coset(c, *order, &root)?;
            let coset_self = mode.coset_is_self_paired(q, big_n, c.rep)?;
            let poly_self = mode.partner(&poly, q)? == poly;
            if coset_self != poly_self {
                return Err(Error::Inconsistent(format!(
                    "coset {} and polynomial {poly} disagree on self-pairing",
                    c.rep
                )));
            }
            records.push((poly, c.rep, coset_self));
        }
    }
    records.sort_by(|a, b| a.0.cmp(&b.0));

    let index: HashMap<&Poly, usize> = records.iter().enumerate().map(|(i, r)| (&r.0, i)).collect();
    let mut tagged = Vec::with_capacity(records.len());
    for (i, (poly, rep, is_self)) in records.iter().enumerate() {
        let tag = if *is_self {
            Tag::SelfPaired
        } else {
            let partner = mode.partner(poly, q)?;
            match index.get(&partner) {
                Some(&j) if j != i => Tag::PairedWith(j),
                _ => {
                    return Err(Error::Inconsistent(format!("no partner for factor {poly}")));
                }
            }
        };
        tagged.push(FactorRecord {
            poly: poly.clone(),
            multiplicity: mult,
            coset_rep: *rep,
            tag,
        });
    }
    let r = tagged.len();
    let s = tagged.iter().filter(|t| t.tag == Tag::SelfPaired).count();
    let report = FactorizationReport {
        q: qq,
        n,
        sign,
        mode,
        mu,
        m,
        n_prime,
        field,
        records: tagged,
        r,
        s,
        t: (r - s) / 2,
    };
    if product_of_records(&report)? != report.target() {
        return Err(Error::Inconsistent(format!(
            "factors do not multiply to x^{n} - ({})",
            sign.as_str()
        )));
    }
    Ok(report)
}

/// [`factor_xn`] with the base field given by its order.
pub fn factor_xn_over(q: u64, n: u64, sign: Sign, mode: Mode) -> Result<FactorizationReport> {
    let pp = PrimePower::from_q(q)?;
    factor_xn(&make_field(pp.p, pp.e)?, n, sign, mode)
}

fn product_of_records(report: &FactorizationReport) -> Result<Poly> {
    let mut acc = Poly::one(&report.field);
    for rec in &report.records {
        acc = acc.mul(&rec.poly.pow(rec.multiplicity)?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NotMonic,
    ProductIdentity,
    Counts,
    Tag,
    Pairing,
    NotIrreducible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

fn violation(kind: ViolationKind, detail: impl Into<String>) -> std::result::Result<(), Violation> {
    Err(Violation {
        kind,
        detail: detail.into(),
    })
}

/// Re-checks a report at the polynomial level: monicity, the product identity,
/// the counts, tag correctness (`f = f*` / `f = f†`), pairing symmetry and
/// irreducibility. Returns the first violation found.
pub fn verify_report(report: &FactorizationReport) -> std::result::Result<(), Violation> {
    let q = report.q.q;
    for rec in &report.records {
        if !rec.poly.is_monic() {
            return violation(ViolationKind::NotMonic, format!("{}", rec.poly));
        }
    }
    match product_of_records(report) {
        Ok(prod) if prod == report.target() => {}
        Ok(_) => return violation(ViolationKind::ProductIdentity, "product of factors differs from x^n - λ"),
        Err(e) => return violation(ViolationKind::ProductIdentity, e.to_string()),
    }
    let s = report.self_paired().count();
    if report.r != report.records.len() || report.s != s || report.r != report.s + 2 * report.t {
        return violation(ViolationKind::Counts,
            format!("r={} s={} t={} for {} records", report.r, report.s, report.t, report.records.len()),
        );
    }
    for (i, rec) in report.records.iter().enumerate() {
        let partner = match report.mode.partner(&rec.poly, q) {
            Ok(p) => p,
            Err(e) => return violation(ViolationKind::Tag, e.to_string()),
        };
        match rec.tag {
            Tag::SelfPaired => {
                if partner != rec.poly {
                    return violation(ViolationKind::Tag, format!("{} is tagged self but is not fixed", rec.poly));
                }
            }
            Tag::PairedWith(j) => {
                if partner == rec.poly {
                    return violation(ViolationKind::Tag, format!("{} is fixed but tagged paired", rec.poly));
                }
                let Some(other) = report.records.get(j) else {
                    return violation(ViolationKind::Pairing, format!("index {j} out of range"));
                };
                if j == i || other.tag != Tag::PairedWith(i) || other.poly != partner {
                    return violation(ViolationKind::Pairing, format!("record {i} and {j} are not partners"));
                }
            }
        }
    }
    for rec in &report.records {
        match rec.poly.is_irreducible() {
            Ok(true) => {}
            Ok(false) => return violation(ViolationKind::NotIrreducible, format!("{}", rec.poly)),
            Err(e) => return violation(ViolationKind::NotIrreducible, e.to_string()),
        }
    }
    Ok(())
}

/// Number of records whose coset has additive order `order`.
pub fn records_with_additive_order(report: &FactorizationReport, order: u64) -> usize {
    let big_n = report.coset_modulus();
    report
        .records
        .iter()
        .filter(|r| big_n / gcd(r.coset_rep, big_n) == order)
        .count()
}
