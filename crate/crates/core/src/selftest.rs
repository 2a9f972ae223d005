//! The verification sweep: every closed form and characterization checked
//! against its oracle over a grid of field orders and lengths.
//!
//! Suites run in parallel per grid point but collect results in a fixed
//! order, so reports and artifacts are reproducible byte for byte.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cosets;
use crate::counting::{self, ExtremeClass};
use crate::error::Result;
use crate::factorization::{self, FactorizationReport, Mode, ReportDoc, Sign, Tag};
use crate::finitefield::make_field;
use crate::negacyclic::{self, NegacyclicCode};
use crate::numtheory::{self, euler_phi, gcd, mult_ord, PrimePower};
use crate::polyring::Poly;

pub const GRID_Q: [u64; 8] = [3, 5, 7, 9, 11, 13, 25, 27];
pub const CODE_Q: [u64; 3] = [3, 5, 9];
/// Lengths up to this bound get the dual and LCD suite.
pub const CODE_N_MAX: u64 = 24;
/// Divisors of `x^n + 1` checked per `(q, n, mode)` in the dual suite; beyond
/// this an evenly spaced deterministic sample is used.
pub const DIVISOR_SAMPLE: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepConfig {
    pub q_max: u64,
    pub n_max: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { q_max: 27, n_max: 200 }
    }
}

impl SweepConfig {
    fn grid_q(&self) -> Vec<u64> {
        GRID_Q.iter().copied().filter(|&q| q <= self.q_max).collect()
    }

    fn code_q(&self) -> Vec<u64> {
        CODE_Q.iter().copied().filter(|&q| q <= self.q_max).collect()
    }

    fn d_max(&self) -> u64 {
        5 * self.n_max / 2
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub id: u32,
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

/// Pass/fail tally for one unit of work.
#[derive(Debug, Default)]
struct Tally {
    checks: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, ctx: impl FnOnce() -> String) {
        let ok = got == want;
        self.check(ok, || format!("{}: got {got:?}, expected {want:?}", ctx()));
    }

    /// Records an error as a failed check and yields the value otherwise.
    fn ok<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", ctx()));
                None
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
    }

    fn finish(self, id: u32, name: &str) -> SuiteResult {
        SuiteResult {
            id,
            name: name.to_string(),
            checks: self.checks,
            failures: self.failures,
            first_failure: self.first,
        }
    }
}

fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|item| {
            let mut t = Tally::default();
            f(item, &mut t);
            t
        })
        .collect();
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridKey {
    pub q: u64,
    pub n: u64,
    pub sign: Sign,
    pub mode: Mode,
}

/// Factorizations of `x^n ± 1` for every grid point, both signs and modes.
pub struct Grid {
    pub reports: BTreeMap<GridKey, std::result::Result<Arc<FactorizationReport>, String>>,
}

impl Grid {
    pub fn build(cfg: &SweepConfig) -> Grid {
        let mut keys = Vec::new();
        for q in cfg.grid_q() {
            for n in (1..=cfg.n_max).filter(|&n| gcd(n, q) == 1) {
                for sign in [Sign::PlusOne, Sign::MinusOne] {
                    for mode in [Mode::Euclidean, Mode::Hermitian] {
                        keys.push(GridKey { q, n, sign, mode });
                    }
                }
            }
        }
        let reports = keys
            .par_iter()
            .map(|k| {
                let r = factorization::factor_xn_over(k.q, k.n, k.sign, k.mode)
                    .map(Arc::new)
                    .map_err(|e| e.to_string());
                (*k, r)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        Grid { reports }
    }

    pub fn get(&self, q: u64, n: u64, sign: Sign, mode: Mode) -> Option<&Arc<FactorizationReport>> {
        self.reports.get(&GridKey { q, n, sign, mode })?.as_ref().ok()
    }

    fn self_count(&self, q: u64, n: u64, sign: Sign, mode: Mode) -> Option<u64> {
        self.get(q, n, sign, mode).map(|r| r.s as u64)
    }

    fn self_set(&self, q: u64, n: u64, sign: Sign, mode: Mode) -> Option<BTreeSet<String>> {
        self.get(q, n, sign, mode)
            .map(|r| r.self_paired().map(|rec| rec.poly.to_string()).collect())
    }
}

pub struct SweepOutput {
    pub suites: Vec<SuiteResult>,
    /// `(file name, contents)`.
    pub artifacts: Vec<(String, String)>,
}

impl SweepOutput {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

pub const SUITE_NAMES: [&str; 8] = [
    "good-integer predicates vs search oracles",
    "coset characterizations vs good-integer tests",
    "closed-form counts vs explicit factorization",
    "difference identities",
    "recursive counts and errata pins",
    "extreme-case, product and two-prime theorems",
    "duals and LCD codes",
    "determinism of JSON artifacts",
];

/// Runs suites 1 to 8.
pub fn run_selftest(cfg: &SweepConfig) -> SweepOutput {
    let grid = Grid::build(cfg);
    let mut suites = vec![
        suite_good_integers(cfg),
        suite_characterizations(cfg),
        suite_closed_forms(cfg, &grid),
        suite_differences(cfg, &grid),
        suite_recursions(cfg, &grid),
        suite_extremes(cfg, &grid),
        suite_codes(cfg),
    ];
    let artifacts = build_artifacts(cfg, &grid);
    let again = build_artifacts(cfg, &Grid::build(cfg));
    suites.push(suite_determinism(&artifacts, &again));
    SweepOutput { suites, artifacts }
}

pub fn suite_good_integers(cfg: &SweepConfig) -> SuiteResult {
    let jobs: Vec<(u64, u64)> = cfg
        .grid_q()
        .into_iter()
        .flat_map(|q| (1..=cfg.d_max()).filter(move |&d| gcd(d, q) == 1).map(move |d| (q, d)))
        .collect();
    par_tally(&jobs, |&(q, d), t| {
        let ctx = || format!("q={q} d={d}");
        if let (Some(a), Some(b)) = (t.ok(numtheory::is_good(d, q), ctx), t.ok(numtheory::is_good_oracle(d, q), ctx)) {
            t.eq(a, b, || format!("good, {}", ctx()));
        }
        if let (Some(a), Some(b)) = (
            t.ok(numtheory::is_oddly_good(d, q), ctx),
            t.ok(numtheory::is_oddly_good_oracle(d, q), ctx),
        ) {
            t.eq(a, b, || format!("oddly good, {}", ctx()));
        }
    })
    .finish(1, SUITE_NAMES[0])
}

pub fn suite_characterizations(cfg: &SweepConfig) -> SuiteResult {
    let mut jobs = Vec::new();
    for q in cfg.grid_q() {
        for n_prime in (1..=cfg.n_max).step_by(2).filter(|&n| gcd(n, q) == 1) {
            let mut m = 0;
            while (2u64 << m) * n_prime <= 2 * cfg.n_max {
                jobs.push((q, m, n_prime));
                m += 1;
            }
        }
    }
    par_tally(&jobs, |&(q, m, n_prime), t| {
        let big_n = (2u64 << m) * n_prime;
        let half = big_n / 2;
        let ctx = || format!("q={q} N={big_n}");
        let Some(reps) = t.ok(cosets::representatives(q, big_n), ctx) else {
            return;
        };
        for c in &reps {
            t.check(cosets::same_parity(c), || format!("parity, {} i={}", ctx(), c.rep));
        }
        for i in 0..big_n {
            if let Some(ok) = t.ok(cosets::srim_criteria_agree(q, big_n, i), ctx) {
                t.check(ok, || format!("SRIM criterion, {} i={i}", ctx()));
            }
            if let Some(ok) = t.ok(cosets::scrim_criteria_agree(q, big_n, i), ctx) {
                t.check(ok, || format!("SCRIM criterion, {} i={i}", ctx()));
            }
            let root_condition = (i as u128 * half as u128 % big_n as u128) as u64 == half;
            let order_condition = (big_n / gcd(i, big_n)) % (2u64 << m) == 0;
            if let Some(div) = t.ok(cosets::divides_xn_plus1(q, m, n_prime, i), ctx) {
                t.check(div == (i % 2 == 1) && div == root_condition && div == order_condition, || {
                    format!("divisibility, {} i={i}", ctx())
                });
            }
        }
    })
    .finish(2, SUITE_NAMES[1])
}

/// Number of irreducible factors of `x^n - λ` with `n` coprime to `q`, by
/// divisor sums over the coefficient field order `big_q`.
fn factor_count(big_q: u64, n: u64, sign: Sign) -> Result<(u64, BTreeMap<u64, u64>)> {
    let m = numtheory::exact_divide(2, n)?;
    let n_prime = n >> m;
    let orders: Vec<u64> = match sign {
        Sign::PlusOne => numtheory::divisors(n)?,
        Sign::MinusOne => numtheory::divisors(n_prime)?.into_iter().map(|d| (2u64 << m) * d).collect(),
    };
    let mut per_class = BTreeMap::new();
    for d in orders {
        per_class.insert(d, euler_phi(d)? / mult_ord(big_q % d, d)?);
    }
    Ok((per_class.values().sum(), per_class))
}

fn closed_form(q: u64, n: u64, sign: Sign, mode: Mode) -> Result<u64> {
    match sign {
        Sign::PlusOne => counting::count_cyclic(q, n, mode),
        Sign::MinusOne => counting::count_negacyclic(q, n, mode),
    }
}

pub fn suite_closed_forms(_cfg: &SweepConfig, grid: &Grid) -> SuiteResult {
    let entries: Vec<_> = grid.reports.iter().collect();
    par_tally(&entries, |(key, rep), t| {
        let GridKey { q, n, sign, mode } = **key;
        let ctx = || format!("q={q} n={n} sign={} {}", sign.as_str(), mode.as_str());
        let rep = match rep {
            Ok(r) => r,
            Err(e) => {
                t.check(false, || format!("factorization failed, {}: {e}", ctx()));
                return;
            }
        };
        let verified = factorization::verify_report(rep);
        t.check(verified.is_ok(), || format!("verify_report, {}: {}", ctx(), verified.clone().unwrap_err()));
        if let Some(s) = t.ok(closed_form(q, n, sign, mode), ctx) {
            t.eq(rep.s as u64, s, || format!("self-paired count, {}", ctx()));
        }
        if let Some((r, per_class)) = t.ok(factor_count(mode.field_order(q), n, sign), ctx) {
            t.eq(rep.r as u64, r, || format!("factor count, {}", ctx()));
            for (&d, &want) in &per_class {
                t.eq(factorization::records_with_additive_order(rep, d) as u64, want, || {
                    format!("class {d}, {}", ctx())
                });
            }
        }
        if sign == Sign::MinusOne && n % 2 == 1 {
            let x_plus_1 = Poly::from_ints(&rep.field, &[1, 1]);
            t.check(
                rep.records.iter().any(|r| r.poly == x_plus_1 && r.tag == Tag::SelfPaired),
                || format!("x+1 self-paired, {}", ctx()),
            );
        }
        let back = ReportDoc::from_json(&rep.to_json()).and_then(ReportDoc::into_report);
        t.check(back.as_ref().ok() == Some(&**rep), || format!("JSON round trip, {}", ctx()));
    })
    .finish(3, SUITE_NAMES[2])
}

pub fn suite_differences(cfg: &SweepConfig, grid: &Grid) -> SuiteResult {
    let jobs: Vec<(u64, u64)> = cfg
        .grid_q()
        .into_iter()
        .flat_map(|q| (1..=cfg.n_max).filter(move |&n| gcd(n, q) == 1).map(move |n| (q, n)))
        .collect();
    par_tally(&jobs, |&(q, n), t| {
        for mode in [Mode::Euclidean, Mode::Hermitian] {
            let ctx = || format!("q={q} n={n} {}", mode.as_str());
            if let Some(ok) = t.ok(counting::lem2_check(q, n, mode), ctx) {
                t.check(ok, || format!("closed forms, {}", ctx()));
            }
            let counts = (
                grid.self_count(q, n, Sign::MinusOne, mode),
                grid.self_count(q, 2 * n, Sign::PlusOne, mode),
                grid.self_count(q, n, Sign::PlusOne, mode),
            );
            if let (Some(neg), Some(big), Some(small)) = counts {
                t.eq(neg + small, big, || format!("factor counts, {}", ctx()));
            }
        }
    })
    .finish(4, SUITE_NAMES[3])
}

pub fn suite_recursions(cfg: &SweepConfig, grid: &Grid) -> SuiteResult {
    let mut jobs = Vec::new();
    for q in cfg.grid_q() {
        for n_prime in (1..=cfg.n_max).step_by(2).filter(|&n| gcd(n, q) == 1) {
            let mut m = 0u32;
            while (1u64 << m) * n_prime <= cfg.n_max {
                jobs.push((q, m, n_prime));
                m += 1;
            }
        }
    }
    let mut tally = par_tally(&jobs, |&(q, m, n_prime), t| {
        let n = (1u64 << m) * n_prime;
        let ctx = || format!("q={q} m={m} n'={n_prime}");
        let pairs: [(Result<u64>, Result<u64>, &str); 4] = [
            (
                counting::count_srim_cyclic_recursive(q, m, n_prime),
                counting::count_srim_cyclic(q, n).map(|b| b.total),
                "SRIM x^n-1",
            ),
            (
                counting::count_srim_negacyclic_recursive(q, m, n_prime),
                counting::count_srim_negacyclic(q, m, n_prime).map(|b| b.total),
                "SRIM x^n+1",
            ),
            (
                counting::count_scrim_cyclic_recursive(q, m, n_prime),
                counting::count_scrim_cyclic(q, n).map(|b| b.total),
                "SCRIM x^n-1",
            ),
            (
                counting::count_scrim_negacyclic_recursive(q, m, n_prime),
                counting::count_scrim_negacyclic(q, m, n_prime).map(|b| b.total),
                "SCRIM x^n+1",
            ),
        ];
        for (rec, closed, what) in pairs {
            if let (Some(a), Some(b)) = (t.ok(rec, ctx), t.ok(closed, ctx)) {
                t.eq(a, b, || format!("{what}, {}", ctx()));
            }
        }
        let nu = numtheory::nu(q).unwrap_or(0);
        if m < nu {
            let neg = counting::count_scrim_negacyclic(q, m, n_prime).map(|b| b.total);
            let cyc = counting::count_scrim_cyclic(q, n).map(|b| b.total);
            if let (Some(a), Some(b)) = (t.ok(neg, ctx), t.ok(cyc, ctx)) {
                t.eq(a, b, || format!("SCRIM(-1) = SCRIM(1) below nu, {}", ctx()));
            }
        }
    });

    // errata pins: (q, m, n', sign, true value, as-printed value)
    let pins: [(u64, u32, u64, Sign, u64, u64); 3] = [
        (3, 2, 1, Sign::PlusOne, 3, 5),
        (3, 1, 1, Sign::MinusOne, 1, 3),
        (7, 3, 1, Sign::PlusOne, 5, 9),
    ];
    for (q, m, n_prime, sign, truth, printed) in pins {
        let ctx = || format!("pin q={q} m={m} n'={n_prime} sign={}", sign.as_str());
        let (imp, asp) = match sign {
            Sign::PlusOne => (
                counting::count_srim_cyclic_recursive(q, m, n_prime),
                counting::count_srim_cyclic_recursive_as_printed(q, m, n_prime),
            ),
            Sign::MinusOne => (
                counting::count_srim_negacyclic_recursive(q, m, n_prime),
                counting::count_srim_negacyclic_recursive_as_printed(q, m, n_prime),
            ),
        };
        if let Some(v) = tally.ok(imp, ctx) {
            tally.eq(v, truth, || format!("implemented, {}", ctx()));
        }
        if let Some(v) = tally.ok(asp, ctx) {
            tally.eq(v, printed, || format!("as printed, {}", ctx()));
        }
        let n = (1u64 << m) * n_prime;
        if let Some(v) = tally.ok(factorization::factor_xn_over(q, n, sign, Mode::Euclidean), ctx) {
            tally.eq(v.s as u64, truth, || format!("factorization, {}", ctx()));
        }
    }
    for (q, ms) in [(3u64, 1..=3u32), (7, 2..=3)] {
        for m in ms {
            let n = 1u64 << m;
            let ctx = || format!("pin q={q} m={m}");
            for sign in [Sign::PlusOne, Sign::MinusOne] {
                let rec = match sign {
                    Sign::PlusOne => counting::count_srim_cyclic_recursive(q, m, 1),
                    Sign::MinusOne => counting::count_srim_negacyclic_recursive(q, m, 1),
                };
                let fact = factorization::factor_xn_over(q, n, sign, Mode::Euclidean).map(|r| r.s as u64);
                if let (Some(a), Some(b)) = (tally.ok(rec, ctx), tally.ok(fact, ctx)) {
                    tally.eq(a, b, || format!("{} sign={}", ctx(), sign.as_str()));
                }
            }
        }
    }
    let _ = grid;
    tally.finish(5, SUITE_NAMES[4])
}

fn verdict(rep: &FactorizationReport) -> ExtremeClass {
    if rep.s == rep.r {
        ExtremeClass::AllSelf
    } else if rep.s == 1 {
        ExtremeClass::OnlyXPlusOne
    } else {
        ExtremeClass::Mixed
    }
}

fn odd_primes_up_to(n: u64) -> Vec<u64> {
    (3..=n).step_by(2).filter(|&l| numtheory::is_prime(l)).collect()
}

pub fn suite_extremes(cfg: &SweepConfig, grid: &Grid) -> SuiteResult {
    let n_max = cfg.n_max.min(199);
    let modes = [Mode::Euclidean, Mode::Hermitian];
    let classify = |q: u64, n: u64, mode: Mode| match mode {
        Mode::Euclidean => counting::classify_extreme_srim(q, n),
        Mode::Hermitian => counting::classify_extreme_scrim(q, n),
    };
    let mut tally = Tally::default();
    for q in cfg.code_q() {
        let odd: Vec<u64> = (1..=n_max).step_by(2).filter(|&n| gcd(n, q) == 1).collect();

        // verdicts against factorization, and the prime-power dichotomy
        let part = par_tally(&odd, |&n, t| {
            for mode in modes {
                let ctx = || format!("q={q} n={n} {}", mode.as_str());
                let Some(rep) = grid.get(q, n, Sign::MinusOne, mode) else {
                    t.check(false, || format!("missing factorization, {}", ctx()));
                    continue;
                };
                if let Some(v) = t.ok(classify(q, n, mode), ctx) {
                    t.eq(v, verdict(rep), || format!("verdict, {}", ctx()));
                    if numtheory::factorize(n).map(|f| f.factors.len() == 1).unwrap_or(false) {
                        t.check(v != ExtremeClass::Mixed, || format!("prime power is mixed, {}", ctx()));
                    }
                }
            }
        });
        tally.merge(part);

        // two-prime corollaries, both orders of the primes
        let primes: Vec<u64> = odd_primes_up_to(n_max).into_iter().filter(|&l| q % l != 0).collect();
        let mut cases = Vec::new();
        for &l1 in &primes {
            for &l2 in &primes {
                if l1 == l2 {
                    continue;
                }
                let mut p1 = l1;
                let mut r1 = 1;
                while p1 * l2 <= n_max {
                    let mut p2 = l2;
                    let mut r2 = 1;
                    while p1 * p2 <= n_max {
                        cases.push((l1, r1, l2, r2, p1 * p2));
                        p2 *= l2;
                        r2 += 1;
                    }
                    p1 *= l1;
                    r1 += 1;
                }
            }
        }
        let part = par_tally(&cases, |&(l1, r1, l2, r2, n), t| {
            let ctx = || format!("q={q} {l1}^{r1} {l2}^{r2}");
            let srim = counting::count_two_prime_srim(q, l1, r1, l2, r2);
            let scrim = counting::count_two_prime_scrim(q, l1, r1, l2, r2);
            for (got, mode) in [(srim, Mode::Euclidean), (scrim, Mode::Hermitian)] {
                let truth = grid.self_count(q, n, Sign::MinusOne, mode);
                if let (Some(a), Some(b)) = (t.ok(got, ctx), truth) {
                    t.eq(a, b, || format!("two-prime {}, {}", mode.as_str(), ctx()));
                } else if truth.is_none() {
                    t.check(false, || format!("missing factorization, {}", ctx()));
                }
            }
        });
        tally.merge(part);

        // product theorems over coprime pairs n1, n2 > 1
        let mut pairs = Vec::new();
        for &n1 in odd.iter().filter(|&&n| n > 1) {
            for &n2 in odd.iter().filter(|&&n| n > 1 && n != n1) {
                if gcd(n1, n2) == 1 && n1 * n2 <= n_max {
                    pairs.push((n1, n2));
                }
            }
        }
        let part = par_tally(&pairs, |&(n1, n2), t| {
            let n = n1 * n2;
            let ctx = || format!("q={q} n1={n1} n2={n2}");
            for mode in modes {
                let reps = (
                    grid.get(q, n1, Sign::MinusOne, mode),
                    grid.get(q, n2, Sign::MinusOne, mode),
                    grid.get(q, n, Sign::MinusOne, mode),
                );
                let (Some(a), Some(b), Some(c)) = reps else {
                    t.check(false, || format!("missing factorization, {}", ctx()));
                    continue;
                };
                let (va, vb, vc) = (verdict(a), verdict(b), verdict(c));
                if va == ExtremeClass::OnlyXPlusOne && vb == ExtremeClass::OnlyXPlusOne {
                    t.eq(vc, ExtremeClass::OnlyXPlusOne, || format!("product 1 {}, {}", mode.as_str(), ctx()));
                }
                if va == ExtremeClass::AllSelf && vb == ExtremeClass::OnlyXPlusOne {
                    t.eq(
                        grid.self_set(q, n, Sign::MinusOne, mode),
                        grid.self_set(q, n1, Sign::MinusOne, mode),
                        || format!("product 2 {}, {}", mode.as_str(), ctx()),
                    );
                }
                if va == ExtremeClass::AllSelf && vb == ExtremeClass::AllSelf {
                    let expected = match mode {
                        Mode::Euclidean => {
                            let s1 = mult_ord(q, n1).and_then(|o| numtheory::exact_divide(2, o));
                            let s2 = mult_ord(q, n2).and_then(|o| numtheory::exact_divide(2, o));
                            match (s1, s2) {
                                (Ok(s1), Ok(s2)) => s1 == s2 && s1 >= 1,
                                _ => false,
                            }
                        }
                        Mode::Hermitian => true,
                    };
                    t.eq(vc == ExtremeClass::AllSelf, expected, || {
                        format!("product 3 {}, {}", mode.as_str(), ctx())
                    });
                }
            }
            // the all-SCRIM product statement read literally for x^n - 1
            let cyc = (
                grid.get(q, n1, Sign::PlusOne, Mode::Hermitian),
                grid.get(q, n2, Sign::PlusOne, Mode::Hermitian),
                grid.get(q, n, Sign::PlusOne, Mode::Hermitian),
            );
            if let (Some(a), Some(b), Some(c)) = cyc {
                if a.s == a.r && b.s == b.r {
                    t.check(c.s == c.r, || format!("product 3 hermitian x^n-1, {}", ctx()));
                }
            }
        });
        tally.merge(part);
    }
    tally.finish(6, SUITE_NAMES[5])
}

/// Exponent vectors (mixed radix, first record least significant) of the
/// divisors checked for one report.
fn divisor_indices(report: &FactorizationReport) -> (Vec<u64>, Vec<u64>) {
    let radix: Vec<u64> = report.records.iter().map(|r| r.multiplicity + 1).collect();
    let total = radix.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r)).unwrap_or(u64::MAX);
    let picks = if total <= DIVISOR_SAMPLE {
        (0..total).collect()
    } else {
        let mut v: Vec<u64> = (0..DIVISOR_SAMPLE)
            .map(|i| ((i as u128 * (total - 1) as u128) / (DIVISOR_SAMPLE - 1) as u128) as u64)
            .collect();
        v.dedup();
        v
    };
    (radix, picks)
}

fn divisor_at(report: &FactorizationReport, radix: &[u64], mut index: u64) -> Result<Poly> {
    let mut g = Poly::one(&report.field);
    for (rec, &r) in report.records.iter().zip(radix) {
        let e = index % r;
        index /= r;
        if e > 0 {
            g = g.mul(&rec.poly.pow(e)?);
        }
    }
    Ok(g)
}

fn code_jobs(cfg: &SweepConfig) -> Vec<(u64, u64, Mode)> {
    let mut jobs = Vec::new();
    for q in cfg.code_q() {
        for n in 1..=cfg.n_max.min(CODE_N_MAX) {
            for mode in [Mode::Euclidean, Mode::Hermitian] {
                jobs.push((q, n, mode));
            }
        }
    }
    jobs
}

fn check_code_case(q: u64, n: u64, mode: Mode, t: &mut Tally) {
    let ctx = || format!("q={q} n={n} {}", mode.as_str());
    let Some(pp) = t.ok(PrimePower::from_q(q), ctx) else {
        return;
    };
    let Some(base) = t.ok(make_field(pp.p, pp.e), ctx) else {
        return;
    };
    let Some(report) = t.ok(factorization::factor_xn(&base, n, Sign::MinusOne, mode), ctx) else {
        return;
    };
    let Some(census) = t.ok(negacyclic::enumerate_lcd(&base, n, mode), ctx) else {
        return;
    };
    let Some(counted) = t.ok(negacyclic::count_lcd(q, n, mode), ctx) else {
        return;
    };
    let listed = census.generators.clone().unwrap_or_default();
    t.eq(listed.len() as u128, census.count, || format!("census size, {}", ctx()));
    t.eq(census.count, 1u128 << ((report.r + report.s) / 2), || format!("2^((r+s)/2), {}", ctx()));
    t.eq(counted.count, census.count, || format!("count_lcd, {}", ctx()));
    t.eq((counted.r, counted.s), (report.r as u64, report.s as u64), || format!("r, s, {}", ctx()));

    let field = &report.field;
    let p_mu = report.q.p.pow(report.mu);
    let members: HashSet<&String> = listed.iter().collect();
    for g in &listed {
        let Some(g) = t.ok(Poly::parse(field, g), ctx) else {
            continue;
        };
        let partner = mode.partner(&g, q);
        t.check(partner.as_ref().ok() == Some(&g), || format!("generator {g} not fixed, {}", ctx()));
        if let Some(exps) = t.ok(negacyclic::exponent_profile(&g, &report), ctx) {
            t.check(exps.iter().all(|&e| e == 0 || e == p_mu), || {
                format!("exponents {exps:?} of {g}, {}", ctx())
            });
        }
        if let Some(code) = t.ok(negacyclic::make_code(field, n, g.clone()), ctx) {
            t.check(negacyclic::is_lcd(&code, mode).unwrap_or(false), || format!("listed {g} not LCD, {}", ctx()));
        }
    }

    let (radix, picks) = divisor_indices(&report);
    for index in picks {
        let Some(g) = t.ok(divisor_at(&report, &radix, index), ctx) else {
            continue;
        };
        let gctx = || format!("{} g={g}", ctx());
        let Some(code) = t.ok(negacyclic::make_code(field, n, g.clone()), gctx) else {
            continue;
        };
        check_code(&code, mode, members.contains(&g.to_string()), t, &gctx);
    }
}

fn check_code(code: &NegacyclicCode, mode: Mode, listed: bool, t: &mut Tally, ctx: &dyn Fn() -> String) {
    let Some(dual) = t.ok(negacyclic::dual(code, mode), ctx) else {
        return;
    };
    if let Some(brute) = t.ok(negacyclic::brute_dual(code, mode), ctx) {
        t.eq(&brute.gen, &dual.gen, || format!("brute dual, {}", ctx()));
    }
    t.eq(dual.dim, code.n - code.dim, || format!("dual dimension, {}", ctx()));
    if let Some(back) = t.ok(negacyclic::dual(&dual, mode), ctx) {
        t.eq(&back.gen, &code.gen, || format!("dual involution, {}", ctx()));
    }
    let lcd = negacyclic::is_lcd(code, mode);
    let inter = negacyclic::intersection_dim(code, &dual);
    let dense = negacyclic::intersection_dim_dense(code, &dual);
    if let (Some(lcd), Some(inter), Some(dense)) = (t.ok(lcd, ctx), t.ok(inter, ctx), t.ok(dense, ctx)) {
        t.eq(inter, dense, || format!("intersection routes, {}", ctx()));
        t.check(lcd == (inter == 0) && lcd == listed, || {
            format!("LCD views disagree (gcd {lcd}, dim {inter}, census {listed}), {}", ctx())
        });
    }
}

pub fn suite_codes(cfg: &SweepConfig) -> SuiteResult {
    let jobs = code_jobs(cfg);
    let mut tally = par_tally(&jobs, |&(q, n, mode), t| check_code_case(q, n, mode, t));

    // independence from p^mu
    let mut mu_jobs = Vec::new();
    for q in cfg.code_q() {
        let p = PrimePower::from_q(q).map(|pp| pp.p).unwrap_or(q);
        for k in (1..=cfg.n_max.min(CODE_N_MAX)).filter(|&k| k % p != 0) {
            for mode in [Mode::Euclidean, Mode::Hermitian] {
                mu_jobs.push((q, p, k, mode));
            }
        }
    }
    let part = par_tally(&mu_jobs, |&(q, p, k, mode), t| {
        let ctx = || format!("q={q} k={k} {}", mode.as_str());
        let counts: Vec<Option<u128>> = (0..=2u32)
            .map(|mu| t.ok(negacyclic::count_lcd(q, p.pow(mu) * k, mode), ctx).map(|c| c.count))
            .collect();
        t.check(counts.windows(2).all(|w| w[0] == w[1]), || format!("mu dependence {counts:?}, {}", ctx()));
        let base = PrimePower::from_q(q).and_then(|pp| make_field(pp.p, pp.e));
        if let Some(base) = t.ok(base, ctx) {
            for mu in 1..=2u32 {
                let n = p.pow(mu) * k;
                if n > cfg.n_max {
                    continue;
                }
                if let Some(c) = t.ok(negacyclic::enumerate_lcd(&base, n, mode), ctx) {
                    t.eq(Some(c.count), counts[0], || format!("enumerated at mu={mu}, {}", ctx()));
                }
            }
        }
    });
    tally.merge(part);
    tally.finish(7, SUITE_NAMES[6])
}

pub fn suite_determinism(first: &[(String, String)], second: &[(String, String)]) -> SuiteResult {
    let mut t = Tally::default();
    t.eq(first.len(), second.len(), || "artifact count".to_string());
    for ((name_a, a), (name_b, b)) in first.iter().zip(second) {
        t.check(name_a == name_b && a == b, || format!("artifact {name_a} differs between runs"));
    }
    t.finish(8, SUITE_NAMES[7])
}

fn jsonl<T: Serialize>(items: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(&item).expect("artifact serializes"));
        out.push('\n');
    }
    out
}

/// The JSON artifacts of a sweep: factorization reports, count breakdowns and
/// LCD censuses.
pub fn build_artifacts(cfg: &SweepConfig, grid: &Grid) -> Vec<(String, String)> {
    let mut reports = String::new();
    for (key, rep) in &grid.reports {
        match rep {
            Ok(r) => reports.push_str(&r.to_json()),
            Err(e) => reports.push_str(&serde_json::json!({"q": key.q, "n": key.n, "error": e}).to_string()),
        }
        reports.push('\n');
    }

    let count_keys: Vec<(u64, u64)> = cfg
        .grid_q()
        .into_iter()
        .flat_map(|q| (1..=cfg.n_max).filter(move |&n| gcd(n, q) == 1).map(move |n| (q, n)))
        .collect();
    let counts: Vec<serde_json::Value> = count_keys
        .par_iter()
        .map(|&(q, n)| {
            let m = n.trailing_zeros();
            let n_prime = n >> m;
            let as_value = |b: Result<counting::CountBreakdown>| match b {
                Ok(b) => serde_json::to_value(b).expect("breakdown serializes"),
                Err(e) => serde_json::Value::String(e.to_string()),
            };
            serde_json::json!({
                "q": q,
                "n": n,
                "srim_cyclic": as_value(counting::count_srim_cyclic(q, n)),
                "scrim_cyclic": as_value(counting::count_scrim_cyclic(q, n)),
                "srim_negacyclic": as_value(counting::count_srim_negacyclic(q, m, n_prime)),
                "scrim_negacyclic": as_value(counting::count_scrim_negacyclic(q, m, n_prime)),
            })
        })
        .collect();

    let censuses: Vec<serde_json::Value> = code_jobs(cfg)
        .par_iter()
        .map(|&(q, n, mode)| {
            let census = PrimePower::from_q(q)
                .and_then(|pp| make_field(pp.p, pp.e))
                .and_then(|base| negacyclic::enumerate_lcd(&base, n, mode));
            match census {
                Ok(c) => serde_json::to_value(c).expect("census serializes"),
                Err(e) => serde_json::json!({"q": q, "n": n, "error": e.to_string()}),
            }
        })
        .collect();

    vec![
        ("factorizations.jsonl".to_string(), reports),
        ("counts.jsonl".to_string(), jsonl(counts)),
        ("lcd_censuses.jsonl".to_string(), jsonl(censuses)),
    ]
}
