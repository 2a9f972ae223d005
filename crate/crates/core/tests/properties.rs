use negacycl::cosets;
use negacycl::factorization::{self, Mode, ReportDoc, Sign, Tag};
use negacycl::finitefield::make_field;
use negacycl::negacyclic::{self, LcdCensus};
use negacycl::numtheory::{gcd, PrimePower};
use negacycl::polyring::Poly;
use proptest::prelude::*;

fn small_q() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 9, 11, 25, 27])
}

fn code_q() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 9])
}

fn sign() -> impl Strategy<Value = Sign> {
    prop::sample::select(vec![Sign::PlusOne, Sign::MinusOne])
}

fn mode() -> impl Strategy<Value = Mode> {
    prop::sample::select(vec![Mode::Euclidean, Mode::Hermitian])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cosets_partition_the_residues(q in small_q(), n in 1u64..300) {
        prop_assume!(gcd(q, n) == 1);
        let reps = cosets::representatives(q, n).unwrap();
        let mut seen = vec![false; n as usize];
        for c in &reps {
            for &j in &c.elements {
                prop_assert!(!seen[j as usize]);
                seen[j as usize] = true;
                prop_assert!(c.contains(j * q % n));
            }
        }
        prop_assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn report_invariants(q in small_q(), n in 1u64..60, sign in sign(), mode in mode()) {
        let report = factorization::factor_xn_over(q, n, sign, mode).unwrap();
        prop_assert!(factorization::verify_report(&report).is_ok());
        prop_assert_eq!(report.r, report.s + 2 * report.t);
        prop_assert_eq!(report.r, report.records.len());
        let base_q = report.q.q;
        for (i, rec) in report.records.iter().enumerate() {
            let partner = mode.partner(&rec.poly, base_q).unwrap();
            match rec.tag {
                Tag::SelfPaired => prop_assert_eq!(&partner, &rec.poly),
                Tag::PairedWith(j) => {
                    prop_assert_ne!(i, j);
                    prop_assert_eq!(&partner, &report.records[j].poly);
                }
            }
        }
    }

    #[test]
    fn report_json_round_trips(q in small_q(), n in 1u64..40, sign in sign(), mode in mode()) {
        let report = factorization::factor_xn_over(q, n, sign, mode).unwrap();
        let text = report.to_json();
        let back = ReportDoc::from_json(&text).unwrap().into_report().unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn dual_is_an_involution(q in code_q(), n in 1u64..20, mode in mode(), mask in any::<u64>()) {
        let pp = PrimePower::from_q(q).unwrap();
        let base = make_field(pp.p, pp.e).unwrap();
        let report = factorization::factor_xn(&base, n, Sign::MinusOne, mode).unwrap();
        let mut g = Poly::one(&report.field);
        for (i, rec) in report.records.iter().enumerate() {
            let k = (mask >> (2 * (i % 32))) % (rec.multiplicity + 1);
            g = g.mul(&rec.poly.pow(k).unwrap());
        }
        let code = negacyclic::make_code(&report.field, n, g).unwrap();
        let dual = negacyclic::dual(&code, mode).unwrap();
        prop_assert_eq!(dual.dim, n - code.dim);
        prop_assert_eq!(negacyclic::dual(&dual, mode).unwrap().gen, code.gen.clone());
        prop_assert_eq!(negacyclic::brute_dual(&code, mode).unwrap().gen, dual.gen.clone());
        let lcd = negacyclic::is_lcd(&code, mode).unwrap();
        prop_assert_eq!(lcd, negacyclic::intersection_dim(&code, &dual).unwrap() == 0);
    }

    #[test]
    fn census_json_round_trips(q in code_q(), n in 1u64..24, mode in mode()) {
        let census = negacyclic::count_lcd(q, n, mode).unwrap();
        prop_assert_eq!(LcdCensus::from_json(&census.to_json()).unwrap(), census);
    }
}
