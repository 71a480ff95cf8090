use std::cmp::Ordering;

use irrmeasure::cf::{compare_errors, error_enclosure, surd_to_cf, ContinuedFraction, QuadraticSurd};
use irrmeasure::perm::{sigma_at, sweep, sweep_window, tau_at, AnalysisConfig, Member, TupleContext};
use irrmeasure::spec_file::{parse_spec, NumberSpec, Payload, Settings, TupleSpec};
use irrmeasure::structure::{check_remark_pattern, scan_coincidences, RemarkStatus, Verdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn periodic_cf() -> impl Strategy<Value = ContinuedFraction> {
    (
        -3i64..=3,
        prop::collection::vec(1u64..=9, 0..=3),
        prop::collection::vec(1u64..=9, 1..=4),
    )
        .prop_map(|(a0, pre, period)| ContinuedFraction::periodic(a0, &pre, &period).unwrap())
}

fn small_rational(num: i64, den: i64) -> impl Strategy<Value = BigRational> {
    (-num..=num, 1..=den).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn surd() -> impl Strategy<Value = QuadraticSurd> {
    (
        small_rational(6, 5),
        small_rational(4, 4).prop_filter("nonzero root", |r| !r.is_zero()),
        prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11, 13, 15, 19, 21, 29, 31, 43, 61]),
    )
        .prop_map(|(r, s, d)| QuadraticSurd::new(r, s, d).unwrap())
}

/// Exact `ξ_ν = |q_ν α − p_ν|` from the surd value.
fn exact_xi(cf: &ContinuedFraction, nu: usize) -> QuadraticSurd {
    let c = &cf.convergents(nu + 1).unwrap()[nu];
    cf.exact_value().unwrap().offset_abs(&c.q, &c.p)
}

fn independent_pair() -> impl Strategy<Value = (ContinuedFraction, ContinuedFraction)> {
    (periodic_cf(), periodic_cf()).prop_filter("independent", |(a, b)| {
        scan_coincidences(a, b, 40).is_ok_and(|l| l.verdict == Verdict::IndependentLikely)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn determinant_alternates(cf in periodic_cf()) {
        let c = cf.convergents(41).unwrap();
        for w in c.windows(2) {
            let det = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
            let expected = if w[1].index % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(det, expected);
        }
    }

    #[test]
    fn star_values_fold(cf in periodic_cf(), nu in 1usize..30) {
        let mut folded = BigRational::zero();
        for i in 1..=nu {
            folded = (BigRational::from_integer(cf.coefficient(i).unwrap().into()) + folded).recip();
        }
        prop_assert_eq!(cf.star_value(nu).unwrap(), folded);
    }

    #[test]
    fn surd_expansion_reconverges(s in surd()) {
        let cf = surd_to_cf(&s).unwrap();
        prop_assert_eq!(cf.exact_value(), Some(s.clone()));
        let (lo, hi) = s.enclosure(256);
        for c in cf.convergents(25).unwrap() {
            // |α − p/q| < 1/q²
            let q2 = BigRational::from_integer(&c.q * &c.q);
            let bound = q2.recip();
            prop_assert!((&lo - c.value()).abs() < bound.clone() + (&hi - &lo));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn error_terms_follow_recurrence(cf in periodic_cf(), nu in 1usize..20) {
        // ξ_{ν+1} = ξ_{ν−1} − a_{ν+1} ξ_ν
        let a = BigRational::from_integer(cf.coefficient(nu + 1).unwrap().into());
        let lhs = exact_xi(&cf, nu + 1);
        let rhs = exact_xi(&cf, nu - 1).checked_sub(&exact_xi(&cf, nu).scale(&a)).unwrap();
        prop_assert_eq!(rhs, Some(lhs));
    }

    #[test]
    fn enclosures_contain_exact_values(cf in periodic_cf(), nu in 0usize..20, depth in 0usize..15) {
        let term = error_enclosure(&cf, nu, depth).unwrap();
        let (lo, hi) = exact_xi(&cf, nu).enclosure(256);
        prop_assert!(term.lo() <= &lo && &hi <= term.hi());
        let deeper = error_enclosure(&cf, nu, depth + 1).unwrap();
        prop_assert!(deeper.lo() >= term.lo() && deeper.hi() <= term.hi());
    }

    #[test]
    fn comparison_is_antisymmetric_and_transitive(
        cfs in prop::collection::vec(periodic_cf(), 10),
        idx in prop::collection::vec(0usize..12, 10),
    ) {
        let terms: Vec<_> = cfs.iter().zip(&idx).map(|(cf, &i)| error_enclosure(cf, i, 0).unwrap()).collect();
        let approx: Vec<BigRational> = cfs.iter().zip(&idx).map(|(cf, &i)| exact_xi(cf, i).enclosure(256).0).collect();
        let mut order = vec![vec![None; 10]; 10];
        for i in 0..10 {
            for j in 0..10 {
                if i == j {
                    continue;
                }
                let (mut x, mut y) = (terms[i].clone(), terms[j].clone());
                if let Ok(o) = compare_errors(&mut x, &mut y, 200) {
                    order[i][j] = Some(o);
                    // Independent route: lower ends of 256-bit enclosures.
                    prop_assert_eq!(o, approx[i].cmp(&approx[j]));
                }
            }
        }
        for i in 0..10 {
            for j in 0..10 {
                if let (Some(a), Some(b)) = (order[i][j], order[j][i]) {
                    prop_assert_eq!(a, b.reverse());
                }
                for k in 0..10 {
                    if let (Some(Ordering::Less), Some(Ordering::Less)) = (order[i][j], order[j][k]) {
                        prop_assert_eq!(order[i][k], Some(Ordering::Less));
                    }
                }
            }
        }
    }
}

fn spec_strategy() -> impl Strategy<Value = TupleSpec> {
    let settings = (
        prop::option::of(1u64..1000),
        prop::option::of(1000u64..1_000_000),
        prop::option::of(1usize..600),
        prop::option::of(1usize..300),
        prop::option::of("[a-z][a-z0-9_/]{0,8}"),
    )
        .prop_map(|(burn_in, t_max, depth_cap, max_compare_depth, out_dir)| Settings {
            t_max,
            burn_in,
            depth_cap,
            max_compare_depth,
            out_dir,
        });
    let payload = prop_oneof![
        (prop::collection::vec(1i64..50, 0..4), prop::collection::vec(1i64..50, 1..4), -5i64..5).prop_map(
            |(mut preperiod, period, a0)| {
                if !preperiod.is_empty() {
                    preperiod[0] = a0;
                }
                Payload::Periodic { preperiod, period }
            }
        ),
        (-5i64..5, prop::collection::vec(1i64..50, 1..6)).prop_map(|(a0, rest)| Payload::Finite {
            coefficients: std::iter::once(a0).chain(rest).collect()
        }),
        (small_rational(9, 7), small_rational(9, 7).prop_filter("nonzero", |r| !r.is_zero()), prop::sample::select(vec![2u64, 3, 5, 7, 30]))
            .prop_map(|(rational, root, radicand)| Payload::Surd { rational, root, radicand }),
    ];
    (settings, prop::collection::vec(payload, 0..5)).prop_map(|(settings, payloads)| TupleSpec {
        settings,
        numbers: payloads
            .into_iter()
            .enumerate()
            .map(|(i, payload)| NumberSpec { name: format!("n{i}"), payload })
            .collect(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spec_file_round_trip(spec in spec_strategy()) {
        let text = spec.serialize();
        prop_assert_eq!(parse_spec(&text).unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sweeps_concatenate((a, b) in independent_pair(), split in 101u64..20_000) {
        let config = AnalysisConfig { t_max: 20_000, burn_in: Some(100), ..AnalysisConfig::default() };
        let ctx = TupleContext::new(vec![Member::from_cf("a", a), Member::from_cf("b", b)], &config).unwrap();
        let whole = sweep(&ctx).unwrap();
        let left = sweep_window(&ctx, 100, split).unwrap();
        let right = sweep_window(&ctx, split, 20_000).unwrap();
        let joined: Vec<_> = left.events.into_iter().chain(right.events).collect();
        prop_assert_eq!(&joined, &whole.events);
        prop_assert!(whole.k_hat >= 1 && whole.max_tau <= 2);
        for e in &whole.events {
            prop_assert_eq!(e.jumpers.len(), tau_at(&ctx, e.t));
            prop_assert_eq!(&e.after, &sigma_at(&ctx, e.t).unwrap());
        }
    }

    #[test]
    fn remark_pattern_never_fails((a, b) in independent_pair()) {
        for (x, y) in [(&a, &b), (&b, &a)] {
            for r in check_remark_pattern(x, y, 30, 1, 200).unwrap() {
                prop_assert_ne!(r.status, RemarkStatus::Fails, "{}", r.to_record());
            }
        }
    }
}
