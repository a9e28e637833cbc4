use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use arithdyn::elliptic::{formal_expansion, series_to_curve, WeierstrassCurve};
use arithdyn::field::chamfer;
use arithdyn::modular::{distance, CoefficientVector, MetricConfig};
use arithdyn::padic::{valuation_of_rational, PadicNumber};
use arithdyn::series::TruncatedSeries;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 101])
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-100_000i64..100_000, 1i64..1000)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

proptest! {
    #[test]
    fn padic_round_trip_is_congruent(p in prime(), x in nonzero_rational()) {
        let prec = 16;
        let px = PadicNumber::from_rational(p, prec, &x).unwrap();
        let back = px.to_rational();
        let v = px.valuation().unwrap();
        prop_assert_eq!(Some(v), valuation_of_rational(&x, p));
        // x and its truncation agree to p^(v + prec)
        let diff = &x - &back;
        if let Some(vd) = valuation_of_rational(&diff, p) {
            prop_assert!(vd >= v + prec as i64);
        }
    }

    #[test]
    fn ultrametric_inequality(p in prime(), x in nonzero_rational(), y in nonzero_rational(), z in nonzero_rational()) {
        let e = |r: &BigRational| PadicNumber::from_rational(p, 24, r).unwrap();
        let d = |a: &PadicNumber, b: &PadicNumber| a.sub(b).map(|c| c.abs()).unwrap_or(0.0);
        let (a, b, c) = (e(&x), e(&y), e(&z));
        prop_assert!(d(&a, &c) <= d(&a, &b).max(d(&b, &c)) * (1.0 + 1e-12));
    }

    #[test]
    fn multiplication_adds_valuations(p in prime(), x in nonzero_rational(), y in nonzero_rational()) {
        let e = |r: &BigRational| PadicNumber::from_rational(p, 12, r).unwrap();
        let prod = e(&x).mul(&e(&y)).unwrap();
        prop_assert_eq!(prod, e(&(&x * &y)));
    }

    #[test]
    fn series_literal_round_trip(coeffs in prop::collection::vec(-50i64..50, 0..10)) {
        let s = TruncatedSeries::from_i64(&coeffs);
        let parsed: TruncatedSeries = s.to_string().parse().unwrap();
        prop_assert_eq!(parsed, s);
    }

    #[test]
    fn formal_group_round_trip(a in prop::array::uniform5(-30i64..30), extra in 0usize..4) {
        let e = WeierstrassCurve::from_ints(a);
        prop_assume!(e.nonsingular_invariants().is_ok());
        let s = formal_expansion(&e, 6 + extra).unwrap();
        prop_assert_eq!(series_to_curve(&s).unwrap(), e);
    }

    #[test]
    fn distance_is_a_metric(
        f in prop::collection::vec(-20i64..20, 12),
        g in prop::collection::vec(-20i64..20, 12),
        h in prop::collection::vec(-20i64..20, 12),
    ) {
        let cfg = MetricConfig::new(12);
        let v = |c: &[i64]| CoefficientVector::from_ints(11, c);
        let (f, g, h) = (v(&f), v(&g), v(&h));
        let d = |a: &CoefficientVector, b: &CoefficientVector| distance(a, b, &cfg).unwrap();
        prop_assert_eq!(d(&f, &f), 0.0);
        prop_assert_eq!(d(&f, &g), d(&g, &f));
        prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h) + 1e-12);
    }

    #[test]
    fn chamfer_is_symmetric_and_bounded_by_shift(
        pts in prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6), 1..40),
        dx in -0.05f64..0.05,
    ) {
        let moved: Vec<_> = pts.iter().map(|&(x, y)| (x + dx, y)).collect();
        let s = chamfer(&pts, &moved).unwrap();
        prop_assert_eq!(s, chamfer(&moved, &pts).unwrap());
        prop_assert!(s <= dx.abs() + 1e-12);
        prop_assert_eq!(chamfer(&pts, &pts).unwrap(), 0.0);
    }
}

#[test]
fn huge_coefficients_survive_literals() {
    let big: BigInt = "123456789012345678901234567890".parse().unwrap();
    let s = TruncatedSeries::new(vec![big.clone(), -big]);
    assert_eq!(s.to_string().parse::<TruncatedSeries>().unwrap(), s);
}
