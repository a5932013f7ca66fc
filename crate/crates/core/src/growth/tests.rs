use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::group::fixtures::*;
use crate::path::Gamma;
use crate::shuffle::AlphabetYP;

fn census(text: &str, max: u64) -> GrowthTable {
    let yp = AlphabetYP::build(&spec(text));
    let c = PatternCriterion::new(&yp);
    geodesic_counts(Census::Pattern(&c), max).unwrap()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn integer_census() {
    let t = census(Z, 12);
    for r in t.rows() {
        assert_eq!(r.cumulative, 2 * r.n + 1);
    }
}

#[test]
fn dihedral_spheres() {
    let t = census(DINF, 12);
    assert!(t.rows()[1..].iter().all(|r| r.sphere == 2));
}

#[test]
fn plane_spheres() {
    let t = census(Z2, 10);
    for r in &t.rows()[1..] {
        assert_eq!(r.sphere, (1 << (r.n + 2)) - 4);
        assert_eq!(r.cumulative, (1 << (r.n + 3)) - 4 * r.n - 7);
    }
}

#[test]
fn census_matches_naive_enumeration() {
    for (text, max) in [(Z, 6), (Z2, 6), (DINF, 6), (P4, 6)] {
        let s = spec(text);
        let ball = BallTable::build(&s, max);
        let mut spheres = vec![0u64; max as usize + 1];
        for w in words_up_to_weight(&s, max) {
            if ball.is_geodesic(&s, &w).unwrap() {
                spheres[s.word_weight(&w) as usize] += 1;
            }
        }
        assert_eq!(census(text, max).spheres(), spheres);
        assert_eq!(geodesic_counts(Census::Oracle(&s, &ball), max).unwrap().spheres(), spheres);
    }
}

#[test]
fn census_matches_path_count() {
    for (text, max) in [(Z, 6), (Z2, 6), (DINF, 6), (P4, 5)] {
        let yp = AlphabetYP::build(&spec(text));
        let c = PatternCriterion::new(&yp);
        let g = Gamma::new(&yp);
        assert_eq!(g.geodesic_path_counts(&c, max).unwrap(), census(text, max).spheres());
    }
}

#[test]
fn small_ball_is_an_error() {
    let s = spec(Z);
    let ball = BallTable::build(&s, 3);
    assert!(matches!(geodesic_counts(Census::Oracle(&s, &ball), 4), Err(Error::RadiusExceeded { .. })));
}

#[test]
fn csv_layout() {
    let csv = census(Z2, 6).to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,sphere,cumulative");
    assert_eq!(lines[7], "6,252,481");
    assert!(!csv.contains('\r'));
}

#[test]
fn rate_examples() {
    let e = growth_rate_estimate(&census(Z2, 10)).unwrap();
    assert_eq!(e.ratio, BigRational::new(BigInt::from(4092), BigInt::from(2044)));
    assert!((e.ratio_f64() - 2.0).abs() < 0.01);

    let t = census(Z, 6);
    for n in 3..=6 {
        let rows = GrowthTable::from_spheres(&t.spheres()[..=n]);
        assert_eq!(growth_rate_estimate(&rows).unwrap().ratio, q(1));
    }
    assert!(growth_rate_estimate(&GrowthTable::from_spheres(&[1])).is_err());
}

#[test]
fn classification() {
    assert_eq!(classify_growth(&census(Z, 12), DEFAULT_EPSILON), Growth::Polynomial { sphere_degree: 0 });
    assert_eq!(classify_growth(&census(DINF, 12), DEFAULT_EPSILON), Growth::Polynomial { sphere_degree: 0 });
    assert!(matches!(classify_growth(&census(Z2, 12), DEFAULT_EPSILON), Growth::Exponential { .. }));
    // The trivial group: only the empty word is geodesic.
    let trivial = GrowthTable::from_spheres(&[1, 0, 0, 0, 0, 0, 0, 0]);
    assert_eq!(classify_growth(&trivial, DEFAULT_EPSILON), Growth::Polynomial { sphere_degree: 0 });
    assert_eq!(classify_growth(&census(Z, 3), DEFAULT_EPSILON), Growth::Inconclusive);
    // Spheres 4n: degree one.
    let linear: Vec<u64> = std::iter::once(1).chain((1..10).map(|n| 4 * n)).collect();
    assert_eq!(classify_growth(&GrowthTable::from_spheres(&linear), DEFAULT_EPSILON), Growth::Polynomial { sphere_degree: 1 });
}

#[test]
fn integer_fit() {
    let t = census(Z, 12);
    let fit = fit_rational_series(&t, 8).unwrap();
    assert_eq!(fit.order, 2);
    assert_eq!(fit.denominator, vec![q(1), q(-2), q(1)]);
    assert_eq!(fit.numerator, vec![q(1), q(1)]);
    assert_eq!(fit.horizon, 12);
    let dinf = fit_rational_series(&census(DINF, 12), 8).unwrap();
    assert_eq!(dinf.denominator, fit.denominator);
}

#[test]
fn plane_fit() {
    let t = census(Z2, 10);
    let fit = fit_rational_series(&t, 8).unwrap();
    assert_eq!(fit.order, 3);
    assert_eq!(fit.characteristic(), vec![q(1), q(-4), q(5), q(-2)]);
    for root in [2, 1] {
        assert_eq!(fit.characteristic_at(&q(root)), q(0));
    }
    let expected: Vec<BigRational> = t.cumulative().iter().map(|&c| q(c as i64)).collect();
    assert_eq!(fit.terms(t.len()), expected);
}

#[test]
fn fit_needs_enough_rows() {
    let t = census(Z2, 4);
    assert!(fit_rational_series(&t, 8).is_none());
    let exp: Vec<u64> = (0..12).map(|n| 1 << n).collect();
    assert!(fit_rational_series(&GrowthTable::from_spheres(&exp), 0).is_none());
}
