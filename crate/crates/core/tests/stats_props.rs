use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use wordstat::exact::{ExactPmf, Precision};
use wordstat::numeric::rat;
use wordstat::stats::{
    blockwise_power, ks_pvalue, ks_statistic, normal_cdf, power_curve, sliding_power, EmpiricalCdf,
    PowerSpec,
};

/// `1/2 + phi(x) sum_k x^(2k+1) / (2k+1)!!`; all terms share the sign of x.
fn normal_cdf_series(x: f64) -> f64 {
    let phi = (-x * x / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut term = x;
    let mut sum: f64 = 0.0;
    let mut k = 1.0;
    while term != 0.0 && term.abs() > 1e-30 * sum.abs() {
        sum += term;
        k += 2.0;
        term *= x * x / k;
    }
    0.5 + phi * sum
}

fn law(masses: &[u64]) -> ExactPmf {
    let total: u64 = masses.iter().sum();
    ExactPmf::from_masses(
        1,
        masses
            .iter()
            .enumerate()
            .map(|(k, &w)| (vec![k as u64], rat(w as i64, total as i64))),
        Precision::Exact,
    )
}

#[test]
fn normal_cdf_against_series() {
    let mut x = -8.0;
    while x <= 8.0 {
        let err = (normal_cdf(x) - normal_cdf_series(x)).abs();
        assert!(err < 1e-12, "x = {x}: {err}");
        x += 1.0 / 64.0;
    }
}

#[test]
fn normal_cdf_symmetry() {
    for i in 0..400 {
        let x = f64::from(i) / 50.0;
        assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-15);
    }
}

#[test]
fn ks_pvalue_reference_points() {
    assert!((ks_pvalue(0.001376, 200_000) - 0.843306).abs() < 5e-4);
    assert!((ks_pvalue(0.001409, 200_000) - 0.822066).abs() < 5e-4);
    assert_eq!(ks_pvalue(0.0, 100), 1.0);
    assert_eq!(ks_pvalue(0.5, 100_000), 0.0);
}

proptest! {
    #[test]
    fn ks_statistic_is_the_grid_supremum(
        weights in proptest::collection::vec(1u64..20, 1..12),
        samples in proptest::collection::vec(0u64..15, 1..200),
    ) {
        let reference = law(&weights);
        let emp = EmpiricalCdf::from_samples(&samples).unwrap();
        let d = ks_statistic(&emp, &reference).unwrap();
        let mut sup = rat(0, 1);
        let mut cdf = rat(0, 1);
        for x in 0..=20u64 {
            cdf += reference.mass(&[x]);
            let gap: BigRational = (emp.at(x) - &cdf).abs();
            if gap > sup {
                sup = gap;
            }
        }
        prop_assert_eq!(d, sup);
    }

    #[test]
    fn ks_pvalue_decreases_with_distance(d1 in 0.0f64..0.05, d2 in 0.0f64..0.05, t in 100u64..1_000_000) {
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        let (p_lo, p_hi) = (ks_pvalue(lo, t), ks_pvalue(hi, t));
        prop_assert!((0.0..=1.0).contains(&p_lo));
        prop_assert!(p_hi <= p_lo + 1e-12);
    }

    #[test]
    fn power_grows_as_the_alternative_departs(theta_star in 0.05f64..0.5, n in 100u64..5000, m in 1u64..6, a in 0.05f64..1.0, b in 0.05f64..1.0) {
        let spec = PowerSpec::new(theta_star, n, m);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        // below a zero threshold the test can never reject and the normal
        // approximation is not monotone
        let (e0, v0) = spec.sliding_moments(theta_star);
        let (b0, w0) = spec.blockwise_moments(theta_star);
        prop_assume!(e0 - spec.sigma * v0.sqrt() > 0.0 && b0 - spec.sigma * w0.sqrt() > 0.0);
        let (near, far) = if a > b { (a * theta_star, b * theta_star) } else { (b * theta_star, a * theta_star) };
        prop_assert!(sliding_power(&spec, far).unwrap() + 1e-12 >= sliding_power(&spec, near).unwrap());
        prop_assert!(blockwise_power(&spec, far).unwrap() + 1e-12 >= blockwise_power(&spec, near).unwrap());
    }
}

#[test]
fn power_table() {
    let spec = PowerSpec::new(0.25, 500, 2).unwrap();
    let curve = power_curve(&spec, &[0.2, 0.18, 0.16]).unwrap();
    let expect = [
        (0.316007, 0.000295),
        (0.860057, 0.002939),
        (0.995681, 0.021481),
    ];
    for (p, (s, b)) in curve.points.iter().zip(expect) {
        assert!((p.power_sliding - s).abs() < 1e-5);
        assert!((p.power_blockwise - b).abs() < 1e-5);
    }
    let mut csv = Vec::new();
    curve.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(sliding_power(&spec, 0.3).is_err());
    assert!(PowerSpec::new(0.9, 100, 3).is_err());
}
