use num_traits::{One, Signed, Zero};
use ude_core::exact::{binomial, rational, rational_from_int, Rational};
use ude_core::oracle::{self, Status};

fn small_ensembles() -> Vec<(u32, u32, Rational)> {
    let mut out = Vec::new();
    for m in 1u32..=3 {
        for n in 1u32..=4 {
            out.push((m, n, Rational::new(n.into(), 4.into())));
            out.push((m, n, Rational::new(n.into(), 2.into())));
            out.push((m, n, Rational::new(n.into(), 3.into())));
        }
    }
    out
}

#[test]
fn probabilities_and_first_moments() {
    for (m, n, k) in small_ensembles() {
        let mom = oracle::enumerate_ensemble(m, n, &k).unwrap();
        assert!(mom.total_probability.is_one(), "({m}, {n}, {k})");
        assert!(mom.e_aw[0].is_one());
        for w in 0..=n {
            assert!(mom.e_aw[w as usize] <= rational_from_int(binomial(n.into(), w.into())));
        }
    }
}

#[test]
fn variance_polynomial_is_nonnegative() {
    for (m, n, k) in small_ensembles() {
        let mom = oracle::enumerate_ensemble(m, n, &k).unwrap();
        for i in 1..=100i64 {
            let eps = rational(i, 202);
            assert!(!mom.var_pu.eval(&eps).is_negative(), "({m}, {n}, {k}) at {eps}");
        }
    }
}

#[test]
fn covariance_is_symmetric_psd() {
    for (m, n, k) in small_ensembles() {
        let mom = oracle::enumerate_ensemble(m, n, &k).unwrap();
        for i in 0..=n as usize {
            for j in 0..=n as usize {
                assert_eq!(mom.cov[i][j], mom.cov[j][i]);
            }
        }
        assert!(oracle::principal_minors_nonnegative(&mom.cov), "({m}, {n}, {k})");
    }
}

#[test]
fn variance_equals_second_minus_squared_first() {
    for (m, n, k) in small_ensembles() {
        let mom = oracle::enumerate_ensemble(m, n, &k).unwrap();
        assert_eq!(mom.var_pu, &mom.e_pu2 - &(&mom.e_pu * &mom.e_pu));
        if let Some(d) = mom.var_pu.degree() {
            assert!(d <= 2 * n as usize);
        }
    }
}

#[test]
fn verification_examples() {
    let r = oracle::verify_closed_forms(2, 2, &rational(1, 1)).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.flagged().next().is_none());

    let r = oracle::verify_closed_forms(3, 4, &rational(2, 1)).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.random_branch);
    let mom = oracle::enumerate_ensemble(3, 4, &rational(2, 1)).unwrap();
    for i in 0..=4 {
        for j in 0..=4 {
            if i != j {
                assert!(mom.cov[i][j].is_zero());
            }
        }
    }

    let json = serde_json::to_value(oracle::verify_closed_forms(1, 2, &rational(1, 2)).unwrap()).unwrap();
    assert_eq!(json["status"], "PASS");
    let flagged: Vec<&serde_json::Value> =
        json["entries"].as_array().unwrap().iter().filter(|e| e["status"] == "FLAGGED").collect();
    assert_eq!(flagged.len(), 2);
    assert_eq!(flagged[0]["paper_value"], "2/3");
    assert_eq!(flagged[0]["oracle_value"], "3/2");
}

#[test]
fn decimal_and_fraction_k_agree() {
    let a = oracle::enumerate_ensemble(2, 3, &ude_core::exact::parse_rational("0.75").unwrap()).unwrap();
    let b = oracle::enumerate_ensemble(2, 3, &rational(3, 4)).unwrap();
    assert_eq!(a, b);
}
