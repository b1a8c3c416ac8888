//! Piecewise rate functions bounding generalized harmonic sums:
//! `sum_{i<=t} i^-x <= psi_x(t)`.

/// `psi_x(t)`: `t^(1-x)/(1-x)` if x < 1, `1 + log t` if x = 1, `x/(x-1)` if x > 1.
pub fn psi(x: f64, t: f64) -> f64 {
    debug_assert!(t > 0.0, "psi requires t > 0");
    if x < 1.0 {
        t.powf(1.0 - x) / (1.0 - x)
    } else if x == 1.0 {
        1.0 + t.ln()
    } else {
        x / (x - 1.0)
    }
}

/// `psi_x^y(t) = psi_x(t^(1/(1+y)))`.
pub fn psi_y(x: f64, y: f64, t: f64) -> f64 {
    debug_assert!(y >= 0.0);
    psi(x, t.powf(1.0 / (1.0 + y)))
}

/// Exact generalized harmonic partial sum `sum_{i<=floor(t)} i^-x` for small
/// horizons, falling back to the `psi` integral bound beyond 10^4 terms. Both
/// dominate the true partial sum at any integer horizon <= t.
pub fn harmonic_or_psi(x: f64, t: f64) -> f64 {
    if t < 1.0 {
        return 0.0;
    }
    if t <= 1e4 {
        let m = t.floor() as u64;
        (1..=m).map(|i| (i as f64).powf(-x)).sum()
    } else {
        psi(x, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn piecewise_values() {
        assert_eq!(psi(2.0, 123.0), 2.0); // x/(x-1) for any t
        assert!((psi(1.0, std::f64::consts::E) - 2.0).abs() < 1e-12);
        assert!((psi(0.0, 10.0) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_sum_is_dominated_by_psi() {
        for x in [0.0, 0.3, 0.7, 1.0, 1.5, 2.5] {
            for t in [1.0, 7.0, 100.0, 9999.0] {
                let exact: f64 = (1..=t as u64).map(|i| (i as f64).powf(-x)).sum();
                assert!(
                    exact <= psi(x, t) + 1e-9,
                    "x={x} t={t}: harmonic {exact} > psi {}",
                    psi(x, t)
                );
                assert!(exact <= harmonic_or_psi(x, t) + 1e-9);
            }
        }
    }

    proptest! {
        #[test]
        fn psi_y_consistency(x in -1.0f64..3.0, y in 0.0f64..2.0, t in 0.5f64..1e6) {
            let lhs = psi_y(x, y, t);
            let rhs = psi(x, t.powf(1.0/(1.0+y)));
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}
