//! Two-tailed Nemenyi critical values: the studentized range quantile with
//! infinite degrees of freedom, divided by sqrt(2).

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alpha {
    P05,
    P10,
}

impl Alpha {
    pub fn value(self) -> f64 {
        match self {
            Alpha::P05 => 0.05,
            Alpha::P10 => 0.10,
        }
    }

    pub fn from_value(alpha: f64) -> Option<Alpha> {
        if (alpha - 0.05).abs() < 1e-12 {
            Some(Alpha::P05)
        } else if (alpha - 0.10).abs() < 1e-12 {
            Some(Alpha::P10)
        } else {
            None
        }
    }
}

/// Indexed by `K - 2` for K in 2..=20.
pub const Q_ALPHA_05: [f64; 19] = [
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458,
    3.489, 3.517, 3.544,
];

pub const Q_ALPHA_10: [f64; 19] = [
    1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978, 3.030, 3.077, 3.120, 3.159, 3.196, 3.230,
    3.261, 3.291, 3.319,
];

pub fn q_value(k: usize, alpha: Alpha) -> Option<f64> {
    let table = match alpha {
        Alpha::P05 => &Q_ALPHA_05,
        Alpha::P10 => &Q_ALPHA_10,
    };
    k.checked_sub(2).and_then(|i| table.get(i)).copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erf;

    fn phi(z: f64) -> f64 {
        (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
    }

    fn cdf(z: f64) -> f64 {
        0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
    }

    /// P(range of k standard normals <= r), Simpson's rule on [-9, 9].
    fn range_cdf(r: f64, k: usize) -> f64 {
        let (a, b, n) = (-9.0, 9.0, 4000);
        let h = (b - a) / n as f64;
        let f = |z: f64| phi(z) * (cdf(z + r) - cdf(z)).powi(k as i32 - 1);
        let mut sum = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(a + i as f64 * h);
        }
        k as f64 * sum * h / 3.0
    }

    fn q_oracle(k: usize, alpha: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if range_cdf(mid, k) < 1.0 - alpha {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi) / std::f64::consts::SQRT_2
    }

    #[test]
    fn tables_match_quadrature() {
        for k in 2..=20 {
            for alpha in [Alpha::P05, Alpha::P10] {
                let q = q_value(k, alpha).unwrap();
                let oracle = q_oracle(k, alpha.value());
                assert!((q - oracle).abs() < 1.5e-3, "K={k} alpha={alpha:?}: table {q}, oracle {oracle}");
            }
        }
    }

    #[test]
    fn published_anchors() {
        assert_eq!(q_value(2, Alpha::P05), Some(1.960));
        assert_eq!(q_value(10, Alpha::P05), Some(3.164));
        assert_eq!(q_value(2, Alpha::P10), Some(1.645));
        assert_eq!(q_value(10, Alpha::P10), Some(2.920));
        assert_eq!(q_value(1, Alpha::P05), None);
        assert_eq!(q_value(21, Alpha::P10), None);
    }
}
