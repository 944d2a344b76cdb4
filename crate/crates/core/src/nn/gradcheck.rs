//! Central finite-difference gradient checking.

/// Denominator floor for the relative error, so coordinates whose true
/// gradient is ~0 are judged on absolute error instead.
pub const REL_ERR_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub max_rel_error: f64,
    /// Coordinate with the largest relative error.
    pub worst_index: usize,
    pub checked: usize,
    pub tol: f64,
    pub passed: bool,
}

/// `|a - n| / max(|a|, |n|, REL_ERR_FLOOR)`.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(REL_ERR_FLOOR)
}

/// Compares `analytic` against `(f(x + h·e_i) - f(x - h·e_i)) / 2h` for every
/// coordinate in `coords` (all coordinates when `None`).
pub fn grad_check(
    mut f: impl FnMut(&[f64]) -> f64,
    x: &[f64],
    analytic: &[f64],
    h: f64,
    tol: f64,
    coords: Option<&[usize]>,
) -> GradCheckReport {
    assert_eq!(x.len(), analytic.len(), "gradient length");
    let all: Vec<usize>;
    let coords = match coords {
        Some(c) => c,
        None => {
            all = (0..x.len()).collect();
            &all
        }
    };
    let mut point = x.to_vec();
    let mut worst = (0.0, 0);
    for &i in coords {
        let orig = point[i];
        point[i] = orig + h;
        let plus = f(&point);
        point[i] = orig - h;
        let minus = f(&point);
        point[i] = orig;
        let numeric = (plus - minus) / (2.0 * h);
        let err = relative_error(analytic[i], numeric);
        if err > worst.0 || err.is_nan() {
            worst = (err, i);
        }
    }
    GradCheckReport {
        max_rel_error: worst.0,
        worst_index: worst.1,
        checked: coords.len(),
        tol,
        passed: worst.0 < tol,
    }
}

/// Per-coordinate numeric gradient, for callers that want the raw values.
pub fn numeric_gradient(mut f: impl FnMut(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut point = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = point[i];
            point[i] = orig + h;
            let plus = f(&point);
            point[i] = orig - h;
            let minus = f(&point);
            point[i] = orig;
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(v: &[f64]) -> f64 {
        v.iter().enumerate().map(|(i, x)| (i as f64 + 1.0) * x * x + 0.5 * x).sum()
    }

    fn quadratic_grad(v: &[f64]) -> Vec<f64> {
        v.iter().enumerate().map(|(i, x)| 2.0 * (i as f64 + 1.0) * x + 0.5).collect()
    }

    #[test]
    fn quadratic_is_exact() {
        let x = [0.3, -1.2, 2.0, 0.0];
        let report = grad_check(quadratic, &x, &quadratic_grad(&x), 1e-5, 1e-9, None);
        assert!(report.passed, "{report:?}");
        assert!(report.max_rel_error < 1e-9);
        assert_eq!(report.checked, 4);
    }

    #[test]
    fn wrong_gradient_is_caught() {
        let x = [0.3, -1.2];
        let mut g = quadratic_grad(&x);
        g[1] += 0.1;
        let report = grad_check(quadratic, &x, &g, 1e-5, 1e-4, None);
        assert!(!report.passed);
        assert_eq!(report.worst_index, 1);
    }

    #[test]
    fn report_is_deterministic() {
        let x = [0.1, 0.2, 0.3];
        let g = quadratic_grad(&x);
        let a = grad_check(quadratic, &x, &g, 1e-5, 1e-6, None);
        let b = grad_check(quadratic, &x, &g, 1e-5, 1e-6, None);
        assert_eq!(a, b);
    }

    #[test]
    fn subset_agrees_with_full_check() {
        let f = |v: &[f64]| v.iter().map(|x| x.sin() * x.exp()).sum::<f64>();
        let x: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).cos()).collect();
        let g: Vec<f64> = x.iter().map(|x| x.exp() * (x.sin() + x.cos())).collect();
        let num = numeric_gradient(f, &x, 1e-5);
        let subset: Vec<usize> = (0..30).step_by(3).collect();
        let sub = grad_check(f, &x, &g, 1e-5, 1e-6, Some(&subset));
        let expected = subset.iter().map(|&i| relative_error(g[i], num[i])).fold(0.0, f64::max);
        assert_eq!(sub.max_rel_error, expected);
    }
}
