//! Gauss-Legendre nodes and weights, mapped to the unit interval.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[0, 1]`.
/// Weights are positive and sum to one up to rounding.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((x + 1.0) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Value and derivative of the Legendre polynomial `P_n` at `x` by the
/// three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for n in [1, 2, 5, 16, 64, 257] {
            let rule = gauss_legendre_unit(n);
            let sum: f64 = rule.iter().map(|&(_, w)| w).sum();
            assert!((sum - 1.0).abs() < 1e-12, "n = {n}: weight sum {sum}");
            assert!(rule
                .iter()
                .all(|&(x, w)| w > 0.0 && (0.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // n points are exact through degree 2n - 1.
        let rule = gauss_legendre_unit(4);
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(7)).sum();
        assert!((integral - 1.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn resolves_a_full_period() {
        use std::f64::consts::TAU;
        let rule = gauss_legendre_unit(24);
        let re: f64 = rule.iter().map(|&(x, w)| w * (TAU * x).cos()).sum();
        let im: f64 = rule.iter().map(|&(x, w)| w * (TAU * x).sin()).sum();
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
    }
}
