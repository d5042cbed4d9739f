//! Fourth-order finite-difference stencils used by the ladder operators.
//!
//! Interior nodes use the centered five-point formulas; the two outermost
//! nodes on each side use one-sided formulas of the same order.

use crate::error::{Result, SipsError};

pub const MIN_POINTS: usize = 7;

pub fn check_points(n: usize) -> Result<()> {
    if n < MIN_POINTS {
        Err(SipsError::GridTooCoarse { n_points: n, required: MIN_POINTS })
    } else {
        Ok(())
    }
}

/// First derivative of uniformly sampled `f`.
pub fn first_derivative(f: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = f.len();
    check_points(n)?;
    let c = 1.0 / (12.0 * h);
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    let m = n - 1;
    d[m] = -c * (-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]);
    d[m - 1] = -c * (-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]);
    Ok(d)
}

/// Second derivative of uniformly sampled `f`.
pub fn second_derivative(f: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = f.len();
    check_points(n)?;
    let c = 1.0 / (12.0 * h * h);
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
    }
    let fwd0 = |g: &dyn Fn(usize) -> f64| {
        c * (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5))
    };
    let fwd1 = |g: &dyn Fn(usize) -> f64| {
        c * (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5))
    };
    let m = n - 1;
    d[0] = fwd0(&|k| f[k]);
    d[1] = fwd1(&|k| f[k]);
    d[m] = fwd0(&|k| f[m - k]);
    d[m - 1] = fwd1(&|k| f[m - k]);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, h: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(i as f64 * h)).collect()
    }

    #[test]
    fn exact_on_quartics() {
        let h = 0.1;
        let f = sample(12, h, |x| x.powi(4) - 2.0 * x.powi(3) + x);
        let d1 = first_derivative(&f, h).unwrap();
        let d2 = second_derivative(&f, h).unwrap();
        for i in 0..12 {
            let x = i as f64 * h;
            assert!((d1[i] - (4.0 * x.powi(3) - 6.0 * x * x + 1.0)).abs() < 1e-10, "d1 at {i}");
            assert!((d2[i] - (12.0 * x * x - 12.0 * x)).abs() < 1e-8, "d2 at {i}");
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let f = sample(n, h, f64::sin);
            let d = first_derivative(&f, h).unwrap();
            d.iter()
                .enumerate()
                .map(|(i, v)| (v - (i as f64 * h).cos()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(21) / err(41);
        assert!(ratio > 12.0 && ratio < 40.0, "ratio {ratio}");
    }

    #[test]
    fn too_coarse() {
        assert!(matches!(
            first_derivative(&[0.0; 6], 0.1),
            Err(SipsError::GridTooCoarse { n_points: 6, .. })
        ));
    }
}
