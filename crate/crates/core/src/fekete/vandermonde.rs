use crate::error::{Error, Result};
use crate::linalg::{logabsdet_qr, CMatrix};
use crate::poly::{count_monomials, monomials_up_to_degree, C64, Monomial};

/// log of the per-monomial sup-norm over the bounding polydisc; used as a
/// row scaling with an exact log-correction so that raw monomial matrices
/// stay well-conditioned at larger n.
fn scale_logs(monomials: &[Monomial], polyradii: &[f64]) -> Vec<f64> {
    monomials
        .iter()
        .map(|m| {
            m.exponents()
                .iter()
                .zip(polyradii)
                .map(|(&e, &r)| e as f64 * r.max(1e-300).ln())
                .sum()
        })
        .collect()
}

/// The scaled monomial-evaluation matrix: entry `(i, j)` is
/// `e_i(points[j]) / exp(scale_logs[i])`, row per monomial, column per
/// point. Returns the matrix and the total log-correction to add back.
pub(crate) fn scaled_monomial_matrix(
    points: &[Vec<C64>],
    monomials: &[Monomial],
    polyradii: &[f64],
) -> (CMatrix, f64) {
    let m = monomials.len();
    debug_assert_eq!(points.len(), m);
    let logs = scale_logs(monomials, polyradii);
    let correction: f64 = logs.iter().sum();
    let mut a = CMatrix::zeros(m);
    for (j, z) in points.iter().enumerate() {
        for (i, mon) in monomials.iter().enumerate() {
            a.set(i, j, scaled_monomial_value(mon, z, logs[i]));
        }
    }
    (a, correction)
}

pub(crate) fn scaled_monomial_value(mon: &Monomial, z: &[C64], log_scale: f64) -> C64 {
    let mut v = C64::new((-log_scale).exp(), 0.0);
    for (k, &e) in mon.exponents().iter().enumerate() {
        for _ in 0..e {
            v *= z[k];
        }
    }
    v
}

/// log |det(e_i(z_j))| for exactly `M(n)` points in dimension `dim`, with
/// internal row scaling by the polydisc sup-norms (the scaling cancels
/// exactly through the log-correction).
///
/// Returns `NEG_INFINITY` for singular configurations. Wrong point count is
/// an error.
pub fn vandermonde_logabsdet_scaled(
    points: &[Vec<C64>],
    dim: usize,
    n: u32,
    polyradii: &[f64],
) -> Result<f64> {
    let m = count_monomials(dim, n)? as usize;
    if points.len() != m {
        return Err(Error::Invalid(format!(
            "expected M(n) = {} points, got {}",
            m,
            points.len()
        )));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
    }
    let monomials = monomials_up_to_degree(dim, n);
    let (a, correction) = scaled_monomial_matrix(points, &monomials, polyradii);
    let logdet = logabsdet_qr(&a);
    if logdet == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(logdet + correction)
}

/// log |det(e_i(z_j))| on the raw (unscaled) monomial matrix.
pub fn vandermonde_logabsdet(points: &[Vec<C64>], dim: usize, n: u32) -> Result<f64> {
    vandermonde_logabsdet_scaled(points, dim, n, &vec![1.0; dim])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn pt1(x: f64, y: f64) -> Vec<C64> {
        vec![Complex64::new(x, y)]
    }

    #[test]
    fn one_dim_examples() {
        // {0, 1}: det [[1,1],[0,1]] = 1 -> log 0
        let v = vandermonde_logabsdet(&[pt1(0.0, 0.0), pt1(1.0, 0.0)], 1, 1).unwrap();
        assert!(v.abs() < 1e-12);
        // {0, c}: det = c
        let c = 0.37;
        let v = vandermonde_logabsdet(&[pt1(0.0, 0.0), pt1(c, 0.0)], 1, 1).unwrap();
        assert!((v - c.ln()).abs() < 1e-12);
    }

    #[test]
    fn two_dim_unit_triangle() {
        // {(0,0),(1,0),(0,1)} in basis (1, z1, z2): determinant 1.
        let pts = vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        let v = vandermonde_logabsdet(&pts, 2, 1).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn wrong_point_count_is_error() {
        assert!(vandermonde_logabsdet(&[pt1(0.0, 0.0)], 1, 1).is_err());
    }

    #[test]
    fn duplicate_points_are_singular() {
        let v = vandermonde_logabsdet(&[pt1(0.5, 0.1), pt1(0.5, 0.1)], 1, 1).unwrap();
        assert_eq!(v, f64::NEG_INFINITY);
    }

    #[test]
    fn scaling_correction_cancels() {
        let pts = vec![pt1(0.3, 0.2), pt1(-0.8, 0.1), pt1(0.1, -0.6)];
        let raw = vandermonde_logabsdet(&pts, 1, 2).unwrap();
        let scaled = vandermonde_logabsdet_scaled(&pts, 1, 2, &[2.5]).unwrap();
        assert!((raw - scaled).abs() < 1e-10);
    }

    #[test]
    fn scaling_points_scales_det_by_c_pow_d() {
        // |det(c z)| = |c|^{D(n)} |det(z)|
        let pts = vec![pt1(0.3, 0.2), pt1(-0.8, 0.1), pt1(0.1, -0.6)];
        let c = Complex64::new(0.4, 1.1);
        let scaled_pts: Vec<Vec<C64>> = pts.iter().map(|p| vec![p[0] * c]).collect();
        let base = vandermonde_logabsdet(&pts, 1, 2).unwrap();
        let scaled = vandermonde_logabsdet(&scaled_pts, 1, 2).unwrap();
        let d = crate::poly::vandermonde_degree(1, 2).unwrap() as f64;
        assert!((scaled - (base + d * c.norm().ln())).abs() < 1e-10);
    }
}
