//! Small dense linear algebra kernels used by the resultant and Fekete
//! subsystems: complex Householder QR for log-scale determinant magnitudes,
//! complex LU with partial pivoting, Gauss-Jordan inversion, and a
//! fraction-free Bareiss determinant over exact scalar domains.

use num_complex::Complex64;

use crate::poly::{C64, ExactScalar};

/// Row-major square complex matrix.
#[derive(Clone, Debug)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for i in 0..self.n {
            self.set(i, j, col[i]);
        }
    }

    /// `A * v`.
    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &self.data[i * n..(i + 1) * n];
            for j in 0..n {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
        out
    }
}

/// log|det A| via Householder QR. Returns `NEG_INFINITY` for singular (or
/// numerically rank-deficient) input: a trailing column norm below
/// `1e-14` of the column's original norm is reported as rank deficiency.
/// The unitary factor has |det| = 1, so the magnitude is the product of the
/// |R| diagonal.
pub fn logabsdet_qr(a: &CMatrix) -> f64 {
    let n = a.n;
    if n == 0 {
        return 0.0;
    }
    let mut m = a.clone();
    let col_norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| m.at(i, j).norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut logdet = 0.0f64;
    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let mut alpha = 0.0f64;
        for i in k..n {
            alpha += m.at(i, k).norm_sqr();
        }
        let alpha = alpha.sqrt();
        if alpha <= col_norms[k] * 1e-14 || !alpha.is_finite() {
            return f64::NEG_INFINITY;
        }
        let akk = m.at(k, k);
        let phase = if akk.norm() > 0.0 {
            akk / akk.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        // v = x + phase * alpha * e_k
        let mut v: Vec<C64> = (k..n).map(|i| m.at(i, k)).collect();
        v[0] += phase * alpha;
        let vnorm_sq: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm_sq > 0.0 {
            // Apply H = I - 2 v v* / (v* v) to the trailing block.
            for j in k..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for (idx, i) in (k..n).enumerate() {
                    dot += v[idx].conj() * m.at(i, j);
                }
                let scale = dot * 2.0 / vnorm_sq;
                for (idx, i) in (k..n).enumerate() {
                    let val = m.at(i, j) - scale * v[idx];
                    m.set(i, j, val);
                }
            }
        }
        let r_kk = m.at(k, k).norm();
        if r_kk == 0.0 || !r_kk.is_finite() {
            return f64::NEG_INFINITY;
        }
        logdet += r_kk.ln();
    }
    logdet
}

/// Complex determinant via partial-pivot LU, kept in log-magnitude plus
/// unit-phase form so huge determinants stay representable. The conditioning
/// figure is the ratio of the largest to smallest pivot magnitude.
pub struct LuDet {
    /// Unit-modulus phase of the determinant (1 for a zero determinant).
    pub phase: C64,
    pub log_abs: f64,
    pub condition: f64,
}

pub fn det_lu(a: &CMatrix) -> LuDet {
    let n = a.n;
    let mut m = a.clone();
    let mut phase = Complex64::new(1.0, 0.0);
    let mut log_abs = 0.0f64;
    let mut max_piv = 0.0f64;
    let mut min_piv = f64::INFINITY;
    for k in 0..n {
        let mut best = k;
        let mut best_mag = m.at(k, k).norm();
        for i in k + 1..n {
            let mag = m.at(i, k).norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag == 0.0 || !best_mag.is_finite() {
            return LuDet {
                phase: Complex64::new(1.0, 0.0),
                log_abs: f64::NEG_INFINITY,
                condition: f64::INFINITY,
            };
        }
        if best != k {
            for j in 0..n {
                let t = m.at(k, j);
                m.set(k, j, m.at(best, j));
                m.set(best, j, t);
            }
            phase = -phase;
        }
        let piv = m.at(k, k);
        let piv_mag = piv.norm();
        max_piv = max_piv.max(piv_mag);
        min_piv = min_piv.min(piv_mag);
        log_abs += piv_mag.ln();
        phase *= piv / piv_mag;
        for i in k + 1..n {
            let f = m.at(i, k) / piv;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let val = m.at(i, j) - f * m.at(k, j);
                m.set(i, j, val);
            }
            m.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
    LuDet {
        phase,
        log_abs,
        condition: if min_piv > 0.0 { max_piv / min_piv } else { f64::INFINITY },
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
pub fn invert(a: &CMatrix) -> Option<CMatrix> {
    let n = a.n;
    let mut m = a.clone();
    let mut inv = CMatrix::zeros(n);
    for i in 0..n {
        inv.set(i, i, Complex64::new(1.0, 0.0));
    }
    for k in 0..n {
        let mut best = k;
        let mut best_mag = m.at(k, k).norm();
        for i in k + 1..n {
            let mag = m.at(i, k).norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag == 0.0 || !best_mag.is_finite() {
            return None;
        }
        if best != k {
            for j in 0..n {
                let t = m.at(k, j);
                m.set(k, j, m.at(best, j));
                m.set(best, j, t);
                let t = inv.at(k, j);
                inv.set(k, j, inv.at(best, j));
                inv.set(best, j, t);
            }
        }
        let piv = m.at(k, k);
        for j in 0..n {
            m.set(k, j, m.at(k, j) / piv);
            inv.set(k, j, inv.at(k, j) / piv);
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m.at(i, k);
            if f.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = m.at(i, j) - f * m.at(k, j);
                m.set(i, j, v);
                let v = inv.at(i, j) - f * inv.at(k, j);
                inv.set(i, j, v);
            }
        }
    }
    Some(inv)
}

/// Fraction-free (Bareiss) determinant over an exact scalar domain.
///
/// Works over any integral domain with exact division: the intermediate
/// divisions are guaranteed exact by the Bareiss identity. Rationals and
/// Gaussian rationals are fields, where the division is plain.
pub fn det_bareiss<S: ExactScalar>(matrix: &[Vec<S>]) -> S {
    let n = matrix.len();
    if n == 0 {
        return S::one();
    }
    let mut m: Vec<Vec<S>> = matrix.to_vec();
    let mut sign_flip = false;
    let mut prev = S::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Pivot search below row k.
            let mut found = None;
            for i in k + 1..n {
                if !m[i][k].is_zero() {
                    found = Some(i);
                    break;
                }
            }
            match found {
                None => return S::zero(),
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            m[i][k] = S::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(1))
    }

    #[test]
    fn bareiss_matches_known_determinants() {
        let m = vec![vec![rat(1), rat(2)], vec![rat(3), rat(4)]];
        assert_eq!(det_bareiss(&m), rat(-2));

        let m3 = vec![
            vec![rat(2), rat(0), rat(1)],
            vec![rat(1), rat(3), rat(2)],
            vec![rat(0), rat(1), rat(4)],
        ];
        // det = 2*(12-2) - 0 + 1*(1-0) = 21
        assert_eq!(det_bareiss(&m3), rat(21));
    }

    #[test]
    fn bareiss_pivots_through_zero_leading_entries() {
        let m = vec![
            vec![rat(0), rat(1), rat(0)],
            vec![rat(1), rat(0), rat(0)],
            vec![rat(0), rat(0), rat(1)],
        ];
        assert_eq!(det_bareiss(&m), rat(-1));
    }

    #[test]
    fn qr_and_lu_agree_on_random_matrix() {
        let n = 8;
        let mut a = CMatrix::zeros(n);
        let mut state = 0x12345678u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, Complex64::new(next(), next()));
            }
        }
        let qr = logabsdet_qr(&a);
        let lu = det_lu(&a);
        assert!((qr - lu.log_abs).abs() < 1e-9, "qr {} lu {}", qr, lu.log_abs);
        assert!((lu.phase.norm() - 1.0).abs() < 1e-12);

        let inv = invert(&a).unwrap();
        // A * A^{-1} column 0 should be e_0.
        let e0: Vec<Complex64> = (0..n).map(|i| inv.at(i, 0)).collect();
        let col = a.matvec(&e0);
        for (i, v) in col.iter().enumerate() {
            let target = if i == 0 { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(target, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn singular_matrix_reports_neg_infinity() {
        let mut a = CMatrix::zeros(3);
        for j in 0..3 {
            a.set(0, j, Complex64::new(1.0, 0.0));
            a.set(1, j, Complex64::new(2.0, 0.0));
            a.set(2, j, Complex64::new(j as f64, 0.0));
        }
        assert_eq!(logabsdet_qr(&a), f64::NEG_INFINITY);
    }
}
