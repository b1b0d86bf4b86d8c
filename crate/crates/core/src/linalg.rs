//! Small 2×2 helpers on top of `nalgebra`.

use nalgebra::{Matrix2, Vector2};

pub type Mat2 = Matrix2<f64>;
pub type Vec2 = Vector2<f64>;

/// Proper rotation `[[cos θ, −sin θ], [sin θ, cos θ]]`.
pub fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// Orthogonal matrix whose columns are the RWA drift eigenvectors
/// `(1, −1)/√2` and `(1, 1)/√2`.
///
/// `Rᵀ V R` maps a covariance in the `(X̃, P̃)` basis to the `±π/4`
/// quadrature basis `((X̃ − P̃)/√2, (X̃ + P̃)/√2)`.
pub fn eigen_rotation() -> Mat2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat2::new(h, h, -h, h)
}

/// Congruence transform `M V Mᵀ`.
pub fn congruence(m: &Mat2, v: &Mat2) -> Mat2 {
    m * v * m.transpose()
}

pub fn symmetrize(v: &Mat2) -> Mat2 {
    (v + v.transpose()) * 0.5
}

/// Sylvester criterion for a symmetric 2×2 matrix.
pub fn is_positive_definite(v: &Mat2) -> bool {
    v[(0, 0)] > 0.0 && v.determinant() > 0.0
}

/// Symmetric 2×2 positive semidefiniteness, with a small relative slack for
/// round-off in the determinant.
pub fn is_positive_semidefinite(v: &Mat2) -> bool {
    let (a, b, d) = (v[(0, 0)], 0.5 * (v[(0, 1)] + v[(1, 0)]), v[(1, 1)]);
    if !(a.is_finite() && b.is_finite() && d.is_finite()) {
        return false;
    }
    let scale = a.abs().max(d.abs()).max(b.abs());
    let slack = 1e-14 * scale * scale;
    a >= 0.0 && d >= 0.0 && a * d - b * b >= -slack
}

/// Lower-triangular `G` with `G Gᵀ = V` for a symmetric positive
/// semidefinite `V`. Zero pivots are tolerated.
pub fn psd_factor(v: &Mat2) -> Option<Mat2> {
    if !is_positive_semidefinite(v) {
        return None;
    }
    let (a, b, d) = (v[(0, 0)], 0.5 * (v[(0, 1)] + v[(1, 0)]), v[(1, 1)]);
    if a > 0.0 {
        let l11 = a.sqrt();
        let l21 = b / l11;
        let l22 = (d - l21 * l21).max(0.0).sqrt();
        Some(Mat2::new(l11, 0.0, l21, l22))
    } else {
        // a == 0 forces b == 0 for a PSD matrix.
        Some(Mat2::new(0.0, 0.0, 0.0, d.max(0.0).sqrt()))
    }
}

/// Largest eigenvalue modulus of a real 2×2 matrix.
pub fn spectral_radius(m: &Mat2) -> f64 {
    let tr = m.trace();
    let det = m.determinant();
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        (tr / 2.0 + r).abs().max((tr / 2.0 - r).abs())
    } else {
        // complex pair, |λ|² = det
        det.abs().sqrt()
    }
}

/// Matrix exponential `exp(M)`.
pub fn expm(m: &Mat2) -> Mat2 {
    m.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rotation_is_orthogonal() {
        for k in 0..50 {
            let r = rotation(0.37 * k as f64);
            assert_relative_eq!(r * r.transpose(), Mat2::identity(), epsilon = 1e-14);
            assert_relative_eq!(r.determinant(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigen_rotation_diagonalizes_rwa_drift() {
        let a = Mat2::new(-0.5, 0.3, 0.3, -0.5);
        let r = eigen_rotation();
        let d = r.transpose() * a * r;
        assert_relative_eq!(d[(0, 1)], 0.0, epsilon = 1e-15);
        assert_relative_eq!(d[(0, 0)], -0.8, epsilon = 1e-15);
        assert_relative_eq!(d[(1, 1)], -0.2, epsilon = 1e-15);
    }

    #[test]
    fn psd_factor_handles_singular_input() {
        let zero = Mat2::zeros();
        assert_eq!(psd_factor(&zero).unwrap(), Mat2::zeros());
        let v = Mat2::new(0.0, 0.0, 0.0, 2.0);
        let g = psd_factor(&v).unwrap();
        assert_relative_eq!(g * g.transpose(), v, epsilon = 1e-15);
        let v = Mat2::new(2.0, 0.4, 0.4, 0.08);
        let g = psd_factor(&v).unwrap();
        assert_relative_eq!(g * g.transpose(), v, epsilon = 1e-15);
        assert!(psd_factor(&Mat2::new(1.0, 2.0, 2.0, 1.0)).is_none());
    }

    #[test]
    fn expm_of_symmetric_rwa_block() {
        // exp([[a, c], [c, a]] t) = e^{at} [[cosh ct, sinh ct], [sinh ct, cosh ct]]
        let (a, c, t) = (-0.5, 0.44, 1.7);
        let e = expm(&(Mat2::new(a, c, c, a) * t));
        let s = (a * t).exp();
        let expected = Mat2::new(s * (c * t).cosh(), s * (c * t).sinh(), s * (c * t).sinh(), s * (c * t).cosh());
        assert_relative_eq!(e, expected, epsilon = 1e-13);
    }

    #[test]
    fn spectral_radius_of_rotation_generator() {
        let m = Mat2::new(-0.5, 200.0, -200.0, -0.5);
        assert_relative_eq!(spectral_radius(&m), (200.0f64.powi(2) + 0.25).sqrt(), epsilon = 1e-10);
    }
}
