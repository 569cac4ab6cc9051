//! Small dense complex linear-algebra helpers.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// `e^{i theta}`
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let tau = 2.0 * core::f64::consts::PI;
    let r = theta - tau * libm::floor(theta / tau);
    if r >= tau {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(2.0 * core::f64::consts::PI - d)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
/// Column `k` of the returned matrix is the eigenvector for eigenvalue `k`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Eigenvalues of a normal matrix (`A A^H = A^H A`).
///
/// Diagonalizes the Hermitian combination `Re A + c Im A` for a fixed
/// irrational `c` and reads each eigenvalue back as a Rayleigh quotient.
pub fn normal_eigenvalues(a: &CMatrix) -> Vec<Complex64> {
    let adj = a.adjoint();
    let i = Complex64::new(0.0, 1.0);
    let herm_re = (a + &adj).scale(0.5);
    let herm_im = (a - &adj) * (-i * 0.5);
    let c = core::f64::consts::FRAC_1_SQRT_2 * 0.618_033_988_749_895;
    let mix = herm_re + herm_im.scale(c);
    let (_, vecs) = hermitian_eigen(&mix);
    (0..a.nrows())
        .map(|k| {
            let v = vecs.column(k);
            (v.adjoint() * a * v)[(0, 0)]
        })
        .collect()
}

/// `e^{M}` by Taylor series with scaling and squaring.
///
/// Independent of any eigen-decomposition; used as the brute-force route
/// for unitary evolution.
pub fn expm(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let norm = (0..n)
        .map(|r| m.row(r).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m.scale(scale);
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=40 {
        term = &term * &a / Complex64::new(k as f64, 0.0);
        result += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_pauli_x() {
        // exp(-i t X) = cos t I - i sin t X
        let t = 0.7;
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        );
        let u = expm(&(x * Complex64::new(0.0, -t)));
        assert!((u[(0, 0)] - Complex64::new(libm::cos(t), 0.0)).norm() < 1e-14);
        assert!((u[(1, 0)] - Complex64::new(0.0, -libm::sin(t))).norm() < 1e-14);
    }

    #[test]
    fn normal_eigenvalues_of_cycle_shift() {
        // 3-cycle permutation has eigenvalues 1, w, w^2
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let p = CMatrix::from_row_slice(3, 3, &[z, z, o, o, z, z, z, o, z]);
        let mut ev = normal_eigenvalues(&p);
        ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        let w = cis(2.0 * core::f64::consts::PI / 3.0);
        assert!((ev[0] - w.conj()).norm() < 1e-12);
        assert!((ev[1] - o).norm() < 1e-12);
        assert!((ev[2] - w).norm() < 1e-12);
    }

    #[test]
    fn phase_wrapping() {
        let pi = core::f64::consts::PI;
        assert!((wrap_phase(-pi / 2.0) - 1.5 * pi).abs() < 1e-15);
        assert!(phase_distance(0.0, 2.0 * pi - 1e-12) < 1e-11);
    }
}
