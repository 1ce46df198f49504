//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Inputs whose Hermiticity defect exceeds this are rejected.
pub const HERMITICITY_TOL: f64 = 1e-12;

const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching eigenvectors as the
/// columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * self.values[k]).sum()
        })
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.values.len()).map(|i| self.vectors[(i, k)]).collect()
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = OFF_DIAGONAL_TOL * if scale > 0.0 { scale } else { 1.0 };

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// One complex Jacobi rotation zeroing `a[p][q]`. The unitary is
/// `G = D·R` with `D = diag(1, e^{-iα})` on (p, q), `α = arg a[p][q]`, and
/// `R` the real rotation that diagonalizes the resulting real 2×2 block.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if g < 1e-300 || g <= f64::EPSILON * 1e-3 * libm::sqrt(libm::fabs(app * aqq)) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = a.dim();
    // A ← A·G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    // A ← G†·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|e| e.values)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    hermitian_eigenvalues(m).map(|v| v.first().copied().unwrap_or(0.0))
}

/// Singular values of a square matrix, ascending.
///
/// Computed as the nonnegative eigenvalues of the Hermitian dilation
/// `[[0, A], [A†, 0]]`, which resolves small singular values to absolute
/// precision (eigenvalues of `A†A` would only resolve them to `√ε`).
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = a.dim();
    let zero = Complex64::new(0.0, 0.0);
    let dilation = ComplexMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, false) => a[(i, j - n)],
        (false, true) => a[(j, i - n)].conj(),
        _ => zero,
    });
    let values = hermitian_eigenvalues(&dilation)?;
    Ok(values[n..].iter().map(|&s| s.max(0.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorops::{kron, pauli, pauli_op};
    use proptest::prelude::*;

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let m = ComplexMatrix::from_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), [1.0, 2.0, 3.0]);
    }

    #[test]
    fn sigma_x_spectrum() {
        let ev = hermitian_eigenvalues(&pauli(1).unwrap()).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[b, r e^{iφ}], [r e^{-iφ}, 1/b]], eigenvalues (b + 1/b ± √((b − 1/b)² + 4r²))/2
        let (b, ib) = (2.0f64, 0.5f64);
        for &r in &[1.0, core::f64::consts::FRAC_1_SQRT_2, 0.3] {
            for &phi in &[0.0, 0.7, 2.5, -1.1] {
                let z = Complex64::from_polar(r, phi);
                let m = ComplexMatrix::from_row_major(
                    2,
                    alloc::vec![Complex64::new(b, 0.0), z, z.conj(), Complex64::new(ib, 0.0)],
                )
                .unwrap();
                let ev = hermitian_eigenvalues(&m).unwrap();
                let disc = ((b - ib) * (b - ib) + 4.0 * r * r).sqrt();
                assert!((ev[0] - (b + ib - disc) / 2.0).abs() < 1e-14);
                assert!((ev[1] - (b + ib + disc) / 2.0).abs() < 1e-14);
            }
        }
        // r = 1 saturates the block: determinant b·(1/b) − r² = 0
        let m = ComplexMatrix::from_row_major(
            2,
            alloc::vec![
                Complex64::new(b, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(ib, 0.0)
            ],
        )
        .unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!(ev[0].abs() < 1e-15 && (ev[1] - 2.5).abs() < 1e-14);
        let z = Complex64::from_polar(core::f64::consts::FRAC_1_SQRT_2, 0.4);
        let m =
            ComplexMatrix::from_row_major(2, alloc::vec![Complex64::new(b, 0.0), z, z.conj(), Complex64::new(ib, 0.0)])
                .unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] - 0.21922359359558485).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_fn(2, |i, j| Complex64::new((i + 2 * j) as f64, 0.0));
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn singular_values_of_unitary_are_one() {
        let sv = singular_values(&pauli(2).unwrap()).unwrap();
        assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-14));
        let rank_one = ComplexMatrix::from_fn(3, |_, _| Complex64::new(1.0, 0.0));
        let sv = singular_values(&rank_one).unwrap();
        assert!(sv[0].abs() < 1e-15 && sv[1].abs() < 1e-15 && (sv[2] - 3.0).abs() < 1e-14);
    }

    /// Unitary built from a product of exponentials of Pauli triples,
    /// `exp(iθ O) = cos θ I + i sin θ O` since `O² = I`.
    fn pauli_unitary(angles: &[(usize, f64)]) -> ComplexMatrix {
        let mut u = ComplexMatrix::identity(8);
        for &(t, theta) in angles {
            let (i, j, k) = (t / 16, (t / 4) % 4, t % 4);
            let o = pauli_op(i, j, k).unwrap();
            let step = &ComplexMatrix::identity(8).scale_real(theta.cos()) + &o.scale(Complex64::new(0.0, theta.sin()));
            u = &u * &step;
        }
        u
    }

    proptest! {
        #[test]
        fn recovers_known_spectrum(
            spectrum in proptest::collection::vec(-5.0f64..5.0, 8),
            rotations in proptest::collection::vec((1usize..64, -3.0f64..3.0), 1..6),
        ) {
            let u = pauli_unitary(&rotations);
            let m = &(&u * &ComplexMatrix::from_diagonal(&spectrum)) * &u.adjoint();
            let m = m.hermitian_part();
            let eig = hermitian_eigen(&m).unwrap();
            let mut sorted = spectrum.clone();
            sorted.sort_by(f64::total_cmp);
            for (a, b) in eig.values.iter().zip(&sorted) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            let residual = (&m - &eig.reconstruct()).frobenius_norm();
            prop_assert!(residual <= 1e-10 * m.frobenius_norm().max(1e-300));
        }
    }

    #[test]
    fn reconstructs_pauli_tensor() {
        let m = &pauli_op(1, 2, 3).unwrap() + &kron(&kron(&pauli(3).unwrap(), &pauli(0).unwrap()), &pauli(1).unwrap());
        let eig = hermitian_eigen(&m).unwrap();
        assert!((&m - &eig.reconstruct()).frobenius_norm() <= 1e-10 * m.frobenius_norm());
    }
}
