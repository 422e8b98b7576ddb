//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

/// Sweeps stop once the off-diagonal Frobenius norm drops below
/// `RELATIVE_TOLERANCE * ‖A‖_F`.
pub const RELATIVE_TOLERANCE: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, unsorted.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Row-major `n × n`; column `k` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// Diagonalises the row-major symmetric matrix `matrix` (`n × n`) by cyclic
/// sweeps of plane rotations, accumulating the rotations into the
/// eigenvector matrix.
pub fn symmetric_eigen(matrix: &[f64], n: usize) -> SymmetricEigen {
    assert_eq!(matrix.len(), n * n, "matrix must be n x n");
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = RELATIVE_TOLERANCE * scale;

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off_diagonal_norm(&a, n) > target {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, n, p, q, c, s);
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i]).collect();
    SymmetricEigen { values, vectors: v, sweeps }
}

// A <- Jᵀ A J and V <- V J for the rotation J in the (p, q) plane.
fn rotate(a: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &[f64], n: usize, eig: &SymmetricEigen) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..n {
            for i in 0..n {
                let mut av = 0.0;
                for j in 0..n {
                    av += m[i * n + j] * eig.vectors[j * n + k];
                }
                worst = worst.max((av - eig.values[k] * eig.vectors[i * n + k]).abs());
            }
        }
        worst
    }

    #[test]
    fn two_by_two() {
        let m = [0.0, 1.0, 1.0, 0.0];
        let eig = symmetric_eigen(&m, 2);
        let mut vals = eig.values.clone();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        assert!(residual(&m, 2, &eig) < 1e-14);
    }

    #[test]
    fn diagonal_and_empty() {
        let eig = symmetric_eigen(&[3.0], 1);
        assert_eq!(eig.values, vec![3.0]);
        assert_eq!(eig.sweeps, 0);
        let eig = symmetric_eigen(&[0.0; 9], 3);
        assert_eq!(eig.values, vec![0.0; 3]);
    }

    #[test]
    fn dense_matrix_residual() {
        let n = 6;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let x = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                m[i * n + j] = x;
                m[j * n + i] = x;
            }
        }
        let eig = symmetric_eigen(&m, n);
        assert!(residual(&m, n, &eig) < 1e-10);
        let trace: f64 = (0..n).map(|i| m[i * n + i]).sum();
        assert!((eig.values.iter().sum::<f64>() - trace).abs() < 1e-10);
    }
}
