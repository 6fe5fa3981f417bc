//! Small dense kernels generic over [`Real`].
//!
//! Both solvers are Jacobi methods with the relative stopping rule
//! `|a_pq| ≤ tol·√(a_pp a_qq)`, which resolves the tiny eigenvalues of
//! strongly squeezed covariances to high relative accuracy instead of
//! only to `ε·‖V‖`.

use nalgebra::DMatrix;

use crate::scalar::Real;

const MAX_SWEEPS: usize = 60;

fn tolerance<T: Real>(n: usize) -> T {
    T::from_f64(T::EPSILON * (n.max(2) as f64))
}

/// Rotation `(c, s)` annihilating the off-diagonal entry of the 2×2 symmetric
/// block `[[app, apq], [apq, aqq]]`.
#[inline]
fn jacobi_rotation<T: Real>(app: T, aqq: T, apq: T) -> (T, T) {
    let two = T::from_f64(2.0);
    let theta = (aqq - app) / (two * apq);
    let t = if theta.abs().to_f64() > 1e150 {
        T::one() / (two * theta)
    } else {
        let t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    (c, t * c)
}

/// Eigen-decomposition of a real symmetric matrix.
///
/// Returns eigenvalues in ascending order and the matching orthonormal
/// eigenvectors as columns.
pub fn symmetric_eigen<T: Real>(matrix: &DMatrix<T>) -> (Vec<T>, DMatrix<T>) {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "symmetric_eigen needs a square matrix");
    let mut a = matrix.clone();
    let mut v = DMatrix::<T>::identity(n, n);
    let tol = tolerance::<T>(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.is_zero() {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() <= tol * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s) = jacobi_rotation(app, aqq, apq);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Singular values by one-sided (Hestenes) Jacobi, in descending order.
pub fn singular_values<T: Real>(matrix: DMatrix<T>) -> Vec<T> {
    let mut a = matrix;
    let (rows, n) = a.shape();
    let tol = tolerance::<T>(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = T::zero();
                for k in 0..rows {
                    let ap = a[(k, p)];
                    let aq = a[(k, q)];
                    alpha += ap * ap;
                    beta += aq * aq;
                    gamma += ap * aq;
                }
                if gamma.is_zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s) = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let ap = a[(k, p)];
                    let aq = a[(k, q)];
                    a[(k, p)] = c * ap - s * aq;
                    a[(k, q)] = s * ap + c * aq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<T> = (0..n)
        .map(|j| {
            let mut sq = T::zero();
            for k in 0..rows {
                sq += a[(k, j)] * a[(k, j)];
            }
            sq.sqrt()
        })
        .collect();
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    values
}

/// `Q diag(f(λ)) Qᵀ` from an eigen-decomposition.
pub(crate) fn reassemble<T: Real>(values: &[T], vectors: &DMatrix<T>, f: impl Fn(T) -> T) -> DMatrix<T> {
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let fj = f(lambda);
        for i in 0..n {
            scaled[(i, j)] *= fj;
        }
    }
    &scaled * vectors.transpose()
}

pub(crate) fn symmetrize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    let half = T::from_f64(0.5);
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        if i == j {
            m[(i, i)]
        } else {
            (m[(i, j)] + m[(j, i)]) * half
        }
    })
}

pub(crate) fn max_asymmetry<T: Real>(m: &DMatrix<T>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs().to_f64());
        }
    }
    worst
}

pub(crate) fn to_f64_matrix<T: Real>(m: &DMatrix<T>) -> DMatrix<f64> {
    m.map(|x| x.to_f64())
}

pub(crate) fn from_f64_matrix<T: Real>(m: &DMatrix<f64>) -> DMatrix<T> {
    m.map(T::from_f64)
}

pub(crate) fn identity<T: Real>(n: usize) -> DMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
}
