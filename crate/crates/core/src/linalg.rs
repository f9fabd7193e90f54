//! Small dense linear-algebra kernels.
//!
//! Everything in the toolkit works with matrices of at most a few hundred
//! rows, so plain partial-pivot LU, Householder QR, and cyclic Jacobi are
//! fast enough and keep the numerics transparent.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

/// Conjugate transpose.
pub fn hermitian(a: &CMat) -> CMat {
    let (rows, cols) = a.dim();
    Array2::from_shape_fn((cols, rows), |(i, j)| a[[j, i]].conj())
}

/// Solve `A X = B` for square complex `A` by LU with partial pivoting.
pub fn solve_complex(a: &CMat, b: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(Error::Dimension(format!(
            "solve_complex: A is {}x{}, B has {} rows",
            a.nrows(),
            a.ncols(),
            b.nrows()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let m = x.ncols();
    for col in 0..n {
        let mut pivot = col;
        let mut best = lu[[col, col]].norm_sqr();
        for row in col + 1..n {
            let mag = lu[[row, col]].norm_sqr();
            if mag > best {
                best = mag;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Err(Error::Singular(format!("zero pivot at column {col}")));
        }
        if pivot != col {
            for j in 0..n {
                lu.swap([col, j], [pivot, j]);
            }
            for j in 0..m {
                x.swap([col, j], [pivot, j]);
            }
        }
        let inv = Complex64::new(1.0, 0.0) / lu[[col, col]];
        for row in col + 1..n {
            let factor = lu[[row, col]] * inv;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let s = lu[[col, j]];
                lu[[row, j]] -= factor * s;
            }
            for j in 0..m {
                let s = x[[col, j]];
                x[[row, j]] -= factor * s;
            }
        }
    }
    for col in (0..n).rev() {
        let inv = Complex64::new(1.0, 0.0) / lu[[col, col]];
        for j in 0..m {
            let mut acc = x[[col, j]];
            for k in col + 1..n {
                acc -= lu[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = acc * inv;
        }
    }
    Ok(x)
}

/// Solve `A x = b` for square real `A` by LU with partial pivoting.
pub fn solve_real(a: &Array2<f64>, b: &Array1<f64>) -> Result<Array1<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::Dimension("solve_real: shape mismatch".into()));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    for col in 0..n {
        let mut pivot = col;
        let mut best = lu[[col, col]].abs();
        for row in col + 1..n {
            if lu[[row, col]].abs() > best {
                best = lu[[row, col]].abs();
                pivot = row;
            }
        }
        if best == 0.0 {
            return Err(Error::Singular(format!("zero pivot at column {col}")));
        }
        if pivot != col {
            for j in 0..n {
                lu.swap([col, j], [pivot, j]);
            }
            x.swap(col, pivot);
        }
        for row in col + 1..n {
            let factor = lu[[row, col]] / lu[[col, col]];
            if factor == 0.0 {
                continue;
            }
            for j in col + 1..n {
                let s = lu[[col, j]];
                lu[[row, j]] -= factor * s;
            }
            let s = x[col];
            x[row] -= factor * s;
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for k in col + 1..n {
            acc -= lu[[col, k]] * x[k];
        }
        x[col] = acc / lu[[col, col]];
    }
    Ok(x)
}

/// Thin QR factorization of a tall matrix, `A = Q R` with unitary columns in `Q`.
pub struct QrDecomposition {
    pub factor_q: CMat,
    pub factor_r: CMat,
}

impl QrDecomposition {
    /// Ratio of largest to smallest `|R[i,i]|`; a cheap condition-number proxy.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.factor_r.nrows();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            let d = self.factor_r[[i, i]].norm();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if lo == 0.0 {
            f64::INFINITY
        } else {
            hi / lo
        }
    }

    /// Solve `R X = Q^H B` (least squares for tall `A`).
    pub fn solve(&self, b: &CMat) -> Result<CMat> {
        let qh = hermitian(&self.factor_q);
        let x = qh.dot(b);
        self.solve_r(x)
    }

    /// Back-substitute `R X = B` for upper-triangular `R`.
    pub fn solve_r(&self, b: CMat) -> Result<CMat> {
        let mut x = b;
        let n = self.factor_r.nrows();
        let m = x.ncols();
        for col in (0..n).rev() {
            let d = self.factor_r[[col, col]];
            if d.norm_sqr() == 0.0 {
                return Err(Error::Singular("zero diagonal in R".into()));
            }
            let inv = Complex64::new(1.0, 0.0) / d;
            for j in 0..m {
                let mut acc = x[[col, j]];
                for k in col + 1..n {
                    acc -= self.factor_r[[col, k]] * x[[k, j]];
                }
                x[[col, j]] = acc * inv;
            }
        }
        Ok(x)
    }
}

/// Householder QR of an `m x n` matrix with `m >= n`.
pub fn qr(a: &CMat) -> Result<QrDecomposition> {
    let (m, n) = a.dim();
    if m < n {
        return Err(Error::Dimension(format!("qr: need m >= n, got {m}x{n}")));
    }
    let mut work = a.clone();
    // Householder vectors and their 2/|v|^2 factors.
    let mut reflectors: Vec<(CVec, f64)> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = Array1::from_shape_fn(m - j, |i| work[[j + i, j]]);
        let normx = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if normx == 0.0 {
            reflectors.push((v, 0.0));
            continue;
        }
        let phase = if v[0].norm() == 0.0 { Complex64::new(1.0, 0.0) } else { v[0] / v[0].norm() };
        v[0] += phase * normx;
        let vv = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let tau = 2.0 / vv;
        // Apply the reflector to the trailing block.
        for col in j..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..m - j {
                dot += v[i].conj() * work[[j + i, col]];
            }
            dot *= tau;
            for i in 0..m - j {
                let step = v[i] * dot;
                work[[j + i, col]] -= step;
            }
        }
        reflectors.push((v, tau));
    }
    let mut factor_r = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            factor_r[[i, j]] = work[[i, j]];
        }
    }
    // Accumulate the thin Q by applying reflectors to the identity block.
    let mut factor_q: CMat = Array2::zeros((m, n));
    for i in 0..n {
        factor_q[[i, i]] = Complex64::new(1.0, 0.0);
    }
    for j in (0..n).rev() {
        let (v, tau) = &reflectors[j];
        if *tau == 0.0 {
            continue;
        }
        for col in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..m - j {
                dot += v[i].conj() * factor_q[[j + i, col]];
            }
            dot *= *tau;
            for i in 0..m - j {
                let step = v[i] * dot;
                factor_q[[j + i, col]] -= step;
            }
        }
    }
    Ok(QrDecomposition { factor_q, factor_r })
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the real symmetric embedding `[[Re, -Im], [Im, Re]]`, whose spectrum
/// is that of the Hermitian input with every eigenvalue doubled, and a cyclic
/// Jacobi iteration on the embedding.
pub fn hermitian_eigenvalues(a: &CMat) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension("hermitian_eigenvalues: square input required".into()));
    }
    let mut s = Array2::<f64>::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            s[[i, j]] = a[[i, j]].re;
            s[[n + i, n + j]] = a[[i, j]].re;
            s[[i, n + j]] = -a[[i, j]].im;
            s[[n + i, j]] = a[[i, j]].im;
        }
    }
    let eig = jacobi_eigenvalues(&mut s);
    // Pairs are adjacent after sorting; keep one of each.
    Ok(eig.into_iter().step_by(2).collect())
}

fn jacobi_eigenvalues(s: &mut Array2<f64>) -> Vec<f64> {
    let n = s.nrows();
    let frob: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * frob;
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += s[[p, q]] * s[[p, q]];
            }
        }
        if off.sqrt() * std::f64::consts::SQRT_2 < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = s[[p, q]];
                if apq.abs() <= tol / (n as f64) {
                    continue;
                }
                let theta = (s[[q, q]] - s[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let skp = s[[k, p]];
                    let skq = s[[k, q]];
                    s[[k, p]] = c * skp - sn * skq;
                    s[[k, q]] = sn * skp + c * skq;
                }
                for k in 0..n {
                    let spk = s[[p, k]];
                    let sqk = s[[q, k]];
                    s[[p, k]] = c * spk - sn * sqk;
                    s[[q, k]] = sn * spk + c * sqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| s[[i, i]]).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}

/// Spectral radius of an entrywise-nonnegative matrix by power iteration.
pub fn spectral_radius_nonneg(a: &Array2<f64>, tol: f64, max_iter: usize) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    let mut x = Array1::<f64>::from_elem(n, 1.0);
    let mut radius = 0.0;
    for _ in 0..max_iter {
        let y = a.dot(&x);
        let norm: f64 = y.iter().map(|v| v.abs()).sum();
        if norm == 0.0 {
            return 0.0;
        }
        // Collatz-Wielandt bounds tighten around the Perron root.
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            if x[i] > 0.0 {
                let r = y[i] / x[i];
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        radius = 0.5 * (lo + hi);
        x = y / norm;
        if hi - lo <= tol * radius.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    radius
}
