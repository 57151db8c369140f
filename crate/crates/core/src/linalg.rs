//! Dense complex matrix helpers shared by the boson and entanglement code.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{cx, Real};

pub type CMatrix<T> = DMatrix<Complex<T>>;

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { Complex::one() } else { Complex::zero() })
}

pub fn zeros<T: Real>(rows: usize, cols: usize) -> CMatrix<T> {
    DMatrix::from_element(rows, cols, Complex::zero())
}

/// Conjugate transpose.
pub fn adjoint<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    DMatrix::from_fn(m.ncols(), m.nrows(), |i, j| m[(j, i)].conj())
}

/// Kronecker product, row index `i * b.nrows() + k`.
pub fn kron<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    DMatrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

pub fn scale<T: Real>(m: &CMatrix<T>, s: Complex<T>) -> CMatrix<T> {
    m.map(|z| z * s)
}

pub fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).norm()))
}

pub fn is_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

fn one_norm<T: Real>(m: &CMatrix<T>) -> T {
    (0..m.ncols()).map(|j| m.column(j).iter().fold(T::zero(), |acc, z| acc + z.norm())).fold(T::zero(), T::max)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
///
/// The argument is scaled by `2^-s` until its 1-norm is below 1/2; the
/// series is then summed until the next term no longer changes the sum at
/// working precision, and the result is squared `s` times.
pub fn expm<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    assert!(m.is_square(), "expm of a non-square matrix");
    let n = m.nrows();
    let norm = one_norm(m);
    let half = T::lit(0.5);
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > half {
        scaled_norm *= half;
        squarings += 1;
    }
    let a = scale(m, cx(T::lit(0.5).powi(squarings as i32)));

    let mut sum = identity::<T>(n);
    let mut term = identity::<T>(n);
    for k in 1..=60 {
        term = &term * &a;
        term = scale(&term, cx(T::one() / T::from_usize(k).unwrap()));
        sum += &term;
        if max_abs(&term) <= T::epsilon() * T::lit(0.125) * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// First `ncols` columns of `exp(G)` for the real antisymmetric tridiagonal
/// `G` with `G[m+1][m] = w[m] = −G[m][m+1]`.
///
/// With `U = diag(iᵐ)` one has `G = U (−iT) U†` for the real symmetric
/// tridiagonal `T` carrying `w` on both off-diagonals, so a real symmetric
/// eigensolve gives an exactly unitary exponential at any norm.
pub fn expm_antisymmetric_tridiagonal<T: Real>(w: &[T], ncols: usize) -> CMatrix<T> {
    let n = w.len() + 1;
    let t = DMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            w[j]
        } else if j == i + 1 {
            w[i]
        } else {
            T::zero()
        }
    });
    let (values, v) = T::symmetric_eigen(&t);
    let phases: Vec<Complex<T>> = values.iter().map(|l| Complex::new(l.cos(), -l.sin())).collect();
    let i_pow = |k: usize| match k % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    };
    DMatrix::from_fn(n, ncols.min(n), |m, c| {
        let sum = (0..n).fold(Complex::zero(), |acc: Complex<T>, k| acc + phases[k] * (v[(m, k)] * v[(c, k)]));
        // U_mm · U*_cc = i^(m − c)
        sum * i_pow((m + 4 * n - c) % 4)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_rotation_generator() {
        // exp([[0, -t], [t, 0]]) is the rotation by t
        let t = 2.5_f64;
        let g = DMatrix::from_row_slice(2, 2, &[cx(0.0), cx(-t), cx(t), cx(0.0)]);
        let e = expm(&g);
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-14);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-14);
        assert!((e[(0, 1)].re + t.sin()).abs() < 1e-14);
    }

    #[test]
    fn expm_of_diagonal() {
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cx(1.0_f64),
            Complex::new(0.0, std::f64::consts::PI),
            cx(-3.0),
        ]));
        let e = expm(&g);
        assert!((e[(0, 0)] - cx(1.0_f64.exp())).norm() < 1e-14);
        assert!((e[(1, 1)] - cx(-1.0)).norm() < 1e-14);
        assert!((e[(2, 2)] - cx((-3.0_f64).exp())).norm() < 1e-16);
        assert_eq!(e[(0, 1)], Complex::zero());
    }

    #[test]
    fn tridiagonal_route_matches_taylor() {
        let w = [0.7_f64, -1.3, 2.1, 0.4, 3.0];
        let n = w.len() + 1;
        let mut g = zeros::<f64>(n, n);
        for (m, x) in w.iter().enumerate() {
            g[(m + 1, m)] = cx(*x);
            g[(m, m + 1)] = cx(-*x);
        }
        let full = expm(&g);
        let cols = expm_antisymmetric_tridiagonal(&w, 3);
        assert_eq!(cols.shape(), (n, 3));
        for m in 0..n {
            for c in 0..3 {
                assert!((full[(m, c)] - cols[(m, c)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kron_layout() {
        let a = DMatrix::from_row_slice(2, 2, &[cx(1.0_f64), cx(2.0), cx(3.0), cx(4.0)]);
        let b = identity::<f64>(2);
        let k = kron(&a, &b);
        assert_eq!(k[(0, 2)], cx(2.0));
        assert_eq!(k[(3, 1)], cx(3.0));
        assert_eq!(k[(1, 2)], cx(0.0));
    }
}
