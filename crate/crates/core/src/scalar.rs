//! Scalar abstractions.
//!
//! [`Real`] is the floating-point type behind every numeric routine (Fock
//! numerics, entropies, closed forms). [`Coefficient`] is the ring the
//! Grassmann algebra takes its coefficients from; it is satisfied both by
//! `Complex<f64>` and by exact `Complex<Rational64>`.

use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, Signed, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Signed + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Eigenvalues of a Hermitian matrix, ascending.
    fn hermitian_eigenvalues(m: &DMatrix<Complex<Self>>) -> Vec<Self>;

    /// Eigenvalues and orthogonal eigenvector matrix (columns) of a real
    /// symmetric matrix.
    fn symmetric_eigen(m: &DMatrix<Self>) -> (Vec<Self>, DMatrix<Self>);

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Widens a tolerance stated for `f64` so it stays meaningful at the
    /// precision of `Self`.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(256.0))
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn hermitian_eigenvalues(m: &DMatrix<Complex<$t>>) -> Vec<$t> {
                let mut ev: Vec<$t> = nalgebra::SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
                ev.sort_by(|a, b| a.total_cmp(b));
                ev
            }

            fn symmetric_eigen(m: &DMatrix<$t>) -> (Vec<$t>, DMatrix<$t>) {
                let eig = nalgebra::SymmetricEigen::new(m.clone());
                (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Coefficient ring of the Grassmann algebra and of super-operators.
///
/// Conjugation must be an involutive ring automorphism (complex
/// conjugation for complex types).
pub trait Coefficient: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync {
    fn conj(&self) -> Self;

    /// Size of the coefficient as an `f64`, used for residual reporting.
    fn magnitude(&self) -> f64;

    /// Compact human-readable form (`3/2`, `-0.5`, `(1+2i)`).
    fn render(&self) -> String;

    fn integer(n: i64) -> Self {
        let mut acc = Self::zero();
        let step = if n < 0 { -Self::one() } else { Self::one() };
        for _ in 0..n.unsigned_abs() {
            acc = acc + step.clone();
        }
        acc
    }
}

impl<T> Coefficient for Complex<T>
where
    T: Clone + PartialEq + Debug + Display + Num + Neg<Output = T> + Signed + ToPrimitive + Send + Sync,
{
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn magnitude(&self) -> f64 {
        let re = self.re.abs().to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.abs().to_f64().unwrap_or(f64::INFINITY);
        re.max(im)
    }

    fn render(&self) -> String {
        if self.im.is_zero() {
            format!("{}", self.re)
        } else if self.re.is_zero() {
            format!("{}i", self.im)
        } else {
            format!("({}{}{}i)", self.re, if self.im.is_negative() { "" } else { "+" }, self.im)
        }
    }
}

/// Lifts a real into the complex coefficient ring.
#[inline]
pub fn cx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
