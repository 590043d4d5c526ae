//! Octonions as Cayley-Dickson pairs of quaternions.
//!
//! An element is stored as `a + l b` with `a, b` quaternions, which puts the
//! real coordinates on the basis `{1, i, j, k, l, li, lj, lk}`. The product is
//!
//! ```text
//! (a + l b)(c + l d) = (a c - d conj(b)) + l (conj(a) d + c b)
//! ```
//!
//! The algebra is neither commutative nor associative but it is alternative:
//! the associator `(x, y, z) = (xy)z - x(yz)` vanishes whenever two of its
//! arguments coincide, and any two elements generate an associative subalgebra.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 8]", into = "[T; 8]")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Octonion<T> {
    /// Quaternion part on `{1, i, j, k}`.
    pub a: Quaternion<T>,
    /// Coefficient of `l`, contributing on `{l, li, lj, lk}`.
    pub b: Quaternion<T>,
}

impl<T: Real> From<[T; 8]> for Octonion<T> {
    fn from(c: [T; 8]) -> Self {
        Self::from_coords(c)
    }
}

impl<T: Real> From<Octonion<T>> for [T; 8] {
    fn from(x: Octonion<T>) -> Self {
        x.coords()
    }
}

impl<T: Real> Octonion<T> {
    pub const fn from_halves(a: Quaternion<T>, b: Quaternion<T>) -> Self {
        Self { a, b }
    }

    pub fn from_coords(c: [T; 8]) -> Self {
        Self {
            a: Quaternion::new(c[0], c[1], c[2], c[3]),
            b: Quaternion::new(c[4], c[5], c[6], c[7]),
        }
    }

    pub fn coords(&self) -> [T; 8] {
        [
            self.a.w, self.a.x, self.a.y, self.a.z, self.b.w, self.b.x, self.b.y, self.b.z,
        ]
    }

    pub fn zero() -> Self {
        Self::from_halves(Quaternion::zero(), Quaternion::zero())
    }

    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    pub fn from_real(t: T) -> Self {
        Self::from_halves(Quaternion::from_real(t), Quaternion::zero())
    }

    /// `alpha + beta * unit`.
    pub fn from_slice(alpha: T, beta: T, unit: Self) -> Self {
        Self::from_real(alpha) + unit.scale(beta)
    }

    /// The `n`-th canonical basis element, `n < 8`.
    pub fn basis(n: usize) -> Self {
        assert!(n < 8, "octonion basis index {n} out of range");
        let mut c = [T::zero(); 8];
        c[n] = T::one();
        Self::from_coords(c)
    }

    pub fn i() -> Self {
        Self::basis(1)
    }

    pub fn j() -> Self {
        Self::basis(2)
    }

    pub fn k() -> Self {
        Self::basis(3)
    }

    pub fn l() -> Self {
        Self::basis(4)
    }

    #[inline]
    pub fn re(&self) -> T {
        self.a.w
    }

    #[inline]
    pub fn im(&self) -> Self {
        let mut x = *self;
        x.a.w = T::zero();
        x
    }

    #[inline]
    pub fn conj(&self) -> Self {
        Self::from_halves(self.a.conj(), -self.b)
    }

    #[inline]
    pub fn norm_sqr(&self) -> T {
        self.a.norm_sqr() + self.b.norm_sqr()
    }

    #[inline]
    pub fn norm(&self) -> T {
        let c = self.coords();
        c.iter().fold(T::zero(), |acc, &v| acc.hypot(v))
    }

    /// Euclidean inner product on the eight coordinates, `Re(x conj(y))`.
    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.a.dot(other.a) + self.b.dot(other.b)
    }

    #[inline]
    pub fn scale(&self, t: T) -> Self {
        Self::from_halves(self.a.scale(t), self.b.scale(t))
    }

    /// `|x|^{-2} conj(x)`.
    pub fn inv(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == T::zero() || !n2.is_finite() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.conj().scale(n2.recip()))
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|v| v.is_finite())
    }

    /// `(xy)z - x(yz)`.
    pub fn associator(x: &Self, y: &Self, z: &Self) -> Self {
        (*x * *y) * *z - *x * (*y * *z)
    }

    /// `xy - yx`.
    pub fn commutator(x: &Self, y: &Self) -> Self {
        *x * *y - *y * *x
    }

    /// Writes `x = alpha + beta I` with `beta >= 0` and `I` an imaginary unit.
    ///
    /// Real points get `I = i`.
    pub fn slice_decompose(&self) -> SlicePoint<T> {
        let im = self.im();
        let beta = im.norm();
        let unit = if beta > T::zero() {
            im.scale(beta.recip())
        } else {
            Self::i()
        };
        SlicePoint {
            alpha: self.re(),
            beta,
            unit,
        }
    }

    /// Uniform sample on the six-sphere of imaginary units: a normalized
    /// standard Gaussian vector on the seven imaginary coordinates.
    pub fn random_imaginary_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut c = [T::zero(); 8];
            for v in c.iter_mut().skip(1) {
                let g: f64 = rng.sample(StandardNormal);
                *v = T::lit(g);
            }
            let x = Self::from_coords(c);
            let n = x.norm();
            if n > T::lit(1e-6) {
                return x.scale(n.recip());
            }
        }
    }

    /// Uniform sample on the seven-sphere of unit octonions.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut c = [T::zero(); 8];
            for v in c.iter_mut() {
                let g: f64 = rng.sample(StandardNormal);
                *v = T::lit(g);
            }
            let x = Self::from_coords(c);
            let n = x.norm();
            if n > T::lit(1e-6) {
                return x.scale(n.recip());
            }
        }
    }

    /// Whether `self` is a purely imaginary unit within `tol`.
    pub fn is_imaginary_unit(&self, tol: T) -> bool {
        self.re().abs() <= tol && (self.norm() - T::one()).abs() <= tol
    }

    /// Maps `p + q i` to `p + q unit`.
    #[inline]
    pub fn from_complex(z: Complex<T>, unit: &Self) -> Self {
        Self::from_slice(z.re, z.im, *unit)
    }
}

/// Slice coordinates `x = alpha + beta * unit`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SlicePoint<T> {
    pub alpha: T,
    pub beta: T,
    pub unit: Octonion<T>,
}

impl<T: Real> SlicePoint<T> {
    pub fn to_octonion(&self) -> Octonion<T> {
        Octonion::from_slice(self.alpha, self.beta, self.unit)
    }

    /// The point as a complex number `alpha + i beta`.
    pub fn complex(&self) -> Complex<T> {
        Complex::new(self.alpha, self.beta)
    }
}

impl<T: Real> Add for Octonion<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::from_halves(self.a + o.a, self.b + o.b)
    }
}

impl<T: Real> Sub for Octonion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::from_halves(self.a - o.a, self.b - o.b)
    }
}

impl<T: Real> Neg for Octonion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::from_halves(-self.a, -self.b)
    }
}

impl<T: Real> AddAssign for Octonion<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.a += o.a;
        self.b += o.b;
    }
}

impl<T: Real> SubAssign for Octonion<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        self.a -= o.a;
        self.b -= o.b;
    }
}

impl<T: Real> Mul for Octonion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (a, b, c, d) = (self.a, self.b, o.a, o.b);
        Self::from_halves(a * c - d * b.conj(), a.conj() * d + c * b)
    }
}

impl<T: Real> Sum for Octonion<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}
