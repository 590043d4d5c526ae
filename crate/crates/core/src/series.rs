//! Truncated power series `f(x) = sum_k x^k a_k` with octonion coefficients on
//! the right, the representation used for slice regular functions on the unit
//! ball.
//!
//! Powers of the variable are taken inside the complex slice of the point:
//! `x = alpha + beta I` maps to `z = alpha + i beta`, and with
//! `z^k = p_k + i q_k` the value is
//!
//! ```text
//! f(x) = F1(z) + I F2(z),   F1 = sum p_k a_k,   F2 = sum q_k a_k.
//! ```
//!
//! `F1 + i F2` is the stem function of `f`.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octonion::Octonion;
use crate::scalar::Real;

/// Threshold below which `|a0|` is treated as zero by [`SliceSeries::slice_reciprocal`].
pub const RECIPROCAL_GUARD: f64 = 1e-8;

/// Truncated power series `sum_{k <= N} x^k a_k`.
///
/// `tail_bound` is a uniform bound on `|a_k|` for `k > N`: `Some(0)` for an
/// exact polynomial, `None` when nothing is known about the discarded terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SliceSeries<T> {
    coeffs: Vec<Octonion<T>>,
    tail_bound: Option<T>,
}

/// Stem components `F1`, `F2` of a slice function at `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StemValue<T> {
    pub f1: Octonion<T>,
    pub f2: Octonion<T>,
    pub at: Complex<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupNormEstimate<T> {
    /// Largest sampled modulus; a lower bound for the sup over the closed ball of radius `r`.
    pub sampled: T,
    /// `sampled` plus the truncation tail at `r`.
    pub with_tail: T,
}

/// Outcome of the reciprocal identity check at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TfCheck<T> {
    pub residual: T,
    pub t_point: Octonion<T>,
    /// `N(f)(x)^{-1} f^c(x)`.
    pub reciprocal_value: Octonion<T>,
    /// `f(T_f(x))^{-1}`.
    pub inverted_value: Octonion<T>,
}

fn convolve<T: Real>(a: &[Octonion<T>], b: &[Octonion<T>], len: usize) -> Vec<Octonion<T>> {
    (0..len)
        .map(|n| {
            let lo = n.saturating_sub(b.len() - 1);
            let hi = n.min(a.len() - 1);
            (lo..=hi).map(|k| a[k] * b[n - k]).sum()
        })
        .collect()
}

impl<T: Real> SliceSeries<T> {
    /// Exact polynomial with the given coefficients (an empty list is the zero function).
    pub fn polynomial(coeffs: Vec<Octonion<T>>) -> Self {
        Self::with_tail(coeffs, Some(T::zero()))
    }

    /// Truncation of an infinite series whose discarded coefficients satisfy `|a_k| <= bound`.
    pub fn truncated(coeffs: Vec<Octonion<T>>, bound: T) -> Self {
        Self::with_tail(coeffs, Some(bound))
    }

    pub fn with_tail(mut coeffs: Vec<Octonion<T>>, tail_bound: Option<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Octonion::zero());
        }
        Self { coeffs, tail_bound }
    }

    pub fn constant(a: Octonion<T>) -> Self {
        Self::polynomial(vec![a])
    }

    /// `x^k a`.
    pub fn monomial(k: usize, a: Octonion<T>) -> Self {
        let mut c = vec![Octonion::zero(); k + 1];
        c[k] = a;
        Self::polynomial(c)
    }

    pub fn from_real_coeffs(coeffs: &[T]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Octonion::from_real(c)).collect())
    }

    pub fn coeffs(&self) -> &[Octonion<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Octonion<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Octonion::zero)
    }

    /// Truncation order `N`; the series stores `N + 1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> Option<T> {
        self.tail_bound
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail_bound == Some(T::zero())
    }

    pub fn set_tail_bound(&mut self, bound: Option<T>) {
        self.tail_bound = bound;
    }

    /// Bound on `sum_{k > N} r^k |a_k|`: `B r^{N+1} / (1 - r)`; infinite when unknown.
    pub fn tail_at(&self, r: T) -> T {
        match self.tail_bound {
            Some(b) if b == T::zero() => T::zero(),
            _ if r == T::zero() => T::zero(),
            Some(b) if r < T::one() => b * r.powi(self.order() as i32 + 1) / (T::one() - r),
            _ => T::infinity(),
        }
    }

    /// Keeps the first `order + 1` coefficients (padding with zeros).
    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        let dropped = c.len() > order + 1;
        let dropped_max = c
            .iter()
            .skip(order + 1)
            .map(|a| a.norm())
            .fold(T::zero(), T::max);
        c.resize(order + 1, Octonion::zero());
        let tail = match self.tail_bound {
            Some(b) if dropped => Some(b.max(dropped_max)),
            t => t,
        };
        Self::with_tail(c, tail)
    }

    /// `F1(z)`, `F2(z)` from the coefficients, for any complex `z`.
    pub fn stem_sums(&self, z: Complex<T>) -> (Octonion<T>, Octonion<T>) {
        let mut f1 = Octonion::zero();
        let mut f2 = Octonion::zero();
        let mut zk = Complex::new(T::one(), T::zero());
        for a in &self.coeffs {
            f1 += a.scale(zk.re);
            f2 += a.scale(zk.im);
            zk = zk * z;
        }
        (f1, f2)
    }

    fn evaluate_unchecked(&self, x: &Octonion<T>) -> Octonion<T> {
        let s = x.slice_decompose();
        let (f1, f2) = self.stem_sums(s.complex());
        f1 + s.unit * f2
    }

    /// `sum_{k <= N} x^k a_k` for `|x| < 1`.
    pub fn evaluate(&self, x: &Octonion<T>) -> Result<Octonion<T>> {
        check_ball(x)?;
        Ok(self.evaluate_unchecked(x))
    }

    /// Value together with the truncation tail bound at `|x|`.
    pub fn evaluate_with_tail(&self, x: &Octonion<T>) -> Result<(Octonion<T>, T)> {
        let v = self.evaluate(x)?;
        Ok((v, self.tail_at(x.norm())))
    }

    /// Value at `alpha + beta I` for the complex point `z = alpha + i beta`.
    pub fn evaluate_on_slice(&self, unit: &Octonion<T>, z: Complex<T>) -> Octonion<T> {
        let (f1, f2) = self.stem_sums(z);
        f1 + *unit * f2
    }

    /// Coefficient convolution `c_n = sum_k a_k b_{n-k}`.
    ///
    /// Two polynomials multiply exactly. Otherwise the result is truncated at
    /// the smallest order among the non-polynomial factors, where every kept
    /// coefficient is exact, and the tail bound becomes unknown.
    pub fn slice_product(&self, other: &Self) -> Self {
        match (self.is_polynomial(), other.is_polynomial()) {
            (true, true) => {
                let len = self.coeffs.len() + other.coeffs.len() - 1;
                Self::polynomial(convolve(&self.coeffs, &other.coeffs, len))
            }
            (p, q) => {
                let order = match (p, q) {
                    (false, false) => self.order().min(other.order()),
                    (true, false) => other.order(),
                    _ => self.order(),
                };
                Self::with_tail(convolve(&self.coeffs, &other.coeffs, order + 1), None)
            }
        }
    }

    /// Coefficientwise conjugate `f^c`.
    pub fn slice_conj(&self) -> Self {
        Self::with_tail(
            self.coeffs.iter().map(Octonion::conj).collect(),
            self.tail_bound,
        )
    }

    /// Normal function `N(f) = f * f^c`; its coefficients are real.
    pub fn normal(&self) -> Self {
        self.slice_product(&self.slice_conj())
    }

    /// Slice reciprocal `N(f)^{-1} * f^c` to order `out_order`, treating the
    /// stored coefficients as the whole function.
    pub fn slice_reciprocal(&self, out_order: usize) -> Result<Self> {
        let a0 = self.coeffs[0].norm();
        if a0 < T::tol(RECIPROCAL_GUARD) {
            return Err(Error::ReciprocalUndefined { modulus: a0.as_f64() });
        }
        let conj = self.slice_conj();
        let len = out_order + 1;
        let normal: Vec<T> = convolve(&self.coeffs, &conj.coeffs, len)
            .iter()
            .map(Octonion::re)
            .collect();
        let n0 = normal[0];
        let mut inv = Vec::with_capacity(len);
        inv.push(n0.recip());
        for k in 1..len {
            let s = (1..=k).fold(T::zero(), |acc, j| acc + normal[j] * inv[k - j]);
            inv.push(-s / n0);
        }
        let coeffs = (0..len)
            .map(|n| {
                (0..=n.min(conj.order()))
                    .map(|k| conj.coeffs[k].scale(inv[n - k]))
                    .sum()
            })
            .collect();
        Ok(Self::with_tail(coeffs, None))
    }

    /// Slice derivative: `b_k = (k + 1) a_{k+1}`.
    pub fn slice_derivative(&self) -> Self {
        let coeffs: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a.scale(T::lit(k as f64)))
            .collect();
        let tail = if self.is_polynomial() {
            Some(T::zero())
        } else {
            None
        };
        Self::with_tail(coeffs, tail)
    }

    /// Real linear combination `s * self + t * other`.
    pub fn combine(&self, s: T, other: &Self, t: T) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeff(k).scale(s) + other.coeff(k).scale(t))
            .collect();
        let tail = match (self.tail_bound, other.tail_bound) {
            (Some(a), Some(b)) => Some(s.abs() * a + t.abs() * b),
            _ => None,
        };
        let mut out = Self::with_tail(coeffs, tail);
        // a shorter polynomial operand contributes nothing past its degree
        if self.order() != other.order() && !(self.is_polynomial() && other.is_polynomial()) {
            let order = [self, other]
                .iter()
                .filter(|f| !f.is_polynomial())
                .map(|f| f.order())
                .min()
                .unwrap_or(len - 1);
            out = out.truncate(order);
        }
        out
    }

    /// Stem components at `x` from values at `x` and its conjugate:
    /// `F1 = (f(x) + f(conj x)) / 2`, `F2 = (2 I)^{-1} (f(x) - f(conj x))`,
    /// and `F2 = 0` on the real line.
    pub fn stem_components(&self, x: &Octonion<T>) -> Result<StemValue<T>> {
        check_ball(x)?;
        let s = x.slice_decompose();
        let fx = self.evaluate_unchecked(x);
        let fxc = self.evaluate_unchecked(&x.conj());
        let half = T::lit(0.5);
        let f1 = (fx + fxc).scale(half);
        let f2 = if s.beta == T::zero() {
            Octonion::zero()
        } else {
            s.unit.scale(T::lit(2.0)).inv()? * (fx - fxc)
        };
        Ok(StemValue {
            f1,
            f2,
            at: s.complex(),
        })
    }

    /// `max_{I} |f(alpha + beta I)|` over the whole sphere of imaginary units,
    /// exactly: with `f = F1 + I F2`, the maximum of `|F1 + I F2|^2` is
    /// `|F1|^2 + |F2|^2 + 2 |Im(F1 conj(F2))|`.
    pub fn sphere_max_modulus(&self, z: Complex<T>) -> T {
        let (f1, f2) = self.stem_sums(z);
        sphere_max(&f1, &f2)
    }

    /// Sampled sup-norm on the sphere `|x| = r` over `n_units` imaginary units
    /// (always including `i`) and `n_angles` equally spaced angles.
    pub fn sup_norm_estimate(&self, r: T, n_units: usize, n_angles: usize) -> SupNormEstimate<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0b0e);
        let mut units = vec![Octonion::i()];
        units.extend((1..n_units.max(1)).map(|_| Octonion::random_imaginary_unit(&mut rng)));
        let n_angles = n_angles.max(1);
        let mut best = T::zero();
        for u in &units {
            for j in 0..n_angles {
                let theta = T::TAU() * T::lit(j as f64) / T::lit(n_angles as f64);
                let x = Octonion::from_slice(r * theta.cos(), r * theta.sin(), *u);
                best = best.max(self.evaluate_unchecked(&x).norm());
            }
        }
        SupNormEstimate {
            sampled: best,
            with_tail: best + self.tail_at(r),
        }
    }

    /// Upper bound for `sup_{|x| <= r} |f(x)|`.
    ///
    /// On each slice the modulus is subharmonic, so the sup is attained on
    /// `|x| = r`. The maximum over all units is exact per angle (see
    /// [`Self::sphere_max_modulus`]); between grid angles it moves by at most
    /// `sum_k k r^k |a_k|` per radian. The truncation tail is added last.
    pub fn sup_norm_bound(&self, r: T, n_angles: usize) -> T {
        let n_angles = n_angles.max(1);
        let mut best = T::zero();
        for j in 0..n_angles {
            let theta = T::TAU() * T::lit(j as f64) / T::lit(n_angles as f64);
            best = best.max(self.sphere_max_modulus(Complex::from_polar(r, theta)));
        }
        let mut rk = T::one();
        let mut lipschitz = T::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            lipschitz = lipschitz + T::lit(k as f64) * rk * a.norm();
            rk = rk * r;
        }
        best + lipschitz * T::PI() / T::lit(n_angles as f64) + self.tail_at(r)
    }

    /// Components `f_n(z)`, `n = 0..4`, with `f(z) = sum_n f_n(z) I_n` on the
    /// slice of `unit`, for the splitting basis returned by [`splitting_basis`].
    /// Each component is returned as a complex number via `unit <-> i`.
    pub fn split_components(&self, unit: &Octonion<T>, z: Complex<T>) -> Result<[Complex<T>; 4]> {
        let basis = splitting_basis(unit)?;
        let v = self.evaluate_on_slice(unit, z);
        let mut out = [Complex::new(T::zero(), T::zero()); 4];
        for (n, slot) in out.iter_mut().enumerate() {
            let e = basis[2 * n];
            let ie = basis[2 * n + 1];
            *slot = Complex::new(v.dot(&e), v.dot(&ie));
        }
        Ok(out)
    }

    /// Residual `|f^{-.}(x) - f(T_f(x))^{-1}|` with
    /// `T_f(x) = (f^c(x)^{-1} ((x f^c(x)) F2(z))) F2(z)^{-1}`.
    ///
    /// Points where `N(f)(x)` or `F2(z)` fall below `1e-8` in modulus are
    /// rejected.
    pub fn t_f_identity_check(&self, x: &Octonion<T>) -> Result<TfCheck<T>> {
        check_ball(x)?;
        let thr = T::tol(1e-8);
        let s = x.slice_decompose();
        if s.beta < thr {
            return Err(Error::IdentityNotTestable {
                reason: "F2 vanishes on the real line",
            });
        }
        let conj = self.slice_conj();
        let fc_x = conj.evaluate_unchecked(x);
        let n_x = self.normal_at(x);
        if n_x.norm() < thr {
            return Err(Error::IdentityNotTestable {
                reason: "N(f) vanishes",
            });
        }
        let (_, f2) = self.stem_sums(s.complex());
        if f2.norm() < thr {
            return Err(Error::IdentityNotTestable {
                reason: "F2 vanishes",
            });
        }
        let reciprocal_value = n_x.inv()? * fc_x;
        let t_point = (fc_x.inv()? * ((*x * fc_x) * f2)) * f2.inv()?;
        let inverted_value = self.evaluate_unchecked(&t_point).inv()?;
        Ok(TfCheck {
            residual: (reciprocal_value - inverted_value).norm(),
            t_point,
            reciprocal_value,
            inverted_value,
        })
    }

    /// `N(f)(x)` from the exact convolution of the stored coefficients.
    fn normal_at(&self, x: &Octonion<T>) -> Octonion<T> {
        let conj = self.slice_conj();
        let len = 2 * self.coeffs.len() - 1;
        let n = Self::polynomial(convolve(&self.coeffs, &conj.coeffs, len));
        n.evaluate_unchecked(x)
    }
}

fn sphere_max<T: Real>(f1: &Octonion<T>, f2: &Octonion<T>) -> T {
    let cross = (*f1 * f2.conj()).im().norm();
    (f1.norm_sqr() + f2.norm_sqr() + T::lit(2.0) * cross).sqrt()
}

fn check_ball<T: Real>(x: &Octonion<T>) -> Result<()> {
    let r = x.norm();
    if r < T::one() {
        Ok(())
    } else {
        Err(Error::OutsideBall { modulus: r.as_f64() })
    }
}

/// Orthonormal basis `{1, I, I1, I I1, I2, I I2, I3, I I3}` of the octonions
/// extending the imaginary unit `I`.
pub fn splitting_basis<T: Real>(unit: &Octonion<T>) -> Result<[Octonion<T>; 8]> {
    if !unit.is_imaginary_unit(T::tol(1e-10)) {
        return Err(Error::NotImaginaryUnit);
    }
    let mut basis = vec![Octonion::one(), *unit];
    while basis.len() < 8 {
        let next = (1..8)
            .map(|m| {
                let mut v = Octonion::basis(m);
                for b in &basis {
                    v -= b.scale(v.dot(b));
                }
                v
            })
            .max_by(|p, q| p.norm_sqr().partial_cmp(&q.norm_sqr()).unwrap())
            .expect("seven seed directions");
        let j = next.scale(next.norm().recip());
        basis.push(j);
        basis.push(*unit * j);
    }
    Ok(basis.try_into().expect("eight basis elements"))
}
