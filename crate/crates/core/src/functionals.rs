//! Bohr-type functionals of a power series `sum x^k a_k` at radius `r = |x|`.
//!
//! Every functional is split as `head + body`, where `head` is the
//! contribution of `a0` and `body` collects everything else, so that the
//! distance to the threshold `1` can be formed as `body - (1 - head)`
//! without cancellation. The truncation `tail` is an upper bound for the
//! terms dropped beyond the stored order; "at most 1" claims are checked on
//! the tail-inflated value.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::scalar::{one_minus_pow, Real};
use crate::series::SliceSeries;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue<T> {
    pub head: T,
    /// `1 - head`, computed accurately.
    pub head_deficit: T,
    pub body: T,
    pub tail: T,
}

impl<T: Real> FunctionalValue<T> {
    pub fn value(&self) -> T {
        self.head + self.body
    }

    /// `value - 1`.
    pub fn excess(&self) -> T {
        self.body - self.head_deficit
    }

    pub fn inflated_value(&self) -> T {
        self.value() + self.tail
    }

    pub fn inflated_excess(&self) -> T {
        self.excess() + self.tail
    }

    fn add_body(mut self, body: T, tail: T) -> Self {
        self.body = self.body + body;
        self.tail = self.tail + tail;
        self
    }
}

/// A sum over `k >= 1` with its truncation bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounded<T> {
    pub value: T,
    pub tail: T,
}

fn check_radius<T: Real>(r: T) -> Result<()> {
    if r >= T::zero() && r < T::one() {
        Ok(())
    } else {
        Err(Error::OutsideBall { modulus: r.as_f64() })
    }
}

/// `B^2 * weight` with `B` the uniform tail coefficient bound; zero for
/// polynomials or an empty weight, infinite when `B` is unknown.
fn squared_tail<T: Real>(f: &SliceSeries<T>, weight: T) -> T {
    if f.is_polynomial() || weight == T::zero() {
        return T::zero();
    }
    match f.tail_bound() {
        Some(b) => b * b * weight,
        None => T::infinity(),
    }
}

/// `sum_{k >= 1} r^k |a_k|`, the majorant series without its constant term.
pub fn majorant<T: Real>(f: &SliceSeries<T>, r: T) -> Result<Bounded<T>> {
    check_radius(r)?;
    let mut rk = T::one();
    let mut sum = T::zero();
    for a in f.coeffs().iter().skip(1) {
        rk = rk * r;
        sum = sum + rk * a.norm();
    }
    Ok(Bounded { value: sum, tail: f.tail_at(r) })
}

/// `sum_{k >= 1} r^{2k} |a_k|^2`.
pub fn majorant_squares<T: Real>(f: &SliceSeries<T>, r: T) -> Result<Bounded<T>> {
    check_radius(r)?;
    let r2 = r * r;
    let mut rk = T::one();
    let mut sum = T::zero();
    for a in f.coeffs().iter().skip(1) {
        rk = rk * r2;
        sum = sum + rk * a.norm_sqr();
    }
    let tail = squared_tail(f, r2.powi(f.order() as i32 + 1) / (T::one() - r2));
    Ok(Bounded { value: sum, tail })
}

/// `S*(r) = sum_{k >= 1} k r^{2k} |a_k|^2`.
pub fn s_star<T: Real>(f: &SliceSeries<T>, r: T) -> Result<Bounded<T>> {
    check_radius(r)?;
    let rho = r * r;
    let mut rk = T::one();
    let mut sum = T::zero();
    for (k, a) in f.coeffs().iter().enumerate().skip(1) {
        rk = rk * rho;
        sum = sum + T::lit(k as f64) * rk * a.norm_sqr();
    }
    // sum_{k > N} k rho^k = rho^{N+1} ((N + 1) - N rho) / (1 - rho)^2
    let n = T::lit(f.order() as f64);
    let one = T::one();
    let tail = squared_tail(
        f,
        rho.powi(f.order() as i32 + 1) * ((n + one) - n * rho) / ((one - rho) * (one - rho)),
    );
    Ok(Bounded { value: sum, tail })
}

fn check_m<T: Real>(m: T, max: f64) -> Result<()> {
    let range = if max == 2.0 { "(0, 2]" } else { "(0, 1]" };
    check_range("m", m.as_f64(), range, m > T::zero() && m <= T::lit(max))
}

fn head_power<T: Real>(f: &SliceSeries<T>, m: T) -> FunctionalValue<T> {
    let t = f.coeff(0).norm();
    FunctionalValue {
        head: t.powf(m),
        head_deficit: one_minus_pow(t, m),
        body: T::zero(),
        tail: T::zero(),
    }
}

/// `A(r) = |a0|^m + sum_{k >= 1} r^k |a_k|`, `m in (0, 2]`.
pub fn functional_a<T: Real>(f: &SliceSeries<T>, r: T, m: T) -> Result<FunctionalValue<T>> {
    check_m(m, 2.0)?;
    let maj = majorant(f, r)?;
    Ok(head_power(f, m).add_body(maj.value, maj.tail))
}

/// `B(x) = A(|x|) + lambda |f(x) - a0|^q` at the point `x`.
pub fn functional_b<T: Real>(
    f: &SliceSeries<T>,
    x: &crate::Octonion<T>,
    m: T,
    lambda: T,
    q: T,
) -> Result<FunctionalValue<T>> {
    let r = x.norm();
    check_radius(r)?;
    let deviation = (f.evaluate(x)? - f.coeff(0)).norm();
    functional_b_with_deviation(f, r, deviation, m, lambda, q)
}

/// `A(r) + lambda d^q` for a precomputed deviation `d = |f(x) - a0|`, `|x| = r`.
pub fn functional_b_with_deviation<T: Real>(
    f: &SliceSeries<T>,
    r: T,
    deviation: T,
    m: T,
    lambda: T,
    q: T,
) -> Result<FunctionalValue<T>> {
    check_range("lambda", lambda.as_f64(), "[0, inf)", lambda >= T::zero())?;
    check_range("q", q.as_f64(), "[1, inf)", q >= T::one())?;
    let a = functional_a(f, r, m)?;
    let tail_a = f.tail_at(r);
    let refined = lambda * deviation.powf(q);
    let refined_tail = if lambda == T::zero() {
        T::zero()
    } else {
        lambda * (deviation + tail_a).powf(q) - refined
    };
    Ok(a.add_body(refined, refined_tail))
}

/// `C(r) = A(r) + (1/(1 + |a0|) + r/(1 - r)) sum_{k >= 1} r^{2k} |a_k|^2`, `m in (0, 1]`.
pub fn functional_c<T: Real>(f: &SliceSeries<T>, r: T, m: T) -> Result<FunctionalValue<T>> {
    check_m(m, 1.0)?;
    let a = functional_a(f, r, m)?;
    let weight = (T::one() + f.coeff(0).norm()).recip() + r / (T::one() - r);
    let sq = majorant_squares(f, r)?;
    Ok(a.add_body(weight * sq.value, weight * sq.tail))
}

/// `Q(w) = sum_i d_i w^i` for `d = (d_1, ..., d_N)`.
pub fn q_poly<T: Real>(d: &[T], w: T) -> T {
    d.iter().rev().fold(T::zero(), |acc, &c| (acc + c) * w)
}

/// `D(r) = A(r) + Q(S*(r))`, `m in (0, 1]`, `d_i >= 0`.
pub fn functional_d<T: Real>(
    f: &SliceSeries<T>,
    r: T,
    m: T,
    d: &[T],
) -> Result<FunctionalValue<T>> {
    check_m(m, 1.0)?;
    for &c in d {
        check_range("d_i", c.as_f64(), "[0, inf)", c >= T::zero())?;
    }
    let a = functional_a(f, r, m)?;
    let s = s_star(f, r)?;
    let q = q_poly(d, s.value);
    let q_tail = if s.tail == T::zero() || d.iter().all(|&c| c == T::zero()) {
        T::zero()
    } else {
        q_poly(d, s.value + s.tail) - q
    };
    Ok(a.add_body(q, q_tail))
}

/// Real constant term, required by the half-space functionals.
pub fn real_constant_term<T: Real>(f: &SliceSeries<T>) -> Result<T> {
    let a0 = f.coeff(0);
    let imag = a0.im().norm();
    if imag > T::tol(1e-10) {
        return Err(Error::NonRealConstantTerm { imag: imag.as_f64() });
    }
    let re = a0.re();
    check_range("a0", re.as_f64(), "(-1, inf)", re > -T::one())?;
    Ok(re)
}

/// `E(r) = sum_{k >= 0} r^k |a_k| + (1/(1 + a0) + r/(1 - r)) sum_{k >= 1} r^{2k} |a_k|^2`
/// for real `a0`.
pub fn functional_e<T: Real>(f: &SliceSeries<T>, r: T) -> Result<FunctionalValue<T>> {
    let a0 = real_constant_term(f)?;
    let maj = majorant(f, r)?;
    let weight = (T::one() + a0).recip() + r / (T::one() - r);
    let sq = majorant_squares(f, r)?;
    let head = a0.abs();
    Ok(FunctionalValue {
        head,
        head_deficit: T::one() - head,
        body: maj.value + weight * sq.value,
        tail: maj.tail + weight * sq.tail,
    })
}

/// `F(r) = E(r) + beta S*(r)`, `beta >= 0`.
pub fn functional_f<T: Real>(f: &SliceSeries<T>, r: T, beta: T) -> Result<FunctionalValue<T>> {
    check_range("beta", beta.as_f64(), "[0, inf)", beta >= T::zero())?;
    let e = functional_e(f, r)?;
    let s = s_star(f, r)?;
    Ok(e.add_body(beta * s.value, beta * s.tail))
}

/// `dist(f(0), {Re x = 1}) = 1 - Re a0`.
pub fn halfspace_distance<T: Real>(f: &SliceSeries<T>) -> Result<T> {
    let re = f.coeff(0).re();
    if re > T::one() {
        return Err(Error::OutsideHalfspace { re: re.as_f64() });
    }
    Ok(T::one() - re)
}

/// Distance form `Re a0 + sum_{k >= 1} r^k |a_k|`; it is at most 1 exactly
/// when the majorant is bounded by `dist(f(0), {Re x = 1})`.
pub fn functional_distance<T: Real>(f: &SliceSeries<T>, r: T) -> Result<FunctionalValue<T>> {
    let dist = halfspace_distance(f)?;
    let maj = majorant(f, r)?;
    Ok(FunctionalValue {
        head: f.coeff(0).re(),
        head_deficit: dist,
        body: maj.value,
        tail: maj.tail,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// `|f| <= 1` on the ball: `|a_k| <= 1 - |a0|^2`.
    UnitBall,
    /// `Re f <= 1` on the ball: `|a_k| <= 2 (1 - Re a0)`.
    Halfspace,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientCheck<T> {
    pub holds: bool,
    /// `min_k (bound - |a_k|)`; equals `bound` for constants.
    pub worst_margin: T,
    pub worst_index: Option<usize>,
    pub bound: T,
}

/// Checks the coefficient bound of `mode` for every stored `k >= 1`.
pub fn coefficient_bounds_check<T: Real>(f: &SliceSeries<T>, mode: BoundMode) -> CoefficientCheck<T> {
    let a0 = f.coeff(0);
    let bound = match mode {
        BoundMode::UnitBall => T::one() - a0.norm_sqr(),
        BoundMode::Halfspace => T::lit(2.0) * (T::one() - a0.re()),
    };
    let tol = T::tol(1e-12) * T::one().max(bound.abs());
    let mut worst_margin = bound;
    let mut worst_index = None;
    for (k, a) in f.coeffs().iter().enumerate().skip(1) {
        let margin = bound - a.norm();
        if margin < worst_margin || worst_index.is_none() {
            worst_margin = margin;
            worst_index = Some(k);
        }
    }
    if let Some(b) = f.tail_bound() {
        if b > T::zero() && bound - b < worst_margin {
            worst_margin = bound - b;
            worst_index = None;
        }
    }
    CoefficientCheck {
        holds: bound >= -tol && worst_margin >= -tol,
        worst_margin,
        worst_index,
        bound,
    }
}

/// `(1 - t^m) / (1 - t)` for `t in [0, 1)`.
pub fn power_ratio<T: Real>(t: T, m: T) -> T {
    one_minus_pow(t, m) / (T::one() - t)
}
