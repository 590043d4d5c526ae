//! Bohr radii and the constants feeding the coefficient condition.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusMethod {
    ClosedForm,
    BracketedRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult<T> {
    pub value: T,
    pub method: RadiusMethod,
    /// Defining equation evaluated at `value`.
    pub residual: T,
    /// Final bracket in `r`; `None` for closed forms.
    pub bracket: Option<(T, T)>,
}

impl<T: Real> RadiusResult<T> {
    fn closed(value: T) -> Self {
        RadiusResult {
            value,
            method: RadiusMethod::ClosedForm,
            residual: T::zero(),
            bracket: None,
        }
    }
}

/// Root of `f` on `[lo, hi]` by bisection followed by two Newton steps.
/// Returns the root and the last bracket.
pub fn bracketed_root<T: Real>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    lo: T,
    hi: T,
) -> Result<(T, (T, T))> {
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == T::zero() {
        return Ok((lo, (lo, lo)));
    }
    if fhi == T::zero() {
        return Ok((hi, (hi, hi)));
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let width = T::tol(1e-13);
    for _ in 0..400 {
        if hi - lo <= width {
            break;
        }
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            lo = mid;
            hi = mid;
            break;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = lo + (hi - lo) / T::lit(2.0);
    for _ in 0..2 {
        let (fx, d) = (f(x), df(x));
        if d == T::zero() || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if next >= lo && next <= hi && f(next).abs() <= fx.abs() {
            x = next;
        }
    }
    Ok((x, (lo, hi)))
}

/// `R_m = m / (2 + m)`, `m in (0, 2]`.
pub fn radius_r_m<T: Real>(m: T) -> Result<RadiusResult<T>> {
    check_range("m", m.as_f64(), "(0, 2]", m > T::zero() && m <= T::lit(2.0))?;
    Ok(RadiusResult::closed(m / (T::lit(2.0) + m)))
}

/// Root in `(0, 1)` of `-m/2 + s + c s^p = 0` with `s = r / (1 - r)`.
fn power_equation_root<T: Real>(m: T, c: T, p: T) -> Result<RadiusResult<T>> {
    let half_m = m / T::lit(2.0);
    let h = |s: T| s + c * s.powf(p) - half_m;
    let dh = |s: T| T::one() + c * p * s.powf(p - T::one());
    let (s, (slo, shi)) = bracketed_root(h, dh, T::zero(), half_m)?;
    let to_r = |s: T| s / (T::one() + s);
    let r = to_r(s);
    let sr = r / (T::one() - r);
    Ok(RadiusResult {
        value: r,
        method: RadiusMethod::BracketedRoot,
        residual: sr + c * sr.powf(p) - half_m,
        bracket: Some((to_r(slo), to_r(shi))),
    })
}

/// `R_{m,lambda,q}`: the root of `-m/2 + r/(1-r) + lambda (r/(1-r))^q = 0`.
pub fn radius_r_mlq<T: Real>(m: T, lambda: T, q: T) -> Result<RadiusResult<T>> {
    check_range("m", m.as_f64(), "(0, 2]", m > T::zero() && m <= T::lit(2.0))?;
    check_range("lambda", lambda.as_f64(), "[0, inf)", lambda >= T::zero())?;
    check_range("q", q.as_f64(), "[1, inf)", q >= T::one())?;
    power_equation_root(m, lambda, q)
}

/// `R*_{m,lambda,j}`: the root of `-m/2 + r/(1-r) + lambda 2^{j-1} (r/(1-r))^j = 0`.
pub fn radius_rstar_mlj<T: Real>(m: T, lambda: T, j: T) -> Result<RadiusResult<T>> {
    check_range("m", m.as_f64(), "(0, 1]", m > T::zero() && m <= T::one())?;
    check_range("lambda", lambda.as_f64(), "[0, inf)", lambda >= T::zero())?;
    check_range("j", j.as_f64(), "[1, inf)", j >= T::one())?;
    let c = lambda * T::lit(2.0).powf(j - T::one());
    power_equation_root(m, c, j)
}

/// `3r^3 - 5r^2 - 3r + 1`.
pub fn cubic<T: Real>(r: T) -> T {
    ((T::lit(3.0) * r - T::lit(5.0)) * r - T::lit(3.0)) * r + T::one()
}

/// The root of `3r^3 - 5r^2 - 3r + 1` in `(0, 1)`, bracketed on `[0, 1/3]`.
pub fn radius_rstar_cubic<T: Real>() -> Result<RadiusResult<T>> {
    let d = |r: T| (T::lit(9.0) * r - T::lit(10.0)) * r - T::lit(3.0);
    let (r, bracket) = bracketed_root(cubic, d, T::zero(), T::one() / T::lit(3.0))?;
    Ok(RadiusResult {
        value: r,
        method: RadiusMethod::BracketedRoot,
        residual: cubic(r),
        bracket: Some(bracket),
    })
}

/// `R(a0) = 1 / (5 - 2 a0)`, `a0 in [0, 1)`.
pub fn radius_r_a0<T: Real>(a0: T) -> Result<RadiusResult<T>> {
    check_range("a0", a0.as_f64(), "[0, 1)", a0 >= T::zero() && a0 < T::one())?;
    Ok(RadiusResult::closed((T::lit(5.0) - T::lit(2.0) * a0).recip()))
}

/// `x (1 + x)^2 (1 - x^2)^{2k-2}`.
pub fn c_k_objective<T: Real>(k: u32, x: T) -> T {
    let one = T::one();
    x * (one + x) * (one + x) * (one - x * x).powi(2 * k as i32 - 2)
}

/// `c_k = max_{x in [0,1]} x (1 + x)^2 (1 - x^2)^{2k-2}` for `k >= 2`.
///
/// The maximiser is located on a 10^4-point grid and refined by bisection on
/// the sign of the logarithmic derivative, which is a positive multiple of
/// `1 + 2x - (2n + 3) x^2` with `n = 2k - 2`.
pub fn c_k_constant<T: Real>(k: u32) -> Result<T> {
    check_range("k", k as f64, "[2, inf)", k >= 2)?;
    let n = T::lit(2.0 * k as f64 - 2.0);
    let slope = |x: T| T::one() + T::lit(2.0) * x - (T::lit(2.0) * n + T::lit(3.0)) * x * x;
    const GRID: usize = 10_000;
    let step = T::one() / T::lit(GRID as f64);
    let best = (0..=GRID)
        .map(|i| T::lit(i as f64) * step)
        .map(|x| (x, c_k_objective(k, x)))
        .fold((T::zero(), T::neg_infinity()), |acc, p| if p.1 > acc.1 { p } else { acc })
        .0;
    let lo = (best - step).max(T::zero());
    let hi = (best + step).min(T::one());
    let ddslope = |x: T| T::lit(2.0) - T::lit(2.0) * (T::lit(2.0) * n + T::lit(3.0)) * x;
    let (x, _) = bracketed_root(slope, ddslope, lo, hi)?;
    Ok(c_k_objective(k, x))
}

/// `M_m = m (2 + m) / (4m + 4)`.
pub fn m_m<T: Real>(m: T) -> T {
    m * (T::lit(2.0) + m) / (T::lit(4.0) * m + T::lit(4.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LCondition<T> {
    pub l_value: T,
    pub m_m: T,
    pub holds: bool,
}

/// `L(d) = 8 d_1 M_m^2 + sum_{k >= 2} 2 (2k - 1) c_k d_k M_m^{2k}`, compared with `m`.
pub fn l_condition<T: Real>(d: &[T], m: T) -> Result<LCondition<T>> {
    check_range("m", m.as_f64(), "(0, 1]", m > T::zero() && m <= T::one())?;
    for &c in d {
        check_range("d_i", c.as_f64(), "[0, inf)", c >= T::zero())?;
    }
    let mm = m_m(m);
    let mut l_value = T::zero();
    for (i, &dk) in d.iter().enumerate() {
        if dk == T::zero() {
            continue;
        }
        let k = i as u32 + 1;
        let factor = if k == 1 {
            T::lit(8.0)
        } else {
            T::lit(2.0 * (2 * k - 1) as f64) * c_k_constant(k)?
        };
        l_value = l_value + factor * dk * mm.powi(2 * k as i32);
    }
    Ok(LCondition {
        l_value,
        m_m: mm,
        holds: l_value <= m + T::tol(1e-12),
    })
}

/// `G(t)` governing the half-space radius with the `beta S*` term.
pub fn g_poly<T: Real>(t: T, beta: T) -> T {
    let c = |x: f64| T::lit(x);
    let base = ((((c(-4.0) * t + c(32.0)) * t - c(82.0)) * t + c(58.0)) * t + c(38.0)) * t - c(42.0);
    let with_beta = ((((c(-4.0) * t + c(20.0)) * t - c(21.0)) * t - c(20.0)) * t) + c(25.0);
    base + beta * with_beta
}

/// `G'(t)`.
pub fn g_poly_derivative<T: Real>(t: T, beta: T) -> T {
    let c = |x: f64| T::lit(x);
    let base = (((c(-20.0) * t + c(128.0)) * t - c(246.0)) * t + c(116.0)) * t + c(38.0);
    let with_beta = ((c(-16.0) * t + c(60.0)) * t - c(42.0)) * t - c(20.0);
    base + beta * with_beta
}
