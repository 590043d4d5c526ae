//! Extremal functions and certified random corpora.
//!
//! Unit-ball entries are bounded by 1 on the ball; half-space entries have
//! real part at most 1. Each entry is checked against its certificate when it
//! is generated and regenerated if the check fails.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::functionals::{coefficient_bounds_check, BoundMode};
use crate::octonion::Octonion;
use crate::series::SliceSeries;

type O = Octonion<f64>;
type Series = SliceSeries<f64>;

/// Truncation order used when nothing else is requested.
pub const DEFAULT_ORDER: usize = 300;

/// Radius of the sampled sphere used by the certificates.
pub const SAMPLE_RADIUS: f64 = 0.95;

const CERT_TOL: f64 = 1e-9;
const MAX_ATTEMPTS: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    UnitBall,
    Halfspace,
}

impl CertificateKind {
    pub fn bound_mode(self) -> BoundMode {
        match self {
            CertificateKind::UnitBall => BoundMode::UnitBall,
            CertificateKind::Halfspace => BoundMode::Halfspace,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// Tightest coefficient margin against the bound of `kind`.
    pub coefficient_margin: f64,
    /// Largest sampled `|f|` (unit ball) or `Re f` (half-space) on `|x| = sample_radius`.
    pub sampled_max: f64,
    /// Truncation tail at `sample_radius`; the check is `sampled_max <= 1 + tail`.
    pub tail: f64,
    pub sample_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub constructor: String,
    /// Family parameters `a_i` (and dilations / weights where used).
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub units: Vec<O>,
    pub seed: u64,
    pub index: u64,
}

impl Provenance {
    /// Canonical key used to order violations.
    pub fn key(&self) -> (u64, u64, &str) {
        (self.seed, self.index, &self.constructor)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub series: Series,
    pub certificate: Certificate,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub schema: u32,
    pub entries: Vec<CorpusEntry>,
}

fn check_a(a: f64) -> Result<()> {
    check_range("a", a, "[0, 1)", (0.0..1.0).contains(&a))
}

fn check_unit(u: &O) -> Result<()> {
    check_range("|u|", u.norm(), "{1}", (u.norm() - 1.0).abs() <= 1e-12)
}

/// `f_a(x) = (1 - xa)^{-.} * (a - x) u`, i.e. `a0 = a u`, `a_k = -(1 - a^2) a^{k-1} u`.
pub fn make_f_a(a: f64, u: O, order: usize) -> Result<Series> {
    check_a(a)?;
    check_unit(&u)?;
    let order = order.max(1);
    let b = 1.0 - a * a;
    let mut c = Vec::with_capacity(order + 1);
    c.push(u.scale(a));
    let mut ak = 1.0;
    for _ in 1..=order {
        c.push(u.scale(-b * ak));
        ak *= a;
    }
    // ak = a^order, the largest discarded |a_k| / (1 - a^2)
    Ok(SliceSeries::truncated(c, b * ak))
}

/// `f_a` through the reciprocal of `1 - xa` and one slice product.
pub fn make_f_a_via_reciprocal(a: f64, u: O, order: usize) -> Result<Series> {
    check_a(a)?;
    check_unit(&u)?;
    let denom = SliceSeries::from_real_coeffs(&[1.0, -a]);
    let numer = SliceSeries::polynomial(vec![u.scale(a), -u]);
    let mut f = denom.slice_reciprocal(order.max(1))?.slice_product(&numer);
    f.set_tail_bound(Some((1.0 - a * a) * a.powi(order.max(1) as i32)));
    Ok(f)
}

/// `g_a(x) = a - 2 (1 - a) x (1 - x)^{-.} u`: `a0 = a`, `a_k = -2 (1 - a) u`.
pub fn make_g_a(a: f64, u: O, order: usize) -> Result<Series> {
    check_a(a)?;
    check_unit(&u)?;
    let mut c = vec![O::from_real(a)];
    c.extend((0..order.max(1)).map(|_| u.scale(-2.0 * (1.0 - a))));
    Ok(SliceSeries::truncated(c, 2.0 * (1.0 - a)))
}

/// `g_a(rho x)` with `u = 1`: `a_k = -2 (1 - a) rho^k`.
pub fn make_g_a_dilated(a: f64, rho: f64, order: usize) -> Result<Series> {
    check_a(a)?;
    check_range("rho", rho, "(0, 1]", rho > 0.0 && rho <= 1.0)?;
    let order = order.max(1);
    let mut c = vec![O::from_real(a)];
    let mut rk = 1.0;
    for _ in 1..=order {
        rk *= rho;
        c.push(O::from_real(-2.0 * (1.0 - a) * rk));
    }
    Ok(SliceSeries::truncated(c, 2.0 * (1.0 - a) * rk * rho))
}

/// Counter-based seeding: one independent stream per `(seed, index, attempt)`.
pub fn entry_rng(seed: u64, index: u64, attempt: u64) -> ChaCha8Rng {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    ChaCha8Rng::seed_from_u64(mix(mix(mix(seed) ^ index) ^ attempt))
}

/// `a` skewed towards 1, where the extremal behaviour lives.
fn draw_a<R: Rng>(rng: &mut R) -> f64 {
    let t: f64 = rng.random();
    (1.0 - t * t * t).clamp(0.0, 0.999_999)
}

/// Checks the unit-ball certificate: coefficient bound and sampled sup norm.
pub fn certify_unit_ball(series: &Series) -> Option<Certificate> {
    let coeff = coefficient_bounds_check(series, BoundMode::UnitBall);
    let est = series.sup_norm_estimate(SAMPLE_RADIUS, 8, 96);
    let tail = est.with_tail - est.sampled;
    (coeff.holds && est.sampled <= 1.0 + CERT_TOL + tail).then_some(Certificate {
        kind: CertificateKind::UnitBall,
        coefficient_margin: coeff.worst_margin,
        sampled_max: est.sampled,
        tail,
        sample_radius: SAMPLE_RADIUS,
    })
}

/// Checks the half-space certificate: coefficient bound, real `a0 in [0, 1)`,
/// and sampled `Re f <= 1`.
pub fn certify_halfspace(series: &Series) -> Option<Certificate> {
    let coeff = coefficient_bounds_check(series, BoundMode::Halfspace);
    let a0 = series.coeff(0);
    if a0.im().norm() > 1e-10 || !(0.0..1.0).contains(&a0.re()) {
        return None;
    }
    let tail = series.tail_at(SAMPLE_RADIUS);
    let mut re_max = f64::NEG_INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0b0e);
    let mut units = vec![O::i()];
    units.extend((0..7).map(|_| O::random_imaginary_unit(&mut rng)));
    for u in &units {
        for j in 0..96 {
            let theta = std::f64::consts::TAU * j as f64 / 96.0;
            let x = O::from_slice(SAMPLE_RADIUS * theta.cos(), SAMPLE_RADIUS * theta.sin(), *u);
            if let Ok(v) = series.evaluate(&x) {
                re_max = re_max.max(v.re());
            }
        }
    }
    (coeff.holds && re_max <= 1.0 + CERT_TOL + tail).then_some(Certificate {
        kind: CertificateKind::Halfspace,
        coefficient_margin: coeff.worst_margin,
        sampled_max: re_max,
        tail,
        sample_radius: SAMPLE_RADIUS,
    })
}

fn unit_ball_candidate(rng: &mut ChaCha8Rng, seed: u64, index: u64, order: usize) -> Result<CorpusEntry> {
    let prov = |constructor: &str, params, weights, units| Provenance {
        constructor: constructor.to_string(),
        params,
        weights,
        units,
        seed,
        index,
    };
    let (series, provenance) = match index % 5 {
        0 => {
            let (a, u) = (draw_a(rng), O::random_unit(rng));
            (make_f_a(a, u, order)?, prov("f_a", vec![a], vec![], vec![u]))
        }
        1 => {
            // (phi_a u) * (phi_b v) = (phi_a phi_b) (u v) for real Moebius phi
            let n = rng.random_range(2..=3);
            let params: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let units: Vec<O> = (0..n).map(|_| O::random_unit(rng)).collect();
            let mut f = make_f_a(params[0], units[0], order)?;
            for (a, u) in params.iter().zip(&units).skip(1) {
                f = f.slice_product(&make_f_a(*a, *u, order)?);
            }
            let bound = 1.0 - f.coeff(0).norm_sqr();
            f.set_tail_bound(Some(bound));
            (f, prov("f_a-product", params, vec![], units))
        }
        2 => {
            let n = rng.random_range(2..=3);
            let params: Vec<f64> = (0..n).map(|_| draw_a(rng)).collect();
            let units: Vec<O> = (0..n).map(|_| O::random_unit(rng)).collect();
            let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
            let mut f = make_f_a(params[0], units[0], order)?.combine(weights[0], &Series::constant(O::zero()), 0.0);
            for i in 1..n {
                f = f.combine(1.0, &make_f_a(params[i], units[i], order)?, weights[i]);
            }
            let bound = 1.0 - f.coeff(0).norm_sqr();
            f.set_tail_bound(Some(bound.max(0.0)));
            (f, prov("f_a-convex", params, weights, units))
        }
        3 => {
            let degree = rng.random_range(1..=8);
            let coeffs: Vec<O> = (0..=degree)
                .map(|_| {
                    let c: [f64; 8] = std::array::from_fn(|_| rng.sample(StandardNormal));
                    O::from_coords(c)
                })
                .collect();
            let raw = SliceSeries::polynomial(coeffs);
            let bound = raw.sup_norm_bound(1.0, 512);
            if !(bound > 0.0 && bound.is_finite()) {
                return Err(Error::Corpus("zero polynomial drawn".into()));
            }
            let scale = 1.0 / bound;
            let coeffs = raw.coeffs().iter().map(|c| c.scale(scale)).collect();
            (SliceSeries::polynomial(coeffs), prov("polynomial", vec![scale], vec![], vec![]))
        }
        _ => {
            let u = O::random_unit(rng);
            let t: f64 = rng.random();
            (SliceSeries::constant(u.scale(t)), prov("constant", vec![t], vec![], vec![u]))
        }
    };
    let certificate = certify_unit_ball(&series)
        .ok_or_else(|| Error::Corpus(format!("unit-ball certificate failed for {}", provenance.constructor)))?;
    Ok(CorpusEntry { series, certificate, provenance })
}

/// One certified unit-ball entry, reproducible from `(seed, index)`.
pub fn random_unit_ball_function(seed: u64, index: u64, order: usize) -> Result<CorpusEntry> {
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = entry_rng(seed, index, attempt);
        match unit_ball_candidate(&mut rng, seed, index, order) {
            Ok(e) => return Ok(e),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Corpus("no attempts".into())))
}

/// Convex combination of `count` half-space extremals `g_{a_i}(rho_i x)`.
pub fn random_halfspace_function(seed: u64, index: u64, count: usize, order: usize) -> Result<CorpusEntry> {
    let count = count.max(1);
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = entry_rng(seed, index, attempt);
        let params: Vec<f64> = (0..count).map(|_| rng.random::<f64>().min(0.999_999)).collect();
        let rhos: Vec<f64> = (0..count)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { rng.random_range(0.3..1.0) })
            .collect();
        let raw: Vec<f64> = (0..count).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let series = convex_halfspace(&params, &rhos, &weights, order)?;
        let mut all = params.clone();
        all.extend(&rhos);
        let provenance = Provenance {
            constructor: if count == 1 { "g_a".into() } else { "g_a-convex".into() },
            params: all,
            weights,
            units: vec![],
            seed,
            index,
        };
        match certify_halfspace(&series) {
            Some(certificate) => return Ok(CorpusEntry { series, certificate, provenance }),
            None => last = Some(Error::Corpus("half-space certificate failed".into())),
        }
    }
    Err(last.unwrap_or_else(|| Error::Corpus("no attempts".into())))
}

/// `sum_i w_i g_{a_i}(rho_i x)`.
pub fn convex_halfspace(params: &[f64], rhos: &[f64], weights: &[f64], order: usize) -> Result<Series> {
    let mut f = Series::constant(O::zero());
    for ((&a, &rho), &w) in params.iter().zip(rhos).zip(weights) {
        check_range("weight", w, "[0, 1]", (0.0..=1.0).contains(&w))?;
        f = f.combine(1.0, &make_g_a_dilated(a, rho, order)?, w);
    }
    Ok(f)
}

/// `size` certified unit-ball entries for indices `0..size`.
pub fn unit_ball_corpus(seed: u64, size: usize, order: usize) -> Result<Vec<CorpusEntry>> {
    use rayon::prelude::*;
    (0..size as u64)
        .into_par_iter()
        .map(|i| random_unit_ball_function(seed, i, order))
        .collect()
}

/// `size` certified half-space entries; entry `i` mixes `1 + i % 3` extremals.
pub fn halfspace_corpus(seed: u64, size: usize, order: usize) -> Result<Vec<CorpusEntry>> {
    use rayon::prelude::*;
    (0..size as u64)
        .into_par_iter()
        .map(|i| random_halfspace_function(seed, i, 1 + (i % 3) as usize, order))
        .collect()
}

pub fn to_json(entries: &[CorpusEntry]) -> Result<String> {
    let file = CorpusFile { schema: 1, entries: entries.to_vec() };
    serde_json::to_string_pretty(&file).map_err(|e| Error::Serde(e.to_string()))
}

pub fn from_json(text: &str) -> Result<Vec<CorpusEntry>> {
    let file: CorpusFile = serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))?;
    if file.schema != 1 {
        return Err(Error::Serde(format!("unsupported corpus schema {}", file.schema)));
    }
    Ok(file.entries)
}

pub fn save(path: &Path, entries: &[CorpusEntry]) -> std::io::Result<()> {
    let text = to_json(entries).map_err(std::io::Error::other)?;
    std::fs::write(path, text)
}

pub fn load(path: &Path) -> std::io::Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text).map_err(std::io::Error::other)
}
