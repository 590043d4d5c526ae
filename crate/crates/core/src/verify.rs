//! Theorem-level verification: evaluate a functional over a certified corpus
//! on a radius grid, probe sharpness with the extremal families, and sweep.

use std::fmt;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{self, CertificateKind, CorpusEntry, Provenance};
use crate::error::{check_range, Error, Result};
use crate::functionals::{self, FunctionalValue};
use crate::octonion::Octonion;
use crate::radii::{self, RadiusResult};
use crate::series::SliceSeries;

type O = Octonion<f64>;
type Series = SliceSeries<f64>;

/// Angles in `[0, pi]` sampled when a functional depends on the point itself.
const DEVIATION_ANGLES: usize = 33;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    /// `A <= 1` for `r <= m/(2+m)`, `|f| <= 1`.
    Thm14,
    /// `B <= 1` for `r <= R_{m,lambda,q}`, `|f| <= 1`.
    Bs12,
    /// `C <= 1` for `r <= m/(2+m)`, `m <= 1`, `|f| <= 1`.
    Thm15,
    /// `D <= 1` for `r <= m/(2+m)` under the coefficient condition, `|f| <= 1`.
    Bs13,
    /// `A + lambda |f - a0|^j <= 1` for `r <= R*_{m,lambda,j}`, `Re f <= 1`.
    Th15,
    /// `E <= 1` for `r <= R*`, `Re f <= 1`.
    Thm17,
    /// `F <= 1` for `r <= 1/(5 - 2 a0)`, `Re f <= 1`.
    Theom17,
    /// `sum_{k >= 1} r^k |a_k| <= 1 - Re a0` for `r <= 1/3`, `Re f <= 1`.
    ThmF,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::Thm14,
        TheoremId::Bs12,
        TheoremId::Thm15,
        TheoremId::Bs13,
        TheoremId::Th15,
        TheoremId::Thm17,
        TheoremId::Theom17,
        TheoremId::ThmF,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm14 => "thm14",
            TheoremId::Bs12 => "bs12",
            TheoremId::Thm15 => "thm15",
            TheoremId::Bs13 => "bs13",
            TheoremId::Th15 => "th15",
            TheoremId::Thm17 => "thm17",
            TheoremId::Theom17 => "theom17",
            TheoremId::ThmF => "thmF",
        }
    }

    pub fn certificate(self) -> CertificateKind {
        match self {
            TheoremId::Thm14 | TheoremId::Bs12 | TheoremId::Thm15 | TheoremId::Bs13 => {
                CertificateKind::UnitBall
            }
            _ => CertificateKind::Halfspace,
        }
    }

    /// Whether the radius depends on the entry through `a0`.
    pub fn radius_per_entry(self) -> bool {
        self == TheoremId::Theom17
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let names: Vec<_> = TheoremId::ALL.iter().map(|t| t.as_str()).collect();
                format!("unknown theorem `{s}`, expected one of {}", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BohrParams {
    pub m: f64,
    pub lambda: f64,
    pub q: f64,
    pub j: f64,
    pub d: Vec<f64>,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
}

impl Default for BohrParams {
    fn default() -> Self {
        BohrParams {
            m: 1.0,
            lambda: 1.0,
            q: 2.0,
            j: 2.0,
            d: Vec::new(),
            beta: 8.0 / 9.0,
            a0: None,
        }
    }
}

/// The radius of `theorem`; `a0` is used only where the radius depends on it.
pub fn theorem_radius(theorem: TheoremId, p: &BohrParams, a0: f64) -> Result<RadiusResult<f64>> {
    match theorem {
        TheoremId::Thm14 => radii::radius_r_m(p.m),
        TheoremId::Bs12 => radii::radius_r_mlq(p.m, p.lambda, p.q),
        TheoremId::Thm15 => {
            check_range("m", p.m, "(0, 1]", p.m > 0.0 && p.m <= 1.0)?;
            radii::radius_r_m(p.m)
        }
        TheoremId::Bs13 => {
            let l = radii::l_condition(&p.d, p.m)?;
            if !l.holds {
                return Err(Error::LConditionViolated { l_value: l.l_value, m: p.m });
            }
            radii::radius_r_m(p.m)
        }
        TheoremId::Th15 => radii::radius_rstar_mlj(p.m, p.lambda, p.j),
        TheoremId::Thm17 => radii::radius_rstar_cubic(),
        TheoremId::Theom17 => {
            check_range("beta", p.beta, "[0, inf)", p.beta >= 0.0)?;
            radii::radius_r_a0(a0)
        }
        TheoremId::ThmF => Ok(RadiusResult {
            value: 1.0 / 3.0,
            method: radii::RadiusMethod::ClosedForm,
            residual: 0.0,
            bracket: None,
        }),
    }
}

/// Checks the parameters of `theorem` without evaluating anything.
pub fn validate_params(theorem: TheoremId, p: &BohrParams) -> Result<()> {
    let a0 = p.a0.unwrap_or(0.0);
    theorem_radius(theorem, p, a0).map(|_| ())?;
    match theorem {
        TheoremId::Bs12 | TheoremId::Th15 => {
            check_range("lambda", p.lambda, "[0, inf)", p.lambda >= 0.0)?;
        }
        TheoremId::Bs13 => {
            for &d in &p.d {
                check_range("d_i", d, "[0, inf)", d >= 0.0)?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// `max_{|x| = r} |f(x) - a0|`, exact over the sphere of units and sampled in the angle.
pub fn max_deviation(f: &Series, r: f64) -> f64 {
    let mut c = f.coeffs().to_vec();
    c[0] = O::zero();
    let g = SliceSeries::with_tail(c, f.tail_bound());
    (0..DEVIATION_ANGLES)
        .map(|i| std::f64::consts::PI * i as f64 / (DEVIATION_ANGLES - 1) as f64)
        .map(|theta| g.sphere_max_modulus(Complex::from_polar(r, theta)))
        .fold(0.0, f64::max)
}

/// The functional of `theorem` at radius `r`, maximised over `|x| = r` where it
/// depends on the point.
pub fn theorem_functional(theorem: TheoremId, p: &BohrParams, f: &Series, r: f64) -> Result<FunctionalValue<f64>> {
    match theorem {
        TheoremId::Thm14 => functionals::functional_a(f, r, p.m),
        TheoremId::Bs12 => {
            functionals::functional_b_with_deviation(f, r, max_deviation(f, r), p.m, p.lambda, p.q)
        }
        TheoremId::Thm15 => functionals::functional_c(f, r, p.m),
        TheoremId::Bs13 => functionals::functional_d(f, r, p.m, &p.d),
        TheoremId::Th15 => {
            functionals::functional_b_with_deviation(f, r, max_deviation(f, r), p.m, p.lambda, p.j)
        }
        TheoremId::Thm17 => functionals::functional_e(f, r),
        TheoremId::Theom17 => functionals::functional_f(f, r, p.beta),
        TheoremId::ThmF => functionals::functional_distance(f, r),
    }
}

/// The theorem's functional at the real point `x = r`, where the extremal
/// families attain their worst case.
fn functional_at_real_point(theorem: TheoremId, p: &BohrParams, f: &Series, r: f64) -> Result<FunctionalValue<f64>> {
    match theorem {
        TheoremId::Bs12 | TheoremId::Th15 => {
            let dev = (f.evaluate(&O::from_real(r))? - f.coeff(0)).norm();
            let q = if theorem == TheoremId::Bs12 { p.q } else { p.j };
            functionals::functional_b_with_deviation(f, r, dev, p.m, p.lambda, q)
        }
        _ => theorem_functional(theorem, p, f, r),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub corpus_size: usize,
    pub seed: u64,
    pub tol: f64,
    pub grid: usize,
    pub order: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            corpus_size: 100,
            seed: 0,
            tol: 1e-9,
            grid: 64,
            order: corpus::DEFAULT_ORDER,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Radii checked; for per-entry radii these are fractions of each entry's radius.
    pub r_values: Vec<f64>,
    pub per_entry_radius: bool,
    pub corpus_seed: u64,
    pub corpus_size: usize,
    pub corpus_kind: CertificateKind,
    pub truncation_order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub provenance: Provenance,
    pub r: f64,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timestamp {
    pub started_unix_ms: u128,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub theorem: TheoremId,
    pub params: BohrParams,
    pub radius: RadiusResult<f64>,
    pub grid: GridSpec,
    pub tolerance: f64,
    /// Largest tail-inflated functional value.
    pub max_value: f64,
    /// `-max(value + tail - 1)`; negative beyond `-tolerance` iff there are violations.
    pub margin: f64,
    pub violations: Vec<Violation>,
    pub timestamp: Timestamp,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))
    }
}

/// Runs `f` on a pool capped by `OCTOBOHR_THREADS` when set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("OCTOBOHR_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// The corpus matching the hypotheses of `theorem`.
pub fn corpus_for(theorem: TheoremId, seed: u64, size: usize, order: usize) -> Result<Vec<CorpusEntry>> {
    match theorem.certificate() {
        CertificateKind::UnitBall => corpus::unit_ball_corpus(seed, size, order),
        CertificateKind::Halfspace => corpus::halfspace_corpus(seed, size, order),
    }
}

/// `n` equally spaced points from 0 to `hi` inclusive.
pub fn grid_points(hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

fn entry_a0(e: &CorpusEntry) -> f64 {
    e.series.coeff(0).re()
}

/// Verifies `theorem` on a freshly generated certified corpus.
pub fn run_verification(theorem: TheoremId, params: &BohrParams, opts: &VerifyOptions) -> Result<VerificationReport> {
    validate_params(theorem, params)?;
    let corpus = with_thread_cap(|| corpus_for(theorem, opts.seed, opts.corpus_size, opts.order))?;
    verify_corpus(theorem, params, opts, &corpus)
}

/// Verifies `theorem` on the given entries, which must carry the matching certificate.
pub fn verify_corpus(
    theorem: TheoremId,
    params: &BohrParams,
    opts: &VerifyOptions,
    corpus: &[CorpusEntry],
) -> Result<VerificationReport> {
    let started = Instant::now();
    let started_unix_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    validate_params(theorem, params)?;
    if let Some(e) = corpus.iter().find(|e| e.certificate.kind != theorem.certificate()) {
        return Err(Error::Corpus(format!(
            "entry {} has a {:?} certificate, {} needs {:?}",
            e.provenance.index,
            e.certificate.kind,
            theorem,
            theorem.certificate()
        )));
    }
    let per_entry = theorem.radius_per_entry();
    let report_a0 = params
        .a0
        .unwrap_or_else(|| corpus.iter().map(entry_a0).fold(f64::INFINITY, f64::min).clamp(0.0, 1.0 - 1e-12));
    let radius = theorem_radius(theorem, params, report_a0)?;
    let fractions = grid_points(1.0, opts.grid);

    type Row = (f64, f64, Vec<Violation>);
    let rows: Result<Vec<Row>> = with_thread_cap(|| {
        corpus
            .par_iter()
            .map(|e| -> Result<Row> {
                let rad = if per_entry {
                    theorem_radius(theorem, params, entry_a0(e))?.value
                } else {
                    radius.value
                };
                let mut max_value = f64::NEG_INFINITY;
                let mut max_excess = f64::NEG_INFINITY;
                let mut violations = Vec::new();
                for &t in &fractions {
                    let r = t * rad;
                    let v = theorem_functional(theorem, params, &e.series, r)?;
                    let excess = v.inflated_excess();
                    max_value = max_value.max(v.inflated_value());
                    max_excess = max_excess.max(excess);
                    if excess > opts.tol || excess.is_nan() {
                        violations.push(Violation {
                            provenance: e.provenance.clone(),
                            r,
                            value: v.inflated_value(),
                        });
                    }
                }
                Ok((max_value, max_excess, violations))
            })
            .collect()
    });
    let rows = rows?;
    let max_value = rows.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let max_excess = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
    let mut violations: Vec<Violation> = rows.into_iter().flat_map(|r| r.2).collect();
    violations.sort_by(|a, b| {
        a.provenance
            .key()
            .cmp(&b.provenance.key())
            .then(a.r.total_cmp(&b.r))
    });
    let r_values = if per_entry {
        fractions
    } else {
        fractions.iter().map(|t| t * radius.value).collect()
    };
    Ok(VerificationReport {
        schema: 1,
        theorem,
        params: params.clone(),
        radius,
        grid: GridSpec {
            r_values,
            per_entry_radius: per_entry,
            corpus_seed: opts.seed,
            corpus_size: corpus.len(),
            corpus_kind: theorem.certificate(),
            truncation_order: opts.order,
        },
        tolerance: opts.tol,
        max_value,
        margin: -max_excess,
        violations,
        timestamp: Timestamp {
            started_unix_ms,
            runtime_ms: started.elapsed().as_millis(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub theorem: TheoremId,
    pub r: f64,
    pub a: f64,
    pub radius: f64,
    pub value: FunctionalValue<f64>,
    /// `value - 1`; positive means the functional exceeds 1.
    pub excess: f64,
}

impl ProbeResult {
    pub fn demonstrates_sharpness(&self) -> bool {
        self.excess > 0.0
    }
}

/// Evaluates the functional of `theorem` on its extremal family (`f_a` for the
/// unit-ball theorems, `g_a` for the half-space ones) at the real point `r`.
///
/// `r` must lie beyond the radius, except for the `beta` form with
/// `beta > 8/9`, which is probed at the radius itself.
pub fn sharpness_probe(theorem: TheoremId, params: &BohrParams, r: f64, a: f64, order: usize) -> Result<ProbeResult> {
    check_range("a", a, "[0, 1)", (0.0..1.0).contains(&a))?;
    check_range("r", r, "[0, 1)", (0.0..1.0).contains(&r))?;
    validate_params(theorem, params)?;
    let radius = theorem_radius(theorem, params, a)?.value;
    let beyond_critical_beta = theorem == TheoremId::Theom17 && params.beta > 8.0 / 9.0;
    let inside = if beyond_critical_beta { r < radius } else { r <= radius };
    if inside {
        return Err(Error::ProbeMisuse { r, radius });
    }
    let f = extremal(theorem, a, order)?;
    let value = functional_at_real_point(theorem, params, &f, r)?;
    Ok(ProbeResult {
        theorem,
        r,
        a,
        radius,
        value,
        excess: value.excess(),
    })
}

/// The extremal family member used for `theorem`.
pub fn extremal(theorem: TheoremId, a: f64, order: usize) -> Result<Series> {
    match theorem.certificate() {
        CertificateKind::UnitBall => corpus::make_f_a(a, O::one(), order),
        CertificateKind::Halfspace => corpus::make_g_a(a, O::one(), order),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub r: f64,
    pub max_functional: f64,
    /// 1 while `r` is within the theorem's radius, 0 beyond it.
    pub radius_marker: u8,
}

/// Maximum of the theorem's functional over `series` at each `r` in the grid.
pub fn sweep(
    theorem: TheoremId,
    params: &BohrParams,
    series: &[Series],
    r_values: &[f64],
    radius: f64,
) -> Result<Vec<SweepRow>> {
    with_thread_cap(|| {
        r_values
            .par_iter()
            .map(|&r| {
                let mut best = f64::NEG_INFINITY;
                for f in series {
                    best = best.max(theorem_functional(theorem, params, f, r)?.value());
                }
                Ok(SweepRow {
                    r,
                    max_functional: best,
                    radius_marker: u8::from(r <= radius),
                })
            })
            .collect()
    })
}
