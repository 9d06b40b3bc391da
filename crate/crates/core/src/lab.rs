//! Experiment orchestration: delta-sweeps over weight families, power-law
//! exponent fitting, falsification of the double-A_infty estimate, dual
//! operator calibration, and JSON/CSV persistence.
//!
//! Maximal-function norms have no closed form, so they are *bracketed*:
//! the witnesses are nonnegative, supported in `[0, 1]` and nonincreasing
//! there, which makes `M f` exactly `F(x)/x` on the positive axis (with
//! `F` the running integral), monotone on each side of the origin, and
//! equal to `I/x` past the support.  Step envelopes built from node values
//! therefore bound `M f` rigorously above and below, stay piecewise-power,
//! and feed the exact Lorentz-norm machinery.

use crate::error::{Error, Result};
use crate::funcspace::{Interval, Piece, PiecewisePower};
use crate::lorentz::{lorentz_norm, LorentzParams};
use crate::theory::{dual_bound, BoundInputs};
use crate::weights::{a1_two_weight, ainfty_fujii_wilson, ap_constant, SearchConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// The sweep families of Section 4 and the dual corollary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "buckley")]
    Buckley,
    #[serde(rename = "step-weight")]
    StepWeight,
    #[serde(rename = "double-ainfty-falsification")]
    DoubleAinftyFalsification,
    #[serde(rename = "dual-A1", alias = "dual-a1")]
    DualA1,
}

impl Family {
    pub fn slug(&self) -> &'static str {
        match self {
            Family::Buckley => "buckley",
            Family::StepWeight => "step-weight",
            Family::DoubleAinftyFalsification => "double-ainfty-falsification",
            Family::DualA1 => "dual-A1",
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DomainSpec {
    pub lo: f64,
    pub hi: f64,
}

impl Default for DomainSpec {
    fn default() -> Self {
        DomainSpec { lo: -1e4, hi: 1e4 }
    }
}

fn default_deltas() -> Vec<f64> {
    (1..=10).map(|j| 2f64.powi(-j)).collect()
}

fn default_levels() -> u32 {
    48
}

fn default_cn() -> f64 {
    1.0
}

fn default_tolerance() -> f64 {
    0.15
}

/// A self-contained sweep description; deserializes from the JSON schema
/// `{family, p, q, deltas[], domain:{lo,hi}, grid_levels, cn, tolerance}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: Family,
    pub p: f64,
    pub q: f64,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub domain: DomainSpec,
    #[serde(default = "default_levels")]
    pub grid_levels: u32,
    #[serde(default = "default_cn")]
    pub cn: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl SweepConfig {
    pub fn new(family: Family, p: f64, q: f64) -> Self {
        SweepConfig {
            family,
            p,
            q,
            deltas: default_deltas(),
            domain: DomainSpec::default(),
            grid_levels: default_levels(),
            cn: default_cn(),
            tolerance: default_tolerance(),
        }
    }

    pub fn with_deltas(mut self, deltas: Vec<f64>) -> Self {
        self.deltas = deltas;
        self
    }

    pub fn with_grid_levels(mut self, levels: u32) -> Self {
        self.grid_levels = levels;
        self
    }

    pub fn with_cn(mut self, cn: f64) -> Self {
        self.cn = cn;
        self
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: SweepConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn interval(&self) -> Result<Interval> {
        Interval::new(self.domain.lo, self.domain.hi)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0) || !(self.q > 0.0) {
            return Err(Error::Unsupported(format!(
                "need p > 1 and q > 0, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if self.deltas.is_empty() || self.deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
            return Err(Error::Unsupported("deltas must lie in (0, 1)".into()));
        }
        if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Unsupported("deltas must be strictly decreasing".into()));
        }
        self.interval()?;
        if !(self.domain.lo < 0.0 && self.domain.hi > 1.0) {
            return Err(Error::Unsupported("domain must contain [-1, 1] strictly".into()));
        }
        match self.family {
            Family::Buckley if self.p > self.q => {
                Err(Error::Unsupported("buckley family requires p <= q".into()))
            }
            Family::StepWeight if self.q > self.p => {
                Err(Error::Unsupported("step-weight family requires q <= p".into()))
            }
            Family::DualA1 if !(self.q > 1.0) || self.q.is_infinite() => {
                Err(Error::Unsupported("dual family requires q in (1, inf)".into()))
            }
            _ => Ok(()),
        }
    }
}

/// One row per delta; `value_lo`/`value_hi` bracket the measured quantity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta: f64,
    pub value_lo: f64,
    pub value_hi: f64,
    pub constant_ap: f64,
    pub constant_ainfty_sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_ainfty_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

/// Least-squares fit of one reported quantity against delta, with the
/// predicted slope and the pass/fail verdict at the stored tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitRecord {
    pub name: String,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Build environment captured in every persisted record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvironmentInfo {
    pub package: String,
    pub version: String,
}

impl Default for EnvironmentInfo {
    fn default() -> Self {
        EnvironmentInfo {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    #[serde(default)]
    pub environment: EnvironmentInfo,
    pub rows: Vec<SweepRow>,
    pub fits: Vec<FitRecord>,
    pub verdict: bool,
}

impl SweepReport {
    /// CSV table using the fixed row schema.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta,value_lo,value_hi,constant_ap,constant_ainfty_sigma\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.delta, r.value_lo, r.value_hi, r.constant_ap, r.constant_ainfty_sigma
            ));
        }
        out
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Writes `<family>_p<p>_q<q>.json` and `.csv` under `dir`; returns
    /// both paths.
    pub fn persist(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let stem = format!("{}_p{}_q{}", self.config.family.slug(), self.config.p, self.config.q);
        let json_path = dir.join(format!("{stem}.json"));
        let csv_path = dir.join(format!("{stem}.csv"));
        std::fs::write(&json_path, serde_json::to_string_pretty(self)?)?;
        std::fs::write(&csv_path, self.to_csv())?;
        Ok((json_path, csv_path))
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "family: {}  p = {}  q = {}  rows = {}\n",
            self.config.family.slug(),
            self.config.p,
            self.config.q,
            self.rows.len()
        ));
        for f in &self.fits {
            let pred = f
                .predicted
                .map(|p| format!("{p:.4}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "  fit {:<24} slope {:+.4}  R2 {:.5}  predicted {:>8}  {}\n",
                f.name,
                f.slope,
                f.r2,
                pred,
                if f.pass { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(&format!("verdict: {}\n", if self.verdict { "pass" } else { "FAIL" }));
        out
    }
}

/// Ordinary least squares on `(log delta, log value)`; returns
/// `(slope, intercept, r_squared)`.
pub fn fit_exponent(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InsufficientPoints);
    }
    if points.iter().any(|&(d, v)| !(d > 0.0) || !(v > 0.0)) {
        return Err(Error::NonPositiveValue);
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Unsupported("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok((slope, intercept, r2))
}

// ---------------------------------------------------------------------------
// Maximal-norm bracketing
// ---------------------------------------------------------------------------

/// Checks that `g` is admissible for the closed-form envelope
/// construction: exactly one active piece `c |x|^a` on `(0, b]` with
/// `a in (-1, 0]`, zero elsewhere.  Returns `(b, c, a)`.
fn envelope_admissible(g: &PiecewisePower) -> Result<(f64, f64, f64)> {
    let mut active: Option<(f64, f64, f64)> = None;
    for (idx, p) in g.pieces().iter().enumerate() {
        if p.coeff == 0.0 {
            continue;
        }
        let (lo, hi) = (g.breakpoints()[idx], g.breakpoints()[idx + 1]);
        if active.is_some() || p.coeff < 0.0 || lo.max(0.0) > 0.0 || !hi.is_finite() {
            return Err(Error::Unsupported(
                "envelope construction needs a single power piece on (0, b]".into(),
            ));
        }
        if !(p.exponent > -1.0 && p.exponent <= 0.0) {
            return Err(Error::Unsupported(format!(
                "envelope piece exponent must lie in (-1, 0], got {}",
                p.exponent
            )));
        }
        active = Some((hi, p.coeff, p.exponent));
    }
    active.ok_or(Error::DegenerateWeight)
}

fn chord_piece(x1: f64, v1: f64, x2: f64, v2: f64) -> Piece {
    let exponent = (v2 / v1).ln() / (x2 / x1).ln();
    Piece { coeff: v1 / x1.powf(exponent), exponent }
}

/// Lower and upper piecewise-power envelopes of the uncentered maximal
/// function of `g = c x^a` on `(0, b]`, exact wherever M g has closed
/// form and bracketed by log-log chord bounds on the concave branch.
///
/// With `F(x) = int_0^x g`, one has `M g(x) = F(x)/x` exactly for `x > 0`
/// (decreasing profile), while `M g(-s) = sup_t F(t)/(t+s)`: the interior
/// stationary point gives the pure power `c (a+1)^a |a|^{-a} s^a` for
/// `s <= b|a|/(a+1)` and `I/(b+s)` (with `I` the total mass) beyond,
/// which is concave in log-log coordinates, so two-point chords bound it
/// below and their extensions past a midpoint bound it above.
fn maximal_envelopes(
    g: &PiecewisePower,
    domain: &Interval,
    levels: u32,
    per_octave: u32,
) -> Result<(PiecewisePower, PiecewisePower)> {
    let (b_sup, c, a) = envelope_admissible(g)?;
    let x_neg = -domain.lo();
    if !(x_neg > b_sup && domain.hi() > b_sup) {
        return Err(Error::Unsupported("domain must strictly contain the support".into()));
    }
    let total = c * b_sup.powf(a + 1.0) / (a + 1.0);
    let q_at = |s: f64| total / (b_sup + s);
    // the stationary branch covers (0, s_star]
    let s_star = if a < 0.0 { b_sup * (-a) / (a + 1.0) } else { 0.0 };

    // geometric ladder of |x| for the concave branch, from s_lo up to
    // x_neg; empty when the stationary branch already covers the domain
    let s_lo = if a < 0.0 { s_star } else { x_neg * 2f64.powf(-(levels as f64)) };
    let ladder: Vec<f64> = if s_lo < x_neg {
        let steps = ((x_neg / s_lo).log2() * per_octave as f64).ceil().max(1.0) as usize;
        let mut v: Vec<f64> = (0..=steps)
            .map(|j| s_lo * (x_neg / s_lo).powf(j as f64 / steps as f64))
            .collect();
        v.dedup();
        v
    } else {
        vec![]
    };

    // assemble pieces from -inf upward
    let mut breaks = vec![f64::NEG_INFINITY, -x_neg];
    let mut lo_pieces = vec![Piece {
        // I/(b+s) >= [I x_neg/(x_neg+b)] |x|^{-1} for s >= x_neg
        coeff: total * x_neg / (x_neg + b_sup),
        exponent: -1.0,
    }];
    let mut hi_pieces = vec![Piece { coeff: total, exponent: -1.0 }];

    // concave branch, outermost cell first; chords bound a log-log
    // concave function below, extended sub-chords bound it above
    for j in (0..ladder.len().saturating_sub(1)).rev() {
        let (s1, s2) = (ladder[j], ladder[j + 1]);
        let sm = (s1 * s2).sqrt();
        let (v1, vm, v2) = (q_at(s1), q_at(sm), q_at(s2));
        let left = chord_piece(s1, v1, sm, vm);
        let right = chord_piece(sm, vm, s2, v2);
        // descending in |x|: cell (-s2, -sm) then (-sm, -s1)
        breaks.push(-sm);
        lo_pieces.push(right);
        hi_pieces.push(left);
        breaks.push(-s1);
        lo_pieces.push(left);
        hi_pieces.push(right);
    }

    // innermost negative region (0, s_lo]
    breaks.push(0.0);
    if a < 0.0 {
        // exact stationary-branch power
        let p = Piece { coeff: c * (a + 1.0).powf(a) * (-a).powf(-a), exponent: a };
        lo_pieces.push(p);
        hi_pieces.push(p);
    } else {
        // Q is squeezed between its endpoint value and its limit at 0
        lo_pieces.push(Piece { coeff: q_at(s_lo), exponent: 0.0 });
        hi_pieces.push(Piece { coeff: q_at(0.0), exponent: 0.0 });
    }

    // positive side is exact: F(x)/x on (0, b], I/x beyond
    breaks.push(b_sup);
    let inner = Piece { coeff: c / (a + 1.0), exponent: a };
    lo_pieces.push(inner);
    hi_pieces.push(inner);
    breaks.push(f64::INFINITY);
    lo_pieces.push(Piece { coeff: total, exponent: -1.0 });
    hi_pieces.push(Piece { coeff: total, exponent: -1.0 });

    let lo = PiecewisePower::new(breaks.clone(), lo_pieces)?;
    let hi = PiecewisePower::new(breaks, hi_pieces)?;
    Ok((lo, hi))
}

/// Brackets a Lorentz norm of `post(M g)` between the norms of the two
/// envelopes, doubling the per-octave grid density until the relative gap
/// drops below 1e-3 (or errors past 1e-2 at the densest grid).  `post`
/// lets the dual sweep turn the envelope of `M(f v)` into an envelope of
/// `T f = M(f v)/w` before taking norms.
fn bracket_norm_with(
    g: &PiecewisePower,
    w: &PiecewisePower,
    params: &LorentzParams,
    domain: &Interval,
    levels: u32,
    post: impl Fn(&PiecewisePower) -> Result<PiecewisePower>,
) -> Result<(f64, f64)> {
    let mut per_octave = 2;
    loop {
        let (lo_env, hi_env) = maximal_envelopes(g, domain, levels, per_octave)?;
        let n_lo = lorentz_norm(&post(&lo_env)?, w, params)?;
        let n_hi = lorentz_norm(&post(&hi_env)?, w, params)?;
        let gap = (n_hi - n_lo) / n_hi.abs().max(f64::MIN_POSITIVE);
        if gap < 1e-3 {
            return Ok((n_lo, n_hi));
        }
        if per_octave >= 16 {
            if gap <= 1e-2 {
                return Ok((n_lo, n_hi));
            }
            return Err(Error::BracketTooWide { got: gap, max: 1e-2 });
        }
        per_octave *= 2;
    }
}

/// Brackets `|| M g ||_{L^{p,q}(w)}`.
pub fn bracket_maximal_norm(
    g: &PiecewisePower,
    w: &PiecewisePower,
    params: &LorentzParams,
    domain: &Interval,
    levels: u32,
) -> Result<(f64, f64)> {
    bracket_norm_with(g, w, params, domain, levels, |env| Ok(env.clone()))
}

// ---------------------------------------------------------------------------
// Sweep families
// ---------------------------------------------------------------------------

/// The power weight `|x|^{(p-1)(1-delta)}`.
pub fn power_weight(p: f64, delta: f64) -> PiecewisePower {
    PiecewisePower::pure_power(1.0, (p - 1.0) * (1.0 - delta))
}

/// The singular witness `f_delta(x) = x^{delta-1}` on `(0, 1]`.
pub fn singular_witness(delta: f64) -> PiecewisePower {
    PiecewisePower::new(
        vec![f64::NEG_INFINITY, 0.0, 1.0, f64::INFINITY],
        vec![
            Piece { coeff: 0.0, exponent: 0.0 },
            Piece { coeff: 1.0, exponent: delta - 1.0 },
            Piece { coeff: 0.0, exponent: 0.0 },
        ],
    )
    .expect("static shape")
}

/// The step weight `delta^{p-1} chi_{[-1,1]} + |x|^{(1-delta)(p-1)}` outside.
pub fn step_weight_family(p: f64, delta: f64) -> PiecewisePower {
    let a = (1.0 - delta) * (p - 1.0);
    PiecewisePower::new(
        vec![f64::NEG_INFINITY, -1.0, 1.0, f64::INFINITY],
        vec![
            Piece { coeff: 1.0, exponent: a },
            Piece { coeff: delta.powf(p - 1.0), exponent: 0.0 },
            Piece { coeff: 1.0, exponent: a },
        ],
    )
    .expect("static shape")
}

fn sigma_weight(w: &PiecewisePower, p: f64) -> Result<PiecewisePower> {
    w.power(1.0 - p / (p - 1.0))
}

fn fit_record(
    name: &str,
    points: &[(f64, f64)],
    predicted: Option<f64>,
    tolerance: f64,
) -> Result<FitRecord> {
    let (slope, intercept, r2) = fit_exponent(points)?;
    let pass = predicted.map(|pr| (slope - pr).abs() <= tolerance).unwrap_or(true);
    Ok(FitRecord { name: name.into(), slope, intercept, r2, predicted, tolerance, pass })
}

/// Conservative two-sided fit: one record per bracket end; both must pass.
fn bracket_fits(
    name: &str,
    rows: &[SweepRow],
    predicted: f64,
    tolerance: f64,
) -> Result<Vec<FitRecord>> {
    let lo: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.value_lo)).collect();
    let hi: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.value_hi)).collect();
    Ok(vec![
        fit_record(&format!("{name}_lo"), &lo, Some(predicted), tolerance)?,
        fit_record(&format!("{name}_hi"), &hi, Some(predicted), tolerance)?,
    ])
}

fn per_delta<T: Send>(
    deltas: &[f64],
    f: impl Fn(f64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    deltas.par_iter().map(|&d| f(d)).collect()
}

/// Section 4, case p <= q: ratio `||M f_delta|| / ||f_delta||` in
/// `L^{p,q}(w_delta)` follows `delta^{-1}`.
pub fn sweep_buckley(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    if cfg.p > cfg.q {
        return Err(Error::Unsupported("buckley sweep requires p <= q".into()));
    }
    let domain = cfg.interval()?;
    let params = LorentzParams::new(cfg.p, cfg.q)?;
    let scfg = SearchConfig::new(domain);
    let rows = per_delta(&cfg.deltas, |delta| {
        let w = power_weight(cfg.p, delta);
        let f = singular_witness(delta);
        let norm_f = lorentz_norm(&f, &w, &params)?;
        let (m_lo, m_hi) = bracket_maximal_norm(&f, &w, &params, &domain, cfg.grid_levels)?;
        let ap = ap_constant(&w, cfg.p, &scfg)?;
        let sigma = sigma_weight(&w, cfg.p)?;
        let ai = ainfty_fujii_wilson(&sigma, &scfg)?;
        Ok(SweepRow {
            delta,
            value_lo: m_lo / norm_f,
            value_hi: m_hi / norm_f,
            constant_ap: ap.value,
            constant_ainfty_sigma: ai.value,
            constant_ainfty_w: None,
            norm_f: Some(norm_f),
            bound: None,
        })
    })?;
    let fits = bracket_fits("ratio", &rows, -1.0, cfg.tolerance)?;
    let verdict = fits.iter().all(|f| f.pass);
    Ok(SweepReport { config: cfg.clone(), environment: EnvironmentInfo::default(), rows, fits, verdict })
}

/// Section 4, case q <= p: `||M chi_[0,1]||_{L^{p,q}(w_delta)}` follows
/// `delta^{-1/q}`, the plain norm matches its closed form, and
/// `[w_delta]_{A_p}` follows `delta^{-(p-1)}`.
pub fn sweep_step_weight(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    if cfg.q > cfg.p {
        return Err(Error::Unsupported("step-weight sweep requires q <= p".into()));
    }
    let domain = cfg.interval()?;
    let params = LorentzParams::new(cfg.p, cfg.q)?;
    let scfg = SearchConfig::new(domain);
    let f = PiecewisePower::indicator(0.0, 1.0)?;
    let rows = per_delta(&cfg.deltas, |delta| {
        let w = step_weight_family(cfg.p, delta);
        let norm_f = lorentz_norm(&f, &w, &params)?;
        let closed = (cfg.p / cfg.q).powf(1.0 / cfg.q) * delta.powf((cfg.p - 1.0) / cfg.p);
        if (norm_f - closed).abs() > 1e-6 * closed {
            return Err(Error::Unsupported(format!(
                "closed-form norm mismatch at delta = {delta}: {norm_f} vs {closed}"
            )));
        }
        let (m_lo, m_hi) = bracket_maximal_norm(&f, &w, &params, &domain, cfg.grid_levels)?;
        let ap = ap_constant(&w, cfg.p, &scfg)?;
        let sigma = sigma_weight(&w, cfg.p)?;
        let ai = ainfty_fujii_wilson(&sigma, &scfg)?;
        Ok(SweepRow {
            delta,
            value_lo: m_lo,
            value_hi: m_hi,
            constant_ap: ap.value,
            constant_ainfty_sigma: ai.value,
            constant_ainfty_w: None,
            norm_f: Some(norm_f),
            bound: None,
        })
    })?;
    let mut fits = bracket_fits("maximal_norm", &rows, -1.0 / cfg.q, cfg.tolerance)?;
    let ap_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.constant_ap)).collect();
    fits.push(fit_record("ap", &ap_pts, Some(-(cfg.p - 1.0)), cfg.tolerance)?);
    let verdict = fits.iter().all(|f| f.pass);
    Ok(SweepReport { config: cfg.clone(), environment: EnvironmentInfo::default(), rows, fits, verdict })
}

/// Section 4 final paragraph: the measured operator ratio divided by
/// `([w]_{A_infty} [sigma]_{A_infty})^{1/p}` grows like `delta^{-(1-1/p)}`
/// as delta drops, so the double-A_infty estimate is false.
pub fn falsify_double_ainfty(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let domain = cfg.interval()?;
    let params = LorentzParams::diagonal(cfg.p)?;
    let scfg = SearchConfig::new(domain);
    let rows = per_delta(&cfg.deltas, |delta| {
        let w = power_weight(cfg.p, delta);
        let f = singular_witness(delta);
        let norm_f = lorentz_norm(&f, &w, &params)?;
        let (m_lo, m_hi) = bracket_maximal_norm(&f, &w, &params, &domain, cfg.grid_levels)?;
        let ap = ap_constant(&w, cfg.p, &scfg)?;
        let ai_w = ainfty_fujii_wilson(&w, &scfg)?;
        let sigma = sigma_weight(&w, cfg.p)?;
        let ai_s = ainfty_fujii_wilson(&sigma, &scfg)?;
        let denom = (ai_w.value * ai_s.value).powf(1.0 / cfg.p);
        Ok(SweepRow {
            delta,
            value_lo: m_lo / norm_f / denom,
            value_hi: m_hi / norm_f / denom,
            constant_ap: ap.value,
            constant_ainfty_sigma: ai_s.value,
            constant_ainfty_w: Some(ai_w.value),
            norm_f: Some(norm_f),
            bound: None,
        })
    })?;
    let mut fits = Vec::new();
    let target = -(1.0 - 1.0 / cfg.p);
    let lo_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.value_lo)).collect();
    let hi_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.value_hi)).collect();
    let (slope_lo, i_lo, r2_lo) = fit_exponent(&lo_pts)?;
    let (slope_hi, i_hi, r2_hi) = fit_exponent(&hi_pts)?;
    // falsification: the normalized ratio must keep growing, so its
    // slope only needs to be *at most* target + tolerance
    fits.push(FitRecord {
        name: "ratio_lo".into(),
        slope: slope_lo,
        intercept: i_lo,
        r2: r2_lo,
        predicted: Some(target),
        tolerance: cfg.tolerance,
        pass: slope_lo <= target + cfg.tolerance,
    });
    fits.push(FitRecord {
        name: "ratio_hi".into(),
        slope: slope_hi,
        intercept: i_hi,
        r2: r2_hi,
        predicted: Some(target),
        tolerance: cfg.tolerance,
        pass: slope_hi <= target + cfg.tolerance,
    });
    let aiw_pts: Vec<(f64, f64)> =
        rows.iter().map(|r| (r.delta, r.constant_ainfty_w.unwrap())).collect();
    fits.push(fit_record("ainfty_w", &aiw_pts, Some(0.0), cfg.tolerance)?);
    let ais_pts: Vec<(f64, f64)> =
        rows.iter().map(|r| (r.delta, r.constant_ainfty_sigma)).collect();
    fits.push(fit_record("ainfty_sigma", &ais_pts, Some(-1.0), cfg.tolerance)?);
    // strictly increasing along decreasing deltas, on the conservative end
    let increasing = rows.windows(2).all(|w| w[1].value_lo > w[0].value_hi * (1.0 - 1e-9));
    let verdict = increasing && fits.iter().all(|f| f.pass);
    Ok(SweepReport { config: cfg.clone(), environment: EnvironmentInfo::default(), rows, fits, verdict })
}

/// Dual operator `T f = M(f v)/w` with `v = w = |x|^{-(1-delta)}`: the
/// measured `L^{p',q'}` ratio stays below `dual_bound` times the
/// calibration constant `cn` for every delta.
pub fn sweep_dual(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    if cfg.family != Family::DualA1 && !(cfg.q > 1.0 && cfg.q.is_finite()) {
        return Err(Error::Unsupported("dual sweep requires q in (1, inf)".into()));
    }
    let domain = cfg.interval()?;
    let pp = cfg.p / (cfg.p - 1.0);
    let qp = cfg.q / (cfg.q - 1.0);
    let params = LorentzParams::new(pp, qp)?;
    let scfg = SearchConfig::new(domain);
    let f = PiecewisePower::indicator(0.0, 1.0)?;
    let rows = per_delta(&cfg.deltas, |delta| {
        let alpha = 1.0 - delta;
        let w = PiecewisePower::pure_power(1.0, -alpha);
        let norm_f = lorentz_norm(&f, &w, &params)?; // v = w
        let g = f.product(&w); // f v = x^{-alpha} on (0, 1]
        let inv_w = w.power(-1.0)?;
        let (t_lo, t_hi) = bracket_norm_with(&g, &w, &params, &domain, cfg.grid_levels, |env| {
            Ok(env.product(&inv_w))
        })?;
        let a1 = a1_two_weight(&w, &w, &scfg)?;
        let bound = dual_bound(
            &BoundInputs::new(cfg.p, cfg.q)?.with_a1(a1.value.max(1.0), a1.value.max(1.0)),
        )?;
        Ok(SweepRow {
            delta,
            value_lo: t_lo / norm_f,
            value_hi: t_hi / norm_f,
            constant_ap: a1.value,
            constant_ainfty_sigma: f64::NAN,
            constant_ainfty_w: None,
            norm_f: Some(norm_f),
            bound: Some(bound),
        })
    })?;
    let mut fits = Vec::new();
    let hi_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.value_hi)).collect();
    fits.push(fit_record("measured_hi", &hi_pts, None, cfg.tolerance)?);
    let bd_pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta, r.bound.unwrap())).collect();
    fits.push(fit_record("bound", &bd_pts, None, cfg.tolerance)?);
    let calibrated = rows.iter().all(|r| r.value_hi <= r.bound.unwrap() * cfg.cn);
    let verdict = calibrated;
    Ok(SweepReport { config: cfg.clone(), environment: EnvironmentInfo::default(), rows, fits, verdict })
}

/// Dispatches to the family-specific sweep.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    match cfg.family {
        Family::Buckley => sweep_buckley(cfg),
        Family::StepWeight => sweep_step_weight(cfg),
        Family::DoubleAinftyFalsification => falsify_double_ainfty(cfg),
        Family::DualA1 => sweep_dual(cfg),
    }
}
