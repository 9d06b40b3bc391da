//! Distribution functions and weighted Lorentz quasi-norms L^{p,q}(w),
//! including the weak (q = infinity) case.
//!
//! The distribution function λ(s) = w({|f| > s}) of a piecewise power f with a
//! piecewise power weight w is exactly A + Σ C_j s^{γ_j} between consecutive
//! "critical" levels (piece endpoint values and levels where a superlevel
//! boundary crosses a breakpoint of w). The s-integral is therefore taken
//! band by band: adaptive Simpson in log s inside bands (where λ is smooth),
//! and analytic power-law tails at both ends, detected by Richardson-style
//! exponent stabilization on geometric panels.

use crate::error::{Error, Result};
use crate::funcspace::PiecewisePower;

/// Lorentz exponents; `q = f64::INFINITY` selects the weak quasi-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzParams {
    pub p: f64,
    pub q: f64,
}

impl LorentzParams {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::DegenerateExponent(p));
        }
        if !(q > 0.0) {
            return Err(Error::DegenerateExponent(q));
        }
        Ok(LorentzParams { p, q })
    }

    /// q = p (the Lebesgue case L^p(w)).
    pub fn diagonal(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn is_weak(&self) -> bool {
        self.q.is_infinite()
    }
}

/// λ(s) = w({|f| > s}).
pub fn distribution(f: &PiecewisePower, w: &PiecewisePower, s: f64) -> Result<f64> {
    assert!(s > 0.0, "distribution requires s > 0");
    let mut total = 0.0;
    for (lo, hi) in f.superlevel(s) {
        total += w.integrate_extended(lo, hi)?;
    }
    Ok(total)
}

/// Levels where the band structure of λ can change: values of f at piece
/// endpoints, constant piece values, and the levels at which a superlevel
/// boundary of a power piece crosses a breakpoint of w.
fn critical_levels(f: &PiecewisePower, w: &PiecewisePower) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    let breaks = f.breakpoints();
    let w_breaks: Vec<f64> = w.finite_breakpoints().collect();
    for (i, piece) in f.pieces().iter().enumerate() {
        if piece.coeff <= 0.0 {
            continue;
        }
        let (c, a) = (piece.coeff, piece.exponent);
        if a == 0.0 {
            out.push(c);
            continue;
        }
        for b in [breaks[i], breaks[i + 1]] {
            if b.is_finite() && b != 0.0 {
                out.push(c * b.abs().powf(a));
            }
        }
        for &bw in &w_breaks {
            if bw != 0.0 {
                out.push(c * bw.abs().powf(a));
            }
        }
    }
    out.retain(|s| s.is_finite() && *s > 0.0);
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * b.abs());
    out
}

/// Adaptive Simpson for a fallible integrand, relative tolerance `tol`.
fn adaptive_simpson(
    g: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        g: &impl Fn(f64) -> Result<f64>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (g(lm)?, g(rm)?);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        Ok(recurse(g, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)?
            + recurse(g, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)?)
    }
    if b <= a {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (g(a)?, g(m)?, g(b)?);
    let whole = simpson(fa, fm, fb, b - a);
    let scale = whole.abs().max(1e-300);
    recurse(g, a, b, fa, fm, fb, whole, tol * scale, 40)
}

/// Local power-law fit of λ near an endpoint: steps geometrically from `s0`
/// (halving when `down`, doubling otherwise) until the fitted exponent of
/// λ(s) ~ c s^γ stabilizes. Returns (s, λ(s), γ) at the stopping point.
fn stable_power_fit(
    lam: &impl Fn(f64) -> Result<f64>,
    s0: f64,
    down: bool,
) -> Result<(f64, f64, f64)> {
    let ratio: f64 = if down { 0.5 } else { 2.0 };
    let mut s = s0;
    let mut v = lam(s)?;
    let mut prev_gamma = f64::NAN;
    for _ in 0..400 {
        let s2 = s * ratio;
        let v2 = lam(s2)?;
        if v <= 0.0 || v2 <= 0.0 {
            return Ok((s, 0.0, 0.0));
        }
        let gamma = (v2 / v).ln() / ratio.ln();
        if prev_gamma.is_finite() && (gamma - prev_gamma).abs() < 1e-9 * (1.0 + gamma.abs()) {
            return Ok((s2, v2, gamma));
        }
        prev_gamma = gamma;
        s = s2;
        v = v2;
    }
    Err(Error::Unsupported(
        "distribution function did not approach a power law at the integration boundary".into(),
    ))
}

/// Weighted Lorentz quasi-norm ‖f‖_{L^{p,q}(w)}.
pub fn lorentz_norm(f: &PiecewisePower, w: &PiecewisePower, params: &LorentzParams) -> Result<f64> {
    if params.is_weak() {
        return weak_norm(f, w, params.p);
    }
    let (p, q) = (params.p, params.q);
    let lam = |s: f64| distribution(f, w, s);
    let mut crit = critical_levels(f, w);
    let sup = f.sup_value();
    if sup == 0.0 {
        return Ok(0.0);
    }
    if sup.is_finite() {
        crit.push(sup);
        crit.sort_by(|a, b| a.partial_cmp(b).unwrap());
        crit.dedup();
    }
    if crit.is_empty() {
        crit.push(1.0);
    }

    // integrand of the norm^q in t = ln s: p s^q λ(s)^{q/p}
    let g = |t: f64| -> Result<f64> {
        let s = t.exp();
        Ok(p * s.powf(q) * lam(s)?.powf(q / p))
    };

    let mut acc = 0.0;
    for pair in crit.windows(2) {
        // λ jumps exactly at band edges; evaluate strictly inside the band
        let (s1, s2) = (pair[0], pair[1]);
        let gb = |t: f64| -> Result<f64> {
            let s = t.exp().clamp(s1 * (1.0 + 5e-14), s2 * (1.0 - 5e-14));
            Ok(p * s.powf(q) * lam(s)?.powf(q / p))
        };
        acc += adaptive_simpson(&gb, s1.ln(), s2.ln(), 1e-9)?;
    }

    // lower tail (0, crit[0]): λ(s) -> A + C s^γ; integrate the stabilized
    // power law analytically once panels reach it
    let s_lo = crit[0] * (1.0 - 1e-12);
    {
        let mut s = s_lo;
        let mut last_gamma = f64::NAN;
        loop {
            let v1 = lam(s)?;
            let v2 = lam(0.5 * s)?;
            let gamma = if v1 > 0.0 && v2 > 0.0 {
                (v2 / v1).ln() / 0.5f64.ln()
            } else {
                0.0
            };
            if v1 == 0.0 || (last_gamma.is_finite() && (gamma - last_gamma).abs() < 1e-9) {
                // analytic: ∫_0^s p t^{q-1} (v1 (t/s)^γ)^{q/p} dt
                let expn = q + gamma * q / p;
                if v1 > 0.0 {
                    if expn <= 0.0 {
                        return Err(Error::Divergent("lorentz norm: s -> 0"));
                    }
                    acc += p * v1.powf(q / p) * s.powf(q) / expn;
                }
                break;
            }
            last_gamma = gamma;
            acc += adaptive_simpson(&g, (0.5 * s).ln(), s.ln(), 1e-10)?;
            s *= 0.5;
            if s < s_lo * 2f64.powi(-400) {
                return Err(Error::Unsupported(
                    "no power-law behavior of the distribution as s -> 0".into(),
                ));
            }
        }
    }

    // upper tail (crit.last, ∞) when f is unbounded
    if sup.is_infinite() {
        let mut s = crit.last().unwrap() * (1.0 + 1e-12);
        let mut last_gamma = f64::NAN;
        loop {
            let v1 = lam(s)?;
            if v1 == 0.0 {
                break;
            }
            let v2 = lam(2.0 * s)?;
            let gamma = if v2 > 0.0 { (v2 / v1).ln() / 2f64.ln() } else { f64::NEG_INFINITY };
            if last_gamma.is_finite() && (gamma - last_gamma).abs() < 1e-9 {
                let expn = q + gamma * q / p;
                if expn >= 0.0 {
                    return Err(Error::Divergent("lorentz norm: s -> inf"));
                }
                acc += p * v1.powf(q / p) * s.powf(q) / (-expn);
                break;
            }
            last_gamma = gamma;
            acc += adaptive_simpson(&g, s.ln(), (2.0 * s).ln(), 1e-10)?;
            s *= 2.0;
            if !s.is_finite() {
                return Err(Error::Divergent("lorentz norm: s -> inf"));
            }
        }
    }

    Ok(acc.powf(1.0 / q))
}

/// Weak quasi-norm ‖f‖_{L^{p,∞}(w)} = sup_s s λ(s)^{1/p}.
pub fn weak_norm(f: &PiecewisePower, w: &PiecewisePower, p: f64) -> Result<f64> {
    assert!(p > 1.0);
    let lam = |s: f64| distribution(f, w, s);
    let h = |s: f64| -> Result<f64> { Ok(s * lam(s)?.powf(1.0 / p)) };
    let sup = f.sup_value();
    if sup == 0.0 {
        return Ok(0.0);
    }
    let mut crit = critical_levels(f, w);
    if sup.is_finite() {
        crit.push(sup);
    }
    if crit.is_empty() {
        crit.push(1.0);
    }
    crit.sort_by(|a, b| a.partial_cmp(b).unwrap());
    crit.dedup();

    let mut best: f64 = 0.0;
    for &s in &crit {
        best = best.max(h(s * (1.0 - 1e-12))?);
        best = best.max(h(s * (1.0 + 1e-12))?);
    }
    // interior bands: golden-section in log s
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    for pair in crit.windows(2) {
        let (mut a, mut b) = (pair[0].ln(), pair[1].ln());
        let eval = |t: f64| h(t.exp());
        let mut x1 = b - GOLDEN * (b - a);
        let mut x2 = a + GOLDEN * (b - a);
        let (mut f1, mut f2) = (eval(x1)?, eval(x2)?);
        for _ in 0..48 {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + GOLDEN * (b - a);
                f2 = eval(x2)?;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - GOLDEN * (b - a);
                f1 = eval(x1)?;
            }
        }
        best = best.max(f1.max(f2));
    }
    // s -> 0 end: h ~ s^{1 + γ/p}
    {
        let (s, v, gamma) = stable_power_fit(&lam, crit[0] * (1.0 - 1e-12), true)?;
        if v > 0.0 {
            let e = 1.0 + gamma / p;
            if e < -1e-9 {
                return Err(Error::Divergent("weak norm: s -> 0"));
            }
            if e.abs() <= 1e-9 {
                best = best.max(s * v.powf(1.0 / p));
            }
        }
    }
    // s -> ∞ end when f is unbounded
    if sup.is_infinite() {
        let (s, v, gamma) = stable_power_fit(&lam, crit.last().unwrap() * (1.0 + 1e-12), false)?;
        if v > 0.0 {
            let e = 1.0 + gamma / p;
            if e > 1e-9 {
                return Err(Error::Divergent("weak norm: s -> inf"));
            }
            if e.abs() <= 1e-9 {
                best = best.max(s * v.powf(1.0 / p));
            }
        }
    }
    Ok(best)
}
