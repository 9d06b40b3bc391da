//! Closed-form evaluators for the operator-norm bounds and the
//! log-convexity lemma.  Everything here is a pure formula: the empirical
//! counterparts (sweeps, fits, falsification) live in [`crate::lab`].
//!
//! Unknown dimensional constants are explicit parameters (`cn`, `a`) and
//! are never folded into the returned values silently.

use crate::error::{Error, Result};
use crate::funcspace::PiecewisePower;

/// Holder conjugate p' = p/(p-1).
pub fn conjugate(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Inputs to the bound evaluators.  `p`, `q` are the Lorentz exponents
/// (`q` may be `f64::INFINITY`); the remaining fields are the weight
/// constants each formula consumes, the dimension `n`, the calibration
/// constant `cn`, and the sublinear-operator constant `a` (|T1| <= a*1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub p: f64,
    pub q: f64,
    pub apc: f64,
    pub ainfty_sigma: f64,
    pub ainfty_w: f64,
    pub a1_vw: f64,
    pub a1_w: f64,
    pub n: u32,
    pub cn: f64,
    pub a: f64,
}

impl BoundInputs {
    /// All constants default to the degenerate value 1 (or 0 for `a`);
    /// set the ones a given formula needs.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0) || p.is_infinite() {
            return Err(Error::Unsupported(format!("need 1 < p < inf, got p = {p}")));
        }
        if !(q > 0.0) {
            return Err(Error::Unsupported(format!("need q > 0, got q = {q}")));
        }
        Ok(BoundInputs {
            p,
            q,
            apc: 1.0,
            ainfty_sigma: 1.0,
            ainfty_w: 1.0,
            a1_vw: 1.0,
            a1_w: 1.0,
            n: 1,
            cn: 1.0,
            a: 0.0,
        })
    }

    pub fn with_apc(mut self, apc: f64) -> Self {
        self.apc = apc;
        self
    }

    pub fn with_ainfty_sigma(mut self, v: f64) -> Self {
        self.ainfty_sigma = v;
        self
    }

    pub fn with_ainfty_w(mut self, v: f64) -> Self {
        self.ainfty_w = v;
        self
    }

    pub fn with_a1(mut self, a1_vw: f64, a1_w: f64) -> Self {
        self.a1_vw = a1_vw;
        self.a1_w = a1_w;
        self
    }

    pub fn with_dimension(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    pub fn with_cn(mut self, cn: f64) -> Self {
        self.cn = cn;
        self
    }

    pub fn with_operator_constant(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    fn validate(&self) -> Result<()> {
        let ge1 = [self.apc, self.ainfty_sigma, self.ainfty_w, self.a1_vw, self.a1_w];
        if ge1.iter().any(|&c| !(c >= 1.0)) {
            return Err(Error::Unsupported("weight constants must be >= 1".into()));
        }
        if !(self.cn > 0.0) || !(self.a >= 0.0) {
            return Err(Error::Unsupported("need cn > 0 and a >= 0".into()));
        }
        Ok(())
    }
}

/// The sharp strong-type power law `apc^{1/(p-1)}`; multiplicative
/// constants are reported separately, never folded in.
pub fn buckley_bound(p: f64, apc: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Unsupported(format!("need p > 1, got p = {p}")));
    }
    if !(apc >= 1.0) {
        return Err(Error::Unsupported(format!("need apc >= 1, got {apc}")));
    }
    Ok(apc.powf(1.0 / (p - 1.0)))
}

/// Mixed two-weight bound for the maximal operator on `L^{p,q}(v)`:
/// `cn * p' * apc^{1/p} * ainfty_sigma^{1/p}` when `p <= q <= inf`, and
/// `(4 cn / q)^{1/q} (p')^{1/q} apc^{1/p} ainfty_sigma^{1/q}` when
/// `0 < q <= p`.
pub fn mixed_bound_lorentz(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    let (p, q) = (inputs.p, inputs.q);
    let pp = conjugate(p);
    if q >= p {
        Ok(inputs.cn * pp * inputs.apc.powf(1.0 / p) * inputs.ainfty_sigma.powf(1.0 / p))
    } else {
        Ok((4.0 * inputs.cn / q).powf(1.0 / q)
            * pp.powf(1.0 / q)
            * inputs.apc.powf(1.0 / p)
            * inputs.ainfty_sigma.powf(1.0 / q))
    }
}

/// Interpolation bound `(1+A)(r')^{1/p} ||T||^{1/r}` for `p <= q`, and
/// `(1+A)(4r'/q)^{1/q} ||T||^{1/r}` for `q <= p`, where `weak_norm_pr` is
/// the restricted weak-type norm placeholder.
pub fn main_theorem_bound(p: f64, q: f64, r: f64, a: f64, weak_norm_pr: f64) -> Result<f64> {
    if !(r > 1.0) || r >= p {
        return Err(Error::ExponentOrder { r, p });
    }
    if !(q > 0.0) || !(a >= 0.0) || !(weak_norm_pr >= 0.0) {
        return Err(Error::Unsupported("need q > 0, A >= 0, norm >= 0".into()));
    }
    let rp = conjugate(r);
    let norm = weak_norm_pr.powf(1.0 / r);
    if q >= p {
        Ok((1.0 + a) * rp.powf(1.0 / p) * norm)
    } else {
        Ok((1.0 + a) * (4.0 * rp / q).powf(1.0 / q) * norm)
    }
}

/// Strong-type bound over the rectangle basis in dimension `n`:
/// `(p')^n log(e+apc)^{1/p} apc^{1/p+(n-1)/(p-1)} ainfty_sigma^{1/p}`
/// for `p <= q`, and
/// `(2^{n+3}/q)^{1/q} (p')^{1/q+(n-1)} log(e+apc)^{1/q}
///  apc^{1/p+(n-1)/(p-1)} ainfty_sigma^{1/q}` for `0 < q <= p`.
pub fn strong_bound(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    let (p, q, n) = (inputs.p, inputs.q, inputs.n as f64);
    let pp = conjugate(p);
    let loge = (std::f64::consts::E + inputs.apc).ln();
    let apc_pow = inputs.apc.powf(1.0 / p + (n - 1.0) / (p - 1.0));
    if q >= p {
        Ok(pp.pown(n as i32) * loge.powf(1.0 / p) * apc_pow * inputs.ainfty_sigma.powf(1.0 / p))
    } else {
        Ok((2f64.powf(n + 3.0) / q).powf(1.0 / q)
            * pp.powf(1.0 / q + n - 1.0)
            * loge.powf(1.0 / q)
            * apc_pow
            * inputs.ainfty_sigma.powf(1.0 / q))
    }
}

/// Bound for the dual operator on `L^{p,q}(v)`:
/// `p^{1/min(p',q')} log(e+a1_vw)^{1/min(p',q')} (1+a1_vw) a1_w^{1/p'}`.
pub fn dual_bound(inputs: &BoundInputs) -> Result<f64> {
    inputs.validate()?;
    let (p, q) = (inputs.p, inputs.q);
    if !(q > 1.0) || q.is_infinite() {
        return Err(Error::Unsupported(format!("dual bound needs 1 < q < inf, got q = {q}")));
    }
    let m = conjugate(p).min(conjugate(q));
    let loge = (std::f64::consts::E + inputs.a1_vw).ln();
    Ok(p.powf(1.0 / m)
        * loge.powf(1.0 / m)
        * (1.0 + inputs.a1_vw)
        * inputs.a1_w.powf(1.0 / conjugate(p)))
}

trait Powi {
    fn pown(self, n: i32) -> f64;
}

impl Powi for f64 {
    fn pown(self, n: i32) -> f64 {
        self.powi(n)
    }
}

/// A validated instance of the log-convexity inequality
/// `(int_t^inf phi psi ds/s)^theta
///   <= (log 2)^{-(1-theta)} int_{t/2}^inf phi(4s)^theta psi(s)^theta ds/s`
/// with `phi` increasing and `psi` decreasing on `(0, inf)`.
#[derive(Debug, Clone)]
pub struct Lemma5Instance {
    pub theta: f64,
    pub t: f64,
    phi: PiecewisePower,
    psi: PiecewisePower,
}

impl Lemma5Instance {
    /// Monotonicity is verified structurally: every piece active on the
    /// positive half-line must have the right exponent sign, and the
    /// function values may not jump the wrong way across breakpoints.
    pub fn new(theta: f64, t: f64, phi: PiecewisePower, psi: PiecewisePower) -> Result<Self> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::Unsupported(format!("need theta in (0,1], got {theta}")));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Unsupported(format!("need finite t > 0, got {t}")));
        }
        check_monotone(&phi, true)?;
        check_monotone(&psi, false)?;
        Ok(Lemma5Instance { theta, t, phi, psi })
    }

    pub fn phi(&self) -> &PiecewisePower {
        &self.phi
    }

    pub fn psi(&self) -> &PiecewisePower {
        &self.psi
    }
}

fn check_monotone(f: &PiecewisePower, increasing: bool) -> Result<()> {
    let dir = if increasing { "increasing" } else { "decreasing" };
    for (idx, piece) in f.pieces().iter().enumerate() {
        let hi = f.breakpoints()[idx + 1];
        if hi <= 0.0 || piece.coeff == 0.0 {
            continue; // only the positive half-line matters
        }
        if piece.coeff < 0.0 {
            return Err(Error::Unsupported(format!("{dir} function must be nonnegative")));
        }
        let ok = if increasing { piece.exponent >= 0.0 } else { piece.exponent <= 0.0 };
        if !ok {
            return Err(Error::Unsupported(format!(
                "piece exponent {} violates {dir} monotonicity",
                piece.exponent
            )));
        }
    }
    for b in f.finite_breakpoints().filter(|&b| b > 0.0) {
        let (left, right) = (f.eval(b * (1.0 - 1e-12)), f.eval(b * (1.0 + 1e-12)));
        let ok = if increasing { left <= right * (1.0 + 1e-9) } else { left * (1.0 + 1e-9) >= right };
        if !ok {
            return Err(Error::Unsupported(format!("jump at {b} violates {dir} monotonicity")));
        }
    }
    Ok(())
}

/// Evaluates both sides of the Lemma 5 inequality.  Integrals are taken
/// in closed form over `(t, t_upper)` plus an exact power-law tail; an
/// instance whose tail past `t_upper` is not negligible (relative mass
/// above 1e-8) or not convergent is rejected.
pub fn lemma5_check(inst: &Lemma5Instance, t_upper: f64) -> Result<(f64, f64)> {
    if !(t_upper > inst.t) {
        return Err(Error::InvalidInterval { lo: inst.t, hi: t_upper });
    }
    let inv_s = PiecewisePower::pure_power(1.0, -1.0);

    let lhs_integrand = inst.phi.product(&inst.psi).product(&inv_s);
    let lhs_int = certified_integral(&lhs_integrand, inst.t, t_upper)?;
    let lhs = lhs_int.powf(inst.theta);

    let rhs_integrand = inst
        .phi
        .scale_arg(4.0)
        .power(inst.theta)?
        .product(&inst.psi.power(inst.theta)?)
        .product(&inv_s);
    let rhs_int = certified_integral(&rhs_integrand, inst.t / 2.0, t_upper)?;
    let rhs = (2f64.ln()).powf(-(1.0 - inst.theta)) * rhs_int;
    Ok((lhs, rhs))
}

/// Exact integral over `(lo, t_upper)` plus the closed-form tail over
/// `(t_upper, inf)`; errors if the tail diverges or carries more than
/// 1e-8 of the total mass.
fn certified_integral(f: &PiecewisePower, lo: f64, t_upper: f64) -> Result<f64> {
    let main = f.integrate_extended(lo, t_upper)?;
    let tail = f.integrate_extended(t_upper, f64::INFINITY)?;
    if tail > 1e-8 * main.max(1.0) {
        return Err(Error::Unsupported(format!(
            "tail mass {tail:.3e} past {t_upper:.3e} is not negligible"
        )));
    }
    Ok(main + tail)
}
