//! Exact calculus for nonnegative piecewise-power functions on the line.
//!
//! Every weight and test function in this crate is a finite union of pieces
//! `c * |x|^a`. The class is closed under products and real powers and all
//! integrals have closed forms, so everything downstream (maximal operators,
//! weight constants, Lorentz norms) reduces to the operations in this module.

use crate::error::{Error, Result};

/// Closed bounded interval with positive length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// One piece `c * |x|^a`; `a == 0` means the constant `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub coeff: f64,
    pub exponent: f64,
}

impl Piece {
    fn eval(&self, x: f64) -> f64 {
        if self.exponent == 0.0 {
            self.coeff
        } else if self.coeff == 0.0 {
            0.0
        } else {
            self.coeff * x.abs().powf(self.exponent)
        }
    }
}

/// Nonnegative function given by finitely many pieces `c * |x|^a` between
/// strictly increasing breakpoints; the value is 0 outside `(b_0, b_n)`.
/// Power singularities may only sit at gap endpoints (in particular at 0).
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePower {
    breaks: Vec<f64>,
    pieces: Vec<Piece>,
}

impl PiecewisePower {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Piece>) -> Result<Self> {
        if breaks.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::Parse(format!(
                "{} breakpoints for {} pieces",
                breaks.len(),
                pieces.len()
            )));
        }
        for w in breaks.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Parse(format!(
                    "breakpoints not strictly increasing at {} >= {}",
                    w[0], w[1]
                )));
            }
        }
        for (i, b) in breaks.iter().enumerate() {
            let interior = i > 0 && i + 1 < breaks.len();
            if interior && !b.is_finite() {
                return Err(Error::Parse("interior breakpoint must be finite".into()));
            }
            if b.is_nan() {
                return Err(Error::Parse("NaN breakpoint".into()));
            }
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(p.coeff >= 0.0) || !p.coeff.is_finite() || !p.exponent.is_finite() {
                return Err(Error::Parse(format!("bad piece {:?}", p)));
            }
            if p.exponent != 0.0 && breaks[i] < 0.0 && breaks[i + 1] > 0.0 {
                return Err(Error::Parse(
                    "piece with nonzero exponent straddles 0".into(),
                ));
            }
        }
        let mut f = PiecewisePower { breaks, pieces };
        f.canonicalize();
        Ok(f)
    }

    /// Merges adjacent gaps carrying identical pieces, unless the merge would
    /// put 0 in the interior of a gap with nonzero exponent.
    fn canonicalize(&mut self) {
        let mut i = 0;
        while i + 1 < self.pieces.len() {
            let same = self.pieces[i] == self.pieces[i + 1];
            let b = self.breaks[i + 1];
            let straddles = self.pieces[i].exponent != 0.0 && b == 0.0;
            if same && !straddles {
                self.pieces.remove(i + 1);
                self.breaks.remove(i + 1);
            } else {
                i += 1;
            }
        }
    }

    pub fn constant(c: f64) -> Self {
        PiecewisePower::new(
            vec![f64::NEG_INFINITY, f64::INFINITY],
            vec![Piece { coeff: c, exponent: 0.0 }],
        )
        .expect("constant is always valid")
    }

    /// `c * |x|^a` on the whole line.
    pub fn pure_power(c: f64, a: f64) -> Self {
        if a == 0.0 {
            return Self::constant(c);
        }
        PiecewisePower::new(
            vec![f64::NEG_INFINITY, 0.0, f64::INFINITY],
            vec![
                Piece { coeff: c, exponent: a },
                Piece { coeff: c, exponent: a },
            ],
        )
        .expect("pure power is always valid")
    }

    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        Self::step(&[(lo, hi, 1.0)])
    }

    /// Step function from non-overlapping `(lo, hi, value)` boxes (sorted).
    pub fn step(boxes: &[(f64, f64, f64)]) -> Result<Self> {
        if boxes.is_empty() {
            return Err(Error::Parse("empty step function".into()));
        }
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        for &(lo, hi, v) in boxes {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidInterval { lo, hi });
            }
            if let Some(&last) = breaks.last() {
                if lo < last {
                    return Err(Error::Parse("overlapping step boxes".into()));
                }
                if lo > last {
                    breaks.push(lo);
                    pieces.push(Piece { coeff: 0.0, exponent: 0.0 });
                }
            } else {
                breaks.push(lo);
            }
            breaks.push(hi);
            pieces.push(Piece { coeff: v, exponent: 0.0 });
        }
        PiecewisePower::new(breaks, pieces)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn finite_breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.breaks.iter().copied().filter(|b| b.is_finite())
    }

    /// Hull of the gaps with positive coefficient, if bounded.
    pub fn support_hull(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (i, p) in self.pieces.iter().enumerate() {
            if p.coeff > 0.0 {
                lo = lo.min(self.breaks[i]);
                hi = hi.max(self.breaks[i + 1]);
            }
        }
        if lo < hi && lo.is_finite() && hi.is_finite() {
            Some((lo, hi))
        } else if lo < hi {
            None
        } else {
            // identically zero: empty support, report a degenerate hull at 0
            Some((0.0, 0.0))
        }
    }

    /// Value at `x`; 0 outside the covered domain, +inf at a singular endpoint.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.pieces.len();
        if x <= self.breaks[0] || x >= self.breaks[n] {
            // endpoint of the domain may still be singular
            if x == self.breaks[0] || x == self.breaks[n] {
                return self.eval_at_break(x);
            }
            return 0.0;
        }
        match self.breaks.binary_search_by(|b| b.partial_cmp(&x).unwrap()) {
            Ok(i) => {
                if i == 0 || i == n {
                    self.eval_at_break(x)
                } else {
                    // breakpoint shared by two gaps: take the larger one-sided limit
                    self.piece_limit(i - 1, x).max(self.piece_limit(i, x))
                }
            }
            Err(i) => self.pieces[i - 1].eval(x),
        }
    }

    fn eval_at_break(&self, x: f64) -> f64 {
        let n = self.pieces.len();
        if x == self.breaks[0] {
            self.piece_limit(0, x)
        } else if x == self.breaks[n] {
            self.piece_limit(n - 1, x)
        } else {
            0.0
        }
    }

    /// One-sided limit of piece `i` at `x` (handles the singular endpoint 0).
    fn piece_limit(&self, i: usize, x: f64) -> f64 {
        let p = &self.pieces[i];
        if x == 0.0 && p.exponent != 0.0 && p.coeff > 0.0 {
            if p.exponent < 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            p.eval(x)
        }
    }

    /// Supremum of the function over its domain (may be +inf).
    pub fn sup_value(&self) -> f64 {
        let mut sup: f64 = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            if p.coeff == 0.0 {
                continue;
            }
            let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
            sup = sup.max(self.piece_sup(p, lo, hi));
        }
        sup
    }

    fn piece_sup(&self, p: &Piece, lo: f64, hi: f64) -> f64 {
        if p.exponent == 0.0 {
            return p.coeff;
        }
        // |x| runs over [min|x|, max|x|] on a gap not straddling 0
        let amin = lo.abs().min(hi.abs());
        let amax = lo.abs().max(hi.abs());
        if p.exponent > 0.0 {
            if amax.is_infinite() {
                f64::INFINITY
            } else {
                p.coeff * amax.powf(p.exponent)
            }
        } else if amin == 0.0 {
            f64::INFINITY
        } else {
            p.coeff * amin.powf(p.exponent)
        }
    }

    /// Pointwise product; support is the intersection of supports.
    pub fn product(&self, g: &PiecewisePower) -> PiecewisePower {
        let breaks = merge_breaks(&self.breaks, &g.breaks);
        let mut pieces = Vec::with_capacity(breaks.len() - 1);
        for w in breaks.windows(2) {
            let mid = midpoint(w[0], w[1]);
            let pf = self.piece_at(mid);
            let pg = g.piece_at(mid);
            pieces.push(match (pf, pg) {
                (Some(a), Some(b)) => Piece {
                    coeff: a.coeff * b.coeff,
                    exponent: if a.coeff * b.coeff == 0.0 {
                        0.0
                    } else {
                        a.exponent + b.exponent
                    },
                },
                _ => Piece { coeff: 0.0, exponent: 0.0 },
            });
        }
        let mut f = PiecewisePower { breaks, pieces };
        f.canonicalize();
        f
    }

    /// Restriction `f * chi_I`.
    pub fn restrict(&self, i: &Interval) -> PiecewisePower {
        self.product(&PiecewisePower::indicator(i.lo, i.hi).expect("valid interval"))
    }

    /// Pointwise sum; defined only when overlapping gaps carry equal exponents.
    pub fn try_add(&self, g: &PiecewisePower) -> Result<PiecewisePower> {
        let breaks = merge_breaks(&self.breaks, &g.breaks);
        let mut pieces = Vec::with_capacity(breaks.len() - 1);
        for w in breaks.windows(2) {
            let mid = midpoint(w[0], w[1]);
            let pf = self.piece_at(mid).copied().unwrap_or(Piece { coeff: 0.0, exponent: 0.0 });
            let pg = g.piece_at(mid).copied().unwrap_or(Piece { coeff: 0.0, exponent: 0.0 });
            let piece = if pf.coeff == 0.0 {
                pg
            } else if pg.coeff == 0.0 {
                pf
            } else if pf.exponent == pg.exponent {
                Piece { coeff: pf.coeff + pg.coeff, exponent: pf.exponent }
            } else {
                return Err(Error::Unsupported(
                    "sum of pieces with different exponents leaves the class".into(),
                ));
            };
            pieces.push(piece);
        }
        let mut f = PiecewisePower { breaks, pieces };
        f.canonicalize();
        Ok(f)
    }

    fn piece_at(&self, x: f64) -> Option<&Piece> {
        let n = self.pieces.len();
        if x <= self.breaks[0] || x >= self.breaks[n] {
            return None;
        }
        let i = match self.breaks.binary_search_by(|b| b.partial_cmp(&x).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        self.pieces.get(i.min(n - 1))
    }

    /// `f^r`: pieces map `(c, a) -> (c^r, a r)`; breakpoints unchanged.
    /// Negative powers require `f > 0` a.e. on the whole line.
    /// Pointwise power on the covered domain; the function stays 0 outside it.
    pub fn power(&self, r: f64) -> Result<PiecewisePower> {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            if p.coeff == 0.0 && r < 0.0 {
                return Err(Error::UndefinedPower);
            }
            let coeff = p.coeff.powf(r);
            pieces.push(Piece {
                coeff,
                exponent: if coeff == 0.0 { 0.0 } else { p.exponent * r },
            });
        }
        let mut f = PiecewisePower { breaks: self.breaks.clone(), pieces };
        f.canonicalize();
        Ok(f)
    }

    /// `x -> f(lam * x)` for `lam > 0`.
    pub fn scale_arg(&self, lam: f64) -> PiecewisePower {
        assert!(lam > 0.0 && lam.is_finite());
        let breaks = self.breaks.iter().map(|b| b / lam).collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                coeff: if p.coeff == 0.0 { 0.0 } else { p.coeff * lam.powf(p.exponent) },
                exponent: p.exponent,
            })
            .collect();
        let mut f = PiecewisePower { breaks, pieces };
        f.canonicalize();
        f
    }

    /// `x -> c * f(x)` for `c >= 0`.
    pub fn scale_value(&self, c: f64) -> PiecewisePower {
        assert!(c >= 0.0 && c.is_finite());
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                coeff: p.coeff * c,
                exponent: if p.coeff * c == 0.0 { 0.0 } else { p.exponent },
            })
            .collect();
        let mut f = PiecewisePower { breaks: self.breaks.clone(), pieces };
        f.canonicalize();
        f
    }

    /// Closed-form integral over a finite interval.
    pub fn integrate(&self, i: &Interval) -> Result<f64> {
        self.integrate_extended(i.lo, i.hi)
    }

    pub fn average(&self, i: &Interval) -> Result<f64> {
        Ok(self.integrate(i)? / i.len())
    }

    /// Integral over `(lo, hi)` where the endpoints may be infinite;
    /// errors with `Divergent` when a tail fails to converge.
    pub fn integrate_extended(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo < hi) || lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval { lo, hi });
        }
        let mut total = 0.0;
        for (idx, p) in self.pieces.iter().enumerate() {
            let a = self.breaks[idx].max(lo);
            let b = self.breaks[idx + 1].min(hi);
            if a >= b || p.coeff == 0.0 {
                continue;
            }
            // split at 0 so each half sees a single sign of x
            if a < 0.0 {
                total += piece_integral_abs(p, -b.min(0.0), -a)?;
            }
            if b > 0.0 {
                total += piece_integral_abs(p, a.max(0.0), b)?;
            }
        }
        Ok(total)
    }

    /// Superlevel set `{f > s}` as disjoint open intervals (possibly
    /// unbounded), merged across shared endpoints.
    pub fn superlevel(&self, s: f64) -> Vec<(f64, f64)> {
        assert!(s > 0.0, "superlevel threshold must be positive");
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (idx, p) in self.pieces.iter().enumerate() {
            let (lo, hi) = (self.breaks[idx], self.breaks[idx + 1]);
            for part in piece_superlevel(p, lo, hi, s) {
                match out.last_mut() {
                    Some(last) if part.0 <= last.1 => last.1 = last.1.max(part.1),
                    _ => out.push(part),
                }
            }
        }
        out
    }

    /// Parses the textual descriptor: one `lo hi c a` line per piece, with
    /// `-inf`/`inf` sentinels; consecutive pieces may leave gaps (filled
    /// with zero pieces).
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let mut boxes: Vec<(f64, f64, Piece)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(Error::Parse(format!(
                    "line {}: expected `lo hi c a`, got {:?}",
                    lineno + 1,
                    line
                )));
            }
            let nums: Result<Vec<f64>> = toks
                .iter()
                .map(|t| parse_extended(t).ok_or_else(|| {
                    Error::Parse(format!("line {}: bad number {:?}", lineno + 1, t))
                }))
                .collect();
            let nums = nums?;
            boxes.push((nums[0], nums[1], Piece { coeff: nums[2], exponent: nums[3] }));
        }
        if boxes.is_empty() {
            return Err(Error::Parse("empty descriptor".into()));
        }
        boxes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        for (lo, hi, p) in boxes {
            if let Some(&last) = breaks.last() {
                if lo < last {
                    return Err(Error::Parse("overlapping descriptor pieces".into()));
                }
                if lo > last {
                    breaks.push(lo);
                    pieces.push(Piece { coeff: 0.0, exponent: 0.0 });
                }
            } else {
                breaks.push(lo);
            }
            breaks.push(hi);
            pieces.push(p);
        }
        PiecewisePower::new(breaks, pieces)
    }

    pub fn to_descriptor(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.pieces.iter().enumerate() {
            out.push_str(&format!(
                "{} {} {} {}\n",
                fmt_extended(self.breaks[i]),
                fmt_extended(self.breaks[i + 1]),
                p.coeff,
                p.exponent
            ));
        }
        out
    }
}

/// Step function: a piecewise-power with all exponents 0 and bounded support.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction(PiecewisePower);

impl StepFunction {
    pub fn new(boxes: &[(f64, f64, f64)]) -> Result<Self> {
        Ok(StepFunction(PiecewisePower::step(boxes)?))
    }

    pub fn from_piecewise(f: PiecewisePower) -> Result<Self> {
        if f.pieces().iter().any(|p| p.exponent != 0.0) {
            return Err(Error::Unsupported("step function with nonzero exponent".into()));
        }
        if f.support_hull().is_none() {
            return Err(Error::Unsupported("step function with unbounded support".into()));
        }
        Ok(StepFunction(f))
    }

    pub fn as_piecewise(&self) -> &PiecewisePower {
        &self.0
    }

    pub fn into_piecewise(self) -> PiecewisePower {
        self.0
    }
}

fn parse_extended(t: &str) -> Option<f64> {
    match t {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => t.parse().ok().filter(|x: &f64| !x.is_nan()),
    }
}

fn fmt_extended(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{}", x)
    }
}

fn midpoint(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => {
            if a >= 0.0 {
                2.0 * a.max(1.0)
            } else {
                0.5 * a
            }
        }
        (false, true) => {
            if b <= 0.0 {
                2.0 * b.min(-1.0)
            } else {
                0.5 * b
            }
        }
        (false, false) => unreachable!("gap cannot be the whole extended line twice"),
    }
}

fn merge_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    all.dedup();
    all
}

/// Integral of `c |x|^a` over `[lo, hi] ⊆ [0, ∞)`; `hi` may be `+inf`.
fn piece_integral_abs(p: &Piece, lo: f64, hi: f64) -> Result<f64> {
    debug_assert!(lo >= 0.0 && lo < hi);
    let (c, a) = (p.coeff, p.exponent);
    if c == 0.0 {
        return Ok(0.0);
    }
    if hi.is_infinite() {
        if a >= -1.0 {
            return Err(Error::Divergent("upper"));
        }
        return Ok(-c * lo.powf(a + 1.0) / (a + 1.0));
    }
    if a == -1.0 {
        if lo == 0.0 {
            return Err(Error::NonIntegrable { exponent: a, lo, hi });
        }
        return Ok(c * (hi / lo).ln());
    }
    if a < -1.0 && lo == 0.0 {
        return Err(Error::NonIntegrable { exponent: a, lo, hi });
    }
    if a == 0.0 {
        return Ok(c * (hi - lo));
    }
    // hi^(a+1) - lo^(a+1) cancels catastrophically when hi - lo is tiny
    // relative to lo; expm1/ln_1p keeps the difference accurate
    if lo > 0.0 && hi - lo < 0.125 * lo {
        let d = ((a + 1.0) * ((hi - lo) / lo).ln_1p()).exp_m1();
        return Ok(c * lo.powf(a + 1.0) * d / (a + 1.0));
    }
    Ok(c * (hi.powf(a + 1.0) - lo.powf(a + 1.0)) / (a + 1.0))
}

/// `{c |x|^a > s}` within the gap `(lo, hi)`.
fn piece_superlevel(p: &Piece, lo: f64, hi: f64, s: f64) -> Vec<(f64, f64)> {
    let (c, a) = (p.coeff, p.exponent);
    if c == 0.0 {
        return vec![];
    }
    if a == 0.0 {
        return if c > s { vec![(lo, hi)] } else { vec![] };
    }
    // gaps with nonzero exponent never straddle 0
    let xstar = (s / c).powf(1.0 / a); // |x| threshold: |x|^a > s/c
    let (alo, ahi) = if hi <= 0.0 { (-hi, -lo) } else { (lo, hi) };
    // on |x| in (alo, ahi): a > 0 keeps |x| > xstar, a < 0 keeps |x| < xstar
    let seg = if a > 0.0 {
        (alo.max(xstar), ahi)
    } else {
        (alo, ahi.min(xstar))
    };
    if !(seg.0 < seg.1) {
        return vec![];
    }
    if hi <= 0.0 {
        vec![(-seg.1, -seg.0)]
    } else {
        vec![(seg.0, seg.1)]
    }
}
