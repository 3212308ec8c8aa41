//! Real-root isolation for univariate polynomials of degree at most six.
//!
//! Distinct roots are counted and isolated with a Sturm chain of the
//! square-free part, evaluated exactly at dyadic points, then each isolating
//! interval is bisected down to a width of `1e-12`. Multiplicities come from
//! the tower `p, gcd(p, p'), gcd(g, g'), ...`: a root of multiplicity `m`
//! survives in exactly `m - 1` of the gcds.

mod exact;

use exact::{Dyadic, IntPoly, SturmChain};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_DEGREE: usize = 6;

/// Target width of refined root brackets.
pub const ROOT_WIDTH: f64 = 1e-12;

// Leading coefficients this small relative to the largest are dropped.
const LEAD_TRIM: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("ZeroPolynomial: all coefficients vanish")]
    ZeroPolynomial,
    #[error("DegreeTooHigh: degree {0} exceeds {MAX_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("NonFinite: polynomial coefficients must be finite")]
    NonFinite,
    #[error("BadInterval: [{0}, {1}]")]
    BadInterval(f64, f64),
}

/// Polynomial with ascending real coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<f64>,
    #[serde(skip)]
    trimmed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: f64,
    pub multiplicity: u32,
}

impl Poly {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Result<Self, PolyError> {
        let mut coeffs = coeffs.into();
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolyError::NonFinite);
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        let max = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut trimmed = 0;
        while coeffs.len() > 1 && coeffs.last().unwrap().abs() < LEAD_TRIM * max {
            let lead = coeffs.pop().unwrap();
            trimmed += 1;
            log::warn!(
                "dropping near-degenerate leading coefficient {lead:e} (max coefficient {max:e})"
            );
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(PolyError::DegreeTooHigh(coeffs.len() - 1));
        }
        Ok(Poly { coeffs, trimmed })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of near-degenerate leading terms dropped by [`Poly::new`].
    pub fn trimmed_terms(&self) -> usize {
        self.trimmed
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `sum |c_i| |x|^i`, the natural magnitude for residuals at `x`.
    pub fn eval_scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * i as f64)
            .collect();
        Poly { coeffs, trimmed: 0 }
    }
}

/// Ascending-coefficient product.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

struct Analysis {
    square_free: IntPoly,
    chain: SturmChain,
    // chains of gcd(p,p'), gcd(g,g'), ... with positive degree
    tower: Vec<SturmChain>,
}

impl Analysis {
    fn new(p: &Poly) -> Result<Self, PolyError> {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let ip = IntPoly::from_f64s(&p.coeffs);
        let square_free = ip.square_free();
        let chain = SturmChain::new(&square_free);
        let mut tower = Vec::new();
        let mut g = ip.gcd(&ip.derivative());
        while g.degree() > 0 {
            tower.push(SturmChain::new(&g.square_free()));
            g = g.gcd(&g.derivative());
        }
        Ok(Analysis {
            square_free,
            chain,
            tower,
        })
    }

    fn multiplicity(&self, lo: &Dyadic, hi: &Dyadic) -> u32 {
        1 + self.tower.iter().filter(|c| c.count_in(lo, hi) > 0).count() as u32
    }

    /// Splits `(lo, hi]` into intervals holding one distinct root each.
    fn isolate(&self, lo: Dyadic, hi: Dyadic) -> Vec<(Dyadic, Dyadic)> {
        let mut out = Vec::new();
        let mut stack = vec![(lo, hi)];
        while let Some((a, b)) = stack.pop() {
            let n = self.chain.count_in(&a, &b);
            if n == 0 {
                continue;
            }
            if n == 1 || a.exp > 2000 {
                out.push((a, b));
                continue;
            }
            let m = a.midpoint(&b);
            stack.push((m.clone(), b));
            stack.push((a, m));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Bisects `(lo, hi]` (one simple root of the square-free part) to
    /// `ROOT_WIDTH`; returns the value and the final bracket.
    fn refine(&self, mut lo: Dyadic, mut hi: Dyadic) -> (f64, Dyadic, Dyadic) {
        let sf = &self.square_free;
        let s_hi = sf.sign_at(&hi);
        if s_hi == 0 {
            let v = hi.to_f64();
            return (v, lo, hi);
        }
        loop {
            let (lf, hf) = (lo.to_f64(), hi.to_f64());
            let tol = ROOT_WIDTH.max(4.0 * f64::EPSILON * lf.abs().max(hf.abs()));
            if hf - lf <= tol {
                return (0.5 * (lf + hf), lo, hi);
            }
            let m = lo.midpoint(&hi);
            let s = sf.sign_at(&m);
            if s == 0 {
                let v = m.to_f64();
                return (v, m.clone(), m);
            }
            if s == s_hi {
                hi = m;
            } else {
                lo = m;
            }
        }
    }

    fn bound(p: &Poly) -> Dyadic {
        let c = p.coeffs();
        let lead = c[c.len() - 1].abs();
        let ratio = c[..c.len() - 1]
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs() / lead));
        let b = 2.0 * (1.0 + ratio);
        let e = if b.is_finite() {
            b.log2().ceil() as i32 + 1
        } else {
            1100
        };
        Dyadic::pow2(e)
    }
}

/// Real roots with multiplicities, ascending, optionally restricted to the
/// closed interval `[lo, hi]`.
pub fn real_roots(p: &Poly, interval: Option<(f64, f64)>) -> Result<Vec<Root>, PolyError> {
    let an = Analysis::new(p)?;
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let (lo, hi, include_lo) = match interval {
        None => {
            let b = Analysis::bound(p);
            (b.neg(), b, false)
        }
        Some((a, b)) => {
            if !(a.is_finite() && b.is_finite()) || a > b {
                return Err(PolyError::BadInterval(a, b));
            }
            (Dyadic::from_f64(a), Dyadic::from_f64(b), true)
        }
    };
    let mut roots = Vec::new();
    if include_lo && an.square_free.sign_at(&lo) == 0 {
        // (lo, lo] is empty for counting, so step just below lo
        let mult = an.multiplicity(&lo.nudged_down(), &lo);
        roots.push(Root {
            value: lo.to_f64(),
            multiplicity: mult,
        });
    }
    for (a, b) in an.isolate(lo, hi) {
        let mult = an.multiplicity(&a, &b);
        let (value, _, _) = an.refine(a, b);
        roots.push(Root {
            value,
            multiplicity: mult,
        });
    }
    Ok(roots)
}

/// Exact number of distinct real roots.
pub fn count_distinct_real_roots(p: &Poly) -> Result<usize, PolyError> {
    let an = Analysis::new(p)?;
    Ok(an.chain.count_all())
}

/// Exact number of distinct real roots in the closed interval `[lo, hi]`.
pub fn count_distinct_in(p: &Poly, lo: f64, hi: f64) -> Result<usize, PolyError> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(PolyError::BadInterval(lo, hi));
    }
    let an = Analysis::new(p)?;
    let (a, b) = (Dyadic::from_f64(lo), Dyadic::from_f64(hi));
    let at_lo = usize::from(an.square_free.sign_at(&a) == 0);
    Ok(an.chain.count_in(&a, &b) + at_lo)
}
