//! Cubics `a0 y^2 - a1 x y^2 - a2 x y - a3 x^2 - a4 x^3 = 0` with a singular
//! point at the origin.
//!
//! Multiplying by `beta = sqrt(a4 / a1^3)` and substituting `X = a1 beta x`
//! gives `alpha y^2 - X y^2 - 2q X y - 2p X^2 - X^3`, the Beloch curve with
//! scale `alpha` translated so that `P` sits at the origin. The shape at the
//! origin is governed by `2 alpha p + q^2`, which is `-det / (4 a1^2)` for
//! the Hessian determinant `det = -4 a0 a3 - a2^2` at the origin.

use crate::curve::{count_sign_flips, shape_from_flips, BelochParams, ShapeClass, SAMPLING_RADII};
use crate::geom::{sign_with_band, Point};
use serde::{Deserialize, Serialize};
use thiserror::Error;

const SAMPLING_ANGLES: usize = 8192;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneralError {
    #[error("ZeroCoefficient: {0} must be nonzero")]
    ZeroCoefficient(&'static str),
    #[error("SignObstruction: a1 * a4 = {0} must be positive")]
    SignObstruction(f64),
    #[error("NonFinite: coefficients must be finite")]
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralCubic {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub beta: f64,
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NamedCurve {
    Ophiuride { a: f64, b: f64 },
    Cissoid { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OriginReport {
    pub coefficients: GeneralCubic,
    pub normalization: Normalization,
    /// `2 a3 / sqrt(a1 a4) + (a2 / (2 a1))^2`, i.e. `4p + q^2`.
    pub paper_value: f64,
    /// `(4 a0 a3 + a2^2) / (4 a1^2)`, i.e. `2 alpha p + q^2`.
    pub corrected_value: f64,
    pub hessian_det: f64,
    pub shape: ShapeClass,
    /// Sign-flip counts of the defining polynomial around the origin.
    pub sampled_flips: [usize; 3],
    pub discrepancy: bool,
}

impl GeneralCubic {
    pub fn new(a0: f64, a1: f64, a2: f64, a3: f64, a4: f64) -> Result<Self, GeneralError> {
        let c = GeneralCubic { a0, a1, a2, a3, a4 };
        if c.as_array().iter().all(|v| v.is_finite()) {
            Ok(c)
        } else {
            Err(GeneralError::NonFinite)
        }
    }

    pub fn from_array(a: [f64; 5]) -> Result<Self, GeneralError> {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.a0, self.a1, self.a2, self.a3, self.a4]
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let GeneralCubic { a0, a1, a2, a3, a4 } = *self;
        a0 * y * y - a1 * x * y * y - a2 * x * y - a3 * x * x - a4 * x * x * x
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let GeneralCubic { a0, a1, a2, a3, a4 } = *self;
        (
            -a1 * y * y - a2 * y - 2.0 * a3 * x - 3.0 * a4 * x * x,
            2.0 * a0 * y - 2.0 * a1 * x * y - a2 * x,
        )
    }

    fn scale(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m: f64, v| m.max(v.abs()))
    }
}

impl NamedCurve {
    /// Coefficients `(a0, a1, a2, a3, a4)` of the named curve.
    pub fn cubic(&self) -> Result<GeneralCubic, GeneralError> {
        match *self {
            NamedCurve::Ophiuride { a, b } => GeneralCubic::new(-b, -1.0, -a, 0.0, -1.0),
            NamedCurve::Cissoid { a } => {
                if a == 0.0 {
                    return Err(GeneralError::ZeroCoefficient("a"));
                }
                GeneralCubic::new(2.0 * a, -1.0, 0.0, 0.0, -1.0)
            }
        }
    }
}

pub fn named_curve(kind: NamedCurve) -> Result<GeneralCubic, GeneralError> {
    kind.cubic()
}

impl Normalization {
    /// The Beloch curve whose translate by `-P` is the normalized cubic.
    pub fn beloch_params(&self) -> BelochParams {
        BelochParams::with_alpha(self.p, self.q, self.alpha)
            .expect("normalization is finite, alpha != 0")
    }

    /// Coefficients recovered from the normalization and `a1`.
    pub fn reexpand(&self, a1: f64) -> [f64; 5] {
        let k = a1 * self.beta;
        [
            self.alpha / self.beta,
            a1,
            2.0 * self.q * k / self.beta,
            2.0 * self.p * k * k / self.beta,
            k * k * k / self.beta,
        ]
    }
}

pub fn normalize(c: &GeneralCubic) -> Result<Normalization, GeneralError> {
    for (v, name) in [(c.a0, "a0"), (c.a1, "a1"), (c.a4, "a4")] {
        if v == 0.0 {
            return Err(GeneralError::ZeroCoefficient(name));
        }
    }
    if c.a1 * c.a4 <= 0.0 {
        return Err(GeneralError::SignObstruction(c.a1 * c.a4));
    }
    let beta = (c.a4 / (c.a1 * c.a1 * c.a1)).sqrt();
    Ok(Normalization {
        beta,
        alpha: c.a0 * beta,
        p: c.a3 / (2.0 * c.a1 * c.a1 * beta),
        q: c.a2 / (2.0 * c.a1),
    })
}

/// `2 a3 / sqrt(a1 a4) + (a2 / (2 a1))^2`.
pub fn paper_criterion(c: &GeneralCubic) -> Result<f64, GeneralError> {
    if c.a1 * c.a4 <= 0.0 {
        return Err(GeneralError::SignObstruction(c.a1 * c.a4));
    }
    let h = c.a2 / (2.0 * c.a1);
    Ok(2.0 * c.a3 / (c.a1 * c.a4).sqrt() + h * h)
}

/// Hessian determinant of the defining polynomial at the origin.
pub fn hessian_origin(c: &GeneralCubic) -> f64 {
    -4.0 * c.a0 * c.a3 - c.a2 * c.a2
}

/// Sign-flip counts of the defining polynomial on circles about the origin,
/// with radii scaled to the coefficients.
pub fn origin_flip_counts(c: &GeneralCubic) -> [usize; 3] {
    let unit = 1.0 / (1.0 + c.scale() / c.a1.abs().max(c.a4.abs()));
    SAMPLING_RADII.map(|rho| {
        count_sign_flips(
            |x, y| c.eval(x, y),
            Point::new(0.0, 0.0),
            rho * unit,
            SAMPLING_ANGLES,
        )
    })
}

pub fn classify_origin(c: &GeneralCubic) -> Result<OriginReport, GeneralError> {
    let normalization = normalize(c)?;
    let paper_value = paper_criterion(c)?;
    let corrected_value = (4.0 * c.a0 * c.a3 + c.a2 * c.a2) / (4.0 * c.a1 * c.a1);
    let hessian_det = hessian_origin(c);
    let params = normalization.beloch_params();
    let band = crate::curve::EPS_CLS * params.scale();
    let sampled_flips = origin_flip_counts(c);
    let shape = match sign_with_band(corrected_value, band) {
        -1 => ShapeClass::IsolatedPoint,
        1 => ShapeClass::Node,
        _ => match shape_from_flips(&sampled_flips) {
            ShapeClass::Cusp => ShapeClass::Cusp,
            _ => ShapeClass::Degenerate,
        },
    };
    let paper_band =
        crate::curve::EPS_CLS * (1.0 + (2.0 * normalization.p).abs() + normalization.q.powi(2));
    let discrepancy =
        sign_with_band(paper_value, paper_band) != sign_with_band(corrected_value, band);
    Ok(OriginReport {
        coefficients: *c,
        normalization,
        paper_value,
        corrected_value,
        hessian_det,
        shape,
        sampled_flips,
        discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gc(a: [f64; 5]) -> GeneralCubic {
        GeneralCubic::from_array(a).unwrap()
    }

    const CISSOID: [f64; 5] = [2.0, -1.0, 0.0, 0.0, -1.0];
    const OPHIURIDE: [f64; 5] = [-1.0, -1.0, -2.0, 0.0, -1.0];
    const AUDIT: [f64; 5] = [1.0, 1.0, 4.0, -2.0, 1.0];

    #[test]
    fn normalize_examples() {
        let n = normalize(&gc(CISSOID)).unwrap();
        assert_eq!((n.beta, n.alpha, n.p, n.q), (1.0, 2.0, 0.0, 0.0));
        let n = normalize(&gc(OPHIURIDE)).unwrap();
        assert_eq!((n.beta, n.alpha, n.p, n.q), (1.0, -1.0, 0.0, 1.0));
        let n = normalize(&gc(AUDIT)).unwrap();
        assert_eq!((n.beta, n.alpha, n.p, n.q), (1.0, 1.0, -1.0, 2.0));
        assert_eq!(n.reexpand(1.0), AUDIT);
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(
            normalize(&gc([1.0, 1.0, 0.0, 0.0, -1.0])),
            Err(GeneralError::SignObstruction(-1.0))
        );
        assert_eq!(
            normalize(&gc([0.0, 1.0, 0.0, 0.0, 1.0])),
            Err(GeneralError::ZeroCoefficient("a0"))
        );
        assert_eq!(
            normalize(&gc([1.0, 0.0, 0.0, 0.0, 1.0])),
            Err(GeneralError::ZeroCoefficient("a1"))
        );
    }

    #[test]
    fn criterion_examples() {
        assert_eq!(paper_criterion(&gc(CISSOID)).unwrap(), 0.0);
        assert_eq!(paper_criterion(&gc(OPHIURIDE)).unwrap(), 1.0);
        assert_eq!(paper_criterion(&gc(AUDIT)).unwrap(), 0.0);
        assert_eq!(hessian_origin(&gc(CISSOID)), 0.0);
        assert_eq!(hessian_origin(&gc(OPHIURIDE)), -4.0);
        assert_eq!(hessian_origin(&gc(AUDIT)), -8.0);
    }

    #[test]
    fn classify_examples() {
        let r = classify_origin(&gc(CISSOID)).unwrap();
        assert_eq!((r.shape, r.discrepancy), (ShapeClass::Cusp, false));
        assert_eq!(r.sampled_flips, [2, 2, 2]);
        let r = classify_origin(&gc(OPHIURIDE)).unwrap();
        assert_eq!((r.shape, r.discrepancy), (ShapeClass::Node, false));
        assert_eq!((r.paper_value, r.corrected_value), (1.0, 1.0));
        let r = classify_origin(&gc(AUDIT)).unwrap();
        assert_eq!((r.shape, r.discrepancy), (ShapeClass::Node, true));
        assert_eq!(
            (r.paper_value, r.corrected_value, r.hessian_det),
            (0.0, 2.0, -8.0)
        );
        assert_eq!(r.sampled_flips, [4, 4, 4]);
    }

    #[test]
    fn named_examples() {
        let o = NamedCurve::Ophiuride { a: 2.0, b: 1.0 }.cubic().unwrap();
        assert_eq!(o.as_array(), OPHIURIDE);
        assert_eq!(
            named_curve(NamedCurve::Cissoid { a: 1.0 })
                .unwrap()
                .as_array(),
            CISSOID
        );
        assert_eq!(
            NamedCurve::Cissoid { a: -1.0 }.cubic().unwrap().as_array(),
            [-2.0, -1.0, 0.0, 0.0, -1.0]
        );
        assert!(NamedCurve::Cissoid { a: 0.0 }.cubic().is_err());
        // x(x^2 + y^2) + (a x - b y) y for the ophiuride
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.5)] {
            let std = x * (x * x + y * y) + (2.0 * x - y) * y;
            assert!((o.eval(x, y) - std).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_is_singular() {
        for a in [CISSOID, OPHIURIDE, AUDIT] {
            assert_eq!(gc(a).gradient(0.0, 0.0), (0.0, 0.0));
        }
    }
}
