//! The parabola `4x + y^2 = 0` with focus `A(-1, 0)` and directrix `x = 1`.
//!
//! Every fold `x + r y - r^2 = 0` is tangent to it at `(-r^2, 2r)`.

use crate::curve::{orbit, BelochParams, CurveError, EPS_CLS};
use crate::geom::{sign_with_band, Line, Point};
use crate::poly::{convolve, count_distinct_real_roots, real_roots, Poly, PolyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParabolaError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParabolaSide {
    Left,
    On,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntersectionClass {
    Zero,
    One,
    TwoOrMore,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub r: f64,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FgIntersection {
    pub class: IntersectionClass,
    pub witnesses: Vec<Witness>,
    /// Exact number of distinct real roots of `N`.
    pub distinct_roots: usize,
}

/// Point of tangency of the fold with parameter `r`.
pub fn tangency_point(r: f64) -> Point {
    Point::new(-r * r, 2.0 * r)
}

/// Tangent line at `(-r^2, 2r)`, built from the gradient `(4, 2y)`.
pub fn tangent_at(r: f64) -> Line {
    let g = tangency_point(r);
    let (nx, ny) = (4.0, 2.0 * g.y);
    Line::new(nx, ny, -(nx * g.x + ny * g.y)).expect("nonzero normal")
}

pub fn side_of_parabola(pt: Point) -> ParabolaSide {
    let eps = 1e-9 * (1.0 + pt.x.abs() + pt.y * pt.y);
    match sign_with_band(4.0 * pt.x + pt.y * pt.y, eps) {
        -1 => ParabolaSide::Left,
        0 => ParabolaSide::On,
        _ => ParabolaSide::Right,
    }
}

/// `N(r) = 4 S(r)(r^2 + 1) + T(r)^2`, whose real roots are the parameters of
/// orbit points on the parabola. Ascending coefficients.
pub fn intersection_poly(params: &BelochParams) -> Result<Poly, ParabolaError> {
    params.require_unit_scale()?;
    let BelochParams { p, q, .. } = *params;
    let s = [-p, -2.0 * q, 2.0 + p];
    let t = [q, -2.0 * p, -q, 2.0];
    let mut n = convolve(&t, &t);
    for (i, c) in convolve(&s, &[4.0, 0.0, 4.0]).into_iter().enumerate() {
        n[i] += c;
    }
    Ok(Poly::new(n)?)
}

pub fn fg_intersection_count(params: &BelochParams) -> Result<FgIntersection, ParabolaError> {
    let n = intersection_poly(params)?;
    let distinct_roots = count_distinct_real_roots(&n)?;
    let witnesses: Vec<Witness> = real_roots(&n, None)?
        .into_iter()
        .map(|root| Witness {
            r: root.value,
            point: orbit(params, root.value).point(),
        })
        .collect();
    let mut class = match distinct_roots {
        0 => IntersectionClass::Zero,
        1 => IntersectionClass::One,
        _ => IntersectionClass::TwoOrMore,
    };
    // an isolated P is not an orbit point and could only lie on the parabola
    // when 4p + q^2 = 0
    if params.discriminant() < -EPS_CLS * params.scale()
        && side_of_parabola(params.singular_point()) == ParabolaSide::On
    {
        class = match class {
            IntersectionClass::Zero => IntersectionClass::One,
            _ => IntersectionClass::TwoOrMore,
        };
    }
    Ok(FgIntersection {
        class,
        witnesses,
        distinct_roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fold::{fold_line, A};

    fn bp(p: f64, q: f64) -> BelochParams {
        BelochParams::new(p, q).unwrap()
    }

    #[test]
    fn tangent_examples() {
        assert_eq!(tangent_at(0.0).coefficients(), [1.0, 0.0, 0.0]);
        assert!(tangent_at(1.0).max_coeff_diff(&Line::new(1.0, 1.0, -1.0).unwrap()) < 1e-15);
        assert!(tangent_at(-2.0).max_coeff_diff(&Line::new(1.0, -2.0, -4.0).unwrap()) < 1e-15);
        for k in -40..=40 {
            let r = k as f64 * 0.173;
            assert!(tangent_at(r).max_coeff_diff(&fold_line(r)) <= 1e-12);
            let g = tangency_point(r);
            assert!((g.distance(A) - (1.0 - g.x).abs()).abs() <= 1e-12 * (1.0 + r * r));
        }
    }

    #[test]
    fn side_examples() {
        assert_eq!(side_of_parabola(A), ParabolaSide::Left);
        assert_eq!(side_of_parabola(Point::new(0.0, 0.0)), ParabolaSide::On);
        assert_eq!(side_of_parabola(Point::new(1.0, 1.0)), ParabolaSide::Right);
    }

    #[test]
    fn intersection_poly_expansions() {
        assert_eq!(
            intersection_poly(&bp(1.0, 1.0)).unwrap().coeffs(),
            &[-3.0, -12.0, 10.0, 0.0, 5.0, -4.0, 4.0]
        );
        assert_eq!(
            intersection_poly(&bp(0.0, 0.0)).unwrap().coeffs(),
            &[0.0, 0.0, 8.0, 0.0, 8.0, 0.0, 4.0]
        );
    }

    #[test]
    fn count_examples() {
        let c = fg_intersection_count(&bp(0.0, 0.0)).unwrap();
        assert_eq!(c.class, IntersectionClass::One);
        assert_eq!(c.witnesses.len(), 1);
        assert_eq!(c.witnesses[0].r, 0.0);

        let c = fg_intersection_count(&bp(1.0, 1.0)).unwrap();
        assert_eq!(c.class, IntersectionClass::TwoOrMore);
        assert!(c.witnesses.iter().any(|w| (w.r - 1.0).abs() < 1e-12));
        for w in &c.witnesses {
            assert!((4.0 * w.point.x + w.point.y * w.point.y).abs() <= 1e-8);
        }

        let c = fg_intersection_count(&bp(-2.0, 1.0)).unwrap();
        assert_eq!(c.class, IntersectionClass::Zero);
        assert!(c.witnesses.is_empty());

        assert_eq!(
            fg_intersection_count(&bp(-1.0, 2.0)).unwrap().class,
            IntersectionClass::One
        );
    }
}
