//! The Beloch curve `F(x, y) = 0` and the orbit of the reflected point.
//!
//! For a scale `alpha` the folds carry `A(-alpha/2, 0)` onto `x = alpha/2`.
//! Parametrized by `r`, the fold is `x + r y - (alpha/2) r^2 = 0` and `A` lands
//! on `A'(alpha/2, alpha r)`; with `alpha = 2` this is the unit picture where
//! `r` is the y-intercept. Reflecting `P(p, q)` in every such fold traces
//!
//! ```text
//! F(x, y) = alpha (q - y)^2 - (q + y)(q - y)(p - x) - (p - x)^2 (p + x)
//! ```
//!
//! and the shape at the singular point `P` is read off the sign of
//! `D = 2 alpha p + q^2` (`4p + q^2` in the unit picture).

use crate::geom::{
    position_wrt_circle, reflect_point, segments_intersect, sign_with_band, Circle, CirclePosition,
    Line, Point, Rect, Segment, EPS_GEOM,
};
use crate::poly::Poly;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative band around `D = 0` inside which the shape is decided by sampling.
pub const EPS_CLS: f64 = 1e-9;

/// Radii of the punctured circles used by the local-shape oracle.
pub const SAMPLING_RADII: [f64; 3] = [1e-3, 1e-2, 1e-1];

const SAMPLING_ANGLES: usize = 8192;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("NonFinite: curve parameters must be finite")]
    NonFinite,
    #[error("ZeroScale: alpha must be nonzero")]
    ZeroScale,
    #[error("UnsupportedScale: operation requires alpha = 2, got {0}")]
    UnsupportedScale(f64),
    #[error("BadGrid: grid_n must be at least 16, got {0}")]
    BadGrid(usize),
    #[error(
        "OracleDisagreement: (p, q, r) = ({p}, {q}, {r}): segments {segments:?}, circle {circle:?}, abscissa {abscissa:?}"
    )]
    OracleDisagreement {
        p: f64,
        q: f64,
        r: f64,
        segments: SegmentRelation,
        circle: SegmentRelation,
        abscissa: SegmentRelation,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BelochParams {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

impl OrbitPoint {
    pub fn point(&self) -> Point {
        Point::new(self.s, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeClass {
    IsolatedPoint,
    Cusp,
    Node,
    Degenerate,
}

impl ShapeClass {
    pub fn name(&self) -> &'static str {
        match self {
            ShapeClass::IsolatedPoint => "IsolatedPoint",
            ShapeClass::Cusp => "Cusp",
            ShapeClass::Node => "Node",
            ShapeClass::Degenerate => "Degenerate",
        }
    }
}

/// How the segments `AP` and `A'P'` meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentRelation {
    Coincide,
    Intersect,
    Disjoint,
}

impl BelochParams {
    /// Unit scale, `alpha = 2`.
    pub fn new(p: f64, q: f64) -> Result<Self, CurveError> {
        Self::with_alpha(p, q, 2.0)
    }

    pub fn with_alpha(p: f64, q: f64, alpha: f64) -> Result<Self, CurveError> {
        if !(p.is_finite() && q.is_finite() && alpha.is_finite()) {
            return Err(CurveError::NonFinite);
        }
        if alpha == 0.0 {
            return Err(CurveError::ZeroScale);
        }
        Ok(BelochParams { p, q, alpha })
    }

    pub fn is_unit_scale(&self) -> bool {
        self.alpha == 2.0
    }

    pub(crate) fn require_unit_scale(&self) -> Result<(), CurveError> {
        if self.is_unit_scale() {
            Ok(())
        } else {
            Err(CurveError::UnsupportedScale(self.alpha))
        }
    }

    pub fn singular_point(&self) -> Point {
        Point::new(self.p, self.q)
    }

    /// The point carried onto the directrix, `A(-alpha/2, 0)`.
    pub fn anchor(&self) -> Point {
        Point::new(-0.5 * self.alpha, 0.0)
    }

    pub fn directrix_x(&self) -> f64 {
        0.5 * self.alpha
    }

    /// Image of the anchor under the fold with parameter `r`.
    pub fn anchor_image(&self, r: f64) -> Point {
        Point::new(0.5 * self.alpha, self.alpha * r)
    }

    /// `x + r y - (alpha/2) r^2 = 0`.
    pub fn fold_line(&self, r: f64) -> Line {
        Line::new(1.0, r, -0.5 * self.alpha * r * r).expect("x-coefficient is 1")
    }

    /// `D = 2 alpha p + q^2`; equals `4p + q^2` at unit scale.
    pub fn discriminant(&self) -> f64 {
        2.0 * self.alpha * self.p + self.q * self.q
    }

    /// Magnitude against which `D` is compared: `1 + |alpha p|/2 + q^2`.
    pub fn scale(&self) -> f64 {
        1.0 + 0.5 * (self.alpha * self.p).abs() + self.q * self.q
    }

    /// `1 + |p| + |q|`, the coordinate scale of the picture.
    pub fn coord_scale(&self) -> f64 {
        1.0 + self.p.abs() + self.q.abs() + 0.5 * (self.alpha - 2.0).abs()
    }

    /// Sign of `D` with the `EPS_CLS` band.
    pub fn discriminant_sign(&self) -> i8 {
        sign_with_band(self.discriminant(), EPS_CLS * self.scale())
    }

    /// Circle about `P` through the anchor.
    pub fn circle(&self) -> Circle {
        let c = self.singular_point();
        Circle::new(c, c.distance(self.anchor())).expect("finite parameters")
    }
}

pub fn f_eval(params: &BelochParams, x: f64, y: f64) -> f64 {
    let BelochParams { p, q, alpha } = *params;
    let (u, v) = (p - x, q - y);
    alpha * v * v - (q + y) * v * u - u * u * (p + x)
}

/// `(F_x, F_y)`.
pub fn gradient(params: &BelochParams, x: f64, y: f64) -> (f64, f64) {
    let BelochParams { p, q, alpha } = *params;
    let fx = (q + y) * (q - y) + (p - x) * (p + 3.0 * x);
    let fy = -2.0 * alpha * (q - y) + 2.0 * y * (p - x);
    (fx, fy)
}

/// `(F_xx, F_xy, F_yy)`.
pub fn second_partials(params: &BelochParams, x: f64, y: f64) -> (f64, f64, f64) {
    let BelochParams { p, alpha, .. } = *params;
    (2.0 * p - 6.0 * x, -2.0 * y, 2.0 * alpha + 2.0 * p - 2.0 * x)
}

/// Hessian determinant at `P`: `-4(2 alpha p + q^2)`, i.e. `-4(4p + q^2)`.
pub fn hessian_at_singular(params: &BelochParams) -> f64 {
    -4.0 * (2.0 * params.alpha * params.p + params.q * params.q)
}

/// Reflection of `P` in the fold with parameter `r`, in closed form.
pub fn orbit(params: &BelochParams, r: f64) -> OrbitPoint {
    let BelochParams { p, q, alpha } = *params;
    let d = r * r + 1.0;
    let s = ((p + alpha) * r * r - 2.0 * q * r - p) / d;
    let t = (((alpha * r - q) * r - 2.0 * p) * r + q) / d;
    OrbitPoint { r, s, t }
}

/// Parameters where the orbit returns to `P`: roots of
/// `(alpha/2) r^2 - q r - p = 0`, ascending.
pub fn special_parameters(params: &BelochParams) -> Vec<f64> {
    let BelochParams { q, alpha, .. } = *params;
    match params.discriminant_sign() {
        -1 => Vec::new(),
        0 => vec![q / alpha],
        _ => {
            let sq = params.discriminant().sqrt();
            let mut v = [(q - sq) / alpha, (q + sq) / alpha];
            v.sort_by(f64::total_cmp);
            v.to_vec()
        }
    }
}

/// Number of sign changes of `f` around the circle of `radius` about
/// `center`, sampled at `n` equally spaced angles (cyclically).
pub fn count_sign_flips<F: Fn(f64, f64) -> f64>(
    f: F,
    center: Point,
    radius: f64,
    n: usize,
) -> usize {
    let signs: Vec<i8> = (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / n as f64;
            let v = f(center.x + radius * th.cos(), center.y + radius * th.sin());
            sign_with_band(v, 0.0)
        })
        .filter(|&s| s != 0)
        .collect();
    if signs.is_empty() {
        return 0;
    }
    let mut flips = 0;
    for i in 0..signs.len() {
        if signs[i] != signs[(i + 1) % signs.len()] {
            flips += 1;
        }
    }
    flips
}

/// Sign-flip counts of `F` around `P` at each of [`SAMPLING_RADII`].
pub fn local_flip_counts(params: &BelochParams) -> [usize; 3] {
    let c = params.singular_point();
    SAMPLING_RADII.map(|rho| count_sign_flips(|x, y| f_eval(params, x, y), c, rho, SAMPLING_ANGLES))
}

/// Shape from flip counts: 0 isolated, 2 cusp, 4 node, anything else (or
/// disagreement across radii) degenerate.
pub fn shape_from_flips(counts: &[usize]) -> ShapeClass {
    let first = counts[0];
    if counts.iter().any(|&c| c != first) {
        return ShapeClass::Degenerate;
    }
    match first {
        0 => ShapeClass::IsolatedPoint,
        2 => ShapeClass::Cusp,
        4 => ShapeClass::Node,
        _ => ShapeClass::Degenerate,
    }
}

/// Shape of the curve at `P`.
pub fn classify(params: &BelochParams) -> ShapeClass {
    match params.discriminant_sign() {
        -1 => ShapeClass::IsolatedPoint,
        1 => ShapeClass::Node,
        _ => match shape_from_flips(&local_flip_counts(params)) {
            ShapeClass::Cusp => ShapeClass::Cusp,
            _ => ShapeClass::Degenerate,
        },
    }
}

/// Outcome of [`singular_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularScan {
    pub points: Vec<Point>,
    /// Seeds whose Newton iteration did not converge.
    pub non_converged: usize,
}

const NEWTON_MAX_ITER: usize = 50;
const MERGE_RADIUS: f64 = 1e-6;

/// Damped Newton on `grad F = 0` from `seed`. `None` when it fails to reach
/// `|grad F| <= 1e-11 * coord_scale^2`.
pub(crate) fn newton_critical(params: &BelochParams, seed: Point) -> Option<Point> {
    let tol = 1e-11 * params.coord_scale().powi(2);
    let norm2 = |pt: Point| {
        let (gx, gy) = gradient(params, pt.x, pt.y);
        gx * gx + gy * gy
    };
    let mut x = seed;
    let mut g2 = norm2(x);
    for _ in 0..NEWTON_MAX_ITER {
        if g2.sqrt() <= tol {
            return Some(x);
        }
        let (gx, gy) = gradient(params, x.x, x.y);
        let (hxx, hxy, hyy) = second_partials(params, x.x, x.y);
        let det = hxx * hyy - hxy * hxy;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let step = Point::new((hyy * gx - hxy * gy) / det, (hxx * gy - hxy * gx) / det);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = x - step * lambda;
            let c2 = norm2(cand);
            if c2 < g2 {
                x = cand;
                g2 = c2;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (g2.sqrt() <= tol).then_some(x)
}

/// Merges points closer than `radius`, keeping first occurrences, then sorts
/// by `y` then `x`.
pub(crate) fn merge_points(points: impl IntoIterator<Item = Point>, radius: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.distance(p) <= radius) {
            out.push(p);
        }
    }
    out.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
    out
}

/// Grid-seeded search for common zeros of `F`, `F_x`, `F_y` in `window`.
pub fn singular_scan(
    params: &BelochParams,
    window: &Rect,
    grid_n: usize,
) -> Result<SingularScan, CurveError> {
    if grid_n < 16 {
        return Err(CurveError::BadGrid(grid_n));
    }
    let f_tol = 1e-9 * params.coord_scale().powi(3);
    let mut non_converged = 0;
    let mut found = Vec::new();
    for i in 0..grid_n {
        for j in 0..grid_n {
            let seed = Point::new(
                window.x0 + window.width() * (i as f64 + 0.5) / grid_n as f64,
                window.y0 + window.height() * (j as f64 + 0.5) / grid_n as f64,
            );
            match newton_critical(params, seed) {
                Some(c) => {
                    if window.contains(c) && f_eval(params, c.x, c.y).abs() <= f_tol {
                        found.push(c);
                    }
                }
                None => non_converged += 1,
            }
        }
    }
    Ok(SingularScan {
        points: merge_points(found, MERGE_RADIUS),
        non_converged,
    })
}

/// `F(-1, t)` as a polynomial in `t` and `F(s, 0)` in `s` (unit scale).
pub fn section_polys(params: &BelochParams) -> Result<(Poly, Poly), CurveError> {
    params.require_unit_scale()?;
    let BelochParams { p, q, .. } = *params;
    let (p2, q2) = (p * p, q * q);
    let vertical = vec![1.0 + p - p2 - p2 * p + q2 - p * q2, -4.0 * q, 3.0 + p];
    let horizontal = vec![-p2 * p + 2.0 * q2 - p * q2, p2 + q2, p, -1.0];
    Ok((
        Poly::new(vertical).expect("finite section"),
        Poly::new(horizontal).expect("finite section"),
    ))
}

/// Relation of `AP` and `A'P'` for the fold with parameter `r`, decided by
/// three independent tests that must agree: the segments themselves, the
/// position of `A'` against the circle about `P` through `A`, and the sign of
/// `p - s`.
pub fn segment_relation(params: &BelochParams, r: f64) -> Result<SegmentRelation, CurveError> {
    let a = params.anchor();
    let a_img = params.anchor_image(r);
    let p = params.singular_point();
    let p_img = orbit(params, r).point();

    let by_segments = if p.distance(p_img) <= EPS_GEOM {
        SegmentRelation::Coincide
    } else {
        let ap = Segment::new(a, p).unwrap_or_else(|_| Segment::point(a));
        let ap_img = Segment::new(a_img, p_img).unwrap_or_else(|_| Segment::point(a_img));
        if segments_intersect(&ap, &ap_img) {
            SegmentRelation::Intersect
        } else {
            SegmentRelation::Disjoint
        }
    };

    let by_circle = match position_wrt_circle(a_img, &params.circle()) {
        CirclePosition::Inside => SegmentRelation::Intersect,
        CirclePosition::On => SegmentRelation::Coincide,
        CirclePosition::Outside => SegmentRelation::Disjoint,
    };

    let by_abscissa = match sign_with_band(params.alpha.signum() * (params.p - p_img.x), EPS_GEOM) {
        1 => SegmentRelation::Intersect,
        0 => SegmentRelation::Coincide,
        _ => SegmentRelation::Disjoint,
    };

    if by_segments == by_circle && by_circle == by_abscissa {
        Ok(by_segments)
    } else {
        Err(CurveError::OracleDisagreement {
            p: params.p,
            q: params.q,
            r,
            segments: by_segments,
            circle: by_circle,
            abscissa: by_abscissa,
        })
    }
}

/// Orbit point computed by reflecting `P` in the fold line directly.
pub fn orbit_by_reflection(params: &BelochParams, r: f64) -> Point {
    reflect_point(params.singular_point(), &params.fold_line(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(p: f64, q: f64) -> BelochParams {
        BelochParams::new(p, q).unwrap()
    }

    #[test]
    fn f_examples() {
        for (p, q) in [(1.0, 1.0), (-2.0, 1.0), (0.3, -4.2)] {
            assert_eq!(f_eval(&bp(p, q), p, q), 0.0);
        }
        assert_eq!(f_eval(&bp(1.0, 1.0), 0.0, 0.0), 0.0);
        let par = bp(2.0, 1.0);
        assert_eq!(f_eval(&par, -1.0, 0.0), -10.0);
        assert_eq!(f_eval(&par, -1.0, 0.0), -(2.0 - 1.0) * (9.0 + 1.0));
    }

    #[test]
    fn gradient_examples() {
        let par = bp(1.0, 1.0);
        assert_eq!(gradient(&par, 1.0, 1.0), (0.0, 0.0));
        assert_eq!(gradient(&par, 0.0, 0.0), (2.0, -4.0));
        let h = 1e-5;
        for &(x, y) in &[(0.3, -0.7), (2.5, 1.5), (-3.0, 4.0)] {
            let (gx, gy) = gradient(&par, x, y);
            let fdx = (f_eval(&par, x + h, y) - f_eval(&par, x - h, y)) / (2.0 * h);
            let fdy = (f_eval(&par, x, y + h) - f_eval(&par, x, y - h)) / (2.0 * h);
            assert!((gx - fdx).abs() < 1e-6 && (gy - fdy).abs() < 1e-6);
        }
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(hessian_at_singular(&bp(1.0, 1.0)), -20.0);
        assert_eq!(hessian_at_singular(&bp(0.0, 0.0)), 0.0);
        assert_eq!(hessian_at_singular(&bp(-2.0, 1.0)), 28.0);
        let (fxx, fxy, fyy) = second_partials(&bp(1.0, 1.0), 1.0, 1.0);
        assert_eq!(fxx * fyy - fxy * fxy, -20.0);
    }

    #[test]
    fn orbit_examples() {
        let o = orbit(&bp(1.0, 1.0), 1.0);
        assert_eq!((o.s, o.t), (0.0, 0.0));
        let by_reflection = orbit_by_reflection(&bp(1.0, 1.0), 1.0);
        assert!(by_reflection.distance(Point::new(0.0, 0.0)) < 1e-15);
        let o = orbit(&bp(0.7, -2.3), 0.0);
        assert_eq!((o.s, o.t), (-0.7, -2.3));
        let o = orbit(&bp(2.0, 1.0), 2.0);
        assert_eq!((o.s, o.t), (2.0, 1.0));
    }

    #[test]
    fn general_scale_orbit_matches_reflection() {
        for alpha in [-3.0, 0.5, 1.0, 2.0, 7.5] {
            let par = BelochParams::with_alpha(0.8, -1.3, alpha).unwrap();
            for k in -30..=30 {
                let r = k as f64 * 0.41;
                let o = orbit(&par, r);
                assert!(o.point().distance(orbit_by_reflection(&par, r)) < 1e-12);
                assert!(f_eval(&par, o.s, o.t).abs() < 1e-9 * (1.0 + r * r).powi(2));
                // the anchor lands on the directrix
                let img = reflect_point(par.anchor(), &par.fold_line(r));
                assert!(img.distance(par.anchor_image(r)) < 1e-12 * (1.0 + r.abs()));
            }
        }
    }

    #[test]
    fn special_parameter_examples() {
        let s = special_parameters(&bp(1.0, 1.0));
        let e = [(1.0 - 5f64.sqrt()) / 2.0, (1.0 + 5f64.sqrt()) / 2.0];
        assert_eq!(s.len(), 2);
        for (v, e) in s.iter().zip(e) {
            assert!((v - e).abs() < 1e-15);
            let o = orbit(&bp(1.0, 1.0), *v);
            assert!(o.point().distance(Point::new(1.0, 1.0)) < 1e-12);
        }
        assert_eq!(special_parameters(&bp(0.0, 0.0)), vec![0.0]);
        assert!(special_parameters(&bp(-2.0, 1.0)).is_empty());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&bp(-2.0, 1.0)), ShapeClass::IsolatedPoint);
        assert_eq!(classify(&bp(-1.0, 2.0)), ShapeClass::Cusp);
        assert_eq!(classify(&bp(1.0, 1.0)), ShapeClass::Node);
        assert_eq!(classify(&bp(0.0, 0.0)), ShapeClass::Cusp);
        assert_eq!(local_flip_counts(&bp(-2.0, 1.0)), [0, 0, 0]);
        assert_eq!(local_flip_counts(&bp(-1.0, 2.0)), [2, 2, 2]);
        assert_eq!(local_flip_counts(&bp(1.0, 1.0)), [4, 4, 4]);
    }

    #[test]
    fn singular_scan_examples() {
        let w = Rect::square(5.0);
        let s = singular_scan(&bp(1.0, 1.0), &w, 24).unwrap();
        assert_eq!(s.points.len(), 1);
        assert!(s.points[0].distance(Point::new(1.0, 1.0)) < 1e-6);
        let s = singular_scan(&bp(-2.0, 1.0), &w, 24).unwrap();
        assert_eq!(s.points.len(), 1);
        assert!(s.points[0].distance(Point::new(-2.0, 1.0)) < 1e-6);
        let far = Rect::new(10.0, 10.0, 12.0, 12.0).unwrap();
        assert!(singular_scan(&bp(1.0, 1.0), &far, 16)
            .unwrap()
            .points
            .is_empty());
        assert_eq!(
            singular_scan(&bp(1.0, 1.0), &w, 8),
            Err(CurveError::BadGrid(8))
        );
    }

    #[test]
    fn section_examples() {
        let par = bp(2.0, 1.0);
        let (vert, horiz) = section_polys(&par).unwrap();
        assert_eq!(vert.coeffs(), &[-10.0, -4.0, 5.0]);
        assert_eq!(horiz.coeffs(), &[-8.0, 5.0, 2.0, -1.0]);
        for (a, b) in [(-2.2, -2.0), (1.0, 2.5), (2.5, 3.0)] {
            assert!(horiz.eval(a) * horiz.eval(b) < 0.0);
        }
        for t in [-3.0, 0.5, 2.0] {
            assert_eq!(vert.eval(t), f_eval(&par, -1.0, t));
            assert_eq!(horiz.eval(t), f_eval(&par, t, 0.0));
        }
        assert!(section_polys(&BelochParams::with_alpha(1.0, 1.0, 3.0).unwrap()).is_err());
    }

    #[test]
    fn segment_relation_examples() {
        let par = bp(1.0, 1.0);
        assert_eq!(
            segment_relation(&par, 1.0).unwrap(),
            SegmentRelation::Intersect
        );
        let star = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(
            segment_relation(&par, star).unwrap(),
            SegmentRelation::Coincide
        );
        assert_eq!(
            segment_relation(&par, 10.0).unwrap(),
            SegmentRelation::Disjoint
        );
        // P = A: the circle has radius zero
        let pa = bp(-1.0, 0.0);
        assert_eq!(
            segment_relation(&pa, 0.3).unwrap(),
            SegmentRelation::Disjoint
        );
    }

    #[test]
    fn params_validation() {
        assert_eq!(
            BelochParams::with_alpha(1.0, 1.0, 0.0),
            Err(CurveError::ZeroScale)
        );
        assert_eq!(BelochParams::new(f64::NAN, 1.0), Err(CurveError::NonFinite));
    }
}
