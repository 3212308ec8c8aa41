//! Rotation number of the closed loop of a nodal curve around a point, with
//! axis-ray crossing counts as a second witness.

use crate::curve::{
    f_eval, orbit, section_polys, special_parameters, BelochParams, CurveError, OrbitPoint,
};
use crate::geom::{Point, EPS_GEOM};
use crate::poly::{real_roots, PolyError};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const MAX_REFINEMENT_ROUNDS: usize = 20;
pub const DEFAULT_SAMPLES: usize = 1024;

const CLOSURE_TOL: f64 = 1e-8;
const RESIDUE_TOL: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WindingError {
    #[error("NotANode: 4p + q^2 = {0} is not positive")]
    NotANode(f64),
    #[error("NotClosed: endpoints differ by {0}")]
    NotClosed(f64),
    #[error("BadRange: need r0 < r1 and at least 8 samples")]
    BadRange,
    #[error("RefinementLimit: no stable winding after {0} rounds")]
    RefinementLimit(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

type ParamFn = Arc<dyn Fn(f64) -> Point + Send + Sync>;

/// A closed parametrized curve with an ordered sample over `[r0, r1]`.
#[derive(Clone)]
pub struct ClosedLoop {
    param: ParamFn,
    samples: Vec<OrbitPoint>,
}

impl fmt::Debug for ClosedLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedLoop")
            .field("range", &self.range())
            .field("samples", &self.samples.len())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    /// `None` when the loop passes through the center.
    pub value: Option<i64>,
    pub min_distance_to_center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayCrossings {
    pub east: usize,
    pub north: usize,
    pub west: usize,
    pub south: usize,
    /// Crossings found to be non-transversal.
    pub tangential: usize,
}

impl RayCrossings {
    pub fn all_once(&self) -> bool {
        [self.east, self.north, self.west, self.south] == [1; 4]
    }
}

/// The two parameters where the orbit passes through a node `P`.
pub fn loop_range(params: &BelochParams) -> Result<(f64, f64), WindingError> {
    if params.discriminant_sign() <= 0 {
        return Err(WindingError::NotANode(params.discriminant()));
    }
    let s = special_parameters(params);
    Ok((s[0], s[1]))
}

impl ClosedLoop {
    /// Samples `param` at `n` equally spaced parameters over `[r0, r1]`.
    pub fn from_fn<F>(param: F, r0: f64, r1: f64, n: usize) -> Result<Self, WindingError>
    where
        F: Fn(f64) -> Point + Send + Sync + 'static,
    {
        if r0.partial_cmp(&r1) != Some(std::cmp::Ordering::Less) || n < 8 {
            return Err(WindingError::BadRange);
        }
        let samples: Vec<OrbitPoint> = (0..n)
            .map(|i| {
                let r = if i == n - 1 {
                    r1
                } else {
                    r0 + (r1 - r0) * i as f64 / (n - 1) as f64
                };
                let pt = param(r);
                OrbitPoint {
                    r,
                    s: pt.x,
                    t: pt.y,
                }
            })
            .collect();
        let gap = samples[0].point().distance(samples[n - 1].point());
        if gap > CLOSURE_TOL * (1.0 + samples[0].point().norm()) {
            return Err(WindingError::NotClosed(gap));
        }
        Ok(ClosedLoop {
            param: Arc::new(param),
            samples,
        })
    }

    /// The loop of the curve between its two passes through the node.
    pub fn beloch(params: &BelochParams, n: usize) -> Result<Self, WindingError> {
        let (r0, r1) = loop_range(params)?;
        let par = *params;
        Self::from_fn(move |r| orbit(&par, r).point(), r0, r1, n)
    }

    /// Axis-aligned square traversed counterclockwise.
    pub fn square(center: Point, half: f64, n: usize) -> Result<Self, WindingError> {
        let corners = [
            Point::new(half, -half),
            Point::new(half, half),
            Point::new(-half, half),
            Point::new(-half, -half),
        ];
        Self::from_fn(
            move |u| {
                let v = 4.0 * u.clamp(0.0, 1.0);
                let k = (v.floor() as usize).min(3);
                let f = v - k as f64;
                let (a, b) = (corners[k], corners[(k + 1) % 4]);
                center + a * (1.0 - f) + b * f
            },
            0.0,
            1.0,
            n,
        )
    }

    pub fn circle(center: Point, radius: f64, n: usize) -> Result<Self, WindingError> {
        Self::from_fn(
            move |u| center + Point::new((TAU * u).cos(), (TAU * u).sin()) * radius,
            0.0,
            1.0,
            n,
        )
    }

    pub fn samples(&self) -> &[OrbitPoint] {
        &self.samples
    }

    pub fn range(&self) -> (f64, f64) {
        (self.samples[0].r, self.samples[self.samples.len() - 1].r)
    }

    pub fn eval(&self, r: f64) -> Point {
        (self.param)(r)
    }

    fn sample(&self, r: f64) -> OrbitPoint {
        let pt = self.eval(r);
        OrbitPoint {
            r,
            s: pt.x,
            t: pt.y,
        }
    }

    /// Smallest distance from `center` on `[a, b]` by golden-section search.
    fn min_distance_on(&self, center: Point, a: f64, b: f64) -> f64 {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let d = |r: f64| self.eval(r).distance(center);
        let (mut lo, mut hi) = (a, b);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (d(x1), d(x2));
        for _ in 0..120 {
            if hi - lo <= f64::EPSILON * (1.0 + lo.abs()) {
                break;
            }
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = d(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = d(x2);
            }
        }
        f1.min(f2).min(d(a)).min(d(b))
    }
}

fn angle_step(a: Point, b: Point) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// Winding number of `lp` around `center` by angle accumulation.
pub fn winding_number(lp: &ClosedLoop, center: Point) -> Result<WindingResult, WindingError> {
    let mut pts = lp.samples.clone();
    for round in 0..=MAX_REFINEMENT_ROUNDS {
        let rel: Vec<Point> = pts.iter().map(|o| o.point() - center).collect();
        let mut min_dist = rel.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if min_dist <= EPS_GEOM {
            return Ok(WindingResult {
                value: None,
                min_distance_to_center: min_dist,
            });
        }
        let mut total = 0.0;
        let mut bad = Vec::new();
        for i in 0..rel.len() {
            let j = (i + 1) % rel.len();
            let step = angle_step(rel[i], rel[j]);
            total += step;
            if j != 0 && step.abs() >= FRAC_PI_2 {
                bad.push(i);
            }
        }
        for &i in &bad {
            min_dist = min_dist.min(lp.min_distance_on(center, pts[i].r, pts[i + 1].r));
        }
        if min_dist <= EPS_GEOM {
            return Ok(WindingResult {
                value: None,
                min_distance_to_center: min_dist,
            });
        }
        let w = total / TAU;
        if bad.is_empty() && (w - w.round()).abs() < RESIDUE_TOL {
            return Ok(WindingResult {
                value: Some(w.round() as i64),
                min_distance_to_center: min_dist,
            });
        }
        if round == MAX_REFINEMENT_ROUNDS {
            break;
        }
        let targets: Vec<usize> = if bad.is_empty() {
            (0..pts.len() - 1).collect()
        } else {
            bad
        };
        let mut next = Vec::with_capacity(pts.len() + targets.len());
        let mut t = targets.iter().peekable();
        for i in 0..pts.len() {
            next.push(pts[i]);
            if t.peek() == Some(&&i) {
                t.next();
                next.push(lp.sample(0.5 * (pts[i].r + pts[i + 1].r)));
            }
        }
        pts = next;
    }
    Err(WindingError::RefinementLimit(MAX_REFINEMENT_ROUNDS))
}

/// Crossings of the four axis-parallel rays from `center` with the loop.
pub fn axis_ray_crossings(lp: &ClosedLoop, center: Point) -> RayCrossings {
    // (across, along) coordinates for east, north, west, south
    let frames: [fn(Point) -> (f64, f64); 4] = [
        |v| (v.y, v.x),
        |v| (-v.x, v.y),
        |v| (-v.y, -v.x),
        |v| (v.x, -v.y),
    ];
    let mut counts = [0usize; 4];
    let mut tangential = 0;
    let pts = &lp.samples;
    for (k, frame) in frames.iter().enumerate() {
        let across = |r: f64| frame(lp.eval(r) - center).0;
        let coords: Vec<(f64, f64)> = pts.iter().map(|o| frame(o.point() - center)).collect();
        for i in 0..pts.len() - 1 {
            let (g0, g1) = (coords[i].0, coords[i + 1].0);
            if g0 == 0.0 {
                if coords[i].1 > 0.0 {
                    let prev = coords[if i == 0 { pts.len() - 2 } else { i - 1 }].0;
                    if prev * g1 < 0.0 {
                        counts[k] += 1;
                    } else {
                        tangential += 1;
                    }
                }
                continue;
            }
            if g0 * g1 >= 0.0 {
                continue;
            }
            let (mut lo, mut hi) = (pts[i].r, pts[i + 1].r);
            let s_lo = g0.signum();
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if across(mid).signum() == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let root = 0.5 * (lo + hi);
            let (_, along) = frame(lp.eval(root) - center);
            if along > 0.0 {
                counts[k] += 1;
                let h = 1e-7 * (1.0 + root.abs());
                let slope = (across(root + h) - across(root - h)) / (2.0 * h);
                if slope.abs() <= 1e-9 {
                    tangential += 1;
                }
            }
        }
    }
    RayCrossings {
        east: counts[0],
        north: counts[1],
        west: counts[2],
        south: counts[3],
        tangential,
    }
}

/// Whether the curve passes through the anchor `A`, where
/// `F(A) = -(p - 1)((p + 1)^2 + q^2)` at unit scale.
pub fn curve_through_a_test(params: &BelochParams) -> bool {
    let a = params.anchor();
    let tol = 1e-9 * params.coord_scale().powi(3);
    f_eval(params, a.x, a.y).abs() <= tol
}

/// Roots of the two axis sections through `A` relevant to the ray argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionCheck {
    /// Roots of `F(-1, t)`.
    pub vertical_roots: Vec<f64>,
    pub opposite_signs: bool,
    /// Roots of `F(s, 0)` within the loop's range of `s`.
    pub horizontal_roots_on_loop: Vec<f64>,
    pub straddles_anchor: bool,
}

pub fn section_check(params: &BelochParams, lp: &ClosedLoop) -> Result<SectionCheck, WindingError> {
    let (vert, horiz) = section_polys(params)?;
    let vertical_roots: Vec<f64> = real_roots(&vert, None)?.iter().map(|r| r.value).collect();
    let opposite_signs = vertical_roots.len() == 2 && vertical_roots[0] * vertical_roots[1] < 0.0;
    let (s_min, s_max) = lp
        .samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), o| {
            (a.min(o.s), b.max(o.s))
        });
    let pad = 1e-9 * params.coord_scale();
    let horizontal_roots_on_loop: Vec<f64> = real_roots(&horiz, Some((s_min - pad, s_max + pad)))?
        .iter()
        .map(|r| r.value)
        .collect();
    let straddles_anchor = horizontal_roots_on_loop.len() == 2
        && horizontal_roots_on_loop[0] < -1.0
        && horizontal_roots_on_loop[1] > -1.0;
    Ok(SectionCheck {
        vertical_roots,
        opposite_signs,
        horizontal_roots_on_loop,
        straddles_anchor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fold::A;

    fn bp(p: f64, q: f64) -> BelochParams {
        BelochParams::new(p, q).unwrap()
    }

    #[test]
    fn loop_range_examples() {
        assert_eq!(loop_range(&bp(2.0, 1.0)).unwrap(), (-1.0, 2.0));
        let (a, b) = loop_range(&bp(1.0, 1.0)).unwrap();
        assert!((a - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((b - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!(matches!(
            loop_range(&bp(-2.0, 1.0)),
            Err(WindingError::NotANode(_))
        ));
    }

    #[test]
    fn winding_examples() {
        let lp = ClosedLoop::beloch(&bp(2.0, 1.0), DEFAULT_SAMPLES).unwrap();
        assert_eq!(winding_number(&lp, A).unwrap().value, Some(1));
        let lp = ClosedLoop::beloch(&bp(0.5, 2.0), DEFAULT_SAMPLES).unwrap();
        assert_eq!(winding_number(&lp, A).unwrap().value, Some(0));
        let sq = ClosedLoop::square(Point::new(0.0, 0.0), 0.5, 64).unwrap();
        assert_eq!(
            winding_number(&sq, Point::new(0.0, 0.0)).unwrap().value,
            Some(1)
        );
        assert_eq!(
            winding_number(&sq, Point::new(3.0, 0.0)).unwrap().value,
            Some(0)
        );
    }

    #[test]
    fn winding_through_center_is_undefined() {
        let lp = ClosedLoop::beloch(&bp(1.0, 5.0), DEFAULT_SAMPLES).unwrap();
        let w = winding_number(&lp, A).unwrap();
        assert_eq!(w.value, None);
        assert!(w.min_distance_to_center <= EPS_GEOM);
        let sq = ClosedLoop::square(Point::new(0.0, 0.0), 0.5, 64).unwrap();
        assert_eq!(
            winding_number(&sq, Point::new(0.5, 0.1)).unwrap().value,
            None
        );
    }

    #[test]
    fn ray_examples() {
        let lp = ClosedLoop::beloch(&bp(2.0, 1.0), DEFAULT_SAMPLES).unwrap();
        assert!(axis_ray_crossings(&lp, A).all_once());
        let lp = ClosedLoop::beloch(&bp(0.5, 2.0), DEFAULT_SAMPLES).unwrap();
        let c = axis_ray_crossings(&lp, A);
        assert!([c.east, c.north, c.west, c.south].contains(&0));
        let circle = ClosedLoop::circle(Point::new(1.0, -2.0), 0.7, 100).unwrap();
        let c = axis_ray_crossings(&circle, Point::new(1.0, -2.0));
        assert!(c.all_once());
        assert_eq!(c.tangential, 0);
    }

    #[test]
    fn through_a_examples() {
        assert!(curve_through_a_test(&bp(1.0, 5.0)));
        assert!(curve_through_a_test(&bp(-1.0, 0.0)));
        assert!(!curve_through_a_test(&bp(2.0, 1.0)));
    }

    #[test]
    fn section_check_example() {
        let par = bp(2.0, 1.0);
        let lp = ClosedLoop::beloch(&par, DEFAULT_SAMPLES).unwrap();
        let sc = section_check(&par, &lp).unwrap();
        assert!(sc.opposite_signs);
        assert!(sc.straddles_anchor, "{sc:?}");
    }

    #[test]
    fn not_closed() {
        assert!(matches!(
            ClosedLoop::from_fn(|u| Point::new(u, 0.0), 0.0, 1.0, 16),
            Err(WindingError::NotClosed(_))
        ));
    }
}
