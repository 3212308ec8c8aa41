//! Planar primitives: points, normalized lines, segments and circles.
//!
//! Every predicate here uses the absolute band [`EPS_GEOM`] on normalized
//! quantities, so lines compare by their coefficients and "on the line" means
//! within `1e-9` of it.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

/// Absolute tolerance for evaluations of normalized lines and distances.
pub const EPS_GEOM: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("DegenerateInput: {0}")]
    DegenerateInput(&'static str),
    #[error("NonFinite: {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The line `a x + b y + c = 0`, stored with `a^2 + b^2 = 1` and the first
/// nonzero of `(a, b)` positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    a: f64,
    b: f64,
    c: f64,
}

impl Line {
    /// Normalizes `a x + b y + c = 0`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeomError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(GeomError::NonFinite("line coefficients"));
        }
        let n = a.hypot(b);
        if n == 0.0 {
            return Err(GeomError::DegenerateInput("line normal is zero"));
        }
        let sign = if a > 0.0 || (a == 0.0 && b > 0.0) {
            1.0
        } else {
            -1.0
        };
        let k = sign / n;
        Ok(Line {
            a: a * k,
            b: b * k,
            c: c * k,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Signed distance of `p` from the line.
    pub fn eval(&self, p: Point) -> f64 {
        self.a * p.x + self.b * p.y + self.c
    }

    /// Largest coefficient difference against `other`.
    pub fn max_coeff_diff(&self, other: &Line) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y + {} = 0", self.a, self.b, self.c)
    }
}

/// A closed segment. A zero-length segment must be built with
/// [`Segment::point`] and behaves as its single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: Point,
    pub end: Point,
    degenerate: bool,
}

impl Segment {
    pub fn new(start: Point, end: Point) -> Result<Self, GeomError> {
        if start == end {
            return Err(GeomError::DegenerateInput("segment endpoints coincide"));
        }
        Ok(Segment {
            start,
            end,
            degenerate: false,
        })
    }

    /// Zero-length segment at `p`.
    pub fn point(p: Point) -> Self {
        Segment {
            start: p,
            end: p,
            degenerate: true,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        if !radius.is_finite() || !center.is_finite() {
            return Err(GeomError::NonFinite("circle"));
        }
        if radius < 0.0 {
            return Err(GeomError::DegenerateInput("negative radius"));
        }
        Ok(Circle { center, radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeomError> {
        if ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) {
            return Err(GeomError::NonFinite("rectangle"));
        }
        if !(x0 < x1 && y0 < y1) {
            return Err(GeomError::DegenerateInput("empty rectangle"));
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    pub fn square(half: f64) -> Self {
        Rect {
            x0: -half,
            y0: -half,
            x1: half,
            y1: half,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// Smallest rectangle containing `self` and `p` with `margin` around `p`.
    pub fn including(&self, p: Point, margin: f64) -> Rect {
        Rect {
            x0: self.x0.min(p.x - margin),
            y0: self.y0.min(p.y - margin),
            x1: self.x1.max(p.x + margin),
            y1: self.y1.max(p.y + margin),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CirclePosition {
    Inside,
    On,
    Outside,
}

/// Mirror image of `p` in `l`.
pub fn reflect_point(p: Point, l: &Line) -> Point {
    let d = l.eval(p);
    Point::new(p.x - 2.0 * d * l.a, p.y - 2.0 * d * l.b)
}

/// Perpendicular bisector of `p` and `q`.
pub fn perp_bisector(p: Point, q: Point) -> Result<Line, GeomError> {
    if p == q {
        return Err(GeomError::DegenerateInput(
            "bisector of a point with itself",
        ));
    }
    let n = q - p;
    let c = -0.5 * (q.dot(q) - p.dot(p));
    Line::new(n.x, n.y, c)
}

/// Sign of `l` at `p`, reporting `0` inside the `EPS_GEOM` band.
pub fn side_of(l: &Line, p: Point) -> i8 {
    sign_with_band(l.eval(p), EPS_GEOM)
}

pub(crate) fn sign_with_band(v: f64, band: f64) -> i8 {
    if v > band {
        1
    } else if v < -band {
        -1
    } else {
        0
    }
}

fn orientation(a: Point, b: Point, c: Point) -> i8 {
    let u = b - a;
    let v = c - a;
    let scale = (u.norm() * v.norm()).max(1.0);
    sign_with_band(u.cross(v), EPS_GEOM * scale)
}

// `c` lies within the bounding box of `ab`, padded by the tolerance.
fn within_box(a: Point, b: Point, c: Point) -> bool {
    c.x >= a.x.min(b.x) - EPS_GEOM
        && c.x <= a.x.max(b.x) + EPS_GEOM
        && c.y >= a.y.min(b.y) - EPS_GEOM
        && c.y <= a.y.max(b.y) + EPS_GEOM
}

fn point_on_segment(p: Point, s: &Segment) -> bool {
    if s.degenerate {
        return p.distance(s.start) <= EPS_GEOM;
    }
    orientation(s.start, s.end, p) == 0 && within_box(s.start, s.end, p)
}

/// Whether two closed segments share at least one point.
pub fn segments_intersect(s1: &Segment, s2: &Segment) -> bool {
    match (s1.degenerate, s2.degenerate) {
        (true, true) => return s1.start.distance(s2.start) <= EPS_GEOM,
        (true, false) => return point_on_segment(s1.start, s2),
        (false, true) => return point_on_segment(s2.start, s1),
        (false, false) => {}
    }
    let (p1, p2, q1, q2) = (s1.start, s1.end, s2.start, s2.end);
    let o1 = orientation(p1, p2, q1);
    let o2 = orientation(p1, p2, q2);
    let o3 = orientation(q1, q2, p1);
    let o4 = orientation(q1, q2, p2);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(p1, p2, q1))
        || (o2 == 0 && within_box(p1, p2, q2))
        || (o3 == 0 && within_box(q1, q2, p1))
        || (o4 == 0 && within_box(q1, q2, p2))
}

pub fn position_wrt_circle(p: Point, c: &Circle) -> CirclePosition {
    let d = p.distance(c.center);
    match sign_with_band(d - c.radius, EPS_GEOM) {
        -1 => CirclePosition::Inside,
        0 => CirclePosition::On,
        _ => CirclePosition::Outside,
    }
}
