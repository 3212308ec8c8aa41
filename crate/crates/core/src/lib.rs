//! Beloch's fold for real cubics and the geometry of the curve it traces.
//!
//! A fold that carries `A(-1, 0)` onto the line `x = 1` and `P(b, a + c)` onto
//! `y = a - c` has a y-intercept `r` solving `x^3 - a x^2 - b x + c = 0`.
//! Letting the fold range over every line that satisfies only the first
//! condition, the reflections of `P` sweep out the cubic
//!
//! ```text
//! F(x, y) = 2(q - y)^2 - (q + y)(q - y)(p - x) - (p - x)^2 (p + x) = 0
//! ```
//!
//! whose unique singular point is `P(p, q)`. This crate solves cubics by the
//! fold, analyses `F` (singular point, local shape, winding of its loop,
//! intersections with the parabola `4x + y^2 = 0`), and checks each claim
//! against an independent numerical oracle.

pub mod curve;
pub mod fold;
pub mod general;
pub mod geom;
pub mod parabola;
pub mod poly;
pub mod render;
pub mod report;
pub mod surface;
pub mod verify;
pub mod winding;

pub use curve::{BelochParams, OrbitPoint, SegmentRelation, ShapeClass};
pub use fold::{CubicEq, FoldSolution};
pub use general::{GeneralCubic, Normalization};
pub use geom::{Circle, Line, Point, Rect, Segment};
pub use poly::{Poly, Root};
