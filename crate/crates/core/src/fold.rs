//! Solving `x^3 - a x^2 - b x + c = 0` with a single Axiom-6 fold.
//!
//! The fold with y-intercept `r` is `x + r y - r^2 = 0`, the perpendicular
//! bisector of `A(-1, 0)` and `A'(1, 2r)`, so it always carries `A` onto the
//! directrix `x = 1`. It carries `P(b, a + c)` onto `y = a - c` exactly when
//! `r` is a root of the cubic.

use crate::geom::{reflect_point, Line, Point};
use crate::poly::{real_roots, Poly, PolyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const A: Point = Point::new(-1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoldError {
    #[error("NotAFoldLine: {0}")]
    NotAFoldLine(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The monic cubic `x^3 - a x^2 - b x + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicEq {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CubicEq {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        CubicEq { a, b, c }
    }

    /// The point `P(b, a + c)` that must land on the second line.
    pub fn p_point(&self) -> Point {
        Point::new(self.b, self.a + self.c)
    }

    /// Height of the second line `y = a - c`.
    pub fn target_y(&self) -> f64 {
        self.a - self.c
    }

    pub fn eval(&self, x: f64) -> f64 {
        ((x - self.a) * x - self.b) * x + self.c
    }

    pub fn as_poly(&self) -> Result<Poly, PolyError> {
        Poly::new(vec![self.c, -self.b, -self.a, 1.0])
    }

    /// `1 + |a| + |b| + |c|`.
    pub fn scale(&self) -> f64 {
        1.0 + self.a.abs() + self.b.abs() + self.c.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldSolution {
    pub r: f64,
    pub fold: Line,
    pub a_image: Point,
    pub p_image: Point,
    /// Distance of `a_image` from `x = 1`.
    pub residual_i: f64,
    /// Distance of `p_image` from `y = a - c`.
    pub residual_ii: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldCheck {
    pub residual_i: f64,
    pub residual_ii: f64,
    pub cubic_residual: f64,
}

/// The fold `x + r y - r^2 = 0`.
pub fn fold_line(r: f64) -> Line {
    Line::new(1.0, r, -r * r).expect("x-coefficient is 1")
}

/// One fold per distinct real root, sorted by `r`.
pub fn solve_by_folding(eq: &CubicEq) -> Result<Vec<FoldSolution>, FoldError> {
    let roots = real_roots(&eq.as_poly()?, None)?;
    let solutions = roots
        .into_iter()
        .map(|root| {
            let r = root.value;
            let fold = fold_line(r);
            // the fold is the bisector of A and (1, 2r) by construction
            let a_image = Point::new(1.0, 2.0 * r);
            let p_image = reflect_point(eq.p_point(), &fold);
            FoldSolution {
                r,
                fold,
                a_image,
                p_image,
                residual_i: (a_image.x - 1.0).abs(),
                residual_ii: (p_image.y - eq.target_y()).abs(),
            }
        })
        .collect();
    Ok(solutions)
}

/// Residuals of both fold conditions and of the cubic at `r`, all computed
/// by actually reflecting `A` and `P`.
pub fn verify_fold(eq: &CubicEq, r: f64) -> FoldCheck {
    let fold = fold_line(r);
    let a_image = reflect_point(A, &fold);
    let p_image = reflect_point(eq.p_point(), &fold);
    FoldCheck {
        residual_i: (a_image.x - 1.0).abs(),
        residual_ii: (p_image.y - eq.target_y()).abs(),
        cubic_residual: eq.eval(r).abs(),
    }
}

/// Recovers `r` from a line of the form `x + r y - r^2 = 0`.
pub fn root_from_fold(fold: &Line) -> Result<f64, FoldError> {
    if fold.a().abs() < 1e-12 {
        return Err(FoldError::NotAFoldLine(format!("{fold} has no x term")));
    }
    let r = fold.b() / fold.a();
    let constant = fold.c() / fold.a();
    if (constant + r * r).abs() > 1e-9 * (1.0 + r * r) {
        return Err(FoldError::NotAFoldLine(format!(
            "{fold}: constant {constant} is not -r^2 = {}",
            -r * r
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_line_examples() {
        assert_eq!(fold_line(0.0).coefficients(), [1.0, 0.0, 0.0]);
        assert!(fold_line(1.0).max_coeff_diff(&Line::new(1.0, 1.0, -1.0).unwrap()) < 1e-15);
        assert!(fold_line(2.0).max_coeff_diff(&Line::new(1.0, 2.0, -4.0).unwrap()) < 1e-15);
        // y-intercept is r
        let l = fold_line(2.0);
        assert!((-l.c() / l.b() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn three_root_cubic() {
        let eq = CubicEq::new(0.0, 1.0, 0.0);
        let sols = solve_by_folding(&eq).unwrap();
        let rs: Vec<f64> = sols.iter().map(|s| s.r).collect();
        assert_eq!(rs.len(), 3);
        for (r, e) in rs.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((r - e).abs() < 1e-12);
        }
        let mid = &sols[1];
        assert_eq!(mid.fold.coefficients(), [1.0, 0.0, 0.0]);
        assert_eq!(mid.p_image, Point::new(-1.0, 0.0));
        for s in &sols {
            assert_eq!(s.residual_i, 0.0);
            assert!(s.residual_ii <= 1e-9 * eq.scale());
        }
    }

    #[test]
    fn cube_root_of_six() {
        let eq = CubicEq::new(0.0, 0.0, -6.0);
        let sols = solve_by_folding(&eq).unwrap();
        assert_eq!(sols.len(), 1);
        assert!((sols[0].r - 1.817_120_6).abs() < 1e-7);
        assert!((sols[0].p_image.y - 6.0).abs() < 1e-9);
    }

    #[test]
    fn triple_root() {
        let sols = solve_by_folding(&CubicEq::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].r, 0.0);
        assert_eq!(sols[0].fold.coefficients(), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn verify_examples() {
        let eq = CubicEq::new(0.0, 1.0, 0.0);
        let c = verify_fold(&eq, 1.0);
        assert!(c.residual_i < 1e-15 && c.residual_ii < 1e-15 && c.cubic_residual == 0.0);

        let eq6 = CubicEq::new(0.0, 0.0, -6.0);
        let c = verify_fold(&eq6, 6f64.cbrt());
        assert!(c.residual_i < 1e-12 && c.residual_ii <= 1e-9 && c.cubic_residual <= 1e-9);

        let c = verify_fold(&eq, 0.5);
        assert!(c.residual_ii > 0.1);
        assert!((c.cubic_residual - 0.375).abs() < 1e-15);
        // residual_II (r^2 + 1) = 2 |cubic(r)|
        assert!((c.residual_ii * 1.25 - 2.0 * 0.375).abs() < 1e-12);
    }

    #[test]
    fn root_from_fold_examples() {
        assert_eq!(
            root_from_fold(&Line::new(1.0, 0.0, 0.0).unwrap()).unwrap(),
            0.0
        );
        let r = root_from_fold(&Line::new(1.0, 1.0, -1.0).unwrap()).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        assert!(matches!(
            root_from_fold(&Line::new(1.0, 2.0, -1.0).unwrap()),
            Err(FoldError::NotAFoldLine(_))
        ));
        assert!(matches!(
            root_from_fold(&Line::new(0.0, 1.0, -1.0).unwrap()),
            Err(FoldError::NotAFoldLine(_))
        ));
        for k in -20..=20 {
            let r = k as f64 * 0.37;
            let back = root_from_fold(&fold_line(r)).unwrap();
            assert!((back - r).abs() <= 1e-12 * (1.0 + r.abs()));
        }
    }
}
