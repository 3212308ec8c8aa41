//! Versioned JSON reports.

use crate::curve::{
    classify, hessian_at_singular, special_parameters, BelochParams, CurveError, ShapeClass,
};
use crate::fold::{solve_by_folding, CubicEq, FoldError, FoldSolution};
use crate::general::{classify_origin, GeneralCubic, GeneralError, OriginReport};
use crate::geom::Point;
use crate::parabola::{fg_intersection_count, IntersectionClass, ParabolaError, Witness};
use crate::surface::{conjecture_verdict, ConjectureVerdict, SurfaceError};
use crate::winding::{
    axis_ray_crossings, curve_through_a_test, loop_range, section_check, winding_number,
    ClosedLoop, RayCrossings, SectionCheck, WindingError, WindingResult, DEFAULT_SAMPLES,
};
use serde::Serialize;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

pub const NOTE_PASS_COUNT: &str =
    "erratum: two passes through P hold for 4p + q^2 > 0; the printed condition repeats 4p + q^2 = 0";
pub const NOTE_INSIDE_INTERVAL: &str =
    "erratum: A' lies inside the circle about P through A for (q - sqrt(4p + q^2))/2 < r < (q + sqrt(4p + q^2))/2; the printed bounds omit the factor 1/2";
pub const NOTE_POLARITY: &str =
    "erratum: the extremum is a local minimum (F_xx > 0 with positive Hessian); the printed text calls it a local maximum";
pub const NOTE_CRITERION: &str =
    "erratum: the printed criterion 2a3/sqrt(a1 a4) + (a2/2a1)^2 equals 4p + q^2 and disagrees with the Hessian at the origin; the shape follows 2 alpha p + q^2";
pub const NOTE_ANCHOR_IS_P: &str =
    "note: the branch A = P cannot occur for a node, since P = A gives 4p + q^2 = -4";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Parabola(#[from] ParabolaError),
    #[error(transparent)]
    Winding(#[from] WindingError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    General(#[from] GeneralError),
    #[error("Serialize: {0}")]
    Serialize(String),
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, ReportError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| ReportError::Serialize(e.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub cubic: CubicEq,
    pub roots: Vec<f64>,
    pub folds: Vec<FoldSolution>,
}

pub fn solve_report(eq: &CubicEq) -> Result<SolveReport, ReportError> {
    let folds = solve_by_folding(eq)?;
    Ok(SolveReport {
        schema: SCHEMA_VERSION,
        cubic: *eq,
        roots: folds.iter().map(|f| f.r).collect(),
        folds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct FgReport {
    pub class: IntersectionClass,
    pub distinct_roots: usize,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LoopWinding {
    pub loop_range: (f64, f64),
    pub winding: WindingResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub params: BelochParams,
    pub discriminant: f64,
    pub hessian: f64,
    pub shape: ShapeClass,
    pub special_parameters: Vec<f64>,
    /// Only at unit scale.
    pub fg_count: Option<IntersectionClass>,
    pub fg_witnesses: Vec<Witness>,
    /// Only for a node.
    pub winding: Option<LoopWinding>,
    pub errata_notes: Vec<String>,
}

pub fn analyze(params: &BelochParams) -> Result<AnalysisReport, ReportError> {
    let shape = classify(params);
    let specials = special_parameters(params);
    let (fg_count, fg_witnesses) = if params.is_unit_scale() {
        let fg = fg_intersection_count(params)?;
        (Some(fg.class), fg.witnesses)
    } else {
        (None, Vec::new())
    };
    let mut errata_notes = Vec::new();
    let winding = if shape == ShapeClass::Node {
        errata_notes.push(NOTE_PASS_COUNT.to_string());
        errata_notes.push(NOTE_INSIDE_INTERVAL.to_string());
        let lp = ClosedLoop::beloch(params, DEFAULT_SAMPLES)?;
        Some(LoopWinding {
            loop_range: loop_range(params)?,
            winding: winding_number(&lp, params.anchor())?,
        })
    } else {
        None
    };
    Ok(AnalysisReport {
        schema: SCHEMA_VERSION,
        params: *params,
        discriminant: params.discriminant(),
        hessian: hessian_at_singular(params),
        shape,
        special_parameters: specials,
        fg_count,
        fg_witnesses,
        winding,
        errata_notes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WindingReport {
    pub schema: u32,
    pub params: BelochParams,
    pub center: Point,
    pub loop_range: (f64, f64),
    pub winding: WindingResult,
    pub rays: RayCrossings,
    pub curve_through_anchor: bool,
    pub sections: Option<SectionCheck>,
    pub errata_notes: Vec<String>,
}

pub fn winding_report(params: &BelochParams, samples: usize) -> Result<WindingReport, ReportError> {
    let lp = ClosedLoop::beloch(params, samples)?;
    let center = params.anchor();
    let sections = if params.is_unit_scale() {
        Some(section_check(params, &lp)?)
    } else {
        None
    };
    Ok(WindingReport {
        schema: SCHEMA_VERSION,
        params: *params,
        center,
        loop_range: loop_range(params)?,
        winding: winding_number(&lp, center)?,
        rays: axis_ray_crossings(&lp, center),
        curve_through_anchor: curve_through_a_test(params),
        sections,
        errata_notes: vec![NOTE_ANCHOR_IS_P.to_string()],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub schema: u32,
    pub params: BelochParams,
    #[serde(flatten)]
    pub verdict: ConjectureVerdict,
    pub errata_notes: Vec<String>,
}

pub fn surface_report(params: &BelochParams) -> Result<SurfaceReport, ReportError> {
    let verdict = conjecture_verdict(params)?;
    let errata_notes = if verdict.observed_extremum == Some(crate::surface::CriticalKind::LocalMin)
    {
        vec![NOTE_POLARITY.to_string()]
    } else {
        Vec::new()
    };
    Ok(SurfaceReport {
        schema: SCHEMA_VERSION,
        params: *params,
        verdict,
        errata_notes,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneralReport {
    pub schema: u32,
    #[serde(flatten)]
    pub origin: OriginReport,
    pub errata_notes: Vec<String>,
}

pub fn general_report(c: &GeneralCubic) -> Result<GeneralReport, ReportError> {
    let origin = classify_origin(c)?;
    let errata_notes = if origin.discrepancy {
        vec![NOTE_CRITERION.to_string()]
    } else {
        Vec::new()
    };
    Ok(GeneralReport {
        schema: SCHEMA_VERSION,
        origin,
        errata_notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_isolated() {
        let r = analyze(&BelochParams::new(-2.0, 1.0).unwrap()).unwrap();
        assert_eq!(r.shape, ShapeClass::IsolatedPoint);
        assert_eq!(r.hessian, 28.0);
        assert_eq!(r.fg_count, Some(IntersectionClass::Zero));
        assert!(r.errata_notes.is_empty());
        let json = to_json(&r).unwrap();
        assert!(json.contains("\"schema\": 1"));
        assert!(json.contains("\"shape\": \"IsolatedPoint\""));
    }

    #[test]
    fn analyze_node() {
        let r = analyze(&BelochParams::new(2.0, 1.0).unwrap()).unwrap();
        assert_eq!(r.winding.unwrap().winding.value, Some(1));
        assert_eq!(r.errata_notes.len(), 2);
    }

    #[test]
    fn solve_three_roots() {
        let r = solve_report(&CubicEq::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(r.folds.len(), 3);
        assert!((r.roots[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn general_audit() {
        let c = GeneralCubic::new(1.0, 1.0, 4.0, -2.0, 1.0).unwrap();
        let r = general_report(&c).unwrap();
        assert!(r.origin.discrepancy);
        assert_eq!(r.errata_notes.len(), 1);
        let json = to_json(&r).unwrap();
        assert!(json.contains("\"discrepancy\": true"));
        assert!(json.contains("\"shape\": \"Node\""));
    }
}
