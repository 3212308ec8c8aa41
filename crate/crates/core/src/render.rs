//! SVG scenes of the curve and CSV export of orbit samples.

use crate::curve::{classify, orbit, BelochParams, OrbitPoint, ShapeClass};
use crate::geom::{Circle, Line, Point, Rect};
use crate::parabola::fg_intersection_count;
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use thiserror::Error;

pub const DEFAULT_SAMPLES: usize = 2048;
pub const DEFAULT_HALF_WIDTH: f64 = 6.0;
const PIXEL_WIDTH: f64 = 600.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("EmptyScene: nothing to draw")]
    EmptyScene,
    #[error("BadScene: {0}")]
    BadScene(&'static str),
    #[error("BadRange: need finite r_min < r_max and n >= 2, got [{0}, {1}], n = {2}")]
    BadRange(f64, f64, usize),
    #[error("Csv: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MarkerKind {
    Anchor,
    Singular,
    IsolatedPoint,
    Witness,
}

impl MarkerKind {
    fn class(&self) -> &'static str {
        match self {
            MarkerKind::Anchor => "anchor",
            MarkerKind::Singular => "singular",
            MarkerKind::IsolatedPoint => "isolated-point",
            MarkerKind::Witness => "witness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SceneItem {
    Orbit(BelochParams),
    Parabola,
    FoldLine(Line),
    Circle(Circle),
    Marker { kind: MarkerKind, at: Point },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotScene {
    pub items: Vec<SceneItem>,
    pub viewport: Rect,
    pub samples_per_curve: usize,
}

impl PlotScene {
    pub fn new(viewport: Rect) -> Self {
        PlotScene {
            items: Vec::new(),
            viewport,
            samples_per_curve: DEFAULT_SAMPLES,
        }
    }

    /// Orbit, parabola, `A`, `P` (or the isolated point) and the parabola
    /// intersections, in a viewport grown to contain every marker.
    pub fn for_params(params: &BelochParams) -> Self {
        let mut scene = PlotScene::new(Rect::square(DEFAULT_HALF_WIDTH));
        scene.items.push(SceneItem::Orbit(*params));
        if params.is_unit_scale() {
            scene.items.push(SceneItem::Parabola);
        }
        scene.push_marker(MarkerKind::Anchor, params.anchor());
        let kind = if classify(params) == ShapeClass::IsolatedPoint {
            MarkerKind::IsolatedPoint
        } else {
            MarkerKind::Singular
        };
        scene.push_marker(kind, params.singular_point());
        if let Ok(fg) = fg_intersection_count(params) {
            for w in fg.witnesses {
                scene.push_marker(MarkerKind::Witness, w.point);
            }
        }
        scene
    }

    pub fn with_viewport(mut self, viewport: Rect) -> Self {
        self.viewport = viewport;
        self
    }

    pub fn push_marker(&mut self, kind: MarkerKind, at: Point) {
        self.viewport = self.viewport.including(at, 0.5);
        self.items.push(SceneItem::Marker { kind, at });
    }
}

/// Fixed-point number with trailing zeros removed.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Orbit pieces inside (a margin around) `viewport`. The parameter range is
/// widened until both ends leave the viewport and is sampled as `r = tan u`.
pub fn orbit_trace(params: &BelochParams, viewport: &Rect, n: usize) -> Vec<Vec<OrbitPoint>> {
    let outer = Rect::new(
        viewport.x0 - viewport.width(),
        viewport.y0 - viewport.height(),
        viewport.x1 + viewport.width(),
        viewport.y1 + viewport.height(),
    )
    .expect("viewport is nonempty");
    let mut big_r = 1.0;
    for _ in 0..60 {
        let lo = orbit(params, -big_r).point();
        let hi = orbit(params, big_r).point();
        if !viewport.contains(lo) && !viewport.contains(hi) {
            break;
        }
        big_r *= 2.0;
    }
    let u_max = big_r.atan();
    let mut pieces: Vec<Vec<OrbitPoint>> = Vec::new();
    let mut current = Vec::new();
    for i in 0..n {
        let u = -u_max + 2.0 * u_max * i as f64 / (n - 1) as f64;
        let o = orbit(params, u.tan());
        if outer.contains(o.point()) {
            current.push(o);
        } else if !current.is_empty() {
            pieces.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces.retain(|p| p.len() >= 2);
    pieces
}

fn path_data(points: impl IntoIterator<Item = Point>) -> String {
    let mut d = String::new();
    for (i, p) in points.into_iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        if i > 0 {
            d.push(' ');
        }
        write!(d, "{cmd}{} {}", num(p.x), num(p.y)).unwrap();
    }
    d
}

/// Endpoints of `line` clipped to `rect`, if it crosses it.
fn clip_line(line: &Line, rect: &Rect) -> Option<(Point, Point)> {
    let (a, b, c) = (line.a(), line.b(), line.c());
    let mut hits = Vec::new();
    if b != 0.0 {
        for x in [rect.x0, rect.x1] {
            let y = -(a * x + c) / b;
            if y >= rect.y0 && y <= rect.y1 {
                hits.push(Point::new(x, y));
            }
        }
    }
    if a != 0.0 {
        for y in [rect.y0, rect.y1] {
            let x = -(b * y + c) / a;
            if x >= rect.x0 && x <= rect.x1 {
                hits.push(Point::new(x, y));
            }
        }
    }
    let first = *hits.first()?;
    let far = hits
        .iter()
        .copied()
        .max_by(|p, q| p.distance(first).total_cmp(&q.distance(first)))?;
    (far.distance(first) > 0.0).then_some((first, far))
}

pub fn render_svg(scene: &PlotScene) -> Result<String, RenderError> {
    if scene.items.is_empty() {
        return Err(RenderError::EmptyScene);
    }
    if scene.samples_per_curve < 64 {
        return Err(RenderError::BadScene(
            "samples_per_curve must be at least 64",
        ));
    }
    let vp = &scene.viewport;
    let unit = vp.width().max(vp.height());
    let stroke = num(unit * 0.003);
    let marker_r = num(unit * 0.008);
    let height_px = PIXEL_WIDTH * vp.height() / vp.width();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num(PIXEL_WIDTH),
        num(height_px),
        num(vp.x0),
        num(-vp.y1),
        num(vp.width()),
        num(vp.height())
    )
    .unwrap();
    writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
        num(vp.x0),
        num(-vp.y1),
        num(vp.width()),
        num(vp.height())
    )
    .unwrap();
    writeln!(
        out,
        "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"{stroke}\">"
    )
    .unwrap();

    for item in &scene.items {
        match item {
            SceneItem::Orbit(params) => {
                for piece in orbit_trace(params, vp, scene.samples_per_curve) {
                    writeln!(
                        out,
                        "<path class=\"orbit\" stroke=\"black\" d=\"{}\"/>",
                        path_data(piece.iter().map(|o| o.point()))
                    )
                    .unwrap();
                }
            }
            SceneItem::Parabola => {
                let n = scene.samples_per_curve;
                let ys = (0..n).map(|i| vp.y0 + vp.height() * i as f64 / (n - 1) as f64);
                let pts: Vec<Point> = ys
                    .map(|y| Point::new(-0.25 * y * y, y))
                    .filter(|p| p.x >= vp.x0 - vp.width())
                    .collect();
                if pts.len() >= 2 {
                    writeln!(
                        out,
                        "<path class=\"parabola\" stroke=\"blue\" d=\"{}\"/>",
                        path_data(pts)
                    )
                    .unwrap();
                }
            }
            SceneItem::FoldLine(line) => {
                if let Some((a, b)) = clip_line(line, vp) {
                    writeln!(
                        out,
                        "<line class=\"fold\" stroke=\"gray\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                        num(a.x),
                        num(a.y),
                        num(b.x),
                        num(b.y)
                    )
                    .unwrap();
                }
            }
            SceneItem::Circle(c) => {
                writeln!(
                    out,
                    "<circle class=\"circle\" stroke=\"green\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                    num(c.center.x),
                    num(c.center.y),
                    num(c.radius())
                )
                .unwrap();
            }
            SceneItem::Marker { kind, at } => {
                let fill = match kind {
                    MarkerKind::IsolatedPoint => "white",
                    MarkerKind::Witness => "blue",
                    _ => "red",
                };
                writeln!(
                    out,
                    "<circle class=\"{}\" stroke=\"red\" fill=\"{fill}\" cx=\"{}\" cy=\"{}\" r=\"{marker_r}\"/>",
                    kind.class(),
                    num(at.x),
                    num(at.y)
                )
                .unwrap();
            }
        }
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// CSV with header `r,s,t` and `n` equally spaced parameters.
pub fn export_orbit_csv(
    params: &BelochParams,
    r_min: f64,
    r_max: f64,
    n: usize,
) -> Result<String, RenderError> {
    if !(r_min.is_finite() && r_max.is_finite() && r_min < r_max) || n < 2 {
        return Err(RenderError::BadRange(r_min, r_max, n));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| RenderError::Csv(e.to_string());
    w.write_record(["r", "s", "t"]).map_err(csv_err)?;
    for i in 0..n {
        let r = if i == n - 1 {
            r_max
        } else {
            r_min + (r_max - r_min) * i as f64 / (n - 1) as f64
        };
        let o = orbit(params, r);
        w.write_record([o.r, o.s, o.t].map(|v| format!("{v:.16e}")))
            .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| RenderError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn parse_orbit_csv(text: &str) -> Result<Vec<OrbitPoint>, RenderError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| RenderError::Csv(e.to_string()))?;
    if headers != vec!["r", "s", "t"] {
        return Err(RenderError::Csv(format!("unexpected header {headers:?}")));
    }
    rdr.deserialize()
        .map(|row| row.map_err(|e| RenderError::Csv(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(p: f64, q: f64) -> BelochParams {
        BelochParams::new(p, q).unwrap()
    }

    #[test]
    fn isolated_scene() {
        let svg = render_svg(&PlotScene::for_params(&bp(-2.0, 1.0))).unwrap();
        assert_eq!(svg.matches("class=\"orbit\"").count(), 1);
        assert_eq!(svg.matches("class=\"parabola\"").count(), 1);
        assert_eq!(svg.matches("class=\"isolated-point\"").count(), 1);
        assert!(svg
            .contains("class=\"isolated-point\" stroke=\"red\" fill=\"white\" cx=\"-2\" cy=\"1\""));
        assert!(svg.contains("transform=\"scale(1,-1)\""));
    }

    #[test]
    fn node_trace_self_intersects() {
        let par = bp(1.0, 1.0);
        let pieces = orbit_trace(&par, &Rect::square(6.0), DEFAULT_SAMPLES);
        let near: Vec<f64> = pieces
            .iter()
            .flatten()
            .filter(|o| o.point().distance(Point::new(1.0, 1.0)) < 0.05)
            .map(|o| o.r)
            .collect();
        assert!(near.iter().any(|&r| r < 0.0) && near.iter().any(|&r| r > 1.0));
        // both ends leave the viewport
        let vp = Rect::square(6.0);
        let first = pieces.first().unwrap().first().unwrap().point();
        let last = pieces.last().unwrap().last().unwrap().point();
        assert!(!vp.contains(first) && !vp.contains(last));
    }

    #[test]
    fn empty_scene() {
        assert_eq!(
            render_svg(&PlotScene::new(Rect::square(1.0))),
            Err(RenderError::EmptyScene)
        );
    }

    #[test]
    fn deterministic() {
        let mut s = PlotScene::for_params(&bp(1.0, 1.0));
        s.items
            .push(SceneItem::FoldLine(crate::fold::fold_line(1.0)));
        s.items.push(SceneItem::Circle(bp(1.0, 1.0).circle()));
        assert_eq!(render_svg(&s).unwrap(), render_svg(&s.clone()).unwrap());
    }

    #[test]
    fn csv_examples() {
        let text = export_orbit_csv(&bp(1.0, 1.0), 0.0, 1.0, 2).unwrap();
        assert!(text.starts_with("r,s,t\n"));
        let rows = parse_orbit_csv(&text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].r, rows[0].s, rows[0].t), (0.0, -1.0, 1.0));
        assert_eq!((rows[1].r, rows[1].s, rows[1].t), (1.0, 0.0, 0.0));

        assert!(matches!(
            export_orbit_csv(&bp(1.0, 1.0), 0.0, 0.0, 2),
            Err(RenderError::BadRange(..))
        ));

        let rows =
            parse_orbit_csv(&export_orbit_csv(&bp(2.0, 1.0), -1.0, 2.0, 3).unwrap()).unwrap();
        for row in [rows[0], rows[2]] {
            assert!((row.s - 2.0).abs() < 1e-12 && (row.t - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn csv_round_trip() {
        let par = bp(0.37, -2.9);
        let text = export_orbit_csv(&par, -7.3, 11.1, 257).unwrap();
        for row in parse_orbit_csv(&text).unwrap() {
            let o = orbit(&par, row.r);
            assert!((o.s - row.s).abs() <= 1e-12 * (1.0 + o.s.abs()));
            assert!((o.t - row.t).abs() <= 1e-12 * (1.0 + o.t.abs()));
        }
    }
}
