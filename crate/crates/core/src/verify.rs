//! Seeded randomized cross-checks of every module against an independent
//! computation. Each check runs on its own ChaCha stream, so results depend
//! only on the seed and the trial count.

use crate::curve::{
    classify, f_eval, gradient, hessian_at_singular, local_flip_counts, orbit, orbit_by_reflection,
    segment_relation, shape_from_flips, BelochParams, ShapeClass,
};
use crate::fold::{fold_line, solve_by_folding, verify_fold, CubicEq};
use crate::general::{classify_origin, normalize, paper_criterion, GeneralCubic};
use crate::geom::sign_with_band;
use crate::parabola::{fg_intersection_count, tangent_at, IntersectionClass};
use crate::render::{export_orbit_csv, parse_orbit_csv};
use crate::surface::{critical_points, hessian_eigenvalues, CriticalKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 20231201;
pub const DEFAULT_TRIALS: usize = 200;
pub const SEED_ENV: &str = "BELOCH_SEED";

/// The explicit seed, else `BELOCH_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| std::env::var(SEED_ENV).ok()?.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Inputs of the first failing trial.
    pub reproducer: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

const CHECKS: [(&str, Check); 10] = [
    ("fold_vs_cardano", check_fold),
    ("orbit_on_curve", check_orbit),
    ("gradient_vs_differences", check_gradient),
    ("shape_vs_sampling", check_shape),
    ("fold_is_tangent", check_tangent),
    ("parabola_intersections", check_fg),
    ("segment_relation", check_segments),
    ("general_identities", check_general),
    ("critical_kinds", check_critical),
    ("csv_round_trip", check_csv),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run_suite(seed: u64, trials: usize) -> SuiteReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut failures = 0;
            let mut reproducer = None;
            for trial in 0..trials {
                if let Err(msg) = check(&mut rng) {
                    failures += 1;
                    if reproducer.is_none() {
                        reproducer = Some(format!("seed={seed} check={name} trial={trial}: {msg}"));
                    }
                }
            }
            CheckOutcome {
                name,
                trials,
                failures,
                reproducer,
            }
        })
        .collect();
    SuiteReport {
        schema: crate::report::SCHEMA_VERSION,
        seed,
        trials,
        checks,
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// Real roots of `x^3 - a x^2 - b x + c` by the trigonometric and Cardano
/// formulas, ascending, each polished by two Newton steps.
pub fn cardano_roots(eq: &CubicEq) -> Vec<f64> {
    let (a2, a1, a0) = (-eq.a, -eq.b, eq.c);
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if disc < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - std::f64::consts::TAU * k as f64 / 3.0).cos())
            .collect()
    } else {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    };
    for t in roots.iter_mut() {
        let mut x = *t - shift;
        for _ in 0..2 {
            let d = (3.0 * x - 2.0 * eq.a) * x - eq.b;
            if d != 0.0 {
                x -= eq.eval(x) / d;
            }
        }
        *t = x;
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn check_fold(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let eq = CubicEq::new(
        uniform(rng, -5.0, 5.0),
        uniform(rng, -5.0, 5.0),
        uniform(rng, -5.0, 5.0),
    );
    let sols = solve_by_folding(&eq).map_err(|e| e.to_string())?;
    let oracle = cardano_roots(&eq);
    let fold_roots: Vec<f64> = sols.iter().map(|s| s.r).collect();
    let tol = 1e-9 * eq.scale();
    let close = |r: f64, set: &[f64]| set.iter().any(|o| (o - r).abs() <= 1e-9 * (1.0 + r.abs()));
    let separated = oracle.windows(2).all(|w| w[1] - w[0] > 1e-4);
    if separated
        && (fold_roots.len() != oracle.len() || !fold_roots.iter().all(|&r| close(r, &oracle)))
    {
        return Err(format!(
            "{eq:?}: fold roots {fold_roots:?} vs oracle {oracle:?}"
        ));
    }
    for s in &sols {
        if s.residual_ii > tol {
            return Err(format!(
                "{eq:?}: residual_ii {} at r = {}",
                s.residual_ii, s.r
            ));
        }
    }
    for &r in &oracle {
        let c = verify_fold(&eq, r);
        if c.residual_i > 1e-12 * (1.0 + r * r) || c.residual_ii > tol {
            return Err(format!("{eq:?}: oracle root {r} fails the fold: {c:?}"));
        }
    }
    Ok(())
}

fn random_params(rng: &mut ChaCha8Rng, half: f64) -> BelochParams {
    BelochParams::new(uniform(rng, -half, half), uniform(rng, -half, half)).expect("finite")
}

fn check_orbit(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let par = random_params(rng, 4.0);
    let r = uniform(rng, -20.0, 20.0);
    let o = orbit(&par, r);
    let bound = 1e-9 * (1.0 + par.p.abs() + par.q.abs()).powi(3);
    let f = f_eval(&par, o.s, o.t);
    if f.abs() > bound {
        return Err(format!("{par:?} r = {r}: F = {f}"));
    }
    let d = o.point().distance(orbit_by_reflection(&par, r));
    if d > 1e-12 * (1.0 + o.point().norm()) {
        return Err(format!(
            "{par:?} r = {r}: closed form and reflection differ by {d}"
        ));
    }
    Ok(())
}

fn check_gradient(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let par = random_params(rng, 4.0);
    let (x, y) = (uniform(rng, -4.0, 4.0), uniform(rng, -4.0, 4.0));
    let h = 1e-5;
    let (gx, gy) = gradient(&par, x, y);
    let fdx = (f_eval(&par, x + h, y) - f_eval(&par, x - h, y)) / (2.0 * h);
    let fdy = (f_eval(&par, x, y + h) - f_eval(&par, x, y - h)) / (2.0 * h);
    if (gx - fdx).abs() > 1e-6 || (gy - fdy).abs() > 1e-6 {
        return Err(format!(
            "{par:?} at ({x}, {y}): ({gx}, {gy}) vs ({fdx}, {fdy})"
        ));
    }
    if hessian_at_singular(&par) != -4.0 * (4.0 * par.p + par.q * par.q) {
        return Err(format!("{par:?}: Hessian closed form"));
    }
    Ok(())
}

fn check_shape(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let par = random_params(rng, 4.0);
    // keep away from the cusp boundary where fixed radii cannot resolve the shape
    if par.discriminant().abs() < 0.5 {
        return Ok(());
    }
    let flips = local_flip_counts(&par);
    let sampled = shape_from_flips(&flips);
    let cls = classify(&par);
    if sampled != cls {
        return Err(format!("{par:?}: classify {cls:?}, sampling {flips:?}"));
    }
    Ok(())
}

fn check_tangent(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = uniform(rng, -50.0, 50.0);
    let d = tangent_at(r).max_coeff_diff(&fold_line(r));
    if d > 1e-12 {
        return Err(format!("r = {r}: coefficients differ by {d}"));
    }
    Ok(())
}

fn check_fg(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let par = random_params(rng, 5.0);
    let fg = fg_intersection_count(&par).map_err(|e| e.to_string())?;
    let expected = match par.discriminant_sign() {
        -1 => IntersectionClass::Zero,
        0 => IntersectionClass::One,
        _ => IntersectionClass::TwoOrMore,
    };
    if fg.class != expected {
        return Err(format!(
            "{par:?}: class {:?}, expected {expected:?}",
            fg.class
        ));
    }
    for w in &fg.witnesses {
        let g = 4.0 * w.point.x + w.point.y * w.point.y;
        if g.abs() > 1e-8 {
            return Err(format!(
                "{par:?}: witness r = {} is off the parabola by {g}",
                w.r
            ));
        }
    }
    Ok(())
}

fn check_segments(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let par = random_params(rng, 5.0);
    let r = uniform(rng, -10.0, 10.0);
    segment_relation(&par, r)
        .map(|_| ())
        .map_err(|e| e.to_string())
}

fn random_general(rng: &mut ChaCha8Rng) -> GeneralCubic {
    let mut a: [f64; 5] = std::array::from_fn(|_| uniform(rng, -5.0, 5.0));
    if a[1] * a[4] < 0.0 {
        a[4] = -a[4];
    }
    for i in [0, 1, 4] {
        if a[i].abs() < 0.1 {
            a[i] = 0.1f64.copysign(a[i]);
        }
    }
    GeneralCubic::from_array(a).expect("finite")
}

fn check_general(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let c = random_general(rng);
    let n = normalize(&c).map_err(|e| e.to_string())?;
    let pv = paper_criterion(&c).map_err(|e| e.to_string())?;
    let rep = classify_origin(&c).map_err(|e| e.to_string())?;
    let four = 4.0 * n.p + n.q * n.q;
    let corrected = 2.0 * n.alpha * n.p + n.q * n.q;
    let rel = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    if !rel(pv, four) || !rel(rep.corrected_value, corrected) {
        return Err(format!(
            "{c:?}: paper {pv} vs {four}, corrected {} vs {corrected}",
            rep.corrected_value
        ));
    }
    let by_det = match sign_with_band(-rep.hessian_det, 0.0) {
        1 => ShapeClass::Node,
        -1 => ShapeClass::IsolatedPoint,
        _ => rep.shape,
    };
    if by_det != rep.shape {
        return Err(format!(
            "{c:?}: shape {:?}, Hessian det {}",
            rep.shape, rep.hessian_det
        ));
    }
    let back = n.reexpand(c.a1);
    for (x, y) in back.iter().zip(c.as_array()) {
        if !rel(*x, y) {
            return Err(format!("{c:?}: re-expansion gives {back:?}"));
        }
    }
    Ok(())
}

fn check_critical(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let par = random_params(rng, 4.0);
    let pts = critical_points(&par).map_err(|e| e.to_string())?;
    for c in pts.iter().filter(|c| !c.degenerate_hessian) {
        let (lo, hi) = hessian_eigenvalues(&par, c.location);
        let expected = if lo > 0.0 {
            CriticalKind::LocalMin
        } else if hi < 0.0 {
            CriticalKind::LocalMax
        } else {
            CriticalKind::Saddle
        };
        if expected != c.kind {
            return Err(format!("{par:?}: {c:?} has eigenvalues ({lo}, {hi})"));
        }
        let (gx, gy) = gradient(&par, c.location.x, c.location.y);
        if gx.hypot(gy) > 1e-10 * par.coord_scale().powi(2) {
            return Err(format!("{par:?}: gradient {gx}, {gy} at {:?}", c.location));
        }
    }
    Ok(())
}

fn check_csv(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let par = random_params(rng, 5.0);
    let r0 = uniform(rng, -30.0, 0.0);
    let r1 = r0 + uniform(rng, 0.1, 30.0);
    let n = rng.gen_range(2..50);
    let text = export_orbit_csv(&par, r0, r1, n).map_err(|e| e.to_string())?;
    let rows = parse_orbit_csv(&text).map_err(|e| e.to_string())?;
    for row in &rows {
        let o = orbit(&par, row.r);
        if (o.s - row.s).abs() > 1e-12 * (1.0 + o.s.abs())
            || (o.t - row.t).abs() > 1e-12 * (1.0 + o.t.abs())
        {
            return Err(format!("{par:?}: row {row:?} vs {o:?}"));
        }
    }
    if rows.len() != n {
        return Err(format!("{par:?}: {} rows for n = {n}", rows.len()));
    }
    Ok(())
}
