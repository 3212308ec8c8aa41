use beloch::curve::BelochParams;
use beloch::fold::CubicEq;
use beloch::general::GeneralCubic;
use beloch::geom::Rect;
use beloch::render::{export_orbit_csv, render_svg, PlotScene};
use beloch::report;
use beloch::verify::{resolve_seed, run_suite, DEFAULT_TRIALS};
use beloch::winding::DEFAULT_SAMPLES;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "beloch",
    version,
    about = "Beloch's fold and the curve it traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve x^3 - a x^2 - b x + c = 0 by folding
    Solve {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long)]
        json: bool,
    },
    /// Shape, special parameters, parabola intersections and winding at P(p, q)
    Analyze {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        json: bool,
    },
    /// Winding number of the loop around A and axis-ray crossings
    Winding {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Critical points of z = F(x, y)
    Surface {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
    },
    /// Shape at the origin of a0 y^2 - a1 x y^2 - a2 x y - a3 x^2 - a4 x^3 = 0
    ClassifyGeneral {
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            allow_hyphen_values = true,
            required = true
        )]
        coeffs: Vec<f64>,
    },
    /// Write an SVG of the curve, the parabola and the marked points
    Plot {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
    },
    /// Write orbit samples as CSV with columns r,s,t
    OrbitCsv {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        q: f64,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        range: Vec<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the randomized oracle suite
    Verify {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
}

enum Failure {
    Usage(String),
    Module(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Module(e.to_string())
    }
}

fn params(p: f64, q: f64, alpha: f64) -> Result<BelochParams, Failure> {
    Ok(BelochParams::with_alpha(p, q, alpha)?)
}

fn json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    print!("{}", report::to_json(value)?);
    Ok(())
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Solve {
            a,
            b,
            c,
            json: as_json,
        } => {
            let rep = report::solve_report(&CubicEq::new(a, b, c))?;
            if as_json {
                return json(&rep);
            }
            println!("{:>14} {:>14} {:>14}", "r", "residual_I", "residual_II");
            for f in &rep.folds {
                println!(
                    "{:>14.6} {:>14.6e} {:>14.6e}",
                    f.r, f.residual_i, f.residual_ii
                );
            }
        }
        Command::Analyze {
            p,
            q,
            alpha,
            json: as_json,
        } => {
            let rep = report::analyze(&params(p, q, alpha)?)?;
            if as_json {
                return json(&rep);
            }
            println!("shape         {:?}", rep.shape);
            println!("4p + q^2      {:.6}", rep.discriminant);
            println!("hessian       {:.6}", rep.hessian);
            let specials: Vec<String> = rep
                .special_parameters
                .iter()
                .map(|r| format!("{r:.6}"))
                .collect();
            println!("special r     [{}]", specials.join(", "));
            if let Some(fg) = rep.fg_count {
                println!("F and G       {fg:?}");
            }
            if let Some(w) = &rep.winding {
                match w.winding.value {
                    Some(v) => println!("winding at A  {v}"),
                    None => println!("winding at A  undefined"),
                }
            }
            for note in &rep.errata_notes {
                println!("{note}");
            }
        }
        Command::Winding { p, q, samples } => {
            json(&report::winding_report(&params(p, q, 2.0)?, samples)?)?;
        }
        Command::Surface { p, q } => {
            json(&report::surface_report(&params(p, q, 2.0)?)?)?;
        }
        Command::ClassifyGeneral { coeffs } => {
            let arr: [f64; 5] = coeffs.try_into().map_err(|v: Vec<f64>| {
                Failure::Usage(format!("--coeffs needs 5 values, got {}", v.len()))
            })?;
            json(&report::general_report(&GeneralCubic::from_array(arr)?)?)?;
        }
        Command::Plot { p, q, out, window } => {
            let mut scene = PlotScene::for_params(&params(p, q, 2.0)?);
            if let Some(w) = window {
                let [x0, y0, x1, y1]: [f64; 4] = w
                    .try_into()
                    .map_err(|_| Failure::Usage("--window needs x0,y0,x1,y1".into()))?;
                scene = scene.with_viewport(Rect::new(x0, y0, x1, y1)?);
            }
            std::fs::write(&out, render_svg(&scene)?)?;
        }
        Command::OrbitCsv {
            p,
            q,
            range,
            n,
            out,
        } => {
            let [r0, r1]: [f64; 2] = range
                .try_into()
                .map_err(|_| Failure::Usage("--range needs r0,r1".into()))?;
            std::fs::write(&out, export_orbit_csv(&params(p, q, 2.0)?, r0, r1, n)?)?;
        }
        Command::Verify { seed, trials } => {
            let rep = run_suite(resolve_seed(seed), trials);
            json(&rep)?;
            if !rep.passed() {
                let lines: Vec<String> = rep
                    .checks
                    .iter()
                    .filter_map(|c| c.reproducer.clone())
                    .collect();
                return Err(Failure::Module(format!(
                    "OracleDisagreement: {}",
                    lines.join("; ")
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Module(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
