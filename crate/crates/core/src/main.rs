use clap::{Parser, Subcommand};
use mtshoot::config::Tolerances;
use mtshoot::diagnostics::Problem;
use mtshoot::nonlinearity::{GFloor, NonlinearitySpec};
use mtshoot::shooting::{self, ShootingResult};
use mtshoot::{acceptance, bessel, sweep};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

/// Radial shooting for Moser-Trudinger-type problems on the unit disk:
/// construct blow-up solution families and verify their asymptotic laws.
#[derive(Parser)]
#[command(name = "mtshoot", version, about)]
struct Cli {
    /// key=value file presetting ode_tol, shoot_tol_R, quad_tol
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print disk eigen-data for mode k as JSON
    Eigen {
        #[arg(long)]
        k: usize,
    },
    /// Solve the positive problem: first zero at r = 1
    SolveT1 {
        #[arg(long)]
        l: f64,
        #[arg(long)]
        gamma: f64,
        /// Write the solved profile as CSV
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Solve the nodal problem with k sign regions
    SolveNodal {
        #[arg(long)]
        l: f64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Solve the g-type problem (free zero rescaled into beta)
    SolveG {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        gamma: f64,
        /// g below the switch point: default (constant 1) or ramp
        #[arg(long, default_value = "default")]
        g_variant: String,
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Run a gamma sweep and emit the diagnostics table
    Sweep {
        /// t1 | nodal | gtype
        #[arg(long)]
        problem: String,
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        a: Option<f64>,
        /// Comma-separated gamma values, ascending
        #[arg(long, value_delimiter = ',')]
        gammas: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write one profile CSV per solved gamma into this directory
        #[arg(long)]
        profiles: Option<PathBuf>,
    },
    /// Run the full acceptance suite; nonzero exit on any failure
    Verify {
        /// Where the sweep CSVs are written
        #[arg(long, default_value = "verify-out")]
        out_dir: PathBuf,
    },
}

fn load_tolerances(path: &Option<PathBuf>) -> Result<Tolerances, mtshoot::Error> {
    match path {
        None => Ok(Tolerances::default()),
        Some(p) => Tolerances::from_key_values(&std::fs::read_to_string(p)?),
    }
}

fn result_json(res: &ShootingResult) -> serde_json::Value {
    json!({
        "gamma": res.gamma,
        "lambda_bar": res.spec.lambda_bar(),
        "log_beta": res.spec.log_beta(),
        "beta": res.beta(),
        "R_first": res.r_first,
        "boundary_residual": res.boundary_residual,
        "zeros": res.zeros.iter().map(|z| json!({"r": z.r, "du_dr": z.du_dr})).collect::<Vec<_>>(),
    })
}

fn write_profile(res: &ShootingResult, path: &Option<PathBuf>) -> std::io::Result<()> {
    if let Some(p) = path {
        std::fs::write(p, res.profile.dump_csv())?;
    }
    Ok(())
}

fn parse_problem(
    problem: &str,
    l: Option<f64>,
    k: Option<usize>,
    a: Option<f64>,
) -> Result<Problem, String> {
    match problem {
        "t1" => Ok(Problem::TheoremOne {
            l: l.ok_or("--l required for t1")?,
        }),
        "nodal" => Ok(Problem::Nodal {
            l: l.ok_or("--l required for nodal")?,
            k: k.ok_or("--k required for nodal")?,
        }),
        "gtype" => Ok(Problem::GType {
            a: a.ok_or("--a required for gtype")?,
        }),
        other => Err(format!("unknown problem {other:?} (use t1|nodal|gtype)")),
    }
}

fn run() -> Result<bool, Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    let tols = load_tolerances(&cli.config)?;
    let opts = tols.solve_options();

    match cli.command {
        Command::Eigen { k } => {
            let e = bessel::eigen_data(k)?;
            let out = json!({
                "k": e.k,
                "j0k": e.j0k,
                "lambda_k": e.lambda_k,
                "v_k0": e.norm_c,
                "r_k": e.r_k,
                "alpha_k": e.alpha_k,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::SolveT1 { l, gamma, profile } => {
            let cfg = shooting::TheoremOneConfig::new(l, gamma)?;
            let res = shooting::solve_theorem1(&cfg, &opts)?;
            write_profile(&res, &profile)?;
            println!("{}", serde_json::to_string_pretty(&result_json(&res))?);
        }
        Command::SolveNodal {
            l,
            k,
            gamma,
            profile,
        } => {
            let res = shooting::solve_nodal(l, k, gamma, &opts)?;
            write_profile(&res, &profile)?;
            println!("{}", serde_json::to_string_pretty(&result_json(&res))?);
        }
        Command::SolveG {
            a,
            gamma,
            g_variant,
            profile,
        } => {
            let spec = match g_variant.as_str() {
                "default" => NonlinearitySpec::gtype_default(a, 0.0),
                "ramp" => NonlinearitySpec::GType {
                    a,
                    c0: a,
                    log_beta: 0.0,
                    floor: GFloor::ConstantThenRamp,
                },
                other => return Err(format!("unknown g variant {other:?}").into()),
            };
            let res = shooting::solve_gtype(a, gamma, spec, &opts)?;
            write_profile(&res, &profile)?;
            println!("{}", serde_json::to_string_pretty(&result_json(&res))?);
        }
        Command::Sweep {
            problem,
            l,
            k,
            a,
            gammas,
            out,
            profiles,
        } => {
            if gammas.windows(2).any(|w| w[1] <= w[0]) {
                return Err("--gammas must be ascending".into());
            }
            let prob = parse_problem(&problem, l, k, a)?;
            let rows = sweep::run_sweep(&prob, &gammas, &tols);
            std::fs::write(&out, sweep::sweep_csv(&rows))?;
            if let Some(dir) = profiles {
                std::fs::create_dir_all(&dir)?;
                for row in &rows {
                    if let Ok((res, _)) = &row.outcome {
                        let name = format!("{}_gamma{}.csv", problem, row.gamma);
                        std::fs::write(dir.join(name), res.profile.dump_csv())?;
                    }
                }
            }
            let solved = rows.iter().filter(|r| r.outcome.is_ok()).count();
            eprintln!(
                "sweep complete: {solved}/{} solves ok, table at {}",
                rows.len(),
                out.display()
            );
        }
        Command::Verify { out_dir } => {
            let run = acceptance::run_all(&tols);
            std::fs::create_dir_all(&out_dir)?;
            std::fs::write(out_dir.join("sweep_t1.csv"), &run.csv_t1)?;
            std::fs::write(out_dir.join("sweep_nodal.csv"), &run.csv_nodal)?;
            std::fs::write(out_dir.join("sweep_gtype.csv"), &run.csv_gtype)?;
            for o in &run.outcomes {
                println!("{}", o.line());
            }
            if !run.all_passed() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
