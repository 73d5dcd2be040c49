use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fvfe::driver::{convergence_suite, run_case, write_csv, CaseConfig, Suite};
use fvfe::fields::Scheme;
use fvfe::lader1d::{stability_map, StabilityOrthotope};
use fvfe::verification::ErrorReport;

#[derive(Parser)]
#[command(name = "solver", version, about = "Incompressible flow solver on tetrahedral meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the case described by a config file
    Run {
        config: PathBuf,
    },
    /// Mesh-refinement study of a manufactured or Gaussian case
    Convergence {
        /// mms1, mms2 or gaussian
        suite: Suite,
        #[arg(long, default_value = "lader")]
        scheme: Scheme,
        /// Number of meshes, coarsest first
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Write the CSV here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum amplification factor of the 1D scheme over a parameter box
    StabilityMap {
        #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
        cmax: f64,
        #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
        dmax: f64,
        #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
        rmin: f64,
        #[arg(long, default_value_t = 21)]
        res: usize,
        #[arg(long, default_value_t = 256)]
        ntheta: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> fvfe::Result<()> {
    match cli.command {
        Command::Run { config } => {
            let cfg = CaseConfig::from_file(&config)?;
            let out = cfg.output_dir.clone();
            eprintln!("running {:?} with {}", cfg.case, cfg.scheme.scheme);
            let (sim, rec) = run_case(cfg)?;
            let last = rec.residuals.last().copied().unwrap_or(0.0);
            println!(
                "steps {}  t {:.6}  last residual {:.3e}  steady {}  wall {:.1}s",
                rec.steps(),
                sim.state.time,
                last,
                rec.steady,
                rec.wall_time.iter().sum::<f64>()
            );
            if let Some(acc) = &rec.errors {
                let names = ["pi", "w_u", "w_k", "w_eps", "w_y"];
                let present: Vec<&str> = names.iter().copied().filter(|n| acc.error(n).is_some()).collect();
                let mut report = ErrorReport::new(&present);
                report.push("run", 0.0, acc);
                match &out {
                    Some(dir) => write_csv(&report, &dir.join("errors.csv"))?,
                    None => print!("{}", report.to_csv()),
                }
            }
        }
        Command::Convergence { suite, scheme, levels, out } => {
            let report = convergence_suite(suite, scheme, levels, |name, steps, secs| {
                eprintln!("{name}: {steps} steps in {secs:.1}s");
            })?;
            match out {
                Some(path) => write_csv(&report, &path)?,
                None => print!("{}", report.to_csv()),
            }
        }
        Command::StabilityMap { cmax, dmax, rmin, res, ntheta } => {
            let o = StabilityOrthotope::new(cmax, dmax, rmin)?;
            let rows = stability_map(&o, res, ntheta)?;
            let stdout = std::io::stdout();
            let mut w = std::io::BufWriter::new(stdout.lock());
            writeln!(w, "c,d,r,max_abs_A")?;
            for [c, d, r, a] in rows {
                writeln!(w, "{c},{d},{r},{a:.12}")?;
            }
        }
    }
    Ok(())
}
