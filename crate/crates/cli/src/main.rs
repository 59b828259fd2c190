use std::io::Read;
use std::process::ExitCode;

use clap::Parser;

use polyzeta_cli::{exit_code, render_text, run, JobSpec, Mode, SeriesSpec, ZSpec};

/// Decompose hypergeometric multiple series into multiple polylogarithms
/// (generic z) or multiple zeta values (z = 1).
#[derive(Parser, Debug)]
#[command(name = "polyzeta", version)]
struct Args {
    /// JSON job file; `-` reads standard input. Optional when --numerator is given.
    job: Option<String>,
    /// Decompose at z = 1 into multiple zeta values.
    #[arg(long, conflicts_with_all = ["generic_z", "from_integral"])]
    at_one: bool,
    /// Decompose for generic z into multiple polylogarithms.
    #[arg(long, conflicts_with = "from_integral")]
    generic_z: bool,
    /// Treat the job as a Sorokin-type integral.
    #[arg(long)]
    from_integral: bool,
    /// Check the decomposition numerically against direct summation.
    #[arg(long)]
    verify: bool,
    /// Working precision in bits.
    #[arg(long)]
    precision: Option<u32>,
    /// Summation cutoff for the numeric check.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Emit denominator and degree certificates for the elementary bricks.
    #[arg(long)]
    certificate: bool,
    /// Print the full JSON document instead of a summary.
    #[arg(long)]
    json: bool,
    /// Numerator polynomial in k1..kp, e.g. "5*k2^2 - k1^2".
    #[arg(long, allow_hyphen_values = true)]
    numerator: Option<String>,
    /// Exponents A_i, comma separated.
    #[arg(long, value_delimiter = ',')]
    a: Vec<u32>,
    /// Pochhammer lengths minus one, n_i.
    #[arg(long, value_delimiter = ',')]
    n: Vec<u32>,
    /// Shifts r_i (default zero).
    #[arg(long, value_delimiter = ',')]
    r: Vec<u32>,
    /// Evaluation point, comma separated rationals, or "one" / "symbolic".
    #[arg(long)]
    z: Option<String>,
}

fn build_job(args: &Args) -> Result<JobSpec, String> {
    let mut job = match (&args.job, &args.numerator) {
        (Some(path), _) => {
            let text = if path == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
            };
            serde_json::from_str::<JobSpec>(&text).map_err(|e| format!("job file: {e}"))?
        }
        (None, Some(num)) => JobSpec {
            mode: Mode::DecomposeAtOne,
            series: Some(SeriesSpec {
                numerator: num.clone(),
                a: args.a.clone(),
                n: if args.n.is_empty() { vec![0; args.a.len()] } else { args.n.clone() },
                r: args.r.clone(),
            }),
            integral: None,
            z: ZSpec::one(),
            precision: 128,
            cutoff: 20000,
            emit_certificate: false,
            verify: false,
            tolerance: 1e-8,
        },
        (None, None) => return Err("give a job file or --numerator".into()),
    };
    if args.at_one {
        job.mode = Mode::DecomposeAtOne;
        job.z = ZSpec::one();
    }
    if args.generic_z {
        job.mode = Mode::DecomposeGenericZ;
        if job.z.is_one() {
            job.z = ZSpec::symbolic();
        }
    }
    if args.from_integral {
        job.mode = Mode::FromIntegral;
    }
    if let Some(z) = &args.z {
        job.z = match z.as_str() {
            "one" | "symbolic" => ZSpec::Named(z.clone()),
            _ => ZSpec::Point(z.split(',').map(|s| s.trim().to_string()).collect()),
        };
    }
    job.verify |= args.verify;
    job.emit_certificate |= args.certificate;
    if let Some(p) = args.precision {
        job.precision = p;
    }
    if let Some(c) = args.cutoff {
        job.cutoff = c;
    }
    Ok(job)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let job = match build_job(&args) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run(&job) {
        Ok(report) => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report.document).expect("document serializes"));
            } else {
                print!("{}", render_text(&report.document));
            }
            if report.verified == Some(false) {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
