use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qmeasure::scenarios::{self, ScenarioParams};
use qmeasure::C64;

#[derive(Parser)]
#[command(
    name = "qmeasure",
    version,
    about = "Run quantum measurement scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and print its report
    Run {
        scenario: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Comma-separated times, e.g. 0,0.5,1,20
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        time_grid: Option<Vec<f64>>,
        /// Amplitude of |+>, as RE,IM
        #[arg(long, requires = "beta", allow_hyphen_values = true, value_parser = parse_complex)]
        alpha: Option<C64>,
        /// Amplitude of |->, as RE,IM
        #[arg(long, requires = "alpha", allow_hyphen_values = true, value_parser = parse_complex)]
        beta: Option<C64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List scenario names
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("{re:?}: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{im:?}: {e}"))?;
    Ok(C64::new(re, im))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::List => {
            for name in scenarios::list() {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            trials,
            seed,
            tau,
            time_grid,
            alpha,
            beta,
            format,
            out,
        } => {
            let params = ScenarioParams {
                seed,
                trials,
                tau,
                times: time_grid,
                amplitudes: alpha.zip(beta),
            };
            let report = match scenarios::run(&scenario, &params) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let text = match format {
                Format::Json => report.to_json(),
                Format::Csv => match report.to_csv() {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                },
            };
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
