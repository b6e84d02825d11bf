use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gkz_cli::config::{parse_list, parse_matrix, parse_point};
use gkz_cli::{run, CliError, Command, InstanceConfig};

/// Exact finite-field hypergeometric sums and Frobenius weight checks.
#[derive(Parser, Debug)]
#[command(name = "gkz", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Instance file (JSON, or TOML with a .toml extension).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    e: Option<u32>,
    /// Rows separated by ';', entries by ','.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    chi: Option<String>,
    /// Field elements, or g^k for powers of the generator.
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    m_max: Option<u32>,
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    depth: Option<usize>,
    /// (n, m) for katz, as "n,m".
    #[arg(long)]
    shape: Option<String>,
    #[arg(long)]
    attempts: Option<u32>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn build_config(cli: &Cli) -> Result<InstanceConfig, CliError> {
    let mut c = match (&cli.config, cli.p) {
        (Some(path), _) => InstanceConfig::load(path)?,
        (None, Some(p)) => InstanceConfig::new(p),
        (None, None) => return Err(CliError::Usage("give --config FILE or --p".into())),
    };
    if let Some(p) = cli.p {
        c.p = p;
    }
    if let Some(e) = cli.e {
        c.e = e;
    }
    if let Some(m) = &cli.matrix {
        c.matrix = parse_matrix(m)?;
    }
    if let Some(chi) = &cli.chi {
        c.chi = parse_list(chi)?;
    }
    if let Some(x) = &cli.x {
        c.x = Some(parse_point(x)?);
    }
    if let Some(v) = cli.m_max {
        c.m_max = v;
    }
    if let Some(v) = cli.digits {
        c.digits = v;
    }
    if let Some(v) = cli.budget {
        c.budget = v;
    }
    if let Some(v) = cli.seed {
        c.seed = v;
    }
    if let Some(v) = cli.depth {
        c.depth = Some(v);
    }
    if let Some(v) = cli.attempts {
        c.attempts = v;
    }
    if let Some(s) = &cli.shape {
        match parse_list(s)?.as_slice() {
            [n, m] if *n >= 0 && *m >= 0 => c.shape = Some([*n as usize, *m as usize]),
            _ => return Err(CliError::Usage(format!("shape must be n,m, got {s:?}"))),
        }
    }
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|c| run(cli.command, &c));
    match result {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("{}", CliError::Usage(format!("cannot write {}: {e}", path.display())).to_json());
                    return ExitCode::from(2);
                }
            }
            if cli.json {
                println!("{text}");
            } else {
                print!("{}", report.summary());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
