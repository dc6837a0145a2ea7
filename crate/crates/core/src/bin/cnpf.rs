use clap::{Parser, Subcommand};
use cnpf::cli::config::RunConfig;
use cnpf::cli::{run, Command, EXIT_ERROR};
use cnpf::Error;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "cnpf", version, about = "Sarason functions, CNP factorizations and positivity certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// JSON run config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named preset used as the base config.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Output directory; the report goes to stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized checks, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Embedding point for a function of norm below one, `re,im` per coordinate separated by `;`.
    #[arg(long, global = true)]
    embed: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Kernel coefficients, CNP test, Gram and quotient positivity.
    Kernel,
    /// The factorization `F = Re(a) Phi/(1 - psi)` and its certificates.
    Factorize,
    /// Sarason function tables, majorant chain, quadrature cross-check.
    Sarason,
    /// Weighted Dirichlet spaces and the Blaschke growth table.
    Dirichlet,
    /// Carleson embedding test for a measure on the disc.
    Carleson,
}

fn parse_embed(text: &str) -> Result<Vec<(f64, f64)>, Error> {
    text.split(';')
        .map(|c| {
            let mut parts = c.split(',').map(|p| p.trim().parse::<f64>());
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(re)), Some(Ok(im)), None) => Ok((re, im)),
                (Some(Ok(re)), None, None) => Ok((re, 0.0)),
                _ => Err(Error::Config(format!("cannot parse embedding coordinate `{c}`"))),
            }
        })
        .collect()
}

fn config(cli: &Cli) -> Result<RunConfig, Error> {
    let text = match &cli.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let mut cfg = RunConfig::load(text.as_deref(), cli.preset.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    if let Some(w) = &cli.embed {
        cfg.embed = Some(parse_embed(w)?);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var("CNPF_THREADS") {
        let n: usize = v.parse().map_err(|_| Error::Config(format!("CNPF_THREADS = `{v}` is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Kernel => Command::Kernel,
        Cmd::Factorize => Command::Factorize,
        Cmd::Sarason => Command::Sarason,
        Cmd::Dirichlet => Command::Dirichlet,
        Cmd::Carleson => Command::Carleson,
    };
    let start = Instant::now();
    let result = threads().and_then(|_| config(&cli)).and_then(|cfg| run(command, &cfg));
    let output = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    for c in &output.report.checks {
        let v = if c.verdict.passed() { "pass" } else { "FAIL" };
        eprintln!("{v:4}  {}  {:e}", c.name, c.value);
    }
    for n in &output.report.notes {
        eprintln!("note  {n}");
    }
    let written = match &cli.out {
        Some(dir) => output.write_to(dir, start.elapsed()),
        None => output.report_json().and_then(|b| {
            use std::io::Write;
            std::io::stdout().write_all(&b).map_err(Error::from)
        }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    ExitCode::from(output.exit_code() as u8)
}
