use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parakost::feff::{EmbeddingMaps, Source};
use parakost::kostant::{costar, Cochain};
use parakost::report::Report;
use parakost::suite::{cell_seed, Check};

mod cochain_file;
mod output;

#[derive(Parser)]
#[command(name = "parakost", version, about = "Exact checks for graded sl(m) cochain complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a range of n.
    Verify(VerifyArgs),
    /// Apply the codifferential to a cochain file.
    Costar {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Transfer a cochain over sl(n+2) to sl(n+3) with the (2, n+1) grading.
    Transfer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        source: SourceArg,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Path,
    Ag,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy)]
enum CheckSel {
    All,
    One(Check),
}

fn parse_check(s: &str) -> Result<CheckSel, String> {
    if s == "all" {
        return Ok(CheckSel::All);
    }
    s.parse().map(CheckSel::One).map_err(|e: String| {
        let names: Vec<_> = Check::ALL.iter().map(|c| c.name()).collect();
        format!("{e}; expected all or one of {}", names.join(", "))
    })
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, value_parser = parse_check)]
    check: CheckSel,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 3)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random samples per sampled suite.
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Fill in wall_time_ms. Off by default so that output is reproducible.
    #[arg(long)]
    timings: bool,
    /// Worker threads; 0 means one per available core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// A failure that maps to exit code 2.
struct UsageError(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(&args),
        Command::Costar { input, output } => cmd_costar(&input, &output).map(|()| true),
        Command::Transfer { input, source, output } => cmd_transfer(&input, source, &output).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Runs every cell, possibly in parallel, and prints reports in cell order.
fn verify(args: &VerifyArgs) -> Result<bool, UsageError> {
    if args.n_min > args.n_max {
        return Err(UsageError(format!("--n-min {} exceeds --n-max {}", args.n_min, args.n_max)));
    }
    let checks: Vec<Check> = match args.check {
        CheckSel::All => Check::ALL.to_vec(),
        CheckSel::One(c) => vec![c],
    };
    let cells: Vec<(Check, usize)> =
        checks.iter().flat_map(|&c| (args.n_min.max(c.min_n())..=args.n_max).map(move |n| (c, n))).collect();
    let jobs = match args.jobs {
        0 => std::thread::available_parallelism().map_or(1, |p| p.get()),
        j => j,
    };
    let results: Vec<Mutex<Option<(Report, u64)>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(cells.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(check, n)) = cells.get(i) else { break };
                let start = Instant::now();
                let report = check.run(n, cell_seed(args.seed, check, n), args.trials).expect("cell in domain");
                let ms = start.elapsed().as_millis() as u64;
                *results[i].lock().unwrap() = Some((report, ms));
            });
        }
    });

    let mut all_pass = true;
    if args.format == Format::Text {
        println!("{}", output::table_header(args.timings));
    }
    for slot in results {
        let (report, ms) = slot.into_inner().unwrap().expect("every cell ran");
        let ms = args.timings.then_some(ms);
        all_pass &= report.passed();
        match args.format {
            Format::Json => println!("{}", output::json_line(&report, ms)),
            Format::Text => println!("{}", output::table_row(&report, ms)),
        }
    }
    Ok(all_pass)
}

fn read_cochain(path: &Path) -> Result<Cochain, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    cochain_file::parse(&text).map_err(|e| UsageError(format!("{}:{}: {}", path.display(), e.line, e.message)))
}

fn write_cochain(path: &Path, c: &Cochain) -> Result<(), UsageError> {
    std::fs::write(path, cochain_file::render(c)).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn cmd_costar(input: &Path, output: &Path) -> Result<(), UsageError> {
    let c = read_cochain(input)?;
    if c.degree() == 0 {
        return Err(UsageError(format!("{}: costar needs degree at least 1", input.display())));
    }
    write_cochain(output, &costar(&c))
}

fn cmd_transfer(input: &Path, source: SourceArg, output: &Path) -> Result<(), UsageError> {
    let source = match source {
        SourceArg::Path => Source::Path,
        SourceArg::Ag => Source::Ag,
    };
    let c = read_cochain(input)?;
    let g = c.context().algebra();
    let n = g.m().checked_sub(2).filter(|&n| n >= source.min_n());
    let Some(n) = n.filter(|&n| g.blocks() == source.blocks(n).as_slice()) else {
        return Err(UsageError(format!(
            "{}: grading {:?} is not the {source} grading of sl(n+2) for any n >= {}",
            input.display(),
            g.blocks(),
            source.min_n()
        )));
    };
    let maps = EmbeddingMaps::build(n, source).map_err(|e| UsageError(format!("embedding for n = {n}: {e:?}")))?;
    write_cochain(output, &maps.transfer(&c))
}
