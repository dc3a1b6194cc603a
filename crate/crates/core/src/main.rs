use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use incvor::harness::{self, Distribution, ExportFormat, GenSpec, HarnessError, InputPoint, RunConfig};
use incvor::COORD_BOUND;

#[derive(Parser)]
#[command(name = "incvor", version, about = "Incremental Voronoi diagrams with exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Insert a point sequence, optionally verifying every step.
    Run(RunArgs),
    /// Time insertion over a ladder of sizes.
    Bench(BenchArgs),
    /// Build a diagram and write it out.
    Export(ExportArgs),
    /// Quick built-in check, or validate an exported diagram.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct Source {
    /// Point file: two integers per line, `#` comments.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    input: Option<PathBuf>,
    /// Generated points as dist:count:seed.
    #[arg(long, value_parser = str::parse::<GenSpec>)]
    gen: Option<GenSpec>,
    #[arg(long, default_value_t = COORD_BOUND)]
    coord_bound: i64,
}

impl Source {
    fn points(&self) -> Result<Vec<InputPoint>, HarnessError> {
        match (&self.input, self.gen) {
            (Some(path), _) => harness::read_points(path),
            (None, Some(g)) => Ok(harness::from_generated(&harness::generate(g, self.coord_bound))),
            (None, None) => Err(HarnessError::Usage("one of --input or --gen is required".into())),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    src: Source,
    /// Compare against an independent Delaunay triangulation after each insertion.
    #[arg(long)]
    check_oracle: bool,
    /// Validate all structures after each insertion.
    #[arg(long)]
    check_invariants: bool,
    /// Per-insertion CSV statistics.
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long, default_value = "text", value_parser = str::parse::<ExportFormat>)]
    format: ExportFormat,
    #[arg(long)]
    include_sentinels: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "uniform-disc", value_parser = str::parse::<Distribution>)]
    dist: Distribution,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 2000, 4000, 8000])]
    ladder: Vec<usize>,
    #[arg(long, default_value_t = COORD_BOUND)]
    coord_bound: i64,
    /// Write CSV here; JSON goes to stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    src: Source,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value = "text", value_parser = str::parse::<ExportFormat>)]
    format: ExportFormat,
    #[arg(long)]
    include_sentinels: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Text export to validate instead of the built-in check.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn dispatch(cli: Cli) -> Result<(), HarnessError> {
    match cli.cmd {
        Cmd::Run(a) => {
            let cfg = RunConfig {
                coord_bound: a.src.coord_bound,
                check_oracle: a.check_oracle,
                check_invariants: a.check_invariants,
                stats: a.stats,
                export: a.export,
                format: a.format,
                include_sentinels: a.include_sentinels,
            };
            let out = harness::run(&a.src.points()?, &cfg)?;
            let d = out.voronoi.diagram();
            println!(
                "inserted {} sites: {} vertices, {} edges, {} big cells",
                d.num_user_sites(),
                d.vertex_count(),
                d.edge_count(),
                out.voronoi.index().gamma.vertex_count()
            );
        }
        Cmd::Bench(a) => {
            let rows = harness::bench(a.dist, a.seed, &a.ladder, a.coord_bound)?;
            for r in &rows {
                if let Some(ratio) = r.time_ratio.filter(|&x| x >= 2.0) {
                    eprintln!("warning: time per insertion grew by {ratio:.2}x at n={}", r.n);
                }
            }
            if let Some(path) = &a.csv {
                harness::write_bench_csv(path, &rows)?;
            }
            println!("{}", serde_json::to_string_pretty(&rows).expect("bench rows serialize"));
        }
        Cmd::Export(a) => {
            let cfg = RunConfig { coord_bound: a.src.coord_bound, ..RunConfig::default() };
            let out = harness::run(&a.src.points()?, &cfg)?;
            harness::write_export(&a.output, &out.voronoi, a.format, a.include_sentinels)?;
        }
        Cmd::Selftest(a) => match &a.input {
            Some(path) => {
                let n = harness::check_export_file(path)?;
                println!("ok: {} sites, export is consistent", n);
            }
            None => {
                harness::selftest(a.count, a.seed)?;
                println!("ok");
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
