use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use condensation_core::oracle::{exact_conditional_law, Statistic};
use condensation_core::par::try_map_replicas;
use condensation_core::samplers::{ConditionedSampler, Method};

use condensation_lab::config::Config;
use condensation_lab::dist::DistSpec;
use condensation_lab::experiments::{run_all, Ctx};
use condensation_lab::report::Timing;

#[derive(Parser)]
#[command(name = "condensation-lab", version, about = "Condensation trees: sampling, exact laws and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample conditioned trees and print one preorder degree row per tree.
    Sample {
        /// e.g. `theta=2.5,m=0.5` or `finite:0.6,0.2,0.1,0,0.1`
        #[arg(long)]
        dist: DistSpec,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// `auto`, `exact-bridge` or `rejection`
        #[arg(long, default_value = "auto")]
        method: Method,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Exact conditional law of a statistic by enumeration (n <= 14).
    Oracle {
        #[arg(long)]
        dist: DistSpec,
        #[arg(long)]
        n: usize,
        /// e.g. `delta`, `u`, `height`, `xi:1`, or a comma-joined list
        #[arg(long, default_value = "delta")]
        statistic: Statistic,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the experiment suite and write `report.json`.
    Exp {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the seed of the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
        /// Directory for cached bridge tables.
        #[arg(long)]
        table_cache: Option<PathBuf>,
    },
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build()?;
        return Ok(pool.install(f));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(f())
}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Sample { dist, n, count, method, seed, out, threads } => {
            let law = dist.build()?;
            let sampler = ConditionedSampler::new(&law, n, method)?;
            let trees = with_threads(threads, || {
                try_map_replicas(seed, &format!("sample/n{n}"), count, |_, rng| sampler.sample(rng))
            })??;
            let mut w = output(&out)?;
            for t in trees {
                writeln!(w, "{}", t.to_csv_row())?;
            }
            w.flush()?;
            Ok(true)
        }
        Command::Oracle { dist, n, statistic, out } => {
            let law = exact_conditional_law(&dist.build()?, n, &statistic)?;
            let mut w = output(&out)?;
            writeln!(w, "{statistic},probability")?;
            for (k, p) in &law.pmf {
                let key: Vec<String> = k.iter().map(i64::to_string).collect();
                writeln!(w, "{},{p:e}", key.join(","))?;
            }
            w.flush()?;
            Ok(true)
        }
        Command::Exp { config, seed, out, threads, table_cache } => {
            let mut cfg = match config {
                Some(p) => Config::load(&p)?,
                None => Config::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if table_cache.is_some() {
                cfg.table_cache = table_cache;
            }
            let start = Instant::now();
            let ctx = Ctx::new(cfg, Some(out.clone()));
            let (report, experiments) = with_threads(threads, || run_all(&ctx))??;
            report.write(&out)?;
            Timing {
                threads: with_threads(threads, condensation_core::par::worker_threads)?,
                total_seconds: start.elapsed().as_secs_f64(),
                experiments,
            }
            .write(&out)?;
            for e in &report.experiments {
                for c in &e.checks {
                    eprintln!("{:<6} {:<8} {:<32} {:.6} (target {:.6})", format!("{:?}", c.verdict).to_uppercase(), e.id, c.id, c.estimate, c.target);
                }
            }
            let s = &report.summary;
            eprintln!("{} checks: {} passed, {} failed, {} info", s.checks, s.passed, s.failed, s.info);
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
