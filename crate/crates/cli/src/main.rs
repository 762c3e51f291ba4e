mod config;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use adaptive_inpaint::bench::{bench, summary_json, write_csv, BenchOptions};
use adaptive_inpaint::{generate_mask, inpaint_file, save_mask, InpaintConfig, LineMaskSpec};
use anyhow::Context;
use clap::{Args, CommandFactory, Parser, Subcommand};
use inpaint_service::{ServiceConfig, DEFAULT_BODY_LIMIT};

/// Scratch inpainting with edge-aware directional splines.
///
/// Every subcommand accepts `--config FILE`, a flat `key = value` file whose
/// keys are that subcommand's long flag names; flags on the command line win.
#[derive(Parser, Debug)]
#[command(name = "adaptive-inpaint", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Restore the masked pixels of an image.
    Inpaint {
        #[arg(long)]
        image: PathBuf,
        /// Gray PNG; values above 127 mark lost pixels.
        #[arg(long)]
        mask: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a random scratch mask.
    MaskGen {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        mask: MaskArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Mask, restore and score every PNG in a directory.
    Bench {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out_csv: PathBuf,
        /// Per-method means as JSON.
        #[arg(long)]
        summary_json: Option<PathBuf>,
        /// Mask seeds, comma separated or repeated.
        #[arg(long = "seed", value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        /// Images processed concurrently; each inpaint is timed single-threaded.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        mask: MaskArgs,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory served at `/`.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Concurrent inpaint computations (default: available cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Request body limit in bytes.
        #[arg(long, default_value_t = DEFAULT_BODY_LIMIT)]
        body_limit: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Flat key = value file of defaults for this subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Neighbors per direction (even, >= 2).
    #[arg(long, default_value_t = 4)]
    k_total: usize,
    /// Edge score threshold in (0, 1).
    #[arg(long, default_value_t = 0.15)]
    edge_threshold: f64,
    #[arg(long, default_value_t = 8)]
    max_passes: usize,
}

impl EngineArgs {
    fn config(&self) -> InpaintConfig {
        InpaintConfig {
            k_total: self.k_total,
            edge_threshold: self.edge_threshold,
            max_passes: self.max_passes,
        }
    }
}

#[derive(Args, Debug)]
struct MaskArgs {
    #[arg(long, default_value_t = 10)]
    lines: u32,
    /// Inclusive thickness range `A..B`.
    #[arg(long, value_parser = parse_range, default_value = "1..3")]
    thickness: (u32, u32),
    /// Inclusive length range `A..B` (default: 20..min(w,h)/2).
    #[arg(long, value_parser = parse_range)]
    length: Option<(u32, u32)>,
}

impl MaskArgs {
    fn spec(&self, seed: u64) -> LineMaskSpec {
        LineMaskSpec {
            line_count: self.lines,
            thickness_range: self.thickness,
            length_range: self.length,
            seed,
        }
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a: u32 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start in `{s}`"))?;
    let b: u32 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end in `{s}`"))?;
    if a > b {
        return Err(format!("range start exceeds end in `{s}`"));
    }
    Ok((a, b))
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args: Vec<_> = std::env::args_os().collect();
    let args = match config::merge(&Cli::command(), args) {
        Ok(a) => a,
        Err(e) => return usage_error(e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if let Err(e) = validate(&cli.command) {
        return usage_error(e);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn validate(cmd: &Cmd) -> adaptive_inpaint::Result<()> {
    match cmd {
        Cmd::Inpaint { engine, .. } => engine.config().validate(),
        Cmd::MaskGen { mask, .. } => mask.spec(0).validate(),
        Cmd::Bench {
            engine, mask, jobs, ..
        } => {
            engine.config().validate()?;
            mask.spec(0).validate()?;
            if *jobs == 0 {
                return Err(adaptive_inpaint::Error::InvalidParameter(
                    "jobs must be at least 1".into(),
                ));
            }
            Ok(())
        }
        Cmd::Serve {
            workers: Some(0), ..
        } => Err(adaptive_inpaint::Error::InvalidParameter(
            "workers must be at least 1".into(),
        )),
        Cmd::Serve { .. } => Ok(()),
    }
}

fn run(cmd: Cmd) -> anyhow::Result<()> {
    match cmd {
        Cmd::Inpaint {
            image,
            mask,
            out,
            engine,
            ..
        } => {
            let timing = inpaint_file(&image, &mask, &out, &engine.config())?;
            println!("wrote {} ({:.3}s)", out.display(), timing.seconds());
        }
        Cmd::MaskGen {
            width,
            height,
            out,
            mask,
            seed,
            ..
        } => {
            let m = generate_mask(width, height, &mask.spec(seed))?;
            save_mask(&m, &out)?;
            println!(
                "wrote {} ({} lost pixels)",
                out.display(),
                m.missing_count()
            );
        }
        Cmd::Bench {
            dataset,
            out_csv,
            summary_json: summary_path,
            seeds,
            jobs,
            mask,
            engine,
            ..
        } => {
            let opts = BenchOptions {
                mask_spec: mask.spec(0),
                seeds,
                config: engine.config(),
                jobs,
            };
            let report = bench(&dataset, &opts)?;
            let file = std::fs::File::create(&out_csv)
                .with_context(|| format!("cannot create {}", out_csv.display()))?;
            write_csv(&report.rows, std::io::BufWriter::new(file))?;
            let summary = summary_json(&report, &opts);
            if let Some(path) = summary_path {
                std::fs::write(&path, serde_json::to_string_pretty(&summary)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            for s in &report.summary {
                println!(
                    "{:<16} psnr {:>8.3} dB  ssim {:.4}  {:.3}s/image",
                    s.method.name(),
                    s.mean_psnr_db,
                    s.mean_ssim,
                    s.mean_elapsed_seconds
                );
            }
            for v in &report.violations {
                eprintln!("note: {v}");
            }
        }
        Cmd::Serve {
            port,
            host,
            static_dir,
            workers,
            body_limit,
            ..
        } => {
            let defaults = ServiceConfig::default();
            let cfg = ServiceConfig {
                body_limit,
                workers: workers.unwrap_or(defaults.workers),
                static_dir,
            };
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            rt.block_on(inpaint_service::serve(addr, cfg))
                .with_context(|| format!("server on {addr} failed"))?;
        }
    }
    Ok(())
}
