//! Command-line front end for the experiment matrix.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use dvbs2_linksim::framing::ModCod;
use dvbs2_linksim::harness::{
    emit_report, run_matrix, MatrixFilter, MatrixReport, OutputFormat, Scenario, SimConfig, SyncMode,
};

#[derive(Parser)]
#[command(version, about = "DVB-S2 link simulator: GPSDO versus free-running oscillators over a LEO channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario matrix and write the comparison table.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON parameter file; omitted keys take their defaults.
    #[arg(long)]
    config: PathBuf,
    /// clean, doppler or interference.
    #[arg(long)]
    scenario: Option<Scenario>,
    /// internal or gpsdo.
    #[arg(long)]
    sync_mode: Option<SyncMode>,
    /// MC4, MC12 or MC24.
    #[arg(long)]
    modcod: Option<ModCod>,
    /// Overrides the master seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Write per-burst loop traces next to the report.
    #[arg(long)]
    trace: bool,
}

fn run(args: RunArgs) -> Result<bool, Box<dyn std::error::Error>> {
    let mut cfg = SimConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    let filter = MatrixFilter {
        scenario: args.scenario,
        sync_mode: args.sync_mode,
        modcod: args.modcod,
    };
    let t = Instant::now();
    let matrix = run_matrix(&cfg, &filter, args.trace.then_some(args.out.as_path()))?;
    let report = MatrixReport::new(matrix);
    let written = emit_report(&report, &args.out, args.format)?;

    for cell in &report.matrix.cells {
        match (&cell.aggregate, &cell.error) {
            (_, Some(e)) => eprintln!("{:<40} FAILED: {e}", cell.name()),
            (Some(m), None) => eprintln!(
                "{:<40} BER {:.3e}  FER {:.3}  SNR {:6.2} dB",
                cell.name(),
                m.ber,
                m.fer,
                m.snr_estimate_db
            ),
            (None, None) => {}
        }
    }
    print!("{}", report.table.to_csv());
    eprintln!("wrote {} files to {} in {:.1?}", written.len(), args.out.display(), t.elapsed());
    let complete = report.matrix.failed_cells().next().is_none();
    Ok(complete)
}

fn main() -> ExitCode {
    let Command::Run(args) = Cli::parse().command;
    match run(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
