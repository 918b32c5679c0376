//! Runs a reduced scenario matrix (one iteration of ten frames per cell)
//! and writes the CSV table and series files to a temporary directory.

use dvbs2_linksim::harness::{default_config, emit_report, run_matrix, MatrixFilter, MatrixReport, OutputFormat};

fn main() -> dvbs2_linksim::Result<()> {
    let mut sim = default_config();
    sim.iterations = 1;
    sim.frames_per_burst = 10;
    let report = MatrixReport::new(run_matrix(&sim, &MatrixFilter::default(), None)?);
    let out = std::env::temp_dir().join("dvbs2_matrix");
    let files = emit_report(&report, &out, OutputFormat::Csv)?;
    print!("{}", report.table.to_csv());
    println!("{} files in {}", files.len(), out.display());
    Ok(())
}
