use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{Antenna, Scenario, SyncMode};
use super::run::MatrixResult;
use crate::framing::ModCod;
use crate::metrics::NpgReport;
use crate::{Error, Result};

/// One row of the comparison table: an antenna and scenario pair, with one
/// optional entry per MODCOD in [`ModCod::ALL`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub antenna: Antenna,
    pub scenario: Scenario,
    pub entries: Vec<Option<NpgReport>>,
}

impl ComparisonRow {
    pub fn label(&self) -> String {
        format!("{}-{}", self.antenna, self.scenario)
    }

    pub fn entry(&self, modcod: ModCod) -> Option<&NpgReport> {
        let i = ModCod::ALL.iter().position(|&m| m == modcod)?;
        self.entries.get(i)?.as_ref()
    }
}

/// NPG and SNR-gain comparison of the two sync modes, six rows by three
/// MODCODs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    /// Cells without both sync modes aggregated are left empty.
    pub fn from_matrix(m: &MatrixResult) -> Self {
        let mut rows = Vec::new();
        for antenna in Antenna::ALL {
            for scenario in Scenario::ALL {
                let entries = ModCod::ALL
                    .iter()
                    .map(|&mc| {
                        let unsync = m.cell(scenario, antenna, mc, SyncMode::Internal)?.aggregate?;
                        let sync = m.cell(scenario, antenna, mc, SyncMode::Gpsdo)?.aggregate?;
                        Some(NpgReport::compare(&unsync, &sync))
                    })
                    .collect();
                rows.push(ComparisonRow {
                    antenna,
                    scenario,
                    entries,
                });
            }
        }
        Self { rows }
    }

    pub fn row(&self, antenna: Antenna, scenario: Scenario) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.antenna == antenna && r.scenario == scenario)
    }

    pub fn csv_header() -> String {
        let mut h = String::from("cell");
        for metric in ["npg_ber", "npg_fer", "snr_gain_db"] {
            for m in ModCod::ALL {
                write!(h, ",{metric}_{m}").unwrap();
            }
        }
        h
    }

    pub fn to_csv(&self) -> String {
        let mut s = Self::csv_header();
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.label());
            for pick in [|e: &NpgReport| e.npg_ber, |e: &NpgReport| e.npg_fer, |e: &NpgReport| e.snr_gain_db] {
                for e in &r.entries {
                    match e {
                        Some(e) => write!(s, ",{:.6}", pick(e)).unwrap(),
                        None => s.push(','),
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    /// Parses [`Self::to_csv`] output back.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(Self::csv_header().as_str()) {
            return Err(Error::Table {
                line: 1,
                reason: "unexpected header".into(),
            });
        }
        let n = ModCod::ALL.len();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let err = |reason: String| Error::Table { line: i + 2, reason };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 1 + 3 * n {
                return Err(err(format!("expected {} fields", 1 + 3 * n)));
            }
            let (a, s) = fields[0].split_once('-').ok_or_else(|| err("bad cell label".into()))?;
            let num = |f: &str| -> Result<Option<f64>> {
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse().map(Some).map_err(|_| err(format!("bad number '{f}'")))
                }
            };
            let mut entries = Vec::new();
            for k in 0..n {
                let v = (num(fields[1 + k])?, num(fields[1 + n + k])?, num(fields[1 + 2 * n + k])?);
                entries.push(match v {
                    (Some(npg_ber), Some(npg_fer), Some(snr_gain_db)) => Some(NpgReport {
                        npg_ber,
                        npg_fer,
                        snr_gain_db,
                    }),
                    (None, None, None) => None,
                    _ => return Err(err("partially filled entry".into())),
                });
            }
            rows.push(ComparisonRow {
                antenna: Antenna::from_str(a)?,
                scenario: Scenario::from_str(s)?,
                entries,
            });
        }
        Ok(Self { rows })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format '{s}'"))),
        }
    }
}

/// Matrix results plus the derived table, as written to `matrix.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub matrix: MatrixResult,
    pub table: ComparisonTable,
}

impl MatrixReport {
    pub fn new(matrix: MatrixResult) -> Self {
        let table = ComparisonTable::from_matrix(&matrix);
        Self { matrix, table }
    }
}

/// Writes `matrix.csv` or `matrix.json` plus one series file per table row
/// and metric. Returns the paths written.
pub fn emit_report(report: &MatrixReport, out_dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    let main = match format {
        OutputFormat::Csv => {
            let p = out_dir.join("matrix.csv");
            fs::write(&p, report.table.to_csv())?;
            p
        }
        OutputFormat::Json => {
            let p = out_dir.join("matrix.json");
            fs::write(&p, serde_json::to_string_pretty(report)?)?;
            p
        }
    };
    written.push(main);
    for row in &report.table.rows {
        for (metric, pick) in [
            ("npg_ber", (|e: &NpgReport| e.npg_ber) as fn(&NpgReport) -> f64),
            ("npg_fer", |e| e.npg_fer),
            ("snr_gain_db", |e| e.snr_gain_db),
        ] {
            let mut s = format!("modcod,{metric}\n");
            for (m, e) in ModCod::ALL.iter().zip(&row.entries) {
                match e {
                    Some(e) => writeln!(s, "{m},{:.6}", pick(e)).unwrap(),
                    None => writeln!(s, "{m},").unwrap(),
                }
            }
            let p = out_dir.join(format!("series_{}_{metric}.csv", row.label().to_ascii_lowercase()));
            fs::write(&p, s)?;
            written.push(p);
        }
    }
    Ok(written)
}

pub fn load_report_json(path: &Path) -> Result<MatrixReport> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
