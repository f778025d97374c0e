use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use super::{OutputFormat, SweepRow};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 19] = [
    "t1",
    "t2",
    "t3",
    "p00",
    "p01",
    "p10",
    "p11",
    "w",
    "fidelity",
    "eof",
    "concurrence",
    "chsh_M",
    "chsh_L",
    "steering3",
    "mutual_info",
    "classical_corr",
    "discord",
    "ppt_min_eig",
    "seed",
];

/// One parsed CSV line.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct CsvRecord {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    pub w: Option<f64>,
    pub fidelity: f64,
    pub eof: f64,
    pub concurrence: f64,
    #[serde(rename = "chsh_M")]
    pub chsh_m: f64,
    #[serde(rename = "chsh_L")]
    pub chsh_l: f64,
    pub steering3: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub ppt_min_eig: f64,
    pub seed: u64,
}

impl From<&SweepRow> for CsvRecord {
    fn from(r: &SweepRow) -> Self {
        let m = &r.measures;
        Self {
            t1: r.t[0],
            t2: r.t[1],
            t3: r.t[2],
            p00: r.p[0],
            p01: r.p[1],
            p10: r.p[2],
            p11: r.p[3],
            w: r.w,
            fidelity: r.fidelity,
            eof: m.eof,
            concurrence: m.concurrence,
            chsh_m: m.chsh_m,
            chsh_l: m.chsh_l,
            steering3: m.steering3,
            mutual_info: m.mutual_info,
            classical_corr: m.classical_corr,
            discord: m.discord,
            ppt_min_eig: m.ppt_min_eig,
            seed: r.seed,
        }
    }
}

impl CsvRecord {
    fn fields(&self) -> Vec<String> {
        let mut out: Vec<String> = [self.t1, self.t2, self.t3, self.p00, self.p01, self.p10, self.p11]
            .into_iter()
            .map(sig10)
            .collect();
        out.push(self.w.map(sig10).unwrap_or_default());
        out.extend(
            [
                self.fidelity,
                self.eof,
                self.concurrence,
                self.chsh_m,
                self.chsh_l,
                self.steering3,
                self.mutual_info,
                self.classical_corr,
                self.discord,
                self.ppt_min_eig,
            ]
            .into_iter()
            .map(sig10),
        );
        out.push(self.seed.to_string());
        out
    }
}

/// Rounds to 10 significant digits and prints the shortest exact form.
fn sig10(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float");
    let a = rounded.abs();
    if (1e-4..1e10).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(CsvRecord::from(r).fields())?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n").map_err(|e| Error::io("<json>", e))?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::InvalidState(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|rec| rec.map_err(Error::from)).collect()
}

/// Writes rows to `path` in `format`.
pub fn emit(rows: &[SweepRow], format: OutputFormat, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let buf = std::io::BufWriter::new(file);
    match format {
        OutputFormat::Csv => write_csv(rows, buf),
        OutputFormat::Json => write_json(rows, buf),
    }
    .map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}
