//! Analysis reports, exports and batch runs over directories of codes.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gausscode::{canonicalize, carrier_genus, is_connected, is_reduced, parse, GaussCode};
use crate::notation::{dt_code, from_pd, parse_pd, pd_code, render_dt, render_pd};
use crate::par::{self, ExecMode};
use crate::prime::{
    exceptional_case, hyperbolicity_certificate, primeness_certificate, ExceptionalCase,
    HyperbolicityVerdict, PrimeStatus, PrimenessCertificate, Verdict,
};
use crate::surface::{state_circles, surface_report, StateCount, SurfaceReport};

pub const SCHEMA_VERSION: u32 = 1;

/// JSON schema for [`TuraevReport`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/turaev_report.schema.json");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub states: bool,
    pub carrier: bool,
}

impl AnalyzeOptions {
    pub fn all() -> Self {
        AnalyzeOptions { states: true, carrier: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Carrier {
    pub genus: u32,
    pub realizable: bool,
}

/// Fields that are undefined for a code (the surface of a disconnected
/// diagram, state counts of a generalized one) are left out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuraevReport {
    pub schema_version: u32,
    pub canonical_code: String,
    pub crossings: usize,
    pub components: usize,
    pub connected: bool,
    pub reduced: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<SurfaceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<StateCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<Carrier>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primeness: Option<PrimenessCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptional: Option<ExceptionalCase>,
    pub verdict: HyperbolicityVerdict,
}

impl TuraevReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn analyze_code(code: &GaussCode, opts: AnalyzeOptions) -> TuraevReport {
    let code = canonicalize(code);
    let classical = !code.is_generalized();
    TuraevReport {
        schema_version: SCHEMA_VERSION,
        canonical_code: code.render(),
        crossings: code.crossing_count(),
        components: code.component_count(),
        connected: is_connected(&code),
        reduced: is_reduced(&code),
        surface: surface_report(&code).ok(),
        states: if opts.states && classical { state_circles(&code).ok() } else { None },
        carrier: if opts.carrier && classical {
            carrier_genus(&code).ok().map(|(genus, realizable)| Carrier { genus, realizable })
        } else {
            None
        },
        primeness: primeness_certificate(&code).ok(),
        exceptional: exceptional_case(&code).ok(),
        verdict: hyperbolicity_certificate(&code),
    }
}

/// Reports for many codes, in input order.
pub fn analyze_many(codes: &[GaussCode], opts: AnalyzeOptions, mode: ExecMode) -> Vec<TuraevReport> {
    par::map(mode, codes, |c| analyze_code(c, opts))
}

/// Reads a code from a file: PD notation for `.pd` files, otherwise Gauss
/// text. Lines starting with `#` are ignored.
pub fn read_code(path: &Path) -> Result<GaussCode> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, &e))?;
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    if path.extension().is_some_and(|e| e == "pd") {
        from_pd(&parse_pd(&body)?)
    } else {
        parse(&body)
    }
}

/// Loads `input` as a file when such a file exists, else parses it as code.
pub fn load_input(input: &str) -> Result<GaussCode> {
    let path = Path::new(input);
    if path.is_file() {
        read_code(path)
    } else {
        parse(input)
    }
}

pub fn analyze_pipeline(input: &str, opts: AnalyzeOptions) -> Result<TuraevReport> {
    Ok(analyze_code(&load_input(input)?, opts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExportFormat {
    GaussText,
    JsonReport,
    DTCode,
    PDCode,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gauss" => Ok(ExportFormat::GaussText),
            "json" => Ok(ExportFormat::JsonReport),
            "dt" => Ok(ExportFormat::DTCode),
            "pd" => Ok(ExportFormat::PDCode),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportBundle {
    pub format: ExportFormat,
    pub payload: String,
}

pub fn export_diagram(code: &GaussCode, format: ExportFormat) -> Result<ExportBundle> {
    let payload = match format {
        ExportFormat::GaussText => code.render(),
        ExportFormat::JsonReport => analyze_code(code, AnalyzeOptions::all()).to_json(),
        ExportFormat::DTCode => render_dt(&dt_code(code)?),
        ExportFormat::PDCode => render_pd(&pd_code(code)?),
    };
    Ok(ExportBundle { format, payload })
}

/// One CSV row. Cells that do not apply are empty; failed files carry
/// `error:<kind>` in the verdict column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchRow {
    pub file: String,
    pub crossings: Option<usize>,
    pub components: Option<usize>,
    pub connected: Option<bool>,
    pub reduced: Option<bool>,
    pub orientable: Option<bool>,
    pub twice_genus: Option<u32>,
    pub a_circles: Option<usize>,
    pub b_circles: Option<usize>,
    pub realizable: Option<bool>,
    pub subcode_free: Option<bool>,
    pub exceptional: Option<String>,
    pub verdict: String,
}

impl BatchRow {
    fn from_report(file: String, r: &TuraevReport) -> Self {
        BatchRow {
            file,
            crossings: Some(r.crossings),
            components: Some(r.components),
            connected: Some(r.connected),
            reduced: Some(r.reduced),
            orientable: r.surface.map(|s| s.orientable),
            twice_genus: r.surface.map(|s| s.twice_genus),
            a_circles: r.states.map(|s| s.a_circles),
            b_circles: r.states.map(|s| s.b_circles),
            realizable: r.carrier.map(|c| c.realizable),
            subcode_free: r.primeness.as_ref().map(|p| p.status == PrimeStatus::SubcodeFree),
            exceptional: r.exceptional.map(|e| format!("{e:?}")),
            verdict: format!("{:?}", r.verdict.verdict),
        }
    }

    fn from_error(file: String, e: &Error) -> Self {
        BatchRow {
            file,
            crossings: None,
            components: None,
            connected: None,
            reduced: None,
            orientable: None,
            twice_genus: None,
            a_circles: None,
            b_circles: None,
            realizable: None,
            subcode_free: None,
            exceptional: None,
            verdict: format!("error:{}", e.kind()),
        }
    }

    pub fn is_error(&self) -> bool {
        self.verdict.starts_with("error:")
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == format!("{:?}", Verdict::Certified)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub files: usize,
    pub errors: usize,
    pub certified: usize,
}

impl fmt::Display for BatchSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} files, {} certified, {} errors", self.files, self.certified, self.errors)
    }
}

/// The `*.gauss` files of a directory, sorted by file name.
pub fn gauss_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, &e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, &e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "gauss") {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

pub fn batch_rows(dir: &Path, mode: ExecMode) -> Result<Vec<BatchRow>> {
    let files = gauss_files(dir)?;
    Ok(par::map(mode, &files, |path| {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        match read_code(path) {
            Ok(code) => BatchRow::from_report(name, &analyze_code(&code, AnalyzeOptions::all())),
            Err(e) => BatchRow::from_error(name, &e),
        }
    }))
}

pub fn write_csv<W: std::io::Write>(rows: &[BatchRow], out: W) -> Result<()> {
    let csv_err = |e: csv::Error| Error::Io { path: "csv".into(), message: e.to_string() };
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "file", "crossings", "components", "connected", "reduced", "orientable", "twice_genus",
            "a_circles", "b_circles", "realizable", "subcode_free", "exceptional", "verdict",
        ])
        .map_err(csv_err)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Io { path: "csv".into(), message: e.to_string() })
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<BatchRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Io { path: "csv".into(), message: e.to_string() })
}

/// Analyzes every `*.gauss` file of `dir` and writes one CSV row per file.
pub fn run_batch(dir: &Path, out: &Path, mode: ExecMode) -> Result<BatchSummary> {
    let rows = batch_rows(dir, mode)?;
    let file = fs::File::create(out).map_err(|e| Error::io(out, &e))?;
    write_csv(&rows, std::io::BufWriter::new(file))?;
    Ok(BatchSummary {
        files: rows.len(),
        errors: rows.iter().filter(|r| r.is_error()).count(),
        certified: rows.iter().filter(|r| r.is_certified()).count(),
    })
}
