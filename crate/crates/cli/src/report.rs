use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use hhg_core::certify::ConstantLedger;
use hhg_core::hhs::{builders, HHGStructure};
use hhg_core::LabError;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Exit status: 0 pass, 1 refuted or failed, 2 usage or IO.
#[derive(Debug)]
pub enum Failure {
    Fail(String),
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Fail(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Fail(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Input(_) | LabError::Parse { .. } | LabError::Precondition(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Fail(e.to_string()),
        }
    }
}

pub struct Loaded {
    pub structure: HHGStructure,
    pub sha256: String,
}

/// A structure file path, or the name of a built-in structure.
pub fn load(target: &str) -> Result<Loaded, Failure> {
    let path = Path::new(target);
    let structure = if path.exists() {
        HHGStructure::from_path(path)?
    } else if let Some(file) = builders::by_name(target) {
        HHGStructure::load(file)?
    } else {
        return Err(Failure::Usage(format!(
            "no structure file or built-in structure named {target}"
        )));
    };
    let sha256 = hex::encode(Sha256::digest(structure.canonical_json().as_bytes()));
    Ok(Loaded { structure, sha256 })
}

pub fn base_ledger(s: &HHGStructure) -> ConstantLedger {
    ConstantLedger::new(s.constants(), s.orthogonality_number(), None)
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: u32,
    pub command: &'a str,
    pub structure: &'a str,
    pub structure_sha256: &'a str,
    pub seed: u64,
    pub ledger: &'a ConstantLedger,
    pub report: T,
}

/// Writes to `out`, or to standard output when absent.
pub fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Usage(format!("cannot write to standard output: {e}")))
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
