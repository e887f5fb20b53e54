//! Certification across every small generating set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{certify, ueg_lower_bound, CertifyOptions};
use crate::error::Result;
use crate::group::{enumerate_generating_sets, growth_rate, GeneratingSet};
use crate::hhs::HHGStructure;

/// Radius at which each row's growth rate is estimated.
pub const SCAN_GROWTH_RADIUS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub generating_set: String,
    pub variant: String,
    /// Longest certified word over the row's generating set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word_length_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_lambda_estimate: Option<f64>,
    /// `log 2 / M` for the structure's ledger.
    pub ledger_bound: f64,
    /// Every free row has length at most `M` and meets its own `λ₀` bound.
    pub all_rows_meet_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub structure: String,
    pub size_bound: usize,
    pub length_bound: usize,
    pub ambient_radius: usize,
    pub symmetrized: bool,
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

fn run_row(s: &HHGStructure, x: &GeneratingSet, opts: &CertifyOptions) -> Result<ScanRow> {
    let m = s.group();
    let cert = certify(s, x, opts)?;
    let lambda = growth_rate(m, x, SCAN_GROWTH_RADIUS)?.lambda;
    Ok(ScanRow {
        generating_set: x.encode(m),
        variant: cert.variant_name().to_string(),
        word_length_bound: cert.pair().map(|p| p.max_length()),
        lambda_estimate: Some(lambda),
        lambda0_bound: ueg_lower_bound(&cert).ok(),
        error: None,
    })
}

/// One row per generating set that generates at `ambient_radius`; rows are
/// sorted by encoding and failures are recorded in place.
pub fn scan(
    s: &HHGStructure,
    size_bound: usize,
    length_bound: usize,
    ambient_radius: usize,
    symmetrize: bool,
    opts: &CertifyOptions,
) -> Result<ScanReport> {
    let m = s.group();
    let sets: Vec<GeneratingSet> =
        enumerate_generating_sets(m, size_bound, length_bound, ambient_radius)
            .map(|x| if symmetrize { x.symmetrize(m) } else { x })
            .collect();
    let mut rows: Vec<ScanRow> = sets
        .par_iter()
        .map(|x| {
            run_row(s, x, opts).unwrap_or_else(|e| ScanRow {
                generating_set: x.encode(m),
                variant: "error".into(),
                word_length_bound: None,
                lambda_estimate: None,
                lambda0_bound: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    rows.sort_by(|a, b| a.generating_set.cmp(&b.generating_set));
    let ledger = super::ConstantLedger::new(s.constants(), s.orthogonality_number(), None);
    let m_big = num_traits::ToPrimitive::to_f64(&ledger.m).unwrap_or(f64::INFINITY);
    let ledger_bound = std::f64::consts::LN_2 / m_big;
    let all_rows_meet_bound =
        rows.iter().all(
            |r| match (r.word_length_bound, r.lambda_estimate, r.lambda0_bound) {
                (Some(l), Some(lam), Some(b)) => {
                    (l as f64) <= m_big && lam >= b && lam >= ledger_bound
                }
                _ => r.error.is_none(),
            },
        );
    let min_lambda_estimate = rows
        .iter()
        .filter_map(|r| r.lambda_estimate)
        .reduce(f64::min);
    Ok(ScanReport {
        structure: s.name().to_string(),
        size_bound,
        length_bound,
        ambient_radius,
        symmetrized: symmetrize,
        summary: ScanSummary {
            rows: rows.len(),
            min_lambda_estimate,
            ledger_bound,
            all_rows_meet_bound,
        },
        rows,
    })
}
