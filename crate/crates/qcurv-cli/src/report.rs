//! Machine-readable reports: stable field order, no floats for infinities.

use base64::Engine;
use qcurv_core::matcore::CMatrix;
use qcurv_core::metrics::TransportValue;
use serde::Serialize;

pub const REPORT_VERSION: &str = "0.1.0";

#[derive(Serialize)]
pub struct ReportEnvelope<T: Serialize> {
    pub version: &'static str,
    pub task: String,
    pub seed: u64,
    pub tolerance: f64,
    pub report: T,
}

#[derive(Serialize)]
pub struct TransportJson {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    pub gap: f64,
}

impl TransportJson {
    pub fn from_value(v: &TransportValue, gap: f64) -> Self {
        match v {
            TransportValue::Finite(x) => TransportJson {
                status: "finite",
                value: Some(*x),
                gap,
            },
            TransportValue::Infinite => TransportJson {
                status: "infinite",
                value: None,
                gap,
            },
        }
    }
}

#[derive(Serialize)]
pub struct CurvatureJson {
    pub kind: &'static str,
    pub factor_upper: f64,
    pub factor_lower: f64,
    pub kappa: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub certified: bool,
    pub method: String,
    pub residuals: ResidualsJson,
}

#[derive(Serialize)]
pub struct ResidualsJson {
    pub witness_seminorm: f64,
    pub witness_image_seminorm: f64,
}

/// Column-major f64 pairs, base64 of the little-endian bytes.
pub fn encode_matrix(m: &CMatrix) -> String {
    let mut bytes = Vec::with_capacity(16 * m.len() + 8);
    bytes.extend_from_slice(&(m.nrows() as u32).to_le_bytes());
    bytes.extend_from_slice(&(m.ncols() as u32).to_le_bytes());
    for z in m.iter() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    base64::engine::general_purpose::STANDARD.encode(bytes)
}

#[derive(Serialize)]
pub struct GapJson {
    pub kind: &'static str,
    pub gap: f64,
}

#[derive(Serialize)]
pub struct CertificateJson<T: Serialize> {
    pub kind: &'static str,
    pub passed: bool,
    pub worst_slack: f64,
    pub details: T,
}

#[derive(Serialize)]
pub struct MixingRowJson {
    pub step: usize,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Serialize)]
pub struct IntertwineJson {
    pub kind: &'static str,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_left: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_right: Option<f64>,
}

pub fn to_csv_mixing(rows: &[MixingRowJson]) -> String {
    let mut out = String::from("step,measured,bound\n");
    for r in rows {
        out.push_str(&format!("{},{:.12e},{:.12e}\n", r.step, r.measured, r.bound));
    }
    out
}
