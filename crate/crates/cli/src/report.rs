//! Deterministic output rendering.
//!
//! CSV cells use 17-significant-digit scientific notation, `.` decimal
//! separator, and `\n` line endings, so identical configurations produce
//! byte-identical files. Diverging entries become empty CSV cells or JSON
//! nulls.

use serde::Serialize;

use gcs_metrology::sweep::SweepRow;

pub const SWEEP_HEADER: &str =
    "x,dphi_df,dphi_sing,dphi_hom_b,dphi_hom_c,qcrb_a,qcrb_b,qcrb_c,qfi_a,qfi_b,qfi_c";

/// Fixed-width scientific rendering of one finite value.
pub fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&cell(r.x));
        for v in [
            r.dphi_df, r.dphi_sing, r.dphi_hom_b, r.dphi_hom_c, r.qcrb_a, r.qcrb_b, r.qcrb_c,
            r.qfi_a, r.qfi_b, r.qfi_c,
        ] {
            out.push(',');
            out.push_str(&opt_cell(v));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonRow {
    x: f64,
    dphi_df: Option<f64>,
    dphi_sing: Option<f64>,
    dphi_hom_b: Option<f64>,
    dphi_hom_c: Option<f64>,
    qcrb_a: Option<f64>,
    qcrb_b: Option<f64>,
    qcrb_c: Option<f64>,
    qfi_a: Option<f64>,
    qfi_b: Option<f64>,
    qfi_c: Option<f64>,
}

pub fn rows_to_json(rows: &[SweepRow]) -> String {
    let mapped: Vec<JsonRow> = rows
        .iter()
        .map(|r| JsonRow {
            x: r.x,
            dphi_df: r.dphi_df,
            dphi_sing: r.dphi_sing,
            dphi_hom_b: r.dphi_hom_b,
            dphi_hom_c: r.dphi_hom_c,
            qcrb_a: r.qcrb_a,
            qcrb_b: r.qcrb_b,
            qcrb_c: r.qcrb_c,
            qfi_a: r.qfi_a,
            qfi_b: r.qfi_b,
            qfi_c: r.qfi_c,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&mapped).expect("rows serialize");
    s.push('\n');
    s
}
