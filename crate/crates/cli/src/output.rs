//! Table rendering: JSON arrays or RFC 4180 CSV, to stdout or a file.

use crate::Format;
use std::path::Path;
use tylens_core::distinguish::DistinguishReport;
use tylens_core::gauss::AlgebraicUnit;
use tylens_core::tycat::LensInvariant;

pub struct LensRow {
    pub k: u64,
    pub value: LensInvariant,
}

impl LensRow {
    pub fn new(k: u64, value: &LensInvariant) -> LensRow {
        LensRow { k, value: *value }
    }
}

pub struct ZetaRow {
    pub k: u64,
    pub brute: Option<String>,
    pub prin: Option<String>,
    pub closed: Option<String>,
    pub numeric: Option<(f64, f64)>,
    pub mismatch: bool,
}

impl ZetaRow {
    pub fn new(k: u64) -> ZetaRow {
        ZetaRow {
            k,
            brute: None,
            prin: None,
            closed: None,
            numeric: None,
            mismatch: false,
        }
    }

    pub fn set(&mut self, method: &str, v: &AlgebraicUnit) {
        let label = v.label();
        let z = v.to_complex();
        self.numeric.get_or_insert((z.re, z.im));
        match method {
            "brute" => self.brute = Some(label),
            "prin" => self.prin = Some(label),
            _ => self.closed = Some(label),
        }
    }

    pub fn mark_mismatch(&mut self) {
        self.mismatch = true;
    }
}

fn write_out(text: &str, path: Option<&Path>) -> Result<(), String> {
    match path {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| format!("{}: {e}", p.display())),
    }
}

/// RFC 4180 quoting: fields with commas, quotes or newlines are wrapped in
/// double quotes with inner quotes doubled.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn emit_lens(rows: &[LensRow], format: Format, path: Option<&Path>) -> Result<(), String> {
    match format {
        Format::Json => {
            let arr: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let z = r.value.to_complex();
                    let mut obj = serde_json::json!({
                        "k": r.k,
                        "numeric": [z.re, z.im],
                        "symbolic": r.value.to_string(),
                    });
                    obj.as_object_mut()
                        .unwrap()
                        .insert("value".into(), r.value.to_json());
                    obj
                })
                .collect();
            write_out(&serde_json::Value::Array(arr).to_string(), path)
        }
        Format::Csv => {
            let mut text = String::from("k,re_rat,re_coef,im_rat,im_coef,m,numeric_re,numeric_im");
            for r in rows {
                let z = r.value.to_complex();
                text.push('\n');
                text.push_str(&csv_line(&[
                    r.k.to_string(),
                    r.value.re_rat.to_string(),
                    r.value.re_coef.to_string(),
                    r.value.im_rat.to_string(),
                    r.value.im_coef.to_string(),
                    r.value.m.to_string(),
                    format!("{}", z.re),
                    format!("{}", z.im),
                ]));
            }
            write_out(&text, path)
        }
    }
}

pub fn emit_zeta(rows: &[ZetaRow], format: Format, path: Option<&Path>) -> Result<(), String> {
    match format {
        Format::Json => {
            let arr: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("k".into(), serde_json::json!(r.k));
                    if let Some(v) = &r.brute {
                        obj.insert("brute".into(), serde_json::json!(v));
                    }
                    if let Some(v) = &r.prin {
                        obj.insert("prin".into(), serde_json::json!(v));
                    }
                    if let Some(v) = &r.closed {
                        obj.insert("closed".into(), serde_json::json!(v));
                    }
                    if let Some((re, im)) = r.numeric {
                        obj.insert("numeric".into(), serde_json::json!([re, im]));
                    }
                    if r.mismatch {
                        obj.insert("mismatch".into(), serde_json::json!(true));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            write_out(&serde_json::Value::Array(arr).to_string(), path)
        }
        Format::Csv => {
            let mut text = String::from("k,brute,prin,closed,numeric_re,numeric_im,mismatch");
            for r in rows {
                let (re, im) = r.numeric.unwrap_or((f64::NAN, f64::NAN));
                text.push('\n');
                text.push_str(&csv_line(&[
                    r.k.to_string(),
                    r.brute.clone().unwrap_or_default(),
                    r.prin.clone().unwrap_or_default(),
                    r.closed.clone().unwrap_or_default(),
                    format!("{re}"),
                    format!("{im}"),
                    r.mismatch.to_string(),
                ]));
            }
            write_out(&text, path)
        }
    }
}

pub fn emit_distinguish(
    report: &DistinguishReport,
    format: Format,
    path: Option<&Path>,
) -> Result<(), String> {
    match format {
        Format::Json => write_out(&report.to_json().to_string(), path),
        Format::Csv => {
            let mut text = String::from("cat1,cat2,verdict,k,witness");
            for row in &report.rows {
                use tylens_core::distinguish::Verdict;
                let (verdict, k) = match row.verdict {
                    Verdict::Equivalent => ("equivalent".to_string(), String::new()),
                    Verdict::SeparatedAt(k) => ("separated".to_string(), k.to_string()),
                    Verdict::Unseparated => ("UNSEPARATED".to_string(), String::new()),
                };
                text.push('\n');
                text.push_str(&csv_line(&[
                    row.cat1.clone(),
                    row.cat2.clone(),
                    verdict,
                    k,
                    row.witness.clone().unwrap_or_default(),
                ]));
            }
            write_out(&text, path)
        }
    }
}
