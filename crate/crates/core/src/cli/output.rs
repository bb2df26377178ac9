use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use super::config::Format;
use crate::Result;

/// Writes `rows` as `<stem>.csv` or as `<stem>.json` with a provenance block
/// and any `extra` top-level fields.
pub fn write_table<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: Format,
    rows: &[T],
    provenance: &Value,
    extra: Value,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    match format {
        Format::Csv => {
            let path = dir.join(format!("{stem}.csv"));
            let mut w = csv::Writer::from_path(&path).map_err(csv_error)?;
            for r in rows {
                w.serialize(r).map_err(csv_error)?;
            }
            w.flush()?;
            // Provenance and summary fields of a CSV table live next to it.
            let mut meta = json!({ "provenance": provenance });
            merge(&mut meta, extra);
            write_json(&dir.join(format!("{stem}.meta.json")), &meta)?;
            Ok(path)
        }
        Format::Json => {
            let mut doc = json!({ "provenance": provenance, "rows": rows });
            merge(&mut doc, extra);
            let path = dir.join(format!("{stem}.json"));
            write_json(&path, &doc)?;
            Ok(path)
        }
    }
}

fn merge(doc: &mut Value, extra: Value) {
    if let (Value::Object(d), Value::Object(e)) = (doc, extra) {
        d.extend(e);
    }
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn csv_error(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => crate::Error::Config(format!("csv output: {other:?}")),
    }
}
