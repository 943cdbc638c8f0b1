use std::io::{self, Write};

use serde_json::Value;

pub enum Emit {
    Json(Value),
    /// JSON document with a CSV rendering.
    Table {
        json: Value,
        header: Vec<&'static str>,
        rows: Vec<Vec<String>>,
    },
    Raw(String),
}

impl Emit {
    pub fn json(v: Value) -> Self {
        Emit::Json(v)
    }

    pub fn table(json: Value, header: &[&'static str], rows: Vec<Vec<String>>) -> Self {
        Emit::Table {
            json,
            header: header.to_vec(),
            rows,
        }
    }
}

pub fn emit(out: Emit, csv: bool) -> io::Result<()> {
    let stdout = io::stdout();
    let mut w = stdout.lock();
    match out {
        Emit::Raw(text) => w.write_all(text.as_bytes()),
        Emit::Table { header, rows, .. } if csv => {
            writeln!(w, "{}", header.join(","))?;
            for row in rows {
                writeln!(w, "{}", row.join(","))?;
            }
            Ok(())
        }
        Emit::Json(json) | Emit::Table { json, .. } => {
            serde_json::to_writer_pretty(&mut w, &json)?;
            writeln!(w)
        }
    }
}
