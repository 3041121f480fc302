//! Output files. Every text artifact starts with a metadata header carrying
//! the generator version and the full run configuration.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const GENERATOR: &str = concat!("simon32 ", env!("CARGO_PKG_VERSION"));

/// Shortest round-trip form, in exponent notation when very small or large.
pub fn fmt_float(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Hex(u32),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Hex(v) => format!("{v:#06x}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(v.to_string()),
            Cell::Hex(v) => json!(format!("{v:#06x}")),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Free-form remarks carried into the header.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

/// Writes artifacts below one directory for one configuration.
pub struct Emitter<'a> {
    dir: PathBuf,
    config: &'a RunConfig,
}

impl<'a> Emitter<'a> {
    pub fn new(dir: impl Into<PathBuf>, config: &'a RunConfig) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Emitter { dir, config })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn subdir(&self, name: &str) -> Result<Emitter<'a>, CliError> {
        Emitter::new(self.dir.join(name), self.config)
    }

    fn header_lines(&self, notes: &[String]) -> Vec<String> {
        let mut lines = vec![
            GENERATOR.to_owned(),
            format!("config {}", self.config.to_json()),
        ];
        lines.extend(notes.iter().map(|n| format!("note {n}")));
        lines
    }

    fn write(&self, name: &str, body: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Writes `stem.csv` or `stem.json` depending on the configured format.
    pub fn table(&self, stem: &str, table: &Table) -> Result<PathBuf, CliError> {
        let format = self.config.format;
        let body = match format {
            Format::Csv => self.render_csv(table)?,
            Format::Json => self.render_json(table),
        };
        self.write(&format!("{stem}.{}", format.extension()), &body)
    }

    fn render_csv(&self, table: &Table) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        for line in self.header_lines(&table.notes) {
            out.extend_from_slice(format!("# {line}\n").as_bytes());
        }
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| CliError::io("<csv>", e.into());
        w.write_record(&table.columns).map_err(csv_err)?;
        for row in &table.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        w.into_inner()
            .map_err(|e| CliError::io("<csv>", e.into_error()))
    }

    fn render_json(&self, table: &Table) -> Vec<u8> {
        let rows: Vec<Value> = table
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| ((*c).to_owned(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({
            "generator": GENERATOR,
            "config": self.config.to_json(),
            "notes": table.notes,
            "columns": table.columns,
            "rows": rows,
        });
        let mut body = serde_json::to_vec_pretty(&doc).expect("json serializes");
        body.push(b'\n');
        body
    }

    /// Plain text with `#`-prefixed header lines.
    pub fn text(&self, name: &str, body: &str) -> Result<PathBuf, CliError> {
        let mut out = String::new();
        for line in self.header_lines(&[]) {
            out.push_str(&format!("# {line}\n"));
        }
        out.push_str(body);
        self.write(name, out.as_bytes())
    }

    /// An SVG document with the header as a leading XML comment.
    pub fn svg(&self, name: &str, svg: &str) -> Result<PathBuf, CliError> {
        let header = self.header_lines(&[]).join(" | ").replace("--", "- -");
        let body = format!("<!-- {header} -->\n{svg}");
        self.write(name, body.as_bytes())
    }

    /// The run configuration as standalone JSON, for binary artifacts that
    /// carry no header of their own.
    pub fn run_config(&self) -> Result<PathBuf, CliError> {
        let doc = json!({ "generator": GENERATOR, "config": self.config.to_json() });
        let mut body = serde_json::to_vec_pretty(&doc).expect("json serializes");
        body.push(b'\n');
        self.write("run_config.json", &body)
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["a", "w", "p", "label"]);
        t.push(vec![
            Cell::Hex(0x8000),
            17u32.into(),
            0.25.into(),
            "x,y".into(),
        ]);
        t.push(vec![
            Cell::Hex(0),
            Cell::Int(-3),
            Cell::Float(f64::NAN),
            Cell::Empty,
        ]);
        t.note("extraction threshold 0");
        t
    }

    #[test]
    fn csv_has_header_and_quotes() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig::default();
        let e = Emitter::new(dir.path(), &config).unwrap();
        let p = e.table("t", &sample()).unwrap();
        let text = fs::read_to_string(p).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], format!("# {GENERATOR}"));
        assert!(lines[1].starts_with("# config {"));
        assert_eq!(lines[2], "# note extraction threshold 0");
        assert_eq!(
            &lines[3..],
            ["a,w,p,label", "0x8000,17,0.25,\"x,y\"", "0x0000,-3,NaN,"]
        );
    }

    #[test]
    fn float_forms() {
        assert_eq!(fmt_float(0.25), "0.25");
        assert_eq!(fmt_float(6.125108979170388e-181), "6.125108979170388e-181");
        assert_eq!(fmt_float(-28.5), "-28.5");
        assert_eq!(fmt_float(0.0), "0");
    }

    #[test]
    fn json_rows_are_objects() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            format: Format::Json,
            ..RunConfig::default()
        };
        let e = Emitter::new(dir.path(), &config).unwrap();
        let p = e.table("t", &sample()).unwrap();
        assert!(p.ends_with("t.json"));
        let v: Value = serde_json::from_slice(&fs::read(p).unwrap()).unwrap();
        assert_eq!(v["generator"], GENERATOR);
        assert_eq!(v["rows"][0]["a"], "0x8000");
        assert_eq!(v["rows"][0]["w"], 17);
        assert_eq!(v["rows"][1]["p"], "NaN");
        assert_eq!(v["rows"][1]["label"], Value::Null);
    }

    #[test]
    fn svg_starts_with_comment() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig::default();
        let e = Emitter::new(dir.path(), &config).unwrap();
        let text = fs::read_to_string(e.svg("x.svg", "<svg/>").unwrap()).unwrap();
        assert!(text.starts_with("<!-- simon32 "));
        assert!(text.ends_with("-->\n<svg/>"));
    }
}
