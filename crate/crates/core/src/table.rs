//! Feature table CSV: header `source_id,label,<feature names...>`, one row per
//! packet. An empty label marks an unlabelled row. Values are written with
//! the shortest representation that parses back to the same `f64`, so
//! write → read → write is byte-identical.

use std::collections::HashSet;
use std::fs;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub source_id: String,
    pub label: Option<String>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Schema(format!("duplicate feature name `{n}`")));
            }
            if n == "source_id" || n == "label" {
                return Err(Error::Schema(format!("reserved feature name `{n}`")));
            }
        }
        Ok(FeatureTable {
            names,
            rows: Vec::new(),
        })
    }

    pub fn push(&mut self, row: FeatureRow) -> Result<()> {
        if row.values.len() != self.names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.names.len(),
                actual: row.values.len(),
            });
        }
        if let Some(col) = row.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: self.rows.len(),
                col,
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn is_labelled(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.label.is_some())
    }

    /// Sorted distinct labels.
    pub fn classes(&self) -> Vec<String> {
        let mut c: Vec<String> = self.rows.iter().filter_map(|r| r.label.clone()).collect();
        c.sort();
        c.dedup();
        c
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.values.clone()).collect()
    }

    /// Rows restricted to the given source ids, keeping table order.
    pub fn filter_sources(&self, ids: &HashSet<&str>) -> FeatureTable {
        FeatureTable {
            names: self.names.clone(),
            rows: self
                .rows
                .iter()
                .filter(|r| ids.contains(r.source_id.as_str()))
                .cloned()
                .collect(),
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut header = vec!["source_id".to_string(), "label".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec = vec![r.source_id.clone(), r.label.clone().unwrap_or_default()];
            rec.extend(r.values.iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.into_inner()
            .map_err(|e| Error::Format(format!("csv flush: {e}")))
    }

    pub fn from_csv(input: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = rdr.headers().map_err(csv_err)?.clone();
        if header.len() < 2 || &header[0] != "source_id" || &header[1] != "label" {
            return Err(Error::MalformedTable {
                line: 1,
                message: "header must start with source_id,label".into(),
            });
        }
        let mut table = FeatureTable::new(header.iter().skip(2).map(String::from).collect())?;
        for rec in rdr.records() {
            let rec = rec.map_err(csv_err)?;
            let line = rec.position().map_or(0, |p| p.line());
            let values = rec
                .iter()
                .skip(2)
                .enumerate()
                .map(|(i, s)| {
                    s.trim().parse::<f64>().map_err(|_| Error::MalformedTable {
                        line,
                        message: format!("column `{}`: `{s}` is not a number", table.names[i]),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            let label = (!rec[1].is_empty()).then(|| rec[1].to_string());
            table
                .push(FeatureRow {
                    source_id: rec[0].to_string(),
                    label,
                    values,
                })
                .map_err(|e| Error::MalformedTable {
                    line,
                    message: e.to_string(),
                })?;
        }
        Ok(table)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(std::io::BufReader::new(f))
    }
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::MalformedTable {
        line,
        message: match e.kind() {
            csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                format!("expected {expected_len} fields, found {len}")
            }
            _ => e.to_string(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> FeatureTable {
        let mut t = FeatureTable::new(vec!["mu".into(), "H".into()]).unwrap();
        t.push(FeatureRow {
            source_id: "a/1".into(),
            label: Some("a".into()),
            values: vec![0.1 + 0.2, 1e-300],
        })
        .unwrap();
        t.push(FeatureRow {
            source_id: "b/1".into(),
            label: None,
            values: vec![-3.0, 12345.678],
        })
        .unwrap();
        t
    }

    #[test]
    fn write_read_write_is_identical() {
        let csv = table().to_csv().unwrap();
        let back = FeatureTable::from_csv(&csv[..]).unwrap();
        assert_eq!(back, table());
        assert_eq!(back.to_csv().unwrap(), csv);
    }

    #[test]
    fn corrupt_row_reports_line() {
        let text = "source_id,label,mu\na/1,a,1.0\na/2,a,oops\n";
        match FeatureTable::from_csv(text.as_bytes()) {
            Err(Error::MalformedTable { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let text = "source_id,label,mu\na/1,a,1.0,2.0\n";
        match FeatureTable::from_csv(text.as_bytes()) {
            Err(Error::MalformedTable { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let text = "source_id,label,mu\na/1,a,NaN\n";
        assert!(FeatureTable::from_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn rejects_duplicate_names() {
        assert!(FeatureTable::new(vec!["x".into(), "x".into()]).is_err());
        assert!(FeatureTable::from_csv("id,label\n".as_bytes()).is_err());
    }
}
