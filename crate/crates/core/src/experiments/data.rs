use std::path::Path;

use sha2::{Digest, Sha256};

use crate::begled::BivariatePoint;
use crate::error::{Error, Result};

const UEFA_CSV: &str = include_str!("../../data/uefa.csv");
const UEFA_SHA256: &str = "37ea27c13435a921c7b42826ea4f55ba9e83b64acc2623950323bbfe45346431";

/// A named bivariate sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub pairs: Vec<BivariatePoint>,
    pub source: String,
}

impl Dataset {
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.pairs.iter().map(|p| if k == 1 { p.x1 } else { p.x2 }).collect()
    }
}

/// Parses `x1,x2` CSV text. Line numbers in errors count the header as line 1.
pub fn parse_csv(text: &str, name: &str, source: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
        .clone();
    if header.len() != 2 || &header[0] != "x1" || &header[1] != "x2" {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header 'x1,x2', got '{}'", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let field = |i: usize| -> Result<f64> {
            let v: f64 = record[i].parse().map_err(|_| Error::Parse {
                line,
                message: format!("'{}' is not a number", &record[i]),
            })?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Parse {
                    line,
                    message: format!("value {v} must be finite and >= 0"),
                });
            }
            Ok(v)
        };
        pairs.push(BivariatePoint::new(field(0)?, field(1)?)?);
    }
    if pairs.is_empty() {
        return Err(Error::Data("no data rows".into()));
    }
    Ok(Dataset {
        name: name.to_string(),
        pairs,
        source: source.to_string(),
    })
}

pub fn load_csv(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "data".into());
    parse_csv(&text, &name, &path.display().to_string())
}

/// The embedded UEFA Champions League goal-time pairs (37 matches).
pub fn uefa() -> Result<Dataset> {
    let digest = format!("{:x}", Sha256::digest(UEFA_CSV.as_bytes()));
    if digest != UEFA_SHA256 {
        return Err(Error::Data(format!("embedded UEFA data checksum mismatch: {digest}")));
    }
    parse_csv(UEFA_CSV, "uefa", "embedded")
}

/// `uefa` selects the embedded data; anything else is a CSV path.
pub fn resolve(spec: &str) -> Result<Dataset> {
    if spec.eq_ignore_ascii_case("uefa") {
        uefa()
    } else {
        load_csv(Path::new(spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_uefa() {
        let d = uefa().unwrap();
        assert_eq!(d.pairs.len(), 37);
        assert!(d.pairs.contains(&BivariatePoint::new(26.0, 20.0).unwrap()));
        assert!(d.pairs.contains(&BivariatePoint::new(2.0, 2.0).unwrap()));
        assert_eq!(d.column(1).iter().sum::<f64>(), 1513.0);
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert!(matches!(parse_csv("x1,x2\n", "t", "t"), Err(Error::Data(m)) if m == "no data rows"));
        match parse_csv("x1,x2\n1,2\na,b\n", "t", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_csv("a,b\n1,2\n", "t", "t"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_csv("x1,x2\n1,-2\n", "t", "t"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_csv("x1,x2\r\n1.5,2\r\n", "t", "t").is_ok());
    }

    #[test]
    fn missing_file_is_io() {
        assert!(matches!(load_csv(Path::new("/nonexistent/file.csv")), Err(Error::Io(_))));
    }
}
