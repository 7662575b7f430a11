use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FlightError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassEntry {
    pub name: String,
    pub grams: f64,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MassTable {
    pub entries: Vec<MassEntry>,
}

impl MassTable {
    /// Σ unit mass × count, in grams.
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.grams * e.count as f64).sum()
    }

    pub fn total_pieces(&self) -> u64 {
        self.entries.iter().map(|e| e.count as u64).sum()
    }
}

#[derive(Deserialize)]
struct Row {
    name: String,
    grams: String,
    count: String,
}

/// Reads `name,grams,count` CSV with a header row. Row numbers in errors
/// count data rows from 1.
pub fn parse_mass_table(reader: impl Read) -> Result<MassTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| FlightError::ParseError {
            row: 0,
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["name", "grams", "count"] {
        return Err(FlightError::ParseError {
            row: 0,
            message: format!(
                "expected header name,grams,count, got {}",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut entries = Vec::new();
    for (i, rec) in rdr.deserialize::<Row>().enumerate() {
        let row = i + 1;
        let bad = |message: String| FlightError::ParseError { row, message };
        let r = rec.map_err(|e| bad(e.to_string()))?;
        let grams: f64 = r
            .grams
            .parse()
            .map_err(|_| bad(format!("grams '{}' is not a number", r.grams)))?;
        if !grams.is_finite() || grams < 0.0 {
            return Err(bad(format!(
                "grams {grams} must be finite and non-negative"
            )));
        }
        let count: u32 = r
            .count
            .parse()
            .map_err(|_| bad(format!("count '{}' is not a positive integer", r.count)))?;
        if count < 1 {
            return Err(bad("count must be at least 1".into()));
        }
        entries.push(MassEntry {
            name: r.name,
            grams,
            count,
        });
    }
    Ok(MassTable { entries })
}

pub fn load_mass_table(path: impl AsRef<Path>) -> Result<MassTable> {
    let file = std::fs::File::open(path.as_ref())
        .map_err(|e| FlightError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_mass_table(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals() {
        let t = parse_mass_table("name,grams,count\nBattery,688,2\n".as_bytes()).unwrap();
        assert_eq!(t.total_mass(), 1376.0);
        let empty = parse_mass_table("name,grams,count\n".as_bytes()).unwrap();
        assert_eq!(empty.total_mass(), 0.0);
        assert!(empty.entries.is_empty());
    }

    #[test]
    fn quoted_names_with_commas() {
        let t = parse_mass_table("name,grams,count\n\"IMU, GPS\",180,1\n".as_bytes()).unwrap();
        assert_eq!(t.entries[0].name, "IMU, GPS");
    }

    #[test]
    fn row_errors() {
        let err = |text: &str| parse_mass_table(text.as_bytes()).unwrap_err();
        assert!(matches!(
            err("name,grams,count\nA,1,1\nB,-5,1\n"),
            FlightError::ParseError { row: 2, .. }
        ));
        assert!(matches!(
            err("name,grams,count\nA,x,1\n"),
            FlightError::ParseError { row: 1, .. }
        ));
        assert!(matches!(
            err("name,grams,count\nA,1,0\n"),
            FlightError::ParseError { row: 1, .. }
        ));
        assert!(matches!(
            err("name,grams,count\nA,1\n"),
            FlightError::ParseError { row: 1, .. }
        ));
        assert!(matches!(
            err("element,weight,pieces\n"),
            FlightError::ParseError { row: 0, .. }
        ));
    }
}
