//! Matrix dumps and CSV summaries.

use std::io::Write;

use ringspectra_core::{BitMatrix, FiniteRing, ProductMatrix};
use serde::{Deserialize, Serialize};

use crate::report::{VerifyReport, SCHEMA};
use crate::Result;

/// `A_u(R)` under its ordering; row `i` is element `labels[i]`, hex MSB-first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExport {
    pub schema: u32,
    pub ring_spec: String,
    pub u_label: String,
    pub ordering: String,
    pub n: usize,
    pub labels: Vec<String>,
    pub rows_hex: Vec<String>,
}

impl MatrixExport {
    pub fn from_matrix(ring: &FiniteRing, ring_spec: &str, a: &ProductMatrix) -> Self {
        MatrixExport {
            schema: SCHEMA,
            ring_spec: ring_spec.to_string(),
            u_label: ring.label(a.u()).to_string(),
            ordering: a.ordering().tag().to_string(),
            n: a.size(),
            labels: a.labels(ring).into_iter().map(String::from).collect(),
            rows_hex: a.bits().to_hex_rows(),
        }
    }

    pub fn to_bits(&self) -> Result<BitMatrix> {
        Ok(BitMatrix::from_hex_rows(self.n, &self.rows_hex)?)
    }

    /// Header lines, then one `0`/`1` row per element.
    pub fn to_text(&self) -> Result<String> {
        let mut s = format!("# {} u={} ordering={} n={}\n# rows: {}\n", self.ring_spec, self.u_label, self.ordering, self.n, self.labels.join(" "));
        s.push_str(&self.to_bits()?.to_text_grid());
        Ok(s)
    }

    /// Label header, then one labelled 0/1 row per element.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let bits = self.to_bits()?;
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![String::new()];
        header.extend(self.labels.iter().cloned());
        out.write_record(&header)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut row = vec![label.clone()];
            row.extend((0..self.n).map(|j| if bits.get(i, j) { "1" } else { "0" }.to_string()));
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub const CSV_COLUMNS: [&str; 6] = ["ring", "u", "case", "match", "degree", "nonzero_rank"];

pub fn write_reports_csv<'a, W: Write>(w: W, reports: impl IntoIterator<Item = &'a VerifyReport>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_COLUMNS)?;
    for r in reports {
        let matched = match r.matched {
            Some(true) => "true",
            Some(false) => "false",
            None => "n/a",
        };
        out.write_record([&r.ring_spec, &r.u_label, &r.case, matched, &r.degree.to_string(), &r.nonzero_rank.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ringspectra_core::{parse_ring_spec, ElementId};

    #[test]
    fn export_round_trip() {
        let r = parse_ring_spec("zn:9").unwrap().build(4096).unwrap();
        let a = ProductMatrix::natural(&r, ElementId(0)).unwrap();
        let e = MatrixExport::from_matrix(&r, "zn:9", &a);
        let json = serde_json::to_string(&e).unwrap();
        let back: MatrixExport = serde_json::from_str(&json).unwrap();
        assert_eq!(&back.to_bits().unwrap(), a.bits());
        assert!(e.to_text().unwrap().lines().nth(2).unwrap().starts_with('1'));
        let mut buf = Vec::new();
        e.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 10);
    }
}
