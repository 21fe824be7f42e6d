//! CSV serialization of spectra and trace/determinant signatures.

use std::io::{Read, Write};

use serde::Deserialize;

use crate::dn_map::{Branch, SpectrumEntry, SteklovSpectrum};
use crate::error::Result;
use crate::inverse::TraceDetSignature;

/// 17 significant digits, enough to round-trip any `f64`.
fn exact(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_spectrum_csv<W: Write>(out: W, spectrum: &SteklovSpectrum) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["value", "branch", "m", "multiplicity"])?;
    for e in &spectrum.entries {
        w.write_record([
            exact(e.value),
            e.branch.symbol().to_string(),
            e.m.to_string(),
            e.multiplicity.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct SpectrumRow {
    value: f64,
    branch: Branch,
    m: usize,
    multiplicity: usize,
}

/// Reads a spectrum CSV; `n` and `lambda` are not stored in the file.
pub fn read_spectrum_csv<R: Read>(input: R, n: usize, lambda: f64) -> Result<SteklovSpectrum> {
    let mut r = csv::Reader::from_reader(input);
    let mut entries = Vec::new();
    for row in r.deserialize() {
        let row: SpectrumRow = row?;
        entries.push(SpectrumEntry {
            value: row.value,
            branch: row.branch,
            m: row.m,
            multiplicity: row.multiplicity,
        });
    }
    Ok(SteklovSpectrum::from_entries(n, lambda, entries))
}

pub fn write_signature_csv<W: Write>(out: W, signature: &TraceDetSignature) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "trace", "det"])?;
    for e in &signature.entries {
        w.write_record([e.m.to_string(), exact(e.trace), exact(e.det)])?;
    }
    w.flush()?;
    Ok(())
}
