//! Matrix I/O: Matrix Market array files (complex general) for load/store,
//! row-major CSV with `"re,im"` cells as a secondary export, and the small
//! JSON manifest referencing the two files of a pencil.

use crate::error::{Error, Result};
use crate::{C64, CMatrix};
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

/// Writes a dense complex matrix in Matrix Market array format
/// (`%%MatrixMarket matrix array complex general`, column-major entries).
///
/// Values use the shortest round-tripping decimal representation, so
/// write/read cycles reproduce the matrix bit for bit.
pub fn write_matrix_market(path: &Path, m: &CMatrix) -> Result<()> {
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix array complex general\n");
    out.push_str(&format!("{} {}\n", m.nrows(), m.ncols()));
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let z = m[(row, col)];
            out.push_str(&format!("{:e} {:e}\n", z.re, z.im));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a dense matrix in Matrix Market array format. Accepts the `complex`,
/// `real` and `integer` fields with `general` symmetry.
pub fn read_matrix_market(path: &Path) -> Result<CMatrix> {
    let file = fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();

    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))??;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 5 || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(Error::Parse("missing %%MatrixMarket header".into()));
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") || !tokens[2].eq_ignore_ascii_case("array") {
        return Err(Error::Parse(format!(
            "unsupported object/format: {} {} (expected matrix array)",
            tokens[1], tokens[2]
        )));
    }
    let field = tokens[3].to_ascii_lowercase();
    let complex = match field.as_str() {
        "complex" => true,
        "real" | "integer" => false,
        other => return Err(Error::Parse(format!("unsupported field: {other}"))),
    };
    if !tokens[4].eq_ignore_ascii_case("general") {
        return Err(Error::Parse(format!("unsupported symmetry: {}", tokens[4])));
    }

    let mut dims: Option<(usize, usize)> = None;
    let mut data: Vec<C64> = Vec::new();
    for line in lines {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if dims.is_none() {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("bad size line: {trimmed}")));
            }
            let rows: usize =
                parts[0].parse().map_err(|_| Error::Parse(format!("bad row count: {}", parts[0])))?;
            let cols: usize =
                parts[1].parse().map_err(|_| Error::Parse(format!("bad col count: {}", parts[1])))?;
            dims = Some((rows, cols));
            data.reserve(rows * cols);
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        let parse = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse(format!("bad number: {s}")))
        };
        if complex {
            if parts.len() != 2 {
                return Err(Error::Parse(format!("expected 're im' pair, got: {trimmed}")));
            }
            data.push(C64::new(parse(parts[0])?, parse(parts[1])?));
        } else {
            if parts.len() != 1 {
                return Err(Error::Parse(format!("expected one value, got: {trimmed}")));
            }
            data.push(C64::new(parse(parts[0])?, 0.0));
        }
    }
    let (rows, cols) = dims.ok_or_else(|| Error::Parse("missing size line".into()))?;
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            rows * cols,
            data.len()
        )));
    }
    Ok(CMatrix::from_vec(rows, cols, data))
}

/// Secondary export: row-major CSV where each cell is the quoted pair
/// `"re,im"`.
pub fn write_csv(path: &Path, m: &CMatrix) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    for row in 0..m.nrows() {
        for col in 0..m.ncols() {
            if col > 0 {
                write!(w, ",")?;
            }
            let z = m[(row, col)];
            write!(w, "\"{:e},{:e}\"", z.re, z.im)?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Manifest referencing the two Matrix Market files of a pencil. Relative
/// paths are resolved against the manifest's directory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilManifest {
    pub a_path: PathBuf,
    pub b_path: PathBuf,
}

impl PencilManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let manifest: PencilManifest =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
        Ok(manifest)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Parse(format!("manifest: {e}")))?;
        fs::write(path, text)?;
        Ok(())
    }

    /// Loads both pencil factors, resolving relative paths against the
    /// manifest location.
    pub fn read_matrices(&self, manifest_path: &Path) -> Result<(CMatrix, CMatrix)> {
        let base = manifest_path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &PathBuf| if p.is_absolute() { p.clone() } else { base.join(p) };
        let a = read_matrix_market(&resolve(&self.a_path))?;
        let b = read_matrix_market(&resolve(&self.b_path))?;
        Ok((a, b))
    }
}
