//! Whitespace-separated profile tables with columns `r A V Emag [Psi]`.

use std::fs;
use std::path::Path;

use electrovac::{Dimension, RadialProfile, SphericalStaticData};

use crate::CliError;

/// Samples dropped at each end before verification: spline derivatives
/// degrade next to the natural end conditions.
pub const EDGE_TRIM: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub r: Vec<f64>,
    pub a: Vec<f64>,
    pub v: Vec<f64>,
    pub emag: Vec<f64>,
    pub psi: Option<Vec<f64>>,
}

impl ProfileTable {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| tok.parse::<f64>().map_err(|e| format!("line {}: {tok:?}: {e}", lineno + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != 4 && row.len() != 5 {
                return Err(format!(
                    "line {}: expected 4 or 5 columns (r A V Emag [Psi]), got {}",
                    lineno + 1,
                    row.len()
                ));
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(format!(
                        "line {}: column count changed from {} to {}",
                        lineno + 1,
                        first.len(),
                        row.len()
                    ));
                }
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(format!("line {}: non-finite value", lineno + 1));
            }
            rows.push(row);
        }
        let min_rows = 2 * EDGE_TRIM + 2;
        if rows.len() < min_rows {
            return Err(format!("profile table needs at least {min_rows} rows, got {}", rows.len()));
        }
        let col = |i: usize| rows.iter().map(|row| row[i]).collect::<Vec<f64>>();
        let r = col(0);
        if r[0] <= 0.0 || r.windows(2).any(|w| w[0] >= w[1]) {
            return Err("radii must be positive and strictly increasing".into());
        }
        let psi = (rows[0].len() == 5).then(|| col(4));
        Ok(Self { r, a: col(1), v: col(2), emag: col(3), psi })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    /// Spline-interpolated data on `(r_first, r_last)`.
    pub fn to_data(&self, n: Dimension, lambda: f64) -> electrovac::Result<SphericalStaticData> {
        let data = SphericalStaticData::new(
            n,
            lambda,
            RadialProfile::sampled(&self.r, &self.a)?,
            RadialProfile::sampled(&self.r, &self.v)?,
            RadialProfile::sampled(&self.r, &self.emag)?,
        )?;
        Ok(match &self.psi {
            Some(psi) => data.with_psi(RadialProfile::sampled(&self.r, psi)?),
            None => data,
        })
    }

    /// Sample radii with [`EDGE_TRIM`] rows removed at each end.
    pub fn interior_radii(&self) -> Vec<f64> {
        self.r[EDGE_TRIM..self.r.len() - EDGE_TRIM].to_vec()
    }

    /// Serialize in the same format, one row per sample.
    #[cfg(test)]
    pub fn to_text(&self) -> String {
        let mut out = String::from(if self.psi.is_some() { "# r A V Emag Psi\n" } else { "# r A V Emag\n" });
        for i in 0..self.r.len() {
            out.push_str(&format!("{:e} {:e} {:e} {:e}", self.r[i], self.a[i], self.v[i], self.emag[i]));
            if let Some(psi) = &self.psi {
                out.push_str(&format!(" {:e}", psi[i]));
            }
            out.push('\n');
        }
        out
    }
}
