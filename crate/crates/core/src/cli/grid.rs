use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column order of the CSV export.
pub const COLUMNS: [&str; 20] = [
    "x1", "x2", "x3", "t", "u1", "u2", "u3", "b11", "b12", "b13", "b21", "b22", "b23", "b31", "b32", "b33", "v1",
    "v2", "v3", "mask",
];

/// One sampled event. `beta` is row-major, β_ik = ∂_k u_i. Masked rows mark
/// events on the source and carry zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub x: [f64; 3],
    pub t: f64,
    pub u: [f64; 3],
    pub beta: [[f64; 3]; 3],
    pub v: [f64; 3],
    pub mask: bool,
}

impl GridRow {
    pub fn masked(x: [f64; 3], t: f64) -> Self {
        Self { x, t, u: [0.0; 3], beta: [[0.0; 3]; 3], v: [0.0; 3], mask: true }
    }

    fn numbers(&self) -> impl Iterator<Item = f64> + '_ {
        self.x.iter().chain(std::slice::from_ref(&self.t)).chain(&self.u).chain(self.beta.iter().flatten()).chain(&self.v).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub version: String,
    pub config_hash: String,
    pub rows: Vec<GridRow>,
}

impl FieldGrid {
    pub fn header(&self) -> String {
        format!("# elastowave {} config_hash={}", self.version, self.config_hash)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 + self.rows.len() * 20 * 24);
        out.push_str(&self.header());
        out.push('\n');
        out.push_str(&COLUMNS.join(","));
        out.push('\n');
        for row in &self.rows {
            for x in row.numbers() {
                let _ = write!(out, "{x:.16e},");
            }
            out.push_str(if row.mask { "1\n" } else { "0\n" });
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |n: usize, msg: &str| Error::Io(format!("csv line {n}: {msg}"));
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| bad(1, "empty file"))?;
        let rest = first.strip_prefix("# elastowave ").ok_or_else(|| bad(1, "missing provenance header"))?;
        let (version, hash) = rest.split_once(" config_hash=").ok_or_else(|| bad(1, "malformed header"))?;
        let (_, cols) = lines.next().ok_or_else(|| bad(2, "missing column line"))?;
        if cols != COLUMNS.join(",") {
            return Err(bad(2, "unexpected columns"));
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != COLUMNS.len() {
                return Err(bad(i + 1, "wrong number of fields"));
            }
            let mut v = [0.0; 19];
            for (k, f) in fields[..19].iter().enumerate() {
                v[k] = f.parse().map_err(|_| bad(i + 1, "unparsable number"))?;
            }
            let mask = match fields[19] {
                "0" => false,
                "1" => true,
                _ => return Err(bad(i + 1, "mask must be 0 or 1")),
            };
            rows.push(GridRow {
                x: [v[0], v[1], v[2]],
                t: v[3],
                u: [v[4], v[5], v[6]],
                beta: [[v[7], v[8], v[9]], [v[10], v[11], v[12]], [v[13], v[14], v[15]]],
                v: [v[16], v[17], v[18]],
                mask,
            });
        }
        Ok(Self { version: version.to_string(), config_hash: hash.to_string(), rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid values are finite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let row = GridRow {
            x: [0.1, -2.0, 1.0 / 3.0],
            t: 1e-300,
            u: [std::f64::consts::PI, -0.0, 5e-324],
            beta: [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 1.0 / 7.0]],
            v: [-1e300, 0.5, 2.0f64.sqrt()],
            mask: false,
        };
        let grid = FieldGrid {
            version: "0.1.0".into(),
            config_hash: "ab".repeat(32),
            rows: vec![row, GridRow::masked([0.0, 0.0, 0.0], 1.0)],
        };
        let text = grid.to_csv();
        assert!(text.lines().nth(1).unwrap().starts_with("x1,x2,x3,t,u1,u2,u3,b11"));
        assert_eq!(FieldGrid::from_csv(&text).unwrap(), grid);
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(FieldGrid::from_csv("").is_err());
        assert!(FieldGrid::from_csv("# elastowave 0.1.0 config_hash=00\nx1,x2\n").is_err());
    }
}
