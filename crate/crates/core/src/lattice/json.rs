use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{LatticeBasis, LatticeError};
use crate::exactmat::RationalMatrix;
use crate::numeric::parse_rational;

fn column_major_default() -> bool {
    true
}

/// On-disk form of a lattice basis. Entries are decimal or `p/q` strings.
/// With `column_major` (the default) each inner array is one basis vector;
/// otherwise each inner array is a row of the basis matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub n: usize,
    pub basis: Vec<Vec<String>>,
    #[serde(default = "column_major_default")]
    pub column_major: bool,
}

impl LatticeJson {
    pub fn to_lattice(&self) -> Result<LatticeBasis, LatticeError> {
        let n = self.n;
        if self.basis.len() != n || self.basis.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Invalid(format!("basis must be {n} arrays of {n} entries")));
        }
        let mut entries = vec![Vec::with_capacity(n); n];
        for (i, outer) in self.basis.iter().enumerate() {
            for s in outer {
                let q = parse_rational(s).map_err(LatticeError::Invalid)?;
                entries[i].push(q);
            }
        }
        let m = if self.column_major {
            RationalMatrix::from_columns(n, &entries)?
        } else {
            RationalMatrix::from_entries(n, n, entries.into_iter().flatten().collect())?
        };
        LatticeBasis::new(m)
    }

    pub fn from_lattice(l: &LatticeBasis) -> Self {
        let cols = l.basis().columns();
        LatticeJson {
            n: l.dim(),
            basis: cols.iter().map(|c| c.iter().map(BigRational::to_string).collect()).collect(),
            column_major: true,
        }
    }
}

impl LatticeBasis {
    pub fn from_json_str(s: &str) -> Result<Self, LatticeError> {
        let j: LatticeJson = serde_json::from_str(s).map_err(|e| LatticeError::Invalid(e.to_string()))?;
        j.to_lattice()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&LatticeJson::from_lattice(self)).expect("plain data serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn column_and_row_major() {
        let cols = LatticeBasis::from_json_str(r#"{"n": 2, "basis": [["1", "0"], ["1/2", "3"]]}"#).unwrap();
        assert_eq!(cols.basis().column(1), vec![rat(1, 2), int(3)]);
        let rows =
            LatticeBasis::from_json_str(r#"{"n": 2, "basis": [["1", "0.5"], ["0", "3"]], "column_major": false}"#).unwrap();
        assert_eq!(rows, cols);
    }

    #[test]
    fn round_trip() {
        let l = LatticeBasis::from_json_str(r#"{"n": 2, "basis": [["2", "1"], ["-1/3", "4"]]}"#).unwrap();
        let back = LatticeBasis::from_json_str(&l.to_json_string()).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(LatticeBasis::from_json_str(r#"{"n": 2, "basis": [["1", "0"]]}"#).is_err());
        assert!(LatticeBasis::from_json_str(r#"{"n": 2, "basis": [["1", "2"], ["2", "4"]]}"#).is_err());
        assert!(LatticeBasis::from_json_str(r#"{"n": 1, "basis": [["x"]]}"#).is_err());
    }
}
