//! JSON documents exchanged by the command-line tool. Ring elements and
//! polynomials are written in the expression grammar.

use serde::{Deserialize, Serialize};

use crate::comb::{CombMatrix, Witness};
use crate::error::{Error, Result};
use crate::matrix::Mat3;
use crate::poly::{ring_eval, Poly, VarSet};
use crate::ring::{make_ring, Ring, RingElem};
use crate::tangent::{NonvanishingReport, Point};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub ring: String,
    pub vars: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub provenance: String,
}

impl MatrixDoc {
    pub fn from_matrix(m: &Mat3, provenance: &str) -> MatrixDoc {
        MatrixDoc {
            ring: m.ring().to_string(),
            vars: m.vars().names().to_vec(),
            rows: m.rows().iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect(),
            provenance: provenance.to_string(),
        }
    }

    pub fn from_comb(m: &CombMatrix) -> MatrixDoc {
        MatrixDoc::from_matrix(m.matrix(), m.provenance().tag())
    }

    pub fn to_matrix(&self) -> Result<Mat3> {
        let ring = make_ring(&self.ring)?;
        let vars = VarSet::new(&self.vars)?;
        if self.rows.len() != 3 || self.rows.iter().any(|r| r.len() != 3) {
            return Err(Error::Invalid("matrix must have 3 rows of 3 entries".into()));
        }
        let p = |s: &String| Poly::parse(s, ring, &vars);
        let row = |i: usize| -> Result<[Poly; 3]> {
            Ok([p(&self.rows[i][0])?, p(&self.rows[i][1])?, p(&self.rows[i][2])?])
        };
        Mat3::new([row(0)?, row(1)?, row(2)?])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub ring: String,
    pub abcd: Vec<String>,
}

impl WitnessDoc {
    pub fn from_witness(w: &Witness) -> WitnessDoc {
        WitnessDoc { ring: w.ring().to_string(), abcd: w.abcd().iter().map(|x| x.to_string()).collect() }
    }

    pub fn to_witness(&self) -> Result<Witness> {
        let ring = make_ring(&self.ring)?;
        let parts: Vec<&str> = self.abcd.iter().map(String::as_str).collect();
        Witness::parse(ring, &parts)
    }
}

/// A residue vector modulo `2^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub vars: Vec<String>,
    #[serde(rename = "mod")]
    pub modulus: String,
    pub values: Vec<u64>,
}

impl SolutionDoc {
    pub fn new(vars: &VarSet, k: u32, values: Vec<u64>) -> SolutionDoc {
        SolutionDoc { vars: vars.names().to_vec(), modulus: format!("2^{k}"), values }
    }

    pub fn exponent(&self) -> Result<u32> {
        self.modulus
            .strip_prefix("2^")
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| Error::Invalid(format!("modulus `{}` is not of the form 2^k", self.modulus)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub f2_count: usize,
    pub mod4_survivors: usize,
    pub reached: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroDoc {
    pub point: Vec<String>,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentReportDoc {
    pub zeros: Vec<ZeroDoc>,
    pub checked: usize,
}

impl TangentReportDoc {
    pub fn from_report(r: &NonvanishingReport) -> TangentReportDoc {
        TangentReportDoc {
            zeros: r
                .zeros
                .iter()
                .map(|(i, p)| ZeroDoc { point: point_strings(p), index: *i })
                .collect(),
            checked: r.checked,
        }
    }
}

pub fn point_strings(p: &Point) -> Vec<String> {
    p.iter().map(RingElem::to_string).collect()
}

pub fn parse_elements(ring: Ring, src: &[String]) -> Result<Vec<RingElem>> {
    src.iter().map(|s| ring_eval(s, ring)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{build_theorem12, integral_example, CombMatrix, Provenance};

    #[test]
    fn matrix_round_trip() {
        let m = CombMatrix::new(integral_example().unwrap(), Provenance::IntegralExample).unwrap();
        let doc = MatrixDoc::from_comb(&m);
        assert_eq!(doc.provenance, "theorem13");
        let text = serde_json::to_string(&doc).unwrap();
        let back: MatrixDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), *m.matrix());

        let w = Witness::parse(Ring::gaussian(), &["1+w", "1-w", "w", "0"]).unwrap();
        let m = build_theorem12(&w.swap_ab()).unwrap();
        let doc = MatrixDoc::from_comb(&m);
        assert_eq!(doc.vars, vec!["X", "Y", "Z"]);
        assert_eq!(doc.to_matrix().unwrap(), *m.matrix());
    }

    #[test]
    fn witness_round_trip() {
        let w = Witness::parse(Ring::quadratic(-7).unwrap(), &["1/7*w", "1", "3/7*w", "2/7*w"]).unwrap();
        let doc = WitnessDoc::from_witness(&w);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(serde_json::from_str::<WitnessDoc>(&text).unwrap().to_witness().unwrap(), w);
    }

    #[test]
    fn solution_schema() {
        let v = VarSet::new(&["a1", "a2"]).unwrap();
        let doc = SolutionDoc::new(&v, 50, vec![1, 0]);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(text, r#"{"vars":["a1","a2"],"mod":"2^50","values":[1,0]}"#);
        assert_eq!(doc.exponent().unwrap(), 50);
    }
}
