use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Poly, VarSet};
use crate::ring::Ring;

/// 3x3 matrix of polynomials sharing one ring and variable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3 {
    rows: [[Poly; 3]; 3],
}

impl Mat3 {
    pub fn new(rows: [[Poly; 3]; 3]) -> Result<Mat3> {
        let r = rows[0][0].ring();
        let v = rows[0][0].vars().clone();
        for p in rows.iter().flatten() {
            if p.ring() != r {
                return Err(Error::RingMismatch(r.to_string(), p.ring().to_string()));
            }
            if *p.vars() != v {
                return Err(Error::VarSetMismatch);
            }
        }
        Ok(Mat3 { rows })
    }

    /// Parse nine entries in the expression grammar.
    pub fn parse(rows: &[[&str; 3]; 3], ring: Ring, vars: &VarSet) -> Result<Mat3> {
        let p = |s: &str| Poly::parse(s, ring, vars);
        Mat3::new([
            [p(rows[0][0])?, p(rows[0][1])?, p(rows[0][2])?],
            [p(rows[1][0])?, p(rows[1][1])?, p(rows[1][2])?],
            [p(rows[2][0])?, p(rows[2][1])?, p(rows[2][2])?],
        ])
    }

    pub fn identity(vars: &VarSet, ring: Ring) -> Mat3 {
        let e = |i: usize, j: usize| Poly::int(vars, ring, (i == j) as i64);
        Mat3 { rows: [[e(0, 0), e(0, 1), e(0, 2)], [e(1, 0), e(1, 1), e(1, 2)], [e(2, 0), e(2, 1), e(2, 2)]] }
    }

    pub fn ring(&self) -> Ring {
        self.rows[0][0].ring()
    }

    pub fn vars(&self) -> &VarSet {
        self.rows[0][0].vars()
    }

    pub fn rows(&self) -> &[[Poly; 3]; 3] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Poly; 3] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn set_row(&mut self, i: usize, row: [Poly; 3]) -> Result<()> {
        for p in &row {
            if p.ring() != self.ring() {
                return Err(Error::RingMismatch(self.ring().to_string(), p.ring().to_string()));
            }
            if p.vars() != self.vars() {
                return Err(Error::VarSetMismatch);
            }
        }
        self.rows[i] = row;
        Ok(())
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det3(&self) -> Poly {
        let m = &self.rows;
        let minor = |a: usize, b: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
        let t0 = &m[0][0] * &minor(1, 2);
        let t1 = &m[0][1] * &minor(0, 2);
        let t2 = &m[0][2] * &minor(0, 1);
        &(&t0 - &t1) + &t2
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<Mat3> {
        let m = &self.rows;
        Mat3::new([
            [f(&m[0][0])?, f(&m[0][1])?, f(&m[0][2])?],
            [f(&m[1][0])?, f(&m[1][1])?, f(&m[1][2])?],
            [f(&m[2][0])?, f(&m[2][1])?, f(&m[2][2])?],
        ])
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_examples() {
        let vars = VarSet::new(&["X", "Y", "Z", "a", "b"]).unwrap();
        let r = Ring::Rationals;
        assert_eq!(Mat3::identity(&vars, r).det3(), Poly::one(&vars, r));
        let eq = Mat3::parse(&[["X", "Y", "Z"], ["a", "b*X", "1"], ["a", "b*X", "1"]], r, &vars).unwrap();
        assert!(eq.det3().is_zero());
        let stufe2 = Mat3::parse(&[["X", "Y", "Z"], ["1", "a", "b"], ["0", "b*X+Z", "-a*X-Y"]], r, &vars).unwrap();
        let d = stufe2.det3();
        let expect = Poly::parse("-(a^2+b^2)*X^2 + Y^2 + Z^2", r, &vars).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn stufe_two_matrix_over_gaussian() {
        // a = i, b = 0: a^2 + b^2 = -1
        let r = Ring::gaussian();
        let vars = VarSet::xyz();
        let m = Mat3::parse(&[["X", "Y", "Z"], ["1", "w", "0"], ["0", "Z", "-w*X-Y"]], r, &vars).unwrap();
        let d = m.det3();
        assert_eq!(d, Poly::parse("X^2+Y^2+Z^2", r, &vars).unwrap());
        assert_eq!(d.sphere_normal_form().unwrap(), Poly::one(&vars, r));
    }
}
