//! The quadratic system obtained by matching coefficients in
//! `det(M) = 1 + (b0 X + b1 Y + b2 Z + b3)(X^2+Y^2+Z^2-1)` for the generic
//! matrix with first row `(X, Y, Z)` and degree-one entries `a0 .. a23`.

use crate::comb::{AnsatzPoint, Gauge};
use crate::error::{Error, Result};
use crate::matrix::Mat3;
use crate::poly::{Monomial, Poly, VarSet};
use crate::ring::{Ring, RingElem};

pub const ANSATZ_LEN: usize = 24;

/// `a11 a13 + a9 a15 - a3 a21 - a1 a23 - 1`.
pub const ANCHOR: &str = "a11*a13 + a9*a15 - a3*a21 - a1*a23 - 1";

pub fn ansatz_name(i: usize) -> String {
    format!("a{i}")
}

pub fn ansatz_vars() -> VarSet {
    let names: Vec<String> = (0..ANSATZ_LEN).map(ansatz_name).collect();
    VarSet::new(&names).unwrap()
}

fn generic_vars() -> VarSet {
    let mut names: Vec<String> = ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
    names.extend((0..ANSATZ_LEN).map(ansatz_name));
    VarSet::new(&names).unwrap()
}

/// The generic ansatz matrix over `Q[X, Y, Z, a0 .. a23]`.
pub fn generic_matrix() -> Mat3 {
    let vars = generic_vars();
    let r = Ring::Rationals;
    let v = |n: &str| Poly::var(&vars, r, n).unwrap();
    let entry = |k: usize| {
        let a = |j: usize| v(&ansatz_name(4 * k + j));
        &(&(&(&a(0) * &v("X")) + &(&a(1) * &v("Y"))) + &(&a(2) * &v("Z"))) + &a(3)
    };
    Mat3::new([[v("X"), v("Y"), v("Z")], [entry(0), entry(1), entry(2)], [entry(3), entry(4), entry(5)]]).unwrap()
}

/// `b0, b1, b2, b3` as polynomials in `a0 .. a23`.
#[derive(Clone, Debug)]
pub struct CofactorLine {
    pub b: [Poly; 4],
}

impl CofactorLine {
    /// `det - 1 - (b0 X + b1 Y + b2 Z + b3)(X^2+Y^2+Z^2-1)` over `Q[X, Y, Z, a]`.
    pub fn residual(&self) -> Poly {
        let g = generic_matrix();
        let vars = g.vars().clone();
        let r = Ring::Rationals;
        let lift = |p: &Poly| p.with_vars(&vars).unwrap();
        let xyz1 = [
            Poly::var(&vars, r, "X").unwrap(),
            Poly::var(&vars, r, "Y").unwrap(),
            Poly::var(&vars, r, "Z").unwrap(),
            Poly::one(&vars, r),
        ];
        let mut line = Poly::zero(&vars, r);
        for (b, x) in self.b.iter().zip(&xyz1) {
            line = &line + &(&lift(b) * x);
        }
        let q1 = Poly::parse("X^2 + Y^2 + Z^2 - 1", r, &vars).unwrap();
        &(&g.det3() - &Poly::one(&vars, r)) - &(&line * &q1)
    }
}

#[derive(Clone, Debug)]
pub struct QuadraticSystem {
    /// Over `Q[free_vars]`.
    pub polys: Vec<Poly>,
    /// The `X, Y, Z` monomial each equation matches; `None` for the slack equation.
    pub labels: Vec<Option<Monomial>>,
    pub gauge: Gauge,
    pub slack: bool,
    pub free_vars: VarSet,
    pub cofactor: CofactorLine,
}

fn xyz_key(m: &[u16]) -> Monomial {
    Monomial::from_exps(m.to_vec())
}

pub fn build_system(gauge: bool, fix_a13: bool, slack: bool) -> QuadraticSystem {
    let g = generic_matrix();
    let r = Ring::Rationals;
    let avars = ansatz_vars();
    let det = g.det3();
    let coeffs = det.coefficients_in(&[0, 1, 2]);
    let coeff = |e: [u16; 3]| -> Poly {
        coeffs.get(&e.to_vec()).map_or(Poly::zero(&avars, r), |p| p.with_vars(&avars).unwrap())
    };
    let cofactor = CofactorLine { b: [coeff([3, 0, 0]), coeff([0, 3, 0]), coeff([0, 0, 3]), Poly::one(&avars, r)] };
    let residual = cofactor.residual().coefficients_in(&[0, 1, 2]);
    let mut eqs: Vec<(Monomial, Poly)> = residual
        .into_iter()
        .filter(|(e, _)| !matches!(e.as_slice(), [3, 0, 0] | [0, 3, 0] | [0, 0, 3] | [0, 0, 0]))
        .map(|(e, p)| (xyz_key(&e), p.with_vars(&avars).unwrap()))
        .collect();
    eqs.sort_by(|a, b| b.0.cmp(&a.0));

    let mut fixed: Vec<(usize, i64)> = Vec::new();
    if gauge {
        fixed.extend([(0, 0), (3, 0), (12, 0), (15, 1)]);
    }
    if fix_a13 {
        fixed.push((13, 0));
    }
    let mut names: Vec<String> =
        (0..ANSATZ_LEN).filter(|i| !fixed.iter().any(|(j, _)| j == i)).map(ansatz_name).collect();
    if slack {
        names.push("h".into());
    }
    let free_vars = VarSet::new(&names).unwrap();
    let assign: Vec<(String, Poly)> =
        fixed.iter().map(|&(i, v)| (ansatz_name(i), Poly::int(&free_vars, r, v))).collect();
    let assign_ref: Vec<(&str, Poly)> = assign.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
    let mut polys = Vec::with_capacity(17);
    let mut labels = Vec::with_capacity(17);
    for (m, p) in eqs {
        polys.push(p.substitute(&assign_ref, &free_vars).unwrap());
        labels.push(Some(m));
    }
    if slack {
        let h = Poly::parse("h*(a19^2 + a23^2 + 1) - 1", r, &free_vars).unwrap();
        polys.push(h);
        labels.push(None);
    }
    QuadraticSystem { polys, labels, gauge: Gauge { base: gauge, a13: fix_a13 }, slack, free_vars, cofactor }
}

/// Whether `ANCHOR` occurs among the equations, and with which sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorStatus {
    pub index: usize,
    pub sign: i64,
    pub label: Monomial,
}

impl QuadraticSystem {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn anchor_status(&self) -> Option<AnchorStatus> {
        let anchor = Poly::parse(ANCHOR, Ring::Rationals, &ansatz_vars()).ok()?;
        let anchor = self.reduce_by_gauge(&anchor).ok()?;
        for (i, p) in self.polys.iter().enumerate() {
            for sign in [1, -1] {
                if *p == anchor.scale(&Ring::Rationals.int(sign)).unwrap() {
                    return Some(AnchorStatus { index: i, sign, label: self.labels[i].clone()? });
                }
            }
        }
        None
    }

    /// Apply this system's gauge to a polynomial in `a0 .. a23`.
    pub fn reduce_by_gauge(&self, p: &Poly) -> Result<Poly> {
        let r = p.ring();
        let mut assign: Vec<(String, Poly)> = Vec::new();
        if self.gauge.base {
            for (i, v) in [(0, 0), (3, 0), (12, 0), (15, 1)] {
                assign.push((ansatz_name(i), Poly::int(&self.free_vars, r, v)));
            }
        }
        if self.gauge.a13 {
            assign.push((ansatz_name(13), Poly::int(&self.free_vars, r, 0)));
        }
        let a: Vec<(&str, Poly)> = assign.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        p.substitute(&a, &self.free_vars)
    }

    /// Values of the free variables at an ansatz point, after checking that the
    /// point satisfies the gauge.
    pub fn free_values(&self, pt: &AnsatzPoint) -> Result<Vec<RingElem>> {
        if pt.values.len() != ANSATZ_LEN {
            return Err(Error::Invalid(format!("expected {ANSATZ_LEN} coordinates, got {}", pt.values.len())));
        }
        if (self.gauge.base && !pt.gauge.base) || (self.gauge.a13 && !pt.gauge.a13) {
            return Err(Error::Invalid("point does not satisfy the gauge".into()));
        }
        self.free_vars
            .names()
            .iter()
            .map(|n| {
                if n == "h" {
                    pt.h.clone().ok_or_else(|| Error::Degenerate("a19^2 + a23^2 + 1 is not a unit".into()))
                } else {
                    Ok(pt.values[n[1..].parse::<usize>().unwrap()].clone())
                }
            })
            .collect()
    }

    /// Value of every equation at the given free-variable values.
    pub fn evaluate(&self, values: &[RingElem]) -> Result<Vec<RingElem>> {
        if values.len() != self.free_vars.len() {
            return Err(Error::OutOfRange(format!(
                "expected {} values, got {}",
                self.free_vars.len(),
                values.len()
            )));
        }
        let ring = values[0].ring();
        self.polys.iter().map(|p| p.to_ring(ring)?.eval_slice(values)).collect()
    }

    pub fn evaluate_point(&self, pt: &AnsatzPoint) -> Result<Vec<RingElem>> {
        self.evaluate(&self.free_values(pt)?)
    }

    pub fn is_solution(&self, pt: &AnsatzPoint) -> Result<bool> {
        Ok(self.evaluate_point(pt)?.iter().all(RingElem::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{theorem12_to_ansatz, Witness};

    #[test]
    fn sixteen_quadrics() {
        let s = build_system(false, false, false);
        assert_eq!(s.len(), 16);
        assert_eq!(s.free_vars.len(), 24);
        assert!(s.polys.iter().all(|p| p.total_degree().unwrap() <= 2));
        let g = build_system(true, false, false);
        assert_eq!(g.free_vars.len(), 20);
        let h = build_system(true, true, true);
        assert_eq!(h.free_vars.len(), 20);
        assert_eq!(h.len(), 17);
        assert!(h.polys.iter().all(|p| p.total_degree().unwrap() <= 3));
    }

    #[test]
    fn anchor_occurs_literally() {
        let s = build_system(false, false, false);
        let st = s.anchor_status().expect("anchor among the equations");
        assert_eq!(st.label, Monomial::from_exps(vec![0, 2, 0]));
        assert!(build_system(true, false, false).anchor_status().is_some());
    }

    #[test]
    fn cofactor_line_matches_extreme_coefficients() {
        let s = build_system(false, false, false);
        let res = s.cofactor.residual().coefficients_in(&[0, 1, 2]);
        for key in [[3, 0, 0], [0, 3, 0], [0, 0, 3], [0, 0, 0]] {
            assert!(res.get(&key.to_vec()).map_or(true, Poly::is_zero));
        }
        // each remaining coefficient is one equation
        let nonzero = res.values().filter(|p| !p.is_zero()).count();
        assert_eq!(nonzero, 16);
    }

    #[test]
    fn family_points_solve_the_gauged_system() {
        let gi = Ring::gaussian();
        let sys = build_system(true, true, false);
        let slack = build_system(true, true, true);
        for abcd in [["w", "0", "0", "0"], ["1+w", "1-w", "w", "0"], ["2*w", "1", "1", "1"]] {
            let w = Witness::parse(gi, &abcd).unwrap();
            let pt = theorem12_to_ansatz(&w).or_else(|_| theorem12_to_ansatz(&w.swap_ab())).unwrap();
            assert!(sys.is_solution(&pt).unwrap(), "{abcd:?}");
            if pt.h.is_some() {
                assert!(slack.is_solution(&pt).unwrap(), "{abcd:?}");
            }
        }
    }

    #[test]
    fn non_solution_is_detected() {
        let q = Ring::Rationals;
        let sys = build_system(true, false, false);
        let vals: Vec<RingElem> = (0..sys.free_vars.len()).map(|i| q.int(i as i64 % 5 - 2)).collect();
        assert!(sys.evaluate(&vals).unwrap().iter().any(|v| !v.is_zero()));
    }
}
