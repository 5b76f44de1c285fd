//! The degree-eight polynomial `F(r, s, t, u)` as a sum of five squares, and
//! its parametrization by a witness `(a, b, c, d)`.

use serde::Serialize;

use crate::comb::Witness;
use crate::error::{Error, Result};
use crate::poly::{Frac, Poly, VarSet};
use crate::ring::{Ring, RingElem};

pub const F_DISPLAY: &str = "36*r^2*s^2*t^4 - 36*r^2*s*t^4*u + 9*r^2*t^4*u^2 - 12*r^2*s*t^2*u^3 \
     + 6*r^2*t^2*u^4 + r^2*u^6 + 9*r^2*t^2*u^2 + 9*r^2*u^4 + 9*s^2*t^2 - 12*s*t^2*u + 4*t^2*u^2 + u^4";

pub const Q_DISPLAY: [&str; 5] = ["u^2", "-3*s*t + 2*t*u", "3*r*t*u", "3*r*u^2", "6*r*s*t^2 - 3*r*t^2*u - r*u^3"];

/// Closed forms of `r, s, t, u` in terms of `a, b, c, d`.
pub const RSTU_DISPLAY: [(&str, &str); 4] = [
    ("c", "3"),
    ("a*c^2*d - 2*b*c*d", "2*a*b^2*c - b^3 + b*c^2"),
    ("-3*b*d", "2*a*b*c - b^2 + c^2"),
    ("-3*c*d", "2*a*b*c - b^2 + c^2"),
];

pub fn rstu_vars() -> VarSet {
    VarSet::new(&["r", "s", "t", "u"]).unwrap()
}

pub fn abcd_vars() -> VarSet {
    VarSet::new(&["a", "b", "c", "d"]).unwrap()
}

pub fn f_poly() -> Poly {
    Poly::parse(F_DISPLAY, Ring::Rationals, &rstu_vars()).unwrap()
}

pub fn q_polys() -> [Poly; 5] {
    Q_DISPLAY.map(|s| Poly::parse(s, Ring::Rationals, &rstu_vars()).unwrap())
}

/// `q0^2 + q1^2 + q2^2 + q3^2 + q4^e`.
pub fn sum_of_squares(q: &[Poly; 5], last_exponent: u32) -> Poly {
    let mut acc = q[4].pow(last_exponent);
    for p in &q[..4] {
        acc = &acc + &p.pow(2);
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct SosReport {
    /// Exponents `e` on `q4` for which `F = q0^2 + .. + q3^2 + q4^e`.
    pub exponents: Vec<u32>,
    pub leading_term: String,
    pub f_at_0001: String,
    pub terms: usize,
}

impl SosReport {
    pub fn passed(&self) -> bool {
        self.exponents == [2] && self.f_at_0001 == "1"
    }
}

pub fn sos_verify() -> SosReport {
    let f = f_poly();
    let q = q_polys();
    let exponents = [2, 4].into_iter().filter(|&e| sum_of_squares(&q, e) == f).collect();
    let (m, c) = f.leading().unwrap();
    let lead = Poly::monomial(f.vars(), m.clone(), c);
    let r = Ring::Rationals;
    let at = f.eval_slice(&[r.int(0), r.int(0), r.int(0), r.int(1)]).unwrap();
    SosReport { exponents, leading_term: lead.to_string(), f_at_0001: at.to_string(), terms: f.len() }
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::NotUnit(s) => Error::Degenerate(format!("denominator {s} is not a unit")),
        other => other,
    }
}

/// `(r, s, t, u)` at a witness.
pub fn rstu_from_witness(w: &Witness) -> Result<[RingElem; 4]> {
    let vars = abcd_vars();
    let vals = w.abcd();
    let mut out = Vec::with_capacity(4);
    for (num, den) in RSTU_DISPLAY {
        let n = Poly::parse(num, w.ring(), &vars)?.eval_slice(vals)?;
        let d = Poly::parse(den, w.ring(), &vars)?.eval_slice(vals)?;
        out.push(n.div(&d).map_err(degenerate)?);
    }
    Ok(out.try_into().unwrap())
}

/// The closed forms as fractions over `Q[a, b, c, d]`.
pub fn rstu_fractions() -> [Frac; 4] {
    let vars = abcd_vars();
    let p = |s: &str| Poly::parse(s, Ring::Rationals, &vars).unwrap();
    RSTU_DISPLAY.map(|(n, d)| Frac::new(p(n), p(d)).unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamReport {
    /// `q_k(subst) = x_k q0(subst)` for `x = a, b, c, d`.
    pub q_identities: [bool; 4],
    /// `F(subst) = q0(subst)^2 (a^2 + b^2 + c^2 + d^2 + 1)`.
    pub f_identity: bool,
}

impl ParamReport {
    pub fn passed(&self) -> bool {
        self.q_identities.iter().all(|&b| b) && self.f_identity
    }
}

pub fn verify_parametrization() -> Result<ParamReport> {
    let vars = abcd_vars();
    let fr = rstu_fractions();
    let assign: Vec<(&str, Frac)> = ["r", "s", "t", "u"].into_iter().zip(fr).collect();
    let q = q_polys();
    let sub: Vec<Frac> = q.iter().map(|p| p.substitute_fractions(&assign, &vars)).collect::<Result<_>>()?;
    let mut q_identities = [false; 4];
    for (k, name) in ["a", "b", "c", "d"].into_iter().enumerate() {
        let x = Poly::var(&vars, Ring::Rationals, name)?;
        let rhs = Frac::new(&x * &sub[0].num, sub[0].den.clone())?;
        q_identities[k] = sub[k + 1].same_as(&rhs);
    }
    let f_sub = f_poly().substitute_fractions(&assign, &vars)?;
    let rel = Poly::parse("a^2 + b^2 + c^2 + d^2 + 1", Ring::Rationals, &vars)?;
    let rhs = Frac::new(&(&sub[0].num * &sub[0].num) * &rel, &sub[0].den * &sub[0].den)?;
    Ok(ParamReport { q_identities, f_identity: f_sub.same_as(&rhs) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_squares() {
        let rep = sos_verify();
        assert_eq!(rep.exponents, vec![2]);
        assert_eq!(rep.leading_term, "36*r^2*s^2*t^4");
        assert_eq!(rep.f_at_0001, "1");
        assert!(rep.passed());
    }

    #[test]
    fn perturbed_square_fails() {
        let mut q = q_polys();
        q[1] = Poly::parse("-3*s*t + t*u", Ring::Rationals, &rstu_vars()).unwrap();
        assert_ne!(sum_of_squares(&q, 2), f_poly());
    }

    #[test]
    fn parametrization_identities() {
        let rep = verify_parametrization().unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn rstu_examples() {
        let r = Ring::quadratic(-7).unwrap();
        let w = Witness::parse(r, &["1/7*w", "1", "3/7*w", "2/7*w"]).unwrap();
        let v = rstu_from_witness(&w).unwrap();
        assert_eq!(v[0], crate::poly::ring_eval("1/7*w", r).unwrap());
        let [a, b, c, d] = w.abcd();
        let den = r.int(2).mul(a).unwrap().mul(b).unwrap().mul(c).unwrap().sub(&b.mul(b).unwrap()).unwrap().add(&c.mul(c).unwrap()).unwrap();
        let check = v[2].mul(&den).unwrap().add(&r.int(3).mul(b).unwrap().mul(d).unwrap()).unwrap();
        assert!(check.is_zero());
        // F vanishes at the image of a witness
        let f = f_poly().to_ring(r).unwrap();
        assert!(f.eval_slice(&v).unwrap().is_zero());
        let gi = Ring::gaussian();
        let zero_b = Witness::parse(gi, &["w", "0", "0", "0"]).unwrap();
        assert!(matches!(rstu_from_witness(&zero_b), Err(Error::Degenerate(_))));
    }
}
