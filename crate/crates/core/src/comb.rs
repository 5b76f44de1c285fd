//! Explicit completions of `(X, Y, Z)` to matrices of constant determinant.
//!
//! The six-entry family below is parametrised by a witness `(a, b, c, d)` with
//! `a^2 + b^2 + c^2 + d^2 = -1`; its determinant reduces on the sphere to
//! `s * 2a^2 (a^2+d^2) (2abc - a^2 + b^2)` modulo that relation,
//! for a sign `s` fixed by [`verify_theorem12`] and cached in [`det_sign`].

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::matrix::Mat3;
use crate::poly::{Monomial, Poly, VarSet};
use crate::ring::{Ring, RingElem};

/// Entries `m1 .. m6` of the parametrised family, in variables `X,Y,Z,a,b,c,d`.
pub const FAMILY_ENTRIES: [&str; 6] = [
    "(-2*a*b*c + a^2 - b^2)*Y + (a^2*c - b^2*c + 2*a*b)*Z",
    "(a*b*c - a^2 + c^2 + 1)*X + (b*c^2 + a*c + 2*b)*Y + (-a*c^2 + b*c - 2*a)*Z - a*c*d",
    "(-a^2*c + c^3 - a*b + c)*X + (2*a*c^2 + b*c + a)*Y + (2*b*c^2 - a*c + b)*Z + a*d",
    "(-a^2*b*d - b^3*d)*Z + 2*a^2*b*c - a^3 + a*b^2",
    "(a*b^2*d + b*c*d - a*d)*X + (b^2*c*d - 2*a*b*d)*Y + (-a*b*c*d + a^2*d + b^2*d)*Z - a^3*b + a*b^3 + a*b*c^2 - a^2*c",
    "(a^2*b*d + b*c^2*d - a*c*d)*X + (-a^2*d)*Y + (2*b^2*c*d - a*b*d)*Z + 2*a^2*b^2 - a*b*c + a^2",
];

/// The displayed closed form `2a^2 (a^2+d^2) (2abc - a^2 + b^2)`.
pub const CLOSED_FORM: &str = "2*a^2*(a^2 + d^2)*(2*a*b*c - a^2 + b^2)";

/// `a^2 + b^2 + c^2 + d^2 + 1`.
pub const WITNESS_RELATION: &str = "a^2 + b^2 + c^2 + d^2 + 1";


/// Integral example over `Z[w]`, `w^2 = -7`, with determinant 5.
pub const INTEGRAL_EXAMPLE: [[&str; 3]; 3] = [
    ["X", "Y", "Z"],
    ["w*Y - 5*Z", "2*w*X - w*Y + 8*Z + 3", "-5*X + 5*Y + 4*w*Z + w"],
    ["-6*Z + 1", "3*w*X + w*Y + 9*Z + 1", "-7*X + Y + 5*w*Z"],
];

pub fn family_vars() -> VarSet {
    VarSet::new(&["X", "Y", "Z", "a", "b", "c", "d"]).unwrap()
}

/// `(a, b, c, d)` with `a^2 + b^2 + c^2 + d^2 = -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    ring: Ring,
    abcd: [RingElem; 4],
}

impl Witness {
    pub fn new(a: RingElem, b: RingElem, c: RingElem, d: RingElem) -> Result<Witness> {
        let ring = a.ring();
        let mut sum = ring.one();
        for x in [&a, &b, &c, &d] {
            if x.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), x.ring().to_string()));
            }
            sum = sum.add(&x.mul(x)?)?;
        }
        if !sum.is_zero() {
            return Err(Error::InvalidWitness(sum.sub(&ring.one())?.to_string()));
        }
        Ok(Witness { ring, abcd: [a, b, c, d] })
    }

    /// Parse four constant expressions.
    pub fn parse(ring: Ring, abcd: &[&str]) -> Result<Witness> {
        if abcd.len() != 4 {
            return Err(Error::Invalid(format!("witness needs 4 entries, got {}", abcd.len())));
        }
        let v: Vec<RingElem> = abcd.iter().map(|s| crate::poly::ring_eval(s, ring)).collect::<Result<_>>()?;
        let [a, b, c, d]: [RingElem; 4] = v.try_into().unwrap();
        Witness::new(a, b, c, d)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn abcd(&self) -> &[RingElem; 4] {
        &self.abcd
    }

    pub fn a(&self) -> &RingElem {
        &self.abcd[0]
    }

    pub fn b(&self) -> &RingElem {
        &self.abcd[1]
    }

    pub fn c(&self) -> &RingElem {
        &self.abcd[2]
    }

    pub fn d(&self) -> &RingElem {
        &self.abcd[3]
    }

    pub fn swap_ab(&self) -> Witness {
        let [a, b, c, d] = self.abcd.clone();
        Witness { ring: self.ring, abcd: [b, a, c, d] }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.abcd;
        write!(f, "({a}, {b}, {c}, {d}) over {}", self.ring)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Family(Witness),
    IntegralExample,
    Completed,
    Manual,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Family(_) => "theorem12",
            Provenance::IntegralExample => "theorem13",
            Provenance::Completed => "completed",
            Provenance::Manual => "manual",
        }
    }
}

/// A matrix with first row `(X, Y, Z)` and its determinant reduced on the sphere.
#[derive(Clone, Debug)]
pub struct CombMatrix {
    matrix: Mat3,
    provenance: Provenance,
    det_reduced: Poly,
}

impl CombMatrix {
    pub fn new(matrix: Mat3, provenance: Provenance) -> Result<CombMatrix> {
        let vars = matrix.vars();
        for (j, name) in ["X", "Y", "Z"].into_iter().enumerate() {
            if *matrix.entry(0, j) != Poly::var(vars, matrix.ring(), name)? {
                return Err(Error::Invalid(format!("first row must be (X, Y, Z), found {}", matrix.entry(0, j))));
            }
        }
        let det_reduced = matrix.det3().sphere_normal_form()?;
        Ok(CombMatrix { matrix, provenance, det_reduced })
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn det_reduced(&self) -> &Poly {
        &self.det_reduced
    }

    pub fn det_constant(&self) -> Option<RingElem> {
        self.det_reduced.as_constant()
    }

    pub fn ring(&self) -> Ring {
        self.matrix.ring()
    }
}

fn family_coefficients() -> &'static [Poly; 6] {
    static CELL: OnceLock<[Poly; 6]> = OnceLock::new();
    CELL.get_or_init(|| {
        let vars = family_vars();
        FAMILY_ENTRIES.map(|s| Poly::parse(s, Ring::Rationals, &vars).expect("family entries parse"))
    })
}

/// Specialise the family at a witness without computing the determinant.
pub fn family_matrix(w: &Witness) -> Result<Mat3> {
    let ring = w.ring();
    let xyz = VarSet::xyz();
    let assignment: Vec<(&str, Poly)> = ["a", "b", "c", "d"]
        .into_iter()
        .zip(w.abcd().iter())
        .map(|(n, v)| (n, Poly::constant(&xyz, v.clone())))
        .collect();
    let entries: Vec<Poly> = family_coefficients()
        .iter()
        .map(|p| p.to_ring(ring)?.substitute(&assignment, &xyz))
        .collect::<Result<_>>()?;
    let var = |n: &str| Poly::var(&xyz, ring, n).unwrap();
    let [m1, m2, m3, m4, m5, m6]: [Poly; 6] = entries.try_into().unwrap();
    Mat3::new([[var("X"), var("Y"), var("Z")], [m1, m2, m3], [m4, m5, m6]])
}

/// The family matrix at `w` with its reduced determinant.
pub fn build_theorem12(w: &Witness) -> Result<CombMatrix> {
    CombMatrix::new(family_matrix(w)?, Provenance::Family(w.clone()))
}

/// `2a^2 (a^2+d^2) (2abc - a^2 + b^2)` evaluated at `w`.
pub fn det_closed_form(w: &Witness) -> RingElem {
    let [a, b, c, d] = w.abcd();
    let r = w.ring();
    let a2 = a.mul(a).unwrap();
    let t1 = a2.add(&d.mul(d).unwrap()).unwrap();
    let abc2 = r.int(2).mul(a).unwrap().mul(b).unwrap().mul(c).unwrap();
    let t2 = abc2.sub(&a2).unwrap().add(&b.mul(b).unwrap()).unwrap();
    r.int(2).mul(&a2).unwrap().mul(&t1).unwrap().mul(&t2).unwrap()
}

/// Sign `s` with `det = s * closed form` on the sphere, computed once by
/// [`verify_theorem12`].
pub fn det_sign() -> i64 {
    static SIGN: OnceLock<i64> = OnceLock::new();
    *SIGN.get_or_init(|| verify_theorem12().expect("symbolic determinant check").sign)
}

/// The reduced determinant of the family at `w`, from the closed form.
pub fn family_det(w: &Witness) -> RingElem {
    det_closed_form(w).mul(&w.ring().int(det_sign())).unwrap()
}

/// Outcome of the symbolic verification of the family determinant.
#[derive(Clone, Debug)]
pub struct FamilyCheck {
    pub sign: i64,
    pub det_terms: usize,
    pub reduced_terms: usize,
    pub quotient_terms: usize,
}

/// The unique `s` in `{1, -1}` with `det_reduced - s * closed` divisible by
/// `a^2+b^2+c^2+d^2+1` (as a monic polynomial in `d`).
pub fn sign_modulo_witness_relation(det_reduced: &Poly, closed: &Poly) -> Result<(i64, Poly)> {
    let q2 = Poly::parse(WITNESS_RELATION, det_reduced.ring(), det_reduced.vars())?;
    let mut hits = Vec::new();
    for s in [1i64, -1] {
        let diff = det_reduced - &closed.scale(&det_reduced.ring().int(s))?;
        let (q, r) = diff.divide_monic(&q2, "d")?;
        if r.is_zero() {
            hits.push((s, q));
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        0 => Err(Error::Verification("neither sign makes the difference divisible by a^2+b^2+c^2+d^2+1".into())),
        _ => Err(Error::Verification("both signs succeed; closed form vanishes modulo the relation".into())),
    }
}

/// Symbolic check of the family over `Q[a,b,c,d,X,Y,Z]`.
pub fn verify_theorem12() -> Result<FamilyCheck> {
    let vars = family_vars();
    let r = Ring::Rationals;
    let var = |n: &str| Poly::var(&vars, r, n).unwrap();
    let [m1, m2, m3, m4, m5, m6] = family_coefficients().clone();
    let m = Mat3::new([[var("X"), var("Y"), var("Z")], [m1, m2, m3], [m4, m5, m6]])?;
    let det = m.det3();
    let reduced = det.sphere_normal_form()?;
    let closed = Poly::parse(CLOSED_FORM, r, &vars)?;
    let (sign, quotient) = sign_modulo_witness_relation(&reduced, &closed)?;
    Ok(FamilyCheck { sign, det_terms: det.len(), reduced_terms: reduced.len(), quotient_terms: quotient.len() })
}

pub fn integral_example() -> Result<Mat3> {
    Mat3::parse(&INTEGRAL_EXAMPLE, Ring::quadratic(-7)?, &VarSet::xyz())
}

/// Reduced determinant of a matrix, required to be a constant.
pub fn constant_det(m: &Mat3) -> Result<RingElem> {
    let d = m.det3().sphere_normal_form()?;
    d.as_constant().ok_or_else(|| Error::BadDeterminant(d.to_string()))
}

/// Determinant of the integral example over `Z[w]`, `w^2 = -7`.
pub fn verify_theorem13() -> Result<RingElem> {
    let m = integral_example()?;
    for p in m.rows().iter().flatten() {
        if let Some((_, c)) = p.terms().find(|(_, c)| !c.is_integral()) {
            return Err(Error::Verification(format!("coefficient {c} is not in Z[w]")));
        }
    }
    constant_det(&m)
}

/// Family matrix at `w`, or at `w` with `a` and `b` exchanged when the first
/// determinant vanishes. Returns the matrix, its unit determinant and whether
/// the swap was used.
pub fn robust_construct(w: &Witness) -> Result<(CombMatrix, RingElem, bool)> {
    for (cand, swapped) in [(w.clone(), false), (w.swap_ab(), true)] {
        if !family_det(&cand).is_unit() {
            continue;
        }
        let m = build_theorem12(&cand)?;
        let det = m
            .det_constant()
            .ok_or_else(|| Error::Verification(format!("non-constant determinant {}", m.det_reduced())))?;
        if det != family_det(&cand) {
            return Err(Error::Verification(format!("determinant {det} disagrees with closed form")));
        }
        return Ok((m, det, swapped));
    }
    Err(Error::Degenerate(format!("determinant vanishes for {w} and after swapping a, b")))
}

/// Divide row 2 or 3 (1-based) by the determinant so that it becomes 1.
pub fn normalize_to_sl3(m: &CombMatrix, row: usize) -> Result<CombMatrix> {
    if row != 2 && row != 3 {
        return Err(Error::OutOfRange(format!("row {row} (expected 2 or 3)")));
    }
    let det = m.det_constant().ok_or_else(|| Error::BadDeterminant(m.det_reduced().to_string()))?;
    let inv = det.inv().map_err(|_| Error::BadDeterminant(det.to_string()))?;
    let mut mat = m.matrix().clone();
    let r = &mat.rows()[row - 1];
    let scaled = [r[0].scale(&inv)?, r[1].scale(&inv)?, r[2].scale(&inv)?];
    mat.set_row(row - 1, scaled)?;
    CombMatrix::new(mat, m.provenance().clone())
}

/// Gauge of the degree-one ansatz.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Gauge {
    /// `a0 = a3 = a12 = 0` and `a15 = 1`.
    pub base: bool,
    /// `a13 = 0`.
    pub a13: bool,
}

/// Coordinates `a0 .. a23` of a matrix of the degree-one ansatz: row 2 gives
/// `a0..a11`, row 3 gives `a12..a23`, each entry contributing its `X, Y, Z`
/// and constant coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzPoint {
    pub values: Vec<RingElem>,
    pub h: Option<RingElem>,
    pub gauge: Gauge,
}

impl AnsatzPoint {
    pub fn ring(&self) -> Ring {
        self.values[0].ring()
    }

    /// Read the coordinates of a matrix whose rows 2, 3 have entries of degree <= 1.
    pub fn from_matrix(m: &Mat3) -> Result<AnsatzPoint> {
        let ring = m.ring();
        let vars = m.vars();
        let idx: Vec<usize> = ["X", "Y", "Z"]
            .iter()
            .map(|n| vars.index_of(n).ok_or_else(|| Error::UnknownVariable(n.to_string())))
            .collect::<Result<_>>()?;
        let mut values = Vec::with_capacity(24);
        for row in 1..3 {
            for col in 0..3 {
                let p = m.entry(row, col);
                if p.total_degree().unwrap_or(0) > 1 {
                    return Err(Error::Invalid(format!("entry {p} has degree > 1")));
                }
                for &i in &idx {
                    let mut e = vec![0u16; vars.len()];
                    e[i] = 1;
                    values.push(p.coeff(&Monomial::from_exps(e)));
                }
                values.push(p.coeff(&Monomial::one(vars.len())));
            }
        }
        let z = ring.zero();
        let base = values[0] == z && values[3] == z && values[12] == z && values[15].is_one();
        let gauge = Gauge { base, a13: values[13] == z };
        let t = values[19].mul(&values[19])?.add(&values[23].mul(&values[23])?)?.add(&ring.one())?;
        let h = t.inv().ok();
        Ok(AnsatzPoint { values, h, gauge })
    }

    /// Rebuild the ansatz matrix in `X, Y, Z`.
    pub fn to_matrix(&self) -> Result<Mat3> {
        let ring = self.ring();
        let xyz = VarSet::xyz();
        let var = |n: &str| Poly::var(&xyz, ring, n).unwrap();
        let entry = |k: usize| -> Poly {
            let v = &self.values[4 * k..4 * k + 4];
            let mut p = Poly::constant(&xyz, v[3].clone());
            for (j, n) in ["X", "Y", "Z"].into_iter().enumerate() {
                p = &p + &var(n).scale(&v[j]).unwrap();
            }
            p
        };
        Mat3::new([[var("X"), var("Y"), var("Z")], [entry(0), entry(1), entry(2)], [entry(3), entry(4), entry(5)]])
    }
}

/// `2a^2bc - a^3 + ab^2`, the constant term of `m4`.
pub fn sigma(w: &Witness) -> RingElem {
    let [a, b, c, _] = w.abcd();
    let r = w.ring();
    let t1 = r.int(2).mul(&a.mul(a).unwrap()).unwrap().mul(b).unwrap().mul(c).unwrap();
    let t2 = a.pow(3);
    let t3 = a.mul(&b.mul(b).unwrap()).unwrap();
    t1.sub(&t2).unwrap().add(&t3).unwrap()
}

/// Rescale the family matrix at `w` into the gauge of the degree-one ansatz:
/// row 2 by `sigma/det`, row 3 by `1/sigma`.
pub fn theorem12_to_ansatz(w: &Witness) -> Result<AnsatzPoint> {
    let s = sigma(w);
    let det = family_det(w);
    if !s.is_unit() {
        return Err(Error::Degenerate(format!("sigma = {s} is not a unit")));
    }
    if !det.is_unit() {
        return Err(Error::Degenerate(format!("determinant {det} is not a unit")));
    }
    let mut m = family_matrix(w)?;
    let f2 = s.div(&det)?;
    let f3 = s.inv()?;
    let r2 = m.row(1).clone().map(|p| p.scale(&f2).unwrap());
    let r3 = m.row(2).clone().map(|p| p.scale(&f3).unwrap());
    m.set_row(1, r2)?;
    m.set_row(2, r3)?;
    AnsatzPoint::from_matrix(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn gi() -> Ring {
        Ring::gaussian()
    }

    fn wit(ring: Ring, s: [&str; 4]) -> Witness {
        Witness::parse(ring, &s).unwrap()
    }

    #[test]
    fn symbolic_sign() {
        let c = verify_theorem12().unwrap();
        assert_eq!(c.sign, -1);
        assert_eq!(det_sign(), -1);
    }

    #[test]
    fn symbolic_sign_negative_control() {
        let vars = family_vars();
        let r = Ring::Rationals;
        let var = |n: &str| Poly::var(&vars, r, n).unwrap();
        let [m1, m2, m3, m4, m5, m6] = family_coefficients().clone();
        let m = Mat3::new([[var("X"), var("Y"), var("Z")], [m1, m2, m3], [m4, m5, m6]]).unwrap();
        let reduced = m.det3().sphere_normal_form().unwrap();
        let halved = Poly::parse("a^2*(a^2 + d^2)*(2*a*b*c - a^2 + b^2)", r, &vars).unwrap();
        assert!(matches!(sign_modulo_witness_relation(&reduced, &halved), Err(Error::Verification(_))));
    }

    #[test]
    fn witness_validation() {
        assert!(Witness::parse(gi(), &["w", "0", "0", "0"]).is_ok());
        assert!(matches!(Witness::parse(gi(), &["1", "0", "0", "0"]), Err(Error::InvalidWitness(_))));
        assert!(Witness::parse(gi(), &["w", "0", "0"]).is_err());
    }

    #[test]
    fn family_at_gaussian_unit() {
        let w = wit(gi(), ["w", "0", "0", "0"]);
        let m = build_theorem12(&w).unwrap();
        let xyz = VarSet::xyz();
        let p = |s: &str| Poly::parse(s, gi(), &xyz).unwrap();
        assert_eq!(m.matrix().row(1), &[p("-Y"), p("2*X - 2*w*Z"), p("w*Y")]);
        assert_eq!(m.matrix().row(2), &[p("w"), p("0"), p("-1")]);
        assert_eq!(det_closed_form(&w), gi().int(2));
        assert_eq!(m.det_constant().unwrap(), gi().int(-2));
    }

    #[test]
    fn family_over_f3() {
        let f3 = Ring::prime_field(3).unwrap();
        let w = wit(f3, ["1", "0", "0", "1"]);
        assert_eq!(det_closed_form(&w), f3.int(2));
        let m = build_theorem12(&w).unwrap();
        assert_eq!(m.det_constant().unwrap(), f3.int(-2));
    }

    #[test]
    fn family_over_sqrt_minus_seven() {
        let q7 = Ring::quadratic(-7).unwrap();
        let w = wit(q7, ["1/7*w", "1", "3/7*w", "2/7*w"]);
        let expect = q7.rational(&BigInt::from(20), &BigInt::from(343)).unwrap();
        assert_eq!(det_closed_form(&w), expect);
        let m = build_theorem12(&w).unwrap();
        assert_eq!(m.det_constant().unwrap(), expect.neg());
    }

    #[test]
    fn closed_form_zeros() {
        assert!(det_closed_form(&wit(gi(), ["w", "w", "0", "1"])).is_zero());
        assert!(det_closed_form(&wit(gi(), ["1+w", "1-w", "w", "0"])).is_zero());
    }

    #[test]
    fn family_entries_have_degree_one() {
        let w = wit(gi(), ["1+w", "1-w", "w", "0"]);
        let m = family_matrix(&w).unwrap();
        for p in m.rows().iter().flatten() {
            assert!(p.total_degree().unwrap_or(0) <= 1);
        }
    }

    #[test]
    fn integral_example_determinant() {
        let q7 = Ring::quadratic(-7).unwrap();
        assert_eq!(verify_theorem13().unwrap(), q7.int(5));
        let m = CombMatrix::new(integral_example().unwrap(), Provenance::IntegralExample).unwrap();
        let n = normalize_to_sl3(&m, 2).unwrap();
        assert!(n.det_constant().unwrap().is_one());
        assert_eq!(n.matrix().row(0), m.matrix().row(0));
        let mut tampered = integral_example().unwrap();
        let e = tampered.entry(2, 0) + &Poly::one(&VarSet::xyz(), q7);
        let row = [e, tampered.entry(2, 1).clone(), tampered.entry(2, 2).clone()];
        tampered.set_row(2, row).unwrap();
        match constant_det(&tampered) {
            Err(Error::BadDeterminant(_)) => {}
            Ok(d) => assert_ne!(d, q7.int(5)),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn robust_examples() {
        let (m, det, swapped) = robust_construct(&wit(gi(), ["1+w", "1-w", "w", "0"])).unwrap();
        assert!(swapped);
        let i = gi().generator().unwrap();
        assert_eq!(det, i.mul(&gi().int(64)).unwrap());
        assert_eq!(m.det_constant().unwrap(), det);
        let (_, det, swapped) = robust_construct(&wit(gi(), ["w", "0", "0", "0"])).unwrap();
        assert!(!swapped);
        assert_eq!(det, gi().int(-2));
        assert!(matches!(robust_construct(&wit(gi(), ["w", "w", "0", "1"])), Err(Error::Degenerate(_))));
    }

    #[test]
    fn normalisation() {
        let m = build_theorem12(&wit(gi(), ["w", "0", "0", "0"])).unwrap();
        for row in [2, 3] {
            let n = normalize_to_sl3(&m, row).unwrap();
            assert!(n.det_constant().unwrap().is_one());
        }
        assert!(normalize_to_sl3(&m, 1).is_err());
        let degenerate = build_theorem12(&wit(gi(), ["w", "w", "0", "1"])).unwrap();
        assert!(matches!(normalize_to_sl3(&degenerate, 2), Err(Error::BadDeterminant(_))));
    }

    #[test]
    fn ansatz_coordinates_at_gaussian_unit() {
        let w = wit(gi(), ["w", "0", "0", "0"]);
        let pt = theorem12_to_ansatz(&w).unwrap();
        let half = |n: i64| gi().rational(&BigInt::from(n), &BigInt::from(2)).unwrap();
        let i = gi().generator().unwrap();
        let q = |a: i64, b: i64| gi().quad_elem(BigRational::from_integer(a.into()), BigRational::from_integer(b.into())).unwrap();
        // det is -2, so row 2 is scaled by i / (-2)
        assert_eq!(pt.values[1], i.mul(&half(1)).unwrap());
        assert_eq!(pt.values[4], q(0, -1));
        assert_eq!(pt.values[6], gi().int(-1));
        assert_eq!(pt.values[9], half(1));
        assert!(pt.values[15].is_one());
        assert_eq!(pt.values[23], i);
        for k in (12..24).filter(|&k| k != 15 && k != 23) {
            assert!(pt.values[k].is_zero(), "a{k}");
        }
        assert_eq!(pt.gauge, Gauge { base: true, a13: true });
        assert!(constant_det(&pt.to_matrix().unwrap()).unwrap().is_one());
        assert!(matches!(theorem12_to_ansatz(&wit(gi(), ["w", "w", "0", "1"])), Err(Error::Degenerate(_))));
    }
}
