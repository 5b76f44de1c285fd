//! Tangent fields on the sphere obtained from a second matrix row, pointwise
//! nonvanishing checks, and completion of two rows to a matrix of
//! determinant `1 + m7 * (X^2+Y^2+Z^2-1)` by a bounded-degree linear ansatz.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::comb::{CombMatrix, Provenance};
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Mat3;
use crate::poly::{Monomial, Poly, VarSet};
use crate::ring::{Ring, RingElem};

pub type Point = [RingElem; 3];

/// `v = w - ((X,Y,Z).w)(X,Y,Z)`, reduced on the sphere.
#[derive(Clone, Debug)]
pub struct TangentField {
    pub v: [Poly; 3],
    pub source: [Poly; 3],
}

fn to_xyz(row: &[Poly; 3]) -> Result<[Poly; 3]> {
    let xyz = VarSet::xyz();
    let ring = row[0].ring();
    let mut out = Vec::with_capacity(3);
    for p in row {
        if p.ring() != ring {
            return Err(Error::RingMismatch(ring.to_string(), p.ring().to_string()));
        }
        out.push(p.with_vars(&xyz)?);
    }
    Ok(out.try_into().unwrap())
}

fn radial(ring: Ring) -> [Poly; 3] {
    let xyz = VarSet::xyz();
    ["X", "Y", "Z"].map(|n| Poly::var(&xyz, ring, n).unwrap())
}

fn dot(a: &[Poly; 3], b: &[Poly; 3]) -> Poly {
    &(&(&a[0] * &b[0]) + &(&a[1] * &b[1])) + &(&a[2] * &b[2])
}

pub fn tangent_from_row(w_row: &[Poly; 3]) -> Result<TangentField> {
    let w = to_xyz(w_row)?;
    let x = radial(w[0].ring());
    let d = dot(&x, &w);
    let v: Vec<Poly> = (0..3)
        .map(|i| (&w[i] - &(&d * &x[i])).sphere_normal_form())
        .collect::<Result<_>>()?;
    Ok(TangentField { v: v.try_into().unwrap(), source: w })
}

impl TangentField {
    /// `(X,Y,Z).v` reduced on the sphere; zero for a tangent field.
    pub fn radial_component(&self) -> Result<Poly> {
        dot(&radial(self.v[0].ring()), &self.v).sphere_normal_form()
    }

    pub fn eval(&self, p: &Point) -> Result<Point> {
        let v: Vec<RingElem> = self.v.iter().map(|c| c.eval_slice(p)).collect::<Result<_>>()?;
        Ok(v.try_into().unwrap())
    }
}

/// Inverse stereographic projection from the south pole:
/// `(u, v) -> (2u, 2v, u^2+v^2-1) / (u^2+v^2+1)`. `None` if the denominator vanishes.
pub fn stereographic(u: &RingElem, v: &RingElem) -> Result<Option<Point>> {
    let ring = u.ring();
    let s = u.mul(u)?.add(&v.mul(v)?)?;
    let den = s.add(&ring.one())?;
    let Ok(inv) = den.inv() else {
        return Ok(None);
    };
    let two = ring.int(2);
    Ok(Some([
        two.mul(u)?.mul(&inv)?,
        two.mul(v)?.mul(&inv)?,
        s.sub(&ring.one())?.mul(&inv)?,
    ]))
}

pub fn on_sphere(p: &Point) -> bool {
    let ring = p[0].ring();
    let s = p.iter().fold(ring.zero(), |acc, x| acc.add(&x.mul(x).unwrap()).unwrap());
    s.is_one()
}

/// `n` distinct sphere points from pseudorandom rational parameters.
pub fn sphere_points(n: usize, ring: Ring, seed: u64) -> Result<Vec<Point>> {
    if n == 0 {
        return Err(Error::OutOfRange("point count must be positive".into()));
    }
    if !ring.is_field() {
        return Err(Error::Invalid(format!("{ring} is not a field")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let mut tries = 0usize;
    while out.len() < n {
        tries += 1;
        if tries > 100 * n + 1000 {
            return Err(Error::OutOfRange(format!("could not find {n} distinct points over {ring}")));
        }
        let mut param = || -> Result<RingElem> {
            let num: i64 = rng.gen_range(-30..=30);
            let den: i64 = rng.gen_range(1..=30);
            match ring.rational(&BigInt::from(num), &BigInt::from(den)) {
                Ok(x) => Ok(x),
                Err(Error::NotUnit(_)) => Ok(ring.int(num)),
                Err(e) => Err(e),
            }
        };
        let (u, v) = (param()?, param()?);
        let Some(p) = stereographic(&u, &v)? else {
            continue;
        };
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NonvanishingReport {
    pub checked: usize,
    /// `(index, point)` of every zero, by increasing index.
    pub zeros: Vec<(usize, Point)>,
}

pub fn check_nonvanishing(field: &TangentField, points: &[Point]) -> Result<NonvanishingReport> {
    if points.is_empty() {
        return Err(Error::Invalid("empty point list".into()));
    }
    let mut zeros = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !on_sphere(p) {
            return Err(Error::Invalid(format!("point {i} is not on the sphere")));
        }
        if field.eval(p)?.iter().all(RingElem::is_zero) {
            zeros.push((i, p.clone()));
        }
    }
    Ok(NonvanishingReport { checked: points.len(), zeros })
}

/// Polynomials `m4, m5, m6` completing two rows, and the multiplier `m7`
/// with `det = 1 + m7 * (X^2+Y^2+Z^2-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionCertificate {
    pub m4: Poly,
    pub m5: Poly,
    pub m6: Poly,
    pub m7: Poly,
}

pub const MAX_DEGREE_BOUND: u32 = 4;

fn sphere_relation(ring: Ring) -> Poly {
    Poly::parse("X^2 + Y^2 + Z^2 - 1", ring, &VarSet::xyz()).unwrap()
}

/// The three signed 2x2 minors multiplying `m4, m5, m6` in the determinant.
fn cofactors(r: &[Poly; 3]) -> [Poly; 3] {
    let [x, y, z] = radial(r[0].ring());
    [
        &(&y * &r[2]) - &(&z * &r[1]),
        &(&z * &r[0]) - &(&x * &r[2]),
        &(&x * &r[1]) - &(&y * &r[0]),
    ]
}

/// Solve for `m4, m5, m6` of degree `<= bound` and `m7` of degree `<= bound + 1`.
/// Returns `Ok(None)` when no certificate exists at this bound.
pub fn complete_by_ansatz(row: &[Poly; 3], bound: u32) -> Result<Option<CompletionCertificate>> {
    if bound > MAX_DEGREE_BOUND {
        return Err(Error::OutOfRange(format!("degree bound {bound} > {MAX_DEGREE_BOUND}")));
    }
    let r = to_xyz(row)?;
    let ring = r[0].ring();
    if !ring.is_field() {
        return Err(Error::Invalid(format!("{ring} is not a field")));
    }
    let xyz = VarSet::xyz();
    let low = Monomial::all_upto(3, bound);
    let high = Monomial::all_upto(3, bound + 1);
    let cof = cofactors(&r);
    let q1 = sphere_relation(ring);
    // each unknown contributes monomial * multiplier
    let mut columns: Vec<Poly> = Vec::new();
    for c in &cof {
        for m in &low {
            columns.push(&Poly::monomial(&xyz, m.clone(), ring.one()) * c);
        }
    }
    for m in &high {
        columns.push(-&(&Poly::monomial(&xyz, m.clone(), ring.one()) * &q1));
    }
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    row_index.insert(Monomial::one(3), 0);
    for col in &columns {
        for (m, _) in col.terms() {
            let next = row_index.len();
            row_index.entry(m.clone()).or_insert(next);
        }
    }
    let ncols = columns.len();
    let mut a = vec![vec![ring.zero(); ncols]; row_index.len()];
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            a[row_index[m]][j] = c;
        }
    }
    let mut b = vec![ring.zero(); row_index.len()];
    b[0] = ring.one();
    let Some(x) = linalg::solve(ring, &a, &b, ncols)? else {
        return Ok(None);
    };
    let build = |range: std::ops::Range<usize>, monos: &[Monomial]| -> Result<Poly> {
        Poly::from_terms(&xyz, ring, monos.iter().cloned().zip(x[range].iter().cloned()))
    };
    let n = low.len();
    let cert = CompletionCertificate {
        m4: build(0..n, &low)?,
        m5: build(n..2 * n, &low)?,
        m6: build(2 * n..3 * n, &low)?,
        m7: build(3 * n..3 * n + high.len(), &high)?,
    };
    Ok(Some(cert))
}

/// Assemble the matrix with rows `(X,Y,Z)`, `row`, `(m4,m5,m6)`.
pub fn assemble(row: &[Poly; 3], cert: &CompletionCertificate) -> Result<Mat3> {
    let r = to_xyz(row)?;
    Mat3::new([radial(r[0].ring()), r, [cert.m4.clone(), cert.m5.clone(), cert.m6.clone()]])
}

/// True iff `det - 1 - m7 * (X^2+Y^2+Z^2-1)` is the zero polynomial.
pub fn verify_certificate(row: &[Poly; 3], cert: &CompletionCertificate) -> bool {
    let Ok(m) = assemble(row, cert) else {
        return false;
    };
    let ring = m.ring();
    let Ok(m7) = cert.m7.with_vars(&VarSet::xyz()) else {
        return false;
    };
    if m7.ring() != ring {
        return false;
    }
    let rest = &(&m.det3() - &Poly::one(&VarSet::xyz(), ring)) - &(&m7 * &sphere_relation(ring));
    rest.is_zero()
}

/// The completed matrix as a [`CombMatrix`].
pub fn completed_matrix(row: &[Poly; 3], cert: &CompletionCertificate) -> Result<CombMatrix> {
    CombMatrix::new(assemble(row, cert)?, Provenance::Completed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{integral_example, CombMatrix, Provenance};

    fn p(ring: Ring, s: &str) -> Poly {
        Poly::parse(s, ring, &VarSet::xyz()).unwrap()
    }

    #[test]
    fn tangent_examples() {
        let q = Ring::Rationals;
        let w = [p(q, "Y+Z"), p(q, "-X"), p(q, "-X")];
        let t = tangent_from_row(&w).unwrap();
        assert_eq!(t.v, w);
        assert!(t.radial_component().unwrap().is_zero());
        let radial_row = [p(q, "X"), p(q, "Y"), p(q, "Z")];
        let t = tangent_from_row(&radial_row).unwrap();
        assert!(t.v.iter().all(Poly::is_zero));
        let m = integral_example().unwrap();
        let t = tangent_from_row(m.row(1)).unwrap();
        assert!(t.radial_component().unwrap().is_zero());
    }

    #[test]
    fn stereographic_examples() {
        let q = Ring::Rationals;
        let pt = stereographic(&q.int(1), &q.int(0)).unwrap().unwrap();
        assert_eq!(pt, [q.int(1), q.int(0), q.int(0)]);
        let pt = stereographic(&q.int(0), &q.int(0)).unwrap().unwrap();
        assert_eq!(pt, [q.int(0), q.int(0), q.int(-1)]);
        let gi = Ring::gaussian();
        let i = gi.generator().unwrap();
        assert!(stereographic(&i, &gi.int(0)).unwrap().is_none());
    }

    #[test]
    fn sphere_points_are_distinct_and_deterministic() {
        for ring in [Ring::Rationals, Ring::gaussian(), Ring::prime_field(101).unwrap()] {
            let pts = sphere_points(200, ring, 3).unwrap();
            assert!(pts.iter().all(on_sphere));
            let set: HashSet<_> = pts.iter().collect();
            assert_eq!(set.len(), pts.len());
            assert_eq!(pts, sphere_points(200, ring, 3).unwrap());
        }
        assert!(sphere_points(0, Ring::Rationals, 0).is_err());
    }

    #[test]
    fn nonvanishing_examples() {
        let q = Ring::Rationals;
        let t = tangent_from_row(&[p(q, "Y+Z"), p(q, "-X"), p(q, "-X")]).unwrap();
        let pts = sphere_points(1000, q, 0).unwrap();
        let rep = check_nonvanishing(&t, &pts).unwrap();
        assert_eq!((rep.checked, rep.zeros.len()), (1000, 0));
        let rot = tangent_from_row(&[p(q, "Y"), p(q, "-X"), p(q, "0")]).unwrap();
        let pole = [q.int(0), q.int(0), q.int(1)];
        let pts = vec![[q.int(1), q.int(0), q.int(0)], pole.clone()];
        let rep = check_nonvanishing(&rot, &pts).unwrap();
        assert_eq!(rep.zeros, vec![(1, pole)]);
        assert!(check_nonvanishing(&rot, &[]).is_err());
        let off = [q.int(1), q.int(1), q.int(0)];
        assert!(check_nonvanishing(&rot, &[off]).is_err());
    }

    #[test]
    fn completion_stufe_two_row() {
        let gi = Ring::gaussian();
        let row = [p(gi, "1"), p(gi, "w"), p(gi, "0")];
        let known = CompletionCertificate { m4: p(gi, "0"), m5: p(gi, "Z"), m6: p(gi, "-w*X - Y"), m7: p(gi, "1") };
        assert!(verify_certificate(&row, &known));
        let wrong = CompletionCertificate { m7: p(gi, "2"), ..known };
        assert!(!verify_certificate(&row, &wrong));
        let cert = complete_by_ansatz(&row, 1).unwrap().expect("feasible at bound 1");
        assert!(verify_certificate(&row, &cert));
        let m = completed_matrix(&row, &cert).unwrap();
        assert!(m.det_constant().unwrap().is_one());
    }

    #[test]
    fn completion_integral_example_row() {
        let m = CombMatrix::new(integral_example().unwrap(), Provenance::IntegralExample).unwrap();
        let n = crate::comb::normalize_to_sl3(&m, 2).unwrap();
        let row = n.matrix().row(1).clone();
        let cert = complete_by_ansatz(&row, 1).unwrap().expect("feasible at bound 1");
        assert!(verify_certificate(&row, &cert));
    }

    #[test]
    fn completion_of_dependent_rows_is_infeasible() {
        let q = Ring::Rationals;
        let row = [p(q, "X"), p(q, "Y"), p(q, "Z")];
        for bound in 0..=2 {
            assert!(complete_by_ansatz(&row, bound).unwrap().is_none());
        }
        assert!(complete_by_ansatz(&row, 5).is_err());
    }
}
