//! Strategies and invariant checks shared by the property tests and the
//! acceptance run.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use sphere_comb::json::MatrixDoc;
use sphere_comb::poly::ring_eval;
use sphere_comb::tangent::sphere_points;
use sphere_comb::{Mat3, Monomial, Poly, Ring, RingElem, VarSet};

pub const CASES: u32 = 1000;

pub fn config() -> Config {
    Config { cases: CASES, failure_persistence: None, ..Config::default() }
}

pub fn rings() -> impl Strategy<Value = Ring> {
    prop_oneof![
        Just(Ring::Rationals),
        Just(Ring::gaussian()),
        Just(Ring::quadratic(-7).unwrap()),
        Just(Ring::quadratic(2).unwrap()),
        Just(Ring::prime_field(3).unwrap()),
        Just(Ring::prime_field(101).unwrap()),
        Just(Ring::prime_field((1 << 61) - 1).unwrap()),
        Just(Ring::mod_prime_power(2, 5).unwrap()),
        Just(Ring::mod_prime_power(3, 4).unwrap()),
    ]
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn elem(ring: Ring, parts: (i64, i64, i64, i64)) -> RingElem {
    let (n1, d1, n2, d2) = parts;
    match ring {
        Ring::Rationals => ring.from_rational(&q(n1, d1)).unwrap(),
        Ring::Quadratic { .. } => ring.quad_elem(q(n1, d1), q(n2, d2)).unwrap(),
        _ => ring.int(n1 * 1_000_003 + n2),
    }
}

fn parts() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-60i64..=60, 1i64..=12, -60i64..=60, 1i64..=12)
}

/// A ring together with three of its elements.
pub fn ring_triples() -> impl Strategy<Value = (Ring, [RingElem; 3])> {
    (rings(), parts(), parts(), parts()).prop_map(|(r, a, b, c)| (r, [elem(r, a), elem(r, b), elem(r, c)]))
}

fn coeff_rings() -> impl Strategy<Value = Ring> {
    prop_oneof![Just(Ring::Rationals), Just(Ring::gaussian()), Just(Ring::prime_field(7).unwrap())]
}

fn poly_in(ring: Ring, vars: VarSet, max_exp: u16, terms: usize) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), parts()), 0..=terms).prop_map(move |ts| {
        Poly::from_terms(&vars, ring, ts.into_iter().map(|(e, c)| (Monomial::from_exps(e), elem(ring, c)))).unwrap()
    })
}

pub fn xyz_polys(count: usize) -> impl Strategy<Value = Vec<Poly>> {
    coeff_rings().prop_flat_map(move |r| prop::collection::vec(poly_in(r, VarSet::xyz(), 4, 6), count))
}

fn sphere(ring: Ring) -> Poly {
    Poly::parse("X^2 + Y^2 + Z^2 - 1", ring, &VarSet::xyz()).unwrap()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub fn ring_axioms(ring: Ring, [a, b, c]: &[RingElem; 3]) -> Result<(), TestCaseError> {
    let add = |x: &RingElem, y: &RingElem| x.add(y).unwrap();
    let mul = |x: &RingElem, y: &RingElem| x.mul(y).unwrap();
    check(add(&add(a, b), c) == add(a, &add(b, c)), || format!("+ assoc in {ring}"))?;
    check(mul(&mul(a, b), c) == mul(a, &mul(b, c)), || format!("* assoc in {ring}"))?;
    check(add(a, b) == add(b, a) && mul(a, b) == mul(b, a), || format!("commutativity in {ring}"))?;
    check(mul(a, &add(b, c)) == add(&mul(a, b), &mul(a, c)), || format!("distributivity in {ring}"))?;
    check(add(a, &a.neg()).is_zero() && add(a, &ring.zero()) == *a && mul(a, &ring.one()) == *a, || {
        format!("identities in {ring}")
    })?;
    check(a.sub(b).unwrap() == add(a, &b.neg()), || format!("subtraction in {ring}"))?;
    if b.is_unit() {
        check(mul(&a.div(b).unwrap(), b) == *a, || format!("{a} / {b} in {ring}"))?;
    } else {
        check(a.div(b).is_err(), || format!("division by non-unit {b} in {ring}"))?;
    }
    check(ring_eval(&a.to_string(), ring).unwrap() == *a, || format!("print/parse of {a} in {ring}"))
}

pub fn normal_form(p: &Poly) -> Result<(), TestCaseError> {
    let nf = p.sphere_normal_form().unwrap();
    check(nf.sphere_normal_form().unwrap() == nf, || format!("not idempotent on {p}"))?;
    check(nf.degree_in_name("Z").unwrap() <= 1, || format!("Z-degree of {nf}"))?;
    let (_, r) = (p - &nf).divide_monic(&sphere(p.ring()), "Z").unwrap();
    check(r.is_zero(), || format!("{p} - {nf} not in the ideal"))
}

pub fn sphere_evaluation(p: &Poly, seed: u64) -> Result<(), TestCaseError> {
    if p.ring().characteristic() != 0 {
        return Ok(());
    }
    let nf = p.sphere_normal_form().unwrap();
    for pt in sphere_points(3, p.ring(), seed).unwrap() {
        check(p.eval_slice(&pt).unwrap() == nf.eval_slice(&pt).unwrap(), || format!("{p} at {pt:?}"))?;
    }
    Ok(())
}

/// `p = q d + r` with `deg_Z r < deg_Z d` for `d = Z^k + lower`.
pub fn divide_monic(p: &Poly, lower: &Poly, k: u16) -> Result<(), TestCaseError> {
    let vars = p.vars().clone();
    let zk = Poly::monomial(&vars, Monomial::from_exps(vec![0, 0, k]), p.ring().one());
    let low = lower.divide_monic(&zk, "Z").unwrap().1;
    let d = &zk + &low;
    let (quo, r) = p.divide_monic(&d, "Z").unwrap();
    check(&(&quo * &d) + &r == *p, || format!("{p} / {d}"))?;
    check(r.degree_in_name("Z").unwrap() < k, || format!("remainder {r} of {p} / {d}"))
}

fn mat(rows: &[Poly]) -> Mat3 {
    Mat3::new([
        [rows[0].clone(), rows[1].clone(), rows[2].clone()],
        [rows[3].clone(), rows[4].clone(), rows[5].clone()],
        [rows[6].clone(), rows[7].clone(), rows[8].clone()],
    ])
    .unwrap()
}

/// Alternation under row swaps, vanishing on repeated rows, linearity in row 1.
pub fn det_alternation(e: &[Poly]) -> Result<(), TestCaseError> {
    let d = mat(&e[..9]).det3();
    let swapped: Vec<Poly> = [&e[3..6], &e[0..3], &e[6..9]].concat();
    check(mat(&swapped).det3() == -&d, || "row swap".into())?;
    let repeated: Vec<Poly> = [&e[0..3], &e[3..6], &e[0..3]].concat();
    check(mat(&repeated).det3().is_zero(), || "repeated row".into())?;
    let mut scaled = e[..9].to_vec();
    for p in &mut scaled[..3] {
        *p = &*p * &e[9];
    }
    let mut summed = e[..9].to_vec();
    for j in 0..3 {
        summed[j] = &summed[j] + &e[10 + j];
    }
    let other: Vec<Poly> = [&e[10..13], &e[3..9]].concat();
    check(mat(&scaled).det3() == &d * &e[9], || "row scaling".into())?;
    check(mat(&summed).det3() == &d + &mat(&other).det3(), || "row additivity".into())
}

pub fn round_trip(e: &[Poly]) -> Result<(), TestCaseError> {
    for p in e {
        let back = Poly::parse(&p.to_string(), p.ring(), p.vars()).unwrap();
        check(back == *p, || format!("{p} reparsed as {back}"))?;
    }
    let m = mat(&e[..9]);
    let text = serde_json::to_string(&MatrixDoc::from_matrix(&m, "manual")).unwrap();
    let back = serde_json::from_str::<MatrixDoc>(&text).unwrap().to_matrix().unwrap();
    check(back == m, || format!("matrix JSON {text}"))
}

/// Runs `test` on `CASES` inputs; the error names the first failure.
pub fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(config(), proptest::test_runner::TestRng::deterministic_rng(
        proptest::test_runner::RngAlgorithm::ChaCha,
    ));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// The property suites as named closures, shared with the acceptance run.
pub fn suites() -> Vec<(&'static str, Box<dyn Fn() -> Result<(), String>>)> {
    vec![
        ("ring axioms and unit division", Box::new(|| run(ring_triples(), |(r, x)| ring_axioms(r, &x)))),
        ("normal form idempotence and ideal membership", Box::new(|| run(xyz_polys(1), |p| normal_form(&p[0])))),
        (
            "evaluation agrees with the normal form on sphere points",
            Box::new(|| run((xyz_polys(1), any::<u64>()), |(p, s)| sphere_evaluation(&p[0], s))),
        ),
        (
            "divide_monic reconstruction",
            Box::new(|| run((xyz_polys(2), 1u16..=3), |(p, k)| divide_monic(&p[0], &p[1], k))),
        ),
        ("det3 alternation and multilinearity", Box::new(|| run(xyz_polys(13), |e| det_alternation(&e)))),
        ("print/parse and JSON round trips", Box::new(|| run(xyz_polys(9), |e| round_trip(&e)))),
    ]
}
