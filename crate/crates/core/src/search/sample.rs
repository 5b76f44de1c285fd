//! Points of the solution component of the gauged system, obtained from
//! witnesses on lines through a base point of `a^2+b^2+c^2+d^2 = -1`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sos::rstu_from_witness;
use crate::comb::{family_det, sigma, theorem12_to_ansatz, AnsatzPoint, Witness};
use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

pub const DIRECTION_RANGE: i64 = 50;

/// A witness `(x w, y, 0, 0)` with `d x^2 + y^2 = -1` in `Q(sqrt d)`.
pub fn base_point(ring: Ring) -> Result<[RingElem; 4]> {
    let Ring::Quadratic { d } = ring else {
        return Err(Error::Invalid(format!("{ring} is not a quadratic field")));
    };
    let w = ring.generator()?;
    if d == -1 {
        return Ok([w, ring.zero(), ring.zero(), ring.zero()]);
    }
    let bound = 30i64;
    for den in 1..=bound {
        for xn in 0..=bound {
            for yn in 0..=bound {
                let x = BigRational::new(BigInt::from(xn), BigInt::from(den));
                let y = BigRational::new(BigInt::from(yn), BigInt::from(den));
                if BigRational::from_integer(d.into()) * &x * &x + &y * &y == BigRational::from_integer((-1).into()) {
                    let xe = w.mul(&ring.from_rational(&x)?)?;
                    return Ok([xe, ring.from_rational(&y)?, ring.zero(), ring.zero()]);
                }
            }
        }
    }
    Err(Error::Invalid(format!("no sum of two squares equal to -1 found in {ring}")))
}

/// Second intersection of the line `base + lambda v` with the quadric:
/// `lambda = -2 <base, v> / <v, v>`.
pub fn line_witness(base: &[RingElem; 4], v: [i64; 4]) -> Result<Witness> {
    let ring = base[0].ring();
    let mut bv = ring.zero();
    let mut vv = ring.zero();
    for (b, &x) in base.iter().zip(&v) {
        bv = bv.add(&b.mul(&ring.int(x))?)?;
        vv = vv.add(&ring.int(x * x))?;
    }
    let lambda = ring.int(-2).mul(&bv)?.div(&vv).map_err(|_| Error::Degenerate("direction of length zero".into()))?;
    let pt: Vec<RingElem> =
        base.iter().zip(&v).map(|(b, &x)| b.add(&lambda.mul(&ring.int(x))?)).collect::<Result<_>>()?;
    let [a, b, c, d]: [RingElem; 4] = pt.try_into().unwrap();
    Witness::new(a, b, c, d)
}

/// A witness away from every degenerate locus, with its ansatz point.
pub fn admissible(w: &Witness) -> Option<AnsatzPoint> {
    if !sigma(w).is_unit() || !family_det(w).is_unit() || rstu_from_witness(w).is_err() {
        return None;
    }
    let pt = theorem12_to_ansatz(w).ok()?;
    pt.h.is_some().then_some(pt)
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub witness: Witness,
    pub point: AnsatzPoint,
}

/// `n` distinct admissible samples from directions drawn from `seed`.
pub fn sample_component(n: usize, ring: Ring, seed: u64) -> Result<Vec<Sample>> {
    let base = base_point(ring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<[RingElem; 4]> = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let mut tries = 0usize;
    while out.len() < n {
        if tries >= 100 * n.max(1) {
            return Err(Error::Degenerate(format!("only {} admissible samples after {tries} draws", out.len())));
        }
        tries += 1;
        let v: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-DIRECTION_RANGE..=DIRECTION_RANGE));
        if v == [0; 4] {
            continue;
        }
        let Ok(w) = line_witness(&base, v) else {
            continue;
        };
        if seen.contains(w.abcd()) {
            continue;
        }
        if let Some(point) = admissible(&w) {
            seen.insert(w.abcd().clone());
            out.push(Sample { witness: w, point });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::system::build_system;

    #[test]
    fn axis_direction() {
        let gi = Ring::gaussian();
        let base = base_point(gi).unwrap();
        let w = line_witness(&base, [1, 0, 0, 0]).unwrap();
        assert_eq!(w.a(), &gi.generator().unwrap().neg());
        assert!(w.b().is_zero() && w.c().is_zero() && w.d().is_zero());
    }

    #[test]
    fn samples_solve_the_system() {
        let gi = Ring::gaussian();
        let s = sample_component(40, gi, 5).unwrap();
        assert_eq!(s.len(), 40);
        let sys = build_system(true, true, true);
        for x in &s {
            assert!(x.point.gauge.base && x.point.gauge.a13);
            assert!(sys.is_solution(&x.point).unwrap());
        }
        let again = sample_component(40, gi, 5).unwrap();
        assert!(s.iter().zip(&again).all(|(a, b)| a.witness == b.witness));
    }

    #[test]
    fn stufe_two_field() {
        let r = Ring::quadratic(-2).unwrap();
        let base = base_point(r).unwrap();
        assert!(Witness::new(base[0].clone(), base[1].clone(), base[2].clone(), base[3].clone()).is_ok());
        assert_eq!(sample_component(5, r, 1).unwrap().len(), 5);
    }

    #[test]
    fn fields_without_two_squares() {
        assert!(sample_component(1, Ring::quadratic(-7).unwrap(), 0).is_err());
        assert!(sample_component(1, Ring::Rationals, 0).is_err());
    }
}
