//! Exhaustive solution of the gauged system over F2.
//!
//! An assignment is a bit vector whose most significant bit is the first free
//! variable, so increasing integers are increasing in lexicographic order.

use num_integer::Integer;

use super::system::QuadraticSystem;
use crate::error::{Error, Result};
use crate::poly::Poly;

pub const F2_VARS: usize = 20;

/// A quadratic over F2 as `c + sum_{i in x} parity(x & mask_i)`, using `x_i^2 = x_i`.
#[derive(Clone, Debug)]
pub struct F2Poly {
    constant: bool,
    masks: Vec<u64>,
}

fn odd(c: &crate::ring::RingElem) -> Result<bool> {
    let q = c.as_rational().ok_or_else(|| Error::Invalid("integer coefficients expected".into()))?;
    if !q.is_integer() {
        return Err(Error::Invalid(format!("non-integral coefficient {q}")));
    }
    Ok(q.numer().is_odd())
}

impl F2Poly {
    pub fn from_poly(p: &Poly) -> Result<F2Poly> {
        let n = p.vars().len();
        if n > 64 {
            return Err(Error::OutOfRange(format!("{n} variables")));
        }
        let bit = |v: usize| 1u64 << (n - 1 - v);
        let mut f = F2Poly { constant: false, masks: vec![0; n] };
        for (m, c) in p.terms() {
            if !odd(&c)? {
                continue;
            }
            let used: Vec<usize> = (0..n).filter(|&i| m.exps()[i] > 0).collect();
            match used.as_slice() {
                [] => f.constant ^= true,
                [i] => f.masks[*i] ^= bit(*i),
                [i, j] => f.masks[*i] ^= bit(*j),
                _ => return Err(Error::Invalid(format!("{p} has degree > 2"))),
            }
        }
        Ok(f)
    }

    pub fn eval(&self, x: u64) -> bool {
        let n = self.masks.len();
        let mut acc = self.constant;
        let mut rest = x;
        while rest != 0 {
            let b = 63 - rest.leading_zeros() as usize;
            rest &= !(1u64 << b);
            acc ^= (x & self.masks[n - 1 - b]).count_ones() & 1 == 1;
        }
        acc
    }
}

pub fn compile(sys: &QuadraticSystem) -> Result<Vec<F2Poly>> {
    sys.polys.iter().map(F2Poly::from_poly).collect()
}

pub fn to_values(x: u64, n: usize) -> Vec<u8> {
    (0..n).map(|v| ((x >> (n - 1 - v)) & 1) as u8).collect()
}

pub fn from_values(values: &[u8]) -> u64 {
    values.iter().fold(0u64, |acc, &b| (acc << 1) | (b & 1) as u64)
}

fn scan(polys: &[F2Poly], range: std::ops::Range<u64>) -> Vec<u64> {
    range.filter(|&x| polys.iter().all(|p| !p.eval(x))).collect()
}

/// All F2 points of the gauged system (20 free variables), in lexicographic
/// order. The result does not depend on `workers`.
pub fn enumerate_f2(sys: &QuadraticSystem, workers: usize) -> Result<Vec<Vec<u8>>> {
    let n = sys.free_vars.len();
    if n != F2_VARS || !sys.gauge.base || sys.gauge.a13 || sys.slack {
        return Err(Error::Invalid(format!(
            "F2 enumeration needs the base gauge with a13 free ({F2_VARS} variables), got {n}"
        )));
    }
    let polys = compile(sys)?;
    let total = 1u64 << n;
    let workers = workers.clamp(1, 64) as u64;
    let chunk = total.div_ceil(workers);
    let parts: Vec<Vec<u64>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let polys = &polys;
                let lo = (w * chunk).min(total);
                let hi = ((w + 1) * chunk).min(total);
                s.spawn(move || scan(polys, lo..hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut sols: Vec<u64> = parts.into_iter().flatten().collect();
    sols.sort_unstable();
    Ok(sols.into_iter().map(|x| to_values(x, n)).collect())
}

/// Evaluate a polynomial with integer coefficients modulo 2.
pub fn eval_mod2(p: &Poly, values: &[u8]) -> Result<bool> {
    let mut acc = false;
    for (m, c) in p.terms() {
        if !odd(&c)? {
            continue;
        }
        let on = m.exps().iter().zip(values).all(|(&e, &v)| e == 0 || v & 1 == 1);
        acc ^= on;
    }
    Ok(acc)
}

pub fn is_zero_mod2(p: &Poly, values: &[u8]) -> Result<bool> {
    Ok(!eval_mod2(p, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;
    use crate::ring::Ring;
    use crate::search::system::{build_system, ANCHOR};

    #[test]
    fn compiled_evaluation_matches_direct() {
        let vars = VarSet::new(&["p", "q", "r"]).unwrap();
        let p = Poly::parse("p*q + 3*q^2 + r + 2*p*r + 1", Ring::Rationals, &vars).unwrap();
        let f = F2Poly::from_poly(&p).unwrap();
        for x in 0..8u64 {
            let v = to_values(x, 3);
            assert_eq!(f.eval(x), eval_mod2(&p, &v).unwrap(), "{v:?}");
            assert_eq!(from_values(&v), x);
        }
    }

    #[test]
    fn eighty_points() {
        let sys = build_system(true, false, false);
        let sols = enumerate_f2(&sys, 1).unwrap();
        assert_eq!(sols.len(), 80);
        assert!(sols.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sols, enumerate_f2(&sys, 7).unwrap());
        let anchor = sys.reduce_by_gauge(&Poly::parse(ANCHOR, Ring::Rationals, &crate::search::system::ansatz_vars()).unwrap()).unwrap();
        for s in &sols {
            for p in &sys.polys {
                assert!(is_zero_mod2(p, s).unwrap());
            }
            assert!(is_zero_mod2(&anchor, s).unwrap());
        }
    }

    #[test]
    fn wrong_variable_count() {
        assert!(enumerate_f2(&build_system(true, true, false), 1).is_err());
        assert!(enumerate_f2(&build_system(false, false, false), 1).is_err());
    }
}
