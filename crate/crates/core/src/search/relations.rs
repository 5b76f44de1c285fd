//! Polynomial relations of bounded degree vanishing on a set of sample points,
//! computed as the kernel of an evaluation matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sos::{f_poly, rstu_vars};
use crate::comb::AnsatzPoint;
use crate::error::{Error, Result};
use crate::linalg::{self, crt_step, kernel_mod, random_prime_1mod4, rational_reconstruct};
use crate::poly::{Frac, Monomial, Poly, VarSet};
use crate::ring::{Ring, RingElem};

pub const CONSENSUS_PRIMES: usize = 3;

/// The nine coordinates `a14, a16 .. a23` of the gauged ansatz.
pub const GAUGE_COORDS: [&str; 9] = ["a14", "a16", "a17", "a18", "a19", "a20", "a21", "a22", "a23"];

pub const F_COORDS: [&str; 4] = ["a14", "a17", "a21", "a22"];

pub const F_DEGREE: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    Exact,
    Modular,
}

#[derive(Clone, Debug)]
pub struct RelationBasis {
    pub degree: u32,
    pub vars: VarSet,
    /// Over the sample ring in exact mode, over `F_p` for the first prime otherwise.
    pub basis: Vec<Poly>,
    pub dimension: usize,
    pub monomials: usize,
    pub samples: usize,
    /// `(p, kernel dimension mod p)` for each prime used.
    pub prime_dims: Vec<(u64, usize)>,
    pub mode: KernelMode,
}

/// Coordinates of ansatz points in the order of `names`.
pub fn project(points: &[AnsatzPoint], names: &[&str]) -> Result<Vec<Vec<RingElem>>> {
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            n.strip_prefix('a')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k < 24)
                .ok_or_else(|| Error::UnknownVariable(n.to_string()))
        })
        .collect::<Result<_>>()?;
    Ok(points.iter().map(|p| idx.iter().map(|&i| p.values[i].clone()).collect()).collect())
}

/// Primes `p = 1 (mod 4)` with a square root of the field generator's square.
fn modular_primes(ring: Ring, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(u64, u64)>> {
    let d = match ring {
        Ring::Rationals => None,
        Ring::Quadratic { d } => Some(d),
        _ => return Err(Error::Invalid(format!("modular kernels need Q or a quadratic field, got {ring}"))),
    };
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(count);
    while out.len() < count {
        let p = random_prime_1mod4(rng);
        if out.iter().any(|&(q, _)| q == p) {
            continue;
        }
        let root = match d {
            None => 0,
            Some(d) => match linalg::sqrt_mod(d.rem_euclid(p as i64) as u64, p) {
                Some(r) => r,
                None => continue,
            },
        };
        out.push((p, root));
    }
    Ok(out)
}

fn power_table<T: Clone>(vals: &[T], degree: u32, one: T, mul: impl Fn(&T, &T) -> T) -> Vec<Vec<T>> {
    vals.iter()
        .map(|v| {
            let mut row = vec![one.clone()];
            for e in 1..=degree as usize {
                row.push(mul(&row[e - 1], v));
            }
            row
        })
        .collect()
}

fn eval_row_mod(sample: &[u64], monos: &[Monomial], degree: u32, p: u64) -> Vec<u64> {
    let pw = power_table(sample, degree, 1u64, |a, b| crate::ring::mul_mod(*a, *b, p));
    monos
        .iter()
        .map(|m| {
            m.exps()
                .iter()
                .enumerate()
                .fold(1u64, |acc, (i, &e)| if e == 0 { acc } else { crate::ring::mul_mod(acc, pw[i][e as usize], p) })
        })
        .collect()
}

fn eval_row_exact(sample: &[RingElem], monos: &[Monomial], degree: u32) -> Result<Vec<RingElem>> {
    let ring = sample[0].ring();
    let pw = power_table(sample, degree, ring.one(), |a, b| a.mul(b).unwrap());
    monos
        .iter()
        .map(|m| {
            m.exps().iter().enumerate().try_fold(ring.one(), |acc, (i, &e)| acc.mul(&pw[i][e as usize]))
        })
        .collect()
}

fn reduce_samples(samples: &[Vec<RingElem>], p: u64, root: u64) -> Option<Vec<Vec<u64>>> {
    samples.iter().map(|s| s.iter().map(|x| x.reduce_mod(p, root)).collect()).collect()
}

fn dot_mod(row: &[u64], v: &[u64], p: u64) -> u64 {
    row.iter().zip(v).fold(0u64, |acc, (&a, &b)| {
        ((acc as u128 + crate::ring::mul_mod(a, b, p) as u128) % p as u128) as u64
    })
}

/// Kernel of the evaluation matrix modulo `p`. Eliminates a leading block of
/// rows first and confirms the result against the remaining rows.
fn modular_kernel(reduced: &[Vec<u64>], monos: &[Monomial], degree: u32, p: u64) -> Vec<Vec<u64>> {
    let cols = monos.len();
    let rows: Vec<Vec<u64>> = reduced.iter().map(|s| eval_row_mod(s, monos, degree, p)).collect();
    let head = rows.len().min(cols + cols / 4 + 20);
    let k = kernel_mod(rows[..head].to_vec(), cols, p);
    let confirmed = k.kernel.iter().all(|v| rows[head..].iter().all(|r| dot_mod(r, v, p) == 0));
    if confirmed {
        k.kernel
    } else {
        kernel_mod(rows, cols, p).kernel
    }
}

fn check_samples(vars: &VarSet, samples: &[Vec<RingElem>], degree: u32) -> Result<(Ring, Vec<Monomial>)> {
    let monos = Monomial::all_upto(vars.len(), degree);
    if samples.len() < 2 * monos.len() {
        return Err(Error::OutOfRange(format!(
            "{} samples for {} monomials (need at least {})",
            samples.len(),
            monos.len(),
            2 * monos.len()
        )));
    }
    let ring = samples[0].first().ok_or_else(|| Error::Invalid("empty sample".into()))?.ring();
    if samples.iter().any(|s| s.len() != vars.len() || s.iter().any(|x| x.ring() != ring)) {
        return Err(Error::Invalid("samples must share one ring and have one value per variable".into()));
    }
    Ok((ring, monos))
}

pub fn find_vanishing(
    vars: &VarSet,
    samples: &[Vec<RingElem>],
    degree: u32,
    mode: KernelMode,
    seed: u64,
) -> Result<RelationBasis> {
    let (ring, monos) = check_samples(vars, samples, degree)?;
    let exact = |prime_dims: Vec<(u64, usize)>| -> Result<RelationBasis> {
        let rows: Vec<Vec<RingElem>> =
            samples.iter().map(|s| eval_row_exact(s, &monos, degree)).collect::<Result<_>>()?;
        let ech = linalg::rref(ring, &rows, monos.len())?;
        let basis: Vec<Poly> = ech
            .kernel(ring)
            .into_iter()
            .map(|v| Poly::from_terms(vars, ring, monos.iter().cloned().zip(v)))
            .collect::<Result<_>>()?;
        Ok(RelationBasis {
            degree,
            vars: vars.clone(),
            dimension: basis.len(),
            basis,
            monomials: monos.len(),
            samples: samples.len(),
            prime_dims,
            mode: KernelMode::Exact,
        })
    };
    if mode == KernelMode::Exact {
        return exact(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prime_dims = Vec::new();
    let mut first: Option<(u64, Vec<Vec<u64>>)> = None;
    while prime_dims.len() < CONSENSUS_PRIMES {
        let (p, root) = modular_primes(ring, 1, &mut rng)?[0];
        if prime_dims.iter().any(|&(q, _)| q == p) {
            continue;
        }
        let Some(reduced) = reduce_samples(samples, p, root) else {
            continue;
        };
        let k = modular_kernel(&reduced, &monos, degree, p);
        prime_dims.push((p, k.len()));
        first.get_or_insert((p, k));
    }
    if prime_dims.iter().any(|&(_, d)| d != prime_dims[0].1) {
        return exact(prime_dims);
    }
    let (p, kernel) = first.unwrap();
    let fp = Ring::prime_field(p)?;
    let basis: Vec<Poly> = kernel
        .into_iter()
        .map(|v| Poly::from_terms(vars, fp, monos.iter().cloned().zip(v.into_iter().map(|x| residue(fp, x)))))
        .collect::<Result<_>>()?;
    Ok(RelationBasis {
        degree,
        vars: vars.clone(),
        dimension: basis.len(),
        basis,
        monomials: monos.len(),
        samples: samples.len(),
        prime_dims,
        mode: KernelMode::Modular,
    })
}

fn residue(fp: Ring, x: u64) -> RingElem {
    fp.from_bigint(&BigInt::from(x))
}

/// Whether every basis polynomial vanishes at every point. Points are reduced
/// into the basis ring when it is a prime field.
pub fn vanishes_on(basis: &RelationBasis, points: &[Vec<RingElem>]) -> Result<bool> {
    for poly in &basis.basis {
        for pt in points {
            let v = match poly.ring() {
                Ring::PrimeField { p } => {
                    let root = match pt[0].ring() {
                        Ring::Quadratic { d } => linalg::sqrt_mod(d.rem_euclid(p as i64) as u64, p)
                            .ok_or_else(|| Error::Invalid(format!("{d} is not a square mod {p}")))?,
                        _ => 0,
                    };
                    let vals: Vec<RingElem> = pt
                        .iter()
                        .map(|x| x.reduce_mod(p, root).map(|r| residue(poly.ring(), r)))
                        .collect::<Option<_>>()
                        .ok_or_else(|| Error::Invalid("sample not integral at p".into()))?;
                    poly.eval_slice(&vals)?
                }
                _ => poly.eval_slice(pt)?,
            };
            if !v.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct RecoveredF {
    /// Content 1, positive leading coefficient, in `a14, a17, a21, a22`.
    pub f: Poly,
    pub degrees: Vec<u16>,
    pub total_degree: u32,
    pub primes: usize,
    pub verified_samples: usize,
}

pub fn f_vars() -> VarSet {
    VarSet::new(&F_COORDS).unwrap()
}

fn normalized_kernel_vector(kernel: Vec<Vec<u64>>, p: u64) -> Result<(usize, Vec<u64>)> {
    match kernel.len() {
        0 => Err(Error::Verification("no relation of degree <= 10 vanishes on the samples".into())),
        1 => {
            let mut v = kernel.into_iter().next().unwrap();
            let i0 = v.iter().position(|&x| x != 0).unwrap();
            let inv = crate::ring::pow_mod(v[i0], p - 2, p);
            for x in v.iter_mut() {
                *x = crate::ring::mul_mod(*x, inv, p);
            }
            Ok((i0, v))
        }
        n => Err(Error::Verification(format!("relation space of dimension {n}, expected 1"))),
    }
}

/// The unique degree-10 relation among `a14, a17, a21, a22`, reconstructed
/// over `Q` by Chinese remaindering and verified on exact samples.
pub fn recover_f(points: &[AnsatzPoint], seed: u64) -> Result<RecoveredF> {
    let vars = f_vars();
    let samples = project(points, &F_COORDS)?;
    let (ring, monos) = check_samples(&vars, &samples, F_DEGREE)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc: Option<(usize, Vec<BigInt>, BigInt)> = None;
    let mut previous: Option<Vec<BigRational>> = None;
    let mut primes = 0;
    for _ in 0..64 {
        let (p, root) = modular_primes(ring, 1, &mut rng)?[0];
        let Some(reduced) = reduce_samples(&samples, p, root) else {
            continue;
        };
        let (i0, v) = normalized_kernel_vector(modular_kernel(&reduced, &monos, F_DEGREE, p), p)?;
        primes += 1;
        let (lead, coeffs, modulus) = match acc.take() {
            None => (i0, v.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(p)),
            Some((lead, coeffs, m)) if lead == i0 => {
                let c: Vec<BigInt> = coeffs.iter().zip(&v).map(|(a, &b)| crt_step(a, &m, b, p)).collect();
                (lead, c, m * BigInt::from(p))
            }
            Some(prev) => {
                acc = Some(prev);
                continue;
            }
        };
        let rec: Option<Vec<BigRational>> = coeffs.iter().map(|a| rational_reconstruct(a, &modulus)).collect();
        acc = Some((lead, coeffs, modulus));
        let Some(rec) = rec else {
            continue;
        };
        if previous.as_ref() != Some(&rec) {
            previous = Some(rec);
            continue;
        }
        let q = Ring::Rationals;
        let f = Poly::from_terms(&vars, q, monos.iter().cloned().zip(rec.iter().map(|c| q.from_rational(c).unwrap())))?;
        let f = f.primitive_part()?;
        let check = f.to_ring(ring)?;
        let take = samples.len().min(40);
        if samples[..take].iter().all(|s| check.eval_slice(s).map(|v| v.is_zero()).unwrap_or(false)) {
            let degrees = (0..vars.len()).map(|i| f.degree_in(i)).collect();
            let total_degree = f.total_degree().unwrap_or(0);
            return Ok(RecoveredF { f, degrees, total_degree, primes, verified_samples: take });
        }
        previous = None;
    }
    Err(Error::Verification("rational reconstruction did not stabilise".into()))
}

/// `a14 = r(4s^2 + t^2 - 4s(2s-u) + (2s-u)^2)/t, a17 = s, a21 = t/3, a22 = 2s - u`.
pub fn f_substitution() -> [(&'static str, Frac); 4] {
    let v = rstu_vars();
    let p = |s: &str| Poly::parse(s, Ring::Rationals, &v).unwrap();
    let a22 = p("2*s - u");
    let inner = &(&p("4*s^2 + t^2") - &(&p("4*s") * &a22)) + &a22.pow(2);
    [
        ("a14", Frac::new(&p("r") * &inner, p("t")).unwrap()),
        ("a17", Frac::from_poly(p("s"))),
        ("a21", Frac::new(p("t"), p("3")).unwrap()),
        ("a22", Frac::from_poly(a22)),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct SubstitutionReport {
    /// `f(subst) = ratio * (t^2+u^2)^2 F` as rational functions.
    pub proportional: bool,
    pub ratio: Option<String>,
}

pub fn check_substitution(f: &Poly) -> Result<SubstitutionReport> {
    let v = rstu_vars();
    let sub = f.with_vars(&f_vars())?.substitute_fractions(&f_substitution(), &v)?;
    let target = &Poly::parse("t^2 + u^2", Ring::Rationals, &v)?.pow(2) * &f_poly();
    let lhs = sub.num;
    let rhs = &target * &sub.den;
    let (Some((_, a)), Some((_, b))) = (lhs.leading(), rhs.leading()) else {
        return Ok(SubstitutionReport { proportional: false, ratio: None });
    };
    let ratio = a.div(&b)?;
    let proportional = lhs == rhs.scale(&ratio)?;
    Ok(SubstitutionReport { proportional, ratio: proportional.then(|| ratio.to_string()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_relation() {
        let q = Ring::Rationals;
        let vars = VarSet::new(&["x", "y"]).unwrap();
        // stereographic points on x^2 + y^2 = 1
        let pts: Vec<Vec<RingElem>> = (1..=40)
            .map(|k| {
                let t = q.rational(&BigInt::from(k), &BigInt::from(7)).unwrap();
                let den = t.mul(&t).unwrap().add(&q.one()).unwrap();
                let x = q.int(2).mul(&t).unwrap().div(&den).unwrap();
                let y = t.mul(&t).unwrap().sub(&q.one()).unwrap().div(&den).unwrap();
                vec![x, y]
            })
            .collect();
        let circle_poly = Poly::parse("x^2 + y^2 - 1", q, &vars).unwrap();
        for mode in [KernelMode::Exact, KernelMode::Modular] {
            let b = find_vanishing(&vars, &pts, 2, mode, 0).unwrap();
            assert_eq!(b.dimension, 1);
            assert!(vanishes_on(&b, &pts).unwrap());
            if mode == KernelMode::Exact {
                let mut r = b.basis[0].clone();
                let lc = r.coeff(&Monomial::from_exps(vec![2, 0]));
                r = r.scale(&lc.inv().unwrap()).unwrap();
                assert_eq!(r, circle_poly);
            }
        }
        assert!(find_vanishing(&vars, &pts[..11], 2, KernelMode::Exact, 0).is_err());
    }

    #[test]
    fn substitution_image_of_reference() {
        let vars = f_vars();
        let f = Poly::parse("a14*a17 - a21", Ring::Rationals, &vars).unwrap();
        let r = check_substitution(&f);
        assert!(!r.as_ref().expect("checked").proportional, "{r:?}");
    }
}
