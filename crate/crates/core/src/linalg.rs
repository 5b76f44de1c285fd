//! Dense linear algebra: exact Gaussian elimination over a field [`Ring`], and
//! a Montgomery-form prime-field variant for large evaluation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{is_prime, pow_mod, Ring, RingElem, Scalar};

/// Row-reduced echelon form of a matrix over a field.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<RingElem>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

/// Reduce `m` (rows of equal length over `ring`) to RREF.
pub fn rref(ring: Ring, m: &[Vec<RingElem>], cols: usize) -> Result<Echelon> {
    if !ring.is_field() {
        return Err(Error::Invalid(format!("{ring} is not a field")));
    }
    let mut a: Vec<Vec<Scalar>> = Vec::with_capacity(m.len());
    for row in m {
        if row.len() != cols {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        let mut r = Vec::with_capacity(cols);
        for x in row {
            if x.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), x.ring().to_string()));
            }
            r.push(x.scalar().clone());
        }
        a.push(r);
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !ring.s_is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(rank, p);
        let inv = ring.s_inv(&a[rank][c]).expect("nonzero pivot in a field");
        for x in a[rank][c..].iter_mut() {
            *x = ring.s_mul(x, &inv);
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || ring.s_is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone();
            for j in c..cols {
                if !ring.s_is_zero(&pivot_row[j]) {
                    row[j] = ring.s_sub(&row[j], &ring.s_mul(&f, &pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    a.truncate(rank);
    let rows = a.into_iter().map(|r| r.into_iter().map(|s| ring.elem(s)).collect()).collect();
    Ok(Echelon { rows, pivots, cols })
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis: one vector per free column, with a 1 in that column.
    pub fn kernel(&self, ring: Ring) -> Vec<Vec<RingElem>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![ring.zero(); self.cols];
                v[f] = ring.one();
                for (i, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = self.rows[i][f].neg();
                }
                v
            })
            .collect()
    }
}

/// Solve `a x = b`; free unknowns are set to zero. `None` if inconsistent.
pub fn solve(ring: Ring, a: &[Vec<RingElem>], b: &[RingElem], cols: usize) -> Result<Option<Vec<RingElem>>> {
    if a.len() != b.len() {
        return Err(Error::Invalid("right-hand side length".into()));
    }
    let aug: Vec<Vec<RingElem>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let e = rref(ring, &aug, cols + 1)?;
    if e.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![ring.zero(); cols];
    for (i, &pc) in e.pivots.iter().enumerate() {
        x[pc] = e.rows[i][cols].clone();
    }
    Ok(Some(x))
}

/// Arithmetic modulo an odd prime `p < 2^62` in Montgomery form.
#[derive(Clone, Copy, Debug)]
pub struct MontField {
    pub p: u64,
    neg_pinv: u64,
    r2: u64,
}

impl MontField {
    pub fn new(p: u64) -> MontField {
        assert!(p % 2 == 1 && p < 1 << 62, "Montgomery modulus must be odd and below 2^62");
        // Newton iteration for p^-1 mod 2^64
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        MontField { p, neg_pinv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn inv(&self, a: u64) -> u64 {
        // a is in Montgomery form; result too
        let plain = self.from_mont(a);
        self.to_mont(pow_mod(plain, self.p - 2, self.p))
    }
}

/// Result of a modular elimination: rank, pivot columns and kernel basis
/// (plain residues, one vector per free column with a 1 there).
#[derive(Clone, Debug)]
pub struct ModKernel {
    pub p: u64,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub kernel: Vec<Vec<u64>>,
}

/// Kernel of a matrix over `F_p` given as plain residues.
pub fn kernel_mod(rows: Vec<Vec<u64>>, cols: usize, p: u64) -> ModKernel {
    let f = MontField::new(p);
    let mut a: Vec<Vec<u64>> = rows
        .into_iter()
        .map(|r| {
            debug_assert_eq!(r.len(), cols);
            r.into_iter().map(|x| f.to_mont(x)).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pi) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, pi);
        let inv = f.inv(a[rank][c]);
        for x in a[rank][c..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let (head, tail) = a.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                if prow[j] != 0 {
                    row[j] = f.sub(row[j], f.mul(factor, prow[j]));
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    a.truncate(rank);
    // back substitution to reduced form
    for k in (0..rank).rev() {
        let c = pivots[k];
        let (head, tail) = a.split_at_mut(k);
        let prow = &tail[0];
        for row in head.iter_mut() {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                if prow[j] != 0 {
                    row[j] = f.sub(row[j], f.mul(factor, prow[j]));
                }
            }
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| pivots.binary_search(c).is_err()).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let x = f.from_mont(a[i][fc]);
                v[pc] = if x == 0 { 0 } else { p - x };
            }
            v
        })
        .collect();
    ModKernel { p, rank, pivots, kernel }
}

/// A random prime `p = 1 (mod 4)` in `[2^61, 2^62)`.
pub fn random_prime_1mod4(rng: &mut impl rand::Rng) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 61)..(1u64 << 62)) & !3 | 1;
        if c >= 1 << 61 && is_prime(c) {
            return c;
        }
    }
}

/// A square root of `-1` modulo a prime `p = 1 (mod 4)`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    assert_eq!(p % 4, 1);
    for g in 2.. {
        if pow_mod(g, (p - 1) / 2, p) == p - 1 {
            let r = pow_mod(g, (p - 1) / 4, p);
            return r.min(p - r);
        }
    }
    unreachable!()
}

/// A square root of `a` modulo an odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, (q + 1) / 2, p));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = crate::ring::mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = crate::ring::mul_mod(b, b, p);
        t = crate::ring::mul_mod(t, c, p);
        r = crate::ring::mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Combine `x = a (mod m)` with `x = b (mod p)`; returns the residue modulo `m p`.
pub fn crt_step(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let a_mod_p = a.mod_floor(&pb);
    let diff = (BigInt::from(b) - a_mod_p).mod_floor(&pb);
    let m_mod_p: u64 = m.mod_floor(&pb).try_into().expect("fits");
    let inv = pow_mod(m_mod_p, p - 2, p);
    let diff: u64 = diff.try_into().expect("fits");
    let k = crate::ring::mul_mod(diff, inv, p);
    a + m * BigInt::from(k)
}

/// Rational reconstruction of `a mod m` with numerator and denominator bounded
/// by `sqrt(m / 2)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let q = BigRational::new(r1, t1);
    // reject when the denominator shares a factor with the modulus
    if !q.denom().gcd(m).is_one() {
        return None;
    }
    Some(q)
}
