//! Depth-first search for lifts of F2 points of the system to solutions
//! modulo `2^k`.
//!
//! A node at level `j` is a residue vector `x` mod `2^j` annihilating every
//! equation mod `2^j`. Its children are `x + 2^j e` where `e` solves
//! `q(x)/2^j + J(x) e = 0` over F2; they are visited in increasing
//! lexicographic order of `e`.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::system::QuadraticSystem;
use crate::error::{Error, Result};
use crate::poly::Poly;

pub const DEFAULT_CAP: u64 = 1 << 16;
pub const MAX_K: u32 = 64;

/// A quadratic with small integer coefficients, evaluated with wrapping
/// arithmetic modulo `2^128`.
#[derive(Clone, Debug)]
pub struct IntQuad {
    constant: i64,
    linear: Vec<(usize, i64)>,
    quad: Vec<(usize, usize, i64)>,
}

impl IntQuad {
    pub fn from_poly(p: &Poly) -> Result<IntQuad> {
        let mut q = IntQuad { constant: 0, linear: Vec::new(), quad: Vec::new() };
        for (m, c) in p.terms() {
            let r = c.as_rational().filter(|r| r.is_integer());
            let c = r
                .and_then(|r| r.numer().to_i64())
                .ok_or_else(|| Error::Invalid(format!("coefficient {c} is not a small integer")))?;
            let mut used = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    used.push(i);
                }
            }
            match used.as_slice() {
                [] => q.constant = c,
                [i] => q.linear.push((*i, c)),
                [i, j] => q.quad.push((*i, *j, c)),
                _ => return Err(Error::Invalid(format!("{p} has degree > 2"))),
            }
        }
        Ok(q)
    }

    fn wrap(c: i64) -> u128 {
        c as i128 as u128
    }

    /// `q(x) mod 2^bits` for `bits <= 128`.
    pub fn eval(&self, x: &[u64], bits: u32) -> u128 {
        let mut acc = Self::wrap(self.constant);
        for &(i, c) in &self.linear {
            acc = acc.wrapping_add(Self::wrap(c).wrapping_mul(x[i] as u128));
        }
        for &(i, j, c) in &self.quad {
            let t = (x[i] as u128).wrapping_mul(x[j] as u128);
            acc = acc.wrapping_add(Self::wrap(c).wrapping_mul(t));
        }
        if bits >= 128 {
            acc
        } else {
            acc & ((1u128 << bits) - 1)
        }
    }

    /// Gradient mod 2 as a bit mask, first variable in the highest bit.
    fn gradient_mod2(&self, x: &[u64]) -> u64 {
        let n = x.len();
        let bit = |v: usize| 1u64 << (n - 1 - v);
        let mut g = 0u64;
        for &(i, c) in &self.linear {
            if c & 1 == 1 {
                g ^= bit(i);
            }
        }
        for &(i, j, c) in &self.quad {
            if c & 1 == 0 || i == j {
                continue;
            }
            if x[j] & 1 == 1 {
                g ^= bit(i);
            }
            if x[i] & 1 == 1 {
                g ^= bit(j);
            }
        }
        g
    }
}

/// Reduced echelon form of bit vectors: distinct leading bits, each leading
/// bit cleared in every other vector. Sorted by leading bit, ascending.
fn reduced_basis(vecs: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vecs {
        let mut v = v;
        for &b in &basis {
            let lead = 63 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let lead = 63 - v.leading_zeros();
        for b in basis.iter_mut() {
            if *b >> lead & 1 == 1 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable_by_key(|b| 63 - b.leading_zeros());
    basis
}

/// Solutions of `A e = rhs` over F2 as `e0 + span(basis)`, where `e0` has
/// zeros in every leading bit of `basis`, or `None` if inconsistent.
fn solve_affine(rows: &[(u64, bool)], n: usize) -> Option<(u64, Vec<u64>)> {
    let mut piv: Vec<(u64, bool)> = Vec::new();
    for &(r, c) in rows {
        let (mut r, mut c) = (r, c);
        for &(p, pc) in &piv {
            let lead = 63 - p.leading_zeros();
            if r >> lead & 1 == 1 {
                r ^= p;
                c ^= pc;
            }
        }
        if r == 0 {
            if c {
                return None;
            }
            continue;
        }
        let lead = 63 - r.leading_zeros();
        for (p, pc) in piv.iter_mut() {
            if *p >> lead & 1 == 1 {
                *p ^= r;
                *pc ^= c;
            }
        }
        piv.push((r, c));
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let pivot_mask: u64 = piv.iter().map(|(p, _)| 1u64 << (63 - p.leading_zeros())).fold(0, |a, b| a | b);
    let mut e0 = 0u64;
    for &(p, c) in &piv {
        if c {
            e0 |= 1u64 << (63 - p.leading_zeros());
        }
    }
    let mut kernel = Vec::new();
    let mut free = all & !pivot_mask;
    while free != 0 {
        let f = 63 - free.leading_zeros();
        free &= !(1u64 << f);
        let mut v = 1u64 << f;
        for &(p, _) in &piv {
            if p >> f & 1 == 1 {
                v |= 1u64 << (63 - p.leading_zeros());
            }
        }
        kernel.push(v);
    }
    let basis = reduced_basis(&kernel);
    for b in &basis {
        let lead = 63 - b.leading_zeros();
        if e0 >> lead & 1 == 1 {
            e0 ^= b;
        }
    }
    Some((e0, basis))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftStatus {
    Reached,
    Exhausted,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub root: Vec<u8>,
    pub k: u32,
    pub status: LiftStatus,
    /// Deepest level reached; the root is level 1.
    pub reached: u32,
    /// Nodes visited per level, starting at level 1.
    pub per_level: Vec<u64>,
    pub nodes_expanded: u64,
    /// The first residue vector found at the deepest level.
    pub residues: Vec<u64>,
}

struct Frame {
    x: Vec<u64>,
    level: u32,
    e0: u64,
    basis: Vec<u64>,
    next: u64,
}

pub struct Lifter {
    polys: Vec<IntQuad>,
    n: usize,
}

impl Lifter {
    pub fn new(sys: &QuadraticSystem) -> Result<Lifter> {
        let polys = sys.polys.iter().map(IntQuad::from_poly).collect::<Result<Vec<_>>>()?;
        let n = sys.free_vars.len();
        if n > 64 {
            return Err(Error::OutOfRange(format!("{n} variables")));
        }
        Ok(Lifter { polys, n })
    }

    pub fn satisfies(&self, x: &[u64], level: u32) -> bool {
        self.polys.iter().all(|q| q.eval(x, level) == 0)
    }

    fn frame(&self, x: Vec<u64>, level: u32) -> Option<Frame> {
        let rows: Vec<(u64, bool)> =
            self.polys.iter().map(|q| (q.gradient_mod2(&x), (q.eval(&x, level + 1) >> level) & 1 == 1)).collect();
        let (e0, basis) = solve_affine(&rows, self.n)?;
        Some(Frame { x, level, e0, basis, next: 0 })
    }

    pub fn lift(&self, root: &[u8], k: u32, cap: u64) -> Result<LiftReport> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::OutOfRange(format!("k = {k} (expected 2..={MAX_K})")));
        }
        if root.len() != self.n {
            return Err(Error::OutOfRange(format!("expected {} values, got {}", self.n, root.len())));
        }
        let x: Vec<u64> = root.iter().map(|&b| (b & 1) as u64).collect();
        if !self.satisfies(&x, 1) {
            return Err(Error::Invalid("root is not a solution mod 2".into()));
        }
        let mut report = LiftReport {
            root: root.to_vec(),
            k,
            status: LiftStatus::Exhausted,
            reached: 1,
            per_level: vec![0; k as usize],
            nodes_expanded: 0,
            residues: x.clone(),
        };
        report.per_level[0] = 1;
        let mut stack: Vec<Frame> = Vec::new();
        report.nodes_expanded += 1;
        if let Some(f) = self.frame(x, 1) {
            stack.push(f);
        }
        while let Some(top) = stack.last_mut() {
            let count = 1u64 << top.basis.len();
            if top.next >= count {
                stack.pop();
                continue;
            }
            let c = top.next;
            top.next += 1;
            let mut e = top.e0;
            for (t, b) in top.basis.iter().enumerate() {
                if c >> t & 1 == 1 {
                    e ^= b;
                }
            }
            let j = top.level;
            let child: Vec<u64> =
                top.x.iter().enumerate().map(|(v, &xv)| xv + (((e >> (self.n - 1 - v)) & 1) << j)).collect();
            let level = j + 1;
            if !self.satisfies(&child, level) {
                return Err(Error::Verification(format!("lift at level {level} does not satisfy the system")));
            }
            report.per_level[level as usize - 1] += 1;
            if level > report.reached {
                report.reached = level;
                report.residues = child.clone();
            }
            if level == k {
                report.status = LiftStatus::Reached;
                return Ok(report);
            }
            if report.nodes_expanded >= cap {
                report.status = LiftStatus::Inconclusive;
                return Ok(report);
            }
            report.nodes_expanded += 1;
            if let Some(f) = self.frame(child, level) {
                stack.push(f);
            }
        }
        Ok(report)
    }
}

/// Lift every root, partitioned over `workers` threads; reports keep the order of `roots`.
pub fn lift_all(sys: &QuadraticSystem, roots: &[Vec<u8>], k: u32, cap: u64, workers: usize) -> Result<Vec<LiftReport>> {
    let lifter = Lifter::new(sys)?;
    let workers = workers.clamp(1, 64);
    let chunk = roots.len().div_ceil(workers).max(1);
    let parts: Vec<Result<Vec<LiftReport>>> = std::thread::scope(|s| {
        let handles: Vec<_> = roots
            .chunks(chunk)
            .map(|part| {
                let lifter = &lifter;
                s.spawn(move || part.iter().map(|r| lifter.lift(r, k, cap)).collect::<Result<Vec<_>>>())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(roots.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftSummary {
    pub f2_count: usize,
    pub mod4_survivors: usize,
    pub no_mod4_lift: usize,
    pub reached_k: usize,
    pub inconclusive: usize,
    pub k: u32,
}

pub fn summarize(reports: &[LiftReport], k: u32) -> LiftSummary {
    LiftSummary {
        f2_count: reports.len(),
        mod4_survivors: reports.iter().filter(|r| r.reached >= 2).count(),
        no_mod4_lift: reports.iter().filter(|r| r.reached == 1 && r.status == LiftStatus::Exhausted).count(),
        reached_k: reports.iter().filter(|r| r.status == LiftStatus::Reached).count(),
        inconclusive: reports.iter().filter(|r| r.status == LiftStatus::Inconclusive).count(),
        k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarSet;
    use crate::ring::Ring;
    use crate::search::f2::enumerate_f2;
    use crate::search::system::{build_system, QuadraticSystem};

    #[test]
    fn affine_solutions_are_lexicographic() {
        // e0 + e1 = 1 in three variables
        let rows = [(0b110u64, true)];
        let (e0, basis) = solve_affine(&rows, 3).unwrap();
        let sols: Vec<u64> = (0..1u64 << basis.len())
            .map(|c| basis.iter().enumerate().fold(e0, |e, (t, b)| if c >> t & 1 == 1 { e ^ b } else { e }))
            .collect();
        assert_eq!(sols, vec![0b010, 0b011, 0b100, 0b101]);
        assert!(solve_affine(&[(0, true)], 3).is_none());
    }

    fn toy(src: &[&str], names: &[&str]) -> QuadraticSystem {
        let mut sys = build_system(true, false, false);
        sys.free_vars = VarSet::new(names).unwrap();
        sys.polys = src.iter().map(|s| Poly::parse(s, Ring::Rationals, &sys.free_vars).unwrap()).collect();
        sys
    }

    #[test]
    fn square_root_of_minus_seven() {
        // x^2 + 7 has 2-adic roots; x = 1 lifts to every level
        let sys = toy(&["x^2 + 7"], &["x"]);
        let r = Lifter::new(&sys).unwrap().lift(&[1], 30, DEFAULT_CAP).unwrap();
        assert_eq!(r.status, LiftStatus::Reached);
        let x = r.residues[0] as u128;
        assert_eq!((x * x + 7) % (1u128 << 30), 0);
    }

    #[test]
    fn no_lift_mod_four() {
        // x^2 + 1 = 0 mod 2 at x = 1 but never mod 4
        let sys = toy(&["x^2 + 1"], &["x"]);
        let r = Lifter::new(&sys).unwrap().lift(&[1], 10, DEFAULT_CAP).unwrap();
        assert_eq!((r.status, r.reached), (LiftStatus::Exhausted, 1));
    }

    #[test]
    fn capped_search_is_inconclusive() {
        let sys = toy(&["x^2 + 7"], &["x"]);
        let r = Lifter::new(&sys).unwrap().lift(&[1], 30, 3).unwrap();
        assert_eq!(r.status, LiftStatus::Inconclusive);
    }

    #[test]
    fn gauged_system_statistics() {
        let sys = build_system(true, false, false);
        let roots = enumerate_f2(&sys, 1).unwrap();
        let reports = lift_all(&sys, &roots, 50, DEFAULT_CAP, 2).unwrap();
        let s = summarize(&reports, 50);
        assert_eq!((s.f2_count, s.mod4_survivors, s.no_mod4_lift, s.reached_k), (80, 4, 76, 4));
        let a1 = sys.free_vars.index_of("a1").unwrap();
        for r in reports.iter().filter(|r| r.reached >= 2) {
            assert_eq!(r.residues[a1] & 1, 1);
            assert!(Lifter::new(&sys).unwrap().satisfies(&r.residues, 50));
        }
    }
}
