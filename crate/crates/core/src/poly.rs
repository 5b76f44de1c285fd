//! Sparse multivariate polynomials over a [`Ring`].
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], ordered graded
//! lexicographically with respect to the [`VarSet`] order, so that equal
//! polynomials compare and print identically.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::expr::{self, Expr, GENERATOR};
use crate::ring::{Ring, RingElem, Scalar};

/// Ordered list of distinct variable names.
#[derive(Clone, Debug)]
pub struct VarSet(Arc<[String]>);

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarSet {}

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<VarSet> {
        let mut seen: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || n == GENERATOR {
                return Err(Error::Invalid(format!("bad variable name `{n}`")));
            }
            if seen.iter().any(|s| s == n) {
                return Err(Error::Invalid(format!("duplicate variable `{n}`")));
            }
            seen.push(n.to_string());
        }
        if seen.len() > u16::MAX as usize {
            return Err(Error::Invalid("too many variables".into()));
        }
        Ok(VarSet(seen.into()))
    }

    pub fn empty() -> VarSet {
        VarSet(Arc::from(Vec::new()))
    }

    /// `X, Y, Z`.
    pub fn xyz() -> VarSet {
        VarSet::new(&["X", "Y", "Z"]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

/// Exponent vector. Ordered by total degree, then lexicographically with the
/// first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n].into())
    }

    pub fn from_exps(exps: Vec<u16>) -> Monomial {
        Monomial(exps.into())
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// All monomials in `n` variables of total degree `<= deg`, ascending.
    pub fn all_upto(n: usize, deg: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u16>, left: usize, budget: u32, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(Monomial::from_exps(prefix.clone()));
                return;
            }
            for e in 0..=budget {
                prefix.push(e as u16);
                rec(prefix, left - 1, budget - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, deg, &mut out);
        out.sort();
        out
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: VarSet,
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(vars: &VarSet, ring: Ring) -> Poly {
        Poly { vars: vars.clone(), ring, terms: BTreeMap::new() }
    }

    pub fn constant(vars: &VarSet, c: RingElem) -> Poly {
        let mut p = Poly::zero(vars, c.ring());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c.into_scalar());
        }
        p
    }

    pub fn one(vars: &VarSet, ring: Ring) -> Poly {
        Poly::constant(vars, ring.one())
    }

    pub fn int(vars: &VarSet, ring: Ring, n: i64) -> Poly {
        Poly::constant(vars, ring.int(n))
    }

    pub fn var(vars: &VarSet, ring: Ring, name: &str) -> Result<Poly> {
        let i = vars.require(name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Poly::monomial(vars, Monomial::from_exps(e), ring.one()))
    }

    pub fn monomial(vars: &VarSet, m: Monomial, c: RingElem) -> Poly {
        assert_eq!(m.exps().len(), vars.len(), "exponent vector length");
        let mut p = Poly::zero(vars, c.ring());
        if !c.is_zero() {
            p.terms.insert(m, c.into_scalar());
        }
        p
    }

    /// Build from `(exponents, coefficient)` pairs, summing duplicates.
    pub fn from_terms(vars: &VarSet, ring: Ring, terms: impl IntoIterator<Item = (Monomial, RingElem)>) -> Result<Poly> {
        let mut p = Poly::zero(vars, ring);
        for (m, c) in terms {
            if c.ring() != ring {
                return Err(Error::RingMismatch(ring.to_string(), c.ring().to_string()));
            }
            if m.exps().len() != vars.len() {
                return Err(Error::VarSetMismatch);
            }
            p.add_term(m, c.into_scalar());
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !self.ring.s_is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = self.ring.s_add(o.get(), &c);
                if self.ring.s_is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, RingElem)> + '_ {
        self.terms.iter().rev().map(|(m, c)| (m, self.ring.elem(c.clone())))
    }

    pub fn coeff(&self, m: &Monomial) -> RingElem {
        self.terms.get(m).map(|c| self.ring.elem(c.clone())).unwrap_or_else(|| self.ring.zero())
    }

    pub fn leading(&self) -> Option<(&Monomial, RingElem)> {
        self.terms.iter().next_back().map(|(m, c)| (m, self.ring.elem(c.clone())))
    }

    pub fn as_constant(&self) -> Option<RingElem> {
        match self.terms.len() {
            0 => Some(self.ring.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| self.ring.elem(c.clone()))
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn degree_in_name(&self, name: &str) -> Result<u16> {
        Ok(self.degree_in(self.vars.require(name)?))
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        if self.vars != other.vars {
            return Err(Error::VarSetMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.ring.s_neg(c));
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let ring = self.ring;
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ring.s_mul(ca, cb);
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(c) => *c = ring.s_add(c, &prod),
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !ring.s_is_zero(c)).collect();
        Ok(Poly { vars: self.vars.clone(), ring, terms })
    }

    pub fn scale(&self, c: &RingElem) -> Result<Poly> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), c.ring().to_string()));
        }
        let s = c.scalar();
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), self.ring.s_mul(x, s)))
            .filter(|(_, x)| !self.ring.s_is_zero(x))
            .collect();
        Ok(Poly { vars: self.vars.clone(), ring: self.ring, terms })
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.vars, self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Normal form modulo `X^2 + Y^2 + Z^2 - 1`: rewrites `Z^2 -> 1 - X^2 - Y^2`
    /// until the `Z`-degree is at most one. Other variables act as coefficients.
    pub fn sphere_normal_form(&self) -> Result<Poly> {
        let x = self.vars.require("X")?;
        let y = self.vars.require("Y")?;
        let z = self.vars.require("Z")?;
        let n = self.vars.len();
        // bucket k collects terms carrying the factor (Z^2)^k
        let mut buckets: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[z];
            let k = (e / 2) as usize;
            let mut exps = m.0.to_vec();
            exps[z] = e % 2;
            if buckets.len() <= k {
                buckets.resize(k + 1, Poly::zero(&self.vars, self.ring));
            }
            buckets[k].add_term(Monomial::from_exps(exps), c.clone());
        }
        let mut rel = Poly::one(&self.vars, self.ring);
        for v in [x, y] {
            let mut e = vec![0; n];
            e[v] = 2;
            rel.add_term(Monomial::from_exps(e), self.ring.s_neg(&self.ring.s_one()));
        }
        let mut out = Poly::zero(&self.vars, self.ring);
        let mut power = Poly::one(&self.vars, self.ring);
        for (k, b) in buckets.iter().enumerate() {
            if k > 0 {
                power = &power * &rel;
            }
            if !b.is_zero() {
                out = &out + &(b * &power);
            }
        }
        Ok(out)
    }

    /// Division by a divisor that is monic as a polynomial in `var` over the
    /// remaining variables. Returns `(quotient, remainder)` with the remainder
    /// of lower `var`-degree than the divisor.
    pub fn divide_monic(&self, divisor: &Poly, var: &str) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let v = self.vars.require(var)?;
        let n = divisor.degree_in(v);
        let lead: Vec<_> = divisor.terms.iter().filter(|(m, _)| m.0[v] == n).collect();
        let monic = lead.len() == 1 && {
            let (m, c) = lead[0];
            m.degree() == n as u32 && self.ring.s_is_one(c)
        };
        if divisor.is_zero() || !monic {
            return Err(Error::NotMonic(var.to_string()));
        }
        let mut quotient = Poly::zero(&self.vars, self.ring);
        let mut rem = self.clone();
        loop {
            let d = rem.degree_in(v);
            if rem.is_zero() || d < n {
                break;
            }
            let mut top = Poly::zero(&self.vars, self.ring);
            for (m, c) in rem.terms.iter().filter(|(m, _)| m.0[v] == d) {
                let mut e = m.0.to_vec();
                e[v] -= n;
                top.terms.insert(Monomial::from_exps(e), c.clone());
            }
            rem = &rem - &(&top * divisor);
            quotient = &quotient + &top;
        }
        Ok((quotient, rem))
    }

    /// Simultaneous substitution of variables by polynomials over `target`.
    /// Unassigned variables that occur in `self` must exist in `target`.
    pub fn substitute(&self, assignment: &[(&str, Poly)], target: &VarSet) -> Result<Poly> {
        let mut images: Vec<Option<Poly>> = vec![None; self.vars.len()];
        for (name, p) in assignment {
            let i = self.vars.require(name)?;
            if p.ring != self.ring {
                return Err(Error::RingMismatch(self.ring.to_string(), p.ring.to_string()));
            }
            if p.vars != *target {
                return Err(Error::VarSetMismatch);
            }
            images[i] = Some(p.clone());
        }
        for (i, img) in images.iter_mut().enumerate() {
            if img.is_none() && self.degree_in(i) > 0 {
                let name = &self.vars.0[i];
                *img = Some(Poly::var(target, self.ring, name)?);
            }
        }
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|_| vec![Poly::one(target, self.ring)])
            .collect();
        let mut out = Poly::zero(target, self.ring);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, self.ring.elem(c.clone()));
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let img = images[i].as_ref().expect("image exists for used variable");
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * img;
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Evaluate at a point given by name. Every variable occurring in `self`
    /// must be assigned.
    pub fn evaluate(&self, point: &[(&str, RingElem)]) -> Result<RingElem> {
        let mut vals: Vec<Option<&RingElem>> = vec![None; self.vars.len()];
        for (name, v) in point {
            if v.ring() != self.ring {
                return Err(Error::RingMismatch(self.ring.to_string(), v.ring().to_string()));
            }
            if let Some(i) = self.vars.index_of(name) {
                vals[i] = Some(v);
            }
        }
        for (i, v) in vals.iter().enumerate() {
            if v.is_none() && self.degree_in(i) > 0 {
                return Err(Error::MissingAssignment(self.vars.0[i].clone()));
            }
        }
        let one = self.ring.one();
        let full: Vec<RingElem> = vals.into_iter().map(|v| v.unwrap_or(&one).clone()).collect();
        self.eval_slice(&full)
    }

    /// Evaluate at values listed in `VarSet` order.
    pub fn eval_slice(&self, values: &[RingElem]) -> Result<RingElem> {
        if values.len() != self.vars.len() {
            return Err(Error::VarSetMismatch);
        }
        if let Some(v) = values.iter().find(|v| v.ring() != self.ring) {
            return Err(Error::RingMismatch(self.ring.to_string(), v.ring().to_string()));
        }
        let r = self.ring;
        let mut powers: Vec<Vec<Scalar>> = values.iter().map(|v| vec![r.s_one(), v.scalar().clone()]).collect();
        let mut acc = r.s_zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = r.s_mul(powers[i].last().unwrap(), &powers[i][1]);
                    powers[i].push(next);
                }
                t = r.s_mul(&t, &powers[i][e as usize]);
            }
            acc = r.s_add(&acc, &t);
        }
        Ok(r.elem(acc))
    }

    /// Re-express over another variable set containing every variable in use.
    pub fn with_vars(&self, target: &VarSet) -> Result<Poly> {
        let map: Vec<Option<usize>> = self.vars.0.iter().map(|n| target.index_of(n)).collect();
        let mut out = Poly::zero(target, self.ring);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    let j = map[i].ok_or_else(|| Error::UnknownVariable(self.vars.0[i].clone()))?;
                    e[j] = k;
                }
            }
            out.terms.insert(Monomial::from_exps(e), c.clone());
        }
        Ok(out)
    }

    /// Map rational (or integer) coefficients into another ring.
    pub fn to_ring(&self, target: Ring) -> Result<Poly> {
        if target == self.ring {
            return Ok(self.clone());
        }
        let mut out = Poly::zero(&self.vars, target);
        for (m, c) in &self.terms {
            let q = self
                .ring
                .elem(c.clone())
                .as_rational()
                .ok_or_else(|| Error::RingMismatch(self.ring.to_string(), target.to_string()))?;
            out.add_term(m.clone(), target.from_rational(&q)?.into_scalar());
        }
        Ok(out)
    }

    /// Split into coefficients with respect to the variables `split`
    /// (indices into the own `VarSet`). Keys are exponent vectors in `split`
    /// order; values keep the full variable set with those variables removed.
    pub fn coefficients_in(&self, split: &[usize]) -> BTreeMap<Vec<u16>, Poly> {
        let mut out: BTreeMap<Vec<u16>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u16> = split.iter().map(|&i| m.0[i]).collect();
            let mut e = m.0.to_vec();
            for &i in split {
                e[i] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Poly::zero(&self.vars, self.ring))
                .add_term(Monomial::from_exps(e), c.clone());
        }
        out
    }

    /// Coefficients divided by their common content, with positive leading
    /// coefficient. Only for polynomials with rational coefficients.
    pub fn primitive_part(&self) -> Result<Poly> {
        use num_integer::Integer;
        let mut num_gcd = BigInt::from(0);
        let mut den_lcm = BigInt::from(1);
        for c in self.terms.values() {
            let q = self.ring.elem(c.clone()).as_rational().ok_or_else(|| {
                Error::Invalid("primitive part needs rational coefficients".into())
            })?;
            num_gcd = num_gcd.gcd(q.numer());
            den_lcm = den_lcm.lcm(q.denom());
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let lead_neg = self.leading().unwrap().1.as_rational().unwrap().is_negative();
        let factor = if lead_neg { -den_lcm } else { den_lcm };
        let scale = self.ring.rational(&factor, &num_gcd)?;
        self.scale(&scale)
    }

    pub fn parse(src: &str, ring: Ring, vars: &VarSet) -> Result<Poly> {
        let e = expr::parse(src)?;
        Poly::from_expr(&e, ring, vars)
    }

    /// Parse with the variable set taken from the expression (first-appearance order).
    pub fn parse_auto(src: &str, ring: Ring) -> Result<Poly> {
        let e = expr::parse(src)?;
        let vars = VarSet::new(&e.variables())?;
        Poly::from_expr(&e, ring, &vars)
    }

    pub fn from_expr(e: &Expr, ring: Ring, vars: &VarSet) -> Result<Poly> {
        Ok(match e {
            Expr::Rational { num, den } => {
                let c = ring.rational(&BigInt::from(num.clone()), &BigInt::from(den.clone()))?;
                Poly::constant(vars, c)
            }
            Expr::Power { name, exp } => {
                if let Some(i) = vars.index_of(name) {
                    let mut ex = vec![0; vars.len()];
                    ex[i] = u16::try_from(*exp).map_err(|_| Error::OutOfRange(format!("exponent {exp}")))?;
                    Poly::monomial(vars, Monomial::from_exps(ex), ring.one())
                } else if name == GENERATOR {
                    Poly::constant(vars, ring.generator()?.pow(*exp))
                } else {
                    return Err(Error::UnknownVariable(name.clone()));
                }
            }
            Expr::Product(fs) => {
                let mut acc = Poly::one(vars, ring);
                for f in fs {
                    acc = &acc * &Poly::from_expr(f, ring, vars)?;
                }
                acc
            }
            Expr::Sum(ts) => {
                let mut acc = Poly::zero(vars, ring);
                for (neg, t) in ts {
                    let p = Poly::from_expr(t, ring, vars)?;
                    acc = if *neg { &acc - &p } else { &acc + &p };
                }
                acc
            }
        })
    }
}

/// Evaluate a variable-free expression in `ring`.
pub fn ring_eval(src: &str, ring: Ring) -> Result<RingElem> {
    let e = expr::parse(src)?;
    if let Some(v) = e.variables().into_iter().next() {
        return Err(Error::NotConstant(v));
    }
    let p = Poly::from_expr(&e, ring, &VarSet::empty())?;
    Ok(p.as_constant().expect("no variables"))
}

macro_rules! poly_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a Poly> for &'a Poly {
            type Output = Poly;

            /// Panics on ring or variable-set mismatch.
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$checked(rhs).expect("polynomial operands must share ring and variables")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.ring.s_neg(c))).collect();
        Poly { vars: self.vars.clone(), ring: self.ring, terms }
    }
}

struct CoeffFmt<'a>(Ring, &'a Scalar);

impl fmt::Display for CoeffFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.s_fmt(self.1, f)
    }
}

/// Split a coefficient into (negative?, magnitude) for printing.
fn sign_split(ring: Ring, c: &Scalar) -> (bool, Scalar) {
    let neg = match c {
        Scalar::Rat(q) => q.is_negative(),
        Scalar::Quad(x, y) => {
            use num_traits::Zero;
            (x.is_zero() && y.is_negative()) || (y.is_zero() && x.is_negative())
        }
        _ => false,
    };
    if neg {
        (true, ring.s_neg(c))
    } else {
        (false, c.clone())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = sign_split(self.ring, c);
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let compound = self.ring.s_is_compound(&mag);
            if m.is_one() {
                if compound && idx > 0 {
                    write!(f, "({})", CoeffFmt(self.ring, &mag))?;
                } else {
                    write!(f, "{}", CoeffFmt(self.ring, &mag))?;
                }
                continue;
            }
            if !self.ring.s_is_one(&mag) {
                if compound {
                    write!(f, "({})*", CoeffFmt(self.ring, &mag))?;
                } else {
                    write!(f, "{}*", CoeffFmt(self.ring, &mag))?;
                }
            }
            let mut first = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(&self.vars.0[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// A quotient `num / den` of polynomials, used only to clear denominators.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: Poly,
    pub den: Poly,
}

impl Frac {
    pub fn new(num: Poly, den: Poly) -> Result<Frac> {
        num.check(&den)?;
        if den.is_zero() {
            return Err(Error::NotUnit("0".into()));
        }
        Ok(Frac { num, den })
    }

    pub fn from_poly(p: Poly) -> Frac {
        let den = Poly::one(p.vars(), p.ring());
        Frac { num: p, den }
    }

    /// `a/b == c/d` as rational functions.
    pub fn same_as(&self, other: &Frac) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Poly {
    /// Substitute rational functions for variables. The result has denominator
    /// `prod den_i^(deg_i)` where `deg_i` is the degree of `self` in variable `i`.
    pub fn substitute_fractions(&self, assignment: &[(&str, Frac)], target: &VarSet) -> Result<Frac> {
        let ring = self.ring;
        let mut images: Vec<Option<&Frac>> = vec![None; self.vars.len()];
        for (name, fr) in assignment {
            let i = self.vars.require(name)?;
            if fr.num.ring != ring || fr.den.ring != ring {
                return Err(Error::RingMismatch(ring.to_string(), fr.num.ring.to_string()));
            }
            if fr.num.vars != *target || fr.den.vars != *target {
                return Err(Error::VarSetMismatch);
            }
            images[i] = Some(fr);
        }
        let degs: Vec<u16> = (0..self.vars.len()).map(|i| self.degree_in(i)).collect();
        let mut den = Poly::one(target, ring);
        let mut num_sub: Vec<(&str, Poly)> = Vec::new();
        let mut scaled: Vec<Poly> = Vec::new();
        for (i, img) in images.iter().enumerate() {
            if let Some(fr) = img {
                den = &den * &fr.den.pow(degs[i] as u32);
                num_sub.push((self.vars.0[i].as_str(), fr.num.clone()));
                scaled.push(fr.den.clone());
            }
        }
        // homogenise each term: x_i^e -> num_i^e * den_i^(deg_i - e)
        let mut out = Poly::zero(target, ring);
        let idx: Vec<usize> = images.iter().enumerate().filter(|(_, f)| f.is_some()).map(|(i, _)| i).collect();
        let mut cache: HashMap<(usize, u16), Poly> = HashMap::new();
        for (m, c) in &self.terms {
            let mut rest = m.0.to_vec();
            let mut factor = Poly::constant(target, ring.elem(c.clone()));
            for (k, &i) in idx.iter().enumerate() {
                let e = m.0[i];
                rest[i] = 0;
                let key = (i, e);
                if !cache.contains_key(&key) {
                    let v = &num_sub[k].1.pow(e as u32) * &scaled[k].pow((degs[i] - e) as u32);
                    cache.insert(key, v);
                }
                factor = &factor * &cache[&key];
            }
            let residual = Poly { vars: self.vars.clone(), ring, terms: [(Monomial::from_exps(rest), ring.s_one())].into() };
            let residual = residual.substitute(&[], target)?;
            out = &out + &(&factor * &residual);
        }
        Ok(Frac { num: out, den })
    }
}
