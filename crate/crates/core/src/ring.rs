//! Exact coefficient rings: the rationals, quadratic fields `Q(sqrt d)`,
//! prime fields and residues modulo prime powers.
//!
//! A [`Ring`] is a small `Copy` descriptor. Elements carry their ring so that
//! mixing rings is caught at runtime; polynomials store the ring once and keep
//! bare [`Scalar`] values internally.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Descriptor of a coefficient ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    /// `Q(w)` with `w^2 = d`, `d` square-free and not 0 or 1.
    Quadratic { d: i64 },
    /// `F_p`, `p < 2^63`.
    PrimeField { p: u64 },
    /// `Z / p^k`.
    ModPrimePower { p: u64, k: u32 },
}

/// Ring-less coefficient value. Only meaningful together with a [`Ring`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Quad(BigRational, BigRational),
    Fp(u64),
    Res(BigUint),
}

/// An element of a [`Ring`], always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: Ring,
    val: Scalar,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_square_free(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut f = 2u64;
    while f.saturating_mul(f) <= n {
        if n % (f * f) == 0 {
            return false;
        }
        f += 1;
    }
    true
}

impl Ring {
    pub fn quadratic(d: i64) -> Result<Ring> {
        if d == 0 || d == 1 || d.unsigned_abs() > 1 << 40 || !is_square_free(d) {
            return Err(Error::BadDiscriminant(d));
        }
        Ok(Ring::Quadratic { d })
    }

    pub fn prime_field(p: u64) -> Result<Ring> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring::PrimeField { p })
    }

    pub fn mod_prime_power(p: u64, k: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 || k > 1 << 16 {
            return Err(Error::OutOfRange(format!("exponent {k}")));
        }
        Ok(Ring::ModPrimePower { p, k })
    }

    /// `Q(i)`.
    pub fn gaussian() -> Ring {
        Ring::Quadratic { d: -1 }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::ModPrimePower { .. })
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Ring::Rationals | Ring::Quadratic { .. } => 0,
            Ring::PrimeField { p } => p,
            Ring::ModPrimePower { p, k } => {
                if (k as f64) * (p as f64).log2() < 63.0 {
                    p.pow(k)
                } else {
                    u64::MAX
                }
            }
        }
    }

    fn modulus(&self) -> BigUint {
        match *self {
            Ring::ModPrimePower { p, k } => BigUint::from(p).pow(k),
            _ => unreachable!("modulus of a ring that is not Z/p^k"),
        }
    }

    pub fn zero(&self) -> RingElem {
        RingElem { ring: *self, val: self.s_zero() }
    }

    pub fn one(&self) -> RingElem {
        RingElem { ring: *self, val: self.s_one() }
    }

    pub fn int(&self, n: i64) -> RingElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElem {
        RingElem { ring: *self, val: self.s_from_bigint(n) }
    }

    /// `num / den`, failing if `den` is not a unit.
    pub fn rational(&self, num: &BigInt, den: &BigInt) -> Result<RingElem> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        n.div(&d)
    }

    /// The quadratic generator `w` with `w^2 = d`.
    pub fn generator(&self) -> Result<RingElem> {
        match self {
            Ring::Quadratic { .. } => Ok(RingElem {
                ring: *self,
                val: Scalar::Quad(BigRational::zero(), BigRational::one()),
            }),
            _ => Err(Error::UnknownVariable("w".into())),
        }
    }

    /// `a + b w` for rational `a`, `b`.
    pub fn quad_elem(&self, a: BigRational, b: BigRational) -> Result<RingElem> {
        match self {
            Ring::Quadratic { .. } => Ok(RingElem { ring: *self, val: Scalar::Quad(a, b) }),
            _ => Err(Error::Invalid(format!("{self} is not a quadratic field"))),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<RingElem> {
        self.rational(q.numer(), q.denom())
    }

    pub(crate) fn elem(&self, val: Scalar) -> RingElem {
        RingElem { ring: *self, val }
    }

    pub(crate) fn s_zero(&self) -> Scalar {
        match self {
            Ring::Rationals => Scalar::Rat(BigRational::zero()),
            Ring::Quadratic { .. } => Scalar::Quad(BigRational::zero(), BigRational::zero()),
            Ring::PrimeField { .. } => Scalar::Fp(0),
            Ring::ModPrimePower { .. } => Scalar::Res(BigUint::zero()),
        }
    }

    pub(crate) fn s_one(&self) -> Scalar {
        match self {
            Ring::Rationals => Scalar::Rat(BigRational::one()),
            Ring::Quadratic { .. } => Scalar::Quad(BigRational::one(), BigRational::zero()),
            Ring::PrimeField { .. } => Scalar::Fp(1),
            Ring::ModPrimePower { .. } => self.s_from_bigint(&BigInt::one()),
        }
    }

    pub(crate) fn s_from_bigint(&self, n: &BigInt) -> Scalar {
        match *self {
            Ring::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            Ring::Quadratic { .. } => {
                Scalar::Quad(BigRational::from_integer(n.clone()), BigRational::zero())
            }
            Ring::PrimeField { p } => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Fp(r.to_u64().expect("residue fits u64"))
            }
            Ring::ModPrimePower { .. } => {
                let m = BigInt::from(self.modulus());
                Scalar::Res(n.mod_floor(&m).to_biguint().expect("nonnegative residue"))
            }
        }
    }

    pub(crate) fn s_is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Quad(x, y) => x.is_zero() && y.is_zero(),
            Scalar::Fp(v) => *v == 0,
            Scalar::Res(v) => v.is_zero(),
        }
    }

    pub(crate) fn s_add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (_, Scalar::Quad(x0, x1), Scalar::Quad(y0, y1)) => Scalar::Quad(x0 + y0, x1 + y1),
            (Ring::PrimeField { p }, Scalar::Fp(x), Scalar::Fp(y)) => {
                let s = x + y;
                Scalar::Fp(if s >= *p { s - p } else { s })
            }
            (Ring::ModPrimePower { .. }, Scalar::Res(x), Scalar::Res(y)) => {
                Scalar::Res((x + y) % self.modulus())
            }
            _ => unreachable!("scalar does not belong to {self}"),
        }
    }

    pub(crate) fn s_neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Rat(x)) => Scalar::Rat(-x),
            (_, Scalar::Quad(x0, x1)) => Scalar::Quad(-x0, -x1),
            (Ring::PrimeField { p }, Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (Ring::ModPrimePower { .. }, Scalar::Res(x)) => {
                if x.is_zero() {
                    Scalar::Res(BigUint::zero())
                } else {
                    Scalar::Res(self.modulus() - x)
                }
            }
            _ => unreachable!("scalar does not belong to {self}"),
        }
    }

    pub(crate) fn s_sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (Scalar::Quad(x0, x1), Scalar::Quad(y0, y1)) => Scalar::Quad(x0 - y0, x1 - y1),
            _ => self.s_add(a, &self.s_neg(b)),
        }
    }

    pub(crate) fn s_mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Ring::Quadratic { d }, Scalar::Quad(x0, x1), Scalar::Quad(y0, y1)) => {
                let dd = BigRational::from_integer(BigInt::from(*d));
                Scalar::Quad(x0 * y0 + x1 * y1 * dd, x0 * y1 + x1 * y0)
            }
            (Ring::PrimeField { p }, Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(mul_mod(*x, *y, *p)),
            (Ring::ModPrimePower { .. }, Scalar::Res(x), Scalar::Res(y)) => {
                Scalar::Res((x * y) % self.modulus())
            }
            _ => unreachable!("scalar does not belong to {self}"),
        }
    }

    pub(crate) fn s_inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.s_is_zero(a) {
            return None;
        }
        match (self, a) {
            (_, Scalar::Rat(x)) => Some(Scalar::Rat(x.recip())),
            (Ring::Quadratic { d }, Scalar::Quad(x0, x1)) => {
                let dd = BigRational::from_integer(BigInt::from(*d));
                let norm = x0 * x0 - x1 * x1 * dd;
                Some(Scalar::Quad(x0 / &norm, -(x1 / &norm)))
            }
            (Ring::PrimeField { p }, Scalar::Fp(x)) => Some(Scalar::Fp(pow_mod(*x, p - 2, *p))),
            (Ring::ModPrimePower { .. }, Scalar::Res(x)) => {
                x.modinv(&self.modulus()).map(Scalar::Res)
            }
            _ => unreachable!("scalar does not belong to {self}"),
        }
    }

    pub(crate) fn s_is_one(&self, a: &Scalar) -> bool {
        *a == self.s_one()
    }

    pub(crate) fn s_fmt(&self, a: &Scalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match a {
            Scalar::Rat(q) => write!(f, "{q}"),
            Scalar::Quad(x, y) => {
                if y.is_zero() {
                    write!(f, "{x}")
                } else if x.is_zero() {
                    fmt_w_term(f, y, false)
                } else {
                    write!(f, "{x}")?;
                    fmt_w_term(f, y, true)
                }
            }
            Scalar::Fp(v) => write!(f, "{v}"),
            Scalar::Res(v) => write!(f, "{v}"),
        }
    }

    /// True when the printed form of `a` needs parentheses as a product factor.
    pub(crate) fn s_is_compound(&self, a: &Scalar) -> bool {
        matches!(a, Scalar::Quad(x, y) if !x.is_zero() && !y.is_zero())
    }
}

fn fmt_w_term(f: &mut fmt::Formatter<'_>, y: &BigRational, with_sign: bool) -> fmt::Result {
    let neg = y.is_negative();
    if with_sign {
        f.write_str(if neg { "-" } else { "+" })?;
    } else if neg {
        f.write_str("-")?;
    }
    let mag = y.abs();
    if mag.is_one() {
        f.write_str("w")
    } else {
        write!(f, "{mag}*w")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Rationals => f.write_str("Q"),
            Ring::Quadratic { d } => write!(f, "Q(sqrt:{d})"),
            Ring::PrimeField { p } => write!(f, "Fp:{p}"),
            Ring::ModPrimePower { p: 2, k } => write!(f, "Z2:{k}"),
            Ring::ModPrimePower { p, k } => write!(f, "Z/{p}^{k}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Ring> {
        let bad = || Error::RingSpec(spec.to_string());
        let s = spec.trim();
        if s == "Q" {
            return Ok(Ring::Rationals);
        }
        if let Some(rest) = s.strip_prefix("Q(sqrt:").and_then(|r| r.strip_suffix(')')) {
            let d: i64 = rest.trim().parse().map_err(|_| bad())?;
            return Ring::quadratic(d);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest.trim().parse().map_err(|_| bad())?;
            return Ring::prime_field(p);
        }
        if let Some(rest) = s.strip_prefix("Z2:") {
            let k: u32 = rest.trim().parse().map_err(|_| bad())?;
            return Ring::mod_prime_power(2, k);
        }
        Err(bad())
    }
}

/// Parse a ring descriptor.
pub fn make_ring(spec: &str) -> Result<Ring> {
    spec.parse()
}

impl RingElem {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub(crate) fn scalar(&self) -> &Scalar {
        &self.val
    }

    pub(crate) fn into_scalar(self) -> Scalar {
        self.val
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(self.ring.elem(self.ring.s_add(&self.val, &other.val)))
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(self.ring.elem(self.ring.s_sub(&self.val, &other.val)))
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(self.ring.elem(self.ring.s_mul(&self.val, &other.val)))
    }

    pub fn div(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.ring.elem(self.ring.s_mul(&self.val, &inv.val)))
    }

    pub fn neg(&self) -> RingElem {
        self.ring.elem(self.ring.s_neg(&self.val))
    }

    pub fn inv(&self) -> Result<RingElem> {
        self.ring
            .s_inv(&self.val)
            .map(|v| self.ring.elem(v))
            .ok_or_else(|| Error::NotUnit(self.to_string()))
    }

    pub fn pow(&self, mut e: u32) -> RingElem {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.ring.s_is_zero(&self.val)
    }

    pub fn is_one(&self) -> bool {
        self.ring.s_is_one(&self.val)
    }

    pub fn is_unit(&self) -> bool {
        match (&self.ring, &self.val) {
            (Ring::ModPrimePower { p, .. }, Scalar::Res(v)) => {
                !(v % BigUint::from(*p)).is_zero()
            }
            _ => !self.is_zero(),
        }
    }

    /// Rational value, if the element lies in `Q` (or the rational part of `Q(w)`).
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.val {
            Scalar::Rat(q) => Some(q.clone()),
            Scalar::Quad(x, y) if y.is_zero() => Some(x.clone()),
            _ => None,
        }
    }

    /// Coordinates `(a, b)` of `a + b w` in a quadratic field.
    pub fn quad_parts(&self) -> Option<(&BigRational, &BigRational)> {
        match &self.val {
            Scalar::Quad(x, y) => Some((x, y)),
            _ => None,
        }
    }

    /// Residue as a nonnegative integer for `F_p` and `Z/p^k`.
    pub fn residue(&self) -> Option<BigUint> {
        match &self.val {
            Scalar::Fp(v) => Some(BigUint::from(*v)),
            Scalar::Res(v) => Some(v.clone()),
            _ => None,
        }
    }

    /// True when all coordinates are integers (rational integers or `Z[w]`).
    pub fn is_integral(&self) -> bool {
        match &self.val {
            Scalar::Rat(q) => q.is_integer(),
            Scalar::Quad(x, y) => x.is_integer() && y.is_integer(),
            _ => true,
        }
    }

    /// Reduce an element of `Q` or `Q(sqrt d)` into `F_p`, sending `w` to `root`,
    /// a square root of `d` modulo `p`.
    /// Returns `None` when a denominator vanishes modulo `p`.
    pub fn reduce_mod(&self, p: u64, root: u64) -> Option<u64> {
        let red = |q: &BigRational| -> Option<u64> {
            let m = BigInt::from(p);
            let n = q.numer().mod_floor(&m).to_u64()?;
            let d = q.denom().mod_floor(&m).to_u64()?;
            if d == 0 {
                return None;
            }
            Some(mul_mod(n, pow_mod(d, p - 2, p), p))
        };
        match &self.val {
            Scalar::Rat(q) => red(q),
            Scalar::Quad(x, y) => {
                let a = red(x)?;
                let b = red(y)?;
                Some((a as u128 + mul_mod(b, root, p) as u128).rem_euclid(p as u128) as u64)
            }
            Scalar::Fp(v) => Some(v % p),
            Scalar::Res(_) => None,
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ring.s_fmt(&self.val, f)
    }
}

/// Stufe of the prime field `F_p`, with a witness list of that length whose
/// squares sum to `-1`.
pub fn finite_field_stufe(p: u64) -> Result<(usize, Vec<RingElem>)> {
    if p > 1_000_000 {
        return Err(Error::OutOfRange(format!("p = {p} exceeds 10^6")));
    }
    let ring = Ring::prime_field(p)?;
    if p == 2 {
        return Ok((1, vec![ring.one()]));
    }
    let minus_one = p - 1;
    // square roots indexed by residue, smallest root first
    let mut root = vec![u64::MAX; p as usize];
    for x in (0..p).rev() {
        root[mul_mod(x, x, p) as usize] = x;
    }
    if root[minus_one as usize] != u64::MAX {
        let x = root[minus_one as usize];
        return Ok((1, vec![ring.int(x as i64)]));
    }
    for a in 1..p {
        let rest = (minus_one + p - mul_mod(a, a, p)) % p;
        let b = root[rest as usize];
        if b != u64::MAX {
            return Ok((2, vec![ring.int(a as i64), ring.int(b as i64)]));
        }
    }
    unreachable!("every finite field has Stufe at most 2")
}
