//! Coefficient rings and their elements.
//!
//! Five kinds of ring are supported: the integers, the rationals, prime
//! fields `F_p`, the chain rings `Z/p^m` and the truncated polynomial rings
//! `F_p[e]/(e^m)`. The finite kinds store an element as a single `u64`; for
//! `F_p[e]/(e^m)` the value is the base-`p` digit string of the coefficient
//! vector, so `e^k` is encoded as `p^k` and reduction modulo `e^k` is the
//! integer remainder modulo `p^k`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The supported ring kinds.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    Integers,
    Rationals,
    PrimeField { p: u64 },
    /// `Z/p^m`.
    Chain { p: u64, m: u32 },
    /// `F_p[e]/(e^m)`.
    DualChain { p: u64, m: u32 },
}

/// A ring element. The variant is fixed by the ring it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Int(BigInt),
    Rat(BigRational),
    Res(u64),
}

/// One cyclic summand of a module: `R` itself, or `R/(r)` for a non-unit,
/// nonzero relation `r`. Over the integers the payload is the order `d` of
/// `Z/d`; over chain rings it is the exponent `e` of `R/(pi^e)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Torsion(BigInt),
    Free,
}

impl Factor {
    pub fn torsion(e: u64) -> Self {
        Factor::Torsion(BigInt::from(e))
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Factor::Free)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Free => write!(f, "free"),
            Factor::Torsion(e) => write!(f, "{e}"),
        }
    }
}

/// A supported commutative coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    kind: RingKind,
    /// `p^m` for the finite kinds, `0` otherwise.
    modulus: u64,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(p: u64, m: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..m {
        acc = acc.checked_mul(p)?;
    }
    // keep products representable in u128 with headroom
    (acc < (1u64 << 62)).then_some(acc)
}

fn mod_pow(b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc: u128 = 1 % q as u128;
    let mut base = (b % q) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q as u128;
        }
        base = base * base % q as u128;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `q`, assuming `gcd(a, q) = 1`.
fn mod_inverse(a: u64, q: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let t = old_r / r;
        (old_r, r) = (r, old_r - t * r);
        (old_s, s) = (s, old_s - t * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(q as i128) as u64
}

impl Ring {
    pub fn integers() -> Self {
        Ring { kind: RingKind::Integers, modulus: 0 }
    }

    pub fn rationals() -> Self {
        Ring { kind: RingKind::Rationals, modulus: 0 }
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedRing(format!("F_{p}: {p} is not prime")));
        }
        checked_pow(p, 1).ok_or_else(|| Error::UnsupportedRing(format!("F_{p}: too large")))?;
        Ok(Ring { kind: RingKind::PrimeField { p }, modulus: p })
    }

    pub fn chain(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) || m == 0 {
            return Err(Error::UnsupportedRing(format!("Z/{p}^{m}")));
        }
        let q = checked_pow(p, m)
            .ok_or_else(|| Error::UnsupportedRing(format!("Z/{p}^{m}: modulus too large")))?;
        Ok(Ring { kind: RingKind::Chain { p, m }, modulus: q })
    }

    pub fn dual_chain(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) || m == 0 {
            return Err(Error::UnsupportedRing(format!("F_{p}[e]/(e^{m})")));
        }
        let q = checked_pow(p, m)
            .ok_or_else(|| Error::UnsupportedRing(format!("F_{p}[e]/(e^{m}): too large")))?;
        Ok(Ring { kind: RingKind::DualChain { p, m }, modulus: q })
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, RingKind::Rationals | RingKind::PrimeField { .. })
    }

    /// Residue characteristic `p` for the finite kinds.
    pub fn prime(&self) -> Option<u64> {
        match self.kind {
            RingKind::PrimeField { p } | RingKind::Chain { p, .. } | RingKind::DualChain { p, .. } => {
                Some(p)
            }
            _ => None,
        }
    }

    /// Nilpotency index of the maximal ideal (`1` for prime fields); `None`
    /// for the integers and rationals.
    pub fn nilpotency(&self) -> Option<u32> {
        match self.kind {
            RingKind::PrimeField { .. } => Some(1),
            RingKind::Chain { m, .. } | RingKind::DualChain { m, .. } => Some(m),
            _ => None,
        }
    }

    fn p(&self) -> u64 {
        self.prime().expect("finite ring")
    }

    fn m(&self) -> u32 {
        self.nilpotency().expect("finite ring")
    }

    // ------------------------------------------------------------------
    // construction

    pub fn zero(&self) -> Elem {
        match self.kind {
            RingKind::Integers => Elem::Int(BigInt::zero()),
            RingKind::Rationals => Elem::Rat(BigRational::zero()),
            _ => Elem::Res(0),
        }
    }

    pub fn one(&self) -> Elem {
        match self.kind {
            RingKind::Integers => Elem::Int(BigInt::one()),
            RingKind::Rationals => Elem::Rat(BigRational::one()),
            _ => Elem::Res(1 % self.modulus),
        }
    }

    pub fn from_i64(&self, x: i64) -> Elem {
        self.from_bigint(&BigInt::from(x))
    }

    /// Image of an integer under the unique ring map `Z -> R`.
    pub fn from_bigint(&self, x: &BigInt) -> Elem {
        match self.kind {
            RingKind::Integers => Elem::Int(x.clone()),
            RingKind::Rationals => Elem::Rat(BigRational::from_integer(x.clone())),
            RingKind::PrimeField { p } | RingKind::DualChain { p, .. } => {
                Elem::Res(x.mod_floor(&BigInt::from(p)).to_u64().unwrap())
            }
            RingKind::Chain { .. } => {
                Elem::Res(x.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap())
            }
        }
    }

    /// The uniformizer `p` or `e` of a chain ring.
    pub fn uniformizer(&self) -> Option<Elem> {
        match self.kind {
            RingKind::Chain { p, m } | RingKind::DualChain { p, m } => {
                Some(if m == 1 { Elem::Res(0) } else { Elem::Res(p) })
            }
            _ => None,
        }
    }

    /// `pi^e` for a chain ring (zero once `e >= m`).
    pub fn uniformizer_pow(&self, e: u32) -> Elem {
        let m = self.m();
        if e >= m {
            self.zero()
        } else {
            Elem::Res(self.p().pow(e))
        }
    }

    // ------------------------------------------------------------------
    // dual-chain digit helpers

    fn digits(&self, x: u64) -> Vec<u64> {
        let (p, m) = (self.p(), self.m() as usize);
        let mut out = vec![0u64; m];
        let mut v = x;
        for d in out.iter_mut() {
            *d = v % p;
            v /= p;
        }
        out
    }

    fn undigits(&self, ds: &[u64]) -> u64 {
        let p = self.p();
        ds.iter().rev().fold(0u64, |acc, &d| acc * p + d)
    }

    fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (p, m) = (self.p() as u128, a.len());
        let mut out = vec![0u128; m];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(m - i) {
                out[i + j] = (out[i + j] + ai as u128 * bj as u128) % p;
            }
        }
        out.into_iter().map(|x| x as u64).collect()
    }

    fn poly_unit_inverse(&self, u: &[u64]) -> Vec<u64> {
        let p = self.p();
        let m = u.len();
        let c0inv = mod_inverse(u[0] % p, p);
        let mut inv = vec![0u64; m];
        inv[0] = c0inv;
        for k in 1..m {
            // sum_{i=1..k} u_i inv_{k-i}
            let mut s: u128 = 0;
            for i in 1..=k {
                s = (s + u[i] as u128 * inv[k - i] as u128) % p as u128;
            }
            let s = (s % p as u128) as u64;
            inv[k] = (((p - s) % p) as u128 * c0inv as u128 % p as u128) as u64;
        }
        inv
    }

    // ------------------------------------------------------------------
    // arithmetic

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Elem::Res(x), Elem::Res(y)) => match self.kind {
                RingKind::DualChain { p, .. } => {
                    let (dx, dy) = (self.digits(*x), self.digits(*y));
                    let ds: Vec<u64> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                    Elem::Res(self.undigits(&ds))
                }
                _ => Elem::Res(((*x as u128 + *y as u128) % self.modulus as u128) as u64),
            },
            _ => panic!("element kind mismatch in {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Int(x) => Elem::Int(-x),
            Elem::Rat(x) => Elem::Rat(-x),
            Elem::Res(x) => match self.kind {
                RingKind::DualChain { p, .. } => {
                    let ds: Vec<u64> = self.digits(*x).iter().map(|d| (p - d) % p).collect();
                    Elem::Res(self.undigits(&ds))
                }
                _ => Elem::Res((self.modulus - x % self.modulus) % self.modulus),
            },
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Elem::Res(x), Elem::Res(y)) => {
                if *x == 0 || *y == 0 {
                    return Elem::Res(0);
                }
                match self.kind {
                    RingKind::DualChain { .. } => {
                        let prod = self.poly_mul(&self.digits(*x), &self.digits(*y));
                        Elem::Res(self.undigits(&prod))
                    }
                    _ => Elem::Res(((*x as u128 * *y as u128) % self.modulus as u128) as u64),
                }
            }
            _ => panic!("element kind mismatch in {self}"),
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(x) => x.is_zero(),
            Elem::Rat(x) => x.is_zero(),
            Elem::Res(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    /// `pi`-adic valuation for finite kinds (`m` for zero).
    pub fn valuation(&self, a: &Elem) -> u32 {
        let x = match a {
            Elem::Res(x) => *x,
            _ => panic!("valuation is defined for finite rings only"),
        };
        let m = self.m();
        if x == 0 {
            return m;
        }
        let p = self.p();
        match self.kind {
            RingKind::PrimeField { .. } => 0,
            RingKind::Chain { .. } => {
                let (mut v, mut y) = (0, x);
                while y % p == 0 {
                    y /= p;
                    v += 1;
                }
                v
            }
            RingKind::DualChain { .. } => {
                self.digits(x).iter().position(|&d| d != 0).unwrap() as u32
            }
            _ => unreachable!(),
        }
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(x) => x.abs().is_one(),
            Elem::Rat(x) => !x.is_zero(),
            Elem::Res(_) => !self.is_zero(a) && self.valuation(a) == 0,
        }
    }

    /// Writes a nonzero finite-kind element as `unit * pi^v` and returns
    /// `(inverse of unit, v)`.
    fn unit_part_inverse(&self, a: &Elem) -> (Elem, u32) {
        let x = match a {
            Elem::Res(x) => *x,
            _ => unreachable!(),
        };
        let v = self.valuation(a);
        let p = self.p();
        match self.kind {
            RingKind::PrimeField { .. } => (Elem::Res(mod_pow(x, p - 2, p)), 0),
            RingKind::Chain { .. } => {
                let u = x / p.pow(v);
                (Elem::Res(mod_inverse(u % self.modulus, self.modulus)), v)
            }
            RingKind::DualChain { .. } => {
                let ds = self.digits(x);
                let mut u = vec![0u64; ds.len()];
                for (i, d) in ds.iter().enumerate().skip(v as usize) {
                    u[i - v as usize] = *d;
                }
                // higher coefficients of the shifted unit are irrelevant modulo e^(m-v)
                (Elem::Res(self.undigits(&self.poly_unit_inverse(&u))), v)
            }
            _ => unreachable!(),
        }
    }

    /// Shift a finite-kind element down by `pi^v`, assuming `pi^v` divides it.
    fn shift_down(&self, x: u64, v: u32) -> u64 {
        match self.kind {
            RingKind::Chain { p, .. } => x / p.pow(v),
            RingKind::DualChain { .. } => {
                let ds = self.digits(x);
                let mut out = vec![0u64; ds.len()];
                for (i, d) in ds.iter().enumerate().skip(v as usize) {
                    out[i - v as usize] = *d;
                }
                self.undigits(&out)
            }
            _ => x,
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        if !self.is_unit(a) {
            return None;
        }
        Some(match a {
            Elem::Int(x) => Elem::Int(x.clone()),
            Elem::Rat(x) => Elem::Rat(x.recip()),
            Elem::Res(_) => self.unit_part_inverse(a).0,
        })
    }

    /// Whether `a` divides `b`.
    pub fn divides(&self, a: &Elem, b: &Elem) -> bool {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => {
                if x.is_zero() {
                    y.is_zero()
                } else {
                    (y % x).is_zero()
                }
            }
            (Elem::Rat(x), Elem::Rat(y)) => !x.is_zero() || y.is_zero(),
            (Elem::Res(_), Elem::Res(_)) => self.valuation(a) <= self.valuation(b),
            _ => panic!("element kind mismatch in {self}"),
        }
    }

    /// Some `x` with `a * x = b`, if one exists.
    pub fn div_exact(&self, b: &Elem, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return self.is_zero(b).then(|| self.zero());
        }
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => {
                let (q, r) = y.div_rem(x);
                r.is_zero().then_some(Elem::Int(q))
            }
            (Elem::Rat(x), Elem::Rat(y)) => Some(Elem::Rat(y / x)),
            (Elem::Res(_), Elem::Res(y)) => {
                if self.is_zero(b) {
                    return Some(self.zero());
                }
                let (uinv, va) = self.unit_part_inverse(a);
                if self.valuation(b) < va {
                    return None;
                }
                Some(self.mul(&Elem::Res(self.shift_down(*y, va)), &uinv))
            }
            _ => panic!("element kind mismatch in {self}"),
        }
    }

    /// Division with remainder used by the normal form. Over the integers this
    /// is Euclidean division with non-negative remainder; over the other
    /// kinds the remainder is zero whenever `a` divides `b`.
    pub fn div_rem(&self, b: &Elem, a: &Elem) -> (Elem, Elem) {
        match (a, b) {
            (Elem::Int(x), Elem::Int(y)) => {
                let q = y.div_floor(x);
                let r = y - &q * x;
                (Elem::Int(q), Elem::Int(r))
            }
            _ => match self.div_exact(b, a) {
                Some(q) => (q, self.zero()),
                None => (self.zero(), b.clone()),
            },
        }
    }

    /// Euclidean size used to choose pivots: `|x|` over the integers, the
    /// valuation over finite kinds, `0` for nonzero rationals. `None` for zero.
    pub fn pivot_key(&self, a: &Elem) -> Option<BigInt> {
        if self.is_zero(a) {
            return None;
        }
        Some(match a {
            Elem::Int(x) => x.abs(),
            Elem::Rat(_) => BigInt::zero(),
            Elem::Res(_) => BigInt::from(self.valuation(a)),
        })
    }

    /// Returns a unit `u` such that `a * u` is the canonical associate of
    /// `a` (`|a|`, `1`, or `pi^v`).
    pub fn normalizing_unit(&self, a: &Elem) -> Elem {
        if self.is_zero(a) {
            return self.one();
        }
        match a {
            Elem::Int(x) => {
                if x.is_negative() {
                    self.from_i64(-1)
                } else {
                    self.one()
                }
            }
            Elem::Rat(x) => Elem::Rat(x.recip()),
            Elem::Res(_) => self.unit_part_inverse(a).0,
        }
    }

    /// Generator of the annihilator ideal of `a`, or `None` when it is zero.
    pub fn annihilator(&self, a: &Elem) -> Option<Elem> {
        if self.is_zero(a) {
            return Some(self.one());
        }
        match a {
            Elem::Int(_) | Elem::Rat(_) => None,
            Elem::Res(_) => {
                let v = self.valuation(a);
                (v > 0).then(|| self.uniformizer_pow(self.m() - v))
            }
        }
    }

    // ------------------------------------------------------------------
    // cyclic factors

    /// The cyclic factor `R/(d)` for a canonical diagonal entry `d`, or `None`
    /// when `d` is a unit (the summand vanishes).
    pub fn factor_from_diagonal(&self, d: &Elem) -> Option<Factor> {
        if self.is_zero(d) {
            return Some(Factor::Free);
        }
        match d {
            Elem::Int(x) => {
                let x = x.abs();
                (!x.is_one()).then_some(Factor::Torsion(x))
            }
            Elem::Rat(_) => None,
            Elem::Res(_) => {
                let v = self.valuation(d);
                (v > 0).then(|| Factor::torsion(v as u64))
            }
        }
    }

    /// The relation generating the annihilator of a cyclic factor (zero for
    /// a free factor).
    pub fn factor_relation(&self, f: &Factor) -> Elem {
        match f {
            Factor::Free => self.zero(),
            Factor::Torsion(t) => match self.kind {
                RingKind::Integers => Elem::Int(t.clone()),
                RingKind::Chain { .. } | RingKind::DualChain { .. } => {
                    self.uniformizer_pow(t.to_u32().expect("small exponent"))
                }
                _ => panic!("torsion factor over a field"),
            },
        }
    }

    /// Whether `f` is a legal factor over this ring.
    pub fn check_factor(&self, f: &Factor) -> Result<()> {
        let ok = match (f, &self.kind) {
            (Factor::Free, _) => true,
            (Factor::Torsion(t), RingKind::Integers) => t > &BigInt::one(),
            (Factor::Torsion(t), RingKind::Chain { m, .. } | RingKind::DualChain { m, .. }) => {
                t >= &BigInt::one() && t < &BigInt::from(*m)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("factor {f} is not valid over {self}")))
        }
    }

    /// Canonical representative of `x` in the cyclic factor `f`.
    pub fn reduce_in(&self, x: &Elem, f: &Factor) -> Elem {
        match f {
            Factor::Free => x.clone(),
            Factor::Torsion(t) => match (x, &self.kind) {
                (Elem::Int(y), RingKind::Integers) => Elem::Int(y.mod_floor(t)),
                (Elem::Res(y), _) => {
                    let e = t.to_u32().unwrap();
                    Elem::Res(y % self.p().pow(e))
                }
                _ => panic!("torsion factor over a field"),
            },
        }
    }

    /// Tensor product of two cyclic factors; `None` when it vanishes.
    pub fn tensor_factor(&self, a: &Factor, b: &Factor) -> Option<Factor> {
        match (a, b) {
            (Factor::Free, x) | (x, Factor::Free) => Some(x.clone()),
            (Factor::Torsion(x), Factor::Torsion(y)) => match self.kind {
                RingKind::Integers => {
                    let g = x.gcd(y);
                    (!g.is_one()).then_some(Factor::Torsion(g))
                }
                _ => Some(Factor::Torsion(x.min(y).clone())),
            },
        }
    }

    // ------------------------------------------------------------------
    // text form

    pub fn format_elem(&self, a: &Elem) -> String {
        match a {
            Elem::Int(x) => x.to_string(),
            Elem::Rat(x) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Elem::Res(x) => match self.kind {
                RingKind::DualChain { .. } => {
                    let ds = self.digits(*x);
                    let terms: Vec<String> = ds
                        .iter()
                        .enumerate()
                        .filter(|(_, d)| **d != 0)
                        .map(|(i, d)| match (i, d) {
                            (0, d) => d.to_string(),
                            (1, 1) => "e".to_string(),
                            (1, d) => format!("{d}e"),
                            (i, 1) => format!("e^{i}"),
                            (i, d) => format!("{d}e^{i}"),
                        })
                        .collect();
                    if terms.is_empty() {
                        "0".into()
                    } else {
                        terms.join("+")
                    }
                }
                _ => x.to_string(),
            },
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad element '{s}' for {self}"));
        match self.kind {
            RingKind::Integers => Ok(Elem::Int(s.parse::<BigInt>().map_err(|_| bad())?)),
            RingKind::Rationals => {
                let r = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(s.parse().map_err(|_| bad())?)
                };
                Ok(Elem::Rat(r))
            }
            RingKind::PrimeField { .. } | RingKind::Chain { .. } => {
                Ok(self.from_bigint(&s.parse::<BigInt>().map_err(|_| bad())?))
            }
            RingKind::DualChain { m, .. } => {
                let mut acc = self.zero();
                for term in s.split('+') {
                    let term = term.trim();
                    let (coef, deg) = if let Some(pos) = term.find('e') {
                        let c = &term[..pos];
                        let c: BigInt = if c.is_empty() { BigInt::one() } else { c.parse().map_err(|_| bad())? };
                        let rest = &term[pos + 1..];
                        let d: u32 = if rest.is_empty() {
                            1
                        } else {
                            rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                        };
                        (c, d)
                    } else {
                        (term.parse::<BigInt>().map_err(|_| bad())?, 0)
                    };
                    if deg >= m {
                        continue;
                    }
                    let t = self.mul(&self.from_bigint(&coef), &self.uniformizer_pow(deg));
                    let t = if deg == 0 { self.from_bigint(&coef) } else { t };
                    acc = self.add(&acc, &t);
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::PrimeField { p } => write!(f, "F_{p}"),
            RingKind::Chain { .. } => write!(f, "Z/{}", self.modulus),
            RingKind::DualChain { p, m } => write!(f, "F_{p}[e]/(e^{m})"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    /// Accepts `Z`, `Q`, `F_p` (or `Fp`, `GF(p)`), `Z/n` with `n` a prime
    /// power, and `F_p[e]/(e^m)`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::UnsupportedRing(s.to_string());
        match t.as_str() {
            "Z" => return Ok(Ring::integers()),
            "Q" => return Ok(Ring::rationals()),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("Z/") {
            let n: u64 = rest.parse().map_err(|_| bad())?;
            let p = (2..=n).find(|d| n % d == 0).ok_or_else(bad)?;
            let (mut q, mut m) = (n, 0u32);
            while q % p == 0 {
                q /= p;
                m += 1;
            }
            if q != 1 {
                return Err(bad());
            }
            return Ring::chain(p, m);
        }
        if let Some(inner) = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            return Ring::prime_field(inner.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = t.strip_prefix('F') {
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            if let Some((p, tail)) = rest.split_once('[') {
                let p: u64 = p.parse().map_err(|_| bad())?;
                let m = tail
                    .strip_prefix("e]/(e^")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(bad)?;
                return Ring::dual_chain(p, m.parse().map_err(|_| bad())?);
            }
            return Ring::prime_field(rest.parse().map_err(|_| bad())?);
        }
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["Z", "Q", "F_5", "Z/8", "Z/2", "F_3[e]/(e^2)"] {
            let r: Ring = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("Z/6".parse::<Ring>().is_err());
        assert!("F_4".parse::<Ring>().is_err());
        assert!("Z[x]".parse::<Ring>().is_err());
    }

    #[test]
    fn chain_division_and_valuation() {
        let r = Ring::chain(2, 3).unwrap();
        let six = r.from_i64(6);
        assert_eq!(r.valuation(&six), 1);
        let q = r.div_exact(&r.from_i64(4), &six).unwrap();
        assert_eq!(r.mul(&q, &six), r.from_i64(4));
        assert!(r.div_exact(&six, &r.from_i64(4)).is_none());
        assert_eq!(r.annihilator(&r.from_i64(2)), Some(r.from_i64(4)));
    }

    #[test]
    fn dual_chain_arithmetic() {
        let r = Ring::dual_chain(3, 3).unwrap();
        let one_plus_e = r.parse_elem("1+e").unwrap();
        let inv = r.inverse(&one_plus_e).unwrap();
        assert!(r.is_one(&r.mul(&inv, &one_plus_e)));
        assert_eq!(r.format_elem(&inv), "1+2e+e^2");
        let e = r.uniformizer().unwrap();
        assert_eq!(r.format_elem(&r.mul(&e, &e)), "e^2");
        assert!(r.is_zero(&r.mul(&r.mul(&e, &e), &e)));
        let x = r.parse_elem("2e+e^2").unwrap();
        assert_eq!(r.valuation(&x), 1);
        let q = r.div_exact(&x, &e).unwrap();
        assert_eq!(r.mul(&q, &e), x);
    }

    #[test]
    fn integer_euclid() {
        let z = Ring::integers();
        let (q, rem) = z.div_rem(&z.from_i64(-7), &z.from_i64(3));
        assert_eq!((q, rem), (z.from_i64(-3), z.from_i64(2)));
        assert_eq!(z.tensor_factor(&Factor::torsion(4), &Factor::torsion(2)), Some(Factor::torsion(2)));
        assert_eq!(z.tensor_factor(&Factor::torsion(2), &Factor::torsion(3)), None);
    }
}
