//! Exact arithmetic in the cyclotomic integers `Z[ξ]`, `ξ = e^{2πi/9}`, and in
//! the localisation `Z[ξ, 1/3]`.
//!
//! Elements of `Z[ξ]` are stored in the power basis `1, ξ, …, ξ⁵` and reduced
//! with the minimal polynomial `ξ⁶ + ξ³ + 1 = 0`. The prime `χ = 1 − ξ` lies
//! over 3 (`3` and `χ⁶` are associates), which is what makes the χ-adic
//! denominator exponent well defined.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Element of `Z₃`, stored as `0`, `1` or `2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Parity(u8);

impl Parity {
    pub const ZERO: Parity = Parity(0);
    pub const ONE: Parity = Parity(1);
    pub const TWO: Parity = Parity(2);

    pub fn new(v: i64) -> Parity {
        Parity(v.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity((self.0 + rhs.0) % 3)
    }
}

impl Sub for Parity {
    type Output = Parity;
    fn sub(self, rhs: Parity) -> Parity {
        Parity((self.0 + 3 - rhs.0) % 3)
    }
}

impl Mul for Parity {
    type Output = Parity;
    fn mul(self, rhs: Parity) -> Parity {
        Parity((self.0 * rhs.0) % 3)
    }
}

impl Neg for Parity {
    type Output = Parity;
    fn neg(self) -> Parity {
        Parity((3 - self.0) % 3)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("element is not divisible by chi = 1 - xi")]
    NotDivisible,
    #[error("cannot parse ring element: {0}")]
    Parse(String),
}

/// An element `c₀ + c₁ξ + … + c₅ξ⁵` of `Z[ξ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CycInt {
    c: [BigInt; 6],
}

impl CycInt {
    pub fn new(c: [BigInt; 6]) -> CycInt {
        CycInt { c }
    }

    pub fn from_i64s(c: [i64; 6]) -> CycInt {
        CycInt {
            c: c.map(BigInt::from),
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> CycInt {
        let mut r = CycInt::zero();
        r.c[0] = v.into();
        r
    }

    pub fn zero() -> CycInt {
        CycInt::default()
    }

    pub fn one() -> CycInt {
        CycInt::from_int(1)
    }

    /// `ξᵏ` for any integer `k`.
    pub fn xi_pow(k: i64) -> CycInt {
        let k = k.rem_euclid(9) as usize;
        let mut c = [0i64; 6];
        if k < 6 {
            c[k] = 1;
        } else {
            // ξ⁶ = −1 − ξ³, ξ⁷ = −ξ − ξ⁴, ξ⁸ = −ξ² − ξ⁵
            c[k - 6] = -1;
            c[k - 3] = -1;
        }
        CycInt::from_i64s(c)
    }

    /// `ω = ξ³`.
    pub fn omega() -> CycInt {
        CycInt::xi_pow(3)
    }

    /// `χ = 1 − ξ`.
    pub fn chi() -> CycInt {
        CycInt::from_i64s([1, -1, 0, 0, 0, 0])
    }

    pub fn chi_pow(k: u32) -> CycInt {
        let chi = CycInt::chi();
        (0..k).fold(CycInt::one(), |acc, _| &acc * &chi)
    }

    pub fn coeffs(&self) -> &[BigInt; 6] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Complex conjugation, the automorphism `ξ ↦ ξ⁸`.
    pub fn conj(&self) -> CycInt {
        let a = &self.c;
        CycInt {
            c: [
                &a[0] - &a[3],
                -&a[2],
                -&a[1],
                -&a[3],
                &a[5] - &a[2],
                &a[4] - &a[1],
            ],
        }
    }

    /// The parity map `Z[ξ] → Z₃`: the coefficient sum modulo 3.
    pub fn parity(&self) -> Parity {
        let s: BigInt = self.c.iter().sum();
        Parity(s.mod_floor(&BigInt::from(3)).to_u8().unwrap_or(0))
    }

    /// Exact division by `χ`. Succeeds iff the parity is zero.
    pub fn chi_divide(&self) -> Result<CycInt, RingError> {
        // q·(1 − ξ) = a unrolls to prefix sums of a, with 3·q₅ = Σ aᵢ.
        let total: BigInt = self.c.iter().sum();
        let (q5, rem) = total.div_rem(&BigInt::from(3));
        if !rem.is_zero() {
            return Err(RingError::NotDivisible);
        }
        let mut prefix = BigInt::zero();
        let mut out: [BigInt; 6] = Default::default();
        for (i, ai) in self.c.iter().enumerate().take(5) {
            prefix += ai;
            let mult = if i < 3 { 1 } else { 2 };
            out[i] = &prefix - &q5 * mult;
        }
        out[5] = q5;
        Ok(CycInt { c: out })
    }

    /// Number of times `χ` divides this element (`None` for zero).
    pub fn chi_valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut cur = self.clone();
        while let Ok(q) = cur.chi_divide() {
            cur = q;
            v += 1;
        }
        Some(v)
    }

    pub fn divisible_by_3(&self) -> bool {
        let three = BigInt::from(3);
        self.c.iter().all(|x| x.is_multiple_of(&three))
    }

    /// Divides every coefficient by `3ⁿ`; `None` unless exact.
    pub fn div_pow3(&self, n: u32) -> Option<CycInt> {
        if n == 0 {
            return Some(self.clone());
        }
        let d = BigInt::from(3).pow(n);
        let mut out: [BigInt; 6] = Default::default();
        for (o, x) in out.iter_mut().zip(&self.c) {
            let (q, r) = x.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            *o = q;
        }
        Some(CycInt { c: out })
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            c: self.c.clone().map(|x| x * k),
        }
    }

    /// Multiplication by `ξ`, a coefficient shift.
    pub fn mul_xi(&self) -> CycInt {
        let a = &self.c;
        CycInt {
            c: [
                -&a[5],
                a[0].clone(),
                a[1].clone(),
                &a[2] - &a[5],
                a[3].clone(),
                a[4].clone(),
            ],
        }
    }

    pub fn mul_xi_pow(&self, k: i64) -> CycInt {
        let k = k.rem_euclid(9);
        (0..k).fold(self.clone(), |acc, _| acc.mul_xi())
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        let mut c = self.c.clone();
        for (x, y) in c.iter_mut().zip(&rhs.c) {
            *x += y;
        }
        CycInt { c }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        for (x, y) in self.c.iter_mut().zip(&rhs.c) {
            *x += y;
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        let mut c = self.c.clone();
        for (x, y) in c.iter_mut().zip(&rhs.c) {
            *x -= y;
        }
        CycInt { c }
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            c: self.c.clone().map(|x| -x),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        let mut r: [BigInt; 11] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] += a * b;
                }
            }
        }
        // ξ⁶ = −1 − ξ³
        for d in (6..11).rev() {
            let v = std::mem::take(&mut r[d]);
            if !v.is_zero() {
                r[d - 6] -= &v;
                r[d - 3] -= &v;
            }
        }
        let [c0, c1, c2, c3, c4, c5, ..] = r;
        CycInt {
            c: [c0, c1, c2, c3, c4, c5],
        }
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for CycInt {
    type Err = RingError;

    /// Parses sums of terms `c`, `c*x`, `c*x^k` (and `x^k`), with `k` any
    /// non-negative integer; powers above 5 are reduced.
    fn from_str(s: &str) -> Result<CycInt, RingError> {
        let err = || RingError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut acc = CycInt::zero();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut i = 1;
        let mut terms = Vec::new();
        while i <= bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^')
            {
                terms.push(&compact[start..i]);
                start = i;
            }
            i += 1;
        }
        for term in terms {
            let (neg, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(err());
            }
            let (coef, power) = match body.find('x') {
                None => (body.parse::<BigInt>().map_err(|_| err())?, 0i64),
                Some(pos) => {
                    let coef = match &body[..pos] {
                        "" => BigInt::one(),
                        c => c
                            .strip_suffix('*')
                            .ok_or_else(err)?
                            .parse::<BigInt>()
                            .map_err(|_| err())?,
                    };
                    let power = match &body[pos + 1..] {
                        "" => 1,
                        p => p
                            .strip_prefix('^')
                            .ok_or_else(err)?
                            .parse::<i64>()
                            .map_err(|_| err())?,
                    };
                    if power < 0 {
                        return Err(err());
                    }
                    (coef, power)
                }
            };
            let coef = if neg { -coef } else { coef };
            acc += &CycInt::xi_pow(power).scale(&coef);
        }
        Ok(acc)
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.c.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<CycInt, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        if strs.len() != 6 {
            return Err(serde::de::Error::custom(format!(
                "expected 6 coefficients, got {}",
                strs.len()
            )));
        }
        let mut c: [BigInt; 6] = Default::default();
        for (slot, s) in c.iter_mut().zip(&strs) {
            *slot = s
                .trim()
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad integer literal {s:?}")))?;
        }
        Ok(CycInt { c })
    }
}

/// An element `num / 3^three_exp` of `Z[ξ, 1/3]`, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    num: CycInt,
    three_exp: u32,
}

impl RingElem {
    pub fn new(num: CycInt, three_exp: u32) -> RingElem {
        let mut r = RingElem { num, three_exp };
        r.normalize();
        r
    }

    pub fn zero() -> RingElem {
        RingElem::default()
    }

    pub fn one() -> RingElem {
        RingElem::from(CycInt::one())
    }

    pub fn from_int(v: i64) -> RingElem {
        RingElem::from(CycInt::from_int(v))
    }

    pub fn xi_pow(k: i64) -> RingElem {
        RingElem::from(CycInt::xi_pow(k))
    }

    pub fn num(&self) -> &CycInt {
        &self.num
    }

    pub fn three_exp(&self) -> u32 {
        self.three_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.three_exp == 0 && self.num.is_one()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.three_exp = 0;
            return;
        }
        while self.three_exp > 0 && self.num.divisible_by_3() {
            self.num = self.num.div_pow3(1).expect("checked divisibility");
            self.three_exp -= 1;
        }
    }

    pub fn conj(&self) -> RingElem {
        RingElem {
            num: self.num.conj(),
            three_exp: self.three_exp,
        }
    }

    pub fn mul_xi_pow(&self, k: i64) -> RingElem {
        RingElem {
            num: self.num.mul_xi_pow(k),
            three_exp: self.three_exp,
        }
    }

    /// Least `k ≥ 0` with `χᵏ·y ∈ Z[ξ]`; zero maps to 0.
    pub fn denom_exp_chi(&self) -> u32 {
        if self.three_exp == 0 {
            return 0;
        }
        // num is not divisible by 3 here, so its χ-valuation is below 6.
        let v = self.num.chi_valuation().unwrap_or(0);
        6 * self.three_exp - v
    }

    /// `χᵏ·y` as an element of `Z[ξ]`, or `None` when it is not integral.
    pub fn times_chi_pow(&self, k: u32) -> Option<CycInt> {
        (&self.num * &CycInt::chi_pow(k)).div_pow3(self.three_exp)
    }

    /// `P(χᵏ·y)`; `None` if `k` is not a denominator exponent of `y`.
    pub fn parity_at(&self, k: u32) -> Option<Parity> {
        self.times_chi_pow(k).map(|c| c.parity())
    }
}

impl From<CycInt> for RingElem {
    fn from(num: CycInt) -> RingElem {
        RingElem { num, three_exp: 0 }
    }
}

fn align(a: &RingElem, b: &RingElem) -> (CycInt, CycInt, u32) {
    use std::cmp::Ordering::*;
    match a.three_exp.cmp(&b.three_exp) {
        Equal => (a.num.clone(), b.num.clone(), a.three_exp),
        Less => {
            let f = BigInt::from(3).pow(b.three_exp - a.three_exp);
            (a.num.scale(&f), b.num.clone(), b.three_exp)
        }
        Greater => {
            let f = BigInt::from(3).pow(a.three_exp - b.three_exp);
            (a.num.clone(), b.num.scale(&f), a.three_exp)
        }
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (x, y, e) = align(self, rhs);
        RingElem::new(&x + &y, e)
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: RingElem) -> RingElem {
        &self + &rhs
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self + &(-rhs)
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, rhs: RingElem) -> RingElem {
        &self - &rhs
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            num: -&self.num,
            three_exp: self.three_exp,
        }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        if self.is_zero() || rhs.is_zero() {
            return RingElem::zero();
        }
        RingElem::new(&self.num * &rhs.num, self.three_exp + rhs.three_exp)
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: RingElem) -> RingElem {
        &self * &rhs
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.three_exp == 0 {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/3^{}", self.num, self.three_exp)
        }
    }
}

impl FromStr for RingElem {
    type Err = RingError;

    fn from_str(s: &str) -> Result<RingElem, RingError> {
        let err = || RingError::Parse(s.to_string());
        let t = s.trim();
        let Some(rest) = t.strip_prefix('(') else {
            return Ok(RingElem::from(t.parse::<CycInt>()?));
        };
        let close = rest.rfind(')').ok_or_else(err)?;
        let num: CycInt = rest[..close].parse()?;
        let tail = rest[close + 1..].trim();
        let exp = if tail.is_empty() {
            0
        } else {
            tail.strip_prefix("/3^")
                .ok_or_else(err)?
                .trim()
                .parse::<u32>()
                .map_err(|_| err())?
        };
        Ok(RingElem::new(num, exp))
    }
}

#[derive(Serialize, Deserialize)]
struct RingElemRepr {
    c: CycInt,
    p3: u32,
}

impl Serialize for RingElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RingElemRepr {
            c: self.num.clone(),
            p3: self.three_exp,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<RingElem, D::Error> {
        let r = RingElemRepr::deserialize(d)?;
        Ok(RingElem::new(r.c, r.p3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(c: [i64; 6]) -> CycInt {
        CycInt::from_i64s(c)
    }

    #[test]
    fn omega_squared_is_minus_one_minus_omega() {
        let w = CycInt::omega();
        assert_eq!(&w * &w, cyc([-1, 0, 0, -1, 0, 0]));
    }

    #[test]
    fn one_plus_two_omega_squares_to_minus_three() {
        let s = &CycInt::one() + &CycInt::omega().scale(&BigInt::from(2));
        assert_eq!(&s * &s, CycInt::from_int(-3));
    }

    #[test]
    fn xi_has_order_nine() {
        assert!(CycInt::xi_pow(9).is_one());
        assert_eq!(CycInt::xi_pow(10), CycInt::xi_pow(1));
        assert_eq!(&CycInt::xi_pow(4) * &CycInt::xi_pow(5), CycInt::one());
        assert_eq!(CycInt::xi_pow(-1), cyc([0, 0, -1, 0, 0, -1]));
    }

    #[test]
    fn conjugation() {
        assert_eq!(CycInt::one().conj(), CycInt::one());
        let xi = CycInt::xi_pow(1);
        assert!((&xi.conj() * &xi).is_one());
        let s = &CycInt::one() + &CycInt::omega().scale(&BigInt::from(2));
        assert_eq!(s.conj(), -&s);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(CycInt::chi().parity(), Parity::ZERO);
        assert_eq!(CycInt::from_int(3).parity(), Parity::ZERO);
        assert_eq!(cyc([1, 0, 0, 2, 0, 0]).parity(), Parity::ZERO);
        assert_eq!(CycInt::from_int(-1).parity(), Parity::TWO);
    }

    #[test]
    fn chi_division_examples() {
        let chi = CycInt::chi();
        assert_eq!((&chi * &chi).chi_divide().unwrap(), chi);
        let one_minus_omega = cyc([1, 0, 0, -1, 0, 0]);
        assert_eq!(one_minus_omega.chi_divide().unwrap(), cyc([1, 1, 1, 0, 0, 0]));
        assert_eq!(CycInt::one().chi_divide(), Err(RingError::NotDivisible));
    }

    #[test]
    fn denominator_exponents() {
        assert_eq!(RingElem::new(CycInt::one(), 1).denom_exp_chi(), 6);
        // (ξ − ξω)/3
        let y = RingElem::new(cyc([0, 1, 0, 0, -1, 0]), 1);
        assert_eq!(y.denom_exp_chi(), 3);
        assert_eq!(RingElem::one().denom_exp_chi(), 0);
        assert_eq!(RingElem::zero().denom_exp_chi(), 0);
    }

    #[test]
    fn denominator_exponent_against_search() {
        // brute force: smallest k with χᵏ·y integral
        let y = RingElem::new(cyc([0, 1, 0, 0, -1, 0]), 1);
        let k = (0..20).find(|&k| y.times_chi_pow(k).is_some()).unwrap();
        assert_eq!(k, 3);
        let third = RingElem::new(CycInt::one(), 1);
        assert_eq!((0..20).find(|&k| third.times_chi_pow(k).is_some()), Some(6));
    }

    #[test]
    fn normalization_strips_common_threes() {
        let r = RingElem::new(cyc([3, 6, 0, 0, 0, 9]), 2);
        assert_eq!(r.three_exp(), 1);
        assert_eq!(r.num(), &cyc([1, 2, 0, 0, 0, 3]));
        assert_eq!(RingElem::new(CycInt::zero(), 4).three_exp(), 0);
    }

    #[test]
    fn text_form() {
        let a = cyc([3, 0, -1, 0, 0, 2]);
        assert_eq!(a.to_string(), "3 - x^2 + 2*x^5");
        assert_eq!(CycInt::zero().to_string(), "0");
        assert_eq!("x^6".parse::<CycInt>().unwrap(), cyc([-1, 0, 0, -1, 0, 0]));
        let r = RingElem::new(cyc([0, -1, 0, 0, 0, 1]), 1);
        assert_eq!(r.to_string(), "(-x + x^5)/3^1");
        assert!("3*y".parse::<CycInt>().is_err());
        assert!("".parse::<CycInt>().is_err());
    }

    #[test]
    fn json_entry_shape() {
        let r = RingElem::new(cyc([1, 0, 0, 0, 0, -2]), 1);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"c":["1","0","0","0","0","-2"],"p3":1}"#
        );
    }

    fn arb_cyc() -> impl Strategy<Value = CycInt> {
        prop::array::uniform6(-50i64..50).prop_map(CycInt::from_i64s)
    }

    fn arb_ring() -> impl Strategy<Value = RingElem> {
        (arb_cyc(), 0u32..4).prop_map(|(c, e)| RingElem::new(c, e))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &CycInt::one(), a.clone());
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        }

        #[test]
        fn parity_is_a_homomorphism(a in arb_cyc(), b in arb_cyc()) {
            prop_assert_eq!((&a * &b).parity(), a.parity() * b.parity());
            prop_assert_eq!((&a + &b).parity(), a.parity() + b.parity());
            prop_assert_eq!(a.mul_xi().parity(), a.parity());
        }

        #[test]
        fn chi_division_inverts_multiplication(a in arb_cyc()) {
            let prod = &a * &CycInt::chi();
            prop_assert_eq!(prod.chi_divide().unwrap(), a.clone());
            match a.chi_divide() {
                Ok(q) => prop_assert_eq!(&q * &CycInt::chi(), a.clone()),
                Err(_) => prop_assert!(!a.parity().is_zero()),
            }
        }

        #[test]
        fn three_is_chi_to_the_sixth_times_unit(a in arb_cyc()) {
            prop_assume!(!a.is_zero());
            let mut cur = a.scale(&BigInt::from(3));
            for _ in 0..6 {
                cur = cur.chi_divide().unwrap();
            }
            // 3/χ⁶ is a fixed unit u; cur = u·a
            let u = CycInt::from_int(3);
            let mut u_red = u;
            for _ in 0..6 {
                u_red = u_red.chi_divide().unwrap();
            }
            prop_assert_eq!(cur, &u_red * &a);
        }

        #[test]
        fn denom_exp_is_subadditive(x in arb_ring(), y in arb_ring()) {
            let dxy = (&x * &y).denom_exp_chi();
            prop_assert!(dxy <= x.denom_exp_chi() + y.denom_exp_chi());
        }

        #[test]
        fn denom_exp_additive_on_chi_unit_multiples(x in arb_ring(), j in 0i64..9, e in 0u32..3) {
            // y = ξʲ/3ᵉ is a unit times χ^(−6e)
            let y = RingElem::new(CycInt::xi_pow(j), e);
            let coprime = x.num().chi_valuation() == Some(0);
            prop_assume!(x.denom_exp_chi() > 0 || coprime);
            prop_assert_eq!((&x * &y).denom_exp_chi(), x.denom_exp_chi() + y.denom_exp_chi());
        }

        #[test]
        fn serialization_round_trips(x in arb_ring()) {
            let json = serde_json::to_string(&x).unwrap();
            prop_assert_eq!(serde_json::from_str::<RingElem>(&json).unwrap(), x.clone());
            prop_assert_eq!(x.to_string().parse::<RingElem>().unwrap(), x.clone());
            prop_assert_eq!(x.num().to_string().parse::<CycInt>().unwrap(), x.num().clone());
        }
    }
}
