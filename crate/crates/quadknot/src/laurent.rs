//! Exact Laurent polynomials in one variable `A` with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Sparse Laurent polynomial. No stored coefficient is zero.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyParseError {
    #[error("empty polynomial text")]
    Empty,
    #[error("unexpected character {found:?} at byte {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("bad exponent at byte {pos}")]
    BadExponent { pos: usize },
    #[error("missing term at byte {pos}")]
    MissingTerm { pos: usize },
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * A^exp`.
    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// The loop value `-A^2 - A^-2`.
    pub fn loop_factor() -> Self {
        Self::from_terms([(2, -1), (-2, -1)])
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Max exponent minus min exponent; zero for the zero polynomial.
    pub fn span(&self) -> i64 {
        match (self.max_exp(), self.min_exp()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0,
        }
    }

    /// Replace `A` by `A^-1`.
    pub fn substitute_inverse(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiply by `A^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Value at `A = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact quotient if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        let (dlo, dhi) = (divisor.min_exp()?, divisor.max_exp()?);
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while let Some(hi) = rem.max_exp() {
            let lo = rem.min_exp().expect("nonzero");
            if hi - lo < dhi - dlo {
                return None;
            }
            let c = rem.coeff(hi);
            if !(&c % &lead).is_zero() {
                return None;
            }
            let term = LaurentPoly::monomial(c / &lead, hi - dhi);
            rem = &rem - &(&term * divisor);
            quot += &term;
        }
        Some(quot)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending exponents, e.g. `-A^6 - 3A^2 - 3A^-2 - A^-6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("A")?,
                1 => write!(f, "{mag}A")?,
                _ if unit => write!(f, "A^{e}")?,
                _ => write!(f, "{mag}A^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = PolyParseError;

    /// Parses the `Display` form; whitespace and an optional `*` between
    /// coefficient and `A` are accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        let digits = |pos: &mut usize| -> Option<(usize, usize)> {
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            (*pos > start).then_some((start, *pos))
        };
        let unexpected = |pos: usize| PolyParseError::Unexpected {
            pos,
            found: s[pos..].chars().next().unwrap_or('\0'),
        };

        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(PolyParseError::Empty);
        }
        let mut poly = LaurentPoly::zero();
        let mut first = true;
        loop {
            skip_ws(&mut pos);
            let mut negative = false;
            if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
                negative = bytes[pos] == b'-';
                pos += 1;
                skip_ws(&mut pos);
            } else if !first {
                return Err(unexpected(pos));
            }
            if pos == bytes.len() {
                return Err(PolyParseError::MissingTerm { pos });
            }
            let coeff = match digits(&mut pos) {
                Some((a, b)) => s[a..b].parse::<BigInt>().expect("ascii digits"),
                None => BigInt::one(),
            };
            let had_digits = pos > 0 && bytes[pos - 1].is_ascii_digit();
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
            }
            let mut exp = 0i64;
            if pos < bytes.len() && bytes[pos] == b'A' {
                pos += 1;
                exp = 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let start = pos;
                    let mut neg_exp = false;
                    if pos < bytes.len() && bytes[pos] == b'-' {
                        neg_exp = true;
                        pos += 1;
                    }
                    let (a, b) = digits(&mut pos).ok_or(PolyParseError::BadExponent { pos: start })?;
                    let mag: i64 = s[a..b]
                        .parse()
                        .map_err(|_| PolyParseError::BadExponent { pos: start })?;
                    exp = if neg_exp { -mag } else { mag };
                }
            } else if !had_digits {
                return Err(if pos < bytes.len() {
                    unexpected(pos)
                } else {
                    PolyParseError::MissingTerm { pos }
                });
            }
            poly.add_term(exp, if negative { -coeff } else { coeff });
            first = false;
            skip_ws(&mut pos);
            if pos == bytes.len() {
                return Ok(poly);
            }
        }
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

pub fn poly_add(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    p + q
}

pub fn poly_mul(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    p * q
}

pub fn poly_span(p: &LaurentPoly) -> i64 {
    p.span()
}

pub fn poly_substitute_inverse(p: &LaurentPoly) -> LaurentPoly {
    p.substitute_inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn add_cancels_and_merges() {
        assert!((&p("A^2") + &p("-A^2")).is_zero());
        assert_eq!(&p("A^2 + A^-2") + &p("A^2"), p("2A^2 + A^-2"));
        assert!((&p("-A^2 - A^-2") + &p("A^2 + A^-2")).is_zero());
    }

    #[test]
    fn loop_factor_powers() {
        let d = LaurentPoly::loop_factor();
        assert_eq!(d.pow(2), p("A^4 + 2 + A^-4"));
        assert_eq!(d.pow(3), p("-A^6 - 3A^2 - 3A^-2 - A^-6"));
        assert_eq!(&d * &LaurentPoly::one(), d);
    }

    #[test]
    fn span_and_inverse() {
        assert_eq!(p("A^6 + A^-2").span(), 8);
        assert_eq!(LaurentPoly::one().span(), 0);
        assert_eq!(LaurentPoly::zero().span(), 0);
        assert_eq!(p("A^6").substitute_inverse(), p("A^-6"));
        assert_eq!(p("A^2 + 2A^-4").substitute_inverse(), p("A^-2 + 2A^4"));
        let d = LaurentPoly::loop_factor();
        assert_eq!(d.substitute_inverse(), d);
    }

    #[test]
    fn display_forms() {
        assert_eq!(LaurentPoly::loop_factor().pow(3).to_string(), "-A^6 - 3A^2 - 3A^-2 - A^-6");
        assert_eq!(p("A + 1 - A^-1").to_string(), "A + 1 - A^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(p("2*A^3").to_string(), "2A^3");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert_eq!("".parse::<LaurentPoly>(), Err(PolyParseError::Empty));
        assert!("A^".parse::<LaurentPoly>().is_err());
        assert!("A A".parse::<LaurentPoly>().is_err());
        assert!("3 +".parse::<LaurentPoly>().is_err());
        assert!("x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn exact_division() {
        let d = LaurentPoly::loop_factor();
        let q = p("A^5 - 2A^-3");
        assert_eq!((&q * &d).div_exact(&d), Some(q));
        assert_eq!(p("A").div_exact(&d), None);
    }
}
