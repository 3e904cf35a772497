//! Exact scalars: the rationals and quadratic fields `Q(sqrt(d))`.
//!
//! Everything downstream (polynomials, curves, torsion) is generic over the
//! [`Field`] trait so the same code runs over `Q` and over a fixed quadratic
//! field. The quadratic field context `d` travels with each element.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact field arithmetic shared by `Q` and `Q(sqrt(d))`.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Per-field context (unit for `Q`, the discriminant parameter for quadratic fields).
    type Ctx: Clone + Debug + PartialEq + Eq + Send + Sync + 'static;

    fn context(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// A square root inside the same field, if one exists.
    fn sqrt(&self) -> Option<Self>;
    /// Image under the nontrivial automorphism (identity over `Q`).
    fn conj(&self) -> Self;
    /// `Some(q)` when the element lies in `Q`.
    fn to_rational(&self) -> Option<Rational>;
    /// Rational coordinates `(a, b)` of `a + b sqrt(d)`.
    fn coordinates(&self) -> (Rational, Rational);
    /// Whether the field contains a primitive `m`-th root of unity.
    fn has_root_of_unity(ctx: &Self::Ctx, m: u64) -> bool;
    fn describe(ctx: &Self::Ctx) -> String;
    /// For a prime `p` of degree one in this field, a residue `r` used to
    /// embed the field into `F_p` (the image of `sqrt(d)`). `None` when `p`
    /// does not split.
    fn residue_root(ctx: &Self::Ctx, p: u64) -> Option<u64>;
    /// Reduction modulo the degree-one prime selected by `root`; `None` if
    /// the element is not integral there.
    fn reduce_mod(&self, p: u64, root: u64) -> Option<u64>;
    fn parse_in(ctx: &Self::Ctx, s: &str) -> Result<Self>;
    /// Degree of the field over `Q`.
    fn extension_degree() -> usize;

    fn from_int(ctx: &Self::Ctx, n: i64) -> Self {
        Self::from_rational(ctx, &rat(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one_in(&self.context())
    }

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * &other.inv().ok_or(Error::DivisionByZero)?)
    }

    fn square(&self) -> Self {
        self.clone() * self
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.context());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(q.numer())?;
    let d = int_sqrt_exact(q.denom())?;
    Some(Rational::new(n, d))
}

/// Exact square root of a nonnegative integer.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn reduce_rational(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return None;
    }
    let num = q.numer().mod_floor(&pb).to_u64().unwrap();
    Some(mulmod(num, invmod(den, p)?, p))
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn invmod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (a as i128 % p as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(p as i128) as u64)
}

/// Tonelli-Shanks square root modulo an odd prime.
pub(crate) fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

impl Field for Rational {
    type Ctx = ();

    fn context(&self) {}
    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn from_rational(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn coordinates(&self) -> (Rational, Rational) {
        (self.clone(), Rational::zero())
    }
    fn has_root_of_unity(_: &(), m: u64) -> bool {
        m <= 2
    }
    fn describe(_: &()) -> String {
        "Q".to_string()
    }
    fn residue_root(_: &(), _p: u64) -> Option<u64> {
        Some(0)
    }
    fn reduce_mod(&self, p: u64, _root: u64) -> Option<u64> {
        reduce_rational(self, p)
    }
    fn parse_in(_: &(), s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn extension_degree() -> usize {
        1
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    s.parse::<Rational>()
        .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

/// The quadratic field `Q(sqrt(d))` with `d` squarefree and `d != 0, 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) {
            return Err(Error::InvalidArgument(format!(
                "quadratic field parameter {d} must be squarefree and not 0 or 1"
            )));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn sqrt_d(&self) -> QuadScalar {
        QuadScalar::new(self, Rational::zero(), Rational::one())
    }

    pub fn element(&self, a: Rational, b: Rational) -> QuadScalar {
        QuadScalar::new(self, a, b)
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

/// `a + b sqrt(d)` with rational `a`, `b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadScalar {
    pub fn new(field: &QuadField, a: Rational, b: Rational) -> Self {
        QuadScalar { a, b, d: field.d }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn field(&self) -> QuadField {
        QuadField { d: self.d }
    }

    /// Field norm `a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed quadratic field contexts");
    }
}

impl Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("sqrt({})", self.d);
        if Zero::is_zero(&self.b) {
            return write!(f, "{}", self.a);
        }
        let b_part = if One::is_one(&self.b) {
            root
        } else if self.b == -Rational::one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.b)
        };
        if Zero::is_zero(&self.a) {
            write!(f, "{b_part}")
        } else if b_part.starts_with('-') {
            write!(f, "{}{b_part}", self.a)
        } else {
            write!(f, "{}+{b_part}", self.a)
        }
    }
}

impl Add for QuadScalar {
    type Output = QuadScalar;
    fn add(self, o: QuadScalar) -> QuadScalar {
        self + &o
    }
}

impl Add<&QuadScalar> for QuadScalar {
    type Output = QuadScalar;
    fn add(self, o: &QuadScalar) -> QuadScalar {
        self.check(o);
        QuadScalar {
            a: self.a + &o.a,
            b: self.b + &o.b,
            d: self.d,
        }
    }
}

impl Sub for QuadScalar {
    type Output = QuadScalar;
    fn sub(self, o: QuadScalar) -> QuadScalar {
        self - &o
    }
}

impl Sub<&QuadScalar> for QuadScalar {
    type Output = QuadScalar;
    fn sub(self, o: &QuadScalar) -> QuadScalar {
        self.check(o);
        QuadScalar {
            a: self.a - &o.a,
            b: self.b - &o.b,
            d: self.d,
        }
    }
}

impl Mul for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, o: QuadScalar) -> QuadScalar {
        self * &o
    }
}

impl Mul<&QuadScalar> for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, o: &QuadScalar) -> QuadScalar {
        self.check(o);
        let a = &self.a * &o.a + &self.b * &o.b * rat(self.d);
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadScalar { a, b, d: self.d }
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Field for QuadScalar {
    type Ctx = QuadField;

    fn context(&self) -> QuadField {
        QuadField { d: self.d }
    }
    fn zero_in(ctx: &QuadField) -> Self {
        QuadScalar {
            a: Rational::zero(),
            b: Rational::zero(),
            d: ctx.d,
        }
    }
    fn one_in(ctx: &QuadField) -> Self {
        QuadScalar {
            a: Rational::one(),
            b: Rational::zero(),
            d: ctx.d,
        }
    }
    fn from_rational(ctx: &QuadField, r: &Rational) -> Self {
        QuadScalar {
            a: r.clone(),
            b: Rational::zero(),
            d: ctx.d,
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        let n = self.norm();
        Some(QuadScalar {
            a: &self.a / &n,
            b: -(&self.b / &n),
            d: self.d,
        })
    }
    fn sqrt(&self) -> Option<Self> {
        let d = rat(self.d);
        if Zero::is_zero(&self.b) {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(QuadScalar {
                    a: r,
                    b: Rational::zero(),
                    d: self.d,
                });
            }
            // (q sqrt(d))^2 = q^2 d
            let q = rational_sqrt(&(&self.a / &d))?;
            return Some(QuadScalar {
                a: Rational::zero(),
                b: q,
                d: self.d,
            });
        }
        // (p + q sqrt d)^2 = a + b sqrt d  =>  p^2 = (a +- sqrt(a^2 - d b^2)) / 2, q = b / 2p
        let n = rational_sqrt(&self.norm())?;
        for cand in [(&self.a + &n) / rat(2), (&self.a - &n) / rat(2)] {
            if let Some(p) = rational_sqrt(&cand) {
                if Zero::is_zero(&p) {
                    continue;
                }
                let q = &self.b / (rat(2) * &p);
                return Some(QuadScalar { a: p, b: q, d: self.d });
            }
        }
        None
    }
    fn conj(&self) -> Self {
        QuadScalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
    fn to_rational(&self) -> Option<Rational> {
        Zero::is_zero(&self.b).then(|| self.a.clone())
    }
    fn coordinates(&self) -> (Rational, Rational) {
        (self.a.clone(), self.b.clone())
    }
    fn has_root_of_unity(ctx: &QuadField, m: u64) -> bool {
        match m {
            1 | 2 => true,
            3 | 6 => ctx.d == -3,
            4 => ctx.d == -1,
            _ => false,
        }
    }
    fn describe(ctx: &QuadField) -> String {
        format!("Q(sqrt({}))", ctx.d)
    }
    fn residue_root(ctx: &QuadField, p: u64) -> Option<u64> {
        let dm = (ctx.d as i128).rem_euclid(p as i128) as u64;
        if p == 2 || dm == 0 {
            return None;
        }
        sqrt_mod(dm, p)
    }
    fn reduce_mod(&self, p: u64, root: u64) -> Option<u64> {
        let a = reduce_rational(&self.a, p)?;
        let b = reduce_rational(&self.b, p)?;
        Some((a + mulmod(b, root, p)) % p)
    }
    fn parse_in(ctx: &QuadField, s: &str) -> Result<Self> {
        parse_quad(ctx, s)
    }
    fn extension_degree() -> usize {
        2
    }
}

/// Parses `a`, `a+b*sqrt(d)`, `b*sqrt(d)`, `sqrt(d)`, `-sqrt(d)` and sums of
/// such terms, with `a`, `b` written as `p/q` or integers.
fn parse_quad(ctx: &QuadField, s: &str) -> Result<QuadScalar> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let mut terms = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    let bytes = compact.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'/' && bytes[i - 1] != b'*' => {
                terms.push(&compact[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&compact[start..]);
    let mut acc = QuadScalar::zero_in(ctx);
    for term in terms {
        acc = acc + parse_quad_term(ctx, term)?;
    }
    Ok(acc)
}

fn parse_quad_term(ctx: &QuadField, term: &str) -> Result<QuadScalar> {
    let Some(pos) = term.find("sqrt(") else {
        return Ok(QuadScalar::from_rational(ctx, &parse_rational(term)?));
    };
    let close = term[pos..]
        .find(')')
        .ok_or_else(|| Error::Parse(format!("unclosed sqrt in {term:?}")))?
        + pos;
    let d: i64 = term[pos + 5..close]
        .parse()
        .map_err(|_| Error::Parse(format!("bad sqrt argument in {term:?}")))?;
    if d != ctx.d {
        return Err(Error::Parse(format!("sqrt({d}) does not belong to Q(sqrt({}))", ctx.d)));
    }
    let before = &term[..pos];
    let after = &term[close + 1..];
    let coeff_text = match (before.strip_suffix('*'), after.strip_prefix('*')) {
        (Some(c), _) => c.to_string(),
        (None, Some(c)) => format!("{before}{c}"),
        (None, None) => format!("{before}1"),
    };
    let coeff_text = match coeff_text.as_str() {
        "+1" | "1" => "1".to_string(),
        "-1" => "-1".to_string(),
        "+" => "1".to_string(),
        "-" => "-1".to_string(),
        other => other.to_string(),
    };
    let b = parse_rational(&coeff_text)?;
    Ok(QuadScalar {
        a: Rational::zero(),
        b,
        d: ctx.d,
    })
}

/// Naive height of a curve `y^2 = x^3 + Ax + B`: the height of the projective
/// point `(A^3 : B^2 : 1)` written as a primitive integer triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HeightValue(pub BigUint);

impl Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn naive_height(a: &Rational, b: &Rational) -> HeightValue {
    let a3 = a * a * a;
    let b2 = b * b;
    let l = a3.denom().lcm(b2.denom());
    let coords = [a3.numer() * (&l / a3.denom()), b2.numer() * (&l / b2.denom()), l];
    let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let h = coords.iter().map(|c| (c / &g).abs()).max().unwrap();
    HeightValue(h.to_biguint().expect("absolute value"))
}

/// Square root of `x` within its own field.
pub fn sqrt_in_field<F: Field>(x: &F) -> Option<F> {
    x.sqrt()
}

/// Whether `x / y` is a square in the ambient field.
pub fn same_square_class<F: Field>(x: &F, y: &F) -> Result<bool> {
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(x.div(y)?.sqrt().is_some())
}
