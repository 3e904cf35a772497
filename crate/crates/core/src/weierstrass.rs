//! Short Weierstrass curves `y^2 = x^3 + Ax + B` and their points over an
//! exact field.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::Field;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Curve<F: Field> {
    a: F,
    b: F,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point<F: Field> {
    Infinity,
    Affine { x: F, y: F },
}

impl<F: Field> Point<F> {
    pub fn affine(x: F, y: F) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            Point::Affine { x, .. } => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            Point::Affine { y, .. } => Some(y),
            Point::Infinity => None,
        }
    }

    /// Parses `inf` or `x,y`.
    pub fn parse(ctx: &F::Ctx, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Point::Infinity);
        }
        let (x, y) = split_pair(s)?;
        Ok(Point::affine(F::parse_in(ctx, x)?, F::parse_in(ctx, y)?))
    }
}

impl<F: Field> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

/// Splits `a,b` at the single top-level comma.
pub fn split_pair(s: &str) -> Result<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Ok((s[..i].trim(), s[i + 1..].trim())),
            _ => {}
        }
    }
    Err(Error::Parse(format!("expected a pair \"a,b\", got {s:?}")))
}

impl<F: Field> Curve<F> {
    pub fn new(a: F, b: F) -> Result<Self> {
        let c = Curve { a, b };
        if c.discriminant_factor().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// Parses `A,B` in the given field.
    pub fn parse(ctx: &F::Ctx, s: &str) -> Result<Self> {
        let (a, b) = split_pair(s)?;
        Curve::new(F::parse_in(ctx, a)?, F::parse_in(ctx, b)?)
    }

    pub fn a(&self) -> &F {
        &self.a
    }

    pub fn b(&self) -> &F {
        &self.b
    }

    pub fn ctx(&self) -> F::Ctx {
        self.a.context()
    }

    /// `4A^3 + 27B^2`
    pub fn discriminant_factor(&self) -> F {
        let ctx = self.ctx();
        F::from_int(&ctx, 4) * &self.a.pow(3) + F::from_int(&ctx, 27) * &self.b.square()
    }

    /// Right-hand side `x^3 + Ax + B`.
    pub fn rhs(&self, x: &F) -> F {
        x.pow(3) + &(self.a.clone() * x) + &self.b
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => y.square() == self.rhs(x),
        }
    }

    pub fn point(&self, x: F, y: F) -> Result<Point<F>> {
        let p = Point::affine(x, y);
        if !self.contains(&p) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(p)
    }

    fn check(&self, p: &Point<F>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::affine(x.clone(), -y.clone()),
        }
    }

    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Result<Point<F>> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Chord-tangent addition for points already known to lie on the curve.
    pub(crate) fn add_unchecked(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = match self.slope(x1, y1, x2, y2) {
            Some(l) => l,
            None => return Point::Infinity,
        };
        let x3 = lambda.square() - x1 - x2;
        let y3 = lambda * &(x1.clone() - &x3) - y1;
        Point::affine(x3, y3)
    }

    /// Slope of the chord or tangent; `None` when the line is vertical.
    fn slope(&self, x1: &F, y1: &F, x2: &F, y2: &F) -> Option<F> {
        if x1 != x2 {
            return Some((y2.clone() - y1) * &(x2.clone() - x1).inv().expect("distinct x"));
        }
        if y1 != y2 || y1.is_zero() {
            return None;
        }
        let ctx = self.ctx();
        let num = F::from_int(&ctx, 3) * &x1.square() + &self.a;
        let den = F::from_int(&ctx, 2) * y1;
        Some(num * &den.inv().expect("nonzero y"))
    }

    pub fn double(&self, p: &Point<F>) -> Result<Point<F>> {
        self.add(p, p)
    }

    pub fn scalar_mul(&self, k: i64, p: &Point<F>) -> Result<Point<F>> {
        self.check(p)?;
        Ok(self.scalar_mul_unchecked(k, p))
    }

    pub(crate) fn scalar_mul_unchecked(&self, k: i64, p: &Point<F>) -> Point<F> {
        let mut base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Point::Infinity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Least `k` in `1..=bound` with `[k]P = O`.
    pub fn point_order(&self, p: &Point<F>, bound: u64) -> Option<u64> {
        let mut q = p.clone();
        for k in 1..=bound {
            if q.is_infinity() {
                return Some(k);
            }
            q = self.add_unchecked(&q, p);
        }
        None
    }

    /// `y^2 = x^3 + D^2 A x + D^3 B`.
    pub fn quadratic_twist(&self, d: &F) -> Result<Curve<F>> {
        if d.is_zero() {
            return Err(Error::ZeroTwist);
        }
        Curve::new(d.square() * &self.a, d.pow(3) * &self.b)
    }

    /// Whether `q` is a multiple of `p`.
    fn in_span(&self, p: &Point<F>, q: &Point<F>, m: u64) -> bool {
        let mut t = Point::Infinity;
        for _ in 0..m {
            if t == *q {
                return true;
            }
            t = self.add_unchecked(&t, p);
        }
        false
    }

    /// Normalized line through `r` and `s` divided by the vertical at `r + s`,
    /// evaluated at `at`.
    fn miller_step(&self, r: &Point<F>, s: &Point<F>, at: &Point<F>) -> Result<F> {
        let ctx = self.ctx();
        let (Point::Affine { x: r_x, y: r_y }, Point::Affine { x: s_x, y: s_y }) = (r, s) else {
            return Ok(F::one_in(&ctx));
        };
        let Point::Affine { x, y } = at else {
            return Err(Error::InvalidArgument("pairing evaluated at infinity".into()));
        };
        match self.slope(r_x, r_y, s_x, s_y) {
            None => Ok(x.clone() - r_x),
            Some(lambda) => {
                let line = y.clone() - r_y - &(lambda * &(x.clone() - r_x));
                let sum = self.add_unchecked(r, s);
                let vertical = x.clone() - sum.x().expect("finite sum");
                line.div(&vertical)
            }
        }
    }

    /// Miller function with divisor `m(P) - m(O)` evaluated at `at`.
    fn miller(&self, p: &Point<F>, at: &Point<F>, m: u64) -> Result<F> {
        let mut f = F::one_in(&self.ctx());
        let mut t = p.clone();
        for _ in 1..m {
            f = f * &self.miller_step(&t, p, at)?;
            t = self.add_unchecked(&t, p);
        }
        Ok(f)
    }

    /// Weil pairing `e_m(P, Q)`, computed as `(-1)^m f_P(Q) / f_Q(P)` from
    /// normalized Miller functions. Dependent inputs pair to 1.
    pub fn weil_pairing(&self, p: &Point<F>, q: &Point<F>, m: u64) -> Result<F> {
        self.check(p)?;
        self.check(q)?;
        if m == 0 {
            return Err(Error::InvalidArgument("pairing degree must be positive".into()));
        }
        if !self.scalar_mul_unchecked(m as i64, p).is_infinity()
            || !self.scalar_mul_unchecked(m as i64, q).is_infinity()
        {
            return Err(Error::OrderMismatch(m));
        }
        let ctx = self.ctx();
        let one = F::one_in(&ctx);
        if p.is_infinity() || q.is_infinity() || self.in_span(p, q, m) || self.in_span(q, p, m) {
            return Ok(one);
        }
        let num = self.miller(p, q, m)?;
        let den = self.miller(q, p, m)?;
        let mut e = num.div(&den)?;
        if m % 2 == 1 {
            e = -e;
        }
        if !e.pow(m).is_one() {
            return Err(Error::FieldTooSmall(m));
        }
        Ok(e)
    }
}

impl<F: Field> fmt::Display for Curve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})*x + ({})", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio, QuadField, QuadScalar, Rational};

    fn curve(a: i64, b: i64) -> Curve<Rational> {
        Curve::new(rat(a), rat(b)).unwrap()
    }

    fn pt(x: i64, y: i64) -> Point<Rational> {
        Point::affine(rat(x), rat(y))
    }

    #[test]
    fn curve_construction() {
        assert!(Curve::new(rat(1), rat(0)).is_ok());
        assert_eq!(Curve::new(rat(0), rat(0)), Err(Error::SingularCurve));
        assert_eq!(Curve::new(rat(-3), rat(2)), Err(Error::SingularCurve));
    }

    #[test]
    fn doubling_on_x3_plus_4x() {
        let e = curve(4, 0);
        assert_eq!(e.scalar_mul(2, &pt(2, 4)).unwrap(), pt(0, 0));
    }

    #[test]
    fn identity_and_inverse() {
        let e = curve(0, 1);
        let p = pt(2, 3);
        assert_eq!(e.add(&p, &Point::Infinity).unwrap(), p);
        assert_eq!(e.add(&p, &e.neg(&p)).unwrap(), Point::Infinity);
        assert_eq!(e.scalar_mul(0, &p).unwrap(), Point::Infinity);
        assert_eq!(e.scalar_mul(-5, &p).unwrap(), e.neg(&e.scalar_mul(5, &p).unwrap()));
        assert_eq!(e.add(&p, &pt(1, 1)), Err(Error::PointNotOnCurve));
    }

    #[test]
    fn seven_torsion_point() {
        let e = curve(-43, 166);
        let p = pt(3, 8);
        // Brute-force repeated addition.
        let mut q = p.clone();
        let mut k = 1;
        while !q.is_infinity() {
            q = e.add(&q, &p).unwrap();
            k += 1;
        }
        assert_eq!(k, 7);
        assert_eq!(e.scalar_mul(7, &p).unwrap(), Point::Infinity);
        assert_eq!(e.point_order(&p, 12), Some(7));
        assert_eq!(e.point_order(&p, 6), None);
    }

    #[test]
    fn point_orders() {
        assert_eq!(curve(1, 0).point_order(&pt(0, 0), 12), Some(2));
        assert_eq!(curve(0, 1).point_order(&pt(2, 3), 12), Some(6));
        assert_eq!(curve(0, 1).point_order(&Point::Infinity, 12), Some(1));
    }

    #[test]
    fn twists() {
        let e = curve(1, 0);
        assert_eq!(e.quadratic_twist(&rat(2)).unwrap(), curve(4, 0));
        assert_eq!(curve(3, 5).quadratic_twist(&rat(1)).unwrap(), curve(3, 5));
        assert_eq!(curve(1, 1).quadratic_twist(&rat(-1)).unwrap(), curve(1, -1));
        assert_eq!(e.quadratic_twist(&rat(0)), Err(Error::ZeroTwist));
        let (d1, d2) = (ratio(3, 2), rat(-5));
        let c = curve(2, 7);
        assert_eq!(
            c.quadratic_twist(&d1).unwrap().quadratic_twist(&d2).unwrap(),
            c.quadratic_twist(&(d1 * d2)).unwrap()
        );
    }

    #[test]
    fn pairing_on_two_torsion() {
        let e = curve(-1, 0);
        let (p, q) = (pt(0, 0), pt(1, 0));
        assert_eq!(e.weil_pairing(&p, &q, 2).unwrap(), rat(-1));
        assert_eq!(e.weil_pairing(&p, &p, 2).unwrap(), rat(1));
        assert_eq!(e.weil_pairing(&p, &pt(-1, 0), 2).unwrap(), rat(-1));
        assert_eq!(e.weil_pairing(&q, &pt(-1, 0), 2).unwrap(), rat(-1));
        assert_eq!(e.weil_pairing(&p, &Point::Infinity, 2).unwrap(), rat(1));
        assert_eq!(
            curve(0, 1).weil_pairing(&pt(2, 3), &pt(-1, 0), 2),
            Err(Error::OrderMismatch(2))
        );
    }

    /// All points of `E[m]` from a list of affine candidates, checked for order.
    fn torsion_points<F: Field>(e: &Curve<F>, m: u64, cands: &[Point<F>]) -> Vec<Point<F>> {
        let mut pts = vec![Point::Infinity];
        for p in cands {
            assert!(e.contains(p));
            assert!(e.scalar_mul(m as i64, p).unwrap().is_infinity());
            pts.push(p.clone());
        }
        pts
    }

    #[test]
    fn pairing_bilinear_on_full_two_torsion() {
        let e = curve(-1, 0);
        let pts = torsion_points(&e, 2, &[pt(0, 0), pt(1, 0), pt(-1, 0)]);
        for p1 in &pts {
            for p2 in &pts {
                for q in &pts {
                    let lhs = e.weil_pairing(&e.add(p1, p2).unwrap(), q, 2).unwrap();
                    let rhs = e.weil_pairing(p1, q, 2).unwrap() * e.weil_pairing(p2, q, 2).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn pairing_bilinear_on_full_three_torsion() {
        // y^2 = x^3 + 1/4 ... use y^2 = x^3 + 16 over Q(sqrt(-3)): E[3] has
        // x-coordinates 0 and the roots of x^3 = -64.
        let k = QuadField::new(-3).unwrap();
        let q = |a: Rational, b: Rational| k.element(a, b);
        let e = Curve::new(QuadScalar::from_int(&k, 0), QuadScalar::from_int(&k, 16)).unwrap();
        // x = -4, -4w, -4w^2 with w = (-1 + sqrt(-3))/2; y^2 = x^3 + 16 = -48.
        let w = q(ratio(-1, 2), ratio(1, 2));
        let y48 = q(rat(0), rat(4)); // 4 sqrt(-3), square -48
        let mut cands = vec![];
        for y in [QuadScalar::from_int(&k, 4), QuadScalar::from_int(&k, -4)] {
            cands.push(Point::affine(QuadScalar::from_int(&k, 0), y));
        }
        for x in [
            QuadScalar::from_int(&k, -4),
            QuadScalar::from_int(&k, -4) * &w,
            QuadScalar::from_int(&k, -4) * &w.square(),
        ] {
            for y in [y48.clone(), -y48.clone()] {
                cands.push(Point::affine(x.clone(), y));
            }
        }
        let pts = torsion_points(&e, 3, &cands);
        assert_eq!(pts.len(), 9);
        let one = QuadScalar::one_in(&k);
        let mut saw_primitive = false;
        for p1 in &pts {
            assert_eq!(e.weil_pairing(p1, p1, 3).unwrap(), one);
            for p2 in &pts {
                for r in &pts {
                    let lhs = e.weil_pairing(&e.add(p1, p2).unwrap(), r, 3).unwrap();
                    let rhs = e.weil_pairing(p1, r, 3).unwrap() * e.weil_pairing(p2, r, 3).unwrap();
                    assert_eq!(lhs, rhs);
                    let v = e.weil_pairing(p1, r, 3).unwrap();
                    assert_eq!(v.pow(3), one);
                    saw_primitive |= v != one;
                }
            }
        }
        assert!(saw_primitive);
    }

    #[test]
    fn literals() {
        let e = Curve::<Rational>::parse(&(), "-43, 166").unwrap();
        assert_eq!(e, curve(-43, 166));
        assert_eq!(Point::<Rational>::parse(&(), "3,8").unwrap(), pt(3, 8));
        assert_eq!(Point::<Rational>::parse(&(), "inf").unwrap(), Point::Infinity);
        assert!(Curve::<Rational>::parse(&(), "1").is_err());
    }
}
