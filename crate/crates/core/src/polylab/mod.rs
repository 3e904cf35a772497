//! Dense univariate polynomials over exact coefficient domains.
//!
//! [`Poly`] works over any [`Field`]; [`ZPoly`] and [`FpPoly`] are the
//! integer and prime-field workhorses used for factorization and root finding.

mod hensel;
pub mod modp;
mod roots;
mod zpoly;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{Field, QuadField, QuadScalar, Rational};

pub use hensel::{factor_over_z, small_factors};
pub use modp::{factor_mod_p, FpPoly};
pub use roots::{rational_roots, roots_in_field, roots_in_quad_field, roots_with_multiplicity};
pub use zpoly::ZPoly;

/// Unit times a product of factors with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<P, U> {
    pub unit: U,
    pub factors: Vec<(P, usize)>,
}

/// Polynomial with coefficients in `F`, stored ascending and trimmed so the
/// leading coefficient is nonzero. The zero polynomial has no coefficients
/// and no degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> Poly<F> {
    pub fn new(ctx: &F::Ctx, coeffs: Vec<F>) -> Self {
        let mut p = Poly {
            coeffs,
            ctx: ctx.clone(),
        };
        p.trim();
        p
    }

    pub fn from_rationals(ctx: &F::Ctx, coeffs: &[Rational]) -> Self {
        Poly::new(ctx, coeffs.iter().map(|c| F::from_rational(ctx, c)).collect())
    }

    pub fn from_ints(ctx: &F::Ctx, coeffs: &[i64]) -> Self {
        Poly::new(ctx, coeffs.iter().map(|&c| F::from_int(ctx, c)).collect())
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Poly {
            coeffs: vec![],
            ctx: ctx.clone(),
        }
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Poly::constant(F::one_in(ctx))
    }

    pub fn x(ctx: &F::Ctx) -> Self {
        Poly::new(ctx, vec![F::zero_in(ctx), F::one_in(ctx)])
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.context();
        Poly::new(&ctx, vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: &F) -> Self {
        let ctx = r.context();
        Poly::new(&ctx, vec![-r.clone(), F::one_in(&ctx)])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| F::zero_in(&self.ctx))
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero_in(&self.ctx), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(&self.ctx, (0..n).map(|i| self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(&self.ctx, (0..n).map(|i| self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly::new(&self.ctx, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![F::zero_in(&self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let t = std::mem::replace(&mut out[i + j], F::zero_in(&self.ctx));
                out[i + j] = t + &(a.clone() * b);
            }
        }
        Poly::new(&self.ctx, out)
    }

    pub fn scale(&self, k: &F) -> Self {
        Poly::new(&self.ctx, self.coeffs.iter().map(|c| c.clone() * k).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Poly::one(&self.ctx), |acc, _| acc.mul(self))
    }

    /// `p(k x)`: scales the coefficient of `x^i` by `k^i`.
    pub fn scale_variable(&self, k: &F) -> Self {
        let mut pw = F::one_in(&self.ctx);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * &pw);
            pw = pw * k;
        }
        Poly::new(&self.ctx, out)
    }

    /// `p(q(x))`
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs.iter().rev().fold(Poly::zero(&self.ctx), |acc, c| {
            acc.mul(q).add(&Poly::constant(c.clone()))
        })
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            &self.ctx,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * &F::from_int(&self.ctx, i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn conj(&self) -> Self {
        Poly::new(&self.ctx, self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(ctx, self.coeffs.iter().map(f).collect())
    }

    /// The same polynomial over `Q`, if every coefficient is rational.
    pub fn to_rational(&self) -> Option<Poly<Rational>> {
        let c = self
            .coeffs
            .iter()
            .map(|c| c.to_rational())
            .collect::<Option<Vec<_>>>()?;
        Some(Poly::new(&(), c))
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lc().ok_or(Error::DivisionByZero)?;
        let inv = dl.inv().ok_or(Error::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![F::zero_in(&self.ctx); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone() * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = std::mem::replace(&mut r[i + j], F::zero_in(&self.ctx));
                    r[i + j] = t - &(c.clone() * dc);
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(&self.ctx, q), Poly::new(&self.ctx, r)))
    }

    /// Quotient `q` with `q * den = self` exactly.
    pub fn exact_divide(&self, den: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(den)?;
        if !r.is_zero() {
            return Err(Error::NonzeroRemainder);
        }
        Ok(q)
    }

    /// Monic greatest common divisor (Euclid over the field); `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), o.monic());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.exact_divide(&g).expect("gcd divides").monic()
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Renders `c_n*x^n + ... + c_0`, highest degree first. Coefficients with an
/// irrational part are parenthesized.
impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.to_string()))
            .collect();
        f.write_str(&render_terms(&terms, "x"))
    }
}

/// Joins `(power, coefficient text)` pairs into a signed sum.
pub(crate) fn render_terms(terms: &[(usize, String)], var: &str) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in terms.iter().enumerate() {
        let compound = c.contains("sqrt") && (c[1..].contains('+') || c[1..].contains('-'));
        let (neg, mag) = if compound {
            (false, format!("({c})"))
        } else if let Some(rest) = c.strip_prefix('-') {
            (true, rest.to_string())
        } else {
            (false, c.clone())
        };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let body = match (mono.is_empty(), mag.as_str()) {
            (true, m) => m.to_string(),
            (false, "1") => mono,
            (false, m) => format!("{m}*{mono}"),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

/// Parses a sum of terms `c`, `c*x`, `c*x^k`, `x^k`, `-x`, ... in any order.
/// Coefficients containing `sqrt(d)` with an additive part must be
/// parenthesized, e.g. `(1+sqrt(-3))*x^2`.
pub fn parse_poly<F: Field>(ctx: &F::Ctx, text: &str) -> Result<Poly<F>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let b = s.as_bytes();
    for i in 0..b.len() {
        match b[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && !matches!(b[i - 1], b'*' | b'/' | b'^') => {
                terms.push(&s[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&s[start..]);
    let mut coeffs: Vec<F> = Vec::new();
    for term in terms {
        let (sign, body) = match term.as_bytes()[0] {
            b'-' => (-1, &term[1..]),
            b'+' => (1, &term[1..]),
            _ => (1, term),
        };
        let (coef_text, power) = split_monomial(body)?;
        let mut c = match coef_text {
            None => F::one_in(ctx),
            Some(t) => {
                let inner = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t);
                F::parse_in(ctx, inner)?
            }
        };
        if sign < 0 {
            c = -c;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, F::zero_in(ctx));
        }
        let t = std::mem::replace(&mut coeffs[power], F::zero_in(ctx));
        coeffs[power] = t + &c;
    }
    Ok(Poly::new(ctx, coeffs))
}

fn split_monomial(body: &str) -> Result<(Option<&str>, usize)> {
    let Some(xpos) = body.rfind('x') else {
        return Ok((Some(body), 0));
    };
    let coef = body[..xpos].strip_suffix('*').unwrap_or(&body[..xpos]);
    let tail = &body[xpos + 1..];
    let power = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^')
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad monomial {body:?}")))?
    };
    Ok(((!coef.is_empty()).then_some(coef), power))
}

/// Compact JSON form: ascending coefficient strings plus the optional
/// quadratic field parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<i64>,
    pub coeffs: Vec<String>,
}

impl Poly<Rational> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            field: None,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        if j.field.is_some() {
            return Err(Error::Parse("expected a polynomial over Q".into()));
        }
        let c = j
            .coeffs
            .iter()
            .map(|s| Rational::parse_in(&(), s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&(), c))
    }

    /// Integer polynomial with the same roots: multiplies by the lcm of the
    /// denominators.
    pub fn clear_denominators(&self) -> ZPoly {
        ZPoly::from_rational_poly(self)
    }
}

impl Poly<QuadScalar> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            field: Some(self.ctx.d()),
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let d = j.field.ok_or_else(|| Error::Parse("missing field parameter".into()))?;
        let k = QuadField::new(d)?;
        let c = j
            .coeffs
            .iter()
            .map(|s| QuadScalar::parse_in(&k, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&k, c))
    }
}

#[cfg(test)]
pub(crate) fn rat_poly(coeffs: &[i64]) -> Poly<Rational> {
    Poly::new(&(), coeffs.iter().map(|&c| crate::exactnum::rat(c)).collect())
}

impl<F: Field> Poly<F> {
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::exactnum::ratio;

    #[test]
    fn exact_division_examples() {
        let num = rat_poly(&[-1, 0, 1]);
        assert_eq!(num.exact_divide(&rat_poly(&[-1, 1])).unwrap(), rat_poly(&[1, 1]));
        assert_eq!(
            rat_poly(&[0, 0, 0, 1]).exact_divide(&rat_poly(&[0, 0, 1])).unwrap(),
            rat_poly(&[0, 1])
        );
        assert_eq!(
            rat_poly(&[1, 0, 1]).exact_divide(&rat_poly(&[-1, 1])),
            Err(Error::NonzeroRemainder)
        );
        assert_eq!(
            rat_poly(&[1]).exact_divide(&Poly::zero(&())),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(rat_poly(&[-1, 0, 1]).gcd(&rat_poly(&[-1, 1])), rat_poly(&[-1, 1]));
        let p = rat_poly(&[4, 0, 2]);
        assert_eq!(Poly::zero(&()).gcd(&p), p.monic());
        assert!(Poly::<Rational>::zero(&()).gcd(&Poly::zero(&())).is_zero());
    }

    #[test]
    fn separable_psi3_at_1_1() {
        // 3x^4 + 6x^2 + 12x - 1 and its derivative are coprime; cross-check
        // with a nonzero resultant computed by Sylvester determinant.
        let p = rat_poly(&[-1, 12, 6, 0, 3]);
        let dp = p.derivative();
        assert!(p.gcd(&dp).is_one());
        assert!(!resultant(&p, &dp).is_zero());
    }

    /// Resultant via fraction-free Gaussian elimination of the Sylvester matrix.
    fn resultant(p: &Poly<Rational>, q: &Poly<Rational>) -> Rational {
        let (m, n) = (p.degree().unwrap(), q.degree().unwrap());
        let size = m + n;
        let mut mat = vec![vec![rat(0); size]; size];
        for r in 0..n {
            for (i, c) in p.coeffs().iter().rev().enumerate() {
                mat[r][r + i] = c.clone();
            }
        }
        for r in 0..m {
            for (i, c) in q.coeffs().iter().rev().enumerate() {
                mat[n + r][r + i] = c.clone();
            }
        }
        let mut det = rat(1);
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return rat(0);
            };
            if piv != col {
                mat.swap(piv, col);
                det = -det;
            }
            let pv = mat[col][col].clone();
            det *= &pv;
            for r in col + 1..size {
                let f = &mat[r][col] / &pv;
                for c in col..size {
                    let t = &f * &mat[col][c];
                    mat[r][c] -= t;
                }
            }
        }
        det
    }

    #[test]
    fn display_and_parse() {
        let p = Poly::new(&(), vec![ratio(-1, 3), rat(0), rat(-5), rat(1)]);
        assert_eq!(p.to_string(), "x^3 - 5*x^2 - 1/3");
        assert_eq!(parse_poly::<Rational>(&(), &p.to_string()).unwrap(), p);
        assert_eq!(
            parse_poly::<Rational>(&(), "2 + 3*x - x^2").unwrap(),
            rat_poly(&[2, 3, -1])
        );
        assert_eq!(parse_poly::<Rational>(&(), "x + x").unwrap(), rat_poly(&[0, 2]));
        let k = QuadField::new(-3).unwrap();
        let q = parse_poly::<QuadScalar>(&k, "x^2 + (1/2+sqrt(-3))*x - sqrt(-3)").unwrap();
        assert_eq!(parse_poly::<QuadScalar>(&k, &q.to_string()).unwrap(), q);
        assert!(parse_poly::<Rational>(&(), "x^").is_err());
    }

    #[test]
    fn json_form() {
        let p = rat_poly(&[1, 0, -2]);
        let j = serde_json::to_string(&p.to_json()).unwrap();
        assert_eq!(j, r#"{"coeffs":["1","0","-2"]}"#);
        let back: PolyJson = serde_json::from_str(&j).unwrap();
        assert_eq!(Poly::<Rational>::from_json(&back).unwrap(), p);
    }
}
