use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{FpPoly, Poly};
use crate::exactnum::Rational;

/// Integer polynomial, ascending coefficients, trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly(Vec<BigInt>);

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        ZPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        ZPoly(vec![])
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    /// Multiplies by the lcm of the denominators.
    pub fn from_rational_poly(p: &Poly<Rational>) -> Self {
        let l = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        ZPoly::new(p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect())
    }

    pub fn to_rational_poly(&self) -> Poly<Rational> {
        Poly::new(&(), self.0.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        ZPoly(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn mul(&self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn add(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        ZPoly::new((0..n).map(|i| self.at(i) + o.at(i)).collect())
    }

    pub fn sub(&self, o: &ZPoly) -> ZPoly {
        let n = self.0.len().max(o.0.len());
        ZPoly::new((0..n).map(|i| self.at(i) - o.at(i)).collect())
    }

    pub fn scale(&self, k: &BigInt) -> ZPoly {
        ZPoly::new(self.0.iter().map(|c| c * k).collect())
    }

    fn at(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> ZPoly {
        ZPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact quotient over `Z`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        let dl = d.0.last()?;
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.0.len() < d.0.len() {
            return None;
        }
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let (c, rem) = r[i + dd].div_rem(dl);
            if !rem.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dc;
                }
            }
            q[i] = c;
        }
        r.iter().all(|x| x.is_zero()).then(|| ZPoly::new(q))
    }

    pub fn reduce(&self, p: u64) -> FpPoly {
        FpPoly::from_bigints(p, &self.0)
    }

    /// Coefficients reduced into the symmetric range `(-m/2, m/2]`.
    pub fn symmetric_mod(&self, m: &BigInt) -> ZPoly {
        let half = m / 2;
        ZPoly::new(
            self.0
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    pub fn from_fp(f: &FpPoly) -> ZPoly {
        ZPoly::new(f.coeffs().iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Upper bound for the coefficients of any factor: `2^deg * (deg+1) * max|c|`,
    /// which dominates the Mignotte bound `2^deg * ||f||_2`.
    pub fn factor_coefficient_bound(&self) -> BigInt {
        let n = self.degree().unwrap_or(0);
        let maxc = self.0.iter().map(|c| c.abs()).max().unwrap_or_default();
        (BigInt::one() << n) * BigInt::from(n + 1) * maxc
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZPoly({})", self.to_rational_poly())
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;

    #[test]
    fn clearing_and_content() {
        let p = Poly::new(&(), vec![ratio(1, 2), ratio(-1, 3), Rational::one()]);
        assert_eq!(ZPoly::from_rational_poly(&p), ZPoly::from_i64(&[3, -2, 6]));
        assert_eq!(
            ZPoly::from_i64(&[-4, 0, -6]).primitive_part(),
            ZPoly::from_i64(&[2, 0, 3])
        );
    }

    #[test]
    fn exact_integer_division() {
        let f = ZPoly::from_i64(&[-2, 1]).mul(&ZPoly::from_i64(&[1, 3]));
        assert_eq!(f.div_exact(&ZPoly::from_i64(&[1, 3])), Some(ZPoly::from_i64(&[-2, 1])));
        assert_eq!(f.div_exact(&ZPoly::from_i64(&[1, 2])), None);
        assert_eq!(ZPoly::from_i64(&[1, 0, 1]).div_exact(&ZPoly::from_i64(&[0, 2])), None);
    }
}
