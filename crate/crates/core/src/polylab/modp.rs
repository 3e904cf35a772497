//! Polynomials over prime fields `F_p` (word-sized `p`) and their complete
//! factorization by squarefree decomposition, distinct-degree splitting and
//! randomized equal-degree splitting.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::Factorization;
use crate::error::{Error, Result};
use crate::exactnum::{invmod, mulmod, powmod};

/// Dense polynomial over `F_p`, coefficients ascending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % p).collect();
        trim(&mut c);
        FpPoly { p, c }
    }

    /// Reduction of an integer polynomial (ascending coefficients).
    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        FpPoly::new(p, coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &c| (mulmod(acc, x, self.p) + c) % self.p)
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + self.p - o.c.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                let t = acc[i + j] + a as u128 * b as u128;
                acc[i + j] = if t >= p * p { t % p } else { t };
            }
        }
        FpPoly::new(self.p, acc.into_iter().map(|x| (x % p) as u64).collect())
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&c| mulmod(c, k, self.p)).collect())
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p).expect("leading coefficient is a unit"))
    }

    /// Quotient and remainder; the divisor's leading coefficient must be a unit.
    pub fn div_rem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.c.len() < d.c.len() {
            return (FpPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let inv = invmod(d.lc(), p).expect("unit leading coefficient");
        let mut r = self.c.clone();
        let dd = d.deg();
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = mulmod(r[i + dd], inv, p);
            q[i] = coef;
            if coef == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mulmod(coef, dc, p)) % p;
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.div_rem(d).1
    }

    pub fn derivative(&self) -> FpPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, c)
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn xgcd(&self, o: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = invmod(r0.lc(), p).unwrap();
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let mut acc = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        FpPoly::new(self.p, self.c.iter().step_by(p).copied().collect())
    }
}

fn trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs. Returns `false` as soon as a
/// compositeness witness is found.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Iterator over primes starting at `from`.
pub fn primes_from(from: u64) -> impl Iterator<Item = u64> {
    (from.max(2)..).filter(|&n| is_prime_u64(n))
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i` and each `g_i` squarefree.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fp = f.derivative();
    if fp.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fp);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if fac.deg() > 0 {
            out.push((fac.monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if c.deg() > 0 {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Distinct-degree split of a monic squarefree polynomial into
/// `(product of all degree-d irreducible factors, d)`. When `max_degree` is
/// given, stops after that degree and leaves the rest unsplit.
pub fn distinct_degree(f: &FpPoly, max_degree: Option<usize>) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = FpPoly::x(p);
    let pe = BigUint::from(p);
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.deg() >= 2 * d {
        if max_degree.is_some_and(|m| d > m) {
            return out;
        }
        h = h.pow_mod(&pe, &rest);
        let g = h.sub(&x).gcd(&rest);
        if g.deg() > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 && max_degree.is_none_or(|m| rest.deg() <= m) {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

/// Splits a monic squarefree product of degree-`d` irreducibles.
pub fn equal_degree<R: Rng + ?Sized>(g: &FpPoly, d: usize, rng: &mut R) -> Vec<FpPoly> {
    let n = g.deg();
    if n == d {
        return vec![g.clone()];
    }
    let p = g.p;
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(g);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(g);
                acc = acc.add(&t);
            }
            acc
        } else {
            a.pow_mod(&exp, g).sub(&FpPoly::one(p))
        };
        let h = b.gcd(g);
        if h.deg() > 0 && h.deg() < n {
            let mut out = equal_degree(&h, d, rng);
            out.extend(equal_degree(&g.div_rem(&h).0, d, rng));
            return out;
        }
    }
}

/// Complete factorization of a nonzero polynomial over `F_p` into monic
/// irreducibles with multiplicities.
pub fn factor_mod_p<R: Rng + ?Sized>(f: &FpPoly, rng: &mut R) -> Result<Factorization<FpPoly, u64>> {
    if !is_prime_u64(f.p) {
        return Err(Error::NotPrime(f.p));
    }
    if f.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let unit = f.lc();
    let mut factors = Vec::new();
    for (g, m) in squarefree_decomposition(&f.monic()) {
        for (part, d) in distinct_degree(&g, None) {
            for h in equal_degree(&part, d, rng) {
                factors.push((h, m));
            }
        }
    }
    factors.sort_by(|a, b| (a.0.deg(), &a.0.c, a.1).cmp(&(b.0.deg(), &b.0.c, b.1)));
    Ok(Factorization { unit, factors })
}

/// Number of irreducible factors of a monic squarefree polynomial, from its
/// distinct-degree split.
pub fn count_factors(f: &FpPoly) -> usize {
    distinct_degree(f, None).iter().map(|(g, d)| g.deg() / d).sum()
}

/// Multiset of irreducible factor degrees (sorted descending, with
/// multiplicity) of a squarefree polynomial.
pub fn degree_pattern(f: &FpPoly) -> Vec<usize> {
    let mut pattern: Vec<usize> = distinct_degree(&f.monic(), None)
        .iter()
        .flat_map(|(g, d)| std::iter::repeat_n(*d, g.deg() / d))
        .collect();
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    pattern
}

impl Factorization<FpPoly, u64> {
    pub fn product(&self, p: u64) -> FpPoly {
        let mut acc = FpPoly::new(p, vec![self.unit]);
        for (g, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(g);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn roots_by_scan(f: &FpPoly) -> Vec<u64> {
        (0..f.p).filter(|&x| f.eval(x) == 0).collect()
    }

    #[test]
    fn x2_plus_1_mod_5_splits() {
        let f = FpPoly::new(5, vec![1, 0, 1]);
        assert_eq!(roots_by_scan(&f), vec![2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = factor_mod_p(&f, &mut rng).unwrap();
        let got: Vec<_> = fac.factors.iter().map(|(g, m)| (g.coeffs().to_vec(), *m)).collect();
        // x - 3 = x + 2 and x - 2 = x + 3
        assert_eq!(got, vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
    }

    #[test]
    fn x2_plus_1_mod_3_irreducible() {
        let f = FpPoly::new(3, vec![1, 0, 1]);
        assert!(roots_by_scan(&f).is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = factor_mod_p(&f, &mut rng).unwrap();
        assert_eq!(fac.factors.len(), 1);
        assert_eq!(fac.factors[0].0, f);
    }

    #[test]
    fn x3_minus_x_mod_7() {
        let f = FpPoly::new(7, vec![0, 6, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let fac = factor_mod_p(&f, &mut rng).unwrap();
        let got: Vec<_> = fac.factors.iter().map(|(g, _)| g.coeffs().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, 1], vec![6, 1]]);
    }

    #[test]
    fn composite_modulus_rejected() {
        let f = FpPoly::new(9, vec![1, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(factor_mod_p(&f, &mut rng).unwrap_err(), Error::NotPrime(9));
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        // (x+1)^2 (x^2+1)^5 mod 5: x^5 powers exercise the p-th root branch
        let p = 5;
        let a = FpPoly::new(p, vec![1, 1]);
        let b = FpPoly::new(p, vec![1, 0, 1]);
        let mut f = a.mul(&a);
        for _ in 0..5 {
            f = f.mul(&b);
        }
        let f = f.scale(3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fac = factor_mod_p(&f, &mut rng).unwrap();
        assert_eq!(fac.product(p), f);
        assert_eq!(fac.unit, 3);
        let mults: Vec<usize> = fac.factors.iter().map(|x| x.1).collect();
        assert_eq!(mults, vec![2, 5, 5]);
    }

    #[test]
    fn characteristic_two_splitting() {
        // x^4 + x = x (x+1) (x^2+x+1) over F_2
        let f = FpPoly::new(2, vec![0, 1, 0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let fac = factor_mod_p(&f, &mut rng).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.product(2), f);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = primes_from(2).take(10).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn product_reconstructs_input(
            p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 101, 65521]),
            coeffs in prop::collection::vec(0u64..1_000_000, 1..12),
            seed in any::<u64>(),
        ) {
            let f = FpPoly::new(p, coeffs);
            prop_assume!(!f.is_zero());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fac = factor_mod_p(&f, &mut rng).unwrap();
            prop_assert_eq!(fac.product(p), f);
            for (g, _) in &fac.factors {
                prop_assert_eq!(g.lc(), 1);
                prop_assert_eq!(count_factors(g), 1);
            }
        }
    }
}
