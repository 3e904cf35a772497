//! Factorization over `Z` by Hensel lifting of a modular factorization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::modp::{distinct_degree, equal_degree, is_prime_u64};
use super::{Factorization, FpPoly, Poly, ZPoly};
use crate::exactnum::Rational;

/// Primes used for modular images start here so that few lifting steps are
/// needed.
const FIRST_PRIME: u64 = 1009;
/// Number of admissible primes compared when choosing the modular image.
const PRIME_TRIALS: usize = 4;

/// Squarefree decomposition over `Z`: primitive parts with positive leading
/// coefficient paired with their multiplicities.
fn squarefree_parts(f: &ZPoly) -> Vec<(ZPoly, usize)> {
    if squarefree_mod_some_prime(f) {
        return vec![(f.primitive_part(), 1)];
    }
    let fq = f.to_rational_poly();
    let df = fq.derivative();
    let a0 = fq.gcd(&df);
    let mut b = fq.exact_divide(&a0).expect("gcd divides");
    let c = df.exact_divide(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.exact_divide(&a).expect("gcd divides");
        let c = d.exact_divide(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((ZPoly::from_rational_poly(&a).primitive_part(), i));
        }
        i += 1;
    }
    out
}

/// A squarefree reduction modulo a prime not dividing the leading
/// coefficient proves `f` squarefree over `Q`.
fn squarefree_mod_some_prime(f: &ZPoly) -> bool {
    let lc = f.lc();
    let mut tried = 0;
    let mut p = FIRST_PRIME;
    while tried < 3 {
        if is_prime_u64(p) && !(&lc % BigInt::from(p)).is_zero() {
            tried += 1;
            if f.reduce(p).is_squarefree() {
                return true;
            }
        }
        p += 2;
    }
    false
}

fn admissible_prime(f: &ZPoly, p: u64) -> Option<FpPoly> {
    if (f.lc() % BigInt::from(p)).is_zero() {
        return None;
    }
    let fbar = f.reduce(p).monic();
    fbar.is_squarefree().then_some(fbar)
}

/// Smallest `k` with `p^k > bound`.
fn lifting_exponent(p: u64, bound: &BigInt) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    let mut k = 1;
    while &pk <= bound {
        pk *= &pb;
        k += 1;
    }
    (k, pk)
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient is a unit");
    e.x.mod_floor(m)
}

/// Lifts `f = g h mod p` (monic, coprime `g`, `h`; `lc(f) = 1 mod p^k`) to
/// monic `G`, `H` with `f = G H mod p^k`.
fn lift_pair(f: &ZPoly, g: &FpPoly, h: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s, t) = g.xgcd(h);
    debug_assert!(one.is_one(), "modular factors are coprime");
    let pb = BigInt::from(p);
    let mut big_g = ZPoly::from_fp(g);
    let mut big_h = ZPoly::from_fp(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let err = f.sub(&big_g.mul(&big_h)).symmetric_mod(&next);
        let err = ZPoly::new(err.coeffs().iter().map(|c| c / &pj).collect()).reduce(p);
        let (q, dg) = t.mul(&err).div_rem(g);
        let dh = s.mul(&err).add(&q.mul(h));
        big_g = big_g.add(&ZPoly::from_fp(&dg).scale(&pj)).symmetric_mod(&next);
        big_h = big_h.add(&ZPoly::from_fp(&dh).scale(&pj)).symmetric_mod(&next);
        pj = next;
    }
    (big_g, big_h)
}

/// `f` made monic modulo `pk`.
fn monic_target(f: &ZPoly, pk: &BigInt) -> ZPoly {
    f.scale(&inverse_mod(&f.lc(), pk)).symmetric_mod(pk)
}

/// Lifts a complete monic factorization of `f mod p` to `p^k`.
fn lift_all(f: &ZPoly, factors: &[FpPoly], p: u64, k: u32, pk: &BigInt) -> Vec<ZPoly> {
    let mut target = monic_target(f, pk);
    let mut out = Vec::with_capacity(factors.len());
    for (i, g) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            out.push(target.clone());
            break;
        }
        let h = factors[i + 1..].iter().fold(FpPoly::one(p), |acc, x| acc.mul(x));
        let (big_g, big_h) = lift_pair(&target, g, &h, p, k);
        out.push(big_g);
        target = big_h;
    }
    out
}

/// Candidate integer factor from a product of lifted monic factors.
fn candidate(lc: &BigInt, parts: &[&ZPoly], pk: &BigInt) -> ZPoly {
    let mut acc = ZPoly::new(vec![lc.clone()]);
    for part in parts {
        acc = acc.mul(part).symmetric_mod(pk);
    }
    acc.primitive_part()
}

/// Irreducible factors of a primitive squarefree polynomial of positive degree.
fn factor_squarefree<R: Rng + ?Sized>(f: &ZPoly, rng: &mut R) -> Vec<ZPoly> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = FIRST_PRIME;
    while tried < PRIME_TRIALS {
        if is_prime_u64(p) {
            if let Some(fbar) = admissible_prime(f, p) {
                tried += 1;
                let mut factors = Vec::new();
                for (part, d) in distinct_degree(&fbar, None) {
                    factors.extend(equal_degree(&part, d, rng));
                }
                if factors.len() == 1 {
                    return vec![f.clone()];
                }
                if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
                    best = Some((p, factors));
                }
            }
        }
        p += 2;
    }
    let (p, factors) = best.expect("an admissible prime exists");
    let lc = f.lc();
    let bound = f.factor_coefficient_bound() * lc.abs() * 2;
    let (k, pk) = lifting_exponent(p, &bound);
    let mut lifted = lift_all(f, &factors, p, k, &pk);

    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        for subset in Combinations::new(lifted.len(), size) {
            let parts: Vec<&ZPoly> = subset.iter().map(|&i| &lifted[i]).collect();
            let cand = candidate(&rest.lc(), &parts, &pk);
            if let Some(q) = rest.div_exact(&cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                rest = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    out.push(rest.primitive_part());
    out
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn sort_factors(v: &mut [(ZPoly, usize)]) {
    v.sort_by(|a, b| (a.0.degree(), a.0.coeffs(), a.1).cmp(&(b.0.degree(), b.0.coeffs(), b.1)));
}

/// Complete factorization over `Z`. The unit carries the content and sign;
/// factors are primitive, irreducible, with positive leading coefficient.
pub fn factor_over_z<R: Rng + ?Sized>(f: &ZPoly, rng: &mut R) -> Factorization<ZPoly, BigInt> {
    if f.degree().unwrap_or(0) == 0 {
        return Factorization {
            unit: f.lc(),
            factors: vec![],
        };
    }
    let mut factors = Vec::new();
    for (part, m) in squarefree_parts(f) {
        for q in factor_squarefree(&part, rng) {
            factors.push((q, m));
        }
    }
    sort_factors(&mut factors);
    let mut lc = BigInt::one();
    for (q, m) in &factors {
        lc *= q.lc().pow(*m as u32);
    }
    Factorization {
        unit: f.lc() / lc,
        factors,
    }
}

impl Factorization<ZPoly, BigInt> {
    pub fn product(&self) -> ZPoly {
        let mut acc = ZPoly::new(vec![self.unit.clone()]);
        for (q, m) in &self.factors {
            for _ in 0..*m {
                acc = acc.mul(q);
            }
        }
        acc
    }
}

/// The distinct irreducible factors over `Z` of degree at most `max_degree`
/// (1 or 2), found without a full factorization: only the small modular
/// factors are lifted, and linear pairs are recombined into quadratics.
pub fn small_factors<R: Rng + ?Sized>(f: &ZPoly, max_degree: usize, rng: &mut R) -> Vec<ZPoly> {
    assert!((1..=2).contains(&max_degree), "small factors have degree 1 or 2");
    if f.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let f0 = if squarefree_mod_some_prime(f) {
        f.primitive_part()
    } else {
        let sf: Poly<Rational> = f.to_rational_poly().squarefree_part();
        ZPoly::from_rational_poly(&sf).primitive_part()
    };
    let mut out = Vec::new();
    let mut rest = f0.clone();
    // Strip the factor x first so zero roots never hide behind the prime choice.
    if f0.coeffs()[0].is_zero() {
        let x = ZPoly::from_i64(&[0, 1]);
        out.push(x.clone());
        rest = rest.div_exact(&x).expect("x divides");
    }
    let n = rest.degree().unwrap_or(0);
    if n == 0 {
        return out;
    }
    if n <= max_degree {
        let parts = if n == 2 {
            factor_squarefree(&rest, rng)
        } else {
            vec![rest]
        };
        out.extend(parts);
        return out;
    }

    let mut best: Option<(u64, FpPoly, Vec<FpPoly>)> = None;
    let mut tried = 0;
    let mut p = FIRST_PRIME;
    while tried < PRIME_TRIALS {
        if is_prime_u64(p) {
            if let Some(fbar) = admissible_prime(&rest, p) {
                tried += 1;
                let mut small = Vec::new();
                for (part, d) in distinct_degree(&fbar, Some(max_degree)) {
                    small.extend(equal_degree(&part, d, rng));
                }
                if best.as_ref().is_none_or(|(_, _, b)| small.len() < b.len()) {
                    let done = small.is_empty();
                    best = Some((p, fbar, small));
                    if done {
                        break;
                    }
                }
            }
        }
        p += 2;
    }
    let (p, fbar, small) = best.expect("an admissible prime exists");
    if small.is_empty() {
        return out;
    }
    let lc = rest.lc();
    let bound = rest.factor_coefficient_bound() * lc.abs() * 2;
    let (k, pk) = lifting_exponent(p, &bound);
    let target = monic_target(&rest, &pk);
    let lifted: Vec<(usize, ZPoly)> = small
        .iter()
        .map(|g| {
            let h = fbar.div_rem(g).0;
            (g.degree().unwrap(), lift_pair(&target, g, &h, p, k).0)
        })
        .collect();

    let mut used = vec![false; lifted.len()];
    for deg in 1..=max_degree {
        for (i, (d, g)) in lifted.iter().enumerate() {
            if *d != deg || used[i] {
                continue;
            }
            let cand = candidate(&lc, &[g], &pk);
            if let Some(q) = rest.div_exact(&cand) {
                rest = q;
                used[i] = true;
                out.push(cand);
            }
        }
    }
    if max_degree == 2 {
        let linear: Vec<usize> = (0..lifted.len()).filter(|&i| lifted[i].0 == 1 && !used[i]).collect();
        for (a, &i) in linear.iter().enumerate() {
            for &j in &linear[a + 1..] {
                if used[i] || used[j] {
                    continue;
                }
                let cand = candidate(&lc, &[&lifted[i].1, &lifted[j].1], &pk);
                if let Some(q) = rest.div_exact(&cand) {
                    rest = q;
                    used[i] = true;
                    used[j] = true;
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// Squarefree decomposition of the reduction mod `p`, exposed for tests that
/// compare integer and modular factorizations.
#[cfg(test)]
pub(crate) fn modular_parts(f: &ZPoly, p: u64) -> Vec<(FpPoly, usize)> {
    super::modp::squarefree_decomposition(&f.reduce(p).monic())
}
