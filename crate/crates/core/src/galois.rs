//! Congruence subgroups of `GL_2(Z/N)`, their cycle types on the roots of
//! `Psi_N`, and Frobenius degree patterns of specialized `Psi_N`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::divpoly::primitive_at;
use crate::error::{Error, Result};
use crate::exactnum::{Field, Rational};
use crate::par::map_ordered;
use crate::polylab::modp::{factor_mod_p, primes_from};
use crate::polylab::ZPoly;

/// `[a, b, c, d]` for the matrix `((a, b), (c, d))`, entries reduced mod `N`.
pub type Mat2 = [u32; 4];

/// Largest modulus for explicit enumeration of `H` and `H^1`.
pub const ENUMERATION_LIMIT: u32 = 24;
/// Largest modulus for the quotients by `{+I, -I}`.
pub const QUOTIENT_LIMIT: u32 = 12;
/// Largest modulus for the conjugate-containment search.
pub const CONTAINMENT_LIMIT: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `H_N(m, n)`.
    H,
    /// `<H_N(m, n), -I> / {+I, -I}`.
    HBar,
    /// `H_N(m, n)` intersected with `SL_2`.
    H1,
    /// `<H^1_N(m, n), -I> / {+I, -I}`.
    H1Bar,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Variant> {
        match s.to_ascii_lowercase().as_str() {
            "h" => Ok(Variant::H),
            "hbar" => Ok(Variant::HBar),
            "h1" => Ok(Variant::H1),
            "h1bar" => Ok(Variant::H1Bar),
            _ => Err(Error::Parse(format!(
                "unknown group variant '{s}' (expected h, hbar, h1, h1bar)"
            ))),
        }
    }

    fn is_quotient(self) -> bool {
        matches!(self, Variant::HBar | Variant::H1Bar)
    }

    fn special(self) -> bool {
        matches!(self, Variant::H1 | Variant::H1Bar)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::H => "H",
            Variant::HBar => "Hbar",
            Variant::H1 => "H1",
            Variant::H1Bar => "H1bar",
        })
    }
}

fn mat_mul(x: &Mat2, y: &Mat2, n: u32) -> Mat2 {
    let [a, b, c, d] = x.map(u64::from);
    let [e, f, g, h] = y.map(u64::from);
    let n = u64::from(n);
    [
        ((a * e + b * g) % n) as u32,
        ((a * f + b * h) % n) as u32,
        ((c * e + d * g) % n) as u32,
        ((c * f + d * h) % n) as u32,
    ]
}

fn mat_neg(x: &Mat2, n: u32) -> Mat2 {
    x.map(|v| (n - v) % n)
}

fn det(x: &Mat2, n: u32) -> u32 {
    let [a, b, c, d] = x.map(u64::from);
    let n64 = u64::from(n);
    ((a * d % n64 + n64 - b * c % n64) % n64) as u32
}

fn inv_mod(a: u32, n: u32) -> Option<u32> {
    let e = (a as i64).extended_gcd(&(n as i64));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i64) as u32)
}

fn mat_inv(x: &Mat2, n: u32) -> Option<Mat2> {
    let k = inv_mod(det(x, n), n)?;
    let [a, b, c, d] = *x;
    let adj = [d, (n - b) % n, (n - c) % n, a];
    Some(adj.map(|v| ((u64::from(v) * u64::from(k)) % u64::from(n)) as u32))
}

/// Representative of `{A, -A}`: the lexicographically smaller one.
fn canonical_pm(x: &Mat2, n: u32) -> Mat2 {
    let y = mat_neg(x, n);
    if y < *x {
        y
    } else {
        *x
    }
}

fn identity(n: u32) -> Mat2 {
    [1 % n, 0, 0, 1 % n]
}

/// The congruence conditions of `H_N(m, n)`: `a = 1, b = 0 (mod m)` and
/// `c = 0, d = 1 (mod n)`, with unit determinant.
fn in_h(x: &Mat2, modulus: u32, m: u32, n: u32) -> bool {
    let [a, b, c, d] = *x;
    a % m == 1 % m && b % m == 0 && c % n == 0 && d % n == 1 % n && det(x, modulus).gcd(&modulus) == 1
}

fn check_levels(modulus: u32, m: u32, n: u32) -> Result<()> {
    if modulus == 0 || m == 0 || n == 0 || !n.is_multiple_of(m) || !modulus.is_multiple_of(n) {
        return Err(Error::InvalidArgument(format!(
            "need m | n | N, got m = {m}, n = {n}, N = {modulus}"
        )));
    }
    Ok(())
}

/// All elements of `H_N(m, n)` (or `H^1`), with no size limit.
fn raw_elements(modulus: u32, m: u32, n: u32, special: bool) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in (1 % m..modulus.max(1)).step_by(m as usize) {
        for b in (0..modulus).step_by(m as usize) {
            for c in (0..modulus).step_by(n as usize) {
                for d in (1 % n..modulus.max(1)).step_by(n as usize) {
                    let x = [a, b, c, d];
                    let dt = det(&x, modulus);
                    let ok = if special {
                        dt == 1 % modulus
                    } else {
                        dt.gcd(&modulus) == 1
                    };
                    if ok {
                        out.push(x);
                    }
                }
            }
        }
    }
    if modulus == 1 {
        out = vec![[0, 0, 0, 0]];
    }
    out
}

/// An explicitly enumerated subgroup of `GL_2(Z/N)` (or of its quotient by
/// `{+I, -I}`, represented by canonical coset representatives).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroup {
    pub modulus: u32,
    pub m: u32,
    pub n: u32,
    pub variant: Variant,
    elements: Vec<Mat2>,
}

impl MatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    fn normalize(&self, x: &Mat2) -> Mat2 {
        if self.variant.is_quotient() {
            canonical_pm(x, self.modulus)
        } else {
            *x
        }
    }

    pub fn contains(&self, x: &Mat2) -> bool {
        self.elements.binary_search(&self.normalize(x)).is_ok()
    }

    /// Closure under products and inverses, and presence of the identity.
    pub fn is_subgroup(&self) -> bool {
        let n = self.modulus;
        self.contains(&identity(n))
            && self
                .elements
                .iter()
                .all(|x| mat_inv(x, n).is_some_and(|y| self.contains(&y)))
            && self
                .elements
                .iter()
                .all(|x| self.elements.iter().all(|y| self.contains(&mat_mul(x, y, n))))
    }

    /// Orbit of a row vector under the right action `v -> v A`.
    pub fn orbit(&self, v: (u32, u32)) -> Vec<(u32, u32)> {
        let n = self.modulus;
        let mut seen: Vec<(u32, u32)> = self
            .elements
            .iter()
            .map(|&[a, b, c, d]| ((v.0 * a + v.1 * c) % n, (v.0 * b + v.1 * d) % n))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        seen.sort_unstable();
        seen
    }
}

/// Enumerate `H_N(m, n)` or one of its variants by filtering all matrices.
pub fn enumerate_group(modulus: u32, m: u32, n: u32, variant: Variant) -> Result<MatrixGroup> {
    check_levels(modulus, m, n)?;
    let limit = if variant.is_quotient() {
        QUOTIENT_LIMIT
    } else {
        ENUMERATION_LIMIT
    };
    if modulus > limit {
        return Err(Error::BoundExceeded(format!(
            "modulus {modulus} exceeds {limit} for {variant}"
        )));
    }
    Ok(build_group(modulus, m, n, variant))
}

fn build_group(modulus: u32, m: u32, n: u32, variant: Variant) -> MatrixGroup {
    let raw = raw_elements(modulus, m, n, variant.special());
    let mut elements: Vec<Mat2> = if variant.is_quotient() {
        raw.iter()
            .map(|x| canonical_pm(x, modulus))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect()
    } else {
        raw
    };
    elements.sort_unstable();
    MatrixGroup {
        modulus,
        m,
        n,
        variant,
        elements,
    }
}

/// `|SL_2(Z/N)| / |H^1_N(m, n)|` and `[Hbar^1_N(1, 1) : Hbar^1_N(m, n)]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupIndex {
    pub plain: u64,
    pub mod_pm: u64,
}

/// Both indices by explicit enumeration; `N <= 24`.
pub fn group_index(modulus: u32, m: u32, n: u32) -> Result<GroupIndex> {
    check_levels(modulus, m, n)?;
    if modulus > ENUMERATION_LIMIT {
        return Err(Error::BoundExceeded(format!(
            "modulus {modulus} exceeds {ENUMERATION_LIMIT}"
        )));
    }
    let sl = build_group(modulus, 1, 1, Variant::H1).order() as u64;
    let sub = build_group(modulus, m, n, Variant::H1).order() as u64;
    let sl_bar = build_group(modulus, 1, 1, Variant::H1Bar).order() as u64;
    let sub_bar = build_group(modulus, m, n, Variant::H1Bar).order() as u64;
    Ok(GroupIndex {
        plain: sl / sub,
        mod_pm: sl_bar / sub_bar,
    })
}

/// A probability distribution on cycle types (partitions, largest part
/// first) with exact frequencies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleTypeDistribution(pub BTreeMap<Vec<usize>, Rational>);

impl CycleTypeDistribution {
    pub fn from_counts<'a>(types: impl IntoIterator<Item = &'a Vec<usize>>) -> Self {
        let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        let mut total = 0u64;
        for t in types {
            *counts.entry(t.clone()).or_default() += 1;
            total += 1;
        }
        CycleTypeDistribution(
            counts
                .into_iter()
                .map(|(k, c)| (k, Rational::new(BigInt::from(c), BigInt::from(total.max(1)))))
                .collect(),
        )
    }

    pub fn frequency(&self, cycle_type: &[usize]) -> Rational {
        self.0.get(cycle_type).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.0.values().fold(Rational::zero(), |a, b| a + b)
    }
}

/// Render a partition as `2^2`, `3.1`, `1^4`.
pub fn partition_label(p: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < p.len() {
        let mut j = i;
        while j < p.len() && p[j] == p[i] {
            j += 1;
        }
        parts.push(if j - i == 1 {
            p[i].to_string()
        } else {
            format!("{}^{}", p[i], j - i)
        });
        i = j;
    }
    parts.join(".")
}

/// The classes `{v, -v}` of vectors of exact order `N` in `(Z/N)^2`, which
/// index the roots of `Psi_N`.
fn root_classes(modulus: u32) -> Vec<(u32, u32)> {
    let n = modulus;
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x.gcd(&y).gcd(&n) != 1 {
                continue;
            }
            let neg = ((n - x) % n, (n - y) % n);
            if (x, y) <= neg {
                out.push((x, y));
            }
        }
    }
    out
}

/// Cycle types of the permutations a group induces on `{+-v : |v| = N}`.
pub fn cycle_types(group: &MatrixGroup) -> CycleTypeDistribution {
    let n = group.modulus;
    let classes = root_classes(n);
    let index: HashMap<(u32, u32), usize> = classes.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let canon = |v: (u32, u32)| {
        let neg = ((n - v.0) % n, (n - v.1) % n);
        if v <= neg {
            v
        } else {
            neg
        }
    };
    let types: Vec<Vec<usize>> = group
        .elements
        .iter()
        .map(|&[a, b, c, d]| {
            let perm: Vec<usize> = classes
                .iter()
                .map(|&(x, y)| index[&canon(((x * a + y * c) % n, (x * b + y * d) % n))])
                .collect();
            cycle_type(&perm)
        })
        .collect();
    CycleTypeDistribution::from_counts(&types)
}

fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Total-variation distance `(1/2) sum |p - q|`, exact.
pub fn distribution_distance(p: &CycleTypeDistribution, q: &CycleTypeDistribution) -> Rational {
    let keys: std::collections::BTreeSet<&Vec<usize>> = p.0.keys().chain(q.0.keys()).collect();
    let sum = keys
        .into_iter()
        .map(|k| (p.frequency(k) - q.frequency(k)).abs())
        .fold(Rational::zero(), |a, b| a + b);
    sum / Rational::from_integer(2.into())
}

/// Whether `Hbar^1_N(m, n)` lies in a conjugate `g Hbar_N(m2, n2) g^-1`
/// with `g` in `GL_2(Z/N)`; exhaustive over `g`, `N <= 8`.
pub fn conjugate_containment(modulus: u32, m: u32, n: u32, m2: u32, n2: u32) -> Result<bool> {
    check_levels(modulus, m, n)?;
    check_levels(modulus, m2, n2)?;
    if modulus > CONTAINMENT_LIMIT {
        return Err(Error::BoundExceeded(format!(
            "modulus {modulus} exceeds {CONTAINMENT_LIMIT}"
        )));
    }
    let sub = build_group(modulus, m, n, Variant::H1).elements;
    let gl = build_group(modulus, 1, 1, Variant::H).elements;
    let in_target = |x: &Mat2| in_h(x, modulus, m2, n2) || in_h(&mat_neg(x, modulus), modulus, m2, n2);
    Ok(gl.iter().any(|g| {
        let gi = mat_inv(g, modulus).expect("invertible");
        sub.iter()
            .all(|a| in_target(&mat_mul(&mat_mul(&gi, a, modulus), g, modulus)))
    }))
}

/// Degree patterns of `Psi_{N,A,B}` modulo consecutive good primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusSample {
    pub a: Rational,
    pub b: Rational,
    pub n: usize,
    pub patterns: Vec<(u64, Vec<usize>)>,
    pub excluded: Vec<u64>,
}

impl FrobeniusSample {
    pub fn distribution(&self) -> CycleTypeDistribution {
        CycleTypeDistribution::from_counts(self.patterns.iter().map(|(_, p)| p))
    }
}

fn divides(p: u64, n: &BigInt) -> bool {
    !n.is_zero() && (n % BigInt::from(p)).is_zero()
}

/// Factor `Psi_{N,A,B}` modulo the first `prime_count` primes `p >= 5` of
/// good reduction, skipping `p | 6 N (4A^3 + 27B^2)`, primes dividing a
/// denominator of `A`, `B` or `Psi_N`, and any prime where `Psi_N` loses
/// degree or separability. The seed drives only equal-degree splitting.
pub fn frobenius_sample(
    a: &Rational,
    b: &Rational,
    n: usize,
    prime_count: usize,
    seed: u64,
) -> Result<FrobeniusSample> {
    if !(1..=10).contains(&n) {
        return Err(Error::BoundExceeded(format!("N = {n} outside 1..=10")));
    }
    let disc = Rational::from_integer(4.into()) * a * a * a + Rational::from_integer(27.into()) * b * b;
    if Field::is_zero(&disc) {
        return Err(Error::SingularCurve);
    }
    let psi = ZPoly::from_rational_poly(&primitive_at(n, a, b)?);
    let degree = psi.degree().unwrap_or(0);
    let bad = |p: u64| {
        divides(p, &BigInt::from(6 * n as u64))
            || divides(p, disc.numer())
            || divides(p, a.denom())
            || divides(p, b.denom())
            || divides(p, &psi.lc())
    };
    let mut patterns = Vec::with_capacity(prime_count);
    let mut excluded = Vec::new();
    let mut primes = primes_from(5);
    while patterns.len() < prime_count {
        let want = prime_count - patterns.len();
        let mut batch = Vec::with_capacity(want);
        while batch.len() < want {
            let p = primes.next().expect("infinitely many primes");
            if bad(p) {
                excluded.push(p);
            } else {
                batch.push(p);
            }
        }
        let results = map_ordered(&batch, |&p| {
            let f = psi.reduce(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let fac = factor_mod_p(&f, &mut rng).ok()?;
            if fac.factors.iter().any(|(_, e)| *e > 1) || f.degree() != Some(degree) {
                return None;
            }
            let mut pat: Vec<usize> = fac.factors.iter().map(|(g, _)| g.degree().unwrap_or(0)).collect();
            pat.sort_unstable_by(|x, y| y.cmp(x));
            Some(pat)
        });
        for (p, r) in batch.into_iter().zip(results) {
            match r {
                Some(pat) => patterns.push((p, pat)),
                None => excluded.push(p),
            }
        }
    }
    excluded.sort_unstable();
    Ok(FrobeniusSample {
        a: a.clone(),
        b: b.clone(),
        n,
        patterns,
        excluded,
    })
}
