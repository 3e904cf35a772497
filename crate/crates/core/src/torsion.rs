//! Torsion subgroups, the splitting condition `P(m, n)`, and the quadratic
//! twists that acquire prescribed torsion.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::divpoly::{divisors, primitive_at};
use crate::error::{Error, Result};
use crate::exactnum::{same_square_class, Field, Rational};
use crate::polylab::modp::primes_from;
use crate::polylab::roots_in_field;
use crate::weierstrass::{Curve, Point};

/// Number of good primes whose point counts bound the torsion order.
const PREFILTER_PRIMES: usize = 16;

/// Search limits for torsion computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionConfig {
    /// Largest exact point order searched for.
    pub max_order: usize,
}

impl TorsionConfig {
    /// 12 over `Q` (the largest cyclic order allowed by Mazur's theorem),
    /// 18 over quadratic fields.
    pub fn for_field<F: Field>() -> Self {
        TorsionConfig {
            max_order: if F::extension_degree() == 1 { 12 } else { 18 },
        }
    }
}

/// The torsion group `Z/m x Z/n` with witnesses: the first generator has
/// order `n`, the second (present when `m > 1`) has order `m`, and the two
/// cyclic groups meet trivially.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionShape<F: Field> {
    pub m: usize,
    pub n: usize,
    pub generators: Vec<Point<F>>,
}

impl<F: Field> TorsionShape<F> {
    pub fn order(&self) -> usize {
        self.m * self.n
    }

    pub fn group_name(&self) -> String {
        match (self.m, self.n) {
            (1, 1) => "trivial".into(),
            (1, n) => format!("Z/{n}Z"),
            (m, n) => format!("Z/{m}Z x Z/{n}Z"),
        }
    }
}

impl<F: Field> fmt::Display for TorsionShape<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|p| p.to_string()).collect();
        match gens.len() {
            0 => write!(f, "{}", self.group_name()),
            1 => write!(f, "{}, generator {}", self.group_name(), gens[0]),
            _ => write!(f, "{}, generators {}", self.group_name(), gens.join(", ")),
        }
    }
}

/// Whether `Z/m x Z/n` occurs as a torsion subgroup over the field: Mazur's
/// list over `Q`; over quadratic fields the Kenku-Momose and Kamienny list,
/// with `Z/3 x Z/3`, `Z/3 x Z/6` only over `Q(sqrt(-3))` and `Z/4 x Z/4`
/// only over `Q(i)`.
pub fn admissible_shape<F: Field>(ctx: &F::Ctx, m: usize, n: usize) -> bool {
    if m == 0 || !n.is_multiple_of(m) {
        return false;
    }
    let quadratic = F::extension_degree() == 2;
    match m {
        1 if quadratic => n <= 16 || n == 18,
        1 => n <= 10 || n == 12,
        2 if quadratic => n <= 12,
        2 => n <= 8,
        3 => quadratic && (n == 3 || n == 6) && F::has_root_of_unity(ctx, 3),
        4 => quadratic && n == 4 && F::has_root_of_unity(ctx, 4),
        _ => false,
    }
}

/// Number of points of `y^2 = x^3 + ax + b` over `F_p`, including infinity.
fn count_points(a: u64, b: u64, p: u64) -> u64 {
    let mut square = vec![0u8; p as usize];
    for x in 0..p {
        square[(x * x % p) as usize] = 1;
    }
    square[0] = 2;
    let mut count = 1;
    for x in 0..p {
        let r = ((x * x % p * x) % p + a * x % p + b) % p;
        count += match square[r as usize] {
            2 => 1,
            1 => 2,
            _ => 0,
        };
    }
    count
}

/// A multiple of the torsion order: the gcd of `#E(F_p)` over good primes
/// of degree one. `None` if no usable prime was found.
pub fn torsion_order_bound<F: Field>(curve: &Curve<F>) -> Option<u64> {
    let ctx = curve.ctx();
    let mut g: Option<u64> = None;
    let mut used = 0;
    for p in primes_from(5).take(400) {
        let Some(root) = F::residue_root(&ctx, p) else { continue };
        let (Some(a), Some(b)) = (curve.a().reduce_mod(p, root), curve.b().reduce_mod(p, root)) else {
            continue;
        };
        if (4 * a % p * a % p * a + 27 * b % p * b) % p == 0 {
            continue;
        }
        let c = count_points(a, b, p);
        let next = num_integer::gcd(g.unwrap_or(0), c);
        g = Some(next);
        used += 1;
        if used >= PREFILTER_PRIMES || next == 1 {
            break;
        }
    }
    g
}

fn rational_height(q: &Rational) -> BigInt {
    q.numer().abs().max(q.denom().clone())
}

/// Sort key preferring simple coordinates: small height first, then
/// nonnegative before negative.
fn simplicity_key<F: Field>(v: &F) -> (BigInt, bool, bool, Rational, Rational) {
    let (a, b) = v.coordinates();
    let h = rational_height(&a).max(rational_height(&b));
    (h, a.is_negative(), b.is_negative(), a, b)
}

fn sort_simple<F: Field>(v: &mut [F]) {
    v.sort_by_cached_key(|x| simplicity_key(x));
}

/// All `K`-points of exact order `n` (for `n <= 2` straight from the cubic).
pub fn points_of_order<F: Field>(curve: &Curve<F>, n: usize) -> Result<Vec<Point<F>>> {
    if n <= 1 {
        return Ok(if n == 1 { vec![Point::Infinity] } else { vec![] });
    }
    let psi = primitive_at(n, curve.a(), curve.b())?;
    let mut xs = roots_in_field(&psi);
    sort_simple(&mut xs);
    let mut out = Vec::new();
    for x in xs {
        let Some(y) = curve.rhs(&x).sqrt() else { continue };
        let mut ys = vec![y.clone()];
        if !y.is_zero() {
            ys.push(-y);
        }
        sort_simple(&mut ys);
        for y in ys {
            let p = Point::affine(x.clone(), y);
            debug_assert_eq!(curve.point_order(&p, n as u64), Some(n as u64));
            out.push(p);
        }
    }
    Ok(out)
}

/// Multiples `O, P, 2P, ...` of a torsion point.
fn cyclic_span<F: Field>(curve: &Curve<F>, p: &Point<F>) -> HashSet<Point<F>> {
    let mut out = HashSet::new();
    let mut q = Point::Infinity;
    loop {
        if !out.insert(q.clone()) {
            return out;
        }
        q = curve.add_unchecked(&q, p);
    }
}

/// The full torsion subgroup over the curve's field.
pub fn torsion_subgroup<F: Field>(curve: &Curve<F>) -> Result<TorsionShape<F>> {
    torsion_subgroup_with(curve, TorsionConfig::for_field::<F>())
}

pub fn torsion_subgroup_with<F: Field>(curve: &Curve<F>, cfg: TorsionConfig) -> Result<TorsionShape<F>> {
    let bound = torsion_order_bound(curve);
    let candidates: Vec<usize> = match bound {
        Some(b) => divisors(b as usize)
            .into_iter()
            .filter(|&d| d >= 2 && d <= cfg.max_order)
            .collect(),
        None => (2..=cfg.max_order).collect(),
    };
    let mut by_order: Vec<(usize, Vec<Point<F>>)> = Vec::new();
    let mut total = 1;
    for &d in &candidates {
        let pts = points_of_order(curve, d)?;
        total += pts.len();
        if !pts.is_empty() {
            by_order.push((d, pts));
        }
    }
    let Some((n, _)) = by_order.last().cloned() else {
        return Ok(TorsionShape {
            m: 1,
            n: 1,
            generators: vec![],
        });
    };
    if total % n != 0 {
        return Err(Error::BoundExceeded(format!(
            "{total} torsion points found, not a multiple of the largest order {n}"
        )));
    }
    let m = total / n;
    let ctx = curve.ctx();
    if n % m != 0 || !admissible_shape::<F>(&ctx, m, n) {
        return Err(Error::BoundExceeded(format!(
            "torsion shape ({m}, {n}) outside the admissible list for {}",
            F::describe(&ctx)
        )));
    }
    let order_points = |k: usize| {
        by_order
            .iter()
            .find(|(d, _)| *d == k)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    };
    let p = order_points(n)[0].clone();
    let mut generators = vec![p.clone()];
    if m > 1 {
        let span = cyclic_span(curve, &p);
        let q = order_points(m)
            .iter()
            .find(|q| {
                let mut t = (*q).clone();
                (1..m).all(|_| {
                    let hit = span.contains(&t);
                    t = curve.add_unchecked(&t, q);
                    !hit
                })
            })
            .cloned()
            .ok_or_else(|| Error::BoundExceeded(format!("no complement of order {m} found")))?;
        // Certify |<P> + <Q>| = m n.
        let mut group: HashSet<Point<F>> = HashSet::new();
        let mut a = Point::Infinity;
        for _ in 0..m {
            for s in &span {
                group.insert(curve.add_unchecked(&a, s));
            }
            a = curve.add_unchecked(&a, &q);
        }
        if group.len() != m * n {
            return Err(Error::BoundExceeded("generators do not span the torsion points".into()));
        }
        generators.push(q);
    }
    Ok(TorsionShape { m, n, generators })
}

/// Condition `P(m, n)`: `Psi_{m,A,B}` splits completely over the field and
/// `Psi_{n,A,B}` has a root there. `Psi_1 = 1` splits trivially; for `n = 1`
/// the root requirement is read as vacuous, so `P(1, 1)` always holds.
pub fn condition_p<F: Field>(curve: &Curve<F>, m: usize, n: usize) -> Result<bool> {
    if m == 0 || n == 0 || !n.is_multiple_of(m) {
        return Err(Error::InvalidArgument(format!(
            "need m | n with m, n >= 1, got ({m}, {n})"
        )));
    }
    if m >= 2 {
        let psi_m = primitive_at(m, curve.a(), curve.b())?;
        if roots_in_field(&psi_m).len() != psi_m.degree().unwrap_or(0) {
            return Ok(false);
        }
    }
    if n >= 2 {
        let psi_n = primitive_at(n, curve.a(), curve.b())?;
        if roots_in_field(&psi_n).is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One twist parameter `D` (up to squares) with the root it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistClass<F: Field> {
    pub d: F,
    /// The root of `Psi_n` producing `D = alpha^3 + A alpha + B`.
    pub alpha: Option<F>,
    /// Whether `Z/m x Z/n` was confirmed on the twisted curve.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistClassReport<F: Field> {
    pub m: usize,
    pub n: usize,
    pub classes: Vec<TwistClass<F>>,
    /// Set when `n <= 2`: every twist works and `D = 1` stands for all.
    pub every_class_works: bool,
    /// Roots with `D = 0`, which cannot occur for genuine points of order
    /// at least 3; counted rather than used.
    pub zero_d_roots: usize,
}

impl<F: Field> TwistClassReport<F> {
    pub fn verified_count(&self) -> usize {
        self.classes.iter().filter(|c| c.verified).count()
    }

    /// At most 3 classes for `n >= 3`, exactly 1 for `m >= 3`.
    pub fn within_bounds(&self) -> bool {
        let k = self.classes.len();
        (self.n < 3 || k <= 3) && (self.m < 3 || k == 1)
    }
}

/// The quadratic twists `E^D` (modulo squares) that have `Z/m x Z/n` in
/// their torsion, built from the roots `alpha` of `Psi_n` via
/// `D = alpha^3 + A alpha + B` and the point `(D alpha, D^2)` on `E^D`.
pub fn twist_classes<F: Field>(curve: &Curve<F>, m: usize, n: usize) -> Result<TwistClassReport<F>> {
    if !condition_p(curve, m, n)? {
        return Err(Error::ConditionPNotSatisfied(m, n));
    }
    let ctx = curve.ctx();
    if n <= 2 {
        return Ok(TwistClassReport {
            m,
            n,
            classes: vec![TwistClass {
                d: F::one_in(&ctx),
                alpha: None,
                verified: true,
            }],
            every_class_works: true,
            zero_d_roots: 0,
        });
    }
    let psi_n = primitive_at(n, curve.a(), curve.b())?;
    let mut alphas = roots_in_field(&psi_n);
    sort_simple(&mut alphas);
    let mut classes: Vec<TwistClass<F>> = Vec::new();
    let mut zero_d_roots = 0;
    for alpha in alphas {
        let d = curve.rhs(&alpha);
        if d.is_zero() {
            zero_d_roots += 1;
            continue;
        }
        let mut seen = false;
        for c in &classes {
            if same_square_class(&c.d, &d)? {
                seen = true;
                break;
            }
        }
        if seen {
            continue;
        }
        let twisted = curve.quadratic_twist(&d)?;
        let witness = Point::affine(d.clone() * &alpha, d.square());
        let verified = twisted.contains(&witness)
            && twisted.point_order(&witness, n as u64) == Some(n as u64)
            && condition_p(&twisted, m, m)?;
        classes.push(TwistClass {
            d,
            alpha: Some(alpha),
            verified,
        });
    }
    Ok(TwistClassReport {
        m,
        n,
        classes,
        every_class_works: false,
        zero_d_roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, QuadField, QuadScalar};

    fn curve(a: i64, b: i64) -> Curve<Rational> {
        Curve::new(rat(a), rat(b)).unwrap()
    }

    fn pt(x: i64, y: i64) -> Point<Rational> {
        Point::affine(rat(x), rat(y))
    }

    #[test]
    fn condition_p_examples() {
        assert!(condition_p(&curve(0, 1), 1, 3).unwrap());
        assert!(condition_p(&curve(1, 0), 1, 2).unwrap());
        assert!(!condition_p(&curve(1, 1), 2, 2).unwrap());
        assert!(condition_p(&curve(-1, 0), 2, 2).unwrap());
        assert!(condition_p(&curve(1, 1), 1, 1).unwrap());
        assert!(condition_p(&curve(1, 1), 2, 3).is_err());
    }

    #[test]
    fn torsion_examples() {
        let t = torsion_subgroup(&curve(0, 1)).unwrap();
        assert_eq!((t.m, t.n), (1, 6));
        assert_eq!(t.generators, vec![pt(2, 3)]);
        assert_eq!(t.to_string(), "Z/6Z, generator (2,3)");

        let t = torsion_subgroup(&curve(-1, 0)).unwrap();
        assert_eq!((t.m, t.n), (2, 2));
        assert_eq!(t.generators, vec![pt(0, 0), pt(1, 0)]);

        let t = torsion_subgroup(&curve(1, 1)).unwrap();
        assert_eq!((t.m, t.n), (1, 1));
        assert!(t.generators.is_empty());

        let t = torsion_subgroup(&curve(-43, 166)).unwrap();
        assert_eq!((t.m, t.n), (1, 7));

        let t = torsion_subgroup(&curve(4, 0)).unwrap();
        assert_eq!((t.m, t.n), (1, 4));
    }

    #[test]
    fn brute_force_trivial_torsion_for_1_1() {
        // No root of any Psi_N (N in the Mazur set) gives a rational point.
        let e = curve(1, 1);
        for n in [2usize, 3, 4, 5, 6, 7, 8, 9, 10, 12] {
            assert!(points_of_order(&e, n).unwrap().is_empty(), "N = {n}");
        }
    }

    #[test]
    fn torsion_matches_bound_free_search() {
        // Search every Mazur order directly, without the point-count prefilter.
        for (a, b) in [
            (0, 1),
            (-1, 0),
            (-43, 166),
            (1, 0),
            (0, -432),
            (-219, 1654),
            (4, 0),
            (-7, 10),
        ] {
            let e = curve(a, b);
            let mut total = 1;
            for n in 2..=12 {
                total += points_of_order(&e, n).unwrap().len();
            }
            assert_eq!(torsion_subgroup(&e).unwrap().order(), total, "({a},{b})");
        }
    }

    #[test]
    fn point_counts_bound_torsion() {
        // (0,1) has 6 rational torsion points; the bound must be a multiple.
        assert_eq!(torsion_order_bound(&curve(0, 1)).unwrap() % 6, 0);
        assert_eq!(count_points(0, 1, 5), 6);
    }

    #[test]
    fn twist_examples() {
        let r = twist_classes(&curve(0, 1), 1, 3).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert_eq!(r.classes[0].d, rat(1));
        assert!(r.classes[0].verified);

        let r = twist_classes(&curve(-1, 0), 2, 2).unwrap();
        assert!(r.every_class_works);
        assert_eq!(r.classes.len(), 1);

        assert_eq!(
            twist_classes(&curve(1, 1), 2, 2),
            Err(Error::ConditionPNotSatisfied(2, 2))
        );
    }

    #[test]
    fn quadratic_field_torsion() {
        // y^2 = x^3 + 16 has full 3-torsion over Q(sqrt(-3)): Z/3 x Z/3.
        let k = QuadField::new(-3).unwrap();
        let e = Curve::new(QuadScalar::from_int(&k, 0), QuadScalar::from_int(&k, 16)).unwrap();
        let t = torsion_subgroup(&e).unwrap();
        assert_eq!((t.m, t.n), (3, 3));
        let r = twist_classes(&e, 3, 3).unwrap();
        assert_eq!(r.verified_count(), 1);
        assert!(r.within_bounds());
        // Over Q the same curve has only Z/3.
        let t = torsion_subgroup(&curve(0, 16)).unwrap();
        assert_eq!((t.m, t.n), (1, 3));
    }

    #[test]
    fn admissible_lists() {
        assert!(admissible_shape::<Rational>(&(), 2, 8));
        assert!(!admissible_shape::<Rational>(&(), 1, 11));
        assert!(!admissible_shape::<Rational>(&(), 3, 3));
        let k = QuadField::new(-3).unwrap();
        assert!(admissible_shape::<QuadScalar>(&k, 3, 6));
        assert!(!admissible_shape::<QuadScalar>(&k, 4, 4));
        assert!(admissible_shape::<QuadScalar>(&k, 1, 18));
        assert!(!admissible_shape::<QuadScalar>(&k, 1, 17));
    }
}
