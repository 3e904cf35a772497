//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torsion_lab::census::{density_ratio, run_census};
use torsion_lab::divpoly::{
    division_poly, expected_degree, mult_formulas, primitive_division_poly, primitive_specialized, BiPoly,
    SYMBOLIC_LIMIT,
};
use torsion_lab::exactnum::{rat, ratio, Field, QuadField, QuadScalar, Rational};
use torsion_lab::families::{
    degree_triple, family_for, resolve_three_three, sample_specializations, verify_family, FamilySpec,
};
use torsion_lab::galois::{
    conjugate_containment, cycle_types, distribution_distance, enumerate_group, frobenius_sample, group_index,
    CycleTypeDistribution, Variant,
};
use torsion_lab::torsion::{torsion_subgroup, twist_classes};
use torsion_lab::weierstrass::{Curve, Point};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || {
        format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs())
    })
}

fn random_rat(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    ratio(rng.gen_range(-span..=span), rng.gen_range(1..=5))
}

fn nonzero_rat(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    loop {
        let r = random_rat(rng, span);
        if !Field::is_zero(&r) {
            return r;
        }
    }
}

fn division_polynomial_fidelity() -> Outcome {
    let start = Instant::now();
    let printed = [(0, "0"), (1, "1"), (2, "2*y"), (3, "3*x^4 + 6*s*x^2 + 12*t*x - s^2")];
    for (n, text) in printed {
        let got = division_poly(n).to_string();
        ensure(got == text, || format!("psi_{n} renders as {got}, expected {text}"))?;
    }
    // 4y(x^6 + 5sx^4 + 20tx^3 - 5s^2x^2 - 4stx - (8t^2 + s^3)), term by term
    let psi4 = BiPoly::<Rational>::from_terms(
        1,
        &[
            (4, 0, 0, 6),
            (20, 1, 0, 4),
            (80, 0, 1, 3),
            (-20, 2, 0, 2),
            (-16, 1, 1, 1),
            (-32, 0, 2, 0),
            (-4, 3, 0, 0),
        ],
    );
    ensure(division_poly(4) == psi4, || format!("psi_4 = {}", division_poly(4)))?;
    let inner = division_poly(4)
        .exact_divide(&BiPoly::from_terms(1, &[(4, 0, 0, 0)]))
        .ok_or("4y does not divide psi_4")?;
    ensure(
        inner.to_string() == "x^6 + 5*s*x^4 + 20*t*x^3 - 5*s^2*x^2 - 4*s*t*x - s^3 - 8*t^2",
        || format!("psi_4 / 4y = {inner}"),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok("psi_0..psi_4 exact".into())
}

/// Half the number of points of exact order `n` in `(Z/n)^2`, by counting.
fn half_exact_order_points(n: usize) -> usize {
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            let order = n / n.gcd(&x).gcd(&y);
            if order == n {
                count += 1;
            }
        }
    }
    count / 2
}

fn degree_law() -> Outcome {
    let start = Instant::now();
    let (a, b) = (rat(2), rat(-3));
    for n in 3..=18usize {
        let want = half_exact_order_points(n);
        ensure(expected_degree(n) == want, || {
            format!(
                "closed form gives {} for N = {n}, count gives {want}",
                expected_degree(n)
            )
        })?;
        let got = if n <= SYMBOLIC_LIMIT {
            primitive_division_poly(n).map_err(|e| e.to_string())?.degree
        } else {
            primitive_specialized(n, &a, &b)
                .map_err(|e| e.to_string())?
                .degree()
                .unwrap_or(0)
        };
        ensure(got == want, || format!("deg Psi_{n} = {got}, expected {want}"))?;
    }
    within(start, Duration::from_secs(10))?;
    Ok("3 <= N <= 18".into())
}

fn homogeneity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let polys: Vec<_> = (3..=10).map(|n| primitive_division_poly(n).unwrap()).collect();
    for _ in 0..50 {
        let d = nonzero_rat(&mut rng, 9);
        let a = random_rat(&mut rng, 20);
        let b = random_rat(&mut rng, 20);
        let (a2, b2) = (&d * &d * &a, &d * &d * &d * &b);
        for psi in &polys {
            let lhs = psi.specialize(&a2, &b2).scale_variable(&d);
            let rhs = psi.specialize(&a, &b).scale(&Field::pow(&d, psi.degree as u64));
            ensure(lhs == rhs, || format!("N = {}, D = {d}, A = {a}, B = {b}", psi.n))?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok("50 triples, N <= 10".into())
}

fn multiplication_consistency() -> Outcome {
    let start = Instant::now();
    let formulas: Vec<_> = (2..=12i64)
        .map(|n| {
            let (phi, omega) = mult_formulas(n);
            (n, division_poly(n), phi, omega)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = 0;
    while pairs < 20 {
        let (x, y, a) = (
            random_rat(&mut rng, 12),
            random_rat(&mut rng, 12),
            random_rat(&mut rng, 12),
        );
        let b = &y * &y - &x * &x * &x - &a * &x;
        let Ok(e) = Curve::new(a.clone(), b.clone()) else {
            continue;
        };
        if Field::is_zero(&y) {
            continue;
        }
        pairs += 1;
        let p = Point::affine(x.clone(), y.clone());
        for (n, psi, phi, omega) in &formulas {
            let psi = psi.eval_at(&a, &b, &x, &y);
            let np = e.scalar_mul(*n, &p).map_err(|e| e.to_string())?;
            if Field::is_zero(&psi) {
                ensure(np.is_infinity(), || format!("psi_{n} vanishes but [{n}]P is affine"))?;
                continue;
            }
            let (nx, ny) = (
                np.x().ok_or("unexpected infinity")?,
                np.y().ok_or("unexpected infinity")?,
            );
            ensure(nx.clone() * &psi.square() == phi.eval_at(&a, &b, &x, &y), || {
                format!("x-part, n = {n}, P = {p}")
            })?;
            ensure(
                ny.clone() * &Field::pow(&psi, 3) == omega.eval_at(&a, &b, &x, &y),
                || format!("y-part, n = {n}, P = {p}"),
            )?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("20 pairs, 2 <= n <= 12".into())
}

/// Affine point arithmetic on `y^2 = x^3 + ax + b`, kept apart from the
/// library's implementation.
mod oracle {
    use super::*;

    pub type Pt = Option<(Rational, Rational)>;

    pub fn add(a: &Rational, p: &Pt, q: &Pt) -> Pt {
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return if p.is_none() { q.clone() } else { p.clone() };
        };
        let lambda = if x1 == x2 {
            if Zero::is_zero(&(y1 + y2)) {
                return None;
            }
            (rat(3) * x1 * x1 + a) / (rat(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        Some((x3, y3))
    }

    pub fn order(a: &Rational, p: &Pt, limit: usize) -> Option<usize> {
        let mut q = p.clone();
        for k in 1..=limit {
            if q.is_none() {
                return Some(k);
            }
            q = add(a, &q, p);
        }
        None
    }

    fn divisors(n: &BigInt) -> Vec<BigInt> {
        let n = n.abs();
        let mut out = Vec::new();
        let mut d = BigInt::from(1);
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                out.push(d.clone());
                out.push(&n / &d);
            }
            d += 1;
        }
        out
    }

    /// Integral points with `y = 0` or `y^2 | 4a^3 + 27b^2`, then the ones
    /// of finite order; returns `(m, n)` of the torsion group.
    pub fn torsion_shape(a: i64, b: i64) -> (usize, usize) {
        let disc = BigInt::from(4 * a * a * a + 27 * b * b);
        let mut ys = vec![BigInt::zero()];
        let mut y = BigInt::from(1);
        while &y * &y <= disc.abs() {
            if (&disc % (&y * &y)).is_zero() {
                ys.push(y.clone());
                ys.push(-y.clone());
            }
            y += 1;
        }
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        let mut orders = Vec::new();
        for y in ys {
            let c = &bb - &y * &y;
            let xs: Vec<BigInt> = if c.is_zero() {
                let mut v = vec![BigInt::zero()];
                for d in divisors(&ab).into_iter().chain([BigInt::from(1)]) {
                    v.push(d.clone());
                    v.push(-d);
                }
                v
            } else {
                divisors(&c).into_iter().flat_map(|d| [d.clone(), -d]).collect()
            };
            let mut seen = Vec::new();
            for x in xs {
                if seen.contains(&x) || !(&x * &x * &x + &ab * &x + &c).is_zero() {
                    continue;
                }
                seen.push(x.clone());
                let p: Pt = Some((Rational::from_integer(x), Rational::from_integer(y.clone())));
                if let Some(k) = order(&rat(a), &p, 12) {
                    orders.push(k);
                }
            }
        }
        let total = orders.len() + 1;
        let n = orders.iter().copied().max().unwrap_or(1);
        (total / n, n)
    }
}

fn known_torsion() -> Outcome {
    let start = Instant::now();
    let cases = [
        ((0, 1), (1, 6)),
        ((-1, 0), (2, 2)),
        ((4, 0), (1, 4)),
        ((-43, 166), (1, 7)),
        ((1, 1), (1, 1)),
    ];
    for ((a, b), listed) in cases {
        let brute = oracle::torsion_shape(a, b);
        ensure(brute == listed, || format!("brute force gives {brute:?} for ({a},{b})"))?;
        let e = Curve::new(rat(a), rat(b)).map_err(|e| e.to_string())?;
        let t = torsion_subgroup(&e).map_err(|e| e.to_string())?;
        ensure((t.m, t.n) == brute, || {
            format!("({a},{b}): library {:?}, brute force {brute:?}", (t.m, t.n))
        })?;
    }
    within(start, Duration::from_secs(10))?;
    Ok("5 curves agree with brute force".into())
}

fn twist_counts<F: Field>(spec: &FamilySpec, ctx: &F::Ctx, count: usize, seed: u64) -> Result<Vec<String>, String> {
    let mut violations = Vec::new();
    for s in sample_specializations::<F>(spec, ctx, count, seed).map_err(|e| e.to_string())? {
        let r = twist_classes(&s.curve, spec.m, spec.n).map_err(|e| format!("{} at r = {}: {e}", spec.label, s.r))?;
        if !r.within_bounds() {
            violations.push(format!("{} at r = {}: {} classes", spec.label, s.r, r.classes.len()));
        }
    }
    Ok(violations)
}

fn twist_class_bounds() -> Outcome {
    let pairs = [(1, 3), (1, 4), (1, 5), (1, 6), (1, 7), (2, 4), (2, 6), (3, 3)];
    let per = 25;
    let mut violations = Vec::new();
    for (k, (m, n)) in pairs.into_iter().enumerate() {
        let spec = family_for(m, n).map_err(|e| e.to_string())?;
        let seed = 600 + k as u64;
        violations.extend(match spec.required.quad_d() {
            None => twist_counts::<Rational>(&spec, &(), per, seed)?,
            Some(d) => twist_counts::<QuadScalar>(&spec, &QuadField::new(d).unwrap(), per, seed)?,
        });
    }
    ensure(violations.is_empty(), || violations.join("; "))?;
    Ok(format!("{} curves, 0 violations", pairs.len() * per))
}

fn family_certification() -> Outcome {
    let start = Instant::now();
    for (m, n) in [(1, 2), (2, 2), (1, 3)] {
        let spec = family_for(m, n).map_err(|e| e.to_string())?;
        let r = verify_family(&spec, 20, 7);
        ensure(r.passed(), || {
            format!("{}: failed {:?}", r.label, r.failed_conditions())
        })?;
        let index = group_index(n as u32, m as u32, n as u32)
            .map_err(|e| e.to_string())?
            .mod_pm;
        let (df, dg, _) = degree_triple(&spec);
        ensure((3 * df).max(2 * dg) as u64 == index, || {
            format!("{}: max(3 deg f, 2 deg g) != {index}", r.label)
        })?;
    }
    let (winner, reports) = resolve_three_three();
    let w = winner.ok_or("the (3,3) candidates did not resolve to exactly one")?;
    let loser = &reports[1 - w];
    ensure(loser.failed_conditions().contains(&"(i)"), || {
        format!("losing candidate failed {:?}", loser.failed_conditions())
    })?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "(3,3) resolves to {}; {} fails {}",
        reports[w].label,
        loser.label,
        loser.failed_conditions().join(", ")
    ))
}

fn group_index_identities() -> Outcome {
    let start = Instant::now();
    for n in [3u32, 4, 5, 6] {
        let deg = primitive_division_poly(n as usize).map_err(|e| e.to_string())?.degree as u64;
        let idx = group_index(n, 1, n).map_err(|e| e.to_string())?;
        ensure(idx.mod_pm == deg && idx.plain == 2 * deg, || {
            format!("N = {n}: {idx:?}, deg {deg}")
        })?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("N in {3,4,5,6}".into())
}

fn conjugate_containment_criterion() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for big in [4u32, 6] {
        let levels: Vec<(u32, u32)> = (1..=big)
            .filter(|n| big % n == 0)
            .flat_map(|n| (1..=n).filter(move |m| n % m == 0).map(move |m| (m, n)))
            .collect();
        for &(m, n) in &levels {
            for &(m2, n2) in &levels {
                let got = conjugate_containment(big, m, n, m2, n2).map_err(|e| e.to_string())?;
                let want = m % m2 == 0 && n % n2 == 0;
                ensure(got == want, || {
                    format!("N = {big}, ({m},{n}) vs ({m2},{n2}): got {got}")
                })?;
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{checked} tuples, 0 mismatches"))
}

fn chebotarev() -> Outcome {
    let start = Instant::now();
    let theory = cycle_types(&enumerate_group(3, 1, 1, Variant::HBar).map_err(|e| e.to_string())?);
    let s4: BTreeMap<Vec<usize>, Rational> = [
        (vec![1, 1, 1, 1], ratio(1, 24)),
        (vec![2, 1, 1], ratio(6, 24)),
        (vec![2, 2], ratio(3, 24)),
        (vec![3, 1], ratio(8, 24)),
        (vec![4], ratio(6, 24)),
    ]
    .into_iter()
    .collect();
    ensure(theory == CycleTypeDistribution(s4), || {
        format!("enumerated distribution {theory:?}")
    })?;
    let sample = frobenius_sample(&rat(1), &rat(1), 3, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(sample.patterns.len() == 10_000, || {
        format!("{} primes", sample.patterns.len())
    })?;
    let tv = distribution_distance(&sample.distribution(), &theory)
        .to_f64()
        .unwrap_or(1.0);
    ensure(tv < 0.05, || format!("TV distance {tv:.4}"))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("TV distance {tv:.4} over 10000 primes"))
}

/// Ratio of (1,1) at X = 10^6 on the first verified run.
const FIXTURE_TRIVIAL_RATIO: (i64, i64) = (397_878, 401_782);

fn density_trend() -> Outcome {
    let start = Instant::now();
    let mut small = 0;
    for a in -2i64..=2 {
        for b in -3i64..=3 {
            if a.abs().pow(3) <= 9 && b * b <= 9 && 4 * a.pow(3) + 27 * b * b != 0 {
                small += 1;
            }
        }
    }
    let rows9 = run_census(&[9], true, None).map_err(|e| e.to_string())?;
    ensure(small == 34 && rows9[0].total == 34, || {
        format!("X = 9: oracle {small}, census {}", rows9[0].total)
    })?;
    let rows = run_census(&[100, 10_000, 1_000_000], true, None).map_err(|e| e.to_string())?;
    for (m, n) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
        let pts = density_ratio(&rows, m, n).map_err(|e| e.to_string())?;
        let ratios: Vec<Rational> = pts
            .iter()
            .map(|p| p.ratio.clone().ok_or("empty containment set"))
            .collect::<Result<_, _>>()?;
        ensure(ratios.windows(2).all(|w| w[0] <= w[1]), || {
            format!("({m},{n}) ratios not nondecreasing")
        })?;
        if (m, n) == (1, 1) {
            let last = ratios.last().unwrap();
            let fixture = ratio(FIXTURE_TRIVIAL_RATIO.0, FIXTURE_TRIVIAL_RATIO.1);
            ensure(*last >= fixture && *last >= ratio(9, 10), || {
                format!("(1,1) ratio at 10^6 is {last}")
            })?;
        }
    }
    within(start, Duration::from_secs(1800))?;
    Ok(format!("{} curves at X = 10^6", rows[2].total))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("torsion-lab").chain(args.iter().copied());
    let code = torsion_lab::cli::dispatch(argv, &mut out, &mut err);
    ensure(code == 0, || {
        format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err))
    })?;
    Ok(out)
}

fn determinism() -> Outcome {
    let jobs: [&[&str]; 4] = [
        &["census", "--heights", "100,10000"],
        &[
            "--json",
            "--seed",
            "11",
            "galois",
            "sample",
            "1,1",
            "4",
            "--primes",
            "400",
            "--compare",
            "1,2",
        ],
        &["--seed", "5", "family", "gen", "1", "5", "--count", "20"],
        &["--json", "--seed", "2", "twists", "0,1", "1", "3"],
    ];
    for job in jobs {
        let reference = run_cli(job)?;
        for threads in ["1", "4", "8", "1"] {
            let mut args = vec!["--threads", threads];
            args.extend_from_slice(job);
            ensure(run_cli(&args)? == reference, || {
                format!("{job:?} differs with {threads} threads")
            })?;
        }
    }
    Ok("census CSV, family CSV, JSON reports".into())
}

fn main() -> ExitCode {
    let criteria: [Check; 12] = [
        ("division polynomial fidelity", division_polynomial_fidelity),
        ("degree law", degree_law),
        ("homogeneity", homogeneity),
        ("multiplication consistency", multiplication_consistency),
        ("known torsion oracle", known_torsion),
        ("twist class bounds", twist_class_bounds),
        ("family certification", family_certification),
        ("group index identities", group_index_identities),
        ("conjugate containment", conjugate_containment_criterion),
        ("Chebotarev sanity", chebotarev),
        ("density trend", density_trend),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail}; {secs:.1} s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} ({why}; {secs:.1} s)", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
