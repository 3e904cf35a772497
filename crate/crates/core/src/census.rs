//! Height-ordered census of integral curves `y^2 = x^3 + Ax + B` over `Q`
//! by torsion subgroup.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rational;
use crate::par::{map_ordered, with_threads};
use crate::torsion::torsion_subgroup;
use crate::weierstrass::Curve;

/// The torsion groups over `Q`: `Z/n` for `n <= 10, 12` and `Z/2 x Z/2n`
/// for `n <= 4`.
pub fn mazur_shapes() -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (1..=10).chain([12]).map(|n| (1, n)).collect();
    out.extend([(2, 2), (2, 4), (2, 6), (2, 8)]);
    out
}

/// `max(|A|^3, B^2, 1)`.
pub fn curve_height(a: i64, b: i64) -> u128 {
    let a3 = (a.unsigned_abs() as u128).pow(3);
    let b2 = (b.unsigned_abs() as u128).pow(2);
    a3.max(b2).max(1)
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

fn icbrt(x: u64) -> u64 {
    let mut r = (x as f64).cbrt() as u64;
    while r.pow(3) > x {
        r -= 1;
    }
    while (r + 1).pow(3) <= x {
        r += 1;
    }
    r
}

/// Whether some prime `p` has `p^4 | A` and `p^6 | B`.
pub fn is_nonminimal(a: i64, b: i64) -> bool {
    let (a, b) = (a.unsigned_abs(), b.unsigned_abs());
    if a == 0 && b == 0 {
        return false;
    }
    let mut p = 2u64;
    loop {
        let p4 = p.pow(4);
        let p6 = p4 * p * p;
        let a_ok = a == 0 || p4 <= a;
        let b_ok = b == 0 || p6 <= b;
        if !(a_ok && b_ok) {
            return false;
        }
        if a % p4 == 0 && b % p6 == 0 {
            return true;
        }
        p += 1;
    }
}

/// All nonsingular `(A, B)` with `max(|A|^3, B^2) <= X`, in lexicographic
/// order, optionally skipping non-minimal models.
pub fn enumerate_curves(x: u64, minimal_only: bool) -> Vec<(i64, i64)> {
    let amax = icbrt(x) as i64;
    let bmax = isqrt(x) as i64;
    let mut out = Vec::new();
    for a in -amax..=amax {
        for b in -bmax..=bmax {
            let disc = 4 * (a as i128).pow(3) + 27 * (b as i128).pow(2);
            if disc == 0 || (minimal_only && is_nonminimal(a, b)) {
                continue;
            }
            out.push((a, b));
        }
    }
    out
}

/// Tallies at one height cutoff.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub x: u64,
    pub total: u64,
    /// Curves with torsion exactly `Z/m x Z/n`.
    pub counts: BTreeMap<(usize, usize), u64>,
    /// Curves whose torsion contains `Z/m x Z/n`.
    pub contains: BTreeMap<(usize, usize), u64>,
}

impl CensusRow {
    fn empty(x: u64) -> Self {
        let zero: BTreeMap<_, _> = mazur_shapes().into_iter().map(|s| (s, 0)).collect();
        CensusRow {
            x,
            total: 0,
            counts: zero.clone(),
            contains: zero,
        }
    }

    fn record(&mut self, shape: (usize, usize)) {
        self.total += 1;
        *self.counts.entry(shape).or_default() += 1;
        for (&(m, n), c) in self.contains.iter_mut() {
            if shape.0.is_multiple_of(m) && shape.1.is_multiple_of(n) {
                *c += 1;
            }
        }
    }
}

/// Curves per parallel block; blocks are merged in order.
const BLOCK: usize = 512;

/// Torsion shapes of every curve up to the largest cutoff, tallied
/// cumulatively at each cutoff. The result does not depend on `threads`.
pub fn run_census(heights: &[u64], minimal_only: bool, threads: Option<usize>) -> Result<Vec<CensusRow>> {
    if heights.is_empty() {
        return Ok(vec![]);
    }
    if heights.windows(2).any(|w| w[0] > w[1]) || heights[0] == 0 {
        return Err(Error::InvalidArgument("heights must be positive and ascending".into()));
    }
    let xmax = *heights.last().expect("nonempty");
    let curves = enumerate_curves(xmax, minimal_only);
    let blocks: Vec<&[(i64, i64)]> = curves.chunks(BLOCK).collect();
    let shapes = with_threads(threads, || {
        map_ordered(&blocks, |block| {
            block
                .iter()
                .map(|&(a, b)| {
                    let e = Curve::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))?;
                    let t = torsion_subgroup(&e)?;
                    Ok((curve_height(a, b), (t.m, t.n)))
                })
                .collect::<Result<Vec<_>>>()
        })
    });
    let mut rows: Vec<CensusRow> = heights.iter().map(|&x| CensusRow::empty(x)).collect();
    for block in shapes {
        for (h, shape) in block? {
            for row in rows.iter_mut().filter(|r| h <= r.x as u128) {
                row.record(shape);
            }
        }
    }
    Ok(rows)
}

/// `exact / contains` at one cutoff; `None` when nothing contains the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPoint {
    pub x: u64,
    pub exact: u64,
    pub contains: u64,
    pub ratio: Option<Rational>,
}

pub fn density_ratio(rows: &[CensusRow], m: usize, n: usize) -> Result<Vec<DensityPoint>> {
    if !mazur_shapes().contains(&(m, n)) {
        return Err(Error::UnsupportedPair(m, n));
    }
    Ok(rows
        .iter()
        .map(|r| {
            let exact = r.counts.get(&(m, n)).copied().unwrap_or(0);
            let contains = r.contains.get(&(m, n)).copied().unwrap_or(0);
            let ratio = (contains > 0).then(|| Rational::new(BigInt::from(exact), BigInt::from(contains)));
            DensityPoint {
                x: r.x,
                exact,
                contains,
                ratio,
            }
        })
        .collect())
}

/// Least-squares fit of `log(contains count)` against `log X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub points: usize,
}

/// Fit `count ~ C X^slope` to `(X, count)` pairs with positive counts.
pub fn fit_power_law(data: &[(u64, u64)]) -> Result<ExponentFit> {
    let pts: Vec<(f64, f64)> = data
        .iter()
        .filter(|(x, c)| *x > 0 && *c > 0)
        .map(|&(x, c)| ((x as f64).ln(), (c as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} usable rows, need at least 2",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all rows share one height".into()));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / k).sqrt();
    Ok(ExponentFit {
        slope,
        intercept,
        residual,
        points: pts.len(),
    })
}

/// Exploratory growth exponent of the containment counts for `Z/m x Z/n`.
pub fn fit_exponent(rows: &[CensusRow], m: usize, n: usize) -> Result<ExponentFit> {
    let data: Vec<(u64, u64)> = density_ratio(rows, m, n)?.iter().map(|p| (p.x, p.contains)).collect();
    fit_power_law(&data)
}

/// A rational to six significant digits.
pub fn decimal6(q: &Rational) -> String {
    let v = q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0.00000".into();
    }
    let digits = 5 - v.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, v)
}

pub const CSV_HEADER: &str = "X,m,n,exact_count,contains_count,ratio_num,ratio_den,ratio_decimal";

/// One line per cutoff and torsion group; an empty containment set gives
/// `NA` in the ratio columns.
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        for (m, n) in mazur_shapes() {
            let p = &density_ratio(std::slice::from_ref(row), m, n).expect("Mazur shape")[0];
            let (num, den, dec) = match &p.ratio {
                Some(q) => (q.numer().to_string(), q.denom().to_string(), decimal6(q)),
                None => ("NA".into(), "NA".into(), "NA".into()),
            };
            writeln!(out, "{},{m},{n},{},{},{num},{den},{dec}", row.x, p.exact, p.contains).expect("string write");
        }
    }
    out
}
