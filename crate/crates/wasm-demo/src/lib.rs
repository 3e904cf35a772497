//! Browser bindings for three torsion-lab operations. Each returns a JSON
//! string; errors surface as thrown strings.

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use wasm_bindgen::prelude::*;

use torsion_lab::divpoly::{primitive_at, primitive_division_poly};
use torsion_lab::exactnum::{Field, QuadField, QuadScalar, Rational};
use torsion_lab::galois::{
    cycle_types, distribution_distance, enumerate_group, frobenius_sample, partition_label, CycleTypeDistribution,
    Variant,
};
use torsion_lab::torsion::torsion_subgroup;
use torsion_lab::weierstrass::Curve;

/// Largest `N` accepted by [`division_polynomial`] in the page.
pub const MAX_DIVPOLY: usize = 12;
/// Largest prime count accepted by [`frobenius_statistics`].
pub const MAX_PRIMES: usize = 20_000;

fn torsion_in<F: Field>(ctx: &F::Ctx, curve: &str) -> Result<Value, String> {
    let e = Curve::<F>::parse(ctx, curve).map_err(|e| e.to_string())?;
    let t = torsion_subgroup(&e).map_err(|e| e.to_string())?;
    let gens: Vec<String> = t.generators.iter().map(|p| p.to_string()).collect();
    Ok(json!({
        "field": F::describe(ctx),
        "curve": e.to_string(),
        "group": t.group_name(),
        "order": t.order(),
        "generators": gens,
        "summary": t.to_string(),
    }))
}

/// Torsion subgroup of `y^2 = x^3 + Ax + B` given as "A,B"; `d = 1` means Q,
/// any other squarefree `d` means Q(sqrt d).
pub fn torsion_report(curve: &str, d: i64) -> Result<String, String> {
    let v = if d == 1 {
        torsion_in::<Rational>(&(), curve)?
    } else {
        torsion_in::<QuadScalar>(&QuadField::new(d).map_err(|e| e.to_string())?, curve)?
    };
    Ok(v.to_string())
}

/// The primitive division polynomial, generic or specialized at "A,B"
/// (empty string for generic).
pub fn divpoly_report(n: usize, curve: &str) -> Result<String, String> {
    if n == 0 || n > MAX_DIVPOLY {
        return Err(format!("N must be between 1 and {MAX_DIVPOLY}"));
    }
    let v = if curve.trim().is_empty() {
        let p = primitive_division_poly(n).map_err(|e| e.to_string())?;
        json!({ "n": n, "degree": p.degree, "polynomial": p.to_string() })
    } else {
        let e = Curve::<Rational>::parse(&(), curve).map_err(|e| e.to_string())?;
        let p = primitive_at(n, e.a(), e.b()).map_err(|e| e.to_string())?;
        json!({ "n": n, "degree": p.degree(), "curve": e.to_string(), "polynomial": p.to_string() })
    };
    Ok(v.to_string())
}

fn decimal_map(d: &CycleTypeDistribution) -> Value {
    let m: Map<String, Value> =
        d.0.iter()
            .map(|(k, v)| (partition_label(k), json!(v.to_f64().unwrap_or(f64::NAN))))
            .collect();
    Value::Object(m)
}

/// Frobenius degree patterns of `Psi_N` at "A,B" against the cycle types of
/// `GL_2(Z/N)/+-1`.
pub fn frobenius_report(curve: &str, n: usize, primes: usize, seed: u64) -> Result<String, String> {
    if primes == 0 || primes > MAX_PRIMES {
        return Err(format!("prime count must be between 1 and {MAX_PRIMES}"));
    }
    let e = Curve::<Rational>::parse(&(), curve).map_err(|e| e.to_string())?;
    let sample = frobenius_sample(e.a(), e.b(), n, primes, seed).map_err(|e| e.to_string())?;
    let theory = cycle_types(&enumerate_group(n as u32, 1, 1, Variant::HBar).map_err(|e| e.to_string())?);
    let empirical = sample.distribution();
    let tv = distribution_distance(&empirical, &theory);
    Ok(json!({
        "curve": e.to_string(),
        "n": n,
        "primes": sample.patterns.len(),
        "empirical": decimal_map(&empirical),
        "theoretical": decimal_map(&theory),
        "tv_distance": tv.to_string(),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn torsion(curve: &str, d: i32) -> Result<String, JsValue> {
    torsion_report(curve, d as i64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn division_polynomial(n: u32, curve: &str) -> Result<String, JsValue> {
    divpoly_report(n as usize, curve).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn frobenius_statistics(curve: &str, n: u32, primes: u32, seed: u32) -> Result<String, JsValue> {
    frobenius_report(curve, n as usize, primes as usize, seed as u64).map_err(|e| JsValue::from_str(&e))
}
