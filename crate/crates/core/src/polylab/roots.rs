//! Roots in `Q` and in a quadratic field.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{small_factors, Poly, ZPoly};
use crate::exactnum::{Field, QuadScalar, Rational};

const ROOT_SEED: u64 = 0x726f_6f74;

/// Norm down to `Q`: the polynomial itself when its coefficients are
/// rational, otherwise `p * conj(p)`.
fn rational_shadow<F: Field>(p: &Poly<F>) -> Poly<Rational> {
    p.to_rational()
        .unwrap_or_else(|| p.mul(&p.conj()).to_rational().expect("norm has rational coefficients"))
}

/// All roots of `p` in its coefficient field, each listed once. The zero
/// polynomial and nonzero constants have none.
pub fn roots_in_field<F: Field>(p: &Poly<F>) -> Vec<F> {
    if p.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let ctx = p.ctx();
    let shadow = ZPoly::from_rational_poly(&rational_shadow(p));
    let max_degree = F::extension_degree().min(2);
    let mut rng = ChaCha8Rng::seed_from_u64(ROOT_SEED);
    let mut out: Vec<F> = Vec::new();
    for q in small_factors(&shadow, max_degree, &mut rng) {
        let c: Vec<Rational> = q.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
        let candidates = match c.len() {
            2 => vec![F::from_rational(ctx, &(-&c[0] / &c[1]))],
            3 => {
                let disc = &c[1] * &c[1] - Rational::from_integer(4.into()) * &c[0] * &c[2];
                match F::from_rational(ctx, &disc).sqrt() {
                    Some(s) => {
                        let two_a = F::from_rational(ctx, &(&c[2] * Rational::from_integer(2.into())));
                        let inv = two_a.inv().expect("nonzero leading coefficient");
                        let minus_b = F::from_rational(ctx, &-&c[1]);
                        vec![(minus_b.clone() + &s) * &inv, (minus_b - &s) * &inv]
                    }
                    None => vec![],
                }
            }
            _ => vec![],
        };
        for r in candidates {
            if p.eval(&r).is_zero() && !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out
}

/// Distinct rational roots in increasing order.
pub fn rational_roots(p: &Poly<Rational>) -> Vec<Rational> {
    let mut r = roots_in_field(p);
    r.sort();
    r
}

/// Distinct roots lying in the quadratic field of the coefficients.
pub fn roots_in_quad_field(p: &Poly<QuadScalar>) -> Vec<QuadScalar> {
    roots_in_field(p)
}

/// Distinct roots together with their multiplicities.
pub fn roots_with_multiplicity<F: Field>(p: &Poly<F>) -> Vec<(F, usize)> {
    roots_in_field(p)
        .into_iter()
        .map(|r| {
            let lin = Poly::linear_root(&r);
            let mut m = 0;
            let mut q = p.clone();
            while let Ok(next) = q.exact_divide(&lin) {
                q = next;
                m += 1;
            }
            (r, m)
        })
        .collect()
}
