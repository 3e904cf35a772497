//! Division polynomials `psi_n`, the multiplication formulas `phi_n`,
//! `omega_n`, and the primitive division polynomials `Psi_N`.
//!
//! Symbolic polynomials live in `Q[s,t][x]` with the curve equation
//! `y^2 = x^3 + s x + t` used to remove every power of `y` but the first;
//! a parity bit records whether one factor of `y` remains. The same
//! recursion also runs directly in `K[x]` once `(s, t)` is specialized,
//! which is how large `N` are handled.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Display};
use std::ops::Neg;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{Field, Rational};
use crate::polylab::Poly;

/// Largest `N` whose `Psi_N` is built symbolically and cached.
pub const SYMBOLIC_LIMIT: usize = 12;

/// Coefficient rings for symbolic polynomials.
pub trait Coef:
    Clone + PartialEq + Num + Signed + FromPrimitive + Neg<Output = Self> + Display + Send + Sync + 'static
{
    fn to_rational(&self) -> Rational;
}

impl Coef for BigInt {
    fn to_rational(&self) -> Rational {
        Rational::from_integer(self.clone())
    }
}

impl Coef for Rational {
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// Polynomial in `s` and `t`, keyed by `(s exponent, t exponent)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StPoly<C: Coef>(BTreeMap<(u32, u32), C>);

impl<C: Coef> StPoly<C> {
    pub fn zero() -> Self {
        StPoly(BTreeMap::new())
    }

    pub fn monomial(c: C, i: u32, j: u32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((i, j), c);
        }
        StPoly(m)
    }

    pub fn constant(c: C) -> Self {
        StPoly::monomial(c, 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.0.iter()
    }

    /// The value if this is a constant.
    pub fn as_constant(&self) -> Option<C> {
        match self.0.len() {
            0 => Some(C::zero()),
            1 => self.0.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn accumulate(&mut self, key: (u32, u32), c: C) {
        use std::collections::btree_map::Entry;
        match self.0.entry(key) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.accumulate(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.accumulate(*k, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        StPoly(self.0.iter().map(|(k, c)| (*k, -c.clone())).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = StPoly::zero();
        for ((i1, j1), c1) in &self.0 {
            for ((i2, j2), c2) in &o.0 {
                out.accumulate((i1 + i2, j1 + j2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return StPoly::zero();
        }
        StPoly(self.0.iter().map(|(key, c)| (*key, c.clone() * k.clone())).collect())
    }

    fn map<D: Coef>(&self, f: impl Fn(&C) -> D) -> StPoly<D> {
        StPoly(self.0.iter().map(|(k, c)| (*k, f(c))).collect())
    }

    /// Exact division of every coefficient by an integer.
    fn div_exact_int(&self, d: &C) -> Option<Self>
    where
        C: Integer,
    {
        let mut out = BTreeMap::new();
        for (k, c) in &self.0 {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.insert(*k, q);
        }
        Some(StPoly(out))
    }

    pub fn eval<F: Field>(&self, powers: &Powers<F>) -> F {
        let mut acc = F::zero_in(&powers.ctx);
        for ((i, j), c) in &self.0 {
            let term =
                F::from_rational(&powers.ctx, &c.to_rational()) * &powers.s[*i as usize] * &powers.t[*j as usize];
            acc = acc + &term;
        }
        acc
    }

    fn max_exponents(&self) -> (u32, u32) {
        self.0.keys().fold((0, 0), |(a, b), (i, j)| (a.max(*i), b.max(*j)))
    }
}

/// Cached powers of a specialization point `(A, B)`.
pub struct Powers<F: Field> {
    ctx: F::Ctx,
    s: Vec<F>,
    t: Vec<F>,
}

impl<F: Field> Powers<F> {
    pub fn new(a: &F, b: &F, max_s: u32, max_t: u32) -> Self {
        let ctx = a.context();
        let build = |base: &F, n: u32| {
            let mut v = vec![F::one_in(&ctx)];
            for k in 0..n as usize {
                let next = v[k].clone() * base;
                v.push(next);
            }
            v
        };
        Powers {
            s: build(a, max_s),
            t: build(b, max_t),
            ctx: ctx.clone(),
        }
    }
}

/// A polynomial in `Q[s,t][x]` (or `Z[s,t][x]`) times `y^parity`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly<C: Coef> {
    x: Vec<StPoly<C>>,
    parity: u8,
}

impl<C: Coef> BiPoly<C> {
    pub fn zero() -> Self {
        BiPoly { x: vec![], parity: 0 }
    }

    /// Builds from `(coefficient, s exponent, t exponent, x exponent)` terms.
    pub fn from_terms(parity: u8, terms: &[(i64, u32, u32, usize)]) -> Self {
        let mut x: Vec<StPoly<C>> = Vec::new();
        for &(c, i, j, k) in terms {
            if x.len() <= k {
                x.resize(k + 1, StPoly::zero());
            }
            x[k].accumulate((i, j), C::from_i64(c).expect("integer coefficient"));
        }
        BiPoly::new(x, parity)
    }

    fn new(mut x: Vec<StPoly<C>>, parity: u8) -> Self {
        while x.last().is_some_and(|c| c.is_zero()) {
            x.pop();
        }
        BiPoly { x, parity }
    }

    /// Whether a factor `y` multiplies the polynomial part.
    pub fn y_parity(&self) -> u8 {
        self.parity
    }

    pub fn x_coeffs(&self) -> &[StPoly<C>] {
        &self.x
    }

    /// Degree in `x` of the polynomial part; `None` for zero.
    pub fn x_degree(&self) -> Option<usize> {
        self.x.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_empty()
    }

    /// The curve polynomial `x^3 + s x + t`.
    pub fn cubic() -> Self {
        let mut x = vec![StPoly::zero(); 4];
        x[0] = StPoly::monomial(C::one(), 0, 1);
        x[1] = StPoly::monomial(C::one(), 1, 0);
        x[3] = StPoly::constant(C::one());
        BiPoly::new(x, 0)
    }

    fn plain_mul(a: &[StPoly<C>], b: &[StPoly<C>]) -> Vec<StPoly<C>> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![StPoly::zero(); a.len() + b.len() - 1];
        for (i, p) in a.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in b.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let prod = p.mul(q);
                for (k, c) in prod.0 {
                    out[i + j].accumulate(k, c);
                }
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut x = Self::plain_mul(&self.x, &o.x);
        let mut parity = self.parity + o.parity;
        if parity == 2 {
            x = Self::plain_mul(&x, &Self::cubic().x);
            parity = 0;
        }
        BiPoly::new(x, parity)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg() } else { o.clone() };
        }
        assert_eq!(self.parity, o.parity, "adding terms of different y-parity");
        let n = self.x.len().max(o.x.len());
        let zero = StPoly::zero();
        let x = (0..n)
            .map(|i| {
                let a = self.x.get(i).unwrap_or(&zero);
                let b = o.x.get(i).unwrap_or(&zero);
                if negate {
                    a.sub(b)
                } else {
                    a.add(b)
                }
            })
            .collect();
        BiPoly::new(x, self.parity)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            x: self.x.iter().map(|c| c.neg()).collect(),
            parity: self.parity,
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        BiPoly::new(self.x.iter().map(|c| c.scale(k)).collect(), self.parity)
    }

    /// Multiplies by `x`.
    pub fn shift_x(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut x = vec![StPoly::zero()];
        x.extend(self.x.iter().cloned());
        BiPoly::new(x, self.parity)
    }

    /// Exact division by `x^3 + s x + t` in the polynomial part.
    fn div_cubic(&self) -> Option<Vec<StPoly<C>>> {
        let mut r = self.x.clone();
        if r.len() < 4 {
            return r.iter().all(|c| c.is_zero()).then(Vec::new);
        }
        let mut q = vec![StPoly::zero(); r.len() - 3];
        let s = StPoly::monomial(C::one(), 1, 0);
        let t = StPoly::monomial(C::one(), 0, 1);
        for d in (3..r.len()).rev() {
            let c = std::mem::replace(&mut r[d], StPoly::zero());
            r[d - 2] = r[d - 2].sub(&c.mul(&s));
            r[d - 3] = r[d - 3].sub(&c.mul(&t));
            q[d - 3] = c;
        }
        r[..3].iter().all(|c| c.is_zero()).then_some(q)
    }

    /// Exact division by `y`.
    pub fn div_y(&self) -> Option<Self> {
        if self.parity == 1 {
            return Some(BiPoly {
                x: self.x.clone(),
                parity: 0,
            });
        }
        Some(BiPoly::new(self.div_cubic()?, 1))
    }

    pub fn map<D: Coef>(&self, f: impl Fn(&C) -> D + Copy) -> BiPoly<D> {
        BiPoly {
            x: self.x.iter().map(|c| c.map(f)).collect(),
            parity: self.parity,
        }
    }

    pub fn to_rational(&self) -> BiPoly<Rational> {
        self.map(|c| c.to_rational())
    }

    fn powers_needed(&self) -> (u32, u32) {
        self.x
            .iter()
            .map(|c| c.max_exponents())
            .fold((0, 0), |(a, b), (i, j)| (a.max(i), b.max(j)))
    }

    /// Substitutes `s = A`, `t = B`; returns the polynomial part and the
    /// remaining `y` parity.
    pub fn specialize<F: Field>(&self, a: &F, b: &F) -> (Poly<F>, u8) {
        let (ms, mt) = self.powers_needed();
        let pw = Powers::new(a, b, ms, mt);
        (
            Poly::new(&a.context(), self.x.iter().map(|c| c.eval(&pw)).collect()),
            self.parity,
        )
    }

    /// Value at a point `(s, t, x, y)`.
    pub fn eval_at<F: Field>(&self, s: &F, t: &F, x: &F, y: &F) -> F {
        let (p, parity) = self.specialize(s, t);
        let v = p.eval(x);
        if parity == 1 {
            v * y
        } else {
            v
        }
    }

    /// Common weight of all terms with `wt(x) = 2`, `wt(y) = 3`, `wt(s) = 4`,
    /// `wt(t) = 6`, or `None` if the polynomial is not weighted homogeneous.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut w = None;
        for (k, c) in self.x.iter().enumerate() {
            for ((i, j), _) in c.terms() {
                let tw = 2 * k as u32 + 4 * i + 6 * j + 3 * self.parity as u32;
                if *w.get_or_insert(tw) != tw {
                    return None;
                }
            }
        }
        w
    }
}

impl BiPoly<BigInt> {
    fn div_exact_int(&self, d: i64) -> Option<Self> {
        let d = BigInt::from(d);
        let x = self.x.iter().map(|c| c.div_exact_int(&d)).collect::<Option<Vec<_>>>()?;
        Some(BiPoly::new(x, self.parity))
    }
}

impl BiPoly<Rational> {
    /// Exact division by a polynomial whose leading `x` coefficient is a
    /// nonzero constant. The divisor's parity must match.
    pub fn exact_divide(&self, den: &Self) -> Option<Self> {
        if self.parity != den.parity {
            return None;
        }
        let lc = den.x.last()?.as_constant().filter(|c| !Zero::is_zero(c))?;
        let inv = lc.recip();
        let dd = den.x.len() - 1;
        let mut r = self.x.clone();
        if r.len() <= dd {
            return r.iter().all(|c| c.is_zero()).then(BiPoly::zero);
        }
        let mut q = vec![StPoly::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = std::mem::replace(&mut r[i + dd], StPoly::zero()).scale(&inv);
            for (j, dc) in den.x[..dd].iter().enumerate() {
                r[i + j] = r[i + j].sub(&c.mul(dc));
            }
            q[i] = c;
        }
        r.iter().all(|c| c.is_zero()).then(|| BiPoly::new(q, 0))
    }

    /// Whether the leading `x` coefficient is the constant 1.
    pub fn is_monic(&self) -> bool {
        self.x
            .last()
            .and_then(|c| c.as_constant())
            .is_some_and(|c| One::is_one(&c))
    }
}

fn monomial_text(i: u32, j: u32, k: usize) -> String {
    let mut parts = Vec::new();
    for (var, e) in [("s", i as usize), ("t", j as usize), ("x", k)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{e}")),
        }
    }
    parts.join("*")
}

impl<C: Coef> Display for BiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(String, String)> = Vec::new();
        for (k, c) in self.x.iter().enumerate().rev() {
            let mut monos: Vec<_> = c.terms().collect();
            monos.sort_by(|a, b| b.0.cmp(a.0));
            for ((i, j), coef) in monos {
                terms.push((coef.to_string(), monomial_text(*i, *j, k)));
            }
        }
        let body = render_monomials(&terms);
        match (self.parity, terms.len()) {
            (0, _) => f.write_str(&body),
            (_, 0) => f.write_str("0"),
            (_, 1) if terms[0].1.is_empty() => {
                if body == "1" {
                    f.write_str("y")
                } else if body == "-1" {
                    f.write_str("-y")
                } else {
                    write!(f, "{body}*y")
                }
            }
            _ => write!(f, "y*({body})"),
        }
    }
}

/// Signed sum of `(coefficient, monomial)` pairs.
fn render_monomials(terms: &[(String, String)]) -> String {
    let mut out = String::new();
    for (n, (c, m)) in terms.iter().enumerate() {
        let (neg, mag) = match c.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, c.as_str()),
        };
        let body = match (m.is_empty(), mag) {
            (true, _) => mag.to_string(),
            (false, "1") => m.clone(),
            (false, _) => format!("{mag}*{m}"),
        };
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Operations the `psi_n` recursion needs from its coefficient ring.
trait PsiRing {
    type Elt: Clone;
    fn base(&self, n: i64) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn neg(&self, a: &Self::Elt) -> Self::Elt;
    /// Exact division by `2y`.
    fn half_div_y(&self, a: &Self::Elt) -> Self::Elt;
}

fn symbolic_base(n: i64) -> BiPoly<BigInt> {
    match n {
        0 => BiPoly::zero(),
        1 => BiPoly::from_terms(0, &[(1, 0, 0, 0)]),
        2 => BiPoly::from_terms(1, &[(2, 0, 0, 0)]),
        3 => BiPoly::from_terms(0, &[(3, 0, 0, 4), (6, 1, 0, 2), (12, 0, 1, 1), (-1, 2, 0, 0)]),
        4 => BiPoly::from_terms(
            1,
            &[
                (4, 0, 0, 6),
                (20, 1, 0, 4),
                (80, 0, 1, 3),
                (-20, 2, 0, 2),
                (-16, 1, 1, 1),
                (-4, 3, 0, 0),
                (-32, 0, 2, 0),
            ],
        ),
        _ => unreachable!("base cases are 0..=4"),
    }
}

struct Symbolic;

impl PsiRing for Symbolic {
    type Elt = BiPoly<BigInt>;
    fn base(&self, n: i64) -> Self::Elt {
        symbolic_base(n)
    }
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.mul(b)
    }
    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        a.sub(b)
    }
    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        a.neg()
    }
    fn half_div_y(&self, a: &Self::Elt) -> Self::Elt {
        a.div_y()
            .and_then(|q| q.div_exact_int(2))
            .expect("psi recursion divides exactly by 2y")
    }
}

/// A polynomial in `K[x]` times `y^parity`, on the curve `y^2 = x^3 + Ax + B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityPoly<F: Field> {
    pub poly: Poly<F>,
    pub parity: u8,
}

struct Specialized<F: Field> {
    a: F,
    b: F,
    cubic: Poly<F>,
}

impl<F: Field> Specialized<F> {
    fn new(a: &F, b: &F) -> Self {
        let ctx = a.context();
        let cubic = Poly::new(&ctx, vec![b.clone(), a.clone(), F::zero_in(&ctx), F::one_in(&ctx)]);
        Specialized {
            a: a.clone(),
            b: b.clone(),
            cubic,
        }
    }
}

impl<F: Field> PsiRing for Specialized<F> {
    type Elt = ParityPoly<F>;
    fn base(&self, n: i64) -> Self::Elt {
        let (poly, parity) = symbolic_base(n).specialize(&self.a, &self.b);
        ParityPoly { poly, parity }
    }
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        let mut poly = a.poly.mul(&b.poly);
        let mut parity = a.parity + b.parity;
        if parity == 2 {
            poly = poly.mul(&self.cubic);
            parity = 0;
        }
        ParityPoly { poly, parity }
    }
    fn sub(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt {
        if b.poly.is_zero() {
            return a.clone();
        }
        if a.poly.is_zero() {
            return self.neg(b);
        }
        assert_eq!(a.parity, b.parity, "subtracting terms of different y-parity");
        ParityPoly {
            poly: a.poly.sub(&b.poly),
            parity: a.parity,
        }
    }
    fn neg(&self, a: &Self::Elt) -> Self::Elt {
        ParityPoly {
            poly: a.poly.neg(),
            parity: a.parity,
        }
    }
    fn half_div_y(&self, a: &Self::Elt) -> Self::Elt {
        let ctx = self.a.context();
        let half = F::from_int(&ctx, 2).inv().expect("characteristic zero");
        if a.parity == 1 {
            return ParityPoly {
                poly: a.poly.scale(&half),
                parity: 0,
            };
        }
        let q = a
            .poly
            .exact_divide(&self.cubic)
            .expect("psi recursion divides exactly by y");
        ParityPoly {
            poly: q.scale(&half),
            parity: 1,
        }
    }
}

fn psi_rec<R: PsiRing>(ring: &R, n: i64, memo: &mut HashMap<i64, R::Elt>) -> R::Elt {
    if n < 0 {
        let v = psi_rec(ring, -n, memo);
        return ring.neg(&v);
    }
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let v = if n <= 4 {
        ring.base(n)
    } else if n % 2 == 1 {
        // psi_{2k+1} = psi_{k+2} psi_k^3 - psi_{k-1} psi_{k+1}^3
        let k = (n - 1) / 2;
        let a = psi_rec(ring, k + 2, memo);
        let b = psi_rec(ring, k, memo);
        let c = psi_rec(ring, k - 1, memo);
        let d = psi_rec(ring, k + 1, memo);
        let b3 = ring.mul(&ring.mul(&b, &b), &b);
        let d3 = ring.mul(&ring.mul(&d, &d), &d);
        ring.sub(&ring.mul(&a, &b3), &ring.mul(&c, &d3))
    } else {
        // psi_{2k} = psi_k / 2y * (psi_{k+2} psi_{k-1}^2 - psi_{k-2} psi_{k+1}^2)
        let k = n / 2;
        let pk = psi_rec(ring, k, memo);
        let a = psi_rec(ring, k + 2, memo);
        let b = psi_rec(ring, k - 1, memo);
        let c = psi_rec(ring, k - 2, memo);
        let d = psi_rec(ring, k + 1, memo);
        let bracket = ring.sub(&ring.mul(&a, &ring.mul(&b, &b)), &ring.mul(&c, &ring.mul(&d, &d)));
        ring.half_div_y(&ring.mul(&pk, &bracket))
    };
    memo.insert(n, v.clone());
    v
}

struct Tables {
    psi: Mutex<HashMap<i64, BiPoly<BigInt>>>,
    primitive: Mutex<HashMap<usize, Arc<PrimitiveDivPoly>>>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| Tables {
        psi: Mutex::new(HashMap::new()),
        primitive: Mutex::new(HashMap::new()),
    })
}

/// `psi_n` over `Z[s,t]` in parity form; negative `n` gives `-psi_{-n}`.
pub fn division_poly_int(n: i64) -> BiPoly<BigInt> {
    let mut memo = tables().psi.lock().expect("psi table");
    psi_rec(&Symbolic, n, &mut memo)
}

/// `psi_n` over `Q[s,t]` in parity form.
pub fn division_poly(n: i64) -> BiPoly<Rational> {
    division_poly_int(n).to_rational()
}

/// `(phi_n, omega_n)` with `[n](x, y) = (phi_n / psi_n^2, omega_n / psi_n^3)`.
pub fn mult_formulas(n: i64) -> (BiPoly<Rational>, BiPoly<Rational>) {
    let psi = |k: i64| division_poly_int(k);
    let (pn, pn1, pm1) = (psi(n), psi(n + 1), psi(n - 1));
    let phi = pn.mul(&pn).shift_x().sub(&pn1.mul(&pm1));
    let bracket = psi(n + 2).mul(&pm1.mul(&pm1)).sub(&psi(n - 2).mul(&pn1.mul(&pn1)));
    let omega = bracket
        .div_y()
        .expect("omega divides exactly by y")
        .to_rational()
        .scale(&Rational::new(1.into(), 4.into()));
    (phi.to_rational(), omega)
}

/// `psi_n(A, B)` computed directly in `K[x]`.
pub fn division_poly_at<F: Field>(n: i64, a: &F, b: &F) -> ParityPoly<F> {
    psi_rec(&Specialized::new(a, b), n, &mut HashMap::new())
}

/// `Psi_N` over `Q[s,t]`: monic in `x`, no `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveDivPoly {
    pub n: usize,
    pub poly: BiPoly<Rational>,
    pub degree: usize,
}

impl PrimitiveDivPoly {
    pub fn specialize<F: Field>(&self, a: &F, b: &F) -> Poly<F> {
        self.poly.specialize(a, b).0
    }
}

impl Display for PrimitiveDivPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

pub fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(1/2) N^2 prod_{p | N} (1 - 1/p^2)` for `N >= 3`; 0 and 3 for `N = 1, 2`.
pub fn expected_degree(n: usize) -> usize {
    match n {
        0 | 1 => 0,
        2 => 3,
        _ => {
            let mut num = n * n;
            for p in prime_factors(n) {
                num = num / (p * p) * (p * p - 1);
            }
            num / 2
        }
    }
}

/// The positive- and negative-exponent divisors in the Moebius product.
fn mobius_split(n: usize) -> (Vec<usize>, Vec<usize>) {
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for d in divisors(n) {
        match mobius(n / d) {
            1 => pos.push(d),
            -1 => neg.push(d),
            _ => {}
        }
    }
    (pos, neg)
}

fn assemble_symbolic(n: usize) -> Result<PrimitiveDivPoly> {
    let poly = match n {
        0 => return Err(Error::InvalidArgument("N must be at least 1".into())),
        1 => BiPoly::from_terms(0, &[(1, 0, 0, 0)]),
        2 => BiPoly::<Rational>::cubic(),
        _ => {
            let (pos, neg) = mobius_split(n);
            let product = |ds: &[usize]| {
                ds.iter()
                    .fold(BiPoly::from_terms(0, &[(1, 0, 0, 0)]), |acc: BiPoly<Rational>, &d| {
                        let scaled = division_poly(d as i64).scale(&Rational::new(1.into(), BigInt::from(d)));
                        acc.mul(&scaled)
                    })
            };
            let (num, den) = (product(&pos), product(&neg));
            if num.y_parity() != den.y_parity() {
                return Err(Error::InexactAssembly(n, "y-parity does not cancel"));
            }
            num.exact_divide(&den)
                .ok_or(Error::InexactAssembly(n, "nonzero remainder"))?
        }
    };
    if !poly.is_monic() {
        return Err(Error::InexactAssembly(n, "result is not monic"));
    }
    let degree = poly.x_degree().unwrap_or(0);
    Ok(PrimitiveDivPoly { n, poly, degree })
}

/// `Psi_N` over `Q[s,t]`, built once per process and shared.
pub fn primitive_division_poly(n: usize) -> Result<Arc<PrimitiveDivPoly>> {
    if let Some(p) = tables().primitive.lock().expect("primitive table").get(&n) {
        return Ok(p.clone());
    }
    let p = Arc::new(assemble_symbolic(n)?);
    let mut table = tables().primitive.lock().expect("primitive table");
    Ok(table.entry(n).or_insert(p).clone())
}

/// `Psi_{N,A,B}` computed in `K[x]` without the symbolic table.
pub fn primitive_specialized<F: Field>(n: usize, a: &F, b: &F) -> Result<Poly<F>> {
    let ctx = a.context();
    match n {
        0 => return Err(Error::InvalidArgument("N must be at least 1".into())),
        1 => return Ok(Poly::one(&ctx)),
        2 => return Ok(Specialized::new(a, b).cubic),
        _ => {}
    }
    let ring = Specialized::new(a, b);
    let mut memo = HashMap::new();
    let (pos, neg) = mobius_split(n);
    let mut product = |ds: &[usize]| {
        let one = ParityPoly {
            poly: Poly::one(&ctx),
            parity: 0,
        };
        ds.iter().fold(one, |acc, &d| {
            let psi = psi_rec(&ring, d as i64, &mut memo);
            let inv = F::from_int(&ctx, d as i64).inv().expect("nonzero");
            ring.mul(
                &acc,
                &ParityPoly {
                    poly: psi.poly.scale(&inv),
                    parity: psi.parity,
                },
            )
        })
    };
    let num = product(&pos);
    let den = product(&neg);
    if num.parity != den.parity {
        return Err(Error::InexactAssembly(n, "y-parity does not cancel"));
    }
    let q = num
        .poly
        .exact_divide(&den.poly)
        .map_err(|_| Error::InexactAssembly(n, "nonzero remainder"))?;
    if !q.lc().is_some_and(|c| c.is_one()) {
        return Err(Error::InexactAssembly(n, "result is not monic"));
    }
    Ok(q)
}

/// `Psi_{N,A,B}`: from the shared symbolic table for `N <= 12`, otherwise
/// by the direct recursion in `K[x]`.
pub fn primitive_at<F: Field>(n: usize, a: &F, b: &F) -> Result<Poly<F>> {
    if n <= SYMBOLIC_LIMIT {
        Ok(primitive_division_poly(n)?.specialize(a, b))
    } else {
        primitive_specialized(n, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ratio, QuadField, QuadScalar};
    use crate::polylab::rat_poly;
    use crate::weierstrass::{Curve, Point};

    fn bp(parity: u8, terms: &[(i64, u32, u32, usize)]) -> BiPoly<Rational> {
        BiPoly::from_terms(parity, terms)
    }

    #[test]
    fn base_cases() {
        assert_eq!(division_poly(3).to_string(), "3*x^4 + 6*s*x^2 + 12*t*x - s^2");
        assert_eq!(division_poly(2).to_string(), "2*y");
        assert_eq!(division_poly(1).to_string(), "1");
        assert!(division_poly(0).is_zero());
        assert_eq!(division_poly(-3), division_poly(3).neg());
    }

    #[test]
    fn psi4_divided_by_4y() {
        let psi4 = division_poly(4);
        let four_y = bp(1, &[(4, 0, 0, 0)]);
        let q = psi4.exact_divide(&four_y).unwrap();
        assert_eq!(
            q.to_string(),
            "x^6 + 5*s*x^4 + 20*t*x^3 - 5*s^2*x^2 - 4*s*t*x - s^3 - 8*t^2"
        );
    }

    #[test]
    fn phi_and_omega_small() {
        let (phi1, omega1) = mult_formulas(1);
        assert_eq!(phi1.to_string(), "x");
        assert_eq!(omega1.to_string(), "y");
        let (phi2, _) = mult_formulas(2);
        assert_eq!(phi2, bp(0, &[(1, 0, 0, 4), (-2, 1, 0, 2), (-8, 0, 1, 1), (1, 2, 0, 0)]));
    }

    #[test]
    fn primitive_small_cases() {
        assert_eq!(primitive_division_poly(1).unwrap().to_string(), "1");
        assert_eq!(primitive_division_poly(2).unwrap().to_string(), "x^3 + s*x + t");
        assert_eq!(
            primitive_division_poly(3).unwrap().to_string(),
            "x^4 + 2*s*x^2 + 4*t*x - 1/3*s^2"
        );
        assert_eq!(
            primitive_division_poly(4).unwrap().to_string(),
            "x^6 + 5*s*x^4 + 20*t*x^3 - 5*s^2*x^2 - 4*s*t*x - s^3 - 8*t^2"
        );
        assert_eq!(primitive_division_poly(12).unwrap().degree, 48);
    }

    #[test]
    fn specializations() {
        let psi3 = primitive_division_poly(3).unwrap();
        assert_eq!(psi3.specialize(&rat(0), &rat(1)), rat_poly(&[0, 4, 0, 0, 1]));
        let psi2 = primitive_division_poly(2).unwrap();
        assert_eq!(psi2.specialize(&rat(1), &rat(0)), rat_poly(&[0, 1, 0, 1]));
        let psi4 = primitive_division_poly(4).unwrap();
        assert_eq!(psi4.specialize(&rat(1), &rat(0)), rat_poly(&[-1, 0, -5, 0, 5, 0, 1]));
        assert_eq!(psi4.specialize(&rat(0), &rat(1)), rat_poly(&[-8, 0, 0, 20, 0, 0, 1]));
    }

    #[test]
    fn degree_law() {
        assert_eq!(expected_degree(12), 48);
        for n in 3..=SYMBOLIC_LIMIT {
            assert_eq!(
                primitive_division_poly(n).unwrap().degree,
                expected_degree(n),
                "N = {n}"
            );
        }
        for n in 13..=18 {
            let p = primitive_specialized(n, &rat(2), &rat(-3)).unwrap();
            assert_eq!(p.degree(), Some(expected_degree(n)), "N = {n}");
        }
    }

    #[test]
    fn weighted_homogeneity_of_symbolic_polys() {
        for n in 1..=10 {
            let w = division_poly(n).homogeneous_weight().unwrap();
            assert_eq!(w as i64, n * n - 1);
        }
        for n in 3..=10 {
            let p = primitive_division_poly(n).unwrap();
            assert_eq!(p.poly.homogeneous_weight(), Some(2 * p.degree as u32));
        }
    }

    #[test]
    fn both_paths_agree() {
        for (a, b) in [
            (rat(1), rat(1)),
            (ratio(-2, 3), ratio(5, 7)),
            (rat(0), rat(3)),
            (rat(-4), rat(0)),
        ] {
            for n in 1..=10 {
                assert_eq!(
                    primitive_specialized(n, &a, &b).unwrap(),
                    primitive_division_poly(n).unwrap().specialize(&a, &b),
                    "N = {n}"
                );
            }
        }
        let k = QuadField::new(-3).unwrap();
        let a = k.element(ratio(1, 2), rat(1));
        let b = QuadScalar::from_int(&k, 2);
        for n in 3..=8 {
            assert_eq!(
                primitive_specialized(n, &a, &b).unwrap(),
                primitive_division_poly(n).unwrap().specialize(&a, &b)
            );
        }
    }

    #[test]
    fn psi_values_match_group_law() {
        // x([n]P) psi_n(P)^2 = phi_n(P) and the full multiplication formula.
        let e = Curve::new(rat(-43), rat(166)).unwrap();
        let p = Point::affine(rat(3), rat(8));
        let (x, y) = (rat(3), rat(8));
        for n in 2..=6i64 {
            let psi = division_poly(n).eval_at(&rat(-43), &rat(166), &x, &y);
            let (phi, omega) = mult_formulas(n);
            let phi = phi.eval_at(&rat(-43), &rat(166), &x, &y);
            let omega = omega.eval_at(&rat(-43), &rat(166), &x, &y);
            let np = e.scalar_mul(n, &p).unwrap();
            if Field::is_zero(&psi) {
                assert!(np.is_infinity());
                continue;
            }
            assert_eq!(np.x().unwrap().clone() * &psi.square(), phi);
            assert_eq!(np.y().unwrap().clone() * &psi.pow(3), omega);
        }
        assert!(Field::is_zero(&division_poly(7).eval_at(&rat(-43), &rat(166), &x, &y)));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i32> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }
}
