//! The two nonhomogeneous binomial recursions over GF(q).
//!
//! NLR1: Σ_{j=0..k} C(k,j)·u_{i+k−j}        = c·(−1)^i·i, with u_i = p(i)·(−1)^i
//! NLR2: Σ_{j=0..k} (−1)^j C(k,j)·u_{i+k−j} = c·i,        with u_i = p(i)
//!
//! where deg p ≤ k + 1 in both cases.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gf::{Gfp, Modulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Nlr1,
    Nlr2,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Nlr1 => "NLR1",
            Variant::Nlr2 => "NLR2",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "NLR1" => Ok(Variant::Nlr1),
            "NLR2" => Ok(Variant::Nlr2),
            _ => Err(Error::param(format!("unknown recursion {s:?}"))),
        }
    }
}

pub fn binomial(k: usize, j: usize) -> Result<BigUint> {
    if j > k {
        return Err(Error::param(format!("binomial index {j} exceeds {k}")));
    }
    let j = j.min(k - j);
    let mut acc = BigUint::one();
    for t in 0..j {
        acc = acc * (k - t) / (t + 1);
    }
    Ok(acc)
}

/// q > C(k, j) for every j.
pub fn check_binomial_bound(k: usize, q: &Modulus) -> Result<()> {
    // C(k, j) grows with j up to k/2; stop once it reaches q.
    let mut max = BigUint::one();
    for t in 0..k / 2 {
        if q.value() <= &max {
            break;
        }
        max = max * (k - t) / (t + 1);
    }
    if q.value() <= &max {
        return Err(Error::ConstraintViolation(format!(
            "q = {} does not exceed C({k}, {})",
            q.value(),
            k / 2
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NlrSpec {
    variant: Variant,
    k: usize,
    c: Gfp,
    init: Vec<Gfp>,
    /// w_j for j = 0..=k: C(k,j), or (−1)^j C(k,j) for NLR2.
    weights: Vec<Gfp>,
}

impl NlrSpec {
    pub fn new(variant: Variant, k: usize, c: Gfp, init: Vec<Gfp>) -> Result<NlrSpec> {
        if k == 0 {
            return Err(Error::param("order k must be at least 1"));
        }
        if c.is_zero() {
            return Err(Error::param("recursion constant c must be nonzero"));
        }
        if init.len() != k {
            return Err(Error::param(format!(
                "expected {k} initial values, got {}",
                init.len()
            )));
        }
        let q = c.modulus().clone();
        if init.iter().any(|v| v.modulus() != &q) {
            return Err(Error::ModulusMismatch("initial values"));
        }
        check_binomial_bound(k, &q)?;
        let weights = recurrence_weights(variant, k, &q)?;
        Ok(NlrSpec {
            variant,
            k,
            c,
            init,
            weights,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> &Gfp {
        &self.c
    }

    pub fn init(&self) -> &[Gfp] {
        &self.init
    }

    pub fn modulus(&self) -> &Modulus {
        self.c.modulus()
    }

    /// Right-hand side of the instance starting at index i.
    fn rhs(&self, i: u64) -> Gfp {
        rhs(self.variant, &self.c, i)
    }
}

pub(crate) fn recurrence_weights(variant: Variant, k: usize, q: &Modulus) -> Result<Vec<Gfp>> {
    (0..=k)
        .map(|j| {
            let b = Gfp::new(binomial(k, j)?, q);
            Ok(match variant {
                Variant::Nlr2 if j % 2 == 1 => -b,
                _ => b,
            })
        })
        .collect()
}

pub(crate) fn rhs(variant: Variant, c: &Gfp, i: u64) -> Gfp {
    let q = c.modulus();
    let t = c * &Gfp::new(BigUint::from(i), q);
    match variant {
        Variant::Nlr1 if i % 2 == 1 => -t,
        _ => t,
    }
}

/// Next term u_{i+k} from the k preceding terms u_i..u_{i+k−1}.
fn step(weights: &[Gfp], rhs: Gfp, window: &[Gfp]) -> Gfp {
    let k = window.len();
    let mut acc = rhs;
    for j in 1..=k {
        acc = &acc - &(&weights[j] * &window[k - j]);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshadowSequence {
    spec: NlrSpec,
    terms: Vec<Gfp>,
}

impl SubshadowSequence {
    pub fn spec(&self) -> &NlrSpec {
        &self.spec
    }

    pub fn terms(&self) -> &[Gfp] {
        &self.terms
    }

    pub fn get(&self, i: u64) -> Option<&Gfp> {
        usize::try_from(i).ok().and_then(|i| self.terms.get(i))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Extends the sequence so that index `upto` exists.
    pub fn extend_to(&mut self, upto: u64) {
        let k = self.spec.k;
        while (self.terms.len() as u64) <= upto {
            let n = self.terms.len();
            let i = (n - k) as u64;
            let next = step(&self.spec.weights, self.spec.rhs(i), &self.terms[n - k..]);
            self.terms.push(next);
        }
    }

    /// Whether the instance Σ_j w_j·u_{i+k−j} = rhs(i) holds.
    pub fn window_holds(&self, i: usize) -> bool {
        window_holds(&self.spec, i as u64, &self.terms[i..=i + self.spec.k])
    }
}

/// Checks one recurrence instance for the k+1 terms u_i..u_{i+k}.
pub fn window_holds(spec: &NlrSpec, i: u64, terms: &[Gfp]) -> bool {
    let k = spec.k;
    if terms.len() != k + 1 {
        return false;
    }
    let mut acc = Gfp::zero(spec.modulus());
    for j in 0..=k {
        acc = &acc + &(&spec.weights[j] * &terms[k - j]);
    }
    acc == spec.rhs(i)
}

/// u_0..u_upto.
pub fn generate(spec: &NlrSpec, upto: u64) -> Result<SubshadowSequence> {
    if upto + 1 < spec.k as u64 {
        return Err(Error::param("sequence shorter than its initial window"));
    }
    let mut seq = SubshadowSequence {
        spec: spec.clone(),
        terms: spec.init.clone(),
    };
    seq.extend_to(upto);
    Ok(seq)
}

/// Terms s..=upto of the sequence whose terms s..s+k−1 are `window`.
pub fn extend_consecutive(
    variant: Variant,
    window: &[Gfp],
    s: u64,
    c: &Gfp,
    k: usize,
    upto: u64,
) -> Result<Vec<Gfp>> {
    if window.len() != k || k == 0 {
        return Err(Error::param(format!(
            "consecutive window must hold exactly {k} terms"
        )));
    }
    if upto + 1 < s + k as u64 {
        return Err(Error::param("target index precedes the window end"));
    }
    let q = c.modulus();
    check_binomial_bound(k, q)?;
    let weights = recurrence_weights(variant, k, q)?;
    let mut out = window.to_vec();
    while s + (out.len() as u64) <= upto {
        let n = out.len();
        let i = s + (n - k) as u64;
        let next = step(&weights, rhs(variant, c, i), &out[n - k..]);
        out.push(next);
    }
    Ok(out)
}

/// A_0..A_{k+1}, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredPolynomial {
    coeffs: Vec<Gfp>,
}

impl RecoveredPolynomial {
    pub fn new(coeffs: Vec<Gfp>) -> Self {
        RecoveredPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Gfp] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Gfp) -> Gfp {
        let mut acc = Gfp::zero(x.modulus());
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Lagrange,
    Gaussian,
}

/// The degree ≤ k+1 polynomial through k+2 sequence points, solved by
/// Lagrange interpolation.
pub fn recover_polynomial(
    variant: Variant,
    points: &[(u64, Gfp)],
    k: usize,
    q: &Modulus,
) -> Result<RecoveredPolynomial> {
    recover_polynomial_with(Solver::Lagrange, variant, points, k, q)
}

pub fn recover_polynomial_with(
    solver: Solver,
    variant: Variant,
    points: &[(u64, Gfp)],
    k: usize,
    q: &Modulus,
) -> Result<RecoveredPolynomial> {
    let needed = k + 2;
    if points.len() < needed {
        return Err(Error::InsufficientShares {
            needed,
            got: points.len(),
        });
    }
    if points.len() > needed {
        return Err(Error::param(format!(
            "expected exactly {needed} points, got {}",
            points.len()
        )));
    }
    let mut mapped: Vec<(Gfp, Gfp)> = Vec::with_capacity(needed);
    for (x, u) in points {
        if u.modulus() != q {
            return Err(Error::ModulusMismatch("recovery point"));
        }
        let xq = Gfp::new(BigUint::from(*x), q);
        if mapped.iter().any(|(seen, _)| *seen == xq) {
            return Err(Error::param(format!("duplicate abscissa {x}")));
        }
        let y = match variant {
            Variant::Nlr1 if x % 2 == 1 => -u,
            _ => u.clone(),
        };
        mapped.push((xq, y));
    }
    let coeffs = match solver {
        Solver::Lagrange => lagrange(&mapped, q)?,
        Solver::Gaussian => gaussian(&mapped, q)?,
    };
    Ok(RecoveredPolynomial { coeffs })
}

fn lagrange(points: &[(Gfp, Gfp)], q: &Modulus) -> Result<Vec<Gfp>> {
    let n = points.len();
    let mut out = vec![Gfp::zero(q); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Π_{j≠i} (X − x_j), lowest degree first.
        let mut basis = vec![Gfp::one(q)];
        let mut denom = Gfp::one(q);
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Gfp::zero(q); basis.len() + 1];
            for (d, b) in basis.iter().enumerate() {
                next[d + 1] = &next[d + 1] + b;
                next[d] = &next[d] - &(b * xj);
            }
            basis = next;
            denom = &denom * &(xi - xj);
        }
        let scale = yi * &denom.inv()?;
        for (d, b) in basis.iter().enumerate() {
            out[d] = &out[d] + &(b * &scale);
        }
    }
    Ok(out)
}

/// Solves the Vandermonde system by Gauss-Jordan elimination.
fn gaussian(points: &[(Gfp, Gfp)], q: &Modulus) -> Result<Vec<Gfp>> {
    let n = points.len();
    let mut rows: Vec<Vec<Gfp>> = points
        .iter()
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut pw = Gfp::one(q);
            for _ in 0..n {
                row.push(pw.clone());
                pw = &pw * x;
            }
            row.push(y.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| Error::param("singular system"))?;
        rows.swap(col, pivot);
        let inv = rows[col][col].inv()?;
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let f = rows[r][col].clone();
            let pivot = rows[col].clone();
            for (v, pv) in rows[r].iter_mut().zip(&pivot).skip(col) {
                *v = &*v - &(pv * &f);
            }
        }
    }
    Ok(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// u_i from the closed form: p(i)·(−1)^i for NLR1, p(i) for NLR2.
pub fn eval_closed_form(variant: Variant, poly: &RecoveredPolynomial, i: u64, q: &Modulus) -> Gfp {
    let v = poly.eval(&Gfp::new(BigUint::from(i), q));
    match variant {
        Variant::Nlr1 if i % 2 == 1 => -v,
        _ => v,
    }
}
