//! Closed forms for products of solutions of `W_m = p·W_{m−1} − q·W_{m−2}`.
//!
//! With `u_m = W_m(0, 1; p, q)` and the u-binomial
//! `(m|k)_u = u_m u_{m−1} ⋯ u_{m−k+1} / (u_k ⋯ u_1)`, a product of `n`
//! solutions satisfies `Σ_{i=0}^{n+1} (−1)^i q^{i(i−1)/2} (n+1|i)_u X(m−i) = 0`
//! whenever `u_1 ⋯ u_{n+1} ≠ 0`. Its characteristic polynomial is
//! `ψ_n(x) = Π_{j=0}^{n} (x − α^j β^{n−j})`, with `α, β` the roots of
//! `x² − px + q`.

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::algebra::rational::{pow, pow_signed};
use crate::algebra::{rat, DensePolynomial, QuadraticContext, QuadraticRingElement, Rational};
use crate::error::{Error, Result};
use crate::relation::RecurrenceRelation;
use crate::sequences::{SecondOrderSpec, SequenceInstance};

const JARDEN_HINT: &str = "use the degenerate relation X(m) = u_{k+1}^n X(m-k)";

/// For rational `p, q` the ratio `α/β` can only be a root of unity of order
/// 1, 2, 3, 4 or 6, so `u` either vanishes somewhere in `1..=6` or never.
const ZERO_SEARCH_FLOOR: i64 = 6;

/// `q^{i(i−1)/2}`.
pub fn q_triangular(q: &Rational, i: u32) -> Rational {
    pow(q, i * i.saturating_sub(1) / 2)
}

/// Memoized u-binomial coefficients for one `(p, q)`.
#[derive(Debug)]
pub struct UBinomialTable {
    so: SecondOrderSpec,
    u: SequenceInstance,
    cache: Mutex<HashMap<(i64, i64), Rational>>,
}

impl UBinomialTable {
    pub fn new(so: &SecondOrderSpec) -> Self {
        Self { so: so.clone(), u: so.fundamental(), cache: Mutex::new(HashMap::new()) }
    }

    pub fn spec(&self) -> &SecondOrderSpec {
        &self.so
    }

    pub fn u(&self, m: i64) -> Result<Rational> {
        self.u.eval(m)
    }

    /// Smallest `k` in `1..=bound` with `u_k = 0`.
    pub fn first_zero(&self, bound: i64) -> Result<Option<i64>> {
        for k in 1..=bound {
            if self.u(k)?.is_zero() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Errors with the smallest zero index if any of `u_1..u_upto` vanishes.
    pub fn require_nonzero(&self, upto: i64) -> Result<()> {
        match self.first_zero(upto)? {
            Some(k) => Err(Error::ZeroFundamental { index: k, hint: JARDEN_HINT }),
            None => Ok(()),
        }
    }

    /// `(m|k)_u` for `0 ≤ k ≤ m`.
    pub fn get(&self, m: i64, k: i64) -> Result<Rational> {
        if k < 0 || k > m {
            return Err(Error::Dimension(format!("u-binomial needs 0 <= k <= m, got ({m}|{k})")));
        }
        if let Some(v) = self.cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(m, k)) {
            return Ok(v.clone());
        }
        let mut num = Rational::one();
        let mut den = Rational::one();
        for j in 0..k {
            num *= self.u(m - j)?;
            den *= self.u(j + 1)?;
        }
        if den.is_zero() {
            let idx = self.first_zero(k)?.unwrap_or(k);
            return Err(Error::ZeroFundamental { index: idx, hint: "u-binomial denominator vanishes" });
        }
        let v = num / den;
        self.cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert((m, k), v.clone());
        Ok(v)
    }
}

pub fn u_binomial(so: &SecondOrderSpec, m: i64, k: i64) -> Result<Rational> {
    UBinomialTable::new(so).get(m, k)
}

/// `(−1)^i q^{i(i−1)/2} (v|i)_u` for `i = 0..=v`.
fn signed_u_binomials(table: &UBinomialTable, v: i64) -> Result<Vec<Rational>> {
    let q = &table.spec().q;
    (0..=v)
        .map(|i| {
            let c = q_triangular(q, i as u32) * table.get(v, i)?;
            Ok(if i % 2 == 1 { -c } else { c })
        })
        .collect()
}

/// The order-`(n+1)` relation for products of `n` solutions; needs `u_1 ⋯ u_{n+1} ≠ 0`.
pub fn jarden_recurrence(so: &SecondOrderSpec, n: usize) -> Result<RecurrenceRelation> {
    let table = UBinomialTable::new(so);
    table.require_nonzero(n as i64 + 1)?;
    RecurrenceRelation::new(signed_u_binomials(&table, n as i64 + 1)?)
}

/// `X(m) − u_{k+1}^n·X(m−k) = 0` for the smallest `k ≥ 1` with `u_k = 0`.
///
/// The search runs over `1..=max(n+1, 6)`, which finds every zero of `u` for
/// rational `p, q`.
pub fn degenerate_recurrence(so: &SecondOrderSpec, n: usize) -> Result<RecurrenceRelation> {
    let table = UBinomialTable::new(so);
    let bound = (n as i64 + 1).max(ZERO_SEARCH_FLOOR);
    let k = table
        .first_zero(bound)?
        .ok_or(Error::NoDegeneracy { searched: bound })?;
    let mut coeffs = vec![Rational::zero(); k as usize + 1];
    coeffs[0] = Rational::one();
    coeffs[k as usize] = -pow(&table.u(k + 1)?, n as u32);
    RecurrenceRelation::new(coeffs)
}

/// `Σ_{i=0}^{v} (−1)^i q^{i(i−1)/2} (v|i)_u x^i`, literal ascending coefficients.
pub fn galois_polynomial(so: &SecondOrderSpec, v: usize) -> Result<DensePolynomial> {
    let table = UBinomialTable::new(so);
    table.require_nonzero(v as i64)?;
    Ok(DensePolynomial::new(signed_u_binomials(&table, v as i64)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCharPoly {
    pub n: usize,
    pub so: SecondOrderSpec,
    /// Monic, degree `n + 1`.
    pub poly: DensePolynomial,
}

fn quad_poly_mul(a: &[QuadraticRingElement], b: &[QuadraticRingElement]) -> Result<Vec<QuadraticRingElement>> {
    let ctx = a[0].context();
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y)?)?;
        }
    }
    Ok(out)
}

/// Expands `Π_{j=0}^{n} (x − α^j β^{n−j})` in `Q(α)[x]`; every coefficient
/// must come out rational.
pub fn product_char_poly(so: &SecondOrderSpec, n: usize) -> Result<ProductCharPoly> {
    if so.q.is_zero() {
        return Err(Error::InvalidSpec("product characteristic polynomial needs q != 0".into()));
    }
    let ctx = QuadraticContext::new(so.p.clone(), so.q.clone());
    let (alpha, beta) = (ctx.alpha(), ctx.beta());
    let mut acc = vec![ctx.one()];
    for j in 0..=n as u64 {
        let root = alpha.pow(j).mul(&beta.pow(n as u64 - j))?;
        acc = quad_poly_mul(&acc, &[root.neg(), ctx.one()])?;
    }
    let coeffs = acc
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            if c.is_rational() {
                Ok(c.c0)
            } else {
                Err(Error::Consistency(format!(
                    "coefficient of x^{i} has nonzero alpha-component {}",
                    c.c1
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductCharPoly { n, so: so.clone(), poly: DensePolynomial::new(coeffs) })
}

/// `(x² − V_n x + q^n, ψ_n / (x² − V_n x + q^n))`; the quadratic carries the
/// roots `α^n` and `β^n`.
pub fn factor_extremal_quadratic(
    so: &SecondOrderSpec,
    n: usize,
) -> Result<(DensePolynomial, DensePolynomial)> {
    if n == 0 {
        return Err(Error::InvalidSpec("extremal factor needs n >= 1".into()));
    }
    let psi = product_char_poly(so, n)?.poly;
    let v_n = so.lucas().eval(n as i64)?;
    let quad = DensePolynomial::new(vec![pow(&so.q, n as u32), -v_n, Rational::one()]);
    let cofactor = psi.div_exact(&quad)?;
    Ok((quad, cofactor))
}

/// Checks `ψ_n(x) = (x² − V_n x + q^n) · q^{n−1} ψ_{n−2}(x/q)` exactly.
pub fn verify_psi_recursion(so: &SecondOrderSpec, n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidSpec("recursion needs n >= 2".into()));
    }
    let psi = product_char_poly(so, n)?.poly;
    let inner = product_char_poly(so, n - 2)?.poly.scale_arg(&so.q)?;
    let v_n = so.lucas().eval(n as i64)?;
    let quad = DensePolynomial::new(vec![pow(&so.q, n as u32), -v_n, Rational::one()]);
    Ok(quad.mul(&inner) == psi)
}

/// One row of the discriminant identity `V_n² − 4q^n = (p² − 4q)·u_n²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityResidual {
    pub n: i64,
    /// `V_n² − D·u_n² − 4q^n` with `D = p² − 4q`.
    pub residual: Rational,
    /// Non-negative rational `A_n` with `V_n² − 4q^n = D·A_n²`, found by an
    /// exact square root; `None` when `D = 0` or the quotient is not a square.
    pub witness: Option<Rational>,
    /// Whether the witness equals `|u_n|`.
    pub witness_is_u: bool,
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer().sqrt(), x.denom().sqrt());
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

pub fn discriminant_identity_residuals(
    so: &SecondOrderSpec,
    range: RangeInclusive<i64>,
) -> Result<Vec<IdentityResidual>> {
    let (u, v) = (so.fundamental(), so.lucas());
    let disc = &so.p * &so.p - rat(4) * &so.q;
    range
        .map(|n| {
            let (un, vn) = (u.eval(n)?, v.eval(n)?);
            let qn = pow_signed(&so.q, n)
                .ok_or_else(|| Error::InvalidSpec("negative index needs q != 0".into()))?;
            let lhs = &vn * &vn - rat(4) * qn;
            let residual = &lhs - &disc * &un * &un;
            let witness = if disc.is_zero() { None } else { rational_sqrt(&(&lhs / &disc)) };
            let witness_is_u = witness.as_ref().is_some_and(|w| *w == un.abs());
            Ok(IdentityResidual { n, residual, witness, witness_is_u })
        })
        .collect()
}

/// `L_n² − 5F_n² − 4(−1)^n` per `n`, plus the square root `A_n` of
/// `(L_n² − 4(−1)^n)/5`, which should be `F_n`.
pub fn fib_lucas_identity_check(range: RangeInclusive<i64>) -> Vec<IdentityResidual> {
    let fib = SecondOrderSpec::from_ints(1, -1).expect("valid");
    discriminant_identity_residuals(&fib, range).expect("q = -1 is invertible")
}
