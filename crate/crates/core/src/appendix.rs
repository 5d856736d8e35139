//! Auxiliary matrices behind the second-order closed form, and the exact
//! determinant and similarity identities they satisfy.
//!
//! Rows of `A₁` are the monomials `(u_{i+1}^{n−1}, u_{i+1}^{n−2}u_i, …, u_i^{n−1})`.
//! Right-multiplying by `Q_n` (columns: coefficients of `(px − qy)^{n−j}`)
//! advances every index by one, which drives all of the identities here.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::rational::pow;
use crate::algebra::{Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::product::binomial;
use crate::second_order::{galois_polynomial, q_triangular, UBinomialTable};
use crate::sequences::{SecondOrderSpec, SequenceInstance};

/// Parameters shared by the `A`, `A₁`, `B`, `C` constructions.
#[derive(Clone, Debug)]
pub struct AppendixContext {
    pub n: usize,
    pub so: SecondOrderSpec,
    /// `(W_0, W_1)` of the solution used in the first column of `C`.
    pub w: Option<(Rational, Rational)>,
    pub r: i64,
    u: SequenceInstance,
}

impl AppendixContext {
    /// Requires `n ≥ 1`, `q ≠ 0` and `u_1 ⋯ u_{n+1} ≠ 0`.
    pub fn new(n: usize, so: &SecondOrderSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        if so.q.is_zero() {
            return Err(Error::InvalidSpec("appendix identities need q != 0".into()));
        }
        UBinomialTable::new(so).require_nonzero(n as i64 + 1)?;
        Ok(Self { n, so: so.clone(), w: None, r: 0, u: so.fundamental() })
    }

    pub fn with_w(mut self, a: Rational, b: Rational, r: i64) -> Self {
        self.w = Some((a, b));
        self.r = r;
        self
    }

    pub fn u(&self, m: i64) -> Rational {
        self.u.eval(m).expect("q != 0, so u extends in both directions")
    }

    /// `σ(k) = Π_{i=2}^{k+1} u_i`.
    pub fn sigma(&self, k: usize) -> Rational {
        (2..=k as i64 + 1).map(|i| self.u(i)).product()
    }

    /// `τ(k) = q^{k(k−1)/2}`.
    pub fn tau(&self, k: usize) -> Rational {
        q_triangular(&self.so.q, k as u32)
    }

    /// `u_{−m} = −q^{−m}·u_m`, without backward iteration.
    fn u_reflected(&self, m: i64) -> Rational {
        -self.u(m) / pow(&self.so.q, m as u32)
    }
}

/// Monomial rows at offset `shift`: entry `(i, j)` (1-based) is
/// `u_{i+1+shift}^{n−j} · u_{i+shift}^{j−1}`.
fn monomial_rows(u: &SequenceInstance, n: usize, shift: i64) -> Result<RationalMatrix> {
    RationalMatrix::try_from_fn(n, n, |i, j| {
        let row = i as i64 + 1 + shift;
        Ok(pow(&u.eval(row + 1)?, (n - 1 - j) as u32) * pow(&u.eval(row)?, j as u32))
    })
}

/// `A`: entry `(i, j)` is `u_{i+1}^{n+1−j} u_i^{j−1}`.
pub fn build_a(ctx: &AppendixContext) -> RationalMatrix {
    let n = ctx.n;
    RationalMatrix::from_fn(n, n, |i, j| {
        let i = i as i64 + 1;
        pow(&ctx.u(i + 1), (n - j) as u32) * pow(&ctx.u(i), j as u32)
    })
}

/// `A₁`: `A` with the common factor `u_{i+1}` removed from row `i`.
pub fn build_a1(ctx: &AppendixContext) -> RationalMatrix {
    monomial_rows(&ctx.u, ctx.n, 0).expect("forward indices")
}

/// `B`: first column `u_i^n`, remaining columns as in `A`.
pub fn build_b(ctx: &AppendixContext) -> RationalMatrix {
    let a = build_a(ctx);
    RationalMatrix::from_fn(ctx.n, ctx.n, |i, j| {
        if j == 0 {
            pow(&ctx.u(i as i64 + 1), ctx.n as u32)
        } else {
            a.get(i, j).clone()
        }
    })
}

/// `C`: first column `W_{r+1+i}^n`, remaining columns as in `A`.
pub fn build_c(ctx: &AppendixContext) -> Result<RationalMatrix> {
    let (a0, b0) = ctx
        .w
        .clone()
        .ok_or_else(|| Error::InvalidSpec("matrix C needs a W instance".into()))?;
    let w = ctx.so.sequence(a0, b0);
    let a = build_a(ctx);
    RationalMatrix::try_from_fn(ctx.n, ctx.n, |i, j| {
        if j == 0 {
            Ok(pow(&w.eval(ctx.r + 2 + i as i64)?, ctx.n as u32))
        } else {
            Ok(a.get(i, j).clone())
        }
    })
}

/// `Q_v`: column `j` (1-based) holds the coefficients of `(px − qy)^{v−j}`,
/// row `i` (0-based) the coefficient of `x^{v−j−i} y^i`.
pub fn build_q(v: usize, so: &SecondOrderSpec) -> RationalMatrix {
    let neg_q = -&so.q;
    RationalMatrix::from_fn(v, v, |i, j| {
        let e = v - 1 - j;
        if i > e {
            return Rational::zero();
        }
        Rational::from_integer(binomial(e as u64, i as u64).into())
            * pow(&so.p, (e - i) as u32)
            * pow(&neg_q, i as u32)
    })
}

/// Companion matrix with the same characteristic polynomial as `Q_v`:
/// ones on the superdiagonal and bottom row `(−a_v, −a_{v−1}, …, −a_1)`,
/// where `a_i` are the coefficients of the order-`v` u-binomial polynomial.
/// This sign layout is the one for which `E·A₁ = A₁·Q_v` holds.
pub fn build_e(v: usize, so: &SecondOrderSpec) -> Result<RationalMatrix> {
    let f = galois_polynomial(so, v)?;
    Ok(RationalMatrix::from_fn(v, v, |i, j| {
        if i + 1 < v {
            if j == i + 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        } else {
            -f.coeff(v - j)
        }
    }))
}

/// `det A = σ(n)·det A₁`.
pub fn check_a_row_factor(ctx: &AppendixContext) -> Result<bool> {
    Ok(build_a(ctx).det()? == ctx.sigma(ctx.n) * build_a1(ctx).det()?)
}

/// `det A₁ = τ(n)τ(n−1)⋯τ(2) · σ(n−2)σ(n−3)⋯σ(1)`, and it is nonzero.
pub fn check_a1_closed_form(ctx: &AppendixContext) -> Result<bool> {
    let n = ctx.n;
    let taus: Rational = (2..=n).map(|k| ctx.tau(k)).product();
    let sigmas: Rational = (1..n.saturating_sub(1)).map(|k| ctx.sigma(k)).product();
    let d = build_a1(ctx).det()?;
    Ok(!d.is_zero() && d == taus * sigmas)
}

/// `A₁·Q_n` and `A₁·Q_n^{−i}` (`1 ≤ i ≤ n`) are `A₁` with indices shifted by
/// `+1` and `−i`, and row `i` of `A₁·Q_n^{−i}` is `(1, 0, …, 0)`.
pub fn check_shift(ctx: &AppendixContext) -> Result<bool> {
    let n = ctx.n;
    let a1 = build_a1(ctx);
    let q = build_q(n, &ctx.so);
    if a1.mul(&q)? != monomial_rows(&ctx.u, n, 1)? {
        return Ok(false);
    }
    let q_inv = q.inverse()?;
    let mut acc = a1;
    let mut unit = vec![Rational::zero(); n];
    unit[0] = Rational::one();
    for i in 1..=n {
        acc = acc.mul(&q_inv)?;
        if acc != monomial_rows(&ctx.u, n, -(i as i64))? || acc.row(i - 1) != unit.as_slice() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `det B = (−1)^{n−1} σ(n−1) det A₁`.
pub fn check_b_det(ctx: &AppendixContext) -> Result<bool> {
    let sign = if ctx.n % 2 == 1 { Rational::one() } else { -Rational::one() };
    Ok(build_b(ctx).det()? == sign * ctx.sigma(ctx.n - 1) * build_a1(ctx).det()?)
}

/// The first-column cofactors of `C` in closed form:
///
/// ```text
/// C_i = W_{r+i+1}^n σ(n)σ(n−1) det A₁ (det Q_{n−1})^i
///       / (u_{i+1} u_i (u_{1−i}⋯u_{−1}) (u_1⋯u_{n−i}) (det Q_n)^i)
/// ```
pub fn c_cofactors(ctx: &AppendixContext) -> Result<Vec<Rational>> {
    let n = ctx.n;
    let (a0, b0) = ctx
        .w
        .clone()
        .ok_or_else(|| Error::InvalidSpec("matrix C needs a W instance".into()))?;
    let w = ctx.so.sequence(a0, b0);
    let det_a1 = build_a1(ctx).det()?;
    let det_qn = build_q(n, &ctx.so).det()?;
    let det_qn1 = build_q(n - 1, &ctx.so).det()?;
    let common = ctx.sigma(n) * ctx.sigma(n - 1) * det_a1;
    (1..=n)
        .map(|i| {
            let ii = i as i64;
            let neg: Rational = (1..ii).map(|m| ctx.u_reflected(m)).product();
            let pos: Rational = (1..=(n - i) as i64).map(|m| ctx.u(m)).product();
            let num = pow(&w.eval(ctx.r + ii + 1)?, n as u32) * &common * pow(&det_qn1, i as u32);
            let den = ctx.u(ii + 1) * ctx.u(ii) * neg * pos * pow(&det_qn, i as u32);
            if den.is_zero() {
                return Err(Error::Consistency(format!("cofactor {i} has a zero denominator")));
            }
            Ok(num / den)
        })
        .collect()
}

/// `det C` by elimination equals the sum of the closed-form cofactors.
pub fn check_c_cofactors(ctx: &AppendixContext) -> Result<bool> {
    let sum: Rational = c_cofactors(ctx)?.into_iter().sum();
    Ok(build_c(ctx)?.det()? == sum)
}

/// `E·A₁ = A₁·Q_v` with `A₁` built at `n = v`.
pub fn check_companion_similarity(v: usize, so: &SecondOrderSpec) -> Result<bool> {
    let a1 = monomial_rows(&so.fundamental(), v, 0)?;
    Ok(build_e(v, so)?.mul(&a1)? == a1.mul(&build_q(v, so))?)
}

/// `det(xI − Q_v)` equals the reciprocal of the order-`v` u-binomial polynomial.
pub fn check_q_char_poly(v: usize, so: &SecondOrderSpec) -> Result<bool> {
    let reciprocal = galois_polynomial(so, v)?.reciprocal(v)?;
    Ok(build_q(v, so).char_poly()? == reciprocal)
}

/// `det Q_v = q^{v(v−1)/2}`.
pub fn check_q_det(v: usize, so: &SecondOrderSpec) -> Result<bool> {
    Ok(build_q(v, so).det()? == q_triangular(&so.q, v as u32))
}

/// Selector names accepted by [`run_checks`].
pub const CHECK_NAMES: [&str; 7] = ["A3", "A7", "shift", "B", "C", "D3", "cor36"];

/// Runs the named checks (all of them when `which` is empty). `D3` and
/// `cor36` use `v = n`; `C` needs a W instance on the context. The extra
/// `lemma` entry is the conjunction of `A3`, `B` and `C` when all three ran.
pub fn run_checks(ctx: &AppendixContext, which: &[&str]) -> Result<BTreeMap<String, bool>> {
    let names: Vec<&str> = if which.is_empty() { CHECK_NAMES.to_vec() } else { which.to_vec() };
    let mut out = BTreeMap::new();
    for name in names {
        let ok = match name {
            "A3" => check_a_row_factor(ctx)?,
            "A7" => check_a1_closed_form(ctx)?,
            "shift" => check_shift(ctx)?,
            "B" => check_b_det(ctx)?,
            "C" => check_c_cofactors(ctx)?,
            "D3" => check_companion_similarity(ctx.n, &ctx.so)?,
            "cor36" => check_q_char_poly(ctx.n, &ctx.so)?,
            other => return Err(Error::Parse(format!("unknown appendix check {other:?}"))),
        };
        out.insert(name.to_string(), ok);
    }
    if let (Some(a), Some(b), Some(c)) = (out.get("A3"), out.get("B"), out.get("C")) {
        let lemma = *a && *b && *c;
        out.insert("lemma".to_string(), lemma);
    }
    Ok(out)
}
