//! Recurrences for termwise products of `n` solutions of one recurrence.
//!
//! Every solution satisfies `x(m+r+1) = Σ a_i(m)·x(r+2−i)`. Raising to the
//! `n`-th power for each factor and multiplying, the product `X` obeys
//!
//! ```text
//! c(m) := X(m+r+1) − Σ_i a_i(m)^n·X(r+2−i) = Σ_{e ∈ Δ} A_e(r)·Π_i a_i(m)^{e_i}
//! ```
//!
//! where `Δ` is the set of exponent tuples summing to `n` with at least two
//! nonzero entries and the `A_e(r)` do not depend on `m`. Stacking the
//! monomials for `m = 1..=k+1` gives a `(k+1)×k` matrix `V`; any `τ` with
//! `τ·V = 0` kills the right-hand side, so `Σ_j τ_j·c(1+j) = 0` for every `r`.
//! That is a recurrence for `X`, and it does not depend on which factors were
//! chosen. The `A_e` are never computed.

use std::ops::RangeInclusive;

use num_traits::{One, Zero};

use crate::algebra::rational::pow;
use crate::algebra::{Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::relation::RecurrenceRelation;
use crate::sequences::{product_values, IndexedValues, RecurrenceSpec, SequenceInstance, ShiftCoefficients};

/// Exponents `(e_1, …, e_s)` of one monomial `Π a_i^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentTuple(pub Vec<u32>);

impl ExponentTuple {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&e| e != 0).count()
    }

    pub fn monomial(&self, values: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(values)
            .fold(Rational::one(), |acc, (&e, a)| acc * pow(a, e))
    }
}

/// `C(n, k)` as `u128`; `n` here stays tiny.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `|Δ| = C(n+s−1, n) − s`.
pub fn delta_size(n: usize, s: usize) -> usize {
    (binomial((n + s - 1) as u64, n as u64) - s as u128) as usize
}

/// All tuples of `s` non-negative integers summing to `n` with at least two
/// nonzero entries, in ascending lexicographic order.
pub fn delta_set(n: usize, s: usize) -> Vec<ExponentTuple> {
    fn rec(remaining: u32, slots: usize, prefix: &mut Vec<u32>, out: &mut Vec<ExponentTuple>) {
        if slots == 1 {
            prefix.push(remaining);
            let t = ExponentTuple(prefix.clone());
            if t.support() >= 2 {
                out.push(t);
            }
            prefix.pop();
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            rec(remaining - e, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if s >= 1 {
        rec(n as u32, s, &mut Vec::with_capacity(s), &mut out);
    }
    out
}

/// Rows `m = 1..=k+1`, columns indexed by `Δ`: entry `Π_i a_i(m)^{e_i}`.
pub fn monomial_matrix(spec: &RecurrenceSpec, n: usize) -> Result<RationalMatrix> {
    let shifts = ShiftCoefficients::new(spec);
    monomial_matrix_with(&shifts, &delta_set(n, spec.order()))
}

fn monomial_matrix_with(shifts: &ShiftCoefficients, delta: &[ExponentTuple]) -> Result<RationalMatrix> {
    let k = delta.len();
    let rows = (1..=k as i64 + 1)
        .map(|m| {
            let a = shifts.at(m)?;
            Ok(delta.iter().map(|e| e.monomial(&a)).collect())
        })
        .collect::<Result<Vec<Vec<Rational>>>>()?;
    Ok(RationalMatrix::from_fn(k + 1, k, |i, j| rows[i][j].clone()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationReport {
    pub relation: RecurrenceRelation,
    /// `|Δ|`.
    pub k: usize,
    pub rank: usize,
    pub nullity: usize,
    /// Chosen left-null vector of the monomial matrix, primitive integer form.
    pub tau: Vec<Rational>,
}

/// Derives a recurrence annihilating every product of `n` solutions of `spec`.
///
/// When the monomial matrix has nullity above one, the null vector with the
/// smallest last nonzero index is used, which yields the shortest relation
/// this construction produces.
pub fn derive_product_recurrence(spec: &RecurrenceSpec, n: usize) -> Result<DerivationReport> {
    if n == 0 {
        return Err(Error::InvalidSpec("number of factors must be at least 1".into()));
    }
    let s = spec.order();
    let shifts = ShiftCoefficients::new(spec);
    let delta = delta_set(n, s);
    let k = delta.len();
    let v = monomial_matrix_with(&shifts, &delta)?;
    let rank = v.rank();
    let basis = v.left_nullspace();
    let nullity = basis.len();
    debug_assert_eq!(nullity, k + 1 - rank);
    // Basis vectors come ordered by their last nonzero index.
    let tau = basis
        .into_iter()
        .next()
        .ok_or_else(|| Error::Consistency("monomial matrix has no left null vector".into()))?;
    let top = tau
        .iter()
        .rposition(|t| !t.is_zero())
        .expect("null vectors are nonzero");

    // Σ_j τ_j·[X(r+2+j) − Σ_i a_i(1+j)^n·X(r+2−i)] = 0, written at m = r+2+top.
    let a_pow: Vec<Vec<Rational>> = (0..=top)
        .map(|j| {
            Ok(shifts
                .at(1 + j as i64)?
                .iter()
                .map(|a| pow(a, n as u32))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut coeffs = vec![Rational::zero(); top + s + 1];
    for (j, t) in tau.iter().enumerate().take(top + 1) {
        coeffs[top - j] += t;
    }
    for i in 1..=s {
        let c = (0..=top).fold(Rational::zero(), |acc, j| acc + &tau[j] * &a_pow[j][i - 1]);
        coeffs[top + i] -= c;
    }
    let relation = RecurrenceRelation::new(coeffs)?;
    Ok(DerivationReport { relation, k, rank, nullity, tau })
}

/// The `(k+1)×(k+1)` recurrence matrix for a concrete product at offset `r`:
/// first column `c(m)`, remaining columns the monomial matrix.
pub fn recurrence_matrix_z(
    spec: &RecurrenceSpec,
    n: usize,
    factors: &[SequenceInstance],
    r: i64,
) -> Result<RationalMatrix> {
    if factors.len() != n {
        return Err(Error::Dimension(format!("expected {n} factors, got {}", factors.len())));
    }
    if factors.iter().any(|f| f.spec() != spec) {
        return Err(Error::Dimension("all factors must share the recurrence".into()));
    }
    let s = spec.order() as i64;
    let shifts = ShiftCoefficients::new(spec);
    let delta = delta_set(n, spec.order());
    let k = delta.len() as i64;
    let v = monomial_matrix_with(&shifts, &delta)?;
    let x = product_values(factors, (r + 2 - s)..=(r + 2 + k))?;
    let xv = |m: i64| x.get(m).expect("range computed").clone();
    let column = (1..=k + 1)
        .map(|m| {
            let a = shifts.at(m)?;
            let tail = a.iter().enumerate().fold(Rational::zero(), |acc, (i, ai)| {
                acc + pow(ai, n as u32) * xv(r + 1 - i as i64)
            });
            Ok(xv(m + r + 1) - tail)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RationalMatrix::from_fn(k as usize + 1, k as usize + 1, |i, j| {
        if j == 0 {
            column[i].clone()
        } else {
            v.get(i, j - 1).clone()
        }
    }))
}

/// `verify_relation` as a free function.
pub fn verify_relation(
    rel: &RecurrenceRelation,
    values: &IndexedValues,
    range: RangeInclusive<i64>,
) -> Result<bool> {
    rel.verify(values, range)
}

/// Determinant of the `t×t` matrix whose row `i` (1-based) is
/// `X(k+(i−1)t+1), …, X(k+(i−1)t+t)`. Zero whenever `X` satisfies a relation
/// with at most `t` terms.
pub fn hankel_check(values: &IndexedValues, t: usize, k: i64) -> Result<Rational> {
    let t64 = t as i64;
    let need = (k + 1)..=(k + t64 * t64);
    if !values.covers(&need) {
        return Err(Error::InsufficientRange(format!(
            "need X over [{}, {}], have [{}, {}]",
            need.start(),
            need.end(),
            values.start(),
            values.end()
        )));
    }
    RationalMatrix::from_fn(t, t, |i, j| {
        values.get(k + (i as i64) * t64 + j as i64 + 1).expect("covered").clone()
    })
    .det()
}

/// Least-order relation (order ≤ `max_order`) holding at every `m` whose
/// window lies inside `range`. `None` if no order up to `max_order` works.
pub fn minimal_relation(
    values: &IndexedValues,
    max_order: usize,
    range: RangeInclusive<i64>,
) -> Result<Option<RecurrenceRelation>> {
    let len = if range.is_empty() { 0 } else { range.end() - range.start() + 1 };
    if len < 2 * max_order as i64 + 2 {
        return Err(Error::InsufficientRange(format!(
            "range of {len} values is too short for order {max_order} (need {})",
            2 * max_order + 2
        )));
    }
    if !values.covers(&range) {
        return Err(Error::InsufficientRange(format!(
            "values cover [{}, {}], range is [{}, {}]",
            values.start(),
            values.end(),
            range.start(),
            range.end()
        )));
    }
    let (lo, hi) = (*range.start(), *range.end());
    for d in 0..=max_order {
        let di = d as i64;
        // row for m: (X(m), X(m−1), …, X(m−d))
        let rows: Vec<Vec<Rational>> = (lo + di..=hi)
            .map(|m| (0..=di).map(|j| values.get(m - j).expect("covered").clone()).collect())
            .collect();
        let w = RationalMatrix::from_rows(rows)?;
        let found = w
            .right_nullspace()
            .into_iter()
            .find(|v| !v[0].is_zero() && !v[d].is_zero());
        if let Some(c) = found {
            let rel = RecurrenceRelation::new(c)?;
            debug_assert!(rel.verify(values, lo + di..=hi)?);
            return Ok(Some(rel));
        }
    }
    Ok(None)
}
