//! Constant-coefficient linear recurrences and their solutions.
//!
//! A [`RecurrenceSpec`] holds `A_1..A_s` for `x(m) = A_1 x(m−1) + … + A_s x(m−s)`.
//! A [`SequenceInstance`] is one solution, evaluated lazily in both directions
//! and memoized behind a mutex so shared instances can be read concurrently.

use std::collections::VecDeque;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::algebra::{parse_rational, parse_rational_list, rat, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceSpec {
    coeffs: Vec<Rational>,
}

impl RecurrenceSpec {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSpec("order must be at least 1".into()));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::InvalidSpec("at least one coefficient must be nonzero".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// `"A_1,...,A_s"` or the second-order shorthand `"p=1,q=-1"`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.contains('=') {
            Ok(SecondOrderSpec::parse(s)?.to_spec())
        } else {
            Self::new(parse_rational_list(s)?)
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `A_1..A_s`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `A_i`, 1-based; zero outside `1..=s`.
    pub fn coeff(&self, i: usize) -> Rational {
        if i == 0 {
            return Rational::zero();
        }
        self.coeffs.get(i - 1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn backward_extensible(&self) -> bool {
        !self.coeffs[self.coeffs.len() - 1].is_zero()
    }

    /// The recurrence as a relation `[1, −A_1, …, −A_s]`.
    pub fn as_relation_coeffs(&self) -> Vec<Rational> {
        std::iter::once(Rational::one())
            .chain(self.coeffs.iter().map(|a| -a))
            .collect()
    }

    /// The fundamental solution: `u(1) = 1`, `u(0) = … = u(2 − s) = 0`.
    pub fn fundamental(&self) -> SequenceInstance {
        let s = self.order();
        let mut init = vec![Rational::zero(); s];
        init[s - 1] = Rational::one();
        SequenceInstance::new(self.clone(), 2 - s as i64, init).expect("s initial values")
    }

    /// The same sequence indexed so that `u(1) = … = u(s − 1) = 0`, `u(s) = 1`;
    /// its value at `m` equals `fundamental()` at `m − s + 1`.
    pub fn fundamental_order_indexed(&self) -> SequenceInstance {
        let s = self.order();
        let mut init = vec![Rational::zero(); s];
        init[s - 1] = Rational::one();
        SequenceInstance::new(self.clone(), 1, init).expect("s initial values")
    }
}

impl fmt::Display for RecurrenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `W_m = p·W_{m−1} − q·W_{m−2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SecondOrderSpec {
    pub p: Rational,
    pub q: Rational,
}

impl SecondOrderSpec {
    pub fn new(p: Rational, q: Rational) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::InvalidSpec("p and q cannot both be zero".into()));
        }
        Ok(Self { p, q })
    }

    pub fn from_ints(p: i64, q: i64) -> Result<Self> {
        Self::new(rat(p), rat(q))
    }

    /// Parses `"p=1,q=-1"` (either order, whitespace allowed).
    pub fn parse(s: &str) -> Result<Self> {
        let (mut p, mut q) = (None, None);
        for part in s.split(',') {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "p" => p = Some(parse_rational(val)?),
                "q" => q = Some(parse_rational(val)?),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        match (p, q) {
            (Some(p), Some(q)) => Self::new(p, q),
            _ => Err(Error::Parse(format!("need both p and q in {s:?}"))),
        }
    }

    pub fn to_spec(&self) -> RecurrenceSpec {
        RecurrenceSpec::new(vec![self.p.clone(), -&self.q]).expect("validated in constructor")
    }

    /// `W(a, b; p, q)` with `W_0 = a`, `W_1 = b`.
    pub fn sequence(&self, a: Rational, b: Rational) -> SequenceInstance {
        SequenceInstance::new(self.to_spec(), 0, vec![a, b]).expect("two initial values")
    }

    /// `u_m = W_m(0, 1; p, q)`.
    pub fn fundamental(&self) -> SequenceInstance {
        self.sequence(Rational::zero(), Rational::one())
    }

    /// `V_m = W_m(2, p; p, q) = α^m + β^m`.
    pub fn lucas(&self) -> SequenceInstance {
        self.sequence(rat(2), self.p.clone())
    }
}

impl fmt::Display for SecondOrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={},q={}", self.p, self.q)
    }
}

#[derive(Debug)]
struct Window {
    base: i64,
    values: VecDeque<Rational>,
}

/// One solution of a recurrence, pinned by `s` consecutive initial values.
#[derive(Debug)]
pub struct SequenceInstance {
    spec: RecurrenceSpec,
    window_base: i64,
    initial: Vec<Rational>,
    cache: Mutex<Window>,
}

impl Clone for SequenceInstance {
    fn clone(&self) -> Self {
        Self::new(self.spec.clone(), self.window_base, self.initial.clone())
            .expect("already validated")
    }
}

impl SequenceInstance {
    /// `initial[i]` is the value at `window_base + i`.
    pub fn new(spec: RecurrenceSpec, window_base: i64, initial: Vec<Rational>) -> Result<Self> {
        if initial.len() != spec.order() {
            return Err(Error::InvalidSpec(format!(
                "order {} recurrence needs {} initial values, got {}",
                spec.order(),
                spec.order(),
                initial.len()
            )));
        }
        let cache = Mutex::new(Window {
            base: window_base,
            values: initial.iter().cloned().collect(),
        });
        Ok(Self { spec, window_base, initial, cache })
    }

    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    pub fn window_base(&self) -> i64 {
        self.window_base
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    /// Lowest index this instance can reach, `None` when unbounded below.
    pub fn lowest_index(&self) -> Option<i64> {
        (!self.spec.backward_extensible()).then_some(self.window_base)
    }

    pub fn eval(&self, m: i64) -> Result<Rational> {
        if m < self.window_base && !self.spec.backward_extensible() {
            return Err(Error::NotBackwardExtensible { index: m });
        }
        let mut w = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        let coeffs = self.spec.coeffs();
        let s = coeffs.len();
        while m >= w.base + w.values.len() as i64 {
            let len = w.values.len();
            let next = coeffs
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (i, a)| acc + a * &w.values[len - 1 - i]);
            w.values.push_back(next);
        }
        while m < w.base {
            // x(b+s−1) = Σ_{i=1}^{s} A_i x(b+s−1−i), solved for the i = s term x(b−1)
            let mut rest = w.values[s - 1].clone();
            for i in 1..s {
                rest -= &coeffs[i - 1] * &w.values[s - 1 - i];
            }
            let prev = rest / &coeffs[s - 1];
            w.values.push_front(prev);
            w.base -= 1;
        }
        Ok(w.values[(m - w.base) as usize].clone())
    }

    pub fn values(&self, range: RangeInclusive<i64>) -> Result<IndexedValues> {
        let start = *range.start();
        let values = range.map(|m| self.eval(m)).collect::<Result<Vec<_>>>()?;
        Ok(IndexedValues::new(start, values))
    }
}

/// Termwise product `Π x_i(m)` over a range.
pub fn product_values(factors: &[SequenceInstance], range: RangeInclusive<i64>) -> Result<IndexedValues> {
    let start = *range.start();
    let values = range
        .map(|m| {
            factors
                .iter()
                .try_fold(Rational::one(), |acc, x| Ok(acc * x.eval(m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IndexedValues::new(start, values))
}

/// A finite run of sequence values `X(start), X(start + 1), …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedValues {
    start: i64,
    values: Vec<Rational>,
}

impl IndexedValues {
    pub fn new(start: i64, values: Vec<Rational>) -> Self {
        Self { start, values }
    }

    pub fn from_fn(range: RangeInclusive<i64>, f: impl FnMut(i64) -> Rational) -> Self {
        let start = *range.start();
        Self { start, values: range.map(f).collect() }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last index covered; `start − 1` when empty.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, m: i64) -> Option<&Rational> {
        if m < self.start {
            return None;
        }
        self.values.get((m - self.start) as usize)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.values
    }

    pub fn map(&self, f: impl FnMut(&Rational) -> Rational) -> Self {
        Self { start: self.start, values: self.values.iter().map(f).collect() }
    }

    pub fn covers(&self, range: &RangeInclusive<i64>) -> bool {
        range.is_empty() || (*range.start() >= self.start && *range.end() <= self.end())
    }
}

/// Coefficients `a_1(m)..a_s(m)` with `x(m+r+1) = Σ a_i(m)·x(r+2−i)` for every
/// solution `x` and every `r`.
#[derive(Clone, Debug)]
pub struct ShiftCoefficients {
    spec: RecurrenceSpec,
    u: SequenceInstance,
}

impl ShiftCoefficients {
    pub fn new(spec: &RecurrenceSpec) -> Self {
        Self { spec: spec.clone(), u: spec.fundamental() }
    }

    pub fn fundamental(&self) -> &SequenceInstance {
        &self.u
    }

    /// `a_1(m) = u(m+1)`, `a_i(m) = Σ_{j=i}^{s} A_j·u(m − j + i)` for `i ≥ 2`.
    pub fn at(&self, m: i64) -> Result<Vec<Rational>> {
        let s = self.spec.order();
        let mut out = Vec::with_capacity(s);
        out.push(self.u.eval(m + 1)?);
        for i in 2..=s {
            let mut acc = Rational::zero();
            for j in i..=s {
                let a = self.spec.coeff(j);
                if !a.is_zero() {
                    acc += a * self.u.eval(m - (j - i) as i64)?;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

pub fn shift_coefficients(spec: &RecurrenceSpec, m: i64) -> Result<Vec<Rational>> {
    ShiftCoefficients::new(spec).at(m)
}

/// `V_m` with `V_0 = 2`, `V_1 = p`.
pub fn lucas_companion(so: &SecondOrderSpec, m: i64) -> Result<Rational> {
    so.lucas().eval(m)
}
