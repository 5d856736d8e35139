//! Linear relations `Σ_{j=0}^{t} c_j·X(m−j) = 0`.

use std::fmt;
use std::ops::RangeInclusive;

use num_traits::{One, Signed, Zero};

use crate::algebra::rational::primitive_integer_vector;
use crate::algebra::{rat, Rational};
use crate::error::{Error, Result};
use crate::sequences::IndexedValues;

/// Coefficients descending from `X(m)`: `coeffs[j]` multiplies `X(m − j)`.
///
/// Stored trimmed (`c_t ≠ 0`) and normalized: monic when dividing by `c_0`
/// leaves integer coefficients, otherwise the primitive integer vector with
/// positive `c_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceRelation {
    coeffs: Vec<Rational>,
}

impl RecurrenceRelation {
    pub fn new(mut coeffs: Vec<Rational>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let Some(c0) = coeffs.first().cloned() else {
            return Err(Error::InvalidSpec("relation has no nonzero coefficient".into()));
        };
        if c0.is_zero() {
            return Err(Error::InvalidSpec("leading coefficient c_0 must be nonzero".into()));
        }
        let monic: Vec<Rational> = coeffs.iter().map(|c| c / &c0).collect();
        let coeffs = if monic.iter().all(Rational::is_integer) {
            monic
        } else {
            primitive_integer_vector(&coeffs)
        };
        Ok(Self { coeffs })
    }

    /// Keeps the coefficients exactly as given (only trailing zeros are trimmed).
    /// Used when a relation must be checked exactly as written.
    pub fn raw(mut coeffs: Vec<Rational>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.first().is_none_or(Zero::is_zero) {
            return Err(Error::InvalidSpec("leading coefficient c_0 must be nonzero".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Σ c_j·X(m−j)`, or `None` if the window leaves the provided values.
    pub fn residual(&self, values: &IndexedValues, m: i64) -> Option<Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .try_fold(Rational::zero(), |acc, (j, c)| Some(acc + c * values.get(m - j as i64)?))
    }

    fn check_range(&self, values: &IndexedValues, range: &RangeInclusive<i64>) -> Result<()> {
        if range.is_empty() {
            return Err(Error::InsufficientRange("empty verification range".into()));
        }
        let need = (*range.start() - self.order() as i64)..=*range.end();
        if !values.covers(&need) {
            return Err(Error::InsufficientRange(format!(
                "order {} relation on m in [{}, {}] needs X over [{}, {}], have [{}, {}]",
                self.order(),
                range.start(),
                range.end(),
                need.start(),
                need.end(),
                values.start(),
                values.end()
            )));
        }
        Ok(())
    }

    /// First `m` in the range with a nonzero residual.
    pub fn first_failure(
        &self,
        values: &IndexedValues,
        range: RangeInclusive<i64>,
    ) -> Result<Option<(i64, Rational)>> {
        self.check_range(values, &range)?;
        Ok(range
            .map(|m| (m, self.residual(values, m).expect("range checked")))
            .find(|(_, r)| !r.is_zero()))
    }

    /// True iff the relation holds exactly at every `m` in the range.
    pub fn verify(&self, values: &IndexedValues, range: RangeInclusive<i64>) -> Result<bool> {
        Ok(self.first_failure(values, range)?.is_none())
    }

    /// True iff `self = λ·other` for some nonzero rational `λ`.
    pub fn is_proportional(&self, other: &Self) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        let lambda = &self.coeffs[0] / &other.coeffs[0];
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| *a == &lambda * b)
    }

    /// Human form, e.g. `X(m) = 2X(m-1) + 2X(m-2) - X(m-3)`.
    pub fn equation(&self) -> String {
        let mut out = String::new();
        let c0 = &self.coeffs[0];
        if !c0.is_one() {
            out.push_str(&scalar(c0));
        }
        out.push_str("X(m) =");
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let t = -c;
            let sign = if t.is_negative() { "-" } else { "+" };
            if first {
                out.push(' ');
                if t.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            first = false;
            let mag = t.abs();
            if !mag.is_one() {
                out.push_str(&scalar(&mag));
            }
            out.push_str(&format!("X(m-{j})"));
        }
        if first {
            out.push_str(" 0");
        }
        out
    }
}

fn scalar(c: &Rational) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("({c})")
    }
}

impl fmt::Display for RecurrenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
