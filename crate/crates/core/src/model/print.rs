use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{ConnectionBlock, Dynamics, ModelFile};

/// Decimal expansion of `q`. Exact whenever the denominator has no prime
/// factors besides 2 and 5, otherwise truncated to 30 fractional digits.
pub(crate) fn decimal(q: &BigRational) -> String {
    let sign = if q.is_negative() { "-" } else { "" };
    let q = q.abs();
    let int = q.to_integer();
    let mut rem = q.numer() - &int * q.denom();
    let mut frac = String::new();
    let ten = BigInt::from(10);
    while !rem.is_zero() && frac.len() < 30 {
        rem *= &ten;
        let (d, r) = rem.div_rem(q.denom());
        frac.push_str(&d.to_string());
        rem = r;
    }
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model \"{}\"", self.name)?;
        if !self.base.is_empty() {
            writeln!(f, "base dim {} coords ({})", self.base.len(), self.base.join(", "))?;
        }
        writeln!(f, "line {}", self.line)?;
        for y in &self.fields {
            writeln!(f, "field {y}")?;
        }
        for p in &self.params {
            writeln!(f, "param {} = {}", p.name, decimal(&p.value))?;
        }
        match &self.dynamics {
            Dynamics::Lagrangian { name, expr } => writeln!(f, "lagrangian {name} = {expr}")?,
            Dynamics::Hamiltonian { name, expr } => writeln!(f, "hamiltonian {name} = {expr}")?,
        }
        if let Some((name, h)) = &self.gauge {
            writeln!(f, "gauge {name} = {h}")?;
        }
        for c in &self.connections {
            let (ConnectionBlock::Theta { name, entries } | ConnectionBlock::Gamma { name, entries }) = c;
            writeln!(f, "connection {name} {{")?;
            for (k, e) in entries {
                writeln!(f, "  {k} = {e}")?;
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}
