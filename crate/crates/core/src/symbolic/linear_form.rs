use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::Rational;

use super::ratexpr::RatExpr;
use crate::model::{param_label, GeomParams};
use crate::Error;

/// Linear combination of original parameters with rational-function coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: BTreeMap<usize, RatExpr>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn unit(index: usize) -> Self {
        let mut f = LinearForm::zero();
        f.coeffs.insert(index, RatExpr::one());
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: usize) -> RatExpr {
        self.coeffs.get(&index).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &RatExpr)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let sum = out.coeff(*k).add(v);
            if sum.is_zero() {
                out.coeffs.remove(k);
            } else {
                out.coeffs.insert(*k, sum);
            }
        }
        out
    }

    pub fn neg(&self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &RatExpr) -> LinearForm {
        if s.is_zero() {
            return LinearForm::zero();
        }
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (*k, v.mul(s)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Exact coefficients at the bound geometry.
    pub fn eval(&self, geom: &GeomParams) -> Result<BTreeMap<usize, Rational>, Error> {
        self.coeffs
            .iter()
            .map(|(k, v)| Ok((*k, v.eval(geom)?)))
            .collect()
    }

    /// Renders e.g. `mx1 + (1/(D12 + D13))*Iyy1 - D13*m7`.
    pub fn render(&self) -> String {
        self.render_led_by(None)
    }

    /// Like `render`, with the term on `lead` written first.
    pub fn render_led_by(&self, lead: Option<usize>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut order: Vec<usize> = lead.filter(|k| self.coeffs.contains_key(k)).into_iter().collect();
        order.extend(self.coeffs.keys().copied().filter(|k| Some(*k) != lead));
        let mut out = String::new();
        for (i, k) in order.into_iter().enumerate() {
            let c = &self.coeffs[&k];
            let label = param_label(k);
            let negative = !c.numerator().is_compound()
                && c.numerator().leading().is_some_and(|(_, v)| *v < 0);
            let mag = if negative { c.neg() } else { c.clone() };
            out.push_str(match (i, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            });
            if mag == RatExpr::one() {
                out.push_str(&label);
                continue;
            }
            let text = mag.to_string();
            if text.contains(' ') || text.contains('/') && mag.as_constant().is_none() {
                let _ = write!(out, "({text})*{label}");
            } else {
                let _ = write!(out, "{text}*{label}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_and_render() {
        let a = LinearForm::unit(1);
        let b = LinearForm::unit(7).scale(&RatExpr::parse("1/(D12+D13)").unwrap());
        let c = LinearForm::unit(0).scale(&RatExpr::parse("-D13").unwrap());
        let f = a.add(&b).add(&c);
        assert_eq!(f.render(), "-D13*m1 + mx1 + (1/(D12 + D13))*Iyy1");
        assert_eq!(f.render_led_by(Some(1)), "mx1 - D13*m1 + (1/(D12 + D13))*Iyy1");
        assert!(f.sub(&f).is_zero());
        let mut g = GeomParams::default();
        g.set("D12", "0.3196").unwrap();
        g.set("D13", "0.082").unwrap();
        let v = f.eval(&g).unwrap();
        assert_eq!(v[&0], Rational::from((-82, 1000)));
    }
}
