//! Rational functions of the geometry symbols in reduced canonical form.

use std::fmt;

use rug::Rational;

use super::poly::{gcd, Poly};
use crate::expr::Expr;
use crate::model::GeomParams;
use crate::Error;

/// `num / den` with gcd 1 and a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatExpr {
    num: Poly,
    den: Poly,
}

impl Default for RatExpr {
    fn default() -> Self {
        RatExpr::zero()
    }
}

impl RatExpr {
    pub fn zero() -> Self {
        RatExpr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatExpr::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        RatExpr {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(v: i64) -> Self {
        RatExpr::constant(Rational::from(v))
    }

    pub fn var(name: &str) -> Self {
        RatExpr {
            num: Poly::var(name),
            den: Poly::one(),
        }
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatExpr::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g == Poly::one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = Rational::from(lc.recip_ref());
        RatExpr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        let d = self.den.as_constant()?;
        Some(self.num.as_constant()? / d)
    }

    pub fn add(&self, o: &RatExpr) -> RatExpr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatExpr::reduced(self.num.add(&o.num), self.den.clone());
        }
        RatExpr::reduced(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatExpr {
        RatExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatExpr) -> RatExpr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatExpr) -> RatExpr {
        if self.is_zero() || o.is_zero() {
            return RatExpr::zero();
        }
        RatExpr::reduced(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn div(&self, o: &RatExpr) -> Result<RatExpr, Error> {
        if o.is_zero() {
            return Err(Error::DivisionByZero(format!("({self})/({o})")));
        }
        Ok(RatExpr::reduced(
            self.num.mul(&o.den),
            self.den.mul(&o.num),
        ))
    }

    pub fn square(&self) -> RatExpr {
        self.mul(self)
    }

    /// Converts a parsed expression; functions and π are rejected.
    pub fn from_expr(e: &Expr) -> Result<RatExpr, Error> {
        Ok(match e {
            Expr::Num(r) => RatExpr::constant(r.clone()),
            Expr::Sym(s) if s == "pi" => return Err(Error::NonRational(e.to_string())),
            Expr::Sym(s) => RatExpr::var(s),
            Expr::Neg(a) => RatExpr::from_expr(a)?.neg(),
            Expr::Add(a, b) => RatExpr::from_expr(a)?.add(&RatExpr::from_expr(b)?),
            Expr::Sub(a, b) => RatExpr::from_expr(a)?.sub(&RatExpr::from_expr(b)?),
            Expr::Mul(a, b) => RatExpr::from_expr(a)?.mul(&RatExpr::from_expr(b)?),
            Expr::Div(a, b) => RatExpr::from_expr(a)?.div(&RatExpr::from_expr(b)?)?,
            Expr::Pow(a, n) => {
                let base = RatExpr::from_expr(a)?;
                let mut out = RatExpr::one();
                for _ in 0..n.unsigned_abs() {
                    out = out.mul(&base);
                }
                if *n < 0 {
                    RatExpr::one().div(&out)?
                } else {
                    out
                }
            }
            Expr::Call(..) => return Err(Error::NonRational(e.to_string())),
        })
    }

    pub fn parse(src: &str) -> Result<RatExpr, Error> {
        RatExpr::from_expr(&Expr::parse(src)?)
    }

    /// Exact value at the bound geometry.
    pub fn eval(&self, geom: &GeomParams) -> Result<Rational, Error> {
        if let Some(name) = self.symbols().into_iter().find(|s| geom.get(s).is_none()) {
            return Err(Error::UnboundSymbol(name));
        }
        let env = |s: &str| geom.get(s).cloned();
        let n = self.num.eval(&env).expect("symbols bound");
        let d = self.den.eval(&env).expect("symbols bound");
        if d == 0 {
            return Err(Error::DivisionByZero(self.to_string()));
        }
        Ok(n / d)
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.den.as_constant() {
            if d == 1 {
                return write!(f, "{}", self.num);
            }
            // constant denominators fold into the coefficients
            let inv = Rational::from(d.recip_ref());
            return write!(f, "{}", self.num.scale(&inv));
        }
        let num = if self.num.is_compound() {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den = self.den.to_string();
        let den = if self.den.is_compound() || den.contains('*') {
            format!("({den})")
        } else {
            den
        };
        write!(f, "{num}/{den}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_is_canonical() {
        let a = RatExpr::parse("(D12^2-D13^2)/(D12+D13)").unwrap();
        assert_eq!(a, RatExpr::parse("D12-D13").unwrap());
        let b = RatExpr::parse("1/(D12+D13) - 1/(D13+D12)").unwrap();
        assert!(b.is_zero());
        let c = RatExpr::parse("2/(2*L10^2)").unwrap();
        assert_eq!(c, RatExpr::parse("1/L10^2").unwrap());
        assert_eq!(c.to_string(), "1/L10^2");
    }

    #[test]
    fn evaluates_exactly() {
        let mut g = GeomParams::default();
        g.set("D12", "0.3196").unwrap();
        g.set("D13", "0.082").unwrap();
        let e = RatExpr::parse("1/(D12+D13)").unwrap();
        assert_eq!(e.eval(&g).unwrap(), Rational::from((2500, 1004)));
        let u = RatExpr::parse("L7").unwrap();
        assert!(matches!(u.eval(&g), Err(Error::UnboundSymbol(s)) if s == "L7"));
    }

    #[test]
    fn rejects_transcendental() {
        assert!(matches!(RatExpr::parse("sin(x)"), Err(Error::NonRational(_))));
        assert!(matches!(RatExpr::parse("1/(x-x)"), Err(Error::DivisionByZero(_))));
    }
}
