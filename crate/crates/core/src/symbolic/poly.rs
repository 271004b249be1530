//! Multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

/// Sorted list of (variable, exponent) pairs, exponents nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(name.to_string(), exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| v == var)
            .map_or(0, |(_, e)| *e)
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(v, _)| v.as_str())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out.into_iter().collect())
    }

    /// `self / other` when every exponent allows it.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            let have = out.get_mut(v)?;
            if *have < *e {
                return None;
            }
            *have -= e;
        }
        Some(Monomial(out.into_iter().filter(|(_, e)| *e > 0).collect()))
    }

    /// Drops `var` from the monomial.
    fn without(&self, var: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| v != var).cloned().collect())
    }
}

// Lexicographic on the sorted variable list: a monomial containing an
// earlier variable to a higher power is larger.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => {
                    if va != vb {
                        return if va < vb {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from(1))
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::zero();
        p.terms.insert(Monomial::var(name, 1), Rational::from(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Largest term in the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.vars().map(str::to_string))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), Rational::from(-c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), Rational::from(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if *c == 0 {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), Rational::from(v * c)))
                .collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, v)| (mm.mul(m), Rational::from(v * c)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact quotient, or `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        let (lm, lc) = other.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let tm = m.div(&lm)?;
            let tc = Rational::from(c / &lc);
            rem = rem.sub(&other.mul_term(&tm, &tc));
            quot.add_term(tm, tc);
        }
        Some(quot)
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    /// Coefficients with respect to `var`, indexed by power.
    fn coeffs_in(&self, var: &str) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(var) as usize + 1];
        for (m, c) in &self.terms {
            out[m.exponent(var) as usize].add_term(m.without(var), c.clone());
        }
        out
    }

    fn from_coeffs(var: &str, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            out = out.add(&c.mul_term(&Monomial::var(var, k as u32), &Rational::from(1)));
        }
        out
    }

    /// Pseudo-remainder of `self` by `b` viewed as polynomials in `var`.
    fn pseudo_rem(&self, b: &Poly, var: &str) -> Poly {
        let m = b.degree_in(var);
        let lb = b.coeffs_in(var).pop().unwrap_or_default();
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(var) >= m {
            let d = r.degree_in(var);
            let lr = r.coeffs_in(var).pop().unwrap_or_default();
            let shift = Poly::from_coeffs(var, &[vec![Poly::zero(); (d - m) as usize], vec![lr]].concat());
            r = r.mul(&lb).sub(&shift.mul(b));
        }
        r
    }

    fn content_in(&self, var: &str) -> Poly {
        self.coeffs_in(var)
            .into_iter()
            .filter(|c| !c.is_zero())
            .fold(Poly::zero(), |g, c| gcd(&g, &c))
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = Rational::from(c.recip_ref());
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    pub fn eval(&self, env: &dyn Fn(&str) -> Option<Rational>) -> Option<Rational> {
        let mut sum = Rational::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = env(v)?;
                for _ in 0..*e {
                    t *= &x;
                }
            }
            sum += t;
        }
        Some(sum)
    }

    fn n_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Greatest common divisor, normalized to be monic (one for coprime inputs).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let mut vars = a.vars();
    vars.extend(b.vars());
    vars.sort();
    vars.dedup();
    let Some(x) = vars.first().cloned() else {
        return Poly::one();
    };
    let (da, db) = (a.degree_in(&x), b.degree_in(&x));
    if da == 0 {
        return gcd(a, &b.content_in(&x));
    }
    if db == 0 {
        return gcd(&a.content_in(&x), b);
    }
    let (ca, cb) = (a.content_in(&x), b.content_in(&x));
    let content = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(&x) < q.degree_in(&x) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = p.pseudo_rem(&q, &x);
        p = q;
        q = if r.is_zero() {
            r
        } else {
            let c = r.content_in(&x);
            r.div_exact(&c).expect("content divides")
        };
    }
    let g = if p.degree_in(&x) == 0 {
        Poly::one()
    } else {
        let c = p.content_in(&x);
        p.div_exact(&c).expect("content divides")
    };
    content.mul(&g).monic()
}

/// Writes a rational without a trailing "/1".
pub fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(ma, _), (mb, _)| mb.degree().cmp(&ma.degree()).then(mb.cmp(ma)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl Poly {
    /// True when printing needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        self.n_terms() > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var("x")
    }
    fn y() -> Poly {
        Poly::var("y")
    }
    fn c(v: i64) -> Poly {
        Poly::constant(Rational::from(v))
    }

    #[test]
    fn arithmetic_and_division() {
        let a = x().add(&y());
        let b = x().sub(&y());
        let p = a.mul(&b);
        assert_eq!(p, x().pow(2).sub(&y().pow(2)));
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&x()), None);
    }

    #[test]
    fn gcd_of_products() {
        let f = x().add(&y()).pow(2);
        let g = x().add(&y()).mul(&x().sub(&c(3)));
        assert_eq!(gcd(&f, &g), x().add(&y()));
        assert_eq!(gcd(&x(), &y()), Poly::one());
        let h = c(6).mul(&x()).mul(&y());
        assert_eq!(gcd(&h, &c(4).mul(&y()).mul(&y())), y());
    }

    #[test]
    fn gcd_three_variables() {
        let z = Poly::var("z");
        let common = x().mul(&z).add(&y().pow(2)).add(&c(1));
        let f = common.mul(&x().add(&z));
        let g = common.mul(&y().sub(&z)).mul(&y());
        assert_eq!(gcd(&f, &g), common.monic());
    }

    #[test]
    fn display_is_stable() {
        let p = x().pow(2).scale(&Rational::from((1, 2))).sub(&y()).add(&c(3));
        assert_eq!(p.to_string(), "1/2*x^2 - y + 3");
    }
}
