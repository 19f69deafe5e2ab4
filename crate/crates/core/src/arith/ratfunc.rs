//! Rational functions whose denominators are products of registered factors.

use super::poly::{render_mono, Mono, MultiPoly};
use super::rational::Rational;

/// A quotient `num / (mono · Π fᵢ^eᵢ)`.
///
/// Every factor `fᵢ` is a non-monomial polynomial normalized to leading
/// coefficient 1 with trivial monomial content. Monomial parts of the
/// denominator are cancelled eagerly; polynomial factors are cancelled by
/// [`RationalFunction::reduce`].
#[derive(Clone, Default)]
pub struct RationalFunction {
    num: MultiPoly,
    mono: Mono,
    factors: Vec<(MultiPoly, u32)>,
}

impl RationalFunction {
    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_int(c))
    }

    pub fn var(i: usize) -> Self {
        Self::from_poly(MultiPoly::var(i))
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        RationalFunction { num, mono: Mono::one(), factors: Vec::new() }
    }

    /// `num / mono`, reduced.
    pub fn over_mono(num: MultiPoly, mono: Mono) -> Self {
        let mut r = RationalFunction { num, mono, factors: Vec::new() };
        r.cancel_mono();
        r
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn mono_denominator(&self) -> &Mono {
        &self.mono
    }

    pub fn factors(&self) -> &[(MultiPoly, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.mono.is_one() && self.factors.is_empty()
    }

    /// The full denominator as a polynomial.
    pub fn denominator(&self) -> MultiPoly {
        let mut d = MultiPoly::monomial(self.mono, Rational::one());
        for (f, e) in &self.factors {
            d = d.mul(&f.pow(*e));
        }
        d
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        if !self.is_polynomial() {
            return None;
        }
        self.num.as_constant()
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        (self.is_polynomial() || self.num.is_zero()).then_some(&self.num)
    }

    fn cancel_mono(&mut self) {
        if self.num.is_zero() {
            self.mono = Mono::one();
            self.factors.clear();
            return;
        }
        if self.mono.is_one() {
            return;
        }
        let g = self.num.monomial_content().gcd(&self.mono);
        if !g.is_one() {
            self.num = self.num.div_mono(&g);
            self.mono = self.mono.div(&g).unwrap();
        }
    }

    /// Cancels polynomial factors that divide the numerator.
    pub fn reduce(&mut self) {
        self.cancel_mono();
        if self.num.is_zero() {
            return;
        }
        for (f, e) in self.factors.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.factors.retain(|(_, e)| *e > 0);
    }

    pub fn reduced(mut self) -> Self {
        self.reduce();
        self
    }

    /// Common denominator data for `self` and `other`: multipliers for each numerator.
    fn align(&self, other: &Self) -> (MultiPoly, MultiPoly, Mono, Vec<(MultiPoly, u32)>) {
        let mono = self.mono.lcm(&other.mono);
        let mut factors: Vec<(MultiPoly, u32)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    factors.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    factors.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    factors.push((a[i].0.clone(), a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        let lift = |r: &Self| -> MultiPoly {
            let mut n = r.num.mul_mono(&mono.div(&r.mono).unwrap());
            for (f, e) in &factors {
                let have = r.factors.iter().find(|(g, _)| g == f).map_or(0, |(_, k)| *k);
                if *e > have {
                    n = n.mul(&f.pow(*e - have));
                }
            }
            n
        };
        (lift(self), lift(other), mono, factors)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        if other.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        if self.mono == other.mono && self.factors == other.factors {
            let num = if negate { self.num.sub(&other.num) } else { self.num.add(&other.num) };
            let mut r = RationalFunction { num, mono: self.mono, factors: self.factors.clone() };
            r.cancel_mono();
            return r;
        }
        let (x, y, mono, factors) = self.align(other);
        let num = if negate { x.sub(&y) } else { x.add(&y) };
        let mut r = RationalFunction { num, mono, factors };
        r.cancel_mono();
        r
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), mono: self.mono, factors: self.factors.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), mono: self.mono, factors: self.factors.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return Self::zero();
        }
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            match factors.binary_search_by(|(g, _)| g.cmp(f)) {
                Ok(i) => factors[i].1 += e,
                Err(i) => factors.insert(i, (f.clone(), *e)),
            }
        }
        let mut r = RationalFunction {
            num: self.num.mul(&other.num),
            mono: self.mono.mul(&other.mono),
            factors,
        };
        r.cancel_mono();
        r
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        let mut r = RationalFunction {
            num: self.num.mul(p),
            mono: self.mono,
            factors: self.factors.clone(),
        };
        r.cancel_mono();
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Divides by `p^e` for a nonzero polynomial `p`, registering it as a factor.
    pub fn div_poly(&self, p: &MultiPoly, e: u32) -> Self {
        assert!(!p.is_zero(), "division by zero polynomial");
        if e == 0 || self.num.is_zero() {
            return self.clone();
        }
        let content = p.monomial_content();
        let stripped = p.div_mono(&content);
        let lc = stripped.leading_coeff();
        let mut r = self.clone();
        r.num = r.num.scale(&lc.recip().pow(e));
        for _ in 0..e {
            r.mono = r.mono.mul(&content);
        }
        if stripped.len() > 1 {
            let f = stripped.scale(&lc.recip());
            match r.factors.binary_search_by(|(g, _)| g.cmp(&f)) {
                Ok(i) => r.factors[i].1 += e,
                Err(i) => r.factors.insert(i, (f, e)),
            }
        }
        r.cancel_mono();
        r
    }

    /// Divides by another rational function whose numerator is nonzero.
    pub fn div(&self, other: &Self) -> Self {
        let mut inv = Self::from_poly(other.denominator());
        inv = inv.div_poly(&other.num, 1);
        self.mul(&inv)
    }

    /// Partial derivative in variable `i`.
    pub fn diff(&self, i: usize) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        if self.is_polynomial() {
            return Self::from_poly(self.num.diff(i));
        }
        let ei = self.mono.exp(i);
        let moving: Vec<usize> = self
            .factors
            .iter()
            .enumerate()
            .filter(|(_, (f, _))| f.terms().iter().any(|(m, _)| m.exp(i) > 0))
            .map(|(k, _)| k)
            .collect();
        if ei == 0 && moving.is_empty() {
            return RationalFunction {
                num: self.num.diff(i),
                mono: self.mono,
                factors: self.factors.clone(),
            }
            .reduced_mono();
        }
        let xi = if ei > 0 { Mono::var(i) } else { Mono::one() };
        let mut prod = MultiPoly::one();
        for &k in &moving {
            prod = prod.mul(&self.factors[k].0);
        }
        let mut num = self.num.diff(i).mul(&prod).mul_mono(&xi);
        if ei > 0 {
            num = num.sub(&self.num.mul(&prod).scale(&Rational::from_int(ei as i64)));
        }
        for &k in &moving {
            let (f, e) = &self.factors[k];
            let mut others = MultiPoly::one();
            for &j in &moving {
                if j != k {
                    others = others.mul(&self.factors[j].0);
                }
            }
            let t = self
                .num
                .mul(&f.diff(i))
                .mul(&others)
                .mul_mono(&xi)
                .scale(&Rational::from_int(*e as i64));
            num = num.sub(&t);
        }
        let mut factors = self.factors.clone();
        for &k in &moving {
            factors[k].1 += 1;
        }
        RationalFunction { num, mono: self.mono.mul(&xi), factors }.reduced_mono()
    }

    fn reduced_mono(mut self) -> Self {
        self.cancel_mono();
        self
    }

    /// Euler operator `Σ xⁱ∂ᵢ`.
    pub fn euler(&self, nvars: usize) -> Self {
        let fdeg: Option<u32> = self
            .factors
            .iter()
            .map(|(f, e)| f.homogeneous_degree().map(|d| d * e))
            .sum();
        match fdeg {
            Some(fd) => {
                let dd = (self.mono.degree() + fd) as i64;
                let mut terms = Vec::with_capacity(self.num.len());
                for (m, c) in self.num.terms() {
                    let k = m.degree() as i64 - dd;
                    if k != 0 {
                        terms.push((*m, c * &Rational::from_int(k)));
                    }
                }
                RationalFunction {
                    num: MultiPoly::from_terms(terms),
                    mono: self.mono,
                    factors: self.factors.clone(),
                }
                .reduced_mono()
            }
            None => {
                let mut acc = Self::zero();
                for i in 0..nvars {
                    acc = acc.add(&self.diff(i).mul(&Self::var(i)));
                }
                acc
            }
        }
    }

    /// Homogeneity degree if numerator and all factors are homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let n = self.num.homogeneous_degree()? as i64;
        let mut d = self.mono.degree() as i64;
        for (f, e) in &self.factors {
            d += f.homogeneous_degree()? as i64 * *e as i64;
        }
        Some(n - d)
    }

    /// Substitutes every variable by a rational function.
    pub fn substitute(&self, images: &[RationalFunction]) -> Self {
        if images.iter().all(|r| r.is_polynomial()) {
            let polys: Vec<MultiPoly> = images.iter().map(|r| r.num.clone()).collect();
            let mut out = Self::from_poly(self.num.substitute(&polys));
            let mono_img = MultiPoly::monomial(self.mono, Rational::one()).substitute(&polys);
            out = out.div_poly(&mono_img, 1);
            for (f, e) in &self.factors {
                out = out.div_poly(&f.substitute(&polys), *e);
            }
            return out;
        }
        let mut powers: Vec<Vec<RationalFunction>> = vec![vec![Self::one()]; images.len()];
        let mut eval_poly = |p: &MultiPoly| -> RationalFunction {
            let mut acc = Self::zero();
            for (m, c) in p.terms() {
                let mut t = Self::constant(c.clone());
                for (i, img) in images.iter().enumerate() {
                    let e = m.exp(i) as usize;
                    if e == 0 {
                        continue;
                    }
                    while powers[i].len() <= e {
                        let nx = powers[i].last().unwrap().mul(img);
                        powers[i].push(nx);
                    }
                    t = t.mul(&powers[i][e]);
                }
                acc = acc.add(&t);
            }
            acc
        };
        let mut out = eval_poly(&self.num);
        let mono_val = eval_poly(&MultiPoly::monomial(self.mono, Rational::one()));
        out = out.div(&mono_val);
        for (f, e) in &self.factors {
            let v = eval_poly(f);
            for _ in 0..*e {
                out = out.div(&v);
            }
        }
        out
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.denominator().eval(point);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(point) / &d)
    }

    /// Canonical rendering `(num)` or `(num)/(den)`.
    pub fn render(&self, names: &[String]) -> String {
        let mut r = self.clone();
        r.reduce();
        if r.is_polynomial() {
            return r.num.render(names);
        }
        let mut den = Vec::new();
        let m = render_mono(&r.mono, names);
        if !m.is_empty() {
            den.push(m);
        }
        for (f, e) in &r.factors {
            if *e == 1 {
                den.push(format!("({})", f.render(names)));
            } else {
                den.push(format!("({})^{}", f.render(names), e));
            }
        }
        format!("({})/({})", r.num.render(names), den.join("*"))
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl std::fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (0..super::poly::MAX_VARS).map(|i| format!("v{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> RationalFunction {
        RationalFunction::var(i)
    }

    #[test]
    fn quotient_rule_matches_hand_derivative() {
        // f = x / (x + y), ∂x f = y / (x + y)²
        let s = MultiPoly::var(0).add(&MultiPoly::var(1));
        let f = v(0).div_poly(&s, 1);
        let expect = v(1).div_poly(&s, 2);
        assert_eq!(f.diff(0), expect);
    }

    #[test]
    fn monomial_denominators_cancel() {
        let f = RationalFunction::over_mono(MultiPoly::var(0).mul(&MultiPoly::var(1)), Mono::var(0));
        assert!(f.is_polynomial());
        assert_eq!(f, v(1));
    }

    #[test]
    fn reduce_cancels_factor() {
        let s = MultiPoly::var(0).add(&MultiPoly::one());
        let f = RationalFunction::from_poly(s.mul(&s)).div_poly(&s, 1).reduced();
        assert!(f.is_polynomial());
    }

    #[test]
    fn euler_on_homogeneous_quotient() {
        let s = MultiPoly::var(0).add(&MultiPoly::var(1));
        let f = v(0).mul(&v(0)).div_poly(&s, 1);
        assert_eq!(f.euler(2), f);
        assert_eq!(f.homogeneous_degree(), Some(1));
    }
}
