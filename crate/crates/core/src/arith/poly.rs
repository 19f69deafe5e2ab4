//! Sparse multivariate polynomials over the rationals.

use super::rational::Rational;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Maximum number of variables a monomial can carry.
pub const MAX_VARS: usize = 16;

/// An exponent vector. Also used as a multi-index for partial derivatives.
///
/// Ordered graded-lexicographically with the highest variable index most
/// significant, so in ambient coordinates `t < x¹ < … < xⁿ < ρ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u8; MAX_VARS]);

impl Mono {
    pub fn one() -> Self {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut m = Mono::one();
        m.0[i] = 1;
        m
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        let mut m = Mono::one();
        m.0[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] = m.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        m
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] = m.0[i].checked_sub(other.0[i])?;
        }
        Some(m)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= other.0[i])
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] = m.0[i].min(other.0[i]);
        }
        m
    }

    /// Componentwise maximum.
    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] = m.0[i].max(other.0[i]);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `α!` as a rational.
    pub fn factorial(&self) -> Rational {
        let mut acc = Rational::one();
        for &e in &self.0 {
            acc = &acc * &Rational::factorial(e as u32);
        }
        acc
    }

    /// Product of binomials `C(α, γ)` for `γ ≤ α`.
    pub fn binomial(&self, gamma: &Mono) -> Rational {
        let mut acc = Rational::one();
        for i in 0..MAX_VARS {
            let (a, g) = (self.0[i] as i64, gamma.0[i] as i64);
            for j in 0..g {
                acc = &acc * &Rational::new(a - j, j + 1);
            }
        }
        acc
    }

    /// All multi-indices `γ ≤ self`.
    pub fn divisors(&self) -> Vec<Mono> {
        let mut out = vec![Mono::one()];
        for i in 0..MAX_VARS {
            let e = self.0[i];
            if e == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for m in &out {
                for k in 0..=e {
                    let mut mm = *m;
                    mm.0[i] = k;
                    next.push(mm);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// All monomials in `nvars` variables of total degree exactly `d`, ascending.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Mono> {
        fn rec(i: usize, nvars: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
            if i + 1 == nvars {
                cur.0[i] = left as u8;
                out.push(*cur);
                cur.0[i] = 0;
                return;
            }
            for e in 0..=left {
                cur.0[i] = e as u8;
                rec(i + 1, nvars, left - e, cur, out);
            }
            cur.0[i] = 0;
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Mono::one());
            }
            return out;
        }
        rec(0, nvars, d, &mut Mono::one(), &mut out);
        out.sort();
        out
    }

    /// All monomials in `nvars` variables of total degree at most `d`, ascending.
    pub fn all_up_to_degree(nvars: usize, d: u32) -> Vec<Mono> {
        (0..=d).flat_map(|k| Mono::all_of_degree(nvars, k)).collect()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Mono {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let last = self.0.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

/// A polynomial as a strictly ascending list of `(monomial, nonzero coefficient)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<(Mono, Rational)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Mono::var(i), Rational::one())
    }

    pub fn monomial(m: Mono, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MultiPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, combining duplicates and dropping zeros.
    pub fn from_terms(mut terms: Vec<(Mono, Rational)>) -> Self {
        terms.sort_by_key(|a| a.0);
        let mut out: Vec<(Mono, Rational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MultiPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, Rational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Rational)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(Mono, Rational)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((*m, c.clone())),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Mono, Rational)> {
        self.terms.last()
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    /// Common degree of all terms if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Mono::one();
        };
        it.fold(*first, |g, (m, _)| g.gcd(m))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.merge(other, true)
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        MultiPoly { terms: out }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// Multiplies by a monomial; term order is preserved.
    pub fn mul_mono(&self, m: &Mono) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    /// Divides by a monomial that divides every term.
    pub fn div_mono(&self, m: &Mono) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.div(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        if let Some((m, c)) = other.as_monomial() {
            return self.mul_mono(&m).scale(&c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return other.mul_mono(&m).scale(&c);
        }
        let mut acc: BTreeMap<Mono, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let p = ca * cb;
                acc.entry(a.mul(b))
                    .and_modify(|v| *v += &p)
                    .or_insert(p);
            }
        }
        MultiPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in variable `i`; term order is preserved.
    pub fn diff(&self, i: usize) -> MultiPoly {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut mm = *m;
                mm.0[i] = e - 1;
                out.push((mm, c * &Rational::from_int(e as i64)));
            }
        }
        MultiPoly { terms: out }
    }

    /// Euler operator `Σ xⁱ∂ᵢ`: scales each term by its degree.
    pub fn euler(&self) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let d = m.degree();
            if d > 0 {
                out.push((*m, c * &Rational::from_int(d as i64)));
            }
        }
        MultiPoly { terms: out }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lm, lc) = d.leading().expect("division by zero polynomial").clone();
        if d.len() == 1 {
            let inv = lc.recip();
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.div(&lm)?, c * &inv));
            }
            return Some(MultiPoly { terms: out });
        }
        let inv = lc.recip();
        let mut rem: BTreeMap<Mono, Rational> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(&lm)?;
            let qc = &c * &inv;
            for (dm, dc) in &d.terms[..d.terms.len() - 1] {
                let key = dm.mul(&qm);
                let v = &qc * dc;
                match rem.get_mut(&key) {
                    Some(x) => {
                        *x -= &v;
                        if x.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -v);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(MultiPoly::from_terms(quot))
    }

    /// Substitutes `vars[i] ↦ images[i]` for every variable.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        let mut cache: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one()]; images.len()];
        let mut acc: BTreeMap<Mono, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().mul(img);
                    cache[i].push(next);
                }
                term = term.mul(&cache[i][e]);
            }
            for (tm, tc) in term.terms {
                acc.entry(tm).and_modify(|v| *v += &tc).or_insert(tc);
            }
        }
        MultiPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.0[i] as u32;
                if e > 0 {
                    v = &v * &x.pow(e);
                }
            }
            acc += &v;
        }
        acc
    }

    /// Leading coefficient, or zero.
    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Canonical rendering: terms in descending order, explicit signs.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0;
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_mono(m, names);
            match (a.is_one(), mono.is_empty()) {
                (true, true) => s.push('1'),
                (true, false) => s.push_str(&mono),
                (false, true) => {
                    let _ = write!(s, "{a}");
                }
                (false, false) => {
                    let _ = write!(s, "{a}*{mono}");
                }
            }
        }
        s
    }
}

impl MultiPoly {
    /// Parses a sum of terms `c*v^e*…` over the given variable names.
    pub fn parse(src: &str, names: &[String]) -> Option<MultiPoly> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return None;
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'*' {
                pieces.push(&s[start..i]);
                start = i;
            }
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let (neg, body) = match piece.as_bytes()[0] {
                b'-' => (true, &piece[1..]),
                b'+' => (false, &piece[1..]),
                _ => (false, piece),
            };
            let mut c = Rational::one();
            let mut m = Mono::one();
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u8>().ok()?),
                    None => (factor, 1),
                };
                if let Some(i) = names.iter().position(|n| n == base) {
                    m.0[i] = m.0[i].checked_add(exp)?;
                } else {
                    c = &c * &Rational::parse(base)?.pow(exp as u32);
                }
            }
            terms.push((m, if neg { -c } else { c }));
        }
        Some(MultiPoly::from_terms(terms))
    }
}

pub(crate) fn render_mono(m: &Mono, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

impl std::fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (0..MAX_VARS).map(|i| format!("v{i}")).collect();
        write!(f, "{}", self.render(&names))
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn grlex_puts_last_variable_highest() {
        assert!(Mono::var(0) < Mono::var(1));
        assert!(Mono::var(2) < Mono::from_exps(&[2]));
        assert!(Mono::from_exps(&[2, 0]) < Mono::from_exps(&[0, 2]));
    }

    #[test]
    fn division_round_trip() {
        let x = MultiPoly::var(0);
        let y = MultiPoly::var(1);
        let d = x.mul(&y).scale(&r(2)).add(&x.mul(&x));
        let f = d.mul(&y.add(&MultiPoly::constant(r(3))));
        assert_eq!(f.div_exact(&d).unwrap(), y.add(&MultiPoly::constant(r(3))));
        assert!(f.add(&MultiPoly::one()).div_exact(&d).is_none());
    }

    #[test]
    fn substitute_and_render() {
        let x = MultiPoly::var(0);
        let p = x.mul(&x).sub(&MultiPoly::constant(r(1)));
        let q = p.substitute(&[x.add(&MultiPoly::one())]);
        let names = vec!["x".to_string()];
        assert_eq!(q.render(&names), "x^2 + 2*x");
    }

    #[test]
    fn divisors_and_binomials() {
        let a = Mono::from_exps(&[2, 1]);
        assert_eq!(a.divisors().len(), 6);
        assert_eq!(a.binomial(&Mono::from_exps(&[1, 1])), r(2));
        assert_eq!(Mono::all_up_to_degree(3, 2).len(), 10);
    }
}
