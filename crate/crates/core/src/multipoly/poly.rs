use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

use super::PolyError;
use crate::numerics::{float_to_decimal, BigComplex};

pub const MAX_ARITY: usize = 4;

/// Exponent vector, padded with zeros past the polynomial's arity.
///
/// Ordered graded-lex with the *largest* monomial first, so iterating a
/// `BTreeMap<Monomial, _>` yields terms in printing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u8; MAX_ARITY]);

impl Monomial {
    pub fn new(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_ARITY, "at most {MAX_ARITY} variables");
        let mut e = [0u8; MAX_ARITY];
        e[..exps.len()].copy_from_slice(exps);
        Monomial(e)
    }

    pub fn one() -> Self {
        Monomial([0; MAX_ARITY])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0u8; MAX_ARITY];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u8; MAX_ARITY] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Monomial(e)
    }

    pub fn with_exp(&self, i: usize, value: u8) -> Monomial {
        let mut e = self.0;
        e[i] = value;
        Monomial(e)
    }

    /// Text such as `x^2*z` using the given variable names; `"1"` for the
    /// constant monomial.
    pub fn render(&self, names: &[&str]) -> String {
        let parts: Vec<String> = names
            .iter()
            .enumerate()
            .filter(|(i, _)| self.0[*i] > 0)
            .map(|(i, n)| match self.0[i] {
                1 => n.to_string(),
                e => format!("{n}^{e}"),
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable names used when rendering polynomials of a given arity.
pub fn default_var_names(arity: usize) -> &'static [&'static str] {
    match arity {
        1 => &["v"],
        2 => &["u", "v"],
        3 => &["x", "z", "t"],
        _ => &["x", "y", "z", "t"],
    }
}

/// Sparse polynomial in up to four variables over [`BigComplex`].
///
/// Ring operations drop coefficients that are exactly zero; noise below a
/// tolerance is removed explicitly with [`MultiPoly::cleanup`].
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    arity: usize,
    prec: u32,
    terms: BTreeMap<Monomial, BigComplex>,
}

impl MultiPoly {
    pub fn zero(arity: usize, prec: u32) -> Self {
        assert!((1..=MAX_ARITY).contains(&arity), "arity must be 1..=4");
        MultiPoly {
            arity,
            prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: BigComplex) -> Self {
        let prec = c.prec();
        Self::from_terms(arity, prec, [(Monomial::one(), c)])
    }

    pub fn var(arity: usize, i: usize, prec: u32) -> Self {
        assert!(i < arity);
        Self::from_terms(arity, prec, [(Monomial::var(i), BigComplex::one(prec))])
    }

    pub fn from_terms(
        arity: usize,
        prec: u32,
        terms: impl IntoIterator<Item = (Monomial, BigComplex)>,
    ) -> Self {
        let mut p = Self::zero(arity, prec);
        for (m, c) in terms {
            debug_assert!(m.0[arity..].iter().all(|&e| e == 0));
            p.add_term(m, &c);
        }
        p
    }

    /// Linear form `sum coeffs[i] * var_i`.
    pub fn linear(coeffs: &[BigComplex]) -> Self {
        let prec = coeffs.iter().map(|c| c.prec()).max().unwrap_or(64);
        Self::from_terms(
            coeffs.len(),
            prec,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(i), c.clone())),
        )
    }

    /// Dense univariate polynomial from ascending coefficients.
    pub fn from_univariate(coeffs: &[BigComplex], prec: u32) -> Self {
        Self::from_terms(
            1,
            prec,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::new(&[k as u8]), c.clone())),
        )
    }

    /// Ascending coefficients of an arity-1 polynomial.
    pub fn univariate_coeffs(&self) -> Vec<BigComplex> {
        assert_eq!(self.arity, 1);
        let deg = self.terms.keys().map(|m| m.0[0]).max().unwrap_or(0) as usize;
        let mut out = vec![BigComplex::zero(self.prec); deg + 1];
        for (m, c) in &self.terms {
            out[m.0[0] as usize] = c.clone();
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: &BigComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        MultiPoly {
            arity: self.arity,
            prec,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.with_prec(prec)))
                .collect(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigComplex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigComplex {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| BigComplex::zero(self.prec))
    }

    pub fn coeff_of(&self, exps: &[u8]) -> BigComplex {
        self.coeff(&Monomial::new(exps))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var] as u32).max().unwrap_or(0)
    }

    /// Exact check on exponent tuples: every stored monomial has degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn max_abs_coeff(&self) -> Float {
        self.terms
            .values()
            .map(|c| c.abs())
            .fold(Float::with_val(self.prec, 0), |m, a| if a > m { a } else { m })
    }

    pub fn sum_abs_coeff(&self) -> Float {
        self.terms
            .values()
            .fold(Float::with_val(self.prec, 0), |acc, c| acc + c.abs())
    }

    /// Largest coefficientwise difference `max |self - other|`.
    pub fn max_coeff_diff(&self, other: &MultiPoly) -> Float {
        (self - other).max_abs_coeff()
    }

    /// Drops every coefficient with magnitude at most `rel_eps` times the
    /// largest coefficient magnitude.
    pub fn cleanup(&self, rel_eps: &Float) -> MultiPoly {
        let bound = Float::with_val(self.prec, self.max_abs_coeff() * rel_eps);
        MultiPoly {
            arity: self.arity,
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > bound)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigComplex) -> MultiPoly {
        Self::from_terms(self.arity, self.prec, self.terms.iter().map(|(m, c)| (*m, c * k)))
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.arity, BigComplex::one(self.prec));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        assert!(var < self.arity);
        Self::from_terms(
            self.arity,
            self.prec,
            self.terms.iter().filter(|(m, _)| m.0[var] > 0).map(|(m, c)| {
                let e = m.0[var];
                (m.with_exp(var, e - 1), c.scale_i64(e as i64))
            }),
        )
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.arity).map(|i| self.derivative(i)).collect()
    }

    /// Evaluates at `point`, Horner-nested one variable at a time.
    pub fn eval(&self, point: &[BigComplex]) -> Result<BigComplex, PolyError> {
        if point.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        let terms: Vec<(&Monomial, &BigComplex)> = self.terms.iter().collect();
        Ok(horner_nested(&terms, point, 0, self.prec))
    }

    /// Substitutes `images[i]` for variable `i`. All images share one arity,
    /// which becomes the arity of the result.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if images.len() != self.arity {
            return Err(PolyError::ArityMismatch {
                expected: self.arity,
                found: images.len(),
            });
        }
        let out_arity = images[0].arity;
        if let Some(bad) = images.iter().find(|im| im.arity != out_arity) {
            return Err(PolyError::ArityMismatch {
                expected: out_arity,
                found: bad.arity,
            });
        }
        let prec = images.iter().map(|im| im.prec).max().unwrap_or(self.prec).max(self.prec);
        let max_exp: Vec<u8> = (0..self.arity)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .zip(&max_exp)
            .map(|(im, &e)| {
                let mut v = vec![MultiPoly::constant(out_arity, BigComplex::one(prec))];
                for k in 1..=e as usize {
                    let next = &v[k - 1] * im;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiPoly::zero(out_arity, prec);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(out_arity, c.clone());
            for (i, pw) in powers.iter().enumerate() {
                let e = m.0[i] as usize;
                if e > 0 {
                    term = &term * &pw[e];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Sets variable `var` to zero.
    pub fn restrict_zero(&self, var: usize) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Re-indexes onto the variables `keep` (in that order), which must
    /// include every variable that occurs.
    pub fn project_vars(&self, keep: &[usize]) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(keep.len(), self.prec);
        for (m, c) in &self.terms {
            let dropped = (0..self.arity).any(|i| m.0[i] > 0 && !keep.contains(&i));
            if dropped {
                return Err(PolyError::VariableNotKept);
            }
            let exps: Vec<u8> = keep.iter().map(|&i| m.0[i]).collect();
            out.add_term(Monomial::new(&exps), c);
        }
        Ok(out)
    }

    /// Embeds into a larger ring, sending variable `i` to `positions[i]`.
    pub fn embed_vars(&self, arity: usize, positions: &[usize]) -> MultiPoly {
        assert_eq!(positions.len(), self.arity);
        let mut out = MultiPoly::zero(arity, self.prec);
        for (m, c) in &self.terms {
            let mut e = [0u8; MAX_ARITY];
            for (i, &p) in positions.iter().enumerate() {
                e[p] = m.0[i];
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Coefficients with respect to `var`: `self = sum_k out[k] * var^k`,
    /// each `out[k]` free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.arity, self.prec); deg + 1];
        for (m, c) in &self.terms {
            out[m.0[var] as usize].add_term(m.with_exp(var, 0), c);
        }
        out
    }

    pub fn render(&self) -> String {
        self.render_with(default_var_names(self.arity))
    }

    /// Canonical text in graded-lex order, e.g. `x^3 - 2*y*z*t + (1-3i)*t^3`.
    /// The output is accepted by the expression parser and reproduces the
    /// same coefficients bit for bit.
    pub fn render_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (negative, text, unit) = coeff_text(c);
            let body = if m.degree() == 0 {
                text
            } else if unit {
                m.render(names)
            } else {
                format!("{text}*{}", m.render(names))
            };
            match (k, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

fn coeff_text(c: &BigComplex) -> (bool, String, bool) {
    let re = c.re();
    let im = c.im();
    if im.is_zero() {
        let a = re.clone().abs();
        let unit = a == 1;
        (re.is_sign_negative(), float_to_decimal(&a), unit)
    } else if re.is_zero() {
        let a = im.clone().abs();
        (im.is_sign_negative(), format!("{}i", float_to_decimal(&a)), false)
    } else {
        let sign = if im.is_sign_negative() { '-' } else { '+' };
        let text = format!(
            "({}{sign}{}i)",
            float_to_decimal(re),
            float_to_decimal(&im.clone().abs())
        );
        (false, text, false)
    }
}

fn horner_nested(
    terms: &[(&Monomial, &BigComplex)],
    point: &[BigComplex],
    var: usize,
    prec: u32,
) -> BigComplex {
    if var == point.len() {
        let mut s = BigComplex::zero(prec);
        for (_, c) in terms {
            s += c;
        }
        return s;
    }
    let mut groups: BTreeMap<u8, Vec<(&Monomial, &BigComplex)>> = BTreeMap::new();
    for t in terms {
        groups.entry(t.0 .0[var]).or_default().push(*t);
    }
    let top = *groups.keys().next_back().unwrap_or(&0);
    let mut acc = BigComplex::zero(prec);
    for e in (0..=top).rev() {
        acc = &acc * &point[var];
        if let Some(g) = groups.get(&e) {
            acc += &horner_nested(g, point, var + 1, prec);
        }
    }
    acc
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = self.clone();
        out.prec = self.prec.max(rhs.prec);
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = self.clone();
        out.prec = self.prec.max(rhs.prec);
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let mut out = MultiPoly::zero(self.arity, self.prec.max(rhs.prec));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            prec: self.prec,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
