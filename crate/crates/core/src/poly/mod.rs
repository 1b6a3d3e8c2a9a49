//! Sparse multivariate polynomials over a [`Ring`].

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{Ring, Rationals};
use crate::weil_algebra::{AlgElement, WeilAlgebra};

/// Dense exponent vector. Ordered graded-lex: total degree first, then
/// lexicographically with `x1` most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials of total degree `deg` in `nvars` variables, ascending.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        if nvars == 0 {
            if deg == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        fill(nvars, deg, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

fn fill(parts: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if parts == 1 {
        prefix.push(total);
        out.push(Monomial(prefix.clone()));
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        fill(parts - 1, total - first, prefix, out);
        prefix.pop();
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `num_vars` variables with coefficients in `R`.
///
/// Zero coefficients are never stored, so structural equality is equality.
#[derive(Clone)]
pub struct Polynomial<R: Ring> {
    ring: R,
    nvars: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

pub type QPoly = Polynomial<Rationals>;
pub type APoly = Polynomial<WeilAlgebra>;

impl<R: Ring> PartialEq for Polynomial<R> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms && self.ring == other.ring
    }
}

impl<R: Ring> fmt::Debug for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.format_with(&|i| format!("x{}", i + 1)))
    }
}

impl<R: Ring> Polynomial<R> {
    pub fn zero(ring: R, nvars: usize) -> Self {
        Polynomial {
            ring,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: R, nvars: usize, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(ring: R, nvars: usize) -> Self {
        let c = ring.one();
        Self::constant(ring, nvars, c)
    }

    /// The coordinate `x_{i+1}` (0-based index).
    pub fn var(ring: R, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range {nvars}");
        let c = ring.one();
        let mut p = Self::zero(ring, nvars);
        p.add_term(Monomial::var(nvars, i), c);
        p
    }

    pub fn monomial(ring: R, m: Monomial, c: R::Elem) -> Self {
        let nvars = m.num_vars();
        let mut p = Self::zero(ring, nvars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(ring: R, nvars: usize, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let mut p = Self::zero(ring, nvars);
        for (m, c) in terms {
            assert_eq!(m.num_vars(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn homogeneous_component(&self, deg: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = self.ring.add(existing, &c);
                if self.ring.is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.add_ref(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.add_ref(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self.mul_ref(other))
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    fn neg_ref(&self) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.ring.mul(c1, c2));
            }
        }
        out
    }

    /// Multiplication by a ring element.
    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(c, a));
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.scale(q, a));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.nvars);
        for _ in 0..k {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Formal `∂/∂x_{i+1}` (0-based index).
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: self.nvars,
            });
        }
        Ok(self.d(i))
    }

    pub(crate) fn d(&self, i: usize) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(
                Monomial(exps),
                self.ring.scale(&Rational::from_integer(e.into()), c),
            );
        }
        out
    }

    /// Evaluates at a point with coordinates in the coefficient ring.
    pub fn eval(&self, point: &[R::Elem]) -> Result<R::Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let mut total = self.ring.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    term = self.ring.mul(&term, x);
                }
            }
            total = self.ring.add(&total, &term);
        }
        Ok(total)
    }

    /// Replaces every variable by the matching polynomial of `images`.
    pub fn substitute(&self, images: &[Polynomial<R>]) -> Result<Polynomial<R>> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let target_vars = images.first().map_or(0, |p| p.nvars);
        for img in images {
            if img.nvars != target_vars {
                return Err(Error::VariableCountMismatch {
                    left: target_vars,
                    right: img.nvars,
                });
            }
            if img.ring != self.ring {
                return Err(Error::RingMismatch);
            }
        }
        Ok(self.substitute_unchecked(images, target_vars))
    }

    /// Substitution from a partial assignment; every variable that occurs in
    /// `self` must be assigned.
    pub fn substitute_map(
        &self,
        assignment: &BTreeMap<usize, Polynomial<R>>,
        target_vars: usize,
    ) -> Result<Polynomial<R>> {
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !assignment.contains_key(&i) {
                    return Err(Error::MissingAssignment(i + 1));
                }
            }
        }
        let images: Vec<Polynomial<R>> = (0..self.nvars)
            .map(|i| {
                assignment
                    .get(&i)
                    .cloned()
                    .unwrap_or_else(|| Polynomial::zero(self.ring.clone(), target_vars))
            })
            .collect();
        self.substitute(&images)
    }

    fn substitute_unchecked(&self, images: &[Polynomial<R>], target_vars: usize) -> Polynomial<R> {
        let mut powers: Vec<Vec<Polynomial<R>>> = vec![Vec::new(); self.nvars];
        let mut out = Polynomial::zero(self.ring.clone(), target_vars);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(self.ring.clone(), target_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(Polynomial::one(self.ring.clone(), target_vars));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_ref(&images[i]);
                    cache.push(next);
                }
                term = term.mul_ref(&cache[e as usize]);
            }
            out = out.add_ref(&term);
        }
        out
    }

    /// Moves the polynomial to another ring coefficient-wise.
    pub fn map_coeffs<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> Polynomial<S> {
        let mut out = Polynomial::zero(target, self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `index(i)`.
    pub fn reindex(&self, nvars: usize, index: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zero(self.ring.clone(), nvars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; nvars];
            for (i, &e) in m.0.iter().enumerate() {
                exps[index(i)] += e;
            }
            out.add_term(Monomial(exps), c.clone());
        }
        out
    }

    /// Canonical text, highest graded-lex term first, with custom variable names.
    pub fn format_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono = format_monomial(m, name);
            let (sign, body) = match self.ring.as_rational(c) {
                Some(q) => {
                    let neg = q < Rational::from_integer(0.into());
                    let mag = if neg { -q } else { q };
                    let mag_text = crate::rational::format_rational(&mag);
                    let body = match (mono.is_empty(), mag_text == "1") {
                        (true, _) => mag_text,
                        (false, true) => mono,
                        (false, false) => format!("{mag_text} {mono}"),
                    };
                    (neg, body)
                }
                None => {
                    let (text, atomic) = self.ring.format_elem(c);
                    let coeff = if atomic { text } else { format!("({text})") };
                    let body = if mono.is_empty() {
                        coeff
                    } else {
                        format!("{coeff} {mono}")
                    };
                    (false, body)
                }
            };
            if out.is_empty() {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn format_monomial(m: &Monomial, name: &dyn Fn(usize) -> String) -> String {
    m.0.iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                name(i)
            } else {
                format!("{}^{}", name(i), e)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl<R: Ring> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&|i| format!("x{}", i + 1)))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:ident) => {
        impl<R: Ring> $trait<&Polynomial<R>> for &Polynomial<R> {
            type Output = Polynomial<R>;

            /// Panics on variable-count or ring mismatch; see the `try_` variants.
            fn $method(self, rhs: &Polynomial<R>) -> Polynomial<R> {
                self.$body(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl<R: Ring> $trait<Polynomial<R>> for Polynomial<R> {
            type Output = Polynomial<R>;

            fn $method(self, rhs: Polynomial<R>) -> Polynomial<R> {
                (&self).$method(&rhs)
            }
        }

        impl<R: Ring> $trait<&Polynomial<R>> for Polynomial<R> {
            type Output = Polynomial<R>;

            fn $method(self, rhs: &Polynomial<R>) -> Polynomial<R> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<R: Ring> Neg for &Polynomial<R> {
    type Output = Polynomial<R>;

    fn neg(self) -> Polynomial<R> {
        self.neg_ref()
    }
}

impl<R: Ring> Neg for Polynomial<R> {
    type Output = Polynomial<R>;

    fn neg(self) -> Polynomial<R> {
        self.neg_ref()
    }
}

impl QPoly {
    pub fn parse(text: &str, nvars: usize) -> Result<QPoly> {
        parse::parse_polynomial(text, nvars).map_err(Error::from)
    }

    /// Parses with as many variables as the highest index that occurs.
    pub fn parse_auto(text: &str) -> Result<QPoly> {
        let n = parse::max_variable(text).map_err(Error::from)?;
        Self::parse(text, n)
    }

    pub fn q_var(nvars: usize, i: usize) -> QPoly {
        Polynomial::var(Rationals, nvars, i)
    }

    pub fn q_const(nvars: usize, q: Rational) -> QPoly {
        Polynomial::constant(Rationals, nvars, q)
    }
}

/// Evaluates a rational polynomial at a point of `A^n` using `A`-arithmetic.
pub fn eval_at_algebra_point(p: &QPoly, algebra: &WeilAlgebra, point: &[AlgElement]) -> Result<AlgElement> {
    if point.len() != p.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: p.num_vars(),
            found: point.len(),
        });
    }
    for x in point {
        if x.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: x.len(),
            });
        }
    }
    let lifted = p.map_coeffs(algebra.clone(), |q| algebra.scalar(q.clone()));
    lifted.eval(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::weil_algebra::{make_algebra, AlgebraKind};

    fn p(s: &str, n: usize) -> QPoly {
        QPoly::parse(s, n).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x1 + x2", 2);
        let b = p("x1 - x2", 2);
        assert_eq!(&a * &b, p("x1^2 - x2^2", 2));
    }

    #[test]
    fn eps_squared_vanishes() {
        let d = make_algebra(&AlgebraKind::DualNumbers).unwrap();
        let ex = Polynomial::monomial(d.clone(), Monomial::var(1, 0), d.basis(1));
        assert!((&ex * &ex).is_zero());
    }

    #[test]
    fn additive_inverse_is_empty() {
        let a = p("3 x1^2 x2 - 1/2 x3 + 4", 3);
        let z = &a + &(-&a);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn mismatch_errors() {
        let a = p("x1", 1);
        let b = p("x1", 2);
        assert!(matches!(a.try_add(&b), Err(Error::VariableCountMismatch { .. })));
        let d = make_algebra(&AlgebraKind::DualNumbers).unwrap();
        let j = make_algebra(&AlgebraKind::Jet(2)).unwrap();
        let pd = Polynomial::one(d, 1);
        let pj = Polynomial::one(j, 1);
        assert!(matches!(pd.try_mul(&pj), Err(Error::RingMismatch)));
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(p("x1^2 x2", 2).partial_derivative(0).unwrap(), p("2 x1 x2", 2));
        assert!(p("x1^3", 2).partial_derivative(1).unwrap().is_zero());
        assert!(p("x1", 2).partial_derivative(2).is_err());
    }

    #[test]
    fn algebra_point_evaluation() {
        let d = make_algebra(&AlgebraKind::DualNumbers).unwrap();
        let x = d.element(vec![int(3), int(1)]).unwrap();
        let v = eval_at_algebra_point(&p("x1^2", 1), &d, &[x]).unwrap();
        assert_eq!(v, d.element(vec![int(9), int(6)]).unwrap());

        let j2 = make_algebra(&AlgebraKind::Jet(2)).unwrap();
        let v = eval_at_algebra_point(&p("x1 x2", 2), &j2, &[j2.basis(1), j2.basis(2)]).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn substitution_examples() {
        let q = p("x1^2", 2);
        let img = vec![p("x1 + x2", 2), p("x2", 2)];
        assert_eq!(q.substitute(&img).unwrap(), p("x1^2 + 2 x1 x2 + x2^2", 2));
        let f = p("x1^3 - 2 x1 x2 + 5", 2);
        let id = vec![p("x1", 2), p("x2", 2)];
        assert_eq!(f.substitute(&id).unwrap(), f);
        let mut partial = BTreeMap::new();
        partial.insert(0, p("x2", 2));
        assert!(matches!(
            p("x1 x2", 2).substitute_map(&partial, 2),
            Err(Error::MissingAssignment(2))
        ));
    }

    #[test]
    fn graded_lex_order_of_degree_two() {
        let ms = Monomial::all_of_degree(2, 2);
        assert_eq!(
            ms.iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(),
            vec![vec![0, 2], vec![1, 1], vec![2, 0]]
        );
    }
}
