//! Coefficient rings for polynomials: the rationals, and Weil algebras.
//!
//! A ring value is a cheap-to-clone context; elements are plain data. This
//! keeps `Polynomial<R>` generic over both ℚ and an algebra `A` whose
//! multiplication needs the structure constants.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::rational::{format_rational, Rational};

pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn embed_rational(&self, q: &Rational) -> Self::Elem;
    /// `q · a` for a rational `q`.
    fn scale(&self, q: &Rational, a: &Self::Elem) -> Self::Elem;
    /// Text for a coefficient; `atomic` is true when it needs no parentheses.
    fn format_elem(&self, a: &Self::Elem) -> (String, bool);

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// The rational value of `a` when it lies in ℚ·1.
    fn as_rational(&self, a: &Self::Elem) -> Option<Rational>;

    /// Dimension over ℚ.
    fn real_dim(&self) -> usize;
    /// Coordinates of `a` in the ℚ-basis, `real_dim` entries.
    fn real_coords(&self, a: &Self::Elem) -> Vec<Rational>;
    fn real_basis(&self, i: usize) -> Self::Elem;
}

/// The field ℚ, standing in for ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }

    fn one(&self) -> Rational {
        Rational::one()
    }

    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn neg(&self, a: &Rational) -> Rational {
        -a
    }

    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }

    fn embed_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }

    fn scale(&self, q: &Rational, a: &Rational) -> Rational {
        q * a
    }

    fn real_dim(&self) -> usize {
        1
    }

    fn real_coords(&self, a: &Rational) -> Vec<Rational> {
        vec![a.clone()]
    }

    fn real_basis(&self, i: usize) -> Rational {
        assert_eq!(i, 0, "ℚ has a single basis element");
        Rational::one()
    }

    fn format_elem(&self, a: &Rational) -> (String, bool) {
        (format_rational(a), true)
    }

    fn is_one(&self, a: &Rational) -> bool {
        a.is_one()
    }

    fn as_rational(&self, a: &Rational) -> Option<Rational> {
        Some(a.clone())
    }
}
