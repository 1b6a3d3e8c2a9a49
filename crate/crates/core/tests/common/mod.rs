#![allow(dead_code)]

use proptest::prelude::*;
use weilbund::rational::int;
use weilbund::{make_algebra, AlgElement, AlgebraKind, APoly, Monomial, Polynomial, QPoly, Rationals, WeilAlgebra};

/// Sparse polynomials with coefficients in −3..=3 and total degree ≤ `max_degree`.
pub fn qpoly(n: usize, max_degree: u32) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_degree, n), -3i64..=3), 0..5).prop_map(
        move |terms| {
            let mut p = QPoly::zero(Rationals, n);
            for (mut e, c) in terms {
                while e.iter().sum::<u32>() > max_degree {
                    let k = e.iter().position(|x| *x > 0).unwrap();
                    e[k] -= 1;
                }
                p.add_term(Monomial::new(e), int(c));
            }
            p
        },
    )
}

pub fn element(dim: usize) -> impl Strategy<Value = AlgElement> {
    prop::collection::vec(-3i64..=3, dim).prop_map(|v| AlgElement::new(v.into_iter().map(int).collect()))
}

pub fn apoly(a: WeilAlgebra, n: usize, max_degree: u32) -> impl Strategy<Value = APoly> {
    let d = a.dim();
    prop::collection::vec((prop::collection::vec(0..=max_degree, n), element(d)), 0..4).prop_map(
        move |terms| {
            let mut p = Polynomial::zero(a.clone(), n);
            for (mut e, c) in terms {
                while e.iter().sum::<u32>() > max_degree {
                    let k = e.iter().position(|x| *x > 0).unwrap();
                    e[k] -= 1;
                }
                p.add_term(Monomial::new(e), c);
            }
            p
        },
    )
}

pub fn algebras() -> Vec<WeilAlgebra> {
    [
        AlgebraKind::Real,
        AlgebraKind::DualNumbers,
        AlgebraKind::Jet(3),
        AlgebraKind::TruncatedPoly { r: 2, k: 2 },
        AlgebraKind::Tensor(Box::new(AlgebraKind::DualNumbers), Box::new(AlgebraKind::Jet(2))),
    ]
    .iter()
    .map(|k| make_algebra(k).unwrap())
    .collect()
}

pub fn algebra() -> impl Strategy<Value = WeilAlgebra> {
    prop::sample::select(algebras())
}
