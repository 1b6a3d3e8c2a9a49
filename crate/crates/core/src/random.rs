//! Seeded generators for test inputs: small-integer polynomials of degree
//! at most 4, algebra elements, near points and multivectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poisson::Multivector;
use crate::poly::{APoly, Monomial, Polynomial, QPoly};
use crate::prolong::NearPoint;
use crate::rational::{frac, int, Rational};
use crate::ring::{Rationals, Ring};
use crate::weil_algebra::{AlgElement, WeilAlgebra};

/// 64-bit FNV-1a, used to derive independent streams from one seed.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    max_degree: u32,
    max_terms: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_degree: 4,
            max_terms: 4,
        }
    }

    /// A stream keyed by `(seed, tag)`, e.g. a claim id and instance name.
    pub fn stream(seed: u64, tag: &str) -> Self {
        Self::new(seed ^ fnv1a(tag.as_bytes()))
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn with_max_terms(mut self, t: usize) -> Self {
        self.max_terms = t.max(1);
        self
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn small_int(&mut self) -> i64 {
        self.rng.gen_range(-3..=3)
    }

    pub fn nonzero_int(&mut self) -> i64 {
        loop {
            let k = self.small_int();
            if k != 0 {
                return k;
            }
        }
    }

    /// A nonzero fraction `a/b` with `|a| ≤ 7`, `1 ≤ b ≤ 5`.
    pub fn lambda(&mut self) -> Rational {
        let mut a = 0;
        while a == 0 {
            a = self.rng.gen_range(-7..=7);
        }
        frac(a, self.rng.gen_range(1..=5))
    }

    pub fn monomial(&mut self, n: usize, max_degree: u32) -> Monomial {
        let deg = self.rng.gen_range(0..=max_degree);
        let mut e = vec![0u32; n];
        if n > 0 {
            for _ in 0..deg {
                e[self.below(n)] += 1;
            }
        }
        Monomial::new(e)
    }

    pub fn poly(&mut self, n: usize) -> QPoly {
        let d = self.max_degree;
        self.poly_deg(n, d)
    }

    pub fn poly_deg(&mut self, n: usize, max_degree: u32) -> QPoly {
        let terms = self.rng.gen_range(1..=self.max_terms);
        let mut p = QPoly::zero(Rationals, n);
        for _ in 0..terms {
            let m = self.monomial(n, max_degree);
            let c = int(self.nonzero_int());
            p.add_term(m, c);
        }
        p
    }

    pub fn element(&mut self, algebra: &WeilAlgebra) -> AlgElement {
        let coeffs = (0..algebra.dim()).map(|_| int(self.small_int())).collect();
        AlgElement::new(coeffs)
    }

    /// An element of the maximal ideal.
    pub fn nilpotent(&mut self, algebra: &WeilAlgebra) -> AlgElement {
        let mut a = self.element(algebra);
        a.coeffs[0] = int(0);
        a
    }

    pub fn apoly(&mut self, algebra: &WeilAlgebra, n: usize) -> APoly {
        let d = self.max_degree;
        self.apoly_deg(algebra, n, d)
    }

    pub fn apoly_deg(&mut self, algebra: &WeilAlgebra, n: usize, max_degree: u32) -> APoly {
        let terms = self.rng.gen_range(1..=self.max_terms);
        let mut p = APoly::zero(algebra.clone(), n);
        for _ in 0..terms {
            let m = self.monomial(n, max_degree);
            let c = self.element(algebra);
            p.add_term(m, c);
        }
        p
    }

    pub fn near_point(&mut self, algebra: &WeilAlgebra, n: usize) -> NearPoint {
        let coords = (0..n).map(|_| self.element(algebra)).collect();
        NearPoint::new(algebra.clone(), coords).expect("sampled coordinates have the algebra's dimension")
    }

    /// A degree-`p` multivector with up to `max_terms` components of the
    /// given coefficient degree bound.
    pub fn multivector<R: Ring>(
        &mut self,
        ring: &R,
        n: usize,
        p: usize,
        max_degree: u32,
        coeff: &mut dyn FnMut(&mut Self, u32) -> Polynomial<R>,
    ) -> Multivector<R> {
        let mut mv = Multivector::zero(ring.clone(), n, p);
        let terms = self.rng.gen_range(1..=self.max_terms);
        for _ in 0..terms {
            let mut idx: Vec<usize> = (0..n).collect();
            for k in 0..p {
                let j = k + self.below(n - k);
                idx.swap(k, j);
            }
            idx.truncate(p);
            let c = coeff(self, max_degree);
            mv.add_component(&idx, c);
        }
        mv
    }

    pub fn q_multivector(&mut self, n: usize, p: usize, max_degree: u32) -> Multivector<Rationals> {
        self.multivector(&Rationals, n, p, max_degree, &mut |s, d| s.poly_deg(n, d))
    }

    pub fn a_multivector(
        &mut self,
        algebra: &WeilAlgebra,
        n: usize,
        p: usize,
        max_degree: u32,
    ) -> Multivector<WeilAlgebra> {
        let a = algebra.clone();
        self.multivector(algebra, n, p, max_degree, &mut |s, d| s.apoly_deg(&a, n, d))
    }
}
