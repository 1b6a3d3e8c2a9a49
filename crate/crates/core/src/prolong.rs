//! Prolongation of functions, maps, vector fields and Poisson brackets to
//! the bundle of near points `M^A`.
//!
//! Two function models are used. `Polynomial<WeilAlgebra>` in the original
//! `n` variables holds prolonged functions `f^A` and their `A`-combinations;
//! component expansion turns such a polynomial into `dim A` real polynomials
//! in the `N = n·dim A` coordinates `x_{iα}` of `M^A`, where
//! `X_i = Σ_α x_{iα} e_α`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poisson::{PoissonStructure, VectorField};
use crate::poly::{eval_at_algebra_point, APoly, QPoly};
use crate::rational::{format_rational, Rational};
use crate::ring::{Rationals, Ring};
use crate::weil_algebra::{make_algebra, AlgElement, AlgebraKind, LinearForm, WeilAlgebra};

/// A near point in chart form `(ξ(x_1), …, ξ(x_n))`.
#[derive(Debug, Clone, PartialEq)]
pub struct NearPoint {
    algebra: WeilAlgebra,
    coords: Vec<AlgElement>,
}

impl NearPoint {
    pub fn new(algebra: WeilAlgebra, coords: Vec<AlgElement>) -> Result<Self> {
        for c in &coords {
            if c.len() != algebra.dim() {
                return Err(Error::DimensionMismatch {
                    expected: algebra.dim(),
                    found: c.len(),
                });
            }
        }
        Ok(NearPoint { algebra, coords })
    }

    /// The near point of `x` of kind `A` with no infinitesimal part.
    pub fn real(algebra: WeilAlgebra, x: &[Rational]) -> Self {
        let coords = x.iter().map(|q| algebra.scalar(q.clone())).collect();
        NearPoint { algebra, coords }
    }

    pub fn algebra(&self) -> &WeilAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[AlgElement] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// The origin `π_M(ξ)`.
    pub fn base_point(&self) -> Vec<Rational> {
        self.coords.iter().map(|c| c.coeffs[0].clone()).collect()
    }

    /// Real coordinates `x_{iα}` in the fixed layout.
    pub fn real_coordinates(&self) -> Vec<Rational> {
        self.coords.iter().flat_map(|c| c.coeffs.iter().cloned()).collect()
    }

    /// `f^A(ξ) = ξ(f)`.
    pub fn eval(&self, f: &QPoly) -> Result<AlgElement> {
        near_point_eval(f, self)
    }

    /// Value of an `A`-polynomial at this point.
    pub fn eval_a(&self, f: &APoly) -> Result<AlgElement> {
        if f.ring() != &self.algebra {
            return Err(Error::RingMismatch);
        }
        f.eval(&self.coords)
    }
}

/// `ξ(f)` for a rational polynomial `f`.
pub fn near_point_eval(f: &QPoly, xi: &NearPoint) -> Result<AlgElement> {
    eval_at_algebra_point(f, &xi.algebra, &xi.coords)
}

/// Layout of the real coordinates of `M^A`: `(i, α) ↦ i·dim A + α`
/// (0-based), i.e. variable number `(i−1)·dim A + α + 1` for 1-based `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProlongedCoordinates {
    n: usize,
    dim: usize,
}

impl ProlongedCoordinates {
    pub fn new(n: usize, algebra: &WeilAlgebra) -> Self {
        ProlongedCoordinates {
            n,
            dim: algebra.dim(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vars(&self) -> usize {
        self.n * self.dim
    }

    pub fn index(&self, i: usize, alpha: usize) -> usize {
        debug_assert!(i < self.n && alpha < self.dim);
        i * self.dim + alpha
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        (index / self.dim, index % self.dim)
    }

    /// `x{i}{α}` with 1-based `i`; an underscore separates the two when
    /// either index has more than one digit.
    pub fn name(&self, index: usize) -> String {
        let (i, a) = self.pair(index);
        if self.n <= 9 && self.dim <= 10 {
            format!("x{}{}", i + 1, a)
        } else {
            format!("x{}_{}", i + 1, a)
        }
    }

    /// `X_i` as its component vector.
    pub fn coordinate(&self, i: usize) -> Vec<QPoly> {
        (0..self.dim)
            .map(|a| QPoly::q_var(self.num_vars(), self.index(i, a)))
            .collect()
    }
}

/// `f ↦ f^A`: coefficients are embedded as multiples of `1_A`.
pub fn prolong_function(f: &QPoly, algebra: &WeilAlgebra) -> APoly {
    f.map_coeffs(algebra.clone(), |q| algebra.scalar(q.clone()))
}

/// `h^A: (ℝⁿ)^A → (ℝᵐ)^A`, `[h^A(ξ)](g) = ξ(g ∘ h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProlongedMap {
    n: usize,
    components: Vec<QPoly>,
}

pub fn prolong_map(h: &[QPoly], n: usize) -> Result<ProlongedMap> {
    for c in h {
        if c.num_vars() != n {
            return Err(Error::VariableCountMismatch {
                left: n,
                right: c.num_vars(),
            });
        }
    }
    Ok(ProlongedMap {
        n,
        components: h.to_vec(),
    })
}

impl ProlongedMap {
    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn apply(&self, xi: &NearPoint) -> Result<NearPoint> {
        if xi.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: xi.n(),
            });
        }
        let coords = self
            .components
            .iter()
            .map(|c| near_point_eval(c, xi))
            .collect::<Result<_>>()?;
        Ok(NearPoint {
            algebra: xi.algebra.clone(),
            coords,
        })
    }
}

/// A validated algebra homomorphism `φ: A → B` and the induced `φ_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraMorphism {
    source: WeilAlgebra,
    target: WeilAlgebra,
    /// Column `α` holds `φ(e_α)` in the target basis.
    matrix: Matrix,
}

impl AlgebraMorphism {
    /// Fails with the first basis pair where multiplicativity breaks;
    /// `(0, 0)` also reports a unit that is not sent to the unit.
    pub fn new(source: WeilAlgebra, target: WeilAlgebra, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim() * source.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        let phi = AlgebraMorphism {
            source,
            target,
            matrix,
        };
        if phi.apply_unchecked(&phi.source.unit()) != phi.target.unit() {
            return Err(Error::NotAHomomorphism(0, 0));
        }
        let d = phi.source.dim();
        for a in 0..d {
            for b in a..d {
                let ea = phi.source.basis(a);
                let eb = phi.source.basis(b);
                let lhs = phi.apply_unchecked(&phi.source.mul_unchecked(&ea, &eb));
                let rhs = phi
                    .target
                    .mul_unchecked(&phi.apply_unchecked(&ea), &phi.apply_unchecked(&eb));
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(a, b));
                }
            }
        }
        Ok(phi)
    }

    /// The augmentation `A → ℝ`, inducing `π_M: M^A → M`.
    pub fn projection(source: WeilAlgebra) -> Self {
        let target = make_algebra(&AlgebraKind::Real).expect("real algebra");
        let mut matrix = Matrix::zeros(1, source.dim());
        matrix[(0, 0)] = Rational::from_integer(1.into());
        AlgebraMorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn source(&self) -> &WeilAlgebra {
        &self.source
    }

    pub fn target(&self) -> &WeilAlgebra {
        &self.target
    }

    fn apply_unchecked(&self, a: &AlgElement) -> AlgElement {
        let coeffs = (0..self.matrix.rows())
            .map(|r| {
                self.matrix
                    .row(r)
                    .iter()
                    .zip(&a.coeffs)
                    .map(|(m, x)| m * x)
                    .sum()
            })
            .collect();
        AlgElement::new(coeffs)
    }

    pub fn apply(&self, a: &AlgElement) -> Result<AlgElement> {
        if a.len() != self.source.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.source.dim(),
                found: a.len(),
            });
        }
        Ok(self.apply_unchecked(a))
    }

    /// `φ_M(ξ) = φ ∘ ξ`.
    pub fn apply_point(&self, xi: &NearPoint) -> Result<NearPoint> {
        if xi.algebra != self.source {
            return Err(Error::RingMismatch);
        }
        let coords = xi.coords.iter().map(|c| self.apply_unchecked(c)).collect();
        Ok(NearPoint {
            algebra: self.target.clone(),
            coords,
        })
    }
}

/// Product of two component vectors through the structure constants.
pub fn component_mul(algebra: &WeilAlgebra, x: &[QPoly], y: &[QPoly]) -> Vec<QPoly> {
    let d = algebra.dim();
    let nvars = x[0].num_vars();
    let mut out = vec![QPoly::zero(Rationals, nvars); d];
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            let consts = algebra.table().product_of_basis(a, b);
            if yb.is_zero() || consts.is_empty() {
                continue;
            }
            let prod = xa * yb;
            for (g, c) in consts {
                out[*g] = &out[*g] + &prod.scale_rational(c);
            }
        }
    }
    out
}

/// `σ`: the components in `A` of `F(X_1, …, X_n)` with `X_i = Σ_α x_{iα} e_α`,
/// as `dim A` rational polynomials in the `N` real coordinates.
pub fn expand_components(f: &APoly) -> Vec<QPoly> {
    let algebra = f.ring();
    let layout = ProlongedCoordinates::new(f.num_vars(), algebra);
    let nv = layout.num_vars();
    let d = algebra.dim();
    let mut out = vec![QPoly::zero(Rationals, nv); d];
    // powers[i][k] = X_i^k, grown on demand
    let mut powers: Vec<Vec<Vec<QPoly>>> = (0..f.num_vars())
        .map(|i| {
            let mut one = vec![QPoly::zero(Rationals, nv); d];
            one[0] = QPoly::q_const(nv, Rational::from_integer(1.into()));
            vec![one, layout.coordinate(i)]
        })
        .collect();
    for (m, c) in f.terms() {
        let mut acc: Vec<QPoly> = c
            .coeffs
            .iter()
            .map(|q| QPoly::q_const(nv, q.clone()))
            .collect();
        for (i, &e) in m.exponents().iter().enumerate() {
            let e = e as usize;
            while powers[i].len() <= e {
                let next = component_mul(algebra, powers[i].last().unwrap(), &powers[i][1]);
                powers[i].push(next);
            }
            if e > 0 {
                acc = component_mul(algebra, &acc, &powers[i][e]);
            }
        }
        for (o, a) in out.iter_mut().zip(&acc) {
            *o = &*o + a;
        }
    }
    out
}

/// Evaluates a component vector at a near point and reassembles the value in `A`.
pub fn eval_components(components: &[QPoly], xi: &NearPoint) -> Result<AlgElement> {
    let x = xi.real_coordinates();
    let coeffs = components.iter().map(|c| c.eval(&x)).collect::<Result<_>>()?;
    xi.algebra.element(coeffs)
}

/// An `A`-linear derivation of `Polynomial<A>`, fixed by its values on the `X_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ADerivation {
    pub images: Vec<APoly>,
}

impl ADerivation {
    pub fn apply(&self, f: &APoly) -> APoly {
        let mut out = APoly::zero(f.ring().clone(), f.num_vars());
        for (i, img) in self.images.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let d = f.d(i);
            if !d.is_zero() {
                out = &out + &(img * &d);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        ADerivation {
            images: self.images.iter().map(|p| -p).collect(),
        }
    }

    /// The real vector field on `ℝ^N`: `x_{iα} ↦ (X ↦ component α of X(X_i))`.
    pub fn real_form(&self) -> VectorField<Rationals> {
        let mut components = Vec::new();
        for img in &self.images {
            components.extend(expand_components(img));
        }
        VectorField::new(components)
    }
}

/// `θ^A`, sending `X_i` to `(θ_i)^A`.
pub fn prolong_vector_field(theta: &VectorField<Rationals>, algebra: &WeilAlgebra) -> ADerivation {
    ADerivation {
        images: theta
            .components
            .iter()
            .map(|c| prolong_function(c, algebra))
            .collect(),
    }
}

/// `{,}_A`: the structure with entries `(π_ij)^A`.
pub fn prolong_poisson(
    pi: &PoissonStructure<Rationals>,
    algebra: &WeilAlgebra,
) -> Result<PoissonStructure<WeilAlgebra>> {
    pi.require_jacobi()?;
    Ok(prolong_poisson_unchecked(pi, algebra))
}

pub(crate) fn prolong_poisson_unchecked(
    pi: &PoissonStructure<Rationals>,
    algebra: &WeilAlgebra,
) -> PoissonStructure<WeilAlgebra> {
    pi.map_entries(algebra.clone(), |p| prolong_function(p, algebra))
}

/// A Poisson structure together with its prolongation to `M^A`; the home
/// of `[ad f]^A~`, `τ` and `τ̃`.
#[derive(Debug, Clone)]
pub struct Prolongation {
    pi: PoissonStructure<Rationals>,
    algebra: WeilAlgebra,
    pi_a: PoissonStructure<WeilAlgebra>,
    /// `[ad x_i]^A~` for each coordinate.
    ad_coords: Vec<ADerivation>,
}

impl Prolongation {
    pub fn new(pi: &PoissonStructure<Rationals>, algebra: &WeilAlgebra) -> Result<Self> {
        pi.require_jacobi()?;
        Ok(Self::new_unchecked(pi, algebra))
    }

    /// Skips the Jacobi check; used to probe invalid structures.
    pub fn new_unchecked(pi: &PoissonStructure<Rationals>, algebra: &WeilAlgebra) -> Self {
        let pi_a = prolong_poisson_unchecked(pi, algebra);
        let ad_coords = (0..pi.n())
            .map(|i| {
                let h = pi
                    .hamiltonian_field(&QPoly::q_var(pi.n(), i))
                    .expect("coordinate function");
                prolong_vector_field(&h, algebra)
            })
            .collect();
        Prolongation {
            pi: pi.clone(),
            algebra: algebra.clone(),
            pi_a,
            ad_coords,
        }
    }

    pub fn base(&self) -> &PoissonStructure<Rationals> {
        &self.pi
    }

    pub fn algebra(&self) -> &WeilAlgebra {
        &self.algebra
    }

    pub fn structure(&self) -> &PoissonStructure<WeilAlgebra> {
        &self.pi_a
    }

    pub fn n(&self) -> usize {
        self.pi.n()
    }

    pub fn prolong(&self, f: &QPoly) -> APoly {
        prolong_function(f, &self.algebra)
    }

    fn check(&self, f: &APoly) -> Result<()> {
        if f.ring() != &self.algebra {
            return Err(Error::RingMismatch);
        }
        if f.num_vars() != self.n() {
            return Err(Error::VariableCountMismatch {
                left: self.n(),
                right: f.num_vars(),
            });
        }
        Ok(())
    }

    /// `{φ, ψ}_A` from the prolonged bracket table.
    pub fn bracket(&self, phi: &APoly, psi: &APoly) -> Result<APoly> {
        self.pi_a.bracket(phi, psi)
    }

    /// `[ad f]^A~`: the `A`-linear derivation with `X_i ↦ ({f, x_i})^A`.
    pub fn ad_prolonged(&self, f: &QPoly) -> Result<ADerivation> {
        let h = self.pi.hamiltonian_field(f)?;
        Ok(prolong_vector_field(&h, &self.algebra))
    }

    /// `τ(f) = −[ad f]^A~`.
    pub fn tau(&self, f: &QPoly) -> Result<ADerivation> {
        Ok(self.ad_prolonged(f)?.neg())
    }

    /// `τ̃_φ`: the `A`-linear derivation with `X_i ↦ −[ad x_i]^A~(φ)`.
    pub fn tau_tilde(&self, phi: &APoly) -> Result<ADerivation> {
        self.check(phi)?;
        Ok(ADerivation {
            images: self.ad_coords.iter().map(|ad| -ad.apply(phi)).collect(),
        })
    }

    /// `{φ, ψ}_A = τ̃_φ(ψ)`.
    pub fn tau_bracket(&self, phi: &APoly, psi: &APoly) -> Result<APoly> {
        self.check(psi)?;
        Ok(self.tau_tilde(phi)?.apply(psi))
    }
}

/// The real Poisson structure on `ℝ^N` induced by `π` and a linear form `p`
/// with nondegenerate Frobenius form `B(a, b) = p(ab)`:
///
/// `{x_{iα}, x_{jβ}} = Σ_γ p(a^α a^β e_γ) · σ_γ((π_ij)^A)`
///
/// where `a^α` is the `B`-dual basis. It is characterised by
/// `{⟨p, a f^A⟩, ⟨p, b g^A⟩} = ⟨p, ab {f,g}^A⟩`.
pub fn p_lift(
    pi: &PoissonStructure<Rationals>,
    algebra: &WeilAlgebra,
    p: &LinearForm,
) -> Result<PoissonStructure<Rationals>> {
    let form = algebra.frobenius_form(p)?;
    let Some(dual) = form.dual_basis else {
        let kernel = form.kernel.unwrap_or_default();
        return Err(Error::DegenerateForm(kernel.iter().map(format_rational).collect()));
    };
    let d = algebra.dim();
    let layout = ProlongedCoordinates::new(pi.n(), algebra);
    // t[α][β][γ] = p(a^α a^β e_γ)
    let t: Vec<Vec<Vec<Rational>>> = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| {
                    let ab = algebra.mul_unchecked(&dual[a], &dual[b]);
                    (0..d)
                        .map(|g| p.apply(&algebra.mul_unchecked(&ab, &algebra.basis(g))))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut entries = Vec::new();
    for ((i, j), pij) in pi.entries() {
        let comps = expand_components(&prolong_function(pij, algebra));
        for (a, ta) in t.iter().enumerate() {
            for (b, tab) in ta.iter().enumerate() {
                let mut acc = QPoly::zero(Rationals, layout.num_vars());
                for (c, coef) in comps.iter().zip(tab) {
                    if !c.is_zero() && !num_traits::Zero::is_zero(coef) {
                        acc = &acc + &c.scale_rational(coef);
                    }
                }
                if !acc.is_zero() {
                    entries.push((layout.index(*i, a), layout.index(*j, b), acc));
                }
            }
        }
    }
    PoissonStructure::from_entries(Rationals, layout.num_vars(), entries)
}

/// Prints a component vector with `x_{iα}` names.
pub fn format_components(components: &[QPoly], layout: &ProlongedCoordinates) -> String {
    let parts: Vec<String> = components
        .iter()
        .map(|c| c.format_with(&|k| layout.name(k)))
        .collect();
    format!("({})", parts.join(", "))
}

/// The `e_γ` coefficient of an `A`-polynomial, in the same variables.
pub fn coefficient_component(f: &APoly, gamma: usize) -> QPoly {
    f.map_coeffs(Rationals, |a| a.coeffs[gamma].clone())
}

/// Reassembles `Σ_γ c_γ e_γ` from rational component polynomials in the same variables.
pub fn from_coefficient_components(algebra: &WeilAlgebra, components: &[QPoly]) -> APoly {
    let nvars = components[0].num_vars();
    let mut out = APoly::zero(algebra.clone(), nvars);
    for (g, c) in components.iter().enumerate() {
        let eg = algebra.basis(g);
        out = &out + &c.map_coeffs(algebra.clone(), |q| Ring::scale(algebra, q, &eg));
    }
    out
}
