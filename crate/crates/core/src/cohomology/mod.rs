//! Truncated Poisson cohomology over ℚ or over an algebra `A` of scalars.
//!
//! Cochains are multivectors with polynomial coefficients. For a structure
//! homogeneous of coefficient degree `r` the differential maps weight `w`
//! to weight `w + r − 1`, so each `(p, w)` block is finite and exact.
//! `A`-scalar blocks are stored as real matrices `dim A` times larger.

mod cache;
mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::poisson::{Homogeneity, Multivector, PoissonStructure};
use crate::poly::{Monomial, Polynomial};
use crate::prolong::prolong_poisson_unchecked;
use crate::rational::Rational;
use crate::ring::{Rationals, Ring};
use crate::weil_algebra::WeilAlgebra;

pub(crate) use report::align;
pub use report::{
    betti, capped_betti, casimir_basis, prolonged_cohomology, scalar_extension_compare,
    verify_d_squared, BettiCell, BettiReport, CappedCell, CappedReport, ComparisonCell,
    ComparisonReport, Residual, Total,
};

/// Sign convention of the Chevalley–Eilenberg sum.
///
/// `Standard` is `Σ (−1)^{i−1} {f_i, Ω(…f̂_i…)} + Σ_{i<j} (−1)^{i+j} Ω({f_i,f_j}, …)`.
/// `PaperTau` uses the representation `f ↦ −{f, ·}` with first-sum sign
/// `(−1)^i`, and pairs the second sum accordingly; it equals `−Standard`,
/// so the two complexes have the same cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    #[default]
    Standard,
    PaperTau,
}

impl SignMode {
    pub const ALL: [SignMode; 2] = [SignMode::Standard, SignMode::PaperTau];

    pub fn name(&self) -> &'static str {
        match self {
            SignMode::Standard => "standard",
            SignMode::PaperTau => "paper_tau",
        }
    }
}

impl fmt::Display for SignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficient scalars of the cochains.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalars {
    Real,
    Algebra(WeilAlgebra),
}

impl Scalars {
    pub fn dim(&self) -> usize {
        match self {
            Scalars::Real => 1,
            Scalars::Algebra(a) => a.dim(),
        }
    }

    /// `"R"` or `"A"`.
    pub fn label(&self) -> &'static str {
        match self {
            Scalars::Real => "R",
            Scalars::Algebra(_) => "A",
        }
    }
}

/// A truncated complex: structure, scalars, and the `(p, weight)` window.
#[derive(Debug, Clone)]
pub struct ComplexSpec {
    pub name: String,
    pub pi: PoissonStructure<Rationals>,
    pub scalars: Scalars,
    pub p_range: RangeInclusive<usize>,
    pub weight_range: RangeInclusive<u32>,
    pub sign_mode: SignMode,
}

impl ComplexSpec {
    pub fn new(
        name: impl Into<String>,
        pi: PoissonStructure<Rationals>,
        scalars: Scalars,
        p_range: RangeInclusive<usize>,
        weight_range: RangeInclusive<u32>,
        sign_mode: SignMode,
    ) -> Result<Self> {
        if *p_range.end() > pi.n() {
            return Err(Error::IndexOutOfRange {
                index: *p_range.end(),
                bound: pi.n() + 1,
            });
        }
        Ok(ComplexSpec {
            name: name.into(),
            pi,
            scalars,
            p_range,
            weight_range,
            sign_mode,
        })
    }

    pub fn n(&self) -> usize {
        self.pi.n()
    }

    /// Degree `r` of the weight shift, or an error for inhomogeneous `π`.
    pub fn grading_degree(&self) -> Result<u32> {
        grading_degree(&self.pi)
    }

    pub fn differential_block(&self, p: usize, weight: u32) -> Result<BoundaryBlock> {
        let r = self.grading_degree()?;
        Ok(block_for(&self.pi, &self.scalars, self.sign_mode, p, weight, r))
    }
}

pub(crate) fn grading_degree(pi: &PoissonStructure<Rationals>) -> Result<u32> {
    match pi.homogeneity() {
        Homogeneity::Inhomogeneous { min, max } => Err(Error::InhomogeneousStructure {
            min: min as usize,
            max: max as usize,
        }),
        h => Ok(h.grading_degree().expect("homogeneous")),
    }
}

/// `e_α · x^m ∂_{i_1} ∧ … ∧ ∂_{i_p}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub indices: Vec<usize>,
    pub monomial: Monomial,
    pub scalar: usize,
}

impl BasisElement {
    pub fn weight(&self) -> u32 {
        self.monomial.degree()
    }

    pub fn to_multivector<R: Ring>(&self, ring: &R) -> Multivector<R> {
        let n = self.monomial.num_vars();
        let mut mv = Multivector::zero(ring.clone(), n, self.indices.len());
        let coeff = Polynomial::monomial(ring.clone(), self.monomial.clone(), ring.real_basis(self.scalar));
        mv.add_component(&self.indices, coeff);
        mv
    }

    /// E.g. `t x1^2 d1^d3`; scalar labels are omitted for ℚ.
    pub fn describe(&self, scalar_labels: Option<&[String]>) -> String {
        let m = Polynomial::monomial(Rationals, self.monomial.clone(), Rational::from_integer(1.into()));
        let mut parts = Vec::new();
        if let Some(labels) = scalar_labels {
            if self.scalar != 0 || self.monomial.degree() == 0 {
                parts.push(labels[self.scalar].clone());
            }
        }
        if self.monomial.degree() > 0 || parts.is_empty() {
            parts.push(m.to_string());
        }
        if !self.indices.is_empty() {
            let wedge: Vec<String> = self.indices.iter().map(|i| format!("d{}", i + 1)).collect();
            parts.push(wedge.join("^"));
        }
        parts.join(" ")
    }
}

/// Increasing `p`-tuples from `0..n` in lexicographic order.
pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - left {
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// Basis of `p`-cochains of the given weight: directions outermost, then
/// monomials in ascending order, then the scalar basis.
pub fn cochain_basis(n: usize, p: usize, weight: u32, scalar_dim: usize) -> Vec<BasisElement> {
    let monomials = Monomial::all_of_degree(n, weight);
    let mut out = Vec::new();
    for indices in combinations(n, p) {
        for m in &monomials {
            for scalar in 0..scalar_dim {
                out.push(BasisElement {
                    indices: indices.clone(),
                    monomial: m.clone(),
                    scalar,
                });
            }
        }
    }
    out
}

/// One block `d: C^p_w → C^{p+1}_{w+r−1}` with its row and column bases.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryBlock {
    pub p: usize,
    pub weight_in: u32,
    /// `None` when `w + r − 1 < 0`; the target space is then empty.
    pub weight_out: Option<u32>,
    pub matrix: SparseMatrix,
    pub rows: Vec<BasisElement>,
    pub cols: Vec<BasisElement>,
}

/// The literal Chevalley–Eilenberg sum on `p + 1` arguments.
///
/// `rho(f, v)` is the action `{f, v}` of an argument on a cochain value,
/// `bracket` the bracket of two arguments, and `omega` the cochain itself.
pub fn ce_formula<F, S: Ring>(
    mode: SignMode,
    args: &[F],
    zero: Polynomial<S>,
    rho: impl Fn(&F, &Polynomial<S>) -> Polynomial<S>,
    bracket: impl Fn(&F, &F) -> F,
    omega: impl Fn(&[&F]) -> Polynomial<S>,
) -> Polynomial<S> {
    let k = args.len();
    let mut acc = zero;
    for i in 0..k {
        let rest: Vec<&F> = args.iter().enumerate().filter(|(t, _)| *t != i).map(|(_, a)| a).collect();
        let v = omega(&rest);
        if v.is_zero() {
            continue;
        }
        let term = rho(&args[i], &v);
        acc = if i % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    for i in 0..k {
        for j in i + 1..k {
            let b = bracket(&args[i], &args[j]);
            let mut list: Vec<&F> = vec![&b];
            list.extend(args.iter().enumerate().filter(|(t, _)| *t != i && *t != j).map(|(_, a)| a));
            let term = omega(&list);
            acc = if (i + j) % 2 == 0 { &acc + &term } else { &acc - &term };
        }
    }
    match mode {
        SignMode::Standard => acc,
        SignMode::PaperTau => -acc,
    }
}

/// `(dΩ)(f_1, …, f_{p+1})` evaluated literally with `ρ(f) = {f, ·}`.
pub fn ce_eval<R: Ring>(
    pi: &PoissonStructure<R>,
    omega: &Multivector<R>,
    args: &[Polynomial<R>],
    mode: SignMode,
) -> Result<Polynomial<R>> {
    if args.len() != omega.degree() + 1 {
        return Err(Error::ArityMismatch {
            expected: omega.degree() + 1,
            found: args.len(),
        });
    }
    for a in args {
        if a.num_vars() != pi.n() {
            return Err(Error::VariableCountMismatch {
                left: pi.n(),
                right: a.num_vars(),
            });
        }
    }
    Ok(ce_formula(
        mode,
        args,
        Polynomial::zero(pi.ring().clone(), pi.n()),
        |f, v| pi.bracket_unchecked(f, v),
        |f, g| pi.bracket_unchecked(f, g),
        |list| {
            let owned: Vec<Polynomial<R>> = list.iter().map(|p| (*p).clone()).collect();
            omega.eval_unchecked(&owned)
        },
    ))
}

/// The differential as a multivector, from coordinate evaluations
/// `(dΩ)^J = (dΩ)(x_{j_1}, …, x_{j_{p+1}})`.
pub fn differential<R: Ring>(
    pi: &PoissonStructure<R>,
    omega: &Multivector<R>,
    mode: SignMode,
) -> Multivector<R> {
    let n = pi.n();
    let p = omega.degree();
    let ring = pi.ring().clone();
    if p + 1 > n {
        return Multivector::zero(ring, n, p);
    }
    let mut out = Multivector::zero(ring.clone(), n, p + 1);
    for j in combinations(n, p + 1) {
        let args: Vec<Polynomial<R>> = j.iter().map(|&i| Polynomial::var(ring.clone(), n, i)).collect();
        let value = ce_formula(
            mode,
            &args,
            Polynomial::zero(ring.clone(), n),
            |f, v| pi.bracket_unchecked(f, v),
            |f, g| pi.bracket_unchecked(f, g),
            |list| {
                let owned: Vec<Polynomial<R>> = list.iter().map(|p| (*p).clone()).collect();
                omega.eval_unchecked(&owned)
            },
        );
        if !value.is_zero() {
            out.add_component(&j, value);
        }
    }
    out
}

/// Matrix of `d` from the cochains of the given source weights into those of
/// the target weights. Output outside the target space is a logic error.
fn assemble<R: Ring>(
    pi: &PoissonStructure<R>,
    p: usize,
    cols: &[BasisElement],
    rows: &[BasisElement],
    mode: SignMode,
) -> SparseMatrix {
    use rayon::prelude::*;
    let ring = pi.ring();
    let index: BTreeMap<&BasisElement, usize> = rows.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let columns: Vec<Vec<(usize, Rational)>> = cols
        .par_iter()
        .map(|b| {
            debug_assert_eq!(b.indices.len(), p);
            let d = differential(pi, &b.to_multivector(ring), mode);
            let mut col = Vec::new();
            for (j, poly) in d.components() {
                for (m, c) in poly.terms() {
                    for (scalar, q) in ring.real_coords(c).into_iter().enumerate() {
                        if num_traits::Zero::is_zero(&q) {
                            continue;
                        }
                        let key = BasisElement {
                            indices: j.clone(),
                            monomial: m.clone(),
                            scalar,
                        };
                        let row = *index
                            .get(&key)
                            .unwrap_or_else(|| panic!("differential left the target space at {key:?}"));
                        col.push((row, q));
                    }
                }
            }
            col
        })
        .collect();
    SparseMatrix::from_columns(rows.len(), columns)
}

/// Dispatches to `ℚ` or `A` scalars; `π` is prolonged for the latter.
pub(crate) fn assemble_for(
    pi: &PoissonStructure<Rationals>,
    scalars: &Scalars,
    p: usize,
    cols: &[BasisElement],
    rows: &[BasisElement],
    mode: SignMode,
) -> SparseMatrix {
    match scalars {
        Scalars::Real => assemble(pi, p, cols, rows, mode),
        Scalars::Algebra(a) => assemble(&prolong_poisson_unchecked(pi, a), p, cols, rows, mode),
    }
}

pub(crate) fn target_weight(weight: u32, r: u32) -> Option<u32> {
    (weight + r).checked_sub(1)
}

pub(crate) fn block_for(
    pi: &PoissonStructure<Rationals>,
    scalars: &Scalars,
    mode: SignMode,
    p: usize,
    weight: u32,
    r: u32,
) -> BoundaryBlock {
    let n = pi.n();
    let sd = scalars.dim();
    let cols = cochain_basis(n, p, weight, sd);
    let weight_out = target_weight(weight, r);
    let rows = match weight_out {
        Some(w) if p < n => cochain_basis(n, p + 1, w, sd),
        _ => Vec::new(),
    };
    let matrix = if rows.is_empty() || cols.is_empty() {
        SparseMatrix::zeros(rows.len(), cols.len())
    } else {
        let key = cache::BlockKey::new(pi, scalars, mode, p, weight);
        cache::cached(&key, || assemble_for(pi, scalars, p, &cols, &rows, mode))
    };
    BoundaryBlock {
        p,
        weight_in: weight,
        weight_out,
        matrix,
        rows,
        cols,
    }
}
