//! Polynomial Poisson structures on ℝⁿ, vector fields and multivectors.
//!
//! A structure stores only the strictly upper triangle `π_ij = {x_i, x_j}`,
//! `i < j`, so skewness holds by construction. Jacobi is never assumed; it is
//! checked by [`PoissonStructure::validate_jacobi`].

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure<R: Ring> {
    ring: R,
    n: usize,
    /// Nonzero entries `(i, j) ↦ π_ij` with `i < j`, 0-based.
    entries: BTreeMap<(usize, usize), Polynomial<R>>,
}

/// Coefficient-degree profile of a structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Homogeneity {
    Zero,
    Homogeneous { degree: u32 },
    Inhomogeneous { min: u32, max: u32 },
}

impl Homogeneity {
    /// Degree shift of the weight grading, when it is exact. The zero
    /// structure is treated as degree 1 (weights are preserved).
    pub fn grading_degree(&self) -> Option<u32> {
        match self {
            Homogeneity::Zero => Some(1),
            Homogeneity::Homogeneous { degree } => Some(*degree),
            Homogeneity::Inhomogeneous { .. } => None,
        }
    }

    pub fn max_degree(&self) -> u32 {
        match self {
            Homogeneity::Zero => 0,
            Homogeneity::Homogeneous { degree } => *degree,
            Homogeneity::Inhomogeneous { max, .. } => *max,
        }
    }

    pub fn min_degree(&self) -> u32 {
        match self {
            Homogeneity::Zero => 0,
            Homogeneity::Homogeneous { degree } => *degree,
            Homogeneity::Inhomogeneous { min, .. } => *min,
        }
    }
}

/// Outcome of checking Jacobi on all coordinate triples.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiReport<R: Ring> {
    /// Nonzero defects `(i, j, k) ↦ J(x_i, x_j, x_k)`, `i < j < k`, 0-based.
    pub defects: Vec<((usize, usize, usize), Polynomial<R>)>,
}

impl<R: Ring> JacobiReport<R> {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn summary(&self) -> String {
        match self.defects.first() {
            None => "jacobi holds".into(),
            Some(((i, j, k), d)) => format!(
                "J(x{}, x{}, x{}) = {} ({} defective triples)",
                i + 1,
                j + 1,
                k + 1,
                d,
                self.defects.len()
            ),
        }
    }
}

impl<R: Ring> PoissonStructure<R> {
    pub fn zero(ring: R, n: usize) -> Self {
        PoissonStructure {
            ring,
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Builds from `(i, j, π_ij)` with 0-based `i ≠ j`; pairs given with
    /// `i > j` are stored as `π_ji = −π_ij`.
    pub fn from_entries(
        ring: R,
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, Polynomial<R>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ring, n);
        for (i, j, p) in entries {
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange {
                    index: i.max(j),
                    bound: n,
                });
            }
            if i == j {
                return Err(Error::Config(format!("diagonal bracket entry ({}, {})", i + 1, j + 1)));
            }
            if p.num_vars() != n {
                return Err(Error::VariableCountMismatch {
                    left: n,
                    right: p.num_vars(),
                });
            }
            if p.ring() != &out.ring {
                return Err(Error::RingMismatch);
            }
            let (key, val) = if i < j { ((i, j), p) } else { ((j, i), -p) };
            if out.entries.contains_key(&key) {
                return Err(Error::Config(format!(
                    "duplicate bracket entry ({}, {})",
                    key.0 + 1,
                    key.1 + 1
                )));
            }
            if !val.is_zero() {
                out.entries.insert(key, val);
            }
        }
        Ok(out)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `π_ij` for any `i, j`, using skewness.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial<R> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Polynomial::zero(self.ring.clone(), self.n),
            Less => self
                .entries
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| Polynomial::zero(self.ring.clone(), self.n)),
            Greater => -self.entry(j, i),
        }
    }

    /// Nonzero upper-triangle entries.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Polynomial<R>)> {
        self.entries.iter()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut min = u32::MAX;
        let mut max = 0;
        for p in self.entries.values() {
            min = min.min(p.min_degree().unwrap_or(0));
            max = max.max(p.degree().unwrap_or(0));
        }
        if self.entries.is_empty() {
            Homogeneity::Zero
        } else if min == max {
            Homogeneity::Homogeneous { degree: min }
        } else {
            Homogeneity::Inhomogeneous { min, max }
        }
    }

    fn check_poly(&self, f: &Polynomial<R>) -> Result<()> {
        if f.num_vars() != self.n {
            return Err(Error::VariableCountMismatch {
                left: self.n,
                right: f.num_vars(),
            });
        }
        if f.ring() != &self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// `{f, g} = Σ_{i<j} π_ij (∂_i f ∂_j g − ∂_j f ∂_i g)`.
    pub fn bracket(&self, f: &Polynomial<R>, g: &Polynomial<R>) -> Result<Polynomial<R>> {
        self.check_poly(f)?;
        self.check_poly(g)?;
        Ok(self.bracket_unchecked(f, g))
    }

    pub(crate) fn bracket_unchecked(&self, f: &Polynomial<R>, g: &Polynomial<R>) -> Polynomial<R> {
        let df: Vec<_> = (0..self.n).map(|i| f.d(i)).collect();
        let dg: Vec<_> = (0..self.n).map(|i| g.d(i)).collect();
        let mut out = Polynomial::zero(self.ring.clone(), self.n);
        for ((i, j), pij) in &self.entries {
            let inner = &(&df[*i] * &dg[*j]) - &(&df[*j] * &dg[*i]);
            if !inner.is_zero() {
                out = &out + &(pij * &inner);
            }
        }
        out
    }

    /// `ad(f)` as the vector field with components `{f, x_j}`.
    pub fn hamiltonian_field(&self, f: &Polynomial<R>) -> Result<VectorField<R>> {
        self.check_poly(f)?;
        let components = (0..self.n)
            .map(|j| {
                let xj = Polynomial::var(self.ring.clone(), self.n, j);
                self.bracket_unchecked(f, &xj)
            })
            .collect();
        Ok(VectorField { components })
    }

    /// `{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`.
    pub fn jacobi_defect(
        &self,
        f: &Polynomial<R>,
        g: &Polynomial<R>,
        h: &Polynomial<R>,
    ) -> Result<Polynomial<R>> {
        for p in [f, g, h] {
            self.check_poly(p)?;
        }
        let b = |a: &Polynomial<R>, c: &Polynomial<R>| self.bracket_unchecked(a, c);
        Ok(&(&b(f, &b(g, h)) + &b(g, &b(h, f))) + &b(h, &b(f, g)))
    }

    /// Jacobi on all coordinate triples, which suffices for polynomial π.
    pub fn validate_jacobi(&self) -> JacobiReport<R> {
        let x = |i| Polynomial::var(self.ring.clone(), self.n, i);
        let mut defects = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    let d = self
                        .jacobi_defect(&x(i), &x(j), &x(k))
                        .expect("coordinates match the structure");
                    if !d.is_zero() {
                        defects.push(((i, j, k), d));
                    }
                }
            }
        }
        JacobiReport { defects }
    }

    pub fn require_jacobi(&self) -> Result<()> {
        let report = self.validate_jacobi();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidPoisson(report.summary()))
        }
    }

    /// π as the bivector `Σ_{i<j} π_ij ∂_i ∧ ∂_j`.
    pub fn as_bivector(&self) -> Multivector<R> {
        let mut mv = Multivector::zero(self.ring.clone(), self.n, 2);
        for ((i, j), p) in &self.entries {
            mv.add_component(&[*i, *j], p.clone());
        }
        mv
    }

    /// Applies `f` to every entry, landing in another coefficient ring.
    pub fn map_entries<S: Ring>(
        &self,
        ring: S,
        f: impl Fn(&Polynomial<R>) -> Polynomial<S>,
    ) -> PoissonStructure<S> {
        PoissonStructure {
            ring,
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|(k, p)| (*k, f(p)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// Bracket table with custom variable names.
    pub fn format_with(&self, name: &dyn Fn(usize) -> String) -> String {
        let mut lines = Vec::new();
        for ((i, j), p) in &self.entries {
            lines.push(format!("{{{}, {}}} = {}", name(*i), name(*j), p.format_with(name)));
        }
        if lines.is_empty() {
            lines.push("(all brackets zero)".into());
        }
        lines.join("\n")
    }
}

impl<R: Ring> fmt::Display for PoissonStructure<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&|i| format!("x{}", i + 1)))
    }
}

/// `Σ_i X^i ∂/∂x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<R: Ring> {
    pub components: Vec<Polynomial<R>>,
}

impl<R: Ring> VectorField<R> {
    pub fn new(components: Vec<Polynomial<R>>) -> Self {
        VectorField { components }
    }

    /// `∂/∂x_i`.
    pub fn coordinate(ring: R, n: usize, i: usize) -> Self {
        let components = (0..n)
            .map(|j| {
                if i == j {
                    Polynomial::one(ring.clone(), n)
                } else {
                    Polynomial::zero(ring.clone(), n)
                }
            })
            .collect();
        VectorField { components }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn apply(&self, f: &Polynomial<R>) -> Polynomial<R> {
        let mut out = Polynomial::zero(f.ring().clone(), f.num_vars());
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.d(i);
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// `f · X`.
    pub fn scale_by(&self, f: &Polynomial<R>) -> Self {
        VectorField {
            components: self.components.iter().map(|c| f * c).collect(),
        }
    }

    pub fn to_multivector(&self) -> Multivector<R> {
        let ring = self.components[0].ring().clone();
        let n = self.n();
        let mut mv = Multivector::zero(ring, n, 1);
        for (i, c) in self.components.iter().enumerate() {
            mv.add_component(&[i], c.clone());
        }
        mv
    }
}

/// `[X, Y] = X∘Y − Y∘X`.
pub fn lie_bracket<R: Ring>(x: &VectorField<R>, y: &VectorField<R>) -> Result<VectorField<R>> {
    if x.n() != y.n() {
        return Err(Error::VariableCountMismatch {
            left: x.n(),
            right: y.n(),
        });
    }
    let components = (0..x.n())
        .map(|j| &x.apply(&y.components[j]) - &y.apply(&x.components[j]))
        .collect();
    Ok(VectorField { components })
}

/// A skew multiderivation `Σ_I Ω^I ∂_{i_1} ∧ … ∧ ∂_{i_p}` over increasing tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<R: Ring> {
    ring: R,
    n: usize,
    degree: usize,
    components: BTreeMap<Vec<usize>, Polynomial<R>>,
}

impl<R: Ring> Multivector<R> {
    pub fn zero(ring: R, n: usize, degree: usize) -> Self {
        assert!(degree <= n, "multivector degree {degree} exceeds dimension {n}");
        Multivector {
            ring,
            n,
            degree,
            components: BTreeMap::new(),
        }
    }

    pub fn function(f: Polynomial<R>) -> Self {
        let mut mv = Self::zero(f.ring().clone(), f.num_vars(), 0);
        mv.add_component(&[], f);
        mv
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial<R>)> {
        self.components.iter()
    }

    pub fn component(&self, indices: &[usize]) -> Polynomial<R> {
        self.components
            .get(indices)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.ring.clone(), self.n))
    }

    /// Adds `p · ∂_{indices}`; indices may be unsorted (the sign is tracked)
    /// and repeated indices contribute nothing.
    pub fn add_component(&mut self, indices: &[usize], p: Polynomial<R>) {
        assert_eq!(indices.len(), self.degree, "component arity");
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return;
        };
        let p = if sign < 0 { -p } else { p };
        let slot = self
            .components
            .entry(sorted.clone())
            .or_insert_with(|| Polynomial::zero(self.ring.clone(), self.n));
        *slot = &*slot + &p;
        if slot.is_zero() {
            self.components.remove(&sorted);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (k, p) in &other.components {
            out.add_component(k, p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Multivector {
            ring: self.ring.clone(),
            n: self.n,
            degree: self.degree,
            components: self.components.iter().map(|(k, p)| (k.clone(), -p)).collect(),
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.n, self.degree);
        for (k, p) in &self.components {
            out.add_component(k, p.scale(c));
        }
        out
    }

    /// `Ω(f_1, …, f_p) = Σ_I Ω^I det[∂_{i_a} f_b]`.
    pub fn eval(&self, args: &[Polynomial<R>]) -> Result<Polynomial<R>> {
        if args.len() != self.degree {
            return Err(Error::ArityMismatch {
                expected: self.degree,
                found: args.len(),
            });
        }
        for a in args {
            if a.num_vars() != self.n {
                return Err(Error::VariableCountMismatch {
                    left: self.n,
                    right: a.num_vars(),
                });
            }
        }
        Ok(self.eval_unchecked(args))
    }

    pub(crate) fn eval_unchecked(&self, args: &[Polynomial<R>]) -> Polynomial<R> {
        let grads: Vec<Vec<Polynomial<R>>> = args
            .iter()
            .map(|f| (0..self.n).map(|i| f.d(i)).collect())
            .collect();
        let mut out = Polynomial::zero(self.ring.clone(), self.n);
        for (idx, coeff) in &self.components {
            let det = determinant(idx, &grads, &self.ring, self.n);
            if !det.is_zero() {
                out = &out + &(coeff * &det);
            }
        }
        out
    }

    pub fn format_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.components.is_empty() {
            return "0".into();
        }
        self.components
            .iter()
            .map(|(k, p)| {
                let wedge: Vec<String> = k.iter().map(|i| format!("d/d{}", name(*i))).collect();
                if wedge.is_empty() {
                    p.format_with(name)
                } else {
                    format!("({}) {}", p.format_with(name), wedge.join("^"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<R: Ring> fmt::Display for Multivector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&|i| format!("x{}", i + 1)))
    }
}

/// Sorts `indices`, returning the permutation sign, or `None` on repeats.
pub(crate) fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            match v[j].cmp(&v[j + 1]) {
                std::cmp::Ordering::Greater => {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// `det[grads[b][rows[a]]]` by Laplace expansion along the first row.
fn determinant<R: Ring>(
    rows: &[usize],
    grads: &[Vec<Polynomial<R>>],
    ring: &R,
    n: usize,
) -> Polynomial<R> {
    fn rec<R: Ring>(
        rows: &[usize],
        cols: &mut Vec<usize>,
        grads: &[Vec<Polynomial<R>>],
        ring: &R,
        n: usize,
    ) -> Polynomial<R> {
        if rows.is_empty() {
            return Polynomial::one(ring.clone(), n);
        }
        let mut out = Polynomial::zero(ring.clone(), n);
        for pos in 0..cols.len() {
            let col = cols[pos];
            let entry = &grads[col][rows[0]];
            if entry.is_zero() {
                continue;
            }
            cols.remove(pos);
            let minor = rec(&rows[1..], cols, grads, ring, n);
            cols.insert(pos, col);
            if minor.is_zero() {
                continue;
            }
            let term = entry * &minor;
            out = if pos % 2 == 0 { &out + &term } else { &out - &term };
        }
        out
    }
    let mut cols: Vec<usize> = (0..grads.len()).collect();
    rec(rows, &mut cols, grads, ring, n)
}

/// Schouten–Nijenhuis bracket, written with odd variables `ξ_i = ∂_i`:
///
/// `[P, Q] = Σ_i (P ∂⃖/∂ξ_i)(∂Q/∂x_i) − (∂P/∂x_i)(∂⃗Q/∂ξ_i)`
///
/// with right and left odd derivatives.
pub fn schouten_bracket<R: Ring>(p: &Multivector<R>, q: &Multivector<R>) -> Result<Multivector<R>> {
    if p.n != q.n {
        return Err(Error::VariableCountMismatch {
            left: p.n,
            right: q.n,
        });
    }
    if p.degree + q.degree == 0 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: 0,
        });
    }
    let out_deg = p.degree + q.degree - 1;
    if out_deg > p.n {
        return Ok(Multivector::zero(p.ring.clone(), p.n, 0));
    }
    let mut out = Multivector::zero(p.ring.clone(), p.n, out_deg);
    for (pi, pc) in &p.components {
        for (qj, qc) in &q.components {
            for (k, &i) in pi.iter().enumerate() {
                let dq = qc.d(i);
                if dq.is_zero() {
                    continue;
                }
                let mut idx = pi.clone();
                idx.remove(k);
                idx.extend_from_slice(qj);
                let term = pc * &dq;
                let positive = (pi.len() - 1 - k) % 2 == 0;
                out.add_component(&idx, if positive { term } else { -term });
            }
            for (k, &i) in qj.iter().enumerate() {
                let dp = pc.d(i);
                if dp.is_zero() {
                    continue;
                }
                let mut idx = pi.clone();
                idx.extend(qj.iter().enumerate().filter(|(t, _)| *t != k).map(|(_, v)| *v));
                let term = &dp * qc;
                let positive = k % 2 == 1;
                out.add_component(&idx, if positive { term } else { -term });
            }
        }
    }
    Ok(out)
}

/// Standard instances used throughout tests and the checker.
pub mod instances {
    use super::PoissonStructure;
    use crate::poly::QPoly;
    use crate::rational::int;
    use crate::ring::Rationals;

    fn build(n: usize, entries: &[(usize, usize, &str)]) -> PoissonStructure<Rationals> {
        PoissonStructure::from_entries(
            Rationals,
            n,
            entries
                .iter()
                .map(|(i, j, s)| (i - 1, j - 1, QPoly::parse(s, n).expect("bundled polynomial"))),
        )
        .expect("bundled structure")
    }

    /// Canonical symplectic structure on ℝ^{2m}: `{x_i, x_{i+m}} = 1`.
    pub fn symplectic(m: usize) -> PoissonStructure<Rationals> {
        PoissonStructure::from_entries(
            Rationals,
            2 * m,
            (0..m).map(|i| (i, i + m, QPoly::q_const(2 * m, int(1)))),
        )
        .expect("symplectic structure")
    }

    /// Lie–Poisson structure of so(3)*: `{x1,x2} = x3, {x2,x3} = x1, {x1,x3} = −x2`.
    pub fn so3() -> PoissonStructure<Rationals> {
        build(3, &[(1, 2, "x3"), (2, 3, "x1"), (1, 3, "-x2")])
    }

    /// Heisenberg Lie–Poisson structure: `{x1, x2} = x3`, `x3` central.
    pub fn heisenberg() -> PoissonStructure<Rationals> {
        build(3, &[(1, 2, "x3")])
    }

    /// A constant, degenerate structure on ℝ³.
    pub fn constant3() -> PoissonStructure<Rationals> {
        build(3, &[(1, 2, "2"), (1, 3, "-1"), (2, 3, "3")])
    }

    pub fn zero(n: usize) -> PoissonStructure<Rationals> {
        PoissonStructure::zero(Rationals, n)
    }

    /// Skew but not Jacobi: `J(x1, x2, x3) = x1 + x2 + x3`.
    pub fn counterexample() -> PoissonStructure<Rationals> {
        build(3, &[(1, 2, "x1"), (2, 3, "x2"), (1, 3, "-x3")])
    }

    /// Inhomogeneous structure on ℝ²: `{x1, x2} = 1 + x1`.
    pub fn affine_plane() -> PoissonStructure<Rationals> {
        build(2, &[(1, 2, "1 + x1")])
    }
}
