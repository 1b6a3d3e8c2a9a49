//! Weil algebras given by explicit rational structure constants.
//!
//! An algebra is stored as a sparse multiplication table on a basis
//! `e_0, …, e_{d-1}` with `e_0 = 1`. The maximal ideal is always the span of
//! `e_1, …, e_{d-1}`; tables that present it differently are rejected.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{format_rational, Rational};
use crate::ring::Ring;

/// Coordinates of an algebra element in the basis `e_0, …, e_{d-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgElement {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl AlgElement {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        AlgElement { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// A covector `p` on the algebra, `p(e_α) = coeffs[α]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    /// The coordinate functional `e_α*`.
    pub fn coordinate(dim: usize, alpha: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); dim];
        coeffs[alpha] = Rational::one();
        LinearForm { coeffs }
    }

    pub fn apply(&self, a: &AlgElement) -> Rational {
        self.coeffs
            .iter()
            .zip(&a.coeffs)
            .map(|(p, x)| p * x)
            .sum()
    }
}

/// A raw multiplication table, not yet known to define a Weil algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureTable {
    dim: usize,
    labels: Vec<String>,
    /// `products[α·dim + β]` lists `(γ, c)` with `e_α e_β = Σ c e_γ`, sorted by γ.
    products: Vec<Vec<(usize, Rational)>>,
}

impl StructureTable {
    pub fn zero(dim: usize) -> Self {
        StructureTable {
            dim,
            labels: default_labels(dim),
            products: vec![Vec::new(); dim * dim],
        }
    }

    /// Builds a table from `(α, β, γ, c)` entries; unlisted constants are zero.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut table = Self::zero(dim);
        for (a, b, g, c) in entries {
            for idx in [a, b, g] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, bound: dim });
                }
            }
            table.set(a, b, g, c);
        }
        Ok(table)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, a: usize, b: usize, g: usize) -> Rational {
        self.products[a * self.dim + b]
            .iter()
            .find(|(k, _)| *k == g)
            .map_or_else(Rational::zero, |(_, c)| c.clone())
    }

    pub fn set(&mut self, a: usize, b: usize, g: usize, c: Rational) {
        let slot = &mut self.products[a * self.dim + b];
        slot.retain(|(k, _)| *k != g);
        if !c.is_zero() {
            slot.push((g, c));
            slot.sort_by_key(|e| e.0);
        }
    }

    /// Nonzero entries in `(α, β, γ)` order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for b in 0..self.dim {
                for (g, c) in &self.products[a * self.dim + b] {
                    out.push((a, b, *g, c.clone()));
                }
            }
        }
        out
    }

    pub(crate) fn product_of_basis(&self, a: usize, b: usize) -> &[(usize, Rational)] {
        &self.products[a * self.dim + b]
    }

    fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        let ys: Vec<(usize, &Rational)> = y.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in &ys {
                let prods = self.product_of_basis(a, *b);
                if prods.is_empty() {
                    continue;
                }
                let xy = xa * *yb;
                for (g, c) in prods {
                    out[*g] += &xy * c;
                }
            }
        }
        out
    }

    /// The table with `i64` constants when every constant is an integer of
    /// magnitude below `2^31`.
    fn small_integer_products(&self) -> Option<Vec<Vec<(usize, i64)>>> {
        self.products
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(g, c)| {
                        let v = i64::try_from(c.numer()).ok().filter(|v| c.is_integer() && v.abs() < 1 << 31)?;
                        Some((*g, v))
                    })
                    .collect()
            })
            .collect()
    }

    fn basis_vec(&self, a: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[a] = Rational::one();
        v
    }

    /// Checks every Weil-algebra axiom and lists each violation.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim;
        let mut defects = Vec::new();
        if d == 0 {
            defects.push(Defect::EmptyAlgebra);
            return ValidationReport { defects };
        }
        for b in 0..d {
            let prod = self.mul(&self.basis_vec(0), &self.basis_vec(b));
            if prod != self.basis_vec(b) {
                defects.push(Defect::Unit {
                    index: b,
                    product: AlgElement::new(prod),
                });
            }
        }
        for a in 0..d {
            for b in a + 1..d {
                if self.product_of_basis(a, b) != self.product_of_basis(b, a) {
                    defects.push(Defect::Commutativity { pair: (a, b) });
                }
            }
        }
        let small = self.small_integer_products();
        let mut diff = vec![0i128; d];
        let mut touched = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for g in 0..d {
                    if let Some(p) = &small {
                        // Exact in i128; only unbalanced triples go on to ℚ.
                        for &(k, c) in &p[a * d + b] {
                            for &(h, c2) in &p[k * d + g] {
                                diff[h] += i128::from(c) * i128::from(c2);
                                touched.push(h);
                            }
                        }
                        for &(k, c) in &p[b * d + g] {
                            for &(h, c2) in &p[a * d + k] {
                                diff[h] -= i128::from(c) * i128::from(c2);
                                touched.push(h);
                            }
                        }
                        let mut balanced = true;
                        for &h in &touched {
                            balanced &= diff[h] == 0;
                            diff[h] = 0;
                        }
                        touched.clear();
                        if balanced {
                            continue;
                        }
                    }
                    // (e_a e_b) e_g − e_a (e_b e_g), accumulated sparsely
                    let mut terms: Vec<(usize, Rational)> = Vec::new();
                    for (k, c) in self.product_of_basis(a, b) {
                        for (h, c2) in self.product_of_basis(*k, g) {
                            terms.push((*h, c * c2));
                        }
                    }
                    for (k, c) in self.product_of_basis(b, g) {
                        for (h, c2) in self.product_of_basis(a, *k) {
                            terms.push((*h, -(c * c2)));
                        }
                    }
                    if terms.is_empty() {
                        continue;
                    }
                    terms.sort_unstable_by_key(|t| t.0);
                    let mut balanced = true;
                    for run in terms.chunk_by(|x, y| x.0 == y.0) {
                        if run.len() == 2 && run[0].1 == -run[1].1.clone() {
                            continue;
                        }
                        if !run.iter().fold(Rational::zero(), |acc, t| acc + &t.1).is_zero() {
                            balanced = false;
                            break;
                        }
                    }
                    if !balanced {
                        let mut residual: Vec<Rational> = vec![Rational::zero(); d];
                        for (h, c) in terms {
                            residual[h] += c;
                        }
                        defects.push(Defect::Associativity {
                            triple: (a, b, g),
                            residual: AlgElement::new(residual),
                        });
                    }
                }
            }
        }
        for a in 1..d {
            for b in 1..d {
                if !self.get(a, b, 0).is_zero() {
                    defects.push(Defect::IdealNotClosed { pair: (a, b) });
                }
            }
        }
        for a in 1..d {
            if nilpotency_exponent(self, &self.basis_vec(a)).is_none() {
                defects.push(Defect::NotNilpotent { index: a });
            }
        }
        if defects.is_empty() && ideal_powers(self).is_none() {
            defects.push(Defect::IdealNotNilpotent);
        }
        ValidationReport { defects }
    }
}

fn default_labels(dim: usize) -> Vec<String> {
    (0..dim)
        .map(|i| if i == 0 { "1".to_string() } else { format!("e{i}") })
        .collect()
}

/// Smallest `j ≥ 1` with `x^j = 0`, searching up to `dim + 1`.
fn nilpotency_exponent(table: &StructureTable, x: &[Rational]) -> Option<usize> {
    let mut power = x.to_vec();
    for j in 1..=table.dim + 1 {
        if power.iter().all(Zero::is_zero) {
            return Some(j);
        }
        power = table.mul(&power, x);
    }
    None
}

/// Bases of `m, m², …` down to the first zero power; `None` if the powers stall.
fn ideal_powers(table: &StructureTable) -> Option<Vec<Vec<AlgElement>>> {
    let d = table.dim;
    let mut filtration = Vec::new();
    let mut current: Vec<Vec<Rational>> = (1..d).map(|a| table.basis_vec(a)).collect();
    while !current.is_empty() {
        filtration.push(current.iter().cloned().map(AlgElement::new).collect::<Vec<_>>());
        let mut next = Echelon::new(d);
        let mut seen = HashSet::new();
        let sparse: Vec<Vec<(usize, &Rational)>> = current
            .iter()
            .map(|u| u.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        'spans: for u in &sparse {
            for b in 1..d {
                // u · e_b straight from the table rows
                let mut terms: Vec<(usize, Rational)> = Vec::new();
                for (a, ua) in u {
                    for (g, c) in table.product_of_basis(*a, b) {
                        terms.push((*g, *ua * c));
                    }
                }
                if terms.is_empty() {
                    continue;
                }
                terms.sort_unstable_by_key(|t| t.0);
                let mut v: Vec<(usize, Rational)> = Vec::with_capacity(terms.len());
                for (g, c) in terms {
                    match v.last_mut() {
                        Some((h, acc)) if *h == g => *acc += c,
                        _ => v.push((g, c)),
                    }
                }
                v.retain(|(_, c)| !c.is_zero());
                if v.is_empty() || !seen.insert(v.clone()) {
                    continue;
                }
                let mut dense = vec![Rational::zero(); d];
                for (g, c) in v {
                    dense[g] = c;
                }
                next.insert(dense);
                if next.rows.len() >= current.len() {
                    break 'spans;
                }
            }
        }
        if next.rows.len() >= current.len() {
            return None;
        }
        current = next.into_rref();
    }
    Some(filtration)
}

/// Row echelon basis grown one vector at a time; each stored row is sparse
/// and normalised to 1 at its pivot.
struct Echelon {
    dim: usize,
    rows: Vec<(usize, Vec<(usize, Rational)>)>,
}

impl Echelon {
    fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    fn insert(&mut self, mut v: Vec<Rational>) {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (k, r) in row {
                v[*k] -= &f * r;
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            let inv = v[pivot].recip();
            let row = v
                .into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k, x * &inv))
                .collect();
            self.rows.push((pivot, row));
        }
    }

    /// The reduced row echelon basis as dense rows ordered by pivot.
    fn into_rref(mut self) -> Vec<Vec<Rational>> {
        self.rows.sort_by_key(|(p, _)| *p);
        let mut dense: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|(_, row)| {
                let mut v = vec![Rational::zero(); self.dim];
                for (k, x) in row {
                    v[*k] = x.clone();
                }
                v
            })
            .collect();
        for i in (0..self.rows.len()).rev() {
            let (pivot, row) = &self.rows[i];
            for above in dense[..i].iter_mut() {
                if above[*pivot].is_zero() {
                    continue;
                }
                let f = above[*pivot].clone();
                for (k, r) in row {
                    above[*k] -= &f * r;
                }
            }
        }
        dense
    }
}

/// One violated axiom, with the indices that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Defect {
    EmptyAlgebra,
    Unit { index: usize, product: AlgElement },
    Commutativity { pair: (usize, usize) },
    Associativity { triple: (usize, usize, usize), residual: AlgElement },
    /// A product of two ideal basis elements has a unit component.
    IdealNotClosed { pair: (usize, usize) },
    /// A basis element of the ideal is not nilpotent (locality fails).
    NotNilpotent { index: usize },
    IdealNotNilpotent,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::EmptyAlgebra => write!(f, "dimension is zero"),
            Defect::Unit { index, product } => {
                write!(f, "unit: e0*e{index} = {:?}", fmt_coeffs(&product.coeffs))
            }
            Defect::Commutativity { pair: (a, b) } => {
                write!(f, "commutativity: pair ({a},{b})")
            }
            Defect::Associativity { triple: (a, b, g), residual } => write!(
                f,
                "associativity: triple ({a},{b},{g}) residual {:?}",
                fmt_coeffs(&residual.coeffs)
            ),
            Defect::IdealNotClosed { pair: (a, b) } => {
                write!(f, "locality: e{a}*e{b} has a unit component")
            }
            Defect::NotNilpotent { index } => write!(f, "locality: e{index} is not nilpotent"),
            Defect::IdealNotNilpotent => write!(f, "locality: ideal powers do not vanish"),
        }
    }
}

fn fmt_coeffs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub defects: Vec<Defect>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.defects.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.defects.is_empty() {
            return write!(f, "valid");
        }
        let items: Vec<String> = self.defects.iter().map(ToString::to_string).collect();
        write!(f, "{}", items.join("; "))
    }
}

/// Recipe for a Weil algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    /// The trivial algebra ℝ, of height 0.
    Real,
    DualNumbers,
    /// ℝ[t]/(t^{k+1}).
    Jet(usize),
    /// ℝ[y_1..y_r] modulo all monomials of degree > k.
    TruncatedPoly { r: usize, k: usize },
    Tensor(Box<AlgebraKind>, Box<AlgebraKind>),
    Custom(StructureTable),
}

impl AlgebraKind {
    pub fn name(&self) -> String {
        match self {
            AlgebraKind::Real => "R".into(),
            AlgebraKind::DualNumbers => "dual".into(),
            AlgebraKind::Jet(k) => format!("jet({k})"),
            AlgebraKind::TruncatedPoly { r, k } => format!("truncated_poly({r},{k})"),
            AlgebraKind::Tensor(a, b) => format!("tensor({},{})", a.name(), b.name()),
            AlgebraKind::Custom(t) => format!("custom({})", t.dim()),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct AlgebraData {
    name: String,
    table: StructureTable,
    filtration: Vec<Vec<AlgElement>>,
}

/// A validated Weil algebra. Cloning is cheap; the data is shared.
#[derive(Clone)]
pub struct WeilAlgebra(Arc<AlgebraData>);

impl PartialEq for WeilAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.table == other.0.table
    }
}

impl Eq for WeilAlgebra {}

impl fmt::Debug for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeilAlgebra({}, dim {})", self.0.name, self.dim())
    }
}

/// Result of [`WeilAlgebra::is_nilpotent`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Nilpotency {
    pub nilpotent: bool,
    /// Smallest `j` with `a^j = 0`.
    pub exponent: Option<usize>,
}

/// The bilinear form `B(a, b) = p(ab)` and, when invertible, its dual basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusForm {
    pub matrix: Matrix,
    pub nondegenerate: bool,
    /// `a^α` with `p(a^α e_β) = δ_αβ`.
    pub dual_basis: Option<Vec<AlgElement>>,
    /// A nonzero kernel vector of `B` when degenerate.
    pub kernel: Option<Vec<Rational>>,
}

pub fn make_algebra(kind: &AlgebraKind) -> Result<WeilAlgebra> {
    let table = build_table(kind)?;
    WeilAlgebra::from_table(kind.name(), table)
}

fn build_table(kind: &AlgebraKind) -> Result<StructureTable> {
    Ok(match kind {
        AlgebraKind::Real => jet_table(0),
        AlgebraKind::DualNumbers => {
            jet_table(1).with_labels(vec!["1".into(), "e".into()])
        }
        AlgebraKind::Jet(k) => {
            if *k == 0 {
                return Err(Error::Config("jet order k must be at least 1".into()));
            }
            jet_table(*k)
        }
        AlgebraKind::TruncatedPoly { r, k } => {
            if *r == 0 || *k == 0 {
                return Err(Error::Config("truncated_poly needs r >= 1 and k >= 1".into()));
            }
            truncated_poly_table(*r, *k)
        }
        AlgebraKind::Tensor(a, b) => tensor_table(&build_table(a)?, &build_table(b)?),
        AlgebraKind::Custom(t) => t.clone(),
    })
}

fn jet_table(k: usize) -> StructureTable {
    let dim = k + 1;
    let mut t = StructureTable::zero(dim);
    for a in 0..dim {
        for b in 0..dim - a {
            t.set(a, b, a + b, Rational::one());
        }
    }
    let labels = (0..dim)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{i}"),
        })
        .collect();
    t.with_labels(labels)
}

/// Exponent vectors of degree ≤ k in r variables, graded-lex (degree up, then
/// lexicographically descending).
pub(crate) fn graded_lex_monomials(r: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for deg in 0..=k {
        let mut level = Vec::new();
        compositions(r, deg, &mut Vec::new(), &mut level);
        level.sort_by(|a, b| b.cmp(a));
        out.extend(level);
    }
    out
}

fn compositions(parts: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(parts - 1, total - first, prefix, out);
        prefix.pop();
    }
}

fn truncated_poly_table(r: usize, k: usize) -> StructureTable {
    let monos = graded_lex_monomials(r, k);
    let index = |m: &[usize]| monos.iter().position(|x| x == m);
    let dim = monos.len();
    let mut t = StructureTable::zero(dim);
    for (a, ma) in monos.iter().enumerate() {
        for (b, mb) in monos.iter().enumerate() {
            let sum: Vec<usize> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            if let Some(g) = index(&sum) {
                t.set(a, b, g, Rational::one());
            }
        }
    }
    let labels = monos
        .iter()
        .map(|m| {
            let parts: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| {
                    if *e == 1 {
                        format!("y{}", i + 1)
                    } else {
                        format!("y{}^{}", i + 1, e)
                    }
                })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join(" ")
            }
        })
        .collect();
    t.with_labels(labels)
}

/// Product basis, left index fastest: `(a, b) ↦ a + dim(A)·b`.
fn tensor_table(left: &StructureTable, right: &StructureTable) -> StructureTable {
    let (da, db) = (left.dim, right.dim);
    let dim = da * db;
    let mut t = StructureTable::zero(dim);
    for a1 in 0..da {
        for b1 in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let lp = left.product_of_basis(a1, a2);
                    let rp = right.product_of_basis(b1, b2);
                    for (g, cg) in lp {
                        for (h, ch) in rp {
                            t.set(a1 + da * b1, a2 + da * b2, g + da * h, cg * ch);
                        }
                    }
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(dim);
    for b in 0..db {
        for a in 0..da {
            let (l, r) = (&left.labels[a], &right.labels[b]);
            labels.push(match (l.as_str(), r.as_str()) {
                ("1", "1") => "1".to_string(),
                _ => format!("{l}⊗{r}"),
            });
        }
    }
    t.with_labels(labels)
}

impl WeilAlgebra {
    /// Validates a raw table; fails with the full defect list.
    pub fn from_table(name: impl Into<String>, table: StructureTable) -> Result<Self> {
        let report = table.validate();
        if !report.is_valid() {
            return Err(Error::Validation(report));
        }
        let filtration = ideal_powers(&table).expect("validated ideal is nilpotent");
        Ok(WeilAlgebra(Arc::new(AlgebraData {
            name: name.into(),
            table,
            filtration,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn dim(&self) -> usize {
        self.0.table.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.0.table.labels
    }

    pub fn table(&self) -> &StructureTable {
        &self.0.table
    }

    pub fn structure_const(&self, a: usize, b: usize, g: usize) -> Rational {
        self.0.table.get(a, b, g)
    }

    /// Always empty for a constructed algebra; kept for reporting.
    pub fn validate(&self) -> ValidationReport {
        self.0.table.validate()
    }

    pub fn height(&self) -> usize {
        self.0.filtration.len()
    }

    /// Bases of `m^1 ⊇ m^2 ⊇ …`, nonzero powers only.
    pub fn ideal_filtration(&self) -> &[Vec<AlgElement>] {
        &self.0.filtration
    }

    /// Basis of `m^j` (empty once `j` exceeds the height).
    pub fn ideal_power_basis(&self, j: usize) -> Vec<AlgElement> {
        assert!(j >= 1, "ideal powers start at 1");
        self.0.filtration.get(j - 1).cloned().unwrap_or_default()
    }

    pub fn unit(&self) -> AlgElement {
        self.basis(0)
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement::new(vec![Rational::zero(); self.dim()])
    }

    pub fn basis(&self, a: usize) -> AlgElement {
        AlgElement::new(self.0.table.basis_vec(a))
    }

    /// `q · 1_A`.
    pub fn scalar(&self, q: Rational) -> AlgElement {
        let mut v = self.zero();
        v.coeffs[0] = q;
        v
    }

    pub fn element(&self, coeffs: Vec<Rational>) -> Result<AlgElement> {
        self.check(&AlgElement::new(coeffs))
    }

    fn check(&self, a: &AlgElement) -> Result<AlgElement> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.len(),
            });
        }
        Ok(a.clone())
    }

    fn check_ref(&self, a: &AlgElement) -> Result<()> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.len(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_ref(a)?;
        self.check_ref(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> Result<AlgElement> {
        self.check_ref(a)?;
        self.check_ref(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn scale(&self, q: &Rational, a: &AlgElement) -> Result<AlgElement> {
        self.check_ref(a)?;
        Ok(AlgElement::new(a.coeffs.iter().map(|x| q * x).collect()))
    }

    pub fn power(&self, a: &AlgElement, k: u32) -> Result<AlgElement> {
        self.check_ref(a)?;
        Ok(self.power_unchecked(a, k))
    }

    pub fn augmentation(&self, a: &AlgElement) -> Result<Rational> {
        self.check_ref(a)?;
        Ok(a.coeffs[0].clone())
    }

    /// Nilpotency with the smallest vanishing exponent.
    pub fn is_nilpotent(&self, a: &AlgElement) -> Result<Nilpotency> {
        self.check_ref(a)?;
        if !a.coeffs[0].is_zero() {
            return Ok(Nilpotency {
                nilpotent: false,
                exponent: None,
            });
        }
        let exponent = nilpotency_exponent(&self.0.table, &a.coeffs);
        Ok(Nilpotency {
            nilpotent: exponent.is_some(),
            exponent,
        })
    }

    pub fn frobenius_form(&self, p: &LinearForm) -> Result<FrobeniusForm> {
        if p.coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.coeffs.len(),
            });
        }
        let d = self.dim();
        let rows = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| p.apply(&self.mul_unchecked(&self.basis(a), &self.basis(b))))
                    .collect()
            })
            .collect();
        let matrix = Matrix::from_rows(rows);
        match matrix.inverse() {
            Some(inv) => {
                let dual = (0..d).map(|a| AlgElement::new(inv.row(a).to_vec())).collect();
                Ok(FrobeniusForm {
                    matrix,
                    nondegenerate: true,
                    dual_basis: Some(dual),
                    kernel: None,
                })
            }
            None => {
                let kernel = matrix.nullspace().into_iter().next();
                Ok(FrobeniusForm {
                    matrix,
                    nondegenerate: false,
                    dual_basis: None,
                    kernel,
                })
            }
        }
    }

    pub(crate) fn mul_unchecked(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        AlgElement::new(self.0.table.mul(&a.coeffs, &b.coeffs))
    }

    pub(crate) fn add_unchecked(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        AlgElement::new(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect())
    }

    pub(crate) fn power_unchecked(&self, a: &AlgElement, k: u32) -> AlgElement {
        let mut acc = self.unit();
        for _ in 0..k {
            acc = self.mul_unchecked(&acc, a);
        }
        acc
    }

    /// Human-readable element, e.g. `3 + 10 e`.
    pub fn format(&self, a: &AlgElement) -> String {
        let mut out = String::new();
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let label = &self.labels()[i];
            if i == 0 {
                out.push_str(&format_rational(&mag));
            } else if mag.is_one() {
                out.push_str(label);
            } else {
                out.push_str(&format!("{} {}", format_rational(&mag), label));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl Ring for WeilAlgebra {
    type Elem = AlgElement;

    fn zero(&self) -> AlgElement {
        WeilAlgebra::zero(self)
    }

    fn one(&self) -> AlgElement {
        self.unit()
    }

    fn add(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        self.add_unchecked(a, b)
    }

    fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        self.mul_unchecked(a, b)
    }

    fn neg(&self, a: &AlgElement) -> AlgElement {
        AlgElement::new(a.coeffs.iter().map(|x| -x).collect())
    }

    fn is_zero(&self, a: &AlgElement) -> bool {
        a.is_zero()
    }

    fn embed_rational(&self, q: &Rational) -> AlgElement {
        self.scalar(q.clone())
    }

    fn scale(&self, q: &Rational, a: &AlgElement) -> AlgElement {
        AlgElement::new(a.coeffs.iter().map(|x| q * x).collect())
    }

    fn format_elem(&self, a: &AlgElement) -> (String, bool) {
        let nonzero = a.coeffs.iter().filter(|c| !c.is_zero()).count();
        let text = self.format(a);
        let atomic = nonzero <= 1 && !text.contains(' ');
        (text, atomic)
    }

    fn real_dim(&self) -> usize {
        self.dim()
    }

    fn real_coords(&self, a: &AlgElement) -> Vec<Rational> {
        a.coeffs.clone()
    }

    fn real_basis(&self, i: usize) -> AlgElement {
        self.basis(i)
    }

    fn as_rational(&self, a: &AlgElement) -> Option<Rational> {
        a.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| a.coeffs[0].clone())
    }
}
