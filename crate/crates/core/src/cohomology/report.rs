//! Betti tables, `d²` residuals, scalar-extension comparison and the
//! capped variant for inhomogeneous structures.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    assemble_for, block_for, cochain_basis, grading_degree, target_weight, BasisElement, BoundaryBlock,
    ComplexSpec, Scalars, SignMode,
};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::poisson::{Homogeneity, PoissonStructure};
use crate::poly::{Polynomial, QPoly};
use crate::prolong::p_lift;
use crate::ring::Rationals;
use crate::weil_algebra::{LinearForm, WeilAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiCell {
    pub p: usize,
    pub weight: u32,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Total {
    pub p: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub instance: String,
    pub scalars: String,
    pub sign_mode: SignMode,
    pub cells: Vec<BettiCell>,
    pub totals: Vec<Total>,
    pub d_squared_zero: bool,
}

impl BettiReport {
    pub fn cell(&self, p: usize, weight: u32) -> Option<&BettiCell> {
        self.cells.iter().find(|c| c.p == p && c.weight == weight)
    }

    /// Aligned text table, one row per cell.
    pub fn to_table(&self) -> String {
        let header = ["p", "weight", "dim", "rank_in", "rank_out", "dim_H"];
        let rows: Vec<Vec<String>> = self
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.p.to_string(),
                    c.weight.to_string(),
                    c.dim.to_string(),
                    c.rank_in.to_string(),
                    c.rank_out.to_string(),
                    c.dim_h.to_string(),
                ]
            })
            .collect();
        let mut out = format!(
            "instance: {}  scalars: {}  sign_mode: {}\n",
            self.instance, self.scalars, self.sign_mode
        );
        out.push_str(&align(&header, &rows));
        let totals: Vec<String> = self.totals.iter().map(|t| format!("H^{}={}", t.p, t.dim_h)).collect();
        out.push_str(&format!("totals: {}\n", totals.join(" ")));
        out.push_str(&format!("d_squared_zero: {}\n", self.d_squared_zero));
        out
    }
}

pub(crate) fn align(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    // Numeric columns are right-aligned, text columns left-aligned.
    let numeric: Vec<bool> = (0..header.len())
        .map(|k| {
            rows.iter().all(|r| {
                r.get(k)
                    .is_none_or(|c| c.chars().all(|ch| ch.is_ascii_digit() || "-?/".contains(ch)))
            })
        })
        .collect();
    let line = |cells: Vec<String>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .zip(&numeric)
            .map(|((c, w), num)| {
                if *num {
                    format!("{:>width$}", c, width = w)
                } else {
                    format!("{:<width$}", c, width = w)
                }
            })
            .collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    for r in rows {
        out.push_str(&line(r.clone()));
    }
    out
}

/// Builds every block in `keys` in parallel; the map keeps a fixed order.
fn blocks(
    pi: &PoissonStructure<Rationals>,
    scalars: &Scalars,
    mode: SignMode,
    r: u32,
    keys: &BTreeSet<(usize, u32)>,
) -> BTreeMap<(usize, u32), (BoundaryBlock, usize)> {
    keys.par_iter()
        .map(|&(p, w)| {
            let b = block_for(pi, scalars, mode, p, w, r);
            let rank = b.matrix.rank();
            ((p, w), (b, rank))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Exact Betti table over the requested `(p, weight)` window.
pub fn betti(spec: &ComplexSpec) -> Result<BettiReport> {
    let r = spec.grading_degree()?;
    let n = spec.n();
    let mut keys = BTreeSet::new();
    for p in spec.p_range.clone() {
        for w in spec.weight_range.clone() {
            keys.insert((p, w));
            if p >= 1 {
                if let Some(src) = (w + 1).checked_sub(r) {
                    keys.insert((p - 1, src));
                }
            }
            if let Some(wo) = target_weight(w, r) {
                if p < n {
                    keys.insert((p + 1, wo));
                }
            }
        }
    }
    let built = blocks(&spec.pi, &spec.scalars, spec.sign_mode, r, &keys);
    let mut cells = Vec::new();
    for p in spec.p_range.clone() {
        for w in spec.weight_range.clone() {
            let (out_block, rank_out) = &built[&(p, w)];
            let rank_in = match (p, (w + 1).checked_sub(r)) {
                (1.., Some(src)) => built[&(p - 1, src)].1,
                _ => 0,
            };
            let dim = out_block.cols.len();
            cells.push(BettiCell {
                p,
                weight: w,
                dim,
                rank_in,
                rank_out: *rank_out,
                // Meaningless when d² ≠ 0; saturate instead of underflowing.
                dim_h: dim.saturating_sub(rank_out + rank_in),
            });
        }
    }
    let totals = spec
        .p_range
        .clone()
        .map(|p| Total {
            p,
            dim_h: cells.iter().filter(|c| c.p == p).map(|c| c.dim_h).sum(),
        })
        .collect();
    let mut d_squared_zero = true;
    for ((p, _), (b, _)) in &built {
        if let Some(wo) = b.weight_out {
            if let Some((next, _)) = built.get(&(p + 1, wo)) {
                if !next.rows.is_empty() && !next.matrix.mul(&b.matrix).is_zero() {
                    d_squared_zero = false;
                }
            }
        }
    }
    Ok(BettiReport {
        instance: spec.name.clone(),
        scalars: spec.scalars.label().to_string(),
        sign_mode: spec.sign_mode,
        cells,
        totals,
        d_squared_zero,
    })
}

/// `d_{p+1} ∘ d_p` for a source cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub p: usize,
    pub weight: u32,
    pub residual: SparseMatrix,
    /// Column and row bases of the residual.
    pub source: Vec<BasisElement>,
    pub target: Vec<BasisElement>,
}

/// Products of consecutive blocks for every source cell in range whose
/// composite lands in a nonzero space.
pub fn verify_d_squared(spec: &ComplexSpec) -> Result<Vec<Residual>> {
    let r = spec.grading_degree()?;
    let n = spec.n();
    let mut keys = BTreeSet::new();
    let mut pairs = Vec::new();
    for p in spec.p_range.clone() {
        for w in spec.weight_range.clone() {
            let Some(wo) = target_weight(w, r) else { continue };
            if p + 2 > n || target_weight(wo, r).is_none() {
                continue;
            }
            keys.insert((p, w));
            keys.insert((p + 1, wo));
            pairs.push(((p, w), (p + 1, wo)));
        }
    }
    let built = blocks(&spec.pi, &spec.scalars, spec.sign_mode, r, &keys);
    Ok(pairs
        .into_iter()
        .map(|(a, b)| {
            let first = &built[&a].0;
            let second = &built[&b].0;
            Residual {
                p: a.0,
                weight: a.1,
                residual: second.matrix.mul(&first.matrix),
                source: first.cols.clone(),
                target: second.rows.clone(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonCell {
    pub p: usize,
    pub weight: u32,
    pub dim_h_real: usize,
    pub dim_h_algebra: usize,
    pub rank_real: usize,
    pub rank_algebra: usize,
    pub holds: bool,
}

/// `dim_ℝ H_A = dim A · dim_ℝ H_ℚ`, cell by cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub instance: String,
    pub algebra: String,
    pub factor: usize,
    pub cells: Vec<ComparisonCell>,
    pub verified: usize,
    pub total: usize,
}

impl ComparisonReport {
    pub fn all_hold(&self) -> bool {
        self.verified == self.total
    }

    pub fn summary(&self) -> String {
        format!(
            "factor {} verified in {}/{} cells",
            self.factor, self.verified, self.total
        )
    }
}

pub fn scalar_extension_compare(
    name: &str,
    pi: &PoissonStructure<Rationals>,
    algebra: &WeilAlgebra,
    p_range: RangeInclusive<usize>,
    weight_range: RangeInclusive<u32>,
    sign_mode: SignMode,
) -> Result<ComparisonReport> {
    let real_spec = ComplexSpec::new(
        name,
        pi.clone(),
        Scalars::Real,
        p_range.clone(),
        weight_range.clone(),
        sign_mode,
    )?;
    let alg_spec = ComplexSpec {
        scalars: Scalars::Algebra(algebra.clone()),
        ..real_spec.clone()
    };
    let real = betti(&real_spec)?;
    let alg = betti(&alg_spec)?;
    let factor = algebra.dim();
    let cells: Vec<ComparisonCell> = real
        .cells
        .iter()
        .zip(&alg.cells)
        .map(|(r, a)| ComparisonCell {
            p: r.p,
            weight: r.weight,
            dim_h_real: r.dim_h,
            dim_h_algebra: a.dim_h,
            rank_real: r.rank_out,
            rank_algebra: a.rank_out,
            holds: a.dim_h == factor * r.dim_h && a.rank_out == factor * r.rank_out,
        })
        .collect();
    Ok(ComparisonReport {
        instance: name.to_string(),
        algebra: algebra.name().to_string(),
        factor,
        verified: cells.iter().filter(|c| c.holds).count(),
        total: cells.len(),
        cells,
    })
}

/// Betti table of the `p`-lift of `π` on `ℝ^{n·dim A}`.
pub fn prolonged_cohomology(
    name: &str,
    pi: &PoissonStructure<Rationals>,
    algebra: &WeilAlgebra,
    p_form: &LinearForm,
    p_range: RangeInclusive<usize>,
    weight_range: RangeInclusive<u32>,
    sign_mode: SignMode,
) -> Result<BettiReport> {
    let lift = p_lift(pi, algebra, p_form)?;
    let spec = ComplexSpec::new(name, lift, Scalars::Real, p_range, weight_range, sign_mode)?;
    betti(&spec)
}

/// Basis of the weight-`w` Casimirs: the kernel of the `p = 0` block.
pub fn casimir_basis(pi: &PoissonStructure<Rationals>, weight: u32) -> Result<Vec<QPoly>> {
    let r = grading_degree(pi)?;
    let block = block_for(pi, &Scalars::Real, SignMode::Standard, 0, weight, r);
    let dense = block.matrix.to_dense();
    let kernel = if block.rows.is_empty() {
        (0..block.cols.len())
            .map(|i| {
                let mut v = vec![num_traits::Zero::zero(); block.cols.len()];
                v[i] = num_traits::One::one();
                v
            })
            .collect()
    } else {
        dense.nullspace()
    };
    Ok(kernel
        .into_iter()
        .map(|v| {
            Polynomial::from_terms(
                Rationals,
                pi.n(),
                block.cols.iter().zip(v).map(|(b, c)| (b.monomial.clone(), c)),
            )
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CappedCell {
    pub p: usize,
    pub weight: u32,
    /// Dimension of cochains with coefficient degree at most `weight`
    /// (of degree exactly `weight` for homogeneous structures).
    pub dim: usize,
    /// `None` outside the validity window.
    #[serde(rename = "dim_H")]
    pub dim_h: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CappedReport {
    pub instance: String,
    pub cap: u32,
    pub homogeneous: bool,
    /// Largest weight whose cohomology is determinate.
    pub window_max: Option<u32>,
    pub cells: Vec<CappedCell>,
}

impl CappedReport {
    pub fn to_table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .cells
            .iter()
            .map(|c| {
                vec![
                    c.p.to_string(),
                    c.weight.to_string(),
                    c.dim.to_string(),
                    c.dim_h.map_or_else(|| "indeterminate".to_string(), |d| d.to_string()),
                ]
            })
            .collect();
        let window = self
            .window_max
            .map_or_else(|| "empty".to_string(), |w| format!("weight <= {w}"));
        format!(
            "instance: {}  cap: {}  window: {}\n{}",
            self.instance,
            self.cap,
            window,
            align(&["p", "weight", "dim", "dim_H"], &rows)
        )
    }
}

fn basis_upto(n: usize, p: usize, wmax: Option<u32>, sd: usize) -> Vec<BasisElement> {
    match wmax {
        Some(wmax) if p <= n => (0..=wmax).flat_map(|w| cochain_basis(n, p, w, sd)).collect(),
        _ => Vec::new(),
    }
}

/// Cohomology of the filtered pieces `F_{≤w}` (coefficient degree at most
/// `w`) for an inhomogeneous structure, computed inside degree `cap`.
///
/// With `π` of degrees `r_min..=r_max`, `d` raises degree by at most
/// `r_max − 1`. At level `w` the kernel is taken on `F^p_{≤w}` and the image
/// from `F^{p−1}_{≤ w+1−r_min}`, keeping only boundaries inside `F_{≤w}`.
/// A level is reported only when every space involved stays within the
/// cap; the others are indeterminate. Homogeneous structures delegate to
/// [`betti`] with the whole range determinate.
pub fn capped_betti(
    name: &str,
    pi: &PoissonStructure<Rationals>,
    cap: u32,
    p_range: RangeInclusive<usize>,
    sign_mode: SignMode,
) -> Result<CappedReport> {
    let h = pi.homogeneity();
    if h.max_degree() > cap {
        return Err(Error::CapBelowDegree {
            cap: cap as usize,
            degree: h.max_degree() as usize,
        });
    }
    if let Some(_r) = h.grading_degree() {
        let spec = ComplexSpec::new(name, pi.clone(), Scalars::Real, p_range, 0..=cap, sign_mode)?;
        let rep = betti(&spec)?;
        return Ok(CappedReport {
            instance: name.to_string(),
            cap,
            homogeneous: true,
            window_max: Some(cap),
            cells: rep
                .cells
                .iter()
                .map(|c| CappedCell {
                    p: c.p,
                    weight: c.weight,
                    dim: c.dim,
                    dim_h: Some(c.dim_h),
                })
                .collect(),
        });
    }
    let Homogeneity::Inhomogeneous { min: rmin, max: rmax } = h else {
        unreachable!("homogeneous handled above")
    };
    let n = pi.n();
    if *p_range.end() > n {
        return Err(Error::IndexOutOfRange {
            index: *p_range.end(),
            bound: n + 1,
        });
    }
    let valid = |w: u32| w + rmax - 1 <= cap && w + rmax - rmin <= cap;
    let window_max = (0..=cap).filter(|&w| valid(w)).max();
    let jobs: Vec<(usize, u32)> = p_range
        .clone()
        .flat_map(|p| (0..=cap).map(move |w| (p, w)))
        .collect();
    let cells: Vec<CappedCell> = jobs
        .par_iter()
        .map(|&(p, w)| {
            let src = basis_upto(n, p, Some(w), 1);
            let dim = src.len();
            if !valid(w) {
                return CappedCell {
                    p,
                    weight: w,
                    dim,
                    dim_h: None,
                };
            }
            let out_rows = basis_upto(n, p + 1, Some(w + rmax - 1), 1);
            let rank_out = if out_rows.is_empty() {
                0
            } else {
                assemble_for(pi, &Scalars::Real, p, &src, &out_rows, sign_mode).rank()
            };
            let boundaries = if p == 0 {
                0
            } else {
                let in_src = basis_upto(n, p - 1, (w + 1).checked_sub(rmin), 1);
                let in_rows = basis_upto(n, p, Some(w + rmax - rmin), 1);
                let m = assemble_for(pi, &Scalars::Real, p - 1, &in_src, &in_rows, sign_mode);
                let above = m.select_rows(|i| in_rows[i].weight() > w);
                m.rank() - above.rank()
            };
            CappedCell {
                p,
                weight: w,
                dim,
                dim_h: Some(dim - rank_out - boundaries),
            }
        })
        .collect();
    Ok(CappedReport {
        instance: name.to_string(),
        cap,
        homogeneous: false,
        window_max,
        cells,
    })
}
