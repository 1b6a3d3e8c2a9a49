//! Reference computations written directly from the definitions. They share
//! only data types with the library, never its algorithms.

use std::collections::{BTreeMap, HashMap};

use weilbund::cohomology::{BasisElement, BoundaryBlock};
use weilbund::rational::{int, zero};
use weilbund::{
    schouten_bracket, APoly, AlgElement, Polynomial, PoissonStructure, QPoly, Rational, Ring,
    StructureTable, WeilAlgebra,
};

/// Rank by textbook Gauss–Jordan elimination over ℚ.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c] != zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = Rational::from_integer(1.into()) / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != zero() {
                let f = rows[i][c].clone();
                for k in 0..cols {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn block_rank(block: &BoundaryBlock) -> usize {
    if block.rows.is_empty() || block.cols.is_empty() {
        return 0;
    }
    rank(block.matrix.to_dense().to_rows())
}

/// Integer structure tensor `c[a][b][g]`; `None` if a constant is not integral.
fn dense(table: &StructureTable) -> Option<Vec<Vec<Vec<i64>>>> {
    let d = table.dim();
    let mut c = vec![vec![vec![0i64; d]; d]; d];
    for (a, b, g, q) in table.entries() {
        if !q.is_integer() {
            return None;
        }
        c[a][b][g] = i64::try_from(&q.to_integer()).ok()?;
    }
    Some(c)
}

/// Weil-algebra axioms for a table whose basis starts with the unit and
/// whose remaining basis vectors span the candidate maximal ideal.
///
/// Nilpotency of the ideal is decided on basis elements: once the table is
/// commutative and associative and the span is closed, it is a nil ideal iff
/// each basis element is nilpotent, and a finitely generated commutative nil
/// ideal is nilpotent.
pub fn is_weil(table: &StructureTable) -> bool {
    let d = table.dim();
    if d == 0 {
        return false;
    }
    let Some(c) = dense(table) else {
        return is_weil_rational(table);
    };
    for b in 0..d {
        for g in 0..d {
            if c[0][b][g] != i64::from(b == g) {
                return false;
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            if c[a][b] != c[b][a] {
                return false;
            }
        }
    }
    for a in 1..d {
        for b in 1..d {
            if c[a][b][0] != 0 {
                return false;
            }
        }
    }
    // (e_a e_b) e_g = e_a (e_b e_g), on the nonzero part of each product
    let rows: Vec<Vec<Vec<(usize, i64)>>> = c
        .iter()
        .map(|ca| {
            ca.iter()
                .map(|cab| cab.iter().enumerate().filter(|(_, &v)| v != 0).map(|(k, &v)| (k, v)).collect())
                .collect()
        })
        .collect();
    let mut diff = vec![0i64; d];
    let mut touched = Vec::new();
    for a in 0..d {
        for b in 0..d {
            for g in 0..d {
                for &(k, x) in &rows[a][b] {
                    for &(h, y) in &rows[k][g] {
                        diff[h] += x * y;
                        touched.push(h);
                    }
                }
                for &(k, x) in &rows[b][g] {
                    for &(h, y) in &rows[a][k] {
                        diff[h] -= x * y;
                        touched.push(h);
                    }
                }
                let mut balanced = true;
                for &h in &touched {
                    balanced &= diff[h] == 0;
                    diff[h] = 0;
                }
                touched.clear();
                if !balanced {
                    return false;
                }
            }
        }
    }
    (1..d).all(|a| basis_nilpotent_int(&c, a).unwrap_or_else(|| basis_nilpotent(table, a)))
}

/// `e_a^j = 0` for some `j ≤ d`, in checked integer arithmetic; `None` on
/// overflow.
fn basis_nilpotent_int(c: &[Vec<Vec<i64>>], a: usize) -> Option<bool> {
    let d = c.len();
    let mut x = vec![0i64; d];
    x[a] = 1;
    for _ in 0..d {
        if x.iter().all(|&v| v == 0) {
            return Some(true);
        }
        let mut next = vec![0i64; d];
        for (k, &xk) in x.iter().enumerate() {
            if xk == 0 {
                continue;
            }
            for (h, &ckah) in c[k][a].iter().enumerate() {
                if ckah != 0 {
                    next[h] = next[h].checked_add(xk.checked_mul(ckah)?)?;
                }
            }
        }
        x = next;
    }
    Some(x.iter().all(|&v| v == 0))
}

fn is_weil_rational(table: &StructureTable) -> bool {
    // Non-integral tables only arise from custom inputs; check via algebra
    // products in ℚ.
    let d = table.dim();
    let e = |i: usize| {
        let mut v = vec![zero(); d];
        v[i] = int(1);
        v
    };
    for b in 0..d {
        if mul_table(table, &e(0), &e(b)) != e(b) {
            return false;
        }
    }
    for a in 0..d {
        for b in 0..d {
            let ab = mul_table(table, &e(a), &e(b));
            if ab != mul_table(table, &e(b), &e(a)) || (a > 0 && b > 0 && ab[0] != zero()) {
                return false;
            }
            for g in 0..d {
                let l = mul_table(table, &ab, &e(g));
                let r = mul_table(table, &e(a), &mul_table(table, &e(b), &e(g)));
                if l != r {
                    return false;
                }
            }
        }
    }
    (1..d).all(|a| basis_nilpotent(table, a))
}

fn basis_nilpotent(table: &StructureTable, a: usize) -> bool {
    let d = table.dim();
    let mut x = vec![zero(); d];
    x[a] = int(1);
    let base = x.clone();
    for _ in 0..d {
        if x.iter().all(|q| *q == zero()) {
            return true;
        }
        x = mul_table(table, &x, &base);
    }
    x.iter().all(|q| *q == zero())
}

pub fn mul_table(table: &StructureTable, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let d = table.dim();
    let mut out = vec![zero(); d];
    for a in 0..d {
        if x[a] == zero() {
            continue;
        }
        for b in 0..d {
            if y[b] == zero() {
                continue;
            }
            for g in 0..d {
                let c = table.get(a, b, g);
                if c != zero() {
                    out[g] += &x[a] * &y[b] * c;
                }
            }
        }
    }
    out
}

/// `f(ξ)` by expanding every monomial with the raw structure constants.
pub fn eval_q(algebra: &WeilAlgebra, f: &QPoly, xi: &[AlgElement]) -> Vec<Rational> {
    let d = algebra.dim();
    let mut acc = vec![zero(); d];
    for (m, q) in f.terms() {
        let v = monomial_value(algebra, m.exponents(), xi);
        for (s, t) in acc.iter_mut().zip(v) {
            *s += q * t;
        }
    }
    acc
}

/// `φ(ξ)` for `A`-valued coefficients.
pub fn eval_a(algebra: &WeilAlgebra, f: &APoly, xi: &[AlgElement]) -> Vec<Rational> {
    let table = algebra.table();
    let mut acc = vec![zero(); algebra.dim()];
    for (m, c) in f.terms() {
        let v = mul_table(table, &c.coeffs, &monomial_value(algebra, m.exponents(), xi));
        for (s, t) in acc.iter_mut().zip(v) {
            *s += t;
        }
    }
    acc
}

fn monomial_value(algebra: &WeilAlgebra, exps: &[u32], xi: &[AlgElement]) -> Vec<Rational> {
    let table = algebra.table();
    let mut v = vec![zero(); algebra.dim()];
    v[0] = int(1);
    for (i, e) in exps.iter().enumerate() {
        for _ in 0..*e {
            v = mul_table(table, &v, &xi[i].coeffs);
        }
    }
    v
}

/// `{f, g} = Σ_{i<j} π_ij (∂_i f ∂_j g − ∂_j f ∂_i g)`.
pub fn bracket<R: Ring>(pi: &PoissonStructure<R>, f: &Polynomial<R>, g: &Polynomial<R>) -> Polynomial<R> {
    let mut acc = Polynomial::zero(pi.ring().clone(), pi.n());
    let d = |p: &Polynomial<R>, i: usize| p.partial_derivative(i).unwrap();
    for ((i, j), pij) in pi.entries() {
        let t = d(f, *i)
            .try_mul(&d(g, *j))
            .unwrap()
            .try_sub(&d(f, *j).try_mul(&d(g, *i)).unwrap())
            .unwrap();
        acc = acc.try_add(&pij.try_mul(&t).unwrap()).unwrap();
    }
    acc
}

/// Checks a boundary block column by column against `sign · [π, b]`.
/// Returns the number of columns checked, or the first mismatching column.
pub fn block_matches_schouten<R: Ring>(
    ring: &R,
    pi: &PoissonStructure<R>,
    block: &BoundaryBlock,
    sign: i64,
) -> Result<usize, String> {
    let index: HashMap<&BasisElement, usize> = block.rows.iter().enumerate().map(|(k, b)| (b, k)).collect();
    let bivector = pi.as_bivector();
    for (c, col) in block.cols.iter().enumerate() {
        let s = schouten_bracket(&bivector, &col.to_multivector(ring)).map_err(|e| e.to_string())?;
        let mut expected: BTreeMap<usize, Rational> = BTreeMap::new();
        for (idx, poly) in s.components() {
            for (m, coeff) in poly.terms() {
                for (k, q) in ring.real_coords(coeff).into_iter().enumerate() {
                    if q == zero() {
                        continue;
                    }
                    let key = BasisElement {
                        indices: idx.clone(),
                        monomial: m.clone(),
                        scalar: k,
                    };
                    let Some(&row) = index.get(&key) else {
                        return Err(format!("column {c}: [π, b] leaves the target basis"));
                    };
                    *expected.entry(row).or_insert_with(zero) += q * int(sign);
                }
            }
        }
        expected.retain(|_, q| *q != zero());
        let actual: BTreeMap<usize, Rational> = block
            .matrix
            .column(c)
            .iter()
            .filter(|(_, q)| *q != zero())
            .cloned()
            .collect();
        if expected != actual {
            return Err(format!("p={} w={} column {c}", block.p, block.weight_in));
        }
    }
    Ok(block.cols.len())
}
