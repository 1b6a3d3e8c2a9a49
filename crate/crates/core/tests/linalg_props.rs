use proptest::prelude::*;
use weilbund::linalg::{bareiss_rank, Matrix, SparseMatrix};
use weilbund::rational::int;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, cols), rows)
        .prop_map(|r| Matrix::from_rows(r.into_iter().map(|row| row.into_iter().map(int).collect()).collect()))
}

/// `B·C` with inner dimension `k`, so the rank is at most `k`.
fn low_rank() -> impl Strategy<Value = (Matrix, usize)> {
    (1usize..10, 1usize..10, 0usize..5).prop_flat_map(|(r, c, k)| {
        (matrix(r, k.max(1)), matrix(k.max(1), c), Just(k))
    })
    .prop_map(|(b, c, k)| {
        let m = if k == 0 { Matrix::zeros(b.rows(), c.cols()) } else { b.mul(&c) };
        (m, k)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn three_rank_routes_agree(m in (1usize..12, 1usize..12).prop_flat_map(|(r, c)| matrix(r, c))) {
        let rref = m.rref().1.len();
        prop_assert_eq!(bareiss_rank(&m), rref);
        prop_assert_eq!(SparseMatrix::from_dense(&m).rank(), rref);
        prop_assert_eq!(m.transpose().rref().1.len(), rref);
    }

    #[test]
    fn products_respect_inner_dimension((m, k) in low_rank()) {
        let r = SparseMatrix::from_dense(&m).rank();
        prop_assert!(r <= k);
        prop_assert_eq!(r, bareiss_rank(&m));
    }

    #[test]
    fn nullspace_is_a_kernel_of_the_right_size(m in (1usize..8, 1usize..8).prop_flat_map(|(r, c)| matrix(r, c))) {
        let kernel = m.nullspace();
        prop_assert_eq!(kernel.len(), m.cols() - m.rref().1.len());
        for v in kernel {
            let col = Matrix::from_rows(v.into_iter().map(|x| vec![x]).collect());
            prop_assert!(m.mul(&col).is_zero());
        }
    }

    #[test]
    fn sparse_product_matches_dense(
        (a, b) in (1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(r, k, c)| (matrix(r, k), matrix(k, c)))
    ) {
        let sparse = SparseMatrix::from_dense(&a).mul(&SparseMatrix::from_dense(&b));
        prop_assert_eq!(sparse.to_dense(), a.mul(&b));
    }
}
