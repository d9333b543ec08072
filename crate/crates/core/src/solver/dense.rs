use crate::hamiltonian::SparseSymmetricMatrix;

/// Lowest `count` eigenpairs by full dense diagonalization, ascending.
pub(crate) fn lowest_eigenpairs(h: &SparseSymmetricMatrix, count: usize) -> Vec<(f64, Vec<f64>)> {
    let eig = h.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    order
        .into_iter()
        .take(count)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect()))
        .collect()
}
