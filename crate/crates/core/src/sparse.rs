//! Row-oriented sparse helpers on top of `nalgebra_sparse`.

use nalgebra_sparse::{CooMatrix, CsrMatrix};

/// A sparse row: `(column, value)` pairs sorted by column, no duplicates.
pub type SparseRow = Vec<(usize, f64)>;

/// Builds a CSR matrix from triplets, summing duplicates.
pub fn csr_from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(nrows, ncols);
    for &(r, c, v) in triplets {
        coo.push(r, c, v);
    }
    CsrMatrix::from(&coo)
}

pub fn csr_from_rows(ncols: usize, rows: &[SparseRow]) -> CsrMatrix<f64> {
    let mut coo = CooMatrix::new(rows.len(), ncols);
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            coo.push(r, c, v);
        }
    }
    CsrMatrix::from(&coo)
}

/// Linear combination `Σ w_i · row_i`, merged and sorted.
pub fn combine_rows(terms: &[(f64, &[(usize, f64)])]) -> SparseRow {
    let mut all: Vec<(usize, f64)> = terms
        .iter()
        .flat_map(|&(w, row)| row.iter().map(move |&(c, v)| (c, w * v)))
        .collect();
    all.sort_unstable_by_key(|&(c, _)| c);
    let mut out: SparseRow = Vec::with_capacity(all.len());
    for (c, v) in all {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out
}

pub fn csr_mul_vec(m: &CsrMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|r| {
            let row = m.row(r);
            row.col_indices()
                .iter()
                .zip(row.values())
                .map(|(&c, &v)| v * x[c])
                .sum()
        })
        .collect()
}

/// `mᵀ x`
pub fn csr_tr_mul_vec(m: &CsrMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; m.ncols()];
    for (r, &xr) in x.iter().enumerate() {
        let row = m.row(r);
        for (&c, &v) in row.col_indices().iter().zip(row.values()) {
            out[c] += v * xr;
        }
    }
    out
}

pub fn to_dense(m: &CsrMatrix<f64>) -> Vec<Vec<f64>> {
    let mut out = vec![vec![0.0; m.ncols()]; m.nrows()];
    for (r, c, &v) in m.triplet_iter() {
        out[r][c] += v;
    }
    out
}
