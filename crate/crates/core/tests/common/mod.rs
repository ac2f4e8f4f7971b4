//! Shared test helpers, including a deliberately naive elimination routine
//! kept independent of the library's reduction path so ranks can be
//! cross-checked between two implementations.

use nilpo_core::{FieldSpec, Scalar};

/// Rank by plain forward elimination: no pivot normalization, no back
/// substitution, no pivot-column bookkeeping shared with the library.
pub fn naive_rank(mut rows: Vec<Vec<Scalar>>, field: FieldSpec) -> usize {
    let _ = field;
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot;
            for c in col..ncols {
                let update = &rows[r][c] - &(&factor * &rows[rank][c]);
                rows[r][c] = update;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
