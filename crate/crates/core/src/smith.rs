//! Smith normal form of small integer matrices.

/// Invariant factors `d_1 | d_2 | ... | d_r` (all nonzero) of an integer matrix,
/// where `r` is its rank.
pub fn invariant_factors(matrix: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();

    for k in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block
            let Some((pr, pc)) = (k..rows)
                .flat_map(|r| (k..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| a[r][c] != 0)
                .min_by_key(|&(r, c)| a[r][c].abs())
            else {
                return finish(diag);
            };
            a.swap(k, pr);
            for row in a.iter_mut() {
                row.swap(k, pc);
            }

            let p = a[k][k];
            let mut clean = true;
            for r in k + 1..rows {
                let q = a[r][k] / p;
                if q != 0 {
                    for c in k..cols {
                        a[r][c] -= q * a[k][c];
                    }
                }
                clean &= a[r][k] == 0;
            }
            for c in k + 1..cols {
                let q = a[k][c] / p;
                if q != 0 {
                    for r in k..rows {
                        a[r][c] -= q * a[r][k];
                    }
                }
                clean &= a[k][c] == 0;
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (k + 1..rows)
                .flat_map(|r| (k + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| a[r][c] % p != 0);
            match bad {
                Some((r, _)) => {
                    for c in k..cols {
                        a[k][c] += a[r][c];
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    finish(diag)
}

fn finish(diag: Vec<i128>) -> Vec<i64> {
    diag.into_iter()
        .map(|d| i64::try_from(d).expect("invariant factor overflow"))
        .collect()
}
