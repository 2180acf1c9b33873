//! Exact dense Gaussian elimination over a field-like scalar.
//!
//! Systems here are small (tens of unknowns) but heavily overdetermined, so
//! plain row reduction with exact arithmetic is the right tool.

use crate::poly::Coeff;

/// Result of solving `A x = b`: a particular solution plus a basis of the
/// homogeneous nullspace.
pub struct LinearSolution<T> {
    pub particular: Vec<T>,
    pub nullspace: Vec<Vec<T>>,
}

/// Solve an exact linear system.  `rows` are dense coefficient rows of equal
/// length `n`, `rhs` the corresponding right-hand sides.  Returns `None` when
/// the system is inconsistent.
pub fn solve<T: Coeff>(rows: Vec<Vec<T>>, rhs: Vec<T>, n: usize) -> Option<LinearSolution<T>> {
    assert_eq!(rows.len(), rhs.len());
    let mut aug: Vec<Vec<T>> = rows
        .into_iter()
        .zip(rhs)
        .map(|(mut r, b)| {
            assert_eq!(r.len(), n);
            r.push(b);
            r
        })
        .collect();
    let m = aug.len();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, p);
        let pv = aug[rank][col].clone();
        for x in aug[rank].iter_mut() {
            *x = x.clone() / pv.clone();
        }
        for i in 0..m {
            if i != rank && !aug[i][col].is_zero() {
                let f = aug[i][col].clone();
                let pivot_row = aug[rank].clone();
                for (x, y) in aug[i].iter_mut().zip(pivot_row) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    if aug[rank..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut particular = vec![T::zero(); n];
    for (i, &c) in pivot_cols.iter().enumerate() {
        particular[c] = aug[i][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let nullspace = free
        .iter()
        .map(|&fc| {
            let mut v = vec![T::zero(); n];
            v[fc] = T::one();
            for (i, &c) in pivot_cols.iter().enumerate() {
                v[c] = -aug[i][fc].clone();
            }
            v
        })
        .collect();
    Some(LinearSolution { particular, nullspace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn unique_solution() {
        let sol = solve(
            vec![vec![r(2), r(1)], vec![r(1), r(-1)]],
            vec![r(5), r(1)],
            2,
        )
        .unwrap();
        assert_eq!(sol.particular, vec![r(2), r(1)]);
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn underdetermined() {
        let sol = solve(vec![vec![r(1), r(1)]], vec![r(3)], 2).unwrap();
        assert_eq!(sol.nullspace.len(), 1);
        let null = &sol.nullspace[0];
        assert_eq!(
            null[0].clone() + null[1].clone(),
            r(0),
        );
    }

    #[test]
    fn inconsistent() {
        assert!(solve(
            vec![vec![r(1), r(1)], vec![r(2), r(2)]],
            vec![r(1), r(3)],
            2
        )
        .is_none());
    }
}
