//! Dense exact linear solving.
//!
//! Gauss-Jordan elimination over any [`Field`]. Division is exact, so no
//! fraction-free bookkeeping is needed; inconsistency is reported exactly.

use crate::field::Field;

/// One linear equation: coefficient row plus right-hand side.
pub struct Equation<F: Field> {
    pub coeffs: Vec<F::Elem>,
    pub rhs: F::Elem,
}

/// Solve the system exactly. Returns one solution with free variables set
/// to zero, or `None` when the system is inconsistent.
pub fn solve<F: Field>(field: &F, ncols: usize, eqs: &[Equation<F>]) -> Option<Vec<F::Elem>> {
    let mut rows: Vec<(Vec<F::Elem>, F::Elem)> = eqs
        .iter()
        .map(|eq| {
            assert_eq!(eq.coeffs.len(), ncols, "equation width mismatch");
            (eq.coeffs.clone(), eq.rhs.clone())
        })
        .collect();

    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    #[allow(clippy::needless_range_loop)] // col also indexes the rows
    for col in 0..ncols {
        let Some(pr) = (rank..rows.len()).find(|&r| !field.is_zero(&rows[r].0[col])) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = field.inv(&rows[rank].0[col]).expect("pivot is nonzero");
        for c in col..ncols {
            rows[rank].0[c] = field.mul(&rows[rank].0[c], &inv);
        }
        rows[rank].1 = field.mul(&rows[rank].1, &inv);
        for r in 0..rows.len() {
            if r != rank && !field.is_zero(&rows[r].0[col]) {
                let factor = rows[r].0[col].clone();
                for c in col..ncols {
                    let delta = field.mul(&factor, &rows[rank].0[c]);
                    rows[r].0[c] = field.sub(&rows[r].0[c], &delta);
                }
                let delta = field.mul(&factor, &rows[rank].1);
                rows[r].1 = field.sub(&rows[r].1, &delta);
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }

    // Any leftover row reading 0 = nonzero makes the system inconsistent.
    for (coeffs, rhs) in rows.iter().skip(rank) {
        if coeffs.iter().all(|c| field.is_zero(c)) && !field.is_zero(rhs) {
            return None;
        }
    }

    let mut solution = vec![field.zero(); ncols];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            solution[col] = rows[*r].1.clone();
        }
    }
    Some(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;

    fn eq(coeffs: &[i64], rhs: i64) -> Equation<Rationals> {
        let f = Rationals;
        Equation {
            coeffs: coeffs.iter().map(|&c| f.from_i64(c)).collect(),
            rhs: f.from_i64(rhs),
        }
    }

    #[test]
    fn solves_square_system() {
        let f = Rationals;
        let sol = solve(&f, 2, &[eq(&[2, 1], 5), eq(&[1, -1], 1)]).unwrap();
        assert_eq!(sol, vec![f.from_i64(2), f.from_i64(1)]);
    }

    #[test]
    fn reports_inconsistency() {
        let f = Rationals;
        assert!(solve(&f, 2, &[eq(&[1, 1], 1), eq(&[2, 2], 3)]).is_none());
    }

    #[test]
    fn underdetermined_sets_free_vars_to_zero() {
        let f = Rationals;
        let sol = solve(&f, 3, &[eq(&[1, 1, 0], 4)]).unwrap();
        assert_eq!(sol, vec![f.from_i64(4), f.zero(), f.zero()]);
    }

    #[test]
    fn zero_columns_system() {
        let f = Rationals;
        assert!(solve(&f, 0, &[Equation { coeffs: vec![], rhs: f.from_i64(1) }]).is_none());
        assert_eq!(solve(&f, 0, &[]).unwrap(), Vec::<num::BigRational>::new());
    }
}
