//! Exact sparse linear algebra over the rationals.
//!
//! Rows are cleared of denominators and eliminated fraction-free on `i128`
//! entries; every row is kept primitive (gcd 1), which keeps entries tiny for
//! the 0/±1 systems produced by chain-map equations. Pivots are taken in
//! increasing column order so all outputs are deterministic.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::Scalar;

/// A sparse rational vector: `(index, value)` pairs, sorted, no zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

type IntRow = Vec<(usize, i128)>;

/// Normalize a sparse rational vector: sort, merge duplicates, drop zeros.
pub fn normalize(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

fn to_int_row(v: &[(usize, Scalar)]) -> IntRow {
    let mut lcm: i128 = 1;
    for (_, x) in v {
        lcm = lcm.lcm(&(*x.denom() as i128));
    }
    let mut row: IntRow = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (*i, *x.numer() as i128 * (lcm / *x.denom() as i128)))
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    let mut g: i128 = 0;
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g == 1 {
            break;
        }
    }
    if g > 1 {
        for e in row.iter_mut() {
            e.1 /= g;
        }
    }
}

fn get(row: &IntRow, col: usize) -> i128 {
    match row.binary_search_by_key(&col, |e| e.0) {
        Ok(j) => row[j].1,
        Err(_) => 0,
    }
}

/// `a·r - b·s`, made primitive.
fn combine(a: i128, r: &IntRow, b: i128, s: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < s.len() {
        let ci = r.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = s.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (col, val) = if ci == cj {
            let v = a * r[i].1 - b * s[j].1;
            i += 1;
            j += 1;
            (ci, v)
        } else if ci < cj {
            i += 1;
            (ci, a * r[i - 1].1)
        } else {
            j += 1;
            (cj, -b * s[j - 1].1)
        };
        if val != 0 {
            out.push((col, val));
        }
    }
    make_primitive(&mut out);
    out
}

/// Eliminates column `col` of `target` using `pivot` (whose entry at `col`
/// is nonzero).
fn eliminate(target: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let t = get(target, col);
    if t == 0 {
        return target.clone();
    }
    let p = get(pivot, col);
    let g = t.gcd(&p);
    combine(p / g, target, t / g, pivot)
}

/// A row-echelon basis of a subspace, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<IntRow>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_int(&self, mut v: IntRow) -> IntRow {
        while let Some(&(lead, _)) = v.first() {
            match self.pivots.get(&lead) {
                Some(&r) => v = eliminate(&v, &self.rows[r], lead),
                None => break,
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let r = self.reduce_int(to_int_row(v));
        if r.is_empty() {
            return false;
        }
        self.pivots.insert(r[0].0, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce_int(to_int_row(v)).is_empty()
    }
}

/// Reduced row-echelon form of a system of equations.
struct Rref {
    /// Each row with its pivot column; pivot columns occur in no other row.
    rows: Vec<(usize, IntRow)>,
}

impl Rref {
    fn new(equations: impl IntoIterator<Item = IntRow>) -> Self {
        let mut ech = Echelon::new();
        for eq in equations {
            let r = ech.reduce_int(eq);
            if !r.is_empty() {
                ech.pivots.insert(r[0].0, ech.rows.len());
                ech.rows.push(r);
            }
        }
        // Back-substitution in decreasing pivot order.
        let order: Vec<(usize, usize)> = ech.pivots.iter().rev().map(|(c, r)| (*c, *r)).collect();
        let mut rows = ech.rows;
        for &(col, ri) in &order {
            let pivot = rows[ri].clone();
            for (rj, row) in rows.iter_mut().enumerate() {
                if rj != ri && get(row, col) != 0 {
                    *row = eliminate(row, &pivot, col);
                }
            }
        }
        let mut out: Vec<(usize, IntRow)> = rows.into_iter().map(|r| (r[0].0, r)).collect();
        out.sort_by_key(|e| e.0);
        Rref { rows: out }
    }
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows over `ncols`
/// unknowns. One vector per free column, in increasing column order.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let rref = Rref::new(rows.iter().map(|r| to_int_row(r)));
    let mut is_pivot = vec![false; ncols];
    for (c, _) in &rref.rows {
        is_pivot[*c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !is_pivot[*c]) {
        let mut v: Vec<(usize, Scalar)> = vec![(free, Scalar::from_integer(1))];
        for (pc, row) in &rref.rows {
            let x = get(row, free);
            if x != 0 {
                let p = get(row, *pc);
                v.push((*pc, -Scalar::new(x as i64, p as i64)));
            }
        }
        basis.push(normalize(v));
    }
    basis
}

/// Rank of the span of the given vectors.
pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Solves `Σ_j x_j · columns[j] = rhs`. Returns one solution (free variables
/// zero) or `None` when inconsistent.
pub fn solve_columns(columns: &[SparseVec], rhs: &SparseVec) -> Option<Vec<Scalar>> {
    let ncols = columns.len();
    let mut eqs: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col {
            eqs.entry(*i).or_default().push((j, *x));
        }
    }
    for (i, x) in rhs {
        eqs.entry(*i).or_default().push((ncols, *x));
    }
    let rref = Rref::new(eqs.into_values().map(|r| to_int_row(&normalize(r))));
    let mut sol = vec![Scalar::zero(); ncols];
    for (pc, row) in &rref.rows {
        if *pc == ncols {
            return None;
        }
        let p = get(row, *pc);
        let b = get(row, ncols);
        sol[*pc] = Scalar::new(b as i64, p as i64);
    }
    Some(sol)
}

/// Dense helper used by tests and small callers.
pub fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, *x)).collect()
}

pub fn is_zero_vec(v: &SparseVec) -> bool {
    v.iter().all(|e| e.1.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    fn dense_rank(m: &[Vec<i64>]) -> usize {
        rank(&m.iter().map(|r| dense_to_sparse(&r.iter().map(|x| q(*x)).collect::<Vec<_>>())).collect::<Vec<_>>())
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(dense_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(dense_rank(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]), 2);
        assert_eq!(dense_rank(&[vec![0, 0]]), 0);
        assert_eq!(dense_rank(&[vec![2, 3], vec![3, 5]]), 2);
    }

    #[test]
    fn nullspace_vectors_are_in_kernel() {
        let rows = vec![
            dense_to_sparse(&[q(1), q(1), q(0), q(-1)]),
            dense_to_sparse(&[q(0), q(2), q(1), q(1)]),
        ];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let mut dot = Scalar::zero();
                for (i, a) in r {
                    for (j, b) in v {
                        if i == j {
                            dot += a * b;
                        }
                    }
                }
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let cols = vec![dense_to_sparse(&[q(1), q(1)]), dense_to_sparse(&[q(1), q(-1)])];
        let x = solve_columns(&cols, &dense_to_sparse(&[q(3), q(1)])).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let cols = vec![dense_to_sparse(&[q(1), q(1)])];
        assert!(solve_columns(&cols, &dense_to_sparse(&[q(1), q(2)])).is_none());
        assert_eq!(solve_columns(&cols, &vec![]).unwrap(), vec![q(0)]);
    }

    #[test]
    fn rational_inputs() {
        let cols = vec![vec![(0, Scalar::new(1, 2))], vec![(1, Scalar::new(2, 3))]];
        let x = solve_columns(&cols, &vec![(0, q(1)), (1, q(1))]).unwrap();
        assert_eq!(x, vec![q(2), Scalar::new(3, 2)]);
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&dense_to_sparse(&[q(1), q(2), q(0)])));
        assert!(e.insert(&dense_to_sparse(&[q(0), q(1), q(1)])));
        assert!(!e.insert(&dense_to_sparse(&[q(2), q(5), q(1)])));
        assert!(e.contains(&dense_to_sparse(&[q(1), q(3), q(1)])));
        assert!(!e.contains(&dense_to_sparse(&[q(0), q(0), q(1)])));
    }
}
