//! Exact dense linear algebra over a [`FieldSpec`].
//!
//! Everything here is exact: row echelon forms, ranks and nullspace bases are
//! computed with field arithmetic and never rounded. Matrices are small (one
//! row or column per path or per basis operator), so storage is dense.
//! [`SparseRowReducer`] covers the one place where the systems get tall: the
//! brute-force constraint systems of the oracle.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{FieldSpec, Scalar};

/// Dense row-major matrix over an exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed for the
    /// zero-row case.
    ///
    /// # Panics
    /// If a row has the wrong length or holds an element of another field.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            for x in row {
                assert_eq!(x.field(), field, "entry from a different field");
                entries.push(x);
            }
        }
        ExactMatrix {
            rows: n,
            cols,
            field,
            entries,
        }
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        debug_assert_eq!(x.field(), self.field);
        self.entries[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form and the pivot columns, strictly increasing.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m.get(r, j);
                if !x.is_zero() {
                    let y = x * &inv;
                    m.set(r, j, y);
                }
            }
            let pivot_row: Vec<Scalar> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for (j, x) in pivot_row.iter().enumerate().skip(c) {
                    if x.is_zero() {
                        continue;
                    }
                    let y = m.get(i, j) - &(&factor * x);
                    m.set(i, j, y);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical nullspace basis: one vector per free column, in column order,
    /// with a 1 in that free column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (e, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -e.get(i, free);
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a family of vectors of common length `dim`.
pub fn rank_of_vectors(field: FieldSpec, dim: usize, vectors: &[Vec<Scalar>]) -> usize {
    let mut reducer = SparseRowReducer::new(field, dim);
    for v in vectors {
        reducer.insert_dense(v);
    }
    reducer.rank()
}

/// A sparse row, column index to nonzero entry.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Incremental forward elimination for sparse rows.
///
/// Keeps one normalized row per pivot column. Inserting a row reduces it
/// against the stored pivots and keeps the remainder if it is nonzero.
#[derive(Debug, Clone)]
pub struct SparseRowReducer {
    field: FieldSpec,
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseRowReducer {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        SparseRowReducer {
            field,
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn insert_dense(&mut self, row: &[Scalar]) -> bool {
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        self.insert(sparse)
    }

    /// Returns true if the row was independent of the rows seen so far.
    pub fn insert(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, x| !x.is_zero());
        let mut cursor = 0usize;
        loop {
            let Some((&c, coeff)) = row.range(cursor..).next() else {
                return false;
            };
            debug_assert!(c < self.cols);
            match self.pivots.get(&c) {
                Some(pivot) => {
                    let factor = coeff.clone();
                    for (&j, x) in pivot {
                        let delta = &factor * x;
                        let updated = match row.get(&j) {
                            Some(old) => old - &delta,
                            None => -delta,
                        };
                        if updated.is_zero() {
                            row.remove(&j);
                        } else {
                            row.insert(j, updated);
                        }
                    }
                    cursor = c + 1;
                }
                None => {
                    // First surviving column without a pivot becomes one.
                    let lead = row.keys().next().copied().expect("nonempty");
                    let inv = row[&lead].inv().expect("nonzero lead");
                    for x in row.values_mut() {
                        *x = &*x * &inv;
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// True when `v` is orthogonal to every accumulated row.
    pub fn annihilates(&self, v: &[Scalar]) -> bool {
        self.pivots.values().all(|row| {
            let mut acc = self.field.zero();
            for (&j, x) in row {
                acc = &acc + &(x * &v[j]);
            }
            acc.is_zero()
        })
    }

    /// Nullspace basis of the accumulated rows (canonical free-column basis).
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        // Back-substitute from the highest pivot down to obtain reduced rows.
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&p, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let targets: Vec<usize> = r.keys().copied().filter(|&j| j != p && reduced.contains_key(&j)).collect();
            for j in targets {
                let Some(factor) = r.get(&j).cloned() else { continue };
                for (&k, x) in &reduced[&j] {
                    let delta = &factor * x;
                    let updated = match r.get(&k) {
                        Some(old) => old - &delta,
                        None => -delta,
                    };
                    if updated.is_zero() {
                        r.remove(&k);
                    } else {
                        r.insert(k, updated);
                    }
                }
            }
            reduced.insert(p, r);
        }
        (0..self.cols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (&p, row) in &reduced {
                    if let Some(x) = row.get(&free) {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }
}
