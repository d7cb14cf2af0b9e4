//! Sparse exact linear algebra over the rationals.
//!
//! Matrices are immutable once built, entries are stored sparsely with no
//! explicit zeros, and rank/kernel run a fraction-free integer elimination:
//! rows are cleared of denominators, cross-multiplied, and divided by their
//! content gcd after every step. Pivoting is deterministic (shortest
//! surviving row, ties by original index, then its smallest column), so
//! every rank and kernel basis is reproducible across runs and machines.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Sparse matrix over the rationals with immutable dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rat::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Set entry (i, j); storing a zero removes the entry.
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        assert!(i < self.rows && j < self.cols, "entry out of bounds");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    /// Add `v` into entry (i, j).
    pub fn add_to(&mut self, i: usize, j: usize, v: &Rat) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j) + v;
        self.set(i, j, cur);
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.cols, self.rows);
        for (&(i, j), v) in &self.entries {
            t.entries.insert((j, i), v.clone());
        }
        t
    }

    /// Exact sparse product `self * other`.
    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in other.entries.range((k, 0)..=(k, usize::MAX)) {
                out.add_to(i, j, &(a * b));
            }
        }
        out
    }

    /// Exact matrix-vector product.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let mut out = vec![Rat::zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            if !v[j].is_zero() {
                out[i] += a * &v[j];
            }
        }
        out
    }

    /// Exact rank over the rationals via fraction-free elimination.
    pub fn rank(&self) -> usize {
        echelon(self.integer_rows()).len()
    }

    /// Basis of the right kernel; each returned vector `v` satisfies
    /// `self * v = 0` exactly and the basis has `cols - rank` elements.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let pivots = echelon(self.integer_rows());
        let pivot_cols: Vec<usize> = pivots.iter().map(|r| r[0].0).collect();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free_cols: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();

        let mut basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            // Retired pivot rows contain no earlier pivot column, so a single
            // reverse sweep resolves every pivot coordinate.
            for (idx, row) in pivots.iter().enumerate().rev() {
                let pc = pivot_cols[idx];
                let mut acc = Rat::zero();
                for (c, a) in row.iter().skip(1) {
                    if !v[*c].is_zero() {
                        acc += Rat::from_integer(a.clone()) * &v[*c];
                    }
                }
                if acc.is_zero() {
                    v[pc] = Rat::zero();
                } else {
                    v[pc] = -acc / Rat::from_integer(row[0].1.clone());
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Clear denominators row by row and strip the content gcd, producing
    /// sorted integer rows for elimination. Empty rows are dropped.
    fn integer_rows(&self) -> Vec<IntRow> {
        let mut rows: Vec<IntRow> = vec![Vec::new(); self.rows];
        let mut denoms: Vec<BigInt> = vec![BigInt::one(); self.rows];
        for (&(i, _), v) in &self.entries {
            denoms[i] = denoms[i].lcm(v.denom());
        }
        for (&(i, j), v) in &self.entries {
            let scaled = v.numer() * (&denoms[i] / v.denom());
            rows[i].push((j, scaled));
        }
        rows.retain(|r| !r.is_empty());
        for row in &mut rows {
            remove_content(row);
        }
        rows
    }
}

/// Sorted sparse integer row: (column, value) with value != 0.
type IntRow = Vec<(usize, BigInt)>;

/// Divide a row by the gcd of its entries.
fn remove_content(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_one() || g.is_zero() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// `pivot_val * row - row_val * pivot`, merged over sorted columns, with the
/// pivot column cancelled exactly.
fn eliminate_row(row: &IntRow, row_val: &BigInt, pivot: &IntRow, pivot_val: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (0usize, 0usize);
    while a < row.len() || b < pivot.len() {
        let next = match (row.get(a), pivot.get(b)) {
            (Some(&(ca, _)), Some(&(cb, _))) if ca == cb => {
                let v = pivot_val * &row[a].1 - row_val * &pivot[b].1;
                a += 1;
                b += 1;
                (ca, v)
            }
            (Some(&(ca, _)), Some(&(cb, _))) if ca < cb => {
                let v = pivot_val * &row[a].1;
                a += 1;
                (ca, v)
            }
            (Some(_), Some(&(cb, _))) => {
                let v = -(row_val * &pivot[b].1);
                b += 1;
                (cb, v)
            }
            (Some(&(ca, _)), None) => {
                let v = pivot_val * &row[a].1;
                a += 1;
                (ca, v)
            }
            (None, Some(&(cb, _))) => {
                let v = -(row_val * &pivot[b].1);
                b += 1;
                (cb, v)
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    remove_content(&mut out);
    out
}

/// Fraction-free forward elimination. Returns the retired pivot rows in
/// retirement order; each starts at its pivot column, and no later row
/// contains an earlier pivot column.
fn echelon(mut rows: Vec<IntRow>) -> Vec<IntRow> {
    let mut pivots: Vec<IntRow> = Vec::new();
    // Deterministic pivot: shortest surviving row (fewest entries), ties by
    // original order; then its smallest column.
    let pick = |rows: &Vec<IntRow>| {
        rows.iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .min_by_key(|(i, r)| (r.len(), *i))
            .map(|(i, _)| i)
    };
    while let Some(pi) = pick(&rows) {
        let pivot = rows.remove(pi);
        let (pc, pv) = (pivot[0].0, pivot[0].1.clone());
        for row in rows.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                let rv = row[pos].1.clone();
                *row = eliminate_row(row, &rv, &pivot, &pv);
            }
        }
        rows.retain(|r| !r.is_empty());
        pivots.push(pivot);
    }
    pivots
}

/// Binomial coefficient with the usual out-of-range-is-zero convention.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n || n < 0 {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// Strictly increasing index tuple into a fixed ambient basis; the exterior
/// basis element e_{i1} ∧ ... ∧ e_{ip}. Enumeration order is lexicographic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeIndex {
    pub ambient_dim: usize,
    pub tuple: Vec<usize>,
}

impl WedgeIndex {
    pub fn new(ambient_dim: usize, tuple: Vec<usize>) -> Result<Self> {
        if !tuple.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Precondition("wedge tuple not strictly increasing".into()));
        }
        if tuple.iter().any(|&i| i >= ambient_dim) {
            return Err(Error::Precondition("wedge index out of range".into()));
        }
        Ok(WedgeIndex { ambient_dim, tuple })
    }

    pub fn degree(&self) -> usize {
        self.tuple.len()
    }

    /// All degree-`p` tuples over `0..n`, in lexicographic order.
    pub fn enumerate(n: usize, p: usize) -> Vec<WedgeIndex> {
        let mut out = Vec::new();
        if p > n {
            return out;
        }
        let mut cur: Vec<usize> = (0..p).collect();
        loop {
            out.push(WedgeIndex { ambient_dim: n, tuple: cur.clone() });
            // advance to next combination
            let mut i = p;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] != i + n - p {
                    break;
                }
                if i == 0 {
                    return out;
                }
            }
            cur[i] += 1;
            for j in i + 1..p {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }

    /// Position of this tuple in the lexicographic enumeration.
    pub fn lex_rank(&self) -> usize {
        let n = self.ambient_dim as i64;
        let p = self.tuple.len() as i64;
        let mut rank: i64 = 0;
        let mut prev: i64 = -1;
        for (i, &t) in self.tuple.iter().enumerate() {
            for v in (prev + 1)..(t as i64) {
                rank += binomial(n - 1 - v, p - 1 - i as i64);
            }
            prev = t as i64;
        }
        rank as usize
    }

    /// Tuple with the element at position `m` removed (stays increasing).
    pub fn remove(&self, m: usize) -> WedgeIndex {
        let mut t = self.tuple.clone();
        t.remove(m);
        WedgeIndex { ambient_dim: self.ambient_dim, tuple: t }
    }
}

/// Matrix of the induced map on p-th exterior powers, in lexicographic wedge
/// bases on both sides: entry ((I), (J)) is the minor det(base[I, J]).
pub fn wedge_map_matrix(base: &RatMatrix, p: usize) -> Result<RatMatrix> {
    if p > base.rows().min(base.cols()) {
        return Err(Error::Precondition(format!(
            "wedge power {p} exceeds min dimension of {}x{} map",
            base.rows(),
            base.cols()
        )));
    }
    if p == 0 {
        return Ok(RatMatrix::identity(1));
    }
    let row_sets = WedgeIndex::enumerate(base.rows(), p);
    let col_sets = WedgeIndex::enumerate(base.cols(), p);
    let mut out = RatMatrix::zero(row_sets.len(), col_sets.len());
    for (ri, rw) in row_sets.iter().enumerate() {
        for (ci, cw) in col_sets.iter().enumerate() {
            let minor: Vec<Vec<Rat>> = rw
                .tuple
                .iter()
                .map(|&i| cw.tuple.iter().map(|&j| base.get(i, j)).collect())
                .collect();
            out.set(ri, ci, det_dense(minor));
        }
    }
    Ok(out)
}

/// Determinant of a small dense matrix by rational elimination.
fn det_dense(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if pr != c {
            m.swap(pr, c);
            det = -det;
        }
        let pv = m[c][c].clone();
        det *= &pv;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pv;
            for k in c..n {
                let sub = &f * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    det
}
