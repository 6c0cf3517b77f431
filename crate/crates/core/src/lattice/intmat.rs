//! Integer matrix reductions: Smith and Hermite normal forms, integer kernels
//! and saturation of sublattices of ℤⁿ.
//!
//! Matrices are dense `Vec<Vec<i128>>` in row-major order. Sizes here are tiny
//! (rank plus torsion count), so no attempt is made at coefficient-growth
//! control beyond using 128-bit entries.

pub type IntMatrix = Vec<Vec<i128>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Result of a Smith reduction `u · a · v = d`.
///
/// `u_inv` and `v_inv` are tracked alongside so callers never need to invert a
/// unimodular matrix.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Diagonal entries `d[0] | d[1] | ...`, length `min(rows, cols)`.
    pub diagonal: Vec<i128>,
    pub rank: usize,
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: i128) {
        if q == 0 {
            return;
        }
        for c in 0..self.cols {
            let t = self.a[j][c];
            self.a[i][c] += q * t;
        }
        for c in 0..self.rows {
            let t = self.u[j][c];
            self.u[i][c] += q * t;
        }
        for row in self.u_inv.iter_mut() {
            let t = row[i];
            row[j] -= q * t;
        }
    }

    /// col_j += q * col_i
    fn add_col(&mut self, j: usize, i: usize, q: i128) {
        if q == 0 {
            return;
        }
        for row in self.a.iter_mut() {
            let t = row[i];
            row[j] += q * t;
        }
        for row in self.v.iter_mut() {
            let t = row[i];
            row[j] += q * t;
        }
        for c in 0..self.cols {
            let t = self.v_inv[j][c];
            self.v_inv[i][c] -= q * t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -row[i];
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.a[i][j].abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith(a: &IntMatrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut r = Reducer {
        a: a.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
        rows,
        cols,
    };
    let steps = rows.min(cols);
    let mut rank = 0;
    for t in 0..steps {
        let Some((pi, pj)) = r.min_entry(t) else {
            break;
        };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = r.a[i][t].div_euclid(r.a[t][t]);
                r.add_row(i, t, -q);
                if r.a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = r.a[t][j].div_euclid(r.a[t][t]);
                r.add_col(j, t, -q);
                if r.a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = r.min_entry_in_cross(t);
                r.swap_rows(t, pi);
                r.swap_cols(t, pj);
                continue;
            }
            // divisibility of the remaining block
            let p = r.a[t][t];
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| r.a[i][j] % p != 0));
            match bad {
                Some(i) => r.add_row(t, i, 1),
                None => break,
            }
        }
        if r.a[t][t] < 0 {
            r.negate_row(t);
        }
        rank += 1;
    }
    let diagonal = (0..steps).map(|i| r.a[i][i]).collect();
    Smith {
        u: r.u,
        u_inv: r.u_inv,
        v: r.v,
        v_inv: r.v_inv,
        diagonal,
        rank,
    }
}

impl Reducer {
    /// Smallest nonzero entry in row t / column t (used after a partial
    /// elimination left remainders).
    fn min_entry_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut val = self.a[t][t].abs();
        for i in t..self.rows {
            let x = self.a[i][t].abs();
            if x != 0 && (val == 0 || x < val) {
                best = (i, t);
                val = x;
            }
        }
        for j in t..self.cols {
            let x = self.a[t][j].abs();
            if x != 0 && (val == 0 || x < val) {
                best = (t, j);
                val = x;
            }
        }
        best
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows
/// are dropped. Pivots are positive and entries above a pivot are reduced into
/// `[0, pivot)`, so the result is a canonical basis of the lattice.
pub fn hermite(rows: &[Vec<i128>], cols: usize) -> IntMatrix {
    let mut m: IntMatrix = rows.to_vec();
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row >= m.len() {
            break;
        }
        // Euclid on column c among rows pivot_row..
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..m.len() {
                if m[i][c] != 0 && best.is_none_or(|b| m[i][c].abs() < m[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c].div_euclid(m[pivot_row][c]);
                    let (head, tail) = m.split_at_mut(i);
                    for (x, y) in tail[0].iter_mut().zip(head[pivot_row].iter()) {
                        *x -= q * y;
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][c] == 0 {
            continue;
        }
        if m[pivot_row][c] < 0 {
            for x in m[pivot_row].iter_mut() {
                *x = -*x;
            }
        }
        let p = m[pivot_row][c];
        for i in 0..pivot_row {
            let q = m[i][c].div_euclid(p);
            if q != 0 {
                let (head, tail) = m.split_at_mut(pivot_row);
                for (x, y) in head[i].iter_mut().zip(tail[0].iter()) {
                    *x -= q * y;
                }
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Basis of the saturation `(span_ℚ rows) ∩ ℤⁿ`, in Hermite normal form.
pub fn saturate(rows: &[Vec<i128>], cols: usize) -> IntMatrix {
    if rows.is_empty() {
        return Vec::new();
    }
    let s = smith(&rows.to_vec(), cols);
    let basis: Vec<Vec<i128>> = s.v_inv[..s.rank].to_vec();
    hermite(&basis, cols)
}

/// Basis of `{x ∈ ℤⁿ : a·x = 0}`, in Hermite normal form.
pub fn integer_kernel(a: &[Vec<i128>], cols: usize) -> IntMatrix {
    if a.is_empty() {
        return identity(cols);
    }
    let s = smith(&a.to_vec(), cols);
    let basis: Vec<Vec<i128>> = (s.rank..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j]).collect())
        .collect();
    hermite(&basis, cols)
}

pub fn mat_vec(m: &IntMatrix, x: &[i128]) -> Vec<i128> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn rank(rows: &[Vec<i128>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    smith(&rows.to_vec(), cols).rank
}
