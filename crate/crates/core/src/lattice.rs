//! Integer lattices: Hermite normal form, kernels, reduction modulo a
//! sublattice and Smith invariants. Vectors are rows of exact integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

/// A sublattice of Z^n stored by its row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<IntVec>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self::span(dim, (0..dim).map(|i| unit(dim, i)).collect())
    }

    pub fn span(dim: usize, gens: Vec<IntVec>) -> Self {
        for g in &gens {
            assert_eq!(g.len(), dim, "generator of the wrong length");
        }
        let basis = hnf(gens);
        let pivots = basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
        Lattice { dim, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Canonical basis; two lattices are equal iff their bases are.
    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> IntVec {
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &q * b;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Coefficients expressing `v` in the canonical basis, if `v` lies in
    /// the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<IntVec> {
        let mut v = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.basis.len());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, r) = v[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a -= &q * b;
            }
            coeffs.push(q);
        }
        v.iter().all(Zero::is_zero).then_some(coeffs)
    }
}

pub fn unit(dim: usize, i: usize) -> IntVec {
    (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Row Hermite normal form: nonzero rows with strictly increasing pivots,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(mut rows: Vec<IntVec>) -> Vec<IntVec> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        // gcd-eliminate column c below row r
        loop {
            let pivot = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(pi) = pivot else { break };
            rows.swap(r, pi);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[r]) {
                    *a -= &q * b;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for a in rows[r].iter_mut() {
                *a = -&*a;
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                let (head, tail) = rows.split_at_mut(r);
                for (a, b) in head[i].iter_mut().zip(&tail[0]) {
                    *a -= &q * b;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    rows
}

/// A basis of `{v ∈ Z^n | M v = 0}` for an `m × n` matrix given by rows.
/// The result spans a saturated sublattice (it is the full integer kernel).
pub fn kernel(matrix: &[IntVec], n: usize) -> Vec<IntVec> {
    let m = matrix.len();
    // rows of [Mᵀ | I]; echelonize the first m columns
    let mut rows: Vec<IntVec> = (0..n)
        .map(|j| {
            let mut row: IntVec = matrix.iter().map(|r| r[j].clone()).collect();
            row.extend(unit(n, j));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..m {
        loop {
            let pivot = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(pi) = pivot else { break };
            rows.swap(r, pi);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[r]) {
                    *a -= &q * b;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                r += 1;
                break;
            }
        }
    }
    let kernel_rows: Vec<IntVec> = rows[r..].iter().map(|row| row[m..].to_vec()).collect();
    hnf(kernel_rows)
}

/// Invariant factors `d_1 | d_2 | ...` (nonzero ones only) of the row span.
pub fn smith_invariants(rows: &[IntVec]) -> Vec<BigInt> {
    let mut a: Vec<IntVec> = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the remaining block
        let best = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()));
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[t]) {
                    *x -= &q * y;
                }
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..ncols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut() {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // enforce divisibility against the rest of the block
        let bad = (t + 1..nrows).flat_map(|i| (t + 1..ncols).map(move |j| (i, j))).find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
        if let Some((i, _)) = bad {
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                *x += y;
            }
            continue;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}
