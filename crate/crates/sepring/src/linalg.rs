//! Deterministic exact linear algebra over the prime fields F_p.
//!
//! Every routine breaks ties by lowest index (pivot choice, free variables,
//! basis completion), so all downstream constructions are bit-reproducible.

use crate::error::{Error, Result};

/// Dense matrix over F_p, entries stored row-major in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

/// Modular inverse of `x` mod prime `p`.
pub fn inv_mod(x: u64, p: u64) -> u64 {
    // extended Euclid; x must be nonzero mod p
    let (mut a, mut b) = (x as i128 % p as i128, p as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while b != 0 {
        let q = a / b;
        let t = a - q * b;
        a = b;
        b = t;
        let t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    debug_assert_eq!(a, 1, "inv_mod of non-unit");
    s0.rem_euclid(p as i128) as u64
}

impl Mat {
    pub fn new(rows: usize, cols: usize, p: u64, data: Vec<i64>) -> Self {
        assert_eq!(rows * cols, data.len());
        let data = data
            .into_iter()
            .map(|v| (v.rem_euclid(p as i64)) as u64)
            .collect();
        Mat { rows, cols, p, data }
    }

    pub fn from_rows(p: u64, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.iter().map(|v| v.rem_euclid(p as i64) as u64));
        }
        Mat { rows: r, cols: c, p, data }
    }

    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        Mat { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Mat::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        Mat { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + self.p - b) % self.p)
            .collect();
        Mat { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|&a| (self.p - a) % self.p).collect();
        Mat { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn scale(&self, k: u64) -> Mat {
        let k = k % self.p;
        let data = self.data.iter().map(|&a| a * k % self.p).collect();
        Mat { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "mul shape mismatch");
        assert_eq!(self.p, other.p);
        let mut out = Mat::zeros(self.rows, other.cols, self.p);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = (out.get(r, c) + a * other.get(k, c)) % self.p;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Columns `sel` of `self`, in the order given.
    pub fn select_cols(&self, sel: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.rows, sel.len(), self.p);
        for (j, &c) in sel.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, sel: &[usize]) -> Mat {
        let mut out = Mat::zeros(sel.len(), self.cols, self.p);
        for (i, &r) in sel.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c));
            }
        }
        out
    }

    /// `[self | other]` side by side.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // lowest-index pivot row
            let mut pr = None;
            for r in row..m.rows {
                if m.get(r, col) != 0 {
                    pr = Some(r);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != row {
                for c in 0..m.cols {
                    let (a, b) = (m.get(row, c), m.get(pr, c));
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = inv_mod(m.get(row, col), m.p);
            for c in 0..m.cols {
                m.set(row, c, m.get(row, c) * inv % m.p);
            }
            for r in 0..m.rows {
                if r != row && m.get(r, col) != 0 {
                    let f = m.get(r, col);
                    for c in 0..m.cols {
                        let v = (m.get(r, c) + (m.p - f) * m.get(row, c)) % m.p;
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Row indices of the leading entries of the column space, i.e. the pivot
    /// columns of the transpose. Used for deterministic basis completion.
    pub fn pivot_rows(&self) -> Vec<usize> {
        self.transpose().rref().1
    }

    /// Canonical basis of the right nullspace, one column per free variable,
    /// free variables in ascending column order set to 1.
    pub fn nullspace(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols, free.len(), self.p);
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, fc);
                if v != 0 {
                    out.set(pc, j, (self.p - v) % self.p);
                }
            }
        }
        out
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Two-sided inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let x = solve_right(self, &Mat::identity(self.rows, self.p))?;
        if self.mul(&x) != Mat::identity(self.rows, self.p) {
            return Err(Error::NoSolution);
        }
        Ok(x)
    }
}

/// Full rank factorization `A = C * B` with `C` the pivot columns of `A`
/// (full column rank) and `B` the nonzero rows of `RREF(A)` (full row rank).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFactorization {
    pub c: Mat,
    pub b: Mat,
    pub rank: usize,
}

pub fn rref_rank_factor(a: &Mat) -> RankFactorization {
    let (r, pivots) = a.rref();
    let rank = pivots.len();
    let c = a.select_cols(&pivots);
    let b = r.select_rows(&(0..rank).collect::<Vec<_>>());
    debug_assert_eq!(c.mul(&b), *a);
    RankFactorization { c, b, rank }
}

/// Least solution of `A * X = T` with free variables set to zero.
pub fn solve_right(a: &Mat, t: &Mat) -> Result<Mat> {
    if a.rows != t.rows || a.p != t.p {
        return Err(Error::ShapeMismatch(format!(
            "solve: A is {}x{}, T is {}x{}",
            a.rows, a.cols, t.rows, t.cols
        )));
    }
    let aug = a.hcat(t);
    let (r, pivots) = aug.rref();
    // a pivot landing in the T block means the system is inconsistent
    let apivots: Vec<usize> = pivots.iter().copied().filter(|&c| c < a.cols).collect();
    if apivots.len() != pivots.len() {
        return Err(Error::NoSolution);
    }
    let mut x = Mat::zeros(a.cols, t.cols, a.p);
    for (i, &pc) in apivots.iter().enumerate() {
        for c in 0..t.cols {
            x.set(pc, c, r.get(i, a.cols + c));
        }
    }
    debug_assert_eq!(a.mul(&x), *t);
    Ok(x)
}

/// Least solution of `X * A = T`, via the transposed right solve.
pub fn solve_left(a: &Mat, t: &Mat) -> Result<Mat> {
    if a.cols != t.cols || a.p != t.p {
        return Err(Error::ShapeMismatch(format!(
            "solve: A is {}x{}, T is {}x{}",
            a.rows, a.cols, t.rows, t.cols
        )));
    }
    Ok(solve_right(&a.transpose(), &t.transpose())?.transpose())
}

/// Extends a full-column-rank `C` (n x r) to an invertible n x n matrix whose
/// first r columns equal `C`. The added columns are the standard basis
/// vectors at the non-leading row indices of `C`, in ascending order.
pub fn complete_to_unit(c: &Mat) -> Result<Mat> {
    let n = c.rows();
    let r = c.cols();
    if c.rank() != r {
        return Err(Error::Precondition("complete_to_unit: C must have full column rank".into()));
    }
    let lead = c.pivot_rows();
    let mut u = Mat::zeros(n, n, c.modulus());
    for j in 0..r {
        for i in 0..n {
            u.set(i, j, c.get(i, j));
        }
    }
    let mut j = r;
    for i in 0..n {
        if !lead.contains(&i) {
            u.set(i, j, 1);
            j += 1;
        }
    }
    debug_assert!(u.is_invertible());
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(state: &mut u64) -> u64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        *state >> 33
    }

    fn random_mat(rows: usize, cols: usize, p: u64, state: &mut u64) -> Mat {
        let data: Vec<i64> = (0..rows * cols).map(|_| (lcg(state) % p) as i64).collect();
        Mat::new(rows, cols, p, data)
    }

    #[test]
    fn rank_factor_zero_matrix() {
        let a = Mat::zeros(2, 2, 2);
        let f = rref_rank_factor(&a);
        assert_eq!(f.rank, 0);
        assert_eq!(f.c.cols(), 0);
        assert_eq!(f.b.rows(), 0);
    }

    #[test]
    fn rank_factor_identity() {
        let a = Mat::identity(3, 5);
        let f = rref_rank_factor(&a);
        assert_eq!(f.rank, 3);
        assert_eq!(f.c, a);
        assert_eq!(f.b, a);
    }

    #[test]
    fn rank_factor_rank_one() {
        let a = Mat::from_rows(5, &[&[1, 2], &[2, 4]]);
        let f = rref_rank_factor(&a);
        assert_eq!(f.rank, 1);
        assert_eq!(f.c, Mat::from_rows(5, &[&[1], &[2]]));
        assert_eq!(f.b, Mat::from_rows(5, &[&[1, 2]]));
        assert_eq!(f.c.mul(&f.b), a);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let i = Mat::identity(2, 3);
        let t = Mat::from_rows(3, &[&[1, 2], &[0, 1]]);
        assert_eq!(solve_right(&i, &t).unwrap(), t);
        let zero = Mat::zeros(2, 2, 3);
        assert!(matches!(solve_right(&zero, &t), Err(Error::NoSolution)));
    }

    #[test]
    fn solve_with_free_variables_set_to_zero() {
        let a = Mat::from_rows(3, &[&[1, 0], &[0, 0]]);
        let t = a.clone();
        let x = solve_right(&a, &t).unwrap();
        assert_eq!(x, Mat::from_rows(3, &[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn solve_left_mirrors_right() {
        let mut st = 7u64;
        for _ in 0..50 {
            let a = random_mat(3, 3, 5, &mut st);
            let x0 = random_mat(3, 3, 5, &mut st);
            let t = x0.mul(&a);
            let x = solve_left(&a, &t).unwrap();
            assert_eq!(x.mul(&a), t);
        }
    }

    #[test]
    fn complete_standard_vector() {
        let c = Mat::from_rows(2, &[&[1], &[0], &[0]]);
        assert_eq!(complete_to_unit(&c).unwrap(), Mat::identity(3, 2));
    }

    #[test]
    fn complete_empty() {
        let c = Mat::zeros(2, 0, 2);
        assert_eq!(complete_to_unit(&c).unwrap(), Mat::identity(2, 2));
    }

    #[test]
    fn complete_one_one_column() {
        let c = Mat::from_rows(2, &[&[1], &[1]]);
        let u = complete_to_unit(&c).unwrap();
        assert_eq!(u, Mat::from_rows(2, &[&[1, 0], &[1, 1]]));
        assert!(u.is_invertible());
    }

    #[test]
    fn rank_factor_random() {
        let mut st = 42u64;
        for _ in 0..200 {
            let a = random_mat(4, 4, 3, &mut st);
            let f = rref_rank_factor(&a);
            assert_eq!(f.c.mul(&f.b), a);
            assert_eq!(f.c.rank(), f.rank);
            assert_eq!(f.b.rank(), f.rank);
        }
    }

    #[test]
    fn solve_right_solves_consistent_systems() {
        let mut st = 99u64;
        for _ in 0..200 {
            let a = random_mat(3, 4, 5, &mut st);
            let x0 = random_mat(4, 2, 5, &mut st);
            let t = a.mul(&x0);
            let x = solve_right(&a, &t).unwrap();
            assert_eq!(a.mul(&x), t);
        }
    }

    #[test]
    fn complete_to_unit_always_invertible() {
        let mut st = 5u64;
        for _ in 0..200 {
            let a = random_mat(4, 3, 3, &mut st);
            let f = rref_rank_factor(&a);
            let u = complete_to_unit(&f.c).unwrap();
            assert!(u.is_invertible());
            for j in 0..f.rank {
                for i in 0..4 {
                    assert_eq!(u.get(i, j), f.c.get(i, j));
                }
            }
        }
    }

    #[test]
    fn nullspace_is_kernel_basis() {
        let mut st = 11u64;
        for _ in 0..100 {
            let a = random_mat(3, 5, 3, &mut st);
            let ns = a.nullspace();
            assert_eq!(ns.cols(), 5 - a.rank());
            assert!(a.mul(&ns).is_zero());
            assert_eq!(ns.rank(), ns.cols());
        }
    }
}
