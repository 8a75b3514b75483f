//! Exact rational linear-algebra kernel.
//!
//! Everything downstream (short-vector enumeration, the double description
//! method, the block-size solver) runs on these types; there is no floating
//! point anywhere in the pipeline. Determinant and rank use fraction-free
//! (Bareiss) elimination on integer-scaled rows to bound intermediate growth.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational, always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("linear system is infeasible")]
    Infeasible,
}

/// Shorthand for small integer constants in tests and fixtures.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Shorthand for a rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

fn rat_int(n: Int) -> Rat {
    Rat::from_integer(n)
}

/// Debug-build audit: every rational must be reduced with positive denominator.
fn audit_reduced(entries: &[Rat]) {
    debug_assert!(entries.iter().all(|r| {
        r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
            || (r.numer().is_zero() && r.denom().is_one())
    }));
}

/// Dense rational vector with immutable length.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VecQ {
    entries: Vec<Rat>,
}

impl VecQ {
    pub fn new(entries: Vec<Rat>) -> Self {
        audit_reduced(&entries);
        VecQ { entries }
    }

    pub fn zeros(n: usize) -> Self {
        VecQ {
            entries: vec![Rat::zero(); n],
        }
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        VecQ {
            entries: entries.iter().map(|&n| rat(n, 1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn dot(&self, other: &VecQ) -> Rat {
        assert_eq!(self.len(), other.len());
        self.iter().zip(other.iter()).map(|(a, b)| a * b).sum()
    }
}

impl std::ops::Index<usize> for VecQ {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.entries[i]
    }
}

impl std::fmt::Debug for VecQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Dense rational matrix with immutable dimensions.
#[derive(Clone, PartialEq, Eq)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Exact affine description of the solution set of `A x = b`.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    /// One solution, free variables set to zero.
    pub particular: VecQ,
    /// Primitive integer basis of the nullspace of `A`.
    pub nullspace: Vec<VecQ>,
}

/// Row-reduced echelon form of an augmented system, exposed so callers can
/// enumerate integer points over the free columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub coeffs: Vec<Vec<Rat>>,
    pub rhs: Vec<Rat>,
    /// Pivot column of each pivot row, in row order.
    pub pivots: Vec<usize>,
    pub free_cols: Vec<usize>,
    pub consistent: bool,
}

impl MatQ {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        audit_reduced(&data);
        MatQ { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatQ::new(rows, cols, data)
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        MatQ::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        MatQ::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&n| rat(n, 1)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        MatQ::from_fn(n, n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        MatQ {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> VecQ {
        VecQ::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn transpose(&self) -> MatQ {
        MatQ::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &MatQ) -> MatQ {
        assert_eq!(self.cols, other.rows);
        MatQ::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.at(i, k) * other.at(k, j)).sum()
        })
    }

    pub fn mul_vec(&self, v: &VecQ) -> VecQ {
        assert_eq!(self.cols, v.len());
        VecQ::new(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|k| self.at(i, k) * &v[k]).sum())
                .collect(),
        )
    }

    /// LDL^T decomposition of a symmetric positive-definite matrix:
    /// returns unit lower-triangular `L` and positive diagonal `D` with
    /// `L diag(D) L^T = self` exactly.
    pub fn ldlt(&self) -> Result<(MatQ, VecQ), LinalgError> {
        assert!(self.is_symmetric(), "ldlt requires a symmetric matrix");
        let n = self.rows;
        let mut l = MatQ::identity(n);
        let mut d: Vec<Rat> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.at(j, j).clone();
            for k in 0..j {
                dj -= l.at(j, k) * l.at(j, k) * &d[k];
            }
            if !dj.is_positive() {
                return Err(LinalgError::NotPositiveDefinite);
            }
            for i in j + 1..n {
                let mut v = self.at(i, j).clone();
                for k in 0..j {
                    v -= l.at(i, k) * l.at(j, k) * &d[k];
                }
                l.set(i, j, v / &dj);
            }
            d.push(dj);
        }
        Ok((l, VecQ::new(d)))
    }

    /// Clears denominators row by row; returns integer rows and the product of
    /// the scaling factors (so det(self) = det(int rows) / product).
    fn integer_rows(&self) -> (Vec<Vec<Int>>, Int) {
        let mut scale = Int::one();
        let rows = (0..self.rows)
            .map(|i| {
                let mut l = Int::one();
                for j in 0..self.cols {
                    l = l.lcm(self.at(i, j).denom());
                }
                let row = (0..self.cols)
                    .map(|j| {
                        let e = self.at(i, j);
                        e.numer() * (&l / e.denom())
                    })
                    .collect();
                scale *= &l;
                row
            })
            .collect();
        (rows, scale)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det requires a square matrix");
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let (mut m, scale) = self.integer_rows();
        let mut sign = false;
        let mut prev = Int::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&p| !m[p][k].is_zero()) else {
                return Rat::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = t / &prev;
                }
                m[i][k] = Int::zero();
            }
            prev = m[k][k].clone();
        }
        let mut det = m[n - 1][n - 1].clone();
        if sign {
            det = -det;
        }
        Rat::new(det, scale)
    }

    /// Exact rank by fraction-free elimination with column pivoting.
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.integer_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = Int::one();
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&p| !m[p][col].is_zero()) else {
                continue;
            };
            m.swap(p, rank);
            for i in rank + 1..rows {
                for j in col + 1..cols {
                    let t = &m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j];
                    m[i][j] = t / &prev;
                }
                m[i][col] = Int::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Gauss-Jordan reduction of the augmented system `[self | b]`.
    pub fn rref_augmented(&self, b: &VecQ) -> Rref {
        assert_eq!(self.rows, b.len());
        let (rows, cols) = (self.rows, self.cols);
        let mut a: Vec<Vec<Rat>> = (0..rows)
            .map(|i| (0..cols).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut rhs: Vec<Rat> = b.iter().cloned().collect();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..cols {
            if prow == rows {
                break;
            }
            let Some(p) = (prow..rows).find(|&p| !a[p][col].is_zero()) else {
                continue;
            };
            a.swap(p, prow);
            rhs.swap(p, prow);
            let inv = a[prow][col].recip();
            for j in col..cols {
                let t = &a[prow][j] * &inv;
                a[prow][j] = t;
            }
            let t = &rhs[prow] * &inv;
            rhs[prow] = t;
            for i in 0..rows {
                if i != prow && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in col..cols {
                        let t = &a[i][j] - &f * &a[prow][j];
                        a[i][j] = t;
                    }
                    let t = &rhs[i] - &f * &rhs[prow];
                    rhs[i] = t;
                }
            }
            pivots.push(col);
            prow += 1;
        }
        let consistent = (prow..rows).all(|i| rhs[i].is_zero());
        let free_cols = (0..cols).filter(|c| !pivots.contains(c)).collect();
        Rref {
            coeffs: a,
            rhs,
            pivots,
            free_cols,
            consistent,
        }
    }

    /// Exact affine description of `{x : self * x = b}`: a particular solution
    /// plus a primitive integer basis of the nullspace.
    pub fn solve_affine(&self, b: &VecQ) -> Result<AffineSolution, LinalgError> {
        let rref = self.rref_augmented(b);
        if !rref.consistent {
            return Err(LinalgError::Infeasible);
        }
        let cols = self.cols;
        let mut particular = vec![Rat::zero(); cols];
        for (row, &col) in rref.pivots.iter().enumerate() {
            particular[col] = rref.rhs[row].clone();
        }
        let nullspace = rref
            .free_cols
            .iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); cols];
                v[f] = Rat::one();
                for (row, &col) in rref.pivots.iter().enumerate() {
                    v[col] = -rref.coeffs[row][f].clone();
                }
                primitive_integer(&v)
            })
            .collect();
        Ok(AffineSolution {
            particular: VecQ::new(particular),
            nullspace,
        })
    }

    /// Exact inverse, `None` when singular.
    pub fn inverse(&self) -> Option<MatQ> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat> = (0..n).map(|j| self.at(i, j).clone()).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&p| !a[p][col].is_zero())?;
            a.swap(p, col);
            let inv = a[col][col].recip();
            for j in 0..2 * n {
                let t = &a[col][j] * &inv;
                a[col][j] = t;
            }
            for i in 0..n {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..2 * n {
                        let t = &a[i][j] - &f * &a[col][j];
                        a[i][j] = t;
                    }
                }
            }
        }
        Some(MatQ::from_fn(n, n, |i, j| a[i][n + j].clone()))
    }
}

impl std::fmt::Debug for MatQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Scales a rational vector to a primitive integer vector with canonical sign
/// (first nonzero entry positive).
pub fn primitive_integer(v: &[Rat]) -> VecQ {
    let mut l = Int::one();
    for e in v {
        l = l.lcm(e.denom());
    }
    let mut ints: Vec<Int> = v.iter().map(|e| e.numer() * (&l / e.denom())).collect();
    let mut g = Int::zero();
    for e in &ints {
        g = g.gcd(e);
    }
    if !g.is_zero() {
        for e in &mut ints {
            *e /= &g;
        }
    }
    if let Some(first) = ints.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in &mut ints {
                *e = -e.clone();
            }
        }
    }
    VecQ::new(ints.into_iter().map(rat_int).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &VecQ) -> MatQ {
        MatQ::from_fn(v.len(), v.len(), |i, j| {
            if i == j {
                v[i].clone()
            } else {
                Rat::zero()
            }
        })
    }

    #[test]
    fn ldlt_identity() {
        let m = MatQ::identity(3);
        let (l, d) = m.ldlt().unwrap();
        assert_eq!(l, MatQ::identity(3));
        assert_eq!(d, VecQ::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn ldlt_two_by_two() {
        let m = MatQ::from_int_rows(&[vec![3, -1], vec![-1, 3]]);
        let (l, d) = m.ldlt().unwrap();
        assert_eq!(l.at(1, 0), &rat(-1, 3));
        assert_eq!(d[0], rat(3, 1));
        assert_eq!(d[1], rat(8, 3));
        assert_eq!(l.mul(&diag(&d)).mul(&l.transpose()), m);
    }

    #[test]
    fn ldlt_rhombic_gram() {
        let m = MatQ::from_int_rows(&[vec![3, 1, 2], vec![1, 3, 0], vec![2, 0, 4]]);
        let (l, d) = m.ldlt().unwrap();
        assert_eq!(d[0], rat(3, 1));
        assert_eq!(d[1], rat(8, 3));
        assert_eq!(d[2], rat(5, 2));
        assert_eq!(l.mul(&diag(&d)).mul(&l.transpose()), m);
    }

    #[test]
    fn ldlt_rejects_indefinite() {
        let m = MatQ::from_int_rows(&[vec![1, 2], vec![2, 1]]);
        assert_eq!(m.ldlt().unwrap_err(), LinalgError::NotPositiveDefinite);
    }

    #[test]
    fn det_examples() {
        assert_eq!(MatQ::identity(4).det(), rat(1, 1));
        let m = MatQ::from_int_rows(&[vec![3, 1, 2], vec![1, 3, 0], vec![2, 0, 4]]);
        assert_eq!(m.det(), rat(20, 1));
        let m = MatQ::from_int_rows(&[vec![3, -1], vec![-1, 3]]);
        assert_eq!(m.det(), rat(8, 1));
        // det equals the product of the LDL^T pivots
        let (_, d) = m.ldlt().unwrap();
        assert_eq!(d.iter().product::<Rat>(), rat(8, 1));
    }

    #[test]
    fn det_needs_row_swap() {
        let m = MatQ::from_int_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det(), rat(-1, 1));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(MatQ::zero(3, 4).rank(), 0);
        assert_eq!(MatQ::identity(5).rank(), 5);
        assert_eq!(MatQ::from_int_rows(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(
            MatQ::from_int_rows(&[vec![0, 0, 1], vec![0, 0, 2], vec![1, 0, 0]]).rank(),
            2
        );
    }

    #[test]
    fn solve_identity() {
        let sol = MatQ::identity(3)
            .solve_affine(&VecQ::from_ints(&[4, 5, 6]))
            .unwrap();
        assert_eq!(sol.particular, VecQ::from_ints(&[4, 5, 6]));
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn solve_one_equation() {
        let a = MatQ::from_int_rows(&[vec![1, 1]]);
        let sol = a.solve_affine(&VecQ::from_ints(&[3])).unwrap();
        assert_eq!(sol.particular, VecQ::from_ints(&[3, 0]));
        assert_eq!(sol.nullspace, vec![VecQ::from_ints(&[1, -1])]);
    }

    #[test]
    fn solve_block_size_system() {
        // the six equations in four unknowns arising for the rhombic
        // dodecahedron cell; unique solution (2, 2, 1, 2)
        let a = MatQ::from_int_rows(&[
            vec![1, 0, 1, 0],
            vec![0, 0, 1, 1],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 0],
        ]);
        let sol = a
            .solve_affine(&VecQ::from_ints(&[3, 3, 4, 1, 2, 0]))
            .unwrap();
        assert_eq!(sol.particular, VecQ::from_ints(&[2, 2, 1, 2]));
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn solve_infeasible() {
        let a = MatQ::from_int_rows(&[vec![1], vec![1]]);
        assert_eq!(
            a.solve_affine(&VecQ::from_ints(&[1, 2])).unwrap_err(),
            LinalgError::Infeasible
        );
    }

    #[test]
    fn inverse_round_trip() {
        let m = MatQ::from_int_rows(&[vec![3, 1, 2], vec![1, 3, 0], vec![2, 0, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), MatQ::identity(3));
        assert!(MatQ::from_int_rows(&[vec![1, 2], vec![2, 4]])
            .inverse()
            .is_none());
    }

    #[test]
    fn primitive_integer_normalizes() {
        let v = vec![rat(-2, 3), rat(4, 3), rat(0, 1)];
        assert_eq!(primitive_integer(&v), VecQ::from_ints(&[1, -2, 0]));
    }
}
