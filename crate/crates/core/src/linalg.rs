//! Exact dense linear algebra: ranks, determinants and kernels.
//!
//! Over a generic [`Scalar`] we run plain Gaussian elimination. Rational
//! matrices are first scaled row-wise to integer matrices; ranks then use
//! fraction-free elimination with content removal, and determinants use the
//! Bareiss recurrence, so no intermediate fractions appear.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(ctx); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    /// Submatrix keeping the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix<F> {
        let data = rows
            .iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone()))
            .collect();
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn rank(&self) -> usize {
        F::rank_of(&self.to_rows())
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        F::det_of(&self.to_rows())
    }

    /// `self · v`.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(F::zero(&v[0].ctx()), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }
}

/// Rank by Gaussian elimination over a field.
pub fn gaussian_rank<F: Scalar>(rows: &[Vec<F>]) -> usize {
    let (_, pivots) = row_echelon(rows.to_vec());
    pivots.len()
}

/// Reduced row echelon form; returns the reduced rows and the pivot columns.
pub fn row_echelon<F: Scalar>(mut m: Vec<Vec<F>>) -> (Vec<Vec<F>>, Vec<usize>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&factor.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Determinant by Gaussian elimination over a field.
pub fn gaussian_det<F: Scalar>(rows: &[Vec<F>]) -> F {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "non-square matrix");
    assert!(n > 0, "empty determinant needs a field context");
    let ctx = rows[0][0].ctx();
    let mut m = rows.to_vec();
    let mut det = F::one(&ctx);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return F::zero(&ctx);
        };
        if p != c {
            m.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&m[c][c]);
        let inv = m[c][c].inv().expect("nonzero pivot");
        let (top, bottom) = m.split_at_mut(c + 1);
        let pivot = &top[c];
        for row in bottom {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].mul(&inv);
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x = x.sub(&factor.mul(p));
            }
        }
    }
    det
}

/// Basis of the right kernel `{v : M v = 0}`.
pub fn kernel_basis<F: Scalar>(rows: &[Vec<F>], ctx: &F::Ctx) -> Vec<Vec<F>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let (rref, pivots) = row_echelon(rows.to_vec());
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(ctx); ncols];
        v[free] = F::one(ctx);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = rref[r][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Multiplies every row by the lcm of its denominators.
pub fn clear_denominators(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = &*x / &g;
            }
        }
    }
}

/// Rank of an integer matrix by fraction-free elimination.
///
/// Each elimination step replaces `row ← pivot·row − e·pivot_row` for the rows
/// with a nonzero entry `e` in the pivot column, then divides the row by its
/// content. Rows untouched by a pivot stay untouched, which keeps block
/// structured matrices cheap.
pub fn fraction_free_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    for row in m.iter_mut() {
        make_primitive(row);
    }
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        // smallest nonzero pivot keeps coefficients short
        let Some(p) = (rank..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].bits())
        else {
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = pivot.gcd(&row[c]);
            let a = pivot / &g;
            let e = &row[c] / &g;
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if y.is_zero() {
                    if !x.is_zero() {
                        *x = &*x * &a;
                    }
                } else {
                    *x = &*x * &a - &e * y;
                }
            }
            make_primitive(row);
        }
        rank += 1;
    }
    rank
}

/// Determinant of a square integer matrix by the Bareiss recurrence.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant of a rational matrix: rows are scaled to integers, the Bareiss
/// determinant is taken and the scaling is divided back out.
pub fn rational_det_bareiss(rows: &[Vec<BigRational>]) -> BigRational {
    let scales: Vec<BigInt> = rows
        .iter()
        .map(|row| row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom())))
        .collect();
    let ints = clear_denominators(rows);
    let det = bareiss_det(&ints);
    let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    BigRational::new(det, denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::scalar::{parse_rational, Fp, PrimeField, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn qrows(rows: &[&[&str]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|s| q(s)).collect())
            .collect()
    }

    #[test]
    fn small_ranks() {
        let m = qrows(&[&["1", "2", "3"], &["2", "4", "6"], &["0", "1", "1/2"]]);
        assert_eq!(gaussian_rank(&m), 2);
        assert_eq!(Rational::rank_of(&m), 2);
        let z = qrows(&[&["0", "0"], &["0", "0"]]);
        assert_eq!(Rational::rank_of(&z), 0);
    }

    #[test]
    fn small_determinants() {
        let m = qrows(&[&["1/2", "1"], &["3", "4"]]);
        assert_eq!(Rational::det_of(&m), q("-1"));
        assert_eq!(gaussian_det(&m), q("-1"));
        let m = qrows(&[&["0", "1", "0"], &["1", "0", "0"], &["0", "0", "5/3"]]);
        assert_eq!(Rational::det_of(&m), q("-5/3"));
    }

    #[test]
    fn backends_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = PrimeField::default();
        for trial in 0..60 {
            let r = 1 + trial % 6;
            let c = 1 + (trial / 6) % 7;
            // plant a rank deficiency by repeating a combination of rows
            let mut rows: Vec<Vec<Rational>> = (0..r)
                .map(|_| (0..c).map(|_| Rational::random(&(), &mut rng, 9)).collect())
                .collect();
            if r > 2 {
                let combo: Vec<Rational> = rows[0]
                    .iter()
                    .zip(&rows[1])
                    .map(|(a, b)| a - b * q("2/3"))
                    .collect();
                rows[r - 1] = combo;
            }
            let g = gaussian_rank(&rows);
            assert_eq!(Rational::rank_of(&rows), g);
            let reduced: Vec<Vec<Fp>> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| Fp::from_rational(&f, x).unwrap())
                        .collect()
                })
                .collect();
            assert_eq!(Fp::rank_of(&reduced), g);
            if r == c {
                let d = gaussian_det(&rows);
                assert_eq!(Rational::det_of(&rows), d);
                assert_eq!(Fp::det_of(&reduced), Fp::from_rational(&f, &d).unwrap());
            }
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = qrows(&[&["1", "2", "3", "4"], &["0", "1", "1", "1"]]);
        let ker = kernel_basis(&m, &());
        assert_eq!(ker.len(), 2);
        let mat = Matrix::from_rows(m);
        for v in ker {
            assert!(mat.apply(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn select_submatrix() {
        let m = Matrix::from_rows(qrows(&[&["1", "2", "3"], &["4", "5", "6"]]));
        let s = m.select(&[1], &[2, 0]);
        assert_eq!(s.to_rows(), qrows(&[&["6", "4"]]));
    }
}
