//! Dense matrices over exact scalars, with fraction-free determinants,
//! cofactor determinants, exact characteristic polynomials, rank and
//! matrix–vector products.
//!
//! The Bareiss determinant is the workhorse oracle: all intermediate
//! divisions are exact by construction (they divide out the previous
//! pivot, which Sylvester's identity guarantees is a factor), and the
//! implementation asserts that exactness on every division. Rational
//! matrices are handled by clearing each row by the lcm of its
//! denominators, running the integer algorithm, and dividing the result
//! by the product of the scale factors.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, QuadExt, Rat};

/// Ring operations needed by the generic matrix algorithms.
///
/// `ring_zero` derives a zero compatible with `self`; for [`QuadExt`]
/// that means the same extension tag `d`, which is why a free-standing
/// `zero()` would not suffice.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn ring_zero(&self) -> Self;
    fn ring_add(&self, rhs: &Self) -> Self;
    fn ring_sub(&self, rhs: &Self) -> Self;
    fn ring_mul(&self, rhs: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn ring_is_zero(&self) -> bool;
}

impl Scalar for Int {
    fn ring_zero(&self) -> Self {
        Int::zero()
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for Rat {
    fn ring_zero(&self) -> Self {
        Rat::zero()
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for QuadExt {
    fn ring_zero(&self) -> Self {
        QuadExt::zero(self.d().clone())
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn ring_is_zero(&self) -> bool {
        QuadExt::is_zero(self)
    }
}

/// Dense row-major matrix over one scalar kind.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;
pub type QuadMatrix = Matrix<QuadExt>;

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix from a 0-based entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        assert!(!rows.is_empty() && !rows[0].is_empty());
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U: Scalar>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn trace(&self) -> Result<T> {
        self.require_square()?;
        let mut acc = self.get(0, 0).clone();
        for i in 1..self.rows {
            acc = acc.ring_add(self.get(i, i));
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Exact matrix product.
    pub fn mul_mat(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = self.get(r, 0).ring_mul(rhs.get(0, c));
            for k in 1..self.cols {
                acc = acc.ring_add(&self.get(r, k).ring_mul(rhs.get(k, c)));
            }
            acc
        }))
    }

    /// Exact matrix–vector product.
    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = self.get(r, 0).ring_mul(&v[0]);
            for (k, vk) in v.iter().enumerate().skip(1) {
                acc = acc.ring_add(&self.get(r, k).ring_mul(vk));
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Returns the copy with the given row and column removed.
    pub fn minor(&self, row: usize, col: usize) -> Self {
        assert!(self.rows > 1 && self.cols > 1);
        Matrix::from_fn(self.rows - 1, self.cols - 1, |r, c| {
            let rr = if r < row { r } else { r + 1 };
            let cc = if c < col { c } else { c + 1 };
            self.get(rr, cc).clone()
        })
    }

    /// Rows-of-strings rendering shared by dumps and traces.
    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { Int::one() } else { Int::zero() })
    }

    pub fn to_rat(&self) -> RatMatrix {
        self.map(|x| Rat::from_integer(x.clone()))
    }
}

impl RatMatrix {
    pub fn identity_rat(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { Rat::one() } else { Rat::zero() })
    }
}

impl QuadMatrix {
    /// Checks the container invariant that every entry carries the same `d`.
    pub fn uniform_d(&self) -> Result<&Rat> {
        let d = self.data[0].d();
        for x in &self.data {
            if x.d() != d {
                return Err(Error::MixedExtensions {
                    lhs: d.to_string(),
                    rhs: x.d().to_string(),
                });
            }
        }
        Ok(d)
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Hard cap for the Laplace-expansion determinant.
pub const COFACTOR_LIMIT: usize = 8;

/// Laplace-expansion determinant; an independent oracle for small sizes
/// and the only determinant available over quadratic extensions.
pub fn det_cofactor<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > COFACTOR_LIMIT {
        return Err(Error::SizeLimit {
            op: "det_cofactor",
            limit: COFACTOR_LIMIT,
            requested: m.rows(),
        });
    }
    Ok(det_cofactor_rec(m))
}

fn det_cofactor_rec<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc: Option<T> = None;
    for c in 0..n {
        let e = m.get(0, c);
        if e.ring_is_zero() {
            continue;
        }
        let sub = det_cofactor_rec(&m.minor(0, c));
        let term = e.ring_mul(&sub);
        let term = if c % 2 == 0 { term } else { term.ring_neg() };
        acc = Some(match acc {
            None => term,
            Some(a) => a.ring_add(&term),
        });
    }
    acc.unwrap_or_else(|| m.get(0, 0).ring_zero())
}

/// Fraction-free Bareiss determinant of an integer matrix.
///
/// Pivoting takes the first nonzero entry in column order; an all-zero
/// pivot column short-circuits to determinant zero. Every internal
/// division is checked to be exact and panics otherwise: inexactness
/// there means the algorithm's invariant was broken, not bad input.
pub fn det_bareiss(m: &IntMatrix) -> Result<Int> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a: Vec<Vec<Int>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut sign = 1i32;
    let mut prev = Int::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(Int::zero()),
            }
        }
        if k == n - 1 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                let (q, r) = num.div_rem(&prev);
                assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][k] = Int::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign < 0 { -det } else { det })
}

/// Bareiss determinant of a rational matrix: each row is scaled by the
/// lcm of its denominators, the integer algorithm runs, and the result is
/// divided by the product of the recorded scale factors.
pub fn det_bareiss_rat(m: &RatMatrix) -> Result<Rat> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut scale = Int::one();
    let cleared = Matrix::from_rows(
        (0..n)
            .map(|r| {
                let l = m
                    .row(r)
                    .iter()
                    .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                m.row(r)
                    .iter()
                    .map(|x| {
                        let v = x * Rat::from_integer(l.clone());
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect(),
    );
    Ok(Rat::new(det_bareiss(&cleared)?, scale))
}

/// Rank over the rationals via fraction-free elimination.
pub fn rank(m: &RatMatrix) -> usize {
    // Row-wise denominator clearing preserves rank.
    let mut a: Vec<Vec<Int>> = (0..m.rows())
        .map(|r| {
            let l = m
                .row(r)
                .iter()
                .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
            m.row(r)
                .iter()
                .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut prev = Int::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "fraction-free elimination division must be exact");
                a[i][j] = q;
            }
            a[i][c] = Int::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

pub fn rank_int(m: &IntMatrix) -> usize {
    rank(&m.to_rat())
}

/// Monic polynomial with exact rational coefficients, stored
/// constant-term first. The leading coefficient is always 1.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    /// Wraps a coefficient vector (constant term first); panics unless monic.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(
            coeffs.last().unwrap().is_one(),
            "characteristic polynomials are monic"
        );
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Rat {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitutes a square matrix for the indeterminate (Horner form).
    pub fn eval_matrix(&self, m: &RatMatrix) -> Result<RatMatrix> {
        if !m.is_square() {
            return Err(Error::NonSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let mut acc = RatMatrix::from_fn(n, n, |r, c| {
            if r == c {
                self.coeffs.last().unwrap().clone()
            } else {
                Rat::zero()
            }
        });
        for k in (0..self.coeffs.len() - 1).rev() {
            acc = acc.mul_mat(m)?;
            for i in 0..n {
                let v = acc.get(i, i) + &self.coeffs[k];
                acc.set(i, i, v);
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let deg = self.degree();
        let mut first = true;
        for k in (0..=deg).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() && !(deg == 0 && k == 0) {
                continue;
            }
            let mag = c.abs();
            let sign_str = if first {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            let body = match k {
                0 => format!("{mag}"),
                _ => {
                    let x = if k == 1 { "x".to_string() } else { format!("x^{k}") };
                    if mag.is_one() {
                        x
                    } else {
                        format!("{mag}{x}")
                    }
                }
            };
            write!(f, "{sign_str}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Raw (not necessarily monic) coefficient-vector product, used to expand
/// factored closed forms.
pub fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Coefficients of `(x - root)^k`.
pub fn linear_power(root: &Rat, k: usize) -> Vec<Rat> {
    let mut acc = vec![Rat::one()];
    let lin = vec![-root.clone(), Rat::one()];
    for _ in 0..k {
        acc = poly_mul(&acc, &lin);
    }
    acc
}

/// Exact characteristic polynomial `det(xI - M)` via the
/// Faddeev–LeVerrier trace recurrence.
pub fn charpoly(m: &RatMatrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk = m.clone();
    coeffs[n - 1] = -mk.trace()?;
    for k in 2..=n {
        // M_k = M (M_{k-1} + c_{n-k+1} I)
        let c = coeffs[n - k + 1].clone();
        let mut shifted = mk;
        for i in 0..n {
            let v = shifted.get(i, i) + &c;
            shifted.set(i, i, v);
        }
        mk = m.mul_mat(&shifted)?;
        coeffs[n - k] = -mk.trace()? / Rat::from_integer(Int::from(k as i64));
    }
    Ok(Poly::from_coeffs(coeffs))
}

pub fn charpoly_int(m: &IntMatrix) -> Result<Poly> {
    charpoly(&m.to_rat())
}
