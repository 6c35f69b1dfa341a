//! Exact integer and rational linear algebra.
//!
//! Smith normal form with unimodular transforms is the workhorse: invariant
//! factors, cokernels, integer solving and unimodular completion all go
//! through [`smith`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn to_rat(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rats(v: &[Int]) -> Vec<Rat> {
    v.iter().map(to_rat).collect()
}

/// Render a rational as `p` or `p/q`.
pub fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `p`, `-p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: Int = p.trim().parse().ok()?;
            let q: Int = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<Int>().ok().map(Rat::from_integer),
    }
}

pub fn gcd_all<'a>(v: impl IntoIterator<Item = &'a Int>) -> Int {
    v.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn lcm_all<'a>(v: impl IntoIterator<Item = &'a Int>) -> Int {
    v.into_iter().fold(Int::one(), |l, x| l.lcm(x))
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_mixed(a: &[Rat], b: &[Int]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * to_rat(y)).sum()
}

/// Divide out the gcd of the entries. Zero vectors are returned unchanged.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// True iff the gcd of the entries is one.
pub fn is_primitive(v: &[Int]) -> Result<bool> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::Dimension("primitivity of the zero vector".into()));
    }
    Ok(g.is_one())
}

/// Least common multiple of the denominators.
pub fn denominator_lcm(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// Scale a rational vector by a positive factor to a primitive integer vector.
pub fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    let l = denominator_lcm(v);
    let w: Vec<Int> = v.iter().map(|x| (x * to_rat(&l)).to_integer()).collect();
    primitive(&w)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Build from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(IntMatrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor for small literal matrices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| ints(r)).collect()).expect("ragged literal matrix")
    }

    pub fn from_cols(cols: &[Vec<Int>]) -> Result<Self> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Int> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        (0..self.rows).map(|i| dot(&self.row(i), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn set_row(&mut self, i: usize, row: &[Int]) {
        for (j, x) in row.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Keep the listed columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows = idx.iter().map(|&i| self.row(i)).collect::<Vec<_>>();
        let mut m = Self::zeros(idx.len(), self.cols);
        for (k, r) in rows.iter().enumerate() {
            m.set_row(k, r);
        }
        m
    }

    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::Dimension("vstack of different widths".into()));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix { rows: self.rows + other.rows, cols, data })
    }

    pub fn to_rat_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| rats(&self.row(i))).collect()
    }

    pub fn rank(&self) -> usize {
        rank_rat(&self.to_rat_rows())
    }

    /// Exact determinant of a square matrix (zero for the empty matrix is not
    /// used; the empty determinant is one).
    pub fn det(&self) -> Result<Int> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let d = det_rat(self.to_rat_rows());
        Ok(d.to_integer())
    }
}

/// Smith normal form `left * m * right = diag` with unimodular transforms.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries `d_1 | d_2 | ...`, zeros trailing; length `min(rows, cols)`.
    pub diag: Vec<Int>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

fn min_abs_pos(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(r);
    let mut right = IntMatrix::identity(c);
    let k = r.min(c);
    for t in 0..k {
        let Some((pi, pj)) = min_abs_pos(&a, t) else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_row_multiple(i, t, &nq);
                left.add_row_multiple(i, t, &nq);
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_col_multiple(j, t, &nq);
                right.add_col_multiple(j, t, &nq);
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder sits in row t or column t: make it the pivot
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = &a[(i, t)];
                    if !x.is_zero() && x.abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = &a[(t, j)];
                    if !x.is_zero() && x.abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                right.swap_cols(t, best.1);
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let mut bad = None;
            'scan: for i in t + 1..r {
                for j in t + 1..c {
                    if !a[(i, j)].is_multiple_of(&a[(t, t)]) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let one = Int::one();
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    let diag = (0..k).map(|i| a[(i, i)].clone()).collect();
    Smith { diag, left, right }
}

/// Nonzero invariant factors `d_1 | d_2 | ... | d_k`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<Int> {
    smith(m).diag.into_iter().filter(|d| !d.is_zero()).collect()
}

/// Cokernel of `m` viewed as a map `Z^cols -> Z^rows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel {
    pub free_rank: usize,
    pub torsion: Vec<Int>,
}

impl fmt::Display for Cokernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn cokernel_structure(m: &IntMatrix) -> Cokernel {
    let f = invariant_factors(m);
    Cokernel {
        free_rank: m.rows() - f.len(),
        torsion: f.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..cols {
                    let v = &f * &a[row][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    let mut a = rows.to_vec();
    rref(&mut a).len()
}

fn det_rat(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] -= v;
            }
        }
    }
    det
}

/// Solve `m x = b` over the rationals. `Ok(None)` means inconsistent.
pub fn solve_rational(m: &IntMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    solve_rational_rows(&m.to_rat_rows(), m.cols(), b)
}

pub fn solve_rational_rows(m: &[Vec<Rat>], cols: usize, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if m.len() != b.len() {
        return Err(Error::Dimension(format!("{} equations but right-hand side of length {}", m.len(), b.len())));
    }
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = aug[i][cols].clone();
    }
    Ok(Some(x))
}

/// Basis of the rational kernel of a matrix given by rows of length `cols`.
pub fn nullspace_rat(m: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Integer solutions of `m x = b`: a particular solution and a lattice basis
/// of the integer kernel, or `None` if there is no integer solution.
pub fn solve_integer(m: &IntMatrix, b: &[Int]) -> Result<Option<(Vec<Int>, Vec<Vec<Int>>)>> {
    if m.rows() != b.len() {
        return Err(Error::Dimension("right-hand side length".into()));
    }
    let s = smith(m);
    let rank = s.rank();
    let c = s.left.mul_vec(b);
    let mut y = vec![Int::zero(); m.cols()];
    for i in 0..m.rows() {
        if i < rank {
            let (q, rem) = c[i].div_rem(&s.diag[i]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return Ok(None);
        }
    }
    let x = s.right.mul_vec(&y);
    let kernel = (rank..m.cols()).map(|j| s.right.col(j)).collect();
    Ok(Some((x, kernel)))
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut r = rats(&m.row(i));
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return Err(Error::Precondition("matrix is singular".into()));
    }
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let q = &aug[i][n + j];
            if !q.is_integer() {
                return Err(Error::Precondition("matrix is not unimodular".into()));
            }
            inv[(i, j)] = q.to_integer();
        }
    }
    Ok(inv)
}

/// A unimodular matrix whose last row is the given primitive vector.
pub fn unimodular_completion(v: &[Int]) -> Result<IntMatrix> {
    let n = v.len();
    if n == 0 || !is_primitive(v)? {
        return Err(Error::Precondition("completion needs a primitive vector".into()));
    }
    let last = &v[n - 1];
    if last.abs().is_one() {
        let mut u = IntMatrix::identity(n);
        u.set_row(n - 1, v);
        return Ok(u);
    }
    // v R = +-e_1 for the right transform R of the 1 x n Smith form
    let row = IntMatrix::from_rows(vec![v.to_vec()])?;
    let s = smith(&row);
    let mut w = unimodular_inverse(&s.right)?;
    // row 0 of w is +-v
    let sign_neg = w[(0, 0)] != v[0] || (0..n).any(|j| w[(0, j)] != v[j]);
    if sign_neg {
        w.negate_row(0);
    }
    for j in 0..n {
        if w[(0, j)] != v[j] {
            return Err(Error::internal("unimodular completion failed"));
        }
    }
    for i in 0..n - 1 {
        w.swap_rows(i, i + 1);
    }
    Ok(w)
}
