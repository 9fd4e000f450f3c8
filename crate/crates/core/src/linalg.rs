//! Dense exact linear algebra over [`Rat`].
//!
//! Dimensions here are those of desk-scale algebras (tens, not thousands),
//! so plain row-major storage with Gauss-Jordan elimination is enough.

use alloc::vec;
use alloc::vec::Vec;

use crate::rat::Rat;

pub type Vector = Vec<Rat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Rat::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    /// Matrix whose columns are the given vectors, all of length `dim`.
    pub fn from_columns(dim: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, *v);
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| *a * *b)
                    .sum()
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, cur + a * b);
                    }
                }
            }
        }
        out
    }

    /// Bilinear evaluation `u^T M v`.
    pub fn bilinear(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut acc = Rat::ZERO;
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let g = self.get(i, j);
                if !g.is_zero() {
                    acc += *ui * g * *vj;
                }
            }
        }
        acc
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
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
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j);
                if !v.is_zero() {
                    m.set(r, j, v * inv);
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(r, j);
                    if !v.is_zero() {
                        let cur = m.get(i, j);
                        m.set(i, j, cur - f * v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Rat::ZERO; self.cols];
                x[f] = Rat::ONE;
                for (row, &p) in pivots.iter().enumerate() {
                    x[p] = -r.get(row, f);
                }
                x
            })
            .collect()
    }

    pub fn determinant(&self) -> Rat {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::ONE;
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Rat::ZERO;
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c);
            det *= piv;
            let inv = piv.recip();
            for i in c + 1..n {
                let f = m.get(i, c) * inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(c, j);
                    if !v.is_zero() {
                        let cur = m.get(i, j);
                        m.set(i, j, cur - f * v);
                    }
                }
            }
        }
        det
    }

    /// Some solution of `M x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vector> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::ZERO; self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Rat::ONE);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Monic characteristic polynomial `det(xI - M)`, coefficients from the
    /// constant term up (Faddeev-LeVerrier).
    pub fn char_poly(&self) -> Vec<Rat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Rat::ZERO; n + 1];
        coeffs[n] = Rat::ONE;
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                let v = next.get(i, i);
                next.set(i, i, v + coeffs[n - k + 1]);
            }
            let am = self.mul(&next);
            coeffs[n - k] = -am.trace() / Rat::from(k as i64);
            m = next;
        }
        coeffs
    }
}

/// Rank of a family of vectors.
pub fn rank_of(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(vectors).rank()
}

/// Coordinates of `v` in terms of `basis` (assumed independent).
pub fn coords_in(basis: &[Vector], v: &[Rat]) -> Option<Vector> {
    if basis.is_empty() {
        return if v.iter().all(Rat::is_zero) {
            Some(Vec::new())
        } else {
            None
        };
    }
    Matrix::from_columns(v.len(), basis).solve(v)
}

/// A basis of `span(a) ∩ span(b)`, expressed in ambient coordinates.
pub fn intersect(dim: usize, a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vector> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -*x).collect::<Vector>()));
    let m = Matrix::from_columns(dim, &cols);
    let mut out = Subspace::new(dim);
    for k in m.kernel() {
        let mut v = vec![Rat::ZERO; dim];
        for (c, basis_vec) in k.iter().zip(a) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in v.iter_mut().zip(basis_vec) {
                *slot += *c * *x;
            }
        }
        out.insert(&v);
    }
    out.into_basis()
}

/// Incrementally maintained subspace in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    rows: Vec<(usize, Vector)>,
    original: Vec<Vector>,
}

impl Subspace {
    pub fn new(dim: usize) -> Subspace {
        Subspace {
            dim,
            rows: Vec::new(),
            original: Vec::new(),
        }
    }

    pub fn spanned_by(dim: usize, vectors: &[Vector]) -> Subspace {
        let mut s = Subspace::new(dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[Rat]) -> Vector {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            let f = r[*p];
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= f * *y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Rat::is_zero)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= inv;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[p];
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= f * *y;
                }
            }
        }
        self.rows.push((p, r));
        self.original.push(v.to_vec());
        true
    }

    /// The independent vectors that were inserted, in insertion order.
    pub fn basis(&self) -> &[Vector] {
        &self.original
    }

    pub fn into_basis(self) -> Vec<Vector> {
        self.original
    }
}

/// Polynomial helpers; coefficients are stored constant term first.
pub mod poly {
    use alloc::vec::Vec;

    use num_integer::Integer;

    use crate::rat::Rat;

    pub fn degree(p: &[Rat]) -> usize {
        p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(p: &[Rat], x: Rat) -> Rat {
        p.iter().rev().fold(Rat::ZERO, |acc, c| acc * x + *c)
    }

    /// Divides by `(x - r)`, assuming `r` is a root.
    pub fn deflate(p: &[Rat], r: Rat) -> Vec<Rat> {
        let d = degree(p);
        let mut q = alloc::vec![Rat::ZERO; d];
        let mut carry = Rat::ZERO;
        for i in (1..=d).rev() {
            carry = p[i] + carry * r;
            q[i - 1] = carry;
        }
        q
    }

    fn divisors(n: i128) -> Vec<i128> {
        let n = n.abs();
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d: i128 = 1;
        while d * d <= n {
            if n % d == 0 {
                small.push(d);
                if d * d != n {
                    large.push(n / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Rational roots with multiplicities, plus the cofactor carrying no
    /// rational root (degree 0 when the polynomial splits over `Q`).
    pub fn rational_roots(p: &[Rat]) -> (Vec<(Rat, usize)>, Vec<Rat>) {
        let mut cur: Vec<Rat> = p[..=degree(p)].to_vec();
        let mut roots: Vec<(Rat, usize)> = Vec::new();
        let push = |roots: &mut Vec<(Rat, usize)>, r: Rat| {
            if let Some(e) = roots.iter_mut().find(|(x, _)| *x == r) {
                e.1 += 1;
            } else {
                roots.push((r, 1));
            }
        };
        while degree(&cur) > 0 && cur[0].is_zero() {
            cur = deflate(&cur, Rat::ZERO);
            push(&mut roots, Rat::ZERO);
        }
        loop {
            if degree(&cur) == 0 {
                break;
            }
            // clear denominators: integer polynomial with the same roots
            let lcm = cur.iter().fold(1i128, |acc, c| acc.lcm(&c.denom()));
            let ints: Vec<i128> = cur.iter().map(|c| (*c * Rat::from_int(lcm)).numer()).collect();
            let a0 = ints[0];
            let an = ints[degree(&cur)];
            let mut found = None;
            'search: for q in divisors(an) {
                for p in divisors(a0) {
                    for cand in [Rat::new(p, q), Rat::new(-p, q)] {
                        if eval(&cur, cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    cur = deflate(&cur, r);
                    push(&mut roots, r);
                }
                None => break,
            }
        }
        roots.sort();
        (roots, cur)
    }

    /// Renders a polynomial in `x`, highest degree first.
    pub fn render(p: &[Rat]) -> alloc::string::String {
        use alloc::format;
        use alloc::string::String;
        let d = degree(p);
        let mut s = String::new();
        for i in (0..=d).rev() {
            let c = p[i];
            if c.is_zero() && d > 0 {
                continue;
            }
            if !s.is_empty() {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            } else if c.is_negative() {
                s.push('-');
            }
            let a = c.abs();
            let coef = if a.is_one() && i > 0 {
                String::new()
            } else {
                format!("{a}")
            };
            match i {
                0 => s.push_str(&format!("{a}")),
                1 => s.push_str(&format!("{coef}x")),
                _ => s.push_str(&format!("{coef}x^{i}")),
            }
        }
        s
    }
}
