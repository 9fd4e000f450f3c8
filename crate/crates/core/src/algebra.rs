//! Graded algebras given by structure constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::Error;
use crate::grading::{parity_sign, Degree, GradingGroup};
use crate::linalg::{Matrix, Vector};
use crate::rat::Rat;
use crate::report::{Check, CheckReport, Witness};

/// Sparse vector over the basis of an algebra, sorted by index with no
/// stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Elem {
    terms: Vec<(usize, Rat)>,
}

impl Elem {
    pub fn zero() -> Elem {
        Elem { terms: Vec::new() }
    }

    pub fn basis(i: usize) -> Elem {
        Elem {
            terms: vec![(i, Rat::ONE)],
        }
    }

    pub fn term(i: usize, c: Rat) -> Elem {
        if c.is_zero() {
            Elem::zero()
        } else {
            Elem { terms: vec![(i, c)] }
        }
    }

    /// Collects `(index, coeff)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (usize, Rat)>>(iter: I) -> Elem {
        let mut map: BTreeMap<usize, Rat> = BTreeMap::new();
        for (i, c) in iter {
            *map.entry(i).or_default() += c;
        }
        Elem {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn from_dense(v: &[Rat]) -> Elem {
        Elem {
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, *c))
                .collect(),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vector {
        let mut v = vec![Rat::ZERO; dim];
        for &(i, c) in &self.terms {
            v[i] = c;
        }
        v
    }

    pub fn terms(&self) -> &[(usize, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.terms
            .binary_search_by_key(&i, |t| t.0)
            .map(|k| self.terms[k].1)
            .unwrap_or(Rat::ZERO)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.last().map(|t| t.0)
    }

    pub fn scale(&self, c: Rat) -> Elem {
        if c.is_zero() {
            return Elem::zero();
        }
        Elem {
            terms: self.terms.iter().map(|&(i, x)| (i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Elem {
        self.scale(Rat::MINUS_ONE)
    }

    /// `self += c * other`, merging the sorted term lists.
    pub fn add_scaled(&mut self, c: Rat, other: &Elem) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.scale(c);
            return;
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(i, x)), Some(&&(j, y))) => {
                    if i < j {
                        out.push((i, x));
                        a.next();
                    } else if j < i {
                        out.push((j, y * c));
                        b.next();
                    } else {
                        let s = x + y * c;
                        if !s.is_zero() {
                            out.push((i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&t), None) => {
                    out.push(t);
                    a.next();
                }
                (None, Some(&&(j, y))) => {
                    out.push((j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        self.terms = out;
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut r = self.clone();
        r.add_scaled(Rat::ONE, other);
        r
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        let mut r = self.clone();
        r.add_scaled(Rat::MINUS_ONE, other);
        r
    }

    /// Renders with the given basis names, e.g. `2*e2 - e3 + 1/2*e4`.
    pub fn render_with<F: Fn(usize) -> String>(&self, name: F) -> String {
        render_terms(self.terms.iter().map(|&(i, c)| (name(i), c)))
    }
}

/// Shared renderer for linear combinations of labelled vectors.
pub fn render_terms<I: IntoIterator<Item = (String, Rat)>>(terms: I) -> String {
    let mut s = String::new();
    for (label, c) in terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if a.is_one() {
            s.push_str(&label);
        } else {
            let _ = write!(s, "{a}*{label}");
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// A finite-dimensional `B`-graded algebra `e_i e_j = Σ_k c[i][j][k] e_k`
/// with an optional bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    name: String,
    description: String,
    grading: GradingGroup,
    names: Vec<String>,
    degrees: Vec<Degree>,
    table: Vec<Elem>,
    gram: Option<Matrix>,
    bcommutative: bool,
}

impl StructureAlgebra {
    pub fn builder(grading: GradingGroup) -> AlgebraBuilder {
        AlgebraBuilder::new(grading)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn grading(&self) -> GradingGroup {
        self.grading
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn basis_names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, i: usize) -> Degree {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn is_bcommutative(&self) -> bool {
        self.bcommutative
    }

    pub fn gram(&self) -> Option<&Matrix> {
        self.gram.as_ref()
    }

    /// Same algebra with the form replaced (or removed).
    pub fn with_gram(&self, gram: Option<Matrix>) -> Result<StructureAlgebra, Error> {
        if let Some(g) = &gram {
            if g.rows() != self.dim() || g.cols() != self.dim() {
                return Err(Error::GramShape { dim: self.dim() });
            }
        }
        let mut a = self.clone();
        a.gram = gram;
        Ok(a)
    }

    pub fn with_name(mut self, name: &str, description: &str) -> StructureAlgebra {
        self.name = name.into();
        self.description = description.into();
        self
    }

    /// Basis product `e_i e_j`.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &Elem {
        &self.table[i * self.dim() + j]
    }

    fn check_elem(&self, a: &Elem) -> Result<(), Error> {
        match a.max_index() {
            Some(i) if i >= self.dim() => Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            }),
            _ => Ok(()),
        }
    }

    /// Bilinear extension of the table; validates indices.
    pub fn try_mul(&self, a: &Elem, b: &Elem) -> Result<Elem, Error> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        Ok(self.mul(a, b))
    }

    /// Bilinear extension of the table. Panics on an out-of-range index.
    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::zero();
        }
        let n = self.dim();
        if a.terms.len() == 1 && b.terms.len() == 1 {
            let (i, x) = a.terms[0];
            let (j, y) = b.terms[0];
            return self.table[i * n + j].scale(x * y);
        }
        let mut acc = vec![Rat::ZERO; n];
        let mut touched = false;
        for &(i, x) in &a.terms {
            for &(j, y) in &b.terms {
                let p = &self.table[i * n + j];
                if p.is_zero() {
                    continue;
                }
                let xy = x * y;
                for &(k, c) in &p.terms {
                    acc[k] += xy * c;
                    touched = true;
                }
            }
        }
        if !touched {
            return Elem::zero();
        }
        Elem::from_dense(&acc)
    }

    /// Jacobian `(xy)z + (zx)y + (yz)x`.
    pub fn jacobian(&self, x: &Elem, y: &Elem, z: &Elem) -> Elem {
        let mut r = self.mul(&self.mul(x, y), z);
        r.add_scaled(Rat::ONE, &self.mul(&self.mul(z, x), y));
        r.add_scaled(Rat::ONE, &self.mul(&self.mul(y, z), x));
        r
    }

    /// Degree of a homogeneous element; the zero element reports degree 0.
    pub fn degree_of(&self, x: &Elem) -> Option<Degree> {
        let mut it = x.terms.iter().map(|&(i, _)| self.degrees[i]);
        match it.next() {
            None => Some(Degree(0)),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    /// Signed Jacobian
    /// `(-1)^{|x||z|}(xy)z + (-1)^{|z||y|}(zx)y + (-1)^{|y||x|}(yz)x`,
    /// exponents taken on the integer representatives of the degrees.
    pub fn super_jacobian(&self, x: &Elem, y: &Elem, z: &Elem) -> Result<Elem, Error> {
        let dx = self.degree_of(x).ok_or(Error::NonHomogeneous)?.0 as u64;
        let dy = self.degree_of(y).ok_or(Error::NonHomogeneous)?.0 as u64;
        let dz = self.degree_of(z).ok_or(Error::NonHomogeneous)?.0 as u64;
        let mut r = self.mul(&self.mul(x, y), z).scale(Rat::from(parity_sign(dx * dz)));
        r.add_scaled(Rat::from(parity_sign(dz * dy)), &self.mul(&self.mul(z, x), y));
        r.add_scaled(Rat::from(parity_sign(dy * dx)), &self.mul(&self.mul(y, z), x));
        Ok(r)
    }

    /// `(a, b)` under the stored form.
    pub fn form(&self, a: &Elem, b: &Elem) -> Result<Rat, Error> {
        let g = self.gram.as_ref().ok_or(Error::MissingForm)?;
        Ok(form_value(g, a, b))
    }

    pub fn render(&self, x: &Elem) -> String {
        x.render_with(|i| self.names[i].clone())
    }

    /// Basis indices of degree `b`.
    pub fn indices_of_degree(&self, b: Degree) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == b).collect()
    }

    /// The stored table as `(i, j, product)` for nonzero products.
    pub fn nonzero_products(&self) -> impl Iterator<Item = (usize, usize, &Elem)> {
        let n = self.dim();
        self.table
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(k, p)| (k / n, k % n, p))
    }
}

pub(crate) fn form_value(g: &Matrix, a: &Elem, b: &Elem) -> Rat {
    let mut acc = Rat::ZERO;
    for &(i, x) in a.terms() {
        for &(j, y) in b.terms() {
            let v = g.get(i, j);
            if !v.is_zero() {
                acc += x * y * v;
            }
        }
    }
    acc
}

/// Assembles and validates a [`StructureAlgebra`].
#[derive(Clone, Debug)]
pub struct AlgebraBuilder {
    name: String,
    description: String,
    grading: GradingGroup,
    names: Vec<String>,
    degrees: Vec<Degree>,
    entries: BTreeMap<(usize, usize), Elem>,
    gram: Option<Matrix>,
    bcommutative: bool,
}

impl AlgebraBuilder {
    pub fn new(grading: GradingGroup) -> AlgebraBuilder {
        AlgebraBuilder {
            name: String::new(),
            description: String::new(),
            grading,
            names: Vec::new(),
            degrees: Vec::new(),
            entries: BTreeMap::new(),
            gram: None,
            bcommutative: false,
        }
    }

    pub fn name(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn description(mut self, d: &str) -> Self {
        self.description = d.into();
        self
    }

    /// When set, `(j, i)` entries missing from the input are completed from
    /// `(i, j)` through the commutation sign, and present ones are checked.
    pub fn bcommutative(mut self, yes: bool) -> Self {
        self.bcommutative = yes;
        self
    }

    pub fn basis(mut self, name: &str, degree: u32) -> Self {
        self.names.push(name.into());
        self.degrees.push(Degree(degree));
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Sets `e_i e_j`, overwriting any previous entry.
    pub fn product(mut self, i: usize, j: usize, value: Elem) -> Self {
        self.entries.insert((i, j), value);
        self
    }

    /// Sets `e_i e_j` from `(index, coeff)` pairs with integer coefficients.
    pub fn product_int(self, i: usize, j: usize, terms: &[(usize, i64)]) -> Self {
        let e = Elem::from_terms(terms.iter().map(|&(k, c)| (k, Rat::from(c))));
        self.product(i, j, e)
    }

    pub fn has_product(&self, i: usize, j: usize) -> bool {
        self.entries.contains_key(&(i, j))
    }

    pub fn gram(mut self, g: Matrix) -> Self {
        self.gram = Some(g);
        self
    }

    pub fn build(self) -> Result<StructureAlgebra, Error> {
        let n = self.names.len();
        for (k, name) in self.names.iter().enumerate() {
            if self.names[..k].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        for d in &self.degrees {
            self.grading.check(*d)?;
        }
        let mut table = vec![Elem::zero(); n * n];
        for (&(i, j), v) in &self.entries {
            for idx in [i, j].into_iter().chain(v.max_index()) {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            table[i * n + j] = v.clone();
        }
        let label = |i: usize| self.names[i].clone();
        if self.bcommutative {
            for i in 0..n {
                for j in 0..n {
                    let s = Rat::from(self.grading.sign_commute(self.degrees[i], self.degrees[j]));
                    match (self.entries.get(&(i, j)), self.entries.get(&(j, i))) {
                        (Some(v), None) => table[j * n + i] = v.scale(s),
                        (Some(v), Some(w)) => {
                            let diff = v.sub(&w.scale(s));
                            if let Some(&(k, _)) = diff.terms().first() {
                                return Err(Error::NotBCommutative {
                                    left: label(i),
                                    right: label(j),
                                    target: label(k),
                                });
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let expect = self.grading.add(self.degrees[i], self.degrees[j]);
                if let Some(&(k, _)) = table[i * n + j]
                    .terms()
                    .iter()
                    .find(|(k, _)| self.degrees[*k] != expect)
                {
                    return Err(Error::GradingViolation {
                        left: label(i),
                        right: label(j),
                        target: label(k),
                    });
                }
            }
        }
        if let Some(g) = &self.gram {
            if g.rows() != n || g.cols() != n {
                return Err(Error::GramShape { dim: n });
            }
        }
        Ok(StructureAlgebra {
            name: self.name,
            description: self.description,
            grading: self.grading,
            names: self.names,
            degrees: self.degrees,
            table,
            gram: self.gram,
            bcommutative: self.bcommutative,
        })
    }
}

/// Verdicts on the stored form: invariance, `B`-symmetry, `B`-gradedness and
/// nondegeneracy, each with the first failing basis tuple.
pub fn check_form(alg: &StructureAlgebra) -> Result<CheckReport, Error> {
    let g = alg.gram().ok_or(Error::MissingForm)?;
    let n = alg.dim();
    let b = alg.grading();
    let name = |i: usize| alg.basis_name(i).to_string();
    let mut report = CheckReport::new();

    let mut failures = 0u64;
    let mut first = None;
    for i in 0..n {
        for j in 0..n {
            let ij = alg.basis_product(i, j);
            for k in 0..n {
                let lhs = form_value(g, ij, &Elem::basis(k));
                let rhs = form_value(g, &Elem::basis(i), alg.basis_product(j, k));
                if lhs != rhs {
                    failures += 1;
                    if first.is_none() {
                        first = Some(Witness::new([name(i), name(j), name(k)]).sides(lhs.to_string(), rhs.to_string()));
                    }
                }
            }
        }
    }
    report.push(finish("form.invariant", first, failures, (n * n * n) as u64));

    let mut failures = 0u64;
    let mut first = None;
    for i in 0..n {
        for j in 0..n {
            let s = Rat::from(-b.sign_commute(alg.degree(i), alg.degree(j)));
            let (lhs, rhs) = (g.get(i, j), s * g.get(j, i));
            if lhs != rhs {
                failures += 1;
                if first.is_none() {
                    first = Some(Witness::new([name(i), name(j)]).sides(lhs.to_string(), rhs.to_string()));
                }
            }
        }
    }
    report.push(finish("form.b_symmetric", first, failures, (n * n) as u64));

    let mut failures = 0u64;
    let mut first = None;
    for i in 0..n {
        for j in 0..n {
            let total = b.add(alg.degree(i), alg.degree(j));
            if total != Degree(0) && !g.get(i, j).is_zero() {
                failures += 1;
                if first.is_none() {
                    first = Some(Witness::new([name(i), name(j)]).residual(g.get(i, j).to_string()));
                }
            }
        }
    }
    report.push(finish("form.b_graded", first, failures, (n * n) as u64));

    let kernel = g.kernel();
    let det = if n > 0 { g.determinant() } else { Rat::ONE };
    let mut c = if kernel.is_empty() {
        Check::pass("form.nondegenerate")
    } else {
        let v = Elem::from_dense(&kernel[0]);
        Check::fail(
            "form.nondegenerate",
            Witness::new([alg.render(&v)]).residual("kernel vector"),
        )
    };
    c.set_detail("rank", n - kernel.len());
    c.set_detail("kernel_dim", kernel.len());
    c.set_detail("determinant", det);
    report.push(c);
    Ok(report)
}

fn finish(name: &str, first: Option<Witness>, failures: u64, tuples: u64) -> Check {
    let c = match first {
        None => Check::pass(name),
        Some(w) => Check::fail(name, w),
    };
    c.with_tuples(tuples).detail("failures", failures)
}

/// Renders a root or vector of rationals as `[a, b, ...]`.
pub fn render_vector(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from(n)
    }

    #[test]
    fn add_scaled_merges() {
        let mut a = Elem::from_terms([(0, r(1)), (2, r(3))]);
        a.add_scaled(r(2), &Elem::from_terms([(1, r(1)), (2, Rat::new(-3, 2))]));
        assert_eq!(a, Elem::from_terms([(0, r(1)), (1, r(2))]));
    }

    #[test]
    fn render() {
        let a = Elem::from_terms([(0, r(-1)), (1, Rat::new(1, 2)), (2, r(-6))]);
        assert_eq!(a.render_with(|i| format!("e{}", i + 1)), "-e1 + 1/2*e2 - 6*e3");
        assert_eq!(Elem::zero().render_with(|_| String::new()), "0");
    }

    #[test]
    fn builder_completes_anticommutative_table() {
        let a = StructureAlgebra::builder(GradingGroup::Trivial)
            .basis("x", 0)
            .basis("y", 0)
            .bcommutative(true)
            .product_int(0, 1, &[(1, 3)])
            .build()
            .unwrap();
        assert_eq!(a.basis_product(1, 0), &Elem::term(1, r(-3)));
        assert!(a.mul(&Elem::basis(0), &Elem::basis(0)).is_zero());
    }

    #[test]
    fn builder_rejects_grading_violation() {
        let e = StructureAlgebra::builder(GradingGroup::z2())
            .basis("a", 0)
            .basis("b", 0)
            .basis("o", 1)
            .product_int(0, 1, &[(2, 1)])
            .build();
        assert!(matches!(e, Err(Error::GradingViolation { .. })));
    }

    #[test]
    fn builder_rejects_inconsistent_pair() {
        let e = StructureAlgebra::builder(GradingGroup::Trivial)
            .basis("x", 0)
            .basis("y", 0)
            .bcommutative(true)
            .product_int(0, 1, &[(1, 1)])
            .product_int(1, 0, &[(1, 1)])
            .build();
        assert!(matches!(e, Err(Error::NotBCommutative { .. })));
    }

    #[test]
    fn mul_rejects_out_of_range() {
        let a = StructureAlgebra::builder(GradingGroup::Trivial)
            .basis("x", 0)
            .build()
            .unwrap();
        assert!(a.try_mul(&Elem::basis(0), &Elem::basis(3)).is_err());
    }

    #[test]
    fn super_jacobian_needs_homogeneous() {
        let a = StructureAlgebra::builder(GradingGroup::z2())
            .basis("a", 0)
            .basis("o", 1)
            .build()
            .unwrap();
        let mixed = Elem::from_terms([(0, r(1)), (1, r(1))]);
        assert_eq!(
            a.super_jacobian(&mixed, &Elem::basis(0), &Elem::basis(0)),
            Err(Error::NonHomogeneous)
        );
    }
}
