//! Toral subalgebras and the root space decomposition they induce.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{render_vector, Elem, StructureAlgebra};
use crate::error::Error;
use crate::grading::Degree;
use crate::identity::{check_identity, IdentityName, IdentitySpec, Mode};
use crate::linalg::{intersect, poly, rank_of, Matrix, Subspace, Vector};
use crate::rat::Rat;
use crate::report::{Check, CheckReport, Status, Witness};

/// A linear functional on `H`, stored by its values on the basis of `H`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(pub Vec<Rat>);

impl Root {
    pub fn zero(rank: usize) -> Root {
        Root(vec![Rat::ZERO; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rat::is_zero)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|x| -*x).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn scale(&self, c: Rat) -> Root {
        Root(self.0.iter().map(|x| *x * c).collect())
    }

    /// Value on an element of `H` given by its coordinates in the basis of `H`.
    pub fn eval(&self, h_coords: &[Rat]) -> Rat {
        self.0.iter().zip(h_coords).map(|(a, c)| *a * *c).sum()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_vector(&self.0))
    }
}

/// An algebra together with a basis of a candidate toral subalgebra `H`.
#[derive(Clone, Debug)]
pub struct ToralPair {
    alg: StructureAlgebra,
    h: Vec<Elem>,
}

impl ToralPair {
    /// Validates that `h` is a nonempty independent family of degree-0
    /// elements spanning a subalgebra.
    pub fn new(alg: StructureAlgebra, h: Vec<Elem>) -> Result<ToralPair, Error> {
        let n = alg.dim();
        if h.is_empty() {
            return Err(Error::InvalidToral("H must be nonzero".into()));
        }
        for x in &h {
            if let Some(i) = x.max_index().filter(|&i| i >= n) {
                return Err(Error::IndexOutOfRange { index: i, dim: n });
            }
            if x.terms().iter().any(|&(i, _)| alg.degree(i) != Degree(0)) {
                return Err(Error::InvalidToral(format!("{} is not of degree 0", alg.render(x))));
            }
        }
        let dense: Vec<Vector> = h.iter().map(|x| x.to_dense(n)).collect();
        if rank_of(&dense) != h.len() {
            return Err(Error::InvalidToral("basis of H is linearly dependent".into()));
        }
        let span = Subspace::spanned_by(n, &dense);
        for a in &h {
            for b in &h {
                let p = alg.mul(a, b);
                if !span.contains(&p.to_dense(n)) {
                    return Err(Error::InvalidToral(format!(
                        "product {}*{} leaves H",
                        alg.render(a),
                        alg.render(b)
                    )));
                }
            }
        }
        Ok(ToralPair { alg, h })
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.alg
    }

    pub fn h_basis(&self) -> &[Elem] {
        &self.h
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    /// Coordinates of `x` in the basis of `H`, if `x` lies in `H`.
    pub fn h_coords(&self, x: &Elem) -> Option<Vector> {
        let n = self.alg.dim();
        let basis: Vec<Vector> = self.h.iter().map(|e| e.to_dense(n)).collect();
        crate::linalg::coords_in(&basis, &x.to_dense(n))
    }

    pub fn h_element(&self, coords: &[Rat]) -> Elem {
        let mut e = Elem::zero();
        for (c, h) in coords.iter().zip(&self.h) {
            e.add_scaled(*c, h);
        }
        e
    }
}

/// Root space decomposition of a toral pair, refined by degree.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pair: ToralPair,
    roots: Vec<Root>,
    /// `pieces[r][b]` is a basis of the degree-`b` part of the root space of `roots[r]`.
    pieces: Vec<Vec<Vec<Elem>>>,
    /// Root index of each adapted basis vector, in the column order of `change_inv`.
    adapted_root: Vec<usize>,
    adapted: Vec<Elem>,
    change_inv: Matrix,
}

fn left_mult_block(alg: &StructureAlgebra, h: &Elem, idx: &[usize]) -> Matrix {
    let m = idx.len();
    let mut mat = Matrix::zeros(m, m);
    for (c, &j) in idx.iter().enumerate() {
        let p = alg.mul(h, &Elem::basis(j));
        for (r, &i) in idx.iter().enumerate() {
            mat.set(r, c, p.coeff(i));
        }
    }
    mat
}

fn embed(idx: &[usize], v: &[Rat]) -> Elem {
    Elem::from_terms(idx.iter().zip(v).map(|(&i, c)| (i, *c)))
}

/// Joint eigenspace decomposition of `A` under left multiplication by `H`,
/// computed one degree at a time.
pub fn decompose(pair: &ToralPair) -> Result<RootDatum, Error> {
    let alg = &pair.alg;
    let size = alg.grading().size() as usize;
    let mut found: Vec<(Root, usize, Vec<Elem>)> = Vec::new();
    for b in alg.grading().degrees() {
        let idx = alg.indices_of_degree(b);
        let m = idx.len();
        if m == 0 {
            continue;
        }
        let mut joint: Vec<(Vec<Rat>, Vec<Vector>)> =
            vec![(Vec::new(), (0..m).map(|i| Elem::basis(i).to_dense(m)).collect())];
        for h in &pair.h {
            let mat = left_mult_block(alg, h, &idx);
            let cp = mat.char_poly();
            let (eig, rest) = poly::rational_roots(&cp);
            if poly::degree(&rest) > 0 {
                return Err(Error::NotSplit {
                    h: alg.render(h),
                    factor: poly::render(&rest),
                });
            }
            let mut spaces = Vec::new();
            for (lambda, mult) in eig {
                let mut shifted = mat.clone();
                for i in 0..m {
                    shifted.set(i, i, mat.get(i, i) - lambda);
                }
                let ker = shifted.kernel();
                if ker.len() < mult {
                    return Err(Error::NotToral(format!(
                        "left multiplication by {} is not semisimple on degree {b}: eigenvalue {lambda} has algebraic multiplicity {mult} but geometric multiplicity {}",
                        alg.render(h),
                        ker.len()
                    )));
                }
                spaces.push((lambda, ker));
            }
            let mut next = Vec::new();
            for (prefix, space) in &joint {
                for (lambda, eig_space) in &spaces {
                    let cut = intersect(m, space, eig_space);
                    if !cut.is_empty() {
                        let mut p = prefix.clone();
                        p.push(*lambda);
                        next.push((p, cut));
                    }
                }
            }
            joint = next;
        }
        let total: usize = joint.iter().map(|(_, s)| s.len()).sum();
        if total != m {
            return Err(Error::NotToral(format!(
                "joint eigenspaces of H span {total} of {m} dimensions in degree {b}"
            )));
        }
        for (vals, space) in joint {
            found.push((Root(vals), b.0 as usize, space.iter().map(|v| embed(&idx, v)).collect()));
        }
    }
    let mut roots: Vec<Root> = found.iter().map(|(r, _, _)| r.clone()).collect();
    roots.sort();
    roots.dedup();
    let mut pieces = vec![vec![Vec::new(); size]; roots.len()];
    for (r, b, basis) in found {
        let k = roots.binary_search(&r).expect("root collected above");
        pieces[k][b] = basis;
    }
    let mut adapted = Vec::new();
    let mut adapted_root = Vec::new();
    for (k, per_deg) in pieces.iter().enumerate() {
        for basis in per_deg {
            for v in basis {
                adapted.push(v.clone());
                adapted_root.push(k);
            }
        }
    }
    let n = alg.dim();
    let cols: Vec<Vector> = adapted.iter().map(|e| e.to_dense(n)).collect();
    let change_inv = Matrix::from_columns(n, &cols)
        .inverse()
        .ok_or_else(|| Error::NotToral("root vectors do not form a basis".into()))?;
    Ok(RootDatum {
        pair: pair.clone(),
        roots,
        pieces,
        adapted_root,
        adapted,
        change_inv,
    })
}

impl RootDatum {
    pub fn pair(&self) -> &ToralPair {
        &self.pair
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.pair.alg
    }

    /// All roots in lexicographic order, the zero root included.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_index(&self, r: &Root) -> Option<usize> {
        self.roots.binary_search(r).ok()
    }

    /// Basis of the degree-`b` part of the root space of `roots()[k]`.
    pub fn piece(&self, k: usize, b: Degree) -> &[Elem] {
        &self.pieces[k][b.0 as usize]
    }

    /// Basis of the root space `A^α`, degree by degree.
    pub fn space(&self, k: usize) -> Vec<Elem> {
        self.pieces[k].iter().flatten().cloned().collect()
    }

    pub fn dim_of(&self, k: usize) -> usize {
        self.pieces[k].iter().map(Vec::len).sum()
    }

    /// Piece for a root given by value; empty when it is not a root.
    pub fn piece_of(&self, r: &Root, b: Degree) -> &[Elem] {
        match self.root_index(r) {
            Some(k) => self.piece(k, b),
            None => &[],
        }
    }

    /// Roots whose degree-`b` piece is nonzero.
    pub fn root_support(&self, b: Degree) -> Result<Vec<Root>, Error> {
        self.algebra().grading().check(b)?;
        Ok(self
            .roots
            .iter()
            .enumerate()
            .filter(|(k, _)| !self.piece(*k, b).is_empty())
            .map(|(_, r)| r.clone())
            .collect())
    }

    /// Splits `x` into its root components, indexed like `roots()`.
    pub fn components(&self, x: &Elem) -> Vec<Elem> {
        let n = self.algebra().dim();
        let c = self.change_inv.mul_vec(&x.to_dense(n));
        let mut out = vec![Elem::zero(); self.roots.len()];
        for (i, coef) in c.iter().enumerate() {
            if !coef.is_zero() {
                out[self.adapted_root[i]].add_scaled(*coef, &self.adapted[i]);
            }
        }
        out
    }

    /// Zero root index; the zero root always occurs because `H` is in `A^0`
    /// for a toral pair, but a broken pair may lack it.
    pub fn zero_index(&self) -> Option<usize> {
        self.root_index(&Root::zero(self.pair.rank()))
    }
}

/// Verifies the toral conditions on a computed decomposition: `H` is
/// abelian, `A^0` is a subalgebra, and the root spaces exhaust `A`.
pub fn verify_toral(d: &RootDatum) -> CheckReport {
    let alg = d.algebra();
    let n = alg.dim();
    let h = d.pair.h_basis();
    let mut report = CheckReport::new();

    let mut c = Check::pass("toral.h_abelian");
    let mut tuples = 0u64;
    'outer: for a in h {
        for b in h {
            tuples += 1;
            let p = alg.mul(a, b);
            if !p.is_zero() {
                c = Check::fail(
                    "toral.h_abelian",
                    Witness::new([alg.render(a), alg.render(b)]).residual(alg.render(&p)),
                );
                break 'outer;
            }
        }
    }
    report.push(c.with_tuples(tuples));

    let mut c = Check::pass("toral.eigenvectors");
    let mut tuples = 0u64;
    'eig: for (i, v) in d.adapted.iter().enumerate() {
        let root = &d.roots[d.adapted_root[i]];
        for (k, hk) in h.iter().enumerate() {
            tuples += 1;
            let lhs = alg.mul(hk, v);
            let rhs = v.scale(root.0[k]);
            if lhs != rhs {
                c = Check::fail(
                    "toral.eigenvectors",
                    Witness::new([alg.render(hk), alg.render(v)]).sides(alg.render(&lhs), alg.render(&rhs)),
                );
                break 'eig;
            }
        }
    }
    report.push(c.with_tuples(tuples));

    let zero = d.zero_index().map(|k| d.space(k)).unwrap_or_default();
    let zspan = Subspace::spanned_by(n, &zero.iter().map(|e| e.to_dense(n)).collect::<Vec<_>>());
    let mut c = Check::pass("toral.zero_space_closed");
    let mut tuples = 0u64;
    'z: for a in &zero {
        for b in &zero {
            tuples += 1;
            let p = alg.mul(a, b);
            if !zspan.contains(&p.to_dense(n)) {
                c = Check::fail(
                    "toral.zero_space_closed",
                    Witness::new([alg.render(a), alg.render(b)]).residual(alg.render(&p)),
                );
                break 'z;
            }
        }
    }
    report.push(c.with_tuples(tuples).detail("dim_zero_space", zero.len()));

    let total: usize = (0..d.roots.len()).map(|k| d.dim_of(k)).sum();
    let rank = rank_of(&d.adapted.iter().map(|e| e.to_dense(n)).collect::<Vec<_>>());
    let status = if total == n && rank == n {
        Status::Pass
    } else {
        Status::Fail
    };
    let mut c = Check::new("toral.complete", status)
        .detail("dim", n)
        .detail("sum_of_root_spaces", total);
    if status == Status::Fail {
        c = c.with_witness(
            Witness::new([format!("{total}")]).residual(format!("root spaces have rank {rank} in dimension {n}")),
        );
    }
    report.push(c);

    let h_in_zero = h.iter().all(|x| zspan.contains(&x.to_dense(n)));
    report.push(if h_in_zero {
        Check::pass("toral.h_in_zero_space")
    } else {
        Check::fail("toral.h_in_zero_space", Witness::new(h.iter().map(|x| alg.render(x))))
    });
    report
}

fn cell_name(a: &Root, b: &Root) -> String {
    format!("partial_grading[{a}x{b}]")
}

/// Checks, for every pair of roots, that `A^α A^β` lies in `A^{α+β}` when
/// `α ≠ β` and in `A^{2α} + A^{-α}` when `α = β`. The containment is
/// expected for algebras that are anticommutative and satisfy the Sagle
/// identity or its two-variable consequence; when neither can be confirmed
/// the report's summary check is `Conditional` and leaking cells are
/// reported as `Conditional` rather than as counterexamples.
pub fn check_partial_grading(d: &RootDatum) -> CheckReport {
    let alg = d.algebra();
    let mut report = CheckReport::new();

    let anti = check_identity(alg, &IdentitySpec::new(IdentityName::BCommutativity), Mode::Exhaustive)
        .map(|c| c.is_pass())
        .unwrap_or(false);
    let sagle_name = if alg.grading().size() > 1 {
        IdentityName::SuperSagle
    } else {
        IdentityName::Sagle
    };
    let sagle = check_identity(alg, &IdentitySpec::new(sagle_name), Mode::Exhaustive)
        .map(|c| c.is_pass())
        .unwrap_or(false);
    let extended = sagle
        || check_identity(
            alg,
            &IdentitySpec::new(IdentityName::SagleExtended),
            Mode::Sampled {
                seed: 0,
                count: crate::identity::DEFAULT_SAMPLE_COUNT,
            },
        )
        .map(|c| c.is_pass())
        .unwrap_or(false);
    let established = anti && extended;
    let basis = if !anti {
        "not anticommutative"
    } else if sagle {
        "sagle exhaustive"
    } else if extended {
        "sagle_extended sampled"
    } else {
        "neither sagle nor sagle_extended holds"
    };
    report.push(
        Check::new(
            "partial_grading.hypothesis",
            if established { Status::Pass } else { Status::Conditional },
        )
        .detail("established", established)
        .detail("basis", basis),
    );

    let mut full = true;
    for (i, a) in d.roots.iter().enumerate() {
        for (j, b) in d.roots.iter().enumerate() {
            let sum = a.add(b);
            let mut allowed = vec![sum.clone()];
            if i == j {
                allowed.push(a.neg());
            }
            let allowed_idx: Vec<usize> = allowed.iter().filter_map(|r| d.root_index(r)).collect();
            let sum_idx = d.root_index(&sum);
            let mut leak: Option<(Elem, Elem, Elem)> = None;
            let mut tuples = 0u64;
            for u in d.space(i) {
                for v in d.space(j) {
                    tuples += 1;
                    let comps = d.components(&alg.mul(&u, &v));
                    for (k, c) in comps.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        if Some(k) != sum_idx {
                            full = false;
                        }
                        if !allowed_idx.contains(&k) && leak.is_none() {
                            leak = Some((u.clone(), v.clone(), c.clone()));
                        }
                    }
                }
            }
            let name = cell_name(a, b);
            let allowed_txt: Vec<String> = allowed.iter().map(|r| r.to_string()).collect();
            let c = match leak {
                None => Check::pass(name),
                Some((u, v, c)) => {
                    let w = Witness::new([alg.render(&u), alg.render(&v)]).residual(alg.render(&c));
                    Check::new(name, if established { Status::Fail } else { Status::Conditional }).with_witness(w)
                }
            };
            report.push(c.with_tuples(tuples).detail("allowed", allowed_txt));
        }
    }
    if let Some(first) = report.checks.first_mut() {
        first.set_detail("full_grading", full);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    fn datum(name: &str) -> RootDatum {
        let b = builtin(name).unwrap();
        decompose(&ToralPair::new(b.algebra, b.toral).unwrap()).unwrap()
    }

    #[test]
    fn sl2_roots() {
        let d = datum("sl2");
        let rs: Vec<String> = d.roots().iter().map(|r| r.to_string()).collect();
        assert_eq!(rs, ["[-2]", "[0]", "[2]"]);
        assert!(verify_toral(&d).all_pass());
    }

    #[test]
    fn components_reassemble() {
        let d = datum("m7");
        let x = Elem::from_terms([(0, Rat::from(3)), (2, Rat::new(1, 2)), (6, Rat::from(-1))]);
        let mut sum = Elem::zero();
        for c in d.components(&x) {
            sum.add_scaled(Rat::ONE, &c);
        }
        assert_eq!(sum, x);
    }

    #[test]
    fn rejects_nonclosed_h() {
        let b = builtin("sl2").unwrap();
        let e = ToralPair::new(b.algebra, vec![Elem::basis(0), Elem::basis(1)]);
        assert!(e.is_ok());
        let b = builtin("m7").unwrap();
        let e = ToralPair::new(b.algebra, vec![Elem::basis(1), Elem::basis(4)]);
        assert!(matches!(e, Err(Error::InvalidToral(_))));
    }

    #[test]
    fn nilpotent_action_is_not_toral() {
        let b = builtin("sl2").unwrap();
        let p = ToralPair::new(b.algebra, vec![Elem::basis(0), Elem::basis(1)]).unwrap();
        assert!(matches!(decompose(&p), Err(Error::NotToral(_))));
    }
}
