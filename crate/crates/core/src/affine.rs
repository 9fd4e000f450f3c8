//! Loop algebras `A ⊗ F^t[Z^n]`, their central extension by `V = Z^n ⊗ F`
//! and the further extension by the degree derivations `V*`.
//!
//! Identities and axioms are verified on the finite window `σ ∈ [-k, k]^n`.
//! Products of window elements may leave the window; they are always
//! computed exactly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{form_value, render_terms, Elem, StructureAlgebra};
use crate::eaa::{check_e1, check_e3, e2prime_values, QuadraticToralPair, Search, TestPairWitness};
use crate::error::Error;
use crate::grading::{Degree, GradingGroup};
use crate::identity::{check_identity, AlgebraOps, IdentityName, IdentitySpec, Mode};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::rat::Rat;
use crate::report::{Check, CheckReport, Status, Value, Witness};
use crate::toral::{Root, RootDatum};

/// A point of `Z^n`.
pub type Sigma = Vec<i64>;

/// Symmetric bicharacter `λ(σ, τ) = Π q_ij^{σ_i τ_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    q: Vec<Vec<Rat>>,
    trivial: bool,
}

impl Cocycle {
    pub fn new(q: Vec<Vec<Rat>>) -> Result<Cocycle, Error> {
        let n = q.len();
        if n == 0 {
            return Err(Error::InvalidCocycle("rank must be at least 1".into()));
        }
        for (i, row) in q.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCocycle(format!("matrix must be {n}x{n}")));
            }
            for (j, x) in row.iter().enumerate() {
                if x.is_zero() {
                    return Err(Error::InvalidCocycle(format!("entry ({}, {}) is zero", i + 1, j + 1)));
                }
                if *x != q[j][i] {
                    return Err(Error::InvalidCocycle(format!(
                        "entries ({}, {}) and ({}, {}) differ",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        let trivial = q.iter().flatten().all(Rat::is_one);
        Ok(Cocycle { q, trivial })
    }

    pub fn trivial(n: usize) -> Cocycle {
        Cocycle {
            q: vec![vec![Rat::ONE; n]; n],
            trivial: true,
        }
    }

    /// Builds from `n*n` entries in row-major order.
    pub fn from_flat(n: usize, entries: &[Rat]) -> Result<Cocycle, Error> {
        if entries.len() != n * n {
            return Err(Error::InvalidCocycle(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Cocycle::new(entries.chunks(n).map(<[Rat]>::to_vec).collect())
    }

    pub fn rank(&self) -> usize {
        self.q.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.q
    }

    pub fn eval(&self, s: &[i64], t: &[i64]) -> Rat {
        if self.trivial {
            return Rat::ONE;
        }
        let mut acc = Rat::ONE;
        for (i, si) in s.iter().enumerate() {
            if *si == 0 {
                continue;
            }
            for (j, tj) in t.iter().enumerate() {
                let e = si * tj;
                if e != 0 {
                    acc *= self.q[i][j].pow(e);
                }
            }
        }
        acc
    }

    /// Spot-checks the 2-cocycle law on seeded triples from `[-k, k]^n`.
    pub fn check_law(&self, k: i64, seed: u64, count: usize) -> Check {
        let n = self.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| -> Sigma { (0..n).map(|_| rng.gen_range(-k..=k)).collect() };
        for _ in 0..count {
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let lhs = self.eval(&a, &b) * self.eval(&add(&a, &b), &c);
            let rhs = self.eval(&a, &add(&b, &c)) * self.eval(&b, &c);
            if lhs != rhs || self.eval(&a, &b) != self.eval(&b, &a) {
                return Check::fail(
                    "loop.cocycle",
                    Witness::new([render_sigma(&a), render_sigma(&b), render_sigma(&c)])
                        .sides(lhs.to_string(), rhs.to_string()),
                )
                .with_tuples(count as u64);
            }
        }
        let zero = vec![0; n];
        let c = if self.eval(&zero, &zero).is_one() {
            Check::pass("loop.cocycle")
        } else {
            Check::fail("loop.cocycle", Witness::new(["0", "0"]).residual("λ(0,0) ≠ 1"))
        };
        c.with_tuples(count as u64).detail("seed", seed).detail("count", count)
    }
}

fn add(a: &[i64], b: &[i64]) -> Sigma {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Sigma {
    a.iter().map(|x| -x).collect()
}

fn render_sigma(s: &[i64]) -> String {
    if s.len() == 1 {
        return s[0].to_string();
    }
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// `L(A)`.
    Plain,
    /// `L(A) ⊕ V`.
    Tilde,
    /// `L(A) ⊕ V ⊕ V*`.
    Hat,
}

impl Flavor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::Plain => "plain",
            Flavor::Tilde => "tilde",
            Flavor::Hat => "hat",
        }
    }

    fn has_v(&self) -> bool {
        !matches!(self, Flavor::Plain)
    }

    fn has_d(&self) -> bool {
        matches!(self, Flavor::Hat)
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = String;
    fn from_str(s: &str) -> Result<Flavor, String> {
        match s {
            "plain" => Ok(Flavor::Plain),
            "tilde" => Ok(Flavor::Tilde),
            "hat" => Ok(Flavor::Hat),
            _ => Err(format!("unknown flavor `{s}`")),
        }
    }
}

/// `Σ_σ x_σ ⊗ t^σ + Σ v_i c_i + Σ d_i d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopElem {
    tensor: BTreeMap<Sigma, Elem>,
    v: Vec<Rat>,
    d: Vec<Rat>,
}

impl LoopElem {
    pub fn zero(n: usize) -> LoopElem {
        LoopElem {
            tensor: BTreeMap::new(),
            v: vec![Rat::ZERO; n],
            d: vec![Rat::ZERO; n],
        }
    }

    pub fn tensor(x: Elem, sigma: Sigma) -> LoopElem {
        let mut e = LoopElem::zero(sigma.len());
        if !x.is_zero() {
            e.tensor.insert(sigma, x);
        }
        e
    }

    /// The central basis vector `c_i` (zero-based `i`).
    pub fn c(i: usize, n: usize) -> LoopElem {
        let mut e = LoopElem::zero(n);
        e.v[i] = Rat::ONE;
        e
    }

    /// The derivation `d_i` (zero-based `i`).
    pub fn d(i: usize, n: usize) -> LoopElem {
        let mut e = LoopElem::zero(n);
        e.d[i] = Rat::ONE;
        e
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    pub fn tensor_part(&self) -> &BTreeMap<Sigma, Elem> {
        &self.tensor
    }

    pub fn v_part(&self) -> &[Rat] {
        &self.v
    }

    pub fn d_part(&self) -> &[Rat] {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_empty() && self.v.iter().all(Rat::is_zero) && self.d.iter().all(Rat::is_zero)
    }

    pub fn add_scaled(&mut self, c: Rat, x: &LoopElem) {
        if c.is_zero() {
            return;
        }
        for (s, e) in &x.tensor {
            add_tensor(&mut self.tensor, s.clone(), c, e);
        }
        for (a, b) in self.v.iter_mut().zip(&x.v) {
            *a += c * *b;
        }
        for (a, b) in self.d.iter_mut().zip(&x.d) {
            *a += c * *b;
        }
    }

    pub fn scale(&self, c: Rat) -> LoopElem {
        let mut out = LoopElem::zero(self.rank());
        out.add_scaled(c, self);
        out
    }

    /// First nonzero coordinate, in tensor, `V`, `V*` order.
    fn lead(&self) -> Option<Rat> {
        if let Some(e) = self.tensor.values().next() {
            return Some(e.terms()[0].1);
        }
        self.v.iter().chain(&self.d).find(|c| !c.is_zero()).copied()
    }
}

fn add_tensor(map: &mut BTreeMap<Sigma, Elem>, s: Sigma, c: Rat, e: &Elem) {
    if c.is_zero() || e.is_zero() {
        return;
    }
    let slot = map.entry(s.clone()).or_default();
    slot.add_scaled(c, e);
    if slot.is_zero() {
        map.remove(&s);
    }
}

fn dot(d: &[Rat], s: &[i64]) -> Rat {
    d.iter()
        .zip(s)
        .filter(|(_, x)| **x != 0)
        .map(|(a, x)| *a * Rat::from(*x))
        .sum()
}

#[derive(Clone, Debug)]
pub struct LoopAlgebra {
    base: StructureAlgebra,
    cocycle: Cocycle,
    flavor: Flavor,
}

impl LoopAlgebra {
    /// The extended flavors need a form on the base for the central term.
    pub fn new(base: StructureAlgebra, cocycle: Cocycle, flavor: Flavor) -> Result<LoopAlgebra, Error> {
        if flavor.has_v() && base.gram().is_none() {
            return Err(Error::MissingForm);
        }
        Ok(LoopAlgebra { base, cocycle, flavor })
    }

    pub fn base(&self) -> &StructureAlgebra {
        &self.base
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn rank(&self) -> usize {
        self.cocycle.rank()
    }

    fn validate(&self, x: &LoopElem) -> Result<(), Error> {
        let n = self.rank();
        if x.v.len() != n || x.d.len() != n || x.tensor.keys().any(|s| s.len() != n) {
            return Err(Error::RankMismatch {
                expected: n,
                got: x.v.len(),
            });
        }
        let dim = self.base.dim();
        if let Some(i) = x.tensor.values().filter_map(Elem::max_index).find(|&i| i >= dim) {
            return Err(Error::IndexOutOfRange { index: i, dim });
        }
        if !self.flavor.has_v() && x.v.iter().any(|c| !c.is_zero()) {
            return Err(Error::FlavorMismatch(format!("{} has no central part", self.flavor)));
        }
        if !self.flavor.has_d() && x.d.iter().any(|c| !c.is_zero()) {
            return Err(Error::FlavorMismatch(format!("{} has no derivation part", self.flavor)));
        }
        Ok(())
    }

    pub fn mul(&self, x: &LoopElem, y: &LoopElem) -> Result<LoopElem, Error> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &LoopElem, y: &LoopElem) -> LoopElem {
        let n = self.rank();
        let mut out = LoopElem::zero(n);
        let g = self.base.gram();
        for (s, a) in &x.tensor {
            for (t, b) in &y.tensor {
                let lam = self.cocycle.eval(s, t);
                let ab = self.base.mul(a, b);
                if !ab.is_zero() {
                    add_tensor(&mut out.tensor, add(s, t), lam, &ab);
                }
                if self.flavor.has_v() && s.iter().zip(t).all(|(p, q)| p + q == 0) {
                    let f = form_value(g.expect("checked at construction"), a, b);
                    if !f.is_zero() {
                        for (slot, si) in out.v.iter_mut().zip(s) {
                            *slot += lam * f * Rat::from(*si);
                        }
                    }
                }
            }
        }
        if self.flavor.has_d() {
            for (t, b) in &y.tensor {
                add_tensor(&mut out.tensor, t.clone(), dot(&x.d, t), b);
            }
            for (s, a) in &x.tensor {
                add_tensor(&mut out.tensor, s.clone(), -dot(&y.d, s), a);
            }
        }
        out
    }

    pub fn form(&self, x: &LoopElem, y: &LoopElem) -> Result<Rat, Error> {
        self.validate(x)?;
        self.validate(y)?;
        let g = self.base.gram().ok_or(Error::MissingForm)?;
        Ok(self.form_unchecked(g, x, y))
    }

    fn form_unchecked(&self, g: &Matrix, x: &LoopElem, y: &LoopElem) -> Rat {
        let mut acc = Rat::ZERO;
        for (s, a) in &x.tensor {
            if let Some(b) = y.tensor.get(&neg(s)) {
                acc += form_value(g, a, b) * self.cocycle.eval(s, &neg(s));
            }
        }
        if self.flavor.has_d() {
            for i in 0..self.rank() {
                acc += x.d[i] * y.v[i] + x.v[i] * y.d[i];
            }
        }
        acc
    }

    /// Degree of a homogeneous element; `V` and `V*` sit in degree 0.
    pub fn degree_of(&self, x: &LoopElem) -> Option<Degree> {
        let mut degs = x.tensor.values().map(|e| self.base.degree_of(e));
        let first = degs.next();
        let has_vd = x.v.iter().chain(&x.d).any(|c| !c.is_zero());
        match first {
            None => Some(Degree(0)),
            Some(None) => None,
            Some(Some(d)) => {
                if degs.any(|e| e != Some(d)) || (has_vd && d != Degree(0)) {
                    None
                } else {
                    Some(d)
                }
            }
        }
    }

    pub fn render(&self, x: &LoopElem) -> String {
        let mut terms: Vec<(String, Rat)> = Vec::new();
        for (s, e) in &x.tensor {
            let t = if s.iter().all(|v| *v == 0) {
                "1".to_string()
            } else {
                format!("t^{}", render_sigma(s))
            };
            for &(i, c) in e.terms() {
                terms.push((format!("{}⊗{t}", self.base.basis_name(i)), c));
            }
        }
        for (i, c) in x.v.iter().enumerate() {
            terms.push((format!("c{}", i + 1), *c));
        }
        for (i, c) in x.d.iter().enumerate() {
            terms.push((format!("d{}", i + 1), *c));
        }
        render_terms(terms)
    }

    /// Lattice points of `[-k, k]^n` in lexicographic order.
    pub fn window(&self, k: u32) -> Vec<Sigma> {
        let n = self.rank();
        let k = k as i64;
        let side = (2 * k + 1) as usize;
        let total = side.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut s = vec![0i64; n];
                for slot in (0..n).rev() {
                    s[slot] = (code % side) as i64 - k;
                    code /= side;
                }
                s
            })
            .collect()
    }

    /// `{e_i ⊗ t^σ}` (basis order outside, window order inside), then the
    /// `c_i`, then the `d_i`.
    pub fn truncated_basis(&self, k: u32) -> Vec<LoopElem> {
        let n = self.rank();
        let win = self.window(k);
        let mut out = Vec::new();
        for i in 0..self.base.dim() {
            for s in &win {
                out.push(LoopElem::tensor(Elem::basis(i), s.clone()));
            }
        }
        if self.flavor.has_v() {
            out.extend((0..n).map(|i| LoopElem::c(i, n)));
        }
        if self.flavor.has_d() {
            out.extend((0..n).map(|i| LoopElem::d(i, n)));
        }
        out
    }

    pub fn truncate(&self, k: u32) -> TruncatedLoop<'_> {
        let basis = self.truncated_basis(k);
        let labels = basis.iter().map(|b| self.render(b)).collect();
        let degrees = basis
            .iter()
            .map(|b| self.degree_of(b).expect("basis vectors are homogeneous"))
            .collect();
        TruncatedLoop {
            la: self,
            basis,
            labels,
            degrees,
        }
    }
}

/// The span of a window's basis, as seen by the identity engine.
pub struct TruncatedLoop<'a> {
    la: &'a LoopAlgebra,
    basis: Vec<LoopElem>,
    labels: Vec<String>,
    degrees: Vec<Degree>,
}

impl TruncatedLoop<'_> {
    pub fn basis(&self) -> &[LoopElem] {
        &self.basis
    }
}

impl AlgebraOps for TruncatedLoop<'_> {
    type Elem = LoopElem;

    fn grading(&self) -> GradingGroup {
        self.la.base.grading()
    }
    fn basis_len(&self) -> usize {
        self.basis.len()
    }
    fn basis_elem(&self, i: usize) -> LoopElem {
        self.basis[i].clone()
    }
    fn basis_degree(&self, i: usize) -> Degree {
        self.degrees[i]
    }
    fn basis_label(&self, i: usize) -> String {
        self.labels[i].clone()
    }
    fn zero(&self) -> LoopElem {
        LoopElem::zero(self.la.rank())
    }
    fn mul(&self, a: &LoopElem, b: &LoopElem) -> LoopElem {
        self.la.mul_unchecked(a, b)
    }
    fn add_scaled(&self, acc: &mut LoopElem, c: Rat, x: &LoopElem) {
        acc.add_scaled(c, x)
    }
    fn is_zero(&self, x: &LoopElem) -> bool {
        x.is_zero()
    }
    fn render(&self, x: &LoopElem) -> String {
        self.la.render(x)
    }
    fn mul_basis_right(&self, a: &LoopElem, j: usize) -> LoopElem {
        self.la.mul_unchecked(a, &self.basis[j])
    }
}

/// Exhaustive check of a multilinear identity on the window `[-k, k]^n`.
pub fn check_loop_identity(la: &LoopAlgebra, spec: &IdentitySpec, k: u32) -> Result<Check, Error> {
    if !spec.multilinear {
        return Err(Error::NotMultilinear(spec.name.as_str()));
    }
    let t = la.truncate(k);
    let c = check_identity(&t, spec, Mode::Exhaustive)?;
    Ok(c.detail("flavor", la.flavor.as_str())
        .detail("rank", la.rank())
        .detail("box", k as u64)
        .detail("basis_size", t.basis_len())
        .detail("cocycle_trivial", la.cocycle.is_trivial()))
}

/// Conditions on a base algebra deciding which loop constructions over it
/// satisfy the Malcev identity.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub report: CheckReport,
    pub base_malcev: bool,
    /// The derivation terms of `L̂` cancel: `J̄` vanishes on even `x` and its
    /// polarized form conditions hold.
    pub derivation: bool,
    /// The polarized form condition restricted to `|y| + |z| = 0`.
    pub even_pairing: bool,
    /// The central part of the Sagle identity on `L̃` vanishes for every
    /// choice of lattice weights.
    pub lattice: bool,
}

impl Obstruction {
    /// Predicted Malcev verdict for the window `[-k, k]^n`. With `k = 0`
    /// the derivations act trivially and the central term vanishes, so only
    /// the base identity matters. For `k >= 1` the window holds enough
    /// weights to separate the coefficients of the central part.
    pub fn predicts(&self, flavor: Flavor, k: u32) -> bool {
        match (flavor, k) {
            (Flavor::Plain, _) | (_, 0) => self.base_malcev,
            (Flavor::Tilde, _) => self.base_malcev && self.lattice,
            (Flavor::Hat, _) => self.base_malcev && self.lattice && self.derivation,
        }
    }
}

fn sagle_name(alg: &StructureAlgebra) -> IdentityName {
    if alg.grading().size() > 1 {
        IdentityName::SuperSagle
    } else {
        IdentityName::Sagle
    }
}

/// Evaluates the two families of conditions over basis tuples, with the
/// repeated variable polarized.
pub fn malcev_obstruction(alg: &StructureAlgebra) -> Result<Obstruction, Error> {
    let g = alg.gram().ok_or(Error::MissingForm)?;
    let n = alg.dim();
    let grading = alg.grading();
    let mut report = CheckReport::new();
    let bc = check_identity(alg, &IdentitySpec::new(IdentityName::BCommutativity), Mode::Exhaustive)?;
    let bc_pass = bc.is_pass();
    report.push(bc);
    if !bc_pass {
        report.push(
            Check::new("obstruction.precondition", Status::Refused)
                .detail("reason", "the algebra is not B-commutative"),
        );
        return Ok(Obstruction {
            report,
            base_malcev: false,
            derivation: false,
            even_pairing: false,
            lattice: false,
        });
    }
    let base = check_identity(alg, &IdentitySpec::new(sagle_name(alg)), Mode::Exhaustive)?;
    let base_malcev = base.is_pass();
    let mut base = base;
    base.name = "obstruction.base_malcev".into();
    report.push(base);

    let basis: Vec<Elem> = (0..n).map(Elem::basis).collect();
    let deg = |i: usize| alg.degree(i);
    let jb = |x: usize, y: usize, z: usize| {
        alg.super_jacobian(&basis[x], &basis[y], &basis[z])
            .expect("basis is homogeneous")
    };
    let name = |i: usize| alg.basis_name(i).to_string();

    let mut jac = vec![Elem::zero(); n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                jac[(x * n + y) * n + z] = jb(x, y, z);
            }
        }
    }
    let j = |x: usize, y: usize, z: usize| &jac[(x * n + y) * n + z];

    // J̄(x,y,w) + J̄(w,y,x) = 0 for |x| = |w|
    let mut c = Check::pass("obstruction.derivation.jbar_xyx");
    let mut tuples = 0u64;
    'a: for x in 0..n {
        for w in 0..n {
            if deg(x) != deg(w) {
                continue;
            }
            for y in 0..n {
                tuples += 1;
                let r = j(x, y, w).add(j(w, y, x));
                if !r.is_zero() {
                    c = Check::fail(
                        "obstruction.derivation.jbar_xyx",
                        Witness::new([name(x), name(y), name(w)]).residual(alg.render(&r)),
                    );
                    break 'a;
                }
            }
        }
    }
    let der_a = c.is_pass();
    report.push(c.with_tuples(tuples));

    let mut c = Check::pass("obstruction.derivation.jbar_even_x");
    let mut tuples = 0u64;
    'b: for x in (0..n).filter(|&x| deg(x) == Degree(0)) {
        for y in 0..n {
            for z in 0..n {
                tuples += 1;
                if !j(x, y, z).is_zero() {
                    c = Check::fail(
                        "obstruction.derivation.jbar_even_x",
                        Witness::new([name(x), name(y), name(z)]).residual(alg.render(j(x, y, z))),
                    );
                    break 'b;
                }
            }
        }
    }
    let der_b = c.is_pass();
    report.push(c.with_tuples(tuples));

    let pairing = |label: &str, restrict: bool| -> Check {
        let mut tuples = 0u64;
        for x in 0..n {
            for w in 0..n {
                if deg(x) != deg(w) {
                    continue;
                }
                for y in 0..n {
                    for z in 0..n {
                        if restrict && grading.add(deg(y), deg(z)) != Degree(0) {
                            continue;
                        }
                        tuples += 1;
                        let v = form_value(g, j(x, y, z), &basis[w]) + form_value(g, j(w, y, z), &basis[x]);
                        if !v.is_zero() {
                            return Check::fail(
                                label,
                                Witness::new([name(x), name(y), name(z), name(w)]).residual(v.to_string()),
                            )
                            .with_tuples(tuples);
                        }
                    }
                }
            }
        }
        Check::pass(label).with_tuples(tuples)
    };
    let c = pairing("obstruction.derivation.form", false);
    let der_c = c.is_pass();
    report.push(c);
    let c = pairing("obstruction.even_pairing", true);
    let even_pairing = c.is_pass();
    report.push(c);

    let c = lattice_central(alg, g);
    let lattice = c.is_pass();
    report.push(c);

    let derivation = der_a && der_b && der_c;
    let ob = Obstruction {
        report,
        base_malcev,
        derivation,
        even_pairing,
        lattice,
    };
    let mut pred = Check::pass("obstruction.prediction")
        .detail("base_malcev", base_malcev)
        .detail("derivation", derivation)
        .detail("even_pairing", even_pairing)
        .detail("lattice_central", lattice);
    for k in [0u32, 1] {
        for f in [Flavor::Plain, Flavor::Tilde, Flavor::Hat] {
            pred.set_detail(&format!("{}_malcev_box{k}", f.as_str()), ob.predicts(f, k));
        }
    }
    let mut ob = ob;
    ob.report.push(pred);
    Ok(ob)
}

/// Central part of the (super) Sagle identity on `L̃` for the basis
/// quadruple `(x ⊗ t^a, y ⊗ t^b, z ⊗ t^c, w ⊗ t^e)` with `a + b + c + e = 0`.
/// Each of the five terms `P·Q` contributes `(P, Q)` times the weight of
/// `P`; eliminating `e` leaves a linear form in `a, b, c` whose three
/// coefficients must vanish separately. The cocycle contributes one common
/// factor per quadruple.
fn lattice_central(alg: &StructureAlgebra, g: &Matrix) -> Check {
    let n = alg.dim();
    let sup = alg.grading().size() > 1;
    let s = |e: u64| {
        if sup {
            Rat::from(crate::grading::parity_sign(e))
        } else {
            Rat::ONE
        }
    };
    let basis: Vec<Elem> = (0..n).map(Elem::basis).collect();
    let deg: Vec<u64> = (0..n).map(|i| alg.degree(i).0 as u64).collect();
    let p = |a: &Elem, b: &Elem| alg.mul(a, b);
    let mut tuples = 0u64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    tuples += 1;
                    let (bx, by, bz, bw) = (&basis[x], &basis[y], &basis[z], &basis[w]);
                    let (dx, dy, dz, dw) = (deg[x], deg[y], deg[z], deg[w]);
                    let f1 = form_value(g, &p(&p(bx, by), bz), bw);
                    let f2 = s(dx * (dy + dz + dw)) * form_value(g, &p(&p(by, bz), bw), bx);
                    let f3 = s((dx + dy) * (dz + dw)) * form_value(g, &p(&p(bz, bw), bx), by);
                    let f4 = s(dw * (dx + dy + dz)) * form_value(g, &p(&p(bw, bx), by), bz);
                    let f5 = -s(dy * dz) * form_value(g, &p(bx, bz), &p(by, bw));
                    let coeffs = [f1 - f2 + f5, f1 - f3, f1 - f4 + f5];
                    if let Some((slot, v)) = coeffs.iter().enumerate().find(|(_, v)| !v.is_zero()) {
                        let names = [x, y, z, w].map(|i| alg.basis_name(i).to_string());
                        return Check::fail(
                            "obstruction.lattice_central",
                            Witness::new(names).residual(format!("{v} times the weight of {}", ["x", "y", "z"][slot])),
                        )
                        .with_tuples(tuples);
                    }
                }
            }
        }
    }
    Check::pass("obstruction.lattice_central").with_tuples(tuples)
}

/// Root vectors of the loop algebra over the base datum.
///
/// For `Hat` the roots are formal pairs `α + σ`; the zero pair adds `V` and
/// `V*`. For `Plain` and `Tilde` the root space of `α` is infinite, and the
/// slice at `σ` is returned (with `V` added at `α = 0`, `σ = 0`). Every
/// returned vector is checked against the eigen-equations of the toral part.
pub fn loop_root_space(
    la: &LoopAlgebra,
    datum: &RootDatum,
    alpha: &Root,
    sigma: &[i64],
) -> Result<Vec<LoopElem>, Error> {
    let n = la.rank();
    if sigma.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: sigma.len(),
        });
    }
    let k = datum
        .root_index(alpha)
        .ok_or_else(|| Error::RootNotInSupport(alpha.to_string()))?;
    let mut out: Vec<LoopElem> = datum
        .space(k)
        .into_iter()
        .map(|e| LoopElem::tensor(e, sigma.to_vec()))
        .collect();
    if alpha.is_zero() && sigma.iter().all(|s| *s == 0) {
        if la.flavor.has_v() {
            out.extend((0..n).map(|i| LoopElem::c(i, n)));
        }
        if la.flavor.has_d() {
            out.extend((0..n).map(|i| LoopElem::d(i, n)));
        }
    }
    let toral = loop_toral(la, datum);
    for x in &out {
        for (h, val) in &toral {
            let want = match val {
                ToralValue::Root(i) => alpha.0[*i],
                ToralValue::Central => Rat::ZERO,
                ToralValue::Deriv(i) => Rat::from(sigma[*i]),
            };
            let got = la.mul_unchecked(h, x);
            if got != x.scale(want) {
                return Err(Error::NotToral(format!(
                    "{} * {} = {}, expected {want} times it",
                    la.render(h),
                    la.render(x),
                    la.render(&got)
                )));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
enum ToralValue {
    Root(usize),
    Central,
    Deriv(usize),
}

/// Basis of the toral part `H ⊗ 1 (⊕ V) (⊕ V*)` with how each basis
/// vector acts on root vectors.
fn loop_toral(la: &LoopAlgebra, datum: &RootDatum) -> Vec<(LoopElem, ToralValue)> {
    let n = la.rank();
    let zero: Sigma = vec![0; n];
    let mut out: Vec<(LoopElem, ToralValue)> = datum
        .pair()
        .h_basis()
        .iter()
        .enumerate()
        .map(|(i, h)| (LoopElem::tensor(h.clone(), zero.clone()), ToralValue::Root(i)))
        .collect();
    if la.flavor.has_v() {
        out.extend((0..n).map(|i| (LoopElem::c(i, n), ToralValue::Central)));
    }
    if la.flavor.has_d() {
        out.extend((0..n).map(|i| (LoopElem::d(i, n), ToralValue::Deriv(i))));
    }
    out
}

/// Coordinates of `x` in the toral part, if it lies there.
fn toral_coords(la: &LoopAlgebra, datum: &RootDatum, x: &LoopElem) -> Option<Vec<Rat>> {
    let n = la.rank();
    let mut h_part = Elem::zero();
    for (s, e) in &x.tensor {
        if s.iter().any(|v| *v != 0) {
            return None;
        }
        h_part = e.clone();
    }
    let mut c = datum.pair().h_coords(&h_part)?;
    if la.flavor.has_v() {
        c.extend_from_slice(&x.v);
    } else if x.v.iter().any(|v| !v.is_zero()) {
        return None;
    }
    if la.flavor.has_d() {
        c.extend_from_slice(&x.d);
    } else if x.d.iter().any(|v| !v.is_zero()) {
        return None;
    }
    debug_assert!(c.len() >= n.min(1));
    Some(c)
}

/// A root of the loop algebra: a base root, plus `σ` for `Hat`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct LoopRoot {
    alpha: usize,
    sigma: Option<Sigma>,
}

fn loop_roots(la: &LoopAlgebra, datum: &RootDatum, win: &[Sigma]) -> Vec<LoopRoot> {
    let mut out = Vec::new();
    for a in 0..datum.roots().len() {
        if la.flavor.has_d() {
            for s in win {
                out.push(LoopRoot {
                    alpha: a,
                    sigma: Some(s.clone()),
                });
            }
        } else {
            out.push(LoopRoot { alpha: a, sigma: None });
        }
    }
    out
}

fn root_label(datum: &RootDatum, r: &LoopRoot) -> String {
    match &r.sigma {
        Some(s) => format!("{}+{}", datum.roots()[r.alpha], render_sigma(s)),
        None => datum.roots()[r.alpha].to_string(),
    }
}

/// The root as a functional on the toral basis, read off from its action on
/// a representative root vector.
fn root_functional(la: &LoopAlgebra, datum: &RootDatum, r: &LoopRoot) -> Vec<Rat> {
    let n = la.rank();
    let sigma = r.sigma.clone().unwrap_or_else(|| vec![0; n]);
    let rep = LoopElem::tensor(datum.space(r.alpha)[0].clone(), sigma);
    let lead = rep.lead().expect("nonzero representative");
    loop_toral(la, datum)
        .iter()
        .map(|(h, _)| {
            let p = la.mul_unchecked(h, &rep);
            let lam = p.lead().map_or(Rat::ZERO, |c| c / lead);
            debug_assert_eq!(p, rep.scale(lam));
            lam
        })
        .collect()
}

fn toral_gram(la: &LoopAlgebra, datum: &RootDatum, g: &Matrix) -> Matrix {
    let t: Vec<LoopElem> = loop_toral(la, datum).into_iter().map(|(h, _)| h).collect();
    let m = t.len();
    let mut out = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, la.form_unchecked(g, &t[i], &t[j]));
        }
    }
    out
}

fn toral_element(la: &LoopAlgebra, datum: &RootDatum, c: &[Rat]) -> LoopElem {
    let mut out = LoopElem::zero(la.rank());
    for ((h, _), x) in loop_toral(la, datum).iter().zip(c) {
        out.add_scaled(*x, h);
    }
    out
}

/// Instance check of the extended (and, for `Plain` and `Hat`, extended
/// affine) axioms on the window `[-k, k]^n`.
pub fn check_eaa_loop(la: &LoopAlgebra, q: &QuadraticToralPair, k: u32, search: &Search) -> Result<CheckReport, Error> {
    if la.base() != q.algebra() {
        return Err(Error::Mismatch("toral pair belongs to a different algebra".into()));
    }
    let datum = q.datum();
    let base = q.algebra();
    let g = base.gram().ok_or(Error::MissingForm)?;
    let n = la.rank();
    let zero: Sigma = vec![0; n];
    let grading = base.grading();
    let mut report = CheckReport::new();

    let base_e1 = check_e1(datum, Some(g), search);
    let mut c = base_e1.check.clone();
    c.name = "loop.base.E1".into();
    let e1_ok = c.is_pass();
    report.push(c);
    let base_values = if q.nondegenerate_on_h() {
        Some(e2prime_values(q)?)
    } else {
        None
    };
    report.push(match &base_values {
        Some(v) => {
            Check::pass("loop.base.E2prime").detail("values", v.iter().map(|r| Value::from(*r)).collect::<Vec<_>>())
        }
        None => {
            Check::new("loop.base.E2prime", Status::Refused).detail("reason", "the form restricted to H is degenerate")
        }
    });
    if la.flavor != Flavor::Tilde {
        let mut c = check_e3(q);
        c.name = "loop.base.E3".into();
        report.push(c);
    }
    if !e1_ok {
        report
            .push(Check::new("loop.precondition", Status::Refused).detail("reason", "the base pair does not pass E1"));
        return Ok(report);
    }

    if la.flavor == Flavor::Hat {
        let dim = base.dim();
        let z = datum.zero_index();
        let a00: Vec<Vector> = z
            .map(|z| datum.piece(z, Degree(0)).iter().map(|e| e.to_dense(dim)).collect())
            .unwrap_or_default();
        let h: Vec<Vector> = datum.pair().h_basis().iter().map(|e| e.to_dense(dim)).collect();
        let same = a00.len() == h.len() && {
            let s = Subspace::spanned_by(dim, &a00);
            h.iter().all(|v| s.contains(v))
        };
        if !same {
            report.push(
                Check::new("loop.hypothesis.a00_is_h", Status::Refused)
                    .detail("reason", "the degree-0 part of the zero root space must equal H")
                    .detail("dim_a00", a00.len())
                    .detail("dim_h", h.len()),
            );
            return Ok(report);
        }
        report.push(Check::pass("loop.hypothesis.a00_is_h").detail("dim_a00", a00.len()));
        let a0: Vec<Elem> = z.map(|z| datum.space(z)).unwrap_or_default();
        let m = a0.len();
        let mut block = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                block.set(i, j, form_value(g, &a0[i], &a0[j]));
            }
        }
        if block.determinant().is_zero() {
            report.push(
                Check::new("loop.hypothesis.form_nondegenerate_on_a0", Status::Refused)
                    .detail("reason", "the form must be nondegenerate on the zero root space"),
            );
            return Ok(report);
        }
        report.push(Check::pass("loop.hypothesis.form_nondegenerate_on_a0").detail("dim_a0", m));
    }

    report.push(la.cocycle.check_law(k.max(1) as i64, search.seed, 64));

    let win = la.window(k);
    let toral = loop_toral(la, datum);
    let in_root_space = |x: &LoopElem, alpha: &Root, sigma: &[i64]| -> bool {
        toral.iter().all(|(h, v)| {
            let want = match v {
                ToralValue::Root(i) => alpha.0[*i],
                ToralValue::Central => Rat::ZERO,
                ToralValue::Deriv(i) => Rat::from(sigma[*i]),
            };
            la.mul_unchecked(h, x) == x.scale(want)
        })
    };

    // root spaces
    let mut rs = Check::pass("loop.root_spaces");
    let mut rs_count = 0u64;
    'rs: for a in datum.roots() {
        for s in &win {
            rs_count += 1;
            if let Err(e) = loop_root_space(la, datum, a, s) {
                rs = Check::fail(
                    "loop.root_spaces",
                    Witness::new([format!("{a}+{}", render_sigma(s))]).residual(e.to_string()),
                );
                break 'rs;
            }
        }
    }
    report.push(rs.with_tuples(rs_count));

    // E1
    let witness_for = |alpha: &Root, b: Degree| -> Option<&TestPairWitness> {
        base_e1.witnesses.iter().find(|w| &w.root == alpha && w.degree == b)
    };
    let mut described = Vec::new();
    let mut unresolved = Vec::new();
    let mut failure: Option<Witness> = None;
    let mut tuples = 0u64;
    for (ai, alpha) in datum.roots().iter().enumerate() {
        for b in grading.degrees() {
            if datum.piece(ai, b).is_empty() {
                continue;
            }
            let sigmas: Vec<Sigma> = if alpha.is_zero() {
                if la.flavor.has_d() {
                    win.iter().filter(|s| **s != zero).cloned().collect()
                } else {
                    Vec::new()
                }
            } else {
                win.clone()
            };
            for s in sigmas {
                tuples += 1;
                let label = format!("root {alpha}+{} degree {b}", render_sigma(&s));
                let pair = if alpha.is_zero() {
                    let minus = datum.piece(ai, grading.neg(b));
                    datum
                        .piece(ai, b)
                        .iter()
                        .flat_map(|u| minus.iter().map(move |v| (u, v)))
                        .find(|(u, v)| !form_value(g, u, v).is_zero())
                        .map(|(u, v)| (u.clone(), v.clone()))
                } else {
                    witness_for(alpha, b).map(|w| (w.x_plus.clone(), w.x_minus.clone()))
                };
                let Some((u, v)) = pair else {
                    unresolved.push(label);
                    continue;
                };
                let xp = LoopElem::tensor(u, s.clone());
                let xm = LoopElem::tensor(v, neg(&s));
                let root_sigma = if la.flavor.has_d() { s.clone() } else { zero.clone() };
                let p = la.mul_unchecked(&xp, &xm);
                let ok = in_root_space(&xp, alpha, &root_sigma)
                    && in_root_space(&xm, &alpha.neg(), &neg(&root_sigma))
                    && !p.is_zero()
                    && toral_coords(la, datum, &p).is_some();
                if ok {
                    described.push(format!(
                        "{label}: ({}, {}) -> {}",
                        la.render(&xp),
                        la.render(&xm),
                        la.render(&p)
                    ));
                } else if failure.is_none() {
                    failure = Some(Witness::new([la.render(&xp), la.render(&xm)]).residual(la.render(&p)));
                }
            }
        }
    }
    let mut c = match failure {
        Some(w) => Check::fail("loop.E1", w),
        None if !unresolved.is_empty() => Check::new("loop.E1", Status::Inconclusive).detail("unresolved", unresolved),
        None => Check::pass("loop.E1"),
    };
    c = c
        .with_tuples(tuples)
        .detail("witness_count", described.len())
        .detail("witnesses", described);
    report.push(c);

    // E2
    let tg = toral_gram(la, datum, g);
    let roots = loop_roots(la, datum, &win);
    if !tg.determinant().is_zero() {
        let funcs: Vec<Vec<Rat>> = roots.iter().map(|r| root_functional(la, datum, r)).collect();
        let ts: Vec<LoopElem> = funcs
            .iter()
            .map(|f| toral_element(la, datum, &tg.solve(f).expect("nondegenerate")))
            .collect();
        let mut values = BTreeSet::new();
        let mut mismatch = None;
        let mut tuples = 0u64;
        for (i, ri) in roots.iter().enumerate() {
            for (j, rj) in roots.iter().enumerate() {
                tuples += 1;
                let v = la.form_unchecked(g, &ts[i], &ts[j]);
                values.insert(v);
                let expect = q.root_pairing(&datum.roots()[ri.alpha], &datum.roots()[rj.alpha]);
                if expect.as_ref().ok() != Some(&v) && mismatch.is_none() {
                    mismatch = Some(
                        Witness::new([root_label(datum, ri), root_label(datum, rj)])
                            .sides(v.to_string(), expect.map_or("undefined".into(), |e| e.to_string())),
                    );
                }
            }
        }
        let mut collisions = Vec::new();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if funcs[i] == funcs[j] {
                    collisions.push(format!(
                        "{} = {}",
                        root_label(datum, &roots[i]),
                        root_label(datum, &roots[j])
                    ));
                }
            }
        }
        let same_set = base_values.as_ref() == Some(&values);
        let c = match mismatch {
            Some(w) => Check::fail("loop.E2prime", w),
            None if !same_set => Check::fail(
                "loop.E2prime",
                Witness::new(["value sets"]).sides(
                    render_set(&values),
                    base_values.as_ref().map_or("undefined".into(), render_set),
                ),
            ),
            None => Check::pass("loop.E2prime"),
        };
        report.push(
            c.with_tuples(tuples)
                .detail("values", values.iter().map(|r| Value::from(*r)).collect::<Vec<_>>())
                .detail("roots_in_box", roots.len())
                .detail("collisions", collisions),
        );
    } else {
        report.push(sampled_loop_e2(la, q, &win, search, base_values.as_ref()));
    }

    // E3
    if la.flavor != Flavor::Tilde {
        report.push(loop_e3(la, datum, g, &win, &tg));
    }
    Ok(report)
}

fn render_set(s: &BTreeSet<Rat>) -> String {
    let parts: Vec<String> = s.iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn sampled_loop_e2(
    la: &LoopAlgebra,
    q: &QuadraticToralPair,
    win: &[Sigma],
    search: &Search,
    base_values: Option<&BTreeSet<Rat>>,
) -> Check {
    let datum = q.datum();
    let g = q.algebra().gram().expect("quadratic pair");
    let rank_h = datum.pair().rank();
    let mut values = BTreeSet::new();
    let mut block_pairs = 0u64;
    let mut tried = 0u64;
    for (ai, alpha) in datum.roots().iter().enumerate() {
        let Some(mi) = datum.root_index(&alpha.neg()) else {
            continue;
        };
        let (plus, minus) = (datum.space(ai), datum.space(mi));
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed ^ ai as u64);
        for s in win {
            for _ in 0..search.budget.max(1) {
                tried += 1;
                let mut u = Elem::zero();
                let mut v = Elem::zero();
                for (acc, basis) in [(&mut u, &plus), (&mut v, &minus)] {
                    for e in basis.iter() {
                        let c = rng.gen_range(-crate::eaa::SEARCH_COEFF_BOUND..=crate::eaa::SEARCH_COEFF_BOUND);
                        acc.add_scaled(Rat::from(c), e);
                    }
                }
                let xp = LoopElem::tensor(u, s.clone());
                let xm = LoopElem::tensor(v, neg(s));
                let p = la.mul_unchecked(&xp, &xm);
                let pairing = la.form_unchecked(g, &xp, &xm);
                if p.is_zero() || pairing.is_zero() {
                    continue;
                }
                if let Some(c) = toral_coords(la, datum, &p.scale(pairing.recip())) {
                    block_pairs += 1;
                    for beta in datum.roots() {
                        values.insert(beta.eval(&c[..rank_h]));
                    }
                }
            }
        }
    }
    let within = base_values.is_none_or(|b| values.is_subset(b));
    let c = if within {
        Check::new("loop.E2_sampled", Status::Inconclusive)
    } else {
        Check::fail(
            "loop.E2_sampled",
            Witness::new(["observed values"]).sides(render_set(&values), base_values.map_or(String::new(), render_set)),
        )
    };
    c.with_tuples(tried)
        .detail("observed", values.iter().map(|r| Value::from(*r)).collect::<Vec<_>>())
        .detail("block_pairs", block_pairs)
        .detail("partial", true)
        .detail("budget", search.budget)
        .detail("seed", search.seed)
}

fn loop_e3(la: &LoopAlgebra, datum: &RootDatum, g: &Matrix, win: &[Sigma], tg: &Matrix) -> Check {
    let n = la.rank();
    let grading = la.base.grading();
    let zero: Sigma = vec![0; n];
    let mut tuples = 0u64;
    let mut blocks = 0u64;
    let singular = |rows: &[LoopElem], cols: &[LoopElem]| -> bool {
        if rows.len() != cols.len() {
            return true;
        }
        let m = rows.len();
        let mut mat = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                mat.set(i, j, la.form_unchecked(g, &rows[i], &cols[j]));
            }
        }
        mat.determinant().is_zero()
    };
    if tg.determinant().is_zero() {
        return Check::fail(
            "loop.E3",
            Witness::new(["toral part"]).residual("form on the toral part is degenerate"),
        );
    }
    for (ai, alpha) in datum.roots().iter().enumerate() {
        let Some(mi) = datum.root_index(&alpha.neg()) else {
            return Check::fail(
                "loop.E3",
                Witness::new([alpha.to_string()]).residual("no opposite root"),
            );
        };
        for b in grading.degrees() {
            let plus = datum.piece(ai, b);
            if plus.is_empty() {
                continue;
            }
            let minus = datum.piece(mi, grading.neg(b));
            for s in win {
                let mut rows: Vec<LoopElem> = plus.iter().map(|e| LoopElem::tensor(e.clone(), s.clone())).collect();
                let mut cols: Vec<LoopElem> = minus.iter().map(|e| LoopElem::tensor(e.clone(), neg(s))).collect();
                if la.flavor.has_d() && alpha.is_zero() && *s == zero && b == Degree(0) {
                    for i in 0..n {
                        for x in [LoopElem::c(i, n), LoopElem::d(i, n)] {
                            rows.push(x.clone());
                            cols.push(x);
                        }
                    }
                }
                blocks += 1;
                tuples += (rows.len() * cols.len()) as u64;
                if singular(&rows, &cols) {
                    return Check::fail(
                        "loop.E3",
                        Witness::new([format!("root {alpha}+{} degree {b}", render_sigma(s))])
                            .residual("pairing block is singular"),
                    )
                    .with_tuples(tuples);
                }
            }
        }
    }
    Check::pass("loop.E3").with_tuples(tuples).detail("blocks", blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;

    fn hat(name: &str) -> LoopAlgebra {
        LoopAlgebra::new(builtin(name).unwrap().algebra, Cocycle::trivial(1), Flavor::Hat).unwrap()
    }

    #[test]
    fn cocycle_values() {
        let q = Cocycle::from_flat(1, &[Rat::from(2)]).unwrap();
        assert_eq!(q.eval(&[2], &[3]), Rat::from(64));
        assert_eq!(q.eval(&[1], &[-1]), Rat::new(1, 2));
        let bad = Cocycle::from_flat(2, &[Rat::ONE, Rat::from(2), Rat::from(3), Rat::ONE]);
        assert!(matches!(bad, Err(Error::InvalidCocycle(_))));
        assert!(matches!(
            Cocycle::from_flat(1, &[Rat::ZERO]),
            Err(Error::InvalidCocycle(_))
        ));
        assert!(q.check_law(3, 0, 50).is_pass());
    }

    #[test]
    fn central_term_and_derivation() {
        let la = hat("m7");
        let p = la
            .mul(
                &LoopElem::tensor(Elem::basis(1), vec![1]),
                &LoopElem::tensor(Elem::basis(4), vec![-1]),
            )
            .unwrap();
        assert_eq!(la.render(&p), "e1⊗1 + c1");
        let p = la
            .mul(&LoopElem::d(0, 1), &LoopElem::tensor(Elem::basis(1), vec![3]))
            .unwrap();
        assert_eq!(la.render(&p), "3*e2⊗t^3");
        let x = LoopElem::tensor(Elem::basis(1), vec![2]);
        let y = LoopElem::tensor(Elem::basis(4), vec![-2]);
        assert_eq!(la.form(&x, &y).unwrap(), Rat::ONE);
        assert_eq!(
            la.form(&x, &LoopElem::tensor(Elem::basis(4), vec![2])).unwrap(),
            Rat::ZERO
        );
        assert_eq!(la.form(&LoopElem::d(0, 1), &LoopElem::c(0, 1)).unwrap(), Rat::ONE);
    }

    #[test]
    fn flavor_mismatch() {
        let la = LoopAlgebra::new(builtin("m7").unwrap().algebra, Cocycle::trivial(1), Flavor::Plain).unwrap();
        let e = la.mul(&LoopElem::d(0, 1), &LoopElem::c(0, 1));
        assert!(matches!(e, Err(Error::FlavorMismatch(_))));
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(hat("m7").truncated_basis(1).len(), 23);
        let plain = LoopAlgebra::new(builtin("sl2").unwrap().algebra, Cocycle::trivial(1), Flavor::Plain).unwrap();
        assert_eq!(plain.truncated_basis(0).len(), 3);
        let tilde = LoopAlgebra::new(builtin("m7").unwrap().algebra, Cocycle::trivial(2), Flavor::Tilde).unwrap();
        assert_eq!(tilde.truncated_basis(1).len(), 65);
    }
}
