//! Axioms of extended and extended affine pairs: test-pair search, root
//! pairings, nondegeneracy, non-isotropic roots and the core.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{check_form, form_value, AlgebraBuilder, Elem, StructureAlgebra};
use crate::error::Error;
use crate::grading::Degree;
use crate::linalg::{coords_in, intersect, Matrix, Subspace, Vector};
use crate::rat::Rat;
use crate::report::{Check, CheckReport, Status, Value, Witness};
use crate::toral::{decompose, verify_toral, Root, RootDatum, ToralPair};

pub const DEFAULT_BUDGET: usize = 500;
pub const SEARCH_COEFF_BOUND: i64 = 3;

/// Parameters of the test-pair search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Search {
    /// Random combinations tried after the basis scans.
    pub budget: usize,
    pub seed: u64,
    /// Whether the form may guide the first scan.
    pub use_form: bool,
}

impl Default for Search {
    fn default() -> Search {
        Search {
            budget: DEFAULT_BUDGET,
            seed: 0,
            use_form: true,
        }
    }
}

/// Which stage of the search produced a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchPath {
    Form,
    Basis,
    Random,
}

impl SearchPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchPath::Form => "form",
            SearchPath::Basis => "basis",
            SearchPath::Random => "random",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestPairWitness {
    pub root: Root,
    pub degree: Degree,
    pub x_plus: Elem,
    pub x_minus: Elem,
    pub product: Elem,
    /// `(x_plus, x_minus)`; zero when no form is available.
    pub pairing: Rat,
    pub block: bool,
    pub path: SearchPath,
}

impl TestPairWitness {
    pub fn describe(&self, alg: &StructureAlgebra) -> String {
        format!(
            "root {} degree {}: ({}, {}) -> {}",
            self.root,
            self.degree,
            alg.render(&self.x_plus),
            alg.render(&self.x_minus),
            alg.render(&self.product)
        )
    }
}

/// A toral pair whose algebra carries a `B`-symmetric, `B`-graded form.
#[derive(Clone, Debug)]
pub struct QuadraticToralPair {
    datum: RootDatum,
    gram: Matrix,
    form_report: CheckReport,
    h_gram: Matrix,
}

impl QuadraticToralPair {
    pub fn new(datum: RootDatum) -> Result<QuadraticToralPair, Error> {
        let alg = datum.algebra();
        let gram = alg.gram().ok_or(Error::MissingForm)?.clone();
        let form_report = check_form(alg)?;
        for name in ["form.b_symmetric", "form.b_graded"] {
            if form_report.get(name).is_some_and(|c| !c.is_pass()) {
                return Err(Error::FormNotAdmissible(format!("{name} fails")));
            }
        }
        let h = datum.pair().h_basis();
        let r = h.len();
        let mut h_gram = Matrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                h_gram.set(i, j, form_value(&gram, &h[i], &h[j]));
            }
        }
        Ok(QuadraticToralPair {
            datum,
            gram,
            form_report,
            h_gram,
        })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        self.datum.algebra()
    }

    pub fn form_report(&self) -> &CheckReport {
        &self.form_report
    }

    pub fn form(&self, a: &Elem, b: &Elem) -> Rat {
        form_value(&self.gram, a, b)
    }

    pub fn nondegenerate_on_h(&self) -> bool {
        !self.h_gram.determinant().is_zero()
    }

    /// `t_α`: the element of `H` with `(t_α, h) = α(h)` for all `h ∈ H`.
    pub fn nu_inverse(&self, alpha: &Root) -> Result<Elem, Error> {
        let c = self
            .h_gram
            .solve(&alpha.0)
            .filter(|_| self.nondegenerate_on_h())
            .ok_or(Error::DegenerateOnH)?;
        Ok(self.datum.pair().h_element(&c))
    }

    pub fn root_pairing(&self, alpha: &Root, beta: &Root) -> Result<Rat, Error> {
        let ta = self.nu_inverse(alpha)?;
        let tb = self.nu_inverse(beta)?;
        Ok(self.form(&ta, &tb))
    }
}

fn random_combo(rng: &mut ChaCha8Rng, basis: &[Elem]) -> Elem {
    let mut e = Elem::zero();
    for v in basis {
        let c = rng.gen_range(-SEARCH_COEFF_BOUND..=SEARCH_COEFF_BOUND);
        if c != 0 {
            e.add_scaled(Rat::from(c), v);
        }
    }
    e
}

/// Searches `A^α_b × A^{-α}_{-b}` for a test-pair. `gram` enables the
/// form-guided scan; every candidate is verified by direct multiplication
/// and an exact membership test in `H`. `Ok(None)` means the budget ran out.
pub fn find_test_pair(
    datum: &RootDatum,
    gram: Option<&Matrix>,
    alpha: &Root,
    b: Degree,
    search: &Search,
) -> Result<Option<TestPairWitness>, Error> {
    if alpha.is_zero() {
        return Err(Error::ZeroRoot);
    }
    let alg = datum.algebra();
    let grading = alg.grading();
    grading.check(b)?;
    let k = datum
        .root_index(alpha)
        .ok_or_else(|| Error::RootNotInSupport(alpha.to_string()))?;
    let plus = datum.piece(k, b);
    if plus.is_empty() {
        return Err(Error::RootNotInSupport(alpha.to_string()));
    }
    let minus = datum.piece_of(&alpha.neg(), grading.neg(b));
    if minus.is_empty() {
        return Ok(None);
    }
    let pair = datum.pair();
    let make = |xp: &Elem, xm: &Elem, path: SearchPath| -> Option<TestPairWitness> {
        let product = alg.mul(xp, xm);
        if product.is_zero() || pair.h_coords(&product).is_none() {
            return None;
        }
        let pairing = gram.map_or(Rat::ZERO, |g| form_value(g, xp, xm));
        Some(TestPairWitness {
            root: alpha.clone(),
            degree: b,
            x_plus: xp.clone(),
            x_minus: xm.clone(),
            product,
            pairing,
            block: pairing.is_one(),
            path,
        })
    };

    let h_nondeg = gram.is_some_and(|g| {
        let h = pair.h_basis();
        let r = h.len();
        let mut m = Matrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                m.set(i, j, form_value(g, &h[i], &h[j]));
            }
        }
        !m.determinant().is_zero()
    });
    if search.use_form && h_nondeg {
        let g = gram.expect("checked above");
        for u in plus {
            for v in minus {
                if !form_value(g, u, v).is_zero() {
                    if let Some(w) = make(u, v, SearchPath::Form) {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    for u in plus {
        for v in minus {
            if let Some(w) = make(u, v, SearchPath::Basis) {
                return Ok(Some(w));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed ^ k as u64);
    for _ in 0..search.budget {
        let u = random_combo(&mut rng, plus);
        let v = random_combo(&mut rng, minus);
        if let Some(w) = make(&u, &v, SearchPath::Random) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Checks `x_α x_{-α} = (x_α, x_{-α}) t_α` for one witness.
pub fn check_block_identity(q: &QuadraticToralPair, w: &TestPairWitness) -> Result<Check, Error> {
    let alg = q.algebra();
    let t = q.nu_inverse(&w.root)?;
    let pairing = q.form(&w.x_plus, &w.x_minus);
    let lhs = alg.mul(&w.x_plus, &w.x_minus);
    let rhs = t.scale(pairing);
    let elems = [alg.render(&w.x_plus), alg.render(&w.x_minus)];
    let c = if lhs == rhs {
        Check::pass("eaa.block_identity")
    } else {
        Check::fail(
            "eaa.block_identity",
            Witness::new(elems.clone()).sides(alg.render(&lhs), alg.render(&rhs)),
        )
    };
    Ok(c.with_tuples(1)
        .detail("root", w.root.to_string())
        .detail("pairing", pairing)
        .detail("t_alpha", alg.render(&t)))
}

/// Outcome of E1 together with the witnesses it found.
#[derive(Clone, Debug)]
pub struct E1Result {
    pub check: Check,
    pub witnesses: Vec<TestPairWitness>,
}

/// E1 over every degree `b` and every nonzero root of `R_b`.
pub fn check_e1(datum: &RootDatum, gram: Option<&Matrix>, search: &Search) -> E1Result {
    let alg = datum.algebra();
    let grading = alg.grading();
    let mut witnesses = Vec::new();
    let mut inconclusive: Vec<String> = Vec::new();
    let mut missing: Option<(Root, Degree)> = None;
    let mut tuples = 0u64;
    for b in grading.degrees() {
        for alpha in datum.root_support(b).expect("degree from the grading group") {
            if alpha.is_zero() {
                continue;
            }
            tuples += 1;
            if datum.piece_of(&alpha.neg(), grading.neg(b)).is_empty() {
                missing.get_or_insert((alpha.clone(), b));
                continue;
            }
            match find_test_pair(datum, gram, &alpha, b, search).expect("root taken from the support") {
                Some(w) => witnesses.push(w),
                None => inconclusive.push(format!("root {alpha} degree {b}")),
            }
        }
    }
    let described: Vec<String> = witnesses.iter().map(|w| w.describe(alg)).collect();
    let mut check = if let Some((alpha, b)) = missing {
        Check::fail(
            "eaa.E1",
            Witness::new([format!("root {alpha} degree {b}")]).residual(format!(
                "missing opposite root: {} has no degree {} part",
                alpha.neg(),
                grading.neg(b)
            )),
        )
    } else if !inconclusive.is_empty() {
        Check::new("eaa.E1", Status::Inconclusive).detail("unresolved", inconclusive)
    } else {
        Check::pass("eaa.E1")
    };
    check = check
        .with_tuples(tuples)
        .detail("witnesses", described)
        .detail("budget", search.budget)
        .detail("seed", search.seed);
    E1Result { check, witnesses }
}

fn rat_list(set: &BTreeSet<Rat>) -> Vec<Value> {
    set.iter().map(|r| Value::from(*r)).collect()
}

/// The value set `{(α, β) : α, β ∈ R}`.
pub fn e2prime_values(q: &QuadraticToralPair) -> Result<BTreeSet<Rat>, Error> {
    let roots = q.datum.roots();
    let ts: Vec<Elem> = roots.iter().map(|r| q.nu_inverse(r)).collect::<Result<_, _>>()?;
    let mut set = BTreeSet::new();
    for a in &ts {
        for b in &ts {
            set.insert(q.form(a, b));
        }
    }
    Ok(set)
}

pub fn check_e2prime(q: &QuadraticToralPair) -> Result<Check, Error> {
    let set = e2prime_values(q)?;
    let n = q.datum.roots().len();
    Ok(Check::pass("eaa.E2prime")
        .with_tuples((n * n) as u64)
        .detail("values", rat_list(&set))
        .detail("finite", true))
}

/// Sampled block test-pairs and the values `β(x_α x_{-α})` they produce.
/// The axiom ranges over infinitely many pairs, so the verdict is always
/// partial.
pub fn check_e2_sampled(q: &QuadraticToralPair, search: &Search) -> Check {
    let datum = &q.datum;
    let alg = datum.algebra();
    let pair = datum.pair();
    let roots = datum.roots();
    let mut values: BTreeSet<Rat> = BTreeSet::new();
    let mut block_pairs = 0u64;
    let mut tried = 0u64;
    let mut record = |xp: &Elem, xm: &Elem, values: &mut BTreeSet<Rat>| {
        let p = alg.mul(xp, xm);
        if p.is_zero() {
            return;
        }
        let s = q.form(xp, xm);
        if s.is_zero() {
            return;
        }
        if let Some(c) = pair.h_coords(&p.scale(s.recip())) {
            block_pairs += 1;
            for beta in roots {
                values.insert(beta.eval(&c));
            }
        }
    };
    for (k, alpha) in roots.iter().enumerate() {
        let plus = datum.space(k);
        let minus = match datum.root_index(&alpha.neg()) {
            Some(m) => datum.space(m),
            None => continue,
        };
        for u in &plus {
            for v in &minus {
                tried += 1;
                record(u, v, &mut values);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed ^ k as u64);
        for _ in 0..search.budget {
            tried += 1;
            let u = random_combo(&mut rng, &plus);
            let v = random_combo(&mut rng, &minus);
            record(&u, &v, &mut values);
        }
    }
    Check::new("eaa.E2_sampled", Status::Inconclusive)
        .with_tuples(tried)
        .detail("observed", rat_list(&values))
        .detail("block_pairs", block_pairs)
        .detail("partial", true)
        .detail("budget", search.budget)
        .detail("seed", search.seed)
}

/// Nondegeneracy of the form on `A` and on `H`.
pub fn check_e3(q: &QuadraticToralPair) -> Check {
    let alg = q.algebra();
    let n = alg.dim();
    let rank = q.gram.rank();
    let h_rank = q.h_gram.rank();
    let r = q.h_gram.rows();
    let mut c = if rank == n && h_rank == r {
        Check::pass("eaa.E3")
    } else if rank < n {
        let k = Elem::from_dense(&q.gram.kernel()[0]);
        Check::fail(
            "eaa.E3",
            Witness::new([alg.render(&k)]).residual("kernel vector of the form on A"),
        )
    } else {
        let k = q.datum.pair().h_element(&q.h_gram.kernel()[0]);
        Check::fail(
            "eaa.E3",
            Witness::new([alg.render(&k)]).residual("kernel vector of the form on H"),
        )
    };
    c = c
        .with_tuples((n * n) as u64)
        .detail("rank", rank)
        .detail("dim", n)
        .detail("h_rank", h_rank)
        .detail("h_dim", r);
    c
}

/// `α ∈ R_b ∖ {0}` implies `-α ∈ R_{-b}`.
pub fn check_root_symmetry(datum: &RootDatum) -> Check {
    let g = datum.algebra().grading();
    let mut tuples = 0u64;
    for b in g.degrees() {
        for alpha in datum.root_support(b).expect("degree from the grading group") {
            tuples += 1;
            if !alpha.is_zero() && datum.piece_of(&alpha.neg(), g.neg(b)).is_empty() {
                return Check::fail(
                    "eaa.root_symmetry",
                    Witness::new([format!("root {alpha} degree {b}")]).residual(format!(
                        "{} missing in degree {}",
                        alpha.neg(),
                        g.neg(b)
                    )),
                )
                .with_tuples(tuples);
            }
        }
    }
    Check::pass("eaa.root_symmetry").with_tuples(tuples)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootClassification {
    pub nonisotropic: Vec<Root>,
    pub isotropic: Vec<Root>,
    /// False when the degenerate, search-based criterion was used.
    pub exact: bool,
}

/// Splits `R` into non-isotropic and isotropic roots.
pub fn classify_roots(q: &QuadraticToralPair, search: &Search) -> RootClassification {
    let datum = &q.datum;
    let roots = datum.roots();
    let (nonisotropic, exact): (Vec<Root>, bool) = if q.nondegenerate_on_h() {
        let non = roots
            .iter()
            .filter(|a| {
                roots
                    .iter()
                    .any(|b| !q.root_pairing(a, b).expect("nondegenerate on H").is_zero())
            })
            .cloned()
            .collect();
        (non, true)
    } else {
        let e1 = check_e1(datum, Some(&q.gram), search);
        let products: Vec<Vector> = e1
            .witnesses
            .iter()
            .filter_map(|w| datum.pair().h_coords(&w.product))
            .collect();
        let non = roots
            .iter()
            .filter(|a| products.iter().any(|c| !a.eval(c).is_zero()))
            .cloned()
            .collect();
        (non, false)
    };
    let isotropic = roots.iter().filter(|r| !nonisotropic.contains(r)).cloned().collect();
    RootClassification {
        nonisotropic,
        isotropic,
        exact,
    }
}

#[derive(Clone, Debug)]
pub struct CoreResult {
    pub classification: RootClassification,
    pub core_basis: Vec<Elem>,
    pub hc_basis: Vec<Elem>,
}

/// The subalgebra generated by the non-isotropic root spaces, and its
/// intersection with `H`.
pub fn compute_core(q: &QuadraticToralPair, search: &Search) -> CoreResult {
    let datum = &q.datum;
    let alg = datum.algebra();
    let n = alg.dim();
    let classification = classify_roots(q, search);
    let mut span = Subspace::new(n);
    let mut gens: Vec<Elem> = Vec::new();
    for r in &classification.nonisotropic {
        let k = datum.root_index(r).expect("classified roots come from R");
        for b in alg.grading().degrees() {
            for v in datum.piece(k, b) {
                if span.insert(&v.to_dense(n)) {
                    gens.push(v.clone());
                }
            }
        }
    }
    let mut k = 0;
    while k < gens.len() {
        let x = gens[k].clone();
        for j in 0..=k {
            for p in [alg.mul(&x, &gens[j]), alg.mul(&gens[j], &x)] {
                if !p.is_zero() && span.insert(&p.to_dense(n)) {
                    gens.push(p);
                }
            }
        }
        k += 1;
    }
    let h: Vec<Vector> = datum.pair().h_basis().iter().map(|e| e.to_dense(n)).collect();
    let g: Vec<Vector> = gens.iter().map(|e| e.to_dense(n)).collect();
    let hc_basis = intersect(n, &h, &g).iter().map(|v| Elem::from_dense(v)).collect();
    CoreResult {
        classification,
        core_basis: gens,
        hc_basis,
    }
}

fn prefixed(mut c: Check, prefix: &str) -> Check {
    c.name = format!("{prefix}{}", c.name);
    c
}

/// Restricts `alg` to the subalgebra spanned by `basis`, which must be
/// closed and consist of homogeneous elements.
pub fn restrict(alg: &StructureAlgebra, basis: &[Elem], name: &str) -> Result<StructureAlgebra, Error> {
    let n = alg.dim();
    let cols: Vec<Vector> = basis.iter().map(|e| e.to_dense(n)).collect();
    let label = |i: usize, e: &Elem| -> String {
        match e.terms() {
            [(k, c)] if c.is_one() => alg.basis_name(*k).to_string(),
            _ => format!("c{}", i + 1),
        }
    };
    let mut b = AlgebraBuilder::new(alg.grading())
        .name(name)
        .description(&format!("subalgebra of {}", alg.name()));
    for (i, e) in basis.iter().enumerate() {
        let d = alg.degree_of(e).ok_or(Error::NonHomogeneous)?;
        b = b.basis(&label(i, e), d.0);
    }
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let p = alg.mul(x, y);
            if p.is_zero() {
                continue;
            }
            let c = coords_in(&cols, &p.to_dense(n))
                .ok_or_else(|| Error::Mismatch(format!("span is not closed: {}", alg.render(&p))))?;
            b = b.product(i, j, Elem::from_dense(&c));
        }
    }
    if let Some(g) = alg.gram() {
        let m = basis.len();
        let mut sub = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                sub.set(i, j, form_value(g, &basis[i], &basis[j]));
            }
        }
        b = b.gram(sub);
    }
    b.build()
}

/// Re-runs the toral and extended-pair checks on the core pair.
pub fn verify_core_pair(q: &QuadraticToralPair, search: &Search) -> Result<(CoreResult, CheckReport), Error> {
    let alg = q.algebra();
    let core = compute_core(q, search);
    let n = alg.dim();
    let mut report = CheckReport::new();
    let span = Subspace::spanned_by(n, &core.core_basis.iter().map(|e| e.to_dense(n)).collect::<Vec<_>>());
    let mut closed = Check::pass("core.closure");
    let mut tuples = 0u64;
    'cl: for x in &core.core_basis {
        for y in &core.core_basis {
            tuples += 1;
            let p = alg.mul(x, y);
            if !span.contains(&p.to_dense(n)) {
                closed = Check::fail(
                    "core.closure",
                    Witness::new([alg.render(x), alg.render(y)]).residual(alg.render(&p)),
                );
                break 'cl;
            }
        }
    }
    let roots: Vec<String> = core.classification.nonisotropic.iter().map(|r| r.to_string()).collect();
    let core_txt: Vec<String> = core.core_basis.iter().map(|e| alg.render(e)).collect();
    let hc_txt: Vec<String> = core.hc_basis.iter().map(|e| alg.render(e)).collect();
    report.push(
        closed
            .with_tuples(tuples)
            .detail("nonisotropic", roots)
            .detail("classification_exact", core.classification.exact)
            .detail("dim_core", core.core_basis.len())
            .detail("core_basis", core_txt)
            .detail("h_c", hc_txt),
    );
    if core.core_basis.is_empty() {
        report.push(Check::pass("core.vacuous").detail("reason", "no non-isotropic roots"));
        return Ok((core, report));
    }
    if core.hc_basis.is_empty() {
        report.push(Check::fail(
            "core.h_c",
            Witness::new(["H_c"]).residual("core meets H trivially"),
        ));
        return Ok((core, report));
    }
    let sub = restrict(alg, &core.core_basis, &format!("{}-core", alg.name()))?;
    let cols: Vec<Vector> = core.core_basis.iter().map(|e| e.to_dense(n)).collect();
    let hc: Vec<Elem> = core
        .hc_basis
        .iter()
        .map(|h| Elem::from_dense(&coords_in(&cols, &h.to_dense(n)).expect("H_c lies in the core")))
        .collect();
    let datum = decompose(&ToralPair::new(sub, hc)?)?;
    for c in verify_toral(&datum).checks {
        report.push(prefixed(c, "core."));
    }
    let cq = QuadraticToralPair::new(datum)?;
    let e1 = check_e1(cq.datum(), Some(&cq.gram), search);
    report.push(prefixed(e1.check, "core."));
    if cq.nondegenerate_on_h() {
        report.push(prefixed(check_e2prime(&cq)?, "core."));
    } else {
        report.push(prefixed(check_e2_sampled(&cq, search), "core."));
    }
    Ok((core, report))
}

/// E1, block identities, E2′ (or sampled E2), E3 and root symmetry.
pub fn check_eaa(q: &QuadraticToralPair, search: &Search) -> CheckReport {
    let mut report = CheckReport::new();
    let e1 = check_e1(q.datum(), Some(&q.gram), search);
    report.push(e1.check.clone());
    if q.nondegenerate_on_h() {
        let mut first_fail = None;
        let mut n = 0u64;
        for w in &e1.witnesses {
            n += 1;
            let c = check_block_identity(q, w).expect("nondegenerate on H");
            if !c.is_pass() && first_fail.is_none() {
                first_fail = Some(c);
            }
        }
        report.push(match first_fail {
            Some(c) => c.with_tuples(n),
            None => Check::pass("eaa.block_identity").with_tuples(n),
        });
        report.push(check_e2prime(q).expect("nondegenerate on H"));
    } else {
        report.push(
            Check::new("eaa.block_identity", Status::Refused)
                .detail("reason", "the form restricted to H is degenerate"),
        );
        report.push(check_e2_sampled(q, search));
    }
    report.push(check_e3(q));
    report.push(check_root_symmetry(q.datum()));
    report
}
