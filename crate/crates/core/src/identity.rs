//! Polynomial identity checking.
//!
//! Multilinear identities are decided exactly by running over every tuple of
//! basis vectors. Identities with a repeated variable are only sampled: each
//! trial substitutes random integer combinations, so a reported failure is
//! exact while a pass is probabilistic.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Elem, StructureAlgebra};
use crate::error::Error;
use crate::exec::map_indexed;
use crate::grading::{parity_sign, Degree, GradingGroup};
use crate::rat::Rat;
use crate::report::{Check, Status, Witness};

/// Tuple counts above this are flagged in the report.
pub const WARN_TUPLES: u64 = 1_000_000;
/// Tuple counts above this are refused.
pub const MAX_TUPLES: u64 = 100_000_000;

pub const DEFAULT_SAMPLE_COUNT: usize = 200;
pub const SAMPLE_COEFF_BOUND: i64 = 2;

/// What the identity engine needs from an algebra: a finite basis of
/// homogeneous vectors and an exact bilinear product.
pub trait AlgebraOps: Sync {
    type Elem: Clone + Send + Sync;

    fn grading(&self) -> GradingGroup;
    fn basis_len(&self) -> usize;
    fn basis_elem(&self, i: usize) -> Self::Elem;
    fn basis_degree(&self, i: usize) -> Degree;
    fn basis_label(&self, i: usize) -> String;
    fn zero(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn add_scaled(&self, acc: &mut Self::Elem, c: Rat, x: &Self::Elem);
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn render(&self, x: &Self::Elem) -> String;

    fn mul_basis_right(&self, a: &Self::Elem, j: usize) -> Self::Elem {
        self.mul(a, &self.basis_elem(j))
    }
}

impl AlgebraOps for StructureAlgebra {
    type Elem = Elem;

    fn grading(&self) -> GradingGroup {
        StructureAlgebra::grading(self)
    }
    fn basis_len(&self) -> usize {
        self.dim()
    }
    fn basis_elem(&self, i: usize) -> Elem {
        Elem::basis(i)
    }
    fn basis_degree(&self, i: usize) -> Degree {
        self.degree(i)
    }
    fn basis_label(&self, i: usize) -> String {
        self.basis_name(i).into()
    }
    fn zero(&self) -> Elem {
        Elem::zero()
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        StructureAlgebra::mul(self, a, b)
    }
    fn add_scaled(&self, acc: &mut Elem, c: Rat, x: &Elem) {
        acc.add_scaled(c, x)
    }
    fn is_zero(&self, x: &Elem) -> bool {
        x.is_zero()
    }
    fn render(&self, x: &Elem) -> String {
        StructureAlgebra::render(self, x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityName {
    BCommutativity,
    Jacobi,
    SuperJacobi,
    Sagle,
    SuperSagle,
    MalcevOriginal,
    BinaryLie,
    SagleExtended,
}

impl IdentityName {
    pub const ALL: [IdentityName; 8] = [
        IdentityName::BCommutativity,
        IdentityName::Jacobi,
        IdentityName::SuperJacobi,
        IdentityName::Sagle,
        IdentityName::SuperSagle,
        IdentityName::MalcevOriginal,
        IdentityName::BinaryLie,
        IdentityName::SagleExtended,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityName::BCommutativity => "b_commutativity",
            IdentityName::Jacobi => "jacobi",
            IdentityName::SuperJacobi => "super_jacobi",
            IdentityName::Sagle => "sagle",
            IdentityName::SuperSagle => "super_sagle",
            IdentityName::MalcevOriginal => "malcev_original",
            IdentityName::BinaryLie => "binary_lie",
            IdentityName::SagleExtended => "sagle_extended",
        }
    }

    /// Identities whose sign factors need homogeneous arguments.
    fn needs_degrees(&self) -> bool {
        matches!(
            self,
            IdentityName::BCommutativity
                | IdentityName::SuperJacobi
                | IdentityName::SuperSagle
                | IdentityName::MalcevOriginal
        )
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        IdentityName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| format!("unknown identity `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentitySpec {
    pub name: IdentityName,
    pub arity: usize,
    pub multilinear: bool,
}

impl IdentitySpec {
    pub fn new(name: IdentityName) -> IdentitySpec {
        use IdentityName::*;
        let (arity, multilinear) = match name {
            BCommutativity => (2, true),
            Jacobi | SuperJacobi => (3, true),
            Sagle | SuperSagle => (4, true),
            MalcevOriginal => (3, false),
            BinaryLie | SagleExtended => (2, false),
        };
        IdentitySpec {
            name,
            arity,
            multilinear,
        }
    }

    /// The default mode for this identity: exhaustive when multilinear.
    pub fn default_mode(&self, seed: u64) -> Mode {
        if self.multilinear {
            Mode::Exhaustive
        } else {
            Mode::Sampled {
                seed,
                count: DEFAULT_SAMPLE_COUNT,
            }
        }
    }
}

impl From<IdentityName> for IdentitySpec {
    fn from(n: IdentityName) -> Self {
        IdentitySpec::new(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

fn sign(e: u64) -> Rat {
    Rat::from(parity_sign(e))
}

/// Runs `spec` over `alg`.
pub fn check_identity<A: AlgebraOps>(alg: &A, spec: &IdentitySpec, mode: Mode) -> Result<Check, Error> {
    match mode {
        Mode::Exhaustive => {
            if !spec.multilinear {
                return Err(Error::NotMultilinear(spec.name.as_str()));
            }
            Ok(exhaustive(alg, spec))
        }
        Mode::Sampled { seed, count } => Ok(sampled(alg, spec, seed, count)),
    }
}

fn check_name(spec: &IdentitySpec) -> String {
    format!("identity.{}", spec.name)
}

struct Failure<E> {
    tuple: Vec<usize>,
    residual: E,
}

fn exhaustive<A: AlgebraOps>(alg: &A, spec: &IdentitySpec) -> Check {
    let n = alg.basis_len();
    let tuples = (n as u64).checked_pow(spec.arity as u32).unwrap_or(u64::MAX);
    let name = check_name(spec);
    if tuples > MAX_TUPLES {
        return Check::new(name, Status::Refused)
            .detail(
                "reason",
                format!("{tuples} basis tuples exceed the cap of {MAX_TUPLES}"),
            )
            .detail("mode", "exhaustive");
    }
    let deg: Vec<u64> = (0..n).map(|i| alg.basis_degree(i).0 as u64).collect();
    let basis: Vec<A::Elem> = (0..n).map(|i| alg.basis_elem(i)).collect();

    let pairs: Vec<A::Elem> = map_indexed(n, |i| (0..n).map(|j| alg.mul(&basis[i], &basis[j])).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect();
    let triples: Vec<A::Elem> = if spec.arity >= 3 {
        map_indexed(n * n, |ij| {
            (0..n).map(|k| alg.mul_basis_right(&pairs[ij], k)).collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect()
    } else {
        Vec::new()
    };
    let p = |i: usize, j: usize| &pairs[i * n + j];
    let t = |i: usize, j: usize, k: usize| &triples[(i * n + j) * n + k];
    let grading = alg.grading();

    let residual = |tu: &[usize]| -> A::Elem {
        let mut r = alg.zero();
        match spec.name {
            IdentityName::BCommutativity => {
                let (x, y) = (tu[0], tu[1]);
                let s = grading.sign_commute(alg.basis_degree(x), alg.basis_degree(y));
                alg.add_scaled(&mut r, Rat::ONE, p(x, y));
                alg.add_scaled(&mut r, Rat::from(-s), p(y, x));
            }
            IdentityName::Jacobi => {
                let (x, y, z) = (tu[0], tu[1], tu[2]);
                alg.add_scaled(&mut r, Rat::ONE, t(x, y, z));
                alg.add_scaled(&mut r, Rat::ONE, t(z, x, y));
                alg.add_scaled(&mut r, Rat::ONE, t(y, z, x));
            }
            IdentityName::SuperJacobi => {
                let (x, y, z) = (tu[0], tu[1], tu[2]);
                alg.add_scaled(&mut r, sign(deg[x] * deg[z]), t(x, y, z));
                alg.add_scaled(&mut r, sign(deg[z] * deg[y]), t(z, x, y));
                alg.add_scaled(&mut r, sign(deg[y] * deg[x]), t(y, z, x));
            }
            IdentityName::Sagle | IdentityName::SuperSagle => {
                let (x, y, z, w) = (tu[0], tu[1], tu[2], tu[3]);
                let sup = spec.name == IdentityName::SuperSagle;
                let (dx, dy, dz, dw) = (deg[x], deg[y], deg[z], deg[w]);
                let s = |e: u64| if sup { sign(e) } else { Rat::ONE };
                alg.add_scaled(&mut r, Rat::ONE, &alg.mul_basis_right(t(x, y, z), w));
                alg.add_scaled(&mut r, s(dx * (dy + dz + dw)), &alg.mul_basis_right(t(y, z, w), x));
                alg.add_scaled(&mut r, s((dx + dy) * (dz + dw)), &alg.mul_basis_right(t(z, w, x), y));
                alg.add_scaled(&mut r, s(dw * (dx + dy + dz)), &alg.mul_basis_right(t(w, x, y), z));
                alg.add_scaled(&mut r, -s(dy * dz), &alg.mul(p(x, z), p(y, w)));
            }
            _ => unreachable!("non-multilinear identity in exhaustive mode"),
        }
        r
    };

    let rest = spec.arity - 1;
    let inner = (n as u64).pow(rest as u32) as usize;
    let per_first: Vec<(u64, Option<Failure<A::Elem>>)> = map_indexed(n, |first| {
        let mut failures = 0u64;
        let mut witness = None;
        let mut tu = vec![0usize; spec.arity];
        tu[0] = first;
        for code in 0..inner {
            let mut c = code;
            for slot in (1..spec.arity).rev() {
                tu[slot] = c % n;
                c /= n;
            }
            let r = residual(&tu);
            if !alg.is_zero(&r) {
                failures += 1;
                if witness.is_none() {
                    witness = Some(Failure {
                        tuple: tu.clone(),
                        residual: r,
                    });
                }
            }
        }
        (failures, witness)
    });

    let failures: u64 = per_first.iter().map(|(f, _)| *f).sum();
    let first = per_first.into_iter().find_map(|(_, w)| w);
    let mut c = match first {
        None => Check::pass(name),
        Some(f) => Check::fail(
            name,
            Witness::new(f.tuple.iter().map(|&i| alg.basis_label(i))).residual(alg.render(&f.residual)),
        ),
    };
    c = c
        .with_tuples(tuples)
        .detail("mode", "exhaustive")
        .detail("arity", spec.arity)
        .detail("failures", failures);
    if tuples > WARN_TUPLES {
        c.set_detail("warning", format!("{tuples} basis tuples exceed {WARN_TUPLES}"));
    }
    c
}

/// Direct evaluation on arbitrary (homogeneous where required) arguments.
/// Returns every nonzero residual with a short label.
pub fn direct_residuals<A: AlgebraOps>(
    alg: &A,
    name: IdentityName,
    xs: &[(A::Elem, u64)],
) -> Vec<(&'static str, A::Elem)> {
    let m = |a: &A::Elem, b: &A::Elem| alg.mul(a, b);
    let size = alg.grading().size() as u64;
    let comb = |terms: &[(Rat, A::Elem)]| {
        let mut r = alg.zero();
        for (c, e) in terms {
            alg.add_scaled(&mut r, *c, e);
        }
        r
    };
    let jac = |x: &A::Elem, y: &A::Elem, z: &A::Elem, dx: u64, dy: u64, dz: u64, signed: bool| {
        let s = |e: u64| if signed { sign(e) } else { Rat::ONE };
        comb(&[
            (s(dx * dz), m(&m(x, y), z)),
            (s(dz * dy), m(&m(z, x), y)),
            (s(dy * dx), m(&m(y, z), x)),
        ])
    };
    let mut out = Vec::new();
    match name {
        IdentityName::BCommutativity => {
            let ((x, dx), (y, dy)) = (&xs[0], &xs[1]);
            let s = alg.grading().sign_commute(Degree(*dx as u32), Degree(*dy as u32));
            out.push(("xy - eps*yx", comb(&[(Rat::ONE, m(x, y)), (Rat::from(-s), m(y, x))])));
        }
        IdentityName::Jacobi => {
            out.push(("J(x,y,z)", jac(&xs[0].0, &xs[1].0, &xs[2].0, 0, 0, 0, false)));
        }
        IdentityName::SuperJacobi => {
            let ((x, dx), (y, dy), (z, dz)) = (&xs[0], &xs[1], &xs[2]);
            out.push(("Jbar(x,y,z)", jac(x, y, z, *dx, *dy, *dz, true)));
        }
        IdentityName::Sagle | IdentityName::SuperSagle => {
            let sup = name == IdentityName::SuperSagle;
            let s = |e: u64| if sup { sign(e) } else { Rat::ONE };
            let ((x, dx), (y, dy), (z, dz), (w, dw)) = (&xs[0], &xs[1], &xs[2], &xs[3]);
            let (dx, dy, dz, dw) = (*dx, *dy, *dz, *dw);
            out.push((
                "sagle",
                comb(&[
                    (Rat::ONE, m(&m(&m(x, y), z), w)),
                    (s(dx * (dy + dz + dw)), m(&m(&m(y, z), w), x)),
                    (s((dx + dy) * (dz + dw)), m(&m(&m(z, w), x), y)),
                    (s(dw * (dx + dy + dz)), m(&m(&m(w, x), y), z)),
                    (-s(dy * dz), m(&m(x, z), &m(y, w))),
                ]),
            ));
        }
        IdentityName::MalcevOriginal => {
            let ((x, dx), (y, dy), (z, dz)) = (&xs[0], &xs[1], &xs[2]);
            let dxz = (dx + dz) % size;
            let lhs = jac(x, y, &m(x, z), *dx, *dy, dxz, true);
            let rhs = m(&jac(x, y, z, *dx, *dy, *dz, true), x);
            out.push(("J(x,y,xz) - J(x,y,z)x", comb(&[(Rat::ONE, lhs), (Rat::MINUS_ONE, rhs)])));
        }
        IdentityName::BinaryLie => {
            let (x, y) = (&xs[0].0, &xs[1].0);
            out.push(("x*x", m(x, x)));
            out.push(("J(xy,x,y)", jac(&m(x, y), x, y, 0, 0, 0, false)));
        }
        IdentityName::SagleExtended => {
            let (x, y) = (&xs[0].0, &xs[1].0);
            out.push(("x*x", m(x, x)));
            out.push(("J(x,y,xy)", jac(x, y, &m(x, y), 0, 0, 0, false)));
        }
    }
    out.retain(|(_, e)| !alg.is_zero(e));
    out
}

fn sampled<A: AlgebraOps>(alg: &A, spec: &IdentitySpec, seed: u64, count: usize) -> Check {
    let n = alg.basis_len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut present: Vec<Degree> = (0..n).map(|i| alg.basis_degree(i)).collect();
    present.sort();
    present.dedup();
    let homogeneous = spec.name.needs_degrees() && present.len() > 1;

    let mut failures = 0u64;
    let mut first: Option<Witness> = None;
    for _ in 0..count {
        let mut xs: Vec<(A::Elem, u64)> = Vec::with_capacity(spec.arity);
        for _ in 0..spec.arity {
            let d = if homogeneous {
                Some(present[rng.gen_range(0..present.len())])
            } else {
                None
            };
            let mut e = alg.zero();
            for i in 0..n {
                if d.is_some_and(|d| alg.basis_degree(i) != d) {
                    continue;
                }
                let c = rng.gen_range(-SAMPLE_COEFF_BOUND..=SAMPLE_COEFF_BOUND);
                if c != 0 {
                    alg.add_scaled(&mut e, Rat::from(c), &alg.basis_elem(i));
                }
            }
            let dv = match d {
                Some(d) => d.0 as u64,
                None => present.first().map_or(0, |d| d.0 as u64),
            };
            xs.push((e, dv));
        }
        let bad = direct_residuals(alg, spec.name, &xs);
        if let Some((label, r)) = bad.first() {
            failures += 1;
            if first.is_none() {
                first = Some(
                    Witness::new(xs.iter().map(|(e, _)| alg.render(e)))
                        .residual(format!("{label} = {}", alg.render(r))),
                );
            }
        }
    }
    let name = check_name(spec);
    let c = match first {
        None => Check::pass(name),
        Some(w) => Check::fail(name, w),
    };
    c.with_tuples(count as u64)
        .detail("mode", "sampled")
        .detail("seed", seed)
        .detail("count", count)
        .detail("coeff_bound", SAMPLE_COEFF_BOUND)
        .detail("arity", spec.arity)
        .detail("failures", failures)
        .detail("probabilistic", true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multilinear_flags() {
        for n in IdentityName::ALL {
            let s = IdentitySpec::new(n);
            let expect = matches!(
                n,
                IdentityName::BCommutativity
                    | IdentityName::Jacobi
                    | IdentityName::SuperJacobi
                    | IdentityName::Sagle
                    | IdentityName::SuperSagle
            );
            assert_eq!(s.multilinear, expect, "{n}");
            assert_eq!(n.as_str().parse::<IdentityName>().unwrap(), n);
        }
    }

    #[test]
    fn exhaustive_refuses_repeated_variable_identity() {
        let a = StructureAlgebra::builder(GradingGroup::Trivial)
            .basis("x", 0)
            .build()
            .unwrap();
        let e = check_identity(&a, &IdentitySpec::new(IdentityName::BinaryLie), Mode::Exhaustive);
        assert_eq!(e, Err(Error::NotMultilinear("binary_lie")));
    }
}
