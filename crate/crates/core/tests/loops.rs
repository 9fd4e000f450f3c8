use std::collections::BTreeMap;

use malcev_forge_core::affine::{loop_root_space, malcev_obstruction, Flavor, LoopAlgebra, LoopElem};
use malcev_forge_core::catalog::{builtin, NAMES};
use malcev_forge_core::identity::direct_residuals;
use malcev_forge_core::linalg::Matrix;
use malcev_forge_core::{
    check_eaa_loop, check_loop_identity, decompose, AlgebraBuilder, AlgebraOps, Cocycle, Elem, GradingGroup,
    IdentityName, IdentitySpec, QuadraticToralPair, Rat, Root, Search, Status, ToralPair,
};

// rows e1..e7, columns e1..e7, entry (coefficient, target index 1..7) or (0, 0)
const M7: [[(i64, usize); 7]; 7] = [
    [(0, 0), (2, 2), (2, 3), (2, 4), (-2, 5), (-2, 6), (-2, 7)],
    [(-2, 2), (0, 0), (2, 7), (-2, 6), (1, 1), (0, 0), (0, 0)],
    [(-2, 3), (-2, 7), (0, 0), (2, 5), (0, 0), (1, 1), (0, 0)],
    [(-2, 4), (2, 6), (-2, 5), (0, 0), (0, 0), (0, 0), (1, 1)],
    [(2, 5), (-1, 1), (0, 0), (0, 0), (0, 0), (-2, 4), (2, 3)],
    [(2, 6), (0, 0), (-1, 1), (0, 0), (2, 4), (0, 0), (-2, 2)],
    [(2, 7), (0, 0), (0, 0), (-1, 1), (-2, 3), (2, 2), (0, 0)],
];

fn gram(i: usize, j: usize) -> i64 {
    match (i.min(j), i.max(j)) {
        (0, 0) => 2,
        (1, 4) | (2, 5) | (3, 6) => 1,
        _ => 0,
    }
}

/// Element of `L(M7) ⊕ F c` with `n = 1`, trivial cocycle: terms keyed by
/// (basis index, exponent), plus the central coefficient.
#[derive(Clone, Debug, Default, PartialEq)]
struct T {
    terms: BTreeMap<(usize, i64), i64>,
    c: i64,
}

fn t(i: usize, s: i64) -> T {
    T {
        terms: [((i, s), 1)].into(),
        c: 0,
    }
}

fn tmul(a: &T, b: &T) -> T {
    let mut out = T::default();
    for (&(i, s), &x) in &a.terms {
        for (&(j, u), &y) in &b.terms {
            let (k, m) = M7[i][j];
            if k != 0 {
                *out.terms.entry((m - 1, s + u)).or_default() += k * x * y;
            }
            if s + u == 0 {
                out.c += gram(i, j) * x * y * s;
            }
        }
    }
    out.terms.retain(|_, v| *v != 0);
    out
}

fn tcomb(parts: &[(i64, T)]) -> T {
    let mut out = T::default();
    for (k, p) in parts {
        for (key, v) in &p.terms {
            *out.terms.entry(*key).or_default() += k * v;
        }
        out.c += k * p.c;
    }
    out.terms.retain(|_, v| *v != 0);
    out
}

fn tsagle(x: &T, y: &T, z: &T, w: &T) -> T {
    let m = tmul;
    tcomb(&[
        (1, m(&m(&m(x, y), z), w)),
        (1, m(&m(&m(y, z), w), x)),
        (1, m(&m(&m(z, w), x), y)),
        (1, m(&m(&m(w, x), y), z)),
        (-1, m(&m(x, z), &m(y, w))),
    ])
}

fn tjac(x: &T, y: &T, z: &T) -> T {
    let m = tmul;
    tcomb(&[(1, m(&m(x, y), z)), (1, m(&m(z, x), y)), (1, m(&m(y, z), x))])
}

fn loop_of(name: &str, flavor: Flavor, q: i64) -> LoopAlgebra {
    let b = builtin(name).unwrap();
    LoopAlgebra::new(b.algebra, Cocycle::from_flat(1, &[Rat::from(q)]).unwrap(), flavor).unwrap()
}

fn qpair(name: &str) -> QuadraticToralPair {
    let b = builtin(name).unwrap();
    QuadraticToralPair::new(decompose(&ToralPair::new(b.algebra, b.toral).unwrap()).unwrap()).unwrap()
}

fn lt(i: usize, s: i64) -> LoopElem {
    LoopElem::tensor(Elem::basis(i), vec![s])
}

#[test]
fn oracle_agrees_with_loop_products() {
    let la = loop_of("m7", Flavor::Tilde, 1);
    for i in 0..7 {
        for j in 0..7 {
            for (s, u) in [(1, -1), (2, 0), (-1, -1), (0, 0)] {
                let p = la.mul(&lt(i, s), &lt(j, u)).unwrap();
                let o = tmul(&t(i, s), &t(j, u));
                let mut want = LoopElem::zero(1);
                for (&(k, e), &v) in &o.terms {
                    want.add_scaled(Rat::from(v), &lt(k, e));
                }
                want.add_scaled(Rat::from(o.c), &LoopElem::c(0, 1));
                assert_eq!(p, want, "e{} t^{s} * e{} t^{u}", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn central_extension_of_m7_is_not_malcev() {
    // oracle: only the central part survives
    let r = tsagle(&t(0, -1), &t(1, 0), &t(2, 0), &t(3, 1));
    assert!(r.terms.is_empty());
    assert_eq!(r.c, -12);

    let la = loop_of("m7", Flavor::Tilde, 1);
    let c = check_loop_identity(&la, &IdentitySpec::new(IdentityName::Sagle), 1).unwrap();
    assert_eq!(c.status, Status::Fail);
    assert_eq!(c.tuples, 22u64.pow(4));
    let w = c.witness.unwrap();
    assert_eq!(w.elements, ["e1⊗t^-1", "e2⊗1", "e3⊗1", "e4⊗t^1"]);
    assert_eq!(w.residual.as_deref(), Some("-12*c1"));

    // the original identity holds on G-homogeneous arguments ...
    let tr = la.truncate(1);
    for x in 0..tr.basis_len() {
        for y in 0..tr.basis_len() {
            for z in 0..tr.basis_len() {
                let xs: Vec<(LoopElem, u64)> = [x, y, z].iter().map(|&i| (tr.basis_elem(i), 0)).collect();
                assert!(direct_residuals(&tr, IdentityName::MalcevOriginal, &xs).is_empty());
            }
        }
    }
    // ... and fails on a sum of two of them
    let x = t(0, -1);
    let xx = tcomb(&[(1, t(0, -1)), (1, t(3, 1))]);
    let (y, z) = (t(1, 0), t(2, 0));
    let oracle = tcomb(&[(1, tjac(&xx, &y, &tmul(&xx, &z))), (-1, tmul(&tjac(&xx, &y, &z), &xx))]);
    assert_ne!(oracle, T::default());
    assert_eq!(
        tcomb(&[(1, tjac(&x, &y, &tmul(&x, &z))), (-1, tmul(&tjac(&x, &y, &z), &x))]),
        T::default()
    );
    let mut big = lt(0, -1);
    big.add_scaled(Rat::ONE, &lt(3, 1));
    let res = direct_residuals(
        &tr,
        IdentityName::MalcevOriginal,
        &[(big.clone(), 0), (lt(1, 0), 0), (lt(2, 0), 0)],
    );
    assert_eq!(res.len(), 1);
    assert_eq!(res[0].1.v_part(), [Rat::from(oracle.c)]);
}

#[test]
fn derivation_extension_needs_lie() {
    let la = loop_of("m7", Flavor::Hat, 1);
    let c = check_loop_identity(&la, &IdentitySpec::new(IdentityName::Sagle), 1).unwrap();
    assert_eq!(c.status, Status::Fail);
    let w = c.witness.unwrap();
    assert!(w.elements.iter().any(|e| e == "d1"), "{:?}", w.elements);
    assert_eq!(w.elements.iter().filter(|e| e.contains('⊗')).count(), 3);

    let la = loop_of("sl2", Flavor::Hat, 1);
    assert!(check_loop_identity(&la, &IdentitySpec::new(IdentityName::Jacobi), 1)
        .unwrap()
        .is_pass());
    let la = loop_of("osp12", Flavor::Hat, 2);
    assert!(
        check_loop_identity(&la, &IdentitySpec::new(IdentityName::SuperJacobi), 1)
            .unwrap()
            .is_pass()
    );
}

#[test]
fn plain_loops_inherit_the_identity() {
    for q in [1, 2] {
        let la = loop_of("m7", Flavor::Plain, q);
        let c = check_loop_identity(&la, &IdentitySpec::new(IdentityName::Sagle), 1).unwrap();
        assert!(c.is_pass(), "q = {q}");
    }
}

#[test]
fn predictions_match_truncated_verdicts() {
    for name in NAMES {
        let alg = builtin(name).unwrap().algebra;
        let ob = malcev_obstruction(&alg).unwrap();
        let id = if alg.grading().size() > 1 {
            IdentityName::SuperSagle
        } else {
            IdentityName::Sagle
        };
        for q in [1, 2] {
            for f in [Flavor::Plain, Flavor::Tilde, Flavor::Hat] {
                for k in [0, 1] {
                    let la = loop_of(name, f, q);
                    let got = check_loop_identity(&la, &IdentitySpec::new(id), k).unwrap().is_pass();
                    assert_eq!(got, ob.predicts(f, k), "{name} {f} q={q} k={k}");
                }
            }
        }
    }
}

#[test]
fn obstruction_conditions_on_m7() {
    let ob = malcev_obstruction(&builtin("m7").unwrap().algebra).unwrap();
    let r = &ob.report;
    assert!(ob.base_malcev);
    assert!(ob.even_pairing);
    assert!(!ob.derivation);
    assert!(!ob.lattice);
    let w = r
        .get("obstruction.derivation.jbar_even_x")
        .unwrap()
        .witness
        .as_ref()
        .unwrap();
    assert_eq!(w.elements, ["e1", "e2", "e3"]);
    assert_eq!(r.get("obstruction.derivation.jbar_xyx").unwrap().status, Status::Pass);

    let ob = malcev_obstruction(&builtin("sl2").unwrap().algebra).unwrap();
    assert!(ob.derivation && ob.even_pairing && ob.lattice);
}

#[test]
fn root_spaces_of_hat_m7() {
    let la = loop_of("m7", Flavor::Hat, 1);
    let q = qpair("m7");
    let alpha = Root(vec![Rat::from(2)]);
    let v = loop_root_space(&la, q.datum(), &alpha, &[2]).unwrap();
    let names: Vec<String> = v.iter().map(|x| la.render(x)).collect();
    assert_eq!(names, ["e2⊗t^2", "e3⊗t^2", "e4⊗t^2"]);
    let v = loop_root_space(&la, q.datum(), &Root(vec![Rat::ZERO]), &[0]).unwrap();
    let names: Vec<String> = v.iter().map(|x| la.render(x)).collect();
    assert_eq!(names, ["e1⊗1", "c1", "d1"]);
    assert!(loop_root_space(&la, q.datum(), &Root(vec![Rat::from(1)]), &[0]).is_err());
}

#[test]
fn extended_affine_instances() {
    let q = qpair("m7");
    let r = check_eaa_loop(&loop_of("m7", Flavor::Hat, 1), &q, 1, &Search::default()).unwrap();
    assert!(r.all_pass(), "{r:#?}");
    let e1 = r.get("loop.E1").unwrap();
    assert_eq!(e1.details["witness_count"], 8usize.into());
    let e2 = r.get("loop.E2prime").unwrap();
    assert_eq!(
        e2.details["values"],
        vec![Rat::from(-2), Rat::ZERO, Rat::from(2)].into()
    );

    let r = check_eaa_loop(&loop_of("sl2", Flavor::Hat, 2), &qpair("sl2"), 1, &Search::default()).unwrap();
    assert!(r.all_pass(), "{r:#?}");

    let r = check_eaa_loop(&loop_of("m7", Flavor::Tilde, 1), &q, 1, &Search::default()).unwrap();
    assert_eq!(r.get("loop.E1").unwrap().status, Status::Pass);
    assert_eq!(r.get("loop.E2_sampled").unwrap().status, Status::Inconclusive);
}

#[test]
fn hat_refuses_when_zero_space_exceeds_h() {
    let mut g = Matrix::zeros(4, 4);
    for (i, j, v) in [(0, 0, 2), (1, 2, 1), (2, 1, 1), (3, 3, 1)] {
        g.set(i, j, Rat::from(v));
    }
    let alg = AlgebraBuilder::new(GradingGroup::Trivial)
        .name("sl2+z")
        .bcommutative(true)
        .basis("h", 0)
        .basis("e", 0)
        .basis("f", 0)
        .basis("z", 0)
        .product_int(0, 1, &[(1, 2)])
        .product_int(0, 2, &[(2, -2)])
        .product_int(1, 2, &[(0, 1)])
        .gram(g)
        .build()
        .unwrap();
    let pair = ToralPair::new(alg.clone(), vec![Elem::basis(0)]).unwrap();
    let q = QuadraticToralPair::new(decompose(&pair).unwrap()).unwrap();
    let la = LoopAlgebra::new(alg, Cocycle::trivial(1), Flavor::Hat).unwrap();
    let r = check_eaa_loop(&la, &q, 1, &Search::default()).unwrap();
    let c = r.get("loop.hypothesis.a00_is_h").unwrap();
    assert_eq!(c.status, Status::Refused);
    assert_eq!(r.checks.last().unwrap().name, "loop.hypothesis.a00_is_h");

    let other = loop_of("sl2", Flavor::Hat, 1);
    assert!(check_eaa_loop(&other, &qpair("m7"), 1, &Search::default()).is_err());
}
