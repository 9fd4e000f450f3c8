use malcev_forge_core::catalog::builtin;
use malcev_forge_core::eaa::{
    check_block_identity, check_eaa, classify_roots, compute_core, e2prime_values, find_test_pair, verify_core_pair,
};
use malcev_forge_core::linalg::Matrix;
use malcev_forge_core::{
    decompose, AlgebraBuilder, Degree, Elem, GradingGroup, QuadraticToralPair, Rat, Root, Search, Status, ToralPair,
};

fn qpair(name: &str) -> QuadraticToralPair {
    let b = builtin(name).unwrap();
    QuadraticToralPair::new(decompose(&ToralPair::new(b.algebra, b.toral).unwrap()).unwrap()).unwrap()
}

fn values(q: &QuadraticToralPair) -> Vec<i64> {
    e2prime_values(q)
        .unwrap()
        .into_iter()
        .map(|r| r.numer() as i64)
        .collect()
}

#[test]
fn m7_passes_every_axiom() {
    let q = qpair("m7");
    let r = check_eaa(&q, &Search::default());
    assert!(r.all_pass(), "{r:#?}");
    assert_eq!(r.get("eaa.E1").unwrap().tuples, 2);
    assert_eq!(values(&q), [-2, 0, 2]);
}

#[test]
fn m7_paper_breaks_block_identity() {
    let q = qpair("m7-paper");
    let r = check_eaa(&q, &Search::default());
    assert_eq!(r.get("eaa.block_identity").unwrap().status, Status::Fail);
    assert_eq!(values(&q), [-4, 0, 4]);
    assert_eq!(r.get("eaa.E3").unwrap().status, Status::Pass);
    let alpha = Root(vec![Rat::from(2)]);
    let w = find_test_pair(q.datum(), q.algebra().gram(), &alpha, Degree(0), &Search::default())
        .unwrap()
        .unwrap();
    assert_eq!((w.x_plus.clone(), w.x_minus.clone()), (Elem::basis(1), Elem::basis(4)));
    let c = check_block_identity(&q, &w).unwrap();
    assert_eq!(c.status, Status::Fail);
    let wit = c.witness.as_ref().unwrap();
    assert_eq!(wit.lhs.as_deref(), Some("e1"));
    assert_eq!(wit.rhs.as_deref(), Some("2*e1"));
    let q = qpair("m7");
    let w = find_test_pair(q.datum(), q.algebra().gram(), &alpha, Degree(0), &Search::default())
        .unwrap()
        .unwrap();
    assert!(check_block_identity(&q, &w).unwrap().is_pass());
    let scaled = malcev_forge_core::eaa::TestPairWitness {
        x_plus: w.x_plus.scale(Rat::from(2)),
        ..w
    };
    assert!(check_block_identity(&q, &scaled).unwrap().is_pass());
}

#[test]
fn lie_examples() {
    let q = qpair("sl2");
    assert!(check_eaa(&q, &Search::default()).all_pass());
    assert_eq!(values(&q), [-2, 0, 2]);
    let q = qpair("osp12");
    let r = check_eaa(&q, &Search::default());
    assert!(r.all_pass(), "{r:#?}");
    // even roots ±2 in degree 0, odd roots ±1 in degree 1
    assert_eq!(r.get("eaa.E1").unwrap().tuples, 4);
}

#[test]
fn cores() {
    let q = qpair("m7");
    let c = compute_core(&q, &Search::default());
    assert_eq!(c.core_basis.len(), 7);
    assert_eq!(c.hc_basis, vec![Elem::basis(0)]);
    let (_, r) = verify_core_pair(&q, &Search::default()).unwrap();
    assert!(r.all_pass(), "{r:#?}");

    let cls = classify_roots(&qpair("sl2"), &Search::default());
    assert!(cls.exact);
    assert_eq!(cls.nonisotropic.len(), 2);
}

#[test]
fn central_extension_core_drops_center() {
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
    let pair = ToralPair::new(alg, vec![Elem::basis(0), Elem::basis(3)]).unwrap();
    let q = QuadraticToralPair::new(decompose(&pair).unwrap()).unwrap();
    let (core, r) = verify_core_pair(&q, &Search::default()).unwrap();
    assert_eq!(core.core_basis.len(), 3);
    assert_eq!(core.hc_basis, vec![Elem::basis(0)]);
    assert!(r.all_pass(), "{r:#?}");
}

#[test]
fn core_is_idempotent_on_builtins() {
    for name in ["m7", "sl2", "osp12"] {
        let q = qpair(name);
        let c = compute_core(&q, &Search::default());
        let alg = q.algebra();
        let sub = malcev_forge_core::eaa::restrict(alg, &c.core_basis, "core").unwrap();
        assert_eq!(sub.dim(), alg.dim(), "{name}");
    }
}
