//! Independent checks against a plain integer expansion of the tables.

use malcev_forge_core::catalog::builtin;
use malcev_forge_core::identity::direct_residuals;
use malcev_forge_core::{
    check_form, check_identity, decompose, verify_toral, Elem, IdentityName, IdentitySpec, Mode, Rat, Status, ToralPair,
};

type V = [i64; 7];

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

fn mul(a: &V, b: &V) -> V {
    let mut out = [0i64; 7];
    for i in 0..7 {
        for j in 0..7 {
            let (c, k) = M7[i][j];
            if c != 0 && a[i] != 0 && b[j] != 0 {
                out[k - 1] += c * a[i] * b[j];
            }
        }
    }
    out
}

fn unit(i: usize) -> V {
    let mut v = [0; 7];
    v[i] = 1;
    v
}

fn add(a: V, b: V) -> V {
    core::array::from_fn(|i| a[i] + b[i])
}

fn jac(x: &V, y: &V, z: &V) -> V {
    add(add(mul(&mul(x, y), z), mul(&mul(z, x), y)), mul(&mul(y, z), x))
}

fn sagle(x: &V, y: &V, z: &V, t: &V) -> V {
    let l = add(
        add(mul(&mul(&mul(x, y), z), t), mul(&mul(&mul(t, x), y), z)),
        add(mul(&mul(&mul(z, t), x), y), mul(&mul(&mul(y, z), t), x)),
    );
    let r = mul(&mul(x, z), &mul(y, t));
    core::array::from_fn(|i| l[i] - r[i])
}

fn to_elem(v: &V) -> Elem {
    Elem::from_terms(v.iter().enumerate().map(|(i, &c)| (i, Rat::from(c))))
}

#[test]
fn m7_table_matches_oracle() {
    let a = builtin("m7").unwrap().algebra;
    for i in 0..7 {
        for j in 0..7 {
            assert_eq!(
                a.mul(&Elem::basis(i), &Elem::basis(j)),
                to_elem(&mul(&unit(i), &unit(j))),
                "e{} e{}",
                i + 1,
                j + 1
            );
        }
    }
}

#[test]
fn m7_oracle_counts() {
    let mut jac_fail = 0;
    let mut sagle_fail = 0;
    for x in 0..7 {
        for y in 0..7 {
            for z in 0..7 {
                if jac(&unit(x), &unit(y), &unit(z)) != [0; 7] {
                    jac_fail += 1;
                }
                for t in 0..7 {
                    if sagle(&unit(x), &unit(y), &unit(z), &unit(t)) != [0; 7] {
                        sagle_fail += 1;
                    }
                }
            }
        }
    }
    assert_eq!(sagle_fail, 0);
    assert!(jac_fail > 0);

    let a = builtin("m7").unwrap().algebra;
    let s = check_identity(&a, &IdentitySpec::new(IdentityName::Sagle), Mode::Exhaustive).unwrap();
    assert_eq!(s.status, Status::Pass);
    assert_eq!(s.tuples, 2401);
    let j = check_identity(&a, &IdentitySpec::new(IdentityName::Jacobi), Mode::Exhaustive).unwrap();
    assert_eq!(j.status, Status::Fail);
    assert_eq!(j.details["failures"], (jac_fail as i64).into());
}

#[test]
fn m7_jacobian_witness() {
    let expected = jac(&unit(1), &unit(2), &unit(4));
    assert_eq!(expected, [0, 0, -6, 0, 0, 0, 0]);
    let a = builtin("m7").unwrap().algebra;
    let j = a.jacobian(&Elem::basis(1), &Elem::basis(2), &Elem::basis(4));
    assert_eq!(a.render(&j), "-6*e3");
}

#[test]
fn m7_sampled_nonmultilinear_identities_hold() {
    let a = builtin("m7").unwrap().algebra;
    for n in [
        IdentityName::BinaryLie,
        IdentityName::SagleExtended,
        IdentityName::MalcevOriginal,
    ] {
        let c = check_identity(&a, &IdentitySpec::new(n), Mode::Sampled { seed: 7, count: 100 }).unwrap();
        assert_eq!(c.status, Status::Pass, "{n}");
    }
}

#[test]
fn malcev_original_equals_oracle_on_random_arguments() {
    let a = builtin("m7").unwrap().algebra;
    let x = [1, -2, 0, 1, 2, 0, -1];
    let y = [0, 1, 1, -1, 0, 2, 1];
    let z = [2, 0, -1, 0, 1, 1, 0];
    let lhs = jac(&x, &y, &mul(&x, &z));
    let rhs = mul(&jac(&x, &y, &z), &x);
    assert_eq!(lhs, rhs);
    let xs: Vec<(Elem, u64)> = [x, y, z].iter().map(|v| (to_elem(v), 0)).collect();
    assert!(direct_residuals(&a, IdentityName::MalcevOriginal, &xs).is_empty());
}

#[test]
fn forms_on_m7_variants() {
    let unscaled = builtin("m7-paper").unwrap().algebra;
    let r = check_form(&unscaled).unwrap();
    let inv = r.get("form.invariant").unwrap();
    assert_eq!(inv.status, Status::Fail);
    assert_eq!(r.get("form.nondegenerate").unwrap().status, Status::Pass);

    // witness oracle: (e1 e2, e5) = 2 (e2, e5) = 2, (e1, e2 e5) = (e1, e1) = 1
    let e1e2 = mul(&unit(0), &unit(1));
    let e2e5 = mul(&unit(1), &unit(4));
    assert_eq!(e1e2, [0, 2, 0, 0, 0, 0, 0]);
    assert_eq!(e2e5, [1, 0, 0, 0, 0, 0, 0]);

    let fixed = builtin("m7").unwrap().algebra;
    assert!(check_form(&fixed).unwrap().all_pass());
}

#[test]
fn lie_algebras_satisfy_jacobi() {
    let sl2 = builtin("sl2").unwrap().algebra;
    let c = check_identity(&sl2, &IdentitySpec::new(IdentityName::Jacobi), Mode::Exhaustive).unwrap();
    assert_eq!(c.status, Status::Pass);
    assert!(check_form(&sl2).unwrap().all_pass());

    let osp = builtin("osp12").unwrap().algebra;
    for n in [
        IdentityName::BCommutativity,
        IdentityName::SuperJacobi,
        IdentityName::SuperSagle,
    ] {
        let c = check_identity(&osp, &IdentitySpec::new(n), Mode::Exhaustive).unwrap();
        assert_eq!(c.status, Status::Pass, "{n}");
    }
    let c = check_identity(&osp, &IdentitySpec::new(IdentityName::Jacobi), Mode::Exhaustive).unwrap();
    assert_eq!(c.status, Status::Fail);
    assert!(check_form(&osp).unwrap().all_pass());
}

#[test]
fn root_decompositions() {
    let cases: [(&str, &[(&str, usize)]); 4] = [
        ("m7", &[("[-2]", 3), ("[0]", 1), ("[2]", 3)]),
        ("sl2", &[("[-2]", 1), ("[0]", 1), ("[2]", 1)]),
        ("osp12", &[("[-2]", 1), ("[-1]", 1), ("[0]", 1), ("[1]", 1), ("[2]", 1)]),
        ("abelian2", &[("[0]", 2)]),
    ];
    for (name, expect) in cases {
        let b = builtin(name).unwrap();
        let d = decompose(&ToralPair::new(b.algebra, b.toral).unwrap()).unwrap();
        let got: Vec<(String, usize)> = d
            .roots()
            .iter()
            .enumerate()
            .map(|(k, r)| (r.to_string(), d.dim_of(k)))
            .collect();
        let want: Vec<(String, usize)> = expect.iter().map(|(r, n)| (r.to_string(), *n)).collect();
        assert_eq!(got, want, "{name}");
        assert!(verify_toral(&d).all_pass(), "{name}");
    }
}
