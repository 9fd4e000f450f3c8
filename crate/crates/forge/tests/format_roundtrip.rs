use malcev_forge::format::{builtin, parse, serialize, Document};
use malcev_forge_core::catalog::NAMES;
use malcev_forge_core::linalg::Matrix;
use malcev_forge_core::{AlgebraBuilder, Elem, GradingGroup, Rat};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-5i128..=5, 1i128..=4).prop_map(|(p, q)| Rat::new(p, q))
}

fn document() -> impl Strategy<Value = Document> {
    (1usize..=4, any::<bool>()).prop_flat_map(|(n, z2)| {
        let degs = prop::collection::vec(if z2 { 0u32..=1 } else { 0u32..=0 }, n);
        let coeffs = prop::collection::vec(prop::collection::vec(rat(), n), n * n);
        let gram = prop::option::of(prop::collection::vec(rat(), n * n));
        let toral = prop::option::of(prop::collection::vec(prop::collection::vec(rat(), n), 1..=2));
        (Just(n), Just(z2), degs, coeffs, gram, toral).prop_map(|(n, z2, degs, coeffs, gram, toral)| {
            let g = if z2 { GradingGroup::z2() } else { GradingGroup::Trivial };
            let mut b = AlgebraBuilder::new(g)
                .name("random")
                .description("generated # with = signs");
            for (i, d) in degs.iter().enumerate() {
                b = b.basis(&format!("v{i}"), *d);
            }
            for i in 0..n {
                for j in 0..n {
                    let target = g.add(malcev_forge_core::Degree(degs[i]), malcev_forge_core::Degree(degs[j]));
                    let e = Elem::from_terms(
                        (0..n)
                            .filter(|&k| degs[k] == target.0)
                            .map(|k| (k, coeffs[i * n + j][k])),
                    );
                    if !e.is_zero() {
                        b = b.product(i, j, e);
                    }
                }
            }
            if let Some(gr) = gram {
                b = b.gram(Matrix::from_rows(
                    &gr.chunks(n).map(<[Rat]>::to_vec).collect::<Vec<_>>(),
                ));
            }
            let toral = toral.map(|rows| rows.iter().map(|r| Elem::from_dense(r)).collect());
            Document {
                algebra: b.build().unwrap(),
                toral,
            }
        })
    })
}

proptest! {
    #[test]
    fn parse_inverts_serialize(doc in document()) {
        let text = serialize(&doc.algebra, doc.toral.as_deref());
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(serialize(&back.algebra, back.toral.as_deref()), text);
    }
}

#[test]
fn builtins_round_trip_byte_stably() {
    for name in NAMES {
        let d = builtin(name).unwrap();
        let text = serialize(&d.algebra, d.toral.as_deref());
        assert_eq!(text, serialize(&d.algebra, d.toral.as_deref()));
        let back = parse(&text).unwrap();
        assert_eq!(back, d, "{name}");
        let shipped = std::fs::read_to_string(format!("{}/../../data/{name}.alg", env!("CARGO_MANIFEST_DIR"))).unwrap();
        assert_eq!(shipped, text, "{name}");
    }
}

#[test]
fn m7_document_shape() {
    let text = serialize(&builtin("m7").unwrap().algebra, None);
    let products = text
        .lines()
        .skip_while(|l| *l != "[products]")
        .skip(1)
        .take_while(|l| !l.is_empty())
        .count();
    assert_eq!(products, 21);
    let sl2 = serialize(&builtin("sl2").unwrap().algebra, None);
    let basis = sl2
        .lines()
        .skip_while(|l| *l != "[basis]")
        .skip(1)
        .take_while(|l| !l.is_empty())
        .count();
    assert_eq!(basis, 3);
}

#[test]
fn whitespace_variants_canonicalize() {
    let messy = "# hand edited\n\n  format_version=1\nfield =   Q\nname = sl2\ngrading = trivial\nbcommutative = true\n\n[toral]\n 1 0   0\n[basis]\nh   0\ne 0\nf 0\n[products]\nf h = 2*f\nh   e=2*e\ne f = h\n[form]\n2 0 0\n0 0 1\n0 1 0\n";
    let d = parse(messy).unwrap();
    let canon = serialize(&d.algebra, d.toral.as_deref());
    assert_eq!(
        canon,
        serialize(
            &builtin("sl2").unwrap().algebra.with_name("sl2", ""),
            d.toral.as_deref()
        )
    );
    assert_eq!(serialize(&parse(&canon).unwrap().algebra, d.toral.as_deref()), canon);
}

#[test]
fn documented_example_parses() {
    let doc = std::fs::read_to_string(format!("{}/../../docs/format.md", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let block = doc.split("```").nth(1).unwrap();
    let d = parse(block).unwrap();
    assert_eq!(d.algebra.dim(), 3);
    assert_eq!(d.toral.unwrap(), vec![Elem::basis(0)]);
}

#[test]
fn grading_violation_is_rejected() {
    let text = "format_version = 1\nfield = Q\ngrading = Z2\n[basis]\na 0\nb 0\nx 1\n[products]\na b = x\n";
    let err = parse(text).unwrap_err().to_string();
    assert!(err.contains("wrong degree"), "{err}");
}
