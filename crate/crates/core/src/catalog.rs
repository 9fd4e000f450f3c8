//! Built-in algebras, each with a distinguished toral subalgebra.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraBuilder, Elem, StructureAlgebra};
use crate::grading::GradingGroup;
use crate::linalg::Matrix;
use crate::rat::Rat;

pub const NAMES: [&str; 5] = ["m7-paper", "m7", "sl2", "osp12", "abelian2"];

#[derive(Clone, Debug)]
pub struct Builtin {
    pub algebra: StructureAlgebra,
    /// Basis of the toral subalgebra, in the algebra's coordinates.
    pub toral: Vec<Elem>,
}

pub fn builtin(name: &str) -> Option<Builtin> {
    let b = match name {
        "m7-paper" => m7(1),
        "m7" => m7(2),
        "sl2" => sl2(),
        "osp12" => osp12(),
        "abelian2" => abelian2(),
        _ => return None,
    };
    Some(b)
}

fn gram(n: usize, entries: &[(usize, usize, i64)]) -> Matrix {
    let mut g = Matrix::zeros(n, n);
    for &(i, j, v) in entries {
        g.set(i, j, Rat::from(v));
    }
    g
}

/// Seven-dimensional simple non-Lie Malcev algebra. `e11` is the `(e1,e1)`
/// Gram entry: 1 as commonly printed, 2 for the invariant normalization.
fn m7(e11: i64) -> Builtin {
    // (i, j, k, c): e_i e_j = c e_k, 1-based, every nonzero entry of the table.
    const TABLE: [(usize, usize, usize, i64); 30] = [
        (1, 2, 2, 2),
        (1, 3, 3, 2),
        (1, 4, 4, 2),
        (1, 5, 5, -2),
        (1, 6, 6, -2),
        (1, 7, 7, -2),
        (2, 1, 2, -2),
        (2, 3, 7, 2),
        (2, 4, 6, -2),
        (2, 5, 1, 1),
        (3, 1, 3, -2),
        (3, 2, 7, -2),
        (3, 4, 5, 2),
        (3, 6, 1, 1),
        (4, 1, 4, -2),
        (4, 2, 6, 2),
        (4, 3, 5, -2),
        (4, 7, 1, 1),
        (5, 1, 5, 2),
        (5, 2, 1, -1),
        (5, 6, 4, -2),
        (5, 7, 3, 2),
        (6, 1, 6, 2),
        (6, 3, 1, -1),
        (6, 5, 4, 2),
        (6, 7, 2, -2),
        (7, 1, 7, 2),
        (7, 4, 1, -1),
        (7, 5, 3, -2),
        (7, 6, 2, 2),
    ];
    let (name, description) = if e11 == 1 {
        (
            "m7-paper",
            "seven-dimensional simple Malcev algebra, form with (e1,e1)=1",
        )
    } else {
        (
            "m7",
            "seven-dimensional simple Malcev algebra, invariant form with (e1,e1)=2",
        )
    };
    let mut b = AlgebraBuilder::new(GradingGroup::Trivial)
        .name(name)
        .description(description)
        .bcommutative(true);
    for i in 1..=7 {
        b = b.basis(&alloc::format!("e{i}"), 0);
    }
    for (i, j, k, c) in TABLE {
        b = b.product_int(i - 1, j - 1, &[(k - 1, c)]);
    }
    let g = gram(
        7,
        &[
            (0, 0, e11),
            (1, 4, 1),
            (4, 1, 1),
            (2, 5, 1),
            (5, 2, 1),
            (3, 6, 1),
            (6, 3, 1),
        ],
    );
    let algebra = b.gram(g).build().expect("m7 table is consistent");
    Builtin {
        algebra,
        toral: vec![Elem::basis(0)],
    }
}

fn sl2() -> Builtin {
    let algebra = AlgebraBuilder::new(GradingGroup::Trivial)
        .name("sl2")
        .description("split three-dimensional simple Lie algebra with its trace form")
        .bcommutative(true)
        .basis("h", 0)
        .basis("e", 0)
        .basis("f", 0)
        .product_int(0, 1, &[(1, 2)])
        .product_int(0, 2, &[(2, -2)])
        .product_int(1, 2, &[(0, 1)])
        .gram(gram(3, &[(0, 0, 2), (1, 2, 1), (2, 1, 1)]))
        .build()
        .expect("sl2 table is consistent");
    Builtin {
        algebra,
        toral: vec![Elem::basis(0)],
    }
}

/// Orthosymplectic Lie superalgebra, graded by Z2 with `x`, `y` odd.
fn osp12() -> Builtin {
    let (h, e, f, x, y) = (0, 1, 2, 3, 4);
    let algebra = AlgebraBuilder::new(GradingGroup::z2())
        .name("osp12")
        .description("orthosymplectic Lie superalgebra osp(1|2) with its supersymmetric invariant form")
        .bcommutative(true)
        .basis("h", 0)
        .basis("e", 0)
        .basis("f", 0)
        .basis("x", 1)
        .basis("y", 1)
        .product_int(h, e, &[(e, 2)])
        .product_int(h, f, &[(f, -2)])
        .product_int(e, f, &[(h, 1)])
        .product_int(h, x, &[(x, 1)])
        .product_int(h, y, &[(y, -1)])
        .product_int(e, y, &[(x, 1)])
        .product_int(f, x, &[(y, 1)])
        .product_int(x, x, &[(e, 2)])
        .product_int(y, y, &[(f, -2)])
        .product_int(x, y, &[(h, -1)])
        .gram(gram(5, &[(h, h, 2), (e, f, 1), (f, e, 1), (x, y, -2), (y, x, 2)]))
        .build()
        .expect("osp12 table is consistent");
    Builtin {
        algebra,
        toral: vec![Elem::basis(h)],
    }
}

fn abelian2() -> Builtin {
    let algebra = AlgebraBuilder::new(GradingGroup::Trivial)
        .name("abelian2")
        .description("two-dimensional algebra with zero product and zero form")
        .bcommutative(true)
        .basis("a1", 0)
        .basis("a2", 0)
        .gram(Matrix::zeros(2, 2))
        .build()
        .expect("abelian2 is consistent");
    Builtin {
        algebra,
        toral: vec![Elem::basis(0)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for n in NAMES {
            let b = builtin(n).unwrap();
            assert_eq!(b.algebra.name(), n);
        }
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn m7_variants_differ_only_in_e11() {
        let p = builtin("m7-paper").unwrap().algebra;
        let c = builtin("m7").unwrap().algebra;
        let (gp, gc) = (p.gram().unwrap(), c.gram().unwrap());
        for i in 0..7 {
            for j in 0..7 {
                if (i, j) != (0, 0) {
                    assert_eq!(gp.get(i, j), gc.get(i, j));
                }
            }
        }
        assert_eq!(gp.determinant(), Rat::from(-1));
        assert_eq!(gc.determinant(), Rat::from(-2));
    }
}
