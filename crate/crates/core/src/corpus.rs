//! Small algebras used as fixtures and as a reference corpus.
//!
//! Every constructor takes the target field; tables only use integer
//! constants, so each one exists over any supported field.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Element};
use crate::field::FieldSpec;

/// `(i, j, coefficients)` with 1-based basis indices.
type Entry<'a> = (usize, usize, &'a [(i64, usize)]);
type OwnedEntry = (usize, usize, Vec<(i64, usize)>);

fn build(field: FieldSpec, labels: Vec<String>, entries: &[Entry<'_>], anticommutative: bool) -> Algebra {
    let n = labels.len();
    let mut products = Vec::new();
    for &(i, j, combo) in entries {
        let mut v = vec![0i64; n];
        for &(c, k) in combo {
            v[k - 1] += c;
        }
        if anticommutative {
            let w: Vec<i64> = v.iter().map(|c| -c).collect();
            products.push((j - 1, i - 1, Element::from_i64s(field, &w)));
        }
        products.push((i - 1, j - 1, Element::from_i64s(field, &v)));
    }
    Algebra::from_products(field, labels, products).expect("corpus table is well formed")
}

fn named(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| String::from(*s)).collect()
}

/// Four-dimensional Malcev algebra that is not Lie in characteristic 0 and
/// becomes Lie in characteristic 3: `e1e2 = e1`, `e3e1 = e4`, `e3e2 = e3`, `e2e4 = e4`.
pub fn example_malcev4(field: FieldSpec) -> Algebra {
    build(
        field,
        Algebra::default_labels(4),
        &[(1, 2, &[(1, 1)]), (3, 1, &[(1, 4)]), (3, 2, &[(1, 3)]), (2, 4, &[(1, 4)])],
        true,
    )
}

/// `e1e2 = e3`.
pub fn heisenberg(field: FieldSpec) -> Algebra {
    build(field, Algebra::default_labels(3), &[(1, 2, &[(1, 3)])], true)
}

/// `e1e2 = e3`, `e1e3 = e4`.
pub fn filiform4(field: FieldSpec) -> Algebra {
    build(field, Algebra::default_labels(4), &[(1, 2, &[(1, 3)]), (1, 3, &[(1, 4)])], true)
}

/// `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2(field: FieldSpec) -> Algebra {
    build(
        field,
        named(&["h", "e", "f"]),
        &[(1, 2, &[(2, 2)]), (1, 3, &[(-2, 3)]), (2, 3, &[(1, 1)])],
        true,
    )
}

/// Associative algebra of 2x2 matrices on the units `E11, E12, E21, E22`.
pub fn matrix_units2(field: FieldSpec) -> Algebra {
    let labels = named(&["E11", "E12", "E21", "E22"]);
    // E_ab E_cd = [b == c] E_ad, unit (a,b) has index 2a + b
    let mut entries: Vec<OwnedEntry> = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for d in 0..2 {
                entries.push((2 * a + b + 1, 2 * b + d + 1, vec![(1, 2 * a + d + 1)]));
            }
        }
    }
    let borrowed: Vec<Entry<'_>> = entries.iter().map(|(i, j, c)| (*i, *j, c.as_slice())).collect();
    build(field, labels, &borrowed, false)
}

/// Commutator algebra of [`matrix_units2`].
pub fn gl2(field: FieldSpec) -> Algebra {
    build(
        field,
        named(&["E11", "E12", "E21", "E22"]),
        &[
            (1, 2, &[(1, 2)]),
            (1, 3, &[(-1, 3)]),
            (2, 3, &[(1, 1), (-1, 4)]),
            (2, 4, &[(1, 2)]),
            (3, 4, &[(-1, 3)]),
        ],
        true,
    )
}

// Oriented quaternionic triples of the imaginary octonion units.
const FANO: [(usize, usize, usize); 7] =
    [(1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5)];

/// Octonions on `u, i1..i7` with unit `u`: an alternative, non-associative algebra.
pub fn octonions(field: FieldSpec) -> Algebra {
    let mut labels = named(&["u"]);
    labels.extend((1..=7).map(|i| alloc::format!("i{i}")));
    let mut entries: Vec<OwnedEntry> = Vec::new();
    for k in 1..=8 {
        entries.push((1, k, vec![(1, k)]));
        entries.push((k, 1, vec![(1, k)]));
    }
    for k in 2..=8 {
        entries.push((k, k, vec![(-1, 1)]));
    }
    for &(a, b, c) in &FANO {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            entries.push((x + 1, y + 1, vec![(1, z + 1)]));
            entries.push((y + 1, x + 1, vec![(-1, z + 1)]));
        }
    }
    let borrowed: Vec<Entry<'_>> = entries.iter().map(|(i, j, c)| (*i, *j, c.as_slice())).collect();
    build(field, labels, &borrowed, false)
}

/// Traceless part of the commutator algebra of [`octonions`]:
/// seven-dimensional, simple, Malcev and not Lie.
pub fn octonion_traceless(field: FieldSpec) -> Algebra {
    let mut entries: Vec<OwnedEntry> = Vec::new();
    for &(a, b, c) in &FANO {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            entries.push((x, y, vec![(2, z)]));
        }
    }
    let borrowed: Vec<Entry<'_>> = entries.iter().map(|(i, j, c)| (*i, *j, c.as_slice())).collect();
    build(field, Algebra::default_labels(7), &borrowed, true)
}

/// Nilpotent non-Lie Malcev algebra: `e1e2 = e3`, `e3e4 = e5`.
pub fn nil_malcev5a(field: FieldSpec) -> Algebra {
    build(field, Algebra::default_labels(5), &[(1, 2, &[(1, 3)]), (3, 4, &[(1, 5)])], true)
}

/// Nilpotent non-Lie Malcev algebra:
/// `e1e3 = e4 + e5`, `e2e3 = e5`, `e2e4 = -e5`, `e3e4 = e5`.
pub fn nil_malcev5b(field: FieldSpec) -> Algebra {
    build(
        field,
        Algebra::default_labels(5),
        &[
            (1, 3, &[(1, 4), (1, 5)]),
            (2, 3, &[(1, 5)]),
            (2, 4, &[(-1, 5)]),
            (3, 4, &[(1, 5)]),
        ],
        true,
    )
}

/// All products zero.
pub fn abelian(field: FieldSpec, dim: usize) -> Algebra {
    build(field, Algebra::default_labels(dim), &[], false)
}

/// Named Malcev members of the corpus over `field`.
pub fn malcev_corpus(field: FieldSpec) -> Vec<(&'static str, Algebra)> {
    vec![
        ("example_malcev4", example_malcev4(field)),
        ("heisenberg", heisenberg(field)),
        ("filiform4", filiform4(field)),
        ("gl2", gl2(field)),
        ("sl2", sl2(field)),
        ("octonion_traceless", octonion_traceless(field)),
        ("nil_malcev5a", nil_malcev5a(field)),
        ("nil_malcev5b", nil_malcev5b(field)),
    ]
}
