//! Seeded random search for Malcev structure constants.

use std::fmt::Write as _;

use malcev_core::identities::{is_lie, is_malcev};
use malcev_core::{Algebra, Element, FieldSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::table::print_table;

/// Probability that a product `e_i e_j` with `i < j` is nonzero.
const PRODUCT_DENSITY: f64 = 0.35;
/// Probability that a coordinate of a nonzero product is nonzero.
const COORD_DENSITY: f64 = 0.4;

fn random_scalar<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> i64 {
    match field {
        FieldSpec::Rationals => {
            let v = rng.random_range(1..=3);
            if rng.random_bool(0.5) { -v } else { v }
        }
        FieldSpec::PrimeField(p) => rng.random_range(1..p.get()) as i64,
    }
}

/// A sparse random anticommutative table with at least one nonzero product.
pub fn random_anticommutative<R: Rng + ?Sized>(field: FieldSpec, dim: usize, rng: &mut R) -> Algebra {
    loop {
        let mut products = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                if !rng.random_bool(PRODUCT_DENSITY) {
                    continue;
                }
                let coords: Vec<i64> =
                    (0..dim).map(|_| if rng.random_bool(COORD_DENSITY) { random_scalar(field, rng) } else { 0 }).collect();
                let v = Element::from_i64s(field, &coords);
                if !v.is_zero() {
                    products.push((i, j, v.neg()));
                    products.push((j, i, v));
                }
            }
        }
        if !products.is_empty() {
            return Algebra::from_products(field, Algebra::default_labels(dim), products)
                .expect("indices and dimensions are in range");
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    pub dim: usize,
    pub field: FieldSpec,
    pub trials: usize,
    pub seed: u64,
}

/// One Malcev table found by [`search_malcev`].
#[derive(Clone, Debug)]
pub struct Hit {
    pub trial: usize,
    pub lie: bool,
    pub algebra: Algebra,
}

pub fn search_malcev(params: SearchParams) -> Vec<Hit> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut hits = Vec::new();
    for trial in 1..=params.trials {
        let a = random_anticommutative(params.field, params.dim, &mut rng);
        if is_malcev(&a).verdict {
            let lie = is_lie(&a).verdict;
            hits.push(Hit { trial, lie, algebra: a });
        }
    }
    hits
}

/// Renders hits as concatenated table files separated by `## hit` comment lines,
/// so each block reparses on its own.
pub fn render_hits(params: SearchParams, hits: &[Hit]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# search-malcev dim {} field {} trials {} seed {}",
        params.dim, params.field, params.trials, params.seed
    );
    for (k, h) in hits.iter().enumerate() {
        let _ = writeln!(out, "## hit {} trial {} lie {}", k + 1, h.trial, if h.lie { "yes" } else { "no" });
        out.push_str(&print_table(&h.algebra));
    }
    let non_lie = hits.iter().filter(|h| !h.lie).count();
    let _ = writeln!(out, "# hits {} non-lie {} trials {}", hits.len(), non_lie, params.trials);
    out
}

/// Splits [`render_hits`] output back into per-hit table texts.
pub fn split_hits(output: &str) -> Vec<String> {
    let mut blocks = Vec::new();
    let mut current: Option<String> = None;
    for line in output.lines() {
        if line.starts_with("## hit") {
            blocks.extend(current.take());
            current = Some(String::new());
        } else if let Some(b) = current.as_mut() {
            if !line.starts_with('#') {
                b.push_str(line);
                b.push('\n');
            }
        }
    }
    blocks.extend(current);
    blocks
}
