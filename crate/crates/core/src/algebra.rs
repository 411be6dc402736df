//! Finite-dimensional algebras given by structure constants.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::AlgebraError;
use crate::field::{FieldSpec, Scalar};

/// Coordinate vector of an algebra element in the fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vec<Scalar>,
}

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Element { coords }
    }

    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        Element { coords: vec![field.zero(); dim] }
    }

    pub fn basis(field: FieldSpec, dim: usize, i: usize) -> Self {
        let mut e = Element::zero(field, dim);
        e.coords[i] = field.one();
        e
    }

    pub fn from_i64s(field: FieldSpec, values: &[i64]) -> Self {
        Element { coords: values.iter().map(|&v| field.from_i64(v)).collect() }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Element) -> Element {
        debug_assert_eq!(self.dim(), other.dim());
        Element { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Element) -> Element {
        debug_assert_eq!(self.dim(), other.dim());
        Element { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        Element { coords: self.coords.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Element {
        Element { coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a = &*a + &(c * b);
            }
        }
    }

    /// Renders the element as a linear combination of `labels`, e.g. `-3*e4` or `e1 + e3`.
    pub fn display_with<'a>(&'a self, labels: &'a [String]) -> impl fmt::Display + 'a {
        LabelledElement { element: self, labels }
    }
}

struct LabelledElement<'a> {
    element: &'a Element,
    labels: &'a [String],
}

impl fmt::Display for LabelledElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_combination(f, self.element.coords.iter().zip(self.labels.iter()))
    }
}

/// Writes `c1*l1 + c2*l2 - ...`, omitting unit coefficients; `0` when empty.
pub(crate) fn write_combination<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a Scalar, &'a String)>,
{
    let mut first = true;
    for (c, label) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative_display();
        let magnitude = if negative { -c } else { c.clone() };
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        if magnitude.is_one() {
            f.write_str(label)?;
        } else {
            write!(f, "{magnitude}*{label}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Algebra over `field` with basis `e_1..e_n` and products
/// `e_i e_j = sum_k c_ij^k e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    field: FieldSpec,
    labels: Vec<String>,
    // row-major n*n table of basis products
    table: Vec<Element>,
}

impl Algebra {
    pub fn new(
        field: FieldSpec,
        labels: Vec<String>,
        table: Vec<Element>,
    ) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if n == 0 {
            return Err(AlgebraError::EmptyAlgebra);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(AlgebraError::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != n * n {
            return Err(AlgebraError::BadTable { expected: n * n, found: table.len() });
        }
        let alg = Algebra { field, labels, table };
        for e in &alg.table {
            alg.check_element(e)?;
        }
        Ok(alg)
    }

    /// Builds an algebra from the listed basis products; all others are zero.
    /// Indices are 0-based; later entries for the same pair overwrite earlier ones.
    pub fn from_products<I>(field: FieldSpec, labels: Vec<String>, products: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (usize, usize, Element)>,
    {
        let n = labels.len();
        let mut table = vec![Element::zero(field, n); n * n];
        for (i, j, v) in products {
            if i >= n || j >= n {
                return Err(AlgebraError::DimensionMismatch { expected: n, found: i.max(j) + 1 });
            }
            table[i * n + j] = v;
        }
        Algebra::new(field, labels, table)
    }

    /// Labels `e1..en`.
    pub fn default_labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `e_i e_j` (0-based).
    pub fn basis_product(&self, i: usize, j: usize) -> &Element {
        &self.table[i * self.dim() + j]
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(self.field, self.dim(), i)
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.field, self.dim())
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<Element, AlgebraError> {
        let e = Element::new(coords);
        self.check_element(&e)?;
        Ok(e)
    }

    pub fn check_element(&self, x: &Element) -> Result<(), AlgebraError> {
        if x.dim() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        if x.coords.iter().any(|c| c.field() != self.field) {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(())
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.mul(x, y))
    }

    /// `J(x,y,z) = (xy)z + (yz)x + (zx)y`
    pub fn jacobian(&self, x: &Element, y: &Element, z: &Element) -> Result<Element, AlgebraError> {
        self.check_element(x)?;
        self.check_element(y)?;
        self.check_element(z)?;
        Ok(self.jac(x, y, z))
    }

    /// Unchecked bilinear product; operands must belong to this algebra.
    pub(crate) fn mul(&self, x: &Element, y: &Element) -> Element {
        let n = self.dim();
        let mut out = self.zero();
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let prod = &self.table[i * n + j];
                if prod.is_zero() {
                    continue;
                }
                out.add_scaled(&(xi * yj), prod);
            }
        }
        out
    }

    pub(crate) fn jac(&self, x: &Element, y: &Element, z: &Element) -> Element {
        let a = self.mul(&self.mul(x, y), z);
        let b = self.mul(&self.mul(y, z), x);
        let c = self.mul(&self.mul(z, x), y);
        a.add(&b).add(&c)
    }

    /// The algebra `A⁻` on the same space with product `[x,y] = xy - yx`.
    pub fn minus_algebra(&self) -> Algebra {
        let n = self.dim();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(self.table[i * n + j].sub(&self.table[j * n + i]));
            }
        }
        Algebra { field: self.field, labels: self.labels.clone(), table }
    }

    /// Same table with a different field, coefficients mapped through `f`.
    pub fn map_table<F>(&self, field: FieldSpec, mut f: F) -> Result<Algebra, AlgebraError>
    where
        F: FnMut(&Scalar) -> Result<Scalar, crate::error::FieldError>,
    {
        let table = self
            .table
            .iter()
            .map(|e| e.coords.iter().map(&mut f).collect::<Result<Vec<_>, _>>().map(Element::new))
            .collect::<Result<Vec<_>, _>>()?;
        Algebra::new(field, self.labels.clone(), table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn table_lookup_of_example() {
        let a = corpus::example_malcev4(FieldSpec::Rationals);
        let e = |i| a.basis(i);
        assert_eq!(a.multiply(&e(2), &e(0)).unwrap(), e(3));
        assert_eq!(a.multiply(&e(0), &e(2)).unwrap(), e(3).neg());
    }

    #[test]
    fn zero_times_anything() {
        let a = corpus::example_malcev4(FieldSpec::Rationals);
        let y = Element::from_i64s(a.field(), &[1, 2, 3, 4]);
        assert!(a.multiply(&a.zero(), &y).unwrap().is_zero());
    }

    #[test]
    fn sum_times_basis() {
        let a = corpus::example_malcev4(FieldSpec::Rationals);
        let x = a.basis(0).add(&a.basis(2));
        assert_eq!(a.multiply(&x, &a.basis(1)).unwrap(), x);
    }

    #[test]
    fn jacobian_values() {
        let q = corpus::example_malcev4(FieldSpec::Rationals);
        let e = |i| q.basis(i);
        let j = q.jacobian(&e(0), &e(1), &e(2)).unwrap();
        assert_eq!(j, Element::from_i64s(FieldSpec::Rationals, &[0, 0, 0, -3]));
        assert!(q.jacobian(&e(0), &e(1), &e(3)).unwrap().is_zero());

        let f3 = FieldSpec::prime(3).unwrap();
        let a3 = corpus::example_malcev4(f3);
        let e3 = |i| a3.basis(i);
        assert!(a3.jacobian(&e3(0), &e3(1), &e3(2)).unwrap().is_zero());
    }

    #[test]
    fn rejects_foreign_elements() {
        let a = corpus::heisenberg(FieldSpec::Rationals);
        let short = Element::from_i64s(FieldSpec::Rationals, &[1, 0]);
        assert_eq!(
            a.multiply(&short, &a.basis(0)),
            Err(AlgebraError::DimensionMismatch { expected: 3, found: 2 })
        );
        let f5 = FieldSpec::prime(5).unwrap();
        let other = Element::from_i64s(f5, &[1, 0, 0]);
        assert_eq!(a.multiply(&other, &a.basis(0)), Err(AlgebraError::FieldMismatch));
    }

    #[test]
    fn construction_checks() {
        let f = FieldSpec::Rationals;
        assert_eq!(Algebra::new(f, Vec::new(), Vec::new()), Err(AlgebraError::EmptyAlgebra));
        let labels = alloc::vec![String::from("x"), String::from("x")];
        assert_eq!(
            Algebra::from_products(f, labels, []),
            Err(AlgebraError::DuplicateLabel(String::from("x")))
        );
    }

    #[test]
    fn combination_display() {
        let a = corpus::example_malcev4(FieldSpec::Rationals);
        let x = Element::from_i64s(a.field(), &[1, 0, -2, 0]);
        assert_eq!(format!("{}", x.display_with(a.labels())), "e1 - 2*e3");
        assert_eq!(format!("{}", a.zero().display_with(a.labels())), "0");
    }

    #[test]
    fn minus_of_matrix_units_is_gl2() {
        let f = FieldSpec::Rationals;
        let g = corpus::matrix_units2(f).minus_algebra();
        // E11 E12 = E12, E12 E11 = 0
        let e = |i| g.basis(i);
        assert_eq!(g.multiply(&e(0), &e(1)).unwrap(), e(1));
        assert_eq!(g.multiply(&e(1), &e(2)).unwrap(), e(0).sub(&e(3)));
        assert_eq!(g, corpus::gl2(f));
    }

    #[test]
    fn minus_of_commutative_is_zero() {
        let f = FieldSpec::Rationals;
        let two = f.from_i64(2);
        let comm = Algebra::from_products(
            f,
            Algebra::default_labels(2),
            [(0, 1, Element::from_i64s(f, &[1, 1])), (1, 0, Element::from_i64s(f, &[1, 1])), (0, 0, Element::from_i64s(f, &[0, 3]))],
        )
        .unwrap();
        let m = comm.minus_algebra();
        for i in 0..2 {
            for j in 0..2 {
                assert!(m.basis_product(i, j).is_zero());
            }
        }
        let h = corpus::heisenberg(f);
        let hm = h.minus_algebra();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*hm.basis_product(i, j), h.basis_product(i, j).scale(&two));
            }
        }
    }
}
