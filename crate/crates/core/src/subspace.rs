//! Linear subspaces of an algebra in reduced row echelon form.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};

use crate::algebra::{Algebra, Element};
use crate::error::AlgebraError;

/// A subspace of `algebra`, stored as the rows of its reduced echelon basis.
///
/// Rows are nonzero, have leading coefficient 1 at strictly increasing pivot
/// columns, and every pivot column is zero in the other rows. Equal subspaces
/// therefore have identical rows.
#[derive(Clone, Debug)]
pub struct Subspace<'a> {
    algebra: &'a Algebra,
    rows: Vec<Element>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && same_algebra(self.algebra, other.algebra)
    }
}

impl Eq for Subspace<'_> {}

impl Hash for Subspace<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
    }
}

fn same_algebra(a: &Algebra, b: &Algebra) -> bool {
    core::ptr::eq(a, b) || a == b
}

fn pivot_of(v: &Element) -> Option<usize> {
    v.coords().iter().position(|c| !c.is_zero())
}

impl<'a> Subspace<'a> {
    pub fn zero(algebra: &'a Algebra) -> Self {
        Subspace { algebra, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(algebra: &'a Algebra) -> Self {
        Subspace {
            algebra,
            rows: (0..algebra.dim()).map(|i| algebra.basis(i)).collect(),
            pivots: (0..algebra.dim()).collect(),
        }
    }

    /// Span of `vectors`; the empty list gives the zero subspace.
    pub fn span<I>(algebra: &'a Algebra, vectors: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = Element>,
    {
        let mut s = Subspace::zero(algebra);
        for v in vectors {
            algebra.check_element(&v)?;
            s.insert(v);
        }
        Ok(s)
    }

    pub fn algebra(&self) -> &'a Algebra {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.algebra.dim()
    }

    /// Reduced echelon basis, ordered by pivot column.
    pub fn basis(&self) -> &[Element] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, v: &Element) -> Element {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v.coords()[p].clone();
            if !c.is_zero() {
                v.add_scaled(&-c, row);
            }
        }
        v
    }

    /// Adds `v` to the span, keeping the echelon form. Returns whether the dimension grew.
    fn insert(&mut self, v: Element) -> bool {
        let r = self.reduce(&v);
        let Some(p) = pivot_of(&r) else {
            return false;
        };
        let r = r.scale(&r.coords()[p].inv());
        for row in &mut self.rows {
            let c = row.coords()[p].clone();
            if !c.is_zero() {
                row.add_scaled(&-c, &r);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, r);
        self.pivots.insert(at, p);
        true
    }

    pub fn contains(&self, v: &Element) -> bool {
        v.dim() == self.algebra.dim() && self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace<'_>) -> bool {
        same_algebra(self.algebra, other.algebra) && self.rows.iter().all(|r| other.contains(r))
    }

    fn check_same(&self, other: &Subspace<'_>) -> Result<(), AlgebraError> {
        if same_algebra(self.algebra, other.algebra) {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn sum(&self, other: &Subspace<'_>) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(self.sum_unchecked(other))
    }

    pub(crate) fn sum_unchecked(&self, other: &Subspace<'_>) -> Self {
        let mut s = self.clone();
        for r in &other.rows {
            if s.is_full() {
                break;
            }
            s.insert(r.clone());
        }
        s
    }

    /// `UV`, spanned by products of basis vectors.
    pub fn product(&self, other: &Subspace<'_>) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(self.product_unchecked(other))
    }

    pub(crate) fn product_unchecked(&self, other: &Subspace<'_>) -> Self {
        let a = self.algebra;
        let mut s = Subspace::zero(a);
        for u in &self.rows {
            for v in &other.rows {
                if s.is_full() {
                    return s;
                }
                s.insert(a.mul(u, v));
            }
        }
        s
    }

    /// `J(U,V,W)`, spanned by Jacobians of basis vectors.
    pub fn jacobian_span(&self, v: &Subspace<'_>, w: &Subspace<'_>) -> Result<Self, AlgebraError> {
        self.check_same(v)?;
        self.check_same(w)?;
        Ok(self.jacobian_span_unchecked(v, w))
    }

    pub(crate) fn jacobian_span_unchecked(&self, v: &Subspace<'_>, w: &Subspace<'_>) -> Self {
        let a = self.algebra;
        let mut s = Subspace::zero(a);
        for x in &self.rows {
            for y in &v.rows {
                let xy = a.mul(x, y);
                for z in &w.rows {
                    if s.is_full() {
                        return s;
                    }
                    let yz = a.mul(y, z);
                    let zx = a.mul(z, x);
                    let j = a.mul(&xy, z).add(&a.mul(&yz, x)).add(&a.mul(&zx, y));
                    s.insert(j);
                }
            }
        }
        s
    }

    /// `SA + AS`, spanned by products with basis vectors of the algebra.
    fn two_sided_products(&self) -> Self {
        let a = self.algebra;
        let mut s = Subspace::zero(a);
        for u in &self.rows {
            for i in 0..a.dim() {
                let e = a.basis(i);
                s.insert(a.mul(u, &e));
                s.insert(a.mul(&e, u));
                if s.is_full() {
                    return s;
                }
            }
        }
        s
    }

    /// `SA ⊆ S` and `AS ⊆ S`.
    pub fn is_ideal(&self) -> bool {
        self.two_sided_products().is_subspace_of(self)
    }

    /// Smallest two-sided ideal containing `S`.
    pub fn ideal_closure(&self) -> Self {
        let mut s = self.clone();
        loop {
            let next = s.sum_unchecked(&s.two_sided_products());
            if next.dim() == s.dim() {
                return s;
            }
            s = next;
        }
    }

    /// Renders the basis as `{v1, v2, ...}` using the algebra's labels.
    pub fn display(&self) -> impl fmt::Display + '_ {
        DisplaySubspace(self)
    }

    /// Basis vectors rendered with the algebra's labels.
    pub fn basis_strings(&self) -> Vec<String> {
        use alloc::string::ToString;
        self.rows.iter().map(|r| r.display_with(self.algebra.labels()).to_string()).collect()
    }
}

struct DisplaySubspace<'s, 'a>(&'s Subspace<'a>);

impl fmt::Display for DisplaySubspace<'_, '_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, r) in self.0.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", r.display_with(self.0.algebra.labels()))?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::FieldSpec;
    use alloc::format;
    use alloc::vec;

    fn q4() -> Algebra {
        corpus::example_malcev4(FieldSpec::Rationals)
    }

    #[test]
    fn span_examples() {
        let a = q4();
        let e = |i| a.basis(i);
        let two = a.field().from_i64(2);
        let s = Subspace::span(&a, [e(0), e(0).scale(&two)]).unwrap();
        assert_eq!(s.basis(), &[e(0)]);
        assert!(Subspace::span(&a, []).unwrap().is_zero());
        let t = Subspace::span(&a, [e(0).add(&e(2)), e(2)]).unwrap();
        assert_eq!(t.basis(), &[e(0), e(2)]);
    }

    #[test]
    fn sum_examples() {
        let a = q4();
        let e = |i| a.basis(i);
        let u = Subspace::span(&a, [e(0)]).unwrap();
        assert_eq!(u.sum(&Subspace::zero(&a)).unwrap(), u);
        let v = Subspace::span(&a, [e(2)]).unwrap();
        let w = Subspace::span(&a, [e(0), e(2)]).unwrap();
        assert_eq!(u.sum(&v).unwrap(), w);
        let x = Subspace::span(&a, [e(0).add(&e(2))]).unwrap();
        assert_eq!(x.sum(&v).unwrap(), w);
    }

    #[test]
    fn product_examples() {
        let a = q4();
        let full = Subspace::full(&a);
        let aa = full.product(&full).unwrap();
        assert_eq!(aa, Subspace::span(&a, [a.basis(0), a.basis(2), a.basis(3)]).unwrap());
        assert!(full.product(&Subspace::zero(&a)).unwrap().is_zero());

        let h = corpus::heisenberg(FieldSpec::Rationals);
        let hf = Subspace::full(&h);
        assert_eq!(hf.product(&hf).unwrap(), Subspace::span(&h, [h.basis(2)]).unwrap());
    }

    #[test]
    fn jacobian_span_examples() {
        let a = q4();
        let full = Subspace::full(&a);
        let j = full.jacobian_span(&full, &full).unwrap();
        assert_eq!(j, Subspace::span(&a, [a.basis(3)]).unwrap());

        let a3 = corpus::example_malcev4(FieldSpec::prime(3).unwrap());
        let f3 = Subspace::full(&a3);
        assert!(f3.jacobian_span(&f3, &f3).unwrap().is_zero());

        let s = corpus::sl2(FieldSpec::Rationals);
        let fs = Subspace::full(&s);
        assert!(fs.jacobian_span(&fs, &fs).unwrap().is_zero());
    }

    #[test]
    fn ideal_examples() {
        let a = q4();
        let e4 = Subspace::span(&a, [a.basis(3)]).unwrap();
        assert!(e4.is_ideal());
        assert_eq!(e4.ideal_closure(), e4);
        let e1 = Subspace::span(&a, [a.basis(0)]).unwrap();
        assert!(!e1.is_ideal());
        assert!(Subspace::full(&a).is_ideal());
        assert!(Subspace::zero(&a).ideal_closure().is_zero());

        // e1 e3 = -e4 and e4 e2 = -e4; e1 e2 = e1 stays inside
        let closure = e1.ideal_closure();
        assert_eq!(closure, Subspace::span(&a, [a.basis(0), a.basis(3)]).unwrap());
        assert!(closure.is_ideal());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = q4();
        let h = corpus::heisenberg(FieldSpec::Rationals);
        let r = Subspace::full(&a).sum(&Subspace::full(&h));
        assert_eq!(r, Err(AlgebraError::AlgebraMismatch));
    }

    #[test]
    fn display_lists_basis() {
        let a = q4();
        let s = Subspace::span(&a, [a.basis(0).add(&a.basis(2)), a.basis(3)]).unwrap();
        assert_eq!(format!("{}", s.display()), "{e1 + e3, e4}");
        assert_eq!(s.basis_strings(), vec![String::from("e1 + e3"), String::from("e4")]);
    }
}
