//! Anticommutativity, Jacobi and Malcev identity checks on basis elements.
//!
//! Multilinear identities are checked on all basis tuples. Identities in which
//! `x` occurs twice are quadratic in `x`; they are checked on `x = e_i + e_j`
//! for `i <= j`, which covers the polarized form in odd characteristic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Algebra, Element};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `e_i e_j = -(e_j e_i)`, indices `[i, j]`.
    Anticommutative,
    /// `J(e_i, e_j, e_k) = 0`, indices `[i, j, k]`.
    Jacobi,
    /// `J(x,y,xz) = J(x,y,z)x`
    Id1,
    /// `J(x,xy,z) = J(x,y,z)x`
    Id2,
    /// `(xy)(xz) = ((xy)z)x + ((yz)x)x + ((zx)x)y`
    Id3,
    /// `(xz)(yt) = ((xy)z)t + ((yz)t)x + ((zt)x)y + ((tx)y)z`
    Id4,
    /// `2 J(x,y,z)t = J(t,x,zy) + J(t,y,xz) + J(t,z,yx)`
    Id5,
}

impl Identity {
    pub const NUMBERED: [Identity; 5] = [Identity::Id1, Identity::Id2, Identity::Id3, Identity::Id4, Identity::Id5];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Anticommutative => "anticommutative",
            Identity::Jacobi => "jacobi",
            Identity::Id1 => "id1",
            Identity::Id2 => "id2",
            Identity::Id3 => "id3",
            Identity::Id4 => "id4",
            Identity::Id5 => "id5",
        }
    }

    /// Number of basis indices in a witness.
    pub fn arity(self) -> usize {
        match self {
            Identity::Anticommutative => 2,
            Identity::Jacobi => 3,
            // x = e_i + e_j, y = e_k, z = e_l
            Identity::Id1 | Identity::Id2 | Identity::Id3 => 4,
            Identity::Id4 | Identity::Id5 => 4,
        }
    }

    /// Both sides of the identity at the basis tuple `idx` (0-based).
    ///
    /// For `Id1..Id3` the tuple `[i, j, k, l]` means `x = e_i + e_j` when
    /// `i != j` and `x = e_i` when `i == j`.
    pub fn sides(self, a: &Algebra, idx: &[usize]) -> (Element, Element) {
        assert_eq!(idx.len(), self.arity(), "wrong number of indices for {}", self.name());
        let e = |i: usize| a.basis(i);
        let m = |x: &Element, y: &Element| a.mul(x, y);
        let j = |x: &Element, y: &Element, z: &Element| a.jac(x, y, z);
        match self {
            Identity::Anticommutative => (a.basis_product(idx[0], idx[1]).clone(), a.basis_product(idx[1], idx[0]).neg()),
            Identity::Jacobi => (j(&e(idx[0]), &e(idx[1]), &e(idx[2])), a.zero()),
            Identity::Id1 | Identity::Id2 | Identity::Id3 => {
                let x = if idx[0] == idx[1] { e(idx[0]) } else { e(idx[0]).add(&e(idx[1])) };
                let (y, z) = (e(idx[2]), e(idx[3]));
                match self {
                    Identity::Id1 => (j(&x, &y, &m(&x, &z)), m(&j(&x, &y, &z), &x)),
                    Identity::Id2 => (j(&x, &m(&x, &y), &z), m(&j(&x, &y, &z), &x)),
                    _ => {
                        let xy = m(&x, &y);
                        let lhs = m(&xy, &m(&x, &z));
                        let r1 = m(&m(&xy, &z), &x);
                        let r2 = m(&m(&m(&y, &z), &x), &x);
                        let r3 = m(&m(&m(&z, &x), &x), &y);
                        (lhs, r1.add(&r2).add(&r3))
                    }
                }
            }
            Identity::Id4 => {
                let (x, y, z, t) = (e(idx[0]), e(idx[1]), e(idx[2]), e(idx[3]));
                let lhs = m(&m(&x, &z), &m(&y, &t));
                let r1 = m(&m(&m(&x, &y), &z), &t);
                let r2 = m(&m(&m(&y, &z), &t), &x);
                let r3 = m(&m(&m(&z, &t), &x), &y);
                let r4 = m(&m(&m(&t, &x), &y), &z);
                (lhs, r1.add(&r2).add(&r3).add(&r4))
            }
            Identity::Id5 => {
                let (x, y, z, t) = (e(idx[0]), e(idx[1]), e(idx[2]), e(idx[3]));
                let jt = m(&j(&x, &y, &z), &t);
                let lhs = jt.add(&jt);
                let r1 = j(&t, &x, &m(&z, &y));
                let r2 = j(&t, &y, &m(&x, &z));
                let r3 = j(&t, &z, &m(&y, &x));
                (lhs, r1.add(&r2).add(&r3))
            }
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A basis tuple at which an identity fails, with both evaluated sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub identity: Identity,
    /// 0-based basis indices, interpreted as in [`Identity::sides`].
    pub indices: Vec<usize>,
    pub lhs: Element,
    pub rhs: Element,
}

impl Counterexample {
    /// Recomputes both sides in `a` and confirms they still differ.
    pub fn reverify(&self, a: &Algebra) -> bool {
        let (l, r) = self.identity.sides(a, &self.indices);
        l == self.lhs && r == self.rhs && l != r
    }
}

/// Outcome of an identity check. `counterexample` is present iff `verdict` is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWitness {
    pub verdict: bool,
    pub counterexample: Option<Counterexample>,
}

impl IdentityWitness {
    fn holds() -> Self {
        IdentityWitness { verdict: true, counterexample: None }
    }

    fn fails(c: Counterexample) -> Self {
        IdentityWitness { verdict: false, counterexample: Some(c) }
    }
}

fn scan<I>(a: &Algebra, identity: Identity, tuples: I) -> IdentityWitness
where
    I: IntoIterator<Item = Vec<usize>>,
{
    for idx in tuples {
        let (lhs, rhs) = identity.sides(a, &idx);
        if lhs != rhs {
            return IdentityWitness::fails(Counterexample { identity, indices: idx, lhs, rhs });
        }
    }
    IdentityWitness::holds()
}

fn all_tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut idx = vec![0; len];
        for slot in idx.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        idx
    })
}

fn quadratic_tuples(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).flat_map(move |i| {
        (i..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| vec![i, j, k, l])))
    })
}

/// `e_i e_i = 0` and `e_i e_j = -e_j e_i`; equivalent to `x^2 = 0` in odd characteristic.
pub fn is_anticommutative(a: &Algebra) -> IdentityWitness {
    let n = a.dim();
    let pairs = (0..n).flat_map(move |i| (i..n).map(move |j| vec![i, j]));
    scan(a, Identity::Anticommutative, pairs)
}

/// Jacobi identity on basis triples `i < j < k`; requires anticommutativity.
pub fn is_lie(a: &Algebra) -> IdentityWitness {
    let anti = is_anticommutative(a);
    if !anti.verdict {
        return anti;
    }
    let n = a.dim();
    let triples = (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| vec![i, j, k]))
    });
    scan(a, Identity::Jacobi, triples)
}

/// Anticommutativity followed by the multilinear identity `Id4`.
pub fn is_malcev(a: &Algebra) -> IdentityWitness {
    check_identity(a, Identity::Id4)
}

/// Checks one identity. `Id1..Id4` include `x^2 = 0`, whose failure is
/// reported as an [`Identity::Anticommutative`] counterexample.
pub fn check_identity(a: &Algebra, which: Identity) -> IdentityWitness {
    let n = a.dim();
    match which {
        Identity::Anticommutative => is_anticommutative(a),
        Identity::Jacobi => is_lie(a),
        Identity::Id5 => scan(a, which, all_tuples(n, 4)),
        Identity::Id4 => {
            let anti = is_anticommutative(a);
            if !anti.verdict {
                return anti;
            }
            scan(a, which, all_tuples(n, 4))
        }
        Identity::Id1 | Identity::Id2 | Identity::Id3 => {
            let anti = is_anticommutative(a);
            if !anti.verdict {
                return anti;
            }
            scan(a, which, quadratic_tuples(n))
        }
    }
}
