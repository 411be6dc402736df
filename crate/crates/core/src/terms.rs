//! Free-magma product terms and rewriting into right and normal products.
//!
//! A term is a binary product tree over named leaves, possibly containing
//! symbolic Jacobian nodes `J(x,y,z)`. Rewrites produce [`TermCombo`]s with
//! rational coefficients; evaluation maps them into a concrete algebra.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::algebra::{Algebra, Element};
use crate::error::TermError;

#[derive(Debug)]
enum Kind {
    Leaf(Arc<str>),
    Mul(MagmaTerm, MagmaTerm),
    Jac(MagmaTerm, MagmaTerm, MagmaTerm),
}

#[derive(Debug)]
struct Inner {
    kind: Kind,
    len: usize,
    has_jac: bool,
    // leaf ".", product "(LR)", jacobian "[XYZ]"
    shape: Box<str>,
}

/// Immutable, cheaply clonable product tree.
#[derive(Clone, Debug)]
pub struct MagmaTerm(Arc<Inner>);

/// Borrowed view of the root of a term.
#[derive(Clone, Copy, Debug)]
pub enum TermView<'a> {
    Leaf(&'a str),
    Mul(&'a MagmaTerm, &'a MagmaTerm),
    Jac(&'a MagmaTerm, &'a MagmaTerm, &'a MagmaTerm),
}

impl MagmaTerm {
    pub fn leaf(symbol: &str) -> Self {
        MagmaTerm(Arc::new(Inner { kind: Kind::Leaf(Arc::from(symbol)), len: 1, has_jac: false, shape: Box::from(".") }))
    }

    pub fn mul(left: &MagmaTerm, right: &MagmaTerm) -> Self {
        let shape = format!("({}{})", left.0.shape, right.0.shape).into_boxed_str();
        MagmaTerm(Arc::new(Inner {
            len: left.len() + right.len(),
            has_jac: left.has_jacobian() || right.has_jacobian(),
            shape,
            kind: Kind::Mul(left.clone(), right.clone()),
        }))
    }

    pub fn jac(x: &MagmaTerm, y: &MagmaTerm, z: &MagmaTerm) -> Self {
        let shape = format!("[{}{}{}]", x.0.shape, y.0.shape, z.0.shape).into_boxed_str();
        MagmaTerm(Arc::new(Inner {
            len: x.len() + y.len() + z.len(),
            has_jac: true,
            shape,
            kind: Kind::Jac(x.clone(), y.clone(), z.clone()),
        }))
    }

    /// `((s_1 s_2) ...) s_m` for `symbols = [s_1, ..., s_m]`.
    pub fn right_product(symbols: &[&str]) -> Self {
        let (first, rest) = symbols.split_first().expect("at least one symbol");
        rest.iter().fold(MagmaTerm::leaf(first), |acc, s| MagmaTerm::mul(&acc, &MagmaTerm::leaf(s)))
    }

    /// `s_1 (s_2 (... s_m))` for `symbols = [s_1, ..., s_m]`.
    pub fn left_product(symbols: &[&str]) -> Self {
        let (last, rest) = symbols.split_last().expect("at least one symbol");
        rest.iter().rev().fold(MagmaTerm::leaf(last), |acc, s| MagmaTerm::mul(&MagmaTerm::leaf(s), &acc))
    }

    pub fn view(&self) -> TermView<'_> {
        match &self.0.kind {
            Kind::Leaf(s) => TermView::Leaf(s),
            Kind::Mul(l, r) => TermView::Mul(l, r),
            Kind::Jac(x, y, z) => TermView::Jac(x, y, z),
        }
    }

    /// Number of leaves, including leaves below Jacobian nodes.
    pub fn len(&self) -> usize {
        self.0.len
    }

    /// Always false; a term has at least one leaf.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.0.kind, Kind::Leaf(_))
    }

    pub fn is_jacobian(&self) -> bool {
        matches!(self.0.kind, Kind::Jac(..))
    }

    pub fn has_jacobian(&self) -> bool {
        self.0.has_jac
    }

    /// Node-shape encoding: `.` for a leaf, `(LR)` for a product, `[XYZ]` for a Jacobian.
    pub fn shape(&self) -> &str {
        &self.0.shape
    }

    /// Leaf symbols in preorder.
    pub fn leaves(&self) -> Leaves<'_> {
        Leaves { stack: vec![self] }
    }

    fn children(&self) -> Option<(&MagmaTerm, &MagmaTerm)> {
        match &self.0.kind {
            Kind::Mul(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Left-combed with leaf right factors; a single leaf counts.
    pub fn is_right_product(&self) -> bool {
        let mut t = self;
        loop {
            match &t.0.kind {
                Kind::Leaf(_) => return true,
                Kind::Mul(l, r) if r.is_leaf() => t = l,
                _ => return false,
            }
        }
    }

    /// Right-combed with leaf left factors; a single leaf counts.
    pub fn is_left_product(&self) -> bool {
        let mut t = self;
        loop {
            match &t.0.kind {
                Kind::Leaf(_) => return true,
                Kind::Mul(l, r) if l.is_leaf() => t = r,
                _ => return false,
            }
        }
    }

    /// Left-combed product `((S_1 S_2) ...) S_p` of right products `S_i`.
    pub fn is_normal_product(&self) -> bool {
        let mut t = self;
        loop {
            match &t.0.kind {
                Kind::Leaf(_) => return true,
                Kind::Mul(l, r) if r.is_right_product() => t = l,
                _ => return false,
            }
        }
    }

    /// Number of leaves whose symbol is marked.
    pub fn weight(&self, marks: &MarkedAlphabet) -> usize {
        self.leaves().filter(|s| marks.is_marked(s)).count()
    }
}

impl fmt::Display for MagmaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factor(f: &mut fmt::Formatter<'_>, t: &MagmaTerm) -> fmt::Result {
            if t.children().is_some() {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        }
        match self.view() {
            TermView::Leaf(s) => f.write_str(s),
            TermView::Mul(l, r) => {
                factor(f, l)?;
                f.write_str("*")?;
                factor(f, r)
            }
            TermView::Jac(x, y, z) => write!(f, "J({x},{y},{z})"),
        }
    }
}

pub struct Leaves<'a> {
    stack: Vec<&'a MagmaTerm>,
}

impl<'a> Iterator for Leaves<'a> {
    type Item = &'a str;

    fn next(&mut self) -> Option<&'a str> {
        while let Some(t) = self.stack.pop() {
            match &t.0.kind {
                Kind::Leaf(s) => return Some(s),
                Kind::Mul(l, r) => {
                    self.stack.push(r);
                    self.stack.push(l);
                }
                Kind::Jac(x, y, z) => {
                    self.stack.push(z);
                    self.stack.push(y);
                    self.stack.push(x);
                }
            }
        }
        None
    }
}

// Order by (length, preorder leaf symbols, shape).
impl Ord for MagmaTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.len()
            .cmp(&other.len())
            .then_with(|| self.leaves().cmp(other.leaves()))
            .then_with(|| self.shape().cmp(other.shape()))
    }
}

impl PartialOrd for MagmaTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for MagmaTerm {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for MagmaTerm {}

/// Most specific class of a Jacobian-free term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermClass {
    RightProduct,
    NormalProduct,
    LeftProduct,
    General,
}

/// Right products first, then normal products, then left products.
pub fn classify(t: &MagmaTerm) -> Result<TermClass, TermError> {
    if t.has_jacobian() {
        return Err(TermError::JacobianNode);
    }
    Ok(if t.is_right_product() {
        TermClass::RightProduct
    } else if t.is_normal_product() {
        TermClass::NormalProduct
    } else if t.is_left_product() {
        TermClass::LeftProduct
    } else {
        TermClass::General
    })
}

/// Symbols with a marked subset, used to count the weight of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MarkedAlphabet {
    symbols: BTreeSet<String>,
    marked: BTreeSet<String>,
}

impl MarkedAlphabet {
    /// Marked symbols missing from `symbols` are added to it.
    pub fn new<I, J, S, T>(symbols: I, marked: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut symbols: BTreeSet<String> = symbols.into_iter().map(Into::into).collect();
        let marked: BTreeSet<String> = marked.into_iter().map(Into::into).collect();
        symbols.extend(marked.iter().cloned());
        MarkedAlphabet { symbols, marked }
    }

    pub fn is_marked(&self, s: &str) -> bool {
        self.marked.contains(s)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    pub fn marked(&self) -> impl Iterator<Item = &str> {
        self.marked.iter().map(String::as_str)
    }
}

/// `(length, weight)` of `t` relative to `marks`.
pub fn term_stats(t: &MagmaTerm, marks: &MarkedAlphabet) -> (usize, usize) {
    (t.len(), t.weight(marks))
}

/// Formal linear combination of terms with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermCombo {
    terms: BTreeMap<MagmaTerm, BigRational>,
}

impl TermCombo {
    pub fn new() -> Self {
        TermCombo::default()
    }

    pub fn single(t: MagmaTerm) -> Self {
        let mut c = TermCombo::new();
        c.add_term(t, BigRational::one());
        c
    }

    pub fn add_term(&mut self, t: MagmaTerm, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &TermCombo, scale: &BigRational) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * scale);
        }
    }

    pub fn negated(&self) -> TermCombo {
        TermCombo { terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MagmaTerm, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &MagmaTerm) -> BigRational {
        self.terms.get(t).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The combination with every term containing a Jacobian node removed.
    pub fn without_jacobians(&self) -> TermCombo {
        TermCombo { terms: self.terms.iter().filter(|(t, _)| !t.has_jacobian()).map(|(t, c)| (t.clone(), c.clone())).collect() }
    }

    /// The terms containing a Jacobian node.
    pub fn jacobian_part(&self) -> TermCombo {
        TermCombo { terms: self.terms.iter().filter(|(t, _)| t.has_jacobian()).map(|(t, c)| (t.clone(), c.clone())).collect() }
    }
}

impl FromIterator<(MagmaTerm, BigRational)> for TermCombo {
    fn from_iter<I: IntoIterator<Item = (MagmaTerm, BigRational)>>(iter: I) -> Self {
        let mut c = TermCombo::new();
        for (t, k) in iter {
            c.add_term(t, k);
        }
        c
    }
}

impl fmt::Display for TermCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn one() -> BigRational {
    BigRational::one()
}

fn minus_one() -> BigRational {
    -BigRational::one()
}

/// Expands `Q_0 P_0` for a right product `P_0 = ((a_m a_{m-1}) ...) a_1`, `m >= 2`:
///
/// `Q_0 P_0 = Σ_{i=1}^{m-1} (Q_{i-1} P_i) a_i + Q_{m-1} a_m - Σ_{i=1}^{m-1} J(Q_{i-1}, P_i, a_i)`
///
/// where `P_i = ((a_m ...) a_{i+1})` and `Q_i = a_i Q_{i-1}`. Holds in every
/// anticommutative algebra.
pub fn psom_expand(q0: &MagmaTerm, p0: &MagmaTerm) -> Result<TermCombo, TermError> {
    if q0.has_jacobian() || p0.has_jacobian() {
        return Err(TermError::JacobianNode);
    }
    if !p0.is_right_product() || p0.len() < 2 {
        return Err(TermError::NotRightProduct);
    }
    // prefixes[j] = P_{m-1-j}: the right product of the first j+1 leaves
    let mut prefixes = Vec::with_capacity(p0.len());
    let mut leaves = Vec::with_capacity(p0.len());
    let mut t = p0;
    while let Some((l, r)) = t.children() {
        prefixes.push(t.clone());
        leaves.push(r.clone());
        t = l;
    }
    prefixes.push(t.clone());
    leaves.push(t.clone());
    prefixes.reverse();
    // leaves[i - 1] = a_i, prefixes[m - i - 1] = P_i
    let m = p0.len();
    let p = |i: usize| &prefixes[m - i - 1];
    let a = |i: usize| &leaves[i - 1];

    let mut out = TermCombo::new();
    let mut q = q0.clone();
    for i in 1..m {
        out.add_term(MagmaTerm::mul(&MagmaTerm::mul(&q, p(i)), a(i)), one());
        out.add_term(MagmaTerm::jac(&q, p(i), a(i)), minus_one());
        q = MagmaTerm::mul(a(i), &q);
    }
    out.add_term(MagmaTerm::mul(&q, a(m)), one());
    Ok(out)
}

/// How [`to_right_normed_with`] treats a Jacobian multiplied by another factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JacobianMode {
    /// Rewrite `2 J(x,y,z) t = J(t,x,zy) + J(t,y,xz) + J(t,z,yx)`, so every
    /// Jacobian term is a bare Jacobian node. Exact in Malcev algebras.
    Collapse,
    /// Keep `J(..) t` as an unexpanded product. Exact in every
    /// anticommutative algebra; such terms lie in the ideal generated by `J(A,A,A)`.
    Keep,
}

/// Representative of `±t` modulo anticommutativity and the alternating law of
/// `J`: product factors and Jacobian arguments are sorted. `None` when `t` is
/// zero in every anticommutative algebra; the flag is true when `t` equals
/// minus the representative.
fn anticommutative_form(t: &MagmaTerm) -> Option<(bool, MagmaTerm)> {
    match t.view() {
        TermView::Leaf(_) => Some((false, t.clone())),
        TermView::Mul(l, r) => {
            let (sl, l) = anticommutative_form(l)?;
            let (sr, r) = anticommutative_form(r)?;
            match l.cmp(&r) {
                Ordering::Equal => None,
                Ordering::Less => Some((sl ^ sr, MagmaTerm::mul(&l, &r))),
                Ordering::Greater => Some((!(sl ^ sr), MagmaTerm::mul(&r, &l))),
            }
        }
        TermView::Jac(x, y, z) => {
            let (sx, x) = anticommutative_form(x)?;
            let (sy, y) = anticommutative_form(y)?;
            let (sz, z) = anticommutative_form(z)?;
            let mut args = [x, y, z];
            let mut odd = sx ^ sy ^ sz;
            for (i, j) in [(0, 1), (1, 2), (0, 1)] {
                match args[i].cmp(&args[j]) {
                    Ordering::Equal => return None,
                    Ordering::Greater => {
                        args.swap(i, j);
                        odd = !odd;
                    }
                    Ordering::Less => {}
                }
            }
            let [x, y, z] = args;
            Some((odd, MagmaTerm::jac(&x, &y, &z)))
        }
    }
}

// Adds coeff * j for a bare Jacobian node in its anticommutative form.
fn add_jacobian(out: &mut TermCombo, j: &MagmaTerm, coeff: BigRational) {
    if let Some((negate, j)) = anticommutative_form(j) {
        out.add_term(j, if negate { -coeff } else { coeff });
    }
}

// coeff * J(x,y,z) t for a bare Jacobian node.
fn collapse(j: &MagmaTerm, t: &MagmaTerm, coeff: &BigRational, out: &mut TermCombo) {
    let TermView::Jac(x, y, z) = j.view() else {
        unreachable!("collapse on a non-Jacobian term");
    };
    let coeff = &(coeff / int(2));
    add_jacobian(out, &MagmaTerm::jac(t, x, &MagmaTerm::mul(z, y)), coeff.clone());
    add_jacobian(out, &MagmaTerm::jac(t, y, &MagmaTerm::mul(x, z)), coeff.clone());
    add_jacobian(out, &MagmaTerm::jac(t, z, &MagmaTerm::mul(y, x)), coeff.clone());
}

/// Rewrites `t` as right products of the same length plus Jacobian terms,
/// collapsing Jacobians times a factor. See [`JacobianMode::Collapse`].
pub fn to_right_normed(t: &MagmaTerm) -> Result<TermCombo, TermError> {
    to_right_normed_with(t, JacobianMode::Collapse)
}

/// Rewrites `t` as `Σ c_i R_i + (Jacobian terms)` with each `R_i` a right
/// product of length `#t` and the same leaves as `t`.
///
/// Both factors of `t = L R` are rewritten first. A product of right products
/// `L (R' a)` is expanded by the `m = 2` case of [`psom_expand`],
/// `L (R' a) = (L R') a - (L a) R' - J(L, R', a)`, whose products again have a
/// right-product left factor and a shorter right factor. Bare Jacobian terms
/// are reported with arguments sorted up to sign.
pub fn to_right_normed_with(t: &MagmaTerm, mode: JacobianMode) -> Result<TermCombo, TermError> {
    if t.has_jacobian() {
        return Err(TermError::JacobianNode);
    }
    let mut ctx = RightCtx { mode, normalized: BTreeMap::new(), products: BTreeMap::new() };
    Ok(ctx.normalize(t))
}

struct RightCtx {
    mode: JacobianMode,
    normalized: BTreeMap<MagmaTerm, TermCombo>,
    products: BTreeMap<(MagmaTerm, MagmaTerm), TermCombo>,
}

impl RightCtx {
    fn normalize(&mut self, t: &MagmaTerm) -> TermCombo {
        if let Some(c) = self.normalized.get(t) {
            return c.clone();
        }
        let Some((l, r)) = t.children() else {
            return TermCombo::single(t.clone());
        };
        let left = self.normalize(l);
        let right = self.normalize(r);
        let mut out = TermCombo::new();
        for (x, cx) in left.iter() {
            for (y, cy) in right.iter() {
                let c = cx * cy;
                if !x.has_jacobian() && !y.has_jacobian() {
                    let p = self.product(x, y);
                    out.add_scaled(&p, &c);
                } else {
                    self.multiply_jacobian(x, y, c, &mut out);
                }
            }
        }
        self.normalized.insert(t.clone(), out.clone());
        out
    }

    // coeff * x y where x or y contains a Jacobian node.
    fn multiply_jacobian(&self, x: &MagmaTerm, y: &MagmaTerm, coeff: BigRational, out: &mut TermCombo) {
        match self.mode {
            JacobianMode::Collapse if x.is_jacobian() => collapse(x, y, &coeff, out),
            // x J = -J x
            JacobianMode::Collapse if y.is_jacobian() => collapse(y, x, &-coeff, out),
            _ => out.add_term(MagmaTerm::mul(x, y), coeff),
        }
    }

    /// `x y` for right products `x`, `y`.
    fn product(&mut self, x: &MagmaTerm, y: &MagmaTerm) -> TermCombo {
        let Some((rp, a)) = y.children() else {
            return TermCombo::single(MagmaTerm::mul(x, y));
        };
        let key = (x.clone(), y.clone());
        if let Some(c) = self.products.get(&key) {
            return c.clone();
        }
        let mut out = TermCombo::new();
        // (x R') a
        for (k, c) in self.product(x, rp).iter() {
            if k.has_jacobian() {
                self.multiply_jacobian(k, a, c.clone(), &mut out);
            } else {
                out.add_term(MagmaTerm::mul(k, a), c.clone());
            }
        }
        // -(x a) R'
        let xa = MagmaTerm::mul(x, a);
        out.add_scaled(&self.product(&xa, rp), &minus_one());
        add_jacobian(&mut out, &MagmaTerm::jac(x, rp, a), minus_one());
        self.products.insert(key, out.clone());
        out
    }
}

/// Rewrites `t` as a combination of normal products of the same length and
/// leaves, using
/// `(X'x)(Y'y) = ((X'Y')x)y + ((Y'x)y)X' + ((xy)X')Y' + ((yX')Y')x`,
/// an instance of the four-variable Malcev identity. Valid in Malcev algebras.
///
/// Products of two normal products are rewritten recursively with the larger
/// factor on the right; if that revisits a pair still being expanded, the
/// other orientation is tried. [`TermError::RewriteCycle`] is returned if
/// both orientations cycle.
pub fn to_normal_products(t: &MagmaTerm) -> Result<TermCombo, TermError> {
    if t.has_jacobian() {
        return Err(TermError::JacobianNode);
    }
    let mut ctx = NormalCtx::default();
    ctx.normalize(t)
}

#[derive(Default)]
struct NormalCtx {
    memo: BTreeMap<(MagmaTerm, MagmaTerm), TermCombo>,
    active: BTreeSet<(MagmaTerm, MagmaTerm)>,
    normalized: BTreeMap<MagmaTerm, TermCombo>,
}

impl NormalCtx {
    fn normalize(&mut self, t: &MagmaTerm) -> Result<TermCombo, TermError> {
        if let Some(c) = self.normalized.get(t) {
            return Ok(c.clone());
        }
        let Some((l, r)) = t.children() else {
            return Ok(TermCombo::single(t.clone()));
        };
        let left = self.normalize(l)?;
        let right = self.normalize(r)?;
        let mut out = TermCombo::new();
        for (x, cx) in left.iter() {
            for (y, cy) in right.iter() {
                let prod = self.product(x, y)?;
                out.add_scaled(&prod, &(cx * cy));
            }
        }
        self.normalized.insert(t.clone(), out.clone());
        Ok(out)
    }

    /// Normal-product expansion of `X Y` for normal products `X`, `Y`.
    fn product(&mut self, x: &MagmaTerm, y: &MagmaTerm) -> Result<TermCombo, TermError> {
        let key = (x.clone(), y.clone());
        if let Some(c) = self.memo.get(&key) {
            return Ok(c.clone());
        }
        if y.is_right_product() {
            return Ok(TermCombo::single(MagmaTerm::mul(x, y)));
        }
        if x.is_right_product() {
            let mut c = TermCombo::new();
            c.add_term(MagmaTerm::mul(y, x), minus_one());
            return Ok(c);
        }
        let orientations: [bool; 2] = if y.len() >= x.len() { [false, true] } else { [true, false] };
        let mut last_err = TermError::RewriteCycle;
        for flip in orientations {
            let attempt = if flip { self.expand(y, x).map(|c| c.negated()) } else { self.expand(x, y) };
            match attempt {
                Ok(c) => {
                    self.memo.insert(key, c.clone());
                    return Ok(c);
                }
                Err(TermError::RewriteCycle) => last_err = TermError::RewriteCycle,
                Err(e) => return Err(e),
            }
        }
        Err(last_err)
    }

    // One application of the four-term rule to (X'x)(Y'y).
    fn expand(&mut self, x: &MagmaTerm, y: &MagmaTerm) -> Result<TermCombo, TermError> {
        let key = (x.clone(), y.clone());
        if !self.active.insert(key.clone()) {
            return Err(TermError::RewriteCycle);
        }
        let result = self.expand_inner(x, y);
        self.active.remove(&key);
        result
    }

    fn expand_inner(&mut self, x: &MagmaTerm, y: &MagmaTerm) -> Result<TermCombo, TermError> {
        let (xp, xl) = x.children().expect("normal non-right product is a product");
        let (yp, yl) = y.children().expect("normal non-right product is a product");
        let mut out = TermCombo::new();
        // ((X'Y')x)y
        for (k, c) in self.product(xp, yp)?.iter() {
            out.add_term(MagmaTerm::mul(&MagmaTerm::mul(k, xl), yl), c.clone());
        }
        // ((Y'x)y)X'
        let yxy = MagmaTerm::mul(&MagmaTerm::mul(yp, xl), yl);
        out.add_scaled(&self.product(&yxy, xp)?, &one());
        // ((xy)X')Y'
        let xy = MagmaTerm::mul(xl, yl);
        for (k, c) in self.product(&xy, xp)?.iter() {
            let inner = self.product(k, yp)?;
            out.add_scaled(&inner, c);
        }
        // ((yX')Y')x = -((X'y)Y')x
        let xpy = MagmaTerm::mul(xp, yl);
        for (k, c) in self.product(&xpy, yp)?.iter() {
            out.add_term(MagmaTerm::mul(k, xl), -c);
        }
        Ok(out)
    }
}

/// Value of `t` with leaves replaced by `assignment`.
pub fn evaluate(t: &MagmaTerm, assignment: &BTreeMap<String, Element>, a: &Algebra) -> Result<Element, TermError> {
    for v in assignment.values() {
        a.check_element(v)?;
    }
    eval_term(t, assignment, a)
}

fn eval_term(t: &MagmaTerm, assignment: &BTreeMap<String, Element>, a: &Algebra) -> Result<Element, TermError> {
    match t.view() {
        TermView::Leaf(s) => assignment.get(s).cloned().ok_or_else(|| TermError::UnassignedSymbol(s.to_string())),
        TermView::Mul(l, r) => Ok(a.mul(&eval_term(l, assignment, a)?, &eval_term(r, assignment, a)?)),
        TermView::Jac(x, y, z) => {
            Ok(a.jac(&eval_term(x, assignment, a)?, &eval_term(y, assignment, a)?, &eval_term(z, assignment, a)?))
        }
    }
}

/// `Σ c_i value(t_i)` with coefficients mapped into the field of `a`.
pub fn evaluate_combo(c: &TermCombo, assignment: &BTreeMap<String, Element>, a: &Algebra) -> Result<Element, TermError> {
    for v in assignment.values() {
        a.check_element(v)?;
    }
    let mut acc = a.zero();
    let mut memo = BTreeMap::new();
    for (t, k) in c.iter() {
        let coeff = a.field().from_rational(k)?;
        acc.add_scaled(&coeff, &eval_memo(t, assignment, a, &mut memo)?);
    }
    Ok(acc)
}

// Terms of a combination share most subterms; only products are cached.
fn eval_memo(
    t: &MagmaTerm,
    assignment: &BTreeMap<String, Element>,
    a: &Algebra,
    memo: &mut BTreeMap<MagmaTerm, Element>,
) -> Result<Element, TermError> {
    if let Some(v) = memo.get(t) {
        return Ok(v.clone());
    }
    let v = match t.view() {
        TermView::Leaf(s) => return assignment.get(s).cloned().ok_or_else(|| TermError::UnassignedSymbol(s.to_string())),
        TermView::Mul(l, r) => a.mul(&eval_memo(l, assignment, a, memo)?, &eval_memo(r, assignment, a, memo)?),
        TermView::Jac(x, y, z) => a.jac(
            &eval_memo(x, assignment, a, memo)?,
            &eval_memo(y, assignment, a, memo)?,
            &eval_memo(z, assignment, a, memo)?,
        ),
    };
    memo.insert(t.clone(), v.clone());
    Ok(v)
}

/// Parses `((a*b)*c)*(d*e)` or `J(a,b*c,d)`. `*` associates to the left;
/// identifiers match `[A-Za-z_][A-Za-z0-9_]*`.
pub fn parse_term(input: &str) -> Result<MagmaTerm, TermError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let t = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(t)
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> TermError {
        TermError::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), TermError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<MagmaTerm, TermError> {
        let mut t = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let r = self.factor()?;
            t = MagmaTerm::mul(&t, &r);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<MagmaTerm, TermError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(b')')?;
                Ok(t)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let ident = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                if ident == "J" && self.peek() == Some(b'(') {
                    self.pos += 1;
                    let x = self.expr()?;
                    self.expect(b',')?;
                    let y = self.expr()?;
                    self.expect(b',')?;
                    let z = self.expr()?;
                    self.expect(b')')?;
                    return Ok(MagmaTerm::jac(&x, &y, &z));
                }
                Ok(MagmaTerm::leaf(ident))
            }
            Some(_) => Err(self.error("expected identifier or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Every bracketing of `symbols` in order, as Jacobian-free terms.
pub fn all_bracketings(symbols: &[&str]) -> Vec<MagmaTerm> {
    if symbols.len() == 1 {
        return vec![MagmaTerm::leaf(symbols[0])];
    }
    let mut out = Vec::new();
    for i in 1..symbols.len() {
        let lefts = all_bracketings(&symbols[..i]);
        let rights = all_bracketings(&symbols[i..]);
        for l in &lefts {
            for r in &rights {
                out.push(MagmaTerm::mul(l, r));
            }
        }
    }
    out
}

/// A uniformly split random bracketing of `symbols` in order.
pub fn random_bracketing<R: Rng + ?Sized>(symbols: &[&str], rng: &mut R) -> MagmaTerm {
    if symbols.len() == 1 {
        return MagmaTerm::leaf(symbols[0]);
    }
    let i = rng.random_range(1..symbols.len());
    MagmaTerm::mul(&random_bracketing(&symbols[..i], rng), &random_bracketing(&symbols[i..], rng))
}

/// Integer coefficient as a rational.
pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
