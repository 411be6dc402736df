//! Power filtrations of an ideal, `J_k`-nilpotence and the strong nilpotence bound.
//!
//! Index conventions: the `n`-th term of a power filtration is `B^n` with
//! `B^1 = B`, so the zero subspace has index 1. The `B_k` chain starts at
//! `B_0 = A`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::algebra::{Algebra, Element};
use crate::error::NilpotenceError;
use crate::field::FieldSpec;
use crate::identities;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiltrationKind {
    RightPowers,
    LeftPowers,
    AssocPowers,
    StrongPowers,
    BkChain,
}

impl FiltrationKind {
    pub fn name(self) -> &'static str {
        match self {
            FiltrationKind::RightPowers => "right",
            FiltrationKind::LeftPowers => "left",
            FiltrationKind::AssocPowers => "assoc",
            FiltrationKind::StrongPowers => "strong",
            FiltrationKind::BkChain => "bk",
        }
    }
}

/// Outcome of a search for the first vanishing term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NilIndex {
    /// First index whose term is zero.
    Index(usize),
    /// The sequence reached a nonzero fixpoint.
    Never,
    /// Cap reached without a zero term or a fixpoint.
    Unknown,
}

impl NilIndex {
    pub fn index(self) -> Option<usize> {
        match self {
            NilIndex::Index(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for NilIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NilIndex::Index(n) => write!(f, "{n}"),
            NilIndex::Never => f.write_str("never"),
            NilIndex::Unknown => f.write_str("unknown"),
        }
    }
}

/// Computed prefix of a filtration.
///
/// `terms[i]` is the term of index `start + i`. When `stabilized` holds, the
/// last term repeats forever. When `nil_index` is set, the last term is zero,
/// and so are all later ones when `zero_absorbing` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationChain<'a> {
    pub kind: FiltrationKind,
    pub start: usize,
    pub terms: Vec<Subspace<'a>>,
    pub stabilized: bool,
    pub nil_index: Option<usize>,
    pub zero_absorbing: bool,
}

impl<'a> FiltrationChain<'a> {
    /// Term of index `n`, including terms implied by a fixpoint or a zero term.
    pub fn term(&self, n: usize) -> Option<&Subspace<'a>> {
        let i = n.checked_sub(self.start)?;
        if i < self.terms.len() {
            return self.terms.get(i);
        }
        if self.stabilized || (self.nil_index.is_some() && self.zero_absorbing) {
            self.terms.last()
        } else {
            None
        }
    }

    /// Largest index whose term is available through [`FiltrationChain::term`]
    /// without extrapolation.
    pub fn last_index(&self) -> usize {
        self.start + self.terms.len() - 1
    }

    pub fn outcome(&self) -> NilIndex {
        match (self.nil_index, self.stabilized) {
            (Some(n), _) => NilIndex::Index(n),
            (None, true) => NilIndex::Never,
            (None, false) => NilIndex::Unknown,
        }
    }
}

/// Default number of terms: a strictly decreasing chain in dimension `d` has at most `d + 1` terms.
pub fn default_cap(a: &Algebra) -> usize {
    a.dim() + 1
}

fn simple_chain<'a, F>(kind: FiltrationKind, b: &Subspace<'a>, max_n: usize, mut step: F) -> FiltrationChain<'a>
where
    F: FnMut(&Subspace<'a>) -> Subspace<'a>,
{
    let mut chain = FiltrationChain { kind, start: 1, terms: vec![b.clone()], stabilized: false, nil_index: None, zero_absorbing: true };
    loop {
        let n = chain.last_index();
        let last = chain.terms.last().expect("chain is never empty");
        if last.is_zero() {
            chain.nil_index = Some(n);
            return chain;
        }
        if n >= max_n.max(1) {
            return chain;
        }
        let next = step(last);
        let fixed = next == *last;
        chain.terms.push(next);
        if fixed {
            chain.stabilized = true;
            return chain;
        }
    }
}

/// `B^1 = B`, `B^{n+1} = B^n B`.
pub fn right_powers<'a>(b: &Subspace<'a>, max_n: usize) -> FiltrationChain<'a> {
    simple_chain(FiltrationKind::RightPowers, b, max_n, |t| t.product_unchecked(b))
}

/// `¹B = B`, `ⁿ⁺¹B = B ⁿB`.
pub fn left_powers<'a>(b: &Subspace<'a>, max_n: usize) -> FiltrationChain<'a> {
    simple_chain(FiltrationKind::LeftPowers, b, max_n, |t| b.product_unchecked(t))
}

// Chains where term n is built from all splits n = i + (n - i). If terms k..2k
// coincide then every later term equals them, so the check runs at even n.
fn split_chain<'a, F>(kind: FiltrationKind, b: &Subspace<'a>, max_n: usize, absorbing: bool, mut finish: F) -> FiltrationChain<'a>
where
    F: FnMut(Subspace<'a>) -> Subspace<'a>,
{
    let a = b.algebra();
    let mut chain =
        FiltrationChain { kind, start: 1, terms: vec![b.clone()], stabilized: false, nil_index: None, zero_absorbing: absorbing };
    loop {
        let n = chain.last_index();
        if chain.terms[n - 1].is_zero() {
            chain.nil_index = Some(n);
            return chain;
        }
        if n.is_multiple_of(2) && chain.terms[n / 2 - 1..].windows(2).all(|w| w[0] == w[1]) {
            chain.stabilized = true;
            return chain;
        }
        if n >= max_n.max(1) {
            return chain;
        }
        let m = n + 1;
        let mut acc = Subspace::zero(a);
        for i in 1..m {
            let (u, v) = (&chain.terms[i - 1], &chain.terms[m - i - 1]);
            if u.is_zero() || v.is_zero() || acc.is_full() {
                continue;
            }
            acc = acc.sum_unchecked(&u.product_unchecked(v));
        }
        chain.terms.push(finish(acc));
    }
}

/// `B^{{1}} = B`, `B^{{n}} = Σ_{i=1}^{n-1} B^{{i}} B^{{n-i}}`: all bracketings of `n` factors from `B`.
pub fn assoc_powers<'a>(b: &Subspace<'a>, max_n: usize) -> FiltrationChain<'a> {
    let subalgebra = b.product_unchecked(b).is_subspace_of(b);
    split_chain(FiltrationKind::AssocPowers, b, max_n, subalgebra, |s| s)
}

/// `B^{<1>} = B`, `B^{<n>}` the ideal generated by `Σ_{i=1}^{n-1} B^{<i>} B^{<n-i>}`:
/// sums of products of elements of `A` with at least `n` factors in `B`.
pub fn strong_powers<'a>(b: &Subspace<'a>, max_n: usize) -> Result<FiltrationChain<'a>, NilpotenceError> {
    if !b.is_ideal() {
        return Err(NilpotenceError::NotAnIdeal);
    }
    Ok(split_chain(FiltrationKind::StrongPowers, b, max_n, true, |s| s.ideal_closure()))
}

/// `B_0 = A`, `B_1 = B`, `B_k = B^k + J(B,A,A)`; each term is checked to be
/// an ideal contained in its predecessor.
pub fn bk_chain<'a>(b: &Subspace<'a>, max_k: usize) -> Result<FiltrationChain<'a>, NilpotenceError> {
    if !b.is_ideal() {
        return Err(NilpotenceError::NotAnIdeal);
    }
    let a = b.algebra();
    let full = Subspace::full(a);
    let jac = b.jacobian_span_unchecked(&full, &full);
    let mut chain = FiltrationChain {
        kind: FiltrationKind::BkChain,
        start: 0,
        terms: vec![full, b.clone()],
        stabilized: false,
        nil_index: None,
        zero_absorbing: true,
    };
    let mut power = b.clone();
    let mut k = 1;
    loop {
        if chain.terms[k].is_zero() {
            chain.nil_index = Some(k);
            break;
        }
        if k >= max_k.max(1) {
            break;
        }
        let next_power = power.product_unchecked(b);
        let power_fixed = next_power == power;
        power = next_power;
        k += 1;
        chain.terms.push(power.sum_unchecked(&jac));
        if power_fixed {
            chain.stabilized = true;
            break;
        }
    }
    for (k, w) in chain.terms.windows(2).enumerate() {
        if !w[1].is_ideal() {
            return Err(NilpotenceError::Internal(format!("B_{} is not an ideal", k + 1)));
        }
        if !w[1].is_subspace_of(&w[0]) {
            return Err(NilpotenceError::Internal(format!("B_{} is not contained in B_{}", k + 1, k)));
        }
    }
    Ok(chain)
}

/// `D_(A,k) = (..((D A) A)..) A` with `k` factors of `A`.
pub fn d_suffix<'a>(d: &Subspace<'a>, k: usize) -> Subspace<'a> {
    let full = Subspace::full(d.algebra());
    let mut s = d.clone();
    for _ in 0..k {
        if s.is_zero() {
            break;
        }
        let next = s.product_unchecked(&full);
        if next == s {
            break;
        }
        s = next;
    }
    s
}

/// Least `k` in `1..=max_k` with `J(B,A,A)_(A,k) = 0`.
pub fn jk_nil_index(b: &Subspace<'_>, max_k: usize) -> Result<NilIndex, NilpotenceError> {
    if !b.is_ideal() {
        return Err(NilpotenceError::NotAnIdeal);
    }
    let full = Subspace::full(b.algebra());
    let mut d = b.jacobian_span_unchecked(&full, &full);
    for k in 1..=max_k.max(1) {
        let next = d.product_unchecked(&full);
        if next.is_zero() {
            return Ok(NilIndex::Index(k));
        }
        if next == d {
            return Ok(NilIndex::Never);
        }
        d = next;
    }
    Ok(NilIndex::Unknown)
}

/// `4n^2 - 2n + 1`.
pub fn strong_bound(n: usize) -> usize {
    4 * n * n - 2 * n + 1
}

/// Named consistency check recorded in a report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotenceReport {
    pub dim: usize,
    pub field: FieldSpec,
    pub ideal_basis: Vec<String>,
    pub cap: usize,
    pub right_index: NilIndex,
    pub left_index: NilIndex,
    pub assoc_index: NilIndex,
    pub strong_index: NilIndex,
    pub jk_nil_index: NilIndex,
    pub bound_4n2: Option<usize>,
    pub bound_satisfied: Option<bool>,
    pub checks: Vec<CheckResult>,
}

impl NilpotenceReport {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Report with the default cap.
pub fn nilpotence_report(b: &Subspace<'_>) -> Result<NilpotenceReport, NilpotenceError> {
    nilpotence_report_with_cap(b, default_cap(b.algebra()))
}

/// Computes the four power filtrations of the ideal `B` of a Malcev algebra,
/// its `J_k` index and the bound `4n^2 - 2n + 1` for right index `n`.
///
/// Right, left and `B_k` chains run for `cap` terms. The split-based chains
/// run for `2 * cap` terms so that a fixpoint window can be observed, and for
/// at least `4n^2 - 2n + 1` terms once the right index `n` is known.
pub fn nilpotence_report_with_cap(b: &Subspace<'_>, cap: usize) -> Result<NilpotenceReport, NilpotenceError> {
    let a = b.algebra();
    if !identities::is_malcev(a).verdict {
        return Err(NilpotenceError::NotMalcev);
    }
    if !b.is_ideal() {
        return Err(NilpotenceError::NotAnIdeal);
    }
    let cap = cap.max(1);
    let right = right_powers(b, cap);
    let left = left_powers(b, cap);
    let bound = right.nil_index.map(strong_bound);
    let split_cap = (2 * cap).max(bound.unwrap_or(0));
    let assoc = assoc_powers(b, split_cap);
    let strong = strong_powers(b, split_cap)?;
    let bk = bk_chain(b, cap)?;
    let jk = jk_nil_index(b, cap)?;

    let mut checks = Vec::new();

    let upto = right.last_index().max(assoc.last_index()).max(strong.last_index());
    let mut chain_ok = true;
    let mut detail = String::new();
    for k in 1..=upto {
        if let (Some(r), Some(s), Some(t)) = (right.term(k), assoc.term(k), strong.term(k)) {
            if !r.is_subspace_of(s) || !s.is_subspace_of(t) {
                chain_ok = false;
                detail = format!("fails at k = {k}");
                break;
            }
        }
    }
    checks.push(CheckResult { name: "inclusion B^k <= B^{k} <= B^<k>", passed: chain_ok, detail });

    let mut product_ok = true;
    let mut detail = String::new();
    'outer: for i in 1..=strong.last_index() {
        for j in 1..=strong.last_index() {
            if let (Some(u), Some(v), Some(w)) = (strong.term(i), strong.term(j), strong.term(i + j)) {
                if !u.product_unchecked(v).is_subspace_of(w) {
                    product_ok = false;
                    detail = format!("fails at i = {i}, j = {j}");
                    break 'outer;
                }
            }
        }
    }
    checks.push(CheckResult { name: "B^<i> B^<j> <= B^<i+j>", passed: product_ok, detail });

    let anti = identities::is_anticommutative(a).verdict;
    let same = !anti || (0..right.terms.len().max(left.terms.len())).all(|i| right.term(i + 1) == left.term(i + 1));
    checks.push(CheckResult { name: "left and right powers coincide", passed: same, detail: String::new() });

    let verdicts = [right.outcome(), assoc.outcome(), strong.outcome()];
    let defined = verdicts.iter().filter(|v| matches!(v, NilIndex::Index(_))).count();
    let never = verdicts.iter().filter(|v| matches!(v, NilIndex::Never)).count();
    let applies = b.is_full() || matches!(jk, NilIndex::Index(_));
    let agree = !applies || !(defined > 0 && never > 0);
    checks.push(CheckResult {
        name: "nilpotence verdicts agree",
        passed: agree,
        detail: if applies { String::new() } else { String::from("not applicable") },
    });

    let ordered = match (right.outcome(), assoc.outcome(), strong.outcome()) {
        (NilIndex::Index(r), NilIndex::Index(s), NilIndex::Index(t)) => r <= s && s <= t,
        _ => true,
    };
    checks.push(CheckResult { name: "right <= assoc <= strong", passed: ordered, detail: String::new() });

    let dims: Vec<String> = bk.terms.iter().map(|t| format!("{}", t.dim())).collect();
    checks.push(CheckResult {
        name: "B_k ideals and descending",
        passed: true,
        detail: format!("dims {}", dims.join(" ")),
    });

    let bound_satisfied = bound.map(|bd| matches!(strong.outcome(), NilIndex::Index(s) if s <= bd));
    if let Some(ok) = bound_satisfied {
        checks.push(CheckResult { name: "strong index within bound", passed: ok, detail: String::new() });
    }

    Ok(NilpotenceReport {
        dim: a.dim(),
        field: a.field(),
        ideal_basis: b.basis_strings(),
        cap,
        right_index: right.outcome(),
        left_index: left.outcome(),
        assoc_index: assoc.outcome(),
        strong_index: strong.outcome(),
        jk_nil_index: jk,
        bound_4n2: bound,
        bound_satisfied,
        checks,
    })
}

/// Result of a randomized membership check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub samples: usize,
    pub skipped: bool,
    pub failure: Option<String>,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn random_combination<R: Rng + ?Sized>(s: &Subspace<'_>, rng: &mut R) -> Element {
    let a = s.algebra();
    let mut v = a.zero();
    loop {
        for r in s.basis() {
            let c = a.field().from_i64(rng.random_range(-3..=3));
            v.add_scaled(&c, r);
        }
        if !v.is_zero() || s.is_zero() {
            return v;
        }
    }
}

/// Evaluates a right product `((x_m x_{m-1}) ...) x_1` of `m` factors, `weight`
/// of them random elements of `B` at random positions and the rest random elements of `A`.
fn random_right_product<R: Rng + ?Sized>(b: &Subspace<'_>, m: usize, weight: usize, rng: &mut R) -> Element {
    let a = b.algebra();
    let full = Subspace::full(a);
    let mut in_b = vec![false; m];
    let mut placed = 0;
    while placed < weight {
        let p = rng.random_range(0..m);
        if !in_b[p] {
            in_b[p] = true;
            placed += 1;
        }
    }
    let mut acc: Option<Element> = None;
    for &from_b in &in_b {
        let x = if from_b { random_combination(b, rng) } else { random_combination(&full, rng) };
        acc = Some(match acc {
            None => x,
            Some(p) => a.mul(&p, &x),
        });
    }
    acc.expect("m >= 1")
}

/// Right products of weight at least `n` relative to `B` lie in `B_n`.
pub fn check_lemma_bn<R: Rng + ?Sized>(b: &Subspace<'_>, max_n: usize, samples: usize, rng: &mut R) -> Result<LemmaCheck, NilpotenceError> {
    let bk = bk_chain(b, max_n)?;
    let mut check = LemmaCheck { name: "lemma-bn", samples: 0, skipped: false, failure: None };
    for s in 0..samples {
        let n = 1 + s % max_n.max(1);
        let weight = n + rng.random_range(0..=1);
        let m = weight + rng.random_range(0..=3);
        let p = random_right_product(b, m, weight, rng);
        let target = bk.term(n).cloned().unwrap_or_else(|| bk_term_direct(b, n));
        check.samples += 1;
        if !target.contains(&p) {
            check.failure = Some(format!("sample {s}: length {m}, weight {weight} not in B_{n}"));
            break;
        }
    }
    Ok(check)
}

fn bk_term_direct<'a>(b: &Subspace<'a>, n: usize) -> Subspace<'a> {
    let full = Subspace::full(b.algebra());
    let mut power = b.clone();
    for _ in 1..n {
        power = power.product_unchecked(b);
    }
    if n <= 1 {
        return power;
    }
    power.sum_unchecked(&b.jacobian_span_unchecked(&full, &full))
}

/// If `B` is `J_k`-nil and `l >= k`, right products of weight at least `2l`
/// lie in `(B^l)_(A,k)`. Skipped when no `k` is found within `max_k`.
pub fn check_lemma_laqt<R: Rng + ?Sized>(b: &Subspace<'_>, max_k: usize, samples: usize, rng: &mut R) -> Result<LemmaCheck, NilpotenceError> {
    let mut check = LemmaCheck { name: "lemma-laqt", samples: 0, skipped: false, failure: None };
    let NilIndex::Index(k) = jk_nil_index(b, max_k)? else {
        check.skipped = true;
        return Ok(check);
    };
    let right = right_powers(b, k + 3);
    for s in 0..samples {
        let l = k + s % 3;
        let weight = 2 * l + rng.random_range(0..=1);
        let m = weight + rng.random_range(0..=2);
        let p = random_right_product(b, m, weight, rng);
        let power = match right.term(l) {
            Some(t) => t.clone(),
            None => (1..l).fold(b.clone(), |t, _| t.product_unchecked(b)),
        };
        let target = d_suffix(&power, k);
        check.samples += 1;
        if !target.contains(&p) {
            check.failure = Some(format!("sample {s}: length {m}, weight {weight} not in (B^{l})_(A,{k})"));
            break;
        }
    }
    Ok(check)
}
