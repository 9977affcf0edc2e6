//! Truncated nilpotent polynomial algebras over ℚ.
//!
//! An [`AlgebraSignature`] describes the quotient
//! `ℚ[e₁,…,e_k] / (monomials of degree ≥ cap, forbidden quadratics, relations)`.
//! Elements are stored sparsely over the standard monomials of that quotient,
//! so two elements are equal exactly when their term maps are equal.
//!
//! Besides forbidden quadratic monomials a signature may carry homogeneous
//! quadratic linear relations such as `e₁e₄ + e₂e₃ = 0`. Their consequences
//! below the cap are worked out once, degree by degree, by exact row
//! reduction; the resulting table rewrites every non-standard monomial into
//! standard ones.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::linalg::row_reduce;
use crate::rational::{self, write_term, Rational};

/// A monomial `e_{i₁}⋯e_{i_d}`, stored as its sorted list of generator indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[u16; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn generator(i: usize) -> Self {
        Monomial(SmallVec::from_slice(&[i as u16]))
    }

    pub fn from_generators<I: IntoIterator<Item = usize>>(gens: I) -> Self {
        let mut v: SmallVec<[u16; 4]> = gens.into_iter().map(|g| g as u16).collect();
        v.sort_unstable();
        Monomial(v)
    }

    /// Builds a monomial from an exponent vector `(a₁,…,a_k)`.
    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut v = SmallVec::new();
        for (g, &a) in exps.iter().enumerate() {
            for _ in 0..a {
                v.push(g as u16);
            }
        }
        Monomial(v)
    }

    pub fn exponents(&self, generators: usize) -> Vec<u32> {
        let mut e = vec![0; generators];
        for &g in &self.0 {
            e[g as usize] += 1;
        }
        e
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&g| g as usize)
    }

    pub fn exponent(&self, g: usize) -> u32 {
        self.0.iter().filter(|&&x| x as usize == g).count() as u32
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// The monomial with one occurrence of `g` removed, if `g` divides it.
    pub fn divide_by_generator(&self, g: usize) -> Option<Monomial> {
        let pos = self.0.iter().position(|&x| x as usize == g)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Monomial(v))
    }

    fn has_quadratic_divisor(&self, forbidden: &HashSet<(u16, u16)>) -> bool {
        let g = &self.0;
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                if forbidden.contains(&(g[i], g[j])) {
                    return true;
                }
            }
        }
        false
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut e = 1;
            while i + e < self.0.len() && self.0[i + e] == g {
                e += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "e{}", g + 1)?;
            } else {
                write!(f, "e{}^{}", g + 1, e)?;
            }
            i += e;
        }
        Ok(())
    }
}

/// Enumerates all monomials of exactly degree `d` in `k` generators.
pub(crate) fn monomials_of_degree(k: usize, d: usize) -> Vec<Monomial> {
    fn go(k: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if cur.len() == d {
            out.push(Monomial::from_generators(cur.iter().copied()));
            return;
        }
        for g in start..k {
            cur.push(g);
            go(k, d, g, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, d, 0, &mut Vec::with_capacity(d), &mut out);
    out
}

type Combination = Vec<(Monomial, Rational)>;

/// Presentation of a truncated Weil algebra.
pub struct AlgebraSignature {
    generators: usize,
    cap: usize,
    forbidden: HashSet<(u16, u16)>,
    relations: Vec<Combination>,
    /// Normal forms of every non-standard monomial below the cap; only present
    /// when linear relations are declared.
    rewrite: Option<HashMap<Monomial, Combination>>,
}

/// Normal form of a single monomial.
pub(crate) enum Reduced<'a> {
    Basis,
    Zero,
    Combination(&'a [(Monomial, Rational)]),
}

impl AlgebraSignature {
    pub fn builder(generators: usize, cap: usize) -> SignatureBuilder {
        SignatureBuilder {
            generators,
            cap,
            forbidden: BTreeSet::new(),
            relations: Vec::new(),
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Forbidden generator pairs `(i, j)` with `i ≤ j`, 0-based.
    pub fn forbidden(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.forbidden.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        v.sort_unstable();
        v
    }

    pub fn has_relations(&self) -> bool {
        !self.relations.is_empty()
    }

    pub fn is_basis(&self, m: &Monomial) -> bool {
        if m.degree() >= self.cap || m.generators().any(|g| g >= self.generators) {
            return false;
        }
        match &self.rewrite {
            Some(table) => !table.contains_key(m),
            None => !m.has_quadratic_divisor(&self.forbidden),
        }
    }

    pub(crate) fn reduce(&self, m: &Monomial) -> Reduced<'_> {
        if m.degree() >= self.cap {
            return Reduced::Zero;
        }
        match &self.rewrite {
            Some(table) => match table.get(m) {
                None => Reduced::Basis,
                Some(c) if c.is_empty() => Reduced::Zero,
                Some(c) => Reduced::Combination(c),
            },
            None if m.has_quadratic_divisor(&self.forbidden) => Reduced::Zero,
            None => Reduced::Basis,
        }
    }

    /// All standard monomials, ordered by degree then lexicographically.
    pub fn basis(&self) -> Vec<Monomial> {
        (0..self.cap)
            .flat_map(|d| monomials_of_degree(self.generators, d))
            .filter(|m| self.is_basis(m))
            .collect()
    }

    pub(crate) fn same_as(&self, other: &AlgebraSignature) -> bool {
        std::ptr::eq(self, other)
            || (self.generators == other.generators
                && self.cap == other.cap
                && self.forbidden == other.forbidden
                && self.relations == other.relations)
    }

    fn accumulate(&self, acc: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        match self.reduce(&m) {
            Reduced::Basis => add_term(acc, m, c),
            Reduced::Zero => {}
            Reduced::Combination(comb) => {
                for (t, a) in comb {
                    add_term(acc, t.clone(), rational::mul(&c, a));
                }
            }
        }
    }
}

impl fmt::Debug for AlgebraSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraSignature")
            .field("generators", &self.generators)
            .field("cap", &self.cap)
            .field("forbidden", &self.forbidden())
            .field("relations", &self.relations.len())
            .finish()
    }
}

fn add_term(acc: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = rational::add(e.get(), &c);
            *e.get_mut() = sum;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Accumulates forbidden quadratics and linear relations before the normal-form
/// table is computed.
#[derive(Clone, Debug)]
pub struct SignatureBuilder {
    generators: usize,
    cap: usize,
    forbidden: BTreeSet<(usize, usize)>,
    relations: Vec<Vec<((usize, usize), Rational)>>,
}

impl SignatureBuilder {
    /// Declares `e_i e_j = 0`.
    pub fn forbid(mut self, i: usize, j: usize) -> Self {
        self.forbidden.insert((i.min(j), i.max(j)));
        self
    }

    /// Declares every product within `gens` (squares included) to be zero.
    pub fn square_zero_block(mut self, gens: &[usize]) -> Self {
        for (a, &i) in gens.iter().enumerate() {
            for &j in &gens[a..] {
                self = self.forbid(i, j);
            }
        }
        self
    }

    /// Declares `Σ c·e_i e_j = 0`.
    pub fn relation(mut self, terms: &[((usize, usize), Rational)]) -> Self {
        self.relations.push(terms.to_vec());
        self
    }

    pub fn build(self) -> Result<Arc<AlgebraSignature>> {
        if self.generators == 0 {
            return Err(Error::NoGenerators);
        }
        if self.cap == 0 {
            return Err(Error::InvalidCap);
        }
        let k = self.generators;
        let check = |i: usize| {
            if i >= k {
                Err(Error::GeneratorOutOfRange {
                    index: i,
                    generators: k,
                })
            } else {
                Ok(())
            }
        };
        for &(i, j) in &self.forbidden {
            check(i)?;
            check(j)?;
        }
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut acc = BTreeMap::new();
            for &((i, j), ref c) in rel {
                check(i)?;
                check(j)?;
                add_term(&mut acc, Monomial::from_generators([i, j]), c.clone());
            }
            if acc.is_empty() {
                return Err(Error::InvalidRelation(format!("{rel:?}")));
            }
            relations.push(acc.into_iter().collect::<Combination>());
        }
        let forbidden: HashSet<(u16, u16)> = self.forbidden.iter().map(|&(a, b)| (a as u16, b as u16)).collect();
        let rewrite = if relations.is_empty() {
            None
        } else {
            Some(rewrite_table(k, self.cap, &forbidden, &relations))
        };
        Ok(Arc::new(AlgebraSignature {
            generators: k,
            cap: self.cap,
            forbidden,
            relations,
            rewrite,
        }))
    }
}

/// Row-reduces the degree-`d` part of the ideal for each `2 ≤ d < cap` and
/// records the normal form of every monomial that is not standard.
fn rewrite_table(
    k: usize,
    cap: usize,
    forbidden: &HashSet<(u16, u16)>,
    relations: &[Combination],
) -> HashMap<Monomial, Combination> {
    let mut table = HashMap::new();
    for d in 2..cap {
        let mut live = Vec::new();
        for m in monomials_of_degree(k, d) {
            if m.has_quadratic_divisor(forbidden) {
                table.insert(m, Vec::new());
            } else {
                live.push(m);
            }
        }
        // Pivot on the largest monomials first so they get rewritten into smaller ones.
        live.reverse();
        let column: HashMap<&Monomial, usize> = live.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for cofactor in monomials_of_degree(k, d - 2) {
            for rel in relations {
                let mut row = vec![Rational::zero(); live.len()];
                let mut nonzero = false;
                for (m, c) in rel {
                    if let Some(&col) = column.get(&m.mul(&cofactor)) {
                        row[col] += c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
        let pivots = row_reduce(&mut rows, live.len());
        for (row, &p) in rows.iter().zip(&pivots) {
            let comb: Combination = row
                .iter()
                .enumerate()
                .filter(|&(c, x)| c != p && !x.is_zero())
                .map(|(c, x)| (live[c].clone(), -x))
                .collect();
            table.insert(live[p].clone(), comb);
        }
    }
    table
}

/// `make_algebra(k, cap, forbidden)`: the signature with `k` generators,
/// truncation at total degree `cap` and the given forbidden quadratics
/// (0-based generator pairs).
pub fn make_algebra(generators: usize, cap: usize, forbidden: &[(usize, usize)]) -> Result<Arc<AlgebraSignature>> {
    forbidden
        .iter()
        .fold(AlgebraSignature::builder(generators, cap), |b, &(i, j)| b.forbid(i, j))
        .build()
}

/// An element of a truncated Weil algebra.
#[derive(Clone)]
pub struct WeilElement {
    sig: Arc<AlgebraSignature>,
    terms: BTreeMap<Monomial, Rational>,
}

impl WeilElement {
    pub fn zero(sig: &Arc<AlgebraSignature>) -> Self {
        WeilElement {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: &Arc<AlgebraSignature>) -> Self {
        Self::constant(sig, Rational::one())
    }

    pub fn constant(sig: &Arc<AlgebraSignature>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, Monomial::one(), c);
        WeilElement {
            sig: sig.clone(),
            terms,
        }
    }

    pub fn generator(sig: &Arc<AlgebraSignature>, i: usize) -> Result<Self> {
        if i >= sig.generators {
            return Err(Error::GeneratorOutOfRange {
                index: i,
                generators: sig.generators,
            });
        }
        Ok(Self::from_terms(sig, [(Monomial::generator(i), Rational::one())]))
    }

    /// Builds an element from arbitrary monomials; anything outside the basis is
    /// reduced to normal form (or dropped when it lies in the ideal).
    pub fn from_terms<I>(sig: &Arc<AlgebraSignature>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            if m.generators().any(|g| g >= sig.generators) {
                continue;
            }
            sig.accumulate(&mut acc, m, c);
        }
        WeilElement {
            sig: sig.clone(),
            terms: acc,
        }
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// True when the element lies in the augmentation ideal (zero constant term).
    pub fn is_infinitesimal(&self) -> bool {
        !self.terms.contains_key(&Monomial::one())
    }

    /// Lowest total degree among stored terms; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Drops every term of degree above `max_degree`.
    pub fn truncated(&self, max_degree: usize) -> WeilElement {
        WeilElement {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of a basis monomial.
    pub fn coeff(&self, m: &Monomial) -> Result<Rational> {
        if !self.sig.is_basis(m) {
            return Err(Error::MonomialOutsideBasis(m.to_string()));
        }
        Ok(self.terms.get(m).cloned().unwrap_or_else(Rational::zero))
    }

    fn check_sig(&self, other: &WeilElement) -> Result<()> {
        if self.sig.same_as(&other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    pub fn checked_add(&self, other: &WeilElement) -> Result<WeilElement> {
        self.check_sig(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        Ok(WeilElement {
            sig: self.sig.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &WeilElement) -> Result<WeilElement> {
        self.check_sig(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), -c);
        }
        Ok(WeilElement {
            sig: self.sig.clone(),
            terms,
        })
    }

    pub fn checked_mul(&self, other: &WeilElement) -> Result<WeilElement> {
        self.check_sig(other)?;
        let cap = self.sig.cap;
        let mut acc = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                // Terms are ordered by degree, so the rest of this row is truncated too.
                if m1.degree() + m2.degree() >= cap {
                    break;
                }
                self.sig.accumulate(&mut acc, m1.mul(m2), rational::mul(c1, c2));
            }
        }
        Ok(WeilElement {
            sig: self.sig.clone(),
            terms: acc,
        })
    }

    pub fn scale(&self, r: &Rational) -> WeilElement {
        if r.is_zero() {
            return Self::zero(&self.sig);
        }
        WeilElement {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), rational::mul(c, r)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> WeilElement {
        let mut out = Self::one(&self.sig);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Multiplicative inverse `c⁻¹(1 − m + m² − …)` of `x = c(1 + m)`.
    pub fn invert(&self) -> Result<WeilElement> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let c_inv = c.recip();
        let one = Self::one(&self.sig);
        let minus_m = &one - &self.scale(&c_inv);
        let mut power = one.clone();
        let mut sum = one;
        for _ in 1..self.sig.cap {
            power = &power * &minus_m;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(sum.scale(&c_inv))
    }
}

impl PartialEq for WeilElement {
    fn eq(&self, other: &Self) -> bool {
        self.sig.same_as(&other.sig) && self.terms == other.terms
    }
}

impl Eq for WeilElement {}

impl fmt::Debug for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let name = if m.degree() == 0 { String::new() } else { m.to_string() };
            write_term(&mut out, i == 0, c, &name);
        }
        write!(f, "{out}")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $ty:ty) => {
        impl $trait<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, WeilElement);
binop!(Sub, sub, checked_sub, WeilElement);
binop!(Mul, mul, checked_mul, WeilElement);

impl Neg for &WeilElement {
    type Output = WeilElement;
    fn neg(self) -> WeilElement {
        WeilElement {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for WeilElement {
    type Output = WeilElement;
    fn neg(self) -> WeilElement {
        -&self
    }
}

/// An `n`-tuple of Weil elements over one signature: a point of the chart `Rⁿ`.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    entries: Vec<WeilElement>,
}

impl Vector {
    pub fn new(entries: Vec<WeilElement>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::EmptyVector);
        };
        if entries.iter().any(|e| !e.sig.same_as(&first.sig)) {
            return Err(Error::SignatureMismatch);
        }
        Ok(Vector { entries })
    }

    /// A point with rational coordinates. Panics on an empty slice.
    pub fn constant(sig: &Arc<AlgebraSignature>, coords: &[Rational]) -> Self {
        assert!(!coords.is_empty(), "vectors need at least one coordinate");
        Vector {
            entries: coords.iter().map(|c| WeilElement::constant(sig, c.clone())).collect(),
        }
    }

    pub fn zeros(sig: &Arc<AlgebraSignature>, n: usize) -> Self {
        assert!(n > 0, "vectors need at least one coordinate");
        Vector {
            entries: vec![WeilElement::zero(sig); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.entries[0].sig
    }

    pub fn entries(&self) -> &[WeilElement] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WeilElement> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(WeilElement::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(WeilElement::is_constant)
    }

    pub fn constant_part(&self) -> Vec<Rational> {
        self.entries.iter().map(WeilElement::constant_term).collect()
    }

    /// True when every coordinate has zero constant term.
    pub fn is_infinitesimal(&self) -> bool {
        self.entries.iter().all(WeilElement::is_infinitesimal)
    }

    /// Lowest degree over all coordinates; `None` for the zero vector.
    pub fn order(&self) -> Option<usize> {
        self.entries.iter().filter_map(WeilElement::order).min()
    }

    pub fn truncated(&self, max_degree: usize) -> Vector {
        Vector {
            entries: self.entries.iter().map(|e| e.truncated(max_degree)).collect(),
        }
    }

    fn check(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if !self.signature().same_as(other.signature()) {
            return Err(Error::SignatureMismatch);
        }
        Ok(())
    }

    pub fn same_signature(&self, other: &Vector) -> bool {
        self.signature().same_as(other.signature())
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector> {
        self.check(other)?;
        Ok(Vector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Vector) -> Result<Vector> {
        self.check(other)?;
        Ok(Vector {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, r: &Rational) -> Vector {
        Vector {
            entries: self.entries.iter().map(|e| e.scale(r)).collect(),
        }
    }

    pub fn scale_by(&self, w: &WeilElement) -> Vector {
        Vector {
            entries: self.entries.iter().map(|e| w * e).collect(),
        }
    }

    /// `(self, other)` as a point of the direct sum.
    pub fn concat(&self, other: &Vector) -> Result<Vector> {
        if !self.same_signature(other) {
            return Err(Error::SignatureMismatch);
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Vector { entries })
    }

    pub fn split_at(&self, n: usize) -> (Vector, Vector) {
        assert!(n > 0 && n < self.dim());
        (
            Vector {
                entries: self.entries[..n].to_vec(),
            },
            Vector {
                entries: self.entries[n..].to_vec(),
            },
        )
    }
}

impl Index<usize> for Vector {
    type Output = WeilElement;
    fn index(&self, i: usize) -> &WeilElement {
        &self.entries[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

binop!(Add, add, checked_add, Vector);
binop!(Sub, sub, checked_sub, Vector);

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector {
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn gen(sig: &Arc<AlgebraSignature>, i: usize) -> WeilElement {
        WeilElement::generator(sig, i).unwrap()
    }

    fn c(sig: &Arc<AlgebraSignature>, r: Rational) -> WeilElement {
        WeilElement::constant(sig, r)
    }

    #[test]
    fn basis_enumeration() {
        let sig = make_algebra(1, 3, &[]).unwrap();
        assert_eq!(
            sig.basis(),
            vec![Monomial::one(), Monomial::generator(0), Monomial::from_exponents(&[2])]
        );
        let sig = make_algebra(2, 3, &[(0, 0)]).unwrap();
        let names: Vec<String> = sig.basis().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["1", "e1", "e2", "e1*e2", "e2^2"]);
        let sig = make_algebra(2, 2, &[]).unwrap();
        assert_eq!(sig.basis().len(), 3);
    }

    #[test]
    fn invalid_signatures() {
        assert_eq!(make_algebra(0, 3, &[]).unwrap_err(), Error::NoGenerators);
        assert_eq!(make_algebra(2, 0, &[]).unwrap_err(), Error::InvalidCap);
        assert!(matches!(
            make_algebra(2, 3, &[(0, 2)]),
            Err(Error::GeneratorOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn multiplication_examples() {
        let sig = make_algebra(2, 3, &[]).unwrap();
        let one = WeilElement::one(&sig);
        let x = &one + &gen(&sig, 0);
        assert_eq!((&x * &x).to_string(), "1 + 2*e1 + e1^2");
        let s = &gen(&sig, 0) + &gen(&sig, 1);
        let p = &gen(&sig, 0) * &gen(&sig, 1);
        assert!((&s * &p).is_zero());

        let sig = make_algebra(1, 3, &[(0, 0)]).unwrap();
        let a = gen(&sig, 0).scale(&rat(1, 2));
        let b = gen(&sig, 0).scale(&rat(1, 3));
        assert!((&a * &b).is_zero());
    }

    #[test]
    fn inverse_examples() {
        let sig = make_algebra(1, 3, &[]).unwrap();
        let x = &WeilElement::one(&sig) + &gen(&sig, 0);
        assert_eq!(x.invert().unwrap().to_string(), "1 - e1 + e1^2");
        assert_eq!(c(&sig, int(2)).invert().unwrap(), c(&sig, rat(1, 2)));
        assert!(matches!(gen(&sig, 0).invert(), Err(Error::NotInvertible(_))));

        let sig = make_algebra(2, 3, &[]).unwrap();
        let x = &(&WeilElement::one(&sig) + &gen(&sig, 0)) + &gen(&sig, 1);
        let inv = x.invert().unwrap();
        assert_eq!(inv.to_string(), "1 - e1 - e2 + e1^2 + 2*e1*e2 + e2^2");
        assert_eq!(&x * &inv, WeilElement::one(&sig));
    }

    #[test]
    fn coefficients() {
        let sig = make_algebra(2, 3, &[(0, 0)]).unwrap();
        let one = WeilElement::one(&sig);
        let x = &one + &gen(&sig, 0).scale(&int(2));
        assert_eq!(x.coeff(&Monomial::generator(0)).unwrap(), int(2));
        assert_eq!(WeilElement::zero(&sig).coeff(&Monomial::generator(1)).unwrap(), int(0));
        let y = &(&one + &gen(&sig, 0)) * &(&one + &gen(&sig, 1));
        assert_eq!(y.coeff(&Monomial::from_generators([0, 1])).unwrap(), int(1));
        assert!(matches!(
            y.coeff(&Monomial::from_exponents(&[2, 0])),
            Err(Error::MonomialOutsideBasis(_))
        ));
    }

    #[test]
    fn signature_mismatch_is_reported() {
        let a = make_algebra(1, 3, &[]).unwrap();
        let b = make_algebra(2, 3, &[]).unwrap();
        assert_eq!(
            WeilElement::one(&a).checked_mul(&WeilElement::one(&b)),
            Err(Error::SignatureMismatch)
        );
    }

    #[test]
    fn linear_relations_reduce_products() {
        // x1 y2 + x2 y1 = 0 with both blocks square-zero and x_i y_i = 0.
        let sig = AlgebraSignature::builder(4, 3)
            .square_zero_block(&[0, 1])
            .square_zero_block(&[2, 3])
            .forbid(0, 2)
            .forbid(1, 3)
            .relation(&[((0, 3), int(1)), ((1, 2), int(1))])
            .build()
            .unwrap();
        let (x1, x2, y1, y2) = (gen(&sig, 0), gen(&sig, 1), gen(&sig, 2), gen(&sig, 3));
        let a = &x1 * &y2;
        let b = &x2 * &y1;
        assert!(!a.is_zero());
        assert_eq!(a, -b);
        assert_eq!(sig.basis().len(), 1 + 4 + 1);
    }

    #[test]
    fn alternating_relations_survive_in_degree_three() {
        // Blocks x, y, z of size 3 whose mixed products are alternating.
        let blocks = [[0usize, 1, 2], [3, 4, 5], [6, 7, 8]];
        let mut b = AlgebraSignature::builder(9, 4);
        for blk in &blocks {
            b = b.square_zero_block(blk);
        }
        for s in 0..3 {
            for t in s + 1..3 {
                for i in 0..3 {
                    b = b.forbid(blocks[s][i], blocks[t][i]);
                    for j in i + 1..3 {
                        b = b.relation(&[
                            ((blocks[s][i], blocks[t][j]), int(1)),
                            ((blocks[s][j], blocks[t][i]), int(1)),
                        ]);
                    }
                }
            }
        }
        let sig = b.build().unwrap();
        let g = |i| gen(&sig, i);
        let xyz = |a: usize, b: usize, c: usize| &(&g(a) * &g(3 + b)) * &g(6 + c);
        let base = xyz(0, 1, 2);
        assert!(!base.is_zero());
        // The product x_a y_b z_c is the sign of the permutation (a, b, c).
        assert_eq!(xyz(1, 0, 2), -&base);
        assert_eq!(xyz(1, 2, 0), base);
        assert_eq!(xyz(2, 1, 0), -&base);
        assert!(xyz(0, 0, 2).is_zero());
        // Degree-three basis is one-dimensional.
        assert_eq!(sig.basis().iter().filter(|m| m.degree() == 3).count(), 1);
    }
}
