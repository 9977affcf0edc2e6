//! Infinitesimal sets `D`, `D₂`, `D̃₂`, `DN₁`, `DN₂`, the three i-structures on a
//! chart, and samplers for generic tuples.
//!
//! Every multilinear form on `Rⁿ` is a rational combination of coordinate
//! products, so "φ vanishes for all ℓ-linear φ" is decided by checking that the
//! coordinate products vanish. For the i-structures the differences
//! `P_i − P_j` all lie in the span of `d_i = P_i − P_1`, and the defining
//! conditions are multilinear, so it suffices to check products of coordinates
//! of the `d_i`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sample::Sampler;
use crate::weil::{AlgebraSignature, Monomial, Vector, WeilElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IStructureKind {
    NilSquare,
    FirstOrder,
    SecondOrder,
}

impl IStructureKind {
    pub const ALL: [IStructureKind; 3] = [
        IStructureKind::NilSquare,
        IStructureKind::FirstOrder,
        IStructureKind::SecondOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IStructureKind::NilSquare => "nil_square",
            IStructureKind::FirstOrder => "first_order",
            IStructureKind::SecondOrder => "second_order",
        }
    }
}

impl fmt::Display for IStructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// True when every product `a·b` with `a ∈ xs`, `b ∈ ys` vanishes.
fn pairs_vanish(xs: &[WeilElement], ys: &[WeilElement]) -> bool {
    xs.iter().all(|a| ys.iter().all(|b| (a * b).is_zero()))
}

/// True when every product `a·b·c` over the three lists vanishes.
fn triples_vanish(xs: &[WeilElement], ys: &[WeilElement], zs: &[WeilElement]) -> bool {
    xs.iter().all(|a| {
        ys.iter().all(|b| {
            let ab = a * b;
            ab.is_zero() || zs.iter().all(|c| (&ab * c).is_zero())
        })
    })
}

/// All triple products within one pool, taken with repetition but without order.
fn pool_triples_vanish(pool: &[WeilElement]) -> bool {
    for i in 0..pool.len() {
        for j in i..pool.len() {
            let ab = &pool[i] * &pool[j];
            if ab.is_zero() {
                continue;
            }
            if pool[j..].iter().any(|c| !(&ab * c).is_zero()) {
                return false;
            }
        }
    }
    true
}

fn pool_pairs_vanish(pool: &[WeilElement]) -> bool {
    (0..pool.len()).all(|i| pool[i..].iter().all(|b| (&pool[i] * b).is_zero()))
}

/// `v ∈ D(n)`: all coordinate products `v_i v_j` vanish.
pub fn in_d(v: &Vector) -> bool {
    pool_pairs_vanish(v.entries())
}

/// Triple products in a pool, using that at cap ≤ 3 they vanish exactly for
/// pools of infinitesimals (a nonzero constant term cubes to a nonzero constant).
fn second_order_pool(pool: &[WeilElement]) -> bool {
    if pool.is_empty() {
        return true;
    }
    let infinitesimal = pool.iter().all(WeilElement::is_infinitesimal);
    if !infinitesimal {
        return false;
    }
    if pool[0].signature().cap() <= 3 {
        return true;
    }
    pool_triples_vanish(pool)
}

/// `v ∈ D₂(n)`: all triple coordinate products vanish.
pub fn in_d2(v: &Vector) -> bool {
    second_order_pool(v.entries())
}

fn check_dims(a: &Vector, b: &Vector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if !a.same_signature(b) {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

/// `(v, w) ∈ D̃₂(2,Rⁿ)`: every product `x_j x_k y_ℓ` with `x, y ∈ {v, w}` vanishes,
/// i.e. all triple products of the combined coordinates.
pub fn in_dtilde2(v: &Vector, w: &Vector) -> Result<bool> {
    check_dims(v, w)?;
    Ok(second_order_pool(v.concat(w)?.entries()))
}

/// `(v₁, v₂) ∈ DN₁`: both in `D` and every mixed product `v₁ᵢ v₂ⱼ` vanishes.
pub fn in_dn1(v1: &Vector, v2: &Vector) -> Result<bool> {
    check_dims(v1, v2)?;
    Ok(in_d(v1) && in_d(v2) && pairs_vanish(v1.entries(), v2.entries()))
}

/// `(v₁, v₂, v₃) ∈ DN₂`: all in `D₂` and every mixed product `v₁ᵢ v₂ⱼ v₃ₖ` vanishes.
pub fn in_dn2(v1: &Vector, v2: &Vector, v3: &Vector) -> Result<bool> {
    check_dims(v1, v2)?;
    check_dims(v1, v3)?;
    Ok(in_d2(v1) && in_d2(v2) && in_d2(v3) && triples_vanish(v1.entries(), v2.entries(), v3.entries()))
}

/// An ordered tuple `⟨P₁,…,P_m⟩` of points over one signature and dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointTuple {
    points: Vec<Vector>,
}

impl PointTuple {
    pub fn new(points: Vec<Vector>) -> Result<Self> {
        if let Some(first) = points.first() {
            for p in &points[1..] {
                check_dims(first, p)?;
            }
        }
        Ok(PointTuple { points })
    }

    pub fn empty() -> Self {
        PointTuple { points: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Vector {
        &self.points[i]
    }

    pub fn into_points(self) -> Vec<Vector> {
        self.points
    }

    /// `⟨P_{h(1)},…,P_{h(m')}⟩` for a map `h: m' → m`.
    pub fn reindex(&self, h: &[usize]) -> PointTuple {
        PointTuple {
            points: h.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// The tuple with `p` prepended.
    pub fn with_first(&self, p: Vector) -> Result<PointTuple> {
        let mut points = Vec::with_capacity(self.len() + 1);
        points.push(p);
        points.extend(self.points.iter().cloned());
        PointTuple::new(points)
    }

    /// `⟨(P₁,Q₁),…,(P_m,Q_m)⟩` from `⟨P₁,Q₁,…,P_m,Q_m⟩`, as points of `V × V`.
    pub fn paired(&self) -> Result<PointTuple> {
        if !self.len().is_multiple_of(2) {
            return Err(Error::Precondition("pairing needs an even number of points".into()));
        }
        let points = self
            .points
            .chunks(2)
            .map(|c| c[0].concat(&c[1]))
            .collect::<Result<Vec<_>>>()?;
        PointTuple::new(points)
    }

    /// Coordinates of all differences `P_i − P_1`.
    fn difference_pool(&self) -> Vec<WeilElement> {
        let base = &self.points[0];
        self.points[1..]
            .iter()
            .flat_map(|p| (p - base).entries().to_vec())
            .collect()
    }
}

/// Membership of a tuple in `V⟨m⟩`, `V₁⟨m⟩` or `V₂⟨m⟩`.
pub fn in_istructure(kind: IStructureKind, tuple: &PointTuple) -> bool {
    if tuple.len() <= 1 {
        return true;
    }
    match kind {
        IStructureKind::NilSquare => {
            let pts = tuple.points();
            (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| in_d(&(&pts[j] - &pts[i]))))
        }
        IStructureKind::FirstOrder => pool_pairs_vanish(&tuple.difference_pool()),
        IStructureKind::SecondOrder => second_order_pool(&tuple.difference_pool()),
    }
}

/// Generators of a signature partitioned into free generators and square-zero
/// blocks, handed out without reuse.
#[derive(Clone, Debug)]
pub struct GeneratorPool {
    sig: Arc<AlgebraSignature>,
    free: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl GeneratorPool {
    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        &self.sig
    }

    pub fn take_free(&mut self, k: usize) -> Result<Vec<usize>> {
        if self.free.len() < k {
            return Err(Error::SignatureTooSmall {
                what: "free generators".into(),
                required: k,
                available: self.free.len(),
            });
        }
        Ok(self.free.drain(..k).collect())
    }

    /// Takes a whole square-zero block of at least `k` generators.
    pub fn take_block(&mut self, k: usize) -> Result<Vec<usize>> {
        match self.blocks.iter().position(|b| b.len() >= k) {
            Some(i) => Ok(self.blocks.remove(i)),
            None => Err(Error::SignatureTooSmall {
                what: "square-zero block".into(),
                required: k,
                available: self.blocks.iter().map(Vec::len).max().unwrap_or(0),
            }),
        }
    }

    pub fn remaining_free(&self) -> usize {
        self.free.len()
    }
}

/// Plans a signature with `free` unconstrained generators and a list of
/// square-zero blocks.
#[derive(Clone, Debug, Default)]
pub struct AlgebraLayout {
    free: usize,
    blocks: Vec<usize>,
}

impl AlgebraLayout {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn free(mut self, k: usize) -> Self {
        self.free += k;
        self
    }

    pub fn block(mut self, size: usize) -> Self {
        self.blocks.push(size);
        self
    }

    /// Adds what [`sample_generic`] needs for `m` points of the given kind.
    pub fn for_tuple(self, kind: IStructureKind, m: usize) -> Self {
        match kind {
            IStructureKind::SecondOrder => self.free(generators_per_point() * m),
            _ => self.block(m.max(1)),
        }
    }

    pub fn generators(&self) -> usize {
        self.free + self.blocks.iter().sum::<usize>()
    }

    pub fn build(&self, cap: usize) -> Result<GeneratorPool> {
        let total = self.generators().max(1);
        let mut builder = AlgebraSignature::builder(total, cap);
        let mut next = self.free;
        let mut blocks = Vec::new();
        for &size in &self.blocks {
            let block: Vec<usize> = (next..next + size).collect();
            builder = builder.square_zero_block(&block);
            blocks.push(block);
            next += size;
        }
        Ok(GeneratorPool {
            sig: builder.build()?,
            free: (0..self.free).collect(),
            blocks,
        })
    }
}

/// Fresh free generators spent on each second-order sample point.
pub const fn generators_per_point() -> usize {
    2
}

/// A random element of the span of `gens` plus, when `quadratic`, random
/// quadratic terms in them.
pub fn random_infinitesimal(
    sig: &Arc<AlgebraSignature>,
    gens: &[usize],
    quadratic: bool,
    sampler: &mut Sampler,
) -> WeilElement {
    let mut terms = Vec::new();
    for (a, &g) in gens.iter().enumerate() {
        terms.push((Monomial::generator(g), sampler.rational()));
        if quadratic {
            for &h in &gens[a..] {
                terms.push((Monomial::from_generators([g, h]), sampler.rational()));
            }
        }
    }
    WeilElement::from_terms(sig, terms)
}

/// A random vector of infinitesimals over `gens`.
pub fn random_displacement(
    sig: &Arc<AlgebraSignature>,
    n: usize,
    gens: &[usize],
    quadratic: bool,
    sampler: &mut Sampler,
) -> Vector {
    Vector::new(
        (0..n)
            .map(|_| random_infinitesimal(sig, gens, quadratic, sampler))
            .collect(),
    )
    .expect("n ≥ 1")
}

/// Samples `⟨P₁,…,P_m⟩` in the given i-structure around `base`.
///
/// Each second-order point gets its own pair of free generators and a random
/// displacement with linear and quadratic terms in them. Nil-square and first-order points are drawn from one
/// square-zero block, so the tuple is first-order (and hence nil-square).
pub fn sample_generic(
    kind: IStructureKind,
    base: &Vector,
    m: usize,
    pool: &mut GeneratorPool,
    sampler: &mut Sampler,
) -> Result<PointTuple> {
    if !Arc::ptr_eq(base.signature(), &pool.sig) {
        return Err(Error::SignatureMismatch);
    }
    let sig = pool.sig.clone();
    let n = base.dim();
    let mut points = Vec::with_capacity(m);
    match kind {
        IStructureKind::SecondOrder => {
            let gens = pool.take_free(generators_per_point() * m)?;
            for chunk in gens.chunks(generators_per_point()) {
                points.push(base + &random_displacement(&sig, n, chunk, true, sampler));
            }
        }
        IStructureKind::NilSquare | IStructureKind::FirstOrder => {
            if m == 0 {
                return Ok(PointTuple::empty());
            }
            let block = pool.take_block(m)?;
            for _ in 0..m {
                points.push(base + &random_displacement(&sig, n, &block, false, sampler));
            }
        }
    }
    PointTuple::new(points)
}

/// Signature with `blocks` square-zero blocks of `size` generators each, where
/// `x_i y_i = 0` and `x_i y_j + x_j y_i = 0` for any two blocks `x`, `y`.
/// Block `b` uses generators `b·size .. (b+1)·size`.
pub fn alternating_blocks(blocks: usize, size: usize, cap: usize) -> Result<Arc<AlgebraSignature>> {
    let one = crate::rational::int(1);
    let g = |b: usize, i: usize| b * size + i;
    let mut builder = AlgebraSignature::builder(blocks * size, cap);
    for b in 0..blocks {
        let block: Vec<usize> = (0..size).map(|i| g(b, i)).collect();
        builder = builder.square_zero_block(&block);
    }
    for s in 0..blocks {
        for t in s + 1..blocks {
            for i in 0..size {
                builder = builder.forbid(g(s, i), g(t, i));
                for j in i + 1..size {
                    builder = builder.relation(&[((g(s, i), g(t, j)), one.clone()), ((g(s, j), g(t, i)), one.clone())]);
                }
            }
        }
    }
    builder.build()
}

fn block_vector(sig: &Arc<AlgebraSignature>, block: usize, size: usize) -> Vector {
    Vector::new(
        (0..size)
            .map(|i| WeilElement::generator(sig, block * size + i).expect("in range"))
            .collect(),
    )
    .expect("size ≥ 1")
}

/// `⟨P, P+x, P+y⟩` in `V⟨3⟩ \ V₁⟨3⟩` for `V = R²` at cap 3, where `x`, `y`
/// are alternating square-zero blocks. `base` supplies the rational point `P`.
pub fn witness_nil_square_not_first_order(base: &[crate::Rational; 2]) -> PointTuple {
    let sig = alternating_blocks(2, 2, 3).expect("valid layout");
    let p = Vector::constant(&sig, base);
    let x = block_vector(&sig, 0, 2);
    let y = block_vector(&sig, 1, 2);
    PointTuple::new(vec![p.clone(), &p + &x, &p + &y]).expect("shared signature")
}

/// `⟨P, P+x, P+y, P+z⟩` in `V⟨4⟩ \ V₂⟨4⟩` for `V = R³` at cap 4: a nil-square
/// triple in the monad of `P` whose differences have the surviving product
/// `x₁y₂z₃`.
pub fn witness_nil_square_monad_not_second_order(base: &[crate::Rational; 3]) -> PointTuple {
    let sig = alternating_blocks(3, 3, 4).expect("valid layout");
    let p = Vector::constant(&sig, base);
    let pts = (0..3).map(|b| &p + &block_vector(&sig, b, 3));
    PointTuple::new(std::iter::once(p.clone()).chain(pts).collect()).expect("shared signature")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::weil::make_algebra;

    fn gen(sig: &Arc<AlgebraSignature>, i: usize) -> WeilElement {
        WeilElement::generator(sig, i).unwrap()
    }

    fn vec_of(entries: Vec<WeilElement>) -> Vector {
        Vector::new(entries).unwrap()
    }

    #[test]
    fn cap_three_shortcut_matches_brute_force() {
        let mut s = Sampler::new(31, 50);
        for layout in [vec![], vec![(0, 0), (1, 1)], vec![(0, 1), (2, 2), (1, 3)]] {
            let sig = make_algebra(4, 3, &layout).unwrap();
            for _ in 0..20 {
                let pool: Vec<WeilElement> = (0..4)
                    .map(|_| {
                        let x = random_infinitesimal(&sig, &[0, 1, 2, 3], s.coin(), &mut s);
                        if s.index(4) == 0 {
                            &x + &WeilElement::constant(&sig, s.nonzero_rational())
                        } else {
                            x
                        }
                    })
                    .collect();
                assert_eq!(second_order_pool(&pool), pool_triples_vanish(&pool));
            }
        }
    }

    #[test]
    fn d_examples() {
        let sig = make_algebra(1, 3, &[(0, 0)]).unwrap();
        let eps = gen(&sig, 0);
        assert!(in_d(&vec_of(vec![eps.scale(&int(2)), eps.scale(&int(-3))])));
        let sig = make_algebra(1, 3, &[]).unwrap();
        assert!(!in_d(&vec_of(vec![gen(&sig, 0), WeilElement::zero(&sig)])));
        assert!(in_d(&Vector::zeros(&sig, 3)));
    }

    #[test]
    fn d2_examples() {
        let sig = make_algebra(2, 3, &[]).unwrap();
        let (e1, e2) = (gen(&sig, 0), gen(&sig, 1));
        assert!(in_d2(&vec_of(vec![e1.clone(), e2.clone()])));
        let one = WeilElement::one(&sig);
        assert!(!in_d2(&vec_of(vec![&one + &e1, WeilElement::zero(&sig)])));
        assert!(in_d2(&vec_of(vec![&e1 * &e2, &e2 * &e2])));
    }

    #[test]
    fn d2_at_higher_cap_uses_products() {
        let sig = make_algebra(1, 4, &[]).unwrap();
        assert!(!in_d2(&vec_of(vec![gen(&sig, 0)])));
        let sig = make_algebra(2, 4, &[(0, 0)]).unwrap();
        assert!(in_d2(&vec_of(vec![gen(&sig, 0)])));
    }

    #[test]
    fn dtilde2_examples() {
        let sig = make_algebra(4, 3, &[]).unwrap();
        let v = vec_of(vec![gen(&sig, 0), gen(&sig, 1)]);
        let w = vec_of(vec![gen(&sig, 2), gen(&sig, 3)]);
        assert!(in_dtilde2(&v, &w).unwrap());
        let one = WeilElement::one(&sig);
        let shifted = vec_of(vec![&one + &gen(&sig, 0), gen(&sig, 1)]);
        assert!(!in_dtilde2(&shifted, &w).unwrap());
        assert!(in_dtilde2(&Vector::zeros(&sig, 2), &w).unwrap());
        assert!(in_dtilde2(&v, &Vector::zeros(&sig, 3)).is_err());
    }

    #[test]
    fn dn_examples() {
        let sig = make_algebra(2, 3, &[(0, 0)]).unwrap();
        let e1 = gen(&sig, 0);
        let v1 = vec_of(vec![e1.scale(&int(2)), e1.scale(&int(5))]);
        let v2 = vec_of(vec![e1.scale(&int(-1)), e1.scale(&int(7))]);
        assert!(in_dn1(&v1, &v2).unwrap());

        let sig = make_algebra(2, 3, &[(0, 0), (1, 1)]).unwrap();
        let u = [int(1), int(2)];
        let v1 = vec_of(u.iter().map(|c| gen(&sig, 0).scale(c)).collect());
        let v2 = vec_of(u.iter().map(|c| gen(&sig, 1).scale(c)).collect());
        assert!(in_d(&v1) && in_d(&v2));
        assert!(!in_dn1(&v1, &v2).unwrap());

        let sig = make_algebra(3, 3, &[]).unwrap();
        let t: Vec<Vector> = (0..3).map(|i| vec_of(vec![gen(&sig, i)])).collect();
        assert!(in_dn2(&t[0], &t[1], &t[2]).unwrap());
    }

    #[test]
    fn short_tuples_are_in_every_structure() {
        let sig = make_algebra(1, 3, &[]).unwrap();
        let p = Vector::constant(&sig, &[int(1), int(2)]);
        for kind in IStructureKind::ALL {
            assert!(in_istructure(kind, &PointTuple::empty()));
            assert!(in_istructure(kind, &PointTuple::new(vec![p.clone()]).unwrap()));
        }
    }

    #[test]
    fn samplers_hit_their_structure() {
        let mut s = Sampler::new(5, 1000);
        for kind in IStructureKind::ALL {
            let mut pool = AlgebraLayout::new().for_tuple(kind, 3).build(3).unwrap();
            let sig = pool.signature().clone();
            let base = Vector::constant(&sig, &s.rationals(3));
            let t = sample_generic(kind, &base, 3, &mut pool, &mut s).unwrap();
            assert_eq!(t.len(), 3);
            assert!(in_istructure(kind, &t), "{kind}");
        }
    }

    #[test]
    fn sampler_reports_missing_generators() {
        let mut pool = AlgebraLayout::new().free(2).build(3).unwrap();
        let sig = pool.signature().clone();
        let base = Vector::zeros(&sig, 2);
        let mut s = Sampler::new(1, 10);
        let err = sample_generic(IStructureKind::SecondOrder, &base, 3, &mut pool, &mut s);
        assert!(matches!(
            err,
            Err(Error::SignatureTooSmall { required, available: 2, .. }) if required == 3 * generators_per_point()
        ));
    }

    #[test]
    fn stored_witnesses() {
        let t = witness_nil_square_not_first_order(&[int(1), int(-2)]);
        assert!(in_istructure(IStructureKind::NilSquare, &t));
        assert!(!in_istructure(IStructureKind::FirstOrder, &t));
        assert!(in_istructure(IStructureKind::SecondOrder, &t));

        let t = witness_nil_square_monad_not_second_order(&[int(0), int(3), int(1)]);
        assert!(in_istructure(IStructureKind::NilSquare, &t));
        assert!(!in_istructure(IStructureKind::SecondOrder, &t));
        // The three non-base points alone still form a second-order triple.
        assert!(in_istructure(IStructureKind::SecondOrder, &t.reindex(&[1, 2, 3])));
    }
}
