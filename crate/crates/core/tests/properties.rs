use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use sdg_core::connection::{chart_lambda, Connection, ConnectionSymbol, Mode, TorsionForm};
use sdg_core::igroup::{IGroupOnD2, InfinitesimalGroup, MonadGroup, MulPath};
use sdg_core::rational::{add, mul, sub};
use sdg_core::sample::{Sampler, DEFAULT_RANGE};
use sdg_core::spaces::{in_istructure, sample_generic, AlgebraLayout, IStructureKind, PointTuple};
use sdg_core::tensor::Bilinear;
use sdg_core::weil::{make_algebra, AlgebraSignature, Vector, WeilElement};
use sdg_core::Rational;

const R: i64 = 1_000_000;

fn rational() -> impl Strategy<Value = Rational> {
    (-R..=R, 1..=R).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
}

/// Products of a few sampled rationals, so operands span several machine words.
fn wide_rational() -> impl Strategy<Value = Rational> {
    prop::collection::vec(rational(), 1..8).prop_map(|v| v.iter().fold(Rational::from_integer(1.into()), |a, b| a * b))
}

fn algebra() -> Arc<AlgebraSignature> {
    make_algebra(3, 3, &[(0, 1)]).unwrap()
}

fn element(sig: Arc<AlgebraSignature>) -> impl Strategy<Value = WeilElement> {
    let basis = sig.basis();
    prop::collection::vec(rational(), basis.len())
        .prop_map(move |cs| WeilElement::from_terms(&sig, basis.iter().cloned().zip(cs)))
}

fn elements(k: usize) -> impl Strategy<Value = Vec<WeilElement>> {
    prop::collection::vec(element(algebra()), k)
}

fn pool(kind: IStructureKind, m: usize) -> sdg_core::spaces::GeneratorPool {
    AlgebraLayout::new().for_tuple(kind, m).build(3).unwrap()
}

fn tuple(kind: IStructureKind, dim: usize, m: usize, seed: u64) -> (Vector, PointTuple) {
    let mut s = Sampler::new(seed, DEFAULT_RANGE);
    let mut pool = pool(kind, m);
    let base = Vector::constant(pool.signature(), &s.rationals(dim));
    let t = sample_generic(kind, &base, m, &mut pool, &mut s).unwrap();
    (base, t)
}

proptest! {
    #[test]
    fn fast_rational_arithmetic_is_exact(x in wide_rational(), y in wide_rational()) {
        prop_assert_eq!(add(&x, &y), &x + &y);
        prop_assert_eq!(sub(&x, &y), &x - &y);
        prop_assert_eq!(mul(&x, &y), &x * &y);
    }

    #[test]
    fn weil_ring_axioms(v in elements(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert_eq!(&(a - b) + b, a.clone());
    }

    #[test]
    fn units_invert(a in element(algebra()), c in rational()) {
        prop_assume!(c != Rational::from_integer(0.into()));
        let x = &a + &WeilElement::constant(a.signature(), c - a.constant_term());
        let inv = x.invert().unwrap();
        prop_assert_eq!(&x * &inv, WeilElement::one(x.signature()));
    }

    #[test]
    fn infinitesimals_are_nilpotent(a in element(algebra())) {
        let m = &a - &WeilElement::constant(a.signature(), a.constant_term());
        prop_assert!(m.pow(3).is_zero());
        prop_assert!(m.is_infinitesimal());
    }

    #[test]
    fn first_order_samples_lie_in_every_structure(seed in any::<u64>(), dim in 1usize..4, m in 1usize..4) {
        let (_, t) = tuple(IStructureKind::FirstOrder, dim, m, seed);
        for kind in IStructureKind::ALL {
            prop_assert!(in_istructure(kind, &t));
        }
    }

    #[test]
    fn second_order_samples_survive_reindexing(
        seed in any::<u64>(),
        dim in 1usize..4,
        h in prop::collection::vec(0usize..3, 0..5),
    ) {
        let (_, t) = tuple(IStructureKind::SecondOrder, dim, 3, seed);
        prop_assert!(in_istructure(IStructureKind::SecondOrder, &t));
        prop_assert!(in_istructure(IStructureKind::SecondOrder, &t.reindex(&h)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d2_group_laws(seed in any::<u64>(), dim in 1usize..4) {
        let mut s = Sampler::new(seed, DEFAULT_RANGE);
        let g = IGroupOnD2::new(Bilinear::random(dim, dim, &mut s)).unwrap();
        let (zero, t) = {
            let mut pool = pool(IStructureKind::SecondOrder, 3);
            let zero = Vector::zeros(pool.signature(), dim);
            let t = sample_generic(IStructureKind::SecondOrder, &zero, 3, &mut pool, &mut s).unwrap();
            (zero, t)
        };
        let (u, v, w) = (t.get(0), t.get(1), t.get(2));
        prop_assert_eq!(&g.mul(u, &zero).unwrap(), u);
        prop_assert_eq!(&g.mul(&zero, u).unwrap(), u);
        prop_assert_eq!(g.mul(u, &g.inv(u).unwrap()).unwrap(), zero.clone());
        let left = g.mul(&g.mul(u, v).unwrap(), w).unwrap();
        let right = g.mul(u, &g.mul(v, w).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(!g.is_abelian() || g.mul(u, v).unwrap() == g.mul(v, u).unwrap());
    }

    #[test]
    fn monad_products_agree_on_every_path(seed in any::<u64>(), dim in 1usize..4) {
        let mut s = Sampler::new(seed, DEFAULT_RANGE);
        let g = MonadGroup::new(&ConnectionSymbol::random(dim, 2, &mut s), &s.rationals(dim), Mode::Strict).unwrap();
        let mut pool = pool(IStructureKind::SecondOrder, 2);
        let p = Vector::constant(pool.signature(), g.base());
        let t = sample_generic(IStructureKind::SecondOrder, &p, 2, &mut pool, &mut s).unwrap();
        let (q, r) = (t.get(0), t.get(1));
        let chart = g.mul_via(MulPath::Chart, q, r).unwrap();
        prop_assert_eq!(&g.mul_via(MulPath::Bch, q, r).unwrap(), &chart);
        prop_assert_eq!(&g.mul_via(MulPath::Transport, q, r).unwrap(), &chart);
        prop_assert_eq!(g.commutator(q, r).unwrap(), g.lie_bracket(q, r).unwrap());
        prop_assert_eq!(&g.lie_bracket(q, r).unwrap() - &p, &p - &g.lie_bracket(r, q).unwrap());
    }

    #[test]
    fn truncated_symbol_evaluation_is_exact(seed in any::<u64>(), dim in 1usize..4) {
        let mut s = Sampler::new(seed, DEFAULT_RANGE);
        let sym = ConnectionSymbol::random(dim, 2, &mut s);
        let (p, t) = tuple(IStructureKind::SecondOrder, dim, 3, s.int_in(0, i64::MAX) as u64);
        let x = chart_lambda(&sym.at(&p).unwrap(), &p, t.get(0), t.get(1)).unwrap();
        let full = chart_lambda(&sym.at(&x).unwrap(), &x, t.get(0), t.get(2)).unwrap();
        let c = Connection::new(sym.clone(), Mode::Strict);
        prop_assert_eq!(c.lambda(&x, t.get(0), t.get(2)).unwrap(), full);
        prop_assert_eq!(
            c.torsion(&p, t.get(0), t.get(1), TorsionForm::Definitional).unwrap(),
            c.torsion(&p, t.get(0), t.get(1), TorsionForm::Chart).unwrap()
        );
    }
}
