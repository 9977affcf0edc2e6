use sdg_core::rational::Rational;
use sdg_core::sample::Sampler;
use sdg_core::spaces::{
    in_istructure, sample_generic, witness_nil_square_monad_not_second_order, witness_nil_square_not_first_order,
    AlgebraLayout, IStructureKind, PointTuple,
};
use sdg_core::weil::Vector;

use super::{ensure, Ctx, Outcome, Witness};

fn sample(kind: IStructureKind, dim: usize, m: usize, s: &mut Sampler) -> Result<PointTuple, String> {
    let mut pool = AlgebraLayout::new().for_tuple(kind, m).build(3).wit("layout")?;
    let base = Vector::constant(pool.signature(), &s.rationals(dim));
    sample_generic(kind, &base, m, &mut pool, s).wit("sample")
}

fn membership(t: &PointTuple) -> String {
    IStructureKind::ALL
        .iter()
        .map(|&k| format!("{k}: {}", in_istructure(k, t)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Sampled first-order tuples are nil-square and second-order.
pub fn first_order_containments(dim: usize, trials: usize, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let t = sample(IStructureKind::FirstOrder, dim, 3, s)?;
        ensure(IStructureKind::ALL.iter().all(|&k| in_istructure(k, &t)), || {
            format!("first-order sample with membership {}", membership(&t))
        })?;
    }
    Ok(())
}

/// Sampled second-order tuples are second-order and stay so under reindexing.
pub fn second_order_reindexing(dim: usize, trials: usize, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let t = sample(IStructureKind::SecondOrder, dim, 3, s)?;
        ensure(in_istructure(IStructureKind::SecondOrder, &t), || {
            "sample not second-order".into()
        })?;
        let h: Vec<usize> = (0..4).map(|_| s.index(3)).collect();
        ensure(in_istructure(IStructureKind::SecondOrder, &t.reindex(&h)), || {
            format!("reindexing by {h:?} left the structure")
        })?;
    }
    Ok(())
}

/// The stored tuple lies in the nil-square structure but not the first-order one.
pub fn nil_square_not_first_order(base: &[Rational; 2]) -> Outcome {
    let t = witness_nil_square_not_first_order(base);
    ensure(
        in_istructure(IStructureKind::NilSquare, &t) && !in_istructure(IStructureKind::FirstOrder, &t),
        || membership(&t),
    )
}

/// The stored monad triple `⟨P, P+x, P+y, P+z⟩` in dimension 3 is nil-square
/// but its differences are not second-order.
pub fn monad_triple_not_second_order(base: &[Rational; 3]) -> Outcome {
    let t = witness_nil_square_monad_not_second_order(base);
    ensure(
        in_istructure(IStructureKind::NilSquare, &t) && !in_istructure(IStructureKind::SecondOrder, &t),
        || membership(&t),
    )
}

pub fn run(ctx: &mut Ctx) {
    let (dim, trials) = (ctx.cfg.dim, ctx.cfg.trials);
    ctx.check(
        "first_order_in_nil_square_and_second_order",
        "the first-order i-structure is contained in the nil-square and second-order ones",
        |s| first_order_containments(dim, trials, s),
    );
    ctx.check(
        "second_order_closed_under_reindexing",
        "i-structures are closed under reindexing",
        |s| second_order_reindexing(dim, trials, s),
    );
    ctx.check(
        "nil_square_witness_not_first_order",
        "the nil-square i-structure is strictly larger than the first-order one",
        |s| {
            let b = s.rationals(2);
            nil_square_not_first_order(&[b[0].clone(), b[1].clone()])
        },
    );
    ctx.check(
        "monad_triple_not_second_order",
        "a nil-square monad triple need not be second-order",
        |s| {
            let b = s.rationals(3);
            monad_triple_not_second_order(&[b[0].clone(), b[1].clone(), b[2].clone()])
        },
    );
}
