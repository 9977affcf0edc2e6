use sdg_core::calculus::{
    extract_affine, extract_binary_quadratic, extract_quadratic, verify_binary_quadratic, PolyMap, PolynomialMap, Split,
};
use sdg_core::sample::Sampler;
use sdg_core::spaces::{sample_generic, AlgebraLayout, IStructureKind};
use sdg_core::weil::Vector;

use super::{ensure, Ctx, Outcome, Witness};

/// For `maps` random polynomial maps `Rⁿ × Rⁿ → Rⁿ` of each degree 0, 1, 2:
/// extract the binary normal form, then re-evaluate on `witnesses` fresh `D̃₂` pairs.
pub fn binary_round_trip(dim: usize, maps: usize, witnesses: usize, s: &mut Sampler) -> Outcome {
    for degree in 0..=2 {
        for i in 0..maps {
            let f = Split(PolynomialMap::random(2 * dim, dim, degree, s));
            let rep = extract_binary_quadratic(&f).wit("extraction")?;
            verify_binary_quadratic(&f, &rep, s, witnesses).map_err(|e| format!("degree {degree}, map {i}: {e}"))?;
        }
    }
    Ok(())
}

/// `f(P + d) = f(P) + f'(P)d + ½f''(P)[d]²` on second-order `d`, for cubic `f`.
pub fn taylor_identity(dim: usize, trials: usize, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let f = PolynomialMap::random(dim, dim, 3, s);
        let mut pool = AlgebraLayout::new()
            .for_tuple(IStructureKind::SecondOrder, 1)
            .build(3)
            .wit("layout")?;
        let base = Vector::constant(pool.signature(), &s.rationals(dim));
        let rep = extract_quadratic(&f, &base).wit("extraction")?;
        ensure(rep.second_derivative.is_symmetric(), || "f'' not symmetric".into())?;
        let t = sample_generic(IStructureKind::SecondOrder, &base, 1, &mut pool, s).wit("sample")?;
        let d = t.get(0).checked_sub(&base).wit("sub")?;
        let got = f.eval(t.get(0)).wit("eval")?;
        let want = rep.taylor(&d).wit("taylor")?;
        ensure(got == want, || format!("f(P+d) = {got}, Taylor = {want}, d = {d}"))?;
    }
    Ok(())
}

/// `f(P + d) = f(P) + f'(P)d` on first-order `d`.
pub fn first_order_affine(dim: usize, trials: usize, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let f = PolynomialMap::random(dim, dim, 3, s);
        let base = s.rationals(dim);
        let mut pool = AlgebraLayout::new()
            .for_tuple(IStructureKind::FirstOrder, 1)
            .build(3)
            .wit("layout")?;
        let sig = pool.signature().clone();
        let p = Vector::constant(&sig, &base);
        let t = sample_generic(IStructureKind::FirstOrder, &p, 1, &mut pool, s).wit("sample")?;
        let rep = extract_affine(&f, &p).wit("extraction")?;
        let d = t.get(0).checked_sub(&p).wit("sub")?;
        let want = Vector::constant(&sig, &rep.value)
            .checked_add(&sdg_core::tensor::apply_linear(&rep.derivative, &d).wit("apply")?)
            .wit("add")?;
        let got = f.eval(t.get(0)).wit("eval")?;
        ensure(got == want, || format!("f(P+d) = {got}, affine part = {want}"))?;
    }
    Ok(())
}

pub fn run(ctx: &mut Ctx) {
    let (dim, trials) = (ctx.cfg.dim, ctx.cfg.trials);
    ctx.check(
        "kl_binary_round_trip",
        "maps on D̃₂ are uniquely determined polynomials of degree two",
        |s| binary_round_trip(dim, trials, trials, s),
    );
    ctx.check("kl_taylor_identity", "second-order Taylor expansion on D₂", |s| {
        taylor_identity(dim, trials, s)
    });
    ctx.check(
        "kl_first_order_affine",
        "maps are affine on first-order neighbours",
        |s| first_order_affine(dim, trials, s),
    );
}
