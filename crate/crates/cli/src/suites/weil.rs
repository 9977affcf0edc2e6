use sdg_core::sample::Sampler;
use sdg_core::spaces::{alternating_blocks, random_infinitesimal};
use sdg_core::weil::{make_algebra, Monomial, WeilElement};

use super::{ensure, Ctx, Outcome, Witness};

fn random_element(sig: &std::sync::Arc<sdg_core::weil::AlgebraSignature>, s: &mut Sampler) -> WeilElement {
    let gens: Vec<usize> = (0..sig.generators()).collect();
    &WeilElement::constant(sig, s.rational()) + &random_infinitesimal(sig, &gens, true, s)
}

/// Commutative ring laws on random elements of the cap-3 algebra in 3 generators.
pub fn ring_laws(trials: usize, s: &mut Sampler) -> Outcome {
    let sig = make_algebra(3, 3, &[]).wit("algebra")?;
    for _ in 0..trials {
        let (a, b, c) = (
            random_element(&sig, s),
            random_element(&sig, s),
            random_element(&sig, s),
        );
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || {
            format!("(ab)c ≠ a(bc) for a = {a}, b = {b}, c = {c}")
        })?;
        ensure(&a * &b == &b * &a, || format!("ab ≠ ba for a = {a}, b = {b}"))?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || {
            format!("a(b+c) ≠ ab+ac for a = {a}, b = {b}, c = {c}")
        })?;
        ensure((&a + &(-&a)).is_zero(), || format!("a + (−a) ≠ 0 for a = {a}"))?;
    }
    Ok(())
}

/// `a·a⁻¹ = 1` whenever the constant term is nonzero.
pub fn inverse_round_trip(trials: usize, s: &mut Sampler) -> Outcome {
    let sig = make_algebra(3, 3, &[]).wit("algebra")?;
    let one = WeilElement::one(&sig);
    for _ in 0..trials {
        let gens: Vec<usize> = (0..3).collect();
        let a = &WeilElement::constant(&sig, s.nonzero_rational()) + &random_infinitesimal(&sig, &gens, true, s);
        let inv = a.invert().wit("invert")?;
        ensure(&a * &inv == one, || format!("a·a⁻¹ ≠ 1 for a = {a}"))?;
    }
    Ok(())
}

/// Infinitesimals raised to the truncation cap vanish.
pub fn nilpotency(trials: usize, s: &mut Sampler) -> Outcome {
    for cap in 1..=4u32 {
        let sig = make_algebra(2, cap as usize, &[]).wit("algebra")?;
        for _ in 0..trials {
            let x = random_infinitesimal(&sig, &[0, 1], true, s);
            ensure(x.pow(cap).is_zero(), || format!("x^{cap} ≠ 0 for x = {x}"))?;
        }
    }
    Ok(())
}

/// Alternating square-zero blocks: `x₁y₂ = −x₂y₁` and `x₁y₁ = 0`.
pub fn alternating_relations() -> Outcome {
    let sig = alternating_blocks(2, 2, 3).wit("algebra")?;
    let g = |i| WeilElement::generator(&sig, i).wit("generator");
    let (x1, x2, y1, y2) = (g(0)?, g(1)?, g(2)?, g(3)?);
    ensure((&x1 * &y1).is_zero(), || "x₁y₁ ≠ 0".into())?;
    ensure(&x1 * &y2 == -(&x2 * &y1), || "x₁y₂ ≠ −x₂y₁".into())?;
    ensure(!(&x1 * &y2).is_zero(), || "x₁y₂ vanished".into())?;
    ensure((&x1 * &x2).is_zero(), || "x₁x₂ ≠ 0 inside a block".into())?;
    let c = (&x1 * &y2).coeff(&Monomial::from_generators([0, 3])).wit("coeff")?;
    ensure(c == sdg_core::rational::int(1), || format!("x₁y₂ has coefficient {c}"))
}

pub fn run(ctx: &mut Ctx) {
    let trials = ctx.cfg.trials;
    ctx.check("weil_ring_laws", "commutative ring laws of the model of R", |s| {
        ring_laws(trials, s)
    });
    ctx.check("weil_inverse_round_trip", "plumbing", |s| inverse_round_trip(trials, s));
    ctx.check(
        "weil_nilpotency",
        "infinitesimals of order k vanish in degree k+1",
        |s| nilpotency(trials, s),
    );
    ctx.check("weil_alternating_relations", "plumbing", |_| alternating_relations());
}
