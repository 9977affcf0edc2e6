use sdg_core::connection::{chart_linear_combination, Connection, ConnectionSymbol, Mode, TorsionForm};
use sdg_core::igroup::{
    base_point_change, extract_b, verify_igroup_axioms, CorruptedLaw, IGroupOnD2, InfinitesimalGroup, MonadGroup,
    MulPath,
};
use sdg_core::rational::{int, Rational};
use sdg_core::sample::Sampler;
use sdg_core::spaces::{alternating_blocks, in_istructure, IStructureKind, PointTuple};
use sdg_core::tensor::Bilinear;
use sdg_core::weil::{Monomial, Vector, WeilElement};
use sdg_core::Error;

use super::{ensure, second_order_tuple, Ctx, Outcome, Witness};

/// Calls `f(group, P, Q, R)` for `pairs` monad pairs around a random base of
/// each of `symbols` random degree-2 connection symbols.
pub fn for_monad_pairs(
    dim: usize,
    symbols: usize,
    pairs: usize,
    mode: Mode,
    s: &mut Sampler,
    mut f: impl FnMut(&MonadGroup, &ConnectionSymbol, &Vector, &Vector, &Vector) -> Outcome,
) -> Outcome {
    for _ in 0..symbols {
        let sym = ConnectionSymbol::random(dim, 2, s);
        let g = MonadGroup::new(&sym, &s.rationals(dim), mode).wit("monad group")?;
        for _ in 0..pairs {
            let (p, t) = second_order_tuple(g.base(), 2, s)?;
            f(&g, &sym, &p, t.get(0), t.get(1))?;
        }
    }
    Ok(())
}

/// The chart product, the BCH combination and exp/log transport agree.
pub fn bch_paths_agree(g: &MonadGroup, q: &Vector, r: &Vector) -> Outcome {
    let chart = g.mul_via(MulPath::Chart, q, r).wit("chart product")?;
    for path in [MulPath::Bch, MulPath::Transport] {
        let other = g.mul_via(path, q, r).wit("product")?;
        ensure(other == chart, || {
            format!("{path:?} gives {other}, chart gives {chart} at Q = {q}, R = {r}")
        })?;
    }
    Ok(())
}

/// `QRQ⁻¹R⁻¹ = [Q,R]`.
pub fn commutator_is_bracket(g: &MonadGroup, q: &Vector, r: &Vector) -> Outcome {
    let c = g.commutator(q, r).wit("commutator")?;
    let b = g.lie_bracket(q, r).wit("bracket")?;
    ensure(c == b, || format!("commutator {c} ≠ bracket {b} at Q = {q}, R = {r}"))
}

/// `[Q,R] − P = −(τ(Q,R) − P)` with both torsion forms.
pub fn bracket_is_reflected_torsion(
    g: &MonadGroup,
    sym: &ConnectionSymbol,
    p: &Vector,
    q: &Vector,
    r: &Vector,
) -> Outcome {
    let c = Connection::new(sym.clone(), Mode::Strict);
    let b = g.lie_bracket(q, r).wit("bracket")?.checked_sub(p).wit("sub")?;
    for form in [TorsionForm::Definitional, TorsionForm::Chart] {
        let tau = c.torsion(p, q, r, form).wit("torsion")?.checked_sub(p).wit("sub")?;
        ensure(b == -&tau, || format!("[Q,R] − P = {b}, τ − P = {tau} ({form:?})"))?;
    }
    Ok(())
}

/// `[Q,Q] = P`, `[Q,[Q,R]] = P`, and the bracket lands in the first-order monad.
pub fn bracket_alternating_and_third_order_trivial(g: &MonadGroup, p: &Vector, q: &Vector, r: &Vector) -> Outcome {
    ensure(&g.lie_bracket(q, q).wit("bracket")? == p, || {
        format!("[Q,Q] ≠ P at Q = {q}")
    })?;
    let b = g.lie_bracket(q, r).wit("bracket")?;
    let nested = g.lie_bracket(q, &b).wit("bracket")?;
    ensure(&nested == p, || format!("[Q,[Q,R]] = {nested} ≠ P"))?;
    let pair = PointTuple::new(vec![p.clone(), b.clone()]).wit("tuple")?;
    ensure(in_istructure(IStructureKind::FirstOrder, &pair), || {
        format!("[Q,R] = {b} is not first-order")
    })
}

/// `inv(Q)` equals the i-linear combination `−Q`, and `Q·inv(Q) = P`.
pub fn inverse_is_reflection(g: &MonadGroup, p: &Vector, q: &Vector) -> Outcome {
    let inv = g.inv(q).wit("inv")?;
    let refl = g.inv_by_reflection(q).wit("reflection")?;
    ensure(inv == refl, || format!("inv {inv} ≠ reflection {refl} at Q = {q}"))?;
    ensure(&g.mul(q, &inv).wit("mul")? == p, || format!("Q·Q⁻¹ ≠ P at Q = {q}"))
}

/// The bracket commutes with second-order i-linear combinations in each slot.
pub fn bracket_i_bilinear(dim: usize, trials: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let g = MonadGroup::new(&ConnectionSymbol::random(dim, 2, s), &s.rationals(dim), mode).wit("monad group")?;
        let (p, t) = second_order_tuple(g.base(), 3, s)?;
        let (q, r1, r2) = (t.get(0), t.get(1), t.get(2));
        let w = s.rationals(2);
        let lin = |a: &Vector, b: &Vector| -> Result<Vector, String> {
            let pts = PointTuple::new(vec![a.clone(), b.clone()]).wit("tuple")?;
            chart_linear_combination(g.gamma_bar(), &p, &w, &pts).wit("linear combination")
        };
        let r = lin(r1, r2)?;
        let left = g.lie_bracket(q, &r).wit("bracket")?;
        let want = lin(
            &g.lie_bracket(q, r1).wit("bracket")?,
            &g.lie_bracket(q, r2).wit("bracket")?,
        )?;
        ensure(left == want, || {
            format!("[Q, μR₁+νR₂] = {left}, μ[Q,R₁]+ν[Q,R₂] = {want}")
        })?;
        let right = g.lie_bracket(&r, q).wit("bracket")?;
        let want = lin(
            &g.lie_bracket(r1, q).wit("bracket")?,
            &g.lie_bracket(r2, q).wit("bracket")?,
        )?;
        ensure(right == want, || {
            format!("[μR₁+νR₂, Q] = {right}, μ[R₁,Q]+ν[R₂,Q] = {want}")
        })?;
    }
    Ok(())
}

/// The cyclic sum of nested brackets of a nil-square triple `⟨P+x, P+y, P+z⟩`
/// built from alternating square-zero blocks is the base point.
pub fn jacobi_nil_square(dim: usize, trials: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    let sig = alternating_blocks(3, dim, 3).wit("algebra")?;
    for _ in 0..trials {
        let g = MonadGroup::new(&ConnectionSymbol::random(dim, 2, s), &s.rationals(dim), mode).wit("monad group")?;
        let p = g.base_point(&sig);
        let pts = (0..3)
            .map(|b| {
                let x = (0..dim)
                    .map(|i| WeilElement::generator(&sig, b * dim + i))
                    .collect::<sdg_core::Result<Vec<_>>>()?;
                p.checked_add(&Vector::new(x)?)
            })
            .collect::<sdg_core::Result<Vec<_>>>()
            .wit("points")?;
        let tuple = PointTuple::new(std::iter::once(p.clone()).chain(pts.iter().cloned()).collect()).wit("tuple")?;
        ensure(in_istructure(IStructureKind::NilSquare, &tuple), || {
            "triple is not nil-square".into()
        })?;
        let br = |a: &Vector, b: &Vector| g.lie_bracket(a, b).wit("bracket");
        let mut sum = Vector::zeros(&sig, dim);
        for k in 0..3 {
            let inner = br(&pts[(k + 1) % 3], &pts[(k + 2) % 3])?;
            let outer = br(&pts[k], &inner)?;
            sum = sum.checked_add(&outer.checked_sub(&p).wit("sub")?).wit("add")?;
        }
        ensure(sum.is_zero(), || format!("cyclic sum of brackets is P + {sum}"))?;
    }
    Ok(())
}

/// `extract_B(d2_mul_B) = B` for `count` random `B`.
pub fn classification_round_trip(dim: usize, count: usize, s: &mut Sampler) -> Outcome {
    for _ in 0..count {
        let b = Bilinear::random(dim, dim, s);
        let got = extract_b(&IGroupOnD2::new(b.clone()).wit("law")?).wit("extract_B")?;
        ensure(got == b, || format!("extract_B returned {got} for B = {b}"))?;
    }
    Ok(())
}

/// A law `v + w + B[v,w]` corrupted by a constant `a₀` or a quadratic `A₂[v]²`.
pub fn corrupted_law(dim: usize, which: &str, s: &mut Sampler) -> CorruptedLaw {
    let law = IGroupOnD2::new(Bilinear::random(dim, dim, s)).expect("square tensor");
    let mut a0 = None;
    let mut a2 = None;
    if which == "a0" {
        let mut v = vec![int(0); dim];
        v[s.index(dim)] = s.nonzero_rational();
        a0 = Some(v);
    } else {
        let mut t = Bilinear::zeros(dim, dim);
        t.set(s.index(dim), s.index(dim), s.index(dim), s.nonzero_rational());
        a2 = Some(t);
    }
    CorruptedLaw { law, a0, a2 }
}

/// `extract_B` rejects corrupted laws and names the offending component.
pub fn corrupted_laws_rejected(dim: usize, s: &mut Sampler) -> Outcome {
    for which in ["a0", "A2"] {
        let law = corrupted_law(dim, which, s);
        match extract_b(&law) {
            Err(Error::NotAnIGroupLaw { component, .. }) if component == which => {}
            other => return Err(format!("law with injected {which}: {other:?}")),
        }
    }
    Ok(())
}

fn axioms(g: &dyn InfinitesimalGroupDyn, trials: usize, s: &mut Sampler) -> Outcome {
    let failures: Vec<String> = g
        .verify(s, trials)
        .into_iter()
        .filter(|o| !o.passed)
        .map(|o| format!("{}: {}", o.axiom, o.witness.unwrap_or_default()))
        .collect();
    ensure(failures.is_empty(), || failures.join("; "))
}

/// Object-safe wrapper over [`verify_igroup_axioms`].
trait InfinitesimalGroupDyn {
    fn verify(&self, s: &mut Sampler, trials: usize) -> Vec<sdg_core::igroup::AxiomOutcome>;
}

impl<G: InfinitesimalGroup> InfinitesimalGroupDyn for G {
    fn verify(&self, s: &mut Sampler, trials: usize) -> Vec<sdg_core::igroup::AxiomOutcome> {
        verify_igroup_axioms(self, s, trials)
    }
}

/// Group and neighbourhood axioms plus derived words for `v + w + B[v,w]`, with `B = 0` and random `B`.
pub fn axioms_d2(dim: usize, trials: usize, s: &mut Sampler) -> Outcome {
    axioms(&IGroupOnD2::new(Bilinear::zeros(dim, dim)).wit("law")?, trials, s)?;
    axioms(&IGroupOnD2::new(Bilinear::random(dim, dim, s)).wit("law")?, trials, s)
}

/// The same axioms for the monad group of a random connection.
pub fn axioms_monad(dim: usize, trials: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    let g = MonadGroup::new(&ConnectionSymbol::random(dim, 2, s), &s.rationals(dim), mode).wit("monad group")?;
    axioms(&g, trials, s)
}

/// Runs the axioms on a corrupted law; `Err` means the corruption was detected.
pub fn corrupted_axioms(dim: usize, which: &str, trials: usize, s: &mut Sampler) -> Outcome {
    let law = corrupted_law(dim, which, s);
    axioms(&law, trials, s)
}

/// `Γ_P = S + (P₀ − b₀)·A` with `S` symmetric and `A` antisymmetric: symmetric at `b` only.
pub fn symmetric_only_at(base: &[Rational], s: &mut Sampler) -> ConnectionSymbol {
    let n = base.len();
    let sym = Bilinear::random(n, n, s).symmetric_part();
    let anti = Bilinear::random(n, n, s).alternation();
    let mut entries = Vec::new();
    for (k, i, j, c) in sym.entries() {
        let a = anti.get(k, i, j);
        entries.push(((i, j, k), Monomial::one(), c - &base[0] * a));
        entries.push(((i, j, k), Monomial::generator(0), a.clone()));
    }
    ConnectionSymbol::new(n, 1, entries).expect("valid entries")
}

/// Over `symbols` symbols (generic, symmetrized, symmetric only at the base),
/// `QR = RQ` on every sample exactly when `Γ` is symmetric at the base.
pub fn abelian_iff_symmetric(dim: usize, symbols: usize, pairs: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    for i in 0..symbols {
        let base = s.rationals(dim);
        let sym = match i % 3 {
            0 => ConnectionSymbol::random(dim, 2, s),
            1 => ConnectionSymbol::random(dim, 2, s).symmetrize(),
            _ => symmetric_only_at(&base, s),
        };
        let symmetric_at_base = sym.at_rational(&base).wit("evaluate")?.is_symmetric();
        let g = MonadGroup::new(&sym, &base, mode).wit("monad group")?;
        let mut all_commute = true;
        for _ in 0..pairs {
            let (_, t) = second_order_tuple(&base, 2, s)?;
            let (q, r) = (t.get(0), t.get(1));
            all_commute &= g.mul(q, r).wit("mul")? == g.mul(r, q).wit("mul")?;
        }
        ensure(
            all_commute == symmetric_at_base && g.is_abelian() == symmetric_at_base,
            || format!("symbol {i}: symmetric at base = {symmetric_at_base}, all samples commute = {all_commute}"),
        )?;
    }
    Ok(())
}

fn weights_summing_to_one(m: usize, s: &mut Sampler) -> Vec<Rational> {
    let mut w = s.rationals(m - 1);
    let rest = int(1) - w.iter().sum::<Rational>();
    w.push(rest);
    w
}

/// The base-point change equality with torsion correction for a non-symmetric
/// symbol, and a vanishing correction for its symmetrization.
pub fn base_point_obstruction(dim: usize, m: usize, samples: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    for _ in 0..samples {
        let sym = ConnectionSymbol::random(dim, 2, s);
        let (p, t) = second_order_tuple(&s.rationals(dim), m + 1, s)?;
        let q = t.get(m).clone();
        let pts = t.reindex(&(0..m).collect::<Vec<_>>());
        let w = weights_summing_to_one(m, s);
        let out = base_point_change(&sym, &p, &q, &w, &pts, mode).wit("base point change")?;
        ensure(out.lhs == out.rhs, || {
            format!("lhs {} ≠ rhs {} (m = {m})", out.lhs, out.rhs)
        })?;
        ensure(!out.correction.is_zero(), || {
            "torsion correction vanished for a non-symmetric symbol".into()
        })?;
        let flat = base_point_change(&sym.symmetrize(), &p, &q, &w, &pts, mode).wit("base point change")?;
        ensure(flat.correction.is_zero() && flat.lhs == flat.rhs_exp, || {
            format!("symmetrized correction {} (m = {m})", flat.correction)
        })?;
    }
    Ok(())
}

pub fn run(ctx: &mut Ctx) {
    let (dim, trials, mode) = (ctx.cfg.dim, ctx.cfg.trials, ctx.cfg.mode());
    let pairs = |f: fn(&MonadGroup, &ConnectionSymbol, &Vector, &Vector, &Vector) -> Outcome| {
        move |s: &mut Sampler| for_monad_pairs(dim, trials, trials, mode, s, f)
    };
    ctx.check_on(
        "bch_equals_chart_product",
        "monad_pairs",
        "PQ = P + Q + ½[P,Q] on the second-order monad",
        pairs(|g, _, _, q, r| bch_paths_agree(g, q, r)),
    );
    ctx.check_on(
        "commutator_equals_bracket",
        "monad_pairs",
        "[P,Q] = PQP⁻¹Q⁻¹",
        pairs(|g, _, _, q, r| commutator_is_bracket(g, q, r)),
    );
    ctx.check_on(
        "bracket_is_reflected_torsion",
        "monad_pairs",
        "torsion is the negative of the bracket of points",
        pairs(bracket_is_reflected_torsion),
    );
    ctx.check_on(
        "bracket_alternating_third_order_trivial",
        "monad_pairs",
        "the bracket is alternating and brackets of order three are trivial",
        pairs(|g, _, p, q, r| bracket_alternating_and_third_order_trivial(g, p, q, r)),
    );
    ctx.check_on(
        "inverse_is_point_reflection",
        "monad_pairs",
        "inversion is the point reflection in the unit",
        pairs(|g, _, p, q, _| inverse_is_reflection(g, p, q)),
    );
    ctx.check("bracket_i_bilinear", "the bracket of points is i-bilinear", |s| {
        bracket_i_bilinear(dim, trials, mode, s)
    });
    ctx.check(
        "jacobi_nil_square",
        "the bracket on the nil-square monad satisfies Jacobi",
        |s| jacobi_nil_square(dim, trials, mode, s),
    );
    ctx.check(
        "classification_round_trip",
        "i-groups on D₂(V) are v + w + B[v,w] for a unique bilinear B",
        |s| classification_round_trip(dim, trials, s),
    );
    ctx.check(
        "corrupted_laws_rejected",
        "i-groups on D₂(V) have a₀ = 0, A₁ = B₁ = id, A₂ = B₂ = 0",
        |s| corrupted_laws_rejected(dim, s),
    );
    ctx.check("igroup_axioms_d2", "i-group axioms for v + w + B[v,w]", |s| {
        axioms_d2(dim, trials, s)
    });
    ctx.check(
        "igroup_axioms_monad",
        "an affine connection induces an i-group on the second-order monad",
        |s| axioms_monad(dim, trials, mode, s),
    );
    ctx.check(
        "abelian_iff_symmetric",
        "the i-group is abelian iff the connection is symmetric",
        |s| abelian_iff_symmetric(dim, trials, trials, mode, s),
    );
    for m in [2, 3] {
        ctx.check(
            &format!("base_point_obstruction_m{m}"),
            "torsion obstructs base-point independence of affine combinations",
            |s| base_point_obstruction(dim, m, trials, mode, s),
        );
    }
    if ctx.cfg.negative_controls {
        for which in ["a0", "A2"] {
            ctx.negative_control(
                &format!("negative_control_{}", which.to_lowercase()),
                "a law with a spurious term violates the i-group axioms",
                |s| corrupted_axioms(dim, which, trials, s),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_only_at_the_base() {
        let mut s = Sampler::new(2, 1000);
        let base = s.rationals(3);
        let sym = symmetric_only_at(&base, &mut s);
        assert!(sym.at_rational(&base).unwrap().is_symmetric());
        let mut elsewhere = base.clone();
        elsewhere[0] += int(1);
        assert!(!sym.at_rational(&elsewhere).unwrap().is_symmetric());
    }

    #[test]
    fn corruptions_are_named() {
        let mut s = Sampler::new(4, 1000);
        corrupted_laws_rejected(2, &mut s).unwrap();
        for which in ["a0", "A2"] {
            assert!(corrupted_axioms(2, which, 2, &mut s).is_err(), "{which}");
        }
    }

    #[test]
    fn weights_sum_to_one() {
        let mut s = Sampler::new(6, 1000);
        for m in 1..5 {
            assert_eq!(weights_summing_to_one(m, &mut s).iter().sum::<Rational>(), int(1));
        }
    }
}
