use sdg_core::connection::{Connection, ConnectionSymbol, Mode, SymmetricConnection, TorsionForm};
use sdg_core::rational::int;
use sdg_core::sample::Sampler;

use super::{ensure, second_order_tuple, Ctx, Outcome, Witness};

/// Definitional torsion `λ(λ(P,Q,R),Q,R)` equals the chart form `P − (Γ[q,r] − Γ[r,q])`.
pub fn torsion_forms_agree(dim: usize, symbols: usize, samples: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    for _ in 0..symbols {
        let c = Connection::new(ConnectionSymbol::random(dim, 2, s), mode);
        let base = s.rationals(dim);
        for _ in 0..samples {
            let (p, t) = second_order_tuple(&base, 2, s)?;
            let (q, r) = (t.get(0), t.get(1));
            let def = c.torsion(&p, q, r, TorsionForm::Definitional).wit("torsion")?;
            let chart = c.torsion(&p, q, r, TorsionForm::Chart).wit("torsion")?;
            ensure(def == chart, || {
                format!("definitional {def} ≠ chart {chart} at P = {p}, Q = {q}, R = {r}")
            })?;
        }
    }
    Ok(())
}

/// `λ(P,Q,P) = Q` and `λ(P,P,R) = R`.
pub fn lambda_unit_laws(dim: usize, trials: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let c = Connection::new(ConnectionSymbol::random(dim, 2, s), mode);
        let (p, t) = second_order_tuple(&s.rationals(dim), 2, s)?;
        let (q, r) = (t.get(0), t.get(1));
        ensure(&c.lambda(&p, q, &p).wit("lambda")? == q, || {
            format!("λ(P,Q,P) ≠ Q at Q = {q}")
        })?;
        ensure(&c.lambda(&p, &p, r).wit("lambda")? == r, || {
            format!("λ(P,P,R) ≠ R at R = {r}")
        })?;
    }
    Ok(())
}

/// `exp_P ∘ log_P` and `log_P ∘ exp_P` are identities on the second-order monad.
pub fn log_exp_inverse(dim: usize, trials: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let c = SymmetricConnection::new(ConnectionSymbol::random(dim, 2, s).symmetrize(), mode).wit("symmetric")?;
        let (p, t) = second_order_tuple(&s.rationals(dim), 1, s)?;
        let q = t.get(0);
        let v = c.log(&p, q).wit("log")?;
        ensure(&c.exp(&p, &v).wit("exp")? == q, || format!("exp(log Q) ≠ Q at Q = {q}"))?;
        let d = q.checked_sub(&p).wit("sub")?;
        let back = c.log(&p, &c.exp(&p, &d).wit("exp")?).wit("log")?;
        ensure(back == d, || format!("log(exp v) ≠ v at v = {d}"))?;
    }
    Ok(())
}

/// Affine combinations with a unit weight vector return the corresponding point.
pub fn affine_projection(dim: usize, trials: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let c = SymmetricConnection::new(ConnectionSymbol::random(dim, 2, s).symmetrize(), mode).wit("symmetric")?;
        let (p, t) = second_order_tuple(&s.rationals(dim), 3, s)?;
        for j in 0..3 {
            let w: Vec<_> = (0..3).map(|i| int(i64::from(i == j))).collect();
            let got = c.affine_combination(&p, &w, &t).wit("combination")?;
            ensure(&got == t.get(j), || format!("projection {j} gave {got}"))?;
        }
    }
    Ok(())
}

/// Connection-symbol JSON survives a round trip.
pub fn json_round_trip(dim: usize, trials: usize, s: &mut Sampler) -> Outcome {
    for _ in 0..trials {
        let sym = ConnectionSymbol::random(dim, 2, s);
        let back = ConnectionSymbol::from_json(&sym.to_json()).wit("parse")?;
        ensure(back == sym, || "JSON round trip changed the symbol".into())?;
    }
    Ok(())
}

pub fn run(ctx: &mut Ctx) {
    let (dim, trials, mode) = (ctx.cfg.dim, ctx.cfg.trials, ctx.cfg.mode());
    ctx.check(
        "torsion_definitional_equals_chart",
        "torsion in a chart is the antisymmetric part of Γ",
        |s| torsion_forms_agree(dim, trials, trials, mode, s),
    );
    ctx.check("lambda_unit_laws", "λ(P,Q,P) = Q and λ(P,P,R) = R", |s| {
        lambda_unit_laws(dim, trials, mode, s)
    });
    ctx.check("log_exp_inverse", "log and exp are mutually inverse bijections", |s| {
        log_exp_inverse(dim, trials, mode, s)
    });
    ctx.check(
        "affine_combination_projection",
        "second-order i-affine combinations restrict to projections",
        |s| affine_projection(dim, trials, mode, s),
    );
    ctx.check("connection_json_round_trip", "plumbing", |s| {
        json_round_trip(dim, trials, s)
    });
}
