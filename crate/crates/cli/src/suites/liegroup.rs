use sdg_core::connection::Mode;
use sdg_core::igroup::MulPath;
use sdg_core::liegroup::{
    extract_connection_symbol, gl3_nil_square_failure, monad_group, tangent_bracket, tangent_bracket_via_commutator,
    CanonicalConnection, GroupTag, MatrixElement, Side, TangentVector,
};
use sdg_core::linalg::Matrix;
use sdg_core::rational::{int, Rational};
use sdg_core::sample::Sampler;
use sdg_core::spaces::{sample_generic, AlgebraLayout, IStructureKind};
use sdg_core::tensor::Bilinear;
use sdg_core::weil::Vector;

use super::{ensure, second_order_tuple, Ctx, Outcome, Witness};

/// Matrix positions of the chart coordinates, written out independently of the
/// group implementation.
fn oracle_slots(tag: GroupTag) -> Vec<(usize, usize)> {
    match tag {
        GroupTag::Gl(n) => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        GroupTag::Heisenberg => vec![(0, 1), (0, 2), (1, 2)],
    }
}

/// The tangent matrix with chart coordinates `v`.
pub fn oracle_matrix(tag: GroupTag, v: &[Rational]) -> Matrix {
    let n = tag.size();
    let mut m = Matrix::zeros(n, n);
    for (c, (i, j)) in v.iter().zip(oracle_slots(tag)) {
        m[(i, j)] = c.clone();
    }
    m
}

/// Chart coordinates of a tangent matrix.
pub fn oracle_chart(tag: GroupTag, m: &Matrix) -> Vec<Rational> {
    oracle_slots(tag).into_iter().map(|(i, j)| m[(i, j)].clone()).collect()
}

/// `v₁v₂ − v₂v₁` on tangent matrices.
pub fn matrix_commutator(tag: GroupTag, v1: &[Rational], v2: &[Rational]) -> Vec<Rational> {
    let (a, b) = (oracle_matrix(tag, v1), oracle_matrix(tag, v2));
    let ab = a.mul(&b).expect("square");
    let ba = b.mul(&a).expect("square");
    oracle_chart(tag, &ab.sub(&ba))
}

fn el(tag: GroupTag, v: &Vector) -> Result<MatrixElement, String> {
    MatrixElement::from_chart(tag, v).wit("group element")
}

/// `Γ_e[q,r]` of the left connection is the matrix product `qr`.
pub fn left_symbol_at_identity(tag: GroupTag) -> Outcome {
    let gamma = extract_connection_symbol(&CanonicalConnection::new(Side::Left, tag), &tag.identity_chart())
        .wit("extraction")?;
    let d = tag.chart_dim();
    let unit = |i: usize| (0..d).map(|k| int(i64::from(k == i))).collect::<Vec<_>>();
    let want = Bilinear::from_fn(d, d, |k, i, j| {
        let prod = oracle_matrix(tag, &unit(i))
            .mul(&oracle_matrix(tag, &unit(j)))
            .expect("square");
        oracle_chart(tag, &prod)[k].clone()
    });
    ensure(gamma == want, || format!("Γ_e = {gamma}, matrix product = {want}"))
}

/// The monad group of the extracted left symbol at `e` multiplies and inverts
/// like the matrices themselves, on `pairs` second-order pairs.
pub fn monad_matches_matrices(tag: GroupTag, pairs: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    let e = tag.identity_chart();
    let g = monad_group(&CanonicalConnection::new(Side::Left, tag), &e, mode).wit("monad group")?;
    for _ in 0..pairs {
        let (_, t) = second_order_tuple(&e, 2, s)?;
        let (q, r) = (t.get(0), t.get(1));
        let product = el(tag, q)?.mat_mul(&el(tag, r)?).wit("matrix product")?.to_chart();
        for path in MulPath::ALL {
            let got = g.mul_via(path, q, r).wit("monad product")?;
            ensure(got == product, || {
                format!("{path:?} product {got} ≠ matrix product {product}")
            })?;
        }
        let inv = el(tag, q)?.mat_inv().wit("matrix inverse")?.to_chart();
        let got = g.inv(q).wit("monad inverse")?;
        ensure(got == inv, || format!("monad inverse {got} ≠ matrix inverse {inv}"))?;
    }
    Ok(())
}

/// `[t₁,t₂]` by the connection and by the group commutator equals `v₁v₂ − v₂v₁`
/// on every pair of basis directions and on `random` random pairs.
pub fn tangent_bracket_is_commutator(tag: GroupTag, random: usize, s: &mut Sampler) -> Outcome {
    let d = tag.chart_dim();
    let unit = |i: usize| (0..d).map(|k| int(i64::from(k == i))).collect::<Vec<_>>();
    let mut pairs: Vec<(Vec<Rational>, Vec<Rational>)> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| (unit(i), unit(j)))
        .collect();
    pairs.extend((0..random).map(|_| (s.rationals(d), s.rationals(d))));
    for (v1, v2) in pairs {
        let want = matrix_commutator(tag, &v1, &v2);
        let t1 = TangentVector::new(tag, v1.clone()).wit("tangent")?;
        let t2 = TangentVector::new(tag, v2.clone()).wit("tangent")?;
        let a = tangent_bracket(&t1, &t2).wit("bracket")?;
        let b = tangent_bracket_via_commutator(&t1, &t2).wit("commutator route")?;
        ensure(a.v == want && b.v == want, || {
            format!(
                "v₁ = {v1:?}, v₂ = {v2:?}: connection route {:?}, commutator route {:?}, matrices {want:?}",
                a.v, b.v
            )
        })?;
    }
    Ok(())
}

/// `exp_e(log Q + log R + ½[log Q, log R]) = QR` for the matrices.
pub fn tangent_transport(tag: GroupTag, pairs: usize, mode: Mode, s: &mut Sampler) -> Outcome {
    let e = tag.identity_chart();
    let g = monad_group(&CanonicalConnection::new(Side::Left, tag), &e, mode).wit("monad group")?;
    for _ in 0..pairs {
        let (p, t) = second_order_tuple(&e, 2, s)?;
        let (q, r) = (t.get(0), t.get(1));
        let log = |x: &Vector| sdg_core::connection::chart_log(g.gamma_bar(), &p, x).wit("log");
        let u = g.tangent_mul(&log(q)?, &log(r)?).wit("tangent product")?;
        let got = sdg_core::connection::chart_exp(g.gamma_bar(), &p, &u).wit("exp")?;
        let want = el(tag, q)?.mat_mul(&el(tag, r)?).wit("matrix product")?.to_chart();
        ensure(got == want, || {
            format!("transported product {got} ≠ matrix product {want}")
        })?;
    }
    Ok(())
}

/// `PQ = P + Q − e` on first-order pairs at the identity.
pub fn first_order_abelian(tag: GroupTag, pairs: usize, s: &mut Sampler) -> Outcome {
    for _ in 0..pairs {
        let mut pool = AlgebraLayout::new()
            .for_tuple(IStructureKind::FirstOrder, 2)
            .build(3)
            .wit("layout")?;
        let e = Vector::constant(pool.signature(), &tag.identity_chart());
        let t = sample_generic(IStructureKind::FirstOrder, &e, 2, &mut pool, s).wit("sample")?;
        let (p, q) = (t.get(0), t.get(1));
        let product = el(tag, p)?.mat_mul(&el(tag, q)?).wit("matrix product")?.to_chart();
        let sum = p.checked_add(q).and_then(|x| x.checked_sub(&e)).wit("sum")?;
        ensure(product == sum, || format!("PQ = {product}, P + Q − e = {sum}"))?;
    }
    Ok(())
}

/// The stored `GL(3)` tuple is nil-square while `⟨PQ, R⟩` is not.
pub fn nil_square_failure() -> Outcome {
    let w = gl3_nil_square_failure().wit("witness")?;
    ensure(w.verifies(), || format!("PQ = {}, R = {}", w.product, w.last))
}

pub fn run(ctx: &mut Ctx) {
    let (tag, trials, mode) = (ctx.cfg.group, ctx.cfg.trials, ctx.cfg.mode());
    ctx.check(
        &format!("{tag}_left_symbol_at_identity"),
        "λ_l(e,P,Q) = PQ, so Γ_e is the matrix product",
        |_| left_symbol_at_identity(tag),
    );
    ctx.check(
        &format!("{tag}_monad_group_is_matrix_group"),
        "the connection-induced i-group multiplies as the Lie group does",
        |s| monad_matches_matrices(tag, trials, mode, s),
    );
    ctx.check(
        &format!("{tag}_tangent_bracket_is_commutator"),
        "the bracket on T_eG agrees with the Lie bracket of left-invariant vector fields",
        |s| tangent_bracket_is_commutator(tag, trials, s),
    );
    ctx.check(
        &format!("{tag}_tangent_group_transport"),
        "t₁ + t₂ + ½[t₁,t₂] on T_eG is isomorphic to the monad group",
        |s| tangent_transport(tag, trials, mode, s),
    );
    ctx.check(
        &format!("{tag}_first_order_abelian"),
        "PQ = P + Q on the first-order monad of e",
        |s| first_order_abelian(tag, trials, s),
    );
    ctx.check(
        "gl3_nil_square_not_closed",
        "the nil-square i-structure fails the neighbourhood axioms",
        |_| nil_square_failure(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_commutators_by_hand() {
        let h = GroupTag::Heisenberg;
        let e = |k: usize| (0..3).map(|i| int((i == k) as i64)).collect::<Vec<_>>();
        assert_eq!(matrix_commutator(h, &e(0), &e(2)), e(1));
        assert_eq!(matrix_commutator(h, &e(0), &e(1)), vec![int(0); 3]);
        let g = GroupTag::Gl(2);
        let (e12, e21) = (
            vec![int(0), int(1), int(0), int(0)],
            vec![int(0), int(0), int(1), int(0)],
        );
        assert_eq!(matrix_commutator(g, &e12, &e21), vec![int(1), int(0), int(0), int(-1)]);
    }

    #[test]
    fn oracle_chart_inverts_oracle_matrix() {
        let mut s = Sampler::new(5, 1000);
        for tag in [GroupTag::Gl(2), GroupTag::Gl(3), GroupTag::Heisenberg] {
            let v = s.rationals(tag.chart_dim());
            assert_eq!(oracle_chart(tag, &oracle_matrix(tag, &v)), v);
        }
    }

    #[test]
    fn group_checks_pass_on_small_runs() {
        let mut s = Sampler::new(8, 1000);
        for tag in [GroupTag::Gl(2), GroupTag::Heisenberg] {
            left_symbol_at_identity(tag).unwrap();
            monad_matches_matrices(tag, 2, Mode::Strict, &mut s).unwrap();
            tangent_bracket_is_commutator(tag, 2, &mut s).unwrap();
        }
        nil_square_failure().unwrap();
    }
}
