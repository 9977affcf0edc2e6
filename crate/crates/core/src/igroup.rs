//! Infinitesimal groups: the group laws `v + w + B[v,w]` on `D₂(V)` and the
//! second-order monad group `𝔐₂(P)` induced by an arbitrary affine connection.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::calculus::{extract_binary_quadratic, BinaryMap};
use crate::connection::{
    chart_affine_combination, chart_exp, chart_linear_combination, chart_log, offset_order, require_second_order,
    ConnectionSymbol, Mode,
};
use crate::error::{Error, Result};
use crate::rational::{half, int, Rational};
use crate::sample::Sampler;
use crate::spaces::{in_d2, in_dtilde2, in_istructure, sample_generic, AlgebraLayout, IStructureKind, PointTuple};
use crate::tensor::{Bilinear, BilinearForm};
use crate::weil::{AlgebraSignature, Vector};

/// A group law on second-order infinitesimals, defined on `G⟨2⟩` of the
/// second-order i-structure.
pub trait InfinitesimalGroup {
    fn dim(&self) -> usize;
    fn unit(&self, sig: &Arc<AlgebraSignature>) -> Vector;
    fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector>;
    fn inv(&self, a: &Vector) -> Result<Vector>;
}

/// `(v, w) ↦ v + w + B[v,w]`, `v ↦ −v + B[v]²` with unit `0` on `D₂(V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IGroupOnD2 {
    b: Bilinear,
}

impl IGroupOnD2 {
    pub fn new(b: Bilinear) -> Result<Self> {
        if b.out_dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: b.dim(),
                found: b.out_dim(),
            });
        }
        Ok(IGroupOnD2 { b })
    }

    pub fn b(&self) -> &Bilinear {
        &self.b
    }

    pub fn is_abelian(&self) -> bool {
        self.b.is_symmetric()
    }

    pub fn d2_mul(&self, v: &Vector, w: &Vector) -> Result<Vector> {
        if !in_dtilde2(v, w)? {
            return Err(Error::Precondition("d2_mul: ⟨v, w⟩ is not in D̃₂(2,V)".into()));
        }
        v.checked_add(w)?.checked_add(&self.b.apply(v, w)?)
    }

    pub fn d2_inv(&self, v: &Vector) -> Result<Vector> {
        if !in_d2(v) {
            return Err(Error::Precondition("d2_inv: argument is not in D₂(V)".into()));
        }
        (-v).checked_add(&self.b.apply(v, v)?)
    }
}

impl InfinitesimalGroup for IGroupOnD2 {
    fn dim(&self) -> usize {
        self.b.dim()
    }
    fn unit(&self, sig: &Arc<AlgebraSignature>) -> Vector {
        Vector::zeros(sig, self.b.dim())
    }
    fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        self.d2_mul(a, b)
    }
    fn inv(&self, a: &Vector) -> Result<Vector> {
        self.d2_inv(a)
    }
}

impl BinaryMap for IGroupOnD2 {
    fn arg_dim(&self) -> usize {
        self.b.dim()
    }
    fn output_dim(&self) -> usize {
        self.b.dim()
    }
    fn eval(&self, v: &Vector, w: &Vector) -> Result<Vector> {
        self.d2_mul(v, w)
    }
}

/// Recovers `B` from a group law on `D₂(V)` with unit `0`, rejecting laws
/// whose normal form is not `δ + ε + C₂[δ,ε]`.
pub fn extract_b(mul: &dyn BinaryMap) -> Result<Bilinear> {
    let rep = extract_binary_quadratic(mul)?;
    let bad = |component: &str, detail: String| Error::NotAnIGroupLaw {
        component: component.into(),
        detail,
    };
    if rep.a0.iter().any(|c| !c.is_zero()) {
        let v: Vec<String> = rep.a0.iter().map(ToString::to_string).collect();
        return Err(bad("a0", format!("m(0,0) = ({}) ≠ 0", v.join(", "))));
    }
    if !rep.a1.is_identity() {
        return Err(bad("A1", "m(δ,0) ≠ δ to first order".into()));
    }
    if !rep.b1.is_identity() {
        return Err(bad("B1", "m(0,ε) ≠ ε to first order".into()));
    }
    if !rep.a2.is_zero() {
        return Err(bad("A2", format!("m(δ,0) has quadratic part {}", rep.a2)));
    }
    if !rep.b2.is_zero() {
        return Err(bad("B2", format!("m(0,ε) has quadratic part {}", rep.b2)));
    }
    Ok(rep.c2)
}

/// A deliberately broken law `v + w + a₀ + A₂[v]² + B[v,w]`, for negative controls.
#[derive(Clone, Debug)]
pub struct CorruptedLaw {
    pub law: IGroupOnD2,
    pub a0: Option<Vec<Rational>>,
    pub a2: Option<Bilinear>,
}

impl CorruptedLaw {
    fn eval_raw(&self, v: &Vector, w: &Vector) -> Result<Vector> {
        let mut out = v.checked_add(w)?.checked_add(&self.law.b.apply(v, w)?)?;
        if let Some(a0) = &self.a0 {
            out = out.checked_add(&Vector::constant(v.signature(), a0))?;
        }
        if let Some(a2) = &self.a2 {
            out = out.checked_add(&a2.apply(v, v)?)?;
        }
        Ok(out)
    }
}

impl InfinitesimalGroup for CorruptedLaw {
    fn dim(&self) -> usize {
        self.law.b.dim()
    }
    fn unit(&self, sig: &Arc<AlgebraSignature>) -> Vector {
        Vector::zeros(sig, self.dim())
    }
    fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        self.eval_raw(a, b)
    }
    fn inv(&self, a: &Vector) -> Result<Vector> {
        (-a).checked_add(&self.law.b.apply(a, a)?)
    }
}

impl BinaryMap for CorruptedLaw {
    fn arg_dim(&self) -> usize {
        self.law.b.dim()
    }
    fn output_dim(&self) -> usize {
        self.law.b.dim()
    }
    fn eval(&self, v: &Vector, w: &Vector) -> Result<Vector> {
        self.eval_raw(v, w)
    }
}

/// Evaluation routes for the monad group product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MulPath {
    /// `Q + R − P + Γ_P[Q−P, R−P]`.
    Chart,
    /// The i-affine combination `Q + R + ½[Q,R]` under `Γ̄`.
    Bch,
    /// `exp_P(log_P(Q) · log_P(R))` with the tangent law `u + v + ½(Γ_P[u,v] − Γ_P[v,u])`.
    Transport,
}

impl MulPath {
    pub const ALL: [MulPath; 3] = [MulPath::Chart, MulPath::Bch, MulPath::Transport];
}

/// The i-group `𝔐₂(P)` of an affine connection at a rational base point.
#[derive(Clone)]
pub struct MonadGroup {
    base: Vec<Rational>,
    gamma: Bilinear,
    gamma_bar: Bilinear,
    bracket: Bilinear,
    mode: Mode,
}

impl fmt::Debug for MonadGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonadGroup")
            .field("base", &self.base)
            .field("gamma", &self.gamma)
            .finish()
    }
}

impl MonadGroup {
    pub fn new(symbol: &ConnectionSymbol, base: &[Rational], mode: Mode) -> Result<Self> {
        Ok(Self::from_gamma(symbol.at_rational(base)?, base, mode))
    }

    /// The monad group of a connection whose symbol at `base` is `gamma`.
    pub fn from_gamma(gamma: Bilinear, base: &[Rational], mode: Mode) -> Self {
        MonadGroup {
            base: base.to_vec(),
            gamma_bar: gamma.symmetric_part(),
            bracket: gamma.alternation(),
            gamma,
            mode,
        }
    }

    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn base_point(&self, sig: &Arc<AlgebraSignature>) -> Vector {
        Vector::constant(sig, &self.base)
    }

    pub fn gamma(&self) -> &Bilinear {
        &self.gamma
    }

    pub fn gamma_bar(&self) -> &Bilinear {
        &self.gamma_bar
    }

    /// `A[u,v] = Γ_P[u,v] − Γ_P[v,u]`.
    pub fn bracket_tensor(&self) -> &Bilinear {
        &self.bracket
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_zero()
    }

    fn check(&self, points: &[&Vector], what: &str) -> Result<Vector> {
        let p = self.base_point(points[0].signature());
        if self.mode == Mode::Strict {
            let all: Vec<&Vector> = std::iter::once(&p).chain(points.iter().copied()).collect();
            require_second_order(&all, what)?;
        }
        Ok(p)
    }

    pub fn mul(&self, q: &Vector, r: &Vector) -> Result<Vector> {
        self.mul_via(MulPath::Chart, q, r)
    }

    pub fn mul_via(&self, path: MulPath, q: &Vector, r: &Vector) -> Result<Vector> {
        let p = self.check(&[q, r], "mul")?;
        match path {
            MulPath::Chart => {
                let (qp, rp) = (q.checked_sub(&p)?, r.checked_sub(&p)?);
                q.checked_add(&rp)?.checked_add(&self.gamma.apply(&qp, &rp)?)
            }
            MulPath::Bch => {
                let b = self.lie_bracket(q, r)?;
                let pts = PointTuple::new(vec![q.clone(), r.clone(), b, p.clone()])?;
                let w = [int(1), int(1), half(), Rational::new((-3).into(), 2.into())];
                chart_affine_combination(&self.gamma_bar, &p, &w, &pts)
            }
            MulPath::Transport => {
                let u = chart_log(&self.gamma_bar, &p, q)?;
                let v = chart_log(&self.gamma_bar, &p, r)?;
                chart_exp(&self.gamma_bar, &p, &self.tangent_mul(&u, &v)?)
            }
        }
    }

    /// The transported law on `D₂(T_P)`: `u + v + ½A[u,v]`.
    pub fn tangent_mul(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        u.checked_add(v)?.checked_add(&self.bracket.apply(u, v)?.scale(&half()))
    }

    /// `P − q + Γ̄[q]²` for `q = Q − P`.
    pub fn inv(&self, q: &Vector) -> Result<Vector> {
        let p = self.check(&[q], "inv")?;
        let d = q.checked_sub(&p)?;
        p.checked_sub(&d)?.checked_add(&self.gamma_bar.apply(&d, &d)?)
    }

    /// The i-linear combination `−Q` at the base point, i.e. the point reflection.
    pub fn inv_by_reflection(&self, q: &Vector) -> Result<Vector> {
        let p = self.check(&[q], "inv")?;
        chart_linear_combination(&self.gamma_bar, &p, &[int(-1)], &PointTuple::new(vec![q.clone()])?)
    }

    /// `[Q,R] = P + Γ_P[q,r] − Γ_P[r,q]`.
    pub fn lie_bracket(&self, q: &Vector, r: &Vector) -> Result<Vector> {
        let p = self.check(&[q, r], "bracket")?;
        let (qp, rp) = (q.checked_sub(&p)?, r.checked_sub(&p)?);
        p.checked_add(&self.bracket.apply(&qp, &rp)?)
    }

    /// `((QR)Q⁻¹)R⁻¹` computed from the group operations alone.
    pub fn commutator(&self, q: &Vector, r: &Vector) -> Result<Vector> {
        let qr = self.mul(q, r)?;
        let t = self.mul(&qr, &self.inv(q)?)?;
        self.mul(&t, &self.inv(r)?)
    }
}

impl InfinitesimalGroup for MonadGroup {
    fn dim(&self) -> usize {
        self.base.len()
    }
    fn unit(&self, sig: &Arc<AlgebraSignature>) -> Vector {
        self.base_point(sig)
    }
    fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        MonadGroup::mul(self, a, b)
    }
    fn inv(&self, a: &Vector) -> Result<Vector> {
        MonadGroup::inv(self, a)
    }
}

/// Outcome of one axiom over all trials; `witness` describes the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomOutcome {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Names of the checks performed by [`verify_igroup_axioms`], in order.
pub const AXIOMS: [&str; 7] = [
    "associativity",
    "unit",
    "inverse",
    "neighbourhood_product",
    "neighbourhood_inverse",
    "neighbourhood_unit",
    "derived_words",
];

/// `P^α = P₁^{α₁}⋯P_k^{α_k}` with negative powers through inverses.
pub fn word<G: InfinitesimalGroup + ?Sized>(g: &G, points: &[Vector], alpha: &[i32]) -> Result<Vector> {
    let sig = points[0].signature().clone();
    let mut acc = g.unit(&sig);
    for (p, &a) in points.iter().zip(alpha) {
        let factor = if a < 0 { g.inv(p)? } else { p.clone() };
        for _ in 0..a.unsigned_abs() {
            acc = g.mul(&acc, &factor)?;
        }
    }
    Ok(acc)
}

fn second_order(points: Vec<Vector>) -> Result<bool> {
    Ok(in_istructure(IStructureKind::SecondOrder, &PointTuple::new(points)?))
}

/// Checks the i-group axioms on `trials` sampled second-order tuples around the unit.
pub fn verify_igroup_axioms<G: InfinitesimalGroup + ?Sized>(
    g: &G,
    sampler: &mut Sampler,
    trials: usize,
) -> Vec<AxiomOutcome> {
    let mut outcomes: Vec<AxiomOutcome> = AXIOMS
        .iter()
        .map(|&axiom| AxiomOutcome {
            axiom,
            passed: true,
            witness: None,
        })
        .collect();
    for trial in 0..trials {
        let results = axiom_trial(g, sampler);
        for (o, r) in outcomes.iter_mut().zip(results) {
            if o.passed {
                if let Err(w) = r {
                    o.passed = false;
                    o.witness = Some(format!("trial {trial}: {w}"));
                }
            }
        }
    }
    outcomes
}

const SAMPLE_POINTS: usize = 5;

fn axiom_trial<G: InfinitesimalGroup + ?Sized>(g: &G, sampler: &mut Sampler) -> Vec<std::result::Result<(), String>> {
    let mut setup = || -> Result<(Vector, PointTuple)> {
        let mut pool = AlgebraLayout::new()
            .for_tuple(IStructureKind::SecondOrder, SAMPLE_POINTS)
            .build(3)?;
        let sig = pool.signature().clone();
        let e = g.unit(&sig);
        let t = sample_generic(IStructureKind::SecondOrder, &e, SAMPLE_POINTS, &mut pool, sampler)?;
        Ok((e, t))
    };
    let (e, t) = match setup() {
        Ok(x) => x,
        Err(err) => return vec![Err(err.to_string()); AXIOMS.len()],
    };
    let pts = t.points();
    let (p, q, r) = (&pts[0], &pts[1], &pts[2]);
    let ctx = |what: &str| format!("{what} at P = {p}, Q = {q}, R = {r}");
    let eq = |a: Result<Vector>, b: Result<Vector>, what: &str| match (a, b) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Ok(a), Ok(b)) => Err(format!("{}: {a} ≠ {b}", ctx(what))),
        (Err(e), _) | (_, Err(e)) => Err(format!("{}: {e}", ctx(what))),
    };
    let holds = |b: Result<bool>, what: &str| match b {
        Ok(true) => Ok(()),
        Ok(false) => Err(ctx(what)),
        Err(e) => Err(format!("{}: {e}", ctx(what))),
    };
    let mut out = Vec::with_capacity(AXIOMS.len());
    out.push(eq(
        g.mul(p, q).and_then(|pq| g.mul(&pq, r)),
        g.mul(q, r).and_then(|qr| g.mul(p, &qr)),
        "(PQ)R ≠ P(QR)",
    ));
    out.push(eq(g.mul(&e, p), Ok(p.clone()), "eP ≠ P").and_then(|_| eq(g.mul(p, &e), Ok(p.clone()), "Pe ≠ P")));
    out.push(
        eq(g.inv(p).and_then(|i| g.mul(p, &i)), Ok(e.clone()), "PP⁻¹ ≠ e")
            .and_then(|_| eq(g.inv(p).and_then(|i| g.mul(&i, p)), Ok(e.clone()), "P⁻¹P ≠ e")),
    );
    out.push(holds(
        g.mul(p, q)
            .and_then(|pq| second_order(std::iter::once(pq).chain(pts[2..].iter().cloned()).collect())),
        "⟨PQ, R, …⟩ not second-order",
    ));
    out.push(holds(
        g.inv(p)
            .and_then(|i| second_order(std::iter::once(i).chain(pts[1..].iter().cloned()).collect())),
        "⟨P⁻¹, Q, …⟩ not second-order",
    ));
    out.push(holds(
        second_order(std::iter::once(e.clone()).chain(pts.iter().cloned()).collect()),
        "⟨e, P, …⟩ not second-order",
    ));
    // Three random words of length ≤ 4 in the sampled points, exponents in [−2, 2].
    let words = (|| -> Result<Vec<Vector>> {
        let mut ws = Vec::new();
        for _ in 0..3 {
            let len = 1 + sampler.index(4);
            let start = sampler.index(pts.len() - len + 1);
            let alpha: Vec<i32> = (0..len).map(|_| sampler.int_in(-2, 2) as i32).collect();
            ws.push(word(g, &pts[start..start + len], &alpha)?);
        }
        Ok(ws)
    })();
    out.push(holds(
        words.and_then(second_order),
        "⟨P^α¹, P^α², P^α³⟩ not second-order",
    ));
    out
}

/// Both sides of the base-point change formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePointChange {
    /// `exp_P(∏ⱼ μⱼ log_P(Pⱼ))`.
    pub lhs: Vector,
    /// `exp_Q(∏ⱼ μⱼ log_Q(Pⱼ))`.
    pub rhs_exp: Vector,
    /// `½ Σⱼ Σ_{k<j} μₖμⱼ (τ_Q(P,Pₖ) + τ_Q(Pⱼ,P) − 2Q)`.
    pub correction: Vector,
    /// `rhs_exp − correction`, which equals `lhs`.
    pub rhs: Vector,
}

/// `exp_X(∏ⱼ μⱼ log_X(Pⱼ))`, the product taken left to right in the tangent law at `X`.
fn transported_product(
    symbol: &ConnectionSymbol,
    symmetric: &ConnectionSymbol,
    x: &Vector,
    weights: &[Rational],
    points: &PointTuple,
) -> Result<Vector> {
    let mut k = usize::MAX;
    for pj in points.points() {
        k = k.min(offset_order(x, pj)?);
    }
    let k = k.saturating_mul(2);
    let gamma = symbol.at_for(x, k)?;
    let gbar = symmetric.at_for(x, k)?;
    let mut acc: Option<Vector> = None;
    for (mu, pj) in weights.iter().zip(points.points()) {
        let t = chart_log(&gbar, x, pj)?.scale(mu);
        acc = Some(match acc {
            None => t,
            Some(a) => {
                let br = gamma.apply(&a, &t)?.checked_sub(&gamma.apply(&t, &a)?)?;
                a.checked_add(&t)?.checked_add(&br.scale(&half()))?
            }
        });
    }
    chart_exp(&gbar, x, &acc.ok_or(Error::EmptyVector)?)
}

/// `τ_Q(X,Y) = Q − (Γ_Q[X−Q, Y−Q] − Γ_Q[Y−Q, X−Q])`.
fn chart_torsion(gamma: &dyn BilinearForm, q: &Vector, x: &Vector, y: &Vector) -> Result<Vector> {
    let (xq, yq) = (x.checked_sub(q)?, y.checked_sub(q)?);
    q.checked_sub(&gamma.apply_to(&xq, &yq)?.checked_sub(&gamma.apply_to(&yq, &xq)?)?)
}

/// Compares the non-abelian affine combination of `points` formed at base `p`
/// with the one formed at base `q`, together with the torsion correction.
pub fn base_point_change(
    symbol: &ConnectionSymbol,
    p: &Vector,
    q: &Vector,
    weights: &[Rational],
    points: &PointTuple,
    mode: Mode,
) -> Result<BasePointChange> {
    if weights.len() != points.len() || points.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: weights.len(),
        });
    }
    let total: Rational = weights.iter().sum();
    if total != int(1) {
        return Err(Error::WeightSum(total.to_string()));
    }
    if mode == Mode::Strict {
        let all: Vec<&Vector> = [p, q].into_iter().chain(points.points()).collect();
        require_second_order(&all, "base point change")?;
    }
    let symmetric = symbol.symmetrize();
    let lhs = transported_product(symbol, &symmetric, p, weights, points)?;
    let rhs_exp = transported_product(symbol, &symmetric, q, weights, points)?;
    let mut k = offset_order(q, p)?;
    for pj in points.points() {
        k = k.min(offset_order(q, pj)?);
    }
    let gamma_q = symbol.at_for(q, k.saturating_mul(2))?;
    let mut correction = Vector::zeros(q.signature(), q.dim());
    let pts = points.points();
    let two_q = q.scale(&int(2));
    for j in 0..pts.len() {
        for k in 0..j {
            let term = chart_torsion(&gamma_q, q, p, &pts[k])?
                .checked_add(&chart_torsion(&gamma_q, q, &pts[j], p)?)?
                .checked_sub(&two_q)?;
            correction = correction.checked_add(&term.scale(&(&weights[k] * &weights[j])))?;
        }
    }
    let correction = correction.scale(&half());
    let rhs = rhs_exp.checked_sub(&correction)?;
    Ok(BasePointChange {
        lhs,
        rhs_exp,
        correction,
        rhs,
    })
}
