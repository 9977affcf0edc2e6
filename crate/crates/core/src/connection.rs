//! Affine connections in a chart: `λ(P,Q,S) = Q + S − P + Γ_P[Q−P, S−P]`.
//!
//! A [`ConnectionSymbol`] stores `Γ_P` as a bilinear map whose coefficients are
//! polynomials in the base point. The chart formulas live in free functions
//! taking any [`BilinearForm`], so they can be fed either a symbol evaluated at
//! a Weil point or a cached rational tensor.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, half, parse_rational, Rational};
use crate::sample::Sampler;
use crate::spaces::{in_istructure, IStructureKind, PointTuple};
use crate::tensor::{Bilinear, BilinearForm, WeilBilinear};
use crate::weil::{monomials_of_degree, Monomial, Vector, WeilElement};

/// `Γ_P[u,v]_k = Σ_{i,j} γ_{kij}(P) u_i v_j` with polynomial coefficients `γ_{kij}`.
#[derive(Clone, PartialEq, Eq)]
pub struct ConnectionSymbol {
    dim: usize,
    degree: usize,
    /// Indexed by `(k·n + i)·n + j`; each a sparse polynomial in the base point.
    coeffs: Vec<Vec<(Monomial, Rational)>>,
    symmetric: bool,
}

impl ConnectionSymbol {
    /// Builds a symbol from entries `((i, j, k), monomial in P, coefficient)`,
    /// meaning `coefficient · P^monomial` contributes to `Γ_P[e_i, e_j]_k`.
    pub fn new<I>(dim: usize, degree: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize, usize), Monomial, Rational)>,
    {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        let mut acc: Vec<HashMap<Monomial, Rational>> = vec![HashMap::new(); dim * dim * dim];
        for ((i, j, k), m, c) in entries {
            for idx in [i, j, k].into_iter().chain(m.generators()) {
                if idx >= dim {
                    return Err(Error::GeneratorOutOfRange {
                        index: idx,
                        generators: dim,
                    });
                }
            }
            if m.degree() > degree {
                return Err(Error::Parse(format!("monomial {m} exceeds declared degree {degree}")));
            }
            *acc[(k * dim + i) * dim + j].entry(m).or_insert_with(Rational::zero) += c;
        }
        let coeffs = acc
            .into_iter()
            .map(|poly| {
                let mut v: Vec<_> = poly.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                v.sort_by(|a, b| a.0.cmp(&b.0));
                v
            })
            .collect();
        Ok(Self::from_coeffs(dim, degree, coeffs))
    }

    fn from_coeffs(dim: usize, degree: usize, coeffs: Vec<Vec<(Monomial, Rational)>>) -> Self {
        let mut s = ConnectionSymbol {
            dim,
            degree,
            coeffs,
            symmetric: false,
        };
        s.symmetric = s == s.conjugate_raw();
        s
    }

    /// A symbol that does not depend on the base point.
    pub fn constant(t: &Bilinear) -> Self {
        assert_eq!(t.out_dim(), t.dim(), "connection symbols are V × V → V");
        let n = t.dim();
        Self::new(
            n,
            0,
            t.entries().map(|(k, i, j, c)| ((i, j, k), Monomial::one(), c.clone())),
        )
        .expect("indices in range")
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(&Bilinear::zeros(dim, dim))
    }

    /// Dense random symbol with every coefficient a polynomial of degree ≤ `degree`.
    pub fn random(dim: usize, degree: usize, sampler: &mut Sampler) -> Self {
        let monomials: Vec<Monomial> = (0..=degree).flat_map(|d| monomials_of_degree(dim, d)).collect();
        let coeffs = (0..dim * dim * dim)
            .map(|_| {
                monomials
                    .iter()
                    .map(|m| (m.clone(), sampler.nonzero_rational()))
                    .collect()
            })
            .collect();
        Self::from_coeffs(dim, degree, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    fn map_slots(
        &self,
        f: impl Fn(&[(Monomial, Rational)], &[(Monomial, Rational)]) -> Vec<(Monomial, Rational)>,
    ) -> Vec<Vec<(Monomial, Rational)>> {
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    out.push(f(&self.coeffs[(k * n + i) * n + j], &self.coeffs[(k * n + j) * n + i]));
                }
            }
        }
        out
    }

    fn conjugate_raw(&self) -> Self {
        ConnectionSymbol {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.map_slots(|_, swapped| swapped.to_vec()),
            symmetric: self.symmetric,
        }
    }

    /// The symbol of `λ^op(P,Q,R) = λ(P,R,Q)`: slots swapped.
    pub fn conjugate(&self) -> Self {
        self.conjugate_raw()
    }

    /// `½(Γ_P[u,v] + Γ_P[v,u])`, the symbol of `λ̄ = ½λ + ½λ^op`.
    pub fn symmetrize(&self) -> Self {
        let coeffs = self.map_slots(|a, b| {
            let mut acc: HashMap<Monomial, Rational> = HashMap::new();
            for (m, c) in a.iter().chain(b) {
                *acc.entry(m.clone()).or_insert_with(Rational::zero) += c * half();
            }
            let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            v.sort_by(|x, y| x.0.cmp(&y.0));
            v
        });
        Self::from_coeffs(self.dim, self.degree, coeffs)
    }

    /// `Γ_P` to the degree that survives when applied to arguments whose
    /// orders add up to at least `arg_order`.
    pub fn at_for(&self, p: &Vector, arg_order: usize) -> Result<WeilBilinear> {
        let cap = p.signature().cap();
        self.at_up_to(p, (cap - 1).saturating_sub(arg_order))
    }

    fn check_point(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }

    /// `Γ_P` at a Weil-valued point.
    pub fn at(&self, p: &Vector) -> Result<WeilBilinear> {
        self.at_up_to(p, usize::MAX)
    }

    /// `Γ_P` modulo terms of degree above `max_degree`. Enough whenever the
    /// arguments it is applied to have combined order `cap − 1 − max_degree`.
    pub fn at_up_to(&self, p: &Vector, max_degree: usize) -> Result<WeilBilinear> {
        self.check_point(p.dim())?;
        let truncate = max_degree < p.signature().cap();
        let owned;
        let p = if truncate {
            owned = p.truncated(max_degree);
            &owned
        } else {
            p
        };
        let sig = p.signature();
        let mut cache: HashMap<Monomial, WeilElement> = HashMap::new();
        cache.insert(Monomial::one(), WeilElement::one(sig));
        fn value(m: &Monomial, p: &Vector, cache: &mut HashMap<Monomial, WeilElement>) -> WeilElement {
            if let Some(v) = cache.get(m) {
                return v.clone();
            }
            let g = m.generators().last().expect("degree ≥ 1");
            let v = &value(&m.divide_by_generator(g).expect("divides"), p, cache) * &p[g];
            cache.insert(m.clone(), v.clone());
            v
        }
        let data = self
            .coeffs
            .iter()
            .map(|poly| {
                let e = poly.iter().fold(WeilElement::zero(sig), |acc, (m, c)| {
                    &acc + &value(m, p, &mut cache).scale(c)
                });
                if truncate {
                    e.truncated(max_degree)
                } else {
                    e
                }
            })
            .collect();
        WeilBilinear::new(self.dim, self.dim, data)
    }

    /// `Γ_P` at a rational point.
    pub fn at_rational(&self, p: &[Rational]) -> Result<Bilinear> {
        self.check_point(p.len())?;
        let mut t = Bilinear::zeros(self.dim, self.dim);
        let n = self.dim;
        for (idx, poly) in self.coeffs.iter().enumerate() {
            let mut v = Rational::zero();
            for (m, c) in poly {
                let mut term = c.clone();
                for g in m.generators() {
                    term *= &p[g];
                }
                v += term;
            }
            t.set(idx / (n * n), (idx / n) % n, idx % n, v);
        }
        Ok(t)
    }

    /// Serializes to the documented JSON format.
    pub fn to_json(&self) -> String {
        let n = self.dim;
        let mut coeffs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for (m, c) in &self.coeffs[(k * n + i) * n + j] {
                        coeffs.push((i, j, k, m.exponents(n), format_rational(c)));
                    }
                }
            }
        }
        serde_json::to_string(&SymbolDoc {
            dim: n,
            degree: self.degree,
            coeffs,
        })
        .expect("plain data serializes")
    }

    /// Parses `{"dim": n, "degree": d, "coeffs": [[i, j, k, [exponents], "p/q"], …]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SymbolDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = doc.dim;
        let entries = doc
            .coeffs
            .into_iter()
            .map(|(i, j, k, exps, c)| {
                if exps.len() != n {
                    return Err(Error::Parse(format!(
                        "exponent vector of length {} for dimension {n}",
                        exps.len()
                    )));
                }
                Ok(((i, j, k), Monomial::from_exponents(&exps), parse_rational(&c)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, doc.degree, entries)
    }
}

impl fmt::Debug for ConnectionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConnectionSymbol({})", self.to_json())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolDoc {
    dim: usize,
    degree: usize,
    coeffs: Vec<(usize, usize, usize, Vec<u32>, String)>,
}

/// Whether neighbourhood preconditions are checked before evaluating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Strict,
    Permissive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionForm {
    /// `τ_P(Q,R) = λ(λ(P,Q,R),Q,R)`.
    Definitional,
    /// `τ_P(Q,R) = P − (Γ_P[Q−P,R−P] − Γ_P[R−P,Q−P])`.
    Chart,
}

/// Fails unless the points form a second-order tuple.
pub fn require_second_order(points: &[&Vector], what: &str) -> Result<()> {
    let tuple = PointTuple::new(points.iter().map(|p| (*p).clone()).collect())?;
    if in_istructure(IStructureKind::SecondOrder, &tuple) {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what}: arguments are not second-order neighbours"
        )))
    }
}

/// `Q + S − P + Γ[Q−P, S−P]` with `Γ` already evaluated at `P`.
pub fn chart_lambda(gamma: &dyn BilinearForm, p: &Vector, q: &Vector, s: &Vector) -> Result<Vector> {
    let qp = q.checked_sub(p)?;
    let sp = s.checked_sub(p)?;
    q.checked_add(&sp)?.checked_add(&gamma.apply_to(&qp, &sp)?)
}

/// Order of `Q − P`, saturating for `Q = P`.
pub(crate) fn offset_order(p: &Vector, q: &Vector) -> Result<usize> {
    Ok(q.checked_sub(p)?.order().unwrap_or(usize::MAX))
}

/// Least combined order of `Γ[Qᵢ−P, Qⱼ−P]` over a tuple.
fn spread_order(p: &Vector, points: &PointTuple) -> Result<usize> {
    let mut k = usize::MAX;
    for q in points.points() {
        k = k.min(offset_order(p, q)?);
    }
    Ok(k.saturating_mul(2))
}

/// `log_P(Q) = (Q−P) − ½Γ̄[Q−P]²`.
pub fn chart_log(gbar: &dyn BilinearForm, p: &Vector, q: &Vector) -> Result<Vector> {
    let v = q.checked_sub(p)?;
    v.checked_sub(&gbar.apply_to(&v, &v)?.scale(&half()))
}

/// `exp_P(v) = P + v + ½Γ̄[v]²`.
pub fn chart_exp(gbar: &dyn BilinearForm, p: &Vector, v: &Vector) -> Result<Vector> {
    p.checked_add(v)?.checked_add(&gbar.apply_to(v, v)?.scale(&half()))
}

fn check_weights(weights: &[Rational], points: &PointTuple) -> Result<()> {
    if weights.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: weights.len(),
        });
    }
    if points.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(())
}

/// `Σμⱼ Pⱼ + ½(Γ̄[Σμⱼ Pⱼ − P]² − Σμⱼ Γ̄[Pⱼ − P]²)` with `Σμⱼ = 1`.
pub fn chart_affine_combination(
    gbar: &dyn BilinearForm,
    p: &Vector,
    weights: &[Rational],
    points: &PointTuple,
) -> Result<Vector> {
    check_weights(weights, points)?;
    let total: Rational = weights.iter().sum();
    if total != Rational::from_integer(1.into()) {
        return Err(Error::WeightSum(total.to_string()));
    }
    let mut plain = Vector::zeros(p.signature(), p.dim());
    let mut spread = Vector::zeros(p.signature(), p.dim());
    for (mu, pj) in weights.iter().zip(points.points()) {
        plain = plain.checked_add(&pj.scale(mu))?;
        let d = pj.checked_sub(p)?;
        spread = spread.checked_add(&gbar.apply_to(&d, &d)?.scale(mu))?;
    }
    let d = plain.checked_sub(p)?;
    let correction = gbar.apply_to(&d, &d)?.checked_sub(&spread)?.scale(&half());
    plain.checked_add(&correction)
}

/// `P + Σμⱼ(Pⱼ − P)` formed as the affine combination of `(P, P₁, …)` with
/// weights `(1 − Σμⱼ, μ₁, …)`.
pub fn chart_linear_combination(
    gbar: &dyn BilinearForm,
    p: &Vector,
    weights: &[Rational],
    points: &PointTuple,
) -> Result<Vector> {
    check_weights(weights, points)?;
    let one = Rational::from_integer(1.into());
    let total: Rational = weights.iter().sum();
    let mut w = vec![one - total];
    w.extend(weights.iter().cloned());
    chart_affine_combination(gbar, p, &w, &points.with_first(p.clone())?)
}

/// An affine connection given by its symbol.
#[derive(Clone, Debug)]
pub struct Connection {
    symbol: ConnectionSymbol,
    mode: Mode,
}

impl Connection {
    pub fn new(symbol: ConnectionSymbol, mode: Mode) -> Self {
        Connection { symbol, mode }
    }

    pub fn symbol(&self) -> &ConnectionSymbol {
        &self.symbol
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn lambda(&self, p: &Vector, q: &Vector, s: &Vector) -> Result<Vector> {
        if self.mode == Mode::Strict {
            require_second_order(&[p, q, s], "lambda")?;
        }
        let k = offset_order(p, q)?.saturating_add(offset_order(p, s)?);
        chart_lambda(&self.symbol.at_for(p, k)?, p, q, s)
    }

    pub fn torsion(&self, p: &Vector, q: &Vector, r: &Vector, form: TorsionForm) -> Result<Vector> {
        match form {
            TorsionForm::Definitional => {
                let inner = self.lambda(p, q, r)?;
                self.lambda(&inner, q, r)
            }
            TorsionForm::Chart => {
                if self.mode == Mode::Strict {
                    require_second_order(&[p, q, r], "torsion")?;
                }
                let k = offset_order(p, q)?.saturating_add(offset_order(p, r)?);
                let g = self.symbol.at_for(p, k)?;
                let (qp, rp) = (q.checked_sub(p)?, r.checked_sub(p)?);
                p.checked_sub(&g.apply(&qp, &rp)?.checked_sub(&g.apply(&rp, &qp)?)?)
            }
        }
    }
}

/// A symmetric connection and the second-order i-affine structure it induces.
#[derive(Clone, Debug)]
pub struct SymmetricConnection {
    symbol: ConnectionSymbol,
    mode: Mode,
}

impl SymmetricConnection {
    pub fn new(symbol: ConnectionSymbol, mode: Mode) -> Result<Self> {
        if !symbol.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(SymmetricConnection { symbol, mode })
    }

    pub fn symbol(&self) -> &ConnectionSymbol {
        &self.symbol
    }

    fn require_monad(&self, p: &Vector, q: &Vector, what: &str) -> Result<()> {
        if self.mode == Mode::Strict {
            require_second_order(&[p, q], what)?;
        }
        Ok(())
    }

    pub fn log(&self, p: &Vector, q: &Vector) -> Result<Vector> {
        self.require_monad(p, q, "log")?;
        let k = offset_order(p, q)?;
        chart_log(&self.symbol.at_for(p, k.saturating_mul(2))?, p, q)
    }

    pub fn exp(&self, p: &Vector, v: &Vector) -> Result<Vector> {
        if self.mode == Mode::Strict && !crate::spaces::in_d2(v) {
            return Err(Error::Precondition("exp: argument is not in D₂".into()));
        }
        let k = v.order().unwrap_or(usize::MAX);
        chart_exp(&self.symbol.at_for(p, k.saturating_mul(2))?, p, v)
    }

    pub fn affine_combination(&self, p: &Vector, weights: &[Rational], points: &PointTuple) -> Result<Vector> {
        if self.mode == Mode::Strict {
            let all: Vec<&Vector> = std::iter::once(p).chain(points.points()).collect();
            require_second_order(&all, "affine combination")?;
        }
        let k = spread_order(p, points)?;
        chart_affine_combination(&self.symbol.at_for(p, k)?, p, weights, points)
    }

    pub fn linear_combination(&self, p: &Vector, weights: &[Rational], points: &PointTuple) -> Result<Vector> {
        if self.mode == Mode::Strict {
            let all: Vec<&Vector> = std::iter::once(p).chain(points.points()).collect();
            require_second_order(&all, "linear combination")?;
        }
        let k = spread_order(p, points)?;
        chart_linear_combination(&self.symbol.at_for(p, k)?, p, weights, points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::sample::DEFAULT_RANGE;
    use crate::spaces::{in_d, sample_generic, AlgebraLayout};

    struct Setup {
        p: Vector,
        pts: PointTuple,
    }

    fn setup(n: usize, m: usize, s: &mut Sampler) -> Setup {
        let mut pool = AlgebraLayout::new()
            .for_tuple(IStructureKind::SecondOrder, m)
            .build(3)
            .unwrap();
        let sig = pool.signature().clone();
        let p = Vector::constant(&sig, &s.rationals(n));
        let pts = sample_generic(IStructureKind::SecondOrder, &p, m, &mut pool, s).unwrap();
        Setup { p, pts }
    }

    #[test]
    fn lambda_equations() {
        let mut s = Sampler::new(1, DEFAULT_RANGE);
        let c = Connection::new(ConnectionSymbol::random(3, 2, &mut s), Mode::Strict);
        let Setup { p, pts } = setup(3, 2, &mut s);
        let (q, r) = (pts.get(0), pts.get(1));
        assert_eq!(&c.lambda(&p, q, &p).unwrap(), q);
        assert_eq!(&c.lambda(&p, &p, r).unwrap(), r);
        let flat = Connection::new(ConnectionSymbol::zero(3), Mode::Strict);
        assert_eq!(flat.lambda(&p, q, r).unwrap(), &(q + r) - &p);
    }

    #[test]
    fn strict_mode_rejects_distant_points() {
        let mut s = Sampler::new(2, 100);
        let c = Connection::new(ConnectionSymbol::random(2, 1, &mut s), Mode::Strict);
        let Setup { p, pts } = setup(2, 1, &mut s);
        let far = Vector::constant(p.signature(), &[int(1000), int(1)]);
        assert!(matches!(c.lambda(&p, pts.get(0), &far), Err(Error::Precondition(_))));
        let loose = Connection::new(c.symbol().clone(), Mode::Permissive);
        assert!(loose.lambda(&p, pts.get(0), &far).is_ok());
    }

    #[test]
    fn symmetrize_and_conjugate() {
        let mut s = Sampler::new(3, 100);
        let g = ConnectionSymbol::random(2, 2, &mut s);
        assert!(!g.is_symmetric());
        let sym = g.symmetrize();
        assert!(sym.is_symmetric());
        assert_eq!(sym.symmetrize(), sym);
        assert_eq!(g.conjugate().symmetrize(), sym);
        assert_eq!(g.conjugate().conjugate(), g);
        let mp = ConnectionSymbol::constant(&Bilinear::matrix_product(2));
        let want = Bilinear::matrix_product(2)
            .add(&Bilinear::matrix_product(2).transpose_slots())
            .scale(&half());
        assert_eq!(mp.symmetrize().at_rational(&vec![int(0); 4]).unwrap(), want);
    }

    #[test]
    fn torsion_forms_agree() {
        let mut s = Sampler::new(4, DEFAULT_RANGE);
        for n in 1..=3 {
            let c = Connection::new(ConnectionSymbol::random(n, 2, &mut s), Mode::Strict);
            let Setup { p, pts } = setup(n, 2, &mut s);
            let (q, r) = (pts.get(0), pts.get(1));
            let a = c.torsion(&p, q, r, TorsionForm::Definitional).unwrap();
            let b = c.torsion(&p, q, r, TorsionForm::Chart).unwrap();
            assert_eq!(a, b);
            assert_eq!(c.torsion(&p, q, &p, TorsionForm::Definitional).unwrap(), p);
            assert_eq!(c.torsion(&p, &p, r, TorsionForm::Definitional).unwrap(), p);
            let sym = Connection::new(c.symbol().symmetrize(), Mode::Strict);
            assert_eq!(sym.torsion(&p, q, r, TorsionForm::Definitional).unwrap(), p);
        }
    }

    #[test]
    fn truncated_symbol_gives_the_same_lambda() {
        let mut s = Sampler::new(11, DEFAULT_RANGE);
        let g = ConnectionSymbol::random(3, 2, &mut s);
        let Setup { p, pts } = setup(3, 3, &mut s);
        let (q, r) = (pts.get(0), pts.get(1));
        let x = chart_lambda(&g.at(&p).unwrap(), &p, q, r).unwrap();
        for (a, b) in [(&x, q), (q, &x), (r, q)] {
            let full = chart_lambda(&g.at(a).unwrap(), a, b, pts.get(2)).unwrap();
            let k = offset_order(a, b).unwrap() + offset_order(a, pts.get(2)).unwrap();
            let cut = chart_lambda(&g.at_for(a, k).unwrap(), a, b, pts.get(2)).unwrap();
            assert_eq!(full, cut);
        }
        assert!(g.at_up_to(q, 0).unwrap().constant_part() == g.at(q).unwrap().constant_part());
    }

    #[test]
    fn torsion_lies_in_the_first_order_monad() {
        let mut s = Sampler::new(5, DEFAULT_RANGE);
        let c = Connection::new(ConnectionSymbol::random(3, 1, &mut s), Mode::Strict);
        let Setup { p, pts } = setup(3, 2, &mut s);
        let (q, r) = (pts.get(0), pts.get(1));
        let t = &c.torsion(&p, q, r, TorsionForm::Chart).unwrap() - &p;
        assert!(in_d(&t));
        for d in [q - &p, r - &p] {
            assert!(t.iter().all(|a| d.iter().all(|b| (a * b).is_zero())));
        }
    }

    #[test]
    fn log_exp_round_trip() {
        let mut s = Sampler::new(6, DEFAULT_RANGE);
        let c = SymmetricConnection::new(ConnectionSymbol::random(3, 2, &mut s).symmetrize(), Mode::Strict).unwrap();
        let Setup { p, pts } = setup(3, 2, &mut s);
        let q = pts.get(0);
        let v = c.log(&p, q).unwrap();
        assert_eq!(&c.exp(&p, &v).unwrap(), q);
        let w = pts.get(1) - &p;
        assert_eq!(c.log(&p, &c.exp(&p, &w).unwrap()).unwrap(), w);
        assert!(c.log(&p, &p).unwrap().is_zero());
        let flat = SymmetricConnection::new(ConnectionSymbol::zero(3), Mode::Strict).unwrap();
        assert_eq!(flat.log(&p, q).unwrap(), q - &p);
        assert!(matches!(
            SymmetricConnection::new(ConnectionSymbol::random(2, 0, &mut s), Mode::Strict),
            Err(Error::NotSymmetric)
        ));
    }

    #[test]
    fn affine_combination_examples() {
        let mut s = Sampler::new(7, DEFAULT_RANGE);
        let c = SymmetricConnection::new(ConnectionSymbol::random(2, 2, &mut s).symmetrize(), Mode::Strict).unwrap();
        let Setup { p, pts } = setup(2, 3, &mut s);
        for k in 0..3 {
            let mut w = vec![int(0); 3];
            w[k] = int(1);
            assert_eq!(&c.affine_combination(&p, &w, &pts).unwrap(), pts.get(k));
        }
        let mid = c
            .affine_combination(&p, &[half(), half()], &pts.reindex(&[0, 1]))
            .unwrap();
        let logs = &c.log(&p, pts.get(0)).unwrap() + &c.log(&p, pts.get(1)).unwrap();
        assert_eq!(mid, c.exp(&p, &logs.scale(&half())).unwrap());
        assert!(matches!(
            c.affine_combination(&p, &[int(1), int(1)], &pts.reindex(&[0, 1])),
            Err(Error::WeightSum(_))
        ));
        let flat = SymmetricConnection::new(ConnectionSymbol::zero(2), Mode::Strict).unwrap();
        let w = [rat(1, 3), rat(2, 3)];
        assert_eq!(
            flat.affine_combination(&p, &w, &pts.reindex(&[0, 1])).unwrap(),
            &pts.get(0).scale(&w[0]) + &pts.get(1).scale(&w[1])
        );
    }

    #[test]
    fn affine_combinations_do_not_depend_on_the_base() {
        let mut s = Sampler::new(8, DEFAULT_RANGE);
        let c = SymmetricConnection::new(ConnectionSymbol::random(3, 2, &mut s).symmetrize(), Mode::Strict).unwrap();
        let Setup { p, pts } = setup(3, 4, &mut s);
        let w = [s.rational(), s.rational(), s.rational()];
        let w = [w[0].clone(), w[1].clone(), &(&int(1) - &w[0]) - &w[1]];
        let t = pts.reindex(&[0, 1, 2]);
        let from_p = c.affine_combination(&p, &w, &t).unwrap();
        let from_q = c.affine_combination(pts.get(3), &w, &t).unwrap();
        assert_eq!(from_p, from_q);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let mut s = Sampler::new(9, 100);
        let g = ConnectionSymbol::random(2, 2, &mut s);
        assert_eq!(ConnectionSymbol::from_json(&g.to_json()).unwrap(), g);
        let doc = r#"{"dim": 2, "degree": 1, "coeffs": [[0, 1, 1, [1, 0], "3/4"], [1, 0, 0, [0, 0], "-2"]]}"#;
        let g = ConnectionSymbol::from_json(doc).unwrap();
        let t = g.at_rational(&[int(2), int(5)]).unwrap();
        assert_eq!(*t.get(1, 0, 1), rat(3, 2));
        assert_eq!(*t.get(0, 1, 0), int(-2));
        for bad in [
            r#"{"dim": 2, "degree": 1, "coeffs": [], "extra": 1}"#,
            r#"{"dim": 2, "degree": 0, "coeffs": [[0, 0, 0, [1, 0], "1"]]}"#,
            r#"{"dim": 2, "degree": 1, "coeffs": [[0, 0, 2, [0, 0], "1"]]}"#,
            r#"{"dim": 2, "degree": 1, "coeffs": [[0, 0, 0, [0], "1"]]}"#,
            r#"{"dim": 2, "degree": 1, "coeffs": [[0, 0, 0, [0, 0], "1/0"]]}"#,
        ] {
            assert!(ConnectionSymbol::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn weil_and_rational_evaluation_agree() {
        let mut s = Sampler::new(10, 100);
        let g = ConnectionSymbol::random(3, 2, &mut s);
        let p = s.rationals(3);
        let sig = crate::weil::make_algebra(1, 3, &[]).unwrap();
        assert_eq!(
            g.at(&Vector::constant(&sig, &p)).unwrap().constant_part(),
            g.at_rational(&p).unwrap()
        );
    }
}
