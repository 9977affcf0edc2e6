//! Kock–Lawvere normal forms of maps, read off by evaluating on fresh generators.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{half, Rational};
use crate::sample::Sampler;
use crate::spaces::random_displacement;
use crate::tensor::{apply_linear, Bilinear};
use crate::weil::{make_algebra, monomials_of_degree, AlgebraSignature, Monomial, Vector, WeilElement};

/// A map `Rⁿ → R^w` that can be evaluated over any signature.
pub trait PolyMap {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn eval(&self, x: &Vector) -> Result<Vector>;
}

/// A map `Rⁿ × Rⁿ → R^w` that can be evaluated over any signature.
pub trait BinaryMap {
    fn arg_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn eval(&self, v: &Vector, w: &Vector) -> Result<Vector>;
}

/// Adapts a closure to [`PolyMap`].
pub struct FnMap<F> {
    input: usize,
    output: usize,
    f: F,
}

impl<F: Fn(&Vector) -> Result<Vector>> FnMap<F> {
    pub fn new(input: usize, output: usize, f: F) -> Self {
        FnMap { input, output, f }
    }
}

impl<F: Fn(&Vector) -> Result<Vector>> PolyMap for FnMap<F> {
    fn input_dim(&self) -> usize {
        self.input
    }
    fn output_dim(&self) -> usize {
        self.output
    }
    fn eval(&self, x: &Vector) -> Result<Vector> {
        (self.f)(x)
    }
}

/// Adapts a closure to [`BinaryMap`].
pub struct FnBinaryMap<F> {
    arg: usize,
    output: usize,
    f: F,
}

impl<F: Fn(&Vector, &Vector) -> Result<Vector>> FnBinaryMap<F> {
    pub fn new(arg: usize, output: usize, f: F) -> Self {
        FnBinaryMap { arg, output, f }
    }
}

impl<F: Fn(&Vector, &Vector) -> Result<Vector>> BinaryMap for FnBinaryMap<F> {
    fn arg_dim(&self) -> usize {
        self.arg
    }
    fn output_dim(&self) -> usize {
        self.output
    }
    fn eval(&self, v: &Vector, w: &Vector) -> Result<Vector> {
        (self.f)(v, w)
    }
}

/// Views a map on `R²ⁿ` as a binary map on `Rⁿ × Rⁿ`.
pub struct Split<M>(pub M);

impl<M: PolyMap> BinaryMap for Split<M> {
    fn arg_dim(&self) -> usize {
        self.0.input_dim() / 2
    }
    fn output_dim(&self) -> usize {
        self.0.output_dim()
    }
    fn eval(&self, v: &Vector, w: &Vector) -> Result<Vector> {
        self.0.eval(&v.concat(w)?)
    }
}

/// A polynomial map with rational coefficients, one sparse polynomial per output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialMap {
    input: usize,
    components: Vec<Vec<(Monomial, Rational)>>,
}

impl PolynomialMap {
    pub fn new(input: usize, components: Vec<Vec<(Monomial, Rational)>>) -> Result<Self> {
        if input == 0 || components.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (m, _) in components.iter().flatten() {
            if let Some(g) = m.generators().find(|&g| g >= input) {
                return Err(Error::GeneratorOutOfRange {
                    index: g,
                    generators: input,
                });
            }
        }
        Ok(PolynomialMap { input, components })
    }

    /// Dense random polynomial of total degree ≤ `degree` in every component.
    pub fn random(input: usize, output: usize, degree: usize, sampler: &mut Sampler) -> Self {
        let monomials: Vec<Monomial> = (0..=degree).flat_map(|d| monomials_of_degree(input, d)).collect();
        let components = (0..output)
            .map(|_| monomials.iter().map(|m| (m.clone(), sampler.rational())).collect())
            .collect();
        PolynomialMap { input, components }
    }

    pub fn degree(&self) -> usize {
        self.components
            .iter()
            .flatten()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    /// Evaluates at rational coordinates.
    pub fn eval_rational(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        let sig = make_algebra(1, 1, &[])?;
        Ok(PolyMap::eval(self, &Vector::constant(&sig, x))?.constant_part())
    }
}

impl PolyMap for PolynomialMap {
    fn input_dim(&self) -> usize {
        self.input
    }

    fn output_dim(&self) -> usize {
        self.components.len()
    }

    fn eval(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.input {
            return Err(Error::DimensionMismatch {
                expected: self.input,
                found: x.dim(),
            });
        }
        let sig = x.signature();
        let mut values: HashMap<Monomial, WeilElement> = HashMap::new();
        values.insert(Monomial::one(), WeilElement::one(sig));
        let mut value_of = |m: &Monomial| -> WeilElement {
            fn go(m: &Monomial, x: &Vector, values: &mut HashMap<Monomial, WeilElement>) -> WeilElement {
                if let Some(v) = values.get(m) {
                    return v.clone();
                }
                let g = m.generators().last().expect("degree ≥ 1");
                let rest = m.divide_by_generator(g).expect("divides");
                let v = &go(&rest, x, values) * &x[g];
                values.insert(m.clone(), v.clone());
                v
            }
            go(m, x, &mut values)
        };
        let out = self
            .components
            .iter()
            .map(|poly| {
                poly.iter()
                    .fold(WeilElement::zero(sig), |acc, (m, c)| &acc + &value_of(m).scale(c))
            })
            .collect();
        Vector::new(out)
    }
}

/// Value and derivative at a point: `f(P + d) = f(P) + ∂f(P)[d]` for `d ∈ D(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRep {
    pub value: Vec<Rational>,
    pub derivative: Matrix,
}

/// Second-order Taylor data: `f(P + d) = f(P) + ∂f(P)[d] + ½∂²f(P)[d]²` for `d ∈ D₂(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRep {
    pub value: Vec<Rational>,
    pub derivative: Matrix,
    pub second_derivative: Bilinear,
}

impl QuadraticRep {
    /// Right-hand side of the Taylor formula at displacement `d`.
    pub fn taylor(&self, d: &Vector) -> Result<Vector> {
        let sig = d.signature();
        let value = Vector::constant(sig, &self.value);
        let lin = apply_linear(&self.derivative, d)?;
        let quad = self.second_derivative.apply(d, d)?.scale(&half());
        Ok(&(&value + &lin) + &quad)
    }
}

fn rational_base(base: &Vector) -> Result<Vec<Rational>> {
    if !base.is_constant() {
        return Err(Error::NonConstantBase);
    }
    Ok(base.constant_part())
}

fn inconsistent(k: usize, m: &Monomial) -> Error {
    Error::InconsistentMap(format!("output {k} has unexpected term {m}"))
}

/// `base + Σᵢ e_{gens[i]} uᵢ` over `sig`.
fn displaced(sig: &Arc<AlgebraSignature>, base: &[Rational], gens: &[usize]) -> Result<Vector> {
    let entries = base
        .iter()
        .zip(gens)
        .map(|(c, &g)| Ok(&WeilElement::constant(sig, c.clone()) + &WeilElement::generator(sig, g)?))
        .collect::<Result<Vec<_>>>()?;
    Vector::new(entries)
}

fn check_input(f: &dyn PolyMap, n: usize) -> Result<()> {
    if f.input_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: f.input_dim(),
            found: n,
        });
    }
    Ok(())
}

fn check_output(f: &dyn PolyMap, y: &Vector) -> Result<()> {
    if y.dim() != f.output_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.output_dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

/// Value and derivative of `f` at a rational point, read from a square-zero block.
pub fn extract_affine(f: &dyn PolyMap, base: &Vector) -> Result<AffineRep> {
    let n = base.dim();
    let sig = make_algebra(n, 2, &[])?;
    extract_affine_along(f, &rational_base(base)?, &sig, &(0..n).collect::<Vec<_>>())
}

/// As [`extract_affine`], using the given generators of `sig` as the
/// directions. The generators must form a square-zero block.
pub fn extract_affine_along(
    f: &dyn PolyMap,
    base: &[Rational],
    sig: &Arc<AlgebraSignature>,
    gens: &[usize],
) -> Result<AffineRep> {
    let n = base.len();
    check_input(f, n)?;
    if gens.len() != n {
        return Err(Error::SignatureTooSmall {
            what: "direction generators".into(),
            required: n,
            available: gens.len(),
        });
    }
    let y = f.eval(&displaced(sig, base, gens)?)?;
    check_output(f, &y)?;
    let slot: HashMap<usize, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let mut derivative = Matrix::zeros(y.dim(), n);
    for (k, yk) in y.iter().enumerate() {
        for (m, c) in yk.terms() {
            match m.degree() {
                0 => {}
                1 => match slot.get(&m.generators().next().expect("degree 1")) {
                    Some(&i) => derivative[(k, i)] = c.clone(),
                    None => return Err(inconsistent(k, m)),
                },
                _ => return Err(inconsistent(k, m)),
            }
        }
    }
    Ok(AffineRep {
        value: y.constant_part(),
        derivative,
    })
}

/// Value, derivative and (symmetric) second derivative of `f` at a rational point.
pub fn extract_quadratic(f: &dyn PolyMap, base: &Vector) -> Result<QuadraticRep> {
    let n = base.dim();
    let sig = make_algebra(n, 3, &[])?;
    extract_quadratic_along(f, &rational_base(base)?, &sig, &(0..n).collect::<Vec<_>>())
}

/// As [`extract_quadratic`], using the given free generators of a cap-3
/// signature as the directions.
pub fn extract_quadratic_along(
    f: &dyn PolyMap,
    base: &[Rational],
    sig: &Arc<AlgebraSignature>,
    gens: &[usize],
) -> Result<QuadraticRep> {
    let n = base.len();
    check_input(f, n)?;
    if gens.len() != n {
        return Err(Error::SignatureTooSmall {
            what: "direction generators".into(),
            required: n,
            available: gens.len(),
        });
    }
    let y = f.eval(&displaced(sig, base, gens)?)?;
    check_output(f, &y)?;
    let slot: HashMap<usize, usize> = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let w = y.dim();
    let mut derivative = Matrix::zeros(w, n);
    let mut hessian = Bilinear::zeros(w, n);
    for (k, yk) in y.iter().enumerate() {
        for (m, c) in yk.terms() {
            let idx: Option<Vec<usize>> = m.generators().map(|g| slot.get(&g).copied()).collect();
            let Some(idx) = idx else {
                return Err(inconsistent(k, m));
            };
            match idx[..] {
                [] => {}
                [i] => derivative[(k, i)] = c.clone(),
                // ½ H_ii e_i² and H_ij e_i e_j (i ≠ j) in the Taylor expansion.
                [i, j] if i == j => hessian.set(k, i, i, c * Rational::from_integer(2.into())),
                [i, j] => {
                    hessian.set(k, i, j, c.clone());
                    hessian.set(k, j, i, c.clone());
                }
                _ => return Err(inconsistent(k, m)),
            }
        }
    }
    Ok(QuadraticRep {
        value: y.constant_part(),
        derivative,
        second_derivative: hessian,
    })
}

/// The normal form `a₀ + A₁[δ] + B₁[ε] + A₂[δ]² + B₂[ε]² + C₂[δ,ε]` of a map on `D̃₂(2,Rⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticMapRep {
    pub a0: Vec<Rational>,
    pub a1: Matrix,
    pub b1: Matrix,
    pub a2: Bilinear,
    pub b2: Bilinear,
    pub c2: Bilinear,
}

impl QuadraticMapRep {
    pub fn arg_dim(&self) -> usize {
        self.a1.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.a0.len()
    }

    pub fn eval(&self, delta: &Vector, eps: &Vector) -> Result<Vector> {
        let sig = delta.signature();
        let mut out = Vector::constant(sig, &self.a0);
        out = out.checked_add(&apply_linear(&self.a1, delta)?)?;
        out = out.checked_add(&apply_linear(&self.b1, eps)?)?;
        out = out.checked_add(&self.a2.apply(delta, delta)?)?;
        out = out.checked_add(&self.b2.apply(eps, eps)?)?;
        out.checked_add(&self.c2.apply(delta, eps)?)
    }
}

impl BinaryMap for QuadraticMapRep {
    fn arg_dim(&self) -> usize {
        QuadraticMapRep::arg_dim(self)
    }
    fn output_dim(&self) -> usize {
        QuadraticMapRep::output_dim(self)
    }
    fn eval(&self, v: &Vector, w: &Vector) -> Result<Vector> {
        QuadraticMapRep::eval(self, v, w)
    }
}

/// Seed of the internal re-evaluation check in [`extract_binary_quadratic`].
const ROUND_TRIP_SEED: u64 = 0x5d6_2e11;

/// A generic pair `(δ, ε) ∈ D̃₂(2,Rⁿ)` over a fresh cap-3 algebra with two
/// generators per vector and random linear and quadratic parts.
pub fn sample_dtilde2(n: usize, sampler: &mut Sampler) -> Result<(Vector, Vector)> {
    let sig = make_algebra(4, 3, &[])?;
    let d = random_displacement(&sig, n, &[0, 1], true, sampler);
    let e = random_displacement(&sig, n, &[2, 3], true, sampler);
    Ok((d, e))
}

/// Reads the unique normal form of `m` from one evaluation on `2n` free
/// generators, then re-evaluates on a random `D̃₂` pair and reports any residual.
pub fn extract_binary_quadratic(m: &dyn BinaryMap) -> Result<QuadraticMapRep> {
    let mut sampler = Sampler::new(ROUND_TRIP_SEED, crate::sample::DEFAULT_RANGE);
    let rep = read_binary_quadratic(m)?;
    verify_binary_quadratic(m, &rep, &mut sampler, 1)?;
    Ok(rep)
}

fn read_binary_quadratic(m: &dyn BinaryMap) -> Result<QuadraticMapRep> {
    let n = m.arg_dim();
    let sig = make_algebra(2 * n, 3, &[])?;
    let zeros = vec![Rational::zero(); n];
    let delta = displaced(&sig, &zeros, &(0..n).collect::<Vec<_>>())?;
    let eps = displaced(&sig, &zeros, &(n..2 * n).collect::<Vec<_>>())?;
    let y = m.eval(&delta, &eps)?;
    let w = y.dim();
    if w != m.output_dim() {
        return Err(Error::DimensionMismatch {
            expected: m.output_dim(),
            found: w,
        });
    }
    let mut rep = QuadraticMapRep {
        a0: y.constant_part(),
        a1: Matrix::zeros(w, n),
        b1: Matrix::zeros(w, n),
        a2: Bilinear::zeros(w, n),
        b2: Bilinear::zeros(w, n),
        c2: Bilinear::zeros(w, n),
    };
    for (k, yk) in y.iter().enumerate() {
        for (mono, c) in yk.terms() {
            let g: Vec<usize> = mono.generators().collect();
            match g[..] {
                [] => {}
                [i] if i < n => rep.a1[(k, i)] = c.clone(),
                [i] => rep.b1[(k, i - n)] = c.clone(),
                [i, j] => {
                    let (t, i, j) = match (i < n, j < n) {
                        (true, true) => (&mut rep.a2, i, j),
                        (false, false) => (&mut rep.b2, i - n, j - n),
                        _ => {
                            rep.c2.set(k, i, j - n, c.clone());
                            continue;
                        }
                    };
                    // Symmetric tensors: e_i e_j with i ≠ j collects t_kij + t_kji.
                    if i == j {
                        t.set(k, i, i, c.clone());
                    } else {
                        let h = c * half();
                        t.set(k, i, j, h.clone());
                        t.set(k, j, i, h);
                    }
                }
                _ => return Err(inconsistent(k, mono)),
            }
        }
    }
    Ok(rep)
}

/// Compares `m` with `rep` on `trials` fresh random `D̃₂` pairs.
pub fn verify_binary_quadratic(
    m: &dyn BinaryMap,
    rep: &QuadraticMapRep,
    sampler: &mut Sampler,
    trials: usize,
) -> Result<()> {
    for _ in 0..trials {
        let (d, e) = sample_dtilde2(m.arg_dim(), sampler)?;
        let got = m.eval(&d, &e)?;
        let want = rep.eval(&d, &e)?;
        if got != want {
            return Err(Error::InconsistentMap(format!(
                "residual {} at δ = {d}, ε = {e}",
                got.checked_sub(&want)?
            )));
        }
    }
    Ok(())
}
