//! Rational bilinear maps `Rⁿ × Rⁿ → R^w` and their Weil-valued counterparts.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{half, Rational};
use crate::sample::Sampler;
use crate::weil::{AlgebraSignature, Vector, WeilElement};

/// `T[u,v]_k = Σ_{i,j} t_{kij} u_i v_j` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bilinear {
    out: usize,
    dim: usize,
    data: Vec<Rational>,
}

impl Bilinear {
    pub fn zeros(out: usize, dim: usize) -> Self {
        Bilinear {
            out,
            dim,
            data: vec![Rational::zero(); out * dim * dim],
        }
    }

    /// Builds `T` from a function of `(k, i, j)`.
    pub fn from_fn(out: usize, dim: usize, f: impl Fn(usize, usize, usize) -> Rational) -> Self {
        let mut t = Self::zeros(out, dim);
        for k in 0..out {
            for i in 0..dim {
                for j in 0..dim {
                    t.data[(k * dim + i) * dim + j] = f(k, i, j);
                }
            }
        }
        t
    }

    pub fn random(out: usize, dim: usize, sampler: &mut Sampler) -> Self {
        Bilinear {
            out,
            dim,
            data: sampler.rationals(out * dim * dim),
        }
    }

    /// The matrix product `(q, r) ↦ q·r` on row-major `n×n` matrices.
    pub fn matrix_product(n: usize) -> Self {
        let one = Rational::from_integer(1.into());
        let mut t = Self::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    t.set(a * n + b, a * n + c, c * n + b, one.clone());
                }
            }
        }
        t
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.data[(k * self.dim + i) * self.dim + j]
    }

    pub fn set(&mut self, k: usize, i: usize, j: usize, value: Rational) {
        self.data[(k * self.dim + i) * self.dim + j] = value;
    }

    /// Nonzero entries as `(k, i, j, t_kij)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        let d = self.dim;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / (d * d), (idx / d) % d, idx % d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `T'[u,v] = T[v,u]`.
    pub fn transpose_slots(&self) -> Self {
        Self::from_fn(self.out, self.dim, |k, i, j| self.get(k, j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose_slots()
    }

    pub fn add(&self, other: &Bilinear) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Bilinear) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Bilinear {
            out: self.out,
            dim: self.dim,
            data: self.data.iter().map(|c| c * r).collect(),
        }
    }

    /// `½(T[u,v] + T[v,u])`.
    pub fn symmetric_part(&self) -> Self {
        self.add(&self.transpose_slots()).scale(&half())
    }

    /// `T[u,v] − T[v,u]`.
    pub fn alternation(&self) -> Self {
        self.sub(&self.transpose_slots())
    }

    fn zip(&self, other: &Bilinear, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!((self.out, self.dim), (other.out, other.dim), "tensor shape mismatch");
        Bilinear {
            out: self.out,
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn apply_rational(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(u.len())?;
        self.check_len(v.len())?;
        let mut out = vec![Rational::zero(); self.out];
        for (k, i, j, c) in self.entries() {
            out[k] += c * &u[i] * &v[j];
        }
        Ok(out)
    }

    /// Evaluates `T[u,v]` on Weil-valued vectors.
    pub fn apply(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        self.check_len(u.dim())?;
        self.check_len(v.dim())?;
        if !u.same_signature(v) {
            return Err(Error::SignatureMismatch);
        }
        let products = outer(u, v);
        let sig = u.signature();
        let mut out = vec![WeilElement::zero(sig); self.out];
        for (k, i, j, c) in self.entries() {
            out[k] = &out[k] + &products[i * self.dim + j].scale(c);
        }
        Vector::new(out)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            })
        }
    }
}

impl fmt::Display for Bilinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "{{")?;
        for (k, i, j, c) in self.entries() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "({k},{i},{j}): {c}")?;
        }
        write!(f, "}}")
    }
}

fn outer(u: &Vector, v: &Vector) -> Vec<WeilElement> {
    let mut p = Vec::with_capacity(u.dim() * v.dim());
    for a in u.iter() {
        for b in v.iter() {
            p.push(a * b);
        }
    }
    p
}

/// A bilinear map whose coefficients are Weil elements, e.g. `Γ_P` at a Weil point `P`.
#[derive(Clone, Debug)]
pub struct WeilBilinear {
    out: usize,
    dim: usize,
    data: Vec<WeilElement>,
}

impl WeilBilinear {
    pub fn new(out: usize, dim: usize, data: Vec<WeilElement>) -> Result<Self> {
        if data.len() != out * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: out * dim * dim,
                found: data.len(),
            });
        }
        Ok(WeilBilinear { out, dim, data })
    }

    pub fn from_rational(t: &Bilinear, sig: &Arc<AlgebraSignature>) -> Self {
        WeilBilinear {
            out: t.out,
            dim: t.dim,
            data: t.data.iter().map(|c| WeilElement::constant(sig, c.clone())).collect(),
        }
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &WeilElement {
        &self.data[(k * self.dim + i) * self.dim + j]
    }

    /// The rational tensor of constant terms.
    pub fn constant_part(&self) -> Bilinear {
        Bilinear {
            out: self.out,
            dim: self.dim,
            data: self.data.iter().map(WeilElement::constant_term).collect(),
        }
    }

    pub fn apply(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        for n in [u.dim(), v.dim()] {
            if n != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: n,
                });
            }
        }
        let products = outer(u, v);
        let sig = u.signature();
        let mut out = vec![WeilElement::zero(sig); self.out];
        for (idx, c) in self.data.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (k, ij) = (idx / (self.dim * self.dim), idx % (self.dim * self.dim));
            let p = &products[ij];
            if p.is_zero() {
                continue;
            }
            out[k] = out[k].checked_add(&c.checked_mul(p)?)?;
        }
        Vector::new(out)
    }
}

/// Anything that evaluates as a bilinear map on Weil vectors.
pub trait BilinearForm {
    fn apply_to(&self, u: &Vector, v: &Vector) -> Result<Vector>;
}

impl BilinearForm for Bilinear {
    fn apply_to(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        self.apply(u, v)
    }
}

impl BilinearForm for WeilBilinear {
    fn apply_to(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        self.apply(u, v)
    }
}

/// `M v` for a rational `w×n` matrix and a Weil vector.
pub fn apply_linear(m: &Matrix, v: &Vector) -> Result<Vector> {
    if m.cols() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            found: v.dim(),
        });
    }
    let sig = v.signature();
    let out = (0..m.rows())
        .map(|k| {
            m.row(k)
                .iter()
                .zip(v.iter())
                .filter(|(c, _)| !c.is_zero())
                .fold(WeilElement::zero(sig), |acc, (c, x)| &acc + &x.scale(c))
        })
        .collect();
    Vector::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::weil::make_algebra;

    fn mat(n: usize, entries: &[i64]) -> Vec<Rational> {
        assert_eq!(entries.len(), n * n);
        entries.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn matrix_product_tensor_multiplies() {
        let t = Bilinear::matrix_product(2);
        let q = mat(2, &[1, 2, 3, 4]);
        let r = mat(2, &[0, 1, -1, 5]);
        assert_eq!(t.apply_rational(&q, &r).unwrap(), mat(2, &[-2, 11, -4, 23]));
    }

    #[test]
    fn symmetric_and_alternating_parts() {
        let mut s = Sampler::new(1, 100);
        let t = Bilinear::random(2, 3, &mut s);
        assert!(t.symmetric_part().is_symmetric());
        assert_eq!(t.alternation().transpose_slots(), t.alternation().scale(&int(-1)));
        assert_eq!(
            t.symmetric_part().scale(&int(2)).sub(&t.alternation()),
            t.transpose_slots().scale(&int(2))
        );
    }

    #[test]
    fn weil_and_rational_application_agree_on_constants() {
        let sig = make_algebra(1, 3, &[]).unwrap();
        let mut s = Sampler::new(3, 50);
        let t = Bilinear::random(2, 2, &mut s);
        let (u, v) = (s.rationals(2), s.rationals(2));
        let got = t
            .apply(&Vector::constant(&sig, &u), &Vector::constant(&sig, &v))
            .unwrap();
        assert_eq!(got.constant_part(), t.apply_rational(&u, &v).unwrap());
        let w = WeilBilinear::from_rational(&t, &sig);
        assert_eq!(
            w.apply(&Vector::constant(&sig, &u), &Vector::constant(&sig, &v))
                .unwrap(),
            got
        );
    }

    #[test]
    fn linear_application() {
        let sig = make_algebra(1, 3, &[]).unwrap();
        let m = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(0), int(-1)]]).unwrap();
        let v = Vector::constant(&sig, &[int(3), int(4)]);
        assert_eq!(apply_linear(&m, &v).unwrap().constant_part(), vec![int(11), int(-4)]);
    }
}
