//! Matrix Lie groups over the Weil model: `GL(n)` and the Heisenberg group,
//! their translation connections, and the matrix commutator as ground truth.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::calculus::{extract_binary_quadratic, FnBinaryMap};
use crate::connection::Mode;
use crate::error::{Error, Result};
use crate::igroup::MonadGroup;
use crate::linalg::Matrix;
use crate::rational::{half, int, Rational};
use crate::spaces::{alternating_blocks, in_istructure, IStructureKind, PointTuple};
use crate::tensor::Bilinear;
use crate::weil::{make_algebra, AlgebraSignature, Monomial, Vector, WeilElement};

/// The built-in matrix groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    /// `GL(n)`, charted by all `n²` entries in row-major order.
    Gl(usize),
    /// Upper unitriangular `3×3` matrices, charted by `(a₁₂, a₁₃, a₂₃)`.
    Heisenberg,
}

const HEISENBERG_SLOTS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

impl GroupTag {
    pub fn size(self) -> usize {
        match self {
            GroupTag::Gl(n) => n,
            GroupTag::Heisenberg => 3,
        }
    }

    pub fn chart_dim(self) -> usize {
        match self {
            GroupTag::Gl(n) => n * n,
            GroupTag::Heisenberg => 3,
        }
    }

    /// Chart coordinates of the identity matrix.
    pub fn identity_chart(self) -> Vec<Rational> {
        match self {
            GroupTag::Gl(n) => (0..n * n)
                .map(|k| if k / n == k % n { int(1) } else { int(0) })
                .collect(),
            GroupTag::Heisenberg => vec![int(0); 3],
        }
    }

    /// The `(row, column)` of the matrix entry behind chart coordinate `k`.
    pub fn slot(self, k: usize) -> (usize, usize) {
        match self {
            GroupTag::Gl(n) => (k / n, k % n),
            GroupTag::Heisenberg => HEISENBERG_SLOTS[k],
        }
    }

    /// Chart coordinate of the matrix unit `E_{ij}` (0-based), if it is a tangent direction.
    pub fn basis_index(self, i: usize, j: usize) -> Option<usize> {
        (0..self.chart_dim()).find(|&k| self.slot(k) == (i, j))
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Gl(n) => write!(f, "gl{n}"),
            GroupTag::Heisenberg => f.write_str("heisenberg"),
        }
    }
}

impl FromStr for GroupTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisenberg" => Ok(GroupTag::Heisenberg),
            _ => s
                .strip_prefix("gl")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(GroupTag::Gl)
                .ok_or_else(|| Error::Parse(format!("unknown group `{s}`"))),
        }
    }
}

/// A group element with Weil-algebra entries.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixElement {
    tag: GroupTag,
    entries: Vec<WeilElement>,
}

impl fmt::Debug for MatrixElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixElement({}, {})", self.tag, self)
    }
}

impl fmt::Display for MatrixElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.tag.size();
        f.write_str("[")?;
        for i in 0..n {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..n {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

impl MatrixElement {
    /// Row-major entries; checks the group's invariants.
    pub fn new(tag: GroupTag, entries: Vec<WeilElement>) -> Result<Self> {
        let n = tag.size();
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let sig = entries[0].signature().clone();
        if entries.iter().any(|e| !e.signature().same_as(&sig)) {
            return Err(Error::SignatureMismatch);
        }
        let m = MatrixElement { tag, entries };
        match tag {
            GroupTag::Gl(_) => {
                m.constant_matrix()
                    .inverse()
                    .map_err(|_| Error::InvalidGroupElement("constant part is not invertible".into()))?;
            }
            GroupTag::Heisenberg => {
                for i in 0..3 {
                    for j in 0..=i {
                        let want = if i == j { int(1) } else { int(0) };
                        if m.get(i, j) != &WeilElement::constant(&sig, want) {
                            return Err(Error::InvalidGroupElement(format!(
                                "entry ({}, {}) breaks unitriangularity",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn identity(tag: GroupTag, sig: &Arc<AlgebraSignature>) -> Self {
        Self::from_chart(tag, &Vector::constant(sig, &tag.identity_chart())).expect("identity is valid")
    }

    /// The element with the given chart coordinates.
    pub fn from_chart(tag: GroupTag, v: &Vector) -> Result<Self> {
        if v.dim() != tag.chart_dim() {
            return Err(Error::DimensionMismatch {
                expected: tag.chart_dim(),
                found: v.dim(),
            });
        }
        match tag {
            GroupTag::Gl(_) => Self::new(tag, v.entries().to_vec()),
            GroupTag::Heisenberg => {
                let sig = v.signature();
                let mut entries: Vec<WeilElement> = (0..9)
                    .map(|k| WeilElement::constant(sig, int(i64::from(k % 4 == 0))))
                    .collect();
                for (k, &(i, j)) in HEISENBERG_SLOTS.iter().enumerate() {
                    entries[3 * i + j] = v[k].clone();
                }
                Self::new(tag, entries)
            }
        }
    }

    pub fn to_chart(&self) -> Vector {
        let coords = (0..self.tag.chart_dim())
            .map(|k| {
                let (i, j) = self.tag.slot(k);
                self.get(i, j).clone()
            })
            .collect();
        Vector::new(coords).expect("chart dimension ≥ 1")
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn signature(&self) -> &Arc<AlgebraSignature> {
        self.entries[0].signature()
    }

    pub fn get(&self, i: usize, j: usize) -> &WeilElement {
        &self.entries[i * self.tag.size() + j]
    }

    fn constant_matrix(&self) -> Matrix {
        let n = self.tag.size();
        Matrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| self.get(i, j).constant_term()).collect())
                .collect(),
        )
        .expect("square")
    }

    fn raw_mul(&self, other: &MatrixElement) -> Result<Vec<WeilElement>> {
        let n = self.tag.size();
        let sig = self.signature();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = WeilElement::zero(sig);
                for k in 0..n {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                out.push(acc);
            }
        }
        Ok(out)
    }

    pub fn mat_mul(&self, other: &MatrixElement) -> Result<MatrixElement> {
        if self.tag != other.tag {
            return Err(Error::InvalidGroupElement(format!(
                "cannot multiply {} by {}",
                self.tag, other.tag
            )));
        }
        Self::new(self.tag, self.raw_mul(other)?)
    }

    /// `(C + N)⁻¹ = (Σₖ (−C⁻¹N)ᵏ) C⁻¹` with `C` the constant part; the series
    /// stops once the nilpotent powers vanish.
    pub fn mat_inv(&self) -> Result<MatrixElement> {
        let n = self.tag.size();
        let sig = self.signature().clone();
        let c_inv = self.constant_matrix().inverse().map_err(|_| Error::Singular)?;
        let lift = |m: &Matrix| -> MatrixElement {
            MatrixElement {
                tag: self.tag,
                entries: (0..n * n)
                    .map(|k| WeilElement::constant(&sig, m[(k / n, k % n)].clone()))
                    .collect(),
            }
        };
        let c_inv_w = lift(&c_inv);
        let neg_c = lift(&Matrix::zeros(n, n).sub(&self.constant_matrix()));
        // M = −C⁻¹(A − C)
        let nil = MatrixElement {
            tag: self.tag,
            entries: self.entries.iter().zip(&neg_c.entries).map(|(a, c)| a + c).collect(),
        };
        let m = MatrixElement {
            tag: self.tag,
            entries: c_inv_w.raw_mul(&nil)?.into_iter().map(|e| -e).collect(),
        };
        let mut sum = lift(&Matrix::identity(n));
        let mut power = sum.clone();
        for _ in 0..sig.cap() {
            power = MatrixElement {
                tag: self.tag,
                entries: power.raw_mul(&m)?,
            };
            if power.entries.iter().all(WeilElement::is_zero) {
                break;
            }
            sum.entries = sum.entries.iter().zip(&power.entries).map(|(a, b)| a + b).collect();
        }
        Self::new(self.tag, sum.raw_mul(&c_inv_w)?)
    }
}

/// Which translation connection of the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Symmetrized,
}

/// `λ_l(P,Q,R) = QP⁻¹R`, `λ_r(P,Q,R) = RP⁻¹Q`, or their chart average.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalConnection {
    pub side: Side,
    pub tag: GroupTag,
}

impl CanonicalConnection {
    pub fn new(side: Side, tag: GroupTag) -> Self {
        CanonicalConnection { side, tag }
    }
}

pub fn canonical_lambda(
    conn: &CanonicalConnection,
    p: &MatrixElement,
    q: &MatrixElement,
    r: &MatrixElement,
) -> Result<MatrixElement> {
    if [p, q, r].iter().any(|m| m.tag != conn.tag) {
        return Err(Error::InvalidGroupElement(format!("expected elements of {}", conn.tag)));
    }
    let p_inv = p.mat_inv()?;
    let left = || q.mat_mul(&p_inv)?.mat_mul(r);
    let right = || r.mat_mul(&p_inv)?.mat_mul(q);
    match conn.side {
        Side::Left => left(),
        Side::Right => right(),
        Side::Symmetrized => {
            let sum = left()?.to_chart().checked_add(&right()?.to_chart())?;
            MatrixElement::from_chart(conn.tag, &sum.scale(&half()))
        }
    }
}

/// Reads `Γ_P` off `λ(P, P+v, P+w) = P + v + w + Γ_P[v,w]` at a rational chart point.
pub fn extract_connection_symbol(conn: &CanonicalConnection, at: &[Rational]) -> Result<Bilinear> {
    let d = conn.tag.chart_dim();
    if at.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: at.len(),
        });
    }
    let map = FnBinaryMap::new(d, d, |v: &Vector, w: &Vector| {
        let base = Vector::constant(v.signature(), at);
        let el = |x: &Vector| MatrixElement::from_chart(conn.tag, x);
        let out = canonical_lambda(
            conn,
            &el(&base)?,
            &el(&base.checked_add(v)?)?,
            &el(&base.checked_add(w)?)?,
        )?;
        out.to_chart().checked_sub(&base)
    });
    let rep = extract_binary_quadratic(&map)?;
    let affine_ok = rep.a0.iter().all(Zero::is_zero)
        && rep.a1.is_identity()
        && rep.b1.is_identity()
        && rep.a2.is_zero()
        && rep.b2.is_zero();
    if !affine_ok {
        return Err(Error::InconsistentMap(format!(
            "{:?} connection of {} is not of the form Q + R − P + Γ[q,r]",
            conn.side, conn.tag
        )));
    }
    Ok(rep.c2)
}

/// The monad group at `base` built from the extracted symbol of `conn`.
pub fn monad_group(conn: &CanonicalConnection, base: &[Rational], mode: Mode) -> Result<MonadGroup> {
    Ok(MonadGroup::from_gamma(
        extract_connection_symbol(conn, base)?,
        base,
        mode,
    ))
}

/// A tangent vector at the identity, `d ↦ e + d·v`, by its principal part `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentVector {
    pub tag: GroupTag,
    pub v: Vec<Rational>,
}

impl TangentVector {
    pub fn new(tag: GroupTag, v: Vec<Rational>) -> Result<Self> {
        if v.len() != tag.chart_dim() {
            return Err(Error::DimensionMismatch {
                expected: tag.chart_dim(),
                found: v.len(),
            });
        }
        Ok(TangentVector { tag, v })
    }

    /// The direction of the matrix unit `E_{ij}` (0-based).
    pub fn basis(tag: GroupTag, i: usize, j: usize) -> Result<Self> {
        let k = tag
            .basis_index(i, j)
            .ok_or_else(|| Error::InvalidGroupElement(format!("E{}{} is not tangent to {tag}", i + 1, j + 1)))?;
        let mut v = vec![int(0); tag.chart_dim()];
        v[k] = int(1);
        Ok(TangentVector { tag, v })
    }
}

/// `[t₁,t₂]` as the principal part of `Γ_e[v₁,v₂] − Γ_e[v₂,v₁]` for the left connection.
pub fn tangent_bracket(t1: &TangentVector, t2: &TangentVector) -> Result<TangentVector> {
    if t1.tag != t2.tag {
        return Err(Error::InvalidGroupElement("tangent vectors of different groups".into()));
    }
    let tag = t1.tag;
    let gamma = extract_connection_symbol(&CanonicalConnection::new(Side::Left, tag), &tag.identity_chart())?;
    TangentVector::new(tag, gamma.alternation().apply_rational(&t1.v, &t2.v)?)
}

/// `[t₁,t₂]` read off the `d₁d₂` coefficient of `t₁(d₁)t₂(d₂)(t₂(d₂)t₁(d₁))⁻¹`.
pub fn tangent_bracket_via_commutator(t1: &TangentVector, t2: &TangentVector) -> Result<TangentVector> {
    if t1.tag != t2.tag {
        return Err(Error::InvalidGroupElement("tangent vectors of different groups".into()));
    }
    let tag = t1.tag;
    let sig = make_algebra(2, 3, &[(0, 0), (1, 1)])?;
    let e = Vector::constant(&sig, &tag.identity_chart());
    let curve = |t: &TangentVector, g: usize| -> Result<MatrixElement> {
        let d = WeilElement::generator(&sig, g)?;
        MatrixElement::from_chart(tag, &e.checked_add(&Vector::constant(&sig, &t.v).scale_by(&d))?)
    };
    let (a, b) = (curve(t1, 0)?, curve(t2, 1)?);
    let c = a.mat_mul(&b)?.mat_mul(&b.mat_mul(&a)?.mat_inv()?)?;
    let diff = c.to_chart().checked_sub(&e)?;
    let d1d2 = Monomial::from_generators([0, 1]);
    let principal: Vec<Rational> = diff.iter().map(|x| x.coeff(&d1d2)).collect::<Result<_>>()?;
    let rest = diff.checked_sub(
        &Vector::constant(&sig, &principal).scale_by(&WeilElement::from_terms(&sig, vec![(d1d2, Rational::one())])),
    )?;
    if !rest.is_zero() {
        return Err(Error::InconsistentMap(format!(
            "commutator has terms beyond d1d2: {rest}"
        )));
    }
    TangentVector::new(tag, principal)
}

/// Points `⟨e, P, Q, R⟩` of the `GL(3)` chart that form a nil-square tuple
/// while `⟨PQ, R⟩` does not, so the nil-square structure is not closed under
/// the group product.
#[derive(Clone, Debug)]
pub struct NilSquareFailure {
    pub tuple: PointTuple,
    pub product: Vector,
    pub last: Vector,
}

impl NilSquareFailure {
    /// True when the input tuple is nil-square and the product tuple is not.
    pub fn verifies(&self) -> bool {
        let after = PointTuple::new(vec![self.product.clone(), self.last.clone()]).expect("same signature");
        in_istructure(IStructureKind::NilSquare, &self.tuple) && !in_istructure(IStructureKind::NilSquare, &after)
    }
}

/// `P = I + Σxᵢ Mᵢ`, `Q = I + Σyᵢ Mᵢ`, `R = I + Σzᵢ Mᵢ` with `M = (E₁₂, E₂₁, E₁₁)`
/// and `x`, `y`, `z` alternating square-zero blocks at cap 4.
pub fn gl3_nil_square_failure() -> Result<NilSquareFailure> {
    let tag = GroupTag::Gl(3);
    let sig = alternating_blocks(3, 3, 4)?;
    let e = Vector::constant(&sig, &tag.identity_chart());
    let units = [(0, 1), (1, 0), (0, 0)];
    let point = |block: usize| -> Result<Vector> {
        let mut coords = vec![WeilElement::zero(&sig); 9];
        for (i, &(r, c)) in units.iter().enumerate() {
            coords[3 * r + c] = WeilElement::generator(&sig, 3 * block + i)?;
        }
        e.checked_add(&Vector::new(coords)?)
    };
    let (p, q, r) = (point(0)?, point(1)?, point(2)?);
    let product = MatrixElement::from_chart(tag, &p)?
        .mat_mul(&MatrixElement::from_chart(tag, &q)?)?
        .to_chart();
    Ok(NilSquareFailure {
        tuple: PointTuple::new(vec![e, p, q, r.clone()])?,
        product,
        last: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::igroup::MulPath;
    use crate::sample::{Sampler, DEFAULT_RANGE};
    use crate::spaces::{sample_generic, AlgebraLayout};

    fn sample(tag: GroupTag, kind: IStructureKind, m: usize, s: &mut Sampler) -> (Vector, PointTuple) {
        let mut pool = AlgebraLayout::new().for_tuple(kind, m).build(3).unwrap();
        let sig = pool.signature().clone();
        let e = Vector::constant(&sig, &tag.identity_chart());
        let t = sample_generic(kind, &e, m, &mut pool, s).unwrap();
        (e, t)
    }

    fn el(tag: GroupTag, v: &Vector) -> MatrixElement {
        MatrixElement::from_chart(tag, v).unwrap()
    }

    #[test]
    fn tags_parse_and_print() {
        for s in ["gl2", "gl3", "heisenberg"] {
            assert_eq!(s.parse::<GroupTag>().unwrap().to_string(), s);
        }
        assert!("sl2".parse::<GroupTag>().is_err());
        assert!("gl0".parse::<GroupTag>().is_err());
    }

    #[test]
    fn invariants_are_checked() {
        let sig = make_algebra(1, 3, &[]).unwrap();
        let singular = Vector::constant(&sig, &[int(1), int(2), int(2), int(4)]);
        assert!(matches!(
            MatrixElement::from_chart(GroupTag::Gl(2), &singular),
            Err(Error::InvalidGroupElement(_))
        ));
        let c = |x: i64| WeilElement::constant(&sig, int(x));
        let lower = vec![c(1), c(0), c(0), c(1), c(1), c(0), c(0), c(0), c(1)];
        assert!(MatrixElement::new(GroupTag::Heisenberg, lower).is_err());
    }

    #[test]
    fn inverse_examples() {
        let sig = make_algebra(2, 3, &[]).unwrap();
        for tag in [GroupTag::Gl(2), GroupTag::Gl(3), GroupTag::Heisenberg] {
            let id = MatrixElement::identity(tag, &sig);
            assert_eq!(id.mat_inv().unwrap(), id);
        }
        // I + N with N = e1·E12 + e2·E21: inverse is I − N + N².
        let tag = GroupTag::Gl(2);
        let g = |i| WeilElement::generator(&sig, i).unwrap();
        let zero = WeilElement::zero(&sig);
        let n = MatrixElement {
            tag,
            entries: vec![zero.clone(), g(0), g(1), zero.clone()],
        };
        let a = el(tag, &(&MatrixElement::identity(tag, &sig).to_chart() + &n.to_chart()));
        let n2 = n.raw_mul(&n).unwrap();
        let expected: Vec<WeilElement> = MatrixElement::identity(tag, &sig)
            .entries
            .iter()
            .zip(&n.entries)
            .zip(&n2)
            .map(|((i, x), y)| &(i - x) + y)
            .collect();
        assert_eq!(a.mat_inv().unwrap().entries, expected);
    }

    #[test]
    fn inverse_round_trips_with_nonidentity_constant_part() {
        let mut s = Sampler::new(21, DEFAULT_RANGE);
        let tag = GroupTag::Gl(3);
        let (_, t) = sample(tag, IStructureKind::SecondOrder, 1, &mut s);
        let sig = t.get(0).signature().clone();
        let shift = Vector::constant(&sig, &s.rationals(9));
        let a = el(tag, &(t.get(0) + &shift));
        let id = MatrixElement::identity(tag, &sig);
        assert_eq!(a.mat_mul(&a.mat_inv().unwrap()).unwrap(), id);
        assert_eq!(a.mat_inv().unwrap().mat_mul(&a).unwrap(), id);
    }

    #[test]
    fn heisenberg_products_stay_unitriangular() {
        let mut s = Sampler::new(22, DEFAULT_RANGE);
        let tag = GroupTag::Heisenberg;
        let (_, t) = sample(tag, IStructureKind::SecondOrder, 2, &mut s);
        let sig = t.get(0).signature().clone();
        let shift = Vector::constant(&sig, &s.rationals(3));
        let a = el(tag, &(t.get(0) + &shift));
        let b = el(tag, t.get(1));
        assert!(a.mat_mul(&b).is_ok());
        assert!(a.mat_inv().is_ok());
    }

    #[test]
    fn lambda_identities() {
        let mut s = Sampler::new(23, DEFAULT_RANGE);
        for tag in [GroupTag::Gl(2), GroupTag::Heisenberg] {
            let (e, t) = sample(tag, IStructureKind::SecondOrder, 3, &mut s);
            let (p, q, r) = (el(tag, t.get(0)), el(tag, t.get(1)), el(tag, t.get(2)));
            let id = el(tag, &e);
            let left = CanonicalConnection::new(Side::Left, tag);
            let right = CanonicalConnection::new(Side::Right, tag);
            assert_eq!(canonical_lambda(&left, &p, &q, &p).unwrap(), q);
            assert_eq!(canonical_lambda(&left, &id, &q, &r).unwrap(), q.mat_mul(&r).unwrap());
            assert_eq!(canonical_lambda(&right, &id, &q, &r).unwrap(), r.mat_mul(&q).unwrap());
        }
    }

    #[test]
    fn extracted_symbols_at_identity() {
        let tag = GroupTag::Gl(2);
        let e = tag.identity_chart();
        let mp = Bilinear::matrix_product(2);
        let get = |side| extract_connection_symbol(&CanonicalConnection::new(side, tag), &e).unwrap();
        assert_eq!(get(Side::Left), mp);
        assert_eq!(get(Side::Right), mp.transpose_slots());
        assert_eq!(get(Side::Symmetrized), mp.symmetric_part());

        let h = extract_connection_symbol(
            &CanonicalConnection::new(Side::Left, GroupTag::Heisenberg),
            &GroupTag::Heisenberg.identity_chart(),
        )
        .unwrap();
        let mut want = Bilinear::zeros(3, 3);
        want.set(1, 0, 2, int(1));
        assert_eq!(h, want);
    }

    #[test]
    fn left_symbol_away_from_identity_is_q_pinv_r() {
        let mut s = Sampler::new(24, DEFAULT_RANGE);
        let tag = GroupTag::Gl(2);
        let base = s.rationals(4);
        let gamma = extract_connection_symbol(&CanonicalConnection::new(Side::Left, tag), &base).unwrap();
        let p_inv = Matrix::from_rows(vec![base[0..2].to_vec(), base[2..4].to_vec()])
            .unwrap()
            .inverse()
            .unwrap();
        let (q, r) = (s.rationals(4), s.rationals(4));
        let m = |v: &[Rational]| Matrix::from_rows(vec![v[0..2].to_vec(), v[2..4].to_vec()]).unwrap();
        let expect = m(&q).mul(&p_inv).unwrap().mul(&m(&r)).unwrap();
        let flat: Vec<Rational> = (0..4).map(|k| expect[(k / 2, k % 2)].clone()).collect();
        assert_eq!(gamma.apply_rational(&q, &r).unwrap(), flat);
    }

    #[test]
    fn monad_group_matches_matrix_group() {
        let mut s = Sampler::new(25, DEFAULT_RANGE);
        for tag in [GroupTag::Gl(2), GroupTag::Heisenberg] {
            let g = monad_group(
                &CanonicalConnection::new(Side::Left, tag),
                &tag.identity_chart(),
                Mode::Strict,
            )
            .unwrap();
            let (_, t) = sample(tag, IStructureKind::SecondOrder, 2, &mut s);
            let (q, r) = (t.get(0), t.get(1));
            let product = el(tag, q).mat_mul(&el(tag, r)).unwrap().to_chart();
            for path in MulPath::ALL {
                assert_eq!(g.mul_via(path, q, r).unwrap(), product, "{tag} {path:?}");
            }
            assert_eq!(g.inv(q).unwrap(), el(tag, q).mat_inv().unwrap().to_chart());
        }
    }

    #[test]
    fn tangent_bracket_examples() {
        let gl2 = GroupTag::Gl(2);
        let e12 = TangentVector::basis(gl2, 0, 1).unwrap();
        let e21 = TangentVector::basis(gl2, 1, 0).unwrap();
        let want = TangentVector::new(gl2, vec![int(1), int(0), int(0), int(-1)]).unwrap();
        assert_eq!(tangent_bracket(&e12, &e21).unwrap(), want);
        assert_eq!(tangent_bracket_via_commutator(&e12, &e21).unwrap(), want);
        assert!(tangent_bracket(&e12, &e12).unwrap().v.iter().all(Zero::is_zero));

        let h = GroupTag::Heisenberg;
        let x = TangentVector::basis(h, 0, 1).unwrap();
        let y = TangentVector::basis(h, 1, 2).unwrap();
        let z = TangentVector::basis(h, 0, 2).unwrap();
        assert_eq!(tangent_bracket(&x, &y).unwrap(), z);
        assert_eq!(tangent_bracket_via_commutator(&x, &y).unwrap(), z);
        assert!(TangentVector::basis(h, 1, 0).is_err());
    }

    #[test]
    fn first_order_pairs_multiply_additively() {
        let mut s = Sampler::new(26, DEFAULT_RANGE);
        for tag in [GroupTag::Gl(2), GroupTag::Gl(3), GroupTag::Heisenberg] {
            let (e, t) = sample(tag, IStructureKind::FirstOrder, 2, &mut s);
            let (p, q) = (t.get(0), t.get(1));
            let product = el(tag, p).mat_mul(&el(tag, q)).unwrap().to_chart();
            assert_eq!(product, &(p + q) - &e);
        }
    }

    #[test]
    fn gl3_nil_square_failure_verifies() {
        let w = gl3_nil_square_failure().unwrap();
        assert!(in_istructure(IStructureKind::NilSquare, &w.tuple));
        assert!(w.verifies());
    }
}
