//! Human-readable traces of the chart quantities for two tangent directions.

use std::fmt::Write as _;

use sdg_core::connection::{Connection, ConnectionSymbol, Mode, TorsionForm};
use sdg_core::igroup::{MonadGroup, MulPath};
use sdg_core::liegroup::{monad_group, CanonicalConnection, GroupTag, MatrixElement, Side};
use sdg_core::rational::{format_rational, parse_rational, Rational};
use sdg_core::tensor::Bilinear;
use sdg_core::weil::{make_algebra, Monomial, Vector, WeilElement};

use num_traits::{One, Signed, Zero};

/// What the demo runs on.
pub enum DemoTarget {
    Group(GroupTag),
    Connection {
        symbol: ConnectionSymbol,
        base: Vec<Rational>,
    },
}

impl DemoTarget {
    fn dim(&self) -> usize {
        match self {
            DemoTarget::Group(tag) => tag.chart_dim(),
            DemoTarget::Connection { symbol, .. } => symbol.dim(),
        }
    }

    fn coordinate_name(&self, k: usize) -> String {
        match self {
            DemoTarget::Group(tag) => {
                let (i, j) = tag.slot(k);
                format!("E{}{}", i + 1, j + 1)
            }
            DemoTarget::Connection { .. } => format!("e{}", k + 1),
        }
    }

    /// `E12` for a matrix unit, `e2` for a coordinate direction, or a comma-separated list.
    pub fn parse_direction(&self, spec: &str) -> Result<Vec<Rational>, String> {
        let dim = self.dim();
        let spec = spec.trim();
        if let Some(k) = (0..dim).find(|&k| self.coordinate_name(k) == spec) {
            return Ok((0..dim)
                .map(|i| if i == k { Rational::one() } else { Rational::zero() })
                .collect());
        }
        let v = spec
            .split(',')
            .map(|x| parse_rational(x.trim()).map_err(|e| format!("direction `{spec}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.len() != dim {
            return Err(format!(
                "direction `{spec}` has {} coordinates, expected {dim}",
                v.len()
            ));
        }
        Ok(v)
    }

    fn format_direction(&self, v: &[Rational]) -> String {
        let mut out = String::new();
        for (k, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let name = self.coordinate_name(k);
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            let term = if mag.is_one() {
                name
            } else {
                format!("{}·{name}", format_rational(&mag))
            };
            if out.is_empty() {
                out = if c.is_negative() { format!("-{term}") } else { term };
            } else {
                let _ = write!(out, " {sign} {term}");
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

fn describe_tensor(target: &DemoTarget, t: &Bilinear) -> String {
    let d = target.dim();
    let mut lines = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let unit = |k: usize| {
                (0..d)
                    .map(|x| if x == k { Rational::one() } else { Rational::zero() })
                    .collect::<Vec<_>>()
            };
            let v = t.apply_rational(&unit(i), &unit(j)).expect("dimensions match");
            if v.iter().any(|c| !c.is_zero()) {
                lines.push(format!(
                    "[{}, {}] ↦ {}",
                    target.coordinate_name(i),
                    target.coordinate_name(j),
                    target.format_direction(&v)
                ));
            }
        }
    }
    if lines.is_empty() {
        "0".into()
    } else {
        lines.join(", ")
    }
}

/// Coefficient vector of `e1·e2` in `x − base`, requiring nothing else to survive.
fn principal(x: &Vector, base: &Vector) -> Vec<Rational> {
    let d = x - base;
    let m = Monomial::from_generators([0, 1]);
    d.iter().map(|c| c.coeff(&m).expect("basis monomial")).collect()
}

pub fn demo(target: &DemoTarget, v1: &[Rational], v2: &[Rational]) -> Result<String, String> {
    let err = |e: sdg_core::Error| e.to_string();
    let (group, base, title): (MonadGroup, Vec<Rational>, String) = match target {
        DemoTarget::Group(tag) => {
            let e = tag.identity_chart();
            let g = monad_group(&CanonicalConnection::new(Side::Left, *tag), &e, Mode::Strict).map_err(err)?;
            (g, e, format!("group {tag}, left connection at e"))
        }
        DemoTarget::Connection { symbol, base } => {
            let g = MonadGroup::new(symbol, base, Mode::Strict).map_err(err)?;
            (g, base.clone(), "connection from file".to_string())
        }
    };
    let sig = make_algebra(2, 3, &[(0, 0), (1, 1)]).map_err(err)?;
    let p = Vector::constant(&sig, &base);
    let along = |v: &[Rational], g: usize| -> Result<Vector, String> {
        let d = WeilElement::generator(&sig, g).map_err(err)?;
        p.checked_add(&Vector::constant(&sig, v).scale_by(&d)).map_err(err)
    };
    let (q, r) = (along(v1, 0)?, along(v2, 1)?);

    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "base P = {p}");
    let _ = writeln!(out, "Γ_P: {}", describe_tensor(target, group.gamma()));
    let _ = writeln!(
        out,
        "bracket tensor Γ_P[u,v] − Γ_P[v,u]: {}",
        describe_tensor(target, group.bracket_tensor())
    );
    let _ = writeln!(
        out,
        "directions v1 = {}, v2 = {}",
        target.format_direction(v1),
        target.format_direction(v2)
    );
    let _ = writeln!(out, "Q = P + e1·v1 = {q}   (e1² = 0)");
    let _ = writeln!(out, "R = P + e2·v2 = {r}   (e2² = 0)");
    let names = [
        (MulPath::Chart, "chart product Q + R − P + Γ_P[q,r]"),
        (MulPath::Bch, "BCH combination Q + R + ½[Q,R]"),
        (MulPath::Transport, "transport exp_P(log_P Q · log_P R)"),
    ];
    for (path, name) in names {
        let _ = writeln!(out, "{name} = {}", group.mul_via(path, &q, &r).map_err(err)?);
    }
    if let DemoTarget::Group(tag) = target {
        let m = |x: &Vector| MatrixElement::from_chart(*tag, x).map_err(err);
        let _ = writeln!(out, "matrix product QR = {}", m(&q)?.mat_mul(&m(&r)?).map_err(err)?);
    }
    let bracket = group.lie_bracket(&q, &r).map_err(err)?;
    let commutator = group.commutator(&q, &r).map_err(err)?;
    let torsion = Connection::new(ConnectionSymbol::constant(group.gamma()), Mode::Strict)
        .torsion(&p, &q, &r, TorsionForm::Definitional)
        .map_err(err)?;
    let _ = writeln!(out, "bracket [Q,R] = {bracket}");
    let _ = writeln!(out, "commutator QRQ⁻¹R⁻¹ = {commutator}");
    let _ = writeln!(out, "torsion τ(Q,R) = {torsion}");
    if torsion == p {
        let _ = writeln!(out, "torsion ≡ base");
    }
    let _ = writeln!(
        out,
        "[{}, {}] = {}",
        target.format_direction(v1),
        target.format_direction(v2),
        target.format_direction(&principal(&bracket, &p))
    );
    let _ = writeln!(
        out,
        "abelian: {}",
        if group.is_abelian() {
            "yes (Γ_P is symmetric)"
        } else {
            "no (Γ_P is not symmetric)"
        }
    );
    Ok(out)
}
