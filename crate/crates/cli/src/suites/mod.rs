//! Property checks grouped by module. Every check draws its randomness from a
//! sampler forked off the run seed by a fixed label, so results depend only on
//! the configuration.

use std::time::Instant;

use sdg_core::sample::Sampler;

use crate::config::{Suite, SuiteConfig};
use crate::report::{CheckRecord, Report, Status};

pub mod calculus;
pub mod connection;
pub mod igroup;
pub mod liegroup;
pub mod spaces;
pub mod weil;

/// `Err` carries a human-readable witness.
pub type Outcome = Result<(), String>;

/// Turns kernel errors into witnesses.
pub trait Witness<T> {
    fn wit(self, context: &str) -> Result<T, String>;
}

impl<T> Witness<T> for sdg_core::Result<T> {
    fn wit(self, context: &str) -> Result<T, String> {
        self.map_err(|e| format!("{context}: {e}"))
    }
}

/// `Ok(())` if `cond`, else the lazily formatted witness.
pub fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

/// Collects the records of one suite.
pub struct Ctx<'a> {
    pub cfg: &'a SuiteConfig,
    suite: Suite,
    root: Sampler,
    timings: bool,
    records: Vec<CheckRecord>,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a SuiteConfig, suite: Suite, timings: bool) -> Self {
        Ctx {
            cfg,
            suite,
            root: Sampler::new(cfg.seed, cfg.coefficient_range).fork(suite.name()),
            timings,
            records: Vec::new(),
        }
    }

    /// Runs `f` with a sampler keyed by `id`.
    pub fn check(&mut self, id: &str, anchor: &str, f: impl FnOnce(&mut Sampler) -> Outcome) {
        self.check_on(id, id, anchor, f);
    }

    /// Runs `f` with a sampler keyed by `label`; checks sharing a label see the same samples.
    pub fn check_on(&mut self, id: &str, label: &str, anchor: &str, f: impl FnOnce(&mut Sampler) -> Outcome) {
        let mut sampler = self.root.fork(label);
        let start = Instant::now();
        let result = f(&mut sampler);
        let (status, witness) = match result {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        self.push(id, anchor, status, witness, start);
    }

    /// A check that is supposed to fail: `f` returns `Err(witness)` when the
    /// defect is detected, which is recorded as an expected failure.
    pub fn negative_control(&mut self, id: &str, anchor: &str, f: impl FnOnce(&mut Sampler) -> Outcome) {
        let mut sampler = self.root.fork(id);
        let start = Instant::now();
        let (status, witness) = match f(&mut sampler) {
            Err(w) => (Status::ExpectedFail, Some(w)),
            Ok(()) => (Status::Fail, Some("corrupted law was not detected".into())),
        };
        self.push(id, anchor, status, witness, start);
    }

    fn push(&mut self, id: &str, anchor: &str, status: Status, witness: Option<String>, start: Instant) {
        self.records.push(CheckRecord {
            id: id.into(),
            suite: self.suite,
            anchor: anchor.into(),
            status,
            witness,
            elapsed_ms: self.timings.then(|| start.elapsed().as_millis() as u64),
        });
    }
}

/// Runs the configured suites; elapsed times are recorded only when `timings` is set.
pub fn run_with_timings(cfg: &SuiteConfig, timings: bool) -> Report {
    let mut records = Vec::new();
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    for suite in suites {
        let mut ctx = Ctx::new(cfg, suite, timings);
        match suite {
            Suite::Weil => weil::run(&mut ctx),
            Suite::Spaces => spaces::run(&mut ctx),
            Suite::Calculus => calculus::run(&mut ctx),
            Suite::Connection => connection::run(&mut ctx),
            Suite::Igroup => igroup::run(&mut ctx),
            Suite::Liegroup => liegroup::run(&mut ctx),
        }
        records.extend(ctx.records);
    }
    Report::new(cfg.clone(), records)
}

/// Runs the configured suites without timings, so the report is reproducible.
pub fn run(cfg: &SuiteConfig) -> Report {
    run_with_timings(cfg, false)
}

/// `(P, ⟨P₁,…,P_m⟩)` with the `Pᵢ` generic second-order neighbours of the rational point `base`.
pub fn second_order_tuple(
    base: &[sdg_core::Rational],
    m: usize,
    s: &mut Sampler,
) -> Result<(sdg_core::weil::Vector, sdg_core::spaces::PointTuple), String> {
    use sdg_core::spaces::{sample_generic, AlgebraLayout, IStructureKind};
    let mut pool = AlgebraLayout::new()
        .for_tuple(IStructureKind::SecondOrder, m)
        .build(3)
        .wit("layout")?;
    let p = sdg_core::weil::Vector::constant(pool.signature(), base);
    let t = sample_generic(IStructureKind::SecondOrder, &p, m, &mut pool, s).wit("sample")?;
    Ok((p, t))
}
