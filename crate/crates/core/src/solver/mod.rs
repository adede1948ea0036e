//! Branch-and-bound subdivision with adaptive arithmetic precision.
//!
//! A solve runs depth-first passes over a work list at a fixed precision.
//! Boxes on which the precision checks fire are set aside and handed to the
//! next pass at a doubled precision, until the maximal precision is spent.

mod bisect;
mod refine;

use std::collections::VecDeque;
use std::ops::ControlFlow;
use std::rc::Rc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigfloat::BigFloat;
use crate::certify::{check_no_solution, check_one_solution, is_sol_in_list, SolutionBox};
use crate::enclosure::{BoxEval, EvalCounter, EvalCounts};
use crate::interval::{IBox, Precision};
use crate::poly::PolySystem;
use crate::precision::{check_prec_with, C2Form, PrecisionContext, Trigger};
use crate::strategy::Strategy;

pub use bisect::{bisect, bisect_any, NoAdmissibleDirection};
pub use refine::{refine_solution, refine_solutions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("initial precision {p0} exceeds maximal precision {p_max}")]
    PrecisionOrder { p0: u32, p_max: u32 },
    #[error("domain has {domain} components but the system has {system} variables")]
    DimensionMismatch { domain: usize, system: usize },
    #[error("minimal width must be non-negative")]
    NegativeMinWidth,
    #[error("inflation factor must be finite and non-negative, got {0}")]
    InvalidInflation(f64),
    #[error("solve stopped by the observer")]
    Cancelled,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Boxes this narrow are no longer bisected.
    pub omega: BigFloat,
    pub p0: Precision,
    pub p_max: Precision,
    /// Relative ε-inflation applied before certification tests.
    pub eps_rel: f64,
    pub strategy: Strategy,
    pub c2_form: C2Form,
}

pub const DEFAULT_EPS_REL: f64 = 1.0 / 16.0;

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            omega: BigFloat::from_f64(1e-6).expect("finite"),
            p0: Precision::DOUBLE,
            p_max: Precision::new(113).expect("valid precision"),
            eps_rel: DEFAULT_EPS_REL,
            strategy: Strategy::default(),
            c2_form: C2Form::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.p0 > self.p_max {
            return Err(SolveError::PrecisionOrder {
                p0: self.p0.bits(),
                p_max: self.p_max.bits(),
            });
        }
        if self.omega.is_negative() {
            return Err(SolveError::NegativeMinWidth);
        }
        if !self.eps_rel.is_finite() || self.eps_rel < 0.0 {
            return Err(SolveError::InvalidInflation(self.eps_rel));
        }
        Ok(())
    }
}

/// The precision following `p` in the doubling schedule capped at `p_max`.
pub fn next_precision(p: Precision, p_max: Precision) -> Precision {
    let doubled = Precision::new(p.bits() * 2).expect("doubling keeps precision valid");
    if doubled < p_max || p == p_max {
        doubled
    } else {
        p_max
    }
}

/// Outcome of a solve: 0 when every root in the interior of the domain is
/// isolated, 1 when some box ran out of precision, 2 when some box reached
/// the minimal width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Status {
    Complete,
    PrecisionExhausted,
    MinWidthReached,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Complete => 0,
            Status::PrecisionExhausted => 1,
            Status::MinWidthReached => 2,
        }
    }
}

impl From<Status> for u8 {
    fn from(s: Status) -> u8 {
        s.code()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("invalid status code {0}")]
pub struct InvalidStatus(pub u8);

impl TryFrom<u8> for Status {
    type Error = InvalidStatus;
    fn try_from(c: u8) -> Result<Self, InvalidStatus> {
        match c {
            0 => Ok(Status::Complete),
            1 => Ok(Status::PrecisionExhausted),
            2 => Ok(Status::MinWidthReached),
            _ => Err(InvalidStatus(c)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UndeterminedReason {
    MinWidth,
    Precision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UndeterminedBox {
    pub bounds: IBox,
    pub reason: UndeterminedReason,
}

/// Leaf and inner node counts of the search tree.
///
/// * `n1`: boxes at the minimal width.
/// * `n2`: boxes without solution.
/// * `n3`: certified boxes inside the domain.
/// * `n4`: certified boxes meeting the domain boundary, replaced by their
///   Krawczyk image.
/// * `n5`: bisected boxes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCounts {
    pub n1: u64,
    pub n2: u64,
    pub n3: u64,
    pub n4: u64,
    pub n5: u64,
}

impl NodeCounts {
    pub fn total(&self) -> u64 {
        self.n1 + self.n2 + self.n3 + self.n4 + self.n5
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriggerCounts {
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
}

impl TriggerCounts {
    fn record(&mut self, t: Trigger) {
        match t {
            Trigger::C1 => self.c1 += 1,
            Trigger::C2 => self.c2 += 1,
            Trigger::C3 => self.c3 += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.c1 + self.c2 + self.c3
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    /// Every box popped from a work list, deferred ones included.
    pub boxes_explored: u64,
    pub node_counts: NodeCounts,
    /// Pops set aside for a higher precision.
    pub deferred: u64,
    pub precision_triggers: TriggerCounts,
    pub evals: EvalCounts,
    pub max_precision_used: u32,
    /// Precision of every pass, in order.
    pub precision_passes: Vec<u32>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub status: Status,
    pub solutions: Vec<SolutionBox>,
    pub undetermined: Vec<UndeterminedBox>,
    pub stats: SolveStats,
}

/// Notifications emitted while solving.
#[derive(Debug)]
pub enum SolveEvent<'a> {
    PassStarted { precision: Precision, boxes: usize },
    Deferred { bounds: &'a IBox, trigger: Trigger },
    MinWidth { bounds: &'a IBox },
    /// The tested box (inflated when the node was) holds no root.
    Excluded { bounds: &'a IBox },
    Certified { bounds: &'a IBox, interior: bool },
    Bisected { bounds: &'a IBox },
}

struct WorkItem {
    bounds: IBox,
    inflate_and_bisect: bool,
    /// Evaluation of the inflated box, when already available at the
    /// precision of the current pass.
    inflated: Option<BoxEval>,
}

impl WorkItem {
    fn fresh(bounds: IBox, inflate_and_bisect: bool) -> Self {
        WorkItem {
            bounds,
            inflate_and_bisect,
            inflated: None,
        }
    }
}

struct Run<'a> {
    system: &'a PolySystem,
    cfg: &'a SolverConfig,
    x0: IBox,
    counter: Rc<EvalCounter>,
    stats: SolveStats,
    solutions: Vec<SolutionBox>,
    min_width: Vec<IBox>,
    observer: &'a mut dyn FnMut(&SolveEvent<'_>) -> ControlFlow<()>,
}

impl Run<'_> {
    fn notify(&mut self, ev: &SolveEvent<'_>) -> Result<(), SolveError> {
        match (self.observer)(ev) {
            ControlFlow::Continue(()) => Ok(()),
            ControlFlow::Break(()) => Err(SolveError::Cancelled),
        }
    }

    /// One depth-first pass at precision `p`. Returns the boxes deferred to a
    /// higher precision.
    fn solve_fixed_prec(&mut self, work: Vec<WorkItem>, p: Precision) -> Result<Vec<WorkItem>, SolveError> {
        let cs = self.system.compile(p);
        let x0 = self.x0.with_precision(p);
        let strategy = self.cfg.strategy;
        let ctx = PrecisionContext {
            omega: self.cfg.omega.clone(),
            precision: p,
            max_precision: self.cfg.p_max,
            eps_rel: self.cfg.eps_rel,
            order: strategy.range_extension(),
            c2_form: self.cfg.c2_form,
        };
        let mut work: VecDeque<WorkItem> = work.into();
        let mut deferred = Vec::new();
        while let Some(item) = work.pop_front() {
            self.stats.boxes_explored += 1;
            let flag = item.inflate_and_bisect;
            let x = BoxEval::with_counter(cs.clone(), item.bounds, self.counter.clone());
            let check = check_prec_with(&x, &ctx, flag, item.inflated);
            if let Some(t) = check.verdict.trigger {
                self.stats.deferred += 1;
                self.stats.precision_triggers.record(t);
                self.notify(&SolveEvent::Deferred {
                    bounds: x.bounds(),
                    trigger: t,
                })?;
                deferred.push(WorkItem::fresh(x.into_box(), flag));
                continue;
            }
            if x.bounds().width() <= self.cfg.omega {
                self.stats.node_counts.n1 += 1;
                self.notify(&SolveEvent::MinWidth { bounds: x.bounds() })?;
                self.min_width.push(x.into_box());
                continue;
            }
            let inflated = match check.inflated {
                Some(e) => e,
                None if flag => {
                    BoxEval::with_counter(cs.clone(), x.bounds().inflate(self.cfg.eps_rel), self.counter.clone())
                }
                None => BoxEval::with_counter(cs.clone(), x.bounds().clone(), self.counter.clone()),
            };
            let xe = if flag { &inflated } else { &x };
            if check_no_solution(xe, strategy) {
                self.stats.node_counts.n2 += 1;
                self.notify(&SolveEvent::Excluded { bounds: xe.bounds() })?;
                continue;
            }
            if check_one_solution(xe, strategy) {
                let image = xe
                    .krawczyk(strategy.krawczyk())
                    .image()
                    .expect("certified boxes have a Krawczyk image")
                    .clone();
                let b = xe.bounds();
                if b.meets_boundary_of(&x0).expect("same dimension") {
                    self.stats.node_counts.n4 += 1;
                    self.notify(&SolveEvent::Certified {
                        bounds: b,
                        interior: false,
                    })?;
                    work.push_front(WorkItem::fresh(image, false));
                } else if b.subset_of_interior(&x0).expect("same dimension") {
                    self.stats.node_counts.n3 += 1;
                    self.notify(&SolveEvent::Certified {
                        bounds: b,
                        interior: true,
                    })?;
                    if !is_sol_in_list(b, &self.solutions) {
                        self.solutions.push(SolutionBox {
                            bounds: b.clone(),
                            precision: p,
                            krawczyk_image: image,
                        });
                    }
                } else {
                    // Certified, but entirely outside the domain.
                    self.stats.node_counts.n2 += 1;
                    self.notify(&SolveEvent::Excluded { bounds: b })?;
                }
                continue;
            }
            self.stats.node_counts.n5 += 1;
            self.notify(&SolveEvent::Bisected { bounds: x.bounds() })?;
            let (first, second) = match check.split {
                Some(s) => (
                    WorkItem {
                        bounds: s.first,
                        inflate_and_bisect: true,
                        inflated: Some(s.first_inflated),
                    },
                    WorkItem {
                        bounds: s.second,
                        inflate_and_bisect: true,
                        inflated: Some(s.second_inflated),
                    },
                ),
                None => {
                    let (a, b) = bisect(&x, &self.cfg.omega).expect("box is wider than the minimal width");
                    (WorkItem::fresh(a, true), WorkItem::fresh(b, true))
                }
            };
            work.push_front(second);
            work.push_front(first);
        }
        Ok(deferred)
    }
}

/// Isolates the roots of `system` in the interior of `domain`.
pub fn solve_adaptive(system: &PolySystem, domain: &IBox, cfg: &SolverConfig) -> Result<SolveReport, SolveError> {
    solve_adaptive_observed(system, domain, cfg, &mut |_| ControlFlow::Continue(()))
}

/// [`solve_adaptive`], reporting every node decision to `observer`. The
/// solve stops with [`SolveError::Cancelled`] as soon as the observer breaks.
pub fn solve_adaptive_observed(
    system: &PolySystem,
    domain: &IBox,
    cfg: &SolverConfig,
    observer: &mut dyn FnMut(&SolveEvent<'_>) -> ControlFlow<()>,
) -> Result<SolveReport, SolveError> {
    cfg.validate()?;
    if domain.dim() != system.dim() {
        return Err(SolveError::DimensionMismatch {
            domain: domain.dim(),
            system: system.dim(),
        });
    }
    let start = Instant::now();
    let x0 = domain.with_precision(cfg.p0);
    let mut run = Run {
        system,
        cfg,
        x0: x0.clone(),
        counter: Rc::new(EvalCounter::default()),
        stats: SolveStats::default(),
        solutions: Vec::new(),
        min_width: Vec::new(),
        observer,
    };
    let mut pending = vec![WorkItem::fresh(x0, true)];
    let mut p = cfg.p0;
    while !pending.is_empty() && p <= cfg.p_max {
        let work: Vec<WorkItem> = pending
            .into_iter()
            .map(|w| WorkItem::fresh(w.bounds.with_precision(p), w.inflate_and_bisect))
            .collect();
        run.notify(&SolveEvent::PassStarted {
            precision: p,
            boxes: work.len(),
        })?;
        run.stats.precision_passes.push(p.bits());
        run.stats.max_precision_used = run.stats.max_precision_used.max(p.bits());
        pending = run.solve_fixed_prec(work, p)?;
        p = next_precision(p, cfg.p_max);
    }
    let status = if !run.min_width.is_empty() {
        Status::MinWidthReached
    } else if !pending.is_empty() {
        Status::PrecisionExhausted
    } else {
        Status::Complete
    };
    let mut undetermined: Vec<UndeterminedBox> = run
        .min_width
        .into_iter()
        .map(|bounds| UndeterminedBox {
            bounds,
            reason: UndeterminedReason::MinWidth,
        })
        .collect();
    undetermined.extend(pending.into_iter().map(|w| UndeterminedBox {
        bounds: w.bounds,
        reason: UndeterminedReason::Precision,
    }));
    let mut stats = run.stats;
    stats.evals = run.counter.snapshot();
    stats.wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(SolveReport {
        status,
        solutions: run.solutions,
        undetermined,
        stats,
    })
}
