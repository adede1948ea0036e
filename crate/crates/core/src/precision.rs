//! Tests deciding whether the working precision is too low to make progress
//! on a box.
//!
//! * C1: bisecting does not shrink the box in any direction (the bounds of
//!   the cut component are adjacent floats).
//! * C2: the range enclosure does not shrink under bisection.
//! * C3: the Newton correction at the center is at least as wide as the box
//!   while still pointing into it.

use serde::{Deserialize, Serialize};

use crate::bigfloat::BigFloat;
use crate::enclosure::{BoxEval, ExtensionOrder};
use crate::interval::{IBox, Interval, Precision};
use crate::solver::bisect_any;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trigger {
    C1,
    C2,
    C3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PrecisionVerdict {
    pub trigger: Option<Trigger>,
}

impl PrecisionVerdict {
    pub const KEEP: PrecisionVerdict = PrecisionVerdict { trigger: None };

    fn from(t: Trigger) -> Self {
        PrecisionVerdict { trigger: Some(t) }
    }

    pub fn escalate(&self) -> bool {
        self.trigger.is_some()
    }
}

/// How C2 compares the enclosure of a box with those of its halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum C2Form {
    /// Every component of the parent enclosure lies in the hull of the
    /// children's enclosures.
    Subset,
    /// Some half has, in every component, an enclosure at least as wide as
    /// the parent's.
    #[default]
    Width,
}

/// C1 then C2 for a box and its two halves (all three usually inflated).
pub fn check_prec_ud(
    parent: &BoxEval,
    first: &BoxEval,
    second: &BoxEval,
    order: ExtensionOrder,
    form: C2Form,
) -> PrecisionVerdict {
    let not_narrower = |child: &BoxEval| {
        child
            .bounds()
            .iter()
            .zip(parent.bounds().iter())
            .all(|(c, p)| c.width() >= p.width())
    };
    if not_narrower(first) || not_narrower(second) {
        return PrecisionVerdict::from(Trigger::C1);
    }
    let m = parent.bounds().dim();
    let stalled = match form {
        C2Form::Subset => (0..m).all(|i| {
            let hull = first.working_extension(order, i).hull(&second.working_extension(order, i));
            parent.working_extension(order, i).subset_of(&hull)
        }),
        C2Form::Width => [first, second].iter().any(|child| {
            (0..m).all(|i| child.working_extension(order, i).width() >= parent.working_extension(order, i).width())
        }),
    };
    if stalled {
        PrecisionVerdict::from(Trigger::C2)
    } else {
        PrecisionVerdict::KEEP
    }
}

/// C3 on a box, with `s = C F(P)` at its center. A singular midpoint
/// Jacobian never triggers.
pub fn check_prec_t(e: &BoxEval) -> PrecisionVerdict {
    let Some(step) = e.center_step() else {
        return PrecisionVerdict::KEEP;
    };
    let x = e.bounds();
    let step_width = step.iter().map(Interval::width).max().expect("non-empty");
    if step_width < x.width() {
        return PrecisionVerdict::KEEP;
    }
    let target: Vec<Interval> = e.center().iter().zip(step).map(|(p, s)| p.sub(s)).collect();
    let target = IBox::new(target).expect("same dimension");
    if target.intersects(x).expect("same dimension") {
        PrecisionVerdict::from(Trigger::C3)
    } else {
        PrecisionVerdict::KEEP
    }
}

/// Parameters of a precision check within one fixed-precision pass.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    pub omega: BigFloat,
    pub precision: Precision,
    pub max_precision: Precision,
    pub eps_rel: f64,
    pub order: ExtensionOrder,
    pub c2_form: C2Form,
}

/// Bisection of a box computed during the check, kept for reuse.
pub struct Split {
    pub first: IBox,
    pub second: IBox,
    pub first_inflated: BoxEval,
    pub second_inflated: BoxEval,
}

pub struct PrecisionCheck {
    pub verdict: PrecisionVerdict,
    /// The inflated box when the check inflated.
    pub inflated: Option<BoxEval>,
    pub split: Option<Split>,
}

/// Full precision check for a box popped from the work list.
///
/// With `inflate_and_bisect`, the box and both of its halves are inflated
/// and C1, C2, then C3 (below the maximal precision only) are tested on them.
/// Otherwise only C3 is tested, on the box itself.
pub fn check_prec(x: &BoxEval, ctx: &PrecisionContext, inflate_and_bisect: bool) -> PrecisionCheck {
    check_prec_with(x, ctx, inflate_and_bisect, None)
}

/// [`check_prec`] reusing an already evaluated inflation of `x`.
pub fn check_prec_with(
    x: &BoxEval,
    ctx: &PrecisionContext,
    inflate_and_bisect: bool,
    inflated: Option<BoxEval>,
) -> PrecisionCheck {
    let below_max = ctx.precision < ctx.max_precision;
    if !inflate_and_bisect {
        let verdict = if below_max { check_prec_t(x) } else { PrecisionVerdict::KEEP };
        return PrecisionCheck {
            verdict,
            inflated: None,
            split: None,
        };
    }
    let (first, second) = bisect_any(x, &ctx.omega);
    let counter = x.counter();
    let make = |b: &IBox| BoxEval::with_counter(x.system().clone(), b.inflate(ctx.eps_rel), counter.clone());
    let inflated = inflated.unwrap_or_else(|| make(x.bounds()));
    debug_assert_eq!(inflated.bounds(), &x.bounds().inflate(ctx.eps_rel));
    let first_inflated = make(&first);
    let second_inflated = make(&second);
    let mut verdict = check_prec_ud(&inflated, &first_inflated, &second_inflated, ctx.order, ctx.c2_form);
    if !verdict.escalate() && below_max {
        verdict = check_prec_t(&inflated);
    }
    PrecisionCheck {
        verdict,
        inflated: Some(inflated),
        split: Some(Split {
            first,
            second,
            first_inflated,
            second_inflated,
        }),
    }
}
