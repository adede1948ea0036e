use thiserror::Error;

use crate::bigfloat::{BigFloat, Round};
use crate::enclosure::BoxEval;
use crate::interval::IBox;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no component of the box is wider than the minimal width")]
pub struct NoAdmissibleDirection;

/// Smear of direction `i`: the largest Jacobian magnitude in column `i`
/// times the width of component `i`.
fn smear(e: &BoxEval, i: usize) -> BigFloat {
    let jac = e.jacobian_natural();
    let col = jac
        .iter()
        .map(|row| row[i].mag())
        .max()
        .expect("non-empty Jacobian");
    col.mul(&e.bounds()[i].width(), 64, Round::Up)
}

fn widest(x: &IBox) -> usize {
    let mut best = 0;
    for i in 1..x.dim() {
        if x[i].width() > x[best].width() {
            best = i;
        }
    }
    best
}

/// Bisects along the direction of maximal smear among the components wider
/// than `omega`. Ties go to the lowest index.
pub fn bisect(e: &BoxEval, omega: &BigFloat) -> Result<(IBox, IBox), NoAdmissibleDirection> {
    let x = e.bounds();
    let mut best: Option<(usize, BigFloat)> = None;
    for i in 0..x.dim() {
        if x[i].width() <= *omega {
            continue;
        }
        let s = smear(e, i);
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((i, s));
        }
    }
    let (i, _) = best.ok_or(NoAdmissibleDirection)?;
    Ok(x.split(i))
}

/// [`bisect`], falling back to the widest component when none is wider than
/// `omega`.
pub fn bisect_any(e: &BoxEval, omega: &BigFloat) -> (IBox, IBox) {
    bisect(e, omega).unwrap_or_else(|_| e.bounds().split(widest(e.bounds())))
}
