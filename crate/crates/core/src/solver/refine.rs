use crate::bigfloat::BigFloat;
use crate::certify::SolutionBox;
use crate::enclosure::{BoxEval, KrawczykOutcome, KrawczykVariant};
use crate::interval::Precision;
use crate::poly::PolySystem;

use super::next_precision;

const MAX_ITERATIONS: usize = 64;

/// Contracts a certified box with the order-2 Krawczyk operator until it is
/// narrower than `r_target`.
///
/// Each accepted box is itself certified. When the image stops shrinking or
/// fails to certify, the precision is raised along the solver's schedule up
/// to `p_max`. The narrowest certified box is returned.
pub fn refine_solution(system: &PolySystem, sol: &SolutionBox, r_target: &BigFloat, p_max: Precision) -> SolutionBox {
    let mut best = sol.clone();
    let mut candidate = sol.krawczyk_image.clone();
    let mut p = sol.precision;
    for _ in 0..MAX_ITERATIONS {
        if best.bounds.width() < *r_target {
            break;
        }
        let e = BoxEval::new(system.compile(p), candidate.with_precision(p));
        let accepted = match e.krawczyk(KrawczykVariant::Order2) {
            KrawczykOutcome::Applied(k) if k.classification == crate::enclosure::Classification::StrictlyInside => {
                Some(k.image.clone())
            }
            _ => None,
        };
        match accepted {
            Some(image) if e.bounds().width() < best.bounds.width() => {
                best = SolutionBox {
                    bounds: e.bounds().clone(),
                    precision: p,
                    krawczyk_image: image.clone(),
                };
                candidate = image;
            }
            _ => {
                if p >= p_max {
                    break;
                }
                p = next_precision(p, p_max).min(p_max);
                candidate = best.krawczyk_image.clone();
            }
        }
    }
    best
}

pub fn refine_solutions(
    system: &PolySystem,
    solutions: &[SolutionBox],
    r_target: &BigFloat,
    p_max: Precision,
) -> Vec<SolutionBox> {
    solutions
        .iter()
        .map(|s| refine_solution(system, s, r_target, p_max))
        .collect()
}
