//! Exclusion, existence-and-uniqueness, and duplicate detection tests.

use std::sync::Arc;

use crate::enclosure::{BoxEval, ExtensionOrder};
use crate::interval::{IBox, Precision};
use crate::poly::CompiledSystem;
use crate::strategy::Strategy;

/// A box certified to contain exactly one root.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBox {
    pub bounds: IBox,
    pub precision: Precision,
    /// Krawczyk image of `bounds`, a sub-box holding the same root.
    pub krawczyk_image: IBox,
}

/// True when `F` provably has no root in the box: some component range
/// excludes zero, or the Krawczyk image misses the box.
///
/// The natural extension is tried first; the strategy's higher order
/// extension and the Krawczyk operator only when needed.
pub fn check_no_solution(e: &BoxEval, strategy: Strategy) -> bool {
    let m = e.bounds().dim();
    if e.f_natural().iter().any(|v| !v.contains_zero()) {
        return true;
    }
    let order = strategy.range_extension();
    if order != ExtensionOrder::Order0 && (0..m).any(|i| !e.working_extension(order, i).contains_zero()) {
        return true;
    }
    e.krawczyk(strategy.krawczyk()).is_disjoint()
}

/// True when the strategy's Krawczyk image lies in the interior of the box.
pub fn check_one_solution(e: &BoxEval, strategy: Strategy) -> bool {
    e.krawczyk(strategy.krawczyk()).is_strictly_inside()
}

/// Whether the root certified in `x` is already held by a box of `list`.
/// Both `x` and the list entries must be certified boxes.
pub fn is_sol_in_list(x: &IBox, list: &[SolutionBox]) -> bool {
    list.iter().any(|s| {
        let b = s.bounds.with_precision(x.precision().max(s.bounds.precision()));
        let y = x.with_precision(b.precision());
        y.intersects(&b).expect("solution boxes share the system dimension")
    })
}

pub fn no_solution_in(cs: &Arc<CompiledSystem>, strategy: Strategy, x: &IBox) -> bool {
    check_no_solution(&BoxEval::new(Arc::clone(cs), x.clone()), strategy)
}

pub fn one_solution_in(cs: &Arc<CompiledSystem>, strategy: Strategy, x: &IBox) -> bool {
    check_one_solution(&BoxEval::new(Arc::clone(cs), x.clone()), strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_system;

    fn cs(text: &str) -> Arc<CompiledSystem> {
        parse_system(text).unwrap().compile(Precision::DOUBLE)
    }

    fn b(bounds: &[(f64, f64)]) -> IBox {
        IBox::from_f64_bounds(bounds)
    }

    #[test]
    fn exclusion_examples() {
        let f = cs("vars x\np: x^2 - 2");
        for s in Strategy::ALL {
            assert!(no_solution_in(&f, s, &b(&[(3.0, 4.0)])));
            assert!(!no_solution_in(&f, s, &b(&[(1.0, 2.0)])));
        }
        let circle = cs("vars x y\np: x^2+y^2-1\nq: x - y");
        assert!(no_solution_in(&circle, Strategy::default(), &b(&[(2.0, 3.0), (2.0, 3.0)])));
    }

    #[test]
    fn natural_range_short_circuits() {
        let f = cs("vars x\np: x^2 - 2");
        let e = BoxEval::new(Arc::clone(&f), b(&[(3.0, 4.0)]));
        assert!(check_no_solution(&e, Strategy::default()));
        let c = e.counter().snapshot();
        assert_eq!((c.f, c.j, c.h), (1, 0, 0));
    }

    #[test]
    fn uniqueness_examples() {
        let f = cs("vars x\np: x^2 - 2");
        for s in Strategy::ALL {
            assert!(one_solution_in(&f, s, &b(&[(1.0, 2.0)])));
            assert!(!one_solution_in(&f, s, &b(&[(-2.0, 2.0)])));
            assert!(!one_solution_in(&f, s, &b(&[(0.1, 0.2)])));
        }
    }

    #[test]
    fn duplicate_detection() {
        let sol = |lo, hi| SolutionBox {
            bounds: b(&[(lo, hi)]),
            precision: Precision::DOUBLE,
            krawczyk_image: b(&[(lo, hi)]),
        };
        let x = b(&[(1.0, 2.0)]);
        assert!(is_sol_in_list(&x, &[sol(1.5, 2.5)]));
        assert!(!is_sol_in_list(&x, &[sol(3.0, 4.0)]));
        assert!(!is_sol_in_list(&x, &[]));
        let wide = x.with_precision(Precision::new(106).unwrap());
        assert!(is_sol_in_list(&wide, &[sol(1.5, 2.5)]));
    }
}
