use num_bigint::BigInt;

use super::MPoly;
use crate::interval::{Interval, Precision};

#[derive(Clone, Debug)]
enum Node {
    Zero,
    Const(Interval),
    /// Univariate in `var` with coefficients in the later variables; parts
    /// are sorted by strictly decreasing exponent.
    Nest { var: usize, parts: Vec<(u32, Node)> },
}

/// Nested Horner form of a polynomial along `x_1, x_2, ...`, with
/// coefficient enclosures at a fixed precision.
#[derive(Clone, Debug)]
pub struct HornerProgram {
    prec: Precision,
    nvars: usize,
    root: Node,
}

impl HornerProgram {
    pub fn compile(p: &MPoly, prec: Precision) -> Self {
        let terms: Vec<(&[u32], &BigInt)> = p.terms().map(|(m, c)| (m.exponents(), c)).collect();
        HornerProgram {
            prec,
            nvars: p.nvars(),
            root: build(&terms, 0, p.nvars(), prec),
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn eval(&self, x: &[Interval]) -> Interval {
        assert_eq!(x.len(), self.nvars, "point dimension");
        eval_node(&self.root, x, self.prec)
    }
}

fn build(terms: &[(&[u32], &BigInt)], var: usize, nvars: usize, prec: Precision) -> Node {
    if terms.is_empty() {
        return Node::Zero;
    }
    if var == nvars {
        debug_assert_eq!(terms.len(), 1);
        return Node::Const(Interval::from_integer(terms[0].1, prec));
    }
    let mut exps: Vec<u32> = terms.iter().map(|(e, _)| e[var]).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.dedup();
    if exps == [0] {
        return build(terms, var + 1, nvars, prec);
    }
    let parts = exps
        .into_iter()
        .map(|e| {
            let group: Vec<_> = terms.iter().filter(|(m, _)| m[var] == e).cloned().collect();
            (e, build(&group, var + 1, nvars, prec))
        })
        .collect();
    Node::Nest { var, parts }
}

fn eval_node(node: &Node, x: &[Interval], prec: Precision) -> Interval {
    match node {
        Node::Zero => Interval::zero(prec),
        Node::Const(c) => c.clone(),
        Node::Nest { var, parts } => {
            let xv = &x[*var];
            let mut acc = eval_node(&parts[0].1, x, prec);
            let mut prev = parts[0].0;
            for (e, child) in &parts[1..] {
                for _ in 0..(prev - e) {
                    acc = acc.mul(xv);
                }
                acc = acc.add(&eval_node(child, x, prec));
                prev = *e;
            }
            for _ in 0..prev {
                acc = acc.mul(xv);
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;
    use proptest::prelude::*;

    fn d() -> Precision {
        Precision::DOUBLE
    }

    fn x_squared_minus_two() -> MPoly {
        let x = MPoly::var(1, 0);
        &(&x * &x) - &MPoly::constant(1, 2.into())
    }

    #[test]
    fn square_has_dependency_effect() {
        let x = MPoly::var(1, 0);
        let h = HornerProgram::compile(&(&x * &x), d());
        assert_eq!(h.eval(&[Interval::from_f64(-1.0, 1.0)]).to_f64_bounds(), (-1.0, 1.0));
    }

    #[test]
    fn point_and_box_values() {
        let h = HornerProgram::compile(&x_squared_minus_two(), d());
        assert_eq!(h.eval(&[Interval::from_f64(1.5, 1.5)]).to_f64_bounds(), (0.25, 0.25));
        assert_eq!(h.eval(&[Interval::from_f64(3.0, 4.0)]).to_f64_bounds(), (7.0, 14.0));
    }

    #[test]
    fn wide_coefficient_is_enclosed() {
        let c = (BigInt::one() << 60) + 1;
        let h = HornerProgram::compile(&MPoly::constant(1, c), d());
        let v = h.eval(&[Interval::from_f64(0.0, 1.0)]);
        assert_eq!(v.to_f64_bounds(), (2f64.powi(60), 2f64.powi(60) + 256.0));
    }

    #[test]
    fn higher_precision_coefficients_nest() {
        let c: BigInt = (BigInt::one() << 130u32) + 12345u32;
        let p = MPoly::constant(1, c.clone());
        let lo = HornerProgram::compile(&p, d()).eval(&[Interval::zero(d())]);
        let p106 = Precision::new(106).unwrap();
        let hi = HornerProgram::compile(&p, p106).eval(&[Interval::zero(p106)]);
        assert!(hi.with_precision(Precision::new(200).unwrap()).subset_of(&lo.with_precision(Precision::new(200).unwrap())));
        let p200 = Precision::new(200).unwrap();
        assert!(HornerProgram::compile(&p, p200).eval(&[Interval::zero(p200)]).is_point());
    }

    fn arb_poly() -> impl Strategy<Value = (usize, MPoly)> {
        (1usize..=4).prop_flat_map(|m| {
            prop::collection::vec((prop::collection::vec(0u32..=2, m), -1000i64..1000), 1..20).prop_map(move |ts| {
                let p = MPoly::from_terms(m, ts.into_iter().map(|(e, c)| (e, c.into())));
                (m, p)
            })
        })
    }

    proptest! {
        #[test]
        fn horner_encloses_exact_value(
            (m, p) in arb_poly(),
            nums in prop::collection::vec(-1000i64..1000, 4),
            dens in prop::collection::vec(1i64..100, 4),
            bits in prop::sample::select(vec![53u32, 64, 113]),
        ) {
            let prec = Precision::new(bits).unwrap();
            let pt: Vec<BigRational> = (0..m).map(|i| BigRational::new(nums[i].into(), dens[i].into())).collect();
            let xs: Vec<Interval> = pt.iter().map(|r| Interval::from_rational(r, prec)).collect();
            let v = HornerProgram::compile(&p, prec).eval(&xs);
            prop_assert!(v.contains_rational(&p.eval_rational(&pt)));
        }
    }
}
