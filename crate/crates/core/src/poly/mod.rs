//! Exact multivariate polynomials with integer coefficients.

mod horner;
mod parse;
mod system;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use horner::HornerProgram;
pub use parse::parse_system;
pub use system::{CompiledSystem, PolySystem};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("system is not square: {polys} polynomials in {vars} variables")]
    NonSquare { polys: usize, vars: usize },
    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables, stored as a sparse map from monomials
/// to nonzero integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// The polynomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(Monomial(e), BigInt::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::constant(self.nvars, BigInt::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_var`.
    pub fn differentiate(&self, var: usize) -> MPoly {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * BigInt::from(e));
        }
        out
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars, "point dimension");
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Renders the polynomial in the system file syntax, highest terms first.
    pub fn to_expr_string(&self, vars: &[String]) -> String {
        assert_eq!(vars.len(), self.nvars, "variable names");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                factors.push(mag.to_string());
            }
            for (name, &e) in vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.to_expr_string(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xy() -> (MPoly, MPoly) {
        (MPoly::var(2, 0), MPoly::var(2, 1))
    }

    fn c(v: i64) -> MPoly {
        MPoly::constant(2, v.into())
    }

    #[test]
    fn derivative_of_monomial() {
        let (x, y) = xy();
        let p = &(&x * &x) * &y;
        assert_eq!(p.differentiate(0), &(&c(2) * &x) * &y);
    }

    #[test]
    fn derivative_vanishes() {
        let (x, _) = xy();
        let p = &(&x * &x) - &c(2);
        assert!(p.differentiate(1).is_zero());
    }

    #[test]
    fn cancellation_removes_terms() {
        let (x, y) = xy();
        let p = &(&x + &y) - &y;
        assert_eq!(p, x);
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn expansion_of_clustered_factor() {
        let x = MPoly::var(1, 0);
        let k = MPoly::constant(1, BigInt::one() << 60);
        let one = MPoly::constant(1, BigInt::one());
        let a = &(&k * &x) - &k;
        let b = &a - &one;
        let p = &a * &b;
        assert_eq!(p.coefficient(&[2]), BigInt::one() << 120);
        let b121: BigInt = BigInt::one() << 121u32;
        let b60: BigInt = BigInt::one() << 60u32;
        assert_eq!(p.coefficient(&[1]), -(b121 + b60));
        assert_eq!(p.coefficient(&[0]), (BigInt::one() << 120) + (BigInt::one() << 60));
    }

    #[test]
    fn graded_order() {
        let a = Monomial::new(vec![0, 2]);
        let b = Monomial::new(vec![1, 0]);
        let d = Monomial::new(vec![1, 1]);
        assert!(b < a);
        assert!(a < d);
        assert!(Monomial::new(vec![0, 2]) < Monomial::new(vec![2, 0]));
    }

    #[test]
    fn expression_string() {
        let (x, y) = xy();
        let p = &(&(&c(3) * &(&x * &x)) - &y) + &c(-1);
        let s = p.to_expr_string(&["x".into(), "y".into()]);
        assert_eq!(s, "3*x^2 - y - 1");
        assert_eq!((-&x).to_expr_string(&["x".into(), "y".into()]), "-x");
        assert_eq!(MPoly::zero(2).to_string(), "0");
    }

    fn arb_poly(nvars: usize) -> impl Strategy<Value = MPoly> {
        prop::collection::vec(
            (prop::collection::vec(0u32..5, nvars), -50i64..50),
            0..50,
        )
        .prop_map(move |ts| MPoly::from_terms(nvars, ts.into_iter().map(|(e, c)| (e, c.into()))))
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    proptest! {
        #[test]
        fn mixed_partials_commute(p in arb_poly(3), j in 0usize..3, k in 0usize..3) {
            prop_assert_eq!(p.differentiate(j).differentiate(k), p.differentiate(k).differentiate(j));
        }

        #[test]
        fn derivative_matches_central_difference(
            p in arb_poly(2),
            pts in prop::collection::vec((-20i64..20, -20i64..20), 10),
        ) {
            // f(x+h) - f(x-h) = 2h f'(x) + O(h^3) with h = 2^-40, exact rational arithmetic.
            let h = BigRational::new(BigInt::one(), BigInt::one() << 40);
            let d = p.differentiate(0);
            for (a, b) in pts {
                let x = [rat(a, 7), rat(b, 5)];
                let xp = [&x[0] + &h, x[1].clone()];
                let xm = [&x[0] - &h, x[1].clone()];
                let fd = (p.eval_rational(&xp) - p.eval_rational(&xm)) / (&h * BigRational::from_integer(2.into()));
                let exact = d.eval_rational(&x);
                let err = (&fd - &exact).abs();
                let scale = exact.abs().max(BigRational::one());
                prop_assert!(err <= scale * BigRational::new(BigInt::one(), BigInt::one() << 30));
            }
        }
    }
}
