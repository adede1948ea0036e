use std::fmt;

use crate::bigfloat::BigFloat;

use super::{Interval, IntervalError, Precision};

/// A box: a non-empty vector of intervals sharing one precision.
#[derive(Clone, Debug, PartialEq)]
pub struct IBox(Vec<Interval>);

impl IBox {
    pub fn new(components: Vec<Interval>) -> Result<Self, IntervalError> {
        let first = components
            .first()
            .ok_or(IntervalError::DimensionError(0, 1))?
            .precision();
        if let Some(bad) = components.iter().find(|c| c.precision() != first) {
            return Err(IntervalError::InvalidPrecision(bad.precision().bits()));
        }
        Ok(IBox(components))
    }

    /// Binary64 box from `(lo, hi)` pairs. Panics on an empty list.
    pub fn from_f64_bounds(bounds: &[(f64, f64)]) -> Self {
        assert!(!bounds.is_empty(), "a box needs at least one component");
        IBox(bounds.iter().map(|&(l, h)| Interval::from_f64(l, h)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn precision(&self) -> Precision {
        self.0[0].precision()
    }

    pub fn components(&self) -> &[Interval] {
        &self.0
    }

    pub fn into_components(self) -> Vec<Interval> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    /// Largest component width.
    pub fn width(&self) -> BigFloat {
        self.0
            .iter()
            .map(Interval::width)
            .max()
            .expect("non-empty box")
    }

    /// Vector of component midpoints as a point box.
    pub fn mid(&self) -> IBox {
        IBox(self.0.iter().map(Interval::mid).collect())
    }

    pub fn is_point(&self) -> bool {
        self.0.iter().all(Interval::is_point)
    }

    fn check_dim(&self, other: &IBox) -> Result<(), IntervalError> {
        if self.dim() != other.dim() {
            return Err(IntervalError::DimensionError(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// `self ⊂ int(other)`.
    pub fn subset_of_interior(&self, other: &IBox) -> Result<bool, IntervalError> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a.subset_of_interior(b)))
    }

    /// `self ⊆ other`.
    pub fn subset_of(&self, other: &IBox) -> Result<bool, IntervalError> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a.subset_of(b)))
    }

    pub fn intersects(&self, other: &IBox) -> Result<bool, IntervalError> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a.intersects(b)))
    }

    /// Componentwise intersection; `None` when empty.
    pub fn intersection(&self, other: &IBox) -> Result<Option<IBox>, IntervalError> {
        self.check_dim(other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersection(b))
            .collect::<Option<Vec<_>>>()
            .map(IBox))
    }

    /// `self ∩ ∂other ≠ ∅`, i.e. `self` touches `other` without lying in its
    /// interior.
    pub fn meets_boundary_of(&self, other: &IBox) -> Result<bool, IntervalError> {
        Ok(self.intersects(other)? && !self.subset_of_interior(other)?)
    }

    pub fn inflate(&self, eps_rel: f64) -> IBox {
        IBox(self.0.iter().map(|c| c.inflate(eps_rel)).collect())
    }

    pub fn with_precision(&self, p: Precision) -> IBox {
        IBox(self.0.iter().map(|c| c.with_precision(p)).collect())
    }

    /// Halves of the box along component `i`.
    pub fn split(&self, i: usize) -> (IBox, IBox) {
        let (a, b) = self.0[i].split();
        let mut left = self.0.clone();
        let mut right = self.0.clone();
        left[i] = a;
        right[i] = b;
        (IBox(left), IBox(right))
    }

    pub fn hull(&self, other: &IBox) -> Result<IBox, IntervalError> {
        self.check_dim(other)?;
        Ok(IBox(self.0.iter().zip(&other.0).map(|(a, b)| a.hull(b)).collect()))
    }

    /// Componentwise `self - other`.
    pub fn sub(&self, other: &IBox) -> Vec<Interval> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }
}

impl std::ops::Index<usize> for IBox {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl fmt::Display for IBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn b1(lo: f64, hi: f64) -> IBox {
        IBox::from_f64_bounds(&[(lo, hi)])
    }

    #[test]
    fn predicates() {
        assert!(b1(1.25, 1.58).subset_of_interior(&b1(1.0, 2.0)).unwrap());
        assert_eq!(b1(1.0, 2.0).intersection(&b1(3.0, 4.0)).unwrap(), None);
        assert!(b1(0.0, 0.5).meets_boundary_of(&b1(0.0, 1.0)).unwrap());
        assert!(!b1(0.25, 0.5).meets_boundary_of(&b1(0.0, 1.0)).unwrap());
        assert!(!b1(2.0, 3.0).meets_boundary_of(&b1(0.0, 1.0)).unwrap());
        let two = IBox::from_f64_bounds(&[(0.0, 1.0), (0.0, 1.0)]);
        assert_eq!(
            b1(0.0, 1.0).intersects(&two),
            Err(IntervalError::DimensionError(1, 2))
        );
    }

    #[test]
    fn inflate_matches_rational_oracle() {
        let x = b1(1.0, 2.0).inflate(1.0 / 16.0);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        // w = 1, delta = 1/16 on each side.
        assert_eq!(x[0].lo().to_rational(), r(15, 16));
        assert_eq!(x[0].hi().to_rational(), r(33, 16));
    }

    #[test]
    fn inflate_point_uses_ulp_floor() {
        let x = b1(1.0, 1.0).inflate(1.0 / 16.0);
        assert_eq!(x[0].to_f64_bounds(), (1.0f64.next_down(), 1.0f64.next_up()));
        let p = Precision::new(200).unwrap();
        let y = b1(1.0, 1.0).with_precision(p).inflate(1.0 / 16.0);
        assert!(b1(1.0, 1.0).with_precision(p).subset_of_interior(&y).unwrap());
    }

    #[test]
    fn split_shares_midpoint() {
        let (a, b) = IBox::from_f64_bounds(&[(0.0, 1.0), (0.0, 4.0)]).split(1);
        assert_eq!(a, IBox::from_f64_bounds(&[(0.0, 1.0), (0.0, 2.0)]));
        assert_eq!(b, IBox::from_f64_bounds(&[(0.0, 1.0), (2.0, 4.0)]));
    }

    proptest! {
        #[test]
        fn inflation_is_strict(lo in -1e3f64..1e3, w in 0f64..10.0, eps in 0f64..0.5, bits in prop_oneof![Just(53u32), 54u32..300]) {
            let x = b1(lo, lo + w).with_precision(Precision::new(bits).unwrap());
            prop_assert!(x.subset_of_interior(&x.inflate(eps)).unwrap());
        }
    }
}
