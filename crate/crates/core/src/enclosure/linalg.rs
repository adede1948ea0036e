use crate::bigfloat::BigFloat;
use crate::interval::{Interval, Precision};

use super::KrawczykFailure;

/// Dense interval matrix, row-major.
pub type IMatrix = Vec<Vec<Interval>>;

pub fn mat_vec(a: &IMatrix, v: &[Interval]) -> Vec<Interval> {
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), v.len(), "matrix-vector dimension");
            let mut it = row.iter().zip(v).map(|(x, y)| x.mul(y));
            let first = it.next().expect("non-empty row");
            it.fold(first, |acc, t| acc.add(&t))
        })
        .collect()
}

/// `I - C A` with interval arithmetic.
pub(super) fn identity_minus_product(c: &IMatrix, a: &IMatrix, prec: Precision) -> IMatrix {
    let m = c.len();
    let one = Interval::from_i64(1, prec);
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = c[i][0].mul(&a[0][j]);
                    for k in 1..m {
                        s = s.add(&c[i][k].mul(&a[k][j]));
                    }
                    if i == j {
                        one.sub(&s)
                    } else {
                        s.neg()
                    }
                })
                .collect()
        })
        .collect()
}

fn point_op(v: Interval) -> Interval {
    v.mid()
}

/// Approximate inverse of the entrywise midpoint of `j`, as a matrix of point
/// intervals. Gauss-Jordan elimination with partial pivoting, each result
/// rounded to a point. Fails when a pivot is zero or smaller than
/// `2^(-prec/2)` times the largest magnitude in its original row.
pub fn midpoint_inverse(j: &IMatrix) -> Result<IMatrix, KrawczykFailure> {
    let m = j.len();
    assert!(m > 0 && j.iter().all(|r| r.len() == m), "square matrix");
    let prec = j[0][0].precision();
    let zero = Interval::zero(prec);
    let one = Interval::from_i64(1, prec);

    let mut a: IMatrix = j.iter().map(|r| r.iter().map(Interval::mid).collect()).collect();
    let row_scale: Vec<BigFloat> = a
        .iter()
        .map(|r| r.iter().map(Interval::mag).max().expect("non-empty row"))
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    let mut inv: IMatrix = (0..m)
        .map(|i| (0..m).map(|k| if i == k { one.clone() } else { zero.clone() }).collect())
        .collect();

    for col in 0..m {
        let piv = (col..m)
            .max_by(|&r, &s| a[r][col].mag().cmp(&a[s][col].mag()).then(s.cmp(&r)))
            .expect("rows remain");
        a.swap(col, piv);
        inv.swap(col, piv);
        order.swap(col, piv);

        let p = a[col][col].clone();
        let threshold = row_scale[order[col]].mul_pow2(-(i64::from(prec.bits()) / 2));
        let pm = p.mag();
        if pm.is_zero() || pm < threshold {
            return Err(KrawczykFailure::SingularMidpointJacobian);
        }
        for k in 0..m {
            a[col][k] = point_op(a[col][k].checked_div(&p).expect("nonzero pivot"));
            inv[col][k] = point_op(inv[col][k].checked_div(&p).expect("nonzero pivot"));
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let factor = a[r][col].clone();
            if factor.mag().is_zero() {
                continue;
            }
            for k in 0..m {
                a[r][k] = point_op(a[r][k].sub(&factor.mul(&a[col][k])));
                inv[r][k] = point_op(inv[r][k].sub(&factor.mul(&inv[col][k])));
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: f64) -> Interval {
        Interval::from_f64(v, v)
    }

    fn mat(rows: &[&[f64]]) -> IMatrix {
        rows.iter().map(|r| r.iter().map(|&v| pt(v)).collect()).collect()
    }

    fn bounds(m: &IMatrix) -> Vec<Vec<(f64, f64)>> {
        m.iter().map(|r| r.iter().map(Interval::to_f64_bounds).collect()).collect()
    }

    #[test]
    fn scalar_inverse() {
        let c = midpoint_inverse(&mat(&[&[3.0]])).unwrap();
        let (lo, hi) = c[0][0].to_f64_bounds();
        assert_eq!(lo, hi);
        assert!((lo - 1.0 / 3.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn diagonal_inverse_is_exact() {
        let c = midpoint_inverse(&mat(&[&[2.0, 0.0], &[0.0, 4.0]])).unwrap();
        assert_eq!(bounds(&c), vec![vec![(0.5, 0.5), (0.0, 0.0)], vec![(0.0, 0.0), (0.25, 0.25)]]);
    }

    #[test]
    fn singular_matrix_fails() {
        assert_eq!(
            midpoint_inverse(&mat(&[&[1.0, 1.0], &[1.0, 1.0]])),
            Err(KrawczykFailure::SingularMidpointJacobian)
        );
        assert!(midpoint_inverse(&mat(&[&[0.0]])).is_err());
        assert!(midpoint_inverse(&mat(&[&[1.0, 1.0], &[1.0, 1.0 + 1e-12]])).is_err());
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let c = midpoint_inverse(&mat(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(bounds(&c), vec![vec![(0.0, 0.0), (1.0, 1.0)], vec![(1.0, 1.0), (0.0, 0.0)]]);
    }

    #[test]
    fn interval_entries_use_midpoints() {
        let j = vec![vec![Interval::from_f64(1.0, 3.0)]];
        let c = midpoint_inverse(&j).unwrap();
        assert_eq!(c[0][0].to_f64_bounds(), (0.5, 0.5));
    }

    #[test]
    fn product_with_inverse_is_near_identity() {
        let a = mat(&[&[4.0, -2.0, 1.0], &[3.0, 6.0, -4.0], &[2.0, 1.0, 8.0]]);
        let c = midpoint_inverse(&a).unwrap();
        let r = identity_minus_product(&c, &a, Precision::DOUBLE);
        for row in &r {
            for v in row {
                let (lo, hi) = v.to_f64_bounds();
                assert!(lo.abs() < 1e-14 && hi.abs() < 1e-14);
            }
        }
    }
}
