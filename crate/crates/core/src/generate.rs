//! Dense random systems with small integer coefficients.
//!
//! Coefficients come from a SplitMix64 stream seeded with the given seed.
//! Polynomials are filled one after the other, monomials in increasing
//! graded-lexicographic order. Each coefficient consumes 64-bit draws until
//! `(draw >> 1) mod 2^bits` is nonzero; that value is the magnitude and the
//! low bit of the same draw is the sign (1 for negative).

use num_bigint::BigInt;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::poly::{Monomial, MPoly, PolySystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("dimension must be at least 1")]
    Dimension,
    #[error("degree must be at least 1")]
    Degree,
    #[error("coefficient bit size must be between 1 and 63, got {0}")]
    CoefficientBits(u32),
}

/// Exponent vectors of every monomial of total degree at most `d` in `m`
/// variables, in increasing graded-lexicographic order.
pub fn dense_monomials(m: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, m: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(prefix, m, budget - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), m, d, &mut out);
    out.sort_by(|a, b| Monomial::new(a.clone()).cmp(&Monomial::new(b.clone())));
    out
}

fn draw_coefficient(rng: &mut SplitMix64, bits: u32) -> BigInt {
    let mask = (1u64 << bits) - 1;
    loop {
        let v = rng.next_u64();
        let mag = (v >> 1) & mask;
        if mag != 0 {
            let c = BigInt::from(mag);
            return if v & 1 == 1 { -c } else { c };
        }
    }
}

/// A square system of `m` dense polynomials of degree `d` in `m` variables.
pub fn random_system(m: usize, d: u32, coeff_bits: u32, seed: u64) -> Result<PolySystem, GenerateError> {
    if m == 0 {
        return Err(GenerateError::Dimension);
    }
    if d == 0 {
        return Err(GenerateError::Degree);
    }
    if !(1..=63).contains(&coeff_bits) {
        return Err(GenerateError::CoefficientBits(coeff_bits));
    }
    let monomials = dense_monomials(m, d);
    let mut rng = SplitMix64::seed_from_u64(seed);
    let polys = (0..m)
        .map(|_| {
            MPoly::from_terms(
                m,
                monomials
                    .iter()
                    .map(|e| (e.clone(), draw_coefficient(&mut rng, coeff_bits))),
            )
        })
        .collect();
    Ok(PolySystem::from_polys(polys).expect("square by construction"))
}
