//! The splitting function `f_λ` and the leading-minor product it refines.
//!
//! For `X ∈ cl(𝒪_λ)`, `F(X) = Π_{i<n} det((I + X)_{≤i,≤i})` expands as
//! `Π_i Σ_j s_j(X_{≤i,≤i})`. Under the grading `X ↦ tX` the top-degree part
//! of the `i`-th factor is `f_{λ,i}(X) = s_{d_{λ,i}}(X_{≤i,≤i})`, and
//! `f_λ = Π_i f_{λ,i}` vanishes on every smaller orbit `𝒪_μ`, `μ ◁ λ`.

use rayon::prelude::*;

use crate::combinatorics::{d_value, DVector, Partition};
use crate::constructions::{random_orbit_element, OrbitSample};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::top_nonzero_index;
use crate::matrix::Matrix;
use crate::rng::TrialRng;

/// Default number of samples tried by [`find_nonvanishing_witness`].
pub const DEFAULT_MAX_TRIALS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingValue<F: Field> {
    /// `f_{λ,1}(X), …, f_{λ,n-1}(X)`.
    pub factors: Vec<F::Elem>,
    pub product: F::Elem,
}

impl<F: Field> SplittingValue<F> {
    /// 1-based index of the first vanishing factor.
    pub fn first_zero_factor(&self, field: &F) -> Option<usize> {
        self.factors.iter().position(|v| field.is_zero(v)).map(|k| k + 1)
    }
}

/// Per-index top degrees: entry `i-1` is the degree in `t` of `det(I_i + t·X_{≤i,≤i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub degrees: Vec<usize>,
}

impl DegreeProfile {
    pub fn total(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Componentwise `≤` against a d-vector.
    pub fn bounded_by(&self, d: &DVector) -> bool {
        self.degrees.len() == d.values().len()
            && self.degrees.iter().zip(d.values()).all(|(a, b)| a <= b)
    }
}

fn require_size<F: Field>(lambda: &Partition, x: &Matrix<F>) -> Result<usize> {
    let n = x.require_square()?;
    if n != lambda.n() {
        return Err(Error::DimensionMismatch(format!(
            "{n}x{n} matrix for a partition of {}",
            lambda.n()
        )));
    }
    Ok(n)
}

/// `f_{λ,i}(X) = s_{d_{λ,i}}(X_{≤i,≤i})`.
pub fn f_component<F: Field>(lambda: &Partition, i: usize, x: &Matrix<F>) -> Result<F::Elem> {
    require_size(lambda, x)?;
    let d = d_value(lambda, i)?;
    let s = x.leading_submatrix(i)?.principal_minor_sums()?;
    Ok(s[d].clone())
}

pub fn f_lambda<F: Field>(lambda: &Partition, x: &Matrix<F>) -> Result<SplittingValue<F>> {
    let n = require_size(lambda, x)?;
    let field = x.field();
    let factors = (1..n)
        .map(|i| f_component(lambda, i, x))
        .collect::<Result<Vec<_>>>()?;
    let product = factors.iter().fold(field.one(), |acc, v| field.mul(&acc, v));
    Ok(SplittingValue { factors, product })
}

/// `Π_{i=1}^{n-1} det((I + X)_{≤i,≤i})`.
pub fn klt_factor<F: Field>(x: &Matrix<F>) -> Result<F::Elem> {
    let n = x.require_square()?;
    let field = x.field();
    let shifted = x.add(&Matrix::identity(field, n))?;
    (1..n).try_fold(field.one(), |acc, i| {
        Ok(field.mul(&acc, &shifted.leading_submatrix(i)?.determinant()?))
    })
}

/// `Π_{i=1}^{n-1} det(X_{≤i,≤i})`: the splitting function for the Borel case.
pub fn leading_minor_product<F: Field>(x: &Matrix<F>) -> Result<F::Elem> {
    let n = x.require_square()?;
    let field = x.field();
    (1..n).try_fold(field.one(), |acc, i| {
        Ok(field.mul(&acc, &x.leading_submatrix(i)?.determinant()?))
    })
}

pub fn degree_profile<F: Field>(x: &Matrix<F>) -> Result<DegreeProfile> {
    let n = x.require_square()?;
    let degrees = (1..n)
        .map(|i| {
            let s = x.leading_submatrix(i)?.principal_minor_sums()?;
            Ok(top_nonzero_index(x.field(), &s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeProfile { degrees })
}

/// Coefficients in `t` of `F(tX) = Π_i Σ_j s_j(X_{≤i,≤i}) t^j`, ascending.
pub fn klt_scaling_polynomial<F: Field>(x: &Matrix<F>) -> Result<Vec<F::Elem>> {
    let n = x.require_square()?;
    let field = x.field();
    let mut acc = vec![field.one()];
    for i in 1..n {
        let s = x.leading_submatrix(i)?.principal_minor_sums()?;
        let mut next = vec![field.zero(); acc.len() + s.len() - 1];
        for (a, u) in acc.iter().enumerate() {
            for (b, v) in s.iter().enumerate() {
                next[a + b] = field.add(&next[a + b], &field.mul(u, v));
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Searches trial streams `0..max_trials` for `X ∈ 𝒪_λ` with `f_λ(X) ≠ 0`.
///
/// `stream(k)` yields the generator for trial `k`. Trials run in parallel and
/// the lowest successful index wins, so the result does not depend on
/// scheduling. Returns that index with the sample.
pub fn find_nonvanishing_witness<F, S>(
    lambda: &Partition,
    field: &F,
    stream: S,
    max_trials: u64,
    bound: i64,
) -> Result<(u64, OrbitSample<F>)>
where
    F: Field,
    S: Fn(u64) -> TrialRng + Sync,
{
    (0..max_trials)
        .into_par_iter()
        .map(|k| -> Result<Option<(u64, OrbitSample<F>)>> {
            let mut rng = stream(k);
            let sample = random_orbit_element(field, lambda, &mut rng, bound)?;
            let value = f_lambda(lambda, &sample.matrix)?;
            Ok((!field.is_zero(&value.product)).then_some((k, sample)))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Err(Error::Exhausted(max_trials)))
        .and_then(|found| found.ok_or(Error::Exhausted(max_trials)))
}
