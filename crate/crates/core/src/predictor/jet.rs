//! Closed forms on the 2-jet: the synchronous branch, the transcritical pair
//! of a surrounded critical cell and the discriminant behind it.

use std::ops::Neg;

use num_traits::Num;

use super::PredictError;
use crate::linear::SystemParams;

/// Synchronous branch `x = Dλ + Rλ²` and `K = Σa`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyncBranch {
    pub d: f64,
    pub r: f64,
    pub k: f64,
}

fn max_abs<'a>(xs: impl IntoIterator<Item = &'a f64>) -> f64 {
    xs.into_iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

fn checked_k(params: &SystemParams, tol: f64) -> Result<f64, PredictError> {
    let k: f64 = params.a.iter().sum();
    if k.abs() <= tol * (1.0 + max_abs(&params.a)) {
        return Err(PredictError::DegenerateK(k));
    }
    Ok(k)
}

pub fn sync_branch(params: &SystemParams, tol: f64) -> Result<SyncBranch, PredictError> {
    let k = checked_k(params, tol)?;
    let ell = params.ell;
    let sum_f2: f64 = params.f2.iter().flatten().sum();
    let sum_flam: f64 = params.flam.iter().sum();
    let d = -ell / k;
    let r = -(sum_f2 * ell * ell - k * sum_flam * ell + k * k * params.flamlam) / (k * k * k);
    Ok(SyncBranch { d, r, k })
}

fn block_sums(params: &SystemParams, lp: &[usize]) -> (f64, f64) {
    let n = params.n_inputs();
    let mut s_in = 0.0;
    let mut s_cross = 0.0;
    for &s in lp {
        for t in 0..n {
            if lp.contains(&t) {
                s_in += params.f2[s][t];
            } else {
                s_cross += params.f2[s][t];
            }
        }
    }
    (s_in, s_cross)
}

/// `(Dplus, Dminus)` for a critical cell all of whose inputs sit on the
/// synchronous branch. `Dplus` is the synchronous root.
pub fn transcritical_pair(
    params: &SystemParams,
    lp: &[usize],
    tol: f64,
) -> Result<(f64, f64), PredictError> {
    let k = checked_k(params, tol)?;
    let (s_in, s_cross) = block_sums(params, lp);
    if s_in.abs() <= tol * (1.0 + max_abs(params.f2.iter().flatten())) {
        return Err(PredictError::DegenerateQuadratic(s_in));
    }
    let flam_in: f64 = lp.iter().map(|&s| params.flam[s]).sum();
    let ratio = params.ell / k;
    let dplus = -ratio;
    let dminus = ratio * (1.0 + 2.0 * s_cross / s_in) - flam_in / s_in;
    if (dplus - dminus).abs() <= tol * (1.0 + dplus.abs() + dminus.abs()) {
        return Err(PredictError::CoincidentRoots(dplus));
    }
    Ok((dplus, dminus))
}

/// Coefficients of the quadratic `A D² + B D + C = 0` met by a surrounded
/// critical cell, together with `E` and `lhs = B² - 4AC`.
#[derive(Clone, Debug, PartialEq)]
pub struct Discriminant<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub e: T,
    pub lhs: T,
    /// `((-B + E)/2A, (-B - E)/2A)`.
    pub roots: (T, T),
}

/// Exact-arithmetic friendly form. Returns `None` when `K` or `A` is zero.
pub fn discriminant_terms<T>(
    a: &[T],
    ell: &T,
    f2: &[Vec<T>],
    flam: &[T],
    flamlam: &T,
    lp: &[usize],
) -> Option<Discriminant<T>>
where
    T: Clone + Num + Neg<Output = T>,
{
    let n = a.len();
    let sum = |it: &mut dyn Iterator<Item = T>| it.fold(T::zero(), |acc, v| acc + v);
    let inside = |i: &usize| lp.contains(i);
    let two = T::one() + T::one();

    let k = sum(&mut a.iter().cloned());
    if k.is_zero() {
        return None;
    }
    let sum_f2 = sum(&mut f2.iter().flatten().cloned());
    let sum_flam = sum(&mut flam.iter().cloned());
    let d = -(ell.clone() / k.clone());
    let r = -((sum_f2 * ell.clone() * ell.clone() - k.clone() * sum_flam * ell.clone()
        + k.clone() * k.clone() * flamlam.clone())
        / (k.clone() * k.clone() * k.clone()));

    let mut s_in = T::zero();
    let mut s_cross = T::zero();
    let mut s_out = T::zero();
    let mut s_col = T::zero();
    for s in 0..n {
        for t in 0..n {
            let v = f2[s][t].clone();
            match (inside(&s), inside(&t)) {
                (true, true) => s_in = s_in + v.clone(),
                (true, false) => s_cross = s_cross + v.clone(),
                (false, false) => s_out = s_out + v.clone(),
                _ => {}
            }
            if inside(&t) {
                s_col = s_col + v;
            }
        }
    }
    if s_in.is_zero() {
        return None;
    }
    let flam_in = sum(&mut lp.iter().map(|&s| flam[s].clone()));
    let flam_out = sum(&mut (0..n).filter(|i| !inside(i)).map(|i| flam[i].clone()));
    let a_out = sum(&mut (0..n).filter(|i| !inside(i)).map(|i| a[i].clone()));

    let qa = s_in;
    let qb = flam_in.clone() + two.clone() * s_cross * d.clone();
    let qc = a_out * r + d.clone() * flam_out + d.clone() * d * s_out + flamlam.clone();
    let e = flam_in - two.clone() * (ell.clone() / k) * s_col;
    let lhs = qb.clone() * qb.clone() - (two.clone() + two.clone()) * qa.clone() * qc.clone();
    let denom = two * qa.clone();
    let roots = (
        (e.clone() - qb.clone()) / denom.clone(),
        (-qb.clone() - e.clone()) / denom,
    );
    Some(Discriminant {
        a: qa,
        b: qb,
        c: qc,
        e,
        lhs,
        roots,
    })
}

pub fn discriminant_identity(
    params: &SystemParams,
    lp: &[usize],
    tol: f64,
) -> Result<Discriminant<f64>, PredictError> {
    checked_k(params, tol)?;
    let (s_in, _) = block_sums(params, lp);
    if s_in.abs() <= tol * (1.0 + max_abs(params.f2.iter().flatten())) {
        return Err(PredictError::DegenerateQuadratic(s_in));
    }
    discriminant_terms(
        &params.a,
        &params.ell,
        &params.f2,
        &params.flam,
        &params.flamlam,
        lp,
    )
    .ok_or(PredictError::DegenerateQuadratic(s_in))
}
