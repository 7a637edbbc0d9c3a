//! Spectral sensitivity `λ(f) = ‖A_f‖`, where `A_f` is the adjacency matrix
//! of the sensitivity graph (cube edges along which `f` changes).
//!
//! The graph is bipartite, so power iteration runs on `A_f²` (positive
//! semidefinite, top eigenvalue `λ²`) with an implicit matrix-vector product.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};

pub const MAX_SPECTRAL_ARITY: usize = 22;
pub const MAX_ITERATIONS: usize = 100_000;
pub const MAX_EDGE_EXPORT_ARITY: usize = 16;

const PARALLEL_FROM: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda: f64,
    pub iterations: usize,
    /// `|λ_k − λ_{k−1}|` at termination.
    pub residual: f64,
    /// `‖A²v − λ²v‖` for the final unit vector `v`.
    pub eigen_residual: f64,
    pub arity: usize,
}

/// Bit `i` of entry `x` is set when `f(x) ≠ f(x ⊕ e_i)`.
fn sensitive_masks(f: &BooleanFunction) -> Vec<u32> {
    let n = f.arity();
    (0..f.len())
        .map(|x| {
            let fx = f.value(x);
            (0..n)
                .filter(|&i| f.value(x ^ (1 << i)) != fx)
                .fold(0u32, |m, i| m | (1 << i))
        })
        .collect()
}

fn matvec(sens: &[u32], v: &[f64], out: &mut [f64]) {
    let row = |x: usize| {
        let mut m = sens[x];
        let mut s = 0.0;
        while m != 0 {
            let i = m.trailing_zeros();
            s += v[x ^ (1 << i)];
            m &= m - 1;
        }
        s
    };
    if out.len() >= PARALLEL_FROM {
        out.par_iter_mut()
            .enumerate()
            .for_each(|(x, o)| *o = row(x));
    } else {
        for (x, o) in out.iter_mut().enumerate() {
            *o = row(x);
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn spectral_sensitivity(f: &BooleanFunction, tol: f64) -> Result<SpectralResult> {
    let n = f.arity();
    if n > MAX_SPECTRAL_ARITY {
        return Err(Error::LimitExceeded(format!(
            "spectral sensitivity is capped at arity {MAX_SPECTRAL_ARITY}, got {n}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let sens = sensitive_masks(f);
    let zero = SpectralResult {
        lambda: 0.0,
        iterations: 0,
        residual: 0.0,
        eigen_residual: 0.0,
        arity: n,
    };
    if sens.iter().all(|&m| m == 0) {
        return Ok(zero);
    }
    let len = f.len();
    let mut v: Vec<f64> = (0..len)
        .map(|x| 1.0 + 1e-3 * x as f64 / len as f64)
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    let mut av = vec![0.0; len];
    let mut aav = vec![0.0; len];
    let mut prev = f64::NAN;
    for it in 1..=MAX_ITERATIONS {
        matvec(&sens, &v, &mut av);
        matvec(&sens, &av, &mut aav);
        // Rayleigh quotient of A² at unit v is ‖Av‖².
        let theta = av.iter().map(|x| x * x).sum::<f64>();
        let lambda = theta.sqrt();
        let nrm = norm(&aav);
        if nrm == 0.0 {
            return Ok(SpectralResult {
                iterations: it,
                ..zero
            });
        }
        let diff = (lambda - prev).abs();
        if diff < tol * 1e-2 {
            let eigen_residual = aav
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - theta * b).powi(2))
                .sum::<f64>()
                .sqrt();
            return Ok(SpectralResult {
                lambda,
                iterations: it,
                residual: diff,
                eigen_residual,
                arity: n,
            });
        }
        prev = lambda;
        for (x, y) in v.iter_mut().zip(&aav) {
            *x = y / nrm;
        }
    }
    Err(Error::LimitExceeded(format!(
        "power iteration did not converge in {MAX_ITERATIONS} iterations; best estimate λ ≈ {prev}"
    )))
}

/// Writes the sensitivity graph as CSV rows `x,y` with `x < y`, one per edge.
pub fn write_edge_csv<W: Write>(f: &BooleanFunction, mut w: W) -> Result<()> {
    if f.arity() > MAX_EDGE_EXPORT_ARITY {
        return Err(Error::LimitExceeded(format!(
            "edge export is capped at arity {MAX_EDGE_EXPORT_ARITY}"
        )));
    }
    writeln!(w, "x,y")?;
    for x in 0..f.len() {
        for i in 0..f.arity() {
            let y = x ^ (1 << i);
            if x < y && f.value(x) != f.value(y) {
                writeln!(w, "{x},{y}")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::Builtin;

    fn b(kind: Builtin, n: usize) -> BooleanFunction {
        BooleanFunction::builtin(kind, n).unwrap()
    }

    #[test]
    fn small_values() {
        let and = spectral_sensitivity(&b(Builtin::And, 2), 1e-12).unwrap();
        assert!((and.lambda - 2f64.sqrt()).abs() < 1e-9);
        let maj = spectral_sensitivity(&b(Builtin::Maj, 3), 1e-12).unwrap();
        assert!((maj.lambda - 2.0).abs() < 1e-9);
        let maj2 = spectral_sensitivity(&b(Builtin::Maj, 3).power(2).unwrap(), 1e-12).unwrap();
        assert!((maj2.lambda - 4.0).abs() < 1e-9);
    }

    #[test]
    fn constants_and_parity() {
        assert_eq!(
            spectral_sensitivity(&b(Builtin::Const0, 3), 1e-9)
                .unwrap()
                .lambda,
            0.0
        );
        // Parity's sensitivity graph is the whole cube: λ = n.
        let xor = spectral_sensitivity(&b(Builtin::Parity, 4), 1e-12).unwrap();
        assert!((xor.lambda - 4.0).abs() < 1e-9);
    }

    #[test]
    fn edge_csv() {
        let mut buf = Vec::new();
        write_edge_csv(&b(Builtin::And, 2), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y\n1,3\n2,3\n");
    }
}
