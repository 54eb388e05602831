//! Adjacency spectra by cyclic Jacobi rotations.

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_SPECTRUM_CAP: usize = 4096;

/// Tolerance for comparing computed eigenvalues against integer bounds.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

/// Eigenvalues in ascending order plus the off-diagonal Frobenius norm left
/// after the final sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub n: usize,
    pub residual: T,
}

impl<T: Float> Spectrum<T> {
    pub fn largest(&self) -> Option<T> {
        self.eigenvalues.last().copied()
    }

    /// `σ_{n−1}`, the second largest eigenvalue.
    pub fn second_largest(&self) -> Option<T> {
        self.n
            .checked_sub(2)
            .map(|i| self.eigenvalues[i])
    }
}

fn off_diagonal_norm<T: Float>(a: &[Vec<T>]) -> T {
    let mut s = T::zero();
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j {
                s = s + x * x;
            }
        }
    }
    s.sqrt()
}

/// All eigenvalues of a symmetric matrix.
///
/// Sweeps over the upper triangle in row order, annihilating each
/// off-diagonal entry with a plane rotation, until the off-diagonal
/// Frobenius norm drops below `n · max(1e-12, 64ε)`.
pub fn symmetric_eigenvalues<T: Float>(mut a: Vec<Vec<T>>) -> Result<Spectrum<T>> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let floor = T::from(1e-12).unwrap().max(T::epsilon() * T::from(64).unwrap());
    let target = floor * T::from(n.max(1)).unwrap();
    let two = T::one() + T::one();
    let mut residual = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while residual >= target {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::Certificate(format!(
                "Jacobi did not converge, residual {}",
                residual.to_f64().unwrap_or(f64::NAN)
            )));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = T::zero();
                a[q][p] = T::zero();
            }
        }
        residual = off_diagonal_norm(&a);
    }
    let mut eigenvalues: Vec<T> = (0..n).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(Spectrum {
        eigenvalues,
        n,
        residual,
    })
}

/// Spectrum of the 0/1 adjacency matrix in the scalar type `T`.
pub fn adjacency_spectrum_in<T: Float>(g: &Graph, cap: usize) -> Result<Spectrum<T>> {
    let n = g.n();
    if n > cap {
        return Err(Error::SizeLimit { size: n, limit: cap });
    }
    let mut a = vec![vec![T::zero(); n]; n];
    for (u, v) in g.edges() {
        a[u][v] = T::one();
        a[v][u] = T::one();
    }
    symmetric_eigenvalues(a)
}

pub fn adjacency_spectrum(g: &Graph) -> Result<Spectrum<f64>> {
    adjacency_spectrum_in(g, DEFAULT_SPECTRUM_CAP)
}

fn require_connected_regular(g: &Graph) -> Result<usize> {
    if !g.is_connected() {
        return Err(if g.n() == 0 { Error::EmptyGraph } else { Error::Disconnected });
    }
    g.regular_degree().filter(|&d| d > 0).ok_or(Error::NotRegular)
}

/// `σ_{n−1}` of a connected regular graph.
pub fn second_largest(g: &Graph) -> Result<f64> {
    require_connected_regular(g)?;
    adjacency_spectrum(g)?
        .second_largest()
        .ok_or_else(|| Error::InvalidArgument("need at least two vertices".into()))
}

/// First nonzero normalized-Laplacian eigenvalue of a connected `d`-regular
/// graph, `1 − σ_{n−1}/d`.
pub fn lambda1(g: &Graph) -> Result<f64> {
    let d = require_connected_regular(g)?;
    Ok(1.0 - second_largest(g)? / d as f64)
}
