//! Two-body elastic collisions and their billiard picture.
//!
//! A collision between particles `i` and `j` is the linear map `T_ij` on
//! velocity space. It is the `B`-reflection across the wall `x_i = x_j`,
//! whose `B`-normal is `n_ij = e_j / m_j - e_i / m_i`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{bilinear_unchecked, MassVector, PAIR_SUM_REL_TOL};

/// `μ_ij = 2 m_j / (m_i + m_j)`.
pub fn mu(mi: f64, mj: f64) -> Result<f64> {
    let sum = mi + mj;
    if sum.abs() <= PAIR_SUM_REL_TOL * mi.abs().max(mj.abs()) {
        return Err(Error::ZeroPairMass { i: 0, j: 1, mi, mj });
    }
    Ok(2.0 * mj / sum)
}

/// The pair `(μ_ij, μ_ji)`; the two always sum to 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionCoefficient {
    pub mu_ij: f64,
    pub mu_ji: f64,
}

impl CollisionCoefficient {
    pub fn new(mi: f64, mj: f64) -> Result<Self> {
        Ok(Self {
            mu_ij: mu(mi, mj)?,
            mu_ji: mu(mj, mi)?,
        })
    }

    /// Outgoing velocities for incoming `(vi, vj)`.
    pub fn apply(&self, vi: f64, vj: f64) -> (f64, f64) {
        let dv = vj - vi;
        (vi + self.mu_ij * dv, vj - self.mu_ji * dv)
    }
}

/// Outgoing velocities of an elastic collision, conserving `m_i v_i + m_j v_j`
/// and `m_i v_i^2 + m_j v_j^2`. With `μ_ij < 0` particle `i` is pushed
/// towards `j` rather than away.
pub fn resolve_collision(mi: f64, mj: f64, vi: f64, vj: f64) -> Result<(f64, f64)> {
    Ok(CollisionCoefficient::new(mi, mj)?.apply(vi, vj))
}

fn pair_coefficient(masses: &MassVector, i: usize, j: usize) -> Result<CollisionCoefficient> {
    check_pair(masses, i, j)?;
    CollisionCoefficient::new(masses.get(i), masses.get(j)).map_err(|_| Error::ZeroPairMass {
        i,
        j,
        mi: masses.get(i),
        mj: masses.get(j),
    })
}

fn check_pair(masses: &MassVector, i: usize, j: usize) -> Result<()> {
    let n = masses.len();
    if i >= n || j >= n || i == j {
        return Err(Error::Precondition(format!(
            "invalid particle pair ({i}, {j}) for {n} particles"
        )));
    }
    Ok(())
}

/// The matrix of `T_ij`: identity outside rows/columns `i, j`, and on them
///
/// ```text
/// T(e_i) = (1 - μ_ij) e_i + μ_ji e_j
/// T(e_j) = μ_ij e_i + (1 - μ_ji) e_j
/// ```
pub fn collision_matrix(masses: &MassVector, i: usize, j: usize) -> Result<DMatrix<f64>> {
    let c = pair_coefficient(masses, i, j)?;
    let mut t = DMatrix::identity(masses.len(), masses.len());
    t[(i, i)] = 1.0 - c.mu_ij;
    t[(j, i)] = c.mu_ji;
    t[(i, j)] = c.mu_ij;
    t[(j, j)] = 1.0 - c.mu_ji;
    Ok(t)
}

/// Applies `T_ij` in place. Works on velocities and, for the unfolding
/// identity, on positions.
pub fn apply_collision_map(masses: &MassVector, i: usize, j: usize, v: &mut [f64]) -> Result<()> {
    masses.check_dim(v)?;
    let c = pair_coefficient(masses, i, j)?;
    let (wi, wj) = c.apply(v[i], v[j]);
    v[i] = wi;
    v[j] = wj;
    Ok(())
}

/// `B`-normal of the collision wall `x_i = x_j`: `B(x, n) = x_j - x_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallNormal {
    pub i: usize,
    pub j: usize,
    pub n: Vec<f64>,
}

impl WallNormal {
    pub fn new(masses: &MassVector, i: usize, j: usize) -> Result<Self> {
        check_pair(masses, i, j)?;
        let mut n = vec![0.0; masses.len()];
        n[j] = 1.0 / masses.get(j);
        n[i] = -1.0 / masses.get(i);
        Ok(Self { i, j, n })
    }

    /// `Q(n) = (m_i + m_j) / (m_i m_j)`, computed from the vector.
    pub fn norm_sq(&self, masses: &MassVector) -> f64 {
        bilinear_unchecked(masses.as_slice(), &self.n, &self.n)
    }

    /// Membership in the wall `S_ij`.
    pub fn contains(&self, x: &[f64]) -> bool {
        x[self.i] == x[self.j]
    }
}

/// Mirror law for an arbitrary symmetric form: the component along `n` is
/// negated and the `B`-orthogonal component is kept, `w = v - 2 B(v,n)/Q(n) n`.
pub fn reflect(masses: &MassVector, normal: &WallNormal, v: &[f64]) -> Result<Vec<f64>> {
    masses.check_dim(v)?;
    masses.check_dim(&normal.n)?;
    let m = masses.as_slice();
    let q = bilinear_unchecked(m, &normal.n, &normal.n);
    let (mi, mj) = (masses.get(normal.i).abs(), masses.get(normal.j).abs());
    let tol = 1e-12 * (1.0 / mi + 1.0 / mj).powi(2) * masses.max_abs();
    if q.abs() < tol {
        return Err(Error::DegenerateNormal { q });
    }
    let k = 2.0 * bilinear_unchecked(m, v, &normal.n) / q;
    Ok(v.iter().zip(&normal.n).map(|(vi, ni)| vi - k * ni).collect())
}
