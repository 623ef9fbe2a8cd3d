//! The three-particle composed map `T = T_12 ∘ T_23` on the zero-momentum
//! plane `P0`.
//!
//! Every collision sequence of three particles alternates between the two
//! walls, so two consecutive collisions act on `P0` as `T`. Both factors are
//! `B`-reflections, hence `det T = 1`. For negative-gas masses `T` is
//! hyperbolic and its iterates drive `x(0) + t_{2k} v(0)` onto the null cone,
//! which is why the collision times accumulate.
//!
//! Bases used: `ξ1 = (-m2-m3, m1, m1)/M`, `ξ2 = (-m3, -m3, m1+m2)/M` and the
//! wall normals `n12`, `n23`. The pairs `{ξ1, n23}` and `{ξ2, n12}` are
//! `B`-orthogonal bases of `P0`, related by
//!
//! ```text
//! ξ1  = a ξ2 + c n12
//! n23 = b ξ2 + d n12
//! a = m1/(m1+m2)   b = M/(m3 (m1+m2))   c = m1 m2/(m1+m2)   d = -m1/(m1+m2)
//! ```

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::collision::WallNormal;
use crate::error::{Error, Result};
use crate::forms::{self, MassVector};
use crate::simulator::{center_of_mass_frame, simulate, ParticleState, SimulationLimits};

/// Spectrum of a 2×2 map with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Eigenvalues {
    /// Real pair `λ, 1/λ` with `|λ| > 1`.
    Hyperbolic { lambda: f64, lambda_inv: f64 },
    /// Conjugate pair `e^{±iθ}`.
    Elliptic { re: f64, im: f64 },
    /// Double eigenvalue `±1`.
    Parabolic { lambda: f64 },
}

impl Eigenvalues {
    /// From trace and determinant of a 2×2 matrix, assuming `det ≈ 1`.
    pub fn from_trace_det(trace: f64, det: f64) -> Self {
        let disc = trace * trace - 4.0 * det;
        let scale = 1e-12 * (trace * trace).max(1.0);
        if disc > scale {
            let root = disc.sqrt();
            // the larger-magnitude root without cancellation
            let big = 0.5 * (trace + trace.signum() * root);
            Self::Hyperbolic {
                lambda: big,
                lambda_inv: det / big,
            }
        } else if disc < -scale {
            Self::Elliptic {
                re: 0.5 * trace,
                im: 0.5 * (-disc).sqrt(),
            }
        } else {
            Self::Parabolic {
                lambda: 0.5 * trace,
            }
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Self::Hyperbolic { .. })
    }

    /// Modulus of the dominant eigenvalue.
    pub fn spectral_radius(&self) -> f64 {
        match *self {
            Self::Hyperbolic { lambda, .. } => lambda.abs(),
            Self::Elliptic { re, im } => re.hypot(im),
            Self::Parabolic { lambda } => lambda.abs(),
        }
    }
}

/// `T = T_12 ∘ T_23` restricted to `P0`, with its basis data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedMap3 {
    pub xi1: [f64; 3],
    pub xi2: [f64; 3],
    pub n12: [f64; 3],
    pub n23: [f64; 3],
    /// `[[a, b], [c, d]]`.
    #[serde(rename = "A1", with = "mat2")]
    pub a1: Matrix2<f64>,
    /// `T` in the basis `{ξ1, n23}`; column `k` holds the coordinates of the
    /// image of the `k`-th basis vector.
    #[serde(rename = "A2", with = "mat2")]
    pub a2: Matrix2<f64>,
    pub eigenvalues: Eigenvalues,
}

impl ComposedMap3 {
    pub fn det(&self) -> f64 {
        self.a2.determinant()
    }

    pub fn trace(&self) -> f64 {
        self.a2.trace()
    }

    /// The vector of `P0` with coordinates `(u, w)` in `{ξ1, n23}`.
    pub fn from_basis(&self, u: f64, w: f64) -> [f64; 3] {
        std::array::from_fn(|k| u * self.xi1[k] + w * self.n23[k])
    }

    /// Limit of `(t_{2k+2} - t_{2k}) / (t_{2k} - t_{2k-2})` in a collapse,
    /// taken as `λ^-2` for hyperbolic maps. The value is an empirical law
    /// confirmed by simulation to the resolution of the recorded gaps, not a
    /// derived identity. `None` when `T` is not hyperbolic.
    pub fn gap_ratio(&self) -> Option<f64> {
        self.eigenvalues
            .is_hyperbolic()
            .then(|| self.eigenvalues.spectral_radius().powi(-2))
    }
}

mod mat2 {
    use nalgebra::Matrix2;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix2<f64>, s: S) -> Result<S::Ok, S::Error> {
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix2<f64>, D::Error> {
        let r: [[f64; 2]; 2] = Deserialize::deserialize(d)?;
        Ok(Matrix2::new(r[0][0], r[0][1], r[1][0], r[1][1]))
    }
}

/// Builds `ξ1, ξ2, n12, n23`, the change of basis `A1` and the matrix `A2`.
///
/// With `Δ = ad - bc`, `A2 = (1/Δ) [[ad + bc, -2bd], [-2ac, ad + bc]]`.
pub fn composed_map(masses: &MassVector) -> Result<ComposedMap3> {
    if masses.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: masses.len(),
        });
    }
    let (m1, m2, m3) = (masses.get(0), masses.get(1), masses.get(2));
    if masses.total_sign() == 0 {
        return Err(Error::ZeroTotalMass);
    }
    if let Some((i, j)) = masses.zero_pair_sum() {
        return Err(Error::ZeroPairMass {
            i,
            j,
            mi: masses.get(i),
            mj: masses.get(j),
        });
    }
    let total = masses.total();
    let xi1 = [(-m2 - m3) / total, m1 / total, m1 / total];
    let xi2 = [-m3 / total, -m3 / total, (m1 + m2) / total];
    let n12: [f64; 3] = WallNormal::new(masses, 0, 1)?.n.try_into().expect("three particles");
    let n23: [f64; 3] = WallNormal::new(masses, 1, 2)?.n.try_into().expect("three particles");

    let s12 = m1 + m2;
    let a = m1 / s12;
    let b = total / (m3 * s12);
    let c = m1 * m2 / s12;
    let d = -m1 / s12;
    let delta = a * d - b * c;
    let diag = (a * d + b * c) / delta;
    let a1 = Matrix2::new(a, b, c, d);
    let a2 = Matrix2::new(diag, -2.0 * b * d / delta, -2.0 * a * c / delta, diag);
    let eigenvalues = Eigenvalues::from_trace_det(a2.trace(), a2.determinant());
    Ok(ComposedMap3 {
        xi1,
        xi2,
        n12,
        n23,
        a1,
        a2,
        eigenvalues,
    })
}

/// `Q(x(0) + t_{2k} v(0))` for `k = 1, 2, ...`, taken in the center-of-mass
/// frame along the simulated solution.
///
/// The values lie on the inertia polynomial at the even collision times and
/// shrink to zero when the solution collapses. A solution without collisions
/// yields an empty sequence.
pub fn wall_image_decay(masses: &MassVector, state: &ParticleState) -> Result<Vec<f64>> {
    wall_image_decay_with(masses, state, &SimulationLimits::default())
}

pub fn wall_image_decay_with(
    masses: &MassVector,
    state: &ParticleState,
    limits: &SimulationLimits,
) -> Result<Vec<f64>> {
    if masses.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: masses.len(),
        });
    }
    if !forms::gas_neg(masses) {
        return Err(Error::Precondition(
            "wall image decay needs negative-gas masses".into(),
        ));
    }
    let centered = center_of_mass_frame(masses, state)?;
    let traj = simulate(masses, &centered, limits)?;
    let (x0, v0) = (&centered.x, &centered.v);
    traj.events
        .iter()
        .skip(1)
        .step_by(2)
        .map(|e| {
            let dt = e.t - centered.t;
            let y: Vec<f64> = x0.iter().zip(v0).map(|(x, v)| x + dt * v).collect();
            forms::quadratic(masses, &y)
        })
        .collect()
}
