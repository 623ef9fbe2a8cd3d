//! The mass-weighted bilinear form and the sign classification of mass systems.
//!
//! For masses `m` the form is `B(y, z) = Σ y_i m_i z_i` with quadratic form
//! `Q(y) = B(y, y)`. Kinetic energy is `Q(v) / 2` and the moment of inertia
//! is `Q(x)`. Everything interesting about a system of signed masses (whether
//! it can collapse, whether it is a graviton or a compressor) is decided by
//! the signs of the masses and of their partial sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold under which a pair sum `m_i + m_j` counts as zero.
pub const PAIR_SUM_REL_TOL: f64 = 1e-12;

/// Relative threshold under which derived sums (total mass, partial sums)
/// count as zero.
pub const DERIVED_SUM_REL_TOL: f64 = 1e-12;

/// The signed masses of a system of `N >= 2` particles on a line.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MassVector {
    masses: Vec<f64>,
}

impl MassVector {
    /// Builds a mass vector that is safe for collisions: every mass is finite
    /// and nonzero and no two masses sum to zero.
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        let mv = Self::for_analysis(masses)?;
        if let Some((i, j)) = mv.zero_pair_sum() {
            return Err(Error::ZeroPairMass {
                i,
                j,
                mi: mv.masses[i],
                mj: mv.masses[j],
            });
        }
        Ok(mv)
    }

    /// Builds a mass vector for form-level analysis only (signatures,
    /// classification). Pair sums may vanish; collision operations on such a
    /// vector report [`Error::ZeroPairMass`].
    pub fn for_analysis(masses: Vec<f64>) -> Result<Self> {
        if masses.len() < 2 {
            return Err(Error::TooFewParticles {
                min: 2,
                got: masses.len(),
            });
        }
        for (index, &value) in masses.iter().enumerate() {
            if !value.is_finite() || value == 0.0 {
                return Err(Error::InvalidMass { index, value });
            }
        }
        Ok(Self { masses })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.masses
    }

    pub fn get(&self, i: usize) -> f64 {
        self.masses[i]
    }

    /// Total mass `M`.
    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.masses.iter().fold(0.0, |acc, m| acc.max(m.abs()))
    }

    /// `Σ |m_i|`, the reference scale for derived-sum sign tests.
    pub fn abs_sum(&self) -> f64 {
        self.masses.iter().map(|m| m.abs()).sum()
    }

    /// `m_{j,k} = m_j + ... + m_k` with 1-based inclusive indices.
    pub(crate) fn partial_sum(&self, j: usize, k: usize) -> f64 {
        debug_assert!(1 <= j && j <= k && k <= self.len());
        self.masses[j - 1..k].iter().sum()
    }

    /// Sign of a derived sum with the relative zero band applied.
    pub(crate) fn derived_sign(&self, value: f64) -> i8 {
        let tol = DERIVED_SUM_REL_TOL * self.abs_sum();
        if value > tol {
            1
        } else if value < -tol {
            -1
        } else {
            0
        }
    }

    /// Sign of the total mass, zero inside the tolerance band.
    pub fn total_sign(&self) -> i8 {
        self.derived_sign(self.total())
    }

    /// First pair `(i, j)` whose masses sum to (numerically) zero.
    pub fn zero_pair_sum(&self) -> Option<(usize, usize)> {
        let tol = PAIR_SUM_REL_TOL * self.max_abs();
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| (self.masses[i] + self.masses[j]).abs() <= tol)
    }

    /// The same system with every mass multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::for_analysis(self.masses.iter().map(|m| m * factor).collect())
    }

    pub(crate) fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// Signature `(p, q)` of a symmetric form. When `degenerate` is set the counts
/// describe only the nondegenerate quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
    pub degenerate: bool,
}

impl Signature {
    pub fn is_definite(&self) -> bool {
        !self.degenerate && (self.p == 0 || self.q == 0) && self.p + self.q > 0
    }
}

/// Which of the named mass configurations a system falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassTag {
    AllSameSign,
    OneMassWithSignOfM,
    TotalMassZero,
    Graviton,
    Compressor,
    IndefiniteOther,
}

/// Classification verdict together with the raw collapse predicates.
///
/// `sign_flipped` is set when the graviton/compressor pattern matched only
/// after negating every mass; such a system has identical collision dynamics.
/// `gas_neg` and `cone` are evaluated on the masses in the orientation that
/// produced the tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemClass {
    pub tag: ClassTag,
    pub sign_flipped: bool,
    pub gas_neg: bool,
    pub cone: bool,
}

/// `B(y, z) = Σ y_i m_i z_i`.
pub fn bilinear(masses: &MassVector, y: &[f64], z: &[f64]) -> Result<f64> {
    masses.check_dim(y)?;
    masses.check_dim(z)?;
    Ok(bilinear_unchecked(masses.as_slice(), y, z))
}

pub(crate) fn bilinear_unchecked(m: &[f64], y: &[f64], z: &[f64]) -> f64 {
    m.iter()
        .zip(y.iter().zip(z))
        // y_i z_i first keeps the result exactly symmetric
        .map(|(mi, (yi, zi))| mi * (yi * zi))
        .sum()
}

/// `Q(y) = B(y, y)`.
pub fn quadratic(masses: &MassVector, y: &[f64]) -> Result<f64> {
    bilinear(masses, y, y)
}

/// Kinetic energy `Q(v) / 2`. Negative whenever the negative masses dominate.
pub fn kinetic_energy(masses: &MassVector, v: &[f64]) -> Result<f64> {
    Ok(0.5 * quadratic(masses, v)?)
}

/// Signature of `B` on all of `R^N`: the counts of positive and negative masses.
pub fn full_signature(masses: &MassVector) -> Signature {
    let p = masses.as_slice().iter().filter(|&&m| m > 0.0).count();
    Signature {
        p,
        q: masses.len() - p,
        degenerate: false,
    }
}

/// Signature of `B` restricted to the zero-momentum subspace
/// `P0 = {x : Σ m_i x_i = 0}`.
///
/// `P0` is the `B`-orthogonal complement of `(1, ..., 1)`, whose norm is the
/// total mass `M`. So `M > 0` removes one positive direction, `M < 0` one
/// negative direction, and `M = 0` puts `(1, ..., 1)` inside `P0` as a null
/// radical (one hyperbolic plane is lost from the quotient).
pub fn restricted_signature(masses: &MassVector) -> Signature {
    let Signature { p, q, .. } = full_signature(masses);
    match masses.total_sign() {
        1 => Signature {
            p: p - 1,
            q,
            degenerate: false,
        },
        -1 => Signature {
            p,
            q: q - 1,
            degenerate: false,
        },
        _ => Signature {
            p: p.saturating_sub(1),
            q: q.saturating_sub(1),
            degenerate: true,
        },
    }
}

/// Whether `B|P0` is definite: all masses share a sign, or exactly one mass
/// has the sign of the total mass.
pub fn is_definite_on_p0(masses: &MassVector) -> bool {
    let m = masses.as_slice();
    let positives = m.iter().filter(|&&x| x > 0.0).count();
    if positives == 0 || positives == m.len() {
        return true;
    }
    match masses.total_sign() {
        1 => positives == 1,
        -1 => m.len() - positives == 1,
        _ => false,
    }
}

/// `(m1 + m2 + m3) m1 m2 m3 > 0`, the condition for three particles on a ring
/// to unfold into a triangular billiard table.
pub fn glashow_mittag(m1: f64, m2: f64, m3: f64) -> bool {
    (m1 + m2 + m3) * m1 * m2 * m3 > 0.0
}

/// `m_{1,j} m_{k+1,N} M > 0` for all `1 <= j <= k <= N-1`.
///
/// Under this condition the ordered cone `x_1 <= ... <= x_N` inside `P0` lies
/// in the positive cone of `B`.
pub fn cone_condition(masses: &MassVector) -> bool {
    let n = masses.len();
    let total = masses.total_sign();
    if total == 0 {
        return false;
    }
    let prefix: Vec<i8> = (1..n)
        .map(|j| masses.derived_sign(masses.partial_sum(1, j)))
        .collect();
    let suffix: Vec<i8> = (1..n)
        .map(|k| masses.derived_sign(masses.partial_sum(k + 1, n)))
        .collect();
    (0..n - 1).all(|j| (j..n - 1).all(|k| prefix[j] * suffix[k] * total > 0))
}

/// Mass part of the negative-gas condition: interior masses negative,
/// `m_1 + ... + m_{N-1} > 0` and `(m_2 + ... + m_N) M > 0`.
pub fn gas_neg(masses: &MassVector) -> bool {
    let n = masses.len();
    if n < 3 {
        return false;
    }
    let m = masses.as_slice();
    m[1..n - 1].iter().all(|&x| x < 0.0)
        && masses.derived_sign(masses.partial_sum(1, n - 1)) > 0
        && masses.derived_sign(masses.partial_sum(2, n)) * masses.total_sign() > 0
}

/// Toy graviton: positive end masses, negative interior, and
/// `|m_2 + ... + m_{N-1}| < min(m_1, m_N)`.
pub fn is_graviton(masses: &MassVector) -> bool {
    let n = masses.len();
    if n < 3 {
        return false;
    }
    let m = masses.as_slice();
    if !(m[0] > 0.0 && m[n - 1] > 0.0 && m[1..n - 1].iter().all(|&x| x < 0.0)) {
        return false;
    }
    let interior = masses.partial_sum(2, n - 1).abs();
    masses.derived_sign(m[0].min(m[n - 1]) - interior) > 0
}

/// Compressor: `m_1 > 0 > m_2, ..., m_N`, `m_1 + ... + m_{N-1} > 0` and `M < 0`.
pub fn is_compressor(masses: &MassVector) -> bool {
    let n = masses.len();
    if n < 3 {
        return false;
    }
    let m = masses.as_slice();
    m[0] > 0.0
        && m[1..].iter().all(|&x| x < 0.0)
        && masses.derived_sign(masses.partial_sum(1, n - 1)) > 0
        && masses.total_sign() < 0
}

/// Classifies a mass system. Tags are tried in the order: zero total mass,
/// all same sign, one mass with the sign of `M`, graviton, compressor.
pub fn classify(masses: &MassVector) -> SystemClass {
    let plain = |tag| SystemClass {
        tag,
        sign_flipped: false,
        gas_neg: gas_neg(masses),
        cone: cone_condition(masses),
    };
    let m = masses.as_slice();
    if masses.total_sign() == 0 {
        return plain(ClassTag::TotalMassZero);
    }
    if m.iter().all(|&x| x > 0.0) || m.iter().all(|&x| x < 0.0) {
        return plain(ClassTag::AllSameSign);
    }
    if is_definite_on_p0(masses) {
        return plain(ClassTag::OneMassWithSignOfM);
    }

    // Negating all masses leaves the collision coefficients unchanged, so a
    // pattern matched on -m describes the same dynamics.
    let flipped = masses
        .scaled(-1.0)
        .expect("negation preserves nonzero masses");
    let oriented = |tag, sign_flipped: bool| {
        let mv = if sign_flipped { &flipped } else { masses };
        SystemClass {
            tag,
            sign_flipped,
            gas_neg: gas_neg(mv),
            cone: cone_condition(mv),
        }
    };
    if is_graviton(masses) {
        oriented(ClassTag::Graviton, false)
    } else if is_graviton(&flipped) {
        oriented(ClassTag::Graviton, true)
    } else if is_compressor(masses) {
        oriented(ClassTag::Compressor, false)
    } else if is_compressor(&flipped) {
        oriented(ClassTag::Compressor, true)
    } else {
        plain(ClassTag::IndefiniteOther)
    }
}

/// Checks the reversed Cauchy-Schwarz inequality `B(x, y)^2 >= Q(x) Q(y)`,
/// which holds whenever `B` is indefinite on `span{x, y}`.
pub fn reversed_cs_holds(masses: &MassVector, x: &[f64], y: &[f64]) -> Result<bool> {
    let bxy = bilinear(masses, x, y)?;
    let qx = quadratic(masses, x)?;
    let qy = quadratic(masses, y)?;
    let lhs = bxy * bxy;
    let rhs = qx * qy;
    Ok(lhs - rhs >= -1e-12 * (lhs.abs() + rhs.abs()))
}
