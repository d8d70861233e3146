//! The direct scattering map to action-angle variables, linear time
//! evolution on angles, and canonicalization back to a rigged-configuration
//! representative.
//!
//! For a state with distinct soliton amplitudes, `Phi(p) = J + d h_1 mod
//! Gamma` where `p = T_1^d(p_+)` and `J` rigs `p_+`. Under `Phi`, every
//! `T_l` becomes the straight motion `I -> I + h_l` on `Z^g / Gamma`.

use num_traits::ToPrimitive;

use crate::crystal::State;
use crate::error::{Error, Result};
use crate::kkr::{decompose_to_highest, kkr_forward, RiggedConfiguration};
use crate::theta::{BetheMatrix, Evolution};

/// Action-angle data `(mu, I)`: the conserved soliton content together with
/// an integer representative of the angle in `Z^g / Gamma`.
///
/// Equality of physical data is equality mod `Gamma`; compare with
/// [`angle_equal_mod_gamma`], not `==`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionAngle {
    parts: Vec<u32>,
    system_size: usize,
    angle: Vec<i128>,
}

impl ActionAngle {
    /// Requires distinct parts and `L >= 2 sum(mu)`.
    pub fn new(parts: Vec<u32>, system_size: usize, angle: Vec<i128>) -> Result<Self> {
        if parts.len() != angle.len() {
            return Err(Error::DimensionMismatch { expected: parts.len(), got: angle.len() });
        }
        // Validates distinctness, positivity, and the size bound.
        let matrix = BetheMatrix::new(&parts, system_size)?;
        Ok(ActionAngle { parts: matrix.parts().to_vec(), system_size, angle })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn system_size(&self) -> usize {
        self.system_size
    }

    /// The stored representative `I`.
    pub fn angle(&self) -> &[i128] {
        &self.angle
    }

    pub fn num_solitons(&self) -> usize {
        self.parts.len()
    }

    pub fn matrix(&self) -> BetheMatrix {
        BetheMatrix::new(&self.parts, self.system_size).expect("validated at construction")
    }
}

/// The direct scattering map `Phi`.
///
/// Decomposes `p = T_1^d(p_+)`, rigs `p_+`, and returns `I = J + d h_1`.
/// The choice of `d` is immaterial mod `Gamma`.
pub fn direct_scattering(state: &State) -> Result<ActionAngle> {
    let (d, highest) = decompose_to_highest(state)?;
    let rc = kkr_forward(&highest)?;
    if !rc.has_distinct_parts() {
        let repeated = rc
            .parts()
            .windows(2)
            .find(|w| w[0] == w[1])
            .map(|w| w[0])
            .unwrap_or_default();
        return Err(Error::RepeatedParts { part: repeated });
    }
    let angle = rc.riggings().iter().map(|&j| i128::from(j) + d as i128).collect();
    ActionAngle::new(rc.parts().to_vec(), state.len(), angle)
}

/// `T_l^t` on angle variables: `I + t h_l`, componentwise.
pub fn evolve_angle(a: &ActionAngle, l: Evolution, t: i64) -> ActionAngle {
    let h = crate::theta::h_vector(&a.parts, l);
    let angle = a
        .angle
        .iter()
        .zip(&h)
        .map(|(&i, &hi)| i + i128::from(t) * i128::from(hi))
        .collect();
    ActionAngle { parts: a.parts.clone(), system_size: a.system_size, angle }
}

/// Whether two representatives are the same point of `Z^g / Gamma`, by an
/// exact rational solve.
pub fn angle_equal_mod_gamma(a: &ActionAngle, b: &ActionAngle) -> Result<bool> {
    if a.parts != b.parts || a.system_size != b.system_size {
        return Err(Error::Incompatible(format!(
            "(mu = {:?}, L = {}) vs (mu = {:?}, L = {})",
            a.parts, a.system_size, b.parts, b.system_size
        )));
    }
    let diff: Vec<i128> = a.angle.iter().zip(&b.angle).map(|(&x, &y)| x - y).collect();
    Ok(a.matrix().in_lattice(&diff))
}

/// Finds a decomposition `I = J + d h_1 + A n` with `J` a valid rigging,
/// scanning `d = 0, 1, .., L-1` and, per `d`, a box of half-width 2 around
/// `A^{-1}(I - d h_1)`. Returns the first triple found.
///
/// Any valid triple represents the same angle; this is the inverse-route
/// oracle, not the primary inverse (which is the theta formula).
pub fn canonicalize(a: &ActionAngle) -> Result<(usize, RiggedConfiguration, Vec<i128>)> {
    let g = a.num_solitons();
    if g == 0 {
        return Ok((0, RiggedConfiguration::empty(a.system_size), Vec::new()));
    }
    let matrix = a.matrix();
    let vacancies = matrix.vacancies();
    for d in 0..a.system_size {
        let shifted: Vec<i128> = a.angle.iter().map(|&i| i - d as i128).collect();
        let center: Vec<i128> = matrix
            .solve(&shifted)
            .iter()
            .map(|r| r.round().to_integer())
            .collect();
        let mut n = vec![-2i128; g];
        'box_scan: loop {
            let point: Vec<i128> = center.iter().zip(&n).map(|(&c, &o)| c + o).collect();
            let image = matrix.multiply(&point);
            let riggings: Vec<i128> =
                shifted.iter().zip(&image).map(|(&v, &av)| v - av).collect();
            let valid = riggings
                .iter()
                .zip(vacancies)
                .all(|(&j, &p)| j >= 0 && j <= i128::from(p));
            if valid {
                let riggings: Vec<i64> =
                    riggings.iter().map(|&j| j.to_i64().expect("rigging fits i64")).collect();
                let rc =
                    RiggedConfiguration::new(a.system_size, matrix.parts().to_vec(), riggings)?;
                return Ok((d, rc, point));
            }
            let mut i = 0;
            loop {
                n[i] += 1;
                if n[i] <= 2 {
                    break;
                }
                n[i] = -2;
                i += 1;
                if i == g {
                    break 'box_scan;
                }
            }
        }
    }
    Err(Error::RepresentativeNotFound)
}
