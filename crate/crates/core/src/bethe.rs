//! The q = 0 Bethe layer: string centers, eigenvalues, and joint
//! eigenvectors of the commuting evolutions in `(C^2)^{(x) L}`.
//!
//! The string center equation `A u = -p/2 (mod Z^g)` pins the Bethe root
//! `u` of an angle class `J` through `A u = J - p/2`. The Bethe vector
//!
//! ```text
//! |J> = sum_{I in Z^g/Gamma} exp(-2 pi i I.(u + h_1/2)) p(I)
//! ```
//!
//! is a joint eigenvector: `T_l |J> = exp(2 pi i h_l.(u + h_1/2)) |J>`.
//! Phases are carried as exact rationals mod 1; complex doubles appear only
//! in the 2^L-dimensional linear algebra.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::crystal::{Letter, State};
use crate::error::{Error, Result};
use crate::scattering::ActionAngle;
use crate::tau::state_from_angle;
use crate::theta::{h_vector, BetheMatrix, Evolution};

/// An exact phase, a rational in `[0, 1)` representing `exp(2 pi i .)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(Ratio<i128>);

impl Phase {
    pub fn new(value: Ratio<i128>) -> Self {
        Phase(value - value.floor())
    }

    pub fn zero() -> Self {
        Phase(Ratio::zero())
    }

    /// The representative in `[0, 1)`.
    pub fn as_ratio(self) -> Ratio<i128> {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// `exp(2 pi i phase)` as a complex double.
    pub fn to_complex(self) -> Complex64 {
        let angle = 2.0 * std::f64::consts::PI * self.0.to_f64().unwrap();
        Complex64::new(angle.cos(), angle.sin())
    }

    pub fn scaled(self, factor: i128) -> Self {
        Phase::new(self.0 * Ratio::from_integer(factor))
    }

    pub fn plus(self, other: Phase) -> Self {
        Phase::new(self.0 + other.0)
    }

    pub fn negated(self) -> Self {
        Phase::new(-self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The Bethe root: string centers in `(R/Z)^g`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetheRoot {
    centers: Vec<Ratio<i128>>,
}

impl BetheRoot {
    /// Centers as rationals in `[0, 1)`.
    pub fn centers(&self) -> &[Ratio<i128>] {
        &self.centers
    }
}

fn mod_one(r: Ratio<i128>) -> Ratio<i128> {
    r - r.floor()
}

/// Solves `A u = J - p/2` exactly and reduces mod 1. `J` is any integer
/// vector; its class mod `Gamma` is what matters.
pub fn bethe_root(parts: &[u32], system_size: usize, riggings: &[i64]) -> Result<BetheRoot> {
    let matrix = BetheMatrix::new(parts, system_size)?;
    if riggings.len() != matrix.dim() {
        return Err(Error::DimensionMismatch { expected: matrix.dim(), got: riggings.len() });
    }
    Ok(BetheRoot { centers: exact_root(&matrix, riggings) })
}

/// `A^{-1}(J - p/2) mod 1` for a matrix already in hand.
fn exact_root(matrix: &BetheMatrix, riggings: &[i64]) -> Vec<Ratio<i128>> {
    // 2(J - p/2) = 2J - p is integral; solve then halve.
    let doubled: Vec<i128> = riggings
        .iter()
        .zip(matrix.vacancies())
        .map(|(&j, &p)| 2 * i128::from(j) - i128::from(p))
        .collect();
    matrix
        .solve(&doubled)
        .into_iter()
        .map(|r| mod_one(r / Ratio::from_integer(2)))
        .collect()
}

/// The exact eigenvalue phase of `T_l` on `|J>`:
/// `Lambda_l(J) = exp(2 pi i h_l . (u + h_1/2))`.
pub fn bethe_eigenvalue(
    parts: &[u32],
    system_size: usize,
    riggings: &[i64],
    l: Evolution,
) -> Result<Phase> {
    let root = bethe_root(parts, system_size, riggings)?;
    let h = h_vector(parts, l);
    let half = Ratio::new(1, 2);
    let total = root
        .centers()
        .iter()
        .zip(&h)
        .map(|(&u, &hl)| Ratio::from_integer(i128::from(hl)) * (u + half))
        .sum::<Ratio<i128>>();
    Ok(Phase::new(total))
}

/// A full set of representatives of `Z^g / Gamma`, `det A` of them.
///
/// Enumerated by brute force over the box `prod [0, c A_ii)` with mod-Gamma
/// deduplication, widening `c` until every coset is seen. Deterministic:
/// sorted lexicographically.
pub fn coset_representatives(matrix: &BetheMatrix) -> Vec<Vec<i128>> {
    let g = matrix.dim();
    let target = matrix.det();
    if g == 0 {
        return vec![Vec::new()];
    }
    for widen in 1..=8i128 {
        let mut seen: HashSet<Vec<i128>> = HashSet::new();
        let mut reps: Vec<Vec<i128>> = Vec::new();
        let hi: Vec<i128> = (0..g).map(|i| widen * matrix.entry(i, i)).collect();
        let mut n = vec![0i128; g];
        'scan: loop {
            if seen.insert(matrix.coset_key(&n)) {
                reps.push(n.clone());
            }
            let mut i = 0;
            loop {
                n[i] += 1;
                if n[i] < hi[i] {
                    break;
                }
                n[i] = 0;
                i += 1;
                if i == g {
                    break 'scan;
                }
            }
        }
        if reps.len() as i128 == target {
            reps.sort_unstable();
            return reps;
        }
    }
    unreachable!("coset enumeration failed to converge; det A = {target}")
}

/// Largest `L` for which `2^L`-dimensional vectors are materialized.
pub const MONOMIAL_CAP: usize = 20;

/// A vector in `(C^2)^{(x) L}` indexed by words over {1, 2}; the leftmost
/// tensor factor is the most significant bit, letter 2 is bit 1.
#[derive(Debug, Clone)]
pub struct BetheVector {
    system_size: usize,
    amplitudes: Vec<Complex64>,
}

impl BetheVector {
    fn zeros(system_size: usize) -> Result<Self> {
        if system_size > MONOMIAL_CAP {
            return Err(Error::CapExceeded { system_size, cap: MONOMIAL_CAP });
        }
        Ok(BetheVector { system_size, amplitudes: vec![Complex64::ZERO; 1 << system_size] })
    }

    pub fn system_size(&self) -> usize {
        self.system_size
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn nonzero_count(&self) -> usize {
        self.amplitudes.iter().filter(|a| a.norm_sqr() > 1e-20).count()
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &BetheVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// The basis index of a monomial state.
pub fn monomial_index(state: &State) -> usize {
    state
        .letters()
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(b.is_ball()))
}

fn state_from_index(index: usize, system_size: usize) -> State {
    let letters = (0..system_size)
        .map(|k| {
            if index >> (system_size - 1 - k) & 1 == 1 {
                Letter::Ball
            } else {
                Letter::Empty
            }
        })
        .collect();
    State::new(letters).expect("decoded index came from a valid state")
}

/// The coefficient phase of `p(I)` in `|J>`: `-I . (u + h_1/2)` mod 1.
fn coefficient_phase(angle: &[i128], root: &[Ratio<i128>]) -> Phase {
    let half = Ratio::new(1, 2);
    let total = angle
        .iter()
        .zip(root)
        .map(|(&i, &u)| Ratio::from_integer(i) * (u + half))
        .sum::<Ratio<i128>>();
    Phase::new(-total)
}

/// The q = 0 Bethe vector `|J>`: one unit-modulus coefficient per angle
/// class, `det A` nonzero amplitudes in total.
pub fn bethe_vector(parts: &[u32], system_size: usize, riggings: &[i64]) -> Result<BetheVector> {
    let matrix = BetheMatrix::new(parts, system_size)?;
    if riggings.len() != matrix.dim() {
        return Err(Error::DimensionMismatch { expected: matrix.dim(), got: riggings.len() });
    }
    let mut vector = BetheVector::zeros(system_size)?;
    let root = exact_root(&matrix, riggings);
    for rep in coset_representatives(&matrix) {
        let angle = ActionAngle::new(parts.to_vec(), system_size, rep.clone())?;
        let index = monomial_index(&state_from_angle(&angle)?);
        debug_assert!(vector.amplitudes[index].is_zero(), "angle classes map to distinct states");
        vector.amplitudes[index] = coefficient_phase(&rep, &root).to_complex();
    }
    Ok(vector)
}

/// `T_l` extended linearly over the monomial basis.
pub fn apply_evolution_linear(vector: &BetheVector, capacity: u32) -> Result<BetheVector> {
    let mut out = BetheVector::zeros(vector.system_size)?;
    for (index, &amp) in vector.amplitudes.iter().enumerate() {
        if amp.is_zero() {
            continue;
        }
        let state = state_from_index(index, vector.system_size);
        let evolved = state.time_evolution(capacity)?;
        out.amplitudes[monomial_index(&evolved)] += amp;
    }
    Ok(out)
}

/// The eigen-relation residual `|| T_l |J> - Lambda_l(J) |J> || / || |J> ||`.
pub fn verify_eigenrelation(
    parts: &[u32],
    system_size: usize,
    riggings: &[i64],
    l: Evolution,
) -> Result<f64> {
    let vector = bethe_vector(parts, system_size, riggings)?;
    let capacity = match l {
        Evolution::Finite(cap) => cap,
        // h_l saturates at the largest amplitude, and so does T_l.
        Evolution::Infinite => parts.iter().copied().max().unwrap_or(1),
    };
    let evolved = apply_evolution_linear(&vector, capacity)?;
    let lambda = bethe_eigenvalue(parts, system_size, riggings, l)?.to_complex();
    let mut residual = 0.0f64;
    for (w, v) in evolved.amplitudes.iter().zip(&vector.amplitudes) {
        residual += (w - lambda * v).norm_sqr();
    }
    Ok(residual.sqrt() / vector.norm())
}

/// The transition matrix between angle classes and Bethe classes:
/// entry `[J][I]` is the coefficient `c_{I,J}` of the monomial of class `I`
/// in `|J>`, both indices running over [`coset_representatives`] order.
///
/// Up to normalization this is a character table of `Z^g / Gamma`, so it
/// has full rank `det A`; the verify suite checks that rank numerically.
pub fn transition_matrix(parts: &[u32], system_size: usize) -> Result<Vec<Vec<Complex64>>> {
    let matrix = BetheMatrix::new(parts, system_size)?;
    let classes = coset_representatives(&matrix);
    let mut rows = Vec::with_capacity(classes.len());
    for class_j in &classes {
        let riggings: Vec<i64> =
            class_j.iter().map(|&j| j.to_i64().expect("class rep fits i64")).collect();
        let root = exact_root(&matrix, &riggings);
        rows.push(
            classes
                .iter()
                .map(|class_i| coefficient_phase(class_i, &root).to_complex())
                .collect(),
        );
    }
    Ok(rows)
}

/// The structured verify report for one eigen check:
/// `mu = ..; L = ..; J = ..; l = ..; Lambda = <rational>; residual = ..`.
pub fn eigen_report(
    parts: &[u32],
    system_size: usize,
    riggings: &[i64],
    l: Evolution,
) -> Result<String> {
    let lambda = bethe_eigenvalue(parts, system_size, riggings, l)?;
    let residual = verify_eigenrelation(parts, system_size, riggings, l)?;
    let join = |items: &mut dyn Iterator<Item = String>| {
        items.collect::<Vec<_>>().join(" ")
    };
    Ok(format!(
        "mu = {}; L = {system_size}; J = {}; l = {l}; Lambda = {lambda}; residual = {residual:.3e}",
        join(&mut parts.iter().map(|p| p.to_string())),
        join(&mut riggings.iter().map(|j| j.to_string())),
    ))
}

/// Reconstructs the monomial `p(I)` from the full Bethe basis:
/// `p(I) = (1/det A) sum_J conj(c_{I,J}) |J>`.
pub fn monomial_from_bethe_basis(a: &ActionAngle) -> Result<BetheVector> {
    let matrix = a.matrix();
    let mut out = BetheVector::zeros(a.system_size())?;
    let classes = coset_representatives(&matrix);
    let det = matrix.det() as f64;
    for class in &classes {
        let riggings: Vec<i64> =
            class.iter().map(|&j| j.to_i64().expect("class rep fits i64")).collect();
        let root = exact_root(&matrix, &riggings);
        let coeff = coefficient_phase(a.angle(), &root).to_complex().conj();
        let vector = bethe_vector(a.parts(), a.system_size(), &riggings)?;
        for (o, v) in out.amplitudes.iter_mut().zip(&vector.amplitudes) {
            *o += coeff * v / det;
        }
    }
    Ok(out)
}

/// Checks `|P(mu)| = det A = L p_{i_1} .. p_{i_{g-1}}` by exhausting all
/// ball placements and classifying them by soliton content.
pub fn state_count_check(parts: &[u32], system_size: usize) -> Result<(i128, u64)> {
    let matrix = BetheMatrix::new(parts, system_size)?;
    let det = matrix.det();
    let product = matrix.vacancies()[..matrix.dim().saturating_sub(1)]
        .iter()
        .map(|&p| i128::from(p))
        .product::<i128>()
        * if matrix.dim() == 0 { 1 } else { system_size as i128 };
    debug_assert_eq!(det, product);

    let balls: usize = parts.iter().map(|&i| i as usize).sum();
    let mut count = 0u64;
    for_each_placement(system_size, balls, &mut |positions| {
        let mut letters = vec![Letter::Empty; system_size];
        for &p in positions {
            letters[p] = Letter::Ball;
        }
        let state = State::new(letters).expect("M <= L/2 by vacancy validation");
        let (_, highest) = crate::kkr::decompose_to_highest(&state).expect("cycle lemma");
        let rc = crate::kkr::kkr_forward(&highest).expect("highest by construction");
        if rc.parts() == matrix.parts() {
            count += 1;
        }
    });
    if i128::from(count) == det {
        Ok((det, count))
    } else {
        Err(Error::CountMismatch { det, count })
    }
}

/// Calls `f` once per size-`m` subset of `0..n`, lexicographically.
fn for_each_placement(n: usize, m: usize, f: &mut impl FnMut(&[usize])) {
    if m > n {
        return;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        f(&idx);
        let mut i = m;
        while i > 0 && idx[i - 1] == n - m + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
