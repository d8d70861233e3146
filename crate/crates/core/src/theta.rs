//! The Bethe matrix `A`, its lattice `Gamma = A Z^g`, and the ultradiscrete
//! Riemann theta function
//!
//! ```text
//! Theta(z) = -min_{n in Z^g} { n^T A n / 2 + n^T z },
//! ```
//!
//! evaluated exactly by integer enumeration.
//!
//! All ultradiscrete values live on the half-integer lattice and are stored
//! as doubled integers ([`HalfInt`]); comparisons never touch floating
//! point. The minimization is solved by centering a box at the real
//! minimizer `x* = -A^{-1} z`: with the rounded center as incumbent, every
//! integer point not worse than the incumbent satisfies
//!
//! ```text
//! (n_i - x*_i)^2  <=  (A^{-1})_{ii} (n - x*)^T A (n - x*),
//! ```
//!
//! which after clearing denominators by `2 det A` becomes a per-coordinate
//! integer interval. The box is enumerated exhaustively. Centering is what
//! keeps the enumeration small for arbitrarily large `||z||`; boxes around
//! the origin would be wrong there.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Roots;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::kkr::vacancy_numbers;

/// Index of a time evolution `T_l`; `Infinite` is `T_inf`, whose velocity
/// `h_inf` equals `h_{i_g}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Evolution {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Evolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evolution::Finite(l) => write!(f, "{l}"),
            Evolution::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Evolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Evolution::Infinite),
            other => other
                .parse::<u32>()
                .ok()
                .filter(|&l| l >= 1)
                .map(Evolution::Finite)
                .ok_or_else(|| Error::Parse {
                    position: 0,
                    message: format!("expected a positive integer or `inf`, got {other:?}"),
                }),
        }
    }
}

/// The velocity vector `h_l = (min(i, l))_{i in mu}`.
pub fn h_vector(parts: &[u32], l: Evolution) -> Vec<i64> {
    parts
        .iter()
        .map(|&i| match l {
            Evolution::Finite(cap) => i64::from(i.min(cap)),
            Evolution::Infinite => i64::from(i),
        })
        .collect()
}

/// A value in `(1/2) Z`, stored as its double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i128);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_int(v: i128) -> Self {
        HalfInt(2 * v)
    }

    /// Builds from the doubled value, i.e. `from_doubled(3)` is `3/2`.
    pub fn from_doubled(doubled: i128) -> Self {
        HalfInt(doubled)
    }

    pub fn doubled(self) -> i128 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn as_int(self) -> Option<i128> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A vector with entries in `(1/2) Z`, stored doubled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfIntVector {
    doubled: Vec<i128>,
}

impl HalfIntVector {
    pub fn from_doubled(doubled: Vec<i128>) -> Self {
        HalfIntVector { doubled }
    }

    pub fn from_ints(v: &[i128]) -> Self {
        HalfIntVector { doubled: v.iter().map(|&x| 2 * x).collect() }
    }

    pub fn zeros(dim: usize) -> Self {
        HalfIntVector { doubled: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.doubled.len()
    }

    /// The doubled entries `2 z`.
    pub fn doubled(&self) -> &[i128] {
        &self.doubled
    }

    pub fn component(&self, i: usize) -> HalfInt {
        HalfInt(self.doubled[i])
    }

    /// `z + v` for an integer vector `v`.
    pub fn add_int(&self, v: &[i128]) -> Self {
        HalfIntVector {
            doubled: self.doubled.iter().zip(v).map(|(&z, &x)| z + 2 * x).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.doubled.iter().map(|&d| d as f64 / 2.0).collect()
    }
}

fn det_of(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter_map(|(c, &v)| (c != j).then_some(v))
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_of(&minor)
            })
            .sum(),
    }
}

/// The symmetric positive-definite matrix `A_{ij} = delta_{ij} p_i +
/// 2 min(i, j)` over the strictly increasing soliton content `mu`, together
/// with its vacancy vector, determinant, and adjugate.
///
/// Satisfies `A h_1 = L h_1` and `det A = L p_{i_1} ... p_{i_{g-1}}`; both
/// identities are asserted at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetheMatrix {
    parts: Vec<u32>,
    system_size: usize,
    entries: Vec<Vec<i128>>,
    vacancies: Vec<i64>,
    det: i128,
    adjugate: Vec<Vec<i128>>,
}

impl BetheMatrix {
    pub fn new(parts: &[u32], system_size: usize) -> Result<Self> {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable();
        if sorted.contains(&0) {
            return Err(Error::ZeroPart);
        }
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedParts { part: w[0] });
        }
        let vacancies = vacancy_numbers(&sorted, system_size)?;
        let g = sorted.len();
        let entries: Vec<Vec<i128>> = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| {
                        let diag = if i == j { i128::from(vacancies[i]) } else { 0 };
                        diag + 2 * i128::from(sorted[i].min(sorted[j]))
                    })
                    .collect()
            })
            .collect();
        // Sylvester: positive definite iff every leading principal minor is
        // positive, in exact arithmetic.
        for order in 1..=g {
            let leading: Vec<Vec<i128>> =
                entries[..order].iter().map(|row| row[..order].to_vec()).collect();
            let minor = det_of(&leading);
            if minor <= 0 {
                return Err(Error::NotPositiveDefinite { order, minor });
            }
        }
        let det = det_of(&entries);
        let adjugate: Vec<Vec<i128>> = (0..g)
            .map(|i| {
                (0..g)
                    .map(|j| {
                        let minor: Vec<Vec<i128>> = entries
                            .iter()
                            .enumerate()
                            .filter(|(r, _)| *r != j)
                            .map(|(_, row)| {
                                row.iter()
                                    .enumerate()
                                    .filter_map(|(c, &v)| (c != i).then_some(v))
                                    .collect()
                            })
                            .collect();
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        sign * det_of(&minor)
                    })
                    .collect()
            })
            .collect();
        let matrix = BetheMatrix { parts: sorted, system_size, entries, vacancies, det, adjugate };
        debug_assert_eq!(
            matrix.multiply(&vec![1; g]),
            vec![system_size as i128; g],
            "A h_1 = L h_1"
        );
        debug_assert_eq!(
            matrix.det,
            (0..g.saturating_sub(1))
                .map(|s| i128::from(matrix.vacancies[s]))
                .product::<i128>()
                * if g == 0 { 1 } else { system_size as i128 },
            "det A = L * p_1 .. p_(g-1)"
        );
        Ok(matrix)
    }

    /// `g`, the matrix dimension.
    pub fn dim(&self) -> usize {
        self.parts.len()
    }

    /// The strictly increasing soliton content.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn system_size(&self) -> usize {
        self.system_size
    }

    pub fn vacancies(&self) -> &[i64] {
        &self.vacancies
    }

    pub fn entry(&self, i: usize, j: usize) -> i128 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i128>] {
        &self.entries
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    pub fn h_vector(&self, l: Evolution) -> Vec<i64> {
        h_vector(&self.parts, l)
    }

    /// `A v`.
    pub fn multiply(&self, v: &[i128]) -> Vec<i128> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, &x)| a * x).sum())
            .collect()
    }

    /// `adj(A) v`, so that `A^{-1} v = adj(A) v / det A`.
    pub fn adjugate_multiply(&self, v: &[i128]) -> Vec<i128> {
        self.adjugate
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, &x)| a * x).sum())
            .collect()
    }

    /// Exact `A^{-1} v`.
    pub fn solve(&self, v: &[i128]) -> Vec<Ratio<i128>> {
        self.adjugate_multiply(v)
            .into_iter()
            .map(|num| Ratio::new(num, self.det))
            .collect()
    }

    /// Whether `v` lies in the lattice `Gamma = A Z^g`.
    pub fn in_lattice(&self, v: &[i128]) -> bool {
        self.adjugate_multiply(v).iter().all(|&x| x % self.det == 0)
    }

    /// A label constant on cosets of `Gamma` and injective across them:
    /// `adj(A) v mod det A`, componentwise into `[0, det A)`.
    pub fn coset_key(&self, v: &[i128]) -> Vec<i128> {
        self.adjugate_multiply(v)
            .into_iter()
            .map(|x| x.rem_euclid(self.det))
            .collect()
    }

    /// The theta argument `I - p/2 - k h_1 + r h_inf` of the state formula.
    pub fn theta_argument(&self, angle: &[i128], box_index: i64, offset: u8) -> HalfIntVector {
        debug_assert!(offset <= 1);
        let doubled = self
            .parts
            .iter()
            .zip(&self.vacancies)
            .zip(angle)
            .map(|((&part, &vac), &i)| {
                2 * i - i128::from(vac) - 2 * i128::from(box_index)
                    + 2 * i128::from(offset) * i128::from(part)
            })
            .collect();
        HalfIntVector::from_doubled(doubled)
    }
}

fn div_floor(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    -(-a).div_euclid(b)
}

/// The doubled quadratic form `q(n) = n^T A n + n . (2z) = 2 c(n)`.
fn doubled_form(a: &BetheMatrix, n: &[i128], w: &[i128]) -> i128 {
    let mut q = 0i128;
    for (i, row) in a.rows().iter().enumerate() {
        let mut s = 0i128;
        for (j, &aij) in row.iter().enumerate() {
            s += aij * n[j];
        }
        q += n[i] * s;
    }
    q + n.iter().zip(w).map(|(&ni, &wi)| ni * wi).sum::<i128>()
}

/// The ultradiscrete Riemann theta function, exact.
///
/// Always `>= 0` since `n = 0` contributes 0 to the minimum.
pub fn ud_theta(a: &BetheMatrix, z: &HalfIntVector) -> HalfInt {
    assert_eq!(a.dim(), z.dim(), "dimension mismatch");
    let g = a.dim();
    if g == 0 {
        return HalfInt::ZERO;
    }
    let w = z.doubled();
    let det = a.det();
    // 2 det x* = x_scaled, the scaled continuous minimizer.
    let x_scaled: Vec<i128> = a.adjugate_multiply(w).iter().map(|&v| -v).collect();
    let denom = 2 * det;
    let incumbent: Vec<i128> = x_scaled.iter().map(|&x| div_floor(x + det, denom)).collect();
    let bound = doubled_form(a, &incumbent, w);
    // 4 det (q(n0) - q(x*)), nonnegative.
    let gap = (4 * det)
        .checked_mul(bound)
        .and_then(|v| {
            v.checked_sub(w.iter().zip(&x_scaled).map(|(&wi, &xi)| wi * xi).sum::<i128>())
        })
        .expect("theta argument magnitude exceeds the supported range");
    debug_assert!(gap >= 0);

    let mut lo = Vec::with_capacity(g);
    let mut hi = Vec::with_capacity(g);
    for (i, &x) in x_scaled.iter().enumerate() {
        let t = gap
            .checked_mul(a.adjugate[i][i])
            .expect("theta argument magnitude exceeds the supported range");
        let radius = t.sqrt();
        lo.push(div_ceil(x - radius, denom));
        hi.push(div_floor(x + radius, denom));
    }

    let mut best = bound;
    let mut n = lo.clone();
    'outer: loop {
        let q = doubled_form(a, &n, w);
        if q < best {
            best = q;
        }
        let mut i = 0;
        loop {
            n[i] += 1;
            if n[i] <= hi[i] {
                break;
            }
            n[i] = lo[i];
            i += 1;
            if i == g {
                break 'outer;
            }
        }
    }
    HalfInt::from_doubled(-best)
}

/// The quadratic form of the periodic tau function,
/// `c_L(m) = m^T (I - p/2 - k h_1 + r h_inf) + m^T A m / 2`.
pub fn quadratic_form_cl(
    a: &BetheMatrix,
    angle: &[i128],
    box_index: i64,
    offset: u8,
    m: &[i128],
) -> HalfInt {
    assert_eq!(a.dim(), angle.len());
    assert_eq!(a.dim(), m.len());
    let z = a.theta_argument(angle, box_index, offset);
    HalfInt::from_doubled(doubled_form(a, m, z.doubled()))
}

/// Default truncation half-width for the classical theta sums.
pub const DEFAULT_SOFT_RADIUS: u32 = 12;

/// `log` of the truncated classical Riemann theta sum
/// `sum_n exp(-(n^T A n / 2 + n^T z) / eps)`, computed stably in log space.
///
/// The box is centered at the rounded continuous minimizer. Fails with
/// `RadiusTooSmall` when the boundary layer carries more than `1e-12` of the
/// sum, i.e. when the truncation would be visible.
pub fn riemann_theta_soft_log(
    a: &BetheMatrix,
    z: &[f64],
    eps: f64,
    radius: u32,
) -> Result<f64> {
    assert_eq!(a.dim(), z.len(), "dimension mismatch");
    assert!(eps > 0.0, "eps must be positive");
    let g = a.dim();
    if g == 0 {
        return Ok(0.0);
    }
    let det = a.det() as f64;
    let center: Vec<i64> = (0..g)
        .map(|i| {
            let num: f64 =
                (0..g).map(|j| a.adjugate[i][j] as f64 * -z[j]).sum();
            (num / det).round() as i64
        })
        .collect();

    let r = radius as i64;
    let mut exponents = Vec::new();
    let mut on_boundary = Vec::new();
    let mut n = vec![-r; g];
    'outer: loop {
        let point: Vec<f64> = (0..g).map(|i| (center[i] + n[i]) as f64).collect();
        let mut c = 0.0;
        for i in 0..g {
            let mut s = 0.0;
            for (j, &pj) in point.iter().enumerate() {
                s += a.entries[i][j] as f64 * pj;
            }
            c += point[i] * (0.5 * s + z[i]);
        }
        exponents.push(c / eps);
        on_boundary.push(n.iter().any(|&ni| ni.abs() == r));
        let mut i = 0;
        loop {
            n[i] += 1;
            if n[i] <= r {
                break;
            }
            n[i] = -r;
            i += 1;
            if i == g {
                break 'outer;
            }
        }
    }

    let min = exponents.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut total = 0.0;
    let mut boundary = 0.0;
    for (&e, &b) in exponents.iter().zip(&on_boundary) {
        let term = (-(e - min)).exp();
        total += term;
        if b {
            boundary += term;
        }
    }
    let share = boundary / total;
    if share > 1e-12 {
        return Err(Error::RadiusTooSmall { radius, share });
    }
    Ok(-min + total.ln())
}

/// The truncated classical theta sum itself. Strictly positive; overflows to
/// `+inf` when the log value exceeds f64 range, in which case use
/// [`riemann_theta_soft_log`].
pub fn riemann_theta_soft(a: &BetheMatrix, z: &[f64], eps: f64, radius: u32) -> Result<f64> {
    riemann_theta_soft_log(a, z, eps, radius).map(f64::exp)
}
