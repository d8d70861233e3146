//! The ultradiscrete tau function, the theta-function formula for states,
//! the initial-value-problem solver, and the softened field `u(k, t)`.
//!
//! For the infinite system the tau function is the `{0,1}`-restricted
//! minimum
//!
//! ```text
//! tau_r(k) = -min_{n in {0,1}^g} { sum_i (J_i + r i - k) n_i
//!                                  + sum_{i,j} min(i,j) n_i n_j },
//! ```
//!
//! and box occupancies are its second difference. For the periodic system
//! the same second difference is taken of the ultradiscrete Riemann theta
//! function at the four arguments `I - p/2 - k h_1 (+ h_inf)`; that formula
//! inverts the scattering map in time independent of `t`.

use std::io::Write;

use crate::crystal::{Letter, State};
use crate::error::{Error, Result};
use crate::kkr::RiggedConfiguration;
use crate::scattering::{direct_scattering, evolve_angle, ActionAngle};
use crate::theta::{riemann_theta_soft_log, ud_theta, Evolution, HalfInt, DEFAULT_SOFT_RADIUS};

/// Rigged-configuration data for the tau function. Unlike the periodic
/// angle machinery, equal parts are allowed here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauContext {
    parts: Vec<u32>,
    riggings: Vec<i64>,
    system_size: Option<usize>,
}

impl TauContext {
    /// Riggings for the infinite system; no bound applies to them.
    pub fn new(parts: Vec<u32>, riggings: Vec<i64>) -> Result<Self> {
        if parts.len() != riggings.len() {
            return Err(Error::DimensionMismatch { expected: parts.len(), got: riggings.len() });
        }
        if parts.contains(&0) {
            return Err(Error::ZeroPart);
        }
        let mut rows: Vec<(u32, i64)> = parts.into_iter().zip(riggings).collect();
        rows.sort_unstable();
        Ok(TauContext {
            parts: rows.iter().map(|r| r.0).collect(),
            riggings: rows.iter().map(|r| r.1).collect(),
            system_size: None,
        })
    }

    /// Riggings bounded by the vacancy numbers of a finite system.
    pub fn with_system_size(parts: Vec<u32>, riggings: Vec<i64>, system_size: usize) -> Result<Self> {
        let rc = RiggedConfiguration::new(system_size, parts, riggings)?;
        Ok(TauContext::from(&rc))
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn riggings(&self) -> &[i64] {
        &self.riggings
    }

    pub fn system_size(&self) -> Option<usize> {
        self.system_size
    }
}

impl From<&RiggedConfiguration> for TauContext {
    fn from(rc: &RiggedConfiguration) -> Self {
        TauContext {
            parts: rc.parts().to_vec(),
            riggings: rc.riggings().to_vec(),
            system_size: Some(rc.system_size()),
        }
    }
}

/// The ultradiscrete tau function of the infinite system, by enumeration of
/// all `2^g` binary vectors. Always `>= 0`.
pub fn ud_tau_infinite(ctx: &TauContext, offset: u8, box_index: i64) -> i64 {
    debug_assert!(offset <= 1);
    let g = ctx.parts.len();
    assert!(g < 30, "binary enumeration over 2^{g} vectors is not sensible");
    let mut best = 0i64;
    for mask in 0u32..(1 << g) {
        let mut value = 0i64;
        for i in 0..g {
            if mask >> i & 1 == 0 {
                continue;
            }
            value += ctx.riggings[i] + i64::from(offset) * i64::from(ctx.parts[i]) - box_index;
            for j in 0..g {
                if mask >> j & 1 == 1 {
                    value += i64::from(ctx.parts[i].min(ctx.parts[j]));
                }
            }
        }
        best = best.min(value);
    }
    -best
}

/// The image of the KKR bijection through the tau function: box `k` holds
/// `y(k) = tau_0(k) - tau_0(k-1) - tau_1(k) + tau_1(k-1)` balls.
///
/// Agrees with the inverse KKR scan on every valid configuration, including
/// repeated parts.
pub fn kkr_via_tau(ctx: &TauContext) -> Result<State> {
    let system_size = ctx.system_size.ok_or(Error::MissingSystemSize)?;
    let mut letters = Vec::with_capacity(system_size);
    let mut prev = (ud_tau_infinite(ctx, 0, 0), ud_tau_infinite(ctx, 1, 0));
    for k in 1..=system_size as i64 {
        let cur = (ud_tau_infinite(ctx, 0, k), ud_tau_infinite(ctx, 1, k));
        let y = cur.0 - prev.0 - cur.1 + prev.1;
        match y {
            0 => letters.push(Letter::Empty),
            1 => letters.push(Letter::Ball),
            other => {
                return Err(Error::NonBinaryOccupancy {
                    position: k,
                    numerator: 2 * i128::from(other),
                })
            }
        }
        prev = cur;
    }
    State::new(letters)
}

/// The theta-function state formula: box `k` of the state with action-angle
/// data `(mu, I)` holds
///
/// ```text
/// x(k) = Theta(z_k) - Theta(z_{k-1}) - Theta(z_k + h_inf) + Theta(z_{k-1} + h_inf)
/// ```
///
/// with `z_k = I - p/2 - k h_1`. Invariant under `k -> k + L` and
/// `I -> I + A v`.
pub fn state_from_angle(a: &ActionAngle) -> Result<State> {
    let system_size = a.system_size();
    if a.num_solitons() == 0 {
        return Ok(State::vacuum(system_size));
    }
    let matrix = a.matrix();
    // Adjacent boxes share arguments: 2(L + 1) evaluations, not 4L.
    let mut theta = [Vec::new(), Vec::new()];
    for (offset, column) in theta.iter_mut().enumerate() {
        column.reserve(system_size + 1);
        for k in 0..=system_size as i64 {
            let z = matrix.theta_argument(a.angle(), k, offset as u8);
            column.push(ud_theta(&matrix, &z));
        }
    }
    let mut letters = Vec::with_capacity(system_size);
    for k in 1..=system_size {
        let x: HalfInt =
            theta[0][k] - theta[0][k - 1] - theta[1][k] + theta[1][k - 1];
        match x.as_int() {
            Some(0) => letters.push(Letter::Empty),
            Some(1) => letters.push(Letter::Ball),
            _ => {
                return Err(Error::NonBinaryOccupancy {
                    position: k as i64,
                    numerator: x.doubled(),
                })
            }
        }
    }
    State::new(letters)
}

/// Solves the initial value problem: applies the whole evolution schedule
/// as one angle shift and reconstructs the state through the theta formula.
/// The work is independent of the times `t`.
pub fn solve_ivp(state: &State, schedule: &[(Evolution, i64)]) -> Result<State> {
    let mut angle = direct_scattering(state)?;
    for &(l, t) in schedule {
        angle = evolve_angle(&angle, l, t);
    }
    state_from_angle(&angle)
}

/// `log u(k, t)`: the four-fold log-ratio of classical theta values at
/// `T_inf^t(I)`, stable for arbitrarily large exponents.
pub fn soften_u_log(a: &ActionAngle, box_index: i64, t: i64, eps: f64) -> Result<f64> {
    let matrix = a.matrix();
    let evolved = evolve_angle(a, Evolution::Infinite, t);
    let arg = |k: i64, r: u8| matrix.theta_argument(evolved.angle(), k, r).to_f64();
    let ln = |k: i64, r: u8| riemann_theta_soft_log(&matrix, &arg(k, r), eps, DEFAULT_SOFT_RADIUS);
    Ok(ln(box_index, 0)? + ln(box_index - 1, 1)? - ln(box_index - 1, 0)? - ln(box_index, 1)?)
}

/// The softened field `u(k, t)` itself; strictly positive and periodic in
/// `k` with period `L`.
pub fn soften_u(a: &ActionAngle, box_index: i64, t: i64, eps: f64) -> Result<f64> {
    soften_u_log(a, box_index, t, eps).map(f64::exp)
}

/// Writes the `u(k, t)` grid for `1 <= k <= L`, `0 <= t <= t_max` as CSV
/// with header `k,t,u`, k-major, full-precision decimals.
pub fn write_soften_csv<W: Write>(
    a: &ActionAngle,
    eps: f64,
    t_max: i64,
    mut out: W,
) -> Result<()> {
    writeln!(out, "k,t,u")?;
    for k in 1..=a.system_size() as i64 {
        for t in 0..=t_max {
            let u = soften_u(a, k, t, eps)?;
            writeln!(out, "{k},{t},{u}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kkr::kkr_inverse;

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    #[test]
    fn tau_small_examples() {
        let empty = TauContext::new(vec![], vec![]).unwrap();
        for r in 0..=1u8 {
            for k in -3..=3 {
                assert_eq!(ud_tau_infinite(&empty, r, k), 0);
            }
        }

        let one = TauContext::new(vec![1], vec![0]).unwrap();
        assert_eq!(ud_tau_infinite(&one, 0, 0), 0);
        assert_eq!(ud_tau_infinite(&one, 0, 1), 0);
        assert_eq!(ud_tau_infinite(&one, 0, 2), 1);
        for k in 0..=2 {
            assert_eq!(ud_tau_infinite(&one, 1, k), 0);
        }

        let ex = TauContext::new(vec![1, 2, 3], vec![0, 4, 1]).unwrap();
        assert_eq!(ud_tau_infinite(&ex, 0, 0), 0);
    }

    #[test]
    fn tau_formula_reproduces_kkr() {
        let ctx = TauContext::with_system_size(vec![1], vec![0], 2).unwrap();
        assert_eq!(kkr_via_tau(&ctx).unwrap().to_string(), "12");

        let ctx = TauContext::with_system_size(vec![1, 2, 3], vec![8, 4, 1], 14).unwrap();
        assert_eq!(kkr_via_tau(&ctx).unwrap().to_string(), "11112221112212");

        let empty = TauContext::with_system_size(vec![], vec![], 3).unwrap();
        assert_eq!(kkr_via_tau(&empty).unwrap().to_string(), "111");
    }

    #[test]
    fn tau_formula_handles_repeated_parts() {
        let rc = RiggedConfiguration::new(12, vec![2, 2], vec![1, 3]).unwrap();
        let via_tau = kkr_via_tau(&TauContext::from(&rc)).unwrap();
        assert_eq!(via_tau, kkr_inverse(&rc).unwrap());
    }

    #[test]
    fn state_formula_worked_example() {
        let a = ActionAngle::new(vec![1, 2, 3], 14, vec![1002, 2006, 2003]).unwrap();
        assert_eq!(state_from_angle(&a).unwrap().to_string(), "11112221112212");
    }

    #[test]
    fn state_formula_shift_covariance() {
        let a = ActionAngle::new(vec![1, 2, 3], 14, vec![2, 6, 3]).unwrap();
        let base = state_from_angle(&a).unwrap();
        let shifted = state_from_angle(&evolve_angle(&a, Evolution::Finite(1), 1)).unwrap();
        assert_eq!(shifted, base.cyclic_shift(1));
    }

    #[test]
    fn solve_ivp_examples() {
        let p = st("22121111222111");
        assert_eq!(
            solve_ivp(&p, &[(Evolution::Finite(2), 1000)]).unwrap().to_string(),
            "11112221112212"
        );
        assert_eq!(
            solve_ivp(&p, &[(Evolution::Finite(3), 1000)]).unwrap().to_string(),
            "12211122111122"
        );
        assert_eq!(solve_ivp(&p, &[]).unwrap(), p);
    }

    #[test]
    fn solve_matches_direct_iteration() {
        let p = st("11212211112221");
        for l in 1..=4u32 {
            for t in 0..=3u64 {
                let fast = solve_ivp(&p, &[(Evolution::Finite(l), t as i64)]).unwrap();
                let slow = p.evolve(l, t).unwrap();
                assert_eq!(fast, slow, "l = {l}, t = {t}");
            }
        }
    }

    #[test]
    fn soften_is_positive_and_periodic() {
        let a = ActionAngle::new(vec![1, 2], 12, vec![3, 5]).unwrap();
        for k in 1..=12 {
            let u = soften_u(&a, k, 1, 2.0).unwrap();
            assert!(u.is_finite() && u > 0.0);
            let wrapped = soften_u(&a, k + 12, 1, 2.0).unwrap();
            assert!((u - wrapped).abs() <= 1e-9 * u.abs().max(1.0));
        }
    }

    #[test]
    fn csv_grid_shape() {
        let a = ActionAngle::new(vec![1], 4, vec![0]).unwrap();
        let mut buf = Vec::new();
        write_soften_csv(&a, 1.5, 2, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,t,u");
        assert_eq!(lines.len(), 1 + 4 * 3);
        assert!(lines[1].starts_with("1,0,"));
        assert!(lines[2].starts_with("1,1,"));
        assert!(lines[4].starts_with("2,0,"));
    }
}
