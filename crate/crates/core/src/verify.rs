//! Named verification suites behind the CLI `verify` subcommand and the
//! acceptance tests: exhaustive small-size sweeps and seeded randomized
//! property checks for every module.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::bethe::{
    bethe_eigenvalue, bethe_vector, monomial_from_bethe_basis, monomial_index,
    state_count_check, verify_eigenrelation,
};
use crate::crystal::{Letter, State};
use crate::error::{Error, Result};
use crate::kkr::{
    concat_rc, decompose_to_highest, kkr_forward, kkr_inverse, vacancy_numbers,
    RiggedConfiguration,
};
use crate::scattering::{
    angle_equal_mod_gamma, canonicalize, direct_scattering, evolve_angle, ActionAngle,
};
use crate::tau::{kkr_via_tau, solve_ivp, state_from_angle, TauContext};
use crate::theta::{
    quadratic_form_cl, riemann_theta_soft, ud_theta, BetheMatrix, Evolution, HalfInt,
    HalfIntVector,
};

/// One named check with its verdict.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &str, detail: String) -> Self {
        CheckOutcome { name: name.into(), passed: true, detail }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckOutcome { name: name.into(), passed: false, detail }
    }

    fn from_count(name: &str, failures: usize, total: usize) -> Self {
        if failures == 0 {
            Self::pass(name, format!("{total} cases"))
        } else {
            Self::fail(name, format!("{failures} of {total} cases failed"))
        }
    }
}

/// Every outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub outcomes: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let verdict = if o.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{verdict}] {}::{} ({})", self.suite, o.name, o.detail);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Crystal,
    Kkr,
    Theta,
    Scattering,
    Tau,
    Bethe,
}

impl Suite {
    pub fn all() -> [Suite; 6] {
        [Suite::Crystal, Suite::Kkr, Suite::Theta, Suite::Scattering, Suite::Tau, Suite::Bethe]
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Crystal => "crystal",
            Suite::Kkr => "kkr",
            Suite::Theta => "theta",
            Suite::Scattering => "scattering",
            Suite::Tau => "tau",
            Suite::Bethe => "bethe",
        }
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crystal" => Ok(Suite::Crystal),
            "kkr" => Ok(Suite::Kkr),
            "theta" => Ok(Suite::Theta),
            "scattering" => Ok(Suite::Scattering),
            "tau" => Ok(Suite::Tau),
            "bethe" => Ok(Suite::Bethe),
            other => Err(Error::Parse {
                position: 0,
                message: format!("unknown suite {other:?}; expected one of crystal, kkr, theta, scattering, tau, bethe, all"),
            }),
        }
    }
}

/// Knobs for the sweeps.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Exhaustive sweeps run up to this system size.
    pub max_system_size: usize,
    /// Seed for the randomized suites.
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_system_size: 12, seed: 0 }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let outcomes = match suite {
        Suite::Crystal => crystal_suite(cfg),
        Suite::Kkr => kkr_suite(cfg),
        Suite::Theta => theta_suite(cfg),
        Suite::Scattering => scattering_suite(cfg),
        Suite::Tau => tau_suite(cfg),
        Suite::Bethe => bethe_suite(cfg),
    };
    SuiteReport { suite, outcomes }
}

// ---------------------------------------------------------------------
// enumeration helpers, reused by the acceptance tests

/// Every valid state of size `l` (i.e. with at most `l/2` balls).
pub fn all_states(l: usize) -> Vec<State> {
    assert!(l <= 24);
    (0u32..1 << l)
        .filter_map(|bits| {
            let letters: Vec<Letter> = (0..l)
                .map(|k| if bits >> k & 1 == 1 { Letter::Ball } else { Letter::Empty })
                .collect();
            State::new(letters).ok()
        })
        .collect()
}

/// Every highest state of size `l`.
pub fn all_highest_states(l: usize) -> Vec<State> {
    all_states(l).into_iter().filter(State::is_highest).collect()
}

/// Every partition (weakly increasing) with `2 * sum <= l`, the empty one
/// included.
pub fn all_configurations(l: usize) -> Vec<Vec<u32>> {
    fn extend(min_part: u32, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for part in min_part..=budget {
            prefix.push(part);
            extend(part, budget - part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(1, (l / 2) as u32, &mut Vec::new(), &mut out);
    out
}

/// The distinct-part configurations among [`all_configurations`].
pub fn distinct_configurations(l: usize) -> Vec<Vec<u32>> {
    all_configurations(l)
        .into_iter()
        .filter(|mu| mu.windows(2).all(|w| w[0] < w[1]))
        .collect()
}

/// Every valid rigged configuration over `mu` at size `l`, riggings
/// canonical within blocks.
pub fn all_rigged_configurations(mu: &[u32], l: usize) -> Vec<RiggedConfiguration> {
    let Ok(vac) = vacancy_numbers(mu, l) else { return Vec::new() };
    fn extend(
        mu: &[u32],
        vac: &[i64],
        idx: usize,
        prefix: &mut Vec<i64>,
        l: usize,
        out: &mut Vec<RiggedConfiguration>,
    ) {
        if idx == mu.len() {
            out.push(
                RiggedConfiguration::new(l, mu.to_vec(), prefix.clone())
                    .expect("riggings within vacancy bounds"),
            );
            return;
        }
        // Within a block of equal parts riggings are weakly increasing, so
        // start from the previous rigging.
        let start = if idx > 0 && mu[idx] == mu[idx - 1] { prefix[idx - 1] } else { 0 };
        for j in start..=vac[idx] {
            prefix.push(j);
            extend(mu, vac, idx + 1, prefix, l, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(mu, &vac, 0, &mut Vec::new(), l, &mut out);
    out
}

fn random_state(rng: &mut StdRng, l: usize) -> State {
    loop {
        let letters: Vec<Letter> = (0..l)
            .map(|_| if rng.random_bool(0.35) { Letter::Ball } else { Letter::Empty })
            .collect();
        if let Ok(state) = State::new(letters) {
            return state;
        }
    }
}

fn random_highest_state(rng: &mut StdRng, l: usize) -> State {
    loop {
        let s = random_state(rng, l);
        if s.is_highest() {
            return s;
        }
    }
}

fn random_rigged_configuration(rng: &mut StdRng, max_l: usize) -> RiggedConfiguration {
    loop {
        let l = rng.random_range(2..=max_l);
        let configs = all_configurations(l);
        let mu = configs[rng.random_range(0..configs.len())].clone();
        if mu.is_empty() {
            continue;
        }
        let vac = vacancy_numbers(&mu, l).expect("2 sum mu <= l by construction");
        let riggings: Vec<i64> = vac.iter().map(|&p| rng.random_range(0..=p)).collect();
        if let Ok(rc) = RiggedConfiguration::new(l, mu, riggings) {
            return rc;
        }
    }
}

// ---------------------------------------------------------------------
// crystal

fn crystal_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 1..=6u32 {
            let mut seen = std::collections::HashSet::new();
            for balls in 0..=l {
                for b in [Letter::Empty, Letter::Ball] {
                    let (b2, c2) = crate::crystal::apply_r(
                        crate::crystal::Carrier::with_balls(l, balls),
                        b,
                    );
                    total += 1;
                    if !seen.insert((b2, c2.balls())) || c2.capacity() != l {
                        failures += 1;
                    }
                }
            }
        }
        CheckOutcome::from_count("r_bijection", failures, total)
    });

    out.push(evolution_tables_check());

    let max_l = cfg.max_system_size.min(8);
    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 1..=max_l {
            for p in all_states(l) {
                for k in 1..=4u32 {
                    for cap in 1..=4u32 {
                        total += 1;
                        let a = p.time_evolution(k).and_then(|q| q.time_evolution(cap));
                        let b = p.time_evolution(cap).and_then(|q| q.time_evolution(k));
                        match (a, b) {
                            (Ok(a), Ok(b)) if a == b => {}
                            _ => failures += 1,
                        }
                    }
                }
            }
        }
        CheckOutcome::from_count("commutativity", failures, total)
    });

    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 1..=max_l {
            for p in all_states(l) {
                total += 1;
                if p.evolve(1, l as u64).map(|q| q != p).unwrap_or(true) {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("t1_order_divides_l", failures, total)
    });

    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 1..=max_l {
            for p in all_states(l) {
                for cap in 1..=4u32 {
                    total += 1;
                    if p.time_evolution(cap).map(|q| q.ball_count() != p.ball_count()).unwrap_or(true)
                    {
                        failures += 1;
                    }
                }
            }
        }
        CheckOutcome::from_count("ball_conservation", failures, total)
    });

    out.push({
        // T_l = T_{i_g} for l at or above the largest soliton amplitude.
        let mut failures = 0;
        let mut total = 0;
        for l in 2..=max_l {
            for p in all_states(l) {
                let Ok((_, highest)) = decompose_to_highest(&p) else { continue };
                let Ok(rc) = kkr_forward(&highest) else { continue };
                let Some(&top) = rc.parts().last() else { continue };
                let reference = p.time_evolution(top).expect("valid state");
                for extra in 1..=3u32 {
                    total += 1;
                    if p.time_evolution(top + extra).map(|q| q != reference).unwrap_or(true) {
                        failures += 1;
                    }
                }
            }
        }
        CheckOutcome::from_count("saturation_above_i_g", failures, total)
    });

    out
}

/// The two 10-row evolution tables of the worked three-soliton example.
pub const EVOLUTION_TABLE_T2: [&str; 10] = [
    "11211122211122",
    "22121111222111",
    "11212211112221",
    "21121122111122",
    "22212111221111",
    "11221221112211",
    "11112122211122",
    "22111211222111",
    "11221121112221",
    "21112212111122",
];

pub const EVOLUTION_TABLE_T3: [&str; 10] = [
    "11211122211122",
    "22121111122211",
    "11212221111122",
    "22121112221111",
    "11212211112221",
    "22121122111112",
    "11212211222111",
    "11121122111222",
    "22212111221111",
    "11121222112211",
];

fn evolution_tables_check() -> CheckOutcome {
    let mut failures = 0;
    for (capacity, table) in [(2u32, &EVOLUTION_TABLE_T2), (3u32, &EVOLUTION_TABLE_T3)] {
        let mut state: State = table[0].parse().expect("table row parses");
        for row in &table[1..] {
            state = state.time_evolution(capacity).expect("well-defined");
            if state.to_string() != *row {
                failures += 1;
            }
        }
    }
    CheckOutcome::from_count("evolution_tables", failures, 18)
}

// ---------------------------------------------------------------------
// kkr

fn kkr_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 1..=cfg.max_system_size {
            for p in all_highest_states(l) {
                total += 1;
                // The parts of mu add up to the ball number.
                let ok = kkr_forward(&p)
                    .and_then(|rc| {
                        let conserves = rc.ball_count() == p.ball_count();
                        kkr_inverse(&rc).map(|q| conserves && q == p)
                    })
                    .unwrap_or(false);
                if !ok {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("roundtrip_from_states", failures, total)
    });

    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 1..=cfg.max_system_size {
            for mu in all_configurations(l) {
                for rc in all_rigged_configurations(&mu, l) {
                    total += 1;
                    let ok = kkr_inverse(&rc)
                        .and_then(|p| kkr_forward(&p))
                        .map(|back| back == rc)
                        .unwrap_or(false);
                    if !ok {
                        failures += 1;
                    }
                }
            }
        }
        CheckOutcome::from_count("roundtrip_from_riggings", failures, total)
    });

    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 1..=cfg.max_system_size {
            for mu in all_configurations(l) {
                total += 1;
                let vac = vacancy_numbers(&mu, l).expect("within budget");
                if vac.windows(2).any(|w| w[0] < w[1]) {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("vacancy_monotonicity", failures, total)
    });

    out.push({
        // mu is conserved by every T_l.
        let mut failures = 0;
        let mut total = 0;
        for l in 2..=cfg.max_system_size.min(10) {
            for p in all_states(l) {
                let Ok((_, h)) = decompose_to_highest(&p) else { continue };
                let mu = kkr_forward(&h).expect("highest").parts().to_vec();
                for cap in 1..=4u32 {
                    total += 1;
                    let evolved = p.time_evolution(cap).expect("valid");
                    let (_, eh) = decompose_to_highest(&evolved).expect("valid");
                    if kkr_forward(&eh).expect("highest").parts() != mu {
                        failures += 1;
                    }
                }
            }
        }
        CheckOutcome::from_count("mu_conserved", failures, total)
    });

    out.push({
        let trials = 1000;
        let mut failures = 0;
        for _ in 0..trials {
            let k = rng.random_range(1..=10);
            let l = rng.random_range(1..=10);
            let q = random_highest_state(&mut rng, k);
            let r = random_highest_state(&mut rng, l);
            let mut letters = q.letters().to_vec();
            letters.extend_from_slice(r.letters());
            let qr = State::new(letters).expect("concatenation of highest is valid");
            let direct = kkr_forward(&qr).expect("concatenation of highest is highest");
            let glued = concat_rc(
                &kkr_forward(&q).expect("highest"),
                &kkr_forward(&r).expect("highest"),
            )
            .expect("shift stays in range");
            if direct != glued {
                failures += 1;
            }
        }
        CheckOutcome::from_count("concat_rule", failures, trials)
    });

    out
}

// ---------------------------------------------------------------------
// theta

fn random_matrix(rng: &mut StdRng, max_g: usize, max_l: usize) -> BetheMatrix {
    loop {
        let g = rng.random_range(1..=max_g);
        let mut parts: Vec<u32> = (0..g).map(|_| rng.random_range(1..=4)).collect();
        parts.sort_unstable();
        parts.dedup();
        let sum: usize = parts.iter().map(|&i| i as usize).sum();
        if 2 * sum > max_l {
            continue;
        }
        let l = rng.random_range(2 * sum..=max_l);
        if let Ok(m) = BetheMatrix::new(&parts, l) {
            return m;
        }
    }
}

fn theta_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    out.push({
        // Quasi-periodicity: Theta(z + Ac) - Theta(z) = c . (z + Ac/2).
        let trials = 10_000;
        let mut failures = 0;
        for _ in 0..trials {
            let m = random_matrix(&mut rng, 3, 20);
            let g = m.dim();
            let z = HalfIntVector::from_doubled(
                (0..g).map(|_| rng.random_range(-100..=100)).collect(),
            );
            let c: Vec<i128> = (0..g).map(|_| rng.random_range(-3..=3)).collect();
            let v = m.multiply(&c);
            let lhs = ud_theta(&m, &z.add_int(&v)) - ud_theta(&m, &z);
            let mut rhs = 0i128; // doubled c . (z + v/2)
            for i in 0..g {
                rhs += c[i] * (z.doubled()[i] + v[i]);
            }
            if lhs.doubled() != rhs {
                failures += 1;
            }
        }
        CheckOutcome::from_count("quasi_periodicity", failures, trials)
    });

    out.push({
        // Exact agreement with brute-force minimization over [-8, 8]^g on
        // instances where that box provably contains the minimizer.
        let trials = 2000;
        let mut failures = 0;
        let mut done = 0;
        while done < trials {
            let m = random_matrix(&mut rng, 3, 20);
            let g = m.dim();
            let z = HalfIntVector::from_doubled(
                (0..g).map(|_| rng.random_range(-80..=80)).collect(),
            );
            // The oracle box is valid only when -A^{-1}z rounds well inside it.
            let center = m.solve(z.doubled());
            let inside = center.iter().all(|r| {
                let approx = r.to_f64().unwrap().abs() / 2.0;
                approx < 5.0
            });
            if !inside {
                continue;
            }
            done += 1;
            let fast = ud_theta(&m, &z).doubled();
            let mut best = 0i128;
            let mut n = vec![-8i128; g];
            'brute: loop {
                let mut q = 0i128;
                for i in 0..g {
                    for j in 0..g {
                        q += n[i] * m.entry(i, j) * n[j];
                    }
                    q += n[i] * z.doubled()[i];
                }
                best = best.min(q);
                let mut i = 0;
                loop {
                    n[i] += 1;
                    if n[i] <= 8 {
                        break;
                    }
                    n[i] = -8;
                    i += 1;
                    if i == g {
                        break 'brute;
                    }
                }
            }
            if fast != -best {
                failures += 1;
            }
        }
        CheckOutcome::from_count("brute_force_oracle", failures, trials)
    });

    out.push({
        let trials = 1000;
        let mut failures = 0;
        for _ in 0..trials {
            let m = random_matrix(&mut rng, 3, 20);
            let g = m.dim();
            if ud_theta(&m, &HalfIntVector::zeros(g)) != HalfInt::ZERO {
                failures += 1;
            }
            let z = HalfIntVector::from_doubled(
                (0..g).map(|_| rng.random_range(-60..=60)).collect(),
            );
            let neg = HalfIntVector::from_doubled(z.doubled().iter().map(|&d| -d).collect());
            if ud_theta(&m, &z) != ud_theta(&m, &neg) {
                failures += 1;
            }
        }
        CheckOutcome::from_count("zero_and_evenness", failures, trials)
    });

    out.push({
        // Degeneration: for large L the periodic minimum restricts to
        // {0,1}^g and loses its L dependence.
        let trials = 400;
        let mut failures = 0;
        for _ in 0..trials {
            let g = rng.random_range(1..=3usize);
            let mut parts: Vec<u32> = (0..g).map(|_| rng.random_range(1..=4)).collect();
            parts.sort_unstable();
            parts.dedup();
            let riggings: Vec<i64> = (0..parts.len()).map(|_| rng.random_range(0..=6)).collect();
            let k = rng.random_range(-4..=8i64);
            let r = rng.random_range(0..=1u8);
            let sum: usize = parts.iter().map(|&i| i as usize).sum();
            let max_j = riggings.iter().copied().max().unwrap_or(0).unsigned_abs() as usize;
            let l = 4 * sum + 2 * max_j + 2 * k.unsigned_abs() as usize + 2;
            let m = BetheMatrix::new(&parts, l).expect("L is large enough");
            let angle: Vec<i128> = riggings.iter().map(|&j| i128::from(j)).collect();
            let z = m.theta_argument(&angle, k, r);
            let theta = ud_theta(&m, &z);
            let mut best = HalfInt::ZERO;
            for mask in 0..(1u32 << m.dim()) {
                let mv: Vec<i128> =
                    (0..m.dim()).map(|b| i128::from(mask >> b & 1)).collect();
                let c = quadratic_form_cl(&m, &angle, k, r, &mv);
                best = best.min(c);
            }
            if theta != -best {
                failures += 1;
            }
        }
        CheckOutcome::from_count("degeneration_to_binary_min", failures, trials)
    });

    out.push({
        // c_L(m) - L sum m_i(m_i - 1)/2 does not depend on L.
        let trials = 500;
        let mut failures = 0;
        for _ in 0..trials {
            let mut parts: Vec<u32> =
                (0..rng.random_range(1..=3usize)).map(|_| rng.random_range(1..=4)).collect();
            parts.sort_unstable();
            parts.dedup();
            let sum: usize = parts.iter().map(|&i| i as usize).sum();
            let l1 = rng.random_range(2 * sum..=2 * sum + 8);
            let l2 = l1 + rng.random_range(1..=6usize);
            let a1 = BetheMatrix::new(&parts, l1).expect("valid");
            let a2 = BetheMatrix::new(&parts, l2).expect("valid");
            let g = a1.dim();
            let angle: Vec<i128> = (0..g).map(|_| rng.random_range(-10..=10)).collect();
            let k = rng.random_range(-5..=5i64);
            let r = rng.random_range(0..=1u8);
            let m: Vec<i128> = (0..g).map(|_| rng.random_range(-3..=3)).collect();
            let stride: i128 = m.iter().map(|&mi| mi * (mi - 1)).sum::<i128>(); // 2 sum m(m-1)/2
            let c1 = quadratic_form_cl(&a1, &angle, k, r, &m).doubled() - (l1 as i128) * stride;
            let c2 = quadratic_form_cl(&a2, &angle, k, r, &m).doubled() - (l2 as i128) * stride;
            if c1 != c2 {
                failures += 1;
            }
        }
        CheckOutcome::from_count("cl_decomposition", failures, trials)
    });

    out.push({
        // The soft sum stays positive and respects its tail guard.
        let mut failures = 0;
        let mut total = 0;
        for _ in 0..100 {
            let m = random_matrix(&mut rng, 2, 16);
            let z: Vec<f64> = (0..m.dim()).map(|_| rng.random_range(-20.0..20.0)).collect();
            total += 1;
            match riemann_theta_soft(&m, &z, 1.0 + rng.random_range(0.0..4.0), 12) {
                Ok(v) if v > 0.0 => {}
                _ => failures += 1,
            }
        }
        CheckOutcome::from_count("soft_positivity", failures, total)
    });

    out
}

// ---------------------------------------------------------------------
// scattering

fn scattering_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let max_l = cfg.max_system_size.min(10);
    let mut out = Vec::new();

    out.push({
        // Linearization: Phi(T_l p) = Phi(p) + h_l mod Gamma.
        let mut failures = 0;
        let mut total = 0;
        for l in 2..=max_l {
            for p in all_states(l) {
                let Ok(angle) = direct_scattering(&p) else { continue };
                for cap in 1..=4u32 {
                    total += 1;
                    let evolved = direct_scattering(&p.time_evolution(cap).expect("valid"))
                        .expect("same mu");
                    let shifted = evolve_angle(&angle, Evolution::Finite(cap), 1);
                    if !angle_equal_mod_gamma(&evolved, &shifted).unwrap_or(false) {
                        failures += 1;
                    }
                }
            }
        }
        CheckOutcome::from_count("linearization", failures, total)
    });

    out.push({
        // Phi is injective on P(mu) with |P(mu)| = det A.
        let mut failures = 0;
        let mut total = 0;
        for l in 2..=max_l {
            let mut by_config: std::collections::HashMap<Vec<u32>, std::collections::HashSet<Vec<i128>>> =
                std::collections::HashMap::new();
            let mut counts: std::collections::HashMap<Vec<u32>, u64> = std::collections::HashMap::new();
            for p in all_states(l) {
                let Ok(angle) = direct_scattering(&p) else { continue };
                let key = angle.matrix().coset_key(angle.angle());
                by_config.entry(angle.parts().to_vec()).or_default().insert(key);
                *counts.entry(angle.parts().to_vec()).or_default() += 1;
            }
            for (mu, keys) in by_config {
                total += 1;
                let det = BetheMatrix::new(&mu, l).expect("valid").det();
                let count = counts[&mu];
                if keys.len() as u64 != count || i128::from(count) != det {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("bijectivity_cardinality", failures, total)
    });

    out.push({
        // canonicalize inverts: T_1^d phi^{-1}(rc) recovers the state.
        let mut failures = 0;
        let mut total = 0;
        for l in 2..=max_l {
            for p in all_states(l) {
                let Ok(angle) = direct_scattering(&p) else { continue };
                total += 1;
                let ok = canonicalize(&angle)
                    .and_then(|(d, rc, _)| {
                        kkr_inverse(&rc).map(|h| h.cyclic_shift(d as i64) == p)
                    })
                    .unwrap_or(false);
                if !ok {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("loop_closure", failures, total)
    });

    out
}

// ---------------------------------------------------------------------
// tau

fn tau_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    out.push(flagship_sweep(cfg.max_system_size));

    out.push({
        let trials = 1000;
        let mut failures = 0;
        for _ in 0..trials {
            let rc = random_rigged_configuration(&mut rng, 14);
            let via_tau = kkr_via_tau(&TauContext::from(&rc));
            let via_scan = kkr_inverse(&rc);
            match (via_tau, via_scan) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => failures += 1,
            }
        }
        CheckOutcome::from_count("tau_formula_equivalence", failures, trials)
    });

    out.push({
        let trials = 300;
        let mut failures = 0;
        for _ in 0..trials {
            let l = rng.random_range(4..=12);
            let p = random_state(&mut rng, l);
            let Ok(angle) = direct_scattering(&p) else { continue };
            let base = state_from_angle(&angle).expect("theta formula");
            let shifted = state_from_angle(&evolve_angle(&angle, Evolution::Finite(1), 1))
                .expect("theta formula");
            if shifted != base.cyclic_shift(1) {
                failures += 1;
            }
        }
        CheckOutcome::from_count("shift_covariance", failures, trials)
    });

    out
}

/// The flagship equivalence: the theta-formula solution of the IVP equals
/// direct carrier evolution for every distinct-content state up to
/// `max_system_size`, every `l <= 4`, `t <= 3`. Also asserts occupancy
/// values and ball counts along the way (they are checked inside
/// `state_from_angle`).
pub fn flagship_sweep(max_system_size: usize) -> CheckOutcome {
    let mut failures = 0;
    let mut total = 0;
    for l in 1..=max_system_size {
        for p in all_states(l) {
            // Only distinct soliton contents enter the angle machinery.
            if direct_scattering(&p).is_err() {
                continue;
            }
            for cap in 1..=4u32 {
                let mut direct = p.clone();
                for t in 0..=3i64 {
                    total += 1;
                    let fast = solve_ivp(&p, &[(Evolution::Finite(cap), t)]);
                    match fast {
                        Ok(fast)
                            if fast == direct && fast.ball_count() == p.ball_count() => {}
                        _ => failures += 1,
                    }
                    if t < 3 {
                        direct = direct.time_evolution(cap).expect("valid state");
                    }
                }
            }
        }
    }
    CheckOutcome::from_count("theta_vs_carrier_sweep", failures, total)
}

// ---------------------------------------------------------------------
// bethe

fn bethe_suite(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();

    out.push({
        // mu = {1}, L = 4: all four classes, residual at double precision.
        let mut failures = 0;
        let mut total = 0;
        let mut worst: Option<(f64, String)> = None;
        for j in 0..4i64 {
            for cap in 1..=4u32 {
                total += 1;
                let res = verify_eigenrelation(&[1], 4, &[j], Evolution::Finite(cap))
                    .expect("in range");
                if res >= 1e-12 {
                    failures += 1;
                }
                if worst.as_ref().map(|w| res > w.0).unwrap_or(true) {
                    let report = crate::bethe::eigen_report(&[1], 4, &[j], Evolution::Finite(cap))
                        .expect("in range");
                    worst = Some((res, report));
                }
            }
        }
        let mut outcome = CheckOutcome::from_count("eigenrelation_l4", failures, total);
        if let Some((_, report)) = worst {
            outcome.detail = format!("{}; worst: {report}", outcome.detail);
        }
        outcome
    });

    out.push({
        // mu = {1,2,3}, L = 14: sampled classes over the full 2^14 space.
        let mut failures = 0;
        let mut total = 0;
        let mut samples: Vec<Vec<i64>> = vec![vec![8, 4, 1], vec![0, 0, 0]];
        while samples.len() < 8 {
            let j: Vec<i64> = vec![
                rng.random_range(0..=8),
                rng.random_range(0..=4),
                rng.random_range(0..=2),
            ];
            if !samples.contains(&j) {
                samples.push(j);
            }
        }
        let mut worst: Option<(f64, String)> = None;
        for j in &samples {
            for cap in 1..=4u32 {
                total += 1;
                let res = verify_eigenrelation(&[1, 2, 3], 14, j, Evolution::Finite(cap))
                    .expect("in range");
                if res >= 1e-9 {
                    failures += 1;
                }
                if worst.as_ref().map(|w| res > w.0).unwrap_or(true) {
                    let report =
                        crate::bethe::eigen_report(&[1, 2, 3], 14, j, Evolution::Finite(cap))
                            .expect("in range");
                    worst = Some((res, report));
                }
            }
        }
        let mut outcome = CheckOutcome::from_count("eigenrelation_l14", failures, total);
        if let Some((_, report)) = worst {
            outcome.detail = format!("{}; worst: {report}", outcome.detail);
        }
        outcome
    });

    out.push({
        // Orthogonality of distinct classes and norm det A of each.
        let mut failures = 0;
        let mut total = 0;
        let vectors: Vec<_> = (0..4)
            .map(|j| bethe_vector(&[1], 4, &[j]).expect("in range"))
            .collect();
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                total += 1;
                let ip = a.inner(b);
                let expect = if i == j { 4.0 } else { 0.0 };
                if (ip - expect).norm() >= 1e-9 {
                    failures += 1;
                }
            }
        }
        let m = BetheMatrix::new(&[1, 2, 3], 14).expect("valid");
        let j14: Vec<Vec<i64>> = vec![
            vec![8, 4, 1],
            vec![0, 0, 0],
            vec![3, 2, 1],
            vec![5, 0, 2],
        ];
        let v14: Vec<_> = j14
            .iter()
            .map(|j| bethe_vector(&[1, 2, 3], 14, j).expect("in range"))
            .collect();
        for (i, a) in v14.iter().enumerate() {
            // det A unit-modulus coefficients per vector.
            total += 1;
            if a.nonzero_count() as i128 != m.det() {
                failures += 1;
            }
            for (j, b) in v14.iter().enumerate() {
                total += 1;
                let ip = a.inner(b);
                let expect = if i == j { m.det() as f64 } else { 0.0 };
                if (ip - expect).norm() >= 1e-9 * m.det() as f64 {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("orthogonality", failures, total)
    });

    out.push({
        // Fourier inversion over the finite Jacobian at L = 4.
        let mut failures = 0;
        let mut total = 0;
        for rep in 0..4i128 {
            total += 1;
            let angle = ActionAngle::new(vec![1], 4, vec![rep]).expect("valid");
            let rebuilt = monomial_from_bethe_basis(&angle).expect("in range");
            let expect = monomial_index(&state_from_angle(&angle).expect("theta formula"));
            let ok = rebuilt.amplitudes().iter().enumerate().all(|(index, amp)| {
                let target = if index == expect { 1.0 } else { 0.0 };
                (amp - target).norm() < 1e-9
            });
            if !ok {
                failures += 1;
            }
        }
        CheckOutcome::from_count("basis_inversion_l4", failures, total)
    });

    out.push({
        // Lambda_1^L = 1 exactly, on rational phases.
        let mut failures = 0;
        let mut total = 0;
        for j in [[8i64, 4, 1], [0, 0, 0], [1, 3, 2], [7, 2, 0]] {
            total += 1;
            let phase = bethe_eigenvalue(&[1, 2, 3], 14, &j, Evolution::Finite(1))
                .expect("in range");
            if !phase.scaled(14).is_zero() {
                failures += 1;
            }
        }
        CheckOutcome::from_count("lambda1_order", failures, total)
    });

    out.push({
        let mut failures = 0;
        let mut total = 0;
        for l in 2..=cfg.max_system_size.min(10) {
            for mu in distinct_configurations(l) {
                if mu.is_empty() {
                    continue;
                }
                total += 1;
                if state_count_check(&mu, l).is_err() {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("cardinality_identity", failures, total)
    });

    out.push({
        // The Bethe classes span the same space as the monomials: the
        // det A x det A transition matrix has full rank.
        let mut failures = 0;
        let mut total = 0;
        for l in 2..=cfg.max_system_size.min(10) {
            for mu in distinct_configurations(l) {
                if mu.is_empty() {
                    continue;
                }
                total += 1;
                let rows = crate::bethe::transition_matrix(&mu, l).expect("valid content");
                let det = BetheMatrix::new(&mu, l).expect("valid").det() as usize;
                if complex_rank(rows) != det {
                    failures += 1;
                }
            }
        }
        CheckOutcome::from_count("span_completeness", failures, total)
    });

    out
}

/// Numerical rank by Gaussian elimination with partial pivoting; entries of
/// the inputs here have modulus 1, so the 1e-6 pivot cutoff is safe.
fn complex_rank(mut rows: Vec<Vec<num_complex::Complex64>>) -> usize {
    let n = rows.len();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).max_by(|&a, &b| {
            rows[a][col].norm().partial_cmp(&rows[b][col].norm()).expect("finite")
        }) else {
            break;
        };
        if rows[pivot][col].norm() < 1e-6 {
            continue;
        }
        rows.swap(rank, pivot);
        for r in rank + 1..n {
            let factor = rows[r][col] / rows[rank][col];
            for c in col..n {
                let sub = factor * rows[rank][c];
                rows[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}
