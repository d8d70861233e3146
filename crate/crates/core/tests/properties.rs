//! Property tests over randomized states, configurations, and theta
//! arguments, plus a full run of every verification suite at reduced size.

use proptest::prelude::*;

use pbbs_core::crystal::{Letter, State};
use pbbs_core::kkr::{decompose_to_highest, kkr_forward, kkr_inverse, RiggedConfiguration};
use pbbs_core::theta::{ud_theta, BetheMatrix, HalfIntVector};
use pbbs_core::verify::{run_suite, Suite, VerifyConfig};

fn arb_state(max_len: usize) -> impl Strategy<Value = State> {
    prop::collection::vec(prop::bool::ANY, 1..=max_len).prop_map(|bits| {
        // Keep at most half the positions as balls so the state is valid.
        let len = bits.len();
        let mut letters = vec![Letter::Empty; len];
        let mut balls = 0;
        for (i, b) in bits.into_iter().enumerate() {
            if b && 2 * (balls + 1) <= len {
                letters[i] = Letter::Ball;
                balls += 1;
            }
        }
        State::new(letters).expect("by construction")
    })
}

proptest! {
    #[test]
    fn cyclic_shifts_compose(p in arb_state(16), d1 in -20i64..20, d2 in -20i64..20) {
        prop_assert_eq!(p.cyclic_shift(d1).cyclic_shift(d2), p.cyclic_shift(d1 + d2));
    }

    #[test]
    fn evolution_conserves_and_commutes(p in arb_state(12), k in 1u32..=4, l in 1u32..=4) {
        let a = p.time_evolution(k).unwrap().time_evolution(l).unwrap();
        let b = p.time_evolution(l).unwrap().time_evolution(k).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.ball_count(), p.ball_count());
    }

    #[test]
    fn kkr_round_trip(p in arb_state(14)) {
        let (_, highest) = decompose_to_highest(&p).unwrap();
        let rc = kkr_forward(&highest).unwrap();
        prop_assert_eq!(kkr_inverse(&rc).unwrap(), highest);
    }

    #[test]
    fn rigged_configuration_text_round_trip(
        l in 4usize..=20,
        picks in prop::collection::vec((1u32..=3, 0u8..=255), 0..=3),
    ) {
        let mut parts = Vec::new();
        let mut budget = (l / 2) as u32;
        for (part, _) in &picks {
            if *part <= budget {
                parts.push(*part);
                budget -= part;
            }
        }
        let vac = pbbs_core::kkr::vacancy_numbers(&parts, l).unwrap();
        let riggings: Vec<i64> = picks
            .iter()
            .take(parts.len())
            .zip(&vac)
            .map(|((_, r), &p)| i64::from(*r) % (p + 1))
            .collect();
        let rc = RiggedConfiguration::new(l, parts, riggings).unwrap();
        let text = rc.to_text();
        let back = RiggedConfiguration::from_text(&text).unwrap();
        prop_assert_eq!(&back, &rc);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn theta_quasi_periodicity(
        z0 in -60i128..=60, z1 in -60i128..=60,
        c0 in -2i128..=2, c1 in -2i128..=2,
    ) {
        let m = BetheMatrix::new(&[1, 3], 14).unwrap();
        let z = HalfIntVector::from_doubled(vec![z0, z1]);
        let v = m.multiply(&[c0, c1]);
        let lhs = ud_theta(&m, &z.add_int(&v)) - ud_theta(&m, &z);
        let rhs = c0 * (z.doubled()[0] + v[0]) + c1 * (z.doubled()[1] + v[1]);
        prop_assert_eq!(lhs.doubled(), rhs);
    }
}

#[test]
fn every_suite_passes_at_reduced_size() {
    let cfg = VerifyConfig { max_system_size: 8, seed: 7 };
    for suite in Suite::all() {
        let report = run_suite(suite, &cfg);
        assert!(report.passed(), "suite {suite} failed:\n{}", report.render());
    }
}
