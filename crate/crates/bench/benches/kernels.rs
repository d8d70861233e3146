//! Benchmarks for the hot kernels: carrier evolution, the KKR scans, exact
//! theta minimization, and the full theta-formula solve.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use pbbs_bench::{showcase_angle, showcase_state, three_soliton_state};
use pbbs_core::kkr::{decompose_to_highest, kkr_forward, kkr_inverse};
use pbbs_core::scattering::{direct_scattering, evolve_angle};
use pbbs_core::tau::{solve_ivp, state_from_angle};
use pbbs_core::theta::{ud_theta, Evolution};

fn bench_time_evolution(c: &mut Criterion) {
    let state = showcase_state();
    c.bench_function("time_evolution_l6_L170", |b| {
        b.iter(|| black_box(&state).time_evolution(6).expect("valid"))
    });
}

fn bench_kkr(c: &mut Criterion) {
    let state = three_soliton_state();
    let rc = kkr_forward(&state).expect("highest");
    c.bench_function("kkr_forward_L14", |b| {
        b.iter(|| kkr_forward(black_box(&state)).expect("highest"))
    });
    c.bench_function("kkr_inverse_L14", |b| {
        b.iter(|| kkr_inverse(black_box(&rc)).expect("valid"))
    });
    let rotated = state.cyclic_shift(5);
    c.bench_function("decompose_to_highest_L14", |b| {
        b.iter(|| decompose_to_highest(black_box(&rotated)).expect("valid"))
    });
}

fn bench_theta(c: &mut Criterion) {
    let angle = showcase_angle();
    let matrix = angle.matrix();
    let far = evolve_angle(&angle, Evolution::Infinite, 1_000_000);
    let z = matrix.theta_argument(far.angle(), 85, 0);
    c.bench_function("ud_theta_g2_large_argument", |b| {
        b.iter(|| ud_theta(black_box(&matrix), black_box(&z)))
    });
}

fn bench_solve(c: &mut Criterion) {
    let angle = showcase_angle();
    c.bench_function("state_from_angle_L170", |b| {
        b.iter(|| state_from_angle(black_box(&angle)).expect("in image"))
    });

    let state = three_soliton_state();
    c.bench_function("solve_ivp_t1000_L14", |b| {
        b.iter(|| {
            solve_ivp(black_box(&state), &[(Evolution::Finite(2), 1000)]).expect("solvable")
        })
    });
    c.bench_function("direct_scattering_L14", |b| {
        b.iter(|| direct_scattering(black_box(&state)).expect("distinct"))
    });
}

criterion_group!(benches, bench_time_evolution, bench_kkr, bench_theta, bench_solve);
criterion_main!(benches);
