//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Runs without the
//! libtest harness so every line is printed and a failing criterion does not
//! hide the others; exits non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qsl_core::distinguishability::{blp_measure, maximize_blp, random_pair, StatePair};
use qsl_core::linalg::schatten_norm;
use qsl_core::model::{evolve_density, Amplitude};
use qsl_core::numeric::bisect;
use qsl_core::oracle::{integrate_amplitude, DEFAULT_TOLERANCE};
use qsl_core::speed_limit::{generator_norms, qslt_identity, qslt_pure, qslt_window};
use qsl_core::transition::{
    critical_drive_strength, linspace, speed_up_onset, sweep_omega, CriticalSearch, SweepRow,
};
use qsl_core::{DressedDensityMatrix, PhysicalParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID_LAMBDAS: [f64; 5] = [0.05, 0.5, 3.0, 6.0, 9.0];
const GRID_OMEGAS: [f64; 6] = [0.0, 2.0, 5.31, 8.0, 20.0, 50.0];

fn resonant(lambda: f64, omega: f64) -> PhysicalParams {
    PhysicalParams::resonant(lambda, omega).unwrap()
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn acceptance_grid() -> impl Iterator<Item = (f64, f64)> {
    GRID_LAMBDAS
        .into_iter()
        .flat_map(|l| GRID_OMEGAS.into_iter().map(move |o| (l, o)))
}

fn c01_oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut worst = (0.0, 0.0, 0.0);
    for (lambda, omega) in acceptance_grid() {
        let params = resonant(lambda, omega);
        let ode = integrate_amplitude(&params, 10.0, DEFAULT_TOLERANCE).unwrap();
        let amp = Amplitude::new(&params);
        let err = ode
            .times
            .iter()
            .zip(&ode.amplitude)
            .map(|(&t, c)| (amp.value(t) - c).norm())
            .fold(0.0, f64::max);
        if err > worst.0 {
            worst = (err, lambda, omega);
        }
    }
    let elapsed = start.elapsed();
    verdict(worst.0 < 1e-8 && elapsed < Duration::from_secs(30),
        format!(
            "max |ε − c₊| = {:.3e} (at λ={}, Ω={}), {:.2?}",
            worst.0, worst.1, worst.2, elapsed
        ),
    )
}

fn c02_critical_driving_strengths() -> Verdict {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for (lambda, expected) in [(3.0, 5.31), (6.0, 10.89), (9.0, 16.41)] {
        let omega_c = critical_drive_strength(lambda, 1.0, 1e-3).unwrap();
        let ok = (omega_c - expected).abs() <= 0.05;
        pass &= ok;
        detail.push(format!("λ={lambda}: Ω_c={omega_c:.4} (want {expected}±0.05)"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    verdict(pass,
        format!("{}; {:.2?}", detail.join(", "), elapsed),
    )
}

fn c03_no_speed_up_plateau() -> Verdict {
    let ratios: Vec<f64> = (0..=5)
        .map(|o| qslt_pure(&resonant(3.0, o as f64), 1.0).unwrap().ratio)
        .collect();
    let worst = ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    verdict(worst < 1e-6,
        format!("max |ratio − 1| over Ω ∈ 0..=5 is {worst:.3e}"),
    )
}

fn c04_monotone_speed_up() -> Verdict {
    let ratios: Vec<f64> = [6.0, 8.0, 10.0, 14.0, 20.0]
        .iter()
        .map(|&o| qslt_pure(&resonant(3.0, o), 1.0).unwrap().ratio)
        .collect();
    let pass = ratios.windows(2).all(|w| w[1] < w[0]);
    verdict(pass, format!("ratios {ratios:.6?}"))
}

fn c05_closed_form_identity() -> Verdict {
    let mut worst = (0.0, 0.0, 0.0);
    for (lambda, omega) in acceptance_grid() {
        let params = resonant(lambda, omega);
        let bound = qslt_pure(&params, 1.0).unwrap().bound_pinf;
        let identity = qslt_identity(&params, 1.0).unwrap();
        let err = (bound - identity).abs();
        if err > worst.0 {
            worst = (err, lambda, omega);
        }
    }
    verdict(worst.0 < 1e-6,
        format!("max |τ_QSL − identity| = {:.3e} (at λ={}, Ω={})", worst.0, worst.1, worst.2),
    )
}

/// "First departs from 1" is read as `τ_QSL/τ_D < 1 − 10⁻⁶`, the threshold
/// fixed for this comparison.
const RATIO_DEPARTURE: f64 = 1e-6;
/// Finest departure the quadrature still resolves; reported for context only.
const RATIO_DEPARTURE_FLOOR: f64 = 1e-9;

fn c06_transition_coincidence() -> Verdict {
    let search = CriticalSearch { resolution: 1e-3, ..CriticalSearch::default() };
    let mut pass = true;
    let mut detail = Vec::new();
    for lambda in [3.0, 6.0, 9.0] {
        let omega_c = critical_drive_strength(lambda, 1.0, 1e-3).unwrap();
        let departs = speed_up_onset(lambda, 1.0, RATIO_DEPARTURE, search).unwrap();
        let floor = speed_up_onset(lambda, 1.0, RATIO_DEPARTURE_FLOOR, search).unwrap();
        let gap = (departs - omega_c).abs();
        pass &= gap <= 2e-3;
        detail.push(format!(
            "λ={lambda}: N-onset {omega_c:.4}, ratio<1−1e-6 at {departs:.4} (gap {gap:.1e}; at 1−1e-9: {floor:.4})"
        ));
    }
    verdict(pass, detail.join("; "))
}

fn first_half_crossing(params: &PhysicalParams, t_max: f64) -> f64 {
    let amp = Amplitude::new(params);
    let grid = linspace(0.0, t_max, 20_001);
    let i = grid
        .iter()
        .position(|&t| amp.population(t) < 0.5)
        .expect("population crosses 1/2");
    let (lo, hi) = bisect(|t| amp.population(t) < 0.5, grid[i - 1], grid[i], 1e-12);
    0.5 * (lo + hi)
}

fn c07_windowed_qslt_crossover() -> Verdict {
    let dtau = 5e-3;
    let taus = linspace(0.0, 8.0, 1601);
    let mut pass = true;
    let mut detail = Vec::new();
    for omega in [0.0, 2.0, 4.0] {
        let params = resonant(3.0, omega);
        let values: Vec<f64> = taus
            .iter()
            .map(|&tau| qslt_window(&params, tau, 1.0).unwrap().tau_qsl)
            .collect();
        let (imin, _) = values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
        let crossing = first_half_crossing(&params, 8.0);
        let gap = (taus[imin] - crossing).abs();
        pass &= gap <= dtau;
        detail.push(format!("Ω={omega}: argmin τ={:.3}, P=1/2 at τ={crossing:.4}", taus[imin]));
    }
    verdict(pass, detail.join("; "))
}

fn c08_slope_ordering() -> Verdict {
    let dtau = 5e-3;
    let omegas = [0.0, 2.0, 4.0];
    // Speed-up phase common to all three curves ends where the Ω = 0 curve
    // hits its minimum.
    let end = first_half_crossing(&resonant(3.0, 0.0), 8.0);
    let taus: Vec<f64> = (0..).map(|i| i as f64 * dtau).take_while(|&t| t + dtau < end).collect();
    let slopes: Vec<Vec<f64>> = omegas
        .iter()
        .map(|&o| {
            let params = resonant(3.0, o);
            taus.iter()
                .map(|&t| {
                    let a = qslt_window(&params, t, 1.0).unwrap().tau_qsl;
                    let b = qslt_window(&params, t + dtau, 1.0).unwrap().tau_qsl;
                    (b - a) / dtau
                })
                .collect()
        })
        .collect();
    let violations = (0..taus.len())
        .filter(|&i| !(slopes[0][i].abs() > slopes[1][i].abs() && slopes[1][i].abs() > slopes[2][i].abs()))
        .count();
    let mid = taus.len() / 2;
    verdict(violations == 0 && !taus.is_empty(),
        format!(
            "{} points on [0, {end:.3}), {violations} violations; at τ={:.3}: |dτ_QSL/dτ| = {:.4} > {:.4} > {:.4}",
            taus.len(),
            taus[mid],
            slopes[0][mid].abs(),
            slopes[1][mid].abs(),
            slopes[2][mid].abs()
        ),
    )
}

fn c09_blp_optimality() -> Verdict {
    let params = resonant(3.0, 8.0);
    let optimal = blp_measure(&params, &StatePair::optimal(), 1.0).unwrap().measure;
    let mut pass = optimal > 0.0;
    let mut worst_excess = f64::NEG_INFINITY;
    for seed in [1_u64, 2, 3] {
        let best = maximize_blp(&params, 1.0, 1000, seed).unwrap();
        worst_excess = worst_excess.max(best.measure - optimal);
        pass &= best.measure <= optimal + 1e-9;
    }
    // Each sample on its own, not just the maximum.
    for i in 0..1000 {
        let m = blp_measure(&params, &random_pair(99, i), 1.0).unwrap().measure;
        pass &= m <= optimal + 1e-9;
    }
    verdict(pass,
        format!("N(|+⟩,|−⟩) = {optimal:.6e}, best sampled − optimal = {worst_excess:.3e}"),
    )
}

fn random_state<R: Rng>(rng: &mut R) -> DressedDensityMatrix {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r: f64 = rng.random::<f64>().cbrt() * (1.0 - 1e-12);
    let s = (1.0 - z * z).sqrt();
    DressedDensityMatrix::from_bloch(r * s * phi.cos(), r * s * phi.sin(), r * z).unwrap()
}

fn c10_structural_invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases = 10_000;
    let mut violations = [0usize; 5];
    for _ in 0..cases {
        let lambda = rng.random_range(0.01..10.0);
        let omega = rng.random_range(0.0..50.0);
        let t = rng.random_range(0.0..10.0);
        let params = resonant(lambda, omega);

        let amp = Amplitude::new(&params);
        let flipped = Amplitude::with_rate(&params, -qsl_core::model::complex_rate(&params));
        let (e1, r1) = amp.value_and_rate(t);
        let (e2, r2) = flipped.value_and_rate(t);
        if (e1 - e2).norm() > 1e-12 || (r1 - r2).norm() > 1e-12 {
            violations[0] += 1;
        }

        if e1.norm() > 1.0 + 1e-9 {
            violations[1] += 1;
        }

        let (a, b) = (random_state(&mut rng), random_state(&mut rng));
        let pair = StatePair::new(a, b);
        if pair.distance_after(e1) > pair.initial_distance() + 1e-12 {
            violations[2] += 1;
        }

        let s = generator_norms(&params, &a, t).unwrap();
        let (n1, n2, ninf) = (schatten_norm(s, 1.0), schatten_norm(s, 2.0), schatten_norm(s, f64::INFINITY));
        if !(n1 >= n2 && n2 >= ninf) {
            violations[3] += 1;
        }

        let out = evolve_density(&params, &a, t).unwrap();
        let valid = DressedDensityMatrix::new(out.p_plus(), out.coherence()).is_ok()
            && out.coherence().norm_sqr() <= out.p_plus() * out.p_minus() + 1e-12;
        if !valid {
            violations[4] += 1;
        }
    }
    // The averaged bounds inherit the pointwise ordering; spot-check it.
    for _ in 0..100 {
        let params = resonant(rng.random_range(0.01..10.0), rng.random_range(0.0..50.0));
        let r = qslt_pure(&params, 1.0).unwrap();
        if !(r.bound_pinf >= r.bound_p2 && r.bound_p2 >= r.bound_p1) || r.ratio > 1.0 + 1e-9 {
            violations[3] += 1;
        }
    }
    verdict(violations.iter().all(|&v| v == 0),
        format!(
            "{cases} cases; violations: branch {}, |ε|≤1 {}, contraction {}, Schatten order {}, positivity {}",
            violations[0], violations[1], violations[2], violations[3], violations[4]
        ),
    )
}

/// Edge of the flat region of the λ = 0.05 sweep; no edge is given
/// quantitatively, so this is read off the sweep itself.
const PLATEAU_EDGE: f64 = 1.5;

fn shape_strong_coupling_plateau() -> Verdict {
    let rows = sweep_omega(0.05, 1.0, 0.0, 30.0, 301).unwrap();
    let (flat, rest): (Vec<&SweepRow>, Vec<&SweepRow>) = rows.iter().partition(|r| r.drive_strength <= PLATEAU_EDGE);
    let plateau: Vec<f64> = flat.iter().map(|r| r.tau_qsl_ratio).collect();
    let spread = plateau.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - plateau.iter().cloned().fold(f64::INFINITY, f64::min);
    // Periodic decrease: count local minima of the ratio past the plateau.
    let tail: Vec<f64> = rest.iter().map(|r| r.tau_qsl_ratio).collect();
    let dips = tail.windows(3).filter(|w| w[1] < w[0] && w[1] < w[2]).count();
    verdict(spread < 1e-6 && dips >= 3 && tail.iter().all(|&r| r < 1.0),
        format!("ratio spread over Ω ≤ {PLATEAU_EDGE} is {spread:.2e}; {dips} dips in the ratio beyond"),
    )
}

fn shape_interior_blp_maximum() -> Verdict {
    let rows = sweep_omega(3.0, 1.0, 0.0, 40.0, 81).unwrap();
    let (imax, nmax) = rows
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r.blp_measure > acc.1 { (i, r.blp_measure) } else { acc });
    let interior = imax > 0 && imax + 1 < rows.len();
    let last = rows.last().unwrap().blp_measure;
    verdict(interior && nmax > last && rows[0].blp_measure == 0.0,
        format!(
            "peak N = {nmax:.4e} at Ω = {}, N(Ω=40) = {last:.4e}",
            rows[imax].drive_strength
        ),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Verdict);

const CRITERIA: [Criterion; 12] = [
    ("C1", "oracle equivalence", c01_oracle_equivalence),
    ("C2", "critical driving strengths", c02_critical_driving_strengths),
    ("C3", "no-speed-up plateau", c03_no_speed_up_plateau),
    ("C4", "monotone speed-up", c04_monotone_speed_up),
    ("C5", "closed-form identity", c05_closed_form_identity),
    ("C6", "transition coincidence", c06_transition_coincidence),
    ("C7", "windowed-QSLT crossover", c07_windowed_qslt_crossover),
    ("C8", "slope ordering", c08_slope_ordering),
    ("C9", "BLP optimality", c09_blp_optimality),
    ("C10", "structural invariants", c10_structural_invariants),
    ("S1", "strong-coupling plateau", shape_strong_coupling_plateau),
    ("S2", "interior N maximum", shape_interior_blp_maximum),
];

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes a filter; honour it loosely.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, check) in CRITERIA {
        if !filter.is_empty() && !filter.iter().any(|f| id.eq_ignore_ascii_case(f) || name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let v = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        if !v.pass {
            failed += 1;
        }
        println!("[{}] {id} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
