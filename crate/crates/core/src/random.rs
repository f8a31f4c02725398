//! Seeded random networks and scenario parameters.
//!
//! Construction: one mode per bath with `γ ~ U[0.1, 10]`; each mode pair is
//! joined by a beam splitter with probability 1/2, amplitude `U[0, 2]` and a
//! uniform random phase. Active networks add two-mode-squeeze terms and
//! parametric drives on top and are redrawn until the drift is stable.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::matrix::C64;
use crate::linalg::is_stable;
use crate::network::{build_state_space, BathSpec, NetworkSpec};
use crate::scenarios::ThreeModeParams;
use crate::steady::InputMoments;

pub type NetRng = ChaCha8Rng;

pub fn rng(seed: u64) -> NetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const MAX_REDRAWS: usize = 10_000;

fn phase<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

pub fn random_gammas<R: Rng>(rng: &mut R, n_modes: usize) -> Vec<f64> {
    (0..n_modes).map(|_| rng.gen_range(0.1..=10.0)).collect()
}

/// Vacuum-bath beam-splitter network. With `real_couplings` the phases are
/// restricted to `±1`.
pub fn random_passive_network<R: Rng>(rng: &mut R, n_modes: usize, real_couplings: bool) -> NetworkSpec {
    let baths = random_gammas(rng, n_modes)
        .into_iter()
        .map(BathSpec::vacuum)
        .collect();
    let mut spec = NetworkSpec::new(baths);
    for i in 0..n_modes {
        for j in i + 1..n_modes {
            if rng.gen_bool(0.5) {
                let amp = rng.gen_range(0.0..=2.0);
                let ph = if real_couplings {
                    if rng.gen_bool(0.5) {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(-1.0, 0.0)
                    }
                } else {
                    phase(rng)
                };
                spec = spec.beam_splitter(i, j, ph * amp);
            }
        }
    }
    spec
}

/// Passive network plus squeezing and parametric terms, redrawn until
/// stable. Active amplitudes are `U[0, 1]` times the smallest damping so a
/// useful fraction of draws is stable.
pub fn random_active_network<R: Rng>(rng: &mut R, n_modes: usize) -> NetworkSpec {
    for _ in 0..MAX_REDRAWS {
        let mut spec = random_passive_network(rng, n_modes, false);
        let g_min = spec.gammas().into_iter().fold(f64::INFINITY, f64::min);
        let mut active = 0;
        for i in 0..n_modes {
            for j in i + 1..n_modes {
                if rng.gen_bool(0.5) {
                    let amp = rng.gen_range(0.0..=1.0) * g_min;
                    spec = spec.two_mode_squeeze(i, j, phase(rng) * amp);
                    active += 1;
                }
            }
            if rng.gen_bool(0.3) {
                let amp = rng.gen_range(0.0..=1.0) * g_min;
                spec = spec.parametric(i, phase(rng) * amp);
                active += 1;
            }
        }
        if active == 0 {
            continue;
        }
        let ss = build_state_space(&spec).expect("generated spec is valid");
        if is_stable(&ss.drift, 1e-6).unwrap_or(false) {
            return spec;
        }
    }
    panic!("no stable active network after {MAX_REDRAWS} draws");
}

/// `N ~ U{1..=max_modes}`; active with probability 1/2 when `N ≥ 2`.
pub fn random_network<R: Rng>(rng: &mut R, max_modes: usize) -> NetworkSpec {
    let n = rng.gen_range(1..=max_modes);
    if n >= 2 && rng.gen_bool(0.5) {
        random_active_network(rng, n)
    } else {
        random_passive_network(rng, n, false)
    }
}

/// Uncorrelated inputs with `n ~ U[0, 3]` and, when `anomalous` is set,
/// `|m| = u √(n(n+1))` with `u ~ U[0, 1]` and a random phase.
pub fn random_inputs<R: Rng>(rng: &mut R, n_modes: usize, anomalous: bool) -> InputMoments {
    let n: Vec<f64> = (0..n_modes).map(|_| rng.gen_range(0.0..=3.0)).collect();
    let m: Vec<C64> = n
        .iter()
        .map(|&x| {
            if anomalous {
                phase(rng) * (rng.gen_range(0.0..=1.0) * (x * (x + 1.0)).sqrt())
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    InputMoments::per_channel(&n, &m).expect("lengths agree")
}

/// `κ ~ U[0.1, 10]`, `γ_m/κ` log-uniform in `[1e-3, 1e-1]`,
/// `Ω ~ U[0.1, 5]`, `𝒢 ~ U[0.05, 5]`, `ξ ~ U[xi_min, 1.5]`,
/// `n_o, n_m ~ U[0, 5]`.
pub fn random_three_mode<R: Rng>(rng: &mut R, xi_min: f64) -> ThreeModeParams {
    let kappa = rng.gen_range(0.1..=10.0);
    let ratio = 10f64.powf(rng.gen_range(-3.0..=-1.0));
    ThreeModeParams {
        g_script: rng.gen_range(0.05..=5.0),
        xi: rng.gen_range(xi_min..=1.5),
        omega: rng.gen_range(0.1..=5.0),
        kappa,
        gamma_m: ratio * kappa,
        n_o: rng.gen_range(0.0..=5.0),
        n_m: rng.gen_range(0.0..=5.0),
    }
}
