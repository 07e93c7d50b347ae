//! Multistart Nelder–Mead maximisation of `CP` over the untrusted parties'
//! measurement directions, with Charlie fixed to `(σx, σy)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assemblage::CONDITIONING_EPS;
use crate::error::{Error, Result};
use crate::assemblage::correlation_tensor;
use crate::fgi::{cp_from_tensor, OutcomeLabels, ALGEBRAIC_MAX, TERM_SETTINGS};
use crate::measurements::{Observable, SettingsTriple};
use crate::qcore::{DensityMatrix, PureState};

/// Objective value for settings that leave a conditional undefined.
pub const PENALTY: f64 = -1e6;

const RANDOM_STEP: f64 = 0.4;
const SEEDED_STEP: f64 = 1e-3;
const POLISH_STEP: f64 = 0.05;

/// `(ϑ, φ)` for `X0, X1, Y0, Y1`, in that order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAngles(pub [f64; 8]);

impl MeasurementAngles {
    pub fn observables(&self) -> [Observable; 4] {
        let a = &self.0;
        [0, 1, 2, 3].map(|k| Observable::from_angles(a[2 * k], a[2 * k + 1]))
    }

    /// Same directions with `ϑ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn canonical(&self) -> Self {
        let mut out = [0.0; 8];
        for (k, o) in self.observables().iter().enumerate() {
            let (t, p) = o.angles();
            out[2 * k] = t;
            out[2 * k + 1] = p;
        }
        Self(out)
    }

    pub fn is_canonical(&self) -> bool {
        self.0
            .chunks(2)
            .all(|c| (0.0..=PI).contains(&c[0]) && (0.0..TAU).contains(&c[1]))
    }

    /// Settings with Charlie at `(σx, σy)`; the two settings of a party may coincide.
    pub fn to_settings(&self) -> SettingsTriple {
        let [x0, x1, y0, y1] = self.observables();
        SettingsTriple {
            alice: [x0, x1],
            bob: [y0, y1],
            charlie: [Observable::sx(), Observable::sy()],
        }
    }

    pub fn from_settings(s: &SettingsTriple) -> Self {
        let mut out = [0.0; 8];
        for (k, o) in [s.alice[0], s.alice[1], s.bob[0], s.bob[1]].iter().enumerate() {
            let (t, p) = o.angles();
            out[2 * k] = t;
            out[2 * k + 1] = p;
        }
        Self(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub restarts: usize,
    /// Evaluation budget per restart.
    pub max_evals: usize,
    pub tol_value: f64,
    pub tol_simplex: f64,
    pub seed: u64,
    /// Settings where some conditioning event `P(a,b|x,y)` falls below this
    /// are infeasible. Conditionals of rarer events are dominated by round-off.
    #[serde(default = "default_min_joint")]
    pub min_joint: f64,
    /// Starting point for the first restart.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<MeasurementAngles>,
}

impl Default for OptConfig {
    fn default() -> Self {
        default_config()
    }
}

fn default_min_joint() -> f64 {
    1e-6
}

pub fn default_config() -> OptConfig {
    OptConfig {
        restarts: 32,
        max_evals: 2000,
        tol_value: 1e-10,
        tol_simplex: 1e-8,
        seed: 0,
        min_joint: default_min_joint(),
        initial: None,
    }
}

impl OptConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals < 9 {
            return Err(Error::InvalidParameter(
                "optimizer needs at least one restart and nine evaluations".into(),
            ));
        }
        if !(self.tol_value > 0.0) || !(self.tol_simplex > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if !(CONDITIONING_EPS..1.0).contains(&self.min_joint) {
            return Err(Error::InvalidParameter(format!(
                "min_joint {} must lie in [1e-12, 1)",
                self.min_joint
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best_value: f64,
    pub best_angles: MeasurementAngles,
    pub restarts_used: usize,
    pub evaluations: usize,
    /// Whether the restart that produced the best value met a stopping tolerance.
    pub converged: bool,
    /// Best value found so far after each restart.
    pub restart_values: Vec<f64>,
}

/// `CP` as a function of the eight angles.
trait Objective {
    fn value(&self, angles: &[f64; 8]) -> f64;
}

/// `(⟨+n|, ⟨-n|)` conjugated eigenvectors of `n·σ` from its angles.
fn eigvecs(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [
        [Complex64::new(c, 0.0), e * s],
        [Complex64::new(s, 0.0), -e * c],
    ]
}

struct PureObjective {
    psi: [Complex64; 8],
    min_joint: f64,
}

/// `(x, y, z, a, b)` of the four terms, all with target `c = 0`.
const TERMS: [(usize, usize, usize, usize, usize); 4] =
    [(0, 0, 0, 1, 1), (0, 1, 1, 0, 1), (1, 1, 0, 0, 1), (1, 0, 1, 0, 1)];

impl Objective for PureObjective {
    fn value(&self, a: &[f64; 8]) -> f64 {
        let vx = [eigvecs(a[0], a[1]), eigvecs(a[2], a[3])];
        let vy = [eigvecs(a[4], a[5]), eigvecs(a[6], a[7])];
        let mut total = 0.0;
        for &(x, y, z, oa, ob) in &TERMS {
            let al = vx[x][oa];
            let be = vy[y][ob];
            let mut phi = [Complex64::new(0.0, 0.0); 2];
            for i in 0..2 {
                for j in 0..2 {
                    let w = (al[i] * be[j]).conj();
                    phi[0] += w * self.psi[i * 4 + j * 2];
                    phi[1] += w * self.psi[i * 4 + j * 2 + 1];
                }
            }
            let norm = phi[0].norm_sqr() + phi[1].norm_sqr();
            if norm < self.min_joint {
                return PENALTY;
            }
            // ⟨+x|φ⟩ and ⟨+y|φ⟩ up to the common 1/√2
            let overlap = if z == 0 {
                phi[0] + phi[1]
            } else {
                phi[0] - Complex64::new(0.0, 1.0) * phi[1]
            };
            total += 0.5 * overlap.norm_sqr() / norm;
        }
        total
    }
}

struct MixedObjective<'a> {
    rho: &'a DensityMatrix,
    min_joint: f64,
}

impl Objective for MixedObjective<'_> {
    fn value(&self, a: &[f64; 8]) -> f64 {
        feasible_cp(self.rho, &MeasurementAngles(*a).to_settings(), self.min_joint).unwrap_or(PENALTY)
    }
}

/// `CP` at `s` when every conditioning event has probability at least `min_joint`.
fn feasible_cp(rho: &DensityMatrix, s: &SettingsTriple, min_joint: f64) -> Option<f64> {
    let t = correlation_tensor(rho, s).ok()?;
    let labels = OutcomeLabels::standard();
    for (k, &(x, y, z)) in TERM_SETTINGS.iter().enumerate() {
        if t.marginal_ab(labels.a[k], labels.b[k], x, y, z) < min_joint {
            return None;
        }
    }
    let r = cp_from_tensor(&t, &labels, s.charlie_is_mub());
    r.is_attained().then_some(r.value)
}

struct RunOutcome {
    x: [f64; 8],
    f: f64,
    evals: usize,
    converged: bool,
}

/// Nelder–Mead on `-objective` from `x0` with initial step `step`.
fn nelder_mead(
    obj: &dyn Objective,
    x0: [f64; 8],
    step: f64,
    budget: usize,
    tol_simplex: f64,
    tol_value: f64,
) -> RunOutcome {
    const N: usize = 8;
    let f = |x: &[f64; 8]| -obj.value(x);
    let mut simplex: Vec<([f64; 8], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, f(&x0)));
    for k in 0..N {
        let mut x = x0;
        x[k] += step;
        simplex.push((x, f(&x)));
    }
    let mut evals = N + 1;
    let mut converged = false;

    while evals < budget {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[N].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(p, q)| (p - q).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < tol_simplex || spread.abs() < tol_value {
            converged = true;
            break;
        }

        let mut centroid = [0.0; 8];
        for (x, _) in &simplex[..N] {
            for k in 0..N {
                centroid[k] += x[k] / N as f64;
            }
        }
        let along = |t: f64| -> [f64; 8] {
            let mut out = [0.0; 8];
            for k in 0..N {
                out[k] = centroid[k] + t * (simplex[N].0[k] - centroid[k]);
            }
            out
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[N].1 {
            let xc = along(-0.5);
            (xc, f(&xc))
        } else {
            let xc = along(0.5);
            (xc, f(&xc))
        };
        evals += 1;
        if fc < simplex[N].1.min(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        let best = simplex[0].0;
        for (x, fx) in simplex[1..].iter_mut() {
            for k in 0..N {
                x[k] = best[k] + 0.5 * (x[k] - best[k]);
            }
            *fx = f(x);
        }
        evals += N;
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    RunOutcome {
        x: simplex[0].0,
        f: -simplex[0].1,
        evals,
        converged,
    }
}

fn random_angles(rng: &mut ChaCha8Rng) -> [f64; 8] {
    let mut a = [0.0; 8];
    for k in 0..4 {
        a[2 * k] = rng.random_range(0.0..PI);
        a[2 * k + 1] = rng.random_range(0.0..TAU);
    }
    a
}

/// Amplitudes of a rank-one three-qubit density matrix, if it is one.
fn pure_amplitudes(rho: &DensityMatrix) -> Option<[Complex64; 8]> {
    if (rho.purity() - 1.0).abs() > 1e-12 {
        return None;
    }
    let m = rho.matrix();
    let k = (0..8).max_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re))?;
    let scale = m[(k, k)].re.sqrt();
    let mut psi = [Complex64::new(0.0, 0.0); 8];
    for (i, v) in psi.iter_mut().enumerate() {
        *v = m[(i, k)] / scale;
    }
    Some(psi)
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims != [2, 2, 2] {
        return Err(Error::Dimension(format!(
            "optimizer expects three qubits, got dims {dims:?}"
        )));
    }
    Ok(())
}

pub fn maximize_cp(state: &DensityMatrix, config: &OptConfig) -> Result<OptResult> {
    check_dims(state.dims())?;
    match pure_amplitudes(state) {
        Some(psi) => run(&PureObjective { psi, min_joint: config.min_joint }, state, config),
        None => run(
            &MixedObjective {
                rho: state,
                min_joint: config.min_joint,
            },
            state,
            config,
        ),
    }
}

pub fn maximize_cp_pure(state: &PureState, config: &OptConfig) -> Result<OptResult> {
    check_dims(state.dims())?;
    let mut psi = [Complex64::new(0.0, 0.0); 8];
    psi.copy_from_slice(state.amplitudes());
    run(
        &PureObjective {
            psi,
            min_joint: config.min_joint,
        },
        &state.density(),
        config,
    )
}

fn run(obj: &dyn Objective, rho: &DensityMatrix, config: &OptConfig) -> Result<OptResult> {
    config.validate()?;
    let mut best: Option<(f64, MeasurementAngles, bool)> = None;
    let mut evaluations = 0;
    let mut restart_values = Vec::with_capacity(config.restarts);
    let mut restarts_used = 0;

    for r in 0..config.restarts {
        restarts_used = r + 1;
        let (x0, step) = match (&config.initial, r) {
            (Some(init), 0) => (init.0, SEEDED_STEP),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(r as u64);
                (random_angles(&mut rng), RANDOM_STEP)
            }
        };
        let mut out = nelder_mead(obj, x0, step, config.max_evals, config.tol_simplex, config.tol_value);
        let remaining = config.max_evals.saturating_sub(out.evals);
        if out.f > PENALTY && remaining > 9 {
            let polish = nelder_mead(
                obj,
                out.x,
                POLISH_STEP.min(step),
                remaining,
                config.tol_simplex,
                config.tol_value,
            );
            if polish.f >= out.f {
                out = RunOutcome {
                    evals: out.evals + polish.evals,
                    ..polish
                };
            } else {
                out.evals += polish.evals;
            }
        }
        evaluations += out.evals;

        if out.f > PENALTY {
            let angles = MeasurementAngles(out.x).canonical();
            if let Some(v) = feasible_cp(rho, &angles.to_settings(), config.min_joint) {
                if best.as_ref().map_or(true, |(b, _, _)| v > *b) {
                    best = Some((v, angles, out.converged));
                }
            }
        }
        restart_values.push(best.as_ref().map_or(f64::NEG_INFINITY, |b| b.0));
        if best.as_ref().is_some_and(|b| b.0 >= ALGEBRAIC_MAX - config.tol_value) {
            break;
        }
    }

    let (best_value, best_angles, converged) = best.ok_or(Error::OptimizerFailed {
        restarts: restarts_used,
    })?;
    Ok(OptResult {
        best_value,
        best_angles,
        restarts_used,
        evaluations,
        converged,
        restart_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgi::{cp_eval, BOUND_SCENARIO1};
    use crate::measurements::canonical_gghz_settings;
    use crate::states::{gghz, ghz, zero_state, GghzParams};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn fast_objective_matches_cp_eval() {
        let psi = gghz(GghzParams::new(0.7).unwrap());
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps.copy_from_slice(psi.amplitudes());
        let obj = PureObjective {
            psi: amps,
            min_joint: CONDITIONING_EPS,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = random_angles(&mut rng);
            let expect = cp_eval(&psi.density(), &MeasurementAngles(a).to_settings())
                .unwrap()
                .value;
            assert!((obj.value(&a) - expect).abs() < 1e-12);
            let mixed = MixedObjective {
                rho: &psi.density(),
                min_joint: CONDITIONING_EPS,
            }
            .value(&a);
            assert!((mixed - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn seeded_at_canonical_angles() {
        let s = canonical_gghz_settings(FRAC_PI_4).unwrap();
        let cfg = OptConfig {
            restarts: 1,
            initial: Some(MeasurementAngles::from_settings(&s)),
            ..default_config()
        };
        let r = maximize_cp(&ghz().density(), &cfg).unwrap();
        assert!((r.best_value - 4.0).abs() < 1e-9);
        assert!(r.evaluations < 2000);
    }

    #[test]
    fn gghz_reaches_threshold() {
        let rho = gghz(GghzParams::new(0.5).unwrap()).density();
        let r = maximize_cp(&rho, &default_config()).unwrap();
        assert!(r.best_value >= 3.99, "{}", r.best_value);
        assert!(r.best_angles.is_canonical());
    }

    #[test]
    fn product_state_stays_below_bound() {
        let r = maximize_cp(&zero_state().density(), &default_config()).unwrap();
        assert!(r.best_value <= BOUND_SCENARIO1 + 1e-6);
        assert!(r.restart_values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let rho = gghz(GghzParams::new(1.1).unwrap()).density();
        let cfg = OptConfig {
            seed: 17,
            restarts: 4,
            ..default_config()
        };
        assert_eq!(maximize_cp(&rho, &cfg).unwrap(), maximize_cp(&rho, &cfg).unwrap());
    }

    #[test]
    fn soundness_of_reported_value() {
        let rho = gghz(GghzParams::new(0.3).unwrap()).density();
        let r = maximize_cp(&rho, &OptConfig { restarts: 3, ..default_config() }).unwrap();
        let v = cp_eval(&rho, &r.best_angles.to_settings()).unwrap().value;
        assert!((v - r.best_value).abs() <= 1e-12);
    }

    #[test]
    fn budget_is_respected() {
        let rho = zero_state().density();
        let cfg = OptConfig {
            restarts: 3,
            max_evals: 50,
            ..default_config()
        };
        let r = maximize_cp(&rho, &cfg).unwrap();
        // a step may overrun the budget by at most one shrink
        assert!(r.evaluations <= 3 * (50 + 8));
    }

    #[test]
    fn rejects_wrong_dims() {
        let rho = DensityMatrix::maximally_mixed(vec![4, 2]);
        assert!(matches!(maximize_cp(&rho, &default_config()), Err(Error::Dimension(_))));
    }

    #[test]
    fn mixed_state_path() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2, 2]);
        let r = maximize_cp(&rho, &OptConfig { restarts: 2, max_evals: 300, ..default_config() }).unwrap();
        assert!((r.best_value - 2.0).abs() < 1e-12);
    }
}
