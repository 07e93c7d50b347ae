//! Constructors for the three-party state families, with parameter checks.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{kron_vec, DensityMatrix, PureState, ONE, STRUCTURAL_TOL, ZERO};

pub const THREE_QUBITS: [usize; 3] = [2, 2, 2];

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn basis_index(a: usize, b: usize, c: usize) -> usize {
    (a << 2) | (b << 1) | c
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GghzParams {
    pub theta: f64,
}

impl GghzParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(Error::ProductState(theta));
        }
        Ok(Self { theta })
    }
}

/// `c0|001> + c1|010> + sqrt(1 - c0² - c1²)|100>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WClassParams {
    pub c0: f64,
    pub c1: f64,
}

impl WClassParams {
    pub fn new(c0: f64, c1: f64) -> Result<Self> {
        let s = c0 * c0 + c1 * c1;
        if !c0.is_finite() || !c1.is_finite() || s > 1.0 + STRUCTURAL_TOL {
            return Err(Error::InvalidParameter(format!(
                "W-class amplitudes need c0² + c1² <= 1, got {s}"
            )));
        }
        Ok(Self { c0, c1 })
    }

    pub fn c2(&self) -> f64 {
        (1.0 - self.c0 * self.c0 - self.c1 * self.c1).max(0.0).sqrt()
    }

    /// False on the faces where one of the three amplitudes vanishes.
    pub fn is_genuinely_entangled(&self) -> bool {
        self.c0.abs() > STRUCTURAL_TOL
            && self.c1.abs() > STRUCTURAL_TOL
            && (1.0 - self.c0 * self.c0 - self.c1 * self.c1) > STRUCTURAL_TOL
    }
}

/// `sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100> + sqrt(d)|000>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralWParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GeneralWParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let parts = [a, b, c, d];
        if parts.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "W-class weights must be nonnegative, got {parts:?}"
            )));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidParameter(format!(
                "W-class weights must sum to 1, got {sum}"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

/// `cos δ|000> + sin δ e^{iφ}|φA φB φC>` with `|φK> = cos κ|0> + sin κ|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhzClassParams {
    pub delta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl GhzClassParams {
    pub fn new(delta: f64, phi: f64, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            delta,
            phi,
            alpha,
            beta,
            gamma,
        };
        if p.as_array().iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "GHZ-class angles must be finite, got {:?}",
                p.as_array()
            )));
        }
        Ok(p)
    }

    /// The GGHZ reduction point `δ = θ, φ = 0, α = β = γ = π/2`.
    pub fn gghz_point(theta: f64) -> Self {
        Self {
            delta: theta,
            phi: 0.0,
            alpha: FRAC_PI_2,
            beta: FRAC_PI_2,
            gamma: FRAC_PI_2,
        }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.delta, self.phi, self.alpha, self.beta, self.gamma]
    }

    /// Angles reduced into `[0, 2π)`.
    pub fn effective(&self) -> Self {
        let m = |x: f64| x.rem_euclid(TAU);
        Self {
            delta: m(self.delta),
            phi: m(self.phi),
            alpha: m(self.alpha),
            beta: m(self.beta),
            gamma: m(self.gamma),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Visibility(f64);

impl Visibility {
    pub fn new(v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "visibility must lie in [0, 1], got {v}"
            )));
        }
        Ok(Self(v))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Visibility {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Visibility> for f64 {
    fn from(v: Visibility) -> f64 {
        v.0
    }
}

/// One GGHZ block `cos θ|2u,2v,0> + sin θ|2u+1,2v+1,1>` of a direct sum.
///
/// When no block carries `u`/`v`, block `k` sits at `(k, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectSumBlock {
    pub weight: f64,
    pub theta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
}

impl DirectSumBlock {
    pub fn diagonal(weight: f64, theta: f64) -> Self {
        Self {
            weight,
            theta,
            u: None,
            v: None,
        }
    }

    pub fn at(weight: f64, theta: f64, u: usize, v: usize) -> Self {
        Self {
            weight,
            theta,
            u: Some(u),
            v: Some(v),
        }
    }
}

/// A block resolved to its position on Alice's and Bob's sides.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlacedBlock {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectSumSpec {
    pub blocks: Vec<DirectSumBlock>,
}

impl DirectSumSpec {
    pub fn new(blocks: Vec<DirectSumBlock>) -> Result<Self> {
        let spec = Self { blocks };
        spec.placed()?;
        Ok(spec)
    }

    pub fn diagonal(blocks: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            blocks
                .iter()
                .map(|&(w, t)| DirectSumBlock::diagonal(w, t))
                .collect(),
        )
    }

    /// Validated block positions plus the number of blocks on Alice's and Bob's side.
    pub fn placed(&self) -> Result<(Vec<PlacedBlock>, usize, usize)> {
        if self.blocks.is_empty() {
            return Err(Error::EmptySpec);
        }
        let explicit = self.blocks.iter().filter(|b| b.u.is_some() || b.v.is_some()).count();
        if explicit != 0 && explicit != self.blocks.len() {
            return Err(Error::InvalidParameter(
                "either every block or no block carries (u, v)".into(),
            ));
        }
        let mut placed = Vec::with_capacity(self.blocks.len());
        for (k, b) in self.blocks.iter().enumerate() {
            let (u, v) = if explicit == 0 {
                (k, k)
            } else {
                match (b.u, b.v) {
                    (Some(u), Some(v)) => (u, v),
                    _ => {
                        return Err(Error::InvalidParameter(format!(
                            "block {k} needs both u and v"
                        )))
                    }
                }
            };
            if !(b.weight >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "block weight must be nonnegative, got {}",
                    b.weight
                )));
            }
            GghzParams::new(b.theta)?;
            if placed.iter().any(|p: &PlacedBlock| p.u == u && p.v == v) {
                return Err(Error::InvalidParameter(format!("block ({u}, {v}) repeated")));
            }
            placed.push(PlacedBlock {
                u,
                v,
                weight: b.weight,
                theta: b.theta,
            });
        }
        let total: f64 = placed.iter().map(|b| b.weight).sum();
        if (total - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidParameter(format!(
                "block weights must sum to 1, got {total}"
            )));
        }
        let n_a = placed.iter().map(|b| b.u).max().unwrap() + 1;
        let n_b = placed.iter().map(|b| b.v).max().unwrap() + 1;
        for u in 0..n_a {
            if !placed.iter().any(|b| b.u == u) {
                return Err(Error::InvalidParameter(format!("Alice block {u} is empty")));
            }
        }
        for v in 0..n_b {
            if !placed.iter().any(|b| b.v == v) {
                return Err(Error::InvalidParameter(format!("Bob block {v} is empty")));
            }
        }
        Ok((placed, n_a, n_b))
    }

    pub fn dims(&self) -> Result<[usize; 3]> {
        let (_, n_a, n_b) = self.placed()?;
        Ok([2 * n_a, 2 * n_b, 2])
    }
}

pub fn gghz(p: GghzParams) -> PureState {
    let mut amps = vec![ZERO; 8];
    amps[0] = re(p.theta.cos());
    amps[7] = re(p.theta.sin());
    PureState::new(amps, THREE_QUBITS.to_vec()).expect("GGHZ amplitudes are normalised")
}

pub fn ghz() -> PureState {
    gghz(GghzParams {
        theta: std::f64::consts::FRAC_PI_4,
    })
}

pub fn w_class(p: WClassParams) -> PureState {
    let mut amps = vec![ZERO; 8];
    amps[basis_index(0, 0, 1)] = re(p.c0);
    amps[basis_index(0, 1, 0)] = re(p.c1);
    amps[basis_index(1, 0, 0)] = re(p.c2());
    PureState::normalized(amps, THREE_QUBITS.to_vec()).expect("W-class amplitudes are normalised")
}

pub fn general_w(p: GeneralWParams) -> PureState {
    let mut amps = vec![ZERO; 8];
    amps[basis_index(0, 0, 1)] = re(p.a.sqrt());
    amps[basis_index(0, 1, 0)] = re(p.b.sqrt());
    amps[basis_index(1, 0, 0)] = re(p.c.sqrt());
    amps[basis_index(0, 0, 0)] = re(p.d.sqrt());
    PureState::normalized(amps, THREE_QUBITS.to_vec()).expect("simplex weights are normalised")
}

/// Fails only when the two branches cancel exactly.
pub fn ghz_class(p: GhzClassParams) -> Result<PureState> {
    let local = |k: f64| [re(k.cos()), re(k.sin())];
    let branch = kron_vec(&kron_vec(&local(p.alpha), &local(p.beta)), &local(p.gamma));
    let phase = Complex64::from_polar(p.delta.sin(), p.phi);
    let mut amps: Vec<Complex64> = branch.iter().map(|z| z * phase).collect();
    amps[0] += re(p.delta.cos());
    // The two branches overlap unless the local states are orthogonal to |0>.
    PureState::normalized(amps, THREE_QUBITS.to_vec())
}

/// `V |GHZ><GHZ| + (1 - V) I/8`.
pub fn noisy_ghz(v: Visibility) -> DensityMatrix {
    ghz()
        .density()
        .mix(&DensityMatrix::maximally_mixed(THREE_QUBITS.to_vec()), v.get())
        .expect("same dimensions")
}

pub fn direct_sum_gghz(spec: &DirectSumSpec) -> Result<PureState> {
    let (blocks, n_a, n_b) = spec.placed()?;
    let (d_a, d_b) = (2 * n_a, 2 * n_b);
    let idx = |a: usize, b: usize, c: usize| (a * d_b + b) * 2 + c;
    let mut amps = vec![ZERO; d_a * d_b * 2];
    for blk in &blocks {
        let s = blk.weight.sqrt();
        amps[idx(2 * blk.u, 2 * blk.v, 0)] = re(s * blk.theta.cos());
        amps[idx(2 * blk.u + 1, 2 * blk.v + 1, 1)] = re(s * blk.theta.sin());
    }
    PureState::normalized(amps, vec![d_a, d_b, 2])
}

/// Pure qubit state with the given Bloch direction.
pub fn qubit_from_bloch(n: [f64; 3]) -> Result<[Complex64; 2]> {
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::ZeroVector);
    }
    let theta = (n[2] / len).clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    Ok([
        re((theta / 2.0).cos()),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
}

/// Fully separable pure state from three Bloch directions.
pub fn product_state(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> Result<PureState> {
    let v = kron_vec(
        &kron_vec(&qubit_from_bloch(a)?, &qubit_from_bloch(b)?),
        &qubit_from_bloch(c)?,
    );
    PureState::normalized(v, THREE_QUBITS.to_vec())
}

/// `|000>`.
pub fn zero_state() -> PureState {
    let mut amps = vec![ZERO; 8];
    amps[0] = ONE;
    PureState::new(amps, THREE_QUBITS.to_vec()).unwrap()
}

/// State description as read from configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum StateSpec {
    Gghz {
        theta: f64,
    },
    Wclass {
        c0: f64,
        c1: f64,
    },
    GeneralW {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    GhzClass {
        delta: f64,
        phi: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    NoisyGhz {
        v: f64,
    },
    DirectSum {
        blocks: Vec<DirectSumBlock>,
    },
    /// Fully separable state given by three Bloch directions.
    Product {
        a: [f64; 3],
        b: [f64; 3],
        c: [f64; 3],
    },
    /// Explicit amplitudes as `[re, im]` pairs.
    Amplitudes {
        dims: Vec<usize>,
        amplitudes: Vec<[f64; 2]>,
    },
}

impl StateSpec {
    pub fn family(&self) -> &'static str {
        match self {
            Self::Gghz { .. } => "gghz",
            Self::Wclass { .. } => "wclass",
            Self::GeneralW { .. } => "general_w",
            Self::GhzClass { .. } => "ghz_class",
            Self::NoisyGhz { .. } => "noisy_ghz",
            Self::DirectSum { .. } => "direct_sum",
            Self::Product { .. } => "product",
            Self::Amplitudes { .. } => "amplitudes",
        }
    }

    /// The `params` object alone.
    pub fn params_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("state spec serialises");
        v.get_mut("params").map(|p| p.take()).unwrap_or_default()
    }

    /// `None` for mixed families.
    pub fn pure_state(&self) -> Result<Option<PureState>> {
        Ok(Some(match *self {
            Self::Gghz { theta } => gghz(GghzParams::new(theta)?),
            Self::Wclass { c0, c1 } => w_class(WClassParams::new(c0, c1)?),
            Self::GeneralW { a, b, c, d } => general_w(GeneralWParams::new(a, b, c, d)?),
            Self::GhzClass {
                delta,
                phi,
                alpha,
                beta,
                gamma,
            } => ghz_class(GhzClassParams::new(delta, phi, alpha, beta, gamma)?)?,
            Self::NoisyGhz { .. } => return Ok(None),
            Self::DirectSum { ref blocks } => direct_sum_gghz(&DirectSumSpec::new(blocks.clone())?)?,
            Self::Product { a, b, c } => product_state(a, b, c)?,
            Self::Amplitudes {
                ref dims,
                ref amplitudes,
            } => PureState::new(
                amplitudes.iter().map(|z| Complex64::new(z[0], z[1])).collect(),
                dims.clone(),
            )?,
        }))
    }

    pub fn density(&self) -> Result<DensityMatrix> {
        match *self {
            Self::NoisyGhz { v } => Ok(noisy_ghz(Visibility::new(v)?)),
            _ => Ok(self
                .pure_state()?
                .expect("every non-noisy family is pure")
                .density()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn close(a: Complex64, b: f64) -> bool {
        (a - re(b)).norm() < 1e-12
    }

    #[test]
    fn gghz_at_pi_over_4_is_ghz() {
        let s = gghz(GghzParams::new(FRAC_PI_4).unwrap());
        assert!(close(s.amplitudes()[0], FRAC_1_SQRT_2));
        assert!(close(s.amplitudes()[7], FRAC_1_SQRT_2));
        assert!(s.amplitudes()[1..7].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn gghz_normalised() {
        let s = gghz(GghzParams::new(0.3).unwrap());
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gghz_at_pi_over_3() {
        let s = gghz(GghzParams::new(FRAC_PI_3).unwrap());
        assert!(close(s.amplitudes()[0], 0.5));
        assert!(close(s.amplitudes()[7], 3f64.sqrt() / 2.0));
    }

    #[test]
    fn gghz_boundary_rejected() {
        assert!(matches!(GghzParams::new(0.0), Err(Error::ProductState(_))));
        assert!(matches!(GghzParams::new(FRAC_PI_2), Err(Error::ProductState(_))));
        assert!(GghzParams::new(-0.1).is_err());
    }

    #[test]
    fn w_symmetric_point() {
        let c = 1.0 / 3f64.sqrt();
        let p = WClassParams::new(c, c).unwrap();
        let s = w_class(p);
        for k in [1, 2, 4] {
            assert!(close(s.amplitudes()[k], c));
        }
        assert!(p.is_genuinely_entangled());
    }

    #[test]
    fn w_corner_is_product() {
        let p = WClassParams::new(1.0, 0.0).unwrap();
        assert!(!p.is_genuinely_entangled());
        let s = w_class(p);
        assert!(close(s.amplitudes()[1], 1.0));
    }

    #[test]
    fn w_third_amplitude() {
        let s = w_class(WClassParams::new(0.6, 0.48).unwrap());
        assert!(close(s.amplitudes()[4], (1.0f64 - 0.36 - 0.2304).sqrt()));
        assert!((s.amplitudes()[4].re - 0.64).abs() < 1e-12);
        assert!(WClassParams::new(0.9, 0.9).is_err());
    }

    #[test]
    fn general_w_examples() {
        let corner = general_w(GeneralWParams::new(0.0, 0.0, 0.0, 1.0).unwrap());
        assert!(close(corner.amplitudes()[0], 1.0));
        let uniform = general_w(GeneralWParams::new(0.25, 0.25, 0.25, 0.25).unwrap());
        for k in [0, 1, 2, 4] {
            assert!(close(uniform.amplitudes()[k], 0.5));
        }
        let p = GeneralWParams::new(0.1, 0.2, 0.3, 0.4).unwrap();
        assert!((general_w(p).norm() - 1.0).abs() < 1e-12);
        assert!(GeneralWParams::new(0.5, 0.5, 0.5, -0.5).is_err());
        assert!(GeneralWParams::new(0.5, 0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn ghz_class_reduces_to_gghz() {
        for theta in [0.2, FRAC_PI_6, 1.1] {
            let a = ghz_class(GhzClassParams::gghz_point(theta)).unwrap();
            let b = gghz(GghzParams::new(theta).unwrap());
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ghz_class_degenerate_points() {
        let s = ghz_class(GhzClassParams::new(0.0, 0.3, 0.1, 0.2, 0.3).unwrap()).unwrap();
        assert!(close(s.amplitudes()[0], 1.0));
        // both branches are |000>: (cos δ + sin δ)|000> renormalises to |000>
        let s = ghz_class(GhzClassParams::new(FRAC_PI_4, 0.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert!(close(s.amplitudes()[0], 1.0));
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_class_effective_angles() {
        let p = GhzClassParams::new(7.0, -1.0, 0.0, TAU, 1.0).unwrap().effective();
        assert!((p.delta - (7.0 - TAU)).abs() < 1e-12);
        assert!((p.phi - (TAU - 1.0)).abs() < 1e-12);
        assert!(p.beta.abs() < 1e-12);
    }

    #[test]
    fn noisy_ghz_limits() {
        let pure = noisy_ghz(Visibility::new(1.0).unwrap());
        assert!(pure.matrix().max_abs_diff(ghz().density().matrix()) < 1e-15);
        let white = noisy_ghz(Visibility::new(0.0).unwrap());
        assert!(white.matrix().max_abs_diff(&crate::qcore::ComplexMatrix::identity(8).scale_real(0.125)) < 1e-15);
        assert!(Visibility::new(1.5).is_err());
    }

    #[test]
    fn direct_sum_single_block_embeds_gghz() {
        let spec = DirectSumSpec::diagonal(&[(1.0, 0.7)]).unwrap();
        let s = direct_sum_gghz(&spec).unwrap();
        assert_eq!(s.dims(), &[2, 2, 2]);
        assert_eq!(s, gghz(GghzParams::new(0.7).unwrap()));
    }

    #[test]
    fn direct_sum_two_blocks() {
        let spec = DirectSumSpec::diagonal(&[(0.5, FRAC_PI_4), (0.5, FRAC_PI_6)]).unwrap();
        let s = direct_sum_gghz(&spec).unwrap();
        assert_eq!(s.dims(), &[4, 4, 2]);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        // |2,2,0> carries sqrt(1/2) cos(π/6)
        let idx = (2 * 4 + 2) * 2;
        assert!(close(s.amplitudes()[idx], FRAC_1_SQRT_2 * FRAC_PI_6.cos()));
    }

    #[test]
    fn direct_sum_rejects_bad_specs() {
        assert!(DirectSumSpec::diagonal(&[(0.5, 0.3), (0.4, 0.3)]).is_err());
        assert!(matches!(DirectSumSpec::new(vec![]), Err(Error::EmptySpec)));
        assert!(DirectSumSpec::new(vec![DirectSumBlock::at(1.0, 0.3, 1, 0)]).is_err());
        assert!(DirectSumSpec::new(vec![
            DirectSumBlock::at(0.5, 0.3, 0, 0),
            DirectSumBlock::diagonal(0.5, 0.3)
        ])
        .is_err());
    }

    #[test]
    fn state_spec_json_round_trip() {
        let json = r#"{"family":"gghz","params":{"theta":1.0}}"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec, StateSpec::Gghz { theta: 1.0 });
        assert_eq!(spec.family(), "gghz");
        assert_eq!(spec.params_json()["theta"], 1.0);
        let json = r#"{"family":"direct_sum","params":{"blocks":[{"weight":1.0,"theta":0.5}]}}"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.density().unwrap().dims(), &[2, 2, 2]);
        let json = r#"{"family":"noisy_ghz","params":{"v":0.5}}"#;
        let spec: StateSpec = serde_json::from_str(json).unwrap();
        assert!(spec.pure_state().unwrap().is_none());
    }

    #[test]
    fn product_state_from_bloch() {
        let s = product_state([0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        assert!(close(s.amplitudes()[0], FRAC_1_SQRT_2));
        assert!(close(s.amplitudes()[1], FRAC_1_SQRT_2));
        assert!(product_state([0.0; 3], [0.0, 0.0, 1.0], [0.0, 0.0, 1.0]).is_err());
    }
}
