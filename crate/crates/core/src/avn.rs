//! All-versus-nothing steering arguments.
//!
//! Every normalised conditional state must be pure for the argument to
//! apply. A pure state only decomposes into itself, so each distinct
//! conditional state forces an ensemble member carrying at least the largest
//! weight it receives under any single setting. The ensemble then has trace
//! `Σ_ψ max_{x,y} w_ψ(x,y)`, which equals 1 exactly when a local model fits.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::assemblage::{
    assemblage_1sdi, assemblage_2sdi, outcome_setting_tuples, Assemblage1SDI, Assemblage2SDI,
    CONDITIONING_EPS,
};
use crate::error::{Error, Result};
use crate::measurements::{Observable, SettingsTriple};
use crate::qcore::{purity, ComplexMatrix, PureState, PHYSICAL_TOL, STRUCTURAL_TOL};
use crate::states::{GghzParams, WClassParams};

/// Unnormalised elements closer than this (max entry) are reported as coinciding.
pub const COINCIDENCE_TOL: f64 = 1e-10;

/// Normalised states with `‖ρ - σ‖²_F` below this are the same state.
/// For pure states this is fidelity above `1 - 1e-9`.
const SAME_STATE_TOL: f64 = 2.0 * PHYSICAL_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "1sdi")]
    OneSided,
    #[serde(rename = "2sdi")]
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AvnReason {
    /// Some conditional state is mixed; the argument does not apply.
    MixedConditional,
    /// The forced ensemble has unit trace, so no contradiction arises.
    LhsConsistent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LhsMember {
    pub weight: f64,
    /// Normalised hidden state.
    pub state: Vec<[f64; 2]>,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LhsEnsemble {
    pub members: Vec<LhsMember>,
}

impl LhsEnsemble {
    pub fn trace(&self) -> f64 {
        self.members.iter().map(|m| m.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvnReport {
    pub scenario: Scenario,
    pub all_pure: bool,
    pub distinct_count: usize,
    /// `Σ Tr σ` over every element.
    pub lhs_trace_sum: f64,
    /// Trace of the forced ensemble.
    pub ensemble_trace: f64,
    /// `[ensemble_trace, lhs_trace_sum / settings_count]`, the "n = 1" pair.
    pub contradiction: [f64; 2],
    pub holds: bool,
    pub reason: Option<AvnReason>,
    /// Pairs of element indices whose unnormalised operators coincide.
    pub coincidences: Vec<[usize; 2]>,
    pub ensemble: LhsEnsemble,
}

/// Element with its setting index; `setting` groups elements whose
/// weights sum to one.
struct Element<'a> {
    setting: usize,
    sigma: &'a ComplexMatrix,
}

fn flatten(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

fn analyze(scenario: Scenario, elements: &[Element<'_>], settings_count: usize) -> AvnReport {
    let lhs_trace_sum: f64 = elements.iter().map(|e| e.sigma.trace().re).sum();

    let mut all_pure = true;
    // (representative, per-setting weight)
    let mut clusters: Vec<(ComplexMatrix, Vec<f64>)> = Vec::new();
    for e in elements {
        let w = e.sigma.trace().re;
        if w <= CONDITIONING_EPS {
            continue;
        }
        let rho = e.sigma.scale_real(1.0 / w);
        if (purity(&rho) - 1.0).abs() > PHYSICAL_TOL {
            all_pure = false;
        }
        let found = clusters.iter_mut().find(|(rep, _)| {
            let d = (rep - &rho).frobenius_norm();
            d * d < SAME_STATE_TOL
        });
        match found {
            Some((_, weights)) => weights[e.setting] += w,
            None => {
                let mut weights = vec![0.0; settings_count];
                weights[e.setting] = w;
                clusters.push((rho, weights));
            }
        }
    }

    let ensemble = LhsEnsemble {
        members: clusters
            .iter()
            .map(|(rep, weights)| LhsMember {
                weight: weights.iter().cloned().fold(0.0, f64::max),
                state: flatten(rep),
                dim: rep.rows(),
            })
            .collect(),
    };
    let ensemble_trace = ensemble.trace();
    let normalised = lhs_trace_sum / settings_count as f64;

    let mut coincidences = Vec::new();
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            if elements[i].sigma.max_abs_diff(elements[j].sigma) <= COINCIDENCE_TOL {
                coincidences.push([i, j]);
            }
        }
    }

    let gap = (ensemble_trace - normalised).abs() > 0.5;
    let holds = all_pure && gap;
    let reason = if !all_pure {
        Some(AvnReason::MixedConditional)
    } else if !gap {
        Some(AvnReason::LhsConsistent)
    } else {
        None
    };
    AvnReport {
        scenario,
        all_pure,
        distinct_count: clusters.len(),
        lhs_trace_sum,
        ensemble_trace,
        contradiction: [ensemble_trace, normalised],
        holds,
        reason,
        coincidences,
        ensemble,
    }
}

/// Analysis of a two-sided assemblage; elements are indexed in
/// [`outcome_setting_tuples`] order.
pub fn avn_from_assemblage_2sdi(asm: &Assemblage2SDI) -> AvnReport {
    let elements: Vec<Element<'_>> = outcome_setting_tuples()
        .map(|(a, b, x, y)| Element {
            setting: (x * 2 + y) as usize,
            sigma: asm.element(a, b, x, y),
        })
        .collect();
    analyze(Scenario::TwoSided, &elements, 4)
}

/// Elements indexed as `x * 2 + a`.
pub fn avn_from_assemblage_1sdi(asm: &Assemblage1SDI) -> AvnReport {
    let elements: Vec<Element<'_>> = (0..2u8)
        .flat_map(|x| (0..2u8).map(move |a| (a, x)))
        .map(|(a, x)| Element {
            setting: x as usize,
            sigma: asm.element(a, x),
        })
        .collect();
    analyze(Scenario::OneSided, &elements, 2)
}

fn require_three_qubits(state: &PureState) -> Result<()> {
    if state.dims() != [2, 2, 2] {
        return Err(Error::Dimension(format!(
            "expected a three-qubit state, got dims {:?}",
            state.dims()
        )));
    }
    Ok(())
}

fn require_distinct(pair: &[Observable; 2], party: &'static str) -> Result<()> {
    if pair[0].approx_eq(&pair[1], STRUCTURAL_TOL) {
        return Err(Error::IdenticalSettings { party });
    }
    Ok(())
}

pub fn run_avn_2sdi(
    state: &PureState,
    alice: &[Observable; 2],
    bob: &[Observable; 2],
) -> Result<AvnReport> {
    require_three_qubits(state)?;
    require_distinct(alice, "Alice")?;
    require_distinct(bob, "Bob")?;
    let asm = assemblage_2sdi(&state.density(), alice, bob)?;
    Ok(avn_from_assemblage_2sdi(&asm))
}

pub fn run_avn_1sdi(state: &PureState, alice: &[Observable; 2]) -> Result<AvnReport> {
    require_three_qubits(state)?;
    require_distinct(alice, "Alice")?;
    let asm = assemblage_1sdi(&state.density(), alice)?;
    Ok(avn_from_assemblage_1sdi(&asm))
}

/// Convenience for a full settings triple; Charlie's pair is unused.
pub fn run_avn_2sdi_settings(state: &PureState, s: &SettingsTriple) -> Result<AvnReport> {
    run_avn_2sdi(state, &s.alice, &s.bob)
}

/// Which superscript table of the W-class closed form to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WTable {
    /// Labels as printed.
    Printed,
    /// Labels that reproduce the direct computation.
    Corrected,
}

/// `(a, b, x, y) → (k, abcde)` for `|ψ_{w_k}^{abcde}⟩`.
const W_TABLE_PRINTED: [((u8, u8, u8, u8), (u8, [u8; 5])); 16] = [
    ((0, 0, 0, 0), (1, [0, 0, 1, 0, 0])),
    ((0, 1, 0, 0), (1, [1, 1, 0, 0, 1])),
    ((1, 0, 0, 0), (1, [0, 0, 1, 1, 0])),
    ((1, 1, 0, 0), (1, [1, 1, 0, 1, 1])),
    ((0, 0, 0, 1), (2, [0, 1, 1, 0, 0])),
    ((0, 1, 0, 1), (2, [1, 0, 0, 0, 1])),
    ((1, 0, 0, 1), (2, [0, 1, 1, 1, 0])),
    ((1, 1, 0, 1), (2, [1, 0, 0, 1, 1])),
    ((0, 0, 1, 0), (3, [0, 0, 1, 1, 0])),
    ((0, 1, 1, 0), (3, [1, 1, 0, 1, 1])),
    ((1, 0, 1, 0), (3, [0, 0, 1, 0, 0])),
    ((1, 1, 1, 0), (3, [1, 1, 0, 0, 1])),
    ((0, 0, 1, 1), (4, [0, 1, 1, 0, 0])),
    ((0, 1, 1, 1), (4, [1, 0, 0, 1, 1])),
    ((1, 0, 1, 1), (4, [0, 1, 1, 1, 0])),
    ((1, 1, 1, 1), (4, [1, 0, 0, 0, 1])),
];

/// Entries whose printed superscripts disagree with the direct computation.
pub const W_TABLE_ERRATA: [(u8, u8, u8, u8); 2] = [(0, 0, 1, 1), (1, 0, 1, 1)];

pub fn w_table_entry(table: WTable, a: u8, b: u8, x: u8, y: u8) -> (u8, [u8; 5]) {
    let (_, mut entry) = *W_TABLE_PRINTED
        .iter()
        .find(|(key, _)| *key == (a, b, x, y))
        .expect("table covers every binary tuple");
    if table == WTable::Corrected && (x, y) == (1, 1) && b == 0 {
        // The two b = 0 superscripts of w4 are swapped in print.
        entry.1 = if a == 0 {
            [0, 1, 1, 1, 0]
        } else {
            [0, 1, 1, 0, 0]
        };
    }
    entry
}

fn sign(bit: u8) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unnormalised `√N |ψ_{w_k}^{abcde}⟩` as `(⟨0|·, ⟨1|·)` amplitudes.
pub fn w_closed_form_vector(k: u8, bits: [u8; 5], p: WClassParams) -> [Complex64; 2] {
    let [a, b, c, d, e] = bits;
    let amp = |s: u8, coeff: f64| (2.0 + sign(s) * SQRT_2).sqrt() * coeff;
    let big_a = Complex64::new(amp(a, p.c0), 0.0);
    let big_b = Complex64::new(sign(b) * amp(c, p.c1), 0.0);
    let big_c = Complex64::new(sign(d) * amp(e, p.c2()), 0.0);
    let i = Complex64::new(0.0, 1.0);
    let z = match k {
        1 => big_b + big_c,
        2 => i * big_b + big_c,
        3 => big_b + i * big_c,
        _ => i * (big_b + big_c),
    };
    [z, big_a]
}

/// Normalisation constant as printed.
pub fn w_norm_printed(k: u8, bits: [u8; 5], p: WClassParams) -> f64 {
    let [a, b, c, d, e] = bits;
    let c2s = p.c2() * p.c2();
    let mut n = 2.0
        + SQRT_2 * sign(a) * p.c0 * p.c0
        + SQRT_2 * sign(c) * p.c1 * p.c1
        + SQRT_2 * sign(e) * c2s;
    if k == 1 || k == 4 {
        n += 2.0
            * (SQRT_2 * sign(c) + 2.0).sqrt()
            * (SQRT_2 * sign(e) + 2.0).sqrt()
            * sign(b)
            * sign(d)
            * c2s.sqrt();
    }
    n
}

/// Normalisation constant of the vector; the `w1`, `w4` cross term carries `c1 c2`.
pub fn w_norm(k: u8, bits: [u8; 5], p: WClassParams) -> f64 {
    let [a, b, c, d, e] = bits;
    let c2s = p.c2() * p.c2();
    let mut n = 2.0
        + SQRT_2 * sign(a) * p.c0 * p.c0
        + SQRT_2 * sign(c) * p.c1 * p.c1
        + SQRT_2 * sign(e) * c2s;
    if k == 1 || k == 4 {
        n += 2.0
            * (SQRT_2 * sign(c) + 2.0).sqrt()
            * (SQRT_2 * sign(e) + 2.0).sqrt()
            * sign(b)
            * sign(d)
            * p.c1
            * p.c2();
    }
    n
}

/// W-class assemblage under the all-versus-nothing settings, element by
/// element from the closed-form vectors: `σ = N/8 |ψ⟩⟨ψ|`.
pub fn closed_form_w_assemblage_2sdi_table(p: WClassParams, table: WTable) -> Assemblage2SDI {
    let elements = outcome_setting_tuples()
        .map(|(a, b, x, y)| {
            let (k, bits) = w_table_entry(table, a, b, x, y);
            ComplexMatrix::outer(&w_closed_form_vector(k, bits, p)).scale_real(1.0 / 8.0)
        })
        .collect();
    Assemblage2SDI::from_elements(elements, vec![2, 2, 2]).expect("sixteen 2x2 elements")
}

pub fn closed_form_w_assemblage_2sdi(p: WClassParams) -> Assemblage2SDI {
    closed_form_w_assemblage_2sdi_table(p, WTable::Corrected)
}

fn two_qubit(amps: [Complex64; 4]) -> ComplexMatrix {
    ComplexMatrix::outer(&amps).scale_real(0.5)
}

/// `σ_{a|X_x}` on Bob–Charlie for GGHZ with `X0 = σx`, `X1 = σy`.
pub fn closed_form_gghz_1sdi(p: GghzParams) -> Assemblage1SDI {
    let (s, c) = p.theta.sin_cos();
    let zero = Complex64::new(0.0, 0.0);
    let cc = Complex64::new(c, 0.0);
    let theta = |phase: Complex64| two_qubit([cc, zero, zero, phase * s]);
    let i = Complex64::new(0.0, 1.0);
    let elements = vec![
        theta(Complex64::new(1.0, 0.0)),
        theta(Complex64::new(-1.0, 0.0)),
        theta(-i),
        theta(i),
    ];
    Assemblage1SDI::from_elements(elements, vec![2, 2, 2]).expect("four 4x4 elements")
}

/// `σ_{a|X_x}` on Bob–Charlie for the W class with `X0 = σx`, `X1 = σy`.
pub fn closed_form_w_1sdi(p: WClassParams) -> Assemblage1SDI {
    let zero = Complex64::new(0.0, 0.0);
    let w = |phase: Complex64| {
        two_qubit([
            Complex64::new(p.c2(), 0.0),
            phase * p.c0,
            phase * p.c1,
            zero,
        ])
    };
    let i = Complex64::new(0.0, 1.0);
    let elements = vec![
        w(Complex64::new(1.0, 0.0)),
        w(Complex64::new(-1.0, 0.0)),
        w(i),
        w(-i),
    ];
    Assemblage1SDI::from_elements(elements, vec![2, 2, 2]).expect("four 4x4 elements")
}
