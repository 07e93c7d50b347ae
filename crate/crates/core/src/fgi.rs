//! The fine-grained steering functional `CP` and the checks built around it.

use std::f64::consts::SQRT_2;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::assemblage::{
    assemblage_2sdi_with, conditional_prob, correlation_tensor_with, tensor_from_assemblage,
    Assemblage2SDI, CorrelationTensor, CONDITIONING_EPS,
};
use crate::error::{Error, Result};
use crate::measurements::{
    block_settings, BlockSettings, Observable, SettingsTriple, TripartiteSettings,
};
use crate::qcore::{bloch_projector, ComplexMatrix, DensityMatrix, PureState, PHYSICAL_TOL};
use crate::states::{direct_sum_gghz, noisy_ghz, DirectSumSpec, Visibility};

pub const BOUND_SCENARIO1: f64 = 2.0 + SQRT_2;
pub const BOUND_SCENARIO2: f64 = 3.0;
pub const ALGEBRAIC_MAX: f64 = 4.0;

/// `(2+√2, 3, 4)`: known-settings LHS bound, unknown-settings LHS bound,
/// algebraic maximum.
pub fn lhs_bounds() -> (f64, f64, f64) {
    (BOUND_SCENARIO1, BOUND_SCENARIO2, ALGEBRAIC_MAX)
}

/// Setting triples `(x, y, z)` of the four terms, in label order.
pub const TERM_SETTINGS: [(u8, u8, u8); 4] = [(0, 0, 0), (0, 1, 1), (1, 1, 0), (1, 0, 1)];

/// Outcome bits for the general functional: term `k` is
/// `P(c_{Z_z} | a[k]_{X_x} b[k]_{Y_y})` with `(x, y, z) = TERM_SETTINGS[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeLabels {
    pub a: [u8; 4],
    pub b: [u8; 4],
    pub c: u8,
}

impl OutcomeLabels {
    pub fn new(a: [u8; 4], b: [u8; 4], c: u8) -> Result<Self> {
        if a.iter().chain(&b).chain(std::iter::once(&c)).any(|&v| v > 1) {
            return Err(Error::InvalidParameter("outcome labels must be 0 or 1".into()));
        }
        Ok(Self { a, b, c })
    }

    /// The labels of the steering inequality itself.
    pub fn standard() -> Self {
        Self {
            a: [1, 0, 0, 0],
            b: [1, 1, 1, 1],
            c: 0,
        }
    }
}

impl Default for OutcomeLabels {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpTerm {
    pub x: u8,
    pub y: u8,
    pub z: u8,
    pub a: u8,
    pub b: u8,
    pub c: u8,
    /// `None` when the conditioning event has probability ≤ 1e-12.
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpReport {
    /// Sum of the attained terms.
    pub value: f64,
    pub terms: Vec<CpTerm>,
    pub bound_scenario1: f64,
    pub bound_scenario2: f64,
    pub algebraic_max: f64,
    pub violates_s1: bool,
    pub violates_s2: bool,
    pub maximal: bool,
    /// Indices into `terms` whose conditioning event never happens.
    pub unattained_terms: Vec<usize>,
    pub charlie_mub: bool,
}

impl CpReport {
    fn from_terms(terms: Vec<CpTerm>, charlie_mub: bool) -> Self {
        let value: f64 = terms.iter().filter_map(|t| t.value).sum();
        let unattained_terms: Vec<usize> = terms
            .iter()
            .enumerate()
            .filter(|(_, t)| t.value.is_none())
            .map(|(k, _)| k)
            .collect();
        let attained = unattained_terms.is_empty();
        Self {
            value,
            terms,
            bound_scenario1: BOUND_SCENARIO1,
            bound_scenario2: BOUND_SCENARIO2,
            algebraic_max: ALGEBRAIC_MAX,
            violates_s1: attained && value > BOUND_SCENARIO1 + PHYSICAL_TOL,
            violates_s2: attained && value > BOUND_SCENARIO2 + PHYSICAL_TOL,
            maximal: attained && value >= ALGEBRAIC_MAX - PHYSICAL_TOL,
            unattained_terms,
            charlie_mub,
        }
    }

    pub fn is_attained(&self) -> bool {
        self.unattained_terms.is_empty()
    }

    /// The value, or the first undefined conditional as an error.
    pub fn attained_value(&self) -> Result<f64> {
        match self.unattained_terms.first() {
            None => Ok(self.value),
            Some(&k) => {
                let t = &self.terms[k];
                Err(Error::UndefinedConditional {
                    a: t.a,
                    b: t.b,
                    x: t.x,
                    y: t.y,
                    probability: 0.0,
                })
            }
        }
    }
}

/// Whether Charlie's settings must be mutually unbiased.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MubPolicy {
    #[default]
    Enforce,
    /// Proceed and flag the report.
    Warn,
}

pub fn cp_from_tensor(t: &CorrelationTensor, labels: &OutcomeLabels, charlie_mub: bool) -> CpReport {
    let terms = TERM_SETTINGS
        .iter()
        .enumerate()
        .map(|(k, &(x, y, z))| {
            let (a, b, c) = (labels.a[k], labels.b[k], labels.c);
            CpTerm {
                x,
                y,
                z,
                a,
                b,
                c,
                value: conditional_prob(t, c, z, a, x, b, y).ok(),
            }
        })
        .collect();
    CpReport::from_terms(terms, charlie_mub)
}

pub fn cp_with(
    rho: &DensityMatrix,
    s: &TripartiteSettings,
    labels: &OutcomeLabels,
    policy: MubPolicy,
) -> Result<CpReport> {
    let mub = s.charlie_is_mub();
    if !mub && policy == MubPolicy::Enforce {
        return Err(Error::NotMutuallyUnbiased);
    }
    let t = correlation_tensor_with(rho, s)?;
    Ok(cp_from_tensor(&t, labels, mub))
}

/// `CP` with the standard outcome labels.
pub fn cp_eval(rho: &DensityMatrix, s: &SettingsTriple) -> Result<CpReport> {
    cp_general(rho, s, &OutcomeLabels::standard())
}

pub fn cp_general(rho: &DensityMatrix, s: &SettingsTriple, labels: &OutcomeLabels) -> Result<CpReport> {
    cp_with(rho, &s.to_tripartite(), labels, MubPolicy::Enforce)
}

/// Whether each of Charlie's four normalised conditionals is the eigenstate CP = 4 requires.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalConditions {
    /// `ϱ_{1,1|X0,Y0}`, `ϱ_{0,1|X1,Y1}` are `(I+σx)/2`;
    /// `ϱ_{0,1|X0,Y1}`, `ϱ_{0,1|X1,Y0}` are `(I+σy)/2`.
    pub conditions: [bool; 4],
    /// Max entry distance to the target, `None` for a zero-weight event.
    pub distances: [Option<f64>; 4],
}

impl MaximalConditions {
    pub fn all(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }
}

pub fn check_maximal_conditions(asm: &Assemblage2SDI) -> MaximalConditions {
    let px = bloch_projector([1.0, 0.0, 0.0], 1.0);
    let py = bloch_projector([0.0, 1.0, 0.0], 1.0);
    let cases: [((u8, u8, u8, u8), &ComplexMatrix); 4] = [
        ((1, 1, 0, 0), &px),
        ((0, 1, 1, 1), &px),
        ((0, 1, 0, 1), &py),
        ((0, 1, 1, 0), &py),
    ];
    let mut conditions = [false; 4];
    let mut distances = [None; 4];
    for (k, ((a, b, x, y), target)) in cases.into_iter().enumerate() {
        if let Some(rho) = asm.normalized(a, b, x, y) {
            let d = rho.max_abs_diff(target);
            distances[k] = Some(d);
            conditions[k] = d <= PHYSICAL_TOL;
        }
    }
    MaximalConditions {
        conditions,
        distances,
    }
}

/// `CP(V)` on a grid plus the crossing of the known-settings bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisyCurve {
    pub points: Vec<(f64, f64)>,
    /// Visibility where `CP(V) = 2+√2`, if the grid brackets it.
    pub threshold: Option<f64>,
}

impl NoisyCurve {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["V", "CP"])?;
        for (v, cp) in &self.points {
            out.write_record([format!("{v:.11e}"), format!("{cp:.11e}")])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn noisy_cp(s: &SettingsTriple, v: f64) -> Result<f64> {
    cp_eval(&noisy_ghz(Visibility::new(v)?), s)?.attained_value()
}

/// Bisection width at which the crossing search stops.
const THRESHOLD_WIDTH: f64 = 1e-13;

pub fn noisy_threshold(s: &SettingsTriple, grid: &[f64]) -> Result<NoisyCurve> {
    let mut points = Vec::with_capacity(grid.len());
    for &v in grid {
        points.push((v, noisy_cp(s, v)?));
    }
    let mut threshold = None;
    for w in points.windows(2) {
        let (v0, f0) = (w[0].0, w[0].1 - BOUND_SCENARIO1);
        let (v1, f1) = (w[1].0, w[1].1 - BOUND_SCENARIO1);
        if f0 == 0.0 {
            threshold = Some(v0);
            break;
        }
        if f0 * f1 < 0.0 || f1 == 0.0 {
            let (mut lo, mut hi, mut flo) = (v0, v1, f0);
            while (hi - lo).abs() > THRESHOLD_WIDTH {
                let mid = 0.5 * (lo + hi);
                let fm = noisy_cp(s, mid)? - BOUND_SCENARIO1;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                } else if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            threshold = Some(0.5 * (lo + hi));
            break;
        }
    }
    Ok(NoisyCurve { points, threshold })
}

/// Grid `start, start+step, …` up to and including `end` (within rounding).
pub fn visibility_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || end < start {
        return Err(Error::InvalidParameter(format!(
            "grid {start}:{end}:{step} must satisfy 0 <= start <= end <= 1 and step > 0"
        )));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| (start + k as f64 * step).min(1.0)).collect())
}

/// Builds the direct-sum state and its block settings and evaluates `CP`.
pub fn verify_direct_sum(spec: &DirectSumSpec) -> Result<CpReport> {
    verify_direct_sum_with(spec, &block_settings(spec)?)
}

pub fn verify_direct_sum_with(spec: &DirectSumSpec, settings: &BlockSettings) -> Result<CpReport> {
    let psi = direct_sum_gghz(spec)?;
    let s = settings.to_tripartite()?;
    let dims = psi.dims();
    if dims[0] != s.dims()[0] || dims[1] != s.dims()[1] {
        return Err(Error::Dimension(format!(
            "state dims {dims:?} do not match block settings {:?}",
            s.dims()
        )));
    }
    cp_with(&psi.density(), &s, &OutcomeLabels::standard(), MubPolicy::Enforce)
}

/// Pure states that factorise across one cut; two-qubit parts list the
/// remaining parties in their natural order.
#[derive(Clone, Debug, PartialEq)]
pub enum Biseparable {
    /// `|ψ⟩_A ⊗ |ψ⟩_BC`.
    A { a: [Complex64; 2], bc: [Complex64; 4] },
    /// `|ψ⟩_B ⊗ |ψ⟩_AC`.
    B { b: [Complex64; 2], ac: [Complex64; 4] },
    /// `|ψ⟩_AB ⊗ |ψ⟩_C`.
    C { ab: [Complex64; 4], c: [Complex64; 2] },
}

fn normalize<const N: usize>(v: [Complex64; N]) -> Result<[Complex64; N]> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(v.map(|z| z / n))
}

impl Biseparable {
    pub fn normalized(self) -> Result<Self> {
        Ok(match self {
            Self::A { a, bc } => Self::A {
                a: normalize(a)?,
                bc: normalize(bc)?,
            },
            Self::B { b, ac } => Self::B {
                b: normalize(b)?,
                ac: normalize(ac)?,
            },
            Self::C { ab, c } => Self::C {
                ab: normalize(ab)?,
                c: normalize(c)?,
            },
        })
    }

    /// The three-qubit state in `A ⊗ B ⊗ C` order.
    pub fn assemble(&self) -> Result<PureState> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    amps[a * 4 + b * 2 + c] = match self {
                        Self::A { a: pa, bc } => pa[a] * bc[b * 2 + c],
                        Self::B { b: pb, ac } => pb[b] * ac[a * 2 + c],
                        Self::C { ab, c: pc } => ab[a * 2 + b] * pc[c],
                    };
                }
            }
        }
        PureState::normalized(amps, vec![2, 2, 2])
    }
}

/// `P(c_z | o_w)` on a two-qubit pure state `|φ⟩_{PC}` where the untrusted
/// party `P` measures `m` and gets `o`.
fn two_party_conditional(
    phi: &[Complex64; 4],
    m: &Observable,
    o: u8,
    charlie: &Observable,
    c: u8,
) -> Option<f64> {
    let pm = m.projector(o);
    let pc = charlie.projector(c);
    // Unnormalised Charlie state: Σ_{i,j} Π[i][j] φ_j ⊗ …
    let mut sigma = ComplexMatrix::zeros(2, 2);
    for r in 0..2 {
        for s in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc += phi[i * 2 + r] * pm[(j, i)] * phi[j * 2 + s].conj();
                }
            }
            sigma[(r, s)] = acc;
        }
    }
    let w = sigma.trace().re;
    if w <= CONDITIONING_EPS {
        return None;
    }
    let mut p = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            p += (pc[(i, j)] * sigma[(j, i)]).re;
        }
    }
    Some(p / w)
}

fn qubit_prob(psi: &[Complex64; 2], o: &Observable, c: u8) -> f64 {
    let p = o.projector(c);
    let mut acc = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            acc += (psi[i].conj() * p[(i, j)] * psi[j]).re;
        }
    }
    acc
}

/// The reduced form `CP` takes on a biseparable input, where the
/// uncorrelated party drops out of every conditional.
pub fn biseparable_cp_forms(input: &Biseparable, s: &SettingsTriple) -> Result<CpReport> {
    let mub = s.charlie_is_mub();
    if !mub {
        return Err(Error::NotMutuallyUnbiased);
    }
    let input = input.clone().normalized()?;
    let labels = OutcomeLabels::standard();
    let terms = TERM_SETTINGS
        .iter()
        .enumerate()
        .map(|(k, &(x, y, z))| {
            let (a, b, c) = (labels.a[k], labels.b[k], labels.c);
            let cz = &s.charlie[z as usize];
            let value = match &input {
                Biseparable::A { bc, .. } => two_party_conditional(bc, &s.bob[y as usize], b, cz, c),
                Biseparable::B { ac, .. } => {
                    two_party_conditional(ac, &s.alice[x as usize], a, cz, c)
                }
                Biseparable::C { c: psi_c, .. } => Some(qubit_prob(psi_c, cz, c)),
            };
            CpTerm {
                x,
                y,
                z,
                a,
                b,
                c,
                value,
            }
        })
        .collect();
    Ok(CpReport::from_terms(terms, mub))
}

/// Assemblage plus `CP` for any tripartite settings, sharing one contraction.
pub fn cp_and_assemblage(
    rho: &DensityMatrix,
    s: &TripartiteSettings,
) -> Result<(CpReport, Assemblage2SDI)> {
    if !s.charlie_is_mub() {
        return Err(Error::NotMutuallyUnbiased);
    }
    let asm = assemblage_2sdi_with(rho, &s.alice, &s.bob)?;
    let t = tensor_from_assemblage(&asm, &s.charlie);
    Ok((cp_from_tensor(&t, &OutcomeLabels::standard(), true), asm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurements::canonical_gghz_settings;
    use crate::states::{gghz, ghz, product_state, DirectSumBlock, GghzParams};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gghz_reaches_four() {
        for t in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let rho = gghz(GghzParams::new(t).unwrap()).density();
            let r = cp_eval(&rho, &canonical_gghz_settings(t).unwrap()).unwrap();
            assert!((r.value - 4.0).abs() < 1e-9, "{t}: {}", r.value);
            assert!(r.maximal && r.violates_s1 && r.violates_s2);
        }
    }

    #[test]
    fn maximally_mixed_gives_two() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2, 2]);
        let s = canonical_gghz_settings(0.4).unwrap();
        assert!((cp_eval(&rho, &s).unwrap().value - 2.0).abs() < 1e-12);
        for bits in 0..512u32 {
            let bit = |k: u32| ((bits >> k) & 1) as u8;
            let labels = OutcomeLabels::new(
                [bit(0), bit(1), bit(2), bit(3)],
                [bit(4), bit(5), bit(6), bit(7)],
                bit(8),
            )
            .unwrap();
            assert!((cp_general(&rho, &s, &labels).unwrap().value - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noisy_value_at_point_eight() {
        let s = canonical_gghz_settings(FRAC_PI_4).unwrap();
        let r = cp_eval(&noisy_ghz(Visibility::new(0.8).unwrap()), &s).unwrap();
        assert!((r.value - 3.6).abs() < 1e-12);
    }

    #[test]
    fn standard_labels_match_general() {
        let s = canonical_gghz_settings(0.9).unwrap();
        let rho = gghz(GghzParams::new(0.6).unwrap()).density();
        let a = cp_eval(&rho, &s).unwrap();
        let b = cp_general(&rho, &s, &OutcomeLabels::standard()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bounds_are_exact() {
        assert_eq!(lhs_bounds(), (2.0 + 2f64.sqrt(), 3.0, 4.0));
    }

    #[test]
    fn non_mub_charlie_rejected_unless_warned() {
        let s = SettingsTriple::new(
            [Observable::sx(), Observable::sy()],
            [Observable::sx(), Observable::sy()],
            [Observable::sx(), Observable::new([1.0, 0.0, 1.0]).unwrap()],
        )
        .unwrap();
        let rho = ghz().density();
        assert!(matches!(cp_eval(&rho, &s), Err(Error::NotMutuallyUnbiased)));
        let r = cp_with(&rho, &s.to_tripartite(), &OutcomeLabels::standard(), MubPolicy::Warn).unwrap();
        assert!(!r.charlie_mub);
    }

    #[test]
    fn maximal_conditions_examples() {
        let s = canonical_gghz_settings(FRAC_PI_4).unwrap();
        let asm = crate::assemblage::assemblage_2sdi(&ghz().density(), &s.alice, &s.bob).unwrap();
        assert!(check_maximal_conditions(&asm).all());

        let prod = product_state([0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]).unwrap();
        let asm = crate::assemblage::assemblage_2sdi(&prod.density(), &s.alice, &s.bob).unwrap();
        assert!(!check_maximal_conditions(&asm).all());

        let noisy = noisy_ghz(Visibility::new(0.9).unwrap());
        let asm = crate::assemblage::assemblage_2sdi(&noisy, &s.alice, &s.bob).unwrap();
        assert_eq!(check_maximal_conditions(&asm).conditions, [false; 4]);
    }

    #[test]
    fn noisy_curve_endpoints_and_threshold() {
        let s = canonical_gghz_settings(FRAC_PI_4).unwrap();
        let grid = visibility_grid(0.0, 1.0, 0.01).unwrap();
        assert_eq!(grid.len(), 101);
        let c = noisy_threshold(&s, &grid).unwrap();
        assert!((c.points[0].1 - 2.0).abs() < 1e-12);
        assert!((c.points[100].1 - 4.0).abs() < 1e-12);
        assert!((c.threshold.unwrap() - FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((noisy_cp(&s, FRAC_1_SQRT_2).unwrap() - BOUND_SCENARIO1).abs() < 1e-9);
    }

    #[test]
    fn curve_csv_header() {
        let c = NoisyCurve {
            points: vec![(0.5, 3.0)],
            threshold: None,
        };
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("V,CP\n5.00000000000e-1,3.00000000000e0"));
    }

    #[test]
    fn direct_sum_examples() {
        let one = DirectSumSpec::diagonal(&[(1.0, FRAC_PI_3)]).unwrap();
        assert!((verify_direct_sum(&one).unwrap().value - 4.0).abs() < 1e-9);
        let two = DirectSumSpec::diagonal(&[(0.5, FRAC_PI_4), (0.5, FRAC_PI_6)]).unwrap();
        assert!((verify_direct_sum(&two).unwrap().value - 4.0).abs() < 1e-9);
        let off = DirectSumSpec::new(vec![
            DirectSumBlock::at(0.3, 0.4, 0, 1),
            DirectSumBlock::at(0.7, 1.0, 1, 0),
        ])
        .unwrap();
        assert!((verify_direct_sum(&off).unwrap().value - 4.0).abs() < 1e-9);
    }

    #[test]
    fn mismatched_block_angle_falls_short() {
        let spec = DirectSumSpec::diagonal(&[(1.0, FRAC_PI_4)]).unwrap();
        let wrong = BlockSettings::from_block_angles(1, &[FRAC_PI_6]).unwrap();
        assert!(verify_direct_sum_with(&spec, &wrong).unwrap().value < 4.0 - 1e-3);
    }

    #[test]
    fn c_separable_examples() {
        let s = canonical_gghz_settings(FRAC_PI_4).unwrap();
        let ab = [re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(FRAC_1_SQRT_2)];
        let plus = Biseparable::C {
            ab,
            c: [re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2)],
        };
        assert!((biseparable_cp_forms(&plus, &s).unwrap().value - 3.0).abs() < 1e-12);
        let diag = Biseparable::C {
            ab,
            c: [re(FRAC_1_SQRT_2), Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4)],
        };
        let v = biseparable_cp_forms(&diag, &s).unwrap().value;
        assert!((v - BOUND_SCENARIO1).abs() < 1e-12);
        let full = cp_eval(&diag.assemble().unwrap().density(), &s).unwrap().value;
        assert!((full - v).abs() < 1e-12);
    }

    #[test]
    fn a_separable_with_bell_pair_below_four() {
        let s = canonical_gghz_settings(FRAC_PI_4).unwrap();
        let input = Biseparable::A {
            a: [re(1.0), re(0.0)],
            bc: [re(FRAC_1_SQRT_2), re(0.0), re(0.0), re(FRAC_1_SQRT_2)],
        };
        let r = biseparable_cp_forms(&input, &s).unwrap();
        assert!(r.value < 4.0 - 1e-6);
        let full = cp_eval(&input.assemble().unwrap().density(), &s).unwrap();
        assert!((full.value - r.value).abs() < 1e-12);
    }
}
