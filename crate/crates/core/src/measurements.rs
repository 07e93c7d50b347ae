//! Dichotomic measurements: qubit observables from Bloch vectors, the
//! standard setting families, and block-diagonal settings for direct sums.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{bloch_projector, ComplexMatrix, PHYSICAL_TOL, STRUCTURAL_TOL, ZERO};
use crate::states::DirectSumSpec;

/// Qubit observable `n·σ` for a unit Bloch vector `n`.
///
/// Outcome 0 is the +1 eigenvalue and outcome 1 the -1 eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Observable {
    bloch: [f64; 3],
}

impl Observable {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if len == 0.0 || !len.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            bloch: [n[0] / len, n[1] / len, n[2] / len],
        })
    }

    /// `(sin ϑ cos φ, sin ϑ sin φ, cos ϑ)`.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (st, ct) = polar.sin_cos();
        let (sp, cp) = azimuth.sin_cos();
        Self {
            bloch: [st * cp, st * sp, ct],
        }
    }

    pub fn sx() -> Self {
        Self {
            bloch: [1.0, 0.0, 0.0],
        }
    }

    pub fn sy() -> Self {
        Self {
            bloch: [0.0, 1.0, 0.0],
        }
    }

    pub fn sz() -> Self {
        Self {
            bloch: [0.0, 0.0, 1.0],
        }
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// Canonical chart: polar angle in `[0, π]`, azimuth in `[0, 2π)`.
    pub fn angles(&self) -> (f64, f64) {
        let [x, y, z] = self.bloch;
        let polar = z.clamp(-1.0, 1.0).acos();
        let mut azimuth = y.atan2(x);
        if azimuth < 0.0 {
            azimuth += TAU;
        }
        if azimuth >= TAU {
            azimuth -= TAU;
        }
        (polar.clamp(0.0, PI), azimuth)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let [x, y, z] = self.bloch;
        ComplexMatrix::from_rows([
            [Complex64::new(z, 0.0), Complex64::new(x, -y)],
            [Complex64::new(x, y), Complex64::new(-z, 0.0)],
        ])
    }

    /// Eigenprojector for `outcome` (0 ↔ +1, 1 ↔ -1).
    pub fn projector(&self, outcome: u8) -> ComplexMatrix {
        bloch_projector(self.bloch, if outcome == 0 { 1.0 } else { -1.0 })
    }

    pub fn dot(&self, other: &Observable) -> f64 {
        self.bloch
            .iter()
            .zip(&other.bloch)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Same Bloch vector up to `tol` in every component.
    pub fn approx_eq(&self, other: &Observable, tol: f64) -> bool {
        self.bloch
            .iter()
            .zip(&other.bloch)
            .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl TryFrom<[f64; 3]> for Observable {
    type Error = Error;

    fn try_from(n: [f64; 3]) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Observable> for [f64; 3] {
    fn from(o: Observable) -> [f64; 3] {
        o.bloch
    }
}

pub fn observable(n: [f64; 3]) -> Result<Observable> {
    Observable::new(n)
}

/// Mutual unbiasedness of two qubit observables (orthogonal Bloch vectors).
pub fn is_mub(a: &Observable, b: &Observable) -> bool {
    a.dot(b).abs() <= PHYSICAL_TOL
}

/// Two qubit settings per party for Alice, Bob and Charlie.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingsTriple {
    pub alice: [Observable; 2],
    pub bob: [Observable; 2],
    pub charlie: [Observable; 2],
}

impl SettingsTriple {
    pub fn new(
        alice: [Observable; 2],
        bob: [Observable; 2],
        charlie: [Observable; 2],
    ) -> Result<Self> {
        for (party, pair) in [("Alice", &alice), ("Bob", &bob), ("Charlie", &charlie)] {
            if pair[0].approx_eq(&pair[1], STRUCTURAL_TOL) {
                return Err(Error::IdenticalSettings { party });
            }
        }
        Ok(Self {
            alice,
            bob,
            charlie,
        })
    }

    pub fn charlie_is_mub(&self) -> bool {
        is_mub(&self.charlie[0], &self.charlie[1])
    }

    pub fn to_tripartite(&self) -> TripartiteSettings {
        TripartiteSettings {
            alice: self.alice.map(Dichotomic::from),
            bob: self.bob.map(Dichotomic::from),
            charlie: self.charlie,
        }
    }
}

/// Settings that reach the algebraic maximum for `cos θ|000> + sin θ|111>`.
pub fn canonical_gghz_settings(theta: f64) -> Result<SettingsTriple> {
    crate::states::GghzParams::new(theta)?;
    let (s2, c2) = (2.0 * theta).sin_cos();
    SettingsTriple::new(
        [Observable::sx(), Observable::sy()],
        [Observable::new([s2, 0.0, c2])?, Observable::new([0.0, s2, c2])?],
        [Observable::sx(), Observable::sy()],
    )
}

/// Settings of the all-versus-nothing argument: `X = (σx, σy)`,
/// `Y = ((σx+σz)/√2, (σy+σz)/√2)`, Charlie `(σx, σy)`.
pub fn avn_settings() -> SettingsTriple {
    SettingsTriple {
        alice: [Observable::sx(), Observable::sy()],
        bob: [
            Observable {
                bloch: [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2],
            },
            Observable {
                bloch: [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            },
        ],
        charlie: [Observable::sx(), Observable::sy()],
    }
}

/// Two-outcome projective measurement on a space of any dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Dichotomic {
    plus: ComplexMatrix,
    minus: ComplexMatrix,
}

impl Dichotomic {
    /// From a Hermitian operator squaring to the identity.
    pub fn from_operator(op: &ComplexMatrix) -> Result<Self> {
        let defect = op.hermiticity_defect();
        if defect > STRUCTURAL_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let id = ComplexMatrix::identity(op.rows());
        let sq = op.matmul(op)?;
        let err = sq.max_abs_diff(&id);
        if err > STRUCTURAL_TOL {
            return Err(Error::Spectrum(format!(
                "operator squares to the identity only within {err:.3e}"
            )));
        }
        Ok(Self {
            plus: (&id + op).scale_real(0.5),
            minus: (&id - op).scale_real(0.5),
        })
    }

    pub fn dim(&self) -> usize {
        self.plus.rows()
    }

    pub fn projector(&self, outcome: u8) -> &ComplexMatrix {
        if outcome == 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    pub fn operator(&self) -> ComplexMatrix {
        &self.plus - &self.minus
    }
}

impl From<Observable> for Dichotomic {
    fn from(o: Observable) -> Self {
        Self {
            plus: o.projector(0),
            minus: o.projector(1),
        }
    }
}

/// Settings with untrusted parties of arbitrary local dimension and a
/// trusted qubit for Charlie.
#[derive(Clone, Debug, PartialEq)]
pub struct TripartiteSettings {
    pub alice: [Dichotomic; 2],
    pub bob: [Dichotomic; 2],
    pub charlie: [Observable; 2],
}

impl TripartiteSettings {
    pub fn dims(&self) -> [usize; 3] {
        [self.alice[0].dim(), self.bob[0].dim(), 2]
    }

    pub fn charlie_is_mub(&self) -> bool {
        is_mub(&self.charlie[0], &self.charlie[1])
    }
}

/// Direct sums of per-block qubit settings.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSettings {
    /// `(X0, X1)` on Alice's `2 n_a` levels.
    pub alice: [ComplexMatrix; 2],
    /// `(Y0, Y1)` on Bob's `2 n_b` levels.
    pub bob: [ComplexMatrix; 2],
    pub charlie: [Observable; 2],
    /// GGHZ angle used for each of Bob's blocks.
    pub bob_thetas: Vec<f64>,
}

fn direct_sum(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out[(off + i, off + j)] = b[(i, j)];
            }
        }
        off += b.rows();
    }
    out
}

impl BlockSettings {
    /// `n_a` copies of `(σx, σy)` for Alice; Bob's block `v` uses the
    /// canonical GGHZ pair for `thetas[v]`.
    pub fn from_block_angles(n_a: usize, thetas: &[f64]) -> Result<Self> {
        if n_a == 0 || thetas.is_empty() {
            return Err(Error::EmptySpec);
        }
        let x0 = Observable::sx().matrix();
        let x1 = Observable::sy().matrix();
        let mut y0 = Vec::with_capacity(thetas.len());
        let mut y1 = Vec::with_capacity(thetas.len());
        for &t in thetas {
            let s = canonical_gghz_settings(t)?;
            y0.push(s.bob[0].matrix());
            y1.push(s.bob[1].matrix());
        }
        Ok(Self {
            alice: [
                direct_sum(&vec![x0; n_a]),
                direct_sum(&vec![x1; n_a]),
            ],
            bob: [direct_sum(&y0), direct_sum(&y1)],
            charlie: [Observable::sx(), Observable::sy()],
            bob_thetas: thetas.to_vec(),
        })
    }

    pub fn to_tripartite(&self) -> Result<TripartiteSettings> {
        Ok(TripartiteSettings {
            alice: [
                Dichotomic::from_operator(&self.alice[0])?,
                Dichotomic::from_operator(&self.alice[1])?,
            ],
            bob: [
                Dichotomic::from_operator(&self.bob[0])?,
                Dichotomic::from_operator(&self.bob[1])?,
            ],
            charlie: self.charlie,
        })
    }
}

/// Block settings matching `direct_sum_gghz(spec)`.
///
/// Bob's operator on block `v` must serve every GGHZ block in that column,
/// so those blocks have to share one angle.
pub fn block_settings(spec: &DirectSumSpec) -> Result<BlockSettings> {
    let (blocks, n_a, n_b) = spec.placed()?;
    let mut thetas = vec![f64::NAN; n_b];
    for b in &blocks {
        let t = &mut thetas[b.v];
        if t.is_nan() {
            *t = b.theta;
        } else if (*t - b.theta).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidParameter(format!(
                "blocks in Bob's column {} have angles {} and {}; one local operator cannot serve both",
                b.v, *t, b.theta
            )));
        }
    }
    BlockSettings::from_block_angles(n_a, &thetas)
}

/// Observable named in a settings file: `"sx"`, `"sy"`, `"sz"` or a Bloch triple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableSpec {
    Named(String),
    Bloch([f64; 3]),
}

impl ObservableSpec {
    pub fn resolve(&self) -> Result<Observable> {
        match self {
            Self::Named(name) => match name.as_str() {
                "sx" => Ok(Observable::sx()),
                "sy" => Ok(Observable::sy()),
                "sz" => Ok(Observable::sz()),
                other => Err(Error::InvalidParameter(format!(
                    "unknown observable {other:?}; use sx, sy, sz or a Bloch triple"
                ))),
            },
            Self::Bloch(n) => Observable::new(*n),
        }
    }
}

fn default_charlie() -> [ObservableSpec; 2] {
    [
        ObservableSpec::Named("sx".into()),
        ObservableSpec::Named("sy".into()),
    ]
}

/// JSON settings file. Charlie defaults to `(sx, sy)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingsSpec {
    pub alice: [ObservableSpec; 2],
    pub bob: [ObservableSpec; 2],
    #[serde(default = "default_charlie")]
    pub charlie: [ObservableSpec; 2],
}

impl SettingsSpec {
    pub fn resolve(&self) -> Result<SettingsTriple> {
        let pair = |p: &[ObservableSpec; 2]| -> Result<[Observable; 2]> {
            Ok([p[0].resolve()?, p[1].resolve()?])
        };
        SettingsTriple::new(pair(&self.alice)?, pair(&self.bob)?, pair(&self.charlie)?)
    }
}

/// Spectrum check for a ±1 operator: `O² = I` and `O = O†`.
pub fn has_unit_spectrum(op: &ComplexMatrix) -> bool {
    op.is_hermitian(STRUCTURAL_TOL)
        && op
            .matmul(op)
            .map(|sq| sq.max_abs_diff(&ComplexMatrix::identity(op.rows())) <= STRUCTURAL_TOL)
            .unwrap_or(false)
}

/// Orthogonal projector onto levels `2k, 2k+1` of a `dim`-level space.
pub fn block_projector(dim: usize, k: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(dim, dim);
    for i in [2 * k, 2 * k + 1] {
        p[(i, i)] = Complex64::new(1.0, 0.0);
    }
    debug_assert!(p.as_slice().iter().any(|z| *z != ZERO));
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{kron, sigma_x, sigma_y, sigma_z};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, FRAC_PI_8};

    #[test]
    fn observable_examples() {
        assert!(observable([1.0, 0.0, 0.0]).unwrap().matrix().max_abs_diff(&sigma_x()) < 1e-15);
        let d = observable([1.0, 0.0, 1.0]).unwrap().matrix();
        assert!(d.max_abs_diff(&(&sigma_x() + &sigma_z()).scale_real(FRAC_1_SQRT_2)) < 1e-15);
        let m = observable([0.6, 0.0, 0.8]).unwrap().matrix();
        let expect = ComplexMatrix::from_rows([
            [Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0)],
            [Complex64::new(0.6, 0.0), Complex64::new(-0.8, 0.0)],
        ]);
        assert!(m.max_abs_diff(&expect) < 1e-15);
        assert!(matches!(observable([0.0; 3]), Err(Error::ZeroVector)));
    }

    #[test]
    fn pauli_y_matches() {
        assert!(Observable::sy().matrix().max_abs_diff(&sigma_y()) < 1e-15);
    }

    #[test]
    fn canonical_settings_at_pi_over_4() {
        let s = canonical_gghz_settings(FRAC_PI_4).unwrap();
        assert!(s.bob[0].approx_eq(&Observable::sx(), 1e-15));
        assert!(s.bob[1].approx_eq(&Observable::sy(), 1e-15));
    }

    #[test]
    fn canonical_settings_at_pi_over_8() {
        let s = canonical_gghz_settings(FRAC_PI_8).unwrap();
        let h = 2f64.sqrt() / 2.0;
        assert!(s.bob[0].approx_eq(&Observable::new([h, 0.0, h]).unwrap(), 1e-15));
        assert!((s.bob[0].bloch()[0] - h).abs() < 1e-15);
    }

    #[test]
    fn canonical_settings_fix_charlie() {
        for t in [0.1, FRAC_PI_6, 1.3] {
            let s = canonical_gghz_settings(t).unwrap();
            assert_eq!(s.charlie, [Observable::sx(), Observable::sy()]);
            assert!(s.charlie_is_mub());
        }
        assert!(canonical_gghz_settings(0.0).is_err());
    }

    #[test]
    fn avn_settings_entries() {
        let s = avn_settings();
        assert_eq!(s.alice, [Observable::sx(), Observable::sy()]);
        let y0 = (&sigma_x() + &sigma_z()).scale_real(FRAC_1_SQRT_2);
        let y1 = (&sigma_y() + &sigma_z()).scale_real(FRAC_1_SQRT_2);
        assert!(s.bob[0].matrix().max_abs_diff(&y0) < 1e-15);
        assert!(s.bob[1].matrix().max_abs_diff(&y1) < 1e-15);
        for o in s.bob {
            let n = o.bloch();
            assert!((n.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-15);
            let id = ComplexMatrix::identity(2);
            assert!(o.projector(0).max_abs_diff(&(&id + &o.matrix()).scale_real(0.5)) < 1e-15);
        }
    }

    #[test]
    fn mub_examples() {
        assert!(is_mub(&Observable::sx(), &Observable::sy()));
        assert!(!is_mub(&Observable::sx(), &Observable::sx()));
        assert!(!is_mub(
            &Observable::sx(),
            &observable([1.0, 0.0, 1.0]).unwrap()
        ));
    }

    #[test]
    fn settings_reject_repeated_observable() {
        let r = SettingsTriple::new(
            [Observable::sx(), Observable::sx()],
            [Observable::sx(), Observable::sy()],
            [Observable::sx(), Observable::sy()],
        );
        assert!(matches!(r, Err(Error::IdenticalSettings { party: "Alice" })));
    }

    #[test]
    fn angles_round_trip() {
        let o = Observable::from_angles(1.1, 4.0);
        let (t, p) = o.angles();
        assert!((t - 1.1).abs() < 1e-12 && (p - 4.0).abs() < 1e-12);
        let o = Observable::from_angles(-0.5, 0.0);
        let (t, p) = o.angles();
        assert!((0.0..=PI).contains(&t) && (0.0..TAU).contains(&p));
        assert!(Observable::from_angles(t, p).approx_eq(&o, 1e-12));
    }

    #[test]
    fn single_block_settings_reduce_to_canonical() {
        let spec = DirectSumSpec::diagonal(&[(1.0, FRAC_PI_4)]).unwrap();
        let b = block_settings(&spec).unwrap();
        let c = canonical_gghz_settings(FRAC_PI_4).unwrap();
        for x in 0..2 {
            assert!(b.alice[x].max_abs_diff(&c.alice[x].matrix()) < 1e-15);
            assert!(b.bob[x].max_abs_diff(&c.bob[x].matrix()) < 1e-15);
        }
    }

    #[test]
    fn two_block_settings_are_block_diagonal_with_unit_spectrum() {
        let spec = DirectSumSpec::diagonal(&[(0.5, FRAC_PI_4), (0.5, FRAC_PI_6)]).unwrap();
        let b = block_settings(&spec).unwrap();
        for op in b.alice.iter().chain(&b.bob) {
            assert_eq!(op.rows(), 4);
            assert!(has_unit_spectrum(op));
            for i in 0..2 {
                for j in 2..4 {
                    assert_eq!(op[(i, j)], ZERO);
                    assert_eq!(op[(j, i)], ZERO);
                }
            }
        }
        assert!(b.to_tripartite().is_ok());
    }

    #[test]
    fn block_settings_commute_with_block_projectors() {
        let spec = DirectSumSpec::diagonal(&[(0.2, 0.3), (0.3, 0.9), (0.5, 1.2)]).unwrap();
        let b = block_settings(&spec).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let pa = block_projector(6, u);
                let pb = block_projector(6, v);
                let proj = kron(&pa, &pb);
                for (xa, yb) in b.alice.iter().zip(&b.bob) {
                    let op = kron(xa, yb);
                    let lhs = &op * &proj;
                    let rhs = &proj * &op;
                    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn inconsistent_bob_column_rejected() {
        use crate::states::DirectSumBlock;
        let spec = DirectSumSpec::new(vec![
            DirectSumBlock::at(0.5, 0.3, 0, 0),
            DirectSumBlock::at(0.5, 0.4, 1, 0),
        ])
        .unwrap();
        assert!(block_settings(&spec).is_err());
    }

    #[test]
    fn settings_spec_json() {
        let json = r#"{"alice":["sx","sy"],"bob":[[1,0,1],[0,1,1]]}"#;
        let spec: SettingsSpec = serde_json::from_str(json).unwrap();
        let s = spec.resolve().unwrap();
        let avn = avn_settings();
        for (a, b) in s.bob.iter().zip(&avn.bob) {
            assert!(a.approx_eq(b, 1e-15));
        }
        assert_eq!(s.alice, avn.alice);
        assert_eq!(s.charlie, avn.charlie);
        let bad: SettingsSpec = serde_json::from_str(r#"{"alice":["sw","sy"],"bob":["sx","sy"]}"#).unwrap();
        assert!(bad.resolve().is_err());
    }
}
