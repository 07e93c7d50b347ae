//! Monte-Carlo study: random W-class and GHZ-class states, maximal violators
//! of the steering inequality, and uniqueness of their optimal settings.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgi::BOUND_SCENARIO1;
use crate::measurements::Observable;
use crate::optimizer::{default_config, maximize_cp_pure, MeasurementAngles, OptConfig};
use crate::qcore::PureState;
use crate::states::{general_w, ghz_class, GeneralWParams, GhzClassParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    GeneralW,
    GhzClass,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::GeneralW => "general_w",
            Self::GhzClass => "ghz_class",
        }
    }

    /// How parameters are drawn, for output metadata.
    pub fn sampling(self) -> &'static str {
        match self {
            Self::GeneralW => "(a,b,c,d) uniform on the 3-simplex via normalised Exp(1) spacings",
            Self::GhzClass => "delta, alpha, beta, gamma uniform on (0, pi/2); phi uniform on [0, 2pi)",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general_w" => Ok(Self::GeneralW),
            "ghz_class" => Ok(Self::GhzClass),
            other => Err(Error::InvalidParameter(format!(
                "unknown family {other:?}; expected general_w or ghz_class"
            ))),
        }
    }
}

/// How violator keys are formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyMode {
    /// The eight canonical angles, rounded.
    #[default]
    Raw,
    /// Bloch vectors with a fixed sign convention, sorted within each party.
    GaugeCanonical,
}

fn default_threshold() -> f64 {
    3.99
}

fn default_decimals() -> usize {
    6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub family: Family,
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_decimals")]
    pub rounding_decimals: usize,
    #[serde(default)]
    pub optimizer: OptConfig,
    #[serde(default)]
    pub key_mode: KeyMode,
}

impl McConfig {
    pub fn new(family: Family, samples: usize, seed: u64) -> Self {
        Self {
            family,
            samples,
            seed,
            threshold: default_threshold(),
            rounding_decimals: default_decimals(),
            optimizer: default_config(),
            key_mode: KeyMode::Raw,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter("samples must be at least 1".into()));
        }
        if !(self.threshold > BOUND_SCENARIO1 && self.threshold <= 4.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold {} must lie in (2+sqrt2, 4]",
                self.threshold
            )));
        }
        self.optimizer.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum StateParams {
    GeneralW(GeneralWParams),
    GhzClass(GhzClassParams),
}

impl StateParams {
    pub fn family(&self) -> Family {
        match self {
            Self::GeneralW(_) => Family::GeneralW,
            Self::GhzClass(_) => Family::GhzClass,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::GeneralW(p) => p.as_array().to_vec(),
            Self::GhzClass(p) => p.as_array().to_vec(),
        }
    }

    pub fn from_values(family: Family, v: &[f64]) -> Result<Self> {
        let need = match family {
            Family::GeneralW => 4,
            Family::GhzClass => 5,
        };
        if v.len() != need {
            return Err(Error::InvalidParameter(format!(
                "{} needs {need} parameters, got {}",
                family.name(),
                v.len()
            )));
        }
        Ok(match family {
            Family::GeneralW => Self::GeneralW(GeneralWParams::new(v[0], v[1], v[2], v[3])?),
            Family::GhzClass => Self::GhzClass(GhzClassParams::new(v[0], v[1], v[2], v[3], v[4])?),
        })
    }

    pub fn state(&self) -> Result<PureState> {
        match self {
            Self::GeneralW(p) => Ok(general_w(*p)),
            Self::GhzClass(p) => ghz_class(*p),
        }
    }
}

pub fn sample_state<R: Rng + ?Sized>(family: Family, rng: &mut R) -> StateParams {
    match family {
        Family::GeneralW => {
            let e: [f64; 4] = std::array::from_fn(|_| rng.sample(Exp1));
            let s: f64 = e.iter().sum();
            let [a, b, c, _] = e.map(|x| x / s);
            // recompute d so the four weights sum to one exactly
            let d = (1.0 - a - b - c).max(0.0);
            StateParams::GeneralW(
                GeneralWParams::new(a, b, c, d).expect("normalised spacings lie on the simplex"),
            )
        }
        Family::GhzClass => {
            let open = |rng: &mut R| loop {
                let v = rng.random_range(0.0..FRAC_PI_2);
                if v > 0.0 {
                    break v;
                }
            };
            let delta = open(rng);
            let alpha = open(rng);
            let beta = open(rng);
            let gamma = open(rng);
            let phi = rng.random_range(0.0..TAU);
            StateParams::GhzClass(
                GhzClassParams::new(delta, phi, alpha, beta, gamma).expect("finite angles"),
            )
        }
    }
}

/// RNG for sample `index`: one ChaCha stream per sample.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McRecord {
    pub index: u64,
    pub family: Family,
    pub params: Vec<f64>,
    pub best_value: Option<f64>,
    pub best_angles: Option<MeasurementAngles>,
    pub key: Option<String>,
    pub status: RecordStatus,
}

impl McRecord {
    pub fn is_violator(&self, threshold: f64) -> bool {
        self.status == RecordStatus::Ok && self.best_value.is_some_and(|v| v >= threshold)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateKey {
    pub key: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub family: String,
    pub total: usize,
    pub violators: usize,
    pub violation_fraction: f64,
    pub duplicate_keys: Vec<DuplicateKey>,
    pub max_value_seen: Option<f64>,
    pub failures: usize,
    pub threshold: f64,
    pub rounding_decimals: usize,
    pub key_mode: KeyMode,
    pub sampling: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct McStudy {
    pub summary: McSummary,
    pub records: Vec<McRecord>,
}

fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    // "-0.000000" and "0.000000" are the same key
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Rounded key for a violator's settings.
pub fn settings_key(angles: &MeasurementAngles, decimals: usize, mode: KeyMode) -> String {
    match mode {
        KeyMode::Raw => angles
            .0
            .iter()
            .map(|v| fixed(*v, decimals))
            .collect::<Vec<_>>()
            .join(";"),
        KeyMode::GaugeCanonical => {
            let fix = |o: Observable| {
                let n = o.bloch();
                let lead = n.iter().copied().find(|v| v.abs() > 1e-9).unwrap_or(1.0);
                if lead < 0.0 {
                    n.map(|v| -v)
                } else {
                    n
                }
            };
            let [x0, x1, y0, y1] = angles.observables().map(fix);
            let sort = |p: [f64; 3], q: [f64; 3]| {
                if p.iter().zip(&q).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne())
                    == Some(std::cmp::Ordering::Greater)
                {
                    [q, p]
                } else {
                    [p, q]
                }
            };
            sort(x0, x1)
                .iter()
                .chain(sort(y0, y1).iter())
                .flat_map(|n| n.iter())
                .map(|v| fixed(*v, decimals))
                .collect::<Vec<_>>()
                .join(";")
        }
    }
}

fn run_sample(cfg: &McConfig, index: u64) -> McRecord {
    let mut rng = sample_rng(cfg.seed, index);
    let params = sample_state(cfg.family, &mut rng);
    let opt = OptConfig {
        seed: rng.random(),
        ..cfg.optimizer.clone()
    };
    let result = params.state().and_then(|psi| maximize_cp_pure(&psi, &opt));
    match result {
        Ok(r) => McRecord {
            index,
            family: cfg.family,
            params: params.values(),
            best_value: Some(r.best_value),
            best_angles: Some(r.best_angles),
            key: Some(settings_key(&r.best_angles, cfg.rounding_decimals, cfg.key_mode)),
            status: RecordStatus::Ok,
        },
        Err(_) => McRecord {
            index,
            family: cfg.family,
            params: params.values(),
            best_value: None,
            best_angles: None,
            key: None,
            status: RecordStatus::Failed,
        },
    }
}

/// Samples processed between writes to the record stream.
const CHUNK: usize = 256;

/// Runs the study, streaming records in index order to `sink` as CSV.
pub fn run_study_to<W: Write>(cfg: &McConfig, sink: Option<W>) -> Result<McStudy> {
    cfg.validate()?;
    let mut writer = sink.map(RecordWriter::new).transpose()?;
    let mut records = Vec::with_capacity(cfg.samples);
    let mut start = 0usize;
    while start < cfg.samples {
        let end = (start + CHUNK).min(cfg.samples);
        let chunk: Vec<McRecord> = (start..end)
            .into_par_iter()
            .map(|i| run_sample(cfg, i as u64))
            .collect();
        if let Some(w) = writer.as_mut() {
            for r in &chunk {
                w.write(r)?;
            }
            w.flush()?;
        }
        records.extend(chunk);
        start = end;
    }
    let summary = summarize(
        cfg.family.name(),
        &records,
        cfg.threshold,
        cfg.rounding_decimals,
        cfg.key_mode,
        vec![cfg.family.sampling().to_string()],
    );
    Ok(McStudy { summary, records })
}

pub fn run_study(cfg: &McConfig) -> Result<McStudy> {
    run_study_to::<std::io::Sink>(cfg, None)
}

pub fn summarize(
    family: &str,
    records: &[McRecord],
    threshold: f64,
    rounding_decimals: usize,
    key_mode: KeyMode,
    sampling: Vec<String>,
) -> McSummary {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut violators = 0;
    for r in records.iter().filter(|r| r.is_violator(threshold)) {
        violators += 1;
        if let Some(k) = &r.key {
            *counts.entry(k.as_str()).or_default() += 1;
        }
    }
    let duplicate_keys = counts
        .into_iter()
        .filter(|(_, m)| *m >= 2)
        .map(|(k, m)| DuplicateKey {
            key: k.to_string(),
            multiplicity: m,
        })
        .collect();
    let max_value_seen = records
        .iter()
        .filter_map(|r| r.best_value)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    McSummary {
        family: family.to_string(),
        total: records.len(),
        violators,
        violation_fraction: if records.is_empty() {
            0.0
        } else {
            violators as f64 / records.len() as f64
        },
        duplicate_keys,
        max_value_seen,
        failures: records.iter().filter(|r| r.status == RecordStatus::Failed).count(),
        threshold,
        rounding_decimals,
        key_mode,
        sampling,
    }
}

/// Union of two studies with duplicate detection re-run over all violators.
pub fn merge_studies(a: &McStudy, b: &McStudy) -> Result<McStudy> {
    let (sa, sb) = (&a.summary, &b.summary);
    if sa.threshold != sb.threshold
        || sa.rounding_decimals != sb.rounding_decimals
        || sa.key_mode != sb.key_mode
    {
        return Err(Error::InvalidParameter(
            "studies differ in threshold, rounding or key mode".into(),
        ));
    }
    let records: Vec<McRecord> = a.records.iter().chain(&b.records).cloned().collect();
    let family = if sa.family == sb.family {
        sa.family.clone()
    } else {
        format!("{}+{}", sa.family, sb.family)
    };
    let mut sampling = sa.sampling.clone();
    for s in &sb.sampling {
        if !sampling.contains(s) {
            sampling.push(s.clone());
        }
    }
    let summary = summarize(&family, &records, sa.threshold, sa.rounding_decimals, sa.key_mode, sampling);
    Ok(McStudy { summary, records })
}

const ANGLE_COLUMNS: [&str; 8] = [
    "x0_theta", "x0_phi", "x1_theta", "x1_phi", "y0_theta", "y0_phi", "y1_theta", "y1_phi",
];

pub fn record_header() -> Vec<&'static str> {
    let mut h = vec!["index", "family", "param0", "param1", "param2", "param3", "param4", "best_value"];
    h.extend(ANGLE_COLUMNS);
    h.extend(["key", "status"]);
    h
}

fn float(v: f64) -> String {
    format!("{v:.11e}")
}

/// Append-only CSV writer for records.
pub struct RecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner.write_record(record_header())?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, r: &McRecord) -> Result<()> {
        let mut row = vec![r.index.to_string(), r.family.name().to_string()];
        for k in 0..5 {
            row.push(r.params.get(k).map(|v| float(*v)).unwrap_or_default());
        }
        row.push(r.best_value.map(float).unwrap_or_default());
        for k in 0..8 {
            row.push(r.best_angles.map(|a| float(a.0[k])).unwrap_or_default());
        }
        row.push(r.key.clone().unwrap_or_default());
        row.push(
            match r.status {
                RecordStatus::Ok => "ok",
                RecordStatus::Failed => "failed",
            }
            .to_string(),
        );
        self.inner.write_record(row)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(Some)
        .map_err(|e| Error::InvalidParameter(format!("bad number {s:?}: {e}")))
}

/// Reads records written by [`RecordWriter`].
pub fn read_records<R: Read>(r: R) -> Result<Vec<McRecord>> {
    let mut reader = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        if row.len() != record_header().len() {
            return Err(Error::InvalidParameter(format!(
                "record has {} columns, expected {}",
                row.len(),
                record_header().len()
            )));
        }
        let index = row[0]
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("bad index {:?}: {e}", &row[0])))?;
        let family: Family = row[1].parse()?;
        let mut params = Vec::new();
        for k in 2..7 {
            if let Some(v) = parse_opt(&row[k])? {
                params.push(v);
            }
        }
        let best_value = parse_opt(&row[7])?;
        let mut angles = [0.0; 8];
        let mut have_angles = true;
        for k in 0..8 {
            match parse_opt(&row[8 + k])? {
                Some(v) => angles[k] = v,
                None => have_angles = false,
            }
        }
        let key = (!row[16].is_empty()).then(|| row[16].to_string());
        let status = match &row[17] {
            "ok" => RecordStatus::Ok,
            "failed" => RecordStatus::Failed,
            other => {
                return Err(Error::InvalidParameter(format!("unknown status {other:?}")));
            }
        };
        out.push(McRecord {
            index,
            family,
            params,
            best_value,
            best_angles: have_angles.then_some(MeasurementAngles(angles)),
            key,
            status,
        });
    }
    Ok(out)
}
