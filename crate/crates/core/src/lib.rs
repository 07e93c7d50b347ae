//! Numerical toolkit for tripartite EPR steering: assemblages, all-versus-nothing
//! contradictions, the fine-grained steering inequality and its maximisation.

pub mod assemblage;
pub mod avn;
pub mod error;
pub mod fgi;
pub mod mcstudy;
pub mod measurements;
pub mod optimizer;
pub mod qcore;
pub mod states;

pub use assemblage::{
    assemblage_1sdi, assemblage_2sdi, conditional_prob, correlation_tensor, Assemblage1SDI,
    Assemblage2SDI, CorrelationTensor,
};
pub use avn::{
    closed_form_gghz_1sdi, closed_form_w_1sdi, closed_form_w_assemblage_2sdi, run_avn_1sdi,
    run_avn_2sdi, AvnReport, LhsEnsemble, Scenario,
};
pub use error::{Error, Result};
pub use fgi::{
    biseparable_cp_forms, check_maximal_conditions, cp_eval, cp_general, lhs_bounds,
    noisy_threshold, verify_direct_sum, Biseparable, CpReport, OutcomeLabels,
};
pub use mcstudy::{merge_studies, run_study, sample_state, Family, McConfig, McRecord, McStudy, McSummary};
pub use measurements::{
    avn_settings, block_settings, canonical_gghz_settings, is_mub, observable, BlockSettings,
    Dichotomic, Observable, SettingsSpec, SettingsTriple, TripartiteSettings,
};
pub use optimizer::{default_config, maximize_cp, MeasurementAngles, OptConfig, OptResult};
pub use qcore::{kron, partial_trace_matrix, purity, ComplexMatrix, DensityMatrix, PureState};
pub use states::{
    direct_sum_gghz, general_w, gghz, ghz, ghz_class, noisy_ghz, w_class, DirectSumBlock,
    DirectSumSpec, GeneralWParams, GghzParams, GhzClassParams, StateSpec, Visibility, WClassParams,
};
