use std::f64::consts::FRAC_PI_4;

use serde_json::json;
use steerlab::measurements::SettingsSpec;
use steerlab::{avn_settings, run_avn_1sdi, run_avn_2sdi, SettingsTriple, StateSpec};

use crate::cli::{AvnArgs, AvnFamily, ScenarioArg};
use crate::error::{CliError, CliResult};
use crate::io::{print_json, read_json};
use crate::manifest::Run;

fn state_spec(args: &AvnArgs) -> CliResult<StateSpec> {
    if let Some(path) = &args.state {
        return read_json(path);
    }
    let third = 1.0 / 3f64.sqrt();
    Ok(match args.family {
        Some(AvnFamily::Gghz) => StateSpec::Gghz {
            theta: args.theta.unwrap_or(FRAC_PI_4),
        },
        Some(AvnFamily::Wclass) => StateSpec::Wclass {
            c0: args.c0.unwrap_or(third),
            c1: args.c1.unwrap_or(third),
        },
        Some(AvnFamily::Product) => StateSpec::Product {
            a: [0.0, 0.0, 1.0],
            b: [0.0, 0.0, 1.0],
            c: [0.0, 0.0, 1.0],
        },
        None => return Err(CliError::Usage("give --family or --state".into())),
    })
}

pub fn run(args: &AvnArgs, run: &mut Run) -> CliResult<u8> {
    let spec = state_spec(args)?;
    let settings: SettingsTriple = match &args.settings {
        Some(path) => read_json::<SettingsSpec>(path)?.resolve()?,
        None => avn_settings(),
    };
    run.config = json!({
        "scenario": match args.scenario {
            ScenarioArg::TwoSided => "2sdi",
            ScenarioArg::OneSided => "1sdi",
        },
        "state": spec,
        "settings": settings,
    });
    let psi = spec
        .pure_state()?
        .ok_or_else(|| CliError::Usage(format!("{} is not a pure state", spec.family())))?;
    let report = match args.scenario {
        ScenarioArg::TwoSided => run_avn_2sdi(&psi, &settings.alice, &settings.bob)?,
        ScenarioArg::OneSided => run_avn_1sdi(&psi, &settings.alice)?,
    };
    print_json(&report);
    eprintln!(
        "{} {}: contradiction {:?}, {} distinct conditionals, holds = {}",
        spec.family(),
        match args.scenario {
            ScenarioArg::TwoSided => "2sdi",
            ScenarioArg::OneSided => "1sdi",
        },
        report.contradiction,
        report.distinct_count,
        report.holds
    );
    Ok(if report.holds { 0 } else { 1 })
}
