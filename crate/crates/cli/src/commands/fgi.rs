use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde_json::json;
use steerlab::fgi::{noisy_threshold, visibility_grid};
use steerlab::measurements::SettingsSpec;
use steerlab::{
    canonical_gghz_settings, cp_eval, cp_general, default_config, maximize_cp, verify_direct_sum,
    CpReport, DirectSumSpec, OptConfig, OutcomeLabels, SettingsTriple, StateSpec,
};

use crate::cli::FgiCommand;
use crate::error::{CliError, CliResult};
use crate::io::{print_json, read_json, resolve_seed};
use crate::manifest::Run;

fn settings_from(path: &Path) -> CliResult<SettingsTriple> {
    Ok(read_json::<SettingsSpec>(path)?.resolve()?)
}

fn summarize(report: &CpReport) {
    eprintln!(
        "CP = {:.12} (bounds {:.6} / {} / {}), violates known-settings bound: {}, maximal: {}",
        report.value,
        report.bound_scenario1,
        report.bound_scenario2,
        report.algebraic_max,
        report.violates_s1,
        report.maximal
    );
}

/// 3 when some term is undefined, otherwise 0 iff the known-settings bound is violated.
fn verdict(report: &CpReport) -> u8 {
    if !report.is_attained() {
        eprintln!("conditioning events never occur for terms {:?}", report.unattained_terms);
        3
    } else if report.violates_s1 {
        0
    } else {
        1
    }
}

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("grid {s:?} is not start:end:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| bad())?;
    }
    Ok(visibility_grid(v[0], v[1], v[2])?)
}

pub fn run(cmd: &FgiCommand, run: &mut Run) -> CliResult<u8> {
    match cmd {
        FgiCommand::Eval {
            state,
            settings,
            labels,
        } => {
            let spec: StateSpec = read_json(state)?;
            let s = settings_from(settings)?;
            let labels = match labels {
                Some(p) => {
                    let l: OutcomeLabels = read_json(p)?;
                    OutcomeLabels::new(l.a, l.b, l.c)?
                }
                None => OutcomeLabels::standard(),
            };
            run.config = json!({ "state": spec, "settings": s, "labels": labels });
            let report = cp_general(&spec.density()?, &s, &labels)?;
            print_json(&report);
            summarize(&report);
            Ok(verdict(&report))
        }
        FgiCommand::Max { state, opt, seed } => {
            let spec: StateSpec = read_json(state)?;
            let mut cfg: OptConfig = match opt {
                Some(p) => read_json(p)?,
                None => default_config(),
            };
            if seed.is_some() || opt.is_none() {
                cfg.seed = resolve_seed(*seed);
            }
            cfg.validate()?;
            run.seed = Some(cfg.seed);
            run.config = json!({ "state": spec, "optimizer": cfg });
            let rho = spec.density()?;
            let result = maximize_cp(&rho, &cfg)?;
            let report = cp_eval(&rho, &result.best_angles.to_settings())?;
            print_json(&json!({ "optimum": result, "report": report }));
            eprintln!(
                "{} restarts, {} evaluations",
                result.restarts_used, result.evaluations
            );
            summarize(&report);
            Ok(verdict(&report))
        }
        FgiCommand::Noisy {
            grid,
            settings,
            out,
        } => {
            let points = parse_grid(grid)?;
            let s = match settings {
                Some(p) => settings_from(p)?,
                None => canonical_gghz_settings(FRAC_PI_4)?,
            };
            run.config = json!({ "grid": grid, "settings": s });
            let curve = noisy_threshold(&s, &points)?;
            match out {
                Some(path) => {
                    let f = File::create(path).map_err(|source| CliError::Write {
                        path: path.clone(),
                        source,
                    })?;
                    curve.write_csv(BufWriter::new(f))?;
                    run.outputs.push(path.clone());
                }
                None => curve.write_csv(std::io::stdout().lock())?,
            }
            match curve.threshold {
                Some(t) => {
                    eprintln!("CP crosses 2+sqrt(2) at V = {t:.12}");
                    Ok(0)
                }
                None => {
                    eprintln!("the grid does not bracket the crossing of 2+sqrt(2)");
                    Ok(1)
                }
            }
        }
        FgiCommand::DirectSum { spec } => {
            let spec: DirectSumSpec = read_json(spec)?;
            run.config = json!({ "spec": spec });
            let report = verify_direct_sum(&spec)?;
            print_json(&report);
            summarize(&report);
            Ok(if report.maximal { 0 } else { 1 })
        }
    }
}
