use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde_json::json;
use steerlab::mcstudy::{read_records, run_study_to};
use steerlab::{default_config, merge_studies, McConfig, McStudy, McSummary};

use crate::cli::{McAction, McArgs, McRunArgs};
use crate::error::{CliError, CliResult};
use crate::io::{print_json, read_json, resolve_seed};
use crate::manifest::{write_json, Run};

const RECORDS: &str = "records.csv";
const SUMMARY: &str = "summary.json";

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

fn report(summary: &McSummary) -> u8 {
    eprintln!(
        "{}: {} / {} violators ({:.6}), {} duplicate keys, {} failures, max CP {}",
        summary.family,
        summary.violators,
        summary.total,
        summary.violation_fraction,
        summary.duplicate_keys.len(),
        summary.failures,
        summary
            .max_value_seen
            .map_or_else(|| "n/a".to_string(), |v| format!("{v:.12}"))
    );
    if summary.duplicate_keys.is_empty() {
        0
    } else {
        1
    }
}

fn run_study(args: &McRunArgs, run: &mut Run) -> CliResult<u8> {
    let (Some(family), Some(samples), Some(out)) = (args.family, args.samples, &args.out) else {
        return Err(CliError::Usage("mc needs --family, --samples and --out".into()));
    };
    let seed = resolve_seed(args.seed);
    let mut cfg = McConfig::new(family, samples, seed);
    cfg.optimizer = match &args.opt {
        Some(p) => read_json(p)?,
        None => default_config(),
    };
    if let Some(t) = args.threshold {
        cfg.threshold = t;
    }
    if let Some(d) = args.decimals {
        cfg.rounding_decimals = d;
    }
    if let Some(k) = args.key_mode {
        cfg.key_mode = k.into();
    }
    cfg.validate()?;
    let workers = match args.workers {
        Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    run.seed = Some(seed);
    run.config = json!({ "study": cfg, "workers": workers });
    run.home = Some(out.clone());

    create_dir(out)?;
    let records_path = out.join(RECORDS);
    let file = File::create(&records_path).map_err(|source| CliError::Write {
        path: records_path.clone(),
        source,
    })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))?;
    let study = pool.install(|| run_study_to(&cfg, Some(BufWriter::new(file))))?;
    run.outputs.push(records_path);

    let summary_path = out.join(SUMMARY);
    write_json(&summary_path, &study.summary)?;
    run.outputs.push(summary_path);
    print_json(&study.summary);
    Ok(report(&study.summary))
}

fn load(dir: &Path) -> CliResult<McStudy> {
    let summary: McSummary = read_json(&dir.join(SUMMARY))?;
    let path = dir.join(RECORDS);
    let file = File::open(&path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    let records = read_records(file)?;
    Ok(McStudy { summary, records })
}

fn merge(dirs: &[PathBuf], out: Option<&PathBuf>, run: &mut Run) -> CliResult<u8> {
    run.config = json!({ "merge": dirs });
    let mut studies = dirs.iter().map(|d| load(d));
    let mut merged = studies.next().expect("clap requires two directories")?;
    for s in studies {
        merged = merge_studies(&merged, &s?)?;
    }
    if let Some(out) = out {
        create_dir(out)?;
        run.home = Some(out.clone());
        let path = out.join(SUMMARY);
        write_json(&path, &merged.summary)?;
        run.outputs.push(path);
    }
    print_json(&merged.summary);
    Ok(report(&merged.summary))
}

pub fn run(args: &McArgs, run: &mut Run) -> CliResult<u8> {
    match &args.action {
        Some(McAction::Merge { dirs, out }) => merge(dirs, out.as_ref(), run),
        None => run_study(args.run_args(), run),
    }
}

impl McArgs {
    fn run_args(&self) -> &McRunArgs {
        &self.run
    }
}
