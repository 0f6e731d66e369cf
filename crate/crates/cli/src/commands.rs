use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use billiards_core::blocking::{evade, hit_indices, random_blocking_set};
use billiards_core::family::{approximants, build_polygon, gamma, verify_family, FamilyError};
use billiards_core::render::{render_table, render_trajectory, render_unfolded};
use billiards_core::unfolding::unfold;
use billiards_core::wire::{self, GammaReportWire, PointWire, WireError};
use billiards_core::{AlphaSpec, BlockingSet, Evasion, FamilyIndex, FamilyParams, Table};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::args::{OutputArgs, RenderWhat, TableArgs};

/// Non-success outcomes, each with a fixed exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed at n = {}", .0.iter().map(usize::to_string).collect::<Vec<_>>().join(", "))]
    Verification(Vec<usize>),
    #[error("no trajectory up to n = {0} avoids the blocking set")]
    Exhausted(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Exhausted(_) => 3,
        }
    }
}

impl From<WireError> for CliError {
    fn from(e: WireError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn rational(name: &str, s: &str) -> Result<BigRational, CliError> {
    BigRational::from_str(s.trim()).map_err(|_| CliError::Input(format!("--{name}: cannot parse {s:?} as a rational")))
}

pub fn params(args: &TableArgs) -> Result<FamilyParams, CliError> {
    let u = rational("alpha-u", &args.alpha_u)?;
    let v = rational("alpha-v", &args.alpha_v)?;
    let alpha = AlphaSpec::new(u, v).map_err(|e| CliError::Input(e.to_string()))?;
    let l1 = rational("l1", &args.l1)?;
    let l2 = rational("l2", &args.l2)?;
    FamilyParams::new(alpha, l1, l2).map_err(|e| CliError::Input(e.to_string()))
}

fn table(params: &FamilyParams) -> Result<Table, CliError> {
    build_polygon(params).map_err(|e| CliError::Input(e.to_string()))
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: &OutputArgs, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("wire types serialize");
    text.push('\n');
    emit(out, &text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::Input("--jobs must be positive".into())),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| CliError::Input(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub fn build(args: &TableArgs, out: &OutputArgs) -> Result<(), CliError> {
    let t = table(&params(args)?)?;
    emit_json(out, &wire::table_to_wire(&t))
}

#[derive(Serialize)]
struct VerifyRecordError {
    n: usize,
    q: u64,
    p: u64,
    error: String,
    ok: bool,
}

#[derive(Serialize)]
#[serde(untagged)]
enum VerifyRecord {
    Report(GammaReportWire),
    Failed(VerifyRecordError),
}

#[derive(Serialize)]
struct VerifyOutput {
    n_max: usize,
    ok: bool,
    failed: Vec<usize>,
    records: Vec<VerifyRecord>,
}

pub fn verify(
    args: &TableArgs,
    out: &OutputArgs,
    n: usize,
    jobs: Option<usize>,
    table_file: Option<&Path>,
) -> Result<(), CliError> {
    let built = params(args)?;
    let t = match table_file {
        Some(path) => wire::table_from_wire(&read_json(path)?)?,
        None => table(&built)?,
    };
    let family_params = FamilyParams {
        alpha: t.polygon().spec().clone(),
        ..built
    };
    let family = approximants(&family_params, n);
    let results = pool(jobs, || verify_family(&t, &family))?;
    let mut failed = Vec::new();
    let records: Vec<VerifyRecord> = family
        .iter()
        .zip(results)
        .map(|(idx, r)| match r {
            Ok(report) => {
                if !report.ok {
                    failed.push(idx.n);
                }
                VerifyRecord::Report(wire::gamma_report_to_wire(&report, out.digits as usize))
            }
            Err(e) => {
                failed.push(idx.n);
                VerifyRecord::Failed(VerifyRecordError {
                    n: idx.n,
                    q: idx.q,
                    p: idx.p,
                    error: e.to_string(),
                    ok: false,
                })
            }
        })
        .collect();
    emit_json(
        out,
        &VerifyOutput {
            n_max: n,
            ok: failed.is_empty(),
            failed: failed.clone(),
            records,
        },
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed))
    }
}

fn blocking_set(t: &Table, args: &TableArgs, file: Option<&Path>, random: Option<usize>) -> Result<BlockingSet, CliError> {
    match (file, random) {
        (Some(path), _) => Ok(wire::blocking_set_from_wire(&read_json(path)?, t)?),
        (None, Some(size)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            Ok(random_blocking_set(t, size, &mut rng))
        }
        (None, None) => Err(CliError::Input("give --blockers FILE or --random SIZE".into())),
    }
}

fn family_error(e: FamilyError) -> CliError {
    CliError::Input(e.to_string())
}

pub fn evade_cmd(
    args: &TableArgs,
    out: &OutputArgs,
    blockers: Option<&Path>,
    random: Option<usize>,
    n_max: usize,
) -> Result<(), CliError> {
    let p = params(args)?;
    let t = table(&p)?;
    let set = blocking_set(&t, args, blockers, random)?;
    let family = approximants(&p, n_max);
    match evade(&t, &family, &set).map_err(family_error)? {
        Evasion::Witness(w) => emit_json(out, &wire::evasion_to_wire(&w)),
        Evasion::NotFound(nf) => {
            emit_json(out, &wire::not_found_to_wire(&nf, &set))?;
            Err(CliError::Exhausted(n_max.to_string()))
        }
    }
}

fn index(p: &FamilyParams, n: usize) -> FamilyIndex {
    approximants(p, n).pop().expect("n + 1 entries")
}

pub fn render(args: &TableArgs, out: &OutputArgs, what: RenderWhat, n: usize) -> Result<(), CliError> {
    let p = params(args)?;
    let t = table(&p)?;
    let digits = out.digits as usize;
    let svg = match what {
        RenderWhat::Table => render_table(&t, digits),
        RenderWhat::Gamma => {
            let traj = gamma(&t, &index(&p, n)).map_err(family_error)?;
            render_trajectory(&t, &traj, digits)
        }
        RenderWhat::Unfolded => {
            let traj = gamma(&t, &index(&p, n)).map_err(family_error)?;
            render_unfolded(&t, &traj, &unfold(&traj), digits)
        }
    };
    emit(out, &svg)
}

#[derive(Serialize)]
struct FamilySummary {
    n: usize,
    q: u64,
    p: u64,
    lambda_decimal: String,
    lower_bounces: usize,
    upper_bounces: usize,
    crossing_x_decimal: String,
    ok: bool,
}

#[derive(Serialize)]
struct PointHits {
    point: PointWire,
    hit_indices: Vec<usize>,
}

#[derive(Serialize)]
struct Report {
    alpha: wire::AlphaWire,
    alpha_decimal: String,
    l1: wire::RationalWire,
    l2: wire::RationalWire,
    n_max: usize,
    all_ok: bool,
    total_bounces: usize,
    min_abs_lambda_decimal: String,
    family: Vec<FamilySummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    points: Vec<PointHits>,
}

pub fn report(
    args: &TableArgs,
    out: &OutputArgs,
    n: usize,
    blockers: Option<&Path>,
    jobs: Option<usize>,
) -> Result<(), CliError> {
    let p = params(args)?;
    let t = table(&p)?;
    let digits = out.digits as usize;
    let family = approximants(&p, n);
    let results = pool(jobs, || verify_family(&t, &family))?;
    let mut summaries = Vec::with_capacity(family.len());
    for r in results {
        let r = r.map_err(family_error)?;
        summaries.push(FamilySummary {
            n: r.index.n,
            q: r.index.q,
            p: r.index.p,
            lambda_decimal: r.index.lambda.to_decimal(digits),
            lower_bounces: r.lower_bounces,
            upper_bounces: r.upper_bounces,
            crossing_x_decimal: r.crossing.x.to_decimal(digits),
            ok: r.ok,
        });
    }
    let min_lambda = family
        .iter()
        .map(|i| i.lambda.abs())
        .min_by(|a, b| a.partial_cmp(b).expect("same field"))
        .expect("nonempty family");
    let points = match blockers {
        None => Vec::new(),
        Some(path) => {
            let w: wire::BlockingSetWire = read_json(path)?;
            let spec = t.polygon().spec();
            let mut hits = Vec::with_capacity(w.points.len());
            for pw in &w.points {
                let point = wire::point_from_wire(pw, spec)?;
                let set = pool(jobs, || hit_indices(&t, &family, &point, n))?.map_err(family_error)?;
                hits.push(PointHits {
                    point: pw.clone(),
                    hit_indices: set.into_iter().collect(),
                });
            }
            hits
        }
    };
    let alpha = billiards_core::QElement::alpha(&p.alpha);
    emit_json(
        out,
        &Report {
            alpha: wire::alpha_to_wire(&p.alpha),
            alpha_decimal: alpha.to_decimal(digits),
            l1: wire::rational_to_wire(&p.l1),
            l2: wire::rational_to_wire(&p.l2),
            n_max: n,
            all_ok: summaries.iter().all(|s| s.ok),
            total_bounces: summaries.iter().map(|s| s.lower_bounces + s.upper_bounces).sum(),
            min_abs_lambda_decimal: min_lambda.to_decimal(digits),
            family: summaries,
            points,
        },
    )
}
