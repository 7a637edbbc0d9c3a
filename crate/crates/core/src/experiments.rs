//! Batch runs: composition tables, the gadget census, and amplifier pipeline
//! grids. Outputs are CSV (manifest as leading `#` rows) or JSON lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplify::{verify_amplifier_pipeline, AmplifierReport, Middle};
use crate::boolfn::{eval_power, BooleanFunction, Builtin, FunctionClass};
use crate::degrees::Analyzer;
use crate::error::{Error, Result};
use crate::expr::parse_function;
use crate::gadgets::{find_min_sensitive_block2, simulate, verify_circuit, Gate2, SensitiveBlock};
use crate::rational::{self, Rational};
use crate::spectral::spectral_sensitivity;

const SPECTRAL_TOL: f64 = 1e-12;
/// Largest base arity accepted by the census.
pub const MAX_CENSUS_ARITY: usize = 6;
/// Largest arity enumerated exhaustively by the census.
pub const MAX_EXHAUSTIVE_CENSUS_ARITY: usize = 4;

/// A function together with the expression or name it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFunction {
    pub name: String,
    pub function: BooleanFunction,
}

impl NamedFunction {
    pub fn new(name: impl Into<String>, function: BooleanFunction) -> Self {
        NamedFunction {
            name: name.into(),
            function,
        }
    }

    pub fn builtin(kind: Builtin, arity: usize) -> Result<Self> {
        let name = format!("{kind}{arity}");
        Ok(NamedFunction::new(
            name,
            BooleanFunction::builtin(kind, arity)?,
        ))
    }
}

/// Provenance written at the top of every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
}

impl Manifest {
    pub fn new(experiment: &str, seed: Option<u64>, config: serde_json::Value) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            experiment: experiment.into(),
            seed,
            config,
        }
    }

    fn comment_lines(&self) -> Result<String> {
        Ok(format!("# manifest: {}\n", serde_json::to_string(self)?))
    }
}

fn csv_text(
    manifest: &Manifest,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    let mut out = manifest.comment_lines()?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn jsonl_text<T: Serialize>(manifest: &Manifest, rows: &[T]) -> Result<String> {
    let mut out = manifest.comment_lines()?;
    for r in rows {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.9}")).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub f_id: String,
    pub g_id: String,
    pub arity_fg: usize,
    pub deg_f: Option<usize>,
    pub deg_g: Option<usize>,
    pub adeg_f: Option<usize>,
    pub adeg_g: Option<usize>,
    pub adeg_fg: Option<usize>,
    pub lambda_f: Option<f64>,
    pub lambda_g: Option<f64>,
    pub lambda_fg: Option<f64>,
    /// `adeg_fg / (adeg_f · adeg_g)`, absent when either factor is 0.
    #[serde(with = "rational::serde_rational_opt", default)]
    pub ratio: Option<Rational>,
    pub sandwich_ok: bool,
    /// All three approximate degrees carry exactly verified certificates.
    pub certified: bool,
    pub error: Option<String>,
    pub runtime_ms: u128,
}

impl ExperimentRow {
    pub const CSV_HEADER: [&'static str; 16] = [
        "f",
        "g",
        "arity_fg",
        "deg_f",
        "deg_g",
        "adeg_f",
        "adeg_g",
        "adeg_fg",
        "lambda_f",
        "lambda_g",
        "lambda_fg",
        "ratio",
        "sandwich_ok",
        "certified",
        "error",
        "runtime_ms",
    ];

    fn record(&self, with_runtime: bool) -> Vec<String> {
        vec![
            self.f_id.clone(),
            self.g_id.clone(),
            self.arity_fg.to_string(),
            opt(&self.deg_f),
            opt(&self.deg_g),
            opt(&self.adeg_f),
            opt(&self.adeg_g),
            opt(&self.adeg_fg),
            opt_f64(self.lambda_f),
            opt_f64(self.lambda_g),
            opt_f64(self.lambda_fg),
            self.ratio
                .as_ref()
                .map(rational::format)
                .unwrap_or_default(),
            self.sandwich_ok.to_string(),
            self.certified.to_string(),
            self.error.clone().unwrap_or_default(),
            if with_runtime {
                self.runtime_ms.to_string()
            } else {
                String::new()
            },
        ]
    }

    /// `max(adeg f, adeg g) ≤ adeg(f∘g) ≤ deg f · deg g`.
    pub fn sandwich_holds(&self) -> bool {
        match (
            self.adeg_f,
            self.adeg_g,
            self.adeg_fg,
            self.deg_f,
            self.deg_g,
        ) {
            (Some(af), Some(ag), Some(afg), Some(df), Some(dg)) => {
                af.max(ag) <= afg && afg <= df * dg
            }
            _ => false,
        }
    }
}

/// Rows as CSV. With `with_runtime = false` the runtime column is left
/// blank so reruns compare byte for byte.
pub fn rows_to_csv(
    rows: &[ExperimentRow],
    manifest: &Manifest,
    with_runtime: bool,
) -> Result<String> {
    csv_text(
        manifest,
        &ExperimentRow::CSV_HEADER,
        rows.iter().map(|r| r.record(with_runtime)),
    )
}

pub fn rows_to_jsonl(rows: &[ExperimentRow], manifest: &Manifest) -> Result<String> {
    jsonl_text(manifest, rows)
}

fn composition_row(
    analyzer: &Analyzer,
    f: &NamedFunction,
    g: &NamedFunction,
    eps: &Rational,
) -> ExperimentRow {
    let start = Instant::now();
    let mut row = ExperimentRow {
        f_id: f.name.clone(),
        g_id: g.name.clone(),
        arity_fg: f.function.arity() * g.function.arity(),
        deg_f: None,
        deg_g: None,
        adeg_f: None,
        adeg_g: None,
        adeg_fg: None,
        lambda_f: None,
        lambda_g: None,
        lambda_fg: None,
        ratio: None,
        sandwich_ok: false,
        certified: false,
        error: None,
        runtime_ms: 0,
    };
    let mut fill = || -> Result<()> {
        let fg = f.function.compose_with(&g.function)?;
        row.deg_f = Some(analyzer.exact_degree(&f.function)?.degree);
        row.deg_g = Some(analyzer.exact_degree(&g.function)?.degree);
        row.lambda_f = Some(spectral_sensitivity(&f.function, SPECTRAL_TOL)?.lambda);
        row.lambda_g = Some(spectral_sensitivity(&g.function, SPECTRAL_TOL)?.lambda);
        row.lambda_fg = Some(spectral_sensitivity(&fg, SPECTRAL_TOL)?.lambda);
        let cf = analyzer.approx_degree(&f.function, eps)?;
        let cg = analyzer.approx_degree(&g.function, eps)?;
        let cfg = analyzer.approx_degree(&fg, eps)?;
        row.adeg_f = Some(cf.degree);
        row.adeg_g = Some(cg.degree);
        row.adeg_fg = Some(cfg.degree);
        row.certified = cf.certified && cg.certified && cfg.certified;
        if cf.degree > 0 && cg.degree > 0 {
            row.ratio = Some(rational::ratio(
                cfg.degree as i64,
                (cf.degree * cg.degree) as i64,
            ));
        }
        Ok(())
    };
    if let Err(e) = fill() {
        row.error = Some(e.to_string());
    }
    row.sandwich_ok = row.sandwich_holds();
    row.runtime_ms = start.elapsed().as_millis();
    row
}

/// One row per pair, in input order. A failing row records its error and
/// the run continues.
pub fn composition_table(
    analyzer: &Analyzer,
    pairs: &[(NamedFunction, NamedFunction)],
    eps: &Rational,
) -> Vec<ExperimentRow> {
    pairs
        .par_iter()
        .map(|(f, g)| composition_row(analyzer, f, g, eps))
        .collect()
}

/// Pairs file: one `f | g` pair of expressions per line; blank lines and
/// lines starting with `#` are skipped.
pub fn parse_pairs(text: &str) -> Result<Vec<(NamedFunction, NamedFunction)>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (f, g) = line
            .split_once('|')
            .ok_or_else(|| Error::InvalidArgument(format!("line {}: expected `f | g`", ln + 1)))?;
        let named = |s: &str| -> Result<NamedFunction> {
            let s = s.trim();
            let func = parse_function(s)
                .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", ln + 1)))?;
            Ok(NamedFunction::new(s, func))
        };
        out.push((named(f)?, named(g)?));
    }
    Ok(out)
}

/// Twelve pairs with `arity(f)·arity(g) ≤ 12`.
pub fn default_composition_grid() -> Vec<(NamedFunction, NamedFunction)> {
    use Builtin::*;
    let grid: [(Builtin, usize, Builtin, usize); 12] = [
        (And, 2, Parity, 2),
        (Parity, 2, Parity, 2),
        (Maj, 3, Maj, 3),
        (Or, 2, And, 2),
        (And, 2, Or, 2),
        (And, 3, Or, 3),
        (Or, 2, Maj, 3),
        (Maj, 3, Parity, 2),
        (And, 2, Maj, 3),
        (Parity, 2, And, 2),
        (Or, 3, And, 2),
        (And, 3, Or, 4),
    ];
    grid.iter()
        .map(|&(fk, fa, gk, ga)| {
            (
                NamedFunction::builtin(fk, fa).expect("builtin"),
                NamedFunction::builtin(gk, ga).expect("builtin"),
            )
        })
        .collect()
}

/// Outcome of the gadget checks for one base function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub function: String,
    pub and_depth: Option<usize>,
    pub or_depth: Option<usize>,
    pub block: Option<SensitiveBlock>,
    /// Both circuits verified, both embed into `h^depth`, depths ≤ 3, and the
    /// block re-checks.
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub arity: usize,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    /// Qualifying functions by inclusion–exclusion (exhaustive runs only).
    pub expected: Option<u64>,
    pub qualifying: usize,
    pub passed: usize,
    pub max_depth: usize,
    pub entries: Vec<CensusEntry>,
}

impl CensusReport {
    pub const CSV_HEADER: [&'static str; 7] = [
        "function",
        "and_depth",
        "or_depth",
        "block_point",
        "block_indices",
        "passed",
        "error",
    ];

    pub fn all_passed(&self) -> bool {
        self.passed == self.qualifying && self.expected.is_none_or(|e| e == self.qualifying as u64)
    }

    pub fn to_csv(&self, manifest: &Manifest) -> Result<String> {
        csv_text(
            manifest,
            &Self::CSV_HEADER,
            self.entries.iter().map(|e| {
                vec![
                    e.function.clone(),
                    opt(&e.and_depth),
                    opt(&e.or_depth),
                    e.block
                        .as_ref()
                        .map(|b| format!("{:#x}", b.point))
                        .unwrap_or_default(),
                    e.block
                        .as_ref()
                        .map(|b| format!("{} {}", b.indices.0, b.indices.1))
                        .unwrap_or_default(),
                    e.passed.to_string(),
                    e.error.clone().unwrap_or_default(),
                ]
            }),
        )
    }
}

/// Number of functions on `t` bits that depend on every variable:
/// `Σ_k (−1)^{t−k} C(t,k) 2^{2^k}`.
pub fn count_depending_on_all(t: usize) -> u64 {
    assert!(t <= 5, "2^(2^t) overflows u64 beyond t = 5");
    let mut total: i128 = 0;
    let mut binom: i128 = 1;
    for k in 0..=t {
        let term = binom * (1i128 << (1u32 << k));
        total += if (t - k) % 2 == 0 { term } else { -term };
        binom = binom * (t - k) as i128 / (k + 1) as i128;
    }
    total as u64
}

/// Functions the AND₂/OR₂ constructions apply to: depending on all of at
/// least 2 variables, and none of PARITY, ¬PARITY, AND, OR. For `t ≥ 2`
/// there are `count_depending_on_all(t) − 4` of them.
pub fn qualifies(h: &BooleanFunction) -> bool {
    matches!(
        h.classify(),
        FunctionClass::MonotoneOther | FunctionClass::NonMonotoneOther
    )
}

fn census_entry(h: &BooleanFunction) -> CensusEntry {
    let mut e = CensusEntry {
        function: h.table_hex(),
        and_depth: None,
        or_depth: None,
        block: None,
        passed: false,
        error: None,
    };
    let mut run = || -> Result<bool> {
        let mut ok = true;
        for gate in [Gate2::And, Gate2::Or] {
            let target = BooleanFunction::builtin(
                match gate {
                    Gate2::And => Builtin::And,
                    Gate2::Or => Builtin::Or,
                },
                2,
            )?;
            let mut c = simulate(h, gate)?;
            ok &= verify_circuit(&mut c, &target)? && c.depth <= 3;
            let p = c.to_projection()?;
            ok &= (0..4).all(|y| eval_power(h, c.depth, &p.source_bits(y)) == target.value(y));
            match gate {
                Gate2::And => e.and_depth = Some(c.depth),
                Gate2::Or => e.or_depth = Some(c.depth),
            }
        }
        let b = find_min_sensitive_block2(h)?;
        ok &= b.holds_for(h);
        e.block = Some(b);
        Ok(ok)
    };
    match run() {
        Ok(ok) => e.passed = ok,
        Err(err) => e.error = Some(err.to_string()),
    }
    e
}

/// Runs the gadget checks on every qualifying function of arity `t`
/// (`sample = None`, `t ≤ 4`) or on `sample` uniformly drawn qualifying
/// functions.
pub fn gadget_census(t: usize, sample: Option<usize>, seed: u64) -> Result<CensusReport> {
    if !(2..=MAX_CENSUS_ARITY).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "census arity must lie in 2..={MAX_CENSUS_ARITY}, got {t}"
        )));
    }
    let (functions, expected, exhaustive) = match sample {
        None => {
            if t > MAX_EXHAUSTIVE_CENSUS_ARITY {
                return Err(Error::LimitExceeded(format!(
                    "exhaustive census is capped at arity {MAX_EXHAUSTIVE_CENSUS_ARITY}; pass a sample size"
                )));
            }
            let fs: Vec<BooleanFunction> = (0u64..1 << (1u32 << t))
                .map(|bits| BooleanFunction::from_u64(t, bits))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(qualifies)
                .collect();
            (fs, Some(count_depending_on_all(t) - 4), true)
        }
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut fs = Vec::with_capacity(k);
            while fs.len() < k {
                let h = BooleanFunction::from_fn(t, |_| rng.gen::<bool>())?;
                if qualifies(&h) {
                    fs.push(h);
                }
            }
            (fs, None, false)
        }
    };
    let entries: Vec<CensusEntry> = functions.par_iter().map(census_entry).collect();
    Ok(CensusReport {
        arity: t,
        exhaustive,
        seed: sample.map(|_| seed),
        expected,
        qualifying: entries.len(),
        passed: entries.iter().filter(|e| e.passed).count(),
        max_depth: entries
            .iter()
            .flat_map(|e| [e.and_depth, e.or_depth])
            .flatten()
            .max()
            .unwrap_or(0),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub outers: Vec<NamedFunction>,
    pub inners: Vec<NamedFunction>,
    pub ts: Vec<usize>,
    pub middle: Middle,
    #[serde(with = "rational::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "rational::serde_rational")]
    pub delta: Rational,
}

impl Default for PipelineConfig {
    /// `{AND₂, OR₂, PARITY₂} × {PARITY₂, OR₂} × {1, 3}` with a MAJ middle,
    /// `ε = 1/3`, `δ = 1/4`.
    fn default() -> Self {
        let nf = |k, n| NamedFunction::builtin(k, n).expect("builtin");
        PipelineConfig {
            outers: vec![
                nf(Builtin::And, 2),
                nf(Builtin::Or, 2),
                nf(Builtin::Parity, 2),
            ],
            inners: vec![nf(Builtin::Parity, 2), nf(Builtin::Or, 2)],
            ts: vec![1, 3],
            middle: Middle::Maj,
            epsilon: rational::ratio(1, 3),
            delta: rational::ratio(1, 4),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub outer: String,
    pub inner: String,
    pub t: usize,
    pub report: Option<AmplifierReport>,
    pub error: Option<String>,
}

impl PipelineRun {
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.passed)
    }
}

/// Every `(f, g, t)` of the grid, in grid order.
pub fn pipeline_suite(analyzer: &Analyzer, config: &PipelineConfig) -> Vec<PipelineRun> {
    let mut jobs = Vec::new();
    for f in &config.outers {
        for g in &config.inners {
            for &t in &config.ts {
                jobs.push((f, g, t));
            }
        }
    }
    jobs.par_iter()
        .map(|&(f, g, t)| {
            let r = verify_amplifier_pipeline(
                analyzer,
                &f.function,
                &g.function,
                t,
                &config.epsilon,
                &config.delta,
                &config.middle,
            );
            let (report, error) = match r {
                Ok(rep) => (Some(rep), None),
                Err(e) => (None, Some(e.to_string())),
            };
            PipelineRun {
                outer: f.name.clone(),
                inner: g.name.clone(),
                t,
                report,
                error,
            }
        })
        .collect()
}

pub fn pipeline_to_csv(runs: &[PipelineRun], manifest: &Manifest) -> Result<String> {
    let mut header: Vec<&str> = AmplifierReport::CSV_HEADER.split(',').collect();
    header.push("error");
    let width = header.len();
    csv_text(
        manifest,
        &header,
        runs.iter().map(|r| match &r.report {
            Some(rep) => {
                let mut v: Vec<String> = rep.csv_row().split(',').map(str::to_string).collect();
                v[0] = r.outer.clone();
                v[1] = r.inner.clone();
                v.push(String::new());
                v
            }
            None => {
                let mut v = vec![String::new(); width];
                v[0] = r.outer.clone();
                v[1] = r.inner.clone();
                v[3] = r.t.to_string();
                v[width - 1] = r.error.clone().unwrap_or_default();
                v
            }
        }),
    )
}

pub fn pipeline_to_jsonl(runs: &[PipelineRun], manifest: &Manifest) -> Result<String> {
    jsonl_text(manifest, runs)
}
