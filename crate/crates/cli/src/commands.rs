use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hunt_core::catalog::catalog_list;
use hunt_core::classifier::{h_verdict_sum, h_verdict_with, Assertions};
use hunt_core::conditions::{check_thm25, CheckParams, GrowthFunctionFamily, Registry, Settings};
use hunt_core::exponent::ExponentHandle;
use hunt_core::model::{decompose_pro35, decompose_thm25, Atom, FiniteMeasure, LevyComponent, LevyMeasure, LevyTriplet};
use hunt_core::pairs::SplitWitness;
use hunt_core::report::VerdictReport;
use serde::Serialize;

use crate::error::CliError;
use crate::spec::{load, AssertSpec, ProcessSpecFile};

#[derive(Debug, Parser)]
#[command(name = "levyhunt", version, about = "Check sufficient conditions for Hunt's hypothesis (H) on Levy processes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// largest |z| sampled by the asymptotic checks
    #[arg(long, global = true)]
    pub zmax: Option<f64>,
    /// finest epsilon is 2^-N in the small-jump checks
    #[arg(long, global = true)]
    pub eps_min_exp: Option<u32>,
    /// threshold used by the lambda-limit check
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// render reports as prose instead of JSON
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Pro35,
    Thm25,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate psi, A and B
    Exponent {
        spec: String,
        /// a point; n comma-separated coordinates in dimension n
        #[arg(long = "z", allow_hyphen_values = true)]
        z: Vec<String>,
        /// log10 of the first grid point (along the first axis)
        #[arg(long)]
        grid_min: Option<f64>,
        #[arg(long)]
        grid_max: Option<f64>,
        #[arg(long, default_value_t = 4)]
        per_decade: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run one condition checker
    Check {
        spec: String,
        #[arg(long)]
        condition: String,
        /// growth function as family[:constant], family one of const, log, logloglog
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// spec whose Levy measure is used as nu
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        /// test measure for pro123 as x:w,x:w
        #[arg(long, allow_hyphen_values = true)]
        test_atoms: Option<String>,
    },
    /// Decide (H) for one process
    Classify { spec: String },
    /// Decide (H) for the sum of two independent processes
    Sum {
        spec1: String,
        spec2: String,
        #[arg(long)]
        assert_h1: bool,
        #[arg(long)]
        assert_bounded_resolvent: bool,
        #[arg(long)]
        assert_densities: bool,
        /// use phi11 = Im psi1, phi12 = 0 as the split witness
        #[arg(long)]
        witness_trivial: bool,
        #[arg(long)]
        family: Option<String>,
    },
    /// Split a process into two whose exponents add up to the original
    Decompose {
        spec: String,
        #[arg(long, value_enum)]
        method: Method,
        /// finite part to remove, as x:w,x:w (default: every atom)
        #[arg(long, allow_hyphen_values = true)]
        mu1: Option<String>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Print the canonical form of a spec
    Spec { spec: String },
    /// Named reference processes
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
}

impl GlobalOpts {
    pub fn settings(&self) -> Result<Settings, CliError> {
        let mut s = Settings::default();
        if let Some(z) = self.zmax {
            if !(z > 10.0 && z.is_finite()) {
                return Err(CliError::Usage("--zmax must be finite and > 10".into()));
            }
            s.zmax = z;
        }
        if let Some(e) = self.eps_min_exp {
            if e < 4 + s.eps_window as u32 {
                return Err(CliError::Usage(format!("--eps-min-exp must be at least {}", 4 + s.eps_window)));
            }
            s.eps_min_exp = e;
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(CliError::Usage("--tol must be positive".into()));
            }
            s.tol = t;
        }
        Ok(s)
    }
}

fn triplet(source: &str) -> Result<(LevyTriplet, Option<AssertSpec>), CliError> {
    let spec = load(source)?;
    Ok((spec.to_triplet()?, spec.assert))
}

fn parse_family(s: &str) -> Result<GrowthFunctionFamily, CliError> {
    let (name, c) = s.split_once(':').unwrap_or((s, "1"));
    let c: f64 = c.parse().map_err(|_| CliError::Usage(format!("bad family constant in {s:?}")))?;
    match name {
        "const" | "constant" => Ok(GrowthFunctionFamily::Constant(c)),
        "log" => Ok(GrowthFunctionFamily::Log(c)),
        "logloglog" => Ok(GrowthFunctionFamily::LogLogLog(c)),
        _ => Err(CliError::Usage(format!("unknown family {name:?}"))),
    }
}

fn parse_atoms(s: &str) -> Result<Vec<Atom>, CliError> {
    s.split(',')
        .map(|p| {
            let (x, w) = p.split_once(':').ok_or_else(|| CliError::Usage(format!("expected x:w, got {p:?}")))?;
            let num = |v: &str| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number {v:?}")));
            Ok(Atom::scalar(num(x)?, num(w)?))
        })
        .collect()
}

fn parse_point(s: &str, dim: usize) -> Result<Vec<f64>, CliError> {
    let z: Vec<f64> = s.split(',').map(|v| v.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| CliError::Usage(format!("bad point {s:?}")))?;
    if z.len() != dim {
        return Err(CliError::Usage(format!("point {s:?} has {} coordinates, expected {dim}", z.len())));
    }
    Ok(z)
}

fn measure_of(source: &str) -> Result<LevyMeasure, CliError> {
    Ok(load(source)?.levy_measure.to_measure())
}

fn render(r: &VerdictReport, text: bool) -> String {
    if text {
        r.to_text()
    } else {
        r.to_json() + "\n"
    }
}

#[derive(Serialize)]
struct Row {
    z: serde_json::Value,
    re: f64,
    im: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: f64,
}

#[derive(Serialize)]
struct DecomposeReport {
    method: &'static str,
    first: ProcessSpecFile,
    second: ProcessSpecFile,
    /// largest |psi - psi1 - psi2| / max(1, |psi|) over 64 points
    additivity_error: f64,
    files: Vec<String>,
}

fn additivity_error(t: &LevyTriplet, a: &LevyTriplet, b: &LevyTriplet) -> Result<f64, CliError> {
    let (h, h1, h2) = (ExponentHandle::new(t.clone()), ExponentHandle::new(a.clone()), ExponentHandle::new(b.clone()));
    let mut worst: f64 = 0.0;
    for k in 0..64 {
        let z = 10f64.powf(-2.0 + 6.0 * k as f64 / 63.0);
        let p: Vec<f64> = (0..t.dim).map(|i| if i == 0 { z } else { 0.5 * z }).collect();
        let whole = h.psi(&p)?;
        let parts = h1.psi(&p)? + h2.psi(&p)?;
        worst = worst.max((whole - parts).norm() / whole.norm().max(1.0));
    }
    Ok(worst)
}

/// Runs a parsed command and returns what goes to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    if let Some(n) = cli.global.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let s = cli.global.settings()?;
    let text = cli.global.text;
    match &cli.command {
        Command::Exponent { spec, z, grid_min, grid_max, per_decade, format } => {
            let (t, _) = triplet(spec)?;
            let dim = t.dim;
            let mut points: Vec<Vec<f64>> = z.iter().map(|p| parse_point(p, dim)).collect::<Result<_, _>>()?;
            if let (Some(lo), Some(hi)) = (grid_min, grid_max) {
                if !(hi >= lo) || *per_decade == 0 {
                    return Err(CliError::Usage("grid needs grid-min <= grid-max and per-decade > 0".into()));
                }
                let n = ((hi - lo) * *per_decade as f64).round() as usize;
                for k in 0..=n {
                    let mut p = vec![0.0; dim];
                    p[0] = 10f64.powf(lo + k as f64 / *per_decade as f64);
                    points.push(p);
                }
            } else if grid_min.is_some() || grid_max.is_some() {
                return Err(CliError::Usage("--grid-min and --grid-max go together".into()));
            }
            if points.is_empty() {
                return Err(CliError::Usage("give --z points or a grid".into()));
            }
            let h = ExponentHandle::new(t);
            let mut rows = Vec::with_capacity(points.len());
            for p in &points {
                let q = h.parts(p)?;
                let z = if dim == 1 { serde_json::json!(p[0]) } else { serde_json::json!(p) };
                rows.push(Row { z, re: q.re, im: q.im, a: q.a, b: q.b });
            }
            Ok(match format {
                Format::Json => serde_json::to_string_pretty(&serde_json::json!({ "rows": rows })).unwrap() + "\n",
                Format::Tsv => {
                    let mut out = String::from("z\tre\tim\tA\tB\n");
                    for (p, r) in points.iter().zip(&rows) {
                        let z: Vec<String> = p.iter().map(f64::to_string).collect();
                        out += &format!("{}\t{}\t{}\t{}\t{}\n", z.join(","), r.re, r.im, r.a, r.b);
                    }
                    out
                }
            })
        }
        Command::Check { spec, condition, family, k, delta, nu, alpha, test_atoms } => {
            let (t, _) = triplet(spec)?;
            let reg = Registry::standard();
            let cond = reg.get(condition)?;
            let params = CheckParams {
                family: family.as_deref().map(parse_family).transpose()?,
                k: *k,
                delta: *delta,
                nu: nu.as_deref().map(measure_of).transpose()?,
                alpha: *alpha,
                test_measure: match test_atoms {
                    Some(a) => Some(FiniteMeasure::new(parse_atoms(a)?)?),
                    None => None,
                },
            };
            let v = cond.check(&ExponentHandle::new(t), &params, &s).map_err(|e| match e {
                hunt_core::error::HuntError::InvalidParameter(m) => CliError::Usage(m),
                other => other.into(),
            })?;
            Ok(render(&VerdictReport::from_verdict(&v, &s), text))
        }
        Command::Classify { spec } => {
            let (t, asserted) = triplet(spec)?;
            let a = Assertions { has_densities: asserted.is_some_and(|a| a.has_densities), ..Default::default() };
            let r = h_verdict_with(&ExponentHandle::new(t), &a, &s);
            Ok(render(&VerdictReport::from_h(&r, &s), text))
        }
        Command::Sum { spec1, spec2, assert_h1, assert_bounded_resolvent, assert_densities, witness_trivial, family } => {
            let (t1, a1) = triplet(spec1)?;
            let (t2, _) = triplet(spec2)?;
            let a1 = a1.unwrap_or_default();
            let h1 = Arc::new(ExponentHandle::new(t1));
            let a = Assertions {
                h_holds: *assert_h1 || a1.h_holds,
                bounded_resolvent: *assert_bounded_resolvent || a1.bounded_resolvent,
                has_densities: *assert_densities || a1.has_densities,
                witness: witness_trivial.then(|| SplitWitness::trivial(h1.clone())),
                family: family.as_deref().map(parse_family).transpose()?,
            };
            let r = h_verdict_sum(&h1, &ExponentHandle::new(t2), &a, &s)?;
            Ok(render(&VerdictReport::from_h(&r, &s), text))
        }
        Command::Decompose { spec, method, mu1, k, delta, nu, out_dir } => {
            let (t, _) = triplet(spec)?;
            let (name, split) = match method {
                Method::Pro35 => {
                    let m1 = match mu1 {
                        Some(a) => LevyMeasure::new(vec![LevyComponent::Atoms(parse_atoms(a)?)]),
                        None => {
                            let atoms = t.mu.parts().atoms;
                            if atoms.is_empty() {
                                return Err(CliError::Usage("the measure has no atoms; pass --mu1".into()));
                            }
                            LevyMeasure::new(vec![LevyComponent::Atoms(atoms)])
                        }
                    };
                    ("pro35", decompose_pro35(&t, &m1)?)
                }
                Method::Thm25 => {
                    let (Some(k), Some(delta)) = (k, delta) else {
                        return Err(CliError::Usage("thm25 needs --k and --delta".into()));
                    };
                    let nu = nu.as_deref().map(measure_of).transpose()?.unwrap_or_else(LevyMeasure::zero);
                    let v = check_thm25(&t, *k, *delta, &nu);
                    if !v.holds() {
                        let mut why: Vec<String> = v.caveats.clone();
                        if let Some(f) = v.evidence.get("failed") {
                            why.push(format!("failed: {f}"));
                        }
                        return Err(CliError::Hypothesis(why.join("; ")));
                    }
                    ("thm25", decompose_thm25(&t, *delta, &nu, true)?)
                }
            };
            let err = additivity_error(&t, &split.first, &split.second)?;
            let (first, second) = (ProcessSpecFile::from_triplet(&split.first), ProcessSpecFile::from_triplet(&split.second));
            let mut files = Vec::new();
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir)?;
                for (file, spec) in [("first.json", &first), ("second.json", &second)] {
                    let path = dir.join(file);
                    std::fs::write(&path, spec.to_json())?;
                    files.push(path.display().to_string());
                }
            }
            let report = DecomposeReport { method: name, first, second, additivity_error: err, files };
            Ok(if text {
                format!("{name}: additivity error {err:e}\nfirst: {}\nsecond: {}\n", report.first.to_json().trim(), report.second.to_json().trim())
            } else {
                serde_json::to_string_pretty(&report).unwrap() + "\n"
            })
        }
        Command::Spec { spec } => {
            let spec = load(spec)?;
            spec.to_triplet()?;
            Ok(spec.to_json())
        }
        Command::Catalog { action: CatalogAction::List } => {
            let names = catalog_list();
            Ok(if text { names.join("\n") + "\n" } else { serde_json::to_string_pretty(&names).unwrap() + "\n" })
        }
    }
}
