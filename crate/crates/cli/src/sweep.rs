//! Grid experiments: instances × rules × checks × α, one row per cell.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Deserialize;

use crate::args::{rational, Format, Rule};
use crate::table;
use proprep_core::audit::bounds;
use proprep_core::instances::{
    gen_diverging, gen_random, gen_refined, gen_separation, gen_two_cluster,
};
use proprep_core::scalar::format_rational;
use proprep_core::{
    cor_single_audit, core_beta, derive_rankings, distortion_report, pf_gamma, pr_gamma_pair,
    select, single_winner, stability_rho, Algorithm, AuditReport, Check, CoalitionMode, Committee,
    CoverageRecord, Error, Instance, Measure, Norm, RankedProfile, StabilityVariant,
    DEFAULT_ENUMERATION_CAP,
};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: FamilySpec,
    #[serde(default)]
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub checks: Vec<String>,
    /// Rational strings such as `"3/2"`; defaults to `["1"]`.
    #[serde(default)]
    pub alphas: Vec<String>,
    /// Inclusive `[lo, hi]` for pr and pr-strong.
    pub t_range: Option<[usize; 2]>,
    pub cap: Option<usize>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Random {
        n: Vec<usize>,
        m: Vec<usize>,
        k: Vec<usize>,
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_norm")]
        norm: String,
        seeds: Seeds,
    },
    TwoCluster {
        alpha: Vec<String>,
        cross: Option<String>,
    },
    Diverging {
        alpha: Vec<String>,
        cross: Option<String>,
    },
    Refined {
        n: Vec<usize>,
        k: Vec<usize>,
    },
    Separation {
        eps: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Seeds {
    #[serde(default)]
    pub start: u64,
    pub count: u64,
}

fn default_dim() -> usize {
    2
}

fn default_norm() -> String {
    "l1".into()
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> anyhow::Result<SweepSpec> {
        toml::from_str(text).context("reading sweep spec")
    }
}

/// A generated instance and how it was made.
struct Case {
    label: String,
    inst: Instance,
    rankings: Option<RankedProfile>,
}

fn parse_all(xs: &[String]) -> anyhow::Result<Vec<BigRational>> {
    xs.iter()
        .map(|s| rational(s).map_err(anyhow::Error::msg))
        .collect()
}

fn cases(family: &FamilySpec) -> anyhow::Result<Vec<Case>> {
    let plain = |label: String, inst: Instance| Case {
        label,
        inst,
        rankings: None,
    };
    let mut out = Vec::new();
    match family {
        FamilySpec::Random {
            n,
            m,
            k,
            dim,
            norm,
            seeds,
        } => {
            let norm = Norm::from_name(norm)?;
            for &n in n {
                for &m in m {
                    for &k in k {
                        for seed in seeds.start..seeds.start + seeds.count {
                            let inst = gen_random(n, m, k, *dim, norm, seed)?;
                            out.push(plain(format!("random seed={seed}"), inst));
                        }
                    }
                }
            }
        }
        FamilySpec::TwoCluster { alpha, cross } => {
            let cross = parse_all(&[cross.clone().unwrap_or_else(|| "1000".into())])?.remove(0);
            for a in parse_all(alpha)? {
                let inst = gen_two_cluster(&a, &cross)?;
                out.push(plain(
                    format!("two-cluster alpha={}", format_rational(&a)),
                    inst,
                ));
            }
        }
        FamilySpec::Diverging { alpha, cross } => {
            let cross = parse_all(&[cross.clone().unwrap_or_else(|| "1".into())])?.remove(0);
            for a in parse_all(alpha)? {
                let inst = gen_diverging(&a, &cross)?;
                out.push(plain(
                    format!("diverging alpha={}", format_rational(&a)),
                    inst,
                ));
            }
        }
        FamilySpec::Refined { n, k } => {
            for &n in n {
                for &k in k {
                    out.push(plain("refined".into(), gen_refined(n, k)?));
                }
            }
        }
        FamilySpec::Separation { eps } => {
            for e in parse_all(eps)? {
                let (inst, profile) = gen_separation(&e)?;
                out.push(Case {
                    label: format!("separation eps={}", format_rational(&e)),
                    inst,
                    rankings: Some(profile),
                });
            }
        }
    }
    Ok(out)
}

fn parse_rule(s: &str) -> anyhow::Result<Rule> {
    Ok(match s {
        "ear" => Rule::Ear,
        "tgc" => Rule::Tgc,
        "single-winner" => Rule::SingleWinner,
        other => bail!("unknown algorithm `{other}` (expected ear, tgc or single-winner)"),
    })
}

pub fn rule_name(rule: Rule) -> &'static str {
    match rule {
        Rule::Ear => "ear",
        Rule::Tgc => "tgc",
        Rule::SingleWinner => "single-winner",
    }
}

fn uses_alpha(check: Check) -> bool {
    matches!(
        check,
        Check::Core | Check::Pr | Check::PrStrong | Check::CorSingle
    )
}

pub const SWEEP_HEADER: [&str; 16] = [
    "cell",
    "instance",
    "n",
    "m",
    "k",
    "algorithm",
    "check",
    "alpha",
    "t_range",
    "status",
    "value",
    "decimal",
    "bound",
    "margin",
    "satisfied",
    "witness",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub algorithm: String,
    pub check: Check,
    pub alpha: Option<BigRational>,
    pub t_range: Option<(usize, usize)>,
    pub outcome: CellOutcome,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellOutcome {
    Report(Box<AuditReport>),
    CapExceeded(String),
    NotApplicable(&'static str),
    Failed(String),
}

impl SweepRow {
    pub fn violated(&self) -> bool {
        matches!(&self.outcome, CellOutcome::Report(r) if r.satisfied() == Some(false))
    }

    pub fn status(&self) -> &'static str {
        match &self.outcome {
            CellOutcome::Report(r) => match r.satisfied() {
                Some(false) => "VIOLATED",
                _ => "ok",
            },
            CellOutcome::CapExceeded(_) => "cap-exceeded",
            CellOutcome::NotApplicable(_) => "n/a",
            CellOutcome::Failed(_) => "error",
        }
    }

    fn cells(&self, index: usize) -> Vec<String> {
        let mut cells = vec![
            index.to_string(),
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.k.to_string(),
            self.algorithm.clone(),
            self.check.to_string(),
            self.alpha.as_ref().map(format_rational).unwrap_or_default(),
            self.t_range
                .map(|(a, b)| format!("{a}..{b}"))
                .unwrap_or_default(),
            self.status().to_string(),
        ];
        match &self.outcome {
            CellOutcome::Report(r) => {
                cells.push(r.value.to_string());
                cells.push(r.value.to_decimal(6));
                match &r.bound {
                    Some(b) => {
                        cells.push(format!("{:.6}", b.to_f64()));
                        cells.push(format!("{:.6}", b.margin(&r.value)));
                        cells.push(b.admits(&r.value).to_string());
                    }
                    None => cells.extend([String::new(), String::new(), String::new()]),
                }
                cells.push(
                    r.witness
                        .as_ref()
                        .map(proprep_core::audit::witness_summary)
                        .unwrap_or_default(),
                );
            }
            CellOutcome::CapExceeded(msg) | CellOutcome::Failed(msg) => {
                cells.extend([
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
                cells.push(msg.replace(',', ";"));
            }
            CellOutcome::NotApplicable(why) => {
                cells.extend([
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
                cells.push((*why).to_string());
            }
        }
        cells
    }
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn violated(&self) -> bool {
        self.rows.iter().any(SweepRow::violated)
    }

    pub fn render(&self, format: Format) -> String {
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.cells(i))
            .collect();
        table::render(&SWEEP_HEADER, &body, format)
    }

    /// Per (algorithm, check, α): the largest measured value across instances
    /// and the bound, as CSV.
    pub fn plot_data(&self) -> String {
        let mut groups: BTreeMap<(String, String, Option<BigRational>), (Measure, String)> =
            BTreeMap::new();
        for row in &self.rows {
            let CellOutcome::Report(r) = &row.outcome else {
                continue;
            };
            let bound = r
                .bound
                .as_ref()
                .map(|b| format!("{:.6}", b.to_f64()))
                .unwrap_or_default();
            let key = (
                row.algorithm.clone(),
                row.check.to_string(),
                row.alpha.clone(),
            );
            groups
                .entry(key)
                .and_modify(|(m, _)| {
                    if r.value > *m {
                        *m = r.value.clone();
                    }
                })
                .or_insert((r.value.clone(), bound));
        }
        let mut out = String::from("algorithm,check,alpha,x,measured_max,measured_decimal,bound\n");
        for ((alg, check, alpha), (measured, bound)) in groups {
            let x = alpha
                .as_ref()
                .map(|a| Measure::Finite(a.clone()).to_decimal(6))
                .unwrap_or_default();
            out += &format!(
                "{alg},{check},{},{x},{measured},{},{bound}\n",
                alpha.as_ref().map(format_rational).unwrap_or_default(),
                measured.to_decimal(6)
            );
        }
        out
    }

    pub fn write_to(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        std::fs::write(dir.join("table.csv"), self.render(Format::Csv))?;
        std::fs::write(dir.join("plot.csv"), self.plot_data())?;
        Ok(())
    }
}

/// The committee a rule picks, and its coverage record when it has one.
enum Selection {
    Covered(CoverageRecord),
    Winner(usize),
}

fn run_rule(case: &Case, rule: Rule) -> Result<Selection, Error> {
    Ok(match rule {
        Rule::Ear => {
            Selection::Covered(select(&case.inst, Algorithm::Ear, case.rankings.as_ref())?)
        }
        Rule::Tgc => Selection::Covered(select(&case.inst, Algorithm::Tgc, None)?),
        Rule::SingleWinner => {
            let profile = match &case.rankings {
                Some(p) => p.clone(),
                None => derive_rankings(&case.inst),
            };
            Selection::Winner(single_winner(&profile))
        }
    })
}

fn classify(err: Error) -> CellOutcome {
    match err {
        Error::EnumerationCapExceeded { .. } => CellOutcome::CapExceeded(err.to_string()),
        other => CellOutcome::Failed(other.to_string()),
    }
}

struct Plan {
    rules: Vec<Rule>,
    checks: Vec<Check>,
    alphas: Vec<BigRational>,
    t_range: Option<(usize, usize)>,
    cap: usize,
}

fn rows_for(case: &Case, plan: &Plan) -> Vec<SweepRow> {
    let inst = &case.inst;
    let mut rows = Vec::new();
    for &rule in &plan.rules {
        let selection = run_rule(case, rule);
        // pr and pr-strong share one enumeration per α
        let mut pr_cache: BTreeMap<usize, Result<(AuditReport, AuditReport), Error>> =
            BTreeMap::new();
        for &check in &plan.checks {
            let alphas: Vec<Option<&BigRational>> = if uses_alpha(check) {
                plan.alphas.iter().map(Some).collect()
            } else {
                vec![None]
            };
            for (ai, alpha) in alphas.into_iter().enumerate() {
                let t_range = matches!(check, Check::Pr | Check::PrStrong)
                    .then(|| plan.t_range.unwrap_or((1, inst.k())));
                let outcome = match &selection {
                    Err(e) => CellOutcome::Failed(e.to_string()),
                    Ok(sel) => audit_cell(inst, sel, rule, check, alpha, plan, ai, &mut pr_cache),
                };
                rows.push(SweepRow {
                    instance: case.label.clone(),
                    n: inst.n(),
                    m: inst.m(),
                    k: inst.k(),
                    algorithm: rule_name(rule).into(),
                    check,
                    alpha: alpha.cloned(),
                    t_range,
                    outcome,
                });
            }
        }
    }
    rows
}

#[allow(clippy::too_many_arguments)]
fn audit_cell(
    inst: &Instance,
    sel: &Selection,
    rule: Rule,
    check: Check,
    alpha: Option<&BigRational>,
    plan: &Plan,
    alpha_index: usize,
    pr_cache: &mut BTreeMap<usize, Result<(AuditReport, AuditReport), Error>>,
) -> CellOutcome {
    let one = BigRational::one();
    let a = alpha.unwrap_or(&one);
    let result = match (sel, check) {
        (Selection::Winner(w), Check::Distortion) => distortion_report(inst, *w)
            .map(|r| r.with_bound(Some(bounds::single_winner_distortion()))),
        (Selection::Winner(_), _) => {
            return CellOutcome::NotApplicable(
                "single-winner output is audited for distortion only",
            )
        }
        (Selection::Covered(_), Check::Distortion) => {
            return CellOutcome::NotApplicable("distortion applies to single-winner output")
        }
        (Selection::Covered(rec), check) => {
            let committee: Committee = rec.committee();
            let report = match check {
                Check::Pf => pf_gamma(inst, &committee),
                Check::Core => core_beta(inst, &committee, a),
                Check::Pr | Check::PrStrong => {
                    let pair = pr_cache.entry(alpha_index).or_insert_with(|| {
                        pr_gamma_pair(
                            inst,
                            &committee,
                            a,
                            plan.t_range,
                            CoalitionMode::Exact { cap: plan.cap },
                        )
                    });
                    match pair {
                        Ok((weak, strong)) => {
                            Ok(if check == Check::Pr { weak } else { strong }.clone())
                        }
                        Err(e) => Err(e.clone()),
                    }
                }
                Check::CorSingle => cor_single_audit(inst, rec, a, plan.cap),
                Check::Stability | Check::StabilityCardinal => {
                    let variant = match rec.algorithm {
                        Algorithm::Ear => StabilityVariant::Ordinal,
                        Algorithm::Tgc => StabilityVariant::Cardinal,
                    };
                    stability_rho(inst, rec, variant, plan.cap)
                }
                Check::Distortion => unreachable!(),
            };
            let algorithm = match rule {
                Rule::Ear => Algorithm::Ear,
                _ => Algorithm::Tgc,
            };
            report.map(|r| {
                let bound = bounds::guarantee(r.check, algorithm, alpha);
                r.with_bound(bound)
            })
        }
    };
    match result {
        Ok(r) => CellOutcome::Report(Box::new(r)),
        Err(e) => classify(e),
    }
}

/// Runs every cell. Instances are processed in parallel; rows come back in
/// cell order.
pub fn run_sweep(spec: &SweepSpec) -> anyhow::Result<SweepResult> {
    let rules = spec
        .algorithms
        .iter()
        .map(|s| parse_rule(s))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let checks = spec
        .checks
        .iter()
        .map(|s| Check::from_tag(s))
        .collect::<Result<Vec<_>, _>>()?;
    let alphas = if spec.alphas.is_empty() {
        vec![BigRational::one()]
    } else {
        parse_all(&spec.alphas)?
    };
    let plan = Plan {
        rules,
        checks,
        alphas,
        t_range: spec.t_range.map(|[a, b]| (a, b)),
        cap: spec.cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
    };
    if plan.rules.is_empty() || plan.checks.is_empty() {
        return Ok(SweepResult { rows: Vec::new() });
    }
    let cases = cases(&spec.family)?;
    let rows = cases
        .par_iter()
        .map(|case| rows_for(case, &plan))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SweepResult { rows })
}
