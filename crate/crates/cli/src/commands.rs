use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use proprep_core::audit::bounds;
use proprep_core::instances::{
    gen_diverging, gen_random, gen_random_block, gen_refined, gen_separation_for, gen_two_cluster,
};
use proprep_core::io::{
    parse_committee, parse_coverage, parse_instance, write_committee, write_coverage,
    write_instance,
};
use proprep_core::{
    cor_single_audit, core_beta, derive_rankings, distortion_report, pf_gamma, pr_gamma,
    pr_strong_gamma, select, single_winner, stability_rho, validate_metric, Algorithm, AuditReport,
    CoalitionMode, Committee, Instance, Norm, RankedProfile, StabilityVariant, Threshold,
};

use crate::args::{
    AuditArgs, BenchArgs, CheckArg, Cli, Command, Family, Format, GenArgs, Rule, SelectArgs,
    SweepArgs,
};
use crate::opcount::opcount_bench;
use crate::sweep::{run_sweep, SweepSpec};
use crate::{opcount, table};

/// What a command produced: text for stdout, and whether a guarantee failed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub violated: bool,
}

impl Outcome {
    fn text(stdout: String) -> Self {
        Outcome {
            stdout,
            violated: false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.violated {
            2
        } else {
            0
        }
    }
}

pub fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Select(a) => select_cmd(a, cli.format),
        Command::Audit(a) => audit(a, cli.format),
        Command::Sweep(a) => sweep(a, cli.format),
        Command::Bench(a) => bench(a, cli.format),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: String) -> anyhow::Result<Outcome> {
    match out {
        Some(p) => {
            write(p, &text)?;
            Ok(Outcome::default())
        }
        None => Ok(Outcome::text(text)),
    }
}

fn gen(args: GenArgs) -> anyhow::Result<Outcome> {
    let (inst, rankings) = match args.family {
        Family::TwoCluster { alpha, cross } => (gen_two_cluster(&alpha, &cross)?, None),
        Family::Diverging { alpha, cross } => (gen_diverging(&alpha, &cross)?, None),
        Family::Refined { n, k } => (gen_refined(n, k)?, None),
        Family::Separation { eps, chosen } => {
            if !(1..=3).contains(&chosen) {
                bail!("--chosen must be 1, 2 or 3");
            }
            let (inst, profile) = gen_separation_for(&eps, chosen - 1)?;
            (inst, Some(profile))
        }
        Family::Random {
            n,
            m,
            k,
            dim,
            norm,
            seed,
            block,
        } => {
            let norm = Norm::from_name(&norm)?;
            let inst = if block {
                gen_random_block(n, m, k, dim, norm, seed)?
            } else {
                gen_random(n, m, k, dim, norm, seed)?
            };
            (inst, None)
        }
    };
    emit(
        args.out.as_deref(),
        write_instance(&inst, rankings.as_ref()),
    )
}

fn load_instance(
    path: &Path,
    k: Option<usize>,
) -> anyhow::Result<(Instance, Option<RankedProfile>)> {
    let (inst, rankings) =
        parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let inst = match k {
        Some(k) => inst.with_k(k)?,
        None => inst,
    };
    validate_metric(&inst).with_context(|| format!("checking {}", path.display()))?;
    if let Some(profile) = &rankings {
        if let Some((v, a, b)) = profile.inconsistency_with(&inst) {
            bail!(
                "{}: voter {} ranks c{} above c{} but is closer to c{}",
                path.display(),
                v + 1,
                a + 1,
                b + 1,
                b + 1
            );
        }
    }
    Ok((inst, rankings))
}

fn select_cmd(args: SelectArgs, format: Format) -> anyhow::Result<Outcome> {
    let (inst, rankings) = load_instance(&args.instance, args.k)?;
    let algorithm = match args.rule {
        Rule::Ear => Algorithm::Ear,
        Rule::Tgc => Algorithm::Tgc,
        Rule::SingleWinner => {
            if args.emit_coverage.is_some() {
                bail!("single-winner produces no coverage record");
            }
            let profile = rankings.unwrap_or_else(|| derive_rankings(&inst));
            let committee = Committee::new(vec![single_winner(&profile)], inst.m())?;
            let text = match format {
                Format::Text => write_committee(&committee),
                Format::Csv => format!("rank,candidate\n1,{}\n", committee.members()[0] + 1),
            };
            return emit(args.out.as_deref(), text);
        }
    };
    let rec = select(&inst, algorithm, rankings.as_ref())?;
    if let Some(p) = &args.emit_coverage {
        write(p, &write_coverage(&rec))?;
    }
    let text = match format {
        Format::Text => write_committee(&rec.committee()),
        Format::Csv => {
            let rows: Vec<Vec<String>> = rec
                .representatives
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let threshold = match &r.threshold {
                        Threshold::Tolerance(t) => format!("tau={t}"),
                        Threshold::Radius(d) => format!("delta={d}"),
                        Threshold::SquaredRadius(d) => format!("delta2={d}"),
                        Threshold::Filler => "filler".into(),
                    };
                    vec![
                        (i + 1).to_string(),
                        (r.candidate + 1).to_string(),
                        threshold,
                        r.voters.len().to_string(),
                    ]
                })
                .collect();
            table::render(
                &["rank", "candidate", "threshold", "covered"],
                &rows,
                Format::Csv,
            )
        }
    };
    emit(args.out.as_deref(), text)
}

fn audit(args: AuditArgs, format: Format) -> anyhow::Result<Outcome> {
    let (inst, _) = load_instance(&args.instance, args.k)?;
    let coverage = match &args.coverage {
        Some(p) => {
            Some(parse_coverage(&read(p)?).with_context(|| format!("parsing {}", p.display()))?)
        }
        None => None,
    };
    let committee = match (&args.committee, &coverage) {
        (Some(p), _) => parse_committee(&read(p)?, inst.m())
            .with_context(|| format!("parsing {}", p.display()))?,
        (None, Some(rec)) => rec.committee(),
        (None, None) => bail!("either --committee or --coverage is required"),
    };
    let mode = match args.samples {
        Some(samples) => CoalitionMode::Sampled {
            samples,
            seed: args.seed,
        },
        None => CoalitionMode::Exact { cap: args.cap },
    };
    let need_coverage = || {
        coverage
            .as_ref()
            .ok_or_else(|| anyhow!("this check needs --coverage"))
    };
    let alpha = &args.alpha;
    let report: AuditReport = match args.check {
        CheckArg::Pf => pf_gamma(&inst, &committee)?,
        CheckArg::Core => core_beta(&inst, &committee, alpha)?,
        CheckArg::Pr => pr_gamma(&inst, &committee, alpha, args.t_range, mode)?,
        CheckArg::PrStrong => pr_strong_gamma(&inst, &committee, alpha, args.t_range, mode)?,
        CheckArg::CorSingle => cor_single_audit(&inst, need_coverage()?, alpha, args.cap)?,
        CheckArg::Stability => {
            let rec = need_coverage()?;
            let variant = match rec.algorithm {
                Algorithm::Ear => StabilityVariant::Ordinal,
                Algorithm::Tgc => StabilityVariant::Cardinal,
            };
            stability_rho(&inst, rec, variant, args.cap)?
        }
        CheckArg::Distortion => {
            let [winner] = committee.members()[..] else {
                bail!("distortion needs a single-member committee");
            };
            distortion_report(&inst, winner)?
        }
    };
    let rule = args
        .rule
        .or(coverage.as_ref().map(|rec| match rec.algorithm {
            Algorithm::Ear => Rule::Ear,
            Algorithm::Tgc => Rule::Tgc,
        }));
    let uses_alpha = matches!(
        args.check,
        CheckArg::Core | CheckArg::Pr | CheckArg::PrStrong | CheckArg::CorSingle
    );
    let bound = match (rule, args.check) {
        (Some(Rule::SingleWinner), CheckArg::Distortion) => {
            Some(bounds::single_winner_distortion())
        }
        (Some(Rule::SingleWinner), _) | (_, CheckArg::Distortion) | (None, _) => None,
        (Some(r), _) => {
            let algorithm = if r == Rule::Ear {
                Algorithm::Ear
            } else {
                Algorithm::Tgc
            };
            bounds::guarantee(report.check, algorithm, uses_alpha.then_some(alpha))
        }
    };
    let report = report.with_bound(bound);
    let stdout = match format {
        Format::Text => report.to_text(),
        Format::Csv => format!("{}\n{}\n", AuditReport::CSV_HEADER, report.to_csv_row()),
    };
    Ok(Outcome {
        stdout,
        violated: report.satisfied() == Some(false),
    })
}

fn sweep(args: SweepArgs, format: Format) -> anyhow::Result<Outcome> {
    let spec = SweepSpec::from_toml(&read(&args.spec)?)?;
    let result = run_sweep(&spec)?;
    if let Some(dir) = args.out_dir.as_ref().or(spec.output_dir.as_ref()) {
        result.write_to(dir)?;
    }
    Ok(Outcome {
        stdout: result.render(format),
        violated: result.violated(),
    })
}

fn bench(args: BenchArgs, format: Format) -> anyhow::Result<Outcome> {
    let rows = opcount_bench(&args.sizes, args.k, args.seed)?;
    Ok(Outcome {
        stdout: opcount::render(&rows, format),
        violated: rows.iter().any(|r| !r.within_limit()),
    })
}
