//! Line-oriented text formats for instances, committees and coverage records.
//!
//! Indices are 1-based on disk. Blank lines and lines starting with `#` are
//! skipped. Rationals are written canonically as `p` or `p/q`; decimals are
//! accepted on input and parsed exactly, so write → parse → write is stable.
//!
//! ```text
//! proprep-instance v1
//! n 2
//! m 2
//! k 1
//! labels v1 v2 c1 c2
//! metric block
//! 0 3
//! 1/2 4
//! end
//! rankings
//! 1 2
//! 1 2
//! end
//! ```
//!
//! The metric section is one of `metric full` (`n+m` rows of `n+m` entries,
//! voters first), `metric block` (`n` rows of `m`), or `metric coords NORM`
//! (`n+m` rows of coordinates, NORM one of `l1`, `linf`, `euclidean`).

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::coverage::{Algorithm, Committee, CoverageRecord, OpCounts, Representative, Threshold};
use crate::error::{Error, Result};
use crate::instance::{hare_quota, Instance, Norm, Point, Source};
use crate::profile::RankedProfile;
use crate::scalar::{format_rational, parse_rational, ExactScalar};

pub const INSTANCE_HEADER: &str = "proprep-instance v1";
pub const COMMITTEE_HEADER: &str = "proprep-committee v1";
pub const COVERAGE_HEADER: &str = "proprep-coverage v1";

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            line_no: 0,
        }
    }

    fn next_line(&mut self) -> Option<&'a str> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.line_no = i + 1;
            return Some(line);
        }
        None
    }

    fn expect_line(&mut self, what: &str) -> Result<&'a str> {
        self.next_line()
            .ok_or_else(|| Error::Parse(format!("unexpected end of input, expected {what}")))
    }

    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::Parse(format!("line {}: {msg}", self.line_no))
    }

    fn header(&mut self, header: &str) -> Result<()> {
        let line = self.expect_line(header)?;
        if line != header {
            return Err(self.err(format!("expected `{header}`, found `{line}`")));
        }
        Ok(())
    }

    /// A `key value` line.
    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let line = self.expect_line(key)?;
        match line.split_once(char::is_whitespace) {
            Some((k, rest)) if k == key => Ok(rest.trim()),
            _ if line == key => Ok(""),
            _ => Err(self.err(format!("expected `{key}`, found `{line}`"))),
        }
    }

    fn keyed_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.keyed(key)?;
        v.parse()
            .map_err(|_| self.err(format!("`{key}` needs a non-negative integer, found `{v}`")))
    }

    fn end(&mut self) -> Result<()> {
        let line = self.expect_line("end")?;
        if line != "end" {
            return Err(self.err(format!("expected `end`, found `{line}`")));
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        match self.next_line() {
            None => Ok(()),
            Some(extra) => Err(self.err(format!("trailing content `{extra}`"))),
        }
    }

    fn rational_row(&mut self, len: usize) -> Result<Vec<BigRational>> {
        let line = self.expect_line("a row of numbers")?;
        let row: Vec<BigRational> = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<_>>()
            .map_err(|e| self.err(e))?;
        if row.len() != len {
            return Err(self.err(format!("expected {len} entries, found {}", row.len())));
        }
        Ok(row)
    }

    fn scalar_row(&mut self, len: usize) -> Result<Vec<ExactScalar>> {
        self.rational_row(len)?
            .into_iter()
            .map(|x| ExactScalar::try_from(x).map_err(|e| self.err(e)))
            .collect()
    }

    fn index_list(&mut self, text: &str, bound: usize) -> Result<Vec<usize>> {
        text.split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
                _ => Err(self.err(format!("index `{tok}` not in 1..{bound}"))),
            })
            .collect()
    }
}

fn join_rationals<'a>(xs: impl Iterator<Item = &'a BigRational>) -> String {
    xs.map(format_rational).collect::<Vec<_>>().join(" ")
}

fn join_indices(xs: &[usize]) -> String {
    xs.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Serializes an instance, with an optional rankings block.
pub fn write_instance(inst: &Instance, rankings: Option<&RankedProfile>) -> String {
    let (n, m) = (inst.n(), inst.m());
    let mut out = String::new();
    let _ = writeln!(out, "{INSTANCE_HEADER}");
    let _ = writeln!(out, "n {n}\nm {m}\nk {}", inst.k());
    if let Some(labels) = inst.labels() {
        let _ = writeln!(out, "labels {}", labels.join(" "));
    }
    match inst.source() {
        Source::FullMatrix => {
            out.push_str("metric full\n");
            let points: Vec<Point> = (0..n)
                .map(Point::Voter)
                .chain((0..m).map(Point::Candidate))
                .collect();
            for &a in &points {
                let row: Vec<String> = points
                    .iter()
                    .map(|&b| {
                        inst.distance(a, b)
                            .expect("full matrix present")
                            .to_string()
                    })
                    .collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        Source::VcBlock => {
            out.push_str("metric block\n");
            for v in 0..n {
                let row: Vec<String> = (0..m).map(|c| inst.d_vc(v, c).to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        Source::Coordinates { norm, points } => {
            let _ = writeln!(out, "metric coords {}", norm.name());
            for p in points {
                let _ = writeln!(out, "{}", join_rationals(p.iter()));
            }
        }
    }
    out.push_str("end\n");
    if let Some(profile) = rankings {
        out.push_str("rankings\n");
        for order in profile.orders() {
            let _ = writeln!(out, "{}", join_indices(order));
        }
        out.push_str("end\n");
    }
    out
}

pub fn parse_instance(text: &str) -> Result<(Instance, Option<RankedProfile>)> {
    let mut lines = Lines::new(text);
    lines.header(INSTANCE_HEADER)?;
    let n = lines.keyed_usize("n")?;
    let m = lines.keyed_usize("m")?;
    let k = lines.keyed_usize("k")?;
    let mut line = lines.expect_line("metric")?;
    let mut labels = None;
    if let Some(rest) = line.strip_prefix("labels") {
        labels = Some(
            rest.split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>(),
        );
        line = lines.expect_line("metric")?;
    }
    let words: Vec<&str> = line.split_whitespace().collect();
    let inst = match words.as_slice() {
        ["metric", "full"] => {
            let rows = (0..n + m)
                .map(|_| lines.scalar_row(n + m))
                .collect::<Result<_>>()?;
            Instance::from_full_matrix(n, m, k, rows)?
        }
        ["metric", "block"] => {
            let rows = (0..n).map(|_| lines.scalar_row(m)).collect::<Result<_>>()?;
            Instance::from_vc_block(n, m, k, rows)?
        }
        ["metric", "coords", norm] => {
            let norm = Norm::from_name(norm)?;
            let first = lines.expect_line("coordinates")?;
            let dim = first.split_whitespace().count();
            let parse = |l: &str| {
                l.split_whitespace()
                    .map(parse_rational)
                    .collect::<Result<Vec<_>>>()
            };
            let mut points = vec![parse(first).map_err(|e| lines.err(e))?];
            for _ in 1..n + m {
                points.push(lines.rational_row(dim)?);
            }
            Instance::from_coordinates(n, m, k, norm, points)?
        }
        _ => return Err(lines.err(format!("expected a metric section, found `{line}`"))),
    };
    lines.end()?;
    let inst = match labels {
        Some(l) => inst.with_labels(l)?,
        None => inst,
    };
    let rankings = match lines.next_line() {
        None => None,
        Some("rankings") => {
            let mut orders = Vec::with_capacity(n);
            for _ in 0..n {
                let row = lines.expect_line("a ranking")?;
                orders.push(lines.index_list(row, m)?);
            }
            lines.end()?;
            lines.finish()?;
            Some(RankedProfile::new(m, orders)?)
        }
        Some(other) => return Err(lines.err(format!("expected `rankings`, found `{other}`"))),
    };
    Ok((inst, rankings))
}

/// A ranked profile on its own (no metric).
pub fn write_rankings(profile: &RankedProfile) -> String {
    let mut out = String::from("proprep-rankings v1\n");
    let _ = writeln!(out, "n {}\nm {}", profile.n(), profile.m());
    for order in profile.orders() {
        let _ = writeln!(out, "{}", join_indices(order));
    }
    out.push_str("end\n");
    out
}

pub fn parse_rankings(text: &str) -> Result<RankedProfile> {
    let mut lines = Lines::new(text);
    lines.header("proprep-rankings v1")?;
    let n = lines.keyed_usize("n")?;
    let m = lines.keyed_usize("m")?;
    let mut orders = Vec::with_capacity(n);
    for _ in 0..n {
        let row = lines.expect_line("a ranking")?;
        orders.push(lines.index_list(row, m)?);
    }
    lines.end()?;
    lines.finish()?;
    RankedProfile::new(m, orders)
}

pub fn write_committee(committee: &Committee) -> String {
    format!(
        "{COMMITTEE_HEADER}\nmembers {}\n",
        join_indices(committee.members())
    )
}

pub fn parse_committee(text: &str, m: usize) -> Result<Committee> {
    let mut lines = Lines::new(text);
    lines.header(COMMITTEE_HEADER)?;
    let members = lines.keyed("members")?;
    let members = lines.index_list(members, m)?;
    lines.finish()?;
    Committee::new(members, m)
}

fn write_threshold(t: &Threshold) -> String {
    match t {
        Threshold::Tolerance(tau) => format!("tau {tau}"),
        Threshold::Radius(r) => format!("delta {r}"),
        Threshold::SquaredRadius(r) => format!("delta2 {r}"),
        Threshold::Filler => "filler".into(),
    }
}

pub fn write_coverage(rec: &CoverageRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{COVERAGE_HEADER}");
    let _ = writeln!(out, "algorithm {}", rec.algorithm);
    let _ = writeln!(
        out,
        "n {}\nm {}\nk {}\nquota {}",
        rec.n, rec.m, rec.k, rec.quota
    );
    for rep in &rec.representatives {
        let _ = writeln!(
            out,
            "rep {} {} : {}",
            rep.candidate + 1,
            write_threshold(&rep.threshold),
            join_indices(&rep.voters)
        );
    }
    let _ = writeln!(out, "uncovered {}", join_indices(&rec.uncovered).trim_end());
    let _ = writeln!(
        out,
        "ops {} {} {}",
        rec.ops.inserts, rec.ops.removals, rec.ops.probes
    );
    out.push_str("end\n");
    out.lines()
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

pub fn parse_coverage(text: &str) -> Result<CoverageRecord> {
    let mut lines = Lines::new(text);
    lines.header(COVERAGE_HEADER)?;
    let algorithm = Algorithm::from_name(lines.keyed("algorithm")?)?;
    let n = lines.keyed_usize("n")?;
    let m = lines.keyed_usize("m")?;
    let k = lines.keyed_usize("k")?;
    let quota = lines.keyed_usize("quota")?;
    if k == 0 || quota != hare_quota(n, k).get() {
        return Err(lines.err(format!("quota {quota} does not match n={n}, k={k}")));
    }
    let mut representatives = Vec::new();
    let mut line = lines.expect_line("rep or uncovered")?;
    while let Some(rest) = line.strip_prefix("rep ") {
        let (head, voters) = rest
            .split_once(':')
            .ok_or_else(|| lines.err("rep line needs `:`"))?;
        let words: Vec<&str> = head.split_whitespace().collect();
        let (candidate, threshold) = match words.as_slice() {
            [c, kind, rest @ ..] => {
                let c = lines.index_list(c, m)?[0];
                let t = match (*kind, rest) {
                    ("tau", [x]) => {
                        Threshold::Tolerance(x.parse().map_err(|_| lines.err("bad tau"))?)
                    }
                    ("delta", [x]) => Threshold::Radius(x.parse().map_err(|e| lines.err(e))?),
                    ("delta2", [x]) => {
                        Threshold::SquaredRadius(x.parse().map_err(|e| lines.err(e))?)
                    }
                    ("filler", []) => Threshold::Filler,
                    _ => return Err(lines.err(format!("bad threshold `{}`", head.trim()))),
                };
                (c, t)
            }
            _ => return Err(lines.err("rep line needs a candidate and a threshold")),
        };
        let voters = lines.index_list(voters, n)?;
        representatives.push(Representative {
            candidate,
            voters,
            threshold,
        });
        line = lines.expect_line("rep or uncovered")?;
    }
    let uncovered = match line.split_once(char::is_whitespace) {
        Some(("uncovered", rest)) => lines.index_list(rest, n)?,
        _ if line == "uncovered" => Vec::new(),
        _ => return Err(lines.err(format!("expected `uncovered`, found `{line}`"))),
    };
    let ops: Vec<u64> = lines
        .keyed("ops")?
        .split_whitespace()
        .map(|x| x.parse::<u64>().map_err(|_| lines.err("bad op count")))
        .collect::<Result<_>>()?;
    let [inserts, removals, probes] = ops[..] else {
        return Err(lines.err("ops needs three counts"));
    };
    lines.end()?;
    lines.finish()?;
    let rec = CoverageRecord {
        algorithm,
        n,
        m,
        k,
        quota: hare_quota(n, k),
        representatives,
        uncovered,
        ops: OpCounts {
            inserts,
            removals,
            probes,
        },
    };
    Committee::new(rec.committee().members().to_vec(), m)?;
    Ok(rec)
}
