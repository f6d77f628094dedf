//! Elections embedded in a (pseudo-)metric space.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::weight::{scale_values, ScaledValues, Weight};

/// A point of `V ∪ C`, by role and 0-based index within its role.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Voter(usize),
    Candidate(usize),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Voter(i) => write!(f, "v{}", i + 1),
            Point::Candidate(j) => write!(f, "c{}", j + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    LInf,
    Euclidean,
}

impl Norm {
    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::LInf => "linf",
            Norm::Euclidean => "euclidean",
        }
    }

    pub fn from_name(s: &str) -> Result<Norm> {
        match s {
            "l1" => Ok(Norm::L1),
            "linf" => Ok(Norm::LInf),
            "euclidean" | "l2" => Ok(Norm::Euclidean),
            other => Err(Error::Parse(format!("unknown norm `{other}`"))),
        }
    }
}

/// How the distances were supplied; kept so instances serialize back as given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// `(n+m)×(n+m)` matrix, voters first.
    FullMatrix,
    /// Only the `n×m` voter/candidate block.
    VcBlock,
    /// Rational coordinates for the `n+m` points under a norm.
    Coordinates {
        norm: Norm,
        points: Vec<Vec<BigRational>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MetricViolation {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("d({0},{1}) != d({1},{0})")]
    Asymmetric(Point, Point),
    #[error("d({0},{1}) is negative")]
    NegativeDistance(Point, Point),
    #[error("d({0},{0}) is nonzero")]
    NonzeroDiagonal(Point),
    #[error("d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(Point, Point, Point),
}

/// Outcome of a successful [`validate_metric`] call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationStatus {
    /// Full matrix checked: zero diagonal, symmetry, non-negativity, triangle inequality.
    Full,
    /// Only the V×C block exists; non-negativity checked, triangles unverifiable.
    PartiallyValidated,
    /// Distances induced by a norm on rational coordinates; a metric by construction.
    NormInduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HareQuota(usize);

impl HareQuota {
    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for HareQuota {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `p = ⌈n/k⌉`.
pub fn hare_quota(n: usize, k: usize) -> HareQuota {
    assert!(n >= 1 && k >= 1, "hare quota needs n >= 1 and k >= 1");
    HareQuota(n.div_ceil(k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    k: usize,
    labels: Option<Vec<String>>,
    source: Source,
    /// Row-major `(n+m)²`, when known exactly.
    full: Option<Vec<ExactScalar>>,
    /// Row-major `n×m`, when known exactly.
    vc: Option<Vec<ExactScalar>>,
}

fn check_sizes(n: usize, m: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInstance("need at least one voter".into()));
    }
    if k == 0 || k >= m {
        return Err(Error::InvalidInstance(format!(
            "need 1 <= k < m, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

impl Instance {
    pub fn from_full_matrix(
        n: usize,
        m: usize,
        k: usize,
        rows: Vec<Vec<ExactScalar>>,
    ) -> Result<Self> {
        check_sizes(n, m, k)?;
        let size = n + m;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidInstance(format!(
                "full matrix must be {size}x{size}"
            )));
        }
        let full: Vec<ExactScalar> = rows.into_iter().flatten().collect();
        let vc = (0..n)
            .flat_map(|v| (0..m).map(move |c| (v, c)))
            .map(|(v, c)| full[v * size + n + c].clone())
            .collect();
        Ok(Instance {
            n,
            m,
            k,
            labels: None,
            source: Source::FullMatrix,
            full: Some(full),
            vc: Some(vc),
        })
    }

    pub fn from_vc_block(
        n: usize,
        m: usize,
        k: usize,
        rows: Vec<Vec<ExactScalar>>,
    ) -> Result<Self> {
        check_sizes(n, m, k)?;
        if rows.len() != n || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInstance(format!(
                "voter/candidate block must be {n}x{m}"
            )));
        }
        Ok(Instance {
            n,
            m,
            k,
            labels: None,
            source: Source::VcBlock,
            full: None,
            vc: Some(rows.into_iter().flatten().collect()),
        })
    }

    /// Points are voters first, then candidates. L1 and L∞ distances are
    /// materialized exactly; Euclidean instances keep coordinates only and
    /// compare squared distances.
    pub fn from_coordinates(
        n: usize,
        m: usize,
        k: usize,
        norm: Norm,
        points: Vec<Vec<BigRational>>,
    ) -> Result<Self> {
        check_sizes(n, m, k)?;
        if points.len() != n + m {
            return Err(Error::InvalidInstance(format!(
                "expected {} points, got {}",
                n + m,
                points.len()
            )));
        }
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidInstance(
                "points must share a positive dimension".into(),
            ));
        }
        let (full, vc) = match norm {
            Norm::Euclidean => (None, None),
            Norm::L1 | Norm::LInf => {
                let size = n + m;
                let mut full = Vec::with_capacity(size * size);
                for a in &points {
                    for b in &points {
                        full.push(norm_distance(norm, a, b));
                    }
                }
                let vc = (0..n)
                    .flat_map(|v| (0..m).map(move |c| (v, c)))
                    .map(|(v, c)| full[v * size + n + c].clone())
                    .collect();
                (Some(full), Some(vc))
            }
        };
        Ok(Instance {
            n,
            m,
            k,
            labels: None,
            source: Source::Coordinates { norm, points },
            full,
            vc,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n + self.m {
            return Err(Error::InvalidInstance(format!(
                "expected {} labels, got {}",
                self.n + self.m,
                labels.len()
            )));
        }
        if let Some(bad) = labels
            .iter()
            .find(|l| l.is_empty() || l.chars().any(char::is_whitespace))
        {
            return Err(Error::InvalidInstance(format!(
                "label `{bad}` is empty or contains whitespace"
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Same points, different committee size.
    pub fn with_k(mut self, k: usize) -> Result<Self> {
        check_sizes(self.n, self.m, k)?;
        self.k = k;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn quota(&self) -> HareQuota {
        hare_quota(self.n, self.k)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn label(&self, p: Point) -> String {
        match &self.labels {
            Some(labels) => labels[self.flat(p)].clone(),
            None => p.to_string(),
        }
    }

    pub fn has_full_matrix(&self) -> bool {
        self.full.is_some()
    }

    /// True when exact voter/candidate distances are available.
    pub fn has_exact_distances(&self) -> bool {
        self.vc.is_some()
    }

    fn flat(&self, p: Point) -> usize {
        match p {
            Point::Voter(i) => i,
            Point::Candidate(j) => self.n + j,
        }
    }

    /// Exact `d(v, c)`. Panics on Euclidean instances; check
    /// [`has_exact_distances`](Self::has_exact_distances) or use [`vc_block`](Self::vc_block).
    pub fn d_vc(&self, v: usize, c: usize) -> &ExactScalar {
        &self.vc.as_ref().expect("exact distances required")[v * self.m + c]
    }

    pub fn vc_block(&self) -> Result<&[ExactScalar]> {
        self.vc
            .as_deref()
            .ok_or(Error::MetricMissing("euclidean coordinates"))
    }

    /// Exact distance between any two points.
    pub fn distance(&self, a: Point, b: Point) -> Result<ExactScalar> {
        if a == b {
            return Ok(ExactScalar::zero());
        }
        if let Some(full) = &self.full {
            let size = self.n + self.m;
            return Ok(full[self.flat(a) * size + self.flat(b)].clone());
        }
        match (a, b, &self.vc) {
            (Point::Voter(v), Point::Candidate(c), Some(_))
            | (Point::Candidate(c), Point::Voter(v), Some(_)) => Ok(self.d_vc(v, c).clone()),
            (_, _, Some(_)) => Err(Error::MetricMissing("the voter/candidate block")),
            (_, _, None) => Err(Error::MetricMissing("euclidean coordinates")),
        }
    }

    /// Squared Euclidean distance between voter `v` and candidate `c`.
    fn squared_vc(&self, v: usize, c: usize) -> BigRational {
        match &self.source {
            Source::Coordinates { points, .. } => {
                squared_euclidean(&points[v], &points[self.n + c])
            }
            _ => unreachable!("squared distances only exist for coordinate instances"),
        }
    }

    /// Order-preserving key for `d(v, c)`: the distance itself, or its square
    /// on Euclidean instances.
    pub fn vc_order_key(&self, v: usize, c: usize) -> BigRational {
        match &self.vc {
            Some(vc) => vc[v * self.m + c].as_rational().clone(),
            None => self.squared_vc(v, c),
        }
    }

    /// Whether [`vc_order_key`](Self::vc_order_key) is a squared distance.
    pub fn order_key_is_squared(&self) -> bool {
        self.vc.is_none()
    }

    /// Exact comparison of `d(v, a)` and `d(v, b)`.
    pub fn cmp_for_voter(&self, v: usize, a: usize, b: usize) -> Ordering {
        match &self.vc {
            Some(vc) => vc[v * self.m + a].cmp(&vc[v * self.m + b]),
            None => self.squared_vc(v, a).cmp(&self.squared_vc(v, b)),
        }
    }

    /// Integer-scaled copy of the V×C block for the audit kernels.
    pub fn scaled_block(&self) -> Result<ScaledBlock> {
        let vc = self.vc_block()?;
        let headroom = self.n * self.m.max(self.k) + 1;
        Ok(match scale_values(vc, headroom) {
            ScaledValues::Small(dist) => ScaledBlock::Small(Block {
                n: self.n,
                m: self.m,
                dist,
            }),
            ScaledValues::Big(dist) => ScaledBlock::Big(Block {
                n: self.n,
                m: self.m,
                dist,
            }),
        })
    }
}

/// `n×m` voter/candidate distances scaled to integers.
#[derive(Clone, Debug)]
pub struct Block<W> {
    pub n: usize,
    pub m: usize,
    pub dist: Vec<W>,
}

impl<W: Weight> Block<W> {
    #[inline]
    pub fn d(&self, v: usize, c: usize) -> &W {
        &self.dist[v * self.m + c]
    }
}

#[derive(Clone, Debug)]
pub enum ScaledBlock {
    Small(Block<i128>),
    Big(Block<num_bigint::BigInt>),
}

fn norm_distance(norm: Norm, a: &[BigRational], b: &[BigRational]) -> ExactScalar {
    let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
    let value = match norm {
        Norm::L1 => diffs.fold(BigRational::zero(), |acc, d| acc + d),
        Norm::LInf => diffs.fold(BigRational::zero(), |acc, d| if d > acc { d } else { acc }),
        Norm::Euclidean => unreachable!("euclidean distances are not materialized"),
    };
    ExactScalar::try_from(value).expect("norms are non-negative")
}

fn squared_euclidean(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .fold(BigRational::zero(), |acc, d| acc + d)
}

/// Checks the pseudo-metric axioms. Reports the first violation found, scanning
/// diagonal, then pairs, then triples, in point order (voters first).
pub fn validate_metric(inst: &Instance) -> std::result::Result<ValidationStatus, MetricViolation> {
    if let Source::Coordinates { .. } = inst.source {
        return Ok(ValidationStatus::NormInduced);
    }
    let Some(full) = &inst.full else {
        let vc = inst.vc.as_ref().expect("matrix instances carry a block");
        if vc.len() != inst.n * inst.m {
            return Err(MetricViolation::Shape(format!(
                "block has {} entries",
                vc.len()
            )));
        }
        // ExactScalar cannot hold negatives, so the block is non-negative.
        return Ok(ValidationStatus::PartiallyValidated);
    };
    let size = inst.n + inst.m;
    if full.len() != size * size {
        return Err(MetricViolation::Shape(format!(
            "matrix has {} entries, expected {}",
            full.len(),
            size * size
        )));
    }
    let point = |i: usize| {
        if i < inst.n {
            Point::Voter(i)
        } else {
            Point::Candidate(i - inst.n)
        }
    };
    for x in 0..size {
        if !full[x * size + x].is_zero() {
            return Err(MetricViolation::NonzeroDiagonal(point(x)));
        }
    }
    for x in 0..size {
        for y in 0..size {
            if full[x * size + y].as_rational().is_negative() {
                return Err(MetricViolation::NegativeDistance(point(x), point(y)));
            }
        }
    }
    for x in 0..size {
        for y in (x + 1)..size {
            if full[x * size + y] != full[y * size + x] {
                return Err(MetricViolation::Asymmetric(point(x), point(y)));
            }
        }
    }
    let headroom = 3;
    let violation = match scale_values(full, headroom) {
        ScaledValues::Small(d) => first_triangle_violation(&d, size),
        ScaledValues::Big(d) => first_triangle_violation(&d, size),
    };
    match violation {
        Some((x, y, z)) => Err(MetricViolation::TriangleViolation(
            point(x),
            point(y),
            point(z),
        )),
        None => Ok(ValidationStatus::Full),
    }
}

fn first_triangle_violation<W: Weight>(d: &[W], size: usize) -> Option<(usize, usize, usize)> {
    for x in 0..size {
        for y in 0..size {
            if y == x {
                continue;
            }
            let dxy = &d[x * size + y];
            for z in 0..size {
                if z == x || z == y {
                    continue;
                }
                if d[x * size + z] > dxy.plus(&d[y * size + z]) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// `Σ_{x∈X, y∈Y} d(x, y)`.
pub fn d_sum(inst: &Instance, xs: &[Point], ys: &[Point]) -> Result<ExactScalar> {
    let mut total = BigRational::zero();
    for &x in xs {
        for &y in ys {
            total += inst.distance(x, y)?.into_rational();
        }
    }
    Ok(ExactScalar::try_from(total).expect("sums of distances are non-negative"))
}

/// `d_sum(S, c)` for a set of voters and a single candidate.
pub fn voter_sum_to_candidate(inst: &Instance, voters: &[usize], c: usize) -> BigRational {
    voters.iter().fold(BigRational::zero(), |acc, &v| {
        acc + inst.d_vc(v, c).as_rational()
    })
}
