//! Generators for the lower-bound families, the ordinal/cardinal separation
//! election, and seeded random lattice instances.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coverage::Committee;
use crate::error::{Error, Result};
use crate::instance::{validate_metric, Instance, Norm};
use crate::profile::{derive_rankings, RankedProfile};
use crate::scalar::{ceil_to_usize, format_rational, rat, ExactScalar, Measure};

/// Default distance between far-apart clusters.
pub const DEFAULT_CROSS_DISTANCE: u64 = 1000;

fn scalar(r: BigRational) -> ExactScalar {
    ExactScalar::try_from(r).expect("generated distances are non-negative")
}

/// Full matrix for points that sit in clusters: `within` between distinct
/// co-clustered points at different sites, 0 at the same site, `across`
/// between clusters. `site[i] = (cluster, position)`.
fn clustered(
    n: usize,
    m: usize,
    k: usize,
    site: &[(usize, usize)],
    within: &ExactScalar,
    across: &ExactScalar,
) -> Result<Instance> {
    let rows = site
        .iter()
        .map(|a| {
            site.iter()
                .map(|b| {
                    if a == b {
                        ExactScalar::zero()
                    } else if a.0 == b.0 {
                        within.clone()
                    } else {
                        across.clone()
                    }
                })
                .collect()
        })
        .collect();
    Instance::from_full_matrix(n, m, k, rows)
}

fn default_labels(n: usize, m: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("v{i}"))
        .chain((1..=m).map(|j| format!("c{j}")))
        .collect()
}

/// Parameters of the two-cluster family for a given `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoClusterShape {
    pub q: usize,
    pub k: usize,
    pub n: usize,
    pub p: usize,
}

pub fn two_cluster_shape(alpha: &BigRational) -> Result<TwoClusterShape> {
    if *alpha <= BigRational::one() {
        return Err(Error::AlphaOutOfRange(format_rational(alpha)));
    }
    let q = ceil_to_usize(&(alpha * rat(2, 1)));
    let k = 2 * q - 1;
    let n = 2 * k;
    Ok(TwoClusterShape {
        q,
        k,
        n,
        p: n.div_ceil(k),
    })
}

/// Voters and candidates coincide pairwise; two clusters of `k` sites each,
/// distance 1 inside a cluster and `cross` between clusters.
pub fn gen_two_cluster(alpha: &BigRational, cross: &BigRational) -> Result<Instance> {
    let shape = two_cluster_shape(alpha)?;
    if *cross < BigRational::one() {
        return Err(Error::InvalidParameter(format!(
            "cross distance {} < 1",
            format_rational(cross)
        )));
    }
    let k = shape.k;
    let sites: Vec<(usize, usize)> = (0..2 * k).map(|i| (i / k, i % k)).collect();
    let site: Vec<(usize, usize)> = sites.iter().chain(&sites).copied().collect();
    clustered(
        shape.n,
        shape.n,
        k,
        &site,
        &ExactScalar::from_integer(1),
        &scalar(cross.clone()),
    )?
    .with_labels(default_labels(shape.n, shape.n))
}

/// `k = 1/(α−1)`, requiring `α ∈ (1, 3/2)` and integrality.
pub fn diverging_k(alpha: &BigRational) -> Result<usize> {
    let one = BigRational::one();
    if *alpha <= one || *alpha >= rat(3, 2) {
        return Err(Error::AlphaOutOfRange(format_rational(alpha)));
    }
    let k = one / (alpha - BigRational::one());
    if !k.is_integer() {
        return Err(Error::NonIntegralK(format_rational(&k)));
    }
    k.to_integer()
        .to_usize()
        .ok_or_else(|| Error::NonIntegralK(format_rational(&k)))
}

/// `k+1` clusters, each holding one candidate and `k−1` voters, all at one
/// site; clusters are `cross` apart. Voters are listed cluster by cluster.
pub fn gen_diverging(alpha: &BigRational, cross: &BigRational) -> Result<Instance> {
    let k = diverging_k(alpha)?;
    if *cross <= BigRational::zero() {
        return Err(Error::InvalidParameter(
            "cross distance must be positive".into(),
        ));
    }
    let sizes = vec![k - 1; k + 1];
    one_site_clusters(&sizes, k, cross)
}

/// Cluster `i` holds `sizes[i]` voters and candidate `i`, all at one site.
fn one_site_clusters(sizes: &[usize], k: usize, cross: &BigRational) -> Result<Instance> {
    let n: usize = sizes.iter().sum();
    let m = sizes.len();
    let voters = sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &b)| std::iter::repeat_n((i, 0), b));
    let site: Vec<(usize, usize)> = voters.chain((0..m).map(|i| (i, 0))).collect();
    clustered(n, m, k, &site, &ExactScalar::zero(), &scalar(cross.clone()))?
        .with_labels(default_labels(n, m))
}

/// Cluster sizes `b_i ∈ {⌊n/(k+1)⌋, ⌈n/(k+1)⌉}`, larger ones first.
pub fn refined_sizes(n: usize, k: usize) -> Vec<usize> {
    let (base, extra) = n.div_rem(&(k + 1));
    (0..=k).map(|i| base + usize::from(i < extra)).collect()
}

pub fn gen_refined(n: usize, k: usize) -> Result<Instance> {
    if k == 0 || 4 * k > n {
        return Err(Error::KTooLarge { n, k });
    }
    one_site_clusters(&refined_sizes(n, k), k, &BigRational::one())
}

/// Rational stand-in for `(√5−1)/2`: a ratio of consecutive Fibonacci
/// numbers, within `10⁻⁹`.
pub fn separation_delta() -> BigRational {
    rat(17711, 28657)
}

/// The six rankings, 0-based; `c'_j` is candidate `3+j`, `v'_i` voter `3+i`.
pub fn separation_rankings() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2, 3, 4, 5],
        vec![1, 2, 0, 3, 4, 5],
        vec![2, 0, 1, 3, 4, 5],
        vec![3, 4, 5, 0, 1, 2],
        vec![4, 5, 3, 0, 1, 2],
        vec![5, 3, 4, 0, 1, 2],
    ]
}

fn separation_labels() -> Vec<String> {
    [
        "v1", "v2", "v3", "v'1", "v'2", "v'3", "c1", "c2", "c3", "c'1", "c'2", "c'3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Voter/candidate distances of the separation election when `c_{chosen+1}`
/// is the committee's pick from the first cluster (`chosen ∈ 0..3`).
pub fn separation_block(eps: &BigRational, chosen: usize) -> Vec<Vec<BigRational>> {
    let d = separation_delta();
    let one = BigRational::one();
    let two = rat(2, 1);
    let three = rat(3, 1);
    // base table with c1 chosen
    let table = [
        [three.clone(), &three + eps, &three + eps * &two],
        [&three + &d * &two, one.clone(), &one + eps],
        [&two + &d, &two + &d + eps, d.clone()],
    ];
    let far = rat(100, 1);
    let mut block = vec![vec![far; 6]; 6];
    for (i, row) in table.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            block[(i + chosen) % 3][(j + chosen) % 3] = x.clone();
        }
    }
    let rankings = separation_rankings();
    for v in 3..6 {
        for (pos, &c) in rankings[v].iter().take(3).enumerate() {
            block[v][c] = &one + eps * BigRational::from_integer(pos.into());
        }
    }
    block
}

/// Completes a voter/candidate block to a full metric by shortest paths.
fn shortest_path_completion(block: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = block.len();
    let m = block[0].len();
    let size = n + m;
    let mut d: Vec<Vec<Option<BigRational>>> = vec![vec![None; size]; size];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = Some(BigRational::zero());
    }
    for v in 0..n {
        for c in 0..m {
            d[v][n + c] = Some(block[v][c].clone());
            d[n + c][v] = Some(block[v][c].clone());
        }
    }
    #[allow(clippy::needless_range_loop)]
    for z in 0..size {
        for x in 0..size {
            let Some(dxz) = d[x][z].clone() else { continue };
            for y in 0..size {
                if let Some(dzy) = &d[z][y] {
                    let via = &dxz + dzy;
                    if d[x][y].as_ref().is_none_or(|cur| via < *cur) {
                        d[x][y] = Some(via);
                    }
                }
            }
        }
    }
    d.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| x.expect("bipartite block is connected"))
                .collect()
        })
        .collect()
}

/// The 6-voter, 6-candidate election (`k = 3`) whose rankings force any
/// ordinal rule to pay close to `2+√5`. `chosen` selects which of
/// `c1, c2, c3` the metric is built against.
pub fn gen_separation_for(eps: &BigRational, chosen: usize) -> Result<(Instance, RankedProfile)> {
    if *eps <= BigRational::zero() || *eps >= rat(1, 10) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {} outside (0, 1/10)",
            format_rational(eps)
        )));
    }
    if chosen >= 3 {
        return Err(Error::InvalidParameter(format!(
            "chosen candidate c{} not in c1..c3",
            chosen + 1
        )));
    }
    let block = separation_block(eps, chosen);
    let full = shortest_path_completion(&block);
    for (v, row) in block.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            if full[v][6 + c] != *x {
                return Err(Error::InvalidInstance(format!(
                    "distance v{}-c{} is not a shortest path",
                    v + 1,
                    c + 1
                )));
            }
        }
    }
    let rows = full
        .into_iter()
        .map(|r| r.into_iter().map(scalar).collect())
        .collect();
    let inst = Instance::from_full_matrix(6, 6, 3, rows)?.with_labels(separation_labels())?;
    validate_metric(&inst)?;
    let profile = RankedProfile::new(6, separation_rankings())?;
    if derive_rankings(&inst) != profile {
        return Err(Error::InvalidInstance(
            "separation metric disagrees with its rankings".into(),
        ));
    }
    Ok((inst, profile))
}

pub fn gen_separation(eps: &BigRational) -> Result<(Instance, RankedProfile)> {
    gen_separation_for(eps, 0)
}

/// Improvement factor of the coalition `{v2, v3}` (relabeled with the
/// committee's pick from `c1..c3`) deviating to the third candidate: the
/// smaller of the two voters' cost ratios. `None` unless the committee picks
/// exactly one of `c1, c2, c3`.
pub fn separation_factor(
    eps: &BigRational,
    committee: &Committee,
) -> Result<Option<(Measure, Vec<usize>, usize)>> {
    let picks: Vec<usize> = committee
        .members()
        .iter()
        .copied()
        .filter(|&c| c < 3)
        .collect();
    let [chosen] = picks[..] else {
        return Ok(None);
    };
    let (inst, _) = gen_separation_for(eps, chosen)?;
    let coalition = vec![(1 + chosen) % 3, (2 + chosen) % 3];
    let target = (2 + chosen) % 3;
    let mut least: Option<Measure> = None;
    for &v in &coalition {
        let cost = committee
            .members()
            .iter()
            .map(|&r| inst.d_vc(v, r).as_rational().clone())
            .min()
            .expect("committee is non-empty");
        let ratio = Measure::ratio(
            cost,
            inst.d_vc(v, target).as_rational().clone(),
            Measure::one(),
        );
        if least.as_ref().is_none_or(|l| ratio < *l) {
            least = Some(ratio);
        }
    }
    let mut sorted = coalition;
    sorted.sort_unstable();
    Ok(least.map(|x| (x, sorted, target)))
}

/// `min((3+2δ̂)/(1+ε), (2+δ̂)/δ̂)`.
pub fn separation_closed_form(eps: &BigRational) -> BigRational {
    let d = separation_delta();
    let a = (rat(3, 1) + &d * rat(2, 1)) / (BigRational::one() + eps);
    let b = (rat(2, 1) + &d) / &d;
    a.min(b)
}

/// Integer lattice side used by [`gen_random`].
pub const RANDOM_GRID: i64 = 20;

fn random_points(n: usize, m: usize, dim: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n + m)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..=RANDOM_GRID)).collect())
        .collect()
}

fn check_random(n: usize, m: usize, k: usize, dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be at least 1".into(),
        ));
    }
    if n == 0 || k == 0 || k >= m {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and 1 <= k < m, got n={n}, m={m}, k={k}"
        )));
    }
    Ok(())
}

/// Voters and candidates at uniform points of `{0..20}^dim`, seeded.
pub fn gen_random(
    n: usize,
    m: usize,
    k: usize,
    dim: usize,
    norm: Norm,
    seed: u64,
) -> Result<Instance> {
    check_random(n, m, k, dim)?;
    let points = random_points(n, m, dim, seed)
        .into_iter()
        .map(|p| {
            p.into_iter()
                .map(|x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    Instance::from_coordinates(n, m, k, norm, points)
}

/// Same points as [`gen_random`] for L1/L∞, but only the voter/candidate block
/// is materialized. Used for large runtime sweeps.
pub fn gen_random_block(
    n: usize,
    m: usize,
    k: usize,
    dim: usize,
    norm: Norm,
    seed: u64,
) -> Result<Instance> {
    check_random(n, m, k, dim)?;
    if norm == Norm::Euclidean {
        return Err(Error::InvalidParameter(
            "block mode needs an l1 or linf norm".into(),
        ));
    }
    let points = random_points(n, m, dim, seed);
    let dist = |a: &[i64], b: &[i64]| -> u64 {
        let diffs = a.iter().zip(b).map(|(x, y)| x.abs_diff(*y));
        match norm {
            Norm::L1 => diffs.sum(),
            _ => diffs.max().unwrap_or(0),
        }
    };
    let rows = (0..n)
        .map(|v| {
            (0..m)
                .map(|c| ExactScalar::from_integer(dist(&points[v], &points[n + c])))
                .collect()
        })
        .collect();
    Instance::from_vc_block(n, m, k, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ValidationStatus;

    #[test]
    fn two_cluster_shapes() {
        assert_eq!(
            two_cluster_shape(&rat(2, 1)).unwrap(),
            TwoClusterShape {
                q: 4,
                k: 7,
                n: 14,
                p: 2
            }
        );
        assert_eq!(
            two_cluster_shape(&rat(3, 2)).unwrap(),
            TwoClusterShape {
                q: 3,
                k: 5,
                n: 10,
                p: 2
            }
        );
        let inst = gen_two_cluster(&rat(2, 1), &rat(1000, 1)).unwrap();
        assert_eq!(validate_metric(&inst), Ok(ValidationStatus::Full));
        assert!(inst.d_vc(3, 3).is_zero());
        assert_eq!(inst.d_vc(0, 6), &ExactScalar::from_integer(1));
        assert_eq!(inst.d_vc(0, 7), &ExactScalar::from_integer(1000));
    }

    #[test]
    fn diverging_shapes() {
        let inst = gen_diverging(&rat(4, 3), &rat(1, 1)).unwrap();
        assert_eq!(
            (inst.n(), inst.m(), inst.k(), inst.quota().get()),
            (8, 4, 3, 3)
        );
        let inst = gen_diverging(&rat(5, 4), &rat(1, 1)).unwrap();
        assert_eq!(
            (inst.n(), inst.m(), inst.k(), inst.quota().get()),
            (15, 5, 4, 4)
        );
        assert!(validate_metric(&inst).is_ok());
        assert!(matches!(
            gen_diverging(&rat(7, 5), &rat(1, 1)),
            Err(Error::NonIntegralK(_))
        ));
    }

    #[test]
    fn refined_sizes_sum_to_n() {
        assert_eq!(refined_sizes(24, 4), vec![5, 5, 5, 5, 4]);
        assert_eq!(refined_sizes(35, 5).iter().sum::<usize>(), 35);
        assert!(matches!(gen_refined(12, 4), Err(Error::KTooLarge { .. })));
        assert!(validate_metric(&gen_refined(24, 4).unwrap()).is_ok());
    }

    #[test]
    fn separation_table_entries() {
        let eps = rat(1, 100);
        let (inst, _) = gen_separation(&eps).unwrap();
        assert_eq!(inst.d_vc(0, 0).as_rational(), &rat(3, 1));
        assert_eq!(inst.d_vc(1, 1).as_rational(), &rat(1, 1));
        assert_eq!(inst.d_vc(2, 2).as_rational(), &separation_delta());
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((separation_delta().to_f64().unwrap() - golden).abs() < 1e-9);
        for chosen in 0..3 {
            assert!(gen_separation_for(&eps, chosen).is_ok());
        }
    }

    #[test]
    fn random_is_deterministic() {
        let a = gen_random(10, 6, 3, 2, Norm::L1, 7).unwrap();
        assert_eq!(a, gen_random(10, 6, 3, 2, Norm::L1, 7).unwrap());
        assert_eq!(a.quota().get(), 4);
        let b = gen_random_block(10, 6, 3, 2, Norm::L1, 7).unwrap();
        assert_eq!(a.vc_block().unwrap(), b.vc_block().unwrap());
    }
}
