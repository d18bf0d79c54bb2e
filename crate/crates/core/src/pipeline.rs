//! End-to-end checks: the catalog self-check and the target-dimension
//! consistency harness (zero-pad, scramble by a ball automorphism, recover the hull).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{CatalogEntry, ExpectedFacts};
use crate::error::{Error, Result};
use crate::lft;
use crate::maps::{Model, RationalMap};
use crate::normalize::geometric_rank_exact;
use crate::scalar::GaussianRational as Q;
use crate::spans::thm11_applies;

/// One disagreement between a stored fact and its recomputation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactDiff {
    pub field: &'static str,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    pub name: String,
    pub expected: ExpectedFacts,
    pub found: ExpectedFacts,
    pub diffs: Vec<FactDiff>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfCheckReport {
    pub ok: bool,
    pub entries: Vec<EntryCheck>,
}

fn diff<T: PartialEq + std::fmt::Debug>(field: &'static str, e: &T, f: &T, out: &mut Vec<FactDiff>) {
    if e != f {
        out.push(FactDiff { field, expected: format!("{e:?}"), found: format!("{f:?}") });
    }
}

/// Recomputes every stored fact of one entry exactly. The rank is the
/// maximum over `rank_points` seeded boundary points.
pub fn check_entry(e: &CatalogEntry, rank_points: usize, seed: u64) -> EntryCheck {
    let rank = e
        .expected
        .geometric_rank
        .and_then(|_| geometric_rank_exact(&e.map, rank_points, seed).ok().map(|r| r.rank));
    let found = ExpectedFacts {
        proper: e.map.is_proper(0.0).proper,
        degree: e.map.degree(),
        geometric_rank: rank,
        affine_hull: e.map.affine_hull_dim(0.0),
    };
    let mut diffs = Vec::new();
    diff("proper", &e.expected.proper, &found.proper, &mut diffs);
    diff("degree", &e.expected.degree, &found.degree, &mut diffs);
    diff("geometric_rank", &e.expected.geometric_rank, &found.geometric_rank, &mut diffs);
    diff("affine_hull", &e.expected.affine_hull, &found.affine_hull, &mut diffs);
    EntryCheck { name: e.name.clone(), expected: e.expected.clone(), found, diffs }
}

/// Checks all entries in parallel; the report keeps the input order.
pub fn self_check(entries: &[CatalogEntry], rank_points: usize, seed: u64) -> SelfCheckReport {
    let entries: Vec<EntryCheck> = entries.par_iter().map(|e| check_entry(e, rank_points, seed)).collect();
    SelfCheckReport { ok: entries.iter().all(|e| e.diffs.is_empty()), entries }
}

/// The default catalog, refusing to load if any stored fact fails to re-derive.
pub fn load_verified_catalog(rank_points: usize, seed: u64) -> Result<Vec<CatalogEntry>> {
    let entries = crate::catalog::catalog();
    let report = self_check(&entries, rank_points, seed);
    if report.ok {
        return Ok(entries);
    }
    let lines: Vec<String> = report
        .entries
        .iter()
        .flat_map(|c| c.diffs.iter().map(move |d| format!("{}: {} expected {} found {}", c.name, d.field, d.expected, d.found)))
        .collect();
    Err(Error::NoSolution(format!("catalog self-check failed:\n{}", lines.join("\n"))))
}

#[derive(Clone, Debug, Serialize)]
pub struct Thm11Report {
    pub n: usize,
    /// Target dimension of the map before embedding.
    pub source_target_dim: usize,
    pub embed_dim: usize,
    pub seed: u64,
    /// Hull of the original map.
    pub base_hull: usize,
    /// Hull after zero-padding and the random automorphism.
    pub hull: usize,
    pub thm11_applies: bool,
    pub hull_recovered: bool,
    /// `Some(hull ≤ 3n)` when the theorem's range applies.
    pub within_3n: Option<bool>,
    pub ok: bool,
}

/// Zero-pads a ball map into `B^{embed_dim}`, scrambles it by a seeded exact
/// automorphism of the target ball, and recovers the affine hull.
pub fn pipeline_theorem11_consistency(f: &RationalMap<Q>, embed_dim: usize, seed: u64) -> Result<Thm11Report> {
    if f.model != Model::Ball || f.target_model != Model::Ball {
        return Err(Error::Precondition("the harness takes ball maps".into()));
    }
    if embed_dim < f.target_dim {
        return Err(Error::Dimension(format!("cannot embed B^{} into B^{embed_dim}", f.target_dim)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = lft::random_exact_ball_automorphism(embed_dim, &mut rng);
    let g = f.zero_pad(embed_dim).postcompose(&tau, Model::Ball)?;
    let base_hull = f.affine_hull_dim(0.0);
    let hull = g.affine_hull_dim(0.0);
    let applies = thm11_applies(f.n, embed_dim);
    let within_3n = applies.then_some(hull <= 3 * f.n);
    let hull_recovered = hull == base_hull;
    Ok(Thm11Report {
        n: f.n,
        source_target_dim: f.target_dim,
        embed_dim,
        seed,
        base_hull,
        hull,
        thm11_applies: applies,
        hull_recovered,
        within_3n,
        ok: hull_recovered && within_3n != Some(false),
    })
}
