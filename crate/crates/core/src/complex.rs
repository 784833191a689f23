//! Selective Rips filtrations: simplex enumeration up to a dimension cap
//! and filtration values under parameterized scale maps a(r), b(r).
//!
//! A vertex set is a simplex at scale r when its diameter is below a(r)
//! and its vertices can be split into a bounded number of clusters each
//! of diameter below b(r). The filtration value of a simplex is the
//! infimum scale at which both conditions hold.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::scale::ScaleMap;

/// Hard cap on simplex dimension: up to 4 vertices, which supports
/// persistence in dimensions 0 through 2.
pub const MAX_DIM_CAP: usize = 3;

/// Cap on the vertex count accepted by the general partition enumerator.
pub const CLUSTER_ENUM_CAP: usize = 12;

/// Scale maps, cluster budget and dimension/scale caps for a filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationParams {
    /// Diameter scale map; the complex at scale r admits simplices of
    /// diameter below a(r).
    pub a: ScaleMap,
    /// Cluster scale map; vertices must split into at most `max_clusters`
    /// groups of diameter below b(r). Must satisfy a(r) >= b(r).
    pub b: ScaleMap,
    /// Number of clusters allowed (at least 2). With `max_clusters = 3`
    /// the complex keeps its full 2-skeleton and constrains simplices of
    /// dimension 3 and up.
    pub max_clusters: usize,
    /// Largest simplex dimension enumerated (at most [`MAX_DIM_CAP`]).
    pub max_dim: usize,
    /// Scale cap; simplices with filtration value above it are dropped.
    pub r_max: f64,
    /// Abort enumeration if the simplex count would exceed this.
    pub simplex_budget: usize,
}

pub const DEFAULT_SIMPLEX_BUDGET: usize = 40_000_000;

impl FiltrationParams {
    pub fn new(a: ScaleMap, b: ScaleMap, max_clusters: usize, max_dim: usize, r_max: f64) -> Result<Self> {
        if max_clusters < 2 {
            return Err(Error::InvalidParams("max_clusters must be at least 2".into()));
        }
        if max_dim > MAX_DIM_CAP {
            return Err(Error::InvalidParams(format!(
                "max_dim {max_dim} exceeds the supported cap {MAX_DIM_CAP}"
            )));
        }
        if !(r_max > 0.0) {
            return Err(Error::InvalidParams("r_max must be positive".into()));
        }
        // a >= b must hold pointwise; both are piecewise linear, so it is
        // enough to compare at every breakpoint of either map and at r_max.
        let mut probes: Vec<f64> = a
            .knots()
            .iter()
            .chain(b.knots().iter())
            .map(|&(r, _)| r)
            .filter(|&r| r <= r_max)
            .collect();
        probes.push(r_max);
        for &r in &probes {
            if a.eval(r) < b.eval(r) - 1e-12 {
                return Err(Error::InvalidParams(format!(
                    "a(r) < b(r) at r = {r}: a = {}, b = {}",
                    a.eval(r),
                    b.eval(r)
                )));
            }
        }
        Ok(FiltrationParams {
            a,
            b,
            max_clusters,
            max_dim,
            r_max,
            simplex_budget: DEFAULT_SIMPLEX_BUDGET,
        })
    }

    /// Plain Rips filtration: b = a, identity scale.
    pub fn rips(max_dim: usize, r_max: f64) -> Result<Self> {
        FiltrationParams::new(ScaleMap::identity(), ScaleMap::identity(), 3, max_dim, r_max)
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.simplex_budget = budget;
        self
    }
}

/// A simplex together with its filtration value. Vertices are sorted
/// ascending; unused slots hold `u32::MAX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredSimplex {
    pub verts: [u32; 4],
    pub dim: u8,
    pub value: f64,
}

impl FilteredSimplex {
    pub fn vertices(&self) -> &[u32] {
        &self.verts[..=self.dim as usize]
    }
}

/// Pack a vertex slice into the fixed-width key used for lookups.
pub fn vertex_key(verts: &[u32]) -> [u32; 4] {
    let mut key = [u32::MAX; 4];
    key[..verts.len()].copy_from_slice(verts);
    key
}

/// Minimum over all partitions of the vertex set into at most
/// `max_clusters` blocks of the maximum block diameter. Zero when the
/// vertices fit in singleton blocks.
pub fn cluster_value(verts: &[u32], max_clusters: usize, metric: &FiniteMetric) -> Result<f64> {
    let k = verts.len();
    if k == 0 {
        return Err(Error::InvalidParams("cluster value of an empty vertex set".into()));
    }
    if k <= max_clusters {
        return Ok(0.0);
    }
    if k == max_clusters + 1 {
        // Exactly one block holds two vertices, so the best partition
        // groups the closest pair.
        return Ok(min_pairwise(verts, metric));
    }
    if k > CLUSTER_ENUM_CAP {
        return Err(Error::CombinatorialBudget { size: k, cap: CLUSTER_ENUM_CAP });
    }
    // Local distance table, then branch-and-bound over assignments.
    let mut d = [[0.0f64; CLUSTER_ENUM_CAP]; CLUSTER_ENUM_CAP];
    for i in 0..k {
        for j in 0..k {
            d[i][j] = metric.dist(verts[i] as usize, verts[j] as usize);
        }
    }
    let mut assign = [usize::MAX; CLUSTER_ENUM_CAP];
    let mut best = f64::INFINITY;
    assign[0] = 0;
    partition_search(&d, k, max_clusters, 1, 1, 0.0, &mut assign, &mut best);
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn partition_search(
    d: &[[f64; CLUSTER_ENUM_CAP]; CLUSTER_ENUM_CAP],
    k: usize,
    max_blocks: usize,
    i: usize,
    used: usize,
    current_max: f64,
    assign: &mut [usize; CLUSTER_ENUM_CAP],
    best: &mut f64,
) {
    if current_max >= *best {
        return;
    }
    if i == k {
        *best = current_max;
        return;
    }
    // Remaining vertices must still fit: every unassigned vertex can open
    // a new block only while blocks remain.
    let open_limit = used.min(max_blocks - 1);
    for block in 0..=open_limit {
        if block == max_blocks {
            break;
        }
        let mut new_max = current_max;
        let mut feasible = true;
        for j in 0..i {
            if assign[j] == block {
                let dij = d[i][j];
                if dij >= *best {
                    feasible = false;
                    break;
                }
                if dij > new_max {
                    new_max = dij;
                }
            }
        }
        if !feasible {
            continue;
        }
        assign[i] = block;
        let next_used = if block == used { used + 1 } else { used };
        partition_search(d, k, max_blocks, i + 1, next_used, new_max, assign, best);
        assign[i] = usize::MAX;
    }
}

fn min_pairwise(verts: &[u32], metric: &FiniteMetric) -> f64 {
    let mut best = f64::INFINITY;
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            best = best.min(metric.dist(u as usize, v as usize));
        }
    }
    best
}

pub(crate) fn max_pairwise(verts: &[u32], metric: &FiniteMetric) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            worst = worst.max(metric.dist(u as usize, v as usize));
        }
    }
    worst
}

/// Sum of all pairwise distances; for a triangle this is the length of a
/// filling of its vertices.
pub fn filling_length(verts: &[u32], metric: &FiniteMetric) -> f64 {
    let mut total = 0.0;
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            total += metric.dist(u as usize, v as usize);
        }
    }
    total
}

/// Filtration value of a single simplex: max(a^-1(diam), b^-1(cluster)).
/// Errors with [`Error::OutOfRange`] past r_max.
pub fn filtration_value(verts: &[u32], params: &FiltrationParams, metric: &FiniteMetric) -> Result<f64> {
    if verts.is_empty() || verts.len() > params.max_dim + 1 {
        return Err(Error::InvalidParams(format!(
            "simplex with {} vertices outside 1..={}",
            verts.len(),
            params.max_dim + 1
        )));
    }
    let mut sorted = verts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != verts.len() {
        return Err(Error::InvalidParams("simplex vertices must be distinct".into()));
    }
    let diam = max_pairwise(verts, metric);
    let cluster = cluster_value(verts, params.max_clusters, metric)?;
    let value = params.a.inverse(diam).max(params.b.inverse(cluster));
    if value > params.r_max {
        return Err(Error::OutOfRange { value, r_max: params.r_max });
    }
    Ok(value)
}

/// A complete, canonically ordered filtration: every simplex of dimension
/// at most `max_dim` whose filtration value is at most `r_max`, sorted by
/// (value, dimension, diameter, filling length, vertex order).
#[derive(Debug, Clone)]
pub struct Filtration {
    pub params: FiltrationParams,
    simplices: Vec<FilteredSimplex>,
    /// Position lookup for simplices of dimension below max_dim (the ones
    /// that can appear in a boundary). Top-dimensional simplices are not
    /// indexed to keep memory linear in the interesting part.
    index: HashMap<[u32; 4], u32>,
}

impl Filtration {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, i: usize) -> &FilteredSimplex {
        &self.simplices[i]
    }

    pub fn simplices(&self) -> &[FilteredSimplex] {
        &self.simplices
    }

    /// Position of a simplex given by its sorted vertex tuple. Only
    /// simplices of dimension below max_dim are indexed.
    pub fn index_of(&self, verts: &[u32]) -> Option<usize> {
        self.index.get(&vertex_key(verts)).map(|&i| i as usize)
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.params.max_dim + 1];
        for s in &self.simplices {
            counts[s.dim as usize] += 1;
        }
        counts
    }

    /// Export: one simplex per line, "value dim v0 v1 ... diameter cluster".
    pub fn write_text<W: std::io::Write>(&self, metric: &FiniteMetric, out: &mut W) -> Result<()> {
        for s in &self.simplices {
            let diam = max_pairwise(s.vertices(), metric);
            let cluster = cluster_value(s.vertices(), self.params.max_clusters, metric)?;
            write!(out, "{} {}", s.value, s.dim)?;
            for v in s.vertices() {
                write!(out, " {v}")?;
            }
            writeln!(out, " {diam} {cluster}")?;
        }
        Ok(())
    }
}

/// Record carrying the sort key during construction.
struct SortRec {
    value: f64,
    diam: f64,
    fill: f64,
    verts: [u32; 4],
    dim: u8,
}

impl SortRec {
    fn cmp_key(&self, other: &Self) -> std::cmp::Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.dim.cmp(&other.dim))
            .then(self.diam.total_cmp(&other.diam))
            .then(self.fill.total_cmp(&other.fill))
            .then(self.verts.cmp(&other.verts))
    }
}

/// Enumerate the filtration of `metric` under `params`.
///
/// Vertices enter at value 0. Edge and higher enumeration walks the
/// neighborhood graph at scale a(r_max) and expands cliques, pruning a
/// branch as soon as its filtration value exceeds r_max (values are
/// monotone under taking cofaces).
pub fn build_filtration(metric: &FiniteMetric, params: &FiltrationParams) -> Result<Filtration> {
    let n = metric.len();
    let threshold = params.a.eval(params.r_max);
    let cluster_cap = params.b.eval(params.r_max);
    let budget = params.simplex_budget;

    // Adjacency bitsets over the a(r_max)-neighborhood graph.
    let words = n.div_ceil(64);
    let mut adj = vec![0u64; n * words];
    for i in 0..n {
        for j in (i + 1)..n {
            if metric.dist(i, j) <= threshold {
                adj[i * words + j / 64] |= 1 << (j % 64);
                adj[j * words + i / 64] |= 1 << (i % 64);
            }
        }
    }

    let mut recs: Vec<SortRec> = Vec::new();
    let push = |recs: &mut Vec<SortRec>, rec: SortRec| -> Result<()> {
        if recs.len() >= budget {
            return Err(Error::MemoryBudget { count: recs.len() + 1, cap: budget });
        }
        recs.push(rec);
        Ok(())
    };

    for v in 0..n {
        push(&mut recs, SortRec { value: 0.0, diam: 0.0, fill: 0.0, verts: vertex_key(&[v as u32]), dim: 0 })?;
    }

    let mut common = vec![0u64; words];
    let mut common2 = vec![0u64; words];
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = metric.dist(i, j);
            if dij > threshold {
                continue;
            }
            let value = params.a.inverse(dij);
            push(&mut recs, SortRec {
                value,
                diam: dij,
                fill: dij,
                verts: vertex_key(&[i as u32, j as u32]),
                dim: 1,
            })?;
            if params.max_dim < 2 {
                continue;
            }
            // Common neighbors above j.
            for w in 0..words {
                common[w] = adj[i * words + w] & adj[j * words + w];
            }
            mask_above(&mut common, j);
            for k in iter_bits(&common) {
                let dik = metric.dist(i, k);
                let djk = metric.dist(j, k);
                let tri = [i as u32, j as u32, k as u32];
                let diam = dij.max(dik).max(djk);
                let cluster = if params.max_clusters >= 3 {
                    0.0
                } else {
                    dij.min(dik).min(djk)
                };
                let tri_value = params.a.inverse(diam).max(params.b.inverse(cluster));
                if tri_value > params.r_max {
                    // Cofaces only get larger values.
                    continue;
                }
                push(&mut recs, SortRec {
                    value: tri_value,
                    diam,
                    fill: dij + dik + djk,
                    verts: vertex_key(&tri),
                    dim: 2,
                })?;
                if params.max_dim < 3 {
                    continue;
                }
                for w in 0..words {
                    common2[w] = common[w] & adj[k * words + w];
                }
                mask_above(&mut common2, k);
                for l in iter_bits(&common2) {
                    let dil = metric.dist(i, l);
                    let djl = metric.dist(j, l);
                    let dkl = metric.dist(k, l);
                    let diam4 = diam.max(dil).max(djl).max(dkl);
                    let quad = [i as u32, j as u32, k as u32, l as u32];
                    let cluster4 = match params.max_clusters {
                        c if c >= 4 => 0.0,
                        3 => dij.min(dik).min(djk).min(dil).min(djl).min(dkl),
                        _ => cluster_value(&quad, params.max_clusters, metric)?,
                    };
                    if cluster4 > cluster_cap {
                        continue;
                    }
                    let value4 = params.a.inverse(diam4).max(params.b.inverse(cluster4));
                    if value4 > params.r_max {
                        continue;
                    }
                    push(&mut recs, SortRec {
                        value: value4,
                        diam: diam4,
                        fill: dij + dik + djk + dil + djl + dkl,
                        verts: vertex_key(&quad),
                        dim: 3,
                    })?;
                }
            }
        }
    }

    recs.sort_unstable_by(SortRec::cmp_key);

    let max_dim = params.max_dim;
    let mut index = HashMap::new();
    let mut simplices = Vec::with_capacity(recs.len());
    for (pos, rec) in recs.into_iter().enumerate() {
        if (rec.dim as usize) < max_dim {
            index.insert(rec.verts, pos as u32);
        }
        simplices.push(FilteredSimplex { verts: rec.verts, dim: rec.dim, value: rec.value });
    }

    Ok(Filtration { params: params.clone(), simplices, index })
}

fn mask_above(bits: &mut [u64], j: usize) {
    let word = j / 64;
    for w in bits.iter_mut().take(word) {
        *w = 0;
    }
    bits[word] &= !((1u128 << (j % 64 + 1)) as u64).wrapping_sub(1);
}

fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut word = word;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            }
        })
    })
}
