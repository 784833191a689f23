//! Finite metric spaces: synthetic samplers of model geometries and
//! geodesic metrics induced by weighted neighborhood graphs on embedded
//! point clouds.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A finite set of points in ambient Euclidean 3-space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<[f64; 3]>,
    /// Optional per-point labels, carried through thinning.
    pub labels: Option<Vec<String>>,
}

impl PointCloud {
    pub fn new(points: Vec<[f64; 3]>) -> Self {
        PointCloud { points, labels: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// How the distances of a [`FiniteMetric`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Closed-form model metric (circle, cylinder, ...).
    ExactModel,
    /// All-pairs shortest paths in a weighted neighborhood graph.
    GraphGeodesic,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::ExactModel => write!(f, "exact-model"),
            Provenance::GraphGeodesic => write!(f, "graph-geodesic"),
        }
    }
}

/// A symmetric distance matrix over point ids 0..n. The universe every
/// complex is built on.
///
/// Graph-geodesic metrics keep their neighborhood graph so that shortest
/// paths can be recovered later for loop localization.
#[derive(Debug, Clone)]
pub struct FiniteMetric {
    n: usize,
    /// Row-major full symmetric matrix, length n*n.
    d: Vec<f64>,
    pub provenance: Provenance,
    /// Adjacency lists of the inducing graph, if any.
    graph: Option<Vec<Vec<(u32, f64)>>>,
    /// Link radius used to build the graph, if any.
    link_radius: Option<f64>,
}

impl FiniteMetric {
    /// Wrap an existing full symmetric matrix. Checks symmetry and zero
    /// diagonal; the triangle inequality is the caller's responsibility
    /// (use [`FiniteMetric::check_triangle_inequality`] in tests).
    pub fn from_matrix(n: usize, d: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidParams(format!(
                "distance matrix has {} entries, expected {}",
                d.len(),
                n * n
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::InvalidParams(format!("d({i},{i}) != 0")));
            }
            for j in 0..i {
                let a = d[i * n + j];
                let b = d[j * n + i];
                if a != b || !a.is_finite() || a < 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "entry d({i},{j}) = {a} is asymmetric, negative or not finite"
                    )));
                }
            }
        }
        Ok(FiniteMetric { n, d, provenance, graph: None, link_radius: None })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline(always)]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn graph(&self) -> Option<&Vec<Vec<(u32, f64)>>> {
        self.graph.as_ref()
    }

    pub fn link_radius(&self) -> Option<f64> {
        self.link_radius
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        self.d.iter().cloned().fold(0.0, f64::max)
    }

    /// Verify d(i,k) <= d(i,j) + d(j,k) + tol for all triples. O(n^3),
    /// meant for tests and small inputs.
    pub fn check_triangle_inequality(&self, tol: f64) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.dist(i, k) > self.dist(i, j) + self.dist(j, k) + tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Shortest path between two points in the inducing graph, as a
    /// vertex sequence including both endpoints. Only available on
    /// graph-geodesic metrics.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let graph = self.graph.as_ref()?;
        if from == to {
            return Some(vec![from]);
        }
        let n = self.n;
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[from] = 0.0;
        heap.push(Reverse((OrdF64(0.0), from)));
        while let Some(Reverse((OrdF64(du), u))) = heap.pop() {
            if du > dist[u] {
                continue;
            }
            if u == to {
                break;
            }
            for &(v, w) in &graph[u] {
                let v = v as usize;
                let nd = du + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = u;
                    heap.push(Reverse((OrdF64(nd), v)));
                }
            }
        }
        if !dist[to].is_finite() {
            return None;
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// A model geodesic circle: circumference plus an arc-length position on
/// the reference circle for every point. Enables exact winding oracles.
#[derive(Debug, Clone)]
pub struct WindingContext {
    pub circumference: f64,
    /// angle[i] in [0, circumference) is the arc-length position of point i.
    pub angles: Vec<f64>,
}

impl WindingContext {
    pub fn new(circumference: f64, angles: Vec<f64>) -> Result<Self> {
        if !(circumference > 0.0) {
            return Err(Error::InvalidParams("circumference must be positive".into()));
        }
        for (i, &a) in angles.iter().enumerate() {
            if !(0.0..circumference).contains(&a) {
                return Err(Error::InvalidParams(format!(
                    "angle {a} of point {i} outside [0, {circumference})"
                )));
            }
        }
        Ok(WindingContext { circumference, angles })
    }
}

/// Uniform sample of the unit sphere restricted to z <= h, cut along the
/// parallel at height h. Deterministic for a fixed seed.
pub fn sample_cut_sphere(count: usize, h: f64, seed: u64) -> Result<PointCloud> {
    if count == 0 {
        return Err(Error::InvalidParams("count must be at least 1".into()));
    }
    if !(-1.0..1.0).contains(&h) {
        return Err(Error::InvalidParams(format!("height h = {h} outside (-1, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        // Normalized Gaussian triple is uniform on the sphere; rejection
        // keeps the part below the cut.
        let p = [gaussian(&mut rng), gaussian(&mut rng), gaussian(&mut rng)];
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if norm < 1e-12 {
            continue;
        }
        let q = [p[0] / norm, p[1] / norm, p[2] / norm];
        if q[2] <= h {
            points.push(q);
        }
    }
    Ok(PointCloud::new(points))
}

/// Chart an embedded cloud by azimuth onto the rim circle of the unit
/// sphere cut at height h: the parallel of radius sqrt(1 - h^2). Exact
/// for loops homotopic to the rim; arc position of a point is its
/// azimuth times the rim radius.
pub fn azimuthal_context(cloud: &PointCloud, h: f64) -> Result<WindingContext> {
    if !(-1.0..1.0).contains(&h) {
        return Err(Error::InvalidParams(format!("height h = {h} outside (-1, 1)")));
    }
    let rim = (1.0 - h * h).sqrt();
    let c = std::f64::consts::TAU * rim;
    let angles = cloud
        .points
        .iter()
        .map(|p| {
            let mut theta = p[1].atan2(p[0]);
            if theta < 0.0 {
                theta += std::f64::consts::TAU;
            }
            // Rounding at the wrap point must not escape [0, c).
            (theta * rim).min(c - f64::EPSILON * c)
        })
        .collect();
    WindingContext::new(c, angles)
}

/// Uniform sample of the flat cylinder [0, c) x [0, w] as (angle, height)
/// pairs. Deterministic for a fixed seed.
pub fn sample_cylinder(count: usize, c: f64, w: f64, seed: u64) -> Result<Vec<(f64, f64)>> {
    if count == 0 {
        return Err(Error::InvalidParams("count must be at least 1".into()));
    }
    if !(c > 0.0) || w < 0.0 {
        return Err(Error::InvalidParams(format!(
            "cylinder needs positive circumference and non-negative width, got c={c}, w={w}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let theta = rng.gen_range(0.0..c);
            let t = if w > 0.0 { rng.gen_range(0.0..=w) } else { 0.0 };
            (theta, t)
        })
        .collect())
}

/// Marsaglia polar method; two values per round, one kept. Uses only the
/// uniform source so the stream stays reproducible.
fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen_range(-1.0..1.0);
        let v: f64 = rng.gen_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Greedy density filter in input order: keep a point iff it is at
/// Euclidean distance >= min_dist from every point kept so far.
pub fn poisson_thin(cloud: &PointCloud, min_dist: f64) -> Result<PointCloud> {
    if !(min_dist > 0.0) {
        return Err(Error::InvalidParams("min_dist must be positive".into()));
    }
    let mut kept: Vec<[f64; 3]> = Vec::new();
    let mut kept_labels: Vec<String> = Vec::new();
    for (i, p) in cloud.points.iter().enumerate() {
        if kept.iter().all(|q| euclid(p, q) >= min_dist) {
            kept.push(*p);
            if let Some(labels) = &cloud.labels {
                kept_labels.push(labels[i].clone());
            }
        }
    }
    Ok(PointCloud {
        points: kept,
        labels: cloud.labels.as_ref().map(|_| kept_labels),
    })
}

#[inline]
pub fn euclid(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    let dz = p[2] - q[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Geodesic metric induced by the weighted neighborhood graph: points at
/// Euclidean distance <= link_radius are joined by an edge weighted by
/// that distance, and d becomes all-pairs shortest-path length.
///
/// Disconnection is a hard error: downstream filtration values must be
/// finite.
pub fn build_geodesic_metric(cloud: &PointCloud, link_radius: f64) -> Result<FiniteMetric> {
    if !(link_radius > 0.0) {
        return Err(Error::InvalidParams("link_radius must be positive".into()));
    }
    let n = cloud.len();
    let mut graph: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let w = euclid(&cloud.points[i], &cloud.points[j]);
            if w <= link_radius {
                graph[i].push((j as u32, w));
                graph[j].push((i as u32, w));
            }
        }
    }
    let rows: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|src| {
            let row = dijkstra(&graph, src);
            if let Some(unreached) = row.iter().position(|d| !d.is_finite()) {
                Err(Error::DisconnectedGraph { from: src, unreached, link_radius })
            } else {
                Ok(row)
            }
        })
        .collect();
    let mut d = Vec::with_capacity(n * n);
    for row in rows {
        d.extend(row?);
    }
    Ok(FiniteMetric {
        n,
        d,
        provenance: Provenance::GraphGeodesic,
        graph: Some(graph),
        link_radius: Some(link_radius),
    })
}

#[derive(PartialEq, PartialOrd)]
struct OrdF64(f64);
impl Eq for OrdF64 {}
#[allow(clippy::derive_ord_xor_partial_ord)]
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other).unwrap()
    }
}

fn dijkstra(graph: &[Vec<(u32, f64)>], src: usize) -> Vec<f64> {
    let n = graph.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Reverse((OrdF64(0.0), src)));
    while let Some(Reverse((OrdF64(du), u))) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, w) in &graph[u] {
            let v = v as usize;
            let nd = du + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((OrdF64(nd), v)));
            }
        }
    }
    dist
}

/// Exact arc-length metric on a circle of circumference `c`:
/// d(i,j) = min(|a_i - a_j|, c - |a_i - a_j|).
pub fn exact_circle_metric(angles: &[f64], c: f64) -> Result<(FiniteMetric, WindingContext)> {
    let ctx = WindingContext::new(c, angles.to_vec())?;
    let n = angles.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let v = arc_dist(angles[i], angles[j], c);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    let metric = FiniteMetric {
        n,
        d,
        provenance: Provenance::ExactModel,
        graph: None,
        link_radius: None,
    };
    Ok((metric, ctx))
}

#[inline]
pub fn arc_dist(a: f64, b: f64, c: f64) -> f64 {
    let delta = (a - b).abs();
    delta.min(c - delta)
}

/// Flat-cylinder geodesic metric on samples (angle, height):
/// d = sqrt(arc^2 + dt^2) with arc the shorter-arc distance of angles.
pub fn exact_cylinder_metric(
    samples: &[(f64, f64)],
    c: f64,
    w: f64,
) -> Result<(FiniteMetric, WindingContext)> {
    if w < 0.0 {
        return Err(Error::InvalidParams("cylinder width must be non-negative".into()));
    }
    let angles: Vec<f64> = samples.iter().map(|&(theta, _)| theta).collect();
    let ctx = WindingContext::new(c, angles)?;
    for (i, &(_, t)) in samples.iter().enumerate() {
        if !(0.0..=w).contains(&t) {
            return Err(Error::InvalidParams(format!(
                "height {t} of sample {i} outside [0, {w}]"
            )));
        }
    }
    let n = samples.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..i {
            let arc = arc_dist(samples[i].0, samples[j].0, c);
            let dt = samples[i].1 - samples[j].1;
            let v = (arc * arc + dt * dt).sqrt();
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    let metric = FiniteMetric {
        n,
        d,
        provenance: Provenance::ExactModel,
        graph: None,
        link_radius: None,
    };
    Ok((metric, ctx))
}
