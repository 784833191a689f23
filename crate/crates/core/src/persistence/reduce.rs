//! Standard persistence column reduction over F_p, processed dimension by
//! dimension from the top down so that paired creators can be cleared.
//!
//! When the metric is available, top-dimension columns are first tested
//! for apparent pairs: a column whose raw pivot face has this very
//! simplex as its earliest coface is already reduced, and its stored
//! pivot column stays at boundary size. On clique filtrations the vast
//! majority of top-dimension columns are apparent, which keeps the
//! remaining reduction chains short.

use std::collections::HashMap;

use crate::complex::{cluster_value, filling_length, max_pairwise, Filtration, FiltrationParams};
use crate::error::Result;
use crate::metric::FiniteMetric;

use super::chain::{simplex_boundary, Chain};
use super::diagram::{Bar, PersistenceDiagram};
use super::field::PrimeField;

struct PivotEntry {
    /// Pivot row: filtration position of the created (d-1)-simplex.
    row: u32,
    /// Column (filtration position) whose reduced form owns this pivot row.
    death: u32,
    /// The reduced column R[death]; a (d-1)-cycle with `row` as its
    /// highest index.
    reduced: Chain,
    /// V[death] when tracked, so later columns can accumulate their own V.
    v: Chain,
}

const NO_OWNER: u32 = u32::MAX;

/// Compute the persistence diagram of a filtration over F_p.
///
/// Dimensions are processed descending; a pairing found in dimension d
/// clears the paired (d-1)-column, which then never has to be reduced.
/// Finite bars carry the reduced column of their destroyer as
/// representative cycle; infinite bars carry the cycle accumulated in V
/// when their column reduced to zero.
pub fn reduce(filtration: &Filtration, p: u32) -> Result<PersistenceDiagram> {
    reduce_impl(filtration, p, None)
}

/// [`reduce`] with the apparent-pairs shortcut enabled for the top
/// dimension. Produces the identical diagram; the metric is only used to
/// evaluate coface filtration values.
pub fn reduce_with_metric(
    filtration: &Filtration,
    metric: &FiniteMetric,
    p: u32,
) -> Result<PersistenceDiagram> {
    reduce_impl(filtration, p, Some(metric))
}

fn reduce_impl(
    filtration: &Filtration,
    p: u32,
    metric: Option<&FiniteMetric>,
) -> Result<PersistenceDiagram> {
    let field = PrimeField::new(p)?;
    let n = filtration.len();
    let max_dim = filtration.params.max_dim;

    let mut by_dim: Vec<Vec<u32>> = vec![Vec::new(); max_dim + 1];
    for i in 0..n {
        by_dim[filtration.simplex(i).dim as usize].push(i as u32);
    }

    let mut cleared = vec![false; n];
    let mut bars: Vec<Bar> = Vec::new();
    let mut top_cycle_births: Vec<f64> = Vec::new();
    let mut scratch: Vec<(u32, u32)> = Vec::new();
    // Pivot-row ownership across the whole position space; rows of
    // different dimensions never collide, so one map is reset per pass.
    let mut owner: Vec<u32> = vec![NO_OWNER; n];
    let mut entries: Vec<PivotEntry> = Vec::new();

    for d in (1..=max_dim).rev() {
        let track_v = d < max_dim;
        let apparent = if d == max_dim { metric } else { None };
        let mut min_cofacet: HashMap<u32, Option<[u32; 4]>> = HashMap::new();
        owner.fill(NO_OWNER);
        entries.clear();
        for &j in &by_dim[d] {
            if cleared[j as usize] {
                continue;
            }
            let mut col = simplex_boundary(j as usize, filtration, &field)?;
            let mut v = if track_v {
                Chain::from_terms(&[(j, 1)], &field)
            } else {
                Chain::zero()
            };
            if let (Some(metric), Some((low, _))) = (apparent, col.low()) {
                if owner[low as usize] == NO_OWNER {
                    let cached = min_cofacet.entry(low).or_insert_with(|| {
                        minimal_cofacet(
                            filtration.simplex(low as usize).vertices(),
                            &filtration.params,
                            metric,
                        )
                    });
                    if *cached == Some(filtration.simplex(j as usize).verts) {
                        // Apparent pair: the raw boundary is already
                        // reduced with pivot `low`.
                        cleared[low as usize] = true;
                        owner[low as usize] = entries.len() as u32;
                        entries.push(PivotEntry { row: low, death: j, reduced: col, v });
                        continue;
                    }
                }
            }
            while let Some((low, c)) = col.low() {
                let slot = owner[low as usize];
                if slot == NO_OWNER {
                    break;
                }
                let entry = &entries[slot as usize];
                let pivot_coeff = entry.reduced.low().unwrap().1;
                let factor = field.neg(field.mul(c, field.inv(pivot_coeff)));
                col.add_scaled(&entry.reduced, factor, &field, &mut scratch);
                if track_v {
                    v.add_scaled(&entry.v, factor, &field, &mut scratch);
                }
            }
            match col.low() {
                None => {
                    // A new d-cycle that nothing above can kill.
                    let birth = filtration.simplex(j as usize).value;
                    if d == max_dim {
                        top_cycle_births.push(birth);
                    } else {
                        bars.push(Bar {
                            dim: d as u8,
                            birth,
                            death: None,
                            birth_open: birth > 0.0,
                            death_open: true,
                            creator: j,
                            destroyer: None,
                            representative: v,
                        });
                    }
                }
                Some((low, _)) => {
                    cleared[low as usize] = true;
                    owner[low as usize] = entries.len() as u32;
                    entries.push(PivotEntry { row: low, death: j, reduced: col, v });
                }
            }
        }
        // Emit the finite bars of dimension d-1 found in this pass.
        for entry in entries.drain(..) {
            let birth = filtration.simplex(entry.row as usize).value;
            let death = filtration.simplex(entry.death as usize).value;
            if death > birth {
                bars.push(Bar {
                    dim: (d - 1) as u8,
                    birth,
                    death: Some(death),
                    birth_open: birth > 0.0,
                    death_open: false,
                    creator: entry.row,
                    destroyer: Some(entry.death),
                    representative: entry.reduced,
                });
            }
        }
    }

    // Vertices have empty boundary; every uncleared one is an infinite
    // component.
    for &j in &by_dim[0] {
        if !cleared[j as usize] {
            bars.push(Bar {
                dim: 0,
                birth: 0.0,
                death: None,
                birth_open: false,
                death_open: true,
                creator: j,
                destroyer: None,
                representative: Chain::from_terms(&[(j, 1)], &field),
            });
        }
    }

    bars.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(
                a.death
                    .unwrap_or(f64::INFINITY)
                    .total_cmp(&b.death.unwrap_or(f64::INFINITY)),
            )
            .then(a.creator.cmp(&b.creator))
    });
    top_cycle_births.sort_by(f64::total_cmp);

    Ok(PersistenceDiagram { p, max_dim, bars, top_cycle_births })
}

/// The earliest coface of `face` in the filtration order (value, dim,
/// diameter, filling length, vertices), or None if the face has no
/// coface below r_max. Must mirror the build's value computation exactly.
fn minimal_cofacet(
    face: &[u32],
    params: &FiltrationParams,
    metric: &FiniteMetric,
) -> Option<[u32; 4]> {
    let n = metric.len() as u32;
    let k = face.len();
    let mut best: Option<(f64, f64, f64, [u32; 4])> = None;
    for v in 0..n {
        if face.contains(&v) {
            continue;
        }
        let mut verts = [u32::MAX; 4];
        let mut i = 0;
        while i < k && face[i] < v {
            verts[i] = face[i];
            i += 1;
        }
        verts[i] = v;
        for (slot, &f) in verts[i + 1..=k].iter_mut().zip(&face[i..]) {
            *slot = f;
        }
        let cand = &verts[..=k];
        let diam = max_pairwise(cand, metric);
        let Ok(cluster) = cluster_value(cand, params.max_clusters, metric) else {
            continue;
        };
        let value = params.a.inverse(diam).max(params.b.inverse(cluster));
        if value > params.r_max {
            continue;
        }
        let fill = filling_length(cand, metric);
        let better = match &best {
            None => true,
            Some((bv, bd, bf, bverts)) => {
                value
                    .total_cmp(bv)
                    .then(diam.total_cmp(bd))
                    .then(fill.total_cmp(bf))
                    .then(verts.cmp(bverts))
                    .is_lt()
            }
        };
        if better {
            best = Some((value, diam, fill, verts));
        }
    }
    best.map(|(_, _, _, verts)| verts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_filtration, FiltrationParams};
    use crate::metric::{exact_circle_metric, FiniteMetric, Provenance};
    use crate::scale::ScaleMap;

    #[test]
    fn two_points_merge() {
        let m = FiniteMetric::from_matrix(
            2,
            vec![0.0, 1.0, 1.0, 0.0],
            Provenance::ExactModel,
        )
        .unwrap();
        let f = build_filtration(&m, &FiltrationParams::rips(2, 2.0).unwrap()).unwrap();
        let diagram = reduce(&f, 2).unwrap();
        let dim0: Vec<&Bar> = diagram.bars.iter().filter(|b| b.dim == 0).collect();
        assert_eq!(dim0.len(), 2);
        let infinite: Vec<&&Bar> = dim0.iter().filter(|b| b.is_infinite()).collect();
        assert_eq!(infinite.len(), 1);
        let finite: Vec<&&Bar> = dim0.iter().filter(|b| !b.is_infinite()).collect();
        assert_eq!(finite.len(), 1);
        assert_eq!(finite[0].birth, 0.0);
        assert_eq!(finite[0].death, Some(1.0));
        assert!(!finite[0].death_open);
    }

    #[test]
    fn components_at_scale_zero_plus() {
        let angles: Vec<f64> = (0..9).map(|i| i as f64 * 0.6).collect();
        let (m, _) = exact_circle_metric(&angles, 6.0).unwrap();
        let f = build_filtration(&m, &FiltrationParams::rips(2, 2.5).unwrap()).unwrap();
        let diagram = reduce(&f, 2).unwrap();
        assert_eq!(diagram.betti(0, 1e-9), 9);
    }

    #[test]
    fn dense_circle_dim1_death_near_third() {
        let c = 2.0 * std::f64::consts::PI;
        let n = 60;
        let angles: Vec<f64> = (0..n).map(|i| c * i as f64 / n as f64).collect();
        let (m, _) = exact_circle_metric(&angles, c).unwrap();
        let f = build_filtration(&m, &FiltrationParams::rips(2, 2.5).unwrap()).unwrap();
        let diagram = reduce(&f, 2).unwrap();
        let long: Vec<&Bar> = diagram
            .bars
            .iter()
            .filter(|b| b.dim == 1 && b.lifespan() > c / 6.0)
            .collect();
        assert_eq!(long.len(), 1);
        let death = long[0].death.unwrap();
        let mesh = c / n as f64;
        assert!((death - c / 3.0).abs() <= mesh, "death = {death}");
    }

    #[test]
    fn representatives_are_cycles() {
        use super::super::chain::boundary;
        let angles: Vec<f64> = (0..10).map(|i| i as f64 * 0.63).collect();
        let (m, _) = exact_circle_metric(&angles, 6.3).unwrap();
        let f = build_filtration(&m, &FiltrationParams::rips(3, 3.0).unwrap()).unwrap();
        for p in [2u32, 3] {
            let field = PrimeField::new(p).unwrap();
            let diagram = reduce(&f, p).unwrap();
            for bar in &diagram.bars {
                assert!(!bar.representative.is_zero());
                let b = boundary(&bar.representative, &f, &field).unwrap();
                assert!(b.is_zero(), "representative of {bar:?} is not a cycle");
                // The representative exists at scales in the bar interior.
                for (pos, _) in bar.representative.iter() {
                    assert!(f.simplex(pos as usize).value <= bar.birth + 1e-12);
                }
            }
        }
    }

    #[test]
    fn deterministic() {
        let angles: Vec<f64> = (0..20).map(|i| (i * i % 17) as f64 * 0.3).collect();
        let (m, _) = exact_circle_metric(&angles, 6.0).unwrap();
        let f = build_filtration(&m, &FiltrationParams::rips(3, 2.0).unwrap()).unwrap();
        let a = reduce(&f, 2).unwrap();
        let b = reduce(&f, 2).unwrap();
        assert_eq!(a.bars.len(), b.bars.len());
        for (x, y) in a.bars.iter().zip(&b.bars) {
            assert_eq!(x.creator, y.creator);
            assert_eq!(x.destroyer, y.destroyer);
            assert_eq!(x.representative, y.representative);
        }
    }

    #[test]
    fn apparent_shortcut_matches_plain_reduction() {
        // Same diagram, bar for bar, with and without the shortcut, on
        // Rips and selective filtrations over two fields.
        let angles: Vec<f64> = (0..40).map(|i| (i * 13 % 40) as f64 * 0.157).collect();
        let (m, _) = exact_circle_metric(&angles, 2.0 * std::f64::consts::PI).unwrap();
        let selective = FiltrationParams::new(
            ScaleMap::identity(),
            ScaleMap::linear(0.3).unwrap(),
            3,
            3,
            2.4,
        )
        .unwrap();
        for params in [FiltrationParams::rips(3, 2.4).unwrap(), selective] {
            let f = build_filtration(&m, &params).unwrap();
            for p in [2u32, 5] {
                let plain = reduce(&f, p).unwrap();
                let fast = reduce_with_metric(&f, &m, p).unwrap();
                assert_eq!(plain.bars.len(), fast.bars.len());
                for (x, y) in plain.bars.iter().zip(&fast.bars) {
                    assert_eq!(x.dim, y.dim);
                    assert_eq!(x.birth, y.birth);
                    assert_eq!(x.death, y.death);
                    assert_eq!(x.creator, y.creator);
                    assert_eq!(x.destroyer, y.destroyer);
                }
                assert_eq!(plain.top_cycle_births, fast.top_cycle_births);
            }
        }
    }
}
