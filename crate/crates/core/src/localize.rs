//! Loop localization: attribute a persistence bar to a critical
//! 2-simplex and realize it as a geodesic triangle in the space.
//!
//! A long dim-1 bar killed by a triangle, or a dim-2 bar carried by a
//! triangle chain, points at a specific triple of points whose geodesic
//! filling traverses the bottleneck loop. The filtration's tie-break
//! order (value, dimension, diameter, filling length, lexicographic)
//! makes that triple deterministic.

use crate::complex::{filling_length, Filtration};
use crate::error::{Error, Result};
use crate::metric::FiniteMetric;
use crate::persistence::Bar;
use crate::winding::{is_circumventing, OrientedTriple};
use crate::metric::WindingContext;

/// A bar realized as a closed geodesic triangle.
#[derive(Debug, Clone)]
pub struct LocalizedLoop {
    /// Vertices of the critical 2-simplex, ascending ids.
    pub triple: [u32; 3],
    /// Geodesic paths x1->x2, x2->x3, x3->x1 as point-id sequences. On an
    /// exact model metric (no graph) each path is just its two endpoints.
    pub paths: [Vec<usize>; 3],
    /// Perimeter: sum of the three pairwise distances.
    pub total_length: f64,
    /// Dimension and interval of the bar this loop explains, when the
    /// localization came from a diagram.
    pub bar_dim: Option<u8>,
    pub bar_birth: Option<f64>,
    pub bar_death: Option<f64>,
}

/// The critical 2-simplex of a bar.
///
/// * finite dim-1 bar: the destroyer triangle — its arrival caps the loop,
///   so its filling is the loop up to homotopy;
/// * dim-2 bar: the triangle of maximal filling length in the
///   representative cycle, the last one the tie-break order admits;
/// * anything else has no canonical triangle and is refused.
pub fn critical_simplex(
    bar: &Bar,
    filtration: &Filtration,
    metric: &FiniteMetric,
) -> Result<[u32; 3]> {
    match (bar.dim, bar.destroyer) {
        (1, Some(destroyer)) => {
            let simplex = filtration.simplex(destroyer as usize);
            debug_assert_eq!(simplex.dim, 2);
            let v = simplex.vertices();
            Ok([v[0], v[1], v[2]])
        }
        (1, None) => Err(Error::NoAttribution {
            reason: "dim-1 bar never dies; no destroyer triangle exists".into(),
        }),
        (2, _) => {
            let mut best: Option<([u32; 3], f64)> = None;
            for (pos, _) in bar.representative.iter() {
                let simplex = filtration.simplex(pos as usize);
                if simplex.dim != 2 {
                    return Err(Error::NoAttribution {
                        reason: "dim-2 representative contains a non-triangle".into(),
                    });
                }
                let v = simplex.vertices();
                let triple = [v[0], v[1], v[2]];
                let fill = filling_length(v, metric);
                let better = match &best {
                    None => true,
                    Some((bt, bf)) => {
                        fill > *bf || (fill == *bf && triple > *bt)
                    }
                };
                if better {
                    best = Some((triple, fill));
                }
            }
            best.map(|(t, _)| t).ok_or_else(|| Error::NoAttribution {
                reason: "dim-2 bar has an empty representative".into(),
            })
        }
        (d, _) => Err(Error::NoAttribution {
            reason: format!("no critical triangle for a dim-{d} bar"),
        }),
    }
}

/// Realize a triple as a closed geodesic triangle. Paths follow the
/// metric's sample graph when it has one; exact model metrics yield
/// two-point segments.
pub fn filling(metric: &FiniteMetric, triple: [u32; 3]) -> Result<LocalizedLoop> {
    let [x1, x2, x3] = triple;
    let mut paths: [Vec<usize>; 3] = Default::default();
    for (slot, (from, to)) in paths
        .iter_mut()
        .zip([(x1, x2), (x2, x3), (x3, x1)])
    {
        *slot = match metric.shortest_path(from as usize, to as usize) {
            Some(p) => p,
            None => vec![from as usize, to as usize],
        };
    }
    let total_length = filling_length(&[x1, x2, x3], metric);
    // Each leg realizes the geodesic distance between its endpoints.
    debug_assert!({
        let leg_sum: f64 = paths
            .iter()
            .map(|p| {
                p.windows(2)
                    .map(|w| metric.dist(w[0], w[1]))
                    .sum::<f64>()
            })
            .sum();
        (leg_sum - total_length).abs() < 1e-6 * (1.0 + total_length)
    });
    Ok(LocalizedLoop {
        triple,
        paths,
        total_length,
        bar_dim: None,
        bar_birth: None,
        bar_death: None,
    })
}

/// Localize a bar: find its critical triangle and fill it.
pub fn localize_bar(
    bar: &Bar,
    filtration: &Filtration,
    metric: &FiniteMetric,
) -> Result<LocalizedLoop> {
    let triple = critical_simplex(bar, filtration, metric)?;
    let mut found = filling(metric, triple)?;
    found.bar_dim = Some(bar.dim);
    found.bar_birth = Some(bar.birth);
    found.bar_death = bar.death;
    Ok(found)
}

/// Ground-truth check on a charted model space: the localized triangle
/// circumvents the reference circle exactly once.
pub fn verify_loop(ctx: &WindingContext, found: &LocalizedLoop) -> Result<bool> {
    is_circumventing(ctx, &OrientedTriple(found.triple))
}
