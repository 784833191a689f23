//! Greedy matching distance between persistence diagrams.
//!
//! Bars of equal dimension are matched greedily, longest first; a bar may
//! also be matched to the diagonal at half its lifespan. The reported
//! distance is the maximum cost over all matches — an upper bound on the
//! bottleneck distance that is exact for well-separated diagrams.

/// A bar stripped to its interval, as read back from a diagram file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleBar {
    pub dim: u8,
    pub birth: f64,
    pub death: Option<f64>,
}

impl SimpleBar {
    pub fn lifespan(&self) -> f64 {
        match self.death {
            Some(d) => d - self.birth,
            None => f64::INFINITY,
        }
    }
}

/// Matching cost in the sup metric; bars of different finiteness never
/// match.
fn pair_cost(a: &SimpleBar, b: &SimpleBar) -> f64 {
    match (a.death, b.death) {
        (Some(da), Some(db)) => (a.birth - b.birth).abs().max((da - db).abs()),
        (None, None) => (a.birth - b.birth).abs(),
        _ => f64::INFINITY,
    }
}

fn diagonal_cost(a: &SimpleBar) -> f64 {
    a.lifespan() / 2.0
}

#[derive(Debug, Clone)]
pub struct DimReport {
    pub dim: u8,
    /// Matched pairs as (index in left, index in right, cost).
    pub pairs: Vec<(usize, usize, f64)>,
    /// Bars matched to the diagonal, per side.
    pub diagonal_left: Vec<usize>,
    pub diagonal_right: Vec<usize>,
    /// Max cost over all matches in this dimension.
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct MatchReport {
    pub per_dim: Vec<DimReport>,
    /// Max over dimensions.
    pub distance: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
}

impl MatchReport {
    pub fn dim(&self, d: u8) -> Option<&DimReport> {
        self.per_dim.iter().find(|r| r.dim == d)
    }
}

/// Greedily match two diagrams dimension by dimension.
pub fn compare_diagrams(left: &[SimpleBar], right: &[SimpleBar], tolerance: f64) -> MatchReport {
    let max_dim = left
        .iter()
        .chain(right)
        .map(|b| b.dim)
        .max()
        .unwrap_or(0);
    let mut per_dim = Vec::new();
    let mut distance = 0.0f64;
    for d in 0..=max_dim {
        let li: Vec<usize> = (0..left.len()).filter(|&i| left[i].dim == d).collect();
        let ri: Vec<usize> = (0..right.len()).filter(|&i| right[i].dim == d).collect();
        let report = match_dim(d, left, &li, right, &ri);
        distance = distance.max(report.distance);
        per_dim.push(report);
    }
    MatchReport {
        per_dim,
        distance,
        tolerance,
        within_tolerance: distance <= tolerance,
    }
}

fn match_dim(
    dim: u8,
    left: &[SimpleBar],
    li: &[usize],
    right: &[SimpleBar],
    ri: &[usize],
) -> DimReport {
    // Longest bars claim their match first.
    let mut order: Vec<usize> = li.to_vec();
    order.sort_by(|&a, &b| {
        left[b]
            .lifespan()
            .total_cmp(&left[a].lifespan())
            .then(left[a].birth.total_cmp(&left[b].birth))
    });
    let mut taken = vec![false; right.len()];
    let mut pairs = Vec::new();
    let mut diagonal_left = Vec::new();
    let mut diagonal_right = Vec::new();
    let mut distance = 0.0f64;
    for &i in &order {
        let mut best: Option<(usize, f64)> = None;
        for &j in ri {
            if taken[j] {
                continue;
            }
            let c = pair_cost(&left[i], &right[j]);
            if best.map_or(true, |(_, bc)| c < bc) {
                best = Some((j, c));
            }
        }
        let diag = diagonal_cost(&left[i]);
        match best {
            Some((j, c)) if c <= diag => {
                taken[j] = true;
                pairs.push((i, j, c));
                distance = distance.max(c);
            }
            _ => {
                diagonal_left.push(i);
                distance = distance.max(diag);
            }
        }
    }
    for &j in ri {
        if !taken[j] {
            diagonal_right.push(j);
            distance = distance.max(diagonal_cost(&right[j]));
        }
    }
    DimReport { dim, pairs, diagonal_left, diagonal_right, distance }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar(dim: u8, birth: f64, death: Option<f64>) -> SimpleBar {
        SimpleBar { dim, birth, death }
    }

    #[test]
    fn identical_diagrams_are_at_distance_zero() {
        let d = vec![
            bar(0, 0.0, None),
            bar(0, 0.0, Some(0.3)),
            bar(1, 0.5, Some(2.1)),
            bar(2, 1.9, Some(2.0)),
        ];
        let report = compare_diagrams(&d, &d, 0.0);
        assert_eq!(report.distance, 0.0);
        assert!(report.within_tolerance);
        assert!(report.per_dim.iter().all(|r| r.diagonal_left.is_empty()));
    }

    #[test]
    fn shifted_bar_costs_the_shift() {
        let a = vec![bar(1, 0.5, Some(2.0))];
        let b = vec![bar(1, 0.55, Some(2.02))];
        let report = compare_diagrams(&a, &b, 0.1);
        assert!((report.distance - 0.05).abs() < 1e-12);
        assert!(report.within_tolerance);
    }

    #[test]
    fn short_noise_goes_to_the_diagonal() {
        let a = vec![bar(1, 0.5, Some(2.0)), bar(1, 0.8, Some(0.85))];
        let b = vec![bar(1, 0.5, Some(2.0))];
        let report = compare_diagrams(&a, &b, 0.05);
        let d1 = report.dim(1).unwrap();
        assert_eq!(d1.pairs.len(), 1);
        assert_eq!(d1.diagonal_left, vec![1]);
        assert!((report.distance - 0.025).abs() < 1e-12);
    }

    #[test]
    fn infinite_bars_only_match_infinite_bars() {
        let a = vec![bar(1, 0.5, None)];
        let b = vec![bar(1, 0.6, Some(100.0))];
        let report = compare_diagrams(&a, &b, 1.0);
        // Neither can match the other; both go to the diagonal, the
        // infinite one at infinite cost.
        assert!(report.distance.is_infinite());
        assert!(!report.within_tolerance);

        let c = vec![bar(1, 0.6, None)];
        let report = compare_diagrams(&a, &c, 1.0);
        assert!((report.distance - 0.1).abs() < 1e-12);
    }

    #[test]
    fn dimensions_do_not_mix() {
        let a = vec![bar(1, 0.5, Some(2.0))];
        let b = vec![bar(2, 0.5, Some(2.0))];
        let report = compare_diagrams(&a, &b, 10.0);
        // Each bar is alone in its dimension and pays its diagonal cost.
        assert!((report.distance - 0.75).abs() < 1e-12);
    }

    #[test]
    fn greedy_prefers_long_bars() {
        // The long bar grabs the good match even though the short bar
        // appears first.
        let a = vec![bar(1, 1.0, Some(1.2)), bar(1, 1.0, Some(3.0))];
        let b = vec![bar(1, 1.0, Some(3.0))];
        let report = compare_diagrams(&a, &b, 0.2);
        let d1 = report.dim(1).unwrap();
        assert_eq!(d1.pairs, vec![(1, 0, 0.0)]);
        assert_eq!(d1.diagonal_left, vec![0]);
        assert!((report.distance - 0.1).abs() < 1e-12);
    }
}
