//! Monotone piecewise-linear scale maps r -> length and their inverses.

use crate::error::{Error, Result};

/// An increasing piecewise-linear bijection of (0, inf) onto itself,
/// described by knots starting at (0, 0) and a final slope past the last
/// knot. Used for the scale maps a(r) and b(r) of a filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleMap {
    /// (r, value) pairs, strictly increasing in both coordinates; the
    /// first knot is always (0, 0).
    knots: Vec<(f64, f64)>,
    /// Slope beyond the last knot; must be positive.
    final_slope: f64,
}

impl ScaleMap {
    /// a(r) = r.
    pub fn identity() -> Self {
        ScaleMap { knots: vec![(0.0, 0.0)], final_slope: 1.0 }
    }

    /// b(r) = s * r for s > 0.
    pub fn linear(s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidParams(format!("scale slope {s} must be positive")));
        }
        Ok(ScaleMap { knots: vec![(0.0, 0.0)], final_slope: s })
    }

    /// b(r) = min(r, offset + s * r) for 0 < s < 1, offset > 0. Identity
    /// at small scales, slope s past the crossover at r = offset/(1-s).
    pub fn capped_linear(offset: f64, s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) || !(offset > 0.0) {
            return Err(Error::InvalidParams(format!(
                "capped map needs slope in (0,1) and positive offset, got s={s}, offset={offset}"
            )));
        }
        let crossover = offset / (1.0 - s);
        Ok(ScaleMap {
            knots: vec![(0.0, 0.0), (crossover, crossover)],
            final_slope: s,
        })
    }

    /// Arbitrary knot list; must start at (0,0) and be strictly
    /// increasing in both coordinates.
    pub fn from_knots(knots: Vec<(f64, f64)>, final_slope: f64) -> Result<Self> {
        if knots.first() != Some(&(0.0, 0.0)) {
            return Err(Error::InvalidParams("scale map must start at (0, 0)".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::InvalidParams(format!(
                    "scale map knots not strictly increasing: {:?} -> {:?}",
                    w[0], w[1]
                )));
            }
        }
        if !(final_slope > 0.0) {
            return Err(Error::InvalidParams("final slope must be positive".into()));
        }
        Ok(ScaleMap { knots, final_slope })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn final_slope(&self) -> f64 {
        self.final_slope
    }

    /// Evaluate the map at r >= 0.
    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        let (last_r, last_v) = *self.knots.last().unwrap();
        if r >= last_r {
            return last_v + (r - last_r) * self.final_slope;
        }
        let i = self.knots.partition_point(|&(kr, _)| kr <= r);
        let (r0, v0) = self.knots[i - 1];
        let (r1, v1) = self.knots[i];
        v0 + (r - r0) * (v1 - v0) / (r1 - r0)
    }

    /// Inverse map: the unique r with eval(r) = v.
    pub fn inverse(&self, v: f64) -> f64 {
        debug_assert!(v >= 0.0);
        let (last_r, last_v) = *self.knots.last().unwrap();
        if v >= last_v {
            return last_r + (v - last_v) / self.final_slope;
        }
        let i = self.knots.partition_point(|&(_, kv)| kv <= v);
        let (r0, v0) = self.knots[i - 1];
        let (r1, v1) = self.knots[i];
        r0 + (v - v0) * (r1 - r0) / (v1 - v0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_round_trip() {
        let m = ScaleMap::identity();
        assert_eq!(m.eval(1.7), 1.7);
        assert_eq!(m.inverse(1.7), 1.7);
    }

    #[test]
    fn linear_inverse() {
        let m = ScaleMap::linear(0.3).unwrap();
        assert!((m.eval(2.0) - 0.6).abs() < 1e-15);
        assert!((m.inverse(0.6) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn capped_map_matches_min_formula() {
        let m = ScaleMap::capped_linear(0.7, 0.3).unwrap();
        for i in 0..200 {
            let r = i as f64 * 0.02;
            let expect = r.min(0.7 + 0.3 * r);
            assert!((m.eval(r) - expect).abs() < 1e-12, "r = {r}");
            assert!((m.inverse(m.eval(r)) - r).abs() < 1e-9, "r = {r}");
        }
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(ScaleMap::from_knots(vec![(0.0, 0.0), (1.0, 0.0)], 1.0).is_err());
        assert!(ScaleMap::from_knots(vec![(0.5, 0.5)], 1.0).is_err());
        assert!(ScaleMap::linear(0.0).is_err());
    }
}
