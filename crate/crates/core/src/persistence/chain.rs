//! Sparse chains over F_p, indexed by position in a filtration.

use crate::complex::Filtration;
use crate::error::{Error, Result};

use super::field::PrimeField;

/// A sparse chain: (filtration position, nonzero coefficient) pairs,
/// sorted by position.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Chain {
    entries: Vec<(u32, u32)>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain { entries: Vec::new() }
    }

    /// Build from possibly unsorted, possibly repeated terms with signed
    /// coefficients.
    pub fn from_terms(terms: &[(u32, i64)], field: &PrimeField) -> Self {
        let mut entries: Vec<(u32, u32)> = terms
            .iter()
            .map(|&(i, c)| (i, field.from_i64(c)))
            .collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(entries.len());
        for (i, c) in entries {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|&(_, c)| c != 0);
        Chain { entries: out }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Highest filtration position with nonzero coefficient, and that
    /// coefficient.
    pub fn low(&self) -> Option<(u32, u32)> {
        self.entries.last().copied()
    }

    pub fn coeff(&self, index: u32) -> u32 {
        match self.entries.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().copied()
    }

    /// self += factor * other, merging into `scratch` to avoid churn.
    pub fn add_scaled(
        &mut self,
        other: &Chain,
        factor: u32,
        field: &PrimeField,
        scratch: &mut Vec<(u32, u32)>,
    ) {
        scratch.clear();
        scratch.reserve(self.entries.len() + other.entries.len());
        let mut a = self.entries.iter().copied().peekable();
        let mut b = other.entries.iter().copied().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&(ia, ca)), Some(&(ib, cb))) => {
                    if ia < ib {
                        scratch.push((ia, ca));
                        a.next();
                    } else if ib < ia {
                        let c = field.mul(cb, factor);
                        if c != 0 {
                            scratch.push((ib, c));
                        }
                        b.next();
                    } else {
                        let c = field.add(ca, field.mul(cb, factor));
                        if c != 0 {
                            scratch.push((ia, c));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&(ia, ca)), None) => {
                    scratch.push((ia, ca));
                    a.next();
                }
                (None, Some(&(ib, cb))) => {
                    let c = field.mul(cb, factor);
                    if c != 0 {
                        scratch.push((ib, c));
                    }
                    b.next();
                }
                (None, None) => break,
            }
        }
        std::mem::swap(&mut self.entries, scratch);
    }
}

/// Boundary of a single simplex at `pos`: faces with alternating signs by
/// vertex-removal position. Vertices have zero boundary.
pub fn simplex_boundary(pos: usize, filtration: &Filtration, field: &PrimeField) -> Result<Chain> {
    let s = filtration.simplex(pos);
    if s.dim == 0 {
        return Ok(Chain::zero());
    }
    let verts = s.vertices();
    let mut terms: Vec<(u32, i64)> = Vec::with_capacity(verts.len());
    let mut face = [0u32; 4];
    for skip in 0..verts.len() {
        let mut w = 0;
        for (i, &v) in verts.iter().enumerate() {
            if i != skip {
                face[w] = v;
                w += 1;
            }
        }
        let fpos = filtration.index_of(&face[..w]).ok_or_else(|| {
            Error::InvalidParams(format!("face {:?} missing from filtration", &face[..w]))
        })?;
        let sign = if skip % 2 == 0 { 1 } else { -1 };
        terms.push((fpos as u32, sign));
    }
    Ok(Chain::from_terms(&terms, field))
}

/// Field-linear boundary of a chain.
pub fn boundary(chain: &Chain, filtration: &Filtration, field: &PrimeField) -> Result<Chain> {
    let mut acc = Chain::zero();
    let mut scratch = Vec::new();
    for (pos, coeff) in chain.iter() {
        let b = simplex_boundary(pos as usize, filtration, field)?;
        acc.add_scaled(&b, coeff, field, &mut scratch);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_filtration, FiltrationParams};
    use crate::metric::exact_circle_metric;

    fn small_filtration() -> Filtration {
        let angles: Vec<f64> = (0..8).map(|i| i as f64 * 0.75).collect();
        let (m, _) = exact_circle_metric(&angles, 6.0).unwrap();
        let params = FiltrationParams::rips(3, 3.0).unwrap();
        build_filtration(&m, &params).unwrap()
    }

    #[test]
    fn edge_boundary_is_difference_of_vertices() {
        let f = small_filtration();
        let field = PrimeField::new(5).unwrap();
        let edge_pos = (0..f.len()).find(|&i| f.simplex(i).dim == 1).unwrap();
        let b = simplex_boundary(edge_pos, &f, &field).unwrap();
        let verts = f.simplex(edge_pos).vertices().to_vec();
        let u = f.index_of(&[verts[0]]).unwrap() as u32;
        let v = f.index_of(&[verts[1]]).unwrap() as u32;
        // d<u,v> = v - u
        assert_eq!(b.coeff(v), 1);
        assert_eq!(b.coeff(u), field.neg(1));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn boundary_squared_is_zero() {
        use rand::{Rng, SeedableRng};
        let f = small_filtration();
        for p in [2u32, 3, 7] {
            let field = PrimeField::new(p).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
            for _ in 0..25 {
                let terms: Vec<(u32, i64)> = (0..10)
                    .map(|_| {
                        (
                            rng.gen_range(0..f.len()) as u32,
                            rng.gen_range(-4..5i64),
                        )
                    })
                    .collect();
                let chain = Chain::from_terms(&terms, &field);
                let b = boundary(&chain, &f, &field).unwrap();
                let bb = boundary(&b, &f, &field).unwrap();
                assert!(bb.is_zero(), "p={p}");
            }
        }
    }

    #[test]
    fn tetrahedron_face_orientations() {
        // d<x1,x2,x3,x4> = <x2,x3,x4> - <x1,x3,x4> + <x1,x2,x4> - <x1,x2,x3>;
        // the subtracted faces equal <x3,x1,x4> and <x2,x1,x3> after an odd
        // swap, matching the oriented-triple convention.
        let f = small_filtration();
        let field = PrimeField::new(7).unwrap();
        let tet_pos = (0..f.len()).find(|&i| f.simplex(i).dim == 3).unwrap();
        let b = simplex_boundary(tet_pos, &f, &field).unwrap();
        let vs = f.simplex(tet_pos).vertices().to_vec();
        let face = |a: u32, b_: u32, c: u32| f.index_of(&[a, b_, c]).unwrap() as u32;
        assert_eq!(b.coeff(face(vs[1], vs[2], vs[3])), 1);
        assert_eq!(b.coeff(face(vs[0], vs[2], vs[3])), field.neg(1));
        assert_eq!(b.coeff(face(vs[0], vs[1], vs[3])), 1);
        assert_eq!(b.coeff(face(vs[0], vs[1], vs[2])), field.neg(1));
    }

    #[test]
    fn add_scaled_cancels() {
        let field = PrimeField::new(3).unwrap();
        let a = Chain::from_terms(&[(0, 1), (2, 2)], &field);
        let mut b = a.clone();
        let mut scratch = Vec::new();
        b.add_scaled(&a, 2, &field, &mut scratch);
        assert!(b.is_zero());
    }
}
