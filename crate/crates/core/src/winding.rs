//! Exact winding-number oracles on model spaces with a circular chart.
//!
//! Every point carries an arc-length position on a reference circle of
//! circumference c (a [`WindingContext`]). The winding number of an
//! oriented triple is the number of times its filling traverses the
//! circle, computed exactly from signed shorter-arc displacements. It
//! extends linearly to 2-chains with integer coefficients.

use crate::error::{Error, Result};
use crate::metric::WindingContext;

/// Three point ids with orientation; cyclic order is significant, values
/// may coincide geometrically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedTriple(pub [u32; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindingResult {
    pub k: i64,
    /// The displacement sum rounded to an exact integer within 1e-6 of a
    /// multiple of the circumference. Anything else would indicate a
    /// numerically degenerate chart.
    pub well_defined: bool,
}

/// Signed displacement from the angle of `i` to the angle of `j` along
/// the shorter arc, in (-c/2, c/2). An exact half-circumference gap has
/// two geodesics and no preferred sign.
fn signed_arc(ctx: &WindingContext, i: u32, j: u32) -> Result<f64> {
    let c = ctx.circumference;
    let d = ctx.angles[j as usize] - ctx.angles[i as usize];
    let wrapped = d - c * (d / c).round();
    if wrapped.abs() == c / 2.0 {
        return Err(Error::IllDefined { a: i as usize, b: j as usize });
    }
    Ok(wrapped)
}

/// Winding number of an oriented triple: the filling of the three points
/// by shorter-arc geodesics traverses the reference circle k times.
pub fn winding_triple(ctx: &WindingContext, t: &OrientedTriple) -> Result<WindingResult> {
    let [x1, x2, x3] = t.0;
    let total = signed_arc(ctx, x1, x2)? + signed_arc(ctx, x2, x3)? + signed_arc(ctx, x3, x1)?;
    let turns = total / ctx.circumference;
    let k = turns.round() as i64;
    Ok(WindingResult { k, well_defined: (turns - k as f64).abs() < 1e-6 })
}

/// True iff the triple's filling is homotopic to the reference circle
/// traversed once in either direction.
pub fn is_circumventing(ctx: &WindingContext, t: &OrientedTriple) -> Result<bool> {
    Ok(winding_triple(ctx, t)?.k.abs() == 1)
}

/// Winding number of an integer 2-chain restricted to a region: the sum
/// of coefficient-weighted triple windings over the simplices whose
/// vertices all satisfy `membership`.
pub fn winding_chain<F: Fn(u32) -> bool>(
    ctx: &WindingContext,
    chain: &[(OrientedTriple, i64)],
    membership: F,
) -> Result<i64> {
    let mut total = 0i64;
    for (triple, coeff) in chain {
        if triple.0.iter().all(|&v| membership(v)) {
            total += coeff * winding_triple(ctx, triple)?.k;
        }
    }
    Ok(total)
}

/// The oriented boundary of the quadruple <x1,x2,x3,x4> as four oriented
/// triples with unit coefficients:
/// <x2,x3,x4>, <x3,x1,x4>, <x1,x2,x4>, <x2,x1,x3>.
pub fn quadruple_faces(quad: [u32; 4]) -> [OrientedTriple; 4] {
    let [x1, x2, x3, x4] = quad;
    [
        OrientedTriple([x2, x3, x4]),
        OrientedTriple([x3, x1, x4]),
        OrientedTriple([x1, x2, x4]),
        OrientedTriple([x2, x1, x3]),
    ]
}

/// Boundary of an oriented quadruple as a signed triple chain, using the
/// alternating-sign convention on ascending faces. Summing this into a
/// 2-chain realizes c + d(sigma).
pub fn boundary_chain(quad: [u32; 4]) -> [(OrientedTriple, i64); 4] {
    let faces = quadruple_faces(quad);
    // All four orientations above already absorb the alternating signs.
    [
        (faces[0], 1),
        (faces[1], 1),
        (faces[2], 1),
        (faces[3], 1),
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct QuadrupleReport {
    pub face_windings: [i64; 4],
    pub sum: i64,
    pub circumventing_count: usize,
}

/// Windings of the four induced oriented triples of a quadruple. For a
/// quadruple within the model's diameter bounds the windings sum to zero
/// and the number of circumventing faces is 0, 2 or 4.
pub fn check_quadruple(ctx: &WindingContext, quad: [u32; 4]) -> Result<QuadrupleReport> {
    let faces = quadruple_faces(quad);
    let mut face_windings = [0i64; 4];
    for (slot, face) in face_windings.iter_mut().zip(&faces) {
        *slot = winding_triple(ctx, face)?.k;
    }
    let sum = face_windings.iter().sum();
    let circumventing_count = face_windings.iter().filter(|k| k.abs() == 1).count();
    Ok(QuadrupleReport { face_windings, sum, circumventing_count })
}
