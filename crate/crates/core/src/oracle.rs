//! Closed-form predictions: two- and four-particle expectations, n-context
//! scalar parts, torsion, and the CHSH string and its geometric bound.
//!
//! The quantum-mechanical predictions and the model's predictions share one
//! implementation here.

use alloc::vec::Vec;

use thiserror::Error;

use crate::algebra::{Multivector, Orientation};
use crate::conformal::Vec3;
use crate::spin::{detector_element, DirectionPair};

/// Errors from oracle evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    /// No closed form exists for this many contexts.
    #[error("no closed form for {0} contexts (supported: 2, 3, 4)")]
    ArityUnsupported(usize),
    /// Fewer than two contexts.
    #[error("need at least two contexts, got {0}")]
    TooFewContexts(usize),
}

/// `-cos θ`.
pub fn epr_expectation(theta: f64) -> f64 {
    -libm::cos(theta)
}

/// `cos θa cos θb cos θc cos θd - sin θa sin θb sin θc sin θd cos(φa + φb - φc - φd)`.
pub fn ghz_expectation(thetas: [f64; 4], phis: [f64; 4]) -> f64 {
    let [ta, tb, tc, td] = thetas;
    let [pa, pb, pc, pd] = phis;
    let cos = libm::cos;
    let sin = libm::sin;
    cos(ta) * cos(tb) * cos(tc) * cos(td) - sin(ta) * sin(tb) * sin(tc) * sin(td) * cos(pa + pb - pc - pd)
}

/// Internal vectors `(n_r, n_d)` of one context.
pub type Context = (Vec3, Vec3);

fn contexts(pairs: &[DirectionPair]) -> Vec<Context> {
    pairs.iter().map(|p| (p.n_r(), p.n_d())).collect()
}

/// Scalar part of `D_1 D_2 ... D_n` at `λ = +1` from the closed forms.
///
/// The four-context form carries `w_ab w_cd` with `w_ab = a_r·b_d + a_d·b_r`,
/// the top (`ζ7`) coefficient of `D_a D_b`. It is zero when the cross dots
/// cancel pairwise, as they do for planar and role-mapped pairs, and the
/// remaining terms are the usual dot-and-cross expansion.
pub fn closed_form_raw(ctx: &[Context]) -> Result<f64, OracleError> {
    match *ctx {
        [(ar, ad), (br, bd)] => Ok(-(ar.dot(br) + ad.dot(bd))),
        [(ar, ad), (br, bd), (cr, cd)] => Ok(ar.dot(br.cross(cr) + bd.cross(cd)) + ad.dot(br.cross(cd) + bd.cross(cr))),
        [(ar, ad), (br, bd), (cr, cd), (dr, dd)] => {
            let (abr, abd, cdr, cdd) = (ar.dot(br), ad.dot(bd), cr.dot(dr), cd.dot(dd));
            let x1 = ar.cross(br) + ad.cross(bd);
            let y1 = cr.cross(dr) + cd.cross(dd);
            let x2 = ar.cross(bd) + ad.cross(br);
            let y2 = cr.cross(dd) + cd.cross(dr);
            let (w1, w2) = (ar.dot(bd) + ad.dot(br), cr.dot(dd) + cd.dot(dr));
            Ok(abr * cdr + abd * cdr + abr * cdd + abd * cdd - x1.dot(y1) - x2.dot(y2) + w1 * w2)
        }
        _ if ctx.len() < 2 => Err(OracleError::TooFewContexts(ctx.len())),
        _ => Err(OracleError::ArityUnsupported(ctx.len())),
    }
}

/// Scalar part of `N_1 ... N_n` by direct multiplication in the `λ` basis.
pub fn direct_scalar_raw(ctx: &[Context], orientation: Orientation) -> f64 {
    ctx.iter()
        .map(|&(r, d)| detector_element(r, d).with_orientation(orientation))
        .fold(Multivector::one(orientation), |acc, n| acc * n)
        .scalar_part()
}

/// Scalar part of `N_1 ... N_n` in the given order.
///
/// Uses the closed forms for `n ≤ 4` (times `λ^n`, since `N = λD`) and the
/// direct product otherwise.
pub fn nfold_scalar_part(pairs: &[DirectionPair], orientation: Orientation) -> Result<f64, OracleError> {
    if pairs.len() < 2 {
        return Err(OracleError::TooFewContexts(pairs.len()));
    }
    let ctx = contexts(pairs);
    match closed_form_raw(&ctx) {
        Ok(s) => Ok(orientation.pow(ctx.len()).sign() * s),
        Err(OracleError::ArityUnsupported(_)) => Ok(direct_scalar_raw(&ctx, orientation)),
        Err(e) => Err(e),
    }
}

/// Closed form only; errors beyond four contexts.
pub fn nfold_closed_form(pairs: &[DirectionPair], orientation: Orientation) -> Result<f64, OracleError> {
    let ctx = contexts(pairs);
    Ok(orientation.pow(ctx.len()).sign() * closed_form_raw(&ctx)?)
}

/// The four-context value after dropping every cross term `x_r · y_d` and
/// identifying `x_r · y_r` with `x_d · y_d`:
///
/// `2(ar·br)(cr·dr) + 2(ad·bd)(cd·dd) - 2(ar·cr)(br·dr)
///  + 2(br·cr)(ar·dr) + 2(bd·cd)(ad·dd) - 2(ad·cd)(bd·dd)`.
///
/// With role-mapped pairs this reproduces [`ghz_expectation`]. It is not the
/// scalar part of the four-fold product.
pub fn ghz_reduced_polynomial(pairs: &[DirectionPair; 4]) -> f64 {
    let [(ar, ad), (br, bd), (cr, cd), (dr, dd)] = [
        (pairs[0].n_r(), pairs[0].n_d()),
        (pairs[1].n_r(), pairs[1].n_d()),
        (pairs[2].n_r(), pairs[2].n_d()),
        (pairs[3].n_r(), pairs[3].n_d()),
    ];
    2.0 * (ar.dot(br) * cr.dot(dr) + ad.dot(bd) * cd.dot(dd) - ar.dot(cr) * br.dot(dr)
        + br.dot(cr) * ar.dot(dr)
        + bd.dot(cd) * ad.dot(dd)
        - ad.dot(cd) * bd.dot(dd))
}

/// `½[N_1, N_2]` evaluated with the algebra's product.
pub fn torsion(p1: &DirectionPair, p2: &DirectionPair, orientation: Orientation) -> Multivector {
    let n1 = detector_element(p1.n_r(), p1.n_d()).with_orientation(orientation);
    let n2 = detector_element(p2.n_r(), p2.n_d()).with_orientation(orientation);
    match n1.commutator(&n2) {
        Ok(t) => t,
        Err(_) => unreachable!("both spin states share one orientation"),
    }
}

/// `-N(x_r×x'_r + x_d×x'_d, x_r×x'_d + x_d×x'_r, 0, λ)`.
///
/// Agrees with [`torsion`] for `λ = +1` and has the opposite sign for
/// `λ = -1`, where the commutator of `λD_1` and `λD_2` is unchanged but
/// `-N` flips with `λ`.
pub fn torsion_closed_form(p1: &DirectionPair, p2: &DirectionPair, orientation: Orientation) -> Multivector {
    let (xr, xd, yr, yd) = (p1.n_r(), p1.n_d(), p2.n_r(), p2.n_d());
    let r = xr.cross(yr) + xd.cross(yd);
    let d = xr.cross(yd) + xd.cross(yr);
    -detector_element(r, d).with_orientation(orientation)
}

/// `2 √(1 - (x×x')·(y'×y))`.
pub fn chsh_bound(x: Vec3, xp: Vec3, y: Vec3, yp: Vec3) -> f64 {
    let t = 1.0 - x.cross(xp).dot(yp.cross(y));
    2.0 * libm::sqrt(t.max(0.0))
}

/// `E1 + E2 + E3 - E4` for `E(x,y), E(x,y'), E(x',y), E(x',y')`.
pub fn chsh_value(e: [f64; 4]) -> f64 {
    e[0] + e[1] + e[2] - e[3]
}

/// CHSH string of the two-particle prediction at planar angles
/// `[x, x', y, y']` in radians.
pub fn chsh_analytic(angles: [f64; 4]) -> f64 {
    let [x, xp, y, yp] = angles;
    chsh_value([epr_expectation(y - x), epr_expectation(yp - x), epr_expectation(y - xp), epr_expectation(yp - xp)])
}

/// `|S(perturbed) - S| / δ` where context `index` has `n_r` moved by `δ·u`.
pub fn context_sensitivity(ctx: &[Context], index: usize, u: Vec3, delta: f64) -> Result<f64, OracleError> {
    let base = closed_form_raw(ctx)?;
    let mut moved: Vec<Context> = ctx.to_vec();
    moved[index].0 = moved[index].0 + u.scale(delta);
    Ok((closed_form_raw(&moved)? - base).abs() / delta)
}
