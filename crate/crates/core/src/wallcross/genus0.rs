use num_rational::BigRational;
use num_traits::Signed;

use crate::ifun::{mu_geq_epsilon, one_minus_q, small_j_from_i, wall_identity, WallIdentity};
use crate::novikov::{CurveClass, NovikovSeries};
use crate::qfun::{QLaurent, QRational};
use crate::{Error, Result};

/// Both sides of the genus-0 comparison up to degree `1/ε`.
#[derive(Clone, Debug)]
pub struct GenusZeroReport {
    pub eps: BigRational,
    /// The shifted input `𝐭 + μ^{≥ε}`.
    pub input: NovikovSeries<QLaurent>,
    /// `1 − q + 𝐭 + Σ_{0 < deg β ≤ 1/ε} Q^β (μ_β + [(1−q)I_β]_-)`.
    pub lhs: NovikovSeries,
    /// `𝐭 + (1 − q) Σ_{deg β ≤ 1/ε} I_β Q^β`.
    pub rhs: NovikovSeries,
    /// The identity at each wall `1/d0 ≥ ε`.
    pub walls: Vec<WallIdentity>,
    pub holds: bool,
}

/// Assemble the genus-0 identity from I-function data: at every wall the
/// degree-`d0` part of `(1 − q)I` is its negative part plus `μ^{d0}`, and
/// summed over the walls this is `J` at `𝐭` against the `I`-side.
pub fn j_transform(t: &QLaurent, i: &NovikovSeries, eps: &BigRational) -> Result<GenusZeroReport> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    if !t.spec().same_as(i.spec()) {
        return Err(Error::SpecMismatch);
    }
    let cone = i.cone();
    let top = eps.recip();
    let zero = CurveClass::zero(cone.rank());
    let mut input = mu_geq_epsilon(i, eps)?;
    input.insert(zero.clone(), t.clone());

    let mut lhs = NovikovSeries::zero(cone, i.spec());
    lhs.insert(zero.clone(), QRational::from(&one_minus_q(i.spec()) + t));
    let mut walls = Vec::new();
    for d0 in cone.attainable_degrees(&top) {
        if d0 > cone.bound {
            continue;
        }
        let w = wall_identity(i, &d0)?;
        for (b, c) in w.rhs.terms() {
            lhs.insert(b.clone(), c.clone());
        }
        walls.push(w);
    }

    let mut rhs = NovikovSeries::zero(cone, i.spec());
    for (b, c) in small_j_from_i(i).terms() {
        if cone.degree(b) <= top {
            rhs.insert(b.clone(), c.clone());
        }
    }
    rhs.insert(zero, QRational::from(t.clone()));
    let holds = walls.iter().all(WallIdentity::holds) && lhs.same(&rhs);
    Ok(GenusZeroReport {
        eps: eps.clone(),
        input,
        lhs,
        rhs,
        walls,
        holds,
    })
}
