//! Decomposition for generic arguments `|z_1| > 1`, `|z_i| >= 1`: every
//! elementary fraction is a brick, and the brick decompositions are summed.

use std::collections::BTreeMap;

use crate::brick::{BrickEngine, Decomposition, LaTerm};
use crate::error::Result;
use crate::exact::LaurentPoly;
use crate::negexp::{eliminate_nonpositive, RationalZCoeff};
use crate::pfd::{decompose_rational, elementary_series};
use crate::series::{normalize_shifts, MultSeries};

/// Polylogarithm decomposition of a series with generic arguments.
pub fn decompose_generic_z(s: &MultSeries) -> Result<Decomposition> {
    let norm = normalize_shifts(s);
    let pfd = decompose_rational(&norm)?;
    let nv = s.args[0].nvars();
    let mut engine = BrickEngine::new();
    let mut out = Decomposition::zero(nv);
    for (q, c) in &pfd.terms {
        let brick = elementary_series(q, &norm.args).to_brick();
        let d = engine.decompose(&brick);
        out.add_scaled(&d, &LaurentPoly::constant(nv, c.clone()));
    }
    Ok(out)
}

/// Rewrite every term with a non-positive exponent so that only exponents
/// `>= 1` remain, at the price of rational coefficients in the arguments.
/// Requires all polylogarithm arguments to have modulus below one.
pub fn eliminate_decomposition(d: &Decomposition) -> Result<Vec<(RationalZCoeff, LaTerm)>> {
    let nv = d.nvars();
    let mut acc: BTreeMap<LaTerm, RationalZCoeff> = BTreeMap::new();
    for (t, c) in d.terms() {
        let mut coeff = RationalZCoeff::zero(nv);
        for (m, v) in c.terms() {
            let mut one = RationalZCoeff::zero(nv);
            one.add(&RationalZCoeff::from_poly(
                &crate::exact::UPoly::constant(v.clone()),
                m,
                0,
            )?);
            coeff.add(&one);
        }
        let pieces = if t.depth() > 0 && t.s.iter().any(|&x| x <= 0) {
            eliminate_nonpositive(t)?
        } else {
            vec![(RationalZCoeff::one(nv), t.clone())]
        };
        for (pc, pt) in pieces {
            acc.entry(pt).or_insert_with(|| RationalZCoeff::zero(nv)).add(&coeff.mul(&pc));
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (c, t)).collect())
}
