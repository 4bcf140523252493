//! Intermediate identities of the derivations that shorten the presentations.

use num_bigint::BigInt;
use serde::Serialize;

use super::{r1, r2, s, standard_relators, PresentationSpec, Variant};
use crate::error::{Error, Result};
use crate::words::{NcPoly, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub label: &'static str,
    pub poly: NcPoly,
    /// Degree bound at which the regression suite certifies membership;
    /// `None` for steps only checked by evaluation.
    pub membership_bound: Option<usize>,
}

fn step(label: &'static str, poly: NcPoly, membership_bound: Option<usize>) -> ChainStep {
    ChainStep { label, poly, membership_bound }
}

fn xp(k: usize) -> NcPoly {
    NcPoly::from_word(Word::x_pow(k), 1)
}

fn neg(p: &NcPoly) -> NcPoly {
    p.scale(&BigInt::from(-1))
}

/// Steps deriving `s_2`, `s_3` (and for `n = 5` the rest) from
/// `r_1, r_2, s_0, s_1`.
pub fn said45_chain(n: usize) -> Result<Vec<ChainStep>> {
    match n {
        4 => Ok(vec![
            step("s3 + s2 x", s(3).add(&s(2).mul(&xp(1))), Some(10)),
            step("s3", s(3), Some(10)),
            step("s2", s(2), Some(13)),
        ]),
        5 => {
            let (s2, s3, s4) = (s(2), s(3), s(4));
            let s2sq = s2.pow(2);
            Ok(vec![
                step("s4 + s3 x + s2 x^2", s4.add(&s3.mul(&xp(1))).add(&s2.mul(&xp(2))), Some(12)),
                step("s4 + x s3 + x^2 s2", s4.add(&xp(1).mul(&s3)).add(&xp(2).mul(&s2)), Some(12)),
                step("s4 + s2^2", s4.add(&s2sq), Some(12)),
                step("s2^2 - x s3 - x^2 s2", s2sq.sub(&xp(1).mul(&s3)).sub(&xp(2).mul(&s2)), Some(12)),
                step("s3 - x^4 s2^2 + x s2", s3.sub(&xp(4).mul(&s2sq)).add(&xp(1).mul(&s2)), None),
                step("s3 + s2^4", s3.add(&s2.pow(4)), None),
                step("s2^4 + x^4 s2^2 - x s2", s2.pow(4).add(&xp(4).mul(&s2sq)).sub(&xp(1).mul(&s2)), None),
                step("2 s2^5", s2.pow(5).scale(&BigInt::from(2)), None),
            ])
        }
        _ => Err(Error::UnsupportedVariant(format!("said45 chain with n = {n}"))),
    }
}

/// Grigdream relators with the given `s_j` removed.
pub fn grigdream_without(n: usize, removed: &[usize]) -> PresentationSpec {
    let mut rel = vec![r1(n), r2(n)];
    rel.extend((1..n).filter(|j| !removed.contains(j)).map(s));
    PresentationSpec::custom(n, Variant::Grigdream, rel, true)
}

/// Steps showing `s_k` follows from the other grigdream relators, with
/// `x^{-1}` written as `x^{n-1}`.
pub fn redundant_s_chain(n: usize, k: usize) -> Result<Vec<ChainStep>> {
    if k == 0 || k >= n || 2 * k == n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n - 1 and k != n/2, got k = {k}, n = {n}")));
    }
    let y = NcPoly::y();
    let yy = y.mul(&y);
    let yxky = s(k);
    let a = y.sub(&yy);
    Ok(vec![
        step("y - y^2 - y x^k y x^-k", a.sub(&yxky.mul(&xp(n - k))), Some(2 * n)),
        step("y - y^2 - x^-k y x^k y", a.sub(&xp(n - k).mul(&yxky)), Some(2 * n)),
        step("y^2 x^k y", yy.mul(&xp(k)).mul(&y), Some(2 * n + 2)),
        step("y x^k y^2", y.mul(&xp(k)).mul(&yy), Some(2 * n + 2)),
        step("s_k", yxky, Some(2 * n + 2)),
    ])
}

/// `I_n + I_n(1)` as one presentation.
pub fn shifted_pair_sum(n: usize) -> Result<PresentationSpec> {
    let mut rel = standard_relators(n, Variant::Grigdream)?.relators;
    rel.extend(standard_relators(n, Variant::Modular(1))?.relators);
    Ok(PresentationSpec::custom(n, Variant::Grigdream, rel, true))
}

/// `-r_2 = 1 - sum_i x^{n-i} y x^i`
pub fn neg_r2(n: usize) -> NcPoly {
    neg(&r2(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn chains_vanish_at_xy() {
        for n in [4, 5] {
            let (x, y) = (IntMatrix::shift(n), IntMatrix::unit(n, 1, 1));
            for st in said45_chain(n).unwrap() {
                assert!(st.poly.evaluate(&x, &y).unwrap().is_zero(), "{}", st.label);
            }
        }
        let (x, y) = (IntMatrix::shift(3), IntMatrix::unit(3, 1, 1));
        for st in redundant_s_chain(3, 1).unwrap() {
            assert!(st.poly.evaluate(&x, &y).unwrap().is_zero(), "{}", st.label);
        }
    }

    #[test]
    fn half_is_rejected() {
        assert!(redundant_s_chain(4, 2).is_err());
    }
}
