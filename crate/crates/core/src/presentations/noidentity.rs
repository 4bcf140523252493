//! `M_n(Z)` as a quotient of the semigroup ring on `x`, `y`.

use num_bigint::BigInt;
use serde::Serialize;

use super::{check_relations, quotient, standard_relators, PresentationSpec, Variant};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::words::{NcPoly, Word};

/// `x^{n+1} - x`, `y x^n - y`, `-x^n + sum_i x^i y x^{n-i}` and `y x^j y`.
pub(crate) fn relators(n: usize) -> Vec<NcPoly> {
    generating_set(n, false)
}

/// The same family with the third element written as
/// `-x^n + sum_i x^{n-i} y x^i`; it presents a ring of rank `n^2 + n`.
pub fn printed_relators(n: usize) -> Vec<NcPoly> {
    generating_set(n, true)
}

fn generating_set(n: usize, printed: bool) -> Vec<NcPoly> {
    let xp = |k: usize| NcPoly::from_word(Word::x_pow(k), 1);
    let y = Word::y();
    let mut out = vec![
        xp(n + 1).sub(&xp(1)),
        NcPoly::from_word(y.concat(&Word::x_pow(n)), 1).sub(&NcPoly::y()),
    ];
    let mut third = xp(n).scale(&BigInt::from(-1));
    for i in 0..n {
        let (l, r) = if printed { (n - i, i) } else { (i, n - i) };
        third.add_term(Word::x_pow(l).concat(&y).concat(&Word::x_pow(r)), BigInt::from(1));
    }
    out.push(third);
    for j in 1..n {
        out.push(NcPoly::from_word(y.concat(&Word::x_pow(j)).concat(&y), 1));
    }
    out.into_iter().map(|p| p.with_unital(false)).collect()
}

/// `sum_i E_{i,i+1}` with indices mod `n`.
pub fn noidentity_x(n: usize) -> IntMatrix {
    IntMatrix::shift(n).transpose()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoIdentityReport {
    pub n: usize,
    pub relator_count: usize,
    pub relators_vanish: bool,
    pub ranks: Vec<quotient::QuotientRank>,
    pub stabilized_rank: Option<usize>,
    /// Quotient rank at the last bound with the other form of the third element.
    pub printed_form_rank: Option<usize>,
    pub printed_form_vanishes: bool,
}

/// Checks the relators at `(X, E_11)` and computes quotient ranks at the
/// given degree bounds (non-unital).
pub fn noidentity_check(n: usize, bounds: &[usize]) -> Result<NoIdentityReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let spec = standard_relators(n, Variant::Noidentity)?;
    let chk = check_relations(&noidentity_x(n), &IntMatrix::unit(n, 1, 1), &spec)?;
    let mut ranks = Vec::new();
    for &l in bounds {
        ranks.push(quotient::bounded_quotient_rank(&spec, l)?);
    }
    let stabilized_rank = match ranks.as_slice() {
        [.., a, b] if a.free_rank == b.free_rank && a.torsion.is_empty() && b.torsion.is_empty() => Some(b.free_rank),
        _ => None,
    };
    let printed = PresentationSpec::custom(n, Variant::Noidentity, printed_relators(n), false);
    let printed_form_vanishes = check_relations(&noidentity_x(n), &IntMatrix::unit(n, 1, 1), &printed)?.pass;
    let printed_form_rank = match bounds.last() {
        Some(&l) => Some(quotient::bounded_quotient_rank(&printed, l)?.free_rank),
        None => None,
    };
    Ok(NoIdentityReport {
        n,
        relator_count: spec.relators.len(),
        relators_vanish: chk.pass,
        ranks,
        stabilized_rank,
        printed_form_rank,
        printed_form_vanishes,
    })
}
