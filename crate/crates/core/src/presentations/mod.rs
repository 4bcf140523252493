//! Relator catalogs, relation checks on matrices, bounded-degree quotient
//! computations and the witness rings used to probe minimality.

mod chains;
mod magnus;
mod noidentity;
mod quotient;
mod saidwants;
mod witness;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::words::{NcPoly, Word};

pub use chains::{grigdream_without, neg_r2, redundant_s_chain, said45_chain, shifted_pair_sum, ChainStep};
pub use magnus::{magnus_directness, MagnusElem, MagnusReport, MagnusRing};
pub use noidentity::{noidentity_check, noidentity_x, printed_relators as noidentity_printed_relators, NoIdentityReport};
pub use quotient::{
    bounded_quotient_rank, bounded_quotient_rank_probe, ideal_membership_bounded, CertificateTerm,
    Membership, MembershipCertificate, QuotientRank, MAX_DEGREE,
};
pub use saidwants::{
    check_h_conditions, central_idempotent_check, normal_form_spanning_set, rewrite_normal_form,
    HCheck, IdempotentReport, ZERO_SUM_CONVENTION,
};
pub use witness::{witness_rank_growth, Witness, WitnessAudit, WitnessReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Grigdream,
    Dnepr,
    Said45,
    Troika,
    Dvoika,
    Noidentity,
    Modular(i64),
    SaidwantsFull,
    SaidwantsH(BTreeSet<usize>),
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Grigdream => write!(f, "grigdream"),
            Variant::Dnepr => write!(f, "dnepr"),
            Variant::Said45 => write!(f, "said45"),
            Variant::Troika => write!(f, "troika"),
            Variant::Dvoika => write!(f, "dvoika"),
            Variant::Noidentity => write!(f, "noidentity"),
            Variant::Modular(m) => write!(f, "modular({m})"),
            Variant::SaidwantsFull => write!(f, "saidwants_full"),
            Variant::SaidwantsH(h) => {
                let parts: Vec<String> = h.iter().map(|v| v.to_string()).collect();
                write!(f, "saidwants_h({})", parts.join(","))
            }
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let arg = |prefix: &str| -> Option<&str> {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(m) = arg("modular") {
            let m = m.trim().parse().map_err(|_| Error::Parse(format!("bad shift in {s}")))?;
            return Ok(Variant::Modular(m));
        }
        if let Some(h) = arg("saidwants_h") {
            let mut set = BTreeSet::new();
            for part in h.split(',').filter(|p| !p.trim().is_empty()) {
                set.insert(part.trim().parse().map_err(|_| Error::Parse(format!("bad H element in {s}")))?);
            }
            return Ok(Variant::SaidwantsH(set));
        }
        Ok(match s {
            "grigdream" => Variant::Grigdream,
            "dnepr" => Variant::Dnepr,
            "said45" => Variant::Said45,
            "troika" => Variant::Troika,
            "dvoika" => Variant::Dvoika,
            "noidentity" => Variant::Noidentity,
            "saidwants_full" => Variant::SaidwantsFull,
            _ => return Err(Error::Parse(format!("unknown presentation variant {s}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationSpec {
    pub n: usize,
    pub variant: Variant,
    pub relators: Vec<NcPoly>,
    pub unital: bool,
}

impl PresentationSpec {
    /// Custom presentation, e.g. for ideal sums such as `I_n + I_n(1)`.
    pub fn custom(n: usize, variant: Variant, relators: Vec<NcPoly>, unital: bool) -> Self {
        PresentationSpec { n, variant, relators, unital }
    }

    pub fn max_degree(&self) -> usize {
        self.relators.iter().map(NcPoly::degree).max().unwrap_or(0)
    }
}

/// `x^n - 1`
pub fn r1(n: usize) -> NcPoly {
    NcPoly::from_word(Word::x_pow(n), 1).sub(&NcPoly::one())
}

/// `sum_{i<n} x^{n-i} y x^i - 1`
pub fn r2(n: usize) -> NcPoly {
    r2_body(n).sub(&NcPoly::one())
}

fn r2_body(n: usize) -> NcPoly {
    let mut p = NcPoly::zero(true);
    for i in 0..n {
        p.add_term(Word::x_pow(n - i).concat(&Word::y()).concat(&Word::x_pow(i)), BigInt::from(1));
    }
    p
}

/// `s_0 = y^2 - y`, `s_j = y x^j y`.
pub fn s(j: usize) -> NcPoly {
    if j == 0 {
        NcPoly::from_word(Word::y().concat(&Word::y()), 1).sub(&NcPoly::y())
    } else {
        NcPoly::from_word(Word::y().concat(&Word::x_pow(j)).concat(&Word::y()), 1)
    }
}

pub fn standard_relators(n: usize, variant: Variant) -> Result<PresentationSpec> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let unsupported = |why: &str| Err(Error::UnsupportedVariant(format!("{variant} with n = {n}: {why}")));
    let relators: Vec<NcPoly> = match &variant {
        Variant::Grigdream => grigdream(n),
        Variant::Dvoika => {
            if n != 2 {
                return unsupported("requires n = 2");
            }
            grigdream(2)
        }
        Variant::Troika => {
            if n != 3 {
                return unsupported("requires n = 3");
            }
            vec![r1(3), r2(3), s(1)]
        }
        Variant::Dnepr => {
            let mut v = vec![r1(n), r2(n), s(0)];
            v.extend((1..=n / 2).map(s));
            v
        }
        Variant::Said45 => {
            if n != 4 && n != 5 {
                return unsupported("requires n in {4, 5}");
            }
            vec![r1(n), r2(n), s(0), s(1)]
        }
        Variant::Noidentity => noidentity::relators(n),
        Variant::Modular(m) => {
            let fy = NcPoly::x().scale(&BigInt::from(*m)).add(&NcPoly::y());
            grigdream(n).iter().map(|r| r.substitute(&NcPoly::x(), &fy)).collect()
        }
        Variant::SaidwantsFull => {
            let mut v = vec![r1(n)];
            v.extend((0..n).map(s));
            v
        }
        Variant::SaidwantsH(h) => {
            saidwants::validate_h(n, h)?;
            let mut v = vec![r1(n), r2(n)];
            v.extend((1..n).filter(|j| !h.contains(j)).map(s));
            v
        }
    };
    let unital = variant != Variant::Noidentity;
    Ok(PresentationSpec { n, variant, relators, unital })
}

fn grigdream(n: usize) -> Vec<NcPoly> {
    let mut v = vec![r1(n), r2(n)];
    v.extend((1..n).map(s));
    v
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub relator: NcPoly,
    #[serde(with = "crate::json::matrix")]
    pub value: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

pub fn check_relations(a: &IntMatrix, b: &IntMatrix, spec: &PresentationSpec) -> Result<RelationCheck> {
    let mut violations = Vec::new();
    for (index, r) in spec.relators.iter().enumerate() {
        let value = r.evaluate(a, b)?;
        if !value.is_zero() {
            violations.push(Violation { index, relator: r.clone(), value });
        }
    }
    Ok(RelationCheck { pass: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NcPoly {
        s.parse().unwrap()
    }

    #[test]
    fn dvoika_relators() {
        let spec = standard_relators(2, Variant::Dvoika).unwrap();
        assert_eq!(spec.relators, vec![p("x^2 - 1"), p("x^2*y + x*y*x - 1"), p("y*x*y")]);
    }

    #[test]
    fn dnepr_three() {
        let spec = standard_relators(3, Variant::Dnepr).unwrap();
        assert_eq!(spec.relators, vec![r1(3), r2(3), s(0), s(1)]);
    }

    #[test]
    fn said45_rejects_six() {
        assert!(matches!(standard_relators(6, Variant::Said45), Err(Error::UnsupportedVariant(_))));
    }

    #[test]
    fn grigdream_holds_at_xy() {
        for n in 2..=8 {
            let spec = standard_relators(n, Variant::Grigdream).unwrap();
            let chk = check_relations(&IntMatrix::shift(n), &IntMatrix::unit(n, 1, 1), &spec).unwrap();
            assert!(chk.pass, "n = {n}");
        }
    }

    #[test]
    fn swapped_pair_violates() {
        let spec = standard_relators(2, Variant::Grigdream).unwrap();
        let chk = check_relations(&IntMatrix::unit(2, 1, 1), &IntMatrix::shift(2), &spec).unwrap();
        assert!(!chk.pass);
    }

    #[test]
    fn variant_round_trip() {
        for v in ["grigdream", "modular(-2)", "saidwants_h(1,4)", "noidentity"] {
            assert_eq!(v.parse::<Variant>().unwrap().to_string(), v);
        }
    }
}
