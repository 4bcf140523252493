//! Degree-bounded linear algebra in the free ring on `x`, `y`.
//!
//! Words of length at most `L` are indexed in degree-lexicographic order
//! (`x < y`). The relation lattice is spanned by all `u * r * v` of total
//! degree at most `L`, kept in an integer echelon form whose pivots are the
//! largest words of each row.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::PresentationSpec;
use crate::error::{Error, Result};
use crate::linalg::{snf, IntMatrix};
use crate::words::{Letter, NcPoly, Word};

/// Largest accepted degree bound (word basis of `2^16 - 1` columns).
pub const MAX_DEGREE: usize = 15;

type Vec128 = Vec<(u32, i128)>;

fn overflow() -> Error {
    Error::ResourceCap("coefficient overflow in relation lattice".into())
}

fn word_index(w: &Word) -> u32 {
    let mut bits = 0u32;
    for l in w.letters() {
        bits = (bits << 1) | (*l == Letter::Y) as u32;
    }
    (1u32 << w.len()) - 1 + bits
}

fn index_word(i: u32) -> Word {
    let len = 31 - (i + 1).leading_zeros();
    let bits = i + 1 - (1 << len);
    Word::new((0..len).rev().map(|k| if bits >> k & 1 == 1 { Letter::Y } else { Letter::X }).collect())
}

fn columns(l: usize) -> u32 {
    (1u32 << (l + 1)) - 1
}

fn to_vec(p: &NcPoly) -> Result<Vec128> {
    let mut v: Vec128 = Vec::new();
    for (w, c) in p.terms() {
        v.push((word_index(w), c.to_i128().ok_or_else(overflow)?));
    }
    v.sort_unstable_by_key(|e| e.0);
    Ok(v)
}

/// `s * a + t * b` for sorted sparse vectors.
fn combine(s: i128, a: &Vec128, t: i128, b: &Vec128) -> Result<Vec128> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mul = |c: i128, v: i128| c.checked_mul(v).ok_or_else(overflow);
    while i < a.len() || j < b.len() {
        let (col, val) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            i += 1;
            (a[i - 1].0, mul(s, a[i - 1].1)?)
        } else if i >= a.len() || b[j].0 < a[i].0 {
            j += 1;
            (b[j - 1].0, mul(t, b[j - 1].1)?)
        } else {
            i += 1;
            j += 1;
            let v = mul(s, a[i - 1].1)?.checked_add(mul(t, b[j - 1].1)?).ok_or_else(overflow)?;
            (a[i - 1].0, v)
        };
        if val != 0 {
            out.push((col, val));
        }
    }
    Ok(out)
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

#[derive(Clone, Debug)]
struct Row {
    ent: Vec128,
    prov: Vec128,
}

impl Row {
    fn lead(&self) -> Option<(u32, i128)> {
        self.ent.last().copied()
    }

    fn combine(s: i128, a: &Row, t: i128, b: &Row, track: bool) -> Result<Row> {
        let prov = if track { combine(s, &a.prov, t, &b.prov)? } else { Vec::new() };
        Ok(Row { ent: combine(s, &a.ent, t, &b.ent)?, prov })
    }
}

#[derive(Clone, Copy, Debug)]
struct Generator {
    u: u32,
    relator: usize,
    v: u32,
}

struct Echelon {
    rows: Vec<Row>,
    pivot: HashMap<u32, usize>,
    track: bool,
}

impl Echelon {
    fn new(track: bool) -> Self {
        Echelon { rows: Vec::new(), pivot: HashMap::new(), track }
    }

    fn insert(&mut self, mut row: Row) -> Result<()> {
        while let Some((col, val)) = row.lead() {
            let Some(&pi) = self.pivot.get(&col) else {
                self.pivot.insert(col, self.rows.len());
                self.rows.push(row);
                return Ok(());
            };
            let p = &self.rows[pi];
            let pv = p.lead().expect("pivot rows are nonzero").1;
            if val % pv == 0 {
                row = Row::combine(1, &row, -(val / pv), p, self.track)?;
            } else {
                let (g, s, t) = egcd(pv, val);
                let merged = Row::combine(s, p, t, &row, self.track)?;
                row = Row::combine(val / g, p, -(pv / g), &row, self.track)?;
                self.rows[pi] = merged;
            }
        }
        Ok(())
    }

    /// Reduces `v` to zero if it lies in the lattice, returning the row
    /// multipliers used; `None` when it does not.
    fn express(&self, mut v: Vec128) -> Result<Option<Vec<(usize, i128)>>> {
        let mut used = Vec::new();
        while let Some(&(col, val)) = v.last() {
            let Some(&pi) = self.pivot.get(&col) else { return Ok(None) };
            let p = &self.rows[pi];
            let pv = p.lead().expect("pivot rows are nonzero").1;
            if val % pv != 0 {
                return Ok(None);
            }
            let q = val / pv;
            v = combine(1, &v, -q, &p.ent)?;
            used.push((pi, q));
        }
        Ok(Some(used))
    }
}

struct Built {
    echelon: Echelon,
    generators: Vec<Generator>,
}

/// All `u * r * v` with total degree at most `l`, inserted by increasing degree.
fn build(spec: &PresentationSpec, l: usize, track: bool) -> Result<Built> {
    if l > MAX_DEGREE {
        return Err(Error::ResourceCap(format!("degree bound {l} exceeds {MAX_DEGREE}")));
    }
    let need = spec.max_degree();
    if l < need {
        return Err(Error::DegreeTooSmall { bound: l, required: need });
    }
    let rels: Vec<Vec<(usize, u32, i128)>> = spec
        .relators
        .iter()
        .map(|r| {
            r.terms()
                .map(|(w, c)| {
                    let bits = word_index(w) + 1 - (1 << w.len());
                    Ok((w.len(), bits, c.to_i128().ok_or_else(overflow)?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut echelon = Echelon::new(track);
    let mut generators = Vec::new();
    for extra in 0..=l {
        for (ri, terms) in rels.iter().enumerate() {
            let d = spec.relators[ri].degree();
            if terms.is_empty() || d + extra > l {
                continue;
            }
            for ul in 0..=extra {
                let vl = extra - ul;
                for ub in 0..(1u32 << ul) {
                    for vb in 0..(1u32 << vl) {
                        let mut ent: Vec128 = terms
                            .iter()
                            .map(|&(wl, wb, c)| {
                                let len = ul + wl + vl;
                                let bits = (ub << (wl + vl)) | (wb << vl) | vb;
                                ((1u32 << len) - 1 + bits, c)
                            })
                            .collect();
                        ent.sort_unstable_by_key(|e| e.0);
                        let prov = if track {
                            generators.push(Generator { u: (1u32 << ul) - 1 + ub, relator: ri, v: (1u32 << vl) - 1 + vb });
                            vec![(generators.len() as u32 - 1, 1)]
                        } else {
                            Vec::new()
                        };
                        echelon.insert(Row { ent, prov })?;
                    }
                }
            }
        }
    }
    Ok(Built { echelon, generators })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientRank {
    pub degree_bound: usize,
    pub probe_degree: usize,
    pub basis_size: usize,
    pub relation_rank: usize,
    pub free_rank: usize,
    #[serde(with = "crate::json::big_vec")]
    pub torsion: Vec<BigInt>,
}

/// Quotient rank with the default probe degree `L - (max relator degree)`.
pub fn bounded_quotient_rank(spec: &PresentationSpec, l: usize) -> Result<QuotientRank> {
    let probe = l.saturating_sub(spec.max_degree()).max(1).min(l);
    bounded_quotient_rank_probe(spec, l, probe)
}

/// Rank and torsion of the image of the words of length at most `probe` in
/// the span of words of length at most `l` modulo the relations of degree at
/// most `l`.
pub fn bounded_quotient_rank_probe(spec: &PresentationSpec, l: usize, probe: usize) -> Result<QuotientRank> {
    if probe > l {
        return Err(Error::InvalidParameter(format!("probe degree {probe} exceeds bound {l}")));
    }
    let built = build(spec, l, false)?;
    let ech = &built.echelon;
    let limit = columns(probe);
    let first = if spec.unital { 0 } else { 1 };
    let basis_size = (limit - first) as usize;

    let mut unit: HashMap<u32, &Row> = HashMap::new();
    let mut other: Vec<&Row> = Vec::new();
    let mut relation_rank = 0;
    for r in &ech.rows {
        let (col, val) = r.lead().expect("pivot rows are nonzero");
        if col >= limit {
            continue;
        }
        relation_rank += 1;
        if val.abs() == 1 {
            unit.insert(col, r);
        } else {
            other.push(r);
        }
    }
    // reduce the non-unit rows onto the columns without unit pivots
    let mut reduced: Vec<BTreeMap<u32, i128>> = Vec::new();
    for r in other {
        let mut m: BTreeMap<u32, i128> = r.ent.iter().copied().collect();
        let mut cursor = u32::MAX;
        while let Some((&col, &val)) = m.range(..cursor).next_back() {
            cursor = col;
            let Some(p) = unit.get(&col) else { continue };
            let q = val * p.lead().unwrap().1;
            for &(c, v) in &p.ent {
                let e = m.entry(c).or_insert(0);
                *e = e.checked_sub(q.checked_mul(v).ok_or_else(overflow)?).ok_or_else(overflow)?;
                if *e == 0 {
                    m.remove(&c);
                }
            }
        }
        reduced.push(m);
    }
    let mut cols: Vec<u32> = reduced.iter().flat_map(|m| m.keys().copied()).collect();
    cols.sort_unstable();
    cols.dedup();
    let mut torsion = Vec::new();
    if !reduced.is_empty() && !cols.is_empty() {
        let pos: HashMap<u32, usize> = cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let rows: Vec<Vec<BigInt>> = reduced
            .iter()
            .map(|m| {
                let mut row = vec![BigInt::zero(); cols.len()];
                for (c, v) in m {
                    row[pos[c]] = BigInt::from(*v);
                }
                row
            })
            .collect();
        let d = snf(&IntMatrix::from_rows(&rows)?);
        let one = BigInt::from(1);
        torsion = d.into_iter().filter(|v| !v.is_zero() && *v != one).collect();
    }
    Ok(QuotientRank {
        degree_bound: l,
        probe_degree: probe,
        basis_size,
        relation_rank,
        free_rank: basis_size - relation_rank,
        torsion,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateTerm {
    pub left: Word,
    pub relator: usize,
    pub right: Word,
    #[serde(with = "crate::json::big")]
    pub coeff: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipCertificate {
    pub target: NcPoly,
    pub combination: Vec<CertificateTerm>,
    pub degree_bound: usize,
}

impl MembershipCertificate {
    /// Re-expands the combination and compares it with the target.
    pub fn verify(&self, spec: &PresentationSpec) -> bool {
        let mut sum = NcPoly::zero(spec.unital);
        for t in &self.combination {
            let Some(r) = spec.relators.get(t.relator) else { return false };
            sum = sum.add(&r.sandwich(&t.left, &t.right).scale(&t.coeff));
        }
        sum.sub(&self.target).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    Certificate(MembershipCertificate),
    Inconclusive { degree_bound: usize },
}

impl Membership {
    pub fn certificate(&self) -> Option<&MembershipCertificate> {
        match self {
            Membership::Certificate(c) => Some(c),
            Membership::Inconclusive { .. } => None,
        }
    }
}

/// Decides whether `target` is in the span of the relations of degree at
/// most `l`. A negative answer only says nothing was found at this bound.
pub fn ideal_membership_bounded(target: &NcPoly, spec: &PresentationSpec, l: usize) -> Result<Membership> {
    if target.degree() > l {
        return Err(Error::DegreeTooSmall { bound: l, required: target.degree() });
    }
    let built = build(spec, l, true)?;
    let ech = &built.echelon;
    let Some(used) = ech.express(to_vec(target)?)? else {
        return Ok(Membership::Inconclusive { degree_bound: l });
    };
    let mut total: BTreeMap<u32, i128> = BTreeMap::new();
    for (pi, q) in used {
        for &(g, c) in &ech.rows[pi].prov {
            let e = total.entry(g).or_insert(0);
            *e = e.checked_add(q.checked_mul(c).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
    }
    let combination = total
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(g, c)| {
            let gen = built.generators[g as usize];
            CertificateTerm {
                left: index_word(gen.u),
                relator: gen.relator,
                right: index_word(gen.v),
                coeff: BigInt::from(c),
            }
        })
        .collect();
    let cert = MembershipCertificate { target: target.clone(), combination, degree_bound: l };
    if !cert.verify(spec) {
        return Err(Error::Precondition("membership certificate failed re-expansion".into()));
    }
    Ok(Membership::Certificate(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{standard_relators, Variant};

    #[test]
    fn index_round_trip() {
        for i in 0..200u32 {
            assert_eq!(word_index(&index_word(i)), i);
        }
        assert_eq!(word_index(&Word::empty()), 0);
        assert_eq!(word_index(&"y*x".parse().unwrap()), 5);
    }

    #[test]
    fn free_ring_counts_words() {
        let spec = PresentationSpec::custom(2, Variant::Grigdream, vec![], false);
        let q = bounded_quotient_rank(&spec, 2).unwrap();
        assert_eq!(q.free_rank, 6);
        assert!(q.torsion.is_empty());
    }

    #[test]
    fn dvoika_rank_four() {
        let spec = standard_relators(2, Variant::Dvoika).unwrap();
        let q = bounded_quotient_rank(&spec, 6).unwrap();
        assert_eq!(q.free_rank, 4);
        assert!(q.torsion.is_empty());
    }

    #[test]
    fn torsion_is_reported() {
        let two_x: NcPoly = "2*x".parse().unwrap();
        let spec = PresentationSpec::custom(2, Variant::Grigdream, vec![two_x, "y".parse().unwrap()], false);
        let q = bounded_quotient_rank_probe(&spec, 1, 1).unwrap();
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn membership_of_relator_multiple() {
        let spec = standard_relators(2, Variant::Dvoika).unwrap();
        let t = spec.relators[0].sandwich(&Word::y(), &Word::x()).scale(&BigInt::from(3));
        let m = ideal_membership_bounded(&t, &spec, 4).unwrap();
        assert!(m.certificate().unwrap().verify(&spec));
    }

    #[test]
    fn word_not_in_free_ideal() {
        let spec = PresentationSpec::custom(2, Variant::Grigdream, vec!["x*x".parse().unwrap()], false);
        let m = ideal_membership_bounded(&NcPoly::x(), &spec, 4).unwrap();
        assert_eq!(m, Membership::Inconclusive { degree_bound: 4 });
    }
}
