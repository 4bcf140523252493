//! Regression suite of the worked examples.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::circulant::{build_and_verify_y1, find_circulant_units, higman_rank};
use crate::density::{coprimality_product, fq_fraction, g2z_box_fraction, Mode, EXHAUSTIVE_CAP};
use crate::error::Result;
use crate::g2::{enumerate_solutions, g2_fast_check};
use crate::gentest::{
    assemble_blocks, example_pair, failing_primes, is_generating, is_generating_with, msl_survey, sample_beauty3_b,
    subring_index, ExampleKind, FailingPrimes, Target,
};
use crate::linalg::IntMatrix;
use crate::presentations::*;
use crate::words::{build_t, enumerate_words, flatten, NcPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusCase {
    pub id: &'static str,
    pub module: &'static str,
    pub expected: &'static str,
    pub observed: String,
    pub pass: bool,
}

type Check = fn() -> Result<(String, bool)>;

fn xy(n: usize) -> (IntMatrix, IntMatrix) {
    (IntMatrix::shift(n), IntMatrix::unit(n, 1, 1))
}

fn joined<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

fn verdict(b: bool) -> String {
    if b { "generates" } else { "fails" }.to_string()
}

fn relators_are(n: usize, v: Variant, want: Vec<NcPoly>) -> Result<(String, bool)> {
    let spec = standard_relators(n, v)?;
    Ok((joined(&spec.relators), spec.relators == want))
}

fn member(target: NcPoly, spec: PresentationSpec, l: usize) -> Result<(String, bool)> {
    Ok(match ideal_membership_bounded(&target, &spec, l)? {
        Membership::Certificate(c) => {
            let ok = c.verify(&spec);
            (format!("certificate with {} terms at L = {l}, verified {ok}", c.combination.len()), ok)
        }
        Membership::Inconclusive { .. } => (format!("inconclusive at L = {l}"), false),
    })
}

fn index_of(blocks: &[(IntMatrix, IntMatrix)]) -> Result<String> {
    Ok(subring_index(blocks)?.map_or("infinite".to_string(), |i| i.to_string()))
}

fn witness(w: Witness, cutoffs: &[usize]) -> Result<(String, bool)> {
    let r = witness_rank_growth(w, cutoffs)?;
    let audits = r.audits.iter().all(|a| a.holds);
    let ranks = joined(r.ranks.iter().map(|(l, k)| format!("{l}:{k}")));
    let ok = r.retained_vanish && r.omitted_nonzero && r.strictly_increasing && audits;
    Ok((format!("ranks {ranks}; audits hold {audits}"), ok))
}

const CASES: &[(&str, &str, &str, Check)] = &[
    ("words-m1", "words", "x, y", || {
        let w = joined(enumerate_words(1, false));
        Ok((w.clone(), w == "x, y"))
    }),
    ("words-m2", "words", "x, x^2, x*y, y, y*x, y^2", || {
        let w = joined(enumerate_words(2, false));
        Ok((w.clone(), w == "x, x^2, x*y, y, y*x, y^2"))
    }),
    ("flatten-e11", "words", "1, 0, 0, 0", || {
        let f = joined(flatten(&IntMatrix::unit(2, 1, 1))?);
        Ok((f.clone(), f == "1, 0, 0, 0"))
    }),
    ("flatten-1234", "words", "1, 2, 3, 4", || {
        let f = joined(flatten(&IntMatrix::from_i64(&[[1, 2], [3, 4]]))?);
        Ok((f.clone(), f == "1, 2, 3, 4"))
    }),
    ("r1-at-xy-n3", "words", "zero", || {
        let (x, y) = xy(3);
        let z = r1(3).evaluate(&x, &y)?.is_zero();
        Ok((if z { "zero" } else { "nonzero" }.into(), z))
    }),
    ("t-rows-m3", "words", "14", || {
        let (x, y) = xy(2);
        let r = build_t(3, &x, &y)?.rows();
        Ok((r.to_string(), r == 14))
    }),
    ("beauty1-4-2-3", "gentest", "generates", || {
        let (a, b) = example_pair(&ExampleKind::Beauty1 { n: 4, s: 2, t: 3 })?;
        let same = (a.clone(), b.clone()) == (IntMatrix::shift(4), IntMatrix::unit(4, 2, 3));
        let g = is_generating(&a, &b, &Target::Matrices { n: 4 })?.generates();
        Ok((format!("{}, pair is (X, E23) {same}", verdict(g)), g && same))
    }),
    ("blocks-2-3", "gentest", "generates", || {
        let (a, b) = assemble_blocks(&[xy(2), xy(3)]);
        let g = is_generating(&a, &b, &Target::Product { sizes: vec![2, 3] })?.generates();
        Ok((verdict(g), g))
    }),
    ("failing-primes-xy", "gentest", "none", || {
        let (x, y) = xy(3);
        let fp = failing_primes(&x, &y, 3)?;
        let ok = fp == FailingPrimes::Primes(vec![]);
        Ok((if ok { "none".into() } else { format!("{fp:?}") }, ok))
    }),
    ("beauty3-seeded", "gentest", "generates", || {
        let b = sample_beauty3_b(4, 1)?;
        let (a, b) = example_pair(&ExampleKind::Beauty3 { b })?;
        let g = is_generating(&a, &b, &Target::Matrices { n: 4 })?.generates();
        Ok((verdict(g), g))
    }),
    ("index-x-2x-plus-y", "gentest", "finite, > 1", || {
        let (x, y) = xy(2);
        let i = subring_index(&[xy(2), (x.clone(), &x.scale_int(2) + &y)])?;
        Ok((i.as_ref().map_or("infinite".into(), |v| v.to_string()), i.is_some_and(|v| v > BigInt::one())))
    }),
    ("index-single", "gentest", "1", || {
        let i = index_of(&[xy(2)])?;
        Ok((i.clone(), i == "1"))
    }),
    ("index-x-x-plus-y", "gentest", "1", || {
        let (x, y) = xy(2);
        let i = index_of(&[xy(2), (x.clone(), &x + &y)])?;
        Ok((i.clone(), i == "1"))
    }),
    ("msl-survey-2-3", "gentest", "max msl <= 2", || {
        let s = msl_survey(2, 3, 1000, 1)?;
        Ok((format!("max msl {:?}", s.max_msl), s.max_msl.is_some_and(|m| m <= 2)))
    }),
    ("msl-survey-3-2", "gentest", "observation (bound 4)", || {
        let s = msl_survey(3, 2, 1000, 1)?;
        Ok((format!("max msl {:?}", s.max_msl), true))
    }),
    ("pell-triples", "g2", "all pass", || {
        let mut total = 0;
        let mut ok = true;
        for c in 1..=3 {
            for s in enumerate_solutions(c, 5)? {
                total += 1;
                ok &= g2_fast_check(&s.a1, &s.b1)?.generates;
                ok &= is_generating_with(&s.a1, &s.b1, &Target::Matrices { n: 2 }, true)?.generates();
                ok &= s.value.magnitude().is_one();
            }
        }
        Ok((format!("{total} solutions, all pass {ok}"), ok))
    }),
    ("relators-grigdream-2", "presentations", "x^2 - 1, x^2*y + x*y*x - 1, y*x*y", || {
        relators_are(2, Variant::Grigdream, vec![r1(2), r2(2), s(1)])
    }),
    ("relators-said45-4", "presentations", "r1, r2, s0, s1", || relators_are(4, Variant::Said45, vec![r1(4), r2(4), s(0), s(1)])),
    ("relators-dnepr-3", "presentations", "r1, r2, s0, s1", || relators_are(3, Variant::Dnepr, vec![r1(3), r2(3), s(0), s(1)])),
    ("grigdream-at-xy", "presentations", "pass for n = 2..8", || {
        let mut ok = true;
        for n in 2..=8 {
            let (x, y) = xy(n);
            ok &= check_relations(&x, &y, &standard_relators(n, Variant::Grigdream)?)?.pass;
        }
        Ok((format!("pass {ok}"), ok))
    }),
    ("circulant-y1-dnepr", "presentations", "pass", || {
        let search = find_circulant_units(5, 2)?;
        let u = search.units.iter().find(|u| !u.trivial).expect("n = 5 has a nontrivial unit");
        let rep = build_and_verify_y1(&u.c, &u.d)?;
        let ok = check_relations(&IntMatrix::shift(5), &rep.y1, &standard_relators(5, Variant::Dnepr)?)?.pass;
        Ok((format!("pass {ok}"), ok))
    }),
    ("rank-free-l2", "presentations", "6", || {
        let q = bounded_quotient_rank(&PresentationSpec::custom(2, Variant::Grigdream, vec![], false), 2)?;
        Ok((q.free_rank.to_string(), q.free_rank == 6))
    }),
    ("rank-saidwants-full-2", "presentations", "6", || {
        let q = bounded_quotient_rank(&standard_relators(2, Variant::SaidwantsFull)?, 8)?;
        Ok((format!("{} torsion {:?}", q.free_rank, q.torsion), q.free_rank == 6 && q.torsion.is_empty()))
    }),
    ("said45-4-s2", "presentations", "certificate", || member(s(2), standard_relators(4, Variant::Said45)?, 13)),
    ("troika-s2", "presentations", "certificate", || member(s(2), standard_relators(3, Variant::Troika)?, 8)),
    ("one-in-shifted-sum", "presentations", "certificate", || member(NcPoly::one(), shifted_pair_sum(2)?, 4)),
    ("elim1-2", "presentations", "strictly increasing", || witness(Witness::Elim1 { n: 2 }, &[4, 8, 12])),
    ("elim7-5-1", "presentations", "audits hold", || witness(Witness::Elim7 { n: 5, h: 1 }, &[2, 4, 6])),
    ("elim8-5-1", "presentations", "audits hold", || witness(Witness::Elim8 { n: 5, h: 1 }, &[2, 4, 6])),
    ("magnus-2", "presentations", "R1 meets S0 trivially", || {
        let r = magnus_directness(2)?;
        Ok((format!("{}", r.r1_meets_s0_trivially), r.r1_meets_s0_trivially && r.sum_equals_s0))
    }),
    ("magnus-3", "presentations", "S0 = S1 + S2 direct", || {
        let r = magnus_directness(3)?;
        let ok = r.sum_is_direct && r.sum_equals_s0 && r.ideals_closed;
        Ok((format!("ranks {:?}, direct {}", r.s_ranks, r.sum_is_direct), ok))
    }),
    ("noidentity-2", "presentations", "relators vanish, rank 4", || {
        let r = noidentity_check(2, &[8, 10])?;
        Ok((format!("vanish {}, rank {:?}", r.relators_vanish, r.stabilized_rank), r.relators_vanish && r.stabilized_rank == Some(4)))
    }),
    ("units-4-bound-2", "circulant", "no nontrivial unit", || {
        let u = find_circulant_units(4, 2)?;
        Ok((format!("{} trivial, {} nontrivial", u.trivial_count, u.nontrivial_count), u.nontrivial_count == 0))
    }),
    ("units-5-bound-2", "circulant", "nontrivial unit found", || {
        let u = find_circulant_units(5, 2)?;
        Ok((format!("{} trivial, {} nontrivial", u.trivial_count, u.nontrivial_count), u.nontrivial_count > 0))
    }),
    ("higman-2-5-6", "circulant", "0, 1, 0", || {
        let h = joined([2, 5, 6].map(higman_rank));
        Ok((h.clone(), h == "0, 1, 0"))
    }),
    ("y1-5", "circulant", "trace 1, mixed signs, all pass", || {
        let search = find_circulant_units(5, 2)?;
        let u = search.units.iter().find(|u| !u.trivial).expect("n = 5 has a nontrivial unit");
        let r = build_and_verify_y1(&u.c, &u.d)?;
        let ok = r.trace == BigInt::one() && r.has_positive && r.has_negative && r.all_pass();
        Ok((format!("trace {}, mixed {}, all pass {}", r.trace, r.has_positive && r.has_negative, r.all_pass()), ok))
    }),
    ("fq-trend", "density", "increasing in q", || {
        let mut v = Vec::new();
        for q in [2u64, 3, 5] {
            v.push(fq_fraction(2, q, Mode::Exhaustive { cap: EXHAUSTIVE_CAP })?.estimate);
        }
        v.push(fq_fraction(2, 7, Mode::MonteCarlo { samples: 20_000, seed: 1 })?.estimate);
        let ok = v.windows(2).all(|w| w[0] < w[1]);
        Ok((joined(v.iter().map(|e| format!("{e:.4}"))), ok))
    }),
    ("g2z-decay", "density", "k = 20 below k = 2", || {
        let a = g2z_box_fraction(2, 20_000, 1)?.estimate;
        let b = g2z_box_fraction(20, 20_000, 1)?.estimate;
        Ok((format!("{a:.5}, {b:.5}"), b < a))
    }),
    ("coprime-product", "density", "within 3 SE", || {
        let r = coprimality_product(1000, Some((1_000_000, 400_000, 42)))?;
        let z = r.z_score.unwrap_or(f64::INFINITY);
        Ok((format!("z = {z:.2}"), z.abs() <= 3.0))
    }),
];

/// Runs every case; errors count as mismatches.
pub fn run_corpus() -> Vec<CorpusCase> {
    CASES
        .iter()
        .map(|&(id, module, expected, check)| {
            let (observed, pass) = match check() {
                Ok(v) => v,
                Err(e) => (format!("error: {e}"), false),
            };
            CorpusCase { id, module, expected, observed, pass }
        })
        .collect()
}

/// Ids of all cases.
pub fn case_ids() -> BTreeSet<&'static str> {
    CASES.iter().map(|c| c.0).collect()
}
