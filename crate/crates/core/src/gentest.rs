//! Generation tests for matrix rings: does `Z<A, B>` (or `F_p<A, B>`) fill
//! the target lattice?

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::prime_factors;
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::det::det;
use crate::linalg::{Integers, IntMatrix, LatticeBasis, Matrix, PrimeField, Ring};
use crate::words::{Letter, Word};

/// What the pair is asked to generate.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// `M_n(Z)`
    Matrices { n: usize },
    /// `M_n(F_p)`
    MatricesModP { n: usize, p: u64 },
    /// `M_{n_1}(Z) + ... + M_{n_k}(Z)` with block-diagonal generators.
    Product { sizes: Vec<usize> },
    /// An explicit sublattice of the flattened product `sizes`.
    Lattice { sizes: Vec<usize>, basis: LatticeBasis },
}

impl Target {
    pub fn sizes(&self) -> Vec<usize> {
        match self {
            Target::Matrices { n } | Target::MatricesModP { n, .. } => vec![*n],
            Target::Product { sizes } | Target::Lattice { sizes, .. } => sizes.clone(),
        }
    }

    /// Size of the square matrices the generators must have.
    pub fn matrix_size(&self) -> usize {
        self.sizes().iter().sum()
    }

    /// Dimension of the flattened ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.sizes().iter().map(|n| n * n).sum()
    }

    pub fn rank(&self) -> usize {
        match self {
            Target::Lattice { basis, .. } => basis.rank(),
            _ => self.ambient_dim(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Target::Matrices { n } => format!("M_{n}(Z)"),
            Target::MatricesModP { n, p } => format!("M_{n}(F_{p})"),
            Target::Product { sizes } => {
                sizes.iter().map(|n| format!("M_{n}(Z)")).collect::<Vec<_>>().join(" + ")
            }
            Target::Lattice { sizes, basis } => {
                format!("rank-{} lattice in blocks {:?}", basis.rank(), sizes)
            }
        }
    }
}

/// Which coefficient ring `msl` measures spanning over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanRing {
    Integers,
    Rationals,
    Field(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Generates,
    Fails,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenReport {
    pub verdict: Verdict,
    pub target: String,
    /// Longest word length examined before the span reached the target or
    /// stopped growing.
    pub word_bound: usize,
    pub rank: usize,
    pub target_rank: usize,
    #[serde(with = "json::big_vec")]
    pub elementary_divisors: Vec<BigInt>,
    pub certificate_words: Vec<Word>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_big_vec")]
    pub failing_primes: Option<Vec<BigInt>>,
    pub rank_deficient: bool,
    #[serde(with = "json::big_opt")]
    pub index: Option<BigInt>,
}

fn opt_big_vec<S: serde::Serializer>(v: &Option<Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => json::big_vec::serialize(v, s),
        None => s.serialize_none(),
    }
}

impl GenReport {
    pub fn generates(&self) -> bool {
        self.verdict == Verdict::Generates
    }
}

/// Receives word values and keeps track of what they span.
pub(crate) trait Sink<R: Ring> {
    /// Adds a value; true when the span grew.
    fn accept(&mut self, v: &Matrix<R>) -> bool;
    fn complete(&self) -> bool;
}

pub(crate) enum Goal {
    Everything,
    Rank(usize),
    Contains(LatticeBasis),
}

pub(crate) struct IntSink {
    pub lattice: LatticeBasis,
    sizes: Vec<usize>,
    goal: Goal,
}

impl IntSink {
    pub fn new(sizes: Vec<usize>, goal: Goal) -> Self {
        let dim = sizes.iter().map(|n| n * n).sum();
        IntSink { lattice: LatticeBasis::zero(dim), sizes, goal }
    }
}

impl Sink<Integers> for IntSink {
    fn accept(&mut self, v: &IntMatrix) -> bool {
        let flat = flatten_blocks(v, &self.sizes);
        self.lattice.insert(&flat).expect("dimension checked at construction")
    }

    fn complete(&self) -> bool {
        match &self.goal {
            Goal::Everything => self.lattice.is_everything(),
            Goal::Rank(r) => self.lattice.rank() >= *r,
            Goal::Contains(t) => {
                self.lattice.rank() >= t.rank() && self.lattice.contains_lattice(t).unwrap_or(false)
            }
        }
    }
}

/// Row echelon span over a prime field.
pub(crate) struct FpSink {
    field: PrimeField,
    rows: Vec<(usize, Vec<u64>)>,
    dim: usize,
}

impl FpSink {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        FpSink { field, rows: Vec::new(), dim }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert_vec(&mut self, mut v: Vec<u64>) -> bool {
        let f = self.field;
        for (p, row) in &self.rows {
            let k = v[*p];
            if k != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        let Some(p) = v.iter().position(|&a| a != 0) else { return false };
        let inv = f.inv(v[p]).expect("nonzero");
        v.iter_mut().for_each(|x| *x = f.mul(x, &inv));
        for (_, row) in self.rows.iter_mut() {
            let k = row[p];
            if k != 0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

impl Sink<PrimeField> for FpSink {
    fn accept(&mut self, v: &Matrix<PrimeField>) -> bool {
        self.insert_vec(v.entries().to_vec())
    }

    fn complete(&self) -> bool {
        self.rows.len() == self.dim
    }
}

pub(crate) struct Growth {
    pub words: Vec<Word>,
    pub levels: usize,
    pub complete: bool,
}

const MAX_LEVELS: usize = 100_000;

/// Runs the recurrence `L_1 = ZA + ZB`, `L_{s+1} = L_1 + A L_s + B L_s`
/// keeping only words whose value enlarges the span. With `unital` the
/// identity is added first. Stops once the sink is complete (if
/// `early_exit`) or a whole level adds nothing, after which the span is the
/// ring generated by the pair.
pub(crate) fn grow<R: Ring, S: Sink<R>>(
    a: &Matrix<R>,
    b: &Matrix<R>,
    unital: bool,
    early_exit: bool,
    sink: &mut S,
) -> Result<Growth> {
    let mut words = Vec::new();
    let mut candidates: Vec<(Word, Matrix<R>)> = Vec::new();
    if unital {
        let id = Matrix::identity(a.ring().clone(), a.rows());
        if sink.accept(&id) {
            words.push(Word::empty());
        }
        if early_exit && sink.complete() {
            return Ok(Growth { words, levels: 0, complete: true });
        }
    }
    candidates.push((Word::x(), a.clone()));
    candidates.push((Word::y(), b.clone()));
    let mut level = 0;
    loop {
        level += 1;
        if level > MAX_LEVELS {
            return Err(Error::ResourceCap(format!("span still growing after {MAX_LEVELS} levels")));
        }
        let mut kept = Vec::new();
        for (w, v) in candidates {
            if sink.accept(&v) {
                words.push(w.clone());
                kept.push((w, v));
                if early_exit && sink.complete() {
                    return Ok(Growth { words, levels: level, complete: true });
                }
            }
        }
        if kept.is_empty() {
            let complete = sink.complete();
            return Ok(Growth { words, levels: level, complete });
        }
        candidates = Vec::with_capacity(2 * kept.len());
        for (w, v) in &kept {
            candidates.push((w.prefixed(Letter::X), a * v));
            candidates.push((w.prefixed(Letter::Y), b * v));
        }
    }
}

/// Concatenated row-major flattenings of the diagonal blocks.
pub fn flatten_blocks(m: &IntMatrix, sizes: &[usize]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(sizes.iter().map(|n| n * n).sum());
    let mut start = 0;
    for &n in sizes {
        for i in 0..n {
            for j in 0..n {
                out.push(m.get(start + i, start + j).clone());
            }
        }
        start += n;
    }
    out
}

pub fn is_block_diagonal(m: &IntMatrix, sizes: &[usize]) -> bool {
    let mut block_of = Vec::with_capacity(m.rows());
    for (k, &n) in sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(k, n));
    }
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| block_of[i] == block_of[j] || m.get(i, j).is_zero()))
}

fn check_conformal(a: &IntMatrix, b: &IntMatrix, target: &Target) -> Result<()> {
    let n = target.matrix_size();
    for m in [a, b] {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
        if m.rows() != n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} generator for target {}",
                m.rows(),
                m.cols(),
                target.describe()
            )));
        }
    }
    let sizes = target.sizes();
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter("empty block".into()));
    }
    if sizes.len() > 1 && !(is_block_diagonal(a, &sizes) && is_block_diagonal(b, &sizes)) {
        return Err(Error::ShapeMismatch("generators are not block diagonal for the target".into()));
    }
    if let Target::Lattice { basis, .. } = target {
        if basis.dim() != target.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: target.ambient_dim(), got: basis.dim() });
        }
    }
    Ok(())
}

/// Decides whether `(A, B)` generates the target as a ring without identity.
pub fn is_generating(a: &IntMatrix, b: &IntMatrix, target: &Target) -> Result<GenReport> {
    is_generating_with(a, b, target, false)
}

/// As [`is_generating`]; with `unital` the identity joins the generators.
pub fn is_generating_with(a: &IntMatrix, b: &IntMatrix, target: &Target, unital: bool) -> Result<GenReport> {
    check_conformal(a, b, target)?;
    if let Target::MatricesModP { n, p } = target {
        let field = PrimeField::new(*p).ok_or(Error::NotPrime(*p))?;
        let (af, bf) = (a.reduce_mod(field), b.reduce_mod(field));
        let mut sink = FpSink::new(field, n * n);
        let g = grow(&af, &bf, unital, true, &mut sink)?;
        let generates = g.complete;
        return Ok(GenReport {
            verdict: if generates { Verdict::Generates } else { Verdict::Fails },
            target: target.describe(),
            word_bound: g.levels,
            rank: sink.rank(),
            target_rank: n * n,
            elementary_divisors: Vec::new(),
            certificate_words: if generates { g.words } else { Vec::new() },
            failing_primes: None,
            rank_deficient: !generates,
            index: None,
        });
    }
    let sizes = target.sizes();
    let goal = match target {
        Target::Lattice { basis, .. } => Goal::Contains(basis.clone()),
        _ => Goal::Everything,
    };
    let mut sink = IntSink::new(sizes, goal);
    let g = grow(a, b, unital, true, &mut sink)?;
    let target_rank = target.rank();
    let mut lattice = sink.lattice;
    let rank = lattice.rank();
    let (divisors, contained) = match target {
        Target::Lattice { basis, .. } => relative_divisors(&lattice, basis),
        _ => (lattice.elementary_divisors().to_vec(), true),
    };
    let generates = g.complete;
    let full = rank == target_rank && contained;
    let index = full.then(|| divisors.iter().product::<BigInt>());
    let failing_primes = match (&index, divisors.last()) {
        (Some(_), Some(last)) => Some(prime_factors(last)?),
        (Some(_), None) => Some(Vec::new()),
        _ => None,
    };
    Ok(GenReport {
        verdict: if generates { Verdict::Generates } else { Verdict::Fails },
        target: target.describe(),
        word_bound: g.levels,
        rank,
        target_rank,
        elementary_divisors: divisors,
        certificate_words: if generates { g.words } else { Vec::new() },
        failing_primes,
        rank_deficient: !full,
        index,
    })
}

/// Divisors of `inner` relative to `outer`; the flag is false when `inner`
/// is not contained in `outer` (divisors are then those of `inner` in Z^d).
fn relative_divisors(inner: &LatticeBasis, outer: &LatticeBasis) -> (Vec<BigInt>, bool) {
    let mut coords = Vec::with_capacity(inner.rank());
    for r in inner.rows() {
        match outer.solve(r).ok().flatten() {
            Some(c) => coords.push(c),
            None => {
                let mut l = inner.clone();
                return (l.elementary_divisors().to_vec(), false);
            }
        }
    }
    let mut rel = LatticeBasis::from_generators(outer.rank(), &coords).expect("coordinates match outer rank");
    (rel.elementary_divisors().to_vec(), true)
}

/// Primes at which the pair fails to generate `M_n(F_p)`, or the rank
/// deficient marker when it fails over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailingPrimes {
    Primes(#[serde(with = "json::big_vec")] Vec<BigInt>),
    RankDeficient,
}

pub fn failing_primes(a: &IntMatrix, b: &IntMatrix, n: usize) -> Result<FailingPrimes> {
    let r = is_generating(a, b, &Target::Matrices { n })?;
    Ok(match r.failing_primes {
        Some(p) => FailingPrimes::Primes(p),
        None => FailingPrimes::RankDeficient,
    })
}

/// Minimum spanning length over the given coefficient ring.
pub fn msl(a: &IntMatrix, b: &IntMatrix, ring: SpanRing) -> Result<usize> {
    let n = a.rows();
    check_conformal(a, b, &Target::Matrices { n })?;
    let g = match ring {
        SpanRing::Integers => grow(a, b, false, true, &mut IntSink::new(vec![n], Goal::Everything))?,
        SpanRing::Rationals => grow(a, b, false, true, &mut IntSink::new(vec![n], Goal::Rank(n * n)))?,
        SpanRing::Field(p) => {
            let field = PrimeField::new(p).ok_or(Error::NotPrime(p))?;
            let mut sink = FpSink::new(field, n * n);
            grow(&a.reduce_mod(field), &b.reduce_mod(field), false, true, &mut sink)?
        }
    };
    if !g.complete {
        return Err(Error::NotGenerating);
    }
    Ok(g.levels)
}

/// Index of the ring generated by the assembled block pair inside the full
/// product of matrix rings; `None` when the rank is deficient.
pub fn subring_index(blocks: &[(IntMatrix, IntMatrix)]) -> Result<Option<BigInt>> {
    if blocks.is_empty() {
        return Err(Error::InvalidParameter("no blocks".into()));
    }
    let mut sizes = Vec::new();
    for (a, b) in blocks {
        if !a.is_square() || a.rows() != b.rows() || !b.is_square() {
            return Err(Error::ShapeMismatch("blocks must be square pairs of equal size".into()));
        }
        sizes.push(a.rows());
    }
    let (a, b) = assemble_blocks(blocks);
    let mut sink = IntSink::new(sizes, Goal::Everything);
    grow(&a, &b, false, true, &mut sink)?;
    Ok(sink.lattice.index())
}

pub fn assemble_blocks(blocks: &[(IntMatrix, IntMatrix)]) -> (IntMatrix, IntMatrix) {
    let a: Vec<IntMatrix> = blocks.iter().map(|(a, _)| a.clone()).collect();
    let b: Vec<IntMatrix> = blocks.iter().map(|(_, b)| b.clone()).collect();
    (Matrix::block_diag(Integers, &a), Matrix::block_diag(Integers, &b))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MslSurvey {
    pub n: usize,
    pub p: u64,
    pub samples: u64,
    pub seed: u64,
    pub generating: u64,
    pub histogram: BTreeMap<usize, u64>,
    pub max_msl: Option<usize>,
}

/// Samples per deterministic shard; shard `k` draws from `seed + k`.
pub const SHARD_SIZE: u64 = 256;

/// Uniform random pairs over `F_p`, histogram of msl among generating pairs.
pub fn msl_survey(n: usize, p: u64, samples: u64, seed: u64) -> Result<MslSurvey> {
    let field = PrimeField::new(p).ok_or(Error::NotPrime(p))?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let shards = samples.div_ceil(SHARD_SIZE);
    let partial: Vec<BTreeMap<usize, u64>> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
            let count = SHARD_SIZE.min(samples - k * SHARD_SIZE);
            let mut hist = BTreeMap::new();
            for _ in 0..count {
                let a = random_fp_matrix(&mut rng, field, n);
                let b = random_fp_matrix(&mut rng, field, n);
                let mut sink = FpSink::new(field, n * n);
                let g = grow(&a, &b, false, true, &mut sink).expect("finite field span terminates");
                if g.complete {
                    *hist.entry(g.levels).or_insert(0) += 1;
                }
            }
            hist
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for h in partial {
        for (k, v) in h {
            *histogram.entry(k).or_insert(0) += v;
        }
    }
    Ok(MslSurvey {
        n,
        p,
        samples,
        seed,
        generating: histogram.values().sum(),
        max_msl: histogram.keys().next_back().copied(),
        histogram,
    })
}

pub(crate) fn random_fp_matrix(rng: &mut impl Rng, field: PrimeField, n: usize) -> Matrix<PrimeField> {
    let p = field.modulus();
    Matrix::from_fn(field, n, n, |_, _| rng.gen_range(0..p))
}

/// Families of pairs known to generate `M_n(Z)`.
#[derive(Clone, Debug)]
pub enum ExampleKind {
    /// `(X, E_st)`
    Beauty1 { n: usize, s: usize, t: usize },
    /// Strictly upper triangular `A` with ones on the superdiagonal and a
    /// matrix `B` for which `e_1, B^2 e_1, ..., B^n e_1` is a basis.
    Beauty3 { b: IntMatrix },
    /// `(U^-1 X U, U^-1 Y U)`
    Conjugate { u: IntMatrix },
}

pub fn example_pair(kind: &ExampleKind) -> Result<(IntMatrix, IntMatrix)> {
    match kind {
        ExampleKind::Beauty1 { n, s, t } => {
            if *n == 0 || !(1..=*n).contains(s) || !(1..=*n).contains(t) {
                return Err(Error::InvalidParameter(format!("need 1 <= s, t <= n, got s={s}, t={t}, n={n}")));
            }
            Ok((IntMatrix::shift(*n), IntMatrix::unit(*n, *s as i64, *t as i64)))
        }
        ExampleKind::Beauty3 { b } => {
            if !b.is_square() {
                return Err(Error::NotSquare(b.rows(), b.cols()));
            }
            let n = b.rows();
            if !beauty3_basis_condition(b) {
                return Err(Error::Beauty3BasisViolation(
                    "e_1 and B^l e_1 (2 <= l <= n) do not have determinant +-1".into(),
                ));
            }
            let mut a = IntMatrix::int_zeros(n, n);
            for l in 1..n {
                a.set(l - 1, l, BigInt::one());
            }
            Ok((a, b.clone()))
        }
        ExampleKind::Conjugate { u } => {
            if !u.is_square() {
                return Err(Error::NotSquare(u.rows(), u.cols()));
            }
            let n = u.rows();
            let uinv = crate::linalg::det::inverse_int(u).ok_or(Error::NotUnimodular)?;
            let x = IntMatrix::shift(n);
            let y = IntMatrix::unit(n, 1, 1);
            Ok((&(&uinv * &x) * u, &(&uinv * &y) * u))
        }
    }
}

/// Rejection-samples `B` with entries in `[-2, 2]` satisfying the basis
/// condition, from a seeded stream.
pub fn sample_beauty3_b(n: usize, seed: u64) -> Result<IntMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100_000 {
        let b = IntMatrix::from_fn(Integers, n, n, |_, _| BigInt::from(rng.gen_range(-2i64..=2)));
        if beauty3_basis_condition(&b) {
            return Ok(b);
        }
    }
    Err(Error::ResourceCap("no valid B in 100000 draws".into()))
}

/// `det[e_1, B^2 e_1, ..., B^n e_1] = +-1`
pub fn beauty3_basis_condition(b: &IntMatrix) -> bool {
    let n = b.rows();
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut e1 = IntMatrix::int_zeros(n, 1);
    e1.set(0, 0, BigInt::one());
    cols.push(e1.entries().to_vec());
    let b2 = b * b;
    let mut v = &b2 * &e1;
    for l in 2..=n {
        cols.push(v.entries().to_vec());
        if l < n {
            v = b * &v;
        }
    }
    let m = IntMatrix::from_rows(&cols).expect("n columns of length n");
    let d = det(&m);
    d == BigInt::one() || d == -BigInt::one()
}
