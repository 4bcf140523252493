//! Words in the free semigroup on `{x, y}` and noncommutative integer
//! polynomials in `x`, `y`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// A word over `{x, y}`. The derived order is lexicographic with `x < y`
/// and a proper prefix sorting before its extensions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn x() -> Self {
        Word(vec![Letter::X])
    }

    pub fn y() -> Self {
        Word(vec![Letter::Y])
    }

    /// `x^k`
    pub fn x_pow(k: usize) -> Self {
        Word(vec![Letter::X; k])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn prefixed(&self, l: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(l);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// Evaluates with `x -> a`, `y -> b`; the empty word evaluates to the identity.
    pub fn evaluate<R: Ring>(&self, a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
        check_pair(a, b)?;
        let mut it = self.0.iter();
        let mut acc = match it.next() {
            None => return Ok(Matrix::identity(a.ring().clone(), a.rows())),
            Some(Letter::X) => a.clone(),
            Some(Letter::Y) => b.clone(),
        };
        for l in it {
            acc = &acc * if *l == Letter::X { a } else { b };
        }
        Ok(acc)
    }

    /// Run-length form, e.g. `x^3 y x y^2` becomes `[(X,3),(Y,1),(X,1),(Y,2)]`.
    pub fn runs(&self) -> Vec<(Letter, usize)> {
        let mut out: Vec<(Letter, usize)> = Vec::new();
        for &l in &self.0 {
            match out.last_mut() {
                Some((m, k)) if *m == l => *k += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    pub fn from_runs(runs: &[(Letter, usize)]) -> Self {
        Word(runs.iter().flat_map(|&(l, k)| std::iter::repeat_n(l, k)).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (l, k)) in self.runs().into_iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if k == 1 {
                write!(f, "{}", l.as_char())?;
            } else {
                write!(f, "{}^{k}", l.as_char())?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let p = NcPoly::from_str(s)?;
        let mut terms = p.terms.into_iter();
        match (terms.next(), terms.next()) {
            (Some((w, c)), None) if c.is_one() => Ok(w),
            (None, _) => Err(Error::Parse("empty word text".into())),
            _ => Err(Error::Parse(format!("'{s}' is not a single word"))),
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_pair<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    if !b.is_square() {
        return Err(Error::NotSquare(b.rows(), b.cols()));
    }
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch(format!("{}x{} vs {}x{}", a.rows(), a.cols(), b.rows(), b.cols())));
    }
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch(format!("{} vs {}", a.ring().tag(), b.ring().tag())));
    }
    Ok(())
}

/// All words of length `1..=m` (plus the empty word when `unital`), sorted.
pub fn enumerate_words(m: usize, unital: bool) -> Vec<Word> {
    let mut out = Vec::new();
    if unital {
        out.push(Word::empty());
    }
    fn dfs(w: &mut Word, m: usize, out: &mut Vec<Word>) {
        for l in [Letter::X, Letter::Y] {
            w.push(l);
            out.push(w.clone());
            if w.len() < m {
                dfs(w, m, out);
            }
            w.0.pop();
        }
    }
    if m > 0 {
        dfs(&mut Word::empty(), m, &mut out);
    }
    out
}

/// Row-major entries of a square matrix.
pub fn flatten<R: Ring>(m: &Matrix<R>) -> Result<Vec<R::Elem>> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    Ok(m.entries().to_vec())
}

/// The matrix whose rows are the flattened values of all words of length
/// `1..=m`, in word order.
pub fn build_t<R: Ring>(m: usize, a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
    check_pair(a, b)?;
    let n = a.rows();
    let mut data = Vec::new();
    let mut count = 0usize;
    // pre-order traversal of the prefix tree reproduces the word order
    fn dfs<R: Ring>(
        prefix: &Matrix<R>,
        depth: usize,
        m: usize,
        a: &Matrix<R>,
        b: &Matrix<R>,
        data: &mut Vec<R::Elem>,
        count: &mut usize,
    ) {
        for g in [a, b] {
            let v = if depth == 0 { g.clone() } else { prefix * g };
            data.extend_from_slice(v.entries());
            *count += 1;
            if depth + 1 < m {
                dfs(&v, depth + 1, m, a, b, data, count);
            }
        }
    }
    if m > 0 {
        dfs(a, 0, m, a, b, &mut data, &mut count);
    }
    Matrix::new(a.ring().clone(), count, n * n, data)
}

/// Finite integer combination of words. The `unital` flag says whether the
/// empty word (the identity) may appear.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NcPoly {
    terms: BTreeMap<Word, BigInt>,
    unital: bool,
}

impl NcPoly {
    pub fn zero(unital: bool) -> Self {
        NcPoly { terms: BTreeMap::new(), unital }
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty(), 1)
    }

    pub fn from_word(w: Word, c: impl Into<BigInt>) -> Self {
        let mut p = NcPoly::zero(w.is_empty());
        p.add_term(w, c.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, BigInt)>>(iter: I, unital: bool) -> Self {
        let mut p = NcPoly::zero(unital);
        for (w, c) in iter {
            p.add_term(w, c);
        }
        p
    }

    pub fn x() -> Self {
        Self::from_word(Word::x(), 1)
    }

    pub fn y() -> Self {
        Self::from_word(Word::y(), 1)
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn with_unital(mut self, unital: bool) -> Self {
        self.unital = unital;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        if w.is_empty() {
            self.unital = true;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.unital |= other.unital;
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> NcPoly {
        let mut out = NcPoly::zero(self.unital);
        if !c.is_zero() {
            for (w, d) in &self.terms {
                out.terms.insert(w.clone(), c * d);
            }
        }
        out
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero(self.unital || other.unital);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// `u * self * v`
    pub fn sandwich(&self, u: &Word, v: &Word) -> NcPoly {
        let mut out = NcPoly::zero(self.unital);
        for (w, c) in &self.terms {
            out.add_term(u.concat(w).concat(v), c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> NcPoly {
        let mut acc = NcPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        if k > 0 {
            acc.unital = self.unital;
        }
        acc
    }

    /// Image under the algebra map `x -> fx`, `y -> fy`.
    pub fn substitute(&self, fx: &NcPoly, fy: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero(self.unital);
        for (w, c) in &self.terms {
            let mut term = NcPoly::one();
            for l in w.letters() {
                term = term.mul(if *l == Letter::X { fx } else { fy });
            }
            out = out.add(&term.scale(c));
        }
        out.unital = self.unital;
        out
    }

    /// Evaluates with `x -> a`, `y -> b`, the empty word mapping to the identity.
    pub fn evaluate<R: Ring>(&self, a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
        check_pair(a, b)?;
        let ring = a.ring().clone();
        let n = a.rows();
        let mut acc = Matrix::zeros(ring.clone(), n, n);
        let mut cache: BTreeMap<Word, Matrix<R>> = BTreeMap::new();
        for (w, c) in &self.terms {
            let v = word_value(w, a, b, &mut cache);
            acc = &acc + &v.scale(&ring.from_int(c));
        }
        Ok(acc)
    }
}

fn word_value<R: Ring>(w: &Word, a: &Matrix<R>, b: &Matrix<R>, cache: &mut BTreeMap<Word, Matrix<R>>) -> Matrix<R> {
    if let Some(v) = cache.get(w) {
        return v.clone();
    }
    let v = match w.letters().split_last() {
        None => Matrix::identity(a.ring().clone(), a.rows()),
        Some((l, rest)) => {
            let p = word_value(&Word(rest.to_vec()), a, b, cache);
            let g = if *l == Letter::X { a } else { b };
            if rest.is_empty() {
                g.clone()
            } else {
                &p * g
            }
        }
    };
    cache.insert(w.clone(), v.clone());
    v
}

/// Evaluates `f` at `(a, b)`.
pub fn evaluate_ncpoly<R: Ring>(f: &NcPoly, a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
    f.evaluate(a, b)
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // longest words first, matching the usual way relators are written
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(u, _), (v, _)| v.len().cmp(&u.len()).then(u.cmp(v)));
        for (i, (w, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for NcPoly {
    type Err = Error;

    /// Accepts sums such as `x^4 + x^3*y*x - 1` or `2 x y^2 - y`.
    fn from_str(s: &str) -> Result<NcPoly> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut p = NcPoly::zero(false);
        let mut i = 0;
        if chars == ['0'] {
            return Ok(p);
        }
        while i < chars.len() {
            let mut sign = BigInt::one();
            if i > 0 || chars[i] == '+' || chars[i] == '-' {
                match chars[i] {
                    '+' => {}
                    '-' => sign = -sign,
                    c => return Err(Error::Parse(format!("expected '+' or '-' at '{c}'"))),
                }
                i += 1;
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let coeff = if i > start {
                chars[start..i].iter().collect::<String>().parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?
            } else {
                BigInt::one()
            };
            let mut letters = Vec::new();
            let mut saw_factor = i > start;
            while i < chars.len() && !matches!(chars[i], '+' | '-') {
                if chars[i] == '*' {
                    if !saw_factor {
                        return Err(Error::Parse("dangling '*'".into()));
                    }
                    i += 1;
                    continue;
                }
                let l = match chars[i] {
                    'x' => Letter::X,
                    'y' => Letter::Y,
                    c => return Err(Error::Parse(format!("unexpected character '{c}'"))),
                };
                i += 1;
                let mut k = 1usize;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let s0 = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if s0 == i {
                        return Err(Error::Parse("missing exponent".into()));
                    }
                    k = chars[s0..i].iter().collect::<String>().parse().map_err(|_| Error::Parse("bad exponent".into()))?;
                }
                letters.extend(std::iter::repeat_n(l, k));
                saw_factor = true;
            }
            if !saw_factor {
                return Err(Error::Parse("empty term".into()));
            }
            p.add_term(Word(letters), sign * coeff);
        }
        Ok(p)
    }
}

impl Serialize for NcPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NcPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    #[test]
    fn word_order() {
        let ws: Vec<String> = enumerate_words(2, false).iter().map(|w| w.to_string()).collect();
        assert_eq!(ws, ["x", "x^2", "x*y", "y", "y*x", "y^2"]);
        assert_eq!(enumerate_words(0, false).len(), 0);
        assert_eq!(enumerate_words(1, true).len(), 3);
    }

    #[test]
    fn parse_round_trip() {
        let p: NcPoly = "x^4 + x^3*y*x + x^2*y*x^2 + x*y*x^3 + y*x^4 - 1".parse().unwrap();
        assert!(p.is_unital());
        assert_eq!(p.degree(), 5);
        let q: NcPoly = p.to_string().parse().unwrap();
        assert_eq!(p, q);
        let w: Word = "x^3 y x y^2".parse().unwrap();
        assert_eq!(w.len(), 7);
        assert!("x + z".parse::<NcPoly>().is_err());
        assert!("x^".parse::<NcPoly>().is_err());
    }

    #[test]
    fn cancellation() {
        let p: NcPoly = "x y - x*y".parse().unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn evaluation_of_xy() {
        let x = IntMatrix::shift(2);
        let y = IntMatrix::unit(2, 1, 1);
        let v = "x y".parse::<NcPoly>().unwrap().evaluate(&x, &y).unwrap();
        assert_eq!(v, IntMatrix::unit(2, 2, 1));
    }
}
