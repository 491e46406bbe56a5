use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{FreeLie, FreeLieError, Word};
use crate::qlinalg::Rational;

/// A ℚ-linear combination of words in the truncated tensor algebra.
#[derive(Clone)]
pub struct TensorElement {
    alg: FreeLie,
    terms: BTreeMap<Word, Rational>,
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElement({self})")
    }
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.terms == other.terms
    }
}

impl Eq for TensorElement {}

impl TensorElement {
    pub fn zero(alg: &FreeLie) -> Self {
        TensorElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `c · w`, dropped if `w` lies outside the window.
    pub fn monomial(alg: &FreeLie, w: Word, c: Rational) -> Self {
        let mut t = Self::zero(alg);
        if !c.is_zero() && alg.in_window(&w) {
            t.terms.insert(w, c);
        }
        t
    }

    /// Builds from word/coefficient pairs, summing duplicates and truncating.
    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(alg: &FreeLie, terms: I) -> Self {
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for (w, c) in terms {
            if alg.in_window(&w) {
                *acc.entry(w).or_default() += c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        alg.check_terms(acc.len());
        TensorElement {
            alg: alg.clone(),
            terms: acc,
        }
    }

    pub fn algebra(&self) -> &FreeLie {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn unit_coefficient(&self) -> Rational {
        self.coefficient(&Word::empty())
    }

    /// Highest word under the global order, if nonzero.
    pub fn leading_word(&self) -> Option<&Word> {
        self.terms.keys().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        TensorElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), FreeLieError> {
        if self.alg.window() != other.alg.window() {
            return Err(FreeLieError::WindowMismatch(self.alg.window(), other.alg.window()));
        }
        if !self.alg.same_alphabet(&other.alg) {
            return Err(FreeLieError::AlphabetMismatch);
        }
        Ok(())
    }

    fn assert_same(&self, other: &Self) {
        if let Err(e) = self.check_same(other) {
            panic!("{e}");
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        self.assert_same(other);
        let mut terms = self.terms.clone();
        for (w, v) in &other.terms {
            let e = terms.entry(w.clone()).or_default();
            *e += &(c * v);
            if e.is_zero() {
                terms.remove(w);
            }
        }
        self.alg.check_terms(terms.len());
        TensorElement {
            alg: self.alg.clone(),
            terms,
        }
    }

    /// Truncated concatenation product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, FreeLieError> {
        self.check_same(other)?;
        let alg = &self.alg;
        let w = alg.window();
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            let da = alg.word_degree(a);
            for (b, cb) in &other.terms {
                if a.weight + b.weight > w.max_weight || da + alg.word_degree(b) > w.max_degree {
                    continue;
                }
                *acc.entry(alg.concat(a, b)).or_default() += &(ca * cb);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        alg.check_terms(acc.len());
        Ok(TensorElement {
            alg: alg.clone(),
            terms: acc,
        })
    }

    /// Graded commutator `ab - (-1)^{|a||b|} ba`, applied termwise so each
    /// pair of homogeneous components gets its own Koszul sign.
    pub fn try_commutator(&self, other: &Self) -> Result<Self, FreeLieError> {
        self.check_same(other)?;
        let alg = &self.alg;
        let w = alg.window();
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            let da = alg.word_degree(a);
            for (b, cb) in &other.terms {
                let db = alg.word_degree(b);
                if a.weight + b.weight > w.max_weight || da + db > w.max_degree {
                    continue;
                }
                let c = ca * cb;
                *acc.entry(alg.concat(a, b)).or_default() += &c;
                let odd = da % 2 == 1 && db % 2 == 1;
                let c2 = if odd { c } else { -c };
                *acc.entry(alg.concat(b, a)).or_default() += &c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        alg.check_terms(acc.len());
        Ok(TensorElement {
            alg: alg.clone(),
            terms: acc,
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = self.alg.one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Homogeneous components keyed by `(weight, degree)`.
    pub fn components(&self) -> BTreeMap<(u32, u32), TensorElement> {
        let mut out: BTreeMap<(u32, u32), TensorElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            let key = (w.weight, self.alg.word_degree(w));
            out.entry(key)
                .or_insert_with(|| TensorElement::zero(&self.alg))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    /// Components keyed by letter content (sorted multiset of letters).
    pub fn content_components(&self) -> BTreeMap<Vec<super::Letter>, TensorElement> {
        let mut out: BTreeMap<Vec<super::Letter>, TensorElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut key = w.letters().to_vec();
            key.sort_unstable();
            out.entry(key)
                .or_insert_with(|| TensorElement::zero(&self.alg))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }

    /// The unique degree of all terms, if the element is degree-homogeneous
    /// and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| self.alg.word_degree(w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.weight).min()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.weight).max()
    }

    /// Minimal number of letters over all terms.
    pub fn min_length(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    /// Terms of weight ≤ `max` only.
    pub fn truncate_weight(&self, max: u32) -> Self {
        TensorElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight <= max)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of weight ≥ `min` only.
    pub fn weight_at_least(&self, min: u32) -> Self {
        TensorElement {
            alg: self.alg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight >= min)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-expresses this element over another algebra, translating letters
    /// through `map` and truncating to the target window.
    pub fn transport(&self, target: &FreeLie, map: &dyn Fn(super::Letter) -> super::Letter) -> Self {
        TensorElement::from_terms(
            target,
            self.terms
                .iter()
                .map(|(w, c)| (target.word(w.letters().iter().map(|&l| map(l)).collect()), c.clone())),
        )
    }

    /// Same letters, same coefficients, different window (same alphabet).
    pub fn rewindow(&self, target: &FreeLie) -> Self {
        assert!(self.alg.same_alphabet(target), "rewindow across alphabets");
        TensorElement::from_terms(target, self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = self.alg.format_word(w);
            write_term(f, i == 0, c, &word)?;
        }
        Ok(())
    }
}

/// Shared signed-term formatting: `a + 1/2 b - c`.
pub(crate) fn write_term(f: &mut impl fmt::Write, first: bool, c: &Rational, body: &str) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, false) => {}
        (true, true) => write!(f, "-")?,
        (false, false) => write!(f, " + ")?,
        (false, true) => write!(f, " - ")?,
    }
    if mag.is_one() {
        write!(f, "{body}")
    } else {
        write!(f, "{mag} {body}")
    }
}

impl Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        self.add_scaled(&Rational::one(), rhs)
    }
}

impl Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        self.add_scaled(&Rational::from_int(-1), rhs)
    }
}

impl Mul for &TensorElement {
    type Output = TensorElement;
    fn mul(self, rhs: &TensorElement) -> TensorElement {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        self.scale(&Rational::from_int(-1))
    }
}

/// A tensor element together with a flag recording whether it has been
/// certified to lie in the free Lie subalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    value: TensorElement,
    certified: bool,
}

impl LieElement {
    /// Wraps a value known to be Lie by construction (generators, brackets,
    /// sums of certified elements).
    pub(crate) fn certified_unchecked(value: TensorElement) -> Self {
        LieElement { value, certified: true }
    }

    /// Wraps a value without any claim.
    pub fn uncertified(value: TensorElement) -> Self {
        LieElement {
            value,
            certified: false,
        }
    }

    pub fn value(&self) -> &TensorElement {
        &self.value
    }

    pub fn into_value(self) -> TensorElement {
        self.value
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn algebra(&self) -> &FreeLie {
        self.value.algebra()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn zero(alg: &FreeLie) -> Self {
        Self::certified_unchecked(TensorElement::zero(alg))
    }

    /// Graded bracket; certified whenever both inputs are.
    pub fn bracket(&self, other: &LieElement) -> Result<LieElement, FreeLieError> {
        let v = self.value.try_commutator(&other.value)?;
        Ok(LieElement {
            value: v,
            certified: self.certified && other.certified,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LieElement {
            value: self.value.scale(c),
            certified: self.certified,
        }
    }

    pub fn add_scaled(&self, c: &Rational, other: &LieElement) -> Self {
        LieElement {
            value: self.value.add_scaled(c, &other.value),
            certified: self.certified && other.certified,
        }
    }
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        self.add_scaled(&Rational::one(), rhs)
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        self.add_scaled(&Rational::from_int(-1), rhs)
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scale(&Rational::from_int(-1))
    }
}
