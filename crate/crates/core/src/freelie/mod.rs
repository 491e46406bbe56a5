//! The free graded Lie algebra on a finite alphabet, realised inside the
//! weight- and degree-truncated tensor algebra.
//!
//! Lie elements are tensor elements that happen to lie in the span of nested
//! graded commutators. There is no bracket-tree normal form: bases of each
//! (weight, degree) slice come from exact ranks of nested brackets, which
//! handles odd generators (`[x,x] ≠ 0`) without special cases.

mod basis;
mod series;
mod tensor;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

pub use basis::{certify_lie, format_lie, lie_basis, ContentSlice, LieSlice};
pub use series::{ad_power, bch, exp, log, log_group_word};
pub(crate) use tensor::write_term;
pub use tensor::{LieElement, TensorElement};

use crate::limits;

/// Index of a generator inside its alphabet (declaration order).
pub type Letter = u16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Filtration weight; 1 unless declared otherwise.
    pub weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
            weight: 1,
        }
    }

    pub fn with_weight(mut self, weight: u32) -> Self {
        self.weight = weight;
        self
    }
}

/// The nilpotent quotient all computations run on: words of weight
/// `> max_weight` or degree `> max_degree` are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncationWindow {
    pub max_weight: u32,
    pub max_degree: u32,
}

impl TruncationWindow {
    pub fn new(max_weight: u32, max_degree: u32) -> Self {
        TruncationWindow { max_weight, max_degree }
    }

    /// Componentwise maximum.
    pub fn max(self, other: Self) -> Self {
        TruncationWindow::new(
            self.max_weight.max(other.max_weight),
            self.max_degree.max(other.max_degree),
        )
    }
}

impl Default for TruncationWindow {
    fn default() -> Self {
        TruncationWindow::new(6, 6)
    }
}

impl fmt::Display for TruncationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.max_weight, self.max_degree)
    }
}

/// A word in the generators. Ordered by total weight, then lexicographically
/// by generator declaration order (a proper prefix sorts first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    weight: u32,
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            weight: 0,
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FreeLieError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have weight ≥ 1")]
    ZeroWeight(String),
    #[error("too many generators ({0})")]
    TooManyGenerators(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("window mismatch: {0} vs {1}")]
    WindowMismatch(TruncationWindow, TruncationWindow),
    #[error("elements belong to different alphabets")]
    AlphabetMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("result is not a Lie element: {0}")]
    NotLie(String),
}

pub(crate) struct Inner {
    gens: Vec<Generator>,
    index: HashMap<String, Letter>,
    window: TruncationWindow,
    memo: RwLock<HashMap<Vec<Letter>, Arc<ContentSlice>>>,
}

/// Handle on a free graded Lie algebra with a fixed alphabet and window.
/// Cheap to clone; every element keeps one.
#[derive(Clone)]
pub struct FreeLie(pub(crate) Arc<Inner>);

impl fmt::Debug for FreeLie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeLie")
            .field("generators", &self.0.gens)
            .field("window", &self.0.window)
            .finish()
    }
}

impl PartialEq for FreeLie {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.window == other.0.window && self.0.gens == other.0.gens)
    }
}

impl Eq for FreeLie {}

impl FreeLie {
    pub fn new(gens: Vec<Generator>, window: TruncationWindow) -> Result<Self, FreeLieError> {
        if gens.len() > Letter::MAX as usize {
            return Err(FreeLieError::TooManyGenerators(gens.len()));
        }
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.weight == 0 {
                return Err(FreeLieError::ZeroWeight(g.name.clone()));
            }
            if index.insert(g.name.clone(), i as Letter).is_some() {
                return Err(FreeLieError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(FreeLie(Arc::new(Inner {
            gens,
            index,
            window,
            memo: RwLock::new(HashMap::new()),
        })))
    }

    /// Same alphabet, different window. Content bases are window independent
    /// and are shared with the new handle.
    pub fn with_window(&self, window: TruncationWindow) -> Self {
        if window == self.0.window {
            return self.clone();
        }
        let memo = self.0.memo.read().unwrap().clone();
        FreeLie(Arc::new(Inner {
            gens: self.0.gens.clone(),
            index: self.0.index.clone(),
            window,
            memo: RwLock::new(memo),
        }))
    }

    pub fn window(&self) -> TruncationWindow {
        self.0.window
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.gens
    }

    pub fn generator(&self, letter: Letter) -> &Generator {
        &self.0.gens[letter as usize]
    }

    pub fn letter(&self, name: &str) -> Result<Letter, FreeLieError> {
        self.0
            .index
            .get(name)
            .copied()
            .ok_or_else(|| FreeLieError::UnknownGenerator(name.to_string()))
    }

    pub fn degree_of(&self, letter: Letter) -> u32 {
        self.0.gens[letter as usize].degree
    }

    pub fn weight_of(&self, letter: Letter) -> u32 {
        self.0.gens[letter as usize].weight
    }

    pub fn same_alphabet(&self, other: &FreeLie) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.gens == other.0.gens
    }

    pub fn word(&self, letters: Vec<Letter>) -> Word {
        let weight = letters.iter().map(|&l| self.weight_of(l)).sum();
        Word { weight, letters }
    }

    pub fn word_from_names(&self, names: &[&str]) -> Result<Word, FreeLieError> {
        let letters = names.iter().map(|n| self.letter(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.word(letters))
    }

    pub fn word_degree(&self, w: &Word) -> u32 {
        w.letters.iter().map(|&l| self.degree_of(l)).sum()
    }

    /// Whether a word survives truncation.
    pub fn in_window(&self, w: &Word) -> bool {
        w.weight <= self.0.window.max_weight && self.word_degree(w) <= self.0.window.max_degree
    }

    pub fn concat(&self, a: &Word, b: &Word) -> Word {
        let mut letters = Vec::with_capacity(a.len() + b.len());
        letters.extend_from_slice(&a.letters);
        letters.extend_from_slice(&b.letters);
        Word {
            weight: a.weight + b.weight,
            letters,
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters
            .iter()
            .map(|&l| self.0.gens[l as usize].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn zero(&self) -> TensorElement {
        TensorElement::zero(self)
    }

    pub fn one(&self) -> TensorElement {
        TensorElement::monomial(self, Word::empty(), crate::qlinalg::Rational::one())
    }

    /// The generator named `name` as a certified Lie element.
    pub fn gen(&self, name: &str) -> Result<LieElement, FreeLieError> {
        let l = self.letter(name)?;
        Ok(self.gen_letter(l))
    }

    pub fn gen_letter(&self, l: Letter) -> LieElement {
        let w = self.word(vec![l]);
        let t = if self.in_window(&w) {
            TensorElement::monomial(self, w, crate::qlinalg::Rational::one())
        } else {
            self.zero()
        };
        LieElement::certified_unchecked(t)
    }

    /// Multisets of letters (as sorted letter lists) with the given total
    /// weight and degree.
    pub fn contents(&self, weight: u32, degree: u32) -> Vec<Vec<Letter>> {
        fn rec(
            alg: &FreeLie,
            from: usize,
            weight: u32,
            degree: u32,
            cur: &mut Vec<Letter>,
            out: &mut Vec<Vec<Letter>>,
        ) {
            if weight == 0 {
                if degree == 0 && !cur.is_empty() {
                    out.push(cur.clone());
                }
                return;
            }
            for l in from..alg.0.gens.len() {
                let g = &alg.0.gens[l];
                if g.weight <= weight && g.degree <= degree {
                    cur.push(l as Letter);
                    rec(alg, l, weight - g.weight, degree - g.degree, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(self, 0, weight, degree, &mut Vec::new(), &mut out);
        out
    }

    /// Degrees `d ≤ max_degree` for which some word of weight `weight` exists.
    pub fn degrees_at_weight(&self, weight: u32) -> Vec<u32> {
        (0..=self.0.window.max_degree)
            .filter(|&d| !self.contents(weight, d).is_empty())
            .collect()
    }

    pub(crate) fn check_terms(&self, n: usize) {
        limits::check_terms(n);
    }
}
