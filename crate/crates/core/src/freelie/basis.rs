use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::tensor::write_term;
use super::{FreeLie, Letter, LieElement, TensorElement, Word};
use crate::qlinalg::{Echelon, Insertion, Rational, SparseVector, SubspaceBasis};

/// Lie basis data for one letter content (multiset of generators).
///
/// The tensor coordinates are the distinct permutations of the content in
/// word order; `basis` is the reduced echelon basis of the span of all nested
/// brackets `[g1,[g2,[…,gk]…]]`, and `bracket_words` lists the words whose
/// nested brackets were picked greedily as an (unreduced) basis for display.
#[derive(Debug)]
pub struct ContentSlice {
    content: Vec<Letter>,
    words: Vec<Word>,
    basis: SubspaceBasis,
    bracket_words: Vec<Word>,
    brackets: Echelon,
}

impl ContentSlice {
    fn build(alg: &FreeLie, content: &[Letter]) -> Self {
        let mut perm = content.to_vec();
        perm.sort_unstable();
        let mut words = Vec::new();
        loop {
            words.push(alg.word(perm.clone()));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        let mut brackets = Echelon::tracked(words.len());
        let mut span = Echelon::new(words.len());
        let mut bracket_words = Vec::new();
        for w in &words {
            let v = to_local(&words, &nested_bracket_terms(alg, w.letters()));
            if let Insertion::Pivot(_) = brackets.insert_tagged(&v, bracket_words.len()) {
                bracket_words.push(w.clone());
                span.insert(&v);
            }
        }
        ContentSlice {
            content: content.to_vec(),
            words,
            basis: span.into_basis(),
            bracket_words,
            brackets,
        }
    }

    pub fn content(&self) -> &[Letter] {
        &self.content
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn bracket_words(&self) -> &[Word] {
        &self.bracket_words
    }

    pub fn local_index(&self, w: &Word) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    /// Local coordinate vector of a tensor element supported on this content.
    pub fn vectorize(&self, t: &TensorElement) -> SparseVector {
        SparseVector::from_pairs(
            t.terms()
                .iter()
                .map(|(w, c)| (self.local_index(w).expect("word outside content slice"), c.clone())),
        )
    }

    pub fn element(&self, alg: &FreeLie, v: &SparseVector) -> TensorElement {
        TensorElement::from_terms(alg, v.iter().map(|(i, c)| (self.words[*i].clone(), c.clone())))
    }

    /// Coordinates on the nested brackets of `bracket_words`, if `v` is Lie.
    pub fn bracket_coordinates(&self, v: &SparseVector) -> Option<SparseVector> {
        let mut e = self.brackets.clone();
        match e.insert_tagged(v, usize::MAX) {
            Insertion::Relation(rel) => {
                // rel = e_MAX + Σ c_i e_i, so v = -Σ c_i bracket_i.
                Some(SparseVector::from_pairs(
                    rel.iter().filter(|(i, _)| *i != usize::MAX).map(|(i, c)| (*i, -c)),
                ))
            }
            Insertion::Pivot(_) => None,
        }
    }
}

fn next_permutation(v: &mut [Letter]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Terms of the nested bracket `[l1,[l2,[…,lk]…]]`, untruncated.
fn nested_bracket_terms(alg: &FreeLie, letters: &[Letter]) -> BTreeMap<Vec<Letter>, Rational> {
    let mut acc: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
    let Some((&last, rest)) = letters.split_last() else {
        return acc;
    };
    acc.insert(vec![last], Rational::one());
    let mut inner_deg = alg.degree_of(last);
    for &l in rest.iter().rev() {
        let dl = alg.degree_of(l);
        let odd = dl % 2 == 1 && inner_deg % 2 == 1;
        let mut next: BTreeMap<Vec<Letter>, Rational> = BTreeMap::new();
        for (w, c) in &acc {
            let mut left = Vec::with_capacity(w.len() + 1);
            left.push(l);
            left.extend_from_slice(w);
            *next.entry(left).or_default() += c;
            let mut right = w.clone();
            right.push(l);
            let c2 = if odd { c.clone() } else { -c };
            *next.entry(right).or_default() += &c2;
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
        inner_deg += dl;
    }
    acc
}

fn to_local(words: &[Word], terms: &BTreeMap<Vec<Letter>, Rational>) -> SparseVector {
    SparseVector::from_pairs(terms.iter().map(|(w, c)| {
        let idx = words
            .binary_search_by(|x| x.letters().cmp(w.as_slice()))
            .expect("bracket word outside content");
        (idx, c.clone())
    }))
}

/// Lie basis of one (weight, degree) slice in global word coordinates.
#[derive(Debug, Clone)]
pub struct LieSlice {
    pub weight: u32,
    pub degree: u32,
    /// All words of the slice, in word order; vector indices refer to these.
    pub words: Vec<Word>,
    pub basis: SubspaceBasis,
}

impl LieSlice {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

impl FreeLie {
    /// Memoised content slice. Safe for concurrent readers; a miss computes
    /// outside the lock and inserts under the write lock.
    pub fn content_slice(&self, content: &[Letter]) -> Arc<ContentSlice> {
        let mut key = content.to_vec();
        key.sort_unstable();
        if let Some(s) = self.0.memo.read().unwrap().get(&key) {
            return s.clone();
        }
        let slice = Arc::new(ContentSlice::build(self, &key));
        self.0.memo.write().unwrap().entry(key).or_insert(slice).clone()
    }

    /// Lie basis of the (weight, degree) slice as a subspace of the span of
    /// all words with that weight and degree.
    pub fn lie_basis(&self, weight: u32, degree: u32) -> LieSlice {
        let slices: Vec<_> = self
            .contents(weight, degree)
            .iter()
            .map(|c| self.content_slice(c))
            .collect();
        let mut words: Vec<Word> = slices.iter().flat_map(|s| s.words().iter().cloned()).collect();
        words.sort();
        let mut rows = Vec::new();
        for s in &slices {
            for v in s.basis().vectors() {
                rows.push(SparseVector::from_pairs(
                    v.iter()
                        .map(|(i, c)| (words.binary_search(&s.words()[*i]).unwrap(), c.clone())),
                ));
            }
        }
        rows.sort_by_key(|r| r.leading().unwrap().0);
        let basis = SubspaceBasis::span(words.len(), rows.iter());
        LieSlice {
            weight,
            degree,
            words,
            basis,
        }
    }

    /// Dimension of the (weight, degree) Lie slice.
    pub fn lie_dim(&self, weight: u32, degree: u32) -> usize {
        self.contents(weight, degree)
            .iter()
            .map(|c| self.content_slice(c).dim())
            .sum()
    }

    /// Basis of the (weight, degree) Lie slice as tensor elements, ordered by
    /// leading (smallest) word.
    pub fn lie_basis_elements(&self, weight: u32, degree: u32) -> Vec<TensorElement> {
        let mut out: Vec<(Word, TensorElement)> = Vec::new();
        for c in self.contents(weight, degree) {
            let s = self.content_slice(&c);
            for v in s.basis().vectors() {
                let lead = s.words()[v.leading().unwrap().0].clone();
                out.push((lead, s.element(self, v)));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out.into_iter().map(|(_, t)| t).collect()
    }

    /// The nested bracket `[l1,[l2,[…,lk]…]]` as a certified element.
    pub fn nested_bracket(&self, letters: &[Letter]) -> LieElement {
        let terms = nested_bracket_terms(self, letters);
        LieElement::certified_unchecked(TensorElement::from_terms(
            self,
            terms.into_iter().map(|(w, c)| (self.word(w), c)),
        ))
    }

    pub fn format_nested(&self, w: &Word) -> String {
        let names: Vec<&str> = w.letters().iter().map(|&l| self.generator(l).name.as_str()).collect();
        let mut s = String::new();
        for (i, n) in names.iter().enumerate() {
            if i + 1 < names.len() {
                write!(s, "[{n},").unwrap();
            } else {
                s.push_str(n);
            }
        }
        s.push_str(&"]".repeat(names.len().saturating_sub(1)));
        s
    }
}

/// Certifies `t` as a Lie element: every content component must lie in the
/// span of nested brackets of that content.
pub fn certify_lie(t: &TensorElement) -> Option<LieElement> {
    let alg = t.algebra();
    for (content, comp) in t.content_components() {
        if content.is_empty() {
            return None;
        }
        let s = alg.content_slice(&content);
        if !s.basis().contains(&s.vectorize(&comp)) {
            return None;
        }
    }
    Some(LieElement::certified_unchecked(t.clone()))
}

/// Free-function form of [`FreeLie::lie_basis`].
pub fn lie_basis(gens: &[super::Generator], weight: u32, degree: u32) -> LieSlice {
    let alg =
        FreeLie::new(gens.to_vec(), super::TruncationWindow::new(weight, degree)).expect("invalid generator list");
    alg.lie_basis(weight, degree)
}

/// Renders a Lie element as a combination of nested brackets, e.g.
/// `a + b + 1/2 [a,b]`. Returns `None` for non-Lie input.
pub fn format_lie(t: &TensorElement) -> Option<String> {
    let alg = t.algebra();
    if t.is_zero() {
        return Some("0".to_string());
    }
    let mut comps: Vec<(Word, Vec<Letter>, TensorElement)> = t
        .content_components()
        .into_iter()
        .map(|(c, e)| (e.terms().keys().next().unwrap().clone(), c, e))
        .collect();
    comps.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = String::new();
    let mut first = true;
    for (_, content, comp) in comps {
        if content.is_empty() {
            return None;
        }
        let s = alg.content_slice(&content);
        let coords = s.bracket_coordinates(&s.vectorize(&comp))?;
        for (i, c) in coords.iter() {
            write_term(&mut out, first, c, &alg.format_nested(&s.bracket_words()[*i])).unwrap();
            first = false;
        }
    }
    Some(out)
}
