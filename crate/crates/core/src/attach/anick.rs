use super::AttachError;
use crate::freelie::{Letter, TensorElement, Word};

/// Why a family of leading words fails the criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnickFailure {
    /// Leading word `inner` occurs as a contiguous subword of `outer`.
    Submonomial { inner: usize, outer: usize },
    /// A proper suffix of `left` of length `overlap` is a proper prefix of
    /// `right`.
    Overlap { left: usize, right: usize, overlap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnickCertificate {
    /// Leading word of each relator, in input order.
    pub leading: Vec<Word>,
    /// `None` means the criterion is satisfied.
    pub failure: Option<AnickFailure>,
}

impl AnickCertificate {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Checks the two conditions on a family of words: no word is a subword of
/// another, and no proper suffix of one is a proper prefix of another
/// (including the word itself when `include_self` is set).
pub fn anick_words(words: &[&[Letter]], include_self: bool) -> Option<AnickFailure> {
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if i != j && contains(b, a) {
                return Some(AnickFailure::Submonomial { inner: i, outer: j });
            }
        }
    }
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if i == j && !include_self {
                continue;
            }
            let max = a.len().min(b.len());
            for k in 1..max {
                if a[a.len() - k..] == b[..k] {
                    return Some(AnickFailure::Overlap {
                        left: i,
                        right: j,
                        overlap: k,
                    });
                }
            }
        }
    }
    None
}

/// Leading words under deg-lex (weight, then length, then lexicographic
/// with `order` listing generators from highest to lowest), followed by
/// [`anick_words`].
pub fn inert_anick(
    relators: &[TensorElement],
    order: &[Letter],
    include_self_overlap: bool,
) -> Result<AnickCertificate, AttachError> {
    let mut rank = Vec::new();
    if let Some(t) = relators.first() {
        let n = t.algebra().generators().len();
        rank = vec![usize::MAX; n];
        for (pos, &l) in order.iter().enumerate() {
            if (l as usize) >= n || rank[l as usize] != usize::MAX {
                return Err(AttachError::BadOrder);
            }
            rank[l as usize] = order.len() - 1 - pos;
        }
        if rank.contains(&usize::MAX) {
            return Err(AttachError::BadOrder);
        }
    }
    let mut leading = Vec::with_capacity(relators.len());
    for (i, t) in relators.iter().enumerate() {
        let w = t
            .terms()
            .keys()
            .max_by_key(|w| {
                let ranks: Vec<usize> = w.letters().iter().map(|&l| rank[l as usize]).collect();
                (w.weight(), w.len(), ranks)
            })
            .ok_or(AttachError::ZeroRelator(i))?;
        leading.push(w.clone());
    }
    let slices: Vec<&[Letter]> = leading.iter().map(|w| w.letters()).collect();
    let failure = anick_words(&slices, include_self_overlap);
    Ok(AnickCertificate { leading, failure })
}
