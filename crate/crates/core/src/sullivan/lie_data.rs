use std::collections::BTreeMap;

use super::SullivanError;
use crate::dgl::DglPresentation;
use crate::freelie::{Letter, TensorElement, TruncationWindow};
use crate::qlinalg::{Echelon, Rational, SparseVector};

/// A finite-dimensional nilpotent graded Lie algebra, optionally with a
/// differential, given by structure constants on a named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentLieData {
    names: Vec<String>,
    degrees: Vec<u32>,
    brackets: Vec<Vec<SparseVector>>,
    diff: Option<Vec<SparseVector>>,
}

fn sign(negative: bool) -> Rational {
    Rational::sign(negative)
}

impl NilpotentLieData {
    /// Builds and validates. `brackets` may list any subset of ordered
    /// pairs; the rest are filled in by graded antisymmetry. Missing pairs
    /// bracket to zero.
    pub fn new(
        basis: Vec<(String, u32)>,
        brackets: impl IntoIterator<Item = ((usize, usize), SparseVector)>,
        diff: Option<Vec<SparseVector>>,
    ) -> Result<Self, SullivanError> {
        let n = basis.len();
        let (names, degrees): (Vec<String>, Vec<u32>) = basis.into_iter().unzip();
        let mut table: Vec<Vec<Option<SparseVector>>> = vec![vec![None; n]; n];
        for ((i, j), v) in brackets {
            if i >= n || j >= n || v.max_index().is_some_and(|k| k >= n) {
                return Err(SullivanError::Index(i.max(j)));
            }
            for &(k, _) in v.iter() {
                if degrees[k] != degrees[i] + degrees[j] {
                    return Err(SullivanError::BracketDegree(names[i].clone(), names[j].clone()));
                }
            }
            let mirrored = v.scale(&-sign(degrees[i] * degrees[j] % 2 == 1));
            for (slot, val) in [((i, j), v), ((j, i), mirrored)] {
                match &table[slot.0][slot.1] {
                    Some(old) if *old != val => {
                        return Err(SullivanError::Antisymmetry(names[i].clone(), names[j].clone()));
                    }
                    _ => table[slot.0][slot.1] = Some(val),
                }
            }
        }
        let brackets: Vec<Vec<SparseVector>> = table
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap_or_default).collect())
            .collect();
        let diff = match diff {
            Some(d) if d.iter().all(SparseVector::is_zero) => None,
            other => other,
        };
        let out = NilpotentLieData {
            names,
            degrees,
            brackets,
            diff,
        };
        out.validate()?;
        Ok(out)
    }

    /// The abelian Lie algebra on the given basis.
    pub fn abelian(basis: Vec<(String, u32)>) -> Self {
        Self::new(basis, [], None).expect("abelian data is always valid")
    }

    fn validate(&self) -> Result<(), SullivanError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (di, dj) = (self.degrees[i], self.degrees[j]);
                    let lhs = self.bracket_vec(&SparseVector::unit(i), &self.brackets[j][k]);
                    let rhs = self
                        .bracket_vec(&self.brackets[i][j], &SparseVector::unit(k))
                        .add_scaled(
                            &sign(di * dj % 2 == 1),
                            &self.bracket_vec(&SparseVector::unit(j), &self.brackets[i][k]),
                        );
                    if lhs != rhs {
                        return Err(SullivanError::Jacobi(
                            self.names[i].clone(),
                            self.names[j].clone(),
                            self.names[k].clone(),
                        ));
                    }
                }
            }
        }
        if !self.is_nilpotent() {
            return Err(SullivanError::NotNilpotent);
        }
        if let Some(d) = &self.diff {
            if d.len() != n {
                return Err(SullivanError::Index(d.len()));
            }
            for (i, v) in d.iter().enumerate() {
                for &(k, _) in v.iter() {
                    if k >= n {
                        return Err(SullivanError::Index(k));
                    }
                    if self.degrees[k] + 1 != self.degrees[i] {
                        return Err(SullivanError::DiffDegree(self.names[i].clone()));
                    }
                }
            }
            for (i, di) in d.iter().enumerate() {
                if !self.apply_diff(di).is_zero() {
                    return Err(SullivanError::DiffSquare(self.names[i].clone()));
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let lhs = self.apply_diff(&self.brackets[i][j]);
                    let rhs = self
                        .bracket_vec(&d[i], &SparseVector::unit(j))
                        .scale(&sign(self.degrees[j] % 2 == 1))
                        .add_scaled(&Rational::one(), &self.bracket_vec(&SparseVector::unit(i), &d[j]));
                    if lhs != rhs {
                        return Err(SullivanError::DiffDerivation(
                            self.names[i].clone(),
                            self.names[j].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn is_nilpotent(&self) -> bool {
        let n = self.dim();
        let mut current: Vec<SparseVector> = (0..n).map(SparseVector::unit).collect();
        for _ in 0..=n {
            if current.is_empty() {
                return true;
            }
            let mut next = Echelon::new(n);
            for x in &current {
                for i in 0..n {
                    next.insert(&self.bracket_vec(&SparseVector::unit(i), x));
                }
            }
            if next.rank() == current.len() {
                return false;
            }
            current = next.into_basis().vectors().to_vec();
        }
        current.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `[e_i, e_j]` in basis coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> &SparseVector {
        &self.brackets[i][j]
    }

    /// `∂e_i` in basis coordinates, if there is a differential.
    pub fn diff(&self, i: usize) -> Option<&SparseVector> {
        self.diff.as_ref().map(|d| &d[i])
    }

    pub fn has_differential(&self) -> bool {
        self.diff.is_some()
    }

    pub fn bracket_vec(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        let mut acc = SparseVector::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                acc = acc.add_scaled(&(a * b), &self.brackets[*i][*j]);
            }
        }
        acc
    }

    pub fn apply_diff(&self, x: &SparseVector) -> SparseVector {
        let mut acc = SparseVector::new();
        if let Some(d) = &self.diff {
            for (i, a) in x.iter() {
                acc = acc.add_scaled(a, &d[*i]);
            }
        }
        acc
    }

    /// The quotient of a dgl presentation by all elements of weight greater
    /// than `max_weight`, on its nested-bracket basis. Degrees are not
    /// truncated.
    pub fn from_presentation(p: &DglPresentation, max_weight: u32) -> Result<Self, SullivanError> {
        if let Some(e) = p.weight_violation() {
            return Err(e.into());
        }
        let top_degree = p.generators().iter().map(|g| g.degree).max().unwrap_or(0);
        let p = p.with_window(TruncationWindow::new(max_weight, max_weight * top_degree.max(1)));
        let alg = p.algebra().clone();
        let mut basis = Vec::new();
        let mut elements = Vec::new();
        let mut offsets: BTreeMap<Vec<Letter>, usize> = BTreeMap::new();
        for w in 1..=max_weight {
            for d in alg.degrees_at_weight(w) {
                for content in alg.contents(w, d) {
                    let slice = alg.content_slice(&content);
                    offsets.insert(content, basis.len());
                    for bw in slice.bracket_words() {
                        basis.push((alg.format_nested(bw), d));
                        elements.push(alg.nested_bracket(bw.letters()).into_value());
                    }
                }
            }
        }
        let coords = |t: &TensorElement| -> Result<SparseVector, SullivanError> {
            let mut out = Vec::new();
            for (content, comp) in t.content_components() {
                let slice = alg.content_slice(&content);
                let local = slice
                    .bracket_coordinates(&slice.vectorize(&comp))
                    .ok_or(SullivanError::NotLie)?;
                out.extend(local.iter().map(|(i, c)| (offsets[&content] + i, c.clone())));
            }
            Ok(SparseVector::from_pairs(out))
        };
        let n = elements.len();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i..n {
                let b = elements[i].try_commutator(&elements[j])?;
                brackets.push(((i, j), coords(&b)?));
            }
        }
        let diff = if p.has_zero_differential() {
            None
        } else {
            Some(
                elements
                    .iter()
                    .map(|e| coords(&p.derive_tensor(e)?))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        };
        Self::new(basis, brackets, diff)
    }
}
