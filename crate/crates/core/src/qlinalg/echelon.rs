use std::collections::{BTreeMap, HashMap};

use super::{LinalgError, Rational, SparseMatrix, SparseVector};

/// Result of feeding a vector to a tracked [`Echelon`].
#[derive(Clone, Debug)]
pub enum Insertion {
    /// The vector was independent and now owns the given pivot column.
    Pivot(usize),
    /// The vector was dependent; the payload is a relation among the inserted
    /// tags (a sparse vector indexed by tag) that sums to zero.
    Relation(SparseVector),
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVector,
    /// Combination of input tags producing `vec` (only when tracking).
    combo: SparseVector,
}

/// Incremental row-echelon form.
///
/// Rows are kept normalised (pivot coefficient 1) but only semi-reduced;
/// [`Echelon::into_basis`] performs the final back-substitution.
#[derive(Clone, Debug)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<Row>,
    pivot_row: HashMap<usize, usize>,
    track: bool,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Echelon {
            ambient,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
            track: false,
        }
    }

    /// Echelon that remembers how each row was formed from inserted tags.
    pub fn tracked(ambient: usize) -> Self {
        Echelon {
            track: true,
            ..Self::new(ambient)
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.vec.leading().map(|(p, _)| p).unwrap())
    }

    fn reduce_full(&self, v: &SparseVector, combo: Option<SparseVector>) -> (SparseVector, Option<SparseVector>) {
        if self.rows.is_empty() {
            return (v.clone(), combo);
        }
        let mut work: BTreeMap<usize, Rational> = v.iter().cloned().collect();
        let mut combo = combo;
        let mut cursor = 0usize;
        loop {
            let next = work.range(cursor..).next().map(|(k, c)| (*k, c.clone()));
            let Some((col, coef)) = next else { break };
            cursor = col + 1;
            let Some(&ri) = self.pivot_row.get(&col) else { continue };
            let row = &self.rows[ri];
            let neg = -&coef;
            for (j, x) in row.vec.iter() {
                let e = work.entry(*j).or_default();
                *e += &(&neg * x);
                if e.is_zero() {
                    work.remove(j);
                }
            }
            if let Some(c) = combo.as_mut() {
                *c = c.add_scaled(&neg, &row.combo);
            }
        }
        (SparseVector::from_map(work), combo)
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        self.reduce_full(v, None).0
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true if it increased the rank.
    pub fn insert(&mut self, v: &SparseVector) -> bool {
        let (r, _) = self.reduce_full(v, None);
        self.push_reduced(r, SparseVector::new())
    }

    /// Inserts `v` labelled with `tag` (tracked echelons only).
    pub fn insert_tagged(&mut self, v: &SparseVector, tag: usize) -> Insertion {
        assert!(self.track, "insert_tagged on an untracked echelon");
        let (r, combo) = self.reduce_full(v, Some(SparseVector::unit(tag)));
        let combo = combo.unwrap();
        if r.is_zero() {
            return Insertion::Relation(combo);
        }
        let pivot = r.leading().unwrap().0;
        self.push_reduced(r, combo);
        Insertion::Pivot(pivot)
    }

    fn push_reduced(&mut self, r: SparseVector, combo: SparseVector) -> bool {
        let Some((pivot, lead)) = r.leading() else {
            return false;
        };
        debug_assert!(pivot < self.ambient, "vector exceeds ambient dimension");
        let inv = lead.recip();
        let vec = r.scale(&inv);
        let combo = if self.track { combo.scale(&inv) } else { combo };
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(Row { vec, combo });
        true
    }

    /// Fully reduced echelon basis of the row span.
    pub fn into_basis(self) -> SubspaceBasis {
        let mut rows: Vec<SparseVector> = self.rows.into_iter().map(|r| r.vec).collect();
        rows.sort_by_key(|r| r.leading().unwrap().0);
        // Back-substitute from the bottom: later rows are already reduced.
        let mut reduced: Vec<SparseVector> = Vec::with_capacity(rows.len());
        let mut tail = Echelon::new(self.ambient);
        for r in rows.into_iter().rev() {
            let (p, _) = r.leading().unwrap();
            let rest = SparseVector::from_pairs(r.iter().filter(|(j, _)| *j != p).cloned());
            let rest = tail.reduce(&rest);
            let full = rest.add_scaled(&Rational::one(), &SparseVector::unit(p));
            tail.pivot_row.insert(p, tail.rows.len());
            tail.rows.push(Row {
                vec: full.clone(),
                combo: SparseVector::new(),
            });
            reduced.push(full);
        }
        reduced.reverse();
        SubspaceBasis {
            ambient: self.ambient,
            vectors: reduced,
        }
    }

    pub fn basis(&self) -> SubspaceBasis {
        self.clone().into_basis()
    }
}

/// A subspace given by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<SparseVector>,
}

impl SubspaceBasis {
    pub fn empty(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            vectors: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis {
            ambient,
            vectors: (0..ambient).map(SparseVector::unit).collect(),
        }
    }

    /// Echelon basis of the span of arbitrary vectors.
    pub fn span<'a, I: IntoIterator<Item = &'a SparseVector>>(ambient: usize, vectors: I) -> Self {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.insert(v);
        }
        e.into_basis()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.vectors.iter().map(|v| v.leading().unwrap().0).collect()
    }

    pub fn to_matrix(&self) -> SparseMatrix {
        SparseMatrix::from_rows(self.ambient, &self.vectors)
    }

    fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.ambient);
        for v in &self.vectors {
            e.pivot_row.insert(v.leading().unwrap().0, e.rows.len());
            e.rows.push(Row {
                vec: v.clone(),
                combo: SparseVector::new(),
            });
        }
        e
    }

    /// Remainder of `v` modulo this subspace (canonical: zero on all pivots).
    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        self.echelon().reduce(v)
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Smallest subspace containing both.
    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        assert_eq!(self.ambient, other.ambient);
        SubspaceBasis::span(self.ambient, self.vectors.iter().chain(other.vectors.iter()))
    }

    /// Canonical complement of `sub` inside `self`: the reduced echelon basis of
    /// `self` modulo `sub`, with every vector zero on `sub`'s pivots.
    pub fn complement_of(&self, sub: &SubspaceBasis) -> SubspaceBasis {
        let e = sub.echelon();
        let mut out = Echelon::new(self.ambient);
        for v in &self.vectors {
            out.insert(&e.reduce(v));
        }
        out.into_basis()
    }
}

/// Reduced row-echelon basis of the row space and the rank.
pub fn rref(m: &SparseMatrix) -> (SubspaceBasis, usize) {
    let mut e = Echelon::new(m.cols());
    for r in m.row_vectors() {
        e.insert(&r);
    }
    let rank = e.rank();
    (e.into_basis(), rank)
}

/// Basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> SubspaceBasis {
    let mut e = Echelon::tracked(m.rows());
    let mut relations = Echelon::new(m.cols());
    for (j, c) in m.column_vectors().iter().enumerate() {
        if let Insertion::Relation(rel) = e.insert_tagged(c, j) {
            relations.insert(&rel);
        }
    }
    relations.into_basis()
}

/// Coordinates of `v` with respect to `b`, or `None` when `v ∉ span(b)`.
pub fn membership(v: &SparseVector, b: &SubspaceBasis) -> Result<Option<Vec<Rational>>, LinalgError> {
    if let Some(i) = v.max_index() {
        if i >= b.ambient() {
            return Err(LinalgError::DimensionMismatch {
                expected: b.ambient(),
                found: i + 1,
            });
        }
    }
    // In reduced echelon form the coordinate on row k is v's pivot entry.
    let coords: Vec<Rational> = b.vectors().iter().map(|r| v.get(r.leading().unwrap().0)).collect();
    let mut rem = v.clone();
    for (c, r) in coords.iter().zip(b.vectors()) {
        rem = rem.add_scaled(&-c, r);
    }
    Ok(rem.is_zero().then_some(coords))
}

/// `dim(ambient) - dim(sub)`, after checking that `sub ⊆ ambient`.
pub fn quotient_dims(ambient: &SubspaceBasis, sub: &SubspaceBasis) -> Result<usize, LinalgError> {
    if ambient.ambient() != sub.ambient() {
        return Err(LinalgError::DimensionMismatch {
            expected: ambient.ambient(),
            found: sub.ambient(),
        });
    }
    for (i, v) in sub.vectors().iter().enumerate() {
        if membership(v, ambient)?.is_none() {
            return Err(LinalgError::NotContained { index: i });
        }
    }
    Ok(ambient.dim() - sub.dim())
}
