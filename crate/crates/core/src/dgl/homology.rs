use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use super::{DglError, DglPresentation};
use crate::freelie::{FreeLie, LieElement, TensorElement, TruncationWindow, Word};
use crate::qlinalg::{Echelon, Insertion, SparseMatrix, SparseVector, SubspaceBasis};

/// One degree of the truncated chain complex, in word coordinates.
#[derive(Clone, Debug)]
pub struct ChainSlice {
    pub degree: u32,
    /// Every word of a Lie slice of this degree with weight ≤ N, sorted.
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
    pub lie_basis: Vec<TensorElement>,
    /// ∂ on `lie_basis` (columns) in the word coordinates of degree − 1.
    pub boundary_out: SparseMatrix,
    pub cycles: SubspaceBasis,
    /// Image of ∂ from degree + 1; empty in the top degree.
    pub boundaries: SubspaceBasis,
}

impl ChainSlice {
    /// Word coordinates of `t`, or `None` if it has a term outside the slice.
    pub fn vectorize(&self, t: &TensorElement) -> Option<SparseVector> {
        let mut pairs = Vec::with_capacity(t.len());
        for (w, c) in t.terms() {
            pairs.push((*self.index.get(w)?, c.clone()));
        }
        Some(SparseVector::from_pairs(pairs))
    }

    pub fn element(&self, alg: &FreeLie, v: &SparseVector) -> TensorElement {
        TensorElement::from_terms(alg, v.iter().map(|(i, c)| (self.words[*i].clone(), c.clone())))
    }

    pub fn homology_dim(&self) -> usize {
        self.cycles.dim() - self.boundaries.dim()
    }

    /// Canonical representatives: the cycles reduced modulo boundaries.
    pub fn representatives(&self) -> SubspaceBasis {
        self.cycles.complement_of(&self.boundaries)
    }
}

/// The weight-≤N quotient of a presentation as a chain complex in degrees
/// `0..=D`. Homology is meaningful in degrees `0..D` only.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    presentation: DglPresentation,
    slices: Vec<ChainSlice>,
}

impl ChainComplex {
    pub fn build(p: &DglPresentation) -> Result<Self, DglError> {
        if let Some(e) = p.weight_violation() {
            return Err(e);
        }
        let alg = p.algebra();
        let window = alg.window();
        let mut slices: Vec<ChainSlice> = (0..=window.max_degree).map(|d| empty_slice(alg, d)).collect();
        for d in 0..=window.max_degree as usize {
            let vecs: Vec<SparseVector> = slices[d]
                .lie_basis
                .iter()
                .map(|t| slices[d].vectorize(t).expect("basis in slice"))
                .collect();
            if d == 0 {
                slices[0].cycles = SubspaceBasis::span(slices[0].words.len(), vecs.iter());
                continue;
            }
            let (below, here) = slices.split_at_mut(d);
            let target = &below[d - 1];
            let here = &mut here[0];
            let mut images = Vec::with_capacity(here.lie_basis.len());
            let mut tracked = Echelon::tracked(target.words.len());
            let mut kernel = Vec::new();
            for (j, t) in here.lie_basis.iter().enumerate() {
                let img = p.derive_tensor(t)?;
                let v = target.vectorize(&img).expect("boundary stays in slice");
                if let Insertion::Relation(rel) = tracked.insert_tagged(&v, j) {
                    let mut z = SparseVector::new();
                    for (i, c) in rel.iter() {
                        z = z.add_scaled(c, &vecs[*i]);
                    }
                    kernel.push(z);
                }
                images.push(v);
            }
            here.boundary_out = SparseMatrix::from_columns(target.words.len(), &images);
            here.cycles = SubspaceBasis::span(here.words.len(), kernel.iter());
            below[d - 1].boundaries = tracked.basis();
        }
        Ok(ChainComplex {
            presentation: p.clone(),
            slices,
        })
    }

    pub fn presentation(&self) -> &DglPresentation {
        &self.presentation
    }

    pub fn window(&self) -> TruncationWindow {
        self.presentation.window()
    }

    pub fn valid_degrees(&self) -> Range<u32> {
        0..self.window().max_degree
    }

    pub fn slice(&self, degree: u32) -> &ChainSlice {
        &self.slices[degree as usize]
    }

    pub fn dims(&self) -> BTreeMap<u32, usize> {
        self.valid_degrees()
            .map(|d| (d, self.slice(d).homology_dim()))
            .collect()
    }

    pub fn representatives(&self, degree: u32) -> Vec<LieElement> {
        let s = self.slice(degree);
        let alg = self.presentation.algebra();
        s.representatives()
            .vectors()
            .iter()
            .map(|v| crate::freelie::certify_lie(&s.element(alg, v)).expect("cycle is Lie"))
            .collect()
    }
}

fn empty_slice(alg: &FreeLie, degree: u32) -> ChainSlice {
    let max_weight = alg.window().max_weight;
    let mut words = Vec::new();
    let mut lie_basis = Vec::new();
    for w in 1..=max_weight {
        for c in alg.contents(w, degree) {
            words.extend(alg.content_slice(&c).words().iter().cloned());
        }
        lie_basis.extend(alg.lie_basis_elements(w, degree));
    }
    words.sort();
    let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let n = words.len();
    ChainSlice {
        degree,
        words,
        index,
        lie_basis,
        boundary_out: SparseMatrix::zeros(0, 0),
        cycles: SubspaceBasis::empty(n),
        boundaries: SubspaceBasis::empty(n),
    }
}

/// Homology of a presentation on its window, with representatives and
/// stabilization flags relative to the window one weight lower.
#[derive(Clone, Debug)]
pub struct HomologyTable {
    pub window: TruncationWindow,
    pub valid_degrees: Range<u32>,
    pub dims: BTreeMap<u32, usize>,
    pub representatives: BTreeMap<u32, Vec<LieElement>>,
    pub stabilized: BTreeMap<u32, bool>,
}

pub fn homology(p: &DglPresentation) -> Result<HomologyTable, DglError> {
    let complex = ChainComplex::build(p)?;
    let window = complex.window();
    let lower = if window.max_weight > 1 {
        let w = TruncationWindow::new(window.max_weight - 1, window.max_degree);
        ChainComplex::build(&p.with_window(w))?.dims()
    } else {
        complex.valid_degrees().map(|d| (d, 0)).collect()
    };
    let dims = complex.dims();
    let stabilized = dims.iter().map(|(d, n)| (*d, lower.get(d) == Some(n))).collect();
    let representatives = complex
        .valid_degrees()
        .map(|d| (d, complex.representatives(d)))
        .collect();
    Ok(HomologyTable {
        window,
        valid_degrees: complex.valid_degrees(),
        dims,
        representatives,
        stabilized,
    })
}

/// Dimensions of the indecomposables `H/[H,H]` per valid degree.
pub fn indecomposables(complex: &ChainComplex) -> BTreeMap<u32, usize> {
    let p = complex.presentation();
    let alg = p.algebra();
    let gens: Vec<LieElement> = (0..alg.generators().len())
        .filter(|&l| alg.degree_of(l as u16) == 0)
        .map(|l| alg.gen_letter(l as u16))
        .collect();
    let reps: BTreeMap<u32, Vec<LieElement>> = complex
        .valid_degrees()
        .map(|d| (d, complex.representatives(d)))
        .collect();
    let mut out = BTreeMap::new();
    for d in complex.valid_degrees() {
        let s = complex.slice(d);
        let mut e = Echelon::new(s.words.len());
        for b in s.boundaries.vectors() {
            e.insert(b);
        }
        let base = e.rank();
        let mut push = |x: LieElement| {
            let v = s.vectorize(x.value()).expect("bracket stays in slice");
            e.insert(&v);
        };
        for g in &gens {
            for r in &reps[&d] {
                push(g.bracket(r).expect("same algebra"));
            }
        }
        for i in 1..=d / 2 {
            for a in &reps[&i] {
                for b in &reps[&(d - i)] {
                    push(a.bracket(b).expect("same algebra"));
                }
            }
        }
        out.insert(d, s.homology_dim() - (e.rank() - base));
    }
    out
}
