//! Cell attachments and three inertness tests: surjectivity in homology,
//! consistency of quotient dimensions, and the leading-word criterion.

mod anick;

use std::collections::BTreeMap;
use std::fmt;

pub use anick::{anick_words, inert_anick, AnickCertificate, AnickFailure};

use crate::dgl::{ChainComplex, DglError, DglPresentation};
use crate::freelie::{certify_lie, FreeLieError, Generator, LieElement, TensorElement, TruncationWindow};
use crate::qlinalg::{Echelon, SparseVector, SubspaceBasis};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AttachError {
    #[error(transparent)]
    Dgl(#[from] DglError),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error("cell name `{0}` is already used")]
    NameCollision(String),
    #[error("target of cell `{0}` is not a Lie element")]
    NotLie(String),
    #[error("target of cell `{cell}` is not a cycle: ∂ = {residual}")]
    NotCycle { cell: String, residual: String },
    #[error("cell `{cell}` of degree {degree} needs a target of degree {}, found {found}", degree - 1)]
    DegreeMismatch { cell: String, degree: u32, found: u32 },
    #[error("cell `{0}` must have degree ≥ 1")]
    CellDegree(String),
    #[error("quotient consistency needs a base with zero differential")]
    NonzeroBaseDifferential,
    #[error("relator {0} is zero")]
    ZeroRelator(usize),
    #[error("generator order must list every generator exactly once")]
    BadOrder,
}

/// One cell: a new generator whose differential is the target.
#[derive(Clone, Debug)]
pub struct Cell {
    pub name: String,
    pub degree: u32,
    pub target: TensorElement,
    /// Filtration weight of the new generator; defaults to the lowest weight
    /// occurring in the target (1 for a zero target).
    pub weight: Option<u32>,
}

impl Cell {
    pub fn new(name: impl Into<String>, degree: u32, target: TensorElement) -> Self {
        Cell {
            name: name.into(),
            degree,
            target,
            weight: None,
        }
    }

    pub fn with_weight(mut self, weight: u32) -> Self {
        self.weight = Some(weight);
        self
    }

    fn resolved_weight(&self) -> u32 {
        self.weight
            .unwrap_or_else(|| self.target.min_weight().unwrap_or(1).max(1))
    }
}

#[derive(Clone, Debug, Default)]
pub struct AttachingMap {
    pub cells: Vec<Cell>,
}

impl AttachingMap {
    pub fn new(cells: Vec<Cell>) -> Self {
        AttachingMap { cells }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// `base ⨿ L(cells)` with `∂(cell) = target`. Base letters keep their
/// indices, so base elements transport verbatim.
pub fn attach_cells(base: &DglPresentation, g: &AttachingMap) -> Result<DglPresentation, AttachError> {
    if g.is_empty() {
        return Ok(base.clone());
    }
    let alg = base.algebra();
    let mut gens = Vec::new();
    let mut diffs = Vec::new();
    for c in &g.cells {
        if alg.letter(&c.name).is_ok() || gens.iter().any(|x: &Generator| x.name == c.name) {
            return Err(AttachError::NameCollision(c.name.clone()));
        }
        if c.degree == 0 {
            return Err(AttachError::CellDegree(c.name.clone()));
        }
        if !alg.same_alphabet(c.target.algebra()) {
            return Err(DglError::ForeignElement.into());
        }
        let t = c.target.rewindow(alg);
        if let Some(w) = t
            .terms()
            .keys()
            .map(|w| alg.word_degree(w))
            .find(|&d| d + 1 != c.degree)
        {
            return Err(AttachError::DegreeMismatch {
                cell: c.name.clone(),
                degree: c.degree,
                found: w,
            });
        }
        if certify_lie(&t).is_none() {
            return Err(AttachError::NotLie(c.name.clone()));
        }
        let dt = base.derive_tensor(&t)?;
        if !dt.is_zero() {
            return Err(AttachError::NotCycle {
                cell: c.name.clone(),
                residual: dt.to_string(),
            });
        }
        gens.push(Generator::new(c.name.clone(), c.degree).with_weight(c.resolved_weight()));
        diffs.push((c.name.clone(), t));
    }
    Ok(base.extend(gens, diffs)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InertnessStatus {
    InertUpToWindow,
    NotInert,
    Inconclusive,
}

impl fmt::Display for InertnessStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InertnessStatus::InertUpToWindow => "inert-up-to-window",
            InertnessStatus::NotInert => "not-inert",
            InertnessStatus::Inconclusive => "inconclusive",
        })
    }
}

/// A degree in which `H(base) → H(attached)` misses classes.
#[derive(Clone, Debug)]
pub struct FailingDegree {
    pub degree: u32,
    pub cokernel_dim: usize,
    /// Cycles of the attached presentation spanning the cokernel, reduced
    /// modulo boundaries and the image.
    pub witnesses: Vec<LieElement>,
    /// The cokernel dimension is known to be final (see [`inert_homological`]).
    pub stabilized: bool,
}

#[derive(Clone, Debug)]
pub struct InertnessVerdict {
    pub window: TruncationWindow,
    pub status: InertnessStatus,
    pub failing: Vec<FailingDegree>,
    /// Whether the classes of the cell targets are linearly independent in
    /// the homology of the base.
    pub injective: bool,
}

/// Whether every differential is homogeneous of its generator's weight.
/// Homology then splits by weight and truncation is exact in every weight
/// kept.
fn weight_homogeneous(p: &DglPresentation) -> bool {
    p.generators().iter().enumerate().all(|(l, g)| {
        p.diff_of(l as u16)
            .value()
            .terms()
            .keys()
            .all(|w| w.weight() == g.weight)
    })
}

/// Cokernel of `H(base) → H(ext)` per valid degree, as canonical witness
/// bases in the word coordinates of `ext`.
fn cokernels(base: &ChainComplex, ext: &ChainComplex) -> BTreeMap<u32, SubspaceBasis> {
    let balg = base.presentation().algebra();
    let ealg = ext.presentation().algebra();
    let mut out = BTreeMap::new();
    for d in ext.valid_degrees() {
        let bs = base.slice(d);
        let es = ext.slice(d);
        let mut hit = Echelon::new(es.words.len());
        for b in es.boundaries.vectors() {
            hit.insert(b);
        }
        for r in bs.representatives().vectors() {
            let t = bs.element(balg, r).transport(ealg, &|l| l);
            hit.insert(&es.vectorize(&t).expect("base cycle inside extension slice"));
        }
        out.insert(d, es.cycles.complement_of(&hit.into_basis()));
    }
    out
}

/// Compares `H(base)` with `H(ext)` where `ext` extends `base` by new
/// generators. `targets` are used only for the injectivity flag.
pub fn compare_homology(
    base: &DglPresentation,
    ext: &DglPresentation,
    targets: &[TensorElement],
) -> Result<InertnessVerdict, AttachError> {
    let window = ext.window();
    let bc = ChainComplex::build(base)?;
    let ec = ChainComplex::build(ext)?;
    let cok = cokernels(&bc, &ec);
    let exact = weight_homogeneous(base) && weight_homogeneous(ext);
    let lower = if exact || cok.values().all(|c| c.is_empty()) {
        None
    } else if window.max_weight > 1 {
        let w = TruncationWindow::new(window.max_weight - 1, window.max_degree);
        let lb = ChainComplex::build(&base.with_window(w))?;
        let le = ChainComplex::build(&ext.with_window(w))?;
        Some(cokernels(&lb, &le))
    } else {
        Some(cok.keys().map(|d| (*d, SubspaceBasis::empty(0))).collect())
    };
    let ealg = ext.algebra();
    let mut failing = Vec::new();
    for (d, c) in &cok {
        if c.is_empty() {
            continue;
        }
        let stabilized = match &lower {
            None => true,
            Some(l) => l.get(d).map(|x| x.dim()) == Some(c.dim()),
        };
        let s = ec.slice(*d);
        failing.push(FailingDegree {
            degree: *d,
            cokernel_dim: c.dim(),
            witnesses: c
                .vectors()
                .iter()
                .map(|v| certify_lie(&s.element(ealg, v)).expect("cycle is Lie"))
                .collect(),
            stabilized,
        });
    }
    let status = if failing.is_empty() {
        InertnessStatus::InertUpToWindow
    } else if failing.iter().any(|f| f.stabilized) {
        InertnessStatus::NotInert
    } else {
        InertnessStatus::Inconclusive
    };
    Ok(InertnessVerdict {
        window,
        status,
        failing,
        injective: targets_independent(&bc, targets),
    })
}

/// Whether the target classes are linearly independent in `H(base)`.
fn targets_independent(base: &ChainComplex, targets: &[TensorElement]) -> bool {
    let alg = base.presentation().algebra();
    let mut by_degree: BTreeMap<u32, Vec<SparseVector>> = BTreeMap::new();
    for t in targets {
        let t = t.rewindow(alg);
        let Some(d) = t.homogeneous_degree() else {
            return false;
        };
        if d > alg.window().max_degree {
            return false;
        }
        match base.slice(d).vectorize(&t) {
            Some(v) => by_degree.entry(d).or_default().push(v),
            None => return false,
        }
    }
    by_degree.iter().all(|(d, vs)| {
        let s = base.slice(*d);
        let mut e = Echelon::new(s.words.len());
        for b in s.boundaries.vectors() {
            e.insert(b);
        }
        vs.iter().all(|v| e.insert(v))
    })
}

/// Homological inertness test on `window`: `H(base) → H(base ⨿ cells)` must
/// be onto in every valid degree.
///
/// A failing degree is stabilized when its cokernel has the same dimension
/// one weight lower, or when both differentials are weight homogeneous (then
/// homology splits by weight and every class seen in the window is final).
pub fn inert_homological(
    base: &DglPresentation,
    g: &AttachingMap,
    window: TruncationWindow,
) -> Result<InertnessVerdict, AttachError> {
    let base = base.with_window(window);
    let ext = attach_cells(&base, g)?;
    let targets: Vec<TensorElement> = g.cells.iter().map(|c| c.target.clone()).collect();
    compare_homology(&base, &ext, &targets)
}

/// Per-degree comparison of `dim H(attached)` with `dim (L/I)` where `I` is
/// the ideal generated by the targets.
#[derive(Clone, Debug)]
pub struct QuotientReport {
    pub window: TruncationWindow,
    /// `(degree, dim H(attached), dim L/I)`.
    pub rows: Vec<(u32, usize, usize)>,
}

impl QuotientReport {
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|(_, a, q)| a == q)
    }

    pub fn mismatches(&self) -> Vec<u32> {
        self.rows
            .iter()
            .filter(|(_, a, q)| a != q)
            .map(|(d, _, _)| *d)
            .collect()
    }
}

pub fn quotient_consistency(
    base: &DglPresentation,
    g: &AttachingMap,
    window: TruncationWindow,
) -> Result<QuotientReport, AttachError> {
    if !base.has_zero_differential() {
        return Err(AttachError::NonzeroBaseDifferential);
    }
    let base = base.with_window(window);
    let ext = attach_cells(&base, g)?;
    let bc = ChainComplex::build(&base)?;
    let ec = ChainComplex::build(&ext)?;
    let alg = base.algebra();
    let top = window.max_degree;
    let mut ideal: Vec<Echelon> = (0..=top).map(|d| Echelon::new(bc.slice(d).words.len())).collect();
    let gens: Vec<LieElement> = (0..alg.generators().len()).map(|l| alg.gen_letter(l as u16)).collect();
    let mut queue: Vec<TensorElement> = g.cells.iter().map(|c| c.target.rewindow(alg)).collect();
    while let Some(t) = queue.pop() {
        for (deg, comp) in split_degrees(&t) {
            if deg > top {
                continue;
            }
            let v = bc.slice(deg).vectorize(&comp).expect("ideal element inside slice");
            if ideal[deg as usize].insert(&v) {
                let x = LieElement::uncertified(comp);
                for gen in &gens {
                    let y = gen.bracket(&x).expect("same algebra");
                    if !y.is_zero() {
                        queue.push(y.into_value());
                    }
                }
            }
        }
    }
    let edims = ec.dims();
    let rows = ec
        .valid_degrees()
        .map(|d| {
            let total = bc.slice(d).lie_basis.len();
            (d, edims[&d], total - ideal[d as usize].rank())
        })
        .collect();
    Ok(QuotientReport { window, rows })
}

fn split_degrees(t: &TensorElement) -> BTreeMap<u32, TensorElement> {
    let alg = t.algebra();
    let mut out: BTreeMap<u32, Vec<_>> = BTreeMap::new();
    for (w, c) in t.terms() {
        out.entry(alg.word_degree(w)).or_default().push((w.clone(), c.clone()));
    }
    out.into_iter()
        .map(|(d, v)| (d, TensorElement::from_terms(alg, v)))
        .collect()
}

/// Result of attaching two families of cells one after the other.
#[derive(Clone, Debug)]
pub struct SequentialResult {
    pub presentation: DglPresentation,
    /// `base → base ⨿ g1`.
    pub first: InertnessVerdict,
    /// `base ⨿ g1 → base ⨿ g1 ⨿ g2`.
    pub second: InertnessVerdict,
    /// `base → base ⨿ g1 ⨿ g2`.
    pub combined: InertnessVerdict,
}

/// `g2`'s targets live in the algebra of `base ⨿ g1` (any window).
pub fn sequential_attach(
    base: &DglPresentation,
    g1: &AttachingMap,
    g2: &AttachingMap,
    window: TruncationWindow,
) -> Result<SequentialResult, AttachError> {
    let base = base.with_window(window);
    let mid = attach_cells(&base, g1)?;
    let full = attach_cells(&mid, g2)?;
    let t1: Vec<TensorElement> = g1.cells.iter().map(|c| c.target.clone()).collect();
    let t2: Vec<TensorElement> = g2.cells.iter().map(|c| c.target.clone()).collect();
    let first = compare_homology(&base, &mid, &t1)?;
    let second = compare_homology(&mid, &full, &t2)?;
    // Targets of the composite only make sense for the first family.
    let combined = compare_homology(&base, &full, &t1)?;
    Ok(SequentialResult {
        presentation: full,
        first,
        second,
        combined,
    })
}
