//! Sullivan duality for finite nilpotent stages.
//!
//! A nilpotent (d)gl `L` on a basis `e_i` dualizes to `ΛV` with
//! `V = (sL)^∨`, so `deg v_i = deg e_i + 1`. The two parts of `d` are fixed by
//!
//! ```text
//! <d0 v, sx>     = (-1)^|sx| <v, s∂x>
//! <d1 v, sx, sy> = (-1)^(deg y + 1) <v, s[x,y]>
//! ```
//!
//! with the pairing of `Λ²V` against `sL ⊗ sL` normalised as
//!
//! ```text
//! <v_a v_b, se_i, se_j> = (-1)^(|se_i|+|se_j|) (δ_ai δ_bj + (-1)^(|se_i||se_j|) δ_aj δ_bi)
//! ```
//!
//! Concretely, the coefficient of `v_i` in `d0 v_k` is `(-1)^|e_k|` times the
//! `e_k` coefficient of `∂e_i`, the coefficient of `v_a v_b` (`a ≠ b`) in
//! `d1 v_k` is `(-1)^(|e_a|+1) c^k_ab`, and that of `v_a²` is `c^k_aa / 2`.
//! This is the normalisation under which `d1² = 0` is equivalent to the
//! graded Jacobi identity.

mod lie_data;
mod wedge;

#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use thiserror::Error;

pub use lie_data::NilpotentLieData;
pub use wedge::{Monomial, Wedge};

use crate::dgl::DglError;
use crate::freelie::FreeLieError;
use crate::qlinalg::{Echelon, Insertion, Rational, SparseVector, SubspaceBasis};

#[derive(Debug, Error)]
pub enum SullivanError {
    #[error("basis index {0} out of range")]
    Index(usize),
    #[error("[{0},{1}] has a component of the wrong degree")]
    BracketDegree(String, String),
    #[error("structure constants for [{0},{1}] violate graded antisymmetry")]
    Antisymmetry(String, String),
    #[error("Jacobi identity fails on ({0}, {1}, {2})")]
    Jacobi(String, String, String),
    #[error("lower central series does not terminate")]
    NotNilpotent,
    #[error("differential of {0} has the wrong degree")]
    DiffDegree(String),
    #[error("∂∂{0} is nonzero")]
    DiffSquare(String),
    #[error("∂ is not a derivation on [{0},{1}]")]
    DiffDerivation(String, String),
    #[error("element is not Lie")]
    NotLie,
    #[error("generator {0} has degree 0")]
    DegreeZero(String),
    #[error("d{0} has the wrong degree or shape")]
    BadDifferential(String),
    #[error("d0 is nonzero")]
    NotQuadratic,
    #[error("not a Sullivan algebra: {0}")]
    NotSullivan(String),
    #[error("stage {0} has no generator {1}")]
    MissingGenerator(&'static str, String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error(transparent)]
    Dgl(#[from] DglError),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
}

/// A (semi-)quadratic differential on `ΛV`: `d v = d0 v + d1 v` with `d0`
/// linear and `d1` quadratic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanData {
    names: Vec<String>,
    degrees: Vec<u32>,
    d0: Vec<SparseVector>,
    d1: Vec<Wedge>,
}

impl SullivanData {
    /// `d0[k]` gives `d0 v_k` in `V` coordinates and `d1[k]` gives `d1 v_k`
    /// as a combination of two-factor monomials. Monomials are normalised
    /// with Koszul signs.
    pub fn new(
        basis: Vec<(String, u32)>,
        d0: Vec<SparseVector>,
        d1: Vec<Vec<((usize, usize), Rational)>>,
    ) -> Result<Self, SullivanError> {
        let (names, degrees): (Vec<String>, Vec<u32>) = basis.into_iter().unzip();
        let n = names.len();
        if d0.len() != n || d1.len() != n {
            return Err(SullivanError::Index(d0.len().max(d1.len())));
        }
        if let Some(i) = degrees.iter().position(|&d| d == 0) {
            return Err(SullivanError::DegreeZero(names[i].clone()));
        }
        let mut quad = Vec::with_capacity(n);
        for (k, terms) in d1.into_iter().enumerate() {
            let mut w = Wedge::new();
            for ((a, b), c) in terms {
                if a >= n || b >= n || degrees[a] + degrees[b] != degrees[k] + 1 {
                    return Err(SullivanError::BadDifferential(names[k].clone()));
                }
                if let Some((m, neg)) = wedge::normalize(vec![a, b], &degrees) {
                    wedge::add_term(&mut w, m, if neg { -c } else { c });
                }
            }
            quad.push(w);
        }
        for (k, v) in d0.iter().enumerate() {
            if v.iter().any(|(i, _)| *i >= n || degrees[*i] != degrees[k] + 1) {
                return Err(SullivanError::BadDifferential(names[k].clone()));
            }
        }
        Ok(SullivanData {
            names,
            degrees,
            d0,
            d1: quad,
        })
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

    pub fn d0(&self, k: usize) -> &SparseVector {
        &self.d0[k]
    }

    pub fn d1(&self, k: usize) -> &Wedge {
        &self.d1[k]
    }

    pub fn is_quadratic(&self) -> bool {
        self.d0.iter().all(SparseVector::is_zero)
    }

    /// Full differential of a generator as an element of `ΛV`.
    pub fn d(&self, k: usize) -> Wedge {
        let mut w = self.d1[k].clone();
        for (i, c) in self.d0[k].iter() {
            wedge::add_term(&mut w, vec![*i], c.clone());
        }
        w
    }

    fn d_all(&self) -> Vec<Wedge> {
        (0..self.dim()).map(|k| self.d(k)).collect()
    }

    /// Extends the differential to `ΛV` as a derivation.
    pub fn apply(&self, w: &Wedge) -> Wedge {
        wedge::differential_of(w, &self.d_all(), &self.degrees)
    }

    pub fn product(&self, a: &Wedge, b: &Wedge) -> Wedge {
        wedge::mul(a, b, &self.degrees)
    }

    pub fn generator(&self, k: usize) -> Wedge {
        [(vec![k], Rational::one())].into_iter().collect()
    }

    pub fn format(&self, w: &Wedge) -> String {
        wedge::format_wedge(w, &self.names)
    }
}

fn dual_name(name: &str) -> String {
    format!("v({name})")
}

/// The cochain algebra of a nilpotent (d)gl.
pub fn cochains(l: &NilpotentLieData) -> SullivanData {
    let n = l.dim();
    let degrees: Vec<u32> = l.degrees().iter().map(|d| d + 1).collect();
    let mut d1: Vec<Vec<((usize, usize), Rational)>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in a..n {
            for (k, c) in l.bracket(a, b).iter() {
                let coeff = if a == b {
                    c / &Rational::from_int(2)
                } else {
                    c * &Rational::sign(l.degrees()[a].is_multiple_of(2))
                };
                d1[*k].push(((a, b), coeff));
            }
        }
    }
    let mut d0 = vec![SparseVector::new(); n];
    for i in 0..n {
        if let Some(di) = l.diff(i) {
            for (k, c) in di.iter() {
                let c = c * &Rational::sign(l.degrees()[*k] % 2 == 1);
                d0[*k] = d0[*k].add_scaled(&c, &SparseVector::unit(i));
            }
        }
    }
    let basis = l.names().iter().map(|s| dual_name(s)).zip(degrees).collect();
    SullivanData::new(basis, d0, d1).expect("cochains are well formed")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareViolation {
    pub generator: usize,
    pub residual: Wedge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanReport {
    /// Generators with `d²v ≠ 0`.
    pub violations: Vec<SquareViolation>,
    /// Dimensions of `V(0) ⊂ V(1) ⊂ …`, where `V(0) = V ∩ ker d` and
    /// `V(k) = d⁻¹(ΛV(k-1)) ∩ V`, until the chain stops growing.
    pub filtration: Vec<usize>,
    pub dim: usize,
}

impl SullivanReport {
    pub fn filtration_exhausts(&self) -> bool {
        self.filtration.last().copied().unwrap_or(0) == self.dim
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.filtration_exhausts()
    }
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    n + a * n + b
}

/// Checks `d² = 0` on generators and computes the Sullivan filtration.
pub fn check_sullivan(sd: &SullivanData) -> SullivanReport {
    let n = sd.dim();
    let d = sd.d_all();
    let violations = (0..n)
        .filter_map(|k| {
            let r = wedge::differential_of(&d[k], &d, &sd.degrees);
            (!r.is_empty()).then_some(SquareViolation {
                generator: k,
                residual: r,
            })
        })
        .collect();

    let ambient = n + n * n;
    let embed = |w: &Wedge| -> SparseVector {
        SparseVector::from_pairs(w.iter().map(|(m, c)| {
            let idx = match m.as_slice() {
                [i] => *i,
                [a, b] => pair_index(n, *a, *b),
                _ => unreachable!("d has wedge length one or two"),
            };
            (idx, c.clone())
        }))
    };
    let dvec: Vec<SparseVector> = d.iter().map(embed).collect();
    let mut filtration = Vec::new();
    let mut current: Vec<SparseVector> = Vec::new();
    let mut first = true;
    loop {
        let mut target = Echelon::new(ambient);
        for w in &current {
            target.insert(w);
        }
        for x in &current {
            for y in &current {
                let prod = sd.product(&vec_to_wedge(x), &vec_to_wedge(y));
                target.insert(&embed(&prod));
            }
        }
        let mut kernel = Echelon::tracked(ambient);
        let mut next = Vec::new();
        for (i, v) in dvec.iter().enumerate() {
            let r = if first { v.clone() } else { target.reduce(v) };
            if let Insertion::Relation(rel) = kernel.insert_tagged(&r, i) {
                next.push(rel);
            }
        }
        first = false;
        let dim = SubspaceBasis::span(n, &next).dim();
        if filtration.last() == Some(&dim) {
            break;
        }
        filtration.push(dim);
        current = SubspaceBasis::span(n, &next).vectors().to_vec();
        if dim == n {
            break;
        }
    }
    SullivanReport {
        violations,
        filtration,
        dim: n,
    }
}

fn vec_to_wedge(v: &SparseVector) -> Wedge {
    v.iter().map(|(i, c)| (vec![*i], c.clone())).collect()
}

/// The homotopy Lie algebra: brackets dual to `d1`, differential dual to
/// `d0`.
pub fn homotopy_lie(sd: &SullivanData) -> Result<NilpotentLieData, SullivanError> {
    let report = check_sullivan(sd);
    if !report.violations.is_empty() {
        return Err(SullivanError::NotSullivan(format!(
            "d² is nonzero on {}",
            sd.names[report.violations[0].generator]
        )));
    }
    if !report.filtration_exhausts() {
        return Err(SullivanError::NotSullivan("no exhaustive filtration".into()));
    }
    dual_lie(sd)
}

/// The dual structure constants without the Sullivan precheck; validation
/// is left to [`NilpotentLieData::new`].
pub(crate) fn dual_lie(sd: &SullivanData) -> Result<NilpotentLieData, SullivanError> {
    let n = sd.dim();
    let degrees: Vec<u32> = sd.degrees.iter().map(|d| d - 1).collect();
    let mut table: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
    for k in 0..n {
        for (m, c) in &sd.d1[k] {
            let (a, b) = (m[0], m[1]);
            let coeff = if a == b {
                c * &Rational::from_int(2)
            } else {
                c * &Rational::sign(degrees[a].is_multiple_of(2))
            };
            table.entry((a, b)).or_default().push((k, coeff));
        }
    }
    let brackets = table.into_iter().map(|(ab, v)| (ab, SparseVector::from_pairs(v)));
    let diff = (!sd.is_quadratic()).then(|| {
        let mut d = vec![SparseVector::new(); n];
        for (k, v) in sd.d0.iter().enumerate() {
            for (i, c) in v.iter() {
                let c = c * &Rational::sign(degrees[k] % 2 == 1);
                d[*i] = d[*i].add_scaled(&c, &SparseVector::unit(k));
            }
        }
        d
    });
    let names = sd
        .names
        .iter()
        .map(|s| {
            s.strip_prefix("v(")
                .and_then(|r| r.strip_suffix(')'))
                .unwrap_or(s)
                .to_string()
        })
        .collect::<Vec<_>>();
    NilpotentLieData::new(names.into_iter().zip(degrees).collect(), brackets, diff)
}

/// Cycles and boundaries of `d: span(cur) → span(next)` with incoming
/// `d: span(prev) → span(cur)`, in `cur` coordinates.
fn homology_piece(
    d: &[Wedge],
    degrees: &[u32],
    prev: &[Monomial],
    cur: &[Monomial],
    next: &[Monomial],
) -> (SubspaceBasis, SubspaceBasis) {
    let index = |list: &[Monomial]| -> BTreeMap<Monomial, usize> {
        list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
    };
    let (ci, ni) = (index(cur), index(next));
    let to_vec = |w: &Wedge, idx: &BTreeMap<Monomial, usize>| {
        SparseVector::from_pairs(w.iter().map(|(m, c)| (idx[m], c.clone())))
    };
    let mut kernel = Echelon::tracked(next.len());
    let mut cycles = Vec::new();
    for (i, m) in cur.iter().enumerate() {
        let dm = to_vec(&wedge::differential(m, d, degrees), &ni);
        if let Insertion::Relation(rel) = kernel.insert_tagged(&dm, i) {
            cycles.push(rel);
        }
    }
    let mut bounds = Echelon::new(cur.len());
    for m in prev {
        bounds.insert(&to_vec(&wedge::differential(m, d, degrees), &ci));
    }
    (SubspaceBasis::span(cur.len(), &cycles), bounds.into_basis())
}

/// `H^[k]` dimensions of a quadratic algebra in degrees `≤ max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeHomology {
    pub max_degree: u32,
    /// Nonzero `dim H^[k]` in degree `n`, keyed by `(k, n)`.
    pub dims: BTreeMap<(usize, u32), usize>,
}

impl WedgeHomology {
    pub fn dim(&self, k: usize, n: u32) -> usize {
        self.dims.get(&(k, n)).copied().unwrap_or(0)
    }

    pub fn total(&self, k: usize) -> usize {
        self.dims.iter().filter(|((kk, _), _)| *kk == k).map(|(_, d)| d).sum()
    }
}

fn wedge_piece(sd: &SullivanData, k: usize, n: u32) -> (Vec<Monomial>, SubspaceBasis, SubspaceBasis) {
    let d = sd.d_all();
    let prev = if k == 0 || n == 0 {
        Vec::new()
    } else {
        wedge::monomials(k - 1, n - 1, &sd.degrees)
    };
    let cur = wedge::monomials(k, n, &sd.degrees);
    let next = wedge::monomials(k + 1, n + 1, &sd.degrees);
    let (z, b) = homology_piece(&d, &sd.degrees, &prev, &cur, &next);
    (cur, z, b)
}

pub fn wedge_homology(sd: &SullivanData, max_degree: u32) -> Result<WedgeHomology, SullivanError> {
    if !sd.is_quadratic() {
        return Err(SullivanError::NotQuadratic);
    }
    let mut dims = BTreeMap::new();
    for n in 0..=max_degree {
        for k in 0..=n as usize {
            let (_, z, b) = wedge_piece(sd, k, n);
            let h = z.dim() - b.dim();
            if h > 0 {
                dims.insert((k, n), h);
            }
        }
    }
    Ok(WedgeHomology { max_degree, dims })
}

/// Cycles representing a basis of `H^[k]` in degree `n`.
pub fn wedge_classes(sd: &SullivanData, k: usize, n: u32) -> Result<Vec<Wedge>, SullivanError> {
    if !sd.is_quadratic() {
        return Err(SullivanError::NotQuadratic);
    }
    let (cur, z, b) = wedge_piece(sd, k, n);
    Ok(z.complement_of(&b)
        .vectors()
        .iter()
        .map(|v| v.iter().map(|(i, c)| (cur[*i].clone(), c.clone())).collect())
        .collect())
}

/// Whether a homogeneous element lies in the image of `d`.
pub fn is_boundary(sd: &SullivanData, w: &Wedge) -> Result<bool, SullivanError> {
    let mut degs = w.keys().map(|m| wedge::monomial_degree(m, &sd.degrees));
    let Some(n) = degs.next() else {
        return Ok(true);
    };
    if degs.any(|x| x != n) {
        return Err(SullivanError::Inhomogeneous);
    }
    if n == 0 {
        return Ok(false);
    }
    let d = sd.d_all();
    let cur = monomials_of_degree(n, &sd.degrees);
    let index: BTreeMap<&Monomial, usize> = cur.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut bounds = Echelon::new(cur.len());
    for m in monomials_of_degree(n - 1, &sd.degrees) {
        let dm = wedge::differential(&m, &d, &sd.degrees);
        bounds.insert(&SparseVector::from_pairs(dm.iter().map(|(m, c)| (index[m], c.clone()))));
    }
    Ok(bounds.contains(&SparseVector::from_pairs(w.iter().map(|(m, c)| (index[m], c.clone())))))
}

fn monomials_of_degree(n: u32, degrees: &[u32]) -> Vec<Monomial> {
    (0..=n as usize).flat_map(|k| wedge::monomials(k, n, degrees)).collect()
}

/// Index map sending each generator of `small` to the generator of `large`
/// with the same name.
pub fn stage_inclusion(small: &SullivanData, large: &SullivanData) -> Result<Vec<usize>, SullivanError> {
    small
        .names
        .iter()
        .map(|s| {
            large
                .names
                .iter()
                .position(|t| t == s)
                .ok_or_else(|| SullivanError::MissingGenerator("large", s.clone()))
        })
        .collect()
}

/// Applies an algebra map given on generators by an index map.
pub fn map_wedge(w: &Wedge, map: &[usize], target: &SullivanData) -> Wedge {
    let mut out = Wedge::new();
    for (m, c) in w {
        let image: Vec<usize> = m.iter().map(|&i| map[i]).collect();
        if let Some((mm, neg)) = wedge::normalize(image, &target.degrees) {
            wedge::add_term(&mut out, mm, if neg { -c.clone() } else { c.clone() });
        }
    }
    out
}

/// Side-by-side dimensions of `H^{≥1}(ΛV, d)` and `H(V ∩ ker d1, d0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiquadraticTables {
    pub max_degree: u32,
    pub total: BTreeMap<u32, usize>,
    pub linear: BTreeMap<u32, usize>,
}

impl SemiquadraticTables {
    /// Degrees where the two tables differ.
    pub fn disagreements(&self) -> Vec<u32> {
        (1..=self.max_degree)
            .filter(|n| self.total.get(n) != self.linear.get(n))
            .collect()
    }

    pub fn agree(&self) -> bool {
        self.disagreements().is_empty()
    }
}

pub fn semiquadratic_homology(sd: &SullivanData, max_degree: u32) -> SemiquadraticTables {
    let d = sd.d_all();
    let mut total = BTreeMap::new();
    for n in 1..=max_degree {
        let prev = monomials_of_degree(n - 1, &sd.degrees);
        let cur = monomials_of_degree(n, &sd.degrees);
        let next = monomials_of_degree(n + 1, &sd.degrees);
        let (z, b) = homology_piece(&d, &sd.degrees, &prev, &cur, &next);
        total.insert(n, z.dim() - b.dim());
    }

    let n = sd.dim();
    let pairs = n * n;
    let mut k1 = Echelon::tracked(pairs);
    let mut kernel = Vec::new();
    for k in 0..n {
        let v = SparseVector::from_pairs(sd.d1[k].iter().map(|(m, c)| (m[0] * n + m[1], c.clone())));
        if let Insertion::Relation(rel) = k1.insert_tagged(&v, k) {
            kernel.push(rel);
        }
    }
    let kernel = SubspaceBasis::span(n, &kernel);
    let degree_of = |v: &SparseVector| sd.degrees[v.leading().expect("nonzero").0];
    let apply_d0 = |v: &SparseVector| {
        let mut acc = SparseVector::new();
        for (k, c) in v.iter() {
            acc = acc.add_scaled(c, &sd.d0[*k]);
        }
        acc
    };
    let mut linear = BTreeMap::new();
    for deg in 1..=max_degree {
        let here: Vec<&SparseVector> = kernel.vectors().iter().filter(|v| degree_of(v) == deg).collect();
        let below: Vec<&SparseVector> = kernel.vectors().iter().filter(|v| degree_of(v) + 1 == deg).collect();
        let mut ker = Echelon::tracked(n);
        let mut zdim = 0;
        for (i, v) in here.iter().enumerate() {
            if let Insertion::Relation(_) = ker.insert_tagged(&apply_d0(v), i) {
                zdim += 1;
            }
        }
        let mut img = Echelon::new(n);
        for v in below {
            img.insert(&apply_d0(v));
        }
        linear.insert(deg, zdim - img.rank());
    }
    SemiquadraticTables {
        max_degree,
        total,
        linear,
    }
}
