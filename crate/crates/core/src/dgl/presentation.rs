use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::DglError;
use crate::freelie::{certify_lie, FreeLie, Generator, Letter, LieElement, TensorElement, TruncationWindow, Word};
use crate::qlinalg::Rational;

/// A free graded Lie algebra on a finite alphabet together with the images
/// of the generators under a differential, all on one truncation window.
#[derive(Clone, PartialEq, Eq)]
pub struct DglPresentation {
    alg: FreeLie,
    /// Indexed by letter; zero when no differential was given.
    diffs: Vec<LieElement>,
}

impl fmt::Debug for DglPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DglPresentation {{ window: {}", self.alg.window())?;
        for (g, d) in self.alg.generators().iter().zip(&self.diffs) {
            write!(f, ", {} (deg {}, wt {}) -> {}", g.name, g.degree, g.weight, d.value())?;
        }
        write!(f, " }}")
    }
}

/// One generator whose differential fails to square to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredViolation {
    pub generator: String,
    pub residual: TensorElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredReport {
    pub window: TruncationWindow,
    pub violations: Vec<DSquaredViolation>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl DglPresentation {
    /// Validates the differential images and checks ∂² = 0 on the window.
    pub fn new(alg: FreeLie, diffs: Vec<(String, TensorElement)>) -> Result<Self, DglError> {
        let p = Self::new_unchecked_square(alg, diffs)?;
        if let Some(v) = p.check_d_squared().violations.into_iter().next() {
            return Err(DglError::DSquared {
                generator: v.generator,
                residual: v.residual.to_string(),
            });
        }
        Ok(p)
    }

    /// Like [`DglPresentation::new`] but skips the ∂² check.
    pub fn new_unchecked_square(alg: FreeLie, diffs: Vec<(String, TensorElement)>) -> Result<Self, DglError> {
        let mut slots: Vec<Option<LieElement>> = vec![None; alg.generators().len()];
        for (name, image) in diffs {
            let l = alg.letter(&name)?;
            if !alg.same_alphabet(image.algebra()) {
                return Err(DglError::ForeignElement);
            }
            let image = image.rewindow(&alg);
            let g = alg.generator(l);
            if !image.unit_coefficient().is_zero() {
                return Err(DglError::ConstantTerm(name));
            }
            if !image.is_zero() {
                if g.degree == 0 {
                    return Err(DglError::DegreeZeroDiff(name));
                }
                for w in image.terms().keys() {
                    let d = alg.word_degree(w);
                    if d + 1 != g.degree {
                        return Err(DglError::DegreeMismatch {
                            generator: name,
                            expected: g.degree - 1,
                            found: d,
                        });
                    }
                }
            }
            let lie = certify_lie(&image).ok_or_else(|| DglError::NotLie(name.clone()))?;
            if slots[l as usize].replace(lie).is_some() {
                return Err(DglError::DuplicateDiff(name));
            }
        }
        let diffs = slots
            .into_iter()
            .map(|d| d.unwrap_or_else(|| LieElement::zero(&alg)))
            .collect();
        Ok(DglPresentation { alg, diffs })
    }

    /// Presentation with zero differential.
    pub fn free(alg: FreeLie) -> Self {
        let diffs = vec![LieElement::zero(&alg); alg.generators().len()];
        DglPresentation { alg, diffs }
    }

    pub fn algebra(&self) -> &FreeLie {
        &self.alg
    }

    pub fn window(&self) -> TruncationWindow {
        self.alg.window()
    }

    pub fn generators(&self) -> &[Generator] {
        self.alg.generators()
    }

    pub fn diff_of(&self, l: Letter) -> &LieElement {
        &self.diffs[l as usize]
    }

    pub fn diff(&self, name: &str) -> Result<&LieElement, DglError> {
        Ok(self.diff_of(self.alg.letter(name)?))
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diffs.iter().all(|d| d.is_zero())
    }

    /// The same presentation on another window.
    pub fn with_window(&self, window: TruncationWindow) -> Self {
        let alg = self.alg.with_window(window);
        let diffs = self
            .diffs
            .iter()
            .map(|d| LieElement::certified_unchecked(d.value().rewindow(&alg)))
            .collect();
        DglPresentation { alg, diffs }
    }

    /// ∂ of an arbitrary tensor element (the tensor-level right derivation).
    pub fn derive_tensor(&self, t: &TensorElement) -> Result<TensorElement, DglError> {
        if !self.alg.same_alphabet(t.algebra()) {
            return Err(DglError::ForeignElement);
        }
        let alg = t.algebra();
        let max_weight = alg.window().max_weight;
        let images: Vec<Vec<(&Word, &Rational)>> =
            self.diffs.iter().map(|d| d.value().terms().iter().collect()).collect();
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for (w, c) in t.terms() {
            let letters = w.letters();
            // Degree of the suffix after position i.
            let mut suffix_deg = 0u32;
            for i in (0..letters.len()).rev() {
                let l = letters[i];
                let img = &images[l as usize];
                if !img.is_empty() {
                    let base_weight = w.weight() - alg.weight_of(l);
                    let sign = if suffix_deg % 2 == 1 { -c } else { c.clone() };
                    for (dw, dc) in img {
                        if base_weight + dw.weight() > max_weight {
                            continue;
                        }
                        let mut nl = Vec::with_capacity(letters.len() + dw.len());
                        nl.extend_from_slice(&letters[..i]);
                        nl.extend_from_slice(dw.letters());
                        nl.extend_from_slice(&letters[i + 1..]);
                        *acc.entry(alg.word(nl)).or_default() += &(&sign * *dc);
                    }
                }
                suffix_deg += alg.degree_of(l);
            }
        }
        Ok(TensorElement::from_terms(alg, acc))
    }

    /// For every generator, ∂∂g computed on the window.
    pub fn check_d_squared(&self) -> DSquaredReport {
        let mut violations = Vec::new();
        for (g, d) in self.alg.generators().iter().zip(&self.diffs) {
            let r = self.derive_tensor(d.value()).expect("own element");
            if !r.is_zero() {
                violations.push(DSquaredViolation {
                    generator: g.name.clone(),
                    residual: r,
                });
            }
        }
        DSquaredReport {
            window: self.window(),
            violations,
        }
    }

    /// First generator whose differential has a term of smaller weight.
    pub fn weight_violation(&self) -> Option<DglError> {
        for (g, d) in self.alg.generators().iter().zip(&self.diffs) {
            if let Some(m) = d.value().min_weight() {
                if m < g.weight {
                    return Some(DglError::WeightDecreasing {
                        generator: g.name.clone(),
                        weight: g.weight,
                        found: m,
                    });
                }
            }
        }
        None
    }

    /// Minimal: every differential lands in brackets of length ≥ 2.
    pub fn minimality_check(&self) -> bool {
        self.diffs.iter().all(|d| d.value().min_length().is_none_or(|m| m >= 2))
    }

    /// Free product. Generators of `other` whose names clash with `self` are
    /// renamed with a `'` suffix; the renames are returned. Windows are
    /// merged by componentwise maximum.
    pub fn free_product(&self, other: &DglPresentation) -> (DglPresentation, Vec<(String, String)>) {
        let mut names: BTreeSet<String> = self.generators().iter().map(|g| g.name.clone()).collect();
        let mut gens = self.generators().to_vec();
        let mut renames = Vec::new();
        for g in other.generators() {
            let mut name = g.name.clone();
            while names.contains(&name) {
                name.push('\'');
            }
            if name != g.name {
                renames.push((g.name.clone(), name.clone()));
            }
            names.insert(name.clone());
            gens.push(Generator { name, ..g.clone() });
        }
        let window = self.window().max(other.window());
        let alg = FreeLie::new(gens, window).expect("names made unique");
        let offset = self.generators().len() as Letter;
        let mut diffs: Vec<LieElement> = self
            .diffs
            .iter()
            .map(|d| LieElement::certified_unchecked(d.value().transport(&alg, &|l| l)))
            .collect();
        diffs.extend(
            other
                .diffs
                .iter()
                .map(|d| LieElement::certified_unchecked(d.value().transport(&alg, &|l| l + offset))),
        );
        (DglPresentation { alg, diffs }, renames)
    }

    /// Extends the presentation by new generators with given differentials.
    /// Existing letters keep their indices.
    pub fn extend(
        &self,
        new_gens: Vec<Generator>,
        new_diffs: Vec<(String, TensorElement)>,
    ) -> Result<DglPresentation, DglError> {
        let mut gens = self.generators().to_vec();
        gens.extend(new_gens);
        let alg = FreeLie::new(gens, self.window())?;
        let mut diffs: Vec<(String, TensorElement)> = self
            .generators()
            .iter()
            .zip(&self.diffs)
            .filter(|(_, d)| !d.is_zero())
            .map(|(g, d)| (g.name.clone(), d.value().transport(&alg, &|l| l)))
            .collect();
        for (n, t) in new_diffs {
            if !self.alg.same_alphabet(t.algebra()) && !alg.same_alphabet(t.algebra()) {
                return Err(DglError::ForeignElement);
            }
            diffs.push((n, t.transport(&alg, &|l| l)));
        }
        DglPresentation::new(alg, diffs)
    }

    /// Dimensions of the weight-k slices `L^(k)/L^(k+1)` per degree, for
    /// k = 1..=k_max. Requires a zero differential.
    pub fn lcs_dims(&self, k_max: u32) -> Result<Vec<BTreeMap<u32, usize>>, DglError> {
        if let Some((g, _)) = self.generators().iter().zip(&self.diffs).find(|(_, d)| !d.is_zero()) {
            return Err(DglError::NonzeroDiff(g.name.clone()));
        }
        let window = self.window();
        if k_max > window.max_weight {
            return Err(DglError::BeyondWindow {
                requested: k_max,
                window,
            });
        }
        Ok((1..=k_max)
            .map(|k| (0..=window.max_degree).map(|d| (d, self.alg.lie_dim(k, d))).collect())
            .collect())
    }

    /// Re-declares generator degrees. Differentials are kept as tensor data;
    /// the new grading must keep them homogeneous of degree one less than
    /// their generator and must not change the sign `(-1)^{|a||b|}` of any
    /// pair of letters occurring together in a differential.
    pub fn regrade(&self, new_degrees: &BTreeMap<String, u32>) -> Result<DglPresentation, DglError> {
        let mut degrees: Vec<u32> = self.generators().iter().map(|g| g.degree).collect();
        for (name, d) in new_degrees {
            degrees[self.alg.letter(name)? as usize] = *d;
        }
        let old = |l: Letter| self.alg.degree_of(l);
        let new = |l: Letter| degrees[l as usize];
        for (g, d) in self.generators().iter().zip(&self.diffs) {
            for w in d.value().terms().keys() {
                let nd: u32 = w.letters().iter().map(|&l| new(l)).sum();
                let gl = self.alg.letter(&g.name)?;
                if nd + 1 != new(gl) {
                    return Err(DglError::Inhomogeneous(g.name.clone()));
                }
                let mut counts: BTreeMap<Letter, usize> = BTreeMap::new();
                for &l in w.letters() {
                    *counts.entry(l).or_default() += 1;
                }
                for (&a, &ca) in &counts {
                    for (&b, _) in counts.range(a..) {
                        if a == b && ca < 2 {
                            continue;
                        }
                        if (old(a) * old(b)) % 2 != (new(a) * new(b)) % 2 {
                            return Err(DglError::ParityChange(
                                self.alg.generator(a).name.clone(),
                                self.alg.generator(b).name.clone(),
                            ));
                        }
                    }
                }
            }
            let gl = self.alg.letter(&g.name)?;
            if new(gl) == 0 && !d.is_zero() {
                return Err(DglError::DegreeZeroDiff(g.name.clone()));
            }
        }
        let gens: Vec<Generator> = self
            .generators()
            .iter()
            .zip(&degrees)
            .map(|(g, &d)| Generator { degree: d, ..g.clone() })
            .collect();
        let top = self
            .generators()
            .iter()
            .zip(&self.diffs)
            .filter(|(_, d)| !d.is_zero())
            .map(|(g, _)| new(self.alg.letter(&g.name).unwrap()))
            .max()
            .unwrap_or(0);
        let w = self.window();
        let alg = FreeLie::new(gens, TruncationWindow::new(w.max_weight, w.max_degree.max(top)))?;
        let diffs: Vec<(String, TensorElement)> = self
            .generators()
            .iter()
            .zip(&self.diffs)
            .filter(|(_, d)| !d.is_zero())
            .map(|(g, d)| (g.name.clone(), d.value().transport(&alg, &|l| l)))
            .collect();
        DglPresentation::new(alg, diffs)
    }
}

/// `∂x` for a Lie element of the presentation.
pub fn derive(p: &DglPresentation, x: &LieElement) -> Result<LieElement, DglError> {
    let t = p.derive_tensor(x.value())?;
    Ok(if x.is_certified() {
        LieElement::certified_unchecked(t)
    } else {
        LieElement::uncertified(t)
    })
}
