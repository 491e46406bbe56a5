use std::collections::BTreeMap;

use lietop_core::attach::{attach_cells, AttachError, AttachingMap, Cell};
use lietop_core::dgl::{DglError, DglPresentation};
use lietop_core::freelie::{
    ad_power, FreeLie, FreeLieError, Generator, Letter, LieElement, TensorElement, TruncationWindow,
};

use crate::parse::{parse_group_word, Expr, ParseError, Pos, PresentationFile};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("no generators")]
    NoGenerators,
    #[error("{pos}: unknown name '{name}'")]
    UnknownName { name: String, pos: Pos },
    #[error("{pos}: {message}")]
    At { pos: Pos, message: String },
    #[error("{0}")]
    Other(String),
    #[error(transparent)]
    FreeLie(#[from] FreeLieError),
    #[error(transparent)]
    Dgl(#[from] DglError),
    #[error(transparent)]
    Attach(#[from] AttachError),
}

fn at(pos: Pos, e: impl std::fmt::Display) -> InputError {
    InputError::At {
        pos,
        message: e.to_string(),
    }
}

/// A presentation file resolved against its generators: the base dgl, the
/// cells to attach and the declared group words.
#[derive(Clone, Debug)]
pub struct Model {
    pub window: TruncationWindow,
    pub base: DglPresentation,
    pub cells: AttachingMap,
    pub words: BTreeMap<String, GroupWord>,
    pub order: Option<Vec<Letter>>,
}

impl Model {
    /// Flag window over file window over the default.
    pub fn build(file: &PresentationFile, window: Option<TruncationWindow>) -> Result<Self, InputError> {
        if file.generators.is_empty() {
            return Err(InputError::NoGenerators);
        }
        let window = window
            .or(file.window.map(|(w, d, _)| TruncationWindow::new(w, d)))
            .unwrap_or_default();
        let mut seen = BTreeMap::new();
        let mut gens = Vec::new();
        for g in &file.generators {
            if seen.insert(g.name.clone(), g.pos).is_some() {
                return Err(at(g.pos, format!("duplicate generator '{}'", g.name)));
            }
            let mut gen = Generator::new(g.name.clone(), g.degree);
            if let Some(w) = g.weight {
                gen = gen.with_weight(w);
            }
            gens.push(gen);
        }
        let alg = FreeLie::new(gens, window)?;
        let mut diffs = Vec::new();
        let mut with_diff = BTreeMap::new();
        for d in &file.diffs {
            if !seen.contains_key(&d.name) {
                return Err(InputError::UnknownName {
                    name: d.name.clone(),
                    pos: d.pos,
                });
            }
            if with_diff.insert(d.name.clone(), ()).is_some() {
                return Err(at(d.pos, format!("second differential for '{}'", d.name)));
            }
            diffs.push((d.name.clone(), eval(&alg, &d.expr)?));
        }
        let base = DglPresentation::new(alg.clone(), diffs)?;
        let mut cells = Vec::new();
        for c in &file.cells {
            if seen.insert(c.name.clone(), c.pos).is_some() {
                return Err(at(c.pos, format!("duplicate name '{}'", c.name)));
            }
            let mut cell = Cell::new(c.name.clone(), c.degree, eval(&alg, &c.expr)?);
            if let Some(w) = c.weight {
                cell = cell.with_weight(w);
            }
            cells.push(cell);
        }
        let mut words = BTreeMap::new();
        for w in &file.words {
            for (name, _, pos) in &w.letters {
                if alg.letter(name).is_err() {
                    return Err(InputError::UnknownName {
                        name: name.clone(),
                        pos: *pos,
                    });
                }
            }
            let letters = w.letters.iter().map(|(n, e, _)| (n.clone(), *e)).collect();
            if words.insert(w.name.clone(), letters).is_some() {
                return Err(at(w.pos, format!("duplicate word '{}'", w.name)));
            }
        }
        let order = match &file.order {
            None => None,
            Some((names, pos)) => {
                let mut letters = Vec::new();
                for (n, p) in names {
                    letters.push(alg.letter(n).map_err(|_| InputError::UnknownName {
                        name: n.clone(),
                        pos: *p,
                    })?);
                }
                let mut sorted = letters.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != alg.generators().len() || letters.len() != sorted.len() {
                    return Err(at(*pos, "order must list every generator exactly once"));
                }
                Some(letters)
            }
        };
        Ok(Model {
            window,
            base,
            cells: AttachingMap::new(cells),
            words,
            order,
        })
    }

    pub fn algebra(&self) -> &FreeLie {
        self.base.algebra()
    }

    /// The base with all cells attached.
    pub fn attached(&self) -> Result<DglPresentation, InputError> {
        Ok(attach_cells(&self.base, &self.cells)?)
    }
}

/// Evaluates an expression in `alg`; unknown names are errors.
pub fn eval(alg: &FreeLie, e: &Expr) -> Result<TensorElement, InputError> {
    Ok(eval_lie(alg, e)?.into_value())
}

fn eval_lie(alg: &FreeLie, e: &Expr) -> Result<LieElement, InputError> {
    Ok(match e {
        Expr::Name(n, pos) => alg.gen(n).map_err(|_| InputError::UnknownName {
            name: n.clone(),
            pos: *pos,
        })?,
        Expr::Bracket(a, b) => eval_lie(alg, a)?.bracket(&eval_lie(alg, b)?)?,
        Expr::Ad(n, x, pos, body) => {
            let x = alg.gen(x).map_err(|_| InputError::UnknownName {
                name: x.clone(),
                pos: *pos,
            })?;
            ad_power(&x, *n, &eval_lie(alg, body)?)?
        }
        Expr::Sum(terms) => {
            let mut acc = LieElement::zero(alg);
            for (c, t) in terms {
                acc = acc.add_scaled(c, &eval_lie(alg, t)?);
            }
            acc
        }
    })
}

/// Names in order of first appearance.
pub fn expr_names(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Name(n, _) => {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        Expr::Bracket(a, b) => {
            expr_names(a, out);
            expr_names(b, out);
        }
        Expr::Ad(_, x, _, body) => {
            if !out.contains(x) {
                out.push(x.clone());
            }
            expr_names(body, out);
        }
        Expr::Sum(terms) => {
            for (_, t) in terms {
                expr_names(t, out);
            }
        }
    }
}

/// An algebra of degree-0 generators named after the letters of the
/// given group words, in order of first appearance.
pub fn implicit_algebra(names: &[String], window: TruncationWindow) -> Result<FreeLie, InputError> {
    if names.is_empty() {
        return Err(InputError::NoGenerators);
    }
    Ok(FreeLie::new(
        names.iter().map(|n| Generator::new(n.clone(), 0)).collect(),
        window,
    )?)
}

pub type GroupWord = Vec<(String, i32)>;

/// The letters of a group word and its distinct names.
pub fn group_word_names(text: &str) -> Result<(GroupWord, Vec<String>), InputError> {
    let letters = parse_group_word(text)?;
    let mut names: Vec<String> = Vec::new();
    for (n, _, _) in &letters {
        if !names.contains(n) {
            names.push(n.clone());
        }
    }
    Ok((letters.into_iter().map(|(n, e, _)| (n, e)).collect(), names))
}
