//! The free graded-commutative algebra ΛV on a finite basis.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::qlinalg::Rational;

/// Sorted list of basis indices; odd-degree indices occur at most once.
pub type Monomial = Vec<usize>;

/// A linear combination of monomials.
pub type Wedge = BTreeMap<Monomial, Rational>;

pub(crate) fn add_term(w: &mut Wedge, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match w.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub(crate) fn add_scaled(acc: &mut Wedge, c: &Rational, w: &Wedge) {
    for (m, x) in w {
        add_term(acc, m.clone(), c * x);
    }
}

/// Sorts a word of generators into canonical order, returning the Koszul
/// sign, or `None` when an odd generator repeats.
pub(crate) fn normalize(mut word: Vec<usize>, degrees: &[u32]) -> Option<(Monomial, bool)> {
    let mut negative = false;
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            if degrees[word[j - 1]] % 2 == 1 && degrees[word[j]] % 2 == 1 {
                negative = !negative;
            }
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    if word.windows(2).any(|p| p[0] == p[1] && degrees[p[0]] % 2 == 1) {
        return None;
    }
    Some((word, negative))
}

pub(crate) fn mul(a: &Wedge, b: &Wedge, degrees: &[u32]) -> Wedge {
    let mut out = Wedge::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut w = ma.clone();
            w.extend_from_slice(mb);
            if let Some((m, neg)) = normalize(w, degrees) {
                let c = ca * cb;
                add_term(&mut out, m, if neg { -c } else { c });
            }
        }
    }
    out
}

pub(crate) fn monomial_degree(m: &[usize], degrees: &[u32]) -> u32 {
    m.iter().map(|&i| degrees[i]).sum()
}

/// Extends `d` (given on generators) to ΛV as a derivation of degree +1.
pub(crate) fn differential(m: &[usize], d: &[Wedge], degrees: &[u32]) -> Wedge {
    let mut out = Wedge::new();
    let mut prefix_deg = 0u32;
    for j in 0..m.len() {
        let dv = &d[m[j]];
        if !dv.is_empty() {
            let sign = Rational::sign(prefix_deg % 2 == 1);
            let pre: Wedge = [(m[..j].to_vec(), Rational::one())].into_iter().collect();
            let post: Wedge = [(m[j + 1..].to_vec(), Rational::one())].into_iter().collect();
            let t = mul(&mul(&pre, dv, degrees), &post, degrees);
            add_scaled(&mut out, &sign, &t);
        }
        prefix_deg += degrees[m[j]];
    }
    out
}

pub(crate) fn differential_of(w: &Wedge, d: &[Wedge], degrees: &[u32]) -> Wedge {
    let mut out = Wedge::new();
    for (m, c) in w {
        add_scaled(&mut out, c, &differential(m, d, degrees));
    }
    out
}

/// Monomials with `k` factors and total degree `n`. Every degree must be ≥ 1.
pub(crate) fn monomials(k: usize, n: u32, degrees: &[u32]) -> Vec<Monomial> {
    fn rec(from: usize, k: usize, n: u32, degrees: &[u32], cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if k == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for i in from..degrees.len() {
            let d = degrees[i];
            if d == 0 || d > n {
                continue;
            }
            if degrees[i] % 2 == 1 && cur.last() == Some(&i) {
                continue;
            }
            cur.push(i);
            rec(i, k - 1, n - d, degrees, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, n, degrees, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn format_wedge(w: &Wedge, names: &[String]) -> String {
    if w.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (m, c)) in w.iter().enumerate() {
        let body = if m.is_empty() {
            "1".to_string()
        } else {
            m.iter().map(|&j| names[j].as_str()).collect::<Vec<_>>().join("·")
        };
        crate::freelie::write_term(&mut s, i == 0, c, &body).unwrap();
    }
    s
}
