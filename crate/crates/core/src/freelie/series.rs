use super::basis::certify_lie;
use super::{FreeLie, FreeLieError, LieElement, TensorElement};
use crate::qlinalg::Rational;

/// Truncated exponential `Σ xⁿ/n!`; `x` must have no unit term.
pub fn exp(x: &TensorElement) -> Result<TensorElement, FreeLieError> {
    if !x.unit_coefficient().is_zero() {
        return Err(FreeLieError::Precondition("exp needs zero constant term".into()));
    }
    let alg = x.algebra();
    // Every word has weight ≥ 1, so xⁿ vanishes for n > max_weight.
    let mut out = alg.one();
    let mut power = alg.one();
    let mut fact = Rational::one();
    for n in 1..=alg.window().max_weight {
        power = &power * x;
        if power.is_zero() {
            break;
        }
        fact = &fact * &Rational::from_int(n as i64);
        out = out.add_scaled(&fact.recip(), &power);
    }
    Ok(out)
}

/// Truncated logarithm `Σ (-1)^{n+1} (u-1)ⁿ/n`; `u` must have unit term 1.
pub fn log(u: &TensorElement) -> Result<TensorElement, FreeLieError> {
    if !u.unit_coefficient().is_one() {
        return Err(FreeLieError::Precondition("log needs constant term 1".into()));
    }
    let alg = u.algebra();
    let y = u - &alg.one();
    let mut out = alg.zero();
    let mut power = alg.one();
    for n in 1..=alg.window().max_weight {
        power = &power * &y;
        if power.is_zero() {
            break;
        }
        let c = Rational::new(if n % 2 == 1 { 1 } else { -1 }, n as i64);
        out = out.add_scaled(&c, &power);
    }
    Ok(out)
}

fn all_even(t: &TensorElement) -> bool {
    t.terms().keys().all(|w| t.algebra().word_degree(w).is_multiple_of(2))
}

/// `log(exp x · exp y)`, certified Lie.
pub fn bch(x: &LieElement, y: &LieElement) -> Result<LieElement, FreeLieError> {
    if !all_even(x.value()) || !all_even(y.value()) {
        return Err(FreeLieError::Precondition("bch needs even-degree arguments".into()));
    }
    let z = log(&(&exp(x.value())? * &exp(y.value())?))?;
    certify_lie(&z).ok_or_else(|| FreeLieError::NotLie(format!("bch produced {z}")))
}

/// Logarithm of a group word `g1^{±1} g2^{±1} …` with each letter mapped to
/// `exp(±g)`. All generators involved must have degree 0.
pub fn log_group_word(alg: &FreeLie, word: &[(String, i32)]) -> Result<LieElement, FreeLieError> {
    let mut prod = alg.one();
    for (name, e) in word {
        let l = alg.letter(name)?;
        if alg.degree_of(l) != 0 {
            return Err(FreeLieError::Precondition(format!(
                "group letter `{name}` has nonzero degree"
            )));
        }
        if *e != 1 && *e != -1 {
            return Err(FreeLieError::Precondition(format!(
                "exponent {e} on `{name}` is not ±1"
            )));
        }
        let g = alg.gen_letter(l).into_value().scale(&Rational::from_int(*e as i64));
        prod = &prod * &exp(&g)?;
    }
    let z = log(&prod)?;
    certify_lie(&z).ok_or_else(|| FreeLieError::NotLie(format!("log of group word produced {z}")))
}

/// `[x,[x,…[x,y]…]]` with `n` brackets.
pub fn ad_power(x: &LieElement, n: u32, y: &LieElement) -> Result<LieElement, FreeLieError> {
    let mut out = y.clone();
    for _ in 0..n {
        out = x.bracket(&out)?;
    }
    Ok(out)
}
