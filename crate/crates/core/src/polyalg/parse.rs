use num_traits::One;

use super::monomial::{variable_names, ExponentVector};
use super::{PolyError, Polynomial};
use crate::Rational;

impl Polynomial {
    /// Parses a sum of terms such as `x^2*y - 3/2*z + 1`.
    ///
    /// Variables are `x, y, z` for up to three dimensions and `x1 .. xn`
    /// otherwise. Factors in a term are joined with `*`; exponents with `^`.
    pub fn parse(dimension: usize, input: &str) -> Result<Polynomial, PolyError> {
        let names = variable_names(dimension);
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(PolyError::Parse("empty polynomial".into()));
        }
        let mut out = Polynomial::zero(dimension);
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut i = 0;
        let mut pieces = Vec::new();
        while i <= bytes.len() {
            let at_sign = i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-');
            let after_operator = i > 0 && matches!(bytes[i - 1], b'^' | b'*' | b'/');
            if i == bytes.len() || (at_sign && i > start && !after_operator) {
                pieces.push(&compact[start..i]);
                start = i;
            }
            i += 1;
        }
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-Rational::one(), &piece[1..]),
                b'+' => (Rational::one(), &piece[1..]),
                _ => (Rational::one(), piece),
            };
            if body.is_empty() {
                return Err(PolyError::Parse(format!("dangling sign in `{input}`")));
            }
            let mut coeff = sign;
            let mut exps = vec![0u32; dimension];
            for factor in body.split('*') {
                parse_factor(factor, &names, &mut coeff, &mut exps)?;
            }
            out.add_term(ExponentVector::new(exps), coeff);
        }
        Ok(out)
    }
}

fn parse_factor(
    factor: &str,
    names: &[String],
    coeff: &mut Rational,
    exps: &mut [u32],
) -> Result<(), PolyError> {
    if factor.is_empty() {
        return Err(PolyError::Parse("empty factor".into()));
    }
    if factor.as_bytes()[0].is_ascii_digit() {
        let value: Rational = factor
            .parse()
            .map_err(|_| PolyError::Parse(format!("bad number `{factor}`")))?;
        *coeff *= value;
        return Ok(());
    }
    let (name, exp) = match factor.split_once('^') {
        Some((n, e)) => (
            n,
            e.parse::<u32>()
                .map_err(|_| PolyError::Parse(format!("bad exponent in `{factor}`")))?,
        ),
        None => (factor, 1),
    };
    let var = names
        .iter()
        .position(|v| v == name)
        .ok_or_else(|| PolyError::Parse(format!("unknown variable `{name}`")))?;
    exps[var] += exp;
    Ok(())
}
