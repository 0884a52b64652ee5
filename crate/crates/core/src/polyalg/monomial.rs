use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial `x1^e1 * ... * xn^en`.
///
/// Ordered graded-lexicographically: total degree first, then by the
/// exponent of `x1`, then `x2`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    /// The exponent vector of the constant monomial `1`.
    pub fn zero(dimension: usize) -> Self {
        ExponentVector(vec![0; dimension])
    }

    /// The exponent vector of the variable `x_{var+1}`.
    pub fn unit(dimension: usize, var: usize) -> Self {
        let mut exps = vec![0; dimension];
        exps[var] = 1;
        ExponentVector(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    /// Exponent vector of the product of the two monomials.
    pub fn product(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.0.len(), other.0.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exponent vector of `self / other` when `other` divides `self`.
    pub fn quotient(&self, other: &ExponentVector) -> Option<ExponentVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    pub(crate) fn with(&self, var: usize, exp: u32) -> ExponentVector {
        let mut exps = self.0.clone();
        exps[var] = exp;
        ExponentVector(exps)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = variable_names(self.0.len());
        let mut first = true;
        for (name, &e) in names.iter().zip(&self.0) {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Variable names used for display and parsing: `x, y, z` up to three
/// dimensions, `x1 .. xn` beyond.
pub fn variable_names(dimension: usize) -> Vec<String> {
    if dimension <= 3 {
        ["x", "y", "z"][..dimension]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=dimension).map(|i| format!("x{i}")).collect()
    }
}

/// All exponent vectors of total degree `degree` in `dimension` variables,
/// in ascending graded-lex order.
pub fn monomials_of_degree(dimension: usize, degree: u32) -> Vec<ExponentVector> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<ExponentVector>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=remaining {
            prefix.push(e);
            fill(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    if dimension == 0 {
        return if degree == 0 {
            vec![ExponentVector(Vec::new())]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    fill(&mut Vec::with_capacity(dimension), degree, dimension, &mut out);
    out
}

/// All exponent vectors of total degree at most `degree`.
pub fn monomials_up_to(dimension: usize, degree: u32) -> Vec<ExponentVector> {
    (0..=degree)
        .flat_map(|d| monomials_of_degree(dimension, d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x2 = ExponentVector::new(vec![2, 0]);
        let xy = ExponentVector::new(vec![1, 1]);
        let y2 = ExponentVector::new(vec![0, 2]);
        let x = ExponentVector::new(vec![1, 0]);
        assert!(x2 > xy && xy > y2 && y2 > x);
    }

    #[test]
    fn monomial_counts() {
        // C(d + n - 1, n - 1)
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_of_degree(4, 8).len(), 165);
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        let m = monomials_of_degree(3, 2);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn display() {
        assert_eq!(ExponentVector::new(vec![2, 1]).to_string(), "x^2*y");
        assert_eq!(ExponentVector::new(vec![0, 0, 0]).to_string(), "1");
        assert_eq!(ExponentVector::new(vec![0, 1, 0, 3]).to_string(), "x2*x4^3");
    }
}
