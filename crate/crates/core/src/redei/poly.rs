use serde::{Deserialize, Serialize};

use crate::gf::{Field, FieldElement};

/// Dense univariate polynomial, coefficients from the constant term up.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensePoly {
    coeffs: Vec<FieldElement>,
}

impl DensePoly {
    pub fn zero() -> DensePoly {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElement) -> DensePoly {
        DensePoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> DensePoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn eval(&self, f: &Field, y: FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, y), c))
    }

    /// Multiplies by `a·Y − b`.
    pub fn mul_linear(&self, f: &Field, a: FieldElement, b: FieldElement) -> DensePoly {
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] = f.add(out[i + 1], f.mul(a, c));
            out[i] = f.sub(out[i], f.mul(b, c));
        }
        DensePoly::from_coeffs(out)
    }

    pub fn add(&self, f: &Field, other: &DensePoly) -> DensePoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        DensePoly::from_coeffs((0..len).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, f: &Field, s: FieldElement) -> DensePoly {
        DensePoly::from_coeffs(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// `(Y − r)^e`.
    pub fn linear_power(f: &Field, r: FieldElement, e: usize) -> DensePoly {
        (0..e).fold(DensePoly::constant(FieldElement::ONE), |acc, _| acc.mul_linear(f, FieldElement::ONE, r))
    }

    /// Divides by `Y − r`, returning the quotient and the remainder `self(r)`.
    pub fn synthetic_division(&self, f: &Field, r: FieldElement) -> (DensePoly, FieldElement) {
        let Some(deg) = self.degree() else {
            return (DensePoly::zero(), FieldElement::ZERO);
        };
        let mut quotient = vec![FieldElement::ZERO; deg];
        let mut carry = FieldElement::ZERO;
        for i in (0..=deg).rev() {
            carry = f.add(f.mul(carry, r), self.coeffs[i]);
            if i > 0 {
                quotient[i - 1] = carry;
            }
        }
        (DensePoly::from_coeffs(quotient), carry)
    }

    /// Multiplicity of `r` as a root; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, f: &Field, r: FieldElement) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut current = self.clone();
        let mut mult = 0;
        loop {
            let (quot, rem) = current.synthetic_division(f, r);
            if !rem.is_zero() {
                return Some(mult);
            }
            mult += 1;
            current = quot;
        }
    }
}
