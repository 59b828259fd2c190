use std::fmt;

use super::{binomial, rat_pow, MPoly, Rat};

/// Dense univariate polynomial with rational coefficients, index = degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// `c * X^d`.
    pub fn monomial(c: Rat, d: usize) -> Self {
        let mut coeffs = vec![Rat::new(); d + 1];
        coeffs[d] = c;
        UPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Rat {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff(i) + other.coeff(i))
            .collect();
        UPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.scale(&Rat::from(-1)))
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|a| Rat::from(a * c)).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Rat::from(a * b);
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::constant(Rat::from(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// `Q(X) = P(X + a)`.
    pub fn shift(&self, a: &Rat) -> UPoly {
        let n = self.coeffs.len();
        let mut out = vec![Rat::new(); n];
        for (d, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            for k in 0..=d {
                let b = Rat::from(binomial(d as u64, k as u64));
                out[k] += b * rat_pow(a, (d - k) as u32) * c;
            }
        }
        UPoly::from_coeffs(out)
    }

    /// `P(q)` where `q` is a multivariate polynomial.
    pub fn compose_mpoly(&self, q: &MPoly) -> MPoly {
        let mut acc = MPoly::zero(q.nvars());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&MPoly::constant(q.nvars(), c.clone()));
        }
        acc
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rat::new(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = Rat::from(&r[top] / &lead);
            if c != 0 {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[top - dd + i] -= Rat::from(&c * dc);
                }
            }
            q[top - dd] = c;
            r.pop();
        }
        (UPoly::from_coeffs(q), UPoly::from_coeffs(r))
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*X")?,
                _ => write!(f, "{c}*X^{d}")?,
            }
        }
        Ok(())
    }
}
