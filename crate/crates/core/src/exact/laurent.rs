use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;

use super::Rat;

/// Monomial `z_1^{e_1} ... z_n^{e_n}` with integer exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZMonomial(pub Vec<i64>);

impl ZMonomial {
    pub fn one(nvars: usize) -> Self {
        ZMonomial(vec![0; nvars])
    }

    /// The variable `z_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        ZMonomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &ZMonomial) -> ZMonomial {
        assert_eq!(self.0.len(), other.0.len());
        ZMonomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i64) -> ZMonomial {
        ZMonomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn inv(&self) -> ZMonomial {
        self.pow(-1)
    }

    pub fn eval(&self, z: &[Rat]) -> Rat {
        assert_eq!(z.len(), self.0.len());
        let mut acc = Rat::from(1);
        for (zi, &e) in z.iter().zip(&self.0) {
            if e != 0 {
                acc *= zi.clone().pow(e as i32);
            }
        }
        acc
    }

    pub fn eval_f64(&self, z: &[f64]) -> f64 {
        z.iter().zip(&self.0).map(|(zi, &e)| zi.powi(e as i32)).product()
    }
}

impl fmt::Display for ZMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Laurent polynomial in the argument variables `z_1, ..., z_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ZMonomial, Rat>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(m: ZMonomial, c: Rat) -> Self {
        let mut p = LaurentPoly::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        LaurentPoly::monomial(ZMonomial::one(nvars), c)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ZMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: ZMonomial, c: Rat) {
        assert_eq!(m.nvars(), self.nvars);
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, other: &LaurentPoly, c: &Rat, m: &ZMonomial) {
        for (mo, co) in &other.terms {
            self.add_term(mo.mul(m), Rat::from(co * c));
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::from(1), &ZMonomial::one(self.nvars));
        out
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        out.add_scaled(self, c, &ZMonomial::one(self.nvars));
        out
    }

    pub fn mul_monomial(&self, m: &ZMonomial) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        out.add_scaled(self, &Rat::from(1), m);
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nvars);
        for (m, c) in &other.terms {
            out.add_scaled(self, c, m);
        }
        out
    }

    pub fn eval(&self, z: &[Rat]) -> Rat {
        self.terms.iter().map(|(m, c)| m.eval(z) * c).sum()
    }

    /// Value at `z = (1, ..., 1)`: the sum of the coefficients.
    pub fn eval_at_one(&self) -> Rat {
        self.terms.values().sum()
    }

    /// Minimum and maximum exponent of variable `i`, if nonzero.
    pub fn exponent_range(&self, i: usize) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|m| m.0[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if m.is_one() { format!("{c}") } else { format!("({c})*{m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
