use std::collections::BTreeMap;
use std::fmt;

use super::{rat_pow, Rat, UPoly};

/// Sparse multivariate polynomial over the rationals in `nvars` variables.
///
/// Exponent vectors are kept in a `BTreeMap`, so equality is structural and
/// iteration order is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Rat::from(1))
    }

    /// The variable `X_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.add_term(e, Rat::from(1));
        p
    }

    pub fn monomial(exps: Vec<u32>, c: Rat) -> Self {
        let mut p = MPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length mismatch");
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
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

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        self.scale(&Rat::from(-1))
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if *c == 0 {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), Rat::from(a * c))).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, Rat::from(ca * cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Degree in variable `i`; `None` is the degree of the zero polynomial.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Rat::new();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                t *= rat_pow(xi, ei);
            }
            acc += t;
        }
        acc
    }

    /// Substitute variable `i` by the univariate-in-`X_i` polynomial `u(X_i)`.
    pub fn substitute_univariate(&self, i: usize, u: &UPoly) -> MPoly {
        let ui = u.compose_mpoly(&MPoly::var(self.nvars, i));
        let mut powers: Vec<MPoly> = vec![MPoly::one(self.nvars)];
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            while powers.len() <= e[i] as usize {
                let next = powers.last().unwrap().mul(&ui);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let m = MPoly::monomial(rest, c.clone());
            out = out.add(&m.mul(&powers[e[i] as usize]));
        }
        out
    }

    /// Write the polynomial in a single variable `i` with polynomial
    /// coefficients: `self = sum_d X_i^d * out[d]`, `out[d]` free of `X_i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<MPoly> {
        let deg = match self.degree_in(i) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![MPoly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let d = rest[i] as usize;
            rest[i] = 0;
            out[d].add_term(rest, c.clone());
        }
        out
    }

    /// Format with variables named `k1, k2, ...`.
    pub fn to_string_with(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < 0;
            let abs = Rat::from(c.abs_ref());
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, &d)| {
                    if d == 1 {
                        format!("{prefix}{}", i + 1)
                    } else {
                        format!("{prefix}{}^{d}", i + 1)
                    }
                })
                .collect();
            if vars.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if abs != 1 {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&vars.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("k"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn product_and_eval_agree() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let a = x.add(&y.scale(&rat(3, 2)));
        let b = x.mul(&y).sub(&MPoly::constant(2, Rat::from(4)));
        let pt = [rat(2, 3), rat(-5, 1)];
        assert_eq!(a.mul(&b).eval(&pt), a.eval(&pt) * b.eval(&pt));
    }

    #[test]
    fn degree_of_zero_is_none() {
        let z = MPoly::zero(3);
        assert_eq!(z.degree_in(1), None);
        let x = MPoly::var(3, 1).pow(4);
        assert_eq!(x.degree_in(1), Some(4));
        assert_eq!(x.degree_in(0), Some(0));
    }

    #[test]
    fn substitution_matches_eval() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.pow(3).mul(&y).add(&x.scale(&rat(-2, 1)));
        let u = UPoly::from_coeffs(vec![rat(1, 1), rat(1, 1)]);
        let q = p.substitute_univariate(0, &u);
        let pt = [rat(3, 7), rat(2, 1)];
        let shifted = [Rat::from(&pt[0] + 1), pt[1].clone()];
        assert_eq!(q.eval(&pt), p.eval(&shifted));
    }

    #[test]
    fn display_is_readable() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = y.pow(2).scale(&rat(5, 1)).sub(&x.pow(2)).sub(&x.mul(&y).scale(&rat(4, 1)));
        assert_eq!(p.to_string(), "-k1^2 - 4*k1*k2 + 5*k2^2");
    }
}
