//! Partial fractions of `P(X) / prod_i (X_i)_{n_i+1}^{A_i}`.
//!
//! The denominator factors over the variables, so every monomial of `P`
//! splits into a product of univariate expansions of `X^b / (X)_{n+1}^A`.
//! Each univariate piece is an entire monomial `X^a` or a pole
//! `1 / (X + j)^s` with `0 <= j <= n`, `1 <= s <= A`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::brick::Brick;
use crate::error::{Error, Result};
use crate::exact::{binomial, rat_pow, Rat, UPoly, ZMonomial};
use crate::series::MultSeries;

/// Per-variable factor of an elementary fraction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    /// `X^e`, `e >= 0`.
    Power(u32),
    /// `1 / (X + shift)^exp`, `exp >= 1`.
    Pole { shift: u32, exp: u32 },
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Power(e) => write!(f, "X^{e}"),
            Factor::Pole { shift, exp } => write!(f, "(X+{shift})^-{exp}"),
        }
    }
}

/// One elementary fraction `prod_i factor_i(X_i)`, indexed by its factors.
/// The variables carrying a `Power` form the set `I`.
pub type Quadruplet = Vec<Factor>;

/// Indices (0-based) of the entire variables.
pub fn entire_set(q: &[Factor]) -> Vec<usize> {
    q.iter()
        .enumerate()
        .filter(|(_, f)| matches!(f, Factor::Power(_)))
        .map(|(i, _)| i)
        .collect()
}

/// Partial-fraction decomposition: a rational coefficient per quadruplet.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pfd {
    pub terms: BTreeMap<Quadruplet, Rat>,
}

impl Pfd {
    fn add(&mut self, q: Quadruplet, c: Rat) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(q).or_default();
        *e += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `(X)_{n+1}^A` as a dense polynomial.
pub fn pochhammer_power(n: u32, a: u32) -> UPoly {
    let mut d = UPoly::constant(Rat::from(1));
    for j in 0..=n {
        d = d.mul(&UPoly::from_coeffs(vec![Rat::from(j), Rat::from(1)]));
    }
    d.pow(a)
}

/// Expansion of `X^b / (X)_{n+1}^A`.
fn univariate(b: u32, n: u32, a: u32) -> Vec<(Factor, Rat)> {
    let mut out = Vec::new();
    let den = pochhammer_power(n, a);
    if b as usize >= den.degree().unwrap() {
        let (q, _) = UPoly::monomial(Rat::from(1), b as usize).div_rem(&den);
        for (d, c) in q.coeffs().iter().enumerate() {
            if *c != 0 {
                out.push((Factor::Power(d as u32), c.clone()));
            }
        }
    }
    let al = a as usize;
    for j in 0..=n {
        // Taylor coefficients in y = X + j of (y - j)^b / prod_{j' != j} (y + j' - j)^A.
        let mut g: Vec<Rat> = (0..al)
            .map(|k| {
                if k as u32 > b {
                    Rat::new()
                } else {
                    Rat::from(binomial(b as u64, k as u64)) * rat_pow(&Rat::from(-(j as i64)), b - k as u32)
                }
            })
            .collect();
        for jp in 0..=n {
            if jp == j {
                continue;
            }
            let c = Rat::from(jp as i64 - j as i64);
            let inv_c = Rat::from(1) / &c;
            let lead = rat_pow(&inv_c, a);
            let series: Vec<Rat> = (0..al)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    Rat::from(binomial(a as u64 + k as u64 - 1, k as u64) * sign)
                        * rat_pow(&inv_c, k as u32)
                        * &lead
                })
                .collect();
            let mut next = vec![Rat::new(); al];
            for (u, gu) in g.iter().enumerate() {
                if *gu == 0 {
                    continue;
                }
                for (v, sv) in series.iter().enumerate().take(al - u) {
                    next[u + v] += Rat::from(gu * sv);
                }
            }
            g = next;
        }
        for s in 1..=a {
            let c = &g[(a - s) as usize];
            if *c != 0 {
                out.push((Factor::Pole { shift: j, exp: s }, c.clone()));
            }
        }
    }
    out
}

/// Decompose the summand of a shift-normalised series into elementary
/// fractions. The representation is unique, so equal inputs give equal maps.
pub fn decompose_rational(s: &MultSeries) -> Result<Pfd> {
    if !s.is_normalized() {
        return Err(Error::ShiftsNotNormalized);
    }
    let p = s.depth();
    let mut cache: HashMap<(usize, u32), Vec<(Factor, Rat)>> = HashMap::new();
    let mut out = Pfd::default();
    for (exps, c) in s.numerator.terms() {
        let mut partial: Vec<(Quadruplet, Rat)> = vec![(Vec::with_capacity(p), c.clone())];
        for i in 0..p {
            let uni = cache
                .entry((i, exps[i]))
                .or_insert_with(|| univariate(exps[i], s.n[i], s.a[i]));
            let mut next = Vec::with_capacity(partial.len() * uni.len());
            for (q, cq) in &partial {
                for (f, cf) in uni.iter() {
                    let mut q2 = q.clone();
                    q2.push(f.clone());
                    next.push((q2, Rat::from(cq * cf)));
                }
            }
            partial = next;
        }
        for (q, c) in partial {
            out.add(q, c);
        }
    }
    out.prune();
    Ok(out)
}

/// An elementary fraction together with the argument monomials of its
/// summation indices: `sum_{k_1>=...>=k_p>=1} prod_i factor_i(k_i) z_i^{-k_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementarySeries {
    pub factors: Quadruplet,
    pub args: Vec<ZMonomial>,
}

impl ElementarySeries {
    /// The same series as an unmodulated brick; entire factors `X^a`
    /// become exponent `-a` with shift 0.
    pub fn to_brick(&self) -> Brick {
        let mut s = Vec::new();
        let mut j = Vec::new();
        for f in &self.factors {
            match f {
                Factor::Power(a) => {
                    s.push(-(*a as i64));
                    j.push(0);
                }
                Factor::Pole { shift, exp } => {
                    s.push(*exp as i64);
                    j.push(*shift as u64);
                }
            }
        }
        let m = vec![0; s.len()];
        Brick::new(s, m, j, self.args.clone())
    }
}

pub fn elementary_series(q: &[Factor], args: &[ZMonomial]) -> ElementarySeries {
    assert_eq!(q.len(), args.len());
    ElementarySeries { factors: q.to_vec(), args: args.to_vec() }
}
