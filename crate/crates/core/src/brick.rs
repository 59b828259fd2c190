//! Shifted and modulated bricks
//! `B = sum_{k_1>=1, 1<=k_i<=k_{i-1}+m_i} prod_i z_i^{-k_i} / (k_i + j_i)^{s_i}`
//! and their exact decomposition into multiple polylogarithms
//! `La_s(x) = sum_{l_1>=...>=l_N>=1} prod_i x_i^{l_i} / l_i^{s_i}`.
//!
//! The recursion interpolates between the polylogarithm (all indices
//! shifted by `j` and freed from the modulations) and the brick, switching
//! one index at a time. Switching index `p` costs a lower-range correction
//! (a finite sum `Q` times a shallower brick) and, for `p >= 2`, an
//! upper-range correction in which `l_p - k_{p-1}` is pinned to a constant
//! `K` and indices `p-1`, `p` merge through a two-pole partial fraction.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use rug::Integer;

use crate::error::{Error, Result};
use crate::exact::{lcm_upto, pfd_univariate, rat_pow, LaurentPoly, Rat, UniTerm, ZMonomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Brick {
    pub s: Vec<i64>,
    /// Modulations, `m[0] == 0`.
    pub m: Vec<u64>,
    /// Shifts.
    pub j: Vec<u64>,
    pub args: Vec<ZMonomial>,
}

impl Brick {
    pub fn new(s: Vec<i64>, m: Vec<u64>, j: Vec<u64>, args: Vec<ZMonomial>) -> Self {
        let n = s.len();
        assert!(m.len() == n && j.len() == n && args.len() == n, "brick dimension mismatch");
        assert!(n == 0 || m[0] == 0, "first modulation must vanish");
        Brick { s, m, j, args }
    }

    /// Brick with `z_i` as argument of the `i`-th index.
    pub fn standard(s: Vec<i64>, m: Vec<u64>, j: Vec<u64>) -> Self {
        let n = s.len();
        let args = (0..n).map(|i| ZMonomial::var(n, i)).collect();
        Brick::new(s, m, j, args)
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    fn prefix(&self, len: usize) -> Brick {
        Brick {
            s: self.s[..len].to_vec(),
            m: self.m[..len].to_vec(),
            j: self.j[..len].to_vec(),
            args: self.args[..len].to_vec(),
        }
    }
}

/// `La_s(args)`; arguments are the literal polylogarithm arguments.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaTerm {
    pub s: Vec<i64>,
    pub args: Vec<ZMonomial>,
}

impl LaTerm {
    pub fn new(s: Vec<i64>, args: Vec<ZMonomial>) -> Self {
        assert_eq!(s.len(), args.len());
        LaTerm { s, args }
    }

    pub fn empty() -> Self {
        LaTerm { s: Vec::new(), args: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.s.len()
    }

    pub fn weight(&self) -> i64 {
        self.s.iter().sum()
    }
}

impl Ord for LaTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.depth(), self.weight(), &self.s, &self.args).cmp(&(
            other.depth(),
            other.weight(),
            &other.s,
            &other.args,
        ))
    }
}

impl PartialOrd for LaTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.s.iter().map(|x| x.to_string()).collect();
        let a: Vec<String> = self.args.iter().map(|x| x.to_string()).collect();
        write!(f, "La[{}]({})", s.join(","), a.join(", "))
    }
}

/// Linear combination of polylogarithms with Laurent-polynomial
/// coefficients. The depth-0 term `LaTerm::empty()` carries the constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    nvars: usize,
    terms: BTreeMap<LaTerm, LaurentPoly>,
}

impl Decomposition {
    pub fn zero(nvars: usize) -> Self {
        Decomposition { nvars, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, t: LaTerm, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Decomposition, c: &LaurentPoly) {
        for (t, p) in &other.terms {
            self.add_term(t.clone(), &p.mul(c));
        }
    }

    /// All terms, including the depth-0 constant if nonzero, in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&LaTerm, &LaurentPoly)> {
        self.terms.iter()
    }

    /// Terms of positive depth.
    pub fn la_terms(&self) -> impl Iterator<Item = (&LaTerm, &LaurentPoly)> {
        self.terms.iter().filter(|(t, _)| t.depth() > 0)
    }

    pub fn constant(&self) -> LaurentPoly {
        self.terms
            .get(&LaTerm::empty())
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.nvars))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{c}] * {t}")?;
        }
        Ok(())
    }
}

/// `Q(K) = sum_{K>=k_1>=...>=k_d>=1} prod_i x_i^{-k_i} / k_i^{s_i}`, with
/// `Q = 1` for `d = 0` and `Q = 0` for `K = 0`.
pub fn q_poly(s: &[i64], k: u64, args: &[ZMonomial], nvars: usize) -> LaurentPoly {
    assert_eq!(s.len(), args.len());
    if s.is_empty() {
        return LaurentPoly::constant(nvars, Rat::from(1));
    }
    let kk = k as usize;
    // g[n] = partial sum over the deeper levels with outer index bounded by n.
    let mut g: Vec<LaurentPoly> = vec![LaurentPoly::constant(nvars, Rat::from(1)); kk + 1];
    for level in (0..s.len()).rev() {
        let mut next = vec![LaurentPoly::zero(nvars); kk + 1];
        let mut acc = LaurentPoly::zero(nvars);
        for n in 1..=kk {
            let c = pow_i64(n as i64, -s[level]);
            acc.add_scaled(&g[n], &c, &args[level].pow(-(n as i64)));
            next[n] = acc.clone();
        }
        g = next;
    }
    g[kk].clone()
}

fn pow_i64(n: i64, e: i64) -> Rat {
    let b = Rat::from(n);
    if e >= 0 {
        rat_pow(&b, e as u32)
    } else {
        Rat::from(1) / rat_pow(&b, (-e) as u32)
    }
}

/// Memoizing decomposer. One engine can be reused across calls as long as
/// the number of argument variables stays fixed.
#[derive(Default)]
pub struct BrickEngine {
    memo: HashMap<Brick, Rc<Decomposition>>,
}

impl BrickEngine {
    pub fn new() -> Self {
        BrickEngine::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn decompose(&mut self, b: &Brick) -> Rc<Decomposition> {
        if let Some(d) = self.memo.get(b) {
            return d.clone();
        }
        let d = Rc::new(self.compute(b));
        self.memo.insert(b.clone(), d.clone());
        d
    }

    fn compute(&mut self, b: &Brick) -> Decomposition {
        let n = b.depth();
        let nv = b.args.first().map_or(0, |a| a.nvars());
        let mut out = Decomposition::zero(nv);
        if n == 0 {
            out.add_term(LaTerm::empty(), &LaurentPoly::constant(nv, Rat::from(1)));
            return out;
        }
        let one = Rat::from(1);
        // suffix[p] = prod_{i>=p} z_i^{j_i}
        let mut suffix = vec![ZMonomial::one(nv); n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1].mul(&b.args[i].pow(b.j[i] as i64));
        }
        let inv_args: Vec<ZMonomial> = b.args.iter().map(|a| a.inv()).collect();
        out.add_term(LaTerm::new(b.s.clone(), inv_args), &LaurentPoly::monomial(suffix[0].clone(), one.clone()));

        for p in 0..n {
            if b.j[p] == 0 {
                continue;
            }
            let q = q_poly(&b.s[p..], b.j[p], &b.args[p..], nv);
            let coeff = q.mul_monomial(&suffix[p]).scale(&Rat::from(-1));
            if p == 0 {
                out.add_term(LaTerm::empty(), &coeff);
            } else {
                let sub = self.decompose(&b.prefix(p));
                out.add_scaled(&sub, &coeff);
            }
        }

        for p in 1..n {
            let lo = b.j[p - 1];
            let hi = b.j[p] + b.m[p];
            if lo == hi {
                continue;
            }
            let eps = if lo < hi { Rat::from(1) } else { Rat::from(-1) };
            for k in lo.min(hi) + 1..=lo.max(hi) {
                let base = suffix[p].mul(&b.args[p].pow(-(k as i64)));
                for (sub_brick, c) in merged_bricks(b, p, k) {
                    let sub = self.decompose(&sub_brick);
                    let coeff = LaurentPoly::monomial(base.clone(), Rat::from(&c * &eps));
                    out.add_scaled(&sub, &coeff);
                }
            }
        }
        out
    }
}

/// Bricks of depth `N - 1` obtained by pinning `l_p = k_{p-1} + K` and
/// splitting `1 / ((k + j_{p-1})^{s_{p-1}} (k + K)^{s_p})` into partial fractions.
fn merged_bricks(b: &Brick, p: usize, k: u64) -> Vec<(Brick, Rat)> {
    let n = b.depth();
    let terms = pfd_univariate(b.s[p - 1], b.s[p], &Rat::from(b.j[p - 1]), &Rat::from(k));
    let merged_arg = b.args[p - 1].mul(&b.args[p]);
    terms
        .into_iter()
        .map(|t| {
            let (coeff, shift, exp) = match t {
                UniTerm::Pole { coeff, shift, exp } => {
                    let shift = shift.numer().to_u64().expect("non-negative integer shift");
                    (coeff, shift, exp)
                }
                UniTerm::Power { coeff, deg } => (coeff, 0, -(deg as i64)),
            };
            let mut s = b.s[..p - 1].to_vec();
            s.push(exp);
            s.extend_from_slice(&b.s[p + 1..]);
            let mut m = b.m[..p].to_vec();
            let mut j = b.j[..p - 1].to_vec();
            j.push(shift);
            let mut args = b.args[..p - 1].to_vec();
            args.push(merged_arg.clone());
            args.extend_from_slice(&b.args[p + 1..]);
            for i in p + 1..n {
                m.push(if i == p + 1 { k } else { 0 });
                j.push(0);
            }
            (Brick::new(s, m, j, args), coeff)
        })
        .collect()
}

/// Decompose a single brick with a fresh engine.
pub fn decompose_brick(b: &Brick) -> Decomposition {
    (*BrickEngine::new().decompose(b)).clone()
}

/// Outcome of the denominator and degree check on a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub denominator_ok: bool,
    pub degree_ok: bool,
    /// Scaling factor `d_n^Sigma` used in the denominator check.
    pub scale: Integer,
    /// Admissible range for the exponent of `z_1`.
    pub z1_range: (i64, i64),
    /// Whether every coefficient was a constant after all (only meaningful
    /// for unmodulated bricks).
    pub constant_coefficients: bool,
    /// Largest exponent of `z_1` met in the coefficients.
    pub max_z1_degree: i64,
    /// `I_N`, which bounds the `z_1` degree of modulated bricks in practice.
    pub i_bound: u64,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.denominator_ok && self.degree_ok
    }
}

/// Bound parameters `(I_N, J_N, K_N, Sigma_N)` of a brick.
pub fn bound_parameters(b: &Brick) -> (u64, u64, u64, i64) {
    let n = b.depth();
    let mut big_i = 0;
    let mut big_k = 0;
    let mut mm = 0u64;
    for i in 0..n {
        let prev = if i == 0 { 0 } else { b.j[i - 1] };
        let t = prev.max(b.j[i] + b.m[i]);
        big_i = big_i.max(t + mm);
        big_k = big_k.max(t);
        mm += b.m[i];
    }
    let big_j = b.j.iter().copied().max().unwrap_or(0);
    (big_i, big_j, big_k, b.s.iter().sum())
}

/// Check integrality after scaling by `d_{I_N}^{Sigma_N}` and the range of
/// `z_1` exponents (`d_{J_N}` and `[0, J_N]` for unmodulated bricks). The
/// brick arguments must be the independent variables `z_1, ..., z_N`.
pub fn certify_bounds(b: &Brick, d: &Decomposition) -> Result<Certificate> {
    if b.s.iter().any(|&s| s <= 0) {
        return Err(Error::InvalidInput("certificate requires positive exponents".into()));
    }
    let (big_i, big_j, big_k, sigma) = bound_parameters(b);
    let unmodulated = b.m.iter().all(|&m| m == 0);
    let (level, top) = if unmodulated { (big_j, big_j) } else { (big_i, big_k) };
    let scale = lcm_upto(level).pow(sigma as u32);
    let scale_rat = Rat::from(scale.clone());
    let mut denominator_ok = true;
    let mut degree_ok = true;
    let mut constant_coefficients = true;
    let mut max_z1_degree = i64::MIN;
    for (_, c) in d.terms() {
        for (m, v) in c.terms() {
            if *Rat::from(v * &scale_rat).denom() != 1 {
                denominator_ok = false;
            }
            let e = m.0.first().copied().unwrap_or(0);
            max_z1_degree = max_z1_degree.max(e);
            if e < 0 || e > top as i64 {
                degree_ok = false;
            }
            if !m.is_one() {
                constant_coefficients = false;
            }
        }
    }
    Ok(Certificate {
        denominator_ok,
        degree_ok,
        scale,
        z1_range: (0, top as i64),
        constant_coefficients,
        max_z1_degree,
        i_bound: big_i,
    })
}

use rug::ops::Pow;
