//! Decomposition at `z = 1` into multiple zeta values.
//!
//! A convergent series is split into elementary sums. Sums without entire
//! factors are bricks; their polylogarithm coefficients are evaluated at 1
//! and each `La_s(1)` is replaced by its shuffle-regularized value. Sums
//! with entire factors `k_t^e` are summed over `k_t` with Bernoulli
//! polynomials, lowering the depth by one, and the process recurses.
//! Individually log-divergent pieces are grouped so that every recursive
//! call receives a log-divergent total.

use std::collections::{BTreeMap, HashMap};

use crate::brick::{Brick, BrickEngine, Decomposition};
use crate::error::{Error, Result};
use crate::exact::{bernoulli_polynomial, binomial, rat_pow, Rat, UPoly, ZMonomial};
use crate::pfd::{decompose_rational, Factor, Pfd};
use crate::polylog::{MzvExpr, Regularizer};
use crate::series::{check_convergence, normalize_shifts, MultSeries};

/// Elementary sums keyed by their factors, merged on insertion.
pub type TermMap = BTreeMap<Vec<Factor>, Rat>;

/// `coeff * sum_{k_1>=...>=k_p>=1} prod_i factor_i(k_i)` at `z = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementarySum {
    pub coeff: Rat,
    pub factors: Vec<Factor>,
}

impl ElementarySum {
    pub fn depth(&self) -> usize {
        self.factors.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermClass {
    /// Prefix condition holds: the sum converges or diverges at most
    /// logarithmically on its own.
    E0,
    E1,
}

/// `E0` iff for every prefix `j`, the entire exponents sum to at most the
/// pole exponents minus `j` (1-based).
pub fn classify_term(factors: &[Factor]) -> TermClass {
    let mut mono = 0i64;
    let mut pole = 0i64;
    for (j, f) in factors.iter().enumerate() {
        match f {
            Factor::Power(e) => mono += *e as i64,
            Factor::Pole { exp, .. } => pole += *exp as i64,
        }
        if mono > pole - (j as i64 + 1) {
            return TermClass::E1;
        }
    }
    TermClass::E0
}

fn add_term(map: &mut TermMap, key: Vec<Factor>, c: Rat) {
    if c == 0 {
        return;
    }
    let e = map.entry(key.clone()).or_default();
    *e += c;
    if *e == 0 {
        map.remove(&key);
    }
}

/// `g(l) * factor(l)` rewritten as a combination of single factors.
fn reduce_factor(f: &Factor, g: &UPoly) -> Vec<(Rat, Factor)> {
    let mut out = Vec::new();
    match f {
        Factor::Power(e) => {
            for (a, c) in g.coeffs().iter().enumerate() {
                if *c != 0 {
                    out.push((c.clone(), Factor::Power(a as u32 + e)));
                }
            }
        }
        Factor::Pole { shift, exp } => {
            // g(l) = h(y) with y = l + shift
            let h = g.shift(&Rat::from(-(*shift as i64)));
            let mut poly: BTreeMap<u32, Rat> = BTreeMap::new();
            for (a, c) in h.coeffs().iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                let a = a as u32;
                if a < *exp {
                    out.push((c.clone(), Factor::Pole { shift: *shift, exp: exp - a }));
                } else {
                    let d = a - exp;
                    for b in 0..=d {
                        let v = Rat::from(binomial(d as u64, b as u64))
                            * rat_pow(&Rat::from(*shift), d - b)
                            * c;
                        *poly.entry(b).or_default() += v;
                    }
                }
            }
            for (b, c) in poly {
                if c != 0 {
                    out.push((c, Factor::Power(b)));
                }
            }
        }
    }
    out
}

/// Sum out the entire variable `t` (0-based, `t >= 1`):
/// `sum_{k_t = k_{t+1}}^{k_{t-1}} k_t^e = G(k_{t-1} + 1) - G(k_{t+1})` with
/// `G = B_{e+1} / (e+1)`, and `k_{t+1} = 1` when `t` is the last index.
pub fn bernoulli_reduce(factors: &[Factor], t: usize) -> Result<TermMap> {
    let p = factors.len();
    let e = match factors.get(t) {
        Some(Factor::Power(e)) if t >= 1 => *e,
        _ => return Err(Error::ContractViolation(format!("no entire variable at index {t}"))),
    };
    let g = bernoulli_polynomial(e as usize + 1).scale(&Rat::from((1, e as u64 + 1)));
    let mut out = TermMap::new();
    let upper = g.shift(&Rat::from(1));
    for (c, f) in reduce_factor(&factors[t - 1], &upper) {
        let mut key: Vec<Factor> = factors.to_vec();
        key[t - 1] = f;
        key.remove(t);
        add_term(&mut out, key, c);
    }
    if t + 1 < p {
        for (c, f) in reduce_factor(&factors[t + 1], &g) {
            let mut key: Vec<Factor> = factors.to_vec();
            key[t + 1] = f;
            key.remove(t);
            add_term(&mut out, key, -c);
        }
    } else {
        let mut key = factors.to_vec();
        key.remove(t);
        add_term(&mut out, key, -g.eval(&Rat::from(1)));
    }
    Ok(out)
}

/// Recursive engine. Bricks are decomposed with arguments `(w, 1, ..., 1)`
/// over a single variable `w` and the coefficients are evaluated at `w = 1`.
pub struct AtOneEngine {
    bricks: BrickEngine,
    reg: Regularizer,
    brick_values: HashMap<Vec<Factor>, MzvExpr>,
    budget: usize,
    spent: usize,
}

impl Default for AtOneEngine {
    fn default() -> Self {
        AtOneEngine::with_budget(50_000_000)
    }
}

impl AtOneEngine {
    pub fn new() -> Self {
        AtOneEngine::default()
    }

    /// Limit the total number of elementary sums processed.
    pub fn with_budget(budget: usize) -> Self {
        AtOneEngine {
            bricks: BrickEngine::new(),
            reg: Regularizer::new(),
            brick_values: HashMap::new(),
            budget,
            spent: 0,
        }
    }

    pub fn regularizer(&mut self) -> &mut Regularizer {
        &mut self.reg
    }

    /// Brick with arguments `(w, 1, ..., 1)`.
    pub fn brick_of(factors: &[Factor]) -> Brick {
        let n = factors.len();
        let mut s = Vec::with_capacity(n);
        let mut j = Vec::with_capacity(n);
        for f in factors {
            match f {
                Factor::Pole { shift, exp } => {
                    s.push(*exp as i64);
                    j.push(*shift as u64);
                }
                Factor::Power(_) => panic!("brick_of requires pole factors only"),
            }
        }
        let mut args = vec![ZMonomial::one(1); n];
        args[0] = ZMonomial::var(1, 0);
        Brick::new(s, vec![0; n], j, args)
    }

    /// Decomposition in `w` of the pole-only sum.
    pub fn brick_decomposition(&mut self, factors: &[Factor]) -> Decomposition {
        (*self.bricks.decompose(&AtOneEngine::brick_of(factors))).clone()
    }

    fn brick_value(&mut self, factors: &[Factor]) -> Result<MzvExpr> {
        if let Some(v) = self.brick_values.get(factors) {
            return Ok(v.clone());
        }
        let d = self.bricks.decompose(&AtOneEngine::brick_of(factors));
        let mut out = MzvExpr::zero();
        for (t, c) in d.terms() {
            let c1 = c.eval_at_one();
            if c1 == 0 {
                continue;
            }
            let s: Vec<u32> = t
                .s
                .iter()
                .map(|&x| {
                    u32::try_from(x).ok().filter(|&v| v >= 1).ok_or_else(|| {
                        Error::ContractViolation(format!("non-positive exponent in {t}"))
                    })
                })
                .collect::<Result<_>>()?;
            let v = self.reg.la_word_regularize(&s);
            out.add_scaled(&v, &c1);
        }
        self.brick_values.insert(factors.to_vec(), out.clone());
        Ok(out)
    }

    fn spend(&mut self, n: usize) -> Result<()> {
        self.spent += n;
        if self.spent > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    /// Regularized value of a log-divergent (or convergent) sum of elementary sums.
    pub fn regularized_value(&mut self, terms: &TermMap) -> Result<MzvExpr> {
        self.spend(terms.len())?;
        let mut out = MzvExpr::zero();
        let mut group = TermMap::new();
        for (factors, c) in terms {
            if factors.is_empty() {
                out.constant += c;
                continue;
            }
            let first_entire = factors.iter().position(|f| matches!(f, Factor::Power(_)));
            match (classify_term(factors), first_entire) {
                (TermClass::E0, None) => {
                    let v = self.brick_value(factors)?;
                    out.add_scaled(&v, c);
                }
                (TermClass::E0, Some(t)) => {
                    let reduced = bernoulli_reduce(factors, t)?;
                    let v = self.regularized_value(&reduced)?;
                    out.add_scaled(&v, c);
                }
                (TermClass::E1, Some(t)) if t >= 1 => {
                    for (k, v) in bernoulli_reduce(factors, t)? {
                        add_term(&mut group, k, v * c);
                    }
                }
                (TermClass::E1, _) => {
                    return Err(Error::ContractViolation(format!(
                        "divergent elementary sum without a reducible index: {factors:?}"
                    )));
                }
            }
        }
        if !group.is_empty() {
            let v = self.regularized_value(&group)?;
            out.add_scaled(&v, &Rat::from(1));
        }
        Ok(out)
    }

    /// Exact value of a series convergent at `z = 1`.
    pub fn decompose(&mut self, s: &MultSeries) -> Result<MzvExpr> {
        check_convergence(s)?;
        let norm = normalize_shifts(s);
        let pfd = decompose_rational(&norm)?;
        let out = self.regularized_value(&pfd_terms(&pfd))?;
        let bound = s.total_a();
        if out.max_weight() > bound {
            return Err(Error::ContractViolation(format!(
                "weight {} exceeds the bound {bound}",
                out.max_weight()
            )));
        }
        Ok(out)
    }
}

pub fn pfd_terms(pfd: &Pfd) -> TermMap {
    pfd.terms.iter().map(|(q, c)| (q.clone(), c.clone())).collect()
}

/// Convergent series at `z = 1` as a rational combination of multiple zeta values.
pub fn decompose_at_one(s: &MultSeries) -> Result<MzvExpr> {
    AtOneEngine::new().decompose(s)
}

/// Regularized value of a list of elementary sums.
pub fn regularized_value(terms: &[ElementarySum]) -> Result<MzvExpr> {
    let mut map = TermMap::new();
    for t in terms {
        add_term(&mut map, t.factors.clone(), t.coeff.clone());
    }
    AtOneEngine::new().regularized_value(&map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, MPoly};

    fn series(num: MPoly, a: Vec<u32>, n: Vec<u32>, r: Vec<u32>) -> MultSeries {
        MultSeries::new(num, a, n, r).unwrap()
    }

    #[test]
    fn classification() {
        use Factor::*;
        assert_eq!(classify_term(&[Pole { shift: 0, exp: 2 }, Power(0)]), TermClass::E0);
        assert_eq!(classify_term(&[Pole { shift: 0, exp: 2 }, Power(1)]), TermClass::E1);
        assert_eq!(classify_term(&[Pole { shift: 1, exp: 1 }, Pole { shift: 0, exp: 1 }]), TermClass::E0);
        assert_eq!(classify_term(&[Power(0), Pole { shift: 0, exp: 3 }]), TermClass::E1);
    }

    #[test]
    fn bernoulli_reduction_brute_force() {
        use Factor::*;
        let factors = vec![Pole { shift: 1, exp: 3 }, Power(2), Pole { shift: 2, exp: 2 }];
        let reduced = bernoulli_reduce(&factors, 1).unwrap();
        let val = |f: &Factor, k: i64| match f {
            Power(e) => rat_pow(&Rat::from(k), *e),
            Pole { shift, exp } => Rat::from(1) / rat_pow(&Rat::from(k + *shift as i64), *exp),
        };
        for (k1, k3) in [(5i64, 2i64), (4, 4), (7, 1)] {
            let direct: Rat = (k3..=k1).map(|k2| val(&factors[1], k2)).sum::<Rat>()
                * val(&factors[0], k1)
                * val(&factors[2], k3);
            let via: Rat = reduced
                .iter()
                .map(|(f, c)| Rat::from(val(&f[0], k1) * val(&f[1], k3)) * c)
                .sum();
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn zeta_values() {
        let z21 = decompose_at_one(&series(MPoly::one(2), vec![2, 1], vec![0, 0], vec![0, 0])).unwrap();
        let mut expect = MzvExpr::zeta(&[2, 1]);
        expect.add_term(vec![3], rat(1, 1));
        assert_eq!(z21, expect);

        let z3 = decompose_at_one(&series(MPoly::one(1), vec![3], vec![0], vec![0])).unwrap();
        assert_eq!(z3, MzvExpr::zeta(&[3]));
    }

    #[test]
    fn telescoping_is_rational() {
        // sum 1/(k(k+1)) = 1
        let v = decompose_at_one(&series(MPoly::one(1), vec![1], vec![1], vec![0])).unwrap();
        assert_eq!(v, MzvExpr::constant(rat(1, 1)));
    }

    #[test]
    fn entire_factor_in_inner_variable() {
        // sum_{k1>=k2>=1} k2^2 / (k1^4 k2) = (zeta(2) + zeta(3)) / 2
        let y = MPoly::var(2, 1);
        let v = decompose_at_one(&series(y.mul(&y), vec![4, 1], vec![0, 0], vec![0, 0])).unwrap();
        let z2 = rug::Float::with_val(128, 2).zeta();
        let z3 = rug::Float::with_val(128, 3).zeta();
        let expect = (z2 + z3) / 2u32;
        let got = v.numeric(128).unwrap();
        assert!(rug::Float::with_val(128, &got - &expect).abs().to_f64() < 1e-35);
    }

    #[test]
    fn shifted_denominator_matches_summation() {
        // sum k2 / (k1^4 (k2 + 1))
        let s = series(MPoly::var(2, 1), vec![4, 1], vec![0, 0], vec![0, 1]);
        let v = decompose_at_one(&s).unwrap().numeric(128).unwrap();
        let one = rug::Float::with_val(128, 1);
        let direct = crate::numeval::series_numeric(&s, &[one.clone(), one], 20000, 128).unwrap();
        let err = rug::Float::with_val(128, &v - &direct.value).abs().to_f64();
        assert!(err < 2.0 * direct.tail.to_f64() + 1e-25, "err {err} tail {}", direct.tail);
        assert!(err < 2e-9);
    }
}
