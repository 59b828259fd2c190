//! Removal of non-positive exponents from `La` terms whose arguments have
//! modulus below one. The result has coefficients in the ring generated by
//! the argument monomials and the inverses `(1 - monomial)^{-1}`.

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;

use crate::brick::LaTerm;
use crate::error::{Error, Result};
use crate::exact::{binomial, MPoly, Rat, UPoly, ZMonomial};
use crate::numeval::monomial_value;

/// `monomial * prod (1 - d)^{-k}` keyed for a sparse linear combination.
type CoeffKey = (ZMonomial, Vec<(ZMonomial, u32)>);

/// Rational linear combination of `z^a / prod_d (1 - z^d)^{k_d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalZCoeff {
    nvars: usize,
    terms: BTreeMap<CoeffKey, Rat>,
}

fn merge_dens(a: &[(ZMonomial, u32)], b: &[(ZMonomial, u32)]) -> Vec<(ZMonomial, u32)> {
    let mut m: BTreeMap<ZMonomial, u32> = a.iter().cloned().collect();
    for (d, k) in b {
        *m.entry(d.clone()).or_default() += k;
    }
    m.into_iter().collect()
}

impl RationalZCoeff {
    pub fn zero(nvars: usize) -> Self {
        RationalZCoeff { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        let mut c = RationalZCoeff::zero(nvars);
        c.add_term(ZMonomial::one(nvars), Vec::new(), Rat::from(1));
        c
    }

    /// `p(x) / (1 - x)^k` for a polynomial `p` in the monomial `x`.
    pub fn from_poly(p: &UPoly, x: &ZMonomial, k: u32) -> Result<Self> {
        if x.is_one() && k > 0 {
            return Err(Error::DegenerateFactor);
        }
        let mut c = RationalZCoeff::zero(x.nvars());
        let dens = if k > 0 { vec![(x.clone(), k)] } else { Vec::new() };
        for (d, v) in p.coeffs().iter().enumerate() {
            c.add_term(x.pow(d as i64), dens.clone(), v.clone());
        }
        Ok(c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: ZMonomial, dens: Vec<(ZMonomial, u32)>, c: Rat) {
        if c == 0 {
            return;
        }
        let key = (m, dens);
        let e = self.terms.entry(key.clone()).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &RationalZCoeff) {
        for ((m, d), c) in &other.terms {
            self.add_term(m.clone(), d.clone(), c.clone());
        }
    }

    pub fn mul(&self, other: &RationalZCoeff) -> RationalZCoeff {
        let mut out = RationalZCoeff::zero(self.nvars);
        for ((ma, da), ca) in &self.terms {
            for ((mb, db), cb) in &other.terms {
                out.add_term(ma.mul(mb), merge_dens(da, db), Rat::from(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> RationalZCoeff {
        let mut out = RationalZCoeff::zero(self.nvars);
        for ((m, d), v) in &self.terms {
            out.add_term(m.clone(), d.clone(), Rat::from(v * c));
        }
        out
    }

    /// Every factor `(1 - d)^{-k}` that occurs.
    pub fn denominators(&self) -> impl Iterator<Item = &ZMonomial> {
        self.terms.keys().flat_map(|(_, d)| d.iter().map(|(m, _)| m))
    }

    pub fn eval(&self, z: &[Rat]) -> Result<Rat> {
        let mut acc = Rat::new();
        for ((m, dens), c) in &self.terms {
            let mut v = m.eval(z) * c;
            for (d, k) in dens {
                let base = Rat::from(1) - d.eval(z);
                if base == 0 {
                    return Err(Error::DegenerateFactor);
                }
                for _ in 0..*k {
                    v /= &base;
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn eval_float(&self, z: &[Float], prec: u32) -> Float {
        let mut acc = Float::with_val(prec, 0);
        for ((m, dens), c) in &self.terms {
            let mut v = monomial_value(m, z, prec) * Float::with_val(prec, c);
            for (d, k) in dens {
                let base = Float::with_val(prec, 1) - monomial_value(d, z, prec);
                for _ in 0..*k {
                    v /= &base;
                }
            }
            acc += v;
        }
        acc
    }
}

impl fmt::Display for RationalZCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, dens), c)| {
                let mut s = format!("({c})*{m}");
                for (d, k) in dens {
                    s.push_str(&format!("/(1-{d})^{k}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `A_s(l, x)` with `(x d/dx)^s (x^l / (1-x)) = x^l A_s(l, x) / (1-x)^{s+1}`,
/// as a polynomial in `(l, x)`.
pub fn derivative_numerator(s: u32) -> MPoly {
    let l = MPoly::var(2, 0);
    let x = MPoly::var(2, 1);
    let one = MPoly::one(2);
    let one_minus_x = one.sub(&x);
    let mut a = one;
    for t in 0..s {
        let mut dx = MPoly::zero(2);
        for (e, c) in a.terms() {
            if e[1] > 0 {
                dx.add_term(vec![e[0], e[1] - 1], Rat::from(c * e[1]));
            }
        }
        a = l
            .mul(&a)
            .mul(&one_minus_x)
            .add(&x.mul(&one_minus_x).mul(&dx))
            .add(&x.mul(&a).scale(&Rat::from(t + 1)));
    }
    a
}

/// Coefficients of `[l^j] A_s(l, x)` as polynomials in `x`.
fn l_coefficients(a: &MPoly) -> Vec<UPoly> {
    a.coefficients_in(0)
        .iter()
        .map(|c| {
            let deg = c.degree_in(1).unwrap_or(0) as usize;
            let mut v = vec![Rat::new(); deg + 1];
            for (e, r) in c.terms() {
                v[e[1] as usize] += r;
            }
            UPoly::from_coeffs(v)
        })
        .collect()
}

/// `P_s(K, x) = sum_{k=1}^{K} k^s x^k = sum_l (x^K a1[l](x) + a2[l](x)) K^l / (1-x)^{s+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPowerSum {
    pub s: u32,
    pub a1: Vec<UPoly>,
    pub a2: Vec<UPoly>,
}

impl TruncPowerSum {
    pub fn eval(&self, k: u64, x: &Rat) -> Rat {
        let kr = Rat::from(k);
        let xk = crate::exact::rat_pow(x, k as u32);
        let mut acc = Rat::new();
        for (l, (a1, a2)) in self.a1.iter().zip(&self.a2).enumerate() {
            let kl = crate::exact::rat_pow(&kr, l as u32);
            acc += (Rat::from(&xk * a1.eval(x)) + a2.eval(x)) * kl;
        }
        let den = crate::exact::rat_pow(&(Rat::from(1) - x), self.s + 1);
        acc / den
    }
}

pub fn trunc_power_sum(s: u32) -> TruncPowerSum {
    let a = derivative_numerator(s);
    let coeffs = l_coefficients(&a);
    let x = UPoly::monomial(Rat::from(1), 1);
    // A_s(K + 1, x) expanded in powers of K.
    let mut shifted = vec![UPoly::zero(); s as usize + 1];
    for (j, c) in coeffs.iter().enumerate() {
        for (l, slot) in shifted.iter_mut().enumerate().take(j + 1) {
            *slot = slot.add(&c.scale(&Rat::from(binomial(j as u64, l as u64))));
        }
    }
    let a1 = shifted.iter().map(|c| c.mul(&x).scale(&Rat::from(-1))).collect();
    let at_one = coeffs.iter().fold(UPoly::zero(), |acc, c| acc.add(c));
    let mut a2 = vec![UPoly::zero(); s as usize + 1];
    a2[0] = at_one.mul(&x);
    TruncPowerSum { s, a1, a2 }
}

/// Non-positive exponent elimination. Output terms have all exponents at
/// least 1 (or depth 0) and weight at most `sum max(s_i, 0)` of the input.
pub fn eliminate_nonpositive(t: &LaTerm) -> Result<Vec<(RationalZCoeff, LaTerm)>> {
    if t.depth() == 0 || t.s.iter().all(|&s| s >= 1) {
        return Err(Error::InvalidInput(format!("{t} has no non-positive exponent")));
    }
    let nv = t.args[0].nvars();
    let mut acc: BTreeMap<LaTerm, RationalZCoeff> = BTreeMap::new();
    eliminate_into(t, &RationalZCoeff::one(nv), &mut acc)?;
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (c, t)).collect())
}

fn eliminate_into(
    t: &LaTerm,
    factor: &RationalZCoeff,
    acc: &mut BTreeMap<LaTerm, RationalZCoeff>,
) -> Result<()> {
    let Some(idx) = t.s.iter().position(|&s| s <= 0) else {
        let nv = factor.nvars;
        acc.entry(t.clone()).or_insert_with(|| RationalZCoeff::zero(nv)).add(factor);
        return Ok(());
    };
    let s = (-t.s[idx]) as u32;
    let x = &t.args[idx];
    let p = t.depth();
    let mut out: Vec<(RationalZCoeff, LaTerm)> = Vec::new();
    if idx == 0 {
        let a = derivative_numerator(s);
        let coeffs = l_coefficients(&a);
        let xp = UPoly::monomial(Rat::from(1), 1);
        if p == 1 {
            let at_one = coeffs.iter().fold(UPoly::zero(), |acc, c| acc.add(c));
            out.push((RationalZCoeff::from_poly(&at_one.mul(&xp), x, s + 1)?, LaTerm::empty()));
        } else {
            for (j, c) in coeffs.iter().enumerate() {
                let mut ns = vec![t.s[1] - j as i64];
                ns.extend_from_slice(&t.s[2..]);
                let mut na = vec![x.mul(&t.args[1])];
                na.extend_from_slice(&t.args[2..]);
                out.push((RationalZCoeff::from_poly(c, x, s + 1)?, LaTerm::new(ns, na)));
            }
        }
    } else {
        let tps = trunc_power_sum(s);
        for l in 0..=s as usize {
            // Upper limit k_{idx-1}.
            for (poly, merged) in [(&tps.a1[l], true), (&tps.a2[l], false)] {
                if poly.is_zero() {
                    continue;
                }
                let mut ns = t.s[..idx].to_vec();
                ns[idx - 1] -= l as i64;
                ns.extend_from_slice(&t.s[idx + 1..]);
                let mut na = t.args[..idx].to_vec();
                if merged {
                    na[idx - 1] = na[idx - 1].mul(x);
                }
                na.extend_from_slice(&t.args[idx + 1..]);
                out.push((RationalZCoeff::from_poly(poly, x, s + 1)?, LaTerm::new(ns, na)));
            }
            // Lower limit k_{idx+1} - 1, expanded in powers of k_{idx+1}.
            if idx + 1 < p {
                for m in 0..=l {
                    let sign = if (l - m) % 2 == 0 { -1 } else { 1 };
                    let c = Rat::from(binomial(l as u64, m as u64) * sign);
                    for (poly, merged) in [(&tps.a1[l], true), (&tps.a2[l], false)] {
                        if poly.is_zero() {
                            continue;
                        }
                        let poly = if merged {
                            // a1 is divisible by x; divide it out.
                            UPoly::from_coeffs(poly.coeffs()[1..].to_vec())
                        } else {
                            poly.clone()
                        };
                        let mut ns = t.s[..idx].to_vec();
                        ns.push(t.s[idx + 1] - m as i64);
                        ns.extend_from_slice(&t.s[idx + 2..]);
                        let mut na = t.args[..idx].to_vec();
                        na.push(if merged { t.args[idx + 1].mul(x) } else { t.args[idx + 1].clone() });
                        na.extend_from_slice(&t.args[idx + 2..]);
                        let coeff = RationalZCoeff::from_poly(&poly.scale(&c), x, s + 1)?;
                        out.push((coeff, LaTerm::new(ns, na)));
                    }
                }
            }
        }
    }
    for (c, term) in out {
        if c.is_zero() {
            continue;
        }
        eliminate_into(&term, &factor.mul(&c), acc)?;
    }
    Ok(())
}
