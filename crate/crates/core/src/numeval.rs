//! High-precision numerical evaluation, used as an independent oracle for
//! every symbolic identity. Nothing here goes through the symbolic
//! decomposition code: sums are computed directly from the definitions.

use std::collections::HashMap;

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::brick::{Brick, LaTerm};
use crate::error::{Error, Result};
use crate::exact::{bernoulli_number, factorial, Rat, ZMonomial};
use crate::series::{degree_profile, MultSeries};

pub type BigFloat = Float;

pub const DEFAULT_PREC: u32 = 128;

pub fn to_float(r: &Rat, prec: u32) -> Float {
    Float::with_val(prec, r)
}

pub fn monomial_value(m: &ZMonomial, z: &[Float], prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 1);
    for (zi, &e) in z.iter().zip(&m.0) {
        if e != 0 {
            acc *= Float::with_val(prec, zi.pow(e as i32));
        }
    }
    acc
}

/// `sum_{n >= k} n^{-s}` by Euler-Maclaurin summation, `s >= 2`, `k >= 1`.
pub fn hurwitz_tail(s: u32, k: u64, prec: u32) -> Float {
    assert!(s >= 2 && k >= 1);
    let wp = prec + 32;
    let m = k.max(prec as u64 / 2 + 16);
    let mut acc = Float::with_val(wp, 0);
    for n in k..m {
        acc += Float::with_val(wp, n).pow(-(s as i32));
    }
    let mf = Float::with_val(wp, m);
    let ms = Float::with_val(wp, (&mf).pow(-(s as i32)));
    acc += Float::with_val(wp, &ms * &mf) / (s - 1);
    acc += Float::with_val(wp, &ms / 2u32);
    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * m^{-s-2j+1}
    let mut rising = Float::with_val(wp, s);
    let mut mpow = Float::with_val(wp, &ms / &mf);
    let m2 = Float::with_val(wp, &mf * &mf);
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    for jj in 1..200u32 {
        let b = bernoulli_number(2 * jj as usize);
        let fact = factorial(2 * jj);
        let term = Float::with_val(wp, &b) / Float::with_val(wp, &fact) * &rising * &mpow;
        acc += &term;
        if term.clone().abs() < eps {
            break;
        }
        rising *= Float::with_val(wp, s + 2 * jj - 1) * Float::with_val(wp, s + 2 * jj);
        mpow /= &m2;
    }
    Float::with_val(prec, acc)
}

/// One level of a nested sum: index bounded by the previous index plus
/// `offset` (for the first level, by the cutoff), summand
/// `base^k / (k + shift)^s` times an optional power `k^extra`.
#[derive(Clone)]
struct Level {
    base: Float,
    s: i64,
    shift: i64,
    offset: i64,
}

/// Prefix sums `G(n)` for `0 <= n <= len` of the nested sum over `levels`,
/// where `G(n) = sum_{k=1}^{n} f_0(k) G_1(k + offset_1)`.
fn nested_prefix(levels: &[Level], len: usize, prec: u32) -> Vec<Float> {
    let mut lens = vec![len as i64; levels.len()];
    for i in 1..levels.len() {
        lens[i] = (lens[i - 1] + levels[i].offset).max(0);
    }
    let mut inner: Option<Vec<Float>> = None;
    for (i, lv) in levels.iter().enumerate().rev() {
        let l = lens[i] as usize;
        let mut g = Vec::with_capacity(l + 1);
        let mut acc = Float::with_val(prec, 0);
        let mut zpow = Float::with_val(prec, 1);
        g.push(acc.clone());
        for k in 1..=l as i64 {
            zpow *= &lv.base;
            let den = Float::with_val(prec, k + lv.shift);
            let mut t = Float::with_val(prec, &zpow / Float::with_val(prec, den.pow(lv.s as i32)));
            if let Some(inner) = &inner {
                let idx = k + levels[i + 1].offset;
                if idx < 0 {
                    t = Float::with_val(prec, 0);
                } else {
                    t *= &inner[(idx as usize).min(inner.len() - 1)];
                }
            }
            acc += t;
            g.push(acc.clone());
        }
        inner = Some(g);
    }
    inner.unwrap_or_else(|| vec![Float::with_val(prec, 1); len + 1])
}

/// Cutoff `N` with `rho^N N^c < 2^{-bits}`, `0 < rho < 1`.
fn geometric_cutoff(rho: f64, c: f64, bits: u32) -> usize {
    assert!(rho > 0.0 && rho < 1.0);
    let target = bits as f64 * std::f64::consts::LN_2;
    let mut n = 16.0f64;
    for _ in 0..60 {
        n = ((target + c * n.ln()) / -rho.ln()).max(16.0);
    }
    n.ceil() as usize + 8
}

/// Numerical value of `La_s(x)` (or of the strict `Li_s(x)` when `strict`)
/// for real arguments with `|x_1| < 1` and `|x_i| <= 1`.
pub fn polylog_numeric_values(s: &[i64], x: &[Float], strict: bool, prec: u32) -> Result<Float> {
    if s.is_empty() {
        return Ok(Float::with_val(prec, 1));
    }
    let rho = x[0].to_f64().abs();
    if rho >= 1.0 || x[1..].iter().any(|v| v.to_f64().abs() > 1.0) {
        return Err(Error::Numeric("polylogarithm arguments outside the convergence domain".into()));
    }
    if rho == 0.0 {
        return Ok(Float::with_val(prec, 0));
    }
    let growth: i64 = s.iter().map(|&v| (-v).max(0)).sum::<i64>() + s.len() as i64 + 2;
    let wp = prec + 32 + 4 * s.len() as u32;
    let n = geometric_cutoff(rho, growth as f64, wp);
    let levels: Vec<Level> = s
        .iter()
        .zip(x)
        .enumerate()
        .map(|(i, (&si, xi))| Level {
            base: Float::with_val(wp, xi),
            s: si,
            shift: 0,
            offset: if i == 0 || !strict { 0 } else { -1 },
        })
        .collect();
    let g = nested_prefix(&levels, n, wp);
    Ok(Float::with_val(prec, &g[n]))
}

/// `La_s(args(z))` for a term with monomial arguments.
pub fn polylog_numeric(t: &LaTerm, z: &[Float], prec: u32) -> Result<Float> {
    let wp = prec + 32;
    let x: Vec<Float> = t.args.iter().map(|a| monomial_value(a, z, wp)).collect();
    polylog_numeric_values(&t.s, &x, false, prec)
}

/// Direct summation of a brick for `|z_1| > 1`, `|z_i| >= 1`.
pub fn brick_numeric(b: &Brick, z: &[Float], prec: u32) -> Result<Float> {
    if b.depth() == 0 {
        return Ok(Float::with_val(prec, 1));
    }
    let wp = prec + 40;
    let inv: Vec<Float> = b
        .args
        .iter()
        .map(|a| Float::with_val(wp, 1) / monomial_value(a, z, wp))
        .collect();
    let rho = inv[0].to_f64().abs();
    if rho >= 1.0 || inv[1..].iter().any(|v| v.to_f64().abs() > 1.0) {
        return Err(Error::Numeric("brick arguments outside the convergence domain".into()));
    }
    let growth: i64 = b.s.iter().map(|&v| (-v).max(0)).sum::<i64>() + b.depth() as i64 + 2;
    let n = geometric_cutoff(rho, growth as f64, wp);
    let levels: Vec<Level> = (0..b.depth())
        .map(|i| Level {
            base: inv[i].clone(),
            s: b.s[i],
            shift: b.j[i] as i64,
            offset: b.m[i] as i64,
        })
        .collect();
    let g = nested_prefix(&levels, n, wp);
    Ok(Float::with_val(prec, &g[n]))
}

/// Multiple zeta value `zeta(s_1, ..., s_d) = sum_{n_1 > ... > n_d >= 1}`,
/// `s_1 >= 2`, by splitting the iterated integral at `1/2` so that every
/// piece is a one-variable polylogarithm at `1/2`.
pub fn mzv_numeric(s: &[u32], prec: u32) -> Result<Float> {
    let mut cache = HashMap::new();
    mzv_numeric_cached(s, prec, &mut cache)
}

/// Same as [`mzv_numeric`], sharing a cache of `Li(1/2)` values.
pub fn mzv_numeric_cached(
    s: &[u32],
    prec: u32,
    cache: &mut HashMap<Vec<u32>, Float>,
) -> Result<Float> {
    if s.is_empty() {
        return Ok(Float::with_val(prec, 1));
    }
    if s[0] < 2 || s.contains(&0) {
        return Err(Error::Numeric(format!("divergent multiple zeta value {s:?}")));
    }
    let wp = prec + 32;
    let word: Vec<u8> = s
        .iter()
        .flat_map(|&k| std::iter::repeat_n(0u8, k as usize - 1).chain(std::iter::once(1)))
        .collect();
    let mut acc = Float::with_val(wp, 0);
    for j in 0..=word.len() {
        let left: Vec<u8> = word[..j].iter().rev().map(|a| 1 - a).collect();
        let right = &word[j..];
        let a = li_half(&word_to_comp(&left), wp, cache);
        let b = li_half(&word_to_comp(right), wp, cache);
        acc += a * b;
    }
    Ok(Float::with_val(prec, acc))
}

fn word_to_comp(w: &[u8]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut run = 0;
    for &a in w {
        run += 1;
        if a == 1 {
            out.push(run);
            run = 0;
        }
    }
    debug_assert_eq!(run, 0, "word must end with 1");
    out
}

fn li_half(comp: &[u32], prec: u32, cache: &mut HashMap<Vec<u32>, Float>) -> Float {
    if comp.is_empty() {
        return Float::with_val(prec, 1);
    }
    if let Some(v) = cache.get(comp) {
        if v.prec() >= prec {
            return Float::with_val(prec, v);
        }
    }
    let s: Vec<i64> = comp.iter().map(|&x| x as i64).collect();
    let mut x = vec![Float::with_val(prec + 16, 1); s.len()];
    x[0] = Float::with_val(prec + 16, 0.5);
    let v = polylog_numeric_values(&s, &x, true, prec).expect("half is inside the domain");
    cache.insert(comp.to_vec(), v.clone());
    v
}

/// Partial sum of a series up to `k_1 <= cutoff`, with a tail estimate.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub value: Float,
    pub tail: Float,
    /// Partial sum plus the signed tail estimate (equal to `value` away
    /// from the boundary).
    pub extrapolated: Float,
    pub cutoff: usize,
}

/// Evaluate a series at argument values `z` (`|arg_1| >= 1`, `|arg_i| >= 1`)
/// by direct nested summation of the original summand, monomial by monomial
/// of the numerator. At `|arg_1| = 1` the series must converge; the tail is
/// then estimated from the algebraic decay rate.
pub fn series_numeric(s: &MultSeries, z: &[Float], cutoff: usize, prec: u32) -> Result<SeriesValue> {
    let wp = prec + 48;
    let inv: Vec<Float> = s
        .args
        .iter()
        .map(|a| Float::with_val(wp, 1) / monomial_value(a, z, wp))
        .collect();
    let rho = inv[0].to_f64().abs();
    if rho > 1.0 + 1e-12 || inv[1..].iter().any(|v| v.to_f64().abs() > 1.0 + 1e-12) {
        return Err(Error::Numeric("series arguments outside the convergence domain".into()));
    }
    let at_boundary = (rho - 1.0).abs() < 1e-12;
    if at_boundary {
        crate::series::check_convergence(s)?;
    }
    // Terms grouped by exponent suffix so shared inner sums are computed once.
    let mut memo: HashMap<Vec<u32>, Vec<Float>> = HashMap::new();
    let mut total = vec![Float::with_val(wp, 0); cutoff + 1];
    for (exps, c) in s.numerator.terms() {
        let g = suffix_sums(s, &inv, exps, 0, cutoff, wp, &mut memo);
        let cf = Float::with_val(wp, c);
        for (t, v) in total.iter_mut().zip(g.iter()) {
            *t += Float::with_val(wp, v * &cf);
        }
    }
    let value = total[cutoff].clone();
    let half = &total[cutoff / 2];
    let diff = Float::with_val(wp, &value - half);
    let (tail, extrapolated) = if at_boundary {
        // T(N/2) - T(N) = (2^alpha - 1) T(N) for a tail decaying like N^-alpha
        let alpha = degree_profile(s).margin().unwrap_or(0) + 1;
        let corr = diff / (2f64.powi(alpha as i32) - 1.0);
        (Float::with_val(53, corr.abs_ref()), Float::with_val(prec, &value + &corr))
    } else {
        // the last half-block bounds the remainder up to rho^{N/2} / (1 - rho^{N/2})
        let r = rho.powf(cutoff as f64 / 2.0);
        let t = diff.abs() * r / (1.0 - r).max(1e-300);
        (Float::with_val(53, t), Float::with_val(prec, &value))
    };
    Ok(SeriesValue { value: Float::with_val(prec, value), tail, extrapolated, cutoff })
}

fn suffix_sums(
    s: &MultSeries,
    inv: &[Float],
    exps: &[u32],
    level: usize,
    len: usize,
    wp: u32,
    memo: &mut HashMap<Vec<u32>, Vec<Float>>,
) -> Vec<Float> {
    let key: Vec<u32> = exps[level..].to_vec();
    if let Some(v) = memo.get(&key) {
        if v.len() > len {
            return v[..=len].to_vec();
        }
    }
    let inner = if level + 1 < s.depth() {
        Some(suffix_sums(s, inv, exps, level + 1, len, wp, memo))
    } else {
        None
    };
    let (a, n, r) = (s.a[level], s.n[level], s.r[level]);
    let mut g = Vec::with_capacity(len + 1);
    let mut acc = Float::with_val(wp, 0);
    let mut zpow = Float::with_val(wp, 1);
    g.push(acc.clone());
    for k in 1..=len as u64 {
        zpow *= &inv[level];
        let mut den = Float::with_val(wp, 1);
        for t in 0..=n as u64 {
            den *= k + r as u64 + t;
        }
        let den = den.pow(a);
        let mut t = Float::with_val(wp, &zpow / den);
        if exps[level] > 0 {
            t *= Float::with_val(wp, k).pow(exps[level]);
        }
        if let Some(inner) = &inner {
            t *= &inner[k as usize];
        }
        acc += t;
        g.push(acc.clone());
    }
    memo.insert(key, g.clone());
    g
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Value of a Laurent polynomial at floating-point arguments.
pub fn laurent_numeric(p: &crate::exact::LaurentPoly, z: &[Float], prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    for (m, c) in p.terms() {
        acc += monomial_value(m, z, prec) * Float::with_val(prec, c);
    }
    acc
}

/// Value of `sum coeff(z) * La(args(z))`.
pub fn decomposition_numeric(d: &crate::brick::Decomposition, z: &[Float], prec: u32) -> Result<Float> {
    let wp = prec + 32;
    let mut acc = Float::with_val(wp, 0);
    for (t, c) in d.terms() {
        let la = polylog_numeric(t, z, wp)?;
        acc += la * laurent_numeric(c, z, wp);
    }
    Ok(Float::with_val(prec, acc))
}
