//! Non-strict to strict polylogarithms, binary words, the shuffle product
//! and shuffle-regularized multiple zeta values.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rug::Float;

use crate::brick::LaTerm;
use crate::error::Result;
use crate::exact::{Rat, ZMonomial};
use crate::numeval;

/// Strict multiple polylogarithm `Li_s(x) = sum_{n_1 > ... > n_d >= 1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiTerm {
    pub s: Vec<i64>,
    pub args: Vec<ZMonomial>,
}

/// `La = sum over ways to merge adjacent indices of Li`, exponents adding
/// and arguments multiplying inside each merged block.
pub fn la_to_li(t: &LaTerm) -> Vec<LiTerm> {
    let d = t.depth();
    if d == 0 {
        return vec![LiTerm { s: Vec::new(), args: Vec::new() }];
    }
    let mut out = Vec::with_capacity(1 << (d - 1));
    for mask in 0..(1u64 << (d - 1)) {
        let mut s = vec![t.s[0]];
        let mut args = vec![t.args[0].clone()];
        for i in 1..d {
            if mask >> (i - 1) & 1 == 1 {
                *s.last_mut().unwrap() += t.s[i];
                let last = args.last_mut().unwrap();
                *last = last.mul(&t.args[i]);
            } else {
                s.push(t.s[i]);
                args.push(t.args[i].clone());
            }
        }
        out.push(LiTerm { s, args });
    }
    out
}

/// Compositions obtained by merging adjacent entries, all multiplicities one.
pub fn compositions_of_merges(s: &[u32]) -> Vec<Vec<u32>> {
    if s.is_empty() {
        return vec![Vec::new()];
    }
    (0..(1u64 << (s.len() - 1)))
        .map(|mask| {
            let mut c = vec![s[0]];
            for i in 1..s.len() {
                if mask >> (i - 1) & 1 == 1 {
                    *c.last_mut().unwrap() += s[i];
                } else {
                    c.push(s[i]);
                }
            }
            c
        })
        .collect()
}

/// Word in the letters `0` and `1`; a composition `(s_1, ..., s_d)` is the
/// word `0^{s_1-1} 1 ... 0^{s_d-1} 1`.
pub type MzvWord = Vec<u8>;

pub fn word_of_composition(s: &[u32]) -> MzvWord {
    s.iter()
        .flat_map(|&k| {
            assert!(k >= 1);
            std::iter::repeat_n(0u8, k as usize - 1).chain(std::iter::once(1))
        })
        .collect()
}

/// Inverse of [`word_of_composition`]; `None` if the word does not end with `1`.
pub fn composition_of(w: &[u8]) -> Option<Vec<u32>> {
    let mut out = Vec::new();
    let mut run = 0;
    for &a in w {
        run += 1;
        if a == 1 {
            out.push(run);
            run = 0;
        }
    }
    (run == 0).then_some(out)
}

/// Shuffle product with multiplicities: `au sh bv = a(u sh bv) + b(au sh v)`.
pub fn shuffle(u: &[u8], v: &[u8]) -> BTreeMap<MzvWord, u64> {
    let mut memo = HashMap::new();
    shuffle_rec(u, v, &mut memo)
}

fn shuffle_rec<'a>(
    u: &'a [u8],
    v: &'a [u8],
    memo: &mut HashMap<(&'a [u8], &'a [u8]), BTreeMap<MzvWord, u64>>,
) -> BTreeMap<MzvWord, u64> {
    if u.is_empty() || v.is_empty() {
        let w = if u.is_empty() { v } else { u };
        return BTreeMap::from([(w.to_vec(), 1)]);
    }
    if let Some(r) = memo.get(&(u, v)) {
        return r.clone();
    }
    let mut out = BTreeMap::new();
    for (head, a, b) in [(u[0], &u[1..], v), (v[0], u, &v[1..])] {
        for (w, c) in shuffle_rec(a, b, memo) {
            let mut word = Vec::with_capacity(w.len() + 1);
            word.push(head);
            word.extend_from_slice(&w);
            *out.entry(word).or_insert(0) += c;
        }
    }
    memo.insert((u, v), out.clone());
    out
}

/// Rational linear combination of convergent multiple zeta values plus a
/// rational constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MzvExpr {
    pub constant: Rat,
    /// Convergent compositions (`s_1 >= 2`).
    pub terms: BTreeMap<Vec<u32>, Rat>,
}

impl MzvExpr {
    pub fn zero() -> Self {
        MzvExpr::default()
    }

    pub fn constant(c: Rat) -> Self {
        MzvExpr { constant: c, terms: BTreeMap::new() }
    }

    /// `zeta(s)`; the empty composition is the constant 1.
    pub fn zeta(s: &[u32]) -> Self {
        if s.is_empty() {
            return MzvExpr::constant(Rat::from(1));
        }
        assert!(s[0] >= 2, "divergent composition {s:?}");
        MzvExpr { constant: Rat::new(), terms: BTreeMap::from([(s.to_vec(), Rat::from(1))]) }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0 && self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: Vec<u32>, c: Rat) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(s.clone()).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&s);
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &MzvExpr, c: &Rat) {
        self.constant += Rat::from(&other.constant * c);
        for (s, v) in &other.terms {
            self.add_term(s.clone(), Rat::from(v * c));
        }
    }

    pub fn scale(&self, c: &Rat) -> MzvExpr {
        let mut out = MzvExpr::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|s| s.iter().sum()).max().unwrap_or(0)
    }

    /// Part of homogeneous weight `w` (weight 0 is the constant).
    pub fn weight_part(&self, w: u32) -> MzvExpr {
        if w == 0 {
            return MzvExpr::constant(self.constant.clone());
        }
        MzvExpr {
            constant: Rat::new(),
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| s.iter().sum::<u32>() == w)
                .map(|(s, c)| (s.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn numeric(&self, prec: u32) -> Result<Float> {
        let wp = prec + 16;
        let mut cache = HashMap::new();
        let mut acc = Float::with_val(wp, &self.constant);
        for (s, c) in &self.terms {
            acc += numeval::mzv_numeric_cached(s, wp, &mut cache)? * Float::with_val(wp, c);
        }
        Ok(Float::with_val(prec, acc))
    }
}

impl fmt::Display for MzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = self.constant == 0;
        if !first {
            write!(f, "{}", self.constant)?;
        }
        for (s, c) in &self.terms {
            let s: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            let mag = Rat::from(c.abs_ref());
            let sign = match (first, *c < 0) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            if mag == 1 {
                write!(f, "{sign}zeta({})", s.join(","))?;
            } else {
                write!(f, "{sign}{mag}*zeta({})", s.join(","))?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Shuffle regularization with `zeta^sh(1) = 0`, memoized per word.
#[derive(Default)]
pub struct Regularizer {
    words: HashMap<MzvWord, MzvExpr>,
    la: HashMap<Vec<u32>, MzvExpr>,
}

impl Regularizer {
    pub fn new() -> Self {
        Regularizer::default()
    }

    /// `zeta^sh(w)` for a word ending in `1` (or empty).
    pub fn regularize_word(&mut self, w: &[u8]) -> MzvExpr {
        if let Some(v) = self.words.get(w) {
            return v.clone();
        }
        let v = self.compute(w);
        self.words.insert(w.to_vec(), v.clone());
        v
    }

    fn compute(&mut self, w: &[u8]) -> MzvExpr {
        if w.is_empty() {
            return MzvExpr::constant(Rat::from(1));
        }
        let comp = composition_of(w).expect("word must end with 1");
        if w[0] == 0 {
            return MzvExpr::zeta(&comp);
        }
        let lead = w.iter().take_while(|&&a| a == 1).count();
        if lead == w.len() {
            return MzvExpr::zero();
        }
        // 1 sh 1^{i} s = (i+1) 1^{i+1} s + 1^{i} s_1 (1 sh s_{>1}), s_1 = 0,
        // and zeta^sh(1) = 0 makes the left side vanish.
        let i = lead - 1;
        let rest = &w[lead..];
        let mut out = MzvExpr::zero();
        for (v, c) in shuffle(&[1], &rest[1..]) {
            let mut word = vec![1u8; i];
            word.push(0);
            word.extend_from_slice(&v);
            let r = self.regularize_word(&word);
            out.add_scaled(&r, &Rat::from(c));
        }
        out.scale(&Rat::from((-1, lead as i64)))
    }

    /// Regularized value of `zeta^sh(s)` for any composition of positive integers.
    pub fn regularize_sh(&mut self, s: &[u32]) -> MzvExpr {
        self.regularize_word(&word_of_composition(s))
    }

    /// Regularized value at `z = 1` of the non-strict `La_s(1, ..., 1)`.
    pub fn la_word_regularize(&mut self, s: &[u32]) -> MzvExpr {
        if let Some(v) = self.la.get(s) {
            return v.clone();
        }
        let mut out = MzvExpr::zero();
        for c in compositions_of_merges(s) {
            let r = self.regularize_sh(&c);
            out.add_scaled(&r, &Rat::from(1));
        }
        self.la.insert(s.to_vec(), out.clone());
        out
    }
}

/// One-shot convenience wrapper around [`Regularizer::regularize_sh`].
pub fn regularize_sh(s: &[u32]) -> MzvExpr {
    Regularizer::new().regularize_sh(s)
}

/// One-shot convenience wrapper around [`Regularizer::la_word_regularize`].
pub fn la_word_regularize(s: &[u32]) -> MzvExpr {
    Regularizer::new().la_word_regularize(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn words_round_trip() {
        assert_eq!(word_of_composition(&[3, 1, 2]), vec![0, 0, 1, 1, 0, 1]);
        assert_eq!(composition_of(&[0, 0, 1, 1, 0, 1]), Some(vec![3, 1, 2]));
        assert_eq!(composition_of(&[1, 0]), None);
    }

    #[test]
    fn shuffle_counts() {
        let sh = shuffle(&[0, 1], &[0, 1]);
        assert_eq!(sh.values().sum::<u64>(), 6);
        assert_eq!(sh[&vec![0, 0, 1, 1]], 4);
        assert_eq!(sh[&vec![0, 1, 0, 1]], 2);
    }

    #[test]
    fn la_to_li_counts_merges() {
        let t = LaTerm::new(vec![2, 1, 1], vec![ZMonomial(vec![-1]); 3]);
        let li = la_to_li(&t);
        assert_eq!(li.len(), 4);
        assert!(li.iter().any(|l| l.s == vec![4] && l.args[0] == ZMonomial(vec![-3])));
    }

    #[test]
    fn regularization_examples() {
        assert!(regularize_sh(&[1]).is_zero());
        assert!(regularize_sh(&[1, 1, 1]).is_zero());
        assert_eq!(regularize_sh(&[1, 2]), MzvExpr::zeta(&[2, 1]).scale(&rat(-2, 1)));
        assert_eq!(regularize_sh(&[]), MzvExpr::constant(rat(1, 1)));
        let mut e = MzvExpr::zeta(&[2, 1]);
        e.add_term(vec![3], rat(1, 1));
        assert_eq!(la_word_regularize(&[2, 1]), e);
        assert_eq!(la_word_regularize(&[1, 1]), MzvExpr::zeta(&[2]));
    }
}
