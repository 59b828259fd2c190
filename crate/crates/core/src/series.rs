//! Hypergeometric multiple series
//! `sum_{k_1 >= ... >= k_p >= 1} P(k) / prod_i (k_i + r_i)_{n_i+1}^{A_i} * prod_i z_i^{-k_i}`
//! and their convergence tests at `z = 1`.

use crate::error::{Error, Result};
use crate::exact::{pochhammer, MPoly, Rat, UPoly, ZMonomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultSeries {
    pub numerator: MPoly,
    pub a: Vec<u32>,
    pub n: Vec<u32>,
    pub r: Vec<u32>,
    /// Argument monomial attached to each summation index.
    pub args: Vec<ZMonomial>,
}

impl MultSeries {
    /// Series with `z_i` as the argument of `k_i`.
    pub fn new(numerator: MPoly, a: Vec<u32>, n: Vec<u32>, r: Vec<u32>) -> Result<Self> {
        let p = a.len();
        let args = (0..p).map(|i| ZMonomial::var(p, i)).collect();
        MultSeries::with_args(numerator, a, n, r, args)
    }

    pub fn with_args(
        numerator: MPoly,
        a: Vec<u32>,
        n: Vec<u32>,
        r: Vec<u32>,
        args: Vec<ZMonomial>,
    ) -> Result<Self> {
        let p = a.len();
        if p == 0 {
            return Err(Error::InvalidInput("depth must be at least 1".into()));
        }
        if n.len() != p || r.len() != p || args.len() != p || numerator.nvars() != p {
            return Err(Error::InvalidInput("inconsistent series dimensions".into()));
        }
        if a.contains(&0) {
            return Err(Error::InvalidInput("every exponent A_i must be at least 1".into()));
        }
        if args.iter().any(|m| m.nvars() != args[0].nvars()) {
            return Err(Error::InvalidInput("argument monomials over different variable sets".into()));
        }
        Ok(MultSeries { numerator, a, n, r, args })
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    /// Upper bound for the weight of the zeta values in the decomposition.
    pub fn total_a(&self) -> u32 {
        self.a.iter().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.r.iter().all(|&x| x == 0)
    }

    /// Value of one summand at integer indices and rational argument values.
    pub fn summand(&self, k: &[i64], z: &[Rat]) -> Rat {
        let kr: Vec<Rat> = k.iter().map(|&x| Rat::from(x)).collect();
        let mut v = self.numerator.eval(&kr);
        for i in 0..self.depth() {
            let base = Rat::from(k[i] + self.r[i] as i64);
            let den = pochhammer(&base, self.n[i] + 1);
            for _ in 0..self.a[i] {
                v /= &den;
            }
            let zi = self.args[i].eval(z);
            for _ in 0..k[i] {
                v /= &zi;
            }
        }
        v
    }
}

/// Rewrite `(k + r)_{n+1}` as `(k)_{n+r+1} / (k)_r`, moving `(k)_r^A` into the
/// numerator. The result has `r = 0` and denotes the same series.
pub fn normalize_shifts(s: &MultSeries) -> MultSeries {
    let p = s.depth();
    let mut num = s.numerator.clone();
    let mut n = s.n.clone();
    for i in 0..p {
        let r = s.r[i];
        if r == 0 {
            continue;
        }
        let mut poch = UPoly::constant(Rat::from(1));
        for t in 0..r {
            poch = poch.mul(&UPoly::from_coeffs(vec![Rat::from(t), Rat::from(1)]));
        }
        let factor = poch.pow(s.a[i]).compose_mpoly(&MPoly::var(p, i));
        num = num.mul(&factor);
        n[i] += r;
    }
    MultSeries { numerator: num, a: s.a.clone(), n, r: vec![0; p], args: s.args.clone() }
}

/// Numerator degrees per variable and the prefix bounds
/// `D_j = sum_{i<=j} A_i (n_i + 1) - j - 1` (1-based `j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    /// `None` is the degree of the zero polynomial.
    pub degs: Vec<Option<u32>>,
    pub bounds: Vec<i64>,
}

impl DegreeProfile {
    /// Prefix sums of the degrees, `None` once the numerator is zero.
    pub fn prefix_degrees(&self) -> Vec<Option<i64>> {
        let mut acc = Some(0i64);
        self.degs
            .iter()
            .map(|d| {
                acc = match (acc, d) {
                    (Some(a), Some(d)) => Some(a + *d as i64),
                    _ => None,
                };
                acc
            })
            .collect()
    }

    /// Smallest margin `D_j - sum_{i<=j} deg_i`; the tail after cutoff `N`
    /// at `z = 1` decays like `N^{-(margin + 1)}`.
    pub fn margin(&self) -> Option<i64> {
        self.prefix_degrees()
            .iter()
            .zip(&self.bounds)
            .filter_map(|(d, b)| d.map(|d| b - d))
            .min()
    }
}

/// Degrees are those of the shift-normalised series, which raises the degree
/// in `X_i` and the bound alike by `A_i r_i`.
pub fn degree_profile(s: &MultSeries) -> DegreeProfile {
    let p = s.depth();
    let degs = (0..p)
        .map(|i| s.numerator.degree_in(i).map(|d| d + s.a[i] * s.r[i]))
        .collect();
    let mut acc = 0i64;
    let bounds = (0..p)
        .map(|j| {
            acc += s.a[j] as i64 * (s.n[j] + s.r[j] + 1) as i64;
            acc - j as i64 - 2
        })
        .collect();
    DegreeProfile { degs, bounds }
}

fn first_violation(s: &MultSeries, slack: i64) -> Option<(usize, i64, i64)> {
    let prof = degree_profile(s);
    prof.prefix_degrees()
        .iter()
        .zip(&prof.bounds)
        .enumerate()
        .find_map(|(j, (d, b))| match d {
            Some(d) if *d > b + slack => Some((j + 1, *d, b + slack)),
            _ => None,
        })
}

/// Convergence at `z = 1`: `sum_{i<=j} deg_{X_i} P <= D_j` for every `j`.
pub fn check_convergence(s: &MultSeries) -> Result<()> {
    match first_violation(s, 0) {
        None => Ok(()),
        Some((index, degree, bound)) => Err(Error::Divergent { index, degree, bound }),
    }
}

/// Logarithmic divergence: the same test with every bound raised by one.
pub fn check_log_divergence(s: &MultSeries) -> Result<()> {
    match first_violation(s, 1) {
        None => Ok(()),
        Some((index, degree, bound)) => Err(Error::NotLogDivergent { index, degree, bound }),
    }
}
