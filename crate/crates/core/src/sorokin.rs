//! Multiple integrals of Sorokin type
//! `int_{[0,1]^D} prod_j prod_{l in block j} x_l^{r_j} (1-x_l)^{s_j} / (z - x_1...x_{d_j})^{t_j+1} dx`
//! rewritten as multiple series, plus a quadrature oracle.

use gauss_quad::GaussLegendre;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{factorial, MPoly, Rat, ZMonomial};
use crate::series::MultSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SorokinIntegral {
    pub dim: usize,
    pub r: Vec<u32>,
    pub s: Vec<u32>,
    pub t: Vec<u32>,
    /// Block ends `d_1 < ... < d_p = dim` (the leading `d_0 = 0` is implicit).
    pub d: Vec<usize>,
}

impl SorokinIntegral {
    pub fn new(dim: usize, r: Vec<u32>, s: Vec<u32>, t: Vec<u32>, d: Vec<usize>) -> Result<Self> {
        let p = d.len();
        if dim == 0 || p == 0 {
            return Err(Error::InvalidInput("dimension and block count must be positive".into()));
        }
        if r.len() != p || s.len() != p || t.len() != p {
            return Err(Error::InvalidInput("r, s, t must have one entry per block".into()));
        }
        let mut prev = 0;
        for &dj in &d {
            if dj <= prev {
                return Err(Error::InvalidInput("block ends must be strictly increasing from 0".into()));
            }
            prev = dj;
        }
        if prev != dim {
            return Err(Error::InvalidInput(format!("last block end {prev} differs from dimension {dim}")));
        }
        Ok(SorokinIntegral { dim, r, s, t, d })
    }

    pub fn blocks(&self) -> usize {
        self.d.len()
    }

    /// Block sizes `A_j = d_j - d_{j-1}`.
    pub fn block_sizes(&self) -> Vec<u32> {
        let mut prev = 0;
        self.d
            .iter()
            .map(|&dj| {
                let a = dj - prev;
                prev = dj;
                a as u32
            })
            .collect()
    }

    /// The integrand at a point of the cube.
    pub fn integrand(&self, x: &[f64], z: f64) -> f64 {
        let mut v = 1.0;
        let mut prod = 1.0;
        let mut start = 0;
        for j in 0..self.blocks() {
            for &xl in &x[start..self.d[j]] {
                v *= xl.powi(self.r[j] as i32) * (1.0 - xl).powi(self.s[j] as i32);
                prod *= xl;
            }
            v /= (z - prod).powi(self.t[j] as i32 + 1);
            start = self.d[j];
        }
        v
    }
}

/// `rational * z^z_power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefactor {
    pub rational: Rat,
    pub z_power: i64,
}

impl Prefactor {
    pub fn eval(&self, z: &Rat) -> Rat {
        let zp = if self.z_power >= 0 {
            crate::exact::rat_pow(z, self.z_power as u32)
        } else {
            Rat::from(1) / crate::exact::rat_pow(z, (-self.z_power) as u32)
        };
        Rat::from(&self.rational * &zp)
    }
}

/// `(e)(e+1)...(e+m-1)` for a polynomial `e`.
fn poly_pochhammer(e: &MPoly, m: u32) -> MPoly {
    let nv = e.nvars();
    let mut acc = MPoly::one(nv);
    for i in 0..m {
        acc = acc.mul(&e.add(&MPoly::constant(nv, Rat::from(i))));
    }
    acc
}

/// Series form of the integral: integral = prefactor * series, the series
/// having argument `z` on `k_1` and `1` on the other indices.
pub fn series_from_integral(int: &SorokinIntegral) -> Result<(Prefactor, MultSeries)> {
    let p = int.blocks();
    let a = int.block_sizes();
    let mut num = MPoly::one(p);
    for j in 0..p {
        let next = if j + 1 < p { MPoly::var(p, j + 1) } else { MPoly::one(p) };
        let e = MPoly::var(p, j).sub(&next).add(&MPoly::one(p));
        num = num.mul(&poly_pochhammer(&e, int.t[j]));
    }
    let mut rational = Rat::from(1);
    for j in 0..p {
        rational *= crate::exact::rat_pow(&Rat::from(factorial(int.s[j])), a[j]);
        rational /= Rat::from(factorial(int.t[j]));
    }
    let z_power = -(int.t.iter().map(|&x| x as i64).sum::<i64>() + p as i64 - 1);
    let mut args = vec![ZMonomial::var(1, 0)];
    args.extend((1..p).map(|_| ZMonomial::one(1)));
    let series = MultSeries::with_args(num, a, int.s.clone(), int.r.clone(), args)?;
    Ok((Prefactor { rational, z_power }, series))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadMethod {
    /// Tensor Gauss-Legendre with the given number of nodes per axis.
    GaussLegendre { nodes: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct QuadEstimate {
    pub value: f64,
    /// Truncation estimate (Gauss-Legendre) or one standard error (Monte Carlo).
    pub error: f64,
    pub method: QuadMethod,
}

/// Default method: Gauss-Legendre up to dimension 3, Monte Carlo above.
pub fn default_method(dim: usize) -> QuadMethod {
    match dim {
        1 => QuadMethod::GaussLegendre { nodes: 200 },
        2 => QuadMethod::GaussLegendre { nodes: 120 },
        3 => QuadMethod::GaussLegendre { nodes: 48 },
        _ => QuadMethod::MonteCarlo { samples: 400_000, seed: 7 },
    }
}

// x = 1 - (1-u)^3 pushes nodes toward the edge x = 1 where the integrand
// may blow up logarithmically when z = 1.
fn warp(u: f64) -> (f64, f64) {
    let v = 1.0 - u;
    (1.0 - v * v * v, 3.0 * v * v)
}

fn tensor_gl(int: &SorokinIntegral, z: f64, n: usize) -> Result<f64> {
    let rule = GaussLegendre::new(n).map_err(|e| Error::Numeric(e.to_string()))?;
    let pts: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| {
            let (xv, jac) = warp(0.5 * (x + 1.0));
            (xv, 0.5 * w * jac)
        })
        .collect();
    let dim = int.dim;
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let mut total = 0.0;
    loop {
        let mut w = 1.0;
        for (i, &k) in idx.iter().enumerate() {
            x[i] = pts[k].0;
            w *= pts[k].1;
        }
        total += w * int.integrand(&x, z);
        let mut i = 0;
        while i < dim {
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
        if i == dim {
            break;
        }
    }
    Ok(total)
}

/// Numeric value of the integral at real `z >= 1`, for `dim <= 5`.
pub fn quadrature_check(int: &SorokinIntegral, z: f64, method: QuadMethod) -> Result<QuadEstimate> {
    if int.dim > 5 {
        return Err(Error::InvalidInput(format!("quadrature supports dimension <= 5, got {}", int.dim)));
    }
    if z < 1.0 {
        return Err(Error::InvalidInput("quadrature needs z >= 1".into()));
    }
    match method {
        QuadMethod::GaussLegendre { nodes } => {
            if int.dim > 3 {
                return Err(Error::InvalidInput("tensor Gauss-Legendre is limited to dimension 3".into()));
            }
            let fine = tensor_gl(int, z, nodes)?;
            let coarse = tensor_gl(int, z, (2 * nodes / 3).max(2))?;
            Ok(QuadEstimate { value: fine, error: (fine - coarse).abs(), method })
        }
        QuadMethod::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut x = vec![0.0; int.dim];
            let (mut sum, mut sq) = (0.0, 0.0);
            for _ in 0..samples {
                let mut w = 1.0;
                for xi in x.iter_mut() {
                    let (xv, jac) = warp(rng.gen::<f64>());
                    *xi = xv;
                    w *= jac;
                }
                let f = w * int.integrand(&x, z);
                sum += f;
                sq += f * f;
            }
            let n = samples as f64;
            let mean = sum / n;
            let var = (sq / n - mean * mean).max(0.0);
            Ok(QuadEstimate { value: mean, error: (var / n).sqrt(), method })
        }
    }
}
