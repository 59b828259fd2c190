use super::{binomial, rat_pow, Rat};

/// One summand of a univariate partial-fraction expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniTerm {
    /// `c / (X + shift)^exp`; `exp` may be zero or negative.
    Pole { coeff: Rat, shift: Rat, exp: i64 },
    /// `c * X^deg`.
    Power { coeff: Rat, deg: u32 },
}

fn pow_signed(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        rat_pow(r, e as u32)
    } else {
        Rat::from(1) / rat_pow(r, (-e) as u32)
    }
}

/// Expand `1 / ((X + i)^e (X + j)^f)` into poles and monomials.
///
/// Dispatch: equal shifts merge; one non-positive exponent expands the
/// polynomial factor around the other pole; two non-positive exponents give
/// a polynomial in `X`; two positive exponents use the classical two-pole
/// partial fractions.
pub fn pfd_univariate(e: i64, f: i64, i: &Rat, j: &Rat) -> Vec<UniTerm> {
    if i == j {
        return vec![UniTerm::Pole { coeff: Rat::from(1), shift: i.clone(), exp: e + f }];
    }
    match (e <= 0, f <= 0) {
        (true, false) => expand_around(e, f, i, j),
        (false, true) => expand_around(f, e, j, i),
        (true, true) => {
            let (a, b) = ((-e) as u64, (-f) as u64);
            let mut out = Vec::new();
            for deg in 0..=(a + b) {
                let mut c = Rat::new();
                for u in deg.saturating_sub(b)..=deg.min(a) {
                    let v = deg - u;
                    c += Rat::from(binomial(a, u) * binomial(b, v))
                        * rat_pow(i, (a - u) as u32)
                        * rat_pow(j, (b - v) as u32);
                }
                if c != 0 {
                    out.push(UniTerm::Power { coeff: c, deg: deg as u32 });
                }
            }
            out
        }
        (false, false) => {
            let mut out = Vec::new();
            two_poles(e, f, i, j, &mut out);
            two_poles(f, e, j, i, &mut out);
            out
        }
    }
}

/// `(X+i)^{-e} / (X+j)^f` with `e <= 0 < f`, expanded in powers of `X + j`.
fn expand_around(e: i64, f: i64, i: &Rat, j: &Rat) -> Vec<UniTerm> {
    let a = (-e) as u64;
    let d = Rat::from(i - j);
    (0..=a)
        .map(|u| UniTerm::Pole {
            coeff: Rat::from(binomial(a, u)) * rat_pow(&d, (a - u) as u32),
            shift: j.clone(),
            exp: f - u as i64,
        })
        .collect()
}

/// Principal part at `X = -i` of `1/((X+i)^e (X+j)^f)`, both exponents positive.
fn two_poles(e: i64, f: i64, i: &Rat, j: &Rat, out: &mut Vec<UniTerm>) {
    let delta = Rat::from(j - i);
    for u in 1..=e {
        let k = (e - u) as u64;
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        let c = Rat::from(binomial((f - 1) as u64 + k, k) * sign) * pow_signed(&delta, u - e - f);
        out.push(UniTerm::Pole { coeff: c, shift: i.clone(), exp: u });
    }
}
