//! Exact arithmetic: rationals, polynomials, Laurent polynomials in the
//! argument variables, Bernoulli polynomials and the univariate
//! partial-fraction lemma used by every symbolic stage.

mod bernoulli;
mod laurent;
mod mpoly;
mod pfd1;
mod upoly;

pub use bernoulli::{bernoulli_number, bernoulli_polynomial, power_sum, power_sum_poly};
pub use laurent::{LaurentPoly, ZMonomial};
pub use mpoly::MPoly;
pub use pfd1::{pfd_univariate, UniTerm};
pub use upoly::UPoly;

use rug::{ops::Pow, Integer};

/// Exact rational number.
pub type Rat = rug::Rational;

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::from((n, d))
}

/// Integer power with the convention `0^0 = 1`.
pub fn rat_pow(r: &Rat, e: u32) -> Rat {
    if e == 0 {
        return Rat::from(1);
    }
    r.clone().pow(e)
}

/// Binomial coefficient `C(n, k)` for machine-sized arguments.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `d_n = lcm(1, ..., n)`, with `d_0 = 1`.
pub fn lcm_upto(n: u64) -> Integer {
    let mut acc = Integer::from(1);
    for k in 2..=n {
        acc.lcm_u_mut(k as u32);
    }
    acc
}

/// Rising factorial `(x)_n` of a rational.
pub fn pochhammer(x: &Rat, n: u32) -> Rat {
    let mut acc = Rat::from(1);
    for i in 0..n {
        acc *= Rat::from(x + i);
    }
    acc
}

/// `n!` as an integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Render a rational as `num/den`, always with an explicit denominator.
pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `a`, `-a`, or `a/b`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().ok()?;
            let d: Integer = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rat::from((n, d)))
        }
        None => s.parse::<Integer>().ok().map(Rat::from),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_small_values() {
        let expect = [1, 1, 2, 6, 12, 60, 60, 420, 840, 2520];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(lcm_upto(n as u64), *e);
        }
    }

    #[test]
    fn rational_round_trip() {
        for s in ["3/4", "-7/2", "5/1", "0/1"] {
            assert_eq!(rat_to_string(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn zero_to_zero_is_one() {
        assert_eq!(rat_pow(&Rat::new(), 0), 1);
        assert_eq!(rat_pow(&rat(-2, 3), 3), rat(-8, 27));
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&rat(3, 1), 4), 3 * 4 * 5 * 6);
        assert_eq!(pochhammer(&rat(1, 2), 2), rat(3, 4));
        assert_eq!(pochhammer(&rat(-1, 1), 3), 0);
    }
}
