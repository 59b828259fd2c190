use std::sync::{Mutex, OnceLock};

use super::{binomial, MPoly, Rat, UPoly};

fn table() -> &'static Mutex<Vec<Rat>> {
    static T: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(vec![Rat::from(1)]))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli_number(n: usize) -> Rat {
    let mut t = table().lock().unwrap();
    while t.len() <= n {
        let m = t.len();
        let mut acc = Rat::new();
        for (k, b) in t.iter().enumerate() {
            acc += Rat::from(binomial(m as u64 + 1, k as u64)) * b;
        }
        t.push(-acc / Rat::from(m + 1));
    }
    t[n].clone()
}

/// Bernoulli polynomial `B_s(X)`, normalised by `B_s(X+1) - B_s(X) = s X^{s-1}`.
pub fn bernoulli_polynomial(s: usize) -> UPoly {
    let coeffs = (0..=s)
        .map(|d| Rat::from(binomial(s as u64, d as u64)) * bernoulli_number(s - d))
        .collect();
    UPoly::from_coeffs(coeffs)
}

/// `sum_{k=a}^{b} k^s` for integers `a <= b + 1` (empty sum when `b = a - 1`).
pub fn power_sum(s: usize, a: i64, b: i64) -> Rat {
    let bp = bernoulli_polynomial(s + 1);
    let hi = bp.eval(&Rat::from(b + 1));
    let lo = bp.eval(&Rat::from(a));
    (hi - lo) / Rat::from(s + 1)
}

/// `sum_{k=a}^{b} k^s` as a polynomial in symbolic bounds `a`, `b`.
pub fn power_sum_poly(s: usize, a: &MPoly, b: &MPoly) -> MPoly {
    let bp = bernoulli_polynomial(s + 1);
    let b1 = b.add(&MPoly::one(b.nvars()));
    bp.compose_mpoly(&b1)
        .sub(&bp.compose_mpoly(a))
        .scale(&Rat::from((1, s as u64 + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn first_bernoulli_numbers() {
        let expect = [rat(1, 1), rat(-1, 2), rat(1, 6), rat(0, 1), rat(-1, 30), rat(0, 1), rat(1, 42)];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(bernoulli_number(n), *e);
        }
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn difference_equation() {
        for s in 1..12 {
            let b = bernoulli_polynomial(s);
            let diff = b.shift(&Rat::from(1)).sub(&b);
            assert_eq!(diff, UPoly::monomial(Rat::from(s), s - 1));
        }
    }

    #[test]
    fn power_sums_brute_force() {
        for s in 0..7 {
            for a in 1..5i64 {
                for b in (a - 1)..9 {
                    let brute: Rat = (a..=b).map(|k| crate::exact::rat_pow(&Rat::from(k), s as u32)).sum();
                    assert_eq!(power_sum(s, a, b), brute, "s={s} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn symbolic_power_sum() {
        let a = MPoly::var(2, 0);
        let b = MPoly::var(2, 1);
        let p = power_sum_poly(3, &a, &b);
        assert_eq!(p.eval(&[rat(2, 1), rat(6, 1)]), power_sum(3, 2, 6));
    }

}
