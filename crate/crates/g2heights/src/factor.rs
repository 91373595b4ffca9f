//! Integer factorisation for bad-prime discovery (trial division + Pollard–Brent).

use rug::integer::IsPrime;
use rug::Integer;
#[cfg(test)]
use rug::ops::Pow;

/// Prime factorisation of `|n|` as sorted `(prime, exponent)` pairs. `n = 0` yields nothing.
pub fn factorize(n: &Integer) -> Vec<(Integer, u32)> {
    let mut n = Integer::from(n.abs_ref());
    let mut out: Vec<(Integer, u32)> = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u32;
    while p < 1 << 14 {
        if n.is_divisible_u(p) {
            let e = n.remove_factor_mut(&Integer::from(p));
            out.push((Integer::from(p), e));
        }
        if n == 1 {
            return out;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    let mut big: Vec<Integer> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if m.is_probably_prime(40) != IsPrime::No {
            big.push(m);
            continue;
        }
        let d = rho(&m);
        let q = Integer::from(&m / &d);
        stack.push(d);
        stack.push(q);
    }
    big.sort();
    for q in big {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Nontrivial factor of a composite `n` (Brent's cycle variant of Pollard rho).
fn rho(n: &Integer) -> Integer {
    if n.is_even() {
        return Integer::from(2);
    }
    if let Some(r) = perfect_power_root(n) {
        return r;
    }
    let mut c = Integer::from(1);
    loop {
        let f = |x: &Integer| -> Integer { (Integer::from(x * x) + &c) % n };
        let mut y = Integer::from(2);
        let mut r = 1u64;
        let mut q = Integer::from(1);
        let mut g = Integer::from(1);
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        while g == 1 {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * Integer::from(&x - &y).abs()) % n;
                }
                g = q.clone().gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = Integer::from(&x - &ys).abs().gcd(n);
                if g > 1 {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1;
    }
}

fn perfect_power_root(n: &Integer) -> Option<Integer> {
    if !n.is_perfect_power() {
        return None;
    }
    for k in 2..=n.significant_bits() {
        let (r, rem) = n.clone().root_rem(Integer::new(), k);
        if rem == 0 {
            return Some(r);
        }
    }
    None
}

/// `v_p(n)` for `n ≠ 0`.
pub fn valuation(n: &Integer, p: &Integer) -> u32 {
    if *n == 0 {
        return u32::MAX;
    }
    let mut m = n.clone();
    m.remove_factor_mut(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn product(f: &[(Integer, u32)]) -> Integer {
        f.iter().fold(Integer::from(1), |acc, (p, e)| acc * Integer::from(Pow::pow(p, *e)))
    }

    #[test]
    fn factors_semiprime_beyond_trial_range() {
        let p = Integer::from(1_000_003u64);
        let q = Integer::from(998_244_353u64);
        let n = Integer::from(&p * &q) * 4 * Integer::from(&p * &p);
        let f = factorize(&n);
        assert_eq!(f, vec![(Integer::from(2), 2), (q.clone(), 1), (p.clone(), 3)].into_iter().fold(Vec::new(), |mut v, x| {
            v.push(x);
            v.sort();
            v
        }));
        assert_eq!(product(&f), n);
    }

    proptest! {
        #[test]
        fn product_of_factors_is_input(n in 1u64..u64::MAX) {
            let n = Integer::from(n);
            let f = factorize(&n);
            prop_assert_eq!(product(&f), n);
            for (p, _) in &f {
                prop_assert!(p.is_probably_prime(30) != IsPrime::No);
            }
        }
    }
}
