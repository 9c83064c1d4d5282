//! Integer helpers shared by the ring and linear algebra layers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended gcd on non-negative integers: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn xgcd(a: u64, b: u64) -> (u64, i128, i128) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r as u64, old_s, old_t)
}

#[inline]
pub fn reduce_signed(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

#[inline]
pub fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, n: u64) -> u64 {
    let s = a + b;
    if s >= n {
        s - n
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, n: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + n - b
    }
}

pub fn powmod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, n);
        }
        base = mulmod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, s, _) = xgcd(a % n, n);
    (g == 1).then(|| reduce_signed(s, n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(p, e)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Integer square root, exact when `n` is a perfect square.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Order of a finite abelian group, kept as a prime-exponent map so
/// that groups like `(Z/5)^256` compare exactly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupOrder(std::collections::BTreeMap<u64, u64>);

impl GroupOrder {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn times(&mut self, n: u64) {
        for (p, e) in factorize(n) {
            *self.0.entry(p).or_insert(0) += e as u64;
        }
    }

    pub fn of_moduli(moduli: &[u64]) -> Self {
        let mut o = Self::one();
        for &m in moduli {
            o.times(m);
        }
        o
    }

    /// Exponent of the prime `p` in the order.
    pub fn exponent_of(&self, p: u64) -> u64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    /// The order as an integer, when it fits.
    pub fn to_u128(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for (&p, &e) in &self.0 {
            for _ in 0..e {
                acc = acc.checked_mul(p as u128)?;
            }
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_identity() {
        for a in 0..40u64 {
            for b in 0..40u64 {
                let (g, s, t) = xgcd(a, b);
                assert_eq!(g, gcd(a, b));
                assert_eq!(s * a as i128 + t * b as i128, g as i128);
            }
        }
    }

    #[test]
    fn totient_and_factor() {
        assert_eq!(totient(12), 4);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert_eq!(isqrt(25), 5);
        assert_eq!(isqrt(26), 5);
    }

    #[test]
    fn group_order_handles_large_powers() {
        let o = GroupOrder::of_moduli(&[5; 256]);
        assert_eq!(o.to_u128(), None);
        let mut a = GroupOrder::of_moduli(&[4, 3]);
        let b = GroupOrder::of_moduli(&[12]);
        assert_eq!(a, b);
        a.times(1);
        assert_eq!(a.to_u128(), Some(12));
    }
}
