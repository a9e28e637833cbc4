//! Small polynomial toolkit over `F_p` (coefficients low degree first).

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

/// Legendre symbol as -1, 0, 1 (odd `p`).
pub(crate) fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv(*m.last().expect("nonzero modulus"), p);
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = mulmod(*r.last().expect("nonempty"), lead_inv, p);
        for (i, &mi) in m.iter().enumerate() {
            let t = mulmod(c, mi, p);
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    rem(&out, m, p)
}

/// Monic gcd.
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv(lead, p);
        a.iter_mut().for_each(|c| *c = mulmod(*c, li, p));
    }
    a
}

fn derivative(f: &[u64], p: u64) -> Vec<u64> {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

/// Number of distinct roots of `f` in `F_p` (`f` nonzero, degree >= 1).
pub(crate) fn count_roots(f: &[u64], p: u64) -> usize {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return 0;
    }
    if p < 64 {
        return (0..p).filter(|&x| eval(&f, x, p) == 0).count();
    }
    // gcd(f, x^p - x) collects the distinct rational roots
    let mut result = vec![1u64];
    let mut base = rem(&[0, 1], &f, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_rem(&result, &base, &f, p);
        }
        base = mul_rem(&base, &base, &f, p);
        e >>= 1;
    }
    let xp_minus_x = sub(&result, &[0, 1], p);
    gcd(&f, &xp_minus_x, p).len().saturating_sub(1)
}

pub(crate) fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mulmod(acc, x, p) + c) % p)
}

/// Root structure of a monic cubic over the algebraic closure of `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CubicRoots {
    Distinct { rational: usize },
    /// Double root (always rational) and a simple one.
    Double(u64),
    Triple(u64),
}

/// Multiplicity of `r` as a root of `f`.
fn multiplicity(f: &[u64], r: u64, p: u64) -> usize {
    let mut f = trim(f.to_vec());
    let mut k = 0;
    while f.len() > 1 && eval(&f, r, p) == 0 {
        // synthetic division by (T - r)
        let mut q = vec![0; f.len() - 1];
        let mut carry = 0;
        for i in (1..f.len()).rev() {
            carry = (f[i] + mulmod(carry, r, p)) % p;
            q[i - 1] = carry;
        }
        f = q;
        k += 1;
    }
    k
}

/// `T^3 + b T^2 + c T + d`.
pub(crate) fn cubic_roots(b: u64, c: u64, d: u64, p: u64) -> CubicRoots {
    let f = vec![d % p, c % p, b % p, 1];
    if p <= 3 {
        // the derivative test breaks down in characteristic 2 and 3
        let mut rational = 0;
        for r in 0..p {
            match multiplicity(&f, r, p) {
                3 => return CubicRoots::Triple(r),
                2 => return CubicRoots::Double(r),
                1 => rational += 1,
                _ => {}
            }
        }
        return CubicRoots::Distinct { rational };
    }
    let g = gcd(&f, &derivative(&f, p), p);
    match g.len().saturating_sub(1) {
        0 => CubicRoots::Distinct {
            rational: count_roots(&f, p),
        },
        1 => CubicRoots::Double((p - g[0]) % p),
        _ => CubicRoots::Triple(mulmod((p - b % p) % p, inv(3, p), p)),
    }
}

/// Whether `a T^2 + b T + c` has a root in `F_p`.
pub(crate) fn quadratic_has_root(a: u64, b: u64, c: u64, p: u64) -> bool {
    let (a, b, c) = (a % p, b % p, c % p);
    if a == 0 {
        return b != 0 || c == 0;
    }
    if p == 2 {
        return (0..2).any(|x| (a * x * x + b * x + c) % 2 == 0);
    }
    let disc = (mulmod(b, b, p) + p - mulmod(4 % p, mulmod(a, c, p), p)) % p;
    legendre(disc, p) >= 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_agree_with_brute_force() {
        for &p in &[67u64, 101, 131] {
            for b in [0u64, 3, 17] {
                for c in [1u64, 5, 22] {
                    for d in [0u64, 2, 9, 40] {
                        let f = [d, c, b, 1];
                        let brute = (0..p).filter(|&x| eval(&f, x, p) == 0).count();
                        assert_eq!(count_roots(&f, p), brute, "p={p} f={f:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_multiplicities() {
        // (T-2)^2 (T-5) over F_7 = T^3 - 9T^2 + 24T - 20
        let p = 7;
        let r = cubic_roots((p * 2 - 9) % p, 24 % p, (p * 3 - 20) % p, p);
        assert_eq!(r, CubicRoots::Double(2));
        // (T-1)^3 over F_5
        assert_eq!(cubic_roots(5 - 3, 3, 5 - 1, 5), CubicRoots::Triple(1));
        // (T-2)^3 over F_3 = T^3 - 8 = T^3 + 1
        assert_eq!(cubic_roots(0, 0, 1, 3), CubicRoots::Triple(2));
        // (T-1)^3 over F_2 = T^3 + T^2 + T + 1
        assert_eq!(cubic_roots(1, 1, 1, 2), CubicRoots::Triple(1));
        // T^2 (T + 1) over F_2
        assert_eq!(cubic_roots(1, 0, 0, 2), CubicRoots::Double(0));
        // T(T^2 - 1) and T(T^2 + 1) over F_7
        assert_eq!(cubic_roots(0, 6, 0, 7), CubicRoots::Distinct { rational: 3 });
        assert_eq!(cubic_roots(0, 1, 0, 7), CubicRoots::Distinct { rational: 1 });
    }

    #[test]
    fn legendre_small() {
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(14, 7), 0);
    }
}
