use super::field::Field;
use super::poly::Poly;
use super::prime::PrimeField;
use super::AlgebraError;

/// Upper bound on `p^N` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_GUARD: u64 = 10_000_000;

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mobius(n: usize) -> i64 {
    let mut m = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducibles of degree `n` over F_p:
/// `(1/n) Σ_{d|n} μ(d) p^{n/d}`.
pub fn necklace_count(p: u64, n: usize) -> u128 {
    assert!(n >= 1);
    let total: i128 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| mobius(d) as i128 * (p as i128).pow((n / d) as u32))
        .sum();
    (total / n as i128) as u128
}

/// `T^(p^k) mod f`, by `k` successive p-th powers.
fn frobenius_power(f: &Poly<PrimeField>, k: usize) -> Poly<PrimeField> {
    let p = f.field().modulus();
    let mut h = Poly::var(*f.field()).rem(f).expect("nonzero");
    for _ in 0..k {
        h = h.pow_mod(p, f).expect("nonzero");
    }
    h
}

/// Rabin's test: `f` of degree n is irreducible iff `T^(p^n) ≡ T (mod f)`
/// and `gcd(T^(p^(n/l)) − T, f) = 1` for every prime `l | n`.
pub fn is_irreducible(f: &Poly<PrimeField>) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let t = Poly::var(*f.field());
    for l in prime_divisors(n) {
        let h = frobenius_power(f, n / l);
        let g = (&h - &t).gcd(f).expect("f nonzero");
        if !g.is_one() {
            return false;
        }
    }
    frobenius_power(f, n) == t.rem(f).expect("nonzero")
}

/// All monic irreducibles of degree `n` over F_p, ordered lexicographically
/// by coefficients from `T^(n-1)` down to the constant term.
pub fn enumerate_irreducibles(field: PrimeField, n: usize, guard: u64) -> Result<Vec<Poly<PrimeField>>, AlgebraError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let p = field.modulus();
    let count = (p as u128).checked_pow(n as u32).filter(|&c| c <= guard as u128);
    let Some(count) = count else {
        return Err(AlgebraError::RangeTooLarge { p, n });
    };
    let mut out = Vec::new();
    let mut digits = vec![0u64; n];
    for _ in 0..count {
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let f = Poly::new(field, coeffs);
        if is_irreducible(&f) {
            out.push(f);
        }
        // increment with the constant term as least significant digit
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    out.sort_by(|a, b| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()));
    Ok(out)
}

/// Every monic polynomial of degree exactly `n` over F_p.
pub fn all_monic(field: PrimeField, n: usize) -> Vec<Poly<PrimeField>> {
    let p = field.modulus();
    let mut out = Vec::new();
    let mut digits = vec![0u64; n];
    loop {
        let mut coeffs = digits.clone();
        coeffs.push(field.one());
        out.push(Poly::new(field, coeffs));
        let mut carry = true;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5(coeffs: &[i64]) -> Poly<PrimeField> {
        Poly::from_i64s(PrimeField::new(5).unwrap(), coeffs)
    }

    #[test]
    fn rabin_examples() {
        assert!(is_irreducible(&f5(&[2, 0, 1])));
        assert!(!is_irreducible(&f5(&[1, 0, 1])));
        assert!(is_irreducible(&f5(&[3, 1])));
        assert!(is_irreducible(&f5(&[1, 1, 0, 1])));
        assert!(!is_irreducible(&f5(&[4])));
    }

    #[test]
    fn rabin_agrees_with_root_and_factor_search() {
        // A cubic or quadratic is reducible iff it has a root.
        let field = PrimeField::new(5).unwrap();
        for n in [2usize, 3] {
            for f in all_monic(field, n) {
                let has_root = (0..5u64).any(|x| f.eval(&x) == 0);
                assert_eq!(is_irreducible(&f), !has_root, "{f}");
            }
        }
    }

    #[test]
    fn linear_enumeration_is_ordered() {
        let field = PrimeField::new(5).unwrap();
        let lin = enumerate_irreducibles(field, 1, DEFAULT_ENUMERATION_GUARD).unwrap();
        let expect: Vec<_> = (0..5).map(|c| f5(&[c, 1])).collect();
        assert_eq!(lin, expect);
    }

    #[test]
    fn counts_match_necklace_formula() {
        assert_eq!(necklace_count(5, 1), 5);
        assert_eq!(necklace_count(5, 2), 10);
        assert_eq!(necklace_count(5, 3), 40);
        for p in [5u64, 7] {
            let field = PrimeField::new(p).unwrap();
            for n in 1..=4 {
                let list = enumerate_irreducibles(field, n, DEFAULT_ENUMERATION_GUARD).unwrap();
                assert_eq!(list.len() as u128, necklace_count(p, n), "p={p} n={n}");
                assert!(list.iter().all(|f| f.is_monic() && f.degree() == Some(n)));
            }
        }
    }

    #[test]
    fn guard_rejects_large_ranges() {
        let field = PrimeField::new(7).unwrap();
        assert_eq!(enumerate_irreducibles(field, 9, 1_000_000), Err(AlgebraError::RangeTooLarge { p: 7, n: 9 }));
    }
}
