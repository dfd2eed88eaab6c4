//! Dense univariate polynomial arithmetic over F_p.
//!
//! Coefficients are stored ascending (index i = coefficient of x^i) with
//! trailing zeros trimmed, so the zero polynomial is the empty vector.
//! Degrees in this crate stay desk-scale; multiplication is schoolbook.

use crate::field::{add_mod, inv_mod, mod_pow, mul_mod, sub_mod};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl DensePoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: vec![] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    /// x + a
    pub fn linear(p: u64, a: u64) -> Self {
        Self::new(p, vec![a, 1])
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = add_mod(mul_mod(acc, x, self.p), c, self.p);
        }
        acc
    }

    fn check_same_modulus(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mismatched moduli");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_modulus(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| add_mod(self.coeff(i), other.coeff(i), self.p))
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_modulus(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| sub_mod(self.coeff(i), other.coeff(i), self.p))
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn scalar_mul(&self, s: u64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| mul_mod(c, s % self.p, self.p))
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_modulus(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = add_mod(coeffs[i + j], mul_mod(a, b, self.p), self.p);
            }
        }
        Self::new(self.p, coeffs)
    }

    /// Formal derivative: coefficient map i * c_i, in characteristic p.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(i as u64 % self.p, c, self.p))
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scalar_mul(inv_mod(self.leading_coeff(), self.p))
    }

    /// Quotient and remainder; panics if divisor is zero.
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        self.check_same_modulus(divisor);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (Self::zero(self.p), self.clone());
        }
        let p = self.p;
        let lead_inv = inv_mod(divisor.leading_coeff(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = mul_mod(rem[i], lead_inv, p);
            if q == 0 {
                continue;
            }
            quot[i - dd] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = sub_mod(rem[i - dd + j], mul_mod(q, dc, p), p);
            }
        }
        (Self::new(p, quot), Self::new(p, rem))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        self.check_same_modulus(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (x + a)^e by repeated squaring.
    pub fn linear_pow(p: u64, a: u64, e: u64) -> Self {
        let mut acc = Self::constant(p, 1);
        let mut base = Self::linear(p, a);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Multiplicity of a root; the zero polynomial vanishes everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMultiplicity {
    Finite(usize),
    Infinite,
}

/// Largest m with (x - alpha)^m dividing f, by repeated synthetic division.
///
/// Division counting (rather than derivative counting) stays exact near
/// characteristic-p derivative degeneracies; all uses have deg f < p.
pub fn root_multiplicity(f: &DensePoly, alpha: u64) -> RootMultiplicity {
    if f.is_zero() {
        return RootMultiplicity::Infinite;
    }
    let p = f.modulus();
    let mut cur = f.coeffs.clone();
    let mut m = 0usize;
    loop {
        // synthetic division by (x - alpha): quotient + remainder in one pass
        let mut rem = 0u64;
        let mut quot = vec![0u64; cur.len() - 1];
        for i in (0..cur.len()).rev() {
            let v = add_mod(cur[i], mul_mod(rem, alpha, p), p);
            if i == 0 {
                rem = v;
            } else {
                quot[i - 1] = v;
                rem = v;
            }
        }
        if rem != 0 {
            return RootMultiplicity::Finite(m);
        }
        m += 1;
        if quot.is_empty() {
            return RootMultiplicity::Finite(m);
        }
        cur = quot;
    }
}

/// Factorial tables mod p for binomial coefficients with n < p.
pub struct ModBinom {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl ModBinom {
    /// Supports choose(n, k) for n <= max_n; requires max_n < p.
    pub fn new(p: u64, max_n: usize) -> Self {
        assert!((max_n as u64) < p, "binomial table requires max_n < p");
        let mut fact = vec![1u64; max_n + 1];
        for i in 1..=max_n {
            fact[i] = mul_mod(fact[i - 1], i as u64, p);
        }
        let mut inv_fact = vec![1u64; max_n + 1];
        inv_fact[max_n] = mod_pow(fact[max_n], p - 2, p);
        for i in (0..max_n).rev() {
            inv_fact[i] = mul_mod(inv_fact[i + 1], (i + 1) as u64, p);
        }
        Self { p, fact, inv_fact }
    }

    pub fn choose(&self, n: usize, k: usize) -> u64 {
        if k > n {
            return 0;
        }
        mul_mod(
            self.fact[n],
            mul_mod(self.inv_fact[k], self.inv_fact[n - k], self.p),
            self.p,
        )
    }

    /// (x + a)^e expanded via the binomial theorem; requires e < p.
    pub fn expand_linear_pow(&self, a: u64, e: usize) -> DensePoly {
        let p = self.p;
        let mut coeffs = vec![0u64; e + 1];
        let mut apow = 1u64; // a^(e - m)
        for m in (0..=e).rev() {
            coeffs[m] = mul_mod(self.choose(e, m), apow, p);
            apow = mul_mod(apow, a % p, p);
        }
        DensePoly::new(p, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(p: u64, c: &[u64]) -> DensePoly {
        DensePoly::new(p, c.to_vec())
    }

    #[test]
    fn arith_examples() {
        let p = 13;
        let f = DensePoly::linear(p, 1);
        assert_eq!(f.mul(&f), poly(p, &[1, 2, 1])); // (x+1)^2
        assert_eq!(f.add(&DensePoly::zero(p)), f);
        // (x^2 - 1)(x + 1) over p = 7
        let g = poly(7, &[6, 0, 1]);
        assert_eq!(g.mul(&DensePoly::linear(7, 1)), poly(7, &[6, 6, 1, 1]));
    }

    #[test]
    #[should_panic(expected = "mismatched moduli")]
    fn mixed_moduli_rejected() {
        let _ = poly(7, &[1]).add(&poly(13, &[1]));
    }

    #[test]
    fn derivative_examples() {
        let p = 13;
        assert_eq!(poly(p, &[0, 2, 0, 1]).derivative(), poly(p, &[2, 0, 3]));
        // d/dx x^p = 0 in characteristic p
        let mut xs = vec![0u64; 14];
        xs[13] = 1;
        assert!(poly(13, &xs).derivative().is_zero());
        // d/dx (x+1)^4 = 4(x+1)^3
        let f = DensePoly::linear_pow(p, 1, 4);
        let expect = DensePoly::linear_pow(p, 1, 3).scalar_mul(4);
        assert_eq!(f.derivative(), expect);
    }

    #[test]
    fn gcd_examples() {
        let p = 13;
        let f = poly(p, &[3, 1]).mul(&poly(p, &[5, 1]));
        assert_eq!(f.gcd(&DensePoly::zero(p)), f.monic());
        // gcd(x^2 - 1, x^2 - 2x + 1) = x - 1
        let a = poly(p, &[12, 0, 1]);
        let b = poly(p, &[1, 11, 1]);
        assert_eq!(a.gcd(&b), poly(p, &[12, 1]));
        // gcd(x^4 - 1, (x+1)^4 - 1) = 1: quartic-root sets {1,5,8,12}, {0,4,7,11} disjoint
        let c = poly(p, &[12, 0, 0, 0, 1]);
        let d = DensePoly::linear_pow(p, 1, 4).sub(&DensePoly::constant(p, 1));
        assert_eq!(c.gcd(&d), DensePoly::constant(p, 1));
    }

    #[test]
    fn multiplicity_examples() {
        let p = 13;
        // (x-3)^2 (x-5)
        let f = DensePoly::linear_pow(p, p - 3, 2).mul(&DensePoly::linear(p, p - 5));
        assert_eq!(root_multiplicity(&f, 3), RootMultiplicity::Finite(2));
        assert_eq!(root_multiplicity(&f, 5), RootMultiplicity::Finite(1));
        assert_eq!(root_multiplicity(&f, 1), RootMultiplicity::Finite(0));
        // (x+1)^4 - 1 has 0 as a simple root
        let g = DensePoly::linear_pow(p, 1, 4).sub(&DensePoly::constant(p, 1));
        assert_eq!(root_multiplicity(&g, 0), RootMultiplicity::Finite(1));
        assert_eq!(
            root_multiplicity(&DensePoly::zero(p), 7),
            RootMultiplicity::Infinite
        );
    }

    #[test]
    fn gcd_degree_counts_common_roots_small_p() {
        // squarefree inputs: deg gcd over a splitting scan equals shared root count
        for p in [13u64, 31, 101, 499] {
            let f = DensePoly::linear_pow(p, 0, 1)
                .mul(&DensePoly::linear(p, 1))
                .mul(&DensePoly::linear(p, 2));
            let g = DensePoly::linear(p, 1)
                .mul(&DensePoly::linear(p, 2))
                .mul(&DensePoly::linear(p, 5));
            let gcd = f.gcd(&g);
            let common = (0..p).filter(|&x| f.eval(x) == 0 && g.eval(x) == 0).count();
            assert_eq!(gcd.degree().unwrap(), common);
        }
    }

    #[test]
    fn binomial_expansion_matches_repeated_squaring() {
        let p = 101;
        let mb = ModBinom::new(p, 60);
        for a in [0u64, 1, 7, 100] {
            for e in [0usize, 1, 2, 13, 60] {
                assert_eq!(
                    mb.expand_linear_pow(a, e),
                    DensePoly::linear_pow(p, a, e as u64)
                );
            }
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(seed in 0u64..1_000_000) {
            let p = [13u64, 101, 499][(seed % 3) as usize];
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1); s >> 33 };
            let rand_poly = |s: &mut dyn FnMut() -> u64| {
                let n = (s() % 6) as usize;
                DensePoly::new(p, (0..n).map(|_| s() % p).collect())
            };
            let f = rand_poly(&mut next);
            let g = rand_poly(&mut next);
            let h = rand_poly(&mut next);
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
            prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
            prop_assert_eq!(f.add(&g), g.add(&f));
        }

        #[test]
        fn gcd_divides_both(seed in 0u64..1_000_000) {
            let p = 101u64;
            let mut s = seed;
            let mut next = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1); s >> 33 };
            let f = DensePoly::new(p, (0..4).map(|_| next() % p).collect());
            let g = DensePoly::new(p, (0..4).map(|_| next() % p).collect());
            if !f.is_zero() || !g.is_zero() {
                let d = f.gcd(&g);
                prop_assert!(f.divmod(&d).1.is_zero());
                prop_assert!(g.divmod(&d).1.is_zero());
            }
        }

        #[test]
        fn multiplicity_is_additive(a in 0u64..13, ma in 0usize..4, mb in 0usize..4) {
            let p = 13u64;
            let f = DensePoly::linear_pow(p, crate::field::neg_mod(a, p), ma as u64)
                .mul(&DensePoly::linear(p, 1));
            let g = DensePoly::linear_pow(p, crate::field::neg_mod(a, p), mb as u64)
                .mul(&DensePoly::linear(p, 2));
            let (RootMultiplicity::Finite(x), RootMultiplicity::Finite(y), RootMultiplicity::Finite(z)) =
                (root_multiplicity(&f, a), root_multiplicity(&g, a), root_multiplicity(&f.mul(&g), a))
            else { panic!("nonzero inputs") };
            prop_assert_eq!(x + y, z);
        }
    }
}
