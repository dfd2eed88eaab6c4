//! Modular arithmetic over F_p and the brute-force power-residue oracles.
//!
//! The modulus is capped at 2^61 - 1 so every product fits in a u128
//! intermediate. Exact big-integer work lives in `svdet`, not here.

use thiserror::Error;

/// Largest supported modulus.
pub const MAX_MODULUS: u64 = (1 << 61) - 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^61 - 1")]
    ModulusTooLarge(u64),
    #[error("k = {k} does not divide p - 1 = {pm1}")]
    KNotDivisor { k: u64, pm1: u64 },
    #[error("zero is neither a residue nor a non-residue")]
    ZeroElement,
    #[error("step b must be nonzero mod p")]
    ZeroStep,
    #[error("no non-residue found in a full period (k = {0})")]
    NoNonResidue(u64),
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// base^exp mod p by square-and-multiply; 0^0 = 1 by convention.
pub fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    debug_assert!(base < p);
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// a^(-1) mod p for prime p, via Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    mod_pow(a % p, p - 2, p)
}

/// Deterministic Miller-Rabin for u64 (the 12-base set covers the full range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // n is odd, composite, and has no factor below the trial-division bound.
    let mut c = 1u64;
    loop {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization with multiplicity, sorted ascending.
/// Trial division up to 10^6, Pollard rho for what survives.
pub fn factorize(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= 1_000_000 && d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
            continue;
        }
        let f = pollard_rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out
}

/// A prime modulus together with the factorization of p - 1.
///
/// Immutable after construction; safe to share across scan workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFieldCtx {
    p: u64,
    factors_p_minus_1: Vec<u64>,
}

impl PrimeFieldCtx {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p > MAX_MODULUS {
            return Err(FieldError::ModulusTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        let factors_p_minus_1 = factorize(p - 1);
        debug_assert_eq!(factors_p_minus_1.iter().product::<u64>(), p - 1);
        Ok(Self {
            p,
            factors_p_minus_1,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Prime factors of p - 1, with multiplicity.
    pub fn factors_p_minus_1(&self) -> &[u64] {
        &self.factors_p_minus_1
    }

    /// All divisors of p - 1, sorted ascending.
    pub fn divisors_p_minus_1(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        let mut i = 0;
        while i < self.factors_p_minus_1.len() {
            let q = self.factors_p_minus_1[i];
            let mut e = 0;
            while i < self.factors_p_minus_1.len() && self.factors_p_minus_1[i] == q {
                e += 1;
                i += 1;
            }
            let base = divs.clone();
            let mut qe = 1u64;
            for _ in 0..e {
                qe *= q;
                divs.extend(base.iter().map(|d| d * qe));
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Distinct prime divisors of p - 1.
    pub fn prime_divisors_p_minus_1(&self) -> Vec<u64> {
        let mut v = self.factors_p_minus_1.clone();
        v.dedup();
        v
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        neg_mod(a, self.p)
    }

    #[inline]
    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.p)
    }

    #[inline]
    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        mod_pow(base % self.p, exp, self.p)
    }

    fn check_k(&self, k: u64) -> Result<(), FieldError> {
        if k == 0 || (self.p - 1) % k != 0 {
            return Err(FieldError::KNotDivisor {
                k,
                pm1: self.p - 1,
            });
        }
        Ok(())
    }

    /// Euler's criterion: a is a k-th power iff a^((p-1)/k) = 1.
    /// Rejects a = 0; zero is neither residue nor non-residue.
    pub fn is_kth_residue(&self, a: u64, k: u64) -> Result<bool, FieldError> {
        self.check_k(k)?;
        let a = a % self.p;
        if a == 0 {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.pow(a, (self.p - 1) / k) == 1)
    }
}

/// Arithmetic progression {bn + c}, with b and c normalized into [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApSpec {
    pub b: u64,
    pub c: u64,
}

impl ApSpec {
    pub fn new(b: u64, c: u64, ctx: &PrimeFieldCtx) -> Result<Self, FieldError> {
        let b = b % ctx.p();
        if b == 0 {
            return Err(FieldError::ZeroStep);
        }
        Ok(Self { b, c: c % ctx.p() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueClass {
    Residue,
    NonResidue,
}

/// First non-residue in the progression: the index n and the integer value bn + c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeastNonResidue {
    pub index: u64,
    pub value: u128,
}

fn scan_least(
    p: u64,
    ap: ApSpec,
    is_residue: impl Fn(u64) -> bool,
) -> Option<LeastNonResidue> {
    let mut v = ap.c % p;
    for n in 0..p {
        // terms hitting 0 mod p are skipped: 0 is outside F_p^*
        if v != 0 && !is_residue(v) {
            return Some(LeastNonResidue {
                index: n,
                value: ap.b as u128 * n as u128 + ap.c as u128,
            });
        }
        v = add_mod(v, ap.b, p);
    }
    None
}

fn scan_longest(p: u64, ap: ApSpec, want: ResidueClass, is_residue: impl Fn(u64) -> bool) -> u64 {
    let want_res = want == ResidueClass::Residue;
    let mut best = 0u64;
    let mut run = 0u64;
    let mut v = ap.c % p;
    for _ in 0..p {
        // a term = 0 mod p terminates any run
        if v != 0 && is_residue(v) == want_res {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
        v = add_mod(v, ap.b, p);
    }
    best
}

/// Smallest n >= 0 with bn + c a k-th power non-residue (brute force, Euler per term).
pub fn least_nonresidue_in_ap(
    ctx: &PrimeFieldCtx,
    k: u64,
    ap: ApSpec,
) -> Result<LeastNonResidue, FieldError> {
    ctx.check_k(k)?;
    let t = (ctx.p() - 1) / k;
    scan_least(ctx.p(), ap, |v| ctx.pow(v, t) == 1).ok_or(FieldError::NoNonResidue(k))
}

/// Longest run of consecutive AP terms in the requested class over one full period.
pub fn longest_run_in_ap(
    ctx: &PrimeFieldCtx,
    k: u64,
    ap: ApSpec,
    class: ResidueClass,
) -> Result<u64, FieldError> {
    ctx.check_k(k)?;
    let t = (ctx.p() - 1) / k;
    Ok(scan_longest(ctx.p(), ap, class, |v| ctx.pow(v, t) == 1))
}

/// Precomputed residue classification for every element of F_p^*.
///
/// The scan harness builds one table per (p, k) and reuses it across the
/// (b, c) grid; the per-element Euler criterion stays the oracle.
pub struct ResidueTable {
    p: u64,
    /// class[a] = a^((p-1)/k); residues are exactly the class-1 elements.
    class: Vec<u64>,
}

impl ResidueTable {
    pub fn new(ctx: &PrimeFieldCtx, k: u64) -> Result<Self, FieldError> {
        ctx.check_k(k)?;
        let p = ctx.p();
        let t = (p - 1) / k;
        let mut class = vec![0u64; p as usize];
        for a in 1..p {
            class[a as usize] = ctx.pow(a, t);
        }
        Ok(Self { p, class })
    }

    /// None for 0, Some(classification) otherwise.
    pub fn classify(&self, a: u64) -> Option<bool> {
        let a = (a % self.p) as usize;
        (a != 0).then(|| self.class[a] == 1)
    }

    pub fn least_nonresidue_in_ap(&self, ap: ApSpec) -> Result<LeastNonResidue, FieldError> {
        scan_least(self.p, ap, |v| self.class[v as usize] == 1)
            .ok_or(FieldError::NoNonResidue(0))
    }

    pub fn longest_run_in_ap(&self, ap: ApSpec, class: ResidueClass) -> u64 {
        scan_longest(self.p, ap, class, |v| self.class[v as usize] == 1)
    }

    /// Longest run of consecutive AP terms whose power character a^((p-1)/k)
    /// takes one common value. Residue runs are the value-1 case, and for
    /// k = 2 this also covers non-residue runs. A term = 0 mod p breaks runs.
    pub fn longest_class_run_in_ap(&self, ap: ApSpec) -> u64 {
        let mut best = 0u64;
        let mut run = 0u64;
        let mut prev = 0u64;
        let mut v = ap.c % self.p;
        for _ in 0..self.p {
            let cls = self.class[v as usize];
            if cls == 0 {
                run = 0;
            } else if cls == prev {
                run += 1;
            } else {
                run = 1;
            }
            prev = cls;
            best = best.max(run);
            v = add_mod(v, ap.b, self.p);
        }
        best
    }
}

/// Convenience wrapper building the table for a single query.
pub fn longest_class_run_in_ap(
    ctx: &PrimeFieldCtx,
    k: u64,
    ap: ApSpec,
) -> Result<u64, FieldError> {
    Ok(ResidueTable::new(ctx, k)?.longest_class_run_in_ap(ap))
}

/// Primes in [lo, hi) by a simple sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let n = hi as usize;
    let mut sieve = vec![true; n];
    if n > 0 {
        sieve[0] = false;
    }
    if n > 1 {
        sieve[1] = false;
    }
    let mut i = 2usize;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2)..hi).filter(|&q| sieve[q as usize]).collect()
}
