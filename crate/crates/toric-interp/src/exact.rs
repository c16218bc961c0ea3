//! Exact scalar arithmetic used everywhere else: arbitrary-precision integers
//! and rationals, the generalized binomial coefficient, integer square roots,
//! the multiplicity threshold `m_min`, and a word-size prime field (Montgomery
//! form) over a fixed list of 62-bit primes for certified modular rank runs.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Generalized binomial coefficient n(n-1)...(n-k+1) / k! for any integer n
/// and k >= 0. The running product after j factors is divisible by j!, so
/// every intermediate division below is exact.
pub fn binom(n: &Int, k: &Int) -> Result<Int> {
    if k.is_negative() {
        return Err(Error::domain(format!("binom: negative lower index {k}")));
    }
    let k = k
        .to_u64()
        .ok_or_else(|| Error::domain("binom: lower index too large"))?;
    Ok(binom_u(n, k))
}

/// `binom` with a machine-sized lower index, for internal call sites that
/// already know k >= 0.
pub fn binom_u(n: &Int, k: u64) -> Int {
    let mut res = Int::one();
    for j in 0..k {
        res *= n - Int::from(j);
        res /= Int::from(j + 1);
    }
    res
}

/// Falling factorial n(n-1)...(n-k+1); equals k! * binom(n, k).
pub fn falling(n: &Int, k: u64) -> Int {
    let mut res = Int::one();
    for j in 0..k {
        res *= n - Int::from(j);
    }
    res
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &Int) -> Result<Int> {
    if n.is_negative() {
        return Err(Error::domain(format!("isqrt: negative argument {n}")));
    }
    Ok(n.sqrt())
}

/// Smallest multiplicity m with a*b*c*m^2 > d^2, i.e. the least m for which a
/// class of degree d and multiplicity m has negative self-intersection on the
/// blow-up of P(a,b,c). Equals 1 + isqrt(floor(d^2/(abc))).
pub fn m_min(a: &Int, b: &Int, c: &Int, d: &Int) -> Result<Int> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !v.is_positive() {
            return Err(Error::domain(format!(
                "m_min: weight {name} = {v} must be >= 1"
            )));
        }
    }
    if d.is_negative() {
        return Err(Error::domain(format!("m_min: degree {d} must be >= 0")));
    }
    let q = (d * d) / (a * b * c);
    Ok(isqrt(&q)? + 1)
}

/// Floor of a rational number as an integer.
pub fn rat_floor(r: &Rat) -> Int {
    r.floor().to_integer()
}

/// Ceiling of a rational number as an integer.
pub fn rat_ceil(r: &Rat) -> Int {
    r.ceil().to_integer()
}

/// Number of integers in the closed interval [lo, hi]; 0 when lo > hi.
pub fn count_integers(lo: &Rat, hi: &Rat) -> Int {
    if lo > hi {
        return Int::zero();
    }
    let n: Int = rat_floor(hi) - rat_ceil(lo) + 1;
    if n.is_negative() {
        Int::zero()
    } else {
        n
    }
}

/// The ten largest primes below 2^62, in decreasing order. Certified modular
/// rank runs consume this list front to back; `--seed` appends extra primes
/// after these, so the fixed ones are always tried first.
pub const FIXED_PRIMES: [u64; 10] = [
    4611686018427387847, // 2^62 - 57
    4611686018427387817, // 2^62 - 87
    4611686018427387787, // 2^62 - 117
    4611686018427387761, // 2^62 - 143
    4611686018427387751, // 2^62 - 153
    4611686018427387737, // 2^62 - 167
    4611686018427387733, // 2^62 - 171
    4611686018427387709, // 2^62 - 195
    4611686018427387701, // 2^62 - 203
    4611686018427387631, // 2^62 - 273
];

/// Number of randomized primes appended by a seed.
pub const SEEDED_PRIME_COUNT: usize = 4;

/// The ordered prime list a run works with: the fixed ten, optionally
/// followed by seeded extras.
#[derive(Debug, Clone)]
pub struct PrimeList {
    primes: Vec<u64>,
    pub seed: Option<u64>,
}

impl PrimeList {
    pub fn fixed() -> Self {
        PrimeList {
            primes: FIXED_PRIMES.to_vec(),
            seed: None,
        }
    }

    /// Fixed list plus `SEEDED_PRIME_COUNT` random primes in [2^61, 2^62),
    /// drawn deterministically from the seed.
    pub fn with_seed(seed: u64) -> Self {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut primes = FIXED_PRIMES.to_vec();
        while primes.len() < FIXED_PRIMES.len() + SEEDED_PRIME_COUNT {
            let cand = (rng.next_u64() >> 3) | (1 << 61) | 1; // odd, in [2^61, 2^62)
            if is_prime_u64(cand) && !primes.contains(&cand) {
                primes.push(cand);
            }
        }
        PrimeList {
            primes,
            seed: Some(seed),
        }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn first(&self) -> u64 {
        self.primes[0]
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }
}

/// Deterministic Miller-Rabin for u64 (the listed witness set decides
/// primality for every n < 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64, m: u64| ((a as u128 * b as u128) % m as u128) as u64;
    let powmod = |mut b: u64, mut e: u64, m: u64| {
        let mut acc = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b, m);
            }
            b = mulmod(b, b, m);
            e >>= 1;
        }
        acc
    };
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut e = d;
        while e != n - 1 {
            x = mulmod(x, x, n);
            e <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime field with Montgomery-form arithmetic, for odd primes below 2^63.
/// All public element values are in Montgomery form unless noted.
#[derive(Debug, Clone, Copy)]
pub struct PrimeField {
    pub p: u64,
    ninv: u64, // -p^{-1} mod 2^64
    r2: u64,   // 2^128 mod p
    one: u64,  // 2^64 mod p (Montgomery form of 1)
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) || p >= (1 << 63) || !is_prime_u64(p) {
            return Err(Error::Configuration(format!(
                "{p} is not an odd prime below 2^63"
            )));
        }
        // Newton iteration doubles correct low bits each round.
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let one = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((one as u128 * one as u128) % p as u128) as u64;
        Ok(PrimeField {
            p,
            ninv: inv.wrapping_neg(),
            r2,
            one,
        })
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let u = ((t.wrapping_add(m as u128 * self.p as u128)) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    /// Montgomery product without the final conditional subtraction: for
    /// inputs in [0, 2p) the result stays in [0, 2p) whenever p < 2^62
    /// (then a*b < 4p^2 < 2^64 * p). The elimination kernel checks the
    /// prime bound once up front and works in this lazy domain,
    /// canonicalizing only for zero tests and inversions.
    #[inline(always)]
    pub fn mul_lazy(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let m = (t as u64).wrapping_mul(self.ninv);
        (t.wrapping_add(m as u128 * self.p as u128) >> 64) as u64
    }

    /// a - b in the lazy domain [0, 2p); requires p < 2^62 like
    /// [`Self::mul_lazy`].
    #[inline(always)]
    pub fn sub_lazy(&self, a: u64, b: u64) -> u64 {
        let two_p = self.p << 1;
        let s = a + two_p - b; // a + 2p < 2^64 for p < 2^62
        if s >= two_p {
            s - two_p
        } else {
            s
        }
    }

    /// Canonical representative in [0, p) of a lazy value in [0, 2p).
    #[inline(always)]
    pub fn canon(&self, a: u64) -> u64 {
        if a >= self.p {
            a - self.p
        } else {
            a
        }
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b; // both < p < 2^63, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn one(&self) -> u64 {
        self.one
    }

    /// Montgomery form of a residue (expects a < p).
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// Montgomery form of an arbitrary integer reduced into [0, p).
    pub fn encode_int(&self, x: &Int) -> u64 {
        let p = Int::from(self.p);
        let r = x.mod_floor(&p).to_u64().expect("residue fits u64");
        self.to_mont(r)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
}
