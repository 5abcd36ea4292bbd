//! Paillier additive homomorphic encryption.
//!
//! c = g^m · r^n mod n² with g = n + 1 (the decryption formula
//! m = L(c^λ mod n²) · μ mod n presumes it, and g^m collapses to
//! 1 + m·n mod n², saving an exponentiation). Multiplying ciphertexts adds
//! plaintexts mod n; raising a ciphertext to k multiplies the plaintext
//! by k. Desk-scale primes (16–64 bit) are fine for tests; benchmarks use
//! n of at least 1024 bits.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::hashing;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PaillierError {
    #[error("message is not in [0, n)")]
    MessageTooLarge,
    #[error("p and q must be distinct primes with gcd(n, (p-1)(q-1)) = 1")]
    BadPrimes,
}

/// Public half: (n, g = n + 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaillierPublic {
    pub n: BigUint,
    pub n_squared: BigUint,
    pub g: BigUint,
}

/// Full key material: λ = lcm(p−1, q−1), μ = L(g^λ mod n²)^(-1) mod n.
#[derive(Clone, Debug)]
pub struct PaillierKeys {
    pub public: PaillierPublic,
    lambda: BigUint,
    mu: BigUint,
}

pub type PaillierCiphertext = BigUint;

impl PaillierKeys {
    /// Build keys from two primes (callers must supply actual primes; the
    /// structural conditions are checked).
    pub fn from_primes(p: &BigUint, q: &BigUint) -> Result<PaillierKeys, PaillierError> {
        if p == q || p.is_one() || q.is_one() {
            return Err(PaillierError::BadPrimes);
        }
        let n = p * q;
        let totient_product = (p - 1u32) * (q - 1u32);
        if n.gcd(&totient_product) != BigUint::one() {
            return Err(PaillierError::BadPrimes);
        }
        let n_squared = &n * &n;
        let g = &n + 1u32;
        let lambda = (p - 1u32).lcm(&(q - 1u32));
        let l = l_function(&g.modpow(&lambda, &n_squared), &n);
        let mu = mod_inverse(&l, &n).ok_or(PaillierError::BadPrimes)?;
        Ok(PaillierKeys {
            public: PaillierPublic { n, n_squared, g },
            lambda,
            mu,
        })
    }

    /// Generate fresh keys with two random primes of `bits`/2 each.
    pub fn generate(bits: u64, rng: &mut dyn RngCore) -> PaillierKeys {
        loop {
            let p = generate_prime(bits / 2, rng);
            let q = generate_prime(bits / 2, rng);
            if let Ok(keys) = PaillierKeys::from_primes(&p, &q) {
                return keys;
            }
        }
    }

    pub fn decrypt(&self, c: &PaillierCiphertext) -> BigUint {
        let u = c.modpow(&self.lambda, &self.public.n_squared);
        (l_function(&u, &self.public.n) * &self.mu) % &self.public.n
    }

    #[cfg(test)]
    pub(crate) fn lambda_mu(&self) -> (&BigUint, &BigUint) {
        (&self.lambda, &self.mu)
    }
}

impl PaillierPublic {
    /// Randomized encryption; r is resampled until gcd(r, n) = 1.
    pub fn encrypt(
        &self,
        m: &BigUint,
        rng: &mut dyn RngCore,
    ) -> Result<PaillierCiphertext, PaillierError> {
        let r = loop {
            let candidate = random_below(&self.n, rng);
            if !candidate.is_zero() && candidate.gcd(&self.n) == BigUint::one() {
                break candidate;
            }
        };
        self.encrypt_with(m, &r)
    }

    /// Deterministic form for oracles and demos; requires gcd(r, n) = 1.
    pub fn encrypt_with(
        &self,
        m: &BigUint,
        r: &BigUint,
    ) -> Result<PaillierCiphertext, PaillierError> {
        if m >= &self.n {
            return Err(PaillierError::MessageTooLarge);
        }
        // g = n+1 ⇒ g^m = 1 + m·n (mod n²)
        let g_m = (BigUint::one() + m * &self.n) % &self.n_squared;
        let r_n = r.modpow(&self.n, &self.n_squared);
        Ok((g_m * r_n) % &self.n_squared)
    }

    /// Homomorphic addition: decrypt(c1 · c2) = m1 + m2 mod n.
    pub fn add(&self, c1: &PaillierCiphertext, c2: &PaillierCiphertext) -> PaillierCiphertext {
        (c1 * c2) % &self.n_squared
    }

    /// Scalar multiplication corollary: decrypt(c^k) = k · m mod n.
    pub fn scalar_mul(&self, c: &PaillierCiphertext, k: &BigUint) -> PaillierCiphertext {
        c.modpow(k, &self.n_squared)
    }

    /// Wire width: ciphertexts travel as big-endian integers of
    /// 2·⌈bits(n)/8⌉ bytes.
    pub fn ciphertext_width(&self) -> usize {
        2 * self.n.bits().div_ceil(8) as usize
    }

    pub fn ciphertext_to_bytes(&self, c: &PaillierCiphertext) -> Vec<u8> {
        let width = self.ciphertext_width();
        let raw = c.to_bytes_be();
        let mut out = vec![0u8; width - raw.len()];
        out.extend_from_slice(&raw);
        out
    }
}

fn l_function(u: &BigUint, n: &BigUint) -> BigUint {
    (u - 1u32) / n
}

/// Miller-Rabin with witnesses drawn from a ChaCha stream seeded by the
/// candidate itself: probabilistic, but deterministic per input, which keeps
/// every test run identical.
pub fn miller_rabin_is_prime(n: &BigUint, rounds: u32) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let sp = BigUint::from(small);
        if n == &sp {
            return true;
        }
        if (n % sp).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let trailing = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> trailing;
    let seed = hashing::hash(b"hansec/miller-rabin", &[&n.to_bytes_be()]);
    let mut rng = ChaCha20Rng::from_seed(seed);
    'witness: for _ in 0..rounds {
        let a = loop {
            let candidate = random_below(&n_minus_one, &mut rng);
            if candidate >= BigUint::from(2u32) {
                break candidate;
            }
        };
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 0..trailing.saturating_sub(1) {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Random odd `bits`-bit integer with the top bit set, retried until the
/// primality test passes (64 rounds).
pub fn generate_prime(bits: u64, rng: &mut dyn RngCore) -> BigUint {
    assert!(bits >= 4, "prime size too small");
    let nbytes = bits.div_ceil(8) as usize;
    loop {
        let mut buf = vec![0u8; nbytes];
        rng.fill_bytes(&mut buf);
        let mut candidate = BigUint::from_bytes_be(&buf);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(0, true);
        candidate &= (BigUint::one() << bits) - 1u32;
        if miller_rabin_is_prime(&candidate, 64) {
            return candidate;
        }
    }
}

fn random_below(bound: &BigUint, rng: &mut dyn RngCore) -> BigUint {
    let bits = bound.bits();
    let nbytes = bits.div_ceil(8) as usize;
    let top_mask: u8 = if bits % 8 == 0 {
        0xff
    } else {
        (1u8 << (bits % 8)) - 1
    };
    loop {
        let mut buf = vec![0u8; nbytes];
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let v = BigUint::from_bytes_be(&buf);
        if &v < bound {
            return v;
        }
    }
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    use num_bigint::BigInt;
    use num_traits::Signed;
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    let mut x = ext.x.mod_floor(&m);
    if x.is_negative() {
        x += &m;
    }
    x.to_biguint()
}
