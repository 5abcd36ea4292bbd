//! Fixed integer-group constants.

use num_bigint::BigUint;

/// 1024-bit safe prime (p = 2q + 1 with q prime), the well-known Oakley
/// group-2 modulus. p ≡ 7 (mod 8), so 2 is a quadratic residue and
/// generates the order-q subgroup. Shipped as a constant so benchmark runs
/// are comparable; safe-prime generation at runtime would take minutes.
const MODP_1024_HEX: &str = concat!(
    "ffffffffffffffffc90fdaa22168c234c4c6628b80dc1cd129024e088a67cc74",
    "020bbea63b139b22514a08798e3404ddef9519b3cd3a431b302b0a6df25f1437",
    "4fe1356d6d51c245e485b576625e7ec6f44c42e9a637ed6b0bff5cb6f406b7ed",
    "ee386bfb5a899fa5ae9f24117c4b1fe649286651ece65381ffffffffffffffff",
);

pub fn modp1024_prime() -> BigUint {
    BigUint::parse_bytes(MODP_1024_HEX.as_bytes(), 16).expect("valid hex constant")
}
