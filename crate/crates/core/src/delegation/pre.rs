//! Unidirectional proxy re-encryption over the shared group.
//!
//! The delegator a (public key g^x) encrypts m as c = ((g^x)^r, m·g^r).
//! Note the second component blinds with g^r, not (g^x)^r as in textbook
//! ElGamal — the scheme is implemented in exactly this shape because the
//! re-encryption algebra depends on it, and the caveat is that such a
//! ciphertext is decryptable by anyone who ever learns g^r. Within this
//! artifact g^r never travels; treat the construction as a delegation
//! vehicle, not a general-purpose cipher.
//!
//! The proxy holds rk = y/x mod q and maps c1 = g^(xr) to c1^rk = g^(yr),
//! after which the delegatee b (secret y) recovers m = c2 · (c1^(1/y))^(-1).
//! The proxy never sees a secret key.
//!
//! Arbitrary byte payloads default to KEM mode (encrypt a random element,
//! hash it into a symmetric key); direct group-element encoding of bytes is
//! also provided but is width-limited and rejects what it cannot embed.

use num_bigint::BigUint;
use rand::RngCore;
use thiserror::Error;

use crate::group::{Element, Group, GroupKind, Scalar};
use crate::hashing::{self, DOM_KEM};
use crate::primitives::{self, PrimitiveError};
use crate::wire::{self, PROTO_PRE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PreError {
    #[error("message cannot be encoded as a group element")]
    MessageNotEncodable,
    #[error("zero delegator key")]
    InvalidKey,
    #[error("ciphertext level does not match the requested operation")]
    WrongCiphertextLevel,
    #[error("payload authentication failed")]
    PayloadDecrypt(#[from] PrimitiveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiphertextLevel {
    /// c1 = (g^x)^r — decryptable by the delegator, re-encryptable by the proxy.
    Delegator,
    /// c1 = g^(yr) — decryptable by the delegatee.
    Delegatee,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreCiphertext {
    pub c1: Element,
    pub c2: Element,
    pub level: CiphertextLevel,
}

/// rk = y/x mod q, bound to the (from, to) delegation pair.
#[derive(Clone, Debug)]
pub struct ReEncryptionKey {
    pub rk: Scalar,
    pub from: String,
    pub to: String,
}

/// Encrypt a group element for delegator public key pk_a = g^x.
pub fn pre_encrypt(
    group: &Group,
    m: &Element,
    pk_a: &Element,
    rng: &mut dyn RngCore,
) -> PreCiphertext {
    let r = group.random_scalar(rng);
    pre_encrypt_with(group, m, pk_a, &r)
}

/// Deterministic form for oracles and demos.
pub fn pre_encrypt_with(group: &Group, m: &Element, pk_a: &Element, r: &Scalar) -> PreCiphertext {
    PreCiphertext {
        c1: group.exp(pk_a, r),
        c2: group.mul(m, &group.exp(group.generator(), r)),
        level: CiphertextLevel::Delegator,
    }
}

/// rk(a→b) = y · x^(-1) mod q from the two long-term secrets.
pub fn pre_rekey(
    group: &Group,
    sk_a: &Scalar,
    sk_b: &Scalar,
    from: &str,
    to: &str,
) -> Result<ReEncryptionKey, PreError> {
    let x_inv = group.scalar_inv(sk_a).ok_or(PreError::InvalidKey)?;
    Ok(ReEncryptionKey {
        rk: group.scalar_mul(sk_b, &x_inv),
        from: from.to_string(),
        to: to.to_string(),
    })
}

/// Proxy step: c1 → c1^rk, c2 untouched. No secret key involved.
pub fn pre_reencrypt(
    group: &Group,
    c: &PreCiphertext,
    rk: &ReEncryptionKey,
) -> Result<PreCiphertext, PreError> {
    if c.level != CiphertextLevel::Delegator {
        return Err(PreError::WrongCiphertextLevel);
    }
    Ok(PreCiphertext {
        c1: group.exp(&c.c1, &rk.rk),
        c2: c.c2.clone(),
        level: CiphertextLevel::Delegatee,
    })
}

/// Delegatee decryption: m = c2 · (c1^(1/y))^(-1).
pub fn pre_decrypt_delegatee(
    group: &Group,
    c: &PreCiphertext,
    sk_b: &Scalar,
) -> Result<Element, PreError> {
    if c.level != CiphertextLevel::Delegatee {
        return Err(PreError::WrongCiphertextLevel);
    }
    decrypt_component(group, c, sk_b)
}

/// Delegator decryption of its own (not yet re-encrypted) ciphertext.
pub fn pre_decrypt_delegator(
    group: &Group,
    c: &PreCiphertext,
    sk_a: &Scalar,
) -> Result<Element, PreError> {
    if c.level != CiphertextLevel::Delegator {
        return Err(PreError::WrongCiphertextLevel);
    }
    decrypt_component(group, c, sk_a)
}

fn decrypt_component(group: &Group, c: &PreCiphertext, sk: &Scalar) -> Result<Element, PreError> {
    let sk_inv = group.scalar_inv(sk).ok_or(PreError::InvalidKey)?;
    let g_r = group.exp(&c.c1, &sk_inv);
    Ok(group.mul(&c.c2, &group.inv(&g_r)))
}

/// KEM-mode ciphertext for arbitrary byte payloads.
#[derive(Clone, Debug)]
pub struct KemCiphertext {
    pub element: PreCiphertext,
    pub payload: Vec<u8>,
}

/// Encrypt bytes by encapsulating a random element and hashing it into a
/// symmetric key for the payload.
pub fn kem_encrypt(
    group: &Group,
    payload: &[u8],
    pk_a: &Element,
    rng: &mut dyn RngCore,
) -> KemCiphertext {
    let k = group.random_scalar(rng);
    let m = group.exp(group.generator(), &k);
    let element = pre_encrypt(group, &m, pk_a, rng);
    let key = kem_key(group, &m);
    KemCiphertext {
        element,
        payload: primitives::sym_encrypt(&key, payload),
    }
}

pub fn kem_decrypt_delegatee(
    group: &Group,
    c: &KemCiphertext,
    sk_b: &Scalar,
) -> Result<Vec<u8>, PreError> {
    let m = pre_decrypt_delegatee(group, &c.element, sk_b)?;
    let key = kem_key(group, &m);
    Ok(primitives::sym_decrypt(&key, &c.payload)?)
}

fn kem_key(group: &Group, m: &Element) -> [u8; 32] {
    hashing::hash(DOM_KEM, &[&group.serialize(m)])
}

const ENCODE_TAG: u8 = 0x50;

/// Embed bytes directly into a group element. Mod-p groups flip to p − v
/// when needed (for a safe prime exactly one of ±v is a quadratic residue);
/// the curve appends a lift counter to the x-coordinate. The encoding is
/// verified invertible before returning, so failures surface here and never
/// as silent corruption.
pub fn encode_message(group: &Group, msg: &[u8]) -> Result<Element, PreError> {
    let element = match group.kind() {
        GroupKind::ModP => encode_modp(group, msg)?,
        GroupKind::EllipticCurve => encode_ec(group, msg)?,
    };
    if decode_message(group, &element).as_deref() != Some(msg) {
        return Err(PreError::MessageNotEncodable);
    }
    Ok(element)
}

pub fn decode_message(group: &Group, e: &Element) -> Option<Vec<u8>> {
    match group.kind() {
        GroupKind::ModP => {
            let v = group.residue(e)?;
            let width = group.element_width();
            parse_padded(&to_fixed(v, width)?)
                .or_else(|| parse_padded(&to_fixed(&(group.modulus() - v), width)?))
        }
        GroupKind::EllipticCurve => {
            let bytes = group.serialize(e);
            if bytes[0] != 0x04 {
                return None;
            }
            // x-coordinate layout: tag ‖ len ‖ msg ‖ zero pad ‖ counter
            let x = &bytes[1..25];
            parse_padded(&x[..23])
        }
    }
}

fn encode_modp(group: &Group, msg: &[u8]) -> Result<Element, PreError> {
    let width = group.element_width();
    let capacity = width.saturating_sub(3);
    if msg.len() > capacity || capacity == 0 {
        return Err(PreError::MessageNotEncodable);
    }
    let mut buf = vec![0u8; width];
    buf[0] = ENCODE_TAG;
    buf[1..3].copy_from_slice(&(msg.len() as u16).to_be_bytes());
    buf[3..3 + msg.len()].copy_from_slice(msg);
    let v = BigUint::from_bytes_be(&buf);
    if &v >= group.modulus() {
        return Err(PreError::MessageNotEncodable);
    }
    // Exactly one of v, p − v lies in the index-2 subgroup of a safe-prime
    // group; deserialization's membership check picks it out.
    if let Ok(e) = group.deserialize(&buf) {
        return Ok(e);
    }
    let flipped = group.modulus() - &v;
    group
        .deserialize(&to_fixed(&flipped, width).ok_or(PreError::MessageNotEncodable)?)
        .map_err(|_| PreError::MessageNotEncodable)
}

fn encode_ec(group: &Group, msg: &[u8]) -> Result<Element, PreError> {
    // 24-byte x-coordinate: tag ‖ u16 len ‖ msg ‖ pad ‖ 1-byte lift counter.
    const CAPACITY: usize = 20;
    if msg.len() > CAPACITY {
        return Err(PreError::MessageNotEncodable);
    }
    let mut x = [0u8; 24];
    x[0] = ENCODE_TAG;
    x[1..3].copy_from_slice(&(msg.len() as u16).to_be_bytes());
    x[3..3 + msg.len()].copy_from_slice(msg);
    for counter in 0u8..=255 {
        x[23] = counter;
        let candidate = BigUint::from_bytes_be(&x);
        if let Some(e) = group.lift_x_to_element(&candidate) {
            return Ok(e);
        }
    }
    Err(PreError::MessageNotEncodable)
}

fn parse_padded(buf: &[u8]) -> Option<Vec<u8>> {
    if buf.len() < 3 || buf[0] != ENCODE_TAG {
        return None;
    }
    let len = u16::from_be_bytes([buf[1], buf[2]]) as usize;
    if buf.len() < 3 + len {
        return None;
    }
    if buf[3 + len..].iter().any(|&b| b != 0) {
        return None;
    }
    Some(buf[3..3 + len].to_vec())
}

fn to_fixed(v: &BigUint, width: usize) -> Option<Vec<u8>> {
    let raw = v.to_bytes_be();
    if raw.len() > width {
        return None;
    }
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(&raw);
    Some(out)
}

/// Wire format: protocol id ‖ level byte ‖ two serialized elements.
pub fn ciphertext_message(group: &Group, c: &PreCiphertext) -> Vec<u8> {
    let level = match c.level {
        CiphertextLevel::Delegator => 1u8,
        CiphertextLevel::Delegatee => 2u8,
    };
    wire::frame(
        PROTO_PRE,
        level,
        &[&group.serialize(&c.c1), &group.serialize(&c.c2)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupId;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn toy() -> Group {
        Group::new(GroupId::Toy23)
    }

    fn s(g: &Group, v: u64) -> Scalar {
        g.scalar_from_u64(v)
    }

    // The toy walk-through feeds residue 5 in as the message; 5 sits in the
    // ambient group Z_23^*, not the order-11 subgroup, and the algebra is
    // indifferent to that. Real payload encodings (encode_message, KEM)
    // always produce subgroup members.
    fn elem(g: &Group, v: u64) -> Element {
        g.element_from_residue_unchecked(num_bigint::BigUint::from(v))
    }

    /// The full toy walk-through: x = 3 (pk 8), m = 5, r = 2 → c = (18, 20);
    /// rk(3→4) = 5; re-encryption gives (3, 20); the delegatee recovers 5.
    #[test]
    fn toy_worked_example_end_to_end() {
        let g = toy();
        let sk_a = s(&g, 3);
        let pk_a = g.exp(g.generator(), &sk_a);
        assert_eq!(g.serialize(&pk_a), vec![8]);
        let m = elem(&g, 5);
        let c = pre_encrypt_with(&g, &m, &pk_a, &s(&g, 2));
        assert_eq!(g.serialize(&c.c1), vec![18]); // 8^2 mod 23
        assert_eq!(g.serialize(&c.c2), vec![20]); // 5·4 mod 23

        // delegator can open its own ciphertext: 1/x = 4, 18^4 = 4, m = 20·4⁻¹ = 5
        let own = pre_decrypt_delegator(&g, &c, &sk_a).unwrap();
        assert_eq!(g.serialize(&own), vec![5]);

        let sk_b = s(&g, 4);
        let rk = pre_rekey(&g, &sk_a, &sk_b, "owner", "cloud").unwrap();
        assert_eq!(rk.rk, s(&g, 5)); // 4·3⁻¹ = 4·4 = 16 ≡ 5 (mod 11)

        let c_b = pre_reencrypt(&g, &c, &rk).unwrap();
        assert_eq!(g.serialize(&c_b.c1), vec![3]); // 18^5 ≡ 3 = 2^8 = g^(yr)
        assert_eq!(g.serialize(&c_b.c2), vec![20]);

        let recovered = pre_decrypt_delegatee(&g, &c_b, &sk_b).unwrap();
        assert_eq!(g.serialize(&recovered), vec![5]);
    }

    #[test]
    fn self_delegation_rekey_is_one() {
        let g = toy();
        let rk = pre_rekey(&g, &s(&g, 7), &s(&g, 7), "a", "a").unwrap();
        assert_eq!(rk.rk, s(&g, 1));
    }

    #[test]
    fn zero_delegator_key_rejected() {
        let g = toy();
        assert_eq!(
            pre_rekey(&g, &s(&g, 0), &s(&g, 4), "a", "b").unwrap_err(),
            PreError::InvalidKey
        );
    }

    #[test]
    fn rekey_commutes_with_exponent_map() {
        let mut rng = ChaCha20Rng::seed_from_u64(51);
        for id in GroupId::ALL {
            let g = Group::new(id);
            let x = g.random_scalar(&mut rng);
            let y = g.random_scalar(&mut rng);
            let r = g.random_scalar(&mut rng);
            let rk = pre_rekey(&g, &x, &y, "a", "b").unwrap();
            let gxr = g.exp(&g.exp(g.generator(), &x), &r);
            let gyr = g.exp(&g.exp(g.generator(), &y), &r);
            assert_eq!(g.exp(&gxr, &rk.rk), gyr);
        }
    }

    #[test]
    fn identity_message_yields_c2_equal_gr() {
        let g = toy();
        let pk = g.exp(g.generator(), &s(&g, 3));
        let c = pre_encrypt_with(&g, &g.identity(), &pk, &s(&g, 2));
        assert_eq!(c.c2, g.exp(g.generator(), &s(&g, 2)));
    }

    #[test]
    fn fresh_randomness_gives_distinct_ciphertexts() {
        let g = Group::new(GroupId::Prime192v1);
        let mut rng = ChaCha20Rng::seed_from_u64(52);
        let pk = g.exp(g.generator(), &g.random_scalar(&mut rng));
        let m = g.exp(g.generator(), &g.random_scalar(&mut rng));
        let c1 = pre_encrypt(&g, &m, &pk, &mut rng);
        let c2 = pre_encrypt(&g, &m, &pk, &mut rng);
        assert_ne!(c1, c2);
    }

    #[test]
    fn level_mismatch_is_rejected() {
        let g = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(53);
        let sk_a = s(&g, 3);
        let sk_b = s(&g, 4);
        let pk_a = g.exp(g.generator(), &sk_a);
        let m = elem(&g, 5);
        let c = pre_encrypt(&g, &m, &pk_a, &mut rng);
        let rk = pre_rekey(&g, &sk_a, &sk_b, "a", "b").unwrap();
        // delegatee cannot open a delegator-level ciphertext
        assert_eq!(
            pre_decrypt_delegatee(&g, &c, &sk_b).unwrap_err(),
            PreError::WrongCiphertextLevel
        );
        let c_b = pre_reencrypt(&g, &c, &rk).unwrap();
        // double re-encryption is refused
        assert_eq!(
            pre_reencrypt(&g, &c_b, &rk).unwrap_err(),
            PreError::WrongCiphertextLevel
        );
        assert_eq!(
            pre_decrypt_delegator(&g, &c_b, &sk_a).unwrap_err(),
            PreError::WrongCiphertextLevel
        );
    }

    #[test]
    fn round_trip_random_messages() {
        let mut rng = ChaCha20Rng::seed_from_u64(54);
        for id in GroupId::ALL {
            let g = Group::new(id);
            for _ in 0..25 {
                let sk_a = g.random_scalar(&mut rng);
                let sk_b = g.random_scalar(&mut rng);
                let pk_a = g.exp(g.generator(), &sk_a);
                let m = g.exp(g.generator(), &g.random_scalar(&mut rng));
                let c = pre_encrypt(&g, &m, &pk_a, &mut rng);
                let rk = pre_rekey(&g, &sk_a, &sk_b, "a", "b").unwrap();
                let c_b = pre_reencrypt(&g, &c, &rk).unwrap();
                assert_eq!(pre_decrypt_delegatee(&g, &c_b, &sk_b).unwrap(), m);
                assert_eq!(pre_decrypt_delegator(&g, &c, &sk_a).unwrap(), m);
            }
        }
    }

    #[test]
    fn kem_mode_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(55);
        for id in GroupId::ALL {
            let g = Group::new(id);
            let sk_a = g.random_scalar(&mut rng);
            let sk_b = g.random_scalar(&mut rng);
            let pk_a = g.exp(g.generator(), &sk_a);
            let payload = b"thermostat history 2026-08".to_vec();
            let c = kem_encrypt(&g, &payload, &pk_a, &mut rng);
            let rk = pre_rekey(&g, &sk_a, &sk_b, "a", "b").unwrap();
            let c_b = KemCiphertext {
                element: pre_reencrypt(&g, &c.element, &rk).unwrap(),
                payload: c.payload.clone(),
            };
            assert_eq!(kem_decrypt_delegatee(&g, &c_b, &sk_b).unwrap(), payload);
        }
    }

    #[test]
    fn byte_encoding_round_trips_where_capacity_allows() {
        let mut rng = ChaCha20Rng::seed_from_u64(56);
        for id in [GroupId::ModP1024, GroupId::Prime192v1] {
            let g = Group::new(id);
            let msg = b"meter=1932kWh";
            let e = encode_message(&g, msg).unwrap();
            assert_eq!(decode_message(&g, &e).unwrap(), msg);
            // and it survives the whole delegation pipeline
            let sk_a = g.random_scalar(&mut rng);
            let sk_b = g.random_scalar(&mut rng);
            let pk_a = g.exp(g.generator(), &sk_a);
            let c = pre_encrypt(&g, &e, &pk_a, &mut rng);
            let rk = pre_rekey(&g, &sk_a, &sk_b, "a", "b").unwrap();
            let m = pre_decrypt_delegatee(&g, &pre_reencrypt(&g, &c, &rk).unwrap(), &sk_b).unwrap();
            assert_eq!(decode_message(&g, &m).unwrap(), msg);
        }
    }

    #[test]
    fn oversized_messages_refused() {
        let g = Group::new(GroupId::Prime192v1);
        assert_eq!(
            encode_message(&g, &[0u8; 21]).unwrap_err(),
            PreError::MessageNotEncodable
        );
        let toy = toy();
        assert_eq!(
            encode_message(&toy, b"x").unwrap_err(),
            PreError::MessageNotEncodable
        );
    }

    #[test]
    fn wire_format_has_level_and_two_elements() {
        let g = toy();
        let mut rng = ChaCha20Rng::seed_from_u64(57);
        let pk = g.exp(g.generator(), &s(&g, 3));
        let c = pre_encrypt(&g, &elem(&g, 5), &pk, &mut rng);
        let msg = ciphertext_message(&g, &c);
        let parsed = wire::parse_expecting(&msg, PROTO_PRE).unwrap();
        assert_eq!(parsed.msg_type, 1);
        assert_eq!(parsed.fields.len(), 2);
    }
}
