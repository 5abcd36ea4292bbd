//! Hashing-derived primitives shared by every handshake: key derivation,
//! message authentication, Schnorr signatures (Fiat-Shamir transform of the
//! identification scheme), and a hash-stream cipher.
//!
//! One 256-bit hash underlies everything, with per-use domain separation
//! (see [`crate::hashing`]). The stream cipher — keystream block i =
//! H(key ‖ i), XORed with the plaintext, encrypt-then-MAC over the
//! ciphertext — is a **pedagogical construction** kept so the artifact has
//! no external cipher dependency. Do not reuse it elsewhere.

use rand::RngCore;
use thiserror::Error;

use crate::group::{Element, ExpCounter, Group, Scalar};
use crate::hashing::{self, ct_eq, DOM_KDF, DOM_SIGN, DOM_STREAM, DOM_STREAM_MAC};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrimitiveError {
    #[error("degenerate shared secret (identity element)")]
    DegenerateSecret,
    #[error("malformed signature encoding")]
    MalformedSignature,
    #[error("ciphertext authentication failed")]
    DecryptFailed,
}

/// Session, encryption and MAC keys derived from one shared secret.
/// Deterministic in (secret, label); pairwise distinct by domain tags.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivedKeys {
    pub k_s: [u8; 32],
    pub k_e: [u8; 32],
    pub k_m: [u8; 32],
}

/// Derive (K_s, K_e, K_m) from a shared group element and a transcript
/// label. An identity secret aborts the handshake: it only arises from
/// degenerate or adversarial exponents.
pub fn kdf(group: &Group, shared: &Element, label: &[u8]) -> Result<DerivedKeys, PrimitiveError> {
    if group.is_identity(shared) {
        return Err(PrimitiveError::DegenerateSecret);
    }
    let shared_bytes = group.serialize(shared);
    let key = |tag: &[u8]| hashing::hash(DOM_KDF, &[&shared_bytes, label, tag]);
    Ok(DerivedKeys {
        k_s: key(b"ks"),
        k_e: key(b"ke"),
        k_m: key(b"km"),
    })
}

/// HMAC-SHA256.
pub fn mac(key: &[u8], msg: &[u8]) -> [u8; 32] {
    use sha2::{Digest, Sha256};
    const BLOCK: usize = 64;
    let mut k = [0u8; BLOCK];
    if key.len() > BLOCK {
        k[..32].copy_from_slice(&Sha256::digest(key));
    } else {
        k[..key.len()].copy_from_slice(key);
    }
    let mut ipad = [0x36u8; BLOCK];
    let mut opad = [0x5cu8; BLOCK];
    for i in 0..BLOCK {
        ipad[i] ^= k[i];
        opad[i] ^= k[i];
    }
    let inner = Sha256::new().chain_update(ipad).chain_update(msg).finalize();
    Sha256::new()
        .chain_update(opad)
        .chain_update(inner)
        .finalize()
        .into()
}

pub fn mac_verify(key: &[u8], msg: &[u8], tag: &[u8]) -> bool {
    ct_eq(&mac(key, msg), tag)
}

/// Schnorr signature: commitment X = g^x, challenge e = H(pk ‖ X ‖ msg)
/// mod q, response ρ = x + sk·e mod q.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Signature {
    pub commitment: Element,
    pub challenge: Scalar,
    pub response: Scalar,
}

fn fs_challenge(group: &Group, pk: &Element, commitment: &Element, msg: &[u8]) -> Scalar {
    let digest = hashing::hash(
        DOM_SIGN,
        &[
            group.id().as_str().as_bytes(),
            &group.serialize(pk),
            &group.serialize(commitment),
            msg,
        ],
    );
    group.scalar_from_bytes_reduced(&digest)
}

pub fn fs_sign(
    group: &Group,
    sk: &Scalar,
    pk: &Element,
    msg: &[u8],
    rng: &mut dyn RngCore,
    counter: &ExpCounter,
) -> Signature {
    let mut x = group.random_scalar(rng);
    let commitment = group.exp_counted(group.generator(), &x, counter);
    let challenge = fs_challenge(group, pk, &commitment, msg);
    let response = group.scalar_add(&x, &group.scalar_mul(sk, &challenge));
    x.wipe();
    Signature {
        commitment,
        challenge,
        response,
    }
}

/// Check g^ρ = X · pk^e and that the challenge re-derives from the message.
pub fn fs_verify(
    group: &Group,
    pk: &Element,
    msg: &[u8],
    sig: &Signature,
    counter: &ExpCounter,
) -> bool {
    if fs_challenge(group, pk, &sig.commitment, msg) != sig.challenge {
        return false;
    }
    let lhs = group.exp_counted(group.generator(), &sig.response, counter);
    let rhs = group.mul(
        &sig.commitment,
        &group.exp_counted(pk, &sig.challenge, counter),
    );
    lhs == rhs
}

/// Wire encoding: serialize(X) ‖ 32-byte challenge ‖ scalar-width response.
/// The challenge always fits 32 bytes (it is a reduced 256-bit digest); the
/// response width follows the group's scalar width.
pub fn signature_to_bytes(group: &Group, sig: &Signature) -> Vec<u8> {
    let mut out = group.serialize(&sig.commitment);
    let mut e = vec![0u8; 32];
    let raw = sig.challenge.value().to_bytes_be();
    e[32 - raw.len()..].copy_from_slice(&raw);
    out.extend_from_slice(&e);
    out.extend_from_slice(&group.scalar_to_bytes(&sig.response));
    out
}

pub fn signature_from_bytes(group: &Group, bytes: &[u8]) -> Result<Signature, PrimitiveError> {
    let ew = group.element_width();
    let sw = group.scalar_width();
    if bytes.len() != ew + 32 + sw {
        return Err(PrimitiveError::MalformedSignature);
    }
    let commitment = group
        .deserialize(&bytes[..ew])
        .map_err(|_| PrimitiveError::MalformedSignature)?;
    let challenge_raw = num_bigint::BigUint::from_bytes_be(&bytes[ew..ew + 32]);
    if &challenge_raw >= group.order() {
        return Err(PrimitiveError::MalformedSignature);
    }
    let challenge = group.scalar_from_biguint(challenge_raw);
    let response = group
        .scalar_from_fixed_bytes(&bytes[ew + 32..])
        .map_err(|_| PrimitiveError::MalformedSignature)?;
    Ok(Signature {
        commitment,
        challenge,
        response,
    })
}

pub fn signature_width(group: &Group) -> usize {
    group.element_width() + 32 + group.scalar_width()
}

fn keystream_block(key: &[u8], index: u64) -> [u8; 32] {
    hashing::hash(DOM_STREAM, &[key, &index.to_be_bytes()])
}

/// Encrypt-then-MAC under one 32-byte key: hash-stream XOR, then a 32-byte
/// tag over the ciphertext.
pub fn sym_encrypt(key: &[u8; 32], plaintext: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(plaintext.len() + 32);
    for (i, chunk) in plaintext.chunks(32).enumerate() {
        let ks = keystream_block(key, i as u64);
        out.extend(chunk.iter().zip(ks.iter()).map(|(p, k)| p ^ k));
    }
    let tag = hashing::hash(DOM_STREAM_MAC, &[key, &out]);
    out.extend_from_slice(&tag);
    out
}

pub fn sym_decrypt(key: &[u8; 32], ciphertext: &[u8]) -> Result<Vec<u8>, PrimitiveError> {
    if ciphertext.len() < 32 {
        return Err(PrimitiveError::DecryptFailed);
    }
    let (body, tag) = ciphertext.split_at(ciphertext.len() - 32);
    let expected = hashing::hash(DOM_STREAM_MAC, &[key, body]);
    if !ct_eq(&expected, tag) {
        return Err(PrimitiveError::DecryptFailed);
    }
    let mut out = Vec::with_capacity(body.len());
    for (i, chunk) in body.chunks(32).enumerate() {
        let ks = keystream_block(key, i as u64);
        out.extend(chunk.iter().zip(ks.iter()).map(|(c, k)| c ^ k));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupId;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn kdf_is_deterministic() {
        let g = Group::new(GroupId::Toy23);
        let shared = g.exp(g.generator(), &g.scalar_from_u64(5));
        let a = kdf(&g, &shared, b"label").unwrap();
        let b = kdf(&g, &shared, b"label").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kdf_labels_differing_one_byte_change_all_keys() {
        let g = Group::new(GroupId::Toy23);
        let shared = g.exp(g.generator(), &g.scalar_from_u64(5));
        let a = kdf(&g, &shared, b"label-0").unwrap();
        let b = kdf(&g, &shared, b"label-1").unwrap();
        assert_ne!(a.k_s, b.k_s);
        assert_ne!(a.k_e, b.k_e);
        assert_ne!(a.k_m, b.k_m);
    }

    #[test]
    fn kdf_keys_pairwise_distinct() {
        let g = Group::new(GroupId::Prime192v1);
        let shared = g.exp(g.generator(), &g.scalar_from_u64(77));
        let k = kdf(&g, &shared, b"t").unwrap();
        assert_ne!(k.k_s, k.k_e);
        assert_ne!(k.k_e, k.k_m);
        assert_ne!(k.k_s, k.k_m);
    }

    #[test]
    fn kdf_rejects_identity() {
        let g = Group::new(GroupId::Toy23);
        assert_eq!(
            kdf(&g, &g.identity(), b"x"),
            Err(PrimitiveError::DegenerateSecret)
        );
    }

    /// Golden vector: pins the KDF output across runs and platforms.
    #[test]
    fn kdf_golden_vector() {
        let g = Group::new(GroupId::Toy23);
        let shared = g.exp(g.generator(), &g.scalar_from_u64(2)); // element 4
        let keys = kdf(&g, &shared, b"golden").unwrap();
        assert_eq!(
            hex::encode(keys.k_s),
            "dbaf7b48f7addf035d271b6034bd283e69f370bdbf882c7837ea2f51d730389d"
        );
    }

    #[test]
    fn mac_round_trip_and_tamper() {
        let key = [7u8; 32];
        let tag = mac(&key, b"hello");
        assert!(mac_verify(&key, b"hello", &tag));
        let mut bad = tag;
        bad[0] ^= 1;
        assert!(!mac_verify(&key, b"hello", &bad));
    }

    #[test]
    fn mac_distinct_keys_distinct_tags() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..100 {
            let k1: [u8; 32] = rng.gen();
            let k2: [u8; 32] = rng.gen();
            if k1 != k2 {
                assert_ne!(mac(&k1, b"msg"), mac(&k2, b"msg"));
            }
        }
    }

    /// HMAC-SHA256 test vector from RFC 4231, case 2.
    #[test]
    fn hmac_rfc4231_case2() {
        let tag = mac(b"Jefe", b"what do ya want for nothing?");
        assert_eq!(
            hex::encode(tag),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"
        );
    }

    #[test]
    fn fs_sign_verify_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for id in GroupId::ALL {
            let g = Group::new(id);
            let ctr = ExpCounter::new();
            let sk = g.random_scalar(&mut rng);
            let pk = g.exp(g.generator(), &sk);
            let sig = fs_sign(&g, &sk, &pk, b"message", &mut rng, &ctr);
            assert!(fs_verify(&g, &pk, b"message", &sig, &ctr));
            assert!(!fs_verify(&g, &pk, b"messagf", &sig, &ctr));
        }
    }

    #[test]
    fn fs_verify_fails_under_other_key() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let g = Group::new(GroupId::Prime192v1);
        let ctr = ExpCounter::new();
        let sk = g.random_scalar(&mut rng);
        let pk = g.exp(g.generator(), &sk);
        let sk2 = g.random_scalar(&mut rng);
        let pk2 = g.exp(g.generator(), &sk2);
        let sig = fs_sign(&g, &sk, &pk, b"m", &mut rng, &ctr);
        assert!(!fs_verify(&g, &pk2, b"m", &sig, &ctr));
    }

    /// The toy worked example doubles as a signing oracle: with sk = 3,
    /// forced x = 5 and a message whose challenge reduces to 4 mod 11, the
    /// response is 6 and 2^6 = 9 · 8^4 = 18 (mod 23).
    #[test]
    fn fs_sign_matches_toy_schnorr_oracle() {
        let g = Group::new(GroupId::Toy23);
        let sk = g.scalar_from_u64(3);
        let pk = g.exp(g.generator(), &sk); // 8
        let x = g.scalar_from_u64(5);
        let commitment = g.exp(g.generator(), &x); // 9
        assert_eq!(g.serialize(&commitment), vec![9]);

        // Search a message whose Fiat-Shamir challenge is ≡ 4 mod 11.
        let mut msg = None;
        for i in 0u32..10_000 {
            let m = format!("probe-{i}");
            let e = fs_challenge(&g, &pk, &commitment, m.as_bytes());
            if e == g.scalar_from_u64(4) {
                msg = Some(m);
                break;
            }
        }
        let msg = msg.expect("challenge ≡ 4 mod 11 occurs within a few tries");
        let challenge = g.scalar_from_u64(4);
        let response = g.scalar_add(&x, &g.scalar_mul(&sk, &challenge));
        assert_eq!(response, g.scalar_from_u64(6));
        let sig = Signature {
            commitment,
            challenge,
            response,
        };
        assert!(fs_verify(&g, &pk, msg.as_bytes(), &sig, &ExpCounter::new()));
        // hand check: 2^6 mod 23 = 18 and 9·8^4 mod 23 = 18
        assert_eq!(g.serialize(&g.exp(g.generator(), &g.scalar_from_u64(6))), vec![18]);
    }

    #[test]
    fn signature_bit_mutations_break_verification() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let g = Group::new(GroupId::Toy23);
        let ctr = ExpCounter::new();
        let sk = g.random_scalar(&mut rng);
        let pk = g.exp(g.generator(), &sk);
        let msg = b"smart-lock command";
        let sig = fs_sign(&g, &sk, &pk, msg, &mut rng, &ctr);
        let encoded = signature_to_bytes(&g, &sig);
        let mut broken = 0;
        for trial in 0..1000 {
            let mut bytes = encoded.clone();
            let bit = (trial * 7 + 3) % (bytes.len() * 8);
            bytes[bit / 8] ^= 1 << (bit % 8);
            match signature_from_bytes(&g, &bytes) {
                Err(_) => broken += 1,
                Ok(mutated) => {
                    if !fs_verify(&g, &pk, msg, &mutated, &ctr) {
                        broken += 1;
                    }
                }
            }
        }
        assert_eq!(broken, 1000);
    }

    #[test]
    fn signature_encoding_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        for id in GroupId::ALL {
            let g = Group::new(id);
            let ctr = ExpCounter::new();
            let sk = g.random_scalar(&mut rng);
            let pk = g.exp(g.generator(), &sk);
            let sig = fs_sign(&g, &sk, &pk, b"enc", &mut rng, &ctr);
            let bytes = signature_to_bytes(&g, &sig);
            assert_eq!(bytes.len(), signature_width(&g));
            assert_eq!(signature_from_bytes(&g, &bytes).unwrap(), sig);
        }
    }

    #[test]
    fn stream_cipher_round_trip_and_tamper() {
        let key = [9u8; 32];
        let pt = b"identity j plus signature bytes".to_vec();
        let ct = sym_encrypt(&key, &pt);
        assert_eq!(sym_decrypt(&key, &ct).unwrap(), pt);
        let mut bad = ct.clone();
        bad[3] ^= 0x40;
        assert_eq!(sym_decrypt(&key, &bad), Err(PrimitiveError::DecryptFailed));
        let other_key = [10u8; 32];
        assert_eq!(
            sym_decrypt(&other_key, &ct),
            Err(PrimitiveError::DecryptFailed)
        );
    }

    #[test]
    fn stream_cipher_hides_plaintext_bytes() {
        let key = [1u8; 32];
        let pt = b"device-identity-alpha".to_vec();
        let ct = sym_encrypt(&key, &pt);
        let window: Vec<u8> = ct.windows(pt.len()).map(|w| w[0]).collect();
        assert!(!window.is_empty());
        assert!(!ct.windows(pt.len()).any(|w| w == &pt[..]));
    }
}
