//! Single-hash policy: every construction in the crate (KDF, signatures,
//! stream cipher, hash-to-group, transcripts) is built from SHA-256 with an
//! explicit domain-separation prefix so that no two uses can collide.

use sha2::{Digest, Sha256};

pub const DOM_HASH_TO_GROUP: &[u8] = b"hansec/h2g/v1";
pub const DOM_KDF: &[u8] = b"hansec/kdf/v1";
pub const DOM_SIGN: &[u8] = b"hansec/fs-sign/v1";
pub const DOM_STREAM: &[u8] = b"hansec/stream/v1";
pub const DOM_STREAM_MAC: &[u8] = b"hansec/stream-mac/v1";
pub const DOM_TRANSCRIPT: &[u8] = b"hansec/transcript/v1";
pub const DOM_DB_RESPONSE: &[u8] = b"hansec/db-response/v1";
pub const DOM_COMMIT_MSG: &[u8] = b"hansec/pedersen-msg/v1";
pub const DOM_KEM: &[u8] = b"hansec/pre-kem/v1";

/// SHA-256 over the concatenation of `parts`, prefixed with `domain` and its
/// length so distinct domains can never collide by concatenation tricks.
pub fn hash(domain: &[u8], parts: &[&[u8]]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update([domain.len() as u8]);
    h.update(domain);
    for part in parts {
        h.update((part.len() as u64).to_be_bytes());
        h.update(part);
    }
    h.finalize().into()
}

/// Constant-time byte-string equality.
pub fn ct_eq(a: &[u8], b: &[u8]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut acc = 0u8;
    for (x, y) in a.iter().zip(b.iter()) {
        acc |= x ^ y;
    }
    acc == 0
}
