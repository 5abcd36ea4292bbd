//! Owner-to-cloud privacy computations: unidirectional ElGamal-style proxy
//! re-encryption and Paillier additive homomorphic encryption.
//!
//! Neither the proxy's re-encryption step nor Paillier ciphertext addition
//! ever touches a secret key — that is the point of delegating computation
//! to an untrusted node.

pub mod paillier;
pub mod pre;

pub use paillier::{
    miller_rabin_is_prime, PaillierCiphertext, PaillierError, PaillierKeys, PaillierPublic,
};
pub use pre::{
    decode_message, encode_message, pre_decrypt_delegatee, pre_decrypt_delegator, pre_encrypt,
    pre_encrypt_with, pre_reencrypt, pre_rekey, CiphertextLevel, KemCiphertext, PreCiphertext,
    PreError, ReEncryptionKey,
};
