//! Lightweight cryptographic protocols for home-area networks (HANs), plus a
//! deterministic adversarial simulator and a benchmark harness.
//!
//! The suite covers the three interaction classes of a cloud-assisted HAN:
//!
//! * **D2DWL** (device-to-device wireless, co-located): distance-bounding
//!   authentication over a simulated radio channel ([`proximity`]).
//! * **D2DW** (device-to-device, same time / different space): authenticated
//!   key exchange — ISO-KE, SIGMA and a five-message TLS-style handshake
//!   ([`key_exchange`]).
//! * **O2C** (owner-to-cloud, different time / different space): Schnorr and
//!   Okamoto identification ([`identification`]), Pedersen commitments
//!   ([`commitment`]), ElGamal proxy re-encryption and Paillier additive
//!   homomorphic encryption ([`delegation`]).
//!
//! All schemes run over a shared cyclic-group abstraction ([`group`]) with
//! three backends: a hand-checkable toy group (p = 23), a fixed 1024-bit
//! Schnorr integer group, and the prime192v1 elliptic curve.
//!
//! **This is a study and measurement artifact, not a production library.**
//! The symmetric cipher is a pedagogical hash-stream construction, side
//! channels are out of scope, and parameters are sized for comparability,
//! not for a current security margin.
//!
//! The [`sim`] module drives protocol runs over a virtual-time event loop
//! with scriptable Dolev-Yao adversaries (eavesdrop, replay, misbind,
//! reflect, relay, drop) and exports byte-stable transcripts. [`batch`]
//! provides the data-parallel lane used by trial suites and attack matrices;
//! build with `--no-default-features` for the sequential fallback.

pub mod batch;
pub mod commitment;
pub mod delegation;
pub mod group;
mod hashing;
pub mod identification;
pub mod key_exchange;
pub mod pki;
pub mod primitives;
pub mod proximity;
pub mod sim;
pub mod wire;

pub use group::{Group, GroupId};
