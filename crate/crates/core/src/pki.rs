//! Key Generation Center: the trusted issuer of long-term credentials.
//!
//! The KGC signs (identity, public key) bindings at enrollment and keeps a
//! registry for revocation. It is offline during handshakes — devices cache
//! the KGC public key (and, for protocols with certificate preprocessing, a
//! snapshot of peer certificates) at enrollment, so no round of any protocol
//! talks to a trusted third party. Revocation is a registry-local list; no
//! CRL/OCSP wire formats exist here.

use std::collections::{BTreeMap, BTreeSet};

use rand::RngCore;
use thiserror::Error;

use crate::group::{Element, ExpCounter, Group, Scalar};
use crate::primitives::{self, Signature};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PkiError {
    #[error("identity `{0}` already issued")]
    IdentityTaken(String),
    #[error("identity `{0}` unknown to this KGC")]
    NotFound(String),
    #[error("identity must be non-empty")]
    EmptyIdentity,
}

/// A long-term keypair: sk ∈ Z_q, pk = g^sk.
#[derive(Clone, Debug)]
pub struct KeyPair {
    pub sk: Scalar,
    pub pk: Element,
}

impl KeyPair {
    pub fn generate(group: &Group, rng: &mut dyn RngCore) -> KeyPair {
        let sk = group.random_scalar(rng);
        let pk = group.exp(group.generator(), &sk);
        KeyPair { sk, pk }
    }
}

/// An (identity, public key) binding signed by the KGC.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub identity: String,
    pub pk: Element,
    pub issuer: String,
    pub sig: Signature,
}

impl Certificate {
    /// Canonical signed payload: len-prefixed identity ‖ serialized pk,
    /// with the issuer bound in as well.
    fn signed_payload(group: &Group, identity: &str, pk: &Element, issuer: &str) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(identity.len() as u16).to_be_bytes());
        out.extend_from_slice(identity.as_bytes());
        out.extend_from_slice(&group.serialize(pk));
        out.extend_from_slice(&(issuer.len() as u16).to_be_bytes());
        out.extend_from_slice(issuer.as_bytes());
        out
    }

    /// Canonical wire encoding: len-prefixed identity ‖ pk ‖ issuer ‖
    /// signature bytes.
    pub fn to_bytes(&self, group: &Group) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.identity.len() as u16).to_be_bytes());
        out.extend_from_slice(self.identity.as_bytes());
        out.extend_from_slice(&group.serialize(&self.pk));
        out.extend_from_slice(&(self.issuer.len() as u16).to_be_bytes());
        out.extend_from_slice(self.issuer.as_bytes());
        out.extend_from_slice(&primitives::signature_to_bytes(group, &self.sig));
        out
    }

    pub fn from_bytes(group: &Group, bytes: &[u8]) -> Option<Certificate> {
        let take_str = |rest: &mut &[u8]| -> Option<String> {
            if rest.len() < 2 {
                return None;
            }
            let len = u16::from_be_bytes([rest[0], rest[1]]) as usize;
            *rest = &rest[2..];
            if rest.len() < len {
                return None;
            }
            let s = String::from_utf8(rest[..len].to_vec()).ok()?;
            *rest = &rest[len..];
            Some(s)
        };
        let mut rest = bytes;
        let identity = take_str(&mut rest)?;
        let ew = group.element_width();
        if rest.len() < ew {
            return None;
        }
        let pk = group.deserialize(&rest[..ew]).ok()?;
        rest = &rest[ew..];
        let issuer = take_str(&mut rest)?;
        let sig = primitives::signature_from_bytes(group, rest).ok()?;
        Some(Certificate {
            identity,
            pk,
            issuer,
            sig,
        })
    }
}

/// The issuer. Registry writes are serialized through `&mut self`;
/// verification against the public key is stateless.
pub struct Kgc {
    name: String,
    keys: KeyPair,
    issued: BTreeMap<String, Element>,
    revoked: BTreeSet<String>,
}

impl Kgc {
    pub fn new(name: &str, group: &Group, rng: &mut dyn RngCore) -> Kgc {
        Kgc {
            name: name.to_string(),
            keys: KeyPair::generate(group, rng),
            issued: BTreeMap::new(),
            revoked: BTreeSet::new(),
        }
    }

    pub fn public_key(&self) -> &Element {
        &self.keys.pk
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Issue a certificate for a fresh identity.
    pub fn issue(
        &mut self,
        group: &Group,
        identity: &str,
        pk: &Element,
        rng: &mut dyn RngCore,
    ) -> Result<Certificate, PkiError> {
        if identity.is_empty() {
            return Err(PkiError::EmptyIdentity);
        }
        if self.issued.contains_key(identity) {
            return Err(PkiError::IdentityTaken(identity.to_string()));
        }
        let payload = Certificate::signed_payload(group, identity, pk, &self.name);
        let sig = primitives::fs_sign(
            group,
            &self.keys.sk,
            &self.keys.pk,
            &payload,
            rng,
            &ExpCounter::new(),
        );
        self.issued.insert(identity.to_string(), pk.clone());
        Ok(Certificate {
            identity: identity.to_string(),
            pk: pk.clone(),
            issuer: self.name.clone(),
            sig,
        })
    }

    /// Reissue after key evolution: replaces the registered key, so the old
    /// certificate no longer matches the registry (old sessions keep their
    /// already-derived keys; admission of new ones uses the fresh binding).
    pub fn reissue(
        &mut self,
        group: &Group,
        identity: &str,
        pk: &Element,
        rng: &mut dyn RngCore,
    ) -> Result<Certificate, PkiError> {
        if !self.issued.contains_key(identity) {
            return Err(PkiError::NotFound(identity.to_string()));
        }
        self.issued.remove(identity);
        self.issue(group, identity, pk, rng)
    }

    /// Idempotent. Revoked identities fail handshake admission.
    pub fn revoke(&mut self, identity: &str) -> Result<(), PkiError> {
        if !self.issued.contains_key(identity) {
            return Err(PkiError::NotFound(identity.to_string()));
        }
        self.revoked.insert(identity.to_string());
        Ok(())
    }

    pub fn is_revoked(&self, identity: &str) -> bool {
        self.revoked.contains(identity)
    }

    pub fn issued_identities(&self) -> impl Iterator<Item = &str> {
        self.issued.keys().map(|s| s.as_str())
    }

    /// Enrollment-time snapshot handed to devices: KGC public key, the
    /// certificates known so far, and the current revocation list.
    pub fn trust_store(&self, group: &Group, certs: &[Certificate]) -> TrustStore {
        TrustStore {
            kgc_pk: self.keys.pk.clone(),
            certs: certs
                .iter()
                .map(|c| (c.identity.clone(), c.to_bytes(group)))
                .collect(),
            revoked: self.revoked.clone(),
        }
    }
}

/// Verify a certificate against a KGC public key: signature valid over the
/// canonical payload and internally consistent. Returns false on any defect.
pub fn cert_verify(group: &Group, cert: &Certificate, kgc_pk: &Element) -> bool {
    cert_verify_counted(group, cert, kgc_pk, &ExpCounter::new())
}

pub fn cert_verify_counted(
    group: &Group,
    cert: &Certificate,
    kgc_pk: &Element,
    counter: &ExpCounter,
) -> bool {
    if cert.identity.is_empty() {
        return false;
    }
    let payload = Certificate::signed_payload(group, &cert.identity, &cert.pk, &cert.issuer);
    primitives::fs_verify(group, kgc_pk, &payload, &cert.sig, counter)
}

/// A device's cached view of the PKI, fixed at enrollment. Protocols with
/// certificate preprocessing (ISO-KE, TLS) admit a peer certificate by exact
/// byte match against this cache instead of re-verifying the KGC signature
/// inline; SIGMA's certificates arrive encrypted mid-handshake, so it always
/// verifies them online.
#[derive(Clone, Debug)]
pub struct TrustStore {
    kgc_pk: Element,
    certs: BTreeMap<String, Vec<u8>>,
    revoked: BTreeSet<String>,
}

impl TrustStore {
    pub fn kgc_pk(&self) -> &Element {
        &self.kgc_pk
    }

    pub fn is_revoked(&self, identity: &str) -> bool {
        self.revoked.contains(identity)
    }

    /// Byte-exact match against the enrollment snapshot.
    pub fn matches(&self, group: &Group, cert: &Certificate) -> bool {
        self.certs
            .get(&cert.identity)
            .is_some_and(|known| known == &cert.to_bytes(group))
    }
}
