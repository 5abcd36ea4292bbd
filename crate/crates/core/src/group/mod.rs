//! Cyclic prime-order group abstraction with three backends: a hand-checkable
//! toy group (p = 23, q = 11), a fixed 1024-bit Schnorr integer group, and
//! the prime192v1 elliptic curve.
//!
//! Every scheme in the crate works against [`Group`]: `exp` is modular
//! exponentiation for integer groups and scalar multiplication on the curve,
//! `mul` is the group law. Scalars live in `Z_q` and are reduced on
//! construction. Deserialization admits only order-`q` elements (subgroup
//! check for mod-p, on-curve check for the cofactor-1 curve), which is the
//! control tested against small-subgroup injection.

mod curve;
mod modp;

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::RngCore;
use thiserror::Error;

use crate::hashing::{self, DOM_HASH_TO_GROUP};
use curve::{CurveParams, EcPoint};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("unsupported group `{0}`")]
    UnsupportedGroup(String),
    #[error("malformed element encoding: expected {expected} bytes, got {got}")]
    MalformedElement { expected: usize, got: usize },
    #[error("invalid element: not a member of the order-q subgroup")]
    InvalidElement,
}

/// Stable identifiers for the shipped group parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupId {
    /// p = 23, q = 11, for hand-checkable tests and brute-force oracles only.
    Toy23,
    /// Fixed 1024-bit safe-prime Schnorr group (p = 2q + 1).
    ModP1024,
    /// NIST prime192v1 (P-192) elliptic curve.
    Prime192v1,
}

impl GroupId {
    pub fn as_str(&self) -> &'static str {
        match self {
            GroupId::Toy23 => "toy-23",
            GroupId::ModP1024 => "modp-1024",
            GroupId::Prime192v1 => "prime192v1",
        }
    }

    /// Groups that are acceptable outside of tests and demos.
    pub fn is_secure(&self) -> bool {
        !matches!(self, GroupId::Toy23)
    }

    pub const ALL: [GroupId; 3] = [GroupId::Toy23, GroupId::ModP1024, GroupId::Prime192v1];
}

impl FromStr for GroupId {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "toy-23" => Ok(GroupId::Toy23),
            "modp-1024" => Ok(GroupId::ModP1024),
            "prime192v1" => Ok(GroupId::Prime192v1),
            other => Err(GroupError::UnsupportedGroup(other.to_string())),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    ModP,
    EllipticCurve,
}

/// An exponent, challenge or response in `Z_q`, reduced on construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(BigUint);

impl Scalar {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Raw value. Exposed for oracles and wire encoding; always `< q`.
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Best-effort erasure of ephemeral exponents once they are spent.
    pub fn wipe(&mut self) {
        self.0 = BigUint::zero();
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.0)
    }
}

enum Repr {
    ModP(BigUint),
    Ec(EcPoint),
}

/// A member of the order-q subgroup (or the identity).
#[derive(Clone, PartialEq, Eq)]
pub struct Element(Repr);

impl Clone for Repr {
    fn clone(&self) -> Self {
        match self {
            Repr::ModP(v) => Repr::ModP(v.clone()),
            Repr::Ec(p) => Repr::Ec(p.clone()),
        }
    }
}

impl PartialEq for Repr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Repr::ModP(a), Repr::ModP(b)) => a == b,
            (Repr::Ec(a), Repr::Ec(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Repr {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::ModP(v) => write!(f, "Element({v})"),
            Repr::Ec(p) => write!(f, "Element({p:?})"),
        }
    }
}

/// Per-session exponentiation counter. Protocol sessions own one; the
/// benchmark harness reads it to cross-check the structural comparison table.
#[derive(Debug, Default)]
pub struct ExpCounter(Cell<u64>);

impl ExpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bump(&self) {
        self.0.set(self.0.get() + 1);
    }

    pub fn get(&self) -> u64 {
        self.0.get()
    }

    pub fn reset(&self) {
        self.0.set(0);
    }
}

enum Backend {
    ModP { p: BigUint },
    Ec(CurveParams),
}

/// A fully materialized group description: parameters, generators and
/// canonical element encoding. Immutable after construction and safe to
/// share across concurrent sessions.
pub struct Group {
    id: GroupId,
    kind: GroupKind,
    q: BigUint,
    backend: Backend,
    g: Element,
    g1: Element,
    g2: Element,
    element_width: usize,
    scalar_width: usize,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("id", &self.id)
            .field("kind", &self.kind)
            .finish()
    }
}

impl Group {
    /// Materialize one of the shipped parameter sets. The modp-1024 constants
    /// are fixed (never regenerated) so benchmark runs stay comparable.
    pub fn new(id: GroupId) -> Group {
        match id {
            GroupId::Toy23 => {
                let p = BigUint::from(23u32);
                let q = BigUint::from(11u32);
                let g = Element(Repr::ModP(BigUint::from(2u32)));
                // The toy group ships g2 = 3 = g^8, with the discrete log
                // deliberately known, so equivocation demonstrations work.
                let g2 = Element(Repr::ModP(BigUint::from(3u32)));
                Group {
                    id,
                    kind: GroupKind::ModP,
                    q,
                    backend: Backend::ModP { p },
                    g: g.clone(),
                    g1: g.clone(),
                    g2,
                    element_width: 1,
                    scalar_width: 1,
                }
            }
            GroupId::ModP1024 => {
                let p = modp::modp1024_prime();
                let q: BigUint = (&p - 1u32) >> 1;
                let g = Element(Repr::ModP(BigUint::from(2u32)));
                let mut group = Group {
                    id,
                    kind: GroupKind::ModP,
                    q,
                    backend: Backend::ModP { p },
                    g: g.clone(),
                    g1: g.clone(),
                    g2: g.clone(), // placeholder until hash-derived below
                    element_width: 128,
                    scalar_width: 128,
                };
                group.g2 = group.derive_generator(b"modp-1024/g2");
                group
            }
            GroupId::Prime192v1 => {
                let params = curve::prime192v1();
                let q = params.order.clone();
                let g = Element(Repr::Ec(params.base.clone()));
                let mut group = Group {
                    id,
                    kind: GroupKind::EllipticCurve,
                    q,
                    backend: Backend::Ec(params),
                    g: g.clone(),
                    g1: g.clone(),
                    g2: g.clone(),
                    element_width: 49,
                    scalar_width: 24,
                };
                group.g2 = group.derive_generator(b"prime192v1/g2");
                group
            }
        }
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Prime subgroup order q.
    pub fn order(&self) -> &BigUint {
        &self.q
    }

    /// Field prime (mod-p modulus or curve field prime).
    pub fn modulus(&self) -> &BigUint {
        match &self.backend {
            Backend::ModP { p } => p,
            Backend::Ec(c) => &c.p,
        }
    }

    pub fn generator(&self) -> &Element {
        &self.g
    }

    pub fn g1(&self) -> &Element {
        &self.g1
    }

    pub fn g2(&self) -> &Element {
        &self.g2
    }

    /// Bytes per serialized element.
    pub fn element_width(&self) -> usize {
        self.element_width
    }

    /// Bytes per serialized scalar.
    pub fn scalar_width(&self) -> usize {
        self.scalar_width
    }

    /// A copy of this group with a caller-chosen second generator. Tests use
    /// this to install a known-dlog g2 and demonstrate Pedersen equivocation.
    pub fn with_g2(&self, g2: Element) -> Group {
        Group {
            id: self.id,
            kind: self.kind,
            q: self.q.clone(),
            backend: match &self.backend {
                Backend::ModP { p } => Backend::ModP { p: p.clone() },
                Backend::Ec(c) => Backend::Ec(c.clone()),
            },
            g: self.g.clone(),
            g1: self.g1.clone(),
            g2,
            element_width: self.element_width,
            scalar_width: self.scalar_width,
        }
    }

    /// Hash a domain-separation label to an order-q element with unknown
    /// discrete log (deterministic try-and-increment).
    pub fn derive_generator(&self, label: &[u8]) -> Element {
        for counter in 0u32.. {
            let digest = hashing::hash(
                DOM_HASH_TO_GROUP,
                &[self.id.as_str().as_bytes(), label, &counter.to_be_bytes()],
            );
            match &self.backend {
                Backend::ModP { p } => {
                    // Land in the order-q subgroup by raising to the cofactor.
                    let v = BigUint::from_bytes_be(&digest) % p;
                    let cofactor = (p - 1u32) / &self.q;
                    let candidate = v.modpow(&cofactor, p);
                    if !candidate.is_one() && !candidate.is_zero() {
                        return Element(Repr::ModP(candidate));
                    }
                }
                Backend::Ec(c) => {
                    let x = BigUint::from_bytes_be(&digest) % &c.p;
                    if let Some(point) = c.lift_x(&x) {
                        return Element(Repr::Ec(point));
                    }
                }
            }
        }
        unreachable!("try-and-increment terminates")
    }

    pub fn identity(&self) -> Element {
        match &self.backend {
            Backend::ModP { .. } => Element(Repr::ModP(BigUint::one())),
            Backend::Ec(_) => Element(Repr::Ec(EcPoint::Infinity)),
        }
    }

    pub fn is_identity(&self, e: &Element) -> bool {
        match &e.0 {
            Repr::ModP(v) => v.is_one(),
            Repr::Ec(p) => matches!(p, EcPoint::Infinity),
        }
    }

    /// base^k (mod-p) or k·base (curve).
    pub fn exp(&self, base: &Element, k: &Scalar) -> Element {
        match (&self.backend, &base.0) {
            (Backend::ModP { p }, Repr::ModP(b)) => Element(Repr::ModP(b.modpow(&k.0, p))),
            (Backend::Ec(c), Repr::Ec(pt)) => Element(Repr::Ec(c.scalar_mul(pt, &k.0))),
            _ => panic!("element does not belong to this group backend"),
        }
    }

    /// `exp` that charges one unit to a session counter.
    pub fn exp_counted(&self, base: &Element, k: &Scalar, counter: &ExpCounter) -> Element {
        counter.bump();
        self.exp(base, k)
    }

    /// Group law: modular multiplication or point addition.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match (&self.backend, &a.0, &b.0) {
            (Backend::ModP { p }, Repr::ModP(x), Repr::ModP(y)) => {
                Element(Repr::ModP((x * y) % p))
            }
            (Backend::Ec(c), Repr::Ec(x), Repr::Ec(y)) => Element(Repr::Ec(c.add(x, y))),
            _ => panic!("element does not belong to this group backend"),
        }
    }

    pub fn inv(&self, a: &Element) -> Element {
        match (&self.backend, &a.0) {
            (Backend::ModP { p }, Repr::ModP(x)) => {
                let inv = mod_inverse(x, p).expect("nonzero residue mod prime");
                Element(Repr::ModP(inv))
            }
            (Backend::Ec(c), Repr::Ec(pt)) => Element(Repr::Ec(c.negate(pt))),
            _ => panic!("element does not belong to this group backend"),
        }
    }

    pub fn scalar_from_u64(&self, v: u64) -> Scalar {
        Scalar(BigUint::from(v) % &self.q)
    }

    pub fn scalar_from_biguint(&self, v: BigUint) -> Scalar {
        Scalar(v % &self.q)
    }

    /// Big-endian bytes reduced mod q (used for hash-to-challenge; the
    /// reduction bias of a 256-bit digest against a 160-1023 bit q is
    /// negligible for this artifact's purposes).
    pub fn scalar_from_bytes_reduced(&self, bytes: &[u8]) -> Scalar {
        Scalar(BigUint::from_bytes_be(bytes) % &self.q)
    }

    /// Uniform scalar in [1, q) by rejection sampling; deterministic for a
    /// seeded RNG regardless of platform.
    pub fn random_scalar(&self, rng: &mut dyn RngCore) -> Scalar {
        loop {
            let s = self.random_scalar_allow_zero(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Uniform scalar over the full range [0, q); challenges use this so
    /// soundness draws from all of Z_q.
    pub fn random_scalar_allow_zero(&self, rng: &mut dyn RngCore) -> Scalar {
        let bits = self.q.bits();
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
            if v < self.q {
                return Scalar(v);
            }
        }
    }

    pub fn scalar_add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 + &b.0) % &self.q)
    }

    pub fn scalar_sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.0 >= b.0 {
            Scalar((&a.0 - &b.0) % &self.q)
        } else {
            Scalar(&self.q - ((&b.0 - &a.0) % &self.q))
        }
    }

    pub fn scalar_mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        Scalar((&a.0 * &b.0) % &self.q)
    }

    pub fn scalar_inv(&self, a: &Scalar) -> Option<Scalar> {
        mod_inverse(&a.0, &self.q).map(Scalar)
    }

    pub fn scalar_to_bytes(&self, s: &Scalar) -> Vec<u8> {
        be_bytes_fixed(&s.0, self.scalar_width)
    }

    pub fn scalar_from_fixed_bytes(&self, bytes: &[u8]) -> Result<Scalar, GroupError> {
        if bytes.len() != self.scalar_width {
            return Err(GroupError::MalformedElement {
                expected: self.scalar_width,
                got: bytes.len(),
            });
        }
        let v = BigUint::from_bytes_be(bytes);
        if v >= self.q {
            return Err(GroupError::InvalidElement);
        }
        Ok(Scalar(v))
    }

    /// Canonical encoding: fixed-width big-endian residue for mod-p groups,
    /// uncompressed `0x04 ‖ X ‖ Y` for the curve (all-zero bytes encode the
    /// identity point).
    pub fn serialize(&self, e: &Element) -> Vec<u8> {
        match &e.0 {
            Repr::ModP(v) => be_bytes_fixed(v, self.element_width),
            Repr::Ec(EcPoint::Infinity) => vec![0u8; self.element_width],
            Repr::Ec(EcPoint::Affine { x, y }) => {
                let mut out = Vec::with_capacity(self.element_width);
                out.push(0x04);
                out.extend_from_slice(&be_bytes_fixed(x, 24));
                out.extend_from_slice(&be_bytes_fixed(y, 24));
                out
            }
        }
    }

    /// Decode and validate. Rejecting non-subgroup residues here is the
    /// tested control against small-subgroup injection.
    pub fn deserialize(&self, bytes: &[u8]) -> Result<Element, GroupError> {
        if bytes.len() != self.element_width {
            return Err(GroupError::MalformedElement {
                expected: self.element_width,
                got: bytes.len(),
            });
        }
        match &self.backend {
            Backend::ModP { p } => {
                let v = BigUint::from_bytes_be(bytes);
                if v.is_zero() || v >= *p {
                    return Err(GroupError::InvalidElement);
                }
                // Subgroup membership: v^q == 1.
                if !v.modpow(&self.q, p).is_one() {
                    return Err(GroupError::InvalidElement);
                }
                Ok(Element(Repr::ModP(v)))
            }
            Backend::Ec(c) => {
                if bytes.iter().all(|&b| b == 0) {
                    return Ok(Element(Repr::Ec(EcPoint::Infinity)));
                }
                if bytes[0] != 0x04 {
                    return Err(GroupError::InvalidElement);
                }
                let x = BigUint::from_bytes_be(&bytes[1..25]);
                let y = BigUint::from_bytes_be(&bytes[25..49]);
                if x >= c.p || y >= c.p || !c.on_curve(&x, &y) {
                    return Err(GroupError::InvalidElement);
                }
                // Cofactor 1: every affine curve point already has order q.
                Ok(Element(Repr::Ec(EcPoint::Affine { x, y })))
            }
        }
    }

    /// Lift an x-coordinate to a curve point if the cubic has a root
    /// (curve backends only; mod-p groups return None).
    pub fn lift_x_to_element(&self, x: &BigUint) -> Option<Element> {
        match &self.backend {
            Backend::Ec(c) => c.lift_x(x).map(|p| Element(Repr::Ec(p))),
            Backend::ModP { .. } => None,
        }
    }

    /// Construct a mod-p element without the subgroup check. Only for tests
    /// and oracles that need raw residues (e.g. injection experiments).
    pub fn element_from_residue_unchecked(&self, v: BigUint) -> Element {
        match &self.backend {
            Backend::ModP { .. } => Element(Repr::ModP(v)),
            Backend::Ec(_) => panic!("raw residues only exist for mod-p groups"),
        }
    }

    /// Residue value of a mod-p element (tests and demo printing).
    pub fn residue<'a>(&self, e: &'a Element) -> Option<&'a BigUint> {
        match &e.0 {
            Repr::ModP(v) => Some(v),
            Repr::Ec(_) => None,
        }
    }
}

fn be_bytes_fixed(v: &BigUint, width: usize) -> Vec<u8> {
    let raw = v.to_bytes_be();
    assert!(raw.len() <= width, "value does not fit encoding width");
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(&raw);
    out
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
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
