//! Pedersen commitments: commit c = g1^r · g2^m, reveal by handing over
//! (m, r). Unconditionally hiding (the commitment distribution does not
//! depend on m) and binding exactly as long as log_{g1} g2 stays unknown —
//! the equivocation demonstration lives in the tests, deliberately not in
//! the API.
//!
//! The message space is Z_q; byte-string messages are first hashed to a
//! scalar with [`message_to_scalar`].

use rand::RngCore;

use crate::group::{Element, ExpCounter, Group, Scalar};
use crate::hashing::{self, DOM_COMMIT_MSG};
use crate::wire::{self, PROTO_PEDERSEN};

pub const MSG_COMMIT: u8 = 1;
pub const MSG_REVEAL: u8 = 2;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Commitment {
    pub c: Element,
}

/// What the committer keeps private until reveal time.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Opening {
    pub m: Scalar,
    pub r: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reveal {
    Accept(Scalar),
    Reject,
}

/// Commit to m with fresh blinding r. Costs exactly two exponentiations.
pub fn commit(group: &Group, m: &Scalar, rng: &mut dyn RngCore) -> (Commitment, Opening) {
    commit_counted(group, m, rng, &ExpCounter::new())
}

pub fn commit_counted(
    group: &Group,
    m: &Scalar,
    rng: &mut dyn RngCore,
    counter: &ExpCounter,
) -> (Commitment, Opening) {
    let r = group.random_scalar(rng);
    let c = commit_with(group, m, &r, counter);
    (Commitment { c }, Opening { m: m.clone(), r })
}

/// Deterministic form used by reveal-side recomputation and tests.
pub fn commit_with(group: &Group, m: &Scalar, r: &Scalar, counter: &ExpCounter) -> Element {
    group.mul(
        &group.exp_counted(group.g1(), r, counter),
        &group.exp_counted(group.g2(), m, counter),
    )
}

/// Accept iff g1^r · g2^m recomputes to c; any defect rejects.
pub fn reveal(group: &Group, commitment: &Commitment, opening: &Opening) -> Reveal {
    let recomputed = commit_with(group, &opening.m, &opening.r, &ExpCounter::new());
    if recomputed == commitment.c {
        Reveal::Accept(opening.m.clone())
    } else {
        Reveal::Reject
    }
}

/// Hash an arbitrary byte message into the Z_q message space.
pub fn message_to_scalar(group: &Group, msg: &[u8]) -> Scalar {
    let digest = hashing::hash(DOM_COMMIT_MSG, &[group.id().as_str().as_bytes(), msg]);
    group.scalar_from_bytes_reduced(&digest)
}

pub fn commit_message(group: &Group, commitment: &Commitment) -> Vec<u8> {
    wire::frame(PROTO_PEDERSEN, MSG_COMMIT, &[&group.serialize(&commitment.c)])
}

pub fn reveal_message(group: &Group, opening: &Opening) -> Vec<u8> {
    wire::frame(
        PROTO_PEDERSEN,
        MSG_REVEAL,
        &[
            &group.scalar_to_bytes(&opening.m),
            &group.scalar_to_bytes(&opening.r),
        ],
    )
}
