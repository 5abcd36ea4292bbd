//! Interactive proof-of-identity for owner-to-cloud authentication: the
//! Schnorr and Okamoto identification schemes.
//!
//! Both are three-message commit/challenge/response protocols (a comparison
//! table elsewhere counts Schnorr at 4 rounds; the message flow itself has
//! 3, and that is what this module implements and what the structural checks
//! assert). Sessions are single-use and strictly forward: a second response
//! for the same challenge is rejected, and the ephemeral exponent is wiped
//! as soon as the response is computed — neither scheme withstands ephemeral
//! key leakage, so minimizing exposure is the only in-scope mitigation.

use rand::RngCore;
use thiserror::Error;

use crate::group::{Element, ExpCounter, Group, Scalar};
use crate::wire::{self, PROTO_OKAMOTO, PROTO_SCHNORR};

pub const MSG_COMMIT: u8 = 1;
pub const MSG_CHALLENGE: u8 = 2;
pub const MSG_RESPONSE: u8 = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdError {
    #[error("message out of protocol order")]
    ProtocolOrderViolation,
    #[error("malformed wire message: {0}")]
    Malformed(#[from] wire::WireError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

/// Schnorr keys: sk = a, pk = A = g^a.
#[derive(Clone, Debug)]
pub struct SchnorrKeys {
    pub sk: Scalar,
    pub pk: Element,
}

impl SchnorrKeys {
    pub fn generate(group: &Group, rng: &mut dyn RngCore) -> SchnorrKeys {
        let sk = group.random_scalar(rng);
        let pk = group.exp(group.generator(), &sk);
        SchnorrKeys { sk, pk }
    }
}

/// Okamoto keys: sk = (a1, a2), pk = A = g1^a1 · g2^a2.
#[derive(Clone, Debug)]
pub struct OkamotoKeys {
    pub sk: (Scalar, Scalar),
    pub pk: Element,
}

impl OkamotoKeys {
    pub fn generate(group: &Group, rng: &mut dyn RngCore) -> OkamotoKeys {
        let a1 = group.random_scalar(rng);
        let a2 = group.random_scalar(rng);
        let pk = group.mul(&group.exp(group.g1(), &a1), &group.exp(group.g2(), &a2));
        OkamotoKeys { sk: (a1, a2), pk }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ProverState {
    Committed,
    Responded,
}

/// Prover side of a Schnorr identification run.
pub struct SchnorrProver {
    keys: SchnorrKeys,
    ephemeral: Option<Scalar>,
    pub commitment: Element,
    state: ProverState,
    exps: ExpCounter,
}

impl SchnorrProver {
    /// Draw x ∈ [1, q) (zero would be a degenerate commitment) and send
    /// X = g^x. Costs exactly one exponentiation.
    pub fn commit(group: &Group, keys: SchnorrKeys, rng: &mut dyn RngCore) -> SchnorrProver {
        let exps = ExpCounter::new();
        let x = group.random_scalar(rng);
        let commitment = group.exp_counted(group.generator(), &x, &exps);
        SchnorrProver {
            keys,
            ephemeral: Some(x),
            commitment,
            state: ProverState::Committed,
            exps,
        }
    }

    /// ρ = x + a·μ mod q. Consumes the ephemeral.
    pub fn respond(&mut self, group: &Group, challenge: &Scalar) -> Result<Scalar, IdError> {
        if self.state != ProverState::Committed {
            return Err(IdError::ProtocolOrderViolation);
        }
        let mut x = self.ephemeral.take().expect("ephemeral present in Committed");
        let rho = group.scalar_add(&x, &group.scalar_mul(&self.keys.sk, challenge));
        x.wipe();
        self.state = ProverState::Responded;
        Ok(rho)
    }

    pub fn exp_count(&self) -> u64 {
        self.exps.get()
    }

    /// True once the ephemeral has been consumed and wiped.
    pub fn ephemeral_erased(&self) -> bool {
        self.ephemeral.is_none()
    }

    pub fn commit_message(&self, group: &Group) -> Vec<u8> {
        wire::frame(PROTO_SCHNORR, MSG_COMMIT, &[&group.serialize(&self.commitment)])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VerifierState {
    Challenged,
    Decided,
}

/// Verifier side; owns the challenge and accepts exactly one response.
pub struct SchnorrVerifier {
    pk: Element,
    commitment: Element,
    challenge: Scalar,
    state: VerifierState,
}

impl SchnorrVerifier {
    pub fn challenge(
        group: &Group,
        pk: &Element,
        commitment: &Element,
        rng: &mut dyn RngCore,
    ) -> SchnorrVerifier {
        SchnorrVerifier {
            pk: pk.clone(),
            commitment: commitment.clone(),
            challenge: group.random_scalar_allow_zero(rng),
            state: VerifierState::Challenged,
        }
    }

    pub fn challenge_value(&self) -> &Scalar {
        &self.challenge
    }

    pub fn decide(&mut self, group: &Group, response: &Scalar) -> Result<Verdict, IdError> {
        if self.state != VerifierState::Challenged {
            return Err(IdError::ProtocolOrderViolation);
        }
        self.state = VerifierState::Decided;
        Ok(schnorr_verify(
            group,
            &self.commitment,
            &self.pk,
            &self.challenge,
            response,
        ))
    }
}

/// Stateless check: g^ρ = X · A^μ.
pub fn schnorr_verify(
    group: &Group,
    commitment: &Element,
    pk: &Element,
    challenge: &Scalar,
    response: &Scalar,
) -> Verdict {
    let lhs = group.exp(group.generator(), response);
    let rhs = group.mul(commitment, &group.exp(pk, challenge));
    if lhs == rhs {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

/// Prover side of an Okamoto run: two ephemerals, X = g1^x1 · g2^x2.
pub struct OkamotoProver {
    keys: OkamotoKeys,
    ephemeral: Option<(Scalar, Scalar)>,
    pub commitment: Element,
    state: ProverState,
    exps: ExpCounter,
}

impl OkamotoProver {
    /// Costs exactly two exponentiations.
    pub fn commit(group: &Group, keys: OkamotoKeys, rng: &mut dyn RngCore) -> OkamotoProver {
        let exps = ExpCounter::new();
        let x1 = group.random_scalar(rng);
        let x2 = group.random_scalar(rng);
        let commitment = group.mul(
            &group.exp_counted(group.g1(), &x1, &exps),
            &group.exp_counted(group.g2(), &x2, &exps),
        );
        OkamotoProver {
            keys,
            ephemeral: Some((x1, x2)),
            commitment,
            state: ProverState::Committed,
            exps,
        }
    }

    /// ρ1 = x1 + μ·a1, ρ2 = x2 + μ·a2.
    pub fn respond(
        &mut self,
        group: &Group,
        challenge: &Scalar,
    ) -> Result<(Scalar, Scalar), IdError> {
        if self.state != ProverState::Committed {
            return Err(IdError::ProtocolOrderViolation);
        }
        let (mut x1, mut x2) = self.ephemeral.take().expect("ephemeral present");
        let rho1 = group.scalar_add(&x1, &group.scalar_mul(challenge, &self.keys.sk.0));
        let rho2 = group.scalar_add(&x2, &group.scalar_mul(challenge, &self.keys.sk.1));
        x1.wipe();
        x2.wipe();
        self.state = ProverState::Responded;
        Ok((rho1, rho2))
    }

    pub fn exp_count(&self) -> u64 {
        self.exps.get()
    }

    pub fn ephemeral_erased(&self) -> bool {
        self.ephemeral.is_none()
    }

    pub fn commit_message(&self, group: &Group) -> Vec<u8> {
        wire::frame(PROTO_OKAMOTO, MSG_COMMIT, &[&group.serialize(&self.commitment)])
    }
}

pub struct OkamotoVerifier {
    pk: Element,
    commitment: Element,
    challenge: Scalar,
    state: VerifierState,
}

impl OkamotoVerifier {
    pub fn challenge(
        group: &Group,
        pk: &Element,
        commitment: &Element,
        rng: &mut dyn RngCore,
    ) -> OkamotoVerifier {
        OkamotoVerifier {
            pk: pk.clone(),
            commitment: commitment.clone(),
            challenge: group.random_scalar_allow_zero(rng),
            state: VerifierState::Challenged,
        }
    }

    pub fn challenge_value(&self) -> &Scalar {
        &self.challenge
    }

    pub fn decide(
        &mut self,
        group: &Group,
        response: &(Scalar, Scalar),
    ) -> Result<Verdict, IdError> {
        if self.state != VerifierState::Challenged {
            return Err(IdError::ProtocolOrderViolation);
        }
        self.state = VerifierState::Decided;
        Ok(okamoto_verify(
            group,
            &self.commitment,
            &self.pk,
            &self.challenge,
            &response.0,
            &response.1,
        ))
    }
}

/// Stateless check: g1^ρ1 · g2^ρ2 = X · A^μ.
pub fn okamoto_verify(
    group: &Group,
    commitment: &Element,
    pk: &Element,
    challenge: &Scalar,
    rho1: &Scalar,
    rho2: &Scalar,
) -> Verdict {
    let lhs = group.mul(&group.exp(group.g1(), rho1), &group.exp(group.g2(), rho2));
    let rhs = group.mul(commitment, &group.exp(pk, challenge));
    if lhs == rhs {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

/// Wire messages for a full honest run, in order (used by the simulator and
/// the demo command).
pub fn schnorr_wire_run(
    group: &Group,
    keys: &SchnorrKeys,
    rng: &mut dyn RngCore,
) -> (Vec<Vec<u8>>, Verdict) {
    let mut prover = SchnorrProver::commit(group, keys.clone(), rng);
    let msg1 = prover.commit_message(group);
    let mut verifier = SchnorrVerifier::challenge(group, &keys.pk, &prover.commitment, rng);
    let msg2 = wire::frame(
        PROTO_SCHNORR,
        MSG_CHALLENGE,
        &[&group.scalar_to_bytes(verifier.challenge_value())],
    );
    let rho = prover
        .respond(group, &verifier.challenge_value().clone())
        .expect("fresh session");
    let msg3 = wire::frame(PROTO_SCHNORR, MSG_RESPONSE, &[&group.scalar_to_bytes(&rho)]);
    let verdict = verifier.decide(group, &rho).expect("single response");
    (vec![msg1, msg2, msg3], verdict)
}

pub fn okamoto_wire_run(
    group: &Group,
    keys: &OkamotoKeys,
    rng: &mut dyn RngCore,
) -> (Vec<Vec<u8>>, Verdict) {
    let mut prover = OkamotoProver::commit(group, keys.clone(), rng);
    let msg1 = prover.commit_message(group);
    let mut verifier = OkamotoVerifier::challenge(group, &keys.pk, &prover.commitment, rng);
    let msg2 = wire::frame(
        PROTO_OKAMOTO,
        MSG_CHALLENGE,
        &[&group.scalar_to_bytes(verifier.challenge_value())],
    );
    let (rho1, rho2) = prover
        .respond(group, &verifier.challenge_value().clone())
        .expect("fresh session");
    let msg3 = wire::frame(
        PROTO_OKAMOTO,
        MSG_RESPONSE,
        &[&group.scalar_to_bytes(&rho1), &group.scalar_to_bytes(&rho2)],
    );
    let verdict = verifier.decide(group, &(rho1, rho2)).expect("single response");
    (vec![msg1, msg2, msg3], verdict)
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

    fn s(group: &Group, v: u64) -> Scalar {
        group.scalar_from_u64(v)
    }

    #[test]
    fn schnorr_toy_worked_example() {
        let g = toy();
        // a = 3 → A = 8; forced x = 5 → X = 9; μ = 4 → ρ = 6.
        let a = s(&g, 3);
        let pk = g.exp(g.generator(), &a);
        assert_eq!(g.serialize(&pk), vec![8]);
        let x = s(&g, 5);
        let commitment = g.exp(g.generator(), &x);
        assert_eq!(g.serialize(&commitment), vec![9]);
        let mu = s(&g, 4);
        let rho = g.scalar_add(&x, &g.scalar_mul(&a, &mu));
        assert_eq!(rho, s(&g, 6));
        assert_eq!(
            schnorr_verify(&g, &commitment, &pk, &mu, &rho),
            Verdict::Accept
        );
        // ρ = 7 must reject: 2^7 = 13 ≠ 18.
        assert_eq!(
            schnorr_verify(&g, &commitment, &pk, &mu, &s(&g, 7)),
            Verdict::Reject
        );
    }

    #[test]
    fn okamoto_toy_worked_example() {
        let g = toy();
        // a = (2,5) → A = 6; x = (1,3) → X = 8; μ = 7 → ρ = (4,5).
        let keys = OkamotoKeys {
            sk: (s(&g, 2), s(&g, 5)),
            pk: g.mul(&g.exp(g.g1(), &s(&g, 2)), &g.exp(g.g2(), &s(&g, 5))),
        };
        assert_eq!(g.serialize(&keys.pk), vec![6]);
        let commitment = g.mul(&g.exp(g.g1(), &s(&g, 1)), &g.exp(g.g2(), &s(&g, 3)));
        assert_eq!(g.serialize(&commitment), vec![8]);
        let mu = s(&g, 7);
        let rho1 = g.scalar_add(&s(&g, 1), &g.scalar_mul(&mu, &keys.sk.0));
        let rho2 = g.scalar_add(&s(&g, 3), &g.scalar_mul(&mu, &keys.sk.1));
        assert_eq!((rho1.clone(), rho2.clone()), (s(&g, 4), s(&g, 5)));
        assert_eq!(
            okamoto_verify(&g, &commitment, &keys.pk, &mu, &rho1, &rho2),
            Verdict::Accept
        );
        // perturbing ρ2 to 6 rejects
        assert_eq!(
            okamoto_verify(&g, &commitment, &keys.pk, &mu, &rho1, &s(&g, 6)),
            Verdict::Reject
        );
    }

    #[test]
    fn completeness_random_runs() {
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        for id in GroupId::ALL {
            let g = Group::new(id);
            for _ in 0..25 {
                let keys = SchnorrKeys::generate(&g, &mut rng);
                let mut prover = SchnorrProver::commit(&g, keys.clone(), &mut rng);
                let mut verifier =
                    SchnorrVerifier::challenge(&g, &keys.pk, &prover.commitment, &mut rng);
                let mu = verifier.challenge_value().clone();
                let rho = prover.respond(&g, &mu).unwrap();
                assert_eq!(verifier.decide(&g, &rho).unwrap(), Verdict::Accept);

                let okeys = OkamotoKeys::generate(&g, &mut rng);
                let mut oprover = OkamotoProver::commit(&g, okeys.clone(), &mut rng);
                let mut overifier =
                    OkamotoVerifier::challenge(&g, &okeys.pk, &oprover.commitment, &mut rng);
                let mu = overifier.challenge_value().clone();
                let rho = oprover.respond(&g, &mu).unwrap();
                assert_eq!(overifier.decide(&g, &rho).unwrap(), Verdict::Accept);
            }
        }
    }

    #[test]
    fn challenge_zero_degenerates_to_commitment_check() {
        let g = toy();
        let x = s(&g, 5);
        let commitment = g.exp(g.generator(), &x);
        let pk = g.exp(g.generator(), &s(&g, 3));
        // μ = 0: accept iff g^ρ = X.
        assert_eq!(
            schnorr_verify(&g, &commitment, &pk, &s(&g, 0), &x),
            Verdict::Accept
        );
        assert_eq!(
            schnorr_verify(&g, &commitment, &pk, &s(&g, 0), &s(&g, 6)),
            Verdict::Reject
        );
    }

    #[test]
    fn prover_counts_match_comparison_table() {
        let mut rng = ChaCha20Rng::seed_from_u64(32);
        let g = toy();
        let prover = SchnorrProver::commit(&g, SchnorrKeys::generate(&g, &mut rng), &mut rng);
        assert_eq!(prover.exp_count(), 1);
        let oprover = OkamotoProver::commit(&g, OkamotoKeys::generate(&g, &mut rng), &mut rng);
        assert_eq!(oprover.exp_count(), 2);
    }

    #[test]
    fn ephemeral_erased_after_response() {
        let mut rng = ChaCha20Rng::seed_from_u64(33);
        let g = toy();
        let keys = SchnorrKeys::generate(&g, &mut rng);
        let mut prover = SchnorrProver::commit(&g, keys.clone(), &mut rng);
        assert!(!prover.ephemeral_erased());
        prover.respond(&g, &s(&g, 4)).unwrap();
        assert!(prover.ephemeral_erased());
    }

    #[test]
    fn second_response_is_order_violation() {
        let mut rng = ChaCha20Rng::seed_from_u64(34);
        let g = toy();
        let keys = SchnorrKeys::generate(&g, &mut rng);
        let mut prover = SchnorrProver::commit(&g, keys.clone(), &mut rng);
        let mut verifier = SchnorrVerifier::challenge(&g, &keys.pk, &prover.commitment, &mut rng);
        let mu = verifier.challenge_value().clone();
        let rho = prover.respond(&g, &mu).unwrap();
        assert_eq!(prover.respond(&g, &mu), Err(IdError::ProtocolOrderViolation));
        verifier.decide(&g, &rho).unwrap();
        assert_eq!(
            verifier.decide(&g, &rho),
            Err(IdError::ProtocolOrderViolation)
        );
    }

    /// Desk-scale soundness: for a fixed commitment and honest public key,
    /// every challenge admits exactly one accepting response.
    #[test]
    fn toy_unique_response_per_challenge() {
        let g = toy();
        let pk = g.exp(g.generator(), &s(&g, 3));
        let commitment = g.exp(g.generator(), &s(&g, 5));
        for mu in 0..11u64 {
            let accepting: Vec<u64> = (0..11u64)
                .filter(|&rho| {
                    schnorr_verify(&g, &commitment, &pk, &s(&g, mu), &s(&g, rho))
                        == Verdict::Accept
                })
                .collect();
            assert_eq!(accepting.len(), 1, "challenge {mu}");
        }
    }

    /// Special soundness: two accepting transcripts with distinct challenges
    /// leak the key via a = (ρ − ρ′)/(μ − μ′).
    #[test]
    fn special_soundness_extractor() {
        let mut rng = ChaCha20Rng::seed_from_u64(35);
        let g = Group::new(GroupId::Prime192v1);
        let keys = SchnorrKeys::generate(&g, &mut rng);
        let x = g.random_scalar(&mut rng);
        let commitment = g.exp(g.generator(), &x);
        let mu1 = g.random_scalar(&mut rng);
        let mu2 = g.random_scalar(&mut rng);
        assert_ne!(mu1, mu2);
        let rho1 = g.scalar_add(&x, &g.scalar_mul(&keys.sk, &mu1));
        let rho2 = g.scalar_add(&x, &g.scalar_mul(&keys.sk, &mu2));
        let num = g.scalar_sub(&rho1, &rho2);
        let den = g.scalar_inv(&g.scalar_sub(&mu1, &mu2)).unwrap();
        let extracted = g.scalar_mul(&num, &den);
        assert_eq!(extracted, keys.sk);
    }

    #[test]
    fn wire_runs_produce_three_messages() {
        let mut rng = ChaCha20Rng::seed_from_u64(36);
        let g = toy();
        let keys = SchnorrKeys::generate(&g, &mut rng);
        let (msgs, verdict) = schnorr_wire_run(&g, &keys, &mut rng);
        assert_eq!(msgs.len(), 3);
        assert_eq!(verdict, Verdict::Accept);
        assert_eq!(msgs[0][0], PROTO_SCHNORR);

        let okeys = OkamotoKeys::generate(&g, &mut rng);
        let (msgs, verdict) = okamoto_wire_run(&g, &okeys, &mut rng);
        assert_eq!(msgs.len(), 3);
        assert_eq!(verdict, Verdict::Accept);
        assert_eq!(msgs[2][1], MSG_RESPONSE);
    }

    #[test]
    fn distinct_commitments_with_fresh_randomness() {
        let mut rng = ChaCha20Rng::seed_from_u64(37);
        let g = Group::new(GroupId::Prime192v1);
        let keys = SchnorrKeys::generate(&g, &mut rng);
        let p1 = SchnorrProver::commit(&g, keys.clone(), &mut rng);
        let p2 = SchnorrProver::commit(&g, keys, &mut rng);
        assert_ne!(p1.commitment, p2.commitment);
    }
}
