//! Distance-bounding authentication for co-located wireless devices.
//!
//! The verifier fires n challenge nonces; the prover answers each with a
//! keyed hash of (round index, challenge). Round-trip time puts an upper
//! bound on the prover's distance: distance_i = c · (RTT_i − processing
//! credit) / 2, and the final estimate is the **max** over rounds — no
//! sender farther than that could have produced the replies in time, so max
//! (not mean) is the conservative bound. Binding the round index into the
//! response stops responses from being replayed across rounds.
//!
//! Time is the simulator's virtual clock in integer nanoseconds; wall-clock
//! distance bounding is out of scope because commodity stacks cannot time
//! light-speed round trips.

use rand::RngCore;
use thiserror::Error;

use crate::hashing::{self, ct_eq, DOM_DB_RESPONSE};
use crate::wire::{self, PROTO_DISTANCE_BOUNDING};

pub const MSG_CHALLENGE: u8 = 1;
pub const MSG_RESPONSE: u8 = 2;

/// Nonce bytes per challenge.
pub const CHALLENGE_LEN: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DbError {
    #[error("round {0} timed out (channel loss)")]
    RoundTimeout(u32),
    #[error("malformed wire message: {0}")]
    Malformed(#[from] wire::WireError),
}

#[derive(Debug, Clone)]
pub struct BoundingConfig {
    pub rounds: u32,
    /// Signal speed in meters/second.
    pub signal_speed: f64,
    /// Processing time credited to an honest responder, per round.
    pub processing_delay_ns: u64,
    pub distance_threshold_m: f64,
    /// Width of the keyed response; an adversary without the key passes a
    /// round with probability 2^-response_bits.
    pub response_bits: u32,
}

impl Default for BoundingConfig {
    fn default() -> Self {
        BoundingConfig {
            rounds: 32,
            signal_speed: 2.998e8,
            processing_delay_ns: 0,
            distance_threshold_m: 10.0,
            response_bits: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundingVerdict {
    WithinBound,
    OutOfBound,
    ResponseInvalid,
}

#[derive(Debug, Clone)]
pub struct BoundingResult {
    /// Max over per-round estimates.
    pub estimated_distance_m: f64,
    pub rounds_passed: u32,
    pub verdict: BoundingVerdict,
    pub per_round_distance_m: Vec<f64>,
}

/// The keyed per-round response; constant work per round.
pub fn expected_response(key: &[u8; 32], round: u32, challenge: &[u8], bits: u32) -> Vec<u8> {
    let digest = hashing::hash(DOM_DB_RESPONSE, &[key, &round.to_be_bytes(), challenge]);
    truncate_bits(&digest, bits)
}

fn truncate_bits(digest: &[u8; 32], bits: u32) -> Vec<u8> {
    let nbytes = (bits as usize).div_ceil(8).min(32);
    let mut out = digest[..nbytes].to_vec();
    let spare = nbytes * 8 - bits as usize;
    if spare > 0 {
        out[0] &= 0xff >> spare;
    }
    out
}

/// Distance bound implied by one round trip.
pub fn distance_from_rtt(config: &BoundingConfig, rtt_ns: u64) -> f64 {
    let effective = rtt_ns.saturating_sub(config.processing_delay_ns);
    config.signal_speed * (effective as f64 * 1e-9) / 2.0
}

/// Prover half: holds the shared key and answers challenges.
pub struct DbProver {
    key: [u8; 32],
    bits: u32,
}

impl DbProver {
    pub fn new(key: [u8; 32], bits: u32) -> DbProver {
        DbProver { key, bits }
    }

    pub fn respond(&self, round: u32, challenge: &[u8]) -> Vec<u8> {
        expected_response(&self.key, round, challenge, self.bits)
    }
}

/// One round-trip over whatever medium the caller models: given the
/// challenge and the verifier-side send time, produce the response bytes
/// and the verifier-side arrival time, or None for channel loss.
pub trait DbChannel {
    fn exchange(&mut self, round: u32, challenge: &[u8], sent_at_ns: u64)
        -> Option<(Vec<u8>, u64)>;
}

/// Run the full bounding exchange as verifier.
pub fn db_run(
    config: &BoundingConfig,
    key: &[u8; 32],
    channel: &mut dyn DbChannel,
    rng: &mut dyn RngCore,
) -> Result<BoundingResult, DbError> {
    let mut now_ns: u64 = 0;
    let mut per_round = Vec::with_capacity(config.rounds as usize);
    let mut rounds_passed = 0;
    let mut all_valid = true;
    for round in 0..config.rounds {
        let mut challenge = [0u8; CHALLENGE_LEN];
        rng.fill_bytes(&mut challenge);
        let (response, arrived_at) = channel
            .exchange(round, &challenge, now_ns)
            .ok_or(DbError::RoundTimeout(round))?;
        let rtt = arrived_at.saturating_sub(now_ns);
        now_ns = arrived_at;
        let distance = distance_from_rtt(config, rtt);
        per_round.push(distance);
        let expected = expected_response(key, round, &challenge, config.response_bits);
        if ct_eq(&expected, &response) {
            rounds_passed += 1;
        } else {
            all_valid = false;
        }
    }
    let estimated = per_round.iter().cloned().fold(0.0f64, f64::max);
    let verdict = if !all_valid {
        BoundingVerdict::ResponseInvalid
    } else if estimated <= config.distance_threshold_m {
        BoundingVerdict::WithinBound
    } else {
        BoundingVerdict::OutOfBound
    };
    Ok(BoundingResult {
        estimated_distance_m: estimated,
        rounds_passed,
        verdict,
        per_round_distance_m: per_round,
    })
}

/// A point-to-point radio path: light-speed propagation over a fixed
/// distance, optional relay delay added each way, honest prover processing
/// credit, and scripted loss.
pub struct SimulatedPath {
    pub distance_m: f64,
    pub extra_delay_each_way_ns: u64,
    pub signal_speed: f64,
    pub processing_delay_ns: u64,
    pub prover: DbProver,
    pub lose_rounds: Vec<u32>,
}

impl SimulatedPath {
    pub fn honest(distance_m: f64, config: &BoundingConfig, key: [u8; 32]) -> SimulatedPath {
        SimulatedPath {
            distance_m,
            extra_delay_each_way_ns: 0,
            signal_speed: config.signal_speed,
            processing_delay_ns: config.processing_delay_ns,
            prover: DbProver::new(key, config.response_bits),
            lose_rounds: Vec::new(),
        }
    }

    fn one_way_ns(&self) -> u64 {
        let propagation = self.distance_m / self.signal_speed * 1e9;
        propagation.round() as u64 + self.extra_delay_each_way_ns
    }
}

impl DbChannel for SimulatedPath {
    fn exchange(
        &mut self,
        round: u32,
        challenge: &[u8],
        sent_at_ns: u64,
    ) -> Option<(Vec<u8>, u64)> {
        if self.lose_rounds.contains(&round) {
            return None;
        }
        let response = self.prover.respond(round, challenge);
        let arrival = sent_at_ns + 2 * self.one_way_ns() + self.processing_delay_ns;
        Some((response, arrival))
    }
}

/// Wire framing for the simulator's transcript records.
pub fn challenge_message(round: u32, challenge: &[u8]) -> Vec<u8> {
    wire::frame(
        PROTO_DISTANCE_BOUNDING,
        MSG_CHALLENGE,
        &[&round.to_be_bytes(), challenge],
    )
}

pub fn response_message(round: u32, response: &[u8]) -> Vec<u8> {
    wire::frame(
        PROTO_DISTANCE_BOUNDING,
        MSG_RESPONSE,
        &[&round.to_be_bytes(), response],
    )
}
