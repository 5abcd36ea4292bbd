//! Wire message framing shared by every protocol.
//!
//! A message is `protocol id (1 byte) ‖ msg type (1 byte) ‖ fields`, each
//! field length-prefixed with a big-endian u16. Protocol ids:
//!
//! | id   | protocol            |
//! |------|---------------------|
//! | 0x01 | Schnorr IS          |
//! | 0x02 | Okamoto IS          |
//! | 0x03 | Pedersen commitment |
//! | 0x04 | ISO-KE              |
//! | 0x05 | SIGMA               |
//! | 0x06 | TLS adaptation      |
//! | 0x07 | distance bounding   |
//! | 0x08 | proxy re-encryption |
//! | 0x09 | Paillier transport  |
//! | 0x7f | weakened baseline KE (simulator-only, non-normative) |

use thiserror::Error;

pub const PROTO_SCHNORR: u8 = 0x01;
pub const PROTO_OKAMOTO: u8 = 0x02;
pub const PROTO_PEDERSEN: u8 = 0x03;
pub const PROTO_ISO_KE: u8 = 0x04;
pub const PROTO_SIGMA: u8 = 0x05;
pub const PROTO_TLS: u8 = 0x06;
pub const PROTO_DISTANCE_BOUNDING: u8 = 0x07;
pub const PROTO_PRE: u8 = 0x08;
pub const PROTO_PAILLIER: u8 = 0x09;
pub const PROTO_WEAKENED_KE: u8 = 0x7f;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("message truncated")]
    Truncated,
    #[error("trailing bytes after last field")]
    TrailingBytes,
    #[error("field too long for u16 length prefix")]
    FieldTooLong,
    #[error("expected protocol 0x{expected:02x}, got 0x{got:02x}")]
    WrongProtocol { expected: u8, got: u8 },
    #[error("unexpected message type 0x{0:02x}")]
    UnexpectedType(u8),
    #[error("expected {expected} fields, got {got}")]
    FieldCount { expected: usize, got: usize },
}

/// Assemble `proto ‖ msg_type ‖ len-prefixed fields`.
pub fn frame(proto: u8, msg_type: u8, fields: &[&[u8]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(2 + fields.iter().map(|f| f.len() + 2).sum::<usize>());
    out.push(proto);
    out.push(msg_type);
    for field in fields {
        assert!(field.len() <= u16::MAX as usize, "field too long");
        out.extend_from_slice(&(field.len() as u16).to_be_bytes());
        out.extend_from_slice(field);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub proto: u8,
    pub msg_type: u8,
    pub fields: Vec<Vec<u8>>,
}

impl Parsed {
    /// Fields as slices, checked against an expected count.
    pub fn expect_fields(&self, n: usize) -> Result<Vec<&[u8]>, WireError> {
        if self.fields.len() != n {
            return Err(WireError::FieldCount {
                expected: n,
                got: self.fields.len(),
            });
        }
        Ok(self.fields.iter().map(|f| f.as_slice()).collect())
    }
}

pub fn parse(bytes: &[u8]) -> Result<Parsed, WireError> {
    if bytes.len() < 2 {
        return Err(WireError::Truncated);
    }
    let proto = bytes[0];
    let msg_type = bytes[1];
    let mut fields = Vec::new();
    let mut rest = &bytes[2..];
    while !rest.is_empty() {
        if rest.len() < 2 {
            return Err(WireError::Truncated);
        }
        let len = u16::from_be_bytes([rest[0], rest[1]]) as usize;
        rest = &rest[2..];
        if rest.len() < len {
            return Err(WireError::Truncated);
        }
        fields.push(rest[..len].to_vec());
        rest = &rest[len..];
    }
    Ok(Parsed {
        proto,
        msg_type,
        fields,
    })
}

/// Parse and insist on a protocol id.
pub fn parse_expecting(bytes: &[u8], proto: u8) -> Result<Parsed, WireError> {
    let parsed = parse(bytes)?;
    if parsed.proto != proto {
        return Err(WireError::WrongProtocol {
            expected: proto,
            got: parsed.proto,
        });
    }
    Ok(parsed)
}
