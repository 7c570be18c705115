//! IMSI value type, BCD packing of an MSIN, and IMSI pool status types.
//!
//! An IMSI is a 15-digit identity: a 3-digit mobile country code, a 2- or
//! 3-digit mobile network code, and a 9- or 10-digit subscriber number
//! (MSIN). The MNC length is an operator-wide setting fixed for a
//! simulation run. When a new MSIN travels inside an AKA challenge it is
//! packed as binary-coded decimal into a 48-bit block, one digit per
//! nibble with 0xF filler.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Byte width of the packed-MSIN block carried inside a challenge.
pub const MSIN_BLOCK_LEN: usize = 6;

/// Errors from IMSI construction and MSIN packing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("{field} must be {expected} digits, got {got}")]
    BadLength {
        field: &'static str,
        expected: &'static str,
        got: usize,
    },
    #[error("{field} contains a non-digit character")]
    NonDigit { field: &'static str },
    #[error("MNC length {mnc_len} and MSIN length {msin_len} must sum to 12")]
    BadSplit { mnc_len: usize, msin_len: usize },
    #[error("nibble 0x{nibble:X} at position {pos} is not a decimal digit")]
    BadNibble { nibble: u8, pos: usize },
    #[error("non-filler nibble 0x{nibble:X} at position {pos} after filler start")]
    TrailingGarbage { nibble: u8, pos: usize },
    #[error("decoded {got} digits, expected 9 or 10")]
    BadDigitCount { got: usize },
}

fn check_digits(field: &'static str, s: &str) -> Result<(), IdentityError> {
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(IdentityError::NonDigit { field });
    }
    Ok(())
}

/// A 15-digit International Mobile Subscriber Identity.
///
/// Stored as the concatenated digit string plus the MNC split point.
/// Two values are equal only if both the digits and the split agree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Imsi {
    digits: [u8; 15],
    mnc_len: u8,
}

impl Imsi {
    /// Builds an IMSI from its three components.
    pub fn new(mcc: &str, mnc: &str, msin: &str) -> Result<Self, IdentityError> {
        if mcc.len() != 3 {
            return Err(IdentityError::BadLength {
                field: "mcc",
                expected: "3",
                got: mcc.len(),
            });
        }
        if mnc.len() != 2 && mnc.len() != 3 {
            return Err(IdentityError::BadLength {
                field: "mnc",
                expected: "2 or 3",
                got: mnc.len(),
            });
        }
        if msin.len() != 9 && msin.len() != 10 {
            return Err(IdentityError::BadLength {
                field: "msin",
                expected: "9 or 10",
                got: msin.len(),
            });
        }
        if mnc.len() + msin.len() != 12 {
            return Err(IdentityError::BadSplit {
                mnc_len: mnc.len(),
                msin_len: msin.len(),
            });
        }
        check_digits("mcc", mcc)?;
        check_digits("mnc", mnc)?;
        check_digits("msin", msin)?;
        let mut digits = [0u8; 15];
        digits[..3].copy_from_slice(mcc.as_bytes());
        digits[3..3 + mnc.len()].copy_from_slice(mnc.as_bytes());
        digits[3 + mnc.len()..].copy_from_slice(msin.as_bytes());
        Ok(Self {
            digits,
            mnc_len: mnc.len() as u8,
        })
    }

    /// Parses a 15-digit string using the operator's known MNC length.
    pub fn parse(s: &str, mnc_len: usize) -> Result<Self, IdentityError> {
        if s.len() != 15 {
            return Err(IdentityError::BadLength {
                field: "imsi",
                expected: "15",
                got: s.len(),
            });
        }
        if mnc_len != 2 && mnc_len != 3 {
            return Err(IdentityError::BadLength {
                field: "mnc",
                expected: "2 or 3",
                got: mnc_len,
            });
        }
        Self::new(&s[..3], &s[3..3 + mnc_len], &s[3 + mnc_len..])
    }

    pub fn mcc(&self) -> &str {
        std::str::from_utf8(&self.digits[..3]).unwrap()
    }

    pub fn mnc(&self) -> &str {
        std::str::from_utf8(&self.digits[3..3 + self.mnc_len as usize]).unwrap()
    }

    pub fn msin(&self) -> &str {
        std::str::from_utf8(&self.digits[3 + self.mnc_len as usize..]).unwrap()
    }

    /// The full 15-digit form.
    pub fn digits(&self) -> &str {
        std::str::from_utf8(&self.digits).unwrap()
    }
}

impl fmt::Display for Imsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.digits())
    }
}

impl fmt::Debug for Imsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Imsi({}-{}-{})", self.mcc(), self.mnc(), self.msin())
    }
}

impl Serialize for Imsi {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.digits())
    }
}

/// Lifecycle status of a dynamically assigned IMSI.
///
/// An IMSI with status `Allocated` or `InTransit` maps to exactly one
/// subscriber account at any instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ImsiStatus {
    Free,
    InTransit,
    Allocated,
}

/// Serving-network-assigned temporary identity.
///
/// 32 bits, unique among currently attached UEs within the assigning
/// network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tmsi {
    pub value: u32,
    pub assigning_network: u16,
}

impl fmt::Display for Tmsi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08x}@{}", self.value, self.assigning_network)
    }
}

/// Packs a 9- or 10-digit MSIN into a 48-bit block.
///
/// One digit per nibble in transmission order, low nibble of each byte
/// first; the remaining nibbles (3 for 9 digits, 2 for 10) are filled
/// with 0xF.
pub fn encode_msin(msin: &str) -> Result<[u8; MSIN_BLOCK_LEN], IdentityError> {
    if msin.len() != 9 && msin.len() != 10 {
        return Err(IdentityError::BadLength {
            field: "msin",
            expected: "9 or 10",
            got: msin.len(),
        });
    }
    check_digits("msin", msin)?;
    let mut nibbles = [0xFu8; 2 * MSIN_BLOCK_LEN];
    for (i, b) in msin.bytes().enumerate() {
        nibbles[i] = b - b'0';
    }
    let mut block = [0u8; MSIN_BLOCK_LEN];
    for (i, byte) in block.iter_mut().enumerate() {
        *byte = nibbles[2 * i] | (nibbles[2 * i + 1] << 4);
    }
    Ok(block)
}

/// Inverse of [`encode_msin`].
///
/// The digit count (9 vs 10) is recovered by locating the first 0xF
/// filler nibble. Any malformed nibble pattern signals a corrupted
/// concealed MSIN.
pub fn decode_msin(block: &[u8; MSIN_BLOCK_LEN]) -> Result<String, IdentityError> {
    let mut digits = String::with_capacity(10);
    let mut filler_seen = false;
    for pos in 0..2 * MSIN_BLOCK_LEN {
        let byte = block[pos / 2];
        let nibble = if pos % 2 == 0 { byte & 0x0F } else { byte >> 4 };
        if filler_seen {
            if nibble != 0xF {
                return Err(IdentityError::TrailingGarbage { nibble, pos });
            }
        } else if nibble == 0xF {
            filler_seen = true;
        } else if nibble > 9 {
            return Err(IdentityError::BadNibble { nibble, pos });
        } else {
            digits.push((b'0' + nibble) as char);
        }
    }
    if digits.len() != 9 && digits.len() != 10 {
        return Err(IdentityError::BadDigitCount { got: digits.len() });
    }
    Ok(digits)
}
