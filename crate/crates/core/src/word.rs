//! Word-size arithmetic and the two state pairs shared by every module.
//!
//! Words are carried as `u32` and masked to the configured width after each
//! operation. SIMON32 uses 16-bit words; smaller widths exist so exhaustive
//! oracles stay cheap.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Width of a cipher word in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct WordSize(u32);

impl WordSize {
    pub const SIMON32: WordSize = WordSize(16);

    pub fn new(bits: u32) -> Result<Self> {
        if (1..=32).contains(&bits) {
            Ok(WordSize(bits))
        } else {
            Err(Error::WordSize(bits))
        }
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn mask(self) -> u32 {
        if self.0 == 32 {
            u32::MAX
        } else {
            (1u32 << self.0) - 1
        }
    }

    /// Number of distinct words, `2^n`.
    #[inline]
    pub fn cardinality(self) -> u64 {
        1u64 << self.0
    }

    /// Checked left rotation. `r` must satisfy `0 <= r < n`.
    pub fn rotl(self, x: u32, r: u32) -> Result<u32> {
        if r >= self.0 {
            return Err(Error::RotationOutOfRange {
                amount: r,
                bits: self.0,
            });
        }
        Ok(self.rol(x, r))
    }

    /// Checked right rotation, `rotl(x, n - r)`.
    pub fn rotr(self, x: u32, r: u32) -> Result<u32> {
        if r >= self.0 {
            return Err(Error::RotationOutOfRange {
                amount: r,
                bits: self.0,
            });
        }
        Ok(self.ror(x, r))
    }

    /// Left rotation with the amount reduced modulo `n`.
    #[inline]
    pub(crate) fn rol(self, x: u32, r: u32) -> u32 {
        let n = self.0;
        let r = r % n;
        let x = x & self.mask();
        if r == 0 {
            x
        } else {
            ((x << r) | (x >> (n - r))) & self.mask()
        }
    }

    #[inline]
    pub(crate) fn ror(self, x: u32, r: u32) -> u32 {
        let r = r % self.0;
        self.rol(x, self.0 - r)
    }
}

impl Default for WordSize {
    fn default() -> Self {
        WordSize::SIMON32
    }
}

impl TryFrom<u32> for WordSize {
    type Error = Error;

    fn try_from(bits: u32) -> Result<Self> {
        WordSize::new(bits)
    }
}

impl From<WordSize> for u32 {
    fn from(ws: WordSize) -> u32 {
        ws.0
    }
}

impl fmt::Display for WordSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
pub fn hw(x: u32) -> u32 {
    x.count_ones()
}

/// `(left, right)` halves of a cipher block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CipherState {
    pub left: u32,
    pub right: u32,
}

impl CipherState {
    pub const fn new(left: u32, right: u32) -> Self {
        CipherState { left, right }
    }

    pub fn xor(self, d: DiffState) -> Self {
        CipherState::new(self.left ^ d.dl, self.right ^ d.dr)
    }

    pub fn diff(self, other: CipherState) -> DiffState {
        DiffState::new(self.left ^ other.left, self.right ^ other.right)
    }
}

/// A round-state difference `(ΔL, ΔR)`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct DiffState {
    pub dl: u32,
    pub dr: u32,
}

impl DiffState {
    pub const ZERO: DiffState = DiffState { dl: 0, dr: 0 };

    pub const fn new(dl: u32, dr: u32) -> Self {
        DiffState { dl, dr }
    }

    pub fn is_zero(self) -> bool {
        self.dl == 0 && self.dr == 0
    }

    /// `hw(ΔL XOR ΔR)`, the per-round weight used throughout the workbench.
    #[inline]
    pub fn xor_weight(self) -> u32 {
        hw(self.dl ^ self.dr)
    }
}

impl fmt::Display for DiffState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:#06x}, {:#06x})", self.dl, self.dr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rotl_wraps_single_bit() {
        let ws = WordSize::SIMON32;
        assert_eq!(ws.rotl(0x8000, 1).unwrap(), 0x0001);
        assert_eq!(ws.rotl(0x1234, 0).unwrap(), 0x1234);
    }

    #[test]
    fn rotl_14_is_rotr_2() {
        // 0xa000 = 1010 0000 0000 0000; rotating right by two moves bits 15,13
        // to 13,11: 0010 1000 0000 0000.
        let ws = WordSize::SIMON32;
        assert_eq!(ws.rotl(0xa000, 14).unwrap(), 0x2800);
        assert_eq!(ws.rotr(0xa000, 2).unwrap(), 0x2800);
    }

    #[test]
    fn rotation_out_of_range() {
        let ws = WordSize::SIMON32;
        assert!(matches!(
            ws.rotl(1, 16),
            Err(Error::RotationOutOfRange {
                amount: 16,
                bits: 16
            })
        ));
        assert!(ws.rotr(1, 17).is_err());
    }

    #[test]
    fn word_size_bounds() {
        assert!(WordSize::new(0).is_err());
        assert!(WordSize::new(33).is_err());
        assert_eq!(WordSize::new(32).unwrap().mask(), u32::MAX);
        assert_eq!(WordSize::new(4).unwrap().mask(), 0xf);
    }

    proptest! {
        #[test]
        fn rotations_compose(x in 0u32..0x1_0000, a in 0u32..16, b in 0u32..16) {
            let ws = WordSize::SIMON32;
            let lhs = ws.rotl(ws.rotl(x, a).unwrap(), b).unwrap();
            prop_assert_eq!(lhs, ws.rotl(x, (a + b) % 16).unwrap());
            prop_assert!(lhs <= ws.mask());
        }

        #[test]
        fn rotr_inverts_rotl(x in any::<u32>(), r in 0u32..8) {
            let ws = WordSize::new(8).unwrap();
            let y = ws.rotl(x, r).unwrap();
            prop_assert_eq!(ws.rotr(y, r).unwrap(), x & 0xff);
        }
    }
}
