//! Reference SIMON round function, SIMON32/64 key schedule and a keyed
//! pair iterator for measuring differences empirically.
//!
//! Not constant time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{CipherState, DiffState, WordSize};

/// Number of rounds of SIMON32/64.
pub const SIMON32_64_ROUNDS: usize = 32;

/// Key words of SIMON32/64.
pub const SIMON32_64_KEY_WORDS: usize = 4;

/// The z0 constant sequence used by the SIMON32/64 key schedule.
const Z0: &[u8; 62] = b"11111010001001010110000111001101111101000100101011000011100110";

/// Rotation constants of the SIMON round function
/// `f(x) = (x <<< and_a) & (x <<< and_b) ^ (x <<< xor)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rotations {
    pub and_a: u32,
    pub and_b: u32,
    pub xor: u32,
}

impl Default for Rotations {
    fn default() -> Self {
        Rotations {
            and_a: 1,
            and_b: 8,
            xor: 2,
        }
    }
}

/// A SIMON-like Feistel cipher over words of a fixed size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simon {
    ws: WordSize,
    rot: Rotations,
}

impl Default for Simon {
    fn default() -> Self {
        Simon::simon32()
    }
}

impl Simon {
    pub fn simon32() -> Self {
        Simon {
            ws: WordSize::SIMON32,
            rot: Rotations::default(),
        }
    }

    /// SIMON round structure at an arbitrary word size with the standard
    /// (1, 8, 2) rotations reduced modulo `n`.
    pub fn with_word_size(ws: WordSize) -> Self {
        Simon {
            ws,
            rot: Rotations::default(),
        }
    }

    pub fn new(ws: WordSize, rot: Rotations) -> Self {
        Simon { ws, rot }
    }

    #[inline]
    pub fn word_size(&self) -> WordSize {
        self.ws
    }

    #[inline]
    pub fn rotations(&self) -> Rotations {
        self.rot
    }

    /// The nonlinear AND term `(x <<< a) & (x <<< b)`.
    #[inline]
    pub fn and_term(&self, x: u32) -> u32 {
        self.ws.rol(x, self.rot.and_a) & self.ws.rol(x, self.rot.and_b)
    }

    #[inline]
    pub fn f(&self, x: u32) -> u32 {
        self.and_term(x) ^ self.ws.rol(x, self.rot.xor)
    }

    /// One encryption round: `(L, R) -> (R ^ f(L) ^ k, L)`.
    #[inline]
    pub fn round(&self, s: CipherState, k: u32) -> CipherState {
        let m = self.ws.mask();
        CipherState::new((s.right ^ self.f(s.left) ^ k) & m, s.left & m)
    }

    #[inline]
    pub fn inverse_round(&self, s: CipherState, k: u32) -> CipherState {
        let m = self.ws.mask();
        CipherState::new(s.right & m, (s.left ^ self.f(s.right) ^ k) & m)
    }

    pub fn encrypt(&self, pt: CipherState, keys: &KeySchedule) -> CipherState {
        keys.round_keys.iter().fold(pt, |s, &k| self.round(s, k))
    }

    pub fn decrypt(&self, ct: CipherState, keys: &KeySchedule) -> CipherState {
        keys.round_keys
            .iter()
            .rev()
            .fold(ct, |s, &k| self.inverse_round(s, k))
    }

    /// Encrypts both members of a pair for `rounds` rounds and returns the
    /// difference after each round; element `r` is the difference after
    /// `r + 1` rounds.
    pub fn iterate_pair(
        &self,
        p0: CipherState,
        p1: CipherState,
        rounds: usize,
        keys: &KeySchedule,
    ) -> Result<Vec<DiffState>> {
        let mut out = Vec::with_capacity(rounds);
        self.walk_pair(p0, p1, rounds, keys, |d| out.push(d))?;
        Ok(out)
    }

    /// Allocation-free form of [`Simon::iterate_pair`].
    pub(crate) fn walk_pair(
        &self,
        mut p0: CipherState,
        mut p1: CipherState,
        rounds: usize,
        keys: &KeySchedule,
        mut visit: impl FnMut(DiffState),
    ) -> Result<()> {
        if rounds > keys.len() {
            return Err(Error::RoundsExceedSchedule {
                requested: rounds,
                available: keys.len(),
            });
        }
        for &k in &keys.round_keys[..rounds] {
            p0 = self.round(p0, k);
            p1 = self.round(p1, k);
            visit(p0.diff(p1));
        }
        Ok(())
    }
}

/// Expanded round keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySchedule {
    round_keys: Vec<u32>,
}

impl KeySchedule {
    /// Standard SIMON schedule for four key words (the SIMON32/64 shape),
    /// generalised to the cipher's word size.
    ///
    /// `key` is given in schedule order: `key[0]` is the first round key.
    /// The published test vectors list the words the other way round.
    pub fn expand(cipher: &Simon, key: &[u32], rounds: usize) -> Result<Self> {
        if key.len() != SIMON32_64_KEY_WORDS {
            return Err(Error::KeyLength {
                expected: SIMON32_64_KEY_WORDS,
                got: key.len(),
            });
        }
        let ws = cipher.word_size();
        let m = ws.mask();
        let mut k: Vec<u32> = key.iter().map(|w| w & m).collect();
        k.reserve(rounds.saturating_sub(k.len()));
        for i in SIMON32_64_KEY_WORDS..rounds {
            let mut tmp = ws.ror(k[i - 1], 3);
            tmp ^= k[i - 3];
            tmp ^= ws.ror(tmp, 1);
            let z = u32::from(Z0[(i - SIMON32_64_KEY_WORDS) % Z0.len()] - b'0');
            k.push((!k[i - 4] ^ tmp ^ z ^ 3) & m);
        }
        k.truncate(rounds);
        Ok(KeySchedule { round_keys: k })
    }

    /// SIMON32/64 round keys from a key in schedule order.
    pub fn simon32_64(key: [u32; 4]) -> Self {
        // Four words always satisfy the length contract.
        Self::expand(&Simon::simon32(), &key, SIMON32_64_ROUNDS).expect("four key words")
    }

    /// SIMON32/64 round keys from a key written as in the published test
    /// vectors, most significant word first.
    pub fn simon32_64_msw_first(key: [u32; 4]) -> Self {
        let [k3, k2, k1, k0] = key;
        Self::simon32_64([k0, k1, k2, k3])
    }

    /// All-zero round keys: unkeyed rounds.
    pub fn zero(rounds: usize) -> Self {
        KeySchedule {
            round_keys: vec![0; rounds],
        }
    }

    pub fn from_round_keys(round_keys: Vec<u32>) -> Self {
        KeySchedule { round_keys }
    }

    pub fn round_keys(&self) -> &[u32] {
        &self.round_keys
    }

    pub fn len(&self) -> usize {
        self.round_keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.round_keys.is_empty()
    }
}
