//! Seeded PRNG streams for trials and experiment batches.
//!
//! Every trial (or every differential in a batch) gets its own ChaCha stream
//! keyed by the run seed, so results do not depend on how work is scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::simon::{KeySchedule, Simon, SIMON32_64_KEY_WORDS};
use crate::word::CipherState;

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn random_word(rng: &mut impl Rng, mask: u32) -> u32 {
    rng.random::<u32>() & mask
}

pub(crate) fn random_state(rng: &mut impl Rng, mask: u32) -> CipherState {
    CipherState::new(random_word(rng, mask), random_word(rng, mask))
}

/// A fresh random key expanded to `rounds` round keys, or all-zero keys
/// when `keyed` is false.
pub(crate) fn random_schedule(
    cipher: &Simon,
    rng: &mut impl Rng,
    rounds: usize,
    keyed: bool,
) -> Result<KeySchedule> {
    if !keyed {
        return Ok(KeySchedule::zero(rounds));
    }
    let mask = cipher.word_size().mask();
    let mut key = [0u32; SIMON32_64_KEY_WORDS];
    for k in &mut key {
        *k = random_word(rng, mask);
    }
    KeySchedule::expand(cipher, &key, rounds)
}
