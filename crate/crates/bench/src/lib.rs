//! Fixed inputs shared by the benchmarks.

use simon32_core::{DiffTriple, WordSize};

/// `count` pseudo-random 16-bit triples from a fixed xorshift stream, so runs
/// compare like with like.
pub fn triples(count: usize) -> Vec<DiffTriple> {
    let mut x = 0x9e37_79b9_7f4a_7c15u64;
    (0..count)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let m = u64::from(WordSize::SIMON32.mask());
            DiffTriple::new(
                (x & m) as u32,
                (x >> 16 & m) as u32,
                (x >> 32 & m) as u32,
                0,
            )
        })
        .collect()
}

/// Low-weight differentials, the kind the HW experiment spends its time on.
pub fn msb_family() -> Vec<DiffTriple> {
    (0..16)
        .map(|i| DiffTriple::new(1 << i, 1 << i, 0, 0))
        .collect()
}
