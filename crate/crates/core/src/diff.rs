//! Differential-probability kernels.
//!
//! * [`xdp_add`]: exact XOR-differential probability of addition modulo
//!   `2^n` (Lipmaa–Moriai closed form), the kernel behind the pDDT.
//! * [`paper_round_propagate`]: the deterministic round model that generates
//!   the published 20-round trail. It drops the AND contribution and rotates
//!   right by two; real SIMON rotates left. The rule is kept as-is because it
//!   is the one that reproduces the trail.
//! * [`and_dp_exact`] and [`monte_carlo_dp`]: ground-truth tools that measure
//!   how far the deterministic model is from the real cipher.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{random_schedule, random_state, stream_rng};
use crate::simon::Simon;
use crate::word::{hw, DiffState, WordSize};

/// Largest word size accepted by the brute-force oracles (cost `2^(2n)`).
pub const BRUTE_FORCE_MAX_BITS: u32 = 10;

/// Right-rotation amount of the deterministic trail model.
pub const MODEL_ROTATION: u32 = 2;

/// A probability that is either zero or an exact power of two `2^-w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DyadicProb {
    Weight(u32),
    Impossible,
}

impl DyadicProb {
    pub const ONE: DyadicProb = DyadicProb::Weight(0);

    pub fn weight(self) -> Option<u32> {
        match self {
            DyadicProb::Weight(w) => Some(w),
            DyadicProb::Impossible => None,
        }
    }

    pub fn is_possible(self) -> bool {
        matches!(self, DyadicProb::Weight(_))
    }

    pub fn probability(self) -> f64 {
        match self {
            DyadicProb::Weight(w) => (-(w as f64)).exp2(),
            DyadicProb::Impossible => 0.0,
        }
    }

    /// Negative log2 of the probability, `None` for impossible.
    pub fn log2(self) -> Option<i64> {
        self.weight().map(|w| -(w as i64))
    }
}

impl PartialOrd for DyadicProb {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by probability: impossible is smallest, lower weight is larger.
impl Ord for DyadicProb {
    fn cmp(&self, other: &Self) -> Ordering {
        use DyadicProb::*;
        match (self, other) {
            (Impossible, Impossible) => Ordering::Equal,
            (Impossible, Weight(_)) => Ordering::Less,
            (Weight(_), Impossible) => Ordering::Greater,
            (Weight(a), Weight(b)) => b.cmp(a),
        }
    }
}

impl fmt::Display for DyadicProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicProb::Weight(w) => write!(f, "2^-{w}"),
            DyadicProb::Impossible => f.write_str("0"),
        }
    }
}

/// Bit `i` set iff `x_i = y_i = z_i`.
#[inline]
fn eq3(x: u32, y: u32, z: u32) -> u32 {
    !(x ^ y) & !(x ^ z)
}

/// Exact XOR-differential probability of `(x, y) -> x + y mod 2^n` for input
/// differences `a`, `b` and output difference `c`.
pub fn xdp_add(a: u32, b: u32, c: u32, ws: WordSize) -> DyadicProb {
    let m = ws.mask();
    let (a, b, c) = (a & m, b & m, c & m);
    let sh = |x: u32| (x << 1) & m;
    if eq3(sh(a), sh(b), sh(c)) & (a ^ b ^ c ^ sh(b)) & m != 0 {
        return DyadicProb::Impossible;
    }
    DyadicProb::Weight(hw(!eq3(a, b, c) & (m >> 1)))
}

/// Number of pairs `(x, y)` over all `2^(2n)` with
/// `((x^a) + (y^b)) ^ (x + y) = c (mod 2^n)`.
pub fn xdp_add_count(a: u32, b: u32, c: u32, ws: WordSize) -> Result<u64> {
    let n = ws.bits();
    if n > BRUTE_FORCE_MAX_BITS {
        return Err(Error::BruteForceTooLarge(n));
    }
    let m = ws.mask();
    let (a, b, c) = (a & m, b & m, c & m);
    let mut count = 0u64;
    for x in 0..=m {
        for y in 0..=m {
            let d = ((x ^ a).wrapping_add(y ^ b) ^ x.wrapping_add(y)) & m;
            count += u64::from(d == c);
        }
    }
    Ok(count)
}

/// Brute-force oracle for [`xdp_add`]; refuses `n > 10`.
pub fn xdp_add_bruteforce(a: u32, b: u32, c: u32, ws: WordSize) -> Result<DyadicProb> {
    let count = xdp_add_count(a, b, c, ws)?;
    dyadic_from_count(count, 2 * ws.bits())
}

/// Reduces `count / 2^bits` to a dyadic probability.
pub fn dyadic_from_count(count: u64, bits: u32) -> Result<DyadicProb> {
    if count == 0 {
        return Ok(DyadicProb::Impossible);
    }
    if !count.is_power_of_two() {
        return Err(Error::NotDyadic { count, bits });
    }
    Ok(DyadicProb::Weight(bits - count.trailing_zeros()))
}

/// DP of the `k`-bit low prefixes of `(a, b, c)`. `k = 0` is the empty
/// prefix with probability one; the value never increases as `k` grows.
pub fn prefix_dp(a: u32, b: u32, c: u32, k: u32) -> DyadicProb {
    if k == 0 {
        return DyadicProb::ONE;
    }
    match WordSize::new(k) {
        Ok(ws) => xdp_add(a, b, c, ws),
        Err(_) => xdp_add(a, b, c, WordSize::new(32).unwrap()),
    }
}

/// Deterministic round of the trail model:
/// `(ΔL, ΔR) -> (ΔR ^ (ΔL >>> 2), ΔL)`, returned with the weight of the
/// input state, `hw(ΔL ^ ΔR)`.
///
/// Trails report the weight of each produced state, i.e. the weight returned
/// by the following application.
pub fn paper_round_propagate(s: DiffState, ws: WordSize) -> (DiffState, u32) {
    let m = ws.mask();
    let s = DiffState::new(s.dl & m, s.dr & m);
    let next = DiffState::new(s.dr ^ ws.ror(s.dl, MODEL_ROTATION), s.dl);
    (next, s.xor_weight())
}

/// Exact probability that the AND term of the round function maps input
/// difference `alpha` to output difference `gamma`, over a uniform input.
///
/// Uses the closed form for `S^a(x) & S^b(x)` when `n` is even and
/// `gcd(n, a - b) = 1`; otherwise enumerates all inputs.
pub fn and_dp_exact(cipher: &Simon, alpha: u32, gamma: u32) -> DyadicProb {
    let ws = cipher.word_size();
    let n = ws.bits();
    let m = ws.mask();
    let (alpha, gamma) = (alpha & m, gamma & m);
    let rot = cipher.rotations();
    let (a, b) = (rot.and_a % n, rot.and_b % n);
    let diff = (a + n - b) % n;
    if !n.is_multiple_of(2) || gcd(n, diff) != 1 {
        return and_dp_enumerate(cipher, alpha, gamma);
    }
    if alpha == m {
        return if hw(gamma).is_multiple_of(2) {
            DyadicProb::Weight(n - 1)
        } else {
            DyadicProb::Impossible
        };
    }
    let sa = ws.rol(alpha, a);
    let sb = ws.rol(alpha, b);
    let varibits = sa | sb;
    let doublebits = sb & !sa & ws.rol(alpha, (2 * a + n - b) % n);
    if gamma & !varibits != 0 {
        return DyadicProb::Impossible;
    }
    if (gamma ^ ws.rol(gamma, diff)) & doublebits != 0 {
        return DyadicProb::Impossible;
    }
    DyadicProb::Weight(hw(varibits ^ doublebits))
}

fn and_dp_enumerate(cipher: &Simon, alpha: u32, gamma: u32) -> DyadicProb {
    let ws = cipher.word_size();
    assert!(ws.bits() <= 20, "AND enumeration limited to n <= 20");
    let count = (0..=ws.mask())
        .filter(|&x| cipher.and_term(x) ^ cipher.and_term(x ^ alpha) == gamma)
        .count() as u64;
    dyadic_from_count(count, ws.bits()).unwrap_or(DyadicProb::Impossible)
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact probability that one real SIMON round maps `s` to `target`.
///
/// The real round gives `ΔL' = ΔR ^ (ΔL <<< c) ^ Δand` and `ΔR' = ΔL`, so only
/// the AND term is probabilistic.
pub fn round_dp_exact(cipher: &Simon, s: DiffState, target: DiffState) -> DyadicProb {
    let ws = cipher.word_size();
    let m = ws.mask();
    let (s, target) = (
        DiffState::new(s.dl & m, s.dr & m),
        DiffState::new(target.dl & m, target.dr & m),
    );
    if target.dr != s.dl {
        return DyadicProb::Impossible;
    }
    let gamma = target.dl ^ s.dr ^ ws.rol(s.dl, cipher.rotations().xor);
    and_dp_exact(cipher, s.dl, gamma)
}

/// Exact probability that one real SIMON round maps `s` to the state the
/// deterministic model predicts.
pub fn model_round_exact(cipher: &Simon, s: DiffState) -> DyadicProb {
    let (pred, _) = paper_round_propagate(s, cipher.word_size());
    round_dp_exact(cipher, s, pred)
}

/// Empirical estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub std_error: f64,
}

impl McEstimate {
    fn new(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        McEstimate {
            hits,
            trials,
            estimate: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        }
    }

    /// `|estimate - p| / sqrt(p(1-p)/N)`, with the spread taken from the
    /// reference probability. Zero spread demands an exact match.
    pub fn z_score(&self, p: f64) -> f64 {
        let sigma = (p * (1.0 - p) / self.trials as f64).sqrt();
        let dev = (self.estimate - p).abs();
        if sigma == 0.0 {
            if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            dev / sigma
        }
    }
}

/// Fraction of random plaintext pairs with input difference `s0` whose
/// difference after `rounds` real rounds equals the deterministic model's
/// prediction. Each trial draws a fresh key (or none when `keyed` is false)
/// from its own PRNG stream.
pub fn monte_carlo_dp(
    cipher: &Simon,
    s0: DiffState,
    rounds: usize,
    trials: u64,
    seed: u64,
    keyed: bool,
) -> Result<McEstimate> {
    let ws = cipher.word_size();
    let mut predicted = s0;
    for _ in 0..rounds {
        predicted = paper_round_propagate(predicted, ws).0;
    }
    monte_carlo_transition(cipher, s0, predicted, rounds, trials, seed, keyed)
}

/// Fraction of random plaintext pairs with difference `s0` that reach
/// `target` after `rounds` real rounds.
pub fn monte_carlo_transition(
    cipher: &Simon,
    s0: DiffState,
    target: DiffState,
    rounds: usize,
    trials: u64,
    seed: u64,
    keyed: bool,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "monte carlo needs at least one trial".into(),
        ));
    }
    let mask = cipher.word_size().mask();
    let mut hits = 0u64;
    for t in 0..trials {
        let mut rng = stream_rng(seed, t);
        let keys = random_schedule(cipher, &mut rng, rounds, keyed)?;
        let p0 = random_state(&mut rng, mask);
        let p1 = p0.xor(s0);
        let mut last = s0;
        cipher.walk_pair(p0, p1, rounds, &keys, |d| last = d)?;
        hits += u64::from(last == target);
    }
    Ok(McEstimate::new(hits, trials))
}
