//! Threshold-pruned partial difference distribution tables for modular
//! addition.
//!
//! Construction walks bit positions from the LSB, extending the prefixes
//! `(a_k, b_k, c_k)` one bit at a time. The prefix probability never increases
//! with `k`, so a branch is abandoned as soon as its prefix falls below the
//! threshold. All probabilities are dyadic, so the threshold reduces to a
//! maximum weight and every comparison is on integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diff::{xdp_add, DyadicProb};
use crate::error::{Error, FormatError, Result};
use crate::sampling::stream_rng;
use crate::word::{hw, WordSize};

/// Default pDDT probability threshold.
pub const DEFAULT_PDDT_THRESHOLD: f64 = 0.1;

/// Default significance threshold used to split a table.
pub const DEFAULT_SIG_THRESHOLD: f64 = 0.5;

/// File magic, including the format version digit.
pub const MAGIC: &[u8; 5] = b"PDDT1";

/// `w_max` byte meaning "no weight is admissible" (threshold above one).
pub const NO_WEIGHT: u8 = 0xff;

const HEADER_LEN: u64 = 5 + 1 + 1 + 8;
const ENTRY_LEN: u64 = 7;

/// An `(a, b -> c)` addition differential with probability `2^-weight`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiffTriple {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub weight: u32,
}

impl DiffTriple {
    pub const fn new(a: u32, b: u32, c: u32, weight: u32) -> Self {
        DiffTriple { a, b, c, weight }
    }

    /// Builds a triple with its exact probability; `None` if impossible.
    pub fn with_exact_weight(a: u32, b: u32, c: u32, ws: WordSize) -> Option<Self> {
        xdp_add(a, b, c, ws)
            .weight()
            .map(|w| DiffTriple::new(a, b, c, w))
    }

    pub fn prob(&self) -> DyadicProb {
        DyadicProb::Weight(self.weight)
    }

    pub fn probability(&self) -> f64 {
        self.prob().probability()
    }

    pub fn log2p(&self) -> i64 {
        -(self.weight as i64)
    }

    #[inline]
    pub fn key(&self) -> (u32, u32, u32) {
        (self.a, self.b, self.c)
    }

    /// Canonical lexicographic `(a, b, c)` order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }

    /// Position in the order the LSB-first recursion emits triples: the bit
    /// triples `(a_i, b_i, c_i)` read as base-8 digits, bit 0 most significant.
    pub fn generation_key(&self, ws: WordSize) -> u64 {
        (0..ws.bits()).fold(0u64, |acc, i| {
            let digit = (self.a >> i & 1) << 2 | (self.b >> i & 1) << 1 | (self.c >> i & 1);
            acc << 3 | u64::from(digit)
        })
    }

    /// Order in which the recursive construction discovers triples.
    pub fn generation_cmp(&self, other: &Self, ws: WordSize) -> Ordering {
        self.generation_key(ws).cmp(&other.generation_key(ws))
    }
}

/// How a probability threshold is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// `p >= p_thr`
    #[default]
    AtLeast,
    /// `p > p_thr`
    Greater,
}

impl std::str::FromStr for ThresholdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "at-least" | "ge" | ">=" => Ok(ThresholdMode::AtLeast),
            "greater" | "gt" | ">" => Ok(ThresholdMode::Greater),
            _ => Err(Error::InvalidArgument(format!(
                "unknown threshold mode {s:?}"
            ))),
        }
    }
}

impl std::fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdMode::AtLeast => "at-least",
            ThresholdMode::Greater => "greater",
        })
    }
}

/// Largest weight `w` with `2^-w` admitted by `p_thr`, or `None` when no
/// dyadic probability qualifies. Powers of two are exact in `f64`, so the
/// comparison has no rounding boundary.
pub fn max_weight_for(p_thr: f64, mode: ThresholdMode) -> Result<Option<u32>> {
    if !p_thr.is_finite() || p_thr <= 0.0 {
        return Err(Error::InvalidThreshold(p_thr));
    }
    let admits = |w: u32| {
        let p = (-(w as f64)).exp2();
        match mode {
            ThresholdMode::AtLeast => p >= p_thr,
            ThresholdMode::Greater => p > p_thr,
        }
    };
    if !admits(0) {
        return Ok(None);
    }
    let mut w = 0;
    while w < 1074 && admits(w + 1) {
        w += 1;
    }
    Ok(Some(w))
}

/// A sorted, duplicate-free set of addition differentials above a threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialDdt {
    word_size: WordSize,
    max_weight: Option<u32>,
    entries: Vec<DiffTriple>,
}

impl PartialDdt {
    /// Wraps entries, sorting them canonically and dropping duplicates.
    pub fn from_entries(
        word_size: WordSize,
        max_weight: Option<u32>,
        mut entries: Vec<DiffTriple>,
    ) -> Self {
        entries.sort_unstable_by(DiffTriple::canonical_cmp);
        entries.dedup_by_key(|t| t.key());
        PartialDdt {
            word_size,
            max_weight,
            entries,
        }
    }

    pub fn word_size(&self) -> WordSize {
        self.word_size
    }

    /// Largest admitted weight, `None` for a table built above probability one.
    pub fn max_weight(&self) -> Option<u32> {
        self.max_weight
    }

    /// Effective probability threshold `2^-w_max` (zero entries admitted
    /// above one).
    pub fn threshold(&self) -> f64 {
        self.max_weight
            .map_or(f64::INFINITY, |w| (-(w as f64)).exp2())
    }

    pub fn entries(&self) -> &[DiffTriple] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<DiffTriple> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy)]
struct Prefix {
    a: u32,
    b: u32,
    c: u32,
    /// Weight of the current prefix (bits below the top one that differ).
    weight: u32,
    /// Whether the top bit of the prefix has `a_i = b_i = c_i`.
    top_equal: bool,
    /// `b` at the top bit, meaningful only when `top_equal`.
    top_value: u32,
}

impl Prefix {
    const EMPTY: Prefix = Prefix {
        a: 0,
        b: 0,
        c: 0,
        weight: 0,
        top_equal: true,
        top_value: 0,
    };

    /// Appends bit `k`; `None` if the extended prefix is impossible or too
    /// heavy.
    #[inline]
    fn extend(self, k: u32, bits: u32, max_weight: u32) -> Option<Prefix> {
        let (x, y, z) = (bits >> 2 & 1, bits >> 1 & 1, bits & 1);
        if self.top_equal && (x ^ y ^ z) != self.top_value {
            return None;
        }
        let weight = if k == 0 {
            0
        } else {
            self.weight + u32::from(!self.top_equal)
        };
        if weight > max_weight {
            return None;
        }
        let equal = x == y && y == z;
        Some(Prefix {
            a: self.a | x << k,
            b: self.b | y << k,
            c: self.c | z << k,
            weight,
            top_equal: equal,
            top_value: y,
        })
    }
}

fn grow(n: u32, max_weight: u32, k: u32, prefix: Prefix, out: &mut Vec<DiffTriple>) {
    if k == n {
        out.push(DiffTriple::new(prefix.a, prefix.b, prefix.c, prefix.weight));
        return;
    }
    for bits in 0..8 {
        if let Some(next) = prefix.extend(k, bits, max_weight) {
            grow(n, max_weight, k + 1, next, out);
        }
    }
}

/// Builds `{(a, b, c) : xdp_add(a, b, c) >= p_thr}` (or `>` in
/// [`ThresholdMode::Greater`]) by pruned LSB-first recursion.
///
/// The eight first-level branches run on the current rayon pool; the result
/// is sorted canonically so it does not depend on the worker count.
pub fn compute_pddt(ws: WordSize, p_thr: f64, mode: ThresholdMode) -> Result<PartialDdt> {
    let max_weight = max_weight_for(p_thr, mode)?;
    let Some(w_max) = max_weight else {
        return Ok(PartialDdt::from_entries(ws, None, Vec::new()));
    };
    let n = ws.bits();
    let entries: Vec<DiffTriple> = (0..8u32)
        .into_par_iter()
        .map(|bits| {
            let mut out = Vec::new();
            if let Some(p) = Prefix::EMPTY.extend(0, bits, w_max) {
                grow(n, w_max, 1, p, &mut out);
            }
            out
        })
        .flatten()
        .collect();
    Ok(PartialDdt::from_entries(ws, max_weight, entries))
}

/// A table split at the significance threshold.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SortedDiffs {
    pub significant: Vec<DiffTriple>,
    pub non_significant: Vec<DiffTriple>,
}

/// Stable partition into `p >= sig_thr` and the rest.
pub fn sort_differentials(table: &PartialDdt, sig_thr: f64) -> Result<SortedDiffs> {
    let w_sig = max_weight_for(sig_thr, ThresholdMode::AtLeast)?;
    let (significant, non_significant) = table
        .entries()
        .iter()
        .partition(|t| w_sig.is_some_and(|w| t.weight <= w));
    Ok(SortedDiffs {
        significant,
        non_significant,
    })
}

/// Quota for a stratum of `n_h` members at `percent`: `max(1, ceil(x/100 * N_h))`.
pub fn stratum_quota(n_h: usize, percent: f64) -> usize {
    let raw = (percent * n_h as f64 / 100.0).ceil() as usize;
    raw.clamp(1, n_h.max(1))
}

/// Default stratum: Hamming weight of the output difference.
pub fn output_weight_stratum(t: &DiffTriple) -> u32 {
    hw(t.c)
}

/// Stratified quota sample: from every non-empty stratum, draws
/// `max(1, ceil(percent/100 * N_h))` members uniformly without replacement.
///
/// Strata are visited in ascending key order and draw from their own PRNG
/// streams; the sample is returned in canonical order.
pub fn quota_sample<F>(
    population: &[DiffTriple],
    percent: f64,
    strata_of: F,
    seed: u64,
) -> Result<Vec<DiffTriple>>
where
    F: Fn(&DiffTriple) -> u32,
{
    if !(percent > 0.0 && percent <= 100.0) {
        return Err(Error::InvalidArgument(format!(
            "sample percent {percent} must lie in (0, 100]"
        )));
    }
    let mut strata: BTreeMap<u32, Vec<&DiffTriple>> = BTreeMap::new();
    for t in population {
        strata.entry(strata_of(t)).or_default().push(t);
    }
    let mut sample = Vec::new();
    for (&h, members) in &strata {
        let quota = stratum_quota(members.len(), percent);
        let mut rng = stream_rng(seed, u64::from(h));
        let mut picks = index::sample(&mut rng, members.len(), quota).into_vec();
        picks.sort_unstable();
        sample.extend(picks.into_iter().map(|i| *members[i]));
    }
    sample.sort_unstable_by(DiffTriple::canonical_cmp);
    Ok(sample)
}

/// Writes the binary table format: `"PDDT1"`, word size, `w_max`, LE `u64`
/// count, then `a, b, c` as LE `u16` and a weight byte per entry.
pub fn write_pddt<W: Write>(table: &PartialDdt, mut w: W) -> Result<()> {
    let n = table.word_size().bits();
    if n > 16 {
        return Err(FormatError::WordSize(n as u8).into());
    }
    w.write_all(MAGIC)?;
    w.write_all(&[n as u8, table.max_weight().map_or(NO_WEIGHT, |x| x as u8)])?;
    w.write_all(&(table.len() as u64).to_le_bytes())?;
    for t in table.entries() {
        w.write_all(&(t.a as u16).to_le_bytes())?;
        w.write_all(&(t.b as u16).to_le_bytes())?;
        w.write_all(&(t.c as u16).to_le_bytes())?;
        w.write_all(&[t.weight as u8])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads and validates a table written by [`write_pddt`].
pub fn read_pddt<R: Read>(mut r: R) -> Result<PartialDdt> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode(&bytes).map_err(Error::from)
}

fn decode(bytes: &[u8]) -> std::result::Result<PartialDdt, FormatError> {
    let actual = bytes.len() as u64;
    if bytes.len() < 4 || bytes[..4] != MAGIC[..4] {
        return Err(FormatError::BadMagic);
    }
    if actual < HEADER_LEN {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN,
            actual,
        });
    }
    if bytes[4] != MAGIC[4] {
        return Err(FormatError::UnsupportedVersion(bytes[4]));
    }
    let n = bytes[5];
    let ws = match WordSize::new(u32::from(n)) {
        Ok(ws) if n <= 16 => ws,
        _ => return Err(FormatError::WordSize(n)),
    };
    let max_weight = match bytes[6] {
        NO_WEIGHT => None,
        w => Some(u32::from(w)),
    };
    let count = u64::from_le_bytes(bytes[7..15].try_into().expect("8 bytes"));
    let expected = count
        .checked_mul(ENTRY_LEN)
        .and_then(|x| x.checked_add(HEADER_LEN))
        .unwrap_or(u64::MAX);
    if actual < expected {
        return Err(FormatError::Truncated { expected, actual });
    }
    if actual > expected {
        return Err(FormatError::TrailingData(actual - expected));
    }
    let mask = ws.mask();
    let weight_cap = max_weight.map_or(0, |w| w.min(ws.bits().saturating_sub(1)));
    let mut entries = Vec::with_capacity(count as usize);
    let mut prev: Option<(u32, u32, u32)> = None;
    for (i, chunk) in bytes[HEADER_LEN as usize..]
        .chunks_exact(ENTRY_LEN as usize)
        .enumerate()
    {
        let index = i as u64;
        let word = |o: usize| u32::from(u16::from_le_bytes([chunk[o], chunk[o + 1]]));
        let t = DiffTriple::new(word(0), word(2), word(4), u32::from(chunk[6]));
        if (t.a | t.b | t.c) & !mask != 0 {
            return Err(FormatError::ValueOutOfRange { index });
        }
        if max_weight.is_none() || t.weight > weight_cap {
            return Err(FormatError::InvalidWeight {
                index,
                weight: chunk[6],
            });
        }
        if prev.is_some_and(|p| p >= t.key()) {
            return Err(FormatError::Unsorted { index });
        }
        prev = Some(t.key());
        entries.push(t);
    }
    Ok(PartialDdt {
        word_size: ws,
        max_weight,
        entries,
    })
}

pub fn save_pddt(table: &PartialDdt, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_pddt(table, BufWriter::new(file))
}

pub fn load_pddt(path: impl AsRef<Path>) -> Result<PartialDdt> {
    let file = File::open(path)?;
    read_pddt(BufReader::new(file))
}

/// CSV export: header `a,b,c,log2p`, hexadecimal differences.
pub fn write_pddt_csv<W: Write>(entries: &[DiffTriple], mut w: W) -> io::Result<()> {
    writeln!(w, "a,b,c,log2p")?;
    for t in entries {
        writeln!(w, "{:#06x},{:#06x},{:#06x},{}", t.a, t.b, t.c, t.log2p())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::xdp_add_bruteforce;

    fn ws(n: u32) -> WordSize {
        WordSize::new(n).unwrap()
    }

    #[test]
    fn threshold_to_weight() {
        assert_eq!(
            max_weight_for(0.1, ThresholdMode::AtLeast).unwrap(),
            Some(3)
        );
        assert_eq!(
            max_weight_for(0.1, ThresholdMode::Greater).unwrap(),
            Some(3)
        );
        assert_eq!(
            max_weight_for(0.5, ThresholdMode::AtLeast).unwrap(),
            Some(1)
        );
        assert_eq!(
            max_weight_for(0.5, ThresholdMode::Greater).unwrap(),
            Some(0)
        );
        assert_eq!(
            max_weight_for(1.0, ThresholdMode::AtLeast).unwrap(),
            Some(0)
        );
        assert_eq!(max_weight_for(1.0, ThresholdMode::Greater).unwrap(), None);
        assert_eq!(max_weight_for(2.0, ThresholdMode::AtLeast).unwrap(), None);
        assert!(max_weight_for(0.0, ThresholdMode::AtLeast).is_err());
        assert!(max_weight_for(f64::NAN, ThresholdMode::AtLeast).is_err());
    }

    #[test]
    fn above_one_is_empty() {
        let t = compute_pddt(ws(8), 2.0, ThresholdMode::AtLeast).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.max_weight(), None);
    }

    #[test]
    fn matches_brute_force_n4() {
        let w = ws(4);
        let t = compute_pddt(w, 0.1, ThresholdMode::AtLeast).unwrap();
        let mut expected = Vec::new();
        for a in 0..16 {
            for b in 0..16 {
                for c in 0..16 {
                    if let DyadicProb::Weight(x) = xdp_add_bruteforce(a, b, c, w).unwrap() {
                        if x <= 3 {
                            expected.push(DiffTriple::new(a, b, c, x));
                        }
                    }
                }
            }
        }
        assert_eq!(t.entries(), &expected[..]);
    }

    #[test]
    fn sort_boundaries() {
        let table = PartialDdt::from_entries(
            ws(16),
            Some(3),
            vec![
                DiffTriple::new(0, 0, 0, 0),
                DiffTriple::new(1, 1, 2, 1),
                DiffTriple::new(1, 3, 2, 2),
            ],
        );
        let s = sort_differentials(&table, 0.5).unwrap();
        assert_eq!(s.significant.len(), 2);
        assert_eq!(s.non_significant, vec![DiffTriple::new(1, 3, 2, 2)]);
    }

    #[test]
    fn quota_arithmetic() {
        assert_eq!(stratum_quota(7, 10.0), 1);
        assert_eq!(stratum_quota(100, 10.0), 10);
        assert_eq!(stratum_quota(101, 10.0), 11);
        assert_eq!(stratum_quota(3, 100.0), 3);
    }

    #[test]
    fn quota_sample_per_stratum() {
        let pop: Vec<DiffTriple> = (0..107u32).map(|i| DiffTriple::new(i, i, 0, 1)).collect();
        // 100 in stratum 0, 7 in stratum 1.
        let sample = quota_sample(&pop, 10.0, |t| u32::from(t.a >= 100), 9).unwrap();
        assert_eq!(sample.iter().filter(|t| t.a < 100).count(), 10);
        assert_eq!(sample.iter().filter(|t| t.a >= 100).count(), 1);
        assert!(quota_sample(&[], 10.0, output_weight_stratum, 1)
            .unwrap()
            .is_empty());
        assert!(quota_sample(&pop, 0.0, output_weight_stratum, 1).is_err());
    }

    #[test]
    fn generation_order_puts_high_bits_first_on_ties() {
        let w = ws(16);
        let hi = DiffTriple::new(0x8000, 0x8000, 0, 0);
        let lo = DiffTriple::new(0x1, 0x1, 0, 1);
        assert_eq!(hi.generation_cmp(&lo, w), Ordering::Less);
        assert_eq!(hi.canonical_cmp(&lo), Ordering::Greater);
    }

    #[test]
    fn corrupted_files_are_rejected() {
        let table = compute_pddt(ws(4), 0.5, ThresholdMode::AtLeast).unwrap();
        let mut buf = Vec::new();
        write_pddt(&table, &mut buf).unwrap();

        let mut bad = buf.clone();
        bad[0] = b'X';
        assert_eq!(decode(&bad).unwrap_err(), FormatError::BadMagic);

        let mut bad = buf.clone();
        bad[4] = b'2';
        assert_eq!(
            decode(&bad).unwrap_err(),
            FormatError::UnsupportedVersion(b'2')
        );

        let bad = &buf[..buf.len() - 3];
        assert!(matches!(
            decode(bad).unwrap_err(),
            FormatError::Truncated { .. }
        ));

        let mut bad = buf.clone();
        bad.push(0);
        assert_eq!(decode(&bad).unwrap_err(), FormatError::TrailingData(1));

        // Swap the first two entries.
        let mut bad = buf.clone();
        let h = HEADER_LEN as usize;
        let e = ENTRY_LEN as usize;
        let first: Vec<u8> = bad[h..h + e].to_vec();
        let second: Vec<u8> = bad[h + e..h + 2 * e].to_vec();
        bad[h..h + e].copy_from_slice(&second);
        bad[h + e..h + 2 * e].copy_from_slice(&first);
        assert_eq!(
            decode(&bad).unwrap_err(),
            FormatError::Unsorted { index: 1 }
        );
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        write_pddt_csv(
            &[
                DiffTriple::new(0x8000, 0x8000, 0, 0),
                DiffTriple::new(1, 1, 2, 1),
            ],
            &mut out,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "a,b,c,log2p\n0x8000,0x8000,0x0000,0\n0x0001,0x0001,0x0002,-1\n"
        );
    }
}
