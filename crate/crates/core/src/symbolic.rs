//! Ordinal-pattern symbolization of real-valued sequences.
//!
//! A window of `k` values spaced `delta` apart and ending at index `t`
//! (oldest first: indices `t-(k-1)*delta, ..., t-delta, t`) is mapped to the
//! permutation of its positions `1..=k` sorted by ascending value. Ties are
//! broken toward the smaller original index, so every window has exactly one
//! pattern and the map is total on finite inputs. Patterns are interchangeable
//! with their lexicographic rank in `[0, k!)`; `encode`/`decode` is that
//! bijection.

use crate::error::{Error, Result};

/// Largest pattern length whose rank fits comfortably in `u32` (12! < 2^32).
pub const MAX_PATTERN_LEN: usize = 12;

const FACTORIAL: [u32; 13] = [
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800, 479001600,
];

/// `k!` as a `usize`. Panics if `k > MAX_PATTERN_LEN`.
pub fn factorial(k: usize) -> usize {
    assert!(k <= MAX_PATTERN_LEN, "pattern length {k} unsupported");
    FACTORIAL[k] as usize
}

/// One ordinal pattern together with its rank code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrdinalSymbol {
    pattern: Vec<u8>,
    code: u32,
}

impl OrdinalSymbol {
    /// Positions `1..=k` listed in ascending order of their values.
    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    /// Lexicographic rank of the pattern among all `k!` permutations.
    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn k(&self) -> usize {
        self.pattern.len()
    }
}

/// Ordinal symbols of every full window of a series, in increasing order of
/// the window's last index.
#[derive(Debug, Clone)]
pub struct SymbolSequence {
    pub symbols: Vec<OrdinalSymbol>,
    pub k: usize,
    pub delta: usize,
    pub source_length: usize,
}

impl SymbolSequence {
    /// Index of the series element the `i`-th symbol's window ends at.
    pub fn last_index(&self, i: usize) -> usize {
        (self.k - 1) * self.delta + i
    }
}

pub(crate) fn assert_all_finite(values: &[f64], what: &str) {
    assert!(
        values.iter().all(|v| v.is_finite()),
        "{what} contains non-finite values; alignment must filter them"
    );
}

/// Pattern of `vals` (oldest first) written into `out[..k]`; returns the code.
fn pattern_code(vals: &[f64], out: &mut [u8]) -> u32 {
    let k = vals.len();
    debug_assert!((1..=MAX_PATTERN_LEN).contains(&k));
    // insertion sort of positions by (value, position); stable tie-break on
    // the original index
    let mut order = [0u8; MAX_PATTERN_LEN];
    for i in 0..k {
        let v = vals[i];
        let mut j = i;
        while j > 0 {
            let p = order[j - 1] as usize;
            if vals[p] > v {
                order[j] = order[j - 1];
                j -= 1;
            } else {
                break;
            }
        }
        order[j] = i as u8;
    }
    for slot in 0..k {
        out[slot] = order[slot] + 1;
    }
    // Lehmer rank of the pattern word
    let mut code = 0u32;
    for i in 0..k {
        let mut smaller_after = 0u32;
        for j in i + 1..k {
            if out[j] < out[i] {
                smaller_after += 1;
            }
        }
        code += smaller_after * FACTORIAL[k - 1 - i];
    }
    code
}

/// Symbolize the window of `k` values spaced `delta` apart ending at index `t`
/// (0-based). Fails when the series is too short to supply the full window.
pub fn symbolize_at(series: &[f64], t: usize, k: usize, delta: usize) -> Result<OrdinalSymbol> {
    assert!((1..=MAX_PATTERN_LEN).contains(&k), "k out of supported range");
    assert!(delta >= 1, "delta must be at least 1");
    if t >= series.len() || t < (k - 1) * delta {
        return Err(Error::InsufficientHistory { t, k, delta });
    }
    let mut vals = [0.0f64; MAX_PATTERN_LEN];
    for m in 0..k {
        vals[m] = series[t - (k - 1 - m) * delta];
    }
    assert_all_finite(&vals[..k], "symbolization window");
    let mut pat = [0u8; MAX_PATTERN_LEN];
    let code = pattern_code(&vals[..k], &mut pat);
    Ok(OrdinalSymbol {
        pattern: pat[..k].to_vec(),
        code,
    })
}

/// All ordinal symbols of `series`, one per admissible last index
/// `t = (k-1)*delta, ..., len-1`. Short series yield an empty sequence.
pub fn symbol_sequence(series: &[f64], k: usize, delta: usize) -> SymbolSequence {
    assert!((1..=MAX_PATTERN_LEN).contains(&k), "k out of supported range");
    assert!(delta >= 1, "delta must be at least 1");
    assert_all_finite(series, "symbolization input");
    let len = series.len();
    let mut symbols = Vec::new();
    if len > (k - 1) * delta {
        symbols.reserve(len - (k - 1) * delta);
        let mut vals = [0.0f64; MAX_PATTERN_LEN];
        let mut pat = [0u8; MAX_PATTERN_LEN];
        for t in (k - 1) * delta..len {
            for m in 0..k {
                vals[m] = series[t - (k - 1 - m) * delta];
            }
            let code = pattern_code(&vals[..k], &mut pat);
            symbols.push(OrdinalSymbol {
                pattern: pat[..k].to_vec(),
                code,
            });
        }
    }
    SymbolSequence {
        symbols,
        k,
        delta,
        source_length: len,
    }
}

/// Code sequence only, for the counting hot path: entry `i` is the code of the
/// window ending at index `(k-1)*delta + i`.
pub(crate) fn ordinal_codes(series: &[f64], k: usize, delta: usize) -> Vec<u32> {
    debug_assert!((1..=MAX_PATTERN_LEN).contains(&k) && delta >= 1);
    let len = series.len();
    if len < (k - 1) * delta + 1 {
        return Vec::new();
    }
    let mut codes = Vec::with_capacity(len - (k - 1) * delta);
    let mut vals = [0.0f64; MAX_PATTERN_LEN];
    let mut pat = [0u8; MAX_PATTERN_LEN];
    for t in (k - 1) * delta..len {
        for m in 0..k {
            vals[m] = series[t - (k - 1 - m) * delta];
        }
        codes.push(pattern_code(&vals[..k], &mut pat));
    }
    codes
}

/// Lexicographic rank of a pattern. The pattern must be a permutation of
/// `1..=k` with `k <= MAX_PATTERN_LEN`.
pub fn encode(pattern: &[u8]) -> Result<u32> {
    let k = pattern.len();
    if k == 0 || k > MAX_PATTERN_LEN {
        return Err(Error::InvalidPattern(pattern.to_vec()));
    }
    let mut seen = [false; MAX_PATTERN_LEN + 1];
    for &p in pattern {
        if p == 0 || p as usize > k || seen[p as usize] {
            return Err(Error::InvalidPattern(pattern.to_vec()));
        }
        seen[p as usize] = true;
    }
    let mut code = 0u32;
    for i in 0..k {
        let mut smaller_after = 0u32;
        for j in i + 1..k {
            if pattern[j] < pattern[i] {
                smaller_after += 1;
            }
        }
        code += smaller_after * FACTORIAL[k - 1 - i];
    }
    Ok(code)
}

/// Inverse of [`encode`]: the pattern of rank `code` among permutations of
/// `1..=k`.
pub fn decode(code: u32, k: usize) -> Result<Vec<u8>> {
    if k == 0 || k > MAX_PATTERN_LEN || code >= FACTORIAL[k] {
        return Err(Error::CodeOutOfRange { code, k });
    }
    let mut remaining: Vec<u8> = (1..=k as u8).collect();
    let mut pattern = Vec::with_capacity(k);
    let mut c = code;
    for i in 0..k {
        let f = FACTORIAL[k - 1 - i];
        let digit = (c / f) as usize;
        c %= f;
        pattern.push(remaining.remove(digit));
    }
    Ok(pattern)
}
