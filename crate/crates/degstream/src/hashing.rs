//! Deterministic hashing primitives shared by the samplers.
//!
//! Everything here is fixed-width integer arithmetic, so results are
//! identical across platforms and runs. Two independent channels are
//! derived from one user seed:
//!
//! * a keyed label hash, used to decide head-sample membership, so that
//!   membership is a pure function of `(seed, label)` and therefore
//!   independent of stream order, and
//! * a counter-based coin sequence indexed by endpoint position, used for
//!   the per-occurrence tail coin flips.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const LABEL_SALT: u64 = 0x68ea_d1f6_a7a4_97c1;
const COIN_SALT: u64 = 0x2c1b_3c6d_c4ce_b9fe;

/// Final avalanche mix (the splitmix64 output permutation). Flips roughly
/// half the output bits for any single-bit change of the input.
#[inline]
pub(crate) fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

/// Keyed 64-bit hash of a vertex token.
#[inline]
pub(crate) fn label_hash(seed: u64, token: &str) -> u64 {
    let mut h = FNV_OFFSET ^ mix64(seed ^ LABEL_SALT);
    for &b in token.as_bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(FNV_PRIME);
    }
    mix64(h)
}

/// Map a hash to `[0, 1)`. Uses the top 53 bits so the result is exactly
/// representable and strictly below one (a membership test `u < p` with
/// `p = 1` must always pass).
#[inline]
pub(crate) fn unit_interval(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform variate in `[0, 1)` for head membership of `token`.
#[inline]
pub(crate) fn label_unit(seed: u64, token: &str) -> f64 {
    unit_interval(label_hash(seed, token))
}

/// Uniform variate in `[0, 1)` for the `index`-th endpoint occurrence of the
/// stream (two per edge). Counter-based: no state beyond the index.
#[inline]
pub(crate) fn coin_unit(seed: u64, index: u64) -> f64 {
    let state = mix64(seed ^ COIN_SALT).wrapping_add(index.wrapping_mul(GOLDEN));
    unit_interval(mix64(state))
}

/// Fold extra words into a base seed, one at a time. Used to derive
/// per-cell and per-run seeds from a single experiment seed.
#[inline]
pub(crate) fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = mix64(base ^ GOLDEN);
    for &p in parts {
        h = mix64(h ^ p.wrapping_mul(GOLDEN).wrapping_add(1));
    }
    h
}
