use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 64-bit FNV-1a. Stable across platforms and releases, unlike `DefaultHasher`.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Independent RNG stream for `(seed, tag)`.
pub(crate) fn stream(seed: u64, tag: &str) -> ChaCha8Rng {
    let mixed = fnv1a(tag.as_bytes()) ^ seed.rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15;
    ChaCha8Rng::seed_from_u64(mixed)
}
