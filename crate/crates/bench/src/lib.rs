//! Deterministic fixtures shared by the criterion benchmarks.

use haarsteg::{digit_capacity, resize_cover, GrayImage, TranslatedImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform random 8-bit cover.
pub fn uniform_cover(width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::new(
        width,
        height,
        (0..width * height).map(|_| rng.random()).collect(),
    )
    .expect("non-zero dimensions")
}

/// Upscaled cover plus a digit stream that fills it.
pub fn full_capacity(
    width: usize,
    height: usize,
    beta: i32,
    seed: u64,
) -> (TranslatedImage, Vec<u8>) {
    let translated =
        resize_cover(&uniform_cover(width, height, seed), beta).expect("beta in range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let digits = (0..digit_capacity(&translated))
        .map(|_| rng.random_range(0..4))
        .collect();
    (translated, digits)
}
