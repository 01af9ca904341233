//! Reversible image steganography by Haar upscaling.
//!
//! A cover image is upscaled 2x with an inverse Haar transform, treating the
//! cover as the average subband and a constant `beta` as every detail
//! subband. Payload bytes are split into base-4 digits and written two per
//! 2x2 block by forcing `r01` and `r10` to the right residue mod 4; `r11`
//! then absorbs the change so each block sum is preserved. The receiver
//! reads the digits back with a mod 4 and recovers the original cover
//! exactly from the forward transform's average subband.
//!
//! ```
//! use haarsteg::{derive_keystream, embed, extract, resize_cover, GrayImage, Mode, PayloadFrame};
//!
//! let cover = GrayImage::new(8, 8, (0..64).collect()).unwrap();
//! let translated = resize_cover(&cover, 7).unwrap();
//! let ks = derive_keystream(b"key");
//! let frame = PayloadFrame::framed_bytes(b"hi".to_vec());
//! let stego = embed(&translated, &frame, &ks).unwrap();
//!
//! assert_eq!(extract(&stego, &ks, Mode::Framed, None).unwrap(), frame);
//! assert_eq!(stego.recover().unwrap(), vec![cover]);
//! ```

pub mod codec;
mod error;
pub mod haar;
pub mod metrics;
pub mod pixmap;
mod plane;

pub use codec::{
    adjust_block, bytes_to_digits, capacity_bytes, derive_keystream, digit_capacity,
    digits_to_bytes, embed, embed_digit, embed_digits, extract, extract_digit, extract_digits,
    order_bit, Block, KeyStream, Mode, PayloadFrame, PayloadKind,
};
pub use error::{Error, Result};
pub use haar::{
    forward_haar, inverse_haar, recover_cover, resize_cover, SubbandSet, TranslatedImage,
};
pub use metrics::{image_fidelity, mse, psnr, MetricsReport};
pub use pixmap::{
    is_stego_container, read_pixmap, read_stego, write_pixmap, write_stego, ColorImage, GrayImage,
    Pixmap, StegoContainer, STEGO_BIAS,
};
pub use plane::Plane;
