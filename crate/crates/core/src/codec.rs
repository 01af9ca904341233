//! Quaternary payload coding and per-block embedding.
//!
//! Every 2x2 block `[r00 r01; r10 r11]` of a translated image carries two
//! base-4 digits, one in `r01` and one in `r10`. A keyed bit decides which
//! digit goes where. After embedding, `r11` absorbs the opposite of both
//! changes so the block sum, and with it the recovered cover pixel, stays
//! the same.

use crate::error::{Error, Result};
use crate::haar::TranslatedImage;

/// Magic bytes opening a framed payload.
pub const FRAME_MAGIC: [u8; 4] = *b"WSTR";
pub const FRAME_VERSION: u8 = 1;
/// Framed header length in bytes (64 quaternary digits).
pub const FRAME_HEADER_LEN: usize = 16;
pub const DIGITS_PER_BYTE: usize = 4;
pub const DIGITS_PER_BLOCK: usize = 2;

const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Split every byte into four base-4 digits, most significant first.
pub fn bytes_to_digits(payload: &[u8]) -> Vec<u8> {
    payload
        .iter()
        .flat_map(|&b| [(b >> 6) & 3, (b >> 4) & 3, (b >> 2) & 3, b & 3])
        .collect()
}

/// Inverse of [`bytes_to_digits`].
pub fn digits_to_bytes(digits: &[u8]) -> Result<Vec<u8>> {
    if !digits.len().is_multiple_of(DIGITS_PER_BYTE) {
        return Err(Error::RaggedDigits(digits.len()));
    }
    digits
        .chunks_exact(DIGITS_PER_BYTE)
        .map(|quad| {
            quad.iter().try_fold(0u8, |acc, &d| {
                if d > 3 {
                    Err(Error::InvalidDigit(d))
                } else {
                    Ok(acc << 2 | d)
                }
            })
        })
        .collect()
}

/// Keyed source of per-block ordering bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyStream {
    seed: u64,
}

impl KeyStream {
    pub fn from_seed(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `false`: first digit into `r01`, second into `r10`. `true`: swapped.
    pub fn order_bit(&self, block_index: u64) -> bool {
        let mut z = self
            .seed
            .wrapping_add(block_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
        z ^= z >> 30;
        z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z ^= z >> 27;
        z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        z & 1 == 1
    }
}

/// FNV-1a (64-bit) of the key bytes.
pub fn derive_keystream(key: &[u8]) -> KeyStream {
    let seed = key.iter().fold(FNV_OFFSET, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    });
    KeyStream { seed }
}

/// Standalone form of [`KeyStream::order_bit`].
pub fn order_bit(ks: &KeyStream, block_index: u64) -> bool {
    ks.order_bit(block_index)
}

/// Force `old` to be congruent to `digit` mod 4:
/// a positive difference moves down by `4 - diff`, a negative one moves up
/// by `4 + diff`. The move is at most 3 either way.
#[inline]
pub fn embed_digit(old: i32, digit: u8) -> i32 {
    debug_assert!(digit < 4);
    let diff = i32::from(digit) - old.rem_euclid(4);
    match diff {
        0 => old,
        d if d > 0 => old - (4 - d),
        d => old + (4 + d),
    }
}

#[inline]
pub fn extract_digit(value: i32) -> u8 {
    value.rem_euclid(4) as u8
}

/// The four samples under a 2x2 mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub r00: i32,
    pub r01: i32,
    pub r10: i32,
    pub r11: i32,
}

impl Block {
    pub fn sum(&self) -> i32 {
        self.r00 + self.r01 + self.r10 + self.r11
    }
}

/// Cancel the embedding deltas on `r01`/`r10` by moving `r11` the other way.
pub fn adjust_block(b: Block, delta01: i32, delta10: i32) -> Block {
    Block {
        r11: b.r11 - (delta01 + delta10),
        ..b
    }
}

/// Embed two digits into one block and restore its sum.
pub fn embed_block(b: Block, digits: [u8; 2], swapped: bool) -> Block {
    let (d01, d10) = if swapped {
        (digits[1], digits[0])
    } else {
        (digits[0], digits[1])
    };
    let r01 = embed_digit(b.r01, d01);
    let r10 = embed_digit(b.r10, d10);
    adjust_block(Block { r01, r10, ..b }, r01 - b.r01, r10 - b.r10)
}

fn read_block_digits(b: &Block, swapped: bool) -> [u8; 2] {
    let (first, second) = (extract_digit(b.r01), extract_digit(b.r10));
    if swapped {
        [second, first]
    } else {
        [first, second]
    }
}

/// Row-major iteration over blocks of every plane, yielding
/// (plane, block row, block col). The position in the sequence is the block
/// index fed to the keystream.
fn block_positions(t: &TranslatedImage) -> impl Iterator<Item = (usize, usize, usize)> {
    let (rows, cols) = (t.height() / 2, t.width() / 2);
    (0..t.planes().len())
        .flat_map(move |p| (0..rows).flat_map(move |r| (0..cols).map(move |c| (p, r, c))))
}

fn load_block(t: &TranslatedImage, p: usize, r: usize, c: usize) -> Block {
    let plane = &t.planes()[p];
    Block {
        r00: plane.get(2 * r, 2 * c),
        r01: plane.get(2 * r, 2 * c + 1),
        r10: plane.get(2 * r + 1, 2 * c),
        r11: plane.get(2 * r + 1, 2 * c + 1),
    }
}

/// Total digit capacity of a translated image.
pub fn digit_capacity(t: &TranslatedImage) -> usize {
    DIGITS_PER_BLOCK * t.block_count()
}

/// Embed a digit stream, two digits per block in row-major block order.
/// An odd-length stream leaves the second slot of its last block as-is.
pub fn embed_digits(
    translated: &TranslatedImage,
    digits: &[u8],
    ks: &KeyStream,
) -> Result<TranslatedImage> {
    let available = digit_capacity(translated);
    if digits.len() > available {
        return Err(Error::CapacityExceeded {
            required: digits.len(),
            available,
        });
    }
    if let Some(&bad) = digits.iter().find(|&&d| d > 3) {
        return Err(Error::InvalidDigit(bad));
    }
    let mut out = translated.clone();
    let positions: Vec<_> = block_positions(translated)
        .take(digits.len().div_ceil(DIGITS_PER_BLOCK))
        .collect();
    for (index, (chunk, (p, r, c))) in digits.chunks(DIGITS_PER_BLOCK).zip(positions).enumerate() {
        let block = load_block(&out, p, r, c);
        let swapped = ks.order_bit(index as u64);
        let updated = match *chunk {
            [d0, d1] => embed_block(block, [d0, d1], swapped),
            [d0] => {
                // Only the first slot carries a digit.
                let mut b = block;
                if swapped {
                    b.r10 = embed_digit(block.r10, d0);
                } else {
                    b.r01 = embed_digit(block.r01, d0);
                }
                adjust_block(b, b.r01 - block.r01, b.r10 - block.r10)
            }
            _ => unreachable!("chunks of at most two digits"),
        };
        let plane = &mut out.planes_mut()[p];
        plane.set(2 * r, 2 * c + 1, updated.r01);
        plane.set(2 * r + 1, 2 * c, updated.r10);
        plane.set(2 * r + 1, 2 * c + 1, updated.r11);
    }
    Ok(out)
}

/// Read `count` digits back in embedding order.
pub fn extract_digits(stego: &TranslatedImage, count: usize, ks: &KeyStream) -> Result<Vec<u8>> {
    extract_digits_from(stego, 0, count, ks)
}

fn extract_digits_from(
    stego: &TranslatedImage,
    skip: usize,
    count: usize,
    ks: &KeyStream,
) -> Result<Vec<u8>> {
    let available = digit_capacity(stego);
    if skip + count > available {
        return Err(Error::CapacityExceeded {
            required: skip + count,
            available,
        });
    }
    let first_block = skip / DIGITS_PER_BLOCK;
    let last_block = (skip + count).div_ceil(DIGITS_PER_BLOCK);
    let mut digits = Vec::with_capacity((last_block - first_block) * DIGITS_PER_BLOCK);
    for (index, (p, r, c)) in block_positions(stego)
        .enumerate()
        .take(last_block)
        .skip(first_block)
    {
        let block = load_block(stego, p, r, c);
        digits.extend(read_block_digits(&block, ks.order_bit(index as u64)));
    }
    let offset = skip % DIGITS_PER_BLOCK;
    Ok(digits[offset..offset + count].to_vec())
}

/// Whether a payload carries the self-describing header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Framed,
    Raw,
}

/// What a framed payload contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayloadKind {
    Bytes,
    Image { width: u32, height: u32 },
}

/// A payload ready to embed, or one just extracted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PayloadFrame {
    /// Headerless; the receiver must know the length.
    Raw(Vec<u8>),
    Framed {
        kind: PayloadKind,
        payload: Vec<u8>,
    },
}

impl PayloadFrame {
    pub fn raw(payload: Vec<u8>) -> Self {
        PayloadFrame::Raw(payload)
    }

    pub fn framed_bytes(payload: Vec<u8>) -> Self {
        PayloadFrame::Framed {
            kind: PayloadKind::Bytes,
            payload,
        }
    }

    pub fn framed_image(width: u32, height: u32, payload: Vec<u8>) -> Result<Self> {
        if u64::from(width) * u64::from(height) != payload.len() as u64 {
            return Err(Error::FrameSizeMismatch {
                width,
                height,
                len: payload.len(),
            });
        }
        Ok(PayloadFrame::Framed {
            kind: PayloadKind::Image { width, height },
            payload,
        })
    }

    pub fn mode(&self) -> Mode {
        match self {
            PayloadFrame::Raw(_) => Mode::Raw,
            PayloadFrame::Framed { .. } => Mode::Framed,
        }
    }

    pub fn payload(&self) -> &[u8] {
        match self {
            PayloadFrame::Raw(p) | PayloadFrame::Framed { payload: p, .. } => p,
        }
    }

    pub fn into_payload(self) -> Vec<u8> {
        match self {
            PayloadFrame::Raw(p) | PayloadFrame::Framed { payload: p, .. } => p,
        }
    }

    /// Bytes as they are embedded, header included.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        match self {
            PayloadFrame::Raw(p) => Ok(p.clone()),
            PayloadFrame::Framed { kind, payload } => {
                let mut out = encode_header(*kind, payload.len())?.to_vec();
                out.extend_from_slice(payload);
                Ok(out)
            }
        }
    }
}

/// For `Bytes` payloads the width field holds the byte length and height is 1.
fn encode_header(kind: PayloadKind, len: usize) -> Result<[u8; FRAME_HEADER_LEN]> {
    let (kind_byte, width, height) = match kind {
        PayloadKind::Bytes => {
            let width = u32::try_from(len).map_err(|_| Error::FrameSizeMismatch {
                width: u32::MAX,
                height: 1,
                len,
            })?;
            (0u8, width, 1u32)
        }
        PayloadKind::Image { width, height } => {
            if u64::from(width) * u64::from(height) != len as u64 {
                return Err(Error::FrameSizeMismatch { width, height, len });
            }
            (1u8, width, height)
        }
    };
    let mut header = [0u8; FRAME_HEADER_LEN];
    header[..4].copy_from_slice(&FRAME_MAGIC);
    header[4] = FRAME_VERSION;
    header[5] = kind_byte;
    header[6..10].copy_from_slice(&width.to_be_bytes());
    header[10..14].copy_from_slice(&height.to_be_bytes());
    Ok(header)
}

fn decode_header(header: &[u8]) -> Result<(PayloadKind, usize)> {
    if header[..4] != FRAME_MAGIC {
        return Err(Error::NoPayload("bad magic"));
    }
    if header[4] != FRAME_VERSION {
        return Err(Error::NoPayload("unsupported version"));
    }
    if header[14..16] != [0, 0] {
        return Err(Error::NoPayload("reserved bytes set"));
    }
    let width = u32::from_be_bytes(header[6..10].try_into().unwrap());
    let height = u32::from_be_bytes(header[10..14].try_into().unwrap());
    let len = usize::try_from(u64::from(width) * u64::from(height))
        .map_err(|_| Error::NoPayload("declared length too large"))?;
    match header[5] {
        0 if height == 1 => Ok((PayloadKind::Bytes, len)),
        1 => Ok((PayloadKind::Image { width, height }, len)),
        _ => Err(Error::NoPayload("unknown payload kind")),
    }
}

/// Payload bytes that fit in a cover of the given size.
pub fn capacity_bytes(
    cover_width: usize,
    cover_height: usize,
    channels: usize,
    mode: Mode,
) -> usize {
    let digits = DIGITS_PER_BLOCK * cover_width * cover_height * channels;
    let digits = match mode {
        Mode::Raw => digits,
        Mode::Framed => digits.saturating_sub(FRAME_HEADER_LEN * DIGITS_PER_BYTE),
    };
    digits / DIGITS_PER_BYTE
}

/// Embed a payload (with its header in framed mode) into a translated image.
pub fn embed(
    translated: &TranslatedImage,
    payload: &PayloadFrame,
    ks: &KeyStream,
) -> Result<TranslatedImage> {
    let digits = bytes_to_digits(&payload.to_bytes()?);
    embed_digits(translated, &digits, ks)
}

/// Extract a payload. Raw mode needs the digit count that was embedded.
pub fn extract(
    stego: &TranslatedImage,
    ks: &KeyStream,
    mode: Mode,
    raw_digit_count: Option<usize>,
) -> Result<PayloadFrame> {
    match mode {
        Mode::Raw => {
            let count = raw_digit_count.ok_or(Error::MissingDigitCount)?;
            let digits = extract_digits(stego, count, ks)?;
            Ok(PayloadFrame::Raw(digits_to_bytes(&digits)?))
        }
        Mode::Framed => {
            let header_digits = FRAME_HEADER_LEN * DIGITS_PER_BYTE;
            if digit_capacity(stego) < header_digits {
                return Err(Error::NoPayload("image too small for a header"));
            }
            let header = digits_to_bytes(&extract_digits(stego, header_digits, ks)?)?;
            let (kind, len) = decode_header(&header)?;
            let available = digit_capacity(stego) - header_digits;
            let needed = len
                .checked_mul(DIGITS_PER_BYTE)
                .filter(|&n| n <= available)
                .ok_or(Error::NoPayload("declared length exceeds capacity"))?;
            let digits = extract_digits_from(stego, header_digits, needed, ks)?;
            Ok(PayloadFrame::Framed {
                kind,
                payload: digits_to_bytes(&digits)?,
            })
        }
    }
}
