//! Packed binary words.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A finite word over `{0, 1}`, packed most significant bit first in 64-bit blocks.
///
/// Bits past `len` in the last block are always zero, so the derived equality
/// and hash are equality of words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    blocks: Vec<u64>,
    len: usize,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let mut w = Word::new();
        for b in bits {
            w.push(b);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        let off = self.len % 64;
        if off == 0 {
            self.blocks.push(0);
        }
        if bit {
            *self.blocks.last_mut().expect("block exists") |= 1u64 << (63 - off);
        }
        self.len += 1;
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for word of length {}", self.len);
        self.blocks[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// Writes the factor `[start, start + len)` into `out` as packed blocks.
    pub fn factor_into(&self, start: usize, len: usize, out: &mut Vec<u64>) {
        assert!(start + len <= self.len, "factor out of range");
        out.clear();
        let nblocks = len.div_ceil(64);
        let (q, r) = (start / 64, start % 64);
        for b in 0..nblocks {
            let hi = self.blocks[q + b];
            let v = if r == 0 {
                hi
            } else {
                let lo = self.blocks.get(q + b + 1).copied().unwrap_or(0);
                hi << r | lo >> (64 - r)
            };
            out.push(v);
        }
        let tail = len % 64;
        if tail != 0 {
            *out.last_mut().expect("nonempty factor") &= !0u64 << (64 - tail);
        }
    }

    pub fn slice(&self, start: usize, len: usize) -> Word {
        let mut blocks = Vec::new();
        self.factor_into(start, len, &mut blocks);
        Word { blocks, len }
    }

    pub(crate) fn from_blocks(blocks: Vec<u64>, len: usize) -> Word {
        debug_assert_eq!(blocks.len(), len.div_ceil(64));
        Word { blocks, len }
    }
}

/// Lexicographic order, with a proper prefix before its extensions.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        for (i, (a, b)) in self.blocks.iter().zip(&other.blocks).enumerate() {
            if a != b {
                // Padding bits are zero, so a difference past the shorter length
                // means the shorter word is a prefix of the other.
                let pos = i * 64 + (a ^ b).leading_zeros() as usize;
                if pos >= self.len.min(other.len) {
                    break;
                }
                return a.cmp(b);
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut w = Word::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => w.push(false),
                '1' => w.push(true),
                other => {
                    return Err(Error::Parse(format!(
                        "character {other:?} at position {i} is not a binary digit"
                    )))
                }
            }
        }
        Ok(w)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
