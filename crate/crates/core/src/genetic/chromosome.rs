use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::clustering::Assignment;
use crate::error::{Error, Result};

/// Bits needed for one label, `⌈log₂ k⌉` (zero for `k ≤ 1`).
pub fn bits_per_label(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Genome length for `n` points and `k` clusters: `n·⌈log₂ k⌉`.
pub fn chromosome_length(n: usize, k: usize) -> usize {
    n * bits_per_label(k)
}

/// Fixed-length bit string. Bit 0 is the first (most significant) bit of the
/// first point's label block.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    words: Vec<u64>,
    len: usize,
}

impl Chromosome {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn random(len: usize, rng: &mut impl Rng) -> Self {
        let mut c = Self::zeros(len);
        for w in &mut c.words {
            *w = rng.random();
        }
        c.clear_tail();
        c
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Number of positions at which `self` and `other` differ.
    pub fn hamming(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Reads `width` bits starting at `start`, first bit most significant.
    fn read(&self, start: usize, width: usize) -> u64 {
        (start..start + width).fold(0, |acc, i| acc << 1 | u64::from(self.get(i)))
    }

    fn write(&mut self, start: usize, width: usize, value: u64) {
        for b in 0..width {
            self.set(start + b, value >> (width - 1 - b) & 1 == 1);
        }
    }

    /// Replaces bits `cut..` with those of `other`.
    pub(crate) fn splice_suffix(&mut self, other: &Self, cut: usize) {
        let (w, b) = (cut / 64, cut % 64);
        if b == 0 {
            self.words[w..].copy_from_slice(&other.words[w..]);
        } else {
            let keep = (1u64 << b) - 1;
            self.words[w] = (self.words[w] & keep) | (other.words[w] & !keep);
            self.words[w + 1..].copy_from_slice(&other.words[w + 1..]);
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chromosome({self})")
    }
}

impl FromStr for Chromosome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Self::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => c.set(i, true),
                _ => return Err(Error::invalid(format!("'{ch}' is not a bit"))),
            }
        }
        Ok(c)
    }
}

/// Reads the labels of `c` into `labels`; codes `≥ k` wrap modulo `k`.
pub(crate) fn decode_into(c: &Chromosome, k: usize, labels: &mut [u32]) {
    let width = bits_per_label(k);
    if width == 0 {
        labels.fill(0);
        return;
    }
    for (j, l) in labels.iter_mut().enumerate() {
        *l = (c.read(j * width, width) % k as u64) as u32;
    }
}

pub fn decode(c: &Chromosome, n: usize, k: usize) -> Result<Assignment> {
    if k == 0 {
        return Err(Error::config("k", "cluster count must be at least 1"));
    }
    let expected = chromosome_length(n, k);
    if c.len() != expected {
        return Err(Error::invalid(format!(
            "chromosome has {} bits, expected {expected} for n = {n}, k = {k}",
            c.len()
        )));
    }
    let mut labels = vec![0; n];
    decode_into(c, k, &mut labels);
    Ok(Assignment::new_unchecked(labels, k))
}

pub fn encode(a: &Assignment) -> Chromosome {
    let width = bits_per_label(a.k());
    let mut c = Chromosome::zeros(chromosome_length(a.len(), a.k()));
    for (j, &l) in a.labels().iter().enumerate() {
        c.write(j * width, width, u64::from(l));
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Chromosome {
        s.parse().unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(chromosome_length(156, 6), 468);
        assert_eq!(chromosome_length(1, 2), 1);
        assert_eq!(chromosome_length(512, 6), 1536);
        assert_eq!(chromosome_length(10, 1), 0);
        assert_eq!(bits_per_label(8), 3);
        assert_eq!(bits_per_label(9), 4);
    }

    #[test]
    fn decode_blocks() {
        let label = |s| decode(&bits(s), 1, 6).unwrap().labels()[0];
        assert_eq!(label("000"), 0);
        assert_eq!(label("101"), 5);
        assert_eq!(label("111"), 1);
        assert_eq!(label("110"), 0);
    }

    #[test]
    fn decode_rejects_wrong_length() {
        assert!(matches!(
            decode(&bits("0000"), 1, 6),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn single_cluster_decodes_from_empty() {
        let a = decode(&Chromosome::zeros(0), 4, 1).unwrap();
        assert_eq!(a.labels(), &[0; 4]);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(
            encode(&Assignment::new(vec![0], 2).unwrap()).to_string(),
            "0"
        );
        assert_eq!(
            encode(&Assignment::new(vec![5, 0], 6).unwrap()).to_string(),
            "101000"
        );
    }

    #[test]
    fn splice_across_words() {
        let a = Chromosome::zeros(150);
        let mut b = Chromosome::zeros(150);
        for i in 0..150 {
            b.set(i, true);
        }
        for cut in [1, 63, 64, 65, 128, 149] {
            let mut c = a.clone();
            c.splice_suffix(&b, cut);
            assert!((0..150).all(|i| c.get(i) == (i >= cut)));
        }
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(k in 1usize..20, labels in prop::collection::vec(any::<u32>(), 1..300)) {
            let labels: Vec<u32> = labels.into_iter().map(|l| l % k as u32).collect();
            let a = Assignment::new(labels, k).unwrap();
            let c = encode(&a);
            prop_assert_eq!(c.len(), chromosome_length(a.len(), k));
            prop_assert_eq!(decode(&c, a.len(), k).unwrap(), a);
        }

        #[test]
        fn text_form_round_trips(s in "[01]{0,200}") {
            prop_assert_eq!(bits(&s).to_string(), s);
        }
    }
}
