//! Packed bit and 2-bit vectors used by the merge engines.
//!
//! The refinement loops keep two interleave vectors plus a couple of
//! per-position mark arrays alive at once, so these are stored packed
//! (1 or 2 bits per entry) rather than as byte vectors.

/// Fixed-length vector of single bits.
#[derive(Clone, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn new(len: usize, fill: bool) -> Self {
        let nwords = len.div_ceil(64);
        let mut words = vec![if fill { !0u64 } else { 0 }; nwords];
        if fill && len % 64 != 0 {
            // keep unused tail bits zero so that Eq can compare words directly
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        BitVec { words, len }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Overwrites this vector with another of the same length.
    pub fn copy_from(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        self.words.copy_from_slice(&other.words);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.iter() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromIterator<bool> for BitVec {
    fn from_iter<T: IntoIterator<Item = bool>>(iter: T) -> Self {
        let bits: Vec<bool> = iter.into_iter().collect();
        let mut bv = BitVec::new(bits.len(), false);
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                bv.set(i, true);
            }
        }
        bv
    }
}

/// Fixed-length vector of 2-bit entries (values 0..=3).
#[derive(Clone, PartialEq, Eq)]
pub struct TwoBitVec {
    words: Vec<u64>,
    len: usize,
}

impl TwoBitVec {
    pub fn new(len: usize, fill: u8) -> Self {
        debug_assert!(fill < 4);
        let nwords = (2 * len).div_ceil(64);
        let pattern = (0..32).fold(0u64, |acc, i| acc | (fill as u64) << (2 * i));
        TwoBitVec {
            words: vec![pattern; nwords],
            len,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.len);
        (self.words[i / 32] >> (2 * (i % 32)) & 3) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: u8) {
        debug_assert!(i < self.len && value < 4);
        let shift = 2 * (i % 32);
        let word = &mut self.words[i / 32];
        *word = *word & !(3u64 << shift) | (value as u64) << shift;
    }

    /// Overwrites this vector with another of the same length.
    pub fn copy_from(&mut self, other: &TwoBitVec) {
        debug_assert_eq!(self.len, other.len);
        self.words.copy_from_slice(&other.words);
    }
}

impl std::fmt::Debug for TwoBitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries((0..self.len).map(|i| self.get(i))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_set_get_roundtrip() {
        let mut bv = BitVec::new(130, false);
        for i in (0..130).step_by(3) {
            bv.set(i, true);
        }
        for i in 0..130 {
            assert_eq!(bv.get(i), i % 3 == 0);
        }
        assert_eq!(bv.count_ones(), (0..130).step_by(3).count());
    }

    #[test]
    fn bitvec_filled_tail_is_clean() {
        let a = BitVec::new(70, true);
        let mut b = BitVec::new(70, false);
        for i in 0..70 {
            b.set(i, true);
        }
        assert_eq!(a, b);
    }

    #[test]
    fn twobit_set_get_roundtrip() {
        let mut v = TwoBitVec::new(100, 3);
        assert!((0..100).all(|i| v.get(i) == 3));
        for i in 0..100 {
            v.set(i, (i % 4) as u8);
        }
        for i in 0..100 {
            assert_eq!(v.get(i), (i % 4) as u8);
        }
    }
}
