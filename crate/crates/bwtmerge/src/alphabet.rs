//! Alphabet remapping and the in-memory document collection.
//!
//! Documents are stored over a dense internal alphabet: the distinct bytes
//! of the input are ranked in byte order and mapped to `1..=sigma`. Rank 0
//! is reserved for the terminator family (per-document end markers in the
//! linear transforms, the shared trie/permuterm terminator elsewhere) and is
//! never stored inside a collection; index builders materialize it where the
//! transforms need it.

use crate::error::{Error, Result};

/// Order-preserving map between raw bytes and internal symbol ranks.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    to_rank: [u8; 256],
    from_rank: Vec<u8>,
    present: [bool; 256],
}

impl Alphabet {
    /// Builds the alphabet of all bytes occurring in `docs`.
    pub fn from_docs<D: AsRef<[u8]>>(docs: &[D]) -> Result<Self> {
        let mut present = [false; 256];
        for doc in docs {
            for &b in doc.as_ref() {
                present[b as usize] = true;
            }
        }
        let distinct = present.iter().filter(|&&p| p).count();
        if distinct > 255 {
            return Err(Error::AlphabetTooLarge { count: distinct });
        }
        let mut to_rank = [0u8; 256];
        let mut from_rank = vec![0u8];
        for b in 0..256 {
            if present[b] {
                to_rank[b] = from_rank.len() as u8;
                from_rank.push(b as u8);
            }
        }
        Ok(Alphabet {
            to_rank,
            from_rank,
            present,
        })
    }

    /// Number of distinct ordinary symbols.
    pub fn sigma(&self) -> u8 {
        (self.from_rank.len() - 1) as u8
    }

    /// Maps a byte to its rank in `1..=sigma`, or `None` if absent.
    pub fn to_internal(&self, byte: u8) -> Option<u8> {
        if self.present[byte as usize] {
            Some(self.to_rank[byte as usize])
        } else {
            None
        }
    }

    /// Maps a rank in `1..=sigma` back to the original byte.
    pub fn from_internal(&self, rank: u8) -> u8 {
        self.from_rank[rank as usize]
    }
}

impl std::fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Alphabet(sigma={})", self.sigma())
    }
}

/// A collection of documents over a shared internal alphabet.
///
/// Every symbol is in `1..=sigma`; terminators are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringCollection {
    docs: Vec<Vec<u8>>,
    alphabet: Alphabet,
}

impl StringCollection {
    /// Remaps raw byte documents onto a dense internal alphabet.
    ///
    /// The byte order of the input induces the rank order of the internal
    /// symbols, so lexicographic comparisons are preserved.
    pub fn remap<D: AsRef<[u8]>>(raw_docs: &[D]) -> Result<Self> {
        if raw_docs.is_empty() {
            return Err(Error::EmptyCollection);
        }
        for (index, doc) in raw_docs.iter().enumerate() {
            if doc.as_ref().is_empty() {
                return Err(Error::EmptyDocument { index });
            }
        }
        let alphabet = Alphabet::from_docs(raw_docs)?;
        let docs = raw_docs
            .iter()
            .map(|d| {
                d.as_ref()
                    .iter()
                    .map(|&b| alphabet.to_internal(b).expect("byte was collected"))
                    .collect()
            })
            .collect();
        Ok(StringCollection { docs, alphabet })
    }

    /// Builds a collection from documents that are already internal ranks.
    pub fn from_internal(docs: Vec<Vec<u8>>, alphabet: Alphabet) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let sigma = alphabet.sigma();
        for (index, doc) in docs.iter().enumerate() {
            if doc.is_empty() {
                return Err(Error::EmptyDocument { index });
            }
            if doc.iter().any(|&s| s == 0 || s > sigma) {
                return Err(Error::corrupt(format!(
                    "document {index} holds a symbol outside 1..={sigma}"
                )));
            }
        }
        Ok(StringCollection { docs, alphabet })
    }

    pub fn docs(&self) -> &[Vec<u8>] {
        &self.docs
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sigma(&self) -> u8 {
        self.alphabet.sigma()
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    /// Total number of document symbols, terminators excluded.
    pub fn symbol_len(&self) -> usize {
        self.docs.iter().map(|d| d.len()).sum()
    }

    /// Total length once one terminator per document is materialized.
    pub fn len_with_terminators(&self) -> usize {
        self.symbol_len() + self.doc_count()
    }

    /// A sub-collection over the same alphabet (so that two halves of a
    /// split remain mergeable).
    pub fn subset(&self, range: std::ops::Range<usize>) -> Result<Self> {
        StringCollection::from_internal(self.docs[range].to_vec(), self.alphabet.clone())
    }

    /// Re-expresses two independently remapped collections over the joint
    /// alphabet of both, so that their indices become mergeable.
    pub fn remap_pair(
        a: &StringCollection,
        b: &StringCollection,
    ) -> Result<(StringCollection, StringCollection)> {
        let raw = |coll: &StringCollection| -> Vec<Vec<u8>> {
            coll.docs()
                .iter()
                .map(|d| d.iter().map(|&s| coll.alphabet().from_internal(s)).collect())
                .collect()
        };
        let raw_a = raw(a);
        let raw_b = raw(b);
        let mut all = raw_a.clone();
        all.extend(raw_b.iter().cloned());
        let alphabet = Alphabet::from_docs(&all)?;
        let encode = |docs: &[Vec<u8>]| -> Vec<Vec<u8>> {
            docs.iter()
                .map(|d| {
                    d.iter()
                        .map(|&byte| alphabet.to_internal(byte).expect("byte was collected"))
                        .collect()
                })
                .collect()
        };
        Ok((
            StringCollection::from_internal(encode(&raw_a), alphabet.clone())?,
            StringCollection::from_internal(encode(&raw_b), alphabet)?,
        ))
    }

    /// Concatenation of two collections over the same alphabet, first one's
    /// documents first.
    pub fn union(&self, other: &StringCollection) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.sigma(),
                right: other.sigma(),
            });
        }
        let mut docs = self.docs.clone();
        docs.extend(other.docs.iter().cloned());
        StringCollection::from_internal(docs, self.alphabet.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remap_two_symbols() {
        let coll = StringCollection::remap(&["ab", "ba"]).unwrap();
        assert_eq!(coll.sigma(), 2);
        assert_eq!(coll.docs(), &[vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn remap_reference_strings() {
        let coll = StringCollection::remap(&["abcab", "aabcabc"]).unwrap();
        assert_eq!(coll.sigma(), 3);
        assert_eq!(coll.docs()[0].len(), 5);
        assert_eq!(coll.docs()[1].len(), 7);
    }

    #[test]
    fn remap_rejects_empty_document() {
        let err = StringCollection::remap(&["ab", ""]).unwrap_err();
        assert!(matches!(err, Error::EmptyDocument { index: 1 }));
    }

    #[test]
    fn alphabet_roundtrip() {
        let coll = StringCollection::remap(&["xbay"]).unwrap();
        let a = coll.alphabet();
        for &b in b"xbay" {
            let r = a.to_internal(b).unwrap();
            assert!(r >= 1 && r <= a.sigma());
            assert_eq!(a.from_internal(r), b);
        }
        assert_eq!(a.to_internal(b'z'), None);
    }

    #[test]
    fn remap_preserves_byte_order() {
        let coll = StringCollection::remap(&["cab"]).unwrap();
        let a = coll.alphabet();
        assert!(a.to_internal(b'a').unwrap() < a.to_internal(b'b').unwrap());
        assert!(a.to_internal(b'b').unwrap() < a.to_internal(b'c').unwrap());
    }
}
