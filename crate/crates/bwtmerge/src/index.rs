//! Core index value types: multi-string BWT, LCP array, and the aggregate
//! statistics reported for them.

use crate::error::{Error, Result};

/// Multi-string Burrows-Wheeler transform of a document collection.
///
/// `symbols` is a permutation of the collection symbols plus one rank-0
/// terminator per document. `sentinel_ids[i]` is the document ordinal of the
/// i-th rank-0 occurrence in array order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiBwt {
    symbols: Vec<u8>,
    sentinel_ids: Vec<u32>,
    sigma: u8,
}

impl MultiBwt {
    pub fn new(symbols: Vec<u8>, sentinel_ids: Vec<u32>, sigma: u8) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let zeros = symbols.iter().filter(|&&s| s == 0).count();
        if zeros != sentinel_ids.len() {
            return Err(Error::corrupt(format!(
                "{zeros} terminator symbols but {} sentinel ids",
                sentinel_ids.len()
            )));
        }
        if zeros == 0 {
            return Err(Error::corrupt("no terminator symbols"));
        }
        let mut seen = vec![false; zeros];
        for &id in &sentinel_ids {
            let slot = seen
                .get_mut(id as usize)
                .ok_or_else(|| Error::corrupt(format!("sentinel id {id} out of range")))?;
            if *slot {
                return Err(Error::corrupt(format!("sentinel id {id} repeated")));
            }
            *slot = true;
        }
        if symbols.iter().any(|&s| s > sigma) {
            return Err(Error::corrupt(format!("symbol above sigma={sigma}")));
        }
        Ok(MultiBwt {
            symbols,
            sentinel_ids,
            sigma,
        })
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn sentinel_ids(&self) -> &[u32] {
        &self.sentinel_ids
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    /// Number of documents.
    pub fn doc_count(&self) -> usize {
        self.sentinel_ids.len()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Occurrence counts per symbol, index 0 counting the terminators.
    pub fn symbol_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.sigma as usize + 1];
        for &s in &self.symbols {
            counts[s as usize] += 1;
        }
        counts
    }
}

/// LCP array with `-1` guard entries at both ends.
///
/// For an index of length `n` the array holds `n + 1` values: the guards at
/// positions `0` and `n`, and the interior entries `1..n` where entry `i` is
/// the longest common prefix of the contexts ranked `i - 1` and `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpArray {
    values: Vec<i64>,
}

impl LcpArray {
    /// Builds the array from its interior values for an index of length
    /// `interior.len() + 1`.
    pub fn from_interior(interior: Vec<i64>) -> Result<Self> {
        let n = interior.len() + 1;
        if interior.iter().any(|&v| v < 0 || v >= n as i64) {
            return Err(Error::corrupt("interior LCP value out of range"));
        }
        let mut values = Vec::with_capacity(n + 1);
        values.push(-1);
        values.extend(interior);
        values.push(-1);
        Ok(LcpArray { values })
    }

    /// Length of the index the array describes.
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// All `n + 1` values including the guards.
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// The `n - 1` interior values.
    pub fn interior(&self) -> &[i64] {
        &self.values[1..self.values.len() - 1]
    }

    pub fn max_lcp(&self) -> u64 {
        self.interior().iter().copied().max().unwrap_or(0).max(0) as u64
    }
}

/// Maximum and average of a nonnegative per-position quantity, with the
/// average kept as an exact numerator/denominator pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AggregateStat {
    pub max: u64,
    pub sum: u64,
    pub denom: u64,
}

impl AggregateStat {
    pub fn average(&self) -> f64 {
        if self.denom == 0 {
            0.0
        } else {
            self.sum as f64 / self.denom as f64
        }
    }
}

/// Max/average LCP of an index. The average divides by the index length.
pub fn lcp_stats(lcp: &LcpArray) -> AggregateStat {
    AggregateStat {
        max: lcp.max_lcp(),
        sum: lcp.interior().iter().map(|&v| v.max(0) as u64).sum(),
        denom: lcp.n() as u64,
    }
}

/// Statistics families an index report may carry.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct IndexStats {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lcp: Option<AggregateStat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trie_height: Option<AggregateStat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circular_lcp: Option<AggregateStat>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcp_array_guards() {
        let lcp = LcpArray::from_interior(vec![0, 2, 1]).unwrap();
        assert_eq!(lcp.n(), 4);
        assert_eq!(lcp.values(), &[-1, 0, 2, 1, -1]);
        assert_eq!(lcp.interior(), &[0, 2, 1]);
        assert_eq!(lcp.max_lcp(), 2);
    }

    #[test]
    fn lcp_array_rejects_out_of_range() {
        assert!(LcpArray::from_interior(vec![0, 4]).is_err());
        assert!(LcpArray::from_interior(vec![-1]).is_err());
    }

    #[test]
    fn stats_all_zero_interior() {
        let lcp = LcpArray::from_interior(vec![0, 0, 0]).unwrap();
        let s = lcp_stats(&lcp);
        assert_eq!(s.max, 0);
        assert_eq!(s.sum, 0);
        assert_eq!(s.average(), 0.0);
    }

    #[test]
    fn multibwt_validates_sentinels() {
        assert!(MultiBwt::new(vec![1, 0, 1], vec![0], 1).is_ok());
        assert!(MultiBwt::new(vec![1, 0, 1], vec![], 1).is_err());
        assert!(MultiBwt::new(vec![1, 0, 0], vec![0, 0], 1).is_err());
        assert!(MultiBwt::new(vec![1, 0, 2], vec![0], 1).is_err());
    }
}
