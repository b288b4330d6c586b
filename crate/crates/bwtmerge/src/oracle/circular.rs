//! Rotation order, circular transform and circular LCP by enumeration.

use std::cmp::Ordering;

use crate::alphabet::StringCollection;
use crate::error::{Error, Result};
use crate::index::LcpArray;
use crate::merge_circular::{Cbwt, CircularMode, LengthStructure};

/// Compares the infinite periodic extensions of two nonempty strings.
///
/// Returns the ordering together with the number of matching symbols before
/// the first mismatch. If no mismatch exists within `|t| + |s| - gcd(|t|,|s|)`
/// positions the extensions are equal and that bound is returned as the
/// match count.
pub fn inf_cmp(t: &[u8], s: &[u8]) -> (Ordering, u64) {
    assert!(!t.is_empty() && !s.is_empty());
    let bound = t.len() + s.len() - gcd(t.len(), s.len());
    for i in 0..bound {
        let a = t[i % t.len()];
        let b = s[i % s.len()];
        if a != b {
            return (a.cmp(&b), i as u64);
        }
    }
    (Ordering::Equal, bound as u64)
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks that every document is primitive and that no document is a
/// rotation of another document in the same collection.
pub fn validate_circular(coll: &StringCollection) -> Result<()> {
    for (index, doc) in coll.docs().iter().enumerate() {
        for shift in 1..doc.len() {
            if rotation_eq(doc, doc, shift) {
                return Err(Error::NotPrimitive { index, shift });
            }
        }
    }
    for i in 0..coll.docs().len() {
        for j in i + 1..coll.docs().len() {
            if is_rotation_of(&coll.docs()[j], &coll.docs()[i]) {
                return Err(Error::RotationDuplicate {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(())
}

fn rotation_eq(a: &[u8], b: &[u8], shift: usize) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| a[i] == b[(i + shift) % b.len()])
}

fn is_rotation_of(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|shift| rotation_eq(a, b, shift))
}

/// One rotation of one document.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub doc: u32,
    pub offset: u32,
}

/// All rotations of the collection's rotating units ranked under the
/// infinite-extension order.
///
/// In permuterm mode the rotating unit of each document is the document with
/// the rank-0 terminator appended, which makes every unit primitive.
pub struct CircularSuffixArrayView {
    rotations: Vec<Rotation>,
    units: Vec<Vec<u8>>,
}

impl CircularSuffixArrayView {
    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    /// The rotating unit (document, plus terminator in permuterm mode).
    pub fn unit(&self, doc: u32) -> &[u8] {
        &self.units[doc as usize]
    }

    /// Materializes the rotation's symbols starting at its offset.
    pub fn rotation_symbols(&self, rot: Rotation) -> Vec<u8> {
        let unit = &self.units[rot.doc as usize];
        let mut out = Vec::with_capacity(unit.len());
        out.extend_from_slice(&unit[rot.offset as usize..]);
        out.extend_from_slice(&unit[..rot.offset as usize]);
        out
    }
}

fn rotating_units(coll: &StringCollection, mode: CircularMode) -> Result<Vec<Vec<u8>>> {
    match mode {
        CircularMode::Circular => {
            validate_circular(coll)?;
            Ok(coll.docs().to_vec())
        }
        CircularMode::Permuterm => {
            // the unique terminator makes every unit primitive; equal
            // documents would still collide
            for i in 0..coll.docs().len() {
                for j in i + 1..coll.docs().len() {
                    if coll.docs()[i] == coll.docs()[j] {
                        return Err(Error::RotationDuplicate {
                            first: i,
                            second: j,
                        });
                    }
                }
            }
            Ok(coll
                .docs()
                .iter()
                .map(|d| {
                    let mut unit = d.clone();
                    unit.push(0);
                    unit
                })
                .collect())
        }
    }
}

pub fn csa_build(coll: &StringCollection, mode: CircularMode) -> Result<CircularSuffixArrayView> {
    let units = rotating_units(coll, mode)?;
    let mut rotations = Vec::new();
    for (doc, unit) in units.iter().enumerate() {
        for offset in 0..unit.len() {
            rotations.push(Rotation {
                doc: doc as u32,
                offset: offset as u32,
            });
        }
    }
    let materialized: Vec<Vec<u8>> = rotations
        .iter()
        .map(|&r| {
            let unit = &units[r.doc as usize];
            let mut v = Vec::with_capacity(unit.len());
            v.extend_from_slice(&unit[r.offset as usize..]);
            v.extend_from_slice(&unit[..r.offset as usize]);
            v
        })
        .collect();
    let mut order: Vec<usize> = (0..rotations.len()).collect();
    order.sort_by(|&a, &b| inf_cmp(&materialized[a], &materialized[b]).0);
    for w in order.windows(2) {
        if inf_cmp(&materialized[w[0]], &materialized[w[1]]).0 == Ordering::Equal {
            return Err(Error::corrupt(
                "two rotations share an infinite extension after validation",
            ));
        }
    }
    Ok(CircularSuffixArrayView {
        rotations: order.into_iter().map(|i| rotations[i]).collect(),
        units,
    })
}

/// Circular transform plus the per-position length structure.
pub fn cbwt_build(coll: &StringCollection, mode: CircularMode) -> Result<(Cbwt, LengthStructure)> {
    let view = csa_build(coll, mode)?;
    let mut symbols = Vec::with_capacity(view.len());
    let mut doc_of = Vec::with_capacity(view.len());
    for &rot in view.rotations() {
        let unit = view.unit(rot.doc);
        let prev = (rot.offset as usize + unit.len() - 1) % unit.len();
        symbols.push(unit[prev]);
        doc_of.push(rot.doc);
    }
    let unit_lens: Vec<u32> = view.units.iter().map(|u| u.len() as u32).collect();
    let lengths = LengthStructure::from_raw(doc_of, &unit_lens);
    let cbwt = Cbwt::new(symbols, coll.sigma(), mode)?;
    Ok((cbwt, lengths))
}

/// Circular LCP array: match counts of the infinite-extension comparison
/// between consecutive rotations, with the usual guard entries.
pub fn clcp_build(coll: &StringCollection, mode: CircularMode) -> Result<LcpArray> {
    let view = csa_build(coll, mode)?;
    let mut interior = Vec::with_capacity(view.len().saturating_sub(1));
    for w in view.rotations().windows(2) {
        let a = view.rotation_symbols(w[0]);
        let b = view.rotation_symbols(w[1]);
        interior.push(inf_cmp(&a, &b).1 as i64);
    }
    // distinct rotations mismatch strictly before |a| + |b| - gcd <= n, so
    // the interior range check holds
    LcpArray::from_interior(interior)
}

/// Union of two circular collections with collection-1 documents dropped
/// when they are rotations (permuterm: duplicates) of a collection-0
/// document.
pub fn circular_union_dedup(
    c0: &StringCollection,
    c1: &StringCollection,
    mode: CircularMode,
) -> Result<StringCollection> {
    let mut docs = c0.docs().to_vec();
    for doc in c1.docs() {
        let dup = c0.docs().iter().any(|d| match mode {
            CircularMode::Circular => is_rotation_of(doc, d),
            CircularMode::Permuterm => doc == d,
        });
        if !dup {
            docs.push(doc.clone());
        }
    }
    StringCollection::from_internal(docs, c0.alphabet().clone())
}
