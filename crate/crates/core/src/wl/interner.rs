use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::WlError;

/// Dense color identifier issued by a [`ColorInterner`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u32);

/// A color signature: a tag word followed by the encoded payload.
pub type Signature = Vec<u32>;

/// Bijection between signatures and [`ColorId`]s.
///
/// Ids are handed out in batches. Within a batch the previously unseen
/// signatures are sorted and numbered consecutively, so the ids depend only
/// on the interner state and the *set* of signatures, never on the order in
/// which tuples were visited.
#[derive(Debug, Clone)]
pub struct ColorInterner {
    table: HashMap<Signature, ColorId>,
    next_id: u32,
    limit: u32,
}

impl Default for ColorInterner {
    fn default() -> Self {
        Self::new()
    }
}

impl ColorInterner {
    pub fn new() -> Self {
        Self::with_limit(u32::MAX)
    }

    /// Interner that refuses to issue ids `>= limit`.
    pub fn with_limit(limit: u32) -> Self {
        Self {
            table: HashMap::new(),
            next_id: 0,
            limit,
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn next_id(&self) -> u32 {
        self.next_id
    }

    pub fn lookup(&self, sig: &[u32]) -> Option<ColorId> {
        self.table.get(sig).copied()
    }

    /// Whether `id` has been issued by this interner.
    pub fn issued(&self, id: ColorId) -> bool {
        id.0 < self.next_id
    }

    pub fn intern(&mut self, sig: Signature) -> Result<ColorId, WlError> {
        Ok(self.intern_batch(vec![sig])?[0])
    }

    /// Interns a batch of signatures, returning one id per input in order.
    pub fn intern_batch(&mut self, sigs: Vec<Signature>) -> Result<Vec<ColorId>, WlError> {
        let mut fresh: Vec<&Signature> = sigs
            .iter()
            .filter(|s| !self.table.contains_key(*s))
            .collect();
        fresh.sort_unstable();
        fresh.dedup();
        let needed = fresh.len() as u64;
        if self.next_id as u64 + needed > self.limit as u64 {
            return Err(WlError::InternerExhausted);
        }
        let mut assigned = HashMap::with_capacity(fresh.len());
        for s in fresh {
            assigned.insert(s.clone(), ColorId(self.next_id));
            self.next_id += 1;
        }
        self.table.extend(assigned);
        Ok(sigs.iter().map(|s| self.table[s]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_signatures_share_ids() {
        let mut it = ColorInterner::new();
        let ids = it
            .intern_batch(vec![vec![3, 1], vec![1, 2], vec![3, 1]])
            .unwrap();
        assert_eq!(ids[0], ids[2]);
        assert_ne!(ids[0], ids[1]);
        assert_eq!(it.intern(vec![1, 2]).unwrap(), ids[1]);
        assert_eq!(it.len(), 2);
    }

    #[test]
    fn batch_ids_follow_signature_order() {
        let mut a = ColorInterner::new();
        let mut b = ColorInterner::new();
        let x = a.intern_batch(vec![vec![9], vec![2], vec![5]]).unwrap();
        let y = b.intern_batch(vec![vec![5], vec![9], vec![2]]).unwrap();
        assert_eq!(x, vec![ColorId(2), ColorId(0), ColorId(1)]);
        assert_eq!(y, vec![ColorId(1), ColorId(2), ColorId(0)]);
    }

    #[test]
    fn exhaustion_is_detected() {
        let mut it = ColorInterner::with_limit(2);
        it.intern_batch(vec![vec![0], vec![1]]).unwrap();
        assert_eq!(it.intern(vec![0]).unwrap(), ColorId(0));
        assert!(matches!(
            it.intern(vec![7]),
            Err(WlError::InternerExhausted)
        ));
    }
}
