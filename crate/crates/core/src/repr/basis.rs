use std::collections::HashMap;

use crate::error::ReprError;

/// Upper limit on the number of basis vectors of a truncated space.
pub const MAX_BASIS: usize = 4_000_000;

/// Multi-indices `m ∈ ℤ_+^d` with `|m| ≤ truncation`, enumerated level by
/// level; within a level, lexicographically descending.
#[derive(Debug, Clone)]
pub struct SimplexBasis {
    vars: usize,
    truncation: usize,
    elems: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

/// `C(truncation + vars, vars)`, saturating.
pub fn simplex_count(vars: usize, truncation: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 1..=vars as u128 {
        acc = acc.saturating_mul(truncation as u128 + i) / i;
    }
    acc
}

impl SimplexBasis {
    pub fn new(vars: usize, truncation: usize) -> Result<Self, ReprError> {
        Self::with_multiplicity(vars, truncation, 1)
    }

    /// Validates that `count · multiplicity` fits under [`MAX_BASIS`].
    pub fn with_multiplicity(vars: usize, truncation: usize, multiplicity: usize) -> Result<Self, ReprError> {
        let count = simplex_count(vars, truncation).saturating_mul(multiplicity as u128);
        if count > MAX_BASIS as u128 {
            return Err(ReprError::TooLarge { count, limit: MAX_BASIS });
        }
        let mut elems = Vec::new();
        let mut cur = vec![0u32; vars];
        for level in 0..=truncation {
            push_level(&mut elems, &mut cur, 0, level as u32);
        }
        let lookup = elems.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(SimplexBasis { vars, truncation, elems, lookup })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.elems[i]
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    pub fn level(&self, i: usize) -> usize {
        self.elems[i].iter().map(|&x| x as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.elems.iter().map(Vec::as_slice)
    }
}

fn push_level(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, slot: usize, remaining: u32) {
    if cur.is_empty() {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if slot + 1 == cur.len() {
        cur[slot] = remaining;
        out.push(cur.clone());
        cur[slot] = 0;
        return;
    }
    for v in (0..=remaining).rev() {
        cur[slot] = v;
        push_level(out, cur, slot + 1, remaining - v);
    }
    cur[slot] = 0;
}
