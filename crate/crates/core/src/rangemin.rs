//! Two-level range-minimum index over a fixed point set.
//!
//! The primary tree is a segment tree over α-ranks. Each primary node keeps the
//! points below it sorted by β-rank and a bottom-up min tree of `(value, id)` over
//! that order. Positions are carried from parent to child with per-node prefix
//! counts, so only the root list is ever searched. Values change, coordinates never do.

use thiserror::Error;

/// Value that never wins a query.
pub const INF: i64 = i64::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RangeMinError {
    #[error("rank {0} used twice on one axis")]
    DuplicateRank(u32),
    #[error("unknown point id {0}")]
    UnknownId(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub id: u32,
    pub alpha: u32,
    pub beta: u32,
    pub value: i64,
}

const NO_SLOT: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct RangeMinIndex {
    size: usize,
    /// Per primary node: offset of its list and number of points.
    span: Vec<(u32, u32)>,
    /// β-ranks of the root list.
    root_betas: Vec<u32>,
    /// Per primary node, `len + 1` prefix counts of points that belong to the left child,
    /// stored at `offset + node - 1`.
    left: Vec<u32>,
    /// Secondary min trees, two slots per point per primary node, at `2 * offset`.
    tree: Vec<(i64, u32)>,
    slot: Vec<u32>,
    alpha: Vec<u32>,
    root_pos: Vec<u32>,
    value: Vec<i64>,
    active: Vec<bool>,
}

impl RangeMinIndex {
    pub fn build(entries: &[Entry]) -> Result<Self, RangeMinError> {
        let max_alpha = entries.iter().map(|e| e.alpha).max().unwrap_or(0) as usize;
        let max_id = entries
            .iter()
            .map(|e| e.id)
            .max()
            .map_or(0, |m| m as usize + 1);
        let size = (max_alpha + 1).next_power_of_two();

        let mut slot = vec![NO_SLOT; max_id];
        let mut by_alpha = vec![NO_SLOT; size];
        let mut seen_beta = std::collections::HashSet::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if by_alpha[e.alpha as usize] != NO_SLOT {
                return Err(RangeMinError::DuplicateRank(e.alpha));
            }
            if !seen_beta.insert(e.beta) {
                return Err(RangeMinError::DuplicateRank(e.beta));
            }
            by_alpha[e.alpha as usize] = i as u32;
            slot[e.id as usize] = i as u32;
        }
        let alpha: Vec<u32> = entries.iter().map(|e| e.alpha).collect();
        let beta: Vec<u32> = entries.iter().map(|e| e.beta).collect();
        let value: Vec<i64> = entries.iter().map(|e| e.value).collect();

        // Merge sort bottom-up; node v covers leaves [lo, hi).
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); 2 * size];
        let mut from_left: Vec<Vec<bool>> = vec![Vec::new(); 2 * size];
        for a in 0..size {
            if by_alpha[a] != NO_SLOT {
                lists[size + a].push(by_alpha[a]);
            }
        }
        for v in (1..size).rev() {
            let (l, r) = (&lists[2 * v], &lists[2 * v + 1]);
            let mut merged = Vec::with_capacity(l.len() + r.len());
            let mut side = Vec::with_capacity(l.len() + r.len());
            let (mut i, mut j) = (0, 0);
            while i < l.len() || j < r.len() {
                if j == r.len() || (i < l.len() && beta[l[i] as usize] < beta[r[j] as usize]) {
                    merged.push(l[i]);
                    side.push(true);
                    i += 1;
                } else {
                    merged.push(r[j]);
                    side.push(false);
                    j += 1;
                }
            }
            lists[v] = merged;
            from_left[v] = side;
        }
        let mut span = vec![(0u32, 0u32); 2 * size];
        let mut left = Vec::new();
        let mut tree = Vec::new();
        let mut off = 0usize;
        for v in 1..2 * size {
            let list = &lists[v];
            span[v] = (off as u32, list.len() as u32);
            let mut count = 0u32;
            left.push(0);
            for i in 0..list.len() {
                count += u32::from(from_left[v].get(i).copied().unwrap_or(false));
                left.push(count);
            }
            let base = tree.len();
            tree.resize(base + 2 * list.len(), (INF, u32::MAX));
            for (i, &p) in list.iter().enumerate() {
                tree[base + list.len() + i] = (value[p as usize], entries[p as usize].id);
            }
            for i in (1..list.len()).rev() {
                tree[base + i] = tree[base + 2 * i].min(tree[base + 2 * i + 1]);
            }
            off += list.len();
        }
        let mut root_pos = vec![0u32; entries.len()];
        for (i, &p) in lists[1].iter().enumerate() {
            root_pos[p as usize] = i as u32;
        }
        let root_betas = lists[1].iter().map(|&p| beta[p as usize]).collect();
        Ok(RangeMinIndex {
            size,
            span,
            root_betas,
            left,
            tree,
            slot,
            alpha,
            root_pos,
            value,
            active: vec![true; entries.len()],
        })
    }

    fn slot_of(&self, id: u32) -> Result<usize, RangeMinError> {
        match self.slot.get(id as usize) {
            Some(&s) if s != NO_SLOT => Ok(s as usize),
            _ => Err(RangeMinError::UnknownId(id)),
        }
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn value(&self, id: u32) -> Result<i64, RangeMinError> {
        Ok(self.value[self.slot_of(id)?])
    }

    pub fn is_active(&self, id: u32) -> Result<bool, RangeMinError> {
        Ok(self.active[self.slot_of(id)?])
    }

    /// Prefix count of left-child points among the first `i` points of node `v`.
    fn left_prefix(&self, v: usize, i: usize) -> usize {
        self.left[self.span[v].0 as usize + v - 1 + i] as usize
    }

    fn write(&mut self, s: usize, id: u32) {
        let key = (if self.active[s] { self.value[s] } else { INF }, id);
        let a = self.alpha[s] as usize;
        let (mut v, mut lo, mut hi) = (1usize, 0usize, self.size);
        let mut pos = self.root_pos[s] as usize;
        loop {
            let (off, len) = self.span[v];
            let (off, len) = (off as usize, len as usize);
            let base = 2 * off;
            let mut i = len + pos;
            self.tree[base + i] = key;
            while i > 1 {
                i /= 2;
                self.tree[base + i] = self.tree[base + 2 * i].min(self.tree[base + 2 * i + 1]);
            }
            if hi - lo == 1 {
                break;
            }
            let mid = (lo + hi) / 2;
            let before = self.left_prefix(v, pos);
            if a < mid {
                pos = before;
                v *= 2;
                hi = mid;
            } else {
                pos -= before;
                v = 2 * v + 1;
                lo = mid;
            }
        }
    }

    pub fn update(&mut self, id: u32, new_value: i64) -> Result<(), RangeMinError> {
        let s = self.slot_of(id)?;
        self.value[s] = new_value;
        if self.active[s] {
            self.write(s, id);
        }
        Ok(())
    }

    pub fn deactivate(&mut self, id: u32) -> Result<(), RangeMinError> {
        let s = self.slot_of(id)?;
        if self.active[s] {
            self.active[s] = false;
            self.write(s, id);
        }
        Ok(())
    }

    pub fn reactivate(&mut self, id: u32) -> Result<(), RangeMinError> {
        let s = self.slot_of(id)?;
        if !self.active[s] {
            self.active[s] = true;
            self.write(s, id);
        }
        Ok(())
    }

    /// Minimum over positions `[l, r)` of node `v`'s list.
    fn node_min(&self, v: usize, l: usize, r: usize, best: &mut (i64, u32)) {
        let (off, len) = self.span[v];
        let (off, len) = (off as usize, len as usize);
        let base = 2 * off;
        let (mut l, mut r) = (l + len, r + len);
        while l < r {
            if l & 1 == 1 {
                *best = (*best).min(self.tree[base + l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                *best = (*best).min(self.tree[base + r]);
            }
            l /= 2;
            r /= 2;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        v: usize,
        lo: usize,
        hi: usize,
        a_lo: usize,
        a_hi: usize,
        l: usize,
        r: usize,
        best: &mut (i64, u32),
    ) {
        if l >= r || hi <= a_lo || lo > a_hi {
            return;
        }
        if a_lo <= lo && hi - 1 <= a_hi {
            self.node_min(v, l, r, best);
            return;
        }
        let mid = (lo + hi) / 2;
        let (bl, br) = (self.left_prefix(v, l), self.left_prefix(v, r));
        self.descend(2 * v, lo, mid, a_lo, a_hi, bl, br, best);
        self.descend(2 * v + 1, mid, hi, a_lo, a_hi, l - bl, r - br, best);
    }

    /// Minimum active `(id, value)` in the closed rectangle, ties to the smallest id.
    pub fn query_min(&self, a_lo: u32, a_hi: u32, b_lo: u32, b_hi: u32) -> Option<(u32, i64)> {
        if a_lo > a_hi || b_lo > b_hi || a_lo as usize >= self.size {
            return None;
        }
        let l = self.root_betas.partition_point(|&x| x < b_lo);
        let r = self.root_betas.partition_point(|&x| x <= b_hi);
        let mut best = (INF, u32::MAX);
        self.descend(
            1,
            0,
            self.size,
            a_lo as usize,
            a_hi as usize,
            l,
            r,
            &mut best,
        );
        (best.0 != INF).then_some((best.1, best.0))
    }
}
