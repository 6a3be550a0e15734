//! Data-parallel building blocks: array scan, list ranking and list scan,
//! segmented reduction, a min/max range index, and pointer-jumping levels.
//!
//! Every function here produces the same output for any rayon worker
//! count. Chunking is fixed by input size, never by thread count.

use std::sync::atomic::{AtomicI64, AtomicU32, Ordering};

use rand_core::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, RootedTree, NONE};

/// Inputs at most this long are scanned sequentially.
const SCAN_BLOCK: usize = 1 << 14;

/// Exclusive prefix combine: `out[0] = identity`,
/// `out[i] = combine(out[i-1], values[i-1])`.
pub fn exclusive_scan<T, F>(values: &[T], identity: T, combine: F) -> Vec<T>
where
    T: Copy + Send + Sync,
    F: Fn(T, T) -> T + Sync,
{
    if values.len() <= SCAN_BLOCK {
        let mut acc = identity;
        return values
            .iter()
            .map(|&v| {
                let out = acc;
                acc = combine(acc, v);
                out
            })
            .collect();
    }
    let totals: Vec<T> = values
        .par_chunks(SCAN_BLOCK)
        .map(|c| c.iter().fold(identity, |a, &b| combine(a, b)))
        .collect();
    let mut acc = identity;
    let carry: Vec<T> = totals
        .iter()
        .map(|&t| {
            let out = acc;
            acc = combine(acc, t);
            out
        })
        .collect();
    let mut out = vec![identity; values.len()];
    out.par_chunks_mut(SCAN_BLOCK)
        .zip(values.par_chunks(SCAN_BLOCK))
        .zip(carry.par_iter())
        .for_each(|((dst, src), &start)| {
            let mut acc = start;
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = acc;
                acc = combine(acc, s);
            }
        });
    out
}

/// Splits `data` into the mutable segments delimited by `offsets`
/// (`offsets[0] = 0`, last entry `<= data.len()`).
pub(crate) fn split_segments_mut<'a, T>(mut data: &'a mut [T], offsets: &[usize]) -> Vec<&'a mut [T]> {
    let mut out = Vec::with_capacity(offsets.len().saturating_sub(1));
    for w in offsets.windows(2) {
        let (seg, rest) = data.split_at_mut(w[1] - w[0]);
        out.push(seg);
        data = rest;
    }
    out
}

/// End-of-list marker in [`ListArray::succ`].
pub const TAIL: u32 = u32::MAX;

/// Singly linked list stored as a successor array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListArray {
    pub succ: Vec<u32>,
    pub head: u32,
}

impl ListArray {
    pub fn new(succ: Vec<u32>, head: u32) -> Self {
        Self { succ, head }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }
}

const UNCLAIMED: u32 = u32::MAX;

/// Average sublist length targeted by the splitter sampling.
const SUBLIST_TARGET: usize = 1024;

/// Fixed seed for splitter selection; any seed gives the same ranks.
const SPLITTER_SEED: u64 = 0x6575_6c65_7274_6f75;

fn check_list(list: &ListArray) -> Result<()> {
    let k = list.len();
    if k == 0 {
        return Ok(());
    }
    if list.head as usize >= k {
        return Err(Error::BrokenList(format!("head {} outside [0, {k})", list.head)));
    }
    if let Some(i) = list.succ.par_iter().position_any(|&s| s != TAIL && s as usize >= k) {
        return Err(Error::BrokenList(format!("successor of {i} is out of range")));
    }
    Ok(())
}

/// Sublist-sampling prefix sums over a linked list in the Wei-JaJa
/// style. Returns, for every element, the sum of `weight` over the
/// elements strictly before it.
fn sampled_prefix<W>(list: &ListArray, weight: W) -> Result<Vec<i64>>
where
    W: Fn(usize) -> i64 + Sync,
{
    check_list(list)?;
    let k = list.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let succ = &list.succ;

    let want = k.div_ceil(SUBLIST_TARGET).max(1);
    let mut splitter_of = vec![NONE; k];
    let mut splitters = vec![list.head];
    splitter_of[list.head as usize] = 0;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(SPLITTER_SEED);
    for _ in 1..want {
        let c = crate::generators::uniform_below(&mut rng, k as u64) as usize;
        if splitter_of[c] == NONE {
            splitter_of[c] = splitters.len() as u32;
            splitters.push(c as u32);
        }
    }

    let owner: Vec<AtomicU32> = (0..k).map(|_| AtomicU32::new(UNCLAIMED)).collect();
    let local: Vec<AtomicI64> = (0..k).map(|_| AtomicI64::new(0)).collect();

    // (sublist weight, element count, following sublist)
    let sublists: Vec<(i64, usize, u32)> = splitters
        .par_iter()
        .enumerate()
        .map(|(j, &start)| {
            let mut cur = start as usize;
            let mut acc = 0i64;
            let mut count = 0usize;
            loop {
                if owner[cur]
                    .compare_exchange(UNCLAIMED, j as u32, Ordering::Relaxed, Ordering::Relaxed)
                    .is_err()
                {
                    return Err(Error::BrokenList(format!("element {cur} reached twice")));
                }
                local[cur].store(acc, Ordering::Relaxed);
                acc += weight(cur);
                count += 1;
                let nxt = succ[cur];
                if nxt == TAIL {
                    return Ok((acc, count, NONE));
                }
                if splitter_of[nxt as usize] != NONE {
                    return Ok((acc, count, splitter_of[nxt as usize]));
                }
                if count > k {
                    return Err(Error::BrokenList("cycle detected".into()));
                }
                cur = nxt as usize;
            }
        })
        .collect::<Result<_>>()?;

    let mut offset = vec![0i64; sublists.len()];
    let mut cur = 0u32;
    let mut acc = 0i64;
    let mut seen_elements = 0usize;
    let mut hops = 0usize;
    while cur != NONE {
        hops += 1;
        if hops > sublists.len() {
            return Err(Error::BrokenList("cycle detected".into()));
        }
        let (w, count, next) = sublists[cur as usize];
        offset[cur as usize] = acc;
        acc += w;
        seen_elements += count;
        cur = next;
    }
    if seen_elements != k {
        return Err(Error::BrokenList(format!(
            "{} of {k} elements unreachable from the head",
            k - seen_elements
        )));
    }

    Ok(owner
        .par_iter()
        .zip(local.par_iter())
        .map(|(o, l)| offset[o.load(Ordering::Relaxed) as usize] + l.load(Ordering::Relaxed))
        .collect())
}

fn sequential_prefix<W: Fn(usize) -> i64>(list: &ListArray, weight: W) -> Result<Vec<i64>> {
    check_list(list)?;
    let k = list.len();
    let mut out = vec![0i64; k];
    if k == 0 {
        return Ok(out);
    }
    let mut seen = vec![false; k];
    let mut cur = list.head;
    let mut acc = 0;
    let mut count = 0;
    while cur != TAIL {
        if seen[cur as usize] {
            return Err(Error::BrokenList("cycle detected".into()));
        }
        seen[cur as usize] = true;
        out[cur as usize] = acc;
        acc += weight(cur as usize);
        count += 1;
        cur = list.succ[cur as usize];
    }
    if count != k {
        return Err(Error::BrokenList(format!("{} of {k} elements unreachable from the head", k - count)));
    }
    Ok(out)
}

/// Distance of every element from the head.
pub fn list_rank(list: &ListArray) -> Result<Vec<u32>> {
    Ok(sampled_prefix(list, |_| 1)?.into_iter().map(|r| r as u32).collect())
}

/// Single-pass reference implementation of [`list_rank`].
pub fn list_rank_sequential(list: &ListArray) -> Result<Vec<u32>> {
    Ok(sequential_prefix(list, |_| 1)?.into_iter().map(|r| r as u32).collect())
}

/// Exclusive prefix sums of `values` taken in list order.
pub fn list_scan(list: &ListArray, values: &[i64]) -> Result<Vec<i64>> {
    assert_eq!(values.len(), list.len(), "values must align with list elements");
    sampled_prefix(list, |i| values[i])
}

pub fn list_scan_sequential(list: &ListArray, values: &[i64]) -> Result<Vec<i64>> {
    assert_eq!(values.len(), list.len(), "values must align with list elements");
    sequential_prefix(list, |i| values[i])
}

/// Folds each segment `values[offsets[s]..offsets[s+1]]`; empty segments
/// yield `identity`.
pub fn segmented_reduce<T, F>(values: &[T], offsets: &[usize], identity: T, combine: F) -> Vec<T>
where
    T: Copy + Send + Sync,
    F: Fn(T, T) -> T + Sync,
{
    debug_assert_eq!(offsets.last().copied().unwrap_or(0), values.len());
    offsets
        .par_windows(2)
        .map(|w| values[w[0]..w[1]].iter().fold(identity, |a, &b| combine(a, b)))
        .collect()
}

/// Bottom-up binary segment tree, padded to a power of two, answering
/// inclusive range minimum and maximum queries.
#[derive(Clone, Debug)]
pub struct RangeIndex {
    len: usize,
    cap: usize,
    min: Vec<i64>,
    max: Vec<i64>,
}

impl RangeIndex {
    pub fn build(keys: &[i64]) -> Self {
        let len = keys.len();
        let cap = len.next_power_of_two().max(1);
        let mut min = vec![i64::MAX; 2 * cap];
        let mut max = vec![i64::MIN; 2 * cap];
        min[cap..cap + len].copy_from_slice(keys);
        max[cap..cap + len].copy_from_slice(keys);
        fill_levels(&mut min, cap, i64::min);
        fill_levels(&mut max, cap, i64::max);
        Self { len, cap, min, max }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn check(&self, l: usize, r: usize) -> Result<()> {
        if l > r || r >= self.len {
            return Err(Error::RangeOutOfBounds { l, r, len: self.len });
        }
        Ok(())
    }

    fn fold(tree: &[i64], cap: usize, l: usize, r: usize, init: i64, pick: fn(i64, i64) -> i64) -> i64 {
        let (mut lo, mut hi) = (l + cap, r + cap + 1);
        let mut acc = init;
        while lo < hi {
            if lo & 1 == 1 {
                acc = pick(acc, tree[lo]);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                acc = pick(acc, tree[hi]);
            }
            lo >>= 1;
            hi >>= 1;
        }
        acc
    }

    pub fn min(&self, l: usize, r: usize) -> Result<i64> {
        self.check(l, r)?;
        Ok(self.min_unchecked(l, r))
    }

    pub fn max(&self, l: usize, r: usize) -> Result<i64> {
        self.check(l, r)?;
        Ok(self.max_unchecked(l, r))
    }

    pub(crate) fn min_unchecked(&self, l: usize, r: usize) -> i64 {
        Self::fold(&self.min, self.cap, l, r, i64::MAX, i64::min)
    }

    pub(crate) fn max_unchecked(&self, l: usize, r: usize) -> i64 {
        Self::fold(&self.max, self.cap, l, r, i64::MIN, i64::max)
    }
}

fn fill_levels(tree: &mut [i64], cap: usize, pick: fn(i64, i64) -> i64) {
    let mut width = cap;
    while width > 1 {
        let half = width / 2;
        let (upper, lower) = tree.split_at_mut(width);
        upper[half..]
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, slot)| *slot = pick(lower[2 * i], lower[2 * i + 1]));
        width = half;
    }
}

const UNKNOWN: u32 = u32::MAX;

/// Pointer jumps taken per node between global synchronization rounds.
const JUMPS_PER_ROUND: usize = 5;

/// Node depths by ancestor-pointer doubling. A node's level becomes known
/// once its ancestor pointer lands on a node whose level is known.
pub fn ancestor_doubling_levels(tree: &RootedTree) -> Vec<u32> {
    let root = tree.root() as usize;
    let mut anc: Vec<NodeId> = tree.parents().to_vec();
    anc[root] = root as NodeId;
    let mut dist: Vec<u32> = vec![1; tree.len()];
    dist[root] = 0;
    let mut level = vec![UNKNOWN; tree.len()];
    level[root] = 0;

    loop {
        let pending = level.par_iter().any(|&l| l == UNKNOWN);
        if !pending {
            return level;
        }
        let next: Vec<(NodeId, u32, u32)> = (0..tree.len())
            .into_par_iter()
            .map(|v| {
                if level[v] != UNKNOWN {
                    return (anc[v], dist[v], level[v]);
                }
                let (mut a, mut d) = (anc[v], dist[v]);
                for _ in 0..JUMPS_PER_ROUND {
                    if level[a as usize] != UNKNOWN {
                        break;
                    }
                    d += dist[a as usize];
                    a = anc[a as usize];
                }
                let known = level[a as usize];
                (a, d, if known == UNKNOWN { UNKNOWN } else { known + d })
            })
            .collect();
        for (v, (a, d, l)) in next.into_iter().enumerate() {
            anc[v] = a;
            dist[v] = d;
            level[v] = l;
        }
    }
}
