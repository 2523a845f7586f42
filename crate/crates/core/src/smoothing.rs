//! Kauffman states, smoothed diagrams, enhanced states and integer chains.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::Diagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    A,
    B,
}

/// A labelling of every crossing by A or B, stored as a bitmask with bit `x`
/// set when crossing `x` carries a B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KauffmanState {
    bits: u64,
    n: usize,
}

impl KauffmanState {
    pub fn all_a(n: usize) -> Self {
        KauffmanState { bits: 0, n }
    }

    pub fn all_b(n: usize) -> Self {
        KauffmanState {
            bits: low_mask(n),
            n,
        }
    }

    pub fn from_bits(bits: u64, n: usize) -> Self {
        debug_assert_eq!(bits & !low_mask(n), 0);
        KauffmanState { bits, n }
    }

    pub fn from_labels(labels: &[Label]) -> Self {
        let bits = labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == Label::B)
            .fold(0, |acc, (x, _)| acc | 1 << x);
        KauffmanState {
            bits,
            n: labels.len(),
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, x: usize) -> Label {
        if self.bits >> x & 1 == 1 {
            Label::B
        } else {
            Label::A
        }
    }

    pub fn with_label(&self, x: usize, l: Label) -> Self {
        let bits = match l {
            Label::A => self.bits & !(1 << x),
            Label::B => self.bits | 1 << x,
        };
        KauffmanState { bits, n: self.n }
    }

    /// Homological degree: the number of B labels.
    pub fn num_b(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of B labels at crossings strictly before `x`.
    pub fn b_before(&self, x: usize) -> usize {
        (self.bits & low_mask(x)).count_ones() as usize
    }

    pub fn blue(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| self.bits >> x & 1 == 0)
    }

    pub fn red(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&x| self.bits >> x & 1 == 1)
    }

    /// Relabels crossings after `Diagram::reorder_crossings(perm)`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let bits = perm
            .iter()
            .enumerate()
            .filter(|(_, &old)| self.bits >> old & 1 == 1)
            .fold(0, |acc, (k, _)| acc | 1 << k);
        KauffmanState { bits, n: self.n }
    }
}

impl fmt::Display for KauffmanState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in 0..self.n {
            f.write_str(if self.label(x) == Label::A { "A" } else { "B" })?;
        }
        Ok(())
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// The chord left at a smoothed crossing. Its endpoints sit on the arc
/// through slot 0 and on the arc through slot 2, for either label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scar {
    pub crossing: usize,
    pub label: Label,
    pub circles: (usize, usize),
}

impl Scar {
    pub fn is_monochord(&self) -> bool {
        self.circles.0 == self.circles.1
    }
}

/// Circles and scars produced by applying a Kauffman state to a diagram.
///
/// Circles are indexed by the smallest edge they contain; crossing-free
/// loops of the diagram come last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothedDiagram {
    state: KauffmanState,
    circle_of_edge: Vec<usize>,
    /// Smallest edge of each edge-carrying circle.
    rep_edge: Vec<usize>,
    num_circles: usize,
    scars: Vec<Scar>,
}

impl SmoothedDiagram {
    pub fn state(&self) -> KauffmanState {
        self.state
    }

    pub fn num_circles(&self) -> usize {
        self.num_circles
    }

    pub fn circle_of_edge(&self, e: usize) -> usize {
        self.circle_of_edge[e]
    }

    /// Smallest edge on circle `c`, or `None` for a crossing-free loop.
    pub fn rep_edge(&self, c: usize) -> Option<usize> {
        self.rep_edge.get(c).copied()
    }

    /// Number of circles that carry at least one edge.
    pub fn edge_circles(&self) -> usize {
        self.rep_edge.len()
    }

    pub fn scars(&self) -> &[Scar] {
        &self.scars
    }

    pub fn scar(&self, x: usize) -> Scar {
        self.scars[x]
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("state covers {got} crossings, diagram has {expected}")]
pub struct IncompleteState {
    pub got: usize,
    pub expected: usize,
}

/// Small union-find over edge indices.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // Keep the smaller index as root so roots are canonical minima.
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Smooths every crossing of `d` according to `s`. An A label joins the arcs
/// at slots (0,1) and (2,3); a B label joins (0,3) and (1,2).
pub fn smooth(d: &Diagram, s: &KauffmanState) -> Result<SmoothedDiagram, IncompleteState> {
    if s.len() != d.num_crossings() {
        return Err(IncompleteState {
            got: s.len(),
            expected: d.num_crossings(),
        });
    }
    let mut uf = UnionFind::new(d.num_edges());
    for (x, c) in d.crossings().iter().enumerate() {
        let e = c.edges;
        match s.label(x) {
            Label::A => {
                uf.union(e[0], e[1]);
                uf.union(e[2], e[3]);
            }
            Label::B => {
                uf.union(e[0], e[3]);
                uf.union(e[1], e[2]);
            }
        }
    }
    let mut index_of_root = vec![usize::MAX; d.num_edges()];
    let mut num_circles = 0;
    let mut circle_of_edge = vec![0; d.num_edges()];
    let mut rep_edge = Vec::new();
    for (e, slot) in circle_of_edge.iter_mut().enumerate() {
        let r = uf.find(e);
        if index_of_root[r] == usize::MAX {
            index_of_root[r] = num_circles;
            rep_edge.push(e);
            num_circles += 1;
        }
        *slot = index_of_root[r];
    }
    let scars = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(x, c)| Scar {
            crossing: x,
            label: s.label(x),
            circles: (circle_of_edge[c.edges[0]], circle_of_edge[c.edges[2]]),
        })
        .collect();
    Ok(SmoothedDiagram {
        state: *s,
        circle_of_edge,
        rep_edge,
        num_circles: num_circles + d.free_loops(),
        scars,
    })
}

/// A Kauffman state with a sign on each circle. Bit `c` of `minus` set means
/// circle `c` carries `-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedState {
    pub state: KauffmanState,
    pub minus: u64,
    pub num_circles: usize,
}

impl EnhancedState {
    pub fn new(state: KauffmanState, minus: u64, num_circles: usize) -> Self {
        debug_assert_eq!(minus & !low_mask(num_circles), 0);
        EnhancedState {
            state,
            minus,
            num_circles,
        }
    }

    pub fn all_plus(sm: &SmoothedDiagram) -> Self {
        EnhancedState::new(sm.state(), 0, sm.num_circles())
    }

    pub fn i(&self) -> i64 {
        self.state.num_b() as i64
    }

    /// Plus circles minus minus circles.
    pub fn theta(&self) -> i64 {
        self.num_circles as i64 - 2 * self.minus.count_ones() as i64
    }

    pub fn j(&self) -> i64 {
        self.i() + self.theta()
    }

    /// `(i, theta, j)`.
    pub fn degrees(&self) -> (i64, i64, i64) {
        (self.i(), self.theta(), self.j())
    }

    pub fn key(&self) -> StateKey {
        StateKey {
            labels: self.state.bits(),
            minus: self.minus,
        }
    }
}

/// The canonical `(label bitmask, minus bitmask)` pair identifying an
/// enhanced state of a fixed diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateKey {
    pub labels: u64,
    pub minus: u64,
}

impl StateKey {
    pub fn to_hex(&self) -> (String, String) {
        (format!("{:x}", self.labels), format!("{:x}", self.minus))
    }
}

/// An integer combination of enhanced states, all in bidegree `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub i: i64,
    pub j: i64,
    terms: BTreeMap<StateKey, i64>,
}

impl Chain {
    pub fn zero(i: i64, j: i64) -> Self {
        Chain {
            i,
            j,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_state(e: &EnhancedState) -> Self {
        let mut c = Chain::zero(e.i(), e.j());
        c.add_term(e.key(), 1);
        c
    }

    pub fn add_term(&mut self, key: StateKey, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let v = self.terms.entry(key).or_insert(0);
        *v += coeff;
        if *v == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Chain, scale: i64) {
        debug_assert!(other.is_zero() || self.is_zero() || (self.i, self.j) == (other.i, other.j));
        if self.is_zero() {
            self.i = other.i;
            self.j = other.j;
        }
        for (&k, &v) in &other.terms {
            self.add_term(k, v * scale);
        }
    }

    pub fn scaled(&self, m: i64) -> Chain {
        let mut c = Chain::zero(self.i, self.j);
        c.add_assign_scaled(self, m);
        c
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut c = self.clone();
        c.add_assign_scaled(other, -1);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &StateKey) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateKey, &i64)> {
        self.terms.iter()
    }

    /// Sum of all coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }
}

/// Label bitmasks on `n` crossings with exactly `i` B labels, ascending.
pub fn masks_with_popcount(n: usize, i: usize) -> impl Iterator<Item = u64> {
    let limit = if n >= 64 { None } else { Some(1u64 << n) };
    let first = if i > n {
        None
    } else if i == 0 {
        Some(0u64)
    } else {
        Some(low_mask(i))
    };
    let mut cur = first;
    std::iter::from_fn(move || {
        let v = cur?;
        if let Some(l) = limit {
            if v >= l {
                return None;
            }
        }
        cur = if v == 0 || v == u64::MAX {
            None
        } else {
            // Gosper's hack: next integer with the same popcount.
            let c = v & v.wrapping_neg();
            let r = v.checked_add(c);
            r.map(|r| (((r ^ v) >> 2) / c) | r)
        };
        Some(v)
    })
}

/// Minus bitmasks over `c` circles with exactly `m` minus signs, ascending.
pub fn sign_masks(c: usize, m: usize) -> impl Iterator<Item = u64> {
    masks_with_popcount(c, m)
}

/// Basis of `C^{i,j}(D)` in canonical order: label bitmask ascending, then
/// minus bitmask ascending. `circles` maps a label bitmask to `|sD|`.
pub fn enumerate_states_with(
    n: usize,
    i: i64,
    j: i64,
    mut circles: impl FnMut(u64) -> usize,
) -> Vec<EnhancedState> {
    let mut out = Vec::new();
    if i < 0 || i as usize > n {
        return out;
    }
    for bits in masks_with_popcount(n, i as usize) {
        let c = circles(bits) as i64;
        let theta = j - i;
        if (c - theta) % 2 != 0 || theta.abs() > c {
            continue;
        }
        let m = ((c - theta) / 2) as usize;
        let state = KauffmanState::from_bits(bits, n);
        out.extend(sign_masks(c as usize, m).map(|minus| EnhancedState::new(state, minus, c as usize)));
    }
    out
}

/// All enhanced states of `d` in bidegree `(i, j)`.
pub fn enumerate_states(d: &Diagram, i: i64, j: i64) -> Vec<EnhancedState> {
    let n = d.num_crossings();
    enumerate_states_with(n, i, j, |bits| {
        smooth(d, &KauffmanState::from_bits(bits, n))
            .expect("state sized to diagram")
            .num_circles()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf() -> Diagram {
        Diagram::parse_pd("X(1,3,2,4),X(3,1,4,2)").unwrap()
    }

    #[test]
    fn gosper_enumeration() {
        let v: Vec<u64> = masks_with_popcount(4, 2).collect();
        assert_eq!(v, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(masks_with_popcount(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(masks_with_popcount(3, 4).count(), 0);
        let total: usize = (0..=10).map(|i| masks_with_popcount(10, i).count()).sum();
        assert_eq!(total, 1 << 10);
    }

    #[test]
    fn hopf_all_a_has_two_circles() {
        let d = hopf();
        let sm = smooth(&d, &KauffmanState::all_a(2)).unwrap();
        assert_eq!(sm.num_circles(), 2);
    }

    #[test]
    fn hopf_all_b_matches_mirror_all_a() {
        let d = hopf();
        let b = smooth(&d, &KauffmanState::all_b(2)).unwrap().num_circles();
        let a = smooth(&d.mirror(), &KauffmanState::all_a(2)).unwrap().num_circles();
        assert_eq!(a, b);
    }

    #[test]
    fn incomplete_state_is_rejected() {
        let d = hopf();
        assert_eq!(
            smooth(&d, &KauffmanState::all_a(3)),
            Err(IncompleteState { got: 3, expected: 2 })
        );
    }

    #[test]
    fn unknot_states() {
        let d = Diagram::unknot();
        let s = enumerate_states(&d, 0, 1);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].minus, 0);
        assert_eq!(enumerate_states(&d, 0, -1).len(), 1);
        assert!(enumerate_states(&d, 1, 2).is_empty());
    }

    #[test]
    fn hopf_degree_zero_counts() {
        let d = hopf();
        let counts: Vec<usize> = [-2, 0, 2]
            .iter()
            .map(|&j| enumerate_states(&d, 0, j).len())
            .collect();
        assert_eq!(counts, vec![1, 2, 1]);
        assert!(enumerate_states(&d, 3, 3).is_empty());
    }

    #[test]
    fn degrees_follow_signs() {
        let d = hopf();
        let sm = smooth(&d, &KauffmanState::from_bits(0b01, 2)).unwrap();
        let e = EnhancedState::new(sm.state(), low_mask(sm.num_circles()), sm.num_circles());
        let c = sm.num_circles() as i64;
        assert_eq!(e.degrees(), (1, -c, 1 - c));
        let plus = EnhancedState::all_plus(&smooth(&d, &KauffmanState::all_a(2)).unwrap());
        assert_eq!(plus.degrees(), (0, 2, 2));
    }

    #[test]
    fn single_flip_changes_circle_count_by_one() {
        let d = Diagram::pretzel(&[5, -3, 2]).unwrap();
        let n = d.num_crossings();
        for bits in [0u64, 0b1010_1010, 0x3ff, 0x155] {
            let s = KauffmanState::from_bits(bits & low_mask(n), n);
            let c = smooth(&d, &s).unwrap().num_circles() as i64;
            for x in 0..n {
                let t = s.with_label(x, if s.label(x) == Label::A { Label::B } else { Label::A });
                let ct = smooth(&d, &t).unwrap().num_circles() as i64;
                assert_eq!((c - ct).abs(), 1);
            }
        }
    }

    #[test]
    fn chain_arithmetic_cancels() {
        let k = StateKey { labels: 1, minus: 0 };
        let mut c = Chain::zero(1, 3);
        c.add_term(k, 2);
        c.add_term(k, -2);
        assert!(c.is_zero());
        c.add_term(k, 3);
        assert_eq!(c.scaled(2).coeff(&k), 6);
        assert!(c.sub(&c).is_zero());
        assert_eq!(c.augmentation(), 3);
    }

    #[test]
    fn permuted_state_tracks_crossings() {
        let s = KauffmanState::from_bits(0b001, 3);
        // New position 2 holds old crossing 0.
        assert_eq!(s.permuted(&[1, 2, 0]).bits(), 0b100);
    }
}
