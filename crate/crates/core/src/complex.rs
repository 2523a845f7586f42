//! The enhanced-state chain complex: incidence numbers, the differential and
//! boundary matrices `C^{i,j} -> C^{i+1,j}`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::diagram::Diagram;
use crate::smoothing::{
    enumerate_states_with, smooth, Chain, EnhancedState, KauffmanState, Label, SmoothedDiagram,
    StateKey,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("enhanced state has {got} labels but the diagram has {expected} crossings")]
    Mismatch { got: usize, expected: usize },
}

/// Integer matrix in coordinate form. Entry `(r, c, v)` is row `r`, column `c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.entries.push((r, c, v));
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            d[r][c] += v;
        }
        d
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `rows cols nnz` header followed by one `row col value` line per entry.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for &(r, c, v) in &self.entries {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    /// Dense product `self * other`; used for `d∘d` checks on small complexes.
    pub fn mul_dense(&self, other: &SparseMatrix) -> Vec<Vec<i64>> {
        assert_eq!(self.cols, other.rows);
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); other.rows];
        for &(r, c, v) in &other.entries {
            by_row[r].push((c, v));
        }
        let mut out = vec![vec![0; other.cols]; self.rows];
        for &(r, k, v) in &self.entries {
            for &(c, w) in &by_row[k] {
                out[r][c] += v * w;
            }
        }
        out
    }
}

/// A diagram together with a concurrent cache of its smoothings.
pub struct ChainComplex {
    diagram: Diagram,
    cache: RwLock<HashMap<u64, Arc<SmoothedDiagram>>>,
}

impl ChainComplex {
    pub fn new(diagram: Diagram) -> Self {
        ChainComplex {
            diagram,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn n(&self) -> usize {
        self.diagram.num_crossings()
    }

    pub fn smoothing(&self, labels: u64) -> Arc<SmoothedDiagram> {
        if let Some(s) = self.cache.read().unwrap().get(&labels) {
            return Arc::clone(s);
        }
        let sm = Arc::new(
            smooth(&self.diagram, &KauffmanState::from_bits(labels, self.n()))
                .expect("state sized to diagram"),
        );
        self.cache
            .write()
            .unwrap()
            .entry(labels)
            .or_insert(sm)
            .clone()
    }

    /// Rebuilds the enhanced state behind a chain key.
    pub fn enhanced(&self, key: StateKey) -> EnhancedState {
        let sm = self.smoothing(key.labels);
        EnhancedState::new(sm.state(), key.minus, sm.num_circles())
    }

    /// `d_x(s)` for one crossing; empty when `x` is red in `s` or the rules
    /// give zero.
    pub fn differential_at(&self, s: &EnhancedState, x: usize) -> Vec<(EnhancedState, i64)> {
        if s.state.label(x) == Label::B {
            return vec![];
        }
        let sm = self.smoothing(s.state.bits());
        let t_state = s.state.with_label(x, Label::B);
        let tm = self.smoothing(t_state.bits());
        let sign = if s.state.b_before(x).is_multiple_of(2) { 1 } else { -1 };
        let scar = sm.scar(x);
        let (c1, c2) = scar.circles;
        let minus = |c: usize| s.minus >> c & 1 == 1;

        // Carry signs of untouched circles over to the target smoothing.
        let mut base = 0u64;
        for c in 0..sm.num_circles() {
            if c == c1 || c == c2 || !minus(c) {
                continue;
            }
            let tc = match sm.rep_edge(c) {
                Some(e) => tm.circle_of_edge(e),
                None => tm.edge_circles() + (c - sm.edge_circles()),
            };
            base |= 1 << tc;
        }
        let edges = self.diagram.crossings()[x].edges;
        let ta = tm.circle_of_edge(edges[0]);
        let tb = tm.circle_of_edge(edges[2]);
        let make = |m: u64| EnhancedState::new(t_state, m, tm.num_circles());
        if c1 != c2 {
            debug_assert_eq!(ta, tb);
            match (minus(c1), minus(c2)) {
                (true, true) => vec![],
                (false, false) => vec![(make(base), sign)],
                _ => vec![(make(base | 1 << ta), sign)],
            }
        } else {
            debug_assert_ne!(ta, tb);
            if minus(c1) {
                vec![(make(base | 1 << ta | 1 << tb), sign)]
            } else {
                vec![(make(base | 1 << tb), sign), (make(base | 1 << ta), sign)]
            }
        }
    }

    pub fn differential(&self, s: &EnhancedState) -> Chain {
        let mut out = Chain::zero(s.i() + 1, s.j());
        for x in s.state.blue() {
            for (t, c) in self.differential_at(s, x) {
                out.add_term(t.key(), c);
            }
        }
        out
    }

    pub fn differential_chain(&self, v: &Chain) -> Chain {
        let mut out = Chain::zero(v.i + 1, v.j);
        for (&k, &c) in v.iter() {
            let dk = self.differential(&self.enhanced(k));
            out.add_assign_scaled(&dk, c);
        }
        out.i = v.i + 1;
        out.j = v.j;
        out
    }

    /// Incidence number `i(s, t)`.
    pub fn incidence(&self, s: &EnhancedState, t: &EnhancedState) -> Result<i64, ComplexError> {
        for e in [s, t] {
            if e.state.len() != self.n() {
                return Err(ComplexError::Mismatch {
                    got: e.state.len(),
                    expected: self.n(),
                });
            }
        }
        let diff = s.state.bits() ^ t.state.bits();
        if diff.count_ones() != 1 || t.state.bits() & diff == 0 {
            return Ok(0);
        }
        let x = diff.trailing_zeros() as usize;
        Ok(self
            .differential_at(s, x)
            .into_iter()
            .find(|(u, _)| u.key() == t.key())
            .map_or(0, |(_, c)| c))
    }

    /// Basis of `C^{i,j}`.
    pub fn basis(&self, i: i64, j: i64) -> Vec<EnhancedState> {
        enumerate_states_with(self.n(), i, j, |bits| self.smoothing(bits).num_circles())
    }

    /// Matrix of `d_i : C^{i,j} -> C^{i+1,j}`; column `s`, row `t` holds
    /// `i(s, t)`.
    pub fn boundary_matrix(&self, i: i64, j: i64) -> SparseMatrix {
        let cols = self.basis(i, j);
        let rows = self.basis(i + 1, j);
        self.boundary_between(&cols, &rows)
    }

    pub(crate) fn boundary_between(
        &self,
        cols: &[EnhancedState],
        rows: &[EnhancedState],
    ) -> SparseMatrix {
        let index: HashMap<StateKey, usize> =
            rows.iter().enumerate().map(|(r, e)| (e.key(), r)).collect();
        let mut m = SparseMatrix::new(rows.len(), cols.len());
        for (c, s) in cols.iter().enumerate() {
            for x in s.state.blue() {
                for (t, v) in self.differential_at(s, x) {
                    m.entries.push((index[&t.key()], c, v));
                }
            }
        }
        m
    }

    /// Every quantum degree carrying a nonzero chain group.
    pub fn quantum_degrees(&self) -> Vec<i64> {
        let n = self.n();
        let mut js = std::collections::BTreeSet::new();
        for bits in 0..(1u64 << n) {
            let i = bits.count_ones() as i64;
            let c = self.smoothing(bits).num_circles() as i64;
            for t in (-c..=c).step_by(2) {
                js.insert(i + t);
            }
        }
        js.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smoothing::low_mask;

    fn hopf() -> ChainComplex {
        ChainComplex::new(Diagram::parse_pd("X(1,3,2,4),X(3,1,4,2)").unwrap())
    }

    /// A one-crossing kink: its A smoothing at the crossing is a monochord or
    /// a bichord depending on the kink type.
    fn kink(quads: &str) -> ChainComplex {
        ChainComplex::new(Diagram::parse_pd(quads).unwrap())
    }

    fn assert_d_squared_zero(cx: &ChainComplex) {
        let n = cx.n() as i64;
        for j in cx.quantum_degrees() {
            for i in 0..n - 1 {
                let d0 = cx.boundary_matrix(i, j);
                let d1 = cx.boundary_matrix(i + 1, j);
                let prod = d1.mul_dense(&d0);
                assert!(prod.iter().flatten().all(|&v| v == 0), "d∘d != 0 at ({i},{j})");
            }
        }
    }

    #[test]
    fn split_of_minus_circle() {
        // X(1,1,2,2): the A smoothing joins 1-1 and 2-2, so the single
        // scar in the other state touches one circle or two.
        for code in ["X(1,2,2,1)", "X(2,1,1,2)"] {
            let cx = kink(code);
            let sm = cx.smoothing(0);
            let scar = sm.scar(0);
            let minus = low_mask(sm.num_circles());
            let s = EnhancedState::new(sm.state(), minus, sm.num_circles());
            let d = cx.differential(&s);
            if scar.is_monochord() {
                assert_eq!(d.len(), 1);
                assert_eq!(d.iter().next().unwrap().1, &1);
            } else {
                assert!(d.is_zero());
            }
            let plus = EnhancedState::all_plus(&sm);
            let dp = cx.differential(&plus);
            if scar.is_monochord() {
                assert_eq!(dp.len(), 2);
                assert!(dp.iter().all(|(_, &c)| c == 1));
            } else {
                assert_eq!(dp.len(), 1);
            }
        }
    }

    #[test]
    fn incidence_signs() {
        let cx = hopf();
        let sm = cx.smoothing(0);
        let s = EnhancedState::all_plus(&sm);
        // Flip crossing 0 first: no B labels before it.
        let d0 = cx.differential_at(&s, 0);
        assert!(!d0.is_empty());
        for (t, _) in &d0 {
            assert_eq!(cx.incidence(&s, t).unwrap(), 1);
        }
        // With B at crossing 0, flipping crossing 1 carries sign -1.
        let s1 = EnhancedState::all_plus(&cx.smoothing(0b01));
        for (t, _) in cx.differential_at(&s1, 1) {
            assert_eq!(cx.incidence(&s1, &t).unwrap(), -1);
        }
        // Two labels apart: not adjacent.
        let far = EnhancedState::all_plus(&cx.smoothing(0b11));
        assert_eq!(cx.incidence(&s, &far).unwrap(), 0);
        let bad = EnhancedState::new(KauffmanState::all_a(3), 0, 1);
        assert!(cx.incidence(&s, &bad).is_err());
    }

    #[test]
    fn merge_of_two_minus_is_zero() {
        let cx = hopf();
        let sm = cx.smoothing(0);
        assert_eq!(sm.num_circles(), 2);
        let s = EnhancedState::new(sm.state(), 0b11, 2);
        assert!(cx.differential(&s).is_zero());
    }

    #[test]
    fn unknot_has_no_matrices() {
        let cx = ChainComplex::new(Diagram::unknot());
        let m = cx.boundary_matrix(0, 1);
        assert_eq!((m.rows, m.nnz()), (0, 0));
    }

    #[test]
    fn d_squared_zero_small_corpus() {
        assert_d_squared_zero(&hopf());
        assert_d_squared_zero(&ChainComplex::new(Diagram::pretzel(&[-1, 3]).unwrap()));
        assert_d_squared_zero(&ChainComplex::new(Diagram::rational(&[2, 3]).unwrap()));
    }

    #[test]
    fn differential_preserves_j() {
        let cx = ChainComplex::new(Diagram::pretzel(&[-1, 3]).unwrap());
        for s in cx.basis(1, 2).iter().chain(cx.basis(2, 0).iter()) {
            let d = cx.differential(s);
            for (k, _) in d.iter() {
                let t = cx.enhanced(*k);
                assert_eq!((t.i(), t.j()), (s.i() + 1, s.j()));
            }
        }
    }

    #[test]
    fn coordinate_dump() {
        let m = SparseMatrix::from_dense(&[vec![1, 0], vec![0, -1]]);
        assert_eq!(m.to_coordinate_text(), "2 2 2\n0 0 1\n1 1 -1\n");
    }
}
