//! Smith normal form of sparse integer matrices.
//!
//! Elimination runs on machine integers with checked arithmetic and falls
//! back to arbitrary precision on overflow. When transforms are requested
//! the unimodular row and column operations are recorded as an operation
//! log instead of dense matrices; `U` and `V` are applied to vectors by
//! replaying the log.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::SparseMatrix;

/// Elementary unimodular operation on two lines (rows or columns).
///
/// Row semantics: `Mix` replaces `(row_a, row_b)` by `G · (row_a, row_b)`
/// and `AddMul` performs `row_dst += q · row_src`. Column semantics:
/// `Mix` replaces `(col_a, col_b)` by `(col_a, col_b) · G` and `AddMul`
/// performs `col_dst += q · col_src`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Op<T> {
    Swap(usize, usize),
    Negate(usize),
    AddMul { src: usize, dst: usize, q: T },
    Mix { a: usize, b: usize, g: [T; 4] },
}

impl<T: Entry> Op<T> {
    fn to_big(&self) -> Op<BigInt> {
        match self {
            Op::Swap(a, b) => Op::Swap(*a, *b),
            Op::Negate(a) => Op::Negate(*a),
            Op::AddMul { src, dst, q } => Op::AddMul {
                src: *src,
                dst: *dst,
                q: q.to_big(),
            },
            Op::Mix { a, b, g } => Op::Mix {
                a: *a,
                b: *b,
                g: [g[0].to_big(), g[1].to_big(), g[2].to_big(), g[3].to_big()],
            },
        }
    }
}

/// Integer type usable during elimination.
pub trait Entry: Clone + Debug + PartialEq + Integer + Signed + Send + Sync {
    fn checked_mul_(&self, o: &Self) -> Option<Self>;
    fn checked_add_(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn from_i64(v: i64) -> Self;
}

impl Entry for i64 {
    fn checked_mul_(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn checked_add_(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl Entry for BigInt {
    fn checked_mul_(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_add_(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
}

#[derive(Debug)]
struct Overflow;

fn lin<T: Entry>(a: &T, x: &T, b: &T, y: &T) -> Result<T, Overflow> {
    // a*x + b*y
    let l = a.checked_mul_(x).ok_or(Overflow)?;
    let r = b.checked_mul_(y).ok_or(Overflow)?;
    l.checked_add_(&r).ok_or(Overflow)
}

/// Row-major sparse matrix with column occupancy sets.
struct Work<T> {
    rows: Vec<Vec<(usize, T)>>,
    cols: Vec<BTreeSet<usize>>,
}

impl<T: Entry> Work<T> {
    fn new(m: &SparseMatrix) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); m.rows];
        let mut dense_rows: Vec<std::collections::BTreeMap<usize, i64>> =
            vec![Default::default(); m.rows];
        for &(r, c, v) in &m.entries {
            *dense_rows[r].entry(c).or_insert(0) += v;
        }
        let mut cols = vec![BTreeSet::new(); m.cols];
        for (r, row) in dense_rows.into_iter().enumerate() {
            for (c, v) in row {
                if v != 0 {
                    rows[r].push((c, T::from_i64(v)));
                    cols[c].insert(r);
                }
            }
        }
        Work { rows, cols }
    }

    fn get(&self, r: usize, c: usize) -> Option<&T> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(k, _)| *k)
            .ok()
            .map(|ix| &row[ix].1)
    }

    fn set(&mut self, r: usize, c: usize, v: T) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |(k, _)| *k) {
            Ok(ix) => {
                if v.is_zero() {
                    row.remove(ix);
                    self.cols[c].remove(&r);
                } else {
                    row[ix].1 = v;
                }
            }
            Err(ix) => {
                if !v.is_zero() {
                    row.insert(ix, (c, v));
                    self.cols[c].insert(r);
                }
            }
        }
    }

    /// `(row_a, row_b) <- (g0 a + g1 b, g2 a + g3 b)`.
    fn mix_rows(&mut self, a: usize, b: usize, g: &[T; 4]) -> Result<(), Overflow> {
        let ra = std::mem::take(&mut self.rows[a]);
        let rb = std::mem::take(&mut self.rows[b]);
        let (mut na, mut nb) = (Vec::new(), Vec::new());
        let (mut i, mut j) = (0, 0);
        let zero = T::zero();
        while i < ra.len() || j < rb.len() {
            let ca = ra.get(i).map_or(usize::MAX, |e| e.0);
            let cb = rb.get(j).map_or(usize::MAX, |e| e.0);
            let c = ca.min(cb);
            let va = if ca == c {
                i += 1;
                &ra[i - 1].1
            } else {
                &zero
            };
            let vb = if cb == c {
                j += 1;
                &rb[j - 1].1
            } else {
                &zero
            };
            let xa = lin(&g[0], va, &g[1], vb)?;
            let xb = lin(&g[2], va, &g[3], vb)?;
            if xa.is_zero() {
                self.cols[c].remove(&a);
            } else {
                self.cols[c].insert(a);
                na.push((c, xa));
            }
            if xb.is_zero() {
                self.cols[c].remove(&b);
            } else {
                self.cols[c].insert(b);
                nb.push((c, xb));
            }
        }
        self.rows[a] = na;
        self.rows[b] = nb;
        Ok(())
    }

    /// `row_dst += q * row_src`.
    fn add_row(&mut self, src: usize, dst: usize, q: &T) -> Result<(), Overflow> {
        let g = [T::one(), T::zero(), q.clone(), T::one()];
        self.mix_rows(src, dst, &g)
    }

    /// `(col_a, col_b) <- (col_a, col_b) · G`.
    fn mix_cols(&mut self, a: usize, b: usize, g: &[T; 4]) -> Result<(), Overflow> {
        let rows: BTreeSet<usize> = self.cols[a].union(&self.cols[b]).copied().collect();
        for r in rows {
            let va = self.get(r, a).cloned().unwrap_or_else(T::zero);
            let vb = self.get(r, b).cloned().unwrap_or_else(T::zero);
            let xa = lin(&va, &g[0], &vb, &g[2])?;
            let xb = lin(&va, &g[1], &vb, &g[3])?;
            self.set(r, a, xa);
            self.set(r, b, xb);
        }
        Ok(())
    }
}

struct Elimination<T> {
    pivots: Vec<(usize, usize, T)>,
    row_ops: Vec<Op<T>>,
    col_ops: Vec<Op<T>>,
}

/// Unimodular `G` with `G · (p, e)ᵀ = (g, 0)ᵀ`; as a column transform
/// `(p, e) · Gᵀ` it also yields `(g, 0)`.
fn gcd_mix<T: Entry>(p: &T, e: &T) -> [T; 4] {
    let eg = p.extended_gcd(e);
    let g = eg.gcd;
    [eg.x, eg.y, -(e.clone() / g.clone()), p.clone() / g]
}

fn transpose<T: Clone>(g: &[T; 4]) -> [T; 4] {
    [g[0].clone(), g[2].clone(), g[1].clone(), g[3].clone()]
}

fn eliminate<T: Entry>(m: &SparseMatrix, record: bool) -> Result<Elimination<T>, Overflow> {
    let mut w: Work<T> = Work::new(m);
    let mut out = Elimination {
        pivots: Vec::new(),
        row_ops: Vec::new(),
        col_ops: Vec::new(),
    };
    for c in 0..m.cols {
        'pivot: loop {
            if w.cols[c].is_empty() {
                break;
            }
            // Smallest magnitude, then shortest row.
            let r = *w.cols[c]
                .iter()
                .min_by(|&&x, &&y| {
                    let (vx, vy) = (w.get(x, c).unwrap().abs(), w.get(y, c).unwrap().abs());
                    vx.cmp(&vy).then(w.rows[x].len().cmp(&w.rows[y].len()))
                })
                .unwrap();
            let others: Vec<usize> = w.cols[c].iter().copied().filter(|&x| x != r).collect();
            for r2 in others {
                let p = w.get(r, c).unwrap().clone();
                let e = w.get(r2, c).unwrap().clone();
                if e.is_multiple_of(&p) {
                    let q = -(e / p);
                    w.add_row(r, r2, &q)?;
                    if record {
                        out.row_ops.push(Op::AddMul { src: r, dst: r2, q });
                    }
                } else {
                    let g = gcd_mix(&p, &e);
                    w.mix_rows(r, r2, &g)?;
                    if record {
                        out.row_ops.push(Op::Mix { a: r, b: r2, g });
                    }
                }
            }
            debug_assert_eq!(w.cols[c].len(), 1);
            // Clear the rest of row r; column c is zero outside row r.
            let row_cols: Vec<usize> = w.rows[r].iter().map(|e| e.0).filter(|&k| k != c).collect();
            for c2 in row_cols {
                let p = w.get(r, c).unwrap().clone();
                let e = w.get(r, c2).unwrap().clone();
                if e.is_multiple_of(&p) {
                    if record {
                        out.col_ops.push(Op::AddMul {
                            src: c,
                            dst: c2,
                            q: -(e / p),
                        });
                    }
                    w.set(r, c2, T::zero());
                } else {
                    let g = transpose(&gcd_mix(&p, &e));
                    w.mix_cols(c, c2, &g)?;
                    if record {
                        out.col_ops.push(Op::Mix { a: c, b: c2, g });
                    }
                    // Column c picked up entries from c2.
                    continue 'pivot;
                }
            }
            let p = w.get(r, c).unwrap().clone();
            w.set(r, c, T::zero());
            out.pivots.push((r, c, p));
            break;
        }
    }
    Ok(out)
}

/// Smith normal form `U · M · V = S`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Positive diagonal of `S`, each entry dividing the next.
    pub factors: Vec<BigInt>,
    transforms: Option<Transforms>,
}

#[derive(Clone, Debug)]
struct Transforms {
    row_ops: Vec<Op<BigInt>>,
    col_ops: Vec<Op<BigInt>>,
}

impl SmithForm {
    /// Invariant factors only.
    pub fn compute(m: &SparseMatrix) -> Self {
        Self::run(m, false)
    }

    /// Invariant factors plus the operation logs for `U` and `V`.
    pub fn with_transforms(m: &SparseMatrix) -> Self {
        Self::run(m, true)
    }

    fn run(m: &SparseMatrix, record: bool) -> Self {
        match eliminate::<i64>(m, record) {
            Ok(e) => Self::finish(m, e, record),
            Err(Overflow) => {
                let e = eliminate::<BigInt>(m, record).expect("bigint elimination cannot overflow");
                Self::finish(m, e, record)
            }
        }
    }

    fn finish<T: Entry>(m: &SparseMatrix, e: Elimination<T>, record: bool) -> Self {
        let rank = e.pivots.len();
        let mut diag: Vec<BigInt> = e.pivots.iter().map(|p| p.2.to_big()).collect();
        let mut tr = record.then(|| Transforms {
            row_ops: e.row_ops.iter().map(Op::to_big).collect(),
            col_ops: e.col_ops.iter().map(Op::to_big).collect(),
        });

        if let Some(t) = tr.as_mut() {
            // Move pivot k to position (k, k).
            let mut row_at: Vec<usize> = (0..m.rows).collect();
            let mut row_pos: Vec<usize> = (0..m.rows).collect();
            let mut col_at: Vec<usize> = (0..m.cols).collect();
            let mut col_pos: Vec<usize> = (0..m.cols).collect();
            for (k, &(r, c, _)) in e.pivots.iter().enumerate() {
                let pr = row_pos[r];
                if pr != k {
                    t.row_ops.push(Op::Swap(k, pr));
                    let other = row_at[k];
                    row_at.swap(k, pr);
                    row_pos[r] = k;
                    row_pos[other] = pr;
                }
                let pc = col_pos[c];
                if pc != k {
                    t.col_ops.push(Op::Swap(k, pc));
                    let other = col_at[k];
                    col_at.swap(k, pc);
                    col_pos[c] = k;
                    col_pos[other] = pc;
                }
            }
        }
        for (k, d) in diag.iter_mut().enumerate() {
            if d.is_negative() {
                *d = -d.clone();
                if let Some(t) = tr.as_mut() {
                    t.row_ops.push(Op::Negate(k));
                }
            }
        }
        // Units first, then pairwise gcd/lcm among the rest.
        let mut front = 0;
        for k in 0..rank {
            if diag[k].is_one() {
                if k != front {
                    diag.swap(k, front);
                    if let Some(t) = tr.as_mut() {
                        t.row_ops.push(Op::Swap(k, front));
                        t.col_ops.push(Op::Swap(k, front));
                    }
                }
                front += 1;
            }
        }
        for a in front..rank {
            for b in a + 1..rank {
                if diag[b].is_multiple_of(&diag[a]) {
                    continue;
                }
                let (da, db) = (diag[a].clone(), diag[b].clone());
                let eg = da.extended_gcd(&db);
                let g = eg.gcd;
                let l = &da / &g * &db;
                if let Some(t) = tr.as_mut() {
                    t.row_ops.push(Op::AddMul {
                        src: b,
                        dst: a,
                        q: BigInt::one(),
                    });
                    t.col_ops.push(Op::Mix {
                        a,
                        b,
                        g: [eg.x.clone(), -(&db / &g), eg.y.clone(), &da / &g],
                    });
                    t.row_ops.push(Op::AddMul {
                        src: a,
                        dst: b,
                        q: -(&db * &eg.y / &g),
                    });
                }
                diag[a] = g;
                diag[b] = l;
            }
        }
        SmithForm {
            rows: m.rows,
            cols: m.cols,
            rank,
            factors: diag,
            transforms: tr,
        }
    }

    /// Invariant factors larger than one, as machine integers.
    pub fn torsion(&self) -> Vec<u64> {
        self.factors
            .iter()
            .filter(|f| !f.is_one())
            .map(|f| f.to_u64().expect("invariant factor fits in u64"))
            .collect()
    }

    pub fn has_transforms(&self) -> bool {
        self.transforms.is_some()
    }

    fn logs(&self) -> &Transforms {
        self.transforms
            .as_ref()
            .expect("SmithForm computed without transforms")
    }

    /// `U · v`.
    pub fn apply_u(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut v = v.to_vec();
        for op in &self.logs().row_ops {
            apply_line_op(&mut v, op, false);
        }
        v
    }

    /// `V · z`.
    pub fn apply_v(&self, z: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(z.len(), self.cols);
        let mut z = z.to_vec();
        for op in self.logs().col_ops.iter().rev() {
            apply_line_op(&mut z, op, true);
        }
        z
    }

    /// Dense `U`, for verification on small matrices.
    pub fn u_matrix(&self) -> Vec<Vec<BigInt>> {
        dense_from_columns(self.rows, self.rows, |e| self.apply_u(e))
    }

    /// Dense `V`, for verification on small matrices.
    pub fn v_matrix(&self) -> Vec<Vec<BigInt>> {
        dense_from_columns(self.cols, self.cols, |e| self.apply_v(e))
    }

    /// Integer solution `y` of `M y = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.apply_u(b);
        let mut z = vec![BigInt::zero(); self.cols];
        for (k, wk) in w.iter().enumerate() {
            if k < self.rank {
                if !wk.is_multiple_of(&self.factors[k]) {
                    return None;
                }
                z[k] = wk / &self.factors[k];
            } else if !wk.is_zero() {
                return None;
            }
        }
        Some(self.apply_v(&z))
    }

    /// Order of `b` in the cokernel `Z^rows / im M`; `None` when infinite.
    pub fn cokernel_order(&self, b: &[BigInt]) -> Option<BigInt> {
        let w = self.apply_u(b);
        let mut order = BigInt::one();
        for (k, wk) in w.iter().enumerate() {
            if k < self.rank {
                let f = &self.factors[k];
                let need = f / f.gcd(wk);
                order = order.lcm(&need);
            } else if !wk.is_zero() {
                return None;
            }
        }
        Some(order)
    }
}

fn apply_line_op(v: &mut [BigInt], op: &Op<BigInt>, column: bool) {
    match op {
        Op::Swap(a, b) => v.swap(*a, *b),
        Op::Negate(a) => v[*a] = -v[*a].clone(),
        Op::AddMul { src, dst, q } => {
            if column {
                // E = I + q e_src e_dstᵀ
                let add = q * &v[*dst];
                v[*src] += add;
            } else {
                let add = q * &v[*src];
                v[*dst] += add;
            }
        }
        Op::Mix { a, b, g } => {
            let (va, vb) = (v[*a].clone(), v[*b].clone());
            v[*a] = &g[0] * &va + &g[1] * &vb;
            v[*b] = &g[2] * &va + &g[3] * &vb;
        }
    }
}

fn dense_from_columns(
    rows: usize,
    cols: usize,
    f: impl Fn(&[BigInt]) -> Vec<BigInt>,
) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for c in 0..cols {
        let mut e = vec![BigInt::zero(); cols];
        e[c] = BigInt::one();
        for (r, v) in f(&e).into_iter().enumerate() {
            out[r][c] = v;
        }
    }
    out
}
