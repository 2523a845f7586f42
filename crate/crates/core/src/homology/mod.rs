//! Integer Khovanov homology from boundary-matrix Smith forms, and an
//! exactness oracle deciding whether a cycle bounds.

mod snf;

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::complex::ChainComplex;
use crate::smoothing::{Chain, EnhancedState, StateKey};

pub use snf::{Entry, Op, SmithForm};

/// Default crossing limit for full enumeration.
pub const DEFAULT_CROSSING_LIMIT: usize = 18;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("diagram has {crossings} crossings, above the enumeration limit {limit}")]
    TooLarge { crossings: usize, limit: usize },
    #[error("chain at ({i},{j}) is not a cycle")]
    NotCycle { i: i64, j: i64 },
    #[error("chain term is not an enhanced state of degree ({i},{j})")]
    WrongDegree { i: i64, j: i64 },
    #[error("integer does not fit in 64 bits: {0}")]
    Overflow(String),
    #[error("malformed table json: {0}")]
    Json(String),
}

/// One homology group: free rank plus torsion coefficients (each ≥ 2).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Group {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl Group {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Number of `Z/m` summands.
    pub fn count_torsion(&self, m: u64) -> usize {
        self.torsion.iter().filter(|&&t| t == m).count()
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Finitely supported homology table in diagram degrees `(i, j)`.
///
/// Knot degrees are `h = i - n` and `q = j + p - 2n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KhovanovTable {
    pub p: usize,
    pub n: usize,
    pub groups: BTreeMap<(i64, i64), Group>,
}

impl KhovanovTable {
    pub fn to_hq(&self, i: i64, j: i64) -> (i64, i64) {
        let (p, n) = (self.p as i64, self.n as i64);
        (i - n, j + p - 2 * n)
    }

    pub fn from_hq(&self, h: i64, q: i64) -> (i64, i64) {
        let (p, n) = (self.p as i64, self.n as i64);
        (h + n, q - p + 2 * n)
    }

    pub fn get(&self, i: i64, j: i64) -> Group {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn get_hq(&self, h: i64, q: i64) -> Group {
        let (i, j) = self.from_hq(h, q);
        self.get(i, j)
    }

    /// Nonzero groups keyed by `(h, q)`.
    pub fn hq_groups(&self) -> BTreeMap<(i64, i64), Group> {
        self.groups
            .iter()
            .map(|(&(i, j), g)| (self.to_hq(i, j), g.clone()))
            .collect()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(|g| !g.torsion.is_empty())
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(1));
        obj.insert("offsets".into(), json!({"p": self.p, "n": self.n}));
        for (&(i, j), g) in &self.groups {
            obj.insert(
                format!("{i},{j}"),
                json!({"rank": g.rank, "torsion": g.torsion}),
            );
        }
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self, HomologyError> {
        let bad = |m: &str| HomologyError::Json(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        if obj.get("schema") != Some(&json!(1)) {
            return Err(bad("unsupported schema"));
        }
        let off = obj.get("offsets").ok_or_else(|| bad("missing offsets"))?;
        let field = |k: &str| {
            off.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad("bad offsets"))
        };
        let mut t = KhovanovTable {
            p: field("p")?,
            n: field("n")?,
            groups: BTreeMap::new(),
        };
        for (k, g) in obj {
            if k == "schema" || k == "offsets" {
                continue;
            }
            let (i, j) = k
                .split_once(',')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| bad("bad degree key"))?;
            let rank = g
                .get("rank")
                .and_then(Value::as_u64)
                .ok_or_else(|| bad("bad rank"))? as usize;
            let torsion = g
                .get("torsion")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("bad torsion"))?
                .iter()
                .map(|x| x.as_u64().ok_or_else(|| bad("bad torsion entry")))
                .collect::<Result<Vec<_>, _>>()?;
            t.groups.insert((i, j), Group { rank, torsion });
        }
        Ok(t)
    }

    /// Text grid: rows `j` descending, columns `i` ascending, with the knot
    /// degrees shown in the headers.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.groups.is_empty() {
            out.push_str("(zero homology)\n");
            return out;
        }
        let imin = self.groups.keys().map(|k| k.0).min().unwrap();
        let imax = self.groups.keys().map(|k| k.0).max().unwrap();
        let mut js: Vec<i64> = self.groups.keys().map(|k| k.1).collect();
        js.sort_unstable();
        js.dedup();
        let cells: Vec<Vec<String>> = js
            .iter()
            .rev()
            .map(|&j| {
                (imin..=imax)
                    .map(|i| {
                        self.groups
                            .get(&(i, j))
                            .map(Group::to_string)
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect();
        let heads: Vec<String> = (imin..=imax)
            .map(|i| format!("i={} h={}", i, i - self.n as i64))
            .collect();
        let width = cells
            .iter()
            .flatten()
            .chain(&heads)
            .map(String::len)
            .max()
            .unwrap_or(1);
        let rowlab: Vec<String> = js
            .iter()
            .rev()
            .map(|&j| format!("j={} q={}", j, self.to_hq(0, j).1))
            .collect();
        let lw = rowlab.iter().map(String::len).max().unwrap_or(0);
        let _ = write!(out, "{:lw$}", "");
        for h in &heads {
            let _ = write!(out, " | {h:^width$}");
        }
        out.push('\n');
        for (lab, row) in rowlab.iter().zip(&cells) {
            let _ = write!(out, "{lab:lw$}");
            for c in row {
                let _ = write!(out, " | {c:^width$}");
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for KhovanovTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn check_limit(cx: &ChainComplex, limit: usize) -> Result<(), HomologyError> {
    if cx.n() > limit {
        return Err(HomologyError::TooLarge {
            crossings: cx.n(),
            limit,
        });
    }
    Ok(())
}

fn torsion_u64(s: &SmithForm) -> Result<Vec<u64>, HomologyError> {
    s.factors
        .iter()
        .filter(|f| **f > BigInt::from(1))
        .map(|f| f.to_u64().ok_or_else(|| HomologyError::Overflow(f.to_string())))
        .collect()
}

/// Homology at one bidegree: `dim ker d_i - rank d_{i-1}` plus the torsion
/// of `d_{i-1}`.
pub fn homology_at(cx: &ChainComplex, i: i64, j: i64) -> Result<Group, HomologyError> {
    let dim = cx.basis(i, j).len();
    if dim == 0 {
        return Ok(Group::default());
    }
    let out = SmithForm::compute(&cx.boundary_matrix(i, j));
    let inc = SmithForm::compute(&cx.boundary_matrix(i - 1, j));
    Ok(Group {
        rank: dim - out.rank - inc.rank,
        torsion: torsion_u64(&inc)?,
    })
}

/// Full table, parallel over quantum degrees.
pub fn khovanov_table(cx: &ChainComplex, limit: usize) -> Result<KhovanovTable, HomologyError> {
    check_limit(cx, limit)?;
    let n = cx.n() as i64;
    let (p, neg, _) = cx.diagram().stats();
    let per_j: Vec<Vec<((i64, i64), Group)>> = cx
        .quantum_degrees()
        .into_par_iter()
        .map(|j| {
            let dims: Vec<usize> = (0..=n).map(|i| cx.basis(i, j).len()).collect();
            // forms[i] is d_i : C^{i,j} -> C^{i+1,j}
            let forms: Vec<Option<SmithForm>> = (0..n)
                .map(|i| {
                    (dims[i as usize] > 0 && dims[i as usize + 1] > 0)
                        .then(|| SmithForm::compute(&cx.boundary_matrix(i, j)))
                })
                .collect();
            let rank = |i: i64| -> usize {
                if i < 0 || i >= n {
                    0
                } else {
                    forms[i as usize].as_ref().map_or(0, |s| s.rank)
                }
            };
            let mut out = Vec::new();
            for i in 0..=n {
                let free = dims[i as usize] - rank(i) - rank(i - 1);
                let torsion = if i >= 1 {
                    match &forms[i as usize - 1] {
                        Some(s) => torsion_u64(s)?,
                        None => Vec::new(),
                    }
                } else {
                    Vec::new()
                };
                let g = Group {
                    rank: free,
                    torsion,
                };
                if !g.is_zero() {
                    out.push(((i, j), g));
                }
            }
            Ok(out)
        })
        .collect::<Result<_, HomologyError>>()?;
    Ok(KhovanovTable {
        p,
        n: neg,
        groups: per_j.into_iter().flatten().collect(),
    })
}

/// Answer of the exactness oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// The chain bounds; the witness `y` satisfies `d(y) = v`.
    Exact(Chain),
    NotExact,
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact(_))
    }
}

struct Incoming {
    rows: HashMap<StateKey, usize>,
    cols: Vec<EnhancedState>,
    smith: SmithForm,
}

/// Decides exactness of cycles and computes class orders, caching the
/// factorization of each incoming differential.
pub struct HomologyOracle<'a> {
    cx: &'a ChainComplex,
    cache: Mutex<HashMap<(i64, i64), Arc<Incoming>>>,
}

impl<'a> HomologyOracle<'a> {
    pub fn new(cx: &'a ChainComplex) -> Self {
        HomologyOracle {
            cx,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn complex(&self) -> &ChainComplex {
        self.cx
    }

    /// Factorization of `d_{i-1}` landing in `C^{i,j}`.
    fn incoming(&self, i: i64, j: i64) -> Arc<Incoming> {
        if let Some(f) = self.cache.lock().unwrap().get(&(i, j)) {
            return Arc::clone(f);
        }
        let rows_b = self.cx.basis(i, j);
        let cols = self.cx.basis(i - 1, j);
        let smith = SmithForm::with_transforms(&self.cx.boundary_between(&cols, &rows_b));
        let rows = rows_b
            .iter()
            .enumerate()
            .map(|(r, e)| (e.key(), r))
            .collect();
        let f = Arc::new(Incoming { rows, cols, smith });
        self.cache
            .lock()
            .unwrap()
            .entry((i, j))
            .or_insert(f)
            .clone()
    }

    fn vector(&self, v: &Chain, f: &Incoming) -> Result<Vec<BigInt>, HomologyError> {
        let mut out = vec![BigInt::zero(); f.rows.len()];
        for (k, &c) in v.iter() {
            let r = f.rows.get(k).ok_or(HomologyError::WrongDegree { i: v.i, j: v.j })?;
            out[*r] = BigInt::from(c);
        }
        Ok(out)
    }

    fn check_cycle(&self, v: &Chain) -> Result<(), HomologyError> {
        if self.cx.differential_chain(v).is_zero() {
            Ok(())
        } else {
            Err(HomologyError::NotCycle { i: v.i, j: v.j })
        }
    }

    pub fn is_exact(&self, v: &Chain) -> Result<Exactness, HomologyError> {
        self.check_cycle(v)?;
        if v.is_zero() {
            return Ok(Exactness::Exact(Chain::zero(v.i - 1, v.j)));
        }
        let f = self.incoming(v.i, v.j);
        let b = self.vector(v, &f)?;
        let Some(y) = f.smith.solve(&b) else {
            return Ok(Exactness::NotExact);
        };
        let mut w = Chain::zero(v.i - 1, v.j);
        for (c, val) in y.iter().enumerate() {
            if !val.is_zero() {
                let x = val
                    .to_i64()
                    .ok_or_else(|| HomologyError::Overflow(val.to_string()))?;
                w.add_term(f.cols[c].key(), x);
            }
        }
        Ok(Exactness::Exact(w))
    }

    /// Order of `[v]`; `None` when the class has infinite order.
    pub fn class_order(&self, v: &Chain) -> Result<Option<u64>, HomologyError> {
        self.check_cycle(v)?;
        if v.is_zero() {
            return Ok(Some(1));
        }
        let f = self.incoming(v.i, v.j);
        let b = self.vector(v, &f)?;
        match f.smith.cokernel_order(&b) {
            None => Ok(None),
            Some(o) => o
                .to_u64()
                .map(Some)
                .ok_or_else(|| HomologyError::Overflow(o.to_string())),
        }
    }
}
