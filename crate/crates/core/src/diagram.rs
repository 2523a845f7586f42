//! Oriented link diagrams in planar-diagram (PD) form.
//!
//! A crossing is stored as four edge references in counterclockwise order,
//! starting at the incoming under-strand. The position of a crossing in
//! [`Diagram::crossings`] is its index in the total order used by incidence
//! signs; it only changes through [`Diagram::reorder_crossings`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed PD code: {0}")]
    Syntax(String),
    #[error("edge label {label} appears {count} times (expected exactly 2)")]
    EdgeMultiplicity { label: i64, count: usize },
    #[error("inconsistent orientation on the component containing edge {0}")]
    Orientation(i64),
    #[error("family parameter at position {0} is zero")]
    ZeroParameter(usize),
    #[error("braid word must have a positive even number of exponents, got {0}")]
    BraidLength(usize),
    #[error("invalid family parameters: {0}")]
    Family(String),
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("diagram has {0} crossings; at most 63 are supported")]
    TooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

/// `(crossing index, slot)` where slot 0 is the incoming under-strand and
/// slots proceed counterclockwise.
pub type Slot = (usize, u8);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    /// Internal edge indices at slots 0..4.
    pub edges: [usize; 4],
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Label used in the PD code this edge was read from.
    pub label: i64,
    pub tail: Slot,
    pub head: Slot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    edges: Vec<Edge>,
    /// Edge indices of each component, in orientation order.
    components: Vec<Vec<usize>>,
    /// Crossing-free unknotted circles.
    free_loops: usize,
    /// Twist handedness (+1 / -1) recorded by the family constructors.
    twist: Option<Vec<i8>>,
}

impl Diagram {
    /// The 0-crossing diagram of the unknot.
    pub fn unknot() -> Self {
        Diagram {
            crossings: vec![],
            edges: vec![],
            components: vec![],
            free_loops: 1,
            twist: Some(vec![]),
        }
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.len() + self.free_loops
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Per-crossing twist handedness when the diagram came from a family
    /// constructor.
    pub fn twist(&self) -> Option<&[i8]> {
        self.twist.as_deref()
    }

    /// `(p, n, w)`: positive crossings, negative crossings and writhe.
    pub fn stats(&self) -> (usize, usize, i64) {
        let p = self
            .crossings
            .iter()
            .filter(|c| c.sign == Sign::Positive)
            .count();
        let n = self.crossings.len() - p;
        (p, n, p as i64 - n as i64)
    }

    /// Parses either the `X(a,b,c,d),...` grammar or a JSON array of
    /// four-element integer arrays. Crossing order follows the listing.
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let trimmed = text.trim();
        let quads = if trimmed.starts_with('[') {
            serde_json::from_str::<Vec<Vec<i64>>>(trimmed)
                .map_err(|e| DiagramError::Syntax(e.to_string()))?
                .into_iter()
                .map(|q| {
                    <[i64; 4]>::try_from(q.as_slice()).map_err(|_| {
                        DiagramError::Syntax(format!("expected 4 labels, got {:?}", q))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            parse_x_terms(trimmed)?
        };
        Self::from_quads(&quads)
    }

    /// Builds a diagram from PD quadruples, inferring orientations.
    pub fn from_quads(quads: &[[i64; 4]]) -> Result<Self, DiagramError> {
        if quads.len() > 63 {
            return Err(DiagramError::TooLarge(quads.len()));
        }
        if quads.is_empty() {
            return Ok(Self::unknot());
        }
        let mut labels: Vec<i64> = quads.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        let index: HashMap<i64, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();

        let mut ends: Vec<Vec<Slot>> = vec![Vec::new(); labels.len()];
        for (x, q) in quads.iter().enumerate() {
            for (s, l) in q.iter().enumerate() {
                ends[index[l]].push((x, s as u8));
            }
        }
        for (e, slots) in ends.iter().enumerate() {
            if slots.len() != 2 {
                return Err(DiagramError::EdgeMultiplicity {
                    label: labels[e],
                    count: slots.len(),
                });
            }
        }
        let edge_at = |x: usize, s: u8| index[&quads[x][s as usize]];

        // Walk every component; `heading` is the end of the current edge we
        // are travelling towards.
        let mut visited = vec![false; labels.len()];
        let mut heads: Vec<Option<Slot>> = vec![None; labels.len()];
        let mut components = Vec::new();
        for start in 0..labels.len() {
            if visited[start] {
                continue;
            }
            let mut walk: Vec<(usize, Slot)> = Vec::new();
            let (mut e, mut heading) = (start, ends[start][1]);
            loop {
                visited[e] = true;
                walk.push((e, heading));
                let (x, s) = heading;
                let s_out = (s + 2) % 4;
                let e_next = edge_at(x, s_out);
                let from = (x, s_out);
                let other = if ends[e_next][0] == from {
                    ends[e_next][1]
                } else {
                    ends[e_next][0]
                };
                e = e_next;
                heading = other;
                if e == start && heading == ends[start][1] {
                    break;
                }
            }
            // Under-strand passages pin the direction: slot 0 must be entered.
            let (mut fwd, mut bwd) = (0usize, 0usize);
            for &(_, (_, s)) in &walk {
                match s {
                    0 => fwd += 1,
                    2 => bwd += 1,
                    _ => {}
                }
            }
            if fwd > 0 && bwd > 0 {
                return Err(DiagramError::Orientation(labels[start]));
            }
            let forward = if fwd + bwd > 0 {
                fwd > 0
            } else {
                // Over-only component: follow increasing label succession.
                let m = walk.len();
                let succ = |a: usize, b: usize| labels[b] == labels[a] + 1;
                let f = (0..m)
                    .filter(|&k| succ(walk[k].0, walk[(k + 1) % m].0))
                    .count();
                let b = (0..m)
                    .filter(|&k| succ(walk[(k + 1) % m].0, walk[k].0))
                    .count();
                f >= b
            };
            let mut comp = Vec::with_capacity(walk.len());
            for &(e, h) in &walk {
                let head = if forward {
                    h
                } else if ends[e][0] == h {
                    ends[e][1]
                } else {
                    ends[e][0]
                };
                heads[e] = Some(head);
                comp.push(e);
            }
            if !forward {
                comp.reverse();
            }
            components.push(comp);
        }

        let edges: Vec<Edge> = (0..labels.len())
            .map(|e| {
                let head = heads[e].expect("every edge lies on a component");
                let tail = if ends[e][0] == head {
                    ends[e][1]
                } else {
                    ends[e][0]
                };
                Edge {
                    label: labels[e],
                    tail,
                    head,
                }
            })
            .collect();
        let crossings = quads
            .iter()
            .enumerate()
            .map(|(x, q)| {
                let ix = [index[&q[0]], index[&q[1]], index[&q[2]], index[&q[3]]];
                // Over strand leaving through slot 1 means it runs d -> b.
                let sign = if edges[ix[1]].tail == (x, 1) {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                Crossing { edges: ix, sign }
            })
            .collect();
        Ok(Diagram {
            crossings,
            edges,
            components,
            free_loops: 0,
            twist: None,
        })
    }

    /// PD quadruples using the original edge labels.
    pub fn quads(&self) -> Vec<[i64; 4]> {
        self.crossings
            .iter()
            .map(|c| c.edges.map(|e| self.edges[e].label))
            .collect()
    }

    /// Renders the `X(a,b,c,d),...` form.
    pub fn to_pd_string(&self) -> String {
        self.quads()
            .iter()
            .map(|q| format!("X({},{},{},{})", q[0], q[1], q[2], q[3]))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Returns the same diagram with crossing `perm[k]` moved to position `k`.
    pub fn reorder_crossings(&self, perm: &[usize]) -> Result<Self, DiagramError> {
        let n = self.crossings.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(DiagramError::NotPermutation(n));
        }
        let mut new_pos = vec![0; n];
        for (k, &old) in perm.iter().enumerate() {
            new_pos[old] = k;
        }
        let remap = |(x, s): Slot| (new_pos[x], s);
        Ok(Diagram {
            crossings: perm.iter().map(|&old| self.crossings[old].clone()).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    label: e.label,
                    tail: remap(e.tail),
                    head: remap(e.head),
                })
                .collect(),
            components: self.components.clone(),
            free_loops: self.free_loops,
            twist: self
                .twist
                .as_ref()
                .map(|t| perm.iter().map(|&old| t[old]).collect()),
        })
    }

    /// Mirror image: every crossing switches over and under strands.
    pub fn mirror(&self) -> Self {
        let quads: Vec<[i64; 4]> = self
            .quads()
            .into_iter()
            .zip(&self.crossings)
            .map(|([a, b, c, d], x)| match x.sign {
                Sign::Positive => [d, a, b, c],
                Sign::Negative => [b, c, d, a],
            })
            .collect();
        let mut m = Self::from_quads(&quads).expect("mirror of a valid diagram is valid");
        m.free_loops = self.free_loops;
        m.twist = self
            .twist
            .as_ref()
            .map(|t| t.iter().map(|&v| -v).collect());
        m
    }

    /// Standard pretzel diagram `P(a_1, ..., a_n)`: vertical twist bands side
    /// by side, crossings numbered band by band from the top.
    pub fn pretzel(a: &[i64]) -> Result<Self, DiagramError> {
        check_nonzero(a)?;
        if a.is_empty() {
            return Err(DiagramError::Family("empty pretzel".into()));
        }
        let mut b = PlanarBuilder::default();
        let mut bands = Vec::new();
        for &t in a {
            let first = b.crossings();
            for k in 0..t.unsigned_abs() as usize {
                let c = b.add(vertical_over_nw_se(t), t.signum() as i8);
                if k > 0 {
                    b.connect((c - 1, SW), (c, NW));
                    b.connect((c - 1, SE), (c, NE));
                }
            }
            let last = b.crossings() - 1;
            bands.push(((first, NW), (first, NE), (last, SW), (last, SE)));
        }
        for l in 0..bands.len() {
            let (tl, _, bl, _) = bands[l];
            let (_, tr, _, br) = bands[(l + bands.len() - 1) % bands.len()];
            b.connect(tr, tl);
            b.connect(br, bl);
        }
        b.finish()
    }

    /// Monocircular diagram `D(h1, h2) = P(-1, ..., -1, h2)` with `h1` copies
    /// of `-1`.
    pub fn monocircular(h1: usize, h2: usize) -> Result<Self, DiagramError> {
        if h1 == 0 || h2 == 0 {
            return Err(DiagramError::Family(format!(
                "monocircular heights must be positive, got ({h1}, {h2})"
            )));
        }
        let mut a = vec![-1i64; h1];
        a.push(h2 as i64);
        Self::pretzel(&a)
    }

    /// Standard rational diagram `D(a_1, ..., a_m)`: alternating horizontal
    /// and vertical twist boxes, closed so that the last box stays twisted.
    pub fn rational(a: &[i64]) -> Result<Self, DiagramError> {
        check_nonzero(a)?;
        if a.is_empty() {
            return Err(DiagramError::Family("empty rational word".into()));
        }
        let mut b = PlanarBuilder::default();
        let c0 = b.add(horizontal_over_nw_se(a[0]), a[0].signum() as i8);
        // Tangle ends: NW, NE, SW, SE.
        let (nw, mut ne, sw, mut se) = ((c0, NW), (c0, NE), (c0, SW), (c0, SE));
        let mut sw = sw;
        for (box_ix, &t) in a.iter().enumerate() {
            let skip = usize::from(box_ix == 0);
            for _ in skip..t.unsigned_abs() as usize {
                if box_ix % 2 == 0 {
                    let c = b.add(horizontal_over_nw_se(t), t.signum() as i8);
                    b.connect(ne, (c, NW));
                    b.connect(se, (c, SW));
                    ne = (c, NE);
                    se = (c, SE);
                } else {
                    let c = b.add(vertical_over_nw_se(t), t.signum() as i8);
                    b.connect(sw, (c, NW));
                    b.connect(se, (c, NE));
                    sw = (c, SW);
                    se = (c, SE);
                }
            }
        }
        if a.len() % 2 == 1 {
            b.connect(nw, ne);
            b.connect(sw, se);
        } else {
            b.connect(nw, sw);
            b.connect(ne, se);
        }
        b.finish()
    }

    /// Closure of the 3-strand braid `s1^a1 s2^a2 s1^a3 ...`, strands oriented
    /// downwards, crossings in word order.
    pub fn braid3_closure(exponents: &[i64]) -> Result<Self, DiagramError> {
        if exponents.is_empty() || exponents.len() % 2 == 1 {
            return Err(DiagramError::BraidLength(exponents.len()));
        }
        check_nonzero(exponents)?;
        let mut b = PlanarBuilder::default();
        let mut top: [Option<(usize, u8)>; 3] = [None; 3];
        let mut bottom: [Option<(usize, u8)>; 3] = [None; 3];
        for (k, &t) in exponents.iter().enumerate() {
            let left = k % 2;
            for _ in 0..t.unsigned_abs() {
                // Positive generator: over strand runs NE -> SW.
                let c = b.add(t < 0, t.signum() as i8);
                for (pos, port) in [(left, NW), (left + 1, NE)] {
                    match bottom[pos] {
                        Some(p) => b.connect(p, (c, port)),
                        None => top[pos] = Some((c, port)),
                    }
                }
                bottom[left] = Some((c, SW));
                bottom[left + 1] = Some((c, SE));
            }
        }
        for pos in 0..3 {
            b.connect(bottom[pos].unwrap(), top[pos].unwrap());
        }
        b.finish()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            write!(f, "unknot")
        } else {
            f.write_str(&self.to_pd_string())
        }
    }
}

fn check_nonzero(a: &[i64]) -> Result<(), DiagramError> {
    match a.iter().position(|&v| v == 0) {
        Some(p) => Err(DiagramError::ZeroParameter(p)),
        None => Ok(()),
    }
}

fn parse_x_terms(text: &str) -> Result<Vec<[i64; 4]>, DiagramError> {
    let mut out = Vec::new();
    let mut rest = text;
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix('X')
            .ok_or_else(|| DiagramError::Syntax(format!("expected 'X' at {:?}", clip(rest))))?
            .trim_start();
        let close = match body.chars().next() {
            Some('(') => ')',
            Some('[') => ']',
            _ => return Err(DiagramError::Syntax(format!("expected '(' at {:?}", clip(body)))),
        };
        let end = body
            .find(close)
            .ok_or_else(|| DiagramError::Syntax("unterminated crossing".into()))?;
        let nums = body[1..end]
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| DiagramError::Syntax(format!("bad label {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let quad = <[i64; 4]>::try_from(nums.as_slice()).map_err(|_| {
            DiagramError::Syntax(format!("crossing needs 4 labels, got {}", nums.len()))
        })?;
        out.push(quad);
        rest = body[end + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r;
        } else if !rest.is_empty() {
            return Err(DiagramError::Syntax(format!("expected ',' at {:?}", clip(rest))));
        }
    }
    Ok(out)
}

fn clip(s: &str) -> &str {
    &s[..s.len().min(12)]
}

// Builder ports, counterclockwise. Strands run NW-SE and SW-NE.
const NW: u8 = 0;
const SW: u8 = 1;
const SE: u8 = 2;
const NE: u8 = 3;

/// Positive vertical twists put the NW-SE strand under, so their A-smoothing
/// keeps two vertical rails.
fn vertical_over_nw_se(t: i64) -> bool {
    t < 0
}

/// Positive horizontal twists put the NW-SE strand over, so their A-smoothing
/// keeps two horizontal rails.
fn horizontal_over_nw_se(t: i64) -> bool {
    t > 0
}

#[derive(Default)]
struct PlanarBuilder {
    over_nw_se: Vec<bool>,
    twist: Vec<i8>,
    links: Vec<[Option<(usize, u8)>; 4]>,
}

impl PlanarBuilder {
    fn crossings(&self) -> usize {
        self.over_nw_se.len()
    }

    fn add(&mut self, over_nw_se: bool, twist: i8) -> usize {
        self.over_nw_se.push(over_nw_se);
        self.twist.push(twist);
        self.links.push([None; 4]);
        self.over_nw_se.len() - 1
    }

    fn connect(&mut self, a: (usize, u8), b: (usize, u8)) {
        debug_assert!(self.links[a.0][a.1 as usize].is_none());
        debug_assert!(self.links[b.0][b.1 as usize].is_none());
        self.links[a.0][a.1 as usize] = Some(b);
        self.links[b.0][b.1 as usize] = Some(a);
    }

    /// Orients each component downwards at its first visit, labels edges
    /// consecutively along the orientation and emits PD quadruples.
    fn finish(self) -> Result<Diagram, DiagramError> {
        let n = self.crossings();
        let port = |x: usize, p: u8| {
            self.links[x][p as usize]
                .ok_or_else(|| DiagramError::Family(format!("dangling port {p} at {x}")))
        };
        // label[x][p] of the edge attached at port p of crossing x.
        let mut label = vec![[0i64; 4]; n];
        let mut entered = vec![[false; 4]; n];
        let mut next_label = 1;
        for x in 0..n {
            for p in [NW, NE, SW, SE] {
                if label[x][p as usize] != 0 {
                    continue;
                }
                // Leave crossing x through the bottom port opposite p.
                let (mut cx, mut cp) = (x, (p + 2) % 4);
                loop {
                    let (nx, np) = port(cx, cp)?;
                    label[cx][cp as usize] = next_label;
                    label[nx][np as usize] = next_label;
                    entered[nx][np as usize] = true;
                    next_label += 1;
                    cx = nx;
                    cp = (np + 2) % 4;
                    if (nx, np) == (x, p) {
                        break;
                    }
                }
            }
        }
        let quads: Vec<[i64; 4]> = (0..n)
            .map(|x| {
                let under = if self.over_nw_se[x] { [SW, NE] } else { [NW, SE] };
                let u = *under
                    .iter()
                    .find(|&&p| entered[x][p as usize])
                    .expect("under strand is entered at one end");
                [0u8, 1, 2, 3].map(|k| label[x][((u + k) % 4) as usize])
            })
            .collect();
        let mut d = Diagram::from_quads(&quads)?;
        d.twist = Some(self.twist);
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_code() {
        let d = Diagram::parse_pd("X(1,3,2,4),X(3,1,4,2)").unwrap();
        assert_eq!(d.num_crossings(), 2);
        assert_eq!(d.num_edges(), 4);
        assert_eq!(d.num_components(), 2);
    }

    #[test]
    fn json_form_matches_text_form() {
        let a = Diagram::parse_pd("X(1,3,2,4), X(3,1,4,2)").unwrap();
        let b = Diagram::parse_pd("[[1,3,2,4],[3,1,4,2]]").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn arity_error() {
        assert!(matches!(
            Diagram::parse_pd("X(1,2,3)"),
            Err(DiagramError::Syntax(_))
        ));
        assert!(matches!(
            Diagram::parse_pd("X(1,2,3,4) Y"),
            Err(DiagramError::Syntax(_))
        ));
    }

    #[test]
    fn edge_multiplicity_error() {
        assert_eq!(
            Diagram::parse_pd("X(1,3,2,4),X(3,1,4,5)"),
            Err(DiagramError::EdgeMultiplicity { label: 2, count: 1 })
        );
    }

    #[test]
    fn inconsistent_orientation() {
        // Both crossings claim edge 1 as incoming under-strand.
        assert!(matches!(
            Diagram::parse_pd("X(1,3,2,4),X(1,4,2,3)"),
            Err(DiagramError::Orientation(_))
        ));
    }

    #[test]
    fn trefoil_is_consistently_signed() {
        let d = Diagram::parse_pd("X(1,5,2,4),X(3,1,4,6),X(5,3,6,2)").unwrap();
        let (p, n, _) = d.stats();
        assert!(p == 3 || n == 3);
        assert_eq!(d.mirror().stats(), (n, p, n as i64 - p as i64));
    }

    #[test]
    fn family_sizes() {
        assert_eq!(Diagram::pretzel(&[-1, 3]).unwrap().num_crossings(), 4);
        assert_eq!(Diagram::pretzel(&[5, -3, 2, 3, -2]).unwrap().num_crossings(), 15);
        assert_eq!(Diagram::monocircular(10, 15).unwrap().num_crossings(), 25);
        assert_eq!(Diagram::rational(&[4, 2, 6]).unwrap().num_crossings(), 12);
        assert_eq!(Diagram::braid3_closure(&[7, 2]).unwrap().num_crossings(), 9);
        assert_eq!(Diagram::braid3_closure(&[3, -2, 2, 2]).unwrap().num_crossings(), 9);
    }

    #[test]
    fn family_errors() {
        assert_eq!(Diagram::pretzel(&[1, 0]), Err(DiagramError::ZeroParameter(1)));
        assert_eq!(Diagram::rational(&[0]), Err(DiagramError::ZeroParameter(0)));
        assert_eq!(Diagram::braid3_closure(&[]), Err(DiagramError::BraidLength(0)));
        assert!(Diagram::monocircular(0, 3).is_err());
    }

    #[test]
    fn stats_of_families() {
        assert_eq!(Diagram::pretzel(&[-1, -1, -1, 6]).unwrap().stats(), (6, 3, 3));
        assert_eq!(Diagram::braid3_closure(&[7, 2]).unwrap().stats(), (9, 0, 9));
        assert_eq!(Diagram::braid3_closure(&[2, -2]).unwrap().stats(), (2, 2, 0));
    }

    #[test]
    fn monocircular_is_a_pretzel() {
        assert_eq!(
            Diagram::monocircular(3, 6).unwrap(),
            Diagram::pretzel(&[-1, -1, -1, 6]).unwrap()
        );
    }

    #[test]
    fn every_edge_has_two_ends() {
        for d in [
            Diagram::pretzel(&[5, -3, 2, 3, -2]).unwrap(),
            Diagram::rational(&[3, -2, 4]).unwrap(),
            Diagram::braid3_closure(&[3, -2, 2, 2]).unwrap(),
        ] {
            let mut count = vec![0; d.num_edges()];
            for c in d.crossings() {
                for &e in &c.edges {
                    count[e] += 1;
                }
            }
            assert!(count.iter().all(|&k| k == 2));
            let (p, n, w) = d.stats();
            assert_eq!(p + n, d.num_crossings());
            assert_eq!(w, p as i64 - n as i64);
        }
    }

    #[test]
    fn reorder_identity_and_errors() {
        let d = Diagram::pretzel(&[-1, 3]).unwrap();
        assert_eq!(d.reorder_crossings(&[0, 1, 2, 3]).unwrap(), d);
        assert_eq!(
            d.reorder_crossings(&[0, 0, 1, 2]),
            Err(DiagramError::NotPermutation(4))
        );
        let r = d.reorder_crossings(&[3, 2, 1, 0]).unwrap();
        assert_eq!(r.crossings()[0], d.crossings()[3]);
        assert_eq!(r.stats(), d.stats());
    }

    #[test]
    fn pd_string_round_trip() {
        let d = Diagram::rational(&[3, -2, 4]).unwrap();
        let e = Diagram::parse_pd(&d.to_pd_string()).unwrap();
        assert_eq!(d.quads(), e.quads());
        assert_eq!(d.stats(), e.stats());
    }
}
