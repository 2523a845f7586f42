//! Blue ladders of a smoothed diagram, their periphery numbers, and the
//! hypothesis checks that gate the torsion constructions.
//!
//! Two blue crossings are adjacent steps when they bound a bigon: they share
//! two distinct edges sitting in cyclically adjacent slots at both crossings,
//! and neither A-smoothing joins those two edges. Ladders are the connected
//! components of this adjacency.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Diagram, Sign};
use crate::smoothing::{smooth, KauffmanState, Label};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LadderError {
    #[error("state has {got} labels but the diagram has {expected} crossings")]
    StateSize { got: usize, expected: usize },
    #[error("crossing {0} is not a blue scar of the state")]
    NotBlue(usize),
    #[error("steps {steps:?} give periphery count {count}, not a ladder")]
    NotALadder { steps: Vec<usize>, count: i64 },
}

/// Slot pairs that an A-smoothing keeps apart.
const SIDES: [[u8; 2]; 2] = [[1, 2], [3, 0]];

/// A maximal run of parallel blue steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ladder {
    /// Crossing indices in rail order, starting from the first step.
    pub steps: Vec<usize>,
    /// The two edges between consecutive steps; a cyclic ladder also has
    /// the gap closing the cycle as its last entry.
    pub gaps: Vec<[usize; 2]>,
    pub cyclic: bool,
    pub periphery: u8,
}

impl Ladder {
    pub fn height(&self) -> usize {
        self.steps.len()
    }

    /// The two rails as edge sequences, one edge per gap.
    pub fn rails(&self, d: &Diagram) -> (Vec<usize>, Vec<usize>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (k, g) in self.gaps.iter().enumerate() {
            let (e, f) = match a.last() {
                None => (g[0], g[1]),
                Some(&prev) => {
                    // Same A-arc at the shared step means same rail.
                    let x = self.steps[k];
                    let arc = |edge: usize| {
                        d.crossings()[x]
                            .edges
                            .iter()
                            .position(|&t| t == edge)
                            .map(|s| s / 2)
                    };
                    if arc(g[0]) == arc(prev) {
                        (g[0], g[1])
                    } else {
                        (g[1], g[0])
                    }
                }
            };
            a.push(e);
            b.push(f);
        }
        (a, b)
    }
}

#[derive(Clone, Copy, Debug)]
struct Bigon {
    x: usize,
    y: usize,
    edges: [usize; 2],
}

fn other_end(d: &Diagram, e: usize, x: usize, slot: u8) -> (usize, u8) {
    let edge = &d.edges()[e];
    if edge.tail == (x, slot) {
        edge.head
    } else {
        edge.tail
    }
}

fn bigons(d: &Diagram, s: &KauffmanState) -> Vec<Bigon> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (x, c) in d.crossings().iter().enumerate() {
        if s.label(x) != Label::A {
            continue;
        }
        for side in SIDES {
            let (e, f) = (c.edges[side[0] as usize], c.edges[side[1] as usize]);
            if e == f {
                continue;
            }
            let (y, sy) = other_end(d, e, x, side[0]);
            let (y2, sy2) = other_end(d, f, x, side[1]);
            if y != y2 || y == x || s.label(y) != Label::A {
                continue;
            }
            let adjacent = SIDES
                .iter()
                .any(|p| (p[0] == sy && p[1] == sy2) || (p[0] == sy2 && p[1] == sy));
            if !adjacent {
                continue;
            }
            let key = (e.min(f), e.max(f));
            if seen.insert(key) {
                out.push(Bigon {
                    x: x.min(y),
                    y: x.max(y),
                    edges: [e, f],
                });
            }
        }
    }
    out
}

fn check_len(d: &Diagram, s: &KauffmanState) -> Result<(), LadderError> {
    if s.len() != d.num_crossings() {
        return Err(LadderError::StateSize {
            got: s.len(),
            expected: d.num_crossings(),
        });
    }
    Ok(())
}

/// Circles touching the steps once every ladder is cut, minus the
/// intermediate circles. Every blue scar lies in some ladder, so cutting
/// all ladders is the all-B state and the count does not depend on `s0`.
fn periphery_count(d: &Diagram, steps: &[usize]) -> i64 {
    let sm = smooth(d, &KauffmanState::all_b(d.num_crossings())).expect("state sized to diagram");
    let circles: BTreeSet<usize> = steps
        .iter()
        .flat_map(|&x| {
            let c = sm.scar(x).circles;
            [c.0, c.1]
        })
        .collect();
    circles.len() as i64 - (steps.len() as i64 - 1)
}

/// Periphery number of the ladder whose steps are `steps`.
pub fn periphery_number(
    d: &Diagram,
    s0: &KauffmanState,
    steps: &[usize],
) -> Result<u8, LadderError> {
    check_len(d, s0)?;
    if let Some(&x) = steps.iter().find(|&&x| s0.label(x) != Label::A) {
        return Err(LadderError::NotBlue(x));
    }
    match periphery_count(d, steps) {
        c @ (1 | 2) => Ok(c as u8),
        count => Err(LadderError::NotALadder {
            steps: steps.to_vec(),
            count,
        }),
    }
}

/// All ladders of `s0 D`, ordered by their smallest crossing index.
pub fn detect_ladders(d: &Diagram, s0: &KauffmanState) -> Result<Vec<Ladder>, LadderError> {
    check_len(d, s0)?;
    let n = d.num_crossings();
    let bg = bigons(d, s0);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, b) in bg.iter().enumerate() {
        adj[b.x].push(k);
        adj[b.y].push(k);
    }
    let across = |b: &Bigon, from: usize| if b.x == from { b.y } else { b.x };

    let mut done = vec![false; n];
    let mut ladders = Vec::new();
    for start in 0..n {
        if done[start] || s0.label(start) != Label::A {
            continue;
        }
        // Collect the component.
        let mut comp = vec![start];
        done[start] = true;
        let mut k = 0;
        while k < comp.len() {
            for &b in &adj[comp[k]] {
                let y = across(&bg[b], comp[k]);
                if !done[y] {
                    done[y] = true;
                    comp.push(y);
                }
            }
            k += 1;
        }
        let cyclic = comp.iter().all(|&x| adj[x].len() == 2);
        let first = if cyclic || comp.len() == 1 {
            *comp.iter().min().unwrap()
        } else {
            *comp.iter().filter(|&&x| adj[x].len() == 1).min().unwrap()
        };
        let mut steps = vec![first];
        let mut gaps = Vec::new();
        let mut came: Option<usize> = None;
        let mut cur = first;
        loop {
            let mut options: Vec<usize> = adj[cur]
                .iter()
                .copied()
                .filter(|&b| Some(b) != came)
                .collect();
            options.sort_by_key(|&b| (across(&bg[b], cur), b));
            let Some(&b) = options.first() else { break };
            let next = across(&bg[b], cur);
            gaps.push(bg[b].edges);
            if next == first {
                break;
            }
            steps.push(next);
            came = Some(b);
            cur = next;
        }
        let periphery = periphery_count(d, &steps).clamp(0, 255) as u8;
        ladders.push(Ladder {
            steps,
            gaps,
            cyclic,
            periphery,
        });
    }
    Ok(ladders)
}

/// `s0` with the first step of every ladder turned red, and `|s1 D|`.
pub fn break_ladders(d: &Diagram, s0: &KauffmanState, ladders: &[Ladder]) -> (KauffmanState, usize) {
    let mut s = *s0;
    for l in ladders {
        s = s.with_label(l.steps[0], Label::B);
    }
    let circles = smooth(d, &s).expect("state sized to diagram").num_circles();
    (s, circles)
}

/// Crossing permutation placing ladder steps first, in ladder and rail
/// order, followed by the remaining crossings. `perm[k]` is the old index
/// placed at position `k`.
pub fn ladder_first_order(ladders: &[Ladder], n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = ladders.iter().flat_map(|l| l.steps.iter().copied()).collect();
    let used: BTreeSet<usize> = perm.iter().copied().collect();
    perm.extend((0..n).filter(|x| !used.contains(x)));
    perm
}

/// A on positive crossings and B on negative ones. Family diagrams use the
/// twist sign of the band or box a crossing belongs to; other diagrams use
/// the oriented crossing sign.
pub fn signed_state(d: &Diagram) -> KauffmanState {
    let labels: Vec<Label> = match d.twist() {
        Some(t) => t
            .iter()
            .map(|&s| if s > 0 { Label::A } else { Label::B })
            .collect(),
        None => d
            .crossings()
            .iter()
            .map(|c| match c.sign {
                Sign::Positive => Label::A,
                Sign::Negative => Label::B,
            })
            .collect(),
    };
    KauffmanState::from_labels(&labels)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Theorem,
    Corollary,
    Neither,
}

/// Outcome of the ladder hypotheses for an initial state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub schema: u32,
    pub crossings: usize,
    pub s0: u64,
    pub ladders: Vec<Ladder>,
    pub heights_at_least_two: bool,
    pub all_periphery_one: bool,
    pub has_tall_ladder: bool,
    pub has_tall_periphery_one: bool,
    pub red_scars_become_bichords: bool,
    pub accepted_theorem: bool,
    pub accepted_corollary: bool,
    pub route: Route,
    pub s1: u64,
    pub i0: usize,
    pub s1_circles: usize,
    /// Periphery-two ladders turned red, for the corollary route.
    pub s0_prime: Option<u64>,
    pub failures: Vec<String>,
}

impl HypothesisReport {
    pub fn heights(&self) -> Vec<usize> {
        self.ladders.iter().map(Ladder::height).collect()
    }

    pub fn peripheries(&self) -> Vec<u8> {
        self.ladders.iter().map(|l| l.periphery).collect()
    }
}

pub fn check_hypotheses(d: &Diagram, s0: &KauffmanState) -> Result<HypothesisReport, LadderError> {
    let ladders = detect_ladders(d, s0)?;
    let mut failures = Vec::new();

    let short: Vec<usize> = ladders
        .iter()
        .filter(|l| l.height() < 2)
        .map(|l| l.steps[0])
        .collect();
    let heights_at_least_two = short.is_empty();
    if ladders.is_empty() {
        failures.push("no blue ladders".to_string());
    }
    if !heights_at_least_two {
        failures.push(format!("ladders of height 1 at crossings {short:?}"));
    }
    let odd: Vec<usize> = ladders
        .iter()
        .filter(|l| !matches!(l.periphery, 1 | 2))
        .map(|l| l.steps[0])
        .collect();
    if !odd.is_empty() {
        failures.push(format!("ladders at {odd:?} have periphery outside 1..=2"));
    }
    let all_periphery_one = ladders.iter().all(|l| l.periphery == 1);
    if !all_periphery_one {
        failures.push("some ladder has periphery number 2".to_string());
    }
    let has_tall_ladder = ladders.iter().any(|l| l.height() >= 3);
    if !has_tall_ladder {
        failures.push("no ladder of height at least 3".to_string());
    }
    let has_tall_periphery_one = ladders
        .iter()
        .any(|l| l.height() >= 3 && l.periphery == 1);
    if has_tall_ladder && !has_tall_periphery_one {
        failures.push("no ladder of height at least 3 with periphery number 1".to_string());
    }

    let (s1, s1_circles) = break_ladders(d, s0, &ladders);
    let sm1 = smooth(d, &s1).expect("state sized to diagram");
    let mono: Vec<usize> = s0.red().filter(|&x| sm1.scar(x).is_monochord()).collect();
    let red_scars_become_bichords = mono.is_empty();
    if !red_scars_become_bichords {
        failures.push(format!(
            "red scars at crossings {mono:?} are monochords once ladders are broken"
        ));
    }

    let base = !ladders.is_empty() && heights_at_least_two && odd.is_empty() && red_scars_become_bichords;
    let accepted_theorem = base && all_periphery_one && has_tall_ladder;
    let accepted_corollary = base && has_tall_periphery_one;
    let route = if accepted_theorem {
        Route::Theorem
    } else if accepted_corollary {
        Route::Corollary
    } else {
        Route::Neither
    };
    let s0_prime = (route == Route::Corollary).then(|| {
        let mut s = *s0;
        for l in ladders.iter().filter(|l| l.periphery == 2) {
            for &x in &l.steps {
                s = s.with_label(x, Label::B);
            }
        }
        s.bits()
    });
    Ok(HypothesisReport {
        schema: 1,
        crossings: d.num_crossings(),
        s0: s0.bits(),
        i0: s0.num_b(),
        ladders,
        heights_at_least_two,
        all_periphery_one,
        has_tall_ladder,
        has_tall_periphery_one,
        red_scars_become_bichords,
        accepted_theorem,
        accepted_corollary,
        route,
        s1: s1.bits(),
        s1_circles,
        s0_prime,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_a(d: &Diagram) -> KauffmanState {
        KauffmanState::all_a(d.num_crossings())
    }

    #[test]
    fn hopf_pretzel_ladders() {
        let d = Diagram::pretzel(&[-1, 3]).unwrap();
        let ls = detect_ladders(&d, &all_a(&d)).unwrap();
        let mut h: Vec<usize> = ls.iter().map(Ladder::height).collect();
        h.sort_unstable();
        assert_eq!(h, vec![1, 3]);
        let r = check_hypotheses(&d, &all_a(&d)).unwrap();
        assert_eq!(r.route, Route::Neither);
        assert!(!r.heights_at_least_two);
        assert!(r.failures.iter().any(|f| f.contains("height 1")));
    }

    #[test]
    fn monocircular_three_six() {
        let d = Diagram::monocircular(3, 6).unwrap();
        let s = all_a(&d);
        assert_eq!(smooth(&d, &s).unwrap().num_circles(), 1);
        let ls = detect_ladders(&d, &s).unwrap();
        assert_eq!(ls.iter().map(Ladder::height).collect::<Vec<_>>(), vec![3, 6]);
        assert!(ls.iter().all(|l| l.periphery == 1 && !l.cyclic));
        let r = check_hypotheses(&d, &s).unwrap();
        assert_eq!(r.route, Route::Theorem);
        assert!(r.accepted_corollary);
        assert_eq!(r.s1_circles, 1);
        assert_eq!(r.i0, 0);
    }

    #[test]
    fn monocircular_one_one() {
        let d = Diagram::monocircular(1, 1).unwrap();
        let s = all_a(&d);
        assert_eq!(smooth(&d, &s).unwrap().num_circles(), 1);
        let ls = detect_ladders(&d, &s).unwrap();
        assert_eq!(ls.iter().map(Ladder::height).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn partition_of_blue_scars() {
        for d in [
            Diagram::pretzel(&[5, -3, 2, 3, -2]).unwrap(),
            Diagram::rational(&[4, 2, 6]).unwrap(),
            Diagram::braid3_closure(&[7, 2]).unwrap(),
        ] {
            for s in [all_a(&d), signed_state(&d)] {
                let ls = detect_ladders(&d, &s).unwrap();
                let mut all: Vec<usize> = ls.iter().flat_map(|l| l.steps.clone()).collect();
                all.sort_unstable();
                assert_eq!(all, s.blue().collect::<Vec<_>>());
                for l in &ls {
                    assert_eq!(l.gaps.len(), l.height() - 1 + l.cyclic as usize);
                    assert_eq!(periphery_number(&d, &s, &l.steps), Ok(l.periphery));
                }
            }
        }
    }

    #[test]
    fn ladders_ordered_by_minimum_index() {
        let d = Diagram::pretzel(&[5, -3, 2, 3, -2]).unwrap();
        let ls = detect_ladders(&d, &signed_state(&d)).unwrap();
        let mins: Vec<usize> = ls.iter().map(|l| *l.steps.iter().min().unwrap()).collect();
        assert!(mins.windows(2).all(|w| w[0] < w[1]));
        for l in &ls {
            if !l.cyclic {
                assert!(l.steps[0] < *l.steps.last().unwrap() || l.height() == 1);
            }
        }
    }

    #[test]
    fn signed_pretzel_ladders_follow_positive_bands() {
        let d = Diagram::pretzel(&[5, -3, 2, 3, -2]).unwrap();
        let r = check_hypotheses(&d, &signed_state(&d)).unwrap();
        assert_eq!(r.heights(), vec![5, 2, 3]);
        assert!(r.peripheries().iter().all(|&p| p == 1));
        assert_eq!(r.route, Route::Theorem);
    }

    #[test]
    fn rational_all_positive_periphery_one() {
        for a in [vec![4, 2, 6], vec![3, 2], vec![2, 3, 2, 2]] {
            let d = Diagram::rational(&a).unwrap();
            let r = check_hypotheses(&d, &all_a(&d)).unwrap();
            let mut h = r.heights();
            let mut want: Vec<usize> = a.iter().map(|&x| x as usize).collect();
            h.sort_unstable();
            want.sort_unstable();
            assert_eq!(h, want, "rational {a:?}");
            assert!(r.peripheries().iter().all(|&p| p == 1), "rational {a:?}");
        }
    }

    #[test]
    fn braid_seven_two_accepted() {
        let d = Diagram::braid3_closure(&[7, 2]).unwrap();
        let r = check_hypotheses(&d, &signed_state(&d)).unwrap();
        assert!(r.accepted_corollary && r.accepted_theorem);
        assert!(r
            .ladders
            .iter()
            .any(|l| l.height() == 7 && l.periphery == 1));
    }

    #[test]
    fn braid_corollary_route() {
        // The exponent 2 between 4 and -2 is not surrounded by positives.
        let d = Diagram::braid3_closure(&[4, 2, -2, 2]).unwrap();
        let r = check_hypotheses(&d, &signed_state(&d)).unwrap();
        assert_eq!(r.route, Route::Corollary);
        assert_eq!(r.peripheries(), vec![1, 2, 2]);
        let sp = KauffmanState::from_bits(r.s0_prime.unwrap(), d.num_crossings());
        let again = check_hypotheses(&d, &sp).unwrap();
        assert_eq!(again.route, Route::Theorem);
        assert_eq!(again.heights(), vec![4]);
    }

    #[test]
    fn no_blue_scars() {
        let d = Diagram::pretzel(&[-1, 3]).unwrap();
        let s = KauffmanState::all_b(d.num_crossings());
        let ls = detect_ladders(&d, &s).unwrap();
        assert!(ls.is_empty());
        let (s1, _) = break_ladders(&d, &s, &ls);
        assert_eq!(s1, s);
    }

    #[test]
    fn ladder_first_permutation() {
        let d = Diagram::pretzel(&[5, -3, 2, 3, -2]).unwrap();
        let ls = detect_ladders(&d, &signed_state(&d)).unwrap();
        let p = ladder_first_order(&ls, d.num_crossings());
        let mut sorted = p.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..d.num_crossings()).collect::<Vec<_>>());
        assert_eq!(&p[..5], &ls[0].steps[..]);
    }

    #[test]
    fn periphery_invariant_under_other_relabelings() {
        use rand::{Rng, SeedableRng};
        let d = Diagram::pretzel(&[5, -3, 2, 3, -2]).unwrap();
        let s0 = signed_state(&d);
        let ls = detect_ladders(&d, &s0).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for l in &ls {
            for _ in 0..20 {
                let mut s2 = s0;
                for x in 0..d.num_crossings() {
                    if !l.steps.contains(&x) && rng.gen_bool(0.5) {
                        s2 = s2.with_label(x, if rng.gen_bool(0.5) { Label::A } else { Label::B });
                    }
                }
                let still = detect_ladders(&d, &s2)
                    .unwrap()
                    .into_iter()
                    .any(|m| m.steps == l.steps);
                if still {
                    assert_eq!(periphery_number(&d, &s2, &l.steps), Ok(l.periphery));
                }
            }
        }
    }

    #[test]
    fn report_json_round_trip() {
        let d = Diagram::monocircular(3, 6).unwrap();
        let r = check_hypotheses(&d, &all_a(&d)).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: HypothesisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(text.contains("\"route\":\"theorem\""));
    }
}
