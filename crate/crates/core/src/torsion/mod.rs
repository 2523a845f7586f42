//! Explicit order-two torsion chains built from blue ladders, their
//! non-exactness certificates through even modules, and the combinatorics
//! that tells torsion classes apart.

mod bounds;
mod distinct;

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::ChainComplex;
use crate::diagram::{Diagram, DiagramError};
use crate::homology::{HomologyError, HomologyOracle, DEFAULT_CROSSING_LIMIT};
use crate::ladders::{
    break_ladders, check_hypotheses, detect_ladders, ladder_first_order, HypothesisReport, Ladder,
    LadderError, Route,
};
use crate::smoothing::{sign_masks, Chain, EnhancedState, KauffmanState, Label, SmoothedDiagram};

pub use bounds::{
    exhaustive_classes, family_lower_bound, rational_torsion_exists, BoundReport, Family,
    RationalReport,
};
pub use distinct::{
    admissible, compare_with_monocircular, mono_vs_mono, same_class, Grid, GridPoint,
};

#[derive(Debug, Error)]
pub enum TorsionError {
    #[error("hypotheses rejected: {}", .0.join("; "))]
    Rejected(Vec<String>),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("red scar at crossing {crossing} of state {state} is a monochord")]
    Monochord { crossing: usize, state: String },
    #[error("chain at ({got_i},{got_j}) does not match module degree ({i},{j})")]
    DegreeMismatch {
        got_i: i64,
        got_j: i64,
        i: i64,
        j: i64,
    },
    #[error("diagram has {crossings} crossings, above the enumeration limit {limit}")]
    TooLarge { crossings: usize, limit: usize },
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Which circle of each summand carries the minus sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enhancement {
    AllPlus,
    /// Minus on `C_i^0` of ladder `i` (0-based).
    PeripheryMinus(usize),
}

/// A state sum `s(M_1, ..., M_k; e)` over all subsets of the given sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSumSpec {
    pub sizes: Vec<usize>,
    pub enhancement: Enhancement,
}

/// A generated set of enhanced states with a single minus circle over one or
/// more Kauffman states whose red scars are all bichords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenModule {
    pub base: Vec<KauffmanState>,
    pub degrees: Option<(i64, i64)>,
    members: HashSet<crate::smoothing::StateKey>,
}

impl EvenModule {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: &EnhancedState) -> bool {
        self.members.contains(&e.key())
    }

    /// `ε(π(v))`.
    pub fn augmented_projection(&self, v: &Chain) -> i64 {
        v.iter()
            .filter(|(k, _)| self.members.contains(k))
            .map(|(_, c)| c)
            .sum()
    }

    /// Number of summands of `v` lying in the generating set.
    pub fn summands_in(&self, v: &Chain) -> usize {
        v.iter().filter(|(k, _)| self.members.contains(k)).count()
    }
}

/// Builds the module generated by every single-minus enhancement of `base`.
pub fn build_even_module(
    cx: &ChainComplex,
    base: &[KauffmanState],
) -> Result<EvenModule, TorsionError> {
    let mut members = HashSet::new();
    let mut degrees = None;
    for s in base {
        let sm = cx.smoothing(s.bits());
        if let Some(x) = s.red().find(|&x| sm.scar(x).is_monochord()) {
            return Err(TorsionError::Monochord {
                crossing: x,
                state: s.to_string(),
            });
        }
        let c = sm.num_circles();
        let i = s.num_b() as i64;
        let j = i + c as i64 - 2;
        match degrees {
            None => degrees = Some((i, j)),
            Some((i0, j0)) if (i0, j0) != (i, j) => {
                return Err(TorsionError::DegreeMismatch {
                    got_i: i,
                    got_j: j,
                    i: i0,
                    j: j0,
                })
            }
            _ => {}
        }
        for k in 0..c {
            members.insert(EnhancedState::new(*s, 1 << k, c).key());
        }
    }
    Ok(EvenModule {
        base: base.to_vec(),
        degrees,
        members,
    })
}

fn enhancements(sm: &SmoothedDiagram, j: i64) -> Vec<EnhancedState> {
    let s = sm.state();
    let c = sm.num_circles() as i64;
    let theta = j - s.num_b() as i64;
    if (c - theta) % 2 != 0 || theta.abs() > c {
        return Vec::new();
    }
    sign_masks(c as usize, ((c - theta) / 2) as usize)
        .map(|m| EnhancedState::new(s, m, c as usize))
        .collect()
}

/// Checks that `ε(π(d(Y)))` is even for every generator `Y` of
/// `C^{i-1,j}`. Only generators whose state is one red-to-blue flip away
/// from a base state can reach the module, so those are the ones visited.
pub fn verify_evenness(cx: &ChainComplex, m: &EvenModule) -> Result<bool, TorsionError> {
    if cx.n() > DEFAULT_CROSSING_LIMIT {
        return Err(TorsionError::TooLarge {
            crossings: cx.n(),
            limit: DEFAULT_CROSSING_LIMIT,
        });
    }
    let Some((_, j)) = m.degrees else {
        return Ok(true);
    };
    let mut sources = HashSet::new();
    for s in &m.base {
        for x in s.red() {
            sources.insert(s.with_label(x, Label::A).bits());
        }
    }
    for bits in sources {
        for y in enhancements(&cx.smoothing(bits), j) {
            if m.augmented_projection(&cx.differential(&y)) % 2 != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Same check over every generator of `C^{i-1,j}`.
pub fn verify_evenness_exhaustive(cx: &ChainComplex, m: &EvenModule) -> bool {
    let Some((i, j)) = m.degrees else {
        return true;
    };
    cx.basis(i - 1, j)
        .iter()
        .all(|y| m.augmented_projection(&cx.differential(y)) % 2 == 0)
}

/// Parity certificate: `ε(π(V))` odd implies `V` is not exact when the
/// module is even.
pub fn certify_not_exact(v: &Chain, m: &EvenModule) -> Result<bool, TorsionError> {
    check_module_degree(v, m)?;
    Ok(m.augmented_projection(v) % 2 != 0)
}

/// Literal form: exactly one summand of `V` lies in the generating set.
pub fn certify_not_exact_strict(v: &Chain, m: &EvenModule) -> Result<bool, TorsionError> {
    check_module_degree(v, m)?;
    Ok(m.summands_in(v) == 1)
}

fn check_module_degree(v: &Chain, m: &EvenModule) -> Result<(), TorsionError> {
    match m.degrees {
        Some((i, j)) if (i, j) != (v.i, v.j) && !v.is_zero() => Err(TorsionError::DegreeMismatch {
            got_i: v.i,
            got_j: v.j,
            i,
            j,
        }),
        _ => Ok(()),
    }
}

/// Verification flags carried by a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub dx_equals_2v: bool,
    pub dv_zero: bool,
    pub not_exact_parity: bool,
    pub exactly_one_summand: bool,
    pub degrees_match: bool,
    pub evenness: Option<bool>,
    pub oracle: Option<OracleCheck>,
}

/// Independent confirmation through the Smith normal form oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub v_exact: bool,
    pub twice_v_exact: bool,
    /// `None` for a class of infinite order.
    pub order: Option<u64>,
}

/// Serialized term: label bitmask, minus bitmask, coefficient.
pub type Term = (u64, u64, i64);

fn terms(c: &Chain) -> Vec<Term> {
    c.iter().map(|(k, &v)| (k.labels, k.minus, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub schema: u32,
    /// PD code of the diagram with crossings in ladder-first order.
    pub diagram: String,
    /// `order[k]` is the input crossing placed at position `k`.
    pub order: Vec<usize>,
    pub route: Route,
    /// Initial state actually used, in ladder-first order.
    pub s0: u64,
    pub heights: Vec<usize>,
    pub mu: Vec<usize>,
    pub i: i64,
    pub j: i64,
    pub h: i64,
    pub q: i64,
    pub generator: (u64, u64),
    pub x: Vec<Term>,
    pub v: Vec<Term>,
    pub checks: Checks,
    pub claimed_order: u64,
}

impl TorsionCertificate {
    pub fn is_valid(&self) -> bool {
        let c = &self.checks;
        c.dx_equals_2v
            && c.dv_zero
            && c.not_exact_parity
            && c.degrees_match
            && c.evenness != Some(false)
            && c.oracle.as_ref().is_none_or(|o| o.order == Some(2))
    }

    pub fn chain_v(&self) -> Chain {
        let mut v = Chain::zero(self.i, self.j);
        for &(l, m, c) in &self.v {
            v.add_term(
                crate::smoothing::StateKey {
                    labels: l,
                    minus: m,
                },
                c,
            );
        }
        v
    }
}

/// Outcome of `d(X) - 2V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub residual: Chain,
    pub dv_zero: bool,
}

impl Residual {
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.dv_zero
    }
}

/// A diagram reordered ladder-first together with its base state and
/// ladders; every chain is built in this crossing order.
pub struct Certifier {
    cx: ChainComplex,
    order: Vec<usize>,
    s0: KauffmanState,
    ladders: Vec<Ladder>,
    route: Route,
    s1_circles: usize,
    report: Option<HypothesisReport>,
}

impl Certifier {
    /// Checks the hypotheses and prepares the theorem or corollary route.
    pub fn new(d: &Diagram, s0: &KauffmanState) -> Result<Self, TorsionError> {
        Self::with_order(d, s0, true)
    }

    /// As [`Certifier::new`]; with `ladder_first` false the input crossing
    /// order is kept, and the sign rule of the chains may then fail.
    pub fn with_order(d: &Diagram, s0: &KauffmanState, ladder_first: bool) -> Result<Self, TorsionError> {
        let report = check_hypotheses(d, s0)?;
        let base = match report.route {
            Route::Theorem => *s0,
            Route::Corollary => {
                KauffmanState::from_bits(report.s0_prime.expect("corollary state"), s0.len())
            }
            Route::Neither => return Err(TorsionError::Rejected(report.failures.clone())),
        };
        let mut c = Self::prepare(d, &base, report.route, ladder_first)?;
        c.report = Some(report);
        Ok(c)
    }

    /// No hypothesis gating; for chains whose algebra only needs periphery
    /// numbers one.
    pub fn unchecked(d: &Diagram, s0: &KauffmanState) -> Result<Self, TorsionError> {
        Self::prepare(d, s0, Route::Neither, true)
    }

    fn prepare(
        d: &Diagram,
        s0: &KauffmanState,
        route: Route,
        ladder_first: bool,
    ) -> Result<Self, TorsionError> {
        let ladders = detect_ladders(d, s0)?;
        let order = if ladder_first {
            ladder_first_order(&ladders, d.num_crossings())
        } else {
            (0..d.num_crossings()).collect()
        };
        let rd = d.reorder_crossings(&order)?;
        let s = s0.permuted(&order);
        let ladders = detect_ladders(&rd, &s)?;
        let (_, s1_circles) = break_ladders(&rd, &s, &ladders);
        debug_assert!(!ladder_first || {
            let flat: Vec<usize> = ladders.iter().flat_map(|l| l.steps.clone()).collect();
            flat == (0..flat.len()).collect::<Vec<_>>()
        });
        Ok(Certifier {
            cx: ChainComplex::new(rd),
            order,
            s0: s,
            ladders,
            route,
            s1_circles,
            report: None,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.cx
    }

    pub fn diagram(&self) -> &Diagram {
        self.cx.diagram()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn base_state(&self) -> KauffmanState {
        self.s0
    }

    pub fn ladders(&self) -> &[Ladder] {
        &self.ladders
    }

    pub fn heights(&self) -> Vec<usize> {
        self.ladders.iter().map(Ladder::height).collect()
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn report(&self) -> Option<&HypothesisReport> {
        self.report.as_ref()
    }

    /// Red scars of the base state.
    pub fn i0(&self) -> usize {
        self.s0.num_b()
    }

    /// Circles once one step of every ladder is broken.
    pub fn s1_circles(&self) -> usize {
        self.s1_circles
    }

    /// Tuples `0 < mu_i <= h_i`.
    pub fn all_mus(&self) -> Vec<Vec<usize>> {
        self.heights()
            .into_iter()
            .map(|h| 1..=h)
            .multi_cartesian_product()
            .collect()
    }

    /// Tuples satisfying the certificate hypotheses.
    pub fn admissible_mus(&self) -> Vec<Vec<usize>> {
        let h = self.heights();
        self.all_mus()
            .into_iter()
            .filter(|m| admissible(m, &h))
            .collect()
    }

    fn check_sizes(&self, sizes: &[usize], lo: usize) -> Result<(), TorsionError> {
        let h = self.heights();
        if sizes.len() != h.len() {
            return Err(TorsionError::Inadmissible(format!(
                "{} values for {} ladders",
                sizes.len(),
                h.len()
            )));
        }
        if let Some(k) = (0..h.len()).find(|&k| sizes[k] < lo || sizes[k] > h[k]) {
            return Err(TorsionError::Inadmissible(format!(
                "mu_{} = {} outside {}..={}",
                k + 1,
                sizes[k],
                lo,
                h[k]
            )));
        }
        Ok(())
    }

    /// `C_i^0` in a smoothing where ladder `l` has red steps at `red`
    /// (positions along the rails, ascending).
    fn periphery_circle(&self, sm: &SmoothedDiagram, l: usize, red: &[usize]) -> usize {
        let ladder = &self.ladders[l];
        let p1 = red[0];
        let (a, b) = sm.scar(ladder.steps[p1]).circles;
        if red.len() >= 2 {
            let inner = sm.circle_of_edge(ladder.gaps[p1][0]);
            return if a == inner { b } else { a };
        }
        if a == b {
            return a;
        }
        if p1 > 0 {
            sm.circle_of_edge(ladder.gaps[p1 - 1][0])
        } else if let Some(g) = ladder.gaps.first() {
            let after = sm.circle_of_edge(g[0]);
            if a == after {
                b
            } else {
                a
            }
        } else {
            a
        }
    }

    /// `s(M_1, ..., M_k; e)` summed over all subsets of the given sizes.
    pub fn state_sum(&self, spec: &StateSumSpec) -> Chain {
        let n = self.cx.n();
        let i = (self.i0() + spec.sizes.iter().sum::<usize>()) as i64;
        let mut out: Option<Chain> = None;
        let choices = self
            .ladders
            .iter()
            .zip(&spec.sizes)
            .map(|(l, &m)| (0..l.height()).combinations(m).collect::<Vec<_>>())
            .multi_cartesian_product();
        for pick in choices {
            let mut bits = self.s0.bits();
            for (l, red) in self.ladders.iter().zip(&pick) {
                for &p in red {
                    bits |= 1 << l.steps[p];
                }
            }
            let sm = self.cx.smoothing(bits);
            let c = sm.num_circles();
            let minus = match spec.enhancement {
                Enhancement::AllPlus => 0,
                Enhancement::PeripheryMinus(l) => 1 << self.periphery_circle(&sm, l, &pick[l]),
            };
            let e = EnhancedState::new(KauffmanState::from_bits(bits, n), minus, c);
            let chain = out.get_or_insert_with(|| Chain::zero(i, e.j()));
            chain.add_term(e.key(), 1);
        }
        out.unwrap_or_else(|| Chain::zero(i, 0))
    }

    /// `X = s(mu; +)`.
    pub fn chain_x(&self, mu: &[usize]) -> Result<Chain, TorsionError> {
        self.check_sizes(mu, 1)?;
        Ok(self.state_sum(&StateSumSpec {
            sizes: mu.to_vec(),
            enhancement: Enhancement::AllPlus,
        }))
    }

    /// `V = sum over even mu_i < h_i of (-1)^(mu_1+..+mu_{i-1}) s(.., 1+mu_i, ..; C_i^0-)`.
    pub fn chain_v(&self, mu: &[usize]) -> Result<Chain, TorsionError> {
        self.check_sizes(mu, 1)?;
        if let Some(l) = self.ladders.iter().position(|l| l.periphery != 1) {
            return Err(TorsionError::Inadmissible(format!(
                "ladder {} has periphery number {}",
                l + 1,
                self.ladders[l].periphery
            )));
        }
        let h = self.heights();
        let i = (self.i0() + 1 + mu.iter().sum::<usize>()) as i64;
        let mut v: Option<Chain> = None;
        for l in 0..mu.len() {
            if !mu[l].is_multiple_of(2) || mu[l] >= h[l] {
                continue;
            }
            let mut sizes = mu.to_vec();
            sizes[l] += 1;
            let part = self.state_sum(&StateSumSpec {
                sizes,
                enhancement: Enhancement::PeripheryMinus(l),
            });
            let sign = if mu[..l].iter().sum::<usize>() % 2 == 0 { 1 } else { -1 };
            let acc = v.get_or_insert_with(|| Chain::zero(part.i, part.j));
            acc.add_assign_scaled(&part, sign);
        }
        Ok(v.unwrap_or_else(|| Chain::zero(i, 0)))
    }

    pub fn verify_dx_2v(&self, mu: &[usize]) -> Result<Residual, TorsionError> {
        let x = self.chain_x(mu)?;
        let v = self.chain_v(mu)?;
        let dx = self.cx.differential_chain(&x);
        let residual = if v.is_zero() {
            dx
        } else {
            dx.sub(&v.scaled(2))
        };
        Ok(Residual {
            residual,
            dv_zero: self.cx.differential_chain(&v).is_zero(),
        })
    }

    /// Theorem degrees `(i, j)` of `V(mu)`.
    pub fn degrees(&self, mu: &[usize]) -> (i64, i64) {
        let s: i64 = mu.iter().sum::<usize>() as i64;
        let i0 = self.i0() as i64;
        let k = mu.len() as i64;
        (i0 + 1 + s, i0 + self.s1_circles as i64 + 2 * s - k)
    }

    fn check_admissible(&self, mu: &[usize]) -> Result<(), TorsionError> {
        self.check_sizes(mu, 2)?;
        if !admissible(mu, &self.heights()) {
            return Err(TorsionError::Inadmissible(format!(
                "{mu:?} has no even entry below its height"
            )));
        }
        Ok(())
    }

    /// The summand of `V` built from prefix subsets, with `{1..mu_r+1}` at
    /// the first admissible ladder `r` and minus on `C_r^0`.
    pub fn generator_state(&self, mu: &[usize]) -> Result<EnhancedState, TorsionError> {
        self.check_admissible(mu)?;
        let h = self.heights();
        let r = (0..mu.len())
            .find(|&l| mu[l].is_multiple_of(2) && mu[l] < h[l])
            .expect("admissible");
        let prefixes: Vec<Vec<usize>> = (0..mu.len())
            .map(|l| (0..mu[l] + usize::from(l == r)).collect())
            .collect();
        let mut bits = self.s0.bits();
        for (l, red) in self.ladders.iter().zip(&prefixes) {
            for &p in red {
                bits |= 1 << l.steps[p];
            }
        }
        let sm = self.cx.smoothing(bits);
        let minus = 1 << self.periphery_circle(&sm, r, &prefixes[r]);
        Ok(EnhancedState::new(
            KauffmanState::from_bits(bits, self.cx.n()),
            minus,
            sm.num_circles(),
        ))
    }

    pub fn even_module(&self, mu: &[usize]) -> Result<EvenModule, TorsionError> {
        let g = self.generator_state(mu)?;
        build_even_module(&self.cx, &[g.state])
    }

    /// Full certificate. `evenness` runs the module check; the oracle is
    /// left to the caller.
    pub fn certify(&self, mu: &[usize], evenness: bool) -> Result<TorsionCertificate, TorsionError> {
        if self.route == Route::Neither {
            return Err(TorsionError::Rejected(
                self.report
                    .as_ref()
                    .map(|r| r.failures.clone())
                    .unwrap_or_else(|| vec!["hypotheses not checked".into()]),
            ));
        }
        self.check_admissible(mu)?;
        let x = self.chain_x(mu)?;
        let v = self.chain_v(mu)?;
        let dx = self.cx.differential_chain(&x);
        let dx_equals_2v = dx.sub(&v.scaled(2)).is_zero();
        let dv_zero = self.cx.differential_chain(&v).is_zero();
        let (i, j) = self.degrees(mu);
        let degrees_match = !v.is_zero()
            && v.i == i
            && v.j == j
            && v.iter().all(|(k, _)| self.cx.enhanced(*k).degrees().0 == i && self.cx.enhanced(*k).j() == j);
        let g = self.generator_state(mu)?;
        let module = build_even_module(&self.cx, &[g.state])?;
        let evenness = if evenness {
            Some(verify_evenness(&self.cx, &module)?)
        } else {
            None
        };
        let (p, n, _) = self.diagram().stats();
        let (p, n) = (p as i64, n as i64);
        Ok(TorsionCertificate {
            schema: 1,
            diagram: self.diagram().to_pd_string(),
            order: self.order.clone(),
            route: self.route,
            s0: self.s0.bits(),
            heights: self.heights(),
            mu: mu.to_vec(),
            i,
            j,
            h: i - n,
            q: j + p - 2 * n,
            generator: (g.state.bits(), g.minus),
            x: terms(&x),
            v: terms(&v),
            checks: Checks {
                dx_equals_2v,
                dv_zero,
                not_exact_parity: certify_not_exact(&v, &module)?,
                exactly_one_summand: certify_not_exact_strict(&v, &module)?,
                degrees_match,
                evenness,
                oracle: None,
            },
            claimed_order: 2,
        })
    }

    /// Runs the exactness oracle on `V` and `2V` and records the class order.
    pub fn confirm_with_oracle(
        &self,
        cert: &mut TorsionCertificate,
        limit: usize,
    ) -> Result<(), TorsionError> {
        if self.cx.n() > limit {
            return Err(TorsionError::TooLarge {
                crossings: self.cx.n(),
                limit,
            });
        }
        let oracle = HomologyOracle::new(&self.cx);
        let v = cert.chain_v();
        cert.checks.oracle = Some(OracleCheck {
            v_exact: oracle.is_exact(&v)?.is_exact(),
            twice_v_exact: oracle.is_exact(&v.scaled(2))?.is_exact(),
            order: oracle.class_order(&v)?,
        });
        Ok(())
    }

    /// Monocircular chains `V(0, mu) = s(1, mu; C_2^0-)` (`which = 2`) and
    /// `V(mu, 0) = (-1)^mu s(mu, 1; C_1^0-)` (`which = 1`).
    pub fn monocircular_v(&self, which: usize, mu: usize) -> Result<Chain, TorsionError> {
        let h = self.heights();
        if h.len() != 2 || self.i0() != 0 || h[0] < 2 || h[1] < 2 {
            return Err(TorsionError::Inadmissible(
                "not a monocircular diagram with both heights at least 2".into(),
            ));
        }
        if !(which == 1 || which == 2) {
            return Err(TorsionError::Inadmissible(format!("ladder {which} is not 1 or 2")));
        }
        if mu.is_multiple_of(2) || mu < 1 || mu >= h[which - 1] {
            return Err(TorsionError::Inadmissible(format!(
                "mu = {mu} must be odd and below {}",
                h[which - 1]
            )));
        }
        Ok(if which == 2 {
            self.state_sum(&StateSumSpec {
                sizes: vec![1, mu],
                enhancement: Enhancement::PeripheryMinus(1),
            })
        } else {
            self.state_sum(&StateSumSpec {
                sizes: vec![mu, 1],
                enhancement: Enhancement::PeripheryMinus(0),
            })
            .scaled(if mu.is_multiple_of(2) { 1 } else { -1 })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(h1: usize, h2: usize) -> Certifier {
        let d = Diagram::monocircular(h1, h2).unwrap();
        let n = d.num_crossings();
        Certifier::new(&d, &KauffmanState::all_a(n)).unwrap()
    }

    #[test]
    fn summand_counts() {
        let c = mono(3, 6);
        assert_eq!(c.chain_x(&[2, 2]).unwrap().len(), 45);
        assert_eq!(c.chain_x(&[3, 6]).unwrap().len(), 1);
        let v = c.chain_v(&[2, 2]).unwrap();
        // (3,2)-subsets: 1 * 15; (2,3)-subsets: 3 * 20.
        assert_eq!(v.len(), 15 + 60);
    }

    #[test]
    fn dx_is_twice_v() {
        let c = mono(3, 6);
        for mu in [vec![2, 2], vec![2, 3], vec![1, 3], vec![3, 6], vec![2, 5]] {
            let r = c.verify_dx_2v(&mu).unwrap();
            assert!(r.holds(), "mu = {mu:?}");
        }
        assert!(c.chain_v(&[1, 3]).unwrap().is_zero());
    }

    #[test]
    fn certificate_on_three_six() {
        let c = mono(3, 6);
        let cert = c.certify(&[2, 2], true).unwrap();
        assert!(cert.is_valid());
        assert!(cert.checks.exactly_one_summand);
        assert_eq!((cert.i, cert.j), (5, 7));
        let o = HomologyOracle::new(c.complex());
        let v = cert.chain_v();
        assert!(!o.is_exact(&v).unwrap().is_exact());
        assert!(o.is_exact(&v.scaled(2)).unwrap().is_exact());
        assert_eq!(o.class_order(&v).unwrap(), Some(2));
        let mut cert = cert;
        c.confirm_with_oracle(&mut cert, DEFAULT_CROSSING_LIMIT).unwrap();
        assert!(cert.is_valid());
        assert_eq!(cert.checks.oracle.as_ref().unwrap().order, Some(2));
    }

    #[test]
    fn certificate_degrees_on_three_six() {
        let c = mono(3, 6);
        let mut is: Vec<i64> = c
            .admissible_mus()
            .iter()
            .map(|m| c.certify(m, false).unwrap().i)
            .collect();
        is.sort_unstable();
        is.dedup();
        assert_eq!(is, vec![5, 6, 7, 8, 9]);
    }

    #[test]
    fn generator_module_size() {
        let c = mono(3, 6);
        let g = c.generator_state(&[2, 2]).unwrap();
        let m = c.even_module(&[2, 2]).unwrap();
        assert_eq!(m.len(), g.num_circles);
        assert!(verify_evenness(c.complex(), &m).unwrap());
        assert!(verify_evenness_exhaustive(c.complex(), &m));
    }

    #[test]
    fn monochord_module_rejected() {
        let c = mono(3, 6);
        // One red step on each ladder leaves a single circle.
        let s = KauffmanState::all_a(9).with_label(0, Label::B).with_label(3, Label::B);
        assert!(matches!(
            build_even_module(c.complex(), &[s]),
            Err(TorsionError::Monochord { crossing: 0, .. })
        ));
        let empty = build_even_module(c.complex(), &[]).unwrap();
        assert!(empty.is_empty());
        assert!(verify_evenness(c.complex(), &empty).unwrap());
    }

    #[test]
    fn evenness_reduction_matches_brute_force() {
        for c in [mono(3, 6), mono(4, 4)] {
            for mu in c.admissible_mus() {
                let m = c.even_module(&mu).unwrap();
                assert_eq!(
                    verify_evenness(c.complex(), &m).unwrap(),
                    verify_evenness_exhaustive(c.complex(), &m),
                    "mu = {mu:?}"
                );
            }
        }
    }

    #[test]
    fn monocircular_chains() {
        let c = mono(3, 6);
        let v01 = c.monocircular_v(2, 1).unwrap();
        let v10 = c.monocircular_v(1, 1).unwrap();
        assert_eq!(v01, v10.scaled(-1));
        let v05 = c.monocircular_v(2, 5).unwrap();
        assert_eq!((v05.i, v05.j), (6, 9));
        assert!(c.monocircular_v(2, 2).is_err());
        assert!(c.complex().differential_chain(&v05).is_zero());
    }

    #[test]
    fn hopf_rejected() {
        let d = Diagram::pretzel(&[-1, 3]).unwrap();
        let r = Certifier::new(&d, &KauffmanState::all_a(4));
        match r {
            Err(TorsionError::Rejected(f)) => assert!(f.iter().any(|s| s.contains("height 1"))),
            other => panic!("expected rejection, got {:?}", other.err()),
        }
    }

    #[test]
    fn inadmissible_mu() {
        let c = mono(3, 6);
        assert!(matches!(c.certify(&[3, 3], false), Err(TorsionError::Inadmissible(_))));
        assert!(matches!(c.certify(&[1, 2], false), Err(TorsionError::Inadmissible(_))));
        assert!(matches!(c.chain_x(&[0, 2]), Err(TorsionError::Inadmissible(_))));
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = mono(3, 6);
        let cert = c.certify(&[2, 4], false).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: TorsionCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
    }
}
