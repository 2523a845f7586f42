//! Lower bounds on the number of order-two torsion classes for pretzel,
//! three-strand braid and rational families.

use serde::{Deserialize, Serialize};

use super::{admissible, same_class, Certifier, TorsionCertificate, TorsionError};
use crate::diagram::Diagram;
use crate::ladders::{check_hypotheses, signed_state, Route};
use crate::smoothing::KauffmanState;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "family", content = "params")]
pub enum Family {
    Pretzel(Vec<i64>),
    Braid3(Vec<i64>),
    Rational(Vec<i64>),
}

impl Family {
    pub fn params(&self) -> &[i64] {
        match self {
            Family::Pretzel(a) | Family::Braid3(a) | Family::Rational(a) => a,
        }
    }

    pub fn diagram(&self) -> Result<Diagram, TorsionError> {
        Ok(match self {
            Family::Pretzel(a) => Diagram::pretzel(a)?,
            Family::Braid3(a) => Diagram::braid3_closure(a)?,
            Family::Rational(a) => Diagram::rational(a)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub holds: bool,
}

fn hyp(name: &str, holds: bool) -> Hypothesis {
    Hypothesis {
        name: name.into(),
        holds,
    }
}

/// Admissible tuples and their classes after merging same-class pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhaustive {
    pub heights: Vec<usize>,
    pub admissible: usize,
    pub classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema: u32,
    #[serde(flatten)]
    pub family: Family,
    pub hypotheses: Vec<Hypothesis>,
    /// `floor(a / 2)` for every entry entering the product.
    pub factors: Vec<u64>,
    pub bound: Option<u64>,
    pub exhaustive: Option<Exhaustive>,
}

impl BoundReport {
    pub fn applicable(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }
}

fn surrounded(a: &[i64], k: usize, cyclic: bool) -> bool {
    let m = a.len();
    let left = if k > 0 {
        Some(a[k - 1])
    } else if cyclic {
        Some(a[m - 1])
    } else {
        None
    };
    let right = if k + 1 < m {
        Some(a[k + 1])
    } else if cyclic {
        Some(a[0])
    } else {
        None
    };
    left.is_none_or(|x| x > 0) && right.is_none_or(|x| x > 0)
}

fn family_hypotheses(f: &Family) -> (Vec<Hypothesis>, Vec<i64>) {
    let a = f.params();
    let nonzero = hyp("no zero entry", !a.is_empty() && a.iter().all(|&x| x != 0));
    match f {
        Family::Pretzel(_) => (
            vec![
                nonzero,
                hyp("no entry equal to 1", a.iter().all(|&x| x != 1)),
                hyp("some entry at least 3", a.iter().any(|&x| x >= 3)),
                hyp("at least two negative entries", a.iter().filter(|&&x| x < 0).count() >= 2),
            ],
            a.iter().copied().filter(|&x| x > 0).collect(),
        ),
        Family::Braid3(_) => {
            let inner: Vec<usize> = (0..a.len()).filter(|&k| surrounded(a, k, true)).collect();
            (
                vec![
                    nonzero,
                    hyp("even number of exponents", a.len().is_multiple_of(2)),
                    hyp("no exponent equal to 1", a.iter().all(|&x| x != 1)),
                    hyp(
                        "some exponent above 2 cyclically surrounded by positive ones",
                        inner.iter().any(|&k| a[k] > 2),
                    ),
                    hyp(
                        "every negative exponent cyclically surrounded by positive ones",
                        (0..a.len()).all(|k| a[k] > 0 || inner.contains(&k)),
                    ),
                ],
                inner.iter().map(|&k| a[k]).filter(|&x| x > 0).collect(),
            )
        }
        Family::Rational(_) => (
            vec![
                nonzero,
                hyp("every entry at least 2", a.iter().all(|&x| x >= 2)),
                hyp("some entry at least 3", a.iter().any(|&x| x >= 3)),
            ],
            a.to_vec(),
        ),
    }
}

/// Distinct admissible tuples for the given heights, and the number of
/// classes once same-class pairs are merged.
pub fn exhaustive_classes(heights: &[usize]) -> Exhaustive {
    use itertools::Itertools;
    let tuples: Vec<Vec<usize>> = heights
        .iter()
        .map(|&h| 2..=h)
        .multi_cartesian_product()
        .filter(|m| admissible(m, heights))
        .collect();
    let mut parent: Vec<usize> = (0..tuples.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for a in 0..tuples.len() {
        for b in a + 1..tuples.len() {
            if same_class(&tuples[a], &tuples[b], heights).expect("admissible tuples") {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let classes = (0..tuples.len()).filter(|&k| find(&mut parent, k) == k).count();
    Exhaustive {
        heights: heights.to_vec(),
        admissible: tuples.len(),
        classes,
    }
}

/// Product-minus-one bound with hypothesis flags. The exhaustive count runs
/// over the ladder heights of the signed initial state when the
/// certificate hypotheses accept it.
pub fn family_lower_bound(f: &Family) -> BoundReport {
    let (hypotheses, entries) = family_hypotheses(f);
    let factors: Vec<u64> = entries.iter().map(|&x| (x / 2) as u64).collect();
    let applicable = hypotheses.iter().all(|h| h.holds);
    let bound = applicable.then(|| factors.iter().product::<u64>().saturating_sub(1));
    let exhaustive = applicable.then(|| exhaustive_for(f)).flatten();
    BoundReport {
        schema: 1,
        family: f.clone(),
        hypotheses,
        factors,
        bound,
        exhaustive,
    }
}

fn exhaustive_for(f: &Family) -> Option<Exhaustive> {
    let d = f.diagram().ok()?;
    let report = check_hypotheses(&d, &signed_state(&d)).ok()?;
    let heights = match report.route {
        Route::Theorem => report.heights(),
        Route::Corollary => {
            let s = KauffmanState::from_bits(report.s0_prime?, d.num_crossings());
            check_hypotheses(&d, &s).ok()?.heights()
        }
        Route::Neither => return None,
    };
    Some(exhaustive_classes(&heights))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalReport {
    pub schema: u32,
    pub params: Vec<i64>,
    pub hypotheses: Vec<Hypothesis>,
    pub route: Route,
    pub certificate: TorsionCertificate,
}

/// Checks the three rational-diagram items, then certifies one torsion
/// class from the signed initial state.
pub fn rational_torsion_exists(a: &[i64]) -> Result<RationalReport, TorsionError> {
    let hypotheses = vec![
        hyp("no zero entry", !a.is_empty() && a.iter().all(|&x| x != 0)),
        hyp("no entry equal to 1", a.iter().all(|&x| x != 1)),
        hyp(
            "an entry at least 3 surrounded by positive entries",
            (0..a.len()).any(|k| a[k] >= 3 && surrounded(a, k, false)),
        ),
        hyp(
            "every negative entry surrounded by positive entries",
            (0..a.len()).all(|k| a[k] > 0 || surrounded(a, k, false)),
        ),
    ];
    let failed: Vec<String> = hypotheses
        .iter()
        .filter(|h| !h.holds)
        .map(|h| format!("fails: {}", h.name))
        .collect();
    if !failed.is_empty() {
        return Err(TorsionError::Rejected(failed));
    }
    let d = Diagram::rational(a)?;
    let c = Certifier::new(&d, &signed_state(&d))?;
    let mu = c
        .admissible_mus()
        .into_iter()
        .next()
        .ok_or_else(|| TorsionError::Inadmissible("no admissible parameters".into()))?;
    let certificate = c.certify(&mu, false)?;
    Ok(RationalReport {
        schema: 1,
        params: a.to_vec(),
        hypotheses,
        route: c.route(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_bounds() {
        let r = family_lower_bound(&Family::Pretzel(vec![5, -3, 2, 3, -2]));
        assert_eq!(r.bound, Some(1));
        let e = r.exhaustive.unwrap();
        assert_eq!((e.admissible, e.classes), (6, 4));
        assert_eq!(family_lower_bound(&Family::Braid3(vec![7, 2])).bound, Some(2));
        assert_eq!(family_lower_bound(&Family::Rational(vec![4, 2, 6])).bound, Some(5));
    }

    #[test]
    fn inapplicable_flags() {
        let r = family_lower_bound(&Family::Pretzel(vec![-1, 3]));
        assert_eq!(r.bound, None);
        assert!(!r.applicable());
        assert!(r.hypotheses.iter().any(|h| !h.holds && h.name.contains("two negative")));
        let r = family_lower_bound(&Family::Braid3(vec![3, -2, 3, -2]));
        assert_eq!(r.bound, None);
        let r = family_lower_bound(&Family::Rational(vec![2, 2]));
        assert_eq!(r.bound, None);
    }

    #[test]
    fn braid_surrounded_exponents() {
        let r = family_lower_bound(&Family::Braid3(vec![6, 2, -2, 4]));
        // -2 sits between 2 and 4; 6 sits between 4 and 2; 2 and 4 touch -2.
        assert!(r.applicable());
        assert_eq!(r.factors, vec![3]);
        assert_eq!(r.bound, Some(2));
    }

    #[test]
    fn rational_existence() {
        let r = rational_torsion_exists(&[3, 2, -2, 2]).unwrap();
        assert_eq!(r.route, Route::Corollary);
        assert!(r.certificate.is_valid());
        // 3 and 4 both touch the negative entry.
        assert!(matches!(rational_torsion_exists(&[3, -2, 4]), Err(TorsionError::Rejected(f)) if f[0].contains("at least 3")));
        assert!(matches!(rational_torsion_exists(&[2, -2, -2]), Err(TorsionError::Rejected(f)) if f.iter().any(|s| s.contains("negative"))));
        assert!(matches!(rational_torsion_exists(&[2, 2]), Err(TorsionError::Rejected(_))));
    }

    #[test]
    fn report_json_round_trip() {
        let r = family_lower_bound(&Family::Braid3(vec![7, 2]));
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"family\":\"braid3\""));
        let back: BoundReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
