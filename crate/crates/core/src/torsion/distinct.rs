//! Combinatorial rules telling torsion classes apart, and the grids of
//! two-ladder monocircular diagrams.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::TorsionError;

/// `2 <= mu_i <= h_i` and some `mu_r` even with `mu_r < h_r`.
pub fn admissible(mu: &[usize], heights: &[usize]) -> bool {
    mu.len() == heights.len()
        && mu.iter().zip(heights).all(|(&m, &h)| (2..=h).contains(&m))
        && mu.iter().zip(heights).any(|(&m, &h)| m % 2 == 0 && m < h)
}

fn require_admissible(mu: &[usize], heights: &[usize]) -> Result<(), TorsionError> {
    if admissible(mu, heights) {
        Ok(())
    } else {
        Err(TorsionError::Inadmissible(format!(
            "{mu:?} is not admissible for heights {heights:?}"
        )))
    }
}

/// One-directional test: `b` is `a` with one unit moved from an odd entry
/// `t2` onto an even entry `t1 < h`, every other entry odd or full.
fn moves_to(a: &[usize], b: &[usize], h: &[usize]) -> bool {
    if a.iter().sum::<usize>() != b.iter().sum::<usize>() {
        return false;
    }
    let diff: Vec<usize> = (0..a.len()).filter(|&t| a[t] != b[t]).collect();
    let &[x, y] = diff.as_slice() else {
        return false;
    };
    let others_ok = (0..a.len())
        .filter(|t| !diff.contains(t))
        .all(|t| a[t] % 2 == 1 || a[t] == h[t]);
    let step = |t1: usize, t2: usize| {
        a[t1].is_multiple_of(2) && a[t1] < h[t1] && a[t2] % 2 == 1 && b[t1] == a[t1] + 1 && b[t2] + 1 == a[t2]
    };
    others_ok && (step(x, y) || step(y, x))
}

/// Whether `V(mu)` and `V(mu')` define the same class.
pub fn same_class(mu: &[usize], mu2: &[usize], heights: &[usize]) -> Result<bool, TorsionError> {
    require_admissible(mu, heights)?;
    require_admissible(mu2, heights)?;
    Ok(mu == mu2 || moves_to(mu, mu2, heights) || moves_to(mu2, mu, heights))
}

/// A single-ladder pair `(mu, 0)` or `(0, mu)` with `mu` odd below its height.
fn require_single(p: (usize, usize), heights: (usize, usize)) -> Result<usize, TorsionError> {
    let (mu, h) = match p {
        (m, 0) => (m, heights.0),
        (0, m) => (m, heights.1),
        _ => {
            return Err(TorsionError::Inadmissible(format!(
                "{p:?} has no zero coordinate"
            )))
        }
    };
    if mu % 2 == 1 && mu < h {
        Ok(mu)
    } else {
        Err(TorsionError::Inadmissible(format!(
            "{p:?} needs an odd entry below its height"
        )))
    }
}

/// `[V(mu1, mu2)]` against `[V(mu, 0)]` or `[V(0, mu)]`: never equal.
pub fn compare_with_monocircular(
    pair: (usize, usize),
    single: (usize, usize),
    heights: (usize, usize),
) -> Result<bool, TorsionError> {
    require_admissible(&[pair.0, pair.1], &[heights.0, heights.1])?;
    require_single(single, heights)?;
    Ok(false)
}

/// Two single-ladder chains agree only when equal or both are `mu = 1`.
pub fn mono_vs_mono(
    a: (usize, usize),
    b: (usize, usize),
    heights: (usize, usize),
) -> Result<bool, TorsionError> {
    let ma = require_single(a, heights)?;
    let mb = require_single(b, heights)?;
    Ok(a == b || (ma == 1 && mb == 1))
}

/// A point of a grid: `set` 1 for single-ladder pairs, 2 for pairs with
/// both entries at least two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub mu1: usize,
    pub mu2: usize,
    pub set: u8,
}

impl GridPoint {
    pub fn i(&self) -> usize {
        self.mu1 + self.mu2 + 1
    }

    pub fn j(&self) -> i64 {
        2 * self.i() as i64 - 3
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub schema: u32,
    pub h1: usize,
    pub h2: usize,
    pub g1: Vec<GridPoint>,
    pub g2: Vec<GridPoint>,
    pub merged: Vec<(GridPoint, GridPoint)>,
    /// `counts[i - 1]` is the number of classes at homological degree `i`.
    pub counts: Vec<usize>,
}

impl Grid {
    pub fn new(h1: usize, h2: usize) -> Self {
        let g1: Vec<GridPoint> = (1..h2)
            .step_by(2)
            .map(|m| GridPoint { mu1: 0, mu2: m, set: 1 })
            .chain((1..h1).step_by(2).map(|m| GridPoint { mu1: m, mu2: 0, set: 1 }))
            .collect();
        let heights = [h1, h2];
        let g2: Vec<GridPoint> = (2..=h1)
            .flat_map(|a| (2..=h2).map(move |b| (a, b)))
            .filter(|&(a, b)| admissible(&[a, b], &heights))
            .map(|(mu1, mu2)| GridPoint { mu1, mu2, set: 2 })
            .collect();

        let mut merged = Vec::new();
        let one = |m1, m2| GridPoint { mu1: m1, mu2: m2, set: 1 };
        if h1 > 1 && h2 > 1 {
            merged.push((one(1, 0), one(0, 1)));
        }
        for (k, a) in g2.iter().enumerate() {
            for b in &g2[k + 1..] {
                let same = same_class(&[a.mu1, a.mu2], &[b.mu1, b.mu2], &heights)
                    .expect("grid points are admissible");
                if same {
                    merged.push((*a, *b));
                }
            }
        }

        let all: Vec<GridPoint> = g1.iter().chain(&g2).copied().collect();
        let index: BTreeMap<GridPoint, usize> = all.iter().enumerate().map(|(k, p)| (*p, k)).collect();
        let mut parent: Vec<usize> = (0..all.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        for (a, b) in &merged {
            let (ra, rb) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
            parent[ra] = rb;
        }
        let mut counts = vec![0; h1 + h2];
        for (k, p) in all.iter().enumerate() {
            if find(&mut parent, k) == k {
                let i = p.i();
                if let Some(c) = counts.get_mut(i - 1) {
                    *c += 1;
                }
            }
        }
        Grid {
            schema: 1,
            h1,
            h2,
            g1,
            g2,
            merged,
            counts,
        }
    }

    /// Classes at homological degree `i`.
    pub fn count(&self, i: usize) -> usize {
        i.checked_sub(1)
            .and_then(|k| self.counts.get(k))
            .copied()
            .unwrap_or(0)
    }

    fn marker(&self, mu1: usize, mu2: usize) -> char {
        if self.g1.iter().any(|p| p.mu1 == mu1 && p.mu2 == mu2) {
            'o'
        } else if self.g2.iter().any(|p| p.mu1 == mu1 && p.mu2 == mu2) {
            '*'
        } else {
            '.'
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "G({},{})  o: single ladder  *: both ladders", self.h1, self.h2)?;
        for mu2 in (0..=self.h2).rev() {
            write!(f, "{mu2:>4} |")?;
            for mu1 in 0..=self.h1 {
                write!(f, " {}", self.marker(mu1, mu2))?;
            }
            writeln!(f)?;
        }
        write!(f, "     +")?;
        for _ in 0..=self.h1 {
            write!(f, "--")?;
        }
        writeln!(f)?;
        write!(f, "      ")?;
        for mu1 in 0..=self.h1 {
            write!(f, " {}", mu1 % 10)?;
        }
        writeln!(f, "   mu1")?;
        for (a, b) in &self.merged {
            writeln!(f, "same class: ({},{}) ~ ({},{})", a.mu1, a.mu2, b.mu1, b.mu2)?;
        }
        let counts: Vec<String> = self.counts.iter().map(usize::to_string).collect();
        write!(f, "counts i=1..{}: {}", self.counts.len(), counts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_10_15_counts() {
        let g = Grid::new(10, 15);
        assert_eq!(
            g.counts,
            vec![0, 1, 0, 2, 1, 3, 2, 4, 3, 5, 4, 5, 5, 5, 5, 4, 5, 4, 4, 3, 3, 2, 2, 1, 1]
        );
    }

    #[test]
    fn three_six_grid() {
        let g = Grid::new(3, 6);
        let expected: Vec<usize> = (1..=9).map(|i| match i {
            2 | 4 | 5 | 7 | 8 | 9 => 1,
            6 => 2,
            _ => 0,
        }).collect();
        assert_eq!(g.counts, expected);
        let text = g.to_string();
        assert!(text.contains("same class: (2,3) ~ (3,2)"));
    }

    #[test]
    fn counts_are_points_minus_merges() {
        for (h1, h2) in [(2, 5), (2, 6), (4, 6), (5, 7), (3, 3)] {
            let g = Grid::new(h1, h2);
            for i in 1..=h1 + h2 {
                let points = g.g1.iter().chain(&g.g2).filter(|p| p.i() == i).count();
                let merges = g.merged.iter().filter(|(a, _)| a.i() == i).count();
                assert_eq!(g.count(i), points - merges, "G({h1},{h2}) at i={i}");
            }
            assert!(g.g1.iter().all(|p| !g.g2.contains(p)));
        }
    }

    #[test]
    fn small_grids_low_degrees() {
        // For 2 <= i <= min(h1, h2) the count at i is (i-3)/2 for odd i and
        // i/2 for even i.
        for (h1, h2) in [(4, 6), (5, 7), (6, 9)] {
            let g = Grid::new(h1, h2);
            for i in 2..=h1.min(h2) {
                let want = if i % 2 == 1 { (i - 3) / 2 } else { i / 2 };
                assert_eq!(g.count(i), want, "G({h1},{h2}) at i={i}");
            }
        }
    }

    #[test]
    fn same_class_rules() {
        let h = [3, 6];
        assert!(same_class(&[2, 3], &[3, 2], &h).unwrap());
        assert!(same_class(&[3, 2], &[2, 3], &h).unwrap());
        assert!(!same_class(&[2, 2], &[2, 4], &h).unwrap());
        assert!(matches!(same_class(&[2, 4], &[3, 3], &h), Err(TorsionError::Inadmissible(_))));
        assert!(same_class(&[2, 4], &[2, 4], &h).unwrap());
        // An all-even tuple is never merged with a different one.
        let h = [6, 6, 6];
        for a in [2, 4] {
            for b in [2, 4] {
                for c in 2..=6 {
                    let mu = [a, b, c];
                    if mu != [2, 2, 2] && admissible(&mu, &h) {
                        assert!(!same_class(&[2, 2, 2], &mu, &h).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn third_coordinate_must_be_odd_or_full() {
        let h = [5, 5, 5];
        assert!(same_class(&[2, 3, 3], &[3, 2, 3], &h).unwrap());
        assert!(same_class(&[2, 3, 5], &[3, 2, 5], &h).unwrap());
        assert!(!same_class(&[2, 3, 4], &[3, 2, 4], &h).unwrap());
    }

    #[test]
    fn monocircular_rules() {
        assert!(mono_vs_mono((1, 0), (0, 1), (3, 6)).unwrap());
        assert!(!mono_vs_mono((3, 0), (0, 3), (5, 7)).unwrap());
        assert!(mono_vs_mono((0, 3), (0, 3), (5, 7)).unwrap());
        assert!(mono_vs_mono((2, 0), (0, 1), (3, 6)).is_err());
        assert!(!compare_with_monocircular((2, 2), (0, 3), (3, 6)).unwrap());
        assert!(compare_with_monocircular((3, 3), (0, 3), (3, 6)).is_err());
    }

    #[test]
    fn grid_json_round_trip() {
        let g = Grid::new(4, 6);
        let back: Grid = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
