//! Per-level omitted sets `Ê^k` on a finite probe universe.
//!
//! `U` is the closure of the candidates under `f` for `k_max` steps. A point
//! `u` is omitted by `f^k` iff every preimage of `u` is omitted by `f^{k-1}`.
//! Preimages are read off exactly: those inside `U` by evaluation, and the
//! existence of one outside `U` from the certified fiber count. A preimage
//! outside `U` is never omitted, which holds whenever the candidates contain
//! the whole coimage.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Point, PolyMap};
use crate::fibers::{solve_fiber, FiberConfig, FiberStatus};

use super::ImageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tri {
    Yes,
    No,
    Unknown,
}

enum Preimages {
    None,
    /// Some preimage lies outside the universe.
    Escaping,
    /// Preimages inside the universe; `exact` when they are all of them.
    Inside { indices: Vec<usize>, exact: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub k: usize,
    /// Points certified outside `f^k(C^2)`.
    pub omitted: Vec<Point>,
    /// Points whose status at this level could not be decided.
    pub indeterminate: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizationIndex {
    Reached(usize),
    NotReachedWithin(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub candidates: Vec<Point>,
    /// The probe universe, in point order.
    pub universe: Vec<Point>,
    /// Levels `1..=k_max`.
    pub chain: Vec<Level>,
    pub index: StabilizationIndex,
    pub stable_image_note: String,
    /// Set by callers who know the candidates cover the coimage; levels past
    /// the first are reported as facts only then.
    pub candidates_complete: bool,
}

fn join(points: &[Point]) -> String {
    if points.is_empty() {
        "none".to_string()
    } else {
        points.iter().map(Point::to_string).collect::<Vec<_>>().join(" ")
    }
}

impl StabilizationReport {
    pub fn indeterminate_count(&self) -> usize {
        self.chain.iter().map(|l| l.indeterminate.len()).sum()
    }

    /// Tagged report lines.
    pub fn to_lines(&self) -> Vec<String> {
        let mut out = vec![format!("NOTE candidates {}", join(&self.candidates))];
        for l in &self.chain {
            let tag = if l.k == 1 || self.candidates_complete { "FACT" } else { "INDET" };
            out.push(format!("{tag} level {} omitted {}", l.k, join(&l.omitted)));
            if !l.indeterminate.is_empty() {
                out.push(format!("INDET level {} undecided {}", l.k, join(&l.indeterminate)));
            }
        }
        let tag = if self.candidates_complete { "FACT" } else { "INDET" };
        match self.index {
            StabilizationIndex::Reached(k) => out.push(format!("{tag} stabilizes K={k}")),
            StabilizationIndex::NotReachedWithin(k) => out.push(format!("NOTE not stabilized within k_max={k}")),
        }
        out.push(format!("NOTE {}", self.stable_image_note));
        out
    }
}

fn universe(f: &PolyMap, candidates: &[Point], k_max: usize) -> Vec<Point> {
    let mut all: BTreeSet<Point> = candidates.iter().cloned().collect();
    let mut frontier: Vec<Point> = all.iter().cloned().collect();
    for _ in 0..k_max {
        frontier = frontier.iter().map(|p| f.apply(p)).filter(|p| !all.contains(p)).collect();
        frontier.sort();
        frontier.dedup();
        if frontier.is_empty() {
            break;
        }
        all.extend(frontier.iter().cloned());
    }
    all.into_iter().collect()
}

fn preimages(f: &PolyMap, u: &Point, universe: &[Point], index: &BTreeMap<&Point, usize>, cfg: &FiberConfig) -> Result<Preimages, ImageError> {
    let r = solve_fiber(f, u, cfg)?;
    Ok(match r.status {
        FiberStatus::Empty => Preimages::None,
        FiberStatus::Infinite => Preimages::Escaping,
        FiberStatus::Finite => {
            let indices: Vec<usize> = universe.iter().enumerate().filter(|(_, s)| &f.apply(s) == u).map(|(i, _)| i).collect();
            let outside_rational = r.rational_solutions.iter().any(|s| !index.contains_key(s));
            if outside_rational || r.lower_bound() > indices.len() {
                Preimages::Escaping
            } else {
                Preimages::Inside { exact: r.certified, indices }
            }
        }
    })
}

/// Decides `Ê^k` for `k = 1..=k_max` on the closure of `candidates`.
pub fn stabilization_report(
    f: &PolyMap,
    candidates: &[Point],
    k_max: usize,
    cfg: &FiberConfig,
) -> Result<StabilizationReport, ImageError> {
    if k_max == 0 {
        return Err(ImageError::ZeroIterate);
    }
    let mut cands = candidates.to_vec();
    cands.sort();
    cands.dedup();
    let uni = universe(f, &cands, k_max);
    let index: BTreeMap<&Point, usize> = uni.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let pre = uni.iter().map(|u| preimages(f, u, &uni, &index, cfg)).collect::<Result<Vec<_>, _>>()?;

    let mut prev = vec![Tri::No; uni.len()];
    let mut chain = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let cur: Vec<Tri> = pre
            .iter()
            .map(|p| match p {
                Preimages::None => Tri::Yes,
                Preimages::Escaping => Tri::No,
                Preimages::Inside { indices, exact } => {
                    if indices.iter().any(|&i| prev[i] == Tri::No) {
                        Tri::No
                    } else if *exact && indices.iter().all(|&i| prev[i] == Tri::Yes) {
                        Tri::Yes
                    } else {
                        Tri::Unknown
                    }
                }
            })
            .collect();
        let pick = |t: Tri| uni.iter().zip(&cur).filter(|(_, &c)| c == t).map(|(p, _)| p.clone()).collect();
        chain.push(Level { k, omitted: pick(Tri::Yes), indeterminate: pick(Tri::Unknown) });
        prev = cur;
    }

    let settled = |from: usize| chain[from..].iter().all(|l| l.indeterminate.is_empty() && l.omitted == chain[from].omitted);
    let index = match (0..k_max.saturating_sub(1)).find(|&i| settled(i)) {
        Some(i) => StabilizationIndex::Reached(i + 1),
        None => StabilizationIndex::NotReachedWithin(k_max),
    };
    let last = &chain[k_max - 1];
    let stable_image_note = match index {
        StabilizationIndex::Reached(k) => {
            format!("omitted by every iterate from k={k} through k={k_max}: {}", join(&last.omitted))
        }
        StabilizationIndex::NotReachedWithin(_) => format!("omitted at k={k_max}: {}", join(&last.omitted)),
    };
    Ok(StabilizationReport {
        candidates: cands,
        universe: uni,
        chain,
        index,
        stable_image_note,
        candidates_complete: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::parser::parse_map_str;

    fn pt(a: i64, b: i64) -> Point {
        Point::new(rat(a), rat(b))
    }

    #[test]
    fn example_stabilizes_at_one() {
        let f = parse_map_str(super::super::tests::EXAMPLE).unwrap();
        let r = stabilization_report(&f, &[pt(0, 0)], 5, &FiberConfig::default()).unwrap();
        assert_eq!(r.index, StabilizationIndex::Reached(1));
        assert_eq!(r.indeterminate_count(), 0);
        assert!(r.chain.iter().all(|l| l.omitted == vec![pt(0, 0)]));
        assert_eq!(r.universe.len(), 6);
    }

    #[test]
    fn trivial_examples() {
        let cfg = FiberConfig::default();
        let tri = parse_map_str("f(x,y) = (x, y + x^2)").unwrap();
        let r = stabilization_report(&tri, &[], 3, &cfg).unwrap();
        assert_eq!(r.index, StabilizationIndex::Reached(1));
        assert!(r.chain.iter().all(|l| l.omitted.is_empty()));
        let r = stabilization_report(&PolyMap::identity(), &[pt(1, 1)], 3, &cfg).unwrap();
        assert_eq!(r.index, StabilizationIndex::Reached(1));
        assert!(r.chain.iter().all(|l| l.omitted.is_empty()));
    }

    #[test]
    fn chain_is_monotone_and_sandwiched() {
        let f = parse_map_str("f(x,y) = (x^2, y^2 + x)").unwrap();
        let r = stabilization_report(&f, &[pt(1, 2), pt(0, -1)], 4, &FiberConfig::default()).unwrap();
        for w in r.chain.windows(2) {
            assert!(w[0].omitted.iter().all(|p| w[1].omitted.contains(p)));
            assert!(w[1].omitted.iter().all(|p| w[0].omitted.contains(p) || w[0].omitted.iter().any(|e| &f.apply(e) == p)));
        }
    }

    #[test]
    fn lines_are_tagged() {
        let f = parse_map_str(super::super::tests::EXAMPLE).unwrap();
        let mut r = stabilization_report(&f, &[pt(0, 0)], 2, &FiberConfig::default()).unwrap();
        r.candidates_complete = true;
        let lines = r.to_lines();
        assert!(lines.contains(&"FACT level 1 omitted (0,0)".to_string()));
        assert!(lines.contains(&"FACT stabilizes K=1".to_string()));
    }
}
