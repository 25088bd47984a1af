//! Dynamics of self-maps `f: X -> X` with finite coimage, on a finitely
//! presented class of infinite sets.
//!
//! `X` is a finite set of core nodes together with `r` rays `ray:i:0, ray:i:1, ...`.
//! By default each ray node shifts to the next position on its ray; a finite
//! override table redirects individual nodes (every core node must be overridden).
//! On this class every node has finitely many preimages and `E = X - f(X)` is
//! finite, while genuinely unstable chains `E ⊆ E^2 ⊆ ...` occur (a bare ray).
//!
//! Everything is computed from backward depth: `depth(x)` is the length of the
//! longest backward chain ending at `x` (infinite when `x` has an ancestor on a
//! cycle). Then `x ∈ E^k` iff `depth(x) < k`, and `x ∈ E^∞` iff the depth is
//! finite. Past the last override coordinate of ray `i` (its anchor) preimages
//! are unique, so depth grows by one per position and all sets stay finite.

mod oracle;
mod random;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use oracle::truncation_oracle;
pub use random::{random_spec, random_specs, RandomSpecParams};

/// Default orbit length checked when building a [`Lemma1Witness`].
pub const DEFAULT_VERIFY_BOUND: u64 = 50;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Core(String),
    Ray { index: u32, position: u64 },
}

impl Node {
    pub fn core(label: &str) -> Self {
        Node::Core(label.to_string())
    }

    pub fn ray(index: u32, position: u64) -> Self {
        Node::Ray { index, position }
    }
}

/// Parses `core:<label>` or `ray:<index>:<position>`.
impl std::str::FromStr for Node {
    type Err = DynError;

    fn from_str(s: &str) -> Result<Self, DynError> {
        let bad = || DynError::InvalidNode(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["core", l] if !l.is_empty() => Ok(Node::core(l)),
            ["ray", i, n] => Ok(Node::ray(i.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Core(l) => write!(f, "core:{l}"),
            Node::Ray { index, position } => write!(f, "ray:{index}:{position}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("invalid node {0}")]
    InvalidNode(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("backward orbit of {node} unresolved within depth {depth_cap}")]
    Unresolved { node: String, depth_cap: u64 },
    #[error("spec is stable; no witness exists")]
    StableSpec,
    #[error("n_max = {n_max} too small, need more than {required}")]
    NMaxTooSmall { n_max: u64, required: u64 },
    #[error("k must be at least 1")]
    ZeroK,
}

/// Backward depth of a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Depth {
    Finite(u64),
    Infinite,
}

impl Depth {
    fn plus(self, k: u64) -> Depth {
        match self {
            Depth::Finite(d) => Depth::Finite(d + k),
            Depth::Infinite => Depth::Infinite,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Depth::Finite(_))
    }
}

/// `f: X -> X` given by core nodes, shift rays and a finite override table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CofiniteSelfMap {
    core: BTreeSet<String>,
    rays: u32,
    overrides: BTreeMap<Node, Node>,
    /// Per ray: one past the largest override coordinate on it.
    anchors: Vec<u64>,
    /// Depth of every node of the finite region (core plus ray positions up to the anchor).
    depths: BTreeMap<Node, Depth>,
}

impl CofiniteSelfMap {
    pub fn new(
        core: impl IntoIterator<Item = String>,
        rays: u32,
        overrides: impl IntoIterator<Item = (Node, Node)>,
    ) -> Result<Self, DynError> {
        let mut labels = BTreeSet::new();
        for l in core {
            if !labels.insert(l.clone()) {
                return Err(DynError::InvalidSpec(format!("duplicate core label `{l}`")));
            }
        }
        if labels.is_empty() && rays == 0 {
            return Err(DynError::InvalidSpec("the set X is empty".into()));
        }
        let valid = |n: &Node| match n {
            Node::Core(l) => labels.contains(l),
            Node::Ray { index, .. } => *index < rays,
        };
        let mut table = BTreeMap::new();
        for (s, t) in overrides {
            if !valid(&s) {
                return Err(DynError::InvalidNode(s.to_string()));
            }
            if !valid(&t) {
                return Err(DynError::InvalidNode(t.to_string()));
            }
            if table.insert(s.clone(), t).is_some() {
                return Err(DynError::InvalidSpec(format!("{s} is mapped twice")));
            }
        }
        if let Some(l) = labels.iter().find(|l| !table.contains_key(&Node::Core((*l).clone()))) {
            return Err(DynError::InvalidSpec(format!("core node `{l}` has no image")));
        }
        let mut anchors = vec![0u64; rays as usize];
        for n in table.keys().chain(table.values()) {
            if let Node::Ray { index, position } = n {
                let a = &mut anchors[*index as usize];
                *a = (*a).max(position + 1);
            }
        }
        let mut spec = CofiniteSelfMap { core: labels, rays, overrides: table, anchors, depths: BTreeMap::new() };
        spec.depths = spec.compute_depths();
        Ok(spec)
    }

    pub fn core_labels(&self) -> &BTreeSet<String> {
        &self.core
    }

    pub fn ray_count(&self) -> u32 {
        self.rays
    }

    pub fn overrides(&self) -> &BTreeMap<Node, Node> {
        &self.overrides
    }

    /// Position past which ray `index` is a plain shift with unique preimages.
    pub fn anchor(&self, index: u32) -> u64 {
        self.anchors[index as usize]
    }

    /// Largest coordinate appearing in any override, if any ray override exists.
    pub fn max_override_coordinate(&self) -> Option<u64> {
        self.overrides
            .keys()
            .chain(self.overrides.values())
            .filter_map(|n| match n {
                Node::Ray { position, .. } => Some(*position),
                Node::Core(_) => None,
            })
            .max()
    }

    /// Core size + Σ(max override coordinate per ray + 1) + ray count + 1.
    pub fn stability_bound(&self) -> u64 {
        self.core.len() as u64 + self.anchors.iter().sum::<u64>() + self.rays as u64 + 1
    }

    pub fn contains(&self, n: &Node) -> bool {
        match n {
            Node::Core(l) => self.core.contains(l),
            Node::Ray { index, .. } => *index < self.rays,
        }
    }

    fn check(&self, n: &Node) -> Result<(), DynError> {
        if self.contains(n) {
            Ok(())
        } else {
            Err(DynError::InvalidNode(n.to_string()))
        }
    }

    /// Nodes of the finite region, which is closed under taking preimages.
    fn region(&self) -> Vec<Node> {
        let mut v: Vec<Node> = self.core.iter().map(|l| Node::Core(l.clone())).collect();
        for (i, &a) in self.anchors.iter().enumerate() {
            v.extend((0..=a).map(|p| Node::ray(i as u32, p)));
        }
        v
    }

    fn in_region(&self, n: &Node) -> bool {
        match n {
            Node::Core(_) => true,
            Node::Ray { index, position } => *position <= self.anchors[*index as usize],
        }
    }

    fn image(&self, n: &Node) -> Node {
        match self.overrides.get(n) {
            Some(t) => t.clone(),
            None => match n {
                Node::Ray { index, position } => Node::ray(*index, position + 1),
                Node::Core(_) => unreachable!("core nodes are always overridden"),
            },
        }
    }

    fn fiber(&self, n: &Node) -> BTreeSet<Node> {
        let mut out: BTreeSet<Node> = self
            .overrides
            .iter()
            .filter(|(_, t)| *t == n)
            .map(|(s, _)| s.clone())
            .collect();
        if let Node::Ray { index, position } = n {
            if *position > 0 {
                let prev = Node::ray(*index, position - 1);
                if !self.overrides.contains_key(&prev) {
                    out.insert(prev);
                }
            }
        }
        out
    }

    fn compute_depths(&self) -> BTreeMap<Node, Depth> {
        let region = self.region();
        let mut pending: BTreeMap<Node, usize> = BTreeMap::new();
        let mut best: BTreeMap<Node, u64> = BTreeMap::new();
        let mut depths = BTreeMap::new();
        let mut queue = VecDeque::new();
        for n in &region {
            let k = self.fiber(n).len();
            if k == 0 {
                depths.insert(n.clone(), Depth::Finite(0));
                queue.push_back(n.clone());
            }
            pending.insert(n.clone(), k);
        }
        while let Some(n) = queue.pop_front() {
            let Depth::Finite(d) = depths[&n] else { unreachable!() };
            let t = self.image(&n);
            if !self.in_region(&t) {
                continue;
            }
            let b = best.entry(t.clone()).or_insert(0);
            *b = (*b).max(d + 1);
            let left = pending.get_mut(&t).expect("region node");
            *left -= 1;
            if *left == 0 {
                depths.insert(t.clone(), Depth::Finite(*b));
                queue.push_back(t);
            }
        }
        // whatever never resolved has an ancestor on a cycle
        for n in region {
            depths.entry(n).or_insert(Depth::Infinite);
        }
        depths
    }

    pub fn apply(&self, n: &Node) -> Result<Node, DynError> {
        self.check(n)?;
        Ok(self.image(n))
    }

    /// Full fiber `f^{-1}(n)`.
    pub fn preimages(&self, n: &Node) -> Result<BTreeSet<Node>, DynError> {
        self.check(n)?;
        Ok(self.fiber(n))
    }

    pub fn depth(&self, n: &Node) -> Result<Depth, DynError> {
        self.check(n)?;
        Ok(self.depth_unchecked(n))
    }

    fn depth_unchecked(&self, n: &Node) -> Depth {
        if let Some(d) = self.depths.get(n) {
            return *d;
        }
        match n {
            Node::Ray { index, position } => {
                let a = self.anchors[*index as usize];
                self.depths[&Node::ray(*index, a)].plus(position - a)
            }
            Node::Core(_) => unreachable!("core nodes lie in the region"),
        }
    }

    /// `n ∈ E^∞`.
    pub fn in_e_infinity(&self, n: &Node) -> Result<bool, DynError> {
        Ok(self.depth(n)?.is_finite())
    }

    /// `E^k = X - f^k(X)`.
    pub fn e_set(&self, k: u64) -> Result<BTreeSet<Node>, DynError> {
        if k == 0 {
            return Err(DynError::ZeroK);
        }
        let mut out: BTreeSet<Node> = self
            .depths
            .iter()
            .filter(|(_, d)| matches!(d, Depth::Finite(v) if *v < k))
            .map(|(n, _)| n.clone())
            .collect();
        for (i, &a) in self.anchors.iter().enumerate() {
            if let Depth::Finite(d) = self.depths[&Node::ray(i as u32, a)] {
                // ray:i:(a + j) has depth d + j
                for j in 1..k.saturating_sub(d) {
                    out.insert(Node::ray(i as u32, a + j));
                }
            }
        }
        Ok(out)
    }

    /// Decides whether `E ⊆ E^2 ⊆ ...` becomes constant.
    ///
    /// Unstable exactly when some `e ∈ E` has its whole forward orbit in `E^∞`;
    /// the least such `e` is returned. Otherwise `E^∞` is finite and
    /// `K = 1 + max depth` is the first index with `E^K = E^{K+1}`.
    pub fn is_stable(&self) -> Stability {
        for e in self.e_set(1).expect("k = 1") {
            if self.orbit_stays_in_e_infinity(&e) {
                return Stability::NotStable { e };
            }
        }
        let k = self
            .depths
            .values()
            .filter_map(|d| match d {
                Depth::Finite(v) => Some(*v),
                Depth::Infinite => None,
            })
            .max()
            .map_or(1, |m| m + 1);
        Stability::Stable { k, e_k: self.e_set(k).expect("k >= 1") }
    }

    fn orbit_stays_in_e_infinity(&self, e: &Node) -> bool {
        let mut seen = BTreeSet::new();
        let mut cur = e.clone();
        loop {
            if !self.depth_unchecked(&cur).is_finite() || !seen.insert(cur.clone()) {
                return false;
            }
            if let Node::Ray { index, position } = &cur {
                if *position > self.anchors[*index as usize] {
                    // pure shift from here on; depths increase along the tail
                    return true;
                }
            }
            cur = self.image(&cur);
        }
    }

    /// Reverse breadth-first search from `root`.
    pub fn backward_orbit(&self, root: &Node, depth_cap: u64) -> Result<BackwardOrbit, DynError> {
        self.check(root)?;
        let mut edges = BTreeSet::new();
        let mut seen: BTreeSet<Node> = BTreeSet::from([root.clone()]);
        let mut frontier = vec![root.clone()];
        let mut level = 0u64;
        loop {
            let mut next = Vec::new();
            for parent in &frontier {
                for child in self.fiber(parent) {
                    edges.insert((child.clone(), parent.clone()));
                    if !seen.insert(child.clone()) {
                        // each node has one image, so a revisit closes a cycle
                        return Ok(BackwardOrbit { root: root.clone(), edges, verdict: OrbitVerdict::ContainsCycle });
                    }
                    next.push(child);
                }
            }
            if next.is_empty() {
                return Ok(BackwardOrbit { root: root.clone(), edges, verdict: OrbitVerdict::FiniteTree(level) });
            }
            level += 1;
            if level > depth_cap {
                return Err(DynError::Unresolved { node: root.to_string(), depth_cap });
            }
            frontier = next;
        }
    }

    pub fn lemma1_witness(&self) -> Result<Lemma1Witness, DynError> {
        self.lemma1_witness_with_bound(DEFAULT_VERIFY_BOUND)
    }

    /// Witness `e ∈ E` with all `f^k(e)` distinct and in `E^∞`, and the least
    /// `M` such that `f(x) = f^k(e)` has the single solution `f^{k-1}(e)` for all `k >= M`.
    /// The orbit is checked up to `bound`.
    pub fn lemma1_witness_with_bound(&self, bound: u64) -> Result<Lemma1Witness, DynError> {
        let e = match self.is_stable() {
            Stability::NotStable { e } => e,
            Stability::Stable { .. } => return Err(DynError::StableSpec),
        };
        // last k whose point still has an extra preimage; beyond the anchor none do
        let mut last_bad = 0u64;
        let mut prev = e.clone();
        let mut k = 1u64;
        loop {
            let cur = self.image(&prev);
            let fib = self.fiber(&cur);
            if fib.len() != 1 || !fib.contains(&prev) {
                last_bad = k;
            }
            if let Node::Ray { index, position } = &cur {
                if *position > self.anchors[*index as usize] {
                    break;
                }
            }
            prev = cur;
            k += 1;
        }
        let m = last_bad + 1;

        let mut orbit = vec![e.clone()];
        for _ in 0..bound {
            let next = self.image(orbit.last().unwrap());
            orbit.push(next);
        }
        let distinct: BTreeSet<&Node> = orbit.iter().collect();
        if distinct.len() != orbit.len() {
            return Err(DynError::InvalidSpec(format!("orbit of {e} repeats")));
        }
        let cap = bound + self.depths.len() as u64 + 1;
        for p in &orbit {
            let o = self.backward_orbit(p, cap)?;
            if !matches!(o.verdict, OrbitVerdict::FiniteTree(_)) {
                return Err(DynError::InvalidSpec(format!("{p} is not in E^∞")));
            }
        }
        for k in m.max(1)..=bound {
            let fib = self.fiber(&orbit[k as usize]);
            if fib.len() != 1 || !fib.contains(&orbit[k as usize - 1]) {
                return Err(DynError::InvalidSpec(format!("f^{k}({e}) has several preimages")));
            }
        }
        Ok(Lemma1Witness { e, m, orbit_prefix: orbit })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable { k: u64, e_k: BTreeSet<Node> },
    NotStable { e: Node },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    /// Tree whose longest path has this many edges.
    FiniteTree(u64),
    ContainsCycle,
    /// Never produced on this class; an infinite backward path always closes a cycle here.
    UnboundedPath,
}

/// Backward orbit `O(root)`: edges `(child, parent)` with `f(child) = parent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardOrbit {
    pub root: Node,
    pub edges: BTreeSet<(Node, Node)>,
    pub verdict: OrbitVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Witness {
    pub e: Node,
    /// Least threshold; never below 1.
    pub m: u64,
    /// `f^k(e)` for `k = 0..=bound`.
    pub orbit_prefix: Vec<Node>,
}

/// Small named specs.
pub mod fixtures {
    use super::*;

    /// A single bare ray.

    pub fn pure_shift() -> CofiniteSelfMap {
        CofiniteSelfMap::new(Vec::new(), 1, Vec::new()).unwrap()
    }

    /// Ray 1 merges into ray 0 at position 1.
    pub fn merge() -> CofiniteSelfMap {
        CofiniteSelfMap::new(Vec::new(), 2, [(Node::ray(1, 0), Node::ray(0, 1))]).unwrap()
    }

    /// Rays 1 and 2 merge into ray 0 at positions 1 and 4.
    pub fn three_ray() -> CofiniteSelfMap {
        CofiniteSelfMap::new(
            Vec::new(),
            3,
            [(Node::ray(1, 0), Node::ray(0, 1)), (Node::ray(2, 0), Node::ray(0, 4))],
        )
        .unwrap()
    }

    pub fn two_core() -> CofiniteSelfMap {
        CofiniteSelfMap::new(
            ["c1".to_string(), "c2".to_string()],
            0,
            [(Node::core("c1"), Node::core("c2")), (Node::core("c2"), Node::core("c2"))],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn node_text() {
        for n in [Node::core("a1"), Node::ray(3, 17)] {
            assert_eq!(n.to_string().parse::<Node>().unwrap(), n);
        }
        assert!("ray:1".parse::<Node>().is_err());
        assert!("core:".parse::<Node>().is_err());
    }

    fn set(nodes: &[Node]) -> BTreeSet<Node> {
        nodes.iter().cloned().collect()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(pure_shift().apply(&Node::ray(0, 3)).unwrap(), Node::ray(0, 4));
        let s = CofiniteSelfMap::new(["c".to_string()], 1, [(Node::core("c"), Node::ray(0, 0))]).unwrap();
        assert_eq!(s.apply(&Node::core("c")).unwrap(), Node::ray(0, 0));
        assert_eq!(merge().apply(&Node::ray(1, 0)).unwrap(), Node::ray(0, 1));
        assert!(matches!(merge().apply(&Node::ray(2, 0)), Err(DynError::InvalidNode(_))));
        assert!(matches!(s.apply(&Node::core("d")), Err(DynError::InvalidNode(_))));
    }

    #[test]
    fn preimage_examples() {
        assert!(pure_shift().preimages(&Node::ray(0, 0)).unwrap().is_empty());
        assert_eq!(pure_shift().preimages(&Node::ray(0, 5)).unwrap(), set(&[Node::ray(0, 4)]));
        assert_eq!(merge().preimages(&Node::ray(0, 1)).unwrap(), set(&[Node::ray(0, 0), Node::ray(1, 0)]));
        assert!(merge().preimages(&Node::ray(1, 1)).unwrap().is_empty());
    }

    #[test]
    fn spec_validation() {
        assert!(CofiniteSelfMap::new(Vec::new(), 0, Vec::new()).is_err());
        assert!(CofiniteSelfMap::new(["a".to_string()], 1, Vec::new()).is_err());
        assert!(CofiniteSelfMap::new(Vec::new(), 1, [(Node::ray(0, 0), Node::ray(3, 0))]).is_err());
        assert!(CofiniteSelfMap::new(["a".to_string(), "a".to_string()], 1, Vec::new()).is_err());
    }

    #[test]
    fn e_set_examples() {
        let s = pure_shift();
        for k in 1..6 {
            let want: BTreeSet<Node> = (0..k).map(|p| Node::ray(0, p)).collect();
            assert_eq!(s.e_set(k).unwrap(), want);
        }
        let c = two_core();
        for k in 1..5 {
            assert_eq!(c.e_set(k).unwrap(), set(&[Node::core("c1")]));
        }
        assert_eq!(merge().e_set(1).unwrap(), set(&[Node::ray(0, 0), Node::ray(1, 0), Node::ray(1, 1)]));
        assert_eq!(s.e_set(0), Err(DynError::ZeroK));
    }

    #[test]
    fn stability_examples() {
        assert_eq!(two_core().is_stable(), Stability::Stable { k: 1, e_k: set(&[Node::core("c1")]) });
        assert_eq!(pure_shift().is_stable(), Stability::NotStable { e: Node::ray(0, 0) });
        assert_eq!(merge().is_stable(), Stability::NotStable { e: Node::ray(0, 0) });
    }

    #[test]
    fn backward_orbit_examples() {
        let o = pure_shift().backward_orbit(&Node::ray(0, 2), 10).unwrap();
        assert_eq!(o.verdict, OrbitVerdict::FiniteTree(2));
        assert!(o.edges.contains(&(Node::ray(0, 0), Node::ray(0, 1))));
        let cyc = CofiniteSelfMap::new(["c".to_string()], 0, [(Node::core("c"), Node::core("c"))]).unwrap();
        assert_eq!(cyc.backward_orbit(&Node::core("c"), 10).unwrap().verdict, OrbitVerdict::ContainsCycle);
        let m = merge().backward_orbit(&Node::ray(0, 2), 10).unwrap();
        assert_eq!(m.verdict, OrbitVerdict::FiniteTree(2));
        let want: BTreeSet<(Node, Node)> = [
            (Node::ray(0, 1), Node::ray(0, 2)),
            (Node::ray(0, 0), Node::ray(0, 1)),
            (Node::ray(1, 0), Node::ray(0, 1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(m.edges, want);
        assert!(matches!(
            pure_shift().backward_orbit(&Node::ray(0, 100), 10),
            Err(DynError::Unresolved { .. })
        ));
    }

    #[test]
    fn unstable_witness_examples() {
        let w = pure_shift().lemma1_witness().unwrap();
        assert_eq!((w.e.clone(), w.m), (Node::ray(0, 0), 1));
        assert_eq!(w.orbit_prefix.len(), 51);
        let w = merge().lemma1_witness().unwrap();
        assert_eq!((w.e, w.m), (Node::ray(0, 0), 2));
        let w = three_ray().lemma1_witness().unwrap();
        assert_eq!((w.e, w.m), (Node::ray(0, 0), 5));
        assert_eq!(two_core().lemma1_witness(), Err(DynError::StableSpec));
    }

    #[test]
    fn bijection_has_empty_coimage() {
        // core cycle a -> b -> a, no rays
        let s = CofiniteSelfMap::new(
            ["a".to_string(), "b".to_string()],
            0,
            [(Node::core("a"), Node::core("b")), (Node::core("b"), Node::core("a"))],
        )
        .unwrap();
        assert!(s.e_set(1).unwrap().is_empty());
        assert_eq!(s.is_stable(), Stability::Stable { k: 1, e_k: BTreeSet::new() });
    }
}
