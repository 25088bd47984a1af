use std::collections::BTreeSet;

use super::{CofiniteSelfMap, DynError, Node};

/// Brute-force `E^k` for `k = 1..=k_max`, by materializing `X` truncated to
/// ray positions `< n_max` and iterating images as literal finite sets.
///
/// Results are restricted to core nodes and ray positions `< n_max - k_max`,
/// where truncation cannot change the answer. Element `k - 1` holds `E^k`.
pub fn truncation_oracle(spec: &CofiniteSelfMap, k_max: u64, n_max: u64) -> Result<Vec<BTreeSet<Node>>, DynError> {
    let required = spec.max_override_coordinate().unwrap_or(0) + k_max;
    if n_max <= required {
        return Err(DynError::NMaxTooSmall { n_max, required });
    }
    let limit = n_max - k_max;
    let universe: BTreeSet<Node> = spec
        .core_labels()
        .iter()
        .map(|l| Node::Core(l.clone()))
        .chain((0..spec.ray_count()).flat_map(|i| (0..n_max).map(move |p| Node::ray(i, p))))
        .collect();
    let in_window = |n: &Node| match n {
        Node::Core(_) => true,
        Node::Ray { position, .. } => *position < limit,
    };
    let mut image = universe.clone();
    let mut out = Vec::with_capacity(k_max as usize);
    for _ in 0..k_max {
        image = image.iter().map(|n| spec.apply(n).expect("universe nodes are valid")).collect();
        out.push(universe.iter().filter(|n| in_window(n) && !image.contains(*n)).cloned().collect());
    }
    Ok(out)
}
