use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CofiniteSelfMap, Node};

/// Size limits for [`random_spec`].
#[derive(Clone, Copy, Debug)]
pub struct RandomSpecParams {
    pub max_rays: u32,
    pub max_core: usize,
    pub max_overrides: usize,
    pub max_coordinate: u64,
}

impl Default for RandomSpecParams {
    fn default() -> Self {
        RandomSpecParams { max_rays: 4, max_core: 6, max_overrides: 8, max_coordinate: 12 }
    }
}

/// Draws a valid spec: every core node gets an override, the remaining
/// override budget goes to ray nodes; targets are uniform over core nodes and
/// ray positions up to `max_coordinate`.
pub fn random_spec<R: Rng>(rng: &mut R, params: &RandomSpecParams) -> CofiniteSelfMap {
    loop {
        let rays = rng.random_range(0..=params.max_rays);
        let core = rng.random_range(0..=params.max_core.min(params.max_overrides));
        if rays == 0 && core == 0 {
            continue;
        }
        let labels: Vec<String> = (0..core).map(|i| format!("c{i}")).collect();
        let random_node = |rng: &mut R| -> Node {
            let pick_core = rays == 0 || (core > 0 && rng.random_bool(0.3));
            if pick_core {
                Node::Core(labels[rng.random_range(0..core)].clone())
            } else {
                Node::ray(rng.random_range(0..rays), rng.random_range(0..=params.max_coordinate))
            }
        };
        let mut overrides = std::collections::BTreeMap::new();
        for l in &labels {
            let t = random_node(rng);
            overrides.insert(Node::Core(l.clone()), t);
        }
        if rays > 0 {
            let extra = rng.random_range(0..=params.max_overrides - core);
            for _ in 0..extra {
                let s = Node::ray(rng.random_range(0..rays), rng.random_range(0..=params.max_coordinate));
                let t = random_node(rng);
                overrides.insert(s, t);
            }
        }
        return CofiniteSelfMap::new(labels, rays, overrides).expect("generated spec is valid");
    }
}

/// `count` specs from a ChaCha8 stream seeded with `seed`.
pub fn random_specs(seed: u64, count: usize) -> Vec<CofiniteSelfMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = RandomSpecParams::default();
    (0..count).map(|_| random_spec(&mut rng, &params)).collect()
}
