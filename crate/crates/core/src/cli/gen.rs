//! Seeded random instances.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::format::{Instance, MapDecl, Role};
use crate::fibrations::{default_class, is_fibration};
use crate::interval::IntervalCtx;
use crate::kernel::{self, FinMap, FinSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_size: usize,
    pub interval_size: usize,
    pub require_fibration: BTreeSet<Role>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_size: 3,
            interval_size: 2,
            require_fibration: [Role::P, Role::Q].into(),
        }
    }
}

/// The seed of the `index`-th instance of a run.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const ATTEMPTS: usize = 64;

fn random_map(rng: &mut ChaCha8Rng, dom: &FinSet, cod: &FinSet) -> Option<FinMap> {
    kernel::all_maps(dom, cod).choose(rng).cloned()
}

fn size(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    if hi < lo {
        hi
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// The first projection `base × Y → base` with as many `Y`s as fit.
fn projection(rng: &mut ChaCha8Rng, base: &FinSet, max: usize, prefix: &str) -> FinMap {
    let room = if base.is_empty() { max } else { max / base.len() };
    let fiber = FinSet::atoms(prefix, size(rng, 1, room.max(1)));
    let total = base.product(&fiber);
    FinMap::from_fn(total, base.clone(), |e| e.fst().cloned()).expect("projection is total")
}

/// A map into `base`, a fibration when `fibrant` is set.
fn over(
    rng: &mut ChaCha8Rng,
    base: &FinSet,
    ctx: &IntervalCtx,
    max: usize,
    prefix: &str,
    fibrant: bool,
) -> FinMap {
    let cls = default_class();
    for _ in 0..ATTEMPTS {
        if fibrant && rng.gen_bool(0.25) {
            return projection(rng, base, max, prefix);
        }
        // an empty total space is a fibration; keep it rare
        let lo = if rng.gen_bool(0.1) { 0 } else { base.len().min(max) };
        let dom = FinSet::atoms(prefix, size(rng, lo, max));
        let Some(f) = random_map(rng, &dom, base) else { continue };
        if !fibrant || is_fibration(&f, ctx, &cls).is_some() {
            return f;
        }
    }
    projection(rng, base, max, prefix)
}

pub fn gen_instance(seed: u64, cfg: &GenConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = IntervalCtx::with_size(cfg.interval_size);
    let max = cfg.max_size;
    let x = FinSet::atoms("x", size(&mut rng, 1, max));
    let wants = |r| cfg.require_fibration.contains(&r);
    let p = over(&mut rng, &x, &ctx, max, "a", wants(Role::P));
    let q = over(&mut rng, p.dom(), &ctx, max, "b", wants(Role::Q));
    let f = over(&mut rng, &x, &ctx, max, "z", wants(Role::F));
    let sets = vec![
        ("X".to_string(), x),
        ("A".to_string(), p.dom().clone()),
        ("B".to_string(), q.dom().clone()),
        ("Z".to_string(), f.dom().clone()),
        ("I".to_string(), ctx.points().clone()),
    ];
    let decl = |name: &str, src: &str, dst: &str, map: FinMap| MapDecl {
        name: name.into(),
        src: src.into(),
        dst: dst.into(),
        map,
    };
    Instance {
        sets,
        maps: vec![decl("p", "A", "X", p), decl("q", "B", "A", q), decl("f", "Z", "X", f)],
        interval: "I".into(),
        roles: BTreeMap::from(Role::ALL.map(|r| (r, r.name().to_string()))),
    }
}
