//! Regenerates the maximal hollow seed polytopes by random search.
//!
//! Usage: seed_search [starts] [rng-seeds] [volume-bound]
//!
//! `rng-seeds` is a comma-separated list; each seed runs one search with
//! box side 2 and one with sides 2 and 3, and the results are merged.

use std::collections::BTreeMap;

use mdeg_core::classify::seeds::{is_maximal_hollow, search_maximal_hollow, validate_seed, HollowSeed, SeedFile, SEED_FORMAT, VOLUME_BOUND};
use mdeg_core::equiv::normal_form;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut args = std::env::args().skip(1);
    let starts: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20000);
    let rng_seeds: Vec<u64> = args
        .next()
        .map(|s| s.split(',').map(|x| x.parse().expect("rng seed")).collect())
        .unwrap_or_else(|| vec![1, 8]);
    let bound = args.next().and_then(|s| s.parse().ok()).unwrap_or(VOLUME_BOUND);
    let mut merged = BTreeMap::new();
    for &seed in &rng_seeds {
        for sides in [&[2][..], &[2, 3][..]] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for p in search_maximal_hollow(&mut rng, starts, sides, bound).expect("search") {
                let nf = normal_form(&p).expect("full-dimensional");
                merged.entry((p.normalized_volume(), nf)).or_insert(p);
            }
            eprintln!("rng {seed} sides {sides:?}: {} classes so far", merged.len());
        }
    }
    let mut seeds = Vec::new();
    for (i, p) in merged.into_values().enumerate() {
        eprintln!("M{} vol {} verts {:?} maximal {}", i + 1, p.normalized_volume(), p.vertices(), is_maximal_hollow(&p, bound));
        let s = HollowSeed { name: format!("M{}", i + 1), polytope: p };
        validate_seed(&s).expect("valid");
        seeds.push(s);
    }
    let file = SeedFile { format: SEED_FORMAT, version: "1".into(), seeds };
    println!("{}", serde_json::to_string_pretty(&file).unwrap());
}
