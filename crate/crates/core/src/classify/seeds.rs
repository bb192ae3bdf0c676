//! The maximal hollow 3-polytopes that have no projection onto a hollow polygon.
//!
//! Every hollow 3-polytope without such a projection lies, up to
//! equivalence, in one of finitely many maximal ones. They ship as a
//! versioned data file. [`search_maximal_hollow`] regenerates them by
//! growing random starting polytopes until no lattice point can be added.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hollow::hollow_projection;
use crate::equiv::normal_form;
use crate::error::{Error, Result};
use crate::intlin::{div_ceil, div_floor, Int, IntMatrix, IntVector};
use crate::polytope::{hull, LatticePolytope};

pub const SEED_FORMAT: u32 = 1;

/// Normalized volume bound used when certifying maximality.
pub const VOLUME_BOUND: Int = 36;

const BUNDLED: &str = include_str!("../../data/hollow_seeds.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HollowSeed {
    pub name: String,
    pub polytope: LatticePolytope,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeedFile {
    pub format: u32,
    pub version: String,
    pub seeds: Vec<HollowSeed>,
}

/// The bundled seeds, validated.
pub fn bundled_seeds() -> Result<Vec<HollowSeed>> {
    load_seeds(BUNDLED)
}

/// Version string of the bundled seed file.
pub fn bundled_version() -> String {
    serde_json::from_str::<SeedFile>(BUNDLED).map(|f| f.version).unwrap_or_default()
}

/// Parses and validates a seed file.
pub fn load_seed_file(json: &str) -> Result<SeedFile> {
    let file: SeedFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    if file.format != SEED_FORMAT {
        return Err(Error::Parse(format!("unsupported seed format {}", file.format)));
    }
    for s in &file.seeds {
        validate_seed(s)?;
    }
    Ok(file)
}

pub fn load_seeds(json: &str) -> Result<Vec<HollowSeed>> {
    Ok(load_seed_file(json)?.seeds)
}

pub fn validate_seed(seed: &HollowSeed) -> Result<()> {
    let bad = |reason: &str| Error::SeedInvalid { name: seed.name.clone(), reason: reason.into() };
    let p = &seed.polytope;
    if p.ambient_dim() != 3 || !p.is_full_dimensional() {
        return Err(bad("not a 3-dimensional polytope"));
    }
    if !p.is_hollow() {
        return Err(bad("has an interior lattice point"));
    }
    if p.lattice_width()?.0 < 2 {
        return Err(bad("lattice width below two"));
    }
    if hollow_projection(p)?.is_some() {
        return Err(bad("projects onto a hollow polygon"));
    }
    Ok(())
}

/// Normalized area of each facet inside its own lattice plane.
fn facet_areas(p: &LatticePolytope) -> Vec<Int> {
    p.facet_vertices()
        .iter()
        .map(|idx| {
            let pts: Vec<IntVector> = idx.iter().map(|&i| p.vertices()[i].clone()).collect();
            hull(&pts).expect("facet").relative_normalized_volume()
        })
        .collect()
}

/// Lattice points outside `p` that could extend it to a hollow polytope of
/// normalized volume at most `bound`.
///
/// A point beyond facet `F` at lattice distance `h` adds a pyramid of
/// normalized volume `h * area(F)`, so `h` is bounded for every facet.
pub fn extension_candidates(p: &LatticePolytope, bound: Int) -> Vec<IntVector> {
    let room = bound - p.normalized_volume();
    if room <= 0 {
        return Vec::new();
    }
    let areas = facet_areas(p);
    let ineqs: Vec<(IntVector, Int)> =
        p.facets().iter().zip(&areas).map(|(f, a)| (f.normal.clone(), f.offset + room / a)).collect();
    // Bounding box from the vertices of the enlarged polytope.
    let mut lo = [Int::MAX; 3];
    let mut hi = [Int::MIN; 3];
    for (a, b, c) in ineqs.iter().tuple_combinations() {
        let m = IntMatrix::from_rows(&[&a.0, &b.0, &c.0], 3);
        let det = m.det();
        if det == 0 {
            continue;
        }
        let num = m.adjugate().mul_vec(&[a.1, b.1, c.1]);
        // Keep only points satisfying every inequality (compared over the common denominator).
        let ok = ineqs.iter().all(|(n, o)| {
            let lhs: i128 = n.iter().zip(num.iter()).map(|(&x, &y)| x as i128 * y as i128).sum();
            if det > 0 {
                lhs <= *o as i128 * det as i128
            } else {
                lhs >= *o as i128 * det as i128
            }
        });
        if !ok {
            continue;
        }
        for i in 0..3 {
            let (fl, ce) = if det > 0 {
                (div_floor(num[i], det), div_ceil(num[i], det))
            } else {
                (div_floor(-num[i], -det), div_ceil(-num[i], -det))
            };
            lo[i] = lo[i].min(fl);
            hi[i] = hi[i].max(ce);
        }
    }
    let mut out = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            for z in lo[2]..=hi[2] {
                let v = IntVector::from(&[x, y, z][..]);
                if ineqs.iter().all(|(n, o)| n.dot(&v) <= *o) && !p.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

fn extend(p: &LatticePolytope, x: &IntVector) -> LatticePolytope {
    let mut pts = p.vertices().to_vec();
    pts.push(x.clone());
    hull(&pts).expect("nonempty")
}

/// No lattice point within the volume bound extends `p` to a hollow polytope.
pub fn is_maximal_hollow(p: &LatticePolytope, bound: Int) -> bool {
    extension_candidates(p, bound).iter().all(|x| !extend(p, x).is_hollow())
}

/// Adds random admissible lattice points until none is left.
pub fn grow_to_maximal<R: Rng>(p: &LatticePolytope, rng: &mut R, bound: Int) -> LatticePolytope {
    let mut cur = p.clone();
    'outer: loop {
        let mut cands = extension_candidates(&cur, bound);
        cands.shuffle(rng);
        for x in cands {
            let q = extend(&cur, &x);
            if q.is_hollow() && q.normalized_volume() <= bound {
                cur = q;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// A random hollow polytope in a small box with no projection onto a hollow polygon.
pub fn random_start<R: Rng>(rng: &mut R, side: Int) -> LatticePolytope {
    loop {
        let k = rng.gen_range(4..=7);
        let pts: Vec<IntVector> = (0..k).map(|_| (0..3).map(|_| rng.gen_range(0..=side)).collect()).collect();
        let p = hull(&pts).expect("nonempty");
        if p.is_full_dimensional() && p.is_hollow() && matches!(hollow_projection(&p), Ok(None)) {
            return p;
        }
    }
}

/// Maximal hollow polytopes reached from `starts` random starting points,
/// one per equivalence class, sorted by normalized volume then normal form.
///
/// Starting points are drawn from boxes whose sides cycle through `sides`.
pub fn search_maximal_hollow<R: Rng>(rng: &mut R, starts: usize, sides: &[Int], bound: Int) -> Result<Vec<LatticePolytope>> {
    let mut found = std::collections::BTreeMap::new();
    for i in 0..starts {
        let p = random_start(rng, sides[i % sides.len()]);
        let m = grow_to_maximal(&p, rng, bound);
        let nf = normal_form(&m)?;
        found.entry((m.normalized_volume(), nf)).or_insert_with(|| nf_representative(&m));
    }
    Ok(found.into_values().collect())
}

/// The canonical representative of `p`, moved to nonnegative coordinates.
fn nf_representative(p: &LatticePolytope) -> LatticePolytope {
    let q = normal_form(p).expect("full-dimensional").canonical_polytope();
    let lo: Vec<Int> = (0..3).map(|i| q.vertices().iter().map(|v| v[i]).min().unwrap()).collect();
    q.translate(&lo.iter().map(|x| -x).collect::<Vec<_>>())
}
