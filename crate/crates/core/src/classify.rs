//! Classification pipelines for triples of lattice 3-polytopes of mixed degree one.
//!
//! Every pipeline returns a [`ClassManifest`]: one representative tuple per
//! equivalence class, keyed by a digest that is an invariant of the class.

mod cache;
mod cover;
mod cube;
mod hollow;
mod pairs;
pub mod seeds;

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::equiv::{normal_form, tuple_equivalent};
use crate::error::{Error, Result};
use crate::decomp::normalize_translation;
use crate::intlin::IntVector;
use crate::polytope::{hull, LatticePolytope, PolytopeTuple};
use crate::proj::projects_onto_simplex_translates;

pub use cache::Cache;
pub use cover::{dim4_case0_check, maximal_cover_check, maximal_subtriples, CoverReport, Dim4Report};
pub use cube::{family_subtriples, family_subtriples_upto, md_one_subtriples, triples_spanning_directions};
pub use hollow::{enumerate_hollow_subpolytopes, hollow_projection, is_exceptional_pair};
pub use pairs::{
    exceptional_pairs, exceptional_subpair_count, triples_multi_exceptional, triples_one_exceptional, Context,
};
pub use seeds::HollowSeed;

pub const MANIFEST_FORMAT: u32 = 1;

/// Stable identifiers of the pipelines.
pub mod pipeline_id {
    pub const EXCEPTIONAL_PAIRS: &str = "exceptional-pairs";
    pub const TWO_EXCEPTIONAL: &str = "two-exceptional";
    pub const THREE_EXCEPTIONAL: &str = "three-exceptional";
    pub const ONE_EXCEPTIONAL: &str = "one-exceptional";
    pub const SPANNING: &str = "spanning";
    pub const FAMILY: &str = "family";
}

/// One equivalence class: a representative and its digest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub members: PolytopeTuple,
    pub digest: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassManifest {
    pub format: u32,
    pub pipeline_id: String,
    pub parameters: BTreeMap<String, String>,
    /// Seed data version and anything else the result depends on.
    pub provenance: String,
    pub count: usize,
    pub classes: Vec<ClassRecord>,
}

impl ClassManifest {
    pub fn new(pipeline_id: &str, parameters: BTreeMap<String, String>, provenance: String, set: ClassSet) -> Self {
        let classes = set.into_records();
        ClassManifest {
            format: MANIFEST_FORMAT,
            pipeline_id: pipeline_id.into(),
            parameters,
            provenance,
            count: classes.len(),
            classes,
        }
    }

    pub fn tuples(&self) -> impl Iterator<Item = &PolytopeTuple> {
        self.classes.iter().map(|c| &c.members)
    }

    pub fn digests(&self) -> BTreeSet<String> {
        self.classes.iter().map(|c| c.digest.clone()).collect()
    }

    /// Checks the format, the count and that digests are distinct and sorted.
    pub fn validate(&self) -> Result<()> {
        if self.format != MANIFEST_FORMAT {
            return Err(Error::Parse(format!("unsupported manifest format {}", self.format)));
        }
        if self.count != self.classes.len() {
            return Err(Error::Parse(format!("count {} but {} classes", self.count, self.classes.len())));
        }
        if !self.classes.windows(2).all(|w| w[0].digest < w[1].digest) {
            return Err(Error::Parse("digests are not distinct and sorted".into()));
        }
        Ok(())
    }

    /// Re-tests `pred` on every representative and returns the offending digests.
    pub fn failing<F: Fn(&PolytopeTuple) -> Result<bool> + Sync>(&self, pred: F) -> Result<Vec<String>> {
        use rayon::prelude::*;
        let bad: Result<Vec<Option<String>>> = self
            .classes
            .par_iter()
            .map(|c| Ok(if pred(&c.members)? { None } else { Some(c.digest.clone()) }))
            .collect();
        Ok(bad?.into_iter().flatten().collect())
    }
}

fn sha_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Digest of a tuple's class and whether it is the Cayley-sum key.
///
/// Without a common projection onto translates of a unimodular simplex,
/// two tuples are equivalent iff their Cayley sums are, and the key is the
/// Cayley normal form. Otherwise it combines the sorted member normal forms
/// with the Cayley normal form, and equal keys must be resolved by a direct
/// search.
pub fn tuple_key(t: &PolytopeTuple) -> Result<(String, bool)> {
    let cayley = normal_form(&t.cayley_sum())?.hash;
    if !projects_onto_simplex_translates(t)? {
        return Ok((format!("c{cayley}"), true));
    }
    let members: Vec<String> = t.iter().map(|p| normal_form(p).map(|f| f.hash)).collect::<Result<Vec<_>>>()?;
    let joined = members.iter().sorted().join(",") + "/" + &cayley;
    Ok((format!("t{}", sha_hex(&joined)), false))
}

/// Deduplicating set of tuples up to equivalence.
#[derive(Default)]
pub struct ClassSet {
    buckets: BTreeMap<String, Vec<PolytopeTuple>>,
}

impl ClassSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `t` under a precomputed [`tuple_key`]; false if its class is present.
    pub fn insert_keyed(&mut self, t: PolytopeTuple, key: (String, bool)) -> Result<bool> {
        let bucket = self.buckets.entry(key.0).or_default();
        if key.1 {
            if !bucket.is_empty() {
                return Ok(false);
            }
        } else {
            for other in bucket.iter() {
                if tuple_equivalent(other, &t)? {
                    return Ok(false);
                }
            }
        }
        bucket.push(t);
        Ok(true)
    }

    pub fn insert(&mut self, t: PolytopeTuple) -> Result<bool> {
        let key = tuple_key(&t)?;
        self.insert_keyed(t, key)
    }

    pub fn contains(&self, t: &PolytopeTuple) -> Result<bool> {
        let (key, cayley) = tuple_key(t)?;
        let Some(bucket) = self.buckets.get(&key) else { return Ok(false) };
        if cayley {
            return Ok(true);
        }
        for other in bucket {
            if tuple_equivalent(other, t)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &PolytopeTuple> {
        self.buckets.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    /// Inserts many candidates. Keys are computed in parallel; candidates
    /// are inserted in a canonical order so the representatives do not
    /// depend on scheduling.
    pub fn extend(&mut self, candidates: Vec<PolytopeTuple>) -> Result<()> {
        use rayon::prelude::*;
        let mut keyed: Vec<((String, bool), Vec<Vec<IntVector>>, PolytopeTuple)> = candidates
            .into_par_iter()
            .map(|t| {
                let key = tuple_key(&t)?;
                let order: Vec<Vec<IntVector>> = t.iter().map(|p| p.vertices().to_vec()).collect();
                Ok((key, order, t))
            })
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        keyed.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        for (key, _, t) in keyed {
            self.insert_keyed(t, key)?;
        }
        Ok(())
    }

    /// Records sorted by digest; keys shared by several classes get an index suffix.
    pub fn into_records(self) -> Vec<ClassRecord> {
        let mut out = Vec::new();
        for (key, mut bucket) in self.buckets {
            if bucket.len() == 1 {
                out.push(ClassRecord { members: bucket.pop().unwrap(), digest: key });
                continue;
            }
            bucket.sort_by_key(|t| t.iter().map(|p| p.vertices().to_vec()).collect::<Vec<_>>());
            for (i, t) in bucket.into_iter().enumerate() {
                out.push(ClassRecord { members: t, digest: format!("{key}#{i}") });
            }
        }
        out.sort_by(|a, b| a.digest.cmp(&b.digest));
        out
    }
}

/// Full-dimensional hulls of subsets of the lattice points of `p`, one per
/// translation class, in their position inside `p`.
pub fn lattice_subpolytopes(p: &LatticePolytope) -> Result<Vec<LatticePolytope>> {
    let pts = p.lattice_points();
    let n = p.ambient_dim();
    if pts.len() > 20 {
        return Err(Error::PreconditionViolation(format!("{} lattice points are too many to enumerate subsets", pts.len())));
    }
    let mut seen = BTreeMap::new();
    for mask in 1u32..1 << pts.len() {
        if (mask.count_ones() as usize) <= n {
            continue;
        }
        let sub: Vec<IntVector> = (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()).collect();
        let h = hull(&sub)?;
        // Subsets with redundant points give the same hull as a smaller one.
        if h.num_vertices() != sub.len() || !h.is_full_dimensional() {
            continue;
        }
        seen.entry(normalize_translation(&h).vertices().to_vec()).or_insert(h);
    }
    Ok(seen.into_values().collect())
}

fn manifest_key(pipeline_id: &str, parameters: &BTreeMap<String, String>, provenance: &str) -> String {
    let p = parameters.iter().map(|(k, v)| format!("{k}={v}")).join(";");
    format!("manifest-{pipeline_id}-{}", &sha_hex(&format!("{p}/{provenance}"))[..16])
}

/// Stores a manifest so that later runs can use it as an input.
pub fn store_manifest(cache: &Cache, m: &ClassManifest) -> Result<()> {
    cache.put(&manifest_key(&m.pipeline_id, &m.parameters, &m.provenance), m)
}

/// A manifest stored by [`store_manifest`]. `DependencyMissing` names the
/// pipeline to run first if there is none.
pub fn load_manifest(cache: &Cache, pipeline_id: &str, parameters: &BTreeMap<String, String>, provenance: &str) -> Result<ClassManifest> {
    let key = manifest_key(pipeline_id, parameters, provenance);
    let m: ClassManifest = cache.get(&key)?.ok_or_else(|| {
        Error::DependencyMissing(format!("no {pipeline_id} manifest for {provenance}; run `mdeg classify --pipeline={pipeline_id}` first"))
    })?;
    m.validate()?;
    Ok(m)
}

fn params(kv: &[(&str, String)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

#[cfg(test)]
mod tests;
