//! Exceptional pairs and the triples containing at least one of them.

use rayon::prelude::*;

use super::cache::Cache;
use super::hollow::{enumerate_subpolytopes_where, hollow_projection, is_exceptional_pair};
use super::seeds::{bundled_seeds, bundled_version, HollowSeed};
use super::{lattice_subpolytopes, params, pipeline_id, ClassManifest, ClassSet};
use crate::decomp::full_dim_summand_pairs;
use crate::equiv::{affine_automorphisms, are_equivalent, normal_form};
use crate::error::{Error, Result};
use crate::intlin::IntVector;
use crate::mixed::mixed_degree;
use crate::polytope::{LatticePolytope, PolytopeTuple};
use crate::proj::{common_projection, full_dim_intersection_translate, projections_onto_unimodular_simplex, InfinitePrism};

/// Seed data and cache shared by the pipelines.
#[derive(Clone, Debug)]
pub struct Context {
    pub seeds: Vec<HollowSeed>,
    pub seed_version: String,
    pub cache: Cache,
}

impl Context {
    pub fn new(seeds: Vec<HollowSeed>, seed_version: String, cache: Cache) -> Self {
        Context { seeds, seed_version, cache }
    }

    /// The bundled seeds with the given cache.
    pub fn bundled(cache: Cache) -> Result<Self> {
        Ok(Context { seeds: bundled_seeds()?, seed_version: bundled_version(), cache })
    }

    pub fn from_seed_file(file: super::seeds::SeedFile, cache: Cache) -> Self {
        Context { seeds: file.seeds, seed_version: file.version, cache }
    }

    pub fn provenance(&self) -> String {
        format!("seeds v{} ({} polytopes)", self.seed_version, self.seeds.len())
    }
}

fn pair(a: &LatticePolytope, b: &LatticePolytope) -> PolytopeTuple {
    PolytopeTuple::new(vec![a.clone(), b.clone()]).expect("same dimension")
}

/// Hollow subpolytopes of width at least two without a hollow projection.
///
/// Both conditions pass to superpolytopes, so the deletion search may prune.
fn nonprojecting_subpolytopes(seed: &LatticePolytope, cache: &Cache) -> Result<Vec<LatticePolytope>> {
    let key = format!("nonprojecting-{}", normal_form(seed)?.hash);
    cache.get_or(&key, || {
        enumerate_subpolytopes_where(seed, |q| Ok(q.lattice_width()?.0 >= 2 && hollow_projection(q)?.is_none()))
    })
}

/// Pairs of 3-polytopes with hollow sum and no common projection onto
/// translates of `Δ_2`, up to equivalence.
pub fn exceptional_pairs(ctx: &Context) -> Result<ClassManifest> {
    let mut sums = Vec::new();
    for s in &ctx.seeds {
        sums.extend(nonprojecting_subpolytopes(&s.polytope, &ctx.cache)?);
    }
    let found: Vec<Vec<PolytopeTuple>> = sums
        .par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for sp in full_dim_summand_pairs(s)? {
                if is_exceptional_pair(&sp.a, &sp.b)? {
                    out.push(pair(&sp.a, &sp.b));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut set = ClassSet::new();
    set.extend(found.into_iter().flatten().collect())?;
    Ok(ClassManifest::new(pipeline_id::EXCEPTIONAL_PAIRS, Default::default(), ctx.provenance(), set))
}

/// Whether the two members have hollow sum and no common projection onto translates of `Δ_2`.
fn pair_is_exceptional(a: &LatticePolytope, b: &LatticePolytope) -> Result<bool> {
    Ok(a.minkowski_sum(b)?.is_hollow() && common_projection(&pair(a, b), true)?.is_none())
}

/// Number of subpairs of a triple that are exceptional.
pub fn exceptional_subpair_count(t: &PolytopeTuple) -> Result<usize> {
    let mut count = 0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if pair_is_exceptional(&t[i], &t[j])? {
            count += 1;
        }
    }
    Ok(count)
}

fn require_pairs(pairs: &ClassManifest) -> Result<()> {
    if pairs.pipeline_id != pipeline_id::EXCEPTIONAL_PAIRS {
        return Err(Error::DependencyMissing(format!(
            "expected the {} manifest, got {}",
            pipeline_id::EXCEPTIONAL_PAIRS,
            pairs.pipeline_id
        )));
    }
    pairs.validate()
}

/// Triples of mixed degree one with two resp. three exceptional subpairs.
///
/// If `(P_1, P_2)` and `(P_1, P_3)` are exceptional they are equivalent to
/// listed pairs `(A, B)` and `(C, D)`, and the triple is equivalent to
/// `(A, B, φ(ψ(D)))` for a map `φ` sending `C` onto `A` and an automorphism
/// `ψ` of `C`.
pub fn triples_multi_exceptional(pairs: &ClassManifest) -> Result<(ClassManifest, ClassManifest)> {
    require_pairs(pairs)?;
    let mut ordered = Vec::new();
    for t in pairs.tuples() {
        ordered.push((t[0].clone(), t[1].clone()));
        ordered.push((t[1].clone(), t[0].clone()));
    }
    let forms: Vec<String> = ordered.iter().map(|(a, _)| normal_form(a).map(|f| f.hash)).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..ordered.len())
        .flat_map(|i| (0..ordered.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| forms[i] == forms[j])
        .collect();
    let found: Vec<Vec<PolytopeTuple>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = &ordered[i];
            let (c, d) = &ordered[j];
            let phi = are_equivalent(c, a)?.ok_or_else(|| {
                Error::InternalInvariantViolation("equal normal forms without an equivalence".into())
            })?;
            let mut out = Vec::new();
            for psi in affine_automorphisms(c)? {
                let d2 = phi.compose(&psi).apply_polytope(d);
                let t = PolytopeTuple::new(vec![a.clone(), b.clone(), d2])?;
                if mixed_degree(&t)?.value == 1 {
                    out.push(t);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut two = Vec::new();
    let mut three = Vec::new();
    for t in found.into_iter().flatten() {
        match exceptional_subpair_count(&t)? {
            2 => two.push(t),
            3 => three.push(t),
            c => {
                return Err(Error::InternalInvariantViolation(format!("triple with {c} exceptional subpairs: {t:?}")));
            }
        }
    }
    let (mut s2, mut s3) = (ClassSet::new(), ClassSet::new());
    s2.extend(two)?;
    s3.extend(three)?;
    Ok((
        ClassManifest::new(pipeline_id::TWO_EXCEPTIONAL, Default::default(), pairs.provenance.clone(), s2),
        ClassManifest::new(pipeline_id::THREE_EXCEPTIONAL, Default::default(), pairs.provenance.clone(), s3),
    ))
}

/// The inclusion-maximal first members for an exceptional pair `(p2, p3)`,
/// one per pair of projections `φ_3` of `p2` and `φ_2` of `p3` onto
/// unimodular triangles whose prisms meet full-dimensionally.
pub fn maximal_first_members(p2: &LatticePolytope, p3: &LatticePolytope) -> Result<Vec<LatticePolytope>> {
    let mut out = Vec::new();
    let anchors: Vec<IntVector> = p2.vertices().iter().flat_map(|v2| p3.vertices().iter().map(move |v3| v2.sub(v3))).collect();
    for phi3 in projections_onto_unimodular_simplex(p2)? {
        for phi2 in projections_onto_unimodular_simplex(p3)? {
            if phi3.kernel_direction == phi2.kernel_direction {
                continue;
            }
            let c3 = InfinitePrism::new(p2.clone(), &phi3.kernel_direction)?;
            let c2 = InfinitePrism::new(p3.clone(), &phi2.kernel_direction)?;
            if let Some((_, p1)) = full_dim_intersection_translate(&c3, &c2, &anchors)? {
                out.push(p1);
            }
        }
    }
    Ok(out)
}

/// Triples of mixed degree one with exactly one exceptional subpair.
pub fn triples_one_exceptional(pairs: &ClassManifest) -> Result<ClassManifest> {
    require_pairs(pairs)?;
    let found: Vec<Vec<PolytopeTuple>> = pairs
        .classes
        .par_iter()
        .map(|c| {
            let (p2, p3) = (&c.members[0], &c.members[1]);
            let mut out = Vec::new();
            for p1max in maximal_first_members(p2, p3)? {
                for p1 in lattice_subpolytopes(&p1max)? {
                    let t = PolytopeTuple::new(vec![p1, p2.clone(), p3.clone()])?;
                    if mixed_degree(&t)?.value == 1 && exceptional_subpair_count(&t)? == 1 {
                        out.push(t);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut set = ClassSet::new();
    set.extend(found.into_iter().flatten().collect())?;
    Ok(ClassManifest::new(
        pipeline_id::ONE_EXCEPTIONAL,
        params(&[("pairs", pairs.count.to_string())]),
        pairs.provenance.clone(),
        set,
    ))
}
