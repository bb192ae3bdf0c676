//! Containment of the finite classes in the six maximal triples, and the
//! four-dimensional check with no exceptional subtriples.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::cube::md_one_subtriples;
use super::{lattice_subpolytopes, ClassManifest, ClassSet};
use crate::catalog::maximal_triples;
use crate::error::{Error, Result};
use crate::decomp::normalize_translation;
use crate::intlin::IntVector;
use crate::mixed::mixed_degree;
use crate::polytope::{LatticePolytope, PolytopeTuple};
use crate::proj::common_projection;

pub const MAXIMAL_LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Mixed-degree-one subtriples of each maximal triple, one per class.
pub fn maximal_subtriples() -> Result<Vec<(&'static str, ClassSet)>> {
    maximal_triples()
        .iter()
        .zip(MAXIMAL_LABELS)
        .map(|(m, label)| {
            let found = md_one_subtriples(m, |_, _, _, _| Ok(true), |_| Ok(true))?;
            let mut set = ClassSet::new();
            set.extend(found)?;
            Ok((label, set))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    /// Digest of each class and the label of a maximal triple containing it.
    pub assignments: Vec<(String, String)>,
    /// Mixed degree of each maximal triple.
    pub maximal_degrees: Vec<(String, usize)>,
}

/// Assigns every class of the given manifests to a maximal triple containing it.
pub fn maximal_cover_check(manifests: &[&ClassManifest]) -> Result<CoverReport> {
    let subs = maximal_subtriples()?;
    let maximal_degrees = maximal_triples()
        .iter()
        .zip(MAXIMAL_LABELS)
        .map(|(m, l)| Ok((l.to_string(), mixed_degree(m)?.value)))
        .collect::<Result<Vec<_>>>()?;
    let classes: Vec<_> = manifests.iter().flat_map(|m| m.classes.iter()).collect();
    let found: Vec<(String, Option<&str>)> = classes
        .par_iter()
        .map(|c| {
            for (label, set) in &subs {
                if set.contains(&c.members)? {
                    return Ok((c.digest.clone(), Some(*label)));
                }
            }
            Ok((c.digest.clone(), None))
        })
        .collect::<Result<_>>()?;
    let gaps: Vec<String> = found.iter().filter(|(_, l)| l.is_none()).map(|(d, _)| d.clone()).collect();
    if !gaps.is_empty() {
        return Err(Error::CoverageGap { count: gaps.len(), classes: gaps });
    }
    let assignments = found.into_iter().map(|(d, l)| (d, l.unwrap().to_string())).collect();
    Ok(CoverReport { assignments, maximal_degrees })
}

#[derive(Clone, Debug, Serialize)]
pub struct Dim4Report {
    /// Distinct candidate members up to translation.
    pub members: usize,
    /// Tuples of mixed degree one with no exceptional subtriple.
    pub surviving: usize,
    pub counterexamples: Vec<PolytopeTuple>,
}

/// Full-dimensional subpolytopes of the twofold pyramid over the unit
/// square under all coordinate permutations, one per translation class.
fn dim4_members() -> Result<Vec<LatticePolytope>> {
    let square = LatticePolytope::unit_cube(2);
    let base = square.lattice_pyramid_iter(2);
    let mut out = std::collections::BTreeMap::new();
    for p in lattice_subpolytopes(&base)? {
        for perm in (0..4).permutations(4) {
            let pts: Vec<IntVector> = p.vertices().iter().map(|v| perm.iter().map(|&i| v[i]).collect()).collect();
            let q = normalize_translation(&crate::polytope::hull(&pts)?);
            out.entry(q.vertices().to_vec()).or_insert(q);
        }
    }
    Ok(out.into_values().collect())
}

/// Four-tuples `(Δ_4, P_2, P_3, P_4)` with `P_i` from the candidate members,
/// mixed degree one and a common projection onto translates of `Δ_3` for
/// every subtriple. Each must have such a projection for all four members.
///
/// Fails with `CounterexampleFound` if one does not.
pub fn dim4_case0_check() -> Result<Dim4Report> {
    let simplex = LatticePolytope::unimodular_simplex(4);
    let members: Vec<LatticePolytope> = dim4_members()?.into_iter().filter(|p| p.is_hollow()).collect();
    let m = members.len();
    let hollow_with_simplex: Vec<bool> = members.iter().map(|p| Ok(p.minkowski_sum(&simplex)?.is_hollow())).collect::<Result<_>>()?;
    let pair_hollow: Vec<Vec<bool>> = members
        .par_iter()
        .map(|p| members.iter().map(|q| Ok(p.minkowski_sum(q)?.is_hollow())).collect::<Result<Vec<bool>>>())
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize, usize)> = (0..m)
        .flat_map(|a| (a..m).flat_map(move |b| (b..m).map(move |c| (a, b, c))))
        .filter(|&(a, b, c)| {
            hollow_with_simplex[a] && hollow_with_simplex[b] && hollow_with_simplex[c] && pair_hollow[a][b] && pair_hollow[a][c] && pair_hollow[b][c]
        })
        .collect();
    let results: Vec<Option<(PolytopeTuple, bool)>> = jobs
        .par_iter()
        .map(|&(a, b, c)| {
            let t = PolytopeTuple::new(vec![simplex.clone(), members[a].clone(), members[b].clone(), members[c].clone()])?;
            if mixed_degree(&t)?.value != 1 {
                return Ok(None);
            }
            for skip in 0..4 {
                let sub: Vec<LatticePolytope> = (0..4).filter(|&i| i != skip).map(|i| t[i].clone()).collect();
                if common_projection(&PolytopeTuple::new(sub)?, true)?.is_none() {
                    return Ok(None);
                }
            }
            let ok = common_projection(&t, true)?.is_some();
            Ok(Some((t, ok)))
        })
        .collect::<Result<_>>()?;
    let surviving: Vec<(PolytopeTuple, bool)> = results.into_iter().flatten().collect();
    let counterexamples: Vec<PolytopeTuple> = surviving.iter().filter(|(_, ok)| !ok).map(|(t, _)| t.clone()).collect();
    if !counterexamples.is_empty() {
        return Err(Error::CounterexampleFound { count: counterexamples.len() });
    }
    Ok(Dim4Report { members: m, surviving: surviving.len(), counterexamples })
}
