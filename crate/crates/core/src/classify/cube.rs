//! Triples without exceptional subpairs: subtriples of the unit cube and of
//! the parallelepiped family.

use rayon::prelude::*;

use super::{lattice_subpolytopes, params, pipeline_id, ClassManifest, ClassSet};
use crate::catalog::parallelepiped_triple;
use crate::error::{Error, Result};
use crate::intlin::{Int, IntVector};
use crate::polytope::{LatticePolytope, PolytopeTuple};
use crate::proj::{common_projection, Projection};

fn tuple(ps: &[&LatticePolytope]) -> PolytopeTuple {
    PolytopeTuple::new(ps.iter().map(|&p| p.clone()).collect()).expect("same dimension")
}

/// Triples `(P_1, P_2, P_3)` of mixed degree one with `P_i` a lattice
/// subpolytope of `containers[i]` (up to translation) satisfying the filters.
///
/// `pair_ok(i, j, P_i, P_j)` is only asked about pairs with hollow sum, and
/// `triple_ok` only about triples of mixed degree one.
pub fn md_one_subtriples<F, G>(containers: &PolytopeTuple, pair_ok: F, triple_ok: G) -> Result<Vec<PolytopeTuple>>
where
    F: Fn(usize, usize, &LatticePolytope, &LatticePolytope) -> Result<bool> + Sync,
    G: Fn(&PolytopeTuple) -> Result<bool> + Sync,
{
    let subs: Vec<Vec<LatticePolytope>> = containers
        .iter()
        .map(|c| Ok(lattice_subpolytopes(c)?.into_iter().filter(|p| p.is_hollow()).collect()))
        .collect::<Result<_>>()?;
    let compatible = |i: usize, j: usize| -> Result<Vec<Vec<bool>>> {
        subs[i]
            .par_iter()
            .map(|a| {
                subs[j]
                    .iter()
                    .map(|b| Ok(a.minkowski_sum(b)?.is_hollow() && pair_ok(i, j, a, b)?))
                    .collect::<Result<Vec<bool>>>()
            })
            .collect()
    };
    let c01 = compatible(0, 1)?;
    let c02 = compatible(0, 2)?;
    let c12 = compatible(1, 2)?;
    let found: Vec<Vec<PolytopeTuple>> = (0..subs[0].len())
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in (0..subs[1].len()).filter(|&b| c01[a][b]) {
                for c in (0..subs[2].len()).filter(|&c| c02[a][c] && c12[b][c]) {
                    let t = tuple(&[&subs[0][a], &subs[1][b], &subs[2][c]]);
                    if !t.total_sum().is_hollow() && triple_ok(&t)? {
                        out.push(t);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

fn projects_along(p: &LatticePolytope, q: &LatticePolytope, d: &IntVector) -> Result<bool> {
    let phi = Projection::along(d)?;
    let (a, b) = (phi.image(p), phi.image(q));
    if !a.is_full_dimensional() || a.normalized_volume() != 1 {
        return Ok(false);
    }
    let t = a.vertices()[0].sub(&b.vertices()[0]);
    Ok(b.translate(&t) == a)
}

/// Triples whose pairs `{P_j, P_k}` project along `e_i` onto translates of
/// one unimodular triangle, with no projection common to all three.
///
/// Up to equivalence the three directions are the coordinate axes and every
/// member is a subpolytope of the unit cube.
pub fn triples_spanning_directions() -> Result<ClassManifest> {
    let cube = LatticePolytope::unit_cube(3);
    let containers = tuple(&[&cube, &cube, &cube]);
    let found = md_one_subtriples(
        &containers,
        |i, j, a, b| projects_along(a, b, &IntVector::unit(3, 3 - i - j)),
        |t| Ok(common_projection(t, true)?.is_none()),
    )?;
    let mut set = ClassSet::new();
    set.extend(found)?;
    Ok(ClassManifest::new(pipeline_id::SPANNING, Default::default(), "unit cube".into(), set))
}

fn family_candidates(k: Int) -> Result<ClassSet> {
    let dirs = [IntVector::unit(3, 0), IntVector::unit(3, 1), IntVector::from(&[1, -1, 0][..])];
    let found = md_one_subtriples(
        &parallelepiped_triple(k),
        |i, j, a, b| projects_along(a, b, &dirs[3 - i - j]),
        |t| Ok(common_projection(t, true)?.is_none()),
    )?;
    let mut set = ClassSet::new();
    set.extend(found)?;
    Ok(set)
}

/// Manifests for `k = 0, ..., k_max`: subtriples of `(Q_k, R_k, □_3)` of
/// mixed degree one whose pairs project onto translates of a unimodular
/// triangle along `e_1`, `e_2` and `e_1 - e_2` (the pair without `P_1`,
/// without `P_2`, without `P_3`) while the triple has no such projection,
/// minus the classes already found for smaller `k`.
pub fn family_subtriples_upto(k_max: Int) -> Result<Vec<ClassManifest>> {
    if k_max < 0 {
        return Err(Error::PreconditionViolation(format!("family parameter {k_max} is negative")));
    }
    let mut earlier: Vec<ClassSet> = Vec::new();
    let mut out = Vec::new();
    for k in 0..=k_max {
        let all = family_candidates(k)?;
        let mut fresh = ClassSet::new();
        for t in all.tuples() {
            let mut seen = false;
            for e in &earlier {
                if e.contains(t)? {
                    seen = true;
                    break;
                }
            }
            if !seen {
                fresh.insert(t.clone())?;
            }
        }
        out.push(ClassManifest::new(pipeline_id::FAMILY, params(&[("k", k.to_string())]), "parallelepipeds".into(), fresh));
        earlier.push(all);
    }
    Ok(out)
}

/// The manifest of [`family_subtriples_upto`] for `k` alone.
pub fn family_subtriples(k: Int) -> Result<ClassManifest> {
    Ok(family_subtriples_upto(k)?.pop().expect("k >= 0"))
}
