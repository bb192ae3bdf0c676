//! Decompositions of 3-polytopes into Minkowski sums of two 3-polytopes.
//!
//! A summand `A` of `S` has an edge parallel to each edge `e` of `S`, of
//! lattice length `k_e` between `0` and the length `L_e` of `e`, and the
//! edges around each 2-face of `S` close up. Conversely every such integer
//! assignment defines a lattice summand with complement `L - k`. Summands
//! are enumerated by backtracking over these assignments.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{Int, IntVector};
use crate::polytope::{hull, LatticePolytope};

/// `a + b = sum` with both summands 3-dimensional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandPair {
    pub a: LatticePolytope,
    pub b: LatticePolytope,
    pub sum: LatticePolytope,
}

/// `conv{x in Z^n : x + a ⊆ s}`, or `None` if no lattice point qualifies.
pub fn minkowski_difference(s: &LatticePolytope, a: &LatticePolytope) -> Result<Option<LatticePolytope>> {
    if s.ambient_dim() != a.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: s.ambient_dim(), found: a.ambient_dim() });
    }
    if !s.is_full_dimensional() {
        return Err(Error::LowerDimensional { dim: s.dim(), ambient: s.ambient_dim() });
    }
    let tightened: Vec<(IntVector, Int)> = s
        .facets()
        .iter()
        .map(|f| {
            let support = a.vertices().iter().map(|v| f.normal.dot(v)).max().unwrap();
            (f.normal.clone(), f.offset - support)
        })
        .collect();
    // Every solution lies in s - a_0.
    let a0 = &a.vertices()[0];
    let pts: Vec<IntVector> = s
        .lattice_points()
        .into_iter()
        .map(|p| p.sub(a0))
        .filter(|x| tightened.iter().all(|(nrm, b)| nrm.dot(x) <= *b))
        .collect();
    if pts.is_empty() {
        return Ok(None);
    }
    Ok(Some(hull(&pts)?))
}

struct Skeleton {
    /// `(i, j, primitive direction from i to j, lattice length)` with `i < j`.
    edges: Vec<(usize, usize, IntVector, Int)>,
    /// Per 2-face, its boundary as `(edge index, sign)` in cyclic order.
    faces: Vec<Vec<(usize, Int)>>,
}

fn skeleton(s: &LatticePolytope) -> Skeleton {
    let verts = s.vertices();
    let inc = s.facet_vertices();
    let mut edges = Vec::new();
    for (i, j) in (0..verts.len()).tuple_combinations() {
        let shared = inc.iter().filter(|f| f.contains(&i) && f.contains(&j)).count();
        if shared >= 2 {
            let d = verts[j].sub(&verts[i]);
            let len = d.content();
            edges.push((i, j, d.primitive_part(), len));
        }
    }
    let edge_of = |a: usize, b: usize| -> (usize, Int) {
        let (lo, hi, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
        let k = edges.iter().position(|e| e.0 == lo && e.1 == hi).expect("facet edge");
        (k, sign)
    };
    let mut faces = Vec::new();
    for f in inc {
        // Walk the facet polygon.
        let mut cycle = vec![f[0]];
        let mut prev = usize::MAX;
        loop {
            let cur = *cycle.last().unwrap();
            let next = f
                .iter()
                .copied()
                .find(|&w| w != cur && w != prev && edges.iter().any(|e| (e.0, e.1) == (cur.min(w), cur.max(w))))
                .expect("facet is a polygon");
            if next == cycle[0] {
                break;
            }
            prev = cur;
            cycle.push(next);
        }
        let mut bnd = Vec::new();
        for t in 0..cycle.len() {
            bnd.push(edge_of(cycle[t], cycle[(t + 1) % cycle.len()]));
        }
        faces.push(bnd);
    }
    Skeleton { edges, faces }
}

/// Propagates forced edge lengths; returns false on a contradiction.
fn propagate(sk: &Skeleton, k: &mut [Option<Int>]) -> bool {
    loop {
        let mut changed = false;
        for face in &sk.faces {
            let open: Vec<&(usize, Int)> = face.iter().filter(|(e, _)| k[*e].is_none()).collect();
            if open.len() > 1 {
                continue;
            }
            let n = sk.edges[0].2.dim();
            let mut acc = vec![0; n];
            for &(e, sg) in face {
                if let Some(len) = k[e] {
                    for (t, x) in acc.iter_mut().enumerate() {
                        *x += sg * len * sk.edges[e].2[t];
                    }
                }
            }
            if open.is_empty() {
                if acc.iter().any(|&x| x != 0) {
                    return false;
                }
                continue;
            }
            // acc + sg * len * u = 0
            let (e, sg) = *open[0];
            let u = &sk.edges[e].2;
            let t = u.iter().position(|&x| x != 0).unwrap();
            if acc[t] % u[t] != 0 {
                return false;
            }
            let len = -sg * acc[t] / u[t];
            if len < 0 || len > sk.edges[e].3 || (0..n).any(|i| acc[i] + sg * len * u[i] != 0) {
                return false;
            }
            k[e] = Some(len);
            changed = true;
        }
        if !changed {
            return true;
        }
    }
}

fn assignments(sk: &Skeleton, k: &mut Vec<Option<Int>>, out: &mut Vec<Vec<Int>>) {
    let mut snapshot = k.clone();
    if !propagate(sk, &mut snapshot) {
        return;
    }
    match snapshot.iter().position(|x| x.is_none()) {
        None => out.push(snapshot.into_iter().map(|x| x.unwrap()).collect()),
        Some(e) => {
            for len in 0..=sk.edges[e].3 {
                let mut next = snapshot.clone();
                next[e] = Some(len);
                assignments(sk, &mut next, out);
            }
        }
    }
}

/// Realises an edge-length assignment, with vertex `0` at the origin.
fn realise(s: &LatticePolytope, sk: &Skeleton, k: &[Int]) -> LatticePolytope {
    let m = s.num_vertices();
    let mut pos: Vec<Option<IntVector>> = vec![None; m];
    pos[0] = Some(IntVector::zeros(s.ambient_dim()));
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for (e, (i, j, u, _)) in sk.edges.iter().enumerate() {
            let (w, sign) = if *i == v {
                (*j, 1)
            } else if *j == v {
                (*i, -1)
            } else {
                continue;
            };
            if pos[w].is_none() {
                let p = pos[v].as_ref().unwrap().add(&u.scale(sign * k[e]));
                pos[w] = Some(p);
                stack.push(w);
            }
        }
    }
    let pts: Vec<IntVector> = pos.into_iter().map(|p| p.expect("edge graph is connected")).collect();
    hull(&pts).expect("nonempty")
}

fn translation_key(p: &LatticePolytope) -> Vec<IntVector> {
    let v0 = p.vertices()[0].clone();
    p.vertices().iter().map(|v| v.sub(&v0)).collect()
}

/// Moves `p` so that its smallest vertex is the origin.
pub fn normalize_translation(p: &LatticePolytope) -> LatticePolytope {
    p.translate(&p.vertices()[0].neg())
}

/// All unordered decompositions `s = a + b` into 3-dimensional lattice polytopes,
/// each summand up to translation.
///
/// Summands are returned in their position inside `s`: `a` and `b` are
/// translated so that `a + b = s` holds exactly.
pub fn full_dim_summand_pairs(s: &LatticePolytope) -> Result<Vec<SummandPair>> {
    if !s.is_full_dimensional() || s.ambient_dim() != 3 {
        return Err(Error::LowerDimensional { dim: s.dim(), ambient: s.ambient_dim() });
    }
    let sk = skeleton(s);
    let mut all = Vec::new();
    assignments(&sk, &mut vec![None; sk.edges.len()], &mut all);
    let full: Vec<Int> = sk.edges.iter().map(|e| e.3).collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for k in all {
        let comp: Vec<Int> = full.iter().zip(&k).map(|(l, x)| l - x).collect();
        if k > comp {
            continue;
        }
        let a = realise(s, &sk, &k);
        let b = realise(s, &sk, &comp);
        if !a.is_full_dimensional() || !b.is_full_dimensional() {
            continue;
        }
        // With vertex 0 of s sent to the origin in both, a + b = s - v_0.
        let b = b.translate(&s.vertices()[0]);
        let sum = a.minkowski_sum(&b)?;
        if sum != *s {
            return Err(Error::InternalInvariantViolation(format!("summand realisation failed for {s:?}")));
        }
        let key = {
            let (ka, kb) = (translation_key(&a), translation_key(&b));
            if ka <= kb {
                (ka, kb)
            } else {
                (kb, ka)
            }
        };
        if seen.insert(key) {
            out.push(SummandPair { a, b, sum: s.clone() });
        }
    }
    Ok(out)
}
