//! Exact facet enumeration by the double-description method.
//!
//! Facets of `conv(X)` for a full-dimensional `X ⊂ Z^d` are the extreme rays
//! of the cone `{(a, b) : b - a·x >= 0 for all x in X}`. Constraints are added
//! one point at a time; adjacency of rays is decided combinatorially from
//! their sets of tight constraints.

use crate::bits::Bits;
use crate::intlin::{Int, IntMatrix, IntVector};

/// Inequality `normal · x <= offset` with a primitive normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: Int,
}

impl Facet {
    /// `offset - normal·x`: zero on the facet, positive inside.
    pub fn slack(&self, x: &[Int]) -> Int {
        self.offset - self.normal.dot(x)
    }
}

pub(crate) struct HullData {
    pub facets: Vec<Facet>,
    /// Indices (into the input) of the points that are vertices.
    pub vertex_indices: Vec<usize>,
    /// For each facet, the indices of the input points lying on it.
    pub facet_points: Vec<Vec<usize>>,
}

struct Ray {
    v: IntVector,
    tight: Bits,
}

fn slack_of(ray: &[Int], x: &[Int]) -> Int {
    let d = x.len();
    ray[d] - x.iter().zip(&ray[..d]).map(|(a, b)| a * b).sum::<Int>()
}

/// Indices of an affinely independent subset of maximal size, chosen greedily.
pub(crate) fn affine_basis_indices(points: &[IntVector]) -> Vec<usize> {
    let n = points[0].dim();
    let mut chosen = vec![0];
    let mut rows: Vec<IntVector> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if rows.len() == n {
            break;
        }
        let diff = p.sub(&points[0]);
        if diff.is_zero() {
            continue;
        }
        rows.push(diff);
        if IntMatrix::from_rows(&rows, n).rank() == rows.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    chosen
}

/// Facets and vertices of a full-dimensional set of distinct points in `Z^d`, `d >= 1`.
pub(crate) fn full_dim_hull(points: &[IntVector]) -> HullData {
    let d = points[0].dim();
    let m = points.len();
    let basis = affine_basis_indices(points);
    assert_eq!(basis.len(), d + 1, "point set is not full-dimensional");

    let mut a = IntMatrix::zeros(d + 1, d + 1);
    for (r, &i) in basis.iter().enumerate() {
        for c in 0..d {
            a[(r, c)] = -points[i][c];
        }
        a[(r, d)] = 1;
    }
    let det = a.det();
    let adj = a.adjugate();
    let mut rays: Vec<Ray> = (0..=d)
        .map(|j| {
            let mut col = adj.col(j);
            if det < 0 {
                col = col.neg();
            }
            let mut tight = Bits::with_capacity(m);
            for (r, &i) in basis.iter().enumerate() {
                if r != j {
                    tight.insert(i);
                }
            }
            Ray { v: col.primitive_part(), tight }
        })
        .collect();

    let mut in_basis = vec![false; m];
    for &i in &basis {
        in_basis[i] = true;
    }

    for k in 0..m {
        if in_basis[k] {
            continue;
        }
        let x = &points[k];
        let s: Vec<Int> = rays.iter().map(|r| slack_of(&r.v, x)).collect();
        if s.iter().all(|&v| v >= 0) {
            for (r, &sv) in rays.iter_mut().zip(&s) {
                if sv == 0 {
                    r.tight.insert(k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| s[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| s[i] < 0).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.intersection(&rays[q].tight);
                if common.count() + 1 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, ray)| r == p || r == q || !common.is_subset(&ray.tight));
                if !adjacent {
                    continue;
                }
                let v: IntVector = rays[q]
                    .v
                    .iter()
                    .zip(rays[p].v.iter())
                    .map(|(qv, pv)| s[p] * qv - s[q] * pv)
                    .collect();
                let mut tight = common;
                tight.insert(k);
                fresh.push(Ray { v: v.primitive_part(), tight });
            }
        }
        let mut next = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if s[i] == 0 {
                r.tight.insert(k);
                next.push(r);
            } else if s[i] > 0 {
                next.push(r);
            }
        }
        next.extend(fresh);
        rays = next;
    }

    let mut facets: Vec<(Facet, Vec<usize>)> = rays
        .into_iter()
        .map(|r| {
            let f = Facet { normal: IntVector::from(&r.v[..d]), offset: r.v[d] };
            (f, r.tight.iter().collect())
        })
        .collect();
    facets.sort();

    // A point is a vertex iff no other point lies on every facet through it.
    let mut on: Vec<Bits> = vec![Bits::with_capacity(facets.len()); m];
    for (fi, (_, pts)) in facets.iter().enumerate() {
        for &p in pts {
            on[p].insert(fi);
        }
    }
    let vertex_indices = (0..m)
        .filter(|&i| (0..m).all(|j| j == i || !on[i].is_subset(&on[j])))
        .collect();

    let (facets, facet_points) = facets.into_iter().unzip();
    HullData { facets, vertex_indices, facet_points }
}
