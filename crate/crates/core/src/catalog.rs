//! Named polytopes and tuples that show up throughout the classification.

use crate::intlin::{Int, IntMatrix, IntVector};
use crate::ivec;
use crate::polytope::{hull, LatticePolytope, PolytopeTuple};

fn conv(points: &[IntVector]) -> LatticePolytope {
    hull(points).expect("catalog points are well formed")
}

fn tuple(members: Vec<LatticePolytope>) -> PolytopeTuple {
    PolytopeTuple::new(members).expect("catalog members share a dimension")
}

/// Planar polygons `a` and `b` placed at heights 0 and 1 in `R^3`.
fn join(a: &[[Int; 2]], b: &[[Int; 2]]) -> LatticePolytope {
    let mut pts: Vec<IntVector> = a.iter().map(|p| ivec![p[0], p[1], 0]).collect();
    pts.extend(b.iter().map(|p| ivec![p[0], p[1], 1]));
    conv(&pts)
}

/// Pyramid of height one over the unit square.
pub fn square_pyramid() -> LatticePolytope {
    LatticePolytope::unit_cube(2).lattice_pyramid()
}

/// `P^{n-2}(2 Delta_2)`, the exceptional simplex of dimension `n >= 2`.
pub fn exceptional_simplex(n: usize) -> LatticePolytope {
    assert!(n >= 2);
    LatticePolytope::unimodular_simplex(2).dilate(2).lattice_pyramid_iter(n - 2)
}

/// Shear `(x, y, z) -> (x, y + k z, z)`.
pub fn shear_second(k: Int) -> IntMatrix {
    IntMatrix::from_row_major(3, 3, vec![1, 0, 0, 0, 1, k, 0, 0, 1])
}

/// Shear `(x, y, z) -> (x + k z, y, z)`.
pub fn shear_first(k: Int) -> IntMatrix {
    IntMatrix::from_row_major(3, 3, vec![1, 0, k, 0, 1, 0, 0, 0, 1])
}

/// The one-parameter family of triples with md = 1 whose pairs all project but the triple does not.
pub fn sheared_family(k: Int) -> PolytopeTuple {
    let p1 = conv(&[ivec![1, 0, 0], ivec![0, 1, 0], ivec![1, 1, 0], ivec![0, 2, 0], ivec![0, k, 1]]);
    let p2 = conv(&[ivec![1, 0, 0], ivec![0, 1, 0], ivec![1, 1, 0], ivec![2, 0, 0], ivec![k, 0, 1]]);
    tuple(vec![p1, p2, square_pyramid()])
}

/// A triple with a common projection onto `Delta_2` along `e_3`.
pub fn prism_triple() -> PolytopeTuple {
    let p1 = conv(&[ivec![0, 0, 0], ivec![0, 0, 3], ivec![1, 0, 0], ivec![1, 0, 3], ivec![0, 1, 0], ivec![0, 1, 3]]);
    let p2 = conv(&[ivec![0, 0, 0], ivec![0, 0, 2], ivec![0, 1, 0], ivec![1, 0, 0], ivec![1, 0, 1]]);
    let p3 = conv(&[ivec![0, 0, 0], ivec![0, 0, 3], ivec![0, 1, 0], ivec![1, 0, 1]]);
    tuple(vec![p1, p2, p3])
}

/// The parallelepipeds `Q_k`, `R_k` and the unit cube.
pub fn parallelepiped_triple(k: Int) -> PolytopeTuple {
    let seg = |v: IntVector| LatticePolytope::segment(IntVector::zeros(3), v).unwrap();
    let sum3 = |a: IntVector, b: IntVector, c: IntVector| {
        seg(a).minkowski_sum(&seg(b)).unwrap().minkowski_sum(&seg(c)).unwrap()
    };
    let q = sum3(ivec![1, -1, 0], ivec![0, 1, 0], ivec![0, k, 1]);
    let r = sum3(ivec![-1, 1, 0], ivec![1, 0, 0], ivec![k, 0, 1]);
    tuple(vec![q, r, LatticePolytope::unit_cube(3)])
}

/// The three inclusion-maximal triples whose pairwise projection directions span `R^3`.
pub fn spanning_maximal_triples() -> Vec<PolytopeTuple> {
    let sqp = square_pyramid();
    vec![
        tuple(vec![
            conv(&[ivec![0, 0, 0], ivec![0, 1, 0], ivec![0, 0, 1], ivec![0, 1, 1], ivec![1, 0, 0]]),
            conv(&[ivec![0, 0, 0], ivec![1, 0, 0], ivec![0, 0, 1], ivec![1, 0, 1], ivec![0, 1, 0]]),
            sqp.clone(),
        ]),
        tuple(vec![
            conv(&[ivec![0, 0, 0], ivec![1, 0, 0], ivec![0, 0, 1], ivec![1, 1, 0]]),
            conv(&[ivec![0, 0, 0], ivec![1, 0, 0], ivec![0, 0, 1], ivec![1, 1, 0], ivec![1, 0, 1]]),
            sqp.clone(),
        ]),
        tuple(vec![
            conv(&[ivec![1, 0, 0], ivec![0, 1, 0], ivec![1, 1, 0], ivec![0, 1, 1]]),
            conv(&[ivec![1, 0, 0], ivec![0, 1, 0], ivec![1, 1, 0], ivec![1, 0, 1]]),
            sqp,
        ]),
    ]
}

/// The six inclusion-maximal triples containing every md-1 triple with an exceptional subpair
/// or with a non-trivial spanning configuration.
pub fn maximal_triples() -> Vec<PolytopeTuple> {
    let ex = exceptional_simplex(3);
    let d3 = LatticePolytope::unimodular_simplex(3);
    let tilted = |i: usize| {
        let mut pts = vec![IntVector::zeros(3)];
        for j in 0..3 {
            pts.push(IntVector::unit(3, j).scale(if i == j { 2 } else { 1 }));
        }
        conv(&pts)
    };
    let head = join(&[[0, 0], [0, 2]], &[[0, 0], [1, 0]]);
    let second = join(&[[0, 0], [-1, 0], [-1, -1]], &[[-1, -2]]);
    vec![
        tuple(vec![ex.clone(), ex.clone(), ex]),
        tuple(vec![d3.dilate(2), d3.clone(), d3]),
        tuple((0..3).map(tilted).collect()),
        tuple(vec![
            join(&[[1, 0], [0, 1], [0, -1]], &[[0, 0], [1, 0]]),
            join(&[[0, 0], [1, 0], [0, -1]], &[[0, -1]]),
            join(&[[0, 0], [1, 0], [0, 1]], &[[0, 1]]),
        ]),
        tuple(vec![head.clone(), second.clone(), join(&[[0, 0], [0, 1], [-1, 0]], &[[1, 0]])]),
        tuple(vec![head, second, join(&[[0, 0], [0, -1], [-1, 0]], &[[1, -2]])]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed::mixed_degree;

    #[test]
    fn catalog_members_are_full_dimensional() {
        let mut all = vec![sheared_family(3), prism_triple(), parallelepiped_triple(2)];
        all.extend(spanning_maximal_triples());
        all.extend(maximal_triples());
        for t in &all {
            assert_eq!(t.len(), 3);
            assert!(t.iter().all(|p| p.is_full_dimensional()), "{t:?}");
        }
    }

    #[test]
    fn maximal_triples_have_mixed_degree_one() {
        for t in maximal_triples().iter().chain(spanning_maximal_triples().iter()) {
            assert_eq!(mixed_degree(t).unwrap().value, 1, "{t:?}");
        }
    }

    #[test]
    fn parallelepipeds_match_shears() {
        let base = parallelepiped_triple(0);
        for k in 0..4 {
            let t = parallelepiped_triple(k);
            assert_eq!(t[0], base[0].map_linear(&shear_second(k)));
            assert_eq!(t[1], base[1].map_linear(&shear_first(k)));
        }
    }
}
