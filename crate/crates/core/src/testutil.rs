//! Random fixtures for unit tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::intlin::{Int, IntMatrix, IntVector};
use crate::polytope::{hull, LatticePolytope};

pub fn random_point<R: Rng>(rng: &mut R, n: usize, lo: Int, hi: Int) -> IntVector {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Hull of `count` random points in `[lo, hi]^n`, retried until full-dimensional.
pub fn random_polytope<R: Rng>(rng: &mut R, n: usize, count: usize, lo: Int, hi: Int) -> LatticePolytope {
    loop {
        let pts: Vec<IntVector> = (0..count).map(|_| random_point(rng, n, lo, hi)).collect();
        let p = hull(&pts).unwrap();
        if p.is_full_dimensional() {
            return p;
        }
    }
}

/// Random full-dimensional subpolytope of `k [0,1]^n`.
pub fn random_cube_subpolytope<R: Rng>(rng: &mut R, n: usize, k: Int) -> LatticePolytope {
    let count = rng.gen_range(n + 1..=n + 4);
    random_polytope(rng, n, count, 0, k)
}

/// Product of random elementary matrices, a permutation and sign flips.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = rng.gen_range(-2..=2);
        m = e.mul(&m);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = IntMatrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    p.mul(&m)
}
