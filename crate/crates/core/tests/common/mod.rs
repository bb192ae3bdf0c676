//! Shared helpers and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use mdeg_core::classify::{self, Cache, ClassManifest, Context};
use mdeg_core::decomp::normalize_translation;
use mdeg_core::{hull, AffineUnimodularMap, Int, IntMatrix, IntVector, LatticePolytope};
use rand::Rng;

pub fn random_point<R: Rng>(rng: &mut R, n: usize, lo: Int, hi: Int) -> IntVector {
    (0..n).map(|_| rng.gen_range(lo..=hi)).collect()
}

/// Hull of random points in `[lo, hi]^n`, retried until full-dimensional.
pub fn random_polytope<R: Rng>(rng: &mut R, n: usize, count: usize, lo: Int, hi: Int) -> LatticePolytope {
    loop {
        let pts: Vec<IntVector> = (0..count).map(|_| random_point(rng, n, lo, hi)).collect();
        let p = hull(&pts).unwrap();
        if p.is_full_dimensional() {
            return p;
        }
    }
}

pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..2 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = rng.gen_range(-2..=2);
        m = e.mul(&m);
    }
    m
}

pub fn random_map<R: Rng>(rng: &mut R, n: usize) -> AffineUnimodularMap {
    AffineUnimodularMap::new(random_unimodular(rng, n), random_point(rng, n, -5, 5)).unwrap()
}

/// Lattice points of `p` by testing every point of its bounding box against the vertices' hull.
pub fn box_lattice_points(p: &LatticePolytope) -> usize {
    let n = p.ambient_dim();
    let lo: Vec<Int> = (0..n).map(|i| p.vertices().iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<Int> = (0..n).map(|i| p.vertices().iter().map(|v| v[i]).max().unwrap()).collect();
    let mut count = 0;
    let mut x = lo.clone();
    loop {
        // x is in p iff adding it does not change the vertex set.
        let mut pts = p.vertices().to_vec();
        pts.push(IntVector::from(x.clone()));
        if hull(&pts).unwrap().vertices() == p.vertices() {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            x[i] += 1;
            if x[i] <= hi[i] {
                break;
            }
            x[i] = lo[i];
            i += 1;
        }
    }
}

/// Whether an affine unimodular map sends `p` onto `q`, by trying every
/// image of an affine basis of `p` among the vertices of `q`.
pub fn brute_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> bool {
    let n = p.ambient_dim();
    if p.num_vertices() != q.num_vertices() || p.normalized_volume() != q.normalized_volume() {
        return false;
    }
    let pv = p.vertices();
    let basis = affine_basis(pv);
    let dp = IntMatrix::from_cols(&basis[1..].iter().map(|&i| pv[i].sub(&pv[basis[0]])).collect::<Vec<_>>(), n);
    let det = dp.det();
    let adj = dp.adjugate();
    let qv = q.vertices();
    for images in itertools::Itertools::permutations(0..qv.len(), n + 1) {
        let dq = IntMatrix::from_cols(&images[1..].iter().map(|&i| qv[i].sub(&qv[images[0]])).collect::<Vec<_>>(), n);
        let num = dq.mul(&adj);
        if num.entries().iter().any(|x| x % det != 0) {
            continue;
        }
        let a = IntMatrix::from_row_major(n, n, num.entries().iter().map(|x| x / det).collect());
        if a.det().abs() != 1 {
            continue;
        }
        let t = qv[images[0]].sub(&a.mul_vec(&pv[basis[0]]));
        if AffineUnimodularMap::new(a, t).unwrap().apply_polytope(p) == *q {
            return true;
        }
    }
    false
}

fn affine_basis(pts: &[IntVector]) -> Vec<usize> {
    let n = pts[0].dim();
    let mut chosen = vec![0];
    let mut rows: Vec<IntVector> = Vec::new();
    for (i, v) in pts.iter().enumerate().skip(1) {
        let mut cand = rows.clone();
        cand.push(v.sub(&pts[0]));
        if IntMatrix::from_rows(&cand, n).rank() == cand.len() {
            rows = cand;
            chosen.push(i);
            if chosen.len() == n + 1 {
                break;
            }
        }
    }
    chosen
}

pub fn translation_key(p: &LatticePolytope) -> Vec<IntVector> {
    normalize_translation(p).vertices().to_vec()
}

/// Unordered pairs of full-dimensional hulls of lattice-point subsets of
/// `s` whose sum is a translate of `s`.
pub fn subset_pair_oracle(s: &LatticePolytope) -> BTreeSet<(Vec<IntVector>, Vec<IntVector>)> {
    let pts = s.lattice_points();
    let mut shapes = BTreeSet::new();
    for mask in 1usize..1 << pts.len() {
        if mask.count_ones() < 4 {
            continue;
        }
        let sub: Vec<IntVector> = (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()).collect();
        let h = hull(&sub).unwrap();
        if h.is_full_dimensional() {
            shapes.insert(translation_key(&h));
        }
    }
    let shapes: Vec<LatticePolytope> = shapes.into_iter().map(|v| hull(&v).unwrap()).collect();
    let target = translation_key(s);
    let mut out = BTreeSet::new();
    for (i, a) in shapes.iter().enumerate() {
        for b in shapes.iter().skip(i) {
            if a.normalized_volume() + b.normalized_volume() > s.normalized_volume() {
                continue;
            }
            if translation_key(&a.minkowski_sum(b).unwrap()) == target {
                out.insert(pair_key(a, b));
            }
        }
    }
    out
}

pub fn pair_key(a: &LatticePolytope, b: &LatticePolytope) -> (Vec<IntVector>, Vec<IntVector>) {
    let (ka, kb) = (translation_key(a), translation_key(b));
    if ka <= kb {
        (ka, kb)
    } else {
        (kb, ka)
    }
}

pub struct Manifests {
    pub pairs: ClassManifest,
    pub two: ClassManifest,
    pub three: ClassManifest,
    pub one: ClassManifest,
}

/// The pair-based manifests, computed once per test binary with the bundled seeds.
pub fn manifests() -> &'static Manifests {
    static CELL: OnceLock<Manifests> = OnceLock::new();
    CELL.get_or_init(|| {
        let ctx = Context::bundled(Cache::disabled()).unwrap();
        let pairs = classify::exceptional_pairs(&ctx).unwrap();
        let (two, three) = classify::triples_multi_exceptional(&pairs).unwrap();
        let one = classify::triples_one_exceptional(&pairs).unwrap();
        Manifests { pairs, two, three, one }
    })
}
