//! Affine unimodular equivalence: normal forms, witnesses and automorphisms.
//!
//! The normal form of a full-dimensional polytope is the lexicographically
//! smallest Hermite normal form of a matrix `[v_1 - v_0 | ... | v_{m-1} - v_0]`
//! over all choices of base vertex and vertex orderings. Row-style Hermite
//! forms are invariant under left multiplication by unimodular matrices, so
//! this is a complete invariant. The Hermite form of a column prefix is the
//! prefix of the Hermite form, which turns the search over orderings into an
//! exact beam search that keeps every tie. Vertices are coloured by the
//! multiset of their facet distances and the colour sequence is compared
//! first, which prunes the beam without affecting canonicity.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::intlin::{div_floor, ext_gcd, Int, IntMatrix, IntVector};
use crate::polytope::{LatticePolytope, PolytopeTuple};
use crate::proj;

/// `x -> linear * x + translation` with `linear` unimodular.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineUnimodularMap {
    pub linear: IntMatrix,
    pub translation: IntVector,
}

impl fmt::Debug for AffineUnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {:?} x + {}", self.linear, self.translation)
    }
}

impl AffineUnimodularMap {
    pub fn new(linear: IntMatrix, translation: IntVector) -> Result<Self> {
        if !linear.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        if translation.dim() != linear.rows() {
            return Err(Error::DimensionMismatch { expected: linear.rows(), found: translation.dim() });
        }
        Ok(AffineUnimodularMap { linear, translation })
    }

    pub fn identity(n: usize) -> Self {
        AffineUnimodularMap { linear: IntMatrix::identity(n), translation: IntVector::zeros(n) }
    }

    pub fn translation_by(t: IntVector) -> Self {
        AffineUnimodularMap { linear: IntMatrix::identity(t.dim()), translation: t }
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, x: &[Int]) -> IntVector {
        self.linear.mul_vec(x).add(&self.translation)
    }

    pub fn apply_polytope(&self, p: &LatticePolytope) -> LatticePolytope {
        p.map_affine(&self.linear, &self.translation)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineUnimodularMap) -> AffineUnimodularMap {
        AffineUnimodularMap {
            linear: self.linear.mul(&other.linear),
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> AffineUnimodularMap {
        let inv = self.linear.inverse_unimodular().expect("linear part is unimodular");
        let t = inv.mul_vec(&self.translation).neg();
        AffineUnimodularMap { linear: inv, translation: t }
    }
}

/// Canonical representative of an equivalence class of full-dimensional polytopes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalForm {
    pub canonical_vertex_matrix: IntMatrix,
    /// Lowercase hex SHA-256 of [`NormalForm::serialized`].
    pub hash: String,
}

impl fmt::Debug for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalForm({})", &self.hash[..12])
    }
}

impl NormalForm {
    fn from_matrix(m: IntMatrix) -> Self {
        let hash = hex::encode(Sha256::digest(Self::serialize_matrix(&m).as_bytes()));
        NormalForm { canonical_vertex_matrix: m, hash }
    }

    /// `"{rows}x{cols}:"` followed by the entries in row-major order, comma separated.
    pub fn serialized(&self) -> String {
        Self::serialize_matrix(&self.canonical_vertex_matrix)
    }

    fn serialize_matrix(m: &IntMatrix) -> String {
        format!("{}x{}:{}", m.rows(), m.cols(), m.entries().iter().join(","))
    }

    /// Vertices of the canonical representative (the origin plus one vertex per column).
    pub fn canonical_polytope(&self) -> LatticePolytope {
        let m = &self.canonical_vertex_matrix;
        let mut pts = vec![IntVector::zeros(m.rows())];
        pts.extend((0..m.cols()).map(|c| m.col(c)));
        crate::polytope::hull(&pts).expect("nonempty")
    }
}

/// Base vertex and transform of one ordering that realises the canonical form.
#[derive(Clone)]
struct Labeling {
    base: usize,
    /// `u * [v_order - v_base] = H`.
    u: Vec<Int>,
}

struct Search {
    form: NormalForm,
    labelings: Vec<Labeling>,
}

#[derive(Clone)]
struct State {
    base: usize,
    used: u64,
    u: Vec<Int>,
    rank: usize,
}

/// Colour classes: vertices ranked by the sorted multiset of their facet slacks.
fn vertex_colors(p: &LatticePolytope) -> Vec<usize> {
    let sigs: Vec<Vec<Int>> = p
        .vertices()
        .iter()
        .map(|v| p.facets().iter().map(|f| f.slack(v)).sorted().collect())
        .collect();
    let distinct: Vec<&Vec<Int>> = sigs.iter().sorted().dedup().collect();
    sigs.iter().map(|s| distinct.binary_search(&s).unwrap()).collect()
}

/// Appends column `c` to a state's Hermite form; returns the new Hermite column.
fn extend(n: usize, u: &mut [Int], rank: &mut usize, c: &[Int]) -> IntVector {
    let mut y: Vec<Int> = (0..n).map(|i| (0..n).map(|j| u[i * n + j] * c[j]).sum()).collect();
    let r = *rank;
    if y[r..].iter().all(|&x| x == 0) {
        return IntVector::from(y);
    }
    let first = (r..n).find(|&i| y[i] != 0).unwrap();
    if first != r {
        y.swap(r, first);
        for j in 0..n {
            u.swap(r * n + j, first * n + j);
        }
    }
    for i in r + 1..n {
        if y[i] == 0 {
            continue;
        }
        let (a, b) = (y[r], y[i]);
        let (g, x, z) = ext_gcd(a, b);
        let (a1, b1) = (a / g, b / g);
        for j in 0..n {
            let (ra, rb) = (u[r * n + j], u[i * n + j]);
            u[r * n + j] = x * ra + z * rb;
            u[i * n + j] = -b1 * ra + a1 * rb;
        }
        y[r] = g;
        y[i] = 0;
    }
    if y[r] < 0 {
        y[r] = -y[r];
        for j in 0..n {
            u[r * n + j] = -u[r * n + j];
        }
    }
    let pivot = y[r];
    for i in 0..r {
        let q = div_floor(y[i], pivot);
        if q != 0 {
            y[i] -= q * pivot;
            for j in 0..n {
                u[i * n + j] -= q * u[r * n + j];
            }
        }
    }
    *rank += 1;
    IntVector::from(y)
}

fn search(p: &LatticePolytope) -> Result<Search> {
    if !p.is_full_dimensional() {
        return Err(Error::LowerDimensional { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let n = p.ambient_dim();
    let verts = p.vertices();
    let m = verts.len();
    assert!(m <= 64, "normal form supports at most 64 vertices");
    let colors = vertex_colors(p);
    let min_color = *colors.iter().min().unwrap();
    let mut identity = vec![0; n * n];
    for i in 0..n {
        identity[i * n + i] = 1;
    }
    let mut beam: Vec<State> = (0..m)
        .filter(|&b| colors[b] == min_color)
        .map(|b| State { base: b, used: 1 << b, u: identity.clone(), rank: 0 })
        .collect();
    let mut columns: Vec<IntVector> = Vec::with_capacity(m - 1);
    for _ in 1..m {
        let mut best: Option<(usize, IntVector)> = None;
        let mut next: Vec<State> = Vec::new();
        for st in &beam {
            for v in 0..m {
                if st.used & (1 << v) != 0 {
                    continue;
                }
                if let Some((bc, _)) = &best {
                    if colors[v] > *bc {
                        continue;
                    }
                }
                let mut u = st.u.clone();
                let mut rank = st.rank;
                let col = extend(n, &mut u, &mut rank, &verts[v].sub(&verts[st.base]));
                let key = (colors[v], col);
                let ord = match &best {
                    None => std::cmp::Ordering::Less,
                    Some(b) => key.cmp(b),
                };
                if ord == std::cmp::Ordering::Greater {
                    continue;
                }
                if ord == std::cmp::Ordering::Less {
                    next.clear();
                    best = Some(key);
                }
                next.push(State { base: st.base, used: st.used | (1 << v), u, rank });
            }
        }
        columns.push(best.expect("unused vertex exists").1);
        beam = next;
    }
    let matrix = IntMatrix::from_cols(&columns, n);
    let labelings = beam.into_iter().map(|s| Labeling { base: s.base, u: s.u }).collect();
    Ok(Search { form: NormalForm::from_matrix(matrix), labelings })
}

/// Canonical form of a full-dimensional polytope.
pub fn normal_form(p: &LatticePolytope) -> Result<NormalForm> {
    Ok(search(p)?.form)
}

/// The map sending labeling `from` of `p` onto labeling `to` of `q` (same canonical form).
fn map_between(p: &LatticePolytope, from: &Labeling, q: &LatticePolytope, to: &Labeling) -> AffineUnimodularMap {
    let n = p.ambient_dim();
    let uf = IntMatrix::from_row_major(n, n, from.u.clone());
    let ut = IntMatrix::from_row_major(n, n, to.u.clone());
    let a = ut.inverse_unimodular().expect("unimodular").mul(&uf);
    let t = q.vertices()[to.base].sub(&a.mul_vec(&p.vertices()[from.base]));
    AffineUnimodularMap { linear: a, translation: t }
}

/// A map `U` with `U(p) = q`, if one exists.
pub fn are_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> Result<Option<AffineUnimodularMap>> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), found: q.ambient_dim() });
    }
    if p.num_vertices() != q.num_vertices() || p.normalized_volume() != q.normalized_volume() {
        return Ok(None);
    }
    let sp = search(p)?;
    let sq = search(q)?;
    if sp.form != sq.form {
        return Ok(None);
    }
    let map = map_between(p, &sp.labelings[0], q, &sq.labelings[0]);
    debug_assert_eq!(map.apply_polytope(p), *q);
    Ok(Some(map))
}

/// The group of affine unimodular maps preserving `p`.
pub fn affine_automorphisms(p: &LatticePolytope) -> Result<Vec<AffineUnimodularMap>> {
    let s = search(p)?;
    let reference = &s.labelings[0];
    let mut maps: Vec<AffineUnimodularMap> =
        s.labelings.iter().map(|l| map_between(p, l, p, reference)).collect();
    maps.sort_by(|a, b| (&a.linear, &a.translation).cmp(&(&b.linear, &b.translation)));
    maps.dedup();
    Ok(maps)
}

/// Thread-safe memo of normal forms keyed by vertex lists.
#[derive(Default)]
pub struct NormalFormCache {
    map: DashMap<Vec<IntVector>, Arc<NormalForm>>,
}

impl NormalFormCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, p: &LatticePolytope) -> Result<Arc<NormalForm>> {
        let v0 = p.vertices()[0].clone();
        let key: Vec<IntVector> = p.vertices().iter().map(|v| v.sub(&v0)).collect();
        if let Some(nf) = self.map.get(&key) {
            return Ok(nf.clone());
        }
        let nf = Arc::new(normal_form(p)?);
        self.map.insert(key, nf.clone());
        Ok(nf)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Vertex list moved so that the smallest vertex is the origin.
fn translation_key(p: &LatticePolytope) -> Vec<IntVector> {
    let v0 = p.vertices()[0].clone();
    p.vertices().iter().map(|v| v.sub(&v0)).collect()
}

/// Tuple equivalence up to a common affine unimodular map, member-wise translations and reordering.
pub fn tuple_equivalent(a: &PolytopeTuple, b: &PolytopeTuple) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: a.ambient_dim(), found: b.ambient_dim() });
    }
    let sig = |t: &PolytopeTuple| -> Vec<(usize, Int)> {
        t.iter().map(|p| (p.num_vertices(), p.normalized_volume())).sorted().collect()
    };
    if sig(a) != sig(b) {
        return Ok(false);
    }
    let a_proj = proj::projects_onto_simplex_translates(a)?;
    let b_proj = proj::projects_onto_simplex_translates(b)?;
    if a_proj != b_proj {
        return Ok(false);
    }
    if !a_proj {
        let ca = a.cayley_sum();
        let cb = b.cayley_sum();
        return Ok(normal_form(&ca)? == normal_form(&cb)?);
    }
    Ok(direct_tuple_witness(a, b)?.is_some())
}

/// Searches a common map `U` and a permutation with `U(a_i) = b_{σ(i)} + t_i`.
pub fn direct_tuple_witness(a: &PolytopeTuple, b: &PolytopeTuple) -> Result<Option<(AffineUnimodularMap, Vec<usize>)>> {
    let k = a.len();
    if k != b.len() {
        return Err(Error::LengthMismatch { expected: k, found: b.len() });
    }
    let autos = affine_automorphisms(&a[0])?;
    let b_keys: Vec<Vec<IntVector>> = b.iter().map(translation_key).collect();
    for j in 0..k {
        let Some(w) = are_equivalent(&a[0], &b[j])? else { continue };
        for g in &autos {
            let map = w.compose(g);
            let images: Vec<Vec<IntVector>> = a[1..].iter().map(|p| translation_key(&map.apply_polytope(p))).collect();
            // Match the remaining members to the remaining slots of b.
            let rest: Vec<usize> = (0..k).filter(|&i| i != j).collect();
            for perm in rest.iter().copied().permutations(rest.len()) {
                if perm.iter().zip(&images).all(|(&bi, img)| b_keys[bi] == *img) {
                    let mut sigma = vec![j];
                    sigma.extend(perm);
                    return Ok(Some((map, sigma)));
                }
            }
        }
    }
    Ok(None)
}
