//! Lattice polytopes and their exact geometry.

mod hull;

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{div_ceil, div_floor, AffineLattice, Int, IntMatrix, IntVector};

pub use hull::Facet;
#[cfg(test)]
pub(crate) use hull::affine_basis_indices;

/// Convex hull of finitely many points of `Z^n`, stored by its vertices.
///
/// Facets are computed eagerly. For a polytope that is not full-dimensional
/// they live in the integer coordinates of its affine hull (`frame`).
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "PolytopeJson", into = "PolytopeJson")]
pub struct LatticePolytope {
    ambient_dim: usize,
    /// Sorted lexicographically.
    vertices: Vec<IntVector>,
    dim: usize,
    frame: Option<AffineLattice>,
    /// Vertices in frame coordinates (equal to `vertices` when full-dimensional).
    rel_vertices: Vec<IntVector>,
    rel_facets: Vec<Facet>,
    /// For each facet, the indices of the vertices on it.
    incidence: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<IntVector>,
}

impl TryFrom<PolytopeJson> for LatticePolytope {
    type Error = Error;
    fn try_from(j: PolytopeJson) -> Result<Self> {
        if let Some(v) = j.vertices.iter().find(|v| v.dim() != j.dim) {
            return Err(Error::DimensionMismatch { expected: j.dim, found: v.dim() });
        }
        hull(&j.vertices)
    }
}

impl From<LatticePolytope> for PolytopeJson {
    fn from(p: LatticePolytope) -> Self {
        PolytopeJson { dim: p.ambient_dim, vertices: p.vertices }
    }
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl Hash for LatticePolytope {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.vertices.hash(state);
    }
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{:?}", self.vertices)
    }
}

/// Convex hull of a nonempty list of points with a common dimension.
pub fn hull(points: &[IntVector]) -> Result<LatticePolytope> {
    let first = points.first().ok_or(Error::EmptyTuple)?;
    let n = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: p.dim() });
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();

    let lattice = AffineLattice::spanned_by(&pts);
    let d = lattice.dim();
    let (frame, rel): (Option<AffineLattice>, Vec<IntVector>) = if d == n {
        (None, pts.clone())
    } else {
        let rel = pts.iter().map(|p| lattice.to_coords(p)).collect();
        (Some(lattice), rel)
    };

    if d == 0 {
        return Ok(LatticePolytope {
            ambient_dim: n,
            vertices: vec![pts[0].clone()],
            dim: 0,
            frame,
            rel_vertices: vec![IntVector::zeros(0)],
            rel_facets: Vec::new(),
            incidence: Vec::new(),
        });
    }

    let data = hull::full_dim_hull(&rel);
    // `pts` is sorted, so the vertex indices are increasing and the vertex list stays sorted.
    let mut new_index = vec![usize::MAX; pts.len()];
    for (k, &i) in data.vertex_indices.iter().enumerate() {
        new_index[i] = k;
    }
    let incidence = data
        .facet_points
        .iter()
        .map(|on| on.iter().filter_map(|&i| (new_index[i] != usize::MAX).then_some(new_index[i])).collect())
        .collect();
    Ok(LatticePolytope {
        ambient_dim: n,
        vertices: data.vertex_indices.iter().map(|&i| pts[i].clone()).collect(),
        dim: d,
        frame,
        rel_vertices: data.vertex_indices.iter().map(|&i| rel[i].clone()).collect(),
        rel_facets: data.facets,
        incidence,
    })
}

/// Lattice points of the full-dimensional polytope `{x : facets}` inside the box spanned by `vertices`.
fn scan_box(vertices: &[IntVector], facets: &[Facet], strict: bool) -> Vec<IntVector> {
    let d = vertices[0].dim();
    if d == 0 {
        return if strict { Vec::new() } else { vec![IntVector::zeros(0)] };
    }
    let lo: Vec<Int> = (0..d).map(|i| vertices.iter().map(|v| v[i]).min().unwrap()).collect();
    let hi: Vec<Int> = (0..d).map(|i| vertices.iter().map(|v| v[i]).max().unwrap()).collect();
    let slack = if strict { 1 } else { 0 };
    let mut out = Vec::new();
    let mut x: Vec<Int> = lo.clone();
    loop {
        // Interval of the last coordinate cut out by the facets.
        let (mut a, mut b) = (lo[d - 1], hi[d - 1]);
        for f in facets {
            let rest: Int = (0..d - 1).map(|i| f.normal[i] * x[i]).sum();
            let c = f.normal[d - 1];
            let rhs = f.offset - slack - rest;
            match c.signum() {
                1 => b = b.min(div_floor(rhs, c)),
                -1 => a = a.max(div_ceil(rhs, c)),
                _ => {
                    if rhs < 0 {
                        b = a - 1;
                    }
                }
            }
            if a > b {
                break;
            }
        }
        for t in a..=b {
            x[d - 1] = t;
            out.push(IntVector::from(&x[..]));
        }
        // Advance the odometer over the first d-1 coordinates.
        let mut i = d - 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                break;
            }
            x[i] = lo[i];
        }
    }
}

impl LatticePolytope {
    /// Standard simplex `conv(0, e_1, ..., e_n)`.
    pub fn unimodular_simplex(n: usize) -> LatticePolytope {
        let mut pts = vec![IntVector::zeros(n)];
        pts.extend((0..n).map(|i| IntVector::unit(n, i)));
        hull(&pts).expect("valid simplex")
    }

    /// Unit cube `[0,1]^n`.
    pub fn unit_cube(n: usize) -> LatticePolytope {
        let pts: Vec<IntVector> = (0..1usize << n)
            .map(|m| (0..n).map(|i| ((m >> i) & 1) as Int).collect())
            .collect();
        hull(&pts).expect("valid cube")
    }

    /// Segment `conv(a, b)`.
    pub fn segment(a: IntVector, b: IntVector) -> Result<LatticePolytope> {
        hull(&[a, b])
    }

    pub fn point(p: IntVector) -> LatticePolytope {
        hull(&[p]).expect("single point")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Facet inequalities in ambient coordinates; empty unless full-dimensional.
    pub fn facets(&self) -> &[Facet] {
        if self.is_full_dimensional() {
            &self.rel_facets
        } else {
            &[]
        }
    }

    /// Facets in the coordinates of the affine hull, with vertex incidences.
    pub fn relative_facets(&self) -> (&[Facet], &[Vec<usize>]) {
        (&self.rel_facets, &self.incidence)
    }

    /// Vertex indices of each facet (relative facets when not full-dimensional).
    pub fn facet_vertices(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// The affine lattice of the affine hull, when it is a proper subspace.
    pub fn frame(&self) -> Option<&AffineLattice> {
        self.frame.as_ref()
    }

    /// Vertices in the integer coordinates of the affine hull.
    pub fn relative_vertices(&self) -> &[IntVector] {
        &self.rel_vertices
    }

    /// The same polytope as a full-dimensional polytope in the lattice of its affine hull.
    pub fn relative_polytope(&self) -> LatticePolytope {
        if self.frame.is_none() {
            return self.clone();
        }
        hull(&self.rel_vertices).expect("nonempty")
    }

    fn to_rel(&self, x: &[Int]) -> Option<IntVector> {
        match &self.frame {
            None => Some(IntVector::from(x)),
            Some(fr) => {
                let c = fr.to_coords(x);
                (fr.from_coords(&c).as_ref() == x).then_some(c)
            }
        }
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        if x.len() != self.ambient_dim {
            return false;
        }
        match self.to_rel(x) {
            Some(c) => self.rel_facets.iter().all(|f| f.slack(&c) >= 0),
            None => false,
        }
    }

    /// True iff `x` satisfies every facet inequality strictly (full-dimensional only).
    pub fn contains_in_interior(&self, x: &[Int]) -> bool {
        self.is_full_dimensional() && self.rel_facets.iter().all(|f| f.slack(x) > 0)
    }

    /// All lattice points, sorted.
    pub fn lattice_points(&self) -> Vec<IntVector> {
        let rel = scan_box(&self.rel_vertices, &self.rel_facets, false);
        let mut pts: Vec<IntVector> = match &self.frame {
            None => rel,
            Some(fr) => rel.iter().map(|c| fr.from_coords(c)).collect(),
        };
        pts.sort();
        pts
    }

    pub fn num_lattice_points(&self) -> usize {
        scan_box(&self.rel_vertices, &self.rel_facets, false).len()
    }

    /// Lattice points in the interior; empty when not full-dimensional.
    pub fn interior_lattice_points(&self) -> Vec<IntVector> {
        if !self.is_full_dimensional() {
            return Vec::new();
        }
        scan_box(&self.vertices, &self.rel_facets, true)
    }

    /// Lattice points in the relative interior.
    pub fn relative_interior_lattice_points(&self) -> Vec<IntVector> {
        let rel = scan_box(&self.rel_vertices, &self.rel_facets, true);
        match &self.frame {
            None => rel,
            Some(fr) => rel.iter().map(|c| fr.from_coords(c)).collect(),
        }
    }

    pub fn is_hollow(&self) -> bool {
        self.interior_lattice_points().is_empty()
    }

    /// `n! vol_n`; zero unless full-dimensional.
    pub fn normalized_volume(&self) -> Int {
        if self.is_full_dimensional() {
            self.relative_normalized_volume()
        } else {
            0
        }
    }

    /// Normalized volume inside the lattice of the affine hull.
    ///
    /// Cone from the first vertex over the facets missing it: each cone is a
    /// pyramid of lattice height `slack` over its facet.
    pub fn relative_normalized_volume(&self) -> Int {
        if self.dim == 0 {
            return 1;
        }
        let v0 = &self.rel_vertices[0];
        let mut total = 0;
        for (f, on) in self.rel_facets.iter().zip(&self.incidence) {
            let h = f.slack(v0);
            if h == 0 {
                continue;
            }
            let pts: Vec<IntVector> = on.iter().map(|&i| self.rel_vertices[i].clone()).collect();
            total += h * hull(&pts).expect("nonempty facet").relative_normalized_volume();
        }
        total
    }

    /// A polytope with the same vertices moved by `t`.
    pub fn translate(&self, t: &[Int]) -> LatticePolytope {
        let mut q = self.clone();
        for v in &mut q.vertices {
            *v = v.add(t);
        }
        match &mut q.frame {
            Some(fr) => fr.origin = fr.origin.add(t),
            None => {
                for v in &mut q.rel_vertices {
                    *v = v.add(t);
                }
                for f in &mut q.rel_facets {
                    f.offset += f.normal.dot(t);
                }
            }
        }
        q
    }

    /// Image under `x -> m x + t` for an integer matrix `m` (not necessarily square).
    pub fn map_affine(&self, m: &IntMatrix, t: &[Int]) -> LatticePolytope {
        let pts: Vec<IntVector> = self.vertices.iter().map(|v| m.mul_vec(v).add(t)).collect();
        hull(&pts).expect("nonempty")
    }

    /// Image under the linear map `m`.
    pub fn map_linear(&self, m: &IntMatrix) -> LatticePolytope {
        self.map_affine(m, &IntVector::zeros(m.rows()))
    }

    /// `k P`; `k = 0` gives the origin.
    pub fn dilate(&self, k: Int) -> LatticePolytope {
        let pts: Vec<IntVector> = self.vertices.iter().map(|v| v.scale(k)).collect();
        hull(&pts).expect("nonempty")
    }

    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.add(b));
            }
        }
        hull(&pts)
    }

    /// `max f - min f` over the polytope.
    pub fn width_along(&self, f: &[Int]) -> Int {
        let vals = self.vertices.iter().map(|v| v.dot(f));
        let (lo, hi) = vals.fold((Int::MAX, Int::MIN), |(l, h), x| (l.min(x), h.max(x)));
        hi - lo
    }

    /// Primitive functionals (up to sign) of width at most `w`, sign-normalized and sorted.
    ///
    /// If `d_i = v_i - v_0` for an affine basis of vertices, any functional of
    /// width at most `w` satisfies `|f · d_i| <= w`, so it is `D^{-1} c` for
    /// some `c` in the box `[-w, w]^n`.
    pub fn functionals_with_width_at_most(&self, w: Int) -> Result<Vec<IntVector>> {
        if !self.is_full_dimensional() {
            return Err(Error::LowerDimensional { dim: self.dim, ambient: self.ambient_dim });
        }
        let n = self.ambient_dim;
        let basis = hull::affine_basis_indices(&self.vertices);
        let v0 = &self.vertices[basis[0]];
        let rows: Vec<IntVector> = basis[1..].iter().map(|&i| self.vertices[i].sub(v0)).collect();
        let dmat = IntMatrix::from_rows(&rows, n);
        let det = dmat.det();
        let adj = dmat.adjugate();
        let mut out = Vec::new();
        let mut c = vec![-w; n];
        loop {
            // Keep one representative of each pair +-c: first nonzero entry positive.
            if c.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
                let num = adj.mul_vec(&c);
                if num.iter().all(|x| x % det == 0) {
                    let f: IntVector = num.iter().map(|x| x / det).collect();
                    if f.content() == 1 && self.width_along(&f) <= w {
                        out.push(f.sign_normalized());
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort();
                    out.dedup();
                    return Ok(out);
                }
                if c[i] < w {
                    c[i] += 1;
                    break;
                }
                c[i] = -w;
                i += 1;
            }
        }
    }

    /// Exact lattice width with a witnessing primitive functional.
    pub fn lattice_width(&self) -> Result<(Int, IntVector)> {
        let mut w = 1;
        loop {
            let fs = self.functionals_with_width_at_most(w)?;
            if let Some(best) = fs.into_iter().min_by_key(|f| (self.width_along(f), f.clone())) {
                return Ok((self.width_along(&best), best));
            }
            w += 1;
        }
    }

    /// `conv(P x {0} ∪ {e_{n+1}})`.
    pub fn lattice_pyramid(&self) -> LatticePolytope {
        let n = self.ambient_dim;
        let mut pts: Vec<IntVector> = self.vertices.iter().map(|v| v.extended(&[0])).collect();
        pts.push(IntVector::unit(n + 1, n));
        hull(&pts).expect("nonempty")
    }

    /// Iterated lattice pyramid.
    pub fn lattice_pyramid_iter(&self, times: usize) -> LatticePolytope {
        (0..times).fold(self.clone(), |p, _| p.lattice_pyramid())
    }

    /// Smallest `d` with `(n - d) P` hollow, or `n` if `P` has an interior point.
    pub fn degree(&self) -> Result<usize> {
        if !self.is_full_dimensional() {
            return Err(Error::LowerDimensional { dim: self.dim, ambient: self.ambient_dim });
        }
        let n = self.ambient_dim;
        if !self.is_hollow() {
            return Ok(n);
        }
        Ok((0..n).find(|&d| self.dilate((n - d) as Int).is_hollow()).unwrap_or(n - 1))
    }

    /// Whether `P` is equivalent to `𝒫^{n-2}(2Δ_2)`.
    pub fn is_exceptional_simplex(&self) -> bool {
        let n = self.ambient_dim;
        if n < 2 || !self.is_full_dimensional() || self.vertices.len() != n + 1 {
            return false;
        }
        let model = LatticePolytope::unimodular_simplex(2).dilate(2).lattice_pyramid_iter(n - 2);
        crate::equiv::are_equivalent(self, &model).ok().flatten().is_some()
    }

    /// Heights of a Lawrence prism structure, if `P` has one.
    pub fn is_lawrence_prism(&self) -> Option<LawrencePrism> {
        crate::proj::lawrence_structure(self)
    }
}

/// Witness that a polytope is a Cayley sum of segments over `Δ_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawrencePrism {
    pub projection: crate::proj::Projection,
    /// Lattice lengths of the fibres over the vertices of the image, in decreasing order.
    pub heights: Vec<Int>,
}

/// Ordered tuple of polytopes in a common ambient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatticePolytope>", into = "Vec<LatticePolytope>")]
pub struct PolytopeTuple(Vec<LatticePolytope>);

impl PolytopeTuple {
    pub fn new(polytopes: Vec<LatticePolytope>) -> Result<PolytopeTuple> {
        let first = polytopes.first().ok_or(Error::EmptyTuple)?;
        let n = first.ambient_dim();
        if let Some(p) = polytopes.iter().find(|p| p.ambient_dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.ambient_dim() });
        }
        Ok(PolytopeTuple(polytopes))
    }

    pub fn ambient_dim(&self) -> usize {
        self.0[0].ambient_dim()
    }

    pub fn members(&self) -> &[LatticePolytope] {
        &self.0
    }

    pub fn into_members(self) -> Vec<LatticePolytope> {
        self.0
    }

    /// Minkowski sum of the members selected by `idx`.
    pub fn partial_sum(&self, idx: &[usize]) -> LatticePolytope {
        let mut it = idx.iter();
        let first = self.0[*it.next().expect("nonempty index set")].clone();
        it.fold(first, |acc, &i| acc.minkowski_sum(&self.0[i]).expect("common dimension"))
    }

    pub fn total_sum(&self) -> LatticePolytope {
        self.partial_sum(&(0..self.0.len()).collect::<Vec<_>>())
    }

    /// Member `i` placed over the vertex `e_{i-1}` (or `0` for `i = 0`) of `Δ_{k-1}`.
    pub fn cayley_sum(&self) -> LatticePolytope {
        cayley_sum(&self.0).expect("nonempty tuple")
    }
}

impl std::ops::Deref for PolytopeTuple {
    type Target = [LatticePolytope];
    fn deref(&self) -> &[LatticePolytope] {
        &self.0
    }
}

impl TryFrom<Vec<LatticePolytope>> for PolytopeTuple {
    type Error = Error;
    fn try_from(v: Vec<LatticePolytope>) -> Result<Self> {
        PolytopeTuple::new(v)
    }
}

impl From<PolytopeTuple> for Vec<LatticePolytope> {
    fn from(t: PolytopeTuple) -> Self {
        t.0
    }
}

/// `conv(P_1 x {0} ∪ P_2 x {e_1} ∪ ... ∪ P_k x {e_{k-1}})` in `R^{n+k-1}`.
pub fn cayley_sum(polytopes: &[LatticePolytope]) -> Result<LatticePolytope> {
    let k = polytopes.len();
    if k == 0 {
        return Err(Error::EmptyTuple);
    }
    let n = polytopes[0].ambient_dim();
    let mut pts = Vec::new();
    for (i, p) in polytopes.iter().enumerate() {
        if p.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.ambient_dim() });
        }
        let mut tail = vec![0; k - 1];
        if i > 0 {
            tail[i - 1] = 1;
        }
        pts.extend(p.vertices().iter().map(|v| v.extended(&tail)));
    }
    hull(&pts)
}
