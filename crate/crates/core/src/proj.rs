//! Lattice projections `R^n -> R^{n-1}` and infinite prisms.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{complete_to_basis, div_ceil, div_floor, is_primitive, Int, IntMatrix, IntVector};
use crate::polytope::{hull, LatticePolytope, LawrencePrism, PolytopeTuple};

/// Lattice projection with kernel `R d`.
///
/// The kernel direction is primitive with its first nonzero coordinate
/// positive, so two projections are equal iff their kernels are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Projection {
    pub kernel_direction: IntVector,
    /// `(n-1) x n`, the last `n-1` rows of the inverse of `complete_to_basis(d)`.
    pub coordinate_map: IntMatrix,
    /// First row of that inverse: the coordinate along `d`.
    fibre_coordinate: IntVector,
}

impl Projection {
    pub fn along(d: &[Int]) -> Result<Projection> {
        if !is_primitive(d)? {
            return Err(Error::NonPrimitiveVector(IntVector::from(d)));
        }
        let d = IntVector::from(d).sign_normalized();
        let b = complete_to_basis(&d)?;
        let inv = b.inverse_unimodular()?;
        let n = d.dim();
        Ok(Projection {
            coordinate_map: inv.row_block(1, n),
            fibre_coordinate: inv.row_vector(0),
            kernel_direction: d,
        })
    }

    pub fn apply(&self, x: &[Int]) -> IntVector {
        self.coordinate_map.mul_vec(x)
    }

    pub fn image(&self, p: &LatticePolytope) -> LatticePolytope {
        p.map_linear(&self.coordinate_map)
    }

    /// Coordinate of `x` along the kernel direction.
    pub fn fibre_coordinate(&self, x: &[Int]) -> Int {
        self.fibre_coordinate.dot(x)
    }

    /// The point with image `y` and fibre coordinate `s`.
    pub fn lift(&self, s: Int, y: &[Int]) -> IntVector {
        let b = complete_to_basis(&self.kernel_direction).expect("primitive");
        let mut c = vec![s];
        c.extend_from_slice(y);
        b.mul_vec(&c)
    }
}

/// Image of `p` along the primitive direction `d`.
pub fn project_along(p: &LatticePolytope, d: &[Int]) -> Result<LatticePolytope> {
    Ok(Projection::along(d)?.image(p))
}

fn is_unimodular_simplex(q: &LatticePolytope) -> bool {
    q.is_full_dimensional() && q.normalized_volume() == 1
}

/// Candidate kernels: primitive directions of vertex differences.
fn difference_directions(p: &LatticePolytope) -> Vec<IntVector> {
    let v = p.vertices();
    let mut dirs: Vec<IntVector> = v
        .iter()
        .tuple_combinations()
        .map(|(a, b)| b.sub(a).primitive_part().sign_normalized())
        .collect();
    dirs.sort();
    dirs.dedup();
    dirs
}

/// All projections mapping `p` onto a unimodular simplex.
///
/// The fibre over each vertex of the image is a face of `p`, and some fibre
/// has two vertices, so the kernel is spanned by a difference of vertices.
pub fn projections_onto_unimodular_simplex(p: &LatticePolytope) -> Result<Vec<Projection>> {
    if !p.is_full_dimensional() {
        return Err(Error::LowerDimensional { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let mut out = Vec::new();
    for d in difference_directions(p) {
        let phi = Projection::along(&d)?;
        if is_unimodular_simplex(&phi.image(p)) {
            out.push(phi);
        }
    }
    Ok(out)
}

/// A projection mapping every member onto the same unimodular simplex,
/// or with `up_to_translates` onto translates of one unimodular simplex.
pub fn common_projection(tuple: &PolytopeTuple, up_to_translates: bool) -> Result<Option<Projection>> {
    Ok(common_projections(tuple, up_to_translates)?.into_iter().next())
}

/// Every projection with the property of [`common_projection`], sorted.
pub fn common_projections(tuple: &PolytopeTuple, up_to_translates: bool) -> Result<Vec<Projection>> {
    let n = tuple.ambient_dim();
    for p in tuple.iter() {
        if !p.is_full_dimensional() {
            return Err(Error::LowerDimensional { dim: p.dim(), ambient: n });
        }
    }
    let mut candidates = difference_directions(&tuple[0]);
    for p in &tuple[1..] {
        let other = difference_directions(p);
        candidates.retain(|d| other.binary_search(d).is_ok());
    }
    let mut out = Vec::new();
    for d in candidates {
        let phi = Projection::along(&d)?;
        let images: Vec<LatticePolytope> = tuple.iter().map(|p| phi.image(p)).collect();
        if !is_unimodular_simplex(&images[0]) {
            continue;
        }
        let ok = images[1..].iter().all(|q| {
            if up_to_translates {
                let t = images[0].vertices()[0].sub(&q.vertices()[0]);
                q.translate(&t) == images[0]
            } else {
                *q == images[0]
            }
        });
        if ok {
            out.push(phi);
        }
    }
    Ok(out)
}

/// Whether some lattice projection `R^n -> R^{k-1}` maps the `k` members onto
/// translates of one unimodular simplex.
///
/// Supported for `k = n` and `k <= 2`. For `k = 2` this asks for a primitive
/// functional of width one on every member.
pub fn projects_onto_simplex_translates(tuple: &PolytopeTuple) -> Result<bool> {
    let n = tuple.ambient_dim();
    match tuple.len() {
        1 => Ok(false),
        k if k == n => Ok(common_projection(tuple, true)?.is_some()),
        2 => {
            let (p, q) = (&tuple[0], &tuple[1]);
            Ok(p.functionals_with_width_at_most(1)?.iter().any(|f| q.width_along(f) == 1))
        }
        k => Err(Error::PreconditionViolation(format!("simplex projections of {k} polytopes in dimension {n}"))),
    }
}

/// Lawrence prism structure: a projection onto a unimodular simplex and the fibre lengths.
pub fn lawrence_structure(p: &LatticePolytope) -> Option<LawrencePrism> {
    let phi = projections_onto_unimodular_simplex(p).ok()?.into_iter().next()?;
    let image = phi.image(p);
    let mut heights: Vec<Int> = image
        .vertices()
        .iter()
        .map(|w| {
            let ts = p.vertices().iter().filter(|v| phi.apply(v) == *w).map(|v| phi.fibre_coordinate(v));
            let (lo, hi) = ts.fold((Int::MAX, Int::MIN), |(l, h), t| (l.min(t), h.max(t)));
            hi - lo
        })
        .collect();
    heights.sort_by(|a, b| b.cmp(a));
    Some(LawrencePrism { projection: phi, heights })
}

/// `S + R u`, stored through the image of `S` under the projection along `u`.
#[derive(Clone, Debug)]
pub struct InfinitePrism {
    pub base: LatticePolytope,
    pub direction: IntVector,
    projection: Projection,
    image: LatticePolytope,
}

impl InfinitePrism {
    pub fn new(base: LatticePolytope, direction: &[Int]) -> Result<InfinitePrism> {
        if base.ambient_dim() != direction.len() {
            return Err(Error::DimensionMismatch { expected: base.ambient_dim(), found: direction.len() });
        }
        let projection = Projection::along(direction)?;
        let image = projection.image(&base);
        Ok(InfinitePrism { base, direction: projection.kernel_direction.clone(), projection, image })
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    /// The image polygon (or polytope) in `Z^{n-1}`.
    pub fn section(&self) -> &LatticePolytope {
        &self.image
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.image.contains(&self.projection.apply(x))
    }
}

fn check_independent(c1: &InfinitePrism, c2: &InfinitePrism) -> Result<()> {
    if c1.direction.dim() != c2.direction.dim() {
        return Err(Error::DimensionMismatch { expected: c1.direction.dim(), found: c2.direction.dim() });
    }
    let m = IntMatrix::from_rows(&[&c1.direction, &c2.direction], c1.direction.dim());
    if m.rank() < 2 {
        return Err(Error::ParallelDirections);
    }
    Ok(())
}

/// Lattice points of `C_1 ∩ (C_2 + shift)`, sorted.
pub fn prism_intersection_points(c1: &InfinitePrism, c2: &InfinitePrism, shift: &[Int]) -> Result<Vec<IntVector>> {
    check_independent(c1, c2)?;
    let phi2 = &c2.projection;
    // Points over y in the first section are lift(s, y) = s d_1 + lift(0, y).
    let d1 = &c1.direction;
    let b1 = complete_to_basis(d1)?;
    let facets2 = section_inequalities(&c2.image);
    let d1_img = phi2.apply(d1);
    let shift_img = phi2.apply(shift);
    let mut out = Vec::new();
    for y in c1.image.lattice_points() {
        let mut c = vec![0];
        c.extend_from_slice(&y);
        let x0 = b1.mul_vec(&c);
        let x0_img = phi2.apply(&x0);
        let (mut lo, mut hi) = (Int::MIN, Int::MAX);
        for (a, b) in &facets2 {
            // a · (phi2(x0) + s phi2(d1) - phi2(shift)) <= b
            let alpha = a.dot(&d1_img);
            let rhs = b - a.dot(&x0_img) + a.dot(&shift_img);
            match alpha.signum() {
                1 => hi = hi.min(div_floor(rhs, alpha)),
                -1 => lo = lo.max(div_ceil(rhs, alpha)),
                _ => {
                    if rhs < 0 {
                        hi = Int::MIN;
                    }
                }
            }
        }
        if lo == Int::MIN || hi == Int::MAX {
            return Err(Error::InternalInvariantViolation("unbounded prism intersection".into()));
        }
        for s in lo..=hi {
            out.push(x0.add(&d1.scale(s)));
        }
    }
    debug_assert!(out.iter().all(|x| c1.contains(x)));
    out.sort();
    Ok(out)
}

/// Inequalities `a · y <= b` describing a section, also when it is not full-dimensional.
fn section_inequalities(q: &LatticePolytope) -> Vec<(IntVector, Int)> {
    if q.is_full_dimensional() {
        return q.facets().iter().map(|f| (f.normal.clone(), f.offset)).collect();
    }
    // Relative facets pulled back through the frame, plus equations for the affine hull.
    let fr = q.frame().expect("lower-dimensional polytope has a frame");
    let n = q.ambient_dim();
    let mut out = Vec::new();
    let (facets, _) = q.relative_facets();
    for f in facets {
        let a = fr.coords.transpose().mul_vec(&f.normal);
        let b = f.offset + a.dot(&fr.origin);
        out.push((a, b));
    }
    let eq = crate::intlin::kernel_basis(&fr.basis.transpose());
    for r in 0..eq.rows() {
        let a = eq.row_vector(r);
        let b = a.dot(&fr.origin);
        out.push((a.clone(), b));
        out.push((a.neg(), -b));
    }
    debug_assert!(out.iter().all(|(a, _)| a.dim() == n));
    out
}

/// `conv(C_1 ∩ (C_2 + shift) ∩ Z^n)`, or `None` if it has no lattice points.
pub fn prism_intersection(c1: &InfinitePrism, c2: &InfinitePrism, shift: &[Int]) -> Result<Option<LatticePolytope>> {
    let pts = prism_intersection_points(c1, c2, shift)?;
    if pts.is_empty() {
        return Ok(None);
    }
    Ok(Some(hull(&pts)?))
}

/// First shift among `anchors` whose intersection is full-dimensional.
pub fn full_dim_intersection_translate(
    c1: &InfinitePrism,
    c2: &InfinitePrism,
    anchors: &[IntVector],
) -> Result<Option<(IntVector, LatticePolytope)>> {
    check_independent(c1, c2)?;
    for z in anchors {
        if let Some(p) = prism_intersection(c1, c2, z)? {
            if p.is_full_dimensional() {
                return Ok(Some((z.clone(), p)));
            }
        }
    }
    Ok(None)
}
