//! Hollow projections, exceptional pairs and subpolytope enumeration.

use std::collections::{BTreeMap, VecDeque};

use crate::equiv::{normal_form, NormalForm};
use crate::error::{Error, Result};
use crate::intlin::IntVector;
use crate::polytope::{hull, LatticePolytope, PolytopeTuple};
use crate::proj::{common_projection, Projection};

/// Primitive vector orthogonal to both `f` and `g`.
fn cross(f: &[i64], g: &[i64]) -> IntVector {
    IntVector::from(&[f[1] * g[2] - f[2] * g[1], f[2] * g[0] - f[0] * g[2], f[0] * g[1] - f[1] * g[0]][..])
}

/// A projection of the 3-polytope `p` onto a hollow polygon, if one exists.
///
/// Width one always gives one. For width two the image must be `2Δ_2`,
/// whose edge functionals pull back to width-two functionals of `p`, so the
/// kernel is the cross product of two of them. Width three or more never
/// gives one, since the image has the same width as some functional of `p`.
pub fn hollow_projection(p: &LatticePolytope) -> Result<Option<Projection>> {
    if p.ambient_dim() != 3 || !p.is_full_dimensional() {
        return Err(Error::LowerDimensional { dim: p.dim(), ambient: p.ambient_dim() });
    }
    let (w, f) = p.lattice_width()?;
    if w <= 1 {
        let other = (0..3).map(|i| IntVector::unit(3, i)).find(|e| cross(&f, e).content() != 0).unwrap();
        let d = cross(&f, &other).primitive_part();
        return Ok(Some(Projection::along(&d)?));
    }
    if w >= 3 {
        return Ok(None);
    }
    let fs = p.functionals_with_width_at_most(2)?;
    for (i, f) in fs.iter().enumerate() {
        for g in &fs[i + 1..] {
            let d = cross(f, g);
            if d.is_zero() {
                continue;
            }
            let phi = Projection::along(&d.primitive_part())?;
            if phi.image(p).is_hollow() {
                return Ok(Some(phi));
            }
        }
    }
    Ok(None)
}

/// Whether `p + q` admits no projection onto a hollow polygon.
///
/// Decided twice: through the hollow-image search on `p + q`, and through
/// the absence of a common projection of `p, q` onto translates of `Δ_2`.
/// The two must agree when `p + q` is hollow.
pub fn is_exceptional_pair(p: &LatticePolytope, q: &LatticePolytope) -> Result<bool> {
    if !p.is_full_dimensional() || !q.is_full_dimensional() || p.ambient_dim() != 3 {
        return Err(Error::PreconditionViolation("exceptional pairs consist of two 3-polytopes".into()));
    }
    let s = p.minkowski_sum(q)?;
    if !s.is_hollow() {
        return Err(Error::PreconditionViolation("p + q is not hollow".into()));
    }
    let by_image = hollow_projection(&s)?.is_none();
    let pair = PolytopeTuple::new(vec![p.clone(), q.clone()])?;
    let by_common = common_projection(&pair, true)?.is_none();
    if by_image != by_common {
        return Err(Error::InternalInvariantViolation(format!(
            "exceptionality routes disagree for {p:?} and {q:?}: image {by_image}, common {by_common}"
        )));
    }
    Ok(by_image)
}

/// All full-dimensional lattice subpolytopes of `seed` with lattice width at
/// least `min_width`, one representative per equivalence class, sorted by
/// normal form.
pub fn enumerate_hollow_subpolytopes(seed: &LatticePolytope, min_width: i64) -> Result<Vec<LatticePolytope>> {
    enumerate_subpolytopes_where(seed, |q| Ok(q.lattice_width()?.0 >= min_width))
}

/// All full-dimensional lattice subpolytopes of `seed` satisfying `keep`,
/// one per equivalence class, sorted by normal form. `keep` must pass from
/// a polytope to every lattice polytope containing it.
///
/// Breadth-first over vertex deletions: a subpolytope `Q` of `R` misses some
/// vertex `v` of `R`, so it lies in the hull of the other lattice points of
/// `R`, and every polytope on the way contains `Q` and so satisfies `keep`.
pub fn enumerate_subpolytopes_where<F>(seed: &LatticePolytope, keep: F) -> Result<Vec<LatticePolytope>>
where
    F: Fn(&LatticePolytope) -> Result<bool>,
{
    if !seed.is_full_dimensional() {
        return Err(Error::LowerDimensional { dim: seed.dim(), ambient: seed.ambient_dim() });
    }
    let mut seen: BTreeMap<NormalForm, LatticePolytope> = BTreeMap::new();
    if !keep(seed)? {
        return Ok(Vec::new());
    }
    let mut queue = VecDeque::new();
    seen.insert(normal_form(seed)?, seed.clone());
    queue.push_back(seed.clone());
    while let Some(r) = queue.pop_front() {
        let pts = r.lattice_points();
        for v in r.vertices() {
            let rest: Vec<IntVector> = pts.iter().filter(|x| *x != v).cloned().collect();
            let sub = hull(&rest)?;
            if !sub.is_full_dimensional() || !keep(&sub)? {
                continue;
            }
            let nf = normal_form(&sub)?;
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(nf) {
                e.insert(sub.clone());
                queue.push_back(sub);
            }
        }
    }
    Ok(seen.into_values().collect())
}
