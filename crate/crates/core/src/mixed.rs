//! Mixed volume and mixed degree of polytope tuples.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{Int, IntVector};
use crate::polytope::{LatticePolytope, PolytopeTuple};

/// Minkowski sums of every nonempty subtuple, indexed by bitmask.
struct SubsetSums {
    sums: Vec<Option<LatticePolytope>>,
}

impl SubsetSums {
    fn new(tuple: &PolytopeTuple) -> Self {
        let k = tuple.len();
        let mut sums: Vec<Option<LatticePolytope>> = vec![None; 1 << k];
        for mask in 1usize..(1 << k) {
            let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
            let rest = mask & !(1 << top);
            let s = match &sums[rest] {
                None => tuple[top].clone(),
                Some(r) => r.minkowski_sum(&tuple[top]).expect("common dimension"),
            };
            sums[mask] = Some(s);
        }
        SubsetSums { sums }
    }

    fn get(&self, mask: usize) -> &LatticePolytope {
        self.sums[mask].as_ref().expect("nonempty subset")
    }
}

fn indices(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| mask & (1 << i) != 0).collect()
}

fn factorial(n: usize) -> Int {
    (1..=n as Int).product()
}

/// Normalized mixed volume, `MV(Δ_n, ..., Δ_n) = 1`.
///
/// Inclusion-exclusion over normalized volumes of the subset sums; the
/// alternating sum equals `n!` times the mixed volume.
pub fn mixed_volume(tuple: &PolytopeTuple) -> Result<Int> {
    let n = tuple.ambient_dim();
    if tuple.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: tuple.len() });
    }
    let sums = SubsetSums::new(tuple);
    Ok(mixed_volume_from(&sums, n))
}

fn mixed_volume_from(sums: &SubsetSums, n: usize) -> Int {
    let mut total: Int = 0;
    for mask in 1usize..(1 << n) {
        let sign = if (n - mask.count_ones() as usize) % 2 == 0 { 1 } else { -1 };
        total += sign * sums.get(mask).normalized_volume();
    }
    let f = factorial(n);
    assert_eq!(total % f, 0, "alternating volume sum not divisible by n!");
    total / f
}

/// Evidence for the reported mixed degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MixedDegreeWitness {
    /// A member with an interior lattice point (mixed degree `n`).
    InteriorPoint { member: usize, point: IntVector },
    /// A subtuple of size `n - d + 1` whose sum has an interior lattice point.
    NonHollowSum { members: Vec<usize>, point: IntVector },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedDegreeReport {
    pub value: usize,
    pub witness: Option<MixedDegreeWitness>,
    /// Hollowness of every subtuple sum that was examined.
    pub hollow_certificates: BTreeMap<Vec<usize>, bool>,
}

/// Mixed degree of `m >= n - 1` polytopes in `R^n`.
pub fn mixed_degree(tuple: &PolytopeTuple) -> Result<MixedDegreeReport> {
    let n = tuple.ambient_dim();
    let m = tuple.len();
    if m + 1 < n || m > usize::BITS as usize - 1 {
        return Err(Error::TooFewPolytopes { count: m, dim: n });
    }
    let mut certs = BTreeMap::new();
    for (i, p) in tuple.iter().enumerate() {
        let interior = p.interior_lattice_points();
        certs.insert(vec![i], interior.is_empty());
        if let Some(pt) = interior.into_iter().next() {
            return Ok(MixedDegreeReport {
                value: n,
                witness: Some(MixedDegreeWitness::InteriorPoint { member: i, point: pt }),
                hollow_certificates: certs,
            });
        }
    }
    let sums = SubsetSums::new(tuple);
    // The smallest d such that every (n-d)-subset sum is hollow. Levels are
    // scanned from d = n-1 downwards; the first failure fixes d.
    let mut witness = None;
    let mut value = 0;
    for d in (0..n).rev() {
        let size = n - d;
        if size > m {
            value = d + 1;
            break;
        }
        let mut failed = None;
        for mask in 1usize..(1 << m) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let idx = indices(mask);
            let interior = sums.get(mask).interior_lattice_points();
            certs.insert(idx.clone(), interior.is_empty());
            if let Some(pt) = interior.into_iter().next() {
                failed = Some(MixedDegreeWitness::NonHollowSum { members: idx, point: pt });
                break;
            }
        }
        if let Some(w) = failed {
            value = d + 1;
            witness = Some(w);
            break;
        }
    }
    Ok(MixedDegreeReport { value, witness, hollow_certificates: certs })
}

/// Outcome of the interior-point bound `|(P_1+...+P_n)° ∩ Z^n| >= MV - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoprunovReport {
    pub interior_count: usize,
    pub mv_minus_one: Int,
    pub equality: bool,
    /// Every sum of `n - 1` members is hollow.
    pub all_subsums_hollow: bool,
}

pub fn soprunov_check(tuple: &PolytopeTuple) -> Result<SoprunovReport> {
    let n = tuple.ambient_dim();
    if tuple.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: tuple.len() });
    }
    let sums = SubsetSums::new(tuple);
    let mv = mixed_volume_from(&sums, n);
    let interior_count = sums.get((1 << n) - 1).interior_lattice_points().len();
    let all_subsums_hollow = (0..n).all(|skip| {
        let mask = ((1 << n) - 1) & !(1 << skip);
        mask == 0 || sums.get(mask).is_hollow()
    });
    if (interior_count as Int) < mv - 1 {
        return Err(Error::InternalInvariantViolation(format!(
            "interior count {interior_count} below MV - 1 = {}",
            mv - 1
        )));
    }
    Ok(SoprunovReport {
        interior_count,
        mv_minus_one: mv - 1,
        equality: interior_count as Int == mv - 1,
        all_subsums_hollow,
    })
}

pub fn is_mv_one(tuple: &PolytopeTuple) -> Result<bool> {
    Ok(mixed_volume(tuple)? == 1)
}

/// Every member is hollow and all sums of `n - 1` members are hollow, i.e. mixed degree at most one.
pub fn has_mixed_degree_at_most_one(tuple: &PolytopeTuple) -> bool {
    let n = tuple.ambient_dim();
    let m = tuple.len();
    if m + 1 < n {
        return false;
    }
    if tuple.iter().any(|p| !p.is_hollow()) {
        return false;
    }
    let members: Vec<usize> = (0..m).collect();
    itertools::Itertools::combinations(members.into_iter(), n - 1)
        .all(|idx| idx.is_empty() || tuple.partial_sum(&idx).is_hollow())
}
