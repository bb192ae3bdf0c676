use super::*;
use crate::catalog::{maximal_triples, parallelepiped_triple, sheared_family, spanning_maximal_triples};
use crate::equiv::AffineUnimodularMap;
use crate::mixed::mixed_degree;
use crate::testutil::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn conv(pts: &[IntVector]) -> LatticePolytope {
    hull(pts).unwrap()
}

/// `t` moved by a random unimodular map, with members permuted and translated independently.
fn scramble(t: &PolytopeTuple, rng: &mut ChaCha8Rng) -> PolytopeTuple {
    let map = AffineUnimodularMap::new(random_unimodular(rng, 3), random_point(rng, 3, -3, 3)).unwrap();
    let mut members: Vec<LatticePolytope> =
        t.iter().map(|p| map.apply_polytope(p).translate(&random_point(rng, 3, -4, 4))).collect();
    members.shuffle(rng);
    PolytopeTuple::new(members).unwrap()
}

#[test]
fn bundled_seeds_are_valid_and_distinct() {
    let seeds = seeds::bundled_seeds().unwrap();
    assert_eq!(seeds.len(), 12);
    let forms: BTreeSet<String> = seeds.iter().map(|s| normal_form(&s.polytope).unwrap().hash).collect();
    assert_eq!(forms.len(), 12);
    for s in &seeds {
        assert!(s.polytope.normalized_volume() <= seeds::VOLUME_BOUND, "{}", s.name);
        assert!(seeds::is_maximal_hollow(&s.polytope, seeds::VOLUME_BOUND), "{}", s.name);
    }
    assert_eq!(seeds::bundled_version(), "1");
}

#[test]
fn seed_validation_rejects_bad_polytopes() {
    let bad = [
        // interior point (1,1,1)
        LatticePolytope::unimodular_simplex(3).dilate(4),
        // width one
        LatticePolytope::unit_cube(3),
        // projects onto the hollow triangle 2Δ_2
        LatticePolytope::unimodular_simplex(2).dilate(2).lattice_pyramid(),
    ];
    for p in bad {
        let s = HollowSeed { name: "x".into(), polytope: p };
        assert!(matches!(seeds::validate_seed(&s), Err(Error::SeedInvalid { .. })));
    }
    assert!(matches!(seeds::load_seeds(r#"{"format": 2, "version": "1", "seeds": []}"#), Err(Error::Parse(_))));
}

#[test]
fn short_search_finds_only_bundled_seeds() {
    let bundled: BTreeSet<String> =
        seeds::bundled_seeds().unwrap().iter().map(|s| normal_form(&s.polytope).unwrap().hash).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let found = seeds::search_maximal_hollow(&mut rng, 200, &[2, 3], seeds::VOLUME_BOUND).unwrap();
    assert!(!found.is_empty());
    for p in found {
        assert!(bundled.contains(&normal_form(&p).unwrap().hash), "{p:?}");
    }
}

#[test]
fn deletion_search_matches_subset_enumeration() {
    // Both routes list the hollow subpolytopes of width >= 1 of the
    // pyramid over the square and of 2Δ_3, up to equivalence.
    for seed in [crate::catalog::square_pyramid(), LatticePolytope::unimodular_simplex(3).dilate(2)] {
        let bfs: BTreeSet<String> =
            enumerate_hollow_subpolytopes(&seed, 1).unwrap().iter().map(|p| normal_form(p).unwrap().hash).collect();
        let subsets: BTreeSet<String> =
            lattice_subpolytopes(&seed).unwrap().iter().map(|p| normal_form(p).unwrap().hash).collect();
        assert_eq!(bfs, subsets);
    }
}

#[test]
fn width_filter_prunes_the_search() {
    let seed = LatticePolytope::unimodular_simplex(3).dilate(2);
    let wide = enumerate_hollow_subpolytopes(&seed, 2).unwrap();
    for p in &wide {
        assert!(p.lattice_width().unwrap().0 >= 2);
    }
    let all = enumerate_hollow_subpolytopes(&seed, 1).unwrap();
    let expected = all.iter().filter(|p| p.lattice_width().unwrap().0 >= 2).count();
    assert_eq!(wide.len(), expected);
}

#[test]
fn lattice_subpolytopes_of_unit_cube() {
    // Full-dimensional subpolytopes of the unit cube up to translation:
    // every vertex subset of size >= 4 that is not coplanar, and all such
    // hulls have exactly those points as vertices.
    let cube = LatticePolytope::unit_cube(3);
    let pts = cube.lattice_points();
    let mut brute = BTreeSet::new();
    for mask in 0u32..256 {
        let sub: Vec<IntVector> = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()).collect();
        if sub.len() < 4 {
            continue;
        }
        let h = conv(&sub);
        if h.is_full_dimensional() {
            brute.insert(crate::decomp::normalize_translation(&h).vertices().to_vec());
        }
    }
    assert_eq!(lattice_subpolytopes(&cube).unwrap().len(), brute.len());
}

#[test]
fn hollow_projection_of_known_polytopes() {
    let pyr = LatticePolytope::unimodular_simplex(2).dilate(2).lattice_pyramid();
    assert!(hollow_projection(&pyr).unwrap().is_some());
    let big = seeds::bundled_seeds().unwrap().remove(0).polytope;
    assert!(hollow_projection(&big).unwrap().is_none());
}

#[test]
fn exceptional_pair_routes_agree_on_maximal_triple() {
    // (2Δ_3, Δ_3, Δ_3): all pairs have hollow sum.
    let t = &maximal_triples()[1];
    let mut flags = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        flags.push(is_exceptional_pair(&t[i], &t[j]).unwrap());
    }
    assert_eq!(exceptional_subpair_count(t).unwrap(), flags.iter().filter(|&&f| f).count());
    let s = LatticePolytope::unimodular_simplex(3);
    assert!(!is_exceptional_pair(&s, &s).unwrap());
    assert!(is_exceptional_pair(&s.dilate(3), &s).is_err());
}

#[test]
fn tuple_key_is_an_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in maximal_triples().iter().chain(spanning_maximal_triples().iter()).chain([sheared_family(2)].iter()) {
        let key = tuple_key(t).unwrap();
        for _ in 0..4 {
            let s = scramble(t, &mut rng);
            assert_eq!(tuple_key(&s).unwrap(), key);
            assert!(tuple_equivalent(t, &s).unwrap());
        }
    }
}

#[test]
fn class_set_dedups_up_to_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut set = ClassSet::new();
    let base = [sheared_family(1), sheared_family(2), maximal_triples()[1].clone()];
    let mut cands = Vec::new();
    for t in &base {
        cands.push(t.clone());
        for _ in 0..3 {
            cands.push(scramble(t, &mut rng));
        }
    }
    set.extend(cands).unwrap();
    assert_eq!(set.len(), 3);
    for t in &base {
        assert!(set.contains(&scramble(t, &mut rng)).unwrap());
    }
    assert!(!set.contains(&sheared_family(3)).unwrap());
    assert!(!set.insert(sheared_family(1)).unwrap());
    assert!(set.insert(sheared_family(4)).unwrap());
}

#[test]
fn sheared_family_k0_and_k1_coincide() {
    // x -> A x + (1, 2, 0) sends the members for k = 0 to translates of
    // the members for k = 1.
    let a = crate::intlin::IntMatrix::from_row_major(3, 3, vec![-1, 0, -1, 0, -1, -1, 0, 0, 1]);
    let map = AffineUnimodularMap::new(a, IntVector::from(vec![1, 2, 0])).unwrap();
    let (t0, t1) = (sheared_family(0), sheared_family(1));
    for i in 0..3 {
        let img = crate::decomp::normalize_translation(&map.apply_polytope(&t0[i]));
        assert_eq!(img, crate::decomp::normalize_translation(&t1[i]));
    }
    assert!(tuple_equivalent(&t0, &t1).unwrap());
    assert!(!tuple_equivalent(&t1, &sheared_family(2)).unwrap());
}

#[test]
fn class_set_representatives_do_not_depend_on_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cands: Vec<PolytopeTuple> = Vec::new();
    for t in maximal_triples() {
        cands.push(t.clone());
        cands.push(scramble(&t, &mut rng));
    }
    let mut a = ClassSet::new();
    a.extend(cands.clone()).unwrap();
    cands.reverse();
    let mut b = ClassSet::new();
    b.extend(cands).unwrap();
    assert_eq!(a.into_records(), b.into_records());
}

#[test]
fn manifest_roundtrip_and_validation() {
    let mut set = ClassSet::new();
    set.extend(maximal_triples()).unwrap();
    let m = ClassManifest::new("test", params(&[("k", "1".into())]), "unit".into(), set);
    m.validate().unwrap();
    let back: ClassManifest = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(back.digests(), m.digests());
    back.validate().unwrap();
    let mut broken = back.clone();
    broken.count += 1;
    assert!(broken.validate().is_err());
    let mut unsorted = m.clone();
    unsorted.classes.reverse();
    assert!(unsorted.validate().is_err());
    let bad = m.failing(|t| Ok(mixed_degree(t)?.value == 1)).unwrap();
    assert!(bad.is_empty());
}

#[test]
fn cache_roundtrip_corruption_and_gc() {
    let dir = std::env::temp_dir().join(format!("mdeg-cache-test-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let cache = Cache::at(&dir);
    assert_eq!(cache.get::<Vec<i64>>("a").unwrap(), None);
    cache.put("a", &vec![1i64, 2]).unwrap();
    assert_eq!(cache.get::<Vec<i64>>("a").unwrap(), Some(vec![1, 2]));
    let mut calls = 0;
    let v: i64 = cache.get_or("b", || { calls += 1; Ok(7) }).unwrap();
    let w: i64 = cache.get_or("b", || { calls += 1; Ok(8) }).unwrap();
    assert_eq!((v, w, calls), (7, 7, 1));
    std::fs::write(dir.join("c.json"), "{ broken").unwrap();
    assert!(matches!(cache.get::<i64>("c"), Err(Error::CacheCorrupt(_))));
    std::fs::write(dir.join("d.json.tmp"), "x").unwrap();
    assert_eq!(cache.stat().unwrap().entries, 4);
    assert_eq!(cache.gc().unwrap(), 2);
    assert_eq!(cache.stat().unwrap().entries, 2);
    assert_eq!(Cache::disabled().get::<i64>("a").unwrap(), None);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn stored_manifest_is_found_again() {
    let dir = std::env::temp_dir().join(format!("mdeg-manifest-test-{}", std::process::id()));
    let cache = Cache::at(&dir);
    let mut set = ClassSet::new();
    set.extend(vec![sheared_family(1)]).unwrap();
    let m = ClassManifest::new(pipeline_id::SPANNING, Default::default(), "p".into(), set);
    assert!(matches!(load_manifest(&cache, pipeline_id::SPANNING, &Default::default(), "p"), Err(Error::DependencyMissing(_))));
    store_manifest(&cache, &m).unwrap();
    let back = load_manifest(&cache, pipeline_id::SPANNING, &Default::default(), "p").unwrap();
    assert_eq!(back.digests(), m.digests());
    assert!(load_manifest(&cache, pipeline_id::SPANNING, &Default::default(), "q").is_err());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dependent_pipelines_reject_wrong_manifest() {
    let m = ClassManifest::new(pipeline_id::SPANNING, Default::default(), "p".into(), ClassSet::new());
    assert!(matches!(triples_one_exceptional(&m), Err(Error::DependencyMissing(_))));
    assert!(matches!(triples_multi_exceptional(&m), Err(Error::DependencyMissing(_))));
}

#[test]
fn maximal_triples_have_mixed_degree_one() {
    for t in maximal_triples().iter().chain(spanning_maximal_triples().iter()) {
        assert_eq!(mixed_degree(t).unwrap().value, 1, "{t:?}");
    }
    let cube = LatticePolytope::unit_cube(3);
    let cubes = PolytopeTuple::new(vec![cube.clone(), cube.clone(), cube]).unwrap();
    assert!(mixed_degree(&cubes).unwrap().value > 1);
    for k in 0..3 {
        assert_eq!(mixed_degree(&parallelepiped_triple(k)).unwrap().value, 2);
    }
}

#[test]
fn subtriple_search_respects_filters() {
    let s = LatticePolytope::unimodular_simplex(3);
    let containers = PolytopeTuple::new(vec![s.dilate(2), s.clone(), s.clone()]).unwrap();
    let all = md_one_subtriples(&containers, |_, _, _, _| Ok(true), |_| Ok(true)).unwrap();
    assert!(!all.is_empty());
    for t in &all {
        assert_eq!(mixed_degree(t).unwrap().value, 1);
    }
    let none = md_one_subtriples(&containers, |_, _, _, _| Ok(false), |_| Ok(true)).unwrap();
    assert!(none.is_empty());
}

#[test]
fn family_rejects_negative_parameter() {
    assert!(matches!(family_subtriples_upto(-1), Err(Error::PreconditionViolation(_))));
}
