use std::f64::consts::PI;

use conewerk::dirichlet::*;
use conewerk::model_spaces::Curvature;
use conewerk::qmc::QmcConfig;
use nalgebra::Vector3;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quick() -> QmcConfig {
    QmcConfig {
        replicates: 4,
        points_per_replicate: 1 << 12,
        seed: 5,
    }
}

/// Group elements of word length at most `len`, by explicit composition.
fn words(gens: &[Isometry], len: usize) -> Vec<Isometry> {
    let kind = gens[0].kind();
    let letters: Vec<Isometry> = gens.iter().flat_map(|g| [*g, g.invert()]).collect();
    let mut layer = vec![Isometry::identity(kind)];
    let mut all = layer.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &letters {
                next.push(w.compose(l).unwrap());
            }
        }
        next.retain(|g| all.iter().all(|h| g.max_difference(h) > 1e-9));
        let mut fresh: Vec<Isometry> = Vec::new();
        for g in next {
            if fresh.iter().all(|h| g.max_difference(h) > 1e-9) {
                fresh.push(g);
            }
        }
        all.extend(fresh.iter().copied());
        layer = fresh;
    }
    all
}

fn lattice(basis: [Vector3<f64>; 3]) -> Vec<Isometry> {
    basis.iter().map(|v| Isometry::translation(*v)).collect()
}

/// Fraction of uniform points in `[-1, 1]³` lying strictly inside two
/// translates, and the number of points in no translate.
fn tiling_overlap(d: &DirichletDomain, translates: &[Isometry], samples: usize, seed: u64) -> (f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut overlapping = 0;
    let mut uncovered = 0;
    for _ in 0..samples {
        let p = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let mut strict = 0;
        let mut closed = 0;
        for g in translates {
            let q = g.invert().apply(&Point::Euclidean(p)).unwrap();
            if d.contains_world_strictly(&q, 1e-12).unwrap() {
                strict += 1;
            }
            if d.contains_world(&q, 1e-12).unwrap() {
                closed += 1;
            }
        }
        if strict >= 2 {
            overlapping += 1;
        }
        if closed == 0 {
            uncovered += 1;
        }
    }
    (overlapping as f64 / samples as f64, uncovered)
}

#[test]
fn z3_translates_tile_without_overlap() {
    let gens = lattice([Vector3::x(), Vector3::y(), Vector3::z()]);
    let d = dirichlet_domain(&gens, &Point::origin(GeometryKind::Euclidean), 1.0, 6, &quick()).unwrap();
    // [-1, 1]³ needs words up to length 3 at its corners
    let (overlap, uncovered) = tiling_overlap(&d, &words(&gens, 3), 200_000, 1);
    assert!(overlap < 1e-6, "overlap fraction {overlap}");
    assert_eq!(uncovered, 0);
}

#[test]
fn skewed_lattice_volume_is_the_determinant() {
    let basis = [
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(0.3, 0.9, 0.0),
        Vector3::new(0.2, -0.1, 1.1),
    ];
    let det = nalgebra::Matrix3::<f64>::from_columns(&basis).determinant().abs();
    let gens = lattice(basis);
    let d = dirichlet_domain(&gens, &Point::origin(GeometryKind::Euclidean), 2.0, 6, &quick()).unwrap();
    assert!(!d.truncated);
    assert!((d.volume.value - det).abs() < 1e-9, "{} vs {det}", d.volume.value);
    assert!(d.hull_defect() < 1e-8);
    for p in &d.pairings {
        assert_eq!(d.partner_of(p.partner), Some(p.face));
        assert!(p.vertex_error.unwrap() < 1e-8);
    }
    let (overlap, _) = tiling_overlap(&d, &words(&gens, 3), 50_000, 2);
    assert!(overlap < 1e-6);
}

#[test]
fn screw_crystallographic_group_pairs_faces_isometrically() {
    let gens = [
        Isometry::translation(Vector3::x()),
        Isometry::translation(Vector3::y()),
        Isometry::screw(Vector3::z(), PI, 1.0),
    ];
    let x = Point::Euclidean(Vector3::new(0.2, 0.1, 0.0));
    let d = dirichlet_domain(&gens, &x, 2.0, 6, &quick()).unwrap();
    assert!(!d.truncated);
    // the screw squares to a unit translation, so the covolume is 1
    assert!((d.volume.value - 1.0).abs() < 1e-9, "{}", d.volume.value);
    assert!(d.pairings.iter().any(|p| p.word.contains('c') || p.word.contains('C')));
    for p in &d.pairings {
        assert_eq!(d.partner_of(p.partner), Some(p.face));
        assert!(p.vertex_error.unwrap() < 1e-8, "{p:?}");
    }
    assert!(d.hull_defect() < 1e-8);
}

#[test]
fn schottky_pairings_are_involutive() {
    // sinh(ℓ₁/2) sinh(ℓ₂/2) > 1 keeps the four bisectors disjoint
    let a = Isometry::lorentz_screw(Vector3::x(), 0.4, 3.0);
    let b = Isometry::lorentz_screw(Vector3::y(), -0.3, 3.5);
    let d = dirichlet_domain(&[a, b], &Point::origin(GeometryKind::Lorentz), 3.0, 4, &quick()).unwrap();
    assert!(d.faces.len() >= 4);
    assert_eq!(2 * d.pair_count(), d.faces.len());
    for p in &d.pairings {
        assert_eq!(d.partner_of(p.partner), Some(p.face));
    }
    assert!(d.hull_defect() < 1e-8);
}

#[test]
fn lorentz_words_stay_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let mut g = Isometry::identity(GeometryKind::Lorentz);
        for _ in 0..DEFAULT_MAX_WORD_LENGTH {
            let axis = Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let step = Isometry::lorentz_screw(axis, rng.random_range(-PI..PI), rng.random_range(0.0..2.0));
            g = g.compose(&step).unwrap();
            g.validate().unwrap();
        }
        let id = g.compose(&g.invert()).unwrap();
        id.validate().unwrap();
        g.invert().validate().unwrap();
    }
}

#[test]
fn profile_non_increasing_on_random_star_polyhedra() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let radii: Vec<f64> = (1..=12).map(|i| 0.15 * i as f64).collect();
    let qmc = QmcConfig {
        replicates: 4,
        points_per_replicate: 1 << 13,
        seed: 9,
    };
    for _ in 0..20 {
        let r: Vec<f64> = (0..12).map(|_| rng.random_range(0.4..1.6)).collect();
        let s = StarPolyhedron::new(&r).unwrap();
        let prof = bishop_gromov_profile(&s, Curvature::FLAT, &Vector3::zeros(), &radii, &qmc).unwrap();
        assert!(is_non_increasing(&prof, 3.0), "{r:?}");
    }
}
