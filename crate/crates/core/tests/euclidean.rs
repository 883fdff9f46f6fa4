use std::f64::consts::{PI, TAU};

use conewerk::euclidean_models::*;

#[test]
fn margulis_partition_table() {
    use LocalModelName::*;
    use MargulisType::*;
    let table = [
        (R3, Excluded),
        (R3Alpha, Excluded),
        (S1TwistR2, A),
        (S1TwistConeDisk, A),
        (Pillow, B),
        (T2xR, A),
        (S2abcxR, B),
        (S24pixR, B),
        (K2TwistR, Excluded),
        (P2PiPiTwistR, C),
        (QuotS24piD2PiPi, C),
        (QuotT2Annulus, Excluded),
        (QuotK2Moebius, Excluded),
    ];
    assert_eq!(table.len(), LocalModelName::ALL.len());
    for (name, expected) in table {
        assert_eq!(margulis_type(name), expected, "{name:?}");
    }
    let cat = catalogue();
    assert_eq!(cat.len(), 13);
    assert!(cat.iter().all(|e| e.margulis_type == margulis_type(e.name)));
}

#[test]
fn triples_match_brute_force_over_rationals() {
    let mut found = Vec::new();
    for a in 2..=60u32 {
        for b in a..=60 {
            for c in b..=60 {
                let (a, b, c) = (a as u64, b as u64, c as u64);
                // 1/a + 1/b + 1/c = 1 over a common denominator
                if (b * c + a * c + a * b) == a * b * c {
                    found.push([a as u32, b as u32, c as u32]);
                }
            }
        }
    }
    let mut got = euclidean_triples();
    got.sort();
    found.sort();
    assert_eq!(got, found);
    assert_eq!(got, vec![[2, 3, 6], [2, 4, 4], [3, 3, 3]]);
}

#[test]
fn sphere_sweep_requires_zero_euler() {
    for p in 2..=12u32 {
        for q in p..=12 {
            for r in q..=12 {
                let angles = [TAU / p as f64, TAU / q as f64, TAU / r as f64];
                let chi = orbifold_euler(&angles, OrbifoldBase::Sphere).unwrap();
                let soul = SoulDescriptor::new(SoulKind::SphereWithCones {
                    angles: angles.to_vec(),
                })
                .with_area(1.0);
                let ok = classify_soul(&soul).is_ok();
                let euclidean = euclidean_triples().contains(&[p, q, r]);
                assert_eq!(ok, euclidean, "({p}, {q}, {r}) χ = {chi}");
                if ok {
                    assert!(chi.abs() < 1e-12);
                    assert_eq!(classify_soul(&soul).unwrap().name, LocalModelName::S2abcxR);
                }
            }
        }
    }
    assert_eq!(orbifold_euler(&[PI; 4], OrbifoldBase::Sphere).unwrap(), 0.0);
}

#[test]
fn tube_volume_scaling() {
    let circle = classify_soul(
        &SoulDescriptor::new(SoulKind::Circle {
            fiber_angle: Some(TAU / 5.0),
        })
        .with_length(0.3),
    )
    .unwrap();
    let torus = classify_soul(&SoulDescriptor::new(SoulKind::Torus).with_area(0.2)).unwrap();
    for (model, slope) in [(&circle, 2.0), (&torus, 1.0)] {
        let (a, b): (f64, f64) = (0.01, 0.8);
        let s = (tube_volume(model, b).unwrap() / tube_volume(model, a).unwrap()).ln() / (b / a).ln();
        assert!((s - slope).abs() < 1e-6, "{:?}", model.name);
    }
    let thin = classify_soul(&SoulDescriptor::new(SoulKind::Circle { fiber_angle: None }).with_length(1e-3)).unwrap();
    assert!((tube_volume(&thin, 1.0).unwrap() - PI * 1e-3).abs() < 1e-15);
}

#[test]
fn pillow_double_cover_doubles_length() {
    let pillow = classify_soul(&SoulDescriptor::new(SoulKind::SilveredInterval).with_length(0.4)).unwrap();
    assert_eq!(pillow.name, LocalModelName::Pillow);
    let cover = pillow.double_cover().unwrap();
    assert_eq!(cover.name, LocalModelName::S1TwistR2);
    assert_eq!(cover.soul.length, Some(0.8));
    // a branched double cover doubles the tube volume
    let (v, vc) = (tube_volume(&pillow, 0.5).unwrap(), tube_volume(&cover, 0.5).unwrap());
    assert!((vc - 2.0 * v).abs() < 1e-15);
}

#[test]
fn non_excluded_below_pi() {
    let souls = [
        SoulDescriptor::new(SoulKind::Circle { fiber_angle: None }).with_length(1.0),
        SoulDescriptor::new(SoulKind::Circle { fiber_angle: Some(2.0) }).with_length(1.0),
        SoulDescriptor::new(SoulKind::Torus).with_area(1.0),
        SoulDescriptor::new(SoulKind::SphereWithCones {
            angles: vec![TAU / 3.0; 3],
        })
        .with_area(1.0),
        SoulDescriptor::new(SoulKind::SphereWithCones {
            angles: vec![PI / 2.0, PI / 2.0, PI],
        })
        .with_area(1.0),
    ];
    for s in souls {
        let m = classify_soul(&s).unwrap();
        assert_ne!(margulis_type(m.name), MargulisType::Excluded, "{:?}", m.name);
    }
}
