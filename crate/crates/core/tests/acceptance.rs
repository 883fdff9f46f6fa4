//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use conewerk::analysis_tools::*;
use conewerk::coverings::*;
use conewerk::dirichlet::*;
use conewerk::euclidean_models::*;
use conewerk::model_spaces::*;
use conewerk::qmc::QmcConfig;
use conewerk::trace_deformation::*;
use nalgebra::Vector3;
use num_bigint::BigInt;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod tol {
    pub const TRIG_DUALITY: f64 = 1e-9;
    pub const BALL_QUADRATURE: f64 = 1e-9;
    pub const SECTOR_FRACTION: f64 = 1e-12;
    pub const CUBE_VOLUME: f64 = 1e-9;
    pub const SLAB_WIDTH: f64 = 1e-8;
    pub const PROFILE_SIGMAS: f64 = 3.0;
    pub const XI3: f64 = 1e-12;
    pub const CONCAVITY: f64 = 1e-8;
    pub const CURVATURE_SIGN: f64 = 1e-8;
    pub const GH_TRIANGLE: f64 = 1e-12;
    pub const CONE_ANGLE: f64 = 1e-12;
}

mod budget {
    use std::time::Duration;
    pub const CHEBYSHEV: Duration = Duration::from_secs(2);
    pub const PROFILE: Duration = Duration::from_secs(30);
    pub const COVERING: Duration = Duration::from_secs(60);
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn chebyshev() -> Outcome {
    let t = Instant::now();
    let exact = (0..=256u32).all(|n| cheb_derivative_at_two(n) == BigInt::from(n) * BigInt::from(n));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(0..=64u32);
        let phi = rng.random_range(0.0..TAU);
        worst = worst.max((cheb_eval(n, 2.0 * phi.cos()) - 2.0 * (n as f64 * phi).cos()).abs());
    }
    let elapsed = t.elapsed();
    outcome(
        exact && worst < tol::TRIG_DUALITY && within(elapsed, budget::CHEBYSHEV),
        format!("p'_n(2) = n^2 for n <= 256: {exact}; max trig error {worst:.2e}; {elapsed:.2?}"),
    )
}

fn ball_volumes() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [0.1f64, 0.5, 1.0, 2.0, 5.0] {
        let exact = PI * ((2.0 * r).sinh() - 2.0 * r);
        let q = ball_volume_fermi(Curvature::HYPERBOLIC, ConeAngle::FULL, r);
        worst = worst.max((q - exact).abs() / exact.max(1.0));
    }
    let mut sector: f64 = 0.0;
    for alpha in [0.5, PI / 2.0, PI, 4.0] {
        let a = ConeAngle::new(alpha).unwrap();
        for r in [0.1, 1.0, 5.0] {
            let full = ball_volume(Curvature::HYPERBOLIC, ConeAngle::FULL, r);
            sector = sector.max((ball_volume(Curvature::HYPERBOLIC, a, r) - alpha / TAU * full).abs() / full);
        }
    }
    outcome(
        worst < tol::BALL_QUADRATURE && sector < tol::SECTOR_FRACTION,
        format!("quadrature error {worst:.2e}; sector fraction error {sector:.2e}"),
    )
}

fn z3_domain(qmc: &QmcConfig) -> DirichletDomain {
    let gens = [Vector3::x(), Vector3::y(), Vector3::z()].map(Isometry::translation);
    dirichlet_domain(
        &gens,
        &Point::origin(GeometryKind::Euclidean),
        1.0,
        DEFAULT_MAX_WORD_LENGTH,
        qmc,
    )
    .unwrap()
}

fn dirichlet_fixtures() -> Outcome {
    let d = z3_domain(&QmcConfig::default());
    let vol_err = (d.volume.value - 1.0).abs();
    let involution = d.pairings.iter().all(|p| d.partner_of(p.partner) == Some(p.face));
    let isometric = d.pairings.iter().all(|p| p.vertex_error.is_some_and(|e| e < 1e-8));
    let shift = 2.0;
    let screw = Isometry::screw(Vector3::z(), 0.9, shift);
    let s = dirichlet_domain(
        &[screw],
        &Point::origin(GeometryKind::Euclidean),
        3.0,
        6,
        &QmcConfig::default(),
    )
    .unwrap();
    let width_err = s.slab_width.map_or(f64::INFINITY, |w| (w - shift).abs());
    outcome(
        vol_err < tol::CUBE_VOLUME && d.pair_count() == 3 && d.faces.len() == 6 && involution && isometric
            && width_err < tol::SLAB_WIDTH,
        format!(
            "volume error {vol_err:.1e}; {} faces in {} pairs; involution {involution}; slab width error {width_err:.1e}",
            d.faces.len(),
            d.pair_count()
        ),
    )
}

fn bishop_gromov() -> Outcome {
    let t = Instant::now();
    let qmc = QmcConfig::default();
    let cube = z3_domain(&qmc);
    let cube_radii: Vec<f64> = (1..=16).map(|i| 0.06 * i as f64).collect();
    let cube_prof = bishop_gromov_profile(&cube, Curvature::FLAT, &Vector3::zeros(), &cube_radii, &qmc).unwrap();
    let mut ok = is_non_increasing(&cube_prof, tol::PROFILE_SIGMAS);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let radii: Vec<f64> = (1..=12).map(|i| 0.15 * i as f64).collect();
    let mut failures = 0;
    for _ in 0..20 {
        let r: Vec<f64> = (0..12).map(|_| rng.random_range(0.4..1.6)).collect();
        let s = StarPolyhedron::new(&r).unwrap();
        let prof = bishop_gromov_profile(&s, Curvature::FLAT, &Vector3::zeros(), &radii, &qmc).unwrap();
        if !is_non_increasing(&prof, tol::PROFILE_SIGMAS) {
            failures += 1;
        }
    }
    ok &= failures == 0;
    let elapsed = t.elapsed();
    outcome(
        ok && within(elapsed, budget::PROFILE),
        format!(
            "cube and 20 star polyhedra, {} QMC points each; {failures} non-monotone; {elapsed:.2?}",
            qmc.replicates * qmc.points_per_replicate
        ),
    )
}

fn euclidean() -> Outcome {
    let mut triples = euclidean_triples();
    triples.sort();
    let triples_ok = triples == vec![[2, 3, 6], [2, 4, 4], [3, 3, 3]];
    let euler_ok = orbifold_euler(&[PI; 4], OrbifoldBase::Sphere) == Ok(0.0);
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
    let matches = table.iter().filter(|(m, ty)| margulis_type(*m) == *ty).count();
    outcome(
        triples_ok && euler_ok && matches == 13 && LocalModelName::ALL.len() == 13,
        format!("triples {triples:?}; chi(S2(pi,pi,pi,pi)) = 0: {euler_ok}; {matches}/13 models match"),
    )
}

fn covering() -> Outcome {
    let t = Instant::now();
    let space = flat_torus_grid(10, 1.0, 0.3).unwrap();
    let centers = greedy_maximal_packing(&space, &seeded_order(space.len(), 0), &[]).unwrap();
    let cov = build_covering(&space, &centers, CoverMode::Plain).unwrap();
    let report = verify_covering(&space, &cov, None);
    let nv = nerve(&cov);
    let bound = nerve_dimension_bound();
    let mapped: Vec<Barycentric> = (0..space.len()).map(|p| partition_map(&cov, p).unwrap()).collect();
    let lip = lipschitz_audit(&space, &cov, &nv, &mapped, 10_000, 1);
    let retract = retract_to_skeleton(&nv, &mapped, 2, &RetractionConfig::default());
    let star_ok = match &retract {
        Ok(out) => {
            out.points.iter().all(|f| f.coords.len() <= 3) && star_preimage_violations(&cov, &nv, &out.points) == 0
        }
        Err(_) => false,
    };
    let elapsed = t.elapsed();
    outcome(
        report.all_pass()
            && (nv.dimension() as u64) <= bound
            && lip.passed
            && star_ok
            && within(elapsed, budget::COVERING),
        format!(
            "{} points, {} sets; properties pass: {}; nerve dim {} <= N = {bound}; Lipschitz ratio {:.3} (limit {}); retraction {}; {elapsed:.2?}",
            space.len(),
            cov.len(),
            report.all_pass(),
            nv.dimension(),
            lip.worst_ratio,
            lip.tolerance,
            if star_ok { "ok" } else { "failed" }
        ),
    )
}

fn constants_ledger() -> Outcome {
    let c = constants(8.0).unwrap();
    let xi3_err = (xi(3) - 16.0 * 8f64.sqrt() / 3.0).abs();
    let b1_exact = c.b1 == c.b0 * 2f64.powi(21);
    let nu = 0.5;
    let floors = [
        margulis_radius_floor(nu, RadiusFloorCase::AnchorB) == Ok(nu / 16.0),
        margulis_radius_floor(nu, RadiusFloorCase::AbelianFar) == Ok(nu / 128.0),
        margulis_radius_floor(
            nu,
            RadiusFloorCase::AbelianNear {
                nu0: nu / 2.0,
                big_d: c.d1,
            },
        ) == Ok(nu / 2048.0),
    ];
    outcome(
        xi3_err < tol::XI3 && b1_exact && c.d0 >= 300.0 && c.d1 >= 1e4 && c.eta0 < c.eta0_bound && floors.iter().all(|&f| f),
        format!(
            "xi_3 error {xi3_err:.1e}; b1 = 2^21 b0: {b1_exact}; D0 = {:.3e}; D1 = {:.3e}; eta0 {:.3e} < {:.3e}; floors {floors:?}",
            c.d0, c.d1, c.eta0, c.eta0_bound
        ),
    )
}

fn smoothing() -> Outcome {
    let mut built = 0;
    let mut concave = true;
    let mut curvature_ok = true;
    let mut positive = true;
    for i in 0..10 {
        let t = 0.51 + 0.048 * i as f64;
        for j in 0..10 {
            let eps = max_smoothing_eps(t, 1.0) * (0.05 + 0.09 * j as f64);
            let Ok(p) = build_smoothing(t, 1.0, eps) else {
                continue;
            };
            built += 1;
            let end = p.domain_end();
            let mut seen_positive = false;
            for k in 1..2000 {
                let r = end * k as f64 / 2000.0;
                concave &= p.second_fd(r) <= tol::CONCAVITY;
                if let Ok(c) = warped_curvature(&p, r) {
                    curvature_ok &= c >= -tol::CURVATURE_SIGN;
                    seen_positive |= c > 0.0;
                }
            }
            positive &= seen_positive;
        }
    }
    let rejects = build_smoothing(1.0, 1.0, 0.01).is_err();
    outcome(
        built == 100 && concave && curvature_ok && positive && rejects,
        format!("{built}/100 built; f'' <= 0: {concave}; curvature >= 0: {curvature_ok}; positive somewhere: {positive}; t = 1 rejected: {rejects}"),
    )
}

fn planar(rng: &mut ChaCha8Rng, n: usize) -> PointedSample {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)))
        .collect();
    let d = pts
        .iter()
        .map(|a| pts.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).collect())
        .collect();
    PointedSample::new(d, rng.random_range(0..n)).unwrap()
}

fn gromov_hausdorff() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut symmetric = true;
    let mut triangle = true;
    for _ in 0..100 {
        let s: Vec<PointedSample> = (0..3)
            .map(|_| {
                let n = rng.random_range(1..=6);
                planar(&mut rng, n)
            })
            .collect();
        let g = |i: usize, j: usize| gh_distance_upper(&s[i], &s[j]).unwrap();
        symmetric &= g(0, 1) == g(1, 0);
        triangle &= g(0, 2) <= g(0, 1) + g(1, 2) + tol::GH_TRIANGLE;
    }
    let mut relabel_zero = true;
    for n in 1..=8 {
        let a = planar(&mut rng, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                d[perm[i]][perm[j]] = a.d(i, j);
            }
        }
        let b = PointedSample::new(d, perm[a.basepoint]).unwrap();
        relabel_zero &= gh_distance_upper(&a, &b).unwrap() == 0.0;
    }
    let limit = PointedSample::on_line(&[0.0, 1.0, 2.0, 5.0], 0)
        .unwrap()
        .with_singular(vec![1])
        .unwrap();
    let id: Vec<(usize, usize)> = (0..4).map(|i| (i, i)).collect();
    let seq = vec![limit.clone(); 3];
    let constant = geometric_convergence_check(&seq, &limit, 3.0, 1e-3, &vec![id.clone(); 3])
        .unwrap()
        .passed;
    let mut dropped = seq.clone();
    dropped[1].singular.clear();
    let r = geometric_convergence_check(&dropped, &limit, 3.0, 1e-3, &vec![id; 3]).unwrap();
    let marks_fail = !r.terms[1].marks_ok && r.terms[1].basepoint_ok && r.terms[1].ball_ok && r.terms[0].passed;
    outcome(
        symmetric && triangle && relabel_zero && constant && marks_fail,
        format!("symmetric {symmetric}; triangle {triangle}; relabelings zero {relabel_zero}; constant sequence passes {constant}; dropped mark fails singular item {marks_fail}"),
    )
}

fn dehn_table() -> Outcome {
    let q = |a: i64, b: i64| Real::Exact(Ratio::new(a, b));
    let mut rows: Vec<(DehnCoefficient, Option<f64>, &str)> = vec![
        (DehnCoefficient::Infinity, Some(0.0), "Complete"),
        (DehnCoefficient::new(1, 0), Some(TAU), "ManifoldFilling"),
        (DehnCoefficient::new(0, 1), Some(TAU), "ManifoldFilling"),
        (DehnCoefficient::new(5, 3), Some(TAU), "ManifoldFilling"),
        (DehnCoefficient::new(-7, 2), Some(TAU), "ManifoldFilling"),
        (DehnCoefficient::new(2, 4), Some(PI), "ConeFilling"),
        (DehnCoefficient::new(6, 0), Some(TAU / 6.0), "ConeFilling"),
        (DehnCoefficient::new(q(3, 2), q(1, 2)), Some(2.0 * TAU), "ConeFilling"),
        // slope 2/1, angle 2π·2/0.5
        (DehnCoefficient::new(0.5, 0.25), Some(4.0 * TAU), "ConeFilling"),
        (DehnCoefficient::irrational(2f64.sqrt(), 1.0), None, "DehnTypeSingular"),
        (DehnCoefficient::irrational(PI, 2.0), None, "DehnTypeSingular"),
        (DehnCoefficient::new(1.0, 2f64.sqrt()), None, "DehnTypeSingular"),
    ];
    let ns = [2u32, 3];
    for t in [q(0, 1), q(1, 3), q(1, 2), q(1, 1)] {
        let tf = *t_ratio(&t).numer() as f64 / *t_ratio(&t).denom() as f64;
        for (c, n) in angle_schedule(&ns, t).unwrap().into_iter().zip(ns) {
            let kind = if tf == 0.0 { "Complete" } else { "ConeFilling" };
            let angle = TAU / n as f64 * tf;
            rows.push((c, Some(angle), kind));
        }
    }
    let total = rows.len();
    let mut good = 0;
    let mut bad = Vec::new();
    for (c, angle, kind) in &rows {
        let Ok(f) = classify_filling(c) else {
            bad.push(c.to_string());
            continue;
        };
        let name = match f {
            FillingType::Complete => "Complete",
            FillingType::ManifoldFilling { .. } => "ManifoldFilling",
            FillingType::ConeFilling { .. } => "ConeFilling",
            FillingType::DehnTypeSingular => "DehnTypeSingular",
        };
        let angle_ok = match (angle, f.cone_angle()) {
            (Some(a), Some(b)) => (a - b).abs() < tol::CONE_ANGLE,
            (None, None) => true,
            _ => false,
        };
        if name == *kind && angle_ok {
            good += 1;
        } else {
            bad.push(format!("{c} -> {f:?}"));
        }
    }
    outcome(
        good == total && total == 20,
        format!("{good}/{total} coefficients classified with matching cone angles; mismatches {bad:?}"),
    )
}

fn t_ratio(t: &Real) -> Ratio<i64> {
    match t {
        Real::Exact(r) => *r,
        Real::Approx(_) => unreachable!(),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Chebyshev identities", chebyshev),
        ("hyperbolic ball volume", ball_volumes),
        ("Dirichlet Z3 and screw fixtures", dirichlet_fixtures),
        ("Bishop-Gromov monotonicity", bishop_gromov),
        ("Euclidean triples and Margulis types", euclidean),
        ("covering pipeline on the flat torus grid", covering),
        ("constants ledger", constants_ledger),
        ("concave smoothing", smoothing),
        ("Hausdorff-Gromov and bilipschitz", gromov_hausdorff),
        ("Dehn classification table", dehn_table),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
