use chesswit::chessboard::{build_rho_222, build_rho_22d, is_ppt, pauli_coeffs, ChessParams222};
use chesswit::frgeom::{min_expectation_over_products, product_vector, random_product_state, start_rng};
use chesswit::montecarlo::{run_scan, sample_params_222, sample_stream, Distribution, ScanConfig};
use chesswit::tensorops::{QuditEmbedding, TripartiteDims};
use chesswit::witness::{build_witness, detect_222, detect_22d, expectation, fiber_minimum, Family, Geometry};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = ChessParams222> {
    let pos = (-1.0f64..1.0).prop_map(|e| 10f64.powf(e));
    let r = 0.0f64..=1.0;
    let phi = 0.0f64..std::f64::consts::TAU;
    (
        pos.clone(),
        pos.clone(),
        pos.clone(),
        pos,
        [r.clone(), r.clone(), r.clone(), r],
        [phi.clone(), phi.clone(), phi.clone(), phi],
    )
        .prop_map(|(a, b, c, d, r, phi)| ChessParams222::new(a, b, c, d, r, phi).unwrap())
}

#[test]
fn best_witness_is_negative_on_the_state_and_not_on_products() {
    let mut seen = 0;
    for i in 0..400 {
        let p = sample_params_222(&mut sample_stream(99, i), Distribution::Default);
        let rep = detect_222(&p).unwrap();
        if !rep.detected_any() {
            continue;
        }
        seen += 1;
        let best = rep.best();
        let w = build_witness(&best.best).unwrap();
        let rho = build_rho_222(&p).unwrap();
        let v = expectation(&w, &rho).unwrap();
        assert!((v - best.min).abs() < 1e-10, "{}: dense {v} vs {}", best.best, best.min);
        let m = min_expectation_over_products(&w, TripartiteDims::three_qubits(), 8, 100, i).unwrap();
        assert!(m.value > -1e-9, "{} negative on a product state", best.best);
        let mut rng = start_rng(i, 0);
        for _ in 0..20 {
            let s = product_vector(&random_product_state(&mut rng, 2));
            assert!(w.quadratic_form(&s).re > -1e-12);
        }
        if seen == 25 {
            break;
        }
    }
    assert_eq!(seen, 25);
}

#[test]
fn qubit_state_on_a_qudit_keeps_its_minima() {
    for i in 0..50 {
        let p = sample_params_222(&mut sample_stream(98, i), Distribution::Default);
        let q = p.to_22d();
        assert!(is_ppt(&build_rho_22d(&q).unwrap(), TripartiteDims::qubits_with(2), 1e-10).unwrap().ppt);
        let a = detect_222(&p).unwrap();
        let b = detect_22d(&q, None).unwrap();
        for f in Family::ALL {
            assert!((a.family(f).min - b.family(f).min).abs() < 1e-12, "{}", f.tag());
        }
    }
}

#[test]
fn scan_summary_is_consistent() {
    let cfg = ScanConfig::qubits(3000, 5);
    let mut records = Vec::new();
    let s = run_scan(&cfg, |r| records.push(r.clone())).unwrap();
    assert_eq!(s, run_scan(&cfg, |_| {}).unwrap());
    assert_eq!(s.samples, 3000);
    assert_eq!(records.len(), 3000);
    for g in Geometry::ALL {
        assert!(s.geometry(g).count <= s.any.count);
        let direct = records.iter().filter(|r| r.detected_by(g)).count() as u64;
        assert_eq!(direct, s.geometry(g).count);
    }
    let cone_only = records.iter().filter(|r| r.detected_by(Geometry::Cone) && !r.detected_by(Geometry::Polygon));
    assert_eq!(cone_only.count() as u64, s.and_not(Geometry::Cone, Geometry::Polygon).unwrap().count);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fiber_minimum_is_attained_by_the_dense_witness(p in params()) {
        let rho = build_rho_222(&p).unwrap();
        let c = pauli_coeffs(&p);
        for f in [Family::Conical, Family::CylindricalPrime, Family::Spherical] {
            let id = chesswit::witness::family_members(f)[7];
            let m = fiber_minimum(&c, &id).unwrap();
            let at = match m.angle.unwrap() {
                chesswit::witness::Angle::Psi(psi) => id.with_psi(psi),
                chesswit::witness::Angle::Sphere { eta, zeta } => id.with_sphere_angles(eta, zeta),
            };
            let v = expectation(&build_witness(&at).unwrap(), &rho).unwrap();
            prop_assert!((v - m.value).abs() < 1e-10, "{}: {} vs {}", at, v, m.value);
        }
    }

    #[test]
    fn explicit_embedding_matches_the_native_one(p in params()) {
        let q = p.to_22d();
        let native = detect_22d(&q, None).unwrap();
        let explicit = detect_22d(&q, Some(&[QuditEmbedding::new(2, 0, 1).unwrap()])).unwrap();
        for f in Family::ALL {
            prop_assert_eq!(native.family(f).min, explicit.family(f).min);
        }
    }
}
