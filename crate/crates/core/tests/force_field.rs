use std::sync::Arc;

use fgbeam::assembly::{solve, BeamModel, BoundaryCase, ElementKind, LoadCase, Solution};
use fgbeam::benchmarks::{benchmark_model, CANTILEVER_LENGTH, GRADINGS, POWER_INDICES, TIP_LOAD};
use fgbeam::pfts::{Beta, ForceFieldBasis, NodalForces, ShearModel};
use fgbeam::{GradingKind, Section};

fn section(kind: GradingKind, p: f64) -> Arc<Section> {
    Arc::new(Section::benchmark(kind, p).unwrap())
}

fn composite_simpson(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// A generic force state: unit-scaled parameters plus a uniform load.
fn sample_state(basis: &ForceFieldBasis) -> (Beta, f64) {
    let l = basis.length();
    (Beta::from_column_slice(&[1.0e3, -2.0e5, 3.0e7, 4.0e6, -5.0e6]), 1.0e5 / l)
}

fn solved(kind: GradingKind, p: f64, boundary: BoundaryCase, element: ElementKind, n: usize) -> Solution {
    solve(&benchmark_model(section(kind, p), boundary, element, n).unwrap()).unwrap()
}

#[test]
fn zero_state_has_no_forces_or_tau() {
    let basis = ForceFieldBasis::new(&section(GradingKind::TypeB, 5.0), ShearModel::Modified, 1000.0).unwrap();
    let r = basis.resultant_fields(&Beta::zeros(), 0.0, 400.0).unwrap();
    assert_eq!([r.axial, r.mw, r.mt, r.qt, r.moment, r.shear], [0.0; 6]);
    assert_eq!(basis.tau_parameters(&Beta::zeros(), 0.0, 400.0).unwrap().amax(), 0.0);
}

#[test]
fn field_equations_hold_along_the_element() {
    for kind in GRADINGS {
        for p in POWER_INDICES {
            let s = section(kind, p);
            let basis = ForceFieldBasis::new(&s, ShearModel::Modified, 1000.0).unwrap();
            let (beta, q0) = sample_state(&basis);
            let flex = s.constants().flex;
            let ds = basis.shear_stiffness();
            let h = 0.05;
            let at = |x: f64| basis.resultant_fields(&beta, q0, x).unwrap();
            let d = |f: &dyn Fn(f64) -> f64, x: f64| (8.0 * (f(x + h) - f(x - h)) - f(x + 2.0 * h) + f(x - 2.0 * h)) / (12.0 * h);
            let mut scale: f64 = 0.0;
            let mut worst: f64 = 0.0;
            for k in 0..50 {
                let x = 10.0 + 980.0 * k as f64 / 49.0;
                let r = at(x);
                scale = scale.max(r.moment.abs()).max(r.shear.abs() * 1000.0);
                let kappa = flex * r.sigma();
                let residuals = [
                    d(&|x| at(x).axial, x) * 1000.0,
                    (d(&|x| at(x).moment, x) - r.shear) * 1000.0,
                    (d(&|x| at(x).shear, x) + q0) * 1e6,
                    (r.mw_x + r.qt - r.shear) * 1000.0,
                    (d(&|x| at(x).mw, x) - r.mw_x) * 1000.0,
                    // Shear compatibility: D_s (κ_θ − κ_w) balances Q_θ,x.
                    (ds * (kappa[2] - kappa[1]) - d(&|x| at(x).qt, x)) * 1000.0,
                ];
                worst = residuals.iter().fold(worst, |m, r| m.max(r.abs()));
            }
            assert!(worst < 1e-8 * scale, "{kind} p={p}: {worst:e} vs {scale:e}");
        }
    }
}

#[test]
fn tau_parameters_sum_to_moment_slope() {
    let sol = solved(GradingKind::TypeC, 5.0, BoundaryCase::CC, ElementKind::Pfts, 1);
    let h = 1e-2;
    for k in 1..=20 {
        let x = 2000.0 * k as f64 / 21.0;
        let tau = sol.tau_parameters(x).unwrap();
        let dm = (sol.resultants(x + h).unwrap().moment - sol.resultants(x - h).unwrap().moment) / (2.0 * h);
        assert!((tau.sum() - dm).abs() < 1e-6 * dm.abs().max(1e3), "x={x}: {} vs {dm}", tau.sum());
    }
}

#[test]
fn clamped_uniform_shear_force() {
    let sol = solved(GradingKind::TypeA, 0.0, BoundaryCase::CC, ElementKind::Pfts, 1);
    let q = sol.resultants(1500.0).unwrap().shear;
    assert!((q.abs() - 2.5e6).abs() < 1e-6 * 2.5e6, "{q}");
}

#[test]
fn axial_displacement_matches_quadrature() {
    for kind in GRADINGS {
        let s = section(kind, 5.0);
        let basis = ForceFieldBasis::new(&s, ShearModel::Modified, 1000.0).unwrap();
        let (beta, q0) = sample_state(&basis);
        let flex = s.constants().flex;
        let x = 1000.0 / 3.0;
        let shapes = basis.displacement_shapes(x).unwrap();
        let closed = (shapes.rows * beta + shapes.load * q0)[0];
        let eps0 = |t: f64| (flex * basis.resultant_fields(&beta, q0, t).unwrap().sigma())[0];
        let oracle = composite_simpson(0.0, x, 20_000, eps0);
        assert!((closed - oracle).abs() < 1e-9 * oracle.abs(), "{kind}: {closed} vs {oracle}");
    }
}

#[test]
fn transverse_displacement_matches_nested_quadrature() {
    for kind in GRADINGS {
        let s = section(kind, 5.0);
        let l = 1000.0;
        let basis = ForceFieldBasis::new(&s, ShearModel::Modified, l).unwrap();
        let (beta, q0) = sample_state(&basis);
        let flex = s.constants().flex;
        let shapes = basis.displacement_shapes(l).unwrap();
        let closed = (shapes.rows * beta + shapes.load * q0)[1];
        // w(L) = −∫∫κ_w = −∫ (L − t) κ_w(t) dt
        let integrand = |t: f64| -(l - t) * (flex * basis.resultant_fields(&beta, q0, t).unwrap().sigma())[1];
        let oracle = composite_simpson(0.0, l, 40_000, integrand);
        assert!((closed - oracle).abs() < 1e-8 * oracle.abs(), "{kind}: {closed} vs {oracle}");
    }
}

#[test]
fn shapes_vanish_at_the_start_node() {
    let basis = ForceFieldBasis::new(&section(GradingKind::TypeC, 10.0), ShearModel::Traditional, 700.0).unwrap();
    let d = basis.displacement_shapes(0.0).unwrap();
    assert_eq!(d.rows.amax(), 0.0);
    assert_eq!(d.load.amax(), 0.0);
}

#[test]
fn element_system_is_regular() {
    let s = section(GradingKind::TypeB, 5.0);
    for l in [10.0, 250.0, 1000.0, 2000.0] {
        let basis = ForceFieldBasis::new(&s, ShearModel::Modified, l).unwrap();
        let sys = basis.element_system(0.0, NodalForces::default(), NodalForces::new(0.0, TIP_LOAD, 0.0));
        let sol = sys.solve_with_fixed(&[0, 1, 2, 3]).unwrap();
        assert!(sol.end[1].is_finite());
    }
}

#[test]
fn single_element_cantilever_tips() {
    for (element, expected) in [(ElementKind::Pfts, 45.102), (ElementKind::PftsT, 45.088)] {
        let w = solved(GradingKind::TypeB, 5.0, BoundaryCase::CF, element, 1).reported_deflection().unwrap();
        assert!((w - expected).abs() < 1e-3 * expected, "{element}: {w}");
    }
}

#[test]
fn clamped_midspan_through_two_elements() {
    let w = solved(GradingKind::TypeC, 5.0, BoundaryCase::CC, ElementKind::Pfts, 2).reported_deflection().unwrap();
    assert!((w - 50.606).abs() < 1e-3 * 50.606, "{w}");
}

#[test]
fn cantilever_statics() {
    let sol = solved(GradingKind::TypeB, 1.0, BoundaryCase::CF, ElementKind::Pfts, 1);
    for x in [0.0, 300.0, 1000.0] {
        let r = sol.resultants(x).unwrap();
        assert!(r.axial.abs() < 1e-8 * TIP_LOAD);
        assert!((r.shear.abs() - TIP_LOAD).abs() < 1e-8 * TIP_LOAD);
    }
    let m0 = sol.resultants(0.0).unwrap().moment;
    assert!((m0.abs() - TIP_LOAD * CANTILEVER_LENGTH).abs() < 1e-8 * TIP_LOAD * CANTILEVER_LENGTH);
}

#[test]
fn simply_supported_midspan_has_no_shear() {
    let sol = solved(GradingKind::TypeC, 5.0, BoundaryCase::SS, ElementKind::Pfts, 2);
    let r = sol.resultants(1000.0).unwrap();
    assert!(r.shear.abs() < 1e-8 * 5e6, "{}", r.shear);
}

#[test]
fn end_recoveries_agree() {
    for boundary in [BoundaryCase::CF, BoundaryCase::SS, BoundaryCase::CC] {
        for element in [ElementKind::Pfts, ElementKind::PftsT] {
            let sol = solved(GradingKind::TypeC, 10.0, boundary, element, 4);
            let scale = sol.reported_deflection().unwrap().abs();
            for x in [125.0, 500.0, sol.model().length] {
                let d = sol.displacement(x).unwrap();
                assert!((d.w - d.w_s).abs() < 1e-9 * scale, "{boundary} {element} x={x}: {} {}", d.w, d.w_s);
            }
        }
    }
}

#[test]
fn traditional_kind_is_the_modified_kind_with_its_stiffness() {
    let s = section(GradingKind::TypeB, 5.0);
    let (_, loads) = fgbeam::benchmarks::benchmark_loading(BoundaryCase::CF);
    let t = solve(&BeamModel::new(1000.0, 2, s.clone(), ElementKind::PftsT, loads.clone(), BoundaryCase::CF).unwrap()).unwrap();
    let m = BeamModel::new(1000.0, 2, s.clone(), ElementKind::Pfts, loads, BoundaryCase::CF)
        .unwrap()
        .with_shear_override(s.constants().ds_hat)
        .unwrap();
    let o = solve(&m).unwrap();
    assert_eq!(t.nodes(), o.nodes());
    assert_eq!(t.betas(), o.betas());
}

#[test]
fn mesh_refinement_does_not_change_force_based_results() {
    for boundary in [BoundaryCase::CF, BoundaryCase::SS, BoundaryCase::CC] {
        for element in [ElementKind::Pfts, ElementKind::PftsT] {
            // Midspan is a node only for even meshes; 1 element is skipped for S-S and C-C.
            let meshes: &[usize] = if boundary == BoundaryCase::CF { &[1, 2, 8] } else { &[2, 8] };
            let coarse = solved(GradingKind::TypeC, 5.0, boundary, element, meshes[0]);
            for &n in &meshes[1..] {
                let fine = solved(GradingKind::TypeC, 5.0, boundary, element, n);
                let ratio = n / meshes[0];
                // Rotations times L, so that every entry is a length.
                let l = coarse.model().length;
                let norm = |v: &fgbeam::pfts::NodeState| fgbeam::pfts::NodeState::new(v[0], v[1], l * v[2], l * v[3]);
                let scale = coarse.nodes().iter().fold(fgbeam::pfts::NodeState::zeros(), |m, a| m.sup(&norm(a).abs()));
                for (i, a) in coarse.nodes().iter().enumerate() {
                    let (a, b) = (norm(a), norm(&fine.nodes()[i * ratio]));
                    let ok = (a - b).amax() <= 1e-8 * scale.amax();
                    assert!(ok, "{boundary} {element} n={n} node {i}: {a:?} {b:?}");
                }
            }
        }
    }
}

#[test]
fn interior_nodes_transmit_forces() {
    for boundary in [BoundaryCase::CF, BoundaryCase::SS, BoundaryCase::CC] {
        let sol = solved(GradingKind::TypeB, 10.0, boundary, ElementKind::Pfts, 8);
        assert!(sol.force_continuity_residual().unwrap() < 1e-8);
    }
}

#[test]
fn reactions_balance_applied_loads() {
    for boundary in [BoundaryCase::CF, BoundaryCase::SS, BoundaryCase::CC] {
        for element in ElementKind::ALL {
            let sol = solved(GradingKind::TypeC, 1.0, boundary, element, 8);
            let r = sol.equilibrium_residual().unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-8), "{boundary} {element}: {r:?}");
        }
    }
}

#[test]
fn clamp_and_support_reactions() {
    let cf = solved(GradingKind::TypeA, 0.0, BoundaryCase::CF, ElementKind::Pfts, 1);
    let moment: f64 = cf.reactions().iter().filter(|r| r.dof >= 2).map(|r| r.value).sum();
    assert!((moment.abs() - TIP_LOAD * CANTILEVER_LENGTH).abs() < 1e-8 * TIP_LOAD * CANTILEVER_LENGTH);
    let ss = solved(GradingKind::TypeA, 0.0, BoundaryCase::SS, ElementKind::Pfts, 2);
    for r in ss.reactions().iter().filter(|r| r.dof == 1) {
        assert!((r.value.abs() - 5000.0 * 1000.0).abs() < 1e-8 * 5e6, "{r:?}");
    }
}

#[test]
fn doubling_loads_doubles_the_response() {
    for element in ElementKind::ALL {
        let base = benchmark_model(section(GradingKind::TypeB, 5.0), BoundaryCase::CC, element, 4).unwrap();
        let a = solve(&base).unwrap();
        let b = solve(&base.with_loads(base.loads.scaled(2.0))).unwrap();
        for (x, y) in a.nodes().iter().zip(b.nodes()) {
            assert!((2.0 * x - y).amax() <= 1e-12 * y.amax().max(f64::MIN_POSITIVE), "{element}");
        }
        if let (Some(p), Some(q)) = (a.betas(), b.betas()) {
            for (x, y) in p.iter().zip(q) {
                assert!((2.0 * x - y).amax() <= 1e-12 * y.amax(), "{element}");
            }
        }
    }
}

#[test]
fn unloaded_beam_stays_at_rest() {
    let model = benchmark_model(section(GradingKind::TypeC, 5.0), BoundaryCase::SS, ElementKind::Pfts, 2)
        .unwrap()
        .with_loads(LoadCase::default());
    let sol = solve(&model).unwrap();
    assert!(sol.nodes().iter().all(|n| n.amax() == 0.0));
    assert!(sol.resultants(700.0).unwrap().moment == 0.0);
}

#[test]
fn shear_flexible_kinds_exceed_bernoulli() {
    let s = section(GradingKind::TypeA, 0.0);
    let deb = solve(&benchmark_model(s.clone(), BoundaryCase::CC, ElementKind::Deb, 64).unwrap()).unwrap().reported_deflection().unwrap();
    assert!((deb - 16.447).abs() < 1e-3 * 16.447, "{deb}");
    for element in [ElementKind::Dfs, ElementKind::Dts, ElementKind::PftsT, ElementKind::Pfts] {
        let w = solve(&benchmark_model(s.clone(), BoundaryCase::CC, element, 64).unwrap()).unwrap().reported_deflection().unwrap();
        assert!(w > deb, "{element}: {w}");
    }
}

#[test]
fn stiffness_kind_with_equilibrium_shear_approaches_force_based() {
    let s = section(GradingKind::TypeC, 5.0);
    let pfts = solve(&benchmark_model(s.clone(), BoundaryCase::CF, ElementKind::Pfts, 1).unwrap()).unwrap().reported_deflection().unwrap();
    let dts = solve(
        &benchmark_model(s.clone(), BoundaryCase::CF, ElementKind::Dts, 256)
            .unwrap()
            .with_shear_override(s.constants().ds)
            .unwrap(),
    )
    .unwrap()
    .reported_deflection()
    .unwrap();
    assert!((dts - pfts).abs() < 5e-4 * pfts, "{dts} vs {pfts}");
}

#[test]
fn first_order_element_reaches_bernoulli_when_slender() {
    let s = section(GradingKind::TypeB, 1.0);
    // L/h = 50: the shear share of the tip deflection is about 3e-4. The
    // fully integrated element locks, so the mesh must keep L_e well below h.
    let length = 10_000.0;
    let loads = LoadCase::point(length, 1.0);
    let w = |kind| {
        solve(&BeamModel::new(length, 2048, s.clone(), kind, loads.clone(), BoundaryCase::CF).unwrap())
            .unwrap()
            .reported_deflection()
            .unwrap()
    };
    let (deb, dfs) = (w(ElementKind::Deb), w(ElementKind::Dfs));
    assert!((dfs - deb).abs() < 1e-3 * deb, "{dfs} vs {deb}");
}
