use fgbeam::benchmarks::{grading_index, G_VALUES, GRADINGS, POWER_INDICES};
use fgbeam::material::{shear_modulus, E_ALUMINA, E_ALUMINIUM};
use fgbeam::{FgError, FgMaterial, GradingKind, QuadratureSpec, Section, SectionGeometry};
use nalgebra::Matrix3;

fn all_sections() -> Vec<(GradingKind, f64, Section)> {
    GRADINGS
        .iter()
        .flat_map(|&g| POWER_INDICES.iter().map(move |&p| (g, p)))
        .map(|(g, p)| (g, p, Section::benchmark(g, p).unwrap()))
        .collect()
}

#[test]
fn type_c_core_fraction() {
    let m = FgMaterial::benchmark(GradingKind::TypeC, 2.0);
    assert!((m.volume_fraction(0.0).unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn type_a_linear_modulus_at_mid_height() {
    let m = FgMaterial::benchmark(GradingKind::TypeA, 1.0);
    assert!((m.youngs_modulus(0.0).unwrap() - 225_000.0).abs() < 1e-6);
}

#[test]
fn modulus_is_continuous_across_interfaces() {
    for kind in [GradingKind::TypeB, GradingKind::TypeC] {
        // p = 0 puts pure ceramic against the metal face by definition.
        for p in POWER_INDICES.into_iter().filter(|&p| p > 0.0) {
            let m = FgMaterial::benchmark(kind, p);
            for (layer, &y) in m.breakpoints.iter().enumerate().skip(1).take(2) {
                let below = m.modulus_in_layer(layer - 1, y);
                let above = m.modulus_in_layer(layer, y);
                assert!((below - above).abs() <= 1e-9 * E_ALUMINA, "{kind} p={p} y={y}: {below} vs {above}");
            }
        }
    }
}

#[test]
fn moduli_stay_between_constituents() {
    for (_, _, s) in all_sections() {
        for k in 0..=200 {
            let y = -100.0 + k as f64;
            let e = s.youngs_modulus(y).unwrap();
            assert!((E_ALUMINIUM - 1e-9..=E_ALUMINA + 1e-9).contains(&e));
        }
    }
}

#[test]
fn out_of_thickness_is_an_error() {
    let s = Section::benchmark(GradingKind::TypeB, 1.0).unwrap();
    assert!(matches!(s.shear_shape(100.5), Err(FgError::OutOfThickness { .. })));
    assert!(matches!(s.youngs_modulus(-101.0), Err(FgError::OutOfThickness { .. })));
}

#[test]
fn stiffness_times_flexibility_is_identity() {
    for (kind, p, s) in all_sections() {
        let c = s.constants();
        let err = (c.dn * c.flex - Matrix3::identity()).amax();
        assert!(err < 1e-10, "{kind} p={p}: {err:e}");
    }
}

#[test]
fn shear_shapes_vanish_on_both_faces() {
    for (kind, p, s) in all_sections() {
        let c = s.constants();
        // Scale: S is of order 1/(b h).
        let scale = 1.0 / (s.width() * s.height());
        for y in [-100.0, 100.0] {
            let (sw, st) = s.shear_shape(y).unwrap();
            assert!(sw.abs() < 1e-9 * scale && st.abs() < 1e-9 * scale, "{kind} p={p} y={y}: {sw:e} {st:e} {:?}", c.g());
        }
    }
}

#[test]
fn shear_shapes_carry_unit_resultant() {
    let rule = fgbeam::quadrature::GaussLegendre::new(48);
    for (kind, p, s) in all_sections() {
        let (mut iw, mut it) = (0.0, 0.0);
        for (layer, (a, b)) in s.material().layers().enumerate() {
            iw += rule.integrate_graded(a, b, |y| s.shear_shape_in_layer(layer, y).0);
            it += rule.integrate_graded(a, b, |y| s.shear_shape_in_layer(layer, y).1);
        }
        let (iw, it) = (s.width() * iw, s.width() * it);
        assert!((iw - 1.0).abs() < 1e-8 && (it - 1.0).abs() < 1e-8, "{kind} p={p}: {iw} {it}");
    }
}

#[test]
fn homogeneous_traditional_shear_stiffness() {
    let e = 210_000.0;
    let s = Section::new(
        SectionGeometry::new(50.0, FgMaterial::homogeneous(e, 0.3, 200.0).unwrap()).unwrap(),
        QuadratureSpec::default(),
    )
    .unwrap();
    let expected = 8.0 * shear_modulus(e, 0.3) * 50.0 * 200.0 / 15.0;
    assert!((s.constants().ds_hat - expected).abs() < 1e-10 * expected);
}

#[test]
fn doubling_quadrature_leaves_constants_unchanged() {
    let close = |a: f64, b: f64, scale: f64| (a - b).abs() <= 1e-9 * scale;
    for kind in GRADINGS {
        for p in POWER_INDICES {
            let geom = SectionGeometry::benchmark(kind, p);
            let base = Section::new(geom.clone(), QuadratureSpec { points_per_layer: 64 }).unwrap();
            let fine = Section::new(geom, QuadratureSpec { points_per_layer: 128 }).unwrap();
            let (a, b) = (base.constants(), fine.constants());
            let dn_scale = a.dn.amax();
            for (x, y) in a.dn.iter().zip(b.dn.iter()) {
                assert!(close(*x, *y, dn_scale), "{kind} p={p} dn");
            }
            assert!(close(a.ds, b.ds, a.ds), "{kind} p={p} ds");
            assert!(close(a.ds_hat, b.ds_hat, a.ds_hat), "{kind} p={p} ds_hat");
            assert!(close(a.g(), b.g(), a.g().abs()), "{kind} p={p} g");
            assert!(close(a.field.a1, b.field.a1, a.field.a1.abs().max(a.g().abs())), "{kind} p={p} a1");
        }
    }
}

#[test]
fn characteristic_constants_match_reference() {
    for (kind, p, s) in all_sections() {
        let i = POWER_INDICES.iter().position(|&q| q == p).unwrap();
        let published = G_VALUES[grading_index(kind)][i];
        let g = s.constants().g();
        assert!((g - published).abs() <= 1e-4, "{kind} p={p}: {g} vs {published}");
    }
}
