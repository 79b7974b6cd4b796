//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::sync::Arc;
use std::time::Instant;

use fgbeam::assembly::{solve, BoundaryCase, ElementKind, Solution};
use fgbeam::benchmarks::{
    self, benchmark_model, benchmark_plane_model, comparison_mesh, grading_index, Ladder, DEFLECTION_COLUMNS,
    GRADINGS, POWER_INDICES,
};
use fgbeam::material::shear_modulus;
use fgbeam::pfts::{Beta, ForceFieldBasis, NodeState, ShearModel};
use fgbeam::quadrature::GaussLegendre;
use fgbeam::recovery::{max_shear_stress, stress_profile, ShearRecovery};
use fgbeam::{FgMaterial, GradingKind, QuadratureSpec, Result, Section, SectionGeometry};
use nalgebra::Matrix3;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

fn cases() -> Vec<(GradingKind, usize, f64)> {
    GRADINGS.iter().flat_map(|&g| POWER_INDICES.iter().enumerate().map(move |(i, &p)| (g, i, p))).collect()
}

fn sections() -> Vec<Arc<Section>> {
    cases().iter().map(|&(g, _, p)| Arc::new(Section::benchmark(g, p).unwrap())).collect()
}

/// Runs `f` over `jobs` on all cores, keeping the order.
fn par_map<T: Sync, R: Send>(jobs: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let chunk = jobs.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn rel(value: f64, reference: f64) -> f64 {
    ((value - reference) / reference).abs()
}

fn deflection(section: &Arc<Section>, boundary: BoundaryCase, kind: ElementKind, n: usize) -> Result<f64> {
    solve(&benchmark_model(section.clone(), boundary, kind, n)?)?.reported_deflection()
}

fn characteristic_constants() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (g, i, p) in cases() {
        let value = Section::benchmark(g, p).unwrap().constants().g();
        worst = worst.max((value - benchmarks::G_VALUES[grading_index(g)][i]).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(worst <= 1e-4 && secs < 1.0, format!("15 values, worst |diff| {worst:.2e} (tol 1e-4), {secs:.3} s"))
}

fn single_element_exactness() -> Verdict {
    let mut worst_ref: f64 = 0.0;
    let mut worst_mesh: f64 = 0.0;
    let mut failures = Vec::new();
    for ladder in benchmarks::LADDERS {
        let section = Arc::new(Section::benchmark(ladder.grading, ladder.p).unwrap());
        for (col, kind) in [(3, ElementKind::PftsT), (4, ElementKind::Pfts)] {
            let one = solve(&benchmark_model(section.clone(), ladder.boundary, kind, 1).unwrap()).unwrap();
            let eight = solve(&benchmark_model(section.clone(), ladder.boundary, kind, 8).unwrap()).unwrap();
            let w = one.reported_deflection().unwrap();
            let e = rel(w, ladder.converged[col]);
            worst_ref = worst_ref.max(e);
            if e > 1e-3 {
                failures.push(format!("{}{} {} {kind}: {w:.4}", ladder.grading, ladder.p, ladder.boundary));
            }
            // Shared nodes x = 0 and x = L, plus the reported deflection.
            let (a, b) = (one.nodes(), eight.nodes());
            let mesh = [(a[0], b[0]), (a[1], b[8])]
                .iter()
                .map(|(p, q)| mesh_difference(p, q, ladder_length(&ladder)))
                .fold(rel(eight.reported_deflection().unwrap(), w), f64::max);
            worst_mesh = worst_mesh.max(mesh);
        }
    }
    Verdict::new(
        worst_ref <= 1e-3 && worst_mesh <= 1e-8 && failures.is_empty(),
        format!(
            "worst vs converged {:.4}% (tol 0.1%), 1 vs 8 elements {worst_mesh:.1e} (tol 1e-8){}",
            100.0 * worst_ref,
            if failures.is_empty() { String::new() } else { format!("; off: {}", failures.join(", ")) }
        ),
    )
}

fn ladder_length(ladder: &Ladder) -> f64 {
    benchmarks::benchmark_loading(ladder.boundary).0
}

/// Difference of two nodal states with rotations scaled by `length`,
/// relative to the larger state.
fn mesh_difference(a: &NodeState, b: &NodeState, length: f64) -> f64 {
    let norm = |v: &NodeState| NodeState::new(v[0], v[1], length * v[2], length * v[3]);
    let (a, b) = (norm(a), norm(b));
    let scale = a.amax().max(b.amax());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).amax() / scale
    }
}

/// Worst relative error of every element column against the printed table,
/// with an optional looser tolerance for DFS.
fn deflection_table(boundary: BoundaryCase, tol: f64, dfs_tol: f64) -> Verdict {
    let sections = sections();
    let published = benchmarks::deflections(boundary);
    let jobs: Vec<(usize, usize)> = (0..sections.len()).flat_map(|c| (0..DEFLECTION_COLUMNS.len()).map(move |k| (c, k))).collect();
    let values = par_map(&jobs, |&(c, k)| {
        let kind = DEFLECTION_COLUMNS[k];
        deflection(&sections[c], boundary, kind, comparison_mesh(kind, boundary)).unwrap()
    });
    let case_list = cases();
    let mut worst = [0.0f64; 5];
    let mut failures = Vec::new();
    for (&(c, k), &v) in jobs.iter().zip(&values) {
        let (g, i, p) = case_list[c];
        let reference = published[grading_index(g)][i][k];
        let e = rel(v, reference);
        worst[k] = worst[k].max(e);
        let limit = if DEFLECTION_COLUMNS[k] == ElementKind::Dfs { dfs_tol } else { tol };
        if e > limit {
            failures.push(format!("{g}{p} {}: {v:.4} vs {reference}", DEFLECTION_COLUMNS[k]));
        }
    }
    let summary: Vec<String> =
        DEFLECTION_COLUMNS.iter().zip(worst).map(|(k, w)| format!("{k} {:.3}%", 100.0 * w)).collect();
    Verdict::new(
        failures.is_empty(),
        format!(
            "75 entries, worst {}{}",
            summary.join(", "),
            if failures.is_empty() { String::new() } else { format!("; off: {}", failures.join(", ")) }
        ),
    )
}

fn peak_shear_table(boundary: BoundaryCase) -> (Vec<String>, [f64; 3]) {
    let sections = sections();
    let published = benchmarks::peak_shear(boundary).unwrap();
    let x = benchmarks::shear_section(boundary);
    let jobs: Vec<(usize, usize)> = (0..sections.len()).flat_map(|c| (0..3).map(move |k| (c, k))).collect();
    let case_list = cases();
    let values = par_map(&jobs, |&(c, k)| match k {
        0 | 1 => {
            let kind = if k == 0 { ElementKind::Dts } else { ElementKind::Pfts };
            let m = benchmark_model(sections[c].clone(), boundary, kind, comparison_mesh(kind, boundary)).unwrap();
            max_shear_stress(&solve(&m).unwrap(), x, ShearRecovery::default_for(kind).unwrap()).unwrap()
        }
        _ => {
            let (g, _, p) = case_list[c];
            let plane = benchmark_plane_model(g, p, boundary).unwrap().solve().unwrap();
            plane.stress_profile(x).unwrap().max_abs_tau()
        }
    });
    let limits = [0.02, 5e-3, 0.02];
    let labels = ["DTS", "PFTS", "Q4"];
    let mut worst = [0.0f64; 3];
    let mut failures = Vec::new();
    for (&(c, k), &v) in jobs.iter().zip(&values) {
        let (g, i, p) = case_list[c];
        let reference = published[grading_index(g)][i][k];
        let e = rel(v, reference);
        worst[k] = worst[k].max(e);
        if e > limits[k] {
            failures.push(format!("{} {g}{p} {}: {v:.3} vs {reference}", boundary, labels[k]));
        }
    }
    (failures, worst)
}

fn peak_shear() -> Verdict {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for boundary in [BoundaryCase::CF, BoundaryCase::CC] {
        let (f, w) = peak_shear_table(boundary);
        failures.extend(f);
        parts.push(format!(
            "{boundary}: DTS {:.2}%, PFTS {:.3}%, Q4 {:.2}%",
            100.0 * w[0],
            100.0 * w[1],
            100.0 * w[2]
        ));
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "{} (tol 2%, 0.5%, 2%){}",
            parts.join("; "),
            if failures.is_empty() { String::new() } else { format!("; off: {}", failures.join(", ")) }
        ),
    )
}

fn property_suite() -> Verdict {
    let mut checks: Vec<(&str, bool)> = Vec::new();
    let all: Vec<Section> = cases().iter().map(|&(g, _, p)| Section::benchmark(g, p).unwrap()).collect();

    let identity = all.iter().all(|s| (s.constants().dn * s.constants().flex - Matrix3::identity()).amax() < 1e-10);
    checks.push(("stiffness-flexibility identity", identity));

    let traction_free = all.iter().all(|s| {
        let scale = 1.0 / (s.width() * s.height());
        [s.material().bottom(), s.material().top()].iter().all(|&y| {
            let (a, b) = s.shear_shape(y).unwrap();
            a.abs() < 1e-9 * scale && b.abs() < 1e-9 * scale
        })
    });
    checks.push(("shear shapes vanish on the faces", traction_free));

    let rule = GaussLegendre::new(48);
    let unit = all.iter().all(|s| {
        let (mut iw, mut it) = (0.0, 0.0);
        for (layer, (a, b)) in s.material().layers().enumerate() {
            iw += rule.integrate_graded(a, b, |y| s.shear_shape_in_layer(layer, y).0);
            it += rule.integrate_graded(a, b, |y| s.shear_shape_in_layer(layer, y).1);
        }
        (s.width() * iw - 1.0).abs() < 1e-8 && (s.width() * it - 1.0).abs() < 1e-8
    });
    checks.push(("unit shear-shape resultant", unit));

    let e = 210_000.0;
    let homogeneous = Section::new(
        SectionGeometry::new(50.0, FgMaterial::homogeneous(e, 0.3, 200.0).unwrap()).unwrap(),
        QuadratureSpec::default(),
    )
    .unwrap();
    let expected = 8.0 * shear_modulus(e, 0.3) * 50.0 * 200.0 / 15.0;
    checks.push(("homogeneous shear stiffness 8GA/15", rel(homogeneous.constants().ds_hat, expected) < 1e-10));

    checks.push(("field equations", all.iter().all(field_residual_ok)));

    let closure = [BoundaryCase::CF, BoundaryCase::SS, BoundaryCase::CC].iter().all(|&b| {
        let sol = solved(GradingKind::TypeC, 10.0, b, ElementKind::Pfts, 4);
        let d = sol.displacement(sol.model().length).unwrap();
        let scale = sol.reported_deflection().unwrap().abs();
        (d.w - d.w_s).abs() < 1e-9 * scale
    });
    checks.push(("end displacement closure", closure));

    let resultant = [(BoundaryCase::CF, 500.0), (BoundaryCase::SS, 500.0), (BoundaryCase::CC, 1500.0)].iter().all(|&(b, x)| {
        let sol = solved(GradingKind::TypeB, 5.0, b, ElementKind::Pfts, 2);
        let q = sol.resultants(x).unwrap().shear;
        rel(stress_profile(&sol, x).unwrap().shear_resultant(), q) < 1e-3
    });
    checks.push(("shear-stress resultant", resultant));

    let linear = ElementKind::ALL.iter().all(|&kind| {
        let section = Arc::new(Section::benchmark(GradingKind::TypeB, 5.0).unwrap());
        let base = benchmark_model(section, BoundaryCase::CC, kind, 4).unwrap();
        let a = solve(&base).unwrap();
        let b = solve(&base.with_loads(base.loads.scaled(2.0))).unwrap();
        a.nodes().iter().zip(b.nodes()).all(|(x, y)| (2.0 * x - y).amax() <= 1e-12 * y.amax().max(f64::MIN_POSITIVE))
    });
    checks.push(("load-scaling linearity", linear));

    checks.push(("interface shear: smooth (PFTS) vs modulus-ratio (DTS)", interface_behaviour()));

    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Verdict::new(
        failed.is_empty(),
        if failed.is_empty() { format!("{} checks", checks.len()) } else { format!("failed: {}", failed.join(", ")) },
    )
}

fn solved(kind: GradingKind, p: f64, boundary: BoundaryCase, element: ElementKind, n: usize) -> Solution {
    let section = Arc::new(Section::benchmark(kind, p).unwrap());
    solve(&benchmark_model(section, boundary, element, n).unwrap()).unwrap()
}

fn field_residual_ok(s: &Section) -> bool {
    let basis = ForceFieldBasis::new(s, ShearModel::Modified, 1000.0).unwrap();
    let beta = Beta::from_column_slice(&[1.0e3, -2.0e5, 3.0e7, 4.0e6, -5.0e6]);
    let q0 = 100.0;
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
        for v in [
            d(&|x| at(x).axial, x) * 1000.0,
            (d(&|x| at(x).moment, x) - r.shear) * 1000.0,
            (d(&|x| at(x).shear, x) + q0) * 1e6,
            (r.mw_x + r.qt - r.shear) * 1000.0,
            (ds * (kappa[2] - kappa[1]) - d(&|x| at(x).qt, x)) * 1000.0,
        ] {
            worst = worst.max(v.abs());
        }
    }
    worst < 1e-8 * scale
}

fn interface_behaviour() -> bool {
    let pairs = |sol: &Solution| {
        let prof = stress_profile(sol, 500.0).unwrap();
        let peak = prof.max_abs_tau();
        let v: Vec<(f64, f64, f64)> = prof
            .ys
            .windows(2)
            .zip(prof.tau_xy.windows(2))
            .filter(|(y, _)| y[0] == y[1])
            .map(|(y, t)| (y[0], t[0], t[1]))
            .collect();
        (v, peak)
    };
    let smooth = [GradingKind::TypeB, GradingKind::TypeC].iter().all(|&g| {
        let (v, peak) = pairs(&solved(g, 5.0, BoundaryCase::CF, ElementKind::Pfts, 1));
        v.len() == 2 && v.iter().all(|(_, l, r)| (l - r).abs() <= 1e-6 * peak)
    });
    let ratio = [(GradingKind::TypeB, 5.0), (GradingKind::TypeC, 0.0)].iter().all(|&(g, p)| {
        let sol = solved(g, p, BoundaryCase::CF, ElementKind::Dts, 128);
        let m = sol.section().material().clone();
        let (v, peak) = pairs(&sol);
        let jump_seen = v.iter().any(|(_, l, r)| (l - r).abs() > 0.5 * peak);
        v.len() == 2
            && v.iter().all(|&(y, l, r)| {
                let layer = m.layer_of(y).unwrap();
                rel(l / r, m.modulus_in_layer(layer - 1, y) / m.modulus_in_layer(layer, y)) < 1e-9
            })
            && (p > 0.0 || jump_seen)
    });
    smooth && ratio
}

fn convergence_ladders() -> Verdict {
    let mut hits = 0;
    let mut total = 0;
    let mut misses = Vec::new();
    for (name, ladder) in [("cantilever B5", benchmarks::CANTILEVER_B5_LADDER), ("clamped C5", benchmarks::CLAMPED_C5_LADDER)] {
        let section = Arc::new(Section::benchmark(ladder.grading, ladder.p).unwrap());
        let jobs: Vec<(usize, usize, f64)> = ladder
            .rows
            .iter()
            .filter(|(n, _)| *n > 1)
            .flat_map(|(n, row)| row.iter().enumerate().filter_map(move |(k, v)| v.map(|v| (*n, k, v))))
            .collect();
        let values = par_map(&jobs, |&(n, k, _)| deflection(&section, ladder.boundary, DEFLECTION_COLUMNS[k], n).unwrap());
        for (&(n, k, reference), &v) in jobs.iter().zip(&values) {
            total += 1;
            if rel(v, reference) <= 5e-3 {
                hits += 1;
            } else {
                misses.push(format!("{name} {} n={n}: {v:.4} vs {reference}", DEFLECTION_COLUMNS[k]));
            }
        }
    }
    Verdict::new(
        hits >= 8,
        format!("{hits}/{total} interior entries within 0.5% (need 8); outside: {}", misses.join(", ")),
    )
}

fn main() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("characteristic constants g", characteristic_constants),
        ("single-element exactness", single_element_exactness),
        ("cantilever tip deflections", || deflection_table(BoundaryCase::CF, 2e-3, 2e-3)),
        ("supported mid-span deflections", || {
            let ss = deflection_table(BoundaryCase::SS, 2e-3, 2e-3);
            let cc = deflection_table(BoundaryCase::CC, 2e-3, 5e-3);
            Verdict::new(ss.passed && cc.passed, format!("S-S {}; C-C {}", ss.detail, cc.detail))
        }),
        ("peak transverse shear stress", peak_shear),
        ("property suite", property_suite),
        ("mesh convergence ladders", convergence_ladders),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = run();
        failed += usize::from(!v.passed);
        println!(
            "{} criterion {} ({name}): {} [{:.1} s]",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 7 criteria passed in {:.1} s", 7 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
