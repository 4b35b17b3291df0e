//! Acceptance suite. Run with `--nocapture` to see one line per criterion.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{max_abs, random_hermitian, random_vector};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use time_arrows::antilinear::AntilinearOperator;
use time_arrows::resonance::{all_canonical_states, canonical_state, Half};
use time_arrows::scenario::{lineshape, run_decay, Scenario, Table, TimeGrid};
use time_arrows::symmetry::{
    build_representation_with, check_conjugation_identities, CReading, S_MATRIX_TOL, SPIN_TOL,
};
use time_arrows::transform::DerivedTable;
use time_arrows::{
    apply_r, apply_r_twice, branch_for, build_representation, c_matrix, derive_table, evolve,
    make_pole, verify_group_relations, ArrowConvention, BranchId, Error, Kind, Regime, SpinJ,
    UnitaryGroup,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn ac1_table_one() -> Outcome {
    let start = Instant::now();
    for twice in 0..=4u32 {
        let s: i64 = if twice % 2 == 0 { 1 } else { -1 };
        for row in 1..=4i64 {
            let rep = build_representation(row, SpinJ::from_twice(twice)).map_err(|e| e.to_string())?;
            let report = verify_group_relations(&rep);
            ensure(report.all_hold, || format!("row {row} twice_j {twice}: {report:?}"))?;
            let dim = rep.dim();
            let id = AntilinearOperator::<i64>::identity(dim);
            let sig2 = rep.sigma().compose(rep.sigma());
            let r2 = rep.r_op().compose(rep.r_op());
            let t2 = rep.t_op().compose(rep.t_op());
            ensure(sig2 == id, || format!("Σ² ≠ I row {row} twice_j {twice}"))?;
            ensure(r2 == id.scaled(rep.eps_r()), || format!("R² row {row} twice_j {twice}"))?;
            ensure(t2 == id.scaled(rep.eps_t()), || format!("T² row {row} twice_j {twice}"))?;
            ensure(rep.sigma().compose(rep.r_op()) == *rep.t_op(), || {
                format!("T ≠ ΣR row {row} twice_j {twice}")
            })?;
            let expected = match row {
                1 => (s, s),
                2 => (-s, s),
                3 => (s, -s),
                _ => (-s, -s),
            };
            ensure((rep.eps_r(), rep.eps_t()) == expected, || {
                format!("signs row {row} twice_j {twice}: {:?}", (rep.eps_r(), rep.eps_t()))
            })?;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("20 cases exact, {:?}", start.elapsed()))
}

fn ac2_c_matrix() -> Outcome {
    let start = Instant::now();
    for twice in 0..=8u32 {
        let cm = c_matrix(SpinJ::from_twice(twice));
        let d = twice as usize + 1;
        let sign = if twice % 2 == 0 { 1 } else { -1 };
        // C has integer entries, so conj(C) = C
        ensure(&cm * &cm == DMatrix::<i64>::identity(d, d) * sign, || {
            format!("C·conj(C) twice_j {twice}")
        })?;
    }
    let diag = build_representation_with(1, SpinJ::from_twice(1), CReading::Diagonal)
        .map_err(|e| e.to_string())?;
    let r2 = diag.r_op().compose(diag.r_op());
    ensure(r2 == AntilinearOperator::<i64>::identity(2), || "diagonal R² should be +I".into())?;
    ensure(diag.eps_r() == -1, || "expected eps_R = -1 for j=1/2".into())?;
    ensure(!verify_group_relations(&diag).all_hold, || "diagonal reading should fail".into())?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("twice_j 0..=8, diagonal reading rejected, {:?}", start.elapsed()))
}

fn ac3_semigroup() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut compositions = 0usize;
    let mut violations = 0usize;
    for id in BranchId::ALL {
        let branch = id.branch();
        let into = |t: f64| match branch.domain().half() {
            Half::Nonneg => t,
            Half::Nonpos => -t,
        };
        for _ in 0..1000 {
            let pole = make_pole(rng.random_range(-5.0..5.0), rng.random_range(0.01..2.0))
                .map_err(|e| e.to_string())?;
            let (a, b) = (into(rng.random_range(0.0..20.0)), into(rng.random_range(0.0..20.0)));
            let fa = branch.factor(&pole, a).map_err(|e| e.to_string())?;
            let fb = branch.factor(&pole, b).map_err(|e| e.to_string())?;
            let fab = branch.factor(&pole, a + b).map_err(|e| e.to_string())?;
            ensure((fa * fb - fab).norm() < 1e-12, || format!("{id}: composition at {a}, {b}"))?;
            let expected = (f64::from(branch.growth_sign()) * pole.width() * a / 2.0).exp();
            ensure((fa.norm() - expected).abs() < 1e-12, || format!("{id}: modulus at {a}"))?;
            compositions += 1;

            let wrong = -into(rng.random_range(1e-9..100.0));
            ensure(
                matches!(branch.factor(&pole, wrong), Err(Error::DomainViolation { .. })),
                || format!("{id}: t = {wrong} accepted"),
            )?;
            violations += 1;
        }
    }
    // the same through the state-level entry point
    for s in all_canonical_states(make_pole(1.0, 0.2).unwrap()) {
        let half = branch_for(&s).domain().half();
        let wrong = match half {
            Half::Nonneg => -1.0,
            Half::Nonpos => 1.0,
        };
        ensure(matches!(evolve(&s, wrong), Err(Error::DomainViolation { .. })), || {
            "state-level domain check".into()
        })?;
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!(
        "{compositions} compositions, {violations}/{violations} violations raised, {:?}",
        start.elapsed()
    ))
}

fn ac4_group_contrast() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut checks = 0;
    for _ in 0..20 {
        let n = rng.random_range(1..=8);
        let h = random_hermitian(&mut rng, n);
        let g = UnitaryGroup::new(&h).map_err(|e| e.to_string())?;
        let id = DMatrix::<Complex64>::identity(n, n);
        for _ in 0..10 {
            let t1 = rng.random_range(-10.0..10.0);
            let t2 = rng.random_range(-10.0..10.0);
            let comp = g.propagator(t1) * g.propagator(t2) - g.propagator(t1 + t2);
            ensure(max_abs(&comp) < 1e-10, || format!("U(t1)U(t2) n={n}: {}", max_abs(&comp)))?;
            let inv = g.propagator(t1) * g.propagator(-t1) - &id;
            ensure(max_abs(&inv) < 1e-10, || format!("U(t)U(-t) n={n}"))?;
            let v = random_vector(&mut rng, n);
            let w = g.evolve(t1, &v).map_err(|e| e.to_string())?;
            ensure((w.norm() - v.norm()).abs() < 1e-10, || format!("norm n={n}"))?;
            checks += 1;
        }
    }
    // the semigroup has no counterpart of U(-t)
    let s = canonical_state(
        ArrowConvention::PREPARATION_REGISTRATION,
        Kind::Decaying,
        Regime::Zero,
        make_pole(1.0, 0.2).unwrap(),
    );
    ensure(evolve(&s, -1.0).is_err(), || "semigroup accepted negative time".into())?;
    Ok(format!("{checks} random (H, t1, t2) checks, dim <= 8"))
}

fn ac5_golden_tables() -> Outcome {
    for (arrow, fixture) in [
        (
            ArrowConvention::PREPARATION_REGISTRATION,
            include_str!("fixtures/table_preparation_registration.json"),
        ),
        (
            ArrowConvention::EXCITATION_DEEXCITATION,
            include_str!("fixtures/table_excitation_deexcitation.json"),
        ),
    ] {
        let derived = derive_table(arrow);
        ensure(derived.to_canonical_json() + "\n" == fixture, || {
            format!("{:?} differs from fixture", arrow.kind())
        })?;
        let parsed: DerivedTable = serde_json::from_str(fixture).map_err(|e| e.to_string())?;
        ensure(parsed == derived && parsed.cells.len() == 4, || "structural mismatch".into())?;
    }
    Ok("both tables byte-identical".into())
}

fn ac6_involution() -> Outcome {
    let mut n = 0;
    for s in all_canonical_states(make_pole(1.0, 0.2).unwrap()) {
        ensure(apply_r(&apply_r(&s)) == s, || format!("{} not restored", s.bracket()))?;
        for row in 2..=4 {
            for twice in 0..=4 {
                let rep = build_representation(row, SpinJ::from_twice(twice)).unwrap();
                let tw = apply_r_twice(&s, &rep).map_err(|e| e.to_string())?;
                ensure(tw.state == s && tw.factor == rep.eps_r(), || {
                    format!("{} row {row} twice_j {twice}: factor {}", s.bracket(), tw.factor)
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("8 states restored, {n} doubled-representation factors equal eps_R"))
}

fn ac7_conjugation() -> Outcome {
    let mut worst_spin: f64 = 0.0;
    for twice in 0..=4 {
        for row in 1..=4 {
            let rep = build_representation(row, SpinJ::from_twice(twice)).unwrap();
            let report = check_conjugation_identities(&rep);
            for chk in &report.spin {
                ensure(chk.result_is_linear && chk.max_residual < SPIN_TOL, || {
                    format!("R J_{} R⁻¹ row {row} twice_j {twice}: {}", chk.component, chk.max_residual)
                })?;
                worst_spin = worst_spin.max(chk.max_residual);
            }
        }
    }
    let report = check_conjugation_identities(&build_representation(1, SpinJ::from_twice(0)).unwrap());
    let m = &report.momentum;
    ensure(m.points == 201, || "momentum grid size".into())?;
    ensure(m.momentum_flip_residual < 1e-10 && m.momentum_operator_residual < 1e-10, || {
        format!("momentum flip {m:?}")
    })?;
    ensure(m.kinetic_residual < 1e-10 && m.kinetic_operator_residual < 1e-10, || {
        format!("kinetic {m:?}")
    })?;
    let s = &report.s_matrix;
    ensure(s.points == 1000, || "S grid size".into())?;
    ensure(
        s.max_unitarity_residual < S_MATRIX_TOL && s.max_inverse_residual < S_MATRIX_TOL,
        || format!("S-matrix {s:?}"),
    )?;
    ensure(SPIN_TOL <= 1e-12 && S_MATRIX_TOL <= 1e-12, || "tolerances loosened".into())?;
    Ok(format!(
        "spin residual {worst_spin:.1e}, momentum {:.1e}, |S| {:.1e}",
        m.momentum_flip_residual, s.max_unitarity_residual
    ))
}

fn ac8_decay_law() -> Outcome {
    let gamma = 0.2;
    let pole = make_pole(1.0, gamma).unwrap();
    let mut points = 0;
    for arrow in ArrowConvention::all() {
        let sc = Scenario::new(pole, arrow, Kind::Decaying, Regime::Zero, TimeGrid::new(0.0, 10.0, 11).unwrap());
        for p in run_decay(&sc).map_err(|e| e.to_string())? {
            ensure((p.survival - (-gamma * p.t).exp()).abs() < 1e-12, || {
                format!("{:?} t={}: {}", arrow.kind(), p.t, p.survival)
            })?;
            points += 1;
        }
        let last = run_decay(&sc).unwrap()[10].survival;
        ensure((last - 0.1353352832366127).abs() < 1e-12, || format!("e^-2: {last}"))?;
    }
    let peak = 2.0 / (std::f64::consts::PI * gamma);
    let pts = lineshape(&pole, &[1.0, 1.0 - gamma / 2.0, 1.0 + gamma / 2.0]).unwrap();
    ensure((pts[0].density - peak).abs() < 1e-12, || format!("peak {}", pts[0].density))?;
    ensure((pts[0].density - 3.1830988618379067).abs() < 1e-12, || "peak value".into())?;
    for p in &pts[1..] {
        ensure((p.density - peak / 2.0).abs() < 1e-12, || format!("HWHM {}", p.density))?;
    }
    Ok(format!("{points} survival points, peak and HWHM exact"))
}

fn cli(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_time-arrows"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), String::from_utf8(out.stdout).unwrap())
}

fn ac9_cli() -> Outcome {
    let (code, csv) = cli(&["decay", "--steps", "11"]);
    ensure(code == Some(0), || "decay csv exit".into())?;
    let t = Table::from_csv(&csv).map_err(|e| e.to_string())?;
    ensure(t.columns == ["t", "survival", "factor_real", "factor_imag"] && t.rows.len() == 11, || {
        "decay csv schema".into()
    })?;
    ensure(Table::from_csv(&t.to_csv().unwrap()).unwrap() == t, || "csv round trip".into())?;

    let (code, json) = cli(&["--format", "json", "decay", "--steps", "11"]);
    ensure(code == Some(0), || "decay json exit".into())?;
    let tj = Table::from_json(&json).map_err(|e| e.to_string())?;
    ensure(tj == t, || "csv and json tables differ".into())?;
    ensure(Table::from_json(&tj.to_json()).unwrap() == tj, || "json round trip".into())?;

    for arrow in ["prep", "exc"] {
        let (code, out) = cli(&["--format", "json", "table", "--arrow", arrow]);
        ensure(code == Some(0), || "table exit".into())?;
        let parsed: DerivedTable = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        ensure(parsed.to_canonical_json().trim_end() == out.trim_end(), || "table round trip".into())?;
        let (code, csv) = cli(&["--format", "csv", "table", "--arrow", arrow]);
        ensure(code == Some(0) && csv.lines().count() == 5, || "table csv".into())?;
    }

    let (code, out) = cli(&["--format", "json", "rep-check", "--row", "3", "--twice-j", "2"]);
    ensure(code == Some(0), || "rep-check exit".into())?;
    let doc: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    for key in ["row", "twice_j", "eps_r", "eps_t", "group_relations", "conjugation", "all_pass"] {
        ensure(doc.get(key).is_some(), || format!("rep-check missing {key}"))?;
    }
    let again: Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    ensure(again == doc && doc["all_pass"] == true, || "rep-check round trip".into())?;

    let (bad, _) = cli(&["decay", "--tmin", "-1", "--tmax", "1"]);
    let (bad_row, _) = cli(&["rep-check", "--row", "7", "--twice-j", "1"]);
    let (io, _) = cli(&["--out", "/nonexistent-dir/y/z.csv", "decay"]);
    ensure(bad == Some(2) && bad_row == Some(2) && io == Some(1), || {
        format!("exit codes {bad:?} {bad_row:?} {io:?}")
    })?;
    Ok("decay/table/rep-check round-trip, exit codes 0/2/1".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("AC1 representation signs (exact)", ac1_table_one),
        ("AC2 C-matrix consistency", ac2_c_matrix),
        ("AC3 semigroup suite", ac3_semigroup),
        ("AC4 unitary group contrast", ac4_group_contrast),
        ("AC5 golden tables", ac5_golden_tables),
        ("AC6 involution", ac6_involution),
        ("AC7 conjugation identities", ac7_conjugation),
        ("AC8 decay law and lineshape", ac8_decay_law),
        ("AC9 command line", ac9_cli),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                println!("[FAIL] {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}

