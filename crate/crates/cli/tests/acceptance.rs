//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, non-zero exit on any failure.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::{Command, ExitCode};
use std::time::Instant;

use qbounds_core::detector::{
    bloch_evolve, bloch_gradient, density_matrix, kossakowski, lindblad_rhs, stat_model,
};
use qbounds_core::fisher::{analytic_two_param, fisher_bundle};
use qbounds_core::linalg::{
    eigvalsh_real, trace_norm, ComplexMatrix, HermitianMatrix, RealMatrix, C64,
};
use qbounds_core::sdp::{
    embed_complex, real_embed, solve, BlockMatrix, LmiProblem, SdpOptions, SolverStatus,
};
use qbounds_core::sweep::{detect_crossover, figure_config, run_sweep, SweepResult, SweepVariable};
use qbounds_core::variational::{detector_report, hcrb, BoundReport};
use qbounds_core::{DetectorParams, Param, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO: [Param; 2] = [Param::Theta, Param::Phi];
const THREE: [Param; 3] = [Param::Theta, Param::Phi, Param::AInv];

/// Figure-level tolerance on thresholds quoted in the text.
const THRESHOLD_TOL: f64 = 0.05;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    lo + (hi - lo) * i as f64 / (n - 1) as f64
}

fn scale_of(r: &BoundReport) -> f64 {
    [r.c_sld, r.c_rld, r.c_upper, r.c_hcrb, r.c_nagaoka]
        .iter()
        .flatten()
        .fold(0.0, |a: f64, b| a.max(b.abs()))
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn random_point(rng: &mut ChaCha8Rng, bounded: bool) -> DetectorParams {
    let scenario = if bounded {
        Scenario::Bounded {
            z: rng.gen_range(0.2..2.0),
        }
    } else {
        Scenario::Unbounded
    };
    DetectorParams::new(
        rng.gen_range(0.3..PI - 0.3),
        rng.gen_range(-PI..PI),
        rng.gen_range(0.1..1.0),
        rng.gen_range(0.1..2.0),
        scenario,
    )
    .unwrap()
}

fn closed_form_equivalence() -> Outcome {
    let n = 10;
    let (mut m_s, mut m_r, mut m_h, mut m_n) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut failures = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = DetectorParams::unbounded(
                    lerp(0.3, PI - 0.3, i, n),
                    0.0,
                    lerp(0.1, 1.0, j, n),
                    lerp(0.1, 2.0, k, n),
                )
                .unwrap();
                let r = detector_report(&p, &TWO).unwrap();
                let a = analytic_two_param(&p).unwrap();
                match (r.c_sld, r.c_rld, r.c_hcrb, r.c_nagaoka) {
                    (Some(s), Some(rl), Some(h), Some(nb)) => {
                        m_s = m_s.max(rel(s, a.c_sld));
                        m_r = m_r.max(rel(rl, a.c_rld));
                        m_h = m_h.max(rel(h, a.c_hcrb));
                        m_n = m_n.max(rel(nb, a.c_nb));
                    }
                    _ => failures += 1,
                }
            }
        }
    }
    let pass = failures == 0 && m_s <= 1e-8 && m_r <= 1e-8 && m_h <= 1e-6 && m_n <= 1e-6;
    outcome(
        pass,
        format!(
            "1000 points; max rel dev SLD {m_s:.1e}, RLD {m_r:.1e} (tol 1e-8), HCRB {m_h:.1e}, NB {m_n:.1e} (tol 1e-6); {failures} incomplete"
        ),
    )
}

fn hierarchy_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut bad = Vec::new();
    for i in 0..500 {
        let p = random_point(&mut rng, i % 2 == 1);
        let params: &[Param] = if i % 4 < 2 { &TWO } else { &THREE };
        let r = detector_report(&p, params).unwrap();
        let (Some(s), Some(rl), Some(u), Some(h), Some(nb)) =
            (r.c_sld, r.c_rld, r.c_upper, r.c_hcrb, r.c_nagaoka)
        else {
            bad.push(format!(
                "{p:?} d={}: incomplete {:?}",
                params.len(),
                r.notes
            ));
            continue;
        };
        let tol = 1e-6 * scale_of(&r);
        let ok = nb >= h - tol
            && h >= s.max(rl) - tol
            && s <= h + tol
            && h <= u + tol
            && u <= 2.0 * s + tol;
        if !ok {
            bad.push(format!(
                "{p:?} d={}: S {s} R {rl} U {u} H {h} N {nb}",
                params.len()
            ));
        }
    }
    let detail = match bad.first() {
        None => "500 random points, both scenarios, d = 2 and 3".to_string(),
        Some(first) => format!(
            "{} of 500 points violate the chain; first: {first}",
            bad.len()
        ),
    };
    outcome(bad.is_empty(), detail)
}

fn single_parameter_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for q in THREE {
        for i in 0..50 {
            let p = random_point(&mut rng, i % 2 == 1);
            let m = stat_model(&p, &[q]).unwrap();
            let j = fisher_bundle(&m).unwrap().j_sld.matrix()[(0, 0)];
            match hcrb(&m) {
                Ok((h, _)) => worst = worst.max(rel(h, 1.0 / j)),
                Err(_) => failures += 1,
            }
        }
    }
    outcome(
        failures == 0 && worst <= 1e-7,
        format!("150 points (θ, φ, ã alone); max |hcrb − 1/J^S| rel {worst:.1e} (tol 1e-7); {failures} solver failures"),
    )
}

fn sweep_of(id: &str, points: usize) -> SweepResult {
    let mut cfg = figure_config(id).unwrap();
    cfg.sweep.points = points;
    run_sweep(&cfg).unwrap()
}

fn crossover_reproduction() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;

    let b = sweep_of("1b", 200);
    let xs = detect_crossover(&b, "sld", "rld").unwrap();
    let hit = xs.iter().any(|x| (x - 1.147).abs() <= THRESHOLD_TOL);
    pass &= hit;
    lines.push(format!(
        "1(b) SLD/RLD crossovers in τ {} (expected 1.147)",
        fmt_list(&xs)
    ));

    let c = sweep_of("1c", 400);
    let xs = detect_crossover(&c, "sld", "rld").unwrap();
    for want in [0.593, 1.443] {
        pass &= xs.iter().any(|x| (x - want).abs() <= THRESHOLD_TOL);
    }
    lines.push(format!(
        "1(c) SLD/RLD crossovers in θ {} (expected 0.593, 1.443)",
        fmt_list(&xs)
    ));

    let (rld, h, nb) = (
        c.column("rld").unwrap(),
        c.column("hcrb").unwrap(),
        c.column("nagaoka").unwrap(),
    );
    let mut worst = 0.0f64;
    for (i, row) in c.rows.iter().enumerate() {
        if row.sweep_value > 2.823 {
            let (r, h, n) = (rld[i].unwrap(), h[i].unwrap(), nb[i].unwrap());
            worst = worst.max(rel(r, h)).max(rel(n, h));
        }
    }
    pass &= worst <= 1e-2;
    lines.push(format!(
        "1(c) θ > 2.823: max rel spread of RLD, HCRB, NB {worst:.2e} (tol 1e-2)"
    ));
    outcome(pass, lines.join("; "))
}

fn boundary_improvement() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for (tau, a) in [(0.4, 0.2), (1.0, 1.0)] {
        for params in [&TWO[..], &THREE[..]] {
            let free = detector_report(
                &DetectorParams::unbounded(FRAC_PI_2, 0.0, a, tau).unwrap(),
                params,
            )
            .unwrap();
            let wall = detector_report(
                &DetectorParams::bounded(FRAC_PI_2, 0.0, a, tau, 0.5).unwrap(),
                params,
            )
            .unwrap();
            let (hf, nf) = (free.c_hcrb.unwrap(), free.c_nagaoka.unwrap());
            let (hw, nw) = (wall.c_hcrb.unwrap(), wall.c_nagaoka.unwrap());
            let ok = hf - hw >= -1e-6 && nf - nw >= -1e-6;
            pass &= ok;
            lines.push(format!(
                "(τ={tau}, ã={a}, d={}) HCRB {hf:.4} -> {hw:.4}, NB {nf:.4} -> {nw:.4}",
                params.len()
            ));
        }
    }
    outcome(pass, lines.join("; "))
}

fn rho_at(p: &DetectorParams) -> HermitianMatrix {
    density_matrix(&bloch_evolve(p).unwrap()).unwrap()
}

fn model_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_rhs, mut worst_grad) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let p = random_point(&mut rng, i % 2 == 1)
            .with_omega_eff(rng.gen_range(0.0..2.0))
            .unwrap();
        let h = 1e-5;
        let (mut lo, mut hi) = (p, p);
        lo.tau -= h;
        hi.tau += h;
        let fd = (rho_at(&hi).matrix() - rho_at(&lo).matrix()).scale_real(0.5 / h);
        let rhs = lindblad_rhs(&rho_at(&p), &kossakowski(&p).unwrap(), p.omega_eff).unwrap();
        worst_rhs = worst_rhs.max((&fd - &rhs).max_abs());
        for q in THREE {
            let h = 1e-6;
            let a = bloch_evolve(&p.with(q, p.get(q) - h)).unwrap().as_array();
            let b = bloch_evolve(&p.with(q, p.get(q) + h)).unwrap().as_array();
            let g = bloch_gradient(&p, q).unwrap();
            for k in 0..3 {
                worst_grad = worst_grad.max(((b[k] - a[k]) / (2.0 * h) - g[k]).abs());
            }
        }
    }
    let mut worst_limit = 0.0f64;
    for a in [0.1, 0.2, 0.5, 1.0] {
        let b = bloch_evolve(&DetectorParams::unbounded(1.0, 0.3, a, 50.0).unwrap()).unwrap();
        let w = [0.0, 0.0, -(PI * a).tanh()];
        for (x, y) in b.as_array().iter().zip(w) {
            worst_limit = worst_limit.max((x - y).abs());
        }
    }
    outcome(
        worst_rhs <= 1e-6 && worst_grad <= 1e-6 && worst_limit <= 1e-8,
        format!(
            "master equation residual {worst_rhs:.1e}, gradient residual {worst_grad:.1e} (tol 1e-6, 100 points); τ = 50 limit {worst_limit:.1e} (tol 1e-8)"
        ),
    )
}

fn uhlmann_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_anti = 0.0f64;
    let mut min_dtp = f64::INFINITY;
    let mut worst_closed = 0.0f64;
    for i in 0..200 {
        let p = random_point(&mut rng, i % 2 == 1);
        let f = fisher_bundle(&stat_model(&p, &THREE).unwrap()).unwrap();
        for u in 0..3 {
            worst_anti = worst_anti.max(f.uhlmann[(u, u)].abs());
            for v in 0..3 {
                worst_anti = worst_anti.max((f.uhlmann[(u, v)] + f.uhlmann[(v, u)]).abs());
            }
        }
        let d2 = fisher_bundle(&stat_model(&p, &TWO).unwrap())
            .unwrap()
            .uhlmann[(0, 1)];
        min_dtp = min_dtp.min(d2.abs());
        if matches!(p.scenario, Scenario::Unbounded) {
            let a = analytic_two_param(&p).unwrap();
            worst_closed = worst_closed.max((a.uhlmann[0][1] - d2).abs() / (1.0 + d2.abs()));
        }
    }
    outcome(
        worst_anti <= 1e-12 && min_dtp > 1e-6,
        format!(
            "antisymmetry residual {worst_anti:.1e} (tol 1e-12); min |D_θφ| {min_dtp:.2e} (> 1e-6); closed-form D_θφ deviation {worst_closed:.1e} (reported)"
        ),
    )
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    HermitianMatrix::from_hermitian_part(&a)
}

/// `min tr V` over real symmetric `V ⪰ Z`.
fn trace_dominating_problem(z: &HermitianMatrix) -> LmiProblem {
    let d = z.dim();
    let f0 = BlockMatrix::single(real_embed(z).into_matrix().scale(-1.0)).unwrap();
    let mut fi = Vec::new();
    let mut c = Vec::new();
    for i in 0..d {
        for j in i..d {
            let e = ComplexMatrix::from_fn(d, d, |a, b| {
                if (a, b) == (i, j) || (a, b) == (j, i) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            fi.push(BlockMatrix::single(embed_complex(&e)).unwrap());
            c.push(if i == j { 1.0 } else { 0.0 });
        }
    }
    LmiProblem::new(c, f0, fi)
        .unwrap()
        .with_trace_scales(&[0.5])
        .unwrap()
}

fn sdp_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_v = 0.0f64;
    let mut bad = 0;
    for k in 0..100 {
        let z = random_hermitian(&mut rng, 2 + k % 3);
        let want = trace_norm(&z.imag_part()).unwrap() + z.real_part().trace().re;
        match solve(&trace_dominating_problem(&z), &SdpOptions::default()) {
            Ok(s) if s.status == SolverStatus::Optimal => {
                worst_v = worst_v.max((s.objective_value - want).abs() / (1.0 + want.abs()))
            }
            _ => bad += 1,
        }
    }
    let mut worst_e = 0.0f64;
    for k in 0..100 {
        let n = 2 + k % 6;
        let a = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-2.0..2.0)).symmetric_part();
        let f0 = BlockMatrix::single(a.scale(-1.0)).unwrap();
        let f1 = BlockMatrix::single(RealMatrix::identity(n)).unwrap();
        let lmax = *eigvalsh_real(&a).last().unwrap();
        match solve(
            &LmiProblem::new(vec![1.0], f0, vec![f1]).unwrap(),
            &SdpOptions::default(),
        ) {
            Ok(s) if s.status == SolverStatus::Optimal => {
                worst_e = worst_e.max((s.y[0] - lmax).abs())
            }
            _ => bad += 1,
        }
    }
    outcome(
        bad == 0 && worst_v <= 1e-8 && worst_e <= 1e-8,
        format!("trace-dominating dev {worst_v:.1e}, max-eigenvalue dev {worst_e:.1e} (tol 1e-8); {bad} non-optimal"),
    )
}

fn three_parameter_claims() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for id in ["2a", "2b", "2c", "4a", "4b", "4c"] {
        let r = sweep_of(id, 100);
        let cols: Vec<_> = ["sld", "rld", "hcrb", "nagaoka"]
            .iter()
            .map(|c| r.column(c).unwrap())
            .collect();
        let (mut chain, mut strict, mut missing) = (0, 0, 0);
        let mut worst = 0.0f64;
        for (((s, rl), h), n) in cols[0].iter().zip(&cols[1]).zip(&cols[2]).zip(&cols[3]) {
            let (Some(s), Some(rl), Some(h), Some(n)) = (*s, *rl, *h, *n) else {
                missing += 1;
                continue;
            };
            let scale = s.max(rl).max(h).max(n);
            if !(n >= h - 1e-6 * scale && h >= s.max(rl) - 1e-6 * scale) {
                chain += 1;
            }
            if n - h < 1e-6 * scale {
                strict += 1;
            }
            worst = worst.max(rel(rl, h));
        }
        let ok = chain == 0 && strict == 0 && missing == 0 && worst <= 1e-2;
        pass &= ok;
        lines.push(format!(
            "{id}: chain {chain}, NHB not largest {strict}, missing {missing}, max |R−H|/H {worst:.1e}"
        ));
    }
    outcome(pass, lines.join("; "))
}

fn determinism() -> Outcome {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_qbounds"))
            .args(["figure", "--id", "1b", "--out-dir"])
            .arg(dir.path())
            .status()
            .unwrap();
        (
            status.success(),
            std::fs::read(dir.path().join("fig1b.csv")).unwrap_or_default(),
        )
    };
    let (ok_a, a) = run();
    let (ok_b, b) = run();
    outcome(
        ok_a && ok_b && !a.is_empty() && a == b,
        format!(
            "two runs of `figure --id 1b`: {} and {} bytes, identical: {}",
            a.len(),
            b.len(),
            a == b
        ),
    )
}

fn fig3b_regime() -> Outcome {
    let r = sweep_of("3b", 100);
    let (rld, h, nb) = (
        r.column("rld").unwrap(),
        r.column("hcrb").unwrap(),
        r.column("nagaoka").unwrap(),
    );
    let (mut wr, mut wn) = (0.0f64, 0.0f64);
    for (i, row) in r.rows.iter().enumerate() {
        if row.sweep_value < 0.172 {
            wr = wr.max(rel(rld[i].unwrap(), h[i].unwrap()));
            wn = wn.max(rel(nb[i].unwrap(), h[i].unwrap()));
        }
    }
    outcome(
        wr <= 1e-2 && wn <= 1e-2,
        format!("τ < 0.172: max |R−H|/H {wr:.2e}, max |N−H|/H {wn:.2e} (tol 1e-2)"),
    )
}

fn fig1a_monotone() -> Outcome {
    let r = sweep_of("1a", 60);
    assert_eq!(r.variable, SweepVariable::AInv);
    let mut rises = Vec::new();
    for (k, name) in r.columns.iter().enumerate() {
        for w in r.rows.windows(2) {
            if let (Some(a), Some(b)) = (w[0].values[k], w[1].values[k]) {
                if b > a * (1.0 + 1e-9) {
                    rises.push(format!("{name} at ã = {:.3}", w[1].sweep_value));
                    break;
                }
            }
        }
    }
    outcome(
        rises.is_empty(),
        if rises.is_empty() {
            "every column non-increasing in ã".into()
        } else {
            rises.join(", ")
        },
    )
}

fn figure_rows_satisfy_chain() -> Outcome {
    let mut bad = Vec::new();
    for id in qbounds_core::sweep::FIGURE_IDS {
        let r = sweep_of(id, 100);
        let n = r
            .rows
            .iter()
            .filter(|row| !row.hierarchy_ok || row.solver_failure)
            .count();
        if n > 0 {
            bad.push(format!("{id}: {n}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "all 12 figures, 100 rows each".into()
        } else {
            bad.join(", ")
        },
    )
}

type Check = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let checks: [Check; 13] = [
        ("C1 closed-form oracle equivalence", closed_form_equivalence),
        ("C2 hierarchy chain", hierarchy_chain),
        ("C3 single-parameter collapse", single_parameter_collapse),
        ("C4 crossover reproduction", crossover_reproduction),
        ("C5 boundary improvement", boundary_improvement),
        ("C6 model consistency", model_consistency),
        ("C7 Uhlmann curvature structure", uhlmann_structure),
        ("C8 SDP solver unit oracle", sdp_oracle),
        ("C9 three-parameter figure claims", three_parameter_claims),
        ("C10 determinism", determinism),
        ("I1 Fig. 3(b) small-τ regime", fig3b_regime),
        ("I2 Fig. 1(a) monotone in ã", fig1a_monotone),
        (
            "I3 figure rows satisfy the chain",
            figure_rows_satisfy_chain,
        ),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let start = Instant::now();
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] {name}: {} ({:.1}s)",
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
