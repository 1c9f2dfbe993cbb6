use erdyn::experiments::{
    noise_grid, run_noise_sensitivity, run_revealment, run_second_moment, run_sup_experiment, run_tail_experiment,
    run_union_bound, CellResult, Domain, ExperimentPlan,
};
use erdyn::spectral::{
    self, inverse_transform, noise_expectation_exact, noise_expectation_spectral, pivotal_identity_check,
    random::{random_increasing, random_table, random_up_set},
    transform, FunctionTable,
};
use erdyn::{simulate_trajectory, Error};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Command, Format};
use crate::output::{render, Provenance};
use crate::CliError;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub struct Context {
    pub format: Format,
    pub provenance: Provenance,
    pub plan: ExperimentPlan,
}

impl Context {
    fn emit<T: Serialize>(&self, rows: &[T], details: Option<Value>) -> Result<Vec<u8>, CliError> {
        render(self.format, &self.provenance, rows, details.as_ref())
    }
}

pub fn execute(command: &Command, ctx: &Context) -> Result<Vec<u8>, CliError> {
    match command {
        Command::Simulate { n, horizon, .. } => simulate(ctx, *n, *horizon),
        Command::Sup { n, beta, .. } => sup(ctx, n, beta),
        Command::Tails { n, lambda, big_a, .. } => tails(ctx, *n, *lambda, big_a),
        Command::Noise { n, a, eps, .. } => noise(ctx, *n, *a, eps.as_deref()),
        Command::SecondMoment { n, beta, .. } => second_moment(ctx, *n, *beta),
        Command::UnionBound { n, beta, .. } => union_bound(ctx, *n, *beta),
        Command::Reveal { n, threshold, .. } => reveal(ctx, n, *threshold),
        Command::SpectralCheck { m, p, .. } => spectral_check(ctx, *m, *p),
        Command::Replay { .. } => unreachable!("replay is resolved before dispatch"),
    }
}

fn simulate(ctx: &Context, n: u32, horizon: f64) -> Result<Vec<u8>, CliError> {
    let mut rng = ctx.plan.rng(Domain::Simulate, u64::from(n), 0);
    let traj = simulate_trajectory(n, horizon, &mut rng, &[])?;
    let rows: Vec<_> = traj.event_rows().collect();
    let details = json!({
        "n": n,
        "horizon": horizon,
        "initial_edges": traj.initial_edges,
        "final_edges": traj.final_edges,
        "initial_largest": traj.largest_path.initial(),
        "sup_largest": traj.sup_largest(),
        "events": traj.events.len(),
    });
    ctx.emit(&rows, Some(details))
}

#[derive(Serialize)]
struct SupCsv {
    experiment: &'static str,
    n: u32,
    beta: f64,
    estimate: f64,
    stderr: f64,
    replicas: u64,
    seed: u64,
    threshold: f64,
    estimate_t0: f64,
    stderr_t0: f64,
    median_normalized: f64,
    measure: f64,
    measure_stderr: f64,
    switches: f64,
    switches_stderr: f64,
}

fn sup(ctx: &Context, ns: &[u32], betas: &[f64]) -> Result<Vec<u8>, CliError> {
    let cells = run_sup_experiment(&ctx.plan, ns, betas)?;
    let mut rows = Vec::new();
    for cell in &cells {
        for r in &cell.rows {
            rows.push(SupCsv {
                experiment: "sup",
                n: r.n,
                beta: r.beta,
                estimate: r.exceed.estimate,
                stderr: r.exceed.stderr,
                replicas: r.exceed.replicas,
                seed: ctx.plan.seed,
                threshold: r.threshold,
                estimate_t0: r.exceed_at_zero.estimate,
                stderr_t0: r.exceed_at_zero.stderr,
                median_normalized: cell.median,
                measure: r.measure.estimate,
                measure_stderr: r.measure.stderr,
                switches: r.switches.estimate,
                switches_stderr: r.switches.stderr,
            });
        }
    }
    let details = json!({
        "normalized_sup": cells.iter().map(|c| json!({"n": c.n, "normalizer": c.normalizer, "values": c.normalized})).collect::<Vec<_>>(),
    });
    ctx.emit(&rows, Some(details))
}

#[derive(Serialize)]
struct TailCsv {
    experiment: &'static str,
    n: u32,
    lambda: f64,
    #[serde(rename = "A")]
    a: f64,
    estimate: f64,
    stderr: f64,
    replicas: u64,
    seed: u64,
    formula: f64,
    ratio: f64,
    ratio_stderr: f64,
    largest_estimate: f64,
    largest_stderr: f64,
    largest_formula: f64,
    largest_ratio: f64,
    largest_ratio_stderr: f64,
    threshold: u32,
    in_window: bool,
}

fn tails(ctx: &Context, n: u32, lambda: f64, a_grid: &[f64]) -> Result<Vec<u8>, CliError> {
    let rows: Vec<TailCsv> = run_tail_experiment(&ctx.plan, n, lambda, a_grid)?
        .into_iter()
        .map(|r| TailCsv {
            experiment: "tails",
            n: r.n,
            lambda: r.lambda,
            a: r.a,
            estimate: r.component.estimate,
            stderr: r.component.stderr,
            replicas: r.component.replicas,
            seed: ctx.plan.seed,
            formula: r.component_formula,
            ratio: r.component_ratio,
            ratio_stderr: r.component_ratio_stderr,
            largest_estimate: r.largest.estimate,
            largest_stderr: r.largest.stderr,
            largest_formula: r.largest_formula,
            largest_ratio: r.largest_ratio,
            largest_ratio_stderr: r.largest_ratio_stderr,
            threshold: r.threshold,
            in_window: r.in_window,
        })
        .collect();
    ctx.emit(&rows, None)
}

#[derive(Serialize)]
struct NoiseCsv {
    experiment: &'static str,
    n: u32,
    a: f64,
    eps: f64,
    estimate: f64,
    stderr: f64,
    replicas: u64,
    seed: u64,
    cov_g: f64,
    cov_g_stderr: f64,
    f_mean: f64,
    f_mean_stderr: f64,
    threshold: u32,
}

fn noise(ctx: &Context, n: u32, a: f64, eps: Option<&[f64]>) -> Result<Vec<u8>, CliError> {
    let grid = eps.map_or_else(|| noise_grid(n), <[f64]>::to_vec);
    let rows: Vec<NoiseCsv> = run_noise_sensitivity(&ctx.plan, n, a, &grid)?
        .into_iter()
        .map(|r| NoiseCsv {
            experiment: "noise",
            n: r.n,
            a: r.a,
            eps: r.eps,
            estimate: r.cov_f.estimate,
            stderr: r.cov_f.stderr,
            replicas: r.cov_f.count,
            seed: ctx.plan.seed,
            cov_g: r.cov_g.estimate,
            cov_g_stderr: r.cov_g.stderr,
            f_mean: r.f_mean.estimate,
            f_mean_stderr: r.f_mean.stderr,
            threshold: r.threshold,
        })
        .collect();
    ctx.emit(&rows, None)
}

#[derive(Serialize)]
struct QuantityCsv {
    experiment: &'static str,
    n: u32,
    beta: f64,
    quantity: &'static str,
    estimate: f64,
    stderr: f64,
    replicas: u64,
    seed: u64,
    window_lo: Option<u32>,
    window_hi: Option<u32>,
}

fn second_moment(ctx: &Context, n: u32, beta: f64) -> Result<Vec<u8>, CliError> {
    let r = run_second_moment(&ctx.plan, n, beta)?;
    let row = |quantity, c: CellResult| QuantityCsv {
        experiment: "second-moment",
        n,
        beta,
        quantity,
        estimate: c.estimate,
        stderr: c.stderr,
        replicas: c.replicas,
        seed: ctx.plan.seed,
        window_lo: Some(r.window.0),
        window_hi: Some(r.window.1),
    };
    let ratio = CellResult {
        estimate: r.ratio,
        stderr: r.ratio_stderr,
        replicas: r.z1.replicas,
    };
    let rows = vec![
        row("z1", r.z1),
        row("z1_squared", r.z1_squared),
        row("z1_z2", r.z1_z2),
        row("stationary", r.stationary),
        row("ratio", ratio),
    ];
    ctx.emit(&rows, None)
}

#[derive(Serialize)]
struct UnionCsv {
    experiment: &'static str,
    n: u32,
    beta: f64,
    quantity: &'static str,
    index: Option<u32>,
    start: Option<f64>,
    end: Option<f64>,
    estimate: f64,
    stderr: f64,
    replicas: u64,
    seed: u64,
}

fn union_bound(ctx: &Context, n: u32, beta: f64) -> Result<Vec<u8>, CliError> {
    let r = run_union_bound(&ctx.plan, n, beta)?;
    let row = |quantity, c: CellResult| UnionCsv {
        experiment: "union-bound",
        n,
        beta,
        quantity,
        index: None,
        start: None,
        end: None,
        estimate: c.estimate,
        stderr: c.stderr,
        replicas: c.replicas,
        seed: ctx.plan.seed,
    };
    let mut rows: Vec<UnionCsv> = r
        .intervals
        .iter()
        .map(|i| UnionCsv {
            index: Some(i.index),
            start: Some(i.start),
            end: Some(i.end),
            ..row("interval", i.hits)
        })
        .collect();
    rows.push(row("count", r.count));
    rows.push(row("any", r.any));
    rows.push(row("sup", r.sup_exceed));
    rows.push(row("static", r.static_exceed));
    let details = json!({ "threshold": r.threshold, "static_p": r.static_p, "mismatches": r.mismatches });
    ctx.emit(&rows, Some(details))
}

#[derive(Serialize)]
struct RevealCsv {
    experiment: &'static str,
    n: u32,
    threshold: u32,
    orbit: &'static str,
    estimate: f64,
    stderr: f64,
    replicas: u64,
    seed: u64,
}

fn reveal(ctx: &Context, ns: &[u32], threshold: Option<u32>) -> Result<Vec<u8>, CliError> {
    let mut rows = Vec::new();
    for &n in ns {
        let r = run_revealment(&ctx.plan, n, threshold)?;
        for (orbit, c) in [
            ("incident", r.incident),
            ("off_incident", r.off_incident),
            ("off_incident_scaled", r.scaled),
            ("decision", r.decision),
        ] {
            rows.push(RevealCsv {
                experiment: "reveal",
                n,
                threshold: r.threshold,
                orbit,
                estimate: c.estimate,
                stderr: c.stderr,
                replicas: c.replicas,
                seed: ctx.plan.seed,
            });
        }
    }
    ctx.emit(&rows, None)
}

#[derive(Serialize)]
struct SpectralCsv {
    experiment: &'static str,
    m: u32,
    p: f64,
    check: &'static str,
    max_abs_diff: f64,
    cases: u64,
    tolerance: f64,
    pass: bool,
    seed: u64,
}

/// Largest table size for the command; the noise identity is checked by `O(4^m)` enumeration.
const MAX_CHECK_BITS: u32 = 10;

fn spectral_check(ctx: &Context, m: u32, p: f64) -> Result<Vec<u8>, CliError> {
    if !(1..=MAX_CHECK_BITS).contains(&m) {
        return Err(CliError::Invalid(format!("invalid parameter: --m must lie in 1..={MAX_CHECK_BITS}, got {m}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(CliError::Invalid(format!("invalid parameter: --p must lie strictly inside (0, 1), got {p}")));
    }
    let tol = spectral::tolerance(m);
    let size = 1usize << m;
    let mut rng = ctx.plan.rng(Domain::Spectral, u64::from(m), 0);
    let mut worst = [0.0f64; 7];
    let mut cases = [0u64; 7];
    let mut note = |slot: usize, diff: f64| {
        worst[slot] = worst[slot].max(diff);
        cases[slot] += 1;
    };

    for s in 0..size {
        let chi_s = FunctionTable::from_fn(m, p, |w| spectral::chi(s, w, p).unwrap_or(f64::NAN))?;
        let coeffs = transform(&chi_s);
        let diff = (0..size)
            .map(|t| (coeffs.coeff(t) - f64::from(u8::from(s == t))).abs())
            .fold(0.0, f64::max);
        note(0, diff);
    }
    for _ in 0..ctx.plan.reps {
        let f = random_table(m, p, &mut rng)?;
        let g = random_table(m, p, &mut rng)?;
        let (fhat, ghat) = (transform(&f), transform(&g));
        note(1, (fhat.coeff(0) - f.expectation()).abs());
        let back = inverse_transform(&fhat);
        note(2, (0..size).map(|w| (back.value(w) - f.value(w)).abs()).fold(0.0, f64::max));
        let direct: f64 = (0..size).map(|w| f.probability(w) * f.value(w) * g.value(w)).sum();
        let plancherel: f64 = fhat.coeffs().iter().zip(ghat.coeffs()).map(|(a, b)| a * b).sum();
        note(3, (direct - plancherel).abs());
        let eps = rng.random::<f64>();
        let exact = noise_expectation_exact(&f, &g, eps)?;
        note(4, (exact - noise_expectation_spectral(&fhat, &ghat, eps)?).abs());

        let filters = rng.random_range(1..=3);
        let up_f = random_up_set(m, p, filters, &mut rng)?;
        let up_g = random_up_set(m, p, filters, &mut rng)?;
        for e in 0..m {
            note(5, pivotal_identity_check(&up_f, &up_g, e)?.diff);
        }
        let h = random_increasing(m, p, &mut rng)?;
        let sum = FunctionTable::from_fn(m, p, |w| up_f.value(w) + h.value(w))?;
        let check = spectral::fkg_noise_check(&up_f, &sum, eps)?;
        note(6, (check.rhs - check.lhs).max(0.0));
    }

    let names = [
        "orthonormality",
        "mean_is_empty_coefficient",
        "reconstruction",
        "plancherel",
        "noise_identity",
        "pivotality_identity",
        "fkg_violation",
    ];
    let rows: Vec<SpectralCsv> = names
        .iter()
        .enumerate()
        .map(|(i, &check)| SpectralCsv {
            experiment: "spectral-check",
            m,
            p,
            check,
            max_abs_diff: worst[i],
            cases: cases[i],
            tolerance: tol,
            pass: worst[i] < tol,
            seed: ctx.plan.seed,
        })
        .collect();
    ctx.emit(&rows, None)
}
