use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{Experiment, RunConfig};
use super::output::{Check, Outcome, Table};
use crate::error::{Error, Result};
use crate::estimates::{
    check_envelopes, decay_exponent, decay_quotients, estimate_quotient, fit_decay_slope, log_spaced, raw_decay,
    weighted_convolution_bound, DispersiveSetup, EstimateSettings, FamilyKind, QuotientKind, QuotientReport,
    TestFamily, TimeWindow,
};
use crate::group::{apply_s, apply_s_j, beta, beta_branches, kernel_direct_smoothed, ExponentPack, IDENTITY_TOLERANCE};
use crate::modspace::{ModNormParams, UniformDecomposition};
use crate::solver::{
    conserved_drift, continuity_modulus, picard_solve, solitary_parameters, solitary_wave, traveling_wave_residual,
    x_space_membership, CauchyProblem, PicardSeed, ReferenceStepper,
};
use crate::spectral::{apply_multiplier, forward_transform, lp_norm, Field, GridSpec, Trajectory};
use crate::Complex64;

/// Runs every experiment except `determinism`, which needs the file layer.
pub(crate) fn evaluate(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.experiment()? {
        Experiment::Exponents => exponents(cfg),
        Experiment::VerifyPartition => verify_partition(cfg),
        Experiment::GroupLaws => group_laws(cfg),
        Experiment::KernelCheck => kernel_check(cfg),
        Experiment::DecayFit => decay(cfg, true),
        Experiment::Envelope => decay(cfg, false),
        Experiment::Quotient(name) => quotients(cfg, name.as_deref()),
        Experiment::Strichartz => strichartz(cfg),
        Experiment::Picard => picard(cfg),
        Experiment::Solitary => solitary(cfg),
        Experiment::ConvolutionBound => convolution(cfg),
        Experiment::Determinism => Err(Error::Config {
            path: "experiment".into(),
            message: "determinism runs through the file layer".into(),
        }),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn exponents(cfg: &RunConfig) -> Result<Outcome> {
    let tol = cfg.tolerances.identity;
    let pack = cfg.pack.pack()?;
    let mut out = Outcome::default();

    out.checks
        .push(Check::at_most("beta(-2) = -1/5", (beta(-2.0)? + 0.2).abs(), tol));
    let [near, far] = beta_branches(-4.0);
    let third = -1.0 / 3.0;
    out.checks.push(Check::at_most(
        "beta(-4) = -1/3 on both branches",
        (near - third).abs().max((far - third).abs()),
        tol,
    ));

    // σ = −1 − 10^u, u uniform in [−6, 4]
    let n = cfg.sweep.sigma_points.max(2);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let u = -6.0 + 10.0 * i as f64 / (n - 1) as f64;
        let b = beta(-1.0 - 10f64.powf(u))?;
        lo = lo.min(b);
        hi = hi.max(b);
    }
    out.checks.push(Check::flag(
        "beta range within [-1/3, 0)",
        lo >= third - tol && hi < 0.0,
        format!("min {lo:e}, max {hi:e} over {n} sigma values"),
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.family.seed);
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut attempts = 0usize;
    while rows.len() < cfg.sweep.pack_points && attempts < 100 * cfg.sweep.pack_points.max(1) {
        attempts += 1;
        let lambda = rng.gen_range(1..=12u32);
        let sigma = -rng.gen_range(1.05..12.0);
        let theta = rng.gen_range(0.01..=1.0) / -sigma;
        let Ok(p) = ExponentPack::new(lambda, sigma, theta, 1.0, 0.0) else {
            continue;
        };
        let l = lambda as f64;
        let r_defect = rel(1.0 / p.r, (l + 1.0) / p.r - p.hls_factor());
        let g_defect = rel(p.gamma, 2.0 / p.mu);
        let m_defect = rel(p.mu, p.rho).max(rel(p.mu, -2.0 * p.theta * (0.5 - 1.0 / p.p) * p.beta));
        worst = worst.max(r_defect).max(g_defect).max(m_defect);
        rows.push(vec![
            lambda.to_string(),
            format!("{sigma:e}"),
            format!("{theta:e}"),
            format!("{:e}", p.r),
            format!("{:e}", p.gamma),
            format!("{:e}", p.mu),
            format!("{r_defect:e}"),
            format!("{g_defect:e}"),
        ]);
    }
    out.checks.push(Check::flag(
        "sweep size",
        rows.len() == cfg.sweep.pack_points,
        format!("{} valid packs", rows.len()),
    ));
    out.checks.push(Check::at_most(
        "identities over the sweep",
        worst,
        tol.max(IDENTITY_TOLERANCE),
    ));
    out.checks.push(Check::flag(
        "identities of the configured pack",
        pack.identities().iter().all(|c| c.holds),
        String::new(),
    ));
    out.tables.push(Table::new(
        "pack_sweep.csv",
        &[
            "lambda",
            "sigma",
            "theta",
            "r",
            "gamma",
            "mu",
            "r_identity_defect",
            "gamma_identity_defect",
        ],
        rows,
    ));
    out.results = json!({
        "pack": pack,
        "delta": pack.delta(),
        "hls_factor": pack.hls_factor(),
        "gamma_conjugate": pack.gamma_conjugate(),
        "strichartz_admissible": pack.strichartz_admissible(),
        "identities": pack.identities(),
        "beta_range": [lo, hi],
    });
    Ok(out)
}

fn random_fields(cfg: &RunConfig, count: usize, grid: GridSpec) -> Result<Vec<Field>> {
    TestFamily {
        kind: FamilyKind::BandLimitedRandom,
        count,
        ..cfg.family.clone()
    }
    .members(grid)
}

fn decomposition(cfg: &RunConfig, grid: GridSpec) -> Result<UniformDecomposition> {
    UniformDecomposition::build(grid, cfg.estimate.profile, cfg.estimate.k_max)
}

fn verify_partition(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grid.spec()?;
    let dec = decomposition(cfg, grid)?;
    let tol = &cfg.tolerances;
    let mut out = Outcome::default();
    let residual = dec.partition_residual();
    out.checks.push(Check::at_most(
        "partition residual in the resolved band",
        residual,
        tol.partition,
    ));

    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for (j, u) in random_fields(cfg, cfg.sweep.fields, grid)?.iter().enumerate() {
        let spec = forward_transform(u);
        let mut sum = Field::zeros(grid);
        for k in dec.indices() {
            sum = sum.add(&dec.block_of_spectrum(&spec, k))?;
        }
        let err = lp_norm(&sum.sub(u)?, 2.0)? / lp_norm(u, 2.0)?;
        worst = worst.max(err);
        rows.push(vec![
            j.to_string(),
            format!("{err:e}"),
            format!("{:e}", dec.tail_fraction(u)?),
        ]);
    }
    out.checks
        .push(Check::at_most("block reconstruction", worst, tol.reconstruction));
    out.tables.push(Table::new(
        "reconstruction.csv",
        &["member", "relative_error", "tail_fraction"],
        rows,
    ));
    out.results = json!({
        "partition_residual": residual,
        "lower_bound": dec.lower_bound(),
        "resolved_band": dec.resolved_band(),
        "profile": dec.profile(),
        "k_max": dec.k_max(),
        "reconstruction_max_error": worst,
    });
    Ok(out)
}

fn group_laws(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grid.spec()?;
    let dec = decomposition(cfg, grid)?;
    let tol = &cfg.tolerances;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.family.seed ^ 0x5eed);
    let (mut unitarity, mut law, mut commute, mut realness): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut rows = Vec::new();
    for (j, u) in random_fields(cfg, cfg.sweep.group_fields, grid)?.iter().enumerate() {
        let norm = lp_norm(u, 2.0)?;
        for _ in 0..cfg.sweep.time_pairs {
            let t = rng.gen_range(-20.0..20.0);
            let s = rng.gen_range(-20.0..20.0);
            let k = rng.gen_range(-12..=12i64);
            let st = apply_s(u, t)?;
            let a = rel(lp_norm(&st, 2.0)?, norm);
            let b = lp_norm(&apply_s(&st, s)?.sub(&apply_s(u, t + s)?)?, 2.0)? / norm;
            let c = lp_norm(&dec.block(&st, k)?.sub(&apply_s(&dec.block(u, k)?, t)?)?, 2.0)? / norm;
            let d = if st.is_flagged_real() {
                st.imag_mass_fraction().sqrt()
            } else {
                1.0
            };
            unitarity = unitarity.max(a);
            law = law.max(b);
            commute = commute.max(c);
            realness = realness.max(d);
            rows.push(vec![
                j.to_string(),
                format!("{t:e}"),
                format!("{s:e}"),
                k.to_string(),
                format!("{a:e}"),
                format!("{b:e}"),
                format!("{c:e}"),
                format!("{d:e}"),
            ]);
        }
    }
    let mut out = Outcome::default();
    out.checks.push(Check::at_most("unitarity", unitarity, tol.group));
    out.checks.push(Check::at_most("group law", law, tol.group));
    out.checks.push(Check::at_most("block commutation", commute, tol.group));
    out.checks.push(Check::at_most("realness", realness, tol.realness));
    out.tables.push(Table::new(
        "group_laws.csv",
        &[
            "member",
            "t",
            "s",
            "k",
            "unitarity",
            "group_law",
            "commutation",
            "imaginary_part",
        ],
        rows,
    ));
    out.results = json!({
        "unitarity": unitarity,
        "group_law": law,
        "commutation": commute,
        "realness": realness,
    });
    Ok(out)
}

fn kernel_check(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grid.spec()?;
    let w = cfg.sweep.kernel_width;
    let probe = Field::from_real_fn(grid, |x| {
        (-x * x / (2.0 * w * w)).exp() / (w * std::f64::consts::TAU.sqrt())
    });
    let times = [0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 10.0, 15.0, 20.0, 30.0];
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for &sigma in &cfg.sweep.sigmas {
        for i in 0..cfg.sweep.kernel_points {
            let t = times[i % times.len()] * (1 + i / times.len()) as f64;
            // a node near the leading edge x ≈ t, where the kernel is large
            let m = ((0.8 * t - 0.5 + grid.half_width()) / grid.dx()).round() as usize;
            let x = grid.x(m);
            let on_grid = apply_s_j(&probe, t, sigma)?.values()[m].re;
            let direct = kernel_direct_smoothed(t, sigma, x, w)?.value / std::f64::consts::TAU;
            let err = rel(on_grid, direct);
            worst = worst.max(err);
            rows.push(vec![
                format!("{sigma}"),
                format!("{t:e}"),
                format!("{x:e}"),
                format!("{on_grid:e}"),
                format!("{direct:e}"),
                format!("{err:e}"),
            ]);
        }
    }
    let mut out = Outcome::default();
    out.checks.push(Check::at_most(
        "grid kernel vs frequency quadrature",
        worst,
        cfg.tolerances.kernel,
    ));
    out.tables.push(Table::new(
        "kernel.csv",
        &["sigma", "t", "x", "grid", "quadrature", "relative_error"],
        rows,
    ));
    out.results = json!({ "max_relative_error": worst, "probe_width": w });
    Ok(out)
}

fn decay(cfg: &RunConfig, fit: bool) -> Result<Outcome> {
    let grid = cfg.grid.spec()?;
    let win = &cfg.windows;
    let ts = log_spaced(win.t_min, win.t_max, win.decay_points)?;
    let mut out = Outcome::default();
    let mut curves = Vec::new();
    let mut fits = Vec::new();
    for &sigma in &cfg.sweep.sigmas {
        let exponent = decay_exponent(sigma, f64::INFINITY)?;
        let report = decay_quotients(&cfg.family, sigma, f64::INFINITY, &ts, grid)?;
        let raw = raw_decay(&report, exponent);
        if fit {
            let f = fit_decay_slope(&raw, win.fit_window, exponent)?;
            out.checks.push(Check::at_most(
                &format!("slope for sigma = {sigma}, p = inf"),
                f.slope,
                exponent + cfg.tolerances.slope_margin,
            ));
            out.checks.push(Check::at_most(
                &format!("refinement drift for sigma = {sigma}"),
                report.refinement_drift,
                cfg.tolerances.drift,
            ));
            fits.push(f);
        }
        // the calibrated envelope needs |t| > 1
        curves.push((sigma, raw.into_iter().filter(|s| s.0 > 1.0).collect::<Vec<_>>()));
    }
    let env = check_envelopes(&curves, win.calibrate_until)?;
    out.checks.push(Check::flag(
        "envelope domination with one constant",
        env.holds,
        format!("C = {:e} fixed on t <= {}", env.constant, win.calibrate_until),
    ));
    let mut rows = Vec::new();
    for curve in &env.curves {
        for &(t, m, e) in &curve.samples {
            rows.push(vec![
                format!("{}", curve.sigma),
                format!("{t:e}"),
                format!("{m:e}"),
                format!("{e:e}"),
                format!("{:e}", m / e),
            ]);
        }
    }
    out.tables.push(Table::new(
        "decay.csv",
        &["sigma", "t", "measured", "envelope", "ratio"],
        rows,
    ));

    let mut results = json!({ "envelope_constant": env.constant, "calibrate_until": env.calibrate_until });
    if fit {
        let sigma = cfg.sweep.sigmas[0];
        let report = decay_quotients(&cfg.family, sigma, 2.0, &ts, grid)?;
        let spread = l2_constancy(&report);
        out.checks.push(Check::at_most(
            "p = 2 quotient constant in t",
            spread,
            cfg.tolerances.constancy,
        ));
        results["fits"] = to_value(&fits);
        results["p2_spread"] = json!(spread);
    }
    out.results = results;
    Ok(out)
}

/// Largest relative spread in `t` of one member's quotient.
fn l2_constancy(report: &QuotientReport) -> f64 {
    let mut worst: f64 = 0.0;
    let mut rows = report
        .rows
        .iter()
        .filter_map(|r| r.quotient.map(|q| (r.member_id, q)))
        .peekable();
    while let Some((id, q)) = rows.next() {
        let (mut lo, mut hi) = (q, q);
        while let Some(&(next, v)) = rows.peek() {
            if next != id {
                break;
            }
            lo = lo.min(v);
            hi = hi.max(v);
            rows.next();
        }
        worst = worst.max((hi - lo) / hi);
    }
    worst
}

fn settings(cfg: &RunConfig) -> Result<EstimateSettings> {
    let window = TimeWindow {
        t_end: cfg.windows.t_end,
        samples: cfg.windows.samples,
    };
    window.validate()?;
    Ok(EstimateSettings {
        grid: cfg.grid.spec()?,
        profile: cfg.estimate.profile,
        k_max: cfg.estimate.k_max,
        rule: cfg.estimate.rule,
        window,
    })
}

fn quotient_checks(out: &mut Outcome, label: &str, report: &QuotientReport, drift: f64) {
    out.checks.push(Check::flag(
        &format!("{label}: finite supremum"),
        report.sup_quotient.is_finite(),
        format!("{:e}", report.sup_quotient),
    ));
    out.checks.push(Check::at_most(
        &format!("{label}: refinement drift"),
        report.refinement_drift,
        drift,
    ));
    if let Some(w) = report.window_drift {
        out.checks
            .push(Check::at_most(&format!("{label}: window drift"), w, drift));
    }
    if let Some(nested) = report.nesting_holds {
        out.checks.push(Check::flag(
            &format!("{label}: nesting inequality"),
            nested,
            String::new(),
        ));
    }
}

fn run_quotients(cfg: &RunConfig, kinds: &[QuotientKind], out: &mut Outcome) -> Result<Vec<Value>> {
    let pack = cfg.pack.pack()?;
    let settings = settings(cfg)?;
    let mut summaries = Vec::new();
    for (i, kind) in kinds.iter().enumerate() {
        let report = estimate_quotient(kind, &pack, &cfg.family, &settings)?;
        let label = format!("{:02}_{}", i, kind.name());
        quotient_checks(out, &label, &report, cfg.tolerances.drift);
        out.tables
            .push(Table::from_report(&format!("quotient_{label}.csv"), &report)?);
        summaries.push(json!({ "label": label, "config": kind, "summary": report.summary() }));
    }
    Ok(summaries)
}

fn quotients(cfg: &RunConfig, name: Option<&str>) -> Result<Outcome> {
    let kinds: Vec<QuotientKind> = match name {
        Some(n) => vec![QuotientKind::from_name(n).expect("validated name")],
        None if cfg.quotients.is_empty() => QuotientKind::NAMES
            .iter()
            .map(|n| QuotientKind::from_name(n).expect("registered"))
            .collect(),
        None => cfg.quotients.clone(),
    };
    let mut out = Outcome::default();
    let summaries = run_quotients(cfg, &kinds, &mut out)?;
    out.results = json!({ "quotients": summaries });
    Ok(out)
}

fn strichartz(cfg: &RunConfig) -> Result<Outcome> {
    let setup = DispersiveSetup::default();
    let kinds = vec![
        QuotientKind::StrichartzHom(setup.clone()),
        QuotientKind::StrichartzInhomSmooth(setup.clone()),
        QuotientKind::StrichartzInhomL1(setup.clone()),
        QuotientKind::StrichartzRetarded(setup),
    ];
    let mut out = Outcome::default();
    let mut summaries = run_quotients(cfg, &kinds, &mut out)?;
    if let Some(custom) = &cfg.strichartz.custom {
        let pack = cfg.pack.pack()?;
        let report = estimate_quotient(
            &QuotientKind::StrichartzHom(custom.clone()),
            &pack,
            &cfg.family,
            &settings(cfg)?,
        )?;
        out.checks.push(Check::flag(
            "custom symbol run completes",
            report.sup_quotient.is_finite(),
            format!("{}: sup {:e}", custom.symbol.label(), report.sup_quotient),
        ));
        out.tables
            .push(Table::from_report("quotient_custom_strichartz_hom.csv", &report)?);
        summaries.push(json!({ "label": "custom", "config": custom, "summary": report.summary() }));
    }
    out.results = json!({ "quotients": summaries });
    Ok(out)
}

fn picard(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grid.spec()?;
    let opts = &cfg.picard;
    let tol = &cfg.tolerances;
    let mut out = Outcome::default();

    let prob = CauchyProblem::gaussian(opts.lambda, opts.amplitude, grid, opts.t_end)?;
    let main = picard_solve(&prob, &opts.solver)?;
    let max_ratio = main.contraction_ratios.iter().copied().fold(0.0, f64::max);
    out.checks
        .push(Check::flag("main run converges", main.converged, String::new()));
    out.checks
        .push(Check::at_most("contraction ratios", max_ratio, tol.contraction));
    out.checks.push(Check::at_most(
        "integral-equation residual",
        main.final_residual,
        tol.residual,
    ));
    let reference = ReferenceStepper::new(opts.reference_dt).evolve_at(&prob, main.trajectory.times())?;
    let distance = lp_norm(&reference.last().sub(main.trajectory.last())?, 2.0)?;
    out.checks.push(Check::at_most(
        "final-time distance to the reference stepper",
        distance,
        tol.reference_distance,
    ));

    let frozen_cfg = crate::solver::PicardConfig {
        seed: PicardSeed::Frozen,
        ..opts.solver.clone()
    };
    let frozen = picard_solve(&prob, &frozen_cfg)?;
    let seed_gap = trajectory_gap(&frozen.trajectory, &main.trajectory)?;
    out.checks
        .push(Check::at_most("seed independence", seed_gap, 2.0 * opts.solver.tol));

    let scaled = CauchyProblem::gaussian(opts.lambda, opts.scaling * opts.amplitude, grid, opts.t_end)?;
    let scaled_run = picard_solve(&scaled, &opts.solver)?;
    let first = |r: &crate::solver::SolveReport| r.contraction_ratios.first().copied().unwrap_or(0.0);
    let observed = first(&scaled_run) / first(&main);
    let expected = opts.scaling.powi(opts.lambda as i32);
    let factor = (observed / expected).max(expected / observed);
    out.checks.push(Check::at_most(
        "contraction scaling against alpha^lambda",
        factor,
        tol.scaling_factor,
    ));

    let mut sweep = Vec::new();
    for &lambda in &opts.lambdas {
        let p = CauchyProblem::gaussian(lambda, opts.amplitude, grid, opts.t_end)?;
        let r = picard_solve(&p, &opts.solver)?;
        let worst = r.contraction_ratios.iter().copied().fold(0.0, f64::max);
        out.checks.push(Check::flag(
            &format!("local run lambda = {lambda}"),
            r.converged && worst < tol.contraction && r.final_residual < tol.residual,
            format!("ratio {worst:e}, residual {:e}", r.final_residual),
        ));
        sweep.push(r.summary());
    }

    let pack = cfg.pack.pack()?;
    let dec = decomposition(cfg, grid)?;
    let wide = CauchyProblem::gaussian(
        pack.lambda,
        opts.membership_amplitude,
        grid,
        2.0 * opts.membership_t_end,
    )?;
    let wide_cfg = crate::solver::PicardConfig {
        time_samples: opts.membership_samples,
        ..opts.solver.clone()
    };
    let wide_run = picard_solve(&wide, &wide_cfg)?;
    let membership = x_space_membership(&wide_run.trajectory, &pack, &dec)?;
    out.checks.push(Check::flag(
        "weighted norm finite",
        membership.finite,
        format!("{:e}", membership.weighted_sup),
    ));
    out.checks.push(Check::at_most(
        "weighted norm window drift",
        membership.window_drift,
        tol.membership_drift,
    ));
    let modulus = continuity_modulus(
        &wide_run.trajectory,
        ModNormParams::new(pack.s, 2.0, pack.q)?,
        &dec,
        opts.continuity_levels,
    )?;
    out.checks.push(Check::flag(
        "time continuity modulus decreases",
        modulus.decreasing(),
        format!("{:?}", modulus.moduli),
    ));

    out.tables
        .push(snapshots(&main.trajectory, opts.time_stride, opts.space_stride));
    out.results = json!({
        "main": main.summary(),
        "reference_distance": distance,
        "seed_gap": seed_gap,
        "scaling": { "alpha": opts.scaling, "observed": observed, "expected": expected },
        "lambda_sweep": sweep,
        "membership": membership,
        "continuity": modulus,
    });
    Ok(out)
}

fn trajectory_gap(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in a.states().iter().zip(b.states()) {
        worst = worst.max(lp_norm(&x.sub(y)?, 2.0)?);
    }
    Ok(worst)
}

pub(crate) fn snapshots(traj: &Trajectory, time_stride: usize, space_stride: usize) -> Table {
    let grid = traj.grid();
    let mut rows = Vec::new();
    for (t, u) in traj.iter().step_by(time_stride.max(1)) {
        for m in (0..grid.samples()).step_by(space_stride.max(1)) {
            rows.push(vec![
                format!("{t:e}"),
                format!("{:e}", grid.x(m)),
                format!("{:e}", u.values()[m].re),
            ]);
        }
    }
    Table::new("trajectory.csv", &["t", "x", "u"], rows)
}

fn solitary(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grid.spec()?;
    let opts = &cfg.solitary;
    let tol = &cfg.tolerances;
    let mut out = Outcome::default();
    let mut profiles = Vec::new();
    for &(c, lambda) in &opts.pairs {
        let psi = solitary_wave(c, lambda, grid, 0.0)?;
        let r = traveling_wave_residual(&psi, c, lambda)?;
        out.checks.push(Check::at_most(
            &format!("profile residual c = {c}, lambda = {lambda}"),
            r,
            tol.wave_residual,
        ));
        let (a, b) = solitary_parameters(c, lambda)?;
        profiles.push(json!({ "c": c, "lambda": lambda, "amplitude": a, "inverse_width": b, "residual": r }));
    }

    let (c, lambda) = (opts.speed, opts.lambda);
    let u0 = solitary_wave(c, lambda, grid, 0.0)?;
    let shift = opts.t_end * c;
    let shifted = apply_multiplier(&u0, |xi| Complex64::new(0.0, -xi * shift).exp())?;
    let exact = solitary_wave(c, lambda, grid, opts.t_end)?;
    let translation = lp_norm(&shifted.sub(&exact)?, 2.0)? / lp_norm(&exact, 2.0)?;
    out.checks
        .push(Check::at_most("translation matches spectral shift", translation, 1e-10));

    let prob = CauchyProblem::new(lambda, u0, opts.t_end)?;
    let times: Vec<f64> = (0..=10).map(|i| opts.t_end * i as f64 / 10.0).collect();
    let traj = ReferenceStepper::new(opts.dt).evolve_at(&prob, &times)?;
    let error = lp_norm(&traj.last().sub(&exact)?, 2.0)? / lp_norm(&exact, 2.0)?;
    out.checks
        .push(Check::at_most("propagation error", error, tol.propagation));
    let drift = conserved_drift(traj.states(), lambda)?;
    out.checks
        .push(Check::at_most("I1 drift", drift.i1, tol.invariant_drift));
    out.checks
        .push(Check::at_most("I2 drift", drift.i2, tol.invariant_drift));

    let mut rows = Vec::new();
    for m in (0..grid.samples()).step_by(opts.space_stride.max(1)) {
        rows.push(vec![
            format!("{:e}", grid.x(m)),
            format!("{:e}", traj.first().values()[m].re),
            format!("{:e}", traj.last().values()[m].re),
            format!("{:e}", exact.values()[m].re),
        ]);
    }
    out.tables.push(Table::new(
        "solitary.csv",
        &["x", "u_initial", "u_final", "u_exact"],
        rows,
    ));
    out.results = json!({
        "profiles": profiles,
        "propagation_error": error,
        "translation_error": translation,
        "conserved_drift": drift,
    });
    Ok(out)
}

fn convolution(cfg: &RunConfig) -> Result<Outcome> {
    let opts = &cfg.convolution;
    let ts = log_spaced(opts.t_min, opts.t_max, opts.points)?;
    let report = weighted_convolution_bound(opts.rho, opts.lambda, &ts)?;
    let mut out = Outcome::default();
    out.checks.push(Check::flag(
        "bounded quotient",
        report.sup_quotient.is_finite(),
        format!("{:e}", report.sup_quotient),
    ));
    out.checks.push(Check::at_most(
        "refinement drift",
        report.refinement_drift,
        cfg.tolerances.convolution_drift,
    ));
    let (rho, lambda) = opts.rejected;
    let rejection = match weighted_convolution_bound(rho, lambda, &ts) {
        Err(e @ Error::Hypothesis { .. }) => e.to_string(),
        Err(e) => format!("unexpected error: {e}"),
        Ok(_) => "accepted".into(),
    };
    out.checks.push(Check::flag(
        "slow tail rejected",
        rejection.starts_with("hypothesis"),
        rejection.clone(),
    ));
    out.tables.push(Table::from_report("convolution.csv", &report)?);
    out.results = json!({ "summary": report.summary(), "rejection": rejection });
    Ok(out)
}
