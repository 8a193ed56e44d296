//! The four subcommands.

use qbattery::capacity::CAPACITY_TOL;
use qbattery::distribution::{
    capacity_report, capacity_report_dense, critical_gamma, relation_slack, CapacityReport,
    RelationLabel,
};
use qbattery::fuzz::{run_fuzz, FuzzConfig};
use qbattery::gain::{apply_gain_permutation, GainResult};
use qbattery::schema::LoadedState;
use qbattery::states::three_qubit_counterexamples;
use qbattery::{BatteryHamiltonian, Permutation, XState};

use crate::io::{cfg_error, emit, load_state, parse_grid, resolve_hamiltonian};
use crate::render::{csv_line, num, opt_num, table};
use crate::{Builtin, CapacityArgs, CliError, CounterexampleArgs, Format, FuzzArgs, SweepArgs};

fn build_builtin(args: &CapacityArgs, which: Builtin) -> Result<LoadedState, CliError> {
    let state = match which {
        Builtin::BellDiagonal => {
            if args.a.len() != 3 {
                return Err(CliError::BadConfig(format!(
                    "--a needs exactly three coefficients, got {}",
                    args.a.len()
                )));
            }
            XState::bell_diagonal(args.a[0], args.a[1], args.a[2])
        }
        Builtin::GhzNoise => XState::ghz_white_noise(args.n, args.beta),
        Builtin::Ex2Rho1 => Ok(three_qubit_counterexamples()[0].clone()),
        Builtin::Ex2Rho2 => Ok(three_qubit_counterexamples()[1].clone()),
        Builtin::Ex2Rho3 => Ok(three_qubit_counterexamples()[2].clone()),
    };
    state
        .map(LoadedState::X)
        .map_err(|e| CliError::InvalidState(e.to_string()))
}

pub fn capacity(args: CapacityArgs) -> Result<(), CliError> {
    let state = match (&args.state, args.builtin) {
        (Some(path), _) => load_state(path)?,
        (None, Some(builtin)) => build_builtin(&args, builtin)?,
        (None, None) => unreachable!("clap enforces the source group"),
    };
    let h = resolve_hamiltonian(state.n(), args.eps.clone(), args.gamma)?;
    let report = match &state {
        LoadedState::X(x) => capacity_report(x, &h).map_err(cfg_error)?,
        LoadedState::Dense(d) => capacity_report_dense(d, &h).map_err(cfg_error)?,
    };

    let rendered = match args.format {
        Format::Table => {
            let mut rows = vec![
                ("qubits".to_string(), state.n().to_string()),
                (
                    "eps".to_string(),
                    h.eps().iter().map(|e| num(*e)).collect::<Vec<_>>().join(","),
                ),
                ("gamma".to_string(), num(h.gamma())),
                ("total".to_string(), num(report.total.value())),
            ];
            for (i, m) in report.marginals.iter().enumerate() {
                rows.push((format!("marginal A{}", i + 1), num(*m)));
            }
            rows.push(("rbc".to_string(), num(report.rbc)));
            rows.push(("rbc_ic".to_string(), num(report.rbc_ic)));
            rows.push(("rbc_c".to_string(), num(report.rbc_c)));
            table(&rows)
        }
        Format::Json => render_report_json(state.n(), &h, &report)?,
        Format::Csv => {
            let mut header: Vec<String> = ["n", "total", "rbc", "rbc_ic", "rbc_c"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            for i in 1..=state.n() {
                header.push(format!("marginal_{i}"));
            }
            let mut fields = vec![
                state.n().to_string(),
                num(report.total.value()),
                num(report.rbc),
                num(report.rbc_ic),
                num(report.rbc_c),
            ];
            fields.extend(report.marginals.iter().map(|m| num(*m)));
            format!("{}{}", csv_line(&header), csv_line(&fields))
        }
    };
    emit(args.out.as_ref(), &rendered)
}

fn render_report_json(
    n: usize,
    h: &BatteryHamiltonian,
    report: &CapacityReport,
) -> Result<String, CliError> {
    let value = serde_json::json!({
        "n": n,
        "eps": h.eps(),
        "gamma": h.gamma(),
        "total": report.total.value(),
        "marginals": report.marginals,
        "rbc": report.rbc,
        "rbc_ic": report.rbc_ic,
        "rbc_c": report.rbc_c,
    });
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| CliError::BadConfig(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn sweep_ghz(args: SweepArgs) -> Result<(), CliError> {
    if args.n < 2 {
        return Err(CliError::BadConfig(format!(
            "sweep needs at least 2 qubits, got {}",
            args.n
        )));
    }
    let betas = parse_grid(&args.beta_grid)?;
    let gammas = parse_grid(&args.gamma_grid)?;
    if betas.is_empty() || gammas.is_empty() {
        return Err(CliError::BadConfig("empty sweep grid".to_string()));
    }

    let header = [
        "n", "beta", "gamma", "total", "rbc", "rbc_ic", "rbc_c", "gain", "ratio",
        "rbc_fraction_after",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect::<Vec<_>>();
    let mut out = csv_line(&header);

    let dim = 1usize << args.n;
    let swap = Permutation::transposition(dim, 1, dim - 1).map_err(cfg_error)?;
    for &beta in &betas {
        let state = XState::ghz_white_noise(args.n, beta)
            .map_err(|e| CliError::BadConfig(e.to_string()))?;
        for &gamma in &gammas {
            let h = resolve_hamiltonian(args.n, args.eps.clone(), gamma)?;
            let report = capacity_report(&state, &h).map_err(cfg_error)?;
            let result = apply_gain_permutation(&state, &h, &swap).map_err(cfg_error)?;
            out.push_str(&sweep_row(args.n, beta, gamma, &report, &result));
        }
    }
    emit(args.out.as_ref(), &out)
}

fn sweep_row(
    n: usize,
    beta: f64,
    gamma: f64,
    report: &CapacityReport,
    result: &GainResult,
) -> String {
    let total = report.total.value();
    let ratio = result.ratio.unwrap_or(0.0);
    let fraction = if total > 1e-12 {
        (total - result.marginal_sum_after()) / total
    } else {
        0.0
    };
    csv_line(&[
        n.to_string(),
        num(beta),
        num(gamma),
        num(total),
        num(report.rbc),
        num(report.rbc_ic),
        num(report.rbc_c),
        num(result.gain),
        num(ratio),
        num(fraction),
    ])
}

struct RelationRow {
    state: &'static str,
    label: RelationLabel,
    lhs: f64,
    rhs: f64,
    slack: f64,
    slack_at_zero: f64,
    gamma_c: Option<f64>,
}

pub fn counterexamples(args: CounterexampleArgs) -> Result<(), CliError> {
    let names = ["ex2-rho1", "ex2-rho2", "ex2-rho3"];
    let states = three_qubit_counterexamples();
    let h_display = BatteryHamiltonian::new(vec![0.5, 0.3, 0.1], args.gamma).map_err(cfg_error)?;
    let h_zero = h_display.with_gamma(0.0).map_err(cfg_error)?;

    let mut rows: Vec<RelationRow> = Vec::new();
    for (name, state) in names.iter().zip(&states) {
        for label in RelationLabel::ALL {
            let shown = relation_slack(state, label, &h_display).map_err(cfg_error)?;
            let at_zero = relation_slack(state, label, &h_zero).map_err(cfg_error)?;
            let gamma_c = if at_zero.slack < -CAPACITY_TOL {
                critical_gamma(state, label, &h_zero, args.gamma_max).map_err(cfg_error)?
            } else {
                None
            };
            rows.push(RelationRow {
                state: name,
                label,
                lhs: shown.lhs,
                rhs: shown.rhs,
                slack: shown.slack,
                slack_at_zero: at_zero.slack,
                gamma_c,
            });
        }
    }

    let rendered = match args.format {
        Format::Table => {
            let mut out = format!("gamma {}\n", num(args.gamma));
            out.push_str(&format!(
                "{:<10} {:<9} {:<24} {:<24} {:<24} {}\n",
                "state", "relation", "lhs", "rhs", "slack", "gamma_c"
            ));
            for row in &rows {
                out.push_str(&format!(
                    "{:<10} {:<9} {:<24} {:<24} {:<24} {}\n",
                    row.state,
                    row.label.to_string(),
                    num(row.lhs),
                    num(row.rhs),
                    num(row.slack),
                    opt_num(row.gamma_c),
                ));
            }
            out
        }
        Format::Json => {
            let records: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "state": row.state,
                        "label": row.label.as_str(),
                        "gamma": args.gamma,
                        "lhs": row.lhs,
                        "rhs": row.rhs,
                        "slack": row.slack,
                        "gamma_c": row.gamma_c,
                    })
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&records)
                .map_err(|e| CliError::BadConfig(e.to_string()))?;
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = csv_line(
                &["state", "label", "gamma", "lhs", "rhs", "slack", "gamma_c"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>(),
            );
            for row in &rows {
                out.push_str(&csv_line(&[
                    row.state.to_string(),
                    row.label.to_string(),
                    num(args.gamma),
                    num(row.lhs),
                    num(row.rhs),
                    num(row.slack),
                    opt_num(row.gamma_c),
                ]));
            }
            out
        }
    };
    emit(args.out.as_ref(), &rendered)?;

    // Exit contract: the guaranteed relations must hold and each state must
    // violate its paired candidate relation at gamma = 0.
    let expected = [
        ("ex2-rho1", RelationLabel::SharedA),
        ("ex2-rho2", RelationLabel::SharedB),
        ("ex2-rho3", RelationLabel::SharedC),
    ];
    for row in &rows {
        if row.label.is_guaranteed() && (row.slack < -CAPACITY_TOL || row.slack_at_zero < -CAPACITY_TOL)
        {
            return Err(CliError::Reproduction(format!(
                "guaranteed relation {} broken on {} (slack {})",
                row.label, row.state, row.slack
            )));
        }
    }
    for (name, label) in expected {
        let row = rows
            .iter()
            .find(|r| r.state == name && r.label == label)
            .expect("every pair was audited");
        if row.slack_at_zero >= -CAPACITY_TOL {
            return Err(CliError::Reproduction(format!(
                "expected {} to violate {} without interaction (slack {})",
                name, label, row.slack_at_zero
            )));
        }
        if row.gamma_c.is_none() {
            return Err(CliError::Reproduction(format!(
                "no critical interaction found for {} / {} below gamma {}",
                name, label, args.gamma_max
            )));
        }
    }
    Ok(())
}

pub fn fuzz(args: FuzzArgs) -> Result<(), CliError> {
    if !(2..=4).contains(&args.n) {
        return Err(CliError::BadConfig(format!(
            "fuzzing supports 2, 3 or 4 qubits, got {}",
            args.n
        )));
    }
    let mut config = FuzzConfig::new(args.n, args.samples, args.seed);
    config.gamma_max = args.gamma_max;
    let report = run_fuzz(&config).map_err(cfg_error)?;

    let rendered = match args.format {
        Format::Table => {
            let mut out = format!(
                "n={} samples={} seed={} gamma-max={}\n",
                report.n,
                report.samples,
                report.seed,
                num(report.gamma_max)
            );
            out.push_str(&format!(
                "{:<14} {:<10} {:<11} {}\n",
                "relation", "samples", "violations", "min-slack"
            ));
            for stat in &report.relations {
                out.push_str(&format!(
                    "{:<14} {:<10} {:<11} {}\n",
                    stat.label,
                    stat.samples,
                    stat.violations,
                    opt_num(stat.min_slack),
                ));
            }
            out.push_str(&format!(
                "{:<14} {:<10} {:<11} -\n",
                "majorization", report.majorization_checks, report.majorization_failures
            ));
            for violation in &report.violations {
                let json = serde_json::to_string(violation)
                    .map_err(|e| CliError::BadConfig(e.to_string()))?;
                out.push_str(&json);
                out.push('\n');
            }
            out.push_str(if report.passed() {
                "result: PASS\n"
            } else {
                "result: FAIL\n"
            });
            out
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::BadConfig(e.to_string()))?;
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut out = csv_line(
                &["label", "samples", "violations", "min_slack"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>(),
            );
            for stat in &report.relations {
                out.push_str(&csv_line(&[
                    stat.label.clone(),
                    stat.samples.to_string(),
                    stat.violations.to_string(),
                    opt_num(stat.min_slack),
                ]));
            }
            out.push_str(&csv_line(&[
                "majorization".to_string(),
                report.majorization_checks.to_string(),
                report.majorization_failures.to_string(),
                "-".to_string(),
            ]));
            out
        }
    };
    emit(args.out.as_ref(), &rendered)?;

    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Reproduction(
            "randomized verification found violations".to_string(),
        ))
    }
}
