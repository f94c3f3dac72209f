use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::report::{fmt_real, Cell, Report};
use super::{Cli, Command, OstrowskiCmd, SftCmd, VarianceMethod};
use crate::cf::{ConvergentTable, IrrationalSpec};
use crate::clt::{
    clt_experiment, counterexample_experiment, gamma_condition_scan, normalized_distribution,
    scan_sets, vector_covariance, NSelector, Thresholds,
};
use crate::error::{Error, Result};
use crate::ostrowski::{enumerate_admissible, expand, is_admissible, reconstruct, OstrowskiDigits};
use crate::phase::Phase;
use crate::sft::{
    detect_period, growth_check, variance_window_scan, MarkovMeasure, TransitionSystem,
    DEFAULT_TOLERANCE,
};
use crate::stepfn::{PhiSpec, StepFunction};
use crate::sums::{
    count_near_multiples, counting_bound, decorrelation_integral, diophantine_sum, DioKind,
    ErgodicSums, Factor,
};

/// Variance-window constants frozen from the pilot scan.
pub const DEFAULT_B: f64 = 0.1;
pub const DEFAULT_BIG_B: f64 = 2.0;

struct Ctx<'a> {
    cli: &'a Cli,
    spec: IrrationalSpec,
}

impl Ctx<'_> {
    fn table(&self, count: usize) -> Result<ConvergentTable> {
        match self.cli.global.precision_bits {
            Some(bits) => ConvergentTable::with_bits(&self.spec, count, bits),
            None => ConvergentTable::new(&self.spec, count),
        }
    }

    /// A table whose denominators pass `n`, plus `extra` entries.
    fn covering(&self, n: u128, extra: usize) -> Result<ConvergentTable> {
        let len = ConvergentTable::covering(&self.spec, n, extra)?.len();
        self.table(len)
    }

    fn phi_spec(&self) -> Result<PhiSpec> {
        self.cli.global.phi.parse()
    }

    fn phi(&self, table: &ConvergentTable) -> Result<StepFunction> {
        self.phi_spec()?.build_one(table.alpha_phase())
    }

    fn header(&self) -> Value {
        json!({ "alpha": self.spec.to_string(), "phi": self.cli.global.phi })
    }
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn to_json<T: serde::Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Io(e.to_string()))
}

/// `6-12`, `10,22` or a mix of both.
pub fn parse_index_list(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidInput(format!("cannot parse index list '{s}'"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u64, u64) =
                    (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_digits(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| Error::InvalidDigits(format!("bad digit '{p}' in '{s}'")))
        })
        .collect()
}

fn parse_ratio(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidInput(format!("expected a rational like 3/2, got '{s}'"));
    match s.split_once('/') {
        Some((a, b)) => Ok((
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok((s.trim().parse().map_err(|_| bad())?, 1)),
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    let ctx = Ctx {
        cli,
        spec: cli.global.alpha.parse()?,
    };
    match &cli.command {
        Command::Cf { count } => cf(&ctx, *count),
        Command::Ostrowski(cmd) => ostrowski(&ctx, cmd),
        Command::Variance {
            nmax,
            method,
            cutoff,
            samples,
        } => variance(&ctx, *nmax, *method, *cutoff, *samples),
        Command::CountNear { j, delta, n1, n2 } => count_near(&ctx, *j, *delta, *n1, *n2),
        Command::DioSum { kind, p } => dio_sum(&ctx, kind, *p),
        Command::Decorrelate { psi, factors } => decorrelate(&ctx, psi.as_deref(), factors),
        Command::ScanClt {
            nmax,
            b,
            big_b,
            distance,
        } => scan_clt(
            &ctx,
            *nmax,
            Thresholds {
                b: *b,
                big_b: *big_b,
            },
            *distance,
        ),
        Command::CltRun { ell, n } => clt_run(&ctx, ell.as_deref(), n.as_deref()),
        Command::Counterexample { gamma, ell } => counterexample(gamma, ell),
        Command::VectorCov { n, phi2 } => vector_cov(&ctx, *n, phi2.as_deref()),
        Command::Sft(cmd) => sft(&ctx, cmd),
    }
}

fn cf(ctx: &Ctx, count: usize) -> Result<Report> {
    let t = ctx.table(count.max(1))?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for n in 0..t.len() {
        let theta = t.theta(n).to_f64();
        rows.push(vec![
            Cell::from(n),
            Cell::from(t.a(n)),
            Cell::Big(t.p(n).to_string()),
            Cell::Big(t.q(n).to_string()),
            Cell::from(theta),
        ]);
        records.push(json!({
            "n": n, "a": t.a(n), "p": t.p(n).to_string(), "q": t.q(n).to_string(), "theta": theta,
        }));
    }
    let doc = merge(
        json!({ "alpha": ctx.spec.to_string(), "alpha_value": t.alpha_f64(), "bits": t.bits() }),
        json!({ "records": records }),
    );
    Ok(Report::table(
        vec!["n", "a_n", "p_n", "q_n", "theta_n"],
        rows,
        doc,
    ))
}

fn ostrowski(ctx: &Ctx, cmd: &OstrowskiCmd) -> Result<Report> {
    let (lines, doc) = match cmd {
        OstrowskiCmd::Expand { n } => {
            let t = ctx.covering(*n, 2)?;
            let w = expand(&t, *n)?;
            (
                vec![w.to_string()],
                json!({ "n": n.to_string(), "digits": w.digits }),
            )
        }
        OstrowskiCmd::Check { word } => {
            let w = OstrowskiDigits::new(parse_digits(word)?);
            let t = ctx.table(w.digits.len() + 3)?;
            let value = reconstruct(&t, &w)?;
            let ok = is_admissible(&t, &w);
            (
                vec![ok.to_string()],
                json!({ "digits": w.digits, "admissible": ok, "value": value.to_string() }),
            )
        }
        OstrowskiCmd::Enumerate { m } => {
            let t = ctx.table(m + 3)?;
            let words: Vec<OstrowskiDigits> = enumerate_admissible(&t, *m).collect();
            let lines = words.iter().map(|w| w.to_string()).collect();
            let digits: Vec<&Vec<u64>> = words.iter().map(|w| &w.digits).collect();
            (
                lines,
                json!({ "m": m, "count": words.len(), "words": digits }),
            )
        }
    };
    let mut r = Report::table(
        vec![],
        vec![],
        merge(json!({ "alpha": ctx.spec.to_string() }), doc),
    );
    r.lines = Some(lines);
    Ok(r)
}

fn variance(
    ctx: &Ctx,
    nmax: u64,
    method: VarianceMethod,
    cutoff: u64,
    samples: usize,
) -> Result<Report> {
    if nmax == 0 {
        return Err(Error::InvalidInput("nmax must be at least 1".into()));
    }
    let table = Arc::new(ctx.covering(nmax as u128, 3)?);
    let sums = ErgodicSums::new(ctx.phi(&table)?, Arc::clone(&table));
    let (columns, rows, records) = match method {
        VarianceMethod::Exact => {
            let scan = sums.variance_scan(nmax);
            let rows: Vec<Vec<Cell>> = (1..=nmax)
                .map(|n| vec![Cell::from(n), Cell::from(scan[n as usize])])
                .collect();
            let records: Vec<Value> = (1..=nmax)
                .map(|n| json!({ "n": n, "variance": scan[n as usize] }))
                .collect();
            (vec!["n", "variance"], rows, records)
        }
        VarianceMethod::Fourier => {
            let fv = sums.fourier(cutoff);
            let mut rows = Vec::new();
            let mut records = Vec::new();
            for n in 1..=nmax {
                let (v, tail) = fv.variance(n)?;
                rows.push(vec![Cell::from(n), Cell::from(v), Cell::from(tail)]);
                records.push(json!({ "n": n, "variance": v, "tail_bound": tail }));
            }
            (vec!["n", "variance", "tail_bound"], rows, records)
        }
    };
    let mut doc = merge(ctx.header(), json!({ "records": records }));
    let mut report_notes = Vec::new();
    if samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.cli.global.seed);
        let mut worst: f64 = 0.0;
        let mut skipped = 0usize;
        for _ in 0..samples {
            let n = rng.gen_range(1..=nmax);
            let x = Phase(rng.gen::<u128>());
            match sums.sum_naive(n, x) {
                Ok(direct) => worst = worst.max((sums.profile(n)?.eval_phase(x) - direct).abs()),
                Err(Error::PrecisionExhausted { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        doc["cross_check"] =
            json!({ "samples": samples, "skipped": skipped, "max_abs_diff": worst });
        report_notes.push(("cross_check_max_abs_diff", fmt_real(worst)));
        report_notes.push(("cross_check_skipped", skipped.to_string()));
    }
    let mut r = Report::table(columns, rows, doc);
    for (k, v) in report_notes {
        r = r.note(k, v);
    }
    Ok(r)
}

fn count_near(ctx: &Ctx, j: usize, delta: f64, n1: u128, n2: u128) -> Result<Report> {
    let t = ctx.table(j + 3)?;
    let count = count_near_multiples(&t, j, delta, n1, n2)?;
    let q_next = t.try_q_u128(j + 1)?;
    let bound = counting_bound(delta, q_next, n2 - n1);
    let ratio = (bound > 0.0).then(|| count as f64 / bound);
    let doc = merge(
        json!({ "alpha": ctx.spec.to_string() }),
        json!({ "j": j, "delta": delta, "n1": n1.to_string(), "n2": n2.to_string(),
                "lhs": count.to_string(), "rhs_shape": bound, "ratio": ratio }),
    );
    Ok(Report::table(
        vec!["j", "delta", "n1", "n2", "lhs", "rhs_shape", "ratio"],
        vec![vec![
            Cell::from(j),
            Cell::from(delta),
            Cell::from(n1),
            Cell::from(n2),
            Cell::from(count),
            Cell::from(bound),
            Cell::from(ratio),
        ]],
        doc,
    ))
}

fn dio_sum(ctx: &Ctx, kind: &str, p: f64) -> Result<Report> {
    let kind: DioKind = kind.parse()?;
    let top = match kind {
        DioKind::S1 { t } => t + 1,
        DioKind::S2 { r } => r + 1,
        DioKind::D1 { n, ell } => ell.max(n + 1),
        DioKind::D2 { n, m, lambda } => lambda.max(n + 1).max(m),
        DioKind::D3 { n, m, ell, lambda } => lambda.max(n + 1).max(m).max(ell),
    };
    let t = ctx.table(top + 2)?;
    let r = diophantine_sum(&t, kind, p)?;
    let doc = merge(
        json!({ "alpha": ctx.spec.to_string(), "p": p }),
        to_json(&r)?,
    );
    Ok(Report::table(
        vec!["kind", "lhs", "rhs_shape", "ratio"],
        vec![vec![
            Cell::Text(kind.to_string()),
            Cell::from(r.lhs),
            Cell::from(r.rhs_shape),
            Cell::from(r.ratio),
        ]],
        doc,
    ))
}

fn decorrelate(ctx: &Ctx, psi: Option<&str>, factors: &str) -> Result<Report> {
    let bad = || Error::InvalidInput(format!("expected b:k pairs, got '{factors}'"));
    let pairs: Vec<(u64, usize)> = factors
        .split(',')
        .map(|f| {
            let (b, k) = f.trim().split_once(':').ok_or_else(bad)?;
            Ok((
                b.trim().parse().map_err(|_| bad())?,
                k.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect::<Result<_>>()?;
    let top = pairs.iter().map(|p| p.1).max().ok_or_else(bad)?;
    let t = ctx.table(top + 3)?;
    let phi = ctx.phi(&t)?;
    let psi = match psi {
        Some(s) => s.parse::<PhiSpec>()?.build_one(t.alpha_phase())?,
        None => phi.clone(),
    };
    let fs: Vec<Factor> = pairs
        .iter()
        .map(|&(b, k)| {
            let q = u64::try_from(t.try_q_u128(k)?).map_err(|_| Error::ResourceExceeded {
                what: "denominator width",
                needed: t.q_u128(k),
                budget: u64::MAX as u128,
            })?;
            Ok(Factor { b, q })
        })
        .collect::<Result<_>>()?;
    let lhs = decorrelation_integral(&psi, &phi, t.alpha_phase(), &fs)?;
    let k_min = pairs.iter().map(|p| p.1).min().unwrap_or(0);
    // one-factor shape: |∫ ψ φ_{q_k}| ≲ 1/q_{k+1}
    let rhs = 1.0 / t.try_q_u128(k_min + 1)? as f64;
    let ratio = lhs.abs() / rhs;
    let doc = merge(
        ctx.header(),
        json!({ "factors": factors, "lhs": lhs, "rhs_shape": rhs, "ratio": ratio }),
    );
    Ok(Report::table(
        vec!["factors", "lhs", "rhs_shape", "ratio"],
        vec![vec![
            Cell::Text(factors.to_string()),
            Cell::from(lhs),
            Cell::from(rhs),
            Cell::from(ratio),
        ]],
        doc,
    ))
}

fn scan_clt(ctx: &Ctx, nmax: u64, thresholds: Thresholds, distance: bool) -> Result<Report> {
    if nmax < 2 {
        return Err(Error::InvalidInput("nmax must be at least 2".into()));
    }
    let table = Arc::new(ctx.covering(nmax as u128, 4)?);
    let sums = ErgodicSums::new(ctx.phi(&table)?, Arc::clone(&table));
    let scan = sums.variance_scan(nmax);
    let report = scan_sets(sums.phi(), &table, &scan, thresholds)?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for r in &report.records {
        let d = if distance && r.variance > 0.0 {
            let d = normalized_distribution(&sums, r.n)?.kolmogorov_to_normal();
            sums.clear_cache();
            Some(d)
        } else {
            None
        };
        rows.push(vec![
            Cell::from(r.n),
            Cell::from(r.variance),
            Cell::from(r.m_of_n),
            Cell::from(d),
            Cell::from(r.in_w),
            Cell::from(r.in_v),
            Cell::from(r.in_z),
            Cell::from(r.in_e0),
        ]);
        records.push(json!({
            "n": r.n, "variance": r.variance, "m_of_n": r.m_of_n, "d_kolmogorov": d,
            "flags": { "w": r.in_w, "v": r.in_v, "z": r.in_z, "e0": r.in_e0 },
        }));
    }
    let doc = merge(
        ctx.header(),
        json!({
            "thresholds": to_json(&report.thresholds)?,
            "c0": report.c0,
            "density": { "w": report.density_w, "v": report.density_v,
                         "z": report.density_z, "e0": report.density_e0 },
            "record_variances": to_json(&report.record_variances)?,
            "records": records,
        }),
    );
    Ok(Report::table(
        vec![
            "n",
            "variance",
            "m_of_n",
            "d_kolmogorov",
            "in_w",
            "in_v",
            "in_z",
            "in_e0",
        ],
        rows,
        doc,
    )
    .note("c0", fmt_real(report.c0))
    .note("density_w", fmt_real(report.density_w))
    .note("density_v", fmt_real(report.density_v))
    .note("density_z", fmt_real(report.density_z))
    .note("density_e0", fmt_real(report.density_e0))
    .json_default())
}

fn clt_rows(records: &[crate::clt::CltReport]) -> Vec<Vec<Cell>> {
    records
        .iter()
        .map(|r| {
            vec![
                r.ell.map_or(Cell::Empty, Cell::from),
                Cell::from(r.n),
                Cell::from(r.variance),
                Cell::from(r.m_of_n),
                Cell::from(r.d_kolmogorov),
                Cell::from(r.support_radius),
            ]
        })
        .collect()
}

const CLT_COLUMNS: [&str; 6] = [
    "ell",
    "n",
    "variance",
    "m_of_n",
    "d_kolmogorov",
    "support_radius",
];

fn clt_run(ctx: &Ctx, ell: Option<&str>, n: Option<&str>) -> Result<Report> {
    let (selector, table) = match (ell, n) {
        (Some(e), None) => {
            let ells: Vec<usize> = parse_index_list(e)?
                .into_iter()
                .map(|x| x as usize)
                .collect();
            let top = ells.iter().copied().max().unwrap_or(0);
            (NSelector::RecordVariance(ells), ctx.table(top + 3)?)
        }
        (None, Some(ns)) => {
            let ns = parse_index_list(ns)?;
            let top = ns.iter().copied().max().unwrap_or(1);
            (NSelector::Explicit(ns), ctx.covering(top as u128, 2)?)
        }
        _ => {
            return Err(Error::InvalidInput(
                "give exactly one of --ell or --n".into(),
            ))
        }
    };
    let table = Arc::new(table);
    let sums = ErgodicSums::new(ctx.phi(&table)?, Arc::clone(&table));
    let records = clt_experiment(&sums, &selector)?;
    let doc = merge(ctx.header(), json!({ "records": to_json(&records)? }));
    Ok(Report::table(CLT_COLUMNS.to_vec(), clt_rows(&records), doc).json_default())
}

fn counterexample(gamma: &str, ell: &str) -> Result<Report> {
    let (num, den) = parse_ratio(gamma)?;
    let ells: Vec<usize> = parse_index_list(ell)?
        .into_iter()
        .map(|x| x as usize)
        .collect();
    let r = counterexample_experiment(num, den, &ells)?;
    let doc = json!({
        "alpha": r.spec.to_string(),
        "phi": "phi0",
        "partial_quotients": r.partial_quotients,
        "radius_ratio": r.radius_ratio,
        "min_distance": r.min_distance,
        "records": to_json(&r.records)?,
    });
    Ok(
        Report::table(CLT_COLUMNS.to_vec(), clt_rows(&r.records), doc)
            .note("radius_ratio", fmt_real(r.radius_ratio))
            .note("min_distance", fmt_real(r.min_distance))
            .json_default(),
    )
}

fn vector_cov(ctx: &Ctx, n: u64, phi2: Option<&str>) -> Result<Report> {
    let t = ctx.covering(n as u128, 2)?;
    let alpha = t.alpha_phase();
    let mut fs = ctx.phi_spec()?.build(alpha)?;
    if let Some(s) = phi2 {
        fs.extend(s.parse::<PhiSpec>()?.build(alpha)?);
    }
    if fs.len() != 2 {
        return Err(Error::InvalidInput(
            "vector-cov needs two functions: --phi billiard, or --phi with --phi2".into(),
        ));
    }
    let c = vector_covariance(&fs[0], &fs[1], &t, n)?;
    let (lo, hi) = c.eigenvalues();
    let doc = merge(
        ctx.header(),
        json!({ "n": n, "covariance": to_json(&c)?, "eigenvalues": [lo, hi] }),
    );
    Ok(Report::table(
        vec!["n", "xx", "xy", "yy", "eig_min", "eig_max"],
        vec![vec![
            Cell::from(n),
            Cell::from(c.xx),
            Cell::from(c.xy),
            Cell::from(c.yy),
            Cell::from(lo),
            Cell::from(hi),
        ]],
        doc,
    )
    .json_default())
}

type Entry = (Option<usize>, Option<usize>, f64);

/// Long-form rows `(quantity, i, j, value)` for matrix-shaped output.
fn long_rows(items: &[(&str, Vec<Entry>)]) -> Vec<Vec<Cell>> {
    let mut rows = Vec::new();
    for (name, entries) in items {
        for &(i, j, v) in entries {
            rows.push(vec![
                Cell::Text(name.to_string()),
                i.map_or(Cell::Empty, Cell::from),
                j.map_or(Cell::Empty, Cell::from),
                Cell::from(v),
            ]);
        }
    }
    rows
}

fn vector_entries(v: &[f64]) -> Vec<(Option<usize>, Option<usize>, f64)> {
    v.iter()
        .enumerate()
        .map(|(i, &x)| (Some(i), None, x))
        .collect()
}

fn sft(ctx: &Ctx, cmd: &SftCmd) -> Result<Report> {
    let alpha = json!({ "alpha": ctx.spec.to_string() });
    match cmd {
        SftCmd::Build => {
            let period = detect_period(&ctx.spec)?;
            let sys = TransitionSystem::build(&ctx.spec)?;
            let doc = merge(
                alpha,
                json!({ "period": to_json(&period)?, "transition": to_json(&sys)? }),
            );
            let words: Vec<String> = sys
                .alphabet
                .iter()
                .map(|w| w.iter().map(u64::to_string).collect::<String>())
                .collect();
            let mut entries = Vec::new();
            for i in 0..sys.len() {
                for j in 0..sys.len() {
                    entries.push((Some(i), Some(j), sys.matrix[i][j] as f64));
                }
            }
            let rows = long_rows(&[("B", entries)]);
            Ok(
                Report::table(vec!["quantity", "i", "j", "value"], rows, doc)
                    .note("p", period.p)
                    .note("alphabet", words.join(" "))
                    .json_default(),
            )
        }
        SftCmd::Measure { word } => {
            let sys = TransitionSystem::build(&ctx.spec)?;
            let m = MarkovMeasure::new(&sys, DEFAULT_TOLERANCE)?;
            let cyl = match word {
                Some(w) => {
                    let letters: Vec<usize> =
                        parse_digits(w)?.into_iter().map(|x| x as usize).collect();
                    let value = m.cylinder(&sys, &letters);
                    Some(json!({ "word": letters, "admissible": value.is_some(),
                                 "measure": value.unwrap_or(0.0) }))
                }
                None => None,
            };
            let doc = merge(
                alpha,
                json!({
                    "lambda": m.lambda(), "u": m.perron.u, "v": m.perron.v,
                    "pi": m.stationary, "p": m.kernel, "entropy": m.entropy(),
                    "ln_lambda": m.lambda().ln(), "residual": m.perron.residual,
                    "row_sum_error": m.row_sum_error(),
                    "stationarity_error": m.stationarity_error(),
                    "cylinder": cyl,
                }),
            );
            let mut kernel = Vec::new();
            for (i, row) in m.kernel.iter().enumerate() {
                for (j, &p) in row.iter().enumerate() {
                    kernel.push((Some(i), Some(j), p));
                }
            }
            let mut items = vec![
                ("lambda", vec![(None, None, m.lambda())]),
                ("entropy", vec![(None, None, m.entropy())]),
                ("u", vector_entries(&m.perron.u)),
                ("v", vector_entries(&m.perron.v)),
                ("pi", vector_entries(&m.stationary)),
                ("P", kernel),
            ];
            if let Some(c) = &cyl {
                items.push((
                    "cylinder",
                    vec![(None, None, c["measure"].as_f64().unwrap_or(0.0))],
                ));
            }
            Ok(
                Report::table(vec!["quantity", "i", "j", "value"], long_rows(&items), doc)
                    .json_default(),
            )
        }
        SftCmd::Scan {
            nmax,
            fit_n,
            lo_pct,
            hi_pct,
        } => {
            let table = Arc::new(ctx.covering(*nmax as u128, 4)?);
            let phi = ctx.phi(&table)?;
            let scan = crate::sums::variance_scan(&phi, table.alpha_phase(), *nmax);
            let w = variance_window_scan(&scan, *fit_n, (*lo_pct, *hi_pct))?;
            let growth = growth_check(&ctx.spec, 20)?;
            let j_max = table.len().saturating_sub(2).min(64);
            let gamma_fraction =
                gamma_condition_scan(&phi, &table, j_max, 1.0 / (4.0 * std::f64::consts::PI))?;
            let doc = merge(
                ctx.header(),
                json!({ "window": to_json(&w)?, "lambda": growth.lambda,
                        "gamma_condition_fraction": gamma_fraction }),
            );
            let rows = w
                .outside
                .iter()
                .map(|&(n, c)| vec![Cell::from(n), Cell::from(c)])
                .collect();
            Ok(Report::table(vec!["n", "outside_window"], rows, doc)
                .note("eta1", fmt_real(w.eta1))
                .note("eta2", fmt_real(w.eta2))
                .note("fraction", fmt_real(w.fraction))
                .json_default())
        }
    }
}
