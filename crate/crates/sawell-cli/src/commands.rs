use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use sawell::extensions::{classify, params_from_beta, params_from_omega, params_from_theta};
use sawell::grid::{fmt_real, linspace, GridFunction};
use sawell::legendre::{p_trig, q_trig, truncated_norm_sqr, Family, LegendreIndex};
use sawell::oracle::{fd_partner_spectrum_extrapolated, fd_spectrum_extrapolated, schrodinger_residual, ResidualGrid};
use sawell::spectral::{levels_parity_time, positive_levels, spectrum, Branch};
use sawell::susy::{build_chain, ladder_apply, partner_potential, state_degree, Direction, LadderOperator, Partner, SusyChain};
use sawell::{Discretization, EnergyLevel, ExtensionClass, ExtensionParams, LevelKind, RootFindConfig, StencilOrder};

use crate::cli::{Format, LegendreFamily, OracleGridArgs, ScanArgs, ScanBranch, ScanFamily};
use crate::error::CliError;
use crate::input;

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(CliError::numerical)?;
    s.push('\n');
    Ok(s)
}

fn stencil(grid: &OracleGridArgs) -> Result<StencilOrder, CliError> {
    match grid.stencil {
        2 => Ok(StencilOrder::Second),
        4 => Ok(StencilOrder::Fourth),
        other => Err(CliError::Input(format!("--stencil must be 2 or 4, got {other}"))),
    }
}

fn kind_word(kind: LevelKind) -> &'static str {
    match kind {
        LevelKind::Positive => "positive",
        LevelKind::Zero => "zero",
        LevelKind::Negative => "negative",
    }
}

#[derive(Serialize)]
struct GroundReport {
    kind: LevelKind,
    branch: Branch,
    #[serde(rename = "E")]
    energy: f64,
}

#[derive(Serialize)]
struct ClassifyReport {
    params: ExtensionParams,
    class: ExtensionClass,
    ground: Option<GroundReport>,
}

pub fn classify_cmd(p: &ExtensionParams, cfg: &RootFindConfig, format: Option<Format>) -> Result<String, CliError> {
    let spec = spectrum(p, cfg).map_err(CliError::numerical)?;
    let class = classify(p, Some(&spec.levels));
    let ground = spec.ground().map(|g| GroundReport {
        kind: g.kind,
        branch: g.branch,
        energy: g.energy,
    });
    let mechanism = serde_json::to_value(class.parity_mechanism).map_err(CliError::numerical)?;
    let mechanism = mechanism.as_str().unwrap_or_default().to_string();
    match format {
        Some(Format::Json) => json(&ClassifyReport {
            params: *p,
            class,
            ground,
        }),
        Some(Format::Csv) => {
            let mut out = String::from("time_reversal,parity,parity_mechanism,ground,branch,E\n");
            let (kind, branch, e) = ground.map_or(("none".to_string(), String::new(), String::new()), |g| {
                (kind_word(g.kind).to_string(), g.branch.label().to_string(), fmt_real(g.energy))
            });
            let parity = class.parity.map_or("unknown".to_string(), |b| b.to_string());
            writeln!(out, "{},{parity},{mechanism},{kind},{branch},{e}", class.time_reversal).ok();
            Ok(out)
        }
        None => {
            let ground = ground.map_or("ground=none".to_string(), |g| {
                format!("ground={} branch={} E={}", kind_word(g.kind), g.branch.label(), fmt_real(g.energy))
            });
            Ok(format!("time_reversal={} parity={mechanism} {ground}\n", class.time_reversal))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct LevelDelta {
    index: usize,
    analytic: f64,
    oracle: f64,
    delta: f64,
    rel_delta: f64,
}

fn compare(analytic: &[f64], oracle: &[f64], unit: f64) -> Vec<LevelDelta> {
    analytic
        .iter()
        .zip(oracle)
        .enumerate()
        .map(|(index, (&e, &o))| LevelDelta {
            index,
            analytic: e,
            oracle: o,
            delta: o - e,
            rel_delta: (o - e).abs() / e.abs().max(unit),
        })
        .collect()
}

fn expanded(levels: &[EnergyLevel]) -> Vec<f64> {
    levels
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity as usize))
        .collect()
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    levels: &'a [EnergyLevel],
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<LevelDelta>>,
}

pub fn spectrum_cmd(
    p: &ExtensionParams,
    cfg: &RootFindConfig,
    count: Option<usize>,
    oracle: Option<&OracleGridArgs>,
    format: Option<Format>,
) -> Result<String, CliError> {
    let mut levels = spectrum(p, cfg).map_err(CliError::numerical)?.levels;
    if let Some(c) = count {
        levels.truncate(c);
    }
    let deltas = match oracle {
        Some(grid) => {
            let energies = expanded(&levels);
            let d = Discretization::new(grid.points, p.a, stencil(grid)?);
            let fd = fd_spectrum_extrapolated(p, &d, energies.len()).map_err(CliError::numerical)?;
            Some(compare(&energies, fd.best(), 1.0 / (2.0 * p.a).powi(2)))
        }
        None => None,
    };
    match format.unwrap_or(Format::Csv) {
        Format::Json => json(&SpectrumReport {
            levels: &levels,
            oracle: deltas,
        }),
        Format::Csv => {
            let mut out = String::from(sawell::spectral::SPECTRUM_CSV_HEADER);
            if deltas.is_some() {
                out.push_str(",oracle_E,rel_delta");
            }
            out.push('\n');
            let mut offset = 0;
            for l in &levels {
                out.push_str(&l.csv_row());
                if let Some(d) = &deltas {
                    let first = &d[offset];
                    write!(out, ",{},{}", fmt_real(first.oracle), fmt_real(first.rel_delta)).ok();
                }
                offset += l.multiplicity as usize;
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Names of the swept parameters of each family, in `--angles` order.
fn angle_names(family: ScanFamily) -> &'static [&'static str] {
    match family {
        ScanFamily::Theta => &["t0", "t1", "t2"],
        ScanFamily::Beta => &["b0", "b1"],
        ScanFamily::Omega => &["w0", "w1", "w2"],
        ScanFamily::ParityTime => &["phi1", "phi2"],
    }
}

struct Sweep {
    names: Vec<String>,
    points: Vec<Vec<f64>>,
}

fn sweep(args: &ScanArgs) -> Result<Sweep, CliError> {
    let names = angle_names(args.family);
    if args.angles.len() != names.len() {
        return Err(CliError::Input(format!("--angles needs {} values for this family, got {}", names.len(), args.angles.len())));
    }
    let known = |v: &str| v == "psi" && args.family != ScanFamily::ParityTime || names.contains(&v);
    let axis = |name: &str, from: f64, to: f64, steps: usize| -> Result<Vec<f64>, CliError> {
        if !known(name) {
            return Err(CliError::Input(format!("cannot sweep `{name}` in this family")));
        }
        if steps == 0 || !from.is_finite() || !to.is_finite() {
            return Err(CliError::Input("sweep needs finite bounds and at least one step".into()));
        }
        Ok(linspace(from, to, steps))
    };
    let first = axis(&args.vary, args.from, args.to, args.steps)?;
    let mut out = Sweep {
        names: vec![args.vary.clone()],
        points: first.iter().map(|&v| vec![v]).collect(),
    };
    if let Some(v2) = &args.vary2 {
        if v2 == &args.vary {
            return Err(CliError::Input("--vary2 must differ from --vary".into()));
        }
        let (Some(from2), Some(to2), Some(steps2)) = (args.from2, args.to2, args.steps2) else {
            return Err(CliError::Input("--vary2 needs --from2, --to2 and --steps2".into()));
        };
        let second = axis(v2, from2, to2, steps2)?;
        out.names.push(v2.clone());
        out.points = first.iter().flat_map(|&a| second.iter().map(move |&b| vec![a, b])).collect();
    } else if args.from2.is_some() || args.to2.is_some() || args.steps2.is_some() {
        return Err(CliError::Input("--from2/--to2/--steps2 need --vary2".into()));
    }
    Ok(out)
}

fn scan_point(args: &ScanArgs, names: &[String], values: &[f64], cfg: &RootFindConfig) -> Result<Vec<f64>, CliError> {
    let family_names = angle_names(args.family);
    let mut angles = args.angles.clone();
    let mut psi = args.psi;
    for (name, v) in names.iter().zip(values) {
        if name == "psi" {
            psi = *v;
        } else if let Some(i) = family_names.iter().position(|n| n == name) {
            angles[i] = *v;
        }
    }
    let levels = match args.family {
        ScanFamily::ParityTime => {
            let all = levels_parity_time(angles[0], angles[1], args.a, cfg).map_err(CliError::numerical)?;
            let keep = |b: Branch| match args.branch {
                ScanBranch::All => true,
                ScanBranch::Even => b == Branch::Eq19Even,
                ScanBranch::Odd => b == Branch::Eq19Odd,
            };
            all.into_iter().filter(|l| keep(l.branch)).collect()
        }
        family => {
            let p = match family {
                ScanFamily::Theta => params_from_theta(angles[0], angles[1], angles[2], psi, args.a),
                ScanFamily::Omega => params_from_omega(angles[0], angles[1], angles[2], psi, args.a),
                _ => {
                    let n = args.n.ok_or_else(|| CliError::Input("the beta family needs --n".into()))?;
                    params_from_beta(angles[0], angles[1], psi, n, args.a)
                }
            }
            .map_err(|e| CliError::Input(e.to_string()))?;
            positive_levels(&p, cfg).map_err(CliError::numerical)?
        }
    };
    Ok(levels.iter().take(args.roots).filter_map(|l| l.s).collect())
}

#[derive(Serialize)]
struct ScanRow {
    values: Vec<f64>,
    roots: Vec<f64>,
}

pub fn scan_cmd(args: &ScanArgs, format: Option<Format>) -> Result<String, CliError> {
    let cfg = input::root_config(&args.root_args)?;
    let sweep = sweep(args)?;
    let results: Vec<Vec<f64>> = sweep
        .points
        .par_iter()
        .map(|values| scan_point(args, &sweep.names, values, &cfg))
        .collect::<Result<_, _>>()?;
    match format.unwrap_or(Format::Csv) {
        Format::Json => {
            let rows: Vec<ScanRow> = sweep
                .points
                .into_iter()
                .zip(results)
                .map(|(values, roots)| ScanRow { values, roots })
                .collect();
            json(&rows)
        }
        Format::Csv => {
            let mut out = format!("{},root_index,s\n", sweep.names.join(","));
            for (values, roots) in sweep.points.iter().zip(&results) {
                let prefix: Vec<String> = values.iter().map(|&v| fmt_real(v)).collect();
                for (i, s) in roots.iter().enumerate() {
                    writeln!(out, "{},{i},{}", prefix.join(","), fmt_real(*s)).ok();
                }
            }
            Ok(out)
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn partner_name(which: Partner) -> &'static str {
    match which {
        Partner::First => "first",
        Partner::Second => "second",
    }
}

fn sample_state(chain: &SusyChain, order: u32, which: Partner, n: u32, points: usize) -> Result<GridFunction, CliError> {
    let (lo, hi) = chain.guarded_interval();
    let level = chain.level(order).ok_or_else(|| CliError::Input(format!("order {order} not in chain")))?;
    let values = linspace(lo, hi, points)
        .into_iter()
        .map(|x| level.state(which, n, x).map(|v| (x, v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridFunction {
        x: values.iter().map(|v| v.0).collect(),
        values: values.iter().map(|v| v.1).collect(),
    })
}

/// Writes the chain files and returns a short summary.
pub fn susy_cmd(p: &ExtensionParams, cfg: &RootFindConfig, order: u32, points: usize, states: u32, dir: &Path) -> Result<String, CliError> {
    if points < 16 {
        return Err(CliError::Input("--points must be at least 16".into()));
    }
    if states == 0 {
        return Err(CliError::Input("--states must be at least 1".into()));
    }
    let chain = build_chain(p, order, cfg)?;
    std::fs::create_dir_all(dir)?;
    let report = chain.report(states);
    write_file(dir, "chain.json", &json(&report)?)?;

    let mut energies = String::from("order,n,E\n");
    for o in &report.orders {
        for row in &o.energies {
            writeln!(energies, "{},{},{}", o.order, row.n, fmt_real(row.energy)).ok();
        }
    }
    write_file(dir, "energies.csv", &energies)?;

    let (lo, hi) = chain.guarded_interval();
    let g = chain.ground;
    let mut residuals = String::from("order,partner,n,E,schrodinger_residual,ladder_cosine\n");
    for level in &chain.orders {
        let l = level.order;
        let mut pot = String::from("x,V1,V2\n");
        for x in linspace(lo, hi, points) {
            if let (Ok(v1), Ok(v2)) = (partner_potential(l, Partner::First, &g, x), partner_potential(l, Partner::Second, &g, x)) {
                writeln!(pot, "{},{},{}", fmt_real(x), fmt_real(v1), fmt_real(v2)).ok();
            }
        }
        write_file(dir, &format!("potential_L{l}.csv"), &pot)?;

        let op = LadderOperator {
            order: l,
            direction: Direction::Annihilate,
            ground: g,
        };
        for which in [Partner::First, Partner::Second] {
            let first_n = state_degree(l, which) + 1;
            for n in first_n..first_n + states {
                let f = sample_state(&chain, l, which, n, points)?;
                write_file(dir, &format!("state_L{l}_{}_n{n}.csv", partner_name(which)), &f.to_csv())?;
                let grid = ResidualGrid {
                    lo,
                    hi,
                    n_points: points.max(2001),
                    order: StencilOrder::Fourth,
                };
                let e = level.energy(n);
                let res = schrodinger_residual(
                    |x| partner_potential(l, which, &g, x).unwrap_or(f64::NAN),
                    |x| level.state(which, n, x).unwrap_or_default(),
                    e,
                    &grid,
                )
                .map_err(CliError::numerical)?;
                // A maps (L,1) states onto (L,2) states with the same n
                let cosine = if which == Partner::First && n > l {
                    let dense = sample_state(&chain, l, which, n, 2001)?;
                    let mapped = ladder_apply(&op, &dense)?;
                    let target = sample_state(&chain, l, Partner::Second, n, 2001)?.slice(2, 2001 - 2);
                    fmt_real(mapped.cosine_similarity(&target))
                } else {
                    String::new()
                };
                writeln!(residuals, "{l},{},{n},{},{},{cosine}", partner_name(which), fmt_real(e), fmt_real(res)).ok();
            }
        }
    }
    write_file(dir, "residuals.csv", &residuals)?;
    Ok(format!(
        "chain s0={} delta={} orders=1..{order}; files written to {}\n",
        fmt_real(chain.ground.s0),
        fmt_real(chain.ground.delta),
        dir.display()
    ))
}

pub fn legendre_cmd(
    family: LegendreFamily,
    ell: u32,
    n: u32,
    points: usize,
    theta_max: f64,
    norm_eps: &[f64],
    format: Option<Format>,
) -> Result<String, CliError> {
    let idx = LegendreIndex::new(ell, n);
    let fam = match family {
        LegendreFamily::P => Family::P,
        LegendreFamily::Q => Family::Q,
    };
    let eval = |t: f64| match fam {
        Family::Q => q_trig(idx, t),
        Family::P => p_trig(idx, t),
    };
    eval(0.0).map_err(|e| CliError::Input(e.to_string()))?;
    if !norm_eps.is_empty() {
        let mut rows = Vec::new();
        for &eps in norm_eps {
            if !(eps > 0.0 && eps < 1.5) {
                return Err(CliError::Input(format!("epsilon {eps} outside (0, 1.5)")));
            }
            rows.push((eps, truncated_norm_sqr(fam, idx, eps).map_err(CliError::numerical)?));
        }
        return match format.unwrap_or(Format::Csv) {
            Format::Json => json(&rows.iter().map(|&(eps, norm_sqr)| serde_json::json!({"eps": eps, "norm_sqr": norm_sqr})).collect::<Vec<_>>()),
            Format::Csv => {
                let mut out = String::from("eps,norm_sqr\n");
                for (eps, v) in rows {
                    writeln!(out, "{},{}", fmt_real(eps), fmt_real(v)).ok();
                }
                Ok(out)
            }
        };
    }
    if points < 2 || !(theta_max > 0.0 && theta_max < std::f64::consts::FRAC_PI_2) {
        return Err(CliError::Input("need --points ≥ 2 and 0 < --theta-max < π/2".into()));
    }
    let samples: Vec<(f64, sawell::Complex64)> = linspace(-theta_max, theta_max, points)
        .into_iter()
        .map(|t| eval(t).map(|v| (t, v)))
        .collect::<Result<_, _>>()
        .map_err(CliError::numerical)?;
    match format.unwrap_or(Format::Csv) {
        Format::Json => json(
            &samples
                .iter()
                .map(|(t, v)| serde_json::json!({"theta": t, "re": v.re, "im": v.im}))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut out = String::from("theta,re,im\n");
            for (t, v) in samples {
                writeln!(out, "{},{},{}", fmt_real(t), fmt_real(v.re), fmt_real(v.im)).ok();
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct OracleReport {
    eigenvalues: Vec<f64>,
    h: f64,
    extrapolated: Vec<f64>,
    comparison: Vec<LevelDelta>,
}

pub fn oracle_cmd(
    p: &ExtensionParams,
    cfg: &RootFindConfig,
    grid: &OracleGridArgs,
    k: usize,
    partner: Option<u32>,
    format: Option<Format>,
) -> Result<String, CliError> {
    let order = stencil(grid)?;
    let d = Discretization::new(grid.points, p.a, order);
    let (fd, analytic) = match partner {
        Some(l) => {
            let chain = build_chain(p, l, cfg)?;
            let level = chain.level(l).expect("order materialized");
            let analytic: Vec<f64> = (level.lowest_admissible_n()..).take(k).map(|n| level.energy(n)).collect();
            let fd = fd_partner_spectrum_extrapolated(&chain, l, &d, k).map_err(|e| CliError::Input(e.to_string()))?;
            (fd, analytic)
        }
        None => {
            let levels = spectrum(p, cfg).map_err(CliError::numerical)?.levels;
            let mut analytic = expanded(&levels);
            analytic.truncate(k);
            let fd = fd_spectrum_extrapolated(p, &d, k).map_err(|e| CliError::Input(e.to_string()))?;
            (fd, analytic)
        }
    };
    let extrapolated = fd.best().to_vec();
    let report = OracleReport {
        comparison: compare(&analytic, &extrapolated, 1.0 / (2.0 * p.a).powi(2)),
        eigenvalues: fd.eigenvalues,
        h: fd.h,
        extrapolated,
    };
    match format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("index,analytic,oracle,delta,rel_delta\n");
            for c in &report.comparison {
                writeln!(out, "{},{},{},{},{}", c.index, fmt_real(c.analytic), fmt_real(c.oracle), fmt_real(c.delta), fmt_real(c.rel_delta)).ok();
            }
            Ok(out)
        }
    }
}
