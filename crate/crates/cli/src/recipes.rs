use std::fmt::Write as _;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use rmt_lab::combinatorics::{freeness_check, gue_moment_exact, mixed_gue_moment_limit, nc_moment};
use rmt_lab::edge::{edge_statistic_mc, f2_cdf, ks_distance, F2Table};
use rmt_lab::ensembles::{sample, wishart_product, DiagonalMode, EnsembleKind, EnsembleSpec, EntryLaw, Normalization};
use rmt_lab::harer_zagier::{hz_bk_symbolic, lambda_max_tail_optimized, HzState};
use rmt_lab::hermite::KernelDensity;
use rmt_lab::parallel::{map_trials, mean_and_se};
use rmt_lab::paths::{
    catalan_hankel_det, catalan_lattice, dyson_crossing_check, dyson_csv, dyson_trajectory, gv_determinant,
    gv_vertex_disjoint_sum, km_determinant, km_enumerate, WalkSpec, WeightedDag,
};
use rmt_lab::rsk::{bdj_statistic_mc, lis, random_permutation, rsk};
use rmt_lab::spectral::{
    general_eigenvalues, hermitian_eigenvalues, marchenko_pastur_density, semicircle_density, stieltjes_invert,
    Histogram, HistogramMode, SpectralMeasure, DEFAULT_EPS_SCHEDULE, DEFAULT_TOL,
};

use crate::{CliError, CliResult, Command, Common, Diagonal, DensityKind, Ensemble, EnsembleArgs, Law, Measure};

/// What a recipe produces: the file body and the headline fields of the summary line.
struct Report {
    ext: &'static str,
    body: String,
    summary: Value,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub(crate) fn run(command: Command) -> CliResult<()> {
    let (name, common, report) = match command {
        Command::Sample { ensemble, trial, common } => ("sample", common.clone(), sample_cmd(&ensemble, trial, &common)?),
        Command::Esd { ensemble, trials, bins, lo, hi, common } => {
            ("esd", common.clone(), esd(&ensemble, trials, bins, lo, hi, &common)?)
        }
        Command::Density { kind, n, unnormalized, points, extent, common } => {
            ("density", common, density(kind, n, !unnormalized, points, extent)?)
        }
        Command::Moments { m, n, common } => ("moments", common, moments(m, n)?),
        Command::Stieltjes { measure, ratio, n, a, b, grid, common } => {
            ("stieltjes", common, stieltjes(measure, ratio, n, a, b, grid)?)
        }
        Command::Hz { k_max, n, tail, common } => ("hz", common, hz(k_max, n, tail)?),
        Command::TracyWidom { t_min, t_max, dt, step, q_grid, common } => {
            ("tracy-widom", common, tracy_widom(t_min, t_max, dt, step, q_grid)?)
        }
        Command::EdgeMc { n, trials, common } => ("edge-mc", common.clone(), edge_mc(n, trials, &common)?),
        Command::Dyson { ensemble, n, steps, delta, trial, common } => {
            ("dyson", common.clone(), dyson(ensemble, n, steps, delta, trial, &common)?)
        }
        Command::Km { horizon, starts, ends, p, sites, common } => ("km", common, km(horizon, starts, ends, &p, &sites)?),
        Command::Gv { lattice, vertices, edges, sources, sinks, common } => {
            ("gv", common, gv(lattice, vertices, &edges, sources, sinks)?)
        }
        Command::Rsk { perm, random, common } => ("rsk", common.clone(), rsk_cmd(perm, random, &common)?),
        Command::Bdj { n, trials, common } => ("bdj", common.clone(), bdj(n, trials, &common)?),
        Command::Circular { n, trials, unnormalized, common } => {
            ("circular", common.clone(), circular(n, trials, !unnormalized, &common)?)
        }
        Command::Freeness { n, trials, common } => ("freeness", common.clone(), freeness(n, trials, &common)?),
    };
    let path = common.out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.{}", report.ext)));
    std::fs::write(&path, &report.body).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let mut line = Map::new();
    line.insert("schema".into(), json!(1));
    line.insert("command".into(), json!(name));
    line.insert("seed".into(), json!(common.seed));
    line.insert("output".into(), json!(path.display().to_string()));
    if let Value::Object(fields) = report.summary {
        line.extend(fields);
    }
    println!("{}", Value::Object(line));
    Ok(())
}

fn build_spec(e: &EnsembleArgs, seed: u64) -> EnsembleSpec {
    let law = match e.law {
        Law::Gauss => EntryLaw::Gauss,
        Law::Rademacher => EntryLaw::Rademacher,
        Law::Uniform => EntryLaw::UniformSymmetric,
        Law::Cauchy => EntryLaw::CauchyStd,
    };
    let spec = match e.ensemble {
        Ensemble::Gue => EnsembleSpec::gue(e.n),
        Ensemble::Goe => EnsembleSpec::goe(e.n),
        Ensemble::Ginibre => EnsembleSpec::ginibre(e.n),
        Ensemble::Wigner => EnsembleSpec::wigner(e.n, law),
        Ensemble::Wishart => EnsembleSpec::wishart(e.n, e.p.unwrap_or(e.n)).with_entry_law(law),
    };
    let diagonal = match e.diagonal {
        Diagonal::Standard => DiagonalMode::Standard,
        Diagonal::Unit => DiagonalMode::Unit,
        Diagonal::Zero => DiagonalMode::Zero,
    };
    let norm = if e.unnormalized { Normalization::Unnormalized } else { Normalization::Normalized };
    spec.with_seed(seed).with_diagonal(diagonal).with_normalization(norm)
}

fn ensemble_echo(e: &EnsembleArgs) -> Value {
    json!({
        "ensemble": format!("{:?}", e.ensemble).to_lowercase(),
        "n": e.n,
        "p": e.p,
        "law": format!("{:?}", e.law).to_lowercase(),
        "normalized": !e.unnormalized,
    })
}

fn sample_cmd(e: &EnsembleArgs, trial: u64, common: &Common) -> CliResult<Report> {
    let m = sample(&build_spec(e, common.seed), trial)?.entries;
    let mut body = String::from("row,col,re,im\n");
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            let _ = writeln!(body, "{i},{j},{},{}", z.re, z.im);
        }
    }
    Ok(Report {
        ext: "csv",
        body,
        summary: json!({"inputs": ensemble_echo(e), "trial": trial,
            "frobenius_norm": m.frobenius_norm(), "hermitian_defect": m.hermitian_defect()}),
    })
}

fn spectrum(spec: &EnsembleSpec, trial: u64) -> rmt_lab::Result<Vec<f64>> {
    let s = sample(spec, trial)?;
    if spec.kind == EnsembleKind::Wishart {
        hermitian_eigenvalues(&wishart_product(&s), DEFAULT_TOL)
    } else {
        hermitian_eigenvalues(&s.entries, DEFAULT_TOL)
    }
}

fn esd(e: &EnsembleArgs, trials: usize, bins: usize, lo: Option<f64>, hi: Option<f64>, common: &Common) -> CliResult<Report> {
    if e.ensemble == Ensemble::Ginibre {
        return Err(input("ginibre spectra are complex; use the circular subcommand"));
    }
    let spec = build_spec(e, common.seed);
    let ratio = spec.n as f64 / spec.p as f64;
    let limit: Option<Box<dyn Fn(f64) -> f64>> = match (e.ensemble, e.unnormalized) {
        (_, true) => None,
        (Ensemble::Wigner, _) if e.law == Law::Cauchy => None,
        (Ensemble::Wishart, _) if ratio <= 1.0 => Some(Box::new(move |x| marchenko_pastur_density(ratio, x))),
        (Ensemble::Wishart, _) => None,
        _ => Some(Box::new(semicircle_density)),
    };
    let (def_lo, def_hi) = match e.ensemble {
        Ensemble::Wishart => ((1.0 - ratio.sqrt()).powi(2) - 0.1, (1.0 + ratio.sqrt()).powi(2) + 0.1),
        _ if e.unnormalized => (-2.0 * (e.n as f64).sqrt() - 1.0, 2.0 * (e.n as f64).sqrt() + 1.0),
        _ => (-2.0, 2.0),
    };
    let (lo, hi) = (lo.unwrap_or(def_lo), hi.unwrap_or(def_hi));
    let parts = map_trials(trials, |t| {
        let mut h = Histogram::new(bins, lo, hi, HistogramMode::Density)?;
        h.extend(spectrum(&spec, t as u64)?);
        Ok(h)
    })?;
    let mut hist = Histogram::new(bins, lo, hi, HistogramMode::Density)?;
    for h in &parts {
        hist.merge(h)?;
    }
    let l1 = limit.map(|rho| hist.l1_distance_to_density(rho)).transpose()?;
    Ok(Report {
        ext: "csv",
        body: hist.to_csv(),
        summary: json!({"inputs": ensemble_echo(e), "trials": trials, "bins": bins, "range": [lo, hi],
            "l1_to_limit": l1, "outside_range": hist.underflow + hist.overflow}),
    })
}

fn density(kind: DensityKind, n: usize, normalized: bool, points: usize, extent: Option<f64>) -> CliResult<Report> {
    if points < 2 {
        return Err(input("need at least two grid points"));
    }
    let nf = n as f64;
    let mut body = String::new();
    let summary = match kind {
        DensityKind::Gue => {
            let q = KernelDensity::gue(n, normalized);
            let r = extent.unwrap_or(if normalized { 3.0 } else { 2.0 * nf.sqrt() + 4.0 });
            let h = 2.0 * r / (points - 1) as f64;
            body.push_str("x,density\n");
            let mut mass = 0.0;
            for i in 0..points {
                let x = -r + h * i as f64;
                let d = q.eval(Complex64::new(x, 0.0));
                mass += if i == 0 || i == points - 1 { 0.5 * d * h } else { d * h };
                let _ = writeln!(body, "{x},{d}");
            }
            json!({"n": n, "normalized": normalized, "extent": r, "points": points, "mass_on_grid": mass})
        }
        DensityKind::Ginibre => {
            let q = KernelDensity::ginibre(n, normalized);
            let r = extent.unwrap_or(if normalized { 1.3 } else { nf.sqrt() + 2.0 });
            let h = 2.0 * r / (points - 1) as f64;
            body.push_str("re,im,density\n");
            for i in 0..points {
                for j in 0..points {
                    let z = Complex64::new(-r + h * i as f64, -r + h * j as f64);
                    let _ = writeln!(body, "{},{},{}", z.re, z.im, q.eval(z));
                }
            }
            json!({"n": n, "normalized": normalized, "extent": r, "points": points,
                "density_at_origin": q.eval(Complex64::new(0.0, 0.0))})
        }
    };
    Ok(Report { ext: "csv", body, summary })
}

fn big_to_json(s: String) -> Value {
    s.parse::<u64>().map(Value::from).unwrap_or(Value::String(s))
}

fn moments(m: usize, n: Option<usize>) -> CliResult<Report> {
    let poly = gue_moment_exact(m)?;
    let coeffs: Vec<Value> = poly.genus_coeffs().iter().map(|c| big_to_json(c.to_string())).collect();
    let at_n = n.map(|n| poly.eval_exact(n as u64).to_string());
    let doc = json!({"m": m, "genus_coeffs": coeffs, "n": n, "value_at_n": at_n});
    Ok(Report {
        ext: "json",
        body: format!("{doc}\n"),
        summary: json!({"m": m, "genus_coeffs": coeffs, "value_at_n": at_n}),
    })
}

fn stieltjes(measure: Measure, ratio: f64, n: usize, a: f64, b: f64, grid: usize) -> CliResult<Report> {
    let mu = match measure {
        Measure::Semicircle => SpectralMeasure::Semicircle,
        Measure::MarchenkoPastur => SpectralMeasure::marchenko_pastur(ratio)?,
        Measure::GueKernel => SpectralMeasure::FiniteNKernel(KernelDensity::gue(n, true)),
    };
    let r = stieltjes_invert(|z| mu.stieltjes(z), a, b, &DEFAULT_EPS_SCHEDULE, grid)?;
    let mut body = String::from("x,density,exact\n");
    let mut sup = 0.0f64;
    for (&x, &d) in r.x.iter().zip(&r.density) {
        let exact = mu.density(x).unwrap_or(0.0);
        sup = sup.max((d - exact).abs());
        let _ = writeln!(body, "{x},{d},{exact}");
    }
    Ok(Report {
        ext: "csv",
        body,
        summary: json!({"measure": format!("{measure:?}").to_lowercase(), "interval": [a, b], "grid": grid,
            "sup_error": sup, "flagged": r.is_flagged()}),
    })
}

fn hz(k_max: usize, n: Option<usize>, tail: Option<f64>) -> CliResult<Report> {
    let mut body = String::new();
    let headline = match n {
        Some(n) => {
            let state = HzState::new(n as u64, k_max)?;
            body.push_str("k,b_k,moment\n");
            for k in 1..=k_max {
                let _ = writeln!(body, "{k},{},{}", state.b(k), state.moment(k));
            }
            json!(state.b(k_max).to_string())
        }
        None => {
            body.push_str("k,coefficients\n");
            let mut last = Vec::new();
            for k in 1..=k_max {
                last = hz_bk_symbolic(k)?.to_strings();
                let _ = writeln!(body, "{k},{}", last.join(";"));
            }
            json!(last)
        }
    };
    let tail = match (tail, n) {
        (Some(t), Some(n)) => Some(lambda_max_tail_optimized(t, n as u64)?),
        (Some(_), None) => return Err(input("--tail needs --n")),
        _ => None,
    };
    Ok(Report { ext: "csv", body, summary: json!({"k_max": k_max, "n": n, "b_k_max": headline, "tail": tail}) })
}

fn tracy_widom(t_min: f64, t_max: f64, dt: f64, step: f64, q_grid: bool) -> CliResult<Report> {
    let table = F2Table::build(t_min, t_max, dt, step)?;
    // mean from the tabulated cdf: sum of t_mid dF
    let mean: f64 = table.t.windows(2).zip(table.f.windows(2)).map(|(t, f)| 0.5 * (t[0] + t[1]) * (f[1] - f[0])).sum();
    Ok(Report {
        ext: "csv",
        body: if q_grid { table.q_csv() } else { table.to_csv() },
        summary: json!({"t_range": [t_min, t_max], "dt": dt, "step": step, "q_grid": q_grid,
            "median": table.quantile(0.5), "mean": mean}),
    })
}

fn edge_mc(n: usize, trials: usize, common: &Common) -> CliResult<Report> {
    let stat = edge_statistic_mc(&EnsembleSpec::gue(n).with_seed(common.seed), trials)?;
    let table = F2Table::default_table()?;
    let mut body = String::from("trial,statistic\n");
    for (t, s) in stat.iter().enumerate() {
        let _ = writeln!(body, "{t},{s}");
    }
    let (mean, se) = mean_and_se(&stat);
    Ok(Report {
        ext: "csv",
        body,
        summary: json!({"n": n, "trials": trials, "mean": mean, "se": se,
            "ks_to_f2": ks_distance(&stat, |t| f2_cdf(&table, t).value)}),
    })
}

fn dyson(ensemble: Ensemble, n: usize, steps: usize, delta: f64, trial: u64, common: &Common) -> CliResult<Report> {
    let spec = match ensemble {
        Ensemble::Gue => EnsembleSpec::gue(n),
        Ensemble::Goe => EnsembleSpec::goe(n),
        _ => return Err(input("Dyson walks use gue or goe increments")),
    };
    let traj = dyson_trajectory(&spec.with_seed(common.seed), steps, delta, trial)?;
    let check = dyson_crossing_check(&traj);
    Ok(Report {
        ext: "csv",
        body: dyson_csv(&traj),
        summary: json!({"n": n, "steps": steps, "delta": delta, "violations": check.violations,
            "min_spacing": check.min_spacing}),
    })
}

fn fraction(s: &str) -> CliResult<BigRational> {
    s.trim().parse::<BigRational>().map_err(|_| input(format!("`{s}` is not a fraction like 1/2")))
}

fn km(horizon: usize, starts: Vec<i64>, ends: Vec<i64>, p: &str, sites: &[String]) -> CliResult<Report> {
    let mut spec = WalkSpec::symmetric(horizon, starts.clone(), ends.clone());
    spec.p_default = fraction(p)?;
    for s in sites {
        let (site, p) = s.split_once('=').ok_or_else(|| input(format!("site override `{s}` is not `site=p`")))?;
        let site = site.trim().parse::<i64>().map_err(|_| input(format!("bad site in `{s}`")))?;
        spec = spec.with_site(site, fraction(p)?);
    }
    let det = km_determinant(&spec)?;
    let count = km_enumerate(&spec)?;
    let doc = json!({"horizon": horizon, "starts": starts, "ends": ends, "determinant": det.to_string(),
        "enumeration": count.to_string(), "agree": det == count});
    Ok(Report { ext: "json", body: format!("{doc}\n"), summary: doc })
}

fn parse_edge(s: &str) -> CliResult<(usize, usize, BigRational)> {
    let bad = || input(format!("edge `{s}` is not `u-v:w`"));
    let (uv, w) = s.split_once(':').ok_or_else(bad)?;
    let (u, v) = uv.split_once('-').ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?, fraction(w)?))
}

fn gv(lattice: usize, vertices: Option<usize>, edges: &[String], sources: Vec<usize>, sinks: Vec<usize>) -> CliResult<Report> {
    let (dag, a, b, label) = if edges.is_empty() {
        let lat = catalan_lattice(lattice)?;
        (lat.dag, lat.sources, lat.sinks, format!("catalan_lattice({lattice})"))
    } else {
        let parsed = edges.iter().map(|e| parse_edge(e)).collect::<CliResult<Vec<_>>>()?;
        let n = vertices.unwrap_or_else(|| parsed.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0));
        (WeightedDag::new(n, parsed)?, sources, sinks, "custom".to_string())
    };
    let det = gv_determinant(&dag, &a, &b)?;
    let sum = gv_vertex_disjoint_sum(&dag, &a, &b)?;
    let hankel = if label == "custom" { None } else { Some(catalan_hankel_det(lattice).to_string()) };
    let doc = json!({"graph": label, "sources": a, "sinks": b, "determinant": det.to_string(),
        "disjoint_sum": sum.to_string(), "agree": det == sum, "hankel_det": hankel});
    Ok(Report { ext: "json", body: format!("{doc}\n"), summary: doc })
}

fn rsk_cmd(perm: Vec<usize>, random: Option<usize>, common: &Common) -> CliResult<Report> {
    let sigma = match random {
        Some(n) => random_permutation(n, common.seed, 0).perm,
        None if perm.is_empty() => return Err(input("give --perm or --random")),
        None => perm,
    };
    let (p, q) = rsk(&sigma)?;
    let to_json = |t| serde_json::to_value(t).map_err(|e| input(e.to_string()));
    let doc = json!({"perm": sigma, "P": to_json(&p)?, "Q": to_json(&q)?, "shape": p.shape(), "lis": lis(&sigma)});
    Ok(Report { ext: "json", body: format!("{doc}\n"), summary: json!({"n": sigma.len(), "shape": p.shape(), "lis": lis(&sigma)}) })
}

fn bdj(n: usize, trials: usize, common: &Common) -> CliResult<Report> {
    let s = bdj_statistic_mc(n, trials, common.seed)?;
    let table = F2Table::default_table()?;
    let mut body = String::from("trial,length,statistic\n");
    for (t, (l, x)) in s.lengths.iter().zip(&s.statistic).enumerate() {
        let _ = writeln!(body, "{t},{l},{x}");
    }
    Ok(Report {
        ext: "csv",
        body,
        summary: json!({"n": n, "trials": trials, "mean_length_over_sqrt_n": s.scaled_mean_length(),
            "ks_to_f2": ks_distance(&s.statistic, |t| f2_cdf(&table, t).value)}),
    })
}

fn circular(n: usize, trials: usize, normalized: bool, common: &Common) -> CliResult<Report> {
    let norm = if normalized { Normalization::Normalized } else { Normalization::Unnormalized };
    let spec = EnsembleSpec::ginibre(n).with_seed(common.seed).with_normalization(norm);
    let eigs = map_trials(trials, |t| general_eigenvalues(&sample(&spec, t as u64)?.entries, DEFAULT_TOL))?;
    let radius = if normalized { 1.0 } else { (n as f64).sqrt() };
    let mut body = String::from("trial,re,im\n");
    let (mut inside, mut total) = (0usize, 0usize);
    for (t, zs) in eigs.iter().enumerate() {
        for z in zs {
            let _ = writeln!(body, "{t},{},{}", z.re, z.im);
            inside += usize::from(z.norm() <= radius);
            total += 1;
        }
    }
    Ok(Report {
        ext: "csv",
        body,
        summary: json!({"n": n, "trials": trials, "normalized": normalized,
            "fraction_in_disk": inside as f64 / total as f64}),
    })
}

fn freeness(n: usize, trials: usize, common: &Common) -> CliResult<Report> {
    let s1 = EnsembleSpec::gue(n).with_seed(common.seed);
    let s2 = EnsembleSpec::gue(n).with_seed(common.seed.wrapping_add(1));
    let values = map_trials(trials, |t| {
        let b = sample(&s1, t as u64)?.entries.matmul(&sample(&s2, t as u64)?.entries);
        let mut tr = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                tr += b[(i, j)] * b[(j, i)];
            }
        }
        Ok(tr.re / n as f64)
    })?;
    let (mean, se) = mean_and_se(&values);
    let limit = BigInt::from(mixed_gue_moment_limit(&[1, 2, 1, 2]));
    let centered = freeness_check(nc_moment, &[(1, 1), (2, 1), (1, 1), (2, 1)])?;
    let doc = json!({"n": n, "trials": trials, "word": "A1 A2 A1 A2", "mc_mean": mean, "mc_se": se,
        "limit": limit.to_string(), "centered_limit": centered});
    Ok(Report { ext: "json", body: format!("{doc}\n"), summary: doc })
}
