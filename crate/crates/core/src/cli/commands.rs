use std::fs::File;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    validate_n, Artifact, CheckArgs, DensityArgs, ExtrapolateArgs, Figure2Args, KernelArgs, Outcome, PfaffianArgs,
    RegimeName, SampleArgs, Table,
};
use crate::analysis::{fit_series, rate_fit};
use crate::checks::{run_checks, CheckOptions};
use crate::error::{Error, Result};
use crate::kernel::{kappa_tilde, one_point_density, KernelContext, Regime};
use crate::limit::{bulk_density, edge_density, edge_density_correction, kappa_bulk, kappa_edge, kappa_edge_sub};
use crate::pfaffian::{pfaffian as pf, SkewMatrix};
use crate::sampler::{rescaled_cloud, sample as draw};

pub(super) type Produced = (Artifact, Outcome, Value);

const FIGURE2_LINE: [f64; 4] = [-2.0, 2.0, 2.0, 2.0];
const FIGURE2_SAMPLES: usize = 41;

fn is_edge(r: Regime) -> bool {
    matches!(r, Regime::EdgeRight | Regime::EdgeLeft)
}

/// Limiting density and first correction at a rescaled point.
fn limits(ctx: &KernelContext, z: Complex64) -> Result<(f64, f64)> {
    match ctx.regime() {
        Regime::Bulk => Ok((bulk_density(z.im), 0.0)),
        Regime::EdgeRight | Regime::EdgeLeft => Ok((edge_density(z)?, edge_density_correction(ctx.tau(), z)?)),
        Regime::Outside => Ok((0.0, 0.0)),
    }
}

fn pair(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub(super) fn density(a: &DensityArgs) -> Result<Produced> {
    validate_n(a.n)?;
    let ctx = KernelContext::new(a.n, a.centre.tau, a.centre.centre(RegimeName::Edge)?)?;
    let pts = a.points.points(None, FIGURE2_SAMPLES)?;
    let sq = (a.n as f64).sqrt();
    let rows: Vec<[f64; 6]> = pts
        .par_iter()
        .map(|&z| {
            let rn = one_point_density(&ctx, z)?;
            let (r, half) = limits(&ctx, z)?;
            Ok([z.re, z.im, rn, r, sq * (rn - r), half])
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["re_z", "im_z", "R_N", "R_limit", "sqrtN_diff", "R_half"]);
    for r in &rows {
        t.push_floats(r);
    }
    let summary = json!({ "regime": ctx.regime(), "p": ctx.p(), "points": rows.len() });
    Ok((Artifact::Csv(t), Outcome::Pass, summary))
}

pub(super) fn figure2(a: &Figure2Args) -> Result<Produced> {
    let mut ns = a.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 3 || ns[0] == 0 {
        return Err(Error::Config("--N-list needs at least three distinct positive values".into()));
    }
    let p = a.centre.centre(RegimeName::Edge)?;
    let ctxs: Vec<KernelContext> = ns.iter().map(|&n| KernelContext::new(n, a.centre.tau, p)).collect::<Result<_>>()?;
    let pts = a.points.points(Some(FIGURE2_LINE), FIGURE2_SAMPLES)?;
    let rows: Vec<Vec<f64>> = pts
        .par_iter()
        .map(|&z| {
            let (r, half) = limits(&ctxs[0], z)?;
            let rn: Vec<f64> = ctxs.iter().map(|c| one_point_density(c, z)).collect::<Result<_>>()?;
            let samples: Vec<(usize, f64)> = ns.iter().copied().zip(rn.iter().copied()).collect();
            let fit = fit_series(&samples)?;
            let diffs: Vec<f64> = ns.iter().zip(&rn).map(|(&n, &v)| (n as f64).sqrt() * (v - r)).collect();
            let corr = fit_series(&ns.iter().copied().zip(diffs.iter().copied()).collect::<Vec<_>>())?;
            let mut row = vec![z.re, z.im, r, half, fit.a, fit.b, fit.c, fit.residual, corr.a];
            row.extend(rn);
            row.extend(diffs);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut header: Vec<String> = ["re_z", "im_z", "R_limit", "R_half", "a", "b", "c", "residual", "corr_a"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(ns.iter().map(|n| format!("R_N_{n}")));
    header.extend(ns.iter().map(|n| format!("sqrtN_diff_{n}")));
    let mut t = Table { header, rows: Vec::new() };
    let (mut err_a, mut err_corr) = (0.0f64, 0.0f64);
    for r in &rows {
        err_a = err_a.max((r[4] - r[2]).abs());
        err_corr = err_corr.max((r[8] - r[3]).abs());
        t.push_floats(r);
    }
    let [tol_a, tol_corr] = a.tol[..] else {
        return Err(Error::Config("--tol expects two tolerances: limit,correction".into()));
    };
    let outcome = if err_a <= tol_a && err_corr <= tol_corr { Outcome::Pass } else { Outcome::Fail };
    let summary = json!({
        "max_abs_error_a": err_a, "tolerance_a": tol_a,
        "max_abs_error_correction": err_corr, "tolerance_correction": tol_corr,
    });
    Ok((Artifact::Csv(t), outcome, summary))
}

fn point_arg(v: &[f64], name: &str) -> Result<Complex64> {
    match v {
        [re, im] if re.is_finite() && im.is_finite() => Ok(Complex64::new(*re, *im)),
        _ => Err(Error::Config(format!("--{name} expects two finite numbers re,im"))),
    }
}

pub(super) fn kernel(a: &KernelArgs) -> Result<Produced> {
    validate_n(a.n)?;
    let ctx = KernelContext::new(a.n, a.centre.tau, a.centre.centre(RegimeName::Edge)?)?;
    let (z, w) = (point_arg(&a.z, "z")?, point_arg(&a.w, "w")?);
    let tilde = kappa_tilde(&ctx, z, w)?.try_to_complex()?;
    let zero = Complex64::new(0.0, 0.0);
    let (limit, half) = match ctx.regime() {
        Regime::Bulk => (kappa_bulk(z, w)?, zero),
        r if is_edge(r) => (kappa_edge(z, w)?, kappa_edge_sub(ctx.tau(), z, w)?),
        _ => (zero, zero),
    };
    let sq = (a.n as f64).sqrt();
    let v = json!({
        "N": a.n, "tau": ctx.tau(), "p": ctx.p(), "regime": ctx.regime(),
        "z": pair(z), "w": pair(w),
        "kappa_tilde": pair(tilde),
        "kappa_limit": pair(limit),
        "kappa_half": pair(half),
        "sqrtN_diff": pair(sq * (tilde - limit)),
    });
    Ok((Artifact::Json(v), Outcome::Pass, Value::Null))
}

pub(super) fn check(a: &CheckArgs) -> Result<Produced> {
    if a.samples == 0 {
        return Err(Error::Config("--samples must be positive".into()));
    }
    let opts = CheckOptions { samples_per_cell: a.samples, seed: a.seed, perturb: a.perturb, tolerance: a.tol };
    let report = run_checks(&opts)?;
    let outcome = if report.pass { Outcome::Pass } else { Outcome::Fail };
    let v = serde_json::to_value(&report).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok((Artifact::Json(v), outcome, Value::Null))
}

pub(super) fn sample(a: &SampleArgs) -> Result<Produced> {
    validate_n(a.n)?;
    if a.samples == 0 {
        return Err(Error::Config("--samples must be positive".into()));
    }
    let p = a.centre.centre(RegimeName::Origin)?;
    let seeds: Vec<u64> = (0..a.samples as u64).map(|k| a.seed + k).collect();
    let clouds: Vec<_> = seeds
        .par_iter()
        .map(|&s| {
            let smp = draw(a.n, a.centre.tau, s)?;
            let resc = rescaled_cloud(&smp, p)?;
            Ok((smp, resc))
        })
        .collect::<Result<_>>()?;
    let mut t = Table::new(&["re", "im", "rescaled_re", "rescaled_im", "seed"]);
    for (smp, resc) in &clouds {
        for (z, r) in smp.eigenvalues.iter().zip(resc) {
            let mut row: Vec<String> = [z.re, z.im, r.re, r.im].iter().map(|&x| super::fmt_float(x)).collect();
            row.push(smp.seed.to_string());
            t.rows.push(row);
        }
    }
    let fractions: Vec<f64> = clouds.iter().map(|(s, _)| s.droplet_fraction(0.02)).collect();
    Ok((Artifact::Csv(t), Outcome::Pass, json!({ "droplet_fraction": fractions })))
}

fn csv_reader(path: &std::path::Path, headers: bool) -> Result<csv::Reader<File>> {
    Ok(csv::ReaderBuilder::new().has_headers(headers).trim(csv::Trim::All).from_reader(File::open(path)?))
}

fn parse_float(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Config(format!("not a number: {s:?}")))
}

pub(super) fn pfaffian(a: &PfaffianArgs) -> Result<Produced> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in csv_reader(&a.input, false)?.records() {
        let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
        rows.push(rec.iter().map(parse_float).collect::<Result<_>>()?);
    }
    let order = rows.len();
    if rows.iter().any(|r| r.len() != 2 * order) {
        return Err(Error::Config(format!("expected {order} rows of {} numbers (re, im per entry)", 2 * order)));
    }
    let entries: Vec<Complex64> = rows
        .iter()
        .flat_map(|r| r.chunks(2).map(|c| Complex64::new(c[0], c[1])))
        .collect();
    let m = SkewMatrix::from_dense(order, &entries, a.tol)?;
    let result = pf(&m)?;
    let value = result.value.to_complex();
    let v = json!({
        "order": order,
        "re": value.re, "im": value.im,
        "log2_abs": if result.value.is_zero() { Value::Null } else { json!(result.value.log2_abs()) },
        "singular": result.singular,
    });
    Ok((Artifact::Json(v), Outcome::Pass, Value::Null))
}

pub(super) fn extrapolate(a: &ExtrapolateArgs) -> Result<Produced> {
    let mut samples = Vec::new();
    let mut reader = csv_reader(&a.input, true)?;
    let header = reader.headers().map_err(|e| Error::Config(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["N", "value"] {
        return Err(Error::Config(format!("expected header N,value, found {:?}", header.iter().collect::<Vec<_>>())));
    }
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
        let n: usize = rec[0].parse().map_err(|_| Error::Config(format!("bad N {:?}", &rec[0])))?;
        samples.push((n, parse_float(&rec[1])?));
    }
    let t = if a.rate {
        let mut t = Table::new(&["slope"]);
        t.push_floats(&[rate_fit(&samples)?]);
        t
    } else {
        let f = fit_series(&samples)?;
        let mut t = Table::new(&["a", "b", "c", "residual"]);
        t.push_floats(&[f.a, f.b, f.c, f.residual]);
        t
    };
    Ok((Artifact::Csv(t), Outcome::Pass, Value::Null))
}
