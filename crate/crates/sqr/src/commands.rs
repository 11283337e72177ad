use std::io::Write;
use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use sqr_core::fock::{
    self, FockSpace, OscillatorFrame, QuantumState, SqueezeSpec, Truncation,
};
use sqr_core::netlist::RingCircuit;
use sqr_core::ring::{self, PumpDrive, SpectralResponse, SweepSpec};
use sqr_core::sfg::{self, Path as SfgPath};
use sqr_core::wavepacket::{self, DisplacementGrid, WavePacketParams};
use sqr_core::wigner::{PhaseGrid, WignerKernel, WignerMap};

use crate::cli::{
    Format, FrameArgs, ReportArgs, Sink, SpectrumArgs, SqueezeArgs, StateArgs, SweepArgs, VerifyArgs, WavepacketArgs,
    WignerArgs,
};
use crate::error::{CliError, Exit};
use crate::format::{csv_number, csv_row, csv_table, json, JsonComplex};
use crate::{netlist_file, suite, threads};

fn emit(path: &Option<PathBuf>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn warn(err: &mut dyn Write, lines: &[String]) {
    for l in lines {
        let _ = writeln!(err, "{l}");
    }
}

pub fn frame(a: &FrameArgs) -> Result<OscillatorFrame, CliError> {
    let omega = match a.wavelength_um {
        Some(l) => wavepacket::angular_frequency(l)?,
        None => a.omega,
    };
    Ok(OscillatorFrame::new(a.hbar, a.mass, omega)?)
}

fn sweep_spec(a: &SweepArgs) -> Result<SweepSpec, CliError> {
    Ok(SweepSpec::new(a.start, a.stop, a.points)?)
}

/// `sweep` with the wavelength points spread over the worker pool.
pub fn parallel_sweep(
    circuit: &RingCircuit,
    spec: &SweepSpec,
    pool: &rayon::ThreadPool,
) -> Result<SpectralResponse, CliError> {
    let lambdas = spec.lambdas();
    let points = pool.install(|| lambdas.par_iter().map(|&l| ring::evaluate(circuit, l)).collect());
    Ok(SpectralResponse::from_points(lambdas, points)?)
}

pub const SPECTRUM_HEADER: [&str; 7] = [
    "lambda_um",
    "re_through",
    "im_through",
    "mag2_through",
    "re_drop",
    "im_drop",
    "mag2_drop",
];

#[derive(Serialize)]
struct SpectrumRecord {
    lambda_um: f64,
    re_through: f64,
    im_through: f64,
    mag2_through: f64,
    re_drop: f64,
    im_drop: f64,
    mag2_drop: f64,
}

pub fn spectrum_csv(s: &SpectralResponse) -> String {
    csv_table(
        &SPECTRUM_HEADER,
        (0..s.len()).map(|i| {
            let (t, d) = (s.through[i], s.drop[i]);
            vec![s.lambdas[i], t.re, t.im, t.norm_sqr(), d.re, d.im, d.norm_sqr()]
        }),
    )
}

fn spectrum_json(s: &SpectralResponse) -> Result<String, CliError> {
    let records: Vec<SpectrumRecord> = (0..s.len())
        .map(|i| {
            let (t, d) = (s.through[i], s.drop[i]);
            SpectrumRecord {
                lambda_um: s.lambdas[i],
                re_through: t.re,
                im_through: t.im,
                mag2_through: t.norm_sqr(),
                re_drop: d.re,
                im_drop: d.im,
                mag2_drop: d.norm_sqr(),
            }
        })
        .collect();
    json(&records)
}

#[derive(Serialize)]
struct PathDump {
    nodes: Vec<String>,
    gain: JsonComplex,
}

#[derive(Serialize)]
struct SfgDump {
    lambda_um: f64,
    sink: String,
    paths: Vec<PathDump>,
    loops: Vec<PathDump>,
    delta: JsonComplex,
    transfer: Option<JsonComplex>,
}

fn dump_sfg(circuit: &RingCircuit, lambda_um: f64, sink: Sink) -> Result<String, CliError> {
    if !(lambda_um > 0.0 && lambda_um.is_finite()) {
        return Err(CliError::usage(format!("--dump-sfg wavelength must be positive, got {lambda_um}")));
    }
    let low = ring::lower_to_sfg(circuit, lambda_um)?;
    let node = match sink {
        Sink::Through => low.through,
        Sink::Drop => low
            .drop
            .ok_or_else(|| CliError::usage("the netlist has no drop port"))?,
    };
    let d = sfg::decompose(&low.graph, node).map_err(|e| CliError::numeric(e.to_string()))?;
    let named = |p: &SfgPath| PathDump {
        nodes: p.nodes.iter().map(|&v| low.graph.name(v).to_string()).collect(),
        gain: p.gain.into(),
    };
    json(&SfgDump {
        lambda_um,
        sink: low.graph.name(node).to_string(),
        paths: d.forward_paths.iter().map(named).collect(),
        loops: d.loops.iter().map(named).collect(),
        delta: d.delta.into(),
        transfer: d.transfer.map(Into::into),
    })
}

pub fn spectrum(a: &SpectrumArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (circuit, warnings) = netlist_file::load(&a.netlist)?;
    warn(err, &warnings);
    if let Some(l) = a.dump_sfg {
        return emit(&a.output, out, &dump_sfg(&circuit, l, a.sink)?);
    }
    let spec = sweep_spec(&a.sweep)?;
    let response = parallel_sweep(&circuit, &spec, &threads::pool()?)?;
    let text = match a.format {
        Format::Csv => spectrum_csv(&response),
        Format::Json => spectrum_json(&response)?,
    };
    emit(&a.output, out, &text)?;
    if !response.poles.is_empty() {
        let at: Vec<String> = response.poles.iter().map(|&i| response.lambdas[i].to_string()).collect();
        return Err(CliError::numeric(format!(
            "{}: transfer is singular (pole) at lambda_um = {}; those rows hold NaN",
            a.netlist.display(),
            at.join(", ")
        )));
    }
    Ok(())
}

/// State, its parameters and the dimension used.
pub fn build_state(a: &StateArgs) -> Result<(QuantumState, SqueezeSpec, usize), CliError> {
    let spec = SqueezeSpec::new(Complex64::new(a.alpha, a.alpha_im), a.r, a.phi)?;
    let dim = a.dim.unwrap_or_else(|| spec.required_dim().max(2));
    let policy = if a.force { Truncation::Force } else { Truncation::Enforce };
    let state = fock::squeezed_coherent_state(FockSpace::new(dim)?, &spec, policy)?;
    Ok((state, spec, dim))
}

#[derive(Serialize)]
struct SqueezeReport {
    alpha_re: f64,
    alpha_im: f64,
    r: f64,
    phi: f64,
    dim: usize,
    var_x: f64,
    var_p: f64,
    product: f64,
    photon_dist: Vec<f64>,
}

pub fn squeeze(a: &SqueezeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let frame = frame(&a.state.frame)?;
    let (state, spec, dim) = build_state(&a.state)?;
    let v = fock::variances(&state, &frame)?;
    let report = SqueezeReport {
        alpha_re: spec.alpha().re,
        alpha_im: spec.alpha().im,
        r: spec.r(),
        phi: spec.phi(),
        dim,
        var_x: v.var_x,
        var_p: v.var_p,
        product: v.product,
        photon_dist: fock::photon_distribution(&state),
    };
    emit(&a.output, out, &json(&report)?)
}

pub fn wavepacket(a: &WavepacketArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut params = WavePacketParams::new(a.c, a.x0, a.w0, a.p0)?;
    if let Some(r) = a.squeeze_r {
        params = wavepacket::squeezed_width(&params, r)?;
    }
    if a.normalize {
        params = params.normalized();
    }
    let grid = DisplacementGrid::new(a.x_min, a.x_max, a.points)?;
    let density = wavepacket::density_profile(&params, &grid);
    let text = csv_table(
        &["x_um", "density"],
        (0..grid.points()).map(|i| vec![grid.x(i), density[i]]),
    );
    emit(&a.output, out, &text)
}

/// Grid values in row-major order (one row per momentum), computed in
/// parallel.
pub fn wigner_map(
    state: &QuantumState,
    frame: OscillatorFrame,
    grid: PhaseGrid,
    pool: &rayon::ThreadPool,
) -> Result<WignerMap, CliError> {
    let kernel = WignerKernel::new(state, frame)?;
    let rows: Vec<Vec<f64>> = pool.install(|| {
        (0..grid.np)
            .into_par_iter()
            .map(|j| (0..grid.nx).map(|i| kernel.at(grid.x(i), grid.p(j))).collect())
            .collect()
    });
    Ok(WignerMap::from_values(grid, rows.concat())?)
}

pub fn wigner(a: &WignerArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let frame = frame(&a.state.frame)?;
    let (state, _, _) = build_state(&a.state)?;
    let grid = match (a.x_min, a.x_max, a.p_min, a.p_max) {
        (Some(x0), Some(x1), Some(p0), Some(p1)) => PhaseGrid::new(x0, x1, a.nx, p0, p1, a.np)?,
        (None, None, None, None) => PhaseGrid::covering(&state, &frame, a.sigmas, a.nx, a.np)?,
        _ => return Err(CliError::usage("give all of --x-min, --x-max, --p-min, --p-max or none")),
    };
    let map = wigner_map(&state, frame, grid, &threads::pool()?)?;
    let g = map.grid();
    let mut text = csv_row(["x", "p", "w"]);
    for j in 0..g.np {
        for i in 0..g.nx {
            text += &csv_row([csv_number(g.x(i)), csv_number(g.p(j)), csv_number(map.get(i, j))]);
        }
    }
    emit(&a.output, out, &text)?;
    let m = map.moments();
    let _ = writeln!(
        err,
        "integral {:.6e} mean_x {:.6e} mean_p {:.6e} var_x {:.6e} var_p {:.6e}",
        m.integral, m.mean_x, m.mean_p, m.var_x, m.var_p
    );
    Ok(map.check_normalization()?)
}

#[derive(Serialize)]
struct ReportEntry {
    lambda_res_um: f64,
    enhancement: f64,
    r: f64,
    var_x: Option<f64>,
    var_p: Option<f64>,
    product: Option<f64>,
    ring: Option<String>,
    round_trips: f64,
    interaction_length_m: f64,
    near_pole: bool,
    note: Option<String>,
}

pub fn report(a: &ReportArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (circuit, warnings) = netlist_file::load(&a.netlist)?;
    warn(err, &warnings);
    let frame = frame(&a.frame)?;
    let spec = sweep_spec(&a.sweep)?;
    let response = parallel_sweep(&circuit, &spec, &threads::pool()?)?;
    if !response.poles.is_empty() {
        let _ = writeln!(err, "warning: {} sweep points are poles and were skipped", response.poles.len());
    }
    let pump = PumpDrive {
        power: a.pump_power,
        gamma_nl: a.gamma,
    };
    let rep = ring::squeezing_report_from_sweep(&circuit, &pump, &response, &frame)?;
    for w in &rep.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let entries: Vec<ReportEntry> = rep
        .entries
        .into_iter()
        .map(|e| ReportEntry {
            lambda_res_um: e.lambda_res_um,
            enhancement: e.enhancement,
            r: e.r,
            var_x: e.variances.map(|v| v.var_x),
            var_p: e.variances.map(|v| v.var_p),
            product: e.variances.map(|v| v.product),
            ring: e.ring,
            round_trips: e.round_trips,
            interaction_length_m: e.interaction_length_m,
            near_pole: e.near_pole,
            note: e.note,
        })
        .collect();
    emit(&a.output, out, &json(&entries)?)
}

pub fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let results = suite::run_all(a.seeds);
    let width = results.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut text = String::new();
    for c in &results {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        text += &format!("{mark}  {:width$}  {}\n", c.name, c.detail);
    }
    let failed = results.iter().filter(|c| !c.passed).count();
    text += &format!("{} checks, {} failed\n", results.len(), failed);
    out.write_all(text.as_bytes())?;
    if failed > 0 {
        return Err(CliError::new(Exit::Verify, format!("{failed} verification checks failed")));
    }
    Ok(())
}
