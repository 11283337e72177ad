//! Ring circuits as signal-flow graphs.
//!
//! Every coupler contributes two nodes, the field just after it on each of
//! the two guides, and every bus contributes an entry and an exit node. A
//! coupler fed from predecessor node `p` on guide `A` adds
//!
//! ```text
//! p → out_A : t · g        p → out_B : i√κ · g        t = √(1 − κ)
//! ```
//!
//! where `g = a·e^{iθ}` is the gain of the waveguide section from `p`.
//! Ring sections have `θ = 2π n(λ) L / λ` and amplitude loss
//! `a = 10^(−loss_db_cm · L_cm / 20)`; bus sections have unit gain.
//! The effective index is linearised around [`REFERENCE_WAVELENGTH_UM`] so
//! that the group index of the ring equals `ng`:
//!
//! ```text
//! n(λ) = neff + (neff − ng)(λ − λ_ref)/λ_ref
//! ```
//!
//! Nodes unreachable from the input are dropped, so a decoupled ring does
//! not contribute a spurious pole.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::fock::{self, FockError, FockSpace, OscillatorFrame, SqueezeSpec, Truncation, VarianceReport};
use crate::netlist::{validate, BusEnd, Diagnostic, PortKind, RingCircuit};
use crate::sfg::{linear_solve_amplitudes, MasonSolver, NodeId, SfgError, SignalFlowGraph};

pub const REFERENCE_WAVELENGTH_UM: f64 = 1.55;
/// Report entries are flagged when `|Δ| < NEAR_POLE_RTOL · (1 + Σ|Lᵢ|)`.
pub const NEAR_POLE_RTOL: f64 = 1e-6;
/// Largest Fock dimension the squeezing report will build.
pub const MAX_REPORT_DIM: usize = 512;
/// Resonances must dip this many dB below the median through power.
pub const RESONANCE_DEPTH_DB: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("invalid circuit: {}", .0.first().map(|d| d.message.as_str()).unwrap_or(""))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Sfg(#[from] SfgError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("invalid sweep: {0}")]
    Sweep(&'static str),
    #[error("invalid pump: {0} must be non-negative and finite")]
    Pump(&'static str),
    #[error("wavelength must be positive and finite, got {0} um")]
    Wavelength(f64),
}

/// Lowered circuit at one wavelength.
#[derive(Clone, Debug)]
pub struct LoweredCircuit {
    pub graph: SignalFlowGraph,
    pub through: NodeId,
    pub drop: Option<NodeId>,
    /// Ring-side coupler nodes with the index of their ring.
    pub ring_nodes: Vec<(NodeId, usize)>,
}

/// Effective index at `lambda_um`.
pub fn effective_index(circuit: &RingCircuit, lambda_um: f64) -> f64 {
    let g = &circuit.globals;
    g.n_eff + (g.n_eff - g.n_g) * (lambda_um - REFERENCE_WAVELENGTH_UM) / REFERENCE_WAVELENGTH_UM
}

/// Gain `a·e^{iθ}` of a ring section of length `length_um`.
pub fn section_gain(circuit: &RingCircuit, length_um: f64, lambda_um: f64) -> Complex64 {
    let theta = TAU * effective_index(circuit, lambda_um) * length_um / lambda_um;
    let a = 10f64.powf(-circuit.globals.loss_db_cm * length_um * 1e-4 / 20.0);
    Complex64::from_polar(a, theta)
}

pub fn lower_to_sfg(circuit: &RingCircuit, lambda_um: f64) -> Result<LoweredCircuit, RingError> {
    let errors: Vec<Diagnostic> = validate(circuit).into_iter().filter(Diagnostic::is_error).collect();
    if !errors.is_empty() {
        return Err(RingError::Invalid(errors));
    }
    Ok(lower_validated(circuit, lambda_um)?)
}

struct Builder<'c> {
    circuit: &'c RingCircuit,
    names: Vec<String>,
    edges: Vec<(usize, usize, Complex64)>,
}

impl Builder<'_> {
    /// Node of coupler `k` on `element`.
    fn out(&self, k: usize, element: &str) -> usize {
        2 * k + usize::from(self.circuit.couplers[k].element_a != element)
    }

    fn feed(&mut self, pred: usize, k: usize, element: &str, g: Complex64) {
        let c = &self.circuit.couplers[k];
        let other = c.other(element).expect("coupler touches element");
        let same = self.out(k, element);
        let cross = self.out(k, other);
        let t = (1.0 - c.kappa).sqrt();
        let x = Complex64::new(0.0, c.kappa.sqrt());
        if t != 0.0 {
            self.edges.push((pred, same, g * t));
        }
        if c.kappa != 0.0 {
            self.edges.push((pred, cross, g * x));
        }
    }
}

fn lower_validated(circuit: &RingCircuit, lambda_um: f64) -> Result<LoweredCircuit, SfgError> {
    let mut b = Builder {
        circuit,
        names: Vec::new(),
        edges: Vec::new(),
    };
    for c in &circuit.couplers {
        b.names.push(alloc::format!("{}:{}", c.name, c.element_a));
        b.names.push(alloc::format!("{}:{}", c.name, c.element_b));
    }
    let bus_base = b.names.len();
    for bus in &circuit.buses {
        b.names.push(alloc::format!("{}:in", bus.name));
        b.names.push(alloc::format!("{}:out", bus.name));
    }

    let mut ring_nodes = Vec::new();
    for (ri, ring) in circuit.rings.iter().enumerate() {
        let ks: Vec<usize> = circuit.couplers_on(&ring.name).map(|(k, _)| k).collect();
        let g = section_gain(circuit, ring.circumference_um() / ks.len() as f64, lambda_um);
        for j in 0..ks.len() {
            let pred = b.out(ks[(j + ks.len() - 1) % ks.len()], &ring.name);
            b.feed(pred, ks[j], &ring.name, g);
            ring_nodes.push((b.out(ks[j], &ring.name), ri));
        }
    }
    for (bi, bus) in circuit.buses.iter().enumerate() {
        let mut ks: Vec<usize> = circuit.couplers_on(&bus.name).map(|(k, _)| k).collect();
        if circuit.bus_entry(&bus.name) == BusEnd::Right {
            ks.reverse();
        }
        let mut pred = bus_base + 2 * bi;
        for k in ks {
            b.feed(pred, k, &bus.name, Complex64::new(1.0, 0.0));
            pred = b.out(k, &bus.name);
        }
        b.edges.push((pred, bus_base + 2 * bi + 1, Complex64::new(1.0, 0.0)));
    }

    let bus_index = |name: &str| circuit.buses.iter().position(|x| x.name == name).expect("validated bus");
    let input = circuit.port(PortKind::Input).expect("validated input");
    let source = bus_base + 2 * bus_index(&input.bus);
    let through = source + 1;
    let drop = circuit
        .port(PortKind::Drop)
        .map(|p| bus_base + 2 * bus_index(&p.bus) + 1);

    // keep what the input reaches, plus the outputs
    let n = b.names.len();
    let mut keep = vec![false; n];
    keep[source] = true;
    let mut todo = vec![source];
    while let Some(v) = todo.pop() {
        for &(f, t, _) in &b.edges {
            if f == v && !keep[t] {
                keep[t] = true;
                todo.push(t);
            }
        }
    }
    keep[through] = true;
    if let Some(d) = drop {
        keep[d] = true;
    }
    let mut id = vec![usize::MAX; n];
    let mut graph = SignalFlowGraph::new();
    for v in (0..n).filter(|&v| keep[v]) {
        id[v] = graph.add_node(b.names[v].clone());
    }
    for &(f, t, g) in &b.edges {
        if keep[f] && keep[t] {
            graph.add_edge(id[f], id[t], g)?;
        }
    }
    graph.set_source(id[source])?;
    graph.add_sink(id[through])?;
    if let Some(d) = drop {
        graph.add_sink(id[d])?;
    }
    Ok(LoweredCircuit {
        graph,
        through: id[through],
        drop: drop.map(|d| id[d]),
        ring_nodes: ring_nodes
            .into_iter()
            .filter(|&(v, _)| keep[v])
            .map(|(v, r)| (id[v], r))
            .collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    lambda_start: f64,
    lambda_stop: f64,
    points: usize,
}

impl SweepSpec {
    pub fn new(lambda_start: f64, lambda_stop: f64, points: usize) -> Result<Self, RingError> {
        if !(lambda_start > 0.0 && lambda_stop.is_finite()) {
            return Err(RingError::Sweep("wavelengths must be positive and finite"));
        }
        if !(lambda_start < lambda_stop) {
            return Err(RingError::Sweep("start must be below stop"));
        }
        if points < 2 {
            return Err(RingError::Sweep("need at least 2 points"));
        }
        Ok(Self {
            lambda_start,
            lambda_stop,
            points,
        })
    }

    pub fn lambda_start(&self) -> f64 {
        self.lambda_start
    }

    pub fn lambda_stop(&self) -> f64 {
        self.lambda_stop
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Point `i`; the last point is exactly `lambda_stop`.
    pub fn lambda(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.lambda_stop
        } else {
            self.lambda_start + (self.lambda_stop - self.lambda_start) * i as f64 / (self.points - 1) as f64
        }
    }

    pub fn lambdas(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.lambda(i)).collect()
    }
}

/// Transfer amplitudes at one wavelength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointResponse {
    pub through: Complex64,
    /// Zero when the circuit has no drop port.
    pub drop: Complex64,
    pub delta: Complex64,
    pub loop_gain_sum: f64,
}

impl PointResponse {
    pub fn near_pole(&self) -> bool {
        self.delta.norm() < NEAR_POLE_RTOL * (1.0 + self.loop_gain_sum)
    }
}

fn check_lambda(lambda_um: f64) -> Result<(), RingError> {
    if !(lambda_um > 0.0 && lambda_um.is_finite()) {
        return Err(RingError::Wavelength(lambda_um));
    }
    Ok(())
}

/// Mason's rule on the lowered graph.
pub fn evaluate(circuit: &RingCircuit, lambda_um: f64) -> Result<PointResponse, RingError> {
    check_lambda(lambda_um)?;
    let low = lower_to_sfg(circuit, lambda_um)?;
    let solver = MasonSolver::new(&low.graph)?;
    Ok(PointResponse {
        through: solver.transfer(low.through)?,
        drop: match low.drop {
            Some(d) => solver.transfer(d)?,
            None => Complex64::zero(),
        },
        delta: solver.delta(),
        loop_gain_sum: solver.loop_gain_sum(),
    })
}

/// `(through, drop)` from a direct solve of the lowered graph.
pub fn evaluate_linear(circuit: &RingCircuit, lambda_um: f64) -> Result<(Complex64, Complex64), RingError> {
    check_lambda(lambda_um)?;
    let low = lower_to_sfg(circuit, lambda_um)?;
    let x = linear_solve_amplitudes(&low.graph)?;
    Ok((x[low.through], low.drop.map_or(Complex64::zero(), |d| x[d])))
}

/// Largest `|field|` on any ring for unit input, and the ring index.
pub fn field_enhancement(circuit: &RingCircuit, lambda_um: f64) -> Result<(f64, Option<usize>), RingError> {
    check_lambda(lambda_um)?;
    let low = lower_to_sfg(circuit, lambda_um)?;
    let solver = MasonSolver::new(&low.graph)?;
    let mut best = (0.0, None);
    for &(v, ring) in &low.ring_nodes {
        let m = solver.transfer(v)?.norm();
        if m > best.0 {
            best = (m, Some(ring));
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralResponse {
    pub lambdas: Vec<f64>,
    pub through: Vec<Complex64>,
    pub drop: Vec<Complex64>,
    /// Indices where the graph was singular; their amplitudes are NaN.
    pub poles: Vec<usize>,
}

impl SpectralResponse {
    /// Assembles per-point results, recording poles instead of failing.
    /// Other errors are returned.
    pub fn from_points(
        lambdas: Vec<f64>,
        points: Vec<Result<PointResponse, RingError>>,
    ) -> Result<Self, RingError> {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let mut out = Self {
            through: Vec::with_capacity(lambdas.len()),
            drop: Vec::with_capacity(lambdas.len()),
            poles: Vec::new(),
            lambdas,
        };
        for (i, p) in points.into_iter().enumerate() {
            match p {
                Ok(p) => {
                    out.through.push(p.through);
                    out.drop.push(p.drop);
                }
                Err(RingError::Sfg(SfgError::Pole { .. })) => {
                    out.through.push(nan);
                    out.drop.push(nan);
                    out.poles.push(i);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

pub fn sweep(circuit: &RingCircuit, spec: &SweepSpec) -> Result<SpectralResponse, RingError> {
    let lambdas = spec.lambdas();
    let points = lambdas.iter().map(|&l| evaluate(circuit, l)).collect();
    SpectralResponse::from_points(lambdas, points)
}

/// Indices of local minima of `|through|²` at least
/// [`RESONANCE_DEPTH_DB`] below the median. On a flat bottom the shortest
/// wavelength wins; the sweep ends are never reported.
pub fn find_resonances(response: &SpectralResponse) -> Vec<usize> {
    let power: Vec<f64> = response.through.iter().map(|t| t.norm_sqr()).collect();
    let mut finite: Vec<f64> = power.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.len() < 3 {
        return Vec::new();
    }
    finite.sort_by(|a, b| a.total_cmp(b));
    let m = finite.len();
    let median = if m % 2 == 1 {
        finite[m / 2]
    } else {
        0.5 * (finite[m / 2 - 1] + finite[m / 2])
    };
    let threshold = median * 10f64.powf(-RESONANCE_DEPTH_DB / 10.0);
    (1..power.len().saturating_sub(1))
        .filter(|&i| power[i] < power[i - 1] && power[i] <= power[i + 1] && power[i] <= threshold)
        .collect()
}

/// Four-wave-mixing pump in the undepleted, lowest-order regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FwmPump {
    /// W
    pub pump_power: f64,
    /// W⁻¹ m⁻¹
    pub gamma_nl: f64,
    /// m
    pub interaction_length: f64,
    pub round_trips: f64,
}

impl FwmPump {
    pub fn new(pump_power: f64, gamma_nl: f64, interaction_length: f64, round_trips: f64) -> Result<Self, RingError> {
        for (name, v) in [
            ("pump_power", pump_power),
            ("gamma_nl", gamma_nl),
            ("interaction_length", interaction_length),
            ("round_trips", round_trips),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(RingError::Pump(name));
            }
        }
        Ok(Self {
            pump_power,
            gamma_nl,
            interaction_length,
            round_trips,
        })
    }
}

/// `r = γ · P · L · round_trips`
pub fn fwm_squeeze_parameter(pump: &FwmPump) -> f64 {
    pump.gamma_nl * pump.pump_power * pump.interaction_length * pump.round_trips
}

/// Pump seen by every ring; the interaction length and cavity enhancement
/// come from the circuit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpDrive {
    /// W
    pub power: f64,
    /// W⁻¹ m⁻¹
    pub gamma_nl: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceReport {
    pub lambda_res_um: f64,
    /// `|circulating / input|` on the most strongly driven ring.
    pub enhancement: f64,
    pub ring: Option<String>,
    /// Circumference of that ring, m.
    pub interaction_length_m: f64,
    pub round_trips: f64,
    pub r: f64,
    /// `None` when the squeezed vacuum needs more than
    /// [`MAX_REPORT_DIM`] Fock states.
    pub variances: Option<VarianceReport>,
    pub near_pole: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SqueezingReport {
    pub entries: Vec<ResonanceReport>,
    pub warnings: Vec<String>,
}

pub fn squeezing_report(
    circuit: &RingCircuit,
    pump: &PumpDrive,
    spec: &SweepSpec,
    frame: &OscillatorFrame,
) -> Result<SqueezingReport, RingError> {
    let response = sweep(circuit, spec)?;
    squeezing_report_from_sweep(circuit, pump, &response, frame)
}

/// Squeezing at each resonance of an existing sweep.
pub fn squeezing_report_from_sweep(
    circuit: &RingCircuit,
    pump: &PumpDrive,
    response: &SpectralResponse,
    frame: &OscillatorFrame,
) -> Result<SqueezingReport, RingError> {
    let mut report = SqueezingReport::default();
    let resonances = find_resonances(response);
    if resonances.is_empty() {
        report.warnings.push("no resonances found in the sweep window".into());
        return Ok(report);
    }
    for i in resonances {
        let lambda = response.lambdas[i];
        let point = evaluate(circuit, lambda)?;
        let (enhancement, ring) = field_enhancement(circuit, lambda)?;
        let length_um = ring.map_or(0.0, |r| circuit.rings[r].circumference_um());
        let round_trips = enhancement * enhancement;
        let fwm = FwmPump::new(pump.power, pump.gamma_nl, length_um * 1e-6, round_trips)?;
        let r = fwm_squeeze_parameter(&fwm);
        let dim = fock::required_dim(0.0, r);
        let (variances, note) = if dim > MAX_REPORT_DIM {
            let note = alloc::format!("r = {r} needs {dim} Fock states, above the limit of {MAX_REPORT_DIM}");
            (None, Some(note))
        } else {
            let space = FockSpace::new(dim)?;
            let state =
                fock::squeezed_coherent_state(space, &SqueezeSpec::new(Complex64::zero(), r, 0.0)?, Truncation::Enforce)?;
            (Some(fock::variances(&state, frame)?), None)
        };
        report.entries.push(ResonanceReport {
            lambda_res_um: lambda,
            enhancement,
            ring: ring.map(|r| circuit.rings[r].name.clone()),
            interaction_length_m: length_um * 1e-6,
            round_trips,
            r,
            variances,
            near_pole: point.near_pole(),
            note,
        });
    }
    Ok(report)
}

/// `λ² / (ng · L)` for a ring of circumference `length_um`.
pub fn free_spectral_range(circuit: &RingCircuit, lambda_um: f64, length_um: f64) -> f64 {
    lambda_um * lambda_um / (circuit.globals.n_g * length_um)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse;
    use crate::sfg::{enumerate_loops, forward_paths};

    fn add_drop(kappa1: f64, kappa2: f64, loss: f64, neff: f64, ng: f64) -> RingCircuit {
        parse(&alloc::format!(
            "globals neff={neff} ng={ng} loss_db_cm={loss}
ring r1 radius_um=10
bus top
bus bottom
port input on top.left
port through on top.right
port drop on bottom.left
port add on bottom.right
coupler c_in top r1 kappa={kappa1}
coupler c_drop r1 bottom kappa={kappa2}
"
        ))
        .unwrap()
    }

    fn all_pass(kappa: f64) -> RingCircuit {
        parse(&alloc::format!(
            "ring r1 radius_um=7
bus b
port input on b.left
port through on b.right
coupler c b r1 kappa={kappa}
"
        ))
        .unwrap()
    }

    /// Wavelength near 1.55 µm where the ring phase is a multiple of 2π,
    /// for constant index.
    fn resonance(c: &RingCircuit) -> f64 {
        let l = c.rings[0].circumference_um();
        let m = (c.globals.n_eff * l / 1.55).round();
        c.globals.n_eff * l / m
    }

    #[test]
    fn decoupled_ring_is_transparent() {
        let c = all_pass(0.0);
        for i in 0..50 {
            let p = evaluate(&c, 1.5 + 0.002 * i as f64).unwrap();
            assert_eq!(p.through, Complex64::new(1.0, 0.0));
        }
        let low = lower_to_sfg(&c, 1.55).unwrap();
        assert_eq!(low.graph.node_count(), 3);
    }

    #[test]
    fn add_drop_graph_shape() {
        let c = add_drop(0.1, 0.1, 3.0, 3.47, 3.6);
        let low = lower_to_sfg(&c, 1.55).unwrap();
        assert_eq!(enumerate_loops(&low.graph).len(), 1);
        assert_eq!(forward_paths(&low.graph, low.through).unwrap().len(), 2);
        assert_eq!(forward_paths(&low.graph, low.drop.unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn all_pass_closed_form() {
        // T = (t − a e^{iθ}) / (1 − t a e^{iθ})
        let c = all_pass(0.2);
        let t = 0.8f64.sqrt();
        for i in 0..40 {
            let lambda = 1.54 + 0.0005 * i as f64;
            let g = section_gain(&c, c.rings[0].circumference_um(), lambda);
            let want = (Complex64::new(t, 0.0) - g) / (Complex64::new(1.0, 0.0) - g * t);
            let got = evaluate(&c, lambda).unwrap().through;
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn symmetric_lossless_null_on_resonance() {
        let c = add_drop(0.1, 0.1, 0.0, 3.47, 3.47);
        let p = evaluate(&c, resonance(&c)).unwrap();
        assert!(p.through.norm() < 1e-10, "{}", p.through.norm());
        assert!((p.drop.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lossless_passivity_and_linear_agreement() {
        let c = add_drop(0.15, 0.05, 0.0, 3.47, 3.6);
        let spec = SweepSpec::new(1.54, 1.56, 400).unwrap();
        let s = sweep(&c, &spec).unwrap();
        assert!(s.poles.is_empty());
        for i in 0..s.len() {
            let e = s.through[i].norm_sqr() + s.drop[i].norm_sqr();
            assert!((e - 1.0).abs() < 1e-9);
            let (t, d) = evaluate_linear(&c, s.lambdas[i]).unwrap();
            assert!((t - s.through[i]).norm() < 1e-10);
            assert!((d - s.drop[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn group_index_sets_fsr() {
        let c = add_drop(0.1, 0.1, 3.0, 3.47, 3.6);
        let l = c.rings[0].circumference_um();
        // dθ/dλ at the reference equals −2π ng L / λ²
        let h = 1e-7;
        let th = |x: f64| TAU * effective_index(&c, x) * l / x;
        let d = (th(1.55 + h) - th(1.55 - h)) / (2.0 * h);
        assert!((d + TAU * 3.6 * l / (1.55 * 1.55)).abs() / d.abs() < 1e-6);
        assert!((free_spectral_range(&c, 1.55, l) - 1.55 * 1.55 / (3.6 * l)).abs() < 1e-15);
    }

    #[test]
    fn resonances_found_at_through_dips() {
        let c = add_drop(0.1, 0.1, 3.0, 3.47, 3.47);
        let r0 = resonance(&c);
        let spec = SweepSpec::new(r0 - 0.002, r0 + 0.002, 401).unwrap();
        let s = sweep(&c, &spec).unwrap();
        let found = find_resonances(&s);
        assert_eq!(found.len(), 1);
        assert!((s.lambdas[found[0]] - r0).abs() <= 1.5e-5);
    }

    #[test]
    fn fwm_parameter_model() {
        let p = FwmPump::new(0.05, 100.0, TAU * 10e-6, 50.0).unwrap();
        let r = fwm_squeeze_parameter(&p);
        assert!((r - 100.0 * 0.05 * TAU * 1e-5 * 50.0).abs() < 1e-15);
        assert!((r - 0.015707963267948967).abs() < 1e-12);
        let p0 = FwmPump::new(0.0, 100.0, 1e-4, 50.0).unwrap();
        assert_eq!(fwm_squeeze_parameter(&p0), 0.0);
        let p2 = FwmPump::new(0.1, 100.0, TAU * 10e-6, 50.0).unwrap();
        assert_eq!(fwm_squeeze_parameter(&p2), 2.0 * r);
        assert!(FwmPump::new(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn weakly_coupled_ring_is_flagged() {
        let c = add_drop(1e-6, 1e-6, 0.0, 3.47, 3.47);
        let r0 = resonance(&c);
        let spec = SweepSpec::new(r0 - 1e-4, r0 + 1e-4, 3).unwrap();
        let pump = PumpDrive { power: 0.0, gamma_nl: 100.0 };
        let rep = squeezing_report(&c, &pump, &spec, &OscillatorFrame::default()).unwrap();
        assert_eq!(rep.entries.len(), 1);
        let e = &rep.entries[0];
        assert!(e.near_pole);
        assert!(e.enhancement > 900.0);
    }

    #[test]
    fn zero_pump_gives_vacuum() {
        let c = add_drop(0.1, 0.1, 3.0, 3.47, 3.6);
        let spec = SweepSpec::new(1.54, 1.56, 800).unwrap();
        let pump = PumpDrive { power: 0.0, gamma_nl: 100.0 };
        let rep = squeezing_report(&c, &pump, &spec, &OscillatorFrame::default()).unwrap();
        assert!(!rep.entries.is_empty());
        for e in &rep.entries {
            assert_eq!(e.r, 0.0);
            let v = e.variances.unwrap();
            assert!((v.var_x - 0.5).abs() < 1e-12 && (v.var_p - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn no_resonance_warns() {
        let c = all_pass(0.0);
        let spec = SweepSpec::new(1.54, 1.56, 50).unwrap();
        let pump = PumpDrive { power: 0.1, gamma_nl: 100.0 };
        let rep = squeezing_report(&c, &pump, &spec, &OscillatorFrame::default()).unwrap();
        assert!(rep.entries.is_empty());
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn bad_sweeps_rejected() {
        assert!(SweepSpec::new(1.56, 1.54, 10).is_err());
        assert!(SweepSpec::new(0.0, 1.54, 10).is_err());
        assert!(SweepSpec::new(1.54, 1.56, 1).is_err());
        let s = SweepSpec::new(1.54, 1.56, 3).unwrap();
        assert_eq!(s.lambdas(), vec![1.54, 1.55, 1.56]);
    }
}
