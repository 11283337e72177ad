//! Built-in invariant checks behind `sqr verify`.
//!
//! Every check is deterministic: fixed seeds, fixed grids, no timings in
//! the detail text.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqr_core::fock::{
    self, annihilation, creation, displacement, photon_distribution, required_dim, squeeze, FockOperator, FockSpace,
    OscillatorFrame, SqueezeSpec, Truncation,
};
use sqr_core::netlist::{parse, render, RingCircuit};
use sqr_core::ring::{self, PumpDrive, SweepSpec};
use sqr_core::sfg::{determinant_i_minus_a, linear_solve_transfer, MasonSolver, SignalFlowGraph};
use sqr_core::wavepacket::{density_profile, trapezoid, DisplacementGrid, WavePacketParams};
use sqr_core::wigner::{wigner, PhaseGrid};

use crate::netlist_file;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name, passed, detail }
}

/// Turns an internal error into a failed check.
fn guarded(name: &'static str, f: impl FnOnce() -> Result<CheckResult, String>) -> CheckResult {
    f().unwrap_or_else(|e| check(name, false, format!("error: {e}")))
}

fn space(dim: usize) -> Result<FockSpace, String> {
    FockSpace::new(dim).map_err(|e| e.to_string())
}

fn state(alpha: Complex64, r: f64, phi: f64, dim: usize) -> Result<fock::QuantumState, String> {
    let spec = SqueezeSpec::new(alpha, r, phi).map_err(|e| e.to_string())?;
    fock::squeezed_coherent_state(space(dim)?, &spec, Truncation::Enforce).map_err(|e| e.to_string())
}

fn commutator() -> CheckResult {
    guarded("commutator [a, a+] = I off the corner", || {
        let mut worst = 0.0f64;
        for dim in [4, 32, 128] {
            let s = space(dim)?;
            let c = annihilation(s).commutator(&creation(s)).map_err(|e| e.to_string())?;
            let m = c.matrix();
            for i in 0..dim {
                for j in 0..dim {
                    let want = match (i == j, i == dim - 1) {
                        (true, true) => 1.0 - dim as f64,
                        (true, false) => 1.0,
                        _ => 0.0,
                    };
                    worst = worst.max((m[(i, j)] - Complex64::new(want, 0.0)).norm());
                }
            }
        }
        Ok(check("commutator [a, a+] = I off the corner", worst < 1e-12, format!("max deviation {worst:.2e}")))
    })
}

fn unitarity() -> CheckResult {
    const NAME: &str = "D and S unitary, inverses compose to I";
    guarded(NAME, || {
        let e = |x: fock::FockError| x.to_string();
        let alpha = Complex64::new(1.5, -0.5);
        let xi = Complex64::from_polar(0.8, 0.3);
        let s = space(required_dim(alpha.norm(), xi.norm()))?;
        let d = displacement(s, alpha, Truncation::Enforce).map_err(e)?;
        let sq = squeeze(s, xi, Truncation::Enforce).map_err(e)?;
        let id = FockOperator::identity(s);
        let d_inv = d.compose(&displacement(s, -alpha, Truncation::Enforce).map_err(e)?).map_err(e)?;
        let s_inv = sq.compose(&squeeze(s, -xi, Truncation::Enforce).map_err(e)?).map_err(e)?;
        let worst = [
            d.unitarity_defect(),
            sq.unitarity_defect(),
            d_inv.sub(&id).map_err(e)?.matrix().norm_max(),
            s_inv.sub(&id).map_err(e)?.matrix().norm_max(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        Ok(check(NAME, worst < 1e-10, format!("max defect {worst:.2e} at dim {}", s.dim())))
    })
}

fn minimum_uncertainty() -> CheckResult {
    const NAME: &str = "real squeezing is minimum uncertainty";
    guarded(NAME, || {
        let frame = OscillatorFrame::default();
        let mut worst = 0.0f64;
        for r in [0.0, 0.25, 0.5, 1.0, 1.5] {
            for a in [0.0, 1.0, 2.0] {
                let st = state(Complex64::new(a, 0.0), r, 0.0, required_dim(a, r))?;
                let v = fock::variances(&st, &frame).map_err(|e| e.to_string())?;
                let want_x = 0.5 * (-2.0 * r).exp();
                let want_p = 0.5 * (2.0 * r).exp();
                worst = worst
                    .max((v.product - 0.5).abs() / 0.5)
                    .max((v.var_x - want_x).abs() / want_x)
                    .max((v.var_p - want_p).abs() / want_p);
            }
        }
        Ok(check(NAME, worst < 1e-6, format!("max relative error {worst:.2e}")))
    })
}

fn photon_parity() -> CheckResult {
    const NAME: &str = "squeezed vacuum photon statistics";
    guarded(NAME, || {
        let mut worst = 0.0f64;
        for (r, phi) in [(0.3, 0.0), (0.9, 1.1), (1.4, 4.0)] {
            let p = photon_distribution(&state(Complex64::new(0.0, 0.0), r, phi, required_dim(0.0, r))?);
            let t2 = r.tanh().powi(2);
            // P(2m) = (2m)! / (2^m m!)^2 · tanh^{2m} r / cosh r, built up by ratio
            let mut even = 1.0 / r.cosh();
            for (n, &pn) in p.iter().enumerate() {
                if n % 2 == 1 {
                    worst = worst.max(pn);
                } else {
                    worst = worst.max((pn - even).abs());
                    let m = (n / 2) as f64;
                    even *= t2 * (2.0 * m + 1.0) / (2.0 * m + 2.0);
                }
            }
        }
        Ok(check(NAME, worst < 1e-10, format!("max deviation {worst:.2e}")))
    })
}

fn dim_convergence() -> CheckResult {
    const NAME: &str = "variances stable under doubling the dimension";
    guarded(NAME, || {
        let frame = OscillatorFrame::default();
        let mut worst = 0.0f64;
        for (a, r) in [(1.0, 0.5), (2.0, 1.0), (0.5, 1.5)] {
            let alpha = Complex64::new(a, 0.3);
            let dim = required_dim(alpha.norm(), r);
            let v1 = fock::variances(&state(alpha, r, 0.7, dim)?, &frame).map_err(|e| e.to_string())?;
            let v2 = fock::variances(&state(alpha, r, 0.7, 2 * dim)?, &frame).map_err(|e| e.to_string())?;
            worst = worst.max((v1.var_x - v2.var_x).abs()).max((v1.var_p - v2.var_p).abs());
        }
        Ok(check(NAME, worst < 1e-8, format!("max change {worst:.2e}")))
    })
}

/// Seeded graph whose gain matrix has ∞-norm 0.9, so `I − A` is invertible.
pub fn random_graph(seed: u64) -> SignalFlowGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=8);
    let mut raw = Vec::new();
    for from in 0..n {
        for to in 0..n {
            if rng.gen_bool(0.35) {
                raw.push((from, to, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
            }
        }
    }
    let mut row = vec![0.0; n];
    for &(_, to, g) in &raw {
        row[to] += g.norm();
    }
    let max_row = row.iter().cloned().fold(0.0, f64::max);
    let scale = if max_row > 0.0 { 0.9 / max_row } else { 1.0 };
    let mut g = SignalFlowGraph::with_nodes(n);
    for (from, to, w) in raw {
        g.add_edge(from, to, w * scale).expect("node in range");
    }
    g.set_source(0).expect("node in range");
    g.add_sink(n - 1).expect("node in range");
    g
}

fn mason_vs_linear(seeds: u64) -> Vec<CheckResult> {
    let mut worst_t = 0.0f64;
    let mut worst_d = 0.0f64;
    let mut failure = None;
    for seed in 0..seeds {
        let g = random_graph(seed);
        let sink = g.node_count() - 1;
        let r = MasonSolver::new(&g).and_then(|m| {
            let t = m.transfer(sink)?;
            let lin = linear_solve_transfer(&g, sink)?;
            Ok((t, lin, m.delta()))
        });
        match r {
            Ok((t, lin, delta)) => {
                worst_t = worst_t.max((t - lin).norm() / lin.norm().max(1.0));
                let det = determinant_i_minus_a(&g);
                worst_d = worst_d.max((delta - det).norm() / det.norm().max(1e-300));
            }
            Err(e) => {
                failure.get_or_insert(format!("seed {seed}: {e}"));
            }
        }
    }
    let with = |name, worst: f64| match &failure {
        Some(f) => check(name, false, format!("error: {f}")),
        None => check(name, worst < 1e-10, format!("{seeds} graphs, max relative error {worst:.2e}")),
    };
    vec![
        with("Mason transfer equals linear solve", worst_t),
        with("Mason determinant equals det(I - A)", worst_d),
    ]
}

fn bundled(text: &str, origin: &str) -> Result<RingCircuit, String> {
    netlist_file::parse_text(text, origin).map(|(c, _)| c).map_err(|e| e.message)
}

/// Golden-section minimum of `|through|²` inside `[lo, hi]`.
fn refine_minimum(c: &RingCircuit, mut lo: f64, mut hi: f64) -> Result<f64, String> {
    let f = |l: f64| ring::evaluate(c, l).map(|p| p.through.norm_sqr()).map_err(|e| e.to_string());
    let k = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = hi - k * (hi - lo);
        let b = lo + k * (hi - lo);
        if f(a)? < f(b)? {
            hi = b;
        } else {
            lo = a;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn add_drop() -> Vec<CheckResult> {
    const NULL: &str = "lossless symmetric add-drop nulls the through port";
    const PASSIVE: &str = "add-drop passivity";
    const FSR: &str = "add-drop FSR follows the group index";
    let run = || -> Result<Vec<CheckResult>, String> {
        let mut c = bundled(netlist_file::ADD_DROP, "add_drop.net")?;
        let spec = SweepSpec::new(1.54, 1.56, 4001).map_err(|e| e.to_string())?;
        let lossy = ring::sweep(&c, &spec).map_err(|e| e.to_string())?;
        c.globals.loss_db_cm = 0.0;
        let lossless = ring::sweep(&c, &spec).map_err(|e| e.to_string())?;

        let mut excess = 0.0f64;
        let mut balance = 0.0f64;
        for i in 0..spec.points() {
            excess = excess.max(lossy.through[i].norm_sqr() + lossy.drop[i].norm_sqr() - 1.0);
            balance = balance.max((lossless.through[i].norm_sqr() + lossless.drop[i].norm_sqr() - 1.0).abs());
        }
        let passive = check(
            PASSIVE,
            excess <= 1e-12 && balance < 1e-12,
            format!("lossy excess {excess:.2e}, lossless imbalance {balance:.2e}"),
        );

        let res = ring::find_resonances(&lossless);
        if res.len() < 2 {
            return Ok(vec![
                check(NULL, false, format!("{} resonances in the window", res.len())),
                passive,
                check(FSR, false, "fewer than two resonances".into()),
            ]);
        }
        let h = spec.lambda(1) - spec.lambda(0);
        let mut deepest = 0.0f64;
        let mut centres = Vec::new();
        for &i in &res {
            let l = refine_minimum(&c, lossless.lambdas[i] - h, lossless.lambdas[i] + h)?;
            deepest = deepest.max(ring::evaluate(&c, l).map_err(|e| e.to_string())?.through.norm_sqr());
            centres.push(l);
        }
        let null = check(NULL, deepest < 1e-9, format!("{} resonances, max |t|^2 {deepest:.2e}", res.len()));

        let length = c.rings[0].circumference_um();
        let mut worst = 0.0f64;
        for w in centres.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let predicted = ring::free_spectral_range(&c, mid, length);
            worst = worst.max(((w[1] - w[0]) / predicted - 1.0).abs());
        }
        let fsr = check(FSR, worst < 0.02, format!("max relative FSR error {worst:.2e}"));
        Ok(vec![null, passive, fsr])
    };
    run().unwrap_or_else(|e| {
        [NULL, PASSIVE, FSR].into_iter().map(|n| check(n, false, format!("error: {e}"))).collect()
    })
}

fn three_ring_pipeline() -> CheckResult {
    const NAME: &str = "three-ring circuit squeezing report";
    guarded(NAME, || {
        let c = bundled(netlist_file::THREE_RING, "three_ring.net")?;
        let spec = SweepSpec::new(1.54, 1.56, 2000).map_err(|e| e.to_string())?;
        let pump = PumpDrive {
            power: 0.05,
            gamma_nl: 100.0,
        };
        let rep =
            ring::squeezing_report(&c, &pump, &spec, &OscillatorFrame::default()).map_err(|e| e.to_string())?;
        let mut ok = !rep.entries.is_empty();
        for e in &rep.entries {
            ok &= e.r.is_finite() && e.r >= 0.0 && e.enhancement >= 1.0;
            if let Some(v) = e.variances {
                ok &= (v.product - 0.5).abs() < 1e-6;
            }
        }
        Ok(check(NAME, ok, format!("{} resonances reported", rep.entries.len())))
    })
}

fn netlist_round_trip() -> CheckResult {
    const NAME: &str = "netlist render/parse round trip";
    guarded(NAME, || {
        for (text, origin) in [
            (netlist_file::ADD_DROP, "add_drop.net"),
            (netlist_file::THREE_RING, "three_ring.net"),
            (netlist_file::ALL_PASS, "all_pass.net"),
        ] {
            let c = bundled(text, origin)?;
            let back = parse(&render(&c)).map_err(|e| e.to_string())?;
            if back != c {
                return Ok(check(NAME, false, format!("{origin} changed")));
            }
        }
        Ok(check(NAME, true, "3 bundled netlists".into()))
    })
}

fn wave_packet() -> CheckResult {
    const NAME: &str = "wave-packet density ignores p0 and normalizes";
    guarded(NAME, || {
        let e = |x: sqr_core::wavepacket::WavePacketError| x.to_string();
        let grid = DisplacementGrid::new(0.0, 10.0, 1001).map_err(e)?;
        let a = density_profile(&WavePacketParams::new(5.0, 5.0, 1.0, 0.0).map_err(e)?, &grid);
        let b = density_profile(&WavePacketParams::new(5.0, 5.0, 1.0, 7.3).map_err(e)?, &grid);
        let same = a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits());
        let norm = WavePacketParams::new(5.0, 5.0, 1.0, 0.0).map_err(e)?.normalized();
        let integral = trapezoid(&density_profile(&norm, &grid), grid.spacing());
        Ok(check(
            NAME,
            same && (integral - 1.0).abs() < 1e-6,
            format!("bit-identical {same}, normalized integral {integral:.10}"),
        ))
    })
}

fn wigner_moments() -> CheckResult {
    const NAME: &str = "Wigner grid moments match the state";
    guarded(NAME, || {
        let frame = OscillatorFrame::default();
        let mut worst = 0.0f64;
        for (a, r) in [(0.0, 0.0), (1.0, 0.5)] {
            let st = state(Complex64::new(a, 0.0), r, 0.0, required_dim(a, r))?;
            let grid = PhaseGrid::covering(&st, &frame, 6.0, 161, 161).map_err(|e| e.to_string())?;
            let m = wigner(&st, &frame, &grid).map_err(|e| e.to_string())?.moments();
            let v = fock::variances(&st, &frame).map_err(|e| e.to_string())?;
            let (mx, mp) = fock::quadrature_means(&st, &frame).map_err(|e| e.to_string())?;
            worst = worst
                .max((m.integral - 1.0).abs())
                .max((m.mean_x - mx).abs())
                .max((m.mean_p - mp).abs())
                .max((m.var_x / v.var_x - 1.0).abs())
                .max((m.var_p / v.var_p - 1.0).abs());
        }
        Ok(check(NAME, worst < 1e-3, format!("max deviation {worst:.2e}")))
    })
}

pub fn run_all(seeds: u64) -> Vec<CheckResult> {
    let mut out = vec![commutator(), unitarity(), minimum_uncertainty(), photon_parity(), dim_convergence()];
    out.extend(mason_vs_linear(seeds));
    out.extend(add_drop());
    out.push(three_ring_pipeline());
    out.push(netlist_round_trip());
    out.push(wave_packet());
    out.push(wigner_moments());
    out
}
