//! Line-oriented ring circuit description.
//!
//! ```text
//! globals neff=<float> ng=<float> loss_db_cm=<float>
//! ring    <name> radius_um=<float>
//! bus     <name>
//! port    <input|through|drop|add> on <bus>.<left|right>
//! coupler <name> <element> <element> kappa=<float>
//! ```
//!
//! `#` starts a comment. Statements appear in the order globals, elements,
//! ports, couplers; `globals` is optional and any of its keys may be
//! omitted. Rings, buses and couplers share one namespace.
//!
//! Couplers on a bus are listed left to right in declaration order. Couplers
//! on a ring are spaced evenly around it in declaration order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub const DEFAULT_NEFF: f64 = 3.47;
pub const DEFAULT_NG: f64 = 3.6;
pub const DEFAULT_LOSS_DB_CM: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpticalGlobals {
    pub n_eff: f64,
    pub n_g: f64,
    pub loss_db_cm: f64,
}

impl Default for OpticalGlobals {
    fn default() -> Self {
        Self {
            n_eff: DEFAULT_NEFF,
            n_g: DEFAULT_NG,
            loss_db_cm: DEFAULT_LOSS_DB_CM,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingSpec {
    pub name: String,
    pub radius_um: f64,
}

impl RingSpec {
    pub fn circumference_um(&self) -> f64 {
        core::f64::consts::TAU * self.radius_um
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BusSpec {
    pub name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortKind {
    Input,
    Through,
    Drop,
    Add,
}

impl PortKind {
    pub const ALL: [PortKind; 4] = [PortKind::Input, PortKind::Through, PortKind::Drop, PortKind::Add];

    pub fn keyword(self) -> &'static str {
        match self {
            PortKind::Input => "input",
            PortKind::Through => "through",
            PortKind::Drop => "drop",
            PortKind::Add => "add",
        }
    }

    /// Light enters the circuit here.
    pub fn is_inlet(self) -> bool {
        matches!(self, PortKind::Input | PortKind::Add)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BusEnd {
    Left,
    Right,
}

impl BusEnd {
    pub fn keyword(self) -> &'static str {
        match self {
            BusEnd::Left => "left",
            BusEnd::Right => "right",
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            BusEnd::Left => BusEnd::Right,
            BusEnd::Right => BusEnd::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PortSpec {
    pub kind: PortKind,
    pub bus: String,
    pub end: BusEnd,
}

/// Lossless symmetric coupler: through amplitude `√(1−κ)`, cross `i√κ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplerSpec {
    pub name: String,
    pub element_a: String,
    pub element_b: String,
    pub kappa: f64,
}

impl CouplerSpec {
    pub fn touches(&self, element: &str) -> bool {
        self.element_a == element || self.element_b == element
    }

    /// The element on the other side, if `element` is one of the two.
    pub fn other(&self, element: &str) -> Option<&str> {
        if self.element_a == element {
            Some(&self.element_b)
        } else if self.element_b == element {
            Some(&self.element_a)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct RingCircuit {
    pub globals: OpticalGlobals,
    pub rings: Vec<RingSpec>,
    pub buses: Vec<BusSpec>,
    pub ports: Vec<PortSpec>,
    pub couplers: Vec<CouplerSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Ring,
    Bus,
}

impl RingCircuit {
    pub fn port(&self, kind: PortKind) -> Option<&PortSpec> {
        self.ports.iter().find(|p| p.kind == kind)
    }

    pub fn ring(&self, name: &str) -> Option<&RingSpec> {
        self.rings.iter().find(|r| r.name == name)
    }

    pub fn element_kind(&self, name: &str) -> Option<ElementKind> {
        if self.rings.iter().any(|r| r.name == name) {
            Some(ElementKind::Ring)
        } else if self.buses.iter().any(|b| b.name == name) {
            Some(ElementKind::Bus)
        } else {
            None
        }
    }

    /// Couplers touching `element`, in declaration order.
    pub fn couplers_on<'a>(&'a self, element: &'a str) -> impl Iterator<Item = (usize, &'a CouplerSpec)> + 'a {
        self.couplers.iter().enumerate().filter(move |(_, c)| c.touches(element))
    }

    /// End of `bus` where light enters, from its ports; `Left` when the bus
    /// has none.
    pub fn bus_entry(&self, bus: &str) -> BusEnd {
        let mut entry = BusEnd::Left;
        for p in self.ports.iter().filter(|p| p.bus == bus) {
            if p.kind.is_inlet() {
                return p.end;
            }
            entry = p.end.opposite();
        }
        entry
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticCode {
    UnknownReference,
    KappaOutOfRange,
    InvalidValue,
    DuplicateName,
    SelfCoupling,
    UnusedRing,
    Disconnected,
    PortConflict,
    MissingPort,
    OpticallyIsolated,
    Lossless,
    SideRingCoupling,
}

/// Statement a diagnostic refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    Globals,
    Ring(usize),
    Bus(usize),
    Port(usize),
    Coupler(usize),
    Circuit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub subject: Subject,
    pub message: String,
    /// Source line, when the circuit came from text.
    pub line: Option<usize>,
}

impl Diagnostic {
    fn error(code: DiagnosticCode, subject: Subject, message: String) -> Self {
        Self {
            severity: Severity::Error,
            code,
            subject,
            message,
            line: None,
        }
    }

    fn warning(code: DiagnosticCode, subject: Subject, message: String) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(code, subject, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        match self.line {
            Some(l) => write!(f, "line {l}: {sev}: {}", self.message),
            None => write!(f, "{sev}: {}", self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl SyntaxError {
    /// `expected …, found …` without the position.
    pub fn description(&self) -> String {
        format!("expected {}, found {}", self.expected.join(" or "), self.found)
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.description())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum NetlistError {
    #[error("syntax error at {0}")]
    Syntax(SyntaxError),
    #[error("invalid circuit: {}", first_message(.0))]
    Semantic(Vec<Diagnostic>),
}

fn first_message(diags: &[Diagnostic]) -> String {
    match diags {
        [] => String::new(),
        [d] => d.to_string(),
        [d, rest @ ..] => format!("{d} (and {} more)", rest.len()),
    }
}

/// Parses and validates. Warnings are dropped; use
/// [`parse_with_diagnostics`] to keep them.
pub fn parse(text: &str) -> Result<RingCircuit, NetlistError> {
    parse_with_diagnostics(text).map(|(c, _)| c)
}

/// Parses and validates, returning the circuit with its warnings.
pub fn parse_with_diagnostics(text: &str) -> Result<(RingCircuit, Vec<Diagnostic>), NetlistError> {
    let (circuit, lines) = Parser::default().run(text)?;
    let mut diags = validate(&circuit);
    for d in &mut diags {
        d.line = lines.line_of(d.subject);
    }
    if diags.iter().any(Diagnostic::is_error) {
        diags.retain(Diagnostic::is_error);
        return Err(NetlistError::Semantic(diags));
    }
    Ok((circuit, diags))
}

#[derive(Default)]
struct SourceLines {
    globals: Option<usize>,
    rings: Vec<usize>,
    buses: Vec<usize>,
    ports: Vec<usize>,
    couplers: Vec<usize>,
}

impl SourceLines {
    fn line_of(&self, s: Subject) -> Option<usize> {
        match s {
            Subject::Globals => self.globals,
            Subject::Ring(i) => self.rings.get(i).copied(),
            Subject::Bus(i) => self.buses.get(i).copied(),
            Subject::Port(i) => self.ports.get(i).copied(),
            Subject::Coupler(i) => self.couplers.get(i).copied(),
            Subject::Circuit => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    Start,
    Globals,
    Elements,
    Ports,
    Couplers,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> Line<'a> {
    fn new(number: usize, raw: &'a str) -> Self {
        let content = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut start = None;
        let mut column = 0;
        for (ci, (bi, ch)) in content.char_indices().enumerate() {
            column = ci + 1;
            if ch.is_whitespace() {
                if let Some((b, c)) = start.take() {
                    tokens.push(Token { text: &content[b..bi], column: c });
                }
            } else if start.is_none() {
                start = Some((bi, column));
            }
        }
        if let Some((b, c)) = start {
            tokens.push(Token { text: &content[b..], column: c });
        }
        Line {
            number,
            tokens,
            end_column: column + 1,
        }
    }

    fn error(&self, index: usize, expected: &[&str]) -> NetlistError {
        let (column, found) = match self.tokens.get(index) {
            Some(t) => (t.column, format!("`{}`", t.text)),
            None => (self.end_column, "end of line".to_string()),
        };
        NetlistError::Syntax(SyntaxError {
            line: self.number,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        })
    }

    fn token(&self, index: usize, expected: &[&str]) -> Result<&'a str, NetlistError> {
        self.tokens.get(index).map(|t| t.text).ok_or_else(|| self.error(index, expected))
    }

    fn identifier(&self, index: usize, what: &str) -> Result<String, NetlistError> {
        let t = self.token(index, &[what])?;
        if is_identifier(t) {
            Ok(t.to_string())
        } else {
            Err(self.error(index, &[what]))
        }
    }

    fn keyword<T: Copy>(&self, index: usize, options: &[(&str, T)]) -> Result<T, NetlistError> {
        let names: Vec<&str> = options.iter().map(|o| o.0).collect();
        let t = self.token(index, &names)?;
        options
            .iter()
            .find(|o| o.0 == t)
            .map(|o| o.1)
            .ok_or_else(|| self.error(index, &names))
    }

    /// `key=<float>` with the key fixed.
    fn assignment(&self, index: usize, key: &str) -> Result<f64, NetlistError> {
        let expected = format!("{key}=<number>");
        let t = self.token(index, &[&expected])?;
        match t.strip_prefix(key).and_then(|r| r.strip_prefix('=')) {
            Some(v) => parse_number(v).ok_or_else(|| self.error(index, &[&expected])),
            None => Err(self.error(index, &[&expected])),
        }
    }

    fn end(&self, index: usize) -> Result<(), NetlistError> {
        if index < self.tokens.len() {
            Err(self.error(index, &["end of line"]))
        } else {
            Ok(())
        }
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Decimal literal; rejects `inf`, `nan` and friends that `f64::from_str`
/// would accept.
fn parse_number(s: &str) -> Option<f64> {
    if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E')) {
        return None;
    }
    if !s.chars().any(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[derive(Default)]
struct Parser {
    circuit: RingCircuit,
    lines: SourceLines,
}

const STATEMENTS: [&str; 5] = ["globals", "ring", "bus", "port", "coupler"];

impl Parser {
    fn run(mut self, text: &str) -> Result<(RingCircuit, SourceLines), NetlistError> {
        let mut stage = Stage::Start;
        for (i, raw) in text.lines().enumerate() {
            let line = Line::new(i + 1, raw);
            let Some(first) = line.tokens.first() else {
                continue;
            };
            let next = match first.text {
                "globals" => Stage::Globals,
                "ring" | "bus" => Stage::Elements,
                "port" => Stage::Ports,
                "coupler" => Stage::Couplers,
                _ => return Err(line.error(0, &allowed_after(stage))),
            };
            if next < stage || (next == Stage::Globals && stage == Stage::Globals) {
                return Err(line.error(0, &allowed_after(stage)));
            }
            stage = next;
            match first.text {
                "globals" => self.globals(&line)?,
                "ring" => self.ring(&line)?,
                "bus" => self.bus(&line)?,
                "port" => self.port(&line)?,
                _ => self.coupler(&line)?,
            }
        }
        Ok((self.circuit, self.lines))
    }

    fn globals(&mut self, line: &Line) -> Result<(), NetlistError> {
        const KEYS: [&str; 3] = ["neff", "ng", "loss_db_cm"];
        let mut seen = [false; 3];
        for idx in 1..line.tokens.len() {
            let t = line.tokens[idx].text;
            let remaining: Vec<String> = KEYS
                .iter()
                .zip(&seen)
                .filter(|(_, s)| !**s)
                .map(|(k, _)| format!("{k}=<number>"))
                .chain(core::iter::once("end of line".to_string()))
                .collect();
            let remaining: Vec<&str> = remaining.iter().map(String::as_str).collect();
            let key = t.split('=').next().unwrap_or("");
            let Some(k) = KEYS.iter().position(|&k| k == key) else {
                return Err(line.error(idx, &remaining));
            };
            if seen[k] {
                return Err(line.error(idx, &remaining));
            }
            seen[k] = true;
            let v = line.assignment(idx, KEYS[k])?;
            let g = &mut self.circuit.globals;
            match k {
                0 => g.n_eff = v,
                1 => g.n_g = v,
                _ => g.loss_db_cm = v,
            }
        }
        self.lines.globals = Some(line.number);
        Ok(())
    }

    fn ring(&mut self, line: &Line) -> Result<(), NetlistError> {
        let name = line.identifier(1, "ring name")?;
        let radius_um = line.assignment(2, "radius_um")?;
        line.end(3)?;
        self.circuit.rings.push(RingSpec { name, radius_um });
        self.lines.rings.push(line.number);
        Ok(())
    }

    fn bus(&mut self, line: &Line) -> Result<(), NetlistError> {
        let name = line.identifier(1, "bus name")?;
        line.end(2)?;
        self.circuit.buses.push(BusSpec { name });
        self.lines.buses.push(line.number);
        Ok(())
    }

    fn port(&mut self, line: &Line) -> Result<(), NetlistError> {
        let kind = line.keyword(
            1,
            &[
                ("input", PortKind::Input),
                ("through", PortKind::Through),
                ("drop", PortKind::Drop),
                ("add", PortKind::Add),
            ],
        )?;
        line.keyword(2, &[("on", ())])?;
        const WHERE: &str = "<bus>.left or <bus>.right";
        let target = line.token(3, &[WHERE])?;
        let (bus, end) = target.rsplit_once('.').ok_or_else(|| line.error(3, &[WHERE]))?;
        let end = match end {
            "left" => BusEnd::Left,
            "right" => BusEnd::Right,
            _ => return Err(line.error(3, &[WHERE])),
        };
        if !is_identifier(bus) {
            return Err(line.error(3, &[WHERE]));
        }
        line.end(4)?;
        self.circuit.ports.push(PortSpec {
            kind,
            bus: bus.to_string(),
            end,
        });
        self.lines.ports.push(line.number);
        Ok(())
    }

    fn coupler(&mut self, line: &Line) -> Result<(), NetlistError> {
        let name = line.identifier(1, "coupler name")?;
        let element_a = line.identifier(2, "element name")?;
        let element_b = line.identifier(3, "element name")?;
        let kappa = line.assignment(4, "kappa")?;
        line.end(5)?;
        self.circuit.couplers.push(CouplerSpec {
            name,
            element_a,
            element_b,
            kappa,
        });
        self.lines.couplers.push(line.number);
        Ok(())
    }
}

fn allowed_after(stage: Stage) -> Vec<&'static str> {
    let from = match stage {
        Stage::Start => 0,
        Stage::Globals | Stage::Elements => 1,
        Stage::Ports => 3,
        Stage::Couplers => 4,
    };
    STATEMENTS[from..].to_vec()
}

/// Every invariant violation as an error, plus warnings for legal but
/// physically odd values. Empty iff the circuit is clean.
pub fn validate(c: &RingCircuit) -> Vec<Diagnostic> {
    use DiagnosticCode as D;
    let mut out = Vec::new();
    let g = &c.globals;
    for (name, v) in [("neff", g.n_eff), ("ng", g.n_g)] {
        if !(v > 0.0 && v.is_finite()) {
            out.push(Diagnostic::error(
                D::InvalidValue,
                Subject::Globals,
                format!("globals: {name}={v} must be positive and finite"),
            ));
        }
    }
    if !(g.loss_db_cm >= 0.0 && g.loss_db_cm.is_finite()) {
        out.push(Diagnostic::error(
            D::InvalidValue,
            Subject::Globals,
            format!("globals: loss_db_cm={} must be non-negative and finite", g.loss_db_cm),
        ));
    } else if g.loss_db_cm == 0.0 {
        out.push(Diagnostic::warning(
            D::Lossless,
            Subject::Globals,
            "globals: loss_db_cm=0, resonances of a lossless circuit are poles".to_string(),
        ));
    }

    // names
    let mut names: Vec<(&str, Subject)> = Vec::new();
    let declared = c
        .rings
        .iter()
        .enumerate()
        .map(|(i, r)| (r.name.as_str(), Subject::Ring(i)))
        .chain(c.buses.iter().enumerate().map(|(i, b)| (b.name.as_str(), Subject::Bus(i))))
        .chain(c.couplers.iter().enumerate().map(|(i, k)| (k.name.as_str(), Subject::Coupler(i))));
    for (name, subject) in declared {
        if names.iter().any(|(n, _)| *n == name) {
            out.push(Diagnostic::error(
                D::DuplicateName,
                subject,
                format!("name `{name}` is declared more than once"),
            ));
        } else {
            names.push((name, subject));
        }
    }

    for (i, r) in c.rings.iter().enumerate() {
        if !(r.radius_um > 0.0 && r.radius_um.is_finite()) {
            out.push(Diagnostic::error(
                D::InvalidValue,
                Subject::Ring(i),
                format!("ring {}: radius_um={} must be positive and finite", r.name, r.radius_um),
            ));
        }
    }

    let mut couplers_ok = vec![true; c.couplers.len()];
    for (i, k) in c.couplers.iter().enumerate() {
        for e in [&k.element_a, &k.element_b] {
            if c.element_kind(e).is_none() {
                couplers_ok[i] = false;
                out.push(Diagnostic::error(
                    D::UnknownReference,
                    Subject::Coupler(i),
                    format!("coupler {}: unknown element `{e}`", k.name),
                ));
            }
        }
        if k.element_a == k.element_b {
            couplers_ok[i] = false;
            out.push(Diagnostic::error(
                D::SelfCoupling,
                Subject::Coupler(i),
                format!("coupler {}: couples `{}` to itself", k.name, k.element_a),
            ));
        }
        if !(0.0..=1.0).contains(&k.kappa) {
            out.push(Diagnostic::error(
                D::KappaOutOfRange,
                Subject::Coupler(i),
                format!("coupler {}: kappa={} outside the range [0, 1]", k.name, k.kappa),
            ));
        } else if k.kappa == 0.0 {
            out.push(Diagnostic::warning(
                D::OpticallyIsolated,
                Subject::Coupler(i),
                format!("coupler {}: kappa=0, element optically isolated", k.name),
            ));
        }
    }

    // ports
    for (i, p) in c.ports.iter().enumerate() {
        if !c.buses.iter().any(|b| b.name == p.bus) {
            out.push(Diagnostic::error(
                D::UnknownReference,
                Subject::Port(i),
                format!("port {}: unknown bus `{}`", p.kind.keyword(), p.bus),
            ));
        }
        if c.ports[..i].iter().any(|q| q.kind == p.kind) {
            out.push(Diagnostic::error(
                D::PortConflict,
                Subject::Port(i),
                format!("port {}: declared more than once", p.kind.keyword()),
            ));
        }
        if let Some(q) = c.ports[..i].iter().find(|q| q.bus == p.bus && q.end == p.end) {
            out.push(Diagnostic::error(
                D::PortConflict,
                Subject::Port(i),
                format!(
                    "port {}: {}.{} is already the {} port",
                    p.kind.keyword(),
                    p.bus,
                    p.end.keyword(),
                    q.kind.keyword()
                ),
            ));
        }
    }
    for kind in [PortKind::Input, PortKind::Through] {
        if c.port(kind).is_none() {
            out.push(Diagnostic::error(
                D::MissingPort,
                Subject::Circuit,
                format!("no {} port declared", kind.keyword()),
            ));
        }
    }
    // A bus carries light one way: an inlet at one end, outlets at the other.
    let pairs = [(PortKind::Input, PortKind::Through), (PortKind::Add, PortKind::Drop)];
    for (inlet, outlet) in pairs {
        if let (Some(a), Some(b)) = (c.port(inlet), c.port(outlet)) {
            if a.bus != b.bus || a.end == b.end {
                let idx = c.ports.iter().position(|p| p.kind == outlet).unwrap_or(0);
                out.push(Diagnostic::error(
                    D::PortConflict,
                    Subject::Port(idx),
                    format!(
                        "port {}: must sit at the opposite end of the {} bus",
                        outlet.keyword(),
                        inlet.keyword()
                    ),
                ));
            }
        }
    }
    for (i, p) in c.ports.iter().enumerate() {
        let clash = c.ports[..i]
            .iter()
            .find(|q| q.bus == p.bus && q.end != p.end && q.kind.is_inlet() == p.kind.is_inlet());
        if let Some(q) = clash {
            out.push(Diagnostic::error(
                D::PortConflict,
                Subject::Port(i),
                format!(
                    "port {}: bus {} already has the {} port at its other end",
                    p.kind.keyword(),
                    p.bus,
                    q.kind.keyword()
                ),
            ));
        }
    }

    // topology
    for (i, r) in c.rings.iter().enumerate() {
        if !c.couplers.iter().any(|k| k.touches(&r.name)) {
            out.push(Diagnostic::error(
                D::UnusedRing,
                Subject::Ring(i),
                format!("ring {}: not referenced by any coupler", r.name),
            ));
        }
    }
    if let Some(input) = c.port(PortKind::Input) {
        let elements: Vec<&str> = c
            .rings
            .iter()
            .map(|r| r.name.as_str())
            .chain(c.buses.iter().map(|b| b.name.as_str()))
            .collect();
        let mut reached = vec![false; elements.len()];
        if let Some(start) = elements.iter().position(|&e| e == input.bus) {
            reached[start] = true;
            let mut todo = vec![start];
            while let Some(v) = todo.pop() {
                for (ki, k) in c.couplers.iter().enumerate() {
                    if !couplers_ok[ki] {
                        continue;
                    }
                    if let Some(o) = k.other(elements[v]) {
                        if let Some(w) = elements.iter().position(|&e| e == o) {
                            if !reached[w] {
                                reached[w] = true;
                                todo.push(w);
                            }
                        }
                    }
                }
            }
            for (idx, e) in elements.iter().enumerate() {
                let unused_ring = idx < c.rings.len() && !c.couplers.iter().any(|k| k.touches(e));
                if !reached[idx] && !unused_ring {
                    let subject = if idx < c.rings.len() {
                        Subject::Ring(idx)
                    } else {
                        Subject::Bus(idx - c.rings.len())
                    };
                    out.push(Diagnostic::error(
                        D::Disconnected,
                        subject,
                        format!("{e}: not connected to the input bus {}", input.bus),
                    ));
                }
            }
        }
    }

    // Rings that touch no bus are side rings; coupling two of them is legal
    // but unusual.
    let on_bus = |ring: &str| {
        c.couplers
            .iter()
            .any(|k| k.other(ring).is_some_and(|o| c.element_kind(o) == Some(ElementKind::Bus)))
    };
    for (i, k) in c.couplers.iter().enumerate() {
        let both_rings = c.element_kind(&k.element_a) == Some(ElementKind::Ring)
            && c.element_kind(&k.element_b) == Some(ElementKind::Ring);
        if both_rings && couplers_ok[i] && !on_bus(&k.element_a) && !on_bus(&k.element_b) {
            out.push(Diagnostic::warning(
                D::SideRingCoupling,
                Subject::Coupler(i),
                format!(
                    "coupler {}: side rings {} and {} are coupled to each other",
                    k.name, k.element_a, k.element_b
                ),
            ));
        }
    }
    out
}

/// Canonical text form: globals, rings, buses, ports, couplers.
pub fn render(c: &RingCircuit) -> String {
    let g = &c.globals;
    let mut s = format!("globals neff={} ng={} loss_db_cm={}\n", g.n_eff, g.n_g, g.loss_db_cm);
    for r in &c.rings {
        s += &format!("ring {} radius_um={}\n", r.name, r.radius_um);
    }
    for b in &c.buses {
        s += &format!("bus {}\n", b.name);
    }
    for p in &c.ports {
        s += &format!("port {} on {}.{}\n", p.kind.keyword(), p.bus, p.end.keyword());
    }
    for k in &c.couplers {
        s += &format!("coupler {} {} {} kappa={}\n", k.name, k.element_a, k.element_b, k.kappa);
    }
    s
}
