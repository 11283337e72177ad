use std::path::Path;

use sqr_core::netlist::{parse_with_diagnostics, Diagnostic, NetlistError, RingCircuit};

use crate::error::{CliError, Exit};

pub const ADD_DROP: &str = include_str!("../netlists/add_drop.net");
pub const THREE_RING: &str = include_str!("../netlists/three_ring.net");
pub const ALL_PASS: &str = include_str!("../netlists/all_pass.net");

/// Parsed circuit and its warnings, with diagnostics prefixed by `origin`.
pub fn parse_text(text: &str, origin: &str) -> Result<(RingCircuit, Vec<String>), CliError> {
    match parse_with_diagnostics(text) {
        Ok((c, warnings)) => Ok((c, warnings.iter().map(|w| located(origin, w)).collect())),
        Err(NetlistError::Syntax(e)) => Err(CliError::new(
            Exit::Parse,
            format!("{origin}:{}:{}: syntax error: {}", e.line, e.column, e.description()),
        )),
        Err(NetlistError::Semantic(d)) => Err(CliError::new(
            Exit::Semantic,
            d.iter().map(|x| located(origin, x)).collect::<Vec<_>>().join("\n"),
        )),
    }
}

fn located(origin: &str, d: &Diagnostic) -> String {
    let mut d = d.clone();
    let line = d.line.take();
    match line {
        Some(l) => format!("{origin}:{l}: {d}"),
        None => format!("{origin}: {d}"),
    }
}

pub fn load(path: &Path) -> Result<(RingCircuit, Vec<String>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read netlist {}: {e}", path.display())))?;
    parse_text(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_netlists_parse_cleanly() {
        for (text, rings) in [(ADD_DROP, 1), (THREE_RING, 3), (ALL_PASS, 1)] {
            let (c, w) = parse_text(text, "bundled").unwrap();
            assert_eq!(c.rings.len(), rings);
            assert!(w.is_empty());
        }
    }

    #[test]
    fn errors_carry_origin_and_class() {
        let e = parse_text("ring r radius=1\n", "x.net").unwrap_err();
        assert_eq!(e.exit, Exit::Parse);
        assert!(e.message.starts_with("x.net:1:8: syntax error: expected radius_um=<number>"), "{}", e.message);
        let e = parse_text(&THREE_RING.replace("kappa=0.05\ncoupler c_drop", "kappa=1.2\ncoupler c_drop"), "f.net")
            .unwrap_err();
        assert_eq!(e.exit, Exit::Semantic);
        assert!(e.message.contains("f.net:"));
        assert!(e.message.contains("c_s1"));
    }
}
