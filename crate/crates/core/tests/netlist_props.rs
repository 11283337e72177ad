use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sqr_core::netlist::{
    parse, render, validate, BusEnd, BusSpec, CouplerSpec, OpticalGlobals, PortKind, PortSpec, RingCircuit, RingSpec,
};

/// Valid circuit: ring 0 sits on the input bus (and the drop bus if any),
/// further rings hang off earlier rings as a tree.
fn random_circuit(rng: &mut ChaCha8Rng) -> RingCircuit {
    let globals = OpticalGlobals {
        n_eff: rng.gen_range(1.0..4.0),
        n_g: rng.gen_range(1.0..5.0),
        loss_db_cm: rng.gen_range(0.01..20.0),
    };
    let n_rings = rng.gen_range(1..=4);
    let rings: Vec<RingSpec> = (0..n_rings)
        .map(|i| RingSpec {
            name: format!("r{i}"),
            radius_um: rng.gen_range(0.5..100.0),
        })
        .collect();
    let two_buses = rng.gen_bool(0.6);
    let mut buses = vec![BusSpec { name: "top".into() }];
    let in_end = if rng.gen_bool(0.5) { BusEnd::Left } else { BusEnd::Right };
    let mut ports = vec![
        PortSpec {
            kind: PortKind::Input,
            bus: "top".into(),
            end: in_end,
        },
        PortSpec {
            kind: PortKind::Through,
            bus: "top".into(),
            end: in_end.opposite(),
        },
    ];
    let mut couplers = vec![CouplerSpec {
        name: "c_top".into(),
        element_a: "top".into(),
        element_b: "r0".into(),
        kappa: rng.gen_range(0.001..=1.0),
    }];
    if two_buses {
        buses.push(BusSpec { name: "bottom".into() });
        let drop_end = if rng.gen_bool(0.5) { BusEnd::Left } else { BusEnd::Right };
        ports.push(PortSpec {
            kind: PortKind::Drop,
            bus: "bottom".into(),
            end: drop_end,
        });
        if rng.gen_bool(0.5) {
            ports.push(PortSpec {
                kind: PortKind::Add,
                bus: "bottom".into(),
                end: drop_end.opposite(),
            });
        }
        couplers.push(CouplerSpec {
            name: "c_bottom".into(),
            element_a: "r0".into(),
            element_b: "bottom".into(),
            kappa: rng.gen_range(0.001..=1.0),
        });
    }
    for i in 1..n_rings {
        let parent = rng.gen_range(0..i);
        couplers.push(CouplerSpec {
            name: format!("c_r{i}"),
            element_a: format!("r{parent}"),
            element_b: format!("r{i}"),
            kappa: rng.gen_range(0.001..=1.0),
        });
    }
    couplers.shuffle(rng);
    ports.shuffle(rng);
    RingCircuit {
        globals,
        rings,
        buses,
        ports,
        couplers,
    }
}

fn lines_of(text: &str) -> Vec<String> {
    text.lines().map(str::to_string).collect()
}

fn index_where(lines: &[String], prefix: &str, rng: &mut ChaCha8Rng) -> usize {
    let idx: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].starts_with(prefix)).collect();
    *idx.choose(rng).expect("line with prefix")
}

fn replace_field(line: &str, key: &str, value: &str) -> String {
    line.split(' ')
        .map(|t| {
            if t.starts_with(key) {
                format!("{key}={value}")
            } else {
                t.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Applies one invariant-breaking edit; returns its label.
fn mutate(lines: &mut Vec<String>, c: &RingCircuit, rng: &mut ChaCha8Rng) -> &'static str {
    match rng.gen_range(0..13) {
        0 => {
            let i = index_where(lines, "coupler", rng);
            let bad = *["1.0000001", "-0.1", "2", "1e3"].choose(rng).unwrap();
            lines[i] = replace_field(&lines[i], "kappa", bad);
            "kappa out of range"
        }
        1 => {
            let i = index_where(lines, "ring", rng);
            let bad = *["0", "-5", "1e400"].choose(rng).unwrap();
            lines[i] = replace_field(&lines[i], "radius_um", bad);
            "bad radius"
        }
        2 => {
            let i = index_where(lines, "coupler", rng);
            let mut t: Vec<String> = lines[i].split(' ').map(str::to_string).collect();
            let slot = rng.gen_range(2..=3);
            t[slot] = "ghost".into();
            lines[i] = t.join(" ");
            "unknown element"
        }
        3 => {
            // every coupler is a bridge of the tree
            let i = index_where(lines, "coupler", rng);
            lines.remove(i);
            "removed coupler"
        }
        4 => {
            let i = index_where(lines, "port input", rng);
            lines.remove(i);
            "missing input"
        }
        5 => {
            let i = index_where(lines, "ring", rng);
            let dup = lines[i].clone();
            lines.insert(i + 1, dup);
            "duplicate ring"
        }
        6 => {
            let i = index_where(lines, "coupler", rng);
            let moved = lines.remove(i);
            let to = rng.gen_range(0..3);
            lines.insert(to, moved);
            "out of order"
        }
        7 => {
            let i = index_where(lines, "coupler", rng);
            lines[i] = lines[i].replace("kappa=", "kapa=");
            "misspelled key"
        }
        8 => {
            let key = *["neff", "ng", "loss_db_cm"].choose(rng).unwrap();
            lines[0] = replace_field(&lines[0], key, "-1");
            "bad globals"
        }
        9 => {
            let input = c.port(PortKind::Input).unwrap();
            let pos = lines.iter().position(|l| l.starts_with("port")).unwrap();
            lines.insert(pos, format!("port through on top.{}", input.end.keyword()));
            "port conflict"
        }
        10 => {
            let i = rng.gen_range(0..lines.len());
            lines[i].push_str(" trailing");
            "trailing token"
        }
        11 => {
            let i = index_where(lines, "coupler", rng);
            let mut t: Vec<String> = lines[i].split(' ').map(str::to_string).collect();
            t[3] = t[2].clone();
            lines[i] = t.join(" ");
            "self coupling"
        }
        _ => {
            let i = index_where(lines, "port", rng);
            lines[i] = lines[i].replace(".left", ".middle").replace(".right", ".middle");
            "bad bus end"
        }
    }
}

#[test]
fn random_circuits_are_valid() {
    for seed in 0..500u64 {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(seed));
        // side rings chained to side rings only raise warnings
        let errors: Vec<_> = validate(&c).into_iter().filter(|d| d.is_error()).collect();
        assert_eq!(errors, vec![], "seed {seed}");
    }
}

#[test]
fn mutation_fuzz_rejects_every_broken_netlist() {
    for seed in 0..2000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&mut rng);
        let mut lines = lines_of(&render(&c));
        let label = mutate(&mut lines, &c, &mut rng);
        let text = lines.join("\n");
        assert!(parse(&text).is_err(), "seed {seed}: {label} accepted:\n{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = render(&c);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(render(&back), text);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored(seed in any::<u64>()) {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(seed));
        let decorated: String = render(&c)
            .lines()
            .map(|l| format!("\n  {}\t# note\n# full-line comment", l.replace(' ', "   ")))
            .collect::<Vec<_>>()
            .join("\n");
        prop_assert_eq!(parse(&decorated).unwrap(), c);
    }

    #[test]
    fn parser_never_panics(text in "[a-z_=. 0-9#\n-]{0,200}") {
        let _ = parse(&text);
    }
}
