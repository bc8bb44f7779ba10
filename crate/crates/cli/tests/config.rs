use covar_medium::LorentzianProfile;
use covar_medium_cli::config::{Linspace, MediumSpec, OutputSpec, Projector, SweepSpec};
use covar_medium_cli::{parse_config, RunConfig};
use proptest::prelude::*;

fn profile() -> impl Strategy<Value = LorentzianProfile> {
    (0.0f64..1.0, 0.1f64..3.0, 0.01f64..0.5).prop_map(|(c, w, g)| LorentzianProfile::new(c, w, g).unwrap())
}

fn velocity() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-0.5f64..0.5)
}

fn medium() -> impl Strategy<Value = MediumSpec> {
    prop_oneof![
        Just(MediumSpec::Vacuum),
        profile().prop_map(MediumSpec::IsotropicLorentzian),
        (profile(), profile(), velocity())
            .prop_map(|(electric, magnetic, velocity)| MediumSpec::EmSplit { electric, magnetic, velocity }),
        (prop::collection::vec(0.01f64..0.5, 2..6), prop::collection::vec(0.0f64..2.0, 6), 0usize..3).prop_map(
            |(steps, g, p)| {
                let mut w = 0.5;
                let omega: Vec<f64> = steps.iter().map(|s| { w += s; w }).collect();
                let g = g[..omega.len()].to_vec();
                let projector = [Projector::Identity, Projector::Electric, Projector::Magnetic][p];
                MediumSpec::Tabulated { projector, omega, g }
            }
        ),
    ]
}

fn linspace(lo: f64) -> impl Strategy<Value = Linspace> {
    (lo..2.0, 0.0f64..2.0, 1usize..20).prop_map(|(start, span, count)| {
        let stop = if count == 1 { start } else { start + span };
        Linspace { start, stop, count }
    })
}

fn sweep() -> impl Strategy<Value = SweepSpec> {
    (
        linspace(0.01),
        0.0f64..3.0,
        prop::collection::vec(prop::array::uniform3(0.1f64..1.0), 1..4),
        (0.5f64..1.0, 1.5f64..3.0, -0.5f64..-0.01, 0.01f64..0.5),
        prop::collection::vec(0.0f64..0.9, 1..5),
        (1.0f64..100.0, prop::collection::vec(0.0f64..3.0, 1..3), linspace(0.0), linspace(0.0)),
    )
        .prop_map(|(q4, k, directions, w, speeds, (k_max, green_omega, times, radii))| SweepSpec {
            q4,
            k,
            directions,
            window: [w.0, w.1, w.2, w.3],
            speeds,
            k_max,
            green_omega,
            times,
            radii,
        })
}

fn config() -> impl Strategy<Value = RunConfig> {
    (medium(), velocity(), sweep(), "[a-z][a-z0-9_/]{0,12}", 1e-8f64..1.0).prop_map(
        |(medium, boost, sweep, dir, tolerance)| RunConfig { medium, boost, sweep, output: OutputSpec { dir, tolerance } },
    )
}

proptest! {
    #[test]
    fn serialize_parse_round_trip(cfg in config()) {
        let text = cfg.to_string();
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_string(), text);
    }
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "# run\n\n[medium]   # section\nmodel = vacuum # inline\n\n[output]\ndir = results\n";
    let cfg = parse_config(text).unwrap();
    assert_eq!(cfg.output.dir, "results");
}

#[test]
fn model_specific_keys_are_checked() {
    let e = parse_config("[medium]\nmodel = em_split\nc0 = 0.1\nomega0 = 1\ngamma = 0.1").unwrap_err();
    assert!(e.message.contains("electric_c0"));
    let e = parse_config("[medium]\nmodel = tabulated\nomega = 1 2\ng = 1").unwrap_err();
    assert_eq!(e.line, Some(4));
    let e = parse_config("[medium]\nmodel = tabulated\nomega = 2 1\ng = 1 1").unwrap_err();
    assert_eq!(e.line, Some(3));
    let e = parse_config("[medium]\nmodel = lorentz").unwrap_err();
    assert!(e.to_string().starts_with("line 2: model"));
    let e = parse_config("[medium]\nmodel = vacuum\n[sweep]\nwindow = 2 1 -1 1").unwrap_err();
    assert!(e.message.contains("sweep.window"));
    let e = parse_config("[medium]\nmodel = vacuum\n[extra]").unwrap_err();
    assert_eq!(e.line, Some(3));
}
