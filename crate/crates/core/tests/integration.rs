use std::process::Command;

use serde_json::Value;
use sphere_comb::comb::{det_closed_form, det_sign, family_det, robust_construct, Witness};
use sphere_comb::search::relations::{find_vanishing, project, vanishes_on, KernelMode, GAUGE_COORDS};
use sphere_comb::search::sample::sample_component;
use sphere_comb::{Ring, VarSet};

#[test]
fn family_determinant_matches_closed_form_at_sampled_witnesses() {
    let samples = sample_component(20, Ring::gaussian(), 11).unwrap();
    for s in &samples {
        let (m, det, swapped) = robust_construct(&s.witness).unwrap();
        let used = if swapped { s.witness.swap_ab() } else { s.witness.clone() };
        assert_eq!(m.det_constant().unwrap(), det);
        assert_eq!(det, family_det(&used));
        assert_eq!(det, det_closed_form(&used).mul(&used.ring().int(det_sign())).unwrap());
    }
}

#[test]
fn family_determinant_over_small_prime_fields() {
    for p in [3u64, 7, 11, 19] {
        let r = Ring::prime_field(p).unwrap();
        let mut seen = 0;
        for a in 0..p as i64 {
            for d in 0..p as i64 {
                let Ok(w) = Witness::new(r.int(a), r.int(1), r.int(1), r.int(d)) else { continue };
                let Ok((m, det, _)) = robust_construct(&w) else { continue };
                assert!(det.is_unit());
                assert_eq!(m.det_constant().unwrap(), det);
                seen += 1;
            }
        }
        assert!(seen > 0, "no witness of the form (a,1,1,d) over F_{p}");
    }
}

#[test]
fn relations_vanish_on_held_out_samples() {
    let refs: Vec<&str> = GAUGE_COORDS.to_vec();
    let vars = VarSet::new(&refs).unwrap();
    let pts: Vec<_> = sample_component(260, Ring::gaussian(), 3).unwrap().into_iter().map(|s| s.point).collect();
    let proj = project(&pts, &refs).unwrap();
    let (train, held) = proj.split_at(160);
    let b = find_vanishing(&vars, train, 2, KernelMode::Modular, 3).unwrap();
    assert_eq!(b.mode, KernelMode::Modular);
    assert!(b.prime_dims.iter().all(|&(_, d)| d == b.dimension));
    assert!(b.dimension > 0);
    assert!(vanishes_on(&b, held).unwrap());
}

#[test]
fn first_relation_with_a18_is_cubic_and_linear_in_a18() {
    let names = ["a18", "a17", "a21", "a22"];
    let vars = VarSet::new(&names).unwrap();
    let pts: Vec<_> = sample_component(200, Ring::gaussian(), 0).unwrap().into_iter().map(|s| s.point).collect();
    let proj = project(&pts, &names).unwrap();
    for d in 1..=2 {
        assert_eq!(find_vanishing(&vars, &proj, d, KernelMode::Modular, 0).unwrap().dimension, 0, "degree {d}");
    }
    let b = find_vanishing(&vars, &proj, 3, KernelMode::Modular, 0).unwrap();
    assert!(b.dimension > 0);
    for p in &b.basis {
        assert_eq!(p.degree_in_name("a18").unwrap(), 1, "{p}");
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sphere-comb")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out) = cli(&all);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn cli_exit_codes() {
    let (code, v) = cli_json(&["verify", "theorem13"]);
    assert_eq!((code, v["det"].as_str()), (0, Some("5")));
    assert_eq!(cli(&["construct", "--ring", "Q(sqrt:1)", "--witness", "1,0,0,0"]).0, 2);
    assert_eq!(cli(&["construct", "--witness", "1,1,1,1"]).0, 2);
    assert_eq!(cli(&["relations", "--degree"]).0, 2);
    assert_eq!(cli(&["lift", "--k", "65"]).0, 2);
    let (code, v) = cli_json(&["complete", "--ring", "Q", "--row", "X,Y,Z"]);
    assert_eq!((code, v["status"].as_str()), (1, Some("inconclusive")));
}

#[test]
fn cli_output_file_feeds_lift() {
    let dir = std::env::temp_dir().join(format!("sphere-comb-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f2 = dir.join("f2.json");
    let (code, _) = cli(&["enumerate-f2", "--workers", "2", "--output", f2.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&f2).unwrap()).unwrap();
    assert_eq!(doc["f2_count"], 80);
    let roots = dir.join("roots.json");
    std::fs::write(&roots, doc["solutions"].to_string()).unwrap();
    let (code, v) = cli_json(&["lift", "--input", roots.to_str().unwrap(), "--k", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["mod4_survivors"], 4);
    assert_eq!(v["summary"]["reached"], "2^20");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cli_json_is_deterministic() {
    let a = cli(&["tangent", "--row", "Y+Z,-X,-X", "--samples", "50", "--seed", "9", "--json"]);
    let b = cli(&["tangent", "--row", "Y+Z,-X,-X", "--samples", "50", "--seed", "9", "--json"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}
