use fuzzdyn::gallery::shift::{shift_demo, ShiftParams};
use fuzzdyn::gallery::verify::{
    verify_example1, verify_example2, verify_example3, Example1Params, Example2Params, Example3Params,
};
use fuzzdyn::gallery::{Gallery, GalleryParams};
use serde_json::json;

fn choose2(n: u64) -> u64 {
    n * (n - 1) / 2
}

// Unordered pairs of non-empty subsets of {0..=w} × {0,1} whose first
// coordinates differ: a projection P is hit by 3^|P| subsets.
fn differing_projection_pairs(w: u32) -> u64 {
    let cols = w as u64 + 1;
    let all = 4u64.pow(cols as u32) - 1;
    let mut binom = 1u64;
    let mut same = 0;
    for k in 1..=cols {
        binom = binom * (cols - k + 1) / k;
        same += binom * choose2(3u64.pow(k as u32));
    }
    choose2(all) - same
}

// Every claim at the default horizons, all four fuzzy metrics included.
#[test]
fn example1_full_horizon() {
    let rep = verify_example1(&Example1Params::default()).unwrap();
    assert!(rep.pass(), "failing: {:?}\n{}", rep.failing(), rep.to_json());
    let base = &rep.get("base-profile").unwrap().evidence;
    assert_eq!(
        base["ratios_below_half"],
        json!({"5039": "4419/5039", "40320": "221/2016", "362879": "326979/362879"})
    );
    let sets = &rep.get("set-traces-constant").unwrap().evidence;
    assert_eq!(sets["exhaustive_pairs"], json!(differing_projection_pairs(3)));
    let fam = &rep.get("fuzzy-family-d1").unwrap().evidence["d1_pairs"];
    for m in ["sup", "skorokhod", "sendograph", "endograph"] {
        assert_eq!(fam[m], json!("6/6"), "{m}");
    }
}

#[test]
fn example2_defaults() {
    let rep = verify_example2(&Example2Params::default()).unwrap();
    assert!(rep.pass(), "failing: {:?}", rep.failing());
    let ev = &rep.get("base-mean-oscillation").unwrap().evidence;
    let at = |k: &str| ev[k].as_f64().unwrap();
    assert!((at("mean_at_65536") - 1.008099).abs() < 1e-6);
    assert!((at("mean_at_65535") - 0.008099).abs() < 1e-6);
    assert!((at("mean_at_512") - 1.0366).abs() < 1e-4);
}

#[test]
fn example3_defaults() {
    let rep = verify_example3(&Example3Params::default()).unwrap();
    assert!(rep.pass(), "failing: {:?}", rep.failing());
    let ev = &rep.get("base-d3").unwrap().evidence;
    assert!((ev["phi_lower"].as_f64().unwrap() - 0.3333).abs() < 1e-3);
    assert!((ev["phi_upper"].as_f64().unwrap() - 0.6673).abs() < 1e-3);
    assert_eq!(rep.get("endograph-isometry").unwrap().evidence["defects"], json!([]));
}

#[test]
fn shift_demo_defaults_and_other_weights() {
    assert!(shift_demo(&ShiftParams::default()).unwrap().pass());
    for w in ["3/2", "5"] {
        let p = ShiftParams { weight: w.parse().unwrap(), ..Default::default() };
        let rep = shift_demo(&p).unwrap();
        assert!(rep.pass(), "weight {w}: {:?}", rep.failing());
    }
    let p = ShiftParams { weight: "1".parse().unwrap(), ..Default::default() };
    assert!(shift_demo(&p).is_err());
}

#[test]
fn gallery_registry_runs_entries_by_name() {
    let g = Gallery::standard();
    let p = GalleryParams { seed: 3, ..Default::default() };
    assert_eq!(g.names(), ["example1", "example2", "example3", "shift"]);
    let rep = g.find("example3").unwrap().run(&p).unwrap();
    assert_eq!(rep.seed, Some(3));
    assert!(rep.pass());
    assert!(g.find("example9").is_none());
}

#[test]
fn same_seed_same_report() {
    let p = ShiftParams { seed: 41, ..Default::default() };
    assert_eq!(shift_demo(&p).unwrap().to_json(), shift_demo(&p).unwrap().to_json());
    let q = Example3Params { seed: 41, trials: 30, ..Default::default() };
    assert_eq!(verify_example3(&q).unwrap().to_json(), verify_example3(&q).unwrap().to_json());
}
