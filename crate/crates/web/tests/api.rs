use flowimprove_web::{locality_demo_json, segment_image_json, sweep_profile_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("call succeeds")).unwrap()
}

fn dumbbell_text(a: usize, b: usize) -> String {
    let mut text = String::new();
    for (lo, hi) in [(0, a), (a, a + b)] {
        for u in lo..hi {
            for v in u + 1..hi {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    text.push_str(&format!("{} {}\n", a - 1, a));
    text
}

#[test]
fn segmentation_recovers_block() {
    let (rows, cols) = (20usize, 20usize);
    let inside = |r: usize, c: usize| (6..14).contains(&r) && (6..14).contains(&c);
    let pixels: Vec<f64> = (0..rows * cols).map(|i| if inside(i / cols, i % cols) { 0.9 } else { 0.1 }).collect();
    let seed: Vec<u32> = (0..rows * cols).filter(|&i| (4..16).contains(&(i / cols)) && (4..16).contains(&(i % cols))).map(|i| i as u32).collect();
    let v = parse(segment_image_json(rows, cols, &pixels, &seed, 2.0, 2.0, 0.05, "mqi", 0.0));
    let set: Vec<usize> = v["result"]["set"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect();
    let block: Vec<usize> = (0..rows * cols).filter(|&i| inside(i / cols, i % cols)).collect();
    assert_eq!(set, block);
    assert!(v["result"]["conductance"].as_f64().unwrap() < v["seed_conductance"].as_f64().unwrap());
}

#[test]
fn segmentation_rejects_bad_input() {
    assert!(segment_image_json(2, 2, &[0.0; 3], &[0], 1.0, 1.0, 1.0, "mqi", 0.0).is_err());
    assert!(segment_image_json(2, 2, &[0.0; 4], &[0], 1.0, 1.0, 1.0, "nope", 0.0).is_err());
    assert!(segment_image_json(2, 2, &[0.0; 4], &[7], 1.0, 1.0, 1.0, "mqi", 0.0).is_err());
}

#[test]
fn locality_report_shows_local_work() {
    let v = parse(locality_demo_json(200, 10, 3, 1.0));
    let runs = v["runs"].as_array().unwrap();
    let names: Vec<&str> = runs.iter().map(|r| r["algorithm"].as_str().unwrap()).collect();
    assert_eq!(names, ["mqi", "lfi", "fi"]);
    let arcs = |i: usize| runs[i]["arcs_touched"].as_u64().unwrap();
    assert!(arcs(1) * 20 < arcs(2), "lfi {} vs fi {}", arcs(1), arcs(2));
    assert!(locality_demo_json(2, 10, 0, 1.0).is_err());
    assert!(locality_demo_json(10, 10, 10, 1.0).is_err());
    assert!(locality_demo_json(5000, 10, 0, 1.0).is_err());
}

#[test]
fn sweep_profile_finds_the_dumbbell_cut() {
    let v = parse(sweep_profile_json(&dumbbell_text(5, 7), "0", 0.15, 1e-6));
    assert_eq!(v["sweep_set"], serde_json::json!([0, 1, 2, 3, 4]));
    let best = v["sweep_conductance"].as_f64().unwrap();
    for p in v["profile"].as_array().unwrap() {
        assert!(best <= p["conductance"].as_f64().unwrap());
    }
    assert_eq!(v["refined"]["set"], serde_json::json!([0, 1, 2, 3, 4]));
    assert!(sweep_profile_json("0 1\n", "5", 0.15, 1e-6).is_err());
}
