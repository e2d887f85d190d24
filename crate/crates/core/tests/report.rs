// SPDX-License-Identifier: Apache-2.0

mod common;

use std::fs;

use common::*;
use serde_json::Value;
use stratlab::report::{emit_goldens, table1, table2, table4};
use stratlab::{classify, ClassifyOptions};

const FILES: [&str; 9] = [
    "table1.md", "table2.md", "table3.md", "table4.md", "figure1.dot", "thm1.json", "thm2.json", "thm3.json",
    "thm4.json",
];

#[test]
fn golden_file_set() {
    let dir = tempfile::tempdir().unwrap();
    let written = emit_goldens(dir.path()).unwrap();
    let mut names: Vec<String> =
        written.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
    names.sort();
    let mut want: Vec<String> = FILES.iter().map(|s| s.to_string()).collect();
    want.sort();
    assert_eq!(names, want);
    let mut listed: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    listed.sort();
    assert_eq!(listed, want);
}

#[test]
fn golden_files_are_byte_stable() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    emit_goldens(a.path()).unwrap();
    emit_goldens(b.path()).unwrap();
    for f in FILES {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{}", f);
    }
}

#[test]
fn golden_contents() {
    let dir = tempfile::tempdir().unwrap();
    emit_goldens(dir.path()).unwrap();
    let read = |f: &str| fs::read_to_string(dir.path().join(f)).unwrap();

    assert!(read("table3.md").contains("| [3,2] + [2,3] → (0,0,1,1,1) |"));
    let t2 = read("table2.md");
    let row = t2.lines().find(|l| l.starts_with("| 4 |") && l.ends_with("| 2 |")).unwrap();
    let cols: Vec<&str> = row.split('|').map(str::trim).collect();
    // (1,2,2,2) splits, so it sits in the decomposable column
    assert!(cols[2].contains("(1,2,2,2) = (0)^⊕2 ⊕ (1)^⊕2"), "{}", row);
    assert!(!cols[3].contains("(1,2,2,2)"), "{}", row);
    let halves = (module_sum(&[0], &[1]), module_sum(&[0], &[1]));
    assert_eq!(module_sum(&halves.0, &halves.1), vec![1, 2, 2, 2]);

    let thm3: Value = serde_json::from_str(&read("thm3.json")).unwrap();
    assert_eq!(thm3["schema"], "stratlab/1");
    let xi2 = thm3["columns"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| np(c["np"].as_str().unwrap()) == np("[1,0]+[2,1]+[1,2]+[0,1]"))
        .unwrap();
    assert_eq!(xi2["cells"]["1,1,1,2"], "unknown");

    let thm1: Value = serde_json::from_str(&read("thm1.json")).unwrap();
    assert_eq!(thm1["columns"].as_array().unwrap().len(), 1);
    assert_eq!(thm1["columns"][0]["cells"].as_object().unwrap().len(), 16);

    let dot = read("figure1.dot");
    assert_eq!(dot.matches(" -> ").count(), 22);
}

#[test]
fn tables() {
    let t1 = table1(5).unwrap();
    assert_eq!(t1.lines().count(), 2 + 5);
    assert!(t1.contains("| (0,1,2,2,3), (0,1,2,2,2) | 1/4 |"));
    let t2 = table2(3).unwrap();
    assert!(t2.contains("(1,1,1) = (0)^⊕2 ⊕ (1)"));
    let cls = classify(3, &ClassifyOptions::default()).unwrap();
    let t4 = table4(&cls, 3).unwrap();
    assert!(t4.contains("N([1,0] + [1,1] + [0,1]) = S_(1,1)"));
    assert_eq!(t4.lines().count(), 2 + 1 + 2 + 3);
}
