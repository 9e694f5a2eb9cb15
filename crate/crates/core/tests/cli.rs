use std::path::Path;
use std::process::{Command, Output};

use christol::automaton::Dfao;
use christol::gf::make_field;
use serde_json::Value;

fn christol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_christol")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

#[test]
fn sum_of_powers_of_two_report() {
    let out =
        christol(&["compile", "--field", "p=2,e=1", "--poly", "y^2+y+x", "--root-index", "0", "--verify", "4096"]);
    let r = report(&out);
    assert_eq!((r["d"].as_u64(), r["h"].as_u64(), r["r"].as_u64()), (Some(2), Some(1), Some(0)));
    assert_eq!(r["smooth"], true);
    assert_eq!(r["comp_reverse"], 3);
    assert_eq!(r["comp_forward"], Value::Null);
    assert_eq!(r["bounds"]["smooth_bound"], 17);
    assert_eq!(r["verification"]["ok"], true);
    // top-level keys in the fixed order, read from the raw text
    let raw = text(&out.stdout);
    let keys: Vec<&str> = raw.lines().filter_map(|l| l.strip_prefix("  \"")?.split('"').next()).collect();
    assert_eq!(
        keys,
        [
            "p",
            "e",
            "q",
            "d",
            "h",
            "r",
            "s",
            "g_P",
            "smooth",
            "states_raw",
            "comp_reverse",
            "comp_forward",
            "span_dim",
            "bounds",
            "verification"
        ]
    );
}

#[test]
fn shifted_root_report() {
    let r = report(&christol(&["compile", "--field", "p=2,e=1", "--poly", "y^2+x*y+x^3", "--root-index", "0"]));
    assert_eq!((r["r"].as_u64(), r["s"].as_u64(), r["comp_reverse"].as_u64()), (Some(2), Some(3), Some(5)));
    assert_eq!(r["bounds"]["general_bound"], 514);
}

#[test]
fn exit_codes() {
    let inseparable = christol(&["compile", "--field", "p=2,e=1", "--poly", "y^2+x", "--root-index", "0"]);
    assert_eq!(inseparable.status.code(), Some(3));
    assert!(text(&inseparable.stderr).contains("separable"));

    let ambiguous = christol(&["compile", "--field", "p=2,e=1", "--poly", "y^2+y+x"]);
    assert_eq!(ambiguous.status.code(), Some(4));
    assert!(text(&ambiguous.stderr).contains("0:(0)\n1:(1)"));

    let bad_poly = christol(&["compile", "--field", "p=2,e=1", "--poly", "y^^2"]);
    assert_eq!(bad_poly.status.code(), Some(2));
    let bad_field = christol(&["compile", "--field", "p=4,e=1", "--poly", "y"]);
    assert_eq!(bad_field.status.code(), Some(2));

    let capped =
        christol(&["compile", "--field", "p=2,e=1", "--poly", "y^2+x*y+x^3", "--root-index", "0", "--state-cap", "2"]);
    assert_eq!(capped.status.code(), Some(5));
}

#[test]
fn list_roots() {
    let out = christol(&["list-roots", "--field", "p=3,e=1", "--poly", "y^2-(1+x)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(text(&out.stdout), "r=0\n0:(1)\n1:(2)\n");
    let out = christol(&["list-roots", "--field", "p=2,e=1", "--poly", "y^2+y+x"]);
    assert_eq!(text(&out.stdout), "r=0\n0:(0)\n1:(1)\n");
    let out = christol(&["list-roots", "--field", "p=2,e=1", "--poly", "y^2+x*y+x"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!text(&out.stdout).contains(':'));
}

#[test]
fn job_file_and_emitted_automata() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("tm.dot");
    let json = dir.path().join("tm.json");
    let job = dir.path().join("job.json");
    let spec = serde_json::json!({
        "field": {"p": 2, "e": 1},
        "poly": "(1+x)^3*y^2+(1+x)^2*y+x",
        "root_index": 0,
        "forward": true,
        "verify": 1024,
        "emit_dot": dot,
        "emit_json": json,
    });
    std::fs::write(&job, spec.to_string()).unwrap();
    let r = report(&christol(&["compile", "--job", job.to_str().unwrap()]));
    assert_eq!((r["comp_reverse"].as_u64(), r["comp_forward"].as_u64()), (Some(2), Some(2)));
    assert_eq!(r["verification"]["horizon"], 1024);

    let field = make_field(2, 1, None).unwrap();
    let forward_json = dir.path().join("tm.forward.json");
    for path in [&json, &forward_json] {
        let a = Dfao::from_json(&field, &std::fs::read_to_string(path).unwrap()).unwrap();
        for n in 0..256u64 {
            assert_eq!(a.eval(n).index(), n.count_ones() % 2, "{}", path.display());
        }
    }
    for path in [dot.as_path(), Path::new(&dir.path().join("tm.forward.dot"))] {
        let s = std::fs::read_to_string(path).unwrap();
        assert!(s.starts_with("digraph dfao {"), "{s}");
    }

    // explicit flags override the job file
    let r = report(&christol(&["compile", "--job", job.to_str().unwrap(), "--verify", "0"]));
    assert_eq!(r["verification"], Value::Null);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for k in 0..2 {
        let dot = dir.path().join(format!("a{k}.dot"));
        let out = christol(&[
            "compile",
            "--field",
            "p=2,e=2",
            "--poly",
            "g*y^2+(1+x)*y+x^2*g+x",
            "--root-index",
            "0",
            "--forward",
            "--emit-dot",
            dot.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push((
            out.stdout,
            std::fs::read(&dot).unwrap(),
            std::fs::read(dir.path().join(format!("a{k}.forward.dot"))).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn explicit_prefix_and_extension_modulus() {
    let r = report(&christol(&["compile", "--field", "p=2,e=1", "--poly", "y^2+x*y+x^3", "--root-prefix", "0,0,1"]));
    assert_eq!(r["comp_reverse"], 5);
    let r =
        report(&christol(&["compile", "--field", "p=2 e=2 modulus=1,1,1", "--poly", "y^2+y+g*x", "--root-index", "1"]));
    assert_eq!(r["q"], 4);
    let spurious = christol(&["compile", "--field", "p=2,e=1", "--poly", "y^2+x*y+x^3", "--root-prefix", "0,1,0"]);
    assert_eq!(spurious.status.code(), Some(4));
}
