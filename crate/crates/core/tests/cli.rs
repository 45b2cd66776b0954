mod common;

use std::process::{Command, Output};

use common::data_dir;

fn ratsos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratsos")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    data_dir().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn gram_prints_factors() {
    let o = ratsos(&["gram", &data("cyclic_cubic.sos")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "G = [[3, 0, 6], [0, 6, -3], [6, -3, 18]]\n\
         D = (3, 6, 9/2)\n\
         U = [[1, 0, 2], [0, 1, -1/2], [0, 0, 1]]\n\
         pivot signs: + + +\n"
    );
    let o = ratsos(&["gram", &data("degree1.sos")]);
    assert!(stdout(&o).starts_with("G = [[1]]\n"));
}

#[test]
fn gram_failures() {
    let o = ratsos(&["gram", &data("cubert2.sos")]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "G = [[3, 0, 0], [0, 0, 6], [0, 6, 0]]\n");
    assert!(stderr(&o).contains("pivot 2"));
    assert_eq!(ratsos(&["gram", &data("double_root.sos")]).status.code(), Some(3));
}

#[test]
fn descend_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (flags, summary) in [(&[][..], "3 terms (bound 27)"), (&["--expand"][..], "8 squares (bound 27)")] {
        let path = dir.path().join("out.cert");
        let cert = path.to_str().unwrap();
        let problem = data("cyclic_cubic.sos");
        let mut args = vec!["descend", problem.as_str(), "--output", cert];
        args.extend_from_slice(flags);
        let o = ratsos(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stderr(&o).trim(), summary);
        assert!(stdout(&o).is_empty());

        let o = ratsos(&["verify", &data("cyclic_cubic.sos"), cert]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "accept\n");
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = ratsos(&["descend", &data("cyclic_cubic.sos")]);
    let text = stdout(&o);
    let tampered = text.replace("term: 9/2 ;", "term: 5/2 ;");
    assert_ne!(text, tampered);
    let path = dir.path().join("bad.cert");
    std::fs::write(&path, tampered).unwrap();
    let o = ratsos(&["verify", &data("cyclic_cubic.sos"), path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("reject: "), "{}", stdout(&o));
    assert!(stdout(&o).contains("x^2*y^4"), "{}", stdout(&o));
}

#[test]
fn certificate_for_other_problem_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let other = dir.path().join("other.sos");
    std::fs::write(&other, "minpoly: theta^2 - 2\nvars: x y\nsquare: x + theta*y\nsquare: x - theta*y\n").unwrap();
    let cert = dir.path().join("other.cert");
    let o = ratsos(&["descend", other.to_str().unwrap(), "-o", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = ratsos(&["verify", &data("cyclic_cubic.sos"), cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_across_jobs() {
    let one = ratsos(&["descend", &data("cyclic_cubic.sos"), "--expand", "--no-compress"]);
    let four = ratsos(&["descend", &data("cyclic_cubic.sos"), "--expand", "--no-compress", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(stderr(&one).trim(), "18 squares (bound 27)");
}

#[test]
fn precondition_and_parse_exit_codes() {
    let o = ratsos(&["descend", &data("cubert2.sos")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());

    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("minpoly: theta^2 - 2\nvars: x\nsquare: x + theta\n", 3, "not rational"),
        ("minpoly: theta^2 - 2\nvars: x\nsquare: x\ntarget: x^2 + 1\n", 3, "target"),
        ("minpoly: theta^2 - 2\nvars: x\nsquare: x + * 1\n", 2, "line 3, column 13"),
        ("minpoly: theta^2 - 2\nvars: x theta\nsquare: x\n", 2, "reserved"),
    ];
    for (text, code, needle) in cases {
        let path = dir.path().join("p.sos");
        std::fs::write(&path, text).unwrap();
        let o = ratsos(&["descend", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(code), "{text}");
        assert!(stderr(&o).contains(needle), "{}", stderr(&o));
    }
    assert_eq!(ratsos(&["descend", "/no/such/file.sos"]).status.code(), Some(2));
    assert_eq!(ratsos(&["descend"]).status.code(), Some(4));
    assert_eq!(ratsos(&["verify", &data("cyclic_cubic.sos")]).status.code(), Some(4));
}

#[test]
fn foursquare_output() {
    for (value, expected) in [
        ("7", "7 = 2^2 + 1^2 + 1^2 + 1^2\n"),
        ("1", "1 = 1^2\n"),
        ("9/2", "9/2 = (3/2)^2 + (3/2)^2\n"),
        ("6/4", "3/2 = 1^2 + (1/2)^2 + (1/2)^2\n"),
    ] {
        let o = ratsos(&["foursquare", value]);
        assert_eq!(stdout(&o), expected, "{value}");
    }
    assert_eq!(ratsos(&["foursquare", "-2"]).status.code(), Some(3));
}
