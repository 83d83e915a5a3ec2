use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cardred_core::generators::verify_torus;
use cardred_core::semantics::Interpretation;
use cardred_core::syntax::{parse_tbox, TBox};
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }
}

fn cardred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cardred")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn contradiction_exits_with_one() {
    let ws = Workspace::new();
    let f = ws.file("t.tbox", "card atleast 1 : A\ncard atmost 0 : A\n");
    let o = cardred(&["check", path(&f), "--bound", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no model up to 3\n");
}

#[test]
fn nominal_translation_of_at_least_two() {
    let ws = Workspace::new();
    let f = ws.file("t.tbox", "card atleast 2 : A\n");
    let o = cardred(&["translate", path(&f), "--to", "nominals"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# 1: card atleast 2 : A -> [_phi_1_1, _phi_1_2]\n"), "{text}");
    let TBox::Incl(t) = parse_tbox(&text).unwrap() else { panic!("expected GCIs") };
    assert_eq!(t.len(), 3);
    assert!(text.contains("gci {_phi_1_1} => not {_phi_1_2}\n"));
}

#[test]
fn generated_torus_has_a_torus_model() {
    let ws = Workspace::new();
    let g = cardred(&["generate", "torus-card", "--n", "1"]);
    assert_eq!(g.status.code(), Some(0));
    let f = ws.file("torus.tbox", &stdout(&g));
    let o = cardred(&["check", path(&f), "--bound", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let model: Interpretation = stdout(&o).parse().unwrap();
    assert!(verify_torus(&model, 1).unwrap().verdict);
    // Same gadget through the generic subcommand.
    let h = cardred(&["generate", "torus", "--n", "1", "--style", "card"]);
    assert_eq!(stdout(&g), stdout(&h));
}

#[test]
fn outputs_reparse() {
    let ws = Workspace::new();
    let gci = stdout(&cardred(&["generate", "torus-gci", "--n", "1"]));
    assert!(matches!(parse_tbox(&gci).unwrap(), TBox::Incl(_)));
    let f = ws.file("torus.tbox", &gci);
    for target in ["cardinalities", "internalise"] {
        let o = cardred(&["translate", path(&f), "--to", target]);
        assert_eq!(o.status.code(), Some(0), "{target}");
        assert!(matches!(parse_tbox(&stdout(&o)).unwrap(), TBox::Card(_)), "{target}");
    }
    let p = ws.file("messy.tbox", "# comment\ncard  atleast 1 :  (A | B)\n\ncard atmost 0 : forall R . A\n");
    let canonical = stdout(&cardred(&["parse", path(&p)]));
    let again = ws.file("canonical.tbox", &canonical);
    assert_eq!(stdout(&cardred(&["parse", path(&again)])), canonical);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let ws = Workspace::new();
    let r = stdout(&cardred(&["generate", "random", "--seed", "11", "--style", "gci", "--nominals", "1"]));
    assert_eq!(r, stdout(&cardred(&["generate", "random", "--seed", "11", "--style", "gci", "--nominals", "1"])));
    let f = ws.file("r.tbox", &r);
    let a = cardred(&["check", path(&f), "--bound", "3"]);
    let b = cardred(&["check", path(&f), "--bound", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn c2_translation() {
    let ws = Workspace::new();
    let f = ws.file("t.tbox", "card atleast 1 : exists R . A\n");
    let o = cardred(&["translate", path(&f), "--to", "c2"]);
    assert_eq!(stdout(&o), "E>=1 x. E>=1 y. (R(x,y) & A(y))\n");
    let g = ws.file("g.tbox", "gci A => B\n");
    let o = cardred(&["translate", path(&g), "--to", "c2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tiling_and_domino() {
    let ws = Workspace::new();
    let spec = ws.file("board.dom", "tiles a b\nh a b\nh b a\nv a b\nv b a\ninit a\n");
    let o = cardred(&["tile", "--spec", path(&spec), "--s", "2", "--t", "2"]);
    assert_eq!(stdout(&o), "b a\na b\n");
    let o = cardred(&["tile", "--spec", path(&spec), "--s", "3", "--t", "3"]);
    assert_eq!(stdout(&o), "no tiling\n");
    let g = cardred(&["generate", "domino", "--spec", path(&spec), "--n", "1"]);
    assert_eq!(g.status.code(), Some(0));
    let f = ws.file("dom.tbox", &stdout(&g));
    assert_eq!(cardred(&["check", path(&f), "--bound", "4"]).status.code(), Some(0));
    let bad = cardred(&["generate", "domino", "--spec", path(&spec), "--n", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn eval_prints_extension() {
    let ws = Workspace::new();
    let m = ws.file("m.model", "domain 3\nconcept A = {0,2}\nrole R = {(1,0),(1,2)}\n");
    let o = cardred(&["eval", path(&m), "atleast 2 R . A"]);
    assert_eq!(stdout(&o), "{1}\n");
    let o = cardred(&["eval", path(&m), "not A"]);
    assert_eq!(stdout(&o), "{1}\n");
}

#[test]
fn una_and_individuals() {
    let ws = Workspace::new();
    let f = ws.file("una.tbox", "gci {o} => atmost 1 R . top\ngci top => exists inv(R) . {o}\n");
    let free = cardred(&["check", path(&f), "--bound", "4", "--individual", "p"]);
    assert_eq!(free.status.code(), Some(0));
    let una = cardred(&["check", path(&f), "--bound", "4", "--individual", "p", "--una"]);
    assert_eq!(una.status.code(), Some(1));
}

#[test]
fn errors_exit_with_two() {
    let ws = Workspace::new();
    let missing = ws.dir.path().join("nope.tbox");
    let o = cardred(&["check", path(&missing)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error:"));
    let f = ws.file("bad.tbox", "card atleast : A\n");
    assert_eq!(cardred(&["parse", path(&f)]).status.code(), Some(2));
    let ok = ws.file("ok.tbox", "card atleast 1 : A\n");
    assert_eq!(cardred(&["check", path(&ok), "--bound", "0"]).status.code(), Some(2));
    assert_eq!(cardred(&["check", path(&ok), "--deadline", "0"]).status.code(), Some(2));
    assert_eq!(cardred(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn parallel_witness_is_flagged() {
    let ws = Workspace::new();
    let f = ws.file("t.tbox", "card atleast 3 : A\n");
    let o = cardred(&["check", path(&f), "--bound", "4", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not canonical"));
    let model: Interpretation = stdout(&o).parse().unwrap();
    assert_eq!(model.size(), 3);
}
