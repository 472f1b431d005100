use std::path::PathBuf;
use std::process::{Command, Output};

use opacity_core::interference::{check_ini, check_ni, IniMethod};
use opacity_core::opacity::{check_opacity_natural, check_opacity_orwellian};
use opacity_core::{fixtures, parse_model};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn opacity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opacity")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(String::from).collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn g2_orwellian() {
    let g2 = fixture("g2.lts");
    let out = opacity(&["check", "orwellian", "--system", g2.to_str().unwrap(), "--secret-re", "h l + h d h l l*"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), ["violated", "h l", "state 1: violated h l", "state 4: violated h d h l l"]);
}

#[test]
fn json_lines_report() {
    let g2 = fixture("g2.lts");
    let out = opacity(&["check", "orwellian", "--system", g2.to_str().unwrap(), "--report", "json-lines"]);
    assert_eq!(code(&out), 1);
    let records: Vec<serde_json::Value> = stdout(&out).iter().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["state"], "1");
    assert_eq!(records[0]["holds"], false);
    assert_eq!(records[0]["witness"], "h l");
    assert_eq!(records[1]["witness"], "h d h l l");

    let hdl = fixture("hdl.lts");
    let out = opacity(&["check", "ni", "--system", hdl.to_str().unwrap(), "--report", "json-lines"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)[0]).unwrap();
    assert_eq!(record["state"], "0");
    assert_eq!(record["witness"], "l");
}

#[test]
fn separation_fixture() {
    let hdl = fixture("hdl.lts");
    let out = opacity(&["check", "ini", "--system", hdl.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out)[..2], ["holds", ""]);
    for method in ["direct", "decomposed", "both"] {
        assert_eq!(code(&opacity(&["check", "ini", "--system", hdl.to_str().unwrap(), "--method", method])), 0);
    }
    let out = opacity(&["check", "ni", "--system", hdl.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), ["violated", "l", "preimage: h d l"]);
}

#[test]
fn epsilon_secret_is_hidden_by_h() {
    let g2 = fixture("g2.lts");
    let out = opacity(&["check", "static", "--system", g2.to_str().unwrap(), "--secret-re", "()"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn empty_witness_is_rendered() {
    let g2 = fixture("g2.lts");
    // every word secret: ε itself discloses
    let out = opacity(&["check", "static", "--system", g2.to_str().unwrap(), "--secret-re", "(h + l + d)*"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out)[..2], ["violated", "ε"]);
}

#[test]
fn secret_from_a_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let secret = dir.path().join("secret.lts");
    std::fs::write(
        &secret,
        "alphabet obs l\nalphabet unobs h\nalphabet down d\nstates s t u\ninit s\naccept Fphi: u\ntrans s h t\ntrans t l u\n",
    )
    .unwrap();
    let g2 = fixture("g2.lts");
    let out = opacity(&["check", "orwellian", "--system", g2.to_str().unwrap(), "--secret", secret.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out)[1], "h l");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.lts");
    std::fs::write(&bad, "alphabet unobs h\nstates 1 2 3\ninit 1\ntrans 1 h 2\ntrans 1 h 3\n").unwrap();
    let out = opacity(&["check", "ni", "--system", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5"), "{err}");

    let empty = dir.path().join("empty.lts");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(code(&opacity(&["check", "ni", "--system", empty.to_str().unwrap()])), 2);

    let hdl = fixture("hdl.lts");
    // hdl declares no secret
    assert_eq!(code(&opacity(&["check", "static", "--system", hdl.to_str().unwrap()])), 2);
    let g2 = fixture("g2.lts");
    assert_eq!(code(&opacity(&["check", "static", "--system", g2.to_str().unwrap(), "--secret-re", "h ("])), 2);
    assert_eq!(code(&opacity(&["check", "ni", "--system", "/no/such/file"])), 2);
    assert_eq!(code(&opacity(&["check", "bogus"])), 2);
    assert_eq!(code(&opacity(&[])), 2);
}

#[test]
fn reductions_write_models() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = fixture("g2.lts");
    let g2 = g2.to_str().unwrap();

    let to_ni = dir.path().join("ni.lts");
    assert_eq!(code(&opacity(&["reduce", "to-ni", "--system", g2, "-o", to_ni.to_str().unwrap()])), 0);
    assert_eq!(code(&opacity(&["check", "ni", "--system", to_ni.to_str().unwrap()])), 1);

    let to_ini = dir.path().join("ini.lts");
    assert_eq!(code(&opacity(&["reduce", "to-ini", "--system", g2, "-o", to_ini.to_str().unwrap()])), 0);
    assert_eq!(code(&opacity(&["check", "ini", "--system", to_ini.to_str().unwrap()])), 1);

    let hdl = fixture("hdl.lts");
    let from_ini = dir.path().join("opacity.lts");
    assert_eq!(code(&opacity(&["reduce", "from-ini", "--system", hdl.to_str().unwrap(), "-o", from_ini.to_str().unwrap()])), 0);
    assert_eq!(code(&opacity(&["check", "orwellian", "--system", from_ini.to_str().unwrap()])), 0);
    let reduced = parse_model(&std::fs::read_to_string(&from_ini).unwrap()).unwrap();
    assert!(reduced.has_accepting("Fphi"));
}

#[test]
fn oracle_subcommand() {
    let g2 = fixture("g2.lts");
    let out = opacity(&["oracle", "--system", g2.to_str().unwrap(), "--obs", "orwellian", "--max-len", "10"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out)[..2], ["violated", "h l"]);
    let ex1 = fixture("static_ab.lts");
    let out = opacity(&["oracle", "--system", ex1.to_str().unwrap(), "--obs", "natural", "--max-len", "6"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out)[1], "a b b");
}

/// The front end adds no logic: its verdicts are the library's.
#[test]
fn verdicts_match_library() {
    for (name, g) in [("g2.lts", fixtures::g2()), ("static_ab.lts", fixtures::static_ab()), ("hdl.lts", fixtures::hdl())] {
        let path = fixture(name);
        let path = path.to_str().unwrap();
        let expect = |holds: bool| if holds { 0 } else { 1 };
        assert_eq!(code(&opacity(&["check", "ni", "--system", path])), expect(check_ni(&g).unwrap().holds));
        assert_eq!(code(&opacity(&["check", "ini", "--system", path])), expect(check_ini(&g, IniMethod::Both).unwrap().holds));
        if g.has_accepting("Fphi") {
            assert_eq!(code(&opacity(&["check", "static", "--system", path])), expect(check_opacity_natural(&g).unwrap().holds));
            assert_eq!(code(&opacity(&["check", "orwellian", "--system", path])), expect(check_opacity_orwellian(&g).unwrap().holds));
        }
    }
}
