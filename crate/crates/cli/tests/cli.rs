use std::path::Path;
use std::process::{Command, Output};

use cdc_cli::codefile::CodeFile;
use cdc_core::algebra::{all_points, Subspace};
use cdc_core::verify::Code;

fn cdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdc")).args(args).output().expect("run cdc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn construct_to(dir: &Path, family: &str, q: u32) -> std::path::PathBuf {
    let path = dir.join(format!("{family}-{q}.cdc"));
    let o = cdc(&["construct", family, "--q", &q.to_string(), "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path
}

fn header(text: &str, key: &str) -> String {
    let prefix = format!("# {key}=");
    text.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_default().to_string()
}

#[test]
fn construct_s_at_q2_has_77_planes() {
    let o = cdc(&["construct", "s", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(header(&text, "count"), "77");
    assert_eq!(header(&text, "tiebreak"), "lex");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 77);
}

#[test]
fn family_flag_and_positional_agree() {
    let a = cdc(&["construct", "s1", "--q", "2"]);
    let b = cdc(&["construct", "--family", "s1", "--q", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let c = cdc(&["construct", "s1", "--family", "s2", "--q", "2"]);
    assert_eq!(c.status.code(), Some(2));
}

#[test]
fn pg8_at_q2_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "pg8", 2);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(header(&text, "count"), "4977");
    let o = cdc(&["verify", "--in", path.to_str().unwrap(), "--expect-min-dist", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("min_distance=4\n"));
    assert!(stdout(&o).ends_with("result=pass\n"));
    // distance 6 is not reached
    let o = cdc(&["verify", path.to_str().unwrap(), "--expect-min-dist", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn veronese_needs_odd_q() {
    let o = cdc(&["construct", "veronese", "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("q must be odd"));
}

#[test]
fn bad_parameters_exit_2() {
    for args in [
        &["construct", "s", "--q", "6"][..],
        &["construct", "s", "--q", "2", "--poly", "1,1,1,1"],
        &["construct", "s", "--q", "2", "--poly", "x"],
        &["construct", "s", "--q", "2", "--threads", "0"],
        &["construct", "nonsense", "--q", "2"],
        &["verify", "/nonexistent/file.cdc"],
        &["report", "bounds", "--n", "9", "--d", "3", "--k", "3", "--q", "2"],
        &["report", "lemmas"],
    ] {
        assert_eq!(cdc(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn explicit_polynomial_is_recorded() {
    // x^3 + x^2 + 1, the other primitive cubic over GF(2)
    let o = cdc(&["construct", "s", "--q", "2", "--poly", "1,0,1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(header(&text, "ext_poly"), "1,0,1,1");
    assert_eq!(header(&text, "count"), "77");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.cdc");
    std::fs::write(&path, &text).unwrap();
    assert_eq!(cdc(&["verify", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn duplicated_line_is_a_format_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "s", 2);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let first = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    let mut bad: Vec<&str> = lines.clone();
    bad.insert(first + 1, lines[first + 1]);
    std::fs::write(&path, bad.join("\n") + "\n").unwrap();
    let o = cdc(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains(&format!("line {}:", first + 3)), "{err}");
    assert!(err.contains("duplicate codeword"), "{err}");
}

#[test]
fn corrupted_codeword_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "s", 2);
    let file = CodeFile::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let f = file.header.tower().unwrap().base().clone();
    let words = file.code.words();
    // replace the last codeword by a plane sharing a line with the first
    let line = Subspace::from_vectors(&f, 6, &[words[0].row(0), words[0].row(1)]);
    let plane = all_points(&f, 6)
        .into_iter()
        .map(|p| line.join(&f, &p))
        .find(|p| p.dim() == 3 && !file.code.contains(p))
        .unwrap();
    let mut new_words = words[..words.len() - 1].to_vec();
    new_words.push(plane);
    let bad = CodeFile::new(file.header.clone(), Code::new(new_words).unwrap());
    std::fs::write(&path, bad.to_text()).unwrap();
    let o = cdc(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("min_distance=2\n"), "{out}");
    assert!(out.contains("witness_a=") && out.contains("witness_b="), "{out}");
    assert!(out.ends_with("result=fail\n"));
}

#[test]
fn orbit_claim_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "klein-net", 2);
    let o = cdc(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("group=klein_KH closed=true single_orbit=true"));
    // s is not a union of klein_KH orbits
    let s = construct_to(dir.path(), "s", 2);
    let text = std::fs::read_to_string(&s).unwrap().replace("# comment=", "# group=klein_KH\n# comment=");
    std::fs::write(&s, &text).unwrap();
    let o = cdc(&["verify", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("closed=false"));
    // a group on the wrong space is a usage error
    std::fs::write(&s, text.replace("group=klein_KH", "group=c_pg3")).unwrap();
    assert_eq!(cdc(&["verify", s.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bounds_report() {
    let o = cdc(&["report", "bounds", "--n", "9", "--d", "4", "--k", "3", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "skk=4096 constructed=4977 johnson=6205\n");
    let dir = tempfile::tempdir().unwrap();
    let path = construct_to(dir.path(), "s", 2);
    let o = cdc(&["report", "bounds", "--n", "6", "--d", "4", "--k", "3", "--q", "2", "--in", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("skk=64 constructed=77"), "{}", stdout(&o));
}

#[test]
fn lemma_reports() {
    let o = cdc(&["report", "lemmas", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("8/8 pass\n"), "{}", stdout(&o));
    let o = cdc(&["report", "lemmas", "--q", "3", "--family", "veronese"]);
    assert!(stdout(&o).ends_with("10/10 pass\n"), "{}", stdout(&o));
    let o = cdc(&["report", "lemmas", "--q", "2", "--family", "klein-net"]);
    assert!(stdout(&o).ends_with("7/7 pass\n"), "{}", stdout(&o));
}

#[test]
fn partition_and_fingerprint_reports() {
    let o = cdc(&["report", "partition", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("points=364\n"));
    assert_eq!(cdc(&["report", "partition", "--q", "2"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let v = construct_to(dir.path(), "veronese", 3);
    let k = construct_to(dir.path(), "klein-net", 3);
    let args = ["report", "fingerprint", "--a", v.to_str().unwrap(), "--b", k.to_str().unwrap()];
    let first = cdc(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let text = stdout(&first);
    assert!(text.contains("profile_a=pi1=0:338 pi2=0:338 (veronese)"), "{text}");
    assert!(text.contains("profile_b=pi1=1:338 pi2=0:338 (klein-net)"), "{text}");
    assert!(text.contains("verdict=inequivalent"), "{text}");
    assert_eq!(cdc(&args).stdout, first.stdout);

    // a code compared with itself is never certified inequivalent
    let o = cdc(&["report", "fingerprint", "--a", v.to_str().unwrap(), "--b", v.to_str().unwrap()]);
    assert!(stdout(&o).contains("verdict=inconclusive"), "{}", stdout(&o));
}

#[test]
fn files_do_not_depend_on_threads_or_runs() {
    for (family, q) in [("s", "3"), ("pg8", "2"), ("klein-net", "3"), ("veronese", "3")] {
        let one = cdc(&["--threads", "1", "construct", family, "--q", q]);
        let again = cdc(&["--threads", "1", "construct", family, "--q", q]);
        let four = cdc(&["--threads", "4", "construct", family, "--q", q]);
        assert_eq!(one.status.code(), Some(0));
        assert!(one.stdout == again.stdout && one.stdout == four.stdout, "{family} q={q}");
    }
}

#[test]
fn seeds_are_recorded_and_reproducible() {
    let a = cdc(&["construct", "s", "--q", "3", "--seed", "11"]);
    let b = cdc(&["construct", "s", "--q", "3", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(header(&stdout(&a), "tiebreak"), "seed:11");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.cdc");
    std::fs::write(&path, &a.stdout).unwrap();
    assert_eq!(cdc(&["verify", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn every_family_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for q in [2u32, 3] {
        for family in ["s1", "s2", "s3", "s", "pg8", "veronese", "klein-net", "bundle"] {
            if family == "veronese" && q == 2 {
                continue;
            }
            let path = construct_to(dir.path(), family, q);
            let text = std::fs::read_to_string(&path).unwrap();
            let file = CodeFile::parse(&text).unwrap_or_else(|e| panic!("{family} q={q}: {e}"));
            assert_eq!(file.to_text(), text, "{family} q={q}");
            assert_eq!(file.header.count, file.code.len());
            let o = cdc(&["verify", path.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{family} q={q}: {}", stdout(&o));
        }
    }
}
