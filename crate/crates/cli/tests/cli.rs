use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn nc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nc"))
        .args(args)
        .output()
        .expect("nc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn help_lists_subcommands() {
    let o = nc(&["--help"]);
    assert!(o.status.success());
    for cmd in ["schema", "instance", "laws", "np", "trajectory", "render"] {
        assert!(stdout(&o).contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn expanded_trajectory_written_as_dot() {
    let aesop = fixtures().join("aesop");
    let out = tempdir().join("expanded.dot");
    let o = nc(&[
        "trajectory",
        "build",
        "--plan",
        aesop.join("fable.plan").to_str().unwrap(),
        "--corpus",
        aesop.join("np.csv").to_str().unwrap(),
        "--actants",
        aesop.join("actants.csv").to_str().unwrap(),
        "--expand",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let dot = std::fs::read_to_string(&out).unwrap();
    assert_eq!(dot, std::fs::read_to_string(aesop.join("expanded.dot")).unwrap());
    assert!(dot.contains("causing-to-do") && dot.contains("causing-to-be"));
}

#[test]
fn render_reads_hypergraph_documents() {
    let doc = fixtures().join("aesop/expanded.json");
    let o = nc(&["render", doc.to_str().unwrap(), "--format", "text"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with('b')).count(), 7);
}

#[test]
fn lawful_monads_exit_zero() {
    for monad in ["list", "maybe"] {
        let o = nc(&["laws", "--monad", monad, "--max-carrier", "3"]);
        assert!(o.status.success(), "{monad}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("0 violations\n"));
    }
}

#[test]
fn mutant_monad_exits_one() {
    let o = nc(&["laws", "--monad", "list", "--mutant", "drop-last", "--max-carrier", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("VIOLATED"));
}

#[test]
fn unknown_np_is_an_error() {
    let o = nc(&["np", "formula", "NP9"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("error[narrative]: "), "{err}");
    assert!(err.contains("unknown NP id"));
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn formulas_match_golden() {
    let o = nc(&["np", "formula", "--all"]);
    assert!(o.status.success());
    let golden = std::fs::read_to_string(fixtures().join("aesop/formulas.golden")).unwrap();
    assert_eq!(stdout(&o).trim_end(), golden.trim_end());
}

#[test]
fn instance_check_reports_mutation() {
    let dir = tempdir().join("mutated");
    std::fs::create_dir_all(&dir).unwrap();
    for entry in std::fs::read_dir(fixtures().join("instance_A")).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    let clean = nc(&["instance", "check", "--schema", "builtin:A", "--tables", dir.to_str().unwrap()]);
    assert!(clean.status.success(), "{}", stdout(&clean));

    let mutation = fixtures().join("mutations/E-Fox-a4");
    for entry in std::fs::read_dir(&mutation).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "csv") {
            std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
        }
    }
    let bad = nc(&["instance", "check", "--schema", "builtin:A", "--tables", dir.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("Fox"), "{}", stdout(&bad));
}

#[test]
fn io_errors_name_the_path() {
    let o = nc(&["schema", "validate", "/definitely/not/here.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[io]: /definitely/not/here.json: "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nc(&["laws"]).status.code(), Some(2));
    assert_eq!(nc(&["laws", "--monad", "state"]).status.code(), Some(2));
}
