use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gc() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gc"));
    cmd.env_remove("GC_MAX_ORACLE_VERTICES");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("gc runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn program(name: &str) -> PathBuf {
    repo().join("programs").join(format!("{name}.gc"))
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bundled_programs_match_golden_outputs() {
    for name in ["books", "broken_wheels", "gluing", "ladders", "printed"] {
        for format in ["json", "csv"] {
            let out = run(gc()
                .args(["run", "--no-timing", "--format", format])
                .arg(program(name)));
            assert!(out.status.success(), "{name}: {}", stderr(&out));
            let golden = repo().join(format!("crates/core/tests/golden/{name}.{format}"));
            assert_eq!(
                stdout(&out),
                std::fs::read_to_string(golden).unwrap(),
                "{name}.{format}"
            );
        }
    }
}

#[test]
fn text_report() {
    let out = run(gc().args(["run", "--no-timing"]).arg(program("printed")));
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.ends_with("elapsed_ms=0.000")));
    assert!(text.contains("verdict=match"));
}

#[test]
fn mismatch_and_errors_set_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write_temp(&dir, "ok.gc", "graph g = cycle 4\nverify g\n");
    assert_eq!(run(gc().arg("run").arg(&ok)).status.code(), Some(0));

    let bad = write_temp(&dir, "bad.gc", "graph g = cycle 4\nverify h\n");
    let out = run(gc().arg("run").arg(&bad));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let big = write_temp(&dir, "big.gc", "graph g = complete 16\noracle g\n");
    assert_eq!(run(gc().arg("run").arg(&big)).status.code(), Some(2));

    assert_eq!(
        run(gc().args(["run", "/nonexistent/program.gc"]))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(gc().args(["bell"])).status.code(), Some(2));
    assert_eq!(
        run(gc().args(["count", "--family", "cycle", "2"]))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn bell_count_and_sequence() {
    assert_eq!(stdout(&run(gc().args(["bell", "8"]))), "4140\n");
    assert_eq!(
        stdout(&run(gc().args(["bell", "30"]))),
        "846749014511809332450147\n"
    );
    assert_eq!(
        stdout(&run(gc().args(["count", "--family", "cycle", "4"]))),
        "12\n"
    );
    assert_eq!(
        stdout(&run(gc().args(["count", "--family", "complete", "5"]))),
        "52\n"
    );
    assert_eq!(
        stdout(&run(gc().args(["count", "--family", "tree", "6"]))),
        "64\n"
    );
    let ladder = run(gc().args([
        "sequence", "--family", "cycle", "--shape", "chain", "4", "4",
    ]));
    assert_eq!(stdout(&ladder), "12\n74\n456\n2810\n");
    let book = run(gc().args([
        "sequence", "--family", "complete", "--shape", "book", "3", "3",
    ]));
    assert_eq!(stdout(&book), "5\n13\n35\n");
}

#[test]
fn oracle_reads_edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let square = write_temp(&dir, "square.txt", "4 4\n0 1\n1 2\n2 3\n0 3\n");
    let out = run(gc().arg("oracle").arg(&square));
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "12\n");

    let broken = write_temp(&dir, "broken.txt", "3 2\n0 1\n");
    assert_eq!(run(gc().arg("oracle").arg(&broken)).status.code(), Some(2));
}

#[test]
fn oracle_limit_from_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "k5.gc", "graph g = complete 5\noracle g\n");

    let out = run(gc()
        .arg("run")
        .arg(&path)
        .env("GC_MAX_ORACLE_VERTICES", "4"));
    assert_eq!(out.status.code(), Some(2));

    // the flag wins over the environment
    let out = run(gc()
        .arg("run")
        .arg(&path)
        .env("GC_MAX_ORACLE_VERTICES", "4")
        .args(["--max-oracle-vertices", "5"]));
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("\t52\t"));

    let out = run(gc()
        .arg("run")
        .arg(&path)
        .args(["--max-oracle-vertices", "16"]));
    assert!(out.status.success());
    assert!(stderr(&out).contains("warning"));

    let out = run(gc().arg("run").arg(&path));
    assert!(stderr(&out).is_empty());
}
