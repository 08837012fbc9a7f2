use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fermisim"))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fermisim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn trotter_error_writes_csv() {
    let csv = run_ok(bin().args(["trotter-error", "--nx", "2", "--ny", "2", "--filling", "1/4"]).args([
        "--orders", "0,1", "--steps", "2,4", "--n-vectors", "2",
    ]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "order,n_steps,time,gate_count,mean_error,std_error");
    assert_eq!(lines.len(), 5);
}

#[test]
fn kqd_on_hubbard_converges() {
    let csv = run_ok(bin().args(["kqd", "--hubbard", "4x1", "--filling", "1/4", "--dim", "8"]));
    let last = csv.lines().last().unwrap();
    let error: f64 = last.split(',').nth(4).unwrap().parse().unwrap();
    assert!(error.abs() < 1e-6, "{last}");
}

#[test]
fn gate_count_and_fcidump_info() {
    let plan = scratch("plan.json", r#"{"norb": 3, "operations": [{"op": "orbital_rotation", "alpha": "dense"}]}"#);
    assert_eq!(run_ok(bin().arg("gate-count").arg("--plan").arg(&plan)).trim(), "3");
    let dump = scratch("h.fcidump", "&FCI NORB=1,NELEC=2,MS2=0,\n&END\n 0.5 1 1 1 1\n -1.0 1 1 0 0\n");
    let info = run_ok(bin().arg("fcidump-info").arg(&dump));
    assert!(info.contains("sector: (1, 1, 1)"));
    assert!(info.contains("hartree_fock_energy: -1.5"));
}

#[test]
fn sample_slater_determinant() {
    let spec = scratch("slater.json", r#"{"norb": 2, "alpha": [0], "beta": [], "u_alpha": [[0, 1], [1, 0]]}"#);
    let out = run_ok(bin().args(["sample", "--shots", "5", "--slater"]).arg(&spec));
    assert_eq!(out.lines().collect::<Vec<_>>(), vec!["00/10"; 5]);
}

#[test]
fn errors_exit_with_status_two() {
    let out = bin().args(["trotter-error", "--nx", "2", "--ny", "2", "--filling", "1/3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
