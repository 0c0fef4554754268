// The `check` and `run` commands on a DIMACS file, through the same entry
// point the binary uses.

use mtcluster::cli::run_cli;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("mtcluster-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let cnf = dir.join("small.cnf");
    std::fs::write(&cnf, "c three clauses\np cnf 5 3\n1 2 -3 0\n-1 4 5 0\n2 -4 -5 0\n")?;
    let report = dir.join("check.json");
    let code = run_cli([
        "mtcluster", "check", "--input", cnf.to_str().unwrap(), "--output", report.to_str().unwrap(),
    ]);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report)?)?;
    println!("check exit code {code}, in region {}, total bound {}", json["in_region"], json["mt_bounds"]["total_bound"]);
    assert_eq!(code, 0);
    let code = run_cli([
        "mtcluster", "run", "--input", cnf.to_str().unwrap(), "--seed", "7", "--output", report.to_str().unwrap(),
    ]);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report)?)?;
    println!("run exit code {code}, verified {}, assignment {}", json["assignment_verified"], json["log"]["assignment"]);
    assert_eq!(json["assignment_verified"], true);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
