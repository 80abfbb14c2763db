use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use streamlearn::evaluation::aggregate;
use streamlearn_cli::runner::read_results;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_streamlearn"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// Results with the wall-time column blanked, for value comparisons.
fn values_only(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f[10] = "";
            f.join(",")
        })
        .collect()
}

#[test]
fn gen_dumps_deterministic_streams() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = ["gen", "--generator", "MIXED", "--drift", "abrupt", "--size", "10000", "--seed", "1", "--out", out];
    assert!(run(&args).status.success());
    let file = dir.path().join("MIXED_abrupt_10000_s1.csv");
    let first = fs::read(&file).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert_eq!(text.lines().count(), 10_001);
    assert_eq!(text.lines().next().unwrap(), "v,w,x,y,class");
    assert!(run(&args).status.success());
    assert_eq!(fs::read(&file).unwrap(), first);

    let agraw = ["gen", "--generator", "AGRAW1", "--drift", "abrupt", "--size", "2000", "--out", out];
    assert!(run(&agraw).status.success());
    let text = fs::read_to_string(dir.path().join("AGRAW1_abrupt_2000_s1.csv")).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 10);
    assert_eq!(&header[..3], ["salary", "commission", "age"]);
    assert_eq!(header[9], "class");
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(row[0].split_once('.').is_some_and(|(_, d)| d.len() == 6));
    assert!(row[3].parse::<u32>().is_ok(), "nominal elevel is an index");
}

#[test]
fn one_cell_grid_gives_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[[generator]]\nfamily = \"SINE\"\ndrift = [\"abrupt\"]\nsizes = [5000]\n\n[[learner]]\nkind = \"nb\"\n",
    );
    let out = dir.path().join("res");
    let o = run(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("results.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "generator,drift,size,learner,detector,k,w,seed,mean_acc,final_acc,wall_time_s,drift_events");
    assert!(lines[1].starts_with("SINE,abrupt,5000,NB,none,,,1,"));
}

#[test]
fn agrawal_nb_thirty_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "repetitions = 30\n[[generator]]\nfamily = \"AGRAW1\"\ndrift = [\"abrupt\"]\nsizes = [10000]\n[[learner]]\nkind = \"nb\"\n",
    );
    let out = dir.path().join("res");
    assert!(run(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let records = read_results(&out.join("results.csv"), false).unwrap();
    assert_eq!(records.len(), 30);
    let seeds: Vec<u64> = records.iter().map(|r| r.seed).collect();
    assert_eq!(seeds, (1..=30).collect::<Vec<_>>());
    let (mean, hw) = aggregate(&records.iter().map(|r| r.mean_acc).collect::<Vec<_>>()).unwrap();
    assert!((mean - 57.12).abs() <= 2.0, "{mean}");
    assert!(hw > 0.0 && hw < 1.0, "{hw}");
}

const GRID: &str = r#"
base_seed = 5
repetitions = 4
drift_logs = true

[[generator]]
family = "MIXED"
drift = ["abrupt", "gradual"]
sizes = [4000]

[[generator]]
family = "LED"
drift = ["abrupt"]
sizes = [3000]

[[learner]]
kind = "nb"
detectors = ["none", "ddm"]

[[learner]]
kind = "knn"
k = [3]
w = [500]
detectors = ["rddm"]
"#;

#[test]
fn resume_and_worker_count_do_not_change_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), GRID);
    let full = dir.path().join("full");
    assert!(run(&["run", "--config", &cfg, "--out", full.to_str().unwrap()]).status.success());
    assert_eq!(values_only(&full.join("results.csv")).len(), 1 + 3 * 3 * 4);

    // first half, then a torn row as left by a kill, then resume with 2 workers
    let half_cfg = write_config(dir.path(), &GRID.replace("repetitions = 4", "repetitions = 2"));
    let resumed = dir.path().join("resumed");
    let r = resumed.to_str().unwrap();
    assert!(run(&["run", "--config", &half_cfg, "--out", r]).status.success());
    let mut text = fs::read_to_string(resumed.join("results.csv")).unwrap();
    text.push_str("MIXED,abrupt,4000,NB,no");
    fs::write(resumed.join("results.csv"), text).unwrap();
    let cfg = write_config(dir.path(), GRID);
    let o = run(&["run", "--config", &cfg, "--out", r, "--workers", "2"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("skipped 18"));
    assert_eq!(values_only(&full.join("results.csv")), values_only(&resumed.join("results.csv")));

    // a second resume is a no-op
    let o = run(&["run", "--config", &cfg, "--out", r]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("ran 0, skipped 36"));

    let logs = fs::read_dir(full.join("drift_logs")).unwrap().count();
    assert_eq!(logs, 3 * 2 * 4, "one log per detector run");
    let log = fs::read_to_string(full.join("drift_logs").join("MIXED_abrupt_4000_kNN3_w500_rddm_s5.csv")).unwrap();
    assert!(log.starts_with("t,status\n"));
}

#[test]
fn failures_are_recorded_per_row() {
    let dir = tempfile::tempdir().unwrap();
    // a 500-wide transition does not fit 1000/5 = 200-instance concepts
    let cfg = write_config(
        dir.path(),
        "[[generator]]\nfamily = \"SINE\"\ndrift = [\"abrupt\", \"gradual\"]\nsizes = [1000]\n[[learner]]\nkind = \"nb\"\n",
    );
    let out = dir.path().join("res");
    let o = run(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(fs::read_to_string(out.join("results.csv")).unwrap().lines().count(), 2);
    let failures = fs::read_to_string(out.join("failures.csv")).unwrap();
    let lines: Vec<&str> = failures.lines().collect();
    assert_eq!(lines[0], "generator,drift,size,learner,detector,k,w,seed,status,error");
    assert!(lines[1].starts_with("SINE,gradual,1000,NB,none,,,1,failed,"));
}

#[test]
fn config_and_usage_errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "repetitons = 3\n");
    let o = run(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("repetitons"));

    let big = write_config(
        dir.path(),
        "[[generator]]\nfamily = \"LED\"\ndrift = [\"abrupt\"]\nsizes = [500000]\n[[learner]]\nkind = \"nb\"\n",
    );
    let o = run(&["run", "--config", &big, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--large"));

    assert_eq!(run(&["explode"]).status.code(), Some(1));
    assert_eq!(run(&["run", "--workers", "many"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn stats_ranks_and_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
repetitions = 2
[[generator]]
family = "SINE"
drift = ["abrupt"]
sizes = [3000]
[[generator]]
family = "MIXED"
drift = ["abrupt", "gradual"]
sizes = [3000]
[[generator]]
family = "AGRAW2"
drift = ["abrupt"]
sizes = [3000]
[[learner]]
kind = "nb"
[[learner]]
kind = "ht"
[[learner]]
kind = "knn"
k = [5, 20]
w = [1000]

[[comparison]]
name = "accuracy"

[[comparison]]
name = "runtime"
metric = "wall_time_s"

[[comparison]]
name = "solo"
learners = ["NB"]
"#;
    let cfg = write_config(dir.path(), body);
    let out = dir.path().join("res");
    let o = out.to_str().unwrap();
    assert!(run(&["run", "--config", &cfg, "--out", o]).status.success());

    // the solo comparison has a single method
    let res = run(&["stats", "--config", &cfg, "--out", o]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("K ≥ 2 required"));

    let cfg = write_config(dir.path(), &body.replace("[[comparison]]\nname = \"solo\"\nlearners = [\"NB\"]\n", ""));
    let res = run(&["stats", "--config", &cfg, "--out", o]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("accuracy: K=4 N=4"), "{stdout}");

    let ranks = fs::read_to_string(out.join("stats").join("accuracy_ranks.csv")).unwrap();
    let mut lines = ranks.lines();
    assert_eq!(lines.next(), Some("method,avg_rank"));
    let sum: f64 = lines.map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap()).sum();
    assert!((sum - 10.0).abs() < 1e-5, "K(K+1)/2 = 10, got {sum}");
    let svg = fs::read_to_string(out.join("stats").join("runtime_cd.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("CD = "));
}

#[test]
fn stats_lists_missing_cells() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.csv");
    fs::write(
        &results,
        "generator,drift,size,learner,detector,k,w,seed,mean_acc,final_acc,wall_time_s,drift_events\n\
         LED,abrupt,1000,NB,none,,,1,50.0,50.0,0.1,0\n\
         LED,abrupt,1000,HT,none,,,1,55.0,50.0,0.1,0\n\
         SINE,abrupt,1000,NB,none,,,1,60.0,50.0,0.1,0\n",
    )
    .unwrap();
    let o = run(&["stats", "--results", results.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("SINE/abrupt/1000 × HT"));
}

#[test]
fn plot_renders_curves() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "curves = true\nrepetitions = 2\n[[generator]]\nfamily = \"WAVEF\"\ndrift = [\"abrupt\"]\nsizes = [3000]\n[[learner]]\nkind = \"nb\"\n",
    );
    let out = dir.path().join("res");
    let o = out.to_str().unwrap();
    assert!(run(&["run", "--config", &cfg, "--out", o]).status.success());
    let curve = fs::read_to_string(out.join("curves").join("WAVEF_abrupt_3000_NB_none_s1.csv")).unwrap();
    assert_eq!(curve.lines().collect::<Vec<_>>()[..2][0], "t,acc");
    assert_eq!(curve.lines().count(), 4);
    let p = run(&["plot", "--out", o]);
    assert!(p.status.success());
    assert_eq!(fs::read_dir(out.join("plots")).unwrap().count(), 2);
}

#[test]
fn shipped_config_resolves() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/table1.toml");
    let cfg = streamlearn_cli::config::RawConfig::load(&path).unwrap().resolve(false).unwrap();
    assert_eq!(cfg.cells.len(), 7 * 2 * 12);
    assert_eq!(cfg.repetitions, 30);
    assert_eq!(cfg.comparisons.len(), 2);
}
