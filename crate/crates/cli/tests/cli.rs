use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attractor-lab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn param<'a>(out: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    out.lines().find_map(|l| l.strip_prefix(&prefix)).unwrap_or_else(|| panic!("no {key} in\n{out}"))
}

/// Parses `--format csv` output: metadata lines, then a header and rows.
fn csv_rows(out: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body: String = out.lines().filter(|l| !l.starts_with("# ")).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn gen_words() {
    for (spec, word) in [
        ("fib:5", "abaababaabaab"),
        ("debruijn:3:3:back", "aaabaacabbabcacbaccbbbcbcccaa"),
        ("sff:3:3:2", "aaabaaabbbabbb"),
    ] {
        let o = lab(&["gen", spec]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), format!("{word}\n"));
    }
}

#[test]
fn gen_stats_and_seed() {
    let o = lab(&["gen", "fib:5", "--stats"]);
    let out = stdout(&o);
    assert_eq!(param(&out, "length"), "13");
    assert_eq!(param(&out, "sigma"), "2");

    let a = stdout(&lab(&["gen", "rand:40:3", "--seed", "5"]));
    let b = stdout(&lab(&["gen", "rand:40:3:5"]));
    let c = stdout(&lab(&["gen", "rand:40:3", "--seed", "6"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn malformed_spec_is_a_usage_error() {
    let o = lab(&["gen", "fib:x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("debruijn:<k>:<sigma>"));
    assert_eq!(lab(&["lazy", "--bogus"]).status.code(), Some(2));
}

#[test]
fn lz_table_row() {
    let o = lab(&["lz", "lit:aaabbabaabaaabab", "--self-ref", "--novel", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("# z: 5\n"));
    let (header, rows) = csv_rows(&out);
    let content = header.iter().position(|h| h == "content").unwrap();
    let bars: Vec<&str> = rows.iter().map(|r| r[content].as_str()).collect();
    assert_eq!(bars.join("|"), "a|aab|ba|baa|baaa|bab");
}

#[test]
fn verify_exit_codes() {
    let o = lab(&["verify", "lit:abaab", "--gamma", "2,4"]);
    assert_eq!(o.status.code(), Some(0));

    let gamma = "3,6,9,12,15,18,21,24,27";
    let o = lab(&["verify", "debruijn:3:3:back", "--gamma", gamma, "--k", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows[0][..2], ["false".to_string(), "ba".to_string()]);

    let o = lab(&["verify", "debruijn:3:3:back", "--gamma", gamma, "--k", "3", "--sharp"]);
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(lab(&["verify", "lit:ab", "--gamma", "5"]).status.code(), Some(2));
    assert_eq!(lab(&["verify", "lit:ab", "--gamma", "1,x"]).status.code(), Some(2));
}

#[test]
fn lazy_on_fibonacci() {
    let out = stdout(&lab(&["lazy", "fib:6", "--k", "0"]));
    assert_eq!(param(&out, "cost"), "6");
    assert_eq!(param(&out, "markings"), "1,2,4,7,12,20");
}

#[test]
fn lazy_reads_stdin_and_files() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_attractor-lab"))
        .args(["lazy", "--k", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"abaabaaabbcaabbb\n").unwrap();
    let out = String::from_utf8(child.wait_with_output().unwrap().stdout).unwrap();
    assert_eq!(param(&out, "markings"), "1,2,4,8,10,11,16");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    std::fs::write(&path, "abaabaaabbcaabbb").unwrap();
    let arg = format!("file:{}", path.display());
    let out = stdout(&lab(&["lazy", &arg, "--k", "3"]));
    assert_eq!(param(&out, "cost"), "7");
}

#[test]
fn minattr_example() {
    let out = stdout(&lab(&["minattr", "lit:abaabaaabbcaabbb", "--k", "3", "--format", "csv"]));
    let (header, rows) = csv_rows(&out);
    assert_eq!(header[0], "size");
    assert_eq!(rows[0][0], "3");
    assert_eq!(rows[0][4], "true");

    let o = lab(&["minattr", "tm:7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn families_experiment() {
    let out = stdout(&lab(&["experiment", "families", "--family", "fib", "--m-min", "3", "--m-max", "10", "--format", "csv"]));
    let (header, rows) = csv_rows(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[col("lazy_cost")], (i + 3).to_string());
        assert_eq!(row[col("opt")], "2");
        assert!(["exact", "cited"].contains(&row[col("opt_source")].as_str()));
    }

    let out = stdout(&lab(&["experiment", "families", "--family", "tm", "--m-max", "10", "--format", "csv"]));
    let (header, rows) = csv_rows(&out);
    let c = header.iter().position(|h| h == "lazy_cost").unwrap();
    let costs: Vec<&str> = rows.iter().map(|r| r[c].as_str()).collect();
    assert_eq!(costs, ["4", "6", "8", "10", "12", "14", "16", "18"]);
}

#[test]
fn lowerbound_experiment() {
    let out = stdout(&lab(&["experiment", "lowerbound", "--k", "3", "--sigma", "2,8", "--format", "csv"]));
    let (header, rows) = csv_rows(&out);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(rows[0][col("lazy_cost")], "5");
    let eight = &rows[1];
    assert!(eight[col("lazy_cost")].parse::<usize>().unwrap() >= 448);
    assert_eq!(eight[col("opt")], "211");
    assert_eq!(eight[col("opt_source")], "constructive");
    assert!(eight[col("ratio")].parse::<f64>().unwrap() >= 2.12);
    assert!(rows.iter().all(|r| r[col("lazy_cost_in_t2")] == "0"));

    let o = lab(&["experiment", "lowerbound", "--sigma", "8", "--max-len", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn debruijn_experiment() {
    for (k, sigma) in [("3", "3"), ("3", "2"), ("5", "2")] {
        let o = lab(&["experiment", "debruijn", "--k", k, "--sigma", sigma, "--prime-check", "--format", "json"]);
        assert!(o.status.success(), "k={k} sigma={sigma}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let rows = v["rows"].as_array().unwrap();
        let front = rows.iter().find(|r| r[0] == "front" && r[1] == k).unwrap();
        assert_eq!(front[5], "true");
    }
    let out = stdout(&lab(&["experiment", "debruijn", "--k", "3", "--sigma", "3", "--format", "csv"]));
    assert!(out.contains("back,3,29,9,true,false,ba"));
}

#[test]
fn palindromes_experiment() {
    let out = stdout(&lab(&["experiment", "palindromes", "--directive", "1", "--m", "8", "--format", "csv"]));
    let (_, rows) = csv_rows(&out);
    let marks: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(marks, ["1", "2", "4", "7", "12", "20", "33", "54"]);
    assert!(rows[2..].iter().all(|r| r[3] == "true"));

    let o = lab(&["experiment", "palindromes", "--directive", "2,2", "--m", "6"]);
    assert!(o.status.success());
    assert!(param(&stdout(&o), "match_rate").parse::<f64>().is_ok());
}

#[test]
fn out_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let path = dir.path().join(format!("r.{format}"));
        let p = path.to_str().unwrap();
        let o = lab(&["experiment", "debruijn", "--format", format, "--out", p]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
        let written = std::fs::read_to_string(&path).unwrap();
        let again = stdout(&lab(&["experiment", "debruijn", "--format", format]));
        assert_eq!(written, again);
    }
}
