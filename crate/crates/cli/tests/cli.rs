use std::io::Write;

use serde_json::Value;
use zetaburst_cli::run_command;

fn run(args: &str) -> zetaburst_cli::Output {
    run_command(std::iter::once("zetaburst").chain(args.split_whitespace()))
}

fn json_line(out: &str) -> Value {
    serde_json::from_str(out.lines().last().unwrap()).unwrap()
}

fn spec_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn zeta_half_fifty_digits() {
    let o = run("lvalue --char 1.1 --s 1/2 --digits 50");
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("-1.46035450880958"), "{}", o.stdout);
    let j = json_line(&o.stdout);
    for k in ["char", "s", "digits", "value", "radius", "algorithm", "seconds", "N1", "N2"] {
        assert!(j.get(k).is_some(), "missing {k}");
    }
    assert_eq!(j["char"], "1.1");
    assert_eq!(j["s"], "1/2");
    assert_eq!(j["algorithm"], "afe");
}

#[test]
fn algorithms_agree() {
    let a = run("lvalue --char 4.3 --s 2 --digits 40 --algorithm afe");
    let b = run("lvalue --char 4.3 --s 2 --digits 40 --algorithm em");
    let c = run("lvalue --char 4.3 --s 4 --digits 20 --algorithm ep");
    assert!(a.stdout.starts_with("+9.1596559417721901505460351493238411077"));
    assert!(b.stdout.starts_with("+9.1596559417721901505460351493238411077"));
    assert!(c.stdout.starts_with("+9.889445517411053361"), "{}", c.stdout);
    let r = run("lvalue --s 1/2 --digits 30 --algorithm ramanujan");
    assert!(r.stdout.starts_with("-1.46035450880958681288949915252"));
}

#[test]
fn alpha_flag() {
    let a = run("lvalue --char 23.19 --s 4/3 --digits 30");
    let b = run("lvalue --char 23.19 --s 4/3 --digits 30 --alpha 3/2");
    assert_eq!(a.code, 0);
    let (ja, jb) = (json_line(&a.stdout), json_line(&b.stdout));
    assert_eq!(ja["value"].as_str().unwrap()[..25], jb["value"].as_str().unwrap()[..25]);
    assert_ne!((&ja["N1"], &ja["N2"]), (&jb["N1"], &jb["N2"]));
}

#[test]
fn exact_numbers() {
    let o = run("bernoulli 12");
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().next().unwrap(), "-691/2730");
    assert_eq!(run("bernoulli 12 --algorithm ep").stdout.lines().next().unwrap(), "-691/2730");
    assert_eq!(run("euler 10").stdout.lines().next().unwrap(), "-50521");
    assert_eq!(run("bernoulli 1").stdout.lines().next().unwrap(), "-1/2");
    let j = json_line(&run("bernoulli 100").stdout);
    assert_eq!(j["numerator_digits"], 83);
}

#[test]
fn incomplete_gamma() {
    let o = run("incgamma --a 1/2 --z 1 --digits 20");
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("+2.7880558528066197650"), "{}", o.stdout);
    let n = run("incgamma --a 1/2 --z 1 --digits 20 --algorithm naive");
    assert_eq!(o.stdout.lines().next(), n.stdout.lines().next());
    let o = run("incgamma --a -2 --z 1 --digits 20");
    assert!(o.stdout.starts_with("+1.0969196719776013684"), "{}", o.stdout);
    assert_eq!(run("incgamma --a 1 --z -1 --digits 20").code, 2);
}

#[test]
fn landau_ramanujan() {
    let o = run("constant landau-ramanujan --digits 30");
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("+7.64223653589220662990698731250e-1"), "{}", o.stdout);
}

#[test]
fn exit_codes() {
    let o = run("lvalue --char 1.1 --s 1 --digits 50");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("pole"), "{}", o.stderr);
    assert_eq!(run("lvalue --char 6.2 --s 1/2").code, 2);
    assert_eq!(run("lvalue --char 7 --s 1/2").code, 2);
    assert_eq!(run("lvalue --s 1/x").code, 2);
    assert_eq!(run("lvalue --s 1/2 --algorithm nope").code, 2);
    assert_eq!(run("frobnicate").code, 2);
    // the Euler product would need far too many primes near s = 1
    let o = run("lvalue --s 11/10 --digits 1000 --algorithm ep");
    assert_eq!(o.code, 3, "{}", o.stderr);
    assert_eq!(run("--help").code, 0);
}

#[test]
fn bench_empty_spec() {
    let f = spec_file("");
    let o = run(&format!("bench {}", f.path().display()));
    assert_eq!(o.code, 0);
    assert!(o.stdout.trim().is_empty());
    let o = run(&format!("bench {} --format json", f.path().display()));
    assert_eq!(o.code, 0);
    assert!(o.stdout.trim().is_empty());
    assert_eq!(run("bench /nonexistent/spec.toml").code, 2);
    let bad = spec_file("[[tasks]]\ntask = \"nonsense\"\nladder = [10]\nalgorithms = [\"afe\"]\n");
    assert_eq!(run(&format!("bench {}", bad.path().display())).code, 2);
}

const LADDER: &str = r#"
[[tasks]]
task = "zeta-half"
ladder = [100, 316, 1000]
algorithms = ["afe", "em"]
"#;

#[test]
fn bench_ladder_records() {
    let f = spec_file(LADDER);
    let o = run(&format!("bench {} --format json", f.path().display()));
    assert_eq!(o.code, 0);
    let lines: Vec<Value> = o.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let records: Vec<&Value> = lines.iter().filter(|v| v.get("scaling").is_none()).collect();
    assert_eq!(records.len(), 6);
    for r in &records {
        for k in ["task", "n", "digits", "algorithm", "seconds", "terms", "peak_bits", "digest", "error"] {
            assert!(r.get(k).is_some(), "missing {k}");
        }
        assert!(r["error"].is_null());
        assert!(r["digest"].as_str().unwrap().starts_with("-1.4603545088095868128894991525153e+0|r"));
    }
    assert_eq!(records[0]["task"], "zeta-half-afe");
    let scaling = lines.len() - records.len();
    assert_eq!(scaling, 4);

    // digests are reproducible
    let again = run(&format!("bench {} --format json", f.path().display()));
    let digests = |s: &str| -> Vec<String> {
        s.lines()
            .filter_map(|l| serde_json::from_str::<Value>(l).ok())
            .filter_map(|v| v.get("digest").map(|d| d.as_str().unwrap().to_string()))
            .collect()
    };
    assert_eq!(digests(&o.stdout), digests(&again.stdout));
}

#[test]
fn bench_csv_and_failures() {
    let f = spec_file(
        r#"
[[tasks]]
task = "bernoulli"
ladder = [100, 1000]
algorithms = ["afe", "ep", "bogus"]

[[tasks]]
task = "L(1/2|23.19)"
ladder = [50]
algorithms = ["afe", "ep"]
"#,
    );
    let o = run(&format!("bench {} --parallel", f.path().display()));
    assert_eq!(o.code, 0);
    let mut blocks = o.stdout.split("\n\n");
    let records = blocks.next().unwrap();
    let mut rdr = csv::Reader::from_reader(records.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    for k in ["task", "digits", "algorithm", "seconds", "terms", "digest"] {
        assert!(header.contains(&k.to_string()), "missing column {k}");
    }
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 8);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let b1000: Vec<&csv::StringRecord> = rows
        .iter()
        .filter(|r| &r[col("n")] == "1000" && r[col("error")].is_empty())
        .collect();
    assert_eq!(b1000.len(), 2);
    assert!(b1000.iter().all(|r| &r[col("digits")] == "1779"));
    // unknown algorithm and an Euler product in the critical strip fail per cell
    let failed = rows.iter().filter(|r| !r[col("error")].is_empty()).count();
    assert_eq!(failed, 3);
    assert!(blocks.next().unwrap().starts_with("task,algorithm,digits_from,digits_to,exponent"));
}
