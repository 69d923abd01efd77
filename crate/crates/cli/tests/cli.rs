use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cipherlock::attacks::{AttackReport, Outcome};
use cipherlock::benches::{b_class, MAJORITY_BENCH};
use cipherlock::locking::LockRecord;
use cipherlock::netlist::{emit_bench, parse_bench, NetlistStats};
use cipherlock::sat::check_equivalence;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cipherlock(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_cipherlock"))
        .args(args)
        .env_remove("CIPHERLOCK_KEY_PREFIX")
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exited"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Dir {
        Dir(TempDir::new().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.path(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn stats_of(path: &Path) -> NetlistStats {
    let r = cipherlock(&["stats", p(path), "--json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn nok_line(stdout: &str) -> usize {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix("nok: "))
        .expect("nok printed")
        .parse()
        .unwrap()
}

#[test]
fn gen_cipher_writes_the_unrolled_interface() {
    let d = Dir::new();
    let full = d.path("simon.bench");
    let r = cipherlock(&["gen-cipher", "simon-32-64-32", "-o", p(&full)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let s = stats_of(&full);
    assert_eq!((s.inputs, s.outputs), (96, 32));

    let fixed = d.path("simon_x.bench");
    let r = cipherlock(&["gen-cipher", "simon-32-64-32", "-o", p(&fixed), "--fix-x", "0x00000000"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(stats_of(&fixed).inputs, 64);

    let r = cipherlock(&["kat-check", "--circuit", p(&full), "--cipher", "simon-32-64-32"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("PASS simon-32-64-32"));
}

#[test]
fn gen_cipher_rejects_bad_specs_and_widths() {
    let d = Dir::new();
    let out = d.path("c.bench");
    assert_eq!(cipherlock(&["gen-cipher", "simon-33-64-32", "-o", p(&out)]).code, 2);
    let r = cipherlock(&["gen-cipher", "simon-32-64-32", "-o", p(&out), "--fix-x", "0x123456789"]);
    assert_eq!(r.code, 2);
}

#[test]
fn builtin_known_answers_pass() {
    let r = cipherlock(&["kat-check"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(!r.stdout.contains("FAIL"));
}

#[test]
fn compound_lock_reports_the_key_count() {
    let d = Dir::new();
    let bench = d.file("b.bench", &emit_bench(&b_class(1)));
    let out = d.path("locked.bench");
    let r = cipherlock(&["lock", "compound", p(&bench), "-o", p(&out), "--seed", "3", "--m", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rec = LockRecord::from_json(&fs::read_to_string(d.path("locked.json")).unwrap()).unwrap();
    let lut_bits: usize = rec.luts.iter().map(|l| 1usize << l.leaves.len()).sum();
    assert_eq!(nok_line(&r.stdout), 64 + lut_bits);
    assert_eq!(stats_of(&out).keys, 64 + lut_bits);
    assert!(r.stdout.contains("gates: "));
}

#[test]
fn ttlock_adds_one_key_input_per_protected_input() {
    let d = Dir::new();
    let bench = d.path("present.bench");
    assert_eq!(cipherlock(&["gen-cipher", "present-64-128-3", "-o", p(&bench)]).code, 0);
    let out = d.path("tt.bench");
    let r = cipherlock(&["lock", "ttlock", p(&bench), "-o", p(&out), "--seed", "1", "--width", "128"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(nok_line(&r.stdout), 128);
    assert_eq!(stats_of(&out).keys, 128);
}

#[test]
fn compound_lock_on_a_tiny_circuit_is_ineligible() {
    let d = Dir::new();
    let bench = d.file("maj.bench", MAJORITY_BENCH);
    let out = d.path("m.bench");
    let r = cipherlock(&["lock", "compound", p(&bench), "-o", p(&out), "--seed", "1"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("32"), "{}", r.stderr);
    assert!(!out.exists());
}

#[test]
fn lock_requires_a_seed() {
    let d = Dir::new();
    let bench = d.file("maj.bench", MAJORITY_BENCH);
    let r = cipherlock(&["lock", "xor", p(&bench), "-o", p(&d.path("x.bench")), "--keys", "2"]);
    assert_eq!(r.code, 2);
}

#[test]
fn sat_attack_recovers_an_xor_lock() {
    let d = Dir::new();
    let orig = b_class(0);
    let bench = d.file("b.bench", &emit_bench(&orig));
    let locked = d.path("x.bench");
    let r = cipherlock(&["lock", "xor", p(&bench), "-o", p(&locked), "--seed", "2", "--keys", "128"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = d.path("r.json");
    let r = cipherlock(&["attack", "sat", p(&locked), "--oracle", p(&bench), "-o", p(&report)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = AttackReport::from_json(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep.outcome, Outcome::KeyRecovered);
    let key = rep.key.unwrap();
    let lk = parse_bench(&fs::read_to_string(&locked).unwrap()).unwrap();
    assert!(check_equivalence(&orig, &lk, Some(key.lsb_first())).unwrap().is_equivalent());

    let r = cipherlock(&["verify", p(&bench), p(&locked), "--key", &key.to_bin()]);
    assert_eq!((r.code, r.stdout.trim()), (0, "Equivalent"));
}

#[test]
fn removal_then_algebraic_through_the_command_line() {
    let d = Dir::new();
    let orig = b_class(2);
    let bench = d.file("b.bench", &emit_bench(&orig));
    let locked = d.path("cx.bench");
    let r = cipherlock(&[
        "lock", "cipher-xor", p(&bench), "-o", p(&locked), "--seed", "5", "--cipher", "simon-32-64-4",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let report = d.path("removal.json");
    let extracted = d.path("extracted.bench");
    let r = cipherlock(&[
        "attack", "removal", p(&locked), "--oracle", p(&bench), "-o", p(&report), "--extracted", p(&extracted),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let ex = parse_bench(&fs::read_to_string(&extracted).unwrap()).unwrap();
    assert!(check_equivalence(&orig, &ex, None).unwrap().is_equivalent());

    let alg = d.path("alg.json");
    let r = cipherlock(&[
        "attack", "algebraic", p(&locked), "--removal-report", p(&report), "--cipher", "simon-32-64-4", "-o",
        p(&alg),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = AttackReport::from_json(&fs::read_to_string(&alg).unwrap()).unwrap();
    assert_eq!(rep.outcome, Outcome::KeyRecovered);
}

#[test]
fn algebraic_without_a_removal_report_is_not_applicable() {
    let d = Dir::new();
    let bench = d.file("maj.bench", MAJORITY_BENCH);
    let locked = d.path("x.bench");
    assert_eq!(cipherlock(&["lock", "xor", p(&bench), "-o", p(&locked), "--seed", "0", "--keys", "2"]).code, 0);
    let r = cipherlock(&["attack", "algebraic", p(&locked)]);
    assert_eq!(r.code, 1);
    let rep = AttackReport::from_json(&r.stdout).unwrap();
    assert_eq!(rep.outcome, Outcome::NotApplicable);
}

#[test]
fn attack_budget_exhaustion_is_inconclusive() {
    let d = Dir::new();
    let bench = d.file("b.bench", &emit_bench(&b_class(0)));
    let locked = d.path("cx.bench");
    let r = cipherlock(&["lock", "cipher-xor", p(&bench), "-o", p(&locked), "--seed", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = cipherlock(&["attack", "sat", p(&locked), "--oracle", p(&bench), "--conflicts", "500"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert_eq!(cipherlock(&["attack", "sat", p(&locked), "--oracle", p(&bench), "--conflicts", "0"]).code, 2);
}

#[test]
fn attacks_reject_mismatched_interfaces() {
    let d = Dir::new();
    let maj = d.file("maj.bench", MAJORITY_BENCH);
    let other = d.file("b.bench", &emit_bench(&b_class(0)));
    let locked = d.path("x.bench");
    assert_eq!(cipherlock(&["lock", "xor", p(&maj), "-o", p(&locked), "--seed", "0", "--keys", "2"]).code, 0);
    let r = cipherlock(&["attack", "sat", p(&locked), "--oracle", p(&other)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("interface"), "{}", r.stderr);
    assert_eq!(cipherlock(&["attack", "sat", p(&locked)]).code, 2);
    assert_eq!(cipherlock(&["attack", "guess", p(&locked), "--oracle", p(&maj)]).code, 2);
}

#[test]
fn verify_prints_a_confirmed_counterexample_for_a_wrong_key() {
    let d = Dir::new();
    let bench = d.file("b.bench", &emit_bench(&b_class(0)));
    let locked = d.path("l.bench");
    assert_eq!(cipherlock(&["lock", "anti-sat", p(&bench), "-o", p(&locked), "--seed", "4", "--width", "8"]).code, 0);
    let record = d.path("l.json");
    let r = cipherlock(&["verify", p(&bench), p(&locked), "--record", p(&record)]);
    assert_eq!((r.code, r.stdout.trim()), (0, "Equivalent"));

    let rec = LockRecord::from_json(&fs::read_to_string(&record).unwrap()).unwrap();
    let mut key = rec.key.clone();
    key.flip(0);
    let r = cipherlock(&["verify", p(&bench), p(&locked), "--key", &key.to_bin()]);
    assert_eq!(r.code, 1);
    let line = |tag: &str| {
        r.stdout
            .lines()
            .find_map(|l| l.strip_prefix(tag))
            .map(|s| s.trim().to_string())
            .unwrap()
    };
    assert!(r.stdout.starts_with("Counterexample"));
    let x = line("inputs:");
    let (want, got) = (line("original:"), line("locked:"));
    assert_ne!(want, got);

    let sim = |circuit: &Path, keys: Option<&str>| {
        let mut args = vec!["simulate", p(circuit), "--inputs", x.as_str()];
        if let Some(k) = keys {
            args.extend(["--keys", k]);
        }
        let r = cipherlock(&args);
        assert_eq!(r.code, 0, "{}", r.stderr);
        r.stdout.split(" -> ").nth(1).unwrap().trim().to_string()
    };
    assert_eq!(sim(&bench, None), want);
    assert_eq!(sim(&locked, Some(&key.to_bin())), got);
}

#[test]
fn verify_rejects_a_key_of_the_wrong_length() {
    let d = Dir::new();
    let bench = d.file("maj.bench", MAJORITY_BENCH);
    let locked = d.path("x.bench");
    assert_eq!(cipherlock(&["lock", "xor", p(&bench), "-o", p(&locked), "--seed", "0", "--keys", "2"]).code, 0);
    let r = cipherlock(&["verify", p(&bench), p(&locked), "--key", "011"]);
    assert_eq!(r.code, 2);
}

#[test]
fn stats_show_the_majority_gate_histogram() {
    let d = Dir::new();
    let bench = d.file("maj.bench", MAJORITY_BENCH);
    let r = cipherlock(&["stats", p(&bench)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("  AND: 3"));
    assert!(r.stdout.contains("  OR: 1"));
    assert!(r.stdout.contains("gates: 4"));
}

#[test]
fn simulate_majority_and_missing_keys() {
    let d = Dir::new();
    let bench = d.file("maj.bench", MAJORITY_BENCH);
    let r = cipherlock(&["simulate", p(&bench), "--inputs", "0b110", "--inputs", "0b100"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.stdout, "0b110 -> 1\n0b100 -> 0\n");
    assert_eq!(cipherlock(&["simulate", p(&bench), "--inputs", "0b1100"]).code, 2);

    let locked = d.path("x.bench");
    assert_eq!(cipherlock(&["lock", "xor", p(&bench), "-o", p(&locked), "--seed", "0", "--keys", "2"]).code, 0);
    let r = cipherlock(&["simulate", p(&locked), "--inputs", "0b110"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("keyinput0, keyinput1"), "{}", r.stderr);
}

#[test]
fn key_prefix_comes_from_the_environment() {
    let d = Dir::new();
    let bench = d.file("k.bench", "INPUT(a)\nINPUT(lk0)\nOUTPUT(y)\ny = XOR(a, lk0)\n");
    let stats = |prefix: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_cipherlock"));
        c.args(["stats", p(&bench), "--json"]);
        match prefix {
            Some(v) => c.env("CIPHERLOCK_KEY_PREFIX", v),
            None => c.env_remove("CIPHERLOCK_KEY_PREFIX"),
        };
        let out = c.output().unwrap();
        serde_json::from_slice::<NetlistStats>(&out.stdout).unwrap()
    };
    assert_eq!(stats(None).keys, 0);
    assert_eq!(stats(Some("lk")).keys, 1);
}

#[test]
fn transcript_stands_in_for_the_oracle() {
    let d = Dir::new();
    let bench = d.file("maj.bench", MAJORITY_BENCH);
    let transcript = d.path("t.json");
    let mut args = vec!["simulate", p(&bench), "--transcript-out", p(&transcript)];
    let all: Vec<String> = (0..8).map(|i| format!("0b{i:03b}")).collect();
    for v in &all {
        args.extend(["--inputs", v.as_str()]);
    }
    assert_eq!(cipherlock(&args).code, 0);
    let locked = d.path("x.bench");
    assert_eq!(cipherlock(&["lock", "xor", p(&bench), "-o", p(&locked), "--seed", "1", "--keys", "2"]).code, 0);
    let r = cipherlock(&["attack", "sat", p(&locked), "--transcript", p(&transcript), "--probes", "8"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn identical_seeds_give_identical_files() {
    let d = Dir::new();
    let bench = d.file("orig.bench", &emit_bench(&b_class(0)));
    let run = |tag: &str| {
        let locked = d.path(&format!("{tag}.bench"));
        let r = cipherlock(&["lock", "ttlock", p(&bench), "-o", p(&locked), "--seed", "9", "--width", "8"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let report = d.path(&format!("{tag}.report.json"));
        let r = cipherlock(&["attack", "brute-force", p(&locked), "--oracle", p(&bench), "-o", p(&report)]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        [locked, d.path(&format!("{tag}.json")), report].map(|f| fs::read(f).unwrap())
    };
    assert_eq!(run("a"), run("b"));
    let rec = LockRecord::from_json(&fs::read_to_string(d.path("a.json")).unwrap()).unwrap();
    let rep = AttackReport::from_json(&fs::read_to_string(d.path("a.report.json")).unwrap()).unwrap();
    assert_eq!(rep.correct_keys, vec![rec.key]);
    assert_eq!(rep.correct_keys[0].len(), 8);
}
