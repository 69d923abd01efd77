use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cipherlock::attacks::{
    algebraic_attack, brute_force_key_search, removal_attack, sat_attack, AttackConfig, AttackKind, AttackReport,
    NetlistOracle, Oracle, Outcome, Transcript, TranscriptOracle,
};
use cipherlock::bits::Bits;
use cipherlock::ciphers::{
    build_unrolled_circuit, circuit_inputs, parse_known_answers, reference_encrypt, specialize_plaintext, CipherSpec,
    BUILTIN_KNOWN_ANSWERS,
};
use cipherlock::locking::{
    lock_antisat, lock_cipher_xor, lock_compound, lock_lut, lock_ttlock, lock_xor, random_pattern, LockRecord,
    LutConfig, LutPlacement,
};
use cipherlock::netlist::{
    emit_bench, parse_bench_with, simulate, stats, Assignment, BenchOptions, Netlist, WordSimulator,
    DEFAULT_KEY_PREFIX,
};
use cipherlock::sat::{check_equivalence, check_equivalence_with, Equivalence, KeyBinding, SolveBudget};

#[derive(Parser)]
#[command(name = "cipherlock", version, about = "Logic locking and attack toolkit for gate-level netlists")]
struct Cli {
    /// Name prefix that marks key inputs in bench files.
    #[arg(long, global = true, env = "CIPHERLOCK_KEY_PREFIX", default_value = DEFAULT_KEY_PREFIX)]
    key_prefix: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the unrolled combinational circuit of a block cipher.
    GenCipher {
        /// Cipher as family-bs-kl-rounds, e.g. simon-32-64-32.
        spec: CipherSpec,
        #[arg(short, long)]
        out: PathBuf,
        /// Fix the plaintext to this hex value, leaving only key inputs.
        #[arg(long)]
        fix_x: Option<String>,
    },
    /// Lock a circuit and write the locked bench with its lock record.
    Lock(LockArgs),
    /// Run an attack on a locked circuit.
    Attack(AttackArgs),
    /// Check a locked circuit under a key against the original.
    Verify {
        original: PathBuf,
        locked: PathBuf,
        /// Key as binary (MSB = last key input) or 0x-hex.
        #[arg(long, conflicts_with = "record", required_unless_present = "record")]
        key: Option<String>,
        /// Lock record holding the key.
        #[arg(long)]
        record: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Print gate counts and interface sizes.
    Stats {
        circuit: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a circuit on input vectors.
    Simulate {
        circuit: PathBuf,
        /// Input vector (binary or 0x-hex, bit i drives primary input i); repeatable.
        #[arg(long = "inputs", required = true)]
        inputs: Vec<String>,
        /// Key vector, bit i drives key input i.
        #[arg(long)]
        keys: Option<String>,
        /// Also write the vectors and responses as an oracle transcript.
        #[arg(long)]
        transcript_out: Option<PathBuf>,
    },
    /// Check the reference encryptor and cipher circuits on known-answer vectors.
    KatCheck {
        /// Known-answer file (`spec key plaintext ciphertext` per line); built-in vectors by default.
        #[arg(long)]
        vectors: Option<PathBuf>,
        /// Check this bench instead of a freshly built circuit; needs --cipher.
        #[arg(long, requires = "cipher")]
        circuit: Option<PathBuf>,
        #[arg(long)]
        cipher: Option<CipherSpec>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Xor,
    Lut,
    AntiSat,
    Ttlock,
    CipherXor,
    Compound,
}

#[derive(Args)]
struct LockArgs {
    #[arg(value_enum)]
    scheme: SchemeArg,
    circuit: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    /// Lock record path; defaults to the output path with a .json extension.
    #[arg(long)]
    record: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    /// Key gates for xor.
    #[arg(long, default_value_t = 128)]
    keys: usize,
    /// LUTs for lut.
    #[arg(long, default_value_t = 16)]
    count: usize,
    /// Protected inputs for ttlock and anti-sat.
    #[arg(long, default_value_t = 16)]
    width: usize,
    /// Protected pattern for ttlock; drawn from the seed when absent.
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, default_value = "simon-32-64-32")]
    cipher: CipherSpec,
    /// LUT size.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Place exactly this many LUTs in a compound lock instead of covering the boundary.
    #[arg(long)]
    forced: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackArg {
    Sat,
    Removal,
    Algebraic,
    BruteForce,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(value_enum)]
    attack: AttackArg,
    locked: PathBuf,
    /// Unlocked reference netlist answering queries.
    #[arg(long, conflicts_with = "transcript")]
    oracle: Option<PathBuf>,
    /// Recorded query transcript answering queries.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Report of a removal attack on the same circuit (algebraic).
    #[arg(long)]
    removal_report: Option<PathBuf>,
    /// Cipher used to label the algebraic report.
    #[arg(long)]
    cipher: Option<CipherSpec>,
    /// Report path; printed to stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Where to write the extracted design of a removal attack.
    #[arg(long)]
    extracted: Option<PathBuf>,
    /// Random oracle probes a result must agree on.
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    /// Conflict budget for the whole job.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    conflicts: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    time_limit: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> SolveBudget {
        SolveBudget {
            conflicts: self.conflicts,
            time: self.time_limit.map(Duration::from_secs),
        }
    }
}

/// Exit status classes: 1 negative result, 2 usage or input error, 3 inconclusive.
#[derive(Debug)]
enum Failure {
    Negative(String),
    Usage(String),
    Inconclusive(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Inconclusive(_) => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Result<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Negative(m) | Failure::Inconclusive(m) if m.is_empty() => {}
                Failure::Negative(m) | Failure::Usage(m) | Failure::Inconclusive(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let opts = BenchOptions {
        key_prefix: cli.key_prefix.clone(),
        ..BenchOptions::default()
    };
    match &cli.command {
        Command::GenCipher { spec, out, fix_x } => gen_cipher(spec, out, fix_x.as_deref()),
        Command::Lock(a) => lock(a, &opts),
        Command::Attack(a) => attack(a, &opts),
        Command::Verify {
            original,
            locked,
            key,
            record,
            budget,
        } => verify(&opts, original, locked, key.as_deref(), record.as_deref(), budget),
        Command::Stats { circuit, json } => print_stats(&read_netlist(circuit, &opts)?, *json),
        Command::Simulate {
            circuit,
            inputs,
            keys,
            transcript_out,
        } => simulate_vectors(&opts, circuit, inputs, keys.as_deref(), transcript_out.as_deref()),
        Command::KatCheck {
            vectors,
            circuit,
            cipher,
        } => kat_check(&opts, vectors.as_deref(), circuit.as_deref(), cipher.as_ref()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_netlist(path: &Path, opts: &BenchOptions) -> Result<Netlist> {
    parse_bench_with(&read(path)?, opts).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn summary(n: &Netlist) -> String {
    format!(
        "{} inputs, {} key inputs, {} outputs, {} gates",
        n.inputs().len(),
        n.keys().len(),
        n.outputs().len(),
        n.gates().len()
    )
}

fn gen_cipher(spec: &CipherSpec, out: &Path, fix_x: Option<&str>) -> Result<()> {
    let mut n = build_unrolled_circuit(spec);
    if let Some(x) = fix_x {
        let x = Bits::from_hex(x, spec.block_size()).map_err(usage)?;
        n = specialize_plaintext(&n, &x).map_err(usage)?;
    }
    write(out, &emit_bench(&n))?;
    println!("{spec}: {}", summary(&n));
    Ok(())
}

fn lock(a: &LockArgs, opts: &BenchOptions) -> Result<()> {
    let orig = read_netlist(&a.circuit, opts)?;
    let lut = |placement| LutConfig::new(a.m, placement).map_err(usage);
    let (locked, rec) = match a.scheme {
        SchemeArg::Xor => lock_xor(&orig, a.keys, a.seed),
        SchemeArg::Lut => lock_lut(&orig, &lut(LutPlacement::BoundaryCover)?, a.count, a.seed),
        SchemeArg::AntiSat => lock_antisat(&orig, a.width, a.seed),
        SchemeArg::Ttlock => {
            let pattern = match &a.pattern {
                Some(p) => Bits::parse_with_width(p, a.width).map_err(usage)?,
                None => random_pattern(a.width, a.seed),
            };
            lock_ttlock(&orig, a.width, &pattern, a.seed)
        }
        SchemeArg::CipherXor => lock_cipher_xor(&orig, &a.cipher, a.seed),
        SchemeArg::Compound => {
            let placement = match a.forced {
                Some(count) => LutPlacement::Forced { count },
                None => LutPlacement::BoundaryCover,
            };
            lock_compound(&orig, &a.cipher, &lut(placement)?, a.seed)
        }
    }
    .map_err(usage)?;
    match check_equivalence(&orig, &locked, Some(rec.key.lsb_first())).map_err(usage)? {
        Equivalence::Equivalent => {}
        _ => {
            return Err(Failure::Negative(
                "locked circuit is not equivalent to the original under its key; nothing written".into(),
            ))
        }
    }
    let record = a.record.clone().unwrap_or_else(|| a.out.with_extension("json"));
    write(&a.out, &emit_bench(&locked))?;
    write(&record, &rec.to_json())?;
    let (g0, g1) = (orig.gates().len(), locked.gates().len());
    println!("scheme: {}", rec.scheme.name());
    println!("nok: {}", rec.nok());
    println!(
        "gates: {g0} -> {g1} (+{}, {:+.1}%)",
        g1 as i64 - g0 as i64,
        100.0 * (g1 as f64 - g0 as f64) / g0.max(1) as f64
    );
    println!("verified: equivalent under the secret key");
    Ok(())
}

fn load_oracle(a: &AttackArgs, opts: &BenchOptions) -> Result<Option<Box<dyn Oracle>>> {
    if let Some(p) = &a.oracle {
        let n = read_netlist(p, opts)?;
        return Ok(Some(Box::new(NetlistOracle::new(n).map_err(usage)?)));
    }
    if let Some(p) = &a.transcript {
        let t = Transcript::from_json(&read(p)?).map_err(usage)?;
        return Ok(Some(Box::new(TranscriptOracle::new(&t).map_err(usage)?)));
    }
    Ok(None)
}

fn attack(a: &AttackArgs, opts: &BenchOptions) -> Result<()> {
    let locked = read_netlist(&a.locked, opts)?;
    let config = AttackConfig {
        budget: a.budget.budget(),
        probes: a.probes,
        seed: a.seed,
    };
    let oracle = load_oracle(a, opts)?;
    let need_oracle = || oracle.as_deref().ok_or_else(|| usage("this attack needs --oracle or --transcript"));
    let report = match a.attack {
        AttackArg::Sat => sat_attack(&locked, need_oracle()?, &config),
        AttackArg::Removal => removal_attack(&locked, need_oracle()?, &config),
        AttackArg::BruteForce => brute_force_key_search(&locked, need_oracle()?, &config),
        AttackArg::Algebraic => match &a.removal_report {
            Some(p) => {
                let removal = AttackReport::from_json(&read(p)?).map_err(usage)?;
                algebraic_attack(&locked, &removal, a.cipher.as_ref(), &config)
            }
            None => Ok(AttackReport::new(AttackKind::Algebraic, Outcome::NotApplicable)
                .with_note("no removal report given")),
        },
    }
    .map_err(usage)?;
    match &a.out {
        Some(p) => write(p, &report.to_json())?,
        None => println!("{}", report.to_json()),
    }
    if let (Some(p), Some(bench)) = (&a.extracted, &report.extracted_bench) {
        write(p, bench)?;
    }
    eprintln!("attack: {}", report.attack.name());
    eprintln!("outcome: {}", outcome_name(report.outcome));
    if let Some(k) = &report.key {
        eprintln!("key: {}", k.to_bin());
    }
    if let Some(n) = &report.note {
        eprintln!("note: {n}");
    }
    eprintln!(
        "iterations: {}, oracle queries: {}, conflicts: {}, wall time: {:.3} s",
        report.iterations,
        report.oracle_queries,
        report.conflicts,
        report.wall_time.as_secs_f64()
    );
    match report.outcome {
        Outcome::KeyRecovered | Outcome::DesignExtracted => Ok(()),
        Outcome::NoSolution if report.note.as_deref().is_some_and(|n| n.starts_with("budget exhausted")) => {
            Err(Failure::Inconclusive(String::new()))
        }
        Outcome::NoSolution | Outcome::NotApplicable => Err(Failure::Negative(String::new())),
    }
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::KeyRecovered => "key-recovered",
        Outcome::DesignExtracted => "design-extracted",
        Outcome::NoSolution => "no-solution",
        Outcome::NotApplicable => "not-applicable",
    }
}

fn verify(
    opts: &BenchOptions,
    original: &Path,
    locked: &Path,
    key: Option<&str>,
    record: Option<&Path>,
    budget: &BudgetArgs,
) -> Result<()> {
    let orig = read_netlist(original, opts)?;
    let lck = read_netlist(locked, opts)?;
    let n = lck.keys().len();
    let key = match (key, record) {
        (Some(k), _) => Bits::parse_with_width(k, n).map_err(usage)?,
        (None, Some(p)) => LockRecord::from_json(&read(p)?).map_err(usage)?.key,
        (None, None) => return Err(usage("a key or a lock record is required")),
    };
    if key.len() != n {
        return Err(usage(format!("key has {} bits, circuit has {n} key inputs", key.len())));
    }
    let kb = KeyBinding::Fixed(key.lsb_first().to_vec());
    match check_equivalence_with(&orig, &lck, &KeyBinding::Free, &kb, &budget.budget()).map_err(usage)? {
        Equivalence::Equivalent => {
            println!("Equivalent");
            Ok(())
        }
        Equivalence::Counterexample(c) => {
            let bits = |v: &[bool]| Bits::from_lsb_first(v.to_vec()).to_bin();
            println!("Counterexample");
            println!("inputs:   {}", bits(&c.inputs));
            println!("original: {}", bits(&c.outputs_a));
            println!("locked:   {}", bits(&c.outputs_b));
            Err(Failure::Negative(String::new()))
        }
        Equivalence::Inconclusive => {
            println!("Inconclusive");
            Err(Failure::Inconclusive("budget exhausted".into()))
        }
    }
}

fn print_stats(n: &Netlist, json: bool) -> Result<()> {
    let s = stats(n);
    if json {
        println!("{}", serde_json::to_string_pretty(&s).expect("stats serialize"));
        return Ok(());
    }
    println!("inputs: {}", s.inputs);
    println!("key inputs: {}", s.keys);
    println!("outputs: {}", s.outputs);
    println!("gates: {}", s.gates);
    println!("depth: {}", s.depth);
    for (kind, count) in &s.gates_by_kind {
        println!("  {kind}: {count}");
    }
    Ok(())
}

fn simulate_vectors(
    opts: &BenchOptions,
    circuit: &Path,
    inputs: &[String],
    keys: Option<&str>,
    transcript_out: Option<&Path>,
) -> Result<()> {
    let n = read_netlist(circuit, opts)?;
    let key = keys
        .map(|k| Bits::parse_with_width(k, n.keys().len()).map_err(usage))
        .transpose()?;
    let mut patterns = Vec::with_capacity(inputs.len());
    for text in inputs {
        let x = Bits::parse_with_width(text, n.inputs().len()).map_err(usage)?;
        let mut a = Assignment::from_pairs(n.inputs().iter().copied().zip(x.lsb_first().iter().copied()));
        if let Some(k) = &key {
            for (&kn, &v) in n.keys().iter().zip(k.lsb_first()) {
                a.set(kn, v);
            }
        }
        let out = simulate(&n, &a).map_err(usage)?;
        let y: Vec<bool> = n.outputs().iter().map(|&o| out.get(o).expect("outputs assigned")).collect();
        let y = Bits::from_lsb_first(y);
        let shown = if text.trim().starts_with("0x") { y.to_hex() } else { y.to_bin() };
        println!("{} -> {shown}", text.trim());
        patterns.push(x.lsb_first().to_vec());
    }
    if let Some(p) = transcript_out {
        if !n.keys().is_empty() && key.is_none() {
            return Err(usage("a transcript of a locked circuit needs --keys"));
        }
        let oracle = match &key {
            Some(k) => NetlistOracle::activated(&n, k.lsb_first()),
            None => NetlistOracle::new(n.clone()),
        }
        .map_err(usage)?;
        let t = Transcript::record(&oracle, &patterns).map_err(usage)?;
        write(p, &t.to_json())?;
    }
    Ok(())
}

fn kat_check(
    opts: &BenchOptions,
    vectors: Option<&Path>,
    circuit: Option<&Path>,
    cipher: Option<&CipherSpec>,
) -> Result<()> {
    let text = match vectors {
        Some(p) => read(p)?,
        None => BUILTIN_KNOWN_ANSWERS.to_string(),
    };
    let kats = parse_known_answers(&text).map_err(usage)?;
    let given = circuit.map(|p| read_netlist(p, opts)).transpose()?;
    let mut failed = 0;
    let mut checked = 0;
    for kat in &kats {
        if cipher.is_some_and(|c| *c != kat.spec) {
            continue;
        }
        let built;
        let n = match &given {
            Some(n) => n,
            None => {
                built = build_unrolled_circuit(&kat.spec);
                &built
            }
        };
        let reference = reference_encrypt(&kat.spec, &kat.key, &kat.plaintext).map_err(usage)?;
        let y = WordSimulator::new(n)
            .eval_bits(&circuit_inputs(&kat.key, &kat.plaintext), &[])
            .map_err(usage)?;
        let circuit_ok = Bits::from_msb_first(&y) == kat.ciphertext;
        let ok = reference == kat.ciphertext && circuit_ok;
        checked += 1;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {} key={} pt={} ct={} reference={} circuit={}",
            if ok { "PASS" } else { "FAIL" },
            kat.spec,
            kat.key.to_hex(),
            kat.plaintext.to_hex(),
            kat.ciphertext.to_hex(),
            if reference == kat.ciphertext { "ok" } else { "mismatch" },
            if circuit_ok { "ok" } else { "mismatch" },
        );
    }
    if checked == 0 {
        return Err(usage("no known-answer vectors for the selected cipher"));
    }
    println!("{}/{checked} vectors passed", checked - failed);
    if failed > 0 {
        return Err(Failure::Negative(format!("{failed} vectors failed")));
    }
    Ok(())
}
