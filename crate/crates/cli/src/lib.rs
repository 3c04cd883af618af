//! `tqps`: command-line driver for the verification suites and exporters.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};
use tqps_core::classical::{
    classical_freeness, lattice_l, lattice_r, psi_overlap, random_overlap_point, transition, ClassicalOracle,
    TRANSITION_TOL,
};
use tqps_core::gluing::{cocycle_check, distinct_triples, kernel_image_check, psi_check, CheckReport};
use tqps_core::multipullback::{kernel_lattice, verify_freeness, DEFAULT_SAMPLES};
use tqps_core::order_lattice::{
    birkhoff_transform, fdl_enumerate, free_lattice, upper_set_lattice, FiniteLattice, LatticeOracle, Poset,
};
use tqps_core::sampling::{rng_for, DEFAULT_SEED};

pub const SCHEMA: u32 = 1;
const MAX_N: usize = 3;
const MAX_GENERATORS: usize = 5;
const MAX_BIRKHOFF_POSET: usize = 8;
const DEDEKIND: [usize; 5] = [3, 6, 20, 168, 7581];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HasseTarget {
    Fdl,
    Classical,
    Kernels,
}

#[derive(Parser, Debug)]
#[command(name = "tqps", version, about = "Verify the Toeplitz quantum projective space construction")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Print the map from results to suites and tests.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free distributive lattices.
    Fdl {
        #[command(subcommand)]
        cmd: FdlCmd,
    },
    /// Birkhoff representation.
    Birkhoff {
        #[command(subcommand)]
        cmd: BirkhoffCmd,
    },
    /// Verification suites for the quantum construction.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// The classical covering of CP^N.
    Classical {
        #[command(subcommand)]
        cmd: ClassicalCmd,
    },
    /// Exporters.
    Export {
        #[command(subcommand)]
        cmd: ExportCmd,
    },
}

#[derive(Subcommand, Debug)]
enum FdlCmd {
    /// Enumerate the free distributive lattice.
    Enumerate {
        #[arg(long)]
        generators: usize,
    },
}

#[derive(Subcommand, Debug)]
enum BirkhoffCmd {
    /// Recover random posets from their lattices of upper sets.
    Roundtrip {
        #[arg(long)]
        poset_size: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Ψ∘Ψ = id, closed form against stepwise evaluation, Ψ_ij inverses.
    Psi {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Cocycle condition for φ on all triples of distinct indices.
    Cocycle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Kernel-image identities on all triples of distinct indices.
    KernelImages {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Freeness of the lattice generated by the kernels of the projections.
    Freeness {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ClassicalCmd {
    /// The isomorphism between antichains and unions of chart intersections.
    Lattice {
        #[arg(long)]
        n: usize,
    },
    /// Transition maps against chart-map composites.
    Transitions {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum ExportCmd {
    /// Hasse diagram of a lattice.
    Hasse {
        #[arg(long, value_enum)]
        target: HasseTarget,
        /// N for the classical and kernel lattices.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Generator count for the free lattice.
        #[arg(long, default_value_t = 3)]
        generators: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Suite {
    List,
    FdlEnumerate,
    BirkhoffRoundtrip { trials: usize },
    VerifyPsi,
    VerifyCocycle,
    VerifyKernelImages,
    VerifyFreeness,
    ClassicalLattice,
    ClassicalTransitions { trials: usize },
    ExportHasse { target: HasseTarget },
}

/// Parsed and validated invocation. `n` is the generator count for
/// `fdl enumerate`, the poset size for `birkhoff roundtrip`, otherwise `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Suite,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn bounded(what: &str, value: usize, lo: usize, hi: usize) -> Result<(), String> {
    if value < lo || value > hi {
        return Err(format!("{what} must be in {lo}..={hi}, got {value}"));
    }
    Ok(())
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<Self, String> {
        let (command, n, seed, samples) = match cli.command {
            None if cli.list => (Suite::List, 0, 0, 0),
            None => return Err("a subcommand or --list is required".into()),
            Some(Command::Fdl { cmd: FdlCmd::Enumerate { generators } }) => (Suite::FdlEnumerate, generators, 0, 0),
            Some(Command::Birkhoff { cmd: BirkhoffCmd::Roundtrip { poset_size, trials, seed } }) => {
                (Suite::BirkhoffRoundtrip { trials }, poset_size, seed, trials)
            }
            Some(Command::Verify { cmd }) => match cmd {
                VerifyCmd::Psi { n, samples, seed } => (Suite::VerifyPsi, n, seed, samples),
                VerifyCmd::Cocycle { n, samples, seed } => (Suite::VerifyCocycle, n, seed, samples),
                VerifyCmd::KernelImages { n, samples, seed } => (Suite::VerifyKernelImages, n, seed, samples),
                VerifyCmd::Freeness { n, seed, samples } => (Suite::VerifyFreeness, n, seed, samples),
            },
            Some(Command::Classical { cmd }) => match cmd {
                ClassicalCmd::Lattice { n } => (Suite::ClassicalLattice, n, 0, 0),
                ClassicalCmd::Transitions { n, trials, seed } => {
                    (Suite::ClassicalTransitions { trials }, n, seed, trials)
                }
            },
            Some(Command::Export { cmd: ExportCmd::Hasse { target, n, generators, seed, samples } }) => {
                let size = if target == HasseTarget::Fdl { generators } else { n };
                (Suite::ExportHasse { target }, size, seed, samples)
            }
        };
        let config = RunConfig { command, n, seed, samples, output: cli.output, format: cli.format };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), String> {
        match &self.command {
            Suite::List => Ok(()),
            Suite::FdlEnumerate => bounded("--generators", self.n, 1, MAX_GENERATORS),
            Suite::BirkhoffRoundtrip { .. } => bounded("--poset-size", self.n, 1, MAX_BIRKHOFF_POSET),
            Suite::VerifyPsi | Suite::VerifyFreeness => bounded("--n", self.n, 1, MAX_N),
            Suite::VerifyCocycle | Suite::VerifyKernelImages => bounded("--n", self.n, 2, MAX_N),
            Suite::ClassicalLattice | Suite::ClassicalTransitions { .. } => bounded("--n", self.n, 1, MAX_N),
            Suite::ExportHasse { target: HasseTarget::Fdl } => {
                bounded("--generators", self.n, 1, tqps_core::order_lattice::MAX_TABLE_GENERATORS)
            }
            Suite::ExportHasse { .. } => bounded("--n", self.n, 1, MAX_N),
        }?;
        let dot_ok = matches!(self.command, Suite::ExportHasse { .. } | Suite::ClassicalLattice);
        if self.format == Format::Dot && !dot_ok {
            return Err("--format dot is only available for `export hasse` and `classical lattice`".into());
        }
        Ok(())
    }
}

/// Result of one suite, in every output format.
pub struct Outcome {
    pub passed: bool,
    pub json: Value,
    pub text: String,
    pub dot: Option<String>,
}

fn report(command: &str, passed: bool, mut body: Value, text: String) -> Outcome {
    let obj = body.as_object_mut().expect("report body is an object");
    obj.insert("schema".into(), json!(SCHEMA));
    obj.insert("command".into(), json!(command));
    obj.insert("passed".into(), json!(passed));
    Outcome { passed, json: body, text, dot: None }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check_table(title: &str, reports: &[CheckReport]) -> String {
    let passed = reports.iter().all(CheckReport::passed);
    let mut s = format!("{title}: {}\n", status(passed));
    for r in reports {
        s.push_str(&format!(
            "  {}  {:<9} ({},{},{})  samples {:>5}  failures {}\n",
            status(r.passed()),
            r.case,
            r.triple[0],
            r.triple[1],
            r.triple[2],
            r.samples,
            r.failures.len()
        ));
        for f in r.failures.iter().take(3) {
            s.push_str(&format!("      {f}\n"));
        }
    }
    s
}

type CoreResult<T> = tqps_core::Result<T>;

fn run_fdl(c: &RunConfig) -> CoreResult<Outcome> {
    let elems = fdl_enumerate(c.n)?;
    let expected = DEDEKIND[c.n - 1] - 2;
    let passed = elems.len() == expected;
    let names: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    let mut text = format!("{} elements\n", elems.len());
    for e in &names {
        text.push_str(&format!("  {e}\n"));
    }
    let body = json!({ "generators": c.n, "count": elems.len(), "expected": expected, "elements": names });
    Ok(report("fdl enumerate", passed, body, text))
}

fn run_birkhoff(c: &RunConfig, trials: usize) -> CoreResult<Outcome> {
    let mut failures = Vec::new();
    for t in 0..trials {
        let mut rng = rng_for(c.seed, &[7, c.n as u64, t as u64]);
        let p = rng.gen_range(0.1..0.7);
        let poset = Poset::random(&mut rng, c.n, p)?;
        let (_, lattice) = upper_set_lattice(&poset)?;
        let (recovered, _) = birkhoff_transform(&lattice)?;
        if !recovered.is_isomorphic(&poset) {
            failures.push(json!({ "trial": t, "covers": poset.covers() }));
        }
    }
    let passed = failures.is_empty();
    let text = format!(
        "birkhoff roundtrip: {} ({} trials on {} elements, {} failures)\n",
        status(passed),
        trials,
        c.n,
        failures.len()
    );
    let body = json!({ "poset_size": c.n, "trials": trials, "seed": c.seed, "failures": failures });
    Ok(report("birkhoff roundtrip", passed, body, text))
}

fn reports_outcome(command: &str, title: &str, c: &RunConfig, reports: Vec<CheckReport>) -> Outcome {
    let passed = reports.iter().all(CheckReport::passed);
    let text = check_table(title, &reports);
    let body = json!({ "N": c.n, "seed": c.seed, "samples": c.samples, "reports": reports });
    report(command, passed, body, text)
}

fn run_psi(c: &RunConfig) -> CoreResult<Outcome> {
    let r = psi_check(c.n, c.samples, c.seed)?;
    Ok(reports_outcome("verify psi", "Ψ∘Ψ = id", c, vec![r]))
}

fn run_cocycle(c: &RunConfig) -> CoreResult<Outcome> {
    let reports = distinct_triples(c.n)
        .into_iter()
        .map(|[i, j, k]| cocycle_check(c.n, i, j, k, c.samples, c.seed))
        .collect::<CoreResult<Vec<_>>>()?;
    Ok(reports_outcome("verify cocycle", "cocycle condition", c, reports))
}

fn run_kernel_images(c: &RunConfig) -> CoreResult<Outcome> {
    let reports = distinct_triples(c.n)
        .into_iter()
        .map(|[i, j, k]| kernel_image_check(c.n, i, j, k, c.samples, c.seed))
        .collect::<CoreResult<Vec<_>>>()?;
    Ok(reports_outcome("verify kernel-images", "kernel-image identities", c, reports))
}

fn run_freeness(c: &RunConfig) -> CoreResult<Outcome> {
    let r = verify_freeness(c.n, c.seed, c.samples)?;
    let passed = r.is_free() && r.lattice.birkhoff_isomorphic_to_free && !r.lattice.control.is_free();
    let mut text = format!("freeness of the kernel lattice, N = {}: {}\n", c.n, status(passed));
    text.push_str(&format!("  verdict: {}\n", r.verdict));
    text.push_str(&format!("  strict order witnesses: {}\n", r.lemma34.len()));
    let failing = r.lemma35.iter().filter(|e| !e.passed()).count();
    text.push_str(&format!(
        "  irreducibility evidence: {} cases, {} samples each, {failing} failing\n",
        r.lemma35.len(),
        r.samples
    ));
    text.push_str(&format!(
        "  generated lattice: {} elements, {} meet irreducibles, Birkhoff-isomorphic to free: {}\n",
        r.lattice.size,
        r.lattice.meet_irreducibles.len(),
        r.lattice.birkhoff_isomorphic_to_free
    ));
    text.push_str(&format!("  duplicated-generator control: {}\n", r.lattice.control));
    let mut body = serde_json::to_value(&r).expect("report serializes");
    body.as_object_mut().expect("object").remove("schema");
    Ok(report("verify freeness", passed, body, text))
}

fn run_classical_lattice(c: &RunConfig) -> CoreResult<Outcome> {
    let oracle = ClassicalOracle { n: c.n };
    let mut rows = Vec::new();
    let mut roundtrip = true;
    for x in fdl_enumerate(c.n + 1)? {
        let v = lattice_r(&x);
        let back = lattice_l(&v)?;
        roundtrip &= back == x;
        rows.push(json!({ "antichain": x.to_string(), "covering_set": oracle.describe(&v), "roundtrip": back == x }));
    }
    let check = classical_freeness(c.n)?;
    let passed = roundtrip && check.verdict.is_free();
    let mut text = format!("classical covering lattice, N = {}: {}\n", c.n, status(passed));
    text.push_str(&format!("  L∘R = id on all {} antichains: {roundtrip}\n", rows.len()));
    text.push_str(&format!("  freeness criterion: {}\n", check.verdict));
    for r in &rows {
        text.push_str(&format!("  {}  ↦  {}\n", r["antichain"].as_str().unwrap_or(""), r["covering_set"].as_str().unwrap_or("")));
    }
    let body = json!({ "N": c.n, "table": rows, "verdict": check.verdict });
    let mut out = report("classical lattice", passed, body, text);
    out.dot = check.lattice.map(|l| l.to_dot("classical"));
    Ok(out)
}

fn run_transitions(c: &RunConfig, trials: usize) -> CoreResult<Outcome> {
    let mut rows = Vec::new();
    let mut passed = true;
    let mut text = String::new();
    for i in 0..=c.n {
        for j in i + 1..=c.n {
            let mut rng = rng_for(c.seed, &[9, c.n as u64, i as u64, j as u64]);
            let mut worst: f64 = 0.0;
            for _ in 0..trials {
                let x = random_overlap_point(&mut rng, c.n, i, j);
                let q = transition(&psi_overlap(i, j, &x)?, i, j)?;
                worst = worst.max(q.distance(&psi_overlap(j, i, &x)?));
            }
            let ok = worst <= TRANSITION_TOL;
            passed &= ok;
            text.push_str(&format!("  {}  Υ_{i}{j}  max error {worst:.3e}\n", status(ok)));
            rows.push(json!({ "i": i, "j": j, "trials": trials, "max_error": worst, "passed": ok }));
        }
    }
    let text = format!("classical transitions, N = {}: {}\n{text}", c.n, status(passed));
    let body = json!({ "N": c.n, "seed": c.seed, "tolerance": TRANSITION_TOL, "pairs": rows });
    Ok(report("classical transitions", passed, body, text))
}

fn run_export(c: &RunConfig, target: HasseTarget) -> CoreResult<Outcome> {
    let (name, lattice): (String, FiniteLattice) = match target {
        HasseTarget::Fdl => (format!("fdl{}", c.n), free_lattice(c.n)?.1),
        HasseTarget::Classical => {
            let check = classical_freeness(c.n)?;
            let l = check.lattice.ok_or_else(|| tqps_core::Error::InvalidLattice(check.verdict.to_string()))?;
            (format!("classical{}", c.n), l)
        }
        HasseTarget::Kernels => (format!("kernels{}", c.n), kernel_lattice(c.n, c.seed, c.samples)?),
    };
    let dot = lattice.to_dot(&name);
    let mut body = lattice.to_json();
    body.as_object_mut().expect("object").insert("name".into(), json!(name));
    let mut out = report("export hasse", true, body, dot.clone());
    out.dot = Some(dot);
    Ok(out)
}

/// Map from the verified statements to suites and tests.
pub fn lemma_map() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        (
            "freeness criterion: pure joins meet irreducible and ordered by inclusion",
            "acceptance criterion 3",
            "order_lattice::check_freeness_criterion; tests/lattice_invariants.rs",
        ),
        ("Birkhoff representation", "birkhoff roundtrip; acceptance criterion 1", "tests/lattice_invariants.rs"),
        ("size of the free distributive lattice", "fdl enumerate; acceptance criterion 2", "tests/lattice_invariants.rs"),
        (
            "classical covering lattice is free; transition maps",
            "classical lattice, classical transitions; acceptance criterion 9",
            "tests/classical_invariants.rs",
        ),
        ("Ψ∘Ψ = id", "verify psi; acceptance criterion 4", "tests/gluing_invariants.rs"),
        ("kernel images agree on overlaps", "verify kernel-images; acceptance criterion 5", "tests/gluing_invariants.rs"),
        ("cocycle condition for φ", "verify cocycle; acceptance criterion 6", "tests/gluing_invariants.rs"),
        (
            "kernel intersections ordered strictly by inclusion",
            "verify freeness (lemma34); acceptance criterion 7",
            "tests/multipullback_invariants.rs",
        ),
        (
            "kernel intersections are sum irreducible",
            "verify freeness (lemma35); acceptance criterion 7",
            "tests/multipullback_invariants.rs",
        ),
        ("kernels generate a free distributive lattice", "verify freeness; acceptance criterion 7", "tests/acceptance.rs"),
        ("N = 1 is the mirror quantum sphere", "acceptance criterion 8", "tests/multipullback_invariants.rs"),
        ("Toeplitz products with finite-rank corrections", "acceptance criterion 10", "tests/hopf_toeplitz.rs"),
    ]
}

fn run_list() -> Outcome {
    let rows = lemma_map();
    let mut text = String::new();
    for (what, suite, tests) in &rows {
        text.push_str(&format!("{what}\n    suite: {suite}\n    tests: {tests}\n"));
    }
    let body = json!({
        "map": rows.iter().map(|(w, s, t)| json!({ "statement": w, "suite": s, "tests": t })).collect::<Vec<_>>()
    });
    report("list", true, body, text)
}

pub fn execute(c: &RunConfig) -> CoreResult<Outcome> {
    match &c.command {
        Suite::List => Ok(run_list()),
        Suite::FdlEnumerate => run_fdl(c),
        Suite::BirkhoffRoundtrip { trials } => run_birkhoff(c, *trials),
        Suite::VerifyPsi => run_psi(c),
        Suite::VerifyCocycle => run_cocycle(c),
        Suite::VerifyKernelImages => run_kernel_images(c),
        Suite::VerifyFreeness => run_freeness(c),
        Suite::ClassicalLattice => run_classical_lattice(c),
        Suite::ClassicalTransitions { trials } => run_transitions(c, *trials),
        Suite::ExportHasse { target } => run_export(c, *target),
    }
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("TQPS_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| format!("TQPS_THREADS must be a positive integer, got {v:?}"))?;
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs the CLI and returns the exit code: 0 if every check passes, 1 on a
/// failed check or runtime error, 2 on a usage error.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let config = match RunConfig::from_cli(cli).and_then(|c| configure_threads().map(|_| c)) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let outcome = match execute(&config) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let rendered = match config.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json).expect("json") + "\n",
        Format::Text => outcome.text.clone(),
        Format::Dot => outcome.dot.clone().unwrap_or_default(),
    };
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return 1;
            }
            let _ = writeln!(out, "{}: report written to {}", status(outcome.passed), path.display());
        }
        None => {
            let _ = out.write_all(rendered.as_bytes());
        }
    }
    if outcome.passed {
        0
    } else {
        1
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
