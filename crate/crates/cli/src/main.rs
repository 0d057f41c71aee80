//! `leechkit`: command-line front end.
//!
//! Exit codes: 0 success or valid certificate, 1 a check failed, 2 the Weyl
//! search was exhausted, 3 malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use leechkit_core::borcherds::{self, LorentzianModel, WeylDiagnosis};
use leechkit_core::pipeline::{self, Outcome, PipelineOptions, PipelineRun, DEFAULT_HEIGHT_BOUND};
use leechkit_core::serial::{self, GroupDocument, LatticeDocument, VectorDocument};
use leechkit_core::{enumeration, fixtures, Error, GroupAction, Lattice};

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_MALFORMED: u8 = 3;

#[derive(Parser)]
#[command(name = "leechkit", version, about = "Exact lattice tools around the Leech lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certified lattice and write it as JSON plus a text summary.
    Build {
        target: BuildTarget,
        #[arg(long)]
        out: PathBuf,
    },
    /// Discriminant group and form of a lattice file.
    Disc { lattice: PathBuf },
    /// Short vectors of a positive definite lattice file.
    ShortVectors {
        lattice: PathBuf,
        #[arg(long)]
        bound: i64,
        /// Maximum number of vectors listed (all are counted).
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Weyl vector checks in the coordinate model.
    Weyl {
        #[command(subcommand)]
        command: WeylCommand,
    },
    /// Leech-root sampling around the standard Weyl vector.
    Conway {
        #[command(subcommand)]
        command: ConwayCommand,
    },
    /// Leech-pair verification.
    Pair {
        #[command(subcommand)]
        command: PairCommand,
    },
    /// The embedding construction.
    Pipeline {
        #[command(subcommand)]
        command: PipelineCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildTarget {
    Borcherds,
    Leech,
}

#[derive(Subcommand)]
enum WeylCommand {
    /// Check a vector given in model coordinates (26 entries, rationals allowed).
    Check { vector: PathBuf },
}

#[derive(Subcommand)]
enum ConwayCommand {
    Sample {
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PairCommand {
    Verify { lattice: PathBuf, group: PathBuf },
}

#[derive(Subcommand)]
enum PipelineCommand {
    Run {
        #[arg(long, conflicts_with = "input")]
        fixture: Option<String>,
        /// `S.json G.json`; S is a sublattice of a Leech lattice, or a rank-26
        /// witness whose basis rows are S followed by alpha.
        #[arg(long, num_args = 2, value_names = ["S", "G"], required_unless_present = "fixture")]
        input: Option<Vec<PathBuf>>,
        #[arg(long, default_value_t = DEFAULT_HEIGHT_BOUND)]
        bound: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure { code: EXIT_MALFORMED, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure { code: EXIT_CHECK_FAILED, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::Malformed(_) | Error::Shape(_) => Failure::malformed(e.to_string()),
            _ => Failure::check(e.to_string()),
        }
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Build { target, out } => cmd_build(target, &out),
        Command::Disc { lattice } => cmd_disc(&lattice),
        Command::ShortVectors { lattice, bound, limit } => cmd_short_vectors(&lattice, bound, limit),
        Command::Weyl { command: WeylCommand::Check { vector } } => cmd_weyl_check(&vector),
        Command::Conway { command: ConwayCommand::Sample { samples, seed } } => cmd_conway(samples, seed),
        Command::Pair { command: PairCommand::Verify { lattice, group } } => cmd_pair_verify(&lattice, &group),
        Command::Pipeline { command: PipelineCommand::Run { fixture, input, bound, seed, out } } => {
            cmd_pipeline(fixture, input, bound, seed, &out)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))
}

fn read_lattice(path: &Path) -> Result<Lattice, Failure> {
    let doc: LatticeDocument = serial::from_json(&read_text(path)?)?;
    Ok(doc.to_lattice()?)
}

fn read_group(path: &Path) -> Result<GroupAction, Failure> {
    let doc: GroupDocument = serial::from_json(&read_text(path)?)?;
    Ok(doc.to_action()?)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::check(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Failure::check(format!("cannot write {}: {e}", path.display())))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Stable plain-text summary of a lattice.
fn summary(l: &Lattice) -> Result<String, Failure> {
    let (p, q, z) = l.inertia();
    let min = if q == 0 && z == 0 && l.rank() > 0 {
        serial::int_to_string(&enumeration::min_norm(l)?)
    } else {
        "n/a (not positive definite)".to_string()
    };
    Ok(format!(
        "label: {}\nrank: {}\ndet: {}\nparity: {}\nsignature: ({p}, {q})\nmin norm: {min}\n",
        l.label,
        l.rank(),
        l.det(),
        if l.is_even() { "even" } else { "odd" },
    ))
}

#[derive(Serialize)]
struct ModelDocument {
    lattice: LatticeDocument,
    /// Basis vectors in the coordinates `(x₀, …, x₂₄ | x₂₅)`.
    coordinates: Vec<Vec<String>>,
    weyl_vector: VectorDocument,
}

fn cmd_build(target: BuildTarget, out: &Path) -> CliResult {
    let model = LorentzianModel::build();
    let (json, lattice) = match target {
        BuildTarget::Borcherds => {
            let cert = model.certificate();
            if !cert.is_ii_25_1() {
                return Err(Failure::check(format!("model certificate failed: {cert:?}")));
            }
            let doc = ModelDocument {
                lattice: LatticeDocument::from_lattice(&model.lattice),
                coordinates: model
                    .basis_coordinates()
                    .to_rows()
                    .iter()
                    .map(|r| r.iter().map(serial::rational_to_string).collect())
                    .collect(),
                weyl_vector: VectorDocument::from_rationals(&borcherds::w0_coordinates()),
            };
            (serial::to_json(&doc), model.lattice.clone())
        }
        BuildTarget::Leech => {
            let leech = borcherds::build_leech(&model)?;
            if !borcherds::is_leech_type(&leech)? {
                return Err(Failure::check("quotient is not a Leech lattice"));
            }
            (serial::to_json(&LatticeDocument::from_lattice(&leech)), leech)
        }
    };
    let text = summary(&lattice)?;
    write_file(out, &json)?;
    write_file(&out.with_extension("txt"), &text)?;
    print!("{text}");
    Ok(EXIT_OK)
}

/// `Z/2 x (Z/4)^3` style name from invariant factors.
fn group_name(factors: &[String]) -> String {
    let mut parts: Vec<(String, usize)> = Vec::new();
    for f in factors {
        match parts.last_mut() {
            Some((g, k)) if g == f => *k += 1,
            _ => parts.push((f.clone(), 1)),
        }
    }
    parts
        .iter()
        .map(|(g, k)| if *k == 1 { format!("Z/{g}") } else { format!("(Z/{g})^{k}") })
        .collect::<Vec<_>>()
        .join(" x ")
}

fn cmd_disc(path: &Path) -> CliResult {
    let l = read_lattice(path)?;
    let d = l.discriminant_form()?;
    if d.is_trivial() {
        println!("group: trivial\nlength: 0\norder: 1");
        return Ok(EXIT_OK);
    }
    let factors = serial::ints_to_strings(&d.invariant_factors);
    println!("group: {}", group_name(&factors));
    println!("invariant factors: {}", factors.join(" "));
    println!("length: {}", d.ell());
    println!("order: {}", d.order());
    println!("q: {}", d.q_values.iter().map(serial::rational_to_string).collect::<Vec<_>>().join(" "));
    Ok(EXIT_OK)
}

fn cmd_short_vectors(path: &Path, bound: i64, limit: Option<usize>) -> CliResult {
    let l = read_lattice(path)?;
    let report = enumeration::short_vectors(&l, &bound.into())?;
    print!("{}", serial::to_json(&report.to_document(limit)));
    Ok(EXIT_OK)
}

fn cmd_weyl_check(path: &Path) -> CliResult {
    let doc: VectorDocument = serial::from_json(&read_text(path)?)?;
    let x = doc.to_rationals()?;
    if x.len() != borcherds::MODEL_DIM {
        return Err(Failure::malformed(format!("expected {} coordinates, got {}", borcherds::MODEL_DIM, x.len())));
    }
    let norm = serial::rational_to_string(&borcherds::lorentz_inner(&x, &x));
    let model = LorentzianModel::build();
    let Some(coords) = model.lattice_coords(&x) else {
        println!("weyl: false\nreason: not a lattice vector (norm {norm})");
        return Ok(EXIT_CHECK_FAILED);
    };
    let diagnosis = borcherds::check_weyl_vector(&model.lattice, &coords)?;
    println!("weyl: {}\nnorm: {norm}\ndiagnosis: {}", diagnosis.is_weyl(), diagnosis.name());
    if let WeylDiagnosis::QuotientHasRoots { root } = &diagnosis {
        println!("root: {}", serial::ints_to_strings(root).join(" "));
    }
    Ok(if diagnosis.is_weyl() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_conway(samples: usize, seed: u64) -> CliResult {
    let model = LorentzianModel::build();
    let w = borcherds::weyl_vector_w0(&model)?;
    let report = borcherds::conway_sample_check(&model.lattice, &w, samples, seed)?;
    for (i, s) in report.samples.iter().enumerate() {
        println!(
            "sample {i}: leech root {}, (r, w + r) = 1 {}, w + r isotropic {}, w + r {}",
            s.is_leech_root,
            s.crosses_wall,
            s.reflected_isotropic,
            s.reflected.name()
        );
    }
    println!("passed {}/{}", report.passed(), report.total());
    Ok(if report.passed() == report.total() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct PairOutput {
    report: pipeline::LeechPairReport,
    condition_1: Option<pipeline::ConditionOne>,
}

fn cmd_pair_verify(lattice: &Path, group: &Path) -> CliResult {
    let s = read_lattice(lattice)?;
    let g = read_group(group)?;
    let report = pipeline::verify_leech_pair(&s, &g);
    let condition_1 = pipeline::check_condition_1(&s).ok();
    let verdict = report.verdict;
    print!("{}", serial::to_json(&PairOutput { report, condition_1 }));
    Ok(if verdict { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    inputs: Vec<FileDigest>,
    seed: u64,
    bound: u64,
    toolkit_version: String,
    outputs: Vec<FileDigest>,
}

fn cmd_pipeline(fixture: Option<String>, input: Option<Vec<PathBuf>>, bound: u64, seed: u64, out: &Path) -> CliResult {
    let options = PipelineOptions { height_bound: bound, seed };
    let mut inputs = Vec::new();
    let (command, run) = match (fixture, input) {
        (Some(name), _) => {
            let fx = fixtures::fixture(&name, seed)?;
            let run = pipeline::run_full_pipeline(&fx.s, &fx.group, &options)?;
            (format!("pipeline run --fixture {name} --bound {bound} --seed {seed}"), run)
        }
        (None, Some(paths)) => {
            let [s_path, g_path] = paths.as_slice() else {
                return Err(Failure::malformed("--input takes S.json G.json"));
            };
            for p in [s_path, g_path] {
                let bytes = fs::read(p).map_err(|e| Failure::malformed(format!("cannot read {}: {e}", p.display())))?;
                inputs.push(FileDigest { path: p.display().to_string(), sha256: sha256_hex(&bytes) });
            }
            let s = read_lattice(s_path)?;
            let g = read_group(g_path)?;
            let run = run_input(&s, &g, &options)?;
            let command = format!(
                "pipeline run --input {} {} --bound {bound} --seed {seed}",
                s_path.display(),
                g_path.display()
            );
            (command, run)
        }
        (None, None) => return Err(Failure::malformed("either --fixture or --input is required")),
    };
    let code = report_run(&run);
    fs::create_dir_all(out).map_err(|e| Failure::check(format!("cannot create {}: {e}", out.display())))?;
    let mut outputs = Vec::new();
    for (name, contents) in run.artifacts() {
        write_file(&out.join(&name), &contents)?;
        outputs.push(FileDigest { path: name, sha256: sha256_hex(contents.as_bytes()) });
    }
    let manifest = RunManifest {
        command,
        inputs,
        seed,
        bound,
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs,
    };
    write_file(&out.join("manifest.json"), &serial::to_json(&manifest))?;
    Ok(code)
}

/// A rank-24 ambient means `S` sits in a Leech lattice; rank 26 means a
/// witness `S ⊕ ℤα` in a presentation of `II₂₅,₁` (last basis row `α`).
fn run_input(s: &Lattice, g: &GroupAction, options: &PipelineOptions) -> Result<PipelineRun, Failure> {
    match s.ambient_dim() {
        24 => Ok(pipeline::run_full_pipeline(s, g, options)?),
        26 => {
            let ii = Lattice::from_gram("II", s.ambient_gram().clone())?;
            Ok(pipeline::run_from_witness(&ii, s.basis(), g, options)?)
        }
        n => Err(Failure::malformed(format!("ambient dimension {n}; expected 24 (Leech) or 26 (II_25,1 witness)"))),
    }
}

fn report_run(run: &PipelineRun) -> u8 {
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    let doc = run.certificate_document();
    println!("outcome: {}", doc.outcome);
    println!("pair verdict: {}", doc.pair_verdict);
    println!("rank + l(A_S): {}", doc.condition_1_value);
    println!("search: {:?} after {} candidate(s)", run.search.status, run.search.candidates_tested);
    if let Some(x) = &run.extraction {
        let c = &x.certificate;
        println!(
            "certificate: rank {}, det {}, even {}, rootless {}, saturation index {}, gram preserved {}, complement form {}",
            c.target_rank,
            c.target_det,
            c.target_even,
            c.target_rootless,
            c.image_saturation_index,
            c.gram_preserved,
            c.complement_disc_consistent
        );
    }
    match &run.outcome {
        Outcome::Valid => EXIT_OK,
        Outcome::CheckFailed(why) => {
            eprintln!("check failed: {why}");
            EXIT_CHECK_FAILED
        }
        Outcome::Exhausted => EXIT_EXHAUSTED,
    }
}
