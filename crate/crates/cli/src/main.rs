use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spbw::dimension::{udim, udim_induced, verify_udim};
use spbw::fixtures::{fix3, finite_fixture};
use spbw::good::{good_equivalences, is_good, make_good};
use spbw::invariant::{invariant_identities, invariant_parts, is_quantized};
use spbw::io::{extension_spec, load_extension, load_module_file, parse_json, AnyExtension, ExtensionSpec, ModuleFile};
use spbw::module::{FiniteModule, Induced};
use spbw::pbw::{AssocMode, SkewPBWExtension};
use spbw::primes::{ass, ass_induced};
use spbw::ring::{FiniteRing, IdealSet, Ring, Side};
use spbw::verify::{render_text, verify_finite, verify_fixtures, verify_polynomial, worst, Status};
use spbw::zoo::{build_preset, PRESETS};
use spbw::Error;

#[derive(Parser)]
#[command(name = "spbw", version, about = "Skew PBW extensions and their induced modules")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Extension description (JSON).
    #[arg(long, conflicts_with = "fixture")]
    algebra: Option<PathBuf>,
    /// A built-in fixture: FIX1, FIX2, FIX3 or FIX4.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct ModuleArgs {
    /// Module description (JSON); defaults to the ring as a module over itself.
    #[arg(long)]
    module: Option<PathBuf>,
}

#[derive(Args)]
struct DegreeArg {
    /// Degree bound for exhaustive oracles and falsifiers.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    degree: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Load an extension and check its axioms and associativity.
    Validate {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Report the type of an extension and a quantized witness.
    Classify {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// Reduce an expression to normal form.
    Normalize {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long)]
        expr: String,
    },
    /// Decide whether an element of M⟨X⟩ is good.
    GoodCheck {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        element: String,
        #[command(flatten)]
        degree: DegreeArg,
    },
    /// Multiply an element of M⟨X⟩ by a scalar to make it good.
    MakeGood {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        element: String,
    },
    /// Invariant parts of an ideal, or of every two-sided ideal.
    Invariants {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Generators of a two-sided ideal.
        #[arg(long, num_args = 1..)]
        ideal: Vec<String>,
    },
    /// Uniform dimension of M, and of M⟨X⟩ when an extension is given.
    Udim {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        degree: DegreeArg,
    },
    /// Associated primes of M, and of M⟨X⟩ when an extension is given.
    Ass {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        degree: DegreeArg,
    },
    /// Named example algebras.
    Zoo {
        #[command(subcommand)]
        command: ZooCommand,
    },
    /// Run the full check suite on a fixture ("all" for every fixture) or
    /// on a given extension and module.
    Verify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        module: ModuleArgs,
        #[command(flatten)]
        degree: DegreeArg,
    },
}

#[derive(Subcommand)]
enum ZooCommand {
    List,
    /// Build a preset and print its extension description.
    Build {
        name: String,
        /// Parameter override, e.g. `q=3`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, String)>,
    },
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// A command's result: JSON form, text form and exit status.
struct Report {
    json: Value,
    text: String,
    status: Status,
}

impl Report {
    fn new(json: Value, text: String) -> Self {
        Report { json, text, status: Status::Pass }
    }
}

type CliResult<T> = Result<T, Error>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = match std::env::var("SPBW_SEED") {
        Ok(s) => match s.parse::<u64>() {
            Ok(v) => v,
            Err(_) => {
                eprintln!("error: SPBW_SEED must be a nonnegative integer");
                return ExitCode::from(2);
            }
        },
        Err(_) => 0,
    };
    match run(&cli.command, seed) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("reports serialize")),
            }
            ExitCode::from(match report.status {
                Status::Pass | Status::Skipped => 0,
                Status::Fail => 1,
                Status::Defect => 3,
            })
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "error": e.to_string(), "exit": exit_code(&e) })),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_defect() => 3,
        Error::HypothesisNotCertified(_) | Error::NotFoundAtBound(_) | Error::NotBijective => 1,
        _ => 2,
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_algebra(args: &AlgebraArgs) -> CliResult<AnyExtension> {
    match (&args.algebra, &args.fixture) {
        (Some(path), _) => load_extension(&parse_json::<ExtensionSpec>(&read(path)?)?),
        (None, Some(name)) => {
            let upper = name.to_ascii_uppercase();
            if upper == "FIX3" {
                return Ok(AnyExtension::Poly(fix3()?));
            }
            let ext = finite_fixture(&upper).ok_or_else(|| Error::BadParameter(format!("unknown fixture {name}")))??;
            Ok(AnyExtension::Finite(ext))
        }
        (None, None) => Err(Error::BadParameter("give --algebra or --fixture".into())),
    }
}

fn has_algebra(args: &AlgebraArgs) -> bool {
    args.algebra.is_some() || args.fixture.is_some()
}

fn finite(ext: AnyExtension) -> CliResult<SkewPBWExtension<FiniteRing>> {
    match ext {
        AnyExtension::Finite(e) => Ok(e),
        AnyExtension::Poly(_) => Err(Error::PolynomialBackendUnsupported("this command needs a finite coefficient ring")),
    }
}

fn load_module(args: &ModuleArgs, ring: Option<&FiniteRing>) -> CliResult<FiniteModule> {
    match (&args.module, ring) {
        (Some(path), _) => load_module_file(&parse_json::<ModuleFile>(&read(path)?)?, ring),
        (None, Some(r)) => Ok(FiniteModule::regular(Arc::new(r.clone()))),
        (None, None) => Err(Error::BadParameter("give --module or an extension".into())),
    }
}

fn labels(ideal: &IdealSet, ring: &FiniteRing) -> Vec<String> {
    ideal.labels(ring)
}

fn run(command: &Command, seed: u64) -> CliResult<Report> {
    match command {
        Command::Validate { algebra } => validate(load_algebra(algebra)?, seed),
        Command::Classify { algebra } => classify(load_algebra(algebra)?),
        Command::Normalize { algebra, expr } => {
            let text = match load_algebra(algebra)? {
                AnyExtension::Finite(e) => e.format(&e.parse(expr)?),
                AnyExtension::Poly(e) => e.format(&e.parse(expr)?),
            };
            Ok(Report::new(json!({ "normal_form": text, "provenance": "by-exhaustion" }), format!("{text}\n")))
        }
        Command::GoodCheck { algebra, module, element, degree } => {
            let ext = finite(load_algebra(algebra)?)?;
            let module = load_module(module, Some(ext.ring()))?;
            good_check(&ext, &module, element, degree.degree)
        }
        Command::MakeGood { algebra, module, element } => {
            let ext = finite(load_algebra(algebra)?)?;
            let module = load_module(module, Some(ext.ring()))?;
            let ind = Induced::new(&ext, &module)?;
            let m = ind.parse(element)?;
            let (r, out) = make_good(&ind, &m)?;
            let r = ext.ring().label(r).to_string();
            let text = format!("{} = ({})·{r}\nprovenance: by-exhaustion\n", ind.format(&out), ind.format(&m));
            Ok(Report::new(
                json!({ "element": ind.format(&m), "scalar": r, "good": ind.format(&out), "terms": ind.to_json(&out), "provenance": "by-exhaustion" }),
                text,
            ))
        }
        Command::Invariants { algebra, ideal } => {
            let ext = finite(load_algebra(algebra)?)?;
            invariants(&ext, ideal)
        }
        Command::Udim { algebra, module, degree } => {
            let ext = if has_algebra(algebra) { Some(finite(load_algebra(algebra)?)?) } else { None };
            let module = load_module(module, ext.as_ref().map(|e| e.ring()))?;
            udim_report(ext.as_ref(), &module, degree.degree)
        }
        Command::Ass { algebra, module, degree } => {
            let ext = if has_algebra(algebra) { Some(finite(load_algebra(algebra)?)?) } else { None };
            let module = load_module(module, ext.as_ref().map(|e| e.ring()))?;
            ass_report(ext.as_ref(), &module, degree.degree)
        }
        Command::Zoo { command } => zoo(command),
        Command::Verify { algebra, module, degree } => {
            let reports = match (&algebra.fixture, &algebra.algebra) {
                (Some(name), None) if module.module.is_none() => verify_fixtures(name, degree.degree, seed)?,
                _ => match load_algebra(algebra)? {
                    AnyExtension::Finite(ext) => {
                        let m = load_module(module, Some(ext.ring()))?;
                        vec![verify_finite("instance", &ext, &m, degree.degree)]
                    }
                    AnyExtension::Poly(ext) => vec![verify_polynomial("instance", &ext, degree.degree, seed)],
                },
            };
            Ok(Report { json: json!(reports), text: render_text(&reports), status: worst(&reports) })
        }
    }
}

fn validate(ext: AnyExtension, seed: u64) -> CliResult<Report> {
    let (names, classification, assoc) = match &ext {
        AnyExtension::Finite(e) => (e.names().to_vec(), e.classify(), e.check_associativity(AssocMode::Exhaustive)?),
        AnyExtension::Poly(e) => {
            (e.names().to_vec(), e.classify(), e.check_associativity(AssocMode::Sample { triples: 1000, seed })?)
        }
    };
    let provenance = if assoc.mode == "exhaustive" { "by-exhaustion" } else { "falsifier-to-degree-D" };
    let text = format!(
        "ok: {} variables ({})\nassociativity: {} triples, {} ({provenance})\n",
        names.len(),
        names.join(", "),
        assoc.triples,
        assoc.mode
    );
    Ok(Report::new(
        json!({ "valid": true, "variables": names, "classification": classification, "associativity": assoc, "provenance": provenance }),
        text,
    ))
}

fn classify(ext: AnyExtension) -> CliResult<Report> {
    let (c, quantized) = match &ext {
        AnyExtension::Finite(e) => (e.classify(), quantized_labels(e)),
        AnyExtension::Poly(e) => (e.classify(), quantized_labels(e)),
    };
    let mut text = String::new();
    for (name, v) in [
        ("quasi-commutative", c.quasi_commutative),
        ("bijective", c.bijective),
        ("endomorphism type", c.endomorphism_type),
        ("derivation type", c.derivation_type),
    ] {
        let _ = writeln!(text, "{name}: {v}");
    }
    let _ = match &quantized {
        Some(q) => writeln!(text, "quantized: ({})", q.join(", ")),
        None => writeln!(text, "quantized: no witness"),
    };
    Ok(Report::new(json!({ "classification": c, "quantized": quantized, "provenance": "by-exhaustion" }), text))
}

fn quantized_labels<R: Ring>(ext: &SkewPBWExtension<R>) -> Option<Vec<String>> {
    is_quantized(ext).map(|q| q.iter().map(|c| ext.ring().format(c)).collect())
}

fn good_check(ext: &SkewPBWExtension<FiniteRing>, module: &FiniteModule, element: &str, degree: u32) -> CliResult<Report> {
    let ind = Induced::new(ext, module)?;
    let m = ind.parse(element)?;
    let verdict = is_good(&ind, &m)?;
    let witness = verdict.witness.map(|r| ext.ring().label(r).to_string());
    let certificate = if ext.classify().bijective { Some(good_equivalences(&ind, &m, degree)?) } else { None };
    let mut text = format!("{}: {}\n", ind.format(&m), if verdict.good { "good" } else { "not good" });
    if let Some(w) = &witness {
        let _ = writeln!(text, "witness r = {w}: m·r = {}", ind.format(&ind.act_scalar(&m, verdict.witness.unwrap())?));
    }
    if let Some(c) = &certificate {
        let agreeing = c.conditions.iter().filter(|k| k.holds == c.verdict).count();
        let _ = writeln!(text, "equivalent conditions agree: {agreeing}/{} at degree {degree}", c.conditions.len());
    }
    let _ = writeln!(text, "provenance: by-exhaustion");
    Ok(Report::new(
        json!({ "element": ind.format(&m), "good": verdict.good, "witness": witness, "certificate": certificate, "provenance": "by-exhaustion" }),
        text,
    ))
}

fn invariants(ext: &SkewPBWExtension<FiniteRing>, gens: &[String]) -> CliResult<Report> {
    let ring = ext.ring();
    let ideals = if gens.is_empty() {
        IdealSet::all(ring, Side::TwoSided)
    } else {
        let ids = gens.iter().map(|g| ring.parse_element(g)).collect::<CliResult<Vec<_>>>()?;
        vec![IdealSet::generate(ring, &ids, Side::TwoSided)]
    };
    let mut text = String::new();
    let mut out = Vec::new();
    for ideal in &ideals {
        let parts = invariant_parts(ext, ideal)?;
        let identities = invariant_identities(ext, ideal)?;
        let _ = writeln!(
            text,
            "I = {:?}: I_Σ = {:?}, I_Δ = {:?}, I_ΣΔ = {:?}, stable = {}",
            labels(ideal, ring),
            labels(&parts.sigma_part, ring),
            labels(&parts.delta_part, ring),
            labels(&parts.mixed_part, ring),
            parts.stable.map_or("n/a".to_string(), |s| s.to_string())
        );
        out.push(json!({
            "ideal": labels(ideal, ring),
            "sigma_part": labels(&parts.sigma_part, ring),
            "delta_part": labels(&parts.delta_part, ring),
            "mixed_part": labels(&parts.mixed_part, ring),
            "sigma_invariant": parts.sigma_invariant,
            "delta_invariant": parts.delta_invariant,
            "stable": parts.stable,
            "mixed_equals_sigma_part": identities.mixed_equals_sigma_part,
            "mixed_equals_delta_part": identities.mixed_equals_delta_part,
        }));
    }
    let _ = writeln!(text, "provenance: by-exhaustion");
    Ok(Report::new(json!({ "ideals": out, "provenance": "by-exhaustion" }), text))
}

fn udim_report(ext: Option<&SkewPBWExtension<FiniteRing>>, module: &FiniteModule, degree: u32) -> CliResult<Report> {
    let base = udim(module)?;
    verify_udim(module, &base)?;
    let family: Vec<Vec<String>> = base.family.iter().map(|s| s.labels(module)).collect();
    let mut text = format!("udim(M) = {} ({})\nwitness: {family:?}\n", base.value, base.provenance);
    let mut json = json!({ "value": base.value, "witness": family, "provenance": base.provenance });
    let mut status = Status::Pass;
    if let Some(ext) = ext {
        let t = udim_induced(ext, module, degree)?;
        let _ = writeln!(text, "udim(M⟨X⟩) = {} ({})", t.value, t.provenance);
        match &t.counterexample {
            None => {
                let _ = writeln!(text, "falsifier-to-degree-{degree}: no larger independent family");
            }
            Some(f) => {
                status = Status::Fail;
                let _ = writeln!(text, "falsifier-to-degree-{degree}: independent family {f:?}");
            }
        }
        json["induced"] = json!({ "value": t.value, "provenance": t.provenance, "degree": degree, "counterexample": t.counterexample });
    }
    Ok(Report { json, text, status })
}

fn ass_report(ext: Option<&SkewPBWExtension<FiniteRing>>, module: &FiniteModule, degree: u32) -> CliResult<Report> {
    let ring = module.ring();
    let base: Vec<Value> = ass(module)?
        .iter()
        .map(|w| json!({ "prime": labels(&w.ideal, ring), "witness": w.submodule.labels(module) }))
        .collect();
    let mut text = String::new();
    for b in &base {
        let _ = writeln!(text, "P = {} (witness {})", b["prime"], b["witness"]);
    }
    let _ = writeln!(text, "provenance: by-exhaustion");
    let mut json = json!({ "ass": base, "provenance": "by-exhaustion" });
    if let Some(ext) = ext {
        let r = ass_induced(ext, module, degree)?;
        let mut entries = Vec::new();
        for e in &r.entries {
            let generator = e.generator.as_ref().map(|g| labels(g, ring));
            let _ = writeln!(
                text,
                "induced: P = {:?} gives {} ({}, oracle agrees: {})",
                labels(&e.prime, ring),
                generator.as_ref().map_or("no closed form".to_string(), |g| format!("{g:?}⟨X⟩")),
                if e.tag == "inapplicable" { "falsifier-to-degree-D".to_string() } else { format!("by-theorem({})", e.tag) },
                e.oracle.agrees.map_or("n/a".to_string(), |a| a.to_string())
            );
            entries.push(json!({
                "prime": labels(&e.prime, ring),
                "generator": generator,
                "tag": e.tag,
                "good_module": e.good_module,
                "oracle": e.oracle,
            }));
        }
        if let Some(p) = &r.primality {
            let _ = writeln!(text, "M⟨X⟩ prime to degree {degree}: {}", p.bounded_prime);
        }
        json["induced"] = json!({ "degree": degree, "quantized": r.quantized, "entries": entries, "primality": r.primality });
    }
    Ok(Report::new(json, text))
}

fn zoo(command: &ZooCommand) -> CliResult<Report> {
    match command {
        ZooCommand::List => {
            let mut text = String::new();
            for p in &PRESETS {
                let params: Vec<String> = p.params.iter().map(|q| format!("{}={}", q.name, q.default)).collect();
                let _ = writeln!(text, "{:<14} {}  [{}]", p.name, p.about, params.join(" "));
            }
            Ok(Report::new(json!(PRESETS), text))
        }
        ZooCommand::Build { name, params } => {
            let params: BTreeMap<String, String> = params.iter().cloned().collect();
            let preset = build_preset(name, &params)?;
            let spec = extension_spec(&preset.ext);
            let json = serde_json::to_value(&spec).expect("specs serialize");
            let text = serde_json::to_string_pretty(&spec).expect("specs serialize") + "\n";
            Ok(Report::new(json, text))
        }
    }
}
