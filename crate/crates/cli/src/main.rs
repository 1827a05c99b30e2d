use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sumprod_core::classify::{
    classify, default_fiber_samples, is_composite_with, ClassifyReport, CompositeVerdict,
};
use sumprod_core::explorer::{
    default_corpus, generate_set, poly_id, run_scan, write_json, write_records, write_records_csv,
    ExperimentRecord, Manifest, SetSpec,
};
use sumprod_core::geometry::{
    build_family, check_class_bound, class_size_histogram, incidence_report,
};
use sumprod_core::poly::{parse_poly, parse_rat, poly_from_json, rat};
use sumprod_core::spectrum::{sigma_candidates_with, sigma_scan, SigmaCertificate, SigmaReport};
use sumprod_core::{BiPoly, Error, Execution, Rat, DEFAULT_DEGREE_CAP, DEFAULT_SWEEP_HEIGHT};

#[derive(Parser, Debug)]
#[command(
    name = "sumprod",
    version,
    about = "Exact sum-product experiments over the rationals"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write reports and a manifest into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for random set generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Total-degree cap for the factorization oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP, value_name = "N")]
    degree_cap: usize,
    /// Record wall-clock times (records are then no longer byte-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orientation, degeneracy, compositeness and the decomposition chain.
    Classify {
        /// Polynomial text, or a file holding text or JSON terms.
        #[arg(long)]
        poly: String,
    },
    /// Search for reducible fibers f - λ.
    Sigma {
        #[arg(long)]
        poly: String,
        /// Additional candidate values, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        extra_candidates: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SWEEP_HEIGHT, value_name = "H")]
        sweep_height: u32,
    },
    /// Translated-curve family and incidence counts over A x A.
    Incidence {
        #[arg(long)]
        poly: String,
        /// Generator spec (ap:N:START:STEP, gp:N:FIRST:RATIO, random:N:LO:HI:SEED)
        /// or a file of rationals.
        #[arg(long)]
        set: String,
    },
    /// Compare |A+A| |f(A,A)| with |A|^(5/2) over set families.
    Scan {
        /// Polynomials to scan; the default corpus when omitted.
        #[arg(long)]
        poly: Vec<String>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "AP")]
        family: Vec<Family>,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        sizes: Vec<usize>,
        /// Flag records with product < c n^(5/2).
        #[arg(long, default_value = "0", value_name = "C")]
        floor: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "AP", alias = "ap")]
    Ap,
    #[value(name = "GP", alias = "gp")]
    Gp,
    #[value(name = "random", alias = "RANDOM")]
    Random,
}

impl Family {
    fn spec(self, n: usize, seed: u64) -> SetSpec {
        match self {
            Family::Ap => SetSpec::Ap {
                n,
                start: rat(1, 1),
                step: rat(1, 1),
            },
            Family::Gp => SetSpec::Gp {
                n,
                first: rat(1, 1),
                ratio: rat(2, 1),
            },
            Family::Random => SetSpec::RandomInt {
                n,
                lo: 1,
                hi: 4 * (n as i64).pow(2),
                seed,
            },
        }
    }
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(flag: &str, problem: impl std::fmt::Display, fix: &str) -> Self {
        Failure {
            code: 2,
            message: format!("error: {flag}: {problem}\n  fix: {fix}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HypothesisViolated(_)
            | Error::BoundViolated(_)
            | Error::DecompositionFailed(_) => 1,
            Error::DegreeCapExceeded { .. } => 3,
            _ => 2,
        };
        let fix = match e {
            Error::DegreeCapExceeded { .. } => "\n  fix: raise --degree-cap",
            _ => "",
        };
        Failure {
            code,
            message: format!("error: {e}{fix}"),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(dir) = &cli.global.out {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::usage("--out", e, "pass a writable directory"))?;
    }
    match &cli.command {
        Command::Classify { poly } => run_classify(cli, poly),
        Command::Sigma {
            poly,
            extra_candidates,
            sweep_height,
        } => run_sigma(cli, poly, extra_candidates, *sweep_height),
        Command::Incidence { poly, set } => run_incidence(cli, poly, set),
        Command::Scan {
            poly,
            family,
            sizes,
            floor,
        } => run_scan_cmd(cli, poly, family, sizes, floor),
    }
}

fn exec(cli: &Cli) -> Execution {
    if cli.global.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn load_poly(src: &str) -> Result<BiPoly, Failure> {
    let fix = "pass text such as \"x^2 + 3/2 x y\" or a file with text or {\"terms\": [...]}";
    let path = Path::new(src);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::usage("--poly", e, fix))?
    } else {
        src.to_string()
    };
    let parsed = if text.trim_start().starts_with('{') {
        serde_json::from_str::<Value>(&text)
            .map_err(|e| Error::Parse(e.to_string()))
            .and_then(|v| poly_from_json(&v))
    } else {
        parse_poly(&text)
    };
    parsed.map_err(|e| Failure::usage("--poly", e, fix))
}

fn load_set(src: &str) -> Result<(Vec<Rat>, Value), Failure> {
    let fix = "pass ap:N:START:STEP, gp:N:FIRST:RATIO, random:N:LO:HI:SEED or a file of rationals";
    let path = Path::new(src);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| Failure::usage("--set", e, fix))?;
        let mut elems = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse_rat)
            .collect::<Result<Vec<Rat>, Error>>()
            .map_err(|e| Failure::usage("--set", e, fix))?;
        elems.sort();
        elems.dedup();
        if elems.is_empty() {
            return Err(Failure::usage("--set", "file holds no elements", fix));
        }
        return Ok((elems, json!({"kind": "file", "path": src})));
    }
    let spec: SetSpec = src.parse().map_err(|e| Failure::usage("--set", e, fix))?;
    let set = generate_set(&spec).map_err(|e| Failure::usage("--set", e, fix))?;
    let provenance = serde_json::to_value(&set.provenance).expect("set specs serialize");
    Ok((set.elements, provenance))
}

fn write_manifest(
    cli: &Cli,
    config: Value,
    sets: Vec<sumprod_core::explorer::RatSet>,
) -> Result<(), Failure> {
    if let Some(dir) = &cli.global.out {
        let mut config = config;
        config["seed"] = json!(cli.global.seed);
        config["degree_cap"] = json!(cli.global.degree_cap);
        config["json"] = json!(cli.global.json);
        config["timings"] = json!(cli.global.timings);
        config["sequential"] = json!(cli.global.sequential);
        write_json(&dir.join("manifest.json"), &Manifest::new(config, sets))?;
    }
    Ok(())
}

fn emit(
    cli: &Cli,
    file: &str,
    value: &Value,
    human: impl FnOnce() -> String,
) -> Result<(), Failure> {
    if let Some(dir) = &cli.global.out {
        write_json(&dir.join(file), value)?;
    }
    if cli.global.json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("reports serialize")
        );
    } else {
        print!("{}", human());
    }
    Ok(())
}

fn run_classify(cli: &Cli, src: &str) -> Outcome {
    let f = load_poly(src)?;
    let report = classify(&f, exec(cli), cli.global.degree_cap)?;
    let value = serde_json::to_value(&report).expect("reports serialize");
    emit(cli, "classify.json", &value, || classify_text(&report))?;
    write_manifest(
        cli,
        json!({"subcommand": "classify", "poly": f.to_text()}),
        Vec::new(),
    )?;
    Ok(0)
}

fn classify_text(r: &ClassifyReport) -> String {
    let mut s = String::new();
    s += &format!("input:        {}\n", r.input.to_text());
    let orient = if r.swapped {
        "swapped x and y"
    } else {
        "unchanged"
    };
    s += &format!("orientation:  {} ({orient})\n", r.oriented.to_text());
    match &r.degenerate {
        Some(d) => {
            s += &format!(
                "degenerate:   Degenerate, f = Q(L) with Q(t) = {}, L = {}\n",
                d.outer,
                d.inner.to_text()
            )
        }
        None => s += "degenerate:   NotDegenerate\n",
    }
    match &r.composite {
        CompositeVerdict::Composite { witnesses } => {
            let w: Vec<String> = witnesses.iter().map(|l| l.to_string()).collect();
            s += &format!(
                "composite:    Composite (reducible fibers at λ = {})\n",
                w.join(", ")
            );
        }
        CompositeVerdict::NotComposite { certificate } => {
            s += &format!(
                "composite:    NotComposite (f - {certificate} is absolutely irreducible)\n"
            )
        }
    }
    if let Some(d) = &r.decomposition {
        s += &format!(
            "decomposition: Q(t) = {}, g = {}\n",
            d.outer,
            d.inner.to_text()
        );
    }
    if let Some(core) = &r.core {
        s += &format!("core:         {}\n", core.to_text());
        if r.chain.is_empty() {
            s += "chain:        (none)\n";
        }
        for (i, q) in r.chain.iter().enumerate() {
            s += &format!("chain[{i}]:     {q}\n");
        }
    }
    s
}

fn run_sigma(cli: &Cli, src: &str, extra: &[String], height: u32) -> Outcome {
    let f = load_poly(src)?;
    let extra = extra
        .iter()
        .map(|t| parse_rat(t))
        .collect::<Result<Vec<Rat>, Error>>()
        .map_err(|e| Failure::usage("--extra-candidates", e, "pass rationals such as 1,-2,3/4"))?;
    let cap = cli.global.degree_cap;
    let candidates = sigma_candidates_with(&f, height, &extra, cap)?;
    let report = sigma_scan(&f, &candidates, exec(cli), cap)?;
    let value = serde_json::to_value(&report).expect("reports serialize");
    emit(cli, "sigma.json", &value, || sigma_text(&f, &report))?;
    let extra: Vec<String> = extra.iter().map(|r| r.to_string()).collect();
    write_manifest(
        cli,
        json!({"subcommand": "sigma", "poly": f.to_text(), "extra_candidates": extra, "sweep_height": height}),
        Vec::new(),
    )?;
    Ok(
        if report.stein_bound_respected || report.composite_cross_check == Some(true) {
            0
        } else {
            1
        },
    )
}

fn sigma_text(f: &BiPoly, r: &SigmaReport) -> String {
    let mut s = format!(
        "f = {}, k = {}, {} candidates tested\n",
        f.to_text(),
        r.degree_k,
        r.candidate_count
    );
    for hit in &r.found {
        match &hit.certificate {
            SigmaCertificate::Rational { factors } => {
                s += &format!("λ = {}: f - λ = {factors}\n", hit.lambda)
            }
            SigmaCertificate::Absolute { absolute_factors } => {
                s += &format!("λ = {}: {absolute_factors} absolute factors\n", hit.lambda)
            }
        }
    }
    s += &format!(
        "|σ| found = {} ({} k = {})\n",
        r.found.len(),
        if r.found.len() < r.degree_k {
            "<"
        } else {
            ">="
        },
        r.degree_k
    );
    if let Some(c) = r.composite_cross_check {
        s += &format!("bound fails; composite cross-check: {c}\n");
    }
    s
}

fn run_incidence(cli: &Cli, src: &str, set: &str) -> Outcome {
    let f = load_poly(src)?;
    let (a, provenance) = load_set(set)?;
    let cap = cli.global.degree_cap;
    let exec = exec(cli);
    let values = sumprod_core::explorer::image_set(&f, &a, exec);
    let candidates = sigma_candidates_with(&f, DEFAULT_SWEEP_HEIGHT, &values, cap)?;
    let sigma = sigma_scan(&f, &candidates, exec, cap)?;
    let report = incidence_report(&f, &a, &sigma, exec);
    let family = build_family(&f, &a, exec);
    let k = f.total_degree().max(0) as usize;
    let composite = is_composite_with(&f, &default_fiber_samples(k), exec, cap)?.is_composite();
    let bound = check_class_bound(&family, k, composite);
    let histogram = class_size_histogram(&family);
    let mut value = serde_json::to_value(&report).expect("reports serialize");
    value["sigma"] = serde_json::to_value(
        sigma
            .lambdas()
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>(),
    )
    .expect("strings serialize");
    value["class_histogram"] = json!(histogram);
    let mut csv = String::from("class_size,count\n");
    for (size, count) in &histogram {
        csv += &format!("{size},{count}\n");
    }
    if let Some(dir) = &cli.global.out {
        fs::write(dir.join("class_sizes.csv"), &csv).map_err(Error::from)?;
    }
    emit(cli, "incidence.json", &value, || {
        format!(
            "points {}  curves {}  incidences {}\nszekely terms {:.3} {:.3} {:.3}  ratio {:.4}\nper-curve min {}  floor {}  removed rows {}\n{csv}",
            report.point_count,
            report.curve_count,
            report.incidences,
            report.szekely_terms[0],
            report.szekely_terms[1],
            report.szekely_terms[2],
            report.szekely_ratio,
            report.per_curve_min,
            report.per_curve_floor,
            report.removed_rows,
        )
    })?;
    write_manifest(
        cli,
        json!({"subcommand": "incidence", "poly": f.to_text(), "set": provenance}),
        Vec::new(),
    )?;
    bound?;
    Ok(if report.per_curve_min >= report.per_curve_floor {
        0
    } else {
        1
    })
}

fn run_scan_cmd(
    cli: &Cli,
    polys: &[String],
    families: &[Family],
    sizes: &[usize],
    floor: &str,
) -> Outcome {
    let floor_c = parse_rat(floor)
        .map_err(|e| Failure::usage("--floor", e, "pass a rational such as 1/2"))?;
    if sizes.is_empty() {
        return Err(Failure::usage(
            "--sizes",
            "no sizes given",
            "pass e.g. --sizes 8,16,32",
        ));
    }
    let polys: Vec<BiPoly> = if polys.is_empty() {
        default_corpus()
    } else {
        polys
            .iter()
            .map(|p| load_poly(p))
            .collect::<Result<_, _>>()?
    };
    let exec = exec(cli);
    let mut records: Vec<ExperimentRecord> = Vec::new();
    let mut summaries = Vec::new();
    let mut sets = Vec::new();
    for f in &polys {
        for fam in families {
            let specs: Vec<SetSpec> = sizes
                .iter()
                .map(|&n| fam.spec(n, cli.global.seed))
                .collect();
            for s in &specs {
                sets.push(
                    generate_set(s)
                        .map_err(|e| Failure::usage("--sizes", e, "use sizes of at least 1"))?,
                );
            }
            let out = run_scan(f, &specs, &floor_c, exec, cli.global.timings)?;
            summaries.push(json!({
                "poly_id": poly_id(f),
                "family": out.records.first().map(|r| r.set_kind.clone()),
                "summary": out.summary,
            }));
            records.extend(out.records);
        }
    }
    let violations: usize = summaries
        .iter()
        .map(|s| s["summary"]["violations"].as_array().map_or(0, Vec::len))
        .sum();
    let summary =
        json!({"floor_c": floor_c.to_string(), "violations": violations, "scans": summaries});
    match &cli.global.out {
        Some(dir) => {
            write_records_csv(&dir.join("records.csv"), &records)?;
            write_json(&dir.join("summary.json"), &summary)?;
        }
        None => {
            if !cli.global.json {
                write_records(std::io::stdout().lock(), &records)?;
            }
        }
    }
    if cli.global.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("reports serialize")
        );
    } else {
        eprintln!("{} records, {violations} floor violations", records.len());
    }
    let poly_texts: Vec<String> = polys.iter().map(BiPoly::to_text).collect();
    let fams: Vec<String> = families
        .iter()
        .filter_map(|f| f.to_possible_value())
        .map(|v| v.get_name().to_string())
        .collect();
    write_manifest(
        cli,
        json!({
            "subcommand": "scan",
            "polys": poly_texts,
            "families": fams,
            "sizes": sizes,
            "floor_c": floor_c.to_string(),
        }),
        sets,
    )?;
    Ok(if violations > 0 { 1 } else { 0 })
}
