//! Set generators, sumsets and image sets, and the scan harness checking
//! `|A+A| |f(A,A)|` against `|A|^(5/2)`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{decompose_fully, is_degenerate, recompose};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::poly::{fmt_rat, parse_poly, parse_rat, rat_to_f64, serde_rat, BiPoly, Rat};

/// A reproducible description of a finite set of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSpec {
    Ap {
        n: usize,
        #[serde(with = "serde_rat")]
        start: Rat,
        #[serde(with = "serde_rat")]
        step: Rat,
    },
    Gp {
        n: usize,
        #[serde(with = "serde_rat")]
        first: Rat,
        #[serde(with = "serde_rat")]
        ratio: Rat,
    },
    RandomInt {
        n: usize,
        lo: i64,
        hi: i64,
        seed: u64,
    },
    Union {
        parts: Vec<SetSpec>,
    },
}

impl SetSpec {
    /// Short family name used in record files.
    pub fn kind(&self) -> &'static str {
        match self {
            SetSpec::Ap { .. } => "AP",
            SetSpec::Gp { .. } => "GP",
            SetSpec::RandomInt { .. } => "random",
            SetSpec::Union { .. } => "union",
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Ap { n, start, step } => {
                write!(f, "ap:{n}:{}:{}", fmt_rat(start), fmt_rat(step))
            }
            SetSpec::Gp { n, first, ratio } => {
                write!(f, "gp:{n}:{}:{}", fmt_rat(first), fmt_rat(ratio))
            }
            SetSpec::RandomInt { n, lo, hi, seed } => write!(f, "random:{n}:{lo}:{hi}:{seed}"),
            SetSpec::Union { parts } => {
                let parts: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join("+"))
            }
        }
    }
}

impl FromStr for SetSpec {
    type Err = Error;

    /// `ap:N:START:STEP`, `gp:N:FIRST:RATIO`, `random:N:LO:HI:SEED`, and
    /// unions joined by `+`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('+') {
            let parts = s
                .split('+')
                .map(str::parse)
                .collect::<Result<Vec<SetSpec>>>()?;
            return Ok(SetSpec::Union { parts });
        }
        let bad = || {
            Error::Parse(format!("bad set spec {s:?}; expected ap:N:START:STEP, gp:N:FIRST:RATIO or random:N:LO:HI:SEED"))
        };
        let fields: Vec<&str> = s.split(':').collect();
        let int = |v: &str| v.trim().parse::<i64>().map_err(|_| bad());
        let size = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
        match fields.as_slice() {
            [k, n, a, b] if k.eq_ignore_ascii_case("ap") => Ok(SetSpec::Ap {
                n: size(n)?,
                start: parse_rat(a)?,
                step: parse_rat(b)?,
            }),
            [k, n, a, b] if k.eq_ignore_ascii_case("gp") => Ok(SetSpec::Gp {
                n: size(n)?,
                first: parse_rat(a)?,
                ratio: parse_rat(b)?,
            }),
            [k, n, lo, hi, seed] if k.eq_ignore_ascii_case("random") => Ok(SetSpec::RandomInt {
                n: size(n)?,
                lo: int(lo)?,
                hi: int(hi)?,
                seed: seed.trim().parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

/// Strictly increasing elements together with the spec that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatSet {
    #[serde(with = "serde_rat::vec")]
    pub elements: Vec<Rat>,
    pub provenance: SetSpec,
}

impl RatSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

const RANDOM_RETRY_FACTOR: usize = 64;

pub fn generate_set(spec: &SetSpec) -> Result<RatSet> {
    let degenerate = |m: &str| Err(Error::DegenerateSpec(format!("{spec}: {m}")));
    let elements: Vec<Rat> = match spec {
        SetSpec::Ap { n, start, step } => {
            if *n == 0 {
                return degenerate("n must be at least 1");
            }
            if step.is_zero() {
                return degenerate("step must be nonzero");
            }
            (0..*n)
                .map(|i| start + step * Rat::from_integer(BigInt::from(i)))
                .collect()
        }
        SetSpec::Gp { n, first, ratio } => {
            if *n == 0 {
                return degenerate("n must be at least 1");
            }
            if first.is_zero() || ratio.is_zero() || ratio.abs().is_one() {
                return degenerate("first must be nonzero and ratio outside {0, 1, -1}");
            }
            let mut out = Vec::with_capacity(*n);
            let mut cur = first.clone();
            for _ in 0..*n {
                out.push(cur.clone());
                cur *= ratio;
            }
            out
        }
        SetSpec::RandomInt { n, lo, hi, seed } => {
            if *n == 0 {
                return degenerate("n must be at least 1");
            }
            if lo > hi {
                return degenerate("empty range");
            }
            let width = (*hi as i128 - *lo as i128 + 1) as u128;
            if width < *n as u128 {
                return degenerate("range holds fewer than n integers");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut seen = BTreeSet::new();
            let mut draws = 0;
            while seen.len() < *n {
                if draws == RANDOM_RETRY_FACTOR * n {
                    return degenerate("collision retry budget exhausted");
                }
                seen.insert(rng.gen_range(*lo..=*hi));
                draws += 1;
            }
            seen.into_iter()
                .map(|v| Rat::from_integer(v.into()))
                .collect()
        }
        SetSpec::Union { parts } => {
            if parts.is_empty() {
                return degenerate("empty union");
            }
            let mut all = BTreeSet::new();
            for p in parts {
                all.extend(generate_set(p)?.elements);
            }
            all.into_iter().collect()
        }
    };
    let mut elements = elements;
    elements.sort();
    let before = elements.len();
    elements.dedup();
    if !matches!(spec, SetSpec::Union { .. }) && elements.len() != before {
        return degenerate("elements collide");
    }
    Ok(RatSet {
        elements,
        provenance: spec.clone(),
    })
}

/// `{a + a' : a, a' in A}`, sorted.
pub fn sumset(a: &[Rat]) -> Vec<Rat> {
    let mut out = BTreeSet::new();
    for (i, x) in a.iter().enumerate() {
        for y in &a[i..] {
            out.insert(x + y);
        }
    }
    out.into_iter().collect()
}

/// `{f(a, a') : a, a' in A}` over ordered pairs, sorted.
pub fn image_set(f: &BiPoly, a: &[Rat], exec: Execution) -> Vec<Rat> {
    let rows = par::map(exec, a, |x| {
        let row = f.specialize_x(x);
        a.iter().map(|y| row.eval(y)).collect::<Vec<Rat>>()
    });
    let set: BTreeSet<Rat> = rows.into_iter().flatten().collect();
    set.into_iter().collect()
}

/// One `(f, A)` trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub poly_id: String,
    pub set_kind: String,
    pub provenance: SetSpec,
    pub n: usize,
    pub sumset_size: usize,
    pub image_size: usize,
    pub product: u64,
    /// `product^2`, compared against `c^2 n^5` exactly.
    pub product_squared: u128,
    /// `n^5`.
    pub n_fifth: u128,
    /// `product / n^(5/2)`, display only.
    pub ratio_decimal: f64,
    pub removed_rows: usize,
    pub runtime_ms: u64,
}

impl ExperimentRecord {
    /// Exact test of `product >= c n^(5/2)`.
    pub fn meets_floor(&self, c: &Rat) -> bool {
        if !c.is_positive() {
            return true;
        }
        let lhs = Rat::from_integer(BigInt::from(self.product_squared));
        lhs >= c * c * Rat::from_integer(BigInt::from(self.n_fifth))
    }
}

/// Compact identifier: the canonical text without spaces.
pub fn poly_id(f: &BiPoly) -> String {
    f.to_text().replace(' ', "")
}

/// Rows `b` of `A` with `f(x, b)` identically zero.
pub fn removed_rows(f: &BiPoly, a: &[Rat]) -> usize {
    a.iter().filter(|b| f.specialize_y(b).is_zero()).count()
}

pub fn run_record(
    f: &BiPoly,
    id: &str,
    set: &RatSet,
    exec: Execution,
    timings: bool,
) -> ExperimentRecord {
    let start = Instant::now();
    let n = set.len();
    let sums = sumset(&set.elements).len();
    let image = image_set(f, &set.elements, exec).len();
    let product = (sums * image) as u64;
    let ratio = product as f64 / (n as f64).powf(2.5);
    let runtime_ms = if timings {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    ExperimentRecord {
        poly_id: id.to_string(),
        set_kind: set.provenance.kind().to_string(),
        provenance: set.provenance.clone(),
        n,
        sumset_size: sums,
        image_size: image,
        product,
        product_squared: product as u128 * product as u128,
        n_fifth: (n as u128).pow(5),
        ratio_decimal: if n == 0 { 0.0 } else { ratio },
        removed_rows: removed_rows(f, &set.elements),
        runtime_ms,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FloorViolation {
    pub poly_id: String,
    pub provenance: String,
    pub n: usize,
    pub product: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub records: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Least-squares slope of `ln product` against `ln n`; needs two sizes.
    pub slope: Option<f64>,
    #[serde(with = "serde_rat")]
    pub floor_c: Rat,
    pub violations: Vec<FloorViolation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanOutcome {
    pub records: Vec<ExperimentRecord>,
    pub summary: ScanSummary,
}

/// Least-squares slope through `(x, y)` points; `None` without two distinct x.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 1e-12).then(|| sxy / sxx)
}

pub fn summarize(records: &[ExperimentRecord], floor_c: &Rat) -> ScanSummary {
    let ratios: Vec<f64> = records.iter().map(|r| r.ratio_decimal).collect();
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.n > 0 && r.product > 0)
        .map(|r| ((r.n as f64).ln(), (r.product as f64).ln()))
        .collect();
    let violations = records
        .iter()
        .filter(|r| !r.meets_floor(floor_c))
        .map(|r| FloorViolation {
            poly_id: r.poly_id.clone(),
            provenance: r.provenance.to_string(),
            n: r.n,
            product: r.product,
        })
        .collect();
    ScanSummary {
        records: records.len(),
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        slope: least_squares_slope(&pts),
        floor_c: floor_c.clone(),
        violations,
    }
}

/// Run every spec against `f`, refusing degenerate inputs.
pub fn run_scan(
    f: &BiPoly,
    specs: &[SetSpec],
    floor_c: &Rat,
    exec: Execution,
    timings: bool,
) -> Result<ScanOutcome> {
    if let Some(d) = is_degenerate(f)? {
        return Err(Error::HypothesisViolated(format!(
            "{f} is degenerate ({} composed with {}); the sum-product bound does not apply",
            d.outer, d.inner
        )));
    }
    let sets = specs.iter().map(generate_set).collect::<Result<Vec<_>>>()?;
    let id = poly_id(f);
    let records = par::map(exec, &sets, |s| {
        run_record(f, &id, s, Execution::Sequential, timings)
    });
    let summary = summarize(&records, floor_c);
    Ok(ScanOutcome { records, summary })
}

/// `|f(A,A)| >= |g(A,A)| / deg Q` for the core `g` and outer chain `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreInequalityReport {
    pub core: BiPoly,
    pub chain_degree: usize,
    pub image_size: usize,
    pub core_image_size: usize,
    pub holds: bool,
}

pub fn check_core_inequality(
    f: &BiPoly,
    a: &[Rat],
    exec: Execution,
) -> Result<CoreInequalityReport> {
    let (core, chain) = decompose_fully(f)?;
    debug_assert_eq!(recompose(&core, &chain), *f);
    let chain_degree: usize = chain.iter().map(|q| q.degree().max(1) as usize).product();
    let image_size = image_set(f, a, exec).len();
    let core_image_size = image_set(&core, a, exec).len();
    Ok(CoreInequalityReport {
        holds: image_size * chain_degree >= core_image_size,
        core,
        chain_degree,
        image_size,
        core_image_size,
    })
}

/// The non-degenerate polynomials scanned by default.
pub fn default_corpus() -> Vec<BiPoly> {
    [
        "x y",
        "x^2 + y",
        "x^2 + x y + y^2",
        "x^2 + y^2",
        "x y + x^3",
    ]
    .iter()
    .map(|s| parse_poly(s).expect("corpus entries parse"))
    .collect()
}

pub const RECORD_COLUMNS: [&str; 9] = [
    "poly_id",
    "set_kind",
    "n",
    "sumset",
    "image",
    "product",
    "ratio_decimal",
    "removed_rows",
    "runtime_ms",
];

pub fn write_records_csv(path: &Path, records: &[ExperimentRecord]) -> Result<()> {
    write_records(std::fs::File::create(path)?, records)
}

pub fn write_records<W: std::io::Write>(out: W, records: &[ExperimentRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_COLUMNS)
        .map_err(|e| Error::Io(e.to_string()))?;
    for r in records {
        w.write_record([
            r.poly_id.clone(),
            r.set_kind.clone(),
            r.n.to_string(),
            r.sumset_size.to_string(),
            r.image_size.to_string(),
            r.product.to_string(),
            format!("{:.6}", r.ratio_decimal),
            r.removed_rows.to_string(),
            r.runtime_ms.to_string(),
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Everything needed to regenerate a scan.
#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub parallel_feature: bool,
    pub config: serde_json::Value,
    pub sets: Vec<RatSet>,
}

impl Manifest {
    pub fn new(config: serde_json::Value, sets: Vec<RatSet>) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            parallel_feature: cfg!(feature = "parallel"),
            config,
            sets,
        }
    }
}

/// Decimal rendering of an exact ratio `sqrt(num / den)`, display only.
pub fn sqrt_ratio_decimal(num: u128, den: u128) -> f64 {
    let r = Rat::new(BigInt::from(num), BigInt::from(den.max(1)));
    rat_to_f64(&r).sqrt()
}
