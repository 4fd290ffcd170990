//! Eigenspace classification per prime, prime scans, and report output.
//!
//! For `(q - 1) | n` the `chi^(n-1)` eigenspace of the flat cohomology group
//! is nonzero exactly when `p | BC_n`. When it is nonzero and the
//! class-group eigencomponent `L(1, chi^-n)` is a unit, it is generated by
//! `dlog λ_n` and has dimension one; otherwise only a lower bound follows.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::field::Fq;
use crate::algebra::poly::{Poly, PolyRing};
use crate::algebra::residue::ResidueField;
use crate::carlitz::bernoulli::{bc_numbers, irregular_indices};
use crate::error::{Error, Result};
use crate::localfield::LocalModel;
use crate::lseries::{pic_eigenspace_lengths, CharacterContext};
use crate::witt::{StructuralLift, DEFAULT_PRECISION};

pub const SCHEMA_VERSION: &str = "1";

const AT_LEAST_FOOTNOTE: &str = "\u{2265}1: the class-group eigencomponent is nonzero, so only a lower bound \
follows; the exact dimension needs a curve-cohomology computation that this tool does not perform.";

const NO_INTERPRETATION_BANNER: &str = "(q - 1) does not divide n: raw data only, no in-scope interpretation.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H1Dim {
    Exact(u32),
    AtLeast(u32),
    OutOfScope,
}

impl H1Dim {
    pub fn label(&self) -> String {
        match self {
            H1Dim::Exact(k) => k.to_string(),
            H1Dim::AtLeast(k) => format!("\u{2265}{k}"),
            H1Dim::OutOfScope => "-".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexClassification {
    pub n: u32,
    pub divisible_by_q_minus_1: bool,
    pub bc_divisible: bool,
    pub pic_length: Option<u32>,
    pub h1_dim: H1Dim,
    /// Set only when the local check ran.
    pub local_dlog_vanished: Option<bool>,
    /// Valuation of `S_n(1)` for `(q - 1) ∤ n`; equals the Witt precision
    /// when saturated.
    pub raw_numerator_valuation: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub bernoulli_ms: f64,
    pub lseries_ms: f64,
    pub local_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub q: u32,
    pub prime: String,
    pub degree: usize,
    pub irregular: Vec<u32>,
    pub indices: Vec<IndexClassification>,
    /// `None` when no index is divisible by `q - 1`.
    pub witt_precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl PrimeReport {
    /// Sum over in-scope irregular indices; `AtLeast` when any term is a bound.
    pub fn dim_summary(&self) -> H1Dim {
        let mut total = 0;
        let mut bound = false;
        for c in &self.indices {
            match c.h1_dim {
                H1Dim::Exact(k) => total += k,
                H1Dim::AtLeast(k) => {
                    total += k;
                    bound = true;
                }
                H1Dim::OutOfScope => {}
            }
        }
        if bound {
            H1Dim::AtLeast(total)
        } else {
            H1Dim::Exact(total)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Starting Witt precision; doubled on saturation up to the cap.
    pub precision: u32,
    pub check_local: bool,
    pub timings: bool,
    pub lift: StructuralLift,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { precision: DEFAULT_PRECISION, check_local: false, timings: false, lift: StructuralLift::Naive }
    }
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

pub fn classify_prime(ring: &PolyRing, prime: &Poly, options: &ClassifyOptions) -> Result<PrimeReport> {
    let residue = ResidueField::new(ring.field().clone(), prime)?;
    classify_residue(&residue, ring, options)
}

fn classify_residue(residue: &Arc<ResidueField>, ring: &PolyRing, options: &ClassifyOptions) -> Result<PrimeReport> {
    let q = residue.q();
    let units = residue.order() - 1;
    let top = units.saturating_sub(1);

    let clock = Instant::now();
    let bc = bc_numbers(residue)?;
    let irregular: Vec<u32> = irregular_indices(&bc).into_iter().collect();
    let bernoulli_ms = millis(clock);

    let clock = Instant::now();
    let divisible: Vec<u32> = (1..=top).filter(|n| n % (q - 1) == 0).collect();
    let (lengths, witt_precision) = if divisible.is_empty() {
        (Vec::new(), None)
    } else {
        let (lengths, precision) = pic_eigenspace_lengths(residue, &divisible, options.precision, options.lift)?;
        (lengths, Some(precision))
    };
    let raw_ctx = match witt_precision {
        Some(k) if divisible.len() < top as usize => Some(CharacterContext::with_lift(residue.clone(), k, options.lift)?),
        None if top > 0 => Some(CharacterContext::with_lift(residue.clone(), options.precision, options.lift)?),
        _ => None,
    };
    let mut indices = Vec::with_capacity(top as usize);
    let mut next_length = lengths.iter();
    for n in 1..=top {
        let divisible_by_q_minus_1 = n % (q - 1) == 0;
        let bc_divisible = bc.values[n as usize].is_zero();
        let (pic_length, h1_dim, raw_numerator_valuation) = if divisible_by_q_minus_1 {
            let length = *next_length.next().expect("one length per divisible index");
            let dim = match (bc_divisible, length) {
                (false, _) => H1Dim::Exact(0),
                (true, 0) => H1Dim::Exact(1),
                (true, _) => H1Dim::AtLeast(1),
            };
            (Some(length), dim, None)
        } else {
            let ctx = raw_ctx.as_ref().expect("context exists when some index is not divisible");
            (None, H1Dim::OutOfScope, Some(ctx.l_char_sum(n)?.numerator_at_one_valuation))
        };
        indices.push(IndexClassification {
            n,
            divisible_by_q_minus_1,
            bc_divisible,
            pic_length,
            h1_dim,
            local_dlog_vanished: None,
            raw_numerator_valuation,
        });
    }
    let lseries_ms = millis(clock);

    let clock = Instant::now();
    if options.check_local && top > 0 {
        check_local(residue, &bc.values, &mut indices)?;
    }
    let local_ms = millis(clock);

    let report = PrimeReport {
        q,
        prime: ring.render(residue.prime()),
        degree: residue.prime_degree(),
        irregular,
        indices,
        witt_precision,
        timings: options.timings.then_some(Timings { bernoulli_ms, lseries_ms, local_ms }),
    };
    validate(&report)?;
    Ok(report)
}

fn check_local(
    residue: &Arc<ResidueField>,
    bc: &[crate::algebra::residue::ResidueElem],
    indices: &mut [IndexClassification],
) -> Result<()> {
    let model = LocalModel::new(residue.clone())?;
    if !model.eisenstein_residual().is_zero() {
        return Err(Error::Consistency("t(λ) does not satisfy the torsion relation".into()));
    }
    let local = model.local_indices()?;
    let mut vanished = Vec::with_capacity(local.len());
    for (entry, c) in local.iter().zip(indices.iter()) {
        let n = entry.n;
        if let Some(value) = entry.bc {
            if value != bc[n as usize] {
                return Err(Error::Consistency(format!("local BC_{n} disagrees with the global value")));
            }
            if entry.dlog_vanished != c.bc_divisible {
                return Err(Error::Consistency(format!("dlog λ_{n} vanishing disagrees with p | BC_{n}")));
            }
        }
        vanished.push(entry.dlog_vanished);
    }
    for (c, v) in indices.iter_mut().zip(vanished) {
        c.local_dlog_vanished = Some(v);
    }
    Ok(())
}

/// Re-checks the classification rules independently of how they were set.
pub fn validate(report: &PrimeReport) -> Result<()> {
    let fail = |n: u32, what: &str| Err(Error::Consistency(format!("{}: n = {n}: {what}", report.prime)));
    let step = report.q - 1;
    for c in &report.indices {
        let divisible = c.n % step == 0;
        if divisible != c.divisible_by_q_minus_1 {
            return fail(c.n, "divisibility flag is wrong");
        }
        if divisible != c.pic_length.is_some() {
            return fail(c.n, "class-group length present exactly for divisible indices");
        }
        let ok = match c.h1_dim {
            H1Dim::Exact(0) => divisible && !c.bc_divisible,
            H1Dim::Exact(1) => divisible && c.bc_divisible && c.pic_length == Some(0),
            H1Dim::AtLeast(1) => divisible && c.bc_divisible && c.pic_length.is_some_and(|l| l > 0),
            H1Dim::OutOfScope => !divisible,
            _ => false,
        };
        if !ok {
            return fail(c.n, "dimension contradicts the classification rules");
        }
    }
    let expected: Vec<u32> =
        report.indices.iter().filter(|c| c.divisible_by_q_minus_1 && c.bc_divisible).map(|c| c.n).collect();
    if expected != report.irregular {
        return Err(Error::Consistency(format!("{}: irregular set disagrees with the per-index flags", report.prime)));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCount {
    pub degree: usize,
    pub scanned: usize,
    pub irregular: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: String,
    pub q: u32,
    /// `None` for prime `q`.
    pub fq_modulus: Option<String>,
    pub max_degree: usize,
    pub summary: Vec<DegreeCount>,
    pub primes: Vec<PrimeReport>,
}

/// Classifies every monic irreducible of degree `1..=max_degree` and keeps
/// those with a nonempty irregular set, in degree then canonical order.
pub fn scan(fq: &Fq, max_degree: usize, options: &ClassifyOptions) -> Result<ScanReport> {
    if max_degree == 0 {
        return Err(Error::OutOfRange { n: 0, range: "max degree >= 1".into() });
    }
    let ring = PolyRing::new(fq.clone());
    let mut summary = Vec::with_capacity(max_degree);
    let mut primes = Vec::new();
    for degree in 1..=max_degree {
        let candidates = ring.monic_irreducibles(degree)?;
        let reports = candidates
            .par_iter()
            .map(|p| classify_prime(&ring, p, options))
            .collect::<Result<Vec<_>>>()?;
        let scanned = reports.len();
        let irregular: Vec<PrimeReport> = reports.into_iter().filter(|r| !r.irregular.is_empty()).collect();
        summary.push(DegreeCount { degree, scanned, irregular: irregular.len() });
        primes.extend(irregular);
    }
    Ok(ScanReport {
        schema_version: SCHEMA_VERSION.into(),
        q: fq.q(),
        fq_modulus: (fq.r() > 1).then(|| fq.modulus_text()),
        max_degree,
        summary,
        primes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: String,
    pub fq_modulus: Option<String>,
    pub report: PrimeReport,
}

impl ClassifyReport {
    pub fn new(fq: &Fq, report: PrimeReport) -> Self {
        ClassifyReport {
            schema_version: SCHEMA_VERSION.into(),
            fq_modulus: (fq.r() > 1).then(|| fq.modulus_text()),
            report,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

fn index_set(ns: &[u32]) -> String {
    let parts: Vec<String> = ns.iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn write_columns(out: &mut dyn Write, rows: &[[String; 3]]) -> Result<()> {
    let width = |i: usize| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0);
    let (w0, w1) = (width(0), width(1));
    for r in rows {
        let pad0 = w0 - r[0].chars().count();
        let pad1 = w1 - r[1].chars().count();
        writeln!(out, "{}{}  {}{}  {}", r[0], " ".repeat(pad0), r[1], " ".repeat(pad1), r[2])?;
    }
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    prime: &'a str,
    degree: usize,
    n: u32,
    divisible_by_q_minus_1: bool,
    bc_divisible: bool,
    pic_length: Option<u32>,
    h1_dim: String,
    local_dlog_vanished: Option<bool>,
    raw_numerator_valuation: Option<u32>,
}

fn write_csv<'a>(out: &mut dyn Write, reports: impl Iterator<Item = &'a PrimeReport>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut any = false;
    for r in reports {
        for c in &r.indices {
            any = true;
            w.serialize(CsvRow {
                prime: &r.prime,
                degree: r.degree,
                n: c.n,
                divisible_by_q_minus_1: c.divisible_by_q_minus_1,
                bc_divisible: c.bc_divisible,
                pic_length: c.pic_length,
                h1_dim: c.h1_dim.label(),
                local_dlog_vanished: c.local_dlog_vanished,
                raw_numerator_valuation: c.raw_numerator_valuation,
            })
            .map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    if !any {
        w.write_record([
            "prime",
            "degree",
            "n",
            "divisible_by_q_minus_1",
            "bc_divisible",
            "pic_length",
            "h1_dim",
            "local_dlog_vanished",
            "raw_numerator_valuation",
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Three columns per irregular prime: prime, index set, dimension.
pub fn emit_scan(report: &ScanReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => write_json(out, report),
        Format::Csv => write_csv(out, report.primes.iter()),
        Format::Table => {
            let mut rows = vec![["prime".to_string(), "{n : p | BC_n}".to_string(), "dim H^1".to_string()]];
            for r in &report.primes {
                rows.push([r.prime.clone(), index_set(&r.irregular), r.dim_summary().label()]);
            }
            write_columns(out, &rows)?;
            if report.primes.iter().any(|r| matches!(r.dim_summary(), H1Dim::AtLeast(_))) {
                writeln!(out, "\n{AT_LEAST_FOOTNOTE}")?;
            }
            Ok(())
        }
    }
}

/// Per-index detail for one prime.
pub fn emit_classify(report: &ClassifyReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => write_json(out, report),
        Format::Csv => write_csv(out, std::iter::once(&report.report)),
        Format::Table => {
            let r = &report.report;
            writeln!(out, "prime: {}", r.prime)?;
            writeln!(out, "irregular indices: {}", index_set(&r.irregular))?;
            writeln!(out, "dim H^1 (in scope): {}", r.dim_summary().label())?;
            if let Some(k) = r.witt_precision {
                writeln!(out, "witt precision: {k}")?;
            }
            let yes_no = |b: bool| if b { "yes" } else { "no" }.to_string();
            let local = |c: &IndexClassification| c.local_dlog_vanished.map_or("-".into(), |v| yes_no(v));
            writeln!(out)?;
            let mut rows = vec![["n".to_string(), "p | BC_n".to_string(), "pic length / dim / dlog vanishes".to_string()]];
            let mut raw = vec![["n".to_string(), "v(S_n(1))".to_string(), "dlog vanishes".to_string()]];
            for c in &r.indices {
                if c.divisible_by_q_minus_1 {
                    let tail = format!(
                        "{} / {} / {}",
                        c.pic_length.expect("divisible index has a length"),
                        c.h1_dim.label(),
                        local(c)
                    );
                    rows.push([c.n.to_string(), yes_no(c.bc_divisible), tail]);
                } else {
                    let v = c.raw_numerator_valuation.map_or("-".into(), |v| v.to_string());
                    raw.push([c.n.to_string(), v, local(c)]);
                }
            }
            write_columns(out, &rows)?;
            if raw.len() > 1 {
                writeln!(out, "\n{NO_INTERPRETATION_BANNER}")?;
                write_columns(out, &raw)?;
            }
            if matches!(r.dim_summary(), H1Dim::AtLeast(_)) {
                writeln!(out, "\n{AT_LEAST_FOOTNOTE}")?;
            }
            Ok(())
        }
    }
}

/// `BC_n mod p` for `0 <= n <= q^d - 2`, rendered in `A/p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcReport {
    pub schema_version: String,
    pub q: u32,
    pub fq_modulus: Option<String>,
    pub prime: String,
    pub values: Vec<String>,
}

impl BcReport {
    pub fn compute(ring: &PolyRing, prime: &Poly) -> Result<Self> {
        let fq = ring.field();
        let residue = ResidueField::new(fq.clone(), prime)?;
        let bc = bc_numbers(&residue)?;
        Ok(BcReport {
            schema_version: SCHEMA_VERSION.into(),
            q: fq.q(),
            fq_modulus: (fq.r() > 1).then(|| fq.modulus_text()),
            prime: ring.render(prime),
            values: bc.values.iter().map(|&v| residue.render(v)).collect(),
        })
    }
}

pub fn emit_bc(report: &BcReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => write_json(out, report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(["n", "bc_mod_p"]).map_err(io)?;
            for (n, v) in report.values.iter().enumerate() {
                w.write_record([n.to_string().as_str(), v]).map_err(io)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Table => {
            writeln!(out, "prime: {}", report.prime)?;
            let mut rows = vec![["n".to_string(), "BC_n mod p".to_string(), String::new()]];
            rows.extend(report.values.iter().enumerate().map(|(n, v)| [n.to_string(), v.clone(), String::new()]));
            let mut buf = Vec::new();
            write_columns(&mut buf, &rows)?;
            for line in String::from_utf8(buf).expect("utf-8").lines() {
                writeln!(out, "{}", line.trim_end())?;
            }
            Ok(())
        }
    }
}

/// Divisible indices where `dlog λ_n` survives the truncation although
/// `L(1, chi^-n)` is not a unit. Only `v(L) = 0 => λ_n != 0` holds in
/// general, because the L-value measures `Pic^0 X`, which can be larger
/// than `Pic Y`; these indices are recorded, not rejected.
pub fn nonunit_with_local_dlog(report: &PrimeReport) -> Vec<u32> {
    report
        .indices
        .iter()
        .filter(|c| c.divisible_by_q_minus_1 && c.local_dlog_vanished == Some(false) && c.pic_length != Some(0))
        .map(|c| c.n)
        .collect()
}

/// Prime text forms as a set, for comparisons that ignore ordering.
pub fn prime_set(report: &ScanReport) -> BTreeSet<(String, Vec<u32>)> {
    report.primes.iter().map(|r| (r.prime.clone(), r.irregular.clone())).collect()
}
