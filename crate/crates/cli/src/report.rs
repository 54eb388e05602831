//! Verification of the curvature, diameter and eigenvalue bounds of an
//! amply regular graph.

use std::fmt::Write as _;

use amply::spectral::{adjacency_spectrum_in, SPECTRAL_TOLERANCE};
use amply::witness::{prop_3_1_certificate, verify_edge_witness};
use amply::{curvature_all_edges, AmplyParams, Error, Graph, Rational, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    /// Printed for comparison, never part of the verdict.
    Reported,
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "n/a",
            Status::Reported => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub value: String,
    pub bound: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str, claim: &str, value: impl ToString, bound: impl ToString, status: Status) -> Check {
        Check {
            name: name.into(),
            claim: claim.into(),
            value: value.to_string(),
            bound: bound.to_string(),
            status,
            note: None,
        }
    }

    fn not_applicable(name: &str, claim: &str, why: &str) -> Check {
        let mut c = Check::new(name, claim, "-", "-", Status::NotApplicable);
        c.note = Some(why.into());
        c
    }

    fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub u: usize,
    pub v: usize,
    pub kappa: Rational,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterRow {
    pub diameter: usize,
    pub checks: Vec<Check>,
}

/// Eigenvalue data as 12-significant-digit decimals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralRow {
    pub sigma: Option<String>,
    pub lambda1: Option<String>,
    pub residual: Option<String>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub edges_checked: usize,
    pub edges_passed: usize,
    pub h_regular: usize,
    pub classes_expected: usize,
    pub decompositions_complete: usize,
    pub bijective_classes: usize,
    pub chains_checked: usize,
    pub chains_passed: usize,
    pub min_kappa_lb: Option<Rational>,
    pub max_pi0_cost: Option<Rational>,
    pub failures: Vec<String>,
}

/// Conference-graph comparison of the computed curvature with the
/// conjectured value `1/2 + 1/(2γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConferenceRow {
    pub gamma: usize,
    pub lower_bound: Rational,
    pub conjectured: Rational,
    pub kappa_min: Rational,
    pub kappa_max: Rational,
    pub matches_conjecture: bool,
    pub bound: Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No parameter-dependent assertion applied.
    Vacuous,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Vacuous => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub graph: String,
    pub params: AmplyParams,
    pub edges: Vec<EdgeRow>,
    pub kappa_min: Option<Rational>,
    pub kappa_max: Option<Rational>,
    pub diameter: DiameterRow,
    pub spectral: SpectralRow,
    pub witness: Option<WitnessSummary>,
    pub conference: Option<ConferenceRow>,
    pub verdict: Verdict,
}

/// Names of checks that hold for every connected regular graph; they do not
/// make a verdict non-vacuous on their own.
const GENERAL_CHECKS: [&str; 2] = ["lichnerowicz", "bonnet-myers"];

impl VerificationReport {
    pub fn checks(&self) -> impl Iterator<Item = &Check> + '_ {
        self.edges
            .iter()
            .flat_map(|e| &e.checks)
            .chain(&self.diameter.checks)
            .chain(&self.spectral.checks)
            .chain(self.conference.iter().map(|c| &c.bound))
    }

    fn compute_verdict(&self) -> Verdict {
        let mut applied = false;
        for c in self.checks() {
            match c.status {
                Status::Fail => return Verdict::Fail,
                Status::Pass if !GENERAL_CHECKS.contains(&c.name.as_str()) => applied = true,
                _ => {}
            }
        }
        if self.witness.as_ref().is_some_and(|w| w.edges_passed < w.edges_checked) {
            return Verdict::Fail;
        }
        if applied {
            Verdict::Pass
        } else {
            Verdict::Vacuous
        }
    }
}

fn r(n: usize, d: usize) -> Rational {
    Rational::new(n as i64, d as i64).expect("nonzero degree")
}

/// Formats with 12 significant digits, trailing zeros trimmed.
pub fn sig12(x: f64) -> String {
    if x.abs() < 1e-12 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn edge_checks(g: &Graph, p: &AmplyParams, x: usize, y: usize, kappa: Rational) -> Vec<Check> {
    let (d, a) = (p.d, p.alpha);
    let mut out = Vec::new();
    let Some(b) = p.beta else {
        out.push(Check::not_applicable("upper-bound", "κ ≤ (2+α)/d", "β undefined"));
        return out;
    };
    let upper = r(2 + a, d);
    out.push(Check::new("upper-bound", "κ ≤ (2+α)/d", kappa, upper, Status::from_bool(kappa <= upper)));
    if a == 0 && b >= 2 {
        let v = r(2, d);
        out.push(Check::new("girth-four", "κ = 2/d", kappa, v, Status::from_bool(kappa == v)));
    }
    if a == 1 && b > 1 {
        let v = r(3, d);
        out.push(Check::new("alpha-one", "κ = 3/d", kappa, v, Status::from_bool(kappa == v)));
    }
    if a >= 1 && a + 1 == b {
        let v = r(2, d);
        out.push(
            Check::new("alpha-beta-minus-one", "κ ≥ 2/d", kappa, v, Status::from_bool(kappa >= v))
                .with_note("equality as sometimes stated is refuted by H(2,3); asserted as a lower bound"),
        );
    }
    if a == b && a > 1 {
        let v = r(2, d);
        out.push(Check::new("alpha-equals-beta", "κ ≥ 2/d", kappa, v, Status::from_bool(kappa >= v)));
    }
    if b > a && a >= 1 {
        let v = r(3, d);
        out.push(Check::new("main-bound", "κ ≥ 3/d", kappa, v, Status::from_bool(kappa >= v)));
    }
    if 2 * b > a + d {
        let check = match prop_3_1_certificate(g, x, y, p) {
            Ok(c) => Check::new(
                "full-curvature",
                "κ = (2+α)/d via N_x–N_y perfect matching",
                kappa,
                c.kappa,
                Status::from_bool(kappa == c.kappa),
            ),
            Err(e) => Check::new("full-curvature", "κ = (2+α)/d via N_x–N_y perfect matching", kappa, upper, Status::Fail)
                .with_note(e.to_string()),
        };
        out.push(check);
    }
    out
}

fn diameter_checks(p: &AmplyParams, diam: usize, kappa_min: Option<Rational>) -> Vec<Check> {
    let (d, a) = (p.d, p.alpha);
    let mut out = Vec::new();
    match p.beta {
        Some(b) if b != 1 && b >= a => out.push(Check::new(
            "diameter-at-most-d",
            "diam ≤ d when 1 ≠ β ≥ α",
            diam,
            d,
            Status::from_bool(diam <= d),
        )),
        _ => out.push(Check::not_applicable("diameter-at-most-d", "diam ≤ d when 1 ≠ β ≥ α", "1 ≠ β ≥ α fails")),
    }
    if p.beta_exceeds_alpha_ge_one() {
        let bound = 2 * d / 3;
        out.push(Check::new(
            "diameter-two-thirds",
            "diam ≤ ⌊2d/3⌋ when β > α ≥ 1",
            diam,
            bound,
            Status::from_bool(diam <= bound),
        ));
    } else {
        out.push(Check::not_applicable("diameter-two-thirds", "diam ≤ ⌊2d/3⌋ when β > α ≥ 1", "β > α ≥ 1 fails"));
    }
    match kappa_min {
        Some(k) if k > Rational::ZERO => {
            let bound = (Rational::integer(2) / k).floor();
            out.push(Check::new(
                "bonnet-myers",
                "diam ≤ ⌊2/κ_min⌋",
                diam,
                bound,
                Status::from_bool(diam as i64 <= bound),
            ));
        }
        _ => out.push(Check::not_applicable("bonnet-myers", "diam ≤ ⌊2/κ_min⌋", "κ_min ≤ 0")),
    }

    // comparison bounds from the literature, reported only
    let claim = "diam ≤ d − β + 2 (distance-regular, d ≥ 3, 1 ≠ β > α)";
    out.push(match p.beta {
        Some(b) if d >= 3 && b != 1 && b > a => {
            let bound = d + 2 - b;
            Check::new("drg-comparison", claim, diam, bound, Status::Reported).with_note(format!(
                "comparison (distance-regular hypothesis not verified); {}",
                if diam <= bound { "holds" } else { "does not hold" }
            ))
        }
        _ => Check::not_applicable("drg-comparison", claim, "d ≥ 3, 1 ≠ β > α fails"),
    });
    let claim = "diam ≤ d − 2β + 4 (1 ≠ β ≥ α, diam ≥ 4)";
    out.push(match p.beta {
        Some(b) if b != 1 && b >= a && diam >= 4 => {
            let bound = (d + 4) as i64 - 2 * b as i64;
            Check::new("amply-diameter-four", claim, diam, bound, Status::Reported)
                .with_note(if diam as i64 <= bound { "holds" } else { "does not hold" })
        }
        _ => Check::not_applicable("amply-diameter-four", claim, "1 ≠ β ≥ α and diam ≥ 4 required"),
    });
    let claim = "d ≥ (3 − 2/β)(β − 3 + ⌊diam/2⌋) (β ≥ max{3, α}, diam ≥ 6)";
    out.push(match p.beta {
        Some(b) if b >= 3 && b >= a && diam >= 6 => {
            let rhs = (Rational::integer(3) - r(2, b)) * Rational::integer((b + diam / 2) as i64 - 3);
            Check::new("amply-diameter-six", claim, d, rhs, Status::Reported)
                .with_note(if Rational::from(d) >= rhs { "holds" } else { "does not hold" })
        }
        _ => Check::not_applicable("amply-diameter-six", claim, "β ≥ max{3, α} and diam ≥ 6 required"),
    });
    out
}

fn spectral_row(g: &Graph, p: &AmplyParams, kappa_min: Option<Rational>, cap: usize) -> Result<SpectralRow> {
    let spectrum = match adjacency_spectrum_in::<f64>(g, cap) {
        Ok(s) => s,
        Err(Error::SizeLimit { size, limit }) => {
            let why = format!("n = {size} exceeds spectrum cap {limit}");
            return Ok(SpectralRow {
                sigma: None,
                lambda1: None,
                residual: None,
                checks: vec![Check::not_applicable("spectrum", "eigenvalue bounds", &why)],
            });
        }
        Err(e) => return Err(e),
    };
    let d = p.d as f64;
    let sigma = spectrum.second_largest();
    let mut checks = Vec::new();
    let sigma_check = |name: &str, claim: &str, bound: f64, applies: bool, why: &str| match sigma {
        Some(s) if applies => Check::new(name, claim, sig12(s), sig12(bound), Status::from_bool(s <= bound + SPECTRAL_TOLERANCE)),
        _ => Check::not_applicable(name, claim, why),
    };
    let a = p.alpha;
    let wide = matches!(p.beta, Some(b) if b != 1 && b >= a);
    checks.push(sigma_check("sigma-at-most-d-minus-2", "σ_{n−1} ≤ d − 2 when 1 ≠ β ≥ α", d - 2.0, wide, "1 ≠ β ≥ α fails"));
    checks.push(sigma_check(
        "sigma-at-most-d-minus-3",
        "σ_{n−1} ≤ d − 3 when β > α ≥ 1",
        d - 3.0,
        p.beta_exceeds_alpha_ge_one(),
        "β > α ≥ 1 fails",
    ));
    let lambda1 = sigma.filter(|_| p.d > 0).map(|s| 1.0 - s / d);
    match (lambda1, kappa_min) {
        (Some(l), Some(k)) => checks.push(Check::new(
            "lichnerowicz",
            "λ₁ ≥ κ_min",
            sig12(l),
            k,
            Status::from_bool(l >= k.to_f64() - SPECTRAL_TOLERANCE),
        )),
        _ => checks.push(Check::not_applicable("lichnerowicz", "λ₁ ≥ κ_min", "no edges")),
    }
    Ok(SpectralRow {
        sigma: sigma.map(sig12),
        lambda1: lambda1.map(sig12),
        residual: Some(format!("{:.3e}", spectrum.residual)),
        checks,
    })
}

fn conference_row(p: &AmplyParams, kappa_min: Rational, kappa_max: Rational) -> Option<ConferenceRow> {
    let gamma = p.d / 2;
    let is_conference = gamma >= 2
        && p.d == 2 * gamma
        && p.n == 4 * gamma + 1
        && p.alpha + 1 == gamma
        && p.beta == Some(gamma);
    if !is_conference {
        return None;
    }
    let lower_bound = r(3, 2 * gamma);
    let conjectured = r(1, 2) + r(1, 2 * gamma);
    Some(ConferenceRow {
        gamma,
        lower_bound,
        conjectured,
        kappa_min,
        kappa_max,
        matches_conjecture: kappa_min == conjectured && kappa_max == conjectured,
        bound: Check::new(
            "conference-bound",
            "κ ≥ 3/(2γ)",
            kappa_min,
            lower_bound,
            Status::from_bool(kappa_min >= lower_bound),
        ),
    })
}

fn witness_summary(g: &Graph, p: &AmplyParams, edges: &[(usize, usize)]) -> Result<WitnessSummary> {
    let reports = edges
        .par_iter()
        .map(|&(x, y)| verify_edge_witness(g, x, y, p))
        .collect::<Result<Vec<_>>>()?;
    let mut s = WitnessSummary {
        classes_expected: p.beta.map_or(0, |b| b - 1),
        ..WitnessSummary::default()
    };
    for rep in &reports {
        s.edges_checked += 1;
        s.edges_passed += usize::from(rep.pass());
        s.h_regular += usize::from(rep.h_regular);
        s.decompositions_complete += usize::from(rep.h_regular && rep.classes == rep.classes_expected);
        s.bijective_classes += rep.bijective_classes;
        s.chains_checked += rep.chains_checked;
        s.chains_passed += rep.chains_passed;
        if let Some(c) = &rep.certificate {
            s.min_kappa_lb = Some(s.min_kappa_lb.map_or(c.kappa_lb, |m| m.min(c.kappa_lb)));
            s.max_pi0_cost = Some(s.max_pi0_cost.map_or(c.pi0_cost, |m| m.max(c.pi0_cost)));
        }
        if let Some(f) = &rep.failure {
            s.failures.push(format!("{}-{}: {f}", rep.x, rep.y));
        }
    }
    Ok(s)
}

/// Runs every applicable check on a connected amply regular graph.
///
/// Errors are input or hypothesis failures (not amply regular,
/// disconnected); failed bounds are reported per row.
pub fn verify(g: &Graph, name: &str, spectrum_cap: usize) -> Result<VerificationReport> {
    let params = g.amply_params()?;
    let table = curvature_all_edges(g)?;
    let edges: Vec<EdgeRow> = table
        .rows
        .par_iter()
        .map(|row| EdgeRow {
            u: row.u,
            v: row.v,
            kappa: row.kappa,
            checks: edge_checks(g, &params, row.u, row.v, row.kappa),
        })
        .collect();
    let diam = g.diameter()?;
    let diameter = DiameterRow {
        diameter: diam,
        checks: diameter_checks(&params, diam, table.min),
    };
    let spectral = spectral_row(g, &params, table.min, spectrum_cap)?;
    let witness = if params.beta_exceeds_alpha_ge_one() {
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
        Some(witness_summary(g, &params, &pairs)?)
    } else {
        None
    };
    let conference = match (table.min, table.max) {
        (Some(lo), Some(hi)) => conference_row(&params, lo, hi),
        _ => None,
    };
    let mut report = VerificationReport {
        graph: name.to_string(),
        params,
        edges,
        kappa_min: table.min,
        kappa_max: table.max,
        diameter,
        spectral,
        witness,
        conference,
        verdict: Verdict::Vacuous,
    };
    report.verdict = report.compute_verdict();
    Ok(report)
}

fn write_check(out: &mut String, c: &Check) {
    let _ = write!(out, "  [{:>4}] {:<22} {}: {} vs {}", c.status.label(), c.name, c.claim, c.value, c.bound);
    if let Some(n) = &c.note {
        let _ = write!(out, " ({n})");
    }
    out.push('\n');
}

pub fn render_text(rep: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {} params {}", rep.graph, rep.params);
    let range = match (rep.kappa_min, rep.kappa_max) {
        (Some(lo), Some(hi)) if lo == hi => format!("κ = {lo} on all {} edges", rep.edges.len()),
        (Some(lo), Some(hi)) => format!("κ ∈ [{lo}, {hi}] over {} edges", rep.edges.len()),
        _ => "no edges".to_string(),
    };
    let _ = writeln!(out, "curvature: {range}");
    for e in &rep.edges {
        let failed: Vec<&Check> = e.checks.iter().filter(|c| c.status == Status::Fail).collect();
        let _ = writeln!(
            out,
            "  edge {}-{} κ = {} {}",
            e.u,
            e.v,
            e.kappa,
            if failed.is_empty() { "ok" } else { "FAIL" }
        );
        for c in failed {
            write_check(&mut out, c);
        }
    }
    if let Some(first) = rep.edges.first() {
        let _ = writeln!(out, "edge checks (shown for {}-{}):", first.u, first.v);
        for c in &first.checks {
            write_check(&mut out, c);
        }
    }
    let _ = writeln!(out, "diameter: {}", rep.diameter.diameter);
    for c in &rep.diameter.checks {
        write_check(&mut out, c);
    }
    let _ = writeln!(
        out,
        "spectrum: σ_{{n−1}} = {} λ₁ = {} residual {}",
        rep.spectral.sigma.as_deref().unwrap_or("-"),
        rep.spectral.lambda1.as_deref().unwrap_or("-"),
        rep.spectral.residual.as_deref().unwrap_or("-")
    );
    for c in &rep.spectral.checks {
        write_check(&mut out, c);
    }
    if let Some(w) = &rep.witness {
        let _ = writeln!(
            out,
            "witness: {}/{} edges pass; H regular {}/{}; decompositions with β−1 = {} classes {}/{}; bijective classes {}; chains {}/{}; min κ_lb {}; max cost(π₀) {}",
            w.edges_passed,
            w.edges_checked,
            w.h_regular,
            w.edges_checked,
            w.classes_expected,
            w.decompositions_complete,
            w.edges_checked,
            w.bijective_classes,
            w.chains_passed,
            w.chains_checked,
            w.min_kappa_lb.map_or("-".into(), |k| k.to_string()),
            w.max_pi0_cost.map_or("-".into(), |k| k.to_string()),
        );
        for f in &w.failures {
            let _ = writeln!(out, "  failure {f}");
        }
    }
    if let Some(c) = &rep.conference {
        let _ = writeln!(
            out,
            "conference graph γ = {}: κ ∈ [{}, {}], conjectured {} ({})",
            c.gamma,
            c.kappa_min,
            c.kappa_max,
            c.conjectured,
            if c.matches_conjecture { "matches" } else { "differs" }
        );
        write_check(&mut out, &c.bound);
    }
    let _ = writeln!(
        out,
        "verdict: {}",
        match rep.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Vacuous => "vacuous (no parameter bound applies)",
        }
    );
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(rep: &VerificationReport) -> String {
    let mut out = String::from("scope,name,value,bound,status\n");
    let mut row = |scope: &str, c: &Check| {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(scope),
            c.name,
            csv_field(&c.value),
            csv_field(&c.bound),
            c.status.label()
        );
    };
    for e in &rep.edges {
        for c in &e.checks {
            row(&format!("edge {}-{}", e.u, e.v), c);
        }
    }
    for c in &rep.diameter.checks {
        row("diameter", c);
    }
    for c in &rep.spectral.checks {
        row("spectrum", c);
    }
    if let Some(c) = &rep.conference {
        row("conference", &c.bound);
    }
    out
}
