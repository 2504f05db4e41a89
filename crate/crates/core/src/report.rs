//! End-to-end analysis of a periodic graph and its text and JSON renderings.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{parse_rational, to_pq_string};
use crate::algebra::{Rational, UniPoly};
use crate::bloch::{build_bloch, char_det, flat_bands, realize_eigenfunction, specialize, EigenfunctionTable, FlatBand};
use crate::error::{Error, Result};
use crate::lattice::QuotientGraph;
use crate::syzygy::{density, DensityResult, Ring};
use crate::truncation::{convergence_report, report_violations, support_width, TruncationRow};

/// Digits printed for decimal approximations of eigenvalues.
pub const APPROX_DIGITS: usize = 12;

#[derive(Clone, Debug)]
pub struct BandAnalysis {
    pub band: FlatBand,
    pub result: DensityResult,
    pub tables: Vec<EigenfunctionTable>,
    pub support_width: usize,
    /// Generator components in canonical text.
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub name: String,
    pub n: usize,
    pub dim: usize,
    pub degrees: Vec<usize>,
    pub stage_bound: usize,
    pub char_det: String,
    pub coefficient_gcd: UniPoly,
    pub bands: Vec<BandAnalysis>,
    pub timing: Vec<(&'static str, Duration)>,
}

pub fn default_stage_bound(g: &QuotientGraph) -> usize {
    g.dim() + 3
}

/// Full exact pipeline: Bloch matrix, flat bands, kernels and densities.
pub fn analyze(name: &str, g: &QuotientGraph, stage_bound: Option<usize>) -> Result<AnalysisReport> {
    let stage_bound = stage_bound.unwrap_or_else(|| default_stage_bound(g));
    let mut timing = Vec::new();
    let t = Instant::now();
    let b = build_bloch(g);
    let det = char_det(&b)?;
    timing.push(("determinant", t.elapsed()));
    let t = Instant::now();
    let bands = flat_bands(&b)?;
    timing.push(("flat bands", t.elapsed()));
    let t = Instant::now();
    let analyzed = bands
        .par_iter()
        .map(|band| {
            let ring = Ring::new(&band.field(), g.dim());
            let m = specialize(&b, band);
            let result = density(&ring, &m, stage_bound)?;
            let tables = result
                .generators
                .iter()
                .map(|v| realize_eigenfunction(&ring.to_components(v), g))
                .collect::<Result<Vec<_>>>()?;
            let generators = result.generators.iter().map(|v| ring.render(v)).collect();
            Ok(BandAnalysis { band: band.clone(), support_width: support_width(&tables)?, tables, generators, result })
        })
        .collect::<Result<Vec<_>>>()?;
    timing.push(("syzygies", t.elapsed()));
    Ok(AnalysisReport {
        name: name.to_string(),
        n: g.n(),
        dim: g.dim(),
        degrees: g.degrees(),
        stage_bound,
        char_det: det.render(),
        coefficient_gcd: det.coefficient_gcd(),
        bands: analyzed,
        timing,
    })
}

/// What the truncation stage needs to know about a band.
#[derive(Clone, Debug)]
pub struct BandSeed {
    pub band: FlatBand,
    pub density: Option<Rational>,
    pub support_width: usize,
}

impl From<&BandAnalysis> for BandSeed {
    fn from(a: &BandAnalysis) -> Self {
        BandSeed { band: a.band.clone(), density: Some(a.result.density.clone()), support_width: a.support_width }
    }
}

#[derive(Clone, Debug)]
pub struct BandTruncation {
    pub band: FlatBand,
    pub density: Option<Rational>,
    pub thickness: usize,
    pub rows: Vec<TruncationRow>,
}

/// Convergence rows for `j = 1..=jmax` per band; `thickness` overrides each
/// band's support width.
pub fn truncate(g: &QuotientGraph, seeds: &[BandSeed], jmax: usize, thickness: Option<usize>) -> Result<Vec<BandTruncation>> {
    if jmax == 0 {
        return Err(Error::Invalid("jmax must be at least 1".into()));
    }
    let js: Vec<usize> = (1..=jmax).collect();
    seeds
        .iter()
        .map(|s| {
            let j0 = thickness.unwrap_or(s.support_width).max(1);
            let rows = convergence_report(g, &s.band, &js, j0, s.density.as_ref())?;
            Ok(BandTruncation { band: s.band.clone(), density: s.density.clone(), thickness: j0, rows })
        })
        .collect()
}

/// Outcome of running analysis and truncation and checking every envelope.
#[derive(Clone, Debug)]
pub struct Verification {
    pub analysis: AnalysisReport,
    pub truncation: Vec<BandTruncation>,
    pub violations: Vec<String>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the pipeline on `g`; when `reference` is given, a band set differing
/// from the reference graph's is a violation too.
pub fn verify(
    name: &str,
    g: &QuotientGraph,
    reference: Option<&QuotientGraph>,
    jmax: usize,
    thickness: Option<usize>,
    stage_bound: Option<usize>,
) -> Result<Verification> {
    let analysis = analyze(name, g, stage_bound)?;
    let seeds: Vec<BandSeed> = analysis.bands.iter().map(BandSeed::from).collect();
    let truncation = truncate(g, &seeds, jmax, thickness)?;
    let mut violations: Vec<String> = Vec::new();
    for t in &truncation {
        for v in report_violations(&t.rows) {
            violations.push(format!("band {}: {}", lambda_minpoly_text(&t.band), v));
        }
    }
    if let Some(r) = reference {
        let expect: Vec<UniPoly> = flat_bands(&build_bloch(r))?.into_iter().map(|b| b.minpoly_factor).collect();
        let found: Vec<UniPoly> = analysis.bands.iter().map(|b| b.band.minpoly_factor.clone()).collect();
        if expect != found {
            let show = |v: &[UniPoly]| v.iter().map(|p| p.render("mu")).collect::<Vec<_>>().join(", ");
            violations.push(format!("band set changed: expected [{}], found [{}]", show(&expect), show(&found)));
        }
    }
    Ok(Verification { analysis, truncation, violations })
}

pub fn lambda_minpoly_text(b: &FlatBand) -> String {
    b.lambda.minpoly.render("lambda")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandJson {
    /// Minimal polynomial of lambda.
    pub minpoly: String,
    /// Coefficients of the minimal polynomial of mu, lowest degree first.
    pub minpoly_mu: Vec<String>,
    /// Non-authoritative decimal approximations of the real roots.
    pub lambda_approx: Vec<String>,
    pub density: String,
    pub ranks: Vec<usize>,
    pub kernel_rank: usize,
    pub generators: Vec<Vec<String>>,
    pub support_width: usize,
    pub multiplicity_in_gcd: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowJson {
    pub j: usize,
    pub f_size: usize,
    pub boundary_size: usize,
    pub dim_finite_support: usize,
    pub shubin_mult: usize,
    pub avg_density: String,
    pub shubin_density: String,
    pub bound: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationJson {
    pub minpoly: String,
    pub density: Option<String>,
    pub thickness: usize,
    pub rows: Vec<RowJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub graph: GraphJson,
    pub stage_bound: usize,
    pub char_det: String,
    pub coefficient_gcd: String,
    pub flat_bands: Vec<BandJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Vec<TruncationJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Vec<(String, f64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub passed: bool,
    pub violations: Vec<String>,
}

impl BandJson {
    pub fn from_analysis(a: &BandAnalysis) -> Self {
        BandJson {
            minpoly: lambda_minpoly_text(&a.band),
            minpoly_mu: a.band.minpoly_factor.coeff_strings(),
            lambda_approx: a.band.lambda.approximations(APPROX_DIGITS),
            density: to_pq_string(&a.result.density),
            ranks: a.result.ranks.clone(),
            kernel_rank: a.result.kernel_rank,
            generators: a.generators.clone(),
            support_width: a.support_width,
            multiplicity_in_gcd: a.band.multiplicity_in_gcd,
        }
    }

    /// Rebuilds the truncation input from a stored analysis.
    pub fn to_seed(&self) -> Result<BandSeed> {
        let minpoly = UniPoly::from_coeff_strings(&self.minpoly_mu)?;
        let density = parse_rational(&self.density).ok_or_else(|| Error::Invalid(format!("bad density `{}`", self.density)))?;
        Ok(BandSeed {
            band: FlatBand::from_factor(&minpoly, self.multiplicity_in_gcd),
            density: Some(density),
            support_width: self.support_width,
        })
    }
}

fn row_json(r: &TruncationRow) -> RowJson {
    RowJson {
        j: r.j,
        f_size: r.f_size,
        boundary_size: r.boundary_size,
        dim_finite_support: r.dim_finite_support,
        shubin_mult: r.shubin_mult,
        avg_density: to_pq_string(&r.avg_density),
        shubin_density: to_pq_string(&r.shubin_density),
        bound: to_pq_string(&r.bound),
    }
}

pub fn truncation_json(t: &[BandTruncation]) -> Vec<TruncationJson> {
    t.iter()
        .map(|b| TruncationJson {
            minpoly: lambda_minpoly_text(&b.band),
            density: b.density.as_ref().map(to_pq_string),
            thickness: b.thickness,
            rows: b.rows.iter().map(row_json).collect(),
        })
        .collect()
}

impl AnalysisReport {
    pub fn to_json(&self, include_timing: bool) -> ReportJson {
        ReportJson {
            graph: GraphJson { name: self.name.clone(), n: self.n, d: self.dim, degrees: self.degrees.clone() },
            stage_bound: self.stage_bound,
            char_det: self.char_det.clone(),
            coefficient_gcd: self.coefficient_gcd.render("mu"),
            flat_bands: self.bands.iter().map(BandJson::from_analysis).collect(),
            truncation: None,
            verification: None,
            timing_ms: include_timing
                .then(|| self.timing.iter().map(|(k, d)| (k.to_string(), d.as_secs_f64() * 1e3)).collect()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph {}: n = {}, d = {}, degrees {:?}", self.name, self.n, self.dim, self.degrees);
        let _ = writeln!(s, "det(A - mu D) = {}", self.char_det);
        if self.bands.is_empty() {
            let _ = writeln!(s, "no flat-band eigenvalues");
        }
        for (k, b) in self.bands.iter().enumerate() {
            let _ = writeln!(
                s,
                "flat band {}: {} = 0, lambda ~ {} (approximate)",
                k + 1,
                lambda_minpoly_text(&b.band),
                b.band.lambda.approximations(APPROX_DIGITS).join(", ")
            );
            let _ = writeln!(
                s,
                "  density {}   ranks {:?}   kernel rank {}   support width {}",
                to_pq_string(&b.result.density),
                b.result.ranks,
                b.result.kernel_rank,
                b.support_width
            );
            for (i, g) in b.generators.iter().enumerate() {
                let _ = writeln!(s, "  generator {}: ({})", i + 1, g.join(", "));
            }
        }
        let times: Vec<String> =
            self.timing.iter().map(|(k, d)| format!("{k} {:.3} ms", d.as_secs_f64() * 1e3)).collect();
        let _ = writeln!(s, "timing: {}", times.join(", "));
        s
    }
}

pub fn truncation_text(t: &[BandTruncation]) -> String {
    let mut s = String::new();
    if t.is_empty() {
        let _ = writeln!(s, "no flat-band eigenvalues; nothing to truncate");
    }
    for b in t {
        let dk = b.density.as_ref().map_or("unknown".to_string(), to_pq_string);
        let _ = writeln!(s, "band {} = 0, density {}, thickness {}", lambda_minpoly_text(&b.band), dk, b.thickness);
        let header = ["j", "|F_j|", "|bd F_j|", "dim_fs", "shubin", "avg_density", "shubin_density", "bound"];
        let rows: Vec<[String; 8]> = b
            .rows
            .iter()
            .map(|r| {
                [
                    r.j.to_string(),
                    r.f_size.to_string(),
                    r.boundary_size.to_string(),
                    r.dim_finite_support.to_string(),
                    r.shubin_mult.to_string(),
                    to_pq_string(&r.avg_density),
                    to_pq_string(&r.shubin_density),
                    to_pq_string(&r.bound),
                ]
            })
            .collect();
        let widths: Vec<usize> = (0..8)
            .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
        };
        let _ = writeln!(s, "{}", line(&header.map(String::from)));
        for r in &rows {
            let _ = writeln!(s, "{}", line(r));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::builtins::*;

    #[test]
    fn json_is_deterministic_and_round_trips() {
        let a = analyze("kagome", &kagome(), None).unwrap();
        let j1 = serde_json::to_string_pretty(&a.to_json(false)).unwrap();
        let j2 = serde_json::to_string_pretty(&analyze("kagome", &kagome(), None).unwrap().to_json(false)).unwrap();
        assert_eq!(j1, j2);
        let back: ReportJson = serde_json::from_str(&j1).unwrap();
        assert_eq!(back.flat_bands[0].density, "1/3");
        let seed = back.flat_bands[0].to_seed().unwrap();
        assert_eq!(seed.band, a.bands[0].band);
    }

    #[test]
    fn square_text_mentions_no_bands() {
        let a = analyze("square", &square(), None).unwrap();
        assert!(a.to_text().contains("no flat-band eigenvalues"));
        assert!(truncate(&square(), &[], 3, None).unwrap().is_empty());
    }

    #[test]
    fn corrupted_kagome_fails_verification() {
        let v = verify("kagome", &kagome().corrupted(), Some(&kagome()), 2, None, None).unwrap();
        assert!(!v.passed());
        assert!(v.violations.iter().any(|m| m.contains("band set changed")));
    }
}
