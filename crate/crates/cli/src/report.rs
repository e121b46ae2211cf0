//! The verification report: both analytic backends, the oracle and the ODE
//! residual side by side for every level.

use morse_dk_core::analytic::{level_count, spectrum, Backend, WaveFunction};
use morse_dk_core::exec::Execution;
use morse_dk_core::model::{check_pt_symmetry, symmetric_probe, FrequencyConvention, PotentialSpec, PtVerdict, Variant};
use morse_dk_core::oracle::{self, Grid, OracleError, OracleResult, Stencil};
use morse_dk_core::Complex;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: usize,
    #[serde(rename = "E_paper_literal")]
    pub e_paper_literal: Option<Complex>,
    #[serde(rename = "E_pole_condition")]
    pub e_pole_condition: Option<Complex>,
    #[serde(rename = "E_oracle")]
    pub e_oracle: Option<Complex>,
    pub oracle_boundary_leak: Option<f64>,
    pub residual_paper: Option<f64>,
    pub residual_pole: Option<f64>,
    pub abs_gap_pole_vs_oracle: Option<f64>,
    pub abs_gap_paper_vs_oracle: Option<f64>,
    pub pole_within_tolerance: Option<bool>,
    pub markers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCounts {
    pub paper_literal: usize,
    pub pole_condition: usize,
    pub oracle: Option<usize>,
    pub paper_literal_bound_condition: Complex,
    pub pole_bound_condition: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stencils {
    pub eigensolve: Stencil,
    pub residual: Stencil,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub grid: Grid,
    pub refined_grid: Option<Grid>,
    pub stencil: Stencils,
    pub tolerances: Tolerances,
    pub pole_convention: FrequencyConvention,
    pub paper_literal_convention: FrequencyConvention,
    pub timestamp: String,
    pub version: String,
    pub schema_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pole_rows_pass: bool,
    pub non_convergence: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub spec_echo: PotentialSpec,
    pub per_level: Vec<LevelRow>,
    pub level_counts: LevelCounts,
    pub pt_check: PtVerdict,
    pub summary: Summary,
    pub metadata: Metadata,
}

struct OracleLevels {
    energies: Vec<Complex>,
    leaks: Vec<f64>,
    count: usize,
}

/// Oracle eigensolve runs only for the Hermitian family; the complexified
/// potentials get residual columns only.
pub fn oracle_applies(spec: &PotentialSpec) -> bool {
    spec.variant() == Variant::HermitianGeneralized
}

fn run_oracle(spec: &PotentialSpec, grid: &Grid, k: usize, exec: Execution) -> Result<OracleLevels, OracleError> {
    let grids = [*grid, grid.refined()];
    let mut runs = exec.map(&grids, |g| oracle::eigen_bound_states(spec, g, k));
    let fine: OracleResult = runs.pop().expect("two grids")?;
    let coarse: OracleResult = runs.pop().expect("two grids")?;
    let count = coarse.negative_count();
    let energies = coarse
        .energies
        .iter()
        .zip(&fine.energies)
        .take(count)
        .map(|(&c, &f)| oracle::richardson_combine(c, f))
        .collect();
    Ok(OracleLevels {
        energies,
        leaks: fine.boundary_leak.iter().take(count).copied().collect(),
        count,
    })
}

fn residual_for(
    spec: &PotentialSpec,
    n: usize,
    backend: Backend,
    convention: FrequencyConvention,
    grid: &Grid,
) -> Result<f64, String> {
    let wf = WaveFunction::new(spec, n, backend, convention).map_err(|e| e.to_string())?;
    oracle::residual(spec, wf.energy(), |x| wf.eval_x(x), grid).map_err(|e| e.to_string())
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Builds the report. Only the timestamp depends on anything but the inputs.
pub fn build(
    spec: &PotentialSpec,
    grid: &Grid,
    tolerances: Tolerances,
    pole_convention: FrequencyConvention,
    timestamp: String,
    exec: Execution,
) -> VerificationReport {
    let literal_conv = FrequencyConvention::PaperLiteral;
    let paper = spectrum(spec, Backend::PaperLiteral, literal_conv);
    let pole = spectrum(spec, Backend::PoleCondition, pole_convention);

    let mut failures = Vec::new();
    let mut non_convergence = false;
    let oracle_run = oracle_applies(spec).then(|| {
        let k = paper.levels.len().max(pole.levels.len()) + 2;
        run_oracle(spec, grid, k, exec)
    });
    let oracle_levels = match oracle_run {
        Some(Ok(o)) => Some(o),
        Some(Err(e)) => {
            if matches!(e, OracleError::ConvergenceFailure { .. }) {
                non_convergence = true;
            }
            failures.push(format!("oracle: {e}"));
            None
        }
        None => None,
    };

    let rows_len = paper
        .levels
        .len()
        .max(pole.levels.len())
        .max(oracle_levels.as_ref().map_or(0, |o| o.count));

    let work: Vec<(usize, Backend)> = (0..rows_len)
        .flat_map(|n| Backend::ALL.into_iter().map(move |b| (n, b)))
        .filter(|&(n, b)| match b {
            Backend::PaperLiteral => n < paper.levels.len(),
            Backend::PoleCondition => n < pole.levels.len(),
        })
        .collect();
    let residuals = exec.map(&work, |&(n, b)| {
        let conv = match b {
            Backend::PaperLiteral => literal_conv,
            Backend::PoleCondition => pole_convention,
        };
        residual_for(spec, n, b, conv, grid)
    });
    let lookup = |n: usize, b: Backend| {
        work.iter()
            .position(|&w| w == (n, b))
            .map(|i| residuals[i].clone())
    };

    let mut per_level = Vec::with_capacity(rows_len);
    for n in 0..rows_len {
        let mut markers = Vec::new();
        let e_paper = paper.levels.get(n).map(|l| l.energy());
        let e_pole = pole.levels.get(n).map(|l| l.energy());
        let e_oracle = oracle_levels.as_ref().and_then(|o| o.energies.get(n).copied());
        let leak = oracle_levels.as_ref().and_then(|o| o.leaks.get(n).copied());
        if let Some(l) = leak {
            if l >= oracle::LEAK_TOLERANCE {
                markers.push(format!("oracle state leaks {l:.3e} at the grid edge"));
            }
        }
        let mut residual = |b: Backend, label: &str| match lookup(n, b) {
            None => None,
            Some(Ok(r)) => {
                if !r.is_finite() {
                    markers.push(format!("{label} residual is not finite"));
                }
                finite(r)
            }
            Some(Err(e)) => {
                markers.push(format!("{label} residual unavailable: {e}"));
                None
            }
        };
        let residual_paper = residual(Backend::PaperLiteral, "paper-literal");
        let residual_pole = residual(Backend::PoleCondition, "pole");
        let gap_pole = e_pole.zip(e_oracle).map(|(a, b)| (a - b).norm());
        let gap_paper = e_paper.zip(e_oracle).map(|(a, b)| (a - b).norm());

        let pole_ok = match (e_pole, e_oracle) {
            (None, None) => None,
            (None, Some(_)) => {
                markers.push("oracle level has no pole-condition counterpart".to_owned());
                Some(false)
            }
            (Some(_), _) => {
                let res_ok = residual_pole.is_some_and(|r| r < tolerances.residual);
                let gap_ok = match (gap_pole, oracle_levels.is_some()) {
                    (Some(g), _) => g < tolerances.abs_gap,
                    (None, true) => {
                        markers.push("pole level has no oracle counterpart".to_owned());
                        false
                    }
                    (None, false) => true,
                };
                Some(res_ok && gap_ok)
            }
        };
        if pole_ok == Some(false) {
            failures.push(format!("level {n}: pole-condition row outside tolerance"));
        }
        per_level.push(LevelRow {
            n,
            e_paper_literal: e_paper,
            e_pole_condition: e_pole,
            e_oracle,
            oracle_boundary_leak: leak,
            residual_paper,
            residual_pole,
            abs_gap_pole_vs_oracle: gap_pole,
            abs_gap_paper_vs_oracle: gap_paper,
            pole_within_tolerance: pole_ok,
            markers,
        });
    }

    let pt_check = check_pt_symmetry(spec, &symmetric_probe(5.0, 201)).expect("symmetric probe");
    let paper_count = level_count(spec, Backend::PaperLiteral, literal_conv);
    let pole_count = level_count(spec, Backend::PoleCondition, pole_convention);
    let pole_rows_pass = per_level.iter().all(|r| r.pole_within_tolerance != Some(false));

    VerificationReport {
        spec_echo: spec.clone(),
        per_level,
        level_counts: LevelCounts {
            paper_literal: paper.levels.len(),
            pole_condition: pole.levels.len(),
            oracle: oracle_levels.as_ref().map(|o| o.count),
            paper_literal_bound_condition: paper_count.bound_condition_value,
            pole_bound_condition: pole_count.bound_condition_value,
        },
        pt_check,
        summary: Summary {
            pole_rows_pass,
            non_convergence,
            failures,
        },
        metadata: Metadata {
            grid: *grid,
            refined_grid: oracle_applies(spec).then(|| grid.refined()),
            stencil: Stencils {
                eigensolve: Stencil::ThreePoint,
                residual: Stencil::FivePoint,
            },
            tolerances,
            pole_convention,
            paper_literal_convention: literal_conv,
            timestamp,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            schema_version: SCHEMA_VERSION.to_owned(),
        },
    }
}
