use super::{s_m_eval, QuadraticForm};
use crate::error::{Error, Result};
use crate::function::FunctionProvider;
use crate::ifs::NestedFractal;
use crate::numerics::richardson_to_zero;

/// Coarse behaviour of a sequence `a_0, a_1, …` judged from its last increments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceBehavior {
    /// All increments vanish relative to the sequence's scale.
    Constant,
    /// Last increment ratio `|q| < 1`; `limit` is the geometric extrapolation.
    Converging {
        ratio: f64,
        limit: f64,
    },
    Diverging {
        ratio: f64,
    },
    /// Too few terms, or a vanishing increment followed by a non-vanishing one.
    Undetermined,
}

impl SequenceBehavior {
    pub fn is_divergent(&self) -> bool {
        matches!(self, SequenceBehavior::Diverging { .. })
    }
}

/// Increments at or below `RELATIVE_FLAT × max|a_n|` count as zero.
const RELATIVE_FLAT: f64 = 1e-10;

pub fn classify_sequence(values: &[f64]) -> SequenceBehavior {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let flat = RELATIVE_FLAT * scale;
    let incs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    if incs.iter().all(|d| d.abs() <= flat) {
        return SequenceBehavior::Constant;
    }
    if incs.len() < 2 {
        return SequenceBehavior::Undetermined;
    }
    let (prev, last) = (incs[incs.len() - 2], incs[incs.len() - 1]);
    if prev.abs() <= flat {
        return SequenceBehavior::Undetermined;
    }
    let ratio = last / prev;
    if ratio.abs() < 1.0 {
        let limit = values[values.len() - 1] + last * ratio / (1.0 - ratio);
        SequenceBehavior::Converging { ratio, limit }
    } else {
        SequenceBehavior::Diverging { ratio }
    }
}

/// Renormalized energies `a_n = ρ^{−n} S_n(ℰ)[f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable {
    pub values: Vec<f64>,
    pub estimate: f64,
    pub behavior: SequenceBehavior,
}

pub fn energy_limit(
    fractal: &NestedFractal,
    form: &QuadraticForm,
    f: &dyn FunctionProvider,
    rho: f64,
    n_max: usize,
) -> Result<EnergyTable> {
    let graph = fractal.build_graph(n_max)?;
    let values = f.sample(&graph)?;
    let table = (0..=n_max)
        .map(|n| Ok(s_m_eval(fractal, &graph, form, &values, n)? / rho.powi(n as i32)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(EnergyTable {
        estimate: *table.last().expect("n_max + 1 entries"),
        behavior: classify_sequence(&table),
        values: table,
    })
}

/// `δ = 2 − log ρ / log λ`.
pub fn energy_dimension(fractal: &NestedFractal, rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidEigenvalue(rho));
    }
    Ok(2.0 - rho.ln() / fractal.ratio().ln())
}

/// Base form `c_e = ℓ(e)^{δ+ε−2}` of the commutator zeta function.
pub fn residue_base_form(fractal: &NestedFractal, delta: f64, eps: f64) -> Result<QuadraticForm> {
    QuadraticForm::from_fn(fractal, |_, _, len| len.powf(delta + eps - 2.0))
}

/// `F(ε)` for one ε together with its `a(n, ε)` table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueSample {
    pub eps: f64,
    pub value: f64,
    pub a: Vec<f64>,
    /// `|a(n_max, ε) − a(n_max − 1, ε)|`, the size of the last observed change
    /// before the tail is frozen.
    pub tail_oscillation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidueReport {
    pub delta: f64,
    pub samples: Vec<ResidueSample>,
    /// `ρ^{−n} S_n` for the base form at ε = 0.
    pub base_table: EnergyTable,
    /// Extrapolation of `F(ε)` to ε = 0; `None` when the base table diverges.
    pub estimate: Option<f64>,
    pub extrapolation_error: f64,
    /// `ℰ_∞[f] / log(1/λ)` with `ℰ_∞` read off the base table.
    pub direct: f64,
}

/// Residue of `tr(|[D,f]|² |D|^{−s})` at `s = δ`, through the abelian limit
/// `lim ε Σ_n λ^{nε} a(n, ε)`.
///
/// The series is summed exactly to `n_max`; beyond it `a(n, ε)` is frozen
/// at `a(n_max, ε)` and the geometric tail is added in closed form.
pub fn energy_residue(
    fractal: &NestedFractal,
    f: &dyn FunctionProvider,
    rho: f64,
    eps_schedule: &[f64],
    n_max: usize,
) -> Result<ResidueReport> {
    if eps_schedule.is_empty() || eps_schedule.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument(
            "eps schedule must be non-empty and positive".into(),
        ));
    }
    if eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("eps schedule must be decreasing".into()));
    }
    let delta = energy_dimension(fractal, rho)?;
    let lambda = fractal.ratio();
    let graph = fractal.build_graph(n_max)?;
    let values = f.sample(&graph)?;
    values.check_complete(&graph)?;

    let a_table = |eps: f64| -> Result<Vec<f64>> {
        let form = residue_base_form(fractal, delta, eps)?;
        (0..=n_max)
            .map(|n| Ok(s_m_eval(fractal, &graph, &form, &values, n)? / rho.powi(n as i32)))
            .collect()
    };

    let base = a_table(0.0)?;
    let base_table = EnergyTable {
        estimate: base[n_max],
        behavior: classify_sequence(&base),
        values: base,
    };
    let energy = match base_table.behavior {
        SequenceBehavior::Converging { limit, .. } => limit,
        _ => base_table.estimate,
    };
    let direct = energy / (1.0 / lambda).ln();

    let mut samples = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let a = a_table(eps)?;
        let decay = lambda.powf(eps);
        let mut sum = 0.0;
        let mut weight = 1.0;
        for an in &a {
            sum += weight * an;
            weight *= decay;
        }
        // weight is now λ^{(n_max+1)ε}
        let tail = a[n_max] * weight / -(eps * lambda.ln()).exp_m1();
        let tail_oscillation = if n_max > 0 {
            (a[n_max] - a[n_max - 1]).abs()
        } else {
            0.0
        };
        samples.push(ResidueSample {
            eps,
            value: eps * (sum + tail),
            a,
            tail_oscillation,
        });
    }

    let hs: Vec<f64> = samples.iter().map(|s| s.eps).collect();
    let fs: Vec<f64> = samples.iter().map(|s| s.value).collect();
    let (extrapolated, extrapolation_error) = richardson_to_zero(&hs, &fs);
    let estimate = (!base_table.behavior.is_divergent()).then_some(extrapolated);
    Ok(ResidueReport {
        delta,
        samples,
        base_table,
        estimate,
        extrapolation_error,
        direct,
    })
}
