use super::{Command, FunctionArgs, RunConfig, Table};
use crate::energy::{
    self, eigen_residual, eigenform, energy_dimension, energy_limit, energy_residue, residue_base_form, rhombic_vicsek,
    vicsek_conductances_from_lengths, vicsek_family_coordinates, vicsek_family_form, vicsek_h_from_angle,
    HarmonicProvider, QuadraticForm, SequenceBehavior,
};
use crate::error::{Error, Result};
use crate::function::{CellIndicator, Formula, FunctionProvider, PointValues};
use crate::ifs::{check_nesting, NestedFractal, Word};
use crate::metric::{distance_sequence_with_budget, edge_subdivision_check, ess_lip_seminorm, lip_seminorm};
use crate::numerics::euclidean;
use crate::spectral;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

/// Exponents `m` of the samples `s = d + 10^{−m}` used for the residue.
const RESIDUE_EXPONENTS: [i32; 5] = [2, 3, 4, 5, 6];

#[derive(Debug, Default)]
pub(super) struct Outcome {
    pub values: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
    pub table: Option<Table>,
}

impl Outcome {
    fn value(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    fn diag(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_string(), v.into());
        self
    }

    fn table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }
}

pub(super) fn dispatch(config: &RunConfig, fractal: Option<&NestedFractal>) -> Result<Outcome> {
    let budget = config.budget;
    let fr = || fractal.expect("command has a fractal source");
    match &config.command {
        Command::Info { level, .. } => info(fr(), *level, budget),
        Command::Dim { .. } => Ok(Outcome::default().value("d", spectral::metric_dimension(fr()))),
        Command::Zeta { re, im, levels, .. } => zeta(fr(), Complex64::new(*re, *im), *levels),
        Command::Spectrum { n_min, n_max, .. } => spectrum(fr(), *n_min, *n_max),
        Command::Integrate { function, level, .. } => integrate(fr(), function, *level, budget),
        Command::Eigenform {
            init,
            random,
            tol,
            max_iter,
            ..
        } => {
            let f = fr();
            let start = match (init, random) {
                (Some(path), _) => QuadraticForm::from_csv(f, &std::fs::read_to_string(path)?)?,
                (None, true) => random_form(f, config.seed)?,
                (None, false) => QuadraticForm::unit(f),
            };
            eigenform_cmd(f, &start, *tol, *max_iter)
        }
        Command::Energy { function, nmax, .. } => energy_cmd(fr(), function, *nmax, budget),
        Command::Residue {
            function, eps, nmax, ..
        } => {
            let f = fr();
            residue_cmd(
                f,
                function,
                eps,
                nmax.unwrap_or_else(|| default_residue_depth(f)),
                budget,
            )
        }
        Command::Distance { x, y, nmax, path, .. } => distance(fr(), x, y, *nmax, *path, budget),
        Command::SubdivisionCheck { .. } => subdivision(fr()),
        Command::Lip { function, level, .. } => lip(fr(), function, *level, budget),
        Command::Esslip {
            function, nmin, nmax, ..
        } => esslip(fr(), function, *nmin, *nmax, budget),
        Command::Vicsek { theta, lengths } => match (theta, lengths) {
            (Some(t), _) => vicsek(*t),
            (None, Some(w)) => vicsek_lengths(w),
            (None, None) => Err(Error::InvalidArgument("give --theta or --lengths".into())),
        },
    }
}

/// Largest `n` with `kⁿ·|E_0| ≤ 10⁶`.
fn default_residue_depth(fractal: &NestedFractal) -> usize {
    let mut n = 0;
    while (fractal.k() as f64).powi(n as i32 + 1) * fractal.e0().len() as f64 <= 1e6 {
        n += 1;
    }
    n
}

fn default_eigenform(fractal: &NestedFractal) -> Result<energy::EigenformResult> {
    eigenform(
        fractal,
        &QuadraticForm::unit(fractal),
        energy::EIGENFORM_TOL,
        energy::EIGENFORM_MAX_ITER,
    )
}

fn provider(fractal: &NestedFractal, args: &FunctionArgs) -> Result<Box<dyn FunctionProvider>> {
    let given = [
        args.boundary.is_some(),
        args.coordinate.is_some(),
        args.cell.is_some(),
        args.values.is_some(),
        args.function.is_some(),
    ];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Error::InvalidArgument(
            "give exactly one of --boundary, --coordinate, --cell, --values, --function".into(),
        ));
    }
    if let Some(b) = &args.boundary {
        if b.len() != fractal.v0().len() {
            return Err(Error::InvalidArgument(format!(
                "--boundary needs {} values, got {}",
                fractal.v0().len(),
                b.len()
            )));
        }
        let form = default_eigenform(fractal)?.form;
        return Ok(Box::new(HarmonicProvider::new(fractal, &form, b.clone())?));
    }
    if let Some(i) = args.coordinate {
        if i >= fractal.ambient_dim() {
            return Err(Error::InvalidArgument(format!("coordinate {i} out of range")));
        }
        return Ok(Box::new(Formula(move |x: &[f64]| x[i])));
    }
    if let Some(w) = &args.cell {
        let word = Word::parse(w, fractal.k())?;
        return Ok(Box::new(CellIndicator(word)));
    }
    if let Some(name) = &args.function {
        return named_function(fractal, name);
    }
    let path = args.values.as_ref().expect("one source given");
    let text = std::fs::read_to_string(path)?;
    Ok(Box::new(PointValues::from_csv(&text, fractal.ambient_dim())?))
}

fn named_function(fractal: &NestedFractal, name: &str) -> Result<Box<dyn FunctionProvider>> {
    if name == "one" {
        return Ok(Box::new(Formula(|_: &[f64]| 1.0)));
    }
    match name.strip_prefix('x').map(str::parse::<usize>) {
        Some(Ok(i)) if i < fractal.ambient_dim() => Ok(Box::new(Formula(move |x: &[f64]| x[i]))),
        _ => Err(Error::InvalidArgument(format!(
            "unknown function {name:?}; expected one or x0..x{}",
            fractal.ambient_dim() - 1
        ))),
    }
}

fn behavior_json(b: &SequenceBehavior) -> Value {
    match b {
        SequenceBehavior::Constant => json!({"kind": "constant"}),
        SequenceBehavior::Converging { ratio, limit } => json!({"kind": "converging", "ratio": ratio, "limit": limit}),
        SequenceBehavior::Diverging { ratio } => json!({"kind": "diverging", "ratio": ratio}),
        SequenceBehavior::Undetermined => json!({"kind": "undetermined"}),
    }
}

fn info(fractal: &NestedFractal, level: usize, budget: u64) -> Result<Outcome> {
    fractal.check_budget(level + 1, budget)?;
    let report = check_nesting(fractal, level)?;
    let e0: Vec<Value> = fractal
        .e0()
        .iter()
        .map(|e| json!({"p": e.p, "q": e.q, "length": e.length}))
        .collect();
    let violations: Vec<String> = report.violations.iter().map(|v| format!("{v:?}")).collect();
    Ok(Outcome::default()
        .value("k", fractal.k())
        .value("lambda", fractal.ratio())
        .value("ambient_dim", fractal.ambient_dim())
        .value("d", spectral::metric_dimension(fractal))
        .value("v0", json!(fractal.v0()))
        .value("e0", e0)
        .value("nested", report.is_nested())
        .value("v0_reflection_symmetric", report.v0_reflection_symmetric)
        .diag("nesting_level", level)
        .diag("violations", json!(violations))
        .diag("dedup_tol", fractal.dedup_tol()))
}

fn zeta(fractal: &NestedFractal, s: Complex64, levels: Option<usize>) -> Result<Outcome> {
    let z = spectral::zeta(fractal, s)?;
    let mut out = Outcome::default().value("re", z.re).value("im", z.im);
    if let Some(n) = levels {
        let t = spectral::zeta_truncated(fractal, s, n)?;
        out = out
            .diag("truncated_re", t.value.re)
            .diag("truncated_im", t.value.im)
            .diag("tail_bound", t.tail_bound)
            .diag("truncation_error", (t.value - z).norm());
    }
    Ok(out)
}

fn spectrum(fractal: &NestedFractal, n_min: i64, n_max: i64) -> Result<Outcome> {
    if n_min > n_max {
        return Err(Error::InvalidArgument(format!("empty range {n_min}..={n_max}")));
    }
    let spec = spectral::dimension_spectrum(fractal, n_min..=n_max);
    let (extrapolated, err) = spectral::residue_by_extrapolation(fractal, &RESIDUE_EXPONENTS)?;
    let mut table = Table::new(&["n", "re", "im", "residue_re", "residue_im"]);
    for p in &spec.poles {
        table.push(vec![p.index as f64, p.s.re, p.s.im, p.residue.re, p.residue.im]);
    }
    let poles: Vec<Value> = spec
        .poles
        .iter()
        .map(|p| json!({"n": p.index, "re": p.s.re, "im": p.s.im, "residue_re": p.residue.re, "residue_im": p.residue.im}))
        .collect();
    Ok(Outcome::default()
        .value("d", spec.d)
        .value("residue_at_d", spectral::residue_at_dimension(fractal))
        .value("integral_constant", spectral::integral_constant(fractal))
        .value("poles", poles)
        .diag("residue_extrapolated", extrapolated)
        .diag("residue_extrapolation_error", err)
        .table(table))
}

fn integrate(fractal: &NestedFractal, args: &FunctionArgs, level: usize, budget: u64) -> Result<Outcome> {
    let only_cell = args.boundary.is_none() && args.coordinate.is_none() && args.values.is_none();
    if let (Some(w), true) = (&args.cell, only_cell) {
        let word = Word::parse(w, fractal.k())?;
        return Ok(Outcome::default()
            .value("integral", spectral::nc_integral_cell(fractal, &word))
            .value("measure", spectral::cell_measure(fractal, &word))
            .diag("error_bound", 0.0));
    }
    fractal.check_budget(level, budget)?;
    let f = provider(fractal, args)?;
    let graph = fractal.build_graph_with_budget(level, budget)?;
    let q = spectral::nc_integral(fractal, &graph, &f.sample(&graph)?)?;
    Ok(Outcome::default()
        .value("integral", q.value)
        .diag("error_bound", q.error_bound)
        .diag("level", level))
}

fn random_form(fractal: &NestedFractal, seed: u64) -> Result<QuadraticForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (0..fractal.e0().len()).map(|_| rng.gen_range(0.1..10.0)).collect();
    QuadraticForm::new(fractal, c)
}

fn eigenform_cmd(fractal: &NestedFractal, start: &QuadraticForm, tol: f64, max_iter: usize) -> Result<Outcome> {
    let r = eigenform(fractal, start, tol, max_iter)?;
    let mut table = Table::new(&["p", "q", "conductance"]);
    for (e, &c) in fractal.e0().iter().zip(r.form.conductances()) {
        table.push(vec![e.p as f64, e.q as f64, c]);
    }
    Ok(Outcome::default()
        .value("rho", r.rho)
        .value("conductances", r.form.conductances().to_vec())
        .diag("iterations", r.iterations)
        .diag("residual", r.residual)
        .table(table))
}

fn energy_cmd(fractal: &NestedFractal, args: &FunctionArgs, n_max: usize, budget: u64) -> Result<Outcome> {
    fractal.check_budget(n_max, budget)?;
    let eig = default_eigenform(fractal)?;
    let f = provider(fractal, args)?;
    let t = energy_limit(fractal, &eig.form, f.as_ref(), eig.rho, n_max)?;
    let mut table = Table::new(&["n", "energy"]);
    for (n, &a) in t.values.iter().enumerate() {
        table.push(vec![n as f64, a]);
    }
    Ok(Outcome::default()
        .value("estimate", t.estimate)
        .value("rho", eig.rho)
        .value("behavior", behavior_json(&t.behavior))
        .diag("sequence", t.values.clone())
        .diag("eigenform_residual", eig.residual)
        .table(table))
}

fn residue_cmd(
    fractal: &NestedFractal,
    args: &FunctionArgs,
    eps: &[f64],
    n_max: usize,
    budget: u64,
) -> Result<Outcome> {
    fractal.check_budget(n_max, budget)?;
    let eig = default_eigenform(fractal)?;
    let f = provider(fractal, args)?;
    let r = energy_residue(fractal, f.as_ref(), eig.rho, eps, n_max)?;
    let mut table = Table::new(&["eps", "value"]);
    for s in &r.samples {
        table.push(vec![s.eps, s.value]);
    }
    let tails: Vec<f64> = r.samples.iter().map(|s| s.tail_oscillation).collect();
    Ok(Outcome::default()
        .value("delta", r.delta)
        .value("estimate", r.estimate.map_or(Value::Null, Value::from))
        .value("direct", r.direct)
        .diag("extrapolation_error", r.extrapolation_error)
        .diag("tail_oscillation", tails)
        .diag("base_behavior", behavior_json(&r.base_table.behavior))
        .table(table))
}

fn distance(
    fractal: &NestedFractal,
    x: &[f64],
    y: &[f64],
    n_max: usize,
    with_path: bool,
    budget: u64,
) -> Result<Outcome> {
    let dim = fractal.ambient_dim();
    if x.len() != dim || y.len() != dim {
        return Err(Error::InvalidArgument(format!("--x and --y need {dim} coordinates")));
    }
    let seq = distance_sequence_with_budget(fractal, x, y, n_max, budget)?;
    let mut table = Table::new(&["n", "distance"]);
    for (n, d) in seq.rows() {
        table.push(vec![n as f64, d]);
    }
    let mut out = Outcome::default()
        .value("distance", seq.last())
        .value("extrapolated", seq.extrapolated)
        .value("start_level", seq.start_level)
        .value("euclidean", euclidean(x, y))
        .diag("q_estimate", seq.q_estimate.map_or(Value::Null, Value::from))
        .diag("fit_residual", seq.fit_residual.map_or(Value::Null, Value::from))
        .diag("path_vertices", seq.path.vertex_ids.len());
    if with_path {
        let graph = fractal.build_graph_with_budget(seq.path.level, budget)?;
        out = out
            .diag("path_level", seq.path.level)
            .diag("path", seq.path.points(&graph));
    }
    Ok(out.table(table))
}

fn subdivision(fractal: &NestedFractal) -> Result<Outcome> {
    let r = edge_subdivision_check(fractal)?;
    let witness = r
        .witness
        .map_or(Value::Null, |w| json!({"p": w.p, "q": w.q, "gap": [w.gap.0, w.gap.1]}));
    Ok(Outcome::default().value("holds", r.holds).diag("witness", witness))
}

fn lip(fractal: &NestedFractal, args: &FunctionArgs, level: usize, budget: u64) -> Result<Outcome> {
    fractal.check_budget(level, budget)?;
    let f = provider(fractal, args)?;
    let graph = fractal.build_graph_with_budget(level, budget)?;
    let l = lip_seminorm(&graph, &f.sample(&graph)?)?;
    Ok(Outcome::default().value("lip", l).diag("level", level))
}

fn esslip(fractal: &NestedFractal, args: &FunctionArgs, n_min: usize, n_max: usize, budget: u64) -> Result<Outcome> {
    fractal.check_budget(n_max, budget)?;
    let f = provider(fractal, args)?;
    let t = ess_lip_seminorm(fractal, f.as_ref(), n_min, n_max)?;
    let mut table = Table::new(&["n", "sup_from_n", "level_quotient"]);
    for (n, l, p) in t.rows() {
        table.push(vec![n as f64, l, p]);
    }
    Ok(Outcome::default()
        .value("estimate", t.minimum())
        .diag("table", t.table.clone())
        .diag("per_level", t.per_level.clone())
        .table(table))
}

fn vicsek(theta: f64) -> Result<Outcome> {
    let h = vicsek_h_from_angle(theta)?;
    let (s, c) = theta.sin_cos();
    let from_lengths = vicsek_conductances_from_lengths(1.0, 1.0 / (2.0 * c), 1.0 / (2.0 * s))?;
    let fractal = rhombic_vicsek(theta)?;
    let form = vicsek_family_form(&fractal, h);
    let (rho, residual) = eigen_residual(&fractal, &form)?;
    // renormalization limit of the 1/ℓ functional on the rhombus
    let base = residue_base_form(&fractal, 1.0, 0.0)?;
    let limit = eigenform(&fractal, &base, energy::EIGENFORM_TOL, energy::EIGENFORM_MAX_ITER)?;
    let coords = vicsek_family_coordinates(&fractal, &limit.form)?;
    Ok(Outcome::default()
        .value("theta", theta)
        .value("h", h)
        .value("rho", rho)
        .value("delta", energy_dimension(&fractal, rho)?)
        .value("conductances", form.conductances().to_vec())
        .diag("h_from_renormalization", coords.h)
        .diag("g_over_a_from_lengths", from_lengths.h)
        .diag("eigen_residual", residual))
}

fn vicsek_lengths(w: &[f64]) -> Result<Outcome> {
    let [a, f, g] = w else {
        return Err(Error::InvalidArgument("--lengths needs a,f,g".into()));
    };
    let c = vicsek_conductances_from_lengths(*a, *f, *g)?;
    Ok(Outcome::default()
        .value("h", c.h)
        .value("conductances", vec![c.side, c.f_diagonal, c.g_diagonal])
        .diag("lengths", w.to_vec()))
}
