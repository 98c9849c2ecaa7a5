use std::path::{Path, PathBuf};
use std::time::Instant;

use balconf::geom::{AnyConfiguration, Mode};
use balconf::search::{SearchError, SearchSpec};
use balconf::{
    canonicalize, enumerate_balanced, even_m_witness, is_balanced, is_uniform,
    label_by_increasing_arguments, model_configuration, perturb, random_invertible, roots_of_unity,
    step_constants, symbolic_sequences, t_grid, BigRational, CanonError, CanonOptions,
    Configuration, IntPoly, Scalar, Tol,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::config::{self, ConfigError};
use crate::{json as fixed, svg};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Conditioning bound for the random maps applied by `gen --seed`.
const GEN_COND_MAX: f64 = 100.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// What a command prints and the exit code it asks for.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn report(code: i32, value: Value) -> Outcome {
    Outcome {
        code,
        output: fixed::to_string(&value),
    }
}

pub struct Clock(Option<Instant>);

impl Clock {
    pub fn start(enabled: bool) -> Self {
        Clock(enabled.then(Instant::now))
    }

    fn stamp(&self, map: &mut Map<String, Value>) {
        if let Some(t0) = self.0 {
            map.insert("timing_ms".into(), json!(t0.elapsed().as_secs_f64() * 1e3));
        }
    }
}

fn scalar<T: Scalar>(x: &T) -> Value {
    match T::MODE {
        Mode::Exact => Value::String(x.to_string()),
        Mode::Float => json!(x.to_f64()),
    }
}

fn tol_of(tol: Option<f64>) -> Tol {
    tol.map(Tol::Abs).unwrap_or_default()
}

fn echo(name: &str, fields: Value) -> Value {
    let mut map = match fields {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    map.insert("name".into(), json!(name));
    Value::Object(map)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        })?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn check_fields<T: Scalar>(c: &Configuration<T>, tol: Tol, out: &mut Map<String, Value>) -> bool {
    let balance = is_balanced(c, tol);
    let uniform = is_uniform(c, tol);
    out.insert("balanced".into(), json!(balance.balanced));
    out.insert(
        "balance_witness".into(),
        balance.witness.as_ref().map_or(
            Value::Null,
            |w| json!({"index": w.index, "value": scalar(&w.value)}),
        ),
    );
    out.insert("uniform".into(), json!(uniform.uniform));
    out.insert(
        "uniform_witness".into(),
        uniform.witness.map_or(Value::Null, |(i, j)| json!([i, j])),
    );
    let even = if c.len().is_multiple_of(2) && balance.balanced {
        even_m_witness(c, tol).map_or(Value::Null, |j| json!(j))
    } else {
        Value::Null
    };
    out.insert("even_m_witness".into(), even);
    let constants = if c.len() % 2 == 1 && c.len() >= 3 && balance.balanced && uniform.uniform {
        label_by_increasing_arguments(c)
            .ok()
            .and_then(|l| step_constants(&l, tol).ok())
            .map_or(
                Value::Null,
                |s| json!({"a1": scalar(&s.a1), "an": scalar(&s.an)}),
            )
    } else {
        Value::Null
    };
    out.insert("step_constants".into(), constants);
    balance.balanced
}

pub fn check(path: &Path, tol: Option<f64>, clock: Clock) -> Result<Outcome, CliError> {
    let c = config::read(path)?;
    let mut out = Map::new();
    out.insert(
        "command".into(),
        echo(
            "check",
            json!({"path": path.display().to_string(), "tol": tol}),
        ),
    );
    out.insert("mode".into(), json!(config::mode_name(c.mode())));
    out.insert("m".into(), json!(c.len()));
    let balanced = match &c {
        AnyConfiguration::Exact(c) => check_fields(c, tol_of(tol), &mut out),
        AnyConfiguration::Float(c) => check_fields(c, tol_of(tol), &mut out),
    };
    clock.stamp(&mut out);
    Ok(report(
        if balanced { EXIT_HOLDS } else { EXIT_FAILS },
        Value::Object(out),
    ))
}

fn canon_failure(e: &CanonError) -> Value {
    match e {
        CanonError::NeedsOddSize { m } => json!({"reason": "NeedsOddSize", "m": m}),
        CanonError::NotBalanced { index, value } => {
            json!({"reason": "NotBalanced", "witness": {"index": index, "value": value}})
        }
        CanonError::NotUniform { first, second } => {
            json!({"reason": "NotUniform", "witness": [first, second]})
        }
        CanonError::SingularFrame => json!({"reason": "SingularFrame"}),
        CanonError::NotNormalized { y } => json!({"reason": "NotNormalized", "y": y}),
        CanonError::NoGridMatch { t, m } => json!({"reason": "NoGridMatch", "t": t, "m": m}),
        CanonError::DegenerateStep { index } => {
            json!({"reason": "DegenerateStep", "index": index})
        }
        CanonError::ResidualTooLarge { residual, tol } => {
            json!({"reason": "ResidualTooLarge", "residual": residual, "tol": tol})
        }
        CanonError::Geom(g) => json!({"reason": "Geom", "detail": g.to_string()}),
    }
}

pub fn canon(path: &Path, tol: Option<f64>, clock: Clock) -> Result<Outcome, CliError> {
    let c = config::read(path)?;
    let mut opts = CanonOptions::default();
    if let Some(t) = tol {
        opts.balance_tol = Tol::Abs(t);
    }
    let result = match &c {
        AnyConfiguration::Exact(c) => canonicalize(c, &opts),
        AnyConfiguration::Float(c) => canonicalize(c, &opts),
    };
    let mut out = Map::new();
    out.insert(
        "command".into(),
        echo(
            "canon",
            json!({"path": path.display().to_string(), "tol": tol}),
        ),
    );
    out.insert("mode".into(), json!(config::mode_name(c.mode())));
    out.insert("m".into(), json!(c.len()));
    let code = match result {
        Ok(form) => {
            out.insert("equivalent".into(), json!(true));
            out.insert("t".into(), json!(form.t));
            out.insert("k".into(), json!(form.k));
            out.insert("residual".into(), json!(form.residual));
            let g = &form.g;
            out.insert("map".into(), json!([[g.a, g.b], [g.c, g.d]]));
            out.insert("index_map".into(), json!(form.input_exponents()));
            out.insert("labels".into(), json!(form.permutation));
            EXIT_HOLDS
        }
        Err(e) => {
            out.insert("equivalent".into(), json!(false));
            out.insert("failure".into(), canon_failure(&e));
            EXIT_FAILS
        }
    };
    clock.stamp(&mut out);
    Ok(report(code, Value::Object(out)))
}

fn coefficients(p: &IntPoly) -> Value {
    json!({
        "ascending": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

pub fn roots(n: Option<u64>, m: Option<u64>, clock: Clock) -> Result<Outcome, CliError> {
    let n = match (n, m) {
        (Some(0), _) => return Err(CliError::Usage("--n must be at least 1".into())),
        (Some(n), None) => n as usize,
        (None, Some(m)) if m >= 3 && m % 2 == 1 => ((m - 1) / 2) as usize,
        (None, Some(m)) => {
            return Err(CliError::Usage(format!(
                "--m must be odd and at least 3, got {m}"
            )))
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --n or --m is required".into(),
            ))
        }
    };
    let m = 2 * n + 1;
    let mut out = Map::new();
    out.insert("command".into(), echo("roots", json!({"n": n, "m": m})));
    out.insert("n".into(), json!(n));
    out.insert("m".into(), json!(m));
    let grid = t_grid(m).map_err(|e| CliError::Usage(e.to_string()))?;
    out.insert("grid".into(), json!(grid.values));
    let w = &symbolic_sequences(n).ws[n];
    out.insert(
        "w_n".into(),
        json!({"x": coefficients(&w.x), "y": coefficients(&w.y)}),
    );
    let code = match balconf::recurrence::solve_wn_equation(n) {
        Ok(solution) => {
            out.insert("roots".into(), json!(solution.grid.values));
            out.insert("y_root_count".into(), json!(solution.y_roots.len()));
            out.insert(
                "max_deviation".into(),
                json!(solution.grid.max_deviation(&grid)),
            );
            EXIT_HOLDS
        }
        Err(e) => {
            out.insert("failure".into(), json!(e.to_string()));
            EXIT_FAILS
        }
    };
    clock.stamp(&mut out);
    Ok(report(code, Value::Object(out)))
}

pub struct GenArgs {
    pub m: u64,
    pub k: Option<u64>,
    pub seed: Option<u64>,
    pub perturb: Option<f64>,
}

/// `U_m` or the model configuration at `t_k`, optionally scrambled by a seeded map and order.
pub fn generate(args: &GenArgs) -> Result<Configuration<f64>, CliError> {
    let m = args.m as usize;
    let mut c = match args.k {
        None => roots_of_unity(args.m as i64)
            .map_err(|e| CliError::Usage(e.to_string()))?
            .config()
            .clone(),
        Some(k) => {
            model_configuration(m, k as usize).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    if let Some(seed) = args.seed {
        let g = random_invertible(seed, GEN_COND_MAX);
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        c = g
            .apply_all(&c.reordered(&order))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if let Some(eps) = args.perturb {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(CliError::Usage(
                "--perturb must be a finite nonnegative number".into(),
            ));
        }
        c = perturb(&c, eps, args.seed.unwrap_or(0)).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(c)
}

pub fn gen(args: &GenArgs, out: Option<&Path>) -> Result<Outcome, CliError> {
    let c = generate(args)?;
    let text = config::to_string(&AnyConfiguration::Float(c));
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome {
                code: EXIT_HOLDS,
                output: String::new(),
            })
        }
        None => Ok(Outcome {
            code: EXIT_HOLDS,
            output: text,
        }),
    }
}

pub struct SearchArgs {
    pub m: u64,
    pub coords: Vec<String>,
    pub uniform: bool,
    pub dedupe: bool,
    pub budget: Option<u64>,
}

pub fn search(args: &SearchArgs, out: Option<&Path>, clock: Clock) -> Result<Outcome, CliError> {
    let coordinates = args
        .coords
        .iter()
        .map(|s| {
            balconf::geom::parse_rational(s).ok_or_else(|| {
                CliError::Usage(format!("--coords: {s:?} is not a rational \"p/q\""))
            })
        })
        .collect::<Result<Vec<BigRational>, _>>()?;
    let mut spec = SearchSpec::new(args.m as usize, coordinates);
    spec.require_uniform = args.uniform;
    spec.dedupe = args.dedupe;
    if let Some(b) = args.budget {
        spec.budget = b;
    }
    let hits = enumerate_balanced(&spec).map_err(|e| match e {
        SearchError::BudgetExceeded { .. } | SearchError::EmptySpec => {
            CliError::Usage(e.to_string())
        }
    })?;
    let uniform = hits
        .iter()
        .filter(|c| is_uniform(c, Tol::Abs(0.0)).uniform)
        .count();
    let summary = format!("{} balanced, {} uniform", hits.len(), uniform);

    let mut report_map = Map::new();
    report_map.insert(
        "command".into(),
        echo(
            "search",
            json!({
                "m": args.m,
                "coords": args.coords,
                "uniform": args.uniform,
                "dedupe": args.dedupe,
                "budget": spec.budget,
            }),
        ),
    );
    report_map.insert("balanced".into(), json!(hits.len()));
    report_map.insert("uniform".into(), json!(uniform));
    report_map.insert("summary".into(), json!(summary));
    match out {
        Some(dir) => {
            let mut files = Vec::with_capacity(hits.len());
            for (i, c) in hits.iter().enumerate() {
                let name = format!("config_{i:05}.json");
                write_file(&dir.join(&name), &fixed::to_string(&config::exact_value(c)))?;
                files.push(name);
            }
            report_map.insert("files".into(), json!(files));
            clock.stamp(&mut report_map);
            let text = fixed::to_string(&Value::Object(report_map));
            write_file(&dir.join("summary.json"), &text)?;
            Ok(Outcome {
                code: EXIT_HOLDS,
                output: text,
            })
        }
        None => {
            report_map.insert(
                "configurations".into(),
                Value::Array(hits.iter().map(config::exact_value).collect()),
            );
            clock.stamp(&mut report_map);
            Ok(report(EXIT_HOLDS, Value::Object(report_map)))
        }
    }
}

pub fn render(path: &Path, out: Option<&Path>) -> Result<Outcome, CliError> {
    let c = config::read(path)?;
    let text = svg::render(&c.to_f64());
    match out {
        Some(target) => {
            write_file(target, &text)?;
            Ok(Outcome {
                code: EXIT_HOLDS,
                output: String::new(),
            })
        }
        None => Ok(Outcome {
            code: EXIT_HOLDS,
            output: text,
        }),
    }
}

/// Writes `outcome.output` to `out` when one is given, used by the report commands.
pub fn deliver(outcome: Outcome, out: Option<&PathBuf>) -> Result<Outcome, CliError> {
    match out {
        Some(path) => {
            write_file(path, &outcome.output)?;
            Ok(Outcome {
                code: outcome.code,
                output: String::new(),
            })
        }
        None => Ok(outcome),
    }
}
