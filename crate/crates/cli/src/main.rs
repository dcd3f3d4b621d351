//! `permword`: reductions, graphs, partition spectra, limit predictions,
//! sampling, simulation and exact checks for words in random permutations.
//!
//! Exit codes: 0 success, 2 a requested assertion failed, 64 usage error,
//! 65 a size or budget limit was hit.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use permword::graph::{
    adm, canonical_form, decompose_by_sigma_cycles, graph_from_json, graph_of_pair, graph_to_json,
    is_admissible, neagu_characteristic, ColoredGraph,
};
use permword::montecarlo::{
    fraction_check, mean_check, run, theoretical_law, tv_distance, EmpiricalLaw, ExperimentConfig,
};
use permword::oracle::verify_partition_identity;
use permword::sampler::{next_feasible_size, sample_restricted, ModelSampler};
use permword::search::{
    chi_spectrum_with, for_each_c, InvolutionCase, LimitKind, SearchOptions, DEFAULT_VERTEX_CAP,
};
use permword::word::{cyclic_normal_form, normal_form, partial_d_cyclic_reduce, quotient_order};
use permword::{parse_word, predict_limit, Degrees, Error, ModelConfig, Permutation, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SCHEMA: &str = "permword/1";

#[derive(Parser, Debug)]
#[command(
    name = "permword",
    version,
    about = "Cycle statistics of words in random permutations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free, cyclic and (d)-cyclic reductions plus normal forms.
    Reduce(ReduceArgs),
    /// Order of the word in the quotient by the relations g_i^{d_i}.
    Order(ReduceArgs),
    /// The graph G(σ, w), or a graph read from JSON.
    Graph(GraphArgs),
    /// Histogram of the characteristic χ over the admissible partitions C.
    Chi(SearchArgs),
    /// Every partition in C with its χ.
    Enumerate(SearchArgs),
    /// Which limit theorem applies to (w, A).
    Predict(PredictArgs),
    /// Uniform draws from S_n(A), or of σ_n = w(s_1, …, s_k).
    Sample(SampleArgs),
    /// Monte Carlo estimate of the law of (N_1, …, N_q)(σ_n).
    Simulate(SimulateArgs),
    /// Exact check of the partition-sum identity at small n.
    ExactCheck(ExactArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Allowed cycle lengths, one per generator: `all`, `{1,2}`, `all-{1}`.
    #[arg(long = "A", value_name = "SET")]
    allowed: Vec<String>,
}

impl ModelArgs {
    fn model(&self, word: Option<&str>) -> Result<ModelConfig, Failure> {
        if self.allowed.is_empty() {
            let k = match word {
                Some(text) => text.parse::<Word>().map_err(usage)?.max_generator(),
                None => 1,
            };
            return Ok(ModelConfig::uniform(k));
        }
        ModelConfig::parse(&self.allowed).map_err(usage)
    }
}

#[derive(Args, Debug)]
struct ReduceArgs {
    word: String,
    /// Relator degrees, e.g. `4,5,inf`; overrides --A.
    #[arg(long)]
    degrees: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
}

impl ReduceArgs {
    fn resolve(&self) -> Result<(Word, Degrees), Failure> {
        let degrees = match &self.degrees {
            Some(d) => d.parse::<Degrees>().map_err(usage)?,
            None if self.model.allowed.is_empty() => {
                Degrees::free(self.word.parse::<Word>().map_err(usage)?.max_generator())
            }
            None => self.model.model(None)?.degrees(),
        };
        let word = parse_word(&self.word, degrees.k()).map_err(usage)?;
        Ok((word, degrees))
    }
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Word to build G(σ, w) from.
    #[arg(required_unless_present = "input")]
    word: Option<String>,
    /// σ in cycle notation or one-line form.
    #[arg(long, default_value = "(1)")]
    sigma: String,
    /// Read the graph from a JSON file instead of building it.
    #[arg(long, conflicts_with = "word")]
    input: Option<PathBuf>,
    /// Replace the graph by Adm(G).
    #[arg(long)]
    adm: bool,
    /// Degrees used for χ, e.g. `3,inf`.
    #[arg(long)]
    degrees: Option<String>,
    /// Also split G(σ, w) along the cycles of σ.
    #[arg(long)]
    decompose: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    word: String,
    #[arg(long, default_value = "(1)")]
    sigma: String,
    #[command(flatten)]
    model: ModelArgs,
    /// Largest allowed p·|w|.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct PredictArgs {
    word: String,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct SeedArgs {
    /// RNG seed; falls back to PERMWORD_SEED, then 0.
    #[arg(long, env = "PERMWORD_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Draw σ_n for this word instead of a single restricted permutation.
    #[arg(long)]
    word: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// How far n may be raised to reach a feasible size.
    #[arg(long, default_value_t = 64)]
    window: usize,
    #[command(flatten)]
    seed: SeedArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    word: String,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Longest cycle length tracked.
    #[arg(long, default_value_t = 5)]
    q: usize,
    #[command(flatten)]
    seed: SeedArgs,
    /// CSV of the joint counts.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    window: usize,
    /// Total-variation threshold for checks against a limit law.
    #[arg(long, default_value_t = 0.05)]
    tv_tol: f64,
    /// Absolute tolerance for mean checks.
    #[arg(long, default_value_t = 0.05)]
    mean_tol: f64,
    /// Exit with status 2 unless every check passes.
    #[arg(long)]
    assert: bool,
}

#[derive(Args, Debug)]
struct ExactArgs {
    word: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "(1)")]
    sigma: String,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Budget(String),
    Assertion(Value),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget(_) | Error::TooManyVertices { .. } | Error::NoFeasibleSize { .. } => {
                Failure::Budget(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_sigma(text: &str) -> Result<Permutation, Failure> {
    text.parse().map_err(usage)
}

fn emit(value: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn envelope(command: &str, mut body: Value) -> Value {
    if let Value::Object(map) = &mut body {
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("command".into(), json!(command));
    }
    body
}

fn cmd_reduce(args: &ReduceArgs) -> Result<Value, Failure> {
    let (word, degrees) = args.resolve()?;
    let cyclic = word.cyclic_reduce();
    let d_reduced = partial_d_cyclic_reduce(&cyclic, &degrees)?;
    Ok(json!({
        "word": word.render(),
        "degrees": degrees.to_string(),
        "free_reduction": word.free_reduce().render(),
        "cyclic_reduction": cyclic.render(),
        "d_cyclic_reduction": d_reduced.render(),
        "normal_form": normal_form(&word, &degrees).to_string(),
        "cyclic_normal_form": cyclic_normal_form(&word, &degrees).to_string(),
        "order": quotient_order(&word, &degrees).to_string(),
    }))
}

fn cmd_order(args: &ReduceArgs) -> Result<Value, Failure> {
    let (word, degrees) = args.resolve()?;
    let order = quotient_order(&word, &degrees);
    Ok(json!({
        "word": word.render(),
        "degrees": degrees.to_string(),
        "order": order.to_string(),
        "finite_order": order.finite_order(),
        "conjugate_power": order.conjugate_power.map(|(g, a)| json!({"generator": g, "exponent": a})),
    }))
}

fn graph_summary(g: &ColoredGraph, degrees: Option<&Degrees>) -> Result<Value, Failure> {
    let admissible = is_admissible(g);
    let chi = match degrees {
        Some(d) if admissible => Some(neagu_characteristic(g, d)?.to_string()),
        _ => None,
    };
    Ok(json!({
        "graph": graph_to_json(g),
        "vertices": g.num_vertices(),
        "edges": g.num_edges(),
        "admissible": admissible,
        "chi": chi,
        "canonical": canonical_form(g).digest(),
    }))
}

fn cmd_graph(args: &GraphArgs) -> Result<Value, Failure> {
    let degrees = args
        .degrees
        .as_deref()
        .map(str::parse::<Degrees>)
        .transpose()
        .map_err(usage)?;
    let (mut g, word, sigma) = match (&args.input, &args.word) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)?;
            (graph_from_json(&text).map_err(usage)?, None, None)
        }
        (None, Some(text)) => {
            let word: Word = text.parse().map_err(usage)?;
            let sigma = parse_sigma(&args.sigma)?;
            (graph_of_pair(&sigma, &word)?, Some(word), Some(sigma))
        }
        (None, None) => return Err(Failure::Usage("give a word or --input".into())),
    };
    if args.adm {
        g = adm(&g);
    }
    let mut body = graph_summary(&g, degrees.as_ref())?;
    if args.decompose {
        let (Some(word), Some(sigma)) = (&word, &sigma) else {
            return Err(Failure::Usage("--decompose needs a word".into()));
        };
        let parts: Vec<Value> = decompose_by_sigma_cycles(sigma, word)?
            .iter()
            .map(|c| {
                json!({
                    "cycle": c.cycle.iter().map(|m| m + 1).collect::<Vec<_>>(),
                    "canonical": canonical_form(&c.graph).digest(),
                })
            })
            .collect();
        body["components"] = json!(parts);
    }
    Ok(body)
}

fn search_inputs(
    args: &SearchArgs,
) -> Result<(Permutation, Word, ModelConfig, SearchOptions), Failure> {
    let model = args.model.model(Some(&args.word))?;
    let word = parse_word(&args.word, model.k()).map_err(usage)?;
    let sigma = parse_sigma(&args.sigma)?;
    let opts = SearchOptions {
        vertex_cap: args.cap,
        ..SearchOptions::default()
    };
    Ok((sigma, word, model, opts))
}

fn cmd_chi(args: &SearchArgs) -> Result<Value, Failure> {
    let (sigma, word, model, opts) = search_inputs(args)?;
    let spectrum = chi_spectrum_with(&sigma, &word, &model, opts)?;
    let leading = spectrum
        .leading()
        .map(|(c, m)| json!({"chi": c.to_string(), "multiplicity": m}));
    Ok(json!({
        "word": word.render(),
        "sigma": sigma.to_string(),
        "model": model.to_string(),
        "spectrum": spectrum,
        "total": spectrum.total(),
        "leading": leading,
    }))
}

fn cmd_enumerate(args: &SearchArgs) -> Result<Value, Failure> {
    let (sigma, word, model, opts) = search_inputs(args)?;
    let mut rows = Vec::new();
    for_each_c(&sigma, &word, &model, opts, |delta, chi| {
        let blocks: Vec<Vec<usize>> = delta
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|v| v + 1).collect())
            .collect();
        rows.push(
            json!({"blocks": blocks, "num_blocks": delta.num_blocks(), "chi": chi.to_string()}),
        );
    })?;
    Ok(json!({
        "word": word.render(),
        "sigma": sigma.to_string(),
        "model": model.to_string(),
        "count": rows.len(),
        "partitions": rows,
    }))
}

fn prediction_json(word: &Word, model: &ModelConfig) -> Result<Value, Failure> {
    let p = predict_limit(word, model)?;
    Ok(json!({
        "prediction": p.to_string(),
        "rule": p.rule.describe(),
        "detail": p,
    }))
}

fn cmd_predict(args: &PredictArgs) -> Result<Value, Failure> {
    let model = args.model.model(Some(&args.word))?;
    let word = parse_word(&args.word, model.k()).map_err(usage)?;
    let mut body = prediction_json(&word, &model)?;
    body["word"] = json!(word.render());
    body["model"] = json!(model.to_string());
    Ok(body)
}

/// Raises `n` to the next size where every `S_n(A_i)` is nonempty.
fn adjust(model: &ModelConfig, n: usize, window: usize) -> Result<(usize, Value), Failure> {
    let m = next_feasible_size(model, n, window)?;
    if m != n {
        eprintln!("note: n = {n} is infeasible for {model}; using n = {m}");
    }
    Ok((m, json!({"requested": n, "used": m, "adjusted": m != n})))
}

fn cmd_sample(args: &SampleArgs) -> Result<Value, Failure> {
    let model = args.model.model(args.word.as_deref())?;
    let (n, size) = adjust(&model, args.n, args.window)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.seed);
    let draws: Vec<Permutation> = match &args.word {
        Some(text) => {
            let word = parse_word(text, model.k()).map_err(usage)?;
            let sampler = ModelSampler::new(&model, n)?;
            (0..args.count)
                .map(|_| sampler.sample_sigma(&word, &mut rng))
                .collect::<Result<_, _>>()?
        }
        None if model.k() == 1 => (0..args.count)
            .map(|_| sample_restricted(n, model.allowed(1), &mut rng))
            .collect::<Result<_, _>>()?,
        None => {
            return Err(Failure::Usage(
                "without --word, give exactly one --A".into(),
            ))
        }
    };
    let rendered: Vec<Value> = draws
        .iter()
        .map(|p| json!({"cycles": p.to_string(), "cycle_type": p.cycle_lengths()}))
        .collect();
    Ok(json!({
        "model": model.to_string(),
        "n": size,
        "seed": args.seed.seed,
        "draws": rendered,
    }))
}

fn write_csv(path: &PathBuf, law: &EmpiricalLaw) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    let mut header: Vec<String> = (1..=law.q).map(|l| format!("N_{l}")).collect();
    header.push("count".into());
    w.write_record(&header)
        .map_err(|e| io::Error::other(e.to_string()))?;
    for (k, c) in &law.joint {
        let mut row: Vec<String> = k.as_slice().iter().map(u64::to_string).collect();
        row.push(c.to_string());
        w.write_record(&row)
            .map_err(|e| io::Error::other(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn check(name: String, value: f64, pass: bool) -> Value {
    json!({"check": name, "value": value, "pass": pass})
}

fn cmd_simulate(args: &SimulateArgs) -> Result<Value, Failure> {
    let model = args.model.model(Some(&args.word))?;
    let word = parse_word(&args.word, model.k()).map_err(usage)?;
    let (n, size) = adjust(&model, args.n, args.window)?;
    let config = ExperimentConfig {
        word: word.clone(),
        model: model.clone(),
        n,
        samples: args.samples,
        q: args.q,
        seed: args.seed.seed,
    };
    let law = run(&config)?;
    if let Some(path) = &args.out {
        write_csv(path, &law)?;
    }

    let mut checks = vec![json!({"check": "conservation", "pass": law.conserved})];
    let means: Vec<Value> = (1..=args.q)
        .map(|l| {
            let m = mean_check(&law, l);
            json!({"l": l, "mean": m.estimate, "std_error": m.std_error, "variance": law.variance(l)})
        })
        .collect();
    let mut tvs = Vec::new();
    let prediction = predict_limit(&word, &model).ok();
    if let Some(p) = &prediction {
        if let Some(theo) = theoretical_law(p, args.q) {
            for l in 1..=args.q {
                let tv = tv_distance(&law.marginal(l), theo.marginal(l));
                tvs.push(json!({"l": l, "tv": tv}));
                checks.push(check(format!("tv N_{l}"), tv, tv < args.tv_tol));
            }
        }
        match p.kind {
            LimitKind::InvolutionCase(InvolutionCase::BothTwo) => {
                checks.push(json!({"check": "all N_l even", "pass": law.all_even(args.q)}));
            }
            LimitKind::InvolutionCase(InvolutionCase::Mixed) => {
                let odd_even = law
                    .joint
                    .keys()
                    .all(|k| (1..=args.q).step_by(2).all(|l| k.get(l) % 2 == 0));
                checks.push(json!({"check": "N_l even for odd l", "pass": odd_even}));
            }
            LimitKind::DegenerateOrder(d) if d as usize <= args.q => {
                let f = fraction_check(&law, d as usize).estimate;
                let target = 1.0 / d as f64;
                checks.push(check(
                    format!("mean N_{d}/n near 1/{d}"),
                    f,
                    (f - target).abs() < args.mean_tol,
                ));
            }
            LimitKind::LowerBoundOnly(bound) => {
                for l in (1..=args.q).filter(|&l| bound.covers(l as u64, &model)) {
                    let m = law.mean(l);
                    checks.push(check(
                        format!("mean N_{l} >= 1/{l}"),
                        m,
                        m >= 1.0 / l as f64 - args.mean_tol,
                    ));
                }
            }
            _ => {}
        }
    }
    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    let body = json!({
        "word": word.render(),
        "model": model.to_string(),
        "n": size,
        "samples": law.samples,
        "q": args.q,
        "seed": args.seed.seed,
        "prediction": prediction.map(|p| p.to_string()),
        "means": means,
        "tv": tvs,
        "checks": checks,
        "pass": pass,
    });
    if args.assert && !pass {
        return Err(Failure::Assertion(body));
    }
    Ok(body)
}

fn cmd_exact(args: &ExactArgs) -> Result<Value, Failure> {
    let model = args.model.model(Some(&args.word))?;
    let word = parse_word(&args.word, model.k()).map_err(usage)?;
    let sigma = parse_sigma(&args.sigma)?;
    let report = verify_partition_identity(&sigma, &word, args.n, &model)?;
    let body = json!({
        "word": word.render(),
        "sigma": sigma.to_string(),
        "model": model.to_string(),
        "n": args.n,
        "report": report,
    });
    if !report.equal {
        return Err(Failure::Assertion(body));
    }
    Ok(body)
}

fn dispatch(cli: &Cli) -> Result<Value, Failure> {
    let (name, result) = match &cli.command {
        Command::Reduce(a) => ("reduce", cmd_reduce(a)),
        Command::Order(a) => ("order", cmd_order(a)),
        Command::Graph(a) => ("graph", cmd_graph(a)),
        Command::Chi(a) => ("chi", cmd_chi(a)),
        Command::Enumerate(a) => ("enumerate", cmd_enumerate(a)),
        Command::Predict(a) => ("predict", cmd_predict(a)),
        Command::Sample(a) => ("sample", cmd_sample(a)),
        Command::Simulate(a) => ("simulate", cmd_simulate(a)),
        Command::ExactCheck(a) => ("exact-check", cmd_exact(a)),
    };
    match result {
        Ok(body) => Ok(envelope(name, body)),
        Err(Failure::Assertion(body)) => Err(Failure::Assertion(envelope(name, body))),
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(64)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = dispatch(&cli).and_then(|body| emit(&body));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(body)) => {
            let _ = emit(&body);
            eprintln!("error: assertion failed");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(65)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(74)
        }
    }
}
