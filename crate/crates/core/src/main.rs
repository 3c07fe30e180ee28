use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nfstrat::acyclic::{acyclic_index, graph_acyclic, to_dot};
use nfstrat::canonical::{canonical_index, phf_transform};
use nfstrat::corpus::{compare, CompareReport};
use nfstrat::formula::{build_var_graph, occurrence_count, render, Formula, Side, Var};
use nfstrat::indexing::{rng_summary, OccurrenceIndexing};
use nfstrat::model::{
    automorphisms, demo, invariance_survey, invariance_survey_sampled, j_lift, ConstraintFile, Constraints, Digraph,
    InvarianceReport, ModelFile, Verdict, DEFAULT_PERMUTATION_LIMIT,
};
use nfstrat::parse;
use nfstrat::stratify::{stratify, Stratification};

/// Stratification and acyclicity of set-theory formulas, and permutation
/// invariance on finite membership digraphs.
#[derive(Parser)]
#[command(name = "nfstrat", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest universe enumerated exhaustively.
    #[arg(long, global = true, default_value_t = DEFAULT_PERMUTATION_LIMIT)]
    limit: usize,
    /// Seed for sampling permutations of universes above the limit.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Exit 0 when the outcome matches, 1 when it does not.
    #[arg(long, global = true, value_enum)]
    expect: Option<Expect>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Invariant,
    Violated,
    Stratified,
    Unstratified,
    Acyclic,
    Cyclic,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its syntax tree.
    Parse(FormulaInput),
    /// Decide stratification directly: a type assignment or a cycle witness.
    Stratify(FormulaInput),
    /// Canonical occurrence indexing.
    Canon {
        #[command(flatten)]
        input: FormulaInput,
        /// Also print the prefixed transform.
        #[arg(long)]
        phf: bool,
    },
    /// Acyclic occurrence indexing.
    Acyclic {
        #[command(flatten)]
        input: FormulaInput,
        /// Also print the variable graph in Graphviz format.
        #[arg(long)]
        dot: bool,
    },
    /// Cross-check both indexings against their oracles on every conjunction
    /// within the bounds.
    Compare {
        #[arg(long, default_value_t = 4)]
        max_atoms: usize,
        #[arg(long, default_value_t = 4)]
        max_vars: usize,
        /// Also compare canonical Σ rng with the brute-force minimum (≤ 3 atoms).
        #[arg(long)]
        minimality: bool,
    },
    /// Permutation invariance on finite digraphs.
    #[command(subcommand)]
    Model(ModelCommand),
}

#[derive(Args)]
struct FormulaInput {
    /// Formula text.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    formula: Option<String>,
    /// Read the formula from a UTF-8 file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Survey a comprehension instance over the permitted permutations.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, required_unless_present = "formula_file", conflicts_with = "formula_file")]
        formula: Option<String>,
        #[arg(long)]
        formula_file: Option<PathBuf>,
        #[arg(long, default_value = "y")]
        class_var: String,
        #[arg(long)]
        constraints: Option<PathBuf>,
        /// Permutations drawn in sampled mode.
        #[arg(long, default_value_t = 1000)]
        draws: usize,
    },
    /// Run a curated fixture.
    Demo { name: String },
    /// List the automorphisms of a digraph.
    Automorphisms {
        #[arg(long)]
        model: PathBuf,
    },
}

/// What a command produced: both renderings plus the outcome `--expect`
/// is matched against.
struct Report {
    text: String,
    json: Value,
    outcome: Option<Expect>,
    exit: u8,
}

impl Report {
    fn plain(text: String, json: Value, outcome: Option<Expect>) -> Self {
        Report {
            text,
            json,
            outcome,
            exit: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).unwrap()),
            }
            match exit_code(&cli, &report) {
                Ok(code) => ExitCode::from(code),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn exit_code(cli: &Cli, report: &Report) -> Result<u8> {
    let Some(expect) = cli.expect else {
        return Ok(report.exit);
    };
    if report.exit == 2 {
        return Ok(2);
    }
    let Some(outcome) = report.outcome else {
        bail!("this command has no outcome to compare with --expect");
    };
    let family = |e: Expect| match e {
        Expect::Invariant | Expect::Violated => 0,
        Expect::Stratified | Expect::Unstratified => 1,
        Expect::Acyclic | Expect::Cyclic => 2,
    };
    if family(expect) != family(outcome) {
        bail!("--expect does not apply to this command");
    }
    Ok(if expect == outcome { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Parse(input) => cmd_parse(&input.read()?),
        Command::Stratify(input) => cmd_stratify(&input.read()?),
        Command::Canon { input, phf } => cmd_canon(&input.read()?, *phf),
        Command::Acyclic { input, dot } => cmd_acyclic(&input.read()?, *dot),
        Command::Compare {
            max_atoms,
            max_vars,
            minimality,
        } => cmd_compare(*max_atoms, *max_vars, *minimality),
        Command::Model(m) => cmd_model(cli, m),
    }
}

impl FormulaInput {
    fn read(&self) -> Result<Formula> {
        formula_from(self.formula.as_deref(), self.file.as_deref())
    }
}

fn formula_from(text: Option<&str>, file: Option<&Path>) -> Result<Formula> {
    let text = match (text, file) {
        (Some(t), _) => t.to_string(),
        (None, Some(path)) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        (None, None) => bail!("no formula given"),
    };
    Ok(parse(text.trim())?)
}

fn cmd_parse(f: &Formula) -> Result<Report> {
    let vars: Vec<String> = f.variables().iter().map(ToString::to_string).collect();
    let text = format!(
        "{}\natoms: {}\noccurrences: {}\nvariables: {}\n",
        render(f),
        f.atom_count(),
        occurrence_count(f),
        vars.join(" ")
    );
    let json = json!({
        "formula": render(f),
        "ast": f,
        "atoms": f.atom_count(),
        "occurrences": occurrence_count(f),
        "variables": f.variables(),
        "free": f.free_variables(),
    });
    Ok(Report::plain(text, json, None))
}

fn cmd_stratify(f: &Formula) -> Result<Report> {
    Ok(match stratify(f) {
        Stratification::Stratified(types) => {
            let mut text = String::from("stratified\n");
            for (v, t) in &types.0 {
                writeln!(text, "  {v}: {t}")?;
            }
            let json = json!({ "formula": render(f), "stratified": true, "types": types });
            Report::plain(text, json, Some(Expect::Stratified))
        }
        Stratification::Unstratified(cycle) => {
            let mut text = format!("unstratified: closed walk of net weight {}\n", cycle.net_weight);
            for s in &cycle.steps {
                writeln!(text, "  {} -> {}  atom {}  {:+}", s.from, s.to, s.atom, s.weight)?;
            }
            let json = json!({
                "formula": render(f),
                "stratified": false,
                "cycle": cycle.steps,
                "net_weight": cycle.net_weight,
            });
            Report::plain(text, json, Some(Expect::Unstratified))
        }
    })
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "L",
        Side::Right => "R",
    }
}

/// Shared text and JSON for both indexings.
fn indexing_report(
    f: &Formula,
    pi: &OccurrenceIndexing,
    verdict_key: &str,
    yes: &str,
    no: &str,
) -> (String, Value, bool) {
    let summary = rng_summary(pi);
    let ok = summary.is_functional();
    let mut text = String::new();
    for (occ, idx) in pi.iter() {
        writeln!(
            text,
            "  atom {} {} {:<6} {}",
            occ.atom,
            side_name(occ.side),
            occ.var.as_str(),
            idx
        )
        .unwrap();
    }
    let rng: Vec<String> = summary.rng.iter().map(|(v, n)| format!("{v}:{n}")).collect();
    writeln!(text, "rng {{{}}}", rng.join(", ")).unwrap();
    writeln!(
        text,
        "sum {} {} {} variables: {}",
        summary.total,
        if ok { "=" } else { ">" },
        summary.var_count,
        if ok { yes } else { no }
    )
    .unwrap();
    let indices: Vec<Value> = pi
        .iter()
        .map(|(occ, idx)| json!({ "atom": occ.atom, "side": side_name(occ.side), "var": occ.var, "index": idx }))
        .collect();
    let json = json!({
        "formula": render(f),
        "indices": indices,
        "schedule": pi.schedule(),
        "rng": summary.rng,
        "sum": summary.total,
        "vars": summary.var_count,
        verdict_key: ok,
    });
    (text, json, ok)
}

fn cmd_canon(f: &Formula, phf: bool) -> Result<Report> {
    let pi = canonical_index(f)?;
    let (mut text, mut json, ok) = indexing_report(f, &pi, "stratified", "stratified", "unstratified");
    if phf {
        let t = phf_transform(f, &pi);
        writeln!(text, "{t}")?;
        json["phf"] = json!(t.text);
        json["setlike_bound"] = json!(t.setlike_bound);
    }
    let outcome = if ok { Expect::Stratified } else { Expect::Unstratified };
    Ok(Report::plain(text, json, Some(outcome)))
}

fn cmd_acyclic(f: &Formula, dot: bool) -> Result<Report> {
    let pi = acyclic_index(f)?;
    let (mut text, mut json, ok) = indexing_report(f, &pi, "acyclic", "acyclic", "not acyclic");
    let graph = build_var_graph(f);
    json["graph_acyclic"] = json!(graph_acyclic(&graph));
    if dot {
        let g = to_dot(&graph);
        text.push_str(&g);
        json["dot"] = json!(g);
    }
    let outcome = if ok { Expect::Acyclic } else { Expect::Cyclic };
    Ok(Report::plain(text, json, Some(outcome)))
}

fn cmd_compare(max_atoms: usize, max_vars: usize, minimality: bool) -> Result<Report> {
    let r = compare(max_atoms, max_vars, minimality)?;
    let text = compare_text(&r);
    let exit = if r.is_clean() { 0 } else { 1 };
    Ok(Report {
        text,
        json: serde_json::to_value(&r)?,
        outcome: None,
        exit,
    })
}

fn compare_text(r: &CompareReport) -> String {
    let mut t = format!(
        "corpus: {} formulas (≤ {} atoms, ≤ {} variables)\nstratified: {}\nacyclic: {}\n",
        r.formulas, r.max_atoms, r.max_vars, r.stratified, r.acyclic
    );
    let mut section = |name: &str, items: Vec<String>| {
        writeln!(t, "{name}: {}", items.len()).unwrap();
        for i in items {
            writeln!(t, "  {i}").unwrap();
        }
    };
    let dis = |ds: &[nfstrat::corpus::Disagreement]| {
        ds.iter()
            .map(|d| format!("{}  indexing={} oracle={}", d.formula, d.indexing, d.oracle))
            .collect()
    };
    section("canonical vs oracle disagreements", dis(&r.canonical_disagreements));
    section("acyclic vs graph disagreements", dis(&r.acyclic_disagreements));
    section("acyclic but unstratified", r.acyclic_unstratified.clone());
    section(
        "index bound violations",
        r.index_bound_violations
            .iter()
            .map(|b| format!("{}  {:?} (bound {})", b.formula, b.indices, b.bound))
            .collect(),
    );
    if let Some(m) = &r.minimality {
        section(
            &format!("minimality mismatches (of {} checked)", m.checked),
            m.mismatches
                .iter()
                .map(|x| format!("{}  canonical={} minimum={}", x.formula, x.canonical, x.minimum))
                .collect(),
        );
    }
    t
}

fn load_model(path: &Path) -> Result<Digraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ModelFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Digraph::try_from(file)?)
}

fn cmd_model(cli: &Cli, m: &ModelCommand) -> Result<Report> {
    match m {
        ModelCommand::Check {
            model,
            formula,
            formula_file,
            class_var,
            constraints,
            draws,
        } => {
            let d = load_model(model)?;
            let phi = formula_from(formula.as_deref(), formula_file.as_deref())?;
            let c = match constraints {
                Some(path) => {
                    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let file: ConstraintFile =
                        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
                    file.resolve(&d)?
                }
                None => Constraints::default(),
            };
            let class_var = Var::new(class_var.as_str());
            let report = match (d.len() > cli.limit, cli.seed) {
                (true, Some(seed)) => invariance_survey_sampled(&d, &phi, &class_var, &c, *draws, seed)?,
                _ => invariance_survey(&d, &phi, &class_var, &c, cli.limit)?,
            };
            let text = survey_text(&d, &render(&phi), &report);
            Ok(survey_report(text, &report, json!({ "formula": render(&phi) })))
        }
        ModelCommand::Demo { name } => {
            let run = demo(name, cli.limit)?;
            let d = &run.spec.digraph;
            let mut text = format!("{}: {}\n", run.spec.name, run.spec.summary);
            text.push_str(&survey_text(d, &render(&run.spec.formula), &run.report));
            let extra = json!({
                "demo": run.spec.name,
                "formula": render(&run.spec.formula),
                "model": d.to_file(),
                "confirms": run.confirms(),
            });
            Ok(survey_report(text, &run.report, extra))
        }
        ModelCommand::Automorphisms { model } => {
            let d = load_model(model)?;
            let auts = automorphisms(&d, cli.limit)?;
            let mut text = format!("{} automorphisms\n", auts.len());
            let mut list = Vec::new();
            for f in &auts {
                let lift = j_lift(&d, f);
                let lifts_to_self = lift.as_ref().is_ok_and(|g| g == f);
                writeln!(text, "  {f}{}", if lifts_to_self { "" } else { "  (j-lift differs)" })?;
                list.push(json!({ "permutation": f, "cycles": f.cycles(), "j_lift_fixed": lifts_to_self }));
            }
            let json = json!({ "n": d.len(), "extensional": d.is_extensional(), "automorphisms": list });
            Ok(Report::plain(text, json, None))
        }
    }
}

fn survey_text(d: &Digraph, formula: &str, r: &InvarianceReport) -> String {
    let class: Vec<String> = r.class.iter().map(|&e| d.label(e)).collect();
    let levels: Vec<String> = r.levels.iter().map(|(k, l)| format!("{k}:{l}")).collect();
    let mut t = format!(
        "class {{y : {formula}}} = {{{}}}\nlevels {}\npermutations tested: {}",
        class.join(", "),
        levels.join(" "),
        r.permutations_tested
    );
    if let Some(s) = &r.sampling {
        write!(t, " (sampled, seed {})", s.seed).unwrap();
    }
    t.push('\n');
    let verdict = match r.verdict {
        Verdict::Invariant => "invariant",
        Verdict::Violated => "violated",
        Verdict::Vacuous => "vacuous",
    };
    writeln!(t, "verdict: {verdict}").unwrap();
    for v in &r.violations {
        writeln!(
            t,
            "  f = {}  at {}: f(y) in class is {}, body reads {}",
            v.permutation,
            d.label(v.witness),
            v.expected,
            v.got
        )
        .unwrap();
    }
    t
}

fn survey_report(text: String, r: &InvarianceReport, extra: Value) -> Report {
    let mut json = serde_json::to_value(r).expect("report serializes");
    if let (Value::Object(out), Value::Object(more)) = (&mut json, extra) {
        out.extend(more);
    }
    let outcome = match r.verdict {
        Verdict::Invariant => Some(Expect::Invariant),
        Verdict::Violated => Some(Expect::Violated),
        Verdict::Vacuous => None,
    };
    Report {
        text,
        json,
        outcome,
        exit: r.verdict.exit_code() as u8,
    }
}
