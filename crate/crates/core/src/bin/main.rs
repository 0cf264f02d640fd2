use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use torus_tangency::arith::rational_string;
use torus_tangency::poly::SparsePoly;
use torus_tangency::report::{analyze, dehn_exclusion_report, ingest_corpus, run_verification_suite, singular_report};
use torus_tangency::solver::AlgebraicValue;
use torus_tangency::tangency::{slope_scan, Execution, Target};
use torus_tangency::Error;

#[derive(Parser)]
#[command(name = "torus-tangency", version, about = "Certified tangencies of plane curves with subtori of the 2-torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// File holding the polynomial, or `-` for stdin.
    #[arg(long, conflicts_with = "expr")]
    poly: Option<PathBuf>,
    /// The polynomial itself.
    #[arg(long)]
    expr: Option<String>,
    /// Emit one JSON document.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExecFlags {
    /// Run slopes one at a time.
    #[arg(long, conflicts_with = "parallel")]
    serial: bool,
    /// Run slopes on all cores (the default).
    #[arg(long)]
    parallel: bool,
}

impl ExecFlags {
    fn mode(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degrees, height and bounds of a curve.
    Analyze {
        #[command(flatten)]
        input: Input,
    },
    /// Singular intersections for all slopes up to a radius.
    Scan {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_slope: i64,
        /// Accept torsion translates of order up to M.
        #[arg(long, value_name = "M", conflicts_with = "any_translate")]
        torsion: Option<u64>,
        /// Accept every translate.
        #[arg(long)]
        any_translate: bool,
        #[command(flatten)]
        exec: ExecFlags,
    },
    /// Slope exclusion report.
    Report {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_slope: i64,
        #[arg(long, value_name = "M")]
        torsion: u64,
        #[command(flatten)]
        exec: ExecFlags,
    },
    /// Singular points and branch tangents.
    Singular {
        #[command(flatten)]
        input: Input,
    },
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
    /// Bundled or user curve collections.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Validate and list entries.
    List {
        dir: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Exclusion report for every entry.
    Run {
        dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_slope: i64,
        #[arg(long, default_value_t = 12)]
        torsion: u64,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        exec: ExecFlags,
    },
}

/// A finished command: its output and whether every checked property held.
struct Outcome {
    value: Value,
    text: String,
    ok: bool,
}

fn read_poly(input: &Input) -> Result<SparsePoly, Error> {
    let text = match (&input.expr, &input.poly) {
        (Some(e), _) => e.clone(),
        (None, Some(p)) if p == Path::new("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
        (None, Some(p)) => std::fs::read_to_string(p)?,
        (None, None) => return Err(Error::Input("one of --poly or --expr is required".into())),
    };
    text.trim().parse()
}

fn field(v: &Value, path: &[&str]) -> String {
    let mut cur = v;
    for k in path {
        cur = &cur[*k];
    }
    match cur {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn height_text(v: &Value) -> String {
    match v["kind"].as_str() {
        Some("exact-log") => format!("log {}", field(v, &["arg"])),
        Some("log-linear") => {
            let mut parts = vec![field(v, &["const"])];
            for t in v["terms"].as_array().into_iter().flatten() {
                let c = field(t, &["coeff"]);
                let c = if c == "1" { String::new() } else { format!("{c}*") };
                parts.push(format!("{c}log {}", field(t, &["arg"])));
            }
            parts.join(" + ")
        }
        _ => format!("[{}, {}]", field(v, &["lo"]), field(v, &["hi"])),
    }
}

fn cmd_analyze(input: &Input) -> Result<Outcome, Error> {
    let v = analyze(&read_poly(input)?)?;
    let b = &v["bounds"];
    let text = format!(
        "curve            {}\ndegrees          total {}, x {}, y {}\nheight h(f)      {}\nsquarefree       {}\nhabegger bound   {}\nlog slope bound  {}\nbezout degree    {}\n",
        field(&v, &["curve", "poly"]),
        field(&v, &["curve", "delta"]),
        field(&v, &["curve", "delta_x"]),
        field(&v, &["curve", "delta_y"]),
        height_text(&v["curve"]["height"]),
        v["squarefree"],
        height_text(&b["habegger"]),
        height_text(&b["theorem_log"]),
        field(b, &["bezout_degree"]),
    );
    Ok(Outcome { value: v, text, ok: true })
}

fn cmd_scan(input: &Input, radius: i64, torsion: Option<u64>, any: bool, exec: &ExecFlags) -> Result<Outcome, Error> {
    let target = match (torsion, any) {
        (_, true) => Target::AnyTranslate,
        (Some(m), _) => Target::TorsionUpTo(m),
        _ => Target::Unit,
    };
    let f = read_poly(input)?;
    let r = slope_scan(&f, radius, target, exec.mode())?;
    let mut text = format!("{} slopes scanned, target {}\n", r.results.len(), target.name());
    for h in r.hits() {
        for si in &h.intersections {
            text += &format!("slope {:<8} point {}  coset value {}\n", h.locus.slope.to_string(), si.point.describe(), value_text(&si.value));
        }
    }
    if let Some(b) = &r.log_bound {
        text += &format!("log slope bound {}\n", b.to_text());
    }
    Ok(Outcome { value: r.to_json(), text, ok: true })
}

fn value_text(v: &AlgebraicValue) -> String {
    match v.rational() {
        Some(r) => rational_string(&r),
        None => format!("root of {}", v.minpoly.to_text()),
    }
}

fn report_text(v: &Value) -> String {
    let mut text = format!("curve {}\n", field(v, &["curve", "poly"]));
    for e in v["excluded_slopes"].as_array().into_iter().flatten() {
        let kinds: Vec<String> = e["reasons"].as_array().into_iter().flatten().map(|r| field(r, &["kind"])).collect();
        text += &format!("excluded ({},{})  {}\n", e["p"], e["q"], kinds.join(", "));
    }
    text += &format!("log slope bound {}\n", height_text(&v["theoretical_log_bound"]));
    for w in v["warnings"].as_array().into_iter().flatten() {
        text += &format!("warning: {}\n", w.as_str().unwrap_or_default());
    }
    text
}

fn cmd_report(input: &Input, radius: i64, m: u64, exec: &ExecFlags) -> Result<Outcome, Error> {
    let r = dehn_exclusion_report(&read_poly(input)?, radius, m, exec.mode())?;
    let v = r.to_json();
    Ok(Outcome { text: report_text(&v), ok: r.audits_passed(), value: v })
}

fn cmd_singular(input: &Input) -> Result<Outcome, Error> {
    let v = singular_report(&read_poly(input)?)?;
    let mut text = String::new();
    for sp in v["curve_singularities"].as_array().into_iter().flatten() {
        let slopes: Vec<String> = sp["tangent_slopes"].as_array().into_iter().flatten().map(|s| format!("({},{})", s[0], s[1])).collect();
        text += &format!(
            "point {}  multiplicity {}  slopes [{}]  irrational {}  torsion {}\n",
            field(sp, &["label"]),
            sp["multiplicity"],
            slopes.join(" "),
            sp["irrational_directions"],
            sp["torsion"]["is_torsion"],
        );
    }
    if text.is_empty() {
        text += "no singular points in the torus\n";
    }
    Ok(Outcome { value: v, text, ok: true })
}

fn cmd_verify(seed: u64, samples: usize) -> Outcome {
    let r = run_verification_suite(seed, samples);
    let mut text = String::new();
    for o in &r.outcomes {
        text += &format!("{:<24} {:>6} cases  {}\n", o.name, o.cases, if o.counterexample.is_none() { "pass" } else { "FAIL" });
        if let Some(c) = &o.counterexample {
            text += &format!("  counterexample: {c}\n");
        }
    }
    Outcome { value: r.to_json(), text, ok: r.passed() }
}

fn cmd_corpus(action: &CorpusAction) -> Result<Outcome, Error> {
    match action {
        CorpusAction::List { dir, .. } => {
            let c = ingest_corpus(dir)?;
            let mut text = String::new();
            for e in &c.entries {
                text += &format!("{:<24} degree {:<3} height {}\n", e.name, e.degree, e.height.to_text());
            }
            for (n, why) in &c.rejected {
                text += &format!("rejected {n}: {why}\n");
            }
            let value = json!({
                "entries": c.entries.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
                "rejected": c.rejected.iter().map(|(n, w)| json!({ "file": n, "reason": w })).collect::<Vec<_>>(),
            });
            Ok(Outcome { value, text, ok: c.rejected.is_empty() })
        }
        CorpusAction::Run { dir, max_slope, torsion, exec, .. } => {
            let c = ingest_corpus(dir)?;
            let mut reports = Vec::new();
            let mut text = String::new();
            let mut ok = c.rejected.is_empty();
            for e in &c.entries {
                let r = dehn_exclusion_report(&e.poly, *max_slope, *torsion, exec.mode())?;
                ok &= r.audits_passed();
                let v = r.to_json();
                text += &format!("== {}\n{}", e.name, report_text(&v));
                reports.push(json!({ "name": e.name, "report": v }));
            }
            Ok(Outcome { value: json!({ "reports": reports }), text, ok })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = match &cli.command {
        Command::Analyze { input } | Command::Scan { input, .. } | Command::Report { input, .. } | Command::Singular { input } => input.json,
        Command::Verify { json, .. } => *json,
        Command::Corpus { action: CorpusAction::List { json, .. } | CorpusAction::Run { json, .. } } => *json,
    };
    let result = match &cli.command {
        Command::Analyze { input } => cmd_analyze(input),
        Command::Scan { input, max_slope, torsion, any_translate, exec } => cmd_scan(input, *max_slope, *torsion, *any_translate, exec),
        Command::Report { input, max_slope, torsion, exec } => cmd_report(input, *max_slope, *torsion, exec),
        Command::Singular { input } => cmd_singular(input),
        Command::Verify { seed, samples, .. } => Ok(cmd_verify(*seed, *samples)),
        Command::Corpus { action } => cmd_corpus(action),
    };
    match result {
        Ok(out) => {
            if json_out {
                println!("{}", serde_json::to_string_pretty(&out.value).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            if json_out {
                println!("{}", serde_json::to_string_pretty(&json!({ "error": e.to_string(), "exit_code": e.exit_code() })).expect("serializable"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
