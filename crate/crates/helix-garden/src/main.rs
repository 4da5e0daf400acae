//! Command-line front end: generate helix polygons, emit their formulas,
//! verify formulas against polygons, search for minimal guard sets, render
//! SVG, and reproduce the headline results in one run.
//!
//! Exit codes: 0 on success / verdict true, 1 on verdict false or a failed
//! reproduction row, 2 on input errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use helix_garden::formula::{helix_formula, pocket_formula, pocket_guard_set};
use helix_garden::geom::{Point, Polygon};
use helix_garden::guards::GuardSet;
use helix_garden::helix::{
    build_helix, default_base, default_delta_fraction, pocket, pocket_angle_check, Helix,
};
use helix_garden::scalar::{format_scalar, parse_scalar, Scalar};
use helix_garden::svg::{render, RenderOptions};
use helix_garden::verify::{
    build_arrangement, defines, defines_exterior, min_natural_guards, monotone_definable,
    MinGuardsOutcome,
};
use helix_garden::{fixtures, parse_formula};

#[derive(Parser)]
#[command(
    name = "helix-garden",
    version,
    about = "helix polygons and guard formulas, exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a helix polygon and write it as JSON (optionally SVG).
    Gen(GenArgs),
    /// Print the defining formula for an n-vertex helix (or its pocket).
    Formula(FormulaArgs),
    /// Check whether a formula defines a polygon's interior (or exterior).
    Verify(VerifyArgs),
    /// Exhaustive minimal natural-guard search.
    Search(SearchArgs),
    /// Render a polygon JSON file as SVG.
    Render(RenderArgs),
    /// Re-run the headline checks over a range of n and print a table.
    Repro(ReproArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Step fraction in (0,1), e.g. 1/2.
    #[arg(long, default_value = "1/2")]
    delta_fraction: String,
    /// Base triangle as JSON [["x","y"],["x","y"],["x","y"]].
    #[arg(long)]
    base: Option<String>,
    /// Output path for the polygon JSON (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the construction trace JSON here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the natural guards (labeled g1..gn by construction index) here.
    #[arg(long)]
    guards: Option<PathBuf>,
    /// Write an SVG rendering here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Overlay the convex hull and pocket in the SVG.
    #[arg(long)]
    pocket: bool,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(long)]
    n: usize,
    /// Emit the pocket formula instead of the interior formula.
    #[arg(long)]
    pocket: bool,
    /// Emit JSON instead of formula text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Polygon JSON file.
    #[arg(long)]
    polygon: PathBuf,
    /// Formula text, e.g. "g1.g2+g1.g3.g6".
    #[arg(long)]
    formula: String,
    /// "natural" for natural vertex guards g1..gn, or a guard JSON file.
    #[arg(long, default_value = "natural")]
    guards: String,
    /// Check that the formula defines the exterior instead.
    #[arg(long)]
    exterior: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    polygon: PathBuf,
    /// Largest subset size to try (defaults to the vertex count).
    #[arg(long)]
    max_k: Option<usize>,
    /// Worker threads for the subset sweep (default: rayon's choice).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    polygon: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overlay the convex hull and pocket.
    #[arg(long)]
    pocket: bool,
    /// Overlay the natural vertex guards.
    #[arg(long)]
    guards: bool,
}

#[derive(Args)]
struct ReproArgs {
    /// Smallest n in the sweep.
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    /// Largest n in the sweep.
    #[arg(long, default_value_t = 12)]
    n_max: usize,
    /// Run the exhaustive guard search for n up to this value.
    #[arg(long, default_value_t = 8)]
    search_max: usize,
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Formula(args) => cmd_formula(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Search(args) => cmd_search(args),
        Command::Render(args) => cmd_render(args),
        Command::Repro(args) => cmd_repro(args),
    }
}

fn parse_fraction(text: &str) -> Result<Scalar, String> {
    parse_scalar(text).map_err(|e| format!("bad fraction '{text}': {e}"))
}

fn parse_base(text: &str) -> Result<[Point; 3], String> {
    let raw: Vec<[String; 2]> =
        serde_json::from_str(text).map_err(|e| format!("bad base JSON: {e}"))?;
    if raw.len() != 3 {
        return Err(format!("base must have 3 vertices, got {}", raw.len()));
    }
    let mut pts = Vec::new();
    for [x, y] in &raw {
        pts.push(Point::new(
            parse_scalar(x).map_err(|e| e.to_string())?,
            parse_scalar(y).map_err(|e| e.to_string())?,
        ));
    }
    Ok([pts[0].clone(), pts[1].clone(), pts[2].clone()])
}

fn load_polygon(path: &PathBuf) -> Result<Polygon, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Polygon::from_json(&value).map_err(|e| e.to_string())
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, String> {
    let base = match &args.base {
        Some(text) => parse_base(text)?,
        None => default_base(),
    };
    let fraction = parse_fraction(&args.delta_fraction)?;
    let (helix, build) = build_helix(args.n, &base, &fraction).map_err(|e| e.to_string())?;
    let poly_json =
        serde_json::to_string_pretty(&helix.polygon().to_json()).map_err(|e| e.to_string())?;
    write_or_print(&args.out, &poly_json)?;
    if let Some(trace_path) = &args.trace {
        let trace = serde_json::to_string_pretty(&build.to_json()).map_err(|e| e.to_string())?;
        fs::write(trace_path, trace).map_err(|e| format!("{}: {e}", trace_path.display()))?;
    }
    if let Some(guards_path) = &args.guards {
        let labels: Vec<usize> = (1..=args.n).collect();
        let gs = helix.guard_set(&labels).map_err(|e| e.to_string())?;
        let text = serde_json::to_string_pretty(&gs.to_json()).map_err(|e| e.to_string())?;
        fs::write(guards_path, text).map_err(|e| format!("{}: {e}", guards_path.display()))?;
    }
    if let Some(svg_path) = &args.svg {
        let opts = RenderOptions {
            show_hull: args.pocket,
            show_pocket: args.pocket,
            show_guards: false,
        };
        fs::write(svg_path, render(helix.polygon(), None, opts))
            .map_err(|e| format!("{}: {e}", svg_path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_formula(args: FormulaArgs) -> Result<ExitCode, String> {
    let f = if args.pocket {
        pocket_formula(args.n).map_err(|e| e.to_string())?
    } else {
        helix_formula(args.n).map_err(|e| e.to_string())?
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&f.to_json()).map_err(|e| e.to_string())?
        );
    } else {
        println!("{}", f.render());
    }
    Ok(ExitCode::SUCCESS)
}

fn natural_guard_set(poly: &Polygon) -> Result<GuardSet, String> {
    let mut gs = GuardSet::new();
    for i in 0..poly.len() {
        gs.push(
            format!("g{}", i + 1),
            helix_garden::guards::natural_guard(poly, i).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
    }
    Ok(gs)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let poly = load_polygon(&args.polygon)?;
    let guards = if args.guards == "natural" {
        natural_guard_set(&poly)?
    } else {
        let text = fs::read_to_string(&args.guards).map_err(|e| format!("{}: {e}", args.guards))?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        GuardSet::from_json(&value).map_err(|e| e.to_string())?
    };
    let formula = parse_formula(&args.formula).map_err(|e| e.to_string())?;
    let report = if args.exterior {
        defines_exterior(&formula, &guards, &poly)
    } else {
        defines(&formula, &guards, &poly)
    }
    .map_err(|e| e.to_string())?;
    if report.verdict {
        println!(
            "{}",
            serde_json::json!({"verdict": true, "faces_checked": report.faces_checked})
        );
        Ok(ExitCode::SUCCESS)
    } else {
        let ce = report
            .counterexample
            .expect("false verdict carries a counterexample");
        println!(
            "{}",
            serde_json::json!({
                "verdict": false,
                "faces_checked": report.faces_checked,
                "counterexample": {
                    "point": [format_scalar(&ce.point.x), format_scalar(&ce.point.y)],
                    "signature": ce.signature,
                    "inside": ce.inside,
                }
            })
        );
        Ok(ExitCode::from(1))
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    match jobs {
        None => Ok(f()),
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())?;
            Ok(pool.install(f))
        }
    }
}

fn cmd_search(args: SearchArgs) -> Result<ExitCode, String> {
    let poly = load_polygon(&args.polygon)?;
    let n = poly.len();
    let k_max = args.max_k.unwrap_or(n);
    let labels: Vec<usize> = (1..=n).collect();
    let outcome = with_jobs(args.jobs, || min_natural_guards(&poly, &labels, k_max))?
        .map_err(|e| e.to_string())?;
    match outcome {
        MinGuardsOutcome::Found {
            k_min,
            subset,
            formula,
            per_k,
        } => {
            println!(
                "{}",
                serde_json::json!({
                    "k_min": k_min,
                    "subset": subset,
                    "formula": formula.render(),
                    "per_k_counts": per_k.iter().map(|p| serde_json::json!({
                        "k": p.k, "tested": p.tested, "definable": p.definable,
                    })).collect::<Vec<_>>(),
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        MinGuardsOutcome::NotDefinableUpTo { k_max, per_k } => {
            println!(
                "{}",
                serde_json::json!({
                    "k_min": serde_json::Value::Null,
                    "not_definable_up_to": k_max,
                    "per_k_counts": per_k.iter().map(|p| serde_json::json!({
                        "k": p.k, "tested": p.tested, "definable": p.definable,
                    })).collect::<Vec<_>>(),
                })
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_render(args: RenderArgs) -> Result<ExitCode, String> {
    let poly = load_polygon(&args.polygon)?;
    let guards = if args.guards {
        Some(natural_guard_set(&poly)?)
    } else {
        None
    };
    let opts = RenderOptions {
        show_hull: args.pocket,
        show_pocket: args.pocket,
        show_guards: args.guards,
    };
    fs::write(&args.out, render(&poly, guards.as_ref(), opts))
        .map_err(|e| format!("{}: {e}", args.out.display()))?;
    Ok(ExitCode::SUCCESS)
}

struct ReproRow {
    name: String,
    cells: BTreeMap<&'static str, String>,
    ok: bool,
}

fn check_helix_row(helix: &Helix, n: usize, search: bool) -> ReproRow {
    let mut cells = BTreeMap::new();
    let mut ok = true;

    cells.insert("build", "yes".to_string());

    let labels: Vec<usize> = if n == 3 {
        vec![1, 3]
    } else {
        (1..=n - 3).chain([n]).collect()
    };
    let interior_ok = (|| {
        let gs = helix.guard_set(&labels).ok()?;
        let f = helix_formula(n).ok()?;
        defines(&f, &gs, helix.polygon()).ok().map(|r| r.verdict)
    })()
    .unwrap_or(false);
    cells.insert("defines", yesno(interior_ok));
    ok &= interior_ok;

    let exterior_ok = (|| {
        let gs = helix.guard_set(&labels).ok()?.complemented();
        let f = helix_formula(n).ok()?.dual();
        defines_exterior(&f, &gs, helix.polygon())
            .ok()
            .map(|r| r.verdict)
    })()
    .unwrap_or(false);
    cells.insert("exterior", yesno(exterior_ok));
    ok &= exterior_ok;

    if n >= 4 {
        let pocket_ok = (|| {
            let pk = pocket(helix.polygon()).ok()?;
            if pk.len() != n - 1 {
                return Some(false);
            }
            if n >= 5 {
                if !pocket_angle_check(helix).ok()?.all_pass() {
                    return Some(false);
                }
                let pgs = pocket_guard_set(helix).ok()?;
                let pf = pocket_formula(n).ok()?;
                return defines(&pf, &pgs, &pk).ok().map(|r| r.verdict);
            }
            Some(true)
        })()
        .unwrap_or(false);
        cells.insert("pocket", yesno(pocket_ok));
        ok &= pocket_ok;
    } else {
        cells.insert("pocket", "-".to_string());
    }

    if search {
        let expected = if n == 3 { 2 } else { n - 2 };
        let order: Vec<usize> = helix.order().to_vec();
        let (kcell, kok) = match min_natural_guards(helix.polygon(), &order, n) {
            Ok(MinGuardsOutcome::Found { k_min, .. }) => (k_min.to_string(), k_min == expected),
            _ => ("-".to_string(), false),
        };
        cells.insert("k_min", kcell);
        ok &= kok;
    } else {
        cells.insert("k_min", "-".to_string());
    }

    ReproRow {
        name: format!("H_{n}"),
        cells,
        ok,
    }
}

fn yesno(b: bool) -> String {
    if b { "yes" } else { "NO" }.to_string()
}

fn cmd_repro(args: ReproArgs) -> Result<ExitCode, String> {
    if args.n_min < 3 || args.n_max < args.n_min {
        return Err("need 3 <= n_min <= n_max".into());
    }
    let base = default_base();
    let fraction = default_delta_fraction();

    let rows = with_jobs(args.jobs, || {
        let mut rows: Vec<ReproRow> = Vec::new();
        for n in args.n_min..=args.n_max {
            match build_helix(n, &base, &fraction) {
                Ok((helix, _)) => rows.push(check_helix_row(&helix, n, n <= args.search_max)),
                Err(e) => {
                    let mut cells = BTreeMap::new();
                    cells.insert("build", format!("NO ({e})"));
                    rows.push(ReproRow {
                        name: format!("H_{n}"),
                        cells,
                        ok: false,
                    });
                }
            }
        }

        // the fixed pentagon: natural guards fail, the wedge triple works
        let pentagon = fixtures::indistinguishable_pentagon();
        let natural = natural_guard_set(&pentagon).expect("pentagon guards");
        let arr = build_arrangement(&pentagon, &natural);
        let natural_fails = !monotone_definable(&arr.faces).definable;
        let abd_ok = defines(
            &parse_formula("A.B.D").expect("fixture formula parses"),
            &fixtures::pentagon_abd_guards(),
            &pentagon,
        )
        .map(|r| r.verdict)
        .unwrap_or(false);
        let mut cells = BTreeMap::new();
        cells.insert("build", "yes".to_string());
        cells.insert("defines", format!("A.B.D {}", yesno(abd_ok)));
        cells.insert("exterior", "-".to_string());
        cells.insert("pocket", "-".to_string());
        cells.insert(
            "k_min",
            format!("natural-definable {}", yesno(!natural_fails)),
        );
        rows.push(ReproRow {
            name: "pentagon".to_string(),
            cells,
            ok: natural_fails && abd_ok,
        });
        rows
    })?;

    println!(
        "{:<10} {:<14} {:<12} {:<10} {:<8} {:<28} status",
        "case", "build", "defines", "exterior", "pocket", "k_min"
    );
    let mut all_ok = true;
    for row in &rows {
        all_ok &= row.ok;
        let get = |k: &str| row.cells.get(k).cloned().unwrap_or_else(|| "-".to_string());
        println!(
            "{:<10} {:<14} {:<12} {:<10} {:<8} {:<28} {}",
            row.name,
            get("build"),
            get("defines"),
            get("exterior"),
            get("pocket"),
            get("k_min"),
            if row.ok { "ok" } else { "FAIL" }
        );
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
