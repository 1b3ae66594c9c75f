use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hecke_cells::acceptance::{property_suite, run_all};
use hecke_cells::cache::load_or_build_wgraph;
use hecke_cells::classify::{classify, render_table, TableFormat};
use hecke_cells::{Budget, CellAnalysis, CellDecomposition, CoxeterSystem, CoxeterType, Error, FusionRing, WGraph};
use serde_json::json;

/// Kazhdan-Lusztig cells and asymptotic Hecke algebras of finite Coxeter groups.
#[derive(Parser)]
#[command(name = "hecke-cells", version)]
struct Cli {
    /// Directory for cached W-graphs (HECKE_CELLS_CACHE takes precedence).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, default_value = "md")]
    format: TableFormat,
    /// Largest group order allowed.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the two-sided cells with sizes and a-values.
    Cells { ty: String },
    /// Sizes of the intersections of left and right cells in a two-sided cell.
    Cellmatrix { ty: String, cell: String },
    /// Nonzero gamma_{x,y,z} on a two-sided cell.
    Gamma { ty: String, cell: String },
    /// Fusion rings of the diagonal H-cells of a two-sided cell.
    Fusion {
        ty: String,
        cell: String,
        /// Fusion graph of a generator, as DOT.
        #[arg(long)]
        graph: bool,
        /// Frobenius-Perron dimensions.
        #[arg(long)]
        pf: bool,
        /// Generator for --graph, by label (default: a generator of least dimension).
        #[arg(long)]
        generator: Option<String>,
    },
    /// Identify the category attached to each cell and its simple transitive module categories.
    Classify { ty: String },
    /// Cell table with sizes, a-values and categories.
    Table { ty: String },
    /// Check the cell and asymptotic-algebra identities.
    Verify {
        ty: String,
        /// Comma-separated check ids, e.g. P2,P5,P7,magic.
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
    },
    /// Run the reference checks.
    Selftest,
}

struct Ctx {
    budget: Budget,
    cache: Option<PathBuf>,
    format: TableFormat,
}

struct Loaded {
    sys: CoxeterSystem,
    wg: WGraph,
    cells: CellDecomposition,
}

impl Loaded {
    fn analysis(&self) -> CellAnalysis<'_> {
        CellAnalysis::new(&self.sys, &self.wg, &self.cells)
    }
}

impl Ctx {
    fn load(&self, ty: &str) -> Result<Loaded> {
        let ty: CoxeterType = ty.parse()?;
        let sys = CoxeterSystem::build_with_budget(ty, &self.budget)?;
        let wg = load_or_build_wgraph(self.cache.as_deref(), &sys, &self.budget)?;
        let cells = CellDecomposition::compute(&sys, &wg)?;
        Ok(Loaded { sys, wg, cells })
    }
}

fn print_rows(format: TableFormat, header: &[&str], rows: &[Vec<String>]) {
    match format {
        TableFormat::Json => {
            let objs: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| serde_json::Value::Object(header.iter().map(|h| h.to_string()).zip(r.iter().map(|c| json!(c))).collect()))
                .collect();
            println!("{}", serde_json::to_string_pretty(&objs).expect("rows serialize"));
        }
        TableFormat::Tsv => {
            println!("{}", header.join("\t"));
            for r in rows {
                println!("{}", r.join("\t"));
            }
        }
        TableFormat::Markdown => {
            println!("| {} |", header.join(" | "));
            println!("|{}", "---|".repeat(header.len()));
            for r in rows {
                println!("| {} |", r.join(" | "));
            }
        }
    }
}

fn cmd_cells(ctx: &Ctx, ty: &str) -> Result<()> {
    let g = ctx.load(ty)?;
    let rows: Vec<Vec<String>> = g
        .cells
        .two_sided()
        .iter()
        .map(|c| {
            vec![
                c.label.clone(),
                c.len().to_string(),
                c.a.to_string(),
                c.left_cells.len().to_string(),
                g.cells.two_sided()[c.partner].label.clone(),
            ]
        })
        .collect();
    print_rows(ctx.format, &["cell", "size", "a", "left_cells", "times_w0"], &rows);
    Ok(())
}

fn cmd_cellmatrix(ctx: &Ctx, ty: &str, cell: &str) -> Result<()> {
    let g = ctx.load(ty)?;
    let j = g.cells.find(cell)?;
    let cm = g.cells.cell_matrix(&g.sys, j);
    let (classes, blocks) = cm.blocks()?;
    match ctx.format {
        TableFormat::Json => {
            let b: Vec<Vec<usize>> = blocks.iter().map(|r| r.iter().map(|b| b.value).collect()).collect();
            let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
            let v = json!({ "cell": cm.label, "entries": cm.entries, "class_sizes": sizes, "blocks": b, "total": cm.total() });
            println!("{}", serde_json::to_string_pretty(&v)?);
        }
        _ => {
            println!("cell {}: {} left cells, {} elements", cm.label, cm.entries.len(), cm.total());
            let sizes: Vec<String> = classes.iter().map(|c| c.len().to_string()).collect();
            println!("block form, class sizes {}:", sizes.join(" "));
            for r in &blocks {
                let vals: Vec<String> = r.iter().map(|b| format!("{}_{{{},{}}}", b.value, b.rows, b.cols)).collect();
                println!("  {}", vals.join(" "));
            }
            println!("full matrix:");
            for row in &cm.entries {
                let vals: Vec<String> = row.iter().map(usize::to_string).collect();
                println!("  {}", vals.join(if ctx.format == TableFormat::Tsv { "\t" } else { " " }));
            }
        }
    }
    Ok(())
}

fn cmd_gamma(ctx: &Ctx, ty: &str, cell: &str) -> Result<()> {
    let g = ctx.load(ty)?;
    let an = g.analysis();
    let j = g.cells.find(cell)?;
    let table = an.cell_h_table(j, &[], &ctx.budget)?;
    let tensor = an.gamma_tensor(&table);
    let w = |e| g.sys.word_string(e);
    let rows: Vec<Vec<String>> =
        tensor.entries.iter().map(|(&(x, y, z), c)| vec![w(x), w(y), w(z), c.to_string()]).collect();
    print_rows(ctx.format, &["x", "y", "z", "gamma"], &rows);
    Ok(())
}

fn cmd_fusion(ctx: &Ctx, ty: &str, cell: &str, graph: bool, pf: bool, generator: Option<&str>) -> Result<()> {
    let g = ctx.load(ty)?;
    let an = g.analysis();
    let j = g.cells.find(cell)?;
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for l in an.left_cells_by_h_size(j) {
        let size = g.cells.diagonal_h_cell(&g.sys, l).len();
        if seen.contains(&size) {
            continue;
        }
        seen.push(size);
        let block = an.h_block(l)?;
        let ring = FusionRing::from_h_block(&g.sys, &block)?;
        let mut v = ring.to_json();
        v["left_cell"] = json!(l);
        v["commutative"] = json!(ring.is_commutative());
        let dims = if pf || graph { Some(ring.pf_dimensions::<f64>()?) } else { None };
        if pf {
            let d = dims.as_ref().expect("computed above");
            v["pf_dimensions"] = json!(d);
            v["total_dimension"] = json!(d.iter().map(|x| x * x).sum::<f64>());
        }
        if graph {
            let gen = match generator {
                Some(label) => ring
                    .labels()
                    .iter()
                    .position(|x| x == label)
                    .with_context(|| format!("no basis element {label} in this H-cell"))?,
                None => {
                    let d = dims.as_ref().expect("computed above");
                    let mut cands: Vec<usize> =
                        (0..ring.rank()).filter(|&x| x != ring.unit() && ring.generated_by(x).len() == ring.rank()).collect();
                    cands.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
                    match cands.first() {
                        Some(&x) => x,
                        None => {
                            v["graph"] = json!(null);
                            out.push((ring, v));
                            continue;
                        }
                    }
                }
            };
            v["generator"] = json!(ring.labels()[gen]);
            v["graph"] = json!(ring.fusion_graph(gen).to_dot());
        }
        out.push((ring, v));
    }
    if ctx.format == TableFormat::Json {
        let all: Vec<_> = out.into_iter().map(|(_, v)| v).collect();
        println!("{}", serde_json::to_string_pretty(&all)?);
        return Ok(());
    }
    for (ring, v) in out {
        let labels = ring.labels();
        println!(
            "H-cell in left cell {}: rank {}, unit {}, {}",
            v["left_cell"],
            ring.rank(),
            labels[ring.unit()],
            if ring.is_commutative() { "commutative" } else { "noncommutative" }
        );
        for x in 0..ring.rank() {
            for y in 0..ring.rank() {
                let terms: Vec<String> = (0..ring.rank())
                    .filter(|&z| ring.n(x, y, z) > 0)
                    .map(|z| match ring.n(x, y, z) {
                        1 => labels[z].clone(),
                        c => format!("{c}*{}", labels[z]),
                    })
                    .collect();
                println!("  {} * {} = {}", labels[x], labels[y], terms.join(" + "));
            }
        }
        if let Some(d) = v.get("pf_dimensions").and_then(|d| d.as_array()) {
            for (x, dim) in d.iter().enumerate() {
                println!("  FPdim {} = {:.12}", labels[x], dim.as_f64().unwrap_or(f64::NAN));
            }
            println!("  total dimension = {:.12}", v["total_dimension"].as_f64().unwrap_or(f64::NAN));
        }
        if let Some(dot) = v.get("graph") {
            match dot.as_str() {
                Some(s) => print!("{s}"),
                None => println!("  no single generator"),
            }
        }
    }
    Ok(())
}

fn cmd_classify(ctx: &Ctx, ty: &str, with_reps: bool) -> Result<()> {
    let g = ctx.load(ty)?;
    let recs = classify(&g.analysis(), &ctx.budget)?;
    println!("{}", render_table(g.sys.coxeter_type(), &recs, ctx.format, with_reps).trim_end());
    Ok(())
}

fn cmd_verify(ctx: &Ctx, ty: &str, props: &[String]) -> Result<()> {
    let g = ctx.load(ty)?;
    let mut report = property_suite(&g.analysis(), &ctx.budget)?;
    if !props.is_empty() {
        report = report.filter(props);
        if report.checks.is_empty() {
            bail!("no checks match {}", props.join(","));
        }
    }
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| vec![c.id.clone(), c.name.clone(), c.instances.to_string(), c.failures.to_string()])
        .collect();
    print_rows(ctx.format, &["id", "check", "instances", "failures"], &rows);
    if !report.passed() {
        for c in report.checks.iter().filter(|c| c.failures > 0) {
            for e in &c.examples {
                eprintln!("{}: {e}", c.id);
            }
        }
        return Err(Error::PropertyViolation(format!("{} check(s) failed on {ty}", report.failures())).into());
    }
    Ok(())
}

fn cmd_selftest(ctx: &Ctx, budget_given: bool) -> Result<()> {
    let stretch = (budget_given && ctx.budget.max_elements >= 46_080).then_some(&ctx.budget);
    let outcomes = run_all(stretch);
    if ctx.format == TableFormat::Json {
        println!("{}", serde_json::to_string_pretty(&outcomes)?);
    } else {
        for o in &outcomes {
            println!("{o}");
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed && !o.skipped).count();
    if failed > 0 {
        bail!("{failed} criteria failed");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.map(Budget::with_max_elements).unwrap_or_default();
    if let Err(e) = budget.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let cache = std::env::var_os("HECKE_CELLS_CACHE").map(PathBuf::from).or(cli.cache);
    let ctx = Ctx { budget, cache, format: cli.format };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let res = pool.install(|| match &cli.cmd {
        Cmd::Cells { ty } => cmd_cells(&ctx, ty),
        Cmd::Cellmatrix { ty, cell } => cmd_cellmatrix(&ctx, ty, cell),
        Cmd::Gamma { ty, cell } => cmd_gamma(&ctx, ty, cell),
        Cmd::Fusion { ty, cell, graph, pf, generator } => cmd_fusion(&ctx, ty, cell, *graph, *pf, generator.as_deref()),
        Cmd::Classify { ty } => cmd_classify(&ctx, ty, true),
        Cmd::Table { ty } => cmd_classify(&ctx, ty, false),
        Cmd::Verify { ty, props } => cmd_verify(&ctx, ty, props),
        Cmd::Selftest => cmd_selftest(&ctx, cli.budget.is_some()),
    });
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
