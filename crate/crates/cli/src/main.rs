mod config;
mod exit;
mod sources;

use std::io::Write;
use std::process::ExitCode;

use blocksmith::caps::Caps;
use blocksmith::certificate::{verify_certificate, CheckStatus, SbsCertificate, VerifyReport};
use blocksmith::codes::to_projective_system;
use blocksmith::constants::{root_constants, table1, table2, table3, BestRowCheck, DRowCheck};
use blocksmith::graphs::{lps_graph, Graph, LpsGroup};
use blocksmith::integrity::{
    appendix_lower_witness, appendix_upper_experiment, integrity_exact, spectral_integrity_lb, z_exact,
    IntegrityCertificate, LowerWitnessReport, UpperExperimentRow, ZCertificate,
};
use blocksmith::reduction::{derive_certificate, derive_sbs};
use blocksmith::sbs::{construct_main, IntegrityEvidence};
use blocksmith::spectral::{is_ramanujan, spectrum, SpectralReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{thread_override, RunConfig};
use exit::{CliError, CliResult};
use sources::{parse_code, parse_graph};

#[derive(Parser, Debug)]
#[command(name = "blocksmith", version, about = "Strong blocking sets from codes and expander graphs")]
struct Cli {
    /// JSON run configuration (caps, seed, verbose).
    #[arg(long, global = true)]
    config: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(flatten)]
    caps: CapFlags,
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CapFlags {
    #[arg(long, global = true)]
    point_cap: Option<u128>,
    #[arg(long, global = true)]
    hyperplane_cap: Option<u128>,
    #[arg(long, global = true)]
    codim2_cap: Option<u128>,
    #[arg(long, global = true)]
    codeword_cap: Option<u128>,
    #[arg(long, global = true)]
    integrity_guard: Option<usize>,
    #[arg(long, global = true)]
    z_guard: Option<usize>,
}

impl CapFlags {
    fn apply(&self, caps: &mut Caps) {
        let set = |dst: &mut u128, v: Option<u128>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut caps.points, self.point_cap);
        set(&mut caps.hyperplanes, self.hyperplane_cap);
        set(&mut caps.codim2, self.codim2_cap);
        set(&mut caps.codewords, self.codeword_cap);
        if let Some(v) = self.integrity_guard {
            caps.integrity_guard = v;
        }
        if let Some(v) = self.z_guard {
            caps.z_guard = v;
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build B(M, G) from a code and a graph and certify it.
    Construct {
        #[arg(long)]
        code: String,
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = EvidenceMode::Auto)]
        evidence: EvidenceMode,
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-check a stored certificate.
    Verify {
        #[arg(long)]
        cert: String,
    },
    /// Field-reduce a certificate, or build and reduce B(M, G) over GF(q^2).
    Derive {
        #[arg(long, conflicts_with_all = ["code", "graph"])]
        cert: Option<String>,
        #[arg(long, requires = "graph")]
        code: Option<String>,
        #[arg(long, requires = "code")]
        graph: Option<String>,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        out: Option<String>,
        /// Also write the source certificate (with --code/--graph).
        #[arg(long)]
        source_out: Option<String>,
    },
    /// Spectrum and integrity report for a graph.
    Graph {
        /// Graph source such as `cycle:6` or `file:g.json`.
        spec: Option<String>,
        #[arg(long, num_args = 2, value_names = ["P", "R"], conflicts_with = "spec")]
        lps: Option<Vec<u64>>,
        #[arg(long)]
        spectrum: bool,
        /// Include all eigenvalues in the report.
        #[arg(long, requires = "spectrum")]
        eigenvalues: bool,
        #[arg(long)]
        integrity: bool,
        #[arg(long)]
        z: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Recompute the printed constant tables.
    Tables {
        #[arg(long, value_enum)]
        table: TableName,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Random-graph experiments on z(G).
    Appendix {
        #[command(subcommand)]
        which: AppendixCmd,
    },
}

#[derive(Subcommand, Debug)]
enum AppendixCmd {
    /// Randomized edge-free pair on a graph of average degree at most d.
    Lower {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact z on G(n, d/n) samples with seeds seed, seed+1, ...
    Upper {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvidenceMode {
    /// Exact integrity within the guard, spectral bound otherwise.
    Auto,
    Exact,
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableName {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    Constants,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

struct Ctx {
    cfg: RunConfig,
}

impl Ctx {
    fn log(&self, msg: impl AsRef<str>) {
        if self.cfg.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn emit(out: Option<&str>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("stdout", e))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::usage(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

fn read_cert(path: &str) -> CliResult<SbsCertificate> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(SbsCertificate::from_json(&text)?)
}

/// Exit status for a freshly built certificate.
fn status_code(cert: &SbsCertificate) -> u8 {
    match cert.checks.strong {
        CheckStatus::Passed => exit::OK,
        CheckStatus::Skipped => exit::SKIPPED,
        CheckStatus::Failed => exit::FAILED,
    }
}

fn evidence_for(g: &Graph, mode: EvidenceMode, caps: &Caps) -> CliResult<IntegrityEvidence> {
    let exact = |g: &Graph| -> CliResult<IntegrityEvidence> { Ok(IntegrityEvidence::Exact(integrity_exact(g, caps.integrity_guard)?)) };
    let spectral = |g: &Graph| -> CliResult<IntegrityEvidence> {
        if g.regular_degree().is_none() {
            return Err(blocksmith::Error::NotRegular.into());
        }
        Ok(IntegrityEvidence::from_spectrum(g, &spectrum(g)?)?)
    };
    match mode {
        EvidenceMode::Exact => exact(g),
        EvidenceMode::Spectral => spectral(g),
        EvidenceMode::Auto if g.n() <= caps.integrity_guard => exact(g),
        EvidenceMode::Auto => spectral(g),
    }
}

fn construct(ctx: &Ctx, code: &str, graph: &str, mode: EvidenceMode, out: Option<&str>) -> CliResult<u8> {
    let caps = &ctx.cfg.caps;
    let gen = parse_code(code, ctx.cfg.seed)?;
    let g = parse_graph(graph, ctx.cfg.seed)?;
    if g.n() != gen.n() {
        return Err(CliError::usage(format!(
            "graph has {} vertices but the code has length {}",
            g.n(),
            gen.n()
        )));
    }
    let system = to_projective_system(&gen, caps.hyperplanes, caps.codewords)?;
    let params = system.params();
    ctx.log(format!("code [{}, {}, {}]_{}", params.n, params.k, params.d, params.q));
    let evidence = evidence_for(&g, mode, caps)?;
    let mut cert = construct_main(&system, &g, &evidence, caps)?;
    cert.metadata.insert("code".into(), code.into());
    cert.metadata.insert("graph".into(), graph.into());
    cert.metadata.insert("seed".into(), ctx.cfg.seed.to_string());
    ctx.log(format!(
        "{} points, avoidance {:?}, strong {:?}",
        cert.size.points, cert.checks.avoidance, cert.checks.strong
    ));
    emit(out, &cert.to_json())?;
    Ok(status_code(&cert))
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    consistent: bool,
    verified: bool,
    #[serde(flatten)]
    report: &'a VerifyReport,
}

fn verify(ctx: &Ctx, path: &str) -> CliResult<u8> {
    let cert = read_cert(path)?;
    let report = verify_certificate(&cert, &ctx.cfg.caps)?;
    let verified = report.recomputed.strong == CheckStatus::Passed;
    emit(
        None,
        &to_json(&VerifyOutput {
            consistent: report.consistent(),
            verified,
            report: &report,
        }),
    )?;
    Ok(if !report.consistent() || report.recomputed.strong == CheckStatus::Failed {
        exit::FAILED
    } else if verified {
        exit::OK
    } else {
        exit::SKIPPED
    })
}

#[allow(clippy::too_many_arguments)]
fn derive(
    ctx: &Ctx,
    cert: Option<&str>,
    code: Option<&str>,
    graph: Option<&str>,
    steps: usize,
    out: Option<&str>,
    source_out: Option<&str>,
) -> CliResult<u8> {
    let caps = &ctx.cfg.caps;
    let mut derived = match (cert, code, graph) {
        (Some(path), None, None) => {
            let source = read_cert(path)?;
            let mut d = derive_certificate(&source, steps, caps)?;
            d.metadata.insert("source".into(), path.into());
            d
        }
        (None, Some(code), Some(graph)) => {
            if steps == 0 {
                return Err(CliError::usage("--steps must be at least 1 with --code/--graph"));
            }
            let gen = parse_code(code, ctx.cfg.seed)?;
            let g = parse_graph(graph, ctx.cfg.seed)?;
            if g.n() != gen.n() {
                return Err(CliError::usage(format!(
                    "graph has {} vertices but the code has length {}",
                    g.n(),
                    gen.n()
                )));
            }
            let system = to_projective_system(&gen, caps.hyperplanes, caps.codewords)?;
            let (mut source, first) = derive_sbs(&system, &g, caps)?;
            source.metadata.insert("code".into(), code.into());
            source.metadata.insert("graph".into(), graph.into());
            source.metadata.insert("seed".into(), ctx.cfg.seed.to_string());
            if let Some(path) = source_out {
                emit(Some(path), &source.to_json())?;
            }
            let mut d = if steps > 1 { derive_certificate(&first, steps - 1, caps)? } else { first };
            d.metadata.insert("code".into(), code.into());
            d.metadata.insert("graph".into(), graph.into());
            d
        }
        _ => return Err(CliError::usage("derive needs --cert, or both --code and --graph")),
    };
    derived.metadata.insert("seed".into(), ctx.cfg.seed.to_string());
    derived.metadata.insert("steps".into(), steps.to_string());
    ctx.log(format!(
        "{} points in PG({}, {}), strong {:?}",
        derived.size.points,
        derived.ambient.k - 1,
        derived.ambient.q,
        derived.checks.strong
    ));
    emit(out, &derived.to_json())?;
    Ok(status_code(&derived))
}

#[derive(Serialize)]
struct LpsInfo {
    p: u64,
    r: u64,
    group: LpsGroup,
}

#[derive(Serialize)]
struct SpectrumInfo {
    lambda: f64,
    nontrivial_lambda: Option<f64>,
    ramanujan: Option<bool>,
    ramanujan_bound: Option<f64>,
    /// Lower bound on the integrity from the spectral gap.
    integrity_lower_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct GraphReport {
    n: usize,
    edges: usize,
    degree: Option<usize>,
    connected: bool,
    bipartite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lps: Option<LpsInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<SpectrumInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integrity: Option<IntegrityCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<ZCertificate>,
}

fn spectrum_info(g: &Graph, report: SpectralReport, keep: bool) -> CliResult<SpectrumInfo> {
    let (ramanujan, bound, lb) = match report.degree {
        Some(d) => {
            // the lower bound needs lambda < d, i.e. a connected graph
            let lb = spectral_integrity_lb(g.n(), d as f64, report.lambda).ok();
            (Some(is_ramanujan(&report)?), Some(2.0 * (d as f64 - 1.0).max(0.0).sqrt()), lb)
        }
        None => (None, None, None),
    };
    Ok(SpectrumInfo {
        lambda: report.lambda,
        nontrivial_lambda: report.nontrivial_lambda,
        ramanujan,
        ramanujan_bound: bound,
        integrity_lower_bound: lb,
        eigenvalues: keep.then_some(report.eigenvalues),
    })
}

#[allow(clippy::too_many_arguments)]
fn graph_cmd(
    ctx: &Ctx,
    spec: Option<&str>,
    lps: Option<&[u64]>,
    want_spectrum: bool,
    eigenvalues: bool,
    want_integrity: bool,
    want_z: bool,
    out: Option<&str>,
) -> CliResult<u8> {
    let caps = &ctx.cfg.caps;
    let (g, lps_info) = match (spec, lps) {
        (Some(s), None) => (parse_graph(s, ctx.cfg.seed)?, None),
        (None, Some(&[p, r])) => {
            let l = lps_graph(p, r)?;
            (l.graph, Some(LpsInfo { p, r, group: l.group }))
        }
        _ => return Err(CliError::usage("graph needs a source spec or --lps P R")),
    };
    let spectrum = if want_spectrum {
        ctx.log(format!("eigensolve on {} vertices", g.n()));
        Some(spectrum_info(&g, spectrum(&g)?, eigenvalues)?)
    } else {
        None
    };
    let report = GraphReport {
        n: g.n(),
        edges: g.edge_count(),
        degree: g.regular_degree(),
        connected: g.is_connected(),
        bipartite: g.is_bipartite(),
        lps: lps_info,
        spectrum,
        integrity: if want_integrity { Some(integrity_exact(&g, caps.integrity_guard)?) } else { None },
        z: if want_z { Some(z_exact(&g, caps.z_guard)?) } else { None },
    };
    emit(out, &to_json(&report))?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct ConstantRow {
    name: &'static str,
    computed: f64,
    closed_form: Option<f64>,
}

fn join(qs: &[u64]) -> String {
    qs.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

/// Flat CSV form of a degree/value row; `mismatches` lists offending q.
#[derive(Serialize)]
struct DRowCsv {
    q: String,
    d: u32,
    value: String,
    printed_d: u32,
    printed_value: String,
    delta: String,
    checked: usize,
    mismatches: String,
    pass: bool,
}

impl From<&DRowCheck> for DRowCsv {
    fn from(r: &DRowCheck) -> DRowCsv {
        DRowCsv {
            q: r.q.clone(),
            d: r.d,
            value: format!("{:.2}", r.value),
            printed_d: r.printed_d,
            printed_value: format!("{:.2}", r.printed_value),
            delta: format!("{:.4}", r.delta),
            checked: r.checked,
            mismatches: join(&r.d_mismatches),
            pass: r.pass,
        }
    }
}

#[derive(Serialize)]
struct BestRowCsv {
    q: String,
    construction: String,
    d: u32,
    value: String,
    bound: u64,
    printed_construction: String,
    printed_bound: u64,
    delta: i64,
    checked: usize,
    mismatches: String,
    pass: bool,
}

impl From<&BestRowCheck> for BestRowCsv {
    fn from(r: &BestRowCheck) -> BestRowCsv {
        BestRowCsv {
            q: r.q.clone(),
            construction: r.construction.clone(),
            d: r.d,
            value: format!("{:.4}", r.value),
            bound: r.bound,
            printed_construction: r.printed_construction.clone(),
            printed_bound: r.printed_bound,
            delta: r.delta,
            checked: r.checked,
            mismatches: join(&r.mismatches),
            pass: r.pass,
        }
    }
}

fn tables(table: TableName, format: Format, out: Option<&str>) -> CliResult<u8> {
    fn render<T: Serialize>(rows: &[T], format: Format) -> CliResult<String> {
        match format {
            Format::Csv => to_csv(rows),
            Format::Json => Ok(to_json(&rows)),
        }
    }
    let text = match (table, format) {
        (TableName::One, Format::Csv) => to_csv(&table1()?.iter().map(DRowCsv::from).collect::<Vec<_>>())?,
        (TableName::Two, Format::Csv) => to_csv(&table2()?.iter().map(DRowCsv::from).collect::<Vec<_>>())?,
        (TableName::Three, Format::Csv) => to_csv(&table3()?.iter().map(BestRowCsv::from).collect::<Vec<_>>())?,
        (TableName::One, _) => render(&table1()?, format)?,
        (TableName::Two, _) => render(&table2()?, format)?,
        (TableName::Three, _) => render(&table3()?, format)?,
        (TableName::Constants, _) => {
            let c = root_constants();
            let rows = [
                ConstantRow { name: "psi_y0", computed: c.psi_y0, closed_form: Some(c.psi_y0_closed) },
                ConstantRow { name: "psi_d0", computed: c.psi_d0, closed_form: Some(c.psi_d0_closed) },
                ConstantRow { name: "phi_y0", computed: c.phi_y0, closed_form: None },
                ConstantRow { name: "phi_d0", computed: c.phi_d0, closed_form: Some(c.phi_d0_closed) },
                ConstantRow { name: "f_limit_8", computed: c.f_limit, closed_form: Some(c.f_limit_closed) },
                ConstantRow { name: "r_limit_9", computed: c.r_limit, closed_form: Some(c.r_limit_closed) },
            ];
            render(&rows, format)?
        }
    };
    emit(out, &text)?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct LowerOutput<'a> {
    graph: &'a str,
    n: usize,
    edges: usize,
    seed: u64,
    /// The returned pair really is edge-free.
    sound: bool,
    #[serde(flatten)]
    report: LowerWitnessReport,
}

fn appendix(ctx: &Ctx, which: &AppendixCmd) -> CliResult<u8> {
    let seed = ctx.cfg.seed;
    match which {
        AppendixCmd::Lower { graph, d, trials, out } => {
            let g = parse_graph(graph, seed)?;
            let report = appendix_lower_witness(&g, *d, *trials, seed)?;
            let sound = report.certificate.verify(&g);
            let output = LowerOutput {
                graph,
                n: g.n(),
                edges: g.edge_count(),
                seed,
                sound,
                report,
            };
            emit(out.as_deref(), &to_json(&output))?;
            Ok(if sound { exit::OK } else { exit::FAILED })
        }
        AppendixCmd::Upper { n, d, count, format, out } => {
            let rows = (0..*count)
                .map(|i| appendix_upper_experiment(*n, *d, seed + i, ctx.cfg.caps.z_guard))
                .collect::<blocksmith::Result<Vec<UpperExperimentRow>>>()?;
            let text = match format {
                Format::Csv => to_csv(&rows)?,
                Format::Json => to_json(&rows),
            };
            emit(out.as_deref(), &text)?;
            Ok(exit::OK)
        }
    }
}

fn setup(cli: &Cli) -> CliResult<Ctx> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.verbose |= cli.verbose;
    cli.caps.apply(&mut cfg.caps);
    cfg.caps.validate()?;
    if let Some(threads) = thread_override()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    Ok(Ctx { cfg })
}

fn run(cli: Cli) -> CliResult<u8> {
    let ctx = setup(&cli)?;
    match &cli.command {
        Command::Construct { code, graph, evidence, out } => construct(&ctx, code, graph, *evidence, out.as_deref()),
        Command::Verify { cert } => verify(&ctx, cert),
        Command::Derive {
            cert,
            code,
            graph,
            steps,
            out,
            source_out,
        } => derive(
            &ctx,
            cert.as_deref(),
            code.as_deref(),
            graph.as_deref(),
            *steps,
            out.as_deref(),
            source_out.as_deref(),
        ),
        Command::Graph {
            spec,
            lps,
            spectrum,
            eigenvalues,
            integrity,
            z,
            out,
        } => graph_cmd(
            &ctx,
            spec.as_deref(),
            lps.as_deref(),
            *spectrum,
            *eigenvalues,
            *integrity,
            *z,
            out.as_deref(),
        ),
        Command::Tables { table, format, out } => tables(*table, *format, out.as_deref()),
        Command::Appendix { which } => appendix(&ctx, which),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", CliError::usage(e.to_string().trim_end()).json());
            return ExitCode::from(exit::USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.json());
            ExitCode::from(e.exit_code)
        }
    }
}
