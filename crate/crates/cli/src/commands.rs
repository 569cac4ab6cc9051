use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use grouppst_core::fullspace::{build_full_hamiltonian, sector_residual, DEFAULT_DIMENSION_CAP};
use grouppst_core::groups::DEFAULT_MAX_ORDER;
use grouppst_core::pst::{
    self, optimal_fidelity, product_plan, product_scheme, search_gauge, synthesize_couplings, DEFAULT_SEARCH_BOUND,
    DEFAULT_TRACE_SAMPLES,
};
use grouppst_core::{CouplingPlan, Group, GroupScheme, Objective};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::CliError;
use crate::output::{
    complex, num, parse_angle, parse_indices, parse_ints, phase_over_pi, phase_units, pi_units, sig, write_atomic,
};
use crate::plan::{group_hash, PlanFile};
use crate::spec::GroupSpec;

const GRAMMAR: &str = "\
Group specs:
  cyclic:N         Z_N
  dihedral:N       dihedral group of order N (N even, N >= 4)
  clifford:N       Clifford group CL(N) of order 2^(N+1), N >= 3
  symmetric:N      S_N, N <= 7
  alternating:N    A_N, N <= 7
  product:A,B,...  direct product of non-product specs
  @PATH            TOML Cayley table (see FORMATS.md)

Exit codes: 0 ok, 1 internal or IO error, 2 parse error, 3 not a group,
4 no PST target, 5 gauge search exhausted, 6 fidelity failure,
7 group hash mismatch.";

#[derive(Debug, Parser)]
#[command(name = "grouppst", version, about = "Perfect state transfer on group association schemes", after_help = GRAMMAR)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print classes, center, character table and PST targets of a group.
    Info(InfoArgs),
    /// Synthesize a coupling plan and write it to DIR/plan.toml.
    Synthesize(SynthArgs),
    /// Check a plan file; writes DIR/trace.csv and DIR/report.toml.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group spec, e.g. dihedral:8 or @table.toml.
    #[arg(long)]
    pub group: String,
    /// Seed of the character-table solver.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Write DIR/graph.tgf for these comma-separated symmetrized classes.
    #[arg(long, value_name = "REL")]
    pub export_graph: Option<String>,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SearchArg {
    MinNonzero,
    MinL1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Amplitude,
    Physical,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// `auto`, a class index of the symmetrized scheme, or an element label.
    #[arg(long, default_value = "auto")]
    pub target: String,
    #[arg(long, default_value_t = 1.0)]
    pub t0: f64,
    /// Transfer phase: radians or multiples of pi (`pi`, `3pi/4`).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub phi: String,
    /// Winding integers, comma separated, one per class.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "search")]
    pub l: Option<String>,
    /// Search the gauge instead of taking --phi/--l.
    #[arg(long, value_enum)]
    pub search: Option<SearchArg>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
    pub bound: i64,
    /// With --search: fail (exit 5) unless the best plan has at most this
    /// many nonzero couplings.
    #[arg(long, requires = "search")]
    pub max_nonzero: Option<usize>,
    /// Build the plan factor by factor for a product spec.
    #[arg(long)]
    pub compose: bool,
    #[arg(long, value_enum, default_value = "amplitude")]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    /// Write DIR/graph.tgf for these classes, or `support` for the plan's.
    #[arg(long, value_name = "REL")]
    pub export_graph: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Plan file written by `synthesize`.
    #[arg(long)]
    pub plan: PathBuf,
    /// Group spec to check the plan against; defaults to the plan's own.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    /// Qudit dimension of the oracle; defaults to the plan's.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_TRACE_SAMPLES)]
    pub samples: usize,
    /// Also evolve the full D^N-dimensional network.
    #[arg(long)]
    pub oracle: bool,
    /// Largest D^N the oracle will build.
    #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
    pub cap: usize,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
}

/// Runs one command, appending its summary to `stdout`.
pub fn run(cli: &Cli, stdout: &mut String) -> Result<(), CliError> {
    match &cli.command {
        Command::Info(a) => info(a, stdout),
        Command::Synthesize(a) => synthesize(a, stdout),
        Command::Verify(a) => verify(a, stdout),
    }
}

fn check_positive(name: &str, x: f64) -> Result<(), CliError> {
    if !(x.is_finite() && x > 0.0) {
        return Err(CliError::Parse(format!("--{name} must be positive, got {x}")));
    }
    Ok(())
}

fn check_levels(d: usize) -> Result<(), CliError> {
    if d < 2 {
        return Err(CliError::Parse(format!("--levels must be at least 2, got {d}")));
    }
    Ok(())
}

fn member_list(g: &Group, members: &[usize]) -> String {
    const SHOWN: usize = 8;
    let mut s = String::from("{");
    for (i, &x) in members.iter().take(SHOWN).enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(g.label(x));
    }
    if members.len() > SHOWN {
        let _ = write!(s, ", ... ({} more)", members.len() - SHOWN);
    }
    s.push('}');
    s
}

fn tgf(s: &GroupScheme, relations: &[usize]) -> Result<String, CliError> {
    let e = s.export_graph(relations)?;
    let mut out = String::new();
    for (i, l) in e.labels.iter().enumerate() {
        let _ = writeln!(out, "{i} {l}");
    }
    out.push_str("#\n");
    for (x, y) in &e.edges {
        let _ = writeln!(out, "{x} {y}");
    }
    Ok(out)
}

fn info(a: &InfoArgs, out: &mut String) -> Result<(), CliError> {
    let spec = GroupSpec::parse(&a.group.group)?;
    let g = spec.build(a.group.max_order)?;
    let base = GroupScheme::with_seed(g.clone(), a.group.seed)?;
    let sym = base.symmetrize();
    let classes = base.base_classes();

    let _ = writeln!(out, "group: {spec}");
    let _ = writeln!(out, "order: {}", g.order());
    let _ = writeln!(out, "hash: {}", group_hash(&g));
    let _ = writeln!(out, "abelian: {}", g.is_abelian());
    let _ = writeln!(out, "classes: {}", classes.len());
    for i in 0..classes.len() {
        let _ = writeln!(
            out,
            "  C{i}  size {}  inverse C{}  {}",
            classes.size(i),
            classes.inverse_class(i),
            member_list(&g, classes.class(i))
        );
    }
    let center = g.center();
    let _ = writeln!(out, "center: {}", member_list(&g, &center));
    let _ = writeln!(out, "central candidates: {}", center.len() - 1);

    let ch = base.characters();
    let _ = writeln!(out, "character table (seed {}):", ch.seed());
    for k in 0..ch.len() {
        let row: Vec<String> = ch.row(k).iter().map(|&z| complex(z)).collect();
        let _ = writeln!(out, "  chi{k} (degree {}): {}", ch.degree(k), row.join(" "));
    }

    let _ = writeln!(out, "symmetrized classes: {}", sym.num_classes());
    for i in 0..sym.num_classes() {
        let parts: Vec<String> = sym.parts(i).iter().map(|p| format!("C{p}")).collect();
        let _ = writeln!(
            out,
            "  R{i}  valency {}  = {}  fidelity bound {}",
            sym.valency(i),
            parts.join(" u "),
            num(pst::fidelity_bound(&sym, i)?)
        );
    }
    let targets = pst::pst_targets(&sym);
    if targets.is_empty() {
        let _ = writeln!(out, "PST targets: none");
    } else {
        let list: Vec<String> = targets
            .iter()
            .map(|&m| format!("R{m} {}", member_list(&g, sym.class_members(m))))
            .collect();
        let _ = writeln!(out, "PST targets: {}", list.join(", "));
    }

    if let Some(rel) = &a.export_graph {
        let rels = parse_indices(rel)?;
        let path = a.out.join("graph.tgf");
        write_atomic(&path, &tgf(&sym, &rels)?)?;
        let _ = writeln!(out, "graph: {}", path.display());
    }
    Ok(())
}

fn resolve_target(s: &GroupScheme, text: &str) -> Result<usize, CliError> {
    let targets = pst::pst_targets(s);
    if targets.is_empty() {
        return Err(CliError::NoTarget(
            "no non-identity singleton class after symmetrization".into(),
        ));
    }
    if text == "auto" {
        return Ok(targets[0]);
    }
    let m = match text.parse::<usize>() {
        Ok(i) => i,
        Err(_) => {
            let x = s
                .group()
                .find(text)
                .ok_or_else(|| CliError::Parse(format!("no element or class '{text}'")))?;
            s.class_of(x)
        }
    };
    if m >= s.num_classes() {
        return Err(CliError::Parse(format!("class {m} out of range 0..{}", s.num_classes())));
    }
    if !targets.contains(&m) {
        return Err(CliError::NoTarget(format!(
            "class R{m} is not a non-identity singleton class"
        )));
    }
    Ok(m)
}

fn objective(a: SearchArg) -> Objective {
    match a {
        SearchArg::MinNonzero => Objective::MinNonzero,
        SearchArg::MinL1 => Objective::MinL1,
    }
}

/// Plan for a single scheme from the gauge flags.
fn gauge_plan(s: &GroupScheme, m: usize, a: &SynthArgs, phi: f64, l: Option<&[i64]>) -> Result<CouplingPlan, CliError> {
    Ok(match a.search {
        Some(obj) => {
            let plan = search_gauge(s, m, a.t0, objective(obj), a.bound)?;
            if let Some(k) = a.max_nonzero {
                if plan.nonzero_count() > k {
                    return Err(CliError::SearchExhausted(format!(
                        "best plan in |l_i| <= {} has {} nonzero couplings, more than --max-nonzero {k}",
                        a.bound,
                        plan.nonzero_count()
                    )));
                }
            }
            plan
        }
        None => {
            let zeros = vec![0; s.num_classes()];
            let l = l.unwrap_or(&zeros);
            if l.len() != s.num_classes() {
                return Err(CliError::Parse(format!(
                    "--l has {} entries, the scheme has {} classes",
                    l.len(),
                    s.num_classes()
                )));
            }
            synthesize_couplings(s, m, a.t0, phi, l)?
        }
    })
}

fn synthesize(a: &SynthArgs, out: &mut String) -> Result<(), CliError> {
    check_positive("t0", a.t0)?;
    check_positive("tol", a.tol)?;
    check_levels(a.levels)?;
    if a.bound < 0 {
        return Err(CliError::Parse(format!("--bound must be non-negative, got {}", a.bound)));
    }
    let spec = GroupSpec::parse(&a.group.group)?;
    let phi = parse_angle(&a.phi)?;
    let l = a.l.as_deref().map(parse_ints).transpose()?;

    let (s, plan, mode) = if a.compose {
        let factors = spec.factors();
        if factors.len() < 2 {
            return Err(CliError::Parse("--compose needs a product spec".into()));
        }
        if a.l.is_some() || a.target != "auto" {
            return Err(CliError::Parse("--compose takes neither --l nor --target".into()));
        }
        let mut acc: Option<(GroupScheme, CouplingPlan)> = None;
        for f in &factors {
            let fs = GroupScheme::with_seed(f.build(a.group.max_order)?, a.group.seed)?.symmetrize();
            let m = resolve_target(&fs, "auto")?;
            let fp = gauge_plan(&fs, m, a, phi, None)?;
            acc = Some(match acc {
                None => (fs, fp),
                Some((ps, pp)) => {
                    let prod = product_scheme(&ps, &fs)?;
                    let plan = product_plan(&ps, &pp, &fs, &fp, &prod)?;
                    (prod, plan)
                }
            });
        }
        let (s, plan) = acc.expect("at least two factors");
        if s.order() > a.group.max_order {
            return Err(CliError::Parse(format!(
                "group order {} exceeds --max-order {}",
                s.order(),
                a.group.max_order
            )));
        }
        (s, plan, "product".to_string())
    } else {
        let g = spec.build(a.group.max_order)?;
        let s = GroupScheme::with_seed(g, a.group.seed)?.symmetrize();
        let m = resolve_target(&s, &a.target)?;
        let plan = gauge_plan(&s, m, a, phi, l.as_deref())?;
        let mode = match a.search {
            Some(o) => objective(o).tag().to_string(),
            None => "explicit".to_string(),
        };
        (s, plan, mode)
    };

    // floating-point noise below the zero threshold is written as exact zero
    let mut plan = plan;
    let thr = plan.zero_threshold();
    for j in plan.couplings.iter_mut().filter(|j| j.abs() <= thr) {
        *j = 0.0;
    }
    let report = pst::verify_pst(&s, &plan, a.tol);
    let f_opt = optimal_fidelity(&s, plan.target)?;
    let stored = match a.convention {
        ConventionArg::Amplitude => plan.to_amplitude(),
        ConventionArg::Physical => plan.to_physical(),
    };
    let z = s.class_members(plan.target)[0];
    let file = PlanFile::new(
        &spec.to_string(),
        s.group(),
        a.group.seed,
        a.levels,
        &mode,
        &stored,
        s.group().label(z),
    );
    let path = a.out.join("plan.toml");
    write_atomic(&path, &file.to_toml()?)?;

    let _ = writeln!(out, "group: {spec} (order {})", s.order());
    let _ = writeln!(out, "target: R{} {{{}}}", plan.target, s.group().label(z));
    let _ = writeln!(out, "t0: {}", num(plan.t0));
    let _ = writeln!(out, "gauge: {mode}, phi = {}, l = {:?}", phase_units(plan.gauge.phi), plan.gauge.l);
    let _ = writeln!(out, "convention: {}", stored.convention.tag());
    for (i, j) in stored.couplings.iter().enumerate() {
        let _ = writeln!(out, "  J{i} = {} = {}", num(*j), pi_units(*j));
    }
    let _ = writeln!(out, "nonzero couplings: {}", plan.nonzero_count());
    let _ = writeln!(out, "F_opt: {}", num(f_opt));
    let _ = writeln!(out, "1 - |f(t0)|: {}", num(1.0 - report.peak));
    let _ = writeln!(out, "residual phase: {}", phase_units(report.residual_phase));
    let _ = writeln!(out, "plan: {}", path.display());

    if let Some(rel) = &a.export_graph {
        let rels = if rel == "support" {
            plan.support().into_iter().filter(|&i| i != 0).collect()
        } else {
            parse_indices(rel)?
        };
        let gpath = a.out.join("graph.tgf");
        write_atomic(&gpath, &tgf(&s, &rels)?)?;
        let _ = writeln!(out, "graph: {}", gpath.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct Report {
    group: String,
    group_hash: String,
    seed: u64,
    target: usize,
    target_element: String,
    t0: f64,
    tol: f64,
    pass: bool,
    fidelity: f64,
    one_minus_fidelity: f64,
    amplitude_re: f64,
    amplitude_im: f64,
    residual_phase_over_pi: f64,
    plan_phi_over_pi: f64,
    unitarity_error: f64,
    samples: usize,
    oracle: Option<OracleReport>,
}

#[derive(Serialize)]
struct OracleReport {
    levels: usize,
    dimension: u64,
    ran: bool,
    note: String,
    sector_residual: f64,
    alpha_out_abs: f64,
    beta_out_abs: f64,
    leakage: f64,
    relative_phase_over_pi: f64,
    pass: bool,
}

/// Resolves `@relative` group files against the plan's directory when they
/// do not exist relative to the working directory.
fn locate_spec(spec: GroupSpec, plan_dir: &Path) -> GroupSpec {
    match spec {
        GroupSpec::File(p) if p.is_relative() && !p.exists() => GroupSpec::File(plan_dir.join(p)),
        GroupSpec::Product(f) => GroupSpec::Product(f.into_iter().map(|x| locate_spec(x, plan_dir)).collect()),
        other => other,
    }
}

fn verify(a: &VerifyArgs, out: &mut String) -> Result<(), CliError> {
    check_positive("tol", a.tol)?;
    let text = std::fs::read_to_string(&a.plan)
        .map_err(|e| CliError::Parse(format!("{}: {e}", a.plan.display())))?;
    let file = PlanFile::from_toml(&text)?;
    let levels = a.levels.unwrap_or(file.levels);
    check_levels(levels)?;
    check_positive("t0", file.t0)?;

    let spec_text = a.group.clone().unwrap_or_else(|| file.group.clone());
    let plan_dir = a.plan.parent().unwrap_or(Path::new("."));
    let spec = locate_spec(GroupSpec::parse(&spec_text)?, plan_dir);
    let g = spec.build(a.max_order)?;
    let found = group_hash(&g);
    if found != file.group_hash {
        return Err(CliError::HashMismatch {
            expected: file.group_hash.clone(),
            found,
        });
    }
    let s = GroupScheme::with_seed(g, file.seed)?.symmetrize();
    if file.couplings.values.len() != s.num_classes() {
        return Err(CliError::Parse(format!(
            "plan has {} couplings, the scheme has {} classes",
            file.couplings.values.len(),
            s.num_classes()
        )));
    }
    if file.target == 0 || file.target >= s.num_classes() || s.valency(file.target) != 1 {
        return Err(CliError::NoTarget(format!("plan target R{} is not a singleton class", file.target)));
    }
    let plan = file.to_plan();
    let report = pst::verify_pst_with(&s, &plan, a.tol, a.samples);
    let z = s.class_members(plan.target)[0];

    let mut csv = format!(
        "# grouppst trace group={} target=R{} seed={} t0={}\nt,re,im,abs2\n",
        file.group,
        plan.target,
        file.seed,
        num(plan.t0)
    );
    for (t, f) in &report.trace {
        let _ = writeln!(csv, "{},{},{},{}", num(*t), num(f.re), num(f.im), num(f.norm_sqr()));
    }

    let oracle = if a.oracle { Some(run_oracle(&s, &plan, levels, a.cap, z)?) } else { None };
    let oracle_ok = oracle.as_ref().is_none_or(|o| !o.ran || o.pass);
    let pass = report.pass && oracle_ok;

    let rep = Report {
        group: file.group.clone(),
        group_hash: file.group_hash.clone(),
        seed: file.seed,
        target: plan.target,
        target_element: s.group().label(z).to_string(),
        t0: sig(plan.t0),
        tol: sig(a.tol),
        pass,
        fidelity: sig(report.fidelity),
        one_minus_fidelity: sig(1.0 - report.fidelity),
        amplitude_re: sig(report.amplitude.re),
        amplitude_im: sig(report.amplitude.im),
        residual_phase_over_pi: phase_over_pi(report.residual_phase),
        plan_phi_over_pi: sig(file.gauge.phi_over_pi),
        unitarity_error: sig(report.unitarity_error),
        samples: report.trace.len(),
        oracle,
    };
    let csv_path = a.out.join("trace.csv");
    let rep_path = a.out.join("report.toml");
    write_atomic(&csv_path, &csv)?;
    write_atomic(&rep_path, &toml::to_string(&rep).map_err(|e| CliError::Parse(e.to_string()))?)?;

    let _ = writeln!(out, "group: {} (order {})", file.group, s.order());
    let _ = writeln!(out, "target: R{} {{{}}}", plan.target, s.group().label(z));
    let _ = writeln!(out, "|f(t0)|: {}", num(report.fidelity));
    let _ = writeln!(out, "1 - |f(t0)|: {}", num(1.0 - report.fidelity));
    let _ = writeln!(out, "residual phase: {}", phase_units(report.residual_phase));
    if let Some(o) = &rep.oracle {
        if o.ran {
            let _ = writeln!(
                out,
                "oracle: D = {}, dim = {}, sector residual {}, leakage {}, {}",
                o.levels,
                o.dimension,
                num(o.sector_residual),
                num(o.leakage),
                if o.pass { "pass" } else { "FAIL" }
            );
        } else {
            let _ = writeln!(out, "oracle: skipped ({})", o.note);
        }
    }
    let _ = writeln!(out, "trace: {}", csv_path.display());
    let _ = writeln!(out, "report: {}", rep_path.display());
    let _ = writeln!(out, "{}", if pass { "PASS" } else { "FAIL" });
    if !pass {
        return Err(CliError::Fidelity(format!(
            "|f(t0)| = {} (tolerance {})",
            num(report.fidelity),
            num(a.tol)
        )));
    }
    Ok(())
}

fn run_oracle(s: &GroupScheme, plan: &CouplingPlan, levels: usize, cap: usize, z: usize) -> Result<OracleReport, CliError> {
    let n = s.order() as u32;
    let dim = (levels as u64).checked_pow(n).filter(|&d| d <= cap as u64);
    let Some(dim) = dim else {
        return Ok(OracleReport {
            levels,
            dimension: 0,
            ran: false,
            note: format!("{levels}^{n} exceeds the cap {cap}"),
            sector_residual: 0.0,
            alpha_out_abs: 0.0,
            beta_out_abs: 0.0,
            leakage: 0.0,
            relative_phase_over_pi: 0.0,
            pass: false,
        });
    };
    let h = build_full_hamiltonian(s, plan, levels, cap)?;
    let residual = sector_residual(&h, s)?;
    let r = Complex64::new(0.5f64.sqrt(), 0.0);
    let t = h.full_transfer_check(r, r, 0, z, plan.t0)?;
    let pass = t.pass && residual < 1e-10;
    Ok(OracleReport {
        levels,
        dimension: dim,
        ran: true,
        note: String::new(),
        sector_residual: sig(residual),
        alpha_out_abs: sig(t.alpha_out.norm()),
        beta_out_abs: sig(t.beta_out.norm()),
        leakage: sig(t.leakage),
        relative_phase_over_pi: t.relative_phase.map(phase_over_pi).unwrap_or(0.0),
        pass,
    })
}
