//! Command-line front end: verify identity catalogs, expand individual
//! objects to their canonical serialization, and print character tables.
//!
//! Exit codes: 0 all verified, 1 mismatch (report still emitted), 2 usage
//! error, 3 resource limit exceeded.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use immanant_kit::coeff::Coefficient;
use immanant_kit::fermion::{cauchy_product_fermion, det_fermion, perm_fermion, product_linear_series};
use immanant_kit::group::{character_table_load, Character, Group, Side, DEFAULT_MAX_GROUP_SIZE};
use immanant_kit::identities::{
    product_even_cauchy_sides, resolve_character, resolve_group, run_cases, IdentityCase,
    IdentityName, VerificationReport,
};
use immanant_kit::matrix::PolyMatrix;
use immanant_kit::poly::{Monomial, Poly};
use immanant_kit::symfunc::schur;
use immanant_kit::vars::{Sym, VarRegistry};
use immanant_kit::{Error, Result};

#[derive(Parser)]
#[command(
    name = "immanant-kit",
    version,
    about = "Exact verification of determinant, permanent, and immanant expansion identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one identity (or the whole catalog) by exact expansion
    Verify(VerifyArgs),
    /// Expand one object to its canonical serialization
    Expand(ExpandArgs),
    /// Print a character table with class representatives and sizes
    Chartable(ChartableArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity to check (or "all" for the whole catalog)
    #[arg(long, default_value = "all")]
    identity: String,
    /// Matrix size / number of variables per side
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Truncation degree in t
    #[arg(long, default_value_t = 4)]
    degree: u32,
    /// Group spec: builtin:S<k>|A<k>|C<k> (k may be the literal letter n) or file:<path>
    #[arg(long, default_value = "builtin:Sn")]
    group: String,
    /// Character spec: sign, trivial, a table index, a partition like 2,1, or a row name
    #[arg(long = "char", default_value = "sign")]
    character: String,
    /// Use epsilon-commuting variables where the identity has an epsilon form
    #[arg(long)]
    epsilon: bool,
    /// Scale projector identities by |G| so all coefficients are integral
    #[arg(long)]
    scaled: bool,
    /// Emit one JSON report per case (newline-delimited) instead of text
    #[arg(long)]
    json: bool,
    /// Worker threads for independent cases (default: one per core)
    #[arg(long)]
    workers: Option<usize>,
    /// Largest group order accepted when closing generators
    #[arg(long, default_value_t = DEFAULT_MAX_GROUP_SIZE)]
    max_group_size: usize,
}

#[derive(Args)]
struct ExpandArgs {
    /// What to expand: det, perm, immanant, det-fermion, perm-fermion,
    /// series-fermion, product-odd, product-even, schur
    object: String,
    /// Matrix size / number of variables per side
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Truncation degree in t (bosonic objects)
    #[arg(long, default_value_t = 4)]
    degree: u32,
    /// Group spec for immanants
    #[arg(long, default_value = "builtin:Sn")]
    group: String,
    /// Character spec for immanants
    #[arg(long = "char", default_value = "sign")]
    character: String,
    /// Partition for schur, e.g. 2,1
    #[arg(long)]
    partition: Option<String>,
    /// Variable side for schur: u or v
    #[arg(long, default_value = "u")]
    side: String,
    /// Use epsilon-commuting variables
    #[arg(long)]
    epsilon: bool,
    /// Largest group order accepted when closing generators
    #[arg(long, default_value_t = DEFAULT_MAX_GROUP_SIZE)]
    max_group_size: usize,
}

#[derive(Args)]
struct ChartableArgs {
    /// Group spec: builtin:S<k>|A<k>|C<k> or file:<path>
    #[arg(long)]
    group: String,
    /// Degree, required only when the builtin spec uses the literal letter n
    #[arg(long)]
    n: Option<usize>,
    /// Largest group order accepted when closing generators
    #[arg(long, default_value_t = DEFAULT_MAX_GROUP_SIZE)]
    max_group_size: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Expand(args) => cmd_expand(args),
        Command::Chartable(args) => cmd_chartable(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Resource(_) => ExitCode::from(3),
                Error::Usage(_) | Error::Io(_) => ExitCode::from(2),
            }
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let names: Vec<IdentityName> = if args.identity == "all" {
        IdentityName::ALL.to_vec()
    } else {
        vec![args.identity.parse()?]
    };
    let cases: Vec<IdentityCase> = names
        .into_iter()
        .map(|name| {
            IdentityCase::new(name, args.n, args.degree)
                .with_group(&args.group)
                .with_character(&args.character)
                .with_epsilon(args.epsilon)
                .with_scaled(args.scaled)
        })
        .collect();
    let max = args.max_group_size;
    let reports = match args.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Resource(format!("cannot build worker pool: {e}")))?;
            pool.install(|| run_cases(&cases, max))
        }
        None => run_cases(&cases, max),
    };
    let mut all_verified = true;
    for report in reports {
        let report = report?;
        if !report.verified() {
            all_verified = false;
        }
        if args.json {
            println!("{}", report.to_json());
        } else {
            print_text_report(&report);
        }
    }
    Ok(if all_verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn print_text_report(report: &VerificationReport) {
    let case = &report.case;
    let mut tags = Vec::new();
    if case.identity.needs_group() {
        tags.push(format!("group={} char={}", case.group, case.character));
    }
    if case.epsilon {
        tags.push("epsilon".to_string());
    }
    if case.scaled {
        tags.push("scaled".to_string());
    }
    let tag = if tags.is_empty() {
        String::new()
    } else {
        format!(" [{}]", tags.join(", "))
    };
    if report.verified() {
        println!(
            "verified {} n={} D={}{} (lhs {} terms, rhs {} terms, {} ms)",
            case.identity, case.n, case.degree, tag, report.lhs_terms, report.rhs_terms, report.ms
        );
    } else {
        println!(
            "MISMATCH {} n={} D={}{} — difference begins: {}",
            case.identity,
            case.n,
            case.degree,
            tag,
            report.difference.join(" | ")
        );
    }
}

/// Entry sum_{M=0..cap} f_M t^M u_i^M v_j^M (1-based i, j), with the
/// eps^C(M,2) normal-ordering layer in epsilon mode.
fn f_entry(reg: &Arc<VarRegistry>, i: usize, j: usize, cap: u32, epsilon: bool) -> Poly {
    let mut p = Poly::zero(reg);
    for m in 0..=cap {
        let mut pairs = vec![
            (reg.id(Sym::F(m as usize)), 1),
            (reg.t_id(), m),
            (reg.id(Sym::U(i)), m),
            (reg.id(Sym::V(j)), m),
        ];
        if epsilon {
            pairs.push((reg.eps_id(), m * m.saturating_sub(1) / 2));
        }
        p.add_term(Monomial::from_pairs(reg, pairs), &Coefficient::one());
    }
    p
}

/// The chi-immanant of f[t u v^T]: sum over g in G of chi(g) prod_i
/// A_{i,g(i)}, rows multiplied in ascending order (relevant in eps mode).
fn immanant(group: &Group, chi: &Character, d: u32, epsilon: bool) -> Poly {
    let n = group.n();
    let reg = VarRegistry::new(n, d as usize);
    let mut sum = Poly::zero(&reg);
    for gi in 0..group.order() {
        let w = chi.value(group.class_of(gi)).clone();
        if w.is_zero() {
            continue;
        }
        let g = group.element(gi);
        let mut product = Poly::one(&reg);
        for i in 0..n {
            let entry = f_entry(&reg, i + 1, g.apply(i) + 1, d, epsilon);
            product = if epsilon {
                product.eps_mul(&entry, Some(d))
            } else {
                product.mul_trunc(&entry, Some(d))
            };
        }
        sum = sum.add(&product.scale(&w));
    }
    sum
}

fn parse_partition(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut parts: Vec<usize> = Vec::new();
    for piece in text.split(',') {
        if piece.is_empty() {
            continue;
        }
        parts.push(
            piece
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("malformed partition '{text}'")))?,
        );
    }
    if parts.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Usage(format!(
            "partition '{text}' is not weakly decreasing"
        )));
    }
    if parts.len() > n {
        return Err(Error::Usage(format!(
            "partition '{text}' has more than n={n} parts"
        )));
    }
    parts.resize(n, 0);
    Ok(parts)
}

fn cmd_expand(args: ExpandArgs) -> Result<ExitCode> {
    if args.n == 0 {
        return Err(Error::Usage("n must be at least 1".to_string()));
    }
    let n = args.n;
    let d = args.degree;
    let text = match args.object.as_str() {
        "det" => {
            let reg = VarRegistry::new(n, d as usize);
            let m = PolyMatrix::from_fn(&reg, n, |i, j| f_entry(&reg, i + 1, j + 1, d, args.epsilon));
            m.det_trunc(Some(d), args.epsilon).canonical_string()
        }
        "perm" => {
            let reg = VarRegistry::new(n, d as usize);
            let m = PolyMatrix::from_fn(&reg, n, |i, j| f_entry(&reg, i + 1, j + 1, d, args.epsilon));
            m.perm_trunc(Some(d), args.epsilon).canonical_string()
        }
        "immanant" => {
            let (group, table) = resolve_group(&args.group, n, args.max_group_size)?;
            let chi = resolve_character(&group, &table, &args.character)?;
            immanant(&group, &chi, d, args.epsilon).canonical_string()
        }
        "det-fermion" => det_fermion(n, args.epsilon).canonical_string(),
        "perm-fermion" => perm_fermion(n, args.epsilon).canonical_string(),
        "series-fermion" => product_linear_series(n, args.epsilon).canonical_string(),
        "product-odd" => cauchy_product_fermion(n, args.epsilon).canonical_string(),
        "product-even" => product_even_cauchy_sides(n, d).0.canonical_string(),
        "schur" => {
            let spec = args.partition.as_deref().ok_or_else(|| {
                Error::Usage("schur requires --partition, e.g. --partition 2,1".to_string())
            })?;
            let m = parse_partition(spec, n)?;
            let side = match args.side.as_str() {
                "u" => Side::U,
                "v" => Side::V,
                other => return Err(Error::Usage(format!("side must be u or v, got '{other}'"))),
            };
            let reg = VarRegistry::new(n, 0);
            schur(&reg, &m, side).canonical_string()
        }
        other => {
            return Err(Error::Usage(format!(
                "unknown object '{other}'; available: det, perm, immanant, det-fermion, \
                 perm-fermion, series-fermion, product-odd, product-even, schur"
            )))
        }
    };
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_chartable(args: ChartableArgs) -> Result<ExitCode> {
    let (group, table) = if let Some(path) = args.group.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let (group, table) = character_table_load(&text, args.max_group_size)?;
        if let Some(n) = args.n {
            if group.n() != n {
                return Err(Error::Usage(format!(
                    "group degree {} from '{path}' does not match --n {n}",
                    group.n()
                )));
            }
        }
        (group, table)
    } else {
        let n = match args.n {
            Some(n) => n,
            None => infer_builtin_degree(&args.group)?,
        };
        resolve_group(&args.group, n, args.max_group_size)?
    };
    println!("order {}, {} classes", group.order(), group.class_count());
    for c in 0..group.class_count() {
        println!(
            "class {c}: rep {} size {}",
            group.class_rep(c),
            group.class_size(c)
        );
    }
    // The conductor actually needed: 1 whenever a value is rational, even
    // if it is internally carried in a larger cyclotomic field.
    let conductor = table
        .iter()
        .flat_map(|chi| chi.values())
        .map(|v| if v.is_rational() { 1 } else { v.conductor() })
        .max()
        .unwrap_or(1);
    println!("conductor {conductor}");
    let mut rows = Vec::new();
    for chi in &table {
        let values: Vec<String> = chi.values().iter().map(Coefficient::canonical_string).collect();
        let row = format!("[{}]", values.join(","));
        println!("{}: {}", chi.name(), row);
        rows.push(row);
    }
    println!("[{}]", rows.join(","));
    Ok(ExitCode::SUCCESS)
}

/// Degree encoded in a builtin group spec ("builtin:S3" -> 3); specs using
/// the literal letter n have no intrinsic degree and need --n.
fn infer_builtin_degree(spec: &str) -> Result<usize> {
    let rest = spec
        .strip_prefix("builtin:")
        .ok_or_else(|| Error::Usage(format!("group spec '{spec}' must be builtin:... or file:<path>")))?;
    if rest.len() < 2 {
        return Err(Error::Usage(format!("malformed builtin group spec '{spec}'")));
    }
    rest[1..]
        .parse()
        .map_err(|_| Error::Usage(format!("spec '{spec}' does not name a degree; pass --n")))
}
