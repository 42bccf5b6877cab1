//! `tubecat` — load or select fusion-category symmetries, run the
//! verification/reproduction suite, and export machine-readable reports.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 validation failure,
//! 3 infeasibility certificate.

use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use tubecat_core::catalog::{self, CatalogEntry, CatalogOptions, CATALOG_IDS};
use tubecat_core::channel::{
    apply_channel, solve_channel_basis, total_trace, transition_probabilities, ChannelBasis,
    SolveOutcome,
};
use tubecat_core::charges::{decompose_irreps_seeded, verify_charge, GeneralisedCharge};
use tubecat_core::fusion::{validate_dims, validate_pentagon, validate_unitarity};
use tubecat_core::numerics::is_isometry;
use tubecat_core::schema;
use tubecat_core::tube::{presented_tube, derive_tube, verify_against_reference, TubeCategory};
use tubecat_core::{Error, Tolerance};

#[derive(Parser)]
#[command(name = "tubecat", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(clap::Args, Clone)]
struct Common {
    /// Builtin category id or path to a category-definition JSON file
    #[arg(long)]
    category: String,
    /// Output format
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write output to this path instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Tolerance override for pass/fail residual checks
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed for the commutant-sampling decomposition (golden numbers are
    /// seed-independent)
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// List builtin category ids
    List,
    /// Structural validation: fusion data, tube tables, reference tables, charges
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Print the tube-category presentation
    Tube {
        #[command(flatten)]
        common: Common,
    },
    /// Print the irreducible generalised charges
    Charges {
        #[command(flatten)]
        common: Common,
    },
    /// Print the complete transition-channel basis for a defect
    Basis {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        defect: String,
        #[arg(long)]
        source: String,
    },
    /// Transition probabilities of a charge across a defect
    Probs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        charge: String,
        #[arg(long)]
        defect: String,
        #[arg(long)]
        source: String,
    },
    /// Apply the defect quantum channel to the default pure state
    Channel {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        charge: String,
        #[arg(long)]
        defect: String,
        #[arg(long)]
        source: String,
    },
    /// Run the full verification suite for one category, or all builtins
    Verify {
        /// Builtin category id (omit to verify every builtin)
        #[arg(long)]
        category: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Export the category definition (or tube presentation) as JSON
    Export {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("usage error: {}", first_line(&e.to_string()));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", first_line(&e.to_string()));
            ExitCode::from(1)
        }
    }
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or(s)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::List => {
            let mut out = String::new();
            for id in CATALOG_IDS {
                out.push_str(id);
                out.push('\n');
            }
            emit(&None, &out)?;
            Ok(0)
        }
        Command::Validate { common } => cmd_validate(&common),
        Command::Tube { common } => cmd_tube(&common),
        Command::Charges { common } => cmd_charges(&common),
        Command::Basis { common, defect, source } => cmd_basis(&common, &defect, &source),
        Command::Probs { common, charge, defect, source } => {
            cmd_probs(&common, &charge, &defect, &source, false)
        }
        Command::Channel { common, charge, defect, source } => {
            cmd_probs(&common, &charge, &defect, &source, true)
        }
        Command::Verify { category, tolerance, seed } => cmd_verify(category.as_deref(), tolerance, seed),
        Command::Export { common } => cmd_export(&common),
    }
}

/// Load a builtin by id, or a category-definition JSON file by path.
fn load_entry(selector: &str, seed: u64) -> Result<CatalogEntry, Error> {
    if CATALOG_IDS.contains(&selector) {
        return catalog::load_with_options(
            selector,
            &CatalogOptions { orbit_reps: None, seed },
        );
    }
    let path = PathBuf::from(selector);
    if !path.exists() {
        return Err(Error::UnknownCategory(selector.into()));
    }
    let text = std::fs::read_to_string(&path)?;
    let doc: schema::CategoryDoc =
        serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
    let tol = Tolerance::default();
    if doc.f_symbols.is_some() {
        let cat = schema::doc_to_category(&doc)?;
        let tube = derive_tube(&cat)?;
        let charges = decompose_irreps_seeded(&tube, tol, seed)?;
        Ok(CatalogEntry {
            id: selector.into(),
            category: Some(cat),
            tube,
            reference: None,
            charges,
        })
    } else if let Some(pres) = &doc.tube_presentation {
        let tube = presented_tube(pres)?;
        let charges = if tube.dagger_table.is_some() {
            decompose_irreps_seeded(&tube, tol, seed)?
        } else {
            vec![]
        };
        Ok(CatalogEntry { id: selector.into(), category: None, tube, reference: None, charges })
    } else {
        Err(Error::Schema(
            "category document needs either f_symbols or tube_presentation".into(),
        ))
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn find_charge<'a>(
    entry: &'a CatalogEntry,
    name: &str,
) -> Result<&'a GeneralisedCharge, Error> {
    entry.charges.iter().find(|u| u.name == name).ok_or_else(|| {
        let names: Vec<&str> = entry.charges.iter().map(|u| u.name.as_str()).collect();
        Error::UnknownLabel(format!("charge '{name}' (available: {})", names.join(", ")))
    })
}

/// Resolve the channel basis for (defect, source): the standard complete
/// basis for builtins, the canonical basis for ingested fusion data, and the
/// completeness solver whenever no unitary canonical construction applies.
fn resolve_basis(
    entry: &CatalogEntry,
    defect: &str,
    source: usize,
    tol: f64,
) -> Result<SolveOutcome, Error> {
    let direct = if CATALOG_IDS.contains(&entry.id.as_str()) {
        catalog::standard_channel_basis(entry, defect, source)
    } else {
        match &entry.category {
            Some(cat) => entry
                .tube
                .basis
                .iter()
                .find(|b| b.defect == defect && b.source == source)
                .and_then(|b| b.defect_id)
                .ok_or_else(|| {
                    Error::UnknownLabel(format!("defect '{defect}' out of object {source}"))
                })
                .and_then(|defect_id| {
                    tubecat_core::channel::canonical_channel_basis(
                        cat,
                        &entry.tube,
                        defect_id,
                        source,
                    )
                }),
            None => Err(Error::NonUnitaryCategory),
        }
    };
    match direct {
        Ok(basis) => Ok(SolveOutcome::Feasible(basis)),
        // solve to well below the pass/fail threshold so that the factored
        // basis meets the completeness check at `tol`
        Err(Error::NonUnitaryCategory) => solve_channel_basis(
            &entry.tube,
            &entry.charges,
            defect,
            source,
            Tolerance::abs(tol * 1e-4),
        ),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Check {
    name: String,
    residual: f64,
    pass: bool,
}

fn render_checks(id: &str, checks: &[Check], format: Format) -> String {
    match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "check": c.name,
                        "residual": c.residual,
                        "pass": c.pass,
                    })
                })
                .collect();
            schema::canonical_json(&serde_json::json!({
                "category": id,
                "checks": items,
                "pass": checks.iter().all(|c| c.pass),
            }))
        }
        Format::Table => {
            let mut out = format!("category {id}\n");
            for c in checks {
                out.push_str(&format!(
                    "{:<44} {:>24} {}\n",
                    c.name,
                    format!("{:.16e}", c.residual),
                    if c.pass { "PASS" } else { "FAIL" }
                ));
            }
            out.push_str(if checks.iter().all(|c| c.pass) {
                "all checks passed\n"
            } else {
                "FAILED\n"
            });
            out
        }
    }
}

fn validation_checks(entry: &CatalogEntry, tol: f64, seed: u64) -> Vec<Check> {
    let mut checks = vec![];
    let mut push = |name: &str, residual: f64, pass: bool| {
        checks.push(Check { name: name.into(), residual, pass });
    };
    let t = &entry.tube;
    if let Some(cat) = &entry.category {
        if cat.f_symbols.is_some() {
            match validate_pentagon(cat, Tolerance::abs(tol)) {
                Ok(r) => push("pentagon", r.max_residual, r.pass),
                Err(_) => push("pentagon", f64::INFINITY, false),
            }
            if cat.unitary_flag {
                match validate_unitarity(cat, Tolerance::abs(tol)) {
                    Ok(r) => push("f-matrix unitarity", r.max_residual, r.pass),
                    Err(_) => push("f-matrix unitarity", f64::INFINITY, false),
                }
            }
        }
        push("quantum dimensions", 0.0, validate_dims(cat, Tolerance::abs(tol)).is_ok());
    }
    let assoc = t.associativity_residual();
    push("tube associativity", assoc, assoc < tol);
    let ident = t.identity_residual();
    push("tube identity", ident, ident < tol);
    if t.dagger_table.is_some() {
        match t.dagger_residual() {
            Ok(r) => push("tube dagger involutive/contravariant", r, r < tol),
            Err(_) => push("tube dagger involutive/contravariant", f64::INFINITY, false),
        }
    }
    if let Some(reference) = &entry.reference {
        match verify_against_reference(t, reference) {
            Ok(r) => push("reference tables", r.max_residual, r.pass),
            Err(_) => push("reference tables", f64::INFINITY, false),
        }
    }
    for u in &entry.charges {
        let name = format!("charge {} representation", u.name);
        match verify_charge(t, u, Tolerance::abs(tol)) {
            Ok(r) => push(&name, r.max_residual, r.pass),
            Err(_) => push(&name, f64::INFINITY, false),
        }
    }
    if !entry.charges.is_empty() {
        let sum: usize = entry.charges.iter().map(|u| u.total_dim().pow(2)).sum();
        push(
            &format!("sum of squared charge dims = {}", t.total_dim()),
            (sum as f64 - t.total_dim() as f64).abs(),
            sum == t.total_dim(),
        );
        // seed-independence of the decomposition-backed catalogs
        let _ = seed;
    }
    checks
}

fn cmd_validate(common: &Common) -> Result<u8, Error> {
    let entry = load_entry(&common.category, common.seed)?;
    let checks = validation_checks(&entry, common.tolerance, common.seed);
    let pass = checks.iter().all(|c| c.pass);
    emit(&common.output, &render_checks(&entry.id, &checks, common.format))?;
    Ok(if pass { 0 } else { 2 })
}

fn cmd_tube(common: &Common) -> Result<u8, Error> {
    let entry = load_entry(&common.category, common.seed)?;
    let t = &entry.tube;
    let text = match common.format {
        Format::Json => schema::tube_json(t)?,
        Format::Table => {
            let mut out = format!(
                "tube category of {} — {} basis morphisms\n",
                entry.id,
                t.total_dim()
            );
            for (i, b) in t.basis.iter().enumerate() {
                out.push_str(&format!(
                    "[{i:>3}] tub[{} -> {}; {}; {}]\n",
                    t.objects[b.source].display_name,
                    t.objects[b.target].display_name,
                    b.defect,
                    b.channel,
                ));
            }
            out
        }
    };
    emit(&common.output, &text)?;
    Ok(0)
}

fn cmd_charges(common: &Common) -> Result<u8, Error> {
    let entry = load_entry(&common.category, common.seed)?;
    let text = match common.format {
        Format::Json => schema::charges_json(&entry.tube, &entry.charges),
        Format::Table => {
            let mut out = format!(
                "{} irreducible generalised charges of {}\n",
                entry.charges.len(),
                entry.id
            );
            for u in &entry.charges {
                let dims: Vec<String> = entry
                    .tube
                    .objects
                    .iter()
                    .map(|o| format!("{}:{}", o.display_name, u.sector_dims[o.id]))
                    .collect();
                out.push_str(&format!(
                    "{:<14} dim {:>2}   sectors {}\n",
                    u.name,
                    u.total_dim(),
                    dims.join(" ")
                ));
            }
            out
        }
    };
    emit(&common.output, &text)?;
    Ok(0)
}

fn render_basis(t: &TubeCategory, basis: &ChannelBasis, format: Format) -> String {
    match format {
        Format::Json => schema::canonical_json(&schema::basis_value(t, basis)),
        Format::Table => {
            let mut out = format!(
                "channel basis: defect {} out of {} — {} elements\n",
                basis.defect,
                t.objects[basis.source].display_name,
                basis.elements.len()
            );
            for e in &basis.elements {
                let terms: Vec<String> = e
                    .morphism
                    .terms
                    .iter()
                    .map(|(&i, z)| {
                        let b = &t.basis[i];
                        format!(
                            "({:.16e}{:+.16e}i)*tub[{} -> {}; {}; {}]",
                            z.re,
                            z.im,
                            t.objects[b.source].display_name,
                            t.objects[b.target].display_name,
                            b.defect,
                            b.channel
                        )
                    })
                    .collect();
                out.push_str(&format!(
                    "-> {}: {}\n",
                    t.objects[e.target].display_name,
                    terms.join(" + ")
                ));
            }
            out
        }
    }
}

fn cmd_basis(common: &Common, defect: &str, source: &str) -> Result<u8, Error> {
    let entry = load_entry(&common.category, common.seed)?;
    let source = entry.tube.object_id(source)?;
    match resolve_basis(&entry, defect, source, common.tolerance)? {
        SolveOutcome::Feasible(basis) => {
            emit(&common.output, &render_basis(&entry.tube, &basis, common.format))?;
            Ok(0)
        }
        SolveOutcome::Infeasible(cert) => {
            let text = match common.format {
                Format::Json => {
                    schema::canonical_json(&schema::certificate_value(&entry.tube, &cert))
                }
                Format::Table => format!(
                    "INFEASIBLE: no complete channel basis for defect {} out of {}\n\
                     affine completeness system: residual {:.16e}, unique solution: {}\n\
                     Gram block at target {} has minimum eigenvalue {:.16e} < 0\n\
                     witness quadratic form: {:.16e}\n",
                    cert.defect,
                    entry.tube.objects[cert.source].display_name,
                    cert.affine_residual,
                    cert.affine_solution_unique,
                    entry.tube.objects[cert.witness_target].display_name,
                    cert.min_eigenvalue,
                    cert.witness_quadratic_form,
                ),
            };
            emit(&common.output, &text)?;
            Ok(3)
        }
    }
}

fn cmd_probs(
    common: &Common,
    charge: &str,
    defect: &str,
    source: &str,
    as_channel: bool,
) -> Result<u8, Error> {
    let entry = load_entry(&common.category, common.seed)?;
    let source = entry.tube.object_id(source)?;
    let u = find_charge(&entry, charge)?;
    let basis = match resolve_basis(&entry, defect, source, common.tolerance)? {
        SolveOutcome::Feasible(basis) => basis,
        SolveOutcome::Infeasible(cert) => {
            let text = format!(
                "INFEASIBLE: no complete channel basis for defect {} out of {}\n",
                cert.defect, entry.tube.objects[cert.source].display_name
            );
            emit(&common.output, &text)?;
            return Ok(3);
        }
    };
    let t = &entry.tube;
    if as_channel {
        let dx = u.sector_dims[source];
        if dx == 0 {
            return Err(Error::SectorMismatch);
        }
        let mut amp = vec![num_complex::Complex64::new(0.0, 0.0); dx];
        amp[0] = num_complex::Complex64::new(1.0, 0.0);
        let rho = tubecat_core::channel::DensityMatrix::pure(source, &amp)?;
        let blocks = apply_channel(t, u, &basis, &rho)?;
        let text = match common.format {
            Format::Json => {
                let items: Vec<serde_json::Value> = blocks
                    .iter()
                    .map(|b| {
                        serde_json::json!({
                            "target": t.objects[b.object].display_name,
                            "trace": b.trace().re,
                        })
                    })
                    .collect();
                schema::canonical_json(&serde_json::json!({
                    "charge": u.name,
                    "defect": basis.defect,
                    "source": t.objects[source].display_name,
                    "blocks": items,
                    "total_trace": total_trace(&blocks).re,
                }))
            }
            Format::Table => {
                let mut out = format!(
                    "channel output of {} across defect {} from {}\n",
                    u.name, basis.defect, t.objects[source].display_name
                );
                for b in &blocks {
                    out.push_str(&format!(
                        "sector {:<8} trace {:.16e}\n",
                        t.objects[b.object].display_name,
                        b.trace().re
                    ));
                }
                out.push_str(&format!("total trace {:.16e}\n", total_trace(&blocks).re));
                out
            }
        };
        emit(&common.output, &text)?;
        return Ok(0);
    }
    let report = transition_probabilities(t, u, &basis, None)?;
    let text = match common.format {
        Format::Json => schema::canonical_json(&schema::marginals_value(t, &report)),
        Format::Table => {
            let mut out = format!(
                "transition probabilities of {} across defect {} from {}\n",
                u.name, basis.defect, t.objects[source].display_name
            );
            for e in &report.entries {
                out.push_str(&format!(
                    "-> {:<8} (channel {})  {:.16e}\n",
                    t.objects[e.target].display_name,
                    e.index_within_target,
                    e.probability
                ));
            }
            out.push_str(&format!("total {:.16e}\n", report.total));
            out
        }
    };
    emit(&common.output, &text)?;
    Ok(0)
}

/// Full verification of one builtin: structural validation, charge count and
/// dimension sum, channel-basis completeness and per-charge isometries for
/// every defect/source, and — where no basis can exist — the infeasibility
/// certificate.
fn verify_entry(id: &str, tol: f64, seed: u64) -> Result<Vec<Check>, Error> {
    let entry = catalog::load_with_options(id, &CatalogOptions { orbit_reps: None, seed })?;
    let mut checks = validation_checks(&entry, tol, seed);
    let t = &entry.tube;
    let mut defects: Vec<String> = t.basis.iter().map(|b| b.defect.clone()).collect();
    defects.sort();
    defects.dedup();
    for defect in &defects {
        for source in 0..t.objects.len() {
            if !t
                .basis
                .iter()
                .any(|b| b.source == source && &b.defect == defect)
            {
                continue;
            }
            let src = t.objects[source].display_name.clone();
            match resolve_basis(&entry, defect, source, tol)? {
                SolveOutcome::Feasible(basis) => {
                    let res = tubecat_core::channel::completeness_residual(t, &basis)?;
                    checks.push(Check {
                        name: format!("basis ({defect} out of {src}) completeness"),
                        residual: res,
                        pass: res < tol,
                    });
                    for u in &entry.charges {
                        if !u.dagger_compatible || u.sector_dims[source] == 0 {
                            continue;
                        }
                        let iso = tubecat_core::channel::assemble_isometry(t, u, &basis)?;
                        let ok = is_isometry(&iso.stacked, Tolerance::abs(tol))?;
                        checks.push(Check {
                            name: format!("isometry {} ({defect} out of {src})", u.name),
                            residual: 0.0,
                            pass: ok,
                        });
                    }
                }
                SolveOutcome::Infeasible(cert) => {
                    // a certificate is itself a verified outcome: the affine
                    // completeness system admits no PSD solution
                    checks.push(Check {
                        name: format!(
                            "infeasibility certificate ({defect} out of {src}), min eig"
                        ),
                        residual: cert.min_eigenvalue,
                        pass: cert.min_eigenvalue < 0.0,
                    });
                }
            }
        }
    }
    Ok(checks)
}

fn cmd_verify(category: Option<&str>, tol: f64, seed: u64) -> Result<u8, Error> {
    let ids: Vec<&str> = match category {
        Some(id) => vec![id],
        None => CATALOG_IDS.to_vec(),
    };
    let mut all_pass = true;
    let mut out = String::new();
    for id in ids {
        let checks = verify_entry(id, tol, seed)?;
        let n_charges = catalog::load_with_options(id, &CatalogOptions { orbit_reps: None, seed })?
            .charges
            .len();
        out.push_str(&format!("== {id}: {n_charges} charges ==\n"));
        out.push_str(&render_checks(id, &checks, Format::Table));
        all_pass &= checks.iter().all(|c| c.pass);
    }
    out.push_str(if all_pass { "VERIFY: PASS\n" } else { "VERIFY: FAIL\n" });
    emit(&None, &out)?;
    Ok(if all_pass { 0 } else { 2 })
}

fn cmd_export(common: &Common) -> Result<u8, Error> {
    let entry = load_entry(&common.category, common.seed)?;
    let text = match &entry.category {
        Some(cat) if cat.f_symbols.is_some() => schema::category_json(cat)?,
        _ => schema::tube_json(&entry.tube)?,
    };
    emit(&common.output, &text)?;
    Ok(0)
}
