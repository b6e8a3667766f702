use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rydwire::atom_model::to_mhz;
use rydwire::fidelity::{chain_strengths, distance_sweep, error_budget};
use rydwire::gatelib::{
    catalog, compare_to_target, data_subspace_unitary, gate_by_name, verify_gate, GateParams,
    GateSpec, VerificationReport,
};
use rydwire::pulse::sequence_propagate;
use rydwire::schedule::{round_sig12, ScheduleDocument};
use rydwire::{build_interaction_graph, Error, PhysicalParams, PropagationModel, Scheme};

#[derive(Parser)]
#[command(
    name = "rydwire",
    version,
    about = "Rydberg wire-atom gate compiler and simulator"
)]
struct Cli {
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PhysicsArgs {
    /// Rabi frequency Ω/2π in MHz [default: 2]
    #[arg(long, global = true)]
    omega_mhz: Option<f64>,
    /// |C6|/2π in GHz·μm⁶ [default: 732]
    #[arg(long, global = true)]
    c6_ghz: Option<f64>,
    /// C3/2π in GHz·μm³ [default: 12.32]
    #[arg(long, global = true)]
    c3_ghz: Option<f64>,
    /// Rydberg lifetime in μs [default: 141, derived]
    #[arg(long, global = true, alias = "tau")]
    tau_us: Option<f64>,
}

#[derive(Args, Clone, Copy)]
struct GateArgs {
    /// Phase α of Ph and the CP family, rad
    #[arg(long, default_value_t = PI)]
    alpha: f64,
    /// Rotation angle of R and the pair rotations, rad
    #[arg(long, default_value_t = FRAC_PI_2)]
    theta: f64,
    /// Phase of P, and rotation axis of R and the pair rotations, rad
    #[arg(long, default_value_t = FRAC_PI_4)]
    phi: f64,
}

impl From<GateArgs> for GateParams {
    fn from(a: GateArgs) -> Self {
        GateParams {
            alpha: a.alpha,
            theta: a.theta,
            phi: a.phi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Ideal,
    Realistic,
}

#[derive(Subcommand)]
enum Command {
    /// Check catalog sequences against their target unitaries
    Verify {
        /// Gate name, or "all"
        gate: String,
        #[command(flatten)]
        gate_args: GateArgs,
    },
    /// Write the pulse schedule of a gate
    Compile {
        gate: String,
        /// Lattice constant, μm
        #[arg(long, default_value_t = 7.0)]
        d: f64,
        /// Output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        gate_args: GateArgs,
    },
    /// CP00(π) fidelity against lattice constant, as CSV
    Sweep {
        #[arg(value_parser = parse_scheme)]
        scheme: Scheme,
        d_min: f64,
        d_max: f64,
        #[arg(default_value_t = 100)]
        steps: usize,
        /// Output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic error budget at one lattice constant
    Budget {
        d: f64,
        #[arg(value_parser = parse_scheme, default_value = "vdw")]
        scheme: Scheme,
    },
    /// Propagate every data basis state through a schedule file
    Simulate {
        schedule: PathBuf,
        #[arg(long, value_enum, default_value = "ideal")]
        model: ModelArg,
        /// Override the lattice constant of the document, μm
        #[arg(long)]
        d: Option<f64>,
        /// Override the interaction scheme of the document
        #[arg(long, value_parser = parse_scheme)]
        scheme: Option<Scheme>,
    },
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    /// Verification ran but did not pass.
    Verification,
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { gate, gate_args } => cmd_verify(&gate, gate_args.into()),
        Command::Compile {
            gate,
            d,
            out,
            gate_args,
        } => physics(&cli.physics, Scheme::VdW)
            .and_then(|p| cmd_compile(&gate, d, out.as_deref(), gate_args.into(), &p)),
        Command::Sweep {
            scheme,
            d_min,
            d_max,
            steps,
            out,
        } => physics(&cli.physics, scheme)
            .and_then(|p| cmd_sweep(d_min, d_max, steps, &p, out.as_deref())),
        Command::Budget { d, scheme } => cmd_budget(d, scheme, &cli.physics),
        Command::Simulate {
            schedule,
            model,
            d,
            scheme,
        } => cmd_simulate(&schedule, model, d, scheme, &cli.physics),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn physics(args: &PhysicsArgs, scheme: Scheme) -> Result<PhysicalParams, Failure> {
    Ok(PhysicalParams::from_lab_units(
        args.omega_mhz.unwrap_or(PhysicalParams::DEFAULT_OMEGA_MHZ),
        args.c6_ghz.unwrap_or(PhysicalParams::DEFAULT_C6_GHZ),
        args.c3_ghz.unwrap_or(PhysicalParams::DEFAULT_C3_GHZ),
        args.tau_us.unwrap_or(PhysicalParams::DEFAULT_TAU_US),
        scheme,
    )?)
}

fn write_output(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn resolve(name: &str, params: &GateParams) -> Result<GateSpec, Failure> {
    Ok(GateSpec::new(
        name.to_ascii_lowercase(),
        gate_by_name(name, params)?,
    )?)
}

fn print_reports(reports: &[(usize, VerificationReport)]) {
    println!(
        "{:<14} {:>6} {:>11} {:>13} {:>11}  result",
        "gate", "pulses", "deviation", "global_phase", "leakage"
    );
    for (pulses, r) in reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "{:<14} {:>6} {:>11.3e} {:>13.6} {:>11.3e}  {status}",
            r.gate, pulses, r.deviation, r.extracted_global_phase, r.wire_return_defect
        );
        if let Some(e) = &r.error {
            println!("  {e}");
        }
    }
}

fn cmd_verify(gate: &str, params: GateParams) -> CmdResult {
    let specs = if gate.eq_ignore_ascii_case("all") {
        catalog(&params)?
    } else {
        vec![resolve(gate, &params)?]
    };
    let reports: Vec<_> = specs
        .iter()
        .map(|s| (s.sequence.len(), verify_gate(s)))
        .collect();
    print_reports(&reports);
    let failed = reports.iter().filter(|(_, r)| !r.pass).count();
    println!("{} of {} passed", reports.len() - failed, reports.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_compile(
    gate: &str,
    d: f64,
    out: Option<&Path>,
    gp: GateParams,
    params: &PhysicalParams,
) -> CmdResult {
    let spec = resolve(gate, &gp)?;
    let duration = spec.sequence.total_duration(params.omega);
    let doc = ScheduleDocument::new(spec.layout, d, &spec.sequence)
        .with_metadata("gate", spec.name.as_str())
        .with_metadata("alpha_rad", round_sig12(gp.alpha).to_string())
        .with_metadata("theta_rad", round_sig12(gp.theta).to_string())
        .with_metadata("phi_rad", round_sig12(gp.phi).to_string())
        .with_metadata("pulse_count", spec.sequence.len().to_string())
        .with_metadata("omega_mhz", round_sig12(to_mhz(params.omega)).to_string())
        .with_metadata("total_duration_us", round_sig12(duration).to_string());
    // validates d and labels before anything is written
    doc.array()?;
    write_output(out, &doc.to_toml_string()?)?;
    if let Some(path) = out {
        println!(
            "{}: {} pulses on {}, {:.6} us at Omega = 2pi x {} MHz -> {}",
            spec.name,
            spec.sequence.len(),
            spec.layout,
            duration,
            to_mhz(params.omega),
            path.display()
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRecord {
    d_um: f64,
    #[serde(rename = "v_wire_data_radMHz")]
    v_wire_data: f64,
    #[serde(rename = "v_data_data_radMHz")]
    v_data_data: f64,
    f_overlap_avg: f64,
    f_gate_avg: f64,
    f_total_with_decay: f64,
    err_decay: f64,
    err_blockade: f64,
    err_residual: f64,
}

fn param_comments(params: &PhysicalParams) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# scheme = {}", params.scheme);
    let _ = writeln!(s, "# omega_mhz = {}", round_sig12(to_mhz(params.omega)));
    let _ = writeln!(s, "# c6_ghz_um6 = {}", round_sig12(to_mhz(params.c6) / 1e3));
    let _ = writeln!(s, "# c3_ghz_um3 = {}", round_sig12(to_mhz(params.c3) / 1e3));
    let _ = writeln!(s, "# tau_us = {}", params.tau);
    s
}

fn cmd_sweep(
    d_min: f64,
    d_max: f64,
    steps: usize,
    params: &PhysicalParams,
    out: Option<&Path>,
) -> CmdResult {
    let table = distance_sweep(d_min, d_max, steps, params)?;
    let mut text =
        String::from("# rydwire sweep: CP00(pi) on chain3, interaction strengths in rad/us\n");
    text.push_str(&param_comments(params));
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &table.rows {
        let r = &row.result;
        w.serialize(SweepRecord {
            d_um: row.d,
            v_wire_data: row.v_wire_data,
            v_data_data: row.v_data_data,
            f_overlap_avg: r.avg_overlap_fidelity,
            f_gate_avg: r.avg_gate_fidelity,
            f_total_with_decay: r.total_with_decay,
            err_decay: r.budget.decay,
            err_blockade: r.budget.blockade,
            err_residual: r.budget.residual,
        })
        .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    text.push_str(&String::from_utf8_lossy(&body));
    write_output(out, &text)?;
    if out.is_some() {
        let peak = table.peak();
        println!(
            "{} rows; peak f_total_with_decay = {:.4} at d = {:.3} um",
            table.rows.len(),
            peak.result.total_with_decay,
            peak.d
        );
    }
    Ok(())
}

fn provenance(given: Option<f64>) -> &'static str {
    if given.is_some() {
        "user"
    } else {
        "default"
    }
}

fn cmd_budget(d: f64, scheme: Scheme, args: &PhysicsArgs) -> CmdResult {
    let params = physics(args, scheme)?;
    let b = error_budget(&params, d)?;
    let (v, v2) = chain_strengths(&params, d)?;
    println!("lattice constant   {d} um");
    println!("scheme             {scheme}");
    println!(
        "V wire-data        {:.6e} rad/us (2pi x {:.4} MHz)",
        v,
        to_mhz(v)
    );
    println!(
        "V data-data        {:.6e} rad/us (2pi x {:.4} MHz)",
        v2,
        to_mhz(v2)
    );
    println!();
    println!("decay              {:.4e}", b.decay);
    println!("blockade           {:.4e}", b.blockade);
    println!("residual           {:.4e}", b.residual);
    println!("sum                {:.4e}", b.total());
    println!("1 - sum            {:.4}", 1.0 - b.total());
    println!();
    println!("parameters");
    println!(
        "  Omega  2pi x {} MHz ({})",
        round_sig12(to_mhz(params.omega)),
        provenance(args.omega_mhz)
    );
    println!(
        "  C6     2pi x {} GHz um^6 ({})",
        round_sig12(to_mhz(params.c6) / 1e3),
        provenance(args.c6_ghz)
    );
    println!(
        "  C3     2pi x {} GHz um^3 ({})",
        round_sig12(to_mhz(params.c3) / 1e3),
        provenance(args.c3_ghz)
    );
    match args.tau_us {
        Some(_) => println!("  tau    {} us (user)", params.tau),
        None => println!(
            "  tau    {} us (default, derived: chosen so the decay term is about 4e-3, not a measured lifetime)",
            params.tau
        ),
    }
    Ok(())
}

fn basis_label(k: usize, n: usize) -> String {
    format!("|{:0width$b}>", k, width = n)
}

fn cmd_simulate(
    path: &Path,
    model: ModelArg,
    d: Option<f64>,
    scheme: Option<Scheme>,
    args: &PhysicsArgs,
) -> CmdResult {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut doc = ScheduleDocument::from_toml_str(&text)?;
    if let Some(d) = d {
        doc.layout.d_um = d;
    }
    let scheme = scheme.unwrap_or_else(|| doc.scheme());
    let params = physics(args, scheme)?;
    let array = doc.array()?;
    let seq = doc.sequence()?;
    let graph = build_interaction_graph(&array, &params)?;
    let model = match model {
        ModelArg::Ideal => PropagationModel::Ideal,
        ModelArg::Realistic => PropagationModel::Realistic,
    };
    let u = sequence_propagate(&seq, model, &array, &graph, &params)?;
    let (block, _) = data_subspace_unitary(&u, &array)?;

    let n = array.data_indices().len();
    let k = block.nrows();
    let model_name = match model {
        PropagationModel::Ideal => "ideal",
        PropagationModel::Realistic => "realistic",
    };
    println!(
        "# layout {}, d = {} um, {} pulses, model {model_name}, scheme {scheme}, Omega = 2pi x {} MHz",
        doc.layout.name,
        doc.layout.d_um,
        seq.len(),
        to_mhz(params.omega)
    );
    let mut header = format!("{:<8}", "input");
    for j in 0..k {
        let _ = write!(header, " {:>24}", basis_label(j, n));
    }
    let _ = write!(header, " {:>11}", "leakage");
    println!("{header}");
    for col in 0..k {
        let mut line = format!("{:<8}", basis_label(col, n));
        for row in 0..k {
            let z = block[(row, col)];
            let _ = write!(line, " {:>+11.8}{:>+11.8}i ", z.re, z.im);
        }
        let leak = 1.0 - block.column(col).norm_squared();
        let _ = write!(line, " {:>11.3e}", leak.max(0.0));
        println!("{line}");
    }

    if let Some(gate) = doc.metadata.get("gate") {
        let meta = |key: &str, default: f64| {
            doc.metadata
                .get(key)
                .and_then(|v| v.parse().ok())
                .unwrap_or(default)
        };
        let gp = GateParams {
            alpha: meta("alpha_rad", PI),
            theta: meta("theta_rad", FRAC_PI_2),
            phi: meta("phi_rad", FRAC_PI_4),
        };
        if let Ok(g) = gate_by_name(gate, &gp) {
            let target = g.target_unitary();
            if target.shape() == block.shape() {
                let leakage = block
                    .column_iter()
                    .map(|c| 1.0 - c.norm_squared())
                    .fold(0.0_f64, f64::max);
                let r = compare_to_target(gate, &block, leakage, &target);
                println!(
                    "target {gate}: deviation {:e}, global phase {:.9}, leakage {:e}",
                    r.deviation, r.extracted_global_phase, r.wire_return_defect
                );
            }
        }
    }
    Ok(())
}
