//! Command-line front end for the reduction chain: parse and emit the shared
//! file formats, run reductions, solve games exactly, verify equilibria, and
//! translate profiles back up the chain.

mod formats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use formats::*;
use gamechain_core::circuit::{check_assignment, normalize_for_reduction, validate_instance};
use gamechain_core::classes::{validate_class, GameClass};
use gamechain_core::games::{regret, BimatrixGame, MixedProfile};
use gamechain_core::pipeline::{run_chain, ReductionTrace, SIM_SCHEDULE};
use gamechain_core::rat::{format_rat, parse_rat, Rat};
use gamechain_core::sims::{self, SimKind, SimSide};
use gamechain_core::solvers::{
    lemke_howson_with_config, support_enumeration, LemkeHowsonConfig,
};
use gamechain_core::Error as CoreError;

#[derive(Parser)]
#[command(name = "gamechain", version, about = "Exact reductions between circuit fixed points and sparse win-lose games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FromStage {
    Circuit,
    Poly,
    Resbi,
    Stage1,
    Stage2,
    Stage3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StepArg {
    Gadgets,
    Poly2bimatrix,
    TypeOne,
    Dual,
    TypeTwo,
    FullChain,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Row,
    Col,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    SupportEnum,
    LemkeHowson,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Ne,
    Wsne,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural invariants of a circuit file.
    ValidateCircuit { circuit: PathBuf },
    /// Check an assignment against a circuit's gate tables.
    CheckAssignment {
        circuit: PathBuf,
        assignment: PathBuf,
    },
    /// Run a reduction step (or the full chain) and persist its trace.
    Reduce {
        /// What the input file contains.
        #[arg(long, value_enum, default_value_t = FromStage::Circuit)]
        from: FromStage,
        #[arg(long, value_enum, default_value_t = StepArg::FullChain)]
        step: StepArg,
        /// Which player's matrix a column simulation rewrites.
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        input: PathBuf,
        /// Output path for the constructed game.
        #[arg(long, default_value = "game.json")]
        out_game: PathBuf,
        /// Output path for the reduction trace.
        #[arg(long, default_value = "trace.json")]
        out_trace: PathBuf,
        /// Output path for the polymatrix game (gadgets step).
        #[arg(long, default_value = "poly.json")]
        out_poly: PathBuf,
        /// Directory for per-step intermediate games (full chain only).
        #[arg(long)]
        keep_intermediates: Option<PathBuf>,
        /// eps recorded in simulation records for later translate-backs.
        #[arg(long, default_value = "0")]
        eps: String,
    },
    /// Compute exact equilibria.
    Solve {
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Initial label for Lemke-Howson.
        #[arg(long, default_value_t = 0)]
        label: usize,
        /// Support size cap for support enumeration (defaults to the larger
        /// dimension).
        #[arg(long)]
        max_support: Option<usize>,
        game: PathBuf,
        /// Output path (default: profile.json for lemke-howson,
        /// equilibria.json for support-enum).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a profile as an eps-NE or eps-WSNE and print the regret
    /// report.
    Verify {
        /// Exact rational, e.g. 0 or 1/960.
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Wsne)]
        mode: ModeArg,
        game: PathBuf,
        profile: PathBuf,
    },
    /// Translate a profile of a constructed game back through a trace.
    TranslateBack {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value = "0")]
        eps: String,
        profile: PathBuf,
        /// Output path (default: assignment.json for full traces,
        /// translated.json otherwise).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Directory for the intermediate profiles of a full-chain
        /// translate-back.
        #[arg(long)]
        intermediates: Option<PathBuf>,
        /// Envelope constant for per-step eps inflation where only an
        /// O(n^2) bound is known; must be at least 1200.
        #[arg(long, default_value_t = 2000)]
        envelope_c: i64,
    },
    /// Validate a game against one of the chain's game classes.
    Inspect {
        /// resbi | stage1 | stage2 | stage3 | winlose3sparse
        #[arg(long)]
        class: String,
        game: PathBuf,
    },
}

/// Exit code 1: the inputs parsed but failed a validation or a theorem
/// precondition. Exit code 2: usage or parse errors.
enum Failure {
    Validation(String),
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Usage(m) => m,
        }
    }
}

fn from_core(e: CoreError) -> Failure {
    match e {
        CoreError::Dimension(_) => Failure::Usage(e.to_string()),
        _ => Failure::Validation(e.to_string()),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Usage(format!("serialization failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn parse_eps(s: &str) -> Result<Rat, Failure> {
    let eps = parse_rat(s).map_err(Failure::Usage)?;
    if eps < Rat::from_integer(0.into()) {
        return Err(Failure::Usage("eps must be nonnegative".into()));
    }
    Ok(eps)
}

fn load_game(path: &Path) -> Result<BimatrixGame, Failure> {
    read_json::<GameDto>(path)?
        .into_game()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_profile(path: &Path) -> Result<MixedProfile, Failure> {
    read_json::<ProfileDto>(path)?
        .into_profile()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::ValidateCircuit { circuit } => {
            let inst = read_json::<CircuitDto>(&circuit)?
                .into_instance()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let report = validate_instance(&inst);
            if report.passed() {
                println!("valid: {} variable(s), {} gate(s)", inst.vars.len(), inst.gates.len());
                Ok(())
            } else {
                Err(Failure::Validation(report.to_string()))
            }
        }
        Command::CheckAssignment { circuit, assignment } => {
            let inst = read_json::<CircuitDto>(&circuit)?
                .into_instance()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let asg = read_json::<AssignmentDto>(&assignment)?
                .into_assignment()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let report = check_assignment(&inst, &asg).map_err(from_core)?;
            if report.passed() {
                println!("assignment satisfies all {} gate(s)", inst.gates.len());
                Ok(())
            } else {
                Err(Failure::Validation(report.to_string()))
            }
        }
        Command::Reduce {
            from,
            step,
            side,
            input,
            out_game,
            out_trace,
            out_poly,
            keep_intermediates,
            eps,
        } => reduce(
            from,
            step,
            side,
            &input,
            &out_game,
            &out_trace,
            &out_poly,
            keep_intermediates.as_deref(),
            &parse_eps(&eps)?,
        ),
        Command::Solve {
            method,
            label,
            max_support,
            game,
            output,
        } => solve(method, label, max_support, &game, output.as_deref()),
        Command::Verify {
            eps,
            mode,
            game,
            profile,
        } => verify(&parse_eps(&eps)?, mode, &game, &profile),
        Command::TranslateBack {
            trace,
            eps,
            profile,
            output,
            intermediates,
            envelope_c,
        } => translate_back(
            &trace,
            &parse_eps(&eps)?,
            &profile,
            output.as_deref(),
            intermediates.as_deref(),
            envelope_c,
        ),
        Command::Inspect { class, game } => {
            let class = GameClass::parse(&class)
                .ok_or_else(|| Failure::Usage(format!("unknown class {class:?}")))?;
            let game = load_game(&game)?;
            let report = validate_class(&game, class);
            if report.passed() {
                println!("pass: {} game of size {}x{}", class.name(), game.rows(), game.cols());
                Ok(())
            } else {
                for v in &report.violations {
                    println!("violation at {}: {}", v.location, v.clause);
                }
                Err(Failure::Validation(format!(
                    "{} violation(s) of class {}",
                    report.violations.len(),
                    class.name()
                )))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    from: FromStage,
    step: StepArg,
    side: SideArg,
    input: &Path,
    out_game: &Path,
    out_trace: &Path,
    out_poly: &Path,
    keep_intermediates: Option<&Path>,
    eps: &Rat,
) -> Result<(), Failure> {
    match step {
        StepArg::FullChain => {
            if from != FromStage::Circuit {
                return Err(Failure::Usage("--step full-chain requires --from circuit".into()));
            }
            let inst = read_json::<CircuitDto>(input)?
                .into_instance()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let artifacts = run_chain(&inst).map_err(from_core)?;
            write_json(out_game, &GameDto::from_game(artifacts.final_game()))?;
            write_json(out_trace, &TraceDto::from_trace(&artifacts.trace))?;
            if let Some(dir) = keep_intermediates {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
                for (i, game) in artifacts.games.iter().enumerate() {
                    write_json(&dir.join(format!("game-{i:02}.json")), &GameDto::from_game(game))?;
                }
            }
            let (rows, cols) = artifacts.final_game().dims();
            println!(
                "full chain: {} -> {rows}x{cols} win-lose game ({} -> {})",
                input.display(),
                out_game.display(),
                out_trace.display(),
            );
            println!(
                "eps blow-up across the eight simulations: {}",
                format_rat(&artifacts.trace.cumulative_blowup(2000))
            );
            Ok(())
        }
        StepArg::Gadgets => {
            if from != FromStage::Circuit {
                return Err(Failure::Usage("--step gadgets requires --from circuit".into()));
            }
            let inst = read_json::<CircuitDto>(input)?
                .into_instance()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let normalized = normalize_for_reduction(&inst).map_err(from_core)?;
            let poly = gamechain_core::polymatrix::from_purecircuit(&normalized).map_err(from_core)?;
            write_json(out_poly, &PolyDto::from_poly(&poly))?;
            let trace = TraceDto {
                steps: vec![
                    StepDto::Normalize {
                        original: CircuitDto::from_instance(&inst),
                        normalized: CircuitDto::from_instance(&normalized),
                    },
                    StepDto::Gadgets {
                        poly: PolyDto::from_poly(&poly),
                    },
                ],
            };
            write_json(out_trace, &trace)?;
            println!(
                "gadgets: {} player(s), {} edge(s) -> {}",
                poly.players.len(),
                poly.edges.len(),
                out_poly.display()
            );
            Ok(())
        }
        StepArg::Poly2bimatrix => {
            if from != FromStage::Poly {
                return Err(Failure::Usage("--step poly2bimatrix requires --from poly".into()));
            }
            let poly = read_json::<PolyDto>(input)?
                .into_poly()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let (game, layout) =
                gamechain_core::poly2bimatrix::balance_and_build(&poly).map_err(from_core)?;
            write_json(out_game, &GameDto::from_game(&game))?;
            let trace = TraceDto {
                steps: vec![StepDto::Poly2bimatrix {
                    layout: LayoutDto::from_layout(&layout),
                }],
            };
            write_json(out_trace, &trace)?;
            println!(
                "poly2bimatrix: {}x{} game -> {}",
                game.rows(),
                game.cols(),
                out_game.display()
            );
            Ok(())
        }
        StepArg::TypeOne | StepArg::Dual | StepArg::TypeTwo => {
            if !matches!(
                from,
                FromStage::Resbi | FromStage::Stage1 | FromStage::Stage2 | FromStage::Stage3
            ) {
                return Err(Failure::Usage(
                    "column simulations take a game input (--from resbi|stage1|stage2|stage3)".into(),
                ));
            }
            let kind = match step {
                StepArg::TypeOne => SimKind::TypeOne,
                StepArg::Dual => SimKind::Dual,
                StepArg::TypeTwo => SimKind::TypeTwo,
                _ => unreachable!(),
            };
            let sides: &[SimSide] = match side {
                SideArg::Row => &[SimSide::Row],
                SideArg::Col => &[SimSide::Column],
                SideArg::Both => &[SimSide::Row, SimSide::Column],
            };
            let mut game = load_game(input)?;
            let mut steps = Vec::new();
            for s in sides {
                let (next, record) = sims::apply(kind, *s, &game, eps).map_err(from_core)?;
                steps.push(StepDto::Simulation {
                    sim: SimDto::from_record(&record),
                });
                game = next;
            }
            write_json(out_game, &GameDto::from_game(&game))?;
            write_json(out_trace, &TraceDto { steps })?;
            println!(
                "{}: {} side(s) -> {}x{} game ({})",
                kind.name(),
                sides.len(),
                game.rows(),
                game.cols(),
                out_game.display()
            );
            Ok(())
        }
    }
}

fn solve(
    method: MethodArg,
    label: usize,
    max_support: Option<usize>,
    game_path: &Path,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let game = load_game(game_path)?;
    match method {
        MethodArg::LemkeHowson => {
            let mut config = LemkeHowsonConfig::default();
            if let Ok(v) = std::env::var("HF_MAX_PIVOTS") {
                config.max_pivots = v
                    .parse()
                    .map_err(|_| Failure::Usage(format!("HF_MAX_PIVOTS={v} is not an integer")))?;
            }
            let result = lemke_howson_with_config(&game, label, &config).map_err(from_core)?;
            let out = output.unwrap_or(Path::new("profile.json"));
            write_json(out, &ProfileDto::from_profile(&result.equilibria[0]))?;
            println!(
                "lemke-howson: exact equilibrium in {} pivot(s) (shift {}) -> {}",
                result.stats.pivots,
                result.stats.shift.map(|s| format_rat(&s)).unwrap_or_default(),
                out.display()
            );
            Ok(())
        }
        MethodArg::SupportEnum => {
            let cap = max_support.unwrap_or_else(|| game.rows().max(game.cols()));
            let result = support_enumeration(&game, cap).map_err(from_core)?;
            let out = output.unwrap_or(Path::new("equilibria.json"));
            write_json(
                out,
                &EquilibriaDto {
                    equilibria: result
                        .equilibria
                        .iter()
                        .map(ProfileDto::from_profile)
                        .collect(),
                },
            )?;
            println!(
                "support-enum: {} equilibrium/equilibria over {} support pair(s) -> {}",
                result.equilibria.len(),
                result.stats.supports_examined,
                out.display()
            );
            Ok(())
        }
    }
}

fn verify(eps: &Rat, mode: ModeArg, game_path: &Path, profile_path: &Path) -> Result<(), Failure> {
    let game = load_game(game_path)?;
    let profile = load_profile(profile_path)?;
    let report = regret(&game, &profile).map_err(from_core)?;
    println!("row best response payoff:    {}", format_rat(&report.row_best));
    println!("row supported minimum:       {}", format_rat(&report.row_supported_min));
    println!("column best response payoff: {}", format_rat(&report.col_best));
    println!("column supported minimum:    {}", format_rat(&report.col_supported_min));
    println!("wsne_eps: {}", format_rat(&report.wsne_eps));
    println!("ne_eps:   {}", format_rat(&report.ne_eps));
    let actual = match mode {
        ModeArg::Wsne => &report.wsne_eps,
        ModeArg::Ne => &report.ne_eps,
    };
    if actual <= eps {
        println!("PASS: profile is within eps = {}", format_rat(eps));
        Ok(())
    } else {
        Err(Failure::Validation(format!(
            "profile exceeds eps = {}: actual {}",
            format_rat(eps),
            format_rat(actual)
        )))
    }
}

/// Partial traces must still respect the canonical simulation order (their
/// steps must be a subsequence of the eight-step schedule) and chain their
/// dimensions.
fn validate_partial_sims(records: &[gamechain_core::sims::SimulationRecord]) -> Result<(), Failure> {
    let mut schedule = SIM_SCHEDULE.iter();
    let mut prev_out: Option<(usize, usize)> = None;
    for record in records {
        if !schedule.any(|&(kind, side)| kind == record.kind && side == record.side) {
            return Err(Failure::Validation(
                "simulation steps do not follow the canonical type-one/dual/type-two order".into(),
            ));
        }
        if let Some(dims) = prev_out {
            if record.game_input_dims() != dims {
                return Err(Failure::Validation(format!(
                    "simulation steps do not chain: {:?} consumed after a game of {:?}",
                    record.game_input_dims(),
                    dims
                )));
            }
        }
        prev_out = Some(record.game_output_dims());
    }
    Ok(())
}

fn translate_back(
    trace_path: &Path,
    eps: &Rat,
    profile_path: &Path,
    output: Option<&Path>,
    intermediates: Option<&Path>,
    envelope_c: i64,
) -> Result<(), Failure> {
    if envelope_c < 1200 {
        return Err(Failure::Usage(
            "--envelope-c must be at least the explicit dual constant 1200".into(),
        ));
    }
    let dto = read_json::<TraceDto>(trace_path)?;
    let is_full = dto.steps.len() == 3 + SIM_SCHEDULE.len()
        && matches!(dto.steps.first(), Some(StepDto::Normalize { .. }));
    if is_full {
        let trace: ReductionTrace = dto
            .into_trace()
            .map_err(|e| Failure::Usage(format!("{}: {e}", trace_path.display())))?;
        let profile = load_profile(profile_path)?;
        let config = gamechain_core::pipeline::PipelineConfig { envelope_c };
        let back =
            gamechain_core::pipeline::compose_back_translation_with_config(
                &trace, &profile, eps, &config,
            )
            .map_err(from_core)?;
        let out = output.unwrap_or(Path::new("assignment.json"));
        write_json(out, &AssignmentDto::from_assignment(&back.assignment))?;
        if let Some(dir) = intermediates {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
            for (i, p) in back.profiles.iter().enumerate() {
                write_json(&dir.join(format!("profile-{i:02}.json")), &ProfileDto::from_profile(p))?;
            }
            write_json(
                &dir.join("poly-profile.json"),
                &PolyProfileDto::from_profile(&back.poly_profile),
            )?;
        }
        println!(
            "translate-back: delta = {}, assignment -> {}",
            format_rat(&back.delta),
            out.display()
        );
        return Ok(());
    }

    // Partial traces: walk whatever steps are present, in reverse.
    let mut steps = dto.steps;
    {
        let mut records = Vec::new();
        for step in &steps {
            if let StepDto::Simulation { sim } = step {
                records.push(
                    sim.clone()
                        .into_record()
                        .map_err(|e| Failure::Usage(e.to_string()))?,
                );
            }
        }
        validate_partial_sims(&records)?;
    }
    steps.reverse();
    let mut current_eps = eps.clone();
    let mut profile: Option<MixedProfile> = None;
    let mut outcome: Option<(String, serde_json::Value)> = None;
    for step in steps {
        match step {
            StepDto::Simulation { sim } => {
                let record = sim
                    .into_record()
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                let p = match profile.take() {
                    Some(p) => p,
                    None => load_profile(profile_path)?,
                };
                let bound = record.regime_bound();
                if current_eps >= bound {
                    return Err(Failure::Validation(format!(
                        "eps = {} is not below the {} regime bound {}",
                        format_rat(&current_eps),
                        record.kind.name(),
                        format_rat(&bound)
                    )));
                }
                let adjusted = record.with_eps(current_eps.clone());
                let translated =
                    sims::translate_back(&adjusted, &p, &current_eps).map_err(from_core)?;
                current_eps = record.inflation(envelope_c) * &current_eps;
                profile = Some(translated);
            }
            StepDto::Poly2bimatrix { layout } => {
                let layout = layout
                    .into_layout()
                    .map_err(|e| Failure::Usage(e.to_string()))?;
                let p = match profile.take() {
                    Some(p) => p,
                    None => load_profile(profile_path)?,
                };
                let (poly_profile, delta) =
                    gamechain_core::poly2bimatrix::translate_back(&layout, &p, &current_eps)
                        .map_err(from_core)?;
                current_eps = delta;
                outcome = Some((
                    "poly profile".into(),
                    serde_json::to_value(PolyProfileDto::from_profile(&poly_profile)).unwrap(),
                ));
            }
            StepDto::Gadgets { .. } | StepDto::Normalize { .. } => {
                return Err(Failure::Usage(
                    "translating back through gadget traces requires the full chain trace".into(),
                ));
            }
        }
    }
    let (what, value) = match (outcome, profile) {
        (Some(o), _) => o,
        (None, Some(p)) => (
            "profile".into(),
            serde_json::to_value(ProfileDto::from_profile(&p)).unwrap(),
        ),
        (None, None) => return Err(Failure::Usage("trace contains no translatable steps".into())),
    };
    let out = output.unwrap_or(Path::new("translated.json"));
    let mut text = serde_json::to_string_pretty(&value).unwrap();
    text.push('\n');
    std::fs::write(out, text)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
    println!(
        "translate-back: {what} at eps = {} -> {}",
        format_rat(&current_eps),
        out.display()
    );
    Ok(())
}
