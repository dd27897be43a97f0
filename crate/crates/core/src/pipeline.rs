//! The full reduction chain and its inverse on equilibria.
//!
//! Forward: circuit -> normalized circuit -> restricted polymatrix game ->
//! balanced game -> {0,1,2,8}-valued bimatrix game -> eight column
//! simulations (type one row/col twice, dual row/col, type two row/col) ->
//! 3-sparse win-lose game. Every boundary is checked by the matching class
//! validator; a failure there is an implementation bug surfaced as
//! [`Error::Stage`].
//!
//! Backward: [`compose_back_translation`] walks the simulations in reverse,
//! inflating eps per step (the explicit 1200 n^2 for dual steps, a
//! conservative envelope c n^2 otherwise), then projects through the
//! bimatrix-to-polymatrix map and reads off a circuit assignment.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::circuit::{normalize_for_reduction, validate_instance, Assignment, PureCircuitInstance};
use crate::classes::{validate_class, GameClass};
use crate::error::Error;
use crate::games::{BimatrixGame, MixedProfile};
use crate::poly2bimatrix::{balance_bipartition, build, Poly2BimatrixLayout};
use crate::polymatrix::{from_purecircuit, PolymatrixProfile, RestrictedPolymatrixGame};
use crate::rat::{ratio, Rat};
use crate::sims::{self, SimKind, SimSide, SimulationRecord};

/// Canonical order of the eight simulation steps.
pub const SIM_SCHEDULE: [(SimKind, SimSide); 8] = [
    (SimKind::TypeOne, SimSide::Row),
    (SimKind::TypeOne, SimSide::Column),
    (SimKind::TypeOne, SimSide::Row),
    (SimKind::TypeOne, SimSide::Column),
    (SimKind::Dual, SimSide::Row),
    (SimKind::Dual, SimSide::Column),
    (SimKind::TypeTwo, SimSide::Row),
    (SimKind::TypeTwo, SimSide::Column),
];

/// Class each game must satisfy after the corresponding simulation pair.
fn stage_after_sim(step: usize) -> Option<GameClass> {
    match step {
        1 => Some(GameClass::Stage1),
        3 => Some(GameClass::Stage2),
        5 => Some(GameClass::Stage3),
        7 => Some(GameClass::WinLose3Sparse),
        _ => None,
    }
}

/// Everything needed to undo the chain, plus the instances and games the
/// back-translation verifies against. Simulation records appear in forward
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub original: PureCircuitInstance,
    pub normalized: PureCircuitInstance,
    pub poly: RestrictedPolymatrixGame,
    pub layout: Poly2BimatrixLayout,
    pub sims: Vec<SimulationRecord>,
}

impl ReductionTrace {
    /// Structural invariants: the simulation steps follow the canonical
    /// schedule (for an eight-step trace) and their dimensions chain.
    pub fn validate(&self) -> Result<(), Error> {
        if self.sims.len() > 1 {
            if self.sims.len() != SIM_SCHEDULE.len() {
                return Err(Error::Validation(alloc::format!(
                    "expected {} simulation steps, found {}",
                    SIM_SCHEDULE.len(),
                    self.sims.len()
                )));
            }
            for (i, record) in self.sims.iter().enumerate() {
                let (kind, side) = SIM_SCHEDULE[i];
                if record.kind != kind || record.side != side {
                    return Err(Error::Validation(alloc::format!(
                        "simulation step {i} is {} {:?}, schedule requires {} {:?}",
                        record.kind.name(),
                        record.side,
                        kind.name(),
                        side
                    )));
                }
            }
        }
        let mut dims = (self.layout.m, self.layout.m);
        for (i, record) in self.sims.iter().enumerate() {
            if record.game_input_dims() != dims {
                return Err(Error::Validation(alloc::format!(
                    "step {i} consumes {:?} but the previous game is {:?}",
                    record.game_input_dims(),
                    dims
                )));
            }
            dims = record.game_output_dims();
        }
        Ok(())
    }

    pub fn final_dims(&self) -> (usize, usize) {
        self.sims
            .last()
            .map(|r| r.game_output_dims())
            .unwrap_or((self.layout.m, self.layout.m))
    }

    /// Product of the per-step eps inflation factors.
    pub fn cumulative_blowup(&self, envelope_c: i64) -> Rat {
        self.sims
            .iter()
            .map(|r| r.inflation(envelope_c))
            .fold(Rat::from_integer(1.into()), |acc, f| acc * f)
    }
}

/// The chain's in-memory output: the trace plus every game along the way
/// (`games[0]` is the {0,1,2,8}-valued game, `games[8]` the final win-lose
/// game).
#[derive(Debug, Clone)]
pub struct ChainArtifacts {
    pub trace: ReductionTrace,
    pub games: Vec<BimatrixGame>,
}

impl ChainArtifacts {
    pub fn final_game(&self) -> &BimatrixGame {
        self.games.last().expect("chain has at least one game")
    }
}

/// Runs the full forward chain. Every intermediate game is validated
/// against its class at the designated point.
pub fn run_chain(inst: &PureCircuitInstance) -> Result<ChainArtifacts, Error> {
    let validation = validate_instance(inst);
    if !validation.passed() {
        return Err(Error::InvalidInstance(validation));
    }
    let normalized = normalize_for_reduction(inst)?;
    let poly = from_purecircuit(&normalized)?;
    let original_players = poly.players.len();
    let (padded, padding) = balance_bipartition(&poly)?;
    let (resbi, layout) = build(&padded, padding, original_players)?;
    let check = validate_class(&resbi, GameClass::ResBi);
    if !check.passed() {
        return Err(Error::Stage(0, check));
    }

    let mut games = alloc::vec![resbi];
    let mut records = Vec::with_capacity(SIM_SCHEDULE.len());
    for (step, (kind, side)) in SIM_SCHEDULE.iter().enumerate() {
        let (next, record) = sims::apply(*kind, *side, games.last().unwrap(), &Rat::zero())?;
        if let Some(class) = stage_after_sim(step) {
            let check = validate_class(&next, class);
            if !check.passed() {
                return Err(Error::Stage(step + 1, check));
            }
        }
        records.push(record);
        games.push(next);
    }

    let trace = ReductionTrace {
        original: inst.clone(),
        normalized,
        poly,
        layout,
        sims: records,
    };
    trace.validate()?;
    Ok(ChainArtifacts { trace, games })
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Envelope constant for the steps whose translated regret is only known
    /// to be O(n^2 eps); must dominate the explicit dual constant 1200.
    pub envelope_c: i64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { envelope_c: 2000 }
    }
}

/// Result of a composed back-translation.
#[derive(Debug, Clone)]
pub struct BackTranslation {
    /// Satisfying assignment of the original instance.
    pub assignment: Assignment,
    /// Assignment of the normalized instance (includes inserted variables).
    pub normalized_assignment: Assignment,
    /// Profile of the (unpadded) polymatrix game.
    pub poly_profile: PolymatrixProfile,
    /// WSNE guarantee of the polymatrix profile.
    pub delta: Rat,
    /// Profile of each chain game, `profiles[i]` for `games[i]`; the last
    /// entry is the input profile of the final game.
    pub profiles: Vec<MixedProfile>,
    /// eps at each chain game under the per-step inflation, aligned with
    /// `profiles`.
    pub step_eps: Vec<Rat>,
}

pub fn compose_back_translation(
    trace: &ReductionTrace,
    profile: &MixedProfile,
    eps: &Rat,
) -> Result<BackTranslation, Error> {
    compose_back_translation_with_config(trace, profile, eps, &PipelineConfig::default())
}

pub fn compose_back_translation_with_config(
    trace: &ReductionTrace,
    profile: &MixedProfile,
    eps: &Rat,
    config: &PipelineConfig,
) -> Result<BackTranslation, Error> {
    trace.validate()?;
    if eps < &Rat::zero() {
        return Err(Error::Precondition("eps must be nonnegative".into()));
    }
    if config.envelope_c < 1200 {
        return Err(Error::Precondition(
            "envelope constant must dominate the explicit dual constant 1200".into(),
        ));
    }

    let mut profiles = alloc::vec![profile.clone()];
    let mut step_eps = alloc::vec![eps.clone()];
    let mut current = profile.clone();
    let mut current_eps = eps.clone();
    for (idx, record) in trace.sims.iter().enumerate().rev() {
        let step = idx + 1; // 1-based over the simulation schedule
        if current_eps >= record.regime_bound() {
            return Err(Error::Threshold(alloc::format!(
                "step {step} ({} {:?}): eps = {current_eps} is not below the regime bound {}",
                record.kind.name(),
                record.side,
                record.regime_bound()
            )));
        }
        let adjusted = record.with_eps(current_eps.clone());
        current = sims::translate_back(&adjusted, &current, &current_eps).map_err(|e| match e {
            Error::ZeroMass => Error::Precondition(alloc::format!(
                "step {step}: translate-back renormalization had zero mass; the profile is not an eps-WSNE of this step's game"
            )),
            other => other,
        })?;
        current_eps = record.inflation(config.envelope_c) * &current_eps;
        profiles.push(current.clone());
        step_eps.push(current_eps.clone());
    }
    profiles.reverse();
    step_eps.reverse();

    let (poly_profile, delta) =
        crate::poly2bimatrix::translate_back(&trace.layout, &current, &current_eps)?;
    let half = ratio(1, 2);
    if delta >= half {
        return Err(Error::Threshold(alloc::format!(
            "polymatrix guarantee delta = {delta} is not below 1/2"
        )));
    }
    let normalized_assignment = crate::polymatrix::assignment_from_wsne(
        &trace.normalized,
        &trace.poly,
        &poly_profile,
        &delta,
    )?;
    let assignment = normalized_assignment.restricted_to(&trace.original);
    let check = crate::circuit::check_assignment(&trace.original, &assignment)?;
    if !check.passed() {
        return Err(Error::Invariant(alloc::format!(
            "restricted assignment fails the original instance: {check}"
        )));
    }
    Ok(BackTranslation {
        assignment,
        normalized_assignment,
        poly_profile,
        delta,
        profiles,
        step_eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::not_cycle;

    #[test]
    fn chain_on_not_cycle_reaches_winlose() {
        let artifacts = run_chain(&not_cycle()).unwrap();
        assert_eq!(artifacts.games.len(), 9);
        let final_game = artifacts.final_game();
        let report = validate_class(final_game, GameClass::WinLose3Sparse);
        assert!(report.passed(), "{report}");
        assert_eq!(artifacts.trace.final_dims(), final_game.dims());
    }

    #[test]
    fn trace_rejects_out_of_order_sims() {
        let artifacts = run_chain(&not_cycle()).unwrap();
        let mut trace = artifacts.trace.clone();
        trace.sims.swap(0, 4);
        assert!(matches!(trace.validate(), Err(Error::Validation(_))));
    }

    #[test]
    fn compose_rejects_huge_eps() {
        let artifacts = run_chain(&not_cycle()).unwrap();
        let m = artifacts.final_game().rows();
        let uniform_x = alloc::vec![ratio(1, m as i64); m];
        let n = artifacts.final_game().cols();
        let uniform_y = alloc::vec![ratio(1, n as i64); n];
        let profile = MixedProfile::new(uniform_x, uniform_y).unwrap();
        let err = compose_back_translation(&artifacts.trace, &profile, &ratio(1, 2));
        match err {
            Err(Error::Threshold(msg)) => assert!(msg.contains("step 8"), "{msg}"),
            other => panic!("expected a threshold error, got {other:?}"),
        }
    }
}
