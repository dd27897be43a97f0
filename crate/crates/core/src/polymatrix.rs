//! The restricted polymatrix game model: two actions per player, payoffs in
//! {0,1,2}, diagonal or anti-diagonal edge matrices, bipartite interaction
//! graph, and in/out-degree at most two. Includes the circuit-to-game gadget
//! reduction and extraction of assignments from well-supported equilibria.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::circuit::{bipartition, check_assignment, validate_instance, Assignment, Gate,
                     PureCircuitInstance};
use crate::error::Error;
use crate::rat::{int, ratio, Rat};
use crate::report::{Location, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

/// 2x2 edge payoff matrix; `e[own_action][other_action]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMatrix {
    pub e: [[Rat; 2]; 2],
}

impl EdgeMatrix {
    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        EdgeMatrix {
            e: [
                [int(m[0][0]), int(m[0][1])],
                [int(m[1][0]), int(m[1][1])],
            ],
        }
    }

    pub fn identity() -> Self {
        EdgeMatrix::from_ints([[1, 0], [0, 1]])
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(Rat::is_zero)
    }

    fn is_diagonal(&self) -> bool {
        self.e[0][1].is_zero() && self.e[1][0].is_zero()
    }

    fn is_anti_diagonal(&self) -> bool {
        self.e[0][0].is_zero() && self.e[1][1].is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyPlayer {
    pub name: String,
    pub side: Side,
}

/// Bipartite two-action polymatrix game. Edge keys are `(to, from)`: the
/// matrix pays player `to` based on `from`'s action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedPolymatrixGame {
    pub players: Vec<PolyPlayer>,
    pub edges: BTreeMap<(usize, usize), EdgeMatrix>,
}

impl RestrictedPolymatrixGame {
    pub fn side_players(&self, side: Side) -> Vec<usize> {
        self.players
            .iter()
            .enumerate()
            .filter(|(_, p)| p.side == side)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Per-player probability of playing action 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolymatrixProfile(pub Vec<Rat>);

impl PolymatrixProfile {
    pub fn new(values: Vec<Rat>) -> Result<Self, Error> {
        for v in &values {
            if v < &Rat::zero() || v > &Rat::one() {
                return Err(Error::NotDistribution(format!(
                    "action-1 probability {v} outside [0,1]"
                )));
            }
        }
        Ok(PolymatrixProfile(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Checks every invariant of the restricted class, reporting each separately.
pub fn validate_restricted(g: &RestrictedPolymatrixGame) -> ValidationReport {
    let mut report = ValidationReport::new();
    let n = g.players.len();
    let two = int(2);
    for (&(to, from), m) in &g.edges {
        if to >= n || from >= n {
            report.push(Location::Edge(to, from), "player index out of range");
            continue;
        }
        if to == from {
            report.push(Location::Edge(to, from), "self edge");
            continue;
        }
        if m.is_zero() {
            continue;
        }
        for v in m.e.iter().flatten() {
            if *v != Rat::zero() && *v != Rat::one() && *v != two {
                report.push(
                    Location::Edge(to, from),
                    format!("payoff {v} outside {{0,1,2}}"),
                );
            }
        }
        if !m.is_diagonal() && !m.is_anti_diagonal() {
            report.push(
                Location::Edge(to, from),
                "matrix is neither diagonal nor anti-diagonal",
            );
        }
        if g.players[to].side == g.players[from].side {
            report.push(
                Location::Edge(to, from),
                "edge joins two players on the same side",
            );
        }
    }
    let mut indeg = alloc::vec![0usize; n];
    let mut outdeg = alloc::vec![0usize; n];
    for (&(to, from), m) in &g.edges {
        if to < n && from < n && !m.is_zero() {
            indeg[to] += 1;
            outdeg[from] += 1;
        }
    }
    for i in 0..n {
        if indeg[i] > 2 {
            report.push(Location::Player(i), format!("in-degree {} exceeds 2", indeg[i]));
        }
        if outdeg[i] > 2 {
            report.push(Location::Player(i), format!("out-degree {} exceeds 2", outdeg[i]));
        }
    }
    report
}

/// Expected utility of each player's two actions against the others' mixed
/// strategies.
pub fn utilities(
    g: &RestrictedPolymatrixGame,
    prof: &PolymatrixProfile,
) -> Result<Vec<[Rat; 2]>, Error> {
    if prof.len() != g.players.len() {
        return Err(Error::Dimension(format!(
            "game has {} players, profile has {}",
            g.players.len(),
            prof.len()
        )));
    }
    let mut out: Vec<[Rat; 2]> = alloc::vec![[Rat::zero(), Rat::zero()]; g.players.len()];
    for (&(to, from), m) in &g.edges {
        let p1 = &prof.0[from];
        let p0 = Rat::one() - p1;
        for own in 0..2 {
            let contribution = &m.e[own][0] * &p0 + &m.e[own][1] * p1;
            out[to][own] += contribution;
        }
    }
    Ok(out)
}

/// Per-player WSNE gap: the largest shortfall from the best response over
/// the player's supported actions.
pub fn poly_regret(
    g: &RestrictedPolymatrixGame,
    prof: &PolymatrixProfile,
) -> Result<Vec<Rat>, Error> {
    let utils = utilities(g, prof)?;
    let mut gaps = Vec::with_capacity(utils.len());
    for (i, u) in utils.iter().enumerate() {
        let best = u[0].clone().max(u[1].clone());
        let p1 = &prof.0[i];
        let supported_min = if p1.is_zero() {
            u[0].clone()
        } else if p1.is_one() {
            u[1].clone()
        } else {
            u[0].clone().min(u[1].clone())
        };
        gaps.push(best - supported_min);
    }
    Ok(gaps)
}

/// Gadget matrices. The output player of a NOT gate plays the anti-diagonal
/// matrix against its input; AND outputs play `[[2,0],[0,1]]` against both
/// inputs; PURIFY outputs play `[[1,0],[0,2]]` and `[[2,0],[0,1]]`.
fn not_matrix() -> EdgeMatrix {
    EdgeMatrix::from_ints([[0, 1], [1, 0]])
}

fn and_matrix() -> EdgeMatrix {
    EdgeMatrix::from_ints([[2, 0], [0, 1]])
}

fn purify_first_matrix() -> EdgeMatrix {
    EdgeMatrix::from_ints([[1, 0], [0, 2]])
}

/// One player per variable; each gate output receives payoffs only from its
/// gate's inputs. Passes [`validate_restricted`] for every valid instance.
pub fn from_purecircuit(
    inst: &PureCircuitInstance,
) -> Result<RestrictedPolymatrixGame, Error> {
    let validation = validate_instance(inst);
    if !validation.passed() {
        return Err(Error::InvalidInstance(validation));
    }
    let colors = bipartition(inst).ok_or_else(|| {
        Error::Invariant("validated instance must be bipartite".into())
    })?;
    let idx = inst.var_index();
    let players: Vec<PolyPlayer> = inst
        .vars
        .iter()
        .enumerate()
        .map(|(i, name)| PolyPlayer {
            name: name.clone(),
            side: if colors[i] { Side::R } else { Side::L },
        })
        .collect();

    let mut edges: BTreeMap<(usize, usize), EdgeMatrix> = BTreeMap::new();
    let mut add = |to: usize, from: usize, m: EdgeMatrix| -> Result<(), Error> {
        if edges.insert((to, from), m).is_some() {
            return Err(Error::Precondition(format!(
                "players {to} and {from} interact through two gates; run normalize_for_reduction first"
            )));
        }
        Ok(())
    };
    for gate in &inst.gates {
        match gate {
            Gate::Not { input, output } => {
                add(idx[output.as_str()], idx[input.as_str()], not_matrix())?;
            }
            Gate::And { a, b, output } => {
                add(idx[output.as_str()], idx[a.as_str()], and_matrix())?;
                add(idx[output.as_str()], idx[b.as_str()], and_matrix())?;
            }
            Gate::Purify { input, out_a, out_b } => {
                add(idx[out_a.as_str()], idx[input.as_str()], purify_first_matrix())?;
                add(idx[out_b.as_str()], idx[input.as_str()], and_matrix())?;
            }
        }
    }
    let g = RestrictedPolymatrixGame { players, edges };
    let check = validate_restricted(&g);
    if !check.passed() {
        return Err(Error::Invariant(format!(
            "gadget game failed the restricted-class validator: {check}"
        )));
    }
    Ok(g)
}

/// Reads a satisfying assignment off a delta-WSNE of the gadget game: the
/// value of a variable is the probability its player puts on action 1.
pub fn assignment_from_wsne(
    inst: &PureCircuitInstance,
    g: &RestrictedPolymatrixGame,
    prof: &PolymatrixProfile,
    delta: &Rat,
) -> Result<Assignment, Error> {
    if delta >= &ratio(1, 2) {
        return Err(Error::Threshold(format!(
            "delta = {delta} must be below 1/2 for the gadget analysis"
        )));
    }
    let gaps = poly_regret(g, prof)?;
    for (i, gap) in gaps.iter().enumerate() {
        if gap > delta {
            return Err(Error::NotAWsne(format!(
                "player {i} has gap {gap} > delta = {delta}"
            )));
        }
    }
    let mut asg = Assignment::default();
    for (i, player) in g.players.iter().enumerate() {
        asg.insert(player.name.clone(), prof.0[i].clone())?;
    }
    let check = check_assignment(inst, &asg)?;
    if !check.passed() {
        return Err(Error::Invariant(format!(
            "delta-WSNE produced a non-satisfying assignment: {check}"
        )));
    }
    Ok(asg)
}
