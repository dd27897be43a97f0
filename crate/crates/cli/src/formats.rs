//! The shared JSON file formats. Every numeric entry is either a JSON
//! integer or a string `"p/q"` in lowest terms with a positive denominator;
//! serialization followed by parsing is the identity on values.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use gamechain_core::circuit::{Assignment, Gate, PureCircuitInstance};
use gamechain_core::games::{BimatrixGame, MixedProfile};
use gamechain_core::matrix::Mat;
use gamechain_core::pipeline::ReductionTrace;
use gamechain_core::poly2bimatrix::{PaddingRecord, Poly2BimatrixLayout};
use gamechain_core::polymatrix::{
    EdgeMatrix, PolyPlayer, PolymatrixProfile, RestrictedPolymatrixGame, Side,
};
use gamechain_core::rat::{format_rat, parse_rat, Rat};
use gamechain_core::sims::{PermutationPair, SimKind, SimSide, SimulationRecord};

#[derive(Debug)]
pub struct FormatError(pub String);

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for FormatError {}

/// An exact rational in the shared entry encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry(pub Rat);

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Ok(v) = i64::try_from(self.0.numer()) {
                return serializer.serialize_i64(v);
            }
        }
        serializer.serialize_str(&format_rat(&self.0))
    }
}

struct EntryVisitor;

impl<'de> Visitor<'de> for EntryVisitor {
    type Value = Entry;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an integer or a \"p/q\" string in lowest terms")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
        Ok(Entry(Rat::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
        Ok(Entry(Rat::from_integer(v.into())))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Entry, E> {
        parse_rat(v).map(Entry).map_err(de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Entry, D::Error> {
        deserializer.deserialize_any(EntryVisitor)
    }
}

fn entries(v: &[Rat]) -> Vec<Entry> {
    v.iter().cloned().map(Entry).collect()
}

fn rats(v: Vec<Entry>) -> Vec<Rat> {
    v.into_iter().map(|e| e.0).collect()
}

// ---------------------------------------------------------------------------
// Games and profiles

#[derive(Serialize, Deserialize)]
pub struct GameDto {
    pub rows: usize,
    pub cols: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Entry>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Entry>>,
}

impl GameDto {
    pub fn from_game(game: &BimatrixGame) -> Self {
        let dump = |m: &Mat| {
            (0..m.rows())
                .map(|i| entries(m.row(i)))
                .collect::<Vec<_>>()
        };
        GameDto {
            rows: game.rows(),
            cols: game.cols(),
            a: dump(game.a()),
            b: dump(game.b()),
        }
    }

    pub fn into_game(self) -> Result<BimatrixGame, FormatError> {
        let build = |name: &str, m: Vec<Vec<Entry>>, rows: usize, cols: usize| {
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(FormatError(format!(
                    "matrix {name} does not match the declared {rows}x{cols} shape"
                )));
            }
            Mat::from_rows(m.into_iter().map(rats).collect())
                .map_err(|e| FormatError(e.to_string()))
        };
        let a = build("A", self.a, self.rows, self.cols)?;
        let b = build("B", self.b, self.rows, self.cols)?;
        BimatrixGame::new(a, b).map_err(|e| FormatError(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
pub struct ProfileDto {
    pub x: Vec<Entry>,
    pub y: Vec<Entry>,
}

impl ProfileDto {
    pub fn from_profile(profile: &MixedProfile) -> Self {
        ProfileDto {
            x: entries(&profile.x),
            y: entries(&profile.y),
        }
    }

    pub fn into_profile(self) -> Result<MixedProfile, FormatError> {
        MixedProfile::new(rats(self.x), rats(self.y)).map_err(|e| FormatError(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
pub struct EquilibriaDto {
    pub equilibria: Vec<ProfileDto>,
}

// ---------------------------------------------------------------------------
// Circuits and assignments

#[derive(Serialize, Deserialize)]
pub struct CircuitDto {
    pub vars: Vec<String>,
    pub gates: Vec<GateDto>,
}

#[derive(Serialize, Deserialize)]
pub struct GateDto {
    pub op: String,
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
    #[serde(rename = "out")]
    pub outputs: Vec<String>,
}

impl CircuitDto {
    pub fn from_instance(inst: &PureCircuitInstance) -> Self {
        let gates = inst
            .gates
            .iter()
            .map(|g| match g {
                Gate::Not { input, output } => GateDto {
                    op: "NOT".into(),
                    inputs: vec![input.clone()],
                    outputs: vec![output.clone()],
                },
                Gate::And { a, b, output } => GateDto {
                    op: "AND".into(),
                    inputs: vec![a.clone(), b.clone()],
                    outputs: vec![output.clone()],
                },
                Gate::Purify { input, out_a, out_b } => GateDto {
                    op: "PURIFY".into(),
                    inputs: vec![input.clone()],
                    outputs: vec![out_a.clone(), out_b.clone()],
                },
            })
            .collect();
        CircuitDto {
            vars: inst.vars.clone(),
            gates,
        }
    }

    pub fn into_instance(self) -> Result<PureCircuitInstance, FormatError> {
        let mut gates = Vec::with_capacity(self.gates.len());
        for (i, g) in self.gates.into_iter().enumerate() {
            let arity = (g.inputs.len(), g.outputs.len());
            let gate = match (g.op.as_str(), arity) {
                ("NOT", (1, 1)) => Gate::Not {
                    input: g.inputs[0].clone(),
                    output: g.outputs[0].clone(),
                },
                ("AND", (2, 1)) => Gate::And {
                    a: g.inputs[0].clone(),
                    b: g.inputs[1].clone(),
                    output: g.outputs[0].clone(),
                },
                ("PURIFY", (1, 2)) => Gate::Purify {
                    input: g.inputs[0].clone(),
                    out_a: g.outputs[0].clone(),
                    out_b: g.outputs[1].clone(),
                },
                (op, (ins, outs)) => {
                    return Err(FormatError(format!(
                        "gate {i}: op {op:?} with {ins} input(s) and {outs} output(s) is not one of NOT(1->1), AND(2->1), PURIFY(1->2)"
                    )))
                }
            };
            gates.push(gate);
        }
        Ok(PureCircuitInstance {
            vars: self.vars,
            gates,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct AssignmentDto {
    pub values: BTreeMap<String, Entry>,
}

impl AssignmentDto {
    pub fn from_assignment(asg: &Assignment) -> Self {
        AssignmentDto {
            values: asg
                .iter()
                .map(|(k, v)| (k.clone(), Entry(v.clone())))
                .collect(),
        }
    }

    pub fn into_assignment(self) -> Result<Assignment, FormatError> {
        Assignment::new(self.values.into_iter().map(|(k, v)| (k, v.0)).collect())
            .map_err(|e| FormatError(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Polymatrix games and profiles

#[derive(Serialize, Deserialize)]
pub struct PolyDto {
    pub players: Vec<PlayerDto>,
    pub edges: Vec<EdgeDto>,
}

#[derive(Serialize, Deserialize)]
pub struct PlayerDto {
    pub name: String,
    pub side: String,
}

#[derive(Serialize, Deserialize)]
pub struct EdgeDto {
    pub to: usize,
    pub from: usize,
    #[serde(rename = "M")]
    pub m: Vec<Vec<Entry>>,
}

impl PolyDto {
    pub fn from_poly(g: &RestrictedPolymatrixGame) -> Self {
        PolyDto {
            players: g
                .players
                .iter()
                .map(|p| PlayerDto {
                    name: p.name.clone(),
                    side: match p.side {
                        Side::L => "L".into(),
                        Side::R => "R".into(),
                    },
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|(&(to, from), m)| EdgeDto {
                    to,
                    from,
                    m: m.e
                        .iter()
                        .map(|row| row.iter().cloned().map(Entry).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn into_poly(self) -> Result<RestrictedPolymatrixGame, FormatError> {
        let players = self
            .players
            .into_iter()
            .map(|p| {
                let side = match p.side.as_str() {
                    "L" => Side::L,
                    "R" => Side::R,
                    other => return Err(FormatError(format!("side must be L or R, got {other:?}"))),
                };
                Ok(PolyPlayer { name: p.name, side })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = std::collections::BTreeMap::new();
        for e in self.edges {
            if e.to >= players.len() || e.from >= players.len() {
                return Err(FormatError(format!(
                    "edge ({}, {}): player index out of range for {} player(s)",
                    e.to,
                    e.from,
                    players.len()
                )));
            }
            if e.m.len() != 2 || e.m.iter().any(|r| r.len() != 2) {
                return Err(FormatError(format!(
                    "edge ({}, {}): M must be a 2x2 matrix",
                    e.to, e.from
                )));
            }
            let mut it = e.m.into_iter();
            let r0 = rats(it.next().unwrap());
            let r1 = rats(it.next().unwrap());
            let m = EdgeMatrix {
                e: [
                    [r0[0].clone(), r0[1].clone()],
                    [r1[0].clone(), r1[1].clone()],
                ],
            };
            if edges.insert((e.to, e.from), m).is_some() {
                return Err(FormatError(format!(
                    "duplicate edge ({}, {})",
                    e.to, e.from
                )));
            }
        }
        Ok(RestrictedPolymatrixGame { players, edges })
    }
}

#[derive(Serialize, Deserialize)]
pub struct PolyProfileDto {
    /// Per-player probability of action 1, in player order.
    pub action1: Vec<Entry>,
}

impl PolyProfileDto {
    pub fn from_profile(p: &PolymatrixProfile) -> Self {
        PolyProfileDto {
            action1: entries(&p.0),
        }
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn into_profile(self) -> Result<PolymatrixProfile, FormatError> {
        PolymatrixProfile::new(rats(self.action1)).map_err(|e| FormatError(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Reduction traces

#[derive(Serialize, Deserialize)]
pub struct TraceDto {
    pub steps: Vec<StepDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepDto {
    Normalize {
        original: CircuitDto,
        normalized: CircuitDto,
    },
    Gadgets {
        poly: PolyDto,
    },
    Poly2bimatrix {
        layout: LayoutDto,
    },
    Simulation {
        sim: SimDto,
    },
}

#[derive(Serialize, Deserialize)]
pub struct LayoutDto {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "K")]
    pub k: i64,
    pub left_players: Vec<usize>,
    pub right_players: Vec<usize>,
    pub original_players: usize,
    pub padding: PaddingDto,
}

#[derive(Serialize, Deserialize)]
pub struct PaddingDto {
    pub rounds: usize,
    pub added_left: Vec<String>,
    pub added_right: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct SimDto {
    pub sim: String,
    pub side: String,
    #[serde(rename = "K")]
    pub k_value: Option<i64>,
    pub k: usize,
    pub input_dims: (usize, usize),
    pub output_dims: (usize, usize),
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub eps: Entry,
}

impl LayoutDto {
    pub fn from_layout(l: &Poly2BimatrixLayout) -> Self {
        LayoutDto {
            n: l.n,
            m: l.m,
            big_n: l.big_n,
            k: l.k,
            left_players: l.left_players.clone(),
            right_players: l.right_players.clone(),
            original_players: l.original_players,
            padding: PaddingDto {
                rounds: l.padding.rounds,
                added_left: l.padding.added_left.clone(),
                added_right: l.padding.added_right.clone(),
            },
        }
    }

    pub fn into_layout(self) -> Result<Poly2BimatrixLayout, FormatError> {
        if self.m != 3 * self.n + 2 || self.big_n != 2 * self.n + 2 {
            return Err(FormatError(format!(
                "layout sizes are inconsistent: n = {}, m = {}, N = {}",
                self.n, self.m, self.big_n
            )));
        }
        Ok(Poly2BimatrixLayout {
            n: self.n,
            m: self.m,
            big_n: self.big_n,
            k: self.k,
            left_players: self.left_players,
            right_players: self.right_players,
            original_players: self.original_players,
            padding: PaddingRecord {
                rounds: self.padding.rounds,
                added_left: self.padding.added_left,
                added_right: self.padding.added_right,
            },
        })
    }
}

impl SimDto {
    pub fn from_record(r: &SimulationRecord) -> Self {
        SimDto {
            sim: r.kind.name().into(),
            side: match r.side {
                SimSide::Row => "row".into(),
                SimSide::Column => "col".into(),
            },
            k_value: r.k_value,
            k: r.k,
            input_dims: r.input_dims,
            output_dims: r.output_dims,
            row_perm: r.perm.row_perm.clone(),
            col_perm: r.perm.col_perm.clone(),
            eps: Entry(r.eps.clone()),
        }
    }

    pub fn into_record(self) -> Result<SimulationRecord, FormatError> {
        let kind = match self.sim.as_str() {
            "type-one" => SimKind::TypeOne,
            "dual" => SimKind::Dual,
            "type-two" => SimKind::TypeTwo,
            other => return Err(FormatError(format!("unknown simulation kind {other:?}"))),
        };
        let side = match self.side.as_str() {
            "row" => SimSide::Row,
            "col" => SimSide::Column,
            other => return Err(FormatError(format!("unknown side {other:?}"))),
        };
        let check_perm = |perm: &[usize], len: usize, what: &str| {
            let mut seen = vec![false; len];
            if perm.len() != len {
                return Err(FormatError(format!("{what} has wrong length")));
            }
            for &p in perm {
                if p >= len || seen[p] {
                    return Err(FormatError(format!("{what} is not a permutation")));
                }
                seen[p] = true;
            }
            Ok(())
        };
        check_perm(&self.row_perm, self.input_dims.0, "row_perm")?;
        check_perm(&self.col_perm, self.input_dims.1, "col_perm")?;
        Ok(SimulationRecord {
            kind,
            side,
            k_value: self.k_value,
            k: self.k,
            input_dims: self.input_dims,
            output_dims: self.output_dims,
            perm: PermutationPair {
                row_perm: self.row_perm,
                col_perm: self.col_perm,
            },
            eps: self.eps.0,
        })
    }
}

impl TraceDto {
    pub fn from_trace(t: &ReductionTrace) -> Self {
        let mut steps = vec![
            StepDto::Normalize {
                original: CircuitDto::from_instance(&t.original),
                normalized: CircuitDto::from_instance(&t.normalized),
            },
            StepDto::Gadgets {
                poly: PolyDto::from_poly(&t.poly),
            },
            StepDto::Poly2bimatrix {
                layout: LayoutDto::from_layout(&t.layout),
            },
        ];
        for sim in &t.sims {
            steps.push(StepDto::Simulation {
                sim: SimDto::from_record(sim),
            });
        }
        TraceDto { steps }
    }

    /// A trace holding the complete chain: normalize, gadgets, the bimatrix
    /// layout, and the eight simulations.
    pub fn into_trace(self) -> Result<ReductionTrace, FormatError> {
        let mut steps = self.steps.into_iter();
        let (original, normalized) = match steps.next() {
            Some(StepDto::Normalize { original, normalized }) => {
                (original.into_instance()?, normalized.into_instance()?)
            }
            _ => return Err(FormatError("trace must start with a normalize step".into())),
        };
        let poly = match steps.next() {
            Some(StepDto::Gadgets { poly }) => poly.into_poly()?,
            _ => return Err(FormatError("second trace step must be gadgets".into())),
        };
        let layout = match steps.next() {
            Some(StepDto::Poly2bimatrix { layout }) => layout.into_layout()?,
            _ => return Err(FormatError("third trace step must be poly2bimatrix".into())),
        };
        let mut sims = Vec::new();
        for step in steps {
            match step {
                StepDto::Simulation { sim } => sims.push(sim.into_record()?),
                _ => {
                    return Err(FormatError(
                        "simulation steps must follow the poly2bimatrix step".into(),
                    ))
                }
            }
        }
        let trace = ReductionTrace {
            original,
            normalized,
            poly,
            layout,
            sims,
        };
        trace
            .validate()
            .map_err(|e| FormatError(format!("{e}")))?;
        Ok(trace)
    }
}
