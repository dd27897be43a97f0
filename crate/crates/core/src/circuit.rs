//! Circuit instances with NOT/AND/PURIFY gates over unit-interval variables,
//! assignment checking against the gate semantics, and the rewrite that
//! prepares an instance for the gadget reduction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::rat::Rat;
use crate::report::{Location, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    Not { input: String, output: String },
    And { a: String, b: String, output: String },
    Purify { input: String, out_a: String, out_b: String },
}

impl Gate {
    pub fn inputs(&self) -> Vec<&str> {
        match self {
            Gate::Not { input, .. } => alloc::vec![input.as_str()],
            Gate::And { a, b, .. } => alloc::vec![a.as_str(), b.as_str()],
            Gate::Purify { input, .. } => alloc::vec![input.as_str()],
        }
    }

    pub fn outputs(&self) -> Vec<&str> {
        match self {
            Gate::Not { output, .. } => alloc::vec![output.as_str()],
            Gate::And { output, .. } => alloc::vec![output.as_str()],
            Gate::Purify { out_a, out_b, .. } => alloc::vec![out_a.as_str(), out_b.as_str()],
        }
    }
}

/// A circuit in which every variable is the output of exactly one gate;
/// cycles are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureCircuitInstance {
    pub vars: Vec<String>,
    pub gates: Vec<Gate>,
}

impl PureCircuitInstance {
    pub fn var_index(&self) -> BTreeMap<&str, usize> {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect()
    }

    /// Dependency edges (input index, output index), one per gate wire.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let idx = self.var_index();
        let mut edges = Vec::new();
        for gate in &self.gates {
            for output in gate.outputs() {
                for input in gate.inputs() {
                    if let (Some(&u), Some(&v)) = (idx.get(input), idx.get(output)) {
                        edges.push((u, v));
                    }
                }
            }
        }
        edges
    }
}

/// A value in the unit interval for every variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    values: BTreeMap<String, Rat>,
}

impl Assignment {
    pub fn new(values: BTreeMap<String, Rat>) -> Result<Self, Error> {
        for (name, v) in &values {
            if v < &Rat::zero() || v > &Rat::one() {
                return Err(Error::NotDistribution(format!(
                    "value of {name:?} is {v}, outside [0,1]"
                )));
            }
        }
        Ok(Assignment { values })
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.values.get(name)
    }

    pub fn insert(&mut self, name: String, v: Rat) -> Result<(), Error> {
        if v < Rat::zero() || v > Rat::one() {
            return Err(Error::NotDistribution(format!(
                "value of {name:?} is {v}, outside [0,1]"
            )));
        }
        self.values.insert(name, v);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.values.iter()
    }

    /// Keeps only the variables of `inst`, e.g. to undo a normalization.
    pub fn restricted_to(&self, inst: &PureCircuitInstance) -> Assignment {
        let keep: BTreeSet<&str> = inst.vars.iter().map(String::as_str).collect();
        Assignment {
            values: self
                .values
                .iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

/// Checks unique-producer, the degree bounds (in <= 2, out <= 2, total <= 3),
/// and bipartiteness of the undirected dependency graph.
pub fn validate_instance(inst: &PureCircuitInstance) -> ValidationReport {
    let mut report = ValidationReport::new();
    let declared: BTreeSet<&str> = inst.vars.iter().map(String::as_str).collect();
    if declared.len() != inst.vars.len() {
        report.push(Location::Global, "duplicate variable names");
    }

    let mut produced: BTreeMap<&str, usize> = BTreeMap::new();
    for (g, gate) in inst.gates.iter().enumerate() {
        for name in gate.outputs().iter().chain(gate.inputs().iter()) {
            if !declared.contains(name) {
                report.push(Location::Gate(g), format!("undeclared variable {name:?}"));
            }
        }
        for output in gate.outputs() {
            *produced.entry(output).or_insert(0) += 1;
        }
    }
    for var in &inst.vars {
        match produced.get(var.as_str()).copied().unwrap_or(0) {
            1 => {}
            n => report.push(
                Location::Variable(var.clone()),
                format!("must be the output of exactly one gate, found {n}"),
            ),
        }
    }

    let edges = inst.edges();
    let n = inst.vars.len();
    let mut indeg = alloc::vec![0usize; n];
    let mut outdeg = alloc::vec![0usize; n];
    for &(u, v) in &edges {
        outdeg[u] += 1;
        indeg[v] += 1;
    }
    for i in 0..n {
        if indeg[i] > 2 {
            report.push(
                Location::Variable(inst.vars[i].clone()),
                format!("in-degree {} exceeds 2", indeg[i]),
            );
        }
        if outdeg[i] > 2 {
            report.push(
                Location::Variable(inst.vars[i].clone()),
                format!("out-degree {} exceeds 2", outdeg[i]),
            );
        }
        if indeg[i] + outdeg[i] > 3 {
            report.push(
                Location::Variable(inst.vars[i].clone()),
                format!("total degree {} exceeds 3", indeg[i] + outdeg[i]),
            );
        }
    }

    if bipartition(inst).is_none() {
        report.push(Location::Global, "dependency graph is not bipartite");
    }
    report
}

/// Two-colors the undirected dependency graph. Returns one color flag per
/// variable, canonicalized so that in each connected component the variable
/// with the lexicographically smallest name gets `false` (side L). `None` if
/// the graph is not 2-colorable.
pub fn bipartition(inst: &PureCircuitInstance) -> Option<Vec<bool>> {
    let n = inst.vars.len();
    let mut adj = alloc::vec![Vec::new(); n];
    for (u, v) in inst.edges() {
        if u == v {
            return None; // self-loop
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color = alloc::vec![None::<bool>; n];
    // Process vertices by variable name so the component anchor is the
    // lexicographically smallest name.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inst.vars[a].cmp(&inst.vars[b]));
    for start in order {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = alloc::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &w in &adj[u] {
                match color[w] {
                    None => {
                        color[w] = Some(!cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

/// Checks an assignment against every gate's table. Unconstrained cases
/// (e.g. a NOT whose input is strictly mixed) never fail.
pub fn check_assignment(
    inst: &PureCircuitInstance,
    asg: &Assignment,
) -> Result<ValidationReport, Error> {
    let mut report = ValidationReport::new();
    let value = |name: &str| -> Result<Rat, Error> {
        asg.get(name)
            .cloned()
            .ok_or_else(|| Error::MissingValue(name.to_string()))
    };
    let zero = Rat::zero();
    let one = Rat::one();
    let is_bool = |v: &Rat| *v == zero || *v == one;

    for (g, gate) in inst.gates.iter().enumerate() {
        match gate {
            Gate::Not { input, output } => {
                let u = value(input)?;
                let v = value(output)?;
                if is_bool(&u) && v != &one - &u {
                    report.push(
                        Location::Gate(g),
                        format!("NOT: input {input:?} = {u} requires output {}, got {v}", &one - &u),
                    );
                }
            }
            Gate::And { a, b, output } => {
                let u = value(a)?;
                let v = value(b)?;
                let w = value(output)?;
                if (u == zero || v == zero) && w != zero {
                    report.push(
                        Location::Gate(g),
                        format!("AND: an input is 0, output must be 0, got {w}"),
                    );
                } else if u == one && v == one && w != one {
                    report.push(
                        Location::Gate(g),
                        format!("AND: both inputs are 1, output must be 1, got {w}"),
                    );
                }
            }
            Gate::Purify { input, out_a, out_b } => {
                let u = value(input)?;
                let v = value(out_a)?;
                let w = value(out_b)?;
                if is_bool(&u) {
                    if v != u || w != u {
                        report.push(
                            Location::Gate(g),
                            format!("PURIFY: input is {u}, outputs must equal it, got {v} and {w}"),
                        );
                    }
                } else if !is_bool(&v) && !is_bool(&w) {
                    report.push(
                        Location::Gate(g),
                        "PURIFY: mixed input requires at least one output in {0,1}",
                    );
                }
            }
        }
    }
    Ok(report)
}

fn out_degrees(inst: &PureCircuitInstance) -> Vec<usize> {
    let mut outdeg = alloc::vec![0usize; inst.vars.len()];
    for (u, _) in inst.edges() {
        outdeg[u] += 1;
    }
    outdeg
}

fn fresh_name(taken: &BTreeSet<String>, base: &str, counter: &mut usize) -> String {
    loop {
        let candidate = format!("{base}__nn{}", *counter);
        *counter += 1;
        if !taken.contains(&candidate) {
            return candidate;
        }
    }
}

/// Rewrites the instance so that no variable with out-degree two feeds an
/// AND gate, by routing such an input through a pair of NOT gates. The
/// rewrite preserves satisfying assignments (restricted to the original
/// variables) and bipartiteness, and is idempotent.
pub fn normalize_for_reduction(
    inst: &PureCircuitInstance,
) -> Result<PureCircuitInstance, Error> {
    let initial = validate_instance(inst);
    if !initial.passed() {
        return Err(Error::InvalidInstance(initial));
    }
    let mut out = inst.clone();
    let mut taken: BTreeSet<String> = out.vars.iter().cloned().collect();
    let mut counter = 0usize;
    loop {
        let idx = out.var_index();
        let outdeg = out_degrees(&out);
        // First AND input slot fed by an out-degree-2 variable, in gate order.
        let mut target: Option<(usize, usize, String)> = None;
        'scan: for (g, gate) in out.gates.iter().enumerate() {
            if let Gate::And { a, b, .. } = gate {
                for (slot, name) in [(0usize, a), (1usize, b)] {
                    if outdeg[idx[name.as_str()]] == 2 {
                        target = Some((g, slot, name.clone()));
                        break 'scan;
                    }
                }
            }
        }
        let Some((g, slot, u)) = target else { break };
        let n1 = fresh_name(&taken, &u, &mut counter);
        taken.insert(n1.clone());
        let n2 = fresh_name(&taken, &u, &mut counter);
        taken.insert(n2.clone());
        out.vars.push(n1.clone());
        out.vars.push(n2.clone());
        out.gates.push(Gate::Not {
            input: u,
            output: n1.clone(),
        });
        out.gates.push(Gate::Not {
            input: n1,
            output: n2.clone(),
        });
        if let Gate::And { a, b, .. } = &mut out.gates[g] {
            if slot == 0 {
                *a = n2;
            } else {
                *b = n2;
            }
        }
    }
    let check = validate_instance(&out);
    if !check.passed() {
        return Err(Error::Invariant(format!(
            "normalization produced an invalid instance: {check}"
        )));
    }
    Ok(out)
}

/// The two-variable cycle of NOT gates: the smallest legal instance.
pub fn not_cycle() -> PureCircuitInstance {
    PureCircuitInstance {
        vars: alloc::vec!["u".into(), "v".into()],
        gates: alloc::vec![
            Gate::Not {
                input: "v".into(),
                output: "u".into(),
            },
            Gate::Not {
                input: "u".into(),
                output: "v".into(),
            },
        ],
    }
}

/// A five-variable instance exercising PURIFY and AND:
/// `(v, w) = PURIFY(u)`, `x = AND(v, w)`, `t = NOT(x)`, `u = NOT(t)`.
pub fn purify_and_instance() -> PureCircuitInstance {
    PureCircuitInstance {
        vars: alloc::vec!["u".into(), "v".into(), "w".into(), "x".into(), "t".into()],
        gates: alloc::vec![
            Gate::Purify {
                input: "u".into(),
                out_a: "v".into(),
                out_b: "w".into(),
            },
            Gate::And {
                a: "v".into(),
                b: "w".into(),
                output: "x".into(),
            },
            Gate::Not {
                input: "x".into(),
                output: "t".into(),
            },
            Gate::Not {
                input: "t".into(),
                output: "u".into(),
            },
        ],
    }
}
