//! A small evaluator for acyclic block diagrams.
//!
//! Netlists are line oriented:
//!
//! ```text
//! # comment
//! block in  = input
//! block A   = relay inverting set=0.2 reset=0.8 init=1
//! block sum = sum
//! block k   = gain 0.5
//! block out = output
//! wire in -> A
//! wire in, A -> sum
//! ```
//!
//! A `wire` line may list several sources. Blocks are evaluated once per
//! step in a topological order fixed at build time; ties are broken by
//! declaration order.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{check_finite, Error, Result};
use crate::hysteron::{Polarity, RelaySpec, RelayUnit};

use super::cell::ProtereticCell;

#[derive(Debug, Clone, PartialEq)]
pub enum BlockKind {
    Input,
    Relay { spec: RelaySpec, init: bool },
    Gain(f64),
    Sum,
    Output,
}

impl BlockKind {
    fn label(&self) -> &'static str {
        match self {
            BlockKind::Input => "input",
            BlockKind::Relay { .. } => "relay",
            BlockKind::Gain(_) => "gain",
            BlockKind::Sum => "sum",
            BlockKind::Output => "output",
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    blocks: Vec<(String, BlockKind)>,
    edges: Vec<(String, String)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn block(mut self, name: impl Into<String>, kind: BlockKind) -> Self {
        self.blocks.push((name.into(), kind));
        self
    }

    pub fn wire(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.edges.push((from.into(), to.into()));
        self
    }

    pub fn build(self) -> Result<BlockNetwork> {
        let mut index = HashMap::new();
        for (i, (name, _)) in self.blocks.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::Build(format!("duplicate block name `{name}`")));
            }
        }
        let n = self.blocks.len();
        let mut inputs = vec![Vec::new(); n];
        let mut outputs = vec![Vec::new(); n];
        for (from, to) in &self.edges {
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| {
                    Error::Build(format!("dangling edge {from} -> {to}: no block `{name}`"))
                })
            };
            let (f, t) = (lookup(from)?, lookup(to)?);
            inputs[t].push(f);
            outputs[f].push(t);
        }

        let find = |want: fn(&BlockKind) -> bool, label: &str| -> Result<usize> {
            let found: Vec<usize> = (0..n).filter(|&i| want(&self.blocks[i].1)).collect();
            match found.as_slice() {
                [one] => Ok(*one),
                _ => Err(Error::Build(format!(
                    "expected exactly one {label} block, found {}",
                    found.len()
                ))),
            }
        };
        let input = find(|k| matches!(k, BlockKind::Input), "input")?;
        let output = find(|k| matches!(k, BlockKind::Output), "output")?;

        for (i, (name, kind)) in self.blocks.iter().enumerate() {
            let arity = inputs[i].len();
            let ok = match kind {
                BlockKind::Input => arity == 0,
                BlockKind::Relay { .. } | BlockKind::Gain(_) | BlockKind::Output => arity == 1,
                BlockKind::Sum => arity >= 1,
            };
            if !ok {
                return Err(Error::Build(format!(
                    "{} block `{name}` has {arity} inputs",
                    kind.label()
                )));
            }
        }

        let order = topological_order(&inputs, &outputs).map_err(|cycle| {
            let names: Vec<&str> = cycle.iter().map(|&i| self.blocks[i].0.as_str()).collect();
            Error::Build(format!("feedback cycle: {}", names.join(" -> ")))
        })?;

        let forward = reachable(input, &outputs);
        let backward = reachable(output, &inputs);
        for (i, (name, _)) in self.blocks.iter().enumerate() {
            if !forward[i] {
                return Err(Error::Build(format!("block `{name}` is not fed by the input")));
            }
            if !backward[i] {
                return Err(Error::Build(format!("block `{name}` does not reach the output")));
            }
        }

        let nodes = self
            .blocks
            .into_iter()
            .zip(inputs)
            .map(|((name, kind), inputs)| Node {
                state: match &kind {
                    BlockKind::Relay { spec, init } => Some(RelayUnit::new(*spec, *init)),
                    _ => None,
                },
                name,
                kind,
                inputs,
            })
            .collect();
        Ok(BlockNetwork {
            nodes,
            order,
            input,
            output,
            values: vec![0.0; n],
        })
    }
}

/// Kahn's algorithm, smallest index first. On failure returns one cycle as a
/// closed walk of node indices.
fn topological_order(
    inputs: &[Vec<usize>],
    outputs: &[Vec<usize>],
) -> std::result::Result<Vec<usize>, Vec<usize>> {
    let n = inputs.len();
    let mut indegree: Vec<usize> = inputs.iter().map(Vec::len).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &j in &outputs[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.insert(j);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every leftover node has a leftover predecessor; walk backwards until a
    // node repeats.
    let start = (0..n).find(|&i| indegree[i] > 0).unwrap();
    let mut seen = vec![None; n];
    let mut path = Vec::new();
    let mut cur = start;
    while seen[cur].is_none() {
        seen[cur] = Some(path.len());
        path.push(cur);
        cur = *inputs[cur].iter().find(|&&p| indegree[p] > 0).unwrap();
    }
    let mut cycle: Vec<usize> = path[seen[cur].unwrap()..].to_vec();
    cycle.reverse();
    cycle.push(cycle[0]);
    Err(cycle)
}

fn reachable(from: usize, adjacency: &[Vec<usize>]) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen
}

#[derive(Debug, Clone)]
struct Node {
    name: String,
    kind: BlockKind,
    inputs: Vec<usize>,
    state: Option<RelayUnit>,
}

/// A validated feedforward block diagram with per-relay state.
#[derive(Debug, Clone)]
pub struct BlockNetwork {
    nodes: Vec<Node>,
    order: Vec<usize>,
    input: usize,
    output: usize,
    values: Vec<f64>,
}

impl BlockNetwork {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::new()
    }

    /// Parses and builds a netlist (see the module docs for the grammar).
    pub fn parse(text: &str) -> Result<Self> {
        let mut builder = NetworkBuilder::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax {
                line: lineno + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix("block ") {
                let (name, def) = rest
                    .split_once('=')
                    .ok_or_else(|| syntax("expected `block NAME = KIND ...`".into()))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(format!("bad block name `{name}`")));
                }
                let kind = parse_kind(def.trim()).map_err(syntax)?;
                builder = builder.block(name, kind);
            } else if let Some(rest) = line.strip_prefix("wire ") {
                let (from, to) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax("expected `wire A[, B...] -> C`".into()))?;
                let to = to.trim();
                if to.is_empty() {
                    return Err(syntax("missing wire target".into()));
                }
                for src in from.split(',').map(str::trim) {
                    if src.is_empty() {
                        return Err(syntax("empty wire source".into()));
                    }
                    builder = builder.wire(src, to);
                }
            } else {
                return Err(syntax(format!("unrecognised statement `{line}`")));
            }
        }
        builder.build()
    }

    pub fn step(&mut self, x: f64) -> Result<f64> {
        check_finite(0, x)?;
        for &i in &self.order {
            let node = &mut self.nodes[i];
            let value = match &node.kind {
                BlockKind::Input => x,
                BlockKind::Sum => node.inputs.iter().map(|&j| self.values[j]).sum(),
                BlockKind::Gain(k) => k * self.values[node.inputs[0]],
                BlockKind::Output => self.values[node.inputs[0]],
                BlockKind::Relay { .. } => {
                    let relay = node.state.as_mut().expect("relay block carries state");
                    f64::from(u8::from(relay.step_unchecked(self.values[node.inputs[0]])))
                }
            };
            self.values[i] = value;
        }
        Ok(self.values[self.output])
    }

    pub fn run_samples(&mut self, samples: &[f64]) -> Result<Vec<f64>> {
        samples.iter().map(|&x| self.step(x)).collect()
    }

    /// Block names in evaluation order.
    pub fn evaluation_order(&self) -> Vec<&str> {
        self.order.iter().map(|&i| self.nodes[i].name.as_str()).collect()
    }

    pub fn input_name(&self) -> &str {
        &self.nodes[self.input].name
    }
}

fn parse_kind(def: &str) -> std::result::Result<BlockKind, String> {
    let mut words = def.split_whitespace();
    let head = words.next().ok_or("missing block kind")?;
    let rest: Vec<&str> = words.collect();
    let no_args = |kind: BlockKind| {
        if rest.is_empty() {
            Ok(kind)
        } else {
            Err(format!("`{head}` takes no arguments"))
        }
    };
    match head {
        "input" => no_args(BlockKind::Input),
        "output" => no_args(BlockKind::Output),
        "sum" => no_args(BlockKind::Sum),
        "gain" => match rest.as_slice() {
            [k] => k
                .parse::<f64>()
                .ok()
                .filter(|k| k.is_finite())
                .map(BlockKind::Gain)
                .ok_or_else(|| format!("bad gain `{k}`")),
            _ => Err("expected `gain K`".into()),
        },
        "relay" => {
            let (polarity, params) = rest
                .split_first()
                .ok_or("expected `relay POLARITY set=.. reset=.. init=..`")?;
            let polarity = match *polarity {
                "inverting" => Polarity::Inverting,
                "noninverting" => Polarity::NonInverting,
                other => return Err(format!("unknown polarity `{other}`")),
            };
            let (mut set, mut reset, mut init) = (None, None, None);
            for p in params {
                let (key, value) = p
                    .split_once('=')
                    .ok_or_else(|| format!("expected key=value, got `{p}`"))?;
                let number = || {
                    value
                        .parse::<f64>()
                        .map_err(|_| format!("bad number `{value}` for `{key}`"))
                };
                match key {
                    "set" => set = Some(number()?),
                    "reset" => reset = Some(number()?),
                    "init" => {
                        init = Some(match value {
                            "0" => false,
                            "1" => true,
                            _ => return Err(format!("init must be 0 or 1, got `{value}`")),
                        })
                    }
                    _ => return Err(format!("unknown relay parameter `{key}`")),
                }
            }
            let spec = RelaySpec::new(
                polarity,
                set.ok_or("relay needs set=")?,
                reset.ok_or("relay needs reset=")?,
            )
            .map_err(|e| e.to_string())?;
            Ok(BlockKind::Relay {
                spec,
                init: init.unwrap_or(false),
            })
        }
        other => Err(format!("unknown block kind `{other}`")),
    }
}

/// Netlist of the two-relay feedforward cell with thresholds `(a, b)`,
/// relays initialised exactly as [`ProtereticCell::new`] would at `x0`.
pub fn cell_netlist(a: f64, b: f64, x0: f64) -> Result<String> {
    let cell = ProtereticCell::new(a, b, x0)?;
    let bit = |on: bool| u8::from(on);
    let (ra, rb) = (cell.relay_a(), cell.relay_b());
    Ok(format!(
        "block in = input\n\
         block A = relay inverting set={:?} reset={:?} init={}\n\
         block sum = sum\n\
         block B = relay noninverting set={:?} reset={:?} init={}\n\
         block out = output\n\
         wire in -> A\n\
         wire in, A -> sum\n\
         wire sum -> B\n\
         wire B -> out\n",
        ra.spec().set_threshold(),
        ra.spec().reset_threshold(),
        bit(ra.output()),
        rb.spec().set_threshold(),
        rb.spec().reset_threshold(),
        bit(rb.output()),
    ))
}
