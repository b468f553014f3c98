//! Evaluation of parsed programs.
//!
//! Every binding is realized as an explicit graph together with the way it
//! was built, so counts can use the cheapest method available: closed forms
//! for standard families, the gluing identities for `vglue`/`eglue`/`bridge`,
//! the E-tree dynamic program for `chain`/`book`, and the oracle as a last
//! resort.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use super::parse::{Action, EdgeRef, GraphExpr, Plan};
use super::report::{GraphSummary, Report, Verdict};
use crate::etree::{self, AttachmentScript, EtreeError, Shape};
use crate::formulas::{self, ClosedFamily, TreeFamily};
use crate::graph::{make_standard, make_tree, Edge, Family, GraphError, LabeledGraph};
use crate::oracle::{Oracle, OracleError, DEFAULT_VERTEX_LIMIT};
use crate::Count;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("`{name}`: oracle limit exceeded: {n} vertices, limit is {limit}")]
    OracleLimitExceeded {
        name: String,
        n: usize,
        limit: usize,
    },
    #[error("`{name}`: no method available: {reason}")]
    MethodUnavailable { name: String, reason: String },
    #[error("`{name}`: {source}")]
    Graph { name: String, source: GraphError },
    #[error("`{name}`: {source}")]
    Etree { name: String, source: EtreeError },
    #[error("undefined name `{0}`")]
    UndefinedName(String),
}

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Theorem3,
    Theorem4,
    Oracle,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Theorem3 => "theorem3",
            Method::Theorem4 => "theorem4",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Largest graph the oracle may be run on.
    pub max_oracle_vertices: usize,
    /// When false, every report's elapsed time is zero.
    pub timing: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_oracle_vertices: DEFAULT_VERTEX_LIMIT,
            timing: true,
        }
    }
}

#[derive(Debug)]
struct Value {
    graph: LabeledGraph,
    kind: Kind,
}

#[derive(Debug)]
enum Kind {
    Standard(Family, usize),
    Tree,
    VGlue {
        left: Rc<Value>,
        right: Rc<Value>,
        right_map: Vec<usize>,
    },
    Bridge {
        left: Rc<Value>,
        right: Rc<Value>,
        right_map: Vec<usize>,
        bridge: Edge,
    },
    EGlue {
        left: Rc<Value>,
        right: Rc<Value>,
        left_edge: Edge,
        right_edge: Edge,
    },
    ETree {
        script: AttachmentScript,
        shape: Shape,
        copies: usize,
        family: Option<(TreeFamily, usize)>,
    },
}

struct Env {
    values: HashMap<String, Rc<Value>>,
    oracle: Oracle,
}

enum Miss {
    Unavailable(String),
    Failed(EvalError),
}

type Fast<T> = Result<T, Miss>;

impl From<EvalError> for Miss {
    fn from(e: EvalError) -> Self {
        Miss::Failed(e)
    }
}

impl Env {
    fn lookup(&self, name: &str) -> Result<Rc<Value>, EvalError> {
        self.values
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::UndefinedName(name.to_string()))
    }

    fn realize(&self, name: &str, expr: &GraphExpr) -> Result<Rc<Value>, EvalError> {
        let graph_err = |source| EvalError::Graph {
            name: name.to_string(),
            source,
        };
        let value = match expr {
            GraphExpr::Ref(other) => return self.lookup(other),
            GraphExpr::Standard(family, n) => Value {
                graph: make_standard(*family, *n).map_err(graph_err)?,
                kind: Kind::Standard(*family, *n),
            },
            GraphExpr::Tree(parents) => Value {
                graph: make_tree(parents).map_err(graph_err)?,
                kind: Kind::Tree,
            },
            GraphExpr::VGlue(a, b) => {
                let (left, right) = (self.lookup(&a.name)?, self.lookup(&b.name)?);
                let graph = left
                    .graph
                    .glue_at_vertex(&right.graph, a.vertex, b.vertex)
                    .map_err(graph_err)?;
                let right_map = attach_labels(
                    left.graph.vertex_count(),
                    right.graph.vertex_count(),
                    &[(b.vertex, a.vertex)],
                );
                Value {
                    graph,
                    kind: Kind::VGlue {
                        left,
                        right,
                        right_map,
                    },
                }
            }
            GraphExpr::Bridge(a, b) => {
                let (left, right) = (self.lookup(&a.name)?, self.lookup(&b.name)?);
                let graph = left
                    .graph
                    .bridge(&right.graph, a.vertex, b.vertex)
                    .map_err(graph_err)?;
                let right_map =
                    attach_labels(left.graph.vertex_count(), right.graph.vertex_count(), &[]);
                let bridge = Edge::new(a.vertex, right_map[b.vertex]).map_err(graph_err)?;
                Value {
                    graph,
                    kind: Kind::Bridge {
                        left,
                        right,
                        right_map,
                        bridge,
                    },
                }
            }
            GraphExpr::EGlue(a, b) => {
                let (left, right) = (self.lookup(&a.name)?, self.lookup(&b.name)?);
                let left_edge = edge_of(a).map_err(graph_err)?;
                let right_edge = edge_of(b).map_err(graph_err)?;
                let graph = left
                    .graph
                    .glue_at_edge(&right.graph, left_edge, right_edge)
                    .map_err(graph_err)?;
                Value {
                    graph,
                    kind: Kind::EGlue {
                        left,
                        right,
                        left_edge,
                        right_edge,
                    },
                }
            }
            GraphExpr::Chain(base, m) | GraphExpr::Book(base, m) => {
                let shape = if matches!(expr, GraphExpr::Chain(..)) {
                    Shape::Chain
                } else {
                    Shape::Book
                };
                let base = self.realize(name, base)?;
                let family = match base.kind {
                    Kind::Standard(Family::Complete, n) if n >= 3 => {
                        Some((TreeFamily::Complete, n))
                    }
                    Kind::Standard(Family::Cycle, n) => Some((TreeFamily::Cycle, n)),
                    _ => None,
                };
                let script = e_tree_script(&base.graph, family, shape, *m).map_err(|source| {
                    EvalError::Etree {
                        name: name.to_string(),
                        source,
                    }
                })?;
                let graph =
                    etree::realize_graph(&script, *m).map_err(|source| EvalError::Etree {
                        name: name.to_string(),
                        source,
                    })?;
                Value {
                    graph,
                    kind: Kind::ETree {
                        script,
                        shape,
                        copies: *m,
                        family,
                    },
                }
            }
        };
        Ok(Rc::new(value))
    }

    fn oracle_count(&self, name: &str, g: &LabeledGraph) -> Result<Count, EvalError> {
        self.oracle.count_compositions(g).map_err(|e| match e {
            OracleError::LimitExceeded { n, limit } => EvalError::OracleLimitExceeded {
                name: name.to_string(),
                n,
                limit,
            },
            OracleError::Graph(source) => EvalError::Graph {
                name: name.to_string(),
                source,
            },
        })
    }

    fn oracle_fallback(&self, name: &str, g: &LabeledGraph) -> Fast<Count> {
        if g.vertex_count() > self.oracle.limit() {
            return Err(Miss::Unavailable(format!(
                "{} vertices exceed the oracle limit of {} and no formula applies",
                g.vertex_count(),
                self.oracle.limit()
            )));
        }
        Ok(self.oracle_count(name, g)?)
    }

    /// Count by the structural method of `value`.
    fn fast(&self, name: &str, value: &Value) -> Fast<(Count, Method)> {
        let closed =
            |family, n| formulas::closed_count(family, n).expect("sizes validated on construction");
        Ok(match &value.kind {
            Kind::Standard(family, n) => {
                let c = match family {
                    Family::Complete => closed(ClosedFamily::Complete, *n),
                    Family::Cycle => closed(ClosedFamily::Cycle, *n),
                    Family::Path => closed(ClosedFamily::Tree, *n),
                    Family::Empty => BigUint::one(),
                };
                (c, Method::ClosedForm)
            }
            Kind::Tree => (
                closed(ClosedFamily::Tree, value.graph.edge_count()),
                Method::ClosedForm,
            ),
            Kind::VGlue { left, right, .. } => (
                formulas::vertex_glue_count(&self.count(name, left)?, &self.count(name, right)?),
                Method::Theorem3,
            ),
            Kind::Bridge { left, right, .. } => (
                formulas::bridge_count(&self.count(name, left)?, &self.count(name, right)?),
                Method::Theorem3,
            ),
            Kind::EGlue {
                left,
                right,
                left_edge,
                right_edge,
            } => {
                let c = formulas::edge_glue_count(
                    &self.count(name, left)?,
                    &self.contracted(name, left, *left_edge)?,
                    &self.count(name, right)?,
                    &self.contracted(name, right, *right_edge)?,
                )
                .map_err(|e| Miss::Unavailable(e.to_string()))?;
                (c, Method::Theorem3)
            }
            Kind::ETree {
                script,
                shape,
                copies,
                family,
            } => match etree::run_script(script, *copies) {
                Ok(c) => (c, Method::Theorem4),
                // bases beyond the engine's oracle limit still have the
                // family recurrences
                Err(_) if family.is_some() => {
                    let (f, n) = family.expect("checked");
                    let seq = etree::family_sequence(f, n, *shape, *copies).map_err(|source| {
                        EvalError::Etree {
                            name: name.to_string(),
                            source,
                        }
                    })?;
                    (seq.last().cloned().expect("m >= 1"), Method::ClosedForm)
                }
                Err(e) => return Err(Miss::Unavailable(e.to_string())),
            },
        })
    }

    fn count(&self, name: &str, value: &Value) -> Fast<Count> {
        match self.fast(name, value) {
            Ok((c, _)) => Ok(c),
            Err(Miss::Unavailable(_)) => self.oracle_fallback(name, &value.graph),
            Err(e) => Err(e),
        }
    }

    /// `C(value / k)`.
    fn contracted(&self, name: &str, value: &Value, k: Edge) -> Fast<Count> {
        if !value.graph.has_edge(k) {
            return Err(Miss::Failed(EvalError::Graph {
                name: name.to_string(),
                source: GraphError::EdgeNotPresent(k),
            }));
        }
        let closed =
            |family, n| formulas::closed_count(family, n).expect("contracted family size is valid");
        match &value.kind {
            Kind::Standard(Family::Complete, n) => {
                return Ok(closed(ClosedFamily::Complete, n - 1))
            }
            Kind::Standard(Family::Cycle, n) => {
                // C_n/k = C_{n-1}, and C_3/k = K_2 has 2 = 2^2 - 2 compositions
                return Ok((BigUint::one() << (n - 1)) - BigUint::from(n - 1));
            }
            Kind::Standard(Family::Path, n) => return Ok(closed(ClosedFamily::Tree, n - 1)),
            Kind::Tree => return Ok(closed(ClosedFamily::Tree, value.graph.edge_count() - 1)),
            Kind::VGlue {
                left,
                right,
                right_map,
            } => {
                let nl = left.graph.vertex_count();
                if k.hi() < nl {
                    return Ok(&self.contracted(name, left, k)? * &self.count(name, right)?);
                }
                let local = pull_back(right_map, k);
                return Ok(&self.count(name, left)? * &self.contracted(name, right, local)?);
            }
            Kind::Bridge {
                left,
                right,
                right_map,
                bridge,
            } => {
                if k == *bridge {
                    return Ok(&self.count(name, left)? * &self.count(name, right)?);
                }
                let two = BigUint::from(2u8);
                if k.hi() < left.graph.vertex_count() {
                    return Ok(two * self.contracted(name, left, k)? * self.count(name, right)?);
                }
                let local = pull_back(right_map, k);
                return Ok(two * self.count(name, left)? * self.contracted(name, right, local)?);
            }
            Kind::EGlue {
                left,
                right,
                left_edge,
                right_edge,
            } if k == *left_edge => {
                return Ok(&self.contracted(name, left, *left_edge)?
                    * &self.contracted(name, right, *right_edge)?);
            }
            _ => {}
        }
        let g = value.graph.contract(k).map_err(|source| EvalError::Graph {
            name: name.to_string(),
            source,
        })?;
        self.oracle_fallback(name, &g)
    }

    fn fast_or_oracle(&self, name: &str, value: &Value) -> Result<(Count, Method), EvalError> {
        match self.fast(name, value) {
            Ok(r) => Ok(r),
            Err(Miss::Failed(e)) => Err(e),
            Err(Miss::Unavailable(reason)) => {
                if value.graph.vertex_count() > self.oracle.limit() {
                    Err(EvalError::MethodUnavailable {
                        name: name.to_string(),
                        reason,
                    })
                } else {
                    Ok((self.oracle_count(name, &value.graph)?, Method::Oracle))
                }
            }
        }
    }

    fn sequence(
        &self,
        name: &str,
        value: &Value,
        m: usize,
    ) -> Result<(Vec<Count>, Method), EvalError> {
        let etree_err = |source| EvalError::Etree {
            name: name.to_string(),
            source,
        };
        if let Kind::ETree {
            script,
            shape,
            family,
            ..
        } = &value.kind
        {
            if let Some((f, n)) = family {
                return Ok((
                    etree::family_sequence(*f, n.to_owned(), *shape, m).map_err(etree_err)?,
                    Method::ClosedForm,
                ));
            }
            let longer = e_tree_script(script.base(), None, *shape, m).map_err(etree_err)?;
            return Ok((
                etree::script_sequence(&longer, m).map_err(etree_err)?,
                Method::Theorem4,
            ));
        }
        // any other graph: V-trees of r copies, C(G)^r
        let (c, method) = self.fast_or_oracle(name, value)?;
        let mut seq = Vec::with_capacity(m);
        let mut acc = BigUint::one();
        for _ in 0..m {
            acc *= &c;
            seq.push(acc.clone());
        }
        Ok((seq, method))
    }

    fn run(&self, action: &Action) -> Result<Report, EvalError> {
        let start = Instant::now();
        let name = action.name();
        let value = self.lookup(name)?;
        let mut verdict = None;
        let mut sequence = None;
        let (count, method) = match action {
            Action::Count(_) => self.fast_or_oracle(name, &value)?,
            Action::Oracle(_) => (self.oracle_count(name, &value.graph)?, Method::Oracle),
            Action::Verify(_) => {
                let n = value.graph.vertex_count();
                if n > self.oracle.limit() {
                    return Err(EvalError::OracleLimitExceeded {
                        name: name.to_string(),
                        n,
                        limit: self.oracle.limit(),
                    });
                }
                let (fast, method) = self.fast_or_oracle(name, &value)?;
                let truth = self.oracle_count(name, &value.graph)?;
                verdict = Some(if fast == truth {
                    Verdict::Match
                } else {
                    Verdict::Mismatch
                });
                (fast, method)
            }
            Action::Sequence(_, m) => {
                let (seq, method) = self.sequence(name, &value, *m)?;
                let last = seq.last().cloned().expect("m >= 1");
                sequence = Some(seq);
                (last, method)
            }
        };
        Ok(Report {
            name: name.to_string(),
            method,
            count,
            graph: GraphSummary::of(&value.graph),
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            verdict,
            sequence,
        })
    }
}

fn edge_of(r: &EdgeRef) -> Result<Edge, GraphError> {
    Edge::new(r.u, r.v)
}

/// Labels a right operand receives when `fixed` of its vertices are
/// identified with left vertices; mirrors the graph module's convention.
fn attach_labels(left_n: usize, right_n: usize, fixed: &[(usize, usize)]) -> Vec<usize> {
    let mut map = vec![usize::MAX; right_n];
    for &(theirs, ours) in fixed {
        map[theirs] = ours;
    }
    let mut next = left_n;
    for slot in &mut map {
        if *slot == usize::MAX {
            *slot = next;
            next += 1;
        }
    }
    map
}

fn pull_back(map: &[usize], k: Edge) -> Edge {
    let find = |x| {
        map.iter()
            .position(|&y| y == x)
            .expect("edge of the right operand")
    };
    Edge::new(find(k.lo()), find(k.hi())).expect("distinct preimages")
}

/// The E-tree script behind `chain(...)` / `book(...)`. Standard complete and
/// cycle bases use the canonical fresh edge; any other base uses its last
/// edge in canonical order.
fn e_tree_script(
    base: &LabeledGraph,
    family: Option<(TreeFamily, usize)>,
    shape: Shape,
    m: usize,
) -> Result<AttachmentScript, EtreeError> {
    let edge = match family {
        Some((f, n)) => etree::canonical_fresh_edge(f, n)?,
        None => *base
            .edges()
            .last()
            .ok_or_else(|| EtreeError::InvalidScript("base graph has no edges".into()))?,
    };
    match shape {
        Shape::Chain => AttachmentScript::chain(base.clone(), edge, m),
        Shape::Book => AttachmentScript::book(base.clone(), edge, m),
    }
}

/// Evaluates every action, in program order.
pub fn evaluate(plan: &Plan, options: &EvalOptions) -> Result<Vec<Report>, EvalError> {
    let mut env = Env {
        values: HashMap::new(),
        oracle: Oracle::with_limit(options.max_oracle_vertices),
    };
    for b in &plan.bindings {
        let v = env.realize(&b.name, &b.expr)?;
        env.values.insert(b.name.clone(), v);
    }
    let mut reports = Vec::with_capacity(plan.actions.len());
    for action in &plan.actions {
        let mut r = env.run(action)?;
        if !options.timing {
            r.elapsed_ms = 0.0;
        }
        reports.push(r);
    }
    Ok(reports)
}
