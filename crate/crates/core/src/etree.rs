//! E-trees of copies of one base graph.
//!
//! Copy `r + 1` is glued onto the current tree `T_r` along the shared edge
//! `k_r`. The edge of the new copy that receives `k_r` is always the base
//! graph's first edge in canonical order (its *receiving edge*). The next
//! shared edge `k_{r+1}` is either `k_r` again or an edge of the newest copy,
//! given in the base graph's labels.
//!
//! [`run_script`] folds the two-term dynamic program over
//! `(C(T_r), C(T_r/k_r))`; [`realize_graph`] builds the same graph explicitly
//! so the two can be compared with the oracle.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use thiserror::Error;

use crate::formulas::{self, FormulaError, TreeFamily};
use crate::graph::{make_standard, Edge, Family, GraphError, LabeledGraph};
use crate::oracle::{Oracle, OracleError};
use crate::Count;

/// Largest base graph the dynamic program accepts; its counts come from the
/// oracle. Larger bases can still be realized.
pub const BASE_VERTEX_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtreeError {
    #[error("invalid script: {0}")]
    InvalidScript(String),
    #[error("invalid attachment edge {0}: not an edge of the base graph")]
    InvalidAttachmentEdge(Edge),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

impl From<GraphError> for EtreeError {
    fn from(e: GraphError) -> Self {
        EtreeError::Oracle(OracleError::Graph(e))
    }
}

/// Where the next copy attaches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attach {
    /// Reuse the edge the newest copy was glued on.
    SameAsPrevious,
    /// An edge of the newest copy, in base-graph labels.
    Edge(Edge),
}

impl fmt::Display for Attach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attach::SameAsPrevious => f.write_str("same"),
            Attach::Edge(e) => write!(f, "{e}"),
        }
    }
}

/// Chain (always a fresh edge) or book (one common edge).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Chain,
    Book,
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Chain => "chain",
            Shape::Book => "book",
        }
    }
}

/// Base graph plus the attachment sequence `k_1, k_2, ...`.
///
/// `attach[0]` is the edge of copy 1 where copy 2 attaches; `attach[r]` says
/// where copy `r + 2` attaches relative to copy `r + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachmentScript {
    base: LabeledGraph,
    attach: Vec<Attach>,
}

impl AttachmentScript {
    pub fn new(base: LabeledGraph, attach: Vec<Attach>) -> Result<Self, EtreeError> {
        if base.edge_count() == 0 {
            return Err(EtreeError::InvalidScript("base graph has no edges".into()));
        }
        if !base.is_connected() {
            return Err(EtreeError::InvalidScript(
                "base graph is not connected".into(),
            ));
        }
        match attach.first() {
            None => return Err(EtreeError::InvalidScript("empty attachment list".into())),
            Some(Attach::SameAsPrevious) => {
                return Err(EtreeError::InvalidScript(
                    "first attachment cannot reuse a previous edge".into(),
                ))
            }
            Some(Attach::Edge(_)) => {}
        }
        for a in &attach {
            if let Attach::Edge(e) = a {
                if !base.has_edge(*e) {
                    return Err(EtreeError::InvalidAttachmentEdge(*e));
                }
            }
        }
        Ok(AttachmentScript { base, attach })
    }

    /// `m` copies, each attaching the next along `fresh` of the newest copy.
    pub fn chain(base: LabeledGraph, fresh: Edge, m: usize) -> Result<Self, EtreeError> {
        Self::new(base, vec![Attach::Edge(fresh); m.max(2) - 1])
    }

    /// `m` copies sharing the edge `spine` of the first copy.
    pub fn book(base: LabeledGraph, spine: Edge, m: usize) -> Result<Self, EtreeError> {
        let mut attach = vec![Attach::SameAsPrevious; m.max(2) - 1];
        attach[0] = Attach::Edge(spine);
        Self::new(base, attach)
    }

    /// The canonical chain or book of `m` copies of `K_n` or `C_n`.
    pub fn canonical(
        family: TreeFamily,
        n: usize,
        shape: Shape,
        m: usize,
    ) -> Result<Self, EtreeError> {
        let base = match family {
            TreeFamily::Complete => make_standard(Family::Complete, n)?,
            TreeFamily::Cycle => make_standard(Family::Cycle, n)?,
        };
        let edge = canonical_fresh_edge(family, n)?;
        match shape {
            Shape::Chain => Self::chain(base, edge, m),
            Shape::Book => Self::book(base, edge, m),
        }
    }

    pub fn base(&self) -> &LabeledGraph {
        &self.base
    }

    pub fn attachments(&self) -> &[Attach] {
        &self.attach
    }

    /// Edge of each new copy glued onto the previous shared edge.
    pub fn receiving_edge(&self) -> Edge {
        self.base.edges()[0]
    }

    /// Largest `m` this script describes.
    pub fn max_copies(&self) -> usize {
        self.attach.len() + 1
    }

    fn check_copies(&self, m: usize) -> Result<(), EtreeError> {
        if m == 0 || m > self.max_copies() {
            return Err(EtreeError::InvalidScript(format!(
                "m = {m} outside 1..={}",
                self.max_copies()
            )));
        }
        Ok(())
    }
}

/// Fresh attachment edge used by canonical chains: `(1,2)` for `K_3`, `(2,3)`
/// for larger complete graphs, `(n/2, n/2 + 1)` for `C_n`.
pub fn canonical_fresh_edge(family: TreeFamily, n: usize) -> Result<Edge, EtreeError> {
    if n < 3 {
        return Err(FormulaError::InvalidFamilySize {
            family: family.name(),
            min: 3,
            n,
        }
        .into());
    }
    let (a, b) = match family {
        TreeFamily::Complete if n == 3 => (1, 2),
        TreeFamily::Complete => (2, 3),
        TreeFamily::Cycle => (n / 2, n / 2 + 1),
    };
    Ok(Edge::new(a, b)?)
}

/// `(C(T_r), C(T_r/k_r))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtreeState {
    pub c: Count,
    pub c_k: Count,
}

/// Counts of the base graph and of the contractions the step needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseEdgeData {
    receiving: Edge,
    c_g: Count,
    // C(G/k) per edge
    c_g_k: BTreeMap<Edge, Count>,
    // C(G/k'/receiving) per edge k' != receiving
    c_g_kk: BTreeMap<Edge, Count>,
}

impl BaseEdgeData {
    /// Oracle counts for `base` and every contraction along `edges` (the
    /// receiving edge, the base's first edge, is always included).
    pub fn compute<I>(base: &LabeledGraph, edges: I, oracle: &Oracle) -> Result<Self, EtreeError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let receiving = *base
            .edges()
            .first()
            .ok_or_else(|| EtreeError::InvalidScript("base graph has no edges".into()))?;
        let mut data = BaseEdgeData {
            receiving,
            c_g: oracle.count_compositions(base)?,
            c_g_k: BTreeMap::new(),
            c_g_kk: BTreeMap::new(),
        };
        for k in std::iter::once(receiving).chain(edges) {
            if data.c_g_k.contains_key(&k) {
                continue;
            }
            let (contracted, map) = base
                .contract_with_map(k)
                .map_err(|_| EtreeError::InvalidAttachmentEdge(k))?;
            data.c_g_k
                .insert(k, oracle.count_compositions(&contracted)?);
            if k != receiving {
                let image = Edge::new(map[receiving.lo()], map[receiving.hi()])?;
                let twice = contracted.contract(image)?;
                data.c_g_kk.insert(k, oracle.count_compositions(&twice)?);
            }
        }
        Ok(data)
    }

    /// All edges of the base graph.
    pub fn for_all_edges(base: &LabeledGraph, oracle: &Oracle) -> Result<Self, EtreeError> {
        Self::compute(base, base.edges().to_vec(), oracle)
    }

    pub fn receiving_edge(&self) -> Edge {
        self.receiving
    }

    pub fn base_count(&self) -> &Count {
        &self.c_g
    }

    pub fn contracted_count(&self, k: Edge) -> Option<&Count> {
        self.c_g_k.get(&k)
    }
}

/// One step of the dynamic program: glue a new copy along `k_r` and move
/// the shared edge to `next`.
pub fn theorem4_step(
    state: &EtreeState,
    data: &BaseEdgeData,
    next: Attach,
) -> Result<EtreeState, EtreeError> {
    let c = BigInt::from_biguint(Sign::Plus, state.c.clone());
    let c_k = BigInt::from_biguint(Sign::Plus, state.c_k.clone());
    let g = BigInt::from_biguint(Sign::Plus, data.c_g.clone());
    let g_k = BigInt::from_biguint(Sign::Plus, data.c_g_k[&data.receiving].clone());

    let new_c = (&g - &g_k) * &c + (BigInt::from(2) * &g_k - &g) * &c_k;
    let new_c_k = match next {
        Attach::Edge(e) if e != data.receiving => {
            let g_e = data
                .c_g_k
                .get(&e)
                .ok_or(EtreeError::InvalidAttachmentEdge(e))?;
            let g_ek = &data.c_g_kk[&e];
            let g_e = BigInt::from_biguint(Sign::Plus, g_e.clone());
            let g_ek = BigInt::from_biguint(Sign::Plus, g_ek.clone());
            (BigInt::from(2) * &g_ek - &g_e) * &c_k + (&g_e - &g_ek) * &c
        }
        _ => &g_k * &c_k,
    };
    let to_count = |v: BigInt| {
        v.to_biguint()
            .ok_or_else(|| EtreeError::InvalidScript("step produced a negative count".into()))
    };
    let next_state = EtreeState {
        c: to_count(new_c)?,
        c_k: to_count(new_c_k)?,
    };
    debug_assert!(next_state.c_k <= next_state.c);
    Ok(next_state)
}

/// `C(T_m)` by the dynamic program, base counts from the default oracle.
pub fn run_script(script: &AttachmentScript, m: usize) -> Result<Count, EtreeError> {
    run_script_with(script, m, &Oracle::with_limit(BASE_VERTEX_LIMIT))
}

pub fn run_script_with(
    script: &AttachmentScript,
    m: usize,
    oracle: &Oracle,
) -> Result<Count, EtreeError> {
    Ok(script_states(script, m, oracle)?.pop().expect("m >= 1").c)
}

/// `[C(T_1), ..., C(T_m)]` by the dynamic program.
pub fn script_sequence(script: &AttachmentScript, m: usize) -> Result<Vec<Count>, EtreeError> {
    let states = script_states(script, m, &Oracle::with_limit(BASE_VERTEX_LIMIT))?;
    Ok(states.into_iter().map(|s| s.c).collect())
}

/// States `(C(T_r), C(T_r/k_r))` for `r = 1..=m`. The last state's second
/// entry refers to `k_m` when the script names one, else to `k_{m-1}`.
pub fn script_states(
    script: &AttachmentScript,
    m: usize,
    oracle: &Oracle,
) -> Result<Vec<EtreeState>, EtreeError> {
    script.check_copies(m)?;
    if script.base.vertex_count() > BASE_VERTEX_LIMIT {
        return Err(EtreeError::InvalidScript(format!(
            "base graph has {} vertices, limit is {BASE_VERTEX_LIMIT}",
            script.base.vertex_count()
        )));
    }
    let edges = script.attach.iter().filter_map(|a| match a {
        Attach::Edge(e) => Some(*e),
        Attach::SameAsPrevious => None,
    });
    let data = BaseEdgeData::compute(&script.base, edges, oracle)?;
    let Attach::Edge(first) = script.attach[0] else {
        unreachable!("validated on construction")
    };
    let mut state = EtreeState {
        c: data.c_g.clone(),
        c_k: data.c_g_k[&first].clone(),
    };
    let mut out = Vec::with_capacity(m);
    for r in 1..m {
        let next = script
            .attach
            .get(r)
            .copied()
            .unwrap_or(Attach::SameAsPrevious);
        let following = theorem4_step(&state, &data, next)?;
        out.push(std::mem::replace(&mut state, following));
    }
    out.push(state);
    Ok(out)
}

/// The E-tree of `m` copies as an explicit graph, plus the shared edge where
/// the next copy would attach.
pub fn realize_with_edge(
    script: &AttachmentScript,
    m: usize,
) -> Result<(LabeledGraph, Edge), EtreeError> {
    script.check_copies(m)?;
    let receiving = script.receiving_edge();
    let Attach::Edge(mut shared) = script.attach[0] else {
        unreachable!("validated on construction")
    };
    let mut tree = script.base.clone();
    for r in 1..m {
        let (glued, map) = tree.glue_at_edge_with_map(&script.base, shared, receiving)?;
        tree = glued;
        if let Some(Attach::Edge(e)) = script.attach.get(r) {
            if *e != receiving {
                shared = Edge::new(map[e.lo()], map[e.hi()])?;
            }
        }
    }
    Ok((tree, shared))
}

/// The E-tree of `m` copies as an explicit graph.
pub fn realize_graph(script: &AttachmentScript, m: usize) -> Result<LabeledGraph, EtreeError> {
    Ok(realize_with_edge(script, m)?.0)
}

/// `[C(T_1), ..., C(T_m)]` for the canonical chain or book of `K_n` or
/// `C_n`, from the closed recurrences.
pub fn family_sequence(
    family: TreeFamily,
    n: usize,
    shape: Shape,
    m: usize,
) -> Result<Vec<Count>, EtreeError> {
    if m == 0 {
        return Err(EtreeError::InvalidScript("m must be at least 1".into()));
    }
    Ok(match shape {
        Shape::Chain => formulas::chain_sequence(family, n, m)?,
        Shape::Book => formulas::book_sequence(family, n, m)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{count_compositions, count_together};
    use num_bigint::BigUint;

    fn c(v: u64) -> Count {
        BigUint::from(v)
    }

    fn e(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn k3() -> LabeledGraph {
        make_standard(Family::Complete, 3).unwrap()
    }

    #[test]
    fn step_examples() {
        let data = BaseEdgeData::for_all_edges(&k3(), &Oracle::default()).unwrap();
        let start = EtreeState { c: c(5), c_k: c(2) };

        // oracle on the two-triangle book, and on its contraction along the
        // shared edge
        let book = k3().glue_at_edge(&k3(), e(0, 1), e(0, 1)).unwrap();
        assert_eq!(count_compositions(&book).unwrap(), c(13));
        assert_eq!(count_together(&book, &[0, 1]).unwrap(), c(4));
        let same = theorem4_step(&start, &data, Attach::SameAsPrevious).unwrap();
        assert_eq!(
            same,
            EtreeState {
                c: c(13),
                c_k: c(4)
            }
        );

        // free edge (1,3) of the new copy
        assert_eq!(count_together(&book, &[1, 3]).unwrap(), c(5));
        let fresh = theorem4_step(&start, &data, Attach::Edge(e(1, 2))).unwrap();
        assert_eq!(
            fresh,
            EtreeState {
                c: c(13),
                c_k: c(5)
            }
        );

        let k2 = make_standard(Family::Complete, 2).unwrap();
        let bare = BaseEdgeData::for_all_edges(&k2, &Oracle::default()).unwrap();
        let any = EtreeState {
            c: c(77),
            c_k: c(31),
        };
        assert_eq!(
            theorem4_step(&any, &bare, Attach::SameAsPrevious).unwrap(),
            any
        );

        assert_eq!(
            theorem4_step(&start, &data, Attach::Edge(e(0, 7))),
            Err(EtreeError::InvalidAttachmentEdge(e(0, 7)))
        );
    }

    #[test]
    fn scripts() {
        let chain = AttachmentScript::canonical(TreeFamily::Complete, 3, Shape::Chain, 3).unwrap();
        assert_eq!(run_script(&chain, 3).unwrap(), c(34));
        let book = AttachmentScript::canonical(TreeFamily::Complete, 3, Shape::Book, 3).unwrap();
        assert_eq!(run_script(&book, 3).unwrap(), c(35));
        let ladder = AttachmentScript::canonical(TreeFamily::Cycle, 4, Shape::Chain, 2).unwrap();
        assert_eq!(run_script(&ladder, 2).unwrap(), c(74));
        assert_eq!(run_script(&ladder, 1).unwrap(), c(12));
        assert!(run_script(&ladder, 3).is_err());
        assert!(run_script(&ladder, 0).is_err());
    }

    #[test]
    fn realization_shapes() {
        let ladder = AttachmentScript::canonical(TreeFamily::Cycle, 4, Shape::Chain, 2).unwrap();
        let g = realize_graph(&ladder, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));

        let book = AttachmentScript::canonical(TreeFamily::Complete, 3, Shape::Book, 3).unwrap();
        let g = realize_graph(&book, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 7));
        let spine = e(1, 2);
        assert!(g.has_edge(spine));
        for v in [0, 3, 4] {
            assert!(g.has_edge(e(v, 1)) && g.has_edge(e(v, 2)));
        }

        assert_eq!(realize_graph(&book, 1).unwrap(), k3());
    }

    #[test]
    fn script_validation() {
        let k3 = k3();
        assert!(matches!(
            AttachmentScript::new(k3.clone(), vec![Attach::SameAsPrevious]),
            Err(EtreeError::InvalidScript(_))
        ));
        assert!(matches!(
            AttachmentScript::new(k3.clone(), vec![]),
            Err(EtreeError::InvalidScript(_))
        ));
        assert_eq!(
            AttachmentScript::new(
                k3.clone(),
                vec![Attach::Edge(e(0, 1)), Attach::Edge(e(2, 5))]
            ),
            Err(EtreeError::InvalidAttachmentEdge(e(2, 5)))
        );
        assert!(
            AttachmentScript::new(LabeledGraph::empty(3), vec![Attach::Edge(e(0, 1))]).is_err()
        );
        let split = LabeledGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(AttachmentScript::chain(split, e(2, 3), 2).is_err());
        let big = make_standard(Family::Cycle, 13).unwrap();
        let script = AttachmentScript::chain(big, e(6, 7), 2).unwrap();
        assert_eq!(realize_graph(&script, 2).unwrap().vertex_count(), 24);
        assert!(matches!(
            run_script(&script, 2),
            Err(EtreeError::InvalidScript(_))
        ));
    }

    #[test]
    fn canonical_edges() {
        assert_eq!(
            canonical_fresh_edge(TreeFamily::Complete, 3).unwrap(),
            e(1, 2)
        );
        assert_eq!(
            canonical_fresh_edge(TreeFamily::Complete, 6).unwrap(),
            e(2, 3)
        );
        assert_eq!(canonical_fresh_edge(TreeFamily::Cycle, 4).unwrap(), e(2, 3));
        assert_eq!(canonical_fresh_edge(TreeFamily::Cycle, 5).unwrap(), e(2, 3));
        assert_eq!(canonical_fresh_edge(TreeFamily::Cycle, 7).unwrap(), e(3, 4));
        assert!(canonical_fresh_edge(TreeFamily::Cycle, 2).is_err());
    }

    #[test]
    fn family_sequences() {
        assert_eq!(
            family_sequence(TreeFamily::Cycle, 4, Shape::Chain, 3).unwrap(),
            vec![c(12), c(74), c(456)]
        );
        assert_eq!(
            family_sequence(TreeFamily::Complete, 3, Shape::Chain, 4).unwrap(),
            vec![c(5), c(13), c(34), c(89)]
        );
        assert_eq!(
            family_sequence(TreeFamily::Complete, 3, Shape::Book, 3).unwrap(),
            vec![c(5), c(13), c(35)]
        );
        assert!(family_sequence(TreeFamily::Complete, 3, Shape::Book, 0).is_err());
    }
}
