#![allow(dead_code)]

use graphcomp::{Edge, LabeledGraph};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected graph: a random spanning tree plus each remaining pair
/// with a probability drawn from `0..max_density`.
pub fn random_connected(rng: &mut StdRng, n: usize, max_density: f64) -> LabeledGraph {
    let density = rng.gen_range(0.0..max_density);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent, order[i]));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    LabeledGraph::from_edges(n, edges).unwrap()
}

/// Random graph with independent edges, possibly disconnected.
pub fn random_graph(rng: &mut StdRng, n: usize, density: f64) -> LabeledGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    LabeledGraph::from_edges(n, edges).unwrap()
}

pub fn random_edge(rng: &mut StdRng, g: &LabeledGraph) -> Edge {
    *g.edges().choose(rng).unwrap()
}

pub fn random_parents(rng: &mut StdRng, vertices: usize) -> Vec<usize> {
    (0..vertices)
        .map(|i| if i == 0 { 0 } else { rng.gen_range(0..i) })
        .collect()
}
