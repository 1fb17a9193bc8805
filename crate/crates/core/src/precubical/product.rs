use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::base_cats::Label;

use super::{CellSpec, PrecubicalSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Coord {
    Vertex(usize),
    Edge(usize),
}

/// The product of labelled chains. Chain `c` with edges `e_1..e_m` has vertices
/// `0..=m`, edge `e_k` running from `k-1` to `k`.
///
/// A cell is a tuple with one vertex or edge per chain, named by joining the
/// coordinates with `_`: a vertex by its number, an edge by its label (suffixed
/// with its position when the label repeats within the chain).
pub fn product_of_chains(chains: &[Vec<Label>]) -> PrecubicalSet {
    let token = |c: usize, coord: Coord| match coord {
        Coord::Vertex(v) => v.to_string(),
        Coord::Edge(k) => {
            let label = &chains[c][k - 1];
            if chains[c].iter().filter(|l| *l == label).count() > 1 {
                format!("{label}{k}")
            } else {
                label.to_string()
            }
        }
    };
    let name = |tuple: &[Coord]| tuple.iter().enumerate().map(|(c, &t)| token(c, t)).join("_");

    let axes: Vec<Vec<Coord>> = chains
        .iter()
        .map(|chain| (0..=chain.len()).map(Coord::Vertex).chain((1..=chain.len()).map(Coord::Edge)).collect())
        .collect();
    let mut tuples: Vec<Vec<Coord>> =
        if chains.is_empty() { vec![Vec::new()] } else { axes.into_iter().multi_cartesian_product().collect() };
    let dim = |t: &[Coord]| t.iter().filter(|c| matches!(c, Coord::Edge(_))).count();
    tuples.sort_by_key(|t| dim(t));

    let mut names = HashMap::new();
    let specs = tuples
        .iter()
        .map(|t| {
            let id = name(t);
            names.insert(t.clone(), id.clone());
            let edges: Vec<usize> = (0..t.len()).filter(|&c| matches!(t[c], Coord::Edge(_))).collect();
            let labels = edges
                .iter()
                .map(|&c| match t[c] {
                    Coord::Edge(k) => chains[c][k - 1].clone(),
                    Coord::Vertex(_) => unreachable!(),
                })
                .collect();
            let face = |c: usize, end: bool| {
                let mut f = t.clone();
                if let Coord::Edge(k) = t[c] {
                    f[c] = Coord::Vertex(if end { k } else { k - 1 });
                }
                name(&f)
            };
            CellSpec {
                id,
                labels,
                d0: edges.iter().map(|&c| face(c, false)).collect(),
                d1: edges.iter().map(|&c| face(c, true)).collect(),
            }
        })
        .collect();
    let alphabet: BTreeSet<Label> = chains.iter().flatten().cloned().collect();
    PrecubicalSet::from_specs(alphabet, specs).expect("product cells are well formed")
}
